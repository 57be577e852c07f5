//! Real wave vectors and complex 3-vector field amplitudes.
//!
//! Two dot products exist on purpose: [`ComplexVec3::dot`] is the formal
//! (unconjugated) product used by the bracket machinery, while
//! [`ComplexVec3::dot_conj`] conjugates its second argument and feeds the
//! modulus-style quantities. Cross products act componentwise over the
//! complex entries.

use num_complex::Complex64;
use std::ops::{Add, Index, Mul, Neg, Sub};

/// A real wavenumber vector (inverse length, natural units with c = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl WaveVector {
    pub const ZERO: WaveVector = WaveVector { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        WaveVector { x, y, z }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// The zero mode is permitted and treated specially by projections and
    /// propagators.
    pub fn is_zero(&self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit direction; `None` for the zero mode.
    pub fn unit(&self) -> Option<WaveVector> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(WaveVector::new(self.x / n, self.y / n, self.z / n))
        }
    }

    pub fn component(&self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("axis out of range: {axis}"),
        }
    }

    /// k · v over a complex vector, without conjugation.
    pub fn dot_c(&self, v: &ComplexVec3) -> Complex64 {
        v[0] * self.x + v[1] * self.y + v[2] * self.z
    }

    /// k × v with a complex vector.
    pub fn cross_c(&self, v: &ComplexVec3) -> ComplexVec3 {
        ComplexVec3::new(
            v[2] * self.y - v[1] * self.z,
            v[0] * self.z - v[2] * self.x,
            v[1] * self.x - v[0] * self.y,
        )
    }

    pub fn to_complex(&self) -> ComplexVec3 {
        ComplexVec3::new(self.x.into(), self.y.into(), self.z.into())
    }

    pub fn scaled(&self, s: f64) -> WaveVector {
        WaveVector::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for WaveVector {
    type Output = WaveVector;
    fn neg(self) -> WaveVector {
        WaveVector::new(-self.x, -self.y, -self.z)
    }
}

/// A complex 3-vector amplitude (one field at one mode).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVec3(pub [Complex64; 3]);

impl ComplexVec3 {
    pub const ZERO: ComplexVec3 = ComplexVec3([Complex64::new(0.0, 0.0); 3]);

    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        ComplexVec3([x, y, z])
    }

    /// Build from real components.
    pub fn from_real(x: f64, y: f64, z: f64) -> Self {
        ComplexVec3([x.into(), y.into(), z.into()])
    }

    /// Formal dot product Σ aᵢbᵢ — no conjugation.
    pub fn dot(&self, other: &ComplexVec3) -> Complex64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    /// Conjugated dot product Σ aᵢ conj(bᵢ).
    pub fn dot_conj(&self, other: &ComplexVec3) -> Complex64 {
        self.0[0] * other.0[0].conj() + self.0[1] * other.0[1].conj() + self.0[2] * other.0[2].conj()
    }

    /// Componentwise complex cross product.
    pub fn cross(&self, other: &ComplexVec3) -> ComplexVec3 {
        let a = &self.0;
        let b = &other.0;
        ComplexVec3::new(
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
    }

    pub fn conj(&self) -> ComplexVec3 {
        ComplexVec3([self.0[0].conj(), self.0[1].conj(), self.0[2].conj()])
    }

    /// Σ |aᵢ|² — always real and nonnegative.
    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr() + self.0[2].norm_sqr()
    }

    /// Largest component modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scaled_re(&self, s: f64) -> ComplexVec3 {
        ComplexVec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn component(&self, axis: usize) -> Complex64 {
        self.0[axis]
    }

    pub fn with_component(mut self, axis: usize, value: Complex64) -> ComplexVec3 {
        self.0[axis] = value;
        self
    }
}

impl Index<usize> for ComplexVec3 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Add for ComplexVec3 {
    type Output = ComplexVec3;
    fn add(self, o: ComplexVec3) -> ComplexVec3 {
        ComplexVec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for ComplexVec3 {
    type Output = ComplexVec3;
    fn sub(self, o: ComplexVec3) -> ComplexVec3 {
        ComplexVec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for ComplexVec3 {
    type Output = ComplexVec3;
    fn neg(self) -> ComplexVec3 {
        ComplexVec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<Complex64> for ComplexVec3 {
    type Output = ComplexVec3;
    fn mul(self, s: Complex64) -> ComplexVec3 {
        ComplexVec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    const I: C64 = C64::new(0.0, 1.0);

    #[test]
    fn formal_dot_does_not_conjugate() {
        let a = ComplexVec3::new(I, C64::from(0.0), C64::from(0.0));
        assert_eq!(a.dot(&a), C64::from(-1.0));
        assert_eq!(a.dot_conj(&a), C64::from(1.0));
    }

    #[test]
    fn cross_matches_real_case() {
        let x = ComplexVec3::from_real(1.0, 0.0, 0.0);
        let y = ComplexVec3::from_real(0.0, 1.0, 0.0);
        assert_eq!(x.cross(&y), ComplexVec3::from_real(0.0, 0.0, 1.0));
        assert_eq!(y.cross(&x), ComplexVec3::from_real(0.0, 0.0, -1.0));
    }

    #[test]
    fn wavevector_cross_agrees_with_complexified_cross() {
        let k = WaveVector::new(0.3, -1.2, 2.5);
        let v = ComplexVec3::new(C64::new(1.0, 2.0), C64::new(-0.5, 0.25), C64::new(0.0, -3.0));
        let direct = k.cross_c(&v);
        let lifted = k.to_complex().cross(&v);
        for i in 0..3 {
            assert_eq!(direct[i], lifted[i]);
        }
    }

    #[test]
    fn scalar_triple_product_with_repeated_vector_is_tiny() {
        let k = WaveVector::new(1.0, 2.0, 3.0);
        let v = ComplexVec3::new(C64::new(0.1, 0.7), C64::new(-2.0, 0.3), C64::new(0.9, -0.4));
        let t = k.dot_c(&k.cross_c(&v));
        assert!(t.norm() < 1e-14);
    }

    #[test]
    fn zero_mode_detection() {
        assert!(WaveVector::ZERO.is_zero());
        assert!(!WaveVector::new(0.0, 0.0, 1e-300).is_zero());
        assert!(WaveVector::ZERO.unit().is_none());
    }
}
