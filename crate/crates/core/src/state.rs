//! Spectral phase space: mode sets, complex field amplitudes, hermitian
//! (reality) symmetry, and gauss-law constraint bookkeeping.
//!
//! A [`SpectralState`] is an immutable value: every operation returns a new
//! state or a report. The charge constraint `c(k)` is recorded per mode at
//! ingestion as `k·E(k)` (or declared by an initial-condition generator) and
//! is never mutated by evolution.

use crate::error::{Error, Result};
use crate::reduce::max_magnitude;
use crate::vec3::{ComplexVec3, WaveVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::TAU;

/// Periodic rectangular grid: mode counts per axis and box lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
}

impl GridDescriptor {
    /// Cubic grid with side `n` over a box of length `l` per axis.
    pub fn cubic(n: usize, l: f64) -> Self {
        GridDescriptor { nx: n, ny: n, nz: n, lx: l, ly: l, lz: l }
    }

    pub fn n_modes(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    /// Canonical linearization, z fastest.
    pub fn index_of(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.ny + iy) * self.nz + iz
    }

    pub fn coords_of(&self, index: usize) -> (usize, usize, usize) {
        let iz = index % self.nz;
        let iy = (index / self.nz) % self.ny;
        let ix = index / (self.nz * self.ny);
        (ix, iy, iz)
    }

    /// Signed integer frequency for axis position `i` out of `n`.
    pub fn signed_freq(i: usize, n: usize) -> i64 {
        if i < n.div_ceil(2) {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Axis position holding the given signed frequency, if representable.
    pub fn index_of_freq(freq: i64, n: usize) -> Option<usize> {
        let n = n as i64;
        let max_pos = (n - 1) / 2;
        let min_neg = -(n / 2);
        if freq >= 0 && freq <= max_pos {
            Some(freq as usize)
        } else if freq < 0 && freq >= min_neg {
            Some((freq + n) as usize)
        } else {
            None
        }
    }

    /// True when `i` is the sign-ambiguous plane of an even axis.
    pub fn is_nyquist_axis(i: usize, n: usize) -> bool {
        n % 2 == 0 && i == n / 2
    }

    /// Whether any coordinate of the mode sits on a nyquist plane.
    pub fn on_nyquist_plane(&self, index: usize) -> bool {
        let (ix, iy, iz) = self.coords_of(index);
        Self::is_nyquist_axis(ix, self.nx)
            || Self::is_nyquist_axis(iy, self.ny)
            || Self::is_nyquist_axis(iz, self.nz)
    }

    /// Wave vector of the mode at a linear index: k = 2π n / L per axis.
    pub fn wave_vector(&self, index: usize) -> WaveVector {
        let (ix, iy, iz) = self.coords_of(index);
        WaveVector::new(
            TAU * Self::signed_freq(ix, self.nx) as f64 / self.lx,
            TAU * Self::signed_freq(iy, self.ny) as f64 / self.ly,
            TAU * Self::signed_freq(iz, self.nz) as f64 / self.lz,
        )
    }

    /// Index of the mode whose integer coordinates are the componentwise
    /// negation modulo grid size. Involutive.
    pub fn pair_index(&self, index: usize) -> usize {
        let (ix, iy, iz) = self.coords_of(index);
        self.index_of(
            (self.nx - ix) % self.nx,
            (self.ny - iy) % self.ny,
            (self.nz - iz) % self.nz,
        )
    }

    /// Largest |k| component magnitude representable on the grid.
    pub fn k_max(&self) -> f64 {
        let mx = (0..self.nx).map(|i| (TAU * Self::signed_freq(i, self.nx) as f64 / self.lx).abs());
        let my = (0..self.ny).map(|i| (TAU * Self::signed_freq(i, self.ny) as f64 / self.ly).abs());
        let mz = (0..self.nz).map(|i| (TAU * Self::signed_freq(i, self.nz) as f64 / self.lz).abs());
        let ax = max_magnitude(mx);
        let ay = max_magnitude(my);
        let az = max_magnitude(mz);
        (ax * ax + ay * ay + az * az).sqrt()
    }

    fn check(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 || self.nz == 0 {
            return Err(Error::BadParameter("grid dimensions must be positive".into()));
        }
        if !(self.lx > 0.0 && self.ly > 0.0 && self.lz > 0.0) {
            return Err(Error::BadParameter("grid lengths must be positive".into()));
        }
        Ok(())
    }
}

/// One spectral mode: wave vector, field amplitudes, quadrature weight, and
/// the frozen charge-constraint value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: WaveVector,
    pub e: ComplexVec3,
    pub b: ComplexVec3,
    pub w: f64,
    /// Frozen gauss-law value: validate checks k·E against this, evolution
    /// never touches it.
    pub c: Complex64,
    /// Index of the mode at −k, when reality pairing is declared.
    pub hermitian_partner: Option<usize>,
}

impl Mode {
    pub fn new(k: WaveVector, e: ComplexVec3, b: ComplexVec3, w: f64, c: Complex64) -> Self {
        Mode { k, e, b, w, c, hermitian_partner: None }
    }

    /// Mode with the constraint value frozen from the supplied fields.
    pub fn ingested(k: WaveVector, e: ComplexVec3, b: ComplexVec3, w: f64) -> Self {
        let c = k.dot_c(&e);
        Mode::new(k, e, b, w, c)
    }

    /// |E|² + |B|² at this mode.
    pub fn energy(&self) -> f64 {
        self.e.norm_sqr() + self.b.norm_sqr()
    }
}

/// Which invariant class a validation entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// |k·E − c(k)| exceeded tolerance.
    GaussE,
    /// |k·B| exceeded tolerance.
    GaussB,
    /// Reality pairing violated: E(−k) ≠ conj(E(k)) or a self-paired mode
    /// has an imaginary part.
    Hermitian,
    /// Structural defect: non-finite data, non-positive weight, or an
    /// inconsistent partner declaration.
    Structure,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub constraint: Constraint,
    pub mode: usize,
    pub magnitude: f64,
}

/// Result of [`SpectralState::validate`]. `violations` lists entries above
/// tolerance; the per-class maxima are always recorded, which is what the
/// trajectory diagnostics sample every step.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub max_gauss_e: f64,
    pub max_gauss_b: f64,
    pub max_hermitian: f64,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// Largest gauss-law violation over both field constraints.
    pub fn max_gauss(&self) -> f64 {
        self.max_gauss_e.max(self.max_gauss_b)
    }

    pub fn max_of(&self, class: Constraint) -> f64 {
        self.violations
            .iter()
            .filter(|v| v.constraint == class)
            .map(|v| v.magnitude)
            .fold(0.0, f64::max)
    }
}

/// The full field configuration: an ordered finite mode set with per-mode
/// constraint values, optionally tied to a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    modes: Vec<Mode>,
    grid: Option<GridDescriptor>,
}

impl SpectralState {
    /// Explicit mode-list state. Hermitian pairing is derived from exact
    /// wave-vector negation: any input partner indices are discarded and
    /// rebuilt, so the declaration can never disagree with the mode set.
    pub fn from_modes(modes: Vec<Mode>) -> Result<Self> {
        let mut modes = modes;
        for (i, m) in modes.iter().enumerate() {
            check_mode_finite(i, m)?;
        }
        derive_pairing(&mut modes)?;
        Ok(SpectralState { modes, grid: None })
    }

    /// Grid-tagged state from canonically ordered per-mode fields. Weights
    /// are 1, wave vectors come from the grid lattice, and pairing is the
    /// modular negation. Nyquist-plane amplitudes at or below
    /// `nyquist_tol · max(1, max amplitude)` are forced to exactly zero;
    /// anything larger is an error.
    pub fn from_grid(
        grid: GridDescriptor,
        e: Vec<ComplexVec3>,
        b: Vec<ComplexVec3>,
        c: Vec<Complex64>,
        nyquist_tol: f64,
    ) -> Result<Self> {
        grid.check()?;
        let n = grid.n_modes();
        if e.len() != n || b.len() != n || c.len() != n {
            return Err(Error::BadState(format!(
                "grid expects {n} modes, got e={}, b={}, c={}",
                e.len(),
                b.len(),
                c.len()
            )));
        }
        let scale = e
            .iter()
            .chain(b.iter())
            .map(|v| v.max_abs())
            .fold(1.0, f64::max);
        let threshold = nyquist_tol * scale;
        let mut modes = Vec::with_capacity(n);
        for i in 0..n {
            let (mut ei, mut bi) = (e[i], b[i]);
            let mut ci = c[i];
            if grid.on_nyquist_plane(i) {
                let mag = ei.max_abs().max(bi.max_abs());
                if mag > threshold {
                    return Err(Error::NyquistNonzero { mode: i, magnitude: mag, tol: threshold });
                }
                ei = ComplexVec3::ZERO;
                bi = ComplexVec3::ZERO;
                ci = Complex64::new(0.0, 0.0);
            }
            let mut m = Mode::new(grid.wave_vector(i), ei, bi, 1.0, ci);
            m.hermitian_partner = Some(grid.pair_index(i));
            check_mode_finite(i, &m)?;
            modes.push(m);
        }
        Ok(SpectralState { modes, grid: Some(grid) })
    }

    /// All-zero fields on a grid.
    pub fn zero_on_grid(grid: GridDescriptor) -> Result<Self> {
        let n = grid.n_modes();
        SpectralState::from_grid(
            grid,
            vec![ComplexVec3::ZERO; n],
            vec![ComplexVec3::ZERO; n],
            vec![Complex64::new(0.0, 0.0); n],
            1e-12,
        )
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn mode(&self, i: usize) -> &Mode {
        &self.modes[i]
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn grid(&self) -> Option<&GridDescriptor> {
        self.grid.as_ref()
    }

    /// Largest field-component modulus over the whole state.
    pub fn max_abs_amplitude(&self) -> f64 {
        max_magnitude(self.modes.iter().map(|m| m.e.max_abs().max(m.b.max_abs())))
    }

    /// True when every amplitude is finite. `f64::max` ignores NaN, so this
    /// cannot be inferred from `max_abs_amplitude`.
    pub fn is_finite(&self) -> bool {
        self.modes.iter().all(|m| m.e.is_finite() && m.b.is_finite())
    }

    /// New state with the same wave vectors, weights, constraint values and
    /// pairing, but fresh field amplitudes. This is the only way evolution
    /// touches a state, which is what keeps `c(k)` frozen.
    pub fn map_fields<F>(&self, f: F) -> SpectralState
    where
        F: Fn(usize, &Mode) -> (ComplexVec3, ComplexVec3) + Sync,
    {
        let fields: Vec<(ComplexVec3, ComplexVec3)> = if self.modes.len() >= 2048 {
            self.modes.par_iter().enumerate().map(|(i, m)| f(i, m)).collect()
        } else {
            self.modes.iter().enumerate().map(|(i, m)| f(i, m)).collect()
        };
        let modes = self
            .modes
            .iter()
            .zip(fields)
            .map(|(m, (e, b))| Mode { e, b, ..*m })
            .collect();
        SpectralState { modes, grid: self.grid }
    }

    /// Index of the mode at −k: from the grid when present, otherwise from
    /// the declared pairing of an explicit list.
    pub fn hermitian_pair_index(&self, index: usize) -> Result<usize> {
        if index >= self.modes.len() {
            return Err(Error::BadParameter(format!("mode index {index} out of range")));
        }
        if let Some(grid) = &self.grid {
            return Ok(grid.pair_index(index));
        }
        self.modes[index].hermitian_partner.ok_or(Error::NoDeclaredPairing)
    }

    /// Whether every mode carries a partner declaration.
    pub fn is_fully_paired(&self) -> bool {
        self.grid.is_some() || self.modes.iter().all(|m| m.hermitian_partner.is_some())
    }

    /// Check every invariant against `tol` (absolute). Never fails; reports.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        fn push(out: &mut Vec<Violation>, tol: f64, constraint: Constraint, mode: usize, magnitude: f64) {
            if magnitude > tol {
                out.push(Violation { constraint, mode, magnitude });
            }
        }
        let mut report = ValidationReport::default();
        for (i, m) in self.modes.iter().enumerate() {
            if check_mode_finite(i, m).is_err() {
                push(&mut report.violations, tol, Constraint::Structure, i, f64::INFINITY);
                continue;
            }
            let ge = (m.k.dot_c(&m.e) - m.c).norm();
            let gb = m.k.dot_c(&m.b).norm();
            report.max_gauss_e = report.max_gauss_e.max(ge);
            report.max_gauss_b = report.max_gauss_b.max(gb);
            push(&mut report.violations, tol, Constraint::GaussE, i, ge);
            push(&mut report.violations, tol, Constraint::GaussB, i, gb);

            if let Some(p) = m.hermitian_partner {
                if p >= self.modes.len() || self.modes[p].hermitian_partner != Some(i) {
                    push(&mut report.violations, tol, Constraint::Structure, i, f64::INFINITY);
                    continue;
                }
                let partner = &self.modes[p];
                let herm = if p == i {
                    // self-paired: amplitudes must be real
                    let im = |v: &ComplexVec3| v.0.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
                    im(&m.e).max(im(&m.b))
                } else {
                    // On even grids the nyquist axis maps to itself under the
                    // modular negation, so pairs touching a nyquist plane do
                    // not negate their real-valued k; their amplitudes are
                    // pinned to zero at ingestion, which keeps the reality
                    // condition vacuous there.
                    let on_nyquist = self
                        .grid
                        .map(|g| g.on_nyquist_plane(i))
                        .unwrap_or(false);
                    if !on_nyquist {
                        let dk = WaveVector::new(partner.k.x + m.k.x, partner.k.y + m.k.y, partner.k.z + m.k.z);
                        if dk.norm() != 0.0 {
                            push(&mut report.violations, tol, Constraint::Structure, i, dk.norm());
                        }
                    }
                    if p < i {
                        continue; // pair already handled from the lower index
                    }
                    (partner.e - m.e.conj()).max_abs().max((partner.b - m.b.conj()).max_abs())
                };
                report.max_hermitian = report.max_hermitian.max(herm);
                push(&mut report.violations, tol, Constraint::Hermitian, i, herm);
            }
        }
        report
    }

    /// Enforce the gauss constraints exactly: B loses its longitudinal part,
    /// E's longitudinal part is reset to satisfy k·E = c(k); the zero mode is
    /// untouched. Idempotent up to roundoff.
    pub fn project_constraints(&self) -> Result<SpectralState> {
        for m in &self.modes {
            if m.k.is_zero() && m.c != Complex64::new(0.0, 0.0) {
                return Err(Error::ZeroModeCharge(format!("{}", m.c)));
            }
        }
        Ok(self.map_fields(|_, m| {
            if m.k.is_zero() {
                return (m.e, m.b);
            }
            let k2 = m.k.norm_sqr();
            let kc = m.k.to_complex();
            let b = m.b - kc * (m.k.dot_c(&m.b) / k2);
            let e = m.e + kc * ((m.c - m.k.dot_c(&m.e)) / k2);
            (e, b)
        }))
    }
}

fn check_mode_finite(i: usize, m: &Mode) -> Result<()> {
    if !m.k.is_finite() || !m.e.is_finite() || !m.b.is_finite() {
        return Err(Error::BadState(format!("mode {i}: non-finite data")));
    }
    if !(m.w > 0.0) || !m.w.is_finite() {
        return Err(Error::BadState(format!("mode {i}: weight {} must be positive", m.w)));
    }
    if !m.c.re.is_finite() || !m.c.im.is_finite() {
        return Err(Error::BadState(format!("mode {i}: non-finite constraint value")));
    }
    Ok(())
}

/// Rebuild hermitian partner indices from exact wave-vector negation.
fn derive_pairing(modes: &mut [Mode]) -> Result<()> {
    let mut by_k: HashMap<[u64; 3], usize> = HashMap::with_capacity(modes.len());
    for (i, m) in modes.iter().enumerate() {
        let key = [m.k.x.to_bits(), m.k.y.to_bits(), m.k.z.to_bits()];
        if by_k.insert(key, i).is_some() {
            return Err(Error::BadState(format!(
                "duplicate wave vector at mode {i}: ({}, {}, {})",
                m.k.x, m.k.y, m.k.z
            )));
        }
    }
    for i in 0..modes.len() {
        let k = modes[i].k;
        let nk = -k;
        let key = [nk.x.to_bits(), nk.y.to_bits(), nk.z.to_bits()];
        modes[i].hermitian_partner = if k.is_zero() {
            Some(i)
        } else {
            by_k.get(&key).copied()
        };
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn single(k: WaveVector, e: ComplexVec3, b: ComplexVec3, cval: C64) -> SpectralState {
        SpectralState::from_modes(vec![Mode::new(k, e, b, 1.0, cval)]).unwrap()
    }

    #[test]
    fn validate_transverse_mode_is_clean() {
        let s = single(
            WaveVector::new(0.0, 0.0, 1.0),
            ComplexVec3::from_real(1.0, 0.0, 0.0),
            ComplexVec3::from_real(0.0, 1.0, 0.0),
            c(0.0, 0.0),
        );
        assert!(s.validate(1e-12).is_empty());
    }

    #[test]
    fn validate_reports_gauss_e_violation() {
        let s = single(
            WaveVector::new(0.0, 0.0, 1.0),
            ComplexVec3::from_real(0.0, 0.0, 1.0),
            ComplexVec3::ZERO,
            c(0.0, 0.0),
        );
        let r = s.validate(1e-12);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].constraint, Constraint::GaussE);
        assert!((r.violations[0].magnitude - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validate_reports_gauss_b_violation() {
        let s = single(
            WaveVector::new(0.0, 0.0, 1.0),
            ComplexVec3::ZERO,
            ComplexVec3::from_real(0.0, 0.0, 2.0),
            c(0.0, 0.0),
        );
        let r = s.validate(1e-12);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].constraint, Constraint::GaussB);
        assert!((r.violations[0].magnitude - 2.0).abs() < 1e-15);
    }

    #[test]
    fn pair_index_on_4x1x1_grid() {
        let grid = GridDescriptor { nx: 4, ny: 1, nz: 1, lx: TAU, ly: TAU, lz: TAU };
        let s = SpectralState::zero_on_grid(grid).unwrap();
        assert_eq!(s.hermitian_pair_index(1).unwrap(), 3);
        assert_eq!(s.hermitian_pair_index(0).unwrap(), 0);
        assert_eq!(s.hermitian_pair_index(2).unwrap(), 2); // nyquist self-pairs
        assert_eq!(s.hermitian_pair_index(3).unwrap(), 1);
    }

    #[test]
    fn pair_index_errors_on_unpaired_explicit_list() {
        let s = single(
            WaveVector::new(1.0, 0.0, 0.0),
            ComplexVec3::ZERO,
            ComplexVec3::ZERO,
            c(0.0, 0.0),
        );
        assert_eq!(s.hermitian_pair_index(0), Err(Error::NoDeclaredPairing));
    }

    #[test]
    fn explicit_list_with_negated_k_gets_paired() {
        let k = WaveVector::new(0.0, 0.0, 1.0);
        let e = ComplexVec3::from_real(0.5, 0.0, 0.0);
        let s = SpectralState::from_modes(vec![
            Mode::new(k, e, ComplexVec3::ZERO, 1.0, c(0.0, 0.0)),
            Mode::new(-k, e.conj(), ComplexVec3::ZERO, 1.0, c(0.0, 0.0)),
        ])
        .unwrap();
        assert_eq!(s.hermitian_pair_index(0).unwrap(), 1);
        assert_eq!(s.hermitian_pair_index(1).unwrap(), 0);
        assert!(s.validate(1e-13).is_empty());
    }

    #[test]
    fn project_makes_b_transverse() {
        let s = single(
            WaveVector::new(0.0, 0.0, 1.0),
            ComplexVec3::ZERO,
            ComplexVec3::from_real(0.0, 1.0, 0.5),
            c(0.0, 0.0),
        );
        let p = s.project_constraints().unwrap();
        let b = p.mode(0).b;
        assert_eq!(b, ComplexVec3::from_real(0.0, 1.0, 0.0));
    }

    #[test]
    fn project_resets_longitudinal_e_to_match_charge() {
        // k·E must land exactly on c = 4, so E_par = c k/|k|² = (0,0,2).
        let k = WaveVector::new(0.0, 0.0, 2.0);
        let s = single(
            k,
            ComplexVec3::from_real(1.0, 0.0, 0.0),
            ComplexVec3::ZERO,
            c(4.0, 0.0),
        );
        let p = s.project_constraints().unwrap();
        let e = p.mode(0).e;
        assert_eq!(e, ComplexVec3::from_real(1.0, 0.0, 2.0));
        assert_eq!(k.dot_c(&e), c(4.0, 0.0));
    }

    #[test]
    fn project_leaves_valid_state_unchanged() {
        let s = single(
            WaveVector::new(0.0, 0.0, 1.0),
            ComplexVec3::from_real(1.0, 0.0, 0.0),
            ComplexVec3::from_real(0.0, 1.0, 0.0),
            c(0.0, 0.0),
        );
        let p = s.project_constraints().unwrap();
        for i in 0..3 {
            assert!((p.mode(0).e[i] - s.mode(0).e[i]).norm() <= 1e-15);
            assert!((p.mode(0).b[i] - s.mode(0).b[i]).norm() <= 1e-15);
        }
    }

    #[test]
    fn project_rejects_zero_mode_charge() {
        let s = single(WaveVector::ZERO, ComplexVec3::ZERO, ComplexVec3::ZERO, c(1.0, 0.0));
        assert!(matches!(s.project_constraints(), Err(Error::ZeroModeCharge(_))));
    }

    #[test]
    fn empty_state_is_valid() {
        let s = SpectralState::from_modes(vec![]).unwrap();
        assert!(s.validate(1e-12).is_empty());
        assert_eq!(s.n_modes(), 0);
    }

    #[test]
    fn nyquist_amplitude_rejected_on_even_grid() {
        let grid = GridDescriptor { nx: 4, ny: 1, nz: 1, lx: TAU, ly: TAU, lz: TAU };
        let mut e = vec![ComplexVec3::ZERO; 4];
        e[2] = ComplexVec3::from_real(1.0, 0.0, 0.0);
        let r = SpectralState::from_grid(grid, e, vec![ComplexVec3::ZERO; 4], vec![c(0.0, 0.0); 4], 1e-12);
        assert!(matches!(r, Err(Error::NyquistNonzero { mode: 2, .. })));
    }

    #[test]
    fn tiny_nyquist_amplitude_is_zeroed() {
        let grid = GridDescriptor { nx: 4, ny: 1, nz: 1, lx: TAU, ly: TAU, lz: TAU };
        let mut e = vec![ComplexVec3::ZERO; 4];
        e[2] = ComplexVec3::from_real(1e-15, 0.0, 0.0);
        let s = SpectralState::from_grid(grid, e, vec![ComplexVec3::ZERO; 4], vec![c(0.0, 0.0); 4], 1e-12)
            .unwrap();
        assert_eq!(s.mode(2).e, ComplexVec3::ZERO);
    }

    #[test]
    fn hermitian_violation_detected() {
        let k = WaveVector::new(0.0, 0.0, 1.0);
        let s = SpectralState::from_modes(vec![
            Mode::new(k, ComplexVec3::from_real(1.0, 0.0, 0.0), ComplexVec3::ZERO, 1.0, c(0.0, 0.0)),
            Mode::new(-k, ComplexVec3::from_real(0.25, 0.0, 0.0), ComplexVec3::ZERO, 1.0, c(0.0, 0.0)),
        ])
        .unwrap();
        let r = s.validate(1e-12);
        assert!(r.violations.iter().any(|v| v.constraint == Constraint::Hermitian));
        assert!((r.max_hermitian - 0.75).abs() < 1e-15);
    }
}
