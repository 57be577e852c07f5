//! Trilinear brackets over field functionals, the master evolution law, and
//! the algebraic property checks.
//!
//! The bracket consumes only formal gradients: the two slot quantities are
//! conjugation-free, and this keeps the per-mode term an honest 3×3
//! determinant of gradient vectors. Non-holomorphic quantities get their
//! time derivative from [`Functional::flow_rate`] instead.

use crate::error::{Error, Result};
use crate::functionals::Functional;
use crate::reduce::pairwise_sum;
use crate::state::SpectralState;
use crate::vec3::ComplexVec3;
use num_complex::Complex64;
use rayon::prelude::*;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which route produced a value: the generic per-mode gradient sum, or the
/// closed-form right-hand side written out by hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketPath {
    Generic,
    ClosedForm,
}

/// A bracket evaluation with provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketResult {
    pub value: Complex64,
    pub path: BracketPath,
}

/// i Σ_k w_k [ δf/δE · (δa/δE × δb/δE) + δf/δB · (δa/δB × δb/δB) ],
/// summed in deterministic order.
pub fn bracket3(f: Functional, a: Functional, b: Functional, state: &SpectralState) -> BracketResult {
    let terms: Vec<Complex64> = (0..state.n_modes())
        .map(|j| {
            let te = f.grad_e(state, j).dot(&a.grad_e(state, j).cross(&b.grad_e(state, j)));
            let tb = f.grad_b(state, j).dot(&a.grad_b(state, j).cross(&b.grad_b(state, j)));
            (te + tb) * state.mode(j).w
        })
        .collect();
    BracketResult { value: pairwise_sum(&terms) * I, path: BracketPath::Generic }
}

/// Magnitude scale of a bracket: Σ w (‖δf/δE‖‖δa/δE‖‖δb/δE‖ + same for B).
/// Hadamard's bound makes this ≥ |bracket3| and it is invariant under slot
/// permutation, so it is the right denominator for residuals: a bracket that
/// cancels to roundoff (as degenerate triples do identically) divides by the
/// size of what cancelled, not by its own noise.
pub fn bracket3_scale(f: Functional, a: Functional, b: Functional, state: &SpectralState) -> f64 {
    (0..state.n_modes())
        .map(|j| {
            let n = |v: ComplexVec3| v.norm_sqr().sqrt();
            let te = n(f.grad_e(state, j)) * n(a.grad_e(state, j)) * n(b.grad_e(state, j));
            let tb = n(f.grad_b(state, j)) * n(a.grad_b(state, j)) * n(b.grad_b(state, j));
            (te + tb) * state.mode(j).w
        })
        .sum()
}

/// Trilinear engine over raw per-mode gradient fields. `bracket3` is this
/// applied to a functional's collected gradients; exposing it lets linearity
/// be tested on arbitrary gradient data.
pub fn bracket_of_gradients(
    f: &[(ComplexVec3, ComplexVec3)],
    a: &[(ComplexVec3, ComplexVec3)],
    b: &[(ComplexVec3, ComplexVec3)],
    weights: &[f64],
) -> Complex64 {
    let terms: Vec<Complex64> = (0..weights.len())
        .map(|j| {
            let te = f[j].0.dot(&a[j].0.cross(&b[j].0));
            let tb = f[j].1.dot(&a[j].1.cross(&b[j].1));
            (te + tb) * weights[j]
        })
        .collect();
    pairwise_sum(&terms) * I
}

/// Per-mode time derivatives of both fields.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRates {
    pub d_e: Vec<ComplexVec3>,
    pub d_b: Vec<ComplexVec3>,
    pub path: BracketPath,
}

/// Right-hand side of the reduced Maxwell system, by either route: the
/// generic path pushes coordinate functionals through the master evolution
/// law, the closed form writes Ė = i k×B, Ḃ = −i k×E directly. The two must
/// agree componentwise to 1e-13 relative on every state.
pub fn maxwell_rhs(state: &SpectralState, path: BracketPath) -> FieldRates {
    match path {
        BracketPath::ClosedForm => {
            let d_e: Vec<ComplexVec3> =
                state.modes().iter().map(|m| m.k.cross_c(&m.b) * I).collect();
            let d_b: Vec<ComplexVec3> =
                state.modes().iter().map(|m| -(m.k.cross_c(&m.e) * I)).collect();
            FieldRates { d_e, d_b, path }
        }
        BracketPath::Generic => {
            let per_mode = |j: usize| {
                let e = ComplexVec3::new(
                    bracket3(Functional::CoordE { mode: j, axis: 0 }, Functional::I1, Functional::I2, state).value,
                    bracket3(Functional::CoordE { mode: j, axis: 1 }, Functional::I1, Functional::I2, state).value,
                    bracket3(Functional::CoordE { mode: j, axis: 2 }, Functional::I1, Functional::I2, state).value,
                );
                let b = ComplexVec3::new(
                    bracket3(Functional::CoordB { mode: j, axis: 0 }, Functional::I1, Functional::I2, state).value,
                    bracket3(Functional::CoordB { mode: j, axis: 1 }, Functional::I1, Functional::I2, state).value,
                    bracket3(Functional::CoordB { mode: j, axis: 2 }, Functional::I1, Functional::I2, state).value,
                );
                (e, b)
            };
            let rates: Vec<(ComplexVec3, ComplexVec3)> = if state.n_modes() >= 64 {
                (0..state.n_modes()).into_par_iter().map(per_mode).collect()
            } else {
                (0..state.n_modes()).map(per_mode).collect()
            };
            let (d_e, d_b) = rates.into_iter().unzip();
            FieldRates { d_e, d_b, path }
        }
    }
}

/// Max residual over the six slot orderings, relative to the bracket's
/// magnitude scale; 0/0 is 0.
pub fn antisymmetry_check(f: Functional, a: Functional, b: Functional, state: &SpectralState) -> f64 {
    let base = bracket3(f, a, b, state).value;
    let scale = bracket3_scale(f, a, b, state);
    if scale == 0.0 {
        return 0.0;
    }
    let perms: [(Functional, Functional, Functional, f64); 6] = [
        (f, a, b, 1.0),
        (a, b, f, 1.0),
        (b, f, a, 1.0),
        (f, b, a, -1.0),
        (b, a, f, -1.0),
        (a, f, b, -1.0),
    ];
    let mut worst = 0.0f64;
    for (p, q, r, sign) in perms {
        let v = bracket3(p, q, r, state).value;
        worst = worst.max((v - base * sign).norm());
    }
    worst / scale
}

/// dF/dt as a bracket with the two invariant slots. Only defined for
/// holomorphic functionals; the conjugating ones must go through
/// [`Functional::flow_rate`].
pub fn conservation_rate(f: Functional, state: &SpectralState) -> Result<Complex64> {
    if !f.is_holomorphic() {
        return Err(Error::NonHolomorphic(f.name()));
    }
    Ok(bracket3(f, Functional::I1, Functional::I2, state).value)
}

/// Magnitude scale matching [`conservation_rate`].
pub fn conservation_rate_scale(f: Functional, state: &SpectralState) -> f64 {
    bracket3_scale(f, Functional::I1, Functional::I2, state)
}
