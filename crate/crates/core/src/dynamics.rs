//! Time evolution of spectral states.
//!
//! The per-mode system is linear, so the reference integrator is the exact
//! closed-form propagator: longitudinal parts frozen, transverse parts
//! rotating at frequency |k|. Implicit midpoint (a Cayley transform of the
//! skew-hermitian per-mode generator, hence exactly unitary) and classical
//! RK4 exist to expose the structure-preservation differences: midpoint
//! conserves the quadratic invariants, RK4 does not.

use crate::bracket::{maxwell_rhs, BracketPath};
use crate::error::{Error, Result};
use crate::functionals::Functional;
use crate::state::SpectralState;
use crate::vec3::ComplexVec3;
use num_complex::Complex64;
use num_traits::Zero;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorKind {
    Exact,
    Midpoint,
    Rk4,
}

impl IntegratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            IntegratorKind::Exact => "exact",
            IntegratorKind::Midpoint => "midpoint",
            IntegratorKind::Rk4 => "rk4",
        }
    }
}

/// How to advance and what to record. `dt·max|k| < 2/π` is advisory for rk4
/// stability; exact and midpoint are unconditionally stable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSpec {
    pub kind: IntegratorKind,
    pub dt: f64,
    pub steps: usize,
    pub snapshot_every: usize,
}

impl IntegratorSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::BadParameter(format!("dt {} must be positive and finite", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::BadParameter("steps must be at least 1".into()));
        }
        if self.snapshot_every == 0 {
            return Err(Error::BadParameter("snapshot_every must be at least 1".into()));
        }
        Ok(())
    }
}

/// Closed-form propagation by `dt` (any finite sign). Longitudinal field
/// components are unchanged; transverse parts rotate:
/// E⊥' = cos(|k|dt) E⊥ + i sin(|k|dt) (k̂×B⊥),
/// B⊥' = cos(|k|dt) B⊥ − i sin(|k|dt) (k̂×E⊥).
pub fn exact_step(state: &SpectralState, dt: f64) -> SpectralState {
    if dt == 0.0 {
        return state.clone();
    }
    state.map_fields(|_, m| {
        let Some(u) = m.k.unit() else {
            return (m.e, m.b); // zero mode is static
        };
        let (sin, cos) = (m.k.norm() * dt).sin_cos();
        let uc = u.to_complex();
        let e_par = uc * u.dot_c(&m.e);
        let b_par = uc * u.dot_c(&m.b);
        let e_perp = m.e - e_par;
        let b_perp = m.b - b_par;
        let rot = I * sin;
        let e = e_par + e_perp.scaled_re(cos) + u.cross_c(&b_perp) * rot;
        let b = b_par + b_perp.scaled_re(cos) - u.cross_c(&e_perp) * rot;
        (e, b)
    })
}

/// One implicit-midpoint step, solved exactly per mode: the Cayley transform
/// (I − (dt/2)M)⁻¹(I + (dt/2)M) of the per-mode generator, computed by a 6×6
/// complex solve with partial pivoting. M is skew-hermitian, so the map is
/// unitary and per-mode |E|²+|B|² is preserved to roundoff.
pub fn midpoint_step(state: &SpectralState, dt: f64) -> Result<SpectralState> {
    use rayon::prelude::*;
    let solve_mode = |m: &crate::state::Mode| -> Result<(ComplexVec3, ComplexVec3)> {
        let x = [m.e[0], m.e[1], m.e[2], m.b[0], m.b[1], m.b[2]];
        let y = cayley_apply(&m.k, dt, &x)?;
        Ok((ComplexVec3::new(y[0], y[1], y[2]), ComplexVec3::new(y[3], y[4], y[5])))
    };
    let solved: Result<Vec<(ComplexVec3, ComplexVec3)>> = if state.n_modes() >= 2048 {
        state.modes().par_iter().map(solve_mode).collect()
    } else {
        state.modes().iter().map(solve_mode).collect()
    };
    let solved = solved?;
    Ok(state.map_fields(|j, _| solved[j]))
}

/// Solve (I − (dt/2)M) y = (I + (dt/2)M) x for one mode.
fn cayley_apply(k: &crate::vec3::WaveVector, dt: f64, x: &[Complex64; 6]) -> Result<[Complex64; 6]> {
    let h = 0.5 * dt;
    // M = [[0, iK], [−iK, 0]] with K v = k × v.
    let kx = Complex64::from(k.x);
    let ky = Complex64::from(k.y);
    let kz = Complex64::from(k.z);
    let zero = Complex64::zero();
    let kmat = [
        [zero, -kz, ky],
        [kz, zero, -kx],
        [-ky, kx, zero],
    ];
    let mut lhs = [[zero; 6]; 6];
    let mut mh = [[zero; 6]; 6];
    for r in 0..3 {
        for c in 0..3 {
            let block = kmat[r][c] * I * h;
            mh[r][c + 3] = block;
            mh[r + 3][c] = -block;
        }
    }
    for r in 0..6 {
        for c in 0..6 {
            lhs[r][c] = -mh[r][c];
        }
        lhs[r][r] += 1.0;
    }
    let mut rhs = [zero; 6];
    for r in 0..6 {
        let mut acc = x[r];
        for c in 0..6 {
            acc += mh[r][c] * x[c];
        }
        rhs[r] = acc;
    }
    solve6(lhs, rhs)
}

/// Gaussian elimination with partial pivoting on a 6×6 complex system.
fn solve6(mut a: [[Complex64; 6]; 6], mut b: [Complex64; 6]) -> Result<[Complex64; 6]> {
    for col in 0..6 {
        let mut pivot = col;
        let mut best = a[col][col].norm_sqr();
        for row in col + 1..6 {
            let mag = a[row][col].norm_sqr();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if !(best > 0.0) {
            return Err(Error::BadState(format!("degenerate pivot in column {col}")));
        }
        if pivot != col {
            a.swap(pivot, col);
            b.swap(pivot, col);
        }
        let diag = a[col][col];
        for row in col + 1..6 {
            let factor = a[row][col] / diag;
            if factor.is_zero() {
                continue;
            }
            for c in col..6 {
                let sub = factor * a[col][c];
                a[row][c] -= sub;
            }
            let sub = factor * b[col];
            b[row] -= sub;
        }
    }
    let mut x = [Complex64::zero(); 6];
    for row in (0..6).rev() {
        let mut acc = b[row];
        for c in row + 1..6 {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Classical four-stage Runge–Kutta over the full mode vector, driven by the
/// closed-form right-hand side.
pub fn rk4_step(state: &SpectralState, dt: f64) -> SpectralState {
    let rhs = |s: &SpectralState| maxwell_rhs(s, BracketPath::ClosedForm);
    let k1 = rhs(state);
    let s2 = apply_rates(state, &[(&k1, 0.5 * dt)]);
    let k2 = rhs(&s2);
    let s3 = apply_rates(state, &[(&k2, 0.5 * dt)]);
    let k3 = rhs(&s3);
    let s4 = apply_rates(state, &[(&k3, dt)]);
    let k4 = rhs(&s4);
    let sixth = dt / 6.0;
    apply_rates(
        state,
        &[(&k1, sixth), (&k2, 2.0 * sixth), (&k3, 2.0 * sixth), (&k4, sixth)],
    )
}

fn apply_rates(state: &SpectralState, contributions: &[(&crate::bracket::FieldRates, f64)]) -> SpectralState {
    state.map_fields(|j, m| {
        let mut e = m.e;
        let mut b = m.b;
        for (rates, factor) in contributions {
            e = e + rates.d_e[j].scaled_re(*factor);
            b = b + rates.d_b[j].scaled_re(*factor);
        }
        (e, b)
    })
}

/// Advance one step with the requested integrator.
pub fn step(state: &SpectralState, kind: IntegratorKind, dt: f64) -> Result<SpectralState> {
    match kind {
        IntegratorKind::Exact => Ok(exact_step(state, dt)),
        IntegratorKind::Midpoint => midpoint_step(state, dt),
        IntegratorKind::Rk4 => Ok(rk4_step(state, dt)),
    }
}

/// One diagnostics row: time, requested functional values, and the largest
/// constraint violations at that instant.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub values: Vec<Complex64>,
    pub gauss_max: f64,
    pub herm_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbortInfo {
    pub step: usize,
    pub reason: String,
}

/// Time-ordered snapshots plus dense per-step diagnostics. On a clean run
/// `diagnostics.len() == steps + 1`; an aborted run is flagged and keeps the
/// partial records.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<(f64, SpectralState)>,
    pub diagnostics: Vec<StepRecord>,
    pub functionals: Vec<Functional>,
    pub aborted: Option<AbortInfo>,
}

impl Trajectory {
    pub fn final_state(&self) -> &SpectralState {
        &self.snapshots.last().expect("trajectory always holds the initial snapshot").1
    }

    /// Time series of one recorded functional.
    pub fn series(&self, f: Functional) -> Option<Vec<(f64, Complex64)>> {
        let idx = self.functionals.iter().position(|g| *g == f)?;
        Some(self.diagnostics.iter().map(|r| (r.t, r.values[idx])).collect())
    }
}

/// Advance `spec.steps` times, recording diagnostics every step and
/// snapshots every `snapshot_every` steps (plus the endpoints). The frozen
/// constraint values ride along untouched. A non-finite state or a step
/// failure aborts with the partial trajectory flagged.
pub fn simulate(
    state: &SpectralState,
    spec: &IntegratorSpec,
    functionals: &[Functional],
) -> Result<Trajectory> {
    spec.validate()?;
    let record = |t: f64, s: &SpectralState| -> StepRecord {
        let report = s.validate(f64::INFINITY);
        StepRecord {
            t,
            values: functionals.iter().map(|f| f.value(s)).collect(),
            gauss_max: report.max_gauss(),
            herm_max: report.max_hermitian,
        }
    };
    let mut trajectory = Trajectory {
        snapshots: vec![(0.0, state.clone())],
        diagnostics: vec![record(0.0, state)],
        functionals: functionals.to_vec(),
        aborted: None,
    };
    let mut current = state.clone();
    for i in 1..=spec.steps {
        let t = i as f64 * spec.dt;
        let next = match step(&current, spec.kind, spec.dt) {
            Ok(s) => s,
            Err(e) => {
                trajectory.aborted = Some(AbortInfo { step: i, reason: e.to_string() });
                break;
            }
        };
        if !next.is_finite() {
            trajectory.aborted = Some(AbortInfo { step: i, reason: "non-finite amplitudes".into() });
            break;
        }
        current = next;
        trajectory.diagnostics.push(record(t, &current));
        if i % spec.snapshot_every == 0 || i == spec.steps {
            trajectory.snapshots.push((t, current.clone()));
        }
    }
    Ok(trajectory)
}

/// One row of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderRow {
    pub dt: f64,
    pub error: f64,
    /// log2(err(2dt)/err(dt)); absent on the coarsest run.
    pub order: Option<f64>,
}

/// Richardson order estimate against the exact propagator: run the
/// integrator to `steps0 · dt0` at `halvings + 1` resolutions and compare
/// endpoint states. Exact itself has nothing to converge.
pub fn measure_orders(
    state: &SpectralState,
    kind: IntegratorKind,
    dt0: f64,
    steps0: usize,
    halvings: usize,
) -> Result<Vec<OrderRow>> {
    if kind == IntegratorKind::Exact {
        return Err(Error::BadParameter("exact integrator has nothing to converge".into()));
    }
    if !(dt0 > 0.0) || steps0 == 0 {
        return Err(Error::BadParameter("convergence study needs dt0 > 0 and steps0 >= 1".into()));
    }
    let t_final = dt0 * steps0 as f64;
    let reference = exact_step(state, t_final);
    let scale = state.max_abs_amplitude().max(1e-300);
    let mut rows: Vec<OrderRow> = Vec::with_capacity(halvings + 1);
    for level in 0..=halvings {
        let dt = dt0 / (1u64 << level) as f64;
        let steps = steps0 * (1usize << level);
        let mut s = state.clone();
        for _ in 0..steps {
            s = step(&s, kind, dt)?;
        }
        let error = max_component_diff(&s, &reference) / scale;
        let order = rows.last().map(|prev: &OrderRow| (prev.error / error).log2());
        rows.push(OrderRow { dt, error, order });
    }
    Ok(rows)
}

fn max_component_diff(a: &SpectralState, b: &SpectralState) -> f64 {
    a.modes()
        .iter()
        .zip(b.modes())
        .map(|(ma, mb)| (ma.e - mb.e).max_abs().max((ma.b - mb.b).max_abs()))
        .fold(0.0, f64::max)
}
