//! Bridge between periodic real-space lattice fields and spectral states,
//! plus the initial-condition generators.
//!
//! Convention: the forward transform carries the 1/N normalization,
//! `Ẽ(k) = (1/N) Σ_x E(x) e^{−ik·x}`, so a unit plane wave has coefficient ½
//! at each paired mode and hand examples are exact. Parseval then reads
//! `Σ_k |Ẽ|² = (1/N) Σ_x E²`. The transform is the direct separable DFT —
//! correctness is the contract here, not speed.

use crate::error::{Error, Result};
use crate::reduce::pairwise_sum;
use crate::state::{GridDescriptor, SpectralState};
use crate::vec3::{ComplexVec3, WaveVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::TAU;

/// Real-space sampled vector fields on a periodic rectangular lattice,
/// z-fastest row-major ordering. The charge samples are carried for file
/// round trips; the spectral constraint values are always frozen from the
/// transformed electric field itself.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField {
    pub grid: GridDescriptor,
    pub e: Vec<[f64; 3]>,
    pub b: Vec<[f64; 3]>,
    pub rho: Option<Vec<f64>>,
}

impl LatticeField {
    pub fn new(
        grid: GridDescriptor,
        e: Vec<[f64; 3]>,
        b: Vec<[f64; 3]>,
        rho: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = grid.n_modes();
        if e.len() != n || b.len() != n {
            return Err(Error::BadParameter(format!(
                "lattice expects {n} samples, got e={}, b={}",
                e.len(),
                b.len()
            )));
        }
        if let Some(r) = &rho {
            if r.len() != n {
                return Err(Error::BadParameter(format!("rho expects {n} samples, got {}", r.len())));
            }
            if !r.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFiniteSample);
            }
        }
        let finite = |v: &[[f64; 3]]| v.iter().all(|s| s.iter().all(|x| x.is_finite()));
        if !finite(&e) || !finite(&b) {
            return Err(Error::NonFiniteSample);
        }
        Ok(LatticeField { grid, e, b, rho })
    }

    /// Zero fields on a grid.
    pub fn zero(grid: GridDescriptor) -> Self {
        let n = grid.n_modes();
        LatticeField { grid, e: vec![[0.0; 3]; n], b: vec![[0.0; 3]; n], rho: None }
    }

    /// Sample the fields from a function of the physical point coordinates.
    pub fn from_fn(
        grid: GridDescriptor,
        mut f: impl FnMut(f64, f64, f64) -> ([f64; 3], [f64; 3]),
    ) -> Self {
        let mut e = Vec::with_capacity(grid.n_modes());
        let mut b = Vec::with_capacity(grid.n_modes());
        for ix in 0..grid.nx {
            for iy in 0..grid.ny {
                for iz in 0..grid.nz {
                    let x = ix as f64 * grid.lx / grid.nx as f64;
                    let y = iy as f64 * grid.ly / grid.ny as f64;
                    let z = iz as f64 * grid.lz / grid.nz as f64;
                    let (ev, bv) = f(x, y, z);
                    e.push(ev);
                    b.push(bv);
                }
            }
        }
        LatticeField { grid, e, b, rho: None }
    }

    pub fn max_abs(&self) -> f64 {
        self.e
            .iter()
            .chain(self.b.iter())
            .flat_map(|s| s.iter().map(|x| x.abs()))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Forward,
    Inverse,
}

/// Direct DFT along one axis; an exact reorganization of the naive triple
/// sum. Lines through the axis start at `outer · n_axis · stride + inner`
/// for the z-fastest layout.
fn transform_axis(
    data: &[Complex64],
    n_axis: usize,
    stride: usize,
    n_outer: usize,
    n_inner: usize,
    dir: Direction,
) -> Vec<Complex64> {
    let sign = match dir {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let table: Vec<Complex64> = (0..n_axis)
        .map(|m| {
            let phase = sign * TAU * m as f64 / n_axis as f64;
            Complex64::new(phase.cos(), phase.sin())
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for outer in 0..n_outer {
        for inner in 0..n_inner {
            let line_base = outer * n_axis * stride + inner;
            for slot in 0..n_axis {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..n_axis {
                    acc += data[line_base + i * stride] * table[(slot * i) % n_axis];
                }
                out[line_base + slot * stride] = acc;
            }
        }
    }
    out
}

/// Full 3-D DFT of one scalar component over the grid.
fn dft3(data: &[Complex64], grid: &GridDescriptor, dir: Direction) -> Vec<Complex64> {
    let (nx, ny, nz) = (grid.nx, grid.ny, grid.nz);
    let out = transform_axis(data, nz, 1, nx * ny, 1, dir);
    let out = transform_axis(&out, ny, nz, nx, nz, dir);
    let mut out = transform_axis(&out, nx, ny * nz, 1, ny * nz, dir);
    if dir == Direction::Forward {
        let norm = 1.0 / grid.n_modes() as f64;
        for v in &mut out {
            *v *= norm;
        }
    }
    out
}

fn component_to_complex(samples: &[[f64; 3]], axis: usize) -> Vec<Complex64> {
    samples.iter().map(|s| Complex64::from(s[axis])).collect()
}

/// Forward transform with the default ingestion tolerance (1e-12).
pub fn to_spectral(field: &LatticeField) -> Result<SpectralState> {
    to_spectral_with_tol(field, 1e-12)
}

/// Ẽ(k) = (1/N) Σ_x E(x) e^{−ik·x} over the grid lattice of wave vectors,
/// hermitian pairing recorded, constraint values frozen from the transformed
/// field, unit weights. Nyquist planes must carry only round-off energy.
pub fn to_spectral_with_tol(field: &LatticeField, nyquist_tol: f64) -> Result<SpectralState> {
    let grid = field.grid;
    let n = grid.n_modes();
    if field.e.len() != n || field.b.len() != n {
        return Err(Error::BadParameter("sample count does not match grid".into()));
    }
    let mut e_hat: Vec<ComplexVec3> = vec![ComplexVec3::ZERO; n];
    let mut b_hat: Vec<ComplexVec3> = vec![ComplexVec3::ZERO; n];
    for axis in 0..3 {
        let te = dft3(&component_to_complex(&field.e, axis), &grid, Direction::Forward);
        let tb = dft3(&component_to_complex(&field.b, axis), &grid, Direction::Forward);
        for i in 0..n {
            e_hat[i] = e_hat[i].with_component(axis, te[i]);
            b_hat[i] = b_hat[i].with_component(axis, tb[i]);
        }
    }
    let c: Vec<Complex64> = (0..n).map(|i| grid.wave_vector(i).dot_c(&e_hat[i])).collect();
    SpectralState::from_grid(grid, e_hat, b_hat, c, nyquist_tol)
}

/// E(x) = Σ_k Ẽ(k) e^{ik·x}. The state must be grid-tagged and
/// hermitian-paired; an imaginary residue above 1e-12 of the field scale is
/// an error, below that it is discarded.
pub fn to_lattice(state: &SpectralState) -> Result<LatticeField> {
    let grid = *state.grid().ok_or(Error::NoGrid)?;
    if !state.is_fully_paired() {
        return Err(Error::NoDeclaredPairing);
    }
    let n = grid.n_modes();
    let mut e = vec![[0.0; 3]; n];
    let mut b = vec![[0.0; 3]; n];
    let mut max_re = 0.0f64;
    let mut max_im = 0.0f64;
    for axis in 0..3 {
        let se: Vec<Complex64> = state.modes().iter().map(|m| m.e[axis]).collect();
        let sb: Vec<Complex64> = state.modes().iter().map(|m| m.b[axis]).collect();
        let fe = dft3(&se, &grid, Direction::Inverse);
        let fb = dft3(&sb, &grid, Direction::Inverse);
        for i in 0..n {
            e[i][axis] = fe[i].re;
            b[i][axis] = fb[i].re;
            max_re = max_re.max(fe[i].re.abs()).max(fb[i].re.abs());
            max_im = max_im.max(fe[i].im.abs()).max(fb[i].im.abs());
        }
    }
    let scale = max_re.max(max_im);
    if scale > 0.0 && max_im / scale > 1e-12 {
        return Err(Error::NotHermitian { residue: max_im / scale, tol: 1e-12 });
    }
    LatticeField::new(grid, e, b, None)
}

/// |Σ_k (|Ẽ|²+|B̃|²) − (1/N) Σ_x (E²+B²)| / max(both sides); 0/0 is 0.
pub fn parseval_check(field: &LatticeField, state: &SpectralState) -> f64 {
    let spectral_terms: Vec<f64> = state.modes().iter().map(|m| m.w * m.energy()).collect();
    let lhs = pairwise_sum(&spectral_terms);
    let lattice_terms: Vec<f64> = field
        .e
        .iter()
        .zip(&field.b)
        .map(|(e, b)| e.iter().map(|x| x * x).sum::<f64>() + b.iter().map(|x| x * x).sum::<f64>())
        .collect();
    let rhs = pairwise_sum(&lattice_terms) / field.grid.n_modes() as f64;
    let denom = lhs.abs().max(rhs.abs());
    if denom == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / denom
    }
}

/// Initial-condition families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcKind {
    PlaneWave,
    StandingWave,
    RandomSolenoidal,
    CoulombStatic,
}

impl IcKind {
    pub fn by_name(name: &str) -> Result<IcKind> {
        match name {
            "plane_wave" => Ok(IcKind::PlaneWave),
            "standing_wave" => Ok(IcKind::StandingWave),
            "random_solenoidal" => Ok(IcKind::RandomSolenoidal),
            "coulomb_static" => Ok(IcKind::CoulombStatic),
            other => Err(Error::BadParameter(format!("unknown ic kind: {other}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            IcKind::PlaneWave => "plane_wave",
            IcKind::StandingWave => "standing_wave",
            IcKind::RandomSolenoidal => "random_solenoidal",
            IcKind::CoulombStatic => "coulomb_static",
        }
    }
}

/// One prescribed charge-constraint value at an integer grid wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeEntry {
    pub wave: [i64; 3],
    pub c: Complex64,
}

/// Parameters shared by the generators; each kind reads the fields it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct IcParams {
    pub grid: GridDescriptor,
    /// Integer wave indices of the carrier for plane/standing waves.
    pub wave: [i64; 3],
    pub amplitude: f64,
    pub polarization: [f64; 3],
    pub seed: u64,
    /// Random spectrum is flat (times |k|^exponent) up to this fraction of
    /// the grid's |k| maximum, zero beyond; keeps nyquist planes clean by
    /// construction.
    pub cutoff_fraction: f64,
    pub spectrum_exponent: f64,
    pub charges: Vec<ChargeEntry>,
}

impl IcParams {
    pub fn for_grid(grid: GridDescriptor) -> Self {
        IcParams {
            grid,
            wave: [0, 0, 1],
            amplitude: 1.0,
            polarization: [1.0, 0.0, 0.0],
            seed: 0,
            cutoff_fraction: 0.5,
            spectrum_exponent: 0.0,
            charges: Vec::new(),
        }
    }
}

fn wave_index(grid: &GridDescriptor, wave: [i64; 3]) -> Result<usize> {
    let ix = GridDescriptor::index_of_freq(wave[0], grid.nx);
    let iy = GridDescriptor::index_of_freq(wave[1], grid.ny);
    let iz = GridDescriptor::index_of_freq(wave[2], grid.nz);
    match (ix, iy, iz) {
        (Some(a), Some(b), Some(c)) => Ok(grid.index_of(a, b, c)),
        _ => Err(Error::BadParameter(format!(
            "wave {:?} not representable on {}x{}x{} grid",
            wave, grid.nx, grid.ny, grid.nz
        ))),
    }
}

fn unit_polarization(k: &WaveVector, polarization: [f64; 3]) -> Result<[f64; 3]> {
    let norm = polarization.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::BadParameter("polarization must be a nonzero finite vector".into()));
    }
    let p = [polarization[0] / norm, polarization[1] / norm, polarization[2] / norm];
    let dot = (k.x * p[0] + k.y * p[1] + k.z * p[2]).abs();
    if dot > 1e-12 * k.norm().max(1.0) {
        return Err(Error::PolarizationNotTransverse(dot));
    }
    Ok(p)
}

/// Build an initial condition on a grid. All outputs pass validation at
/// 1e-13 and evolve without touching their frozen constraint values.
pub fn make_ic(kind: IcKind, params: &IcParams) -> Result<SpectralState> {
    match kind {
        IcKind::PlaneWave => carrier_pair(params, false),
        IcKind::StandingWave => carrier_pair(params, true),
        IcKind::RandomSolenoidal => random_solenoidal(params),
        IcKind::CoulombStatic => coulomb_static(params),
    }
}

/// The ±k hermitian pair. A plane wave phase-locks B = k̂×E for propagation
/// along +k̂; the standing variant offsets B into the sin quadrature so the
/// real fields sit as E ∝ cos(k·x), B ∝ sin(k·x).
fn carrier_pair(params: &IcParams, standing: bool) -> Result<SpectralState> {
    let grid = params.grid;
    if params.wave == [0, 0, 0] {
        return Err(Error::BadParameter("carrier wave must be nonzero".into()));
    }
    let idx = wave_index(&grid, params.wave)?;
    if grid.on_nyquist_plane(idx) {
        return Err(Error::BadParameter(format!(
            "carrier wave {:?} sits on a nyquist plane",
            params.wave
        )));
    }
    let pidx = grid.pair_index(idx);
    let k = grid.wave_vector(idx);
    let p = unit_polarization(&k, params.polarization)?;
    let u = k.unit().expect("carrier wave is nonzero");
    let pol = ComplexVec3::from_real(p[0], p[1], p[2]);
    let bpol = ComplexVec3::from_real(
        u.y * p[2] - u.z * p[1],
        u.z * p[0] - u.x * p[2],
        u.x * p[1] - u.y * p[0],
    );
    let half = 0.5 * params.amplitude;
    let n = grid.n_modes();
    let mut e = vec![ComplexVec3::ZERO; n];
    let mut b = vec![ComplexVec3::ZERO; n];
    e[idx] = pol.scaled_re(half);
    e[pidx] = e[idx].conj();
    if standing {
        b[idx] = bpol * Complex64::new(0.0, -half);
    } else {
        b[idx] = bpol.scaled_re(half);
    }
    b[pidx] = b[idx].conj();
    let c = vec![Complex64::new(0.0, 0.0); n];
    SpectralState::from_grid(grid, e, b, c, 1e-12)
}

/// Gaussian transverse amplitudes with hermitian symmetry, reproducible from
/// the seed. Spectrum: |k|^exponent up to `cutoff_fraction · |k|max`, zero
/// beyond (and on nyquist planes and the zero mode).
fn random_solenoidal(params: &IcParams) -> Result<SpectralState> {
    let grid = params.grid;
    if !(params.cutoff_fraction > 0.0 && params.cutoff_fraction <= 1.0) {
        return Err(Error::BadParameter(format!(
            "cutoff_fraction {} outside (0, 1]",
            params.cutoff_fraction
        )));
    }
    let n = grid.n_modes();
    let cutoff = params.cutoff_fraction * grid.k_max();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut e = vec![ComplexVec3::ZERO; n];
    let mut b = vec![ComplexVec3::ZERO; n];
    for i in 0..n {
        let p = grid.pair_index(i);
        if p == i || p < i {
            continue; // self-paired modes stay zero; mirrors are filled below
        }
        let k = grid.wave_vector(i);
        let kn = k.norm();
        if kn == 0.0 || kn > cutoff || grid.on_nyquist_plane(i) {
            continue;
        }
        let u = k.unit().expect("nonzero k");
        let factor = params.amplitude * kn.powf(params.spectrum_exponent);
        let mut transverse = |rng: &mut ChaCha8Rng| -> ComplexVec3 {
            let mut draw = |rng: &mut ChaCha8Rng| -> Complex64 {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            };
            let v = ComplexVec3::new(draw(rng), draw(rng), draw(rng));
            let vt = v - u.to_complex() * u.dot_c(&v);
            vt.scaled_re(factor)
        };
        let ev = transverse(&mut rng);
        let bv = transverse(&mut rng);
        e[i] = ev;
        e[p] = ev.conj();
        b[i] = bv;
        b[p] = bv.conj();
    }
    let c = vec![Complex64::new(0.0, 0.0); n];
    SpectralState::from_grid(grid, e, b, c, 1e-12)
}

/// Purely longitudinal electric field realizing the prescribed constraint
/// table: E = c(k) k/|k|², B = 0. A fixed point of the flow (k×E = 0). The
/// mirror mode receives c(−k) = −conj(c(k)), the spectral signature of a
/// real static charge density.
fn coulomb_static(params: &IcParams) -> Result<SpectralState> {
    let grid = params.grid;
    let n = grid.n_modes();
    let mut e = vec![ComplexVec3::ZERO; n];
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut assigned = vec![false; n];
    for entry in &params.charges {
        if entry.wave == [0, 0, 0] {
            return Err(Error::ZeroModeCharge(format!("{}", entry.c)));
        }
        let idx = wave_index(&grid, entry.wave)?;
        if grid.on_nyquist_plane(idx) {
            return Err(Error::BadParameter(format!(
                "charge at {:?} sits on a nyquist plane",
                entry.wave
            )));
        }
        let pidx = grid.pair_index(idx);
        if assigned[idx] || assigned[pidx] {
            return Err(Error::BadParameter(format!(
                "charge at {:?} conflicts with an earlier entry",
                entry.wave
            )));
        }
        assigned[idx] = true;
        assigned[pidx] = true;
        let k = grid.wave_vector(idx);
        let k2 = k.norm_sqr();
        e[idx] = k.to_complex() * (entry.c / k2);
        c[idx] = entry.c;
        let kp = grid.wave_vector(pidx);
        let cp = -entry.c.conj();
        e[pidx] = kp.to_complex() * (cp / k2);
        c[pidx] = cp;
    }
    SpectralState::from_grid(grid, e, vec![ComplexVec3::ZERO; n], c, 1e-12)
}
