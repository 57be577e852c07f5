//! Snapshot and lattice-field file formats.
//!
//! Both are JSON documents written by a hand-rolled serializer so every
//! float carries 17 significant digits (exact f64 round trip) and repeated
//! runs emit byte-identical files. Reading goes through serde, which accepts
//! the exponent notation and ignores the optional provenance block.
//!
//! Snapshot: `{version: 1, meta?, grid: {...}|null, modes: [{k, E, B, w, c}]}`
//! with complex numbers as `[re, im]` pairs and `E`/`B` as three such pairs.
//! Lattice: `{version: 1, meta?, dims, lengths, E, B, rho|null}` in z-fastest
//! row-major order.

use crate::bridge::LatticeField;
use crate::error::{Error, Result};
use crate::state::{GridDescriptor, Mode, SpectralState};
use crate::vec3::{ComplexVec3, WaveVector};
use num_complex::Complex64;
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::Path;

/// Provenance carried by files the runner writes: which configuration
/// produced them and with which build.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, Deserialize)]
pub struct FileMeta {
    pub config_sha256: String,
    pub artifact_version: String,
}

/// 17 significant digits: one leading digit plus 16 after the point.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_complex(z: Complex64) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

fn fmt_cvec(v: &ComplexVec3) -> String {
    format!("[{},{},{}]", fmt_complex(v[0]), fmt_complex(v[1]), fmt_complex(v[2]))
}

fn fmt_meta(meta: Option<&FileMeta>) -> String {
    match meta {
        Some(m) => format!(
            "\"meta\":{{\"config_sha256\":{},\"artifact_version\":{}}},",
            serde_json::to_string(&m.config_sha256).expect("string encodes"),
            serde_json::to_string(&m.artifact_version).expect("string encodes"),
        ),
        None => String::new(),
    }
}

/// Serialize a state snapshot to a JSON string.
pub fn state_to_json(state: &SpectralState, meta: Option<&FileMeta>) -> String {
    let mut out = String::with_capacity(64 + state.n_modes() * 256);
    out.push_str("{\"version\":1,");
    out.push_str(&fmt_meta(meta));
    match state.grid() {
        Some(g) => {
            let _ = write!(
                out,
                "\"grid\":{{\"nx\":{},\"ny\":{},\"nz\":{},\"lx\":{},\"ly\":{},\"lz\":{}}},",
                g.nx,
                g.ny,
                g.nz,
                fmt_f64(g.lx),
                fmt_f64(g.ly),
                fmt_f64(g.lz)
            );
        }
        None => out.push_str("\"grid\":null,"),
    }
    out.push_str("\"modes\":[");
    for (i, m) in state.modes().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "{{\"k\":[{},{},{}],\"E\":{},\"B\":{},\"w\":{},\"c\":{}}}",
            fmt_f64(m.k.x),
            fmt_f64(m.k.y),
            fmt_f64(m.k.z),
            fmt_cvec(&m.e),
            fmt_cvec(&m.b),
            fmt_f64(m.w),
            fmt_complex(m.c)
        );
    }
    out.push_str("]}");
    out
}

pub fn save_state(path: &Path, state: &SpectralState, meta: Option<&FileMeta>) -> Result<()> {
    std::fs::write(path, state_to_json(state, meta))?;
    Ok(())
}

#[derive(Deserialize)]
struct SnapshotFile {
    version: u32,
    #[serde(default)]
    #[allow(dead_code)]
    meta: Option<FileMeta>,
    grid: Option<GridFile>,
    modes: Vec<ModeFile>,
}

#[derive(Deserialize)]
struct GridFile {
    nx: usize,
    ny: usize,
    nz: usize,
    lx: f64,
    ly: f64,
    lz: f64,
}

#[derive(Deserialize)]
struct ModeFile {
    k: [f64; 3],
    #[serde(rename = "E")]
    e: [[f64; 2]; 3],
    #[serde(rename = "B")]
    b: [[f64; 2]; 3],
    w: f64,
    c: [f64; 2],
}

fn cvec(pairs: &[[f64; 2]; 3]) -> ComplexVec3 {
    ComplexVec3::new(
        Complex64::new(pairs[0][0], pairs[0][1]),
        Complex64::new(pairs[1][0], pairs[1][1]),
        Complex64::new(pairs[2][0], pairs[2][1]),
    )
}

/// Parse a snapshot. Grid-tagged files are checked against the grid lattice
/// (the stored wave vectors must reproduce it bit-exactly); explicit mode
/// lists re-derive hermitian pairing from exact wave-vector negation.
pub fn state_from_json(text: &str) -> Result<SpectralState> {
    let file: SnapshotFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("snapshot parse: {e}")))?;
    if file.version != 1 {
        return Err(Error::Format(format!("unsupported snapshot version {}", file.version)));
    }
    match file.grid {
        Some(g) => {
            let grid = GridDescriptor { nx: g.nx, ny: g.ny, nz: g.nz, lx: g.lx, ly: g.ly, lz: g.lz };
            if file.modes.len() != grid.n_modes() {
                return Err(Error::Format(format!(
                    "grid expects {} modes, file has {}",
                    grid.n_modes(),
                    file.modes.len()
                )));
            }
            let mut e = Vec::with_capacity(file.modes.len());
            let mut b = Vec::with_capacity(file.modes.len());
            let mut c = Vec::with_capacity(file.modes.len());
            for (i, m) in file.modes.iter().enumerate() {
                let expect = grid.wave_vector(i);
                if m.k != [expect.x, expect.y, expect.z] {
                    return Err(Error::Format(format!(
                        "mode {i}: wave vector {:?} does not sit on the grid lattice",
                        m.k
                    )));
                }
                if m.w != 1.0 {
                    return Err(Error::Format(format!("mode {i}: grid states carry unit weights")));
                }
                e.push(cvec(&m.e));
                b.push(cvec(&m.b));
                c.push(Complex64::new(m.c[0], m.c[1]));
            }
            SpectralState::from_grid(grid, e, b, c, 1e-12)
        }
        None => {
            let modes = file
                .modes
                .iter()
                .map(|m| Mode {
                    k: WaveVector::new(m.k[0], m.k[1], m.k[2]),
                    e: cvec(&m.e),
                    b: cvec(&m.b),
                    w: m.w,
                    c: Complex64::new(m.c[0], m.c[1]),
                    hermitian_partner: None,
                })
                .collect();
            SpectralState::from_modes(modes)
        }
    }
}

pub fn load_state(path: &Path) -> Result<SpectralState> {
    state_from_json(&std::fs::read_to_string(path)?)
}

/// Serialize a lattice field to a JSON string.
pub fn lattice_to_json(field: &LatticeField, meta: Option<&FileMeta>) -> String {
    let g = field.grid;
    let mut out = String::with_capacity(64 + field.e.len() * 160);
    out.push_str("{\"version\":1,");
    out.push_str(&fmt_meta(meta));
    let _ = write!(
        out,
        "\"dims\":[{},{},{}],\"lengths\":[{},{},{}],",
        g.nx,
        g.ny,
        g.nz,
        fmt_f64(g.lx),
        fmt_f64(g.ly),
        fmt_f64(g.lz)
    );
    let samples = |out: &mut String, data: &[[f64; 3]]| {
        out.push('[');
        for (i, s) in data.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "[{},{},{}]", fmt_f64(s[0]), fmt_f64(s[1]), fmt_f64(s[2]));
        }
        out.push(']');
    };
    out.push_str("\"E\":");
    samples(&mut out, &field.e);
    out.push_str(",\"B\":");
    samples(&mut out, &field.b);
    out.push_str(",\"rho\":");
    match &field.rho {
        Some(r) => {
            out.push('[');
            for (i, x) in r.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&fmt_f64(*x));
            }
            out.push(']');
        }
        None => out.push_str("null"),
    }
    out.push('}');
    out
}

pub fn save_lattice(path: &Path, field: &LatticeField, meta: Option<&FileMeta>) -> Result<()> {
    std::fs::write(path, lattice_to_json(field, meta))?;
    Ok(())
}

#[derive(Deserialize)]
struct LatticeFile {
    version: u32,
    #[serde(default)]
    #[allow(dead_code)]
    meta: Option<FileMeta>,
    dims: [usize; 3],
    lengths: [f64; 3],
    #[serde(rename = "E")]
    e: Vec<[f64; 3]>,
    #[serde(rename = "B")]
    b: Vec<[f64; 3]>,
    rho: Option<Vec<f64>>,
}

pub fn lattice_from_json(text: &str) -> Result<LatticeField> {
    let file: LatticeFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("lattice parse: {e}")))?;
    if file.version != 1 {
        return Err(Error::Format(format!("unsupported lattice version {}", file.version)));
    }
    let grid = GridDescriptor {
        nx: file.dims[0],
        ny: file.dims[1],
        nz: file.dims[2],
        lx: file.lengths[0],
        ly: file.lengths[1],
        lz: file.lengths[2],
    };
    LatticeField::new(grid, file.e, file.b, file.rho)
}

pub fn load_lattice(path: &Path) -> Result<LatticeField> {
    lattice_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::{make_ic, IcKind, IcParams};
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    #[test]
    fn grid_snapshot_round_trips_bitwise() {
        let grid = GridDescriptor::cubic(4, TAU);
        let mut params = IcParams::for_grid(grid);
        params.seed = 9;
        let state = make_ic(IcKind::RandomSolenoidal, &params).unwrap();
        let text = state_to_json(&state, None);
        let back = state_from_json(&text).unwrap();
        assert_eq!(state, back);
    }

    #[test]
    fn explicit_snapshot_round_trips_and_rederives_pairing() {
        let k = WaveVector::new(0.0, 0.0, 1.0);
        let e = ComplexVec3::new(
            Complex64::new(1.0 / 3.0, -2.0 / 7.0),
            Complex64::new(0.1, 0.2),
            Complex64::new(0.0, 0.0),
        );
        let state = SpectralState::from_modes(vec![
            Mode::ingested(k, e, ComplexVec3::ZERO, 1.0),
            Mode::ingested(-k, e.conj(), ComplexVec3::ZERO, 1.0),
        ])
        .unwrap();
        let back = state_from_json(&state_to_json(&state, None)).unwrap();
        assert_eq!(state, back);
        assert_eq!(back.hermitian_pair_index(0).unwrap(), 1);
    }

    #[test]
    fn meta_block_survives_and_is_optional() {
        let state = SpectralState::from_modes(vec![]).unwrap();
        let meta = FileMeta { config_sha256: "abc".into(), artifact_version: "0.1.0".into() };
        let text = state_to_json(&state, Some(&meta));
        assert!(text.contains("\"config_sha256\":\"abc\""));
        let back = state_from_json(&text).unwrap();
        assert_eq!(back.n_modes(), 0);
    }

    #[test]
    fn rejects_unknown_version() {
        assert!(matches!(
            state_from_json("{\"version\":2,\"grid\":null,\"modes\":[]}"),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn rejects_off_lattice_wave_vectors() {
        let grid = GridDescriptor::cubic(2, TAU);
        let state = SpectralState::zero_on_grid(grid).unwrap();
        let text = state_to_json(&state, None).replace("\"k\":[0.0000000000000000e0", "\"k\":[5.0000000000000000e-1");
        assert!(matches!(state_from_json(&text), Err(Error::Format(_))));
    }

    #[test]
    fn lattice_round_trips_bitwise() {
        let grid = GridDescriptor { nx: 3, ny: 2, nz: 4, lx: 1.0, ly: 2.5, lz: TAU };
        let mut field = LatticeField::from_fn(grid, |x, y, z| {
            ([x.sin(), y.cos(), z * 0.1], [y.sin(), z.cos(), x * 0.3])
        });
        field.rho = Some((0..grid.n_modes()).map(|i| (i as f64).sqrt() / 7.0).collect());
        let text = lattice_to_json(&field, None);
        let back = lattice_from_json(&text).unwrap();
        assert_eq!(field, back);
    }

    proptest! {
        #[test]
        fn arbitrary_explicit_states_round_trip(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(0..6);
            let modes: Vec<Mode> = (0..n)
                .map(|_| {
                    let mut c = |r: &mut rand_chacha::ChaCha8Rng| {
                        Complex64::new(r.gen_range(-1e3..1e3), r.gen_range(-1e3..1e3))
                    };
                    Mode::ingested(
                        WaveVector::new(
                            rng.gen_range(-10.0..10.0),
                            rng.gen_range(-10.0..10.0),
                            rng.gen_range(-10.0..10.0),
                        ),
                        ComplexVec3::new(c(&mut rng), c(&mut rng), c(&mut rng)),
                        ComplexVec3::new(c(&mut rng), c(&mut rng), c(&mut rng)),
                        rng.gen_range(0.1..3.0),
                    )
                })
                .collect();
            let state = SpectralState::from_modes(modes).unwrap();
            let back = state_from_json(&state_to_json(&state, None)).unwrap();
            prop_assert_eq!(state, back);
        }
    }
}
