//! Independent ground truth: a face-unfolding enumerator that never reads
//! the closed-form table, and a lattice-graph shortest path on the surface.
//!
//! Checks return [`CheckReport`]s holding up to [`MAX_WITNESSES`] failing
//! inputs.  Sampling is driven by a seeded ChaCha generator so every report
//! is reproducible.

mod mesh;
mod unfold;

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distances::{min_over_six, squared_distance, BoxDims, PathLabel, SurfacePoint, TABLE_LABELS};

pub use mesh::{cells_along, mesh_geodesic, MeshError, MeshGeodesic, RING};
pub use unfold::{enumerate_unfoldings, face_sequence, unfold, Face, UnfoldingResult};

pub const MAX_WITNESSES: usize = 10;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// One failing input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub y: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub samples: usize,
    /// Largest observed error; relative unless the check says otherwise.
    pub max_error: f64,
    pub tolerance: f64,
    pub violations: usize,
    pub witnesses: Vec<Witness>,
    pub passed: bool,
}

impl CheckReport {
    fn new(name: &str, tolerance: f64) -> Self {
        CheckReport {
            name: name.to_string(),
            samples: 0,
            max_error: 0.0,
            tolerance,
            violations: 0,
            witnesses: Vec::new(),
            passed: true,
        }
    }

    fn record(&mut self, err: f64, w: impl FnOnce() -> Witness) {
        self.max_error = self.max_error.max(err);
        if err > self.tolerance || err.is_nan() {
            self.violations += 1;
            self.passed = false;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w());
            }
        }
    }

    fn merge(mut self, other: CheckReport) -> CheckReport {
        self.samples += other.samples;
        self.max_error = self.max_error.max(other.max_error);
        self.violations += other.violations;
        self.passed &= other.passed;
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
        self
    }
}

/// Draws boxes and points of `F`.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), a_range: (1e-3, 1.0), b_range: (1e-3, 4.0) }
    }

    pub fn with_ranges(seed: u64, a_range: (f64, f64), b_range: (f64, f64)) -> Self {
        Sampler { a_range, b_range, ..Sampler::new(seed) }
    }

    pub fn dims(&mut self) -> BoxDims {
        let a = self.rng.random_range(self.a_range.0..=self.a_range.1);
        let b = self.rng.random_range(self.b_range.0..=self.b_range.1);
        BoxDims::new(a, b).expect("sampling ranges lie in the plank")
    }

    pub fn point(&mut self, dims: &BoxDims) -> SurfacePoint {
        let x = self.rng.random_range(0.0..=dims.half_a());
        let y = self.rng.random_range(0.0..=0.5);
        SurfacePoint::new(dims, x, y).expect("sample lies in F")
    }

    pub fn instance(&mut self) -> (BoxDims, SurfacePoint) {
        let d = self.dims();
        let p = self.point(&d);
        (d, p)
    }
}

fn witness(d: &BoxDims, p: &SurfacePoint, detail: String) -> Witness {
    Witness { a: d.a(), b: d.b(), x: p.x(), y: p.y(), detail }
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}

fn unfolded_len(label: PathLabel, d: &BoxDims, p: &SurfacePoint) -> f64 {
    unfold(label, d, p).squared_length
}

/// Enumerator against the closed forms, twin paths against each other, and
/// the six-way minimum against every path with `|wrap| <= 3`.
pub fn verify_formulas(samples: usize, seed: u64) -> Vec<CheckReport> {
    const TOL: f64 = 1e-12;
    let mut s = Sampler::new(seed);
    let mut table = CheckReport::new("closed forms match unfoldings", TOL);
    let mut pairs = CheckReport::new("twin paths have equal length", TOL);
    let mut suff = CheckReport::new("six-way minimum equals minimum over |wrap| <= 3", TOL);
    for _ in 0..samples {
        let (d, p) = s.instance();
        for l in TABLE_LABELS {
            let got = unfolded_len(l, &d, &p);
            let want = squared_distance(l, &d, &p).expect("table label");
            table.record(rel(got, want), || {
                witness(&d, &p, format!("{l}: unfolding {got}, closed form {want}"))
            });
        }
        let all = enumerate_unfoldings(&d, &p, 3);
        for r in &all {
            let twin = r.label.twin();
            if twin == r.label || r.label.wrap.abs() > 2 {
                continue;
            }
            let t = unfolded_len(twin, &d, &p);
            pairs.record(rel(r.squared_length, t), || {
                witness(&d, &p, format!("{} {} vs {twin} {t}", r.label, r.squared_length))
            });
        }
        let m_all = all.iter().map(|r| r.squared_length).fold(f64::INFINITY, f64::min);
        let m6 = min_over_six(&d, &p, 0.0).value;
        suff.record(rel(m6, m_all), || witness(&d, &p, format!("six-way {m6}, all paths {m_all}")));
        table.samples += 1;
        pairs.samples += 1;
        suff.samples += 1;
    }
    vec![table, pairs, suff]
}

/// Paths wrapping three or more sides never beat the best path wrapping at
/// most two.
pub fn verify_wrap_bound(dims: &BoxDims, samples: usize, seed: u64, max_wrap: u8) -> CheckReport {
    let mut s = Sampler::new(seed);
    let mut rep = CheckReport::new(&format!("no path with 3 <= |wrap| <= {max_wrap} is shorter"), 1e-12);
    for _ in 0..samples {
        let p = s.point(dims);
        let all = enumerate_unfoldings(dims, &p, max_wrap.max(2));
        let (mut low, mut high) = (f64::INFINITY, (f64::INFINITY, PathLabel::R0));
        for r in &all {
            if r.label.wrap.abs() <= 2 {
                low = low.min(r.squared_length);
            } else if r.squared_length < high.0 {
                high = (r.squared_length, r.label);
            }
        }
        // positive when some long path undercuts the short ones
        let err = (low - high.0) / low;
        rep.record(err.max(0.0), || witness(dims, &p, format!("{} has {} below {low}", high.1, high.0)));
        rep.samples += 1;
    }
    rep
}

/// [`verify_wrap_bound`] over `boxes` random boxes.
pub fn verify_wrap_bound_sampled(
    boxes: usize,
    points_per_box: usize,
    seed: u64,
    max_wrap: u8,
) -> CheckReport {
    let mut s = Sampler::new(seed);
    let dims: Vec<BoxDims> = (0..boxes).map(|_| s.dims()).collect();
    let name = format!("no path with 3 <= |wrap| <= {max_wrap} is shorter");
    dims.par_iter()
        .enumerate()
        .map(|(k, d)| verify_wrap_bound(d, points_per_box, seed.wrapping_add(k as u64 + 1), max_wrap))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(CheckReport::new(&name, 1e-12), CheckReport::merge)
}

/// The fourth-path bound and the three pairwise dominances, all from
/// enumerated lengths.
pub fn verify_dominances(samples: usize, seed: u64) -> Vec<CheckReport> {
    const TOL: f64 = 1e-12;
    let mut s = Sampler::new(seed);
    let names = ["D1 >= min(R0, R1, U1)", "R2 <= L2", "U2 <= D2", "D1 <= L1"];
    let mut reps: Vec<CheckReport> = names.iter().map(|n| CheckReport::new(n, TOL)).collect();
    for _ in 0..samples {
        let (d, p) = s.instance();
        let v = |l| unfolded_len(l, &d, &p);
        let d1 = v(PathLabel::D1);
        let rhs = v(PathLabel::R0).min(v(PathLabel::R1)).min(v(PathLabel::U1));
        let checks = [
            (rhs, d1),
            (v(PathLabel::R2), v(PathLabel::L2)),
            (v(PathLabel::U2), v(PathLabel::D2)),
            (d1, v(PathLabel::L1)),
        ];
        for (rep, (small, large)) in reps.iter_mut().zip(checks) {
            let err = ((small - large) / large.max(f64::MIN_POSITIVE)).max(0.0);
            rep.record(err, || witness(&d, &p, format!("{small} > {large}")));
            rep.samples += 1;
        }
    }
    reps
}

/// Mesh distance lies in `[g, (1 + slack) g]` for `g` the six-way geodesic.
/// The error reported is the relative excess; lying below `g` by more than
/// rounding counts as a violation of any size.
pub fn verify_mesh(
    samples: usize,
    seed: u64,
    n: usize,
    slack: f64,
    a_range: (f64, f64),
    b_range: (f64, f64),
) -> Result<CheckReport, MeshError> {
    let mut s = Sampler::with_ranges(seed, a_range, b_range);
    let inst: Vec<_> = (0..samples).map(|_| s.instance()).collect();
    let name = format!("mesh geodesic (n = {n}) within {slack} above closed form");
    let parts: Result<Vec<CheckReport>, MeshError> = inst
        .par_iter()
        .map(|(d, p)| {
            let mut rep = CheckReport::new(&name, slack);
            let g = min_over_six(d, p, 0.0).value.sqrt();
            let m = mesh_geodesic(d, p, n)?.distance;
            let excess = (m - g) / g;
            let err = if excess < -1e-12 { f64::INFINITY } else { excess.max(0.0) };
            rep.record(err, || witness(d, p, format!("mesh {m}, geodesic {g}")));
            rep.samples = 1;
            Ok(rep)
        })
        .collect();
    Ok(parts?.into_iter().fold(CheckReport::new(&name, slack), CheckReport::merge))
}

/// One-time comparison of the hard-coded closed forms with the enumerator.
pub fn formula_self_check() -> Result<(), String> {
    static CHECK: OnceLock<Result<(), String>> = OnceLock::new();
    CHECK
        .get_or_init(|| {
            let reps = verify_formulas(64, DEFAULT_SEED);
            match reps.iter().find(|r| !r.passed) {
                None => Ok(()),
                Some(r) => Err(format!(
                    "{}: {}",
                    r.name,
                    r.witnesses.first().map(|w| w.detail.as_str()).unwrap_or("")
                )),
            }
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_agree() {
        for r in verify_formulas(500, 1) {
            assert!(r.passed, "{r:?}");
        }
        assert_eq!(formula_self_check(), Ok(()));
    }

    #[test]
    fn wrap_bound_examples() {
        for (a, b) in [(1.0, 2.5), (0.1, 0.1), (1.0, 10.0)] {
            let d = BoxDims::new(a, b).unwrap();
            let r = verify_wrap_bound(&d, 300, 7, 3);
            assert!(r.passed, "{r:?}");
        }
        let r = verify_wrap_bound_sampled(8, 50, 11, 4);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.samples, 400);
    }

    #[test]
    fn dominances_hold() {
        for r in verify_dominances(2000, 3) {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn mesh_examples() {
        let d = BoxDims::new(1.0, 2.5).unwrap();
        let p = SurfacePoint::new(&d, 0.0, 5.0 / 12.0).unwrap();
        let m = mesh_geodesic(&d, &p, 64).unwrap().distance;
        let g = 10.0 / 3.0;
        assert!(m >= g - 1e-12 && m <= 1.01 * g, "{m}");
        assert!(m >= d.b());
    }

    #[test]
    fn reports_serialize() {
        let r = verify_dominances(10, 1);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"passed\":true"));
    }
}
