//! The 47 classes of boxes, told apart by which path families are shortest
//! where on the fundamental region.
//!
//! Each class is a conjunction (class 5: a union of two) of sign conditions
//! on fourteen curves in `(a, b)` plus range conditions on `a` or `b`.
//! Equality rows are matched first, with a gradient-scaled tolerance;
//! open rows use their relations verbatim.

mod curves;
mod table;

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

pub use curves::{Constant, Curve};
pub use table::{allowed_smallest, ClassDefinition, Clause, Condition, Coord, Rel};

use crate::distances::{BoxDims, DomainError};

pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;
pub const NUM_CLASSES: u8 = 47;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("class id {0} is out of range 1..=47")]
    BadId(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ClassId(u8);

impl ClassId {
    pub fn new(id: i64) -> Result<Self, ClassError> {
        if (1..=NUM_CLASSES as i64).contains(&id) {
            Ok(ClassId(id as u8))
        } else {
            Err(ClassError::BadId(id))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = ClassId> {
        (1..=NUM_CLASSES).map(ClassId)
    }

    pub fn definition(self) -> &'static ClassDefinition {
        &class_table()[self.0 as usize - 1]
    }

    pub fn dimension(self) -> u8 {
        self.definition().dimension
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Classification {
    Class {
        id: ClassId,
    },
    /// No class, or more than one, matched within tolerance.
    AmbiguousNearBoundary {
        candidates: Vec<ClassId>,
    },
}

impl Classification {
    pub fn id(&self) -> Option<ClassId> {
        match self {
            Classification::Class { id } => Some(*id),
            Classification::AmbiguousNearBoundary { .. } => None,
        }
    }
}

pub fn class_table() -> &'static [ClassDefinition] {
    static TABLE: OnceLock<Vec<ClassDefinition>> = OnceLock::new();
    TABLE.get_or_init(table::build)
}

/// Every class whose definition holds at `(a, b)`, lower dimensions first.
pub fn matching_classes(a: f64, b: f64, boundary_tol: f64) -> Vec<ClassId> {
    let mut out = Vec::new();
    for dim in 0..=2 {
        for def in class_table().iter().filter(|d| d.dimension == dim) {
            if def.holds(a, b, boundary_tol) {
                out.push(def.id);
            }
        }
    }
    out
}

pub fn classify(a: f64, b: f64, boundary_tol: f64) -> Result<Classification, DomainError> {
    BoxDims::new(a, b)?;
    for dim in 0..=2 {
        let hits: Vec<ClassId> = class_table()
            .iter()
            .filter(|d| d.dimension == dim && d.holds(a, b, boundary_tol))
            .map(|d| d.id)
            .collect();
        match hits.len() {
            0 => continue,
            1 => return Ok(Classification::Class { id: hits[0] }),
            _ => return Ok(Classification::AmbiguousNearBoundary { candidates: hits }),
        }
    }
    Ok(Classification::AmbiguousNearBoundary { candidates: Vec::new() })
}

/// Smallest normalised distance from `(a, b)` to any curve or range bound
/// used by the table.
pub fn boundary_distance(a: f64, b: f64) -> f64 {
    let mut d = f64::INFINITY;
    for def in class_table() {
        for clause in &def.clauses {
            for c in clause {
                d = d.min(c.normalized(a, b).abs());
            }
        }
    }
    d
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub value: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Explanation {
    pub a: f64,
    pub b: f64,
    pub boundary_tol: f64,
    pub result: Classification,
    /// Definitions of the matched (or candidate) classes, evaluated at `(a, b)`.
    pub classes: Vec<ClassReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub id: ClassId,
    pub dimension: u8,
    pub allowed_smallest: Vec<String>,
    pub clauses: Vec<Vec<ConditionReport>>,
}

pub fn explain(a: f64, b: f64, boundary_tol: f64) -> Result<Explanation, DomainError> {
    let result = classify(a, b, boundary_tol)?;
    let ids = match &result {
        Classification::Class { id } => vec![*id],
        Classification::AmbiguousNearBoundary { candidates } => candidates.clone(),
    };
    let classes = ids
        .into_iter()
        .map(|id| {
            let def = id.definition();
            ClassReport {
                id,
                dimension: def.dimension,
                allowed_smallest: allowed_smallest(id).iter().map(|l| l.to_string()).collect(),
                clauses: def
                    .clauses
                    .iter()
                    .map(|cl| {
                        cl.iter()
                            .map(|c| ConditionReport {
                                condition: c.to_string(),
                                value: c.value(a, b),
                                satisfied: c.holds(a, b, boundary_tol),
                            })
                            .collect()
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(Explanation { a, b, boundary_tol, result, classes })
}

/// Outcome of classifying a regular grid of the plank.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub na: usize,
    pub nb: usize,
    pub b_max: f64,
    pub boundary_tol: f64,
    /// Points matched by exactly one class.
    pub matched: usize,
    /// Points within `boundary_tol` of a curve that matched zero or several classes.
    pub skipped: usize,
    pub failures: usize,
    /// Up to ten failing points with the classes they matched.
    pub witnesses: Vec<(f64, f64, Vec<ClassId>)>,
    pub passed: bool,
}

/// Classifies the grid `a = i/na, b = b_max j/nb` for `i, j >= 1` and checks
/// that every point away from the curves matches exactly one definition.
pub fn verify_partition(na: usize, nb: usize, b_max: f64, boundary_tol: f64) -> PartitionReport {
    use rayon::prelude::*;
    let outcomes: Vec<(f64, f64, Vec<ClassId>, bool)> = (0..na * nb)
        .into_par_iter()
        .map(|k| {
            let a = (k % na + 1) as f64 / na as f64;
            let b = b_max * (k / na + 1) as f64 / nb as f64;
            let hits = matching_classes(a, b, boundary_tol);
            let near = hits.len() != 1 && boundary_distance(a, b) <= boundary_tol;
            (a, b, hits, near)
        })
        .collect();
    let mut r = PartitionReport {
        na,
        nb,
        b_max,
        boundary_tol,
        matched: 0,
        skipped: 0,
        failures: 0,
        witnesses: Vec::new(),
        passed: false,
    };
    for (a, b, hits, near) in outcomes {
        if hits.len() == 1 {
            r.matched += 1;
        } else if near {
            r.skipped += 1;
        } else {
            r.failures += 1;
            if r.witnesses.len() < 10 {
                r.witnesses.push((a, b, hits));
            }
        }
    }
    r.passed = r.failures == 0;
    r
}

#[derive(Debug, Clone, Serialize)]
pub struct AreaEstimate {
    pub id: ClassId,
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub samples: usize,
    pub hits: usize,
    pub area: f64,
    /// One binomial standard error of `area`.
    pub std_error: f64,
}

/// Monte Carlo area of a class inside a window of the plank.  Ambiguous
/// points count as misses.
pub fn estimate_area(
    id: ClassId,
    a_range: (f64, f64),
    b_range: (f64, f64),
    samples: usize,
    seed: u64,
) -> AreaEstimate {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..samples)
        .map(|_| {
            // a = 0 is outside the plank
            let a = a_range.1 - rng.random::<f64>() * (a_range.1 - a_range.0);
            (a, rng.random_range(b_range.0..b_range.1))
        })
        .collect();
    let hits = {
        use rayon::prelude::*;
        pts.par_iter()
            .filter(|&&(a, b)| matches!(classify(a, b, DEFAULT_BOUNDARY_TOL), Ok(Classification::Class { id: c }) if c == id))
            .count()
    };
    let window = (a_range.1 - a_range.0) * (b_range.1 - b_range.0);
    let p = hits as f64 / samples.max(1) as f64;
    AreaEstimate {
        id,
        a_range,
        b_range,
        samples,
        hits,
        area: window * p,
        std_error: window * (p * (1.0 - p) / samples.max(1) as f64).sqrt(),
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "bracket without sign change");
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        if (f(m) <= 0.0) == (flo <= 0.0) {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

const REP_2D: [(u8, [(f64, f64); 4]); 27] = [
    (1, [(0.0681, 0.4861), (0.4593, 0.4792), (0.2746, 0.1088), (0.0585, 0.7765)]),
    (2, [(0.5776, 0.1773), (0.8757, 0.0515), (0.3779, 0.0402), (0.5914, 0.0658)]),
    (3, [(0.6464, 0.5316), (0.6524, 0.5055), (0.6409, 0.5154), (0.6592, 0.5173)]),
    (5, [(0.8801, 0.4309), (0.6896, 0.5863), (0.8969, 0.8900), (0.9654, 0.7187)]),
    (7, [(0.4129, 0.7297), (0.5541, 0.6120), (0.5240, 0.6896), (0.3538, 0.8016)]),
    (9, [(0.5191, 0.8386), (0.1937, 0.9778), (0.6408, 0.7003), (0.3770, 0.8863)]),
    (10, [(0.7388, 0.7972), (0.7720, 0.8674), (0.6997, 0.7221), (0.7194, 0.7598)]),
    (12, [(0.7813, 0.8891), (0.7908, 0.9111), (0.7863, 0.9004), (0.7839, 0.8944)]),
    (13, [(0.797835, 0.926951), (0.809578, 0.954905), (0.803613, 0.940833), (0.791506, 0.911219)]),
    (15, [(0.8757, 0.9690), (0.8015, 0.9060), (0.9747, 0.9934), (0.9120, 0.9836)]),
    (16, [(0.6181, 0.9677), (0.7436, 0.9461), (0.2875, 0.9924), (0.7594, 0.9881)]),
    (17, [(0.8185, 0.9812), (0.8035, 0.9423), (0.8106, 0.9606), (0.8149, 0.9715)]),
    (22, [(0.0417, 2.3170), (0.5076, 1.8143), (0.0362, 3.2083), (0.3011, 2.2056)]),
    (23, [(0.6082, 1.5584), (0.4379, 1.4138), (0.8482, 1.5481), (0.7587, 1.6152)]),
    (24, [(0.5567, 1.3510), (0.2884, 1.1919), (0.8786, 1.4717), (0.4112, 1.2582)]),
    (25, [(0.4944, 1.1258), (0.8842, 1.3446), (0.1716, 1.0322), (0.6140, 1.2533)]),
    (26, [(0.9526, 1.4487), (0.8595, 1.0973), (0.8969, 1.2411), (0.9157, 1.3716)]),
    (28, [(0.9631, 1.0601), (0.8745, 1.0326), (0.9689, 1.2533), (0.9057, 1.1287)]),
    (30, [(0.9417, 1.5110), (0.9338, 1.4850), (0.9706, 1.5062), (0.9518, 1.4947)]),
    (31, [(0.9312, 1.5323), (0.9380, 1.5294), (0.9357, 1.5313), (0.9301, 1.5338)]),
    (34, [(0.9537, 1.5529), (0.9486, 1.6511), (0.9862, 1.5232), (0.9682, 1.5489)]),
    (36, [(0.9715, 1.7492), (0.9867, 1.9667), (0.9905, 1.5622), (0.9757, 1.9470)]),
    (39, [(0.8685, 1.7656), (0.8876, 1.6331), (0.7438, 1.6958), (0.9001, 1.8319)]),
    (41, [(0.4475, 3.1852), (0.5707, 2.1639), (0.3216, 3.3380), (0.7345, 3.3572)]),
    (43, [(0.9417, 1.9035), (0.9424, 1.7898), (0.9327, 1.8499), (0.9570, 1.9522)]),
    (45, [(0.9566, 3.2755), (0.9058, 2.7902), (0.9510, 2.1184), (0.9101, 3.4893)]),
    (46, [(0.9786, 2.0748), (0.9951, 3.3981), (0.9913, 2.4365), (0.9872, 2.0388)]),
];

fn c14_at_b(b: f64) -> f64 {
    bisect(|a| Curve::C14.eval(a, b), 1e-9, 1.0)
}

fn compute_representative(id: u8) -> (f64, f64) {
    if let Some((_, pts)) = REP_2D.iter().find(|(k, _)| *k == id) {
        return pts[0];
    }
    let t = Constant::TwoSqrt2Minus2.value();
    let s7 = Constant::HalfSqrt7MinusHalf.value();
    match id {
        4 => (2.0 / 3.0, 0.5),
        6 => (1.0, 0.5),
        8 => (0.5, 0.75),
        11 => (0.72, bisect(|b| Curve::C4.eval(0.72, b), 0.5, 1.0)),
        14 => (0.805, (2f64.sqrt() + 1.0) * 0.805 - 1.0),
        18 => (0.5, 1.0),
        19 => (0.5 * (s7 + t), 1.0),
        20 => (t, 1.0),
        21 => (0.9, 1.0),
        27 => (0.9, (0.81 + 1.8) / 2.2),
        29 => (1.0, 1.25),
        32 => (1.0, 1.5),
        33 => (0.96, 1.0 + 1.0 / 1.92),
        35 => (c14_at_b(1.6), 1.6),
        37 => (1.0, 1.75),
        38 => (0.8, 1.0 + 1.0 / 1.6),
        40 => (1.0 / 3.0, 2.5),
        42 => (c14_at_b(1.82), 1.82),
        44 => (c14_at_b(2.5), 2.5),
        47 => (1.0, 2.5),
        _ => unreachable!("every class has a representative"),
    }
}

/// A point of the class: interior with margin for open classes, on the
/// defining curve for curve classes, the exact point for the two point classes.
pub fn representative(id: ClassId) -> (f64, f64) {
    static REPS: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    REPS.get_or_init(|| (1..=NUM_CLASSES).map(compute_representative).collect())[id.0 as usize - 1]
}

/// Extra interior points of an open class, spread across it; empty for
/// curve and point classes.
pub fn stability_samples(id: ClassId) -> Vec<(f64, f64)> {
    REP_2D.iter().find(|(k, _)| *k == id.0).map(|(_, pts)| pts[1..].to_vec()).unwrap_or_default()
}
