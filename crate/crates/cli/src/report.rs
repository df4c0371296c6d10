//! Records printed by the subcommands, in human, JSON or CSV form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use boxgeo_core::algebra::{SpontaneousCheck, Q};
use boxgeo_core::classifier::{ClassId, Classification, Explanation, PartitionReport};
use boxgeo_core::oracle::CheckReport;
use boxgeo_core::regions::{RegionSignature, SideItem, SignatureSuite, CORNERS};
use boxgeo_core::PathLabel;

/// `println!` that stops quietly when stdout is closed.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

fn print_json<T: Serialize>(v: &T) {
    out!("{}", serde_json::to_string_pretty(v).expect("records serialise"));
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn join_labels(ls: &[PathLabel], sep: &str) -> String {
    ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(sep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub y: f64,
    /// Smallest squared distance.
    pub squared: f64,
    pub geodesic: f64,
    pub argmin: Vec<String>,
    /// Squared distance per candidate label.
    pub values: BTreeMap<String, f64>,
}

impl DistanceRecord {
    pub fn print(&self, fmt: Format) {
        match fmt {
            Format::Json => print_json(self),
            Format::Csv => {
                out!("label,squared,distance,argmin");
                for (l, v) in &self.values {
                    out!("{l},{v},{},{}", v.sqrt(), self.argmin.contains(l) as u8);
                }
            }
            Format::Human => {
                out!("a = {}, b = {}, (x, y) = ({}, {})", self.a, self.b, self.x, self.y);
                out!("geodesic  {}", self.geodesic);
                out!("squared   {}", self.squared);
                out!("argmin    {}", self.argmin.join(", "));
                for (l, v) in &self.values {
                    let mark = if self.argmin.contains(l) { " *" } else { "" };
                    out!("  {l}  {v:<22} {}{mark}", v.sqrt());
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyRecord {
    pub a: f64,
    pub b: f64,
    pub boundary_tol: f64,
    pub class: Option<ClassId>,
    pub result: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explanation: Option<Explanation>,
}

impl ClassifyRecord {
    pub fn new(a: f64, b: f64, boundary_tol: f64, result: Classification) -> Self {
        ClassifyRecord { a, b, boundary_tol, class: result.id(), result, explanation: None }
    }

    pub fn from_explanation(e: Explanation) -> Self {
        let mut r = Self::new(e.a, e.b, e.boundary_tol, e.result.clone());
        r.explanation = Some(e);
        r
    }

    fn candidates(&self) -> Vec<ClassId> {
        match &self.result {
            Classification::Class { id } => vec![*id],
            Classification::AmbiguousNearBoundary { candidates } => candidates.clone(),
        }
    }

    pub fn print(&self, fmt: Format) {
        match fmt {
            Format::Json => print_json(self),
            Format::Csv => {
                out!("a,b,class,candidates");
                let c = self.candidates().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
                let class = self.class.map(|c| c.to_string()).unwrap_or_default();
                out!("{},{},{class},{c}", self.a, self.b);
            }
            Format::Human => {
                match &self.result {
                    Classification::Class { id } => out!("{id}"),
                    Classification::AmbiguousNearBoundary { candidates } if candidates.is_empty() => {
                        out!("ambiguous near a class boundary: no class matched")
                    }
                    Classification::AmbiguousNearBoundary { candidates } => out!(
                        "ambiguous near a class boundary: candidates {}",
                        candidates.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                    ),
                }
                if let Some(e) = &self.explanation {
                    for c in &e.classes {
                        out!(
                            "class {} (dimension {}), smallest paths {}",
                            c.id,
                            c.dimension,
                            c.allowed_smallest.join(", ")
                        );
                        for (k, clause) in c.clauses.iter().enumerate() {
                            if c.clauses.len() > 1 {
                                out!("  clause {}:", k + 1);
                            }
                            for cond in clause {
                                let mark = if cond.satisfied { "x" } else { " " };
                                out!("  [{mark}] {}   (value {:+.3e})", cond.condition, cond.value);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionsRecord {
    pub a: f64,
    pub b: f64,
    pub resolution: usize,
    pub tie_tol: f64,
    pub class: Option<ClassId>,
    pub tie_fraction: f64,
    pub strict_labels: Vec<String>,
    pub signature: RegionSignature,
}

fn side_items(items: &[SideItem]) -> String {
    items
        .iter()
        .map(|i| match i {
            SideItem::Run(l) => join_labels(l, "="),
            SideItem::Point(l) => format!("[{}]", join_labels(l, ",")),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl RegionsRecord {
    pub fn print(&self, fmt: Format) {
        let s = &self.signature;
        match fmt {
            Format::Json => print_json(self),
            Format::Csv => {
                out!("part,key,value");
                for (c, ls) in CORNERS.iter().zip(&s.corner_labels) {
                    out!("corner,{},{}", csv_field(c), join_labels(ls, " "));
                }
                for (side, items) in &s.side_sequences {
                    out!("side,{side:?},{}", csv_field(&side_items(items)));
                }
                for (l, n) in &s.components {
                    out!("components,{l},{n}");
                }
                for (p, q) in &s.adjacency {
                    out!("adjacent,{p},{q}");
                }
                for j in &s.interior_junctions {
                    out!("junction,,{}", join_labels(j, " "));
                }
            }
            Format::Human => {
                let class = self.class.map(|c| c.to_string()).unwrap_or_else(|| "ambiguous".into());
                out!("a = {}, b = {}, class {class}", self.a, self.b);
                out!(
                    "resolution {}, tie cells {:.2}%, strictly smallest: {}",
                    self.resolution,
                    100.0 * self.tie_fraction,
                    self.strict_labels.join(", ")
                );
                out!("corners:");
                for (c, ls) in CORNERS.iter().zip(&s.corner_labels) {
                    out!("  {c:<10} {}", join_labels(ls, "/"));
                }
                out!("sides:");
                for (side, items) in &s.side_sequences {
                    out!("  {side:?}: {}", side_items(items));
                }
                let comps: Vec<String> = s.components.iter().map(|(l, n)| format!("{l}:{n}")).collect();
                out!("components: {}", comps.join(" "));
                let adj: Vec<String> = s.adjacency.iter().map(|(p, q)| format!("{p}-{q}")).collect();
                out!("adjacent: {}", adj.join(" "));
                let junc: Vec<String> = s.interior_junctions.iter().map(|j| join_labels(j, "/")).collect();
                out!("interior junctions: {}", junc.join(" "));
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AreaRow {
    pub id: ClassId,
    pub cells: usize,
    pub area: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlankRecord {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub grid: (usize, usize),
    pub ambiguous: usize,
    pub areas: Vec<AreaRow>,
}

impl PlankRecord {
    pub fn print(&self, fmt: Format) {
        match fmt {
            Format::Json => print_json(self),
            Format::Csv => {
                out!("class,cells,area");
                for r in &self.areas {
                    out!("{},{},{}", r.id, r.cells, r.area);
                }
            }
            Format::Human => {
                out!(
                    "window a in [{}, {}], b in [{}, {}], grid {}x{}, {} ambiguous cells",
                    self.a_range.0,
                    self.a_range.1,
                    self.b_range.0,
                    self.b_range.1,
                    self.grid.0,
                    self.grid.1,
                    self.ambiguous
                );
                out!("class  cells      area");
                for r in &self.areas {
                    out!("{:>5}  {:>9}  {:.6}", r.id, r.cells, r.area);
                }
            }
        }
    }
}

/// One line of a suite's verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Failing inputs, already formatted.
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckLine>,
    /// The full report of the suite.
    pub report: serde_json::Value,
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialise")
}

impl SuiteResult {
    fn build(suite: &str, checks: Vec<CheckLine>, report: serde_json::Value) -> Self {
        SuiteResult { suite: suite.to_string(), passed: checks.iter().all(|c| c.passed), checks, report }
    }

    pub fn from_checks(suite: &str, reports: Vec<CheckReport>) -> Self {
        let checks = reports
            .iter()
            .map(|r| CheckLine {
                name: r.name.clone(),
                passed: r.passed,
                detail: format!(
                    "{} samples, max error {:.3e} (tolerance {:.0e}), {} violations",
                    r.samples, r.max_error, r.tolerance, r.violations
                ),
                witnesses: r
                    .witnesses
                    .iter()
                    .map(|w| format!("a = {}, b = {}, (x, y) = ({}, {}): {}", w.a, w.b, w.x, w.y, w.detail))
                    .collect(),
            })
            .collect();
        Self::build(suite, checks, to_value(&reports))
    }

    pub fn partition(r: PartitionReport) -> Self {
        let check = CheckLine {
            name: format!("every point of a {}x{} grid matches exactly one class", r.na, r.nb),
            passed: r.passed,
            detail: format!(
                "{} matched, {} skipped within {:.0e} of a curve, {} failures",
                r.matched, r.skipped, r.boundary_tol, r.failures
            ),
            witnesses: r
                .witnesses
                .iter()
                .map(|(a, b, ids)| {
                    let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
                    format!("a = {a}, b = {b}: matched [{}]", ids.join(", "))
                })
                .collect(),
        };
        Self::build("partition", vec![check], to_value(&r))
    }

    pub fn signatures(s: SignatureSuite) -> Self {
        let errors: Vec<String> = s
            .classes
            .iter()
            .filter_map(|c| c.error.as_ref().map(|e| format!("class {}: {e}", c.id)))
            .collect();
        let line = |name: &str, passed: bool, detail: String, witnesses: Vec<String>| CheckLine {
            name: name.to_string(),
            passed,
            detail,
            witnesses,
        };
        let dups: Vec<String> = s.duplicates.iter().map(|(p, q)| format!("classes {p} and {q}")).collect();
        let unstable: Vec<String> = s
            .classes
            .iter()
            .flat_map(|c| c.unstable.iter().map(move |(a, b)| format!("class {} at a = {a}, b = {b}", c.id)))
            .collect();
        let inadmissible: Vec<String> = s
            .classes
            .iter()
            .filter(|c| c.signature.is_some() && !c.admissible)
            .map(|c| format!("class {}: {}", c.id, join_labels(&c.strict_labels, ", ")))
            .collect();
        let ends: Vec<String> = s
            .classes
            .iter()
            .filter(|c| c.signature.is_some() && !c.endpoints_consistent)
            .map(|c| format!("class {}", c.id))
            .collect();
        let samples: usize = s.classes.iter().map(|c| c.samples).sum();
        let checks = vec![
            line(
                "representative signatures are pairwise distinct",
                s.distinct,
                format!("{} classes at resolution {}", s.classes.len(), s.resolution),
                errors.iter().cloned().chain(dups).collect(),
            ),
            line(
                "class 13 has two U0 regions",
                s.class13_u0_components == Some(2),
                match s.class13_u0_components {
                    Some(n) => format!("U0 components: {n}"),
                    None => "no signature".to_string(),
                },
                Vec::new(),
            ),
            line(
                "signatures are stable within each open class",
                s.stable,
                format!("{samples} extra samples"),
                unstable,
            ),
            line("strict labels are allowed for the class", s.admissible, String::new(), inadmissible),
            line(
                "every candidate is smallest somewhere",
                s.necessary,
                format!("missing: [{}]", join_labels(&s.missing_labels, ", ")),
                Vec::new(),
            ),
            line("side sequences end at the corner labels", ends.is_empty(), String::new(), ends),
        ];
        Self::build("signatures", checks, to_value(&s))
    }

    pub fn spontaneous(v: Vec<SpontaneousCheck>) -> Self {
        let checks = v
            .iter()
            .map(|c| {
                let labels = join_labels(&c.labels, ", ");
                let mut detail = format!("factors {{{}}}", c.factors.join(", "));
                if let (Some(l), Some(sq)) = (&c.inner_square_of, c.inner_is_square) {
                    detail.push_str(&format!(
                        "; inner resultant {} square of {l}",
                        if sq { "is a" } else { "is not a" }
                    ));
                }
                CheckLine {
                    name: format!("({labels}) factors match {{{}}}", c.expected.join(", ")),
                    passed: c.passed,
                    detail,
                    witnesses: Vec::new(),
                }
            })
            .collect();
        Self::build("spontaneous", checks, to_value(&v))
    }

    pub fn conics(v: Vec<(PathLabel, PathLabel, Q)>) -> Self {
        let bad: Vec<String> = v
            .iter()
            .filter(|(_, _, d)| *d <= Q::from_integer(0.into()))
            .map(|(p, q, d)| format!("{p}/{q}: {d}"))
            .collect();
        let detail = v.iter().map(|(p, q, d)| format!("{p}/{q}: {d}")).collect::<Vec<_>>().join(", ");
        let check = CheckLine {
            name: format!("all {} quadratic pair curves are hyperbolic", v.len()),
            passed: bad.is_empty() && v.len() == 13,
            detail,
            witnesses: bad,
        };
        let report: Vec<serde_json::Value> = v
            .iter()
            .map(|(p, q, d)| serde_json::json!({"labels": [p, q], "discriminant": d.to_string()}))
            .collect();
        Self::build("conics", vec![check], serde_json::Value::Array(report))
    }
}

pub fn print_suites(results: &[SuiteResult], fmt: Format) {
    match fmt {
        Format::Json => print_json(&results),
        Format::Csv => {
            out!("suite,check,passed,detail");
            for r in results {
                for c in &r.checks {
                    out!("{},{},{},{}", r.suite, csv_field(&c.name), c.passed, csv_field(&c.detail));
                }
            }
        }
        Format::Human => {
            for r in results {
                for c in &r.checks {
                    let verdict = if c.passed { "PASS" } else { "FAIL" };
                    if c.detail.is_empty() {
                        out!("{verdict} {}: {}", r.suite, c.name);
                    } else {
                        out!("{verdict} {}: {} ({})", r.suite, c.name, c.detail);
                    }
                    for w in &c.witnesses {
                        out!("    {w}");
                    }
                }
            }
        }
    }
}
