//! `boxgeo`: distances, classes, labelled regions and verification suites
//! for antipodal points on a `1 x a x b` box.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use boxgeo_core::algebra::{quadratic_pair_discriminants, spontaneous_checks};
use boxgeo_core::classifier::{classify, explain, verify_partition, ClassId, DEFAULT_BOUNDARY_TOL};
use boxgeo_core::distances::DEFAULT_TIE_TOL;
use boxgeo_core::oracle::{
    verify_dominances, verify_formulas, verify_mesh, verify_wrap_bound_sampled, CheckReport, DEFAULT_SEED,
};
use boxgeo_core::regions::{
    boundary_arcs, label_region, plank_grid, plank_svg, raster_csv, region_svg, signature, verify_signatures,
    DEFAULT_RESOLUTION, MIN_RESOLUTION,
};
use boxgeo_core::{min_over_six, squared_distance, BoxDims, SurfacePoint, CANONICAL_SIX};

use report::{AreaRow, ClassifyRecord, DistanceRecord, Format, PlankRecord, RegionsRecord, SuiteResult};

#[derive(Debug, Parser)]
#[command(name = "boxgeo", version, about = "Spider-and-fly shortest paths on a 1 x a x b box")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Human, global = true)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Six candidate distances from (x, y) on the top face to its antipode.
    Distance {
        #[arg(long, value_parser = parse_number)]
        a: f64,
        #[arg(long, value_parser = parse_number)]
        b: f64,
        #[arg(long, value_parser = parse_number)]
        x: f64,
        #[arg(long, value_parser = parse_number)]
        y: f64,
        /// Relative tolerance for reporting ties in the minimum.
        #[arg(long, value_parser = parse_number, default_value_t = DEFAULT_TIE_TOL)]
        tie_tol: f64,
    },
    /// Equivalence class of the box (a, b).
    Classify {
        #[arg(long, value_parser = parse_number)]
        a: f64,
        #[arg(long, value_parser = parse_number)]
        b: f64,
        #[arg(long, value_parser = parse_number, default_value_t = DEFAULT_BOUNDARY_TOL)]
        boundary_tol: f64,
        /// Print the conditions of the matched classes.
        #[arg(long)]
        explain: bool,
    },
    /// Which path is shortest where on the fundamental region.
    Regions {
        #[arg(long, value_parser = parse_number)]
        a: f64,
        #[arg(long, value_parser = parse_number)]
        b: f64,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, value_parser = parse_number, default_value_t = DEFAULT_TIE_TOL)]
        tie_tol: f64,
        /// Write the labelled region as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the raster as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Classes over a window of the (a, b) plank.
    Plank {
        /// Cells along a and b, as `NAxNB`.
        #[arg(long, default_value = "800x2400", value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long, value_parser = parse_number, default_value_t = 0.0)]
        a_min: f64,
        #[arg(long, value_parser = parse_number, default_value_t = 1.0)]
        a_max: f64,
        #[arg(long, value_parser = parse_number, default_value_t = 0.0)]
        b_min: f64,
        #[arg(long, value_parser = parse_number, default_value_t = 3.0)]
        b_max: f64,
        #[arg(long, value_parser = parse_number, default_value_t = DEFAULT_BOUNDARY_TOL)]
        boundary_tol: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run a verification suite; exits with 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Sample count; each suite has its own default.
        #[arg(long)]
        samples: Option<usize>,
        /// Largest wrap enumerated by the wrap-bound suite.
        #[arg(long, default_value_t = 3)]
        max_wrap: u8,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, value_parser = parse_number, default_value_t = DEFAULT_TIE_TOL)]
        tie_tol: f64,
        #[arg(long, value_parser = parse_number, default_value_t = DEFAULT_BOUNDARY_TOL)]
        boundary_tol: f64,
        /// Mesh cells per unit length for the mesh suite.
        #[arg(long, default_value_t = 256)]
        mesh_n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Formulas,
    Wrapbound,
    Dominance,
    Partition,
    Signatures,
    Spontaneous,
    Conics,
    Mesh,
    /// Every suite except `mesh`.
    All,
}

/// Decimal, scientific or `p/q`.
fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
            let q: f64 = q.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            p / q
        }
        None => s.parse().map_err(|e| format!("bad number {s:?}: {e}"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (p, q) =
        s.split_once(['x', 'X']).ok_or_else(|| format!("grid must look like 800x2400, got {s:?}"))?;
    let p: usize = p.parse().map_err(|e| format!("bad grid width: {e}"))?;
    let q: usize = q.parse().map_err(|e| format!("bad grid height: {e}"))?;
    if p == 0 || q == 0 {
        return Err("grid sizes must be positive".into());
    }
    Ok((p, q))
}

/// Exit code 2 with a message.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

// negated comparisons so that NaN is rejected too
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check_dims(a: f64, b: f64) -> Result<BoxDims, UsageError> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(UsageError(format!("a must satisfy 0 < a <= 1 (got {a})")));
    }
    if !(b > 0.0) {
        return Err(UsageError(format!("b must satisfy b > 0 (got {b})")));
    }
    Ok(BoxDims::new(a, b)?)
}

fn configure_threads() {
    if let Some(n) = std::env::var("BOXGEO_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let fmt = match cli.format {
        FormatArg::Human => Format::Human,
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    match run(cli.command, fmt) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when a verification failed.
fn run(cmd: Command, fmt: Format) -> Result<bool, UsageError> {
    match cmd {
        Command::Distance { a, b, x, y, tie_tol } => {
            let d = check_dims(a, b)?;
            let p = SurfacePoint::new(&d, x, y)?;
            let m = min_over_six(&d, &p, tie_tol);
            let values = CANONICAL_SIX
                .iter()
                .map(|&l| (l.to_string(), squared_distance(l, &d, &p).expect("canonical label")))
                .collect();
            let rec = DistanceRecord {
                a,
                b,
                x: p.x(),
                y: p.y(),
                squared: m.value,
                geodesic: m.geodesic,
                argmin: m.argmin.iter().map(|l| l.to_string()).collect(),
                values,
            };
            rec.print(fmt);
            Ok(true)
        }
        Command::Classify { a, b, boundary_tol, explain: with_explain } => {
            check_dims(a, b)?;
            let rec = if with_explain {
                let e = explain(a, b, boundary_tol)?;
                ClassifyRecord::from_explanation(e)
            } else {
                let c = classify(a, b, boundary_tol)?;
                ClassifyRecord::new(a, b, boundary_tol, c)
            };
            rec.print(fmt);
            Ok(true)
        }
        Command::Regions { a, b, resolution, tie_tol, svg, csv } => {
            let d = check_dims(a, b)?;
            if resolution < MIN_RESOLUTION {
                return Err(UsageError(format!(
                    "resolution must be at least {MIN_RESOLUTION} (got {resolution})"
                )));
            }
            let r = label_region(&d, resolution, tie_tol)?;
            let arcs = boundary_arcs(&d);
            if let Some(path) = &svg {
                std::fs::write(path, region_svg(&r, &arcs))
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            if let Some(path) = &csv {
                std::fs::write(path, raster_csv(&r))
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            let sig = signature(&r)?;
            let class = classify(a, b, DEFAULT_BOUNDARY_TOL)?.id();
            let rec = RegionsRecord {
                a,
                b,
                resolution,
                tie_tol,
                class,
                tie_fraction: r.tie_fraction(),
                strict_labels: r.strict_labels().iter().map(|l| l.to_string()).collect(),
                signature: sig,
            };
            rec.print(fmt);
            Ok(true)
        }
        Command::Plank { grid, a_min, a_max, b_min, b_max, boundary_tol, svg } => {
            if !(0.0 <= a_min && a_min < a_max && a_max <= 1.0) {
                return Err(UsageError("the a window must satisfy 0 <= a-min < a-max <= 1".into()));
            }
            if !(0.0 <= b_min && b_min < b_max) {
                return Err(UsageError("the b window must satisfy 0 <= b-min < b-max".into()));
            }
            let g = plank_grid((a_min, a_max), (b_min, b_max), grid.0, grid.1, boundary_tol);
            if let Some(path) = &svg {
                std::fs::write(path, plank_svg(&g))
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            let cell = (a_max - a_min) * (b_max - b_min) / (grid.0 * grid.1) as f64;
            let mut counts = [0usize; 48];
            for id in g.cells.iter().flatten() {
                counts[*id as usize] += 1;
            }
            let areas = ClassId::all()
                .filter(|id| counts[id.get() as usize] > 0)
                .map(|id| AreaRow {
                    id,
                    cells: counts[id.get() as usize],
                    area: counts[id.get() as usize] as f64 * cell,
                })
                .collect();
            let rec = PlankRecord {
                a_range: (a_min, a_max),
                b_range: (b_min, b_max),
                grid,
                ambiguous: g.ambiguous(),
                areas,
            };
            rec.print(fmt);
            Ok(true)
        }
        Command::Verify { suite, seed, samples, max_wrap, resolution, tie_tol, boundary_tol, mesh_n } => {
            let suites: Vec<Suite> = if suite == Suite::All {
                vec![
                    Suite::Formulas,
                    Suite::Wrapbound,
                    Suite::Dominance,
                    Suite::Partition,
                    Suite::Signatures,
                    Suite::Spontaneous,
                    Suite::Conics,
                ]
            } else {
                vec![suite]
            };
            let opts = VerifyOpts { seed, samples, max_wrap, resolution, tie_tol, boundary_tol, mesh_n };
            let mut results = Vec::new();
            for s in suites {
                results.push(run_suite(s, &opts)?);
            }
            report::print_suites(&results, fmt);
            Ok(results.iter().all(|r| r.passed))
        }
    }
}

struct VerifyOpts {
    seed: u64,
    samples: Option<usize>,
    max_wrap: u8,
    resolution: usize,
    tie_tol: f64,
    boundary_tol: f64,
    mesh_n: usize,
}

fn checks(suite: &str, reports: Vec<CheckReport>) -> SuiteResult {
    SuiteResult::from_checks(suite, reports)
}

fn run_suite(suite: Suite, o: &VerifyOpts) -> Result<SuiteResult, UsageError> {
    Ok(match suite {
        Suite::Formulas => checks("formulas", verify_formulas(o.samples.unwrap_or(10_000), o.seed)),
        Suite::Wrapbound => {
            if o.max_wrap < 3 {
                return Err(UsageError("max-wrap must be at least 3".into()));
            }
            let n = o.samples.unwrap_or(4_000);
            let boxes = 40.min(n.max(1));
            let r = verify_wrap_bound_sampled(boxes, n.div_ceil(boxes), o.seed, o.max_wrap);
            checks("wrapbound", vec![r])
        }
        Suite::Dominance => checks("dominance", verify_dominances(o.samples.unwrap_or(100_000), o.seed)),
        Suite::Partition => {
            let n = o.samples.map(|s| (s as f64).sqrt().ceil() as usize).unwrap_or(400);
            SuiteResult::partition(verify_partition(n, n, 3.0, o.boundary_tol))
        }
        Suite::Signatures => {
            if o.resolution < MIN_RESOLUTION {
                return Err(UsageError(format!(
                    "resolution must be at least {MIN_RESOLUTION} (got {})",
                    o.resolution
                )));
            }
            SuiteResult::signatures(verify_signatures(o.resolution, o.tie_tol))
        }
        Suite::Spontaneous => SuiteResult::spontaneous(spontaneous_checks()?),
        Suite::Conics => SuiteResult::conics(quadratic_pair_discriminants()),
        Suite::Mesh => {
            let r = verify_mesh(o.samples.unwrap_or(100), o.seed, o.mesh_n, 0.01, (1e-3, 1.0), (1e-3, 4.0))?;
            checks("mesh", vec![r])
        }
        Suite::All => unreachable!("expanded by the caller"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("5/12").unwrap(), 5.0 / 12.0);
        assert_eq!(parse_number(" 2.5 ").unwrap(), 2.5);
        assert_eq!(parse_number("1e9").unwrap(), 1e9);
        assert!(parse_number("1/0").is_err());
        assert!(parse_number("inf").is_err());
        assert!(parse_number("abc").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("800x2400").unwrap(), (800, 2400));
        assert!(parse_grid("800").is_err());
        assert!(parse_grid("0x5").is_err());
    }

    #[test]
    fn clap_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
