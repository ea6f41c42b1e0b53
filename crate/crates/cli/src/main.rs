//! Command line front end: exact period tables, admissibility queries,
//! sampled verification of fibration maps, and geometry export.
//!
//! Exit codes: 0 success, 1 a verification check failed (the failing
//! witness is in the JSON report), 2 usage or domain error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use skewfib::geometry::{
    central_project, direction_field,
    export::{CircleSample, LineSample, CSV_HEADER},
    fiber_through_point, hemisphere_and_circumcenter, induced_circle_field, line_through,
    orientation_sign, FibrationMap, GeomError, Orientation, OrientationOutcome, TabulatedGrid,
};
use skewfib::integrality::{
    admissible, cross_field_implications, hurwitz_radon, james_complex, james_quaternionic,
    james_verdict, real_period, Admissibility, Verdict,
};
use skewfib::Field;

/// One emitted row of the period table; periods are decimal strings since
/// they outgrow every native integer type.
#[derive(serde::Serialize)]
struct TableRow {
    p: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<String>,
}

#[derive(Parser)]
#[command(
    name = "skewfib",
    version,
    about = "Skew fibration obstructions and geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hurwitz-Radon function rho(q)
    Rho {
        /// Positive integer (arbitrary size)
        q: String,
    },
    /// Exact period table: a_p (real), b_p (complex), c_p (quaternionic)
    Table {
        #[arg(long, default_value_t = 8)]
        max_p: u32,
        /// Comma-separated subset of a,b,c
        #[arg(long, default_value = "a,b,c")]
        fields: String,
        /// Cells not started before the budget expires are marked skipped
        #[arg(long, default_value_t = 300.0)]
        budget_seconds: f64,
    },
    /// Single period: b_p for field C, c_p for field H
    James {
        /// C or H
        field: String,
        p: u32,
    },
    /// Existence verdict for an F-(p,n)-fibration
    Admissible {
        /// R, C or H
        field: String,
        p: u32,
        /// Ambient dimension, n > p (arbitrary size)
        n: String,
        /// Also evaluate the implied queries over the other fields
        #[arg(long)]
        implications: bool,
    },
    /// Sampled skewness, orientation, direction-cap and coverage checks
    Verify {
        /// hopf-neg | hopf-pos | scaled:<alpha> | file:<path>
        map_spec: String,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Export line and great-circle samples over a k x k grid
    Project {
        /// hopf-neg | hopf-pos | scaled:<alpha> | file:<path>
        map_spec: String,
        #[arg(long, default_value_t = 5)]
        grid: usize,
        /// Half-width of the sampled square
        #[arg(long, default_value_t = 1.0)]
        range: f64,
        /// Base path; <out>.csv and <out>.json are written
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    /// Bad arguments or domain errors: exit 2.
    Usage(String),
    /// A verification check failed; the report was already printed: exit 1.
    Check,
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Rho { q } => cmd_rho(&q),
        Command::Table {
            max_p,
            fields,
            budget_seconds,
        } => cmd_table(max_p, &fields, budget_seconds),
        Command::James { field, p } => cmd_james(&field, p),
        Command::Admissible {
            field,
            p,
            n,
            implications,
        } => cmd_admissible(&field, p, &n, implications),
        Command::Verify {
            map_spec,
            pairs,
            seed,
        } => cmd_verify(&map_spec, pairs, seed),
        Command::Project {
            map_spec,
            grid,
            range,
            out,
        } => cmd_project(&map_spec, grid, range, &out),
    }
}

fn parse_biguint(text: &str, what: &str) -> Result<BigUint, Failure> {
    text.parse().map_err(|_| {
        Failure::Usage(format!(
            "{what} must be a nonnegative integer, got {text:?}"
        ))
    })
}

fn parse_field(text: &str) -> Result<Field, Failure> {
    text.parse().map_err(Failure::Usage)
}

fn cmd_rho(q_text: &str) -> Result<(), Failure> {
    let q = parse_biguint(q_text, "q")?;
    let rho = hurwitz_radon(&q).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{}", json!({ "q": q.to_string(), "rho": rho }));
    Ok(())
}

fn cmd_table(max_p: u32, fields: &str, budget_seconds: f64) -> Result<(), Failure> {
    if max_p == 0 {
        return Err(Failure::Usage("--max-p must be at least 1".into()));
    }
    let mut want = (false, false, false);
    for item in fields.split(',').filter(|s| !s.is_empty()) {
        match item.trim() {
            "a" => want.0 = true,
            "b" => want.1 = true,
            "c" => want.2 = true,
            other => {
                return Err(Failure::Usage(format!(
                    "unknown field {other:?} (expected a, b or c)"
                )))
            }
        }
    }
    let start = Instant::now();
    let in_budget = |skipped: &mut Vec<Value>, p: u32, field: &str| -> bool {
        if start.elapsed().as_secs_f64() > budget_seconds {
            skipped.push(json!({ "p": p, "field": field }));
            false
        } else {
            true
        }
    };
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for p in 1..=max_p {
        let mut row = TableRow {
            p,
            a: None,
            b: None,
            c: None,
        };
        if want.0 && in_budget(&mut skipped, p, "a") {
            row.a = Some(real_period(p as u64).to_string());
        }
        if want.1 && in_budget(&mut skipped, p, "b") {
            let b = james_complex(p).map_err(|e| Failure::Usage(e.to_string()))?;
            row.b = Some(b.to_string());
        }
        if want.2 && in_budget(&mut skipped, p, "c") {
            let c = james_quaternionic(p).map_err(|e| Failure::Usage(e.to_string()))?;
            row.c = Some(c.to_string());
        }
        rows.push(row);
    }
    println!(
        "{}",
        json!({
            "rows": rows.iter().map(|r| serde_json::to_value(r).unwrap()).collect::<Vec<_>>(),
            "skipped": skipped,
        })
    );
    Ok(())
}

fn cmd_james(field_text: &str, p: u32) -> Result<(), Failure> {
    let field = parse_field(field_text)?;
    if field == Field::R {
        return Err(Failure::Usage(
            "james periods are defined for C and H; use `table --fields a` for the real row".into(),
        ));
    }
    let verdict = james_verdict(field, p).map_err(|e| Failure::Usage(e.to_string()))?;
    println!(
        "{}",
        json!({
            "field": verdict.field.to_string(),
            "p": verdict.p,
            "period": verdict.period.to_string(),
        })
    );
    Ok(())
}

fn admissibility_json(a: &Admissibility) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("field".into(), json!(a.field.to_string()));
    obj.insert("p".into(), json!(a.p));
    obj.insert("n".into(), json!(a.n.to_string()));
    obj.insert("q".into(), json!(a.q.to_string()));
    match &a.verdict {
        Verdict::Possible => {
            obj.insert("verdict".into(), json!("possible"));
        }
        Verdict::RuledOutRho { rho } => {
            obj.insert("verdict".into(), json!("ruled_out"));
            obj.insert("reason".into(), json!({ "rho": rho }));
        }
        Verdict::RuledOutPeriod {
            period,
            failing_coefficient,
        } => {
            obj.insert("verdict".into(), json!("ruled_out"));
            obj.insert(
                "reason".into(),
                json!({
                    "period": period.to_string(),
                    "failing_coefficient": failing_coefficient,
                }),
            );
        }
    }
    Value::Object(obj)
}

fn cmd_admissible(
    field_text: &str,
    p: u32,
    n_text: &str,
    implications: bool,
) -> Result<(), Failure> {
    let field = parse_field(field_text)?;
    let n = parse_biguint(n_text, "n")?;
    let verdict = admissible(field, p, &n).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut report = admissibility_json(&verdict);
    if implications {
        if field == Field::R {
            return Err(Failure::Usage(
                "--implications applies to fields C and H only".into(),
            ));
        }
        let implied =
            cross_field_implications(field, p, &n).map_err(|e| Failure::Usage(e.to_string()))?;
        report["implications"] = Value::Array(implied.iter().map(admissibility_json).collect());
    }
    println!("{report}");
    Ok(())
}

fn parse_map_spec(spec: &str) -> Result<FibrationMap, Failure> {
    if spec == "hopf-neg" {
        return Ok(FibrationMap::hopf(Orientation::Negative));
    }
    if spec == "hopf-pos" {
        return Ok(FibrationMap::hopf(Orientation::Positive));
    }
    if let Some(alpha) = spec.strip_prefix("scaled:") {
        let alpha: f64 = alpha
            .parse()
            .map_err(|_| Failure::Usage(format!("bad scale factor in {spec:?}")))?;
        return Ok(FibrationMap::scaled_hopf(alpha)?);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
        let grid = TabulatedGrid::from_tsv(&text)?;
        return Ok(FibrationMap::from_table(path, grid)?);
    }
    Err(Failure::Usage(format!(
        "unknown map spec {spec:?}; expected hopf-neg, hopf-pos, scaled:<alpha> or file:<path>"
    )))
}

/// Sampling box for a map: the grid bounds for tabulated maps, `[-10, 10]^2`
/// for the analytic built-ins.
fn sampling_box(map: &FibrationMap) -> ([f64; 2], [f64; 2]) {
    map.domain_bounds()
        .unwrap_or(([-10.0, -10.0], [10.0, 10.0]))
}

fn cmd_verify(map_spec: &str, pairs: usize, seed: u64) -> Result<(), Failure> {
    if pairs == 0 {
        return Err(Failure::Usage("--pairs must be at least 1".into()));
    }
    let map = parse_map_spec(map_spec)?;
    let (lo, hi) = sampling_box(&map);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| -> [f64; 2] {
        [
            rng.random_range(lo[0]..hi[0]),
            rng.random_range(lo[1]..hi[1]),
        ]
    };
    let mut checks = Vec::new();
    let mut all_pass = true;

    // skewness sign over seeded pairs
    let pair_samples: Vec<([f64; 2], [f64; 2])> = (0..pairs)
        .map(|_| (sample(&mut rng), sample(&mut rng)))
        .filter(|(y, z)| y != z)
        .collect();
    let mut orientation = None;
    match orientation_sign(&map, &pair_samples) {
        Ok(OrientationOutcome::Negative) => {
            orientation = Some(-1);
            checks.push(json!({ "name": "skew_orientation", "pass": true, "sign": -1 }));
        }
        Ok(OrientationOutcome::Positive) => {
            orientation = Some(1);
            checks.push(json!({ "name": "skew_orientation", "pass": true, "sign": 1 }));
        }
        Ok(OrientationOutcome::Inconsistent { y, z }) => {
            all_pass = false;
            checks.push(json!({
                "name": "skew_orientation", "pass": false,
                "witness": { "kind": "sign_change", "y": y, "z": z },
            }));
        }
        Err(GeomError::DegeneratePair { y, z }) => {
            all_pass = false;
            checks.push(json!({
                "name": "skew_orientation", "pass": false,
                "witness": { "kind": "degenerate_pair", "y": y, "z": z },
            }));
        }
        Err(e) => return Err(e.into()),
    }

    // induced tangent field on a small circle around the origin
    let circle_radius = 0.01f64.min(0.25 * (hi[0] - lo[0]).min(hi[1] - lo[1]));
    match induced_circle_field(&map, circle_radius, 360) {
        Ok(_) => checks.push(json!({
            "name": "circle_field", "pass": true,
            "radius": circle_radius, "samples": 360,
        })),
        Err(GeomError::KernelDegeneracy { y }) => {
            all_pass = false;
            checks.push(json!({
                "name": "circle_field", "pass": false,
                "witness": { "kind": "kernel_degeneracy", "y": y },
            }));
        }
        Err(e) => return Err(e.into()),
    }

    // smallest cap of sampled directions
    let mut dirs = Vec::new();
    let per_axis = 24usize;
    for i in 0..per_axis {
        for j in 0..per_axis {
            let y = [
                lo[0] + (hi[0] - lo[0]) * i as f64 / (per_axis - 1) as f64,
                lo[1] + (hi[1] - lo[1]) * j as f64 / (per_axis - 1) as f64,
            ];
            dirs.push(direction_field(&map, y));
        }
    }
    match hemisphere_and_circumcenter(&dirs) {
        Ok(cap) => {
            if !cap.open_hemisphere {
                all_pass = false;
            }
            checks.push(json!({
                "name": "direction_cap", "pass": cap.open_hemisphere,
                "center": cap.center, "radius": cap.radius,
                "open_hemisphere": cap.open_hemisphere,
            }));
        }
        Err(GeomError::AntipodalPoints { a, b }) => {
            all_pass = false;
            checks.push(json!({
                "name": "direction_cap", "pass": false,
                "witness": { "kind": "antipodal_directions", "a": a, "b": b },
            }));
        }
        Err(e) => return Err(e.into()),
    }

    // coverage spot checks
    let mut coverage_pass = true;
    let mut coverage_witness = None;
    for _ in 0..20 {
        let target = [
            rng.random_range(lo[0]..hi[0]),
            rng.random_range(lo[1]..hi[1]),
            rng.random_range(-2.0..2.0),
        ];
        match fiber_through_point(&map, target) {
            Ok(_) => {}
            Err(GeomError::CoverageUnverified { x, residual }) => {
                coverage_pass = false;
                coverage_witness = Some(json!({
                    "kind": "coverage_unverified", "x": x, "residual": residual,
                }));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if coverage_pass {
        checks.push(json!({ "name": "coverage", "pass": true, "points": 20 }));
    } else {
        all_pass = false;
        checks.push(json!({ "name": "coverage", "pass": false, "witness": coverage_witness }));
    }

    println!(
        "{}",
        json!({
            "map": map.name(),
            "seed": seed,
            "pairs": pair_samples.len(),
            "orientation": orientation,
            "checks": checks,
            "pass": all_pass,
        })
    );
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn grid_coordinates(k: usize, range: f64) -> Vec<f64> {
    if k <= 1 {
        return vec![0.0];
    }
    (0..k)
        .map(|i| -range + 2.0 * range * i as f64 / (k - 1) as f64)
        .collect()
}

fn cmd_project(map_spec: &str, grid: usize, range: f64, out: &Path) -> Result<(), Failure> {
    if grid == 0 {
        return Err(Failure::Usage("--grid must be at least 1".into()));
    }
    if !range.is_finite() || range <= 0.0 {
        return Err(Failure::Usage(format!(
            "--range must be a positive number, got {range}"
        )));
    }
    let map = parse_map_spec(map_spec)?;
    let coords = grid_coordinates(grid, range);
    let mut lines = Vec::new();
    let mut circles = Vec::new();
    for &gx in &coords {
        for &gy in &coords {
            let y = [gx, gy];
            let line = line_through(&map, y);
            circles.push(CircleSample::new(&central_project(&line)?));
            lines.push(LineSample::new(y, &line));
        }
    }

    let csv_path = out.with_extension("csv");
    let json_path = out.with_extension("json");
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for line in &lines {
        csv.push_str(&line.csv_row());
        csv.push('\n');
    }
    std::fs::write(&csv_path, csv)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", csv_path.display())))?;
    let doc = json!({
        "map": map.name(),
        "grid": grid,
        "range": range,
        "lines": lines.iter().map(|l| serde_json::to_value(l).unwrap()).collect::<Vec<_>>(),
        "circles": circles.iter().map(|c| serde_json::to_value(c).unwrap()).collect::<Vec<_>>(),
    });
    std::fs::write(&json_path, format!("{doc}\n"))
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", json_path.display())))?;
    println!(
        "{}",
        json!({
            "lines": lines.len(),
            "csv": csv_path.display().to_string(),
            "json": json_path.display().to_string(),
        })
    );
    Ok(())
}
