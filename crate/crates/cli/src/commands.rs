//! Subcommand bodies. Each writes its report to `out` and returns whether
//! the command's check passed; input problems come back as errors.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::thread;

use digispace::catalog::{self, ENTRY_NAMES};
use digispace::invariants::homology;
use digispace::solver::{solve as run_problem, ProblemSpec};
use digispace::topology::{classify, homotopy_reduce, r_transform, Verdict};
use digispace::{CatalogError, DigitalSpace, GraphJson, PointId, SolverError};
use serde_json::json;

use crate::checks;
use crate::error::CliError;
use crate::experiments::{self, ExperimentOutcome, EXPERIMENT_IDS};
use crate::svg;

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialize")
    )?;
    Ok(())
}

/// A path to a graph JSON file, or a catalog name.
pub fn load_graph(source: &str) -> Result<DigitalSpace, CliError> {
    let path = Path::new(source);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        let json: GraphJson = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{source}: {e}")))?;
        return DigitalSpace::from_json(&json).map_err(|e| CliError::Input(format!("{source}: {e}")));
    }
    catalog::space(source).map_err(|e| match e {
        CatalogError::Unknown(_) => CliError::Input(format!("'{source}' is neither a file nor a catalog entry")),
        other => input(other),
    })
}

pub fn catalog_list(out: &mut dyn Write) -> Result<bool, CliError> {
    let mut all_ok = true;
    let rows: Vec<serde_json::Value> = ENTRY_NAMES
        .iter()
        .map(|&name| match catalog::entry(name) {
            Ok(e) => json!({
                "name": name,
                "points": e.space.len(),
                "edges": e.space.edge_count(),
                "dimension": e.dimension,
                "verified": true,
            }),
            Err(err) => {
                all_ok = false;
                json!({ "name": name, "verified": false, "error": err.to_string() })
            }
        })
        .collect();
    print_json(out, &serde_json::Value::Array(rows))?;
    Ok(all_ok)
}

pub fn catalog_export(name: &str, out: &mut dyn Write) -> Result<bool, CliError> {
    let g = catalog::space(name).map_err(input)?;
    print_json(out, &serde_json::to_value(g.to_json()).expect("graph serializes"))?;
    Ok(true)
}

pub fn verify(source: &str, n: usize, claim: Verdict, out: &mut dyn Write) -> Result<bool, CliError> {
    let g = load_graph(source)?;
    let report = classify(&g, n, claim);
    print_json(out, &report.to_json())?;
    Ok(report.passed())
}

pub fn invariants(source: &str, out: &mut dyn Write) -> Result<bool, CliError> {
    let g = load_graph(source)?;
    let h = homology(&g).map_err(input)?;
    print_json(out, &h.to_json())?;
    Ok(true)
}

pub fn transform_r(
    source: &str,
    edge: (PointId, PointId),
    new_id: Option<PointId>,
    out: &mut dyn Write,
) -> Result<bool, CliError> {
    let g = load_graph(source)?;
    let id = new_id.unwrap_or_else(|| g.points().last().map_or(1, |p| p + 1));
    let t = r_transform(&g, edge.0, edge.1, id).map_err(input)?;
    print_json(
        out,
        &json!({
            "graph": t.to_json(),
            "trace": { "replaced_edge": [edge.0, edge.1], "new_point": id },
        }),
    )?;
    Ok(true)
}

pub fn transform_reduce(source: &str, out: &mut dyn Write) -> Result<bool, CliError> {
    let g = load_graph(source)?;
    let (r, trace) = homotopy_reduce(&g).map_err(input)?;
    print_json(
        out,
        &json!({
            "graph": r.to_json(),
            "trace": trace.to_json()["steps"],
        }),
    )?;
    Ok(true)
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions<'a> {
    pub csv: Option<&'a Path>,
    pub plot: Option<&'a Path>,
    pub points: Option<Vec<PointId>>,
    pub steps: Option<u64>,
    pub tol: Option<f64>,
}

/// Runs a problem file. The CSV goes to `opts.csv` or, without one, to
/// `out`.
pub fn solve(problem_path: &Path, opts: &SolveOptions, out: &mut dyn Write) -> Result<bool, CliError> {
    let text =
        fs::read_to_string(problem_path).map_err(|e| CliError::Input(format!("{}: {e}", problem_path.display())))?;
    let mut spec = ProblemSpec::from_json(&text).map_err(input)?;
    if opts.steps.is_some() {
        spec.steps = opts.steps;
    }
    if opts.tol.is_some() {
        spec.tol = opts.tol;
    }
    let problem = spec.resolve().map_err(input)?;
    let trajectory = run_problem(&problem).map_err(|e| match e {
        SolverError::Divergence { .. } => CliError::Failure(e.to_string()),
        other => input(other),
    })?;
    let csv = trajectory.to_csv();
    match opts.csv {
        Some(path) => fs::write(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    if let Some(path) = opts.plot {
        let points = opts.points.clone().unwrap_or_else(|| problem.space.points().to_vec());
        let title = problem_path
            .file_stem()
            .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
        fs::write(path, svg::plot(&trajectory, &points, &title))?;
    }
    Ok(true)
}

fn write_outputs(dir: &Path, spec: &experiments::ExperimentSpec, outcome: &ExperimentOutcome) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{}.csv", spec.id)), outcome.trajectory.to_csv())?;
    fs::write(
        dir.join(format!("{}.svg", spec.id)),
        svg::plot(&outcome.trajectory, &spec.plot_points, spec.title),
    )?;
    fs::write(
        dir.join(format!("{}.problem.json", spec.id)),
        spec.problem.to_json() + "\n",
    )?;
    Ok(())
}

/// Runs experiments in parallel, one thread each, and reports in the
/// order given.
pub fn experiment(id: &str, out_dir: Option<&Path>, out: &mut dyn Write) -> Result<bool, CliError> {
    let ids: Vec<&str> = if id == "all" { EXPERIMENT_IDS.to_vec() } else { vec![id] };
    let specs = ids
        .iter()
        .map(|id| experiments::experiment(id))
        .collect::<Result<Vec<_>, _>>()?;
    let outcomes: Vec<Result<ExperimentOutcome, CliError>> = thread::scope(|s| {
        let handles: Vec<_> = specs
            .iter()
            .map(|spec| s.spawn(move || experiments::run(spec)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment thread panicked"))
            .collect()
    });
    let mut all_ok = true;
    for (spec, outcome) in specs.iter().zip(outcomes) {
        let outcome = outcome?;
        if let Some(dir) = out_dir {
            write_outputs(dir, spec, &outcome)?;
        }
        let ok = outcome.passed();
        all_ok &= ok;
        writeln!(out, "{} {}", if ok { "PASS" } else { "FAIL" }, spec.id)?;
        for c in &outcome.checks {
            writeln!(
                out,
                "  {} {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
    }
    Ok(all_ok)
}

pub fn check(seed: u64, cases: usize, out: &mut dyn Write) -> Result<bool, CliError> {
    let mut results = checks::theorem_suites(seed, cases);
    results.extend(checks::topology_suites(seed, (cases / 4).max(1)));
    let mut all_ok = true;
    for r in &results {
        all_ok &= r.passed();
        writeln!(out, "{}", r.line())?;
    }
    Ok(all_ok)
}
