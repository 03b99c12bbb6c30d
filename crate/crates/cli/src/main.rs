use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use digispace::topology::Verdict;
use digispace::PointId;
use digispace_cli::checks::{DEFAULT_CASES, DEFAULT_SEED};
use digispace_cli::commands::{self, SolveOptions};
use digispace_cli::CliError;

/// Digital spaces: classification, homology and diffusion on graphs.
#[derive(Parser)]
#[command(name = "digispace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List or export catalog spaces.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check whether a graph is a digital sphere, manifold or surface.
    Verify {
        /// Graph JSON file or catalog name.
        graph: String,
        #[arg(long)]
        n: usize,
        #[arg(long = "as", value_enum, default_value = "manifold")]
        kind: Kind,
    },
    /// Euler characteristic, Betti numbers and torsion.
    Invariants { graph: String },
    /// Apply a transformation and print the resulting graph.
    Transform {
        graph: String,
        #[command(subcommand)]
        op: TransformOp,
    },
    /// Run a problem file and write its trajectory as CSV.
    Solve {
        problem: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Points to plot, e.g. 1,3.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<PointId>>,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a reference experiment (or `all`) and check its expected outcome.
    Experiment {
        id: String,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Randomized property checks with a fixed seed.
    Check {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Export { name: String },
}

#[derive(Subcommand)]
enum TransformOp {
    /// Replace an edge with a new point.
    RTransform {
        #[arg(long, value_parser = parse_edge)]
        edge: (PointId, PointId),
        #[arg(long)]
        new_id: Option<PointId>,
    },
    /// Delete simple points until none remain.
    Reduce,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Sphere,
    Manifold,
    Surface,
}

fn parse_edge(s: &str) -> Result<(PointId, PointId), String> {
    let (u, v) = s.split_once(',').ok_or("expected u,v")?;
    let p = |x: &str| x.trim().parse::<PointId>().map_err(|e| format!("{x}: {e}"));
    Ok((p(u)?, p(v)?))
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    match cli.command {
        Command::Catalog { action } => match action {
            CatalogAction::List => commands::catalog_list(out),
            CatalogAction::Export { name } => commands::catalog_export(&name, out),
        },
        Command::Verify { graph, n, kind } => {
            let claim = match kind {
                Kind::Sphere => Verdict::Sphere,
                Kind::Manifold => Verdict::Manifold,
                Kind::Surface => Verdict::Surface,
            };
            commands::verify(&graph, n, claim, out)
        }
        Command::Invariants { graph } => commands::invariants(&graph, out),
        Command::Transform { graph, op } => match op {
            TransformOp::RTransform { edge, new_id } => commands::transform_r(&graph, edge, new_id, out),
            TransformOp::Reduce => commands::transform_reduce(&graph, out),
        },
        Command::Solve {
            problem,
            out: csv,
            plot,
            points,
            steps,
            tol,
        } => {
            let opts = SolveOptions {
                csv: csv.as_deref(),
                plot: plot.as_deref(),
                points,
                steps,
                tol,
            };
            commands::solve(&problem, &opts, out)
        }
        Command::Experiment { id, out_dir } => commands::experiment(&id, out_dir.as_deref(), out),
        Command::Check { seed, cases } => commands::check(seed, cases, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(cli, &mut out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
