use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nnorth::bench::{
    parse_qaplib, read_dense_matrix, run_experiment, write_starts_csv, write_summary_csv,
    ExperimentSpec, ProblemKind, RunSettings,
};
use nnorth::diagnostics::{error_bound_sweep, sosc_probe, write_samples_csv};
use nnorth::objective::Objective;
use nnorth::problems::{AffinityInstance, ProjectionProblem};
use nnorth::{Error, Result, SolverKind, StiefelPoint};

#[derive(Parser)]
#[command(name = "nnorth", version, about = "Penalty methods on nonnegative Stiefel matrices")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// seppg_plus, seppg_zero or alm
    #[arg(long, global = true, default_value = "seppg_plus")]
    solver: SolverKind,
    /// Number of starts
    #[arg(long, global = true, default_value_t = 1)]
    starts: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output CSV (stdout if omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// File of `key = value` solver overrides
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for final iterates
    #[arg(long = "dump-x", global = true)]
    dump_x: Option<PathBuf>,
    /// Record wall-clock time (makes output nondeterministic)
    #[arg(long, global = true)]
    time: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Lifted quadratic assignment on a QAPLIB file
    Qap {
        instance: PathBuf,
        /// `name value` file of best-known objectives
        #[arg(long)]
        best_known: Option<PathBuf>,
    },
    /// Graph matching with an n²×n² affinity matrix
    Gm { instance: PathBuf },
    /// Projection of a target matrix onto the feasible set
    Proj { instance: PathBuf },
    /// Orthogonal nonnegative matrix factorization clustering
    Onmf {
        instance: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        clusters: Option<usize>,
    },
    /// Sample the local error bound around a feasible point
    DiagErrorbound {
        /// Feasible point as a dense matrix file
        xbar: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Probe the second-order condition at a stationary point
    DiagSosc {
        /// qap, gm or proj
        #[arg(long)]
        problem: ProblemKind,
        #[arg(long)]
        instance: PathBuf,
        xbar: PathBuf,
        #[arg(long, default_value_t = 1000)]
        dirs: usize,
    },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    let g = cli.global;
    let settings = RunSettings {
        solver: g.solver,
        num_starts: g.starts,
        seed: g.seed,
        overrides: g.config.as_ref().map(std::fs::read_to_string).transpose()?,
        jobs: g.jobs,
        record_time: g.time,
    };
    let spec = |problem, instance, best_known, labels, clusters| ExperimentSpec {
        problem,
        instance,
        best_known,
        labels,
        clusters,
        settings: settings.clone(),
        out: g.out.clone(),
        dump_x: g.dump_x.clone(),
    };
    let spec = match cli.command {
        Command::Qap { instance, best_known } => spec(ProblemKind::Qap, instance, best_known, None, None),
        Command::Gm { instance } => spec(ProblemKind::Gm, instance, None, None, None),
        Command::Proj { instance } => spec(ProblemKind::Proj, instance, None, None, None),
        Command::Onmf { instance, labels, clusters } => {
            spec(ProblemKind::Onmf, instance, None, labels, clusters)
        }
        Command::DiagErrorbound { xbar, delta, samples } => {
            let x = StiefelPoint::new(read_dense_matrix(&xbar)?)?;
            let rows = error_bound_sweep(&x, delta, samples, g.seed)?;
            let violations = rows.iter().filter(|s| !s.holds).count();
            write_samples_csv(&rows, output(&g.out)?)?;
            eprintln!("samples={} violations={violations}", rows.len());
            return Ok(());
        }
        Command::DiagSosc { problem, instance, xbar, dirs } => {
            let x = StiefelPoint::new(read_dense_matrix(&xbar)?)?;
            let f: Box<dyn Objective> = match problem {
                ProblemKind::Qap => Box::new(parse_qaplib(&instance)?),
                ProblemKind::Gm => Box::new(AffinityInstance::from_matrix(read_dense_matrix(&instance)?)?),
                ProblemKind::Proj => Box::new(ProjectionProblem::new(read_dense_matrix(&instance)?)),
                ProblemKind::Onmf => {
                    return Err(Error::Input("diag-sosc supports qap, gm and proj".into()));
                }
            };
            let rep = sosc_probe(&*f, &x, dirs, g.seed)?;
            let fmt = |v: Option<f64>| v.map(|v| format!("{v:.16e}")).unwrap_or_default();
            let mut w = output(&g.out)?;
            writeln!(w, "sampled,survivors,min_form,max_form,strict,inconclusive")?;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                rep.sampled,
                rep.survivors,
                fmt(rep.min_form),
                fmt(rep.max_form),
                rep.strict,
                rep.inconclusive()
            )?;
            return Ok(());
        }
    };
    let out = run_experiment(&spec)?;
    if spec.out.is_none() {
        let mut w = std::io::stdout().lock();
        write_summary_csv(std::slice::from_ref(&out.summary), &mut w)?;
        writeln!(w)?;
        write_starts_csv(&out.summary.instance, spec.settings.solver, &out.starts, g.time, &mut w)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::FAILURE
        }
    }
}
