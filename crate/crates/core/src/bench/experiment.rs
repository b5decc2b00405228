use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::io::{load_best_known, parse_labels, parse_qaplib, read_dense_matrix, write_dense_matrix};
use super::metrics::{clustering_metrics, median, relgap, ClusteringScores};
use super::overrides::apply_overrides;
use super::fmt_f64;
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::penalty::vartheta;
use crate::problems::{
    onmf_alternate, random_stiefel_start, AffinityInstance, OnmfConfig, OnmfInstance,
    ProjectionProblem, QapInstance,
};
use crate::solvers::{round_to_feasible, solve, AlmConfig, PenaltyConfig, SolverKind};
use crate::stiefel::{singular_values, Mat, StiefelPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Qap,
    Gm,
    Proj,
    Onmf,
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qap" => Ok(Self::Qap),
            "gm" => Ok(Self::Gm),
            "proj" => Ok(Self::Proj),
            "onmf" => Ok(Self::Onmf),
            other => Err(Error::Input(format!("unknown problem kind '{other}'"))),
        }
    }
}

/// A loaded problem instance.
#[derive(Debug, Clone)]
pub enum Problem {
    Qap(QapInstance),
    Gm {
        name: String,
        inst: AffinityInstance,
    },
    Proj {
        name: String,
        problem: ProjectionProblem,
    },
    Onmf {
        name: String,
        inst: OnmfInstance,
        labels: Option<Vec<usize>>,
    },
}

impl Problem {
    pub fn name(&self) -> &str {
        match self {
            Problem::Qap(q) => &q.name,
            Problem::Gm { name, .. } | Problem::Proj { name, .. } | Problem::Onmf { name, .. } => name,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            Problem::Qap(q) => (q.n(), q.n()),
            Problem::Gm { inst, .. } => (inst.n(), inst.n()),
            Problem::Proj { problem, .. } => problem.c.shape(),
            Problem::Onmf { inst, .. } => (inst.a.nrows(), inst.r),
        }
    }

    fn best_known(&self) -> Option<f64> {
        match self {
            Problem::Qap(q) => q.best_known,
            _ => None,
        }
    }

    /// Problem-specific default for `ρ₀`/`μ₀`; `None` defers to the `c0` rule.
    fn default_rho0(&self) -> Option<f64> {
        let inv_norm = |m: &Mat| {
            let s = singular_values(m).first().copied().unwrap_or(0.0);
            (s > 0.0).then(|| 1.0 / s)
        };
        match self {
            Problem::Proj { problem, .. } => inv_norm(&problem.c),
            Problem::Onmf { inst, .. } => inv_norm(&inst.a),
            _ => None,
        }
    }

    /// Start `i`: a deterministic structured start for `i = 0` on projection
    /// and ONMF problems, otherwise a random Stiefel point seeded by `seed ^ i`.
    fn start(&self, i: usize, seed: u64) -> StiefelPoint {
        let (n, r) = self.shape();
        let structured = match (i, self) {
            (0, Problem::Proj { problem, .. }) => round_to_feasible(&problem.c).ok(),
            (0, Problem::Onmf { inst, .. }) => inst.farthest_point_start().ok(),
            _ => None,
        };
        structured.unwrap_or_else(|| random_stiefel_start(n, r, seed ^ i as u64))
    }
}

/// Solver settings shared by every start of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub solver: SolverKind,
    pub num_starts: usize,
    pub seed: u64,
    /// `key = value` configuration text applied after the defaults.
    pub overrides: Option<String>,
    /// Worker threads; `None` uses all cores.
    pub jobs: Option<usize>,
    pub record_time: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            solver: SolverKind::SeppgPlus,
            num_starts: 1,
            seed: 0,
            overrides: None,
            jobs: None,
            record_time: false,
        }
    }
}

/// Outcome of one start.
#[derive(Debug, Clone)]
pub struct StartRecord {
    pub start: usize,
    pub status: String,
    pub failed: bool,
    pub f_final: f64,
    /// Objective at the rounded feasible point, when rounding succeeded.
    pub f_rounded: Option<f64>,
    pub gap: Option<f64>,
    pub rgap: Option<f64>,
    pub ninf: f64,
    pub orth: f64,
    pub stationarity: Option<f64>,
    pub outer_iters: usize,
    pub inner_iters: usize,
    pub wall_time: f64,
    pub scores: Option<ClusteringScores>,
    pub x_final: Option<Mat>,
}

impl StartRecord {
    fn failure(start: usize, err: &Error, wall_time: f64) -> Self {
        Self {
            start,
            status: format!("error:{}", err.kind()),
            failed: true,
            f_final: f64::NAN,
            f_rounded: None,
            gap: None,
            rgap: None,
            ninf: f64::NAN,
            orth: f64::NAN,
            stationarity: None,
            outer_iters: 0,
            inner_iters: 0,
            wall_time,
            scores: None,
            x_final: None,
        }
    }
}

/// Aggregates over the non-failed starts of one (instance, solver) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub instance: String,
    pub solver: SolverKind,
    pub starts: usize,
    pub failures: usize,
    pub min_f: f64,
    pub median_f: f64,
    pub min_gap: Option<f64>,
    pub median_gap: Option<f64>,
    /// Median gap of the rounded feasible points.
    pub rmed_gap: Option<f64>,
    pub mean_ninf: f64,
    pub mean_orth: f64,
    pub mean_time: Option<f64>,
    pub purity: Option<f64>,
    pub entropy: Option<f64>,
    pub nmi: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub summary: MetricsRow,
    pub starts: Vec<StartRecord>,
}

fn configs(problem: &Problem, settings: &RunSettings) -> Result<(PenaltyConfig, AlmConfig)> {
    let mut penalty = settings.solver.default_penalty_config();
    let mut alm = AlmConfig::default();
    if let Some(r0) = problem.default_rho0() {
        penalty.rho0 = Some(r0);
        alm.mu0 = Some(r0);
    }
    if let Some(text) = &settings.overrides {
        apply_overrides(text, &mut penalty, &mut alm)?;
    }
    penalty.validate()?;
    alm.validate()?;
    Ok((penalty, alm))
}

fn gap_of(best: Option<f64>, f: f64) -> Option<f64> {
    best.and_then(|b| relgap(f, b).ok())
}

fn run_start(
    problem: &Problem,
    i: usize,
    settings: &RunSettings,
    penalty: &PenaltyConfig,
    alm: &AlmConfig,
) -> StartRecord {
    let clock = Instant::now();
    let x0 = problem.start(i, settings.seed);
    let best = problem.best_known();
    let general = |f: &dyn Objective| -> Result<StartRecord> {
        let rep = solve(settings.solver, f, &x0, penalty, alm)?;
        let f_rounded = rep.x_rounded.as_ref().map(|x| f.value(x.mat()));
        Ok(StartRecord {
            start: i,
            status: rep.status.label().to_string(),
            failed: rep.status.is_failure(),
            f_final: rep.f_final,
            f_rounded,
            gap: gap_of(best, rep.f_final),
            rgap: f_rounded.and_then(|fr| gap_of(best, fr)),
            ninf: rep.ninf,
            orth: rep.orth_residual,
            stationarity: Some(rep.stationarity),
            outer_iters: rep.outer_iters,
            inner_iters: rep.inner_iters_total,
            wall_time: 0.0,
            scores: None,
            x_final: Some(rep.x_final.into_inner()),
        })
    };
    let out = match problem {
        Problem::Qap(q) => general(q),
        Problem::Gm { inst, .. } => general(inst),
        Problem::Proj { problem, .. } => general(problem),
        Problem::Onmf { inst, labels, .. } => {
            let cfg = OnmfConfig {
                solver: settings.solver,
                penalty: *penalty,
                alm: *alm,
                ..OnmfConfig::default()
            };
            onmf_alternate(inst, &x0, &cfg).and_then(|o| {
                let scores = match labels {
                    Some(t) => Some(clustering_metrics(t, &o.labels, inst.r)?),
                    None => None,
                };
                let f = *o.history.last().unwrap_or(&f64::NAN);
                Ok(StartRecord {
                    start: i,
                    status: "feasible".into(),
                    failed: false,
                    f_final: f,
                    f_rounded: Some(f),
                    gap: None,
                    rgap: None,
                    ninf: vartheta(o.x.mat()),
                    orth: o.x.orth_residual(),
                    stationarity: None,
                    outer_iters: o.history.len() - 1,
                    inner_iters: 0,
                    wall_time: 0.0,
                    scores,
                    x_final: Some(o.x.into_inner()),
                })
            })
        }
    };
    let elapsed = clock.elapsed().as_secs_f64();
    match out {
        Ok(mut rec) => {
            rec.wall_time = elapsed;
            rec
        }
        Err(e) => StartRecord::failure(i, &e, elapsed),
    }
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (s, c) = v.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if c == 0 { f64::NAN } else { s / c as f64 }
}

fn summarize(problem: &Problem, settings: &RunSettings, starts: &[StartRecord]) -> MetricsRow {
    let ok: Vec<&StartRecord> = starts.iter().filter(|s| !s.failed).collect();
    let fs: Vec<f64> = ok.iter().map(|s| s.f_final).collect();
    let gaps: Vec<f64> = ok.iter().filter_map(|s| s.gap).collect();
    let rgaps: Vec<f64> = ok.iter().filter_map(|s| s.rgap).collect();
    let scores: Vec<ClusteringScores> = ok.iter().filter_map(|s| s.scores).collect();
    let score_mean = |pick: fn(&ClusteringScores) -> f64| {
        (!scores.is_empty()).then(|| mean(scores.iter().map(pick)))
    };
    MetricsRow {
        instance: problem.name().to_string(),
        solver: settings.solver,
        starts: starts.len(),
        failures: starts.len() - ok.len(),
        min_f: fs.iter().copied().fold(f64::NAN, f64::min),
        median_f: median(&fs).unwrap_or(f64::NAN),
        min_gap: (!gaps.is_empty()).then(|| gaps.iter().copied().fold(f64::INFINITY, f64::min)),
        median_gap: median(&gaps),
        rmed_gap: median(&rgaps),
        mean_ninf: mean(ok.iter().map(|s| s.ninf)),
        mean_orth: mean(ok.iter().map(|s| s.orth)),
        mean_time: settings
            .record_time
            .then(|| mean(starts.iter().map(|s| s.wall_time))),
        purity: score_mean(|s| s.purity),
        entropy: score_mean(|s| s.entropy),
        nmi: score_mean(|s| s.nmi),
    }
}

/// Runs every start of `settings` on `problem`. Start `i` depends only on
/// `(seed, i)`, so results do not depend on the thread count.
pub fn run_problem(problem: &Problem, settings: &RunSettings) -> Result<ExperimentOutput> {
    if settings.num_starts == 0 {
        return Err(Error::Parameter("num_starts must be >= 1".into()));
    }
    let (penalty, alm) = configs(problem, settings)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    let starts: Vec<StartRecord> = pool.install(|| {
        (0..settings.num_starts)
            .into_par_iter()
            .map(|i| run_start(problem, i, settings, &penalty, &alm))
            .collect()
    });
    Ok(ExperimentOutput {
        summary: summarize(problem, settings, &starts),
        starts,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

const SUMMARY_HEADER: &str = "instance,solver,starts,failures,min_f,median_f,min_gap,median_gap,rmed_gap,mean_ninf,mean_orth,mean_time,purity,entropy,nmi";

const STARTS_HEADER: &str = "instance,solver,start,status,f_final,f_rounded,gap,rgap,ninf,orth,stationarity,outer_iters,inner_iters,wall_time,purity,entropy,nmi";

pub fn write_summary_csv<W: Write>(rows: &[MetricsRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.instance,
            r.solver,
            r.starts,
            r.failures,
            fmt_f64(r.min_f),
            fmt_f64(r.median_f),
            opt(r.min_gap),
            opt(r.median_gap),
            opt(r.rmed_gap),
            fmt_f64(r.mean_ninf),
            fmt_f64(r.mean_orth),
            opt(r.mean_time),
            opt(r.purity),
            opt(r.entropy),
            opt(r.nmi),
        )?;
    }
    Ok(())
}

/// Per-start CSV. Wall time is written only when `record_time` is set.
pub fn write_starts_csv<W: Write>(
    instance: &str,
    solver: SolverKind,
    starts: &[StartRecord],
    record_time: bool,
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "{STARTS_HEADER}")?;
    for s in starts {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            instance,
            solver,
            s.start,
            s.status,
            fmt_f64(s.f_final),
            opt(s.f_rounded),
            opt(s.gap),
            opt(s.rgap),
            fmt_f64(s.ninf),
            fmt_f64(s.orth),
            opt(s.stationarity),
            s.outer_iters,
            s.inner_iters,
            opt(record_time.then_some(s.wall_time)),
            opt(s.scores.map(|c| c.purity)),
            opt(s.scores.map(|c| c.entropy)),
            opt(s.scores.map(|c| c.nmi)),
        )?;
    }
    Ok(())
}

/// A file-backed experiment as driven by the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: ProblemKind,
    /// QAPLIB file, affinity matrix, projection target or ONMF data matrix.
    pub instance: PathBuf,
    /// Sidecar of `name value` best-known objectives (QAP).
    pub best_known: Option<PathBuf>,
    /// Ground-truth labels (ONMF).
    pub labels: Option<PathBuf>,
    /// Cluster count (ONMF); defaults to the largest ground-truth label.
    pub clusters: Option<usize>,
    pub settings: RunSettings,
    /// Summary CSV path; per-start rows go to `<stem>.starts.csv` beside it.
    pub out: Option<PathBuf>,
    /// Directory receiving each start's final iterate.
    pub dump_x: Option<PathBuf>,
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

impl ExperimentSpec {
    pub fn load_problem(&self) -> Result<Problem> {
        let name = stem(&self.instance);
        match self.problem {
            ProblemKind::Qap => {
                let mut q = parse_qaplib(&self.instance)?;
                if let Some(side) = &self.best_known {
                    q.best_known = load_best_known(side)?.get(&q.name).copied();
                }
                Ok(Problem::Qap(q))
            }
            ProblemKind::Gm => Ok(Problem::Gm {
                name,
                inst: AffinityInstance::from_matrix(read_dense_matrix(&self.instance)?)?,
            }),
            ProblemKind::Proj => Ok(Problem::Proj {
                name,
                problem: ProjectionProblem::new(read_dense_matrix(&self.instance)?),
            }),
            ProblemKind::Onmf => {
                let a = read_dense_matrix(&self.instance)?;
                let labels = match &self.labels {
                    Some(p) => Some(parse_labels(&std::fs::read_to_string(p)?)?),
                    None => None,
                };
                let r = self
                    .clusters
                    .or_else(|| labels.as_ref().and_then(|l| l.iter().copied().max()))
                    .ok_or_else(|| Error::Input("ONMF needs a cluster count or labels".into()))?;
                Ok(Problem::Onmf {
                    name,
                    inst: OnmfInstance::new(a, r)?,
                    labels,
                })
            }
        }
    }

    /// Path of the per-start CSV for a summary path.
    pub fn starts_path(out: &Path) -> PathBuf {
        out.with_file_name(format!("{}.starts.csv", stem(out)))
    }
}

/// Loads the instance, runs all starts, and writes the CSVs and iterate dumps
/// named by `spec`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let problem = spec.load_problem()?;
    let output = run_problem(&problem, &spec.settings)?;
    if let Some(out) = &spec.out {
        let f = std::fs::File::create(out)?;
        write_summary_csv(std::slice::from_ref(&output.summary), std::io::BufWriter::new(f))?;
        let f = std::fs::File::create(ExperimentSpec::starts_path(out))?;
        write_starts_csv(
            problem.name(),
            spec.settings.solver,
            &output.starts,
            spec.settings.record_time,
            std::io::BufWriter::new(f),
        )?;
    }
    if let Some(dir) = &spec.dump_x {
        std::fs::create_dir_all(dir)?;
        for s in &output.starts {
            if let Some(x) = &s.x_final {
                let path = dir.join(format!(
                    "{}_{}_start{}.txt",
                    problem.name(),
                    spec.settings.solver,
                    s.start
                ));
                write_dense_matrix(x, std::io::BufWriter::new(std::fs::File::create(path)?))?;
            }
        }
    }
    Ok(output)
}
