//! Benchmark and campaign harness. Every routine returns long-format report
//! rows (`group,hirsch,metric,value,unit,seed,trials`); timing metrics can be
//! zeroed so that seeded runs compare byte for byte.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attacks::{lba, AttackError, LbaConfig};
use crate::oracles::{csp_enumerate, OracleError, SearchBudget};
use crate::pc::{collect, random_element, random_word_over, PcError};
use crate::platform::PlatformGroup;
use crate::protocols::aag::{aag_run, AagParams};
use crate::protocols::ProtocolError;
use crate::rng::SeededRng;

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: [&str; 7] = ["group", "hirsch", "metric", "value", "unit", "seed", "trials"];

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("bad experiment config: {0}")]
    BadConfig(String),
    #[error("i/o failure: {0}")]
    IoFailure(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Pc(#[from] PcError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Attack(#[from] AttackError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub len_min: usize,
    pub len_max: usize,
    pub seed: u64,
    /// Run trials on one thread instead of the rayon pool.
    pub sequential: bool,
    /// Report every timing metric as zero.
    pub zero_timings: bool,
}

impl ExperimentConfig {
    pub fn new(trials: usize, len_min: usize, len_max: usize, seed: u64) -> Result<Self, BenchError> {
        if trials == 0 {
            return Err(BenchError::BadConfig("trials must be at least 1".into()));
        }
        if len_min > len_max {
            return Err(BenchError::BadConfig(format!("empty length range {len_min}..={len_max}")));
        }
        Ok(ExperimentConfig {
            trials,
            len_min,
            len_max,
            seed,
            sequential: false,
            zero_timings: false,
        })
    }

    fn run<T, F>(&self, f: F) -> Result<Vec<T>, BenchError>
    where
        T: Send,
        F: Fn(usize) -> Result<T, BenchError> + Sync + Send,
    {
        if self.sequential {
            (0..self.trials).map(f).collect()
        } else {
            (0..self.trials).into_par_iter().map(f).collect()
        }
    }

    fn ms(&self, secs: f64) -> f64 {
        if self.zero_timings {
            0.0
        } else {
            secs * 1e3
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub group: String,
    pub hirsch: usize,
    pub metric: String,
    pub value: String,
    pub unit: String,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub os: String,
    pub arch: String,
    pub threads: usize,
    pub version: String,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            threads: rayon::current_num_threads(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub seed: u64,
    pub environment: Environment,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn new(seed: u64) -> Self {
        ExperimentReport {
            schema: SCHEMA_VERSION,
            seed,
            environment: Environment::current(),
            rows: Vec::new(),
        }
    }

    /// Value of the first row with this group and metric.
    pub fn value(&self, group: &str, metric: &str) -> Option<&str> {
        self.rows
            .iter()
            .find(|r| r.group == group && r.metric == metric)
            .map(|r| r.value.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(BenchError::BadConfig(format!("unknown report format {s:?}"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

struct RowBuilder<'a> {
    group: &'a str,
    hirsch: usize,
    seed: u64,
    trials: usize,
    rows: Vec<ReportRow>,
}

impl<'a> RowBuilder<'a> {
    fn new(group: &'a str, g: &PlatformGroup, cfg: &ExperimentConfig) -> Self {
        RowBuilder {
            group,
            hirsch: g.hirsch_length(),
            seed: cfg.seed,
            trials: cfg.trials,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, metric: &str, value: String, unit: &str) {
        self.rows.push(ReportRow {
            group: self.group.to_string(),
            hirsch: self.hirsch,
            metric: metric.into(),
            value,
            unit: unit.into(),
            seed: self.seed,
            trials: self.trials,
        });
    }

    fn real(&mut self, metric: &str, v: f64, unit: &str) {
        self.push(metric, format!("{v:.6}"), unit);
    }

    fn count(&mut self, metric: &str, v: u64, unit: &str) {
        self.push(metric, v.to_string(), unit);
    }
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        (s[m - 1] + s[m]) / 2.0
    }
}

/// Times `collect` on `trials` random words with lengths drawn uniformly
/// from the configured range.
pub fn bench_collection(label: &str, g: &PlatformGroup, cfg: &ExperimentConfig) -> Result<Vec<ReportRow>, BenchError> {
    let p = g.presentation();
    let gens: Vec<usize> = (0..g.ngens()).collect();
    let root = SeededRng::new(cfg.seed);
    let samples = cfg.run(|i| {
        let mut rng = root.derive(i as u64);
        let w = random_word_over(&gens, cfg.len_min, cfg.len_max, &mut rng)?;
        let t = Instant::now();
        let x = collect(p, &w)?;
        let secs = t.elapsed().as_secs_f64();
        Ok((secs, w.len().to_f64(), x.nf_length().to_f64()))
    })?;
    let times: Vec<f64> = samples.iter().map(|s| cfg.ms(s.0)).collect();
    let lens: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let nf: Vec<f64> = samples.iter().map(|s| s.2).collect();
    let mut out = RowBuilder::new(label, g, cfg);
    out.real("collect_mean", mean(&times), "ms");
    out.real("collect_median", median(&times), "ms");
    out.real("collect_max", times.iter().cloned().fold(0.0, f64::max), "ms");
    out.real("word_length_mean", mean(&lens), "letters");
    out.real("normal_form_length_mean", mean(&nf), "exponent_sum");
    Ok(out.rows)
}

/// Runs `csp_enumerate` on planted pairs `(a, a^c)` with `a` of the
/// configured length and `c` a random word of length `conj_len`.
pub fn bench_csp(
    label: &str,
    g: &PlatformGroup,
    cfg: &ExperimentConfig,
    conj_gens: &[usize],
    conj_len: usize,
    budget: SearchBudget,
) -> Result<Vec<ReportRow>, BenchError> {
    let p = g.presentation();
    let root = SeededRng::new(cfg.seed);
    let samples = cfg.run(|i| {
        let mut rng = root.derive(i as u64);
        let (_, a) = random_element(p, cfg.len_min, cfg.len_max, &mut rng)?;
        let c = collect(p, &random_word_over(conj_gens, conj_len, conj_len, &mut rng)?)?;
        let b = a.conjugate(&c)?;
        let t = Instant::now();
        let res = csp_enumerate(g, &[(a.clone(), b.clone())], budget)?;
        let secs = t.elapsed().as_secs_f64();
        let found_len = match res.found() {
            Some(w) => {
                assert_eq!(a.conjugate(&collect(p, w)?)?, b, "oracle returned a wrong conjugator");
                Some(w.len().to_f64())
            }
            None => None,
        };
        Ok((secs, found_len, res.nodes_explored))
    })?;
    let solved: Vec<_> = samples.iter().filter(|s| s.1.is_some()).collect();
    let n = samples.len() as f64;
    let mut out = RowBuilder::new(label, g, cfg);
    out.count("csp_solved", solved.len() as u64, "instances");
    out.count("csp_exhausted", (samples.len() - solved.len()) as u64, "instances");
    out.real("csp_solve_rate", solved.len() as f64 / n, "fraction");
    out.real(
        "csp_nodes_mean",
        mean(&samples.iter().map(|s| s.2 as f64).collect::<Vec<_>>()),
        "nodes",
    );
    out.real(
        "csp_solution_length_mean",
        mean(&solved.iter().map(|s| s.1.unwrap_or(0.0)).collect::<Vec<_>>()),
        "letters",
    );
    out.real(
        "csp_solve_time_mean",
        mean(&solved.iter().map(|s| cfg.ms(s.0)).collect::<Vec<_>>()),
        "ms",
    );
    out.real(
        "csp_time_mean",
        mean(&samples.iter().map(|s| cfg.ms(s.0)).collect::<Vec<_>>()),
        "ms",
    );
    out.count("budget_nodes", budget.max_nodes, "nodes");
    Ok(out.rows)
}

/// Per-instance LBA outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LbaTrial {
    Success { iterations: u64 },
    Fail { iterations: u64 },
    /// Success whose key differed from the honest one. Never expected.
    Unsound,
    /// The AAG instance could not be generated (degenerate key).
    Skipped,
}

/// One LBA run per trial on a fresh AAG instance seeded by `seed + trial`.
pub fn lba_trials(
    g: &PlatformGroup,
    params: AagParams,
    attack: &LbaConfig,
    cfg: &ExperimentConfig,
) -> Result<Vec<LbaTrial>, BenchError> {
    cfg.run(|i| {
        let mut rng = SeededRng::new(cfg.seed.wrapping_add(i as u64));
        let t = match aag_run(g, params, &mut rng) {
            Ok(t) => t,
            Err(ProtocolError::DegenerateKey { .. }) => return Ok(LbaTrial::Skipped),
            Err(e) => return Err(e.into()),
        };
        let r = lba(&t.public, attack)?;
        Ok(match r.key() {
            Some(k) if k == t.shared_key() => LbaTrial::Success {
                iterations: r.iterations,
            },
            Some(_) => LbaTrial::Unsound,
            None => LbaTrial::Fail {
                iterations: r.iterations,
            },
        })
    })
}

/// LBA success rates with fixed AAG parameters across groups.
pub fn lba_campaign(
    groups: &[(String, PlatformGroup)],
    params: AagParams,
    attack: &LbaConfig,
    cfg: &ExperimentConfig,
) -> Result<Vec<ReportRow>, BenchError> {
    let mut rows = Vec::new();
    for (label, g) in groups {
        let t0 = Instant::now();
        let trials = lba_trials(g, params, attack, cfg)?;
        let secs = t0.elapsed().as_secs_f64();
        let count = |f: fn(&LbaTrial) -> bool| trials.iter().filter(|t| f(t)).count() as u64;
        let ok = count(|t| matches!(t, LbaTrial::Success { .. }));
        let skipped = count(|t| matches!(t, LbaTrial::Skipped));
        let attempted = trials.len() as u64 - skipped;
        let iters: Vec<f64> = trials
            .iter()
            .filter_map(|t| match t {
                LbaTrial::Success { iterations } => Some(*iterations as f64),
                _ => None,
            })
            .collect();
        let mut out = RowBuilder::new(label, g, cfg);
        out.count("lba_success", ok, "instances");
        out.count("lba_fail", count(|t| matches!(t, LbaTrial::Fail { .. })), "instances");
        out.count("lba_unsound", count(|t| matches!(t, LbaTrial::Unsound)), "instances");
        out.count("lba_skipped", skipped, "instances");
        let rate = if attempted == 0 { 0.0 } else { ok as f64 / attempted as f64 };
        out.real("lba_success_rate", rate, "fraction");
        out.real("lba_success_iterations_mean", mean(&iters), "iterations");
        out.real("lba_time_total", cfg.ms(secs), "ms");
        rows.extend(out.rows);
    }
    Ok(rows)
}

pub fn to_csv(report: &ExperimentReport) -> Result<String, BenchError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in &report.rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::IoFailure(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json(report: &ExperimentReport) -> Result<String, BenchError> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

pub fn load_json(text: &str) -> Result<ExperimentReport, BenchError> {
    let r: ExperimentReport = serde_json::from_str(text)?;
    if r.schema != SCHEMA_VERSION {
        return Err(BenchError::BadConfig(format!("unsupported report schema {}", r.schema)));
    }
    Ok(r)
}

pub fn render(report: &ExperimentReport, format: ReportFormat) -> Result<String, BenchError> {
    match format {
        ReportFormat::Csv => to_csv(report),
        ReportFormat::Json => to_json(report),
    }
}

pub fn emit_report(report: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<(), BenchError> {
    std::fs::write(path, render(report, format)?)?;
    Ok(())
}
