//! Simulation benchmark: random instances, both algorithms, per-run records
//! and a summary table.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::time::Instant;

use log::warn;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ci::{oracle_ci, CiSource, Counted, FisherZ, GSquare};
use crate::datagen::{gen_instance, simulate, Instance, Setting, DEFAULT_MAX_DRAWS};
use crate::discovery::{loc_pc_cde, pc};
use crate::error::{BenchError, DiscoveryError};
use crate::graph::{NodeId, Pdag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    LocpcCde,
    Pc,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LocpcCde => "locpc_cde",
            Algorithm::Pc => "pc",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub setting: Setting,
    pub identifiable: bool,
    pub alpha: f64,
    pub n_samples: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    /// Use d-separation in the true DAG instead of simulated data.
    pub oracle: bool,
    /// Record wall-clock time per run. Off by default so that output files
    /// are reproducible byte for byte.
    pub timing: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![10, 20, 50],
            reps: 20,
            setting: Setting::Linear,
            identifiable: true,
            alpha: 0.05,
            n_samples: 5000,
            algorithms: vec![Algorithm::LocpcCde, Algorithm::Pc],
            seed: 42,
            oracle: false,
            timing: false,
        }
    }
}

impl BenchConfig {
    /// Sizes and replicate count of the original large-scale protocol.
    pub fn full_scale(mut self) -> Self {
        self.sizes = vec![10, 50, 100, 150, 200];
        self.reps = 100;
        self
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.sizes.is_empty() {
            return Err(BenchError::Config("sizes must be nonempty".into()));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 3) {
            return Err(BenchError::Config(format!("size {n} is below the minimum of 3")));
        }
        if self.reps == 0 {
            return Err(BenchError::Config("reps must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(BenchError::Config(format!("alpha {} is outside (0, 1)", self.alpha)));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::Config("no algorithms selected".into()));
        }
        if !self.oracle && self.n_samples < 2 {
            return Err(BenchError::Config("at least two samples are needed".into()));
        }
        Ok(())
    }

    /// Seed of one replicate, independent of evaluation order.
    pub fn replicate_seed(&self, n_vars: usize, replicate: usize) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((n_vars as u64) << 32) | replicate as u64);
        rng.next_u64()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub n_vars: usize,
    pub replicate: usize,
    pub ci_count: u64,
    pub verdict_correct: bool,
    pub f1: Option<f64>,
    pub wall_ms: Option<u64>,
    #[serde(skip)]
    pub error: Option<String>,
}

/// F1 score of an estimated parent set against the true one. An empty
/// estimate scores 0.
pub fn f1_parents(estimated: &BTreeSet<NodeId>, truth: &BTreeSet<NodeId>) -> Result<f64, BenchError> {
    if truth.is_empty() {
        return Err(BenchError::EmptyTruth);
    }
    let hits = estimated.intersection(truth).count() as f64;
    if hits == 0.0 {
        return Ok(0.0);
    }
    let precision = hits / estimated.len() as f64;
    let recall = hits / truth.len() as f64;
    Ok(2.0 * precision * recall / (precision + recall))
}

struct Verdict {
    identifiable: bool,
    parents: BTreeSet<NodeId>,
}

fn verdict_from_graph(g: &Pdag, x: NodeId, y: NodeId) -> Verdict {
    let identifiable = !(g.adjacent(x, y) && !g.has_arrow(y, x) && !g.non_arrow_neighbors(y).is_empty());
    Verdict { identifiable, parents: g.parents(y) }
}

fn run_algorithm<S: CiSource>(
    alg: Algorithm,
    ci: &Counted<S>,
    x: NodeId,
    y: NodeId,
) -> Result<Verdict, DiscoveryError> {
    match alg {
        Algorithm::LocpcCde => {
            let r = loc_pc_cde(ci, x, y, None)?;
            Ok(Verdict { identifiable: r.identifiable, parents: r.adjustment_set.unwrap_or_default() })
        }
        Algorithm::Pc => {
            let (g, _) = pc(ci)?;
            Ok(verdict_from_graph(&g, x, y))
        }
    }
}

fn score<S: CiSource>(cfg: &BenchConfig, alg: Algorithm, inst: &Instance, source: S, replicate: usize) -> BenchRecord {
    let ci = Counted::new(source);
    let start = Instant::now();
    let result = run_algorithm(alg, &ci, inst.treatment, inst.target);
    let wall_ms = cfg.timing.then(|| start.elapsed().as_millis() as u64);
    let n_vars = inst.spec.dag.n();
    let mut rec = BenchRecord {
        algorithm: alg,
        n_vars,
        replicate,
        ci_count: ci.count(),
        verdict_correct: false,
        f1: None,
        wall_ms,
        error: None,
    };
    match result {
        Ok(v) => {
            rec.verdict_correct = v.identifiable == inst.identifiable;
            if inst.identifiable && v.identifiable {
                let truth: BTreeSet<NodeId> = inst.spec.dag.parents(inst.target).iter().copied().collect();
                rec.f1 = f1_parents(&v.parents, &truth).ok();
            }
        }
        Err(e) => {
            warn!("{} failed on size {n_vars} replicate {replicate}: {e}", alg.name());
            rec.error = Some(e.to_string());
        }
    }
    rec
}

fn run_replicate(cfg: &BenchConfig, n_vars: usize, replicate: usize) -> Vec<BenchRecord> {
    let seed = cfg.replicate_seed(n_vars, replicate);
    let inst = match gen_instance(n_vars, cfg.setting, cfg.identifiable, seed, DEFAULT_MAX_DRAWS) {
        Ok(inst) => inst,
        Err(e) => {
            warn!("no instance for size {n_vars} replicate {replicate}: {e}");
            return cfg
                .algorithms
                .iter()
                .map(|&alg| BenchRecord {
                    algorithm: alg,
                    n_vars,
                    replicate,
                    ci_count: 0,
                    verdict_correct: false,
                    f1: None,
                    wall_ms: cfg.timing.then_some(0),
                    error: Some(e.to_string()),
                })
                .collect();
        }
    };
    let data = (!cfg.oracle).then(|| simulate(&inst.spec, cfg.n_samples));
    cfg.algorithms
        .iter()
        .map(|&alg| match (&data, cfg.setting) {
            (None, _) => score(cfg, alg, &inst, oracle_ci(&inst.spec.dag), replicate),
            (Some(d), Setting::Linear) => score(cfg, alg, &inst, FisherZ::new(d, cfg.alpha), replicate),
            (Some(d), Setting::Binary) => score(cfg, alg, &inst, GSquare::new(d, cfg.alpha), replicate),
        })
        .collect()
}

/// Runs every (size, replicate) pair in parallel. Records come back ordered
/// by size, replicate and algorithm regardless of scheduling.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg.sizes.iter().flat_map(|&n| (0..cfg.reps).map(move |r| (n, r))).collect();
    let per_job: Vec<Vec<BenchRecord>> = jobs.par_iter().map(|&(n, r)| run_replicate(cfg, n, r)).collect();
    Ok(per_job.into_iter().flatten().collect())
}

pub fn write_records<W: Write>(records: &[BenchRecord], w: W) -> Result<(), BenchError> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(r: R) -> Result<Vec<BenchRecord>, BenchError> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.deserialize().map(|r| r.map_err(BenchError::from)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub n_vars: usize,
    pub runs: usize,
    pub ci_count_mean: f64,
    /// 1.96 times the sample standard deviation; 0 for a single run.
    pub ci_count_band: f64,
    pub tpr: f64,
    pub f1_mean: Option<f64>,
    pub f1_band: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub note: String,
    pub rows: Vec<SummaryRow>,
}

fn mean_band(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, 1.96 * var.sqrt())
}

/// Aggregates records per (algorithm, size). Failed runs count as incorrect
/// verdicts in the TPR denominator.
pub fn summarize(records: &[BenchRecord]) -> Summary {
    let mut groups: BTreeMap<(Algorithm, usize), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.algorithm, r.n_vars)).or_default().push(r);
    }
    let rows = groups
        .into_iter()
        .map(|((algorithm, n_vars), rs)| {
            let counts: Vec<f64> = rs.iter().map(|r| r.ci_count as f64).collect();
            let (ci_count_mean, ci_count_band) = mean_band(&counts);
            let tpr = rs.iter().filter(|r| r.verdict_correct).count() as f64 / rs.len() as f64;
            let f1s: Vec<f64> = rs.iter().filter_map(|r| r.f1).collect();
            let (f1_mean, f1_band) = if f1s.is_empty() {
                (None, None)
            } else {
                let (m, b) = mean_band(&f1s);
                (Some(m), Some(b))
            };
            SummaryRow { algorithm, n_vars, runs: rs.len(), ci_count_mean, ci_count_band, tpr, f1_mean, f1_band }
        })
        .collect();
    Summary { note: "failed runs are counted as incorrect verdicts".into(), rows }
}

pub fn write_summary_csv<W: Write>(summary: &Summary, w: W) -> Result<(), BenchError> {
    let mut out = csv::Writer::from_writer(w);
    for r in &summary.rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
