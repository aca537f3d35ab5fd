//! Experiment runner: generates random targets over a parameter grid, runs
//! the learners, measures wall-clock learning time (oracle time included,
//! generation and evaluation excluded) and writes one CSV row per trial.
//!
//! Five experiments are wired in: a nominal-size sweep, an alphabet-size
//! sweep, a quantization/tolerance sweep with `t = 1/κ`, a large-size sweep
//! for the tree learner alone, and a shared-distribution sweep where states
//! draw their distributions from a pool of `d`. Desk-scale grids keep runs
//! CI-friendly; `full` selects the larger sweeps.
//!
//! Seeding: per target, the generator runs on ChaCha stream `2·k` and the
//! test-set sampler on stream `2·k + 1` of the master seed, where `k`
//! enumerates (grid point, target) pairs. Learners themselves are
//! deterministic, so repeated runs of a trial differ only in timing.

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::Pdfa;
use crate::error::{Error, Result};
use crate::lpstar::{run_lpstar, LpstarVariant};
use crate::metrics::{logprob_err, ndcg, sample_strings, wer, TestSet};
use crate::quant::QuantLearner;
use crate::randgen::{random_pdfa_stream, GenConfig};
use crate::teacher::{PdfaTeacher, Teacher};

/// Test-set defaults; configuration, not tuned values.
pub const TEST_SET_SIZE: usize = 1000;
pub const TEST_SET_MAX_LEN: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Quant,
    Lpstar,
    LpstarCol,
}

impl std::fmt::Display for Algo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algo::Quant => write!(f, "quant"),
            Algo::Lpstar => write!(f, "lpstar"),
            Algo::LpstarCol => write!(f, "lpstar-col"),
        }
    }
}

impl std::str::FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quant" => Ok(Algo::Quant),
            "lpstar" => Ok(Algo::Lpstar),
            "lpstar-col" => Ok(Algo::LpstarCol),
            other => Err(Error::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// One CSV row. Field order defines the header:
/// `algo,nominal_n,actual_n,m,kappa,tolerance,d,trial,time_ms,structure_size,mq_count,eq_count,wer,ndcg,logprob_err,seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub algo: Algo,
    pub nominal_n: usize,
    pub actual_n: usize,
    pub m: usize,
    pub kappa: Option<u32>,
    pub tolerance: Option<f64>,
    pub d: Option<usize>,
    pub trial: usize,
    pub time_ms: f64,
    pub structure_size: usize,
    pub mq_count: u64,
    pub eq_count: u64,
    pub wer: f64,
    pub ndcg: f64,
    pub logprob_err: f64,
    pub seed: u64,
}

/// One grid point of an experiment.
#[derive(Debug, Clone)]
pub struct GridPoint {
    pub nominal_n: usize,
    pub m: usize,
    pub kappa: u32,
    pub tolerance: f64,
    pub d: Option<usize>,
    pub algos: Vec<Algo>,
}

/// A fully instantiated experiment.
#[derive(Debug, Clone)]
pub struct Plan {
    pub points: Vec<GridPoint>,
    pub targets_per_point: usize,
    pub runs_per_target: usize,
    pub test_set_size: usize,
    pub max_len: usize,
}

impl Plan {
    pub fn expected_rows(&self) -> usize {
        self.points.iter().map(|p| p.algos.len()).sum::<usize>()
            * self.targets_per_point
            * self.runs_per_target
    }
}

/// The parameter grids of experiments 1 through 5.
pub fn experiment_plan(id: u8, full: bool) -> Result<Plan> {
    let both = vec![Algo::Quant, Algo::Lpstar];
    let (targets, runs) = if full { (10, 10) } else { (5, 3) };
    let point = |n: usize, m: usize, kappa: u32, d: Option<usize>, algos: Vec<Algo>| GridPoint {
        nominal_n: n,
        m,
        kappa,
        tolerance: 1.0 / kappa as f64,
        d,
        algos,
    };
    let points = match id {
        1 => {
            let ns: &[usize] = if full { &[100, 200, 300] } else { &[25, 50, 100] };
            ns.iter().map(|&n| point(n, 2, 1000, None, both.clone())).collect()
        }
        2 => {
            let ms: &[usize] = if full { &[2, 4, 8, 16, 32] } else { &[2, 4, 8] };
            let n = if full { 100 } else { 50 };
            ms.iter().map(|&m| point(n, m, 1000, None, both.clone())).collect()
        }
        3 => {
            let kappas: &[u32] = if full {
                &[10, 100, 500, 1000, 2000, 3000]
            } else {
                &[10, 100, 1000]
            };
            let n = if full { 300 } else { 50 };
            kappas.iter().map(|&k| point(n, 2, k, None, both.clone())).collect()
        }
        4 => {
            let ns: &[usize] = if full { &[1000, 2000, 5000] } else { &[200, 400, 800] };
            ns.iter().map(|&n| point(n, 2, 1000, None, vec![Algo::Quant])).collect()
        }
        5 => {
            let ds: &[usize] = if full { &[2, 4, 8, 16] } else { &[2, 4, 8] };
            let n = if full { 300 } else { 50 };
            ds.iter().map(|&d| point(n, 2, 1000, Some(d), both.clone())).collect()
        }
        other => {
            return Err(Error::Config(format!(
                "experiment must be 1..=5, got {other}"
            )))
        }
    };
    Ok(Plan {
        points,
        targets_per_point: targets,
        runs_per_target: runs,
        test_set_size: TEST_SET_SIZE,
        max_len: TEST_SET_MAX_LEN,
    })
}

/// Runs one learner over one target and measures it.
fn run_trial(
    algo: Algo,
    point: &GridPoint,
    target: &Pdfa,
    ts: &TestSet,
    trial: usize,
    seed: u64,
) -> Result<TrialRecord> {
    let mut teacher = PdfaTeacher::new(target.clone());
    let start = Instant::now();
    let (hyp, structure_size) = match algo {
        Algo::Quant => {
            let mut learner = QuantLearner::new(&mut teacher, point.kappa)?;
            let out = learner.run()?;
            let size = out.structure_size();
            (out.pdfa, size)
        }
        Algo::Lpstar | Algo::LpstarCol => {
            let variant = if algo == Algo::Lpstar {
                LpstarVariant::RowExpansion
            } else {
                LpstarVariant::ColumnExpansion
            };
            let out = run_lpstar(&mut teacher, point.tolerance, variant)?;
            let size = out.structure_size();
            (out.pdfa, size)
        }
    };
    let time_ms = start.elapsed().as_secs_f64() * 1000.0;
    Ok(TrialRecord {
        algo,
        nominal_n: point.nominal_n,
        actual_n: target.num_states(),
        m: point.m,
        kappa: (algo == Algo::Quant).then_some(point.kappa),
        tolerance: (algo != Algo::Quant).then_some(point.tolerance),
        d: point.d,
        trial,
        time_ms,
        structure_size,
        mq_count: teacher.mq_count(),
        eq_count: teacher.eq_count(),
        wer: wer(target, &hyp, ts),
        ndcg: ndcg(target, &hyp, ts),
        logprob_err: logprob_err(target, &hyp, ts),
        seed,
    })
}

/// Runs every trial of a plan. With `parallel`, trials run on the rayon pool
/// (learners are independent); rows come back in deterministic order either
/// way.
pub fn run_plan(plan: &Plan, seed: u64, parallel: bool) -> Result<Vec<TrialRecord>> {
    // Materialize targets and test sets serially: they are cheap relative to
    // learning and this keeps stream assignment straightforward.
    let mut work = Vec::new();
    let mut pair_index = 0u64;
    for point in &plan.points {
        for _target_idx in 0..plan.targets_per_point {
            let mut cfg = GenConfig::new(point.nominal_n, point.m, seed);
            if let Some(d) = point.d {
                cfg = cfg.with_shared_dists(d);
            }
            let target = random_pdfa_stream(&cfg, 2 * pair_index)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(2 * pair_index + 1);
            let ts = sample_strings(&target, plan.test_set_size, plan.max_len, &mut rng);
            for &algo in &point.algos {
                for run in 0..plan.runs_per_target {
                    work.push((point.clone(), target.clone(), ts.clone(), algo, run));
                }
            }
            pair_index += 1;
        }
    }
    let run_one = |(point, target, ts, algo, run): &(GridPoint, Pdfa, TestSet, Algo, usize)| {
        run_trial(*algo, point, target, ts, *run, seed)
    };
    if parallel {
        work.par_iter().map(run_one).collect()
    } else {
        work.iter().map(run_one).collect()
    }
}

/// Convenience wrapper for the CLI: plan + run.
pub fn run_experiment(id: u8, full: bool, seed: u64, parallel: bool) -> Result<Vec<TrialRecord>> {
    let plan = experiment_plan(id, full)?;
    run_plan(&plan, seed, parallel)
}

pub fn write_csv(path: &Path, records: &[TrialRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn csv_string(records: &[TrialRecord]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in records {
        writer.serialize(r)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn read_csv(path: &Path) -> Result<Vec<TrialRecord>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Median of a sample; the mean of the middle pair for even sizes.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}
