//! Forest-orientation trials.

use std::time::Instant;

use dwalk_core::{AlgoConfig, InsertError, InsertReport, Orienter, Variant, VertexId};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::output::Row;
use crate::workload::{generate_workload, Edge, WorkloadError, WorkloadSpec};

/// One trial's aggregates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: String,
    pub n: usize,
    pub k: usize,
    pub c: f64,
    pub d: f64,
    pub seed: u64,
    pub max_flips: u32,
    #[serde(serialize_with = "crate::output::three_decimals")]
    pub mean_flips: f64,
    pub p99_flips: u32,
    pub max_walk_attempts: u32,
    pub failures: u64,
    pub max_out_degree: usize,
    pub total_walk_steps: u64,
    pub total_flips: u64,
    pub wall_time_ns: u64,
    pub workload: String,
    pub insertions: u64,
}

impl Row for RunRecord {
    const COLUMNS: &'static [&'static str] = &[
        "algo",
        "n",
        "k",
        "c",
        "d",
        "seed",
        "max_flips",
        "mean_flips",
        "p99_flips",
        "max_walk_attempts",
        "failures",
        "max_out_degree",
        "total_walk_steps",
        "total_flips",
        "wall_time_ns",
        "workload",
        "insertions",
    ];

    fn without_timing(&self) -> Self {
        Self {
            wall_time_ns: 0,
            ..self.clone()
        }
    }
}

/// Nearest-rank percentile of a histogram indexed by value.
pub fn histogram_percentile(hist: &[u64], p: f64) -> u32 {
    let total: u64 = hist.iter().sum();
    if total == 0 {
        return 0;
    }
    let rank = ((p * total as f64).ceil() as u64).max(1);
    let mut seen = 0;
    for (value, &count) in hist.iter().enumerate() {
        seen += count;
        if seen >= rank {
            return value as u32;
        }
    }
    (hist.len() - 1) as u32
}

/// Walk rng seed for a trial; kept apart from the workload's stream.
pub fn algo_seed(trial_seed: u64) -> u64 {
    let mut z = trial_seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Default, Clone)]
struct Tally {
    flips_hist: Vec<u64>,
    max_flips: u32,
    max_attempts: u32,
    failures: u64,
    steps: u64,
    flips: u64,
    insertions: u64,
}

impl Tally {
    fn add(&mut self, res: &Result<InsertReport, InsertError>) {
        self.insertions += 1;
        match res {
            Ok(r) => {
                let f = r.flips as usize;
                if self.flips_hist.len() <= f {
                    self.flips_hist.resize(f + 1, 0);
                }
                self.flips_hist[f] += 1;
                self.max_flips = self.max_flips.max(r.flips);
                self.max_attempts = self.max_attempts.max(r.walk_attempts);
                self.steps += r.walk_steps as u64;
                self.flips += r.flips as u64;
            }
            Err(InsertError::Failure(e)) => {
                self.failures += 1;
                self.max_attempts = self.max_attempts.max(e.attempts);
            }
            // Structural errors mean the workload is not a forest; count them
            // as failures so the run is flagged.
            Err(InsertError::Orient(_)) => self.failures += 1,
        }
    }
}

/// Runs `edges` through a fresh orienter, calling `observe` after each
/// insertion. A failed insertion leaves its edge out and the trial goes on.
pub fn run_trial_observed(
    edges: &[Edge],
    config: AlgoConfig,
    workload: &str,
    trial_seed: u64,
    mut observe: impl FnMut(usize, &Orienter, &Result<InsertReport, InsertError>),
) -> Result<RunRecord, dwalk_core::OrientError> {
    let mut o = Orienter::new(config)?;
    let mut tally = Tally::default();
    let start = Instant::now();
    for (i, &(u, v)) in edges.iter().enumerate() {
        let res = o.insert_edge(VertexId(u), VertexId(v));
        tally.add(&res);
        observe(i, &o, &res);
    }
    let wall_time_ns = start.elapsed().as_nanos() as u64;
    let successes = tally.insertions - tally.failures;
    Ok(RunRecord {
        algo: config.variant.name().to_string(),
        n: config.n,
        k: config.k,
        c: config.c,
        d: config.d,
        seed: trial_seed,
        max_flips: tally.max_flips,
        mean_flips: if successes == 0 {
            0.0
        } else {
            tally.flips as f64 / successes as f64
        },
        p99_flips: histogram_percentile(&tally.flips_hist, 0.99),
        max_walk_attempts: tally.max_attempts,
        failures: tally.failures,
        max_out_degree: o.max_out_degree(),
        total_walk_steps: tally.steps,
        total_flips: tally.flips,
        wall_time_ns,
        workload: workload.to_string(),
        insertions: tally.insertions,
    })
}

pub fn run_trial(spec: &WorkloadSpec, config: AlgoConfig) -> Result<RunRecord, RunError> {
    let edges = generate_workload(spec)?;
    let config = AlgoConfig {
        n: spec.n,
        seed: algo_seed(spec.seed),
        ..config
    };
    Ok(run_trial_observed(&edges, config, spec.kind.name(), spec.seed, |_, _, _| {})?)
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error(transparent)]
    Config(#[from] dwalk_core::OrientError),
}

/// `reps` trials with seeds `spec.seed, spec.seed + 1, ...`, in parallel,
/// returned in seed order.
pub fn run_orient(spec: &WorkloadSpec, config: AlgoConfig, reps: usize) -> Result<Vec<RunRecord>, RunError> {
    (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let trial = WorkloadSpec {
                seed: spec.seed.wrapping_add(r),
                ..spec.clone()
            };
            run_trial(&trial, config)
        })
        .collect()
}

/// Every variant in `variants` over the same seeds; rows ordered by
/// variant, then seed.
pub fn run_orient_variants(
    spec: &WorkloadSpec,
    base: AlgoConfig,
    variants: &[Variant],
    reps: usize,
) -> Result<Vec<RunRecord>, RunError> {
    let mut rows = Vec::new();
    for &variant in variants {
        rows.extend(run_orient(spec, AlgoConfig { variant, ..base }, reps)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::WorkloadKind;

    fn cfg(variant: Variant) -> AlgoConfig {
        AlgoConfig::new(variant, 0)
    }

    #[test]
    fn percentile() {
        assert_eq!(histogram_percentile(&[], 0.99), 0);
        assert_eq!(histogram_percentile(&[99, 1], 0.99), 0);
        assert_eq!(histogram_percentile(&[98, 2], 0.99), 1);
        assert_eq!(histogram_percentile(&[0, 0, 5], 0.5), 2);
    }

    #[test]
    fn star_never_flips() {
        let spec = WorkloadSpec::new(WorkloadKind::Star, 1000, 1);
        for r in run_orient(&spec, cfg(Variant::DancingWalkRank), 3).unwrap() {
            assert_eq!(r.max_flips, 0);
            assert_eq!(r.failures, 0);
        }
    }

    #[test]
    fn never_flip_balanced_binary_reaches_log_n() {
        let spec = WorkloadSpec::new(WorkloadKind::BalancedBinary, 1 << 10, 0);
        let r = run_trial(&spec, cfg(Variant::NeverFlip)).unwrap();
        assert_eq!(r.max_out_degree, 10);
        assert_eq!(r.total_flips, 0);
    }

    #[test]
    fn flip_all_out_degree_one() {
        for kind in WorkloadKind::GENERATED {
            let r = run_trial(&WorkloadSpec::new(kind, 500, 4), cfg(Variant::FlipAll)).unwrap();
            assert_eq!(r.max_out_degree, 1, "{kind}");
        }
    }

    #[test]
    fn aggregates_match_reports() {
        let spec = WorkloadSpec::new(WorkloadKind::RandomRecursiveTree, 3000, 9);
        let edges = generate_workload(&spec).unwrap();
        let mut reports = Vec::new();
        let config = AlgoConfig::new(Variant::DancingWalkRank, 3000).with_seed(algo_seed(9));
        let rec = run_trial_observed(&edges, config, spec.kind.name(), 9, |_, _, r| {
            reports.push(r.clone().unwrap());
        })
        .unwrap();
        assert_eq!(rec, run_trial(&spec, cfg(Variant::DancingWalkRank)).unwrap().with_time(rec.wall_time_ns));
        assert_eq!(rec.total_flips, reports.iter().map(|r| r.flips as u64).sum::<u64>());
        assert_eq!(rec.total_walk_steps, reports.iter().map(|r| r.walk_steps as u64).sum::<u64>());
        assert_eq!(rec.max_flips, reports.iter().map(|r| r.flips).max().unwrap());
        assert_eq!(rec.insertions, 2999);
        assert!(rec.total_flips > 0);
    }

    #[test]
    fn rows_in_seed_order() {
        let spec = WorkloadSpec::new(WorkloadKind::Path, 64, 100);
        let rows = run_orient_variants(&spec, cfg(Variant::NeverFlip), &Variant::ALL, 4).unwrap();
        assert_eq!(rows.len(), 16);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.seed, 100 + (i % 4) as u64);
            assert_eq!(r.algo, Variant::ALL[i / 4].name());
        }
    }

    impl RunRecord {
        fn with_time(self, wall_time_ns: u64) -> Self {
            Self { wall_time_ns, ..self }
        }
    }
}
