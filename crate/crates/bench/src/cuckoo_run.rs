//! Hash-table script generation and replay.

use std::collections::HashSet;
use std::time::Instant;

use dwalk_core::cuckoo::{CuckooError, CuckooTable, SeededProvider, TableConfig, TabulationProvider};
use dwalk_core::script::Op;
use dwalk_core::{HashPairProvider, Variant};
use dwalk_oracle::replay_with_oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::orient_run::{algo_seed, histogram_percentile};
use crate::output::{three_decimals, Row};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScriptKind {
    /// `load * n` inserts of distinct keys.
    InsertOnly { load: f64 },
    /// Fill to `load * n`, then `ops` operations in total: a `query_frac`
    /// share of queries, the rest split evenly between inserting a fresh key
    /// and deleting a random live one.
    Churn { load: f64, ops: usize, query_frac: f64 },
}

pub fn generate_script(kind: ScriptKind, n: usize, seed: u64) -> Vec<Op> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = HashSet::new();
    let mut fresh = |rng: &mut ChaCha8Rng| loop {
        let k: u64 = rng.gen();
        if used.insert(k) {
            return k;
        }
    };
    let mut ops = Vec::new();
    let mut live: Vec<u64> = Vec::new();
    let fill = |load: f64| (load * n as f64).floor() as usize;
    match kind {
        ScriptKind::InsertOnly { load } => {
            for _ in 0..fill(load) {
                let key = fresh(&mut rng);
                ops.push(Op::Insert { key, value: rng.gen() });
            }
        }
        ScriptKind::Churn { load, ops: total, query_frac } => {
            while ops.len() < total.min(fill(load)) {
                let key = fresh(&mut rng);
                live.push(key);
                ops.push(Op::Insert { key, value: rng.gen() });
            }
            while ops.len() < total {
                if rng.gen_bool(query_frac) {
                    let key = if !live.is_empty() && rng.gen() {
                        live[rng.gen_range(0..live.len())]
                    } else {
                        rng.gen()
                    };
                    ops.push(Op::Query { key });
                } else if live.is_empty() || rng.gen() {
                    let key = fresh(&mut rng);
                    live.push(key);
                    ops.push(Op::Insert { key, value: rng.gen() });
                } else {
                    let key = live.swap_remove(rng.gen_range(0..live.len()));
                    ops.push(Op::Delete { key });
                }
            }
        }
    }
    ops
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProviderKind {
    Seeded,
    Tabulation,
}

impl std::str::FromStr for ProviderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seeded" => Ok(ProviderKind::Seeded),
            "tabulation" => Ok(ProviderKind::Tabulation),
            other => Err(format!("unknown provider {other:?}")),
        }
    }
}

pub fn make_provider(kind: ProviderKind, seed: u64, n: usize) -> Box<dyn HashPairProvider> {
    match kind {
        ProviderKind::Seeded => Box::new(SeededProvider::new(seed, n)),
        ProviderKind::Tabulation => Box::new(TabulationProvider::new(seed, n)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuckooParams {
    pub n: usize,
    pub epsilon: f64,
    pub stash: usize,
    pub c: f64,
    pub d: f64,
    pub provider: ProviderKind,
    pub oracle: bool,
}

impl CuckooParams {
    pub fn new(n: usize, epsilon: f64, stash: usize) -> Self {
        Self {
            n,
            epsilon,
            stash,
            c: 4.0,
            d: 4.0,
            provider: ProviderKind::Seeded,
            oracle: false,
        }
    }

    /// Table for trial `seed`; the hash pair is drawn from the same seed.
    pub fn table(&self, seed: u64) -> Result<CuckooTable, CuckooError> {
        let mut cfg = TableConfig::new(self.n, self.epsilon, self.stash)
            .with_seed(algo_seed(seed))
            .with_audit(true);
        cfg.algo = cfg.algo.with_constants(self.c, self.d);
        debug_assert_eq!(cfg.algo.variant, Variant::DancingWalkRank);
        CuckooTable::new(cfg, make_provider(self.provider, seed, self.n))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CuckooRunRecord {
    pub n: usize,
    pub epsilon: f64,
    pub stash: usize,
    pub seed: u64,
    pub ops: usize,
    pub inserts: u64,
    pub deletes: u64,
    pub final_len: usize,
    pub max_kickouts: u32,
    #[serde(serialize_with = "three_decimals")]
    pub mean_kickouts: f64,
    pub p99_kickouts: u32,
    pub max_walk_attempts: u32,
    pub stash_high_water: usize,
    pub viability_violations: u64,
    pub failures: u64,
    pub d_writes_max_per_placement: u32,
    pub d_writes_max_per_op: u32,
    pub phases: u64,
    pub phase_leftovers: u64,
    /// `off`, `equal`, or the first divergence.
    pub oracle: String,
    pub p99_op_latency_ns: u64,
    pub wall_time_ns: u64,
}

impl CuckooRunRecord {
    /// A violation, failure or oracle divergence occurred.
    pub fn flagged(&self) -> bool {
        self.viability_violations > 0 || self.failures > 0 || (self.oracle != "off" && self.oracle != "equal")
    }
}

impl Row for CuckooRunRecord {
    const COLUMNS: &'static [&'static str] = &[
        "n",
        "epsilon",
        "stash",
        "seed",
        "ops",
        "inserts",
        "deletes",
        "final_len",
        "max_kickouts",
        "mean_kickouts",
        "p99_kickouts",
        "max_walk_attempts",
        "stash_high_water",
        "viability_violations",
        "failures",
        "d_writes_max_per_placement",
        "d_writes_max_per_op",
        "phases",
        "phase_leftovers",
        "oracle",
        "p99_op_latency_ns",
        "wall_time_ns",
    ];

    fn without_timing(&self) -> Self {
        Self {
            p99_op_latency_ns: 0,
            wall_time_ns: 0,
            ..self.clone()
        }
    }
}

pub fn run_cuckoo(ops: &[Op], params: &CuckooParams, seed: u64) -> Result<CuckooRunRecord, CuckooError> {
    let mut table = params.table(seed)?;
    let start = Instant::now();
    let mut latencies = Vec::new();
    let oracle = if params.oracle {
        match replay_with_oracle(ops, &mut table) {
            Ok(_) => "equal".to_string(),
            Err(d) => d.to_string(),
        }
    } else {
        latencies.reserve(ops.len());
        for op in ops {
            let t = Instant::now();
            // Errors leave the record stashed and are tallied in the stats.
            let _ = match *op {
                Op::Insert { key, value } => table.insert(key, value).map(drop),
                Op::Delete { key } => table.delete(key).map(drop),
                Op::Query { key } => {
                    std::hint::black_box(table.query(key));
                    Ok(())
                }
            };
            latencies.push(t.elapsed().as_nanos() as u64);
        }
        "off".to_string()
    };
    let wall_time_ns = start.elapsed().as_nanos() as u64;
    latencies.sort_unstable();
    let p99_op_latency_ns = if latencies.is_empty() {
        0
    } else {
        latencies[((latencies.len() as f64 * 0.99).ceil() as usize).clamp(1, latencies.len()) - 1]
    };

    let s = table.stats();
    let hist: Vec<u64> = match s.kickout_histogram.keys().next_back() {
        Some(&max) => (0..=max).map(|k| s.kickout_histogram.get(&k).copied().unwrap_or(0)).collect(),
        None => Vec::new(),
    };
    Ok(CuckooRunRecord {
        n: params.n,
        epsilon: params.epsilon,
        stash: params.stash,
        seed,
        ops: ops.len(),
        inserts: s.inserts,
        deletes: s.deletes,
        final_len: table.len(),
        max_kickouts: s.max_kickouts,
        mean_kickouts: if s.placements == 0 {
            0.0
        } else {
            s.total_kickouts as f64 / s.placements as f64
        },
        p99_kickouts: histogram_percentile(&hist, 0.99),
        max_walk_attempts: s.max_walk_attempts,
        stash_high_water: s.stash_high_water,
        viability_violations: s.viability_violations,
        failures: s.failures,
        d_writes_max_per_placement: s.d_writes_max_per_placement,
        d_writes_max_per_op: s.d_writes_max_per_op,
        phases: s.phases_completed,
        phase_leftovers: s.phase_leftovers,
        oracle,
        p99_op_latency_ns,
        wall_time_ns,
    })
}

/// Trials `seed, seed + 1, ...`; each generates its own script unless one
/// is given.
pub fn run_cuckoo_trials(
    script: Option<&[Op]>,
    kind: ScriptKind,
    params: &CuckooParams,
    seed: u64,
    reps: usize,
) -> Result<Vec<CuckooRunRecord>, CuckooError> {
    (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let s = seed.wrapping_add(r);
            match script {
                Some(ops) => run_cuckoo(ops, params, s),
                None => run_cuckoo(&generate_script(kind, params.n, s), params, s),
            }
        })
        .collect()
}
