//! End-to-end checks backing the `verify` subcommand.

use std::collections::BTreeSet;

use dwalk_core::cuckoo::Parity;
use dwalk_core::script::Op;
use dwalk_core::{AlgoConfig, Orienter, Variant, VertexId};
use dwalk_oracle::{
    check_epsilon_viability, check_orientation, replay_observed, OrientationLimits,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cuckoo_run::CuckooParams;
use crate::workload::Edge;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub lines: Vec<String>,
}

impl VerifyReport {
    fn fail(&mut self, line: String) {
        self.ok = false;
        self.lines.push(format!("FAIL {line}"));
    }

    fn note(&mut self, line: String) {
        self.lines.push(line);
    }
}

/// `count` distinct positions in `0..len`, sorted, drawn from `seed`.
pub fn checkpoints(len: usize, count: usize, seed: u64) -> BTreeSet<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x00c4_ec49_0157);
    let mut picked = BTreeSet::new();
    while picked.len() < count.min(len) {
        picked.insert(rng.gen_range(0..len));
    }
    picked
}

pub fn limits_for(config: &AlgoConfig) -> OrientationLimits {
    match config.variant {
        Variant::DancingWalkSize | Variant::DancingWalkRank => OrientationLimits::dancing(config.k),
        Variant::FlipAll => OrientationLimits::primaries_only(1),
        Variant::NeverFlip => {
            OrientationLimits::primaries_only((config.n as f64).log2().ceil().max(0.0) as usize)
        }
    }
}

/// Inserts `edges`, sweeping the orientation at 16 seeded checkpoints and
/// at the end.
pub fn verify_edges(edges: &[Edge], config: AlgoConfig) -> VerifyReport {
    let mut report = VerifyReport {
        ok: true,
        ..Default::default()
    };
    let mut o = match Orienter::new(config) {
        Ok(o) => o,
        Err(e) => {
            report.fail(format!("configuration: {e}"));
            return report;
        }
    };
    let limits = limits_for(&config);
    let marks = checkpoints(edges.len(), 16, config.seed);
    let mut failures = 0;
    for (i, &(u, v)) in edges.iter().enumerate() {
        if let Err(e) = o.insert_edge(VertexId(u), VertexId(v)) {
            failures += 1;
            report.fail(format!("edge {i} ({u}, {v}): {e}"));
        }
        if marks.contains(&i) || i + 1 == edges.len() {
            let sweep = check_orientation(&o.forest().snapshot(), limits);
            if !sweep.is_ok() {
                report.fail(format!("after edge {i}: {sweep}"));
                return report;
            }
        }
    }
    report.note(format!(
        "{} edges, {} failures, max out-degree {} (cap {}), {} checkpoints clean",
        edges.len(),
        failures,
        o.max_out_degree(),
        limits.max_out_degree,
        marks.len() + usize::from(!edges.is_empty()),
    ));
    report
}

/// Windowed viability, replay against a reference map, and sweeps of both
/// halves at seeded checkpoints.
pub fn verify_script(ops: &[Op], params: &CuckooParams, seed: u64) -> VerifyReport {
    let mut report = VerifyReport {
        ok: true,
        ..Default::default()
    };
    let mut table = match params.table(seed) {
        Ok(t) => t,
        Err(e) => {
            report.fail(format!("configuration: {e}"));
            return report;
        }
    };
    let windows = check_epsilon_viability(ops, params.n, params.epsilon, table.provider());
    report.note(format!(
        "{} windows of {} updates; largest record set {}; stash needed {} (capacity {})",
        windows.windows.len(),
        windows.window_len,
        windows.largest_window(),
        windows.max_min_stash(),
        params.stash,
    ));
    if !windows.viable_with(params.stash) {
        report.note("script is not viable for this stash; overflow is expected".into());
    }

    let marks = checkpoints(ops.len(), 16, seed);
    let mut sweep_failure = None;
    let replay = replay_observed(ops, &mut table, |i, _, t| {
        if sweep_failure.is_some() || !(marks.contains(&i) || i + 1 == ops.len()) {
            return;
        }
        for p in [Parity::A, Parity::B] {
            let sweep = check_orientation(&t.forest(p).snapshot(), OrientationLimits::cuckoo());
            if !sweep.is_ok() {
                sweep_failure = Some(format!("after op {i}, half {p:?}: {sweep}"));
            }
        }
    });
    match replay {
        Err(d) => report.fail(format!("divergence at {d}")),
        Ok(s) => {
            report.note(format!(
                "replayed {} ops ({} inserts, {} deletes, {} queries); {} keys at the end",
                s.ops, s.inserts, s.deletes, s.queries, s.final_len
            ));
            if let Some((i, e)) = &s.first_error {
                report.fail(format!("op {i}: {e}"));
            }
            let c = s.counters;
            if c.query_writes > 0 || c.query_reads_outside_bins > 0 {
                report.fail(format!(
                    "queries wrote {} times and read outside their bins {} times",
                    c.query_writes, c.query_reads_outside_bins
                ));
            }
            if c.d_write_mismatches > 0 {
                report.fail(format!("{} ops misreported their auxiliary writes", c.d_write_mismatches));
            }
            report.note(format!(
                "auxiliary writes: at most {} per placement, {} per operation",
                c.d_writes_per_placement_max, c.d_writes_per_op_max
            ));
        }
    }
    if let Some(f) = sweep_failure {
        report.fail(f);
    }
    let st = table.stats();
    if st.phase_leftovers > 0 {
        report.fail(format!("{} records left in the retired half at phase ends", st.phase_leftovers));
    }
    report.note(format!(
        "max kickouts {}, stash high water {}, {} phases",
        st.max_kickouts, st.stash_high_water, st.phases_completed
    ));
    report
}
