//! Script replay against a plain map, with access accounting.

use std::collections::{HashMap, HashSet};
use std::fmt;

use dwalk_core::cuckoo::{CuckooError, CuckooTable, Parity};
use dwalk_core::script::Op;
use serde::{Deserialize, Serialize};

/// The obvious dictionary, with the table's upsert semantics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferenceMap {
    map: HashMap<u64, u64>,
}

impl ReferenceMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the previous value for inserts and deletes, the current one
    /// for queries.
    pub fn apply(&mut self, op: &Op) -> Option<u64> {
        match *op {
            Op::Insert { key, value } => self.map.insert(key, value),
            Op::Delete { key } => self.map.remove(&key),
            Op::Query { key } => self.map.get(&key).copied(),
        }
    }

    pub fn get(&self, key: u64) -> Option<u64> {
        self.map.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.map.iter().map(|(&k, &v)| (k, v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divergence {
    /// Script position, or the script length for end-of-run checks.
    pub op_index: usize,
    pub op: Option<Op>,
    pub detail: String,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.op {
            Some(op) => write!(f, "op {} ({op}): {}", self.op_index, self.detail),
            None => write!(f, "after {} ops: {}", self.op_index, self.detail),
        }
    }
}

impl std::error::Error for Divergence {}

/// Writes to the table's auxiliary structure and reads made by queries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstrumentedCounters {
    pub updates: u64,
    pub queries: u64,
    /// Largest auxiliary write count of one insert/delete, derived from the
    /// structure's own counters, migrations included.
    pub d_writes_per_op_max: u64,
    pub d_writes_total: u64,
    /// Largest write count of a single placement or removal, as reported
    /// by the table.
    pub d_writes_per_placement_max: u32,
    /// Operations whose self-reported write count disagreed with the
    /// observed one.
    pub d_write_mismatches: u64,
    /// Queries that changed any counter of the auxiliary structure or table.
    pub query_writes: u64,
    /// Queries that looked at a bin other than the key's two bins.
    pub query_reads_outside_bins: u64,
}

/// Sum of every write counter of both halves' orientation and rank state.
fn aux_writes(t: &CuckooTable) -> u64 {
    [Parity::A, Parity::B]
        .into_iter()
        .map(|p| {
            let c = t.forest(p).counters();
            let r = t.rank_forest(p).writes();
            c.edges_installed + c.edges_removed + c.volunteers + r.links + r.nodes
        })
        .sum()
}

/// Wraps a table and counts what each operation touches.
pub struct InstrumentedTable<'a> {
    table: &'a mut CuckooTable,
    counters: InstrumentedCounters,
}

impl<'a> InstrumentedTable<'a> {
    pub fn new(table: &'a mut CuckooTable) -> Self {
        Self {
            table,
            counters: InstrumentedCounters::default(),
        }
    }

    pub fn table(&self) -> &CuckooTable {
        self.table
    }

    pub fn counters(&self) -> InstrumentedCounters {
        InstrumentedCounters {
            d_writes_per_placement_max: self.table.stats().d_writes_max_per_placement,
            ..self.counters
        }
    }

    fn update(
        &mut self,
        f: impl FnOnce(&mut CuckooTable) -> Result<dwalk_core::OperationOutcome, CuckooError>,
    ) -> Result<dwalk_core::OperationOutcome, CuckooError> {
        let before = aux_writes(self.table);
        let res = f(self.table);
        let observed = aux_writes(self.table) - before;
        self.counters.updates += 1;
        self.counters.d_writes_total += observed;
        self.counters.d_writes_per_op_max = self.counters.d_writes_per_op_max.max(observed);
        if let Ok(out) = &res {
            if out.d_writes as u64 != observed {
                self.counters.d_write_mismatches += 1;
            }
        }
        res
    }

    pub fn insert(&mut self, key: u64, value: u64) -> Result<dwalk_core::OperationOutcome, CuckooError> {
        self.update(|t| t.insert(key, value))
    }

    pub fn delete(&mut self, key: u64) -> Result<dwalk_core::OperationOutcome, CuckooError> {
        self.update(|t| t.delete(key))
    }

    pub fn query(&mut self, key: u64) -> Option<u64> {
        let before = (aux_writes(self.table), self.table.stats().clone(), self.table.stash().len());
        let (hit, trace) = self.table.query_traced(key);
        let after = (aux_writes(self.table), self.table.stats().clone(), self.table.stash().len());
        self.counters.queries += 1;
        if before != after {
            self.counters.query_writes += 1;
        }
        let (b1, b2) = self.table.provider().bins(key);
        let mut expected = [b1, b2];
        let mut seen = trace.bins_read;
        expected.sort_unstable();
        seen.sort_unstable();
        if expected != seen {
            self.counters.query_reads_outside_bins += 1;
        }
        hit
    }
}

/// Counters accumulated by an instrumented table.
pub fn instrumented_counters(table: &InstrumentedTable<'_>) -> InstrumentedCounters {
    table.counters()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplaySummary {
    pub ops: usize,
    pub inserts: usize,
    pub deletes: usize,
    pub queries: usize,
    pub query_hits: usize,
    pub final_len: usize,
    pub viability_violations: usize,
    pub failures: usize,
    /// First table error, if any, with its script position.
    pub first_error: Option<(usize, String)>,
    pub counters: InstrumentedCounters,
}

impl ReplaySummary {
    pub fn clean(&self) -> bool {
        self.first_error.is_none()
    }
}

/// Runs `ops` on `table` and on a [`ReferenceMap`], comparing every query
/// and the final contents. Table errors (stash overflow, walk failure) keep
/// the record and are tallied rather than treated as divergence.
pub fn replay_with_oracle(ops: &[Op], table: &mut CuckooTable) -> Result<ReplaySummary, Divergence> {
    replay_observed(ops, table, |_, _, _| {})
}

/// Like [`replay_with_oracle`], calling `observe` after every operation.
pub fn replay_observed(
    ops: &[Op],
    table: &mut CuckooTable,
    mut observe: impl FnMut(usize, &Op, &CuckooTable),
) -> Result<ReplaySummary, Divergence> {
    let mut reference = ReferenceMap::new();
    let mut summary = ReplaySummary::default();
    let mut inst = InstrumentedTable::new(table);
    let diverge = |i: usize, op: &Op, detail: String| Divergence {
        op_index: i,
        op: Some(*op),
        detail,
    };

    for (i, op) in ops.iter().enumerate() {
        let expected = reference.apply(op);
        let result = match *op {
            Op::Insert { key, value } => {
                summary.inserts += 1;
                Some((inst.insert(key, value), expected.is_some()))
            }
            Op::Delete { key } => {
                summary.deletes += 1;
                Some((inst.delete(key), expected.is_some()))
            }
            Op::Query { key } => {
                summary.queries += 1;
                let got = inst.query(key);
                if got != expected {
                    return Err(diverge(i, op, format!("table returned {got:?}, expected {expected:?}")));
                }
                summary.query_hits += usize::from(got.is_some());
                None
            }
        };
        if let Some((res, had_key)) = result {
            match res {
                Ok(out) => {
                    let reported = if matches!(op, Op::Insert { .. }) {
                        out.replaced
                    } else {
                        out.removed
                    };
                    if reported != had_key {
                        return Err(diverge(
                            i,
                            op,
                            format!("table reported key present = {reported}, reference says {had_key}"),
                        ));
                    }
                }
                Err(e) => {
                    match e {
                        CuckooError::ViabilityViolation { .. } => summary.viability_violations += 1,
                        CuckooError::Failure(_) => summary.failures += 1,
                        _ => {}
                    }
                    summary.first_error.get_or_insert((i, e.to_string()));
                }
            }
        }
        summary.ops += 1;
        observe(i, op, inst.table());
    }

    let table = inst.table();
    for (key, value) in reference.iter() {
        let got = table.query(key);
        if got != Some(value) {
            return Err(Divergence {
                op_index: ops.len(),
                op: None,
                detail: format!("key {key}: table has {got:?}, expected {value}"),
            });
        }
    }
    let mut stored = HashSet::new();
    for r in table.records() {
        if !stored.insert(r.key) {
            return Err(Divergence {
                op_index: ops.len(),
                op: None,
                detail: format!("key {} stored twice", r.key),
            });
        }
        if reference.get(r.key).is_none() {
            return Err(Divergence {
                op_index: ops.len(),
                op: None,
                detail: format!("key {} stored but deleted", r.key),
            });
        }
    }
    if table.len() != reference.len() {
        return Err(Divergence {
            op_index: ops.len(),
            op: None,
            detail: format!("table length {}, reference {}", table.len(), reference.len()),
        });
    }
    summary.final_len = reference.len();
    summary.counters = inst.counters();
    Ok(summary)
}
