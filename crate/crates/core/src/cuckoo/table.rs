use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::provider::HashPairProvider;
use crate::algo::{
    apply_augmenting_walk, find_augmenting_walk, AlgoConfig, FailureError, Variant, WalkPolicy,
};
use crate::error::OrientError;
use crate::orient::{EdgeClass, EdgeId, OrientedForest, VertexId};
use crate::rank::{RankForest, Verdict};

pub const SLOTS_PER_BIN: usize = 8;
pub const HALF: usize = 4;
pub const SECONDARY_POS: usize = 2;
pub const BAD_POS: usize = 3;
const PRIMARY_SLOTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Record {
    pub key: u64,
    pub value: u64,
}

type Bin = [Option<Record>; SLOTS_PER_BIN];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    /// Slots 0..4.
    A,
    /// Slots 4..8.
    B,
}

impl Parity {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Parity::A => 0,
            Parity::B => 1,
        }
    }

    #[inline]
    pub fn offset(self) -> usize {
        self.index() * HALF
    }

    #[inline]
    pub fn other(self) -> Parity {
        match self {
            Parity::A => Parity::B,
            Parity::B => Parity::A,
        }
    }

    fn of_slot(pos: usize) -> Parity {
        if pos < HALF {
            Parity::A
        } else {
            Parity::B
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CuckooError {
    #[error("invalid table configuration: {0}")]
    Config(String),

    /// The stash grew past its capacity. The record is still held in the
    /// stash, so no data is lost, but the operation history was not viable
    /// for this stash size.
    #[error("stash holds {stash_len} records, capacity {capacity}")]
    ViabilityViolation { stash_len: usize, capacity: usize },

    /// No augmenting walk was found; the record was parked in the stash.
    #[error(transparent)]
    Failure(#[from] FailureError),

    #[error(transparent)]
    Orient(#[from] OrientError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableConfig {
    pub n: usize,
    pub epsilon: f64,
    pub stash: usize,
    /// Walk constants and rng seed. Must be the rank-based variant with k = 2.
    pub algo: AlgoConfig,
    /// Count leftover old-parity records at every phase boundary (O(n) each).
    pub audit_phases: bool,
}

impl TableConfig {
    pub fn new(n: usize, epsilon: f64, stash: usize) -> Self {
        Self {
            n,
            epsilon,
            stash,
            algo: AlgoConfig::new(Variant::DancingWalkRank, n),
            audit_phases: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.algo.seed = seed;
        self
    }

    pub fn with_audit(mut self, audit: bool) -> Self {
        self.audit_phases = audit;
        self
    }

    pub fn phase_len(&self) -> u64 {
        (self.epsilon * self.n as f64 - 1e-9).ceil().max(1.0) as u64
    }

    pub fn rebuild_batch(&self) -> usize {
        (1.0 / self.epsilon - 1e-9).ceil().max(1.0) as usize
    }

    fn validate(&self) -> Result<(), CuckooError> {
        if self.n < 4 {
            return Err(CuckooError::Config(format!("need at least 4 bins, got {}", self.n)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) && self.epsilon != 1.0 {
            return Err(CuckooError::Config(format!(
                "epsilon must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        if self.algo.variant != Variant::DancingWalkRank {
            return Err(CuckooError::Config("the table runs the rank-based dancing walk".into()));
        }
        if self.algo.k != PRIMARY_SLOTS {
            return Err(CuckooError::Config(format!(
                "a 4-slot half has room for k = 2 primaries, got k = {}",
                self.algo.k
            )));
        }
        if self.algo.n != self.n {
            return Err(CuckooError::Config(format!(
                "walk parameters sized for n = {}, table has {} bins",
                self.algo.n, self.n
            )));
        }
        self.algo.validate()?;
        Ok(())
    }
}

/// What one insert or delete did.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationOutcome {
    /// Records relocated by this operation's own placement.
    pub kickouts: u32,
    pub walk_attempts: u32,
    pub stashed: bool,
    /// The key was already present and its value was overwritten.
    pub replaced: bool,
    /// A delete found and removed its key.
    pub removed: bool,
    /// Records migrated to the active half (rebuilt bins and drained stash).
    pub rebuild_moves: u32,
    /// Kickouts caused by those migrations.
    pub rebuild_kickouts: u32,
    /// Writes to the auxiliary structure across the whole operation.
    pub d_writes: u32,
}

/// Bins and stash location inspected by a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryTrace {
    pub bins_read: [usize; 2],
    pub stash_scanned: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableStats {
    pub inserts: u64,
    pub deletes: u64,
    pub upserts: u64,
    /// Orientation-level insertions: fresh records plus migrations.
    pub placements: u64,
    /// Kickouts per placement.
    pub kickout_histogram: BTreeMap<u32, u64>,
    pub total_kickouts: u64,
    pub max_kickouts: u32,
    pub max_walk_attempts: u32,
    pub bad_placements: u64,
    pub stashed_total: u64,
    pub stash_high_water: usize,
    pub rebuild_moves: u64,
    pub d_writes_total: u64,
    /// Largest auxiliary write count of a single placement or removal.
    pub d_writes_max_per_placement: u32,
    /// Largest auxiliary write count of a whole insert/delete, migrations
    /// included.
    pub d_writes_max_per_op: u32,
    pub phases_completed: u64,
    pub phase_audits: u64,
    pub phase_leftovers: u64,
    pub viability_violations: u64,
    pub failures: u64,
}

#[derive(Debug, Clone)]
struct Aux {
    forest: OrientedForest,
    ranks: RankForest,
}

struct Placement {
    kickouts: u32,
    attempts: u32,
    stashed: bool,
    d_writes: u32,
}

enum Location {
    Bin { bin: usize, pos: usize },
    Stash(usize),
}

/// 8-associative cuckoo table with a stash, maintained by dancing kickouts.
pub struct CuckooTable {
    config: TableConfig,
    policy: WalkPolicy,
    phase_len: u64,
    batch: usize,
    bins: Vec<Bin>,
    stash: Vec<Record>,
    provider: Box<dyn HashPairProvider>,
    aux: [Aux; 2],
    rng: ChaCha8Rng,
    active: Parity,
    phase: u64,
    ops: u64,
    drain_pending: bool,
    len: usize,
    stats: TableStats,
}

impl std::fmt::Debug for CuckooTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CuckooTable")
            .field("n", &self.config.n)
            .field("len", &self.len)
            .field("stash", &self.stash.len())
            .field("phase", &self.phase)
            .field("active", &self.active)
            .finish()
    }
}

impl CuckooTable {
    pub fn new(config: TableConfig, provider: Box<dyn HashPairProvider>) -> Result<Self, CuckooError> {
        config.validate()?;
        if provider.n() != config.n {
            return Err(CuckooError::Config(format!(
                "provider maps to {} bins, table has {}",
                provider.n(),
                config.n
            )));
        }
        let aux = || -> Result<Aux, CuckooError> {
            Ok(Aux {
                forest: OrientedForest::new(config.n, PRIMARY_SLOTS)?,
                ranks: RankForest::new(config.n),
            })
        };
        Ok(Self {
            policy: config.algo.policy(),
            phase_len: config.phase_len(),
            batch: config.rebuild_batch(),
            bins: vec![[None; SLOTS_PER_BIN]; config.n],
            stash: Vec::with_capacity(config.stash),
            provider,
            aux: [aux()?, aux()?],
            rng: ChaCha8Rng::seed_from_u64(config.algo.seed),
            active: Parity::A,
            phase: 0,
            ops: 0,
            drain_pending: false,
            len: 0,
            stats: TableStats::default(),
            config,
        })
    }

    pub fn config(&self) -> &TableConfig {
        &self.config
    }

    pub fn walk_policy(&self) -> WalkPolicy {
        self.policy
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn stats(&self) -> &TableStats {
        &self.stats
    }

    pub fn provider(&self) -> &dyn HashPairProvider {
        self.provider.as_ref()
    }

    pub fn active_parity(&self) -> Parity {
        self.active
    }

    pub fn phase_index(&self) -> u64 {
        self.phase
    }

    /// Inserts and deletes performed so far.
    pub fn op_count(&self) -> u64 {
        self.ops
    }

    pub fn bin(&self, b: usize) -> &[Option<Record>; SLOTS_PER_BIN] {
        &self.bins[b]
    }

    pub fn stash(&self) -> &[Record] {
        &self.stash
    }

    pub fn forest(&self, parity: Parity) -> &OrientedForest {
        &self.aux[parity.index()].forest
    }

    pub fn rank_forest(&self, parity: Parity) -> &RankForest {
        &self.aux[parity.index()].ranks
    }

    /// Every stored record, bins first, then the stash.
    pub fn records(&self) -> impl Iterator<Item = Record> + '_ {
        self.bins
            .iter()
            .flat_map(|bin| bin.iter().flatten().copied())
            .chain(self.stash.iter().copied())
    }

    /// Records sitting in the half that is not active. O(n).
    pub fn inactive_occupancy(&self) -> usize {
        let off = self.active.other().offset();
        self.bins
            .iter()
            .map(|bin| bin[off..off + HALF].iter().filter(|s| s.is_some()).count())
            .sum()
    }

    pub fn query(&self, key: u64) -> Option<u64> {
        self.query_traced(key).0
    }

    /// Lookup that also reports where it looked.
    pub fn query_traced(&self, key: u64) -> (Option<u64>, QueryTrace) {
        let (b1, b2) = self.provider.bins(key);
        let trace = QueryTrace {
            bins_read: [b1, b2],
            stash_scanned: true,
        };
        let hit = self.bins[b1]
            .iter()
            .chain(self.bins[b2].iter())
            .flatten()
            .chain(self.stash.iter())
            .find(|r| r.key == key)
            .map(|r| r.value);
        (hit, trace)
    }

    fn locate(&self, key: u64) -> Option<Location> {
        let (b1, b2) = self.provider.bins(key);
        for bin in [b1, b2] {
            if let Some(pos) = self.bins[bin].iter().position(|s| s.map(|r| r.key) == Some(key)) {
                return Some(Location::Bin { bin, pos });
            }
        }
        self.stash
            .iter()
            .position(|r| r.key == key)
            .map(Location::Stash)
    }

    pub fn insert(&mut self, key: u64, value: u64) -> Result<OperationOutcome, CuckooError> {
        let mut out = OperationOutcome::default();
        let mut first_err = None;
        self.phase_work(&mut out, &mut first_err);
        self.stats.inserts += 1;

        match self.locate(key) {
            Some(Location::Bin { bin, pos }) => {
                self.bins[bin][pos] = Some(Record { key, value });
                out.replaced = true;
                self.stats.upserts += 1;
            }
            Some(Location::Stash(i)) => {
                self.stash[i].value = value;
                out.replaced = true;
                self.stats.upserts += 1;
            }
            None => {
                self.len += 1;
                match self.place(Record { key, value }, 0) {
                    Ok(p) => {
                        out.kickouts = p.kickouts;
                        out.walk_attempts = p.attempts;
                        out.stashed = p.stashed;
                        out.d_writes += p.d_writes;
                    }
                    Err(e) => {
                        out.stashed = true;
                        first_err.get_or_insert(e);
                    }
                }
            }
        }
        self.end_op(&out);
        first_err.map_or(Ok(out), Err)
    }

    /// Removes `key` if present. Deleting an absent key still counts as an
    /// operation and performs its share of migration work.
    pub fn delete(&mut self, key: u64) -> Result<OperationOutcome, CuckooError> {
        let mut out = OperationOutcome::default();
        let mut first_err = None;
        self.phase_work(&mut out, &mut first_err);
        self.stats.deletes += 1;

        match self.locate(key) {
            Some(Location::Bin { bin, pos }) => {
                let d = self.evict_slot(bin, pos)?;
                self.note_d_writes(d);
                out.d_writes += d;
                out.removed = true;
                self.len -= 1;
            }
            Some(Location::Stash(i)) => {
                self.stash.remove(i);
                out.removed = true;
                self.len -= 1;
            }
            None => {}
        }
        self.end_op(&out);
        first_err.map_or(Ok(out), Err)
    }

    fn note_d_writes(&mut self, d: u32) {
        self.stats.d_writes_total += d as u64;
        self.stats.d_writes_max_per_placement = self.stats.d_writes_max_per_placement.max(d);
    }

    fn end_op(&mut self, out: &OperationOutcome) {
        self.stats.d_writes_max_per_op = self.stats.d_writes_max_per_op.max(out.d_writes);
        self.ops += 1;
        if self.ops.is_multiple_of(self.phase_len) {
            self.finish_phase();
        }
    }

    /// Stash drain on the first operation of a phase, then this operation's
    /// share of bin migrations.
    fn phase_work(&mut self, out: &mut OperationOutcome, first_err: &mut Option<CuckooError>) {
        if self.drain_pending {
            self.drain_pending = false;
            let parked = std::mem::take(&mut self.stash);
            for record in parked {
                out.rebuild_moves += 1;
                self.stats.rebuild_moves += 1;
                match self.place(record, 0) {
                    Ok(p) => {
                        out.rebuild_kickouts += p.kickouts;
                        out.d_writes += p.d_writes;
                    }
                    Err(e) => {
                        first_err.get_or_insert(e);
                    }
                }
            }
        }
        let j = (self.ops % self.phase_len) as usize;
        let lo = j.saturating_mul(self.batch).min(self.config.n);
        let hi = lo.saturating_add(self.batch).min(self.config.n);
        for b in lo..hi {
            self.migrate_bin(b, out, first_err);
        }
    }

    fn migrate_bin(&mut self, b: usize, out: &mut OperationOutcome, first_err: &mut Option<CuckooError>) {
        let old = self.active.other();
        let off = old.offset();
        if self.bins[b][off..off + HALF].iter().all(Option::is_none) {
            return;
        }
        let v = VertexId::new(b);
        let edges: Vec<(usize, Option<EdgeId>)> = (0..HALF)
            .filter(|&pos| self.bins[b][off + pos].is_some())
            .map(|pos| (pos, self.slot_edge(old, v, pos)))
            .collect();
        let mut moving = Vec::with_capacity(edges.len());
        for (pos, edge) in edges {
            let mut retire = 0;
            if let Some(e) = edge {
                self.aux[old.index()]
                    .forest
                    .remove_edge(e)
                    .expect("old-half slot mirrors its forest edge");
                retire = 1;
            }
            let record = self.bins[b][off + pos].take().expect("filtered on occupancy");
            moving.push((record, retire));
        }
        for (record, retire) in moving {
            out.rebuild_moves += 1;
            self.stats.rebuild_moves += 1;
            match self.place(record, retire) {
                Ok(p) => {
                    out.rebuild_kickouts += p.kickouts;
                    out.d_writes += p.d_writes;
                }
                Err(e) => {
                    out.d_writes += retire;
                    first_err.get_or_insert(e);
                }
            }
        }
    }

    fn finish_phase(&mut self) {
        if self.config.audit_phases {
            self.stats.phase_audits += 1;
            self.stats.phase_leftovers += self.inactive_occupancy() as u64;
        }
        let next = self.active.other();
        let aux = &mut self.aux[next.index()];
        debug_assert_eq!(aux.forest.alive_edges(), 0, "retired half still holds edges");
        aux.forest.begin_phase();
        aux.ranks.reset();
        self.active = next;
        self.phase += 1;
        self.stats.phases_completed += 1;
        self.drain_pending = !self.stash.is_empty();
    }

    /// Forest edge mirrored by slot `pos` (0..4) of `v`'s half. Self-loop
    /// records in the bad slot have no forest edge.
    fn slot_edge(&self, parity: Parity, v: VertexId, pos: usize) -> Option<EdgeId> {
        let st = self.aux[parity.index()].forest.vertex(v);
        match pos {
            0 | 1 => st.primary().get(pos).copied(),
            SECONDARY_POS => st.secondary(),
            BAD_POS => st.bad(),
            _ => unreachable!("half has four positions"),
        }
    }

    /// Records in the primary and secondary positions of the given vertices,
    /// keyed by the edge each one mirrors.
    fn capture(&self, parity: Parity, verts: &[VertexId]) -> Vec<(EdgeId, Record)> {
        let off = parity.offset();
        let mut seen = Vec::new();
        for &v in verts {
            for pos in 0..=SECONDARY_POS {
                let slot = self.bins[v.index()][off + pos];
                match (self.slot_edge(parity, v, pos), slot) {
                    (Some(e), Some(r)) => seen.push((e, r)),
                    (None, None) => {}
                    _ => panic!("bin {v} position {pos} out of sync with its forest"),
                }
            }
        }
        seen
    }

    /// Rewrites the primary and secondary positions of `verts` from the
    /// forest slots.
    fn rewrite(&mut self, parity: Parity, verts: &[VertexId], records: &[(EdgeId, Record)]) {
        let off = parity.offset();
        for &v in verts {
            for pos in 0..=SECONDARY_POS {
                let slot = self.slot_edge(parity, v, pos).map(|e| {
                    records
                        .iter()
                        .find(|(id, _)| *id == e)
                        .map(|(_, r)| *r)
                        .expect("every slot edge was captured")
                });
                self.bins[v.index()][off + pos] = slot;
            }
        }
    }

    /// Removes the record at `pos` of bin `b` and its forest edge. Returns
    /// auxiliary writes.
    fn evict_slot(&mut self, b: usize, pos: usize) -> Result<u32, CuckooError> {
        let parity = Parity::of_slot(pos);
        let local = pos % HALF;
        let v = VertexId::new(b);
        let Some(edge) = self.slot_edge(parity, v, local) else {
            debug_assert_eq!(local, BAD_POS, "only self-loops lack a forest edge");
            self.bins[b][pos] = None;
            return Ok(0);
        };
        if local == BAD_POS {
            self.aux[parity.index()].forest.remove_edge(edge)?;
            self.bins[b][pos] = None;
        } else {
            let mut records = self.capture(parity, &[v]);
            self.aux[parity.index()].forest.remove_edge(edge)?;
            records.retain(|(id, _)| *id != edge);
            self.rewrite(parity, &[v], &records);
        }
        Ok(1)
    }

    /// Places a record not currently stored anywhere into the active half.
    /// `carried` auxiliary writes (an old-half edge retired for this record)
    /// are charged to the placement.
    fn place(&mut self, record: Record, carried: u32) -> Result<Placement, CuckooError> {
        let parity = self.active;
        let (b1, b2) = self.provider.bins(record.key);
        let (v1, v2) = (VertexId::new(b1), VertexId::new(b2));
        self.stats.placements += 1;

        let result = if b1 == b2 {
            self.place_bad(record, parity, v1, v2, carried)
        } else {
            let probe = self.aux[parity.index()].ranks.probe(v1, v2);
            match probe.verdict() {
                Verdict::SameTree => self.place_bad(record, parity, v1, v2, carried),
                verdict => {
                    let (source, other) = if verdict == Verdict::FirstSmaller {
                        (v1, v2)
                    } else {
                        (v2, v1)
                    };
                    self.place_tree(record, parity, source, other, probe, carried)
                }
            }
        };
        if let Ok(p) = &result {
            *self.stats.kickout_histogram.entry(p.kickouts).or_default() += 1;
            self.stats.total_kickouts += p.kickouts as u64;
            self.stats.max_kickouts = self.stats.max_kickouts.max(p.kickouts);
            self.stats.max_walk_attempts = self.stats.max_walk_attempts.max(p.attempts);
            self.note_d_writes(p.d_writes);
        }
        result
    }

    /// Cycle-closing edge: first endpoint with a free bad slot, else stash.
    fn place_bad(
        &mut self,
        record: Record,
        parity: Parity,
        v1: VertexId,
        v2: VertexId,
        carried: u32,
    ) -> Result<Placement, CuckooError> {
        let slot = parity.offset() + BAD_POS;
        for owner in [v1, v2] {
            if self.bins[owner.index()][slot].is_none() {
                let mut d_writes = carried;
                if v1 != v2 {
                    self.aux[parity.index()]
                        .forest
                        .install_edge(v1, v2, owner, EdgeClass::Bad)?;
                    d_writes += 1;
                }
                self.bins[owner.index()][slot] = Some(record);
                self.stats.bad_placements += 1;
                return Ok(Placement {
                    kickouts: 0,
                    attempts: 0,
                    stashed: false,
                    d_writes,
                });
            }
        }
        self.park(record)?;
        Ok(Placement {
            kickouts: 0,
            attempts: 0,
            stashed: true,
            d_writes: carried,
        })
    }

    fn park(&mut self, record: Record) -> Result<(), CuckooError> {
        self.stash.push(record);
        self.stats.stashed_total += 1;
        self.stats.stash_high_water = self.stats.stash_high_water.max(self.stash.len());
        if self.stash.len() > self.config.stash {
            self.stats.viability_violations += 1;
            return Err(CuckooError::ViabilityViolation {
                stash_len: self.stash.len(),
                capacity: self.config.stash,
            });
        }
        Ok(())
    }

    fn place_tree(
        &mut self,
        record: Record,
        parity: Parity,
        source: VertexId,
        other: VertexId,
        probe: crate::rank::RankProbe,
        carried: u32,
    ) -> Result<Placement, CuckooError> {
        let idx = parity.index();
        let found = find_augmenting_walk(&mut self.aux[idx].forest, source, self.policy, &mut self.rng);
        let walk = match found {
            Ok(w) => w,
            Err(attempts) => {
                self.stats.failures += 1;
                self.stats.max_walk_attempts = self.stats.max_walk_attempts.max(attempts);
                // Parked, not lost; an overflow here is reported as the failure.
                let _ = self.park(record);
                return Err(FailureError {
                    insertion: self.stats.placements - 1,
                    attempts,
                }
                .into());
            }
        };

        let mut verts = Vec::with_capacity(walk.path.len() + 1);
        verts.push(source);
        for &e in &walk.path {
            let head = self.aux[idx].forest.edge(e).expect("walk edge is alive").head();
            verts.push(head);
        }
        let mut records = self.capture(parity, &verts);
        let edge = apply_augmenting_walk(&mut self.aux[idx].forest, source, other, &walk)?;
        records.push((edge, record));
        let (links, nodes) = self.aux[idx].ranks.merge(probe);
        self.rewrite(parity, &verts, &records);

        let volunteer = u32::from(walk.landing == EdgeClass::Secondary);
        Ok(Placement {
            kickouts: walk.path.len() as u32,
            attempts: walk.attempts,
            stashed: false,
            d_writes: carried + links + nodes + volunteer + 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuckoo::{FixedProvider, SeededProvider};

    fn table(n: usize, eps: f64, stash: usize, pairs: &[(u64, (usize, usize))]) -> CuckooTable {
        CuckooTable::new(
            TableConfig::new(n, eps, stash).with_audit(true),
            Box::new(FixedProvider::new(n, pairs.iter().copied())),
        )
        .unwrap()
    }

    #[test]
    fn empty_table() {
        let t = CuckooTable::new(TableConfig::new(16, 0.5, 0), Box::new(SeededProvider::new(1, 16))).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.records().count(), 0);
        assert_eq!(t.bins.iter().flatten().filter(|s| s.is_none()).count(), 128);
        assert_eq!(t.query(5), None);
        assert_eq!(t.stats(), &TableStats::default());
    }

    #[test]
    fn rejects_bad_configs() {
        let p = || Box::new(SeededProvider::new(1, 16)) as Box<dyn HashPairProvider>;
        assert!(matches!(
            CuckooTable::new(TableConfig::new(0, 0.5, 0), Box::new(SeededProvider::new(1, 1))),
            Err(CuckooError::Config(_))
        ));
        assert!(CuckooTable::new(TableConfig::new(16, 0.0, 0), p()).is_err());
        assert!(CuckooTable::new(TableConfig::new(16, 1.5, 0), p()).is_err());
        let mut cfg = TableConfig::new(16, 0.5, 0);
        cfg.algo.k = 3;
        assert!(CuckooTable::new(cfg, p()).is_err());
        assert!(CuckooTable::new(TableConfig::new(32, 0.5, 0), p()).is_err());
    }

    #[test]
    fn first_insert_lands_in_first_bin() {
        let mut t = table(16, 0.5, 0, &[(1, (3, 7))]);
        let out = t.insert(1, 10).unwrap();
        assert_eq!(out.kickouts, 0);
        assert_eq!(t.bin(3)[0], Some(Record { key: 1, value: 10 }));
        assert_eq!(t.query(1), Some(10));
        assert_eq!(t.forest(Parity::A).primary_out_degree(VertexId(3)), 1);
    }

    #[test]
    fn duplicate_pair_goes_bad_then_stash() {
        let mut t = table(16, 0.5, 1, &[(1, (3, 7)), (2, (3, 7)), (3, (3, 7)), (4, (3, 7))]);
        t.insert(1, 1).unwrap();
        t.insert(2, 2).unwrap();
        assert_eq!(t.bin(3)[BAD_POS], Some(Record { key: 2, value: 2 }));
        assert!(t.stash().is_empty());
        // The third closes a second cycle; 7's bad slot is still free.
        t.insert(3, 3).unwrap();
        assert_eq!(t.bin(7)[BAD_POS], Some(Record { key: 3, value: 3 }));
        let out = t.insert(4, 4).unwrap();
        assert!(out.stashed);
        assert_eq!(t.stash(), &[Record { key: 4, value: 4 }]);
        for k in 1..=4 {
            assert_eq!(t.query(k), Some(k));
        }
        // Deleting the stashed record shrinks the stash.
        let out = t.delete(4).unwrap();
        assert!(out.removed);
        assert!(t.stash().is_empty());
        assert_eq!(t.query(4), None);
    }

    #[test]
    fn stash_overflow_is_a_violation_but_keeps_the_record() {
        let pairs: Vec<_> = (1..=4).map(|k| (k, (3, 7))).collect();
        let mut t = table(16, 0.5, 0, &pairs);
        for k in 1..=3 {
            t.insert(k, k).unwrap();
        }
        let err = t.insert(4, 4).unwrap_err();
        assert_eq!(err, CuckooError::ViabilityViolation { stash_len: 1, capacity: 0 });
        assert_eq!(t.query(4), Some(4));
        assert_eq!(t.stats().viability_violations, 1);
    }

    #[test]
    fn self_loop_uses_bad_slot() {
        let mut t = table(16, 0.5, 1, &[(1, (5, 5)), (2, (5, 5))]);
        t.insert(1, 1).unwrap();
        assert_eq!(t.bin(5)[BAD_POS], Some(Record { key: 1, value: 1 }));
        assert_eq!(t.forest(Parity::A).alive_edges(), 0);
        assert!(t.insert(2, 2).unwrap().stashed);
        t.delete(1).unwrap();
        assert_eq!(t.bin(5)[BAD_POS], None);
        assert_eq!(t.query(2), Some(2));
    }

    #[test]
    fn upsert_in_place() {
        let mut t = table(16, 0.5, 0, &[(9, (1, 2))]);
        t.insert(9, 1).unwrap();
        let out = t.insert(9, 2).unwrap();
        assert!(out.replaced);
        assert_eq!(out.kickouts, 0);
        assert_eq!(t.query(9), Some(2));
        assert_eq!(t.len(), 1);
        assert_eq!(t.forest(Parity::A).alive_edges(), 1);
    }

    #[test]
    fn delete_frees_slot_and_keeps_rank() {
        let mut t = table(16, 0.5, 0, &[(1, (3, 7))]);
        t.insert(1, 1).unwrap();
        let out = t.delete(1).unwrap();
        assert!(out.removed);
        assert_eq!(out.d_writes, 1);
        assert_eq!(t.bin(3)[0], None);
        assert_eq!(t.forest(Parity::A).alive_edges(), 0);
        assert_eq!(t.rank_forest(Parity::A).rank_of(VertexId(3)), 1);
        assert!(t.rank_forest(Parity::A).same(VertexId(3), VertexId(7)));
        let out = t.delete(1).unwrap();
        assert!(!out.removed);
        assert_eq!(t.op_count(), 3);
    }

    #[test]
    fn delete_compacts_primaries() {
        // Bin 0 gets primaries for keys 1 (0-1) and 2 (0-2 via rank tie).
        let mut t = table(16, 1.0, 0, &[(1, (0, 1)), (2, (3, 2)), (3, (0, 2))]);
        t.insert(1, 1).unwrap(); // 0 -> 1
        t.insert(2, 2).unwrap(); // 3 -> 2
        t.insert(3, 3).unwrap(); // tie: 0 -> 2
        assert_eq!(t.bin(0)[0].unwrap().key, 1);
        assert_eq!(t.bin(0)[1].unwrap().key, 3);
        t.delete(1).unwrap();
        assert_eq!(t.bin(0)[0].unwrap().key, 3);
        assert_eq!(t.bin(0)[1], None);
        assert_eq!(t.query(3), Some(3));
    }

    #[test]
    fn kickout_moves_record_between_bins() {
        // Same construction as the forest-level one-flip case: bin 0 holds
        // primaries to sinks 1 and 2, and joins the equal-rank {4,5,6,7}.
        let pairs = [
            (1, (0, 1)),
            (2, (3, 2)),
            (3, (0, 2)),
            (4, (4, 5)),
            (5, (6, 7)),
            (6, (4, 6)),
            (7, (0, 4)),
        ];
        let mut t = table(16, 1.0, 0, &pairs);
        for k in 1..=6 {
            assert_eq!(t.insert(k, k).unwrap().kickouts, 0);
        }
        let out = t.insert(7, 7).unwrap();
        assert_eq!(out.kickouts, 1);
        assert_eq!(out.walk_attempts, 1);
        assert_eq!(t.stats().kickout_histogram.get(&1), Some(&1));
        // The kicked record now sits in its other bin; the new one in bin 0.
        let moved = if t.bin(1)[0].is_some() { 1 } else { 3 };
        assert!(t.bin(moved)[0].is_some());
        assert!(t.bin(0).iter().flatten().any(|r| r.key == 7));
        for k in 1..=7 {
            assert_eq!(t.query(k), Some(k), "key {k}");
        }
    }

    #[test]
    fn phase_trace_with_eps_one() {
        // n = 4, eps = 1: phase length 4, one bin migrated per operation.
        let pairs = [(1, (0, 1)), (2, (2, 3)), (3, (1, 2)), (4, (0, 3))];
        let mut t = table(4, 1.0, 0, &pairs);
        for k in 1..=4 {
            t.insert(k, k).unwrap();
            assert_eq!(t.active_parity(), if k < 4 { Parity::A } else { Parity::B });
        }
        assert_eq!(t.phase_index(), 1);
        assert_eq!(t.stats().phase_audits, 1);
        // Second phase: every op migrates bin j; after four more ops the
        // B half holds everything and A is empty.
        for j in 0..4 {
            t.delete(100 + j).unwrap();
        }
        assert_eq!(t.stats().rebuild_moves, 4);
        assert_eq!(t.active_parity(), Parity::A);
        assert_eq!(t.stats().phase_leftovers, 0);
        for b in 0..4 {
            assert!(t.bin(b)[..HALF].iter().all(Option::is_none));
        }
        for k in 1..=4 {
            assert_eq!(t.query(k), Some(k));
        }
    }

    #[test]
    fn empty_table_phases_are_noops() {
        let mut t = table(4, 1.0, 0, &[]);
        for i in 0..12 {
            let out = t.delete(i).unwrap();
            assert_eq!(out, OperationOutcome::default());
        }
        assert_eq!(t.phase_index(), 3);
        assert_eq!(t.stats().rebuild_moves, 0);
    }

    #[test]
    fn stash_drains_on_next_phase() {
        let pairs: Vec<_> = (1..=4).map(|k| (k, (1, 2))).collect();
        let mut t = table(4, 1.0, 1, &pairs);
        for k in 1..=4 {
            t.insert(k, k).unwrap();
        }
        assert_eq!(t.stash().len(), 1);
        // First op of phase 1 re-inserts the stash into half B, where it is
        // the first edge on (1, 2) and lands as a primary.
        let out = t.delete(99).unwrap();
        assert!(out.rebuild_moves >= 1);
        assert!(t.stash().is_empty());
        for k in 1..=4 {
            assert_eq!(t.query(k), Some(k));
        }
    }
}
