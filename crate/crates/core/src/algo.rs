//! Per-insertion policies: the never-flip and flip-all baselines and the
//! dancing walk (size based or rank based; raising `k` gives the k-ary
//! tradeoff variant).
//!
//! A dancing-walk insertion picks the endpoint `s` in the smaller component.
//! If `s` has a free primary slot the new edge simply points out of it.
//! Otherwise up to `A` random walks of at most `L` steps are tried from `s`:
//! a walk that reaches a vertex with a free primary slot is accepted, a
//! full-length walk is accepted if its terminal can still volunteer a
//! secondary slot, anything else is discarded. The accepted path is flipped
//! and the new edge installed out of `s`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::OrientError;
use crate::orient::{EdgeClass, EdgeId, OrientedForest, StepSource, VertexId, WalkReason};
use crate::rank::{RankForest, RankProbe, SizeForest, SizeProbe, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    NeverFlip,
    FlipAll,
    DancingWalkSize,
    DancingWalkRank,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::NeverFlip,
        Variant::FlipAll,
        Variant::DancingWalkSize,
        Variant::DancingWalkRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::NeverFlip => "never-flip",
            Variant::FlipAll => "flip-all",
            Variant::DancingWalkSize => "dancing-size",
            Variant::DancingWalkRank => "dancing-rank",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "never-flip" | "neverflip" => Ok(Variant::NeverFlip),
            "flip-all" | "flipall" => Ok(Variant::FlipAll),
            "dancing-size" | "size" => Ok(Variant::DancingWalkSize),
            "dancing-rank" | "rank" => Ok(Variant::DancingWalkRank),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

const EPS: f64 = 1e-9;

/// Walk length cap `L = max(1, ceil(c * log_k(log2 n)))`, clamped to 1 for
/// `n < 4`.
pub fn walk_params(n: usize, k: usize, c: f64) -> usize {
    if n < 4 {
        return 1;
    }
    let loglog = (n as f64).log2().log2();
    let raw = c * loglog / (k as f64).log2();
    // Exact powers (e.g. log_16(16) = 1) must not round up on float noise.
    ((raw - EPS).ceil() as usize).max(1)
}

/// Attempt cap `A = max(1, ceil(d * log2 n))`.
pub fn attempt_cap(n: usize, d: f64) -> usize {
    if n < 2 {
        return 1;
    }
    let raw = d * (n as f64).log2();
    ((raw - EPS).ceil() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgoConfig {
    pub variant: Variant,
    pub n: usize,
    pub k: usize,
    pub c: f64,
    pub d: f64,
    pub seed: u64,
}

impl AlgoConfig {
    pub fn new(variant: Variant, n: usize) -> Self {
        Self {
            variant,
            n,
            k: 2,
            c: 4.0,
            d: 4.0,
            seed: 0,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_constants(mut self, c: f64, d: f64) -> Self {
        self.c = c;
        self.d = d;
        self
    }

    pub fn walk_len(&self) -> usize {
        walk_params(self.n, self.k, self.c)
    }

    pub fn attempt_cap(&self) -> usize {
        attempt_cap(self.n, self.d)
    }

    pub fn policy(&self) -> WalkPolicy {
        WalkPolicy {
            walk_len: self.walk_len(),
            attempt_cap: self.attempt_cap(),
        }
    }

    pub fn validate(&self) -> Result<(), OrientError> {
        if self.n == 0 {
            return Err(OrientError::Config("n must be at least 1".into()));
        }
        if self.k < 2 {
            return Err(OrientError::Config(format!("k must be at least 2, got {}", self.k)));
        }
        if !(self.c > 0.0 && self.c.is_finite()) || !(self.d > 0.0 && self.d.is_finite()) {
            return Err(OrientError::Config(format!(
                "walk constants must be positive, got c={} d={}",
                self.c, self.d
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkPolicy {
    pub walk_len: usize,
    pub attempt_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InsertReport {
    pub source: VertexId,
    pub terminal: VertexId,
    pub flips: u32,
    pub walk_attempts: u32,
    pub walk_steps: u32,
    pub early_exit: bool,
    pub volunteer_used: bool,
    /// The new edge.
    pub edge: EdgeId,
    /// Edges flipped, in path order from the source.
    pub flipped: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("insertion {insertion} failed after {attempts} walk attempts")]
pub struct FailureError {
    pub insertion: u64,
    pub attempts: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InsertError {
    #[error(transparent)]
    Failure(#[from] FailureError),
    #[error(transparent)]
    Orient(#[from] OrientError),
}

/// An accepted augmenting walk, not yet applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentingWalk {
    pub path: Vec<EdgeId>,
    pub terminal: VertexId,
    /// Slot the last flipped edge takes at the terminal.
    pub landing: EdgeClass,
    pub attempts: u32,
    pub steps: u32,
}

impl AugmentingWalk {
    pub fn early_exit(&self) -> bool {
        self.attempts == 0
    }
}

/// Searches for an augmenting walk out of `source` without changing any
/// slot. `Err(attempts)` means every attempt failed.
pub fn find_augmenting_walk<S: StepSource + ?Sized>(
    forest: &mut OrientedForest,
    source: VertexId,
    policy: WalkPolicy,
    rng: &mut S,
) -> Result<AugmentingWalk, u32> {
    if forest.primary_out_degree(source) < forest.k() {
        return Ok(AugmentingWalk {
            path: Vec::new(),
            terminal: source,
            landing: EdgeClass::Primary,
            attempts: 0,
            steps: 0,
        });
    }
    let mut steps = 0u32;
    for attempt in 1..=policy.attempt_cap as u32 {
        let walk = forest.random_walk(source, policy.walk_len, rng);
        steps += walk.path.len() as u32;
        let landing = match walk.reason {
            WalkReason::LowDegree => Some(EdgeClass::Primary),
            WalkReason::FullLength => {
                let t = walk.terminal;
                (forest.vertex(t).secondary().is_none() && !forest.is_volunteered(t))
                    .then_some(EdgeClass::Secondary)
            }
        };
        if let Some(landing) = landing {
            return Ok(AugmentingWalk {
                path: walk.path,
                terminal: walk.terminal,
                landing,
                attempts: attempt,
                steps,
            });
        }
    }
    Err(policy.attempt_cap as u32)
}

/// Flips the walk and installs the new edge `(source, other)` as a primary
/// out of `source`.
pub fn apply_augmenting_walk(
    forest: &mut OrientedForest,
    source: VertexId,
    other: VertexId,
    walk: &AugmentingWalk,
) -> Result<EdgeId, OrientError> {
    forest.flip_path(&walk.path, source, walk.landing)?;
    forest.install_edge(source, other, source, EdgeClass::Primary)
}

#[derive(Debug, Clone)]
enum Sides {
    Rank(RankForest),
    Size(SizeForest),
}

#[derive(Debug, Clone, Copy)]
enum SideProbe {
    Rank(RankProbe),
    Size(SizeProbe),
}

impl SideProbe {
    fn verdict(&self) -> Verdict {
        match self {
            SideProbe::Rank(p) => p.verdict(),
            SideProbe::Size(p) => p.verdict(),
        }
    }
}

/// One orientation instance: forest, component bookkeeping and rng stream.
#[derive(Debug, Clone)]
pub struct Orienter {
    config: AlgoConfig,
    policy: WalkPolicy,
    forest: OrientedForest,
    sides: Sides,
    rng: ChaCha8Rng,
    insertions: u64,
    max_out_degree: usize,
}

impl Orienter {
    pub fn new(config: AlgoConfig) -> Result<Self, OrientError> {
        config.validate()?;
        let slots = match config.variant {
            // Unbounded in principle; the smaller-side rule caps it at ceil(log2 n).
            Variant::NeverFlip => config.k.max(ceil_log2(config.n) + 1),
            Variant::FlipAll => 2,
            Variant::DancingWalkSize | Variant::DancingWalkRank => config.k,
        };
        let sides = match config.variant {
            Variant::DancingWalkRank => Sides::Rank(RankForest::new(config.n)),
            _ => Sides::Size(SizeForest::new(config.n)),
        };
        Ok(Self {
            config,
            policy: config.policy(),
            forest: OrientedForest::new(config.n, slots)?,
            sides,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            insertions: 0,
            max_out_degree: 0,
        })
    }

    pub fn config(&self) -> &AlgoConfig {
        &self.config
    }

    pub fn policy(&self) -> WalkPolicy {
        self.policy
    }

    pub fn forest(&self) -> &OrientedForest {
        &self.forest
    }

    pub fn rank_forest(&self) -> Option<&RankForest> {
        match &self.sides {
            Sides::Rank(rf) => Some(rf),
            Sides::Size(_) => None,
        }
    }

    pub fn size_forest(&self) -> Option<&SizeForest> {
        match &self.sides {
            Sides::Size(sf) => Some(sf),
            Sides::Rank(_) => None,
        }
    }

    /// Edges processed so far, failures included.
    pub fn insertions(&self) -> u64 {
        self.insertions
    }

    /// Largest out-degree any vertex has had after an insertion.
    pub fn max_out_degree(&self) -> usize {
        self.max_out_degree
    }

    fn check(&self, v: VertexId) -> Result<(), OrientError> {
        if v.index() < self.config.n {
            Ok(())
        } else {
            Err(OrientError::VertexOutOfRange(v))
        }
    }

    fn probe(&self, u: VertexId, v: VertexId) -> SideProbe {
        match &self.sides {
            Sides::Rank(rf) => SideProbe::Rank(rf.probe(u, v)),
            Sides::Size(sf) => SideProbe::Size(sf.probe(u, v)),
        }
    }

    fn commit(&mut self, probe: SideProbe) {
        match (&mut self.sides, probe) {
            (Sides::Rank(rf), SideProbe::Rank(p)) => {
                rf.merge(p);
            }
            (Sides::Size(sf), SideProbe::Size(p)) => sf.merge(p),
            _ => unreachable!("probe kind matches the side structure"),
        }
    }

    /// Resolves the source endpoint, rejecting edges inside one component.
    fn pick_side(&self, u: VertexId, v: VertexId) -> Result<(SideProbe, VertexId, VertexId), OrientError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(OrientError::SelfLoop(u));
        }
        let probe = self.probe(u, v);
        match probe.verdict() {
            Verdict::FirstSmaller => Ok((probe, u, v)),
            Verdict::SecondSmaller => Ok((probe, v, u)),
            Verdict::SameTree => Err(OrientError::SameComponent(u, v)),
        }
    }

    fn note_degrees(&mut self, report: &InsertReport) {
        let d = self
            .forest
            .out_degree(report.source)
            .max(self.forest.out_degree(report.terminal));
        self.max_out_degree = self.max_out_degree.max(d);
    }

    /// Inserts `(u, v)` with the configured variant.
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<InsertReport, InsertError> {
        match self.config.variant {
            Variant::NeverFlip => Ok(self.insert_edge_neverflip(u, v)?),
            Variant::FlipAll => Ok(self.insert_edge_flipall(u, v)?),
            Variant::DancingWalkSize | Variant::DancingWalkRank => self.insert_edge_dancing(u, v),
        }
    }

    pub fn insert_edge_dancing(&mut self, u: VertexId, v: VertexId) -> Result<InsertReport, InsertError> {
        let (probe, source, other) = self.pick_side(u, v)?;
        let index = self.insertions;
        self.insertions += 1;
        let walk = find_augmenting_walk(&mut self.forest, source, self.policy, &mut self.rng)
            .map_err(|attempts| FailureError {
                insertion: index,
                attempts,
            })?;
        let edge = apply_augmenting_walk(&mut self.forest, source, other, &walk)?;
        self.commit(probe);
        let report = InsertReport {
            source,
            terminal: walk.terminal,
            flips: walk.path.len() as u32,
            walk_attempts: walk.attempts,
            walk_steps: walk.steps,
            early_exit: walk.early_exit(),
            volunteer_used: walk.landing == EdgeClass::Secondary,
            edge,
            flipped: walk.path,
        };
        self.note_degrees(&report);
        Ok(report)
    }

    /// Orients the edge out of the smaller component and never flips.
    pub fn insert_edge_neverflip(&mut self, u: VertexId, v: VertexId) -> Result<InsertReport, OrientError> {
        let (probe, source, other) = self.pick_side(u, v)?;
        self.insertions += 1;
        let edge = self.forest.install_edge(source, other, source, EdgeClass::Primary)?;
        self.commit(probe);
        let report = InsertReport {
            source,
            terminal: source,
            early_exit: true,
            edge,
            ..InsertReport::default()
        };
        self.note_degrees(&report);
        Ok(report)
    }

    /// Orients the edge out of the smaller component; if that gives the
    /// source a second out-edge, flips the whole directed path from the
    /// source to its component's sink.
    pub fn insert_edge_flipall(&mut self, u: VertexId, v: VertexId) -> Result<InsertReport, OrientError> {
        let (probe, source, other) = self.pick_side(u, v)?;
        self.insertions += 1;
        let mut path = Vec::new();
        let mut cur = source;
        while let Some(&id) = self.forest.vertex(cur).primary().first() {
            path.push(id);
            cur = self.forest.edge(id).expect("slot holds an alive edge").head();
        }
        let terminal = self.forest.flip_path(&path, source, EdgeClass::Primary)?;
        let edge = self.forest.install_edge(source, other, source, EdgeClass::Primary)?;
        self.commit(probe);
        let report = InsertReport {
            source,
            terminal,
            flips: path.len() as u32,
            early_exit: path.is_empty(),
            edge,
            flipped: path,
            ..InsertReport::default()
        };
        self.note_degrees(&report);
        Ok(report)
    }
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn walk_and_attempt_caps() {
        assert_eq!(walk_params(1 << 16, 2, 4.0), 16);
        assert_eq!(walk_params(1 << 16, 16, 4.0), 4);
        assert_eq!(attempt_cap(1 << 16, 4.0), 64);
        assert_eq!(walk_params(1 << 14, 2, 4.0), 16);
        assert_eq!(walk_params(3, 2, 4.0), 1);
        assert_eq!(walk_params(4, 2, 4.0), 4);
        assert_eq!(attempt_cap(1, 4.0), 1);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }

    #[test]
    fn singletons_exit_early() {
        for variant in Variant::ALL {
            let mut o = Orienter::new(AlgoConfig::new(variant, 2)).unwrap();
            let r = o.insert_edge(v(0), v(1)).unwrap();
            assert_eq!(r.source, v(0));
            assert_eq!(r.flips, 0);
            assert!(r.early_exit);
            assert_eq!(o.forest().edge(r.edge).unwrap().owner, v(0));
        }
    }

    #[test]
    fn rejects_cycles_and_loops() {
        let mut o = Orienter::new(AlgoConfig::new(Variant::DancingWalkRank, 3)).unwrap();
        o.insert_edge(v(0), v(1)).unwrap();
        o.insert_edge(v(1), v(2)).unwrap();
        assert_eq!(
            o.insert_edge(v(0), v(2)),
            Err(InsertError::Orient(OrientError::SameComponent(v(0), v(2))))
        );
        assert_eq!(
            o.insert_edge(v(1), v(1)),
            Err(InsertError::Orient(OrientError::SelfLoop(v(1))))
        );
    }

    #[test]
    fn star_never_flips() {
        for variant in Variant::ALL {
            let n = 64;
            let mut o = Orienter::new(AlgoConfig::new(variant, n).with_seed(3)).unwrap();
            let mut total = 0;
            for leaf in 1..n as u32 {
                let r = o.insert_edge(v(0), v(leaf)).unwrap();
                total += r.flips;
                if leaf > 1 {
                    assert_eq!(r.source, v(leaf));
                }
            }
            assert_eq!(total, 0);
            // The first edge ties between two singletons and leaves the centre.
            assert_eq!(o.forest().out_degree(v(0)), 1);
        }
    }

    #[test]
    fn full_source_flips_one_edge_to_a_leaf() {
        // s=0 ends up with primaries to a=1 and b=2, both sinks, in a
        // rank-2 component; joining an equal-rank component {4,5,6,7}
        // through (0, 4) makes 0 the source at capacity.
        let mut landed = std::collections::BTreeSet::new();
        for seed in 0..32 {
            let mut o =
                Orienter::new(AlgoConfig::new(Variant::DancingWalkRank, 8).with_seed(seed)).unwrap();
            o.insert_edge(v(0), v(1)).unwrap(); // 0 -> 1
            o.insert_edge(v(3), v(2)).unwrap(); // 3 -> 2
            o.insert_edge(v(0), v(2)).unwrap(); // rank tie: 0 -> 2
            assert_eq!(o.forest().vertex(v(0)).primary().len(), 2);
            assert_eq!(o.forest().out_degree(v(1)), 0);
            assert_eq!(o.forest().out_degree(v(2)), 0);
            o.insert_edge(v(4), v(5)).unwrap();
            o.insert_edge(v(6), v(7)).unwrap();
            o.insert_edge(v(4), v(6)).unwrap();
            let r = o.insert_edge(v(0), v(4)).unwrap();
            assert_eq!(r.source, v(0));
            assert_eq!((r.flips, r.walk_attempts, r.walk_steps), (1, 1, 1));
            assert!(!r.early_exit && !r.volunteer_used);
            assert!(r.terminal == v(1) || r.terminal == v(2));
            assert_eq!(o.forest().out_degree(r.terminal), 1);
            assert_eq!(o.forest().out_degree(v(0)), 2);
            landed.insert(r.terminal);
        }
        // Both branches of the single uniform pick occur.
        assert_eq!(landed.len(), 2);
    }
}
