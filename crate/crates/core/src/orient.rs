//! Oriented-forest state: out-edge slots per vertex, the edge store, path
//! flipping and the random-walk primitive.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::OrientError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn new(index: usize) -> Self {
        VertexId(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Slot class of an out-edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    /// One of up to `k` walk-traversable out-edges.
    Primary,
    /// The single out-edge a vertex accepts when it volunteers.
    Secondary,
    /// A cycle-closing edge; never walked, never flipped.
    Bad,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub endpoints: (VertexId, VertexId),
    pub owner: VertexId,
    pub class: EdgeClass,
    pub alive: bool,
}

impl EdgeRecord {
    /// The endpoint that is not `w`.
    #[inline]
    pub fn other(&self, w: VertexId) -> VertexId {
        if self.endpoints.0 == w {
            self.endpoints.1
        } else {
            self.endpoints.0
        }
    }

    /// The endpoint the edge points into.
    #[inline]
    pub fn head(&self) -> VertexId {
        self.other(self.owner)
    }
}

#[derive(Debug, Clone, Default)]
pub struct VertexState {
    primary: SmallVec<[EdgeId; 2]>,
    secondary: Option<EdgeId>,
    bad: Option<EdgeId>,
    volunteer_epoch: u32,
}

impl VertexState {
    /// Primary out-edges in slot order.
    pub fn primary(&self) -> &[EdgeId] {
        &self.primary
    }

    pub fn secondary(&self) -> Option<EdgeId> {
        self.secondary
    }

    pub fn bad(&self) -> Option<EdgeId> {
        self.bad
    }

    fn remove_primary(&mut self, id: EdgeId) -> bool {
        match self.primary.iter().position(|&e| e == id) {
            Some(pos) => {
                // `remove` keeps the relative order of the remaining slots.
                self.primary.remove(pos);
                true
            }
            None => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkReason {
    /// Stopped at a vertex with fewer than `k` primary out-edges.
    LowDegree,
    /// Took the full number of requested steps.
    FullLength,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkOutcome {
    pub path: Vec<EdgeId>,
    pub terminal: VertexId,
    pub reason: WalkReason,
}

/// Running totals, read by the harness.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestCounters {
    pub flips: u64,
    pub walk_steps: u64,
    pub edges_installed: u64,
    pub edges_removed: u64,
    /// Volunteer stamps written.
    pub volunteers: u64,
}

/// Source of the uniform choice made at each walk step.
///
/// Every [`rand::Rng`] is one; tests substitute scripted choices to
/// enumerate walk branches.
pub trait StepSource {
    /// Uniform index in `0..k`.
    fn pick(&mut self, k: usize) -> usize;
}

impl<R: Rng + ?Sized> StepSource for R {
    #[inline]
    fn pick(&mut self, k: usize) -> usize {
        self.gen_range(0..k)
    }
}

/// Mutable orientation state over a fixed vertex set.
///
/// Each alive edge sits in exactly one slot of its owner. A vertex holds at
/// most `k` primary edges, one secondary edge and one bad edge.
#[derive(Debug, Clone)]
pub struct OrientedForest {
    k: usize,
    vertices: Vec<VertexState>,
    edges: Vec<EdgeRecord>,
    free: Vec<EdgeId>,
    alive: usize,
    epoch: u32,
    counters: ForestCounters,
}

impl OrientedForest {
    pub fn new(n: usize, k: usize) -> Result<Self, OrientError> {
        if n == 0 {
            return Err(OrientError::Config("vertex count must be at least 1".into()));
        }
        if k < 2 {
            return Err(OrientError::Config(format!(
                "primary capacity must be at least 2, got {k}"
            )));
        }
        if n > u32::MAX as usize {
            return Err(OrientError::Config(format!("vertex count {n} too large")));
        }
        Ok(Self {
            k,
            vertices: vec![VertexState::default(); n],
            edges: Vec::new(),
            free: Vec::new(),
            alive: 0,
            epoch: 1,
            counters: ForestCounters::default(),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn counters(&self) -> ForestCounters {
        self.counters
    }

    pub fn alive_edges(&self) -> usize {
        self.alive
    }

    pub fn vertex(&self, v: VertexId) -> &VertexState {
        &self.vertices[v.index()]
    }

    pub fn edge(&self, id: EdgeId) -> Option<&EdgeRecord> {
        self.edges.get(id.index()).filter(|e| e.alive)
    }

    /// Alive edges with their ids.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &EdgeRecord)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.alive)
            .map(|(i, e)| (EdgeId(i as u32), e))
    }

    #[inline]
    pub fn primary_out_degree(&self, v: VertexId) -> usize {
        self.vertices[v.index()].primary.len()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        let st = &self.vertices[v.index()];
        st.primary.len() + usize::from(st.secondary.is_some()) + usize::from(st.bad.is_some())
    }

    /// Whether `v` has volunteered during the current phase.
    #[inline]
    pub fn is_volunteered(&self, v: VertexId) -> bool {
        self.vertices[v.index()].volunteer_epoch == self.epoch
    }

    /// Starts a new volunteer phase: every vertex may volunteer again.
    /// Slots and edges are left alone.
    pub fn begin_phase(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            // Stamps from 2^32 phases ago would read as current.
            for st in &mut self.vertices {
                st.volunteer_epoch = 0;
            }
            self.epoch = 1;
        }
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), OrientError> {
        if v.index() < self.vertices.len() {
            Ok(())
        } else {
            Err(OrientError::VertexOutOfRange(v))
        }
    }

    fn has_room(&self, v: VertexId, class: EdgeClass) -> bool {
        let st = &self.vertices[v.index()];
        match class {
            EdgeClass::Primary => st.primary.len() < self.k,
            EdgeClass::Secondary => st.secondary.is_none(),
            EdgeClass::Bad => st.bad.is_none(),
        }
    }

    fn occupy(&mut self, v: VertexId, class: EdgeClass, id: EdgeId) {
        let epoch = self.epoch;
        let st = &mut self.vertices[v.index()];
        match class {
            EdgeClass::Primary => st.primary.push(id),
            EdgeClass::Secondary => {
                st.secondary = Some(id);
                st.volunteer_epoch = epoch;
                self.counters.volunteers += 1;
            }
            EdgeClass::Bad => st.bad = Some(id),
        }
    }

    pub fn install_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        owner: VertexId,
        class: EdgeClass,
    ) -> Result<EdgeId, OrientError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(OrientError::SelfLoop(u));
        }
        if owner != u && owner != v {
            return Err(OrientError::NotAnEndpoint { owner, u, v });
        }
        if !self.has_room(owner, class) {
            return Err(OrientError::SlotOccupied {
                vertex: owner,
                class,
            });
        }
        let record = EdgeRecord {
            endpoints: (u, v),
            owner,
            class,
            alive: true,
        };
        let id = match self.free.pop() {
            Some(id) => {
                self.edges[id.index()] = record;
                id
            }
            None => {
                let id = EdgeId(self.edges.len() as u32);
                self.edges.push(record);
                id
            }
        };
        self.occupy(owner, class, id);
        self.alive += 1;
        self.counters.edges_installed += 1;
        Ok(id)
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<(), OrientError> {
        let record = self.edge(id).ok_or(OrientError::DeadEdge(id))?.clone();
        let st = &mut self.vertices[record.owner.index()];
        match record.class {
            EdgeClass::Primary => {
                let found = st.remove_primary(id);
                debug_assert!(found, "primary edge {id} missing from its owner");
            }
            // The volunteered stamp stays: a vertex volunteers at most once per phase.
            EdgeClass::Secondary => st.secondary = None,
            EdgeClass::Bad => st.bad = None,
        }
        self.edges[id.index()].alive = false;
        self.free.push(id);
        self.alive -= 1;
        self.counters.edges_removed += 1;
        Ok(())
    }

    /// Checks that `path` is a directed chain of alive primary edges starting
    /// at `source` and returns its terminal vertex.
    pub fn path_terminal(&self, path: &[EdgeId], source: VertexId) -> Result<VertexId, OrientError> {
        self.check_vertex(source)?;
        let mut cur = source;
        for &id in path {
            let e = self.edge(id).ok_or(OrientError::DeadEdge(id))?;
            if e.class != EdgeClass::Primary {
                return Err(OrientError::BrokenPath(format!("{id} is {:?}", e.class)));
            }
            if e.owner != cur {
                return Err(OrientError::BrokenPath(format!(
                    "{id} is owned by {}, expected {cur}",
                    e.owner
                )));
            }
            cur = e.head();
        }
        Ok(cur)
    }

    /// Reverses every edge of `path`, a directed primary chain out of
    /// `source`. The last edge lands in the terminal's `landing` slot
    /// (`Primary`, or `Secondary` for a volunteer); every other edge stays
    /// primary. Returns the terminal. An empty path is a no-op.
    ///
    /// Afterwards `source` has one primary out-edge fewer, the terminal one
    /// out-edge more, and interior vertices are unchanged.
    pub fn flip_path(
        &mut self,
        path: &[EdgeId],
        source: VertexId,
        landing: EdgeClass,
    ) -> Result<VertexId, OrientError> {
        let terminal = self.path_terminal(path, source)?;
        if path.is_empty() {
            return Ok(source);
        }
        if landing == EdgeClass::Bad {
            return Err(OrientError::BrokenPath("a flipped edge cannot land as bad".into()));
        }
        if !self.has_room(terminal, landing) {
            return Err(OrientError::SlotOccupied {
                vertex: terminal,
                class: landing,
            });
        }
        // Back to front, so an interior vertex gives up its out-edge before
        // receiving the reversed one and never exceeds k primaries.
        for (i, &id) in path.iter().enumerate().rev() {
            let (from, to) = {
                let e = &self.edges[id.index()];
                (e.owner, e.head())
            };
            self.vertices[from.index()].remove_primary(id);
            let class = if i + 1 == path.len() {
                landing
            } else {
                EdgeClass::Primary
            };
            let e = &mut self.edges[id.index()];
            e.owner = to;
            e.class = class;
            self.occupy(to, class, id);
        }
        self.counters.flips += path.len() as u64;
        Ok(terminal)
    }

    /// Walks down uniformly chosen primary out-edges from `source`.
    ///
    /// Stops as soon as the current vertex (possibly `source` itself) has
    /// fewer than `k` primary out-edges, or after `max_len` steps. Secondary
    /// and bad edges are never candidates. Nothing but the walk-step counter
    /// is modified.
    pub fn random_walk<S: StepSource + ?Sized>(
        &mut self,
        source: VertexId,
        max_len: usize,
        rng: &mut S,
    ) -> WalkOutcome {
        debug_assert!(max_len >= 1);
        let mut path = Vec::new();
        let mut cur = source;
        let reason = loop {
            let st = &self.vertices[cur.index()];
            if st.primary.len() < self.k {
                break WalkReason::LowDegree;
            }
            if path.len() >= max_len {
                break WalkReason::FullLength;
            }
            let id = st.primary[rng.pick(self.k)];
            path.push(id);
            cur = self.edges[id.index()].head();
        };
        self.counters.walk_steps += path.len() as u64;
        WalkOutcome {
            path,
            terminal: cur,
            reason,
        }
    }

    /// Plain-data copy of the state, for invariant checkers.
    pub fn snapshot(&self) -> ForestSnapshot {
        ForestSnapshot {
            k: self.k,
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, st)| VertexSlots {
                    primary: st.primary.to_vec(),
                    secondary: st.secondary,
                    bad: st.bad,
                    volunteered: self.is_volunteered(VertexId::new(i)),
                })
                .collect(),
            edges: self.edges().map(|(id, e)| (id, e.clone())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSlots {
    pub primary: Vec<EdgeId>,
    pub secondary: Option<EdgeId>,
    pub bad: Option<EdgeId>,
    pub volunteered: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestSnapshot {
    pub k: usize,
    pub vertices: Vec<VertexSlots>,
    /// Alive edges only.
    pub edges: Vec<(EdgeId, EdgeRecord)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    /// Replays a fixed list of choices.
    struct Scripted(Vec<usize>);

    impl StepSource for Scripted {
        fn pick(&mut self, k: usize) -> usize {
            let c = self.0.remove(0);
            assert!(c < k);
            c
        }
    }

    #[test]
    fn create_checks_parameters() {
        let f = OrientedForest::new(1, 2).unwrap();
        assert_eq!(f.n(), 1);
        assert_eq!(f.alive_edges(), 0);
        let f = OrientedForest::new(8, 2).unwrap();
        assert!((0..8).all(|i| f.primary_out_degree(v(i)) == 0));
        assert_eq!(f.counters(), ForestCounters::default());
        assert!(matches!(OrientedForest::new(8, 1), Err(OrientError::Config(_))));
        assert!(matches!(OrientedForest::new(0, 2), Err(OrientError::Config(_))));
    }

    #[test]
    fn install_respects_capacity() {
        let mut f = OrientedForest::new(4, 2).unwrap();
        f.install_edge(v(0), v(1), v(0), EdgeClass::Primary).unwrap();
        assert_eq!(f.primary_out_degree(v(0)), 1);
        f.install_edge(v(0), v(2), v(0), EdgeClass::Primary).unwrap();
        let err = f.install_edge(v(0), v(3), v(0), EdgeClass::Primary).unwrap_err();
        assert_eq!(
            err,
            OrientError::SlotOccupied {
                vertex: v(0),
                class: EdgeClass::Primary
            }
        );
        assert!(matches!(
            f.install_edge(v(1), v(1), v(1), EdgeClass::Bad),
            Err(OrientError::SelfLoop(_))
        ));
        assert!(matches!(
            f.install_edge(v(1), v(2), v(3), EdgeClass::Primary),
            Err(OrientError::NotAnEndpoint { .. })
        ));
    }

    #[test]
    fn secondary_install_volunteers() {
        let mut f = OrientedForest::new(2, 2).unwrap();
        assert!(!f.is_volunteered(v(0)));
        f.install_edge(v(0), v(1), v(0), EdgeClass::Secondary).unwrap();
        assert!(f.is_volunteered(v(0)));
        f.begin_phase();
        assert!(!f.is_volunteered(v(0)));
    }

    #[test]
    fn out_degree_counts_every_class() {
        let mut f = OrientedForest::new(5, 2).unwrap();
        f.install_edge(v(0), v(1), v(0), EdgeClass::Primary).unwrap();
        f.install_edge(v(0), v(2), v(0), EdgeClass::Primary).unwrap();
        f.install_edge(v(0), v(3), v(0), EdgeClass::Secondary).unwrap();
        assert_eq!(f.primary_out_degree(v(0)), 2);
        assert_eq!(f.out_degree(v(0)), 3);
        f.install_edge(v(0), v(4), v(0), EdgeClass::Bad).unwrap();
        assert_eq!(f.out_degree(v(0)), 4);
    }

    #[test]
    fn empty_flip_is_noop() {
        let mut f = OrientedForest::new(3, 2).unwrap();
        assert_eq!(f.flip_path(&[], v(2), EdgeClass::Primary).unwrap(), v(2));
        assert_eq!(f.counters().flips, 0);
    }

    #[test]
    fn single_flip_moves_owner() {
        let mut f = OrientedForest::new(2, 2).unwrap();
        let e = f.install_edge(v(0), v(1), v(0), EdgeClass::Primary).unwrap();
        let t = f.flip_path(&[e], v(0), EdgeClass::Primary).unwrap();
        assert_eq!(t, v(1));
        assert_eq!(f.edge(e).unwrap().owner, v(1));
        assert_eq!(f.primary_out_degree(v(0)), 0);
        assert_eq!(f.primary_out_degree(v(1)), 1);
        assert_eq!(f.counters().flips, 1);
    }

    #[test]
    fn chain_flip_keeps_interior_degrees() {
        // a -> b -> c -> d, with b and c each holding a second primary edge
        // to a private leaf so they sit at capacity.
        let (a, b, c, d, lb, lc) = (v(0), v(1), v(2), v(3), v(4), v(5));
        let mut f = OrientedForest::new(6, 2).unwrap();
        let ab = f.install_edge(a, b, a, EdgeClass::Primary).unwrap();
        f.install_edge(b, lb, b, EdgeClass::Primary).unwrap();
        let bc = f.install_edge(b, c, b, EdgeClass::Primary).unwrap();
        f.install_edge(c, lc, c, EdgeClass::Primary).unwrap();
        let cd = f.install_edge(c, d, c, EdgeClass::Primary).unwrap();
        let before: Vec<usize> = (0..6).map(|i| f.out_degree(v(i))).collect();
        assert_eq!(before, vec![1, 2, 2, 0, 0, 0]);

        let t = f.flip_path(&[ab, bc, cd], a, EdgeClass::Primary).unwrap();
        assert_eq!(t, d);
        let after: Vec<usize> = (0..6).map(|i| f.out_degree(v(i))).collect();
        assert_eq!(after, vec![0, 2, 2, 1, 0, 0]);
        assert_eq!(f.edge(ab).unwrap().owner, b);
        assert_eq!(f.edge(bc).unwrap().owner, c);
        assert_eq!(f.edge(cd).unwrap().owner, d);
        // b lost bc and gained ab; the survivor keeps its slot ahead of the newcomer.
        assert_eq!(f.vertex(b).primary()[1], ab);
        assert_eq!(f.counters().flips, 3);
    }

    #[test]
    fn flip_into_secondary_volunteers() {
        let mut f = OrientedForest::new(4, 2).unwrap();
        let e = f.install_edge(v(0), v(1), v(0), EdgeClass::Primary).unwrap();
        f.install_edge(v(1), v(2), v(1), EdgeClass::Primary).unwrap();
        f.install_edge(v(1), v(3), v(1), EdgeClass::Primary).unwrap();
        f.flip_path(&[e], v(0), EdgeClass::Secondary).unwrap();
        assert_eq!(f.vertex(v(1)).secondary(), Some(e));
        assert_eq!(f.edge(e).unwrap().class, EdgeClass::Secondary);
        assert!(f.is_volunteered(v(1)));
        assert_eq!(f.out_degree(v(1)), 3);
    }

    #[test]
    fn flip_rejects_broken_paths() {
        let mut f = OrientedForest::new(4, 2).unwrap();
        let e1 = f.install_edge(v(0), v(1), v(0), EdgeClass::Primary).unwrap();
        let e2 = f.install_edge(v(2), v(3), v(2), EdgeClass::Primary).unwrap();
        assert!(matches!(
            f.flip_path(&[e1, e2], v(0), EdgeClass::Primary),
            Err(OrientError::BrokenPath(_))
        ));
        f.remove_edge(e2).unwrap();
        assert_eq!(
            f.flip_path(&[e2], v(2), EdgeClass::Primary),
            Err(OrientError::DeadEdge(e2))
        );
        // Nothing moved.
        assert_eq!(f.edge(e1).unwrap().owner, v(0));
    }

    #[test]
    fn walk_stops_at_low_degree_source() {
        let mut f = OrientedForest::new(3, 2).unwrap();
        f.install_edge(v(0), v(1), v(0), EdgeClass::Primary).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = f.random_walk(v(0), 5, &mut rng);
        assert_eq!(out.path, vec![]);
        assert_eq!(out.terminal, v(0));
        assert_eq!(out.reason, WalkReason::LowDegree);
    }

    #[test]
    fn walk_to_two_leaves_enumerated() {
        let mut f = OrientedForest::new(3, 2).unwrap();
        let ea = f.install_edge(v(0), v(1), v(0), EdgeClass::Primary).unwrap();
        let eb = f.install_edge(v(0), v(2), v(0), EdgeClass::Primary).unwrap();
        // Each of the two branches is one of the k equally likely picks.
        for (choice, edge, leaf) in [(0, ea, v(1)), (1, eb, v(2))] {
            let out = f.random_walk(v(0), 5, &mut Scripted(vec![choice]));
            assert_eq!(out.path, vec![edge]);
            assert_eq!(out.terminal, leaf);
            assert_eq!(out.reason, WalkReason::LowDegree);
        }
        assert_eq!(f.counters().walk_steps, 2);
    }

    #[test]
    fn walk_hits_length_cap_in_full_binary_tree() {
        // Complete binary orientation of depth 3 rooted at 0 (heap layout).
        let mut f = OrientedForest::new(15, 2).unwrap();
        for child in 1..15u32 {
            let parent = (child - 1) / 2;
            f.install_edge(v(parent), v(child), v(parent), EdgeClass::Primary)
                .unwrap();
        }
        for a in 0..2 {
            for b in 0..2 {
                let out = f.random_walk(v(0), 2, &mut Scripted(vec![a, b]));
                assert_eq!(out.reason, WalkReason::FullLength);
                assert_eq!(out.path.len(), 2);
                assert!((3..7).contains(&out.terminal.0), "depth-2 node expected");
            }
        }
    }

    #[test]
    fn walk_ignores_secondary_and_bad() {
        let mut f = OrientedForest::new(5, 2).unwrap();
        f.install_edge(v(0), v(1), v(0), EdgeClass::Secondary).unwrap();
        f.install_edge(v(0), v(2), v(0), EdgeClass::Bad).unwrap();
        f.install_edge(v(0), v(3), v(0), EdgeClass::Primary).unwrap();
        let out = f.random_walk(v(0), 4, &mut Scripted(vec![]));
        assert_eq!(out.terminal, v(0));
        assert!(out.path.is_empty());
    }

    #[test]
    fn remove_restores_and_compacts() {
        let mut f = OrientedForest::new(4, 2).unwrap();
        let e1 = f.install_edge(v(0), v(1), v(0), EdgeClass::Primary).unwrap();
        let e2 = f.install_edge(v(0), v(2), v(0), EdgeClass::Primary).unwrap();
        f.remove_edge(e1).unwrap();
        assert_eq!(f.vertex(v(0)).primary(), &[e2]);
        f.remove_edge(e2).unwrap();
        assert_eq!(f.primary_out_degree(v(0)), 0);
        assert_eq!(f.remove_edge(e2), Err(OrientError::DeadEdge(e2)));
    }

    #[test]
    fn removing_secondary_keeps_volunteer_flag() {
        let mut f = OrientedForest::new(2, 2).unwrap();
        let e = f.install_edge(v(0), v(1), v(0), EdgeClass::Secondary).unwrap();
        f.remove_edge(e).unwrap();
        assert_eq!(f.vertex(v(0)).secondary(), None);
        assert!(f.is_volunteered(v(0)));
    }
}
