//! Component-side bookkeeping: rank trees for combination rank, and a
//! union-find by size without path compression.
//!
//! Combination rank of a component is 0 for a singleton; merging two
//! components of ranks `r1 != r2` gives `max(r1, r2)`, merging two of equal
//! rank `r` gives `r + 1`. A rank tree stores a component's vertices as
//! leaves, all at depth equal to the component's rank, so the rank is read
//! off a leaf-to-root climb and a merge adds at most one node and two links.

use serde::{Deserialize, Serialize};

use crate::orient::VertexId;

const NIL: u32 = u32::MAX;

/// Which of the two named vertices lies in the smaller component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    FirstSmaller,
    SecondSmaller,
    SameTree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CombineOutcome {
    pub verdict: Verdict,
    pub rank_first: u32,
    pub rank_second: u32,
}

/// Result of the lockstep climb, enough to merge without climbing again.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankProbe {
    SameTree { rank_hint: u32 },
    /// Both roots sit at the same height `rank`.
    Equal { root_first: u32, root_second: u32, rank: u32 },
    /// The first component has the lower rank; `attach` is the node at
    /// height `rank_first + 1` on the second vertex's chain.
    FirstLower { root_first: u32, attach: u32, rank_first: u32 },
    SecondLower { root_second: u32, attach: u32, rank_second: u32 },
}

impl RankProbe {
    pub fn verdict(&self) -> Verdict {
        match self {
            RankProbe::SameTree { .. } => Verdict::SameTree,
            // Equal ranks: the first-named side is reported smaller.
            RankProbe::Equal { .. } | RankProbe::FirstLower { .. } => Verdict::FirstSmaller,
            RankProbe::SecondLower { .. } => Verdict::SecondSmaller,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct RankNode {
    parent: u32,
    epoch: u32,
}

/// Write counts of rank-tree maintenance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankWrites {
    pub links: u64,
    pub nodes: u64,
    pub combines: u64,
    /// Largest `links + nodes` of a single merge.
    pub max_per_combine: u32,
    pub max_links_per_combine: u32,
    pub max_nodes_per_combine: u32,
}

/// Rank trees over a fixed set of `n` leaves.
///
/// Nodes carry an epoch stamp; [`RankForest::reset`] bumps the epoch so every
/// node reads as a fresh singleton without touching the node store.
#[derive(Debug, Clone)]
pub struct RankForest {
    n: usize,
    nodes: Vec<RankNode>,
    next_internal: usize,
    epoch: u32,
    writes: RankWrites,
}

impl RankForest {
    pub fn new(n: usize) -> Self {
        assert!(n < NIL as usize / 2, "too many leaves");
        let mut nodes = Vec::with_capacity(2 * n);
        nodes.resize(n, RankNode { parent: NIL, epoch: 0 });
        Self {
            n,
            nodes,
            next_internal: 0,
            epoch: 1,
            writes: RankWrites::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn writes(&self) -> RankWrites {
        self.writes
    }

    /// Internal nodes created since the last reset.
    pub fn internal_nodes(&self) -> usize {
        self.next_internal
    }

    #[inline]
    fn parent(&self, node: u32) -> u32 {
        let nd = self.nodes[node as usize];
        if nd.epoch == self.epoch {
            nd.parent
        } else {
            NIL
        }
    }

    fn root_and_height(&self, mut node: u32) -> (u32, u32) {
        let mut h = 0;
        loop {
            let p = self.parent(node);
            if p == NIL {
                return (node, h);
            }
            node = p;
            h += 1;
        }
    }

    /// Combination rank of `v`'s component: its leaf depth.
    pub fn rank_of(&self, v: VertexId) -> u32 {
        self.root_and_height(v.0).1
    }

    /// Opaque identity of `v`'s component.
    pub fn root_of(&self, v: VertexId) -> u32 {
        self.root_and_height(v.0).0
    }

    pub fn same(&self, a: VertexId, b: VertexId) -> bool {
        self.root_of(a) == self.root_of(b)
    }

    /// Climbs both leaf-to-root chains in lockstep without writing. For
    /// distinct components this stops after `min(r1, r2) + 1` reads per chain.
    pub fn probe(&self, v1: VertexId, v2: VertexId) -> RankProbe {
        debug_assert!(v1.index() < self.n && v2.index() < self.n);
        let (mut a, mut b) = (v1.0, v2.0);
        let mut h = 0;
        loop {
            if a == b {
                return RankProbe::SameTree { rank_hint: h };
            }
            match (self.parent(a), self.parent(b)) {
                (NIL, NIL) => {
                    return RankProbe::Equal {
                        root_first: a,
                        root_second: b,
                        rank: h,
                    }
                }
                (NIL, pb) => {
                    return RankProbe::FirstLower {
                        root_first: a,
                        attach: pb,
                        rank_first: h,
                    }
                }
                (pa, NIL) => {
                    return RankProbe::SecondLower {
                        root_second: b,
                        attach: pa,
                        rank_second: h,
                    }
                }
                (pa, pb) => {
                    a = pa;
                    b = pb;
                    h += 1;
                }
            }
        }
    }

    fn link(&mut self, child: u32, parent: u32) {
        self.nodes[child as usize] = RankNode {
            parent,
            epoch: self.epoch,
        };
        self.writes.links += 1;
    }

    fn new_root(&mut self) -> u32 {
        let idx = self.n + self.next_internal;
        let node = RankNode {
            parent: NIL,
            epoch: self.epoch,
        };
        if idx < self.nodes.len() {
            self.nodes[idx] = node;
        } else {
            self.nodes.push(node);
        }
        self.next_internal += 1;
        self.writes.nodes += 1;
        idx as u32
    }

    /// Applies the merge described by a probe taken on the current state.
    /// Returns `(links, nodes)` written.
    pub fn merge(&mut self, probe: RankProbe) -> (u32, u32) {
        let (links, nodes) = match probe {
            RankProbe::SameTree { .. } => return (0, 0),
            RankProbe::Equal {
                root_first,
                root_second,
                ..
            } => {
                let r = self.new_root();
                self.link(root_first, r);
                self.link(root_second, r);
                (2, 1)
            }
            RankProbe::FirstLower {
                root_first, attach, ..
            } => {
                self.link(root_first, attach);
                (1, 0)
            }
            RankProbe::SecondLower {
                root_second,
                attach,
                ..
            } => {
                self.link(root_second, attach);
                (1, 0)
            }
        };
        let w = &mut self.writes;
        w.combines += 1;
        w.max_per_combine = w.max_per_combine.max(links + nodes);
        w.max_links_per_combine = w.max_links_per_combine.max(links);
        w.max_nodes_per_combine = w.max_nodes_per_combine.max(nodes);
        (links, nodes)
    }

    /// Reports which component has the smaller combination rank (ties: the
    /// first) and merges them unless they already coincide.
    pub fn combine(&mut self, v1: VertexId, v2: VertexId) -> CombineOutcome {
        let probe = self.probe(v1, v2);
        let (rank_first, rank_second) = match probe {
            RankProbe::SameTree { .. } => {
                let r = self.rank_of(v1);
                (r, r)
            }
            RankProbe::Equal { rank, .. } => (rank, rank),
            RankProbe::FirstLower {
                attach, rank_first, ..
            } => (rank_first, rank_first + 1 + self.root_and_height(attach).1),
            RankProbe::SecondLower {
                attach,
                rank_second,
                ..
            } => (rank_second + 1 + self.root_and_height(attach).1, rank_second),
        };
        self.merge(probe);
        CombineOutcome {
            verdict: probe.verdict(),
            rank_first,
            rank_second,
        }
    }

    /// Every vertex becomes a singleton again. O(1).
    pub fn reset(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            for nd in &mut self.nodes {
                nd.epoch = 0;
            }
            self.epoch = 1;
        }
        self.next_internal = 0;
    }
}

/// Outcome of a size-based union.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeOutcome {
    pub verdict: Verdict,
    pub size_first: u32,
    pub size_second: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeProbe {
    pub root_first: u32,
    pub root_second: u32,
    pub size_first: u32,
    pub size_second: u32,
}

impl SizeProbe {
    pub fn verdict(&self) -> Verdict {
        if self.root_first == self.root_second {
            Verdict::SameTree
        } else if self.size_first <= self.size_second {
            Verdict::FirstSmaller
        } else {
            Verdict::SecondSmaller
        }
    }
}

/// Union-find linking by size, with no path compression, so every find
/// climbs at most `log2 n` links.
#[derive(Debug, Clone)]
pub struct SizeForest {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl SizeForest {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&self, v: VertexId) -> u32 {
        let mut x = v.0;
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        let mut x = v.0;
        let mut d = 0;
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
            d += 1;
        }
        d
    }

    pub fn size_of(&self, v: VertexId) -> u32 {
        self.size[self.find(v) as usize]
    }

    pub fn same(&self, a: VertexId, b: VertexId) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn probe(&self, v1: VertexId, v2: VertexId) -> SizeProbe {
        let (r1, r2) = (self.find(v1), self.find(v2));
        SizeProbe {
            root_first: r1,
            root_second: r2,
            size_first: self.size[r1 as usize],
            size_second: self.size[r2 as usize],
        }
    }

    pub fn merge(&mut self, probe: SizeProbe) {
        let (r1, r2) = (probe.root_first, probe.root_second);
        if r1 == r2 {
            return;
        }
        let (small, large) = if probe.size_first <= probe.size_second {
            (r1, r2)
        } else {
            (r2, r1)
        };
        self.parent[small as usize] = large;
        self.size[large as usize] = probe.size_first + probe.size_second;
    }

    /// Reports the smaller side (ties: the first) with the pre-union sizes,
    /// then unions.
    pub fn union(&mut self, v1: VertexId, v2: VertexId) -> SizeOutcome {
        let probe = self.probe(v1, v2);
        self.merge(probe);
        SizeOutcome {
            verdict: probe.verdict(),
            size_first: probe.size_first,
            size_second: probe.size_second,
        }
    }
}
