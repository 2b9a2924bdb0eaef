//! Out-degree-1 orientability of a multigraph by component counting.
//!
//! A component can be oriented with every vertex owning at most one edge iff
//! it has no more edges than vertices (a tree plus at most one edge). Edges
//! beyond that count must go to a stash, so the stash needed is the sum of
//! per-component excesses.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViabilityVerdict {
    pub viable: bool,
    pub min_stash_needed: usize,
}

impl ViabilityVerdict {
    pub fn fits(&self, stash: usize) -> bool {
        self.min_stash_needed <= stash
    }
}

struct Components {
    parent: Vec<u32>,
}

impl Components {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
        }
    }

    fn root(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }
}

/// Edges are bin pairs in `[0, n)`; self-loops count as one edge on one
/// vertex.
pub fn check_viability(n: usize, edges: &[(usize, usize)]) -> ViabilityVerdict {
    let mut c = Components::new(n);
    for &(a, b) in edges {
        let (ra, rb) = (c.root(a as u32), c.root(b as u32));
        if ra != rb {
            c.parent[ra as usize] = rb;
        }
    }
    let mut vertices = vec![0usize; n];
    let mut edge_count = vec![0usize; n];
    for v in 0..n {
        let r = c.root(v as u32) as usize;
        vertices[r] += 1;
    }
    for &(a, _) in edges {
        let r = c.root(a as u32) as usize;
        edge_count[r] += 1;
    }
    let min_stash_needed = (0..n)
        .map(|r| edge_count[r].saturating_sub(vertices[r]))
        .sum();
    ViabilityVerdict {
        viable: min_stash_needed == 0,
        min_stash_needed,
    }
}
