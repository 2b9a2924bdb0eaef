//! Combination rank straight from its recurrence: merging ranks `a != b`
//! gives `max(a, b)`, equal ranks `a` give `a + 1`.

use dwalk_core::VertexId;

#[derive(Debug, Clone)]
pub struct RankRecurrence {
    parent: Vec<u32>,
    rank: Vec<u32>,
    size: Vec<u32>,
}

impl RankRecurrence {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            size: vec![1; n],
        }
    }

    fn root(&self, v: VertexId) -> usize {
        let mut x = v.index();
        while self.parent[x] as usize != x {
            x = self.parent[x] as usize;
        }
        x
    }

    pub fn rank(&self, v: VertexId) -> u32 {
        self.rank[self.root(v)]
    }

    pub fn size(&self, v: VertexId) -> u32 {
        self.size[self.root(v)]
    }

    pub fn same(&self, a: VertexId, b: VertexId) -> bool {
        self.root(a) == self.root(b)
    }

    /// Merges the two components; `None` if they were already one. Returns
    /// the ranks before the merge.
    pub fn merge(&mut self, a: VertexId, b: VertexId) -> Option<(u32, u32)> {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            return None;
        }
        let before = (self.rank[ra], self.rank[rb]);
        let merged = if before.0 == before.1 {
            before.0 + 1
        } else {
            before.0.max(before.1)
        };
        // Link the smaller component under the larger to keep roots shallow.
        let (child, root) = if self.size[ra] < self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[child] = root as u32;
        self.size[root] += self.size[child];
        self.rank[root] = merged;
        Some(before)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_merges_reach_log_size() {
        let mut r = RankRecurrence::new(8);
        let mut step = 1u32;
        while step < 8 {
            for a in (0..8u32).step_by(2 * step as usize) {
                r.merge(VertexId(a), VertexId(a + step)).unwrap();
            }
            step *= 2;
        }
        assert_eq!(r.rank(VertexId(5)), 3);
        assert_eq!(r.size(VertexId(5)), 8);
    }

    #[test]
    fn unequal_keeps_max() {
        let mut r = RankRecurrence::new(4);
        r.merge(VertexId(0), VertexId(1));
        assert_eq!(r.merge(VertexId(2), VertexId(0)), Some((0, 1)));
        assert_eq!(r.rank(VertexId(2)), 1);
        assert_eq!(r.merge(VertexId(1), VertexId(2)), None);
    }
}
