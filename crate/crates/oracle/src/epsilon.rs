//! Windowed viability of an operation script.
//!
//! Windows are consecutive runs of `ceil(eps * n)` inserts/deletes (queries
//! do not advance the clock). A window's record set is everything live when
//! it opens plus every record inserted during it; each insertion of an
//! absent key is a distinct record, so a key deleted and re-inserted within
//! a window contributes two edges.

use std::collections::HashSet;

use dwalk_core::script::Op;
use dwalk_core::HashPairProvider;
use serde::{Deserialize, Serialize};

use crate::viability::{check_viability, ViabilityVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowVerdict {
    pub index: usize,
    /// Script positions of the window's first and last operation.
    pub first_op: usize,
    pub last_op: usize,
    pub records: usize,
    pub verdict: ViabilityVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub window_len: u64,
    pub windows: Vec<WindowVerdict>,
}

impl EpsilonReport {
    pub fn max_min_stash(&self) -> usize {
        self.windows
            .iter()
            .map(|w| w.verdict.min_stash_needed)
            .max()
            .unwrap_or(0)
    }

    pub fn viable_with(&self, stash: usize) -> bool {
        self.max_min_stash() <= stash
    }

    pub fn largest_window(&self) -> usize {
        self.windows.iter().map(|w| w.records).max().unwrap_or(0)
    }
}

fn window_len(n: usize, epsilon: f64) -> u64 {
    let raw = epsilon * n as f64;
    let len = raw.round();
    // ceil, tolerant of products like 0.1 * 10 landing a hair above 1.
    let len = if (raw - len).abs() < 1e-9 { len } else { raw.ceil() };
    len.max(1.0) as u64
}

pub fn check_epsilon_viability(
    ops: &[Op],
    n: usize,
    epsilon: f64,
    provider: &dyn HashPairProvider,
) -> EpsilonReport {
    let len = window_len(n, epsilon);
    let mut live: HashSet<u64> = HashSet::new();
    let mut windows = Vec::new();

    let mut records: Vec<u64> = Vec::new();
    let mut first_op = None;
    let mut updates = 0u64;

    let close = |records: &mut Vec<u64>, first: usize, last: usize, windows: &mut Vec<WindowVerdict>| {
        let edges: Vec<(usize, usize)> = records.iter().map(|&k| provider.bins(k)).collect();
        windows.push(WindowVerdict {
            index: windows.len(),
            first_op: first,
            last_op: last,
            records: records.len(),
            verdict: check_viability(n, &edges),
        });
        records.clear();
    };

    for (i, op) in ops.iter().enumerate() {
        if !op.is_update() {
            continue;
        }
        if first_op.is_none() {
            first_op = Some(i);
            records.extend(live.iter().copied());
        }
        match *op {
            Op::Insert { key, .. } => {
                if live.insert(key) {
                    records.push(key);
                }
            }
            Op::Delete { key } => {
                live.remove(&key);
            }
            Op::Query { .. } => unreachable!(),
        }
        updates += 1;
        if updates.is_multiple_of(len) {
            close(&mut records, first_op.take().unwrap(), i, &mut windows);
        }
    }
    if let Some(first) = first_op {
        close(&mut records, first, ops.len() - 1, &mut windows);
    }
    EpsilonReport {
        window_len: len,
        windows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dwalk_core::cuckoo::{FixedProvider, SeededProvider};

    #[test]
    fn empty_script() {
        let p = SeededProvider::new(0, 16);
        let r = check_epsilon_viability(&[], 16, 0.5, &p);
        assert!(r.windows.is_empty());
        assert!(r.viable_with(0));
    }

    #[test]
    fn window_lengths() {
        assert_eq!(window_len(16, 0.5), 8);
        assert_eq!(window_len(10, 0.1), 1);
        assert_eq!(window_len(10, 0.15), 2);
        assert_eq!(window_len(4, 1.0), 4);
    }

    #[test]
    fn same_pair_repeated_is_not_viable() {
        let n = 16;
        let pairs: Vec<_> = (0..n as u64).map(|k| (k, (3, 7))).collect();
        let p = FixedProvider::new(n, pairs);
        let ops: Vec<_> = (0..n as u64).map(|key| Op::Insert { key, value: 0 }).collect();
        let r = check_epsilon_viability(&ops, n, 1.0, &p);
        assert_eq!(r.windows.len(), 1);
        assert_eq!(r.max_min_stash(), n - 2);
        assert!(!r.viable_with(0));
    }

    #[test]
    fn carried_records_count_in_the_next_window() {
        let n = 4;
        let p = FixedProvider::new(n, [(1, (0, 1)), (2, (0, 1)), (3, (0, 1)), (9, (2, 3))]);
        let ops = [
            Op::Insert { key: 1, value: 0 },
            Op::Insert { key: 2, value: 0 },
            Op::Query { key: 1 },
            // window 2 opens with {1, 2} live
            Op::Insert { key: 3, value: 0 },
            Op::Insert { key: 9, value: 0 },
        ];
        let r = check_epsilon_viability(&ops, n, 0.5, &p);
        assert_eq!(r.window_len, 2);
        assert_eq!(r.windows[0].records, 2);
        assert_eq!(r.windows[0].verdict.min_stash_needed, 0);
        assert_eq!((r.windows[1].first_op, r.windows[1].last_op), (3, 4));
        assert_eq!(r.windows[1].records, 4);
        assert_eq!(r.windows[1].verdict.min_stash_needed, 1);
    }

    #[test]
    fn deleted_then_reinserted_counts_twice() {
        let n = 4;
        let p = FixedProvider::new(n, [(1, (0, 1)), (2, (0, 1))]);
        let ops = [
            Op::Insert { key: 1, value: 0 },
            Op::Insert { key: 2, value: 0 },
            Op::Delete { key: 1 },
            Op::Insert { key: 1, value: 0 },
        ];
        let r = check_epsilon_viability(&ops, n, 1.0, &p);
        assert_eq!(r.windows[0].records, 3);
        assert_eq!(r.max_min_stash(), 1);
    }

    #[test]
    fn upserts_add_nothing() {
        let n = 4;
        let p = FixedProvider::new(n, [(1, (0, 1))]);
        let ops: Vec<_> = (0..8).map(|v| Op::Insert { key: 1, value: v }).collect();
        let r = check_epsilon_viability(&ops, n, 1.0, &p);
        assert_eq!(r.windows.len(), 2);
        assert!(r.windows.iter().all(|w| w.records == 1));
    }
}
