//! Dancing-kickout cuckoo table.
//!
//! Each record `x` is the edge `(h1(x), h2(x))` of the cuckoo graph over the
//! `n` bins, and a record stored in bin `b` is that edge oriented out of `b`.
//! Every bin has 8 slots split into two halves of 4, one per parity; within
//! a half, positions 0-1 are primary, 2 is secondary and 3 is bad. New
//! records go to the active parity, whose orientation is maintained by the
//! rank-based dancing walk: each flipped edge is a record moving to its
//! other bin (a kickout). Edges that close a cycle are bad and take a bad
//! slot; if both endpoints' bad slots are taken the record goes to the
//! stash.
//!
//! Operations are grouped in phases of `ceil(eps * n)` inserts/deletes. At a
//! phase boundary the parities swap and the newly active half starts from an
//! empty orientation; during the phase every operation migrates the
//! old-parity records of the next `ceil(1 / eps)` bins, so the old half is
//! empty by the end of the phase. The stash is re-inserted on the first
//! operation of each phase.
//!
//! Queries read the two candidate bins and the stash and nothing else.

mod provider;
mod table;

pub use provider::{FixedProvider, HashPairProvider, SeededProvider, TabulationProvider};
pub use table::{
    CuckooError, CuckooTable, OperationOutcome, Parity, QueryTrace, Record, TableConfig,
    TableStats, BAD_POS, HALF, SECONDARY_POS, SLOTS_PER_BIN,
};
