//! Incremental edge orientation for forests with low out-degree, and a
//! dynamic cuckoo hash table built on top of it.
//!
//! The crate is layered:
//!
//! - [`orient`] holds the mutable orientation state ([`OrientedForest`]):
//!   per-vertex primary / secondary / bad out-edge slots, path flipping and
//!   the random-walk primitive. It makes no policy decisions.
//! - [`rank`] provides the two "which side is smaller" structures: rank trees
//!   realizing combination rank ([`RankForest`]) and a size-tracking
//!   union-find without path compression ([`SizeForest`]).
//! - [`algo`] is the policy layer: the never-flip and flip-all baselines and
//!   the dancing-walk algorithm (size based, rank based, and the k-ary
//!   variant obtained by raising the primary capacity).
//! - [`cuckoo`] is the 8-associative cuckoo table whose kickout chains are
//!   the flips of the rank-based dancing walk, with a stash and phased
//!   rebuilds to support deletions.
//! - [`script`] is the text format for table operation scripts.

pub mod algo;
pub mod cuckoo;
pub mod error;
pub mod orient;
pub mod rank;
pub mod script;

pub use algo::{AlgoConfig, FailureError, InsertError, InsertReport, Orienter, Variant};
pub use cuckoo::{CuckooTable, HashPairProvider, OperationOutcome, TableConfig};
pub use error::OrientError;
pub use orient::{EdgeClass, EdgeId, OrientedForest, VertexId, WalkOutcome, WalkReason};
pub use rank::{CombineOutcome, RankForest, SizeForest, Verdict};
