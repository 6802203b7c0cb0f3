//! Fusion rings, Katětov partitions and explicit freeness witnesses for
//! discrete quantum groups with low dual.

pub mod discrete;
pub mod freeness;
pub mod fusion;
pub mod irr_partition;
pub mod katetov;
pub mod linalg;
pub mod matrix_cqg;
pub mod report;
