//! Finite-support approximants of `c ⊗ 1` by sums `Σ Δ(a)(1 ⊗ b)`.

mod classical;
mod cross;
mod quantum;

use thiserror::Error;

use crate::discrete::DiscreteError;
use crate::fusion::FusionError;
use crate::irr_partition::IrrPartitionError;
use crate::katetov::KatetovError;
use crate::matrix_cqg::CqgError;

pub use classical::{classical_gf, ClassicalReport, ClassicalResult, GfMismatch};
pub use cross::{cross_pipeline, CrossMismatch, CrossReport};
pub use quantum::{
    build_ab, elementary_decomposition, scalar_collapse, slot_bound, verify_freeness, ClassResidual,
    ElementaryDecomposition, Factorization, FreenessReport, QuantumRun, ScalarCollapse, Slot, SlotSummary,
    DECOMP_TOL, RESIDUAL_TOL,
};

#[derive(Debug, Error)]
pub enum FreenessError {
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Katetov(#[from] KatetovError),
    #[error(transparent)]
    Irr(#[from] IrrPartitionError),
    #[error(transparent)]
    Discrete(#[from] DiscreteError),
    #[error(transparent)]
    Cqg(#[from] CqgError),
    #[error("freeness: {0}")]
    Input(String),
    #[error("freeness: internal error: {0}")]
    Internal(String),
    #[error("freeness: class {class}, slot {slot}: {w} is the slot label of both {v} and {v_prime}")]
    Injectivity {
        class: usize,
        slot: usize,
        w: String,
        v: String,
        v_prime: String,
    },
    #[error("freeness: elementary decomposition at {v} failed: {message}")]
    Decomposition { v: String, message: String },
}
