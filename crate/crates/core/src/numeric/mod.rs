//! Floating-point embedding data for `A(D4)` and randomized checks of the
//! perturbation lemmas behind rigidity.

pub mod embedding;
pub mod linalg;
pub mod samplers;

pub use embedding::{
    compose_embeddings, dp_example_phi, is_locally_regular, is_norm_symmetric, is_proper, is_rigid_numeric, is_strict,
    rigid_embedding, verify_irregular_factorization, BlockKind, EmbeddingData, FactorizationReport, Violation,
};
pub use linalg::{dist_to_partial_isometry, is_regular_pisometry, upper_rank, CMatrix, PartialIsometryReport};

/// Unitarity and cycle-relation tolerance for user-supplied data.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Distance to partial isometries accepted by the rigidity test.
pub const RIGIDITY_TOL: f64 = 1e-7;
/// Slack added to the bounds checked by the samplers.
pub const SAMPLER_MARGIN: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("invalid embedding data: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("inner embedding has vertex dimensions {0:?}; composition needs them all equal")]
    NotUniform([usize; 4]),
    #[error("{0}")]
    Parameter(String),
}
