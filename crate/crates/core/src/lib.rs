//! Invariants of direct systems of 4-cycle digraph algebras.
//!
//! - [`cycle`]: signatures of rigid embeddings, K0 and H1 data, homology ranges.
//! - [`homology`]: digraphs, clique complexes and integral homology.
//! - [`limits`]: finitely presented direct systems and their limit invariants.
//! - [`numeric`]: floating-point embedding data and perturbation checks.
//!
//! Exact code is generic over [`Int`], numeric code over [`Real`]. The
//! aliases below fix the scalar types used by the command-line front end.

pub mod cycle;
pub mod homology;
pub mod limits;
pub mod numeric;
pub mod scalar;

pub use scalar::{Int, Real};

use num_bigint::BigInt;

pub type BigSignature = cycle::Signature<BigInt>;
pub type SmallSignature = cycle::Signature<i64>;
pub type BigK0Matrix = cycle::K0Matrix<BigInt>;
pub type SmallK0Matrix = cycle::K0Matrix<i64>;
pub type BigShape = cycle::FourCycleShape<BigInt>;
pub type IntMatrix = homology::IntMatrix<i64>;
pub type System = limits::SystemSpec;
pub type Embedding = numeric::EmbeddingData<f64>;
pub type CMatrix = numeric::CMatrix<f64>;
