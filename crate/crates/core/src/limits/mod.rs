//! Finitely presented direct systems of 4-cycle algebras and the invariants
//! of their limits.

pub mod compare;
pub mod generators;
pub mod hr;
pub mod invariants;
pub mod lattice;
pub mod outgroup;
pub mod poly;
pub mod supernatural;
pub mod system;

pub use compare::{compare_systems, verify_witness, Comparison, Crossover, Reason, Side};
pub use generators::{gen_hr_asymmetric, gen_standard_index2, gen_stationary, hr_asymmetric_ns, Index2Stage};
pub use hr::{homology_inversion_obstructed, hr_check, HrReport};
pub use invariants::{
    coupling, is_generic_system, limit_invariants, limit_invariants_with, CouplingVerdict, DimensionGroupRank2,
    InvariantBundle, K0Kind, LimitGroup, Parity,
};
pub use lattice::{intermediate_lattice, Lattice, LatticeNode};
pub use outgroup::{out_group, OutGroupDescriptor};
pub use poly::Polynomial;
pub use supernatural::{Exponent, SupernaturalNumber};
pub use system::{parse_system, SystemSpec, Tail};

use crate::cycle::CycleError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LimitError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("step {step} has multiplicity 0 and cannot be unital")]
    FitViolation { step: usize },
    #[error("tail component {component} is negative at k = {k}")]
    NegativeValue { component: usize, k: String },
    #[error("period {period} exceeds the {steps} listed steps")]
    BadPeriod { period: usize, steps: usize },
    #[error("the system has no infinite tail")]
    TailNone,
    #[error("horizon {horizon} is shorter than the {prefix} listed steps")]
    HorizonBeforePrefix { horizon: usize, prefix: usize },
    #[error("cannot factor 0")]
    FactorZero,
    #[error("cannot factor {0}")]
    FactorTooLarge(String),
    #[error("system `{0}` is not generic")]
    NotGeneric(String),
    #[error("factors must be at least 2")]
    BadFactor,
    #[error(transparent)]
    Cycle(#[from] CycleError),
}
