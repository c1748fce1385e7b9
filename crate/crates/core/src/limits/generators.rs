use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::hr::minimal_growth_n;
use super::system::{SystemSpec, Tail};
use super::LimitError;
use crate::cycle::{FourCycleShape, Signature};

/// The stationary system with step `(1,1,1,1)` on `A(D4)`.
pub fn gen_stationary() -> SystemSpec {
    let one = FourCycleShape::uniform(BigInt::one()).expect("positive");
    let step = Signature::from_i64([1, 1, 1, 1]).expect("nonnegative");
    SystemSpec::new("stationary", one, vec![step], Tail::Periodic(1)).expect("valid")
}

/// One stage of the standard index-2 chain between pairs of matrix algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Index2Stage {
    pub stage: usize,
    pub dims: [BigInt; 2],
    /// Partial multiplicity matrix of the step out of this stage.
    pub multiplicity: [[BigInt; 2]; 2],
    /// The step carries the diagonal masa of one stage into that of the next.
    pub diagonal_masa: bool,
}

/// K0 data of the chain `M_x ⊕ M_x → M_y ⊕ M_y` with multiplicity matrix
/// `[[p, p], [p, p]]` at each step, for the given factors.
///
/// Each step doubles and multiplies by the next factor, so stage `k` has
/// `x_k = 2^k ∏_{i≤k} p_i`. The self-adjoint unitary swapping the two
/// summands and the diagonal masa are not materialized; only their effect
/// on K0 is recorded.
pub fn gen_standard_index2(factors: &[u64]) -> Result<Vec<Index2Stage>, LimitError> {
    if factors.iter().any(|&p| p < 2) {
        return Err(LimitError::BadFactor);
    }
    let mut x = BigInt::one();
    let mut out = Vec::new();
    for (k, &p) in factors.iter().enumerate() {
        let p = BigInt::from(p);
        out.push(Index2Stage {
            stage: k,
            dims: [x.clone(), x.clone()],
            multiplicity: [[p.clone(), p.clone()], [p.clone(), p.clone()]],
            diagonal_masa: true,
        });
        x = x * 2 * p;
    }
    Ok(out)
}

/// Growth parameters `n_k`, each minimal for the growth inequality.
pub fn hr_asymmetric_ns(count: usize) -> Vec<BigInt> {
    let two = BigInt::from(2);
    let mut running = BigRational::one();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let n = minimal_growth_n(&running);
        running *= BigRational::new(&n + &two, &n - &two);
        out.push(n);
    }
    out
}

/// A finite system whose composite homology ranges all avoid 0 and share a
/// sign. Step `k` is `(n_k − 1, 1, 1, 1)`, the generic signature with K0
/// matrix `(n_k, 2, n_k, 2)`.
pub fn gen_hr_asymmetric(count: usize) -> SystemSpec {
    let steps = hr_asymmetric_ns(count)
        .into_iter()
        .map(|n| {
            let one = BigInt::one();
            Signature::new([n - 1, one.clone(), one.clone(), one]).expect("n ≥ 7")
        })
        .collect();
    let one = FourCycleShape::uniform(BigInt::one()).expect("positive");
    SystemSpec::new(format!("hr-asymmetric-{count}"), one, steps, Tail::None).expect("valid")
}
