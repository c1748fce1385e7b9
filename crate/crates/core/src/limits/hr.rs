use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::invariants::is_generic_system;
use super::system::{SystemSpec, Tail};
use super::LimitError;
use crate::cycle::{joint_scale_stage, K0Matrix};

/// Signed homology range of the composite over steps `i..=j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeRange {
    pub i: usize,
    pub j: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub low: BigInt,
    pub high: BigInt,
    pub sign: i8,
    pub contains_zero: bool,
}

/// The growth inequality `2(n_k − 2)/(n_k + 2) > ∏_{i<k} (n_i + 2)/(n_i − 2)`
/// for systems whose steps all have K0 matrix `(n, 2, n, 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthCheck {
    pub k: usize,
    pub n: BigInt,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HrReport {
    /// Horizon actually examined; a finite system clamps it to its length.
    pub horizon: usize,
    pub ranges: Vec<CompositeRange>,
    pub growth: Option<Vec<GrowthCheck>>,
    /// All ranges share one strict sign and omit 0, up to `horizon`.
    pub asymmetric: bool,
}

pub fn hr_check(sys: &SystemSpec, horizon: usize) -> Result<HrReport, LimitError> {
    let steps = sys.steps(horizon);
    let horizon = steps.len();
    let k0s: Vec<K0Matrix<BigInt>> = steps.iter().map(|s| s.k0()).collect();
    let mut ranges = Vec::new();
    for i in 1..=horizon {
        let mut m = K0Matrix::identity();
        for j in i..=horizon {
            m = k0s[j - 1].mul(&m);
            let t = m.triple();
            let range = m.homology_range()?;
            ranges.push(CompositeRange {
                i,
                j,
                p: t.p,
                q: t.q,
                r: t.r,
                sign: range.sign(),
                contains_zero: range.contains_zero(),
                low: range.low,
                high: range.high,
            });
        }
    }
    let first = ranges.first().map_or(0, |r| r.sign);
    let asymmetric = first != 0 && ranges.iter().all(|r| r.sign == first && !r.contains_zero);
    Ok(HrReport { horizon, growth: growth_checks(&k0s), ranges, asymmetric })
}

fn family_n(m: &K0Matrix<BigInt>) -> Option<BigInt> {
    let two = BigInt::from(2);
    (m.b == two && m.d == two && m.a == m.c && m.a > two).then(|| m.a.clone())
}

fn growth_checks(k0s: &[K0Matrix<BigInt>]) -> Option<Vec<GrowthCheck>> {
    let ns: Vec<BigInt> = k0s.iter().map(family_n).collect::<Option<_>>()?;
    let two = BigInt::from(2);
    let mut rhs = BigRational::one();
    let mut out = Vec::new();
    for (idx, n) in ns.iter().enumerate() {
        let lhs = BigRational::new(&two * (n - &two), n + &two);
        out.push(GrowthCheck { k: idx + 1, n: n.clone(), holds: lhs > rhs, lhs, rhs: rhs.clone() });
        rhs *= BigRational::new(n + &two, n - &two);
    }
    Some(out)
}

/// Least `n` satisfying the growth inequality against the running product.
pub(crate) fn minimal_growth_n(running: &BigRational) -> BigInt {
    let two = BigRational::from_integer(BigInt::from(2));
    let four = BigRational::from_integer(BigInt::from(4));
    let bound = (four + &two * running) / (&two - running);
    bound.floor().to_integer() + 1
}

/// True when some stage-0 joint scale element has an inverted partner that
/// is never realized at stages `0..=horizon`.
pub fn homology_inversion_obstructed(sys: &SystemSpec, horizon: usize) -> Result<bool, LimitError> {
    let generic = match sys.tail {
        Tail::None => sys.prefix.iter().all(|s| s.is_generic()),
        _ => is_generic_system(sys),
    };
    if !generic {
        return Err(LimitError::NotGeneric(sys.name.clone()));
    }
    let steps = sys.steps(horizon);
    let mut composites = vec![(K0Matrix::<BigInt>::identity(), BigInt::one())];
    for s in &steps {
        let (m, d) = composites.last().expect("nonempty");
        composites.push((s.k0().mul(m), s.h1() * d));
    }
    for el in joint_scale_stage(&sys.initial)? {
        let [a, b, c, d] = el.k0part.clone();
        let m0 = K0Matrix::new(a, b, c, d)?;
        let mut reachable = false;
        for (m, dc) in &composites {
            if m.mul(&m0).homology_range()?.contains(&-(dc * &el.delta)) {
                reachable = true;
                break;
            }
        }
        if !reachable {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Pairs `(i, j)` whose composite range is not of one strict sign.
pub fn sign_failures(report: &HrReport) -> Vec<(usize, usize)> {
    report.ranges.iter().filter(|r| r.sign == 0 || r.contains_zero).map(|r| (r.i, r.j)).collect()
}
