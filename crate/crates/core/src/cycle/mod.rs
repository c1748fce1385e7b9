//! Rigid embeddings between 4-cycle algebras: signatures, their K0 and H1
//! data, composition, homology ranges and finite-stage joint scales.

mod klein;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::scalar::{int, Int};

pub use klein::{Symmetry, CYCLE_EDGES};

/// Largest minimum block size accepted by [`joint_scale_stage`]. The stage
/// set grows like the fourth power of this bound.
pub const JOINT_SCALE_MAX_DIM: i64 = 48;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("not a rigid-type K0 matrix: a={a}, b={b}, c={c}, d={d}")]
    NotRigidType { a: String, b: String, c: String, d: String },
    #[error("signature component {index} is negative: {value}")]
    NegativeComponent { index: usize, value: String },
    #[error("zero signature has no step data")]
    ZeroSignature,
    #[error("shape dimension {index} must be at least 1, got {value}")]
    InvalidShape { index: usize, value: String },
    #[error("joint scale enumeration capped at minimum dimension {cap}, got {got}")]
    ShapeTooLarge { cap: i64, got: String },
}

/// Block sizes (n1, n2, n3, n4) of `A(D4)` tensored blockwise with matrix algebras.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FourCycleShape<I> {
    dims: [I; 4],
}

impl<I: Int> FourCycleShape<I> {
    pub fn new(dims: [I; 4]) -> Result<Self, CycleError> {
        for (index, d) in dims.iter().enumerate() {
            if *d < I::one() {
                return Err(CycleError::InvalidShape { index, value: d.to_string() });
            }
        }
        Ok(FourCycleShape { dims })
    }

    pub fn uniform(n: I) -> Result<Self, CycleError> {
        Self::new([n.clone(), n.clone(), n.clone(), n])
    }

    pub fn dims(&self) -> &[I; 4] {
        &self.dims
    }

    pub fn total(&self) -> I {
        self.dims.iter().cloned().fold(I::zero(), |acc, d| acc + d)
    }

    pub fn min_dim(&self) -> I {
        self.dims.iter().cloned().min().expect("four dims")
    }
}

/// Multiplicities of the four rank-one rigid summand types, indexed by
/// [`Symmetry::index`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature<I> {
    r: [I; 4],
}

impl<I: Int> Signature<I> {
    pub fn new(r: [I; 4]) -> Result<Self, CycleError> {
        for (index, v) in r.iter().enumerate() {
            if v.is_negative() {
                return Err(CycleError::NegativeComponent { index, value: v.to_string() });
            }
        }
        Ok(Signature { r })
    }

    pub fn from_i64(r: [i64; 4]) -> Result<Self, CycleError> {
        Self::new(r.map(int))
    }

    /// The rank-one rigid embedding of the given type.
    pub fn unit(sym: Symmetry) -> Self {
        let mut r = [I::zero(), I::zero(), I::zero(), I::zero()];
        r[sym.index()] = I::one();
        Signature { r }
    }

    pub fn components(&self) -> &[I; 4] {
        &self.r
    }

    pub fn get(&self, sym: Symmetry) -> &I {
        &self.r[sym.index()]
    }

    pub fn multiplicity(&self) -> I {
        self.r.iter().cloned().fold(I::zero(), |acc, v| acc + v)
    }

    pub fn is_generic(&self) -> bool {
        self.r.iter().all(|v| v.is_positive())
    }

    pub fn k0(&self) -> K0Matrix<I> {
        let [r1, r2, r3, r4] = self.r.clone();
        K0Matrix {
            a: r1.clone() + r4.clone(),
            b: r2.clone() + r3.clone(),
            c: r1 + r2,
            d: r3 + r4,
        }
    }

    pub fn h1(&self) -> I {
        let [r1, r2, r3, r4] = self.r.clone();
        r1 - r2 + r3 - r4
    }

    /// Group convolution over the Klein four-group. The group is abelian, so
    /// the order only matters for reading: `outer` is applied after `inner`.
    pub fn compose(outer: &Self, inner: &Self) -> Self {
        let mut r = [I::zero(), I::zero(), I::zero(), I::zero()];
        for g in Symmetry::ALL {
            for h in Symmetry::ALL {
                let slot = &mut r[g.compose(h).index()];
                *slot = slot.clone() + outer.get(g).clone() * inner.get(h).clone();
            }
        }
        Signature { r }
    }

    pub fn step_data(&self) -> Result<StepData<I>, CycleError> {
        if self.multiplicity().is_zero() {
            return Err(CycleError::ZeroSignature);
        }
        Ok(StepData { triple: self.k0().triple(), delta: self.h1() })
    }

    /// Summands as vertex maps of the 4-cycle, one per rank-one part.
    /// Only meaningful for machine-size multiplicities.
    pub fn summand_types(&self) -> Vec<Symmetry> {
        let mut out = Vec::new();
        for s in Symmetry::ALL {
            let n = self.get(s).to_usize().expect("multiplicity fits in usize");
            out.extend(std::iter::repeat_n(s, n));
        }
        out
    }
}

impl<I: Int> fmt::Display for Signature<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [r1, r2, r3, r4] = &self.r;
        write!(f, "({r1},{r2},{r3},{r4})")
    }
}

/// `[[a,b],[b,a]] ⊕ [[c,d],[d,c]]` with nonnegative entries and `a+b = c+d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct K0Matrix<I> {
    pub a: I,
    pub b: I,
    pub c: I,
    pub d: I,
}

impl<I: Int> K0Matrix<I> {
    pub fn new(a: I, b: I, c: I, d: I) -> Result<Self, CycleError> {
        let m = K0Matrix { a, b, c, d };
        m.check()?;
        Ok(m)
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self, CycleError> {
        Self::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> Self {
        K0Matrix { a: I::one(), b: I::zero(), c: I::one(), d: I::zero() }
    }

    fn check(&self) -> Result<(), CycleError> {
        let nonneg = [&self.a, &self.b, &self.c, &self.d].iter().all(|v| !v.is_negative());
        if nonneg && self.a.clone() + self.b.clone() == self.c.clone() + self.d.clone() {
            Ok(())
        } else {
            Err(CycleError::NotRigidType {
                a: self.a.to_string(),
                b: self.b.to_string(),
                c: self.c.to_string(),
                d: self.d.to_string(),
            })
        }
    }

    pub fn multiplicity(&self) -> I {
        self.a.clone() + self.b.clone()
    }

    pub fn triple(&self) -> K0Triple<I> {
        K0Triple {
            p: self.a.clone() + self.b.clone(),
            q: self.a.clone() - self.b.clone(),
            r: self.c.clone() - self.d.clone(),
        }
    }

    /// Matrix product `self · rhs`; corresponds to composing `self` after `rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&rhs.a, &rhs.b, &rhs.c, &rhs.d);
        K0Matrix {
            a: a.clone() * e.clone() + b.clone() * f.clone(),
            b: a.clone() * f.clone() + b.clone() * e.clone(),
            c: c.clone() * g.clone() + d.clone() * h.clone(),
            d: c.clone() * h.clone() + d.clone() * g.clone(),
        }
    }

    pub fn to_matrix(&self) -> [[I; 4]; 4] {
        let z = I::zero();
        let (a, b, c, d) = (self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone());
        [
            [a.clone(), b.clone(), z.clone(), z.clone()],
            [b, a, z.clone(), z.clone()],
            [z.clone(), z.clone(), c.clone(), d.clone()],
            [z.clone(), z, d, c],
        ]
    }

    /// Image of the K0 class `e11 ⊕ e33`, the rigid-embedding part of a joint
    /// scale element.
    pub fn class_of_e11_e33(&self) -> [I; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    /// Every nonnegative signature with this K0 matrix, ordered by `r1`.
    pub fn signature_solutions(&self) -> Vec<Signature<I>> {
        if self.check().is_err() {
            return Vec::new();
        }
        let (a, b, c) = (self.a.clone(), self.b.clone(), self.c.clone());
        let lo = std::cmp::max(I::zero(), c.clone() - b.clone());
        let hi = std::cmp::min(a.clone(), c.clone());
        let mut out = Vec::new();
        let mut t = lo;
        while t <= hi {
            out.push(Signature {
                r: [t.clone(), c.clone() - t.clone(), b.clone() - c.clone() + t.clone(), a.clone() - t.clone()],
            });
            t = t + I::one();
        }
        out
    }

    /// The set of H1 multipliers over all signatures realizing this matrix.
    pub fn homology_range(&self) -> Result<HomologyRange<I>, CycleError> {
        self.check()?;
        let K0Triple { p, q, r } = self.triple();
        let low = (q.clone() + r.clone()).abs() - p.clone();
        let high = p.clone() - (q.clone() - r.clone()).abs();
        let sign_flipped = (q.is_negative() && r.is_positive()) || (q.is_positive() && r.is_negative());
        Ok(HomologyRange { low, high, sign_flipped })
    }
}

/// `(p, q, r) = (a+b, a−b, c−d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct K0Triple<I> {
    pub p: I,
    pub q: I,
    pub r: I,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepData<I> {
    pub triple: K0Triple<I>,
    pub delta: I,
}

/// Arithmetic progression `low, low+4, ..., high`.
///
/// `sign_flipped` is set when q and r have opposite signs. In that case the
/// convention that first normalizes both to be nonnegative reports the
/// negated set; see [`HomologyRange::normalized`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyRange<I> {
    pub low: I,
    pub high: I,
    pub sign_flipped: bool,
}

impl<I: Int> HomologyRange<I> {
    pub fn contains(&self, v: &I) -> bool {
        *v >= self.low && *v <= self.high && (v.clone() - self.low.clone()).is_multiple_of(&int(4))
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&I::zero())
    }

    pub fn len(&self) -> I {
        (self.high.clone() - self.low.clone()) / int(4) + I::one()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Materialized values; callers must know the range is small.
    pub fn values(&self) -> Vec<I> {
        let mut out = Vec::new();
        let mut v = self.low.clone();
        while v <= self.high {
            out.push(v.clone());
            v = v + int(4);
        }
        out
    }

    /// The range after replacing q, r by |q|, |r|.
    pub fn normalized(&self) -> HomologyRange<I> {
        if self.sign_flipped {
            HomologyRange { low: -self.high.clone(), high: -self.low.clone(), sign_flipped: false }
        } else {
            self.clone()
        }
    }

    /// +1 if every element is positive, −1 if every element is negative, 0 otherwise.
    pub fn sign(&self) -> i8 {
        if self.low.is_positive() {
            1
        } else if self.high.is_negative() {
            -1
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointScaleElement<I> {
    /// `(a, b, c, d)`, the K0 class of the image of `e11 ⊕ e33`.
    pub k0part: [I; 4],
    /// Image of the fixed generator of `H1(A(D4))`.
    pub delta: I,
}

impl<I: Int> JointScaleElement<I> {
    /// Post-compose with a canonical symmetry of the stage algebra.
    pub fn act(&self, sym: Symmetry) -> Self {
        let mut k0part = self.k0part.clone();
        for (j, v) in self.k0part.iter().enumerate() {
            k0part[sym.apply(j)] = v.clone();
        }
        JointScaleElement { k0part, delta: self.delta.clone() * int(sym.h1_character()) }
    }
}

/// Joint scale elements realized by rigid embeddings of `A(D4)` into a stage.
pub fn joint_scale_stage<I: Int>(shape: &FourCycleShape<I>) -> Result<BTreeSet<JointScaleElement<I>>, CycleError> {
    let m = shape.min_dim();
    let cap: I = int(JOINT_SCALE_MAX_DIM);
    if m > cap {
        return Err(CycleError::ShapeTooLarge { cap: JOINT_SCALE_MAX_DIM, got: m.to_string() });
    }
    let m = m.to_i64().expect("capped");
    let mut out = BTreeSet::new();
    for rho in 1..=m {
        for a in 0..=rho {
            for c in 0..=rho {
                let k0 = K0Matrix::<I>::from_i64(a, rho - a, c, rho - c)?;
                let range = k0.homology_range()?;
                for delta in range.values() {
                    out.insert(JointScaleElement { k0part: k0.class_of_e11_e33(), delta });
                }
            }
        }
    }
    Ok(out)
}

/// Target-vertex dimension check for a sum of multiplicity-one rigid summands.
pub fn embedding_fits<I: Int>(sig: &Signature<I>, from: &FourCycleShape<I>, to: &FourCycleShape<I>, unital: bool) -> bool {
    let m = sig.k0().to_matrix();
    (0..4).all(|i| {
        let need = (0..4).fold(I::zero(), |acc, j| acc + m[i][j].clone() * from.dims[j].clone());
        if unital {
            need == to.dims[i]
        } else {
            need <= to.dims[i]
        }
    })
}

/// Shape reached by a unital step.
pub fn image_shape<I: Int>(sig: &Signature<I>, from: &FourCycleShape<I>) -> Result<FourCycleShape<I>, CycleError> {
    let m = sig.k0().to_matrix();
    let dims: [I; 4] = std::array::from_fn(|i| {
        (0..4).fold(I::zero(), |acc, j| acc + m[i][j].clone() * from.dims[j].clone())
    });
    FourCycleShape::new(dims)
}

/// True iff `g` commutes with the permutation matrices of the four symmetries.
pub fn commutes_with_symmetries<I: Int>(g: &[[I; 4]; 4]) -> bool {
    Symmetry::ALL.iter().all(|s| {
        let p = s.permutation();
        (0..4).all(|i| {
            (0..4).all(|j| {
                let pg = (0..4).fold(I::zero(), |acc, k| acc + int::<I>(p[i][k]) * g[k][j].clone());
                let gp = (0..4).fold(I::zero(), |acc, k| acc + g[i][k].clone() * int::<I>(p[k][j]));
                pg == gp
            })
        })
    })
}

/// Block form `[[a,b],[b,a]] ⊕ [[c,d],[d,c]]` with nonnegative entries and
/// `a+b = c+d`.
///
/// Commuting with the symmetries alone is weaker: it permits symmetric
/// off-diagonal blocks and unequal row sums, so both conditions are checked.
pub fn is_rigid_type_matrix<I: Int>(g: &[[I; 4]; 4]) -> bool {
    let zero_off = (0..2).all(|i| (2..4).all(|j| g[i][j].is_zero() && g[j][i].is_zero()));
    if !zero_off || !commutes_with_symmetries(g) {
        return false;
    }
    K0Matrix::new(g[0][0].clone(), g[0][1].clone(), g[2][2].clone(), g[2][3].clone()).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn sig(r: [i64; 4]) -> Signature<i64> {
        Signature::from_i64(r).unwrap()
    }

    #[test]
    fn k0_examples() {
        assert_eq!(sig([1, 0, 0, 0]).k0(), K0Matrix::identity());
        let n = 9;
        assert_eq!(sig([n, 0, 2, 0]).k0(), K0Matrix::from_i64(n, 2, n, 2).unwrap());
        assert_eq!(sig([1, 1, 1, 1]).k0(), K0Matrix::from_i64(2, 2, 2, 2).unwrap());
    }

    #[test]
    fn h1_examples() {
        assert_eq!(sig([1, 1, 1, 1]).h1(), 0);
        assert_eq!(sig([10, 0, 2, 0]).h1(), 12);
        assert_eq!(sig([8, 2, 0, 2]).h1(), 4);
    }

    #[test]
    fn compose_examples() {
        let s = sig([3, 1, 4, 1]);
        assert_eq!(Signature::compose(&sig([1, 0, 0, 0]), &s), s);
        assert_eq!(Signature::compose(&sig([0, 1, 0, 0]), &sig([0, 1, 0, 0])), sig([1, 0, 0, 0]));
        assert_eq!(Signature::compose(&sig([1, 1, 1, 1]), &sig([1, 1, 1, 1])), sig([4, 4, 4, 4]));
    }

    #[test]
    fn range_examples() {
        let r = K0Matrix::<i64>::from_i64(10, 2, 10, 2).unwrap().homology_range().unwrap();
        assert_eq!(r.values(), vec![4, 8, 12]);
        assert_eq!(K0Matrix::<i64>::identity().homology_range().unwrap().values(), vec![1]);
        let r = K0Matrix::<i64>::from_i64(2, 2, 2, 2).unwrap().homology_range().unwrap();
        assert_eq!(r.values(), vec![-4, 0, 4]);
        assert!(K0Matrix::<i64>::from_i64(1, 0, 2, 0).is_err());
    }

    #[test]
    fn opposite_signs_flip_normalization() {
        let m = K0Matrix::<i64>::from_i64(0, 1, 1, 0).unwrap();
        let r = m.homology_range().unwrap();
        assert_eq!(r.values(), vec![-1]);
        assert!(r.sign_flipped);
        assert_eq!(r.normalized().values(), vec![1]);
    }

    #[test]
    fn solutions_examples() {
        assert_eq!(K0Matrix::<i64>::identity().signature_solutions(), vec![sig([1, 0, 0, 0])]);
        let m = K0Matrix::<i64>::from_i64(10, 2, 10, 2).unwrap();
        assert_eq!(m.signature_solutions(), vec![sig([8, 2, 0, 2]), sig([9, 1, 1, 1]), sig([10, 0, 2, 0])]);
        let m = K0Matrix::<i64>::from_i64(0, 1, 1, 0).unwrap();
        assert_eq!(m.signature_solutions(), vec![sig([0, 1, 0, 0])]);
    }

    #[test]
    fn genericity() {
        assert!(sig([1, 1, 1, 1]).is_generic());
        assert!(!sig([1, 0, 0, 0]).is_generic());
        assert!(sig([3, 1, 2, 1]).is_generic());
    }

    #[test]
    fn fits() {
        let one = FourCycleShape::uniform(1i64).unwrap();
        let four = FourCycleShape::uniform(4i64).unwrap();
        assert!(embedding_fits(&sig([1, 1, 1, 1]), &one, &four, true));
        assert!(embedding_fits(&sig([1, 0, 0, 0]), &one, &one, true));
        assert!(!embedding_fits(&sig([2, 0, 0, 0]), &one, &one, false));
        assert!(FourCycleShape::new([1i64, 0, 1, 1]).is_err());
    }

    #[test]
    fn joint_scale_examples() {
        let s = joint_scale_stage(&FourCycleShape::uniform(1i64).unwrap()).unwrap();
        let expect: BTreeSet<_> = [([1, 0, 1, 0], 1), ([0, 1, 1, 0], -1), ([0, 1, 0, 1], 1), ([1, 0, 0, 1], -1)]
            .into_iter()
            .map(|(k0part, delta)| JointScaleElement { k0part, delta })
            .collect();
        assert_eq!(s, expect);
        let s = joint_scale_stage(&FourCycleShape::uniform(2i64).unwrap()).unwrap();
        // (1,1,1,1) is only realized by (1,0,1,0) and (0,1,0,1), so δ = ±2
        assert!(!s.contains(&JointScaleElement { k0part: [1, 1, 1, 1], delta: 0 }));
        assert!(s.contains(&JointScaleElement { k0part: [1, 1, 1, 1], delta: 2 }));
        assert!(s.contains(&JointScaleElement { k0part: [1, 1, 1, 1], delta: -2 }));
        assert!(s.contains(&JointScaleElement { k0part: [2, 0, 2, 0], delta: 2 }));
        assert!(joint_scale_stage(&FourCycleShape::uniform(1000i64).unwrap()).is_err());
    }

    #[test]
    fn joint_scale_closed_under_symmetries() {
        let s = joint_scale_stage(&FourCycleShape::new([3i64, 4, 3, 5]).unwrap()).unwrap();
        for sym in Symmetry::ALL {
            let image: BTreeSet<_> = s.iter().map(|e| e.act(sym)).collect();
            assert_eq!(image, s);
        }
    }

    #[test]
    fn rigid_type_matrices() {
        let shown = [[6i64, 6, 0, 0], [2, 2, 0, 0], [0, 0, 6, 6], [0, 0, 2, 2]];
        assert!(!is_rigid_type_matrix(&shown));
        assert!(is_rigid_type_matrix(&K0Matrix::<i64>::identity().to_matrix()));
        assert!(is_rigid_type_matrix(&sig([2, 1, 3, 0]).k0().to_matrix()));
        // commutes with every symmetry but mixes the source and sink blocks
        let mixed = [[1i64, 0, 1, 1], [0, 1, 1, 1], [1, 1, 1, 0], [1, 1, 0, 1]];
        assert!(commutes_with_symmetries(&mixed));
        assert!(!is_rigid_type_matrix(&mixed));
    }

    #[test]
    fn bigint_scalar() {
        let big: BigInt = "1000000000000000000000".parse().unwrap();
        let s = Signature::new([big.clone(), BigInt::from(0), BigInt::from(2), BigInt::from(0)]).unwrap();
        assert_eq!(s.h1(), big.clone() + 2);
        let r = s.k0().homology_range().unwrap();
        assert_eq!(r.high, big.clone() + 2);
        assert_eq!(r.len(), BigInt::from(3));
    }

    fn small_sig() -> impl Strategy<Value = Signature<i64>> {
        prop::array::uniform4(0i64..=20).prop_map(|r| Signature::from_i64(r).unwrap())
    }

    proptest! {
        #[test]
        fn functorial(s in small_sig(), t in small_sig()) {
            let st = Signature::compose(&s, &t);
            prop_assert_eq!(st.k0(), s.k0().mul(&t.k0()));
            prop_assert_eq!(st.h1(), s.h1() * t.h1());
        }

        #[test]
        fn range_parity_and_bound(s in small_sig()) {
            let m = s.k0();
            let r = m.homology_range().unwrap();
            let rho = s.multiplicity();
            for v in r.values() {
                prop_assert_eq!((v - rho).rem_euclid(2), 0);
                prop_assert!(v.abs() <= rho);
            }
            prop_assert!(r.contains(&s.h1()));
        }
    }

    #[test]
    fn range_matches_enumeration_small() {
        for a in 0..=6i64 {
            for b in 0..=6 {
                for c in 0..=(a + b) {
                    let m = K0Matrix::<i64>::from_i64(a, b, c, a + b - c).unwrap();
                    let brute: BTreeSet<i64> = m.signature_solutions().iter().map(|s| s.h1()).collect();
                    let closed: BTreeSet<i64> = m.homology_range().unwrap().values().into_iter().collect();
                    assert_eq!(brute, closed, "{m:?}");
                }
            }
        }
    }

    #[test]
    fn bound_attained_iff_split_support() {
        for a in 0..=6i64 {
            for b in 0..=6 {
                for c in 0..=(a + b) {
                    let m = K0Matrix::<i64>::from_i64(a, b, c, a + b - c).unwrap();
                    let rho = a + b;
                    let r = m.homology_range().unwrap();
                    let attained = r.values().iter().any(|v| v.abs() == rho);
                    let split = m.signature_solutions().iter().any(|s| {
                        let r = s.components();
                        (r[1] == 0 && r[3] == 0) || (r[0] == 0 && r[2] == 0)
                    });
                    assert_eq!(attained, split, "{m:?}");
                }
            }
        }
    }
}
