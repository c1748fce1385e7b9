use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Polynomial;
use super::supernatural::SupernaturalNumber;
use super::system::{SystemSpec, Tail};
use super::LimitError;
use crate::cycle::StepData;

/// Default bound below which ∞-primes of polynomial tails are enumerated.
pub const DEFAULT_PRIME_BOUND: u64 = 10_000;

/// Extra stages the coupling certificate may walk past the requested horizon.
pub const COUPLING_EXTENSION_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitGroup {
    Zero,
    Cyclic(SupernaturalNumber),
}

impl LimitGroup {
    pub fn is_zero(&self) -> bool {
        matches!(self, LimitGroup::Zero)
    }

    pub fn iso(&self, other: &Self) -> bool {
        match (self, other) {
            (LimitGroup::Zero, LimitGroup::Zero) => true,
            (LimitGroup::Cyclic(a), LimitGroup::Cyclic(b)) => a.subgroup_iso(b),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K0Kind {
    Rank1 { p: SupernaturalNumber },
    Rank2 { p: SupernaturalNumber, q: SupernaturalNumber, odd_half_generator: bool },
}

impl K0Kind {
    fn build(p: &LimitGroup, q: &LimitGroup, odd: bool) -> Self {
        let p = match p {
            LimitGroup::Cyclic(s) => s.clone(),
            LimitGroup::Zero => unreachable!("multiplicities are positive"),
        };
        match q {
            LimitGroup::Zero => K0Kind::Rank1 { p },
            LimitGroup::Cyclic(q) => K0Kind::Rank2 { p, q: q.clone(), odd_half_generator: odd },
        }
    }

    pub fn iso(&self, other: &Self) -> bool {
        match (self, other) {
            (K0Kind::Rank1 { p }, K0Kind::Rank1 { p: p2 }) => p.subgroup_iso(p2),
            (
                K0Kind::Rank2 { p, q, odd_half_generator: h },
                K0Kind::Rank2 { p: p2, q: q2, odd_half_generator: h2 },
            ) => p.subgroup_iso(p2) && q.subgroup_iso(q2) && h == h2,
            _ => false,
        }
    }
}

/// K0 of the limit, split over the source pair (vertices 1, 2; `q = a − b`)
/// and the sink pair (vertices 3, 4; `r = c − d`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionGroupRank2 {
    pub kind: K0Kind,
    pub sink_kind: K0Kind,
    pub unital: bool,
    /// Unit class in `(sum, difference) / 2` coordinates, source then sink pair.
    pub unit_coords: Option<[(BigRational, BigRational); 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CouplingVerdict {
    Zero {
        reason: String,
    },
    Positive {
        lower_bound: BigRational,
        /// Exact product of `|δ_n| / p_n` over stages `from_stage..=to_stage`.
        partial_product: BigRational,
        from_stage: usize,
        to_stage: usize,
        exact: bool,
    },
    Undetermined {
        horizon: usize,
    },
}

impl CouplingVerdict {
    pub fn class(&self) -> &'static str {
        match self {
            CouplingVerdict::Zero { .. } => "zero",
            CouplingVerdict::Positive { .. } => "positive",
            CouplingVerdict::Undetermined { .. } => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantBundle {
    pub k0: DimensionGroupRank2,
    pub h1: LimitGroup,
    pub parity: Parity,
    pub coupling: CouplingVerdict,
    pub generic: bool,
    pub matroid_type: bool,
    /// Set when some ∞-set was enumerated only below this bound.
    pub prime_bound: Option<u64>,
}

/// The four step sequences `p, q, r, δ` in a form where their tails can be
/// reasoned about symbolically.
pub(crate) enum TailSeqs {
    Periodic(Vec<StepData<BigInt>>),
    Poly { p: Polynomial, q: Polynomial, r: Polynomial, delta: Polynomial },
}

pub(crate) struct Sequences {
    /// Step data for steps `1..tail_start`.
    pub pre: Vec<StepData<BigInt>>,
    pub tail: TailSeqs,
    pub poly_start: Option<BigInt>,
}

fn has_tail_zero(poly: &Polynomial, start: Option<&BigInt>) -> bool {
    let Some(start) = start else { return false };
    let bound = poly.root_bound();
    let mut k = start.clone();
    while k <= bound {
        if poly.eval(&k).is_zero() {
            return true;
        }
        k += 1;
    }
    false
}

#[derive(Clone, Copy)]
pub(crate) enum Channel {
    P,
    Q,
    R,
    Delta,
}

impl Sequences {
    pub fn of(sys: &SystemSpec) -> Result<Self, LimitError> {
        let data = |s: &crate::cycle::Signature<BigInt>| s.step_data().map_err(LimitError::from);
        let start = sys.tail_start();
        let pre = sys.prefix[..start - 1].iter().map(data).collect::<Result<_, _>>()?;
        let tail = match &sys.tail {
            Tail::None => return Err(LimitError::TailNone),
            Tail::Periodic(_) => TailSeqs::Periodic(sys.prefix[start - 1..].iter().map(data).collect::<Result<_, _>>()?),
            Tail::Polynomial { polys, .. } => {
                let [p1, p2, p3, p4] = polys;
                TailSeqs::Poly {
                    p: p1.add(p2).add(p3).add(p4),
                    q: p1.add(p4).sub(&p2.add(p3)),
                    r: p1.add(p2).sub(&p3.add(p4)),
                    delta: p1.sub(p2).add(p3).sub(p4),
                }
            }
        };
        let poly_start = match &sys.tail {
            Tail::Polynomial { start, .. } => Some(start.clone()),
            _ => None,
        };
        Ok(Sequences { pre, tail, poly_start })
    }

    fn pick(d: &StepData<BigInt>, c: Channel) -> BigInt {
        match c {
            Channel::P => d.triple.p.clone(),
            Channel::Q => d.triple.q.clone(),
            Channel::R => d.triple.r.clone(),
            Channel::Delta => d.delta.clone(),
        }
    }

    fn poly(&self, c: Channel) -> Option<&Polynomial> {
        match (&self.tail, c) {
            (TailSeqs::Poly { p, .. }, Channel::P) => Some(p),
            (TailSeqs::Poly { q, .. }, Channel::Q) => Some(q),
            (TailSeqs::Poly { r, .. }, Channel::R) => Some(r),
            (TailSeqs::Poly { delta, .. }, Channel::Delta) => Some(delta),
            _ => None,
        }
    }

    /// `lim(Z, ×|m_k|)` for the chosen channel.
    pub fn limit_group(&self, c: Channel, prime_bound: u64) -> Result<LimitGroup, LimitError> {
        let pre: Vec<BigInt> = self.pre.iter().map(|d| Self::pick(d, c)).collect();
        let mut s = SupernaturalNumber::one();
        match &self.tail {
            TailSeqs::Periodic(period) => {
                let vals: Vec<BigInt> = period.iter().map(|d| Self::pick(d, c)).collect();
                if vals.iter().any(Zero::is_zero) {
                    return Ok(LimitGroup::Zero);
                }
                for v in &vals {
                    for p in super::supernatural::factorize(v)?.into_keys() {
                        s.set_infinite(p);
                    }
                }
            }
            TailSeqs::Poly { .. } => {
                let poly = self.poly(c).expect("polynomial tail");
                if poly.is_zero() {
                    return Ok(LimitGroup::Zero);
                }
                if poly.degree() == Some(0) {
                    for p in super::supernatural::factorize(&poly.leading())?.into_keys() {
                        s.set_infinite(p);
                    }
                } else {
                    for p in num_prime::nt_funcs::primes(prime_bound) {
                        if poly.has_root_mod(p) {
                            s.set_infinite(p);
                        }
                    }
                    s.set_truncation(prime_bound);
                }
            }
        }
        // Only stages after the last zero contribute finite exponents. A zero
        // inside a polynomial tail discards the whole prefix.
        let tail_zero = match (&self.tail, self.poly(c)) {
            (TailSeqs::Poly { .. }, Some(poly)) => has_tail_zero(poly, self.poly_start.as_ref()),
            _ => false,
        };
        let after_zero = if tail_zero { pre.len() } else { pre.iter().rposition(Zero::is_zero).map_or(0, |i| i + 1) };
        for v in &pre[after_zero..] {
            s = s.mul(&SupernaturalNumber::of_integer(v)?);
        }
        Ok(LimitGroup::Cyclic(s))
    }

    pub fn parity(&self) -> Parity {
        let odd = |v: &BigInt| v.is_odd();
        let all_odd = match &self.tail {
            TailSeqs::Periodic(period) => period.iter().all(|d| odd(&d.triple.p)),
            TailSeqs::Poly { p, .. } => odd(&p.eval(&BigInt::zero())) && odd(&p.eval(&BigInt::one())),
        };
        if all_odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

pub fn limit_invariants(sys: &SystemSpec, horizon: usize) -> Result<InvariantBundle, LimitError> {
    limit_invariants_with(sys, horizon, DEFAULT_PRIME_BOUND)
}

pub fn limit_invariants_with(sys: &SystemSpec, horizon: usize, prime_bound: u64) -> Result<InvariantBundle, LimitError> {
    check_horizon(sys, horizon)?;
    let seqs = Sequences::of(sys)?;
    let p = seqs.limit_group(Channel::P, prime_bound)?;
    let q = seqs.limit_group(Channel::Q, prime_bound)?;
    let r = seqs.limit_group(Channel::R, prime_bound)?;
    let h1 = seqs.limit_group(Channel::Delta, prime_bound)?;
    let parity = seqs.parity();
    let odd = parity == Parity::Odd;
    let [n1, n2, n3, n4] = sys.initial.dims().clone();
    let half = |x: BigInt| BigRational::new(x, BigInt::from(2));
    let unit_coords = Some([
        (half(&n1 + &n2), half(&n1 - &n2)),
        (half(&n3 + &n4), half(&n3 - &n4)),
    ]);
    let k0 = DimensionGroupRank2 {
        kind: K0Kind::build(&p, &q, odd),
        sink_kind: K0Kind::build(&p, &r, odd),
        unital: true,
        unit_coords,
    };
    let prime_bound_used = [&p, &q, &r, &h1].iter().find_map(|g| match g {
        LimitGroup::Cyclic(s) => s.truncated_below(),
        LimitGroup::Zero => None,
    });
    Ok(InvariantBundle {
        k0,
        h1,
        parity,
        coupling: coupling(sys, horizon)?,
        generic: is_generic_system(sys),
        matroid_type: q.is_zero() && r.is_zero(),
        prime_bound: prime_bound_used,
    })
}

fn check_horizon(sys: &SystemSpec, horizon: usize) -> Result<(), LimitError> {
    if !sys.has_infinite_tail() {
        return Err(LimitError::TailNone);
    }
    if horizon < sys.prefix.len() {
        return Err(LimitError::HorizonBeforePrefix { horizon, prefix: sys.prefix.len() });
    }
    Ok(())
}

/// Infinitely many generic steps.
pub fn is_generic_system(sys: &SystemSpec) -> bool {
    match &sys.tail {
        Tail::Periodic(m) => sys.prefix[sys.prefix.len() - m..].iter().any(|s| s.is_generic()),
        Tail::Polynomial { polys, .. } => polys.iter().all(|p| !p.is_zero()),
        Tail::None => false,
    }
}

fn ratio(d: &StepData<BigInt>) -> BigRational {
    BigRational::new(d.delta.abs(), d.triple.p.clone())
}

/// Round down to a multiple of `2^-96` to keep certificate arithmetic small.
fn floor_dyadic(x: &BigRational) -> BigRational {
    let scale = BigInt::one() << 96u32;
    let n = (x.numer() * &scale).div_floor(x.denom());
    BigRational::new(n, scale)
}

pub fn coupling(sys: &SystemSpec, horizon: usize) -> Result<CouplingVerdict, LimitError> {
    check_horizon(sys, horizon)?;
    let seqs = Sequences::of(sys)?;
    let zero = |reason: &str| Ok(CouplingVerdict::Zero { reason: reason.to_string() });
    match &seqs.tail {
        TailSeqs::Periodic(period) => {
            if period.iter().any(|d| d.delta.is_zero()) {
                return zero("δ vanishes on every period");
            }
            if period.iter().any(|d| d.delta.abs() < d.triple.p) {
                return zero("|δ|/p < 1 recurs periodically, so the tail product decays geometrically");
            }
            // every tail factor is 1: the value is the finite product after the last zero
            let from = seqs.pre.iter().rposition(|d| d.delta.is_zero()).map_or(0, |i| i + 1);
            let value = seqs.pre[from..].iter().fold(BigRational::one(), |acc, d| acc * ratio(d));
            Ok(CouplingVerdict::Positive {
                lower_bound: value.clone(),
                partial_product: value,
                from_stage: from + 1,
                to_stage: horizon,
                exact: true,
            })
        }
        TailSeqs::Poly { p, delta, .. } => {
            if delta.is_zero() {
                return zero("δ is identically zero on the tail");
            }
            let sign = BigInt::from(if delta.leading().is_negative() { -1 } else { 1 });
            let e = p.sub(&delta.scale(&sign));
            let dp = p.degree().expect("multiplicity polynomial is nonzero");
            if let Some(de) = e.degree() {
                if de + 1 >= dp {
                    return zero("Σ (1 − |δ|/p) diverges: deg(p − |δ|) ≥ deg p − 1");
                }
            }
            certify_poly(sys, &seqs, p, delta, &e, horizon)
        }
    }
}

fn certify_poly(
    sys: &SystemSpec,
    seqs: &Sequences,
    p: &Polynomial,
    delta: &Polynomial,
    e: &Polynomial,
    horizon: usize,
) -> Result<CouplingVerdict, LimitError> {
    let tail_start = sys.tail_start();
    let k_of = |n: usize| sys.poly_k(n).expect("tail stage");
    // Stages whose δ vanishes: prefix zeros and tail k up to the sign-settling bound.
    let delta_bound = delta.root_bound();
    let mut last_zero = seqs.pre.iter().rposition(|d| d.delta.is_zero()).map(|i| i + 1).unwrap_or(0);
    let mut n = tail_start;
    while k_of(n) <= delta_bound {
        if delta.eval(&k_of(n)).is_zero() {
            last_zero = n;
        }
        n += 1;
    }
    let from = last_zero + 1;
    let step_ratio = |n: usize| -> BigRational {
        if n < tail_start {
            ratio(&seqs.pre[n - 1])
        } else {
            let k = k_of(n);
            BigRational::new(delta.eval(&k).abs(), p.eval(&k))
        }
    };
    let partial_product = (from..=horizon).fold(BigRational::one(), |acc, n| acc * step_ratio(n));

    if e.is_zero() {
        // |δ| = p once the sign of δ settles: the product is a finite one.
        let mut settle = tail_start;
        while k_of(settle) <= delta_bound {
            settle += 1;
        }
        let end = settle.max(horizon);
        let value = (from..=end).fold(BigRational::one(), |acc, n| acc * step_ratio(n));
        return Ok(CouplingVerdict::Positive {
            lower_bound: value,
            partial_product,
            from_stage: from,
            to_stage: horizon,
            exact: true,
        });
    }

    // For k ≥ K: p(k) ≥ lead·k^d / 2 and e(k) ≤ E·k^(d−2), so e/p ≤ C/k² and the
    // tail beyond k_H loses at most Σ C/k² ≤ C/k_H.
    let lead = p.leading();
    let d = p.degree().expect("nonzero");
    let s_low: BigInt = p.coeffs()[..d].iter().map(|c| c.abs()).sum();
    let big_k = (BigInt::from(2) * s_low).div_ceil(&lead).max(BigInt::one());
    let c = BigRational::new(BigInt::from(2) * e.abs_coeff_sum(), lead);
    // walking on until C/k_H ≤ 1/64 keeps the tail correction small
    let c_target = &c * BigInt::from(64);
    let need = |k: &BigInt| -> bool {
        *k >= big_k && *k > delta_bound && BigRational::from_integer(k.clone()) >= c_target
    };

    let mut lb = partial_product.clone();
    let mut last = horizon.max(from.saturating_sub(1));
    let cap = horizon + COUPLING_EXTENSION_CAP;
    while last < tail_start || !need(&k_of(last)) {
        if last >= cap {
            return Ok(CouplingVerdict::Undetermined { horizon });
        }
        last += 1;
        if last >= from {
            lb = floor_dyadic(&(lb * step_ratio(last)));
        }
    }
    let k_h = BigRational::from_integer(k_of(last));
    let lower_bound = floor_dyadic(&(lb * (BigRational::one() - c / k_h)));
    debug_assert!(lower_bound.is_positive());
    Ok(CouplingVerdict::Positive { lower_bound, partial_product, from_stage: from, to_stage: horizon, exact: false })
}
