use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LimitError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

/// Formal product of prime powers with exponents in `{0, 1, ..., ∞}`.
///
/// Canonical: primes in `infinite` never appear in `finite`, and `finite`
/// holds no zero exponents. When the ∞-set comes from an infinite family
/// (a polynomial tail) it is only enumerated below `truncated_below`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SupernaturalNumber {
    finite: BTreeMap<u64, u32>,
    infinite: BTreeSet<u64>,
    truncated_below: Option<u64>,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        Self::default()
    }

    /// `prime^exp` for every entry; panics on composite keys.
    pub fn from_exponents(entries: impl IntoIterator<Item = (u64, Exponent)>) -> Self {
        let mut s = Self::one();
        for (p, e) in entries {
            assert!(num_prime::nt_funcs::is_prime64(p), "{p} is not prime");
            match e {
                Exponent::Infinite => s.set_infinite(p),
                Exponent::Finite(k) => s.mul_prime_power(p, k),
            }
        }
        s
    }

    pub fn infinite_power(primes: impl IntoIterator<Item = u64>) -> Self {
        Self::from_exponents(primes.into_iter().map(|p| (p, Exponent::Infinite)))
    }

    /// Factorization of a nonzero integer.
    pub fn of_integer(n: &BigInt) -> Result<Self, LimitError> {
        let mut s = Self::one();
        for (p, k) in factorize(n)? {
            s.mul_prime_power(p, k);
        }
        Ok(s)
    }

    pub fn mul_prime_power(&mut self, p: u64, k: u32) {
        if k == 0 || self.infinite.contains(&p) {
            return;
        }
        *self.finite.entry(p).or_insert(0) += k;
    }

    pub fn set_infinite(&mut self, p: u64) {
        self.finite.remove(&p);
        self.infinite.insert(p);
    }

    pub fn set_truncation(&mut self, bound: u64) {
        self.truncated_below = Some(self.truncated_below.map_or(bound, |b| b.min(bound)));
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &p in &other.infinite {
            out.set_infinite(p);
        }
        for (&p, &k) in &other.finite {
            out.mul_prime_power(p, k);
        }
        if let Some(b) = other.truncated_below {
            out.set_truncation(b);
        }
        out
    }

    pub fn exponent(&self, p: u64) -> Exponent {
        if self.infinite.contains(&p) {
            Exponent::Infinite
        } else {
            Exponent::Finite(self.finite.get(&p).copied().unwrap_or(0))
        }
    }

    pub fn infinite_primes(&self) -> &BTreeSet<u64> {
        &self.infinite
    }

    pub fn finite_part(&self) -> &BTreeMap<u64, u32> {
        &self.finite
    }

    pub fn truncated_below(&self) -> Option<u64> {
        self.truncated_below
    }

    pub fn is_one(&self) -> bool {
        self.finite.is_empty() && self.infinite.is_empty()
    }

    /// Isomorphism of the rank-one groups `Z[1/a]`-style subgroups of `Q`
    /// attached to the two numbers: equal ∞-sets, since finite exponents
    /// differ at finitely many primes and such differences are absorbed by
    /// multiplication with an integer. Truncated sets are compared below the
    /// smaller bound.
    pub fn subgroup_iso(&self, other: &Self) -> bool {
        let bound = match (self.truncated_below, other.truncated_below) {
            (None, None) => u64::MAX,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        let below = |s: &BTreeSet<u64>| s.range(..bound).copied().collect::<Vec<_>>();
        below(&self.infinite) == below(&other.infinite)
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            write!(f, "1")?;
        }
        let mut primes: Vec<u64> = self.finite.keys().chain(self.infinite.iter()).copied().collect();
        primes.sort_unstable();
        for (i, p) in primes.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            match self.exponent(*p) {
                Exponent::Infinite => write!(f, "{p}^∞")?,
                Exponent::Finite(1) => write!(f, "{p}")?,
                Exponent::Finite(k) => write!(f, "{p}^{k}")?,
            }
        }
        if let Some(b) = self.truncated_below {
            write!(f, " (∞-primes listed below {b})")?;
        }
        Ok(())
    }
}

/// Primes up to 10^6 are stripped by trial division before handing a
/// cofactor below 2^128 to the general factorizer.
const TRIAL_LIMIT: u64 = 1_000_000;

pub fn factorize(n: &BigInt) -> Result<BTreeMap<u64, u32>, LimitError> {
    if n.is_zero() {
        return Err(LimitError::FactorZero);
    }
    let mut rest = n.abs();
    let mut out = BTreeMap::new();
    if let Some(small) = rest.to_u128() {
        for (p, k) in num_prime::nt_funcs::factorize128(small) {
            let p = u64::try_from(p).map_err(|_| LimitError::FactorTooLarge(n.to_string()))?;
            out.insert(p, k as u32);
        }
        return Ok(out);
    }
    for p in num_prime::nt_funcs::primes(TRIAL_LIMIT) {
        let bp = BigInt::from(p);
        let mut k = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            k += 1;
        }
        if k > 0 {
            out.insert(p, k);
        }
        if rest.is_one() {
            return Ok(out);
        }
        if let Some(small) = rest.to_u128() {
            for (q, k) in num_prime::nt_funcs::factorize128(small) {
                let q = u64::try_from(q).map_err(|_| LimitError::FactorTooLarge(n.to_string()))?;
                *out.entry(q).or_insert(0) += k as u32;
            }
            return Ok(out);
        }
    }
    Err(LimitError::FactorTooLarge(n.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sn(finite: &[(u64, u32)], inf: &[u64]) -> SupernaturalNumber {
        let mut s = SupernaturalNumber::infinite_power(inf.iter().copied());
        for &(p, k) in finite {
            s.mul_prime_power(p, k);
        }
        s
    }

    #[test]
    fn iso_examples() {
        assert!(sn(&[(3, 1)], &[2]).subgroup_iso(&sn(&[(2, 1), (3, 1)], &[2])));
        assert!(!sn(&[], &[2]).subgroup_iso(&sn(&[], &[3])));
        let a = sn(&[(5, 2)], &[7]);
        assert!(a.subgroup_iso(&a));
    }

    #[test]
    fn canonical_form() {
        let s = sn(&[(2, 3)], &[2]);
        assert_eq!(s.exponent(2), Exponent::Infinite);
        assert!(s.finite_part().is_empty());
        assert_eq!(s.to_string(), "2^∞");
        assert_eq!(sn(&[(3, 2), (5, 1)], &[2]).to_string(), "2^∞·3^2·5");
    }

    #[test]
    fn factor_integers() {
        let s = SupernaturalNumber::of_integer(&BigInt::from(-360)).unwrap();
        assert_eq!(s.to_string(), "2^3·3^2·5");
        let big: BigInt = BigInt::from(2).pow(200) * BigInt::from(1_000_003u64);
        let f = factorize(&big).unwrap();
        assert_eq!(f[&2], 200);
        assert_eq!(f[&1_000_003], 1);
        assert!(factorize(&BigInt::zero()).is_err());
    }

    #[test]
    fn iso_is_equivalence_on_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let primes = [2u64, 3, 5, 7, 11];
        let corpus: Vec<SupernaturalNumber> = (0..100)
            .map(|_| {
                let inf: Vec<u64> = primes.iter().copied().filter(|_| rng.random_bool(0.3)).collect();
                let fin: Vec<(u64, u32)> = primes.iter().map(|&p| (p, rng.random_range(0..3))).collect();
                sn(&fin, &inf)
            })
            .collect();
        for a in &corpus {
            assert!(a.subgroup_iso(a));
            for b in &corpus {
                assert_eq!(a.subgroup_iso(b), b.subgroup_iso(a));
                for c in &corpus {
                    if a.subgroup_iso(b) && b.subgroup_iso(c) {
                        assert!(a.subgroup_iso(c));
                    }
                }
            }
        }
    }
}
