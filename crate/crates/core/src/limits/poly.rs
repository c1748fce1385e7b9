use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Degree cap for polynomial tails.
pub const MAX_DEGREE: usize = 4;

/// Integer polynomial in `k`, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("unexpected {found} at column {col}")]
    Unexpected { found: String, col: usize },
    #[error("degree {0} exceeds the cap of {MAX_DEGREE}")]
    DegreeTooHigh(usize),
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn var() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, k: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * k + c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
        Self::new((0..n).map(|i| get(&self.coeffs, i) + get(&o.coeffs, i)).collect())
    }

    pub fn neg(&self) -> Self {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `Σ |c_i|` over all coefficients.
    pub fn abs_coeff_sum(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Every real root has absolute value below this (Cauchy).
    pub fn root_bound(&self) -> BigInt {
        let lead = self.leading().abs();
        if self.degree().unwrap_or(0) == 0 {
            return BigInt::zero();
        }
        let max_ratio = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c.abs() + &lead - 1) / &lead)
            .max()
            .unwrap_or_default();
        max_ratio + 1
    }

    pub fn has_root_mod(&self, p: u64) -> bool {
        let pb = BigInt::from(p);
        let red: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| (((c % &pb) + &pb) % &pb).to_u64().expect("reduced below p"))
            .collect();
        let p128 = p as u128;
        (0..p).any(|x| {
            let v = red.iter().rev().fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % p128);
            v == 0
        })
    }

    /// Recursive-descent parse over `k`, integers, `+ - * ^` and parentheses.
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        let mut p = Parser { chars: text.char_indices().collect(), pos: 0 };
        let poly = p.expr()?;
        p.skip_ws();
        if let Some(&(col, c)) = p.chars.get(p.pos) {
            return Err(PolyError::Unexpected { found: format!("'{c}'"), col: col + 1 });
        }
        match poly.degree() {
            Some(d) if d > MAX_DEGREE => Err(PolyError::DegreeTooHigh(d)),
            _ => Ok(poly),
        }
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn fail(&self) -> PolyError {
        match self.chars.get(self.pos) {
            Some(&(col, c)) => PolyError::Unexpected { found: format!("'{c}'"), col: col + 1 },
            None => PolyError::Unexpected {
                found: "end of input".into(),
                col: self.chars.last().map_or(1, |&(i, c)| i + c.len_utf8() + 1),
            },
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
            check_degree(&acc)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.integer()?.to_usize().filter(|&e| e <= MAX_DEGREE * 4).ok_or_else(|| self.fail())?;
        let mut out = Polynomial::constant(BigInt::one());
        for _ in 0..e {
            out = out.mul(&base);
            check_degree(&out)?;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some('k') => {
                self.pos += 1;
                Ok(Polynomial::var())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.fail());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(Polynomial::constant(self.integer()?)),
            _ => Err(self.fail()),
        }
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.fail());
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(s.parse().expect("ascii digits"))
    }
}

fn check_degree(p: &Polynomial) -> Result<(), PolyError> {
    // generous intermediate cap so that cancellations such as (k^3)^2 - k^6 still parse
    match p.degree() {
        Some(d) if d > MAX_DEGREE * 4 => Err(PolyError::DegreeTooHigh(d)),
        _ => Ok(()),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "k")?,
                _ => write!(f, "k^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn parses() {
        assert_eq!(p("k^2"), Polynomial::from_i64(&[0, 0, 1]));
        assert_eq!(p("1"), Polynomial::from_i64(&[1]));
        assert_eq!(p("2*k^2 - 3*k + 1"), Polynomial::from_i64(&[1, -3, 2]));
        assert_eq!(p("(k+1)^2 - k^2"), Polynomial::from_i64(&[1, 2]));
        assert_eq!(p("-k + 5"), Polynomial::from_i64(&[5, -1]));
        assert!(p("k - k").is_zero());
        assert!(matches!(Polynomial::parse("k^5"), Err(PolyError::DegreeTooHigh(5))));
        assert!(Polynomial::parse("2k").is_err());
        assert!(Polynomial::parse("k +").is_err());
        assert!(Polynomial::parse("x").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["k^2 + 3", "-k^4 + 2*k - 7", "0", "k", "5*k^3"] {
            let q = p(s);
            assert_eq!(p(&q.to_string()), q);
        }
    }

    #[test]
    fn eval_and_roots() {
        let q = p("k^2 + 1");
        assert_eq!(q.eval(&BigInt::from(3)), BigInt::from(10));
        assert!(q.has_root_mod(2));
        assert!(!q.has_root_mod(3));
        assert!(q.has_root_mod(5));
        assert!(p("6").has_root_mod(3));
        assert!(!p("6").has_root_mod(5));
    }

    #[test]
    fn cauchy_bound() {
        let q = p("k^2 - 10*k + 9");
        let b = q.root_bound();
        assert!(b > BigInt::from(9));
    }
}
