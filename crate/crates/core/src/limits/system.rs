use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Polynomial;
use super::LimitError;
use crate::cycle::{image_shape, FourCycleShape, Signature};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Repeat the last `m` listed steps forever.
    Periodic(usize),
    /// Step `len + 1 + j` is the signature of these polynomials at `k = start + j`.
    Polynomial { polys: [Polynomial; 4], start: BigInt },
    None,
}

/// A unital direct system presented by explicit steps and a tail rule.
/// Stage dimensions grow without bound, so the scalar is fixed to `BigInt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SystemSpec {
    pub name: String,
    pub initial: FourCycleShape<BigInt>,
    pub prefix: Vec<Signature<BigInt>>,
    pub tail: Tail,
}

impl SystemSpec {
    pub fn new(
        name: impl Into<String>,
        initial: FourCycleShape<BigInt>,
        prefix: Vec<Signature<BigInt>>,
        tail: Tail,
    ) -> Result<Self, LimitError> {
        let s = SystemSpec { name: name.into(), initial, prefix, tail };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<(), LimitError> {
        for (i, sig) in self.prefix.iter().enumerate() {
            if sig.multiplicity().is_zero() {
                return Err(LimitError::FitViolation { step: i + 1 });
            }
        }
        match &self.tail {
            Tail::Periodic(m) if *m == 0 || *m > self.prefix.len() => {
                Err(LimitError::BadPeriod { period: *m, steps: self.prefix.len() })
            }
            Tail::Polynomial { polys, start } => {
                for (component, p) in polys.iter().enumerate() {
                    if let Some(k) = negative_witness(p, start) {
                        return Err(LimitError::NegativeValue { component: component + 1, k: k.to_string() });
                    }
                }
                let rho = polys.iter().fold(Polynomial::default(), |acc, p| acc.add(p));
                if let Some(k) = zero_witness(&rho, start) {
                    let offset = (k - start).to_usize().unwrap_or(usize::MAX);
                    return Err(LimitError::FitViolation { step: self.prefix.len() + 1 + offset });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn has_infinite_tail(&self) -> bool {
        !matches!(self.tail, Tail::None)
    }

    /// First step index (1-based) governed by the tail rule.
    pub fn tail_start(&self) -> usize {
        match self.tail {
            Tail::Periodic(m) => self.prefix.len() - m + 1,
            _ => self.prefix.len() + 1,
        }
    }

    /// Value of `k` used at step `n` of a polynomial tail.
    pub fn poly_k(&self, n: usize) -> Option<BigInt> {
        match &self.tail {
            Tail::Polynomial { start, .. } if n > self.prefix.len() => {
                Some(start + BigInt::from(n - self.prefix.len() - 1))
            }
            _ => None,
        }
    }

    /// Step `n`, 1-based; `None` past the end of a finite system.
    pub fn step(&self, n: usize) -> Option<Signature<BigInt>> {
        assert!(n >= 1, "steps are 1-based");
        let len = self.prefix.len();
        if n <= len {
            return Some(self.prefix[n - 1].clone());
        }
        match &self.tail {
            Tail::Periodic(m) => Some(self.prefix[len - m + (n - len - 1) % m].clone()),
            Tail::Polynomial { polys, .. } => {
                let k = self.poly_k(n).expect("polynomial tail");
                let r = std::array::from_fn(|i| polys[i].eval(&k));
                Some(Signature::new(r).expect("nonnegativity checked at construction"))
            }
            Tail::None => None,
        }
    }

    /// Steps `1..=horizon`, truncated for finite systems.
    pub fn steps(&self, horizon: usize) -> Vec<Signature<BigInt>> {
        (1..=horizon).map_while(|n| self.step(n)).collect()
    }

    /// Shapes of stages `0..=horizon` under unital steps.
    pub fn shapes(&self, horizon: usize) -> Vec<FourCycleShape<BigInt>> {
        let mut out = vec![self.initial.clone()];
        for s in self.steps(horizon) {
            let next = image_shape(&s, out.last().expect("nonempty")).expect("steps have positive multiplicity");
            out.push(next);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, LimitError> {
        parse_system(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("version 1\n");
        writeln!(out, "name {}", self.name).unwrap();
        let [a, b, c, d] = self.initial.dims();
        writeln!(out, "initial {a} {b} {c} {d}").unwrap();
        for s in &self.prefix {
            let [a, b, c, d] = s.components();
            writeln!(out, "step {a} {b} {c} {d}").unwrap();
        }
        match &self.tail {
            Tail::Periodic(m) => writeln!(out, "tail periodic {m}").unwrap(),
            Tail::Polynomial { polys, start } => {
                let ps: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
                writeln!(out, "tail poly {} from {start}", ps.join(";")).unwrap()
            }
            Tail::None => writeln!(out, "tail none").unwrap(),
        }
        out
    }
}

/// Least `k ≥ start` with `p(k) < 0`, if any.
fn negative_witness(p: &Polynomial, start: &BigInt) -> Option<BigInt> {
    scan(p, start, |v| v.is_negative())
}

/// Least `k ≥ start` with `p(k) = 0`, if any.
fn zero_witness(p: &Polynomial, start: &BigInt) -> Option<BigInt> {
    if p.is_zero() {
        return Some(start.clone());
    }
    scan(p, start, |v| v.is_zero())
}

/// Past the Cauchy bound the sign is that of the leading coefficient, so
/// scanning `start..=max(start, bound)` plus one point settles the question.
fn scan(p: &Polynomial, start: &BigInt, bad: impl Fn(&BigInt) -> bool) -> Option<BigInt> {
    let bound = p.root_bound();
    let end = if &bound > start { bound } else { start.clone() } + BigInt::one();
    let mut k = start.clone();
    while k <= end {
        if bad(&p.eval(&k)) {
            return Some(k);
        }
        k += 1;
    }
    None
}

pub fn parse_system(text: &str) -> Result<SystemSpec, LimitError> {
    let mut version = false;
    let mut name = None;
    let mut initial = None;
    let mut prefix = Vec::new();
    let mut tail = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| LimitError::Syntax { line: line_no, message };
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        if !version {
            if key == "version" && rest == "1" {
                version = true;
                continue;
            }
            return Err(err("first line must be `version 1`".into()));
        }
        if tail.is_some() {
            return Err(err("nothing may follow the tail line".into()));
        }
        match key {
            "name" if name.is_none() && !rest.is_empty() => name = Some(rest.to_string()),
            "name" => return Err(err("name must be given once and be nonempty".into())),
            "initial" if initial.is_none() => {
                let dims = four_ints(rest).map_err(err)?;
                let shape = FourCycleShape::new(dims).map_err(|e| LimitError::Syntax { line: line_no, message: e.to_string() })?;
                initial = Some(shape);
            }
            "initial" => return Err(err("initial given twice".into())),
            "step" => {
                let r = four_ints(rest).map_err(err)?;
                let sig = Signature::new(r).map_err(|e| LimitError::Syntax { line: line_no, message: e.to_string() })?;
                prefix.push(sig);
            }
            "tail" => tail = Some(parse_tail(rest).map_err(err)?),
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let missing = |what: &str| LimitError::Syntax { line: text.lines().count().max(1), message: format!("missing {what}") };
    if !version {
        return Err(missing("`version 1`"));
    }
    let name = name.ok_or_else(|| missing("name"))?;
    let initial = initial.ok_or_else(|| missing("initial"))?;
    let tail = tail.ok_or_else(|| missing("tail"))?;
    SystemSpec::new(name, initial, prefix, tail)
}

fn four_ints(s: &str) -> Result<[BigInt; 4], String> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(format!("expected 4 integers, found {}", parts.len()));
    }
    let mut out: [BigInt; 4] = Default::default();
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| format!("`{p}` is not an integer"))?;
    }
    Ok(out)
}

fn parse_tail(s: &str) -> Result<Tail, String> {
    let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    let rest = rest.trim();
    match kind {
        "none" if rest.is_empty() => Ok(Tail::None),
        "periodic" => rest.parse::<usize>().map(Tail::Periodic).map_err(|_| format!("bad period `{rest}`")),
        "poly" => {
            let (body, start) = rest.rsplit_once(" from ").ok_or("expected `from <k0>`")?;
            let start: BigInt = start.trim().parse().map_err(|_| format!("bad start `{}`", start.trim()))?;
            let parts: Vec<&str> = body.split(';').collect();
            if parts.len() != 4 {
                return Err(format!("expected 4 polynomials separated by `;`, found {}", parts.len()));
            }
            let mut polys: [Polynomial; 4] = Default::default();
            for (i, (slot, p)) in polys.iter_mut().zip(parts).enumerate() {
                *slot = Polynomial::parse(p).map_err(|e| format!("polynomial {}: {e}", i + 1))?;
            }
            Ok(Tail::Polynomial { polys, start })
        }
        _ => Err(format!("unknown tail `{s}`")),
    }
}
