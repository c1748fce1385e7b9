use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::invariants::{is_generic_system, limit_invariants, CouplingVerdict, InvariantBundle};
use super::system::SystemSpec;
use super::LimitError;
use crate::cycle::{FourCycleShape, Signature};

/// Default depth for the intertwining search.
pub const DEFAULT_HORIZON: usize = 12;

/// Search nodes visited before giving up with `Unknown`.
pub const SEARCH_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// One crossover map of an intertwining diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossover {
    pub from: Side,
    pub from_stage: usize,
    pub to_stage: usize,
    pub signature: Signature<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    K0(String),
    Parity,
    H1 { a: String, b: String },
    Coupling { a: String, b: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Crossovers alternate sides; each composite of two consecutive
    /// crossovers equals the connecting map of the system it returns to.
    Isomorphic(Vec<Crossover>),
    Distinguished(Reason),
    Unknown { horizon: usize },
    NotApplicable(String),
}

impl Comparison {
    pub fn class(&self) -> &'static str {
        match self {
            Comparison::Isomorphic(_) => "isomorphic",
            Comparison::Distinguished(_) => "distinguished",
            Comparison::Unknown { .. } => "unknown",
            Comparison::NotApplicable(_) => "not_applicable",
        }
    }
}

pub fn compare_systems(a: &SystemSpec, b: &SystemSpec, horizon: usize) -> Result<Comparison, LimitError> {
    for (tag, s) in [("first", a), ("second", b)] {
        if !s.has_infinite_tail() {
            return Ok(Comparison::NotApplicable(format!("{tag} system has no infinite tail")));
        }
        if !is_generic_system(s) {
            return Ok(Comparison::NotApplicable(format!("{tag} system is not generic")));
        }
    }
    let ha = limit_invariants(a, horizon.max(a.prefix.len()))?;
    let hb = limit_invariants(b, horizon.max(b.prefix.len()))?;
    if let Some(reason) = invariant_mismatch(&ha, &hb) {
        return Ok(Comparison::Distinguished(reason));
    }
    let forward = Search::new(a, b, horizon).run();
    let found = match forward {
        Some(w) => Some(w),
        // the relation is symmetric; a swapped search may succeed where this one did not
        None => Search::new(b, a, horizon).run().map(|w| {
            w.into_iter().map(|c| Crossover { from: c.from.other(), ..c }).collect()
        }),
    };
    Ok(match found {
        Some(w) => Comparison::Isomorphic(w),
        None => Comparison::Unknown { horizon },
    })
}

fn invariant_mismatch(a: &InvariantBundle, b: &InvariantBundle) -> Option<Reason> {
    if !a.k0.kind.iso(&b.k0.kind) {
        return Some(Reason::K0("source-pair dimension groups differ".into()));
    }
    if !a.k0.sink_kind.iso(&b.k0.sink_kind) {
        return Some(Reason::K0("sink-pair dimension groups differ".into()));
    }
    if a.parity != b.parity {
        return Some(Reason::Parity);
    }
    if !a.h1.iso(&b.h1) {
        return Some(Reason::H1 { a: h1_label(a), b: h1_label(b) });
    }
    let determined = |c: &CouplingVerdict| !matches!(c, CouplingVerdict::Undetermined { .. });
    if determined(&a.coupling) && determined(&b.coupling) && a.coupling.class() != b.coupling.class() {
        return Some(Reason::Coupling { a: a.coupling.class().into(), b: b.coupling.class().into() });
    }
    None
}

fn h1_label(b: &InvariantBundle) -> String {
    match &b.h1 {
        super::invariants::LimitGroup::Zero => "0".into(),
        super::invariants::LimitGroup::Cyclic(s) => s.to_string(),
    }
}

/// Characters `(ρ, q, r, δ)` of a signature; they multiply under composition.
type Chars = [BigInt; 4];

fn chars(s: &Signature<BigInt>) -> Chars {
    let t = s.k0().triple();
    [t.p, t.q, t.r, s.h1()]
}

fn from_chars(c: &Chars) -> Option<Signature<BigInt>> {
    let [rho, q, r, d] = c;
    let four = BigInt::from(4);
    let parts = [rho + q + r + d, rho - q + r - d, rho - q - r + d, rho + q - r - d];
    let mut out: [BigInt; 4] = Default::default();
    for (slot, v) in out.iter_mut().zip(parts) {
        let (quot, rem) = v.div_rem(&four);
        if !rem.is_zero() || quot.is_negative() {
            return None;
        }
        *slot = quot;
    }
    Signature::new(out).ok()
}

struct SideData {
    shapes: Vec<FourCycleShape<BigInt>>,
    /// Characters of steps `1..=horizon`.
    step_chars: Vec<Chars>,
}

impl SideData {
    fn new(s: &SystemSpec, horizon: usize) -> Self {
        SideData { shapes: s.shapes(horizon), step_chars: s.steps(horizon).iter().map(chars).collect() }
    }

    fn len(&self) -> usize {
        self.shapes.len()
    }

    /// Characters of the connecting map from stage `i` to stage `j`.
    fn connecting(&self, i: usize, j: usize) -> Chars {
        let one = || [BigInt::one(), BigInt::one(), BigInt::one(), BigInt::one()];
        self.step_chars[i..j].iter().fold(one(), |acc, c| std::array::from_fn(|k| &acc[k] * &c[k]))
    }
}

struct Search {
    data: [SideData; 2],
    budget: usize,
}

const FREE_CANDIDATES: [i64; 9] = [0, 1, -1, 2, -2, 3, -3, 4, -4];

impl Search {
    fn new(a: &SystemSpec, b: &SystemSpec, horizon: usize) -> Self {
        Search { data: [SideData::new(a, horizon), SideData::new(b, horizon)], budget: SEARCH_BUDGET }
    }

    fn idx(s: Side) -> usize {
        match s {
            Side::A => 0,
            Side::B => 1,
        }
    }

    fn run(&mut self) -> Option<Vec<Crossover>> {
        for start in 0..self.data[0].len() {
            let mut chain = Vec::new();
            if self.extend(Side::A, start, None, &mut chain, None) {
                return Some(chain);
            }
            if self.budget == 0 {
                break;
            }
        }
        None
    }

    /// Try to add a crossover out of `from` at `from_stage`. `prev` holds the
    /// previous crossover (its characters and source stage), which the new
    /// one must compose with to give a connecting map.
    fn extend(
        &mut self,
        from: Side,
        from_stage: usize,
        prev: Option<(&Chars, usize)>,
        chain: &mut Vec<Crossover>,
        last_target: Option<usize>,
    ) -> bool {
        let to = from.other();
        let first_target = match last_target {
            Some(t) => t + 1,
            None => 0,
        };
        if first_target >= self.data[Self::idx(to)].len() {
            return chain.len() >= 2;
        }
        for to_stage in first_target..self.data[Self::idx(to)].len() {
            if self.budget == 0 {
                return false;
            }
            self.budget -= 1;
            for c in self.candidates(from, from_stage, to, to_stage, prev) {
                let sig = from_chars(&c).expect("candidates are valid");
                chain.push(Crossover { from, from_stage, to_stage, signature: sig });
                if self.extend(to, to_stage, Some((&c, from_stage)), chain, Some(from_stage)) {
                    return true;
                }
                chain.pop();
                if self.budget == 0 {
                    return false;
                }
            }
        }
        false
    }

    fn candidates(&self, from: Side, fs: usize, to: Side, ts: usize, prev: Option<(&Chars, usize)>) -> Vec<Chars> {
        let src = self.data[Self::idx(from)].shapes[fs].dims();
        let dst = self.data[Self::idx(to)].shapes[ts].dims();
        // forced characters from commutation with the previous crossover
        let forced: Option<[Option<BigInt>; 4]> = match prev {
            None => Some([None, None, None, None]),
            Some((pc, ps)) => {
                let s = self.data[Self::idx(to)].connecting(ps, ts);
                let mut f: [Option<BigInt>; 4] = Default::default();
                let mut ok = true;
                for k in 0..4 {
                    if pc[k].is_zero() {
                        if !s[k].is_zero() {
                            ok = false;
                        }
                    } else {
                        let (quot, rem) = s[k].div_rem(&pc[k]);
                        if rem.is_zero() {
                            f[k] = Some(quot);
                        } else {
                            ok = false;
                        }
                    }
                }
                ok.then_some(f)
            }
        };
        let Some(forced) = forced else { return Vec::new() };
        // unital fit: sums scale by ρ, differences by q (sources) and r (sinks)
        let sum = |d: &[BigInt; 4], i: usize| &d[i] + &d[i + 1];
        let diff = |d: &[BigInt; 4], i: usize| &d[i] - &d[i + 1];
        let (rho, rem) = sum(dst, 0).div_rem(&sum(src, 0));
        if !rem.is_zero() || sum(dst, 2) != &rho * sum(src, 2) {
            return Vec::new();
        }
        let channel = |i: usize, f: &Option<BigInt>| -> Option<Vec<BigInt>> {
            let (ds, dd) = (diff(src, i), diff(dst, i));
            let from_dims = if ds.is_zero() {
                if !dd.is_zero() {
                    return None;
                }
                None
            } else {
                let (quot, rem) = dd.div_rem(&ds);
                if !rem.is_zero() {
                    return None;
                }
                Some(quot)
            };
            match (from_dims, f) {
                (Some(x), Some(y)) if &x != y => None,
                (Some(x), _) => Some(vec![x]),
                (None, Some(x)) => Some(vec![x.clone()]),
                (None, None) => Some(free_values(&rho)),
            }
        };
        if forced[0].as_ref().is_some_and(|f| f != &rho) {
            return Vec::new();
        }
        let (Some(qs), Some(rs)) = (channel(0, &forced[1]), channel(2, &forced[2])) else {
            return Vec::new();
        };
        let ds = match &forced[3] {
            Some(x) => vec![x.clone()],
            None => free_values(&rho),
        };
        let mut out = Vec::new();
        for q in &qs {
            for r in &rs {
                for d in &ds {
                    let c = [rho.clone(), q.clone(), r.clone(), d.clone()];
                    if from_chars(&c).is_some() {
                        out.push(c);
                    }
                }
            }
        }
        out
    }
}

fn free_values(rho: &BigInt) -> Vec<BigInt> {
    FREE_CANDIDATES.iter().map(|&v| BigInt::from(v)).filter(|v| v.abs() <= *rho).collect()
}

/// Check that consecutive crossovers compose to the connecting maps.
pub fn verify_witness(a: &SystemSpec, b: &SystemSpec, w: &[Crossover]) -> bool {
    let sys = |s: Side| match s {
        Side::A => a,
        Side::B => b,
    };
    let connecting = |s: &SystemSpec, i: usize, j: usize| -> Option<Signature<BigInt>> {
        let mut acc = Signature::from_i64([1, 0, 0, 0]).ok()?;
        for n in i + 1..=j {
            acc = Signature::compose(&s.step(n)?, &acc);
        }
        Some(acc)
    };
    for pair in w.windows(2) {
        let (g1, g2) = (&pair[0], &pair[1]);
        if g2.from != g1.from.other() || g2.from_stage != g1.to_stage || g2.to_stage <= g1.from_stage {
            return false;
        }
        let lhs = Signature::compose(&g2.signature, &g1.signature);
        match connecting(sys(g1.from), g1.from_stage, g2.to_stage) {
            Some(rhs) if rhs.k0() == lhs.k0() && rhs.h1() == lhs.h1() => {}
            _ => return false,
        }
    }
    w.iter().all(|c| {
        let (fs, ts) = (sys(c.from).shapes(c.from_stage), sys(c.from.other()).shapes(c.to_stage));
        crate::cycle::embedding_fits(&c.signature, &fs[c.from_stage], &ts[c.to_stage], true)
    })
}
