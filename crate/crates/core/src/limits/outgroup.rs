use super::invariants::{limit_invariants, CouplingVerdict, LimitGroup, Parity};
use super::system::SystemSpec;
use super::LimitError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutGroupDescriptor {
    Z2,
    /// `{±1} × Z^(generators)`: the automorphisms of a rank-one group are
    /// multiplications by units of the ring it is a module over.
    AutOfH1 { generators: Vec<u64>, truncated_below: Option<u64> },
    NotApplicable(String),
}

impl OutGroupDescriptor {
    pub fn describe(&self) -> String {
        match self {
            OutGroupDescriptor::Z2 => "Z2".into(),
            OutGroupDescriptor::AutOfH1 { generators, truncated_below } => {
                let gens: Vec<String> = generators.iter().map(u64::to_string).collect();
                let mut s = format!("{{±1}} × free abelian on primes [{}]", gens.join(", "));
                if let Some(b) = truncated_below {
                    s.push_str(&format!(" (primes below {b})"));
                }
                s
            }
            OutGroupDescriptor::NotApplicable(r) => format!("not applicable: {r}"),
        }
    }
}

pub fn out_group(sys: &SystemSpec, horizon: usize) -> Result<OutGroupDescriptor, LimitError> {
    let na = |r: &str| Ok(OutGroupDescriptor::NotApplicable(r.to_string()));
    if !sys.has_infinite_tail() {
        return na("system has no infinite tail");
    }
    let inv = limit_invariants(sys, horizon.max(sys.prefix.len()))?;
    if !inv.generic {
        return na("system is not generic");
    }
    if !inv.matroid_type {
        return na("system is not of matroid type");
    }
    if inv.parity != Parity::Even {
        return na("system is not even");
    }
    let h1 = match &inv.h1 {
        LimitGroup::Zero => return na("H1 = 0 case is open"),
        LimitGroup::Cyclic(s) => s,
    };
    Ok(match inv.coupling {
        CouplingVerdict::Positive { .. } => OutGroupDescriptor::Z2,
        CouplingVerdict::Zero { .. } => OutGroupDescriptor::AutOfH1 {
            generators: h1.infinite_primes().iter().copied().collect(),
            truncated_below: h1.truncated_below(),
        },
        CouplingVerdict::Undetermined { horizon } => {
            OutGroupDescriptor::NotApplicable(format!("coupling undetermined at horizon {horizon}"))
        }
    })
}
