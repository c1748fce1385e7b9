//! JSON encodings of core values. Integers that can grow without bound are
//! emitted as exact JSON numbers.

use cyclehom_core::cycle::{K0Matrix, Signature};
use cyclehom_core::limits::{
    CouplingVerdict, DimensionGroupRank2, InvariantBundle, K0Kind, LimitGroup, Parity, SupernaturalNumber, SystemSpec,
    Tail,
};
use cyclehom_core::numeric::CMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Number, Value};

pub fn int(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integers are valid JSON numbers"))
}

pub fn real(x: f64) -> Value {
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn rational(q: &BigRational) -> Value {
    json!({
        "num": int(q.numer()),
        "den": int(q.denom()),
        "approx": real(q.to_f64().unwrap_or(f64::NAN)),
    })
}

pub fn signature(s: &Signature<BigInt>) -> Value {
    Value::Array(s.components().iter().map(int).collect())
}

pub fn k0_matrix(m: &K0Matrix<BigInt>) -> Value {
    json!({ "a": int(&m.a), "b": int(&m.b), "c": int(&m.c), "d": int(&m.d) })
}

pub fn supernatural(s: &SupernaturalNumber) -> Value {
    let finite: Vec<Value> = s.finite_part().iter().map(|(p, e)| json!([p, e])).collect();
    json!({
        "display": s.to_string(),
        "finite": finite,
        "infinite": s.infinite_primes().iter().collect::<Vec<_>>(),
        "truncated_below": s.truncated_below(),
    })
}

pub fn limit_group(g: &LimitGroup) -> Value {
    match g {
        LimitGroup::Zero => json!({ "kind": "zero" }),
        LimitGroup::Cyclic(s) => json!({ "kind": "cyclic", "type": supernatural(s) }),
    }
}

fn k0_kind(k: &K0Kind) -> Value {
    match k {
        K0Kind::Rank1 { p } => json!({ "rank": 1, "p": supernatural(p) }),
        K0Kind::Rank2 { p, q, odd_half_generator } => json!({
            "rank": 2,
            "p": supernatural(p),
            "q": supernatural(q),
            "odd_half_generator": odd_half_generator,
        }),
    }
}

fn dimension_group(k: &DimensionGroupRank2) -> Value {
    let unit = k.unit_coords.as_ref().map(|pairs| {
        pairs.iter().map(|(s, d)| json!({ "sum": rational(s), "difference": rational(d) })).collect::<Vec<_>>()
    });
    json!({
        "source": k0_kind(&k.kind),
        "sink": k0_kind(&k.sink_kind),
        "unital": k.unital,
        "unit_coords": unit,
    })
}

pub fn parity(p: Parity) -> &'static str {
    match p {
        Parity::Odd => "odd",
        Parity::Even => "even",
    }
}

pub fn coupling(c: &CouplingVerdict) -> Value {
    match c {
        CouplingVerdict::Zero { reason } => json!({ "verdict": "zero", "reason": reason }),
        CouplingVerdict::Positive { lower_bound, partial_product, from_stage, to_stage, exact } => json!({
            "verdict": "positive",
            "lower_bound": rational(lower_bound),
            "partial_product": rational(partial_product),
            "from_stage": from_stage,
            "to_stage": to_stage,
            "exact": exact,
        }),
        CouplingVerdict::Undetermined { horizon } => json!({ "verdict": "undetermined", "horizon": horizon }),
    }
}

pub fn invariants(b: &InvariantBundle) -> Value {
    json!({
        "k0": dimension_group(&b.k0),
        "h1": limit_group(&b.h1),
        "parity": parity(b.parity),
        "coupling": coupling(&b.coupling),
        "generic": b.generic,
        "matroid_type": b.matroid_type,
        "prime_bound": b.prime_bound,
    })
}

pub fn system(s: &SystemSpec) -> Value {
    let tail = match &s.tail {
        Tail::Periodic(m) => json!({ "kind": "periodic", "period": m }),
        Tail::Polynomial { polys, start } => json!({
            "kind": "polynomial",
            "polys": polys.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "start": int(start),
        }),
        Tail::None => json!({ "kind": "none" }),
    };
    json!({
        "name": s.name,
        "initial": s.initial.dims().iter().map(int).collect::<Vec<_>>(),
        "steps": s.prefix.iter().map(signature).collect::<Vec<_>>(),
        "tail": tail,
    })
}

/// `{rows, cols, re, im}` with row-major nested arrays.
pub fn matrix(m: &CMatrix<f64>) -> Value {
    let part = |f: fn(&num_complex::Complex<f64>) -> f64| -> Vec<Vec<Value>> {
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| real(f(&m[(i, j)]))).collect()).collect()
    };
    json!({ "rows": m.nrows(), "cols": m.ncols(), "re": part(|z| z.re), "im": part(|z| z.im) })
}
