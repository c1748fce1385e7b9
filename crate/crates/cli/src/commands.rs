use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Value};

use cyclehom_core::cycle::{joint_scale_stage, K0Matrix, Signature};
use cyclehom_core::homology::{digraph_complex, digraph_homology, Convention, Digraph};
use cyclehom_core::limits::hr::sign_failures;
use cyclehom_core::limits::{
    compare_systems, gen_hr_asymmetric, gen_standard_index2, gen_stationary, homology_inversion_obstructed, hr_check as
    run_hr_check, intermediate_lattice, limit_invariants, out_group, parse_system, verify_witness, Comparison,
    OutGroupDescriptor, Reason, Side, SystemSpec,
};
use cyclehom_core::numeric::samplers::{
    verify_equirank, verify_lemma_6_2, verify_lemma_6_5, verify_rigid_recovery, verify_upper_rank, Lemma62Config,
    Lemma62Witness, Lemma65Config, Lemma65Witness, SamplerStatus,
};
use cyclehom_core::numeric::verify_irregular_factorization;

use crate::enc;
use crate::{ExampleKind, Lemma, Metadata, Outcome};

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_system(path: &Path) -> Result<SystemSpec, String> {
    parse_system(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_int(s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("`{s}` is not an integer"))
}

fn ok(inputs: Value, results: Value, metadata: Metadata) -> Outcome {
    Outcome { inputs, results, metadata, passed: true }
}

fn horizon_meta(h: usize) -> Metadata {
    Metadata { horizon: Some(h), ..Metadata::none() }
}

pub fn invariants(file: &Path, horizon: usize) -> Result<Outcome, String> {
    let sys = load_system(file)?;
    let inv = limit_invariants(&sys, horizon).map_err(|e| e.to_string())?;
    Ok(ok(
        json!({ "file": file.display().to_string(), "system": enc::system(&sys) }),
        enc::invariants(&inv),
        horizon_meta(horizon),
    ))
}

pub fn homrange(entries: [&String; 4]) -> Result<Outcome, String> {
    let [a, b, c, d] = entries.map(|s| parse_int(s));
    let m = K0Matrix::new(a?, b?, c?, d?).map_err(|e| e.to_string())?;
    let r = m.homology_range().map_err(|e| e.to_string())?;
    let t = m.triple();
    let values: Vec<Value> = r.values().iter().map(enc::int).collect();
    Ok(ok(
        enc::k0_matrix(&m),
        json!({
            "p": enc::int(&t.p),
            "q": enc::int(&t.q),
            "r": enc::int(&t.r),
            "range": values,
            "low": enc::int(&r.low),
            "high": enc::int(&r.high),
            "contains_zero": r.contains_zero(),
            "sign": r.sign(),
            "sign_flipped": r.sign_flipped,
        }),
        Metadata::none(),
    ))
}

fn parse_signature(v: &[String]) -> Result<Signature<BigInt>, String> {
    let r: Vec<BigInt> = v.iter().map(|s| parse_int(s)).collect::<Result<_, _>>()?;
    Signature::new([r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()]).map_err(|e| e.to_string())
}

pub fn compose(values: &[String]) -> Result<Outcome, String> {
    let outer = parse_signature(&values[..4])?;
    let inner = parse_signature(&values[4..])?;
    let c = Signature::compose(&outer, &inner);
    let k0 = c.k0();
    let multiplicative = k0 == outer.k0().mul(&inner.k0()) && c.h1() == outer.h1() * inner.h1();
    Ok(ok(
        json!({ "outer": enc::signature(&outer), "inner": enc::signature(&inner) }),
        json!({
            "signature": enc::signature(&c),
            "k0": enc::k0_matrix(&k0),
            "h1": enc::int(&c.h1()),
            "multiplicity": enc::int(&c.multiplicity()),
            "generic": c.is_generic(),
            "functorial": multiplicative,
        }),
        Metadata::none(),
    ))
}

pub fn jointscale(file: &Path, stage: usize) -> Result<Outcome, String> {
    let sys = load_system(file)?;
    let shapes = sys.shapes(stage);
    let shape = shapes.get(stage).ok_or_else(|| format!("system `{}` has no stage {stage}", sys.name))?;
    let elems = joint_scale_stage(shape).map_err(|e| e.to_string())?;
    let list: Vec<Value> = elems
        .iter()
        .map(|e| json!({ "k0": e.k0part.iter().map(enc::int).collect::<Vec<_>>(), "delta": enc::int(&e.delta) }))
        .collect();
    Ok(ok(
        json!({ "file": file.display().to_string(), "stage": stage }),
        json!({
            "shape": shape.dims().iter().map(enc::int).collect::<Vec<_>>(),
            "count": list.len(),
            "elements": list,
        }),
        Metadata::none(),
    ))
}

fn side(s: Side) -> &'static str {
    match s {
        Side::A => "A",
        Side::B => "B",
    }
}

pub fn compare(a: &Path, b: &Path, horizon: usize) -> Result<Outcome, String> {
    let sa = load_system(a)?;
    let sb = load_system(b)?;
    let c = compare_systems(&sa, &sb, horizon).map_err(|e| e.to_string())?;
    let mut results = json!({ "verdict": c.class() });
    match &c {
        Comparison::Isomorphic(w) => {
            let steps: Vec<Value> = w
                .iter()
                .map(|x| {
                    json!({
                        "from": side(x.from),
                        "from_stage": x.from_stage,
                        "to_stage": x.to_stage,
                        "signature": enc::signature(&x.signature),
                    })
                })
                .collect();
            results["witness"] = Value::Array(steps);
            results["witness_verified"] = json!(verify_witness(&sa, &sb, w));
        }
        Comparison::Distinguished(r) => {
            results["reason"] = match r {
                Reason::K0(detail) => json!({ "invariant": "k0", "detail": detail }),
                Reason::Parity => json!({ "invariant": "parity" }),
                Reason::H1 { a, b } => json!({ "invariant": "h1", "a": a, "b": b }),
                Reason::Coupling { a, b } => json!({ "invariant": "coupling", "a": a, "b": b }),
            }
        }
        Comparison::Unknown { horizon } => results["searched_horizon"] = json!(horizon),
        Comparison::NotApplicable(why) => results["reason"] = json!(why),
    }
    Ok(ok(
        json!({ "file_a": a.display().to_string(), "file_b": b.display().to_string() }),
        results,
        horizon_meta(horizon),
    ))
}

pub fn hr_check(file: &Path, horizon: usize) -> Result<Outcome, String> {
    let sys = load_system(file)?;
    let rep = run_hr_check(&sys, horizon).map_err(|e| e.to_string())?;
    let ranges: Vec<Value> = rep
        .ranges
        .iter()
        .map(|c| {
            json!({
                "i": c.i,
                "j": c.j,
                "p": enc::int(&c.p),
                "q": enc::int(&c.q),
                "r": enc::int(&c.r),
                "low": enc::int(&c.low),
                "high": enc::int(&c.high),
                "sign": c.sign,
                "contains_zero": c.contains_zero,
            })
        })
        .collect();
    let growth = rep.growth.as_ref().map(|g| {
        g.iter()
            .map(|c| {
                json!({
                    "k": c.k,
                    "n": enc::int(&c.n),
                    "lhs": enc::rational(&c.lhs),
                    "rhs": enc::rational(&c.rhs),
                    "holds": c.holds,
                })
            })
            .collect::<Vec<_>>()
    });
    let obstructed = homology_inversion_obstructed(&sys, horizon).ok();
    let failures: Vec<Value> = sign_failures(&rep).iter().map(|(i, j)| json!([i, j])).collect();
    Ok(ok(
        json!({ "file": file.display().to_string(), "system": enc::system(&sys) }),
        json!({
            "horizon": rep.horizon,
            "asymmetric": rep.asymmetric,
            "inversion_obstructed": obstructed,
            "sign_failures": failures,
            "growth": growth,
            "ranges": ranges,
        }),
        horizon_meta(horizon),
    ))
}

pub fn outgroup(file: &Path, horizon: usize) -> Result<Outcome, String> {
    let sys = load_system(file)?;
    let g = out_group(&sys, horizon).map_err(|e| e.to_string())?;
    let detail = match &g {
        OutGroupDescriptor::Z2 => json!({ "kind": "z2" }),
        OutGroupDescriptor::AutOfH1 { generators, truncated_below } => {
            json!({ "kind": "aut_h1", "generators": generators, "truncated_below": truncated_below })
        }
        OutGroupDescriptor::NotApplicable(why) => json!({ "kind": "not_applicable", "reason": why }),
    };
    Ok(ok(
        json!({ "file": file.display().to_string() }),
        json!({ "group": detail, "description": g.describe() }),
        horizon_meta(horizon),
    ))
}

fn edges_1based(g: &Digraph) -> Vec<[usize; 2]> {
    g.edges().iter().filter(|(i, j)| i != j).map(|&(i, j)| [i + 1, j + 1]).collect()
}

pub fn lattice() -> Outcome {
    let l = intermediate_lattice();
    let nodes: Vec<Value> = l
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            json!({
                "label": n.label,
                "edges": edges_1based(&n.digraph),
                "covers": n.covers,
                "star": l.nodes[l.star(i)].label,
            })
        })
        .collect();
    let label = |i: Option<usize>| i.map(|i| l.nodes[i].label);
    let hasse: Vec<Value> = l.hasse_edges().iter().map(|(a, b)| json!([a, b])).collect();
    ok(
        json!({}),
        json!({
            "count": l.len(),
            "bottom": label(l.minimum()),
            "top": label(l.maximum()),
            "star_is_order_automorphism": l.star_is_order_automorphism(),
            "self_adjoint": l.self_adjoint(),
            "hasse_edges": hasse,
            "nodes": nodes,
        }),
        Metadata::none(),
    )
}

pub fn homology(file: &Path, dim: Option<usize>, full: bool) -> Result<Outcome, String> {
    let g = Digraph::parse(&read(file)?).map_err(|e| format!("{}: {e}", file.display()))?;
    let conv = if full { Convention::Full } else { Convention::Reduced };
    let complex = digraph_complex(&g, conv).map_err(|e| e.to_string())?;
    let top = dim.unwrap_or_else(|| complex.dimension().unwrap_or(0));
    let mut groups = Vec::new();
    for n in 0..=top {
        let h = digraph_homology::<i64>(&g, n, conv).map_err(|e| e.to_string())?;
        groups.push(json!({ "dim": n, "betti": h.betti, "torsion": h.torsion }));
    }
    let simplices: Vec<usize> = (0..=complex.dimension().unwrap_or(0)).map(|d| complex.count(d)).collect();
    Ok(ok(
        json!({
            "file": file.display().to_string(),
            "vertices": g.vertex_count(),
            "convention": if full { "full" } else { "reduced" },
        }),
        json!({ "simplex_counts": simplices, "homology": groups }),
        Metadata::none(),
    ))
}

fn lemma62_witness(w: &Lemma62Witness) -> Value {
    json!({
        "trial": w.trial,
        "adversarial": w.adversarial,
        "corner_rows": w.corner_rows,
        "corner_cols": w.corner_cols,
        "eta": enc::real(w.eta),
        "delta": enc::real(w.delta),
        "distance": enc::real(w.distance),
        "ratio": enc::real(w.ratio),
        "matrix": enc::matrix(&w.matrix),
    })
}

fn lemma65_witness(w: &Lemma65Witness) -> Value {
    json!({
        "trial": w.trial,
        "epsilon": enc::real(w.epsilon),
        "e1_minus_e3": enc::real(w.e1_minus_e3),
        "e2_minus_e4": enc::real(w.e2_minus_e4),
        "ratio": enc::real(w.ratio),
        "projections": w.projections.iter().map(enc::matrix).collect::<Vec<_>>(),
    })
}

pub fn verify(lemma: Lemma, samples: Option<usize>, seed: Option<u64>, tols: [f64; 3]) -> Result<Outcome, String> {
    let [validation, rigidity, margin] = tols;
    if tols.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err("tolerances must be finite and nonnegative".into());
    }
    if samples == Some(0) {
        return Err("--samples must be at least 1".into());
    }
    let meta = |seed: Option<u64>| Metadata { horizon: None, tolerances: Some(tols), seed };
    let name = lemma_name(lemma);
    let (results, passed, seed, samples) = match lemma {
        Lemma::BlockCorner => {
            let cfg = Lemma62Config { samples: samples.unwrap_or(10_000), seed: seed.unwrap_or(42), margin, ..Default::default() };
            let r = verify_lemma_6_2(&cfg);
            let v = json!({
                "samples": r.samples,
                "adversarial": r.adversarial,
                "violations": r.violations,
                "max_ratio": enc::real(r.max_ratio),
                "max_delta": enc::real(r.max_delta),
                "worst": r.worst.as_ref().map(lemma62_witness),
                "witnesses": r.witnesses.iter().map(lemma62_witness).collect::<Vec<_>>(),
                "passed": r.passed(),
            });
            (v, r.passed(), Some(cfg.seed), Some(cfg.samples))
        }
        Lemma::Projections => {
            let cfg = Lemma65Config { samples: samples.unwrap_or(10_000), seed: seed.unwrap_or(7), margin, ..Default::default() };
            let r = verify_lemma_6_5(&cfg);
            let status = match r.status {
                SamplerStatus::Complete => json!({ "kind": "complete" }),
                SamplerStatus::Underpowered { accepted } => json!({ "kind": "underpowered", "accepted": accepted }),
            };
            let v = json!({
                "samples": r.samples,
                "status": status,
                "accepted": r.accepted,
                "draws": r.draws,
                "violations": r.violations,
                "max_ratio": enc::real(r.max_ratio),
                "max_epsilon": enc::real(r.max_epsilon),
                "worst": r.worst.as_ref().map(lemma65_witness),
                "witnesses": r.witnesses.iter().map(lemma65_witness).collect::<Vec<_>>(),
                "passed": r.passed(),
            });
            (v, r.passed(), Some(cfg.seed), Some(cfg.samples))
        }
        Lemma::Factorization => {
            let r = verify_irregular_factorization(validation, rigidity);
            let v = json!({
                "phi_valid": r.phi_valid,
                "phi_residuals": r.phi_residuals.iter().map(|&x| enc::real(x)).collect::<Vec<_>>(),
                "locally_regular_phi": r.locally_regular_phi,
                "composite_valid": r.composite_valid,
                "composite_rigid": r.composite_rigid,
                "composite_signature": r.composite_signature.as_ref().map(|s| s.components().to_vec()),
                "composite_h1": r.composite_h1,
                "composite_max_block_distance": enc::real(r.composite_max_block_distance),
                "v1": enc::matrix(&r.v1),
                "v1_rank": r.v1_rank,
                "passed": r.passed,
            });
            (v, r.passed, None, None)
        }
        Lemma::UpperRank => {
            let (n, s) = (samples.unwrap_or(10_000), seed.unwrap_or(1));
            let r = verify_upper_rank(n, s, 8);
            let witnesses: Vec<Value> = r
                .witnesses
                .iter()
                .map(|w| {
                    json!({
                        "trial": w.trial,
                        "rank": w.rank,
                        "recovered": w.recovered,
                        "partial_isometry": enc::matrix(&w.partial_isometry),
                        "perturbation": enc::matrix(&w.perturbation),
                    })
                })
                .collect();
            let v = json!({
                "samples": r.samples,
                "failures": r.failures,
                "max_perturbation": enc::real(r.max_perturbation),
                "witnesses": witnesses,
                "passed": r.passed(),
            });
            (v, r.passed(), Some(s), Some(n))
        }
        Lemma::RigidRecovery => {
            let (n, s) = (samples.unwrap_or(1_000), seed.unwrap_or(1));
            let r = verify_rigid_recovery(n, s, 6, rigidity.min(1e-8));
            let passed = r.failures == 0;
            let v = json!({
                "samples": r.samples,
                "failures": r.failures,
                "failed_signatures": r.failed_signatures,
                "passed": passed,
            });
            (v, passed, Some(s), Some(n))
        }
        Lemma::Equirank => {
            let (n, s) = (samples.unwrap_or(1_000), seed.unwrap_or(1));
            let r = verify_equirank(n, s);
            let passed = r.counterexamples.is_empty();
            let ce: Vec<Value> = r.counterexamples.iter().map(|(a, b)| json!({ "row_dims": a, "col_dims": b })).collect();
            let v = json!({ "samples": r.samples, "qualifying": r.qualifying, "counterexamples": ce, "passed": passed });
            (v, passed, Some(s), Some(n))
        }
    };
    Ok(Outcome { inputs: json!({ "lemma": name, "samples": samples }), results, metadata: meta(seed), passed })
}

fn lemma_name(l: Lemma) -> &'static str {
    match l {
        Lemma::BlockCorner => "6.2",
        Lemma::Projections => "6.5",
        Lemma::Factorization => "factorization",
        Lemma::UpperRank => "upper-rank",
        Lemma::RigidRecovery => "rigid-recovery",
        Lemma::Equirank => "equirank",
    }
}

pub fn examples(kind: ExampleKind, count: usize, factors: Option<Vec<u64>>, out: Option<&Path>) -> Result<Outcome, String> {
    let write = |text: &str| -> Result<(), String> {
        match out {
            Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
            None => Ok(()),
        }
    };
    let (inputs, results) = match kind {
        ExampleKind::Stationary | ExampleKind::HrAsymmetric => {
            let (name, sys) = match kind {
                ExampleKind::Stationary => ("stationary", gen_stationary()),
                _ => ("hr-asymmetric", gen_hr_asymmetric(count)),
            };
            let text = sys.to_text();
            write(&text)?;
            let count = (kind == ExampleKind::HrAsymmetric).then_some(count);
            (json!({ "kind": name, "count": count }), json!({ "system": enc::system(&sys), "text": text }))
        }
        ExampleKind::StandardIndex2 => {
            if out.is_some() {
                return Err("the index-2 chain is not a 4-cycle system and has no system file".into());
            }
            let factors = factors.unwrap_or_else(|| vec![2; count]);
            let stages = gen_standard_index2(&factors).map_err(|e| e.to_string())?;
            let list: Vec<Value> = stages
                .iter()
                .map(|s| {
                    json!({
                        "stage": s.stage,
                        "dims": s.dims.iter().map(enc::int).collect::<Vec<_>>(),
                        "multiplicity": s.multiplicity.iter().map(|r| r.iter().map(enc::int).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "diagonal_masa": s.diagonal_masa,
                    })
                })
                .collect();
            (json!({ "kind": "standard-index2", "factors": factors }), json!({ "stages": list }))
        }
    };
    Ok(ok(inputs, results, Metadata::none()))
}
