//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use common::{code, data, report, run};
use cyclehom_core::cycle::{is_rigid_type_matrix, K0Matrix, Signature};
use cyclehom_core::homology::{digraph_homology, smith_normal_form, Convention, Digraph, HomologyGroup, IntMatrix};
use cyclehom_core::limits::*;
use cyclehom_core::numeric::samplers::*;
use cyclehom_core::numeric::verify_irregular_factorization;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, secs: f64) -> Result<(), String> {
    ensure(t.as_secs_f64() < secs, format!("took {:.2} s, limit {secs} s", t.as_secs_f64()))
}

fn c1() -> Check {
    for n in [6i64, 10, 14] {
        let s = n.to_string();
        let t = Instant::now();
        let r = report(&["homrange", &s, "2", &s, "2"], 0);
        within(t.elapsed(), 1.0)?;
        let got: BTreeSet<i64> = r["results"]["range"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect();
        let want = BTreeSet::from([n + 2, n - 2, n - 6]);
        ensure(got == want, format!("n = {n}: {got:?}"))?;
    }
    Ok("n = 6, 10, 14".into())
}

fn c2() -> Check {
    let t = Instant::now();
    let mut count = 0;
    for a in 0..=12i64 {
        for b in 0..=12 {
            for c in 0..=12 {
                let d = a + b - c;
                if !(0..=12).contains(&d) {
                    continue;
                }
                let m = K0Matrix::<i64>::from_i64(a, b, c, d).map_err(|e| e.to_string())?;
                let brute: BTreeSet<i64> = m.signature_solutions().iter().map(|s| s.h1()).collect();
                let closed: BTreeSet<i64> = m.homology_range().map_err(|e| e.to_string())?.values().into_iter().collect();
                ensure(brute == closed, format!("({a},{b},{c},{d}): {brute:?} vs {closed:?}"))?;
                count += 1;
            }
        }
    }
    within(t.elapsed(), 30.0)?;
    Ok(format!("{count} matrices, zero mismatches"))
}

fn c3() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let draw = |rng: &mut ChaCha8Rng| {
        let r: [i64; 4] = std::array::from_fn(|_| rng.random_range(0..=40));
        Signature::<i64>::from_i64(r).unwrap()
    };
    let n = 100_000;
    for _ in 0..n {
        let (outer, inner) = (draw(&mut rng), draw(&mut rng));
        let comp = Signature::compose(&outer, &inner);
        ensure(comp.k0() == outer.k0().mul(&inner.k0()), format!("K0 of {outer} after {inner}"))?;
        ensure(comp.h1() == outer.h1() * inner.h1(), format!("H1 of {outer} after {inner}"))?;
    }
    within(t.elapsed(), 10.0)?;
    Ok(format!("{n} pairs, zero failures"))
}

fn c4() -> Check {
    let z = HomologyGroup::<i64> { betti: 1, torsion: vec![] };
    let zero = HomologyGroup::<i64> { betti: 0, torsion: vec![] };
    let d4 = Digraph::four_cycle();
    for conv in [Convention::Reduced, Convention::Full] {
        let h = |g: &Digraph, n| digraph_homology::<i64>(g, n, conv).map_err(|e| e.to_string());
        ensure(h(&d4, 1)? == z, "H1 of the 4-cycle")?;
        ensure(h(&d4, 2)? == zero, "H2 of the 4-cycle")?;
        for n in 1..=3 {
            let g = Digraph::four_cycle_tensor([n; 4]);
            ensure(h(&g, 1)? == z, format!("H1 after tensoring with M_{n}"))?;
        }
    }
    Ok("H1 = Z, H2 = 0; H1 = Z for n = 1, 2, 3".into())
}

fn c5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 10_000;
    for trial in 0..n {
        let (r, c) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let rows: Vec<Vec<BigInt>> =
            (0..r).map(|_| (0..c).map(|_| BigInt::from(rng.random_range(-20..=20))).collect()).collect();
        let a = IntMatrix::from_rows(rows);
        let f = smith_normal_form(&a);
        let fail = |what: &str| format!("trial {trial}: {what}");
        ensure(f.u.mul(&a).mul(&f.v) == f.s, fail("U·A·V ≠ S"))?;
        for (m, inv) in [(&f.u, &f.u_inv), (&f.v, &f.v_inv)] {
            ensure(m.determinant().abs().is_one(), fail("not unimodular"))?;
            ensure(m.mul(inv) == IntMatrix::identity(m.rows()), fail("inverse mismatch"))?;
        }
        for i in 0..r {
            for j in 0..c {
                ensure(i == j || f.s.get(i, j).is_zero(), fail("S not diagonal"))?;
            }
        }
        let d = f.invariant_factors();
        ensure(d.iter().all(|x| x.is_positive()), fail("nonpositive factor"))?;
        ensure(d.windows(2).all(|w| (&w[1] % &w[0]).is_zero()), fail("divisibility chain"))?;
        ensure((f.rank..r.min(c)).all(|i| f.s.get(i, i).is_zero()), fail("trailing diagonal"))?;
    }
    Ok(format!("{n} matrices"))
}

fn c6() -> Check {
    let t = Instant::now();
    let r = verify_irregular_factorization(1e-12, 1e-7);
    within(t.elapsed(), 1.0)?;
    ensure(r.phi_valid, format!("phi invalid, residuals {:?}", r.phi_residuals))?;
    ensure(!r.locally_regular_phi, "phi reported locally regular")?;
    ensure(r.composite_valid, "composite invalid")?;
    let sig = r.composite_signature.as_ref().ok_or("composite not rigid at 1e-7")?;
    ensure(r.composite_h1 == 0, format!("composite H1 = {}", r.composite_h1))?;
    ensure(r.composite_max_block_distance <= 1e-9, format!("block distance {:e}", r.composite_max_block_distance))?;
    Ok(format!("composite signature {sig}, H1 = 0, max block distance {:.1e}", r.composite_max_block_distance))
}

fn c7() -> Check {
    let t = Instant::now();
    let r = verify_lemma_6_2(&Lemma62Config::default());
    within(t.elapsed(), 60.0)?;
    ensure(r.samples == 10_000 && r.max_delta < 0.125, format!("{} samples, max δ {}", r.samples, r.max_delta))?;
    ensure(r.violations == 0, format!("{} violations, max ratio {}", r.violations, r.max_ratio))?;
    Ok(format!("10000 instances, max ratio {:.3}", r.max_ratio))
}

fn c8() -> Check {
    let t = Instant::now();
    let r = verify_lemma_6_5(&Lemma65Config::default());
    within(t.elapsed(), 60.0)?;
    ensure(r.status == SamplerStatus::Complete, format!("{:?}", r.status))?;
    ensure(r.accepted >= 10_000, format!("{} accepted", r.accepted))?;
    ensure(r.violations == 0, format!("{} violations, max ratio {}", r.violations, r.max_ratio))?;
    Ok(format!("{} accepted of {} draws, max ratio {:.3}", r.accepted, r.draws, r.max_ratio))
}

fn c9() -> Check {
    let t = Instant::now();
    let r = verify_upper_rank(10_000, 1, 8);
    within(t.elapsed(), 30.0)?;
    ensure(r.failures == 0, format!("{} failures", r.failures))?;
    ensure(r.max_perturbation <= 1.0 / 3.0, format!("‖e‖ reached {}", r.max_perturbation))?;
    Ok("10000 instances, exact recovery".into())
}

fn c10() -> Check {
    let t = Instant::now();
    for r in [[1, 1, 1, 1], [2, 2, 2, 2], [3, 1, 2, 1], [4, 2, 3, 2], [2, 4, 1, 4], [5, 1, 1, 3]] {
        let text = format!("version 1\nname p\ninitial 1 1 1 1\nstep {} {} {} {}\ntail periodic 1\n", r[0], r[1], r[2], r[3]);
        let sys = parse_system(&text).map_err(|e| e.to_string())?;
        let v = coupling(&sys, 8).map_err(|e| e.to_string())?;
        ensure(matches!(v, CouplingVerdict::Zero { .. }), format!("periodic {r:?}: {}", v.class()))?;
    }
    let sys = parse_system(&std::fs::read_to_string(data("kappa-positive.sys")).unwrap()).map_err(|e| e.to_string())?;
    let bound = match coupling(&sys, 10).map_err(|e| e.to_string())? {
        CouplingVerdict::Positive { lower_bound, .. } => lower_bound,
        v => return Err(format!("polynomial tail: {}", v.class())),
    };
    ensure(bound > BigRational::zero() && bound < BigRational::one(), format!("bound {bound}"))?;
    within(t.elapsed(), 1.0)?;
    Ok(format!("periodic tails zero; k²;1;1;1 positive, κ ≥ {:.6}", ratio_f64(&bound)))
}

fn ratio_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn load(name: &str) -> Result<SystemSpec, String> {
    parse_system(&std::fs::read_to_string(data(name)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn c11() -> Check {
    let t = Instant::now();
    let (a, b) = (load("stationary.sys")?, load("stationary-2222.sys")?);
    let w = match compare_systems(&a, &b, 12).map_err(|e| e.to_string())? {
        Comparison::Isomorphic(w) => w,
        c => return Err(format!("stationary pair: {}", c.class())),
    };
    ensure(verify_witness(&a, &b, &w), "witness does not intertwine")?;
    let (a, b) = (load("h1-3.sys")?, load("h1-5.sys")?);
    let ia = limit_invariants(&a, 12).map_err(|e| e.to_string())?;
    let ib = limit_invariants(&b, 12).map_err(|e| e.to_string())?;
    ensure(ia.k0.kind.iso(&ib.k0.kind) && ia.k0.sink_kind.iso(&ib.k0.sink_kind), "K0 invariants differ; the pair must match on K0")?;
    match compare_systems(&a, &b, 12).map_err(|e| e.to_string())? {
        Comparison::Distinguished(Reason::H1 { .. }) => {}
        c => return Err(format!("3^∞ vs 5^∞: {c:?}")),
    }
    within(t.elapsed(), 10.0)?;
    Ok(format!("isomorphic with {} crossovers; H1 distinguishes 3^∞ from 5^∞", w.len()))
}

/// `2(n − 2)/(n + 2) > running`.
fn growth_holds(n: &BigInt, running: &BigRational) -> bool {
    let two = BigInt::from(2);
    BigRational::new(&two * (n - &two), n + &two) > *running
}

fn c12() -> Check {
    let ns = hr_asymmetric_ns(2);
    ensure(ns == [BigInt::from(7), BigInt::from(39)], format!("n = {ns:?}"))?;
    let two = BigInt::from(2);
    let mut running = BigRational::one();
    for n in &ns {
        ensure(growth_holds(n, &running), format!("n = {n} violates the inequality"))?;
        let below = n - BigInt::one();
        ensure(below <= two || !growth_holds(&below, &running), format!("n = {n} is not minimal"))?;
        running *= BigRational::new(n + &two, n - &two);
    }
    let sys = gen_hr_asymmetric(2);
    let steps: Vec<_> = sys.prefix.iter().map(|s| s.k0()).collect();
    let want = [K0Matrix::from_i64(7, 2, 7, 2).unwrap(), K0Matrix::from_i64(39, 2, 39, 2).unwrap()];
    ensure(steps == want, "step K0 matrices")?;
    ensure(homology_inversion_obstructed(&sys, 6).map_err(|e| e.to_string())?, "inversion not obstructed at horizon 6")?;
    ensure(hr_check(&sys, 6).map_err(|e| e.to_string())?.asymmetric, "ranges not asymmetric")?;
    Ok("n = (7, 39), minimal; inversion obstructed at horizon 6".into())
}

fn c13() -> Check {
    let six_two: [[i64; 4]; 4] = [[6, 6, 0, 0], [2, 2, 0, 0], [0, 0, 6, 6], [0, 0, 2, 2]];
    ensure(!is_rigid_type_matrix(&six_two), "the 6/2 matrix was accepted")?;
    let mut count = 0;
    for r1 in 0..=6i64 {
        for r2 in 0..=6 {
            for r3 in 0..=6 {
                for r4 in 0..=6 {
                    let s = Signature::<i64>::from_i64([r1, r2, r3, r4]).unwrap();
                    ensure(is_rigid_type_matrix(&s.k0().to_matrix()), format!("{s} rejected"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("6/2 matrix rejected; {count} signature K0 matrices accepted"))
}

fn c14() -> Check {
    let l = intermediate_lattice();
    let n = l.len();
    ensure(n == 13, format!("{n} nodes"))?;
    let bottoms: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| l.leq(i, j))).collect();
    let tops: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| l.leq(j, i))).collect();
    ensure(bottoms.len() == 1 && tops.len() == 1, "top or bottom not unique")?;
    ensure(l.minimum() == Some(bottoms[0]) && l.maximum() == Some(tops[0]), "extrema disagree")?;
    ensure(l.star_is_order_automorphism(), "star is not an order automorphism")?;
    ensure((0..n).all(|i| l.star(l.star(i)) == i), "star is not an involution")?;
    Ok("13 nodes, unique extrema, star an order automorphism".into())
}

fn c15() -> Check {
    let lemmas = ["6.2", "6.5", "factorization", "upper-rank", "rigid-recovery", "equirank"];
    for lemma in lemmas {
        let args = ["verify", "--lemma", lemma, "--seed", "2024"];
        let first = run(&args);
        ensure(code(&first) == 0, format!("{lemma}: exit {}", code(&first)))?;
        for threads in ["1", "3"] {
            let again = std::process::Command::new(env!("CARGO_BIN_EXE_cyclehom"))
                .args(args)
                .env("CYCLEHOM_THREADS", threads)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(again.stdout == first.stdout, format!("{lemma}: output differs with {threads} threads"))?;
        }
        let v: serde_json::Value = serde_json::from_slice(&first.stdout).map_err(|e| e.to_string())?;
        ensure(v["results"]["passed"] == json!(true), format!("{lemma}: not passed"))?;
    }
    Ok(format!("{} verify subcommands byte-identical across runs", lemmas.len()))
}

fn main() {
    let criteria: [Criterion; 15] = [
        ("homology range of (n, 2, n, 2)", c1),
        ("closed-form range equals enumeration", c2),
        ("functoriality of K0 and H1", c3),
        ("clique-complex homology", c4),
        ("Smith normal form properties", c5),
        ("irregular factorization", c6),
        ("block-corner sampler", c7),
        ("projection-quadruple sampler", c8),
        ("upper rank recovery", c9),
        ("coupling verdicts", c10),
        ("classification dichotomy", c11),
        ("hr-asymmetric generator", c12),
        ("rigid-type matrix check", c13),
        ("intermediate lattice", c14),
        ("determinism of verify", c15),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
