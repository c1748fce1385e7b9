use cyclehom_core::cycle::Signature;
use cyclehom_core::numeric::embedding::{compose_embeddings, BlockKind};
use cyclehom_core::numeric::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sig(r: [i64; 4]) -> Signature<i64> {
    Signature::from_i64(r).unwrap()
}

#[test]
fn dp_phi_factorization() {
    let phi = dp_example_phi::<f64>();
    assert!(phi.validate(1e-12).is_empty());
    assert!(!is_locally_regular(&phi, RIGIDITY_TOL));
    assert!(is_proper(&phi, 1e-9));
    assert!(is_norm_symmetric(&phi, 1e-12));
    let rep = verify_irregular_factorization(VALIDATION_TOL, RIGIDITY_TOL);
    assert!(rep.passed, "{rep:?}");
    assert_eq!(rep.composite_h1, 0);
    assert_eq!(rep.v1_rank, 1);
}

#[test]
fn rigid_embeddings_recover_signature() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [2, 1, 0, 3], [1, 1, 1, 1], [0, 2, 2, 0]] {
        let s = sig(r);
        let plain = rigid_embedding::<f64, ChaCha8Rng>(&s, None);
        assert!(plain.validate(1e-12).is_empty(), "{r:?}: {:?}", plain.validate(1e-12));
        assert_eq!(is_rigid_numeric(&plain, 1e-9), Some(s.clone()));
        let conj = rigid_embedding::<f64, _>(&s, Some(&mut rng));
        assert!(conj.validate(1e-10).is_empty());
        assert_eq!(is_rigid_numeric(&conj, 1e-8), Some(s.clone()));
        assert_eq!(conj.h1_rank_formula(), s.h1());
    }
}

#[test]
fn rigid_composition_matches_signature_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    // inner targets must be uniform, which holds for every rigid embedding
    for (a, b) in [([1, 1, 0, 0], [0, 1, 1, 0]), ([2, 0, 1, 0], [1, 0, 0, 1]), ([1, 1, 1, 1], [0, 0, 1, 1])] {
        let (s1, s2) = (sig(a), sig(b));
        let inner = rigid_embedding::<f64, _>(&s1, Some(&mut rng));
        let outer = rigid_embedding::<f64, _>(&s2, Some(&mut rng));
        let c = compose_embeddings(&inner, &outer).unwrap();
        assert!(c.validate(1e-9).is_empty());
        assert_eq!(is_rigid_numeric(&c, 1e-8), Some(Signature::compose(&s2, &s1)));
    }
}

#[test]
fn irregular_blocks_reported() {
    let phi = dp_example_phi::<f64>();
    let d = dist_to_partial_isometry(&phi.block(0, BlockKind::Alpha)).distance;
    assert!((d - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-12);
    assert_eq!(is_rigid_numeric(&phi, RIGIDITY_TOL), None);
}

#[test]
fn validation_failures() {
    let mut bad = dp_example_phi::<f64>();
    bad.unitaries[1] = bad.unitaries[1].clone() * num_complex::Complex::new(-1.0, 0.0);
    assert!(matches!(bad.validate(1e-9)[..], [Violation::CycleRelation { .. }]));
    bad.row_dims = [2, 1, 1, 1];
    assert!(matches!(bad.validate(1e-9)[..], [Violation::Dimensions(_)]));
    let mut nan = dp_example_phi::<f64>();
    nan.unitaries[0][(0, 0)].re = f64::NAN;
    assert!(matches!(nan.validate(1e-9)[..], [Violation::NonFinite { .. }]));
    let c = compose_embeddings(&rigid_embedding::<f64, ChaCha8Rng>(&sig([1, 0, 0, 0]), None), &dp_example_phi());
    assert!(c.is_ok());
    let skew = EmbeddingData::<f64> { row_dims: [1, 0, 0, 1], col_dims: [1, 0, 0, 1], ..rigid_embedding::<f64, ChaCha8Rng>(&sig([1, 0, 0, 0]), None) };
    assert!(skew.validate(1e-9).is_empty());
}

mod samplers {
    use cyclehom_core::numeric::samplers::*;

    #[test]
    fn lemma_6_2_small_run() {
        let r = verify_lemma_6_2(&Lemma62Config { samples: 500, ..Default::default() });
        assert!(r.passed(), "{:?}", r.witnesses.first());
        assert!(r.adversarial > 0);
        assert!(r.max_delta < 0.125);
        assert!(r.max_ratio <= 1.0);
    }

    #[test]
    fn lemma_6_5_small_run() {
        let r = verify_lemma_6_5(&Lemma65Config { samples: 500, ..Default::default() });
        assert!(r.passed(), "{:?}", r.status);
        assert_eq!(r.accepted, 500);
        assert!(r.max_epsilon <= 0.05);
    }

    #[test]
    fn lemma_6_5_underpowered() {
        let r = verify_lemma_6_5(&Lemma65Config { samples: 20, max_epsilon: 1e-300, ..Default::default() });
        assert!(matches!(r.status, SamplerStatus::Underpowered { .. }));
        assert!(!r.passed());
    }

    #[test]
    fn upper_rank_recovery() {
        let r = verify_upper_rank(1000, 3, 8);
        assert!(r.passed());
        assert!(r.max_perturbation <= 1.0 / 3.0 + 1e-12);
    }

    #[test]
    fn rigid_recovery() {
        let r = verify_rigid_recovery(200, 5, 6, 1e-8);
        assert_eq!(r.failures, 0, "{:?}", r.failed_signatures);
    }

    #[test]
    fn equirank() {
        let r = verify_equirank(200, 11);
        assert!(r.qualifying > 0);
        assert!(r.counterexamples.is_empty(), "{:?}", r.counterexamples);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let cfg = Lemma62Config { samples: 64, ..Default::default() };
        let a = verify_lemma_6_2(&cfg);
        let b = with_thread_cap(1, || verify_lemma_6_2(&cfg));
        let c = with_thread_cap(3, || verify_lemma_6_2(&cfg));
        assert_eq!(a, b);
        assert_eq!(b, c);
        let u = with_thread_cap(2, || verify_upper_rank(50, 9, 8));
        assert_eq!(u, verify_upper_rank(50, 9, 8));
    }
}
