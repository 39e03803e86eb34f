use super::*;
use crate::formalmod::near_canonical_sample;
use num_rational::Ratio;
use proptest::prelude::*;

fn tower22() -> TowerModel {
    build_tower(2, 2, None, None).unwrap()
}

fn r(n: i64, d: i64) -> ExactRational {
    ExactRational::new(n, d)
}

#[test]
fn canonical_model_for_q2_h2() {
    let t = tower22();
    let m = t.model();
    assert_eq!(m.e(), 12);
    assert_eq!(m.pi().valuation(), Some(12));
    assert_eq!(m.level1()[0].normalized_valuation(m.e()), Some(Ratio::new(1, 3)));
    let lhs = m.delta().pow(1);
    assert_eq!(lhs.sub(m.pi()).valuation(), None, "Delta^(q-1) = pi for q = 2, h even");
    assert!(t.invariants().values().all(|&ok| ok), "{:?}", t.invariants());
}

#[test]
fn thresholds_are_exact() {
    assert_eq!(level1_threshold(2, 2), r(5, 3));
    assert_eq!(level1_threshold(2, 3), r(9, 7));
    assert_eq!(level1_threshold(3, 2), r(19, 8));
    assert_eq!(w_threshold(2, 2), r(7, 3));
    assert_eq!(epsilon_threshold(2, 2), r(1, 3));
    assert_eq!(epsilon_threshold(3, 2), r(5, 4));
}

#[test]
fn zero_deformation_gives_zero_y_and_exact_d() {
    let t = tower22();
    let m = t.model();
    let s = sample_point(&t, vec![m.zero()], TieBreak::Least).unwrap();
    for (r, x) in s.x.iter().enumerate() {
        assert_eq!(x, &m.level1()[r]);
        assert!(level1_approximation(&t, &s.v, r).sub(x).is_zero_to_precision());
    }
    let rep = verify_sample(&t, "canonical", &s).unwrap();
    assert!(rep.pass);
    for j in 0..m.h() {
        let rec = w_y_functions(&t, &s, j).unwrap();
        assert!(rec.yz.is_zero_to_precision());
        assert_eq!(rec.big_w, rec.small_w);
    }
    assert!(rep.y_sum.reduced_y.iter().all(|&d| d == 0));
}

#[test]
fn multiplication_is_a_ring_homomorphism() {
    for (q, h) in [(2, 2), (2, 3), (3, 2)] {
        let t = build_tower(q, h, None, None).unwrap();
        let f = t.model().residue();
        let z = t.zeta_power(0);
        let z2 = f.mul(z, z);
        let lhs = t.digit_matmul(&t.multiplication_matrix(z).unwrap(), &t.multiplication_matrix(z).unwrap());
        assert_eq!(lhs, t.multiplication_matrix(z2).unwrap());
    }
}

#[test]
fn scalars_in_k_act_diagonally() {
    let t = build_tower(3, 2, None, None).unwrap();
    let f = t.model().residue();
    let two = f.add(Fe::ONE, Fe::ONE);
    let m = t.multiplication_matrix(two).unwrap();
    for (i, row) in m.iter().enumerate() {
        for (j, &(m0, m1)) in row.iter().enumerate() {
            assert_eq!(m1, Fe::ZERO);
            assert_eq!(m0, if i == j { two } else { Fe::ZERO });
        }
    }
}

#[test]
fn level2_cross_check_on_near_canonical_points() {
    let t = tower22();
    let m = t.model();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = 0;
    for _ in 0..6 {
        let s = sample_point(&t, near_canonical_sample(m, &mut rng), TieBreak::Least).unwrap();
        let Some(_) = s.y else { continue };
        seen += 1;
        let lt = m.lubin_tate();
        for j in 0..m.h() {
            let wa = w_from_level2(&t, &s, j).unwrap();
            let rhs = bordered_w_determinant(&t, &s, j);
            assert!(lt.eval(&wa).sub(&rhs).is_zero_to_precision());
            let rec = w_y_functions(&t, &s, j).unwrap();
            assert!(lt.eval(&wa.sub(&rec.big_w)).is_zero_to_precision());
        }
        assert_eq!(verify_sample(&t, "near", &s).unwrap().level2_cross_check, Some(true));
    }
    assert!(seen > 0);
}

#[test]
fn w_at_one_is_mu2_of_canonical_points() {
    let t = tower22();
    assert_eq!(t.invariants().get("w(1) = mu_2(x^(2))"), Some(&true));
}

#[test]
fn report_for_q2_h2_passes_with_pinned_valuations() {
    let rep = verify_congruences(2, 2, 3, None, None, 11, TieBreak::Least).unwrap();
    assert!(rep.all_pass);
    assert_eq!(rep.samples.len(), 4);
    for s in &rep.samples[1..] {
        for c in &s.level1 {
            assert!(c.achieved.valuation >= r(5, 3));
        }
        assert!(s.y_sum.on_hypersurface_artin_schreier);
    }
}

#[test]
fn choice_of_roots_changes_y_by_a_constant_in_k() {
    let t = build_tower(2, 3, None, None).unwrap();
    let m = t.model();
    let base = m.base_elements();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut compared = 0;
    for _ in 0..40 {
        let v = integral_sample(&t, &mut rng);
        let (Ok(a), Ok(b)) = (
            sample_point(&t, v.clone(), TieBreak::Least),
            sample_point(&t, v, TieBreak::Greatest),
        ) else {
            continue;
        };
        let (Ok(ra), Ok(rb)) = (verify_sample(&t, "a", &a), verify_sample(&t, "b", &b)) else {
            continue;
        };
        assert_eq!(ra.pass, rb.pass);
        for j in 0..m.h() {
            let ya = w_y_functions(&t, &a, j).unwrap().yz;
            let yb = w_y_functions(&t, &b, j).unwrap().yz;
            let d = ya.sub(&yb);
            let c = d.coeff(0);
            assert!(base.contains(&c));
            assert!(d.sub(&m.constant(c)).is_zero_to_precision());
        }
        compared += 1;
        if compared == 3 {
            break;
        }
    }
    assert!(compared > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn integral_samples_meet_every_threshold(seed in any::<u64>()) {
        let t = tower22();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = integral_sample(&t, &mut rng);
        let s = sample_point(&t, v, TieBreak::Least).unwrap();
        match verify_sample(&t, "p", &s) {
            Ok(rep) => prop_assert!(rep.pass),
            Err(Error::ResidueUnsolvable { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}
