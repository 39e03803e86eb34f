use super::*;
use crate::error::Error;
use crate::ffield::{make_field, Fe, Gf};
use crate::hypersurface::moore_generic;
use crate::ring::CommRing;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn random_series(f: &Arc<Gf>, start: i64, len: usize, prec: i64, rng: &mut ChaCha8Rng, unit: bool) -> TruncatedSeries {
    let mut c: Vec<Fe> = (0..len).map(|_| Fe(rng.gen_range(0..f.order()))).collect();
    if unit {
        c[0] = Fe(rng.gen_range(1..f.order()));
    }
    TruncatedSeries::from_coeffs(f, start, c, prec, prec)
}

#[test]
fn geometric_series_inverts_one_minus_t() {
    let f = make_field(3, 1).unwrap();
    let n = 40;
    let one_minus_t = TruncatedSeries::from_coeffs(&f, 0, vec![Fe::ONE, f.neg(Fe::ONE)], n, n);
    let geom = TruncatedSeries::from_coeffs(&f, 0, vec![Fe::ONE; n as usize], n, n);
    let prod = one_minus_t.mul(&geom);
    assert_eq!(prod, prod.one_like());
    assert_eq!(prod.precision(), n);
    assert_eq!(one_minus_t.inverse().unwrap(), geom);
}

#[test]
fn valuation_of_shifted_unit() {
    let f = make_field(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_series(&f, 0, 20, 20, &mut rng, true);
    assert_eq!(u.shift(3).valuation(), Some(3));
    assert_eq!(u.shift(3).normalized_valuation(12), Some(Ratio::new(1, 4)));
    let z = TruncatedSeries::zero(&f, 10);
    assert_eq!(z.valuation(), None);
    assert_eq!(z.valuation_bound(), 10);
}

#[test]
fn inverting_zero_is_an_error() {
    let f = make_field(2, 1).unwrap();
    let z = TruncatedSeries::zero(&f, 8);
    assert!(matches!(z.inverse(), Err(Error::NotInvertible(_))));
    assert!(matches!(
        z.require_precision(9, "probe"),
        Err(Error::PrecisionTooLow(_))
    ));
}

#[test]
fn frobenius_scales_degrees_and_precision() {
    let f = make_field(2, 2).unwrap();
    let g = f.generator();
    let s = TruncatedSeries::from_coeffs(&f, 1, vec![g, Fe::ONE], 5, 100);
    let s2 = s.frob(1);
    assert_eq!(s2.precision(), 10);
    assert_eq!(s2.coeff(2), f.pow(g, 2));
    assert_eq!(s2.coeff(4), Fe::ONE);
    assert_eq!(s2, s.mul(&s));
}

fn canonical(q: u32, h: u32) -> E2Model {
    E2Model::build(q, h, None, None).unwrap()
}

#[test]
fn model_2_2_bookkeeping() {
    let m = canonical(2, 2);
    assert_eq!(m.e(), 12);
    assert_eq!(m.precision(), 48);
    assert_eq!(m.pi().valuation(), Some(12));
    assert_eq!(m.level1()[0].valuation(), Some(4));
    assert_eq!(m.level1()[0].normalized_valuation(m.e()), Some(Ratio::new(1, 3)));
    assert_eq!(m.delta().normalized_valuation(m.e()), Some(Ratio::new(1, 1)));
}

#[test]
fn model_t_is_primitive_pi_squared_torsion() {
    for (q, h) in [(2, 2), (2, 3), (3, 2), (4, 2), (2, 1)] {
        let m = canonical(q, h);
        let t = m.t();
        let once = m.canonical().eval(&t);
        assert!(!once.is_zero_to_precision());
        assert!(m.canonical().eval(&once).is_zero_to_precision(), "({q},{h})");
        let lhs = m.delta().pow(q as u64 - 1);
        let rhs = m.pi().scale(m.sign(h % 2 == 1));
        assert_eq!(lhs, rhs, "({q},{h})");
        assert_eq!(m.pi().valuation(), Some(m.e()));
    }
}

#[test]
fn model_rejects_bad_parameters() {
    assert!(matches!(E2Model::build(2, 5, None, None), Err(Error::GuardExceeded { .. })));
    assert!(matches!(E2Model::build(2, 2, None, Some(3)), Err(Error::InvalidArgument(_))));
    assert!(matches!(E2Model::build(2, 2, Some(20), None), Err(Error::PrecisionTooLow(_))));
    assert!(matches!(E2Model::build(6, 2, None, None), Err(Error::InvalidArgument(_))));
}

#[test]
fn k_scalars_commute_with_pi() {
    let m = canonical(4, 2);
    let pi = m.canonical();
    for c in m.base_elements() {
        let zeta = AdditivePolynomial::scalar(m.constant(c), m.twist());
        assert_eq!(zeta.compose(pi), pi.compose(&zeta));
    }
}

#[test]
fn frobenius_module_squares_to_q_2h_power() {
    // [pi]_Sigma(X) = X^{q^h}
    let f = make_field(2, 4).unwrap();
    let z = TruncatedSeries::zero(&f, 30);
    let sigma = AdditivePolynomial::new(vec![z.clone(), z.clone(), z.one_like()], 1);
    let sq = sigma.compose(&sigma);
    assert_eq!(sq.q_degree(), 4);
    assert!(sq.coeffs()[..4].iter().all(|c| c.is_zero_to_precision()));
    assert_eq!(sq.coeffs()[4], z.one_like());
}

#[test]
fn make_univ_special_cases() {
    let m = canonical(3, 2);
    let pi = m.pi();
    let u0 = make_univ(pi, &[m.zero()], m.twist());
    assert_eq!(&u0, m.canonical());
    let h1 = make_univ(pi, &[], m.twist());
    assert_eq!(h1, lubin_tate(pi, 1, m.twist()));
    // h = 2: the Lubin-Tate sign is -1
    assert_eq!(m.lubin_tate().coeffs()[1], m.constant(m.sign(true)));
}

#[test]
fn make_univ_over_polynomials_has_the_variables_as_coefficients() {
    use crate::symbolic::{universe, MultiPoly};
    let f = make_field(2, 1).unwrap();
    let vars = universe(&["pi", "u1", "u2", "X"]);
    let v = |i| MultiPoly::var(&f, &vars, i);
    let p = make_univ(&v(0), &[v(1), v(2)], 1);
    let x = v(3);
    let expected = v(0).mul(&x).add(&v(1).mul(&x.pow(2))).add(&v(2).mul(&x.pow(4))).add(&x.pow(8));
    assert_eq!(p.eval(&x), expected);
}

#[test]
fn lift_returns_a_seed_that_is_already_a_root() {
    let m = canonical(2, 2);
    let zero = m.zero();
    for x in m.level1() {
        let l = additive_root_lift(m.canonical(), &zero, x, 1, TieBreak::Least).unwrap();
        assert_eq!(&l.root, x);
        assert_eq!(l.gain_valuation, None);
    }
    for (y, x) in m.level2().iter().zip(m.level1()) {
        let l = additive_root_lift(m.canonical(), x, y, 1, TieBreak::Least).unwrap();
        assert_eq!(&l.root, y);
    }
}

#[test]
fn lift_of_unit_deformation_gains_two_thirds() {
    let m = canonical(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let v = random_series(m.residue(), 0, 24, m.precision(), &mut rng, true);
        let module = m.deformed(&[v]).unwrap();
        let lifts = m.lift_level1(&module, TieBreak::Least).unwrap();
        for (l, x) in lifts.iter().zip(m.level1()) {
            assert_eq!(l.gain_valuation, Some(8));
            assert_eq!(l.root.sub(x).normalized_valuation(m.e()), Some(Ratio::new(2, 3)));
            assert!(module.eval(&l.root).is_zero_to_precision());
        }
    }
}

#[test]
fn lift_far_from_a_root_fails() {
    let m = canonical(2, 2);
    // t is not near any root of [pi]: the first correction is at t^1 itself
    let err = additive_root_lift(m.canonical(), &m.zero(), &m.t(), 1, TieBreak::Least).unwrap_err();
    assert!(matches!(err, Error::LiftFailed(_)));
}

#[test]
fn mu_n_small_cases() {
    let m = canonical(2, 3);
    let x = m.level1();
    assert_eq!(mu_n(x, 1, m.canonical()).unwrap(), moore_generic(x, m.twist()));
    let lt = m.lubin_tate();
    let d = m.delta().clone();
    assert_eq!(mu_n(std::slice::from_ref(&d), 2, lt).unwrap(), d);
    // the level-2 points are not pi-torsion
    assert!(matches!(mu_n(m.level2(), 1, m.canonical()), Err(Error::InvalidArgument(_))));
}

#[test]
fn mu_2_at_level_two_is_the_sum_over_slots() {
    let m = canonical(2, 2);
    let y = m.level2();
    let x = m.level1();
    let direct = mu_n(y, 2, m.canonical()).unwrap();
    let by_slots = (0..2).fold(m.zero(), |acc, i| {
        let mut args = x.to_vec();
        args[i] = y[i].clone();
        acc.add(&moore_generic(&args, m.twist()))
    });
    assert_eq!(direct, by_slots);
    assert_eq!(m.lubin_tate().eval(&direct), *m.delta());
}

#[test]
fn drinfeld_examples() {
    for (q, h) in [(2, 2), (2, 3), (3, 2)] {
        let m = canonical(q, h);
        let basis = DrinfeldBasis { level: 1, points: m.level1().to_vec(), module: m.canonical().clone() };
        assert!(drinfeld_check(&basis).unwrap(), "({q},{h}) level 1");
        let basis = DrinfeldBasis { level: 2, points: m.level2().to_vec(), module: m.canonical().clone() };
        assert!(drinfeld_check(&basis).unwrap(), "({q},{h}) level 2");
        let lt = DrinfeldBasis { level: 1, points: vec![m.delta().clone()], module: m.lubin_tate().clone() };
        assert!(drinfeld_check(&lt).unwrap(), "({q},{h}) LT");
    }
    let m = canonical(2, 2);
    let dup = vec![m.level1()[0].clone(), m.level1()[0].clone()];
    let basis = DrinfeldBasis { level: 1, points: dup, module: m.canonical().clone() };
    assert!(!drinfeld_check(&basis).unwrap());
    let short = DrinfeldBasis { level: 1, points: vec![m.level1()[0].clone()], module: m.canonical().clone() };
    assert!(!drinfeld_check(&short).unwrap());
}

#[test]
fn formal_module_canonical_and_samples_pass() {
    let r = verify_formal_module(2, 2, 5, None, None, 42).unwrap();
    assert!(r.all_pass);
    assert_eq!(r.samples.len(), 6);
    let canon = &r.samples[0];
    assert!(canon.level1_gain.iter().all(|g| g.is_none()));
    for s in &r.samples[1..] {
        assert!(s.v_valuations.iter().all(|v| v.is_some()));
        assert!(s.checks.iter().any(|c| c.name == "trace lemma (M = identity)" && c.pass));
    }
}

#[test]
fn formal_module_is_deterministic_in_the_seed() {
    let a = verify_formal_module(3, 2, 2, None, None, 5).unwrap();
    let b = verify_formal_module(3, 2, 2, None, None, 5).unwrap();
    let strip = |r: &FormalModuleReport| serde_json::to_value(&r.samples).unwrap();
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn identity_trace_gives_h_copies() {
    // [h]_LT(mu_2) written out as h copies of mu_2
    let m = canonical(3, 2);
    let y = m.level2();
    let mu2 = mu_n(y, 2, m.canonical()).unwrap();
    let lhs = (0..2).fold(m.zero(), |acc, _| acc.add(&mu2));
    let rhs = digit_action(m.lubin_tate(), m.residue().from_int(2), Fe::ZERO, &mu2);
    assert_eq!(lhs, rhs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn invert_then_multiply_is_one(seed in any::<u64>(), v in 0i64..6) {
        let f = make_field(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_series(&f, v, 30, 60, &mut rng, true);
        let inv = s.inverse().unwrap();
        prop_assert_eq!(inv.precision(), 60 - 2 * v);
        prop_assert_eq!(s.mul(&inv), s.one_like());
    }

    #[test]
    fn compose_is_left_linear(seed in any::<u64>()) {
        let f = make_field(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut poly = |n: usize| {
            let c = (0..n).map(|_| random_series(&f, 0, 10, 40, &mut rng, false)).collect();
            AdditivePolynomial::new(c, 1)
        };
        let (p, q, r) = (poly(3), poly(2), poly(3));
        prop_assert_eq!(p.add(&q).compose(&r), p.compose(&r).add(&q.compose(&r)));
    }

    #[test]
    fn compose_matches_evaluation(seed in any::<u64>()) {
        let f = make_field(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = |start| random_series(&f, start, 12, 48, &mut rng, false);
        let p = AdditivePolynomial::new(vec![s(0), s(0), s(0)], 1);
        let q = AdditivePolynomial::new(vec![s(0), s(0)], 1);
        let x = s(1);
        prop_assert_eq!(p.compose(&q).eval(&x), p.eval(&q.eval(&x)));
    }

    #[test]
    fn near_canonical_lifts_are_torsion(seed in any::<u64>()) {
        let m = E2Model::build(2, 2, None, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = near_canonical_sample(&m, &mut rng);
        let module = m.deformed(&v).unwrap();
        let x: Vec<_> = m.lift_level1(&module, TieBreak::Least).unwrap().into_iter().map(|l| l.root).collect();
        let y = m.lift_level2(&module, &x, TieBreak::Least).unwrap();
        for (l, xr) in y.iter().zip(&x) {
            prop_assert_eq!(&module.eval(&l.root), xr);
        }
    }
}
