use super::*;
use crate::ffield::make_field;
use crate::hypersurface::d_full;
use crate::ring::TryInv;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn xyz(f: &Arc<Gf>) -> (Universe, MultiPoly, MultiPoly, MultiPoly) {
    let u = universe(&["X", "Y", "Z"]);
    let v = |i| MultiPoly::var(f, &u, i);
    (u.clone(), v(0), v(1), v(2))
}

fn random_poly(f: &Arc<Gf>, u: &Universe, rng: &mut ChaCha8Rng) -> MultiPoly {
    let n = rng.gen_range(0..8);
    let terms: Vec<(Vec<u32>, Fe)> = (0..n)
        .map(|_| {
            let mut e = vec![0u32; u.len()];
            let deg = rng.gen_range(0..=4);
            for _ in 0..deg {
                e[rng.gen_range(0..u.len())] += 1;
            }
            (e, Fe(rng.gen_range(0..f.order())))
        })
        .collect();
    MultiPoly::from_terms(f, u, terms)
}

#[test]
fn freshman_dream() {
    for p in [2, 3, 5] {
        let f = make_field(p, 1).unwrap();
        let (_, x, y, _) = xyz(&f);
        let lhs = x.add(&y).pow(p as u64);
        assert_eq!(lhs, x.pow(p as u64).add(&y.pow(p as u64)));
        assert_eq!(lhs, x.add(&y).frobenius(1));
    }
}

#[test]
fn substitution() {
    let f = make_field(3, 1).unwrap();
    let (u, x, y, z) = xyz(&f);
    let g = x.mul(&y).add(&z.pow(2)).add(&x);
    assert_eq!(g.substitute(0, &x).unwrap(), g);
    // X -> Y + 1
    let s = g.substitute(0, &y.add(&y.one_like())).unwrap();
    let want = y.add(&y.one_like()).mul(&y).add(&z.pow(2)).add(&y).add(&y.one_like());
    assert_eq!(s, want);
    let other = MultiPoly::var(&f, &universe(&["X"]), 0);
    assert!(g.substitute(0, &other).is_err());
    assert!(g.substitute(7, &x).is_err());
    assert_eq!(u.len(), 3);
}

#[test]
fn universe_and_field_mismatch() {
    let f = make_field(2, 2).unwrap();
    let g = make_field(2, 3).unwrap();
    let (_, x, _, _) = xyz(&f);
    let (_, xg, _, _) = xyz(&g);
    let lone = MultiPoly::var(&f, &universe(&["X"]), 0);
    assert!(matches!(x.checked_add(&lone), Err(Error::InvalidArgument(_))));
    assert!(matches!(x.checked_mul(&xg), Err(Error::FieldMismatch(_))));
}

#[test]
fn canonical_form_drops_cancelled_terms() {
    let f = make_field(2, 1).unwrap();
    let (_, x, y, _) = xyz(&f);
    let s = x.add(&y).add(&x);
    assert_eq!(s, y);
    assert_eq!(s.term_count(), 1);
    assert!(x.sub(&x).is_zero());
    assert_eq!(format!("{}", x.add(&y.pow(3))), "Y^3 + X");
}

#[test]
fn graded_lex_order() {
    let a = Monomial::new(vec![0, 3]);
    let b = Monomial::new(vec![1, 1]);
    let c = Monomial::new(vec![2, 0]);
    assert!(b < c && c < a);
}

#[test]
fn eval_matches_field_arithmetic() {
    let f = make_field(2, 4).unwrap();
    let (_, x, y, z) = xyz(&f);
    let g = x.mul(&y).add(&z.pow(5));
    let pt = [Fe(3), Fe(7), Fe(11)];
    let want = f.add(f.mul(pt[0], pt[1]), f.pow(pt[2], 5));
    assert_eq!(g.eval(&pt).unwrap(), want);
}

#[test]
fn units_are_nonzero_constants() {
    let f = make_field(3, 1).unwrap();
    let (u, x, _, _) = xyz(&f);
    let two = MultiPoly::constant(&f, &u, Fe(2));
    assert_eq!(two.try_inv().unwrap().mul(&two), two.one_like());
    assert!(x.try_inv().is_none());
    assert!(x.zero_like().try_inv().is_none());
}

#[test]
fn examples() {
    assert!(verify_identity("prodmu", 2, 1).unwrap().holds);
    assert!(verify_identity("b_involution", 2, 2).unwrap().holds);
    let r = verify_identity("remark12", 2, 2).unwrap();
    assert!(r.holds);
    assert!(r.notes[0].ends_with("true"));
}

/// The `tau^2` coefficient for `(q, h) = (2, 2)` written out by hand.
#[test]
fn tau_h_coefficient_coefficient_explicit() {
    let r = Ring::new(2, names("V", 2)).unwrap();
    let (v1, v2) = (r.var(0), r.var(1));
    let g = SkewPolynomial::new(vec![r.one(), v1.clone(), v2.clone()], 1);
    let coeff = g.d_operator(2).unwrap().coeff(2).clone();
    let want = v1.pow(4).sub(&v1).mul(&v1.pow(2)).sub(&v2.pow(4).sub(&v2));
    assert_eq!(coeff, want);
    // numeric cross-check at the points of F_2^2
    let f2 = make_field(2, 1).unwrap();
    for a in [0u32, 1] {
        for b in [0u32, 1] {
            let val = coeff.eval(&[Fe(a), Fe(b)]).unwrap();
            assert_eq!(val, d_full(&f2, 2, 2, &[Fe(a), Fe(b)]).unwrap());
        }
    }
}

#[test]
fn every_identity_holds_on_the_grid() {
    for (q, h) in [(2, 2), (2, 3), (3, 2), (4, 2), (2, 4)] {
        for name in IDENTITIES {
            let r = verify_identity(name, q, h).unwrap();
            assert!(r.holds, "{name} failed for q={q} h={h}: {r:?}");
        }
    }
}

#[test]
fn height_one_and_odd_characteristic() {
    for name in IDENTITIES {
        assert!(verify_identity(name, 3, 1).unwrap().holds, "{name}");
        assert!(verify_identity(name, 5, 1).unwrap().holds, "{name}");
    }
    assert!(verify_identity("remark12", 3, 3).unwrap().holds);
    assert!(verify_identity("piLT", 3, 3).unwrap().holds);
}

#[test]
fn tau_h_coefficient_literal_sign_only_in_odd_height() {
    let even = verify_identity("remark12", 3, 2).unwrap();
    assert!(even.holds);
    assert!(even.notes[0].ends_with("false"));
    let odd = verify_identity("remark12", 3, 3).unwrap();
    assert!(odd.notes[0].ends_with("true"));
}

#[test]
fn guards_and_unknown_names() {
    assert!(matches!(verify_identity("prodmu", 2, 7), Err(Error::GuardExceeded { .. })));
    assert!(matches!(verify_identity("prodmu", 3, 4), Err(Error::GuardExceeded { .. })));
    assert!(matches!(verify_identity("nope", 2, 2), Err(Error::InvalidArgument(_))));
    assert!(matches!(verify_identity("BV", 6, 2), Err(Error::InvalidArgument(_))));
    assert!(matches!(verify_identity("BV", 2, 0), Err(Error::InvalidArgument(_))));
}

#[test]
fn report_serializes() {
    let r = verify_identity("piLT", 2, 2).unwrap();
    let j = serde_json::to_value(&r).unwrap();
    for k in ["identity", "q", "h", "holds", "wall_time_ms", "term_counts"] {
        assert!(j.get(k).is_some(), "{k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_matches_naive_and_associates(seed in any::<u64>()) {
        let f = make_field(2, 2).unwrap();
        let u = universe(&["X", "Y", "Z"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = [0; 3].map(|_| random_poly(&f, &u, &mut rng));
        prop_assert_eq!(a.mul(&b), a.naive_mul(&b).unwrap());
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn frobenius_is_pth_power(seed in any::<u64>()) {
        let f = make_field(3, 2).unwrap();
        let u = universe(&["X", "Y"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poly(&f, &u, &mut rng);
        prop_assert_eq!(a.frobenius(1), a.pow(3));
    }
}
