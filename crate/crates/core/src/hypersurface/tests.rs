use super::*;
use crate::ffield::make_field;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vec(f: &Gf, len: usize, rng: &mut ChaCha8Rng) -> Vec<Fe> {
    (0..len).map(|_| Fe(rng.gen_range(0..f.order()))).collect()
}

#[test]
fn d_full_height_one_vanishes_exactly_on_fq() {
    let f = make_field(3, 3).unwrap();
    for v in f.elements() {
        let d = d_full(&f, 3, 1, &[v]).unwrap();
        assert_eq!(d, f.sub(f.pow(v, 3), v));
        assert_eq!(d.is_zero(), f.in_subfield_of_degree(v, 1));
    }
}

#[test]
fn d_full_height_two_matches_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (q, f) in [(2, make_field(2, 4).unwrap()), (3, make_field(3, 4).unwrap())] {
        let q2 = (q * q) as u64;
        for _ in 0..100 {
            let v = random_vec(&f, 2, &mut rng);
            let t1 = f.mul(f.sub(f.pow(v[0], q2), v[0]), f.pow(v[0], q as u64));
            let want = f.sub(t1, f.sub(f.pow(v[1], q2), v[1]));
            assert_eq!(d_full(&f, q, 2, &v).unwrap(), want);
        }
    }
}

#[test]
fn d_full_vanishes_on_the_character_field() {
    let f4 = make_field(2, 2).unwrap();
    for a in f4.elements() {
        for b in f4.elements() {
            assert!(d_full(&f4, 2, 2, &[a, b]).unwrap().is_zero());
        }
    }
    assert!(d_full(&f4, 2, 2, &[Fe::ONE]).is_err());
}

#[test]
fn d_as_examples() {
    let f = make_field(2, 4).unwrap();
    for v in f.elements() {
        let want = f.mul(f.sub(f.pow(v, 4), v), f.pow(v, 2));
        assert_eq!(d_as(&f, 2, 2, &[v]).unwrap(), want);
    }
    let f8 = make_field(2, 3).unwrap();
    for a in f8.elements() {
        for b in f8.elements() {
            assert!(d_as(&f8, 2, 3, &[a, b]).unwrap().is_zero());
        }
    }
    assert_eq!(d_as(&f8, 2, 1, &[]).unwrap(), Fe::ZERO);
}

#[test]
fn first_row_expansion_relates_the_two_determinants() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (q, h, f) in [
        (2u32, 3u32, make_field(2, 6).unwrap()),
        (3, 2, make_field(3, 4).unwrap()),
        (3, 3, make_field(3, 6).unwrap()),
        (4, 2, make_field(2, 8).unwrap()),
        (2, 4, make_field(2, 8).unwrap()),
    ] {
        let qh = (q as u64).pow(h);
        for _ in 0..50 {
            let v = random_vec(&f, h as usize, &mut rng);
            let vh = v[h as usize - 1];
            let tail = f.sub(f.pow(vh, qh), vh);
            let tail = if h % 2 == 0 { f.neg(tail) } else { tail };
            let rhs = f.add(d_as(&f, q, h, &v[..h as usize - 1]).unwrap(), tail);
            assert_eq!(d_full(&f, q, h, &v).unwrap(), rhs);
        }
    }
}

#[test]
fn moore_small_cases() {
    let f = make_field(3, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let v = random_vec(&f, 2, &mut rng);
        assert_eq!(moore(&f, 3, &v[..1]).unwrap(), v[0]);
        let want = f.sub(f.mul(v[0], f.pow(v[1], 3)), f.mul(v[1], f.pow(v[0], 3)));
        assert_eq!(moore(&f, 3, &v).unwrap(), want);
        for c in 0..3 {
            let dep = [v[0], f.mul(f.from_int(c), v[0])];
            assert!(moore(&f, 3, &dep).unwrap().is_zero());
        }
    }
}

/// Whether `xs` are `F_2`-linearly dependent, by enumerating combinations.
fn f2_dependent(f: &Gf, xs: &[Fe]) -> bool {
    (1u32..1 << xs.len()).any(|mask| {
        let s = xs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(Fe::ZERO, |acc, (_, &x)| f.add(acc, x));
        s.is_zero()
    })
}

#[test]
fn moore_detects_linear_dependence_exhaustively() {
    let f = make_field(2, 6).unwrap();
    for a in f.elements() {
        for b in f.elements() {
            let m2 = moore(&f, 2, &[a, b]).unwrap();
            assert_eq!(m2.is_zero(), f2_dependent(&f, &[a, b]));
        }
    }
    // h = 3 over F_64: every triple
    for a in f.elements() {
        for b in f.elements() {
            for c in f.elements() {
                let m3 = moore(&f, 2, &[a, b, c]).unwrap();
                assert_eq!(m3.is_zero(), f2_dependent(&f, &[a, b, c]));
            }
        }
    }
}

#[test]
fn minors_b_examples() {
    let f = make_field(2, 4).unwrap();
    for v in f.elements() {
        let b = minors_b(&f, 2, 2, &[v]).unwrap();
        assert_eq!(b[0], f.neg(v));
    }
    let zero = minors_b(&f, 2, 4, &[Fe::ZERO; 3]).unwrap();
    assert!(zero.iter().all(|b| b.is_zero()));
    let f9 = make_field(3, 2).unwrap();
    for v in f9.elements() {
        assert_eq!(minors_b(&f9, 3, 2, &[v]).unwrap()[0], f9.neg(v));
    }
}

#[test]
fn minors_b_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = make_field(2, 4).unwrap();
    for h in 2..=5u32 {
        for _ in 0..50 {
            let v = random_vec(&f, h as usize - 1, &mut rng);
            let b = minors_b(&f, 2, h, &v).unwrap();
            let bb = minors_b(&f, 2, h, &b[..h as usize - 1]).unwrap();
            assert_eq!(&bb[..h as usize - 1], &v[..]);
        }
    }
    let f81 = make_field(3, 4).unwrap();
    for h in 2..=4u32 {
        for _ in 0..50 {
            let v = random_vec(&f81, h as usize - 1, &mut rng);
            let b = minors_b(&f81, 3, h, &v).unwrap();
            let bb = minors_b(&f81, 3, h, &b[..h as usize - 1]).unwrap();
            assert_eq!(&bb[..h as usize - 1], &v[..]);
        }
    }
}

#[test]
fn count_examples() {
    let p = |q, h, n| HyperParams::new(q, h, n).unwrap();
    assert_eq!(count_points(&p(2, 2, 1)).unwrap(), 16);
    assert_eq!(count_points(&p(3, 2, 1)).unwrap(), 81);
    assert_eq!(count_points(&p(2, 3, 1)).unwrap(), 512);
    assert_eq!(count_points(&p(4, 2, 1)).unwrap(), 256);
    assert_eq!(count_points(&p(2, 4, 1)).unwrap(), 1 << 16);
    assert_eq!(count_points(&p(5, 1, 2)).unwrap(), 5);
    for (q, h) in [(2, 1), (3, 1)] {
        assert_eq!(count_points(&p(q, h, 1)).unwrap(), q as u64);
    }
}

#[test]
fn brute_force_agrees_with_trace_criterion() {
    for (q, h, n) in [(2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1), (2, 1, 3), (3, 2, 2), (4, 2, 1)] {
        let params = HyperParams::new(q, h, n).unwrap();
        let fast = count_points(&params).unwrap();
        for conv in [Convention::Full, Convention::ArtinSchreier] {
            assert_eq!(brute_count(&params, conv).unwrap(), fast, "({q},{h},{n}) {conv:?}");
        }
    }
}

#[test]
fn guards_refuse_oversized_enumerations() {
    let params = HyperParams::new(2, 4, 3).unwrap();
    assert!(matches!(count_points(&params), Err(Error::GuardExceeded { .. })));
    let params = HyperParams::new(2, 3, 3).unwrap();
    assert!(matches!(
        brute_count(&params, Convention::Full),
        Err(Error::GuardExceeded { .. })
    ));
    assert!(HyperParams::new(6, 2, 1).is_err());
    assert!(HyperParams::new(2, 0, 1).is_err());
}

fn points(field: &Arc<Gf>, q: u32, h: u32, conv: Convention) -> Vec<Vec<Fe>> {
    let mut out = Vec::new();
    let mut v = vec![0u32; h as usize];
    loop {
        let pt: Vec<Fe> = v.iter().map(|&c| Fe(c)).collect();
        if on_hypersurface(field, q, h, &pt, conv).unwrap() {
            out.push(pt);
        }
        let mut k = 0;
        loop {
            if k == v.len() {
                return out;
            }
            v[k] += 1;
            if v[k] < field.order() {
                break;
            }
            v[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn translation_is_a_free_action_on_points() {
    let f4 = make_field(2, 2).unwrap();
    let pts = points(&f4, 2, 2, Convention::Full);
    assert_eq!(pts.len(), 16);
    let mut orbits = std::collections::BTreeSet::new();
    for pt in &pts {
        assert_eq!(h_translate(&f4, &f4, 2, 2, pt, Fe::ZERO, Convention::Full).unwrap(), *pt);
        let mut orbit: Vec<Vec<Fe>> = f4
            .elements()
            .map(|g| h_translate(&f4, &f4, 2, 2, pt, g, Convention::Full).unwrap())
            .collect();
        for img in &orbit {
            assert!(on_hypersurface(&f4, 2, 2, img, Convention::Full).unwrap());
        }
        orbit.sort();
        let before = orbit.len();
        orbit.dedup();
        assert_eq!(orbit.len(), before, "free action");
        orbits.insert(orbit);
    }
    assert_eq!(orbits.len(), 4);
}

#[test]
fn translation_preserves_points_and_composes() {
    for (q, h, n) in [(2u32, 2u32, 1u32), (2, 2, 2), (2, 3, 1), (3, 2, 1)] {
        let params = HyperParams::new(q, h, n).unwrap();
        let big = params.point_field().unwrap();
        let small = params.char_field().unwrap();
        for conv in [Convention::Full, Convention::ArtinSchreier] {
            for pt in points(&big, q, h, conv) {
                for g in small.elements() {
                    let img = h_translate(&big, &small, q, h, &pt, g, conv).unwrap();
                    assert!(on_hypersurface(&big, q, h, &img, conv).unwrap());
                }
                let (g1, g2) = (small.generator(), small.one());
                let twice = h_translate(
                    &big,
                    &small,
                    q,
                    h,
                    &h_translate(&big, &small, q, h, &pt, g1, conv).unwrap(),
                    g2,
                    conv,
                )
                .unwrap();
                let once = h_translate(&big, &small, q, h, &pt, small.add(g1, g2), conv).unwrap();
                assert_eq!(twice, once);
            }
        }
    }
    let f16 = make_field(2, 4).unwrap();
    let f4 = make_field(2, 2).unwrap();
    let off = [Fe::ZERO, f16.generator()];
    assert!(!on_hypersurface(&f16, 2, 2, &off, Convention::Full).unwrap());
    assert!(h_translate(&f16, &f4, 2, 2, &off, Fe::ONE, Convention::Full).is_err());
}

#[test]
fn conventions_differ_by_negating_the_last_coordinate() {
    let f = make_field(3, 4).unwrap();
    let full = points(&f, 3, 2, Convention::Full);
    let asc = points(&f, 3, 2, Convention::ArtinSchreier);
    assert_eq!(full.len(), asc.len());
    let mut neg: Vec<Vec<Fe>> = full.iter().map(|p| vec![p[0], f.neg(p[1])]).collect();
    neg.sort();
    let mut asc_sorted = asc.clone();
    asc_sorted.sort();
    assert_eq!(neg, asc_sorted);

    // over F_{3^6} some fibre has d_as != 0, and there the loci separate
    let big = make_field(3, 6).unwrap();
    let sub = make_field(3, 2).unwrap();
    let v1 = big
        .elements()
        .find(|&v| {
            let c = d_as(&big, 3, 2, &[v]).unwrap();
            !c.is_zero() && big.rel_trace(c, &sub).unwrap().is_zero()
        })
        .expect("a fibre with nonzero constant");
    let v2 = big
        .elements()
        .find(|&y| on_hypersurface(&big, 3, 2, &[v1, y], Convention::Full).unwrap())
        .unwrap();
    assert!(!on_hypersurface(&big, 3, 2, &[v1, v2], Convention::ArtinSchreier).unwrap());
    assert!(on_hypersurface(&big, 3, 2, &[v1, big.neg(v2)], Convention::ArtinSchreier).unwrap());
}

#[test]
fn hermitian_decomposition() {
    for q in [2u32, 3] {
        for n in [1u32, 2] {
            let params = HyperParams::new(q, 2, n).unwrap();
            let x = brute_count(&params, Convention::Full).unwrap();
            assert_eq!(x, q as u64 * hermitian_count(q, n).unwrap(), "q={q} n={n}");
        }
    }
}
