//! The determinant shapes shared by the hypersurface, the symbolic
//! identities and the congruence checks, built over any ring with a
//! Frobenius.
//!
//! All builders take `a` with `q = p^a`, so `x^{q^k}` is
//! `x.frobenius(a * k)`. Vectors are 0-based: `v[0]` is `V_1`.

use crate::ring::{determinant, hessenberg_det, FrobeniusRing};

pub(crate) fn qpow<R: FrobeniusRing>(x: &R, a: u32, k: u32) -> R {
    x.frobenius(a * k)
}

/// Rows `1..h` common to every matrix in this family: row `k` has a one in
/// column `k - 1` and `v[j-k]^{q^k}` in columns `j >= k`, where `v[h-1]` is
/// never reached.
fn lower_rows<R: FrobeniusRing>(v: &[R], h: usize, a: u32, one: &R) -> Vec<Vec<R>> {
    let zero = one.zero_like();
    (1..h)
        .map(|k| {
            (0..h)
                .map(|j| {
                    if j + 1 == k {
                        one.clone()
                    } else if j >= k {
                        qpow(&v[j - k], a, k as u32)
                    } else {
                        zero.clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// The `h x h` matrix whose determinant cuts out the hypersurface; `v` has
/// length `h`.
pub fn full_matrix<R: FrobeniusRing>(v: &[R], a: u32, one: &R) -> Vec<Vec<R>> {
    let h = v.len();
    let first: Vec<R> = v.iter().map(|x| qpow(x, a, h as u32).sub(x)).collect();
    let mut m = vec![first];
    m.extend(lower_rows(v, h, a, one));
    m
}

/// The Artin-Schreier matrix: `v` has length `h - 1` and the first row ends
/// in zero.
pub fn as_matrix<R: FrobeniusRing>(v: &[R], h: usize, a: u32, one: &R) -> Vec<Vec<R>> {
    assert_eq!(v.len() + 1, h);
    let mut first: Vec<R> = v.iter().map(|x| qpow(x, a, h as u32).sub(x)).collect();
    first.push(one.zero_like());
    let mut m = vec![first];
    m.extend(lower_rows(v, h, a, one));
    m
}

/// The matrix with first row `(V_1, ..., V_{h-1}, 0)` from which the `B_i`
/// are cut as leading minors.
pub fn b_matrix<R: FrobeniusRing>(v: &[R], h: usize, a: u32, one: &R) -> Vec<Vec<R>> {
    assert_eq!(v.len() + 1, h);
    let mut first: Vec<R> = v.to_vec();
    first.push(one.zero_like());
    let mut m = vec![first];
    m.extend(lower_rows(v, h, a, one));
    m
}

pub fn d_full_generic<R: FrobeniusRing>(v: &[R], a: u32, one: &R) -> R {
    hessenberg_det(&full_matrix(v, a, one))
}

pub fn d_as_generic<R: FrobeniusRing>(v: &[R], h: usize, a: u32, one: &R) -> R {
    hessenberg_det(&as_matrix(v, h, a, one))
}

/// `B_1, ..., B_h`: `B_i` is `(-1)^i` times the leading `i x i` minor of
/// [`b_matrix`].
pub fn minors_b_generic<R: FrobeniusRing>(v: &[R], h: usize, a: u32, one: &R) -> Vec<R> {
    let m = b_matrix(v, h, a, one);
    (1..=h)
        .map(|i| {
            let block: Vec<Vec<R>> = m[..i].iter().map(|row| row[..i].to_vec()).collect();
            hessenberg_det(&block).signed(i % 2 == 1)
        })
        .collect()
}

/// The Moore matrix `(x_i^{q^j})`, rows indexed by `i`.
pub fn moore_matrix<R: FrobeniusRing>(x: &[R], a: u32) -> Vec<Vec<R>> {
    let h = x.len();
    x.iter()
        .map(|xi| (0..h).map(|j| qpow(xi, a, j as u32)).collect())
        .collect()
}

pub fn moore_generic<R: FrobeniusRing>(x: &[R], a: u32) -> R {
    determinant(&moore_matrix(x, a))
}

