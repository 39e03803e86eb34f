//! Minimal commutative-ring vocabulary shared by field elements, truncated
//! series and multivariate polynomials.
//!
//! Values carry their own context (field descriptor, variable universe,
//! precision), so `zero_like`/`one_like` build constants from an existing
//! value instead of from a type-level singleton.

use std::fmt::Debug;

pub trait CommRing: Clone + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn is_zero(&self) -> bool;

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The image of the integer `n` in this ring.
    fn from_int(&self, n: i64) -> Self {
        let mut acc = self.zero_like();
        let mut base = self.one_like();
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.add(&base);
            }
        }
        if n < 0 {
            acc.neg()
        } else {
            acc
        }
    }

    fn signed(&self, negate: bool) -> Self {
        if negate {
            self.neg()
        } else {
            self.clone()
        }
    }
}

/// A commutative ring of prime characteristic with its absolute Frobenius.
pub trait FrobeniusRing: CommRing {
    fn characteristic(&self) -> u32;

    /// Raises to the power `p^k`.
    fn frobenius(&self, k: u32) -> Self;
}

/// Rings where some elements have known inverses.
pub trait TryInv: Sized {
    /// The two-sided inverse, or `None` when it does not exist (or cannot be
    /// certified in this representation).
    fn try_inv(&self) -> Option<Self>;
}

/// Determinant by cofactor expansion along the first row.
///
/// Only exact ring operations are used, so this works over any commutative
/// ring. The matrices in this crate are at most 5x5.
pub fn determinant<R: CommRing>(m: &[Vec<R>]) -> R {
    let n = m.len();
    assert!(n > 0, "determinant of an empty matrix needs a ring context");
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let cols: Vec<usize> = (0..n).collect();
    det_rec(m, 0, &cols)
}

fn det_rec<R: CommRing>(m: &[Vec<R>], row: usize, cols: &[usize]) -> R {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = m[row][cols[0]].zero_like();
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry.mul(&det_rec(m, row + 1, &rest));
        acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Determinant of an upper-Hessenberg matrix whose subdiagonal entries are
/// all exactly one.
///
/// Row 0 is reduced against rows `1..n` to a single entry in the last
/// column; the remaining block is unit upper triangular. Needs no division,
/// so it is valid over any commutative ring. Entries below the subdiagonal
/// are ignored (assumed zero).
pub fn hessenberg_det<R: CommRing>(m: &[Vec<R>]) -> R {
    let n = m.len();
    assert!(n > 0, "determinant of an empty matrix needs a ring context");
    let mut r = m[0].clone();
    for k in 1..n {
        let c = r[k - 1].clone();
        if c.is_zero() {
            continue;
        }
        for j in k..n {
            r[j] = r[j].sub(&c.mul(&m[k][j]));
        }
    }
    r[n - 1].signed((n - 1) % 2 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Clone, Debug, PartialEq)]
    struct Z(i64);

    impl CommRing for Z {
        fn zero_like(&self) -> Self {
            Z(0)
        }
        fn one_like(&self) -> Self {
            Z(1)
        }
        fn add(&self, r: &Self) -> Self {
            Z(self.0 + r.0)
        }
        fn sub(&self, r: &Self) -> Self {
            Z(self.0 - r.0)
        }
        fn neg(&self) -> Self {
            Z(-self.0)
        }
        fn mul(&self, r: &Self) -> Self {
            Z(self.0 * r.0)
        }
        fn is_zero(&self) -> bool {
            self.0 == 0
        }
    }

    #[test]
    fn integer_determinants() {
        let m = vec![
            vec![Z(2), Z(0), Z(1)],
            vec![Z(1), Z(3), Z(2)],
            vec![Z(1), Z(1), Z(2)],
        ];
        assert_eq!(determinant(&m), Z(6));
        assert_eq!(Z(3).pow(5), Z(243));
        assert_eq!(Z(0).from_int(-7), Z(-7));
    }

    #[test]
    fn hessenberg_matches_cofactor_expansion() {
        let m = vec![
            vec![Z(3), Z(-1), Z(4), Z(2)],
            vec![Z(1), Z(5), Z(-9), Z(2)],
            vec![Z(0), Z(1), Z(6), Z(-5)],
            vec![Z(0), Z(0), Z(1), Z(7)],
        ];
        assert_eq!(hessenberg_det(&m), determinant(&m));
        assert_eq!(hessenberg_det(&[vec![Z(4)]]), Z(4));
    }
}
