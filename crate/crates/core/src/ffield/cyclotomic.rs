use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element `sum_{i=0}^{p-2} n_i zeta_p^i` of `Z[zeta_p]`.
///
/// The power `zeta_p^{p-1}` is always rewritten as
/// `-(1 + zeta_p + ... + zeta_p^{p-2})`, so the coordinate vector is a
/// normal form and structural equality is equality in `Z[zeta_p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicInteger {
    p: u32,
    coords: Vec<i128>,
}

impl CyclotomicInteger {
    pub fn zero(p: u32) -> Self {
        CyclotomicInteger {
            p,
            coords: vec![0; (p - 1) as usize],
        }
    }

    pub fn from_int(p: u32, n: i128) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = n;
        z
    }

    /// `zeta_p^e`.
    pub fn zeta_pow(p: u32, e: u32) -> Self {
        let mut z = Self::zero(p);
        z.add_zeta_pow(e, 1);
        z
    }

    /// Builds from coordinates already in normal form.
    pub fn from_coords(p: u32, coords: Vec<i128>) -> Result<Self> {
        if coords.len() != (p - 1) as usize {
            return Err(Error::InvalidArgument(format!(
                "Z[zeta_{p}] needs {} coordinates",
                p - 1
            )));
        }
        Ok(CyclotomicInteger { p, coords })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    /// Adds `k * zeta_p^e` in place.
    pub fn add_zeta_pow(&mut self, e: u32, k: i128) {
        let e = e % self.p;
        if e == self.p - 1 {
            for c in self.coords.iter_mut() {
                *c -= k;
            }
        } else {
            self.coords[e as usize] += k;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "cyclotomic prime mismatch");
        CyclotomicInteger {
            p: self.p,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i128) -> Self {
        CyclotomicInteger {
            p: self.p,
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "cyclotomic prime mismatch");
        let mut out = Self::zero(self.p);
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coords.iter().enumerate() {
                if b != 0 {
                    out.add_zeta_pow((i + j) as u32, a * b);
                }
            }
        }
        out
    }

    /// `Some(n)` iff the element is the rational integer `n`.
    pub fn as_integer(&self) -> Option<i128> {
        self.coords[1..].iter().all(|&c| c == 0).then_some(self.coords[0])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Galois conjugate `zeta -> zeta^k` for `k` prime to `p`.
    pub fn galois(&self, k: u32) -> Self {
        let mut out = Self::zero(self.p);
        for (i, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                out.add_zeta_pow((i as u64 * k as u64 % self.p as u64) as u32, c);
            }
        }
        out
    }
}

impl std::fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Complex evaluation at exp(2 pi i / p); test oracle only.
    fn eval(z: &CyclotomicInteger) -> (f64, f64) {
        let p = z.prime() as f64;
        z.coords().iter().enumerate().fold((0.0, 0.0), |(re, im), (i, &c)| {
            let ang = 2.0 * std::f64::consts::PI * i as f64 / p;
            (re + c as f64 * ang.cos(), im + c as f64 * ang.sin())
        })
    }

    #[test]
    fn full_orbit_sums_to_zero() {
        for p in [2u32, 3, 5, 7] {
            let mut s = CyclotomicInteger::zero(p);
            for e in 0..p {
                s.add_zeta_pow(e, 1);
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn p2_is_plus_minus_one() {
        assert_eq!(CyclotomicInteger::zeta_pow(2, 1).as_integer(), Some(-1));
        assert_eq!(CyclotomicInteger::zeta_pow(2, 2).as_integer(), Some(1));
    }

    proptest! {
        #[test]
        fn arithmetic_matches_complex_evaluation(
            p in prop::sample::select(vec![2u32, 3, 5, 7]),
            a in prop::collection::vec(-20i128..20, 6),
            b in prop::collection::vec(-20i128..20, 6),
        ) {
            let x = CyclotomicInteger::from_coords(p, a[..(p - 1) as usize].to_vec()).unwrap();
            let y = CyclotomicInteger::from_coords(p, b[..(p - 1) as usize].to_vec()).unwrap();
            let (xr, xi) = eval(&x);
            let (yr, yi) = eval(&y);
            let (sr, si) = eval(&x.add(&y));
            let (pr, pi) = eval(&x.mul(&y));
            prop_assert!((sr - (xr + yr)).abs() < 1e-9 && (si - (xi + yi)).abs() < 1e-9);
            prop_assert!((pr - (xr * yr - xi * yi)).abs() < 1e-6);
            prop_assert!((pi - (xr * yi + xi * yr)).abs() < 1e-6);
            // integer detection agrees with a vanishing imaginary part and an
            // integral real part
            let prod = x.mul(&y);
            if let Some(n) = prod.as_integer() {
                prop_assert!((pr - n as f64).abs() < 1e-9 && pi.abs() < 1e-9);
            } else {
                let (r, i) = eval(&prod);
                prop_assert!(i.abs() > 1e-9 || (r - r.round()).abs() > 1e-9);
            }
        }
    }
}
