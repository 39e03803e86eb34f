use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::ffield::CyclotomicInteger;

/// An element of `Q(zeta_p)`: integer coordinates in the normal form of
/// [`CyclotomicInteger`] over a positive common denominator, in lowest
/// terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicRational {
    p: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CyclotomicRational {
    pub fn zero(p: u32) -> Self {
        CyclotomicRational {
            p,
            num: vec![BigInt::zero(); (p - 1) as usize],
            den: BigInt::one(),
        }
    }

    pub fn one(p: u32) -> Self {
        let mut z = Self::zero(p);
        z.num[0] = BigInt::one();
        z
    }

    pub fn from_integer(z: &CyclotomicInteger) -> Self {
        CyclotomicRational {
            p: z.prime(),
            num: z.coords().iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    pub fn from_ratio(p: u32, num: BigInt, den: BigInt) -> Self {
        let mut z = Self::zero(p);
        z.num[0] = num;
        z.den = den;
        z.normalize();
        z
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            self.num.iter_mut().for_each(|c| *c = -c.clone());
        }
        let g = self.num.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            self.den /= &g;
            self.num.iter_mut().for_each(|c| *c /= &g);
        }
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// `Some((n, d))` iff the value is the rational `n/d`.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        self.num[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| (self.num[0].clone(), self.den.clone()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = CyclotomicRational {
            p: self.p,
            num: self
                .num
                .iter()
                .zip(&o.num)
                .map(|(a, b)| a * &o.den + b * &self.den)
                .collect(),
            den: &self.den * &o.den,
        };
        out.normalize();
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p, "cyclotomic prime mismatch");
        let p = self.p as usize;
        let mut acc = vec![BigInt::zero(); p - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                let k = (i + j) % p;
                let t = a * b;
                if k == p - 1 {
                    acc.iter_mut().for_each(|c| *c -= &t);
                } else {
                    acc[k] += t;
                }
            }
        }
        let mut out = CyclotomicRational {
            p: self.p,
            num: acc,
            den: &self.den * &o.den,
        };
        out.normalize();
        out
    }

    pub fn div_int(&self, m: u64) -> Self {
        let mut out = self.clone();
        out.den *= BigInt::from(m);
        out.normalize();
        out
    }
}

impl std::fmt::Display for CyclotomicRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if i == 0 { c.to_string() } else { format!("{c}*z^{i}") })
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if self.den.is_one() {
            write!(f, "{body}")
        } else if terms.len() > 1 {
            write!(f, "({body})/{}", self.den)
        } else {
            write!(f, "{body}/{}", self.den)
        }
    }
}

impl Serialize for CyclotomicRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `L(t) = exp(sum_n S_n t^n / n)` truncated after `t^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LSeries {
    pub coefficients: Vec<CyclotomicRational>,
}

/// Assembles `l_0..l_N` from `S_1..S_N` by `m l_m = sum_{n=1}^m S_n l_{m-n}`.
pub fn l_series(sums: &[CyclotomicInteger]) -> LSeries {
    assert!(!sums.is_empty(), "need at least S_1");
    let p = sums[0].prime();
    let s: Vec<CyclotomicRational> = sums.iter().map(CyclotomicRational::from_integer).collect();
    let mut l = vec![CyclotomicRational::one(p)];
    for m in 1..=sums.len() {
        let acc = (1..=m).fold(CyclotomicRational::zero(p), |acc, n| {
            acc.add(&s[n - 1].mul(&l[m - n]))
        });
        l.push(acc.div_int(m as u64));
    }
    LSeries { coefficients: l }
}
