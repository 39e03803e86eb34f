//! The twisted ring `K{tau}/(tau^{h+1})` with `tau a = a^q tau`, over any
//! coefficient ring with a Frobenius.
//!
//! Units are exactly the elements with invertible constant term: writing
//! `u = c_0 (1 + n)` with `n` in the two-sided nilpotent ideal `tau K{tau}`,
//! `u^{-1} = (1 - n + n^2 - ... + (-n)^h) c_0^{-1}`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{prime_power, FieldElement, Fe, Gf};
use crate::ring::{FrobeniusRing, TryInv};

/// `sum_{i <= h} c_i tau^i`; `c.len() == h + 1`. The twist is `q = p^a`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewPolynomial<R> {
    coeffs: Vec<R>,
    a: u32,
}

impl<R: FrobeniusRing> SkewPolynomial<R> {
    /// Builds from `c_0..c_h`; the length fixes `h`.
    pub fn new(coeffs: Vec<R>, a: u32) -> Self {
        assert!(!coeffs.is_empty(), "need at least the constant coefficient");
        SkewPolynomial { coeffs, a }
    }

    pub fn scalar(c: R, h: usize, a: u32) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; h + 1];
        coeffs[0] = c;
        SkewPolynomial { coeffs, a }
    }

    pub fn one_like(&self) -> Self {
        Self::scalar(self.coeffs[0].one_like(), self.height(), self.a)
    }

    pub fn height(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &R {
        &self.coeffs[i]
    }

    fn twist(&self, x: &R, i: usize) -> R {
        x.frobenius(self.a * i as u32)
    }

    fn compatible(&self, o: &Self) {
        assert_eq!(self.coeffs.len(), o.coeffs.len(), "height mismatch");
        assert_eq!(self.a, o.a, "twist mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.compatible(o);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x.add(y)).collect();
        SkewPolynomial { coeffs, a: self.a }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.compatible(o);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x.sub(y)).collect();
        SkewPolynomial { coeffs, a: self.a }
    }

    /// `(x tau^i)(y tau^j) = x y^{q^i} tau^{i+j}`, dropping `tau^{>h}`.
    pub fn mul(&self, o: &Self) -> Self {
        self.compatible(o);
        let h = self.height();
        let mut out: Vec<R> = vec![self.coeffs[0].zero_like(); h + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate().take(h + 1 - i) {
                if !y.is_zero() {
                    out[i + j] = out[i + j].add(&x.mul(&self.twist(y, i)));
                }
            }
        }
        SkewPolynomial { coeffs: out, a: self.a }
    }

    /// `c * self` for a scalar `c`.
    pub fn scale_left(&self, c: &R) -> Self {
        let coeffs = self.coeffs.iter().map(|x| c.mul(x)).collect();
        SkewPolynomial { coeffs, a: self.a }
    }

    /// `self * c` for a scalar `c`: `x tau^i c = x c^{q^i} tau^i`.
    pub fn scale_right(&self, c: &R) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, x)| x.mul(&self.twist(c, i)))
            .collect();
        SkewPolynomial { coeffs, a: self.a }
    }

    /// Raises every coefficient to the power `q^e`.
    pub fn frob_coeffs(&self, e: u32) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.frobenius(self.a * e)).collect();
        SkewPolynomial { coeffs, a: self.a }
    }

    pub fn is_one(&self) -> bool {
        let c0 = &self.coeffs[0];
        c0.sub(&c0.one_like()).is_zero() && self.coeffs[1..].iter().all(|x| x.is_zero())
    }
}

impl<R: FrobeniusRing + TryInv> SkewPolynomial<R> {
    pub fn is_unit(&self) -> bool {
        self.coeffs[0].try_inv().is_some()
    }

    /// Two-sided inverse by the nilpotent geometric series.
    pub fn inv(&self) -> Result<Self> {
        let c0_inv = self.coeffs[0].try_inv().ok_or_else(|| Error::NotInvertible("constant coefficient is not a unit".into()))?;
        let one = self.one_like();
        // self = c0 (1 + n), so c0^{-1} self = 1 + n
        let n = self.scale_left(&c0_inv).sub(&one);
        let minus_n = n.scale_left(&n.coeffs[0].one_like().neg());
        let mut term = one.clone();
        let mut acc = one;
        for _ in 0..self.height() {
            term = term.mul(&minus_n);
            acc = acc.add(&term);
        }
        Ok(acc.scale_right(&c0_inv))
    }

    /// `Phi^e(g) g^{-1}` with `Phi^e` raising coefficients to `q^e`.
    pub fn d_operator(&self, e: u32) -> Result<Self> {
        Ok(self.frob_coeffs(e).mul(&self.inv()?))
    }

    /// `g -> r_0 g r^{-1}`: keeps the constant term 1 and, for `r` with
    /// coefficients fixed by `Phi^h`, preserves the `tau^h` coefficient of
    /// `d_operator(., h)`.
    pub fn r_action(r: &Self, g: &Self) -> Result<Self> {
        Ok(g.scale_left(&r.coeffs[0]).mul(&r.inv()?))
    }
}

fn lift(big: &Arc<Gf>, v: &[Fe]) -> Result<Vec<FieldElement>> {
    v.iter()
        .map(|&x| {
            if big.contains(x) {
                Ok(FieldElement::new(big, x))
            } else {
                Err(Error::FieldMismatch(format!("{x:?} is not in {big:?}")))
            }
        })
        .collect()
}

/// `g = 1 + v_1 tau + ... + v_h tau^h` over `big`.
pub fn point_element(big: &Arc<Gf>, v: &[Fe], a: u32) -> Result<SkewPolynomial<FieldElement>> {
    let mut c = vec![FieldElement::new(big, Fe::ONE)];
    c.extend(lift(big, v)?);
    Ok(SkewPolynomial::new(c, a))
}

/// Embeds `r` with coefficients in `F_{q^h}` into the skew ring over `big`,
/// checking that every coefficient lies in `F_{q^h}`.
pub fn embed_group_element(
    big: &Arc<Gf>,
    sub: &Gf,
    q: u32,
    h: u32,
    r: &[Fe],
) -> Result<SkewPolynomial<FieldElement>> {
    let (_, a) = prime_power(q)?;
    if sub.degree() != a * h || r.len() != h as usize + 1 {
        return Err(Error::InvalidArgument("r must have h+1 coefficients in F_{q^h}".into()));
    }
    let coeffs = r
        .iter()
        .map(|&x| {
            if !sub.contains(x) {
                return Err(Error::FieldMismatch("r is not over F_{q^h}".into()));
            }
            Ok(FieldElement::new(big, big.embed(sub, x)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SkewPolynomial::new(coeffs, a))
}

/// The induced map on coordinates: `V -> (v_1..v_h)` of `r_0 g r^{-1}`.
pub fn act_on_point(
    big: &Arc<Gf>,
    r: &SkewPolynomial<FieldElement>,
    v: &[Fe],
) -> Result<Vec<Fe>> {
    let g = point_element(big, v, r.a)?;
    let img = SkewPolynomial::r_action(r, &g)?;
    Ok(img.coeffs[1..].iter().map(|x| x.value()).collect())
}

fn same_field(a: &SkewPolynomial<FieldElement>, b: &SkewPolynomial<FieldElement>) -> Result<()> {
    let fa = a.coeffs[0].field();
    if a.height() != b.height() || a.a != b.a {
        return Err(Error::FieldMismatch("different height or twist".into()));
    }
    if fa != b.coeffs[0].field() {
        return Err(Error::FieldMismatch(format!("{fa:?} vs {:?}", b.coeffs[0].field())));
    }
    Ok(())
}

/// Checked product over a finite field.
pub fn skew_mul(
    a: &SkewPolynomial<FieldElement>,
    b: &SkewPolynomial<FieldElement>,
) -> Result<SkewPolynomial<FieldElement>> {
    same_field(a, b)?;
    Ok(a.mul(b))
}

/// Reports of the exhaustive symmetry suite.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub q: u32,
    pub h: u32,
    pub n: u32,
    /// `"exhaustive"` (all of `R^x`) or `"generators"` (a generating set,
    /// which suffices by the action law).
    pub mode: &'static str,
    pub group_elements: u64,
    pub points: u64,
    pub checks: u64,
    pub failures: u64,
    pub action_law_holds: bool,
    pub center_matches_translation: bool,
    pub preserved: bool,
}

/// Above this many `(r, point)` pairs the suite switches to generators.
pub const EXHAUSTIVE_LIMIT: u128 = 20_000_000;

fn group_elements(sub: &Arc<Gf>, h: usize, a: u32, exhaustive: bool) -> Vec<SkewPolynomial<FieldElement>> {
    let one = FieldElement::new(sub, Fe::ONE);
    let zero = FieldElement::new(sub, Fe::ZERO);
    let mut out = Vec::new();
    if exhaustive {
        let order = sub.order() as u64;
        let tail = order.pow(h as u32);
        for c0 in sub.elements().skip(1) {
            for mut idx in 0..tail {
                let mut c = vec![FieldElement::new(sub, c0)];
                for _ in 0..h {
                    c.push(FieldElement::new(sub, Fe((idx % order) as u32)));
                    idx /= order;
                }
                out.push(SkewPolynomial::new(c, a));
            }
        }
    } else {
        // Units factor as c_0 (1 + b_1 tau)(1 + b_2 tau^2)...(1 + b_h tau^h).
        out.push(SkewPolynomial::scalar(FieldElement::new(sub, sub.generator()), h, a));
        for i in 1..=h {
            for b in sub.elements().skip(1) {
                let mut c = vec![zero.clone(); h + 1];
                c[0] = one.clone();
                c[i] = FieldElement::new(sub, b);
                out.push(SkewPolynomial::new(c, a));
            }
        }
    }
    out
}

fn embed_poly(big: &Arc<Gf>, sub: &Gf, r: &SkewPolynomial<FieldElement>) -> Result<SkewPolynomial<FieldElement>> {
    let c = r
        .coeffs
        .iter()
        .map(|x| Ok(FieldElement::new(big, big.embed(sub, x.value())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SkewPolynomial::new(c, r.a))
}

/// Checks that every unit of `F_{q^h}{tau}/(tau^{h+1})` maps `X(F_{q^{hn}})`
/// into itself, together with the action law on a sample and the agreement
/// of the central elements `1 + c tau^h` with translation of `v_h` by `-c`.
pub fn symmetry_suite(q: u32, h: u32, n: u32) -> Result<SymmetryReport> {
    use crate::error::guard;
    use crate::hypersurface::{d_full, h_translate, Convention, HyperParams, BRUTE_LIMIT};
    use rayon::prelude::*;

    let params = HyperParams::new(q, h, n)?;
    let a = params.q_exponent();
    let sub = params.char_field()?;
    let big = params.point_field()?;
    guard("symmetry point enumeration", params.space_size(h), BRUTE_LIMIT)?;
    let order = big.order() as u64;
    let hh = h as usize;
    let points: Vec<Vec<Fe>> = (0..order.pow(h))
        .into_par_iter()
        .filter_map(|mut idx| {
            let v: Vec<Fe> = (0..hh)
                .map(|_| {
                    let x = Fe((idx % order) as u32);
                    idx /= order;
                    x
                })
                .collect();
            match d_full(&big, q, h, &v) {
                Ok(d) if d.is_zero() => Some(v),
                _ => None,
            }
        })
        .collect();
    let unit_count = (sub.order() as u128 - 1) * (sub.order() as u128).pow(h);
    let exhaustive = unit_count * points.len() as u128 <= EXHAUSTIVE_LIMIT;
    let gens = group_elements(&sub, hh, a, exhaustive);
    let embedded = gens
        .iter()
        .map(|r| embed_poly(&big, &sub, r))
        .collect::<Result<Vec<_>>>()?;
    let failures: u64 = embedded
        .par_iter()
        .map(|r| -> Result<u64> {
            let mut bad = 0;
            for p in &points {
                let img = act_on_point(&big, r, p)?;
                if !d_full(&big, q, h, &img)?.is_zero() {
                    bad += 1;
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let checks = (embedded.len() * points.len()) as u64;

    // Action law on pairs drawn from the generating set and a few points.
    let mut law = true;
    let sample: Vec<&Vec<Fe>> = points.iter().step_by((points.len() / 8).max(1)).collect();
    for r in embedded.iter().step_by((embedded.len() / 6).max(1)) {
        for r2 in embedded.iter().rev().step_by((embedded.len() / 6).max(1)) {
            let rr = r.mul(r2);
            for p in &sample {
                let g = point_element(&big, p, a)?;
                let lhs = SkewPolynomial::r_action(r, &SkewPolynomial::r_action(r2, &g)?)?;
                let rhs = SkewPolynomial::r_action(&rr, &g)?;
                law &= lhs == rhs;
            }
        }
    }

    let mut center = true;
    for c in sub.elements() {
        let mut coeffs = vec![FieldElement::new(&sub, Fe::ZERO); hh + 1];
        coeffs[0] = FieldElement::new(&sub, Fe::ONE);
        coeffs[hh] = FieldElement::new(&sub, c);
        let r = embed_poly(&big, &sub, &SkewPolynomial::new(coeffs, a))?;
        for p in &sample {
            let img = act_on_point(&big, &r, p)?;
            let tr = h_translate(&big, &sub, q, h, p, sub.neg(c), Convention::Full)?;
            center &= img == tr;
        }
    }

    Ok(SymmetryReport {
        q,
        h,
        n,
        mode: if exhaustive { "exhaustive" } else { "generators" },
        group_elements: embedded.len() as u64,
        points: points.len() as u64,
        checks,
        failures,
        action_law_holds: law,
        center_matches_translation: center,
        preserved: failures == 0,
    })
}
