//! Truncated Laurent series `sum c_j t^j + O(t^N)` over a finite residue field.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::ffield::{Fe, Gf};
use crate::report::ExactRational;
use crate::ring::{CommRing, FrobeniusRing, TryInv};

/// A measured valuation. When `exact` is false the quantity vanished to
/// the working precision and `valuation` is only a lower bound.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Achieved {
    pub valuation: ExactRational,
    pub exact: bool,
}

impl Achieved {
    /// True when the measured valuation is at least `threshold`. A lower
    /// bound below the threshold decides nothing and counts as a failure.
    pub fn meets(&self, threshold: &ExactRational) -> bool {
        self.valuation >= *threshold
    }
}

/// Invariant: `coeffs[0]` (if any) is nonzero and sits at degree `start`;
/// `start + coeffs.len() == prec`. The zero-to-precision series has no
/// coefficients and `start == prec`.
///
/// `cap` bounds every precision so that Frobenius twists, which multiply
/// precision, do not grow the representation without bound.
#[derive(Clone)]
pub struct TruncatedSeries {
    field: Arc<Gf>,
    start: i64,
    coeffs: Vec<Fe>,
    prec: i64,
    cap: i64,
}

impl TruncatedSeries {
    /// `O(t^cap)`.
    pub fn zero(field: &Arc<Gf>, cap: i64) -> Self {
        TruncatedSeries {
            field: field.clone(),
            start: cap,
            coeffs: Vec::new(),
            prec: cap,
            cap,
        }
    }

    /// The constant `c`, exact up to `cap`.
    pub fn constant(field: &Arc<Gf>, c: Fe, cap: i64) -> Self {
        Self::monomial(field, c, 0, cap)
    }

    /// `c t^k`, exact up to `cap`.
    pub fn monomial(field: &Arc<Gf>, c: Fe, k: i64, cap: i64) -> Self {
        Self::from_coeffs(field, k, vec![c], cap, cap)
    }

    /// `sum_j coeffs[j] t^{start + j} + O(t^prec)`; coefficients at or past
    /// `prec` are dropped.
    pub fn from_coeffs(field: &Arc<Gf>, start: i64, coeffs: Vec<Fe>, prec: i64, cap: i64) -> Self {
        let prec = prec.min(cap);
        let mut s = TruncatedSeries {
            field: field.clone(),
            start,
            coeffs,
            prec,
            cap,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let want = (self.prec - self.start).max(0) as usize;
        if self.start >= self.prec {
            self.coeffs.clear();
        } else {
            self.coeffs.resize(want, Fe::ZERO);
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(i) => {
                self.coeffs.drain(..i);
                self.start += i as i64;
            }
            None => {
                self.coeffs.clear();
                self.start = self.prec;
            }
        }
    }

    pub fn field(&self) -> &Arc<Gf> {
        &self.field
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    /// `None` when indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// The valuation, or the precision when indistinguishable from zero (a
    /// lower bound in that case).
    pub fn valuation_bound(&self) -> i64 {
        self.start
    }

    pub fn lead(&self) -> Option<Fe> {
        self.coeffs.first().copied()
    }

    pub fn coeff(&self, d: i64) -> Fe {
        if d < self.start || d >= self.prec {
            return Fe::ZERO;
        }
        self.coeffs[(d - self.start) as usize]
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowers the precision to `p` (never raises it).
    pub fn truncate(&self, p: i64) -> Self {
        let mut s = self.clone();
        s.prec = s.prec.min(p);
        s.normalize();
        s
    }

    /// Same series with a different precision cap; the precision is clipped
    /// to the new cap.
    pub fn with_cap(&self, cap: i64) -> Self {
        let mut s = self.clone();
        s.cap = cap;
        s.prec = s.prec.min(cap);
        s.normalize();
        s
    }

    fn check(&self, o: &Self) {
        assert!(*self.field == *o.field, "series over different residue fields");
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        self.check(o);
        let prec = self.prec.min(o.prec);
        let start = self.start.min(o.start).min(prec);
        let mut c = vec![Fe::ZERO; (prec - start) as usize];
        for (j, &x) in self.coeffs.iter().enumerate() {
            let d = self.start + j as i64;
            if d < prec {
                c[(d - start) as usize] = x;
            }
        }
        for (j, &y) in o.coeffs.iter().enumerate() {
            let d = o.start + j as i64;
            if d < prec {
                let slot = &mut c[(d - start) as usize];
                let y = if negate { self.field.neg(y) } else { y };
                *slot = self.field.add(*slot, y);
            }
        }
        Self::from_coeffs(&self.field, start, c, prec, self.cap.max(o.cap))
    }

    pub fn scale(&self, c: Fe) -> Self {
        let coeffs = self.coeffs.iter().map(|&x| self.field.mul(c, x)).collect();
        if c.is_zero() {
            return Self::zero(&self.field, self.cap).truncate(self.prec);
        }
        Self::from_coeffs(&self.field, self.start, coeffs, self.prec, self.cap)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_coeffs(&self.field, self.start + k, self.coeffs.clone(), self.prec + k, self.cap)
    }

    fn product(&self, o: &Self) -> Self {
        self.check(o);
        let cap = self.cap.max(o.cap);
        let (va, vb) = (self.start, o.start);
        let prec = (self.prec + vb).min(o.prec + va).min(cap);
        let start = va + vb;
        if start >= prec {
            return Self::zero(&self.field, cap).truncate(prec);
        }
        let n = (prec - start) as usize;
        let f = &self.field;
        let mut c = vec![Fe::ZERO; n];
        for (i, &x) in self.coeffs.iter().enumerate().take(n) {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in o.coeffs.iter().enumerate().take(n - i) {
                if !y.is_zero() {
                    c[i + j] = f.add(c[i + j], f.mul(x, y));
                }
            }
        }
        Self::from_coeffs(f, start, c, prec, cap)
    }

    /// Inverse of a series with a known leading term; precision drops by
    /// twice the valuation.
    pub fn inverse(&self) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::NotInvertible("series is zero to its precision".into()))?;
        let rel = (self.prec - v) as usize;
        let f = &self.field;
        let c0_inv = f.inv(self.coeffs[0]).expect("leading coefficient is nonzero");
        let mut out = vec![Fe::ZERO; rel];
        for n in 0..rel {
            // sum_{j<=n} c_j d_{n-j} = [n == 0]
            let mut acc = if n == 0 { Fe::ONE } else { Fe::ZERO };
            for j in 1..=n.min(self.coeffs.len() - 1) {
                acc = f.sub(acc, f.mul(self.coeffs[j], out[n - j]));
            }
            out[n] = f.mul(acc, c0_inv);
        }
        Ok(Self::from_coeffs(f, -v, out, self.prec - 2 * v, self.cap))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.product(&o.inverse()?))
    }

    /// Raises to `p^k`: coefficients twist and degrees and precision scale.
    pub fn frob(&self, k: u32) -> Self {
        let pk = self.field.characteristic().pow(k) as i64;
        let f = &self.field;
        let prec = self.prec.saturating_mul(pk).min(self.cap);
        let start = self.start * pk;
        if start >= prec {
            return Self::zero(f, self.cap).truncate(prec);
        }
        let mut c = vec![Fe::ZERO; (prec - start) as usize];
        for (j, &x) in self.coeffs.iter().enumerate() {
            let d = (j as i64) * pk;
            if d >= prec - start {
                break;
            }
            c[d as usize] = f.frobenius(x, k);
        }
        Self::from_coeffs(f, start, c, prec, self.cap)
    }

    /// Fails with [`Error::PrecisionTooLow`] when fewer than `floor` t-adic
    /// digits are known.
    pub fn require_precision(&self, floor: i64, what: &str) -> Result<()> {
        if self.prec < floor {
            return Err(Error::PrecisionTooLow(format!(
                "{what}: known to t^{}, need t^{floor}",
                self.prec
            )));
        }
        Ok(())
    }

    /// The valuation of this series read as a residual: exact when nonzero,
    /// otherwise the precision as a lower bound. Measured in units of `e`.
    pub fn achieved(&self, e: i64) -> Achieved {
        Achieved {
            valuation: ExactRational::new(self.start, e),
            exact: !self.coeffs.is_empty(),
        }
    }

    /// Valuation in units of `e`, as an exact rational; `None` for zero.
    pub fn normalized_valuation(&self, e: i64) -> Option<Ratio<i64>> {
        self.valuation().map(|v| Ratio::new(v, e))
    }
}

impl PartialEq for TruncatedSeries {
    /// Equality as elements known to the smaller precision.
    fn eq(&self, o: &Self) -> bool {
        *self.field == *o.field && self.combine(o, true).is_zero_to_precision()
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .take(6)
            .map(|(j, c)| format!("{}*t^{}", c.0, self.start + j as i64))
            .collect();
        write!(f, "[{} + O(t^{})]", shown.join(" + "), self.prec)
    }
}

impl CommRing for TruncatedSeries {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field, self.cap)
    }
    fn one_like(&self) -> Self {
        Self::constant(&self.field, Fe::ONE, self.cap)
    }
    fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }
    fn neg(&self) -> Self {
        self.scale(self.field.neg(Fe::ONE))
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.product(rhs)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_to_precision()
    }
}

impl FrobeniusRing for TruncatedSeries {
    fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }
    fn frobenius(&self, k: u32) -> Self {
        self.frob(k)
    }
}

impl TryInv for TruncatedSeries {
    fn try_inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}
