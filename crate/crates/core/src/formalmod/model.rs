//! The field `E_2` as truncated Laurent series in a primitive
//! `pi^2`-torsion point `t` of the canonical module `[pi](X) = pi X + X^Q`.
//!
//! With `Q = q^h` and `e = Q(Q - 1)`, the uniformizer `pi` of the base is
//! the series solving `pi = -(pi t + t^Q)^(Q-1)`; then `x1 = pi t + t^Q`
//! satisfies `x1^(Q-1) = -pi` and is a primitive `pi`-torsion point.

use std::sync::Arc;

use num_rational::Ratio;

use super::additive::{additive_root_lift, lubin_tate, make_univ, AdditivePolynomial, RootLift, TieBreak};
use super::series::TruncatedSeries;
use crate::error::{guard, Error, Result};
use crate::ffield::{make_field, make_field_over, prime_power, Fe, Gf};
use crate::hypersurface::moore_generic;
use crate::ring::CommRing;

/// Largest `q^h` accepted by [`E2Model::build`].
pub const MODEL_ORDER_LIMIT: u128 = 16;

pub struct E2Model {
    q: u32,
    h: u32,
    a: u32,
    kh: Arc<Gf>,
    residue: Arc<Gf>,
    residue_degree: u32,
    e: i64,
    prec: i64,
    pi: TruncatedSeries,
    pi_iterations: u32,
    omega: Vec<Fe>,
    level1: Vec<TruncatedSeries>,
    level2: Vec<TruncatedSeries>,
    delta: TruncatedSeries,
    canonical: AdditivePolynomial<TruncatedSeries>,
    lt: AdditivePolynomial<TruncatedSeries>,
}

impl E2Model {
    /// Builds the model to absolute t-precision `prec` (default `e(q+2)`)
    /// with residue field `F_{q^M}` (default `M = 2h`, must be a multiple
    /// of `h` so that `k_h` embeds).
    pub fn build(q: u32, h: u32, prec: Option<i64>, residue_degree: Option<u32>) -> Result<Self> {
        let (p, a) = prime_power(q)?;
        if h == 0 {
            return Err(Error::InvalidArgument("height must be positive".into()));
        }
        let big_q = (q as u128).pow(h);
        guard("q^h for the E_2 model", big_q, MODEL_ORDER_LIMIT)?;
        let big_q = big_q as i64;
        let e = big_q * (big_q - 1);
        let m = residue_degree.unwrap_or(2 * h);
        if m == 0 || !m.is_multiple_of(h) {
            return Err(Error::InvalidArgument(format!(
                "residue degree {m} is not a positive multiple of h = {h}"
            )));
        }
        let prec = prec.unwrap_or(e * (q as i64 + 2));
        if prec < 2 * e + big_q {
            return Err(Error::PrecisionTooLow(format!(
                "precision t^{prec} below the floor t^{} (two pi-units past x1)",
                2 * e + big_q
            )));
        }
        let residue = make_field(p, a * m)?;
        let kh = make_field_over(q, h)?;
        let mono = |c: Fe, k: i64| TruncatedSeries::monomial(&residue, c, k, prec);
        let t = mono(Fe::ONE, 1);
        let t_q = mono(Fe::ONE, big_q);

        // each pass fixes (Q-1)^2 further digits; the truncated map is a
        // contraction, so stabilization means the true fixed point mod t^prec
        let mut pi = mono(residue.neg(Fe::ONE), e);
        let mut iterations = 0;
        loop {
            iterations += 1;
            if iterations as i64 > prec {
                return Err(Error::LiftFailed("fixed point for pi did not stabilize".into()));
            }
            let next = pi.mul(&t).add(&t_q).pow((big_q - 1) as u64).neg();
            let next = TruncatedSeries::from_coeffs(
                &residue,
                e,
                (e..prec).map(|d| next.coeff(d)).collect(),
                prec,
                prec,
            );
            let done = next.sub(&pi).is_zero_to_precision();
            pi = next;
            if done {
                break;
            }
        }

        let x1 = pi.mul(&t).add(&t_q);
        let theta = kh.generator();
        let omega = (0..h)
            .map(|i| residue.embed(&kh, kh.pow(theta, i as u64)))
            .collect::<Result<Vec<_>>>()?;
        let level2: Vec<_> = omega.iter().map(|&w| t.scale(w)).collect();
        let level1: Vec<_> = omega.iter().map(|&w| x1.scale(w)).collect();
        let delta = moore_generic(&level1, a);
        let canonical = make_univ(&pi, &vec![pi.zero_like(); h as usize - 1], a);
        let lt = lubin_tate(&pi, h, a);
        Ok(E2Model {
            q,
            h,
            a,
            kh,
            residue,
            residue_degree: m,
            e,
            prec,
            pi,
            pi_iterations: iterations,
            omega,
            level1,
            level2,
            delta,
            canonical,
            lt,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// `a` with `q = p^a`; the twist of every additive polynomial here.
    pub fn twist(&self) -> u32 {
        self.a
    }

    /// `Q = q^h`.
    pub fn big_q(&self) -> i64 {
        (self.q as i64).pow(self.h)
    }

    /// Ramification index `Q(Q-1)`: the t-valuation of `pi`.
    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn residue(&self) -> &Arc<Gf> {
        &self.residue
    }

    pub fn residue_degree(&self) -> u32 {
        self.residue_degree
    }

    /// `k_h = F_{q^h}` in its own encoding.
    pub fn kh(&self) -> &Arc<Gf> {
        &self.kh
    }

    pub fn pi(&self) -> &TruncatedSeries {
        &self.pi
    }

    pub fn pi_iterations(&self) -> u32 {
        self.pi_iterations
    }

    /// The fixed `k`-basis `omega_i = theta^i` of `k_h`, in residue encoding.
    pub fn omega(&self) -> &[Fe] {
        &self.omega
    }

    /// `x_i^(1) = omega_i x1`.
    pub fn level1(&self) -> &[TruncatedSeries] {
        &self.level1
    }

    /// `x_i^(2) = omega_i t`.
    pub fn level2(&self) -> &[TruncatedSeries] {
        &self.level2
    }

    /// `Delta = mu(x_1^(1), ..., x_h^(1))`.
    pub fn delta(&self) -> &TruncatedSeries {
        &self.delta
    }

    /// `[pi](X) = pi X + X^Q`.
    pub fn canonical(&self) -> &AdditivePolynomial<TruncatedSeries> {
        &self.canonical
    }

    /// `[pi]_LT(X) = pi X + (-1)^(h-1) X^q`.
    pub fn lubin_tate(&self) -> &AdditivePolynomial<TruncatedSeries> {
        &self.lt
    }

    pub fn t(&self) -> TruncatedSeries {
        self.monomial(Fe::ONE, 1)
    }

    pub fn monomial(&self, c: Fe, k: i64) -> TruncatedSeries {
        TruncatedSeries::monomial(&self.residue, c, k, self.prec)
    }

    pub fn constant(&self, c: Fe) -> TruncatedSeries {
        self.monomial(c, 0)
    }

    pub fn zero(&self) -> TruncatedSeries {
        TruncatedSeries::zero(&self.residue, self.prec)
    }

    pub fn series(&self, start: i64, coeffs: Vec<Fe>) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(&self.residue, start, coeffs, self.prec, self.prec)
    }

    /// `(-1)^k` as a residue-field element.
    pub fn sign(&self, negative: bool) -> Fe {
        if negative {
            self.residue.neg(Fe::ONE)
        } else {
            Fe::ONE
        }
    }

    /// The elements of `k = F_q` inside the residue field.
    pub fn base_elements(&self) -> Vec<Fe> {
        base_field_elements(&self.residue, self.a)
    }

    /// An element of `k_h` (own encoding) moved into the residue field.
    pub fn kh_to_residue(&self, z: Fe) -> Result<Fe> {
        self.residue.embed(&self.kh, z)
    }

    /// A t-valuation in pi-units.
    pub fn pi_units(&self, v: i64) -> Ratio<i64> {
        Ratio::new(v, self.e)
    }

    /// `[pi]_u` with `u_i = pi V_i`.
    pub fn deformed(&self, v: &[TruncatedSeries]) -> Result<AdditivePolynomial<TruncatedSeries>> {
        if v.len() + 1 != self.h as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates V_i, got {}",
                self.h - 1,
                v.len()
            )));
        }
        let u: Vec<_> = v.iter().map(|vi| self.pi.mul(vi)).collect();
        Ok(make_univ(&self.pi, &u, self.a))
    }

    /// Roots `X_r` of `[pi]_u` with `v(X_r - x_r) > v(x_r)`.
    pub fn lift_level1(
        &self,
        module: &AdditivePolynomial<TruncatedSeries>,
        tie: TieBreak,
    ) -> Result<Vec<RootLift>> {
        let zero = self.zero();
        self.level1
            .iter()
            .map(|x| additive_root_lift(module, &zero, x, 1, tie))
            .collect()
    }

    /// Roots `Y_r` of `[pi]_u(Y) = X_r` with `v(Y_r - x_r^(2)) > v(x_r^(2))`.
    pub fn lift_level2(
        &self,
        module: &AdditivePolynomial<TruncatedSeries>,
        level1: &[TruncatedSeries],
        tie: TieBreak,
    ) -> Result<Vec<RootLift>> {
        self.level2
            .iter()
            .zip(level1)
            .map(|(y, x)| additive_root_lift(module, x, y, 1, tie))
            .collect()
    }
}

/// `{c : c^q = c}` in a field of characteristic `p` with `q = p^a`.
pub(crate) fn base_field_elements(field: &Gf, a: u32) -> Vec<Fe> {
    field.elements().filter(|&c| field.frobenius(c, a) == c).collect()
}
