//! q-linearized polynomials `X -> sum a_i X^{q^i}` and their roots.

use crate::error::{Error, Result};
use crate::ffield::Fe;
use crate::ring::FrobeniusRing;

use super::series::TruncatedSeries;

/// `sum_i a_i X^{q^i}` with `q = p^a`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdditivePolynomial<R> {
    coeffs: Vec<R>,
    a: u32,
}

impl<R: FrobeniusRing> AdditivePolynomial<R> {
    pub fn new(coeffs: Vec<R>, a: u32) -> Self {
        assert!(!coeffs.is_empty(), "an additive polynomial needs a coefficient");
        AdditivePolynomial { coeffs, a }
    }

    /// `[c](X) = cX`.
    pub fn scalar(c: R, a: u32) -> Self {
        Self::new(vec![c], a)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn twist(&self) -> u32 {
        self.a
    }

    /// Index of the top coefficient (the `q`-degree).
    pub fn q_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.coeffs[0].mul(x);
        let mut xp = x.clone();
        for c in &self.coeffs[1..] {
            xp = xp.frobenius(self.a);
            acc = acc.add(&c.mul(&xp));
        }
        acc
    }

    /// Applies the polynomial `n` times.
    pub fn iterate(&self, x: &R, n: u32) -> R {
        (0..n).fold(x.clone(), |acc, _| self.eval(&acc))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = self.coeffs[0].zero_like();
        let coeffs = (0..n)
            .map(|i| {
                let x = self.coeffs.get(i).unwrap_or(&zero);
                let y = o.coeffs.get(i).unwrap_or(&zero);
                x.add(y)
            })
            .collect();
        Self::new(coeffs, self.a)
    }

    /// `(f o g)_k = sum_{i+j=k} f_i g_j^{q^i}`.
    pub fn compose(&self, g: &Self) -> Self {
        assert_eq!(self.a, g.a, "twist mismatch");
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + g.coeffs.len() - 1];
        for (i, fi) in self.coeffs.iter().enumerate() {
            for (j, gj) in g.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&fi.mul(&gj.frobenius(self.a * i as u32)));
            }
        }
        Self::new(out, self.a)
    }
}

/// `[pi]_u(X) = pi X + u_1 X^q + ... + u_{h-1} X^{q^{h-1}} + X^{q^h}`.
pub fn make_univ<R: FrobeniusRing>(pi: &R, u: &[R], a: u32) -> AdditivePolynomial<R> {
    let mut c = vec![pi.clone()];
    c.extend(u.iter().cloned());
    c.push(pi.one_like());
    AdditivePolynomial::new(c, a)
}

/// `[pi]_LT(X) = pi X + (-1)^{h-1} X^q`.
pub fn lubin_tate<R: FrobeniusRing>(pi: &R, h: u32, a: u32) -> AdditivePolynomial<R> {
    AdditivePolynomial::new(vec![pi.clone(), pi.one_like().signed(h.is_multiple_of(2))], a)
}

/// `[m0 + m1 pi](X) = m0 X + m1 [pi](X)` for `m0, m1` in the constant field.
pub fn digit_action(
    pi_poly: &AdditivePolynomial<TruncatedSeries>,
    m0: Fe,
    m1: Fe,
    x: &TruncatedSeries,
) -> TruncatedSeries {
    let mut out = x.scale(m0);
    if !m1.is_zero() {
        out = crate::ring::CommRing::add(&out, &pi_poly.eval(x).scale(m1));
    }
    out
}

/// How to break ties among the solutions of a residue equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Least field code.
    #[default]
    Least,
    /// Greatest field code; an independent deterministic alternative.
    Greatest,
}

/// Solution of `f(X) = target` near `seed`.
#[derive(Clone, Debug)]
pub struct RootLift {
    pub root: TruncatedSeries,
    /// `v(root - seed)` in t-units, `None` if the seed was already a root.
    pub gain_valuation: Option<i64>,
    /// How many digit equations had more than one solution.
    pub ambiguous_digits: u32,
}

/// Digit-by-digit solution of `f(X) = target` with `v(X - seed) >= v(seed) +
/// min_gain`. At each step the lowest term of the residual fixes the next
/// digit `c t^k` through the additive residue equation
/// `sum_{i in I} lead(a_i) c^{q^i} = lead(residual)`, `I` the terms of `f`
/// that attain the minimum valuation at `k`.
pub fn additive_root_lift(
    f: &AdditivePolynomial<TruncatedSeries>,
    target: &TruncatedSeries,
    seed: &TruncatedSeries,
    min_gain: i64,
    tie: TieBreak,
) -> Result<RootLift> {
    use crate::ring::CommRing;
    let field = seed.field().clone();
    let cap = seed.cap();
    let q = field.characteristic().pow(f.twist()) as i64;
    let vals: Vec<Option<i64>> = f.coeffs().iter().map(|c| c.valuation()).collect();
    if vals.iter().all(|v| v.is_none()) {
        return Err(Error::LiftFailed("polynomial vanishes to precision".into()));
    }
    let seed_val = seed.valuation().unwrap_or(seed.precision());
    let mut x = seed.clone();
    let mut residual = target.sub(&f.eval(seed));
    let mut first_gain = None;
    let mut ambiguous = 0;
    // `q^i` for each coefficient index
    let qpows: Vec<i64> = (0..f.coeffs().len()).map(|i| q.pow(i as u32)).collect();
    let mut guard = 0usize;
    while let Some(vr) = residual.valuation() {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::Internal("root lift did not terminate".into()));
        }
        // smallest k with min_i (v_i + q^i k) = vr: k = max_i (vr - v_i) / q^i
        let mut k_num: Option<(i64, i64)> = None;
        for (i, v) in vals.iter().enumerate() {
            if let Some(v) = v {
                let cand = (vr - v, qpows[i]);
                k_num = Some(match k_num {
                    None => cand,
                    Some(best) => {
                        if cand.0 * best.1 > best.0 * cand.1 {
                            cand
                        } else {
                            best
                        }
                    }
                });
            }
        }
        let (num, den) = k_num.expect("some coefficient is nonzero");
        if num.rem_euclid(den) != 0 {
            return Err(Error::ResidueUnsolvable {
                field_order: field.order() as u64,
                detail: format!("next digit sits at fractional t-degree {num}/{den} (ramified)"),
            });
        }
        let k = num.div_euclid(den);
        if first_gain.is_none() {
            if k < seed_val + min_gain {
                return Err(Error::LiftFailed(format!(
                    "first correction at t^{k}, need t^{} or beyond",
                    seed_val + min_gain
                )));
            }
            first_gain = Some(k);
        }
        let active: Vec<(usize, Fe)> = vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                v.filter(|v| v + qpows[i] * k == vr)
                    .map(|_| (i, f.coeffs()[i].lead().expect("nonzero coefficient")))
            })
            .collect();
        let r = residual.lead().expect("residual has a valuation");
        let a = f.twist();
        let eval_residue = |c: Fe| {
            active.iter().fold(Fe::ZERO, |acc, &(i, l)| {
                field.add(acc, field.mul(l, field.frobenius(c, a * i as u32)))
            })
        };
        let mut solutions = field.elements().filter(|&c| eval_residue(c) == r);
        let first = solutions.next();
        let c = match (first, tie) {
            (None, _) => {
                return Err(Error::ResidueUnsolvable {
                    field_order: field.order() as u64,
                    detail: format!("digit at t^{k} has no solution in the residue field"),
                })
            }
            (Some(c), TieBreak::Least) => {
                if solutions.next().is_some() {
                    ambiguous += 1;
                }
                c
            }
            (Some(c), TieBreak::Greatest) => {
                let last = solutions.last();
                if last.is_some() {
                    ambiguous += 1;
                }
                last.unwrap_or(c)
            }
        };
        let step = TruncatedSeries::monomial(&field, c, k, cap);
        x = x.add(&step);
        residual = residual.sub(&f.eval(&step));
    }
    let p_res = residual.precision();
    let root = x.truncate(resolved_precision(&vals, &qpows, p_res));
    Ok(RootLift {
        root,
        gain_valuation: first_gain,
        ambiguous_digits: ambiguous,
    })
}

/// The precision to which a root is determined when `f(X) - target` is
/// known to vanish only modulo `t^{p_res}`: the least `k` with
/// `v_i + q^i k >= p_res` for the dominant term.
fn resolved_precision(vals: &[Option<i64>], qpows: &[i64], p_res: i64) -> i64 {
    // an error term c t^k changes f by roughly min_i(v_i + q^i k); it is
    // invisible once that minimum reaches p_res
    let mut k = i64::MIN;
    for (i, v) in vals.iter().enumerate() {
        if let Some(v) = v {
            let need = (p_res - v + qpows[i] - 1).div_euclid(qpows[i]);
            k = k.max(need);
        }
    }
    k
}
