//! The determinant form `mu_n` and Drinfeld level structures.

use super::additive::AdditivePolynomial;
use super::model::base_field_elements;
use super::series::{Achieved, TruncatedSeries};
use crate::error::{Error, Result};
use crate::ring::{determinant, CommRing, FrobeniusRing};

/// `mu_n(X_1..X_h) = sum_a mu([pi^a_1] X_1, ..., [pi^a_h] X_h)` over
/// `0 <= a_i < n` with `sum a_i = (h-1)(n-1)`; `mu` is the Moore
/// determinant, and `mu(X) = X` when `h = 1`.
///
/// Every point must be `pi^n`-torsion of `module` to the working precision.
pub fn mu_n<R: FrobeniusRing>(points: &[R], n: u32, module: &AdditivePolynomial<R>) -> Result<R> {
    let h = points.len();
    if h == 0 || n == 0 {
        return Err(Error::InvalidArgument("mu_n needs h >= 1 points and n >= 1".into()));
    }
    // iterates[i][a] = [pi^a] X_i for a <= n
    let iterates: Vec<Vec<R>> = points
        .iter()
        .map(|x| {
            let mut v = vec![x.clone()];
            for _ in 0..n {
                let next = module.eval(v.last().expect("nonempty"));
                v.push(next);
            }
            v
        })
        .collect();
    if let Some(i) = iterates.iter().position(|it| !it[n as usize].is_zero()) {
        return Err(Error::InvalidArgument(format!(
            "point {} is not pi^{n}-torsion to the working precision",
            i + 1
        )));
    }
    let target = (h as u32 - 1) * (n - 1);
    let a = module.twist();
    let mut acc: Option<R> = None;
    for_each_tuple(h, n, target, &mut |tuple| {
        let rows: Vec<R> = tuple.iter().enumerate().map(|(i, &ai)| iterates[i][ai as usize].clone()).collect();
        let m: Vec<Vec<R>> = rows
            .iter()
            .map(|x| (0..h).map(|j| x.frobenius(a * j as u32)).collect())
            .collect();
        let d = determinant(&m);
        acc = Some(match acc.take() {
            None => d,
            Some(s) => s.add(&d),
        });
    });
    Ok(acc.expect("at least one tuple has the required sum"))
}

fn for_each_tuple(h: usize, n: u32, target: u32, f: &mut dyn FnMut(&[u32])) {
    fn rec(cur: &mut Vec<u32>, h: usize, n: u32, left: u32, f: &mut dyn FnMut(&[u32])) {
        if cur.len() == h {
            if left == 0 {
                f(cur);
            }
            return;
        }
        let slots = (h - cur.len() - 1) as u32;
        for a in 0..n.min(left + 1) {
            // the remaining slots can absorb at most (n-1) each
            if left - a > slots * (n - 1) {
                continue;
            }
            cur.push(a);
            rec(cur, h, n, left - a, f);
            cur.pop();
        }
    }
    rec(&mut Vec::with_capacity(h), h, n, target, f);
}

/// Points claimed to form a Drinfeld level-`pi^level` basis for the module
/// with `[pi] = module`.
#[derive(Clone, Debug)]
pub struct DrinfeldBasis {
    pub level: u32,
    pub points: Vec<TruncatedSeries>,
    pub module: AdditivePolynomial<TruncatedSeries>,
}

/// Result of a Drinfeld check: `defect` is the least valuation among the
/// coefficient differences (a lower bound when `holds`).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DrinfeldOutcome {
    pub holds: bool,
    pub defect: Achieved,
}

/// Level 1: the product of `T - sum a_i x_i` over `a in k^h`, scaled by the
/// leading coefficient of `[pi]`, equals `[pi]` coefficientwise. Level 2:
/// the points are `pi^2`-torsion and their images under `[pi]` pass level 1.
pub fn drinfeld_check(basis: &DrinfeldBasis) -> Result<bool> {
    Ok(drinfeld_outcome(basis, 1)?.holds)
}

/// [`drinfeld_check`] with the defect measured in units of `e`.
pub fn drinfeld_outcome(basis: &DrinfeldBasis, e: i64) -> Result<DrinfeldOutcome> {
    match basis.level {
        1 => level_one(&basis.points, &basis.module, e),
        2 => {
            let images: Vec<_> = basis.points.iter().map(|y| basis.module.eval(y)).collect();
            let mut worst: Option<TruncatedSeries> = None;
            for x in &images {
                let r = basis.module.eval(x);
                if worst.as_ref().is_none_or(|w| r.valuation_bound() < w.valuation_bound()) {
                    worst = Some(r);
                }
            }
            let torsion = worst.expect("a basis has points");
            let lower = level_one(&images, &basis.module, e)?;
            let torsion_ok = torsion.is_zero_to_precision();
            let t_ach = torsion.achieved(e);
            let defect = if t_ach.valuation < lower.defect.valuation { t_ach } else { lower.defect };
            Ok(DrinfeldOutcome {
                holds: torsion_ok && lower.holds,
                defect,
            })
        }
        l => Err(Error::InvalidArgument(format!("Drinfeld checks cover levels 1 and 2, not {l}"))),
    }
}

fn level_one(
    points: &[TruncatedSeries],
    module: &AdditivePolynomial<TruncatedSeries>,
    e: i64,
) -> Result<DrinfeldOutcome> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty Drinfeld basis".into()))?;
    let field = first.field().clone();
    let a = module.twist();
    let q = field.characteristic().pow(a) as usize;
    let scalars = base_field_elements(&field, a);
    let deg = q.pow(points.len() as u32);
    let f_deg = q.pow(module.q_degree() as u32);

    // dense coefficients of prod (T - r), lowest degree first
    let one = first.one_like();
    let mut prod = vec![one.clone()];
    let mut combo = vec![0usize; points.len()];
    loop {
        let r = combo
            .iter()
            .zip(points)
            .fold(first.zero_like(), |acc, (&ci, x)| acc.add(&x.scale(scalars[ci])));
        let mut next = vec![first.zero_like(); prod.len() + 1];
        for (j, c) in prod.iter().enumerate() {
            next[j + 1] = next[j + 1].add(c);
            next[j] = next[j].sub(&c.mul(&r));
        }
        prod = next;
        // odometer over k^h
        let mut i = 0;
        while i < combo.len() {
            combo[i] += 1;
            if combo[i] < q {
                break;
            }
            combo[i] = 0;
            i += 1;
        }
        if i == combo.len() {
            break;
        }
    }
    debug_assert_eq!(prod.len(), deg + 1);

    let coeffs = module.coeffs();
    let lead = coeffs.last().expect("nonempty");
    let mut expected = vec![first.zero_like(); deg.max(f_deg) + 1];
    for (i, c) in coeffs.iter().enumerate() {
        expected[q.pow(i as u32)] = c.clone();
    }
    let linear_val = coeffs[0].valuation().unwrap_or(i64::MAX);
    let mut holds = deg == f_deg;
    let mut defect: Option<TruncatedSeries> = None;
    for (d, want) in expected.iter().enumerate() {
        let got = prod.get(d).map_or_else(|| first.zero_like(), |c| c.mul(lead));
        let diff = got.sub(want);
        if diff.valuation().is_none() && diff.precision() <= linear_val {
            return Err(Error::PrecisionTooLow(format!(
                "coefficient of T^{d} known only to t^{}",
                diff.precision()
            )));
        }
        if !diff.is_zero_to_precision() {
            holds = false;
        }
        if defect.as_ref().is_none_or(|w| diff.valuation_bound() < w.valuation_bound()) {
            defect = Some(diff);
        }
    }
    Ok(DrinfeldOutcome {
        holds,
        defect: defect.expect("some coefficient").achieved(e),
    })
}
