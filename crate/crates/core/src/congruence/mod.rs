//! Sampled verification of the congruences around the canonical point, in
//! the explicit model of `E_2` from [`crate::formalmod::E2Model`].
//!
//! For a deformation `V` the level-1 basis `X_r` is lifted from the
//! canonical `x_r`. The function `W(zeta)` is the root of
//! `[pi]_LT(T) = det(zeta(X_i) | X_i^q | ... | X_i^{q^(h-1)})` near its
//! canonical value `w(zeta)`. Such a root is unique up to the `pi`-torsion
//! of `LT`, i.e. up to `k`-multiples of `Delta`, so `Y(zeta)` is determined
//! up to a constant in `k`. This is exactly the freedom in choosing the
//! level-2 points. The roots are taken in the residue field `F_{q^M}`;
//! deformations where the single Artin-Schreier digit of `W` has no
//! solution there are rejected and counted.

mod tower;

#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::Fe;
use crate::formalmod::{
    additive_root_lift, Achieved, AdditivePolynomial, DrinfeldBasis, TieBreak, TruncatedSeries,
};
use crate::hypersurface::{b_matrix, d_as_generic, moore_generic, on_hypersurface, Convention};
use crate::report::{seconds, ExactRational};
use crate::ring::{determinant, hessenberg_det, CommRing, FrobeniusRing};

pub use tower::{build_tower, DigitMatrix, TowerModel, MATCHING_LIMIT};

/// Rejected deformations allowed per requested sample.
pub const REJECTION_BUDGET: usize = 64;

/// A deformation `V` with its lifted level-1 basis and, when they exist in
/// `E_2`, the level-2 points.
#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub v: Vec<TruncatedSeries>,
    /// `[pi]_u` with `u_i = pi V_i`.
    pub module: AdditivePolynomial<TruncatedSeries>,
    pub x: Vec<TruncatedSeries>,
    /// `v(X_r - x_r)` in t-units; `None` when `x_r` is already a root.
    pub level1_gain: Vec<Option<i64>>,
    /// `Y_r` with `[pi]_u(Y_r) = X_r`; `None` when they ramify over `E_2`.
    pub y: Option<Vec<TruncatedSeries>>,
    pub tie: TieBreak,
}

/// Lifts the level-1 basis for `V` and tries the level-2 points.
pub fn sample_point(tower: &TowerModel, v: Vec<TruncatedSeries>, tie: TieBreak) -> Result<SamplePoint> {
    let m = tower.model();
    let module = m.deformed(&v)?;
    let lifts = m.lift_level1(&module, tie)?;
    let level1_gain = lifts.iter().map(|l| l.gain_valuation).collect();
    let x: Vec<_> = lifts.into_iter().map(|l| l.root).collect();
    let y = match m.lift_level2(&module, &x, tie) {
        Ok(l) => Some(l.into_iter().map(|l| l.root).collect()),
        Err(Error::ResidueUnsolvable { .. }) | Err(Error::LiftFailed(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(SamplePoint {
        v,
        module,
        x,
        level1_gain,
        y,
        tie,
    })
}

/// Measured valuation against a threshold, both in pi-units.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdCheck {
    /// `r` for the level-1 check, `j` (for `zeta^{q^j}`) otherwise.
    pub index: u32,
    pub achieved: Achieved,
    pub threshold: ExactRational,
    pub pass: bool,
}

impl ThresholdCheck {
    fn new(index: u32, residual: &TruncatedSeries, threshold: ExactRational, e: i64) -> Self {
        let achieved = residual.achieved(e);
        let pass = achieved.meets(&threshold);
        ThresholdCheck {
            index,
            achieved,
            threshold,
            pass,
        }
    }
}

/// `q - 1 + q/(q^h - 1)`.
pub fn level1_threshold(q: u32, h: u32) -> ExactRational {
    let (q, big) = (q as i64, (q as i64).pow(h));
    ExactRational::new((q - 1) * (big - 1) + q, big - 1)
}

/// `delta = q - 1 + (q-1)/(q^h - 1) + 1/(q - 1)`.
pub fn w_threshold(q: u32, h: u32) -> ExactRational {
    let (q, big) = (q as i64, (q as i64).pow(h));
    let den = (big - 1) * (q - 1);
    ExactRational::new((q - 1) * den + (q - 1) * (q - 1) + (big - 1), den)
}

/// `epsilon = q - 2 + (q-1)/(q^h - 1)`.
pub fn epsilon_threshold(q: u32, h: u32) -> ExactRational {
    let (q, big) = (q as i64, (q as i64).pow(h));
    ExactRational::new((q - 2) * (big - 1) + q - 1, big - 1)
}

/// `D_r = (-1)^(h-1) det` of the bordered matrix whose last column is
/// `x_r^{q^k} + pi x_r V_{h-k}^{q^k}` below a first-row `x_r`.
pub fn level1_approximation(tower: &TowerModel, v: &[TruncatedSeries], r: usize) -> TruncatedSeries {
    let m = tower.model();
    let (h, a) = (m.h() as usize, m.twist());
    let xr = &m.level1()[r];
    let one = m.constant(Fe::ONE);
    let mut mat = b_matrix(v, h, a, &one);
    mat[0][h - 1] = xr.clone();
    let pix = m.pi().mul(xr);
    for (k, row) in mat.iter_mut().enumerate().skip(1) {
        let xq = xr.frobenius(a * k as u32);
        row[h - 1] = xq.add(&pix.mul(&row[h - 1]));
    }
    hessenberg_det(&mat).signed(h % 2 == 0)
}

/// `X_r` agrees with `D_r` to `q - 1 + q/(q^h - 1)`, for each `r`.
pub fn check_level1(tower: &TowerModel, sample: &SamplePoint) -> Vec<ThresholdCheck> {
    let m = tower.model();
    let thr = level1_threshold(m.q(), m.h());
    (0..m.h() as usize)
        .map(|r| {
            let d = level1_approximation(tower, &sample.v, r);
            ThresholdCheck::new(r as u32 + 1, &sample.x[r].sub(&d), thr.clone(), m.e())
        })
        .collect()
}

/// The functions of the invariant-coordinate construction for
/// `zeta^{q^j}`.
#[derive(Clone, Debug)]
pub struct WRecord {
    pub j: u32,
    /// `W(zeta)` at the sample.
    pub big_w: TruncatedSeries,
    /// `w(zeta)`: `W(zeta)` at the canonical point.
    pub small_w: TruncatedSeries,
    /// `Y(zeta) = (-1)^(h-1) (W - w) / Delta`.
    pub yz: TruncatedSeries,
    /// `[pi]_LT(w) = zeta Delta` to `delta`.
    pub w_identity: ThresholdCheck,
    /// Number of digit equations of `W` with several solutions.
    pub ambiguous_digits: u32,
}

/// `zeta(Z_i) = sum_s [m_is](Z_s)` on a basis `z` of `[pi]_u`-torsion.
fn act(module: &AdditivePolynomial<TruncatedSeries>, m: &DigitMatrix, z: &[TruncatedSeries], i: usize) -> TruncatedSeries {
    z.iter().zip(&m[i]).fold(z[0].zero_like(), |acc, (zs, &(m0, m1))| {
        acc.add(&crate::formalmod::digit_action(module, m0, m1, zs))
    })
}

/// `det(zeta(X_i) | X_i^q | ... | X_i^{q^(h-1)})`: the value of
/// `[pi]_LT(W(zeta))`.
pub fn bordered_w_determinant(tower: &TowerModel, sample: &SamplePoint, j: u32) -> TruncatedSeries {
    let m = tower.model();
    let (h, a) = (m.h() as usize, m.twist());
    let mz = tower.m_zeta(j);
    let rows: Vec<Vec<TruncatedSeries>> = (0..h)
        .map(|i| {
            let mut row = vec![act(&sample.module, mz, &sample.x, i)];
            row.extend((1..h).map(|k| sample.x[i].frobenius(a * k as u32)));
            row
        })
        .collect();
    determinant(&rows)
}

/// `W(zeta) = sum_i mu(X_1, .., zeta(Y_i), .., X_h)` straight from the
/// level-2 points; `None` when the sample has none.
pub fn w_from_level2(tower: &TowerModel, sample: &SamplePoint, j: u32) -> Option<TruncatedSeries> {
    let y = sample.y.as_ref()?;
    let m = tower.model();
    let mz = tower.m_zeta(j);
    let mut acc = m.zero();
    for i in 0..m.h() as usize {
        let mut args = sample.x.clone();
        args[i] = act(&sample.module, mz, y, i);
        acc = acc.add(&moore_generic(&args, m.twist()));
    }
    Some(acc)
}

/// `W`, `w` and `Y(zeta)` for `zeta^{q^j}`, with the check of `[pi]_LT(w)
/// = zeta Delta`.
pub fn w_y_functions(tower: &TowerModel, sample: &SamplePoint, j: u32) -> Result<WRecord> {
    let m = tower.model();
    let e = m.e();
    let z = tower.zeta_power(j);
    let small_w = tower.canonical_w(j);
    let lt = m.lubin_tate();
    let w_identity = ThresholdCheck::new(
        j,
        &lt.eval(&small_w).sub(&m.delta().scale(z)),
        w_threshold(m.q(), m.h()),
        e,
    );
    let target = bordered_w_determinant(tower, sample, j);
    let lift = additive_root_lift(lt, &target, &small_w, 1, sample.tie)?;
    let big_w = lift.root;
    let yz = big_w
        .sub(&small_w)
        .div(m.delta())?
        .signed(m.h().is_multiple_of(2));
    Ok(WRecord {
        j,
        big_w,
        small_w,
        yz,
        w_identity,
        ambiguous_digits: lift.ambiguous_digits,
    })
}

/// The determinant on the right of the `Y(zeta)` congruence: the `B`-matrix
/// with its last column below the first row scaled by `zeta^{q^k} - zeta`.
pub fn yzeta_rhs(tower: &TowerModel, v: &[TruncatedSeries], j: u32) -> TruncatedSeries {
    let m = tower.model();
    let (h, a) = (m.h() as usize, m.twist());
    let f = m.residue();
    let z = tower.zeta_power(j);
    let one = m.constant(Fe::ONE);
    let mut mat = b_matrix(v, h, a, &one);
    for (k, row) in mat.iter_mut().enumerate().skip(1) {
        let c = f.sub(f.frobenius(z, a * k as u32), z);
        row[h - 1] = row[h - 1].scale(c);
    }
    hessenberg_det(&mat)
}

/// `Y(zeta)^q - Y(zeta)` agrees with [`yzeta_rhs`] to `epsilon`.
pub fn check_yzeta(tower: &TowerModel, sample: &SamplePoint, rec: &WRecord) -> ThresholdCheck {
    let m = tower.model();
    let lhs = rec.yz.frobenius(m.twist()).sub(&rec.yz);
    let rhs = yzeta_rhs(tower, &sample.v, rec.j);
    ThresholdCheck::new(rec.j, &lhs.sub(&rhs), epsilon_threshold(m.q(), m.h()), m.e())
}

/// The `Y^{q^h} - Y = d_as(V)` check together with the reduction of `Y`.
#[derive(Clone, Debug, Serialize)]
pub struct YSumCheck {
    pub achieved: Achieved,
    pub threshold: ExactRational,
    pub pass: bool,
    /// F_p-digits of the reduction of `Y` in the residue field.
    pub reduced_y: Vec<u32>,
    /// `V_h = (-1)^(h-1) Y` lies on the Artin-Schreier form of the
    /// hypersurface at the reduced point.
    pub on_hypersurface_artin_schreier: bool,
    /// The same point tested against the full determinant.
    pub on_hypersurface_full: bool,
}

/// `Y = sum_i beta^{q^i} Y(zeta^{q^i})`, checked against `d_as(V)`; `recs`
/// holds the records for `j = 0..h`.
pub fn check_y_sum(tower: &TowerModel, sample: &SamplePoint, recs: &[WRecord]) -> Result<YSumCheck> {
    let m = tower.model();
    let (h, a, e) = (m.h() as usize, m.twist(), m.e());
    let f = m.residue();
    let y = recs.iter().fold(m.zero(), |acc, r| {
        acc.add(&r.yz.scale(f.frobenius(tower.beta(), a * r.j)))
    });
    let lhs = y.frobenius(a * h as u32).sub(&y);
    let one = m.constant(Fe::ONE);
    let rhs = d_as_generic(&sample.v, h, a, &one);
    let check = ThresholdCheck::new(0, &lhs.sub(&rhs), epsilon_threshold(m.q(), m.h()), e);
    if y.valuation().is_some_and(|v| v < 0) {
        return Err(Error::VerificationFailed("Y is not integral".into()));
    }
    let ybar = y.coeff(0);
    let mut point: Vec<Fe> = sample.v.iter().map(|s| s.coeff(0)).collect();
    point.push(if h % 2 == 0 { f.neg(ybar) } else { ybar });
    let q = m.q();
    Ok(YSumCheck {
        achieved: check.achieved,
        threshold: check.threshold,
        pass: check.pass,
        reduced_y: f.digits(ybar),
        on_hypersurface_artin_schreier: on_hypersurface(f, q, h as u32, &point, Convention::ArtinSchreier)?,
        on_hypersurface_full: on_hypersurface(f, q, h as u32, &point, Convention::Full)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleCongruence {
    pub label: String,
    /// `v(V_i)` in pi-units; `None` for `V_i = 0`.
    pub v_valuations: Vec<Option<ExactRational>>,
    /// `v(X_r - x_r)` in pi-units.
    pub level1_gain: Vec<Option<ExactRational>>,
    #[serde(rename = "prop41")]
    pub level1: Vec<ThresholdCheck>,
    #[serde(rename = "eq_w")]
    pub w_identity: Vec<ThresholdCheck>,
    pub yzeta: Vec<ThresholdCheck>,
    #[serde(rename = "yprop")]
    pub y_sum: YSumCheck,
    /// Whether `W` from the level-2 points differs from the computed one by
    /// `pi`-torsion of `LT`, when the level-2 points exist in `E_2`.
    pub level2_cross_check: Option<bool>,
    pub pass: bool,
}

/// All congruences at one sample.
pub fn verify_sample(tower: &TowerModel, label: &str, sample: &SamplePoint) -> Result<SampleCongruence> {
    let m = tower.model();
    let e = m.e();
    let level1 = check_level1(tower, sample);
    let recs = (0..m.h())
        .map(|j| w_y_functions(tower, sample, j))
        .collect::<Result<Vec<_>>>()?;
    let yzeta: Vec<_> = recs.iter().map(|r| check_yzeta(tower, sample, r)).collect();
    let y_sum = check_y_sum(tower, sample, &recs)?;
    let w_identity: Vec<_> = recs.iter().map(|r| r.w_identity.clone()).collect();
    let level2_cross_check = match &sample.y {
        Some(_) => {
            let lt = m.lubin_tate();
            let mut ok = true;
            for r in &recs {
                let wa = w_from_level2(tower, sample, r.j).expect("level-2 points exist");
                ok &= lt.eval(&wa.sub(&r.big_w)).is_zero_to_precision();
            }
            Some(ok)
        }
        None => None,
    };
    let pass = level1.iter().chain(&w_identity).chain(&yzeta).all(|c| c.pass)
        && y_sum.pass
        && level2_cross_check != Some(false);
    Ok(SampleCongruence {
        label: label.to_string(),
        v_valuations: sample
            .v
            .iter()
            .map(|s| s.normalized_valuation(e).map(ExactRational::from_ratio))
            .collect(),
        level1_gain: sample.level1_gain.iter().map(|g| g.map(|g| ExactRational::new(g, e))).collect(),
        level1,
        w_identity,
        yzeta,
        y_sum,
        level2_cross_check,
        pass,
    })
}

/// Integral `V` with digits uniform in the residue field on t-degrees
/// `[0, e)`: one pi-unit of depth.
pub fn integral_sample<R: Rng>(tower: &TowerModel, rng: &mut R) -> Vec<TruncatedSeries> {
    let m = tower.model();
    let order = m.residue().order();
    (1..m.h())
        .map(|_| m.series(0, (0..m.e()).map(|_| Fe(rng.gen_range(0..order))).collect()))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Thresholds {
    #[serde(rename = "prop41")]
    pub level1: ExactRational,
    #[serde(rename = "eq_w")]
    pub w_identity: ExactRational,
    pub yzeta: ExactRational,
    #[serde(rename = "yprop")]
    pub y_sum: ExactRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub q: u32,
    pub h: u32,
    pub e: i64,
    pub precision: i64,
    pub residue_degree: u32,
    pub seed: u64,
    pub tie_break: String,
    /// `zeta` and `beta` as F_p-digit vectors in `k_h`.
    pub zeta: Vec<u32>,
    pub beta: Vec<u32>,
    pub thresholds: Thresholds,
    pub invariants: BTreeMap<String, bool>,
    /// Deformations discarded because a residue equation had no solution
    /// in the residue field.
    pub rejected: usize,
    pub samples: Vec<SampleCongruence>,
    pub all_pass: bool,
    pub wall_time_seconds: String,
}

/// Canonical point plus `samples` random integral deformations.
pub fn verify_congruences(
    q: u32,
    h: u32,
    samples: usize,
    prec: Option<i64>,
    residue_degree: Option<u32>,
    seed: u64,
    tie: TieBreak,
) -> Result<CongruenceReport> {
    let start = Instant::now();
    let tower = build_tower(q, h, prec, residue_degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = REJECTION_BUDGET * (samples + 1);
    let canonical = sample_point(&tower, vec![tower.model().zero(); h as usize - 1], tie)?;
    let mut reports = vec![verify_sample(&tower, "canonical", &canonical)?];
    let mut rejected = 0;
    // draw in batches so the accepted samples do not depend on scheduling
    while reports.len() < samples + 1 {
        let need = samples + 1 - reports.len();
        let batch: Vec<_> = (0..need).map(|_| integral_sample(&tower, &mut rng)).collect();
        let results: Vec<Result<SampleCongruence>> = batch
            .into_par_iter()
            .map(|v| {
                let s = sample_point(&tower, v, tie)?;
                verify_sample(&tower, "", &s)
            })
            .collect();
        for r in results {
            match r {
                Ok(mut rep) => {
                    if reports.len() <= samples {
                        rep.label = format!("sample {}", reports.len());
                        reports.push(rep);
                    }
                }
                Err(Error::ResidueUnsolvable { .. }) => {
                    rejected += 1;
                    if rejected > budget {
                        return Err(Error::ResidueUnsolvable {
                            field_order: tower.model().residue().order() as u64,
                            detail: format!(
                                "{rejected} deformations rejected before {samples} samples were found"
                            ),
                        });
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    let all_pass = reports.iter().all(|r| r.pass) && tower.invariants().values().all(|&b| b);
    let kh = tower.model().kh();
    Ok(CongruenceReport {
        q,
        h,
        e: tower.model().e(),
        precision: tower.model().precision(),
        residue_degree: tower.model().residue_degree(),
        seed,
        tie_break: format!("{tie:?}").to_lowercase(),
        zeta: kh.digits(tower.zeta_kh()),
        beta: kh.digits(tower.beta_kh()),
        thresholds: Thresholds {
            level1: level1_threshold(q, h),
            w_identity: w_threshold(q, h),
            yzeta: epsilon_threshold(q, h),
            y_sum: epsilon_threshold(q, h),
        },
        invariants: tower.invariants().clone(),
        rejected,
        samples: reports,
        all_pass,
        wall_time_seconds: seconds(start.elapsed()),
    })
}

/// Whether the level-1 and (when present) level-2 bases of a sample pass
/// the Drinfeld checks.
pub fn sample_drinfeld(sample: &SamplePoint) -> Result<(bool, Option<bool>)> {
    let one = crate::formalmod::drinfeld_check(&DrinfeldBasis {
        level: 1,
        points: sample.x.clone(),
        module: sample.module.clone(),
    })?;
    let two = match &sample.y {
        Some(y) => Some(crate::formalmod::drinfeld_check(&DrinfeldBasis {
            level: 2,
            points: y.clone(),
            module: sample.module.clone(),
        })?),
        None => None,
    };
    Ok((one, two))
}
