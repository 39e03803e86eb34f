//! The sampled determinant-functor suite: compatibility of `mu_2` with
//! `[pi]`, Drinfeld structures, the trace lemma, `Delta^(q-1)` and
//! multilinearity.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::additive::{digit_action, TieBreak};
use super::model::E2Model;
use super::series::{Achieved, TruncatedSeries};
use super::torsion::{drinfeld_outcome, mu_n, DrinfeldBasis};
use crate::error::Result;
use crate::ffield::Fe;
use crate::hypersurface::moore_generic;
use crate::report::{seconds, ExactRational};
use crate::ring::CommRing;

/// Number of random matrices in the trace-lemma check.
pub const TRACE_MATRICES: usize = 10;

/// Number of random substitutions in the multilinearity check.
pub const LINEARITY_TRIALS: usize = 4;

/// One verified identity. `slack` is how far past the size of the compared
/// terms the identity was confirmed, in pi-units.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub residual: Achieved,
    pub scale: Option<ExactRational>,
    pub slack: ExactRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormalModuleSample {
    pub label: String,
    /// `v(V_i)` in pi-units; `None` for `V_i = 0`.
    pub v_valuations: Vec<Option<ExactRational>>,
    /// `v(X_r - x_r)` in pi-units; `None` when the canonical point is
    /// already a root.
    pub level1_gain: Vec<Option<ExactRational>>,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormalModuleReport {
    pub q: u32,
    pub h: u32,
    pub e: i64,
    pub precision: i64,
    pub residue_degree: u32,
    pub seed: u64,
    pub samples: Vec<FormalModuleSample>,
    pub all_pass: bool,
    pub wall_time_seconds: String,
}

/// Smallest t-valuation of `V_i` for which the level-2 points stay in
/// `E_2`: the linear term of `[pi]_u` then dominates every digit equation.
pub fn near_canonical_floor(model: &E2Model) -> i64 {
    let big_q = model.big_q();
    big_q * big_q - model.q() as i64 * big_q + 1
}

/// A random deformation with every `V_i` supported on t-degrees
/// `[floor, floor + e)` of [`near_canonical_floor`], digits uniform in the
/// residue field.
pub fn near_canonical_sample<R: Rng>(model: &E2Model, rng: &mut R) -> Vec<TruncatedSeries> {
    let floor = near_canonical_floor(model);
    let order = model.residue().order();
    (1..model.h())
        .map(|_| {
            let digits = (0..model.e()).map(|_| Fe(rng.gen_range(0..order))).collect();
            model.series(floor, digits)
        })
        .collect()
}

/// Runs the suite on `u = 0` and `samples` random near-canonical points.
pub fn verify_formal_module(
    q: u32,
    h: u32,
    samples: usize,
    prec: Option<i64>,
    residue_degree: Option<u32>,
    seed: u64,
) -> Result<FormalModuleReport> {
    let start = Instant::now();
    let model = E2Model::build(q, h, prec, residue_degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = vec![("canonical".to_string(), vec![model.zero(); h as usize - 1])];
    for i in 0..samples {
        points.push((format!("sample {}", i + 1), near_canonical_sample(&model, &mut rng)));
    }
    // per-sample seeds keep the random matrices independent of scheduling
    let seeds: Vec<u64> = (0..points.len()).map(|_| rng.gen()).collect();
    let reports = points
        .par_iter()
        .zip(seeds)
        .map(|((label, v), s)| verify_sample(&model, label, v, s))
        .collect::<Result<Vec<_>>>()?;
    let all_pass = reports.iter().all(|r| r.pass);
    Ok(FormalModuleReport {
        q,
        h,
        e: model.e(),
        precision: model.precision(),
        residue_degree: model.residue_degree(),
        seed,
        samples: reports,
        all_pass,
        wall_time_seconds: seconds(start.elapsed()),
    })
}

/// All five checks at one deformation `V`.
pub fn verify_sample(model: &E2Model, label: &str, v: &[TruncatedSeries], seed: u64) -> Result<FormalModuleSample> {
    let e = model.e();
    let a = model.twist();
    let h = model.h() as usize;
    let module = model.deformed(v)?;
    let x_lift = model.lift_level1(&module, TieBreak::Least)?;
    let x: Vec<_> = x_lift.iter().map(|l| l.root.clone()).collect();
    let y: Vec<_> = model
        .lift_level2(&module, &x, TieBreak::Least)?
        .into_iter()
        .map(|l| l.root)
        .collect();
    let lt = model.lubin_tate();
    let mut checks = Vec::new();

    // (a) [pi]_LT(mu_2(Y)) = mu_1([pi] Y)
    let mu2 = mu_n(&y, 2, &module)?;
    let images: Vec<_> = y.iter().map(|yi| module.eval(yi)).collect();
    let mu1 = mu_n(&images, 1, &module)?;
    checks.push(compare("compatibility [pi]_LT(mu_2) = mu_1([pi] Y)", &lt.eval(&mu2), &mu1, e));

    // (b) mu_2(Y) is a level-2 structure for LT; the module bases pass too
    for (name, basis) in [
        ("drinfeld level 1 (module)", DrinfeldBasis { level: 1, points: x.clone(), module: module.clone() }),
        ("drinfeld level 2 (module)", DrinfeldBasis { level: 2, points: y.clone(), module: module.clone() }),
        ("drinfeld level 2 (LT, mu_2)", DrinfeldBasis { level: 2, points: vec![mu2.clone()], module: lt.clone() }),
    ] {
        let out = drinfeld_outcome(&basis, e)?;
        checks.push(IdentityCheck {
            name: name.into(),
            pass: out.holds,
            slack: out.defect.valuation.clone(),
            residual: out.defect,
            scale: None,
        });
    }

    // (c) trace lemma
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = model.base_elements();
    for trial in 0..TRACE_MATRICES {
        // the first matrix is the identity: both sides are [h]_LT(mu_2)
        let m: Vec<Vec<(Fe, Fe)>> = (0..h)
            .map(|i| {
                (0..h)
                    .map(|j| {
                        if trial == 0 {
                            (if i == j { Fe::ONE } else { Fe::ZERO }, Fe::ZERO)
                        } else {
                            (base[rng.gen_range(0..base.len())], base[rng.gen_range(0..base.len())])
                        }
                    })
                    .collect()
            })
            .collect();
        let mut lhs = model.zero();
        for i in 0..h {
            let mut row = model.zero();
            for j in 0..h {
                row = row.add(&digit_action(&module, m[i][j].0, m[i][j].1, &y[j]));
            }
            let mut args = y.clone();
            args[i] = row;
            lhs = lhs.add(&mu_n(&args, 2, &module)?);
        }
        let field = model.residue();
        let (t0, t1) = (0..h).fold((Fe::ZERO, Fe::ZERO), |(s0, s1), i| {
            (field.add(s0, m[i][i].0), field.add(s1, m[i][i].1))
        });
        let rhs = digit_action(lt, t0, t1, &mu2);
        let name = if trial == 0 {
            "trace lemma (M = identity)".to_string()
        } else {
            format!("trace lemma (random M #{trial})")
        };
        checks.push(compare(&name, &lhs, &rhs, e));
    }

    // (d) Delta^(q-1) = (-1)^h pi, and Delta is locally constant
    let delta = moore_generic(&x, a);
    let lhs = delta.pow(model.q() as u64 - 1);
    let rhs = model.pi().scale(model.sign(h % 2 == 1));
    checks.push(compare("Delta^(q-1) = (-1)^h pi", &lhs, &rhs, e));
    checks.push(compare("Delta equals its canonical value", &delta, model.delta(), e));

    // (e) k-linearity in each slot and alternation
    for trial in 0..LINEARITY_TRIALS {
        let slot = trial % h;
        let coeffs: Vec<Fe> = (0..h).map(|_| base[rng.gen_range(0..base.len())]).collect();
        let z = y
            .iter()
            .zip(&coeffs)
            .fold(model.zero(), |acc, (yi, &c)| acc.add(&yi.scale(c)));
        let mut args = y.clone();
        args[slot] = z;
        let lhs = mu_n(&args, 2, &module)?;
        let rhs = mu2.scale(coeffs[slot]);
        checks.push(compare(&format!("linearity in slot {} (trial {})", slot + 1, trial + 1), &lhs, &rhs, e));
    }
    if h >= 2 {
        let mut swapped = y.clone();
        swapped.swap(0, 1);
        let lhs = mu_n(&swapped, 2, &module)?;
        checks.push(compare("alternation under a swap", &lhs, &mu2.neg(), e));
        let mut repeated = y.clone();
        repeated[1] = y[0].clone();
        let rep = mu_n(&repeated, 2, &module)?;
        checks.push(vanishes("alternation on a repeated point", &rep, mu2.valuation(), e));
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(FormalModuleSample {
        label: label.to_string(),
        v_valuations: v.iter().map(|s| s.normalized_valuation(e).map(ExactRational::from_ratio)).collect(),
        level1_gain: x_lift
            .iter()
            .map(|l| l.gain_valuation.map(|g| ExactRational::new(g, e)))
            .collect(),
        checks,
        pass,
    })
}

/// `lhs = rhs` to the working precision, certified past the size of the
/// terms themselves.
pub(crate) fn compare(name: &str, lhs: &TruncatedSeries, rhs: &TruncatedSeries, e: i64) -> IdentityCheck {
    let scale = match (lhs.valuation(), rhs.valuation()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    vanishes(name, &lhs.sub(rhs), scale, e)
}

/// `value = 0` to the working precision, with `scale` the t-valuation the
/// identity is compared against.
pub(crate) fn vanishes(name: &str, value: &TruncatedSeries, scale: Option<i64>, e: i64) -> IdentityCheck {
    let residual = value.achieved(e);
    let bound = value.valuation_bound();
    let slack = ExactRational::new(bound - scale.unwrap_or(0), e);
    let pass = !residual.exact && scale.is_none_or(|s| bound > s);
    IdentityCheck {
        name: name.to_string(),
        pass,
        residual,
        scale: scale.map(|s| ExactRational::new(s, e)),
        slack,
    }
}
