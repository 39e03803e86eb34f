//! The model of `E_2` together with the embedding of `O_E` into
//! `M_h(O_F / pi^2)` induced by the canonical basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{guard, Error, Result};
use crate::ffield::{Fe, Gf};
use crate::formalmod::{digit_action, mu_n, E2Model, TruncatedSeries};
use crate::hypersurface::{moore, moore_generic};
use crate::ring::CommRing;

/// Largest `q^{2h}` searched per row when matching multiplication matrices.
pub const MATCHING_LIMIT: u128 = 1 << 16;

/// An `h x h` matrix over `O_F / pi^2`; entry `(m0, m1)` is `m0 + m1 pi`,
/// both digits in `k` (residue-field encoding).
pub type DigitMatrix = Vec<Vec<(Fe, Fe)>>;

pub struct TowerModel {
    model: E2Model,
    zeta: Fe,
    beta: Fe,
    /// `M_{zeta^{q^j}}` for `j = 0..h`.
    m_zeta: Vec<DigitMatrix>,
    /// `w(zeta^{q^j})` for `j = 0..h`.
    canonical_w: Vec<TruncatedSeries>,
    invariants: BTreeMap<String, bool>,
}

/// Builds the model, the normal-basis generator `zeta` of `k_h / k`, its
/// trace dual `beta` and the matrices `M_zeta`. Every structural invariant
/// is checked; a failure is an internal error.
pub fn build_tower(q: u32, h: u32, prec: Option<i64>, residue_degree: Option<u32>) -> Result<TowerModel> {
    let model = E2Model::build(q, h, prec, residue_degree)?;
    guard("q^(2h) matching candidates per row", (q as u128).pow(2 * h), MATCHING_LIMIT)?;
    let kh = model.kh().clone();
    let a = model.twist();
    let zeta = normal_generator(&kh, q, h)?;
    let beta = trace_dual(&kh, a, h, zeta)?;
    let mut tower = TowerModel {
        model,
        zeta,
        beta,
        m_zeta: Vec::new(),
        canonical_w: Vec::new(),
        invariants: BTreeMap::new(),
    };
    for j in 0..h {
        let z = tower.zeta_power(j);
        tower.m_zeta.push(tower.multiplication_matrix(z)?);
        tower.canonical_w.push(tower.scalar_w(z));
    }
    tower.invariants = tower.check_invariants()?;
    if let Some((name, _)) = tower.invariants.iter().find(|(_, &ok)| !ok) {
        return Err(Error::Internal(format!("tower invariant failed: {name}")));
    }
    Ok(tower)
}

/// Least `zeta` (by code) whose conjugates form a basis of `k_h / k`.
fn normal_generator(kh: &Arc<Gf>, q: u32, h: u32) -> Result<Fe> {
    let a = kh.degree() / h;
    for z in kh.elements() {
        let conj: Vec<Fe> = (0..h).map(|i| kh.frobenius(z, a * i)).collect();
        if !moore(kh, q, &conj)?.is_zero() {
            return Ok(z);
        }
    }
    Err(Error::Internal("no normal basis generator found".into()))
}

/// The unique `beta` with `Tr(beta zeta^{q^i}) = [i == 0]`.
fn trace_dual(kh: &Gf, a: u32, h: u32, zeta: Fe) -> Result<Fe> {
    let want = |b: Fe| {
        (0..h).all(|i| {
            let t = kh.trace_to_degree(kh.mul(b, kh.frobenius(zeta, a * i)), a);
            t == if i == 0 { Fe::ONE } else { Fe::ZERO }
        })
    };
    kh.elements()
        .find(|&b| want(b))
        .ok_or_else(|| Error::Internal("no trace-dual element".into()))
}

impl TowerModel {
    pub fn model(&self) -> &E2Model {
        &self.model
    }

    /// `zeta` in `k_h`'s own encoding.
    pub fn zeta_kh(&self) -> Fe {
        self.zeta
    }

    pub fn beta_kh(&self) -> Fe {
        self.beta
    }

    /// `zeta^{q^j}` in the residue field.
    pub fn zeta_power(&self, j: u32) -> Fe {
        let f = self.model.residue();
        let z = self.model.kh_to_residue(self.zeta).expect("k_h embeds");
        f.frobenius(z, self.model.twist() * j)
    }

    /// `beta` in the residue field.
    pub fn beta(&self) -> Fe {
        self.model.kh_to_residue(self.beta).expect("k_h embeds")
    }

    pub fn m_zeta(&self, j: u32) -> &DigitMatrix {
        &self.m_zeta[j as usize]
    }

    pub fn canonical_w(&self, j: u32) -> TruncatedSeries {
        self.canonical_w[j as usize].clone()
    }

    pub fn invariants(&self) -> &BTreeMap<String, bool> {
        &self.invariants
    }

    /// `sum_i mu(x_1, .., z y_i, .., x_h)` at the canonical point.
    fn scalar_w(&self, z: Fe) -> TruncatedSeries {
        let m = &self.model;
        let mut acc = m.zero();
        for i in 0..m.h() as usize {
            let mut args = m.level1().to_vec();
            args[i] = m.level2()[i].scale(z);
            acc = acc.add(&moore_generic(&args, m.twist()));
        }
        acc
    }

    /// The matrix of multiplication by `z in k_h` on the canonical
    /// `pi^2`-torsion in the basis `x^(2)`, found row by row among all of
    /// `(O/pi^2)^h`: row `i` satisfies `z x_i = sum_j [m_ij](x_j)`.
    pub fn multiplication_matrix(&self, z: Fe) -> Result<DigitMatrix> {
        let m = &self.model;
        let h = m.h() as usize;
        let digits = m.base_elements();
        let q = digits.len();
        let pi = m.canonical();
        let basis = m.level2();
        let mut out = Vec::with_capacity(h);
        for target in basis.iter().map(|x| x.scale(z)) {
            let mut found: Option<Vec<(Fe, Fe)>> = None;
            let total = q.pow(2 * h as u32);
            for code in 0..total {
                let mut c = code;
                let row: Vec<(Fe, Fe)> = (0..h)
                    .map(|_| {
                        let m0 = digits[c % q];
                        c /= q;
                        let m1 = digits[c % q];
                        c /= q;
                        (m0, m1)
                    })
                    .collect();
                let image = row
                    .iter()
                    .zip(basis)
                    .fold(m.zero(), |acc, (&(m0, m1), xj)| acc.add(&digit_action(pi, m0, m1, xj)));
                if image == target {
                    if found.is_some() {
                        return Err(Error::Internal("multiplication matrix is not unique".into()));
                    }
                    found = Some(row);
                }
            }
            out.push(found.ok_or_else(|| Error::Internal("no matching multiplication row".into()))?);
        }
        Ok(out)
    }

    /// Product in `M_h(O/pi^2)`.
    pub fn digit_matmul(&self, x: &DigitMatrix, y: &DigitMatrix) -> DigitMatrix {
        let f = self.model.residue();
        let h = x.len();
        (0..h)
            .map(|i| {
                (0..h)
                    .map(|j| {
                        (0..h).fold((Fe::ZERO, Fe::ZERO), |(s0, s1), k| {
                            let (a0, a1) = x[i][k];
                            let (b0, b1) = y[k][j];
                            let c1 = f.add(f.mul(a0, b1), f.mul(a1, b0));
                            (f.add(s0, f.mul(a0, b0)), f.add(s1, c1))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    fn check_invariants(&self) -> Result<BTreeMap<String, bool>> {
        let m = &self.model;
        let (q, h, a) = (m.q(), m.h(), m.twist());
        let mut inv = BTreeMap::new();
        let t = m.t();
        let once = m.canonical().eval(&t);
        inv.insert("[pi](t) != 0".into(), !once.is_zero_to_precision());
        inv.insert("[pi^2](t) = 0".into(), m.canonical().eval(&once).is_zero_to_precision());
        inv.insert("v(pi) = e".into(), m.pi().valuation() == Some(m.e()));
        let lhs = m.delta().pow(q as u64 - 1);
        let rhs = m.pi().scale(m.sign(h % 2 == 1));
        inv.insert("Delta^(q-1) = (-1)^h pi".into(), lhs == rhs);
        let kh = m.kh();
        let conj: Vec<Fe> = (0..h).map(|i| kh.frobenius(self.zeta, a * i)).collect();
        inv.insert("mu(zeta, .., zeta^(q^(h-1))) != 0".into(), !moore(kh, q, &conj)?.is_zero());
        let dual = (0..h).all(|i| {
            let t = kh.trace_to_degree(kh.mul(self.beta, conj[i as usize]), a);
            t == if i == 0 { Fe::ONE } else { Fe::ZERO }
        });
        inv.insert("Tr(beta zeta^(q^i)) = [i = 0]".into(), dual);
        // ring homomorphism on products of basis elements
        let f = m.residue();
        let mats = m
            .omega()
            .iter()
            .map(|&w| self.multiplication_matrix(w))
            .collect::<Result<Vec<_>>>()?;
        let mut hom = true;
        for (i, &wi) in m.omega().iter().enumerate() {
            for (j, &wj) in m.omega().iter().enumerate() {
                let prod = self.multiplication_matrix(f.mul(wi, wj))?;
                hom &= self.digit_matmul(&mats[i], &mats[j]) == prod;
            }
        }
        inv.insert("M_zeta M_zeta' = M_(zeta zeta')".into(), hom);
        // the scalar w reproduces [pi]_LT(w) = zeta Delta exactly
        let lt = m.lubin_tate();
        let exact = (0..h).all(|j| {
            lt.eval(&self.canonical_w[j as usize])
                .sub(&m.delta().scale(self.zeta_power(j)))
                .is_zero_to_precision()
        });
        inv.insert("[pi]_LT(w(zeta)) = zeta Delta at x".into(), exact);
        let w1 = mu_n(m.level2(), 2, m.canonical())?;
        inv.insert("w(1) = mu_2(x^(2))".into(), w1 == self.scalar_w(Fe::ONE));
        Ok(inv)
    }
}
