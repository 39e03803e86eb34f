//! Sparse multivariate polynomials over a finite field.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Fe, Gf};
use crate::ring::{CommRing, FrobeniusRing, TryInv};

/// An exponent vector, ordered graded-lexicographically: total degree first,
/// then lexicographically with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn times(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// The ordered variable names shared by every polynomial in a computation.
pub type Universe = Arc<[String]>;

pub fn universe<S: AsRef<str>>(names: &[S]) -> Universe {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// `sum c_m m` with no zero coefficient stored, so equality is structural.
#[derive(Clone)]
pub struct MultiPoly {
    field: Arc<Gf>,
    vars: Universe,
    terms: BTreeMap<Monomial, Fe>,
}

impl MultiPoly {
    pub fn zero(field: &Arc<Gf>, vars: &Universe) -> Self {
        MultiPoly {
            field: field.clone(),
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Arc<Gf>, vars: &Universe, c: Fe) -> Self {
        let mut p = Self::zero(field, vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn var(field: &Arc<Gf>, vars: &Universe, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::from_terms(field, vars, [(e, Fe::ONE)])
    }

    pub fn var_named(field: &Arc<Gf>, vars: &Universe, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown variable {name}")))?;
        Ok(Self::var(field, vars, i))
    }

    /// Builds from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Fe)>>(
        field: &Arc<Gf>,
        vars: &Universe,
        terms: I,
    ) -> Self {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.accumulate(Monomial(e.into_boxed_slice()), c);
        }
        p
    }

    fn accumulate(&mut self, m: Monomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &Arc<Gf> {
        &self.field
    }

    pub fn vars(&self) -> &Universe {
        &self.vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Fe)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().next_back().map_or(0, |m| m.degree())
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Fe {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .copied()
            .unwrap_or(Fe::ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if *self.field != *o.field {
            return Err(Error::FieldMismatch(format!("{:?} vs {:?}", self.field, o.field)));
        }
        if self.vars != o.vars {
            return Err(Error::InvalidArgument(format!(
                "variable universes differ: {:?} vs {:?}",
                self.vars, o.vars
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut out = self.clone();
        for (m, &c) in &o.terms {
            out.accumulate(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let f = &self.field;
        let mut acc: HashMap<Monomial, Fe> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &o.terms {
                let e = acc.entry(m1.times(m2)).or_insert(Fe::ZERO);
                *e = f.add(*e, f.mul(c1, c2));
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(MultiPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Schoolbook product accumulating one single-term product at a time;
    /// kept as an independent oracle for [`MultiPoly::checked_mul`].
    pub fn naive_mul(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut out = Self::zero(&self.field, &self.vars);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &o.terms {
                let single = Self::from_terms(
                    &self.field,
                    &self.vars,
                    [(m1.times(m2).0.into_vec(), self.field.mul(c1, c2))],
                );
                out = out.checked_add(&single)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Fe) -> Self {
        let mut out = Self::zero(&self.field, &self.vars);
        for (m, &x) in &self.terms {
            out.accumulate(m.clone(), self.field.mul(c, x));
        }
        out
    }

    /// Replaces variable `i` by `g`.
    pub fn substitute(&self, i: usize, g: &Self) -> Result<Self> {
        self.compatible(g)?;
        if i >= self.vars.len() {
            return Err(Error::InvalidArgument(format!("no variable with index {i}")));
        }
        let mut powers: BTreeMap<u32, Self> = BTreeMap::new();
        let mut out = Self::zero(&self.field, &self.vars);
        for (m, &c) in &self.terms {
            let e = m.0[i];
            let mut rest = m.0.clone();
            rest[i] = 0;
            let base = Self::from_terms(&self.field, &self.vars, [(rest.into_vec(), c)]);
            let pw = powers.entry(e).or_insert_with(|| CommRing::pow(g, e as u64));
            out = out.checked_add(&base.checked_mul(pw)?)?;
        }
        Ok(out)
    }

    /// Evaluates at a point of `field^{nvars}`.
    pub fn eval(&self, point: &[Fe]) -> Result<Fe> {
        if point.len() != self.vars.len() {
            return Err(Error::InvalidArgument("point has the wrong number of coordinates".into()));
        }
        let f = &self.field;
        let mut acc = Fe::ZERO;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (x, &e) in point.iter().zip(m.0.iter()) {
                t = f.mul(t, f.pow(*x, e as u64));
            }
            acc = f.add(acc, t);
        }
        Ok(acc)
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, o: &Self) -> bool {
        *self.field == *o.field && self.vars == o.vars && self.terms == o.terms
    }
}
impl Eq for MultiPoly {}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = m
                .0
                .iter()
                .zip(self.vars.iter())
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let coef = self.field.digits(*c);
            let coef = if self.field.degree() == 1 {
                coef[0].to_string()
            } else {
                format!("{coef:?}")
            };
            match (coef.as_str(), mono.is_empty()) {
                (_, true) => write!(f, "{coef}")?,
                ("1", false) => write!(f, "{}", mono.join("*"))?,
                _ => write!(f, "{coef}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl CommRing for MultiPoly {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field, &self.vars)
    }
    fn one_like(&self) -> Self {
        Self::constant(&self.field, &self.vars, Fe::ONE)
    }
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("polynomials from different rings")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn neg(&self) -> Self {
        self.scale(self.field.neg(Fe::ONE))
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("polynomials from different rings")
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl FrobeniusRing for MultiPoly {
    fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    /// In characteristic `p`, `(sum c m)^{p^k} = sum c^{p^k} m^{p^k}`.
    fn frobenius(&self, k: u32) -> Self {
        let pk = self.field.characteristic().pow(k);
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                (
                    Monomial(m.0.iter().map(|e| e * pk).collect()),
                    self.field.frobenius(c, k),
                )
            })
            .collect();
        MultiPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms,
        }
    }
}

impl TryInv for MultiPoly {
    /// Only nonzero constants are units of a polynomial ring over a field.
    fn try_inv(&self) -> Option<Self> {
        if !self.is_constant() {
            return None;
        }
        let c = self.field.inv(self.constant_term())?;
        Some(Self::constant(&self.field, &self.vars, c))
    }
}
