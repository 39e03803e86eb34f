//! The hypersurface `X: d_full(V_1, ..., V_h) = 0` over `F_{q^{hn}}`, its
//! Artin-Schreier presentation over `A^{h-1}`, and point enumeration.
//!
//! Expanding along the first row gives
//! `d_full(V) = d_as(V_1..V_{h-1}) + (-1)^{h+1} (V_h^{q^h} - V_h)`, so over
//! `L = F_{q^{hn}}` the fibre over `V' = (V_1..V_{h-1})` has `q^h` points
//! when `Tr_{L/F_{q^h}}(d_as(V')) = 0` and none otherwise. The production
//! counter builds a histogram of that subtrace over `L^{h-1}`; the same
//! histogram feeds every character sum.

mod enumerate;
pub mod matrices;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::ffield::{make_field_over, prime_power, FieldElement, Fe, Gf};

pub use enumerate::{brute_count, count_points, subtrace_histogram, SubtraceHistogram};
pub use matrices::{
    as_matrix, b_matrix, d_as_generic, d_full_generic, full_matrix, minors_b_generic,
    moore_generic, moore_matrix,
};

/// Enumeration budget for the trace-criterion counter.
pub const COUNT_LIMIT: u128 = 1_000_000_000;
/// Enumeration budget for the brute-force oracle.
pub const BRUTE_LIMIT: u128 = 100_000_000;
/// Largest height handled by the stack-allocated kernels.
pub const MAX_HEIGHT: u32 = 8;

/// Which equation defines the cover over `A^{h-1}`.
///
/// `Full` is the zero locus of `d_full`, i.e. `V_h^{q^h} - V_h =
/// (-1)^h d_as`. `ArtinSchreier` is `Y^{q^h} - Y = d_as` with
/// `Y = (-1)^{h-1} V_h`, i.e. `d_as = (-1)^{h-1}(V_h^{q^h} - V_h)`. The two
/// differ by `V_h -> -V_h` exactly when `p` is odd and `h` is even.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    Full,
    ArtinSchreier,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Full => "full",
            Convention::ArtinSchreier => "artin-schreier",
        }
    }

    /// Sign `s` such that the character sums of this convention are
    /// `sum_V psi(s * Tr d_as(V))`.
    pub(crate) fn sum_sign_negative(self, h: u32) -> bool {
        match self {
            Convention::Full => h % 2 == 1,
            Convention::ArtinSchreier => false,
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Convention::Full),
            "artin-schreier" | "as" => Ok(Convention::ArtinSchreier),
            other => Err(Error::InvalidArgument(format!("unknown convention {other:?}"))),
        }
    }
}

/// `(q, h, n)`: points over `F_{q^{hn}}` of the height-`h` hypersurface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperParams {
    pub q: u32,
    pub h: u32,
    pub n: u32,
}

impl HyperParams {
    pub fn new(q: u32, h: u32, n: u32) -> Result<Self> {
        prime_power(q)?;
        if h == 0 || n == 0 {
            return Err(Error::InvalidArgument("h and n must be positive".into()));
        }
        if h > MAX_HEIGHT {
            return Err(Error::InvalidArgument(format!("height {h} exceeds {MAX_HEIGHT}")));
        }
        Ok(HyperParams { q, h, n })
    }

    /// `log_p q`.
    pub fn q_exponent(&self) -> u32 {
        prime_power(self.q).map(|(_, a)| a).unwrap_or(1)
    }

    /// `F_{q^h}`.
    pub fn char_field(&self) -> Result<Arc<Gf>> {
        make_field_over(self.q, self.h)
    }

    /// `F_{q^{hn}}`.
    pub fn point_field(&self) -> Result<Arc<Gf>> {
        make_field_over(self.q, self.h * self.n)
    }

    /// `|F_{q^{hn}}|^k` as an exact count.
    pub fn space_size(&self, k: u32) -> u128 {
        (self.q as u128).pow(self.h * self.n).pow(k)
    }
}

fn check_len(v: &[Fe], want: usize, what: &str) -> Result<()> {
    if v.len() != want {
        return Err(Error::InvalidArgument(format!(
            "{what} needs {want} coordinates, got {}",
            v.len()
        )));
    }
    Ok(())
}

fn lift(field: &Arc<Gf>, v: &[Fe]) -> Result<Vec<FieldElement>> {
    v.iter()
        .map(|&x| {
            if field.contains(x) {
                Ok(FieldElement::new(field, x))
            } else {
                Err(Error::FieldMismatch(format!("{x:?} is not in {field:?}")))
            }
        })
        .collect()
}

fn q_exp(field: &Gf, q: u32) -> Result<u32> {
    let (p, a) = prime_power(q)?;
    if p != field.characteristic() {
        return Err(Error::FieldMismatch(format!("q = {q} but the field is {field:?}")));
    }
    Ok(a)
}

/// `d_full(V)` for `V = (V_1..V_h)`; `h = V.len()`.
pub fn d_full(field: &Arc<Gf>, q: u32, h: u32, v: &[Fe]) -> Result<Fe> {
    check_len(v, h as usize, "d_full")?;
    let a = q_exp(field, q)?;
    let one = FieldElement::new(field, Fe::ONE);
    Ok(d_full_generic(&lift(field, v)?, a, &one).value())
}

/// `d_as(V')` for `V' = (V_1..V_{h-1})`. Zero when `h = 1`.
pub fn d_as(field: &Arc<Gf>, q: u32, h: u32, v: &[Fe]) -> Result<Fe> {
    if h == 0 {
        return Err(Error::InvalidArgument("height must be positive".into()));
    }
    check_len(v, h as usize - 1, "d_as")?;
    let a = q_exp(field, q)?;
    let one = FieldElement::new(field, Fe::ONE);
    Ok(d_as_generic(&lift(field, v)?, h as usize, a, &one).value())
}

/// The Moore determinant `det(x_i^{q^j})`.
pub fn moore(field: &Arc<Gf>, q: u32, x: &[Fe]) -> Result<Fe> {
    let a = q_exp(field, q)?;
    if x.is_empty() {
        return Err(Error::InvalidArgument("Moore determinant of no points".into()));
    }
    Ok(moore_generic(&lift(field, x)?, a).value())
}

/// `(B_1, ..., B_h)` from `V' = (V_1..V_{h-1})`.
pub fn minors_b(field: &Arc<Gf>, q: u32, h: u32, v: &[Fe]) -> Result<Vec<Fe>> {
    if h == 0 {
        return Err(Error::InvalidArgument("height must be positive".into()));
    }
    check_len(v, h as usize - 1, "minors_b")?;
    let a = q_exp(field, q)?;
    let one = FieldElement::new(field, Fe::ONE);
    Ok(minors_b_generic(&lift(field, v)?, h as usize, a, &one)
        .into_iter()
        .map(|b| b.value())
        .collect())
}

/// Whether `V` lies on `X` under `convention`.
pub fn on_hypersurface(
    field: &Arc<Gf>,
    q: u32,
    h: u32,
    v: &[Fe],
    convention: Convention,
) -> Result<bool> {
    check_len(v, h as usize, "point")?;
    match convention {
        Convention::Full => Ok(d_full(field, q, h, v)?.is_zero()),
        Convention::ArtinSchreier => {
            let (_, a) = prime_power(q)?;
            let vh = v[h as usize - 1];
            let lhs = field.sub(field.frobenius(vh, a * h), vh);
            let lhs = if h.is_multiple_of(2) { field.neg(lhs) } else { lhs };
            Ok(d_as(field, q, h, &v[..h as usize - 1])? == lhs)
        }
    }
}

/// The `H = F_{q^h}` action `V_h -> V_h + gamma`.
///
/// `gamma` is an element of `sub = F_{q^h}`, embedded into the point field.
pub fn h_translate(
    field: &Arc<Gf>,
    sub: &Gf,
    q: u32,
    h: u32,
    pt: &[Fe],
    gamma: Fe,
    convention: Convention,
) -> Result<Vec<Fe>> {
    if sub.degree() != q_exp(sub, q)? * h {
        return Err(Error::FieldMismatch(format!("{sub:?} is not F_{q}^{h}")));
    }
    if !on_hypersurface(field, q, h, pt, convention)? {
        return Err(Error::InvalidArgument("point is not on the hypersurface".into()));
    }
    let g = field.embed(sub, gamma)?;
    let mut out = pt.to_vec();
    let last = out.len() - 1;
    out[last] = field.add(out[last], g);
    Ok(out)
}

/// `#{(v, y) in F_{q^{2n}}^2 : y^q + y = v^{q+1}}` by full enumeration.
pub fn hermitian_count(q: u32, n: u32) -> Result<u64> {
    let field = make_field_over(q, 2 * n)?;
    let (_, a) = prime_power(q)?;
    let size = field.order() as u128;
    guard("Hermitian enumeration", size * size, BRUTE_LIMIT)?;
    let frob: Vec<u32> = field.frobenius_table(a);
    let mut count = 0u64;
    for v in field.elements() {
        let rhs = field.mul(Fe(frob[v.0 as usize]), v);
        for y in field.elements() {
            if field.add(Fe(frob[y.0 as usize]), y) == rhs {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests;
