//! Finite fields `F_{p^m}` with Conway moduli, compatible subfield
//! embeddings, relative traces, additive characters and exact sums in
//! `Z[zeta_p]`.
//!
//! Characters of `F_{q^h}` are indexed by `lambda` in the same field:
//! `psi_lambda(a) = zeta_p^{Tr(lambda a)}` with the absolute trace to
//! `F_p`. `psi_lambda` factors through `Tr_{F_{q^h}/F_{q^d}}` exactly when
//! `lambda` lies in `F_{q^d}`.

mod conway;
pub mod cyclotomic;
pub mod element;
pub mod gf;

pub use cyclotomic::CyclotomicInteger;
pub use element::FieldElement;
pub use gf::{make_field, make_field_over, prime_power, Fe, Gf, MAX_FIELD_ORDER};

use crate::error::{Error, Result};

/// `psi_lambda(a)` as a root of unity in `Z[zeta_p]`.
pub fn psi_value(field: &Gf, lambda: Fe, a: Fe) -> Result<CyclotomicInteger> {
    if !field.contains(lambda) || !field.contains(a) {
        return Err(Error::FieldMismatch(format!("arguments are not in {field:?}")));
    }
    let e = field.abs_trace(field.mul(lambda, a));
    Ok(CyclotomicInteger::zeta_pow(field.characteristic(), e))
}

/// Whether `psi_lambda` on `F_{q^h}` does not factor through any proper
/// subtrace, i.e. `lambda` lies in no `F_{q^d}` with `d | h`, `d < h`.
///
/// `field` must be `F_{q^h}`.
pub fn is_primitive_char(field: &Gf, lambda: Fe, q: u32, h: u32) -> Result<bool> {
    let (_, a) = prime_power(q)?;
    if field.degree() != a * h {
        return Err(Error::FieldMismatch(format!("{field:?} is not F_{q}^{h}")));
    }
    Ok((1..h)
        .filter(|d| h.is_multiple_of(*d))
        .all(|d| !field.in_subfield_of_degree(lambda, a * d)))
}
