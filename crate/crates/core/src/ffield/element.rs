use std::fmt;
use std::sync::Arc;

use super::gf::{Fe, Gf};
use crate::ring::{CommRing, FrobeniusRing, TryInv};

/// A field element bundled with its field descriptor.
///
/// Used where values flow through generic ring code (determinants, twisted
/// polynomials); enumeration loops use the bare [`Fe`] handle instead.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<Gf>,
    value: Fe,
}

impl FieldElement {
    pub fn new(field: &Arc<Gf>, value: Fe) -> Self {
        debug_assert!(field.contains(value));
        FieldElement {
            field: field.clone(),
            value,
        }
    }

    pub fn field(&self) -> &Arc<Gf> {
        &self.field
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn inv(&self) -> Option<Self> {
        self.field.inv(self.value).map(|v| Self::new(&self.field, v))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.field.serialize(self.value)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.value == other.value
    }
}
impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.field.digits(self.value), self.field)
    }
}

impl CommRing for FieldElement {
    fn zero_like(&self) -> Self {
        Self::new(&self.field, Fe::ZERO)
    }
    fn one_like(&self) -> Self {
        Self::new(&self.field, Fe::ONE)
    }
    fn add(&self, rhs: &Self) -> Self {
        Self::new(&self.field, self.field.add(self.value, rhs.value))
    }
    fn sub(&self, rhs: &Self) -> Self {
        Self::new(&self.field, self.field.sub(self.value, rhs.value))
    }
    fn neg(&self) -> Self {
        Self::new(&self.field, self.field.neg(self.value))
    }
    fn mul(&self, rhs: &Self) -> Self {
        Self::new(&self.field, self.field.mul(self.value, rhs.value))
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn pow(&self, e: u64) -> Self {
        Self::new(&self.field, self.field.pow(self.value, e))
    }
}

impl FrobeniusRing for FieldElement {
    fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }
    fn frobenius(&self, k: u32) -> Self {
        Self::new(&self.field, self.field.frobenius(self.value, k))
    }
}

impl TryInv for FieldElement {
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}
