use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::conway;
use crate::error::{Error, Result};

/// Largest field order for which log/antilog tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Odd-characteristic fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

/// A field element, encoded as the integer `sum_i d_i p^i` of its base-`p`
/// digits in the polynomial basis `1, x, ..., x^{m-1}`.
///
/// `Fe` carries no reference to its field; arithmetic goes through the
/// owning [`Gf`]. This keeps enumeration loops free of reference counting.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Description of `F_{p^m}` with its Conway modulus and arithmetic tables.
pub struct Gf {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    /// `exp[k] = g^k`, stored for `k < 2(order - 1)` so sums of two logs
    /// need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
    /// Subfield degree `d` (proper divisor of `m`) to the embedding table
    /// `F_{p^d} -> F_{p^m}` indexed by subfield code.
    embeddings: BTreeMap<u32, Vec<u32>>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.m)
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m
    }
}
impl Eq for Gf {}

fn registry() -> &'static Mutex<HashMap<(u32, u32), Arc<Gf>>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), Arc<Gf>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns the session-wide descriptor of `F_{p^m}`.
///
/// Equal `(p, m)` always yield the same `Arc` and therefore the same
/// modulus and embeddings.
pub fn make_field(p: u32, m: u32) -> Result<Arc<Gf>> {
    if !conway::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("extension degree must be positive".into()));
    }
    let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
    if order > MAX_FIELD_ORDER as u128 {
        return Err(Error::GuardExceeded {
            what: format!("field table for F_{p}^{m}"),
            needed: order,
            limit: MAX_FIELD_ORDER as u128,
        });
    }
    if let Some(f) = registry().lock().unwrap().get(&(p, m)) {
        return Ok(f.clone());
    }
    let built = Arc::new(Gf::build(p, m)?);
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry((p, m)).or_insert(built).clone())
}

/// `F_{q^e}` where `q` is a prime power.
pub fn make_field_over(q: u32, e: u32) -> Result<Arc<Gf>> {
    let (p, a) = prime_power(q)?;
    make_field(p, a * e)
}

/// Splits a prime power `q = p^a`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut a = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        a += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
    }
    Ok((p, a))
}

fn proper_divisors(m: u32) -> Vec<u32> {
    (1..m).filter(|d| m.is_multiple_of(*d)).collect()
}

impl Gf {
    fn build(p: u32, m: u32) -> Result<Gf> {
        let subs: Vec<Arc<Gf>> = proper_divisors(m)
            .into_iter()
            .map(|d| make_field(p, d))
            .collect::<Result<_>>()?;
        let divisor_polys: Vec<(usize, Vec<u32>)> = subs
            .iter()
            .map(|s| (s.m as usize, s.modulus.clone()))
            .collect();
        let modulus = conway::search(p, m as usize, &divisor_polys);
        let order = p.pow(m);
        let n1 = (order - 1) as usize;

        // powers of the root g, in digit form
        let mut exp = vec![0u32; 2 * n1.max(1)];
        let mut log = vec![u32::MAX; order as usize];
        let mut cur = vec![0u32; m as usize];
        cur[0] = 1;
        let gen: Vec<u32> = if m == 1 {
            vec![(p - modulus[0]) % p]
        } else {
            let mut g = vec![0u32; m as usize];
            g[1] = 1;
            g
        };
        for k in 0..n1 {
            let code = encode(&cur, p);
            exp[k] = code;
            exp[k + n1] = code;
            log[code as usize] = k as u32;
            cur = mul_digits(&cur, &gen, &modulus, p);
        }
        let neg: Vec<u32> = (0..order)
            .map(|c| {
                let d: Vec<u32> = decode(c, p, m).into_iter().map(|x| (p - x) % p).collect();
                encode(&d, p)
            })
            .collect();

        let mut gf = Gf {
            p,
            m,
            order,
            modulus,
            exp,
            log,
            neg,
            add_table: None,
            embeddings: BTreeMap::new(),
        };
        if p != 2 && order <= ADD_TABLE_LIMIT {
            let mut t = vec![0u16; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    t[(a * order + b) as usize] = gf.add_digits(a, b) as u16;
                }
            }
            gf.add_table = Some(t);
        }
        for sub in &subs {
            let r = (order as u64 - 1) / (sub.order as u64 - 1);
            let table: Vec<u32> = (0..sub.order)
                .map(|c| {
                    if c == 0 {
                        0
                    } else {
                        let l = sub.log[c as usize] as u64 * r;
                        gf.exp[(l % n1 as u64) as usize]
                    }
                })
                .collect();
            gf.embeddings.insert(sub.m, table);
        }
        Ok(gf)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Monic Conway modulus, little-endian.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// The primitive root `x mod C_{p,m}`.
    pub fn generator(&self) -> Fe {
        Fe(self.exp[if self.order > 2 { 1 } else { 0 }])
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.order).map(Fe)
    }

    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn digits(&self, a: Fe) -> Vec<u32> {
        decode(a.0, self.p, self.m)
    }

    pub fn from_digits(&self, d: &[u32]) -> Result<Fe> {
        if d.len() != self.m as usize || d.iter().any(|&x| x >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "digit vector {d:?} does not describe an element of {self:?}"
            )));
        }
        Ok(Fe(encode(d, self.p)))
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.order
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut scale = 1u32;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => Fe(t[(a.0 * self.order + b.0) as usize] as u32),
            None => Fe(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        let l = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fe(self.exp[l as usize])
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        let n1 = self.order - 1;
        let l = self.log[a.0 as usize];
        Some(Fe(self.exp[((n1 - l) % n1) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Discrete logarithm to the Conway root, `None` for zero.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    pub fn exp(&self, k: u64) -> Fe {
        Fe(self.exp[(k % (self.order as u64 - 1)) as usize])
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe(1);
        }
        if a.0 == 0 {
            return Fe(0);
        }
        let n1 = self.order as u64 - 1;
        let l = self.log[a.0 as usize] as u64 * (e % n1) % n1;
        Fe(self.exp[l as usize])
    }

    /// `a^{p^k}`.
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        if a.0 == 0 {
            return a;
        }
        let n1 = self.order as u64 - 1;
        let mut e = 1u64;
        for _ in 0..(k % self.m) {
            e = e * self.p as u64 % n1;
        }
        let l = self.log[a.0 as usize] as u64 * e % n1;
        Fe(self.exp[l as usize])
    }

    /// Table of `a -> a^{p^k}` over the whole field.
    pub fn frobenius_table(&self, k: u32) -> Vec<u32> {
        self.elements().map(|a| self.frobenius(a, k).0).collect()
    }

    /// Image of a subfield element under the stored Conway embedding.
    pub fn embed(&self, sub: &Gf, a: Fe) -> Result<Fe> {
        if sub.p != self.p || !self.m.is_multiple_of(sub.m) {
            return Err(Error::FieldMismatch(format!("{sub:?} is not a subfield of {self:?}")));
        }
        if sub.m == self.m {
            return Ok(a);
        }
        Ok(Fe(self.embeddings[&sub.m][a.0 as usize]))
    }

    /// The subfield code of `a` if `a` lies in `F_{p^d}`.
    pub fn to_subfield(&self, sub: &Gf, a: Fe) -> Option<Fe> {
        if sub.p != self.p || !self.m.is_multiple_of(sub.m) {
            return None;
        }
        if sub.m == self.m || a.0 == 0 {
            return Some(a);
        }
        let r = (self.order - 1) / (sub.order - 1);
        let l = self.log[a.0 as usize];
        l.is_multiple_of(r).then(|| Fe(sub.exp[(l / r) as usize]))
    }

    pub fn in_subfield_of_degree(&self, a: Fe, d: u32) -> bool {
        if !self.m.is_multiple_of(d) {
            return false;
        }
        a.0 == 0 || self.log[a.0 as usize].is_multiple_of((self.order - 1) / (self.p.pow(d) - 1))
    }

    /// `sum_{j < m/d} a^{p^{dj}}`, still as an element of this field.
    pub fn trace_to_degree(&self, a: Fe, d: u32) -> Fe {
        let mut acc = Fe(0);
        let mut cur = a;
        for _ in 0..(self.m / d) {
            acc = self.add(acc, cur);
            cur = self.frobenius(cur, d);
        }
        acc
    }

    /// Relative trace to the subfield `sub`, landed in `sub`'s encoding.
    pub fn rel_trace(&self, a: Fe, sub: &Gf) -> Result<Fe> {
        if sub.p != self.p || !self.m.is_multiple_of(sub.m) {
            return Err(Error::InvalidArgument(format!(
                "degree {} does not divide {}",
                sub.m, self.m
            )));
        }
        let t = self.trace_to_degree(a, sub.m);
        self.to_subfield(sub, t)
            .ok_or_else(|| Error::Internal("trace left the subfield".into()))
    }

    /// Absolute trace to `F_p`, as an integer in `0..p`.
    pub fn abs_trace(&self, a: Fe) -> u32 {
        // F_p elements are the constants, encoded as their value
        self.trace_to_degree(a, 1).0
    }

    /// Table of relative traces to `F_{p^d}` (subfield codes) over the
    /// whole field.
    pub fn trace_table(&self, sub: &Gf) -> Result<Vec<u32>> {
        self.elements().map(|a| self.rel_trace(a, sub).map(|t| t.0)).collect()
    }

    /// Digit-vector serialization: `p` and `m` as little-endian `u32`
    /// followed by one byte per base-`p` digit, least significant first.
    pub fn serialize(&self, a: Fe) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.m as usize);
        out.extend_from_slice(&self.p.to_le_bytes());
        out.extend_from_slice(&self.m.to_le_bytes());
        out.extend(self.digits(a).into_iter().map(|d| d as u8));
        out
    }

    pub fn deserialize(&self, bytes: &[u8]) -> Result<Fe> {
        if bytes.len() != 8 + self.m as usize {
            return Err(Error::InvalidArgument("serialized element has wrong length".into()));
        }
        let p = u32::from_le_bytes(bytes[0..4].try_into().unwrap());
        let m = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if p != self.p || m != self.m {
            return Err(Error::FieldMismatch(format!(
                "element of F_{p}^{m} read into {self:?}"
            )));
        }
        let digits: Vec<u32> = bytes[8..].iter().map(|&b| b as u32).collect();
        self.from_digits(&digits)
    }
}

fn encode(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &x| acc * p + x)
}

fn decode(mut c: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn mul_digits(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let m = f.len() - 1;
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (m..2 * m).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..m {
            let idx = k - m + i;
            prod[idx] = (prod[idx] + p as u64 - c * f[i] as u64 % p as u64) % p as u64;
        }
    }
    prod.truncate(m);
    prod.into_iter().map(|v| v as u32).collect()
}
