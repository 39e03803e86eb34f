//! Conway polynomials by deterministic search.
//!
//! A Conway polynomial `C_{p,m}` is the least monic primitive polynomial of
//! degree `m` over `F_p`, in the signed lexicographic order, whose root `x`
//! satisfies `C_{p,d}(x^{(p^m-1)/(p^d-1)}) = 0` for every `d | m`. The
//! compatibility condition is what makes subfield embeddings a pure
//! exponent map on discrete logarithms.
//!
//! Coefficient vectors are little-endian (`c[i]` multiplies `x^i`) and monic.

/// Multiplies two residues modulo the monic `f` over `F_p`.
fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let m = f.len() - 1;
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
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
        // x^k = x^{k-m} * x^m and x^m = -sum f_i x^i
        for i in 0..m {
            let sub = c * f[i] as u64 % p as u64;
            let idx = k - m + i;
            prod[idx] = (prod[idx] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(m);
    prod.into_iter().map(|v| v as u32).collect()
}

fn powmod(base: &[u32], mut e: u128, f: &[u32], p: u32) -> Vec<u32> {
    let m = f.len() - 1;
    let mut acc = vec![0u32; m];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(&b, &b, f, p);
        }
    }
    acc
}

fn is_one(v: &[u32]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

pub(crate) fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Whether `x` has multiplicative order `p^m - 1` modulo `f`. A cyclic unit
/// subgroup of that order forces `F_p[x]/(f)` to be a field, so this also
/// certifies irreducibility.
pub(crate) fn is_primitive(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    if f[0] == 0 {
        return false;
    }
    let order = (p as u128).pow(m as u32) - 1;
    let mut x = vec![0u32; m];
    if m == 1 {
        // x = -f_0 as a constant
        x[0] = (p - f[0]) % p;
    } else {
        x[1] = 1;
    }
    if !is_one(&powmod(&x, order, f, p)) {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|l| !is_one(&powmod(&x, order / l, f, p)))
}

/// Evaluates the monic `g` at the residue `y` modulo `f`.
fn eval_at(g: &[u32], y: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let m = f.len() - 1;
    let mut acc = vec![0u32; m];
    for &c in g.iter().rev() {
        acc = mulmod(&acc, y, f, p);
        acc[0] = (acc[0] + c) % p;
    }
    acc
}

/// The `index`-th monic polynomial of degree `m` in Conway order.
///
/// The order compares `(a_{m-1}, ..., a_0)` lexicographically where the
/// polynomial is `x^m + sum_i (-1)^{m-i} a_i x^i`.
fn candidate(index: u64, m: usize, p: u32) -> Vec<u32> {
    let mut f = vec![0u32; m + 1];
    f[m] = 1;
    let mut rest = index;
    for i in 0..m {
        let a = (rest % p as u64) as u32;
        rest /= p as u64;
        f[i] = if (m - i).is_multiple_of(2) { a } else { (p - a) % p };
    }
    f
}

/// Searches for the Conway polynomial of degree `m` over `F_p`, given the
/// Conway polynomials of all proper divisors of `m`.
pub(crate) fn search(p: u32, m: usize, divisor_polys: &[(usize, Vec<u32>)]) -> Vec<u32> {
    let total = (p as u64).pow(m as u32);
    let order = (p as u128).pow(m as u32) - 1;
    for index in 0..total {
        let f = candidate(index, m, p);
        if !is_primitive(&f, p) {
            continue;
        }
        let mut x = vec![0u32; m];
        if m == 1 {
            x[0] = (p - f[0]) % p;
        } else {
            x[1] = 1;
        }
        let compatible = divisor_polys.iter().all(|(d, g)| {
            let sub_order = (p as u128).pow(*d as u32) - 1;
            let y = powmod(&x, order / sub_order, &f, p);
            eval_at(g, &y, &f, p).iter().all(|&c| c == 0)
        });
        if compatible {
            return f;
        }
    }
    unreachable!("Conway polynomials exist for every (p, m)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitivity_detects_non_primitive_irreducibles() {
        // x^2 + 1 over F_3 is irreducible but x has order 4
        assert!(!is_primitive(&[1, 0, 1], 3));
        assert!(is_primitive(&[2, 2, 1], 3));
        // x^4 + x^3 + x^2 + x + 1 over F_2 is irreducible of order 5
        assert!(!is_primitive(&[1, 1, 1, 1, 1], 2));
        assert!(is_primitive(&[1, 1, 0, 0, 1], 2));
    }

    #[test]
    fn candidate_order_starts_with_x_to_the_m() {
        assert_eq!(candidate(0, 3, 3), vec![0, 0, 0, 1]);
        // a_0 = 1 with m - 0 odd gives coefficient -1
        assert_eq!(candidate(1, 3, 3), vec![2, 0, 0, 1]);
    }
}
