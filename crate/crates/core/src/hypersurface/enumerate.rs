use std::sync::Arc;

use rayon::prelude::*;

use super::{Convention, HyperParams, BRUTE_LIMIT, COUNT_LIMIT, MAX_HEIGHT};
use crate::error::{guard, Result};
use crate::ffield::{Fe, Gf};

const MAXH: usize = MAX_HEIGHT as usize;

/// Precomputed tables for evaluating `d_as` and `d_full` on field codes.
struct Kernel {
    h: usize,
    field: Arc<Gf>,
    /// `frob[k][c]` is the code of `c^{q^k}`, `k = 0..=h`.
    frob: Vec<Vec<u32>>,
}

impl Kernel {
    fn new(params: &HyperParams, field: Arc<Gf>) -> Self {
        let a = params.q_exponent();
        let frob = (0..=params.h).map(|k| field.frobenius_table(a * k)).collect();
        Kernel {
            h: params.h as usize,
            field,
            frob,
        }
    }

    /// `d_as` on `v = (V_1..V_{h-1})` by unit-Hessenberg elimination.
    #[inline]
    fn d_as(&self, v: &[u32]) -> Fe {
        let (h, f) = (self.h, &*self.field);
        let mut r = [Fe::ZERO; MAXH];
        for j in 0..h - 1 {
            r[j] = f.sub(Fe(self.frob[h][v[j] as usize]), Fe(v[j]));
        }
        self.eliminate(&mut r, v)
    }

    /// `d_full` on `v = (V_1..V_h)`, evaluated with its own first row.
    #[inline]
    fn d_full(&self, v: &[u32]) -> Fe {
        let (h, f) = (self.h, &*self.field);
        let mut r = [Fe::ZERO; MAXH];
        for j in 0..h {
            r[j] = f.sub(Fe(self.frob[h][v[j] as usize]), Fe(v[j]));
        }
        self.eliminate(&mut r, v)
    }

    #[inline]
    fn eliminate(&self, r: &mut [Fe; MAXH], v: &[u32]) -> Fe {
        let (h, f) = (self.h, &*self.field);
        for k in 1..h {
            let c = r[k - 1];
            if c.is_zero() {
                continue;
            }
            let row = &self.frob[k];
            for j in k..h {
                r[j] = f.sub(r[j], f.mul(c, Fe(row[v[j - k] as usize])));
            }
        }
        if (h - 1) % 2 == 1 {
            f.neg(r[h - 1])
        } else {
            r[h - 1]
        }
    }
}

/// Advances the odometer `v` over `0..base` in every slot; false on wrap.
#[inline]
fn advance(v: &mut [u32], base: u32) -> bool {
    for x in v.iter_mut().rev() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

/// Runs `visit` on every vector of `dim` field codes, partitioned across
/// workers by the leading coordinate, and merges the per-worker states with
/// `merge`. The result is independent of scheduling whenever `merge` is
/// associative and commutative.
fn par_enumerate<S, I, V, M>(order: u32, dim: usize, init: I, visit: V, merge: M) -> S
where
    S: Send,
    I: Fn() -> S + Sync + Send,
    V: Fn(&mut S, &[u32]) + Sync + Send,
    M: Fn(S, S) -> S + Sync + Send,
{
    if dim == 0 {
        let mut s = init();
        visit(&mut s, &[]);
        return s;
    }
    (0..order)
        .into_par_iter()
        .fold(&init, |mut s, lead| {
            let mut v = vec![0u32; dim];
            v[0] = lead;
            loop {
                visit(&mut s, &v);
                if !advance(&mut v[1..], order) {
                    break;
                }
            }
            s
        })
        .reduce(&init, merge)
}

/// Counts of `Tr_{F_{q^{hn}}/F_{q^h}}(d_as(V))` over `V in F_{q^{hn}}^{h-1}`,
/// indexed by the code of the trace value in `F_{q^h}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtraceHistogram {
    pub params: HyperParams,
    pub counts: Vec<u64>,
}

impl SubtraceHistogram {
    /// Number of enumerated vectors, `q^{hn(h-1)}`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `#X(F_{q^{hn}})`, independent of the convention.
    pub fn point_count(&self) -> u64 {
        self.counts.len() as u64 * self.counts[0]
    }
}

pub fn subtrace_histogram(params: &HyperParams) -> Result<SubtraceHistogram> {
    let dim = params.h as usize - 1;
    guard("trace-criterion enumeration", params.space_size(dim as u32), COUNT_LIMIT)?;
    let big = params.point_field()?;
    let small = params.char_field()?;
    let trace = big.trace_table(&small)?;
    let kernel = Kernel::new(params, big.clone());
    let slots = small.order() as usize;
    let counts = par_enumerate(
        big.order(),
        dim,
        || vec![0u64; slots],
        |hist, v| hist[trace[kernel.d_as(v).0 as usize] as usize] += 1,
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    Ok(SubtraceHistogram {
        params: *params,
        counts,
    })
}

/// `#X(F_{q^{hn}}) = q^h * #{V' : Tr(d_as(V')) = 0}`.
pub fn count_points(params: &HyperParams) -> Result<u64> {
    Ok(subtrace_histogram(params)?.point_count())
}

/// `#X(F_{q^{hn}})` by evaluating the defining determinant at every
/// `V in F_{q^{hn}}^h`. Oracle only.
pub fn brute_count(params: &HyperParams, convention: Convention) -> Result<u64> {
    let dim = params.h as usize;
    guard("brute-force enumeration", params.space_size(dim as u32), BRUTE_LIMIT)?;
    let big = params.point_field()?;
    let kernel = Kernel::new(params, big.clone());
    let h = params.h as usize;
    let f = &*big;
    Ok(par_enumerate(
        big.order(),
        dim,
        || 0u64,
        |n, v| {
            let on = match convention {
                Convention::Full => kernel.d_full(v).is_zero(),
                Convention::ArtinSchreier => {
                    let vh = v[h - 1] as usize;
                    let lhs = f.sub(Fe(kernel.frob[h][vh]), Fe(vh as u32));
                    let lhs = if h.is_multiple_of(2) { f.neg(lhs) } else { lhs };
                    kernel.d_as(&v[..h - 1]) == lhs
                }
            };
            *n += on as u64;
        },
        |a, b| a + b,
    ))
}
