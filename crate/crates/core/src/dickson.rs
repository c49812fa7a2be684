//! Bracket determinants, the Dickson invariants `Q_{n,s}`, and brute-force `GL(n, F_p)`
//! oracles.
//!
//! The bracket `[e_1, ..., e_n]` is the determinant of the `n x n` matrix whose `(i, j)`
//! entry is `x_j^(p^(e_i))`. Every bracket is divisible by `L_n = [0, 1, ..., n-1]`, and
//! the quotient is a `GL_n`-invariant.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::fp_poly::{rank, Coeff, Matrix, Monomial, Poly, Prime};

/// Default cap on `|GL(n, p)|` for [`enumerate_gl`].
pub const DEFAULT_GL_BOUND: u128 = 1_000_000;

/// Default cap on the number of degree-`d` monomials for [`invariant_space_dimension`].
pub const DEFAULT_MONOMIAL_BOUND: u128 = 5_000;

/// Exponent sequence `(e_1, ..., e_n)` naming a bracket.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ESeq(pub Vec<u64>);

impl ESeq {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_repeat(&self) -> bool {
        let mut sorted = self.0.clone();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }
}

/// `0, 1, ..., upper - 1` with `omit` removed, optionally followed by `tail`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HattedRange {
    pub upper: u64,
    pub omit: Option<u64>,
    pub tail: Option<u64>,
}

impl HattedRange {
    pub fn to_eseq(self) -> ESeq {
        let mut entries: Vec<u64> = (0..self.upper).filter(|&k| Some(k) != self.omit).collect();
        entries.extend(self.tail);
        ESeq(entries)
    }
}

/// The determinant `[e_1, ..., e_n]`, expanded over permutations.
///
/// Each permutation contributes a single monomial, so the expansion never builds an
/// intermediate polynomial.
pub fn bracket(n: usize, e: &ESeq, p: Prime) -> Result<Poly> {
    if e.len() != n {
        return Err(Error::Shape(format!("bracket needs {n} entries, got {}", e.len())));
    }
    if e.has_repeat() {
        return Ok(Poly::zero(n, p));
    }
    let powers = e
        .0
        .iter()
        .map(|&k| p.checked_pow(k))
        .collect::<Result<Vec<_>>>()?;
    let mut terms = Vec::new();
    for (perm, odd) in permutations(n) {
        // row i contributes x_{perm[i]}^{p^{e_i}}
        let mut exps = vec![0; n];
        for (row, &col) in perm.iter().enumerate() {
            exps[col] = powers[row];
        }
        let sign = if odd { p.value() - 1 } else { 1 };
        terms.push((Monomial::new(exps)?, sign));
    }
    Ok(Poly::from_terms(n, p, terms))
}

/// All permutations of `0..n` with their parity (`true` = odd), in Heap's order.
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![(perm.clone(), false)];
    let mut counters = vec![0; n];
    let mut odd = false;
    let mut k = 1;
    while k < n {
        if counters[k] < k {
            if k % 2 == 0 {
                perm.swap(0, k);
            } else {
                perm.swap(counters[k], k);
            }
            odd = !odd;
            out.push((perm.clone(), odd));
            counters[k] += 1;
            k = 1;
        } else {
            counters[k] = 0;
            k += 1;
        }
    }
    out
}

/// `L_{n,s} = [0, 1, ..., ŝ, ..., n]`; `L(n, n)` is `L_n = [0, ..., n-1]`.
#[allow(non_snake_case)]
pub fn L(n: usize, s: usize, p: Prime) -> Result<Poly> {
    if s > n {
        return Err(Error::OutOfRange(format!("L_{{n,s}} needs s <= n, got s = {s}, n = {n}")));
    }
    let range = HattedRange {
        upper: n as u64 + 1,
        omit: Some(s as u64),
        tail: None,
    };
    bracket(n, &range.to_eseq(), p)
}

type QCache = Mutex<HashMap<(usize, usize, Prime), Poly>>;

fn q_cache() -> &'static QCache {
    static CACHE: OnceLock<QCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The Dickson invariant `Q_{n,s} = L_{n,s} / L_n`.
///
/// Zero for `s < 0` and one for `s = n`.
pub fn dickson_q(n: usize, s: i64, p: Prime) -> Result<Poly> {
    if s < 0 {
        return Ok(Poly::zero(n, p));
    }
    let s = s as usize;
    if s > n {
        return Err(Error::OutOfRange(format!("Q_{{n,s}} needs s <= n, got s = {s}, n = {n}")));
    }
    if let Some(q) = q_cache().lock().expect("cache poisoned").get(&(n, s, p)) {
        return Ok(q.clone());
    }
    let q = L(n, s, p)?.exact_div(&L(n, n, p)?)?;
    q_cache()
        .lock()
        .expect("cache poisoned")
        .insert((n, s, p), q.clone());
    Ok(q)
}

/// `bracket(e) / L_n`.
pub fn bracket_quotient(n: usize, e: &ESeq, p: Prime) -> Result<Poly> {
    let b = bracket(n, e, p)?;
    if b.is_zero() {
        return Ok(b);
    }
    b.exact_div(&L(n, n, p)?)
}

/// `P_{n,i,s} = [0, ..., (s-1)^, ..., n-1, i-1] / L_n` for `s > 0`, and `0` for `s = 0`.
pub fn p_coef(n: usize, i: u64, s: usize, p: Prime) -> Result<Poly> {
    check_delta_args(n, i, s)?;
    if s == 0 {
        return Ok(Poly::zero(n, p));
    }
    let range = HattedRange {
        upper: n as u64,
        omit: Some(s as u64 - 1),
        tail: Some(i - 1),
    };
    bracket_quotient(n, &range.to_eseq(), p)
}

/// `R_{n,i} = [0, 1, ..., n-2, i-1] / L_n`.
pub fn r_coef(n: usize, i: u64, p: Prime) -> Result<Poly> {
    if n == 0 || i == 0 {
        return Err(Error::OutOfRange(format!("R_{{n,i}} needs n, i >= 1, got n = {n}, i = {i}")));
    }
    let range = HattedRange {
        upper: n as u64 - 1,
        omit: None,
        tail: Some(i - 1),
    };
    bracket_quotient(n, &range.to_eseq(), p)
}

pub(crate) fn check_delta_args(n: usize, i: u64, s: usize) -> Result<()> {
    if n == 0 || s >= n || i == 0 {
        return Err(Error::OutOfRange(format!(
            "need 0 <= s < n and i >= 1, got n = {n}, s = {s}, i = {i}"
        )));
    }
    Ok(())
}

/// Right-hand side of the bracket recursion
///
/// `[e_1, ..., e_{n-1}, e + n] = sum_{s<n} (-1)^(n+s-1) [e_1, ..., e_{n-1}, e + s] Q_{n,s}^(p^e)`.
pub fn recursion_rhs(n: usize, prefix: &[u64], e: u64, p: Prime) -> Result<Poly> {
    if prefix.len() + 1 != n {
        return Err(Error::Shape(format!(
            "prefix for n = {n} needs {} entries, got {}",
            n - 1,
            prefix.len()
        )));
    }
    let mut acc = Poly::zero(n, p);
    for s in 0..n {
        let mut entries = prefix.to_vec();
        entries.push(e + s as u64);
        let b = bracket(n, &ESeq(entries), p)?;
        if b.is_zero() {
            continue;
        }
        let q = dickson_q(n, s as i64, p)?.frobenius(e)?;
        let term = b.checked_mul(&q)?.scale(p.sign((n + s) as i64 - 1));
        acc = acc.checked_add(&term)?;
    }
    Ok(acc)
}

/// `|GL(n, p)| = prod_{k<n} (p^n - p^k)`, saturating.
pub fn gl_order(n: usize, p: Prime) -> u128 {
    let q = p.value() as u128;
    let Some(pn) = q.checked_pow(n as u32) else {
        return u128::MAX;
    };
    (0..n as u32).fold(1u128, |acc, k| acc.saturating_mul(pn - q.pow(k)))
}

/// Every invertible `n x n` matrix over `F_p`, provided the group has at most `bound` elements.
pub fn enumerate_gl(n: usize, p: Prime, bound: u128) -> Result<Vec<Matrix>> {
    let order = gl_order(n, p);
    if order > bound {
        return Err(Error::BoundExceeded {
            needed: order,
            bound,
        });
    }
    let q = p.value();
    let vectors: Vec<Vec<Coeff>> = (0..q.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = k % q;
                    k /= q;
                    d
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(order as usize);
    let mut rows: Vec<Vec<Coeff>> = Vec::with_capacity(n);
    extend_rows(p, n, &vectors, &mut rows, &mut out)?;
    Ok(out)
}

fn extend_rows(
    p: Prime,
    n: usize,
    vectors: &[Vec<Coeff>],
    rows: &mut Vec<Vec<Coeff>>,
    out: &mut Vec<Matrix>,
) -> Result<()> {
    if rows.len() == n {
        out.push(Matrix::from_rows(p, rows)?);
        return Ok(());
    }
    for v in vectors {
        rows.push(v.clone());
        if rank(p, rows) == rows.len() {
            extend_rows(p, n, vectors, rows, out)?;
        }
        rows.pop();
    }
    Ok(())
}

/// A generating set of `GL(n, p)`: the transvections `I + E_{jk}` for `j != k`, plus
/// `diag(g, 1, ..., 1)` for the least primitive root `g` when `g != 1`.
pub fn gl_generators(n: usize, p: Prime) -> Vec<Matrix> {
    let mut gens = Vec::new();
    for j in 0..n {
        for k in 0..n {
            if j != k {
                gens.push(Matrix::transvection(p, n, j, k));
            }
        }
    }
    let g = p.primitive_root();
    if g != 1 && n > 0 {
        gens.push(Matrix::scaling(p, n, g));
    }
    gens
}

/// Whether `f` is fixed by every generator of `GL(n, p)`.
pub fn is_invariant(f: &Poly) -> Result<bool> {
    for m in gl_generators(f.n(), f.prime()) {
        if f.substitute_linear(&m)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All exponent vectors of total degree `d` in `n` variables.
pub fn monomials_of_degree(n: usize, d: u64) -> Vec<Monomial> {
    fn rec(n: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Monomial>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(Monomial::new(cur.clone()).expect("small degree"));
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

fn binomial_u128(a: u128, b: u128) -> u128 {
    (0..b).fold(1u128, |acc, k| acc.saturating_mul(a - k) / (k + 1))
}

/// Dimension of the space of degree-`d` invariants, by exact linear algebra.
///
/// The invariant subspace is the common kernel of `g - 1` over the generators `g`; its
/// dimension is the number of monomials minus the rank of the stacked operator.
pub fn invariant_space_dimension(n: usize, p: Prime, d: u64, bound: u128) -> Result<usize> {
    if n == 0 {
        return Err(Error::OutOfRange("need at least one variable".into()));
    }
    let count = binomial_u128(d as u128 + n as u128 - 1, n as u128 - 1);
    if count > bound {
        return Err(Error::BoundExceeded {
            needed: count,
            bound,
        });
    }
    let basis = monomials_of_degree(n, d);
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let gens = gl_generators(n, p);
    // column k of the stacked operator, as a sparse vector over (generator, monomial) slots
    let mut columns: Vec<BTreeMap<usize, Coeff>> = Vec::with_capacity(basis.len());
    for (k, m) in basis.iter().enumerate() {
        let x = Poly::monomial(n, p, m.clone(), 1);
        let mut col = BTreeMap::new();
        for (g_idx, g) in gens.iter().enumerate() {
            let image = x.substitute_linear(g)?;
            let mut delta: BTreeMap<usize, Coeff> = image
                .terms()
                .map(|(mm, c)| (index[mm], c))
                .collect();
            let own = delta.entry(k).or_insert(0);
            *own = p.sub(*own, 1);
            for (slot, c) in delta {
                if c != 0 {
                    col.insert(g_idx * basis.len() + slot, c);
                }
            }
        }
        columns.push(col);
    }
    Ok(basis.len() - sparse_rank(p, columns))
}

fn sparse_rank(p: Prime, vectors: Vec<BTreeMap<usize, Coeff>>) -> usize {
    let mut pivots: HashMap<usize, BTreeMap<usize, Coeff>> = HashMap::new();
    for mut v in vectors {
        while let Some((&lead, &c)) = v.iter().next() {
            match pivots.get(&lead) {
                Some(row) => {
                    for (&k, &a) in row {
                        let e = v.entry(k).or_insert(0);
                        *e = p.sub(*e, p.mul(c, a));
                        if *e == 0 {
                            v.remove(&k);
                        }
                    }
                }
                None => {
                    let inv = p.inv(c);
                    for a in v.values_mut() {
                        *a = p.mul(*a, inv);
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Number of Dickson monomials `prod_s Q_{n,s}^(a_s)` of total degree `d`, i.e. solutions
/// of `sum_s a_s (p^n - p^s) = d`.
pub fn dickson_monomial_count(n: usize, p: Prime, d: u64) -> u64 {
    let q = p.value();
    let pn = q.pow(n as u32);
    let degrees: Vec<u64> = (0..n as u32).map(|s| pn - q.pow(s)).collect();
    let mut ways = vec![0u64; d as usize + 1];
    ways[0] = 1;
    for &w in &degrees {
        for t in w as usize..=d as usize {
            ways[t] += ways[t - w as usize];
        }
    }
    ways[d as usize]
}
