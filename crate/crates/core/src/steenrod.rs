//! Steenrod reduced powers and primitive Milnor operations acting on `F_p[x_1, ..., x_n]`.
//!
//! `P^k` is determined by `P^1(x) = x^p`, `P^k(x) = 0` for `k > 1` and the Cartan formula; on a
//! monomial it is the coefficient of `t^k` in `prod_j (x_j + x_j^p t)^(a_j)`.
//!
//! The `i`-th primitive `St^{Δ_i}` is the derivation sending every variable `x_j` to
//! `x_j^(p^i)`. Its value on the Dickson invariants has two closed forms: a single bracket
//! times `L_n^(p-2)` ([`st_delta_via_bracket`]) and the `P`/`R` coefficient form
//! ([`st_delta_via_main`]).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dickson::{self, check_delta_args, dickson_q, p_coef, r_coef, HattedRange, L};
use crate::error::{Error, Result};
use crate::fp_poly::{Monomial, Poly, Prime};

/// Overall sign of `St^{Δ_i}(x_j)`: `+1` means `St^{Δ_i}(x_j) = x_j^(p^i)`.
///
/// Pinned by the `i = s` rows of the `i <= n` case table at `(p, n) = (3, 2)`; see the
/// `sign_convention_is_pinned` test.
pub const SIGN_FLAG: i64 = 1;

/// Index `i >= 1` of a primitive operation `St^{Δ_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DeltaIndex(u64);

impl DeltaIndex {
    pub fn new(i: u64) -> Result<Self> {
        if i == 0 {
            return Err(Error::OutOfRange("primitive index must be at least 1".into()));
        }
        Ok(DeltaIndex(i))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for DeltaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The reduced power `P^k(f)`.
pub fn steenrod_p(f: &Poly, k: u64) -> Result<Poly> {
    if k == 0 {
        return Ok(f.clone());
    }
    let p = f.prime();
    let mut out = Vec::new();
    for (m, c) in f.terms() {
        let exps = m.exponents();
        // suffix[j] = sum of exponents from j on; bounds how much of k the tail can absorb
        let mut suffix = vec![0u64; exps.len() + 1];
        for j in (0..exps.len()).rev() {
            suffix[j] = suffix[j + 1] + exps[j];
        }
        if suffix[0] < k {
            continue;
        }
        let mut spread = vec![0u64; exps.len()];
        cartan_terms(p, exps, &suffix, 0, k, c, &mut spread, &mut out)?;
    }
    Ok(Poly::from_terms(f.n(), p, out))
}

#[allow(clippy::too_many_arguments)]
fn cartan_terms(
    p: Prime,
    exps: &[u64],
    suffix: &[u64],
    j: usize,
    left: u64,
    coeff: u64,
    spread: &mut [u64],
    out: &mut Vec<(Monomial, u64)>,
) -> Result<()> {
    if j == exps.len() {
        if left == 0 {
            let new_exps = exps
                .iter()
                .zip(spread.iter())
                .map(|(&a, &b)| {
                    b.checked_mul(p.value() - 1)
                        .and_then(|x| x.checked_add(a))
                        .ok_or(Error::Overflow)
                })
                .collect::<Result<Vec<_>>>()?;
            out.push((Monomial::new(new_exps)?, coeff));
        }
        return Ok(());
    }
    let a = exps[j];
    let lo = left.saturating_sub(suffix[j + 1]);
    for b in lo..=a.min(left) {
        let binom = p.binomial(a, b);
        if binom == 0 {
            continue;
        }
        spread[j] = b;
        cartan_terms(p, exps, suffix, j + 1, left - b, p.mul(coeff, binom), spread, out)?;
    }
    spread[j] = 0;
    Ok(())
}

/// `St^{Δ_i}(f)`, the derivation with `x_j -> SIGN_FLAG * x_j^(p^i)`.
pub fn st_delta(f: &Poly, i: DeltaIndex) -> Result<Poly> {
    let p = f.prime();
    let shift = p.checked_pow(i.get())? - 1;
    let sign = p.from_i64(SIGN_FLAG);
    let mut out = Vec::new();
    for (m, c) in f.terms() {
        for (j, &a) in m.exponents().iter().enumerate() {
            let a_mod = p.reduce(a);
            if a_mod == 0 {
                continue;
            }
            let exp = a.checked_add(shift).ok_or(Error::Overflow)?;
            out.push((m.with_exponent(j, exp)?, p.mul(sign, p.mul(c, a_mod))));
        }
    }
    Ok(Poly::from_terms(f.n(), p, out))
}

/// `St^{Δ_i}(Q_{n,s}) = (-1)^n [0, ..., ŝ, ..., n-1, i] L_n^(p-2)`.
pub fn st_delta_via_bracket(n: usize, s: usize, i: DeltaIndex, p: Prime) -> Result<Poly> {
    check_delta_args(n, i.get(), s)?;
    let range = HattedRange {
        upper: n as u64,
        omit: Some(s as u64),
        tail: Some(i.get()),
    };
    let b = dickson::bracket(n, &range.to_eseq(), p)?;
    if b.is_zero() {
        return Ok(b);
    }
    let ln = L(n, n, p)?.pow(p.value() - 2)?;
    Ok(b.checked_mul(&ln)?.scale(p.sign(n as i64)))
}

/// `St^{Δ_i}(Q_{n,s}) = (-1)^n Q_{n,0} (P_{n,i,s}^p + R_{n,i}^p Q_{n,s})`.
pub fn st_delta_via_main(n: usize, s: usize, i: DeltaIndex, p: Prime) -> Result<Poly> {
    check_delta_args(n, i.get(), s)?;
    let q0 = dickson_q(n, 0, p)?;
    let qs = dickson_q(n, s as i64, p)?;
    let p_part = p_coef(n, i.get(), s, p)?.frobenius(1)?;
    let r_part = r_coef(n, i.get(), p)?.frobenius(1)?;
    let inner = p_part.checked_add(&r_part.checked_mul(&qs)?)?;
    Ok(q0.checked_mul(&inner)?.scale(p.sign(n as i64)))
}

/// Which closed-form corollary to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corollary {
    /// `St^{Δ_{n+1}}(Q_{n,s})`.
    NPlus1,
    /// `St^{Δ_{n+2}}(Q_{n,s})`.
    NPlus2,
    /// `St^{Δ_{n+3}}(Q_{n,s})` with the explicit `P_{n,n+3,s}` and `R_{n,n+3}`.
    NPlus3,
    /// `St^{Δ_i}(Q_{n,0}^(p-1) Q_{n,s})`.
    Kernel,
}

impl FromStr for Corollary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n+1" | "n-plus1" => Ok(Corollary::NPlus1),
            "n+2" | "n-plus2" => Ok(Corollary::NPlus2),
            "n+3" | "n-plus3" => Ok(Corollary::NPlus3),
            "kernel" => Ok(Corollary::Kernel),
            other => Err(Error::OutOfRange(format!("unknown corollary {other:?}"))),
        }
    }
}

/// Right-hand sides of the closed-form corollaries, assembled from the `Q_{n,t}` exactly as
/// stated (with `Q_{n,t} = 0` for `t < 0`). `i` is only read for [`Corollary::Kernel`].
pub fn corollary_rhs(which: Corollary, n: usize, s: usize, i: Option<u64>, p: Prime) -> Result<Poly> {
    check_delta_args(n, i.unwrap_or(1), s)?;
    let q = |t: i64| dickson_q(n, t, p);
    let s_ = s as i64;
    let top = n as i64 - 1;
    let pv = p.value();
    let p2 = pv * pv;
    let q0 = q(0)?;
    let qs = q(s_)?;
    let sign = p.sign(n as i64);

    let inner = match which {
        Corollary::NPlus1 => {
            // -Q_{s-1}^p + Q_{n-1}^p Q_s
            -q(s_ - 1)?.frobenius(1)? + q(top)?.frobenius(1)? * qs
        }
        Corollary::NPlus2 => {
            // Q_{s-2}^{p^2} - Q_{s-1}^p Q_{n-1}^{p^2} + (Q_{n-1}^{p^2+p} - Q_{n-2}^{p^2}) Q_s
            let a = q(s_ - 2)?.frobenius(2)?;
            let b = q(s_ - 1)?.frobenius(1)? * q(top)?.frobenius(2)?;
            let c = q(top)?.pow(p2 + pv)? - q(top - 1)?.frobenius(2)?;
            a - b + c * qs
        }
        Corollary::NPlus3 => {
            let p_part = corollary_p_n3(n, s, p)?;
            let r_part = corollary_r_n3(n, p)?;
            p_part.frobenius(1)? + r_part.frobenius(1)? * qs
        }
        Corollary::Kernel => {
            let i = i.ok_or_else(|| Error::OutOfRange("kernel corollary needs i".into()))?;
            // (-1)^n Q_0^p P_{n,i,s}^p
            let pp = p_coef(n, i, s, p)?.frobenius(1)?;
            return Ok(q0.frobenius(1)?.checked_mul(&pp)?.scale(sign));
        }
    };
    Ok(q0.checked_mul(&inner)?.scale(sign))
}

/// `P_{n,n+3,s} = Q_{s-3}^{p^2} - Q_{s-2}^p Q_{n-1}^{p^2} - Q_{s-1} Q_{n-2}^{p^2} + Q_{s-1} Q_{n-1}^{p^2+p}`.
pub fn corollary_p_n3(n: usize, s: usize, p: Prime) -> Result<Poly> {
    let q = |t: i64| dickson_q(n, t, p);
    let (s, top) = (s as i64, n as i64 - 1);
    let pv = p.value();
    Ok(q(s - 3)?.frobenius(2)? - q(s - 2)?.frobenius(1)? * q(top)?.frobenius(2)?
        - q(s - 1)? * q(top - 1)?.frobenius(2)?
        + q(s - 1)? * q(top)?.pow(pv * pv + pv)?)
}

/// `R_{n,n+3} = Q_{n-3}^{p^2} - Q_{n-2}^{p^2} Q_{n-1} - Q_{n-2}^p Q_{n-1}^{p^2} + Q_{n-1}^{p^2+p+1}`.
pub fn corollary_r_n3(n: usize, p: Prime) -> Result<Poly> {
    let q = |t: i64| dickson_q(n, t, p);
    let top = n as i64 - 1;
    let pv = p.value();
    Ok(q(top - 2)?.frobenius(2)? - q(top - 1)?.frobenius(2)? * q(top)?
        - q(top - 1)?.frobenius(1)? * q(top)?.frobenius(2)?
        + q(top)?.pow(pv * pv + pv + 1)?)
}
