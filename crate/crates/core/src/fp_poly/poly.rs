use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

use super::budget;
use super::matrix::Matrix;
use super::monomial::Monomial;
use super::prime::{Coeff, Prime};

/// A polynomial in `F_p[x_1, ..., x_n]` in canonical sparse form.
///
/// Terms are keyed by monomial in grevlex order; no stored coefficient is zero, so two
/// polynomials are equal exactly when their term maps are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    n: usize,
    p: Prime,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero(n: usize, p: Prime) -> Self {
        Poly {
            n,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, p: Prime, c: i64) -> Self {
        Self::monomial(n, p, Monomial::one(n), p.from_i64(c))
    }

    pub fn one(n: usize, p: Prime) -> Self {
        Self::constant(n, p, 1)
    }

    /// The variable `x_{var + 1}` (indices are zero-based here, one-based in text).
    pub fn var(n: usize, p: Prime, var: usize) -> Self {
        assert!(var < n, "variable index {var} out of range for n = {n}");
        Self::monomial(n, p, Monomial::var_power(n, var, 1).expect("degree 1"), 1)
    }

    pub fn monomial(n: usize, p: Prime, m: Monomial, c: Coeff) -> Self {
        debug_assert_eq!(m.n(), n);
        let mut terms = BTreeMap::new();
        let c = p.reduce(c);
        if c != 0 {
            terms.insert(m, c);
        }
        Poly { n, p, terms }
    }

    /// Sums arbitrary (possibly repeated, possibly unreduced) terms into canonical form.
    pub fn from_terms(n: usize, p: Prime, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Self {
        let mut out = Poly::zero(n, p);
        for (m, c) in terms {
            debug_assert_eq!(m.n(), n);
            out.add_term(m, p.reduce(c));
        }
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, &c)| m.is_one() && c == 1)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, Coeff)> + '_ {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, Coeff)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// Degree in the topological grading where each variable has dimension 1 for `p = 2`
    /// and 2 for odd `p`.
    pub fn topological_degree(&self) -> Option<u64> {
        let d = self.degree()?;
        Some(if self.p.value() == 2 { d } else { 2 * d })
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            Some(d) => degrees.all(|e| e == d),
            None => true,
        }
    }

    /// The largest monomial (in grevlex order) whose coefficient differs between the two.
    pub fn first_difference(&self, other: &Poly) -> Option<Monomial> {
        let mut a = self.terms.iter().rev().peekable();
        let mut b = other.terms.iter().rev().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return None,
                (Some((m, _)), None) | (None, Some((m, _))) => return Some((*m).clone()),
                (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb) {
                    std::cmp::Ordering::Greater => return Some((*ma).clone()),
                    std::cmp::Ordering::Less => return Some((*mb).clone()),
                    std::cmp::Ordering::Equal => {
                        if ca != cb {
                            return Some((*ma).clone());
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c == 0 {
            return;
        }
        let p = self.p;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = p.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_shape(&self, other: &Poly) -> Result<()> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::Shape(format!(
                "operands live in F_{}[{} vars] and F_{}[{} vars]",
                self.p, self.n, other.p, other.n
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_shape(other)?;
        let (mut out, rest) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, &c) in &rest.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Poly {
        self.scale(self.p.value() - 1)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: Coeff) -> Poly {
        let c = self.p.reduce(c);
        if c == 0 {
            return Poly::zero(self.n, self.p);
        }
        let p = self.p;
        Poly {
            n: self.n,
            p,
            terms: self.terms.iter().map(|(m, &a)| (m.clone(), p.mul(a, c))).collect(),
        }
    }

    /// Multiplies by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: Coeff) -> Result<Poly> {
        let c = self.p.reduce(c);
        if c == 0 {
            return Ok(Poly::zero(self.n, self.p));
        }
        let p = self.p;
        let terms = self
            .terms
            .iter()
            .map(|(a, &k)| Ok((a.mul(m)?, p.mul(k, c))))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Poly {
            n: self.n,
            p,
            terms,
        })
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_shape(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.n, self.p));
        }
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (m, c) = small.leading_term().expect("nonzero");
            return big.mul_term(m, c);
        }
        let p = self.p;
        let mut acc: HashMap<Monomial, Coeff> = HashMap::with_capacity(big.len() * 2);
        for (i, (ms, &cs)) in small.terms.iter().enumerate() {
            if i % 64 == 0 {
                budget::check_time()?;
                budget::check_terms(acc.len())?;
            }
            for (mb, &cb) in &big.terms {
                let slot = acc.entry(ms.mul(mb)?).or_insert(0);
                *slot = p.add(*slot, p.mul(cs, cb));
            }
        }
        let terms: BTreeMap<_, _> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        budget::check_terms(terms.len())?;
        Ok(Poly {
            n: self.n,
            p,
            terms,
        })
    }

    /// `f^(p^e)`: every exponent is multiplied by `p^e`, coefficients are fixed by Fermat.
    pub fn frobenius(&self, e: u64) -> Result<Poly> {
        let q = self.p.checked_pow(e)?;
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| Ok((m.scale(q)?, c)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Poly {
            n: self.n,
            p: self.p,
            terms,
        })
    }

    /// `f^k`. Writes `k` in base `p` and combines Frobenius twists of small powers, so that
    /// `f^(p^e)` costs a single pass over the terms.
    pub fn pow(&self, k: u64) -> Result<Poly> {
        let mut acc = Poly::one(self.n, self.p);
        for (e, d) in self.p.digits(k).into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let factor = self.small_pow(d)?.frobenius(e as u64)?;
            acc = acc.checked_mul(&factor)?;
        }
        Ok(acc)
    }

    fn small_pow(&self, mut k: u64) -> Result<Poly> {
        let mut base = self.clone();
        let mut acc = Poly::one(self.n, self.p);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// The exact quotient `self / divisor`.
    ///
    /// Repeatedly cancels the grevlex-leading term of the running remainder against the
    /// leading term of `divisor`; fails as soon as that leading term is not divisible.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        self.check_shape(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let p = self.p;
        let lc_inv = p.inv(lc);
        if divisor.len() == 1 {
            let terms = self
                .terms
                .iter()
                .map(|(m, &c)| Ok((m.div(lm).ok_or(Error::NotDivisible)?, p.mul(c, lc_inv))))
                .collect::<Result<BTreeMap<_, _>>>()?;
            return Ok(Poly {
                n: self.n,
                p,
                terms,
            });
        }
        let tail: Vec<(&Monomial, Coeff)> = divisor.terms.iter().rev().skip(1).map(|(m, &c)| (m, c)).collect();
        let mut rem = self.clone();
        let mut quotient = BTreeMap::new();
        let mut steps = 0usize;
        while let Some((m, c)) = rem.terms.pop_last() {
            steps += 1;
            if steps.is_multiple_of(256) {
                budget::check_time()?;
                budget::check_terms(rem.terms.len())?;
            }
            let qm = m.div(lm).ok_or(Error::NotDivisible)?;
            let qc = p.mul(c, lc_inv);
            for &(tm, tc) in &tail {
                rem.add_term(qm.mul(tm)?, p.neg(p.mul(qc, tc)));
            }
            quotient.insert(qm, qc);
        }
        Ok(Poly {
            n: self.n,
            p,
            terms: quotient,
        })
    }

    /// Applies the linear substitution `x_j -> sum_k M[k][j] x_k`, i.e. `f(x) -> f(x M)` with
    /// `x` a row vector.
    pub fn substitute_linear(&self, m: &Matrix) -> Result<Poly> {
        if m.n() != self.n || m.prime() != self.p {
            return Err(Error::Shape(format!(
                "{}x{} matrix over F_{} applied to F_{}[{} vars]",
                m.n(),
                m.n(),
                m.prime(),
                self.p,
                self.n
            )));
        }
        let (n, p) = (self.n, self.p);
        let images: Vec<Poly> = (0..n)
            .map(|j| {
                Poly::from_terms(
                    n,
                    p,
                    (0..n).map(|k| (Monomial::var_power(n, k, 1).expect("degree 1"), m.get(k, j))),
                )
            })
            .collect();
        let mut powers: HashMap<(usize, u64), Poly> = HashMap::new();
        let mut out = Poly::zero(n, p);
        for (mono, &c) in &self.terms {
            let mut term = Poly::constant(n, p, c as i64);
            for (j, &a) in mono.exponents().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let factor = match powers.get(&(j, a)) {
                    Some(f) => f,
                    None => {
                        let f = images[j].pow(a)?;
                        powers.entry((j, a)).or_insert(f)
                    }
                };
                term = term.checked_mul(factor)?;
            }
            for (m, c) in term.terms {
                out.add_term(m, c);
            }
            budget::check_time()?;
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::format_poly(self))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;

            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}: {e}", stringify!($method)))
            }
        }

        impl $trait<Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }

        impl $trait<Poly> for &Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        self.neg_ref()
    }
}
