use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Largest exponent (and total degree) a monomial may carry.
pub const MAX_EXPONENT: u64 = i64::MAX as u64;

/// A power product `x_1^{a_1} ... x_n^{a_n}`.
///
/// Ordered by graded reverse lexicographic order: higher total degree first, ties broken
/// in favour of the monomial with the smaller exponent in the last variable where the two
/// differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u64>,
    degree: u64,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            exps: vec![0; n],
            degree: 0,
        }
    }

    pub fn new(exps: Vec<u64>) -> Result<Self> {
        let mut degree = 0u64;
        for &e in &exps {
            degree = checked_exponent(degree.checked_add(e))?;
        }
        Ok(Monomial { exps, degree })
    }

    /// `x_var^exp` in `n` variables.
    pub fn var_power(n: usize, var: usize, exp: u64) -> Result<Self> {
        let mut exps = vec![0; n];
        exps[var] = checked_exponent(Some(exp))?;
        Ok(Monomial { exps, degree: exp })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    #[inline]
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        debug_assert_eq!(self.n(), other.n());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| checked_exponent(a.checked_add(*b)))
            .collect::<Result<Vec<_>>>()?;
        let degree = checked_exponent(self.degree.checked_add(other.degree))?;
        Ok(Monomial { exps, degree })
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(Monomial {
            exps,
            degree: self.degree - other.degree,
        })
    }

    /// Every exponent multiplied by `k`.
    pub fn scale(&self, k: u64) -> Result<Monomial> {
        let exps = self
            .exps
            .iter()
            .map(|a| checked_exponent(a.checked_mul(k)))
            .collect::<Result<Vec<_>>>()?;
        let degree = checked_exponent(self.degree.checked_mul(k))?;
        Ok(Monomial { exps, degree })
    }

    /// Adjusts a single exponent by `delta`; used by derivations.
    pub(crate) fn with_exponent(&self, var: usize, exp: u64) -> Result<Monomial> {
        let mut exps = self.exps.clone();
        let degree = checked_exponent((self.degree - exps[var]).checked_add(exp))?;
        exps[var] = checked_exponent(Some(exp))?;
        Ok(Monomial { exps, degree })
    }
}

fn checked_exponent(v: Option<u64>) -> Result<u64> {
    match v {
        Some(v) if v <= MAX_EXPONENT => Ok(v),
        _ => Err(Error::Overflow),
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
