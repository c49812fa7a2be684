use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A residue in `[0, p)`. Always reduced; the owning [`Prime`] does the arithmetic.
pub type Coeff = u64;

const PRIME_LIMIT: u64 = 1 << 31;

/// The characteristic of the prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < PRIME_LIMIT && is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidPrime(p))
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, a: u64) -> Coeff {
        a % self.0
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(self, a: i64) -> Coeff {
        a.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn add(self, a: Coeff, b: Coeff) -> Coeff {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: Coeff, b: Coeff) -> Coeff {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: Coeff) -> Coeff {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: Coeff, b: Coeff) -> Coeff {
        a * b % self.0
    }

    pub fn pow(self, mut base: Coeff, mut exp: u64) -> Coeff {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat. `a` must be nonzero.
    pub fn inv(self, a: Coeff) -> Coeff {
        debug_assert!(!a.is_multiple_of(self.0), "inverse of zero");
        self.pow(a, self.0 - 2)
    }

    /// `(-1)^k` as a residue.
    pub fn sign(self, k: i64) -> Coeff {
        if k.rem_euclid(2) == 0 {
            1
        } else {
            self.0 - 1
        }
    }

    /// `p^e` with overflow detection.
    pub fn checked_pow(self, e: u64) -> Result<u64> {
        let e = u32::try_from(e).map_err(|_| Error::Overflow)?;
        self.0.checked_pow(e).ok_or(Error::Overflow)
    }

    /// Base-`p` digits of `a`, least significant first.
    pub fn digits(self, mut a: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while a > 0 {
            out.push(a % self.0);
            a /= self.0;
        }
        out
    }

    /// `binom(a, b) mod p` via Lucas' theorem.
    pub fn binomial(self, mut a: u64, mut b: u64) -> Coeff {
        if b > a {
            return 0;
        }
        let p = self.0;
        let mut acc = 1;
        while b > 0 {
            let (ad, bd) = (a % p, b % p);
            if bd > ad {
                return 0;
            }
            acc = self.mul(acc, self.small_binomial(ad, bd));
            a /= p;
            b /= p;
        }
        acc
    }

    // binom(a, b) mod p for a < p, by the multiplicative formula.
    fn small_binomial(self, a: u64, b: u64) -> Coeff {
        let b = b.min(a - b);
        let (mut num, mut den) = (1, 1);
        for k in 0..b {
            num = self.mul(num, a - k);
            den = self.mul(den, k + 1);
        }
        self.mul(num, self.inv(den))
    }

    /// The least generator of the multiplicative group `F_p^*`.
    pub fn primitive_root(self) -> Coeff {
        let p = self.0;
        if p == 2 {
            return 1;
        }
        let order = p - 1;
        let factors = prime_factors(order);
        (2..p)
            .find(|&g| factors.iter().all(|&q| self.pow(g, order / q) != 1))
            .expect("F_p^* is cyclic")
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Deterministic trial division; adequate for values below 2^31.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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
