#![allow(dead_code)]

use dickson_core::{Monomial, Poly, Prime};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// A random polynomial with up to `max_terms` terms and exponents up to `max_exp`.
pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, p: Prime, max_terms: usize, max_exp: u64) -> Poly {
    let len = rng.gen_range(0..=max_terms);
    Poly::from_terms(
        n,
        p,
        (0..len).map(|_| {
            let exps = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
            (Monomial::new(exps).unwrap(), rng.gen_range(0..p.value()))
        }),
    )
}

/// A random homogeneous polynomial of total degree `d`.
pub fn random_homogeneous(rng: &mut ChaCha8Rng, n: usize, p: Prime, max_terms: usize, d: u64) -> Poly {
    let len = rng.gen_range(1..=max_terms);
    Poly::from_terms(
        n,
        p,
        (0..len).map(|_| {
            let mut left = d;
            let mut exps = vec![0; n];
            for e in exps.iter_mut().take(n - 1) {
                *e = rng.gen_range(0..=left);
                left -= *e;
            }
            exps[n - 1] = left;
            (Monomial::new(exps).unwrap(), rng.gen_range(1..p.value()))
        }),
    )
}

pub fn random_nonzero(rng: &mut ChaCha8Rng, n: usize, p: Prime, max_terms: usize, max_exp: u64) -> Poly {
    loop {
        let f = random_poly(rng, n, p, max_terms, max_exp);
        if !f.is_zero() {
            return f;
        }
    }
}

/// `(p, n)` pairs the identity grid runs over.
pub const GRID: [(u64, usize); 6] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 2)];
