use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fp_poly::budget::Budget;
use crate::fp_poly::Prime;
use crate::steenrod::SIGN_FLAG;

use super::case::{run_case, CaseSpec, Theorem};
use super::report::{Report, Summary};

/// Default `d` range for the invariant-dimension cases.
pub const DEFAULT_D_MAX: u64 = 30;

/// A Cartesian grid of cases: every theorem over every `(p, n)` pair, with the `s`, `i`
/// and `d` ranges each theorem reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridConfig {
    pub theorems: Vec<Theorem>,
    pub pairs: Vec<(u64, usize)>,
    /// Restricts `s`; all of `0..n` when `None`.
    pub s: Option<Vec<usize>>,
    /// Largest `i` for the routes; `n + 4` (`n + 3` for the kernel cases) when `None`.
    pub i_max: Option<u64>,
    pub d_max: Option<u64>,
    /// Pairs for the invariant-dimension cases; `pairs` when `None`.
    pub hilbert_pairs: Option<Vec<(u64, usize)>>,
    pub seed: u64,
}

impl GridConfig {
    /// `theorems x primes x ns`.
    pub fn product(theorems: Vec<Theorem>, primes: &[u64], ns: &[usize]) -> Self {
        GridConfig {
            theorems,
            pairs: primes
                .iter()
                .flat_map(|&p| ns.iter().map(move |&n| (p, n)))
                .collect(),
            s: None,
            i_max: None,
            d_max: None,
            hilbert_pairs: None,
            seed: 0,
        }
    }

    /// The full verification grid: every theorem over
    /// `(p, n) in {(2,1), (2,2), (2,3), (3,1), (3,2), (5,2)}`, with the invariant-dimension
    /// cases at `(p, n) in {(2,2), (2,3), (3,2)}`.
    pub fn default_grid() -> Self {
        GridConfig {
            theorems: Theorem::ALL.to_vec(),
            pairs: vec![(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 2)],
            s: None,
            i_max: None,
            d_max: None,
            hilbert_pairs: Some(vec![(2, 2), (2, 3), (3, 2)]),
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Expands the grid, validating every range before anything runs.
    pub fn cases(&self) -> Result<Vec<CaseSpec>> {
        for &(p, n) in self.pairs.iter().chain(self.hilbert_pairs.iter().flatten()) {
            Prime::new(p)?;
            if n == 0 {
                return Err(Error::OutOfRange("n must be at least 1".into()));
            }
        }
        if self.i_max == Some(0) {
            return Err(Error::OutOfRange("--i-max must be at least 1".into()));
        }
        let max_n = self.pairs.iter().map(|&(_, n)| n).max().unwrap_or(0);
        if let Some(ss) = &self.s {
            if let Some(&bad) = ss.iter().find(|&&s| s >= max_n) {
                return Err(Error::OutOfRange(format!("s = {bad} is not below any requested n")));
            }
        }
        let mut out = Vec::new();
        for &theorem in &self.theorems {
            let pairs = if theorem == Theorem::Hilbert {
                self.hilbert_pairs.clone().unwrap_or_else(|| self.pairs.clone())
            } else {
                self.pairs.clone()
            };
            for (p, n) in pairs {
                self.expand(theorem, p, n, &mut out);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn s_values(&self, n: usize) -> Vec<usize> {
        match &self.s {
            Some(ss) => ss.iter().copied().filter(|&s| s < n).collect(),
            None => (0..n).collect(),
        }
    }

    fn expand(&self, theorem: Theorem, p: u64, n: usize, out: &mut Vec<CaseSpec>) {
        let base = CaseSpec::new(theorem, p, n).with_seed(self.seed);
        let top = n as u64;
        let per_s = |is: &mut dyn Iterator<Item = u64>, out: &mut Vec<CaseSpec>| {
            let is: Vec<u64> = is.collect();
            for s in self.s_values(n) {
                for &i in &is {
                    out.push(base.clone().with_s(s).with_i(i));
                }
            }
        };
        match theorem {
            Theorem::Main | Theorem::DetFormula | Theorem::RoutesAgree | Theorem::SelfTest => {
                per_s(&mut (1..=self.i_max.unwrap_or(top + 4)), out)
            }
            Theorem::Kernel => per_s(&mut (1..=self.i_max.unwrap_or(top + 3)), out),
            Theorem::SmithSwitzer => {
                per_s(&mut (1..=self.i_max.unwrap_or(top).min(top)), out)
            }
            Theorem::CorN1 => per_s(&mut std::iter::once(top + 1), out),
            Theorem::CorN2 => per_s(&mut std::iter::once(top + 2), out),
            Theorem::CorN3 => per_s(&mut std::iter::once(top + 3), out),
            Theorem::Invariance => {
                for s in self.s_values(n) {
                    out.push(base.clone().with_s(s));
                }
            }
            Theorem::Hilbert => {
                for d in 0..=self.d_max.unwrap_or(DEFAULT_D_MAX) {
                    out.push(base.clone().with_d(d));
                }
            }
            Theorem::Recursion | Theorem::Q0Power => out.push(base),
        }
    }
}

/// Runs every case of the grid in parallel and assembles the report in case order.
pub fn run_grid(config: &GridConfig, budget: Budget) -> Result<Report> {
    let cases = config.cases()?;
    let results: Vec<_> = cases.par_iter().map(|c| run_case(c, budget)).collect();
    let summary = Summary::tally(&results);
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        sign_flag: SIGN_FLAG,
        seed: config.seed,
        cases: results,
        summary,
    })
}

/// Reads `DICKSON_TERM_BUDGET` on top of the default budget.
pub fn budget_from_env() -> Result<Budget> {
    let mut budget = Budget::default();
    if let Ok(v) = std::env::var("DICKSON_TERM_BUDGET") {
        budget.max_terms = v
            .trim()
            .parse()
            .map_err(|_| Error::OutOfRange(format!("DICKSON_TERM_BUDGET={v:?} is not a count")))?;
    }
    Ok(budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_covers_every_theorem() {
        let cases = GridConfig::default_grid().cases().unwrap();
        for t in Theorem::ALL {
            assert!(cases.iter().any(|c| c.theorem == t), "{t} not covered");
        }
        assert!(!cases.iter().any(|c| c.theorem == Theorem::SelfTest));
        let hilbert: Vec<_> = cases.iter().filter(|c| c.theorem == Theorem::Hilbert).collect();
        assert_eq!(hilbert.len(), 3 * 31);
        // (p, n) = (2, 3): s in 0..3, i in 1..=7
        let main23 = cases
            .iter()
            .filter(|c| c.theorem == Theorem::Main && c.p == 2 && c.n == 3)
            .count();
        assert_eq!(main23, 21);
    }

    #[test]
    fn empty_grid_is_empty() {
        let config = GridConfig::product(vec![], &[2], &[2]);
        let report = run_grid(&config, Budget::default()).unwrap();
        assert!(report.cases.is_empty());
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn malformed_ranges_abort() {
        let mut config = GridConfig::product(vec![Theorem::Main], &[4], &[2]);
        assert!(config.cases().is_err());
        config.pairs = vec![(3, 0)];
        assert!(config.cases().is_err());
        config.pairs = vec![(3, 2)];
        config.s = Some(vec![2]);
        assert!(config.cases().is_err());
        config.s = None;
        config.i_max = Some(0);
        assert!(config.cases().is_err());
    }

    #[test]
    fn cases_are_sorted_and_restricted() {
        let mut config = GridConfig::product(vec![Theorem::Kernel, Theorem::Main], &[3, 2], &[2]);
        config.s = Some(vec![1]);
        config.i_max = Some(2);
        let cases = config.cases().unwrap();
        assert_eq!(cases.len(), 8);
        assert!(cases.windows(2).all(|w| w[0] < w[1]));
        assert!(cases.iter().all(|c| c.s == Some(1)));
    }
}
