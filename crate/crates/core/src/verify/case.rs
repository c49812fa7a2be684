use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dickson::{
    bracket, dickson_monomial_count, dickson_q, gl_generators, invariant_space_dimension,
    recursion_rhs, ESeq, DEFAULT_MONOMIAL_BOUND, L,
};
use crate::error::{Error, Result};
use crate::fp_poly::budget::{self, Budget};
use crate::fp_poly::{format_monomial, Poly, Prime};
use crate::steenrod::{
    corollary_rhs, st_delta, st_delta_via_bracket, st_delta_via_main, Corollary, DeltaIndex,
};

/// Random `(prefix, e)` draws per recursion case.
pub const RECURSION_DRAWS: usize = 200;

/// The identity a case checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Main,
    SmithSwitzer,
    Recursion,
    DetFormula,
    RoutesAgree,
    CorN1,
    CorN2,
    CorN3,
    Kernel,
    Invariance,
    Hilbert,
    Q0Power,
    /// A deliberately wrong identity; exercises the failure path of the harness.
    SelfTest,
}

impl Theorem {
    /// Everything `--theorem all` runs (the self-test fixture is opt-in).
    pub const ALL: [Theorem; 12] = [
        Theorem::Main,
        Theorem::SmithSwitzer,
        Theorem::Recursion,
        Theorem::DetFormula,
        Theorem::RoutesAgree,
        Theorem::CorN1,
        Theorem::CorN2,
        Theorem::CorN3,
        Theorem::Kernel,
        Theorem::Invariance,
        Theorem::Hilbert,
        Theorem::Q0Power,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Main => "main",
            Theorem::SmithSwitzer => "smith-switzer",
            Theorem::Recursion => "recursion",
            Theorem::DetFormula => "det-formula",
            Theorem::RoutesAgree => "routes-agree",
            Theorem::CorN1 => "cor-n1",
            Theorem::CorN2 => "cor-n2",
            Theorem::CorN3 => "cor-n3",
            Theorem::Kernel => "kernel",
            Theorem::Invariance => "invariance",
            Theorem::Hilbert => "hilbert",
            Theorem::Q0Power => "q0-power",
            Theorem::SelfTest => "self-test",
        }
    }

    fn needs_s(self) -> bool {
        !matches!(
            self,
            Theorem::Recursion | Theorem::Hilbert | Theorem::Q0Power
        )
    }

    fn needs_i(self) -> bool {
        matches!(
            self,
            Theorem::Main
                | Theorem::SmithSwitzer
                | Theorem::DetFormula
                | Theorem::RoutesAgree
                | Theorem::CorN1
                | Theorem::CorN2
                | Theorem::CorN3
                | Theorem::Kernel
                | Theorem::SelfTest
        )
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .chain([Theorem::SelfTest])
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown theorem {s:?}")))
    }
}

/// One verification case.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CaseSpec {
    pub theorem: Theorem,
    pub p: u64,
    pub n: usize,
    pub s: Option<usize>,
    pub i: Option<u64>,
    pub d: Option<u64>,
    #[serde(skip)]
    pub seed: u64,
}

impl CaseSpec {
    pub fn new(theorem: Theorem, p: u64, n: usize) -> Self {
        CaseSpec {
            theorem,
            p,
            n,
            s: None,
            i: None,
            d: None,
            seed: 0,
        }
    }

    pub fn with_s(mut self, s: usize) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_i(mut self, i: u64) -> Self {
        self.i = Some(i);
        self
    }

    pub fn with_d(mut self, d: u64) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Checks that the fields the theorem reads are present and in range.
    pub fn validate(&self) -> Result<Prime> {
        let p = Prime::new(self.p)?;
        let bad = |msg: String| Err(Error::OutOfRange(format!("{}: {msg}", self.theorem)));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.theorem.needs_s() {
            match self.s {
                Some(s) if s < self.n => {}
                Some(s) => return bad(format!("s = {s} not below n = {}", self.n)),
                None => return bad("missing s".into()),
            }
        }
        if self.theorem.needs_i() {
            match self.i {
                Some(i) if i >= 1 => {}
                Some(_) => return bad("i must be at least 1".into()),
                None => return bad("missing i".into()),
            }
        }
        if self.theorem == Theorem::SmithSwitzer && self.i > Some(self.n as u64) {
            return bad("the case table covers 1 <= i <= n".into());
        }
        if self.theorem == Theorem::Hilbert && self.d.is_none() {
            return bad("missing d".into());
        }
        Ok(p)
    }
}

/// Outcome of one case. `witness` is present exactly when the case ran and failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    #[serde(flatten)]
    pub spec: CaseSpec,
    pub passed: bool,
    pub skipped: bool,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

struct Outcome {
    lhs_terms: usize,
    rhs_terms: usize,
    witness: Option<String>,
}

impl Outcome {
    fn compare(lhs: &Poly, rhs: &Poly) -> Self {
        Outcome {
            lhs_terms: lhs.len(),
            rhs_terms: rhs.len(),
            witness: lhs.first_difference(rhs).map(|m| format_monomial(&m)),
        }
    }

    fn and(mut self, other: Outcome) -> Self {
        self.lhs_terms += other.lhs_terms;
        self.rhs_terms += other.rhs_terms;
        self.witness = self.witness.or(other.witness);
        self
    }
}

/// Runs one case under `budget`. Exceeding the budget marks the case skipped.
pub fn run_case(spec: &CaseSpec, budget: Budget) -> CaseResult {
    let start = Instant::now();
    let outcome = spec
        .validate()
        .and_then(|p| budget::with_budget(budget, || evaluate(spec, p)));
    let elapsed_ms = duration_ms(start.elapsed());
    let (passed, skipped, lhs_terms, rhs_terms, witness) = match outcome {
        Ok(o) => (o.witness.is_none(), false, o.lhs_terms, o.rhs_terms, o.witness),
        Err(Error::Budget(_)) => (false, true, 0, 0, None),
        Err(e) => (false, false, 0, 0, Some(format!("error: {e}"))),
    };
    CaseResult {
        spec: spec.clone(),
        passed,
        skipped,
        lhs_terms,
        rhs_terms,
        elapsed_ms,
        witness,
    }
}

fn duration_ms(d: Duration) -> u64 {
    d.as_millis().min(u64::MAX as u128) as u64
}

fn evaluate(spec: &CaseSpec, p: Prime) -> Result<Outcome> {
    let n = spec.n;
    let s = spec.s.unwrap_or(0);
    let delta = || DeltaIndex::new(spec.i.unwrap_or(0));
    let qs = || dickson_q(n, s as i64, p);
    match spec.theorem {
        Theorem::Main => {
            let lhs = st_delta(&qs()?, delta()?)?;
            let rhs = st_delta_via_main(n, s, delta()?, p)?;
            Ok(Outcome::compare(&lhs, &rhs))
        }
        Theorem::DetFormula => {
            let lhs = st_delta(&qs()?, delta()?)?;
            let rhs = st_delta_via_bracket(n, s, delta()?, p)?;
            Ok(Outcome::compare(&lhs, &rhs))
        }
        Theorem::RoutesAgree => {
            let direct = st_delta(&qs()?, delta()?)?;
            let bracket_route = st_delta_via_bracket(n, s, delta()?, p)?;
            let main_route = st_delta_via_main(n, s, delta()?, p)?;
            Ok(Outcome::compare(&direct, &bracket_route)
                .and(Outcome::compare(&bracket_route, &main_route)))
        }
        Theorem::SmithSwitzer => {
            let i = delta()?;
            let lhs = st_delta(&qs()?, i)?;
            let rhs = smith_switzer_value(n, s, i.get(), p)?;
            Ok(Outcome::compare(&lhs, &rhs))
        }
        Theorem::CorN1 | Theorem::CorN2 | Theorem::CorN3 => {
            let which = match spec.theorem {
                Theorem::CorN1 => Corollary::NPlus1,
                Theorem::CorN2 => Corollary::NPlus2,
                _ => Corollary::NPlus3,
            };
            let lhs = st_delta(&qs()?, delta()?)?;
            let rhs = corollary_rhs(which, n, s, None, p)?;
            Ok(Outcome::compare(&lhs, &rhs))
        }
        Theorem::Kernel => {
            let i = delta()?;
            let q0 = dickson_q(n, 0, p)?;
            let lhs = st_delta(&q0.pow(p.value() - 1)?.checked_mul(&qs()?)?, i)?;
            let rhs = corollary_rhs(Corollary::Kernel, n, s, Some(i.get()), p)?;
            let twice = st_delta(&lhs, i)?;
            Ok(Outcome::compare(&lhs, &rhs).and(Outcome::compare(&twice, &Poly::zero(n, p))))
        }
        Theorem::Recursion => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(spec.seed, p, n));
            let mut acc = Outcome {
                lhs_terms: 0,
                rhs_terms: 0,
                witness: None,
            };
            for _ in 0..RECURSION_DRAWS {
                let prefix: Vec<u64> = (0..n - 1).map(|_| rng.gen_range(0..=3)).collect();
                let e = rng.gen_range(0..=2);
                let mut full = prefix.clone();
                full.push(e + n as u64);
                let lhs = bracket(n, &ESeq(full), p)?;
                let rhs = recursion_rhs(n, &prefix, e, p)?;
                acc = acc.and(Outcome::compare(&lhs, &rhs));
            }
            Ok(acc)
        }
        Theorem::Invariance => {
            let f = qs()?;
            let mut acc = Outcome {
                lhs_terms: f.len(),
                rhs_terms: f.len(),
                witness: None,
            };
            for g in gl_generators(n, p) {
                let image = f.substitute_linear(&g)?;
                if let Some(m) = f.first_difference(&image) {
                    acc.witness = Some(format_monomial(&m));
                    break;
                }
            }
            Ok(acc)
        }
        Theorem::Hilbert => {
            let d = spec.d.unwrap_or(0);
            let dim = invariant_space_dimension(n, p, d, DEFAULT_MONOMIAL_BOUND)?;
            let count = dickson_monomial_count(n, p, d) as usize;
            Ok(Outcome {
                lhs_terms: dim,
                rhs_terms: count,
                witness: (dim != count)
                    .then(|| format!("invariant dimension {dim} != Dickson monomial count {count}")),
            })
        }
        Theorem::Q0Power => {
            let lhs = dickson_q(n, 0, p)?;
            let rhs = L(n, n, p)?.pow(p.value() - 1)?;
            Ok(Outcome::compare(&lhs, &rhs))
        }
        Theorem::SelfTest => {
            let lhs = st_delta(&qs()?, delta()?)?;
            let rhs = st_delta_via_bracket(n, s, delta()?, p)?.checked_add(&Poly::one(n, p))?;
            Ok(Outcome::compare(&lhs, &rhs))
        }
    }
}

/// The value of `St^{Δ_i}(Q_{n,s})` for `1 <= i <= n` from the closed case table.
pub fn smith_switzer_value(n: usize, s: usize, i: u64, p: Prime) -> Result<Poly> {
    let q0 = dickson_q(n, 0, p)?;
    if s > 0 && i == s as u64 {
        Ok(q0.scale(p.sign(s as i64 - 1)))
    } else if i == n as u64 {
        Ok(q0
            .checked_mul(&dickson_q(n, s as i64, p)?)?
            .scale(p.sign(n as i64)))
    } else {
        Ok(Poly::zero(n, p))
    }
}

fn mix_seed(seed: u64, p: Prime, n: usize) -> u64 {
    seed ^ p.value().wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (n as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(spec: CaseSpec) -> CaseResult {
        run_case(&spec, Budget::default())
    }

    #[test]
    fn theorem_names_round_trip() {
        for t in Theorem::ALL.into_iter().chain([Theorem::SelfTest]) {
            assert_eq!(t.name().parse::<Theorem>().unwrap(), t);
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.name()));
        }
        assert!("all".parse::<Theorem>().is_err());
    }

    #[test]
    fn spec_examples() {
        let main = run(CaseSpec::new(Theorem::Main, 2, 2).with_s(1).with_i(4));
        assert!(main.passed && main.witness.is_none(), "{main:?}");
        assert_eq!(main.lhs_terms, main.rhs_terms);
        let ss = run(CaseSpec::new(Theorem::SmithSwitzer, 3, 2).with_s(1).with_i(2));
        assert!(ss.passed, "{ss:?}");
        let q0 = run(CaseSpec::new(Theorem::Q0Power, 3, 2));
        assert!(q0.passed, "{q0:?}");
    }

    #[test]
    fn perturbed_identity_fails_with_witness() {
        let r = run(CaseSpec::new(Theorem::SelfTest, 3, 2).with_s(1).with_i(3));
        assert!(!r.passed && !r.skipped);
        // the perturbation is the constant 1, the smallest monomial; nothing else differs
        assert_eq!(r.witness.as_deref(), Some("1"));
    }

    #[test]
    fn invalid_specs_fail_validation() {
        assert!(CaseSpec::new(Theorem::Main, 4, 2).with_s(0).with_i(1).validate().is_err());
        assert!(CaseSpec::new(Theorem::Main, 2, 2).with_s(2).with_i(1).validate().is_err());
        assert!(CaseSpec::new(Theorem::Main, 2, 2).with_s(0).validate().is_err());
        assert!(CaseSpec::new(Theorem::SmithSwitzer, 2, 2).with_s(0).with_i(3).validate().is_err());
        assert!(CaseSpec::new(Theorem::Hilbert, 2, 2).validate().is_err());
        assert!(CaseSpec::new(Theorem::Q0Power, 2, 0).validate().is_err());
    }

    #[test]
    fn budget_overrun_is_skipped() {
        let tight = Budget {
            max_terms: 2,
            time: None,
        };
        let r = run_case(&CaseSpec::new(Theorem::Main, 5, 2).with_s(1).with_i(5), tight);
        assert!(r.skipped && !r.passed && r.witness.is_none(), "{r:?}");
    }

    #[test]
    fn recursion_is_seeded() {
        let spec = CaseSpec::new(Theorem::Recursion, 3, 2).with_seed(7);
        let a = run(spec.clone());
        let b = run(spec);
        assert!(a.passed);
        assert_eq!(a.lhs_terms, b.lhs_terms);
    }
}
