//! Per-thread resource limits for polynomial arithmetic.
//!
//! Long-running products and divisions poll these limits so that a runaway computation
//! returns [`Error::Budget`] instead of exhausting memory or time. Outside of
//! [`with_budget`] no limits apply.

use std::cell::Cell;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_terms: usize,
    pub time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_terms: 10_000_000,
            time: Some(Duration::from_secs(60)),
        }
    }
}

#[derive(Clone, Copy)]
struct Active {
    max_terms: usize,
    deadline: Option<Instant>,
}

thread_local! {
    static ACTIVE: Cell<Option<Active>> = const { Cell::new(None) };
}

/// Runs `f` with `budget` in force on the current thread, restoring the previous limits after.
pub fn with_budget<T>(budget: Budget, f: impl FnOnce() -> T) -> T {
    let active = Active {
        max_terms: budget.max_terms,
        deadline: budget.time.map(|t| Instant::now() + t),
    };
    let prev = ACTIVE.with(|c| c.replace(Some(active)));
    let out = f();
    ACTIVE.with(|c| c.set(prev));
    out
}

pub(crate) fn check_terms(len: usize) -> Result<()> {
    match ACTIVE.with(Cell::get) {
        Some(a) if len > a.max_terms => Err(Error::Budget(format!(
            "polynomial exceeds {} terms",
            a.max_terms
        ))),
        _ => Ok(()),
    }
}

pub(crate) fn check_time() -> Result<()> {
    match ACTIVE.with(Cell::get) {
        Some(Active {
            deadline: Some(d), ..
        }) if Instant::now() > d => Err(Error::Budget("time limit reached".into())),
        _ => Ok(()),
    }
}
