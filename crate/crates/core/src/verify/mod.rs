//! Verification harness: expands grids of identity checks, runs them in parallel under a
//! resource budget, and renders text or JSON reports.

mod case;
mod grid;
mod report;

pub use case::{run_case, smith_switzer_value, CaseResult, CaseSpec, Theorem, RECURSION_DRAWS};
pub use grid::{budget_from_env, run_grid, GridConfig, DEFAULT_D_MAX};
pub use report::{emit_report, Format, Report, Summary};
