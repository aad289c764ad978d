//! Census estimators, exact cycle-count formulas and the bound checks built
//! from them.

mod accumulator;
mod bounds;
mod formulas;

pub use accumulator::{AccumulatorConfig, Ensemble, StatsAccumulator};
pub use bounds::{
    bonferroni_check, interval_bounds, interval_experiment, joint_tv_distance, log_period_bound,
    rational_log_period_bound, rational_sandwich_check, write_histogram_csv, BonferroniCheck, BoundKind, BoundReport,
    IntervalExperiment, RationalSandwichCheck, DEFAULT_KAPPA,
};
pub use formulas::{
    factorial_moment_exact, factorial_moment_fraction, falling_factorial, falling_ratio, falling_ratio_f64,
    mertens_sum, poisson_cell_probability, poisson_joint_pmf, poisson_pmf, poisson_tail, s1_exact, s1_fraction,
    s2_exact, s2_fraction, zp_count, MomentSpec,
};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// An exact fraction with a decimal rendering, as written into reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: String,
    pub den: String,
    pub decimal: f64,
}

impl From<&BigRational> for Fraction {
    fn from(r: &BigRational) -> Self {
        Fraction { num: r.numer().to_string(), den: r.denom().to_string(), decimal: formulas::to_f64(r) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The hypothesis of the inequality does not hold at these parameters.
    NotApplicable,
    /// The inequality holds trivially because its right side is an empty sum.
    Vacuous,
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub detail: String,
}

impl Verdict {
    pub fn new(check: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Verdict { check: check.into(), status, detail: detail.into() }
    }

    pub fn from_bool(check: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Verdict::new(check, if ok { Status::Pass } else { Status::Fail }, detail)
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}
