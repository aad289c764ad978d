//! Experiment driver: run configuration, the parallel census, bound
//! comparisons, the named verification suites and JSON reports.

mod census;
mod suites;

pub use census::{chunk_rng, run_census, Census, ChunkInfo, CHUNK_SIZE};
pub use suites::{run_suite, SuiteOutcome, SUITES};

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::primes::primes_up_to_real;
use crate::space::{SpaceDescriptor, SpaceKind, DEFAULT_ENUMERATION_CAP};
use crate::stats::{
    bonferroni_check, factorial_moment_fraction, interval_experiment, joint_tv_distance, log_period_bound,
    rational_log_period_bound, rational_sandwich_check, BonferroniCheck, BoundReport, Ensemble, Fraction,
    IntervalExperiment, MomentSpec, RationalSandwichCheck, StatsAccumulator, Verdict, DEFAULT_KAPPA,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceChoice {
    Poly,
    Rational,
    /// Uniform maps from an n-set to itself.
    Mapping,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sample,
}

/// Everything that determines a census. Execution details such as the
/// worker count and output paths are kept out so that the echo in a report
/// reproduces it exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub p: u64,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    pub space: SpaceChoice,
    pub degree: usize,
    /// Domain size for the random-mapping ensemble.
    pub n: usize,
    pub mode: Mode,
    pub draws: u64,
    pub seed: u64,
    pub truncation: usize,
    pub clip: u32,
    pub max_moment_weight: usize,
    pub xi: Option<f64>,
    pub zeta: Option<f64>,
    pub kappa: f64,
    pub cap: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 5,
            k: 1,
            modulus: None,
            space: SpaceChoice::Poly,
            degree: 2,
            n: 0,
            mode: Mode::Exhaustive,
            draws: 100_000,
            seed: 0,
            truncation: 5,
            clip: 8,
            max_moment_weight: 4,
            xi: None,
            zeta: None,
            kappa: DEFAULT_KAPPA,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// A validated config together with the field and space it names.
#[derive(Clone, Debug)]
pub struct ResolvedRun {
    pub config: RunConfig,
    pub space: Option<SpaceDescriptor>,
}

impl RunConfig {
    pub fn polynomial(p: u64, degree: usize) -> Self {
        RunConfig { p, degree, ..Default::default() }
    }

    pub fn rational(p: u64, degree: usize) -> Self {
        RunConfig { p, degree, space: SpaceChoice::Rational, ..Default::default() }
    }

    pub fn mapping(n: usize) -> Self {
        RunConfig { n, space: SpaceChoice::Mapping, ..Default::default() }
    }

    pub fn sampled(self, draws: u64, seed: u64) -> Self {
        RunConfig { mode: Mode::Sample, draws, seed, ..self }
    }

    /// Validates the config and fills in the field modulus actually used.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        let mut config = self.clone();
        if config.truncation == 0 || config.clip == 0 {
            return Err(Error::InvalidConfig("b and clip must be at least 1".into()));
        }
        if config.mode == Mode::Sample && config.draws == 0 {
            return Err(Error::InvalidConfig("sample mode needs at least one draw".into()));
        }
        if !(config.kappa.is_finite() && config.kappa >= 0.0) {
            return Err(Error::InvalidConfig("kappa must be a nonnegative number".into()));
        }
        for (name, v) in [("xi", config.xi), ("zeta", config.zeta)] {
            if v.is_some_and(|v| !(v.is_finite() && v >= 0.0)) {
                return Err(Error::InvalidConfig(format!("{name} must be a nonnegative number")));
            }
        }
        let space = match config.space {
            SpaceChoice::Mapping => {
                if config.n == 0 {
                    return Err(Error::InvalidConfig("mapping ensemble needs n >= 1".into()));
                }
                if config.n > u32::MAX as usize {
                    return Err(Error::InvalidConfig("n is too large".into()));
                }
                None
            }
            SpaceChoice::Poly | SpaceChoice::Rational => {
                let field = FieldSpec::new(config.p, config.k, config.modulus.as_deref())?;
                config.modulus = field.modulus().map(<[u64]>::to_vec);
                let kind = if config.space == SpaceChoice::Poly { SpaceKind::Polynomial } else { SpaceKind::Rational };
                Some(SpaceDescriptor::new(field, config.degree, kind)?)
            }
        };
        let run = ResolvedRun { config, space };
        run.work_items()?;
        Ok(run)
    }
}

impl ResolvedRun {
    pub fn ensemble(&self) -> Ensemble {
        match &self.space {
            Some(space) => Ensemble::of_space(space),
            None => Ensemble::RandomMapping { n: self.config.n },
        }
    }

    /// Number of indices (exhaustive) or draws (sampled) to process.
    pub fn work_items(&self) -> Result<u64> {
        let cap = self.config.cap;
        if self.config.mode == Mode::Sample {
            return Ok(self.config.draws);
        }
        let exceeded = |size: BigUint| Error::CapExceeded { size: size.to_string(), cap };
        match &self.space {
            Some(space) => {
                let card = space.cardinality();
                if card > BigUint::from(cap) {
                    return Err(exceeded(card));
                }
                space.candidate_count().ok_or_else(|| exceeded(card))
            }
            None => {
                let n = self.config.n as u64;
                let total = BigUint::from(n).pow(n as u32);
                match total.to_u64() {
                    Some(t) if t <= cap => Ok(t),
                    _ => Err(exceeded(total)),
                }
            }
        }
    }
}

/// What was run; enough to run it again.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Invocation {
    Census { config: RunConfig },
    Bounds { config: RunConfig },
    Verify { suite: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramRow {
    pub cell: Vec<u32>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub r: MomentSpec,
    pub weight: usize,
    pub empirical: Fraction,
    /// The closed form, present where it is exact for the ensemble.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Fraction>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusSummary {
    pub ensemble: Ensemble,
    pub count: u64,
    pub mean_log_period: f64,
    pub mean_period: Fraction,
    pub mean_cyclic_count: Fraction,
    /// k -> share of maps with a k-cycle, for k ≤ b.
    pub delta: BTreeMap<usize, Fraction>,
    /// Same, counting only cycles that avoid ∞.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hat_delta: Option<BTreeMap<usize, Fraction>>,
    pub factorial_moments: Vec<MomentRow>,
    /// b -> total-variation distance to independent Poisson(1/k), k ≤ b.
    pub tv_distance: BTreeMap<usize, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<IntervalExperiment>,
    pub joint_histogram: Vec<HistogramRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsSection {
    pub report: BoundReport,
    pub bonferroni: Vec<BonferroniCheck>,
    pub rational_sandwich: Vec<RationalSandwichCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub invocation: Invocation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<serde_json::Value>,
    pub verdicts: Vec<Verdict>,
    pub chunks: Vec<ChunkInfo>,
    pub passed: bool,
}

impl RunReport {
    fn new(invocation: Invocation, verdicts: Vec<Verdict>, chunks: Vec<ChunkInfo>) -> Self {
        let passed = verdicts.iter().all(|v| !v.failed());
        RunReport { invocation, census: None, bounds: None, suite: None, verdicts, chunks, passed }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Whether the closed-form factorial moment is exact for this ensemble.
fn moment_is_exact(ensemble: Ensemble, weight: usize) -> bool {
    match ensemble {
        Ensemble::Polynomial { d, .. } => weight <= d,
        Ensemble::RandomMapping { n } => weight <= n,
        Ensemble::Rational { .. } => false,
    }
}

/// Summarizes a census and derives the verdicts that hold exactly for it.
pub fn summarize(run: &ResolvedRun, acc: &StatsAccumulator) -> Result<(CensusSummary, Vec<Verdict>)> {
    let ensemble = acc.ensemble();
    let b = acc.config().truncation;
    let exhaustive = run.config.mode == Mode::Exhaustive;
    let mut verdicts = Vec::new();

    let mut factorial_moments = Vec::new();
    for spec in acc.tracked_moments() {
        let empirical = acc.factorial_moment_fraction(spec)?;
        let exact =
            moment_is_exact(ensemble, spec.weight()).then(|| factorial_moment_fraction(ensemble.points(), spec));
        if let (true, Some(exact)) = (exhaustive, &exact) {
            verdicts.push(Verdict::from_bool(
                format!("factorial_moment{:?}", spec.orders()),
                &empirical == exact,
                format!("{empirical} vs {exact}"),
            ));
        }
        factorial_moments.push(MomentRow {
            r: spec.clone(),
            weight: spec.weight(),
            empirical: Fraction::from(&empirical),
            exact: exact.as_ref().map(Fraction::from),
        });
    }

    if let (true, Ensemble::Polynomial { q, d }) = (exhaustive, ensemble) {
        for p in primes_up_to_real(d as f64 / 2.0) {
            verdicts.push(bonferroni_check(q, d, p, &acc.delta_fraction(p as usize)?).verdict);
        }
    }

    let mean_log_period = acc.mean_log_period()?;
    let mean_period = acc.mean_period()?;
    let mean_t = Fraction::from(&mean_period);
    verdicts.push(Verdict::from_bool(
        "mean_period_dominates_mean_log_period",
        mean_t.decimal >= mean_log_period,
        format!("E[T] = {} vs E[ln T] = {mean_log_period}", mean_t.decimal),
    ));

    let delta = (1..=b).map(|k| Ok((k, Fraction::from(&acc.delta_fraction(k)?)))).collect::<Result<_>>()?;
    let hat_delta = match ensemble {
        Ensemble::Rational { .. } => {
            Some((1..=b).map(|k| Ok((k, Fraction::from(&acc.hat_delta_fraction(k)?)))).collect::<Result<_>>()?)
        }
        _ => None,
    };
    let tv_distance = (1..=b).map(|k| Ok((k, joint_tv_distance(acc, k)?))).collect::<Result<_>>()?;
    let interval = match (acc.config().interval, ensemble.degree()) {
        (Some(_), Some(d)) => Some(interval_experiment(acc, d)?),
        _ => None,
    };
    let summary = CensusSummary {
        ensemble,
        count: acc.count(),
        mean_log_period,
        mean_period: mean_t,
        mean_cyclic_count: Fraction::from(&acc.mean_cyclic_count()?),
        delta,
        hat_delta,
        factorial_moments,
        tv_distance,
        interval,
        joint_histogram: acc
            .joint_histogram()
            .iter()
            .map(|(cell, &count)| HistogramRow { cell: cell.clone(), count })
            .collect(),
    };
    Ok((summary, verdicts))
}

/// Runs a census and reports it.
pub fn cmd_census(config: &RunConfig, workers: usize) -> Result<(RunReport, StatsAccumulator)> {
    let run = config.resolve()?;
    let census = run_census(&run, workers)?;
    let (summary, verdicts) = summarize(&run, &census.accumulator)?;
    let mut report = RunReport::new(Invocation::Census { config: run.config.clone() }, verdicts, census.chunks);
    report.census = Some(summary);
    Ok((report, census.accumulator))
}

/// Runs a census and compares it with the log-period lower bound: the
/// polynomial bound with cutoff ξ (default d/2), or the rational bound with
/// cutoff ζ (default d/4) together with the per-prime rational sandwiches.
pub fn cmd_bounds(config: &RunConfig, workers: usize) -> Result<(RunReport, StatsAccumulator)> {
    let run = config.resolve()?;
    let d = run.config.degree;
    let q = match &run.space {
        Some(space) => space.field().order(),
        None => return Err(Error::InvalidConfig("bounds need a polynomial or rational space".into())),
    };
    let mut bounds = match run.config.space {
        SpaceChoice::Rational => rational_log_period_bound(q, d, run.config.zeta.unwrap_or(d as f64 / 4.0))?,
        _ => log_period_bound(q, d, run.config.xi.unwrap_or(d as f64 / 2.0)),
    };
    let census = run_census(&run, workers)?;
    let acc = &census.accumulator;
    let (summary, _) = summarize(&run, acc)?;
    bounds.compare(acc)?;

    let mut verdicts = bounds.verdicts.clone();
    let mut bonferroni = Vec::new();
    let mut rational_sandwich = Vec::new();
    for &p in &bounds.primes {
        match run.config.space {
            SpaceChoice::Rational => {
                let check = rational_sandwich_check(q, d, p, acc.empirical_hat_edelta(p as usize)?, run.config.kappa);
                verdicts.push(check.verdict.clone());
                rational_sandwich.push(check);
            }
            // Only an exhaustive census gives the exact probability.
            _ if run.config.mode == Mode::Exhaustive => {
                let check = bonferroni_check(q, d, p, &acc.delta_fraction(p as usize)?);
                verdicts.push(check.verdict.clone());
                bonferroni.push(check);
            }
            _ => {}
        }
    }
    let mut report = RunReport::new(Invocation::Bounds { config: run.config.clone() }, verdicts, census.chunks);
    report.census = Some(summary);
    report.bounds = Some(BoundsSection { report: bounds, bonferroni, rational_sandwich });
    Ok((report, census.accumulator))
}

/// Runs one named verification suite at its built-in parameters.
pub fn cmd_verify(suite: &str, workers: usize) -> Result<RunReport> {
    let outcome = run_suite(suite, workers)?;
    let mut report = RunReport::new(Invocation::Verify { suite: suite.to_string() }, outcome.verdicts, Vec::new());
    report.suite = Some(outcome.details);
    Ok(report)
}

/// Re-runs an invocation. The accumulator is returned for census-backed runs.
pub fn run_invocation(invocation: &Invocation, workers: usize) -> Result<(RunReport, Option<StatsAccumulator>)> {
    match invocation {
        Invocation::Census { config } => cmd_census(config, workers).map(|(r, a)| (r, Some(a))),
        Invocation::Bounds { config } => cmd_bounds(config, workers).map(|(r, a)| (r, Some(a))),
        Invocation::Verify { suite } => cmd_verify(suite, workers).map(|r| (r, None)),
    }
}

/// Reads the invocation echoed in a report.
pub fn invocation_from_report(json: &str) -> Result<Invocation> {
    let value: serde_json::Value =
        serde_json::from_str(json).map_err(|e| Error::InvalidConfig(format!("report is not JSON: {e}")))?;
    let inv = value.get("invocation").ok_or_else(|| Error::InvalidConfig("report has no invocation".into()))?;
    serde_json::from_value(inv.clone()).map_err(|e| Error::InvalidConfig(format!("bad invocation: {e}")))
}
