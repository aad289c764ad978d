use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dynamics::CycleStructure;
use crate::error::{Error, Result};
use crate::space::{SpaceDescriptor, SpaceKind};

use super::formulas::{falling_factorial, to_f64, MomentSpec};

/// The family of maps a census ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ensemble {
    Polynomial { q: u64, d: usize },
    Rational { q: u64, d: usize },
    RandomMapping { n: usize },
}

impl Ensemble {
    pub fn of_space(space: &SpaceDescriptor) -> Self {
        let q = space.field().order();
        let d = space.degree();
        match space.kind() {
            SpaceKind::Polynomial => Ensemble::Polynomial { q, d },
            SpaceKind::Rational => Ensemble::Rational { q, d },
        }
    }

    /// Size of the finite part of the domain.
    pub fn points(&self) -> u64 {
        match *self {
            Ensemble::Polynomial { q, .. } | Ensemble::Rational { q, .. } => q,
            Ensemble::RandomMapping { n } => n as u64,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match *self {
            Ensemble::Polynomial { d, .. } | Ensemble::Rational { d, .. } => Some(d),
            Ensemble::RandomMapping { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccumulatorConfig {
    /// b: cycle lengths 1..=b enter the joint histogram and factorial moments.
    pub truncation: usize,
    /// M: histogram entries are clipped at M, which then means "M or more".
    pub clip: u32,
    /// Factorial moments are tracked for every spec of weight up to this.
    pub max_moment_weight: usize,
    /// Closed range of cycle lengths counted by N.
    pub interval: Option<(usize, usize)>,
}

impl Default for AccumulatorConfig {
    fn default() -> Self {
        AccumulatorConfig { truncation: 5, clip: 8, max_moment_weight: 4, interval: None }
    }
}

impl AccumulatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.truncation == 0 {
            return Err(Error::InvalidConfig("truncation b must be at least 1".into()));
        }
        if self.clip == 0 {
            return Err(Error::InvalidConfig("clip M must be at least 1".into()));
        }
        Ok(())
    }
}

/// Running census over a set of maps. Every field is a sum, so two
/// accumulators over disjoint sets merge exactly and in any order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatsAccumulator {
    ensemble: Ensemble,
    config: AccumulatorConfig,
    specs: Vec<MomentSpec>,
    count: u64,
    log_period_exponents: BTreeMap<u64, u64>,
    sum_period: BigUint,
    sum_cyclic: u64,
    joint_hist: BTreeMap<Vec<u32>, u64>,
    delta_hits: BTreeMap<usize, u64>,
    hat_delta_hits: BTreeMap<usize, u64>,
    interval_miss: u64,
    interval_sum: u64,
    interval_sum_sq: u128,
    factorial_sums: BTreeMap<MomentSpec, u128>,
}

impl StatsAccumulator {
    pub fn new(ensemble: Ensemble, config: AccumulatorConfig) -> Result<Self> {
        config.validate()?;
        let specs = MomentSpec::all(config.truncation, config.max_moment_weight);
        let factorial_sums = specs.iter().map(|s| (s.clone(), 0u128)).collect();
        Ok(StatsAccumulator {
            ensemble,
            config,
            specs,
            count: 0,
            log_period_exponents: BTreeMap::new(),
            sum_period: BigUint::zero(),
            sum_cyclic: 0,
            joint_hist: BTreeMap::new(),
            delta_hits: BTreeMap::new(),
            hat_delta_hits: BTreeMap::new(),
            interval_miss: 0,
            interval_sum: 0,
            interval_sum_sq: 0,
            factorial_sums,
        })
    }

    pub fn ensemble(&self) -> Ensemble {
        self.ensemble
    }

    pub fn config(&self) -> &AccumulatorConfig {
        &self.config
    }

    pub fn absorb(&mut self, cs: &CycleStructure) {
        self.count += 1;
        for (&p, &e) in cs.period_factors() {
            *self.log_period_exponents.entry(p).or_insert(0) += u64::from(e);
        }
        self.sum_period += cs.period();
        self.sum_cyclic += cs.cyclic_count() as u64;

        let b = self.config.truncation;
        let key: Vec<u32> = (1..=b).map(|k| (cs.count(k) as u32).min(self.config.clip)).collect();
        *self.joint_hist.entry(key).or_insert(0) += 1;

        for &k in cs.multiplicities().keys() {
            *self.delta_hits.entry(k).or_insert(0) += 1;
            if cs.count_avoiding_infinity(k) > 0 {
                *self.hat_delta_hits.entry(k).or_insert(0) += 1;
            }
        }

        if let Some((lo, hi)) = self.config.interval {
            let n: u64 = if lo <= hi { cs.multiplicities().range(lo..=hi).map(|(_, &c)| c as u64).sum() } else { 0 };
            if n == 0 {
                self.interval_miss += 1;
            }
            self.interval_sum += n;
            self.interval_sum_sq += u128::from(n) * u128::from(n);
        }

        for spec in &self.specs {
            let term: u128 =
                spec.orders().iter().enumerate().map(|(i, &r)| falling_factorial(cs.count(i + 1) as u64, r)).product();
            if term != 0 {
                *self.factorial_sums.get_mut(spec).expect("spec tracked") += term;
            }
        }
    }

    pub fn merge(&mut self, other: &StatsAccumulator) -> Result<()> {
        if self.ensemble != other.ensemble || self.config != other.config {
            return Err(Error::IncompatibleMerge);
        }
        self.count += other.count;
        for (&p, &e) in &other.log_period_exponents {
            *self.log_period_exponents.entry(p).or_insert(0) += e;
        }
        self.sum_period += &other.sum_period;
        self.sum_cyclic += other.sum_cyclic;
        for (k, &v) in &other.joint_hist {
            *self.joint_hist.entry(k.clone()).or_insert(0) += v;
        }
        for (&k, &v) in &other.delta_hits {
            *self.delta_hits.entry(k).or_insert(0) += v;
        }
        for (&k, &v) in &other.hat_delta_hits {
            *self.hat_delta_hits.entry(k).or_insert(0) += v;
        }
        self.interval_miss += other.interval_miss;
        self.interval_sum += other.interval_sum;
        self.interval_sum_sq += other.interval_sum_sq;
        for (spec, &v) in &other.factorial_sums {
            *self.factorial_sums.get_mut(spec).expect("same config, same specs") += v;
        }
        Ok(())
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    fn per_map(&self, total: BigInt) -> Result<BigRational> {
        if self.count == 0 {
            return Err(Error::InvalidQuery("accumulator is empty".into()));
        }
        Ok(BigRational::new(total, BigInt::from(self.count)))
    }

    /// Σ ln T over all absorbed maps, as (prime, total exponent) pairs.
    pub fn log_period_exponents(&self) -> &BTreeMap<u64, u64> {
        &self.log_period_exponents
    }

    pub fn sum_log_period(&self) -> f64 {
        self.log_period_exponents.iter().map(|(&p, &e)| e as f64 * (p as f64).ln()).sum()
    }

    pub fn mean_log_period(&self) -> Result<f64> {
        if self.count == 0 {
            return Err(Error::InvalidQuery("accumulator is empty".into()));
        }
        Ok(self.sum_log_period() / self.count as f64)
    }

    pub fn sum_period(&self) -> &BigUint {
        &self.sum_period
    }

    pub fn mean_period(&self) -> Result<BigRational> {
        self.per_map(BigInt::from(self.sum_period.clone()))
    }

    pub fn mean_cyclic_count(&self) -> Result<BigRational> {
        self.per_map(BigInt::from(self.sum_cyclic))
    }

    /// Clipped (c_1, ..., c_b) vectors and how many maps produced each.
    pub fn joint_histogram(&self) -> &BTreeMap<Vec<u32>, u64> {
        &self.joint_hist
    }

    /// Number of maps with at least one k-cycle.
    pub fn delta_hits(&self, k: usize) -> u64 {
        self.delta_hits.get(&k).copied().unwrap_or(0)
    }

    /// Number of maps with at least one k-cycle avoiding ∞.
    pub fn hat_delta_hits(&self, k: usize) -> u64 {
        self.hat_delta_hits.get(&k).copied().unwrap_or(0)
    }

    pub fn delta_fraction(&self, k: usize) -> Result<BigRational> {
        self.per_map(BigInt::from(self.delta_hits(k)))
    }

    pub fn hat_delta_fraction(&self, k: usize) -> Result<BigRational> {
        self.per_map(BigInt::from(self.hat_delta_hits(k)))
    }

    /// Share of maps with a k-cycle.
    pub fn empirical_edelta(&self, k: usize) -> Result<f64> {
        self.delta_fraction(k).map(|r| to_f64(&r))
    }

    /// Share of maps with a k-cycle that does not pass through ∞.
    pub fn empirical_hat_edelta(&self, k: usize) -> Result<f64> {
        self.hat_delta_fraction(k).map(|r| to_f64(&r))
    }

    pub fn factorial_sum(&self, spec: &MomentSpec) -> Result<u128> {
        self.factorial_sums.get(spec).copied().ok_or_else(|| Error::UntrackedMoment(spec.orders().to_vec()))
    }

    pub fn factorial_moment_fraction(&self, spec: &MomentSpec) -> Result<BigRational> {
        let s = self.factorial_sum(spec)?;
        self.per_map(BigInt::from(s))
    }

    pub fn factorial_moment_empirical(&self, spec: &MomentSpec) -> Result<f64> {
        self.factorial_moment_fraction(spec).map(|r| to_f64(&r))
    }

    pub fn tracked_moments(&self) -> &[MomentSpec] {
        &self.specs
    }

    pub fn interval_miss(&self) -> u64 {
        self.interval_miss
    }

    /// (Σ N, Σ N²) over absorbed maps, when an interval is configured.
    pub fn interval_sums(&self) -> Option<(u64, u128)> {
        self.config.interval.map(|_| (self.interval_sum, self.interval_sum_sq))
    }
}
