use std::collections::BTreeMap;
use std::io::Write;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::primes_up_to_real;

use super::accumulator::{Ensemble, StatsAccumulator};
use super::formulas::{falling_ratio_f64, mertens_sum, poisson_cell_probability, s1_fraction, s2_fraction};
use super::{Fraction, Status, Verdict};

/// Width of the window, in units of 1/q, allowed around the rational sandwich.
pub const DEFAULT_KAPPA: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BonferroniCheck {
    pub q: u64,
    pub d: usize,
    pub p: u64,
    pub s1: Fraction,
    pub s2: Fraction,
    pub lower: Fraction,
    pub empirical: Fraction,
    pub verdict: Verdict,
}

/// Checks S1 - S2 ≤ P(some p-cycle) ≤ S1 with every side an exact fraction.
/// Needs d ≥ 2p so that two disjoint p-cycles still fix at most d values.
pub fn bonferroni_check(q: u64, d: usize, p: u64, empirical: &BigRational) -> BonferroniCheck {
    let s1 = s1_fraction(q, p);
    let s2 = s2_fraction(q, p);
    let lower = &s1 - &s2;
    let name = format!("bonferroni_sandwich[q={q},d={d},p={p}]");
    let verdict = if (d as u64) < 2 * p {
        Verdict::new(name, Status::NotApplicable, format!("needs d >= 2p = {}", 2 * p))
    } else {
        let ok = &lower <= empirical && empirical <= &s1;
        Verdict::from_bool(name, ok, format!("{lower} <= {empirical} <= {s1}"))
    };
    BonferroniCheck {
        q,
        d,
        p,
        s1: Fraction::from(&s1),
        s2: Fraction::from(&s2),
        lower: Fraction::from(&lower),
        empirical: Fraction::from(empirical),
        verdict,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalSandwichCheck {
    pub q: u64,
    pub d: usize,
    pub p: u64,
    pub s1: f64,
    pub s2: f64,
    pub kappa: f64,
    /// 1/q, the size of the unspecified error terms.
    pub error_scale: f64,
    pub empirical: f64,
    /// Distance from the empirical value to the nearer edge of [s1 - s2, s1];
    /// negative when it falls outside.
    pub slack: f64,
    pub verdict: Verdict,
}

/// Main-term sandwich for rational maps, counting only cycles that avoid ∞,
/// widened by kappa/q on both sides. Needs d ≥ 4p.
pub fn rational_sandwich_check(q: u64, d: usize, p: u64, empirical: f64, kappa: f64) -> RationalSandwichCheck {
    let s1 = falling_ratio_f64(q, p as usize) / p as f64;
    let s2 = falling_ratio_f64(q, 2 * p as usize) / (2 * p * p) as f64;
    let error_scale = 1.0 / q as f64;
    let slack = (empirical - (s1 - s2)).min(s1 - empirical);
    let name = format!("rational_sandwich[q={q},d={d},p={p}]");
    let verdict = if (d as u64) < 4 * p {
        Verdict::new(name, Status::NotApplicable, format!("needs d >= 4p = {}", 4 * p))
    } else {
        let w = kappa * error_scale;
        let ok = s1 - s2 - w <= empirical && empirical <= s1 + w;
        Verdict::from_bool(name, ok, format!("{} <= {empirical} <= {} (kappa={kappa})", s1 - s2 - w, s1 + w))
    };
    RationalSandwichCheck { q, d, p, s1, s2, kappa, error_scale, empirical, slack, verdict }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Polynomial,
    Rational,
}

/// Lower bound on E[ln T] from the first two Bonferroni sums at each prime
/// p up to a cutoff, optionally compared against a census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub q: u64,
    pub d: usize,
    pub cutoff: f64,
    /// Whether d is large enough for the two-cycle estimate at every prime.
    pub valid: bool,
    pub primes: Vec<u64>,
    pub s1_terms: BTreeMap<u64, f64>,
    pub s2_terms: BTreeMap<u64, f64>,
    pub main_sum: f64,
    pub correction_sum: f64,
    pub rhs: f64,
    /// Σ ln p / q over the primes: scale of the dropped error terms for rational maps.
    pub error_scale: Option<f64>,
    pub mertens_sum: f64,
    pub empirical_mean_log_period: Option<f64>,
    pub empirical_edelta: BTreeMap<u64, f64>,
    pub verdicts: Vec<Verdict>,
}

fn assemble(kind: BoundKind, q: u64, d: usize, cutoff: f64, valid: bool) -> BoundReport {
    let primes = primes_up_to_real(cutoff);
    let mut s1_terms = BTreeMap::new();
    let mut s2_terms = BTreeMap::new();
    let mut main_sum = 0.0;
    let mut correction_sum = 0.0;
    for &p in &primes {
        let s1 = falling_ratio_f64(q, p as usize) / p as f64;
        let s2 = falling_ratio_f64(q, 2 * p as usize) / (2 * p * p) as f64;
        let lp = (p as f64).ln();
        main_sum += s1 * lp;
        correction_sum += s2 * lp;
        s1_terms.insert(p, s1);
        s2_terms.insert(p, s2);
    }
    let error_scale = match kind {
        BoundKind::Polynomial => None,
        BoundKind::Rational => Some(primes.iter().map(|&p| (p as f64).ln()).sum::<f64>() / q as f64),
    };
    BoundReport {
        kind,
        q,
        d,
        cutoff,
        valid,
        primes,
        s1_terms,
        s2_terms,
        main_sum,
        correction_sum,
        rhs: main_sum - correction_sum,
        error_scale,
        mertens_sum: mertens_sum(cutoff),
        empirical_mean_log_period: None,
        empirical_edelta: BTreeMap::new(),
        verdicts: Vec::new(),
    }
}

/// Polynomial maps: Σ_{p≤ξ} S1(p) ln p − Σ_{p≤ξ} S2(p) ln p, valid when d ≥ 2ξ.
pub fn log_period_bound(q: u64, d: usize, xi: f64) -> BoundReport {
    assemble(BoundKind::Polynomial, q, d, xi, d as f64 >= 2.0 * xi)
}

/// Rational maps: the same main terms over p ≤ ζ, valid when d ≥ 4ζ.
pub fn rational_log_period_bound(q: u64, d: usize, zeta: f64) -> Result<BoundReport> {
    if d < 4 {
        return Err(Error::OutOfRange(format!("rational bound needs d >= 4, got {d}")));
    }
    Ok(assemble(BoundKind::Rational, q, d, zeta, d as f64 >= 4.0 * zeta))
}

impl BoundReport {
    /// Fills in the census side and the verdicts.
    pub fn compare(&mut self, acc: &StatsAccumulator) -> Result<()> {
        let mean = acc.mean_log_period()?;
        self.empirical_mean_log_period = Some(mean);
        self.empirical_edelta = self
            .primes
            .iter()
            .map(|&p| {
                let v = match self.kind {
                    BoundKind::Polynomial => acc.empirical_edelta(p as usize),
                    BoundKind::Rational => acc.empirical_hat_edelta(p as usize),
                };
                v.map(|v| (p, v))
            })
            .collect::<Result<_>>()?;

        let name = match self.kind {
            BoundKind::Polynomial => "log_period_lower_bound",
            BoundKind::Rational => "rational_log_period_lower_bound",
        };
        let name = format!("{name}[q={},d={},cutoff={}]", self.q, self.d, self.cutoff);
        let detail = format!("E[ln T] = {mean} vs {}", self.rhs);
        self.verdicts.push(if self.primes.is_empty() {
            Verdict::new(name, Status::Vacuous, detail)
        } else if !self.valid {
            Verdict::new(name, Status::NotApplicable, detail)
        } else {
            Verdict::from_bool(name, mean > self.rhs, detail)
        });

        let mean_t = super::formulas::to_f64(&acc.mean_period()?);
        self.verdicts.push(Verdict::from_bool(
            "mean_period_dominates_mean_log_period",
            mean_t >= mean,
            format!("E[T] = {mean_t} vs E[ln T] = {mean}"),
        ));
        Ok(())
    }
}

/// J = [⌈β⌉, ⌊β²⌋] with β = sqrt(d/2), in integer arithmetic. Empty (lo > hi)
/// for some small d.
pub fn interval_bounds(d: usize) -> (usize, usize) {
    let mut lo = 0;
    while 2 * lo * lo < d {
        lo += 1;
    }
    (lo, d / 2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalExperiment {
    pub d: usize,
    pub beta: f64,
    pub lo: usize,
    pub hi: usize,
    pub miss_fraction: f64,
    pub mu_hat: f64,
    pub var_hat: f64,
    /// ln β, the leading-order prediction for E[N].
    pub predicted_mu: f64,
    /// Σ_{k∈J} (q)_k / (q^k k), exact for polynomial maps with d ≥ max J and
    /// for random mappings.
    pub exact_mu: Option<f64>,
}

/// Statistics of N, the number of cycles with length in J. The accumulator
/// must have been configured with `interval_bounds(d)`.
pub fn interval_experiment(acc: &StatsAccumulator, d: usize) -> Result<IntervalExperiment> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("interval experiment needs d >= 2, got {d}")));
    }
    let (lo, hi) = interval_bounds(d);
    if acc.config().interval != Some((lo, hi)) {
        return Err(Error::InvalidQuery(format!(
            "accumulator tracks interval {:?}, expected {:?}",
            acc.config().interval,
            (lo, hi)
        )));
    }
    if acc.count() == 0 {
        return Err(Error::InvalidQuery("accumulator is empty".into()));
    }
    let (sum, sum_sq) = acc.interval_sums().expect("interval configured");
    let n = acc.count() as f64;
    let mu_hat = sum as f64 / n;
    let var_hat = (sum_sq as f64 / n - mu_hat * mu_hat).max(0.0);
    let beta = (d as f64 / 2.0).sqrt();
    let exact_mu = match acc.ensemble() {
        Ensemble::Polynomial { q, .. } => Some(q),
        Ensemble::RandomMapping { n } => Some(n as u64),
        Ensemble::Rational { .. } => None,
    }
    .map(|q| (lo..=hi).map(|k| falling_ratio_f64(q, k) / k as f64).sum());
    Ok(IntervalExperiment {
        d,
        beta,
        lo,
        hi,
        miss_fraction: acc.interval_miss() as f64 / n,
        mu_hat,
        var_hat,
        predicted_mu: beta.ln(),
        exact_mu,
    })
}

fn marginal_histogram(acc: &StatsAccumulator, b: usize) -> Result<BTreeMap<Vec<u32>, u64>> {
    if b == 0 || b > acc.config().truncation {
        return Err(Error::OutOfRange(format!("b must lie in 1..={}, got {b}", acc.config().truncation)));
    }
    let mut out = BTreeMap::new();
    for (cell, &count) in acc.joint_histogram() {
        *out.entry(cell[..b].to_vec()).or_insert(0) += count;
    }
    Ok(out)
}

/// Total-variation distance between the census law of (c_1, ..., c_b) and
/// independent Poisson(1/k). Clipped cells are compared with Poisson tail
/// mass; cells the census never hit contribute their whole Poisson mass.
pub fn joint_tv_distance(acc: &StatsAccumulator, b: usize) -> Result<f64> {
    if acc.count() == 0 {
        return Err(Error::InvalidQuery("accumulator is empty".into()));
    }
    let hist = marginal_histogram(acc, b)?;
    let clip = acc.config().clip;
    let n = acc.count() as f64;
    let mut diff = 0.0;
    let mut covered = 0.0;
    for (cell, &count) in &hist {
        let pois = poisson_cell_probability(cell, clip);
        diff += (count as f64 / n - pois).abs();
        covered += pois;
    }
    Ok((0.5 * (diff + (1.0 - covered).max(0.0))).clamp(0.0, 1.0))
}

/// Writes the joint histogram as CSV with columns m_1..m_b, count, poisson_pmf.
/// A value equal to the clip stands for "clip or more", and its Poisson
/// column holds the matching tail mass.
pub fn write_histogram_csv<W: Write>(acc: &StatsAccumulator, out: W) -> Result<()> {
    let b = acc.config().truncation;
    let clip = acc.config().clip;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=b).map(|k| format!("m_{k}")).collect();
    header.push("count".into());
    header.push("poisson_pmf".into());
    w.write_record(&header)?;
    for (cell, count) in acc.joint_histogram() {
        let mut row: Vec<String> = cell.iter().map(|m| m.to_string()).collect();
        row.push(count.to_string());
        row.push(format!("{:e}", poisson_cell_probability(cell, clip)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
