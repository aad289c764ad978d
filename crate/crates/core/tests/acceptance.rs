//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use polyperiod_core::harness::{cmd_bounds, cmd_census, run_suite, RunConfig};
use polyperiod_core::stats::Verdict;

const SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8)
}

fn all_pass(verdicts: &[Verdict]) -> Outcome {
    let failed: Vec<&Verdict> = verdicts.iter().filter(|v| v.failed()).collect();
    Outcome {
        ok: failed.is_empty() && !verdicts.is_empty(),
        detail: if failed.is_empty() {
            format!("{} checks", verdicts.len())
        } else {
            failed.iter().map(|v| format!("{}: {}", v.check, v.detail)).collect::<Vec<_>>().join("; ")
        },
    }
}

fn suite(name: &str) -> Result<Outcome, String> {
    let out = run_suite(name, workers()).map_err(|e| e.to_string())?;
    Ok(all_pass(&out.verdicts))
}

fn interpolation_counts() -> Result<Outcome, String> {
    suite("lemma1")
}

fn cardinalities() -> Result<Outcome, String> {
    suite("cardinalities")
}

fn period_equivalence() -> Result<Outcome, String> {
    suite("period-oracle")
}

fn factorial_moments() -> Result<Outcome, String> {
    suite("factorial-moments")
}

fn bonferroni() -> Result<Outcome, String> {
    suite("bonferroni")
}

fn log_period_bound() -> Result<Outcome, String> {
    let config = RunConfig { xi: Some(2.0), ..RunConfig::polynomial(7, 4) };
    let (report, _) = cmd_bounds(&config, workers()).map_err(|e| e.to_string())?;
    let bounds = report.bounds.expect("bounds section");
    let ln2 = 2f64.ln();
    let by_hand = ln2 / 2.0 * (6.0 / 7.0) - ln2 / 8.0 * (6.0 / 7.0) * (5.0 / 7.0) * (4.0 / 7.0);
    let mean = bounds.report.empirical_mean_log_period.expect("census ran");
    let ok = (bounds.report.rhs - by_hand).abs() < 1e-12 && mean > bounds.report.rhs;
    Ok(Outcome { ok, detail: format!("E[ln T] = {mean:.6} > {:.6}", bounds.report.rhs) })
}

fn poisson_trend() -> Result<Outcome, String> {
    let mut tv = Vec::new();
    for q in [5u64, 7, 11, 13] {
        let config = RunConfig { truncation: 3, ..RunConfig::polynomial(q, 4) }.sampled(100_000, SEED);
        let (report, _) = cmd_census(&config, workers()).map_err(|e| e.to_string())?;
        tv.push(report.census.expect("census").tv_distance[&3]);
    }
    let ok = tv.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = tv.iter().map(|t| format!("{t:.5}")).collect();
    Ok(Outcome { ok, detail: format!("TV over q = 5, 7, 11, 13: {}", shown.join(", ")) })
}

fn sigma_uniformity() -> Result<Outcome, String> {
    suite("observation1")
}

fn cycle_tuples_and_landau() -> Result<Outcome, String> {
    suite("lemma2")
}

fn rational_bounds() -> Result<Outcome, String> {
    let config = RunConfig::rational(11, 8).sampled(100_000, SEED);
    let (report, _) = cmd_bounds(&config, workers()).map_err(|e| e.to_string())?;
    let bounds = report.bounds.as_ref().expect("bounds section");
    let mut out = all_pass(&report.verdicts);
    out.ok &= !bounds.rational_sandwich.is_empty();
    let sandwich: Vec<String> =
        bounds.rational_sandwich.iter().map(|c| format!("p={} slack {:.4}", c.p, c.slack)).collect();
    out.detail = format!(
        "{}; E[ln T] = {:.4} vs {:.4}; {}",
        out.detail,
        bounds.report.empirical_mean_log_period.unwrap_or(f64::NAN),
        bounds.report.rhs,
        sandwich.join(", ")
    );
    Ok(out)
}

fn determinism() -> Result<Outcome, String> {
    let configs = [
        RunConfig::polynomial(7, 4),
        RunConfig::rational(5, 2),
        RunConfig::polynomial(11, 4).sampled(200_000, SEED),
        RunConfig::rational(7, 3).sampled(150_000, SEED),
        RunConfig::mapping(9).sampled(140_000, SEED),
    ];
    let mut runs = 0;
    for config in &configs {
        let reference = cmd_census(config, 1).map_err(|e| e.to_string())?.0.to_json();
        for w in [2, 3, 8] {
            runs += 1;
            if cmd_census(config, w).map_err(|e| e.to_string())?.0.to_json() != reference {
                return Ok(Outcome { ok: false, detail: format!("{config:?} differs at {w} workers") });
            }
        }
    }
    Ok(Outcome { ok: true, detail: format!("{} configs, {runs} reruns byte-identical", configs.len()) })
}

type Criterion = (&'static str, fn() -> Result<Outcome, String>, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1 interpolation counts", interpolation_counts, Some(Duration::from_secs(30))),
        ("2 cardinalities", cardinalities, Some(Duration::from_secs(60))),
        ("3 period equivalence", period_equivalence, Some(Duration::from_secs(60))),
        ("4 exact factorial moments", factorial_moments, Some(Duration::from_secs(300))),
        ("5 Bonferroni sandwich", bonferroni, Some(Duration::from_secs(120))),
        ("6 polynomial log-period bound", log_period_bound, Some(Duration::from_secs(120))),
        ("7 Poisson trend", poisson_trend, Some(Duration::from_secs(300))),
        ("8 conditional permutation uniformity", sigma_uniformity, Some(Duration::from_secs(10))),
        ("9 cycle tuples and Landau bound", cycle_tuples_and_landau, Some(Duration::from_secs(60))),
        ("10 rational sandwich and log-period bound", rational_bounds, Some(Duration::from_secs(600))),
        ("11 determinism", determinism, None),
    ];
    let mut failures = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = limit.map_or(true, |l| elapsed <= l);
        let pass = ok && in_time;
        if !pass {
            failures += 1;
        }
        let timing = match limit {
            Some(l) if !in_time => format!("{:.1}s, over the {}s limit", elapsed.as_secs_f64(), l.as_secs()),
            _ => format!("{:.1}s", elapsed.as_secs_f64()),
        };
        println!("{} criterion {name}: {detail} [{timing}]", if pass { "PASS" } else { "FAIL" });
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
