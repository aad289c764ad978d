use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use serde_json::{json, Value};

use crate::dynamics::{
    cycle_decomposition, has_cycles, landau_max_order, ultimate_period_oracle, FunctionalGraph, IndicatorQuery,
};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::space::{
    count_extensions_oracle, count_monic_avoiding_roots, count_monic_avoiding_roots_oracle, extension_count_formula,
    PartialPermutation, SpaceDescriptor, DEFAULT_ENUMERATION_CAP,
};
use crate::stats::{bonferroni_check, factorial_moment_fraction, falling_factorial, Fraction, MomentSpec, Verdict};

use super::{chunk_rng, run_census, Mode, RunConfig};

pub const SUITES: &[&str] = &[
    "lemma1",
    "lemma2",
    "cardinalities",
    "period-oracle",
    "bonferroni",
    "factorial-moments",
    "observation1",
    "landau",
    "monic-avoiding",
];

// Fixed seed for the sampled parts of the suites.
const SUITE_SEED: u64 = 0x5eed;

pub struct SuiteOutcome {
    pub verdicts: Vec<Verdict>,
    pub details: Value,
}

pub fn run_suite(name: &str, workers: usize) -> Result<SuiteOutcome> {
    match name {
        "lemma1" => interpolation_counts(),
        "lemma2" => cycle_tuples(),
        "cardinalities" => cardinalities(),
        "period-oracle" => period_oracle(),
        "bonferroni" => bonferroni(workers),
        "factorial-moments" => factorial_moments(workers),
        "observation1" => sigma_uniformity(),
        "landau" => landau(),
        "monic-avoiding" => monic_avoiding(),
        _ => Err(Error::UnknownSuite { name: name.to_string(), known: SUITES.join(", ") }),
    }
}

/// Interpolation counts: for random partial permutations σ on A, the number
/// of f in Ω(q,d) agreeing with σ on A is q^(d-|A|)(q-1).
fn interpolation_counts() -> Result<SuiteOutcome> {
    const SAMPLES: usize = 50;
    let mut verdicts = Vec::new();
    let mut rows = Vec::new();
    let mut stream = 0;
    for q in [3u64, 5, 7] {
        let field = FieldSpec::prime(q)?;
        for d in 1..=3usize {
            let space = SpaceDescriptor::polynomials(field.clone(), d)?;
            for size in 1..=d {
                let want = extension_count_formula(q, d, size).expect("size ≤ d");
                let mut rng = chunk_rng(SUITE_SEED, stream);
                stream += 1;
                let mut mismatches = 0;
                for _ in 0..SAMPLES {
                    let sigma = PartialPermutation::random(&field, size, &mut rng)?;
                    let got = count_extensions_oracle(&space, &sigma, DEFAULT_ENUMERATION_CAP)?;
                    if BigUint::from(got) != want {
                        mismatches += 1;
                    }
                }
                verdicts.push(Verdict::from_bool(
                    format!("extension_count[q={q},d={d},|A|={size}]"),
                    mismatches == 0,
                    format!("{SAMPLES} samples, formula {want}, {mismatches} mismatches"),
                ));
                rows.push(json!({"q": q, "d": d, "support": size, "formula": want.to_string(), "samples": SAMPLES}));
            }
        }
    }
    Ok(SuiteOutcome { verdicts, details: json!({ "cases": rows }) })
}

/// k-cycles of g found by walking each vertex's orbit, independent of the
/// peeling decomposition. Each cycle starts at its smallest vertex.
fn cycles_by_walking(g: &FunctionalGraph) -> BTreeMap<usize, Vec<Vec<u32>>> {
    let n = g.domain_size();
    let mut out: BTreeMap<usize, Vec<Vec<u32>>> = BTreeMap::new();
    for v in 0..n as u32 {
        let mut orbit = vec![v];
        let mut w = g.successor(v);
        while w != v && orbit.len() <= n {
            orbit.push(w);
            w = g.successor(w);
        }
        if w == v && orbit.iter().all(|&u| u >= v) {
            out.entry(orbit.len()).or_default().push(orbit);
        }
    }
    out
}

fn ordered_disjoint_tuples(g: &FunctionalGraph, cycles: &[Vec<u32>], r: usize) -> Result<u128> {
    fn rec(
        g: &FunctionalGraph,
        cycles: &[Vec<u32>],
        r: usize,
        chosen: &mut Vec<usize>,
        count: &mut u128,
    ) -> Result<()> {
        if chosen.len() == r {
            let query = IndicatorQuery::new(chosen.iter().map(|&i| cycles[i].clone()).collect())?;
            if has_cycles(g, &query) {
                *count += 1;
            }
            return Ok(());
        }
        for i in 0..cycles.len() {
            let used: BTreeSet<u32> = chosen.iter().flat_map(|&j| cycles[j].iter().copied()).collect();
            if !chosen.contains(&i) && cycles[i].iter().all(|v| !used.contains(v)) {
                chosen.push(i);
                rec(g, cycles, r, chosen, count)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    let mut count = 0;
    rec(g, cycles, r, &mut Vec::new(), &mut count)?;
    Ok(count)
}

/// On random mappings: ordered r-tuples of disjoint k-cycles present in the
/// map number (c_k)_r, and T never exceeds Landau's function of Z.
fn cycle_tuples() -> Result<SuiteOutcome> {
    const N: usize = 12;
    const MAPS: usize = 10_000;
    let mut rng = chunk_rng(SUITE_SEED, 1 << 20);
    let landau: Vec<BigUint> = (1..=N).map(landau_max_order).collect::<Result<_>>()?;
    let mut tuple_mismatch = 0u64;
    let mut tuples_checked = 0u64;
    let mut landau_violations = 0u64;
    for _ in 0..MAPS {
        let g = FunctionalGraph::random_mapping(N, &mut rng)?;
        let cs = cycle_decomposition(&g);
        let walked = cycles_by_walking(&g);
        for k in 1..=N {
            let cycles = walked.get(&k).map(Vec::as_slice).unwrap_or(&[]);
            for r in 1..=3usize {
                let got = ordered_disjoint_tuples(&g, cycles, r)?;
                tuples_checked += 1;
                if got != falling_factorial(cs.count(k) as u64, r as u32) {
                    tuple_mismatch += 1;
                }
            }
        }
        if cs.period() > &landau[cs.cyclic_count() - 1] {
            landau_violations += 1;
        }
    }
    let verdicts = vec![
        Verdict::from_bool(
            "ordered_cycle_tuples_are_falling_factorials",
            tuple_mismatch == 0,
            format!("{tuples_checked} (map, k, r) cases, {tuple_mismatch} mismatches"),
        ),
        Verdict::from_bool(
            "period_at_most_landau",
            landau_violations == 0,
            format!("{MAPS} maps, {landau_violations} violations"),
        ),
        Verdict::from_bool("landau_5", landau[4] == BigUint::from(6u32), format!("g(5) = {}", landau[4])),
        Verdict::from_bool("landau_7", landau[6] == BigUint::from(12u32), format!("g(7) = {}", landau[6])),
    ];
    Ok(SuiteOutcome { verdicts, details: json!({ "n": N, "maps": MAPS, "max_r": 3 }) })
}

fn cardinalities() -> Result<SuiteOutcome> {
    let mut verdicts = Vec::new();
    let mut rows = Vec::new();
    for (p, k) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1)] {
        let field = FieldSpec::new(p, k, None)?;
        let q = field.order();
        for d in 1..=3usize {
            let space = SpaceDescriptor::polynomials(field.clone(), d)?;
            let counted = space.enumerate(DEFAULT_ENUMERATION_CAP)?.count() as u64;
            let formula = q.pow(d as u32) * (q - 1);
            verdicts.push(Verdict::from_bool(
                format!("polynomial_cardinality[q={q},d={d}]"),
                counted == formula && space.cardinality() == BigUint::from(formula),
                format!("enumerated {counted}, formula {formula}"),
            ));
            rows.push(json!({"space": "poly", "q": q, "d": d, "count": counted}));
        }
    }
    for (q, d) in [(3u64, 1usize), (3, 2), (5, 1), (5, 2)] {
        let space = SpaceDescriptor::rationals(FieldSpec::prime(q)?, d)?;
        let counted = space.enumerate(DEFAULT_ENUMERATION_CAP)?.count() as u64;
        let formula = q.pow(2 * d as u32 - 1) * (q - 1) * (q - 1);
        verdicts.push(Verdict::from_bool(
            format!("rational_cardinality[q={q},d={d}]"),
            counted == formula && space.cardinality() == BigUint::from(formula),
            format!("enumerated {counted}, formula {formula}"),
        ));
        rows.push(json!({"space": "rational", "q": q, "d": d, "count": counted}));
    }
    Ok(SuiteOutcome { verdicts, details: json!({ "cases": rows }) })
}

/// The ultimate period found by iterating the map agrees with the lcm of
/// cycle lengths on every map of a few small spaces.
fn period_oracle() -> Result<SuiteOutcome> {
    let mut verdicts = Vec::new();
    let spaces = [
        SpaceDescriptor::polynomials(FieldSpec::prime(5)?, 2)?,
        SpaceDescriptor::polynomials(FieldSpec::prime(3)?, 3)?,
        SpaceDescriptor::rationals(FieldSpec::prime(3)?, 1)?,
    ];
    for space in &spaces {
        let mut maps = 0u64;
        let mut mismatches = 0u64;
        for m in space.enumerate(DEFAULT_ENUMERATION_CAP)? {
            let g = FunctionalGraph::from_member(space.field(), &m);
            let t = ultimate_period_oracle(&g, 1 << 20)?;
            maps += 1;
            if BigUint::from(t) != *cycle_decomposition(&g).period() {
                mismatches += 1;
            }
        }
        verdicts.push(Verdict::from_bool(
            format!("ultimate_period[{:?},q={},d={}]", space.kind(), space.field().order(), space.degree()),
            mismatches == 0,
            format!("{maps} maps, {mismatches} mismatches"),
        ));
    }
    Ok(SuiteOutcome { verdicts, details: json!({}) })
}

/// S1 - S2 ≤ P(some p-cycle) ≤ S1 over whole polynomial spaces.
fn bonferroni(workers: usize) -> Result<SuiteOutcome> {
    let mut verdicts = Vec::new();
    let mut checks = Vec::new();
    for (q, d, primes) in [(5u64, 4usize, &[2u64][..]), (7, 4, &[2]), (7, 6, &[2, 3])] {
        let run = RunConfig::polynomial(q, d).resolve()?;
        let acc = run_census(&run, workers)?.accumulator;
        for &p in primes {
            let check = bonferroni_check(q, d, p, &acc.delta_fraction(p as usize)?);
            verdicts.push(check.verdict.clone());
            checks.push(check);
        }
    }
    Ok(SuiteOutcome { verdicts, details: json!({ "checks": checks }) })
}

/// Census factorial moments equal ((q)_m/q^m) prod k^(-r_k) exactly for
/// every spec with m ≤ d over cycle lengths up to 3.
fn factorial_moments(workers: usize) -> Result<SuiteOutcome> {
    let mut verdicts = Vec::new();
    let mut rows = Vec::new();
    for q in [5u64, 7] {
        for d in 2..=4usize {
            let config = RunConfig { truncation: 3, max_moment_weight: d, ..RunConfig::polynomial(q, d) };
            let run = config.resolve()?;
            debug_assert_eq!(run.config.mode, Mode::Exhaustive);
            let acc = run_census(&run, workers)?.accumulator;
            let mut bad = Vec::new();
            for spec in MomentSpec::all(3, d) {
                let got = acc.factorial_moment_fraction(&spec)?;
                let want = factorial_moment_fraction(q, &spec);
                if got != want {
                    bad.push(format!("{:?}: {got} vs {want}", spec.orders()));
                }
                rows.push(json!({"q": q, "d": d, "r": spec, "value": Fraction::from(&got)}));
            }
            let mean_c1 = acc.factorial_moment_fraction(&MomentSpec::new(vec![1]))?;
            verdicts.push(Verdict::from_bool(
                format!("factorial_moments[q={q},d={d}]"),
                bad.is_empty() && mean_c1 == num_rational::BigRational::from_integer(1.into()),
                if bad.is_empty() { format!("E[c_1] = {mean_c1}") } else { bad.join("; ") },
            ));
        }
    }
    Ok(SuiteOutcome { verdicts, details: json!({ "moments": rows }) })
}

/// Key for the permutation induced on a cyclic set: images listed in the
/// order of the sorted vertices.
fn sigma_key(cs: &crate::dynamics::CycleStructure) -> (Vec<u32>, Vec<u32>) {
    let sigma = cs.sigma();
    (sigma.keys().copied().collect(), sigma.values().copied().collect())
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// For uniform maps on 4 points every permutation of a given cyclic set is
/// equally likely; for affine maps over F_5 some permutation of the whole
/// field is never realized.
fn sigma_uniformity() -> Result<SuiteOutcome> {
    const N: usize = 4;
    let mut by_set: BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, u64>> = BTreeMap::new();
    for i in 0..(N as u64).pow(N as u32) {
        let (set, images) = sigma_key(&cycle_decomposition(&FunctionalGraph::mapping_at(N, i)));
        *by_set.entry(set).or_default().entry(images).or_insert(0) += 1;
    }
    let mut uniform = true;
    let mut rows = Vec::new();
    for (set, counts) in &by_set {
        let first = *counts.values().next().expect("nonempty");
        let ok = counts.len() as u64 == factorial(set.len()) && counts.values().all(|&c| c == first);
        uniform &= ok;
        rows.push(json!({"cyclic_set": set, "permutations": counts.len(), "count_each": first, "uniform": ok}));
    }

    let field = FieldSpec::prime(5)?;
    let space = SpaceDescriptor::polynomials(field.clone(), 1)?;
    let full: Vec<u32> = (0..5).collect();
    let mut realized = BTreeSet::new();
    for m in space.enumerate(DEFAULT_ENUMERATION_CAP)? {
        let (set, images) = sigma_key(&cycle_decomposition(&FunctionalGraph::from_member(&field, &m)));
        if set == full {
            realized.insert(images);
        }
    }
    let missing = factorial(5) - realized.len() as u64;
    let verdicts = vec![
        Verdict::from_bool(
            "random_mapping_sigma_uniform[n=4]",
            uniform && by_set.len() == (1 << N) - 1,
            format!("{} cyclic sets", by_set.len()),
        ),
        Verdict::from_bool(
            "affine_maps_miss_permutations[q=5]",
            missing > 0,
            format!("{} of 120 permutations of F_5 realized", realized.len()),
        ),
    ];
    Ok(SuiteOutcome { verdicts, details: json!({ "sets": rows, "affine_realized": realized.len() }) })
}

/// Landau's function against a brute-force maximum over partitions.
fn landau() -> Result<SuiteOutcome> {
    fn best(m: u64, min_part: u64, lcm: &BigUint) -> BigUint {
        let mut out = lcm.clone();
        for part in min_part..=m {
            let next = lcm.lcm(&BigUint::from(part));
            out = out.max(best(m - part, part, &next));
        }
        out
    }
    let mut mismatches = Vec::new();
    for m in 1..=30u64 {
        let want = best(m, 1, &BigUint::from(1u32));
        let got = landau_max_order(m as usize)?;
        if got != want {
            mismatches.push(format!("g({m}) = {got}, brute force {want}"));
        }
    }
    let g5 = landau_max_order(5)?;
    let g7 = landau_max_order(7)?;
    let verdicts = vec![
        Verdict::from_bool("landau_matches_partitions[m<=30]", mismatches.is_empty(), mismatches.join("; ")),
        Verdict::from_bool("landau_5", g5 == BigUint::from(6u32), format!("g(5) = {g5}")),
        Verdict::from_bool("landau_7", g7 == BigUint::from(12u32), format!("g(7) = {g7}")),
    ];
    Ok(SuiteOutcome { verdicts, details: json!({ "g5": g5.to_string(), "g7": g7.to_string() }) })
}

/// Monic polynomials with no root in A: closed form against enumeration,
/// over every subset A of the field.
fn monic_avoiding() -> Result<SuiteOutcome> {
    let mut verdicts = Vec::new();
    for (p, k) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1)] {
        let field = FieldSpec::new(p, k, None)?;
        let q = field.order();
        let elems: Vec<FieldElement> = field.elements().collect();
        for d in 1..=3usize {
            let mut mismatches = 0;
            for mask in 0u32..(1 << q) {
                let roots: Vec<FieldElement> =
                    elems.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
                let oracle = count_monic_avoiding_roots_oracle(&field, d, &roots, DEFAULT_ENUMERATION_CAP)?;
                if count_monic_avoiding_roots(q, d, &roots) != BigUint::from(oracle) {
                    mismatches += 1;
                }
            }
            verdicts.push(Verdict::from_bool(
                format!("monic_avoiding[q={q},d={d}]"),
                mismatches == 0,
                format!("{} subsets, {mismatches} mismatches", 1u32 << q),
            ));
        }
    }
    Ok(SuiteOutcome { verdicts, details: json!({}) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_lists_names() {
        match run_suite("nope", 1) {
            Err(Error::UnknownSuite { known, .. }) => assert!(known.contains("landau")),
            other => panic!("{:?}", other.map(|o| o.verdicts)),
        }
    }

    #[test]
    fn walked_cycles_match_peeling() {
        let mut rng = chunk_rng(1, 0);
        for _ in 0..500 {
            let g = FunctionalGraph::random_mapping(9, &mut rng).unwrap();
            let cs = cycle_decomposition(&g);
            let walked: Vec<Vec<u32>> = cycles_by_walking(&g).into_values().flatten().collect();
            let mut a = walked.clone();
            a.sort();
            let mut b = cs.cycles().to_vec();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn quick_suites_pass() {
        for name in ["cardinalities", "observation1", "landau", "period-oracle", "monic-avoiding"] {
            let out = run_suite(name, 2).unwrap();
            assert!(out.verdicts.iter().all(|v| !v.failed()), "{name}: {:?}", out.verdicts);
        }
    }
}
