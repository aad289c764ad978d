//! Functional graphs of self-maps of a finite set and their cycle structure.
//!
//! Vertices are `0..n`. A polynomial over F_q gives a graph on the q field
//! elements (vertex = element index). A rational map gives a graph on
//! q + 1 vertices where vertex q stands for ∞.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::DensePolynomial;
use crate::primes::{factorize, primes_up_to};
use crate::space::{ExtendedPoint, RationalMap, SpaceMember};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionalGraph {
    successor: Vec<u32>,
    has_infinity: bool,
}

impl FunctionalGraph {
    pub fn from_successors(successor: Vec<u32>) -> Result<Self> {
        let n = successor.len();
        if n == 0 {
            return Err(Error::OutOfRange("a functional graph needs at least one vertex".into()));
        }
        if let Some(&v) = successor.iter().find(|&&v| v as usize >= n) {
            return Err(Error::OutOfRange(format!("successor {v} outside 0..{n}")));
        }
        Ok(FunctionalGraph { successor, has_infinity: false })
    }

    pub fn from_polynomial(field: &FieldSpec, f: &DensePolynomial) -> Self {
        FunctionalGraph { successor: field.elements().map(|x| f.eval(field, x).0).collect(), has_infinity: false }
    }

    pub fn from_rational(field: &FieldSpec, r: &RationalMap) -> Self {
        let inf = field.order() as u32;
        let encode = |y: ExtendedPoint| match y {
            ExtendedPoint::Finite(e) => e.0,
            ExtendedPoint::Infinity => inf,
        };
        let mut successor: Vec<u32> =
            field.elements().map(|x| encode(r.eval(field, ExtendedPoint::Finite(x)))).collect();
        successor.push(encode(r.eval(field, ExtendedPoint::Infinity)));
        FunctionalGraph { successor, has_infinity: true }
    }

    pub fn from_member(field: &FieldSpec, m: &SpaceMember) -> Self {
        match m {
            SpaceMember::Polynomial(f) => Self::from_polynomial(field, f),
            SpaceMember::Rational(r) => Self::from_rational(field, r),
        }
    }

    /// A uniformly random map on n vertices.
    pub fn random_mapping<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("random mappings need n ≥ 1".into()));
        }
        let successor = (0..n).map(|_| rng.random_range(0..n as u32)).collect();
        Ok(FunctionalGraph { successor, has_infinity: false })
    }

    /// Map number `index` among all n^n maps on n vertices, vertex 0's image
    /// varying fastest.
    pub fn mapping_at(n: usize, mut index: u64) -> Self {
        let successor = (0..n)
            .map(|_| {
                let v = (index % n as u64) as u32;
                index /= n as u64;
                v
            })
            .collect();
        FunctionalGraph { successor, has_infinity: false }
    }

    pub fn domain_size(&self) -> usize {
        self.successor.len()
    }

    pub fn successors(&self) -> &[u32] {
        &self.successor
    }

    pub fn successor(&self, v: u32) -> u32 {
        self.successor[v as usize]
    }

    /// The vertex encoding ∞, for graphs built from rational maps.
    pub fn infinity_vertex(&self) -> Option<u32> {
        self.has_infinity.then(|| self.successor.len() as u32 - 1)
    }

    /// Successor table of the t-fold iterate.
    pub fn iterate_table(&self, mut t: u64) -> Vec<u32> {
        let mut acc: Vec<u32> = (0..self.successor.len() as u32).collect();
        let mut base = self.successor.clone();
        while t > 0 {
            if t & 1 == 1 {
                acc = acc.iter().map(|&v| base[v as usize]).collect();
            }
            base = base.iter().map(|&v| base[v as usize]).collect();
            t >>= 1;
        }
        acc
    }
}

/// Periodic points, cycle multiplicities and period of one map.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleStructure {
    domain_size: usize,
    cycles: Vec<Vec<u32>>,
    multiplicities: BTreeMap<usize, usize>,
    cyclic_count: usize,
    period_factors: BTreeMap<u64, u32>,
    period: BigUint,
    log_period: f64,
    infinity_cycle_len: Option<usize>,
}

impl CycleStructure {
    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    /// Cycles in order of their smallest vertex, each listed from that vertex.
    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    /// Z: the number of periodic points.
    pub fn cyclic_count(&self) -> usize {
        self.cyclic_count
    }

    pub fn cyclic_vertices(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.cycles.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// k -> c_k, over k with c_k > 0.
    pub fn multiplicities(&self) -> &BTreeMap<usize, usize> {
        &self.multiplicities
    }

    /// c_k, the number of k-cycles.
    pub fn count(&self, k: usize) -> usize {
        self.multiplicities.get(&k).copied().unwrap_or(0)
    }

    /// ĉ_k, the number of k-cycles not passing through ∞.
    pub fn count_avoiding_infinity(&self, k: usize) -> usize {
        self.count(k) - usize::from(self.infinity_cycle_len == Some(k))
    }

    /// Length of the cycle through ∞, if ∞ is periodic.
    pub fn infinity_cycle_len(&self) -> Option<usize> {
        self.infinity_cycle_len
    }

    /// The permutation σ induced on the periodic points.
    pub fn sigma(&self) -> BTreeMap<u32, u32> {
        let mut out = BTreeMap::new();
        for c in &self.cycles {
            for (i, &v) in c.iter().enumerate() {
                out.insert(v, c[(i + 1) % c.len()]);
            }
        }
        out
    }

    /// T, the lcm of the cycle lengths.
    pub fn period(&self) -> &BigUint {
        &self.period
    }

    /// Prime factorization of T.
    pub fn period_factors(&self) -> &BTreeMap<u64, u32> {
        &self.period_factors
    }

    /// ln T, summed from the prime-power factorization.
    pub fn log_period(&self) -> f64 {
        self.log_period
    }
}

impl Serialize for CycleStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CycleStructure", 5)?;
        st.serialize_field("Z", &self.cyclic_count)?;
        st.serialize_field("cycles", &self.multiplicities)?;
        st.serialize_field("T", &self.period.to_string())?;
        st.serialize_field("logT", &self.log_period)?;
        st.serialize_field("contains_infinity_cycle_len", &self.infinity_cycle_len)?;
        st.end()
    }
}

/// Finds the periodic points by peeling vertices of in-degree zero, then
/// walks each remaining cycle once.
pub fn cycle_decomposition(g: &FunctionalGraph) -> CycleStructure {
    let n = g.domain_size();
    let succ = g.successors();
    let mut indeg = vec![0u32; n];
    for &s in succ {
        indeg[s as usize] += 1;
    }
    let mut removed = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = queue.pop_front() {
        removed[v] = true;
        let s = succ[v] as usize;
        indeg[s] -= 1;
        if indeg[s] == 0 {
            queue.push_back(s);
        }
    }

    let infinity = g.infinity_vertex();
    let mut cycles = Vec::new();
    let mut multiplicities = BTreeMap::new();
    let mut infinity_cycle_len = None;
    for start in 0..n {
        if removed[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        loop {
            removed[v] = true;
            cycle.push(v as u32);
            v = succ[v] as usize;
            if v == start {
                break;
            }
        }
        if infinity.is_some_and(|i| cycle.contains(&i)) {
            infinity_cycle_len = Some(cycle.len());
        }
        *multiplicities.entry(cycle.len()).or_insert(0) += 1;
        cycles.push(cycle);
    }

    let mut period_factors: BTreeMap<u64, u32> = BTreeMap::new();
    for &k in multiplicities.keys() {
        for (p, e) in factorize(k as u64) {
            let slot = period_factors.entry(p).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let period = period_factors.iter().fold(BigUint::one(), |acc, (&p, &e)| acc * BigUint::from(p).pow(e));
    let log_period = period_factors.iter().map(|(&p, &e)| e as f64 * (p as f64).ln()).sum();
    let cyclic_count = multiplicities.iter().map(|(k, c)| k * c).sum();

    CycleStructure {
        domain_size: n,
        cycles,
        multiplicities,
        cyclic_count,
        period_factors,
        period,
        log_period,
        infinity_cycle_len,
    }
}

/// Least t ≥ 1 with g^(n+t) = g^(n), n the domain size, found by direct
/// iteration of the successor table.
pub fn ultimate_period_oracle(g: &FunctionalGraph, budget: u64) -> Result<u64> {
    let settled = g.iterate_table(g.domain_size() as u64);
    let succ = g.successors();
    let mut cur = settled.clone();
    for t in 1..=budget {
        for v in cur.iter_mut() {
            *v = succ[*v as usize];
        }
        if cur == settled {
            return Ok(t);
        }
    }
    Err(Error::BudgetExhausted(budget))
}

/// A set of pairwise disjoint cycles, each an ordered list of distinct
/// vertices v_0 -> v_1 -> ... -> v_0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorQuery {
    cycles: Vec<Vec<u32>>,
}

impl IndicatorQuery {
    pub fn new(cycles: Vec<Vec<u32>>) -> Result<Self> {
        let mut seen: Vec<u32> = Vec::new();
        for c in &cycles {
            if c.is_empty() {
                return Err(Error::InvalidQuery("empty cycle".into()));
            }
            seen.extend(c);
        }
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidQuery(format!("vertex {} appears twice", w[0])));
        }
        Ok(IndicatorQuery { cycles })
    }

    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }
}

/// True iff every cycle of the query is a cycle of `g`. The product of the
/// individual cycle indicators.
pub fn has_cycles(g: &FunctionalGraph, query: &IndicatorQuery) -> bool {
    let n = g.domain_size();
    query
        .cycles()
        .iter()
        .all(|c| c.iter().enumerate().all(|(i, &v)| (v as usize) < n && g.successor(v) == c[(i + 1) % c.len()]))
}

/// Largest order of a permutation of m elements: the maximum lcm over
/// partitions of m. Knapsack over prime powers, one pass per prime.
pub fn landau_max_order(m: usize) -> Result<BigUint> {
    if !(1..=10_000).contains(&m) {
        return Err(Error::OutOfRange(format!("landau_max_order needs 1 ≤ m ≤ 10000, got {m}")));
    }
    // best[j] = largest lcm of a partition of some j' ≤ j
    let mut best = vec![BigUint::one(); m + 1];
    for p in primes_up_to(m as u64) {
        let p = p as usize;
        for j in (p..=m).rev() {
            let mut pk = p;
            while pk <= j {
                let cand = &best[j - pk] * BigUint::from(pk);
                if cand > best[j] {
                    best[j] = cand;
                }
                pk *= p;
            }
        }
    }
    Ok(best.swap_remove(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;
    use num_integer::Integer;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn graph(s: &[u32]) -> FunctionalGraph {
        FunctionalGraph::from_successors(s.to_vec()).unwrap()
    }

    // v is periodic iff some iterate 1..=n returns to v.
    fn periodic_by_orbit_walk(g: &FunctionalGraph) -> Vec<u32> {
        let n = g.domain_size();
        (0..n as u32)
            .filter(|&v| {
                let mut w = v;
                (0..n).any(|_| {
                    w = g.successor(w);
                    w == v
                })
            })
            .collect()
    }

    fn partitions(m: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max_part.min(m)).rev() {
            prefix.push(part);
            partitions(m - part, part, prefix, out);
            prefix.pop();
        }
    }

    fn landau_brute(m: usize) -> u64 {
        let mut all = Vec::new();
        partitions(m, m, &mut Vec::new(), &mut all);
        all.iter().map(|p| p.iter().fold(1u64, |acc, &k| acc.lcm(&(k as u64)))).max().unwrap()
    }

    #[test]
    fn polynomial_graphs() {
        let f5 = FieldSpec::prime(5).unwrap();
        let id = FunctionalGraph::from_polynomial(&f5, &DensePolynomial::x());
        assert_eq!(id.successors(), &[0, 1, 2, 3, 4]);
        let shift = FunctionalGraph::from_polynomial(&f5, &DensePolynomial::from_indices(&[1, 1]));
        assert_eq!(shift.successors(), &[1, 2, 3, 4, 0]);
        let f3 = FieldSpec::prime(3).unwrap();
        let sq = FunctionalGraph::from_polynomial(&f3, &DensePolynomial::from_indices(&[0, 0, 1]));
        assert_eq!(sq.successors(), &[0, 1, 1]);
    }

    #[test]
    fn rational_graphs() {
        let f5 = FieldSpec::prime(5).unwrap();
        // (2x + 1) / ((x - 1)(x - 2)) has squarefree denominator of degree 2
        let den = DensePolynomial::linear_root(&f5, FieldElement(1))
            .mul(&f5, &DensePolynomial::linear_root(&f5, FieldElement(2)));
        let num = DensePolynomial::from_indices(&[1, 2, 3]);
        let r = RationalMap::new(&f5, num, den).unwrap();
        let g = FunctionalGraph::from_rational(&f5, &r);
        assert_eq!(g.domain_size(), 6);
        assert_eq!(g.infinity_vertex(), Some(5));
        assert_eq!(g.successor(5), 3); // leading coefficient of the numerator
        assert_eq!((0..5).filter(|&v| g.successor(v) == 5).count(), 2);
    }

    #[test]
    fn identity_and_single_cycle() {
        let n = 7;
        let cs = cycle_decomposition(&graph(&(0..n).collect::<Vec<_>>()));
        assert_eq!(cs.cyclic_count(), 7);
        assert_eq!(cs.count(1), 7);
        assert_eq!(cs.period(), &BigUint::one());
        assert_eq!(cs.log_period(), 0.0);

        let cyc: Vec<u32> = (0..n).map(|v| (v + 1) % n).collect();
        let cs = cycle_decomposition(&graph(&cyc));
        assert_eq!(cs.cyclic_count(), 7);
        assert_eq!(cs.count(7), 1);
        assert_eq!(cs.period(), &BigUint::from(7u32));
        assert_eq!(ultimate_period_oracle(&graph(&cyc), 100).unwrap(), 7);
        assert_eq!(ultimate_period_oracle(&graph(&(0..n).collect::<Vec<_>>()), 100).unwrap(), 1);
    }

    #[test]
    fn squaring_on_f7() {
        // x^2 on F_7: 0 and 1 fixed, 2 -> 4 -> 2, 3 -> 2, 5 -> 4, 6 -> 1
        let f7 = FieldSpec::prime(7).unwrap();
        let g = FunctionalGraph::from_polynomial(&f7, &DensePolynomial::from_indices(&[0, 0, 1]));
        assert_eq!(g.successors(), &[0, 1, 4, 2, 2, 4, 1]);
        let cs = cycle_decomposition(&g);
        assert_eq!(cs.cycles(), &[vec![0], vec![1], vec![2, 4]]);
        assert_eq!(cs.cyclic_vertices(), periodic_by_orbit_walk(&g));
        assert_eq!(cs.period(), &BigUint::from(2u32));
        let sigma = cs.sigma();
        assert_eq!(sigma[&2], 4);
        assert_eq!(sigma[&4], 2);
    }

    #[test]
    fn single_vertex() {
        let cs = cycle_decomposition(&graph(&[0]));
        assert_eq!(cs.cyclic_count(), 1);
        assert_eq!(cs.period(), &BigUint::one());
    }

    #[test]
    fn period_oracle_budget() {
        let cyc: Vec<u32> = (0..10).map(|v| (v + 1) % 10).collect();
        assert_eq!(ultimate_period_oracle(&graph(&cyc), 3), Err(Error::BudgetExhausted(3)));
    }

    #[test]
    fn infinity_cycle_is_flagged() {
        let f3 = FieldSpec::prime(3).unwrap();
        // (x + 1)/x: 0 -> ∞ -> 1 -> 2 -> 0
        let r = RationalMap::new(&f3, DensePolynomial::from_indices(&[1, 1]), DensePolynomial::x()).unwrap();
        let g = FunctionalGraph::from_rational(&f3, &r);
        assert_eq!(g.successors(), &[3, 2, 0, 1]);
        let cs = cycle_decomposition(&g);
        assert_eq!(cs.infinity_cycle_len(), Some(4));
        assert_eq!(cs.count(4), 1);
        assert_eq!(cs.count_avoiding_infinity(4), 0);
    }

    #[test]
    fn has_cycles_examples() {
        let g = graph(&[0, 2, 1, 1, 4]);
        let q = |c: Vec<Vec<u32>>| IndicatorQuery::new(c).unwrap();
        assert!(has_cycles(&g, &q(vec![vec![0]])));
        assert!(has_cycles(&g, &q(vec![vec![2, 1]])));
        assert!(!has_cycles(&g, &q(vec![vec![3]])));
        assert!(!has_cycles(&g, &q(vec![vec![1, 3]])));
        let c1 = vec![0];
        let c2 = vec![1, 2];
        assert_eq!(
            has_cycles(&g, &q(vec![c1.clone(), c2.clone()])),
            has_cycles(&g, &q(vec![c1.clone()])) && has_cycles(&g, &q(vec![c2]))
        );
        assert!(IndicatorQuery::new(vec![vec![1, 2], vec![2]]).is_err());
        assert!(IndicatorQuery::new(vec![vec![1, 1]]).is_err());
        assert!(IndicatorQuery::new(vec![vec![]]).is_err());
    }

    #[test]
    fn landau_small_values() {
        let known = [1u64, 2, 3, 4, 6, 6, 12, 15, 20, 30, 30, 60, 60, 84, 105];
        for (i, &want) in known.iter().enumerate() {
            assert_eq!(landau_max_order(i + 1).unwrap(), BigUint::from(want), "m = {}", i + 1);
        }
        for m in 1..=30 {
            assert_eq!(landau_max_order(m).unwrap(), BigUint::from(landau_brute(m)));
        }
        assert!(landau_max_order(0).is_err());
        assert!(landau_max_order(10_001).is_err());
    }

    #[test]
    fn random_mapping_uniform_over_all_27_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = 270_000u32;
        let mut counts = BTreeMap::new();
        for _ in 0..draws {
            let g = FunctionalGraph::random_mapping(3, &mut rng).unwrap();
            *counts.entry(g.successors().to_vec()).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 27);
        let expected = draws as f64 / 27.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 26 degrees of freedom; the 0.999 quantile is about 54.05
        assert!(chi2 < 54.05, "chi-square {chi2}");

        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        let ga = FunctionalGraph::random_mapping(50, &mut a).unwrap();
        assert_eq!(ga, FunctionalGraph::random_mapping(50, &mut b).unwrap());
        assert_eq!(ga.domain_size(), 50);
    }

    #[test]
    fn json_shape() {
        let cs = cycle_decomposition(&graph(&[1, 0, 2, 2]));
        assert_eq!(
            serde_json::to_string(&cs).unwrap(),
            r#"{"Z":3,"cycles":{"1":1,"2":1},"T":"2","logT":0.6931471805599453,"contains_infinity_cycle_len":null}"#
        );
    }

    #[test]
    fn exhaustive_small_maps() {
        // every map on up to 5 vertices
        for n in 1..=5usize {
            for idx in 0..(n as u64).pow(n as u32) {
                let g = FunctionalGraph::mapping_at(n, idx);
                let cs = cycle_decomposition(&g);
                assert_eq!(cs.cyclic_vertices(), periodic_by_orbit_walk(&g));
                let t = ultimate_period_oracle(&g, 1000).unwrap();
                assert_eq!(BigUint::from(t), *cs.period());
                let sigma = cs.sigma();
                let image: BTreeSet<u32> = sigma.values().copied().collect();
                assert_eq!(image.into_iter().collect::<Vec<_>>(), cs.cyclic_vertices());
                for (&v, &w) in &sigma {
                    assert_eq!(g.successor(v), w);
                }
            }
        }
    }
}
