//! Closed-form quantities: cycle counts, Bonferroni sums, factorial moments
//! and the independent Poisson(1/k) reference law.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::primes_up_to_real;

/// A vector (r_1, ..., r_b) selecting the factorial moment
/// E[(c_1)_{r_1} ... (c_b)_{r_b}]. Trailing zeros are dropped so equal
/// moments compare equal regardless of the truncation they were written with.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MomentSpec {
    r: Vec<u32>,
}

impl MomentSpec {
    pub fn new(mut r: Vec<u32>) -> Self {
        while r.last() == Some(&0) {
            r.pop();
        }
        MomentSpec { r }
    }

    pub fn orders(&self) -> &[u32] {
        &self.r
    }

    /// Number of cycle lengths the spec involves (after trimming).
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// m = sum k r_k, the number of points a permutation of this cycle type moves.
    pub fn weight(&self) -> usize {
        self.r.iter().enumerate().map(|(i, &r)| (i + 1) * r as usize).sum()
    }

    /// Every spec over cycle lengths 1..=b with weight ≤ max_weight,
    /// including the empty spec.
    pub fn all(b: usize, max_weight: usize) -> Vec<MomentSpec> {
        fn rec(k: usize, b: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<MomentSpec>) {
            if k > b {
                out.push(MomentSpec::new(cur.clone()));
                return;
            }
            for r in 0..=left / k {
                cur.push(r as u32);
                rec(k + 1, b, left - r * k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(1, b, max_weight, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

/// (x)_r = x (x-1) ... (x-r+1), zero when r > x.
pub fn falling_factorial(x: u64, r: u32) -> u128 {
    if r as u64 > x {
        return 0;
    }
    (0..r as u64).map(|j| (x - j) as u128).product()
}

fn ratio(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// (q)_m / q^m as an exact fraction.
pub fn falling_ratio(q: u64, m: usize) -> BigRational {
    if m as u64 > q {
        return BigRational::zero();
    }
    let num = (0..m as u64).fold(BigUint::one(), |acc, j| acc * BigUint::from(q - j));
    ratio(num, BigUint::from(q).pow(m as u32))
}

/// prod_{j<m} (1 - j/q) in floating point.
pub fn falling_ratio_f64(q: u64, m: usize) -> f64 {
    (0..m).map(|j| 1.0 - j as f64 / q as f64).product::<f64>().max(0.0)
}

/// Number of distinct p-cycles on q points: (p-1)! C(q,p).
pub fn zp_count(q: u64, p: u64) -> Result<BigUint> {
    if p == 0 || p > q {
        return Err(Error::OutOfRange(format!("cycle length {p} must lie in 1..={q}")));
    }
    // (p-1)! C(q,p) = (q)_p / p
    let falling = (0..p).fold(BigUint::one(), |acc, j| acc * BigUint::from(q - j));
    Ok(falling / BigUint::from(p))
}

/// S_1 = (1/p) prod_{j<p} (1 - j/q), exactly.
pub fn s1_fraction(q: u64, p: u64) -> BigRational {
    falling_ratio(q, p as usize) / BigRational::from_integer(BigInt::from(p))
}

/// S_2 = (1/(2p^2)) prod_{j<2p} (1 - j/q), exactly. Zero when 2p > q.
pub fn s2_fraction(q: u64, p: u64) -> BigRational {
    falling_ratio(q, 2 * p as usize) / BigRational::from_integer(BigInt::from(2 * p * p))
}

pub fn s1_exact(q: u64, p: u64) -> Result<f64> {
    if p == 0 || p > q {
        return Err(Error::OutOfRange(format!("S1 needs 1 ≤ p ≤ q, got p={p}, q={q}")));
    }
    Ok(falling_ratio_f64(q, p as usize) / p as f64)
}

pub fn s2_exact(q: u64, p: u64) -> Result<f64> {
    if p == 0 || 2 * p > q {
        return Err(Error::OutOfRange(format!("S2 needs 2p ≤ q, got p={p}, q={q}")));
    }
    Ok(falling_ratio_f64(q, 2 * p as usize) / (2 * p * p) as f64)
}

/// ((q)_m / q^m) prod_k k^(-r_k): the factorial moment over Ω(q,d) when d ≥ m.
pub fn factorial_moment_fraction(q: u64, spec: &MomentSpec) -> BigRational {
    let denom =
        spec.orders().iter().enumerate().fold(BigUint::one(), |acc, (i, &r)| acc * BigUint::from(i as u64 + 1).pow(r));
    falling_ratio(q, spec.weight()) / BigRational::from_integer(BigInt::from(denom))
}

pub fn factorial_moment_exact(q: u64, spec: &MomentSpec) -> f64 {
    let denom: f64 = spec.orders().iter().enumerate().map(|(i, &r)| ((i + 1) as f64).powi(r as i32)).product();
    falling_ratio_f64(q, spec.weight()) / denom
}

fn ln_factorial(m: u32) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

/// P(Poisson(1/k) = m).
pub fn poisson_pmf(k: usize, m: u32) -> f64 {
    let lambda = 1.0 / k as f64;
    (-lambda + m as f64 * lambda.ln() - ln_factorial(m)).exp()
}

/// P(Poisson(1/k) ≥ m).
pub fn poisson_tail(k: usize, m: u32) -> f64 {
    (1.0 - (0..m).map(|j| poisson_pmf(k, j)).sum::<f64>()).max(0.0)
}

/// prod_k e^(-1/k) / (m_k! k^(m_k)) for the vector (m_1, ..., m_b).
pub fn poisson_joint_pmf(m: &[u32]) -> f64 {
    m.iter().enumerate().map(|(i, &mk)| poisson_pmf(i + 1, mk)).product()
}

/// Probability of one histogram cell under independent Poisson(1/k), where
/// an entry equal to `clip` stands for "clip or more".
pub fn poisson_cell_probability(cell: &[u32], clip: u32) -> f64 {
    cell.iter()
        .enumerate()
        .map(|(i, &m)| if m >= clip { poisson_tail(i + 1, clip) } else { poisson_pmf(i + 1, m) })
        .product()
}

/// sum over primes p ≤ x of ln(p)/p.
pub fn mertens_sum(x: f64) -> f64 {
    primes_up_to_real(x).iter().map(|&p| (p as f64).ln() / p as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    // Enumerate p-cycles on q labelled points as sequences starting at their
    // minimum element.
    fn count_cycles_brute(q: u64, p: usize) -> u64 {
        fn rec(q: u64, p: usize, seq: &mut Vec<u64>, count: &mut u64) {
            if seq.len() == p {
                *count += 1;
                return;
            }
            for v in 0..q {
                if v > seq[0] && !seq.contains(&v) {
                    seq.push(v);
                    rec(q, p, seq, count);
                    seq.pop();
                }
            }
        }
        let mut count = 0;
        for first in 0..q {
            rec(q, p, &mut vec![first], &mut count);
        }
        count
    }

    #[test]
    fn zp_examples() {
        assert_eq!(zp_count(5, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(zp_count(5, 1).unwrap(), BigUint::from(5u32));
        assert_eq!(zp_count(7, 3).unwrap(), BigUint::from(70u32));
        assert!(zp_count(3, 4).is_err());
        for q in 1..=7 {
            for p in 1..=q {
                assert_eq!(zp_count(q, p).unwrap(), BigUint::from(count_cycles_brute(q, p as usize)));
            }
        }
    }

    #[test]
    fn s1_s2_examples() {
        assert!(close(s1_exact(5, 2).unwrap(), 0.4, 1e-15));
        assert_eq!(s1_fraction(5, 2), frac(2, 5));
        for q in 1..20 {
            assert_eq!(s1_exact(q, 1).unwrap(), 1.0);
        }
        assert!(close(s1_exact(7, 3).unwrap(), 10.0 / 49.0, 1e-15)); // (1/3)(6/7)(5/7)
        assert!(close(s2_exact(5, 2).unwrap(), 0.024, 1e-15));
        assert_eq!(s2_fraction(5, 2), frac(3, 125));
        assert_eq!(s2_fraction(4, 2), frac(3, 256));
        assert!(close(s2_exact(4, 2).unwrap(), 3.0 / 256.0, 1e-15));
        assert!(s2_exact(5, 3).is_err());
        assert_eq!(s2_fraction(5, 3), BigRational::zero());
        for p in 1..6 {
            assert!(s2_exact(2 * p, p).unwrap() > 0.0);
        }
    }

    #[test]
    fn float_and_exact_routes_agree() {
        for q in 2..30u64 {
            for p in 1..=q / 2 {
                assert!(close(s1_exact(q, p).unwrap(), to_f64(&s1_fraction(q, p)), 1e-14));
                assert!(close(s2_exact(q, p).unwrap(), to_f64(&s2_fraction(q, p)), 1e-14));
            }
            for spec in MomentSpec::all(3, 5) {
                let a = factorial_moment_exact(q, &spec);
                let b = to_f64(&factorial_moment_fraction(q, &spec));
                assert!(close(a, b, 1e-14), "q={q} spec={spec:?}");
            }
        }
    }

    #[test]
    fn factorial_moment_examples() {
        assert_eq!(factorial_moment_fraction(5, &MomentSpec::new(vec![2])), frac(4, 5));
        assert_eq!(factorial_moment_fraction(9, &MomentSpec::new(vec![])), BigRational::one());
        assert_eq!(factorial_moment_fraction(7, &MomentSpec::new(vec![1, 1])), frac(105, 343));
        assert!(close(factorial_moment_exact(7, &MomentSpec::new(vec![1, 1])), 0.306_122_449, 1e-9));
        assert_eq!(factorial_moment_fraction(5, &MomentSpec::new(vec![0, 1])), frac(2, 5));
    }

    #[test]
    fn moment_spec_enumeration() {
        let all = MomentSpec::all(3, 2);
        let want: Vec<MomentSpec> =
            vec![vec![], vec![0, 1], vec![1], vec![2]].into_iter().map(MomentSpec::new).collect();
        assert_eq!(all, want);
        assert_eq!(MomentSpec::new(vec![1, 0, 0]), MomentSpec::new(vec![1]));
        assert_eq!(MomentSpec::new(vec![1, 1, 1]).weight(), 6);
        for s in MomentSpec::all(5, 6) {
            assert!(s.weight() <= 6 && s.len() <= 5);
        }
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 0), 1);
        assert_eq!(falling_factorial(5, 2), 20);
        assert_eq!(falling_factorial(2, 3), 0);
        assert_eq!(falling_ratio(3, 4), BigRational::zero());
    }

    #[test]
    fn poisson_examples() {
        assert!(close(poisson_joint_pmf(&[0]), 0.367_879_441, 1e-9));
        assert!(close(poisson_joint_pmf(&[1, 0]), 0.223_130_160, 1e-9));
        assert!(close(poisson_joint_pmf(&[]), 1.0, 0.0));
    }

    #[test]
    fn poisson_cells_sum_to_one() {
        let clip = 8u32;
        for b in 1..=4usize {
            let mut total = 0.0;
            let cells = (clip as usize + 1).pow(b as u32);
            for idx in 0..cells {
                let mut t = idx;
                let cell: Vec<u32> = (0..b)
                    .map(|_| {
                        let v = (t % (clip as usize + 1)) as u32;
                        t /= clip as usize + 1;
                        v
                    })
                    .collect();
                total += poisson_cell_probability(&cell, clip);
            }
            assert!(close(total, 1.0, 1e-9), "b={b} total={total}");
        }
    }

    #[test]
    fn mertens_examples() {
        assert!(close(mertens_sum(10.0), 1.312_653, 1e-6));
        assert_eq!(mertens_sum(1.0), 0.0);
        // sum ln p / p = ln x + O(1): at x = 100 the sum is about 3.46
        let m = mertens_sum(100.0);
        assert!((m - 100f64.ln()).abs() < 2.0, "{m}");
    }
}
