//! Spaces of maps over F_q: degree-d polynomials Ω(q,d) and coprime pairs
//! (f, g) with g monic, both of degree d, viewed as rational self-maps of
//! F_q ∪ {∞}.
//!
//! Enumeration walks a fixed *candidate index* range. For polynomials each
//! candidate is a member; the constant coefficient varies fastest and the
//! leading coefficient slowest. For rational maps the denominator is the
//! outer (slow) loop, the numerator the inner loop, and candidates with a
//! nontrivial common factor are skipped. Any split of the candidate range
//! into sub-ranges is therefore a partition of the space.

use std::ops::Range;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::{mgcd, DensePolynomial};

/// Default bound on the number of members a single enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 28;

/// A point of F_q ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedPoint {
    Finite(FieldElement),
    Infinity,
}

/// A rational map f/g with deg f = deg g, g monic and mgcd(f, g) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalMap {
    num: DensePolynomial,
    den: DensePolynomial,
}

impl RationalMap {
    pub fn new(field: &FieldSpec, num: DensePolynomial, den: DensePolynomial) -> Result<Self> {
        let (Some(dn), Some(dd)) = (num.degree(), den.degree()) else {
            return Err(Error::InvalidRationalMap("numerator and denominator must be nonzero".into()));
        };
        if dn != dd {
            return Err(Error::InvalidRationalMap(format!(
                "numerator degree {dn} differs from denominator degree {dd}"
            )));
        }
        if !den.is_monic() {
            return Err(Error::InvalidRationalMap("denominator must be monic".into()));
        }
        if mgcd(field, &num, &den)? != DensePolynomial::one() {
            return Err(Error::InvalidRationalMap("numerator and denominator share a factor".into()));
        }
        Ok(RationalMap { num, den })
    }

    pub fn numerator(&self) -> &DensePolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &DensePolynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().expect("numerator is nonzero")
    }

    /// f(x)/g(x), with R(x) = ∞ where g(x) = 0 and R(∞) = lead(f).
    pub fn eval(&self, field: &FieldSpec, x: ExtendedPoint) -> ExtendedPoint {
        match x {
            ExtendedPoint::Infinity => {
                ExtendedPoint::Finite(self.num.leading_coefficient().expect("numerator is nonzero"))
            }
            ExtendedPoint::Finite(x) => {
                let g = self.den.eval(field, x);
                if g.is_zero() {
                    ExtendedPoint::Infinity
                } else {
                    let f = self.num.eval(field, x);
                    ExtendedPoint::Finite(field.div(f, g).expect("g(x) is nonzero"))
                }
            }
        }
    }
}

/// A member of Ω(q,d) or U(q,d).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceMember {
    Polynomial(DensePolynomial),
    Rational(RationalMap),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Polynomial,
    Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDescriptor {
    field: FieldSpec,
    degree: usize,
    kind: SpaceKind,
}

impl SpaceDescriptor {
    pub fn new(field: FieldSpec, degree: usize, kind: SpaceKind) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidSpace("degree must be at least 1".into()));
        }
        Ok(SpaceDescriptor { field, degree, kind })
    }

    pub fn polynomials(field: FieldSpec, degree: usize) -> Result<Self> {
        Self::new(field, degree, SpaceKind::Polynomial)
    }

    pub fn rationals(field: FieldSpec, degree: usize) -> Result<Self> {
        Self::new(field, degree, SpaceKind::Rational)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// |Ω(q,d)| = q^d (q-1) or |U(q,d)| = q^(2d+1) (1-1/q)^2 = q^(2d-1) (q-1)^2.
    pub fn cardinality(&self) -> BigUint {
        let q = BigUint::from(self.field.order());
        let q1 = &q - 1u32;
        let d = self.degree as u32;
        match self.kind {
            SpaceKind::Polynomial => q.pow(d) * q1,
            SpaceKind::Rational => q.pow(2 * d - 1) * &q1 * &q1,
        }
    }

    fn polynomial_count(&self) -> Option<u64> {
        let q = self.field.order();
        q.checked_pow(self.degree as u32)?.checked_mul(q - 1)
    }

    fn monic_count(&self) -> Option<u64> {
        self.field.order().checked_pow(self.degree as u32)
    }

    /// Length of the candidate index range, if it fits in 64 bits.
    pub fn candidate_count(&self) -> Option<u64> {
        match self.kind {
            SpaceKind::Polynomial => self.polynomial_count(),
            SpaceKind::Rational => self.polynomial_count()?.checked_mul(self.monic_count()?),
        }
    }

    /// Polynomial number `index` of Ω(q,d) in enumeration order.
    pub fn polynomial_at(&self, index: u64) -> DensePolynomial {
        let q = self.field.order();
        let mut t = index;
        let mut coeffs = Vec::with_capacity(self.degree + 1);
        for _ in 0..self.degree {
            coeffs.push(FieldElement((t % q) as u32));
            t /= q;
        }
        debug_assert!(t < q - 1);
        coeffs.push(FieldElement((t + 1) as u32));
        DensePolynomial::new(coeffs)
    }

    /// Monic polynomial number `index` of degree d.
    pub fn monic_at(&self, index: u64) -> DensePolynomial {
        monic_at(self.field.order(), self.degree, index)
    }

    /// The member at candidate `index`, or `None` for a skipped
    /// (non-coprime) rational candidate.
    pub fn member_at(&self, index: u64) -> Option<SpaceMember> {
        match self.kind {
            SpaceKind::Polynomial => Some(SpaceMember::Polynomial(self.polynomial_at(index))),
            SpaceKind::Rational => {
                let per_den = self.polynomial_count().expect("candidate index in range");
                let den = self.monic_at(index / per_den);
                let num = self.polynomial_at(index % per_den);
                RationalMap::new(&self.field, num, den).ok().map(SpaceMember::Rational)
            }
        }
    }

    /// Members whose candidate index lies in `range`, in order.
    pub fn members(&self, range: Range<u64>) -> impl Iterator<Item = SpaceMember> + '_ {
        range.filter_map(move |i| self.member_at(i))
    }

    /// Every member, in enumeration order, provided |space| ≤ cap.
    pub fn enumerate(&self, cap: u64) -> Result<impl Iterator<Item = SpaceMember> + '_> {
        let card = self.cardinality();
        if card > BigUint::from(cap) {
            return Err(Error::CapExceeded { size: card.to_string(), cap });
        }
        let n = self.candidate_count().ok_or_else(|| Error::CapExceeded { size: card.to_string(), cap })?;
        Ok(self.members(0..n))
    }

    /// A uniform draw. Rational maps are drawn by rejection: a uniform
    /// numerator and monic denominator are redrawn until coprime.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SpaceMember {
        match self.kind {
            SpaceKind::Polynomial => SpaceMember::Polynomial(self.sample_polynomial(rng)),
            SpaceKind::Rational => SpaceMember::Rational(self.sample_rational(rng)),
        }
    }

    fn sample_polynomial<R: Rng + ?Sized>(&self, rng: &mut R) -> DensePolynomial {
        let q = self.field.order() as u32;
        let mut coeffs: Vec<_> = (0..self.degree).map(|_| FieldElement(rng.random_range(0..q))).collect();
        coeffs.push(FieldElement(rng.random_range(1..q)));
        DensePolynomial::new(coeffs)
    }

    fn sample_rational<R: Rng + ?Sized>(&self, rng: &mut R) -> RationalMap {
        let q = self.field.order() as u32;
        loop {
            let num = self.sample_polynomial(rng);
            let mut den: Vec<_> = (0..self.degree).map(|_| FieldElement(rng.random_range(0..q))).collect();
            den.push(FieldElement::ONE);
            if let Ok(r) = RationalMap::new(&self.field, num, DensePolynomial::new(den)) {
                return r;
            }
        }
    }
}

fn monic_at(q: u64, degree: usize, mut index: u64) -> DensePolynomial {
    let mut coeffs = Vec::with_capacity(degree + 1);
    for _ in 0..degree {
        coeffs.push(FieldElement((index % q) as u32));
        index /= q;
    }
    coeffs.push(FieldElement::ONE);
    DensePolynomial::new(coeffs)
}

/// A bijection σ: A → A on a nonempty set A of field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialPermutation {
    support: Vec<FieldElement>,
    images: Vec<FieldElement>,
}

impl PartialPermutation {
    pub fn new(support: Vec<FieldElement>, images: Vec<FieldElement>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidPermutation("support must be nonempty".into()));
        }
        if support.len() != images.len() {
            return Err(Error::InvalidPermutation("support and images differ in length".into()));
        }
        let mut s = support.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPermutation("support has repeated elements".into()));
        }
        let mut im = images.clone();
        im.sort_unstable();
        if im != s {
            return Err(Error::InvalidPermutation("images are not a permutation of the support".into()));
        }
        Ok(PartialPermutation { support, images })
    }

    /// A uniformly random subset of the given size with a uniformly random
    /// permutation on it.
    pub fn random<R: Rng + ?Sized>(field: &FieldSpec, size: usize, rng: &mut R) -> Result<Self> {
        if size == 0 || size as u64 > field.order() {
            return Err(Error::InvalidPermutation(format!("size {size} is not in 1..={}", field.order())));
        }
        let mut all: Vec<_> = field.elements().collect();
        all.shuffle(rng);
        all.truncate(size);
        let mut images = all.clone();
        images.shuffle(rng);
        Self::new(all, images)
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn support(&self) -> &[FieldElement] {
        &self.support
    }

    pub fn images(&self) -> &[FieldElement] {
        &self.images
    }

    pub fn pairs(&self) -> impl Iterator<Item = (FieldElement, FieldElement)> + '_ {
        self.support.iter().copied().zip(self.images.iter().copied())
    }
}

/// q^(d-|A|) (q-1): the number of degree-d polynomials extending a
/// permutation of an |A|-element set, valid when d ≥ |A|.
pub fn extension_count_formula(q: u64, degree: usize, support_len: usize) -> Option<BigUint> {
    let exp = degree.checked_sub(support_len)?;
    Some(BigUint::from(q).pow(exp as u32) * BigUint::from(q - 1))
}

/// Counts f ∈ Ω(q,d) with f(a) = σ(a) for every a in the support, by
/// walking the whole space.
pub fn count_extensions_oracle(space: &SpaceDescriptor, sigma: &PartialPermutation, cap: u64) -> Result<u64> {
    if space.kind() != SpaceKind::Polynomial {
        return Err(Error::InvalidSpace("extension counting is over polynomial spaces".into()));
    }
    let field = space.field();
    let count = space
        .enumerate(cap)?
        .filter(|m| match m {
            SpaceMember::Polynomial(f) => sigma.pairs().all(|(a, b)| f.eval(field, a) == b),
            SpaceMember::Rational(_) => unreachable!(),
        })
        .count();
    Ok(count as u64)
}

fn distinct(roots: &[FieldElement]) -> usize {
    let mut r = roots.to_vec();
    r.sort_unstable();
    r.dedup();
    r.len()
}

/// Number of monic degree-d polynomials over F_q with no root in A.
///
/// For |A| ≤ d this is the closed form q^d (1-1/q)^|A| = q^(d-|A|) (q-1)^|A|.
/// Otherwise the inclusion–exclusion sum is truncated at j = d (a monic
/// polynomial of degree d has at most d prescribed roots), which is still
/// exact.
pub fn count_monic_avoiding_roots(q: u64, degree: usize, roots: &[FieldElement]) -> BigUint {
    let a = distinct(roots);
    let qb = BigUint::from(q);
    if a <= degree {
        return qb.pow((degree - a) as u32) * BigUint::from(q - 1).pow(a as u32);
    }
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    let mut binom = BigUint::one();
    for j in 0..=degree {
        let term = &binom * qb.pow((degree - j) as u32);
        if j % 2 == 0 {
            pos += term;
        } else {
            neg += term;
        }
        binom = binom * BigUint::from(a - j) / BigUint::from(j + 1);
    }
    pos - neg
}

/// Brute-force count of monic degree-d polynomials with no root in A.
pub fn count_monic_avoiding_roots_oracle(
    field: &FieldSpec,
    degree: usize,
    roots: &[FieldElement],
    cap: u64,
) -> Result<u64> {
    let q = field.order();
    let total = q
        .checked_pow(degree as u32)
        .filter(|&n| n <= cap)
        .ok_or_else(|| Error::CapExceeded { size: format!("{q}^{degree}"), cap })?;
    Ok(
        (0..total)
            .map(|i| monic_at(q, degree, i))
            .filter(|g| roots.iter().all(|&a| !g.eval(field, a).is_zero()))
            .count() as u64,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::{BTreeMap, HashSet};

    fn fe(i: u32) -> FieldElement {
        FieldElement(i)
    }

    fn poly_space(p: u64, d: usize) -> SpaceDescriptor {
        SpaceDescriptor::polynomials(FieldSpec::prime(p).unwrap(), d).unwrap()
    }

    #[test]
    fn rational_eval_conventions() {
        let f5 = FieldSpec::prime(5).unwrap();
        let r = RationalMap::new(&f5, DensePolynomial::from_indices(&[1, 2]), DensePolynomial::from_indices(&[4, 1]))
            .unwrap();
        assert_eq!(r.eval(&f5, ExtendedPoint::Finite(fe(1))), ExtendedPoint::Infinity);
        assert_eq!(r.eval(&f5, ExtendedPoint::Infinity), ExtendedPoint::Finite(fe(2)));
        // x = 0: 1 / 4 = 4 in F_5
        assert_eq!(r.eval(&f5, ExtendedPoint::Finite(fe(0))), ExtendedPoint::Finite(fe(4)));
    }

    #[test]
    fn rational_eval_without_poles() {
        let f5 = FieldSpec::prime(5).unwrap();
        // x^2 + 2 has no root in F_5
        let num = DensePolynomial::from_indices(&[1, 0, 1]);
        let den = DensePolynomial::from_indices(&[2, 0, 1]);
        let r = RationalMap::new(&f5, num.clone(), den.clone()).unwrap();
        for x in f5.elements() {
            let want = f5.div(num.eval(&f5, x), den.eval(&f5, x)).unwrap();
            assert_eq!(r.eval(&f5, ExtendedPoint::Finite(x)), ExtendedPoint::Finite(want));
        }
    }

    #[test]
    fn rational_validation() {
        let f5 = FieldSpec::prime(5).unwrap();
        let p = DensePolynomial::from_indices;
        assert!(RationalMap::new(&f5, p(&[1, 1]), p(&[2, 2])).is_err()); // not monic
        assert!(RationalMap::new(&f5, p(&[1, 1]), p(&[1, 0, 1])).is_err()); // degrees
        assert!(RationalMap::new(&f5, p(&[4, 1]), p(&[4, 1])).is_err()); // common factor
        assert!(RationalMap::new(&f5, p(&[]), p(&[4, 1])).is_err());
    }

    #[test]
    fn omega_3_1_lists_six_affine_maps() {
        let s = poly_space(3, 1);
        let got: Vec<_> = s.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().collect();
        let want: Vec<_> = [[0, 1], [1, 1], [2, 1], [0, 2], [1, 2], [2, 2]]
            .iter()
            .map(|c| SpaceMember::Polynomial(DensePolynomial::from_indices(c)))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn u_3_2_has_108_members() {
        let s = SpaceDescriptor::rationals(FieldSpec::prime(3).unwrap(), 2).unwrap();
        assert_eq!(s.cardinality(), BigUint::from(108u32));
        let members: HashSet<_> = s.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().collect();
        assert_eq!(members.len(), 108);
    }

    #[test]
    fn omega_cardinalities() {
        for p in [2u64, 3, 5, 7] {
            for d in 1..=3 {
                let s = poly_space(p, d);
                let members: HashSet<_> = s.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().collect();
                assert_eq!(BigUint::from(members.len()), s.cardinality());
                assert_eq!(members.len() as u64, p.pow(d as u32) * (p - 1));
            }
        }
    }

    #[test]
    fn u_cardinalities_small() {
        for (p, k) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
            for d in 1..=2 {
                let f = FieldSpec::new(p, k, None).unwrap();
                let s = SpaceDescriptor::rationals(f, d).unwrap();
                let n = s.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().count();
                assert_eq!(BigUint::from(n), s.cardinality(), "q={} d={d}", p.pow(k));
            }
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let s = poly_space(7, 3);
        assert!(matches!(s.enumerate(100), Err(Error::CapExceeded { .. })));
        assert!(SpaceDescriptor::polynomials(FieldSpec::prime(7).unwrap(), 0).is_err());
    }

    #[test]
    fn sub_ranges_partition_the_space() {
        let s = SpaceDescriptor::rationals(FieldSpec::prime(3).unwrap(), 2).unwrap();
        let n = s.candidate_count().unwrap();
        let whole: Vec<_> = s.members(0..n).collect();
        let mut pieces = Vec::new();
        for start in (0..n).step_by(37) {
            pieces.extend(s.members(start..(start + 37).min(n)));
        }
        assert_eq!(whole, pieces);
    }

    #[test]
    fn sampling_is_uniform_on_omega_3_1() {
        let s = poly_space(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 60_000;
        let mut counts: BTreeMap<DensePolynomial, u32> = BTreeMap::new();
        for _ in 0..draws {
            let SpaceMember::Polynomial(f) = s.sample(&mut rng) else { unreachable!() };
            *counts.entry(f).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let p = 1.0 / 6.0;
        let mean = draws as f64 * p;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for (f, &c) in &counts {
            assert!((c as f64 - mean).abs() < 3.0 * sd, "{f:?}: {c}");
        }
    }

    #[test]
    fn sampled_rationals_are_coprime_and_deterministic() {
        let f = FieldSpec::prime(3).unwrap();
        let s = SpaceDescriptor::rationals(f.clone(), 3).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let x = s.sample(&mut a);
            assert_eq!(x, s.sample(&mut b));
            let SpaceMember::Rational(r) = x else { unreachable!() };
            assert_eq!(mgcd(&f, r.numerator(), r.denominator()).unwrap(), DensePolynomial::one());
            assert_eq!(r.degree(), 3);
        }
    }

    #[test]
    fn extension_count_examples() {
        // a 2-cycle extended by cubics over F_5: 5 * 4
        let s = poly_space(5, 3);
        let sigma = PartialPermutation::new(vec![fe(1), fe(3)], vec![fe(3), fe(1)]).unwrap();
        assert_eq!(count_extensions_oracle(&s, &sigma, DEFAULT_ENUMERATION_CAP).unwrap(), 20);
        assert_eq!(extension_count_formula(5, 3, 2), Some(BigUint::from(20u32)));

        // ax + b fixing 0 over F_3: b = 0, a ∈ {1, 2}
        let s = poly_space(3, 1);
        let sigma = PartialPermutation::new(vec![fe(0)], vec![fe(0)]).unwrap();
        assert_eq!(count_extensions_oracle(&s, &sigma, DEFAULT_ENUMERATION_CAP).unwrap(), 2);

        // out of hypothesis: affine maps realising the 3-cycle 0 -> 1 -> 2 -> 0
        let sigma = PartialPermutation::new(vec![fe(0), fe(1), fe(2)], vec![fe(1), fe(2), fe(0)]).unwrap();
        assert_eq!(count_extensions_oracle(&s, &sigma, DEFAULT_ENUMERATION_CAP).unwrap(), 1);
        assert_eq!(extension_count_formula(3, 1, 3), None);
    }

    #[test]
    fn partial_permutation_validation() {
        assert!(PartialPermutation::new(vec![], vec![]).is_err());
        assert!(PartialPermutation::new(vec![fe(1), fe(1)], vec![fe(1), fe(1)]).is_err());
        assert!(PartialPermutation::new(vec![fe(1), fe(2)], vec![fe(1), fe(3)]).is_err());
        assert!(PartialPermutation::new(vec![fe(1)], vec![fe(1), fe(2)]).is_err());
    }

    #[test]
    fn monic_avoiding_examples() {
        assert_eq!(count_monic_avoiding_roots(5, 2, &[fe(3)]), BigUint::from(20u32));
        assert_eq!(count_monic_avoiding_roots(5, 2, &[]), BigUint::from(25u32));
        // monic linears x - c over F_3 avoiding roots {0, 1}: only x - 2
        assert_eq!(count_monic_avoiding_roots(3, 1, &[fe(0), fe(1)]), BigUint::one());
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(count_monic_avoiding_roots_oracle(&f3, 1, &[fe(0), fe(1)], 1 << 20).unwrap(), 1);
    }

    #[test]
    fn monic_avoiding_matches_oracle_exhaustively() {
        for (p, k) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1)] {
            let f = FieldSpec::new(p, k, None).unwrap();
            let q = f.order();
            for d in 0..=3usize {
                // every subset A of the field
                for mask in 0u64..(1 << q) {
                    let roots: Vec<_> = (0..q as u32).filter(|i| mask >> i & 1 == 1).map(fe).collect();
                    let oracle = count_monic_avoiding_roots_oracle(&f, d, &roots, 1 << 20).unwrap();
                    assert_eq!(
                        count_monic_avoiding_roots(q, d, &roots),
                        BigUint::from(oracle),
                        "q={q} d={d} A={roots:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn member_json_shapes() {
        let f5 = FieldSpec::prime(5).unwrap();
        let r = RationalMap::new(&f5, DensePolynomial::from_indices(&[1, 2]), DensePolynomial::from_indices(&[4, 1]))
            .unwrap();
        assert_eq!(serde_json::to_string(&SpaceMember::Rational(r)).unwrap(), r#"{"num":[1,2],"den":[4,1]}"#);
        let p = SpaceMember::Polynomial(DensePolynomial::from_indices(&[0, 4, 1]));
        assert_eq!(serde_json::to_string(&p).unwrap(), "[0,4,1]");
        let back: SpaceMember = serde_json::from_str("[0,4,1]").unwrap();
        assert_eq!(back, p);
    }
}
