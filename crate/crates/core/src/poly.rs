//! Dense univariate polynomials over F_q.
//!
//! A polynomial is a coefficient vector, constant term first, with no
//! trailing zeros; the zero polynomial is the empty vector. The field is
//! passed to every operation rather than stored, so polynomials stay small
//! and cheap to enumerate in bulk.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<FieldElement>", into = "Vec<FieldElement>")]
pub struct DensePolynomial {
    coeffs: Vec<FieldElement>,
}

impl From<Vec<FieldElement>> for DensePolynomial {
    fn from(coeffs: Vec<FieldElement>) -> Self {
        Self::new(coeffs)
    }
}

impl From<DensePolynomial> for Vec<FieldElement> {
    fn from(p: DensePolynomial) -> Self {
        p.coeffs
    }
}

impl DensePolynomial {
    /// Builds a polynomial from coefficients (constant term first), dropping
    /// trailing zeros.
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePolynomial { coeffs }
    }

    pub fn from_indices(indices: &[u32]) -> Self {
        Self::new(indices.iter().copied().map(FieldElement).collect())
    }

    pub fn zero() -> Self {
        DensePolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(FieldElement::ONE)
    }

    /// The monomial x.
    pub fn x() -> Self {
        DensePolynomial { coeffs: vec![FieldElement::ZERO, FieldElement::ONE] }
    }

    /// x - a
    pub fn linear_root(field: &FieldSpec, a: FieldElement) -> Self {
        DensePolynomial { coeffs: vec![field.neg(a), FieldElement::ONE] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn leading_coefficient(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient() == Some(FieldElement::ONE)
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &FieldSpec, x: FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn add(&self, field: &FieldSpec, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).copied().unwrap_or_default();
                    let b = other.coeffs.get(i).copied().unwrap_or_default();
                    field.add(a, b)
                })
                .collect(),
        )
    }

    pub fn sub(&self, field: &FieldSpec, other: &Self) -> Self {
        self.add(field, &other.scale(field, field.neg(FieldElement::ONE)))
    }

    pub fn scale(&self, field: &FieldSpec, c: FieldElement) -> Self {
        Self::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, field: &FieldSpec, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, field: &FieldSpec, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = field.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let factor = field.mul(rem[i], lead_inv);
            if factor.is_zero() {
                continue;
            }
            quot[i - dd] = factor;
            for (j, &c) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = field.sub(rem[idx], field.mul(factor, c));
            }
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Scales a nonzero polynomial to leading coefficient one.
    pub fn make_monic(&self, field: &FieldSpec) -> Result<Self> {
        let lead = self.leading_coefficient().ok_or(Error::DivisionByZero)?;
        Ok(self.scale(field, field.inv(lead)?))
    }
}

/// Greatest monic common divisor, by the Euclidean algorithm.
pub fn mgcd(field: &FieldSpec, a: &DensePolynomial, b: &DensePolynomial) -> Result<DensePolynomial> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem(field, &y)?;
        x = y;
        y = r;
    }
    x.make_monic(field)
}

/// The unique polynomial of degree below `points.len()` through the given
/// points, whose x-values must be distinct.
pub fn lagrange_interpolate(field: &FieldSpec, points: &[(FieldElement, FieldElement)]) -> Result<DensePolynomial> {
    if points.is_empty() {
        return Err(Error::EmptyInterpolation);
    }
    let mut xs: Vec<_> = points.iter().map(|&(x, _)| x).collect();
    xs.sort_unstable();
    if let Some(w) = xs.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateNode(w[0].0));
    }

    // master(x) = prod (x - x_j); basis_i = master / (x - x_i)
    let master = points
        .iter()
        .fold(DensePolynomial::one(), |acc, &(xj, _)| acc.mul(field, &DensePolynomial::linear_root(field, xj)));
    let mut out = DensePolynomial::zero();
    for &(xi, yi) in points {
        if yi.is_zero() {
            continue;
        }
        let (basis, _) = master.div_rem(field, &DensePolynomial::linear_root(field, xi))?;
        let denom = basis.eval(field, xi);
        let weight = field.div(yi, denom)?;
        out = out.add(field, &basis.scale(field, weight));
    }
    Ok(out)
}
