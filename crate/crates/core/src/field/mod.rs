//! Exact arithmetic in F_q, q = p^k.
//!
//! Elements are identified by a single integer index: the element with
//! coefficient vector (c_0, ..., c_{k-1}) over F_p (c_0 the constant term)
//! has index sum c_i p^i. Index 0 is zero and index 1 is one. Every
//! serialized form uses the index.
//!
//! Extension fields are built as F_p[x]/(m) for a monic irreducible m of
//! degree k. When no modulus is supplied the lexicographically smallest one
//! is chosen, comparing coefficient vectors from the constant term up.
//!
//! Multiplication and inversion go through discrete log/antilog tables that
//! are built once from [`FieldSpec::mul_by_reduction`], the schoolbook
//! multiply-and-reduce path.

mod fp_poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fp_poly::is_irreducible;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Deterministic trial-division primality check.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of F_q, by canonical index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct FieldInner {
    p: u64,
    k: u32,
    q: u64,
    modulus: Option<Vec<u64>>,
    /// p^i for i in 0..k
    place: Vec<u64>,
    /// exp[i] = g^i for a fixed primitive element g, i in 0..q-1
    exp: Vec<u32>,
    /// log[a] for a != 0; log[0] is unused
    log: Vec<u32>,
}

/// A validated description of F_q. Cheap to clone and safe to share.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("k", &self.inner.k)
            .field("modulus", &self.inner.modulus)
            .field("q", &self.inner.q)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.k == other.inner.k && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds F_{p^k}. `modulus`, when given, is the coefficient vector
    /// (constant term first, length k+1) of a monic irreducible of degree k.
    pub fn new(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroExtensionDegree);
        }
        let q = p.checked_pow(k).filter(|&q| q <= MAX_FIELD_ORDER).ok_or(Error::FieldTooLarge { p, k })?;

        let modulus = match (k, modulus) {
            (1, None) => None,
            (1, Some(_)) => {
                return Err(Error::InvalidModulus("a prime field takes no modulus".into()));
            }
            (_, Some(m)) => {
                if m.len() != k as usize + 1 {
                    return Err(Error::InvalidModulus(format!("expected {} coefficients, got {}", k + 1, m.len())));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus(format!("coefficients must be below {p}")));
                }
                if m[k as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !is_irreducible(p, m)? {
                    return Err(Error::InvalidModulus(format!("{m:?} is reducible over F_{p}")));
                }
                Some(m.to_vec())
            }
            (_, None) => Some(smallest_irreducible(p, k)),
        };

        let place = (0..k).map(|i| p.pow(i)).collect();
        let mut inner = FieldInner { p, k, q, modulus, place, exp: Vec::new(), log: Vec::new() };
        build_tables(&mut inner);
        Ok(FieldSpec { inner: Arc::new(inner) })
    }

    /// Shorthand for the prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.inner.k
    }

    pub fn order(&self) -> u64 {
        self.inner.q
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.inner.modulus.as_deref()
    }

    /// Human-readable modulus, e.g. `x^2 + x + 1`.
    pub fn modulus_string(&self) -> Option<String> {
        self.modulus().map(|m| {
            let terms: Vec<String> = m
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| {
                    let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
                    match i {
                        0 => coef,
                        1 => format!("{coef}x"),
                        _ => format!("{coef}x^{i}"),
                    }
                })
                .collect();
            terms.join(" + ")
        })
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index >= self.inner.q {
            return Err(Error::ElementOutOfRange { index, order: self.inner.q });
        }
        Ok(FieldElement(index as u32))
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.q as u32).map(FieldElement)
    }

    /// Base-p coefficient vector of length k, constant term first.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u64> {
        let p = self.inner.p;
        let mut x = a.0 as u64;
        (0..self.inner.k)
            .map(|_| {
                let c = x % p;
                x /= p;
                c
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.inner.k as usize || coeffs.iter().any(|&c| c >= self.inner.p) {
            return Err(Error::OutOfRange(format!(
                "{coeffs:?} is not a coefficient vector over F_{} of length {}",
                self.inner.p, self.inner.k
            )));
        }
        Ok(FieldElement(coeffs.iter().zip(&self.inner.place).map(|(c, w)| c * w).sum::<u64>() as u32))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.k == 1 {
            return FieldElement(((a.0 as u64 + b.0 as u64) % p) as u32);
        }
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out) = (a.0 as u64, b.0 as u64, 0u64);
        for &w in &self.inner.place {
            out += ((x % p + y % p) % p) * w;
            x /= p;
            y /= p;
        }
        FieldElement(out as u32)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.k == 1 {
            return FieldElement(((p - a.0 as u64) % p) as u32);
        }
        if p == 2 {
            return a;
        }
        let (mut x, mut out) = (a.0 as u64, 0u64);
        for &w in &self.inner.place {
            out += ((p - x % p) % p) * w;
            x /= p;
        }
        FieldElement(out as u32)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.inner.q - 1;
        let e = (self.inner.log[a.0 as usize] as u64 + self.inner.log[b.0 as usize] as u64) % n;
        FieldElement(self.inner.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::InverseOfZero);
        }
        let n = self.inner.q - 1;
        let e = (n - self.inner.log[a.0 as usize] as u64) % n;
        Ok(FieldElement(self.inner.exp[e as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e, with 0^0 = 1.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.inner.q - 1;
        let l = self.inner.log[a.0 as usize] as u128 * (e % n) as u128 % n as u128;
        FieldElement(self.inner.exp[l as usize])
    }

    /// Multiplication by schoolbook product of coefficient vectors followed
    /// by reduction modulo the field modulus. Independent of the log tables.
    pub fn mul_by_reduction(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        mul_reduce(&self.inner, a.0 as u64, b.0 as u64)
    }
}

fn decode(inner: &FieldInner, mut x: u64) -> Vec<u64> {
    (0..inner.k)
        .map(|_| {
            let c = x % inner.p;
            x /= inner.p;
            c
        })
        .collect()
}

fn mul_reduce(inner: &FieldInner, a: u64, b: u64) -> FieldElement {
    let p = inner.p;
    let Some(m) = &inner.modulus else {
        return FieldElement((a * b % p) as u32);
    };
    let (da, db) = (decode(inner, a), decode(inner, b));
    let mut prod = vec![0u64; 2 * inner.k as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let r = fp_poly::rem(&prod, m, p);
    FieldElement(r.iter().zip(&inner.place).map(|(c, w)| c * w).sum::<u64>() as u32)
}

fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for t in 0..count {
        // c_0 is the most significant digit of t, so ascending t walks the
        // coefficient vectors in lexicographic order from the constant term.
        let mut f: Vec<u64> = (0..k).map(|i| (t / p.pow(k - 1 - i)) % p).collect();
        f.push(1);
        if is_irreducible(p, &f).expect("candidate is monic over a prime") {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over every prime field")
}

fn build_tables(inner: &mut FieldInner) {
    let q = inner.q;
    let n = q - 1;
    let mut exp = vec![0u32; n as usize];
    let mut log = vec![0u32; q as usize];
    if n == 1 {
        exp[0] = 1;
        log[1] = 0;
        inner.exp = exp;
        inner.log = log;
        return;
    }
    let factors = {
        let mut fs = Vec::new();
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                fs.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            fs.push(m);
        }
        fs
    };
    let slow_pow = |a: u64, mut e: u64| {
        let mut acc = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_reduce(inner, acc, b).0 as u64;
            }
            b = mul_reduce(inner, b, b).0 as u64;
            e >>= 1;
        }
        acc
    };
    let generator = (2..q)
        .find(|&g| factors.iter().all(|&r| slow_pow(g, n / r) != 1))
        .expect("the multiplicative group of a finite field is cyclic");
    let mut x = 1u64;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = x as u32;
        log[x as usize] = i as u32;
        x = mul_reduce(inner, x, generator).0 as u64;
    }
    debug_assert_eq!(x, 1);
    inner.exp = exp;
    inner.log = log;
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    p: u64,
    k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<u64>>,
    q: u64,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldSpecRepr { p: self.inner.p, k: self.inner.k, modulus: self.inner.modulus.clone(), q: self.inner.q }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FieldSpecRepr::deserialize(d)?;
        let spec = FieldSpec::new(r.p, r.k, r.modulus.as_deref()).map_err(serde::de::Error::custom)?;
        if spec.order() != r.q {
            return Err(serde::de::Error::custom(format!("q = {} does not match p^k = {}", r.q, spec.order())));
        }
        Ok(spec)
    }
}
