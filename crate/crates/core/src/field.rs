//! Arithmetic in GF(2^b) using a polynomial basis.
//!
//! Elements are stored as the bit pattern of their coefficient vector, bit `t`
//! holding the coefficient of `x^t`. The reduction polynomial is the
//! lowest-bitmask irreducible polynomial of the requested degree, so a field
//! context is a pure function of `b`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} is outside 1..={MAX_DEGREE}")]
    DegreeOutOfRange(u32),
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("modulus {0} must be odd and at least 3")]
    BadModulus(u64),
    #[error("{m} does not divide 2^{degree} - 1")]
    NoSubgroup { m: u64, degree: u32 },
    #[error("element {0:#x} is not a member of the field")]
    NotAnElement(u64),
}

/// An element of GF(2^b). Only meaningful together with its [`FieldCtx`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// GF(2^b) with a fixed irreducible reduction polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldCtx {
    degree: u32,
    /// Full reduction polynomial including the `x^degree` term.
    modulus: u64,
}

impl FieldCtx {
    /// Builds GF(2^b) reduced by the lowest-bitmask irreducible polynomial of degree `b`.
    pub fn new(degree: u32) -> Result<Self, FieldError> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(FieldError::DegreeOutOfRange(degree));
        }
        let lo = 1u64 << degree;
        let modulus =
            (lo..lo << 1).find(|&p| is_irreducible(p)).expect("an irreducible polynomial exists in every degree");
        Ok(FieldCtx { degree, modulus })
    }

    /// Extension degree `b`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Reduction polynomial as a bitmask, including the leading term.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of field elements, `2^b`.
    pub fn order(&self) -> u64 {
        1u64 << self.degree
    }

    pub fn elem(&self, bits: u64) -> Result<FieldElem, FieldError> {
        if bits >= self.order() {
            return Err(FieldError::NotAnElement(bits));
        }
        Ok(FieldElem(bits as u32))
    }

    /// The class of `x` (the generator of the polynomial basis). Equals 1 in GF(2).
    pub fn x(&self) -> FieldElem {
        if self.degree == 1 {
            FieldElem::ONE
        } else {
            FieldElem(2)
        }
    }

    /// Iterates over all field elements in bitmask order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order()).map(|b| FieldElem(b as u32))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(0..self.order()) as u32)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let product = clmul(a.0 as u64, b.0 as u64);
        FieldElem(poly_rem(product, self.modulus) as u32)
    }

    pub fn pow(&self, base: FieldElem, mut exp: u64) -> FieldElem {
        let mut acc = FieldElem::ONE;
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::InverseOfZero);
        }
        // Multiplicative group has order 2^b - 1.
        Ok(self.pow(a, self.order() - 2))
    }

    /// `g^e` for an element `g` of multiplicative order dividing `order`.
    /// Negative exponents map to `order - (|e| mod order)`.
    pub fn pow_in_subgroup(&self, g: FieldElem, exp: i64, order: u64) -> FieldElem {
        let reduced = exp.rem_euclid(order as i64) as u64;
        self.pow(g, reduced)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let group = self.order() - 1;
        let mut ord = group;
        for p in prime_factors(group) {
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == FieldElem::ONE {
                ord /= p;
            }
        }
        Some(ord)
    }

    /// Smallest-bitmask element generating a multiplicative subgroup of size `m`.
    pub fn subgroup_generator(&self, m: u64) -> Result<FieldElem, FieldError> {
        let group = self.order() - 1;
        if m == 0 || !group.is_multiple_of(m) {
            return Err(FieldError::NoSubgroup { m, degree: self.degree });
        }
        let primes = prime_factors(m);
        self.elements()
            .skip(1)
            .find(|&g| self.pow(g, m) == FieldElem::ONE && primes.iter().all(|&p| self.pow(g, m / p) != FieldElem::ONE))
            .ok_or(FieldError::NoSubgroup { m, degree: self.degree })
    }
}

/// Smallest `t >= 1` with `2^t = 1 (mod m)`, for odd `m >= 3`.
pub fn order_of_two_mod(m: u64) -> Result<u32, FieldError> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(FieldError::BadModulus(m));
    }
    let mut t = 1u32;
    let mut pow = 2 % m;
    while pow != 1 {
        pow = ((pow as u128 * 2) % m as u128) as u64;
        t += 1;
    }
    Ok(t)
}

/// Carry-less product of two polynomials of degree < 32.
fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(p: u64) -> bool {
    let deg = poly_degree(p);
    if deg < 1 {
        return false;
    }
    for d in 1..=(deg / 2) {
        for divisor in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(p, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
