//! Exact arithmetic in the coefficient ring Z/n.
//!
//! Residues are always stored in canonical form `0..n`. Elements carry their
//! modulus so that mixing rings is caught rather than silently reduced.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ring Z/n for some n >= 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct ModulusRing {
    modulus: u32,
}

impl ModulusRing {
    pub fn new(modulus: u32) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall(modulus as u64));
        }
        Ok(ModulusRing { modulus })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Reduces an arbitrary integer into the ring.
    pub fn elem(&self, value: i64) -> RingElement {
        RingElement {
            value: value.rem_euclid(self.modulus as i64) as u32,
            modulus: self.modulus,
        }
    }

    pub fn zero(&self) -> RingElement {
        self.elem(0)
    }

    pub fn one(&self) -> RingElement {
        self.elem(1)
    }

    /// All units in increasing residue order.
    pub fn units(&self) -> Vec<RingElement> {
        (1..self.modulus)
            .map(|v| self.elem(v as i64))
            .filter(RingElement::is_unit)
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.modulus).map(|v| self.elem(v as i64))
    }
}

impl TryFrom<u32> for ModulusRing {
    type Error = Error;

    fn try_from(modulus: u32) -> Result<Self> {
        ModulusRing::new(modulus)
    }
}

impl From<ModulusRing> for u32 {
    fn from(ring: ModulusRing) -> u32 {
        ring.modulus
    }
}

impl fmt::Display for ModulusRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.modulus)
    }
}

/// A residue class in Z/n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    value: u32,
    modulus: u32,
}

impl RingElement {
    /// Canonical residue in `0..modulus`.
    #[inline]
    pub fn value(&self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn ring(&self) -> ModulusRing {
        ModulusRing {
            modulus: self.modulus,
        }
    }

    fn check(&self, other: &RingElement) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    pub fn checked_add(self, other: RingElement) -> Result<RingElement> {
        self.check(&other)?;
        Ok(RingElement {
            value: ((self.value as u64 + other.value as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        })
    }

    pub fn checked_sub(self, other: RingElement) -> Result<RingElement> {
        self.check(&other)?;
        Ok(RingElement {
            value: ((self.value as u64 + (self.modulus - other.value) as u64) % self.modulus as u64)
                as u32,
            modulus: self.modulus,
        })
    }

    pub fn checked_mul(self, other: RingElement) -> Result<RingElement> {
        self.check(&other)?;
        Ok(RingElement {
            value: ((self.value as u64 * other.value as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        })
    }

    pub fn is_unit(&self) -> bool {
        gcd(self.value as u64, self.modulus as u64) == 1
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self) -> Result<RingElement> {
        let (g, x, _) = extended_gcd(self.value as i64, self.modulus as i64);
        if g != 1 {
            return Err(Error::NonUnit {
                value: self.value,
                modulus: self.modulus,
            });
        }
        Ok(self.ring().elem(x))
    }

    /// Signed integer power. Negative exponents require a unit.
    pub fn pow(self, exponent: i64) -> Result<RingElement> {
        let base = if exponent < 0 { self.inv()? } else { self };
        let mut e = exponent.unsigned_abs();
        let m = self.modulus as u64;
        let mut acc = 1 % m;
        let mut b = base.value as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        Ok(RingElement {
            value: acc as u32,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on a modulus mismatch; use the checked_* methods when
// the operands may come from different rings.
impl Add for RingElement {
    type Output = RingElement;

    fn add(self, rhs: RingElement) -> RingElement {
        self.checked_add(rhs)
            .expect("ring element modulus mismatch")
    }
}

impl Sub for RingElement {
    type Output = RingElement;

    fn sub(self, rhs: RingElement) -> RingElement {
        self.checked_sub(rhs)
            .expect("ring element modulus mismatch")
    }
}

impl Mul for RingElement {
    type Output = RingElement;

    fn mul(self, rhs: RingElement) -> RingElement {
        self.checked_mul(rhs)
            .expect("ring element modulus mismatch")
    }
}

impl Neg for RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        RingElement {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}
