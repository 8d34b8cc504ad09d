//! Arithmetic in the local ring `Z/2^mZ`.
//!
//! Residues are always stored as their canonical representative in
//! `[0, 2^m)`, so equality and hashing are structural.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported exponent. Products of two residues fit in a `u64`.
pub const MAX_POWER: u32 = 30;

/// The exponent `m` of the modulus `2^m`, with `1 <= m <= 30`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Power(u32);

impl Power {
    pub fn new(m: u32) -> Result<Self> {
        if (1..=MAX_POWER).contains(&m) {
            Ok(Power(m))
        } else {
            Err(Error::InvalidPower(m))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn modulus(self) -> u64 {
        1u64 << self.0
    }

    /// Bit mask selecting the canonical representative.
    pub fn mask(self) -> u32 {
        ((1u64 << self.0) - 1) as u32
    }

    /// `2^(m-1)`, the target value of every pairing in a symplectic system.
    pub fn half(self) -> u32 {
        1u32 << (self.0 - 1)
    }

    /// Canonical representative of `n` modulo `2^m`.
    pub fn reduce(self, n: i128) -> u32 {
        // Two's complement truncation is reduction modulo a power of two.
        (n as u128 as u64 & self.mask() as u64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        a.wrapping_add(b) & self.mask()
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        a.wrapping_sub(b) & self.mask()
    }

    pub fn neg(self, a: u32) -> u32 {
        a.wrapping_neg() & self.mask()
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) & self.mask() as u64) as u32
    }

    /// Inverse of an odd residue by Newton iteration (`x <- x(2 - ax)`),
    /// which doubles the number of correct low bits each round.
    pub fn inverse(self, a: u32) -> Result<u32> {
        if a & 1 == 0 {
            return Err(Error::NotUnit(a & self.mask(), self.0));
        }
        let a = a as u64;
        let mut x: u64 = 1;
        for _ in 0..5 {
            x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x)));
        }
        Ok((x & self.mask() as u64) as u32)
    }

    /// The residue `-1`.
    pub fn minus_one(self) -> u32 {
        self.mask()
    }
}

impl TryFrom<u32> for Power {
    type Error = Error;

    fn try_from(m: u32) -> Result<Self> {
        Power::new(m)
    }
}

impl From<Power> for u32 {
    fn from(p: Power) -> u32 {
        p.0
    }
}

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.0)
    }
}

/// 2-adic valuation of a residue. Zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// An element of `Z/2^mZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u32,
    power: Power,
}

// Fallible because operands may live in different rings, so the operator
// traits do not fit.
#[allow(clippy::should_implement_trait)]
impl Residue {
    pub fn reduce(n: i128, power: Power) -> Self {
        Residue {
            value: power.reduce(n),
            power,
        }
    }

    pub fn zero(power: Power) -> Self {
        Residue { value: 0, power }
    }

    pub fn one(power: Power) -> Self {
        Residue { value: 1, power }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn power(self) -> Power {
        self.power
    }

    fn check(self, other: Residue) -> Result<Power> {
        if self.power == other.power {
            Ok(self.power)
        } else {
            Err(Error::PowerMismatch(self.power.get(), other.power.get()))
        }
    }

    pub fn add(self, other: Residue) -> Result<Residue> {
        let p = self.check(other)?;
        Ok(Residue {
            value: p.add(self.value, other.value),
            power: p,
        })
    }

    pub fn sub(self, other: Residue) -> Result<Residue> {
        let p = self.check(other)?;
        Ok(Residue {
            value: p.sub(self.value, other.value),
            power: p,
        })
    }

    pub fn mul(self, other: Residue) -> Result<Residue> {
        let p = self.check(other)?;
        Ok(Residue {
            value: p.mul(self.value, other.value),
            power: p,
        })
    }

    pub fn neg(self) -> Residue {
        Residue {
            value: self.power.neg(self.value),
            power: self.power,
        }
    }

    /// Units of `Z/2^mZ` are exactly the odd residues.
    pub fn is_unit(self) -> bool {
        self.value & 1 == 1
    }

    pub fn inverse(self) -> Result<Residue> {
        Ok(Residue {
            value: self.power.inverse(self.value)?,
            power: self.power,
        })
    }

    pub fn valuation(self) -> Valuation {
        valuation(self.value)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.power)
    }
}

/// Valuation of a canonical representative.
pub fn valuation(value: u32) -> Valuation {
    if value == 0 {
        Valuation::Infinite
    } else {
        Valuation::Finite(value.trailing_zeros())
    }
}
