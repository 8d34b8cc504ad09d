//! Symplectic systems and their verification.
//!
//! Over `Z` a system carries an intersection value `k` and every pair of
//! distinct elements must pair to `+k` or `-k`. Over `Z/2^mZ` every pair must
//! pair to `2^(m-1)`. Because `2^(m-1) = -2^(m-1) (mod 2^m)` the residue
//! condition is a single congruence; no absolute value is needed.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::Power;
use crate::vector::{power_of_k, IntVector, ResidueVector};

/// First pair of elements violating the system condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub first: usize,
    pub second: usize,
    pub pairing: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub valid: bool,
    pub violation: Option<Violation>,
}

impl Verdict {
    fn from_violation(violation: Option<Violation>) -> Self {
        Verdict {
            valid: violation.is_none(),
            violation,
        }
    }
}

/// A finite set of integer vectors in genus `g`, kept in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSystem {
    genus: usize,
    k: Option<u64>,
    elements: Vec<IntVector>,
}

impl IntSystem {
    pub fn new(genus: usize, k: Option<u64>) -> Self {
        IntSystem {
            genus,
            k,
            elements: Vec::new(),
        }
    }

    pub fn from_elements(genus: usize, k: Option<u64>, elements: Vec<IntVector>) -> Result<Self> {
        let mut s = Self::new(genus, k);
        for e in elements {
            s.insert(e)?;
        }
        Ok(s)
    }

    /// Appends an element; duplicates and genus mismatches are rejected.
    pub fn insert(&mut self, v: IntVector) -> Result<()> {
        if v.genus() != self.genus {
            return Err(Error::GenusMismatch(self.genus, v.genus()));
        }
        if let Some(i) = self.elements.iter().position(|e| *e == v) {
            return Err(Error::Duplicate(i));
        }
        self.elements.push(v);
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn k(&self) -> Option<u64> {
        self.k
    }

    pub fn elements(&self) -> &[IntVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn all_primitive(&self) -> bool {
        self.elements.iter().all(IntVector::is_primitive)
    }

    /// Subsystem with the given element indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<IntSystem> {
        let elements = indices
            .iter()
            .map(|&i| {
                self.elements
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::usage(format!("index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        IntSystem::from_elements(self.genus, self.k, elements)
    }

    /// Checks `|<u, v>| = k` for every pair of distinct elements.
    ///
    /// Fails only when the system carries no `k`.
    pub fn check(&self) -> Result<Verdict> {
        let k = self
            .k
            .ok_or_else(|| Error::usage("integer system has no intersection value k"))?
            as i128;
        for (i, u) in self.elements.iter().enumerate() {
            for (j, v) in self.elements.iter().enumerate().skip(i + 1) {
                let p = u.pairing(v)?;
                if p.abs() != k {
                    return Ok(Verdict::from_violation(Some(Violation {
                        first: i,
                        second: j,
                        pairing: p,
                    })));
                }
            }
        }
        Ok(Verdict::from_violation(None))
    }

    /// Coordinatewise reduction modulo `2^m`, where `m` must be the power of `k`.
    pub fn reduce_mod(&self, power: Power) -> Result<ResidueSystem> {
        let k = self
            .k
            .ok_or_else(|| Error::usage("integer system has no intersection value k"))?;
        let expected = power_of_k(k)?;
        if expected != power {
            return Err(Error::usage(format!(
                "k = {k} has power {}, not {}",
                expected.get(),
                power.get()
            )));
        }
        let mut out = ResidueSystem::new(self.genus, power);
        out.k = Some(k);
        for e in &self.elements {
            out.insert(e.reduce(power))?;
        }
        Ok(out)
    }
}

/// A finite set of residue vectors in `(Z/2^mZ)^{2g}`, kept in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSystem {
    genus: usize,
    power: Power,
    k: Option<u64>,
    elements: Vec<ResidueVector>,
    seen: HashSet<ResidueVector>,
}

impl ResidueSystem {
    pub fn new(genus: usize, power: Power) -> Self {
        ResidueSystem {
            genus,
            power,
            k: None,
            elements: Vec::new(),
            seen: HashSet::new(),
        }
    }

    pub fn from_elements(genus: usize, power: Power, elements: Vec<ResidueVector>) -> Result<Self> {
        let mut s = Self::new(genus, power);
        for e in elements {
            s.insert(e)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, v: ResidueVector) -> Result<()> {
        if v.genus() != self.genus {
            return Err(Error::GenusMismatch(self.genus, v.genus()));
        }
        if v.power() != self.power {
            return Err(Error::PowerMismatch(self.power.get(), v.power().get()));
        }
        if self.seen.contains(&v) {
            let i = self.elements.iter().position(|e| *e == v).unwrap_or(0);
            return Err(Error::Duplicate(i));
        }
        self.seen.insert(v.clone());
        self.elements.push(v);
        Ok(())
    }

    pub fn with_k(mut self, k: Option<u64>) -> Self {
        self.k = k;
        self
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn power(&self) -> Power {
        self.power
    }

    pub fn k(&self) -> Option<u64> {
        self.k
    }

    pub fn elements(&self) -> &[ResidueVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: &ResidueVector) -> bool {
        self.seen.contains(v)
    }

    pub fn all_primitive(&self) -> bool {
        self.elements.iter().all(ResidueVector::is_primitive)
    }

    pub fn has_primitive(&self) -> bool {
        self.elements.iter().any(ResidueVector::is_primitive)
    }

    /// Checks `<u, v> = 2^(m-1) (mod 2^m)` for every pair of distinct elements.
    pub fn check(&self) -> Verdict {
        let half = self.power.half();
        for (i, u) in self.elements.iter().enumerate() {
            for (j, v) in self.elements.iter().enumerate().skip(i + 1) {
                // Genus and power agree by construction.
                let p = u.pairing(v).expect("elements share genus and power").value();
                if p != half {
                    return Verdict::from_violation(Some(Violation {
                        first: i,
                        second: j,
                        pairing: p as i128,
                    }));
                }
            }
        }
        Verdict::from_violation(None)
    }
}

/// Either kind of system; this is what the JSON schema describes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SympSystem {
    Integer(IntSystem),
    Residue(ResidueSystem),
}

impl SympSystem {
    pub fn genus(&self) -> usize {
        match self {
            SympSystem::Integer(s) => s.genus(),
            SympSystem::Residue(s) => s.genus(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SympSystem::Integer(s) => s.len(),
            SympSystem::Residue(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn check(&self) -> Result<Verdict> {
        match self {
            SympSystem::Integer(s) => s.check(),
            SympSystem::Residue(s) => Ok(s.check()),
        }
    }

    pub fn to_json(&self) -> SystemJson {
        SystemJson::from(self)
    }
}

impl From<IntSystem> for SympSystem {
    fn from(s: IntSystem) -> Self {
        SympSystem::Integer(s)
    }
}

impl From<ResidueSystem> for SympSystem {
    fn from(s: ResidueSystem) -> Self {
        SympSystem::Residue(s)
    }
}

/// Serialized form of a system.
///
/// `power` present means residue mode; absent means integer mode.
/// `elements` are arrays of `2 * genus` integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemJson {
    pub genus: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    pub elements: Vec<Vec<i64>>,
}

impl From<&SympSystem> for SystemJson {
    fn from(s: &SympSystem) -> Self {
        match s {
            SympSystem::Integer(s) => SystemJson {
                genus: s.genus,
                power: None,
                k: s.k,
                elements: s.elements.iter().map(|e| e.coords().to_vec()).collect(),
            },
            SympSystem::Residue(s) => SystemJson {
                genus: s.genus,
                power: Some(s.power.get()),
                k: s.k,
                elements: s.elements.iter().map(ResidueVector::to_i64).collect(),
            },
        }
    }
}

impl TryFrom<SystemJson> for SympSystem {
    type Error = Error;

    fn try_from(j: SystemJson) -> Result<Self> {
        for e in &j.elements {
            if e.len() != 2 * j.genus {
                return Err(Error::usage(format!(
                    "element of length {} in genus {}",
                    e.len(),
                    j.genus
                )));
            }
        }
        match j.power {
            None => {
                let elements = j
                    .elements
                    .into_iter()
                    .map(IntVector::new)
                    .collect::<Result<Vec<_>>>()?;
                Ok(IntSystem::from_elements(j.genus, j.k, elements)?.into())
            }
            Some(m) => {
                let power = Power::new(m)?;
                for e in &j.elements {
                    if e.iter().any(|&c| c < 0 || c as u64 >= power.modulus()) {
                        return Err(Error::usage(format!(
                            "residue coordinates must lie in [0, 2^{m})"
                        )));
                    }
                }
                let elements = j
                    .elements
                    .iter()
                    .map(|e| ResidueVector::new(e, power))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ResidueSystem::from_elements(j.genus, power, elements)?
                    .with_k(j.k)
                    .into())
            }
        }
    }
}

impl Serialize for SympSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SympSystem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = SystemJson::deserialize(deserializer)?;
        SympSystem::try_from(j).map_err(serde::de::Error::custom)
    }
}
