//! Coordinate vectors of length `2g` and the standard symplectic pairing.
//!
//! Coordinates `0..g` hold the `alpha_i` (first-half) classes and `g..2g` the
//! `beta_i` classes, so that `<e_i, e_{g+i}> = +1`. The pairing is `u^T J v`
//! with `J = [[0, I], [-I, 0]]`; [`pairing_raw`] is the single place where the
//! sign convention lives.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::{valuation, Power, Residue, Valuation};

/// A vector in `Z^{2g}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntVector {
    coords: Vec<i64>,
}

impl IntVector {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::OddLength(coords.len()));
        }
        Ok(IntVector { coords })
    }

    pub fn zero(genus: usize) -> Self {
        IntVector {
            coords: vec![0; 2 * genus],
        }
    }

    /// The basis vector `e_{index+1}` (zero-based index).
    pub fn basis(genus: usize, index: usize) -> Self {
        let mut v = Self::zero(genus);
        v.coords[index] = 1;
        v
    }

    pub fn genus(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [i64] {
        &mut self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn pairing(&self, other: &IntVector) -> Result<i128> {
        if self.genus() != other.genus() {
            return Err(Error::GenusMismatch(self.genus(), other.genus()));
        }
        let g = self.genus();
        let (a, b) = (&self.coords, &other.coords);
        Ok((0..g)
            .map(|i| a[i] as i128 * b[g + i] as i128 - a[g + i] as i128 * b[i] as i128)
            .sum())
    }

    /// Coordinate gcd equals one. The zero vector is not primitive.
    pub fn is_primitive(&self) -> bool {
        self.coords.iter().fold(0u64, |acc, &c| acc.gcd(&c.unsigned_abs())) == 1
    }

    pub fn reduce(&self, power: Power) -> ResidueVector {
        ResidueVector {
            power,
            coords: self.coords.iter().map(|&c| power.reduce(c as i128)).collect(),
        }
    }

    /// Embed into a larger genus, padding both halves with zeros.
    pub fn embed(&self, genus: usize) -> Result<IntVector> {
        let g = self.genus();
        if genus < g {
            return Err(Error::usage(format!("cannot embed genus {g} into genus {genus}")));
        }
        let mut coords = vec![0; 2 * genus];
        coords[..g].copy_from_slice(&self.coords[..g]);
        coords[genus..genus + g].copy_from_slice(&self.coords[g..]);
        Ok(IntVector { coords })
    }
}

impl TryFrom<Vec<i64>> for IntVector {
    type Error = Error;

    fn try_from(coords: Vec<i64>) -> Result<Self> {
        IntVector::new(coords)
    }
}

impl From<IntVector> for Vec<i64> {
    fn from(v: IntVector) -> Self {
        v.coords
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

/// A vector in `(Z/2^mZ)^{2g}` with canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueVector {
    power: Power,
    coords: Vec<u32>,
}

impl ResidueVector {
    /// Builds a vector from arbitrary integers, reducing each coordinate.
    pub fn new(coords: &[i64], power: Power) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::OddLength(coords.len()));
        }
        Ok(ResidueVector {
            power,
            coords: coords.iter().map(|&c| power.reduce(c as i128)).collect(),
        })
    }

    /// Builds a vector from raw values; each is reduced to canonical form.
    pub fn from_raw(mut coords: Vec<u32>, power: Power) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::OddLength(coords.len()));
        }
        let mask = power.mask();
        coords.iter_mut().for_each(|c| *c &= mask);
        Ok(ResidueVector { power, coords })
    }

    pub fn zero(genus: usize, power: Power) -> Self {
        ResidueVector {
            power,
            coords: vec![0; 2 * genus],
        }
    }

    pub fn basis(genus: usize, index: usize, power: Power) -> Self {
        let mut v = Self::zero(genus, power);
        v.coords[index] = 1;
        v
    }

    pub fn genus(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn power(&self) -> Power {
        self.power
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn get(&self, index: usize) -> Residue {
        Residue::reduce(self.coords[index] as i128, self.power)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn compatible(&self, other: &ResidueVector) -> Result<()> {
        if self.power != other.power {
            return Err(Error::PowerMismatch(self.power.get(), other.power.get()));
        }
        if self.genus() != other.genus() {
            return Err(Error::GenusMismatch(self.genus(), other.genus()));
        }
        Ok(())
    }

    pub fn pairing(&self, other: &ResidueVector) -> Result<Residue> {
        self.compatible(other)?;
        Ok(Residue::reduce(
            pairing_raw(&self.coords, &other.coords, self.power) as i128,
            self.power,
        ))
    }

    /// Primitive modulo `2^m` means some coordinate is odd.
    pub fn is_primitive(&self) -> bool {
        self.coords.iter().any(|&c| c & 1 == 1)
    }

    /// Minimum valuation over all coordinates; the largest `a` with `2^a | v`.
    pub fn valuation(&self) -> Valuation {
        self.coords
            .iter()
            .map(|&c| valuation(c))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn add(&self, other: &ResidueVector) -> Result<ResidueVector> {
        self.compatible(other)?;
        let p = self.power;
        Ok(ResidueVector {
            power: p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: u32) -> ResidueVector {
        let p = self.power;
        ResidueVector {
            power: p,
            coords: self.coords.iter().map(|&a| p.mul(a, c)).collect(),
        }
    }

    /// Canonical coordinates as integers.
    pub fn to_i64(&self) -> Vec<i64> {
        self.coords.iter().map(|&c| c as i64).collect()
    }
}

impl fmt::Display for ResidueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.coords, self.power)
    }
}

/// `sum_i (a_i b_{g+i} - a_{g+i} b_i)` reduced modulo `2^m`, on canonical slices
/// of equal even length.
pub fn pairing_raw(a: &[u32], b: &[u32], power: Power) -> u32 {
    let g = a.len() / 2;
    let mut acc: u64 = 0;
    let modulus = power.modulus();
    for i in 0..g {
        acc = acc
            .wrapping_add(a[i] as u64 * b[g + i] as u64)
            .wrapping_add((modulus - b[i] as u64) * a[g + i] as u64);
    }
    (acc & power.mask() as u64) as u32
}

/// The power attached to an intersection value `k`: `m = v_2(k) + 1`, the
/// unique `m` with `k = 2^(m-1) (mod 2^m)`.
pub fn power_of_k(k: u64) -> Result<Power> {
    if k == 0 {
        return Err(Error::domain("intersection value k must be positive"));
    }
    let m = k.trailing_zeros() + 1;
    let power = Power::new(m)?;
    debug_assert_eq!(power.reduce(k as i128), power.half());
    Ok(power)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: u32) -> Power {
        Power::new(m).unwrap()
    }

    fn iv(c: &[i64]) -> IntVector {
        IntVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn basis_pairing() {
        let g = 3;
        let e1 = IntVector::basis(g, 0);
        let f1 = IntVector::basis(g, g);
        assert_eq!(e1.pairing(&f1).unwrap(), 1);
        assert_eq!(f1.pairing(&e1).unwrap(), -1);
        assert_eq!(e1.pairing(&e1).unwrap(), 0);
    }

    #[test]
    fn pairing_of_two_listed_vectors() {
        // (0,0,0,2,0,1) and (0,1,2,2,2,0): only the third pair contributes, 0*2 - 1*2.
        let u = iv(&[0, 0, 0, 2, 0, 1]);
        let v = iv(&[0, 1, 2, 2, 2, 0]);
        assert_eq!(u.pairing(&v).unwrap(), -2);
        assert_eq!(u.reduce(p(2)).pairing(&v.reduce(p(2))).unwrap().value(), 2);
    }

    #[test]
    fn mismatches() {
        assert_eq!(
            iv(&[1, 0]).pairing(&iv(&[1, 0, 0, 0])),
            Err(Error::GenusMismatch(1, 2))
        );
        let a = ResidueVector::new(&[1, 0], p(2)).unwrap();
        let b = ResidueVector::new(&[1, 0], p(3)).unwrap();
        assert_eq!(a.pairing(&b), Err(Error::PowerMismatch(2, 3)));
        assert_eq!(IntVector::new(vec![1, 2, 3]), Err(Error::OddLength(3)));
    }

    #[test]
    fn primitivity() {
        assert!(!ResidueVector::new(&[2, 4], p(3)).unwrap().is_primitive());
        assert!(ResidueVector::new(&[2, 3, 0, 0], p(2)).unwrap().is_primitive());
        assert!(!ResidueVector::zero(2, p(2)).is_primitive());
        assert!(!iv(&[2, 4]).is_primitive());
        assert!(iv(&[2, 3]).is_primitive());
        assert!(iv(&[0, -1]).is_primitive());
        assert!(!iv(&[0, 0]).is_primitive());
    }

    #[test]
    fn powers_of_k() {
        assert_eq!(power_of_k(7).unwrap().get(), 1);
        assert_eq!(power_of_k(2).unwrap().get(), 2);
        assert_eq!(power_of_k(12).unwrap().get(), 3);
        assert!(power_of_k(0).is_err());
    }

    #[test]
    fn valuation_of_vector() {
        let v = ResidueVector::new(&[4, 8, 0, 12], p(4)).unwrap();
        assert_eq!(v.valuation(), Valuation::Finite(2));
        assert_eq!(ResidueVector::zero(1, p(3)).valuation(), Valuation::Infinite);
    }

    #[test]
    fn embedding_keeps_pairs() {
        let v = iv(&[1, 2, 3, 4]).embed(3).unwrap();
        assert_eq!(v.coords(), &[1, 2, 0, 3, 4, 0]);
    }
}
