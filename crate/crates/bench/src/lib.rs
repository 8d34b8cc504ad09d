//! Fixtures shared by the benchmarks.

use symsys_core::{construction_two, power_of_k, IntSystem, Power, ResidueSystem, ResidueVector};

/// A deterministic primitive vector of the given genus.
pub fn primitive_vector(genus: usize, power: Power) -> ResidueVector {
    let coords: Vec<i64> = (0..2 * genus as i64).map(|i| 3 * i * i + 1).collect();
    ResidueVector::new(&coords, power).unwrap()
}

pub fn integer_system(genus: usize, k: u64) -> IntSystem {
    construction_two(genus, k).unwrap()
}

pub fn residue_system(genus: usize, k: u64) -> ResidueSystem {
    integer_system(genus, k).reduce_mod(power_of_k(k).unwrap()).unwrap()
}
