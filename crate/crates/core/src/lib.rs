//! Symplectic `k`-systems: sets of vectors whose pairwise symplectic pairings
//! are all `+-k` over `Z`, or all `2^(m-1)` over `Z/2^mZ`.
//!
//! The crate provides exact arithmetic in `Z/2^mZ`, certified symplectic
//! normal forms, the genus and power reductions that bound system size by
//! `2g + 1`, explicit extremal constructions, exhaustive symmetry-broken
//! search, and the doubled-polygon curve family whose members pairwise
//! intersect twice.

pub mod clique;
pub mod constructions;
pub mod error;
pub mod kernel;
pub mod normal_form;
pub mod polygon;
pub mod reductions;
pub mod residue;
pub mod search;
pub mod system;
pub mod vector;

pub use error::{Error, Result};
pub use normal_form::{pair_normal_form, primitive_to_e1, Generator, PairNormalForm, SpTransform};
pub use residue::{Power, Residue, Valuation};
pub use system::{IntSystem, ResidueSystem, SympSystem, SystemJson, Verdict, Violation};
pub use vector::{power_of_k, IntVector, ResidueVector};
pub use constructions::{construction_one, construction_two, extend_system, HomologyBasis};
pub use polygon::{
    alpha_curve, crossing_count, generate_a_k, is_simple, minimal_crossings, partition, signed_crossing_sum,
    CurveWord, PartitionSignature, Placement,
};
pub use reductions::{
    certify_bound, dependence_parity_check, genus_reduce, power_reduce, BoundCertificate, ParityReport,
    ReductionTrace,
};
pub use search::{max_system_search, verify_bounds, SearchBudget, SearchMode, SearchReport};
