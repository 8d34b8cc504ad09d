//! Genus reduction, power reduction and the dependence-parity check.
//!
//! Iterating the two reductions bounds any residue system by `2g + 1`;
//! [`certify_bound`] runs that iteration and records every step.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::integer_kernel;
use crate::normal_form::{apply_word, pair_normal_form_word, SpTransform};
use crate::residue::Power;
use crate::search::{max_system_search, SearchBudget, SearchMode};
use crate::system::{IntSystem, ResidueSystem, SympSystem, SystemJson};
use crate::vector::ResidueVector;

fn ser_system<S: Serializer>(s: &ResidueSystem, ser: S) -> std::result::Result<S::Ok, S::Error> {
    SystemJson::from(&SympSystem::Residue(s.clone())).serialize(ser)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionKind {
    Genus,
    Power,
    /// Fewer than two elements; nothing to reduce.
    Trivial,
}

/// Record of one reduction step.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionTrace {
    pub kind: ReductionKind,
    #[serde(serialize_with = "ser_system")]
    pub input: ResidueSystem,
    /// Indices of the chosen pair `(u, v)` in the input (genus reduction).
    pub pair: Option<(usize, usize)>,
    pub certificate: Option<SpTransform>,
    /// `(y, b, z)` of the pair normal form (genus reduction).
    pub normal_form: Option<(u32, u32, u32)>,
    #[serde(serialize_with = "ser_system")]
    pub output: ResidueSystem,
    /// `(input index, output index)` for every surviving element.
    pub mapping: Vec<(usize, usize)>,
    /// Every mapped pair keeps its pairing.
    pub pairings_preserved: bool,
}

fn require_valid(s: &ResidueSystem) -> Result<()> {
    let verdict = s.check();
    match verdict.violation {
        None => Ok(()),
        Some(v) => Err(Error::domain(format!(
            "not a symplectic system: elements {} and {} pair to {}",
            v.first, v.second, v.pairing
        ))),
    }
}

/// Trades a primitive pair `(u, v)` for two dimensions.
///
/// `u` is the lexicographically least primitive element and `v` the least
/// remaining element. After the pair normal form `T` sends `u -> e_1` and
/// `v -> y e_1 + 2^(m-1) e_{g+2} + z e_{2g+2}`, every other `w` maps to
/// `w' = sum_i (w_{i+1} e_i + w_{g+i+2} e_{g+i}) + z e_{2g}` in genus `g`.
pub fn genus_reduce(system: &ResidueSystem) -> Result<ReductionTrace> {
    let big_g = system.genus();
    if big_g < 2 {
        return Err(Error::usage(format!(
            "genus reduction needs genus at least 2, got {big_g}"
        )));
    }
    if !system.has_primitive() {
        return Err(Error::domain("genus reduction needs a primitive element"));
    }
    require_valid(system)?;
    genus_step(system)
}

/// Genus reduction of a system already known to be valid.
fn genus_step(system: &ResidueSystem) -> Result<ReductionTrace> {
    let big_g = system.genus();
    let g = big_g - 1;
    let power = system.power();
    let trivial = |s: &ResidueSystem| ReductionTrace {
        kind: ReductionKind::Trivial,
        input: s.clone(),
        pair: None,
        certificate: None,
        normal_form: None,
        output: ResidueSystem::new(g, power).with_k(s.k()),
        mapping: vec![],
        pairings_preserved: true,
    };
    if system.len() < 2 {
        return Ok(trivial(system));
    }

    let elems = system.elements();
    let ui = (0..elems.len())
        .filter(|&i| elems[i].is_primitive())
        .min_by(|&a, &b| elems[a].coords().cmp(elems[b].coords()))
        .expect("has a primitive element");
    let vi = (0..elems.len())
        .filter(|&i| i != ui)
        .min_by(|&a, &b| elems[a].coords().cmp(elems[b].coords()))
        .expect("at least two elements");
    let (word, y, b, z) = pair_normal_form_word(&elems[ui], &elems[vi])?;

    let mut output = ResidueSystem::new(g, power).with_k(system.k());
    let mut mapping = Vec::new();
    for (i, w) in elems.iter().enumerate() {
        if i == ui || i == vi {
            continue;
        }
        let tw = apply_word(&word, w)?;
        let c = tw.coords();
        let mut out = vec![0u32; 2 * g];
        for j in 0..g {
            out[j] = c[j + 1];
            out[g + j] = c[big_g + j + 1];
        }
        out[2 * g - 1] = power.add(out[2 * g - 1], z);
        let wv = ResidueVector::from_raw(out, power)?;
        output
            .insert(wv)
            .map_err(|_| Error::domain("genus reduction map is not injective"))?;
        mapping.push((i, output.len() - 1));
    }

    let outs = output.elements();
    let pairings_preserved = mapping.iter().enumerate().all(|(a, &(wi, wo))| {
        mapping[a + 1..].iter().all(|&(xi, xo)| {
            elems[wi].pairing(&elems[xi]).ok() == outs[wo].pairing(&outs[xo]).ok()
        })
    });

    Ok(ReductionTrace {
        kind: ReductionKind::Genus,
        input: system.clone(),
        pair: Some((ui, vi)),
        certificate: Some(SpTransform::from_word(big_g, power, &word)?),
        normal_form: Some((y, b, z)),
        output,
        mapping,
        pairings_preserved,
    })
}

/// Halves a system without primitive elements modulo `2^(m+2)` into a
/// system of equal size modulo `2^m`.
pub fn power_reduce(system: &ResidueSystem) -> Result<ReductionTrace> {
    let p = system.power().get();
    if p < 3 {
        return Err(Error::usage(format!(
            "power reduction needs modulus at least 2^3, got 2^{p}"
        )));
    }
    if system.has_primitive() {
        return Err(Error::domain("power reduction needs every element divisible by 2"));
    }
    require_valid(system)?;
    power_step(system)
}

fn power_step(system: &ResidueSystem) -> Result<ReductionTrace> {
    let target = Power::new(system.power().get() - 2)?;
    let mut output = ResidueSystem::new(system.genus(), target).with_k(system.k());
    for w in system.elements() {
        let halved = w.coords().iter().map(|&c| c >> 1).collect();
        output
            .insert(ResidueVector::from_raw(halved, target)?)
            .map_err(|_| Error::domain("halving collapsed two elements"))?;
    }
    let mapping = (0..system.len()).map(|i| (i, i)).collect();
    let pairings_preserved = output.check().valid;
    Ok(ReductionTrace {
        kind: ReductionKind::Power,
        input: system.clone(),
        pair: None,
        certificate: None,
        normal_form: None,
        output,
        mapping,
        pairings_preserved,
    })
}

fn ser_coeffs<S: Serializer>(c: &[BigInt], ser: S) -> std::result::Result<S::Ok, S::Error> {
    let vals: Vec<serde_json::Value> = c
        .iter()
        .map(|x| match x.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(x.to_string()),
        })
        .collect();
    vals.serialize(ser)
}

#[derive(Debug, Clone, Serialize)]
pub struct Dependence {
    #[serde(serialize_with = "ser_coeffs")]
    pub coefficients: Vec<BigInt>,
    pub all_nonzero: bool,
    pub all_odd: bool,
}

/// Outcome of the dependence-parity check on an integer system.
#[derive(Debug, Clone, Serialize)]
pub struct ParityReport {
    pub genus: usize,
    pub size: usize,
    pub system_valid: bool,
    pub rank: usize,
    pub dependencies: Vec<Dependence>,
    /// Dependencies with a zero or an even coefficient.
    pub violations: usize,
    /// `size <= 2g + 1`.
    pub within_bound: bool,
}

impl ParityReport {
    pub fn ok(&self) -> bool {
        self.violations == 0 && self.within_bound
    }
}

/// Rational linear dependencies among the elements, each scaled to a
/// primitive integer vector and tested for all-nonzero, all-odd
/// coefficients.
pub fn dependence_parity_check(system: &IntSystem) -> Result<ParityReport> {
    let g = system.genus();
    let n = system.len();
    let system_valid = system.check()?.valid;
    // Columns are the elements.
    let matrix: Vec<Vec<i64>> = (0..2 * g)
        .map(|r| system.elements().iter().map(|e| e.coords()[r]).collect())
        .collect();
    let (rank, basis) = integer_kernel(&matrix, n);
    let dependencies: Vec<Dependence> = basis
        .into_iter()
        .map(|c| Dependence {
            all_nonzero: c.iter().all(|x| !x.is_zero()),
            all_odd: c.iter().all(|x| x.is_odd()),
            coefficients: c,
        })
        .collect();
    let violations = dependencies
        .iter()
        .filter(|d| !(d.all_nonzero && d.all_odd))
        .count();
    Ok(ParityReport {
        genus: g,
        size: n,
        system_valid,
        rank,
        dependencies,
        violations,
        within_bound: n <= 2 * g + 1,
    })
}

/// Why an iteration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafReason {
    /// At most one element.
    Trivial,
    /// Genus one; bounded by an exhaustive search of that genus and power.
    GenusOneExhaustive,
    /// No primitive element modulo 4: two even vectors pair to 0.
    NonPrimitiveModFour,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum CertStep {
    Genus {
        genus: usize,
        power: u32,
        size_before: usize,
        size_after: usize,
        pairings_preserved: bool,
    },
    Power {
        genus: usize,
        power_before: u32,
        power_after: u32,
        size: usize,
    },
    Leaf {
        genus: usize,
        power: u32,
        size: usize,
        bound: usize,
        reason: LeafReason,
    },
}

/// A chain of reductions showing `size <= certified_bound <= 2g + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCertificate {
    pub genus: usize,
    pub power: u32,
    pub size: usize,
    pub steps: Vec<CertStep>,
    pub certified_bound: usize,
}

impl BoundCertificate {
    pub fn holds(&self) -> bool {
        self.size <= self.certified_bound && self.certified_bound <= 2 * self.genus + 1
    }
}

/// Largest genus-one system modulo `2^m`, by exhaustive search (cached).
fn genus_one_max(power: Power) -> Result<usize> {
    static CACHE: OnceLock<Mutex<HashMap<u32, usize>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().unwrap().get(&power.get()) {
        return Ok(v);
    }
    let rep = max_system_search(1, power, false, SearchMode::Discover, SearchBudget::default())?;
    if !rep.exhaustive {
        return Err(Error::domain("genus-one base search was cut by its budget"));
    }
    cache.lock().unwrap().insert(power.get(), rep.max_size);
    Ok(rep.max_size)
}

/// Iterates genus and power reductions until a base case, checking every
/// pairing-preservation claim on the way.
pub fn certify_bound(system: &ResidueSystem) -> Result<BoundCertificate> {
    certify_bound_traced(system).map(|(c, _)| c)
}

/// [`certify_bound`] together with the trace of every reduction step.
pub fn certify_bound_traced(system: &ResidueSystem) -> Result<(BoundCertificate, Vec<ReductionTrace>)> {
    require_valid(system)?;
    let mut traces = Vec::new();
    let mut steps = Vec::new();
    let mut genus_steps = 0;
    let mut current = system.clone();
    let leaf_bound = loop {
        let (g, m, n) = (current.genus(), current.power().get(), current.len());
        let leaf = |bound, reason| CertStep::Leaf {
            genus: g,
            power: m,
            size: n,
            bound,
            reason,
        };
        if n <= 1 {
            steps.push(leaf(n, LeafReason::Trivial));
            break n;
        }
        if g <= 1 {
            let bound = genus_one_max(current.power())?;
            steps.push(leaf(bound, LeafReason::GenusOneExhaustive));
            break bound;
        }
        if current.has_primitive() {
            // Valid input and preserved pairings make the output valid.
            let trace = genus_step(&current)?;
            if !trace.pairings_preserved {
                return Err(Error::domain("genus reduction broke a pairing"));
            }
            steps.push(CertStep::Genus {
                genus: g,
                power: m,
                size_before: n,
                size_after: trace.output.len(),
                pairings_preserved: trace.pairings_preserved,
            });
            genus_steps += 1;
            current = trace.output.clone();
            traces.push(trace);
        } else if m >= 3 {
            let trace = power_step(&current)?;
            if !trace.pairings_preserved {
                return Err(Error::domain("halving broke a pairing"));
            }
            steps.push(CertStep::Power {
                genus: g,
                power_before: m,
                power_after: m - 2,
                size: n,
            });
            current = trace.output.clone();
            traces.push(trace);
        } else {
            // m = 1 has no nonzero non-primitive vectors and m = 2 allows one.
            steps.push(leaf(1, LeafReason::NonPrimitiveModFour));
            break 1;
        }
    };
    let cert = BoundCertificate {
        genus: system.genus(),
        power: system.power().get(),
        size: system.len(),
        steps,
        certified_bound: leaf_bound + 2 * genus_steps,
    };
    Ok((cert, traces))
}
