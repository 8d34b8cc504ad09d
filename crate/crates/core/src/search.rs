//! Exhaustive maximum symplectic-system search over `(Z/2^mZ)^{2g}`.
//!
//! Systems are cliques in the compatibility graph whose edges join vectors
//! pairing to `2^(m-1)`. The zero vector is never a candidate.
//!
//! Symmetry breaking: the symplectic group acts transitively on primitive
//! vectors ([`crate::normal_form::primitive_to_e1`] is the constructive
//! witness), so any system containing a primitive element is equivalent to
//! one containing `e_1`. The search therefore splits into
//! - branch A: `e_1` plus a clique among vectors with `x_{g+1} = 2^(m-1)`;
//! - branch B (general mode only): systems without primitive elements. For
//!   `m = 1` there are none, for `m = 2` two even vectors always pair to
//!   `0 (mod 4)` so the size is at most one, and for `m >= 3` halving is a
//!   size-preserving bijection with general systems modulo `2^(m-2)`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::clique::{max_clique, CliqueLimits, Graph};
use crate::error::{Error, Result};
use crate::residue::Power;
use crate::system::ResidueSystem;
use crate::vector::{pairing_raw, ResidueVector};

/// Default cap on the number of vectors a search may enumerate.
pub const DEFAULT_MAX_VECTORS: u64 = 1 << 14;

/// Environment variable overriding [`DEFAULT_MAX_VECTORS`].
pub const BUDGET_ENV: &str = "SYMSYS_MAX_VECTORS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_vectors: u64,
    /// Cap on branch-and-bound expansions; `None` is unlimited.
    pub max_nodes: Option<u64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_vectors: DEFAULT_MAX_VECTORS,
            max_nodes: None,
        }
    }
}

impl SearchBudget {
    /// Default budget, with `max_vectors` taken from the environment if set.
    pub fn from_env() -> Self {
        let max_vectors = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_MAX_VECTORS);
        SearchBudget {
            max_vectors,
            max_nodes: None,
        }
    }
}

/// `Verify` stops once the theoretical maximum `2g + 1` is reached;
/// `Discover` applies no such cutoff, so a larger system would be found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Verify,
    Discover,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub genus: usize,
    pub power: u32,
    pub primitive_only: bool,
    pub mode: SearchMode,
    pub budget: SearchBudget,
    pub max_size: usize,
    pub witness: Vec<Vec<u32>>,
    /// The maximum is proven (no budget cut occurred).
    pub exhaustive: bool,
    /// Size at which the search was allowed to stop early, if any.
    pub cutoff: Option<usize>,
    pub primitive_branch: usize,
    pub nonprimitive_branch: Option<usize>,
    pub nodes: u64,
    pub wall_time_ms: u64,
}

impl SearchReport {
    pub fn witness_system(&self) -> Result<ResidueSystem> {
        let power = Power::new(self.power)?;
        let elements = self
            .witness
            .iter()
            .map(|c| ResidueVector::from_raw(c.clone(), power))
            .collect::<Result<Vec<_>>>()?;
        ResidueSystem::from_elements(self.genus, power, elements)
    }
}

fn space_size(genus: usize, power: Power) -> u128 {
    let bits = 2 * genus as u32 * power.get();
    if bits >= 128 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

/// Number of vectors [`enumerate_vectors`] would return.
pub fn vector_count(genus: usize, power: Power, primitive_only: bool) -> u128 {
    let total = space_size(genus, power);
    if primitive_only {
        // Even vectors are the image of doubling, (2^(m-1))^{2g} of them.
        total - (total >> (2 * genus))
    } else {
        total.saturating_sub(1)
    }
}

fn check_budget(required: u128, budget: &SearchBudget) -> Result<()> {
    if required > budget.max_vectors as u128 {
        Err(Error::BudgetExceeded {
            required,
            budget: budget.max_vectors,
        })
    } else {
        Ok(())
    }
}

/// Decodes `index` as base-`2^m` digits, first coordinate most significant.
fn decode(mut index: u64, len: usize, power: Power, out: &mut [u32]) {
    for c in out[..len].iter_mut().rev() {
        *c = (index & power.mask() as u64) as u32;
        index >>= power.get();
    }
}

/// All nonzero vectors (or all primitive vectors) in lexicographic order.
pub fn enumerate_vectors(
    genus: usize,
    power: Power,
    primitive_only: bool,
    budget: &SearchBudget,
) -> Result<Vec<ResidueVector>> {
    let required = vector_count(genus, power, primitive_only);
    check_budget(required, budget)?;
    let n = 2 * genus;
    let total = space_size(genus, power) as u64;
    let mut out = Vec::with_capacity(required as usize);
    let mut buf = vec![0u32; n];
    for idx in 1..total {
        decode(idx, n, power, &mut buf);
        if primitive_only && buf.iter().all(|c| c & 1 == 0) {
            continue;
        }
        out.push(ResidueVector::from_raw(buf.clone(), power)?);
    }
    Ok(out)
}

/// Vectors compatible with `e_1`, i.e. with `x_{g+1} = 2^(m-1)`.
fn branch_a_candidates(genus: usize, power: Power, primitive_only: bool) -> Vec<Vec<u32>> {
    let n = 2 * genus;
    let free = (n - 1) as u32 * power.get();
    let mut out = Vec::new();
    let mut buf = vec![0u32; n - 1];
    for idx in 0..1u64 << free {
        decode(idx, n - 1, power, &mut buf);
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&buf[..genus]);
        v.push(power.half());
        v.extend_from_slice(&buf[genus..]);
        if primitive_only && v.iter().all(|c| c & 1 == 0) {
            continue;
        }
        out.push(v);
    }
    out
}

fn compatibility_graph(vectors: &[Vec<u32>], power: Power) -> Graph {
    let half = power.half();
    Graph::from_fn(vectors.len(), |i, j| pairing_raw(&vectors[i], &vectors[j], power) == half)
}

/// Maximum size of a symplectic system in `(Z/2^mZ)^{2g}`, optionally
/// restricted to primitive elements.
///
/// Fails only when the vector space exceeds `budget.max_vectors`; node
/// budget cuts are reported through `exhaustive = false`.
pub fn max_system_search(
    genus: usize,
    power: Power,
    primitive_only: bool,
    mode: SearchMode,
    budget: SearchBudget,
) -> Result<SearchReport> {
    let start = Instant::now();
    if genus == 0 {
        return Err(Error::usage("search needs genus at least 1"));
    }
    check_budget(vector_count(genus, power, false), &budget)?;

    let cap = 2 * genus + 1;
    let cutoff = (mode == SearchMode::Verify).then_some(cap);

    // Branch A.
    let candidates = branch_a_candidates(genus, power, primitive_only);
    let graph = compatibility_graph(&candidates, power);
    let outcome = max_clique(
        &graph,
        CliqueLimits {
            target: cutoff.map(|c| c - 1),
            max_nodes: budget.max_nodes,
        },
    );
    let mut witness: Vec<Vec<u32>> = vec![{
        let mut e1 = vec![0u32; 2 * genus];
        e1[0] = 1;
        e1
    }];
    witness.extend(outcome.clique.iter().map(|&i| candidates[i].clone()));
    let primitive_branch = witness.len();
    let mut exhaustive = outcome.complete;
    let mut nodes = outcome.nodes;

    // Branch B.
    let mut nonprimitive_branch = None;
    if !primitive_only && !(cutoff.is_some() && primitive_branch >= cap) {
        let (size, lifted) = match power.get() {
            1 => (0, vec![]),
            2 => {
                let mut v = vec![0u32; 2 * genus];
                v[0] = 2;
                (1, vec![v])
            }
            m => {
                let inner = max_system_search(genus, Power::new(m - 2)?, false, mode, budget)?;
                exhaustive &= inner.exhaustive;
                nodes += inner.nodes;
                let lifted = inner
                    .witness
                    .iter()
                    .map(|v| v.iter().map(|&c| power.mul(c, 2)).collect())
                    .collect();
                (inner.max_size, lifted)
            }
        };
        nonprimitive_branch = Some(size);
        if size > witness.len() {
            witness = lifted;
        }
    }

    Ok(SearchReport {
        genus,
        power: power.get(),
        primitive_only,
        mode,
        budget,
        max_size: witness.len(),
        witness,
        exhaustive,
        cutoff,
        primitive_branch,
        nonprimitive_branch,
        nodes,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Plain maximum clique over every candidate vector, without symmetry
/// breaking. Used to cross-check [`max_system_search`] on small instances.
pub fn unreduced_max_system(
    genus: usize,
    power: Power,
    primitive_only: bool,
    budget: &SearchBudget,
) -> Result<usize> {
    let vectors: Vec<Vec<u32>> = enumerate_vectors(genus, power, primitive_only, budget)?
        .into_iter()
        .map(|v| v.coords().to_vec())
        .collect();
    let graph = compatibility_graph(&vectors, power);
    Ok(max_clique(&graph, CliqueLimits::default()).clique.len())
}

/// Predicted maximum: `2g` for primitive systems with `m > 1` and `g <= 2`,
/// otherwise `2g + 1`.
pub fn predicted_max(genus: usize, power: Power, primitive_only: bool) -> usize {
    if primitive_only && power.get() > 1 && genus <= 2 {
        2 * genus
    } else {
        2 * genus + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Match,
    Mismatch,
    /// Budget cut before the maximum was proven.
    Inconclusive,
    /// Vector space larger than the budget.
    Refused,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub genus: usize,
    pub power: u32,
    pub mode: String,
    pub found: Option<usize>,
    pub predicted: usize,
    pub exhaustive: bool,
    pub status: RowStatus,
    pub nodes: u64,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub rows: Vec<BoundsRow>,
}

impl BoundsTable {
    /// Any exhaustive row disagreeing with the prediction.
    pub fn has_mismatch(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Mismatch)
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "{:>5} {:>5} {:>10} {:>6} {:>9} {:>10} {:>12} {:>12}\n",
            "genus", "power", "mode", "found", "predicted", "exhaustive", "status", "nodes"
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{:>5} {:>5} {:>10} {:>6} {:>9} {:>10} {:>12} {:>12}\n",
                r.genus,
                r.power,
                r.mode,
                r.found.map_or("-".to_string(), |f| f.to_string()),
                r.predicted,
                r.exhaustive,
                format!("{:?}", r.status).to_lowercase(),
                r.nodes
            ));
        }
        s
    }
}

/// Runs both modes for every `(g, m)` in the given cells.
pub fn verify_cells(cells: &[(usize, u32)], mode: SearchMode, budget: SearchBudget) -> Result<BoundsTable> {
    let mut rows = Vec::new();
    for &(genus, m) in cells {
        let power = Power::new(m)?;
        for primitive_only in [false, true] {
            let predicted = predicted_max(genus, power, primitive_only);
            let label = if primitive_only { "primitive" } else { "general" }.to_string();
            let row = match max_system_search(genus, power, primitive_only, mode, budget) {
                Ok(rep) => {
                    let status = if !rep.exhaustive {
                        RowStatus::Inconclusive
                    } else if rep.max_size == predicted {
                        RowStatus::Match
                    } else {
                        RowStatus::Mismatch
                    };
                    BoundsRow {
                        genus,
                        power: m,
                        mode: label,
                        found: Some(rep.max_size),
                        predicted,
                        exhaustive: rep.exhaustive,
                        status,
                        nodes: rep.nodes,
                        wall_time_ms: rep.wall_time_ms,
                    }
                }
                Err(Error::BudgetExceeded { .. }) => BoundsRow {
                    genus,
                    power: m,
                    mode: label,
                    found: None,
                    predicted,
                    exhaustive: false,
                    status: RowStatus::Refused,
                    nodes: 0,
                    wall_time_ms: 0,
                },
                Err(e) => return Err(e),
            };
            rows.push(row);
        }
    }
    Ok(BoundsTable { rows })
}

/// Every `(g, m)` with `1 <= g <= g_max` and `1 <= m <= m_max`.
pub fn verify_bounds(g_max: usize, m_max: u32, mode: SearchMode, budget: SearchBudget) -> Result<BoundsTable> {
    let cells: Vec<(usize, u32)> = (1..=g_max)
        .flat_map(|g| (1..=m_max).map(move |m| (g, m)))
        .collect();
    verify_cells(&cells, mode, budget)
}
