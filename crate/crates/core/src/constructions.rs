//! Explicit extremal integer systems.
//!
//! Classes are written in the basis `alpha_1..alpha_g, beta_1..beta_g`
//! (coordinates `0..g` and `g..2g`). Orientation signs are fixed to the
//! positive representative; checks are sign-insensitive.

use crate::error::{Error, Result};
use crate::system::IntSystem;
use crate::vector::IntVector;

/// Named homology basis of a genus-`g` surface.
#[derive(Debug, Clone, Copy)]
pub struct HomologyBasis {
    genus: usize,
}

impl HomologyBasis {
    pub fn new(genus: usize) -> Self {
        HomologyBasis { genus }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `alpha_i`, one-based.
    pub fn alpha(&self, i: usize) -> IntVector {
        IntVector::basis(self.genus, i - 1)
    }

    /// `beta_i`, one-based.
    pub fn beta(&self, i: usize) -> IntVector {
        IntVector::basis(self.genus, self.genus + i - 1)
    }

    /// Integer combination of basis classes: `alphas[i]` is the coefficient
    /// of `alpha_{i+1}`, likewise for `betas`.
    pub fn combine(&self, alphas: &[i64], betas: &[i64]) -> IntVector {
        let mut v = IntVector::zero(self.genus);
        let c = v.coords_mut();
        c[..alphas.len()].copy_from_slice(alphas);
        c[self.genus..self.genus + betas.len()].copy_from_slice(betas);
        v
    }
}

/// Twist classes `delta_i`, `epsilon_i` and, for odd `k`, one extra class.
///
/// `delta_i = alpha_i + k(beta_1 + ... + beta_{i-1})` (so `delta_1 = alpha_1`),
/// `epsilon_i = delta_i + k beta_i`, and for odd `k` the extra class is
/// `2 alpha_1 + k(beta_1 + ... + beta_g)`, which pairs to `-k` with
/// `delta_1` and to `+k` with every other element. In genus one it is
/// `2 alpha_1 + k beta_1`.
pub fn construction_one(genus: usize, k: u64) -> Result<IntSystem> {
    if genus == 0 {
        return Err(Error::domain("construction needs genus at least 1"));
    }
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let g = genus;
    let k = k as i64;
    let mut deltas = Vec::with_capacity(g);
    let mut epsilons = Vec::with_capacity(g);
    for i in 0..g {
        let mut d = IntVector::zero(g);
        let c = d.coords_mut();
        c[i] = 1;
        for j in 0..i {
            c[g + j] = k;
        }
        let mut e = d.clone();
        e.coords_mut()[g + i] += k;
        deltas.push(d);
        epsilons.push(e);
    }
    let mut s = IntSystem::new(g, Some(k as u64));
    for v in deltas.into_iter().chain(epsilons) {
        s.insert(v)?;
    }
    if k % 2 == 1 {
        let mut v0 = IntVector::zero(g);
        let c = v0.coords_mut();
        c[0] = 2;
        c[g..].iter_mut().for_each(|x| *x = k);
        s.insert(v0)?;
    }
    Ok(s)
}

/// The seven primitive genus-three classes, in the order `v_0..v_6`.
pub fn genus_three_base(k: u64) -> Vec<IntVector> {
    let k = k as i64;
    let b = HomologyBasis::new(3);
    vec![
        b.combine(&[1, 0, 0], &[0, 0, 0]),
        b.combine(&[0, 0, 0], &[k, 0, 1]),
        b.combine(&[0, 1, k], &[k, k, 0]),
        b.combine(&[0, 1, k], &[k, k, 1]),
        b.combine(&[1, 1, 0], &[k, 0, 1]),
        b.combine(&[1, 0, 0], &[k, k, 1]),
        b.combine(&[1, 1, 0], &[k, k, 2]),
    ]
}

/// Primitive systems of size `2g + 1` for `g >= 3`.
///
/// Starts from [`genus_three_base`] embedded in genus `g` and applies
/// [`extend_system`] until all `g` pairs are used.
pub fn construction_two(genus: usize, k: u64) -> Result<IntSystem> {
    if genus < 3 {
        return Err(Error::domain(format!(
            "primitive systems of size 2g+1 need genus >= 3, got {genus}"
        )));
    }
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let base = genus_three_base(k)
        .into_iter()
        .map(|v| v.embed(genus))
        .collect::<Result<Vec<_>>>()?;
    let mut s = IntSystem::from_elements(genus, Some(k), base)?;
    for r in 3..genus {
        s = extend_system(&s, r)?;
    }
    Ok(s)
}

/// One extension step from `r` active pairs to `r + 1`.
///
/// The last element `w` is the distinguished one. It is replaced by
/// `w + alpha_{r+1}`, then `w + k beta_{r+1}` and
/// `w + alpha_{r+1} + k beta_{r+1}` are appended; the last of these is the
/// distinguished element of the result. All elements must vanish outside the
/// first `r` pairs and the ambient genus must exceed `r`.
pub fn extend_system(s: &IntSystem, active: usize) -> Result<IntSystem> {
    let g = s.genus();
    let k = s
        .k()
        .ok_or_else(|| Error::usage("extension needs an intersection value k"))? as i64;
    if active >= g {
        return Err(Error::domain(format!(
            "no free pair: {active} active pairs in genus {g}"
        )));
    }
    let Some((w, rest)) = s.elements().split_last() else {
        return Err(Error::domain("cannot extend an empty system"));
    };
    for e in s.elements() {
        let c = e.coords();
        if (active..g).any(|i| c[i] != 0 || c[g + i] != 0) {
            return Err(Error::domain(format!(
                "element {e} is not supported on the first {active} pairs"
            )));
        }
    }
    let mut w_alpha = w.clone();
    w_alpha.coords_mut()[active] = 1;
    let mut w_beta = w.clone();
    w_beta.coords_mut()[g + active] = k;
    let mut w_both = w_alpha.clone();
    w_both.coords_mut()[g + active] = k;

    let mut out = IntSystem::new(g, Some(k as u64));
    for e in rest.iter().cloned().chain([w_alpha, w_beta, w_both]) {
        out.insert(e)?;
    }
    Ok(out)
}
