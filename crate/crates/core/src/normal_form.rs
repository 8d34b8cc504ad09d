//! Certified symplectic transformations over `Z/2^mZ`.
//!
//! Every transformation is built as a word in a fixed generator set and
//! multiplied out into a matrix, which can be checked independently with
//! [`SpTransform::is_symplectic`]. Coordinates are zero-based: pair `i` is the
//! coordinate pair `(i, g + i)`.
//!
//! Generators:
//! - [`Generator::Rotate`]: `(x_i, x_{g+i}) -> (x_{g+i}, -x_i)`.
//! - [`Generator::SwapPairs`]: exchange pairs `i` and `j`.
//! - [`Generator::ScalePair`]: `(x_i, x_{g+i}) -> (c x_i, c^{-1} x_{g+i})`, `c` a unit.
//! - [`Generator::Transvect`]: `x_dst += c x_src` and `x_{g+src} -= c x_{g+dst}`,
//!   the block `diag(A, A^{-T})` for an elementary `A`.
//! - [`Generator::Shear`]: `[[I, 0], [C, I]]` for the symmetric `C` with
//!   `C_ij = C_ji = c`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::{Power, Valuation};
use crate::vector::{pairing_raw, ResidueVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Rotate { pair: usize },
    SwapPairs { first: usize, second: usize },
    ScalePair { pair: usize, unit: u32 },
    Transvect { dst: usize, src: usize, c: u32 },
    Shear { first: usize, second: usize, c: u32 },
}

/// Elementary row operations; a generator expands to at most two.
#[derive(Debug, Clone, Copy)]
enum RowOp {
    /// `row[dst] += c * row[src]`
    AddMul { dst: usize, src: usize, c: u32 },
    Swap(usize, usize),
    Scale(usize, u32),
}

impl Generator {
    fn row_ops(&self, genus: usize, power: Power) -> Result<Vec<RowOp>> {
        let g = genus;
        let check = |i: usize| {
            if i < g {
                Ok(())
            } else {
                Err(Error::usage(format!("pair {i} out of range for genus {g}")))
            }
        };
        Ok(match *self {
            Generator::Rotate { pair } => {
                check(pair)?;
                vec![RowOp::Swap(pair, g + pair), RowOp::Scale(g + pair, power.minus_one())]
            }
            Generator::SwapPairs { first, second } => {
                check(first)?;
                check(second)?;
                if first == second {
                    vec![]
                } else {
                    vec![RowOp::Swap(first, second), RowOp::Swap(g + first, g + second)]
                }
            }
            Generator::ScalePair { pair, unit } => {
                check(pair)?;
                let inv = power.inverse(unit)?;
                vec![RowOp::Scale(pair, unit), RowOp::Scale(g + pair, inv)]
            }
            Generator::Transvect { dst, src, c } => {
                check(dst)?;
                check(src)?;
                if dst == src {
                    return Err(Error::usage("transvection needs two distinct pairs"));
                }
                vec![
                    RowOp::AddMul { dst, src, c },
                    RowOp::AddMul {
                        dst: g + src,
                        src: g + dst,
                        c: power.neg(c),
                    },
                ]
            }
            Generator::Shear { first, second, c } => {
                check(first)?;
                check(second)?;
                if first == second {
                    vec![RowOp::AddMul {
                        dst: g + first,
                        src: first,
                        c,
                    }]
                } else {
                    vec![
                        RowOp::AddMul {
                            dst: g + first,
                            src: second,
                            c,
                        },
                        RowOp::AddMul {
                            dst: g + second,
                            src: first,
                            c,
                        },
                    ]
                }
            }
        })
    }
}

/// Applies row operations to a row-major matrix with `width` columns
/// (a vector is the case `width == 1`).
fn apply_row_ops(ops: &[RowOp], data: &mut [u32], width: usize, power: Power) {
    for op in ops {
        match *op {
            RowOp::AddMul { dst, src, c } => {
                for col in 0..width {
                    let s = data[src * width + col];
                    let d = &mut data[dst * width + col];
                    *d = power.add(*d, power.mul(c, s));
                }
            }
            RowOp::Swap(a, b) => {
                for col in 0..width {
                    data.swap(a * width + col, b * width + col);
                }
            }
            RowOp::Scale(r, c) => {
                for col in 0..width {
                    let d = &mut data[r * width + col];
                    *d = power.mul(*d, c);
                }
            }
        }
    }
}

/// A `2g x 2g` matrix over `Z/2^mZ`, intended to preserve the symplectic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpTransform {
    genus: usize,
    power: Power,
    entries: Vec<u32>,
}

impl SpTransform {
    pub fn identity(genus: usize, power: Power) -> Self {
        let n = 2 * genus;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        SpTransform {
            genus,
            power,
            entries,
        }
    }

    /// The form matrix `J = [[0, I], [-I, 0]]`.
    pub fn form(genus: usize, power: Power) -> Self {
        let n = 2 * genus;
        let mut entries = vec![0; n * n];
        for i in 0..genus {
            entries[i * n + genus + i] = 1;
            entries[(genus + i) * n + i] = power.minus_one();
        }
        SpTransform {
            genus,
            power,
            entries,
        }
    }

    /// Builds a matrix from rows of integers, reducing each entry. The
    /// result is not checked for symplecticity.
    pub fn from_rows(rows: &[Vec<i64>], power: Power) -> Result<Self> {
        let n = rows.len();
        if !n.is_multiple_of(2) {
            return Err(Error::OddLength(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::usage("transform must be square"));
            }
            entries.extend(r.iter().map(|&x| power.reduce(x as i128)));
        }
        Ok(SpTransform {
            genus: n / 2,
            power,
            entries,
        })
    }

    pub fn from_word(genus: usize, power: Power, word: &[Generator]) -> Result<Self> {
        let mut t = Self::identity(genus, power);
        for g in word {
            t.left_apply(g)?;
        }
        Ok(t)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn power(&self) -> Power {
        self.power
    }

    fn dim(&self) -> usize {
        2 * self.genus
    }

    pub fn entry(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.dim() + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.dim().max(1))
            .take(self.dim())
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect()
    }

    /// Replaces `self` by `gen * self`.
    pub fn left_apply(&mut self, gen: &Generator) -> Result<()> {
        let ops = gen.row_ops(self.genus, self.power)?;
        let n = self.dim();
        apply_row_ops(&ops, &mut self.entries, n, self.power);
        Ok(())
    }

    fn check_vector(&self, v: &ResidueVector) -> Result<()> {
        if v.power() != self.power {
            return Err(Error::PowerMismatch(self.power.get(), v.power().get()));
        }
        if v.genus() != self.genus {
            return Err(Error::GenusMismatch(self.genus, v.genus()));
        }
        Ok(())
    }

    pub fn apply(&self, v: &ResidueVector) -> Result<ResidueVector> {
        self.check_vector(v)?;
        let n = self.dim();
        let p = self.power;
        let coords = (0..n)
            .map(|r| {
                (0..n).fold(0u32, |acc, c| p.add(acc, p.mul(self.entries[r * n + c], v.coords()[c])))
            })
            .collect();
        ResidueVector::from_raw(coords, p)
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &SpTransform) -> Result<SpTransform> {
        if self.power != other.power {
            return Err(Error::PowerMismatch(self.power.get(), other.power.get()));
        }
        if self.genus != other.genus {
            return Err(Error::GenusMismatch(self.genus, other.genus));
        }
        let n = self.dim();
        let p = self.power;
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let e = &mut entries[i * n + j];
                    *e = p.add(*e, p.mul(a, other.entries[k * n + j]));
                }
            }
        }
        Ok(SpTransform {
            genus: self.genus,
            power: p,
            entries,
        })
    }

    pub fn transpose(&self) -> SpTransform {
        let n = self.dim();
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        SpTransform {
            genus: self.genus,
            power: self.power,
            entries,
        }
    }

    /// `M^T J M = J (mod 2^m)`.
    pub fn is_symplectic(&self) -> bool {
        let n = self.dim();
        let p = self.power;
        // (M^T J M)_{ab} = <column a, column b>.
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|c| (0..n).map(|r| self.entries[r * n + c]).collect())
            .collect();
        let j = Self::form(self.genus, p);
        for a in 0..n {
            for b in 0..n {
                if pairing_raw(&cols[a], &cols[b], p) != j.entries[a * n + b] {
                    return false;
                }
            }
        }
        true
    }

    /// Inverse of a symplectic matrix, `J^{-1} M^T J = -J M^T J`.
    pub fn inverse(&self) -> Result<SpTransform> {
        if !self.is_symplectic() {
            return Err(Error::domain("inverse formula needs a symplectic matrix"));
        }
        let j = Self::form(self.genus, self.power);
        let mut inv = j.compose(&self.transpose())?.compose(&j)?;
        let p = self.power;
        inv.entries.iter_mut().for_each(|e| *e = p.neg(*e));
        Ok(inv)
    }
}

impl Serialize for SpTransform {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TransformJson {
            genus: self.genus,
            power: self.power.get(),
            rows: self.rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpTransform {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = TransformJson::deserialize(deserializer)?;
        let power = Power::new(j.power).map_err(serde::de::Error::custom)?;
        let t = SpTransform::from_rows(&j.rows, power).map_err(serde::de::Error::custom)?;
        if t.genus != j.genus {
            return Err(serde::de::Error::custom("rows do not match genus"));
        }
        Ok(t)
    }
}

#[derive(Serialize, Deserialize)]
struct TransformJson {
    genus: usize,
    power: u32,
    rows: Vec<Vec<i64>>,
}

/// Reduces `x` (restricted to `pairs`) to the first basis vector of
/// `pairs[0]`, appending the generators used to `word`. All coordinates
/// outside `pairs` are left untouched by the emitted generators.
fn eliminate(x: &mut [u32], genus: usize, power: Power, pairs: &[usize], word: &mut Vec<Generator>) -> Result<()> {
    let g = genus;
    let mut push = |gen: Generator, x: &mut [u32]| -> Result<()> {
        let ops = gen.row_ops(g, power)?;
        apply_row_ops(&ops, x, 1, power);
        word.push(gen);
        Ok(())
    };

    // Lowest-index unit coordinate among the first halves, then the second halves.
    let alpha = pairs.iter().copied().find(|&i| x[i] & 1 == 1);
    let beta = pairs.iter().copied().find(|&i| x[g + i] & 1 == 1);
    let pivot = match (alpha, beta) {
        (Some(i), _) => i,
        (None, Some(i)) => {
            push(Generator::Rotate { pair: i }, x)?;
            i
        }
        (None, None) => return Err(Error::NotPrimitive),
    };
    let head = pairs[0];
    if pivot != head {
        push(
            Generator::SwapPairs {
                first: head,
                second: pivot,
            },
            x,
        )?;
    }
    let a = x[head];
    if a != 1 {
        push(
            Generator::ScalePair {
                pair: head,
                unit: power.inverse(a)?,
            },
            x,
        )?;
    }
    for &j in &pairs[1..] {
        if x[j] != 0 {
            push(
                Generator::Transvect {
                    dst: j,
                    src: head,
                    c: power.neg(x[j]),
                },
                x,
            )?;
        }
    }
    for &j in &pairs[1..] {
        if x[g + j] != 0 {
            push(
                Generator::Shear {
                    first: j,
                    second: head,
                    c: power.neg(x[g + j]),
                },
                x,
            )?;
        }
    }
    if x[g + head] != 0 {
        push(
            Generator::Shear {
                first: head,
                second: head,
                c: power.neg(x[g + head]),
            },
            x,
        )?;
    }
    Ok(())
}

/// Generator word taking a primitive `u` to `e_1`.
pub fn primitive_to_e1_word(u: &ResidueVector) -> Result<Vec<Generator>> {
    let g = u.genus();
    let mut x = u.coords().to_vec();
    let pairs: Vec<usize> = (0..g).collect();
    let mut word = Vec::new();
    eliminate(&mut x, g, u.power(), &pairs, &mut word)?;
    Ok(word)
}

/// A certified symplectic `T` with `T u = e_1`.
pub fn primitive_to_e1(u: &ResidueVector) -> Result<SpTransform> {
    let word = primitive_to_e1_word(u)?;
    SpTransform::from_word(u.genus(), u.power(), &word)
}

/// Applies `word` to `v` one generator at a time, without forming the
/// matrix. Agrees with `SpTransform::from_word(..).apply(v)`.
pub fn apply_word(word: &[Generator], v: &ResidueVector) -> Result<ResidueVector> {
    let mut coords = v.coords().to_vec();
    for gen in word {
        let ops = gen.row_ops(v.genus(), v.power())?;
        apply_row_ops(&ops, &mut coords, 1, v.power());
    }
    ResidueVector::from_raw(coords, v.power())
}

/// Normal form of a pair `(u, v)` with `u` primitive:
/// `T u = e_1` and `T v = y e_1 + b e_{g+1} + z e_{2g}`, where `b = <u, v>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairNormalForm {
    pub transform: SpTransform,
    pub y: u32,
    pub b: u32,
    pub z: u32,
}

pub fn pair_normal_form_word(u: &ResidueVector, v: &ResidueVector) -> Result<(Vec<Generator>, u32, u32, u32)> {
    let b = u.pairing(v)?.value();
    let g = u.genus();
    let power = u.power();
    let mut word = primitive_to_e1_word(u)?;
    let t1 = SpTransform::from_word(g, power, &word)?;
    let v1 = t1.apply(v)?;
    let y = v1.coords()[0];
    let mut z = 0;

    if g >= 2 {
        // Component of v in the span of pairs 1..g, which the stabilizer of
        // e_1 and e_{g+1} acts on freely.
        let mut w = vec![0u32; 2 * g];
        w[1..g].copy_from_slice(&v1.coords()[1..g]);
        w[g + 1..].copy_from_slice(&v1.coords()[g + 1..]);
        let wv = ResidueVector::from_raw(w.clone(), power)?;
        if let Valuation::Finite(a) = wv.valuation() {
            let mut reduced: Vec<u32> = w.iter().map(|&c| c >> a).collect();
            let pairs: Vec<usize> = (1..g).collect();
            eliminate(&mut reduced, g, power, &pairs, &mut word)?;
            // First basis vector of pair 1 -> e_{2g}.
            word.push(Generator::SwapPairs {
                first: 1,
                second: g - 1,
            });
            word.push(Generator::Rotate { pair: g - 1 });
            word.push(Generator::ScalePair {
                pair: g - 1,
                unit: power.minus_one(),
            });
            z = power.reduce(1i128 << a);
        }
    }
    Ok((word, y, b, z))
}

/// Computes the pair normal form with a certificate.
///
/// For genus one the complement is empty and `z = 0`.
pub fn pair_normal_form(u: &ResidueVector, v: &ResidueVector) -> Result<PairNormalForm> {
    let (word, y, b, z) = pair_normal_form_word(u, v)?;
    let g = u.genus();
    let transform = SpTransform::from_word(g, u.power(), &word)?;
    debug_assert!({
        let tv = transform.apply(v)?;
        let mut expected = vec![0u32; 2 * g];
        expected[0] = y;
        expected[g] = b;
        if g >= 2 {
            expected[2 * g - 1] = z;
        }
        tv.coords() == expected.as_slice()
    });
    Ok(PairNormalForm { transform, y, b, z })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: u32) -> Power {
        Power::new(m).unwrap()
    }

    fn rv(c: &[i64], m: u32) -> ResidueVector {
        ResidueVector::new(c, p(m)).unwrap()
    }

    #[test]
    fn identity_and_form() {
        let v = rv(&[1, 2, 3, 0], 2);
        let id = SpTransform::identity(2, p(2));
        assert_eq!(id.apply(&v).unwrap(), v);
        assert!(id.is_symplectic());
        let j = SpTransform::form(1, p(3));
        assert_eq!(j.apply(&rv(&[1, 0], 3)).unwrap().coords(), &[0, 7]);
        assert!(j.is_symplectic());
    }

    #[test]
    fn scaled_identity_is_not_symplectic() {
        let t = SpTransform::from_rows(&[vec![2, 0], vec![0, 2]], p(2)).unwrap();
        assert!(!t.is_symplectic());
    }

    #[test]
    fn every_generator_is_symplectic() {
        let pw = p(3);
        let gens = [
            Generator::Rotate { pair: 1 },
            Generator::SwapPairs { first: 0, second: 2 },
            Generator::ScalePair { pair: 2, unit: 3 },
            Generator::Transvect { dst: 1, src: 2, c: 5 },
            Generator::Shear { first: 0, second: 0, c: 7 },
            Generator::Shear { first: 0, second: 1, c: 6 },
        ];
        for gen in gens {
            let t = SpTransform::from_word(3, pw, &[gen]).unwrap();
            assert!(t.is_symplectic(), "{gen:?}");
        }
        assert!(SpTransform::from_word(3, pw, &[Generator::ScalePair { pair: 0, unit: 2 }]).is_err());
    }

    #[test]
    fn e1_maps_to_itself_by_identity() {
        let u = ResidueVector::basis(3, 0, p(2));
        let t = primitive_to_e1(&u).unwrap();
        assert_eq!(t, SpTransform::identity(3, p(2)));
    }

    #[test]
    fn second_basis_vector_genus_one() {
        let u = ResidueVector::basis(1, 1, p(2));
        let t = primitive_to_e1(&u).unwrap();
        assert!(t.is_symplectic());
        assert_eq!(t.apply(&u).unwrap(), ResidueVector::basis(1, 0, p(2)));
        let u = rv(&[1, 1], 2);
        let t = primitive_to_e1(&u).unwrap();
        assert!(t.is_symplectic());
        assert_eq!(t.apply(&u).unwrap(), ResidueVector::basis(1, 0, p(2)));
    }

    #[test]
    fn non_primitive_rejected() {
        assert_eq!(primitive_to_e1(&rv(&[2, 0, 0, 4], 3)), Err(Error::NotPrimitive));
        assert_eq!(
            pair_normal_form(&rv(&[2, 0], 2), &rv(&[1, 0], 2)),
            Err(Error::NotPrimitive)
        );
    }

    #[test]
    fn already_normal_pair() {
        let u = ResidueVector::basis(2, 0, p(2));
        let v = rv(&[3, 0, 2, 0], 2);
        let nf = pair_normal_form(&u, &v).unwrap();
        assert_eq!((nf.y, nf.b, nf.z), (3, 2, 0));
        assert_eq!(nf.transform, SpTransform::identity(2, p(2)));
    }

    #[test]
    fn complement_vector_goes_to_last_coordinate() {
        let u = ResidueVector::basis(2, 0, p(2));
        let v = ResidueVector::basis(2, 1, p(2));
        let nf = pair_normal_form(&u, &v).unwrap();
        assert_eq!((nf.y, nf.b, nf.z), (0, 0, 1));
        assert!(nf.transform.is_symplectic());
        assert_eq!(nf.transform.apply(&v).unwrap().coords(), &[0, 0, 0, 1]);
    }

    #[test]
    fn listed_pair_mod_four() {
        let u = rv(&[0, 0, 0, 2, 0, 1], 2);
        let v = rv(&[0, 1, 2, 2, 2, 0], 2);
        let nf = pair_normal_form(&u, &v).unwrap();
        assert_eq!(nf.b, 2);
        assert!(nf.transform.is_symplectic());
        assert_eq!(nf.transform.apply(&u).unwrap(), ResidueVector::basis(3, 0, p(2)));
    }

    #[test]
    fn inverse_roundtrip() {
        let u = rv(&[3, 2, 5, 6], 3);
        let t = primitive_to_e1(&u).unwrap();
        let inv = t.inverse().unwrap();
        assert_eq!(inv.apply(&ResidueVector::basis(2, 0, p(3))).unwrap(), u);
        assert_eq!(t.compose(&inv).unwrap(), SpTransform::identity(2, p(3)));
    }

    #[test]
    fn transform_json_roundtrip() {
        let t = primitive_to_e1(&rv(&[0, 1, 3, 2], 2)).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        let back: SpTransform = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
