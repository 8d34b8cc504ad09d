//! Curves in the doubled polygon.
//!
//! `P` is a regular `g`-gon with vertices `v_1..v_g` counterclockwise and
//! edge `e_i` joining `v_{i-1}` to `v_i` (indices mod `g`). Gluing a second
//! copy `P̄` along the boundary gives a sphere. The curve `β(i1,i2,i3,i4)`
//! runs through the midpoints of four edges, using arcs `(i1,i2)` and
//! `(i3,i4)` in `P` and arcs `(i2,i3)` and `(i4,i1)` in `P̄`.
//!
//! Crossings are combinatorial: two arcs in the same polygon cross iff their
//! endpoints interleave on the boundary circle, where points sharing an edge
//! are ordered by a [`Placement`].

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The curve `β(i1,i2,i3,i4)` on the doubled `g`-gon.
///
/// `β(i1,i2,i3,i4)` and `β(i3,i4,i1,i2)` are the same curve with the same
/// traversal direction; the lexicographically smaller quad is stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveWord {
    g: usize,
    quad: [usize; 4],
}

impl CurveWord {
    pub fn new(g: usize, quad: [usize; 4]) -> Result<Self> {
        if let Some(&i) = quad.iter().find(|&&i| i == 0 || i > g) {
            return Err(Error::domain(format!("edge index {i} outside 1..={g}")));
        }
        for a in 0..4 {
            for b in a + 1..4 {
                if quad[a] == quad[b] {
                    return Err(Error::domain(format!("edge {} repeated", quad[a])));
                }
            }
        }
        let rot = [quad[2], quad[3], quad[0], quad[1]];
        Ok(CurveWord {
            g,
            quad: quad.min(rot),
        })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn quad(&self) -> [usize; 4] {
        self.quad
    }

    /// Arcs in `P`, directed along the traversal.
    fn arcs_p(&self) -> [(usize, usize); 2] {
        let [a, b, c, d] = self.quad;
        [(a, b), (c, d)]
    }

    /// Arcs in `P̄`, directed along the traversal.
    fn arcs_pbar(&self) -> [(usize, usize); 2] {
        let [a, b, c, d] = self.quad;
        [(b, c), (d, a)]
    }

    pub fn uses_edge(&self, e: usize) -> bool {
        self.quad.contains(&e)
    }
}

impl std::fmt::Display for CurveWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = self.quad;
        write!(f, "β({a},{b},{c},{d})")
    }
}

/// True iff `x` lies strictly inside the counterclockwise interval from
/// `s` to `e` on a circle of linearly ordered positions.
fn ccw_between(s: usize, e: usize, x: usize) -> bool {
    if s < e {
        s < x && x < e
    } else {
        x > s || x < e
    }
}

fn interleave(a: (usize, usize), b: (usize, usize)) -> bool {
    ccw_between(a.0, a.1, b.0) != ccw_between(a.0, a.1, b.1)
}

/// The curve is simple iff its quad runs around the polygon in one cyclic
/// direction, clockwise or counterclockwise.
pub fn is_simple(c: &CurveWord) -> bool {
    let [a, b, cc, d] = c.quad;
    let dir = |x: usize, y: usize, z: usize| ccw_between(x, z, y);
    let ccw = dir(a, b, cc) && dir(b, cc, d) && dir(cc, d, a);
    let cw = dir(cc, b, a) && dir(d, cc, b) && dir(a, d, cc);
    ccw || cw
}

/// `α(i,j) = β(1, i, j, j + k - i + 1)` for `2 <= i <= k` and
/// `i + 1 <= j <= i + g - k - 1`.
pub fn alpha_curve(g: usize, k: usize, i: usize, j: usize) -> Result<CurveWord> {
    let ok = k >= 1
        && g > k
        && (2..=k).contains(&i)
        && j > i
        && j + k < i + g;
    if !ok {
        return Err(Error::domain(format!(
            "alpha({i},{j}) undefined for g = {g}, k = {k}"
        )));
    }
    CurveWord::new(g, [1, i, j, j + k + 1 - i])
}

/// Index pairs `(i, j)` of the family `A_k`, in lexicographic order.
pub fn a_k_indices(g: usize, k: usize) -> Vec<(usize, usize)> {
    if k < 2 || g < k + 2 {
        return vec![];
    }
    (2..=k)
        .flat_map(|i| (i + 1..=i + g - k - 1).map(move |j| (i, j)))
        .collect()
}

/// The family `A_k` of curves `α(i, j)`, ordered by `(i, j)`.
pub fn generate_a_k(g: usize, k: usize) -> Vec<CurveWord> {
    a_k_indices(g, k)
        .into_iter()
        .map(|(i, j)| alpha_curve(g, k, i, j).expect("index in range"))
        .collect()
}

/// The bipartition of `{v_1..v_g}` cut out by a simple curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionSignature {
    /// Vertex indices on the side of `v_1`, ascending.
    pub block: Vec<usize>,
    /// The other side, ascending.
    pub complement: Vec<usize>,
}

/// Walks `v_1..v_g`, switching sides on each edge the curve passes through.
pub fn partition(c: &CurveWord) -> Result<PartitionSignature> {
    if !is_simple(c) {
        return Err(Error::domain(format!("{c} is not simple")));
    }
    let mut block = vec![1];
    let mut complement = vec![];
    let mut same = true;
    for v in 2..=c.g {
        if c.uses_edge(v) {
            same = !same;
        }
        if same {
            block.push(v);
        } else {
            complement.push(v);
        }
    }
    Ok(PartitionSignature { block, complement })
}

/// Order of curve points along each edge.
///
/// `edges[e - 1]` lists curve ids (indices into a curve slice) in order
/// along `e_e` starting from its lower-indexed vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub g: usize,
    pub edges: Vec<Vec<usize>>,
}

impl Placement {
    /// Points on every edge sorted by the curves' quads.
    pub fn canonical(curves: &[CurveWord]) -> Result<Self> {
        let g = common_g(curves)?;
        let mut order: Vec<usize> = (0..curves.len()).collect();
        order.sort_by_key(|&i| curves[i].quad);
        let edges = (1..=g)
            .map(|e| order.iter().copied().filter(|&i| curves[i].uses_edge(e)).collect())
            .collect();
        Ok(Placement { g, edges })
    }

    /// Boundary position of curve `id`'s point on edge `e`, increasing
    /// counterclockwise around `P`.
    fn position(&self, curves: &[CurveWord], id: usize, e: usize) -> Result<usize> {
        let list = self
            .edges
            .get(e - 1)
            .ok_or_else(|| Error::usage(format!("placement has no edge {e}")))?;
        let mut hits = list.iter().enumerate().filter(|&(_, &x)| x == id);
        let slot = match (hits.next(), hits.next()) {
            (Some((slot, _)), None) => slot,
            (None, _) => {
                return Err(Error::usage(format!(
                    "placement misses {} on edge {e}",
                    curves[id]
                )))
            }
            _ => return Err(Error::usage(format!("curve {id} listed twice on edge {e}"))),
        };
        if list.len() > curves.len() || list.iter().any(|&x| x >= curves.len() || !curves[x].uses_edge(e)) {
            return Err(Error::usage(format!("edge {e} lists a curve that avoids it")));
        }
        // Counterclockwise, e_1 runs from v_g down to its lower vertex v_1.
        let local = if e == 1 { list.len() - 1 - slot } else { slot };
        Ok((e - 1) * (curves.len() + 1) + local)
    }

    /// Directed arcs of curve `id` as boundary positions, `P` then `P̄`.
    fn arcs(&self, curves: &[CurveWord], id: usize) -> Result<[[(usize, usize); 2]; 2]> {
        let c = &curves[id];
        let pos = |(a, b): (usize, usize)| -> Result<(usize, usize)> {
            Ok((self.position(curves, id, a)?, self.position(curves, id, b)?))
        };
        let [p0, p1] = c.arcs_p();
        let [q0, q1] = c.arcs_pbar();
        Ok([[pos(p0)?, pos(p1)?], [pos(q0)?, pos(q1)?]])
    }
}

fn common_g(curves: &[CurveWord]) -> Result<usize> {
    let g = curves.first().map_or(0, |c| c.g);
    if curves.iter().any(|c| c.g != g) {
        return Err(Error::usage("curves on polygons of different sizes"));
    }
    Ok(g)
}

/// Traversal direction of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `i1 -> i2 -> i3 -> i4`.
    Forward,
    Reverse,
}

fn orient(arc: (usize, usize), o: Orientation) -> (usize, usize) {
    match o {
        Orientation::Forward => arc,
        Orientation::Reverse => (arc.1, arc.0),
    }
}

fn check_ids(curves: &[CurveWord], p: &Placement, ids: &[usize]) -> Result<()> {
    if let Some(&id) = ids.iter().find(|&&id| id >= curves.len()) {
        return Err(Error::usage(format!("no curve with id {id}")));
    }
    if p.g != common_g(curves)? || p.edges.len() != p.g {
        return Err(Error::usage("placement and curves disagree on the polygon"));
    }
    Ok(())
}

/// Crossings between curves `a` and `b` under `p`, summed over `P` and
/// `P̄`. With `a == b` this counts crossings between the curve's own arcs.
pub fn crossing_count(curves: &[CurveWord], a: usize, b: usize, p: &Placement) -> Result<usize> {
    check_ids(curves, p, &[a, b])?;
    let (x, y) = (p.arcs(curves, a)?, p.arcs(curves, b)?);
    let mut n = 0;
    for side in 0..2 {
        if a == b {
            n += usize::from(interleave(x[side][0], x[side][1]));
        } else {
            for s in x[side] {
                for t in y[side] {
                    n += usize::from(interleave(s, t));
                }
            }
        }
    }
    Ok(n)
}

/// Signed count with both curves in forward orientation.
pub fn signed_crossing_sum(curves: &[CurveWord], a: usize, b: usize, p: &Placement) -> Result<i64> {
    signed_crossing_sum_oriented(curves, (a, Orientation::Forward), (b, Orientation::Forward), p)
}

/// Sum of crossing signs between two oriented curves.
///
/// At a crossing of directed arcs `s` (of the first curve) and `t` in `P`
/// the sign is `+1` when `t` starts in the counterclockwise boundary
/// interval from the start of `s` to its end, else `-1`. `P̄` carries the
/// opposite orientation, so its crossings count with the opposite sign.
pub fn signed_crossing_sum_oriented(
    curves: &[CurveWord],
    (a, oa): (usize, Orientation),
    (b, ob): (usize, Orientation),
    p: &Placement,
) -> Result<i64> {
    check_ids(curves, p, &[a, b])?;
    let (x, y) = (p.arcs(curves, a)?, p.arcs(curves, b)?);
    let mut total = 0;
    for (side, flip) in [(0, 1), (1, -1)] {
        let pairs: Vec<((usize, usize), (usize, usize))> = if a == b {
            vec![(x[side][0], x[side][1])]
        } else {
            x[side]
                .iter()
                .flat_map(|&s| y[side].iter().map(move |&t| (s, t)))
                .collect()
        };
        for (s, t) in pairs {
            let (s, t) = (orient(s, oa), orient(t, ob));
            if interleave(s, t) {
                total += flip * if ccw_between(s.0, s.1, t.0) { 1 } else { -1 };
            }
        }
    }
    Ok(total)
}

/// Every placement of two distinct curves: both orders on each shared edge.
pub fn pair_placements(c1: &CurveWord, c2: &CurveWord) -> Result<Vec<Placement>> {
    let curves = [*c1, *c2];
    let g = common_g(&curves)?;
    let shared: Vec<usize> = (1..=g).filter(|&e| c1.uses_edge(e) && c2.uses_edge(e)).collect();
    let base = Placement::canonical(&curves)?;
    Ok((0u32..1 << shared.len())
        .map(|mask| {
            let mut p = base.clone();
            for (bit, &e) in shared.iter().enumerate() {
                p.edges[e - 1] = if mask >> bit & 1 == 1 { vec![1, 0] } else { vec![0, 1] };
            }
            p
        })
        .collect())
}

/// Fewest crossings of two curves over all their placements.
pub fn minimal_crossings(c1: &CurveWord, c2: &CurveWord) -> Result<usize> {
    let curves = [*c1, *c2];
    if c1 == c2 {
        let p = Placement::canonical(&curves[..1])?;
        return crossing_count(&curves[..1], 0, 0, &p);
    }
    let mut best = usize::MAX;
    for p in pair_placements(c1, c2)? {
        best = best.min(crossing_count(&curves, 0, 1, &p)?);
    }
    Ok(best)
}

/// Pairwise crossing counts; diagonal entries are self-crossings.
pub fn crossing_matrix(curves: &[CurveWord], p: &Placement) -> Result<Vec<Vec<usize>>> {
    (0..curves.len())
        .into_par_iter()
        .map(|a| (0..curves.len()).map(|b| crossing_count(curves, a, b, p)).collect())
        .collect()
}

/// Pairwise [`minimal_crossings`].
pub fn minimal_crossing_matrix(curves: &[CurveWord]) -> Result<Vec<Vec<usize>>> {
    (0..curves.len())
        .into_par_iter()
        .map(|a| (0..curves.len()).map(|b| minimal_crossings(&curves[a], &curves[b])).collect())
        .collect()
}

/// Both polygons side by side, `P̄` mirrored so that glued edges face each
/// other, with every arc drawn as a chord between edge points.
pub fn render_svg(curves: &[CurveWord], p: &Placement) -> Result<String> {
    let g = p.g;
    check_ids(curves, p, &[])?;
    let r = 180.0;
    let (w, h) = (4.0 * r + 120.0, 2.0 * r + 80.0);
    let centres = [(r + 40.0, h / 2.0), (3.0 * r + 80.0, h / 2.0)];
    let vertex = |side: usize, v: usize| -> (f64, f64) {
        // v_g sits at the bottom; P̄ is reflected left to right.
        let t = std::f64::consts::TAU * (v % g) as f64 / g as f64 - std::f64::consts::FRAC_PI_2
            + std::f64::consts::TAU / g as f64 / 2.0;
        let (cx, cy) = centres[side];
        let x = r * t.cos();
        (if side == 0 { cx + x } else { cx - x }, cy - r * t.sin())
    };
    let point = |side: usize, id: usize, e: usize| -> Result<(f64, f64)> {
        let list = &p.edges[e - 1];
        let slot = list.iter().position(|&x| x == id).ok_or_else(|| {
            Error::usage(format!("placement misses curve {id} on edge {e}"))
        })?;
        let (lo, hi) = if e == 1 { (1, g) } else { (e - 1, e) };
        let f = (slot + 1) as f64 / (list.len() + 1) as f64;
        let (a, b) = (vertex(side, lo), vertex(side, hi));
        Ok((a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1)))
    };
    let palette = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d"];
    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    for (side, &(cx, cy)) in centres.iter().enumerate() {
        let pts: Vec<String> = (1..=g)
            .map(|v| {
                let (x, y) = vertex(side, v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(svg, r#"<polygon points="{}" fill="none" stroke="black"/>"#, pts.join(" ")).unwrap();
        for v in 1..=g {
            let (x, y) = vertex(side, v);
            writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3"/>"#).unwrap();
            let (lx, ly) = (cx + (x - cx) * 1.1, cy + (y - cy) * 1.1);
            writeln!(svg, r#"<text x="{lx:.2}" y="{ly:.2}" font-size="11" text-anchor="middle">v{v}</text>"#).unwrap();
        }
        let label = if side == 0 { "P" } else { "P-bar" };
        writeln!(svg, r#"<text x="{cx:.2}" y="20" font-size="14" text-anchor="middle">{label}</text>"#).unwrap();
    }
    for (id, c) in curves.iter().enumerate() {
        let colour = palette[id % palette.len()];
        for (side, arcs) in [(0, c.arcs_p()), (1, c.arcs_pbar())] {
            for (s, t) in arcs {
                let (a, b) = (point(side, id, s)?, point(side, id, t)?);
                writeln!(
                    svg,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="2"><title>{c}</title></line>"#,
                    a.0, a.1, b.0, b.1
                )
                .unwrap();
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
