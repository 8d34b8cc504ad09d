//! Branch-and-bound maximum clique on dense bitset graphs.
//!
//! Greedy colouring bounds in the style of MCQ. Root branches are processed
//! in fixed-size chunks; within a chunk they run in parallel against the
//! incumbent size known at the start of the chunk, and results are merged in
//! branch order. The outcome is therefore independent of the worker count.

use rayon::prelude::*;

/// Root branches per chunk. Fixed so that merging is deterministic.
const CHUNK: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= !b);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }
}

/// Undirected graph as adjacency bitsets.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<BitSet>,
}

impl Graph {
    pub fn from_fn(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        let mut adj = vec![BitSet::new(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if edge(i, j) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Graph { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn neighbours(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    /// Relabels vertices so that `order[new] = old`.
    fn permuted(&self, order: &[usize]) -> Graph {
        let n = self.len();
        let mut pos = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let adj = order
            .iter()
            .map(|&old| {
                let mut b = BitSet::new(n);
                for u in self.adj[old].iter() {
                    b.insert(pos[u]);
                }
                b
            })
            .collect();
        Graph { adj }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CliqueLimits {
    /// Stop as soon as a clique of this size is found.
    pub target: Option<usize>,
    /// Total expansion budget across all branches.
    pub max_nodes: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueOutcome {
    /// Vertices of the best clique found, sorted ascending.
    pub clique: Vec<usize>,
    pub nodes: u64,
    /// False when the node budget cut the search.
    pub complete: bool,
    /// True when the search stopped early at the target size.
    pub reached_target: bool,
}

struct Branch<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    floor: usize,
    nodes: u64,
    cap: u64,
    cut: bool,
    target: Option<usize>,
}

impl Branch<'_> {
    fn done(&self) -> bool {
        self.cut || self.target.is_some_and(|t| self.best.len() >= t)
    }

    fn incumbent(&self) -> usize {
        self.best.len().max(self.floor)
    }

    fn expand(&mut self, r: &mut Vec<usize>, mut p: BitSet) {
        self.nodes += 1;
        if self.nodes > self.cap {
            self.cut = true;
            return;
        }
        let (order, colours) = colour_sort(self.g, &p);
        for idx in (0..order.len()).rev() {
            if self.done() || r.len() + colours[idx] <= self.incumbent() {
                return;
            }
            let v = order[idx];
            r.push(v);
            let np = p.intersect(self.g.neighbours(v));
            if np.is_empty() {
                if r.len() > self.incumbent() {
                    self.best = r.clone();
                }
            } else {
                self.expand(r, np);
            }
            r.pop();
            p.remove(v);
        }
    }
}

/// Greedy sequential colouring; returns vertices grouped by colour class and
/// the colour (1-based) of each, non-decreasing.
fn colour_sort(g: &Graph, p: &BitSet) -> (Vec<usize>, Vec<usize>) {
    let mut uncoloured = p.clone();
    let mut order = Vec::with_capacity(p.count());
    let mut colours = Vec::with_capacity(order.capacity());
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(g.neighbours(v));
            uncoloured.remove(v);
            order.push(v);
            colours.push(colour);
        }
    }
    (order, colours)
}

fn greedy(g: &Graph) -> Vec<usize> {
    let mut clique = Vec::new();
    let mut cand = BitSet::new(g.len());
    (0..g.len()).for_each(|i| cand.insert(i));
    while let Some(v) = cand.first() {
        clique.push(v);
        cand = cand.intersect(g.neighbours(v));
    }
    clique
}

/// Maximum clique with deterministic chunked root parallelism.
pub fn max_clique(graph: &Graph, limits: CliqueLimits) -> CliqueOutcome {
    let n = graph.len();
    if n == 0 {
        return CliqueOutcome {
            clique: vec![],
            nodes: 0,
            complete: true,
            reached_target: limits.target == Some(0),
        };
    }
    // Degree-descending order, ties by original index.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    let g = graph.permuted(&order);

    let mut best = greedy(&g);
    let mut nodes: u64 = 0;
    let mut complete = true;
    let hit = |b: &Vec<usize>| limits.target.is_some_and(|t| b.len() >= t);

    let roots: Vec<usize> = (0..n).collect();
    for chunk in roots.chunks(CHUNK) {
        if hit(&best) {
            break;
        }
        let cap = match limits.max_nodes {
            Some(max) if nodes >= max => {
                complete = false;
                break;
            }
            Some(max) => max - nodes,
            None => u64::MAX,
        };
        let floor = best.len();
        let results: Vec<(Vec<usize>, u64, bool)> = chunk
            .par_iter()
            .map(|&v| {
                let mut p = g.neighbours(v).clone();
                // Only later vertices, so each clique is found in one branch.
                for u in 0..=v {
                    p.remove(u);
                }
                let mut br = Branch {
                    g: &g,
                    best: Vec::new(),
                    floor,
                    nodes: 0,
                    cap,
                    cut: false,
                    target: limits.target,
                };
                if p.count() + 1 > floor {
                    let mut r = vec![v];
                    if p.is_empty() {
                        br.best = r;
                    } else {
                        br.expand(&mut r, p);
                    }
                }
                (br.best, br.nodes, br.cut)
            })
            .collect();
        for (b, k, cut) in results {
            nodes += k;
            complete &= !cut;
            if b.len() > best.len() && !hit(&best) {
                best = b;
            }
        }
        if !complete {
            break;
        }
    }
    let reached_target = hit(&best);
    let mut clique: Vec<usize> = best.into_iter().map(|v| order[v]).collect();
    clique.sort_unstable();
    CliqueOutcome {
        clique,
        nodes,
        complete,
        reached_target,
    }
}
