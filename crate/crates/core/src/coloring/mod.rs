//! Edge colorings of bipartite multigraphs.
//!
//! * [`balanced_k_coloring`]: balanced `k`-edge coloring (vertex and bundle balance).
//! * [`paired_balanced_2_coloring`]: balanced 2-coloring that splits every pair of
//!   a pairing on the `X` side.
//! * [`rebalance_drop_one`]: alternating-path exchange lowering one `X` degree.
//!
//! Edges are addressed by id (their index), so parallel edges stay distinct.

mod balanced;
mod paired;
mod reduction;

use std::collections::BTreeMap;

pub use balanced::{balanced_k_coloring, balanced_k_coloring_seeded};
pub use paired::{paired_balanced_2_coloring, paired_balanced_2_coloring_seeded, Pairing};
pub use reduction::{rebalance_drop_one, reduction_postconditions_hold};

/// A bipartite multigraph with sides `X = 0..x_size` and `Y = 0..y_size`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BipartiteMultigraph {
    x_size: usize,
    y_size: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteMultigraph {
    pub fn new(x_size: usize, y_size: usize) -> Self {
        BipartiteMultigraph { x_size, y_size, edges: Vec::new() }
    }

    pub fn from_edges(x_size: usize, y_size: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut g = Self::new(x_size, y_size);
        for (x, y) in edges {
            g.add_edge(x, y);
        }
        g
    }

    /// Adds an `x`-`y` edge and returns its id.
    pub fn add_edge(&mut self, x: usize, y: usize) -> usize {
        assert!(x < self.x_size && y < self.y_size, "edge ({x},{y}) out of range");
        self.edges.push((x, y));
        self.edges.len() - 1
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn x_incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.x_size];
        for (id, &(x, _)) in self.edges.iter().enumerate() {
            inc[x].push(id);
        }
        inc
    }

    pub fn y_incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.y_size];
        for (id, &(_, y)) in self.edges.iter().enumerate() {
            inc[y].push(id);
        }
        inc
    }

    /// Parallel classes: `(x, y)` to the ascending ids of its edges.
    pub fn bundles(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut b: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (id, &xy) in self.edges.iter().enumerate() {
            b.entry(xy).or_default().push(id);
        }
        b
    }

    /// `(deg_X, deg_Y)` counted over the edges whose ids are yielded.
    pub fn degrees_of(&self, ids: impl IntoIterator<Item = usize>) -> (Vec<usize>, Vec<usize>) {
        let mut dx = vec![0; self.x_size];
        let mut dy = vec![0; self.y_size];
        for id in ids {
            let (x, y) = self.edges[id];
            dx[x] += 1;
            dy[y] += 1;
        }
        (dx, dy)
    }

    pub fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        self.degrees_of(0..self.edges.len())
    }
}

/// A total map from edge ids to colors `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    pub k: usize,
    pub color: Vec<usize>,
}

impl EdgeColoring {
    /// Edge ids of color `c`, ascending.
    pub fn class(&self, c: usize) -> Vec<usize> {
        (0..self.color.len()).filter(|&e| self.color[e] == c).collect()
    }
}

/// Where a coloring fails to be balanced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Imbalance {
    X { x: usize, colors: (usize, usize) },
    Y { y: usize, colors: (usize, usize) },
    Bundle { x: usize, y: usize, colors: (usize, usize) },
}

impl Imbalance {
    pub fn colors(&self) -> (usize, usize) {
        match *self {
            Imbalance::X { colors, .. } | Imbalance::Y { colors, .. } | Imbalance::Bundle { colors, .. } => colors,
        }
    }
}

fn spread(counts: &[usize]) -> Option<(usize, usize)> {
    let mut hi = 0;
    let mut lo = 0;
    for (c, &v) in counts.iter().enumerate() {
        if v > counts[hi] {
            hi = c;
        }
        if v < counts[lo] {
            lo = c;
        }
    }
    (counts[hi] >= counts[lo] + 2).then_some((hi, lo))
}

/// The first balance violation in vertex order (`X`, then `Y`, then bundles),
/// reported as (over-used color, under-used color).
pub fn find_imbalance(g: &BipartiteMultigraph, coloring: &EdgeColoring) -> Option<Imbalance> {
    let k = coloring.k;
    let mut cx = vec![0usize; g.x_size * k];
    let mut cy = vec![0usize; g.y_size * k];
    for (id, &(x, y)) in g.edges.iter().enumerate() {
        let c = coloring.color[id];
        cx[x * k + c] += 1;
        cy[y * k + c] += 1;
    }
    for x in 0..g.x_size {
        if let Some(colors) = spread(&cx[x * k..(x + 1) * k]) {
            return Some(Imbalance::X { x, colors });
        }
    }
    for y in 0..g.y_size {
        if let Some(colors) = spread(&cy[y * k..(y + 1) * k]) {
            return Some(Imbalance::Y { y, colors });
        }
    }
    let mut counts = vec![0usize; k];
    for (&(x, y), ids) in &g.bundles() {
        if ids.len() < 2 {
            continue;
        }
        counts.iter_mut().for_each(|c| *c = 0);
        for &id in ids {
            counts[coloring.color[id]] += 1;
        }
        if let Some(colors) = spread(&counts) {
            return Some(Imbalance::Bundle { x, y, colors });
        }
    }
    None
}

/// Both balance conditions: per vertex and per bundle, color counts differ by at most one.
pub fn is_balanced(g: &BipartiteMultigraph, coloring: &EdgeColoring) -> bool {
    coloring.color.len() == g.num_edges()
        && coloring.color.iter().all(|&c| c < coloring.k)
        && find_imbalance(g, coloring).is_none()
}

/// Sum of squared color counts over vertices and bundles; strictly decreases
/// under every repair step of [`balanced_k_coloring`].
pub fn balance_potential(g: &BipartiteMultigraph, coloring: &EdgeColoring) -> u64 {
    let k = coloring.k;
    let mut cx = vec![0u64; g.x_size * k];
    let mut cy = vec![0u64; g.y_size * k];
    let mut cb: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
    for (id, &(x, y)) in g.edges.iter().enumerate() {
        let c = coloring.color[id];
        cx[x * k + c] += 1;
        cy[y * k + c] += 1;
        *cb.entry((x, y, c)).or_default() += 1;
    }
    cx.iter().chain(&cy).chain(cb.values()).map(|v| v * v).sum()
}
