//! Basic graph types: edges, simple graphs, labeled edge decompositions of
//! complete graphs, linear-forest analysis and the Walecki construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense 0-based vertex index of a host complete graph `K_m`.
pub type Vertex = usize;

/// An undirected edge without loops, stored with `lo < hi`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    /// Panics on a loop; use [`Edge::try_new`] for untrusted input.
    pub fn new(u: Vertex, v: Vertex) -> Self {
        Self::try_new(u, v).expect("loop edge")
    }

    pub fn try_new(u: Vertex, v: Vertex) -> Result<Self> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Ok(Edge { lo: u, hi: v }),
            std::cmp::Ordering::Greater => Ok(Edge { lo: v, hi: u }),
            std::cmp::Ordering::Equal => Err(Error::InvalidInput(format!("loop at vertex {u}"))),
        }
    }

    pub fn lo(self) -> Vertex {
        self.lo
    }

    pub fn hi(self) -> Vertex {
        self.hi
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.lo, self.hi)
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`. `v` must be an endpoint.
    pub fn other(self, v: Vertex) -> Vertex {
        debug_assert!(self.contains(v));
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn map(self, f: impl Fn(Vertex) -> Vertex) -> Edge {
        Edge::new(f(self.lo), f(self.hi))
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lo, self.hi)
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = Error;
    fn try_from(p: [usize; 2]) -> Result<Self> {
        Edge::try_new(p[0], p[1])
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.lo, e.hi]
    }
}

/// A simple graph on dense vertices `0..num_vertices` with an ordered edge list.
///
/// The edge order is significant: certificates report assignments aligned with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    num_vertices: usize,
    edges: Vec<Edge>,
}

impl SimpleGraph {
    pub fn new(num_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &e in &edges {
            if e.hi() >= num_vertices {
                return Err(Error::InvalidInput(format!(
                    "edge {e:?} out of range for {num_vertices} vertices"
                )));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidInput(format!("duplicate edge {e:?}")));
            }
        }
        Ok(SimpleGraph { num_vertices, edges })
    }

    /// Builds a graph from edges, taking the vertex count as one more than the
    /// largest endpoint.
    pub fn from_edges(edges: Vec<Edge>) -> Result<Self> {
        let nv = edges.iter().map(|e| e.hi() + 1).max().unwrap_or(0);
        Self::new(nv, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_vertices];
        for e in &self.edges {
            d[e.lo()] += 1;
            d[e.hi()] += 1;
        }
        d
    }

    /// Vertices with at least one incident edge, ascending.
    pub fn covered_vertices(&self) -> Vec<Vertex> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(v, _)| v)
            .collect()
    }

    /// Connected components as lists of edge indices, ordered by their smallest
    /// edge index; isolated vertices are ignored.
    pub fn edge_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.num_vertices);
        for e in &self.edges {
            uf.union(e.lo(), e.hi());
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut order = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let root = uf.find(e.lo());
            let entry = by_root.entry(root).or_default();
            if entry.is_empty() {
                order.push(root);
            }
            entry.push(i);
        }
        order.into_iter().map(|r| by_root.remove(&r).unwrap()).collect()
    }

    pub fn is_linear_forest(&self) -> bool {
        analyze_linear_forest(self.edges.iter().copied(), self.num_vertices).is_ok()
    }

    /// Returns the graph with vertices renamed by `perm` (old -> new) on a host of
    /// `num_vertices` vertices.
    pub fn relabeled(&self, perm: &[Vertex], num_vertices: usize) -> Result<SimpleGraph> {
        SimpleGraph::new(
            num_vertices,
            self.edges.iter().map(|e| e.map(|v| perm[v])).collect(),
        )
    }
}

/// Path structure of a linear forest inside a host `K_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForestView {
    /// Maximal paths with at least one edge; each starts at its smaller endpoint.
    pub paths: Vec<Vec<Vertex>>,
    pub isolated: BTreeSet<Vertex>,
    pub endpoints: BTreeSet<Vertex>,
    pub interior: BTreeSet<Vertex>,
}

impl LinearForestView {
    /// `path_id[v]` is the index of the path containing `v`, if any.
    pub fn path_index(&self, order: usize) -> Vec<Option<usize>> {
        let mut idx = vec![None; order];
        for (p, path) in self.paths.iter().enumerate() {
            for &v in path {
                idx[v] = Some(p);
            }
        }
        idx
    }

    /// The other endpoint of the path ending at `v`, or `v` itself when isolated.
    pub fn partner_map(&self, order: usize) -> Vec<Option<Vertex>> {
        let mut partner = vec![None; order];
        for path in &self.paths {
            let (a, b) = (path[0], *path.last().unwrap());
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        for &v in &self.isolated {
            partner[v] = Some(v);
        }
        partner
    }

    pub fn num_components(&self) -> usize {
        self.paths.len() + self.isolated.len()
    }
}

/// Analyzes `edges` as a subgraph of `K_order`.
///
/// Fails with [`Error::NotLinearForest`] if some vertex has degree at least 3 or
/// a cycle exists.
pub fn analyze_linear_forest(
    edges: impl IntoIterator<Item = Edge>,
    order: usize,
) -> Result<LinearForestView> {
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); order];
    let mut count = 0usize;
    for e in edges {
        if e.hi() >= order {
            return Err(Error::InvalidInput(format!("edge {e:?} outside K_{order}")));
        }
        adj[e.lo()].push(e.hi());
        adj[e.hi()].push(e.lo());
        count += 1;
    }
    if let Some(v) = (0..order).find(|&v| adj[v].len() >= 3) {
        return Err(Error::NotLinearForest(format!("vertex {v} has degree {}", adj[v].len())));
    }
    let mut seen = vec![false; order];
    let mut view = LinearForestView {
        paths: Vec::new(),
        isolated: BTreeSet::new(),
        endpoints: BTreeSet::new(),
        interior: BTreeSet::new(),
    };
    for v in 0..order {
        if seen[v] {
            continue;
        }
        match adj[v].len() {
            0 => {
                seen[v] = true;
                view.isolated.insert(v);
            }
            1 => {
                let mut path = vec![v];
                seen[v] = true;
                let (mut prev, mut cur) = (v, adj[v][0]);
                loop {
                    seen[cur] = true;
                    path.push(cur);
                    let next = adj[cur].iter().copied().find(|&w| w != prev);
                    match next {
                        Some(w) if adj[cur].len() == 2 => {
                            prev = cur;
                            cur = w;
                        }
                        _ => break,
                    }
                }
                view.endpoints.insert(path[0]);
                view.endpoints.insert(*path.last().unwrap());
                view.interior.extend(path[1..path.len() - 1].iter().copied());
                view.paths.push(path);
            }
            _ => {}
        }
    }
    // Anything unseen now lies on a component where every vertex has degree 2.
    if let Some(v) = (0..order).find(|&v| !seen[v]) {
        return Err(Error::NotLinearForest(format!("cycle through vertex {v}")));
    }
    debug_assert_eq!(view.num_components(), order - count);
    Ok(view)
}

/// True iff `edges` form one cycle through all `order` vertices.
pub fn is_hamiltonian_cycle<'a>(edges: impl IntoIterator<Item = &'a Edge>, order: usize) -> bool {
    let edges: Vec<Edge> = edges.into_iter().copied().collect();
    if order < 3 || edges.len() != order {
        return false;
    }
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); order];
    let mut distinct = BTreeSet::new();
    for e in &edges {
        if e.hi() >= order || !distinct.insert(*e) {
            return false;
        }
        adj[e.lo()].push(e.hi());
        adj[e.hi()].push(e.lo());
    }
    if adj.iter().any(|a| a.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut steps) = (0, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        steps += 1;
        if steps > order {
            return false;
        }
    }
    steps == order
}

/// The vertex sequence of a Hamiltonian cycle starting at vertex 0, heading to
/// its smaller neighbour.
pub fn cycle_sequence(edges: &BTreeSet<Edge>, order: usize) -> Option<Vec<Vertex>> {
    if !is_hamiltonian_cycle(edges.iter(), order) {
        return None;
    }
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); order];
    for e in edges {
        adj[e.lo()].push(e.hi());
        adj[e.hi()].push(e.lo());
    }
    let mut seq = vec![0];
    let (mut prev, mut cur) = (0, adj[0][0].min(adj[0][1]));
    while cur != 0 {
        seq.push(cur);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
    }
    Some(seq)
}

/// An edge decomposition of (a subgraph of) `K_order` into labeled classes.
///
/// Classes are 0-based here; user-facing output numbers them from 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    order: usize,
    classes: Vec<BTreeSet<Edge>>,
}

impl Decomposition {
    pub fn new(order: usize, num_classes: usize) -> Self {
        Decomposition { order, classes: vec![BTreeSet::new(); num_classes] }
    }

    pub fn from_classes(order: usize, classes: Vec<BTreeSet<Edge>>) -> Result<Self> {
        let d = Decomposition { order, classes };
        d.check_disjoint()?;
        Ok(d)
    }

    /// No disjointness check; meant for loading untrusted data that is then
    /// passed to the certificate verifier.
    pub fn from_classes_unchecked(order: usize, classes: Vec<BTreeSet<Edge>>) -> Self {
        Decomposition { order, classes }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[BTreeSet<Edge>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &BTreeSet<Edge> {
        &self.classes[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn num_edges(&self) -> usize {
        self.classes.iter().map(|c| c.len()).sum()
    }

    pub fn class_of(&self, e: Edge) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&e))
    }

    /// Inserts `e` into class `i`; the edge must be in range and not already used.
    pub fn insert(&mut self, i: usize, e: Edge) -> Result<()> {
        if e.hi() >= self.order {
            return Err(Error::InvariantViolation {
                stage: "decomposition",
                detail: format!("edge {e:?} outside K_{}", self.order),
            });
        }
        if let Some(j) = self.class_of(e) {
            return Err(Error::InvariantViolation {
                stage: "decomposition",
                detail: format!("edge {e:?} already in class {j}"),
            });
        }
        self.classes[i].insert(e);
        Ok(())
    }

    pub fn remove(&mut self, i: usize, e: Edge) -> bool {
        self.classes[i].remove(&e)
    }

    pub fn push_class(&mut self, class: BTreeSet<Edge>) {
        self.classes.push(class);
    }

    pub fn swap_classes(&mut self, i: usize, j: usize) {
        self.classes.swap(i, j);
    }

    /// Reorders classes so that new class `p` is old class `perm[p]`.
    pub fn permute_classes(&mut self, perm: &[usize]) {
        let old = std::mem::take(&mut self.classes);
        self.classes = perm.iter().map(|&p| old[p].clone()).collect();
    }

    /// Grows the host to `K_order` without adding edges.
    pub fn set_order(&mut self, order: usize) {
        assert!(order >= self.order);
        self.order = order;
    }

    /// Renames vertices by `perm` (old -> new); `perm` must be a bijection on `0..order`.
    pub fn relabel(&self, perm: &[Vertex]) -> Decomposition {
        Decomposition {
            order: self.order,
            classes: self
                .classes
                .iter()
                .map(|c| c.iter().map(|e| e.map(|v| perm[v])).collect())
                .collect(),
        }
    }

    /// Drops every vertex `>= keep` together with its edges.
    pub fn truncate(&self, keep: usize) -> Decomposition {
        Decomposition {
            order: keep,
            classes: self
                .classes
                .iter()
                .map(|c| c.iter().copied().filter(|e| e.hi() < keep).collect())
                .collect(),
        }
    }

    pub fn check_disjoint(&self) -> Result<()> {
        let mut seen = BTreeMap::new();
        for (i, c) in self.classes.iter().enumerate() {
            for &e in c {
                if e.hi() >= self.order {
                    return Err(Error::InvariantViolation {
                        stage: "decomposition",
                        detail: format!("edge {e:?} in class {i} outside K_{}", self.order),
                    });
                }
                if let Some(j) = seen.insert(e, i) {
                    return Err(Error::InvariantViolation {
                        stage: "decomposition",
                        detail: format!("edge {e:?} in classes {j} and {i}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Disjoint, and the union is all of `E(K_order)`.
    pub fn is_complete(&self) -> bool {
        self.check_disjoint().is_ok() && self.num_edges() == self.order * (self.order - 1) / 2
    }

    pub fn linear_forest(&self, i: usize) -> Result<LinearForestView> {
        analyze_linear_forest(self.classes[i].iter().copied(), self.order)
    }

    pub fn all_linear_forests(&self) -> Result<Vec<LinearForestView>> {
        (0..self.classes.len())
            .map(|i| {
                self.linear_forest(i).map_err(|e| match e {
                    Error::NotLinearForest(d) => Error::NotLinearForest(format!("class {i}: {d}")),
                    other => other,
                })
            })
            .collect()
    }

    pub fn is_hcd(&self) -> bool {
        self.is_complete() && self.classes.iter().all(|c| is_hamiltonian_cycle(c, self.order))
    }
}

/// Walecki's decomposition of `K_{2n+1}` into `n` Hamiltonian cycles.
///
/// Hub `2n`; the base path `0, 1, 2n-1, 2, 2n-2, ..., n` on `0..2n` is rotated
/// by `0..n` and both ends are joined to the hub.
pub fn walecki(n: usize) -> Decomposition {
    assert!(n >= 1, "walecki needs n >= 1");
    let m = 2 * n;
    let mut base = Vec::with_capacity(m);
    base.push(0);
    for k in 1..=n {
        base.push(k);
        if base.len() < m {
            base.push(m - k);
        }
    }
    let mut d = Decomposition::new(m + 1, n);
    for (i, class) in d.classes.iter_mut().enumerate() {
        let path: Vec<Vertex> = base.iter().map(|&v| (v + i) % m).collect();
        for w in path.windows(2) {
            class.insert(Edge::new(w[0], w[1]));
        }
        class.insert(Edge::new(m, path[0]));
        class.insert(Edge::new(m, path[m - 1]));
    }
    d
}

/// Plain union-find with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(edges: &[(usize, usize)]) -> BTreeSet<Edge> {
        edges.iter().map(|&(u, v)| Edge::new(u, v)).collect()
    }

    #[test]
    fn empty_class_is_all_isolated() {
        let view = analyze_linear_forest(std::iter::empty(), 3).unwrap();
        assert!(view.paths.is_empty());
        assert_eq!(view.isolated, [0, 1, 2].into_iter().collect());
    }

    #[test]
    fn single_path_view() {
        let view = analyze_linear_forest(set(&[(0, 1), (1, 2)]), 4).unwrap();
        assert_eq!(view.paths, vec![vec![0, 1, 2]]);
        assert_eq!(view.isolated, [3].into_iter().collect());
        assert_eq!(view.endpoints, [0, 2].into_iter().collect());
        assert_eq!(view.interior, [1].into_iter().collect());
    }

    #[test]
    fn triangle_is_not_linear_forest() {
        let err = analyze_linear_forest(set(&[(0, 1), (1, 2), (0, 2)]), 3).unwrap_err();
        assert!(matches!(err, Error::NotLinearForest(_)));
        let claw = analyze_linear_forest(set(&[(0, 1), (0, 2), (0, 3)]), 4).unwrap_err();
        assert!(matches!(claw, Error::NotLinearForest(_)));
    }

    #[test]
    fn hamiltonian_cycle_checks() {
        assert!(is_hamiltonian_cycle(&set(&[(0, 1), (1, 2), (2, 0)]), 3));
        assert!(!is_hamiltonian_cycle(&set(&[(0, 1), (1, 2), (2, 3), (3, 0)]), 5));
        // two disjoint triangles on 6 vertices
        let two = set(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        assert!(!is_hamiltonian_cycle(&two, 6));
    }

    #[test]
    fn duplicate_edges_rejected_at_construction() {
        let e = vec![Edge::new(0, 1), Edge::new(1, 2), Edge::new(2, 1)];
        assert!(SimpleGraph::from_edges(e).is_err());
        let mut d = Decomposition::new(5, 2);
        d.insert(0, Edge::new(3, 4)).unwrap();
        assert!(d.insert(1, Edge::new(4, 3)).is_err());
        assert!(Edge::try_new(2, 2).is_err());
    }

    #[test]
    fn walecki_small_cases() {
        let d1 = walecki(1);
        assert_eq!(d1.classes()[0], set(&[(0, 1), (1, 2), (0, 2)]));
        for n in 1..=20 {
            let d = walecki(n);
            assert_eq!(d.order(), 2 * n + 1);
            assert!(d.is_hcd(), "walecki({n})");
            assert!(d.sizes().iter().all(|&s| s == 2 * n + 1));
        }
        assert_eq!(walecki(4), walecki(4));
    }

    #[test]
    fn component_identity() {
        let d = walecki(4).truncate(6);
        for i in 0..d.num_classes() {
            let view = d.linear_forest(i).unwrap();
            assert_eq!(view.num_components(), 6 - d.class(i).len());
        }
    }

    #[test]
    fn components_in_edge_order() {
        let g = SimpleGraph::from_edges(vec![
            Edge::new(4, 5),
            Edge::new(0, 1),
            Edge::new(1, 2),
            Edge::new(5, 6),
        ])
        .unwrap();
        assert_eq!(g.edge_components(), vec![vec![0, 3], vec![1, 2]]);
    }
}
