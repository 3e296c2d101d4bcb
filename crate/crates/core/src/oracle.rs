//! Independent exhaustive search for small cases. Shares nothing with the
//! constructive pipeline beyond the graph types.
//!
//! The search assigns the edges of `K_{2n+1}` one at a time in lexicographic
//! order. Each class is kept a union of paths (tracked through endpoint
//! partners) and may close into a cycle only with its last edge.

use std::collections::BTreeSet;

use crate::certificate::RainbowCertificate;
use crate::error::{Error, Result};
use crate::graph::{Decomposition, Edge, SimpleGraph, Vertex};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Node cap; exceeding it yields [`Error::BudgetExceeded`].
    pub budget: u64,
    /// Permit `n > 5`.
    pub allow_large: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { budget: DEFAULT_BUDGET, allow_large: false }
    }
}

/// An HCD with the class of each `H`-edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleWitness {
    pub decomposition: Decomposition,
    pub assignment: Vec<usize>,
}

impl OracleWitness {
    pub fn into_certificate(self, h: &SimpleGraph) -> RainbowCertificate {
        RainbowCertificate {
            n: self.decomposition.num_classes(),
            decomposition: self.decomposition,
            h_edges: h.edges().to_vec(),
            assignment: self.assignment,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(OracleWitness),
    /// The whole search space was explored.
    ProvedNone,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub outcome: Outcome,
    pub nodes_explored: u64,
}

/// Edge-by-edge state: per class degrees and path-end partners.
struct Engine {
    big: usize,
    n: usize,
    deg: Vec<u8>,
    partner: Vec<Vertex>,
    size: Vec<usize>,
    /// Classes holding a prescribed edge; the rest are interchangeable while empty.
    pinned: Vec<bool>,
    classes: Vec<Vec<Edge>>,
    nodes: u64,
    budget: u64,
}

enum Stop {
    Budget,
    Done,
}

impl Engine {
    fn new(n: usize, budget: u64) -> Self {
        let big = 2 * n + 1;
        Engine {
            big,
            n,
            deg: vec![0; n * big],
            partner: (0..n).flat_map(|_| 0..big).collect(),
            size: vec![0; n],
            pinned: vec![false; n],
            classes: vec![Vec::new(); n],
            nodes: 0,
            budget,
        }
    }

    fn can_add(&self, c: usize, e: Edge) -> bool {
        let (u, v) = e.endpoints();
        let b = c * self.big;
        if self.deg[b + u] >= 2 || self.deg[b + v] >= 2 {
            return false;
        }
        // closing a cycle is allowed only as the final edge of the class
        self.partner[b + u] != v || self.size[c] + 1 == self.big
    }

    /// Adds `e` to class `c`; returns the data needed to undo.
    fn add(&mut self, c: usize, e: Edge) -> (Vertex, Vertex) {
        let (u, v) = e.endpoints();
        let b = c * self.big;
        let (pu, pv) = (self.partner[b + u], self.partner[b + v]);
        self.deg[b + u] += 1;
        self.deg[b + v] += 1;
        self.partner[b + pu] = pv;
        self.partner[b + pv] = pu;
        self.size[c] += 1;
        self.classes[c].push(e);
        (pu, pv)
    }

    fn undo(&mut self, c: usize, e: Edge, (pu, pv): (Vertex, Vertex)) {
        let (u, v) = e.endpoints();
        let b = c * self.big;
        self.classes[c].pop();
        self.size[c] -= 1;
        self.partner[b + pu] = u;
        self.partner[b + pv] = v;
        self.partner[b + u] = pu;
        self.partner[b + v] = pv;
        self.deg[b + u] -= 1;
        self.deg[b + v] -= 1;
    }

    fn run(&mut self, free: &[Edge], k: usize, emit: &mut dyn FnMut(&[Vec<Edge>]) -> bool) -> Result<(), Stop> {
        if k == free.len() {
            return if emit(&self.classes) { Err(Stop::Done) } else { Ok(()) };
        }
        let e = free[k];
        let mut tried_empty = false;
        for c in 0..self.n {
            if !self.pinned[c] && self.size[c] == 0 {
                if tried_empty {
                    continue;
                }
                tried_empty = true;
            }
            if !self.can_add(c, e) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Stop::Budget);
            }
            let undo = self.add(c, e);
            let r = self.run(free, k + 1, emit);
            self.undo(c, e, undo);
            r?;
        }
        Ok(())
    }
}

/// Exhaustive search for an HCD of `K_{2n+1}` in which `H` (with at most `n`
/// edges) is rainbow, or, with `precoloring`, in which `H`-edge `i` lies in
/// class `precoloring[i]` (not necessarily rainbow).
pub fn exhaustive_rainbow_hcd(
    h: &SimpleGraph,
    n: usize,
    precoloring: Option<&[usize]>,
    opts: &OracleOptions,
) -> Result<OracleResult> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    if n > 5 && !opts.allow_large {
        return Err(Error::PreconditionViolation(format!("oracle limited to n <= 5 (got {n})")));
    }
    let big = 2 * n + 1;
    if h.num_vertices() > big {
        return Err(Error::InfeasibleInput(format!("v(H) = {} exceeds {big}", h.num_vertices())));
    }
    let assignment: Vec<usize> = match precoloring {
        Some(p) => {
            if p.len() != h.num_edges() || p.iter().any(|&c| c >= n) {
                return Err(Error::InvalidInput("precoloring must give a class below n for every edge".into()));
            }
            p.to_vec()
        }
        None => {
            if h.num_edges() > n {
                return Err(Error::InfeasibleInput(format!("{} edges cannot be rainbow over {n} classes", h.num_edges())));
            }
            // classes are interchangeable, so edge i may go to class i
            (0..h.num_edges()).collect()
        }
    };
    let mut eng = Engine::new(n, opts.budget);
    for (&e, &c) in h.edges().iter().zip(&assignment) {
        eng.pinned[c] = true;
        if !eng.can_add(c, e) {
            return Ok(OracleResult { outcome: Outcome::ProvedNone, nodes_explored: 0 });
        }
        eng.add(c, e);
    }
    let fixed: BTreeSet<Edge> = h.edges().iter().copied().collect();
    let free: Vec<Edge> = (0..big)
        .flat_map(|u| (u + 1..big).map(move |v| Edge::new(u, v)))
        .filter(|e| !fixed.contains(e))
        .collect();
    let mut found: Option<Vec<Vec<Edge>>> = None;
    let r = eng.run(&free, 0, &mut |cls| {
        found = Some(cls.to_vec());
        true
    });
    let nodes = eng.nodes;
    match (r, found) {
        (Err(Stop::Budget), _) => Err(Error::BudgetExceeded { budget: opts.budget }),
        (_, Some(cls)) => {
            let decomposition = Decomposition::from_classes(big, cls.into_iter().map(|c| c.into_iter().collect()).collect())?;
            Ok(OracleResult { outcome: Outcome::Found(OracleWitness { decomposition, assignment }), nodes_explored: nodes })
        }
        _ => Ok(OracleResult { outcome: Outcome::ProvedNone, nodes_explored: nodes }),
    }
}

/// Classes of a decomposition as sorted edge lists, sorted.
pub type CanonicalHcd = Vec<Vec<Edge>>;

fn canonical(classes: &[Vec<Edge>]) -> CanonicalHcd {
    let mut out: Vec<Vec<Edge>> = classes
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    out.sort_unstable();
    out
}

fn check_small(n: usize) -> Result<()> {
    if n == 0 || n > 3 {
        return Err(Error::PreconditionViolation(format!("enumeration needs 1 <= n <= 3 (got {n})")));
    }
    Ok(())
}

/// Every HCD of `K_{2n+1}` (as an unordered set of cycles), found edge by edge.
pub fn enumerate_hcds(n: usize) -> Result<Vec<CanonicalHcd>> {
    check_small(n)?;
    let big = 2 * n + 1;
    let free: Vec<Edge> = (0..big).flat_map(|u| (u + 1..big).map(move |v| Edge::new(u, v))).collect();
    let mut eng = Engine::new(n, u64::MAX);
    let mut out = Vec::new();
    let _ = eng.run(&free, 0, &mut |cls| {
        out.push(canonical(cls));
        false
    });
    out.sort_unstable();
    Ok(out)
}

/// Same set as [`enumerate_hcds`], found by peeling off Hamiltonian cycles
/// through the smallest unused edge.
pub fn enumerate_hcds_by_cycles(n: usize) -> Result<Vec<CanonicalHcd>> {
    check_small(n)?;
    let big = 2 * n + 1;
    let mut used = vec![vec![false; big]; big];
    for (v, row) in used.iter_mut().enumerate() {
        row[v] = true;
    }
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Edge>> = Vec::new();
    peel(big, &mut used, &mut stack, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn peel(big: usize, used: &mut Vec<Vec<bool>>, stack: &mut Vec<Vec<Edge>>, out: &mut Vec<CanonicalHcd>) {
    let first = (0..big).flat_map(|u| (u + 1..big).map(move |v| (u, v))).find(|&(u, v)| !used[u][v]);
    let Some((a, b)) = first else {
        out.push(canonical(stack));
        return;
    };
    // all Hamiltonian cycles a-b-...-a in the unused graph, each once
    let mut path = vec![a, b];
    let mut on = vec![false; big];
    on[a] = true;
    on[b] = true;
    let mut cycles = Vec::new();
    grow(big, used, &mut path, &mut on, &mut cycles);
    for cyc in cycles {
        let edges: Vec<Edge> = (0..big).map(|k| Edge::new(cyc[k], cyc[(k + 1) % big])).collect();
        for e in &edges {
            used[e.lo()][e.hi()] = true;
            used[e.hi()][e.lo()] = true;
        }
        stack.push(edges.clone());
        peel(big, used, stack, out);
        stack.pop();
        for e in &edges {
            used[e.lo()][e.hi()] = false;
            used[e.hi()][e.lo()] = false;
        }
    }
}

fn grow(big: usize, used: &[Vec<bool>], path: &mut Vec<Vertex>, on: &mut [bool], cycles: &mut Vec<Vec<Vertex>>) {
    let end = *path.last().unwrap();
    if path.len() == big {
        if !used[end][path[0]] {
            cycles.push(path.clone());
        }
        return;
    }
    for w in 0..big {
        if !on[w] && !used[end][w] {
            on[w] = true;
            path.push(w);
            grow(big, used, path, on, cycles);
            path.pop();
            on[w] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn graph(edges: &[(usize, usize)]) -> SimpleGraph {
        SimpleGraph::from_edges(edges.iter().map(|&(u, v)| Edge::new(u, v)).collect()).unwrap()
    }

    #[test]
    fn k5_obstruction() {
        let h = graph(&[(0, 1), (1, 2), (3, 4)]);
        let r = exhaustive_rainbow_hcd(&h, 2, Some(&[0, 0, 1]), &OracleOptions::default()).unwrap();
        assert_eq!(r.outcome, Outcome::ProvedNone);
    }

    #[test]
    fn precoloring_with_path_split_is_fine() {
        // P_3 split over the two classes extends
        let h = graph(&[(0, 1), (1, 2), (3, 4)]);
        let r = exhaustive_rainbow_hcd(&h, 2, Some(&[0, 1, 1]), &OracleOptions::default()).unwrap();
        let Outcome::Found(w) = r.outcome else { panic!("expected a witness") };
        assert!(w.decomposition.is_hcd());
        assert!(w.decomposition.class(0).contains(&Edge::new(0, 1)));
    }

    #[test]
    fn p3_found_and_empty_found() {
        let h = gen::path(2);
        let r = exhaustive_rainbow_hcd(&h, 2, None, &OracleOptions::default()).unwrap();
        let Outcome::Found(w) = r.outcome else { panic!() };
        assert!(w.into_certificate(&h).verify().passed());
        let empty = SimpleGraph::new(0, vec![]).unwrap();
        let r = exhaustive_rainbow_hcd(&empty, 2, None, &OracleOptions::default()).unwrap();
        assert!(matches!(r.outcome, Outcome::Found(_)));
    }

    #[test]
    fn star_precolorings() {
        let h = gen::star(3);
        let r = exhaustive_rainbow_hcd(&h, 3, None, &OracleOptions::default()).unwrap();
        assert!(matches!(r.outcome, Outcome::Found(_)));
        let r = exhaustive_rainbow_hcd(&gen::star(2), 2, Some(&[0, 0]), &OracleOptions::default()).unwrap();
        assert!(matches!(r.outcome, Outcome::Found(_)));
        // three edges at one vertex cannot share a cycle
        let h = graph(&[(0, 1), (0, 2), (0, 3)]);
        let r = exhaustive_rainbow_hcd(&h, 2, Some(&[0, 0, 0]), &OracleOptions::default()).unwrap();
        assert_eq!(r.outcome, Outcome::ProvedNone);
    }

    #[test]
    fn budget_is_reported() {
        let h = gen::cycle(5);
        let opts = OracleOptions { budget: 10, allow_large: false };
        assert!(matches!(exhaustive_rainbow_hcd(&h, 5, None, &opts), Err(Error::BudgetExceeded { budget: 10 })));
        assert!(exhaustive_rainbow_hcd(&h, 6, None, &OracleOptions::default()).is_err());
    }

    #[test]
    fn enumeration_methods_agree() {
        assert_eq!(enumerate_hcds(1).unwrap().len(), 1);
        for n in 1..=3 {
            let a = enumerate_hcds(n).unwrap();
            let b = enumerate_hcds_by_cycles(n).unwrap();
            assert_eq!(a, b, "n = {n}");
            let distinct: BTreeSet<_> = a.iter().collect();
            assert_eq!(distinct.len(), a.len());
            for hcd in &a {
                let d = Decomposition::from_classes(2 * n + 1, hcd.iter().map(|c| c.iter().copied().collect()).collect())
                    .unwrap();
                assert!(d.is_hcd());
            }
        }
        // each Hamiltonian cycle of K_5 has a Hamiltonian complement: 12 / 2
        assert_eq!(enumerate_hcds(2).unwrap().len(), 6);
    }
}
