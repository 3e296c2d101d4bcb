//! Instance generators: isomorphism classes of small graphs, standard
//! families, and seeded random graphs.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coloring::{BipartiteMultigraph, Pairing};
use crate::graph::{Edge, SimpleGraph, Vertex};

fn build(nv: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> SimpleGraph {
    SimpleGraph::new(nv, edges.into_iter().map(|(u, v)| Edge::new(u, v)).collect()).expect("valid family")
}

/// Path with `k` edges.
pub fn path(k: usize) -> SimpleGraph {
    build(k + 1, (0..k).map(|i| (i, i + 1)))
}

/// Cycle with `k >= 3` edges.
pub fn cycle(k: usize) -> SimpleGraph {
    assert!(k >= 3);
    build(k, (0..k).map(|i| (i, (i + 1) % k)))
}

/// Star `K_{1,k}` with center 0.
pub fn star(k: usize) -> SimpleGraph {
    build(k + 1, (1..=k).map(|i| (0, i)))
}

pub fn matching(k: usize) -> SimpleGraph {
    build(2 * k, (0..k).map(|i| (2 * i, 2 * i + 1)))
}

pub fn complete(k: usize) -> SimpleGraph {
    build(k, (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))))
}

/// Disjoint union, later parts shifted past earlier ones.
pub fn disjoint_union(parts: &[SimpleGraph]) -> SimpleGraph {
    let mut edges = Vec::new();
    let mut off = 0;
    for g in parts {
        edges.extend(g.edges().iter().map(|e| e.map(|v| v + off)));
        off += g.num_vertices();
    }
    SimpleGraph::new(off, edges).expect("disjoint union of simple graphs")
}

/// Sorted edge list of `g` after renaming by `perm`.
fn image(edges: &[(Vertex, Vertex)], perm: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let mut out: Vec<(Vertex, Vertex)> = edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (perm[u], perm[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Lexicographically least relabeled edge list over all vertex permutations.
/// Exponential in the vertex count; meant for graphs on at most 8 vertices.
pub fn canonical_form(g: &SimpleGraph) -> Vec<(Vertex, Vertex)> {
    let edges: Vec<(Vertex, Vertex)> = g.edges().iter().map(|e| e.endpoints()).collect();
    let mut perm: Vec<usize> = (0..g.num_vertices()).collect();
    let mut best = image(&edges, &perm);
    while next_permutation(&mut perm) {
        let cand = image(&edges, &perm);
        if cand < best {
            best = cand;
        }
    }
    best
}

/// One representative per isomorphism class of connected graphs with `e`
/// edges, each on vertices `0..v`.
pub fn connected_graphs(e: usize) -> Vec<SimpleGraph> {
    let mut out = BTreeSet::new();
    for v in 2..=e + 1 {
        let all: Vec<(Vertex, Vertex)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        if all.len() < e {
            continue;
        }
        let mut idx: Vec<usize> = (0..e).collect();
        loop {
            let g = build(v, idx.iter().map(|&i| all[i]));
            if g.covered_vertices().len() == v && g.edge_components().len() == 1 {
                out.insert(canonical_form(&g));
            }
            // next e-subset of all
            let Some(p) = (0..e).rev().find(|&p| idx[p] < all.len() - e + p) else { break };
            idx[p] += 1;
            for q in p + 1..e {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    out.into_iter()
        .map(|edges| {
            let nv = edges.iter().map(|&(_, b)| b + 1).max().unwrap_or(0);
            build(nv, edges)
        })
        .collect()
}

/// One representative per isomorphism class of graphs with exactly `n` edges
/// and no isolated vertices, as disjoint unions of connected pieces. Practical
/// for `n <= 6`.
pub fn graphs_with_edges(n: usize) -> Vec<SimpleGraph> {
    let pieces: Vec<Vec<SimpleGraph>> = (0..=n).map(|e| if e == 0 { Vec::new() } else { connected_graphs(e) }).collect();
    // multisets of (size, index) pairs in non-increasing order
    fn rec(
        left: usize,
        max: (usize, usize),
        pieces: &[Vec<SimpleGraph>],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<SimpleGraph>,
    ) {
        if left == 0 {
            let parts: Vec<SimpleGraph> = cur.iter().map(|&(e, i)| pieces[e][i].clone()).collect();
            out.push(disjoint_union(&parts));
            return;
        }
        for e in (1..=left.min(max.0)).rev() {
            let top = if e == max.0 { max.1 + 1 } else { pieces[e].len() };
            for i in (0..top.min(pieces[e].len())).rev() {
                cur.push((e, i));
                rec(left - e, (e, i), pieces, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, (n, pieces[n].len()), &pieces, &mut Vec::new(), &mut out);
    }
    out
}

/// Uniform random `n`-edge graph on `v` vertices (`v(v-1)/2 >= n`), isolated
/// vertices removed and the rest renumbered in order.
pub fn random_graph(rng: &mut impl Rng, n: usize, v: usize) -> SimpleGraph {
    let mut all: Vec<(Vertex, Vertex)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
    assert!(all.len() >= n, "not enough room for {n} edges on {v} vertices");
    all.shuffle(rng);
    all.truncate(n);
    let mut used: Vec<Vertex> = all.iter().flat_map(|&(a, b)| [a, b]).collect();
    used.sort_unstable();
    used.dedup();
    let mut map = vec![0; v];
    for (i, &u) in used.iter().enumerate() {
        map[u] = i;
    }
    build(used.len(), all.into_iter().map(|(a, b)| (map[a], map[b])))
}

/// Random `n`-edge graph with a random vertex budget between the densest and
/// sparsest possible shapes.
pub fn random_instance(rng: &mut impl Rng, n: usize) -> SimpleGraph {
    let min_v = (2..).find(|v| v * (v - 1) / 2 >= n).unwrap();
    let v = rng.gen_range(min_v..=2 * n);
    random_graph(rng, n, v)
}

/// Random bipartite multigraph: sides up to `max_side`, bundle multiplicities
/// up to `max_mult`, at most `max_edges` edges.
pub fn random_bipartite_multigraph(
    rng: &mut impl Rng,
    max_side: usize,
    max_mult: usize,
    max_edges: usize,
) -> BipartiteMultigraph {
    let xs = rng.gen_range(1..=max_side);
    let ys = rng.gen_range(1..=max_side);
    let mut mult: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut g = BipartiteMultigraph::new(xs, ys);
    for _ in 0..rng.gen_range(0..=xs * ys) {
        let (x, y) = (rng.gen_range(0..xs), rng.gen_range(0..ys));
        let want = rng.gen_range(1..=max_mult);
        let have = mult.entry((x, y)).or_default();
        while *have < want && g.num_edges() < max_edges {
            g.add_edge(x, y);
            *have += 1;
        }
    }
    g
}

/// Doubles every edge when some `Y` degree is odd.
pub fn with_even_y_degrees(g: BipartiteMultigraph) -> BipartiteMultigraph {
    let (_, dy) = g.degrees();
    if dy.iter().all(|d| d % 2 == 0) {
        return g;
    }
    let mut edges = g.edges().to_vec();
    edges.extend_from_slice(g.edges());
    BipartiteMultigraph::from_edges(g.x_size(), g.y_size(), edges)
}

/// Random valid pairing: edges at each `X` vertex paired up at random, about
/// 30% of candidate pairs dropped, and at most one outward pair per multi-edge
/// bundle.
pub fn random_pairing(g: &BipartiteMultigraph, rng: &mut impl Rng) -> Pairing {
    let mut pairs = Vec::new();
    let bundles = g.bundles();
    let mut outward: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for mut ids in g.x_incidence() {
        ids.shuffle(rng);
        let mut it = ids.into_iter();
        while let (Some(a), Some(b)) = (it.next(), it.next()) {
            if rng.gen_bool(0.3) {
                continue;
            }
            let (ea, eb) = (g.edge(a), g.edge(b));
            if ea != eb {
                let ok = |xy| bundles[&xy].len() < 2 || outward.get(&xy).copied().unwrap_or(0) == 0;
                if !ok(ea) || !ok(eb) {
                    continue;
                }
                *outward.entry(ea).or_default() += 1;
                *outward.entry(eb).or_default() += 1;
            }
            pairs.push((a, b));
        }
    }
    Pairing::new(pairs)
}
