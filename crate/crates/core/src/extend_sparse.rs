//! Adding the `K_2` components of `H`: a decomposition of `K_{2s+r}` is grown
//! to `K_{2s+r+2}` by two new vertices whose joining edge goes to a fresh class,
//! until all `n - t` of them are placed.
//!
//! Each step builds the auxiliary class/vertex multigraph, derives the two
//! attachment graphs `G_1`, `G_2` from balanced colorings, checks them, and
//! attaches the new vertices.

use std::collections::{BTreeMap, BTreeSet};

use crate::coloring::{
    balanced_k_coloring, balanced_k_coloring_seeded, paired_balanced_2_coloring_seeded,
    rebalance_drop_one, BipartiteMultigraph, Pairing,
};
use crate::error::{Error, Result};
use crate::graph::{Decomposition, Edge, Vertex};

/// Decomposition of `K_{2s+r}` after `s` steps; the first `t + s` classes hold
/// one edge of `H` each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendState {
    pub q: Decomposition,
    pub s: usize,
    pub t: usize,
    pub r: usize,
    pub n: usize,
}

impl ExtendState {
    pub fn m(&self) -> usize {
        2 * self.s + self.r
    }

    pub fn k(&self) -> i64 {
        2 * self.n as i64 - 2 * self.s as i64 - self.r as i64 + 1
    }

    /// Size floor of class `i`: `4s+2r-2n-1` for the rainbow prefix, one more above it.
    pub fn floor(&self, i: usize) -> i64 {
        let base = 4 * self.s as i64 + 2 * self.r as i64 - 2 * self.n as i64 - 1;
        if i < self.t + self.s {
            base
        } else {
            base + 1
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        let m = self.m();
        let fail = |d: String| Err(Error::invariant("extend", d));
        if self.q.order() != m || self.q.num_classes() != self.n || !self.q.is_complete() {
            return fail(format!("state is not a decomposition of K_{m} into {} classes", self.n));
        }
        self.q.all_linear_forests().map_err(|e| Error::invariant("extend", e.to_string()))?;
        for i in 0..self.n {
            if (self.q.class(i).len() as i64) < self.floor(i) {
                return fail(format!(
                    "class {i} has {} edges, floor {} at s = {}",
                    self.q.class(i).len(),
                    self.floor(i),
                    self.s
                ));
            }
        }
        Ok(())
    }
}

/// The class/vertex multigraph: `X` = classes, `Y` = vertices; one edge to each
/// path endpoint and two to each isolated vertex of the class.
#[derive(Clone, Debug)]
pub struct AuxiliaryGraph {
    pub graph: BipartiteMultigraph,
    /// `x_i` with `deg(c_i) = 2k - 2 x_i`.
    pub slack: Vec<i64>,
    /// `partner[i][u]`: other endpoint of `u`'s path in class `i` (`u` if isolated).
    pub partner: Vec<Vec<Option<Vertex>>>,
}

pub fn build_auxiliary(state: &ExtendState) -> Result<AuxiliaryGraph> {
    let (n, m, k) = (state.n, state.m(), state.k());
    let mut g = BipartiteMultigraph::new(n, m);
    let mut partner = Vec::with_capacity(n);
    for i in 0..n {
        let view = state.q.linear_forest(i)?;
        for u in 0..m {
            if view.isolated.contains(&u) {
                g.add_edge(i, u);
                g.add_edge(i, u);
            } else if view.endpoints.contains(&u) {
                g.add_edge(i, u);
            }
        }
        partner.push(view.partner_map(m));
    }
    let (dx, dy) = g.degrees();
    if let Some(u) = (0..m).find(|&u| dy[u] as i64 != k) {
        return Err(Error::invariant("auxiliary", format!("deg(u_{u}) = {} but k = {k}", dy[u])));
    }
    let mut slack = Vec::with_capacity(n);
    for i in 0..n {
        let want = 4 * state.s + 2 * state.r - 2 * state.q.class(i).len();
        if dx[i] != want {
            return Err(Error::invariant("auxiliary", format!("deg(c_{i}) = {} but expected {want}", dx[i])));
        }
        slack.push(k - dx[i] as i64 / 2);
    }
    Ok(AuxiliaryGraph { graph: g, slack, partner })
}

/// Two attachment graphs as (class, vertex) incidences; `bridge` is the class
/// that receives the edge between the two new vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim1Witness {
    pub g1: Vec<(usize, Vertex)>,
    pub g2: Vec<(usize, Vertex)>,
    pub bridge: usize,
}

/// Lower bound on `deg_G1(c_i) + deg_G2(c_i)`.
fn required_total(state: &ExtendState, aux: &AuxiliaryGraph, bridge: usize, i: usize) -> i64 {
    let x = aux.slack[i];
    if i < state.t + state.s {
        4 - x
    } else if i == bridge {
        3 - x
    } else {
        5 - x
    }
}

/// Checks every condition on a witness; returns the first failure.
pub fn verify_claim1(state: &ExtendState, aux: &AuxiliaryGraph, w: &Claim1Witness) -> std::result::Result<(), String> {
    let (n, m) = (state.n, state.m());
    let rainbow = state.t + state.s;
    if w.bridge < rainbow || w.bridge >= n {
        return Err(format!("bridge class {} outside [{rainbow}, {n})", w.bridge));
    }
    let mult: BTreeMap<(usize, Vertex), usize> = aux.graph.bundles().into_iter().map(|(k, v)| (k, v.len())).collect();
    let mut total = vec![0i64; n];
    let mut per_side: Vec<Vec<Vec<Vertex>>> = Vec::new();
    for (side, g) in [&w.g1, &w.g2].into_iter().enumerate() {
        let mut du = vec![0usize; m];
        let mut at: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for &(i, u) in g {
            if i >= n || u >= m || !mult.contains_key(&(i, u)) {
                return Err(format!("G_{}: ({i}, {u}) is not an auxiliary edge", side + 1));
            }
            du[u] += 1;
            at[i].push(u);
        }
        if let Some(u) = (0..m).find(|&u| du[u] != 1) {
            return Err(format!("(i) G_{}: vertex {u} has degree {}", side + 1, du[u]));
        }
        for i in 0..n {
            let cap = if i == w.bridge { 1 } else { 2 };
            if at[i].len() > cap {
                return Err(format!("(ii) G_{}: class {i} has degree {}", side + 1, at[i].len()));
            }
            if let [a, b] = at[i][..] {
                if a == b || aux.partner[i][a] == Some(b) {
                    return Err(format!("(iv) G_{}: class {i} joins both ends of a path ({a}, {b})", side + 1));
                }
            }
            total[i] += at[i].len() as i64;
        }
        per_side.push(at);
    }
    for i in 0..n {
        let need = required_total(state, aux, w.bridge, i);
        if total[i] < need {
            return Err(format!("(iii) class {i} gets {} attachments, needs {need}", total[i]));
        }
    }
    let b = w.bridge;
    if let ([a], [c]) = (&per_side[0][b][..], &per_side[1][b][..]) {
        if a == c || aux.partner[b][*a] == Some(*c) {
            return Err(format!("(v) bridge class {b} closes a path ({a}, {c})"));
        }
    }
    let s1: BTreeSet<(usize, Vertex)> = w.g1.iter().copied().collect();
    if let Some(p) = w.g2.iter().find(|p| s1.contains(p)) {
        return Err(format!("(v) parallel edge {p:?} in G_1 and G_2"));
    }
    Ok(())
}

/// How a witness was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessRoute {
    /// The coloring chain followed by a balanced 2-split.
    Coloring,
    /// The coloring chain, with the final split found by search.
    ColoringSearch,
    /// Direct search on the auxiliary graph.
    Search,
}

impl WitnessRoute {
    pub fn tag(self) -> &'static str {
        match self {
            WitnessRoute::Coloring => "claim1:coloring",
            WitnessRoute::ColoringSearch => "claim1:coloring+split-search",
            WitnessRoute::Search => "claim1:search",
        }
    }
}

const SEED_ATTEMPTS: u64 = 24;
const SEARCH_BUDGET: u64 = 2_000_000;

/// Finds a verified witness: the coloring chain under several seeds, then a
/// direct search.
pub fn realize_claim1(
    state: &ExtendState,
    aux: &AuxiliaryGraph,
    seed: u64,
) -> Result<(Claim1Witness, WitnessRoute)> {
    if state.k() < 4 {
        return Err(Error::PreconditionViolation(format!("k = {} < 4", state.k())));
    }
    let mut last = String::new();
    for attempt in 0..SEED_ATTEMPTS {
        let s = if attempt == 0 { None } else { Some(seed.wrapping_mul(0x9E37_79B9).wrapping_add(attempt)) };
        match coloring_chain(state, aux, s, attempt as usize) {
            Ok((w, route)) => match verify_claim1(state, aux, &w) {
                Ok(()) => return Ok((w, route)),
                Err(e) => last = e,
            },
            Err(e) => last = e,
        }
    }
    match search_witness(state, aux) {
        Some(w) => {
            verify_claim1(state, aux, &w).map_err(|detail| Error::WitnessRejected { seed, detail })?;
            Ok((w, WitnessRoute::Search))
        }
        None => Err(Error::WitnessRejected {
            seed,
            detail: format!("no witness at s = {} (last rejection: {last})", state.s),
        }),
    }
}

/// The coloring chain; failures are reported as text so the caller can retry.
fn coloring_chain(
    state: &ExtendState,
    aux: &AuxiliaryGraph,
    seed: Option<u64>,
    pick: usize,
) -> std::result::Result<(Claim1Witness, WitnessRoute), String> {
    let (n, m) = (state.n, state.m());
    let k = state.k() as usize;
    let rainbow = state.t + state.s;
    let u_prime = m;

    // doubled graph plus u' with four edges to each class outside the prefix
    let mut hat = BipartiteMultigraph::new(n, m + 1);
    let mut orig: Vec<Option<usize>> = Vec::new();
    for (id, &(i, u)) in aux.graph.edges().iter().enumerate() {
        for _ in 0..2 {
            hat.add_edge(i, u);
            orig.push(Some(id));
        }
    }
    for i in rainbow..n {
        for _ in 0..4 {
            hat.add_edge(i, u_prime);
            orig.push(None);
        }
    }
    let coloring = balanced_k_coloring_seeded(&hat, k, seed);
    let color = &coloring.color;
    let uprime_edges: Vec<usize> = (0..hat.num_edges()).filter(|&e| hat.edge(e).1 == u_prime).collect();

    let mut count = vec![0usize; k];
    for &e in &uprime_edges {
        count[color[e]] += 1;
    }
    let candidates: Vec<usize> = (0..k).filter(|&c| count[c] == 1).collect();
    if candidates.is_empty() {
        return Err("no color with exactly one u' edge".into());
    }
    let l1 = candidates[pick % candidates.len()];
    let e_l1 = *uprime_edges.iter().find(|&&e| color[e] == l1).unwrap();
    let bridge = hat.edge(e_l1).0;
    let mut others: Vec<usize> = uprime_edges
        .iter()
        .filter(|&&e| hat.edge(e).0 == bridge && e != e_l1)
        .map(|&e| color[e])
        .collect();
    others.sort_unstable();
    others.dedup();
    if others.len() != 3 || others.contains(&l1) {
        return Err(format!("u' edges to class {bridge} do not use four colors"));
    }
    let (l2, l3, l4) = (others[0], others[1], others[2]);

    let hat_class = |c: usize| -> Vec<usize> {
        (0..hat.num_edges()).filter(|&e| color[e] == c && hat.edge(e).1 != u_prime).collect()
    };
    let reduce = |a: Vec<usize>, b: Vec<usize>| -> std::result::Result<Vec<usize>, String> {
        let deg = a.iter().filter(|&&e| hat.edge(e).0 == bridge).count();
        if deg <= 2 {
            return Ok(a);
        }
        let ids: Vec<usize> = a.iter().chain(&b).copied().collect();
        let sub = BipartiteMultigraph::from_edges(n, m, ids.iter().map(|&e| hat.edge(e)).collect());
        let a_local: Vec<usize> = (0..a.len()).collect();
        let b_local: Vec<usize> = (a.len()..ids.len()).collect();
        let c = rebalance_drop_one(&sub, &a_local, &b_local, bridge, 4).map_err(|e| e.to_string())?;
        Ok(c.into_iter().map(|l| ids[l]).collect())
    };
    let l1p = reduce(hat_class(l1), hat_class(l2))?;
    let l3p = reduce(hat_class(l3), hat_class(l4))?;

    // F = hat[L'], pairing at the classes
    let lp: Vec<usize> = l1p.iter().chain(&l3p).copied().collect();
    let f = BipartiteMultigraph::from_edges(n, m, lp.iter().map(|&e| hat.edge(e)).collect());
    let pairing = bundle_pairing(&f, aux);
    let (e1, e2) = paired_balanced_2_coloring_seeded(&f, &pairing, seed).map_err(|e| e.to_string())?;

    let side_ok = |side: &[usize]| {
        let mut deg = vec![0i64; n];
        for &l in side {
            deg[f.edge(l).0] += 1;
        }
        (0..n).all(|i| deg[i] >= required_total(state, aux, bridge, i))
    };
    let chosen: Vec<&Vec<usize>> = [&e1, &e2].into_iter().filter(|s| side_ok(s)).collect();
    if chosen.is_empty() {
        return Err("neither side of the paired split meets the attachment floors".into());
    }
    let mut last = String::new();
    for side in chosen {
        let inc: Vec<(usize, Vertex)> = side.iter().map(|&l| f.edge(l)).collect();
        // plain balanced 2-split first
        let sub = BipartiteMultigraph::from_edges(n, m, inc.clone());
        let split = balanced_k_coloring(&sub, 2);
        let g1: Vec<(usize, Vertex)> = (0..inc.len()).filter(|&e| split.color[e] == 0).map(|e| inc[e]).collect();
        let g2: Vec<(usize, Vertex)> = (0..inc.len()).filter(|&e| split.color[e] == 1).map(|e| inc[e]).collect();
        let w = Claim1Witness { g1: sorted(g1), g2: sorted(g2), bridge };
        match verify_claim1(state, aux, &w) {
            Ok(()) => return Ok((w, WitnessRoute::Coloring)),
            Err(e) => last = e,
        }
        if let Some(w) = orient_split(state, aux, &inc, bridge) {
            return Ok((w, WitnessRoute::ColoringSearch));
        }
    }
    Err(format!("split rejected: {last}"))
}

fn sorted(mut v: Vec<(usize, Vertex)>) -> Vec<(usize, Vertex)> {
    v.sort_unstable();
    v
}

/// Pairs at each class: parallel copies first, then one edge to each end of a
/// path of that class. Remaining edges are paired by the coloring routine.
fn bundle_pairing(f: &BipartiteMultigraph, aux: &AuxiliaryGraph) -> Pairing {
    let mut pairs = Vec::new();
    let mut leftover: BTreeMap<(usize, Vertex), usize> = BTreeMap::new();
    for (&(i, u), ids) in &f.bundles() {
        for ch in ids.chunks(2) {
            if let [a, b] = *ch {
                pairs.push((a, b));
            } else {
                leftover.insert((i, u), ch[0]);
            }
        }
    }
    let keys: Vec<(usize, Vertex)> = leftover.keys().copied().collect();
    for (i, u) in keys {
        let Some(&e) = leftover.get(&(i, u)) else { continue };
        match aux.partner[i][u] {
            Some(w) if w != u => {
                if let Some(&e2) = leftover.get(&(i, w)) {
                    pairs.push((e, e2));
                    leftover.remove(&(i, u));
                    leftover.remove(&(i, w));
                }
            }
            _ => {}
        }
    }
    Pairing::new(pairs)
}

/// Splits the incidences (two per vertex) between `G_1` and `G_2` by
/// backtracking over which of its two incidences each vertex sends to `G_1`.
fn orient_split(
    state: &ExtendState,
    aux: &AuxiliaryGraph,
    inc: &[(usize, Vertex)],
    bridge: usize,
) -> Option<Claim1Witness> {
    let (n, m) = (state.n, state.m());
    let mut per_u: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &(i, u) in inc {
        per_u[u].push(i);
    }
    if per_u.iter().any(|v| v.len() != 2 || v[0] == v[1]) {
        return None;
    }
    struct Ctx<'a> {
        per_u: &'a [Vec<usize>],
        aux: &'a AuxiliaryGraph,
        bridge: usize,
        at: [Vec<Vec<Vertex>>; 2],
        budget: u64,
    }
    fn ok_add(ctx: &Ctx, side: usize, i: usize, u: Vertex) -> bool {
        let cur = &ctx.at[side][i];
        let cap = if i == ctx.bridge { 1 } else { 2 };
        if cur.len() >= cap {
            return false;
        }
        if cur.iter().any(|&a| ctx.aux.partner[i][a] == Some(u)) {
            return false;
        }
        if i == ctx.bridge {
            let other = &ctx.at[1 - side][i];
            if other.iter().any(|&a| a == u || ctx.aux.partner[i][a] == Some(u)) {
                return false;
            }
        }
        true
    }
    fn go(ctx: &mut Ctx, u: usize) -> bool {
        if u == ctx.per_u.len() {
            return true;
        }
        if ctx.budget == 0 {
            return false;
        }
        ctx.budget -= 1;
        let (a, b) = (ctx.per_u[u][0], ctx.per_u[u][1]);
        for (c1, c2) in [(a, b), (b, a)] {
            if ok_add(ctx, 0, c1, u) {
                ctx.at[0][c1].push(u);
                if ok_add(ctx, 1, c2, u) {
                    ctx.at[1][c2].push(u);
                    if go(ctx, u + 1) {
                        return true;
                    }
                    ctx.at[1][c2].pop();
                }
                ctx.at[0][c1].pop();
            }
        }
        false
    }
    let mut ctx = Ctx {
        per_u: &per_u,
        aux,
        bridge,
        at: [vec![Vec::new(); n], vec![Vec::new(); n]],
        budget: SEARCH_BUDGET,
    };
    if !go(&mut ctx, 0) {
        return None;
    }
    let collect = |side: usize| {
        let mut v: Vec<(usize, Vertex)> =
            (0..n).flat_map(|i| ctx.at[side][i].iter().map(move |&u| (i, u))).collect();
        v.sort_unstable();
        v
    };
    let w = Claim1Witness { g1: collect(0), g2: collect(1), bridge };
    verify_claim1(state, aux, &w).ok().map(|_| w)
}

/// Direct backtracking over the auxiliary graph, trying each possible bridge class.
fn search_witness(state: &ExtendState, aux: &AuxiliaryGraph) -> Option<Claim1Witness> {
    let (n, m) = (state.n, state.m());
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (&(i, u), _) in &aux.graph.bundles() {
        nbrs[u].push(i);
    }
    for bridge in state.t + state.s..n {
        let need: Vec<i64> = (0..n).map(|i| required_total(state, aux, bridge, i)).collect();
        let mut budget = SEARCH_BUDGET;
        let mut at = [vec![Vec::new(); n], vec![Vec::new(); n]];
        let mut avail = vec![0i64; n];
        for u in 0..m {
            for &i in &nbrs[u] {
                avail[i] += 1;
            }
        }
        if (0..n).any(|i| avail[i] < need[i]) {
            continue;
        }
        #[allow(clippy::too_many_arguments)]
        fn go(
            u: usize,
            nbrs: &[Vec<usize>],
            aux: &AuxiliaryGraph,
            bridge: usize,
            need: &[i64],
            avail: &mut [i64],
            at: &mut [Vec<Vec<Vertex>>; 2],
            budget: &mut u64,
        ) -> bool {
            if u == nbrs.len() {
                return (0..need.len()).all(|i| (at[0][i].len() + at[1][i].len()) as i64 >= need[i]);
            }
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            for &i in &nbrs[u] {
                avail[i] -= 1;
            }
            let feasible = |at: &[Vec<Vec<Vertex>>; 2], avail: &[i64]| {
                (0..need.len()).all(|i| (at[0][i].len() + at[1][i].len()) as i64 + avail[i] >= need[i])
            };
            let can = |at: &[Vec<Vec<Vertex>>; 2], side: usize, i: usize| {
                let cap = if i == bridge { 1 } else { 2 };
                let cur = &at[side][i];
                cur.len() < cap
                    && !cur.iter().any(|&a| aux.partner[i][a] == Some(u))
                    && (i != bridge || !at[1 - side][i].iter().any(|&a| aux.partner[i][a] == Some(u)))
            };
            for &c1 in &nbrs[u] {
                for &c2 in &nbrs[u] {
                    if c1 == c2 || !can(at, 0, c1) || !can(at, 1, c2) {
                        continue;
                    }
                    at[0][c1].push(u);
                    at[1][c2].push(u);
                    if feasible(at, avail) && go(u + 1, nbrs, aux, bridge, need, avail, at, budget) {
                        return true;
                    }
                    at[0][c1].pop();
                    at[1][c2].pop();
                }
            }
            for &i in &nbrs[u] {
                avail[i] += 1;
            }
            false
        }
        if go(0, &nbrs, aux, bridge, &need, &mut avail, &mut at, &mut budget) {
            let collect = |side: usize| {
                let mut v: Vec<(usize, Vertex)> =
                    (0..n).flat_map(|i| at[side][i].iter().map(move |&u| (i, u))).collect();
                v.sort_unstable();
                v
            };
            return Some(Claim1Witness { g1: collect(0), g2: collect(1), bridge });
        }
    }
    None
}

/// Adds vertices `m` and `m + 1` as dictated by the witness, puts the edge
/// between them in the bridge class, and moves the bridge class to position `t + s`.
pub fn attach_pair(state: &ExtendState, w: &Claim1Witness) -> Result<ExtendState> {
    let m = state.m();
    let mut q = state.q.clone();
    q.set_order(m + 2);
    for (side, g) in [&w.g1, &w.g2].into_iter().enumerate() {
        for &(i, u) in g {
            q.insert(i, Edge::new(u, m + side))?;
        }
    }
    q.insert(w.bridge, Edge::new(m, m + 1))?;
    q.swap_classes(w.bridge, state.t + state.s);
    let next = ExtendState { q, s: state.s + 1, ..state.clone() };
    next.check_invariants()?;
    Ok(next)
}

#[derive(Clone, Debug)]
pub struct ExtendOutput {
    /// Decomposition of `K_{2n-2t+r}`; class `t + j` holds the edge
    /// `{r + 2j, r + 2j + 1}`.
    pub q: Decomposition,
    pub routes: Vec<WitnessRoute>,
}

/// Runs all `n - t` steps starting from a decomposition of `K_r`.
pub fn extend_with_k2s(p: &Decomposition, t: usize, n: usize, seed: u64) -> Result<ExtendOutput> {
    let r = p.order();
    if 2 * t < r + 1 && n > t {
        return Err(Error::PreconditionViolation(format!("r = {r} > 2t - 1 = {}", 2 * t as i64 - 1)));
    }
    let mut state = ExtendState { q: p.clone(), s: 0, t, r, n };
    state.check_invariants()?;
    let mut routes = Vec::new();
    while state.s < n - t {
        let aux = build_auxiliary(&state)?;
        let (w, route) = realize_claim1(&state, &aux, seed.wrapping_add(state.s as u64))?;
        routes.push(route);
        state = attach_pair(&state, &w)?;
        let bridge_edge = Edge::new(r + 2 * (state.s - 1), r + 2 * state.s - 1);
        if !state.q.class(t + state.s - 1).contains(&bridge_edge) {
            return Err(Error::invariant("extend", "bridge edge not in its class"));
        }
    }
    Ok(ExtendOutput { q: state.q, routes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_state() -> ExtendState {
        // n = 3, t = 2, r = 3: classes {01}, {12}, {02}
        let mut q = Decomposition::new(3, 3);
        q.insert(0, Edge::new(0, 1)).unwrap();
        q.insert(1, Edge::new(1, 2)).unwrap();
        q.insert(2, Edge::new(0, 2)).unwrap();
        ExtendState { q, s: 0, t: 2, r: 3, n: 3 }
    }

    #[test]
    fn auxiliary_degrees_triangle() {
        let st = triangle_state();
        let aux = build_auxiliary(&st).unwrap();
        let (dx, dy) = aux.graph.degrees();
        assert_eq!(dx, vec![4, 4, 4]);
        assert_eq!(dy, vec![4, 4, 4]);
        assert_eq!(st.k(), 4);
        assert_eq!(aux.slack, vec![2, 2, 2]);
    }

    #[test]
    fn auxiliary_extremes() {
        let mut q = Decomposition::new(4, 2);
        for (u, v) in [(0, 1), (1, 2), (2, 3)] {
            q.insert(0, Edge::new(u, v)).unwrap();
        }
        for (u, v) in [(0, 2), (0, 3), (1, 3)] {
            q.insert(1, Edge::new(u, v)).unwrap();
        }
        // class 1 is the path 2-0-3-1
        let st = ExtendState { q, s: 0, t: 1, r: 4, n: 2 };
        let aux = build_auxiliary(&st).unwrap();
        let (dx, _) = aux.graph.degrees();
        assert_eq!(dx, vec![2, 2]);
        let mut q = Decomposition::new(3, 2);
        for (u, v) in [(0, 1), (1, 2), (0, 2)] {
            q.insert(0, Edge::new(u, v)).ok();
        }
        let st = ExtendState { q: Decomposition::new(3, 2), s: 0, t: 1, r: 3, n: 2 };
        assert!(build_auxiliary(&st).is_err());
    }

    /// All witnesses of the triangle instance, by exhaustive enumeration.
    fn all_witnesses(st: &ExtendState, aux: &AuxiliaryGraph) -> usize {
        let m = st.m();
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (&(i, u), _) in &aux.graph.bundles() {
            nbrs[u].push(i);
        }
        let mut count = 0;
        let mut choice = vec![(0usize, 0usize); m];
        fn rec(
            u: usize,
            nbrs: &[Vec<usize>],
            choice: &mut Vec<(usize, usize)>,
            st: &ExtendState,
            aux: &AuxiliaryGraph,
            count: &mut usize,
        ) {
            if u == nbrs.len() {
                for bridge in st.t + st.s..st.n {
                    let w = Claim1Witness {
                        g1: choice.iter().enumerate().map(|(u, c)| (c.0, u)).collect(),
                        g2: choice.iter().enumerate().map(|(u, c)| (c.1, u)).collect(),
                        bridge,
                    };
                    if verify_claim1(st, aux, &w).is_ok() {
                        *count += 1;
                    }
                }
                return;
            }
            for &a in &nbrs[u] {
                for &b in &nbrs[u] {
                    choice[u] = (a, b);
                    rec(u + 1, nbrs, choice, st, aux, count);
                }
            }
        }
        rec(0, &nbrs, &mut choice, st, aux, &mut count);
        count
    }

    #[test]
    fn triangle_witness_and_step() {
        let st = triangle_state();
        let aux = build_auxiliary(&st).unwrap();
        assert!(all_witnesses(&st, &aux) > 0);
        let (w, _) = realize_claim1(&st, &aux, 0).unwrap();
        verify_claim1(&st, &aux, &w).unwrap();
        let next = attach_pair(&st, &w).unwrap();
        assert_eq!(next.q.order(), 5);
        assert_eq!(next.q.num_edges(), 10);
        assert!(next.q.sizes().iter().all(|&s| s >= 3));
        assert!(next.q.class(2).contains(&Edge::new(3, 4)));
    }

    #[test]
    fn corrupted_witnesses_rejected() {
        let st = triangle_state();
        let aux = build_auxiliary(&st).unwrap();
        let (w, _) = realize_claim1(&st, &aux, 0).unwrap();
        let mut bad = w.clone();
        bad.g1.pop();
        assert!(verify_claim1(&st, &aux, &bad).unwrap_err().contains("(i)"));
        let mut bad = w.clone();
        bad.g2 = bad.g1.clone();
        assert!(verify_claim1(&st, &aux, &bad).is_err());
        let mut bad = w.clone();
        bad.bridge = 0;
        assert!(verify_claim1(&st, &aux, &bad).is_err());
        let mut bad = w;
        let (i, u) = bad.g1[0];
        bad.g1[0] = ((i + 1) % 3, u);
        assert!(verify_claim1(&st, &aux, &bad).is_err());
    }

    #[test]
    fn k_floor_at_last_step() {
        // at s = n - t - 1, k = 2t - r + 3 >= 4 whenever r <= 2t - 1
        for t in 2..40i64 {
            for r in 3..=2 * t - 1 {
                for n in t + 1..t + 20 {
                    let s = n - t - 1;
                    let k = 2 * n - 2 * s - r + 1;
                    assert_eq!(k, 2 * t - r + 3);
                    assert!(k >= 4);
                }
            }
        }
    }

    #[test]
    fn extend_triangle_to_k5() {
        let st = triangle_state();
        let out = extend_with_k2s(&st.q, 2, 3, 0).unwrap();
        assert_eq!(out.q.order(), 5);
        assert_eq!(out.routes.len(), 1);
        let zero = extend_with_k2s(&st.q, 3, 3, 0);
        assert!(zero.is_err() || zero.unwrap().q.order() == 3);
    }
}
