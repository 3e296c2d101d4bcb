//! Rainbow embedding of the non-`K_2` part `H'` of `H` into a decomposition of
//! `K_r` (`r = v(H')`) into `n` linear forests with
//! `|P_i| >= 2r - 2n - 1` for `i < t` and `|P_i| >= 2r - 2n` otherwise.
//!
//! For `r <= n` the decomposition is built directly. Otherwise a smaller
//! instance `H''` with `s = ceil(r/2)` edges is solved recursively, its HCD of
//! `K_{2s+1}` is shrunk to `K_r`, and edges are moved from large classes to
//! the new small ones.

use std::collections::{BTreeMap, BTreeSet};

use crate::certificate::RainbowCertificate;
use crate::error::{Error, Result};
use crate::graph::{analyze_linear_forest, Decomposition, Edge, SimpleGraph, Vertex};

/// `H'` on vertices `0..r`, every vertex covered, every component with at
/// least two edges.
#[derive(Clone, Debug)]
pub struct DenseInstance {
    pub h_prime: SimpleGraph,
    pub n: usize,
}

impl DenseInstance {
    pub fn new(h_prime: SimpleGraph, n: usize) -> Result<Self> {
        if h_prime.num_edges() == 0 {
            return Err(Error::PreconditionViolation("H' is empty".into()));
        }
        if h_prime.num_edges() > n {
            return Err(Error::PreconditionViolation(format!(
                "t = {} exceeds n = {n}",
                h_prime.num_edges()
            )));
        }
        if h_prime.covered_vertices().len() != h_prime.num_vertices() {
            return Err(Error::PreconditionViolation("H' has isolated vertices".into()));
        }
        if let Some(c) = h_prime.edge_components().iter().find(|c| c.len() < 2) {
            return Err(Error::PreconditionViolation(format!(
                "component with edge {:?} is a K_2",
                h_prime.edges()[c[0]]
            )));
        }
        Ok(DenseInstance { h_prime, n })
    }

    pub fn t(&self) -> usize {
        self.h_prime.num_edges()
    }

    pub fn r(&self) -> usize {
        self.h_prime.num_vertices()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbedCase {
    /// `r <= n`: singletons plus matchings.
    SmallR,
    /// `n + 1 <= r` and `3r <= 4n - 1`.
    Case1,
    /// `3r >= 4n`.
    Case2,
}

/// `epsilon = max(t - n + 1, 0)`, `delta = r mod 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseParams {
    pub epsilon: usize,
    pub delta: usize,
}

impl CaseParams {
    pub fn new(t: usize, n: usize, r: usize) -> Self {
        CaseParams { epsilon: (t + 1).saturating_sub(n), delta: r % 2 }
    }
}

/// One transfer of edges from a donor class to a target class (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecipe {
    pub target: usize,
    pub donor: usize,
    /// `e'` and the blockers `e1`, `e2` when present.
    pub excluded: Vec<Edge>,
    /// Edges withheld to keep the target acyclic (second donor only).
    pub blocking: Vec<Edge>,
    pub moved: Vec<Edge>,
}

#[derive(Clone, Debug)]
pub struct EmbedOutput {
    /// `n` classes over `K_r`; `H'` edge `p` lies in class `p` for `p < t`.
    pub decomposition: Decomposition,
    pub case: EmbedCase,
    pub recipes: Vec<MoveRecipe>,
    /// Stage tags of the recursive solve, if any.
    pub recursion_trace: Vec<String>,
}

/// Callback solving a smaller instance; must return a certificate with
/// instance vertex `v` at host vertex `v`.
pub type Recurse<'a> = dyn FnMut(&SimpleGraph) -> Result<(RainbowCertificate, Vec<String>)> + 'a;

/// Builds the decomposition of `K_r` for `inst`, recursing through `recurse`.
pub fn embed_dense(inst: &DenseInstance, recurse: &mut Recurse<'_>) -> Result<EmbedOutput> {
    let (n, t, r) = (inst.n, inst.t(), inst.r());
    if r <= n {
        let decomposition = direct_small_r(inst)?;
        verify_embedding(inst, &decomposition)?;
        return Ok(EmbedOutput {
            decomposition,
            case: EmbedCase::SmallR,
            recipes: Vec::new(),
            recursion_trace: Vec::new(),
        });
    }
    let s = r.div_ceil(2);
    if s > t || s >= n {
        return Err(Error::PreconditionViolation(format!(
            "s = {s} must satisfy s <= t = {t} and s < n = {n} (r = {r})"
        )));
    }
    let case = if 3 * r < 4 * n { EmbedCase::Case1 } else { EmbedCase::Case2 };
    if case == EmbedCase::Case2 && 2 * r > 3 * t - 1 {
        return Err(Error::PreconditionViolation(format!(
            "r = {r} exceeds (3t-1)/2 for t = {t}; H' must come from a graph that is not a linear forest"
        )));
    }

    let chosen = choose_subgraph(&inst.h_prime, s);
    let (h2, h2_to_h) = induced_instance(&inst.h_prime, &chosen);
    let (cert, trace) = recurse(&h2)?;
    let report = cert.verify();
    if !report.passed() || cert.n != s || cert.h_edges.as_slice() != h2.edges() {
        return Err(Error::invariant(
            "embed recursion",
            format!("recursive certificate for s = {s} rejected:\n{report}"),
        ));
    }

    let contracted = contract_to_kr(&cert, &h2_to_h, r)?;
    let mut state = split_new_singletons(&inst.h_prime, &chosen, contracted, n)?;
    let recipes = match case {
        EmbedCase::Case1 => case1_rebalance(&mut state, inst)?,
        EmbedCase::Case2 => case2_rebalance(&mut state, inst)?,
        EmbedCase::SmallR => unreachable!(),
    };
    let decomposition = state.finish(&inst.h_prime)?;
    verify_embedding(inst, &decomposition).map_err(|e| match e {
        Error::InvariantViolation { stage, detail } => Error::InvariantViolation {
            stage,
            detail: format!("{detail}\nrecipes: {recipes:#?}"),
        },
        other => other,
    })?;
    Ok(EmbedOutput { decomposition, case, recipes, recursion_trace: trace })
}

/// Checks all four output conditions: partition of `E(K_r)`, linear forests,
/// `H'` edge `p` in class `p`, and the size floors.
pub fn verify_embedding(inst: &DenseInstance, p: &Decomposition) -> Result<()> {
    let (n, t, r) = (inst.n, inst.t(), inst.r());
    let fail = |d: String| Err(Error::invariant("embed", d));
    if p.order() != r || p.num_classes() != n || !p.is_complete() {
        return fail(format!("not a decomposition of K_{r} into {n} classes"));
    }
    p.all_linear_forests().map_err(|e| Error::invariant("embed", e.to_string()))?;
    for (i, &e) in inst.h_prime.edges().iter().enumerate() {
        if !p.class(i).contains(&e) {
            return fail(format!("H' edge {e:?} not in class {i}"));
        }
    }
    for i in 0..n {
        let floor = if i < t { 2 * r as i64 - 2 * n as i64 - 1 } else { 2 * r as i64 - 2 * n as i64 };
        if (p.class(i).len() as i64) < floor {
            return fail(format!("class {i} has {} edges, floor {floor}", p.class(i).len()));
        }
    }
    Ok(())
}

/// `r <= n`: `H'` edge `p` alone in class `p`, then a proper edge coloring of
/// `K_r - H'` with matching `c` added to class `c`.
pub fn direct_small_r(inst: &DenseInstance) -> Result<Decomposition> {
    let (n, r) = (inst.n, inst.r());
    if r > n {
        return Err(Error::PreconditionViolation(format!("r = {r} > n = {n}")));
    }
    let mut p = Decomposition::new(r, n);
    for (i, &e) in inst.h_prime.edges().iter().enumerate() {
        p.insert(i, e)?;
    }
    let h: BTreeSet<Edge> = inst.h_prime.edges().iter().copied().collect();
    for u in 0..r {
        for v in u + 1..r {
            let e = Edge::new(u, v);
            if !h.contains(&e) {
                p.insert(round_robin_color(u, v, r), e)?;
            }
        }
    }
    Ok(p)
}

/// A proper edge coloring of `K_r` with `r` colors (odd `r`) or `r - 1` colors.
pub fn round_robin_color(u: Vertex, v: Vertex, r: usize) -> usize {
    if r % 2 == 1 {
        (u + v) % r
    } else {
        let q = r - 1;
        if u == q {
            (2 * v) % q
        } else if v == q {
            (2 * u) % q
        } else {
            (u + v) % q
        }
    }
}

/// Picks `s` edges of `H'` (as ascending edge indices): whole components in
/// order, then a connected piece of the next one grown from its lowest edge.
pub fn choose_subgraph(h_prime: &SimpleGraph, s: usize) -> Vec<usize> {
    let mut chosen = Vec::new();
    for comp in h_prime.edge_components() {
        let left = s - chosen.len();
        if left == 0 {
            break;
        }
        if comp.len() <= left {
            chosen.extend(comp);
            continue;
        }
        let mut taken: BTreeSet<usize> = BTreeSet::new();
        let mut touched: BTreeSet<Vertex> = BTreeSet::new();
        let first = comp[0];
        taken.insert(first);
        let e = h_prime.edges()[first];
        touched.extend([e.lo(), e.hi()]);
        while taken.len() < left {
            let next = comp
                .iter()
                .copied()
                .find(|&i| {
                    let e = h_prime.edges()[i];
                    !taken.contains(&i) && (touched.contains(&e.lo()) || touched.contains(&e.hi()))
                })
                .expect("component is connected");
            taken.insert(next);
            let e = h_prime.edges()[next];
            touched.extend([e.lo(), e.hi()]);
        }
        chosen.extend(taken);
        break;
    }
    chosen.sort_unstable();
    chosen
}

/// The subgraph on `chosen` edges with its vertices renumbered densely in
/// order of first appearance; returns it with the map back to `H'` vertices.
fn induced_instance(h_prime: &SimpleGraph, chosen: &[usize]) -> (SimpleGraph, Vec<Vertex>) {
    let mut to_new: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut back = Vec::new();
    let mut edges = Vec::new();
    for &i in chosen {
        let e = h_prime.edges()[i];
        let mut map = |v: Vertex| {
            *to_new.entry(v).or_insert_with(|| {
                back.push(v);
                back.len() - 1
            })
        };
        let (a, b) = (map(e.lo()), map(e.hi()));
        edges.push(Edge::new(a, b));
    }
    let g = SimpleGraph::new(back.len(), edges).expect("subgraph of a simple graph");
    (g, back)
}

/// Shrinks an HCD of `K_{2s+1}` holding `H''` on host vertices `0..v(H'')` to
/// `K_r`, renaming `H''` vertices to their `H'` names. One vertex is removed
/// when `r` is even and two when `r` is odd.
pub fn contract_to_kr(cert: &RainbowCertificate, h2_to_h: &[Vertex], r: usize) -> Result<Decomposition> {
    let order = cert.decomposition.order();
    let v2 = h2_to_h.len();
    let drop = order.checked_sub(r).filter(|&d| (1..=2).contains(&d) && v2 <= r).ok_or_else(|| {
        Error::invariant("contract", format!("cannot shrink K_{order} to K_{r} around {v2} vertices"))
    })?;
    let used: BTreeSet<Vertex> = h2_to_h.iter().copied().collect();
    let mut free = (0..r).filter(|v| !used.contains(v));
    let mut perm = vec![0; order];
    for (v, slot) in perm.iter_mut().enumerate() {
        *slot = if v < v2 {
            h2_to_h[v]
        } else if v < order - drop {
            free.next().expect("enough free labels")
        } else {
            r + (v - (order - drop))
        };
    }
    let p = cert.decomposition.relabel(&perm).truncate(r);
    for i in 0..p.num_classes() {
        let len = p.class(i).len();
        let ok = if r % 2 == 0 { len == r - 1 } else { len + 2 >= r && len < r };
        if !ok {
            return Err(Error::invariant("contract", format!("class {i} has {len} edges at r = {r}")));
        }
    }
    let mut seen = BTreeSet::new();
    for (q, &c) in cert.assignment.iter().enumerate() {
        let e = cert.h_edges[q].map(|v| perm[v]);
        if !p.class(c).contains(&e) || !seen.insert(c) {
            return Err(Error::invariant("contract", format!("H'' edge {e:?} lost its class")));
        }
    }
    Ok(p)
}

/// Working state between the split and the final class order.
#[derive(Clone, Debug)]
pub struct SplitState {
    pub p: Decomposition,
    /// `e'`: the unique `H''` edge of each of the first `s` classes.
    pub h2_edge: Vec<Option<Edge>>,
    pub s: usize,
}

impl SplitState {
    /// Permutes classes so that `H'` edge `p` sits in class `p`.
    fn finish(self, h_prime: &SimpleGraph) -> Result<Decomposition> {
        let n = self.p.num_classes();
        let t = h_prime.num_edges();
        let mut perm = Vec::with_capacity(n);
        for e in h_prime.edges() {
            let c = self.p.class_of(*e).ok_or_else(|| Error::invariant("embed", format!("{e:?} missing")))?;
            perm.push(c);
        }
        let mut seen: BTreeSet<usize> = perm.iter().copied().collect();
        if seen.len() != t {
            return Err(Error::invariant("embed", "H' is not rainbow"));
        }
        for c in 0..n {
            if seen.insert(c) {
                perm.push(c);
            }
        }
        let mut p = self.p;
        p.permute_classes(&perm);
        Ok(p)
    }
}

/// Moves each edge of `H' - H''` out of the recursive classes into its own new
/// class, pads with empty classes up to `n`, and sorts the first `s` classes
/// by size (non-increasing, stable).
pub fn split_new_singletons(
    h_prime: &SimpleGraph,
    chosen: &[usize],
    contracted: Decomposition,
    n: usize,
) -> Result<SplitState> {
    let s = contracted.num_classes();
    let r = contracted.order();
    let chosen_set: BTreeSet<usize> = chosen.iter().copied().collect();
    let mut classes: Vec<BTreeSet<Edge>> = contracted.classes().to_vec();
    let mut extra = Vec::new();
    for (i, &e) in h_prime.edges().iter().enumerate() {
        if chosen_set.contains(&i) {
            continue;
        }
        let c = classes
            .iter()
            .position(|c| c.contains(&e))
            .ok_or_else(|| Error::invariant("split", format!("edge {e:?} not in K_{r}")))?;
        classes[c].remove(&e);
        extra.push(e);
    }
    let mut h2_edge: Vec<Option<Edge>> = vec![None; s];
    for &i in chosen {
        let e = h_prime.edges()[i];
        let c = classes.iter().position(|c| c.contains(&e)).expect("H'' edge kept");
        h2_edge[c] = Some(e);
    }
    let mut order: Vec<usize> = (0..s).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(classes[c].len()));
    let mut p = Decomposition::new(r, 0);
    let mut sorted_h2 = Vec::with_capacity(s);
    for &c in &order {
        p.push_class(classes[c].clone());
        sorted_h2.push(h2_edge[c]);
    }
    for e in extra {
        p.push_class([e].into_iter().collect());
    }
    while p.num_classes() < n {
        p.push_class(BTreeSet::new());
    }
    p.check_disjoint()?;
    Ok(SplitState { p, h2_edge: sorted_h2, s })
}

/// Edges `e1` at `a` and `e2` at `b` in `donor` whose removal leaves `a` and `b`
/// in different components with degree at most one each.
fn blockers(donor: &BTreeSet<Edge>, a: Vertex, b: Vertex, order: usize) -> Result<Vec<Edge>> {
    let view = analyze_linear_forest(donor.iter().copied(), order)?;
    let idx = view.path_index(order);
    if let (Some(pa), Some(pb)) = (idx[a], idx[b]) {
        if pa == pb {
            let path = &view.paths[pa];
            let ia = path.iter().position(|&v| v == a).unwrap();
            let ib = path.iter().position(|&v| v == b).unwrap();
            let step = |i: usize, toward: usize| if toward > i { i + 1 } else { i - 1 };
            return Ok(vec![
                Edge::new(a, path[step(ia, ib)]),
                Edge::new(b, path[step(ib, ia)]),
            ]);
        }
    }
    let mut out = Vec::new();
    for v in [a, b] {
        let at_v: Vec<Edge> = donor.iter().copied().filter(|e| e.contains(v)).collect();
        if at_v.len() == 2 {
            out.push(at_v[0]);
        }
    }
    Ok(out)
}

/// Edges of `donor` that must stay put so that any subset of the rest can be
/// added to `target` keeping it a linear forest: every edge at an inner vertex
/// of `target`, and at each endpoint of `target` the edge leaving it forward
/// along its donor path.
fn blocking_set(donor: &BTreeSet<Edge>, target: &BTreeSet<Edge>, order: usize) -> Result<Vec<Edge>> {
    let tv = analyze_linear_forest(target.iter().copied(), order)?;
    let dv = analyze_linear_forest(donor.iter().copied(), order)?;
    let mut block: BTreeSet<Edge> = BTreeSet::new();
    for e in donor {
        if tv.interior.contains(&e.lo()) || tv.interior.contains(&e.hi()) {
            block.insert(*e);
        }
    }
    for path in &dv.paths {
        for w in path.windows(2) {
            if tv.endpoints.contains(&w[0]) {
                block.insert(Edge::new(w[0], w[1]));
            }
        }
    }
    debug_assert!(block.len() <= 2 * tv.interior.len() + tv.endpoints.len());
    Ok(block.into_iter().collect())
}

fn move_edges(
    state: &mut SplitState,
    target: usize,
    donor: usize,
    count: usize,
    excluded: Vec<Edge>,
    blocking: Vec<Edge>,
) -> Result<MoveRecipe> {
    let skip: BTreeSet<Edge> = excluded.iter().chain(&blocking).copied().collect();
    let moved: Vec<Edge> = state.p.class(donor).iter().copied().filter(|e| !skip.contains(e)).take(count).collect();
    let mut recipe = MoveRecipe { target, donor, excluded, blocking, moved };
    if recipe.moved.len() < count {
        let have = recipe.moved.len();
        recipe.moved.clear();
        return Err(Error::invariant(
            "embed move",
            format!("donor {donor} offers {have} of {count} edges: {recipe:?}"),
        ));
    }
    for &e in &recipe.moved {
        state.p.remove(donor, e);
        state.p.insert(target, e)?;
    }
    state
        .p
        .linear_forest(target)
        .map_err(|e| Error::invariant("embed move", format!("target {target}: {e}; {recipe:?}")))?;
    Ok(recipe)
}

fn e_prime(state: &SplitState, j: usize) -> Result<Edge> {
    state
        .h2_edge
        .get(j)
        .copied()
        .flatten()
        .ok_or_else(|| Error::invariant("embed", format!("donor {j} has no H'' edge")))
}

fn target_edge(state: &SplitState, i: usize) -> Result<Edge> {
    let c = state.p.class(i);
    if c.len() != 1 {
        return Err(Error::invariant("embed", format!("class {i} is not a singleton")));
    }
    Ok(*c.iter().next().unwrap())
}

/// The feasibility claim of the first case: `|P_{n-s}| >= 4r - 4n - 1`.
pub fn case1_claim_holds(state: &SplitState, n: usize, r: usize) -> bool {
    let s = state.s;
    let need = 4 * r as i64 - 4 * n as i64 - 1;
    (0..n - s).all(|j| state.p.class(j).len() as i64 >= need)
}

/// The feasibility claim of the second case: `|P_{2n-2s}| >= 3r - 3n - epsilon`.
pub fn case2_claim_holds(state: &SplitState, n: usize, t: usize, r: usize) -> bool {
    let s = state.s;
    let eps = CaseParams::new(t, n, r).epsilon as i64;
    let need = 3 * r as i64 - 3 * n as i64 - eps;
    (0..2 * n - 2 * s).all(|j| state.p.class(j).len() as i64 >= need)
}

/// Case `n + 1 <= r`, `3r <= 4n - 1`. Indices below are 1-based as in the
/// construction and shifted when touching classes.
pub fn case1_rebalance(state: &mut SplitState, inst: &DenseInstance) -> Result<Vec<MoveRecipe>> {
    let (n, t, r) = (inst.n, inst.t(), inst.r());
    let s = state.s;
    if !(r > n && 3 * r < 4 * n) {
        return Err(Error::PreconditionViolation(format!("case 1 needs n < r and 3r <= 4n-1 (n = {n}, r = {r})")));
    }
    if !case1_claim_holds(state, n, r) {
        return Err(Error::invariant(
            "embed case 1",
            format!("claim |P_(n-s)| >= 4r-4n-1 fails; sizes {:?}", state.p.sizes()),
        ));
    }
    let mut log = Vec::new();
    for i in s + 1..=t {
        let j = i - s;
        let ab = target_edge(state, i - 1)?;
        let mut excluded = vec![e_prime(state, j - 1)?];
        excluded.extend(blockers(state.p.class(j - 1), ab.lo(), ab.hi(), r)?);
        log.push(move_edges(state, i - 1, j - 1, 2 * r - 2 * n - 2, excluded, Vec::new())?);
    }
    for i in t + 1..=n {
        let j = i - s;
        let excluded = vec![e_prime(state, j - 1)?];
        log.push(move_edges(state, i - 1, j - 1, 2 * r - 2 * n, excluded, Vec::new())?);
    }
    Ok(log)
}

/// Case `3r >= 4n`: two donors per target, the second one filtered by a
/// blocking set.
pub fn case2_rebalance(state: &mut SplitState, inst: &DenseInstance) -> Result<Vec<MoveRecipe>> {
    let (n, t, r) = (inst.n, inst.t(), inst.r());
    let s = state.s;
    if 3 * r < 4 * n {
        return Err(Error::PreconditionViolation(format!("case 2 needs 3r >= 4n (n = {n}, r = {r})")));
    }
    if r < n + 2 {
        return Err(Error::PreconditionViolation(format!("case 2 needs r >= n + 2 (n = {n}, r = {r})")));
    }
    if !case2_claim_holds(state, n, t, r) {
        return Err(Error::invariant(
            "embed case 2",
            format!("claim |P_(2n-2s)| >= 3r-3n-eps fails; sizes {:?}", state.p.sizes()),
        ));
    }
    let mut log = Vec::new();
    for i in s + 1..=t {
        let (j, l) = (i - s, i + t - 2 * s);
        let ab = target_edge(state, i - 1)?;
        let mut excluded = vec![e_prime(state, j - 1)?];
        excluded.extend(blockers(state.p.class(j - 1), ab.lo(), ab.hi(), r)?);
        log.push(move_edges(state, i - 1, j - 1, r - n - 2, excluded, Vec::new())?);
        let blocking = blocking_set(state.p.class(l - 1), state.p.class(i - 1), r)?;
        let excluded = vec![e_prime(state, l - 1)?];
        log.push(move_edges(state, i - 1, l - 1, r - n, excluded, blocking)?);
    }
    for i in t + 1..=n {
        let (j, l) = (i + t - 2 * s, i + n - 2 * s);
        let excluded = vec![e_prime(state, j - 1)?];
        log.push(move_edges(state, i - 1, j - 1, r - n - 1, excluded, Vec::new())?);
        let blocking = blocking_set(state.p.class(l - 1), state.p.class(i - 1), r)?;
        let excluded = vec![e_prime(state, l - 1)?];
        log.push(move_edges(state, i - 1, l - 1, r - n + 1, excluded, blocking)?);
    }
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(usize, usize)]) -> SimpleGraph {
        SimpleGraph::from_edges(edges.iter().map(|&(u, v)| Edge::new(u, v)).collect()).unwrap()
    }

    #[test]
    fn donor_capacity_arithmetic() {
        // 4r-4n-1 >= (2r-2n-2)+3 reduces to r >= n+1, not r >= n+2
        for n in 1i64..60 {
            for r in 0..=2 * n + 1 {
                let holds = 4 * r - 4 * n - 1 >= (2 * r - 2 * n - 2) + 3;
                assert_eq!(holds, r >= n + 1, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn round_robin_is_proper() {
        for r in 2..=12 {
            let colors = if r % 2 == 1 { r } else { r - 1 };
            let mut seen = BTreeSet::new();
            for u in 0..r {
                for v in u + 1..r {
                    let c = round_robin_color(u, v, r);
                    assert!(c < colors);
                    assert!(seen.insert((u, c)) && seen.insert((v, c)), "r = {r}");
                }
            }
        }
    }

    #[test]
    fn direct_triangle() {
        let inst = DenseInstance::new(graph(&[(0, 1), (1, 2), (0, 2)]), 6).unwrap();
        let p = direct_small_r(&inst).unwrap();
        verify_embedding(&inst, &p).unwrap();
        assert_eq!(p.sizes(), vec![1, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn direct_two_triangles_and_k4() {
        let inst =
            DenseInstance::new(graph(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]), 8).unwrap();
        verify_embedding(&inst, &direct_small_r(&inst).unwrap()).unwrap();
        let k4 = graph(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let inst = DenseInstance::new(k4, 6).unwrap();
        let p = direct_small_r(&inst).unwrap();
        verify_embedding(&inst, &p).unwrap();
        assert!(p.sizes().iter().all(|&s| s == 1));
    }

    #[test]
    fn empty_and_k2_rejected() {
        assert!(DenseInstance::new(SimpleGraph::new(0, vec![]).unwrap(), 3).is_err());
        assert!(DenseInstance::new(graph(&[(0, 1), (2, 3), (3, 4)]), 3).is_err());
    }

    #[test]
    fn choose_subgraph_rules() {
        let h = graph(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (6, 7), (7, 8)]);
        assert_eq!(choose_subgraph(&h, 7), (0..7).collect::<Vec<_>>());
        assert_eq!(choose_subgraph(&h, 1), vec![0]);
        assert_eq!(choose_subgraph(&h, 4), vec![0, 1, 2, 3]);
        let long = graph(&[(0, 1), (2, 3), (1, 2), (3, 4), (4, 5), (5, 6)]);
        let c = choose_subgraph(&long, 3);
        assert_eq!(c.len(), 3);
        // connected piece grown from edge 0
        assert_eq!(c, vec![0, 1, 2]);
        let r12 = graph(&[
            (0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (6, 7), (7, 8), (9, 10), (10, 11),
        ]);
        assert_eq!(choose_subgraph(&r12, 12usize.div_ceil(2)).len(), 6);
    }

    #[test]
    fn case1_donor_capacity_arithmetic() {
        // 4r-4n-1 >= (2r-2n-2) + 3 holds exactly when r >= n + 1
        for n in 6..60i64 {
            for r in n + 1..=(4 * n - 1) / 3 {
                assert!(4 * r - 4 * n - 1 >= 2 * r - 2 * n - 2 + 3);
                assert!(4 * r - 4 * n - 1 >= 2 * r - 2 * n + 1);
            }
            let r = n;
            assert!(4 * r - 4 * n - 1 < 2 * r - 2 * n - 2 + 3);
        }
    }

    #[test]
    fn case2_donor_index_audit() {
        for n in 6..40usize {
            for t in 1..=n {
                for r in n + 1..=(3 * t).saturating_sub(1) / 2 {
                    if 3 * r < 4 * n {
                        continue;
                    }
                    let s = r.div_ceil(2);
                    let mut donors = Vec::new();
                    for i in s + 1..=t {
                        let (j, l) = (i - s, i + t - 2 * s);
                        assert!((1..=t - s).contains(&j));
                        assert!((t - s + 1..=2 * t - 2 * s).contains(&l));
                        donors.extend([j, l]);
                    }
                    for i in t + 1..=n {
                        let (j, l) = (i + t - 2 * s, i + n - 2 * s);
                        assert!((2 * t - 2 * s + 1..=n + t - 2 * s).contains(&j));
                        assert!((n + t - 2 * s + 1..=2 * n - 2 * s).contains(&l));
                        donors.extend([j, l]);
                    }
                    let set: BTreeSet<usize> = donors.iter().copied().collect();
                    assert_eq!(set.len(), donors.len());
                    assert!(donors.iter().all(|&d| d <= 2 * n - 2 * s && d <= s));
                }
            }
        }
    }

    #[test]
    fn case2_blocking_bound_arithmetic() {
        for n in 6..60i64 {
            for r in (4 * n + 2) / 3..2 * n {
                assert_eq!((3 * r - 3 * n - 1) - (2 * r - 2 * n - 2) - 1, r - n);
            }
        }
    }

    #[test]
    fn case_params() {
        assert_eq!(CaseParams::new(9, 9, 12), CaseParams { epsilon: 1, delta: 0 });
        assert_eq!(CaseParams::new(11, 12, 17), CaseParams { epsilon: 0, delta: 1 });
    }

    #[test]
    fn blockers_on_same_path() {
        // donor path 0-1-2-3-4; target edge {1, 4}
        let donor: BTreeSet<Edge> = [(0, 1), (1, 2), (2, 3), (3, 4)].iter().map(|&(u, v)| Edge::new(u, v)).collect();
        let b = blockers(&donor, 1, 4, 6).unwrap();
        assert_eq!(b, vec![Edge::new(1, 2), Edge::new(3, 4)]);
        let mut rest = donor.clone();
        for e in &b {
            rest.remove(e);
        }
        rest.insert(Edge::new(1, 4));
        assert!(analyze_linear_forest(rest, 6).is_ok());
    }

    #[test]
    fn blocking_set_prevents_long_cycles() {
        // target paths 0-1 and 2-3; donor path 1-2-5 and 3-0 would close 0-1-2-3-0
        let target: BTreeSet<Edge> = [Edge::new(0, 1), Edge::new(2, 3)].into_iter().collect();
        let donor: BTreeSet<Edge> = [Edge::new(1, 2), Edge::new(0, 3), Edge::new(2, 5)].into_iter().collect();
        let block = blocking_set(&donor, &target, 6).unwrap();
        assert!(block.len() <= 4);
        let mut all = target.clone();
        all.extend(donor.iter().copied().filter(|e| !block.contains(e)));
        assert!(analyze_linear_forest(all, 6).is_ok());
    }
}
