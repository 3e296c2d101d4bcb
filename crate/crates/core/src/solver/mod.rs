//! Top-level solver: splits `H` into its non-`K_2` part and its `K_2`
//! components, routes the instance, and returns a verified certificate.

mod search;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::certificate::RainbowCertificate;
use crate::embed_dense::{embed_dense, DenseInstance, EmbedCase};
use crate::error::{Error, Result};
use crate::extend_sparse::{extend_with_k2s, WitnessRoute};
use crate::graph::{walecki, Decomposition, Edge, SimpleGraph, Vertex};
use crate::hilton;

/// A graph `H` with `n = e(H)` edges on vertices `0..v(H)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    h: SimpleGraph,
}

impl ProblemInstance {
    pub fn new(h: SimpleGraph) -> Result<Self> {
        let n = h.num_edges();
        if n == 0 {
            return Err(Error::InvalidInput("H has no edges".into()));
        }
        if h.num_vertices() > 2 * n + 1 {
            return Err(Error::InfeasibleInput(format!(
                "v(H) = {} exceeds 2n+1 = {}",
                h.num_vertices(),
                2 * n + 1
            )));
        }
        Ok(ProblemInstance { h })
    }

    pub fn h(&self) -> &SimpleGraph {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.num_edges()
    }
}

/// `H = H' ∪ (n - t) K_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSplit {
    /// Components with at least two edges, vertices renumbered `0..r`.
    pub h_prime: SimpleGraph,
    /// `H'` vertex -> `H` vertex.
    pub h_prime_to_h: Vec<Vertex>,
    /// Indices into `H`'s edge list of the edges of `H'`, aligned with `h_prime.edges()`.
    pub h_prime_edges: Vec<usize>,
    /// Indices into `H`'s edge list of the `K_2` components.
    pub k2_edges: Vec<usize>,
    pub t: usize,
    pub r: usize,
}

impl ComponentSplit {
    pub fn of(h: &SimpleGraph) -> Self {
        let mut h_prime_edges = Vec::new();
        let mut k2_edges = Vec::new();
        for comp in h.edge_components() {
            if comp.len() == 1 {
                k2_edges.push(comp[0]);
            } else {
                h_prime_edges.extend(comp);
            }
        }
        h_prime_edges.sort_unstable();
        let mut verts: Vec<Vertex> = h_prime_edges
            .iter()
            .flat_map(|&i| [h.edges()[i].lo(), h.edges()[i].hi()])
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let mut to_prime = vec![usize::MAX; h.num_vertices()];
        for (i, &v) in verts.iter().enumerate() {
            to_prime[v] = i;
        }
        let edges = h_prime_edges.iter().map(|&i| h.edges()[i].map(|v| to_prime[v])).collect();
        let h_prime = SimpleGraph::new(verts.len(), edges).expect("subgraph of a simple graph");
        ComponentSplit {
            t: h_prime.num_edges(),
            r: h_prime.num_vertices(),
            h_prime,
            h_prime_to_h: verts,
            h_prime_edges,
            k2_edges,
        }
    }

    pub fn k2_count(&self) -> usize {
        self.k2_edges.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    BaseSmall,
    AllK2,
    LinearForest,
    MainPipeline,
}

impl Route {
    pub fn tag(self) -> &'static str {
        match self {
            Route::BaseSmall => "base-small",
            Route::AllK2 => "all-k2",
            Route::LinearForest => "linear-forest",
            Route::MainPipeline => "main-pipeline",
        }
    }
}

pub fn route(split: &ComponentSplit, n: usize) -> Route {
    if n <= 5 {
        Route::BaseSmall
    } else if split.t == 0 {
        Route::AllK2
    } else if split.h_prime.is_linear_forest() {
        Route::LinearForest
    } else {
        Route::MainPipeline
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub seed: u64,
    /// Run the main pipeline whenever `H` has a component with two or more
    /// edges, whatever `n` is, and report its failure instead of falling back.
    pub force_pipeline: bool,
}

impl SolveOptions {
    pub fn seeded(seed: u64) -> Self {
        SolveOptions { seed, force_pipeline: false }
    }
}

/// A verified certificate with `H` on host vertices `0..v(H)` and
/// `h_edges == H.edges()`, plus the stage tags of the run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub certificate: RainbowCertificate,
    pub route: Route,
    pub trace: Vec<String>,
}

pub fn solve(inst: &ProblemInstance, opts: &SolveOptions) -> Result<Solution> {
    let n = inst.n();
    let split = ComponentSplit::of(inst.h());
    if opts.force_pipeline && split.t > 0 {
        return main_pipeline(inst, &split, opts.seed);
    }
    let r = route(&split, n);
    let sol = match r {
        Route::BaseSmall => base_small(inst, opts.seed),
        Route::AllK2 => base_all_k2(inst),
        Route::LinearForest => base_linear_forest(inst, opts.seed),
        Route::MainPipeline => match main_pipeline(inst, &split, opts.seed) {
            Ok(sol) => Ok(sol),
            Err(e) => {
                let mut sol = base_linear_forest(inst, opts.seed)?;
                sol.route = Route::MainPipeline;
                sol.trace.insert(0, format!("pipeline-failed:{e}"));
                Ok(sol)
            }
        },
    }?;
    check_solution(inst, &sol)?;
    Ok(sol)
}

fn check_solution(inst: &ProblemInstance, sol: &Solution) -> Result<()> {
    let cert = &sol.certificate;
    let report = cert.verify();
    if !report.passed() {
        return Err(Error::invariant("solve", format!("certificate rejected:\n{report}")));
    }
    if cert.n != inst.n() || cert.h_edges.as_slice() != inst.h().edges() {
        return Err(Error::invariant("solve", "certificate does not carry H on its own labels"));
    }
    Ok(())
}

/// Certificate for `H` from a decomposition `d` and a rainbow embedding `phi`
/// (`H` vertex -> `d` vertex): `d` is relabeled so that `phi(v)` becomes `v`.
pub fn certificate_from_embedding(d: &Decomposition, h: &SimpleGraph, phi: &[Vertex]) -> Result<RainbowCertificate> {
    let big = d.order();
    let mut perm = vec![usize::MAX; big];
    for (v, &x) in phi.iter().enumerate() {
        if x >= big || perm[x] != usize::MAX {
            return Err(Error::invariant("relabel", format!("embedding is not injective at {v}")));
        }
        perm[x] = v;
    }
    let mut next = phi.len();
    for slot in perm.iter_mut().filter(|p| **p == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let decomposition = d.relabel(&perm);
    let h_edges = h.edges().to_vec();
    let assignment = h_edges
        .iter()
        .map(|&e| decomposition.class_of(e).ok_or_else(|| Error::invariant("relabel", format!("{e:?} missing"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RainbowCertificate { n: d.num_classes(), decomposition, h_edges, assignment })
}

/// Number of classes holding exactly one of `edges`; equals `edges.len()` iff
/// they are rainbow.
fn rainbow_count(d: &Decomposition, edges: &[Edge]) -> usize {
    let mut hits = vec![0usize; d.num_classes()];
    for &e in edges {
        if let Some(c) = d.class_of(e) {
            hits[c] += 1;
        }
    }
    hits.iter().filter(|&&k| k == 1).count()
}

fn verified(inst: &ProblemInstance, route: Route, certificate: RainbowCertificate, trace: Vec<String>) -> Result<Solution> {
    let sol = Solution { certificate, route, trace };
    check_solution(inst, &sol)?;
    Ok(sol)
}

const EMBED_BUDGET: u64 = 200_000;
const EMBED_ATTEMPTS: u64 = 40;
const CYCLE_BUDGET: u64 = 2_000_000;
const CYCLE_ATTEMPTS: u64 = 50;

/// Rainbow embedding into Walecki's decomposition: deterministic order first,
/// then shuffled host orders.
fn ladder_walecki(inst: &ProblemInstance, seed: u64, attempts: u64) -> Option<(RainbowCertificate, String)> {
    let n = inst.n();
    let d = walecki(n);
    for a in 0..attempts {
        let mut budget = EMBED_BUDGET;
        let phi = if a == 0 {
            search::embed_rainbow(&d, inst.h(), None, &mut budget)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ a.wrapping_mul(0x5851_F42D_4C95_7F2D));
            search::embed_rainbow(&d, inst.h(), Some(&mut rng), &mut budget)
        };
        if let Some(phi) = phi {
            if let Ok(c) = certificate_from_embedding(&d, inst.h(), &phi) {
                return Some((c, format!("walecki-embed:attempt={a}")));
            }
        }
    }
    None
}

/// `H` as singleton classes over `K_{v(H)}` padded with matchings, then the
/// vertex-by-vertex completion; only when `v(H) <= n`.
fn ladder_plant(inst: &ProblemInstance) -> Option<(RainbowCertificate, String)> {
    let (n, h) = (inst.n(), inst.h());
    let m = h.num_vertices();
    if m > n || m < 2 {
        return None;
    }
    let mut p = Decomposition::new(m, n);
    for (i, &e) in h.edges().iter().enumerate() {
        p.insert(i, e).ok()?;
    }
    for u in 0..m {
        for v in u + 1..m {
            let e = Edge::new(u, v);
            if p.class_of(e).is_none() {
                p.insert(crate::embed_dense::round_robin_color(u, v, m), e).ok()?;
            }
        }
    }
    hilton::check_extendable(&p, n).ok()?;
    let d = hilton::extend_to_hcd(&p, n).ok()?;
    let phi: Vec<Vertex> = (0..m).collect();
    certificate_from_embedding(&d, h, &phi).ok().map(|c| (c, "plant+hilton".to_string()))
}

fn ladder_cycles(inst: &ProblemInstance, seed: u64) -> Option<(RainbowCertificate, String)> {
    let n = inst.n();
    for a in 0..CYCLE_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(a));
        let mut budget = CYCLE_BUDGET;
        if let Some(d) = search::cycle_by_cycle(inst.h(), n, &mut rng, &mut budget) {
            let phi: Vec<Vertex> = (0..inst.h().num_vertices()).collect();
            if let Ok(c) = certificate_from_embedding(&d, inst.h(), &phi) {
                return Some((c, format!("cycle-search:attempt={a}")));
            }
        }
    }
    None
}

fn run_ladder(inst: &ProblemInstance, route: Route, seed: u64) -> Result<Solution> {
    let steps: [&dyn Fn() -> Option<(RainbowCertificate, String)>; 3] = [
        &|| ladder_walecki(inst, seed, EMBED_ATTEMPTS),
        &|| ladder_plant(inst),
        &|| ladder_cycles(inst, seed),
    ];
    for step in steps {
        if let Some((cert, tag)) = step() {
            return verified(inst, route, cert, vec![format!("route:{}", route.tag()), tag]);
        }
    }
    Err(Error::SearchExhausted(format!(
        "{} ladder found no certificate for n = {} (H = {:?})",
        route.tag(),
        inst.n(),
        inst.h().edges()
    )))
}

/// `n <= 5`: search ladder.
pub fn base_small(inst: &ProblemInstance, seed: u64) -> Result<Solution> {
    if inst.n() > 5 {
        return Err(Error::PreconditionViolation(format!("base_small needs n <= 5, got {}", inst.n())));
    }
    run_ladder(inst, Route::BaseSmall, seed)
}

/// `H = nK_2`: one edge per Walecki cycle forming a matching, then relabeled
/// onto the requested matching.
pub fn base_all_k2(inst: &ProblemInstance) -> Result<Solution> {
    let n = inst.n();
    let h = inst.h();
    if h.degrees().iter().any(|&d| d > 1) {
        return Err(Error::PreconditionViolation("H is not a matching".into()));
    }
    let d = walecki(n);
    let classes: Vec<Vec<Edge>> = d.classes().iter().map(|c| c.iter().copied().collect()).collect();
    fn pick(classes: &[Vec<Edge>], i: usize, used: &mut [bool], out: &mut Vec<Edge>, budget: &mut u64) -> bool {
        if i == classes.len() {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        for &e in &classes[i] {
            if used[e.lo()] || used[e.hi()] {
                continue;
            }
            used[e.lo()] = true;
            used[e.hi()] = true;
            out.push(e);
            if pick(classes, i + 1, used, out, budget) {
                return true;
            }
            out.pop();
            used[e.lo()] = false;
            used[e.hi()] = false;
        }
        false
    }
    let mut chosen = Vec::new();
    let mut budget = 10_000_000;
    if !pick(&classes, 0, &mut vec![false; 2 * n + 1], &mut chosen, &mut budget) {
        return Err(Error::SearchExhausted(format!("no rainbow matching across the Walecki cycles for n = {n}")));
    }
    let mut phi = vec![usize::MAX; h.num_vertices()];
    let mut host_used = vec![false; 2 * n + 1];
    for (e, c) in h.edges().iter().zip(&chosen) {
        phi[e.lo()] = c.lo();
        phi[e.hi()] = c.hi();
        host_used[c.lo()] = true;
        host_used[c.hi()] = true;
    }
    let mut free = (0..2 * n + 1).filter(|&x| !host_used[x]);
    for slot in phi.iter_mut().filter(|p| **p == usize::MAX) {
        *slot = free.next().expect("v(H) <= 2n+1");
    }
    let cert = certificate_from_embedding(&d, h, &phi)?;
    verified(inst, Route::AllK2, cert, vec!["route:all-k2".into(), "walecki-matching".into()])
}

/// Linear forests with `n >= 6`: embedding into Walecki, planting plus
/// completion, then cycle search.
pub fn base_linear_forest(inst: &ProblemInstance, seed: u64) -> Result<Solution> {
    run_ladder(inst, Route::LinearForest, seed)
}

/// Per-stage record of a main-pipeline run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineStages {
    pub case: EmbedCase,
    pub t: usize,
    pub r: usize,
    pub extend_routes: Vec<WitnessRoute>,
    pub recursion_depth: usize,
}

/// Embedding of `H'` into `K_r`, the `K_2` loop up to `K_{2n-2t+r}`, then
/// completion to `K_{2n+1}`. Every stage output is checked.
pub fn main_pipeline(inst: &ProblemInstance, split: &ComponentSplit, seed: u64) -> Result<Solution> {
    main_pipeline_staged(inst, split, seed).map(|(sol, _)| sol)
}

pub fn main_pipeline_staged(
    inst: &ProblemInstance,
    split: &ComponentSplit,
    seed: u64,
) -> Result<(Solution, PipelineStages)> {
    let (n, t, r) = (inst.n(), split.t, split.r);
    let h = inst.h();
    let dense = DenseInstance::new(split.h_prime.clone(), n)?;
    let mut trace = vec!["route:main-pipeline".to_string()];
    let mut depth = 0usize;
    let mut recurse = |h2: &SimpleGraph| -> Result<(RainbowCertificate, Vec<String>)> {
        if h2.num_edges() >= n {
            return Err(Error::invariant("recursion", "recursive instance is not smaller"));
        }
        let sub = ProblemInstance::new(h2.clone())?;
        let sol = solve(&sub, &SolveOptions::seeded(seed))?;
        depth = depth.max(1 + sol.trace.iter().filter(|s| s.starts_with("recurse")).count());
        Ok((sol.certificate, sol.trace))
    };
    let emb = embed_dense(&dense, &mut recurse)?;
    trace.push(format!("embed:{:?}(t={t},r={r})", emb.case).to_lowercase());
    if !emb.recursion_trace.is_empty() {
        trace.push(format!("recurse[{}]", emb.recursion_trace.join(";")));
    }
    if rainbow_count(&emb.decomposition, split.h_prime.edges()) != t {
        return Err(Error::invariant("embed", "rainbow prefix lost"));
    }

    let ext = extend_with_k2s(&emb.decomposition, t, n, seed)?;
    if !ext.routes.is_empty() {
        let tags: Vec<&str> = ext.routes.iter().map(|w| w.tag()).collect();
        trace.push(format!("extend:{}", tags.join(",")));
    }
    // internal labels: H' on 0..r, K_2 number j on r+2j, r+2j+1
    let mut internal_h: Vec<Edge> = split.h_prime.edges().to_vec();
    internal_h.extend((0..n - t).map(|j| Edge::new(r + 2 * j, r + 2 * j + 1)));
    if rainbow_count(&ext.q, &internal_h) != n {
        return Err(Error::invariant("extend", "rainbow prefix lost"));
    }

    let m = ext.q.order();
    let full = hilton::extend_to_hcd(&ext.q, n)?;
    trace.push(format!("hilton:K{m}->K{}", 2 * n + 1));

    let mut phi = vec![usize::MAX; h.num_vertices()];
    for (i, &v) in split.h_prime_to_h.iter().enumerate() {
        phi[v] = i;
    }
    for (j, &ei) in split.k2_edges.iter().enumerate() {
        let e = h.edges()[ei];
        phi[e.lo()] = r + 2 * j;
        phi[e.hi()] = r + 2 * j + 1;
    }
    let mut next = r + 2 * (n - t);
    for slot in phi.iter_mut().filter(|p| **p == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let cert = certificate_from_embedding(&full, h, &phi)?;
    let stages = PipelineStages { case: emb.case, t, r, extend_routes: ext.routes, recursion_depth: depth };
    Ok((verified(inst, Route::MainPipeline, cert, trace)?, stages))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(edges: &[(usize, usize)]) -> ProblemInstance {
        ProblemInstance::new(SimpleGraph::from_edges(edges.iter().map(|&(u, v)| Edge::new(u, v)).collect()).unwrap())
            .unwrap()
    }

    fn triangle_plus_k2s(k: usize) -> ProblemInstance {
        let mut e = vec![(0, 1), (1, 2), (0, 2)];
        for j in 0..k {
            e.push((3 + 2 * j, 4 + 2 * j));
        }
        inst(&e)
    }

    #[test]
    fn split_and_route() {
        let i = triangle_plus_k2s(3);
        let s = ComponentSplit::of(i.h());
        assert_eq!((s.t, s.r, s.k2_count()), (3, 3, 3));
        assert_eq!(route(&s, 6), Route::MainPipeline);
        assert_eq!(route(&s, 5), Route::BaseSmall);
        let m = inst(&(0..7).map(|j| (2 * j, 2 * j + 1)).collect::<Vec<_>>());
        assert_eq!(route(&ComponentSplit::of(m.h()), 7), Route::AllK2);
        let p = inst(&[(0, 1), (1, 2), (3, 4), (5, 6), (7, 8), (9, 10)]);
        assert_eq!(route(&ComponentSplit::of(p.h()), 6), Route::LinearForest);
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(matches!(
            ProblemInstance::new(SimpleGraph::new(0, vec![]).unwrap()),
            Err(Error::InvalidInput(_))
        ));
        let big = SimpleGraph::new(5, vec![Edge::new(0, 1)]).unwrap();
        assert!(matches!(ProblemInstance::new(big), Err(Error::InfeasibleInput(_))));
    }

    #[test]
    fn single_edge() {
        let sol = solve(&inst(&[(0, 1)]), &SolveOptions::default()).unwrap();
        assert_eq!(sol.certificate.decomposition.order(), 3);
    }

    #[test]
    fn p3_plus_k2_forced_pipeline() {
        let i = inst(&[(0, 1), (1, 2), (3, 4)]);
        let opts = SolveOptions { seed: 0, force_pipeline: true };
        let sol = solve(&i, &opts).unwrap();
        assert_eq!(sol.certificate.decomposition.order(), 7);
        assert!(sol.trace.iter().any(|s| s.starts_with("extend:")));
        assert!(sol.trace.iter().any(|s| s == "hilton:K5->K7"));
    }

    #[test]
    fn main_pipeline_small_r() {
        let i = triangle_plus_k2s(3);
        let sol = solve(&i, &SolveOptions::default()).unwrap();
        assert_eq!(sol.route, Route::MainPipeline);
        assert!(sol.trace.iter().any(|s| s.starts_with("embed:smallr")));
    }

    #[test]
    fn all_k2_relabels_onto_given_matching() {
        let i = inst(&[(0, 5), (3, 1), (2, 7), (4, 6), (8, 10), (9, 12), (11, 13)]);
        let sol = solve(&i, &SolveOptions::default()).unwrap();
        assert_eq!(sol.route, Route::AllK2);
        assert!(sol.certificate.verify().passed());
    }

    #[test]
    fn deterministic() {
        let i = triangle_plus_k2s(4);
        let a = solve(&i, &SolveOptions::seeded(3)).unwrap();
        let b = solve(&i, &SolveOptions::seeded(3)).unwrap();
        assert_eq!(a, b);
    }
}
