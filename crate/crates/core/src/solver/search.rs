//! Search routines behind the base cases: rainbow embedding of `H` into a
//! fixed decomposition, and a cycle-by-cycle construction of a whole HCD.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Decomposition, Edge, SimpleGraph, UnionFind, Vertex};

/// Searches an injective map `V(H) -> V(K_N)` under which the edges of `H` land
/// in pairwise different classes of `d`. Candidate hosts are tried in
/// ascending order, or shuffled when `rng` is given.
pub(crate) fn embed_rainbow(
    d: &Decomposition,
    h: &SimpleGraph,
    mut rng: Option<&mut ChaCha8Rng>,
    budget: &mut u64,
) -> Option<Vec<Vertex>> {
    let big = d.order();
    if h.num_vertices() > big {
        return None;
    }
    let mut cls = vec![usize::MAX; big * big];
    for (i, class) in d.classes().iter().enumerate() {
        for e in class {
            cls[e.lo() * big + e.hi()] = i;
            cls[e.hi() * big + e.lo()] = i;
        }
    }
    let nv = h.num_vertices();
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); nv];
    for e in h.edges() {
        adj[e.lo()].push(e.hi());
        adj[e.hi()].push(e.lo());
    }
    // most-constrained-first vertex order
    let mut order = Vec::with_capacity(nv);
    let mut placed = vec![false; nv];
    for _ in 0..nv {
        let v = (0..nv)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let back = adj[v].iter().filter(|&&w| placed[w]).count();
                (back, adj[v].len(), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[v] = true;
        order.push(v);
    }
    let mut hosts: Vec<Vertex> = (0..big).collect();
    if let Some(r) = rng.as_deref_mut() {
        hosts.shuffle(r);
    }

    struct Ctx<'a> {
        big: usize,
        cls: &'a [usize],
        adj: &'a [Vec<Vertex>],
        order: &'a [Vertex],
        hosts: &'a [Vertex],
        phi: Vec<Option<Vertex>>,
        host_used: Vec<bool>,
        class_used: Vec<bool>,
        budget: &'a mut u64,
    }
    fn go(c: &mut Ctx, k: usize) -> bool {
        if k == c.order.len() {
            return true;
        }
        if *c.budget == 0 {
            return false;
        }
        *c.budget -= 1;
        let v = c.order[k];
        for hi in 0..c.hosts.len() {
            let x = c.hosts[hi];
            if c.host_used[x] {
                continue;
            }
            let mut taken = Vec::new();
            let mut ok = true;
            let adj = c.adj;
            for &w in &adj[v] {
                if let Some(y) = c.phi[w] {
                    let cl = c.cls[x * c.big + y];
                    if c.class_used[cl] {
                        ok = false;
                        break;
                    }
                    c.class_used[cl] = true;
                    taken.push(cl);
                }
            }
            if ok {
                c.phi[v] = Some(x);
                c.host_used[x] = true;
                if go(c, k + 1) {
                    return true;
                }
                c.phi[v] = None;
                c.host_used[x] = false;
            }
            for cl in taken {
                c.class_used[cl] = false;
            }
        }
        false
    }
    let mut ctx = Ctx {
        big,
        cls: &cls,
        adj: &adj,
        order: &order,
        hosts: &hosts,
        phi: vec![None; nv],
        host_used: vec![false; big],
        class_used: vec![false; d.num_classes()],
        budget,
    };
    if go(&mut ctx, 0) {
        Some(ctx.phi.into_iter().map(|x| x.unwrap()).collect())
    } else {
        None
    }
}

/// Builds an HCD of `K_{2n+1}` cycle by cycle, cycle `i` through `H`-edge `i`
/// and avoiding every other edge of `H`. Requires `e(H) = n`.
pub(crate) fn cycle_by_cycle(h: &SimpleGraph, n: usize, rng: &mut ChaCha8Rng, budget: &mut u64) -> Option<Decomposition> {
    let big = 2 * n + 1;
    if h.num_edges() != n || h.num_vertices() > big {
        return None;
    }
    let mut s = Search {
        big,
        n,
        h: h.edges().to_vec(),
        avail: vec![true; big * big],
        h_owner: vec![usize::MAX; big * big],
        cycles: Vec::new(),
        rng,
        budget,
    };
    for v in 0..big {
        s.avail[v * big + v] = false;
    }
    for (i, e) in h.edges().iter().enumerate() {
        s.h_owner[e.lo() * big + e.hi()] = i;
        s.h_owner[e.hi() * big + e.lo()] = i;
    }
    if !s.next_cycle() {
        return None;
    }
    let mut d = Decomposition::new(big, n);
    for (i, cyc) in s.cycles.iter().enumerate() {
        for k in 0..big {
            d.insert(i, Edge::new(cyc[k], cyc[(k + 1) % big])).ok()?;
        }
    }
    Some(d)
}

struct Search<'a> {
    big: usize,
    n: usize,
    h: Vec<Edge>,
    avail: Vec<bool>,
    h_owner: Vec<usize>,
    cycles: Vec<Vec<Vertex>>,
    rng: &'a mut ChaCha8Rng,
    budget: &'a mut u64,
}

impl Search<'_> {
    fn allowed(&self, i: usize, u: Vertex, v: Vertex) -> bool {
        let k = u * self.big + v;
        self.avail[k] && (self.h_owner[k] == usize::MAX || self.h_owner[k] == i)
    }

    fn set(&mut self, u: Vertex, v: Vertex, val: bool) {
        self.avail[u * self.big + v] = val;
        self.avail[v * self.big + u] = val;
    }

    fn remainder_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.big);
        let mut comps = self.big;
        for u in 0..self.big {
            for v in u + 1..self.big {
                if self.avail[u * self.big + v] && uf.union(u, v) {
                    comps -= 1;
                }
            }
        }
        comps == 1
    }

    fn next_cycle(&mut self) -> bool {
        let i = self.cycles.len();
        if i == self.n {
            return true;
        }
        let e = self.h[i];
        let mut path = vec![e.lo(), e.hi()];
        let mut visited = vec![false; self.big];
        visited[e.lo()] = true;
        visited[e.hi()] = true;
        self.set(e.lo(), e.hi(), false);
        let ok = self.extend(i, &mut path, &mut visited);
        self.set(e.lo(), e.hi(), true);
        ok
    }

    fn extend(&mut self, i: usize, path: &mut Vec<Vertex>, visited: &mut [bool]) -> bool {
        if *self.budget == 0 {
            return false;
        }
        *self.budget -= 1;
        let big = self.big;
        let (start, end) = (path[0], *path.last().unwrap());
        if path.len() == big {
            if !self.allowed(i, end, start) {
                return false;
            }
            self.set(end, start, false);
            self.cycles.push(path.clone());
            let ok = (i + 1 == self.n || self.remainder_connected()) && self.next_cycle();
            if !ok {
                self.cycles.pop();
            }
            self.set(end, start, true);
            return ok;
        }
        // every unvisited vertex needs two usable edges
        for u in 0..big {
            if visited[u] {
                continue;
            }
            let usable = (0..big)
                .filter(|&w| w != u && (!visited[w] || w == end || w == start) && self.allowed(i, u, w))
                .take(2)
                .count();
            if usable < 2 {
                return false;
            }
        }
        let mut next: Vec<Vertex> = (0..big).filter(|&w| !visited[w] && self.allowed(i, end, w)).collect();
        next.shuffle(self.rng);
        for w in next {
            visited[w] = true;
            path.push(w);
            self.set(end, w, false);
            if self.extend(i, path, visited) {
                self.set(end, w, false);
                return true;
            }
            self.set(end, w, true);
            path.pop();
            visited[w] = false;
        }
        false
    }
}
