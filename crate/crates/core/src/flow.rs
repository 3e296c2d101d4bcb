//! Integral feasible flows with lower bounds (Dinic on the standard reduction).

use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: i64,
}

#[derive(Clone, Debug)]
struct Dinic {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    level: Vec<i64>,
    it: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic { arcs: Vec::new(), adj: vec![Vec::new(); n], level: vec![0; n], it: vec![0; n] }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to: v, cap });
        self.adj[u].push(id);
        self.arcs.push(Arc { to: u, cap: 0 });
        self.adj[v].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &self.adj[u] {
                let Arc { to, cap } = self.arcs[a];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[u] + 1;
                    q.push_back(to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64) -> i64 {
        if u == t {
            return f;
        }
        while self.it[u] < self.adj[u].len() {
            let a = self.adj[u][self.it[u]];
            let Arc { to, cap } = self.arcs[a];
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let d = self.dfs(to, t, f.min(cap));
                if d > 0 {
                    self.arcs[a].cap -= d;
                    self.arcs[a ^ 1].cap += d;
                    return d;
                }
            }
            self.it[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.it.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

/// A network whose arcs carry `[lo, hi]` bounds.
#[derive(Clone, Debug)]
pub(crate) struct BoundedNetwork {
    nodes: usize,
    arcs: Vec<(usize, usize, i64, i64)>,
}

impl BoundedNetwork {
    pub fn new(nodes: usize) -> Self {
        BoundedNetwork { nodes, arcs: Vec::new() }
    }

    pub fn add_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    pub fn add_arc(&mut self, u: usize, v: usize, lo: i64, hi: i64) -> usize {
        assert!(0 <= lo && lo <= hi);
        self.arcs.push((u, v, lo, hi));
        self.arcs.len() - 1
    }

    /// A feasible circulation after adding an unbounded `t -> s` arc, i.e. a
    /// feasible `s`-`t` flow; returns the flow on every arc in insertion order.
    pub fn feasible_flow(&self, s: usize, t: usize) -> Option<Vec<i64>> {
        let ss = self.nodes;
        let tt = self.nodes + 1;
        let mut d = Dinic::new(self.nodes + 2);
        let mut excess = vec![0i64; self.nodes];
        let ids: Vec<usize> = self
            .arcs
            .iter()
            .map(|&(u, v, lo, hi)| {
                excess[v] += lo;
                excess[u] -= lo;
                d.add(u, v, hi - lo)
            })
            .collect();
        d.add(t, s, i64::MAX / 4);
        let mut need = 0;
        for (v, &e) in excess.iter().enumerate() {
            if e > 0 {
                d.add(ss, v, e);
                need += e;
            } else if e < 0 {
                d.add(v, tt, -e);
            }
        }
        if d.max_flow(ss, tt) != need {
            return None;
        }
        Some(
            ids.iter()
                .zip(&self.arcs)
                .map(|(&id, &(_, _, lo, hi))| lo + (hi - lo - d.arcs[id].cap))
                .collect(),
        )
    }
}
