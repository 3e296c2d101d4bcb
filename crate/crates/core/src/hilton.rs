//! Completing a decomposition of `K_m` into linear forests to a Hamiltonian
//! cycle decomposition of `K_{2n+1}`, one new vertex at a time.
//!
//! The extension exists iff every class is a linear forest with at least
//! `2m - 2n - 1` edges. Each step keeps that condition for `m + 1` by solving a
//! small flow problem that decides which class receives each new edge.

use crate::error::{Error, Result};
use crate::flow::BoundedNetwork;
use crate::graph::{Decomposition, Edge, Vertex};

/// How the edges from a new vertex are distributed over the classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionPlan {
    pub new_vertex: Vertex,
    /// `class_of[u]` receives the edge `{new_vertex, u}`.
    pub class_of: Vec<usize>,
    /// Per class, the old vertices it is attached to (at most two).
    pub attachments: Vec<Vec<Vertex>>,
}

/// Smallest size a class of a decomposition of `K_m` may have and still extend.
pub fn size_floor(m: usize, n: usize) -> i64 {
    2 * m as i64 - 2 * n as i64 - 1
}

/// Checks that `q` (on `K_m`, `n` classes, `m <= 2n`) can be extended: every class
/// a linear forest of size at least `2m - 2n - 1`.
pub fn check_extendable(q: &Decomposition, n: usize) -> Result<()> {
    let m = q.order();
    if q.num_classes() != n {
        return Err(Error::PreconditionViolation(format!(
            "{} classes but n = {n}",
            q.num_classes()
        )));
    }
    if m > 2 * n {
        return Err(Error::PreconditionViolation(format!("order {m} exceeds 2n = {}", 2 * n)));
    }
    if !q.is_complete() {
        return Err(Error::PreconditionViolation(format!("classes do not partition E(K_{m})")));
    }
    q.all_linear_forests().map_err(|e| Error::PreconditionViolation(e.to_string()))?;
    let floor = size_floor(m, n);
    if let Some(i) = (0..n).find(|&i| (q.class(i).len() as i64) < floor) {
        return Err(Error::PreconditionViolation(format!(
            "class {i} has {} edges, below 2m-2n-1 = {floor}",
            q.class(i).len()
        )));
    }
    Ok(())
}

/// Chooses, for each old vertex, the class of its edge to the new vertex `m`.
///
/// Per class: at most two attachments, only at path endpoints or isolated
/// vertices, never both ends of one path, and at least enough to keep the size
/// floor at order `m + 1`.
pub fn plan_insertion(q: &Decomposition, n: usize) -> Result<InsertionPlan> {
    let m = q.order();
    let views = q.all_linear_forests()?;
    let floor_next = size_floor(m + 1, n);

    let mut net = BoundedNetwork::new(2 + n + m);
    let (s, t) = (0, 1);
    let class_node = |i: usize| 2 + i;
    let vertex_node = |u: usize| 2 + n + u;
    // (class, vertex) for every arc into a vertex node
    let mut choice_arcs: Vec<(usize, usize, Vertex)> = Vec::new();
    for (i, view) in views.iter().enumerate() {
        let need = (floor_next - q.class(i).len() as i64).max(0);
        if need > 2 {
            return Err(Error::PreconditionViolation(format!(
                "class {i} needs {need} attachments at order {m}"
            )));
        }
        net.add_arc(s, class_node(i), need, 2);
        for path in &view.paths {
            let gadget = net.add_node();
            net.add_arc(class_node(i), gadget, 0, 1);
            for u in [path[0], *path.last().unwrap()] {
                let a = net.add_arc(gadget, vertex_node(u), 0, 1);
                choice_arcs.push((a, i, u));
            }
        }
        for &u in &view.isolated {
            let a = net.add_arc(class_node(i), vertex_node(u), 0, 1);
            choice_arcs.push((a, i, u));
        }
    }
    for u in 0..m {
        net.add_arc(vertex_node(u), t, 1, 1);
    }
    let flow = net.feasible_flow(s, t).ok_or_else(|| {
        Error::InternalInfeasible(format!(
            "no insertion plan at order {m} (n = {n}), class sizes {:?}",
            q.sizes()
        ))
    })?;

    let mut class_of = vec![usize::MAX; m];
    let mut attachments = vec![Vec::new(); n];
    for (a, i, u) in choice_arcs {
        if flow[a] == 1 {
            class_of[u] = i;
            attachments[i].push(u);
        }
    }
    attachments.iter_mut().for_each(|v| v.sort_unstable());
    debug_assert!(class_of.iter().all(|&c| c < n));
    Ok(InsertionPlan { new_vertex: m, class_of, attachments })
}

/// Adds vertex `m` to a decomposition of `K_m` (`m < 2n`) keeping the
/// extension condition.
pub fn single_vertex_step(q: &Decomposition, n: usize) -> Result<Decomposition> {
    let m = q.order();
    if m >= 2 * n {
        return Err(Error::PreconditionViolation(format!(
            "single_vertex_step needs m < 2n, got m = {m}"
        )));
    }
    let plan = plan_insertion(q, n)?;
    let mut next = q.clone();
    next.set_order(m + 1);
    for (u, &i) in plan.class_of.iter().enumerate() {
        next.insert(i, Edge::new(u, m))?;
    }
    check_extendable(&next, n).map_err(|e| Error::invariant("hilton step", e.to_string()))?;
    Ok(next)
}

/// Closes every Hamiltonian path of `K_{2n}` into a Hamiltonian cycle through
/// the new vertex `2n`.
pub fn close_final_vertex(q: &Decomposition) -> Result<Decomposition> {
    let m = q.order();
    let n = q.num_classes();
    if m != 2 * n {
        return Err(Error::PreconditionViolation(format!("order {m} is not 2n = {}", 2 * n)));
    }
    let mut next = q.clone();
    next.set_order(m + 1);
    for i in 0..n {
        let view = q.linear_forest(i).map_err(|e| Error::PreconditionViolation(e.to_string()))?;
        if view.paths.len() != 1 || view.paths[0].len() != m {
            return Err(Error::PreconditionViolation(format!(
                "class {i} is not a Hamiltonian path of K_{m}"
            )));
        }
        let path = &view.paths[0];
        next.insert(i, Edge::new(path[0], m))?;
        next.insert(i, Edge::new(*path.last().unwrap(), m))?;
    }
    Ok(next)
}

/// Extends `q` (on `K_m`) to a Hamiltonian cycle decomposition of `K_{2n+1}`
/// whose classes contain the original ones.
pub fn extend_to_hcd(q: &Decomposition, n: usize) -> Result<Decomposition> {
    if q.order() == 2 * n + 1 {
        return if q.num_classes() == n && q.is_hcd() {
            Ok(q.clone())
        } else {
            Err(Error::PreconditionViolation("order 2n+1 but not an HCD".into()))
        };
    }
    check_extendable(q, n)?;
    let mut cur = q.clone();
    while cur.order() < 2 * n {
        cur = single_vertex_step(&cur, n)?;
    }
    let done = close_final_vertex(&cur).map_err(|e| Error::invariant("hilton close", e.to_string()))?;
    if !done.is_hcd() {
        return Err(Error::invariant("hilton close", "result is not an HCD"));
    }
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::walecki;

    fn contains_original(q: &Decomposition, d: &Decomposition) -> bool {
        (0..q.num_classes()).all(|i| q.class(i).is_subset(d.class(i)))
    }

    #[test]
    fn truncated_walecki_extends() {
        for n in 1..=6 {
            let w = walecki(n);
            for m in 1..=2 * n {
                let q = w.truncate(m);
                check_extendable(&q, n).unwrap();
                let d = extend_to_hcd(&q, n).unwrap();
                assert!(d.is_hcd(), "n = {n}, m = {m}");
                assert!(contains_original(&q, &d));
            }
        }
    }

    #[test]
    fn tight_class_receives_two() {
        // K_4 from walecki(3): every class has >= 2*4-6-1 = 1 edges
        let q = walecki(3).truncate(4);
        let plan = plan_insertion(&q, 3).unwrap();
        let floor = size_floor(5, 3);
        for i in 0..3 {
            let got = q.class(i).len() as i64 + plan.attachments[i].len() as i64;
            assert!(got >= floor);
            assert!(plan.attachments[i].len() <= 2);
        }
        assert_eq!(plan.class_of.len(), 4);
    }

    #[test]
    fn close_final_vertex_cases() {
        let mut q = Decomposition::new(2, 1);
        q.insert(0, Edge::new(0, 1)).unwrap();
        let d = close_final_vertex(&q).unwrap();
        assert!(d.is_hcd());
        let q = walecki(2).truncate(4);
        let d = close_final_vertex(&q).unwrap();
        assert!(d.is_hcd());
        assert_eq!(d.num_edges(), 10);
        let mut bad = walecki(2).truncate(4);
        let e = *bad.class(0).iter().next().unwrap();
        bad.remove(0, e);
        bad.insert(1, e).unwrap();
        assert!(matches!(close_final_vertex(&bad), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn precondition_failures() {
        let mut q = walecki(3).truncate(5);
        // move an edge to make one class too small
        let e = *q.class(0).iter().next().unwrap();
        q.remove(0, e);
        q.insert(1, e).ok();
        assert!(extend_to_hcd(&q, 3).is_err());
        assert!(extend_to_hcd(&walecki(3), 3).is_ok());
    }

    /// All maps old vertex -> class that give a valid step, by brute force.
    fn brute_force_plan_exists(q: &Decomposition, n: usize) -> bool {
        let m = q.order();
        let mut assign = vec![0usize; m];
        loop {
            let mut next = q.clone();
            next.set_order(m + 1);
            for (u, &i) in assign.iter().enumerate() {
                next.insert(i, Edge::new(u, m)).unwrap();
            }
            if check_extendable(&next, n).is_ok() {
                return true;
            }
            let mut p = 0;
            loop {
                if p == m {
                    return false;
                }
                assign[p] += 1;
                if assign[p] < n {
                    break;
                }
                assign[p] = 0;
                p += 1;
            }
        }
    }

    #[test]
    fn plan_agrees_with_brute_force() {
        // all truncations of small Walecki decompositions and some perturbations
        for n in 2..=4 {
            for m in 2..(2 * n).min(7) {
                let q = walecki(n).truncate(m);
                let ours = single_vertex_step(&q, n).is_ok();
                assert_eq!(ours, brute_force_plan_exists(&q, n), "n = {n}, m = {m}");
                // move one edge between classes when that keeps the precondition
                let edges: Vec<(usize, Edge)> = (0..n)
                    .flat_map(|i| q.class(i).iter().map(move |&e| (i, e)))
                    .collect();
                for &(i, e) in edges.iter().take(4) {
                    let mut p = q.clone();
                    p.remove(i, e);
                    p.insert((i + 1) % n, e).unwrap();
                    if check_extendable(&p, n).is_err() {
                        continue;
                    }
                    let ours = single_vertex_step(&p, n).is_ok();
                    assert_eq!(ours, brute_force_plan_exists(&p, n));
                }
            }
        }
    }

    #[test]
    fn plan_is_deterministic() {
        let q = walecki(5).truncate(7);
        assert_eq!(plan_insertion(&q, 5).unwrap(), plan_insertion(&q, 5).unwrap());
    }
}
