use std::collections::VecDeque;

use super::BipartiteMultigraph;
use crate::error::{Error, Result};

fn membership(g: &BipartiteMultigraph, a: &[usize], b: &[usize]) -> Result<Vec<bool>> {
    let m = g.num_edges();
    let mut side = vec![None; m];
    for (ids, in_a) in [(a, true), (b, false)] {
        for &e in ids {
            if e >= m {
                return Err(Error::PreconditionViolation(format!("edge id {e} out of range")));
            }
            if side[e].replace(in_a).is_some() {
                return Err(Error::PreconditionViolation(format!("edge {e} listed twice")));
            }
        }
    }
    side.into_iter()
        .enumerate()
        .map(|(e, s)| s.ok_or_else(|| Error::PreconditionViolation(format!("edge {e} in neither A nor B"))))
        .collect()
}

/// Exchanges `A` along one alternating path from `x0` so that `x0` loses one
/// `A`-edge while every `Y` degree is kept and every other `X` degree stays
/// within `[deg_A(x), eta]`.
///
/// The path leaves `x0` by an `A`-edge, alternates `A` at `X` and `B` at `Y`,
/// and ends at the first `X`-vertex (in BFS order) with `deg_A < eta`. Returns
/// `C = A △ P` as ascending edge ids.
pub fn rebalance_drop_one(
    g: &BipartiteMultigraph,
    a: &[usize],
    b: &[usize],
    x0: usize,
    eta: usize,
) -> Result<Vec<usize>> {
    let in_a = membership(g, a, b)?;
    if x0 >= g.x_size() {
        return Err(Error::PreconditionViolation(format!("x0 = {x0} out of range")));
    }
    let (ax, ay) = g.degrees_of(a.iter().copied());
    let (bx, by) = g.degrees_of(b.iter().copied());
    if let Some(y) = (0..g.y_size()).find(|&y| by[y] < ay[y]) {
        return Err(Error::PreconditionViolation(format!(
            "deg_B({y}) = {} < deg_A({y}) = {}",
            by[y], ay[y]
        )));
    }
    if let Some(x) = (0..g.x_size()).find(|&x| ax[x] > eta || bx[x] > eta) {
        return Err(Error::PreconditionViolation(format!("X-vertex {x} exceeds eta = {eta}")));
    }
    let strict = ax[x0] > bx[x0];
    let tied = ax[x0] == bx[x0] && ax[x0] % 2 == 1 && eta % 2 == 0 && by.iter().all(|d| d % 2 == 0);
    if !strict && !tied {
        return Err(Error::PreconditionViolation(format!(
            "x0 = {x0} has deg_A = {} and deg_B = {}",
            ax[x0], bx[x0]
        )));
    }

    let x_inc = g.x_incidence();
    let y_inc = g.y_incidence();
    // BFS over X and Y vertices; parent edge recorded per vertex
    let mut x_parent: Vec<Option<usize>> = vec![None; g.x_size()];
    let mut y_parent: Vec<Option<usize>> = vec![None; g.y_size()];
    let mut x_seen = vec![false; g.x_size()];
    let mut y_seen = vec![false; g.y_size()];
    x_seen[x0] = true;
    let mut queue = VecDeque::from([x0]);
    let mut end = None;
    'bfs: while let Some(x) = queue.pop_front() {
        for &e in &x_inc[x] {
            let y = g.edge(e).1;
            if !in_a[e] || y_seen[y] {
                continue;
            }
            y_seen[y] = true;
            y_parent[y] = Some(e);
            for &f in &y_inc[y] {
                let x2 = g.edge(f).0;
                if in_a[f] || x_seen[x2] {
                    continue;
                }
                x_seen[x2] = true;
                x_parent[x2] = Some(f);
                if ax[x2] < eta {
                    end = Some(x2);
                    break 'bfs;
                }
                queue.push_back(x2);
            }
        }
    }
    let Some(mut x) = end else {
        return Err(Error::InternalInfeasible(format!(
            "no alternating path from x0 = {x0} to an X-vertex below eta = {eta}"
        )));
    };

    let mut c = in_a.clone();
    while x != x0 {
        let f = x_parent[x].expect("bfs parent");
        let y = g.edge(f).1;
        let e = y_parent[y].expect("bfs parent");
        c[f] = true;
        c[e] = false;
        x = g.edge(e).0;
    }
    let c: Vec<usize> = (0..g.num_edges()).filter(|&e| c[e]).collect();
    debug_assert!(reduction_postconditions_hold(g, a, &c, x0, eta));
    Ok(c)
}

/// The three degree postconditions of [`rebalance_drop_one`].
pub fn reduction_postconditions_hold(
    g: &BipartiteMultigraph,
    a: &[usize],
    c: &[usize],
    x0: usize,
    eta: usize,
) -> bool {
    let (ax, ay) = g.degrees_of(a.iter().copied());
    let (cx, cy) = g.degrees_of(c.iter().copied());
    ay == cy
        && cx[x0] + 1 == ax[x0]
        && (0..g.x_size()).all(|x| x == x0 || (ax[x] <= cx[x] && cx[x] <= eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random instance meeting the preconditions, or `None` when the draw has
    /// no suitable `x0`.
    pub(crate) fn random_instance(
        rng: &mut impl Rng,
        max_edges: usize,
    ) -> Option<(BipartiteMultigraph, Vec<usize>, Vec<usize>, usize, usize)> {
        let g = crate::coloring::testgen::random_multigraph(rng, 5, 3, max_edges);
        if g.num_edges() == 0 {
            return None;
        }
        let mut in_a: Vec<bool> = (0..g.num_edges()).map(|_| rng.gen_bool(0.45)).collect();
        for ids in g.y_incidence() {
            let mut na = ids.iter().filter(|&&e| in_a[e]).count();
            for &e in &ids {
                if 2 * na <= ids.len() {
                    break;
                }
                if in_a[e] {
                    in_a[e] = false;
                    na -= 1;
                }
            }
        }
        let a: Vec<usize> = (0..g.num_edges()).filter(|&e| in_a[e]).collect();
        let b: Vec<usize> = (0..g.num_edges()).filter(|&e| !in_a[e]).collect();
        let (ax, _) = g.degrees_of(a.iter().copied());
        let (bx, _) = g.degrees_of(b.iter().copied());
        let x0 = (0..g.x_size()).find(|&x| ax[x] > bx[x])?;
        let top = (0..g.x_size()).map(|x| ax[x].max(bx[x])).max().unwrap();
        let eta = top + rng.gen_range(0..2);
        Some((g, a, b, x0, eta))
    }

    fn brute_force_feasible(g: &BipartiteMultigraph, a: &[usize], x0: usize, eta: usize) -> usize {
        let m = g.num_edges();
        (0u32..1 << m)
            .filter(|mask| {
                let c: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
                reduction_postconditions_hold(g, a, &c, x0, eta)
            })
            .count()
    }

    #[test]
    fn single_path_example() {
        // edge 0 = x0y (A), edge 1 = x1y (B)
        let g = BipartiteMultigraph::from_edges(2, 1, vec![(0, 0), (1, 0)]);
        let c = rebalance_drop_one(&g, &[0], &[1], 0, 1).unwrap();
        assert_eq!(c, vec![1]);
    }

    #[test]
    fn six_edge_gadget() {
        // x0 has two A-edges and one B-edge; path must route through x1 to x2
        let g = BipartiteMultigraph::from_edges(
            3,
            2,
            vec![(0, 0), (0, 1), (0, 1), (1, 0), (1, 1), (2, 1)],
        );
        let a = [0, 1, 4];
        let b = [2, 3, 5];
        let c = rebalance_drop_one(&g, &a, &b, 0, 2).unwrap();
        assert!(reduction_postconditions_hold(&g, &a, &c, 0, 2));
        assert!(brute_force_feasible(&g, &a, 0, 2) >= 1);
    }

    #[test]
    fn precondition_violations() {
        let g = BipartiteMultigraph::from_edges(2, 1, vec![(0, 0), (1, 0)]);
        let err = rebalance_drop_one(&g, &[0, 1], &[], 0, 2).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolation(_)));
        let err = rebalance_drop_one(&g, &[0], &[], 0, 2).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolation(_)));
    }

    #[test]
    fn random_against_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut accepted = 0;
        while accepted < 300 {
            let Some((g, a, b, x0, eta)) = random_instance(&mut rng, 14) else { continue };
            accepted += 1;
            let c = rebalance_drop_one(&g, &a, &b, x0, eta).unwrap();
            assert!(reduction_postconditions_hold(&g, &a, &c, x0, eta));
            assert!(brute_force_feasible(&g, &a, x0, eta) >= 1);
        }
    }
}
