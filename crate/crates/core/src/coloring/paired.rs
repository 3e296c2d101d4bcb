use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BipartiteMultigraph;
use crate::error::{Error, Result};

/// Disjoint pairs of edges, each pair sharing its `X` endpoint (an x-pair).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Pairing { pairs }
    }

    /// Pairs grouped by their `X` vertex.
    pub fn by_x(&self, g: &BipartiteMultigraph) -> BTreeMap<usize, Vec<(usize, usize)>> {
        let mut m: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for &(a, b) in &self.pairs {
            m.entry(g.edge(a).0).or_default().push((a, b));
        }
        m
    }

    /// Checks the three pairing invariants against `g`.
    pub fn validate(&self, g: &BipartiteMultigraph) -> Result<()> {
        let mut seen = vec![false; g.num_edges()];
        for &(a, b) in &self.pairs {
            if a >= g.num_edges() || b >= g.num_edges() || a == b {
                return Err(Error::PreconditionViolation(format!("bad pair ({a}, {b})")));
            }
            for e in [a, b] {
                if std::mem::replace(&mut seen[e], true) {
                    return Err(Error::PreconditionViolation(format!("edge {e} in two pairs")));
                }
            }
            if g.edge(a).0 != g.edge(b).0 {
                return Err(Error::PreconditionViolation(format!(
                    "pair ({a}, {b}) does not share an X endpoint"
                )));
            }
        }
        let mut outward: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(a, b) in &self.pairs {
            let (ea, eb) = (g.edge(a), g.edge(b));
            if ea != eb {
                *outward.entry(ea).or_default() += 1;
                *outward.entry(eb).or_default() += 1;
            }
        }
        let bundles = g.bundles();
        for (xy, cnt) in outward {
            if bundles[&xy].len() >= 2 && cnt > 1 {
                return Err(Error::PreconditionViolation(format!(
                    "bundle {xy:?} has {cnt} edges paired outside it"
                )));
            }
        }
        Ok(())
    }
}

/// Links between edges: the completed x-pairing and a y-pairing.
/// Each edge has at most one partner of each kind.
struct Links {
    x: Vec<Option<usize>>,
    y: Vec<Option<usize>>,
}

/// Pairs up the unpaired ids at one vertex: inside a bundle first, then across
/// bundles, all in ascending id order.
fn pair_leftovers(g: &BipartiteMultigraph, ids: &[usize], link: &mut [Option<usize>]) {
    let mut by_bundle: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &id in ids {
        if link[id].is_none() {
            by_bundle.entry(g.edge(id)).or_default().push(id);
        }
    }
    let mut rest = Vec::new();
    for (_, b) in by_bundle {
        for ch in b.chunks(2) {
            if let [p, q] = *ch {
                link[p] = Some(q);
                link[q] = Some(p);
            } else {
                rest.push(ch[0]);
            }
        }
    }
    rest.sort_unstable();
    for ch in rest.chunks(2) {
        if let [p, q] = *ch {
            link[p] = Some(q);
            link[q] = Some(p);
        }
    }
}

fn build_links(g: &BipartiteMultigraph, pairing: &Pairing) -> Links {
    let m = g.num_edges();
    let mut x = vec![None; m];
    let mut y = vec![None; m];
    for &(a, b) in &pairing.pairs {
        x[a] = Some(b);
        x[b] = Some(a);
        // a pair inside one bundle is also its own y-pair
        if g.edge(a) == g.edge(b) {
            y[a] = Some(b);
            y[b] = Some(a);
        }
    }
    for ids in g.x_incidence() {
        pair_leftovers(g, &ids, &mut x);
    }
    for ids in g.y_incidence() {
        pair_leftovers(g, &ids, &mut y);
    }
    Links { x, y }
}

/// Splits the edges into components along alternating x-links and y-links.
/// Each component is listed in walk order; coloring it alternately splits
/// every link, and each component may be flipped independently.
pub(crate) fn alternating_components(g: &BipartiteMultigraph, pairing: &Pairing) -> Vec<Vec<usize>> {
    let links = build_links(g, pairing);
    let m = g.num_edges();
    let mut seen = vec![false; m];
    let mut comps = Vec::new();
    for e0 in 0..m {
        if seen[e0] {
            continue;
        }
        // walk to an end of the component, or around it if it is a cycle
        let link = |x: bool, e: usize| if x { links.x[e] } else { links.y[e] };
        let mut start = e0;
        let mut kind_x = true;
        let mut cyclic = false;
        while let Some(p) = link(kind_x, start) {
            start = p;
            kind_x = !kind_x;
            if start == e0 {
                cyclic = true;
                break;
            }
        }
        // at a path end the link of kind `kind_x` is missing, so leave by the other one
        let first_x = if cyclic { true } else { !kind_x };
        let mut comp = vec![start];
        seen[start] = true;
        let mut cur = start;
        let mut use_x = first_x;
        loop {
            let next = link(use_x, cur);
            match next {
                Some(p) if !seen[p] => {
                    seen[p] = true;
                    comp.push(p);
                    cur = p;
                    use_x = !use_x;
                }
                _ => break,
            }
        }
        comps.push(comp);
    }
    comps
}

fn check_pre(g: &BipartiteMultigraph, pairing: &Pairing) -> Result<()> {
    let (_, dy) = g.degrees();
    if let Some(y) = dy.iter().position(|d| d % 2 == 1) {
        return Err(Error::PreconditionViolation(format!("Y-vertex {y} has odd degree {}", dy[y])));
    }
    pairing.validate(g)
}

/// Balanced 2-edge coloring in which every x-pair gets two different colors.
/// Returns the two color classes as ascending edge ids.
pub fn paired_balanced_2_coloring(
    f: &BipartiteMultigraph,
    pairing: &Pairing,
) -> Result<(Vec<usize>, Vec<usize>)> {
    paired_balanced_2_coloring_seeded(f, pairing, None)
}

/// As [`paired_balanced_2_coloring`]; a seed flips a random subset of the
/// alternating components, giving another valid coloring.
pub fn paired_balanced_2_coloring_seeded(
    f: &BipartiteMultigraph,
    pairing: &Pairing,
    seed: Option<u64>,
) -> Result<(Vec<usize>, Vec<usize>)> {
    check_pre(f, pairing)?;
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut color = vec![0u8; f.num_edges()];
    for comp in alternating_components(f, pairing) {
        let flip = rng.as_mut().map_or(0, |r| r.gen_range(0..2u8));
        for (t, &e) in comp.iter().enumerate() {
            color[e] = (t as u8 % 2) ^ flip;
        }
    }
    let e1 = (0..f.num_edges()).filter(|&e| color[e] == 0).collect();
    let e2 = (0..f.num_edges()).filter(|&e| color[e] == 1).collect();
    Ok((e1, e2))
}
