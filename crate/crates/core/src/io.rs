//! Instance and certificate files.
//!
//! Instance: first non-comment line `n`, then `n` lines `u v` with arbitrary
//! non-negative integer labels; `#` starts a comment. Labels are mapped to
//! dense vertices in order of first appearance.
//!
//! Certificate: pretty-printed JSON with keys `n`, `order`, `label_map`,
//! `classes`, `h_edges`, `assignment`, `seed`, `pipeline_trace`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::certificate::RainbowCertificate;
use crate::error::{Error, Result};
use crate::graph::{Decomposition, Edge, SimpleGraph, Vertex};

/// A parsed instance: `H` on dense vertices plus the original label of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledInstance {
    pub h: SimpleGraph,
    pub labels: Vec<u64>,
}

impl LabeledInstance {
    /// Edges as unordered label pairs.
    pub fn label_edges(&self) -> BTreeSet<(u64, u64)> {
        self.h
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (self.labels[e.lo()], self.labels[e.hi()]);
                (a.min(b), a.max(b))
            })
            .collect()
    }
}

pub fn parse_instance(text: &str) -> Result<LabeledInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, first) = lines.next().ok_or_else(|| Error::Parse("empty instance".into()))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::Parse(format!("line {ln}: expected the edge count, got {first:?}")))?;
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    let mut labels = Vec::new();
    let mut index: BTreeMap<u64, Vertex> = BTreeMap::new();
    let mut edges = Vec::with_capacity(n);
    let mut seen = BTreeSet::new();
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = parts[..] else {
            return Err(Error::Parse(format!("line {ln}: expected two labels, got {line:?}")));
        };
        let parse = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse(format!("line {ln}: bad label {s:?}")));
        let (a, b) = (parse(a)?, parse(b)?);
        if a == b {
            return Err(Error::Parse(format!("line {ln}: loop at {a}")));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::Parse(format!("line {ln}: duplicate edge {a} {b}")));
        }
        let mut id = |x: u64| {
            *index.entry(x).or_insert_with(|| {
                labels.push(x);
                labels.len() - 1
            })
        };
        let (u, v) = (id(a), id(b));
        edges.push(Edge::new(u, v));
    }
    if edges.len() != n {
        return Err(Error::Parse(format!("header says {n} edges but {} given", edges.len())));
    }
    let h = SimpleGraph::new(labels.len(), edges).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(LabeledInstance { h, labels })
}

pub fn format_instance(h: &SimpleGraph) -> String {
    let mut s = format!("{}\n", h.num_edges());
    for e in h.edges() {
        s.push_str(&format!("{} {}\n", e.lo(), e.hi()));
    }
    s
}

/// The on-disk certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub n: usize,
    pub order: usize,
    /// `[label, vertex]`: the host vertex carrying each instance label.
    pub label_map: Vec<(u64, Vertex)>,
    pub classes: Vec<Vec<Edge>>,
    pub h_edges: Vec<Edge>,
    pub assignment: Vec<usize>,
    pub seed: u64,
    pub pipeline_trace: Vec<String>,
}

impl CertificateFile {
    /// `cert` must carry `H` on host vertices `0..labels.len()`.
    pub fn new(cert: &RainbowCertificate, labels: &[u64], seed: u64, trace: Vec<String>) -> Self {
        CertificateFile {
            n: cert.n,
            order: cert.decomposition.order(),
            label_map: labels.iter().enumerate().map(|(v, &l)| (l, v)).collect(),
            classes: cert.decomposition.classes().iter().map(|c| c.iter().copied().collect()).collect(),
            h_edges: cert.h_edges.clone(),
            assignment: cert.assignment.clone(),
            seed,
            pipeline_trace: trace,
        }
    }

    /// The certificate as written; consistency is left to the verifier.
    pub fn to_certificate(&self) -> RainbowCertificate {
        let classes = self.classes.iter().map(|c| c.iter().copied().collect()).collect();
        RainbowCertificate {
            n: self.n,
            decomposition: Decomposition::from_classes_unchecked(self.order, classes),
            h_edges: self.h_edges.clone(),
            assignment: self.assignment.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// `h_edges` read through `label_map`, as unordered label pairs.
    pub fn label_edges(&self) -> Result<BTreeSet<(u64, u64)>> {
        let back: BTreeMap<Vertex, u64> = self.label_map.iter().map(|&(l, v)| (v, l)).collect();
        if back.len() != self.label_map.len() {
            return Err(Error::Parse("label_map maps two labels to one vertex".into()));
        }
        self.h_edges
            .iter()
            .map(|e| match (back.get(&e.lo()), back.get(&e.hi())) {
                (Some(&a), Some(&b)) => Ok((a.min(b), a.max(b))),
                _ => Err(Error::Parse(format!("h_edge {e:?} has an unlabeled endpoint"))),
            })
            .collect()
    }
}
