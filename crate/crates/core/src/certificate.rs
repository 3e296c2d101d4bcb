//! Rainbow certificates and their independent verifier.

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::{is_hamiltonian_cycle, Decomposition, Edge, Vertex};

/// A Hamiltonian cycle decomposition of `K_{2n+1}` together with an injective
/// assignment of the edges of `H` to classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RainbowCertificate {
    pub n: usize,
    pub decomposition: Decomposition,
    pub h_edges: Vec<Edge>,
    /// `assignment[i]` is the (0-based) class holding `h_edges[i]`.
    pub assignment: Vec<usize>,
}

impl RainbowCertificate {
    /// Renames host vertices by `perm` (old -> new).
    pub fn relabel(&self, perm: &[Vertex]) -> RainbowCertificate {
        RainbowCertificate {
            n: self.n,
            decomposition: self.decomposition.relabel(perm),
            h_edges: self.h_edges.iter().map(|e| e.map(|v| perm[v])).collect(),
            assignment: self.assignment.clone(),
        }
    }

    pub fn verify(&self) -> VerificationReport {
        verify_certificate(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        write!(f, "{}", if self.passed() { "certificate valid" } else { "certificate INVALID" })
    }
}

/// Checks every property of a certificate without trusting whoever built it.
/// Failures are reported, never raised.
pub fn verify_certificate(cert: &RainbowCertificate) -> VerificationReport {
    let n = cert.n;
    let order = 2 * n + 1;
    let d = &cert.decomposition;
    let mut checks = Vec::new();

    // partition of K_{2n+1}
    let partition = {
        let mut problems = Vec::new();
        if d.order() != order {
            problems.push(format!("host order {} but expected {order}", d.order()));
        }
        if d.num_classes() != n {
            problems.push(format!("{} classes but expected {n}", d.num_classes()));
        }
        let mut owner: BTreeMap<Edge, usize> = BTreeMap::new();
        for (i, c) in d.classes().iter().enumerate() {
            for &e in c {
                if e.hi() >= order {
                    problems.push(format!("edge {e:?} outside K_{order}"));
                } else if let Some(j) = owner.insert(e, i) {
                    problems.push(format!("edge {e:?} in classes {} and {}", j + 1, i + 1));
                }
            }
        }
        let expected = order * (order - 1) / 2;
        if owner.len() != expected && problems.is_empty() {
            problems.push(format!("{} distinct edges, K_{order} has {expected}", owner.len()));
        }
        problems
    };
    checks.push(Check {
        name: "partition",
        passed: partition.is_empty(),
        detail: if partition.is_empty() {
            format!("classes partition E(K_{order})")
        } else {
            partition.join("; ")
        },
    });

    let bad_cycles: Vec<usize> = d
        .classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| !is_hamiltonian_cycle(c.iter(), order))
        .map(|(i, _)| i + 1)
        .collect();
    checks.push(Check {
        name: "hamiltonian",
        passed: bad_cycles.is_empty(),
        detail: if bad_cycles.is_empty() {
            format!("all {} classes are Hamiltonian cycles", d.num_classes())
        } else {
            format!("classes {bad_cycles:?} are not Hamiltonian cycles")
        },
    });

    let mut injective = Vec::new();
    if cert.assignment.len() != cert.h_edges.len() {
        injective.push(format!(
            "{} assignments for {} edges",
            cert.assignment.len(),
            cert.h_edges.len()
        ));
    }
    if cert.h_edges.len() > n {
        injective.push(format!("{} edges of H but only {n} classes", cert.h_edges.len()));
    }
    let mut used: BTreeMap<usize, Edge> = BTreeMap::new();
    for (&e, &c) in cert.h_edges.iter().zip(&cert.assignment) {
        if c >= n {
            injective.push(format!("edge {e:?} assigned to nonexistent class {}", c + 1));
        } else if let Some(prev) = used.insert(c, e) {
            injective.push(format!(
                "rainbow violation: edges {prev:?} and {e:?} both in class {}",
                c + 1
            ));
        }
    }
    checks.push(Check {
        name: "injective",
        passed: injective.is_empty(),
        detail: if injective.is_empty() {
            "assignment is injective".to_string()
        } else {
            injective.join("; ")
        },
    });

    let missing: Vec<String> = cert
        .h_edges
        .iter()
        .zip(&cert.assignment)
        .filter(|(e, &c)| c >= d.num_classes() || !d.class(c).contains(e))
        .map(|(e, &c)| format!("{e:?} not in class {}", c + 1))
        .collect();
    checks.push(Check {
        name: "membership",
        passed: missing.is_empty(),
        detail: if missing.is_empty() {
            "every edge of H lies in its assigned class".to_string()
        } else {
            missing.join("; ")
        },
    });

    VerificationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::walecki;

    #[test]
    fn triangle_certificate() {
        let cert = RainbowCertificate {
            n: 1,
            decomposition: walecki(1),
            h_edges: vec![Edge::new(0, 1)],
            assignment: vec![0],
        };
        assert!(verify_certificate(&cert).passed());
    }

    #[test]
    fn p3_in_one_class_fails_injectivity() {
        let d = walecki(2);
        // walecki(2) class 0 is 4-0-1-3-2-4
        let a = Edge::new(0, 1);
        let b = Edge::new(1, 3);
        assert!(d.class(0).contains(&a) && d.class(0).contains(&b));
        let cert = RainbowCertificate { n: 2, decomposition: d, h_edges: vec![a, b], assignment: vec![0, 0] };
        let report = verify_certificate(&cert);
        assert!(!report.passed());
        let inj = report.checks.iter().find(|c| c.name == "injective").unwrap();
        assert!(!inj.passed);
        assert!(inj.detail.contains("rainbow violation"));
    }

    #[test]
    fn two_independent_edges_one_per_cycle() {
        let d = walecki(2);
        // greedy: first edge of class 0, then first edge of class 1 disjoint from it
        let e0 = *d.class(0).iter().next().unwrap();
        let e1 = *d
            .class(1)
            .iter()
            .find(|e| !e.contains(e0.lo()) && !e.contains(e0.hi()))
            .unwrap();
        let cert = RainbowCertificate { n: 2, decomposition: d, h_edges: vec![e0, e1], assignment: vec![0, 1] };
        assert!(verify_certificate(&cert).passed());
    }

    #[test]
    fn walecki_with_empty_h_verifies() {
        for n in 1..=20 {
            let cert = RainbowCertificate { n, decomposition: walecki(n), h_edges: vec![], assignment: vec![] };
            assert!(verify_certificate(&cert).passed(), "n = {n}");
        }
    }

    #[test]
    fn wrong_membership_and_partition_detected() {
        let mut d = walecki(2);
        let e = *d.class(0).iter().next().unwrap();
        let cert = RainbowCertificate { n: 2, decomposition: d.clone(), h_edges: vec![e], assignment: vec![1] };
        assert!(!verify_certificate(&cert).passed());
        d.remove(0, e);
        let cert = RainbowCertificate { n: 2, decomposition: d, h_edges: vec![], assignment: vec![] };
        let report = verify_certificate(&cert);
        assert!(report.checks.iter().any(|c| c.name == "partition" && !c.passed));
        assert!(report.checks.iter().any(|c| c.name == "hamiltonian" && !c.passed));
    }
}
