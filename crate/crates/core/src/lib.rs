//! Rainbow Hamiltonian cycle decompositions of complete graphs.
//!
//! Given a graph `H` with `n` edges, [`solver::solve`] builds a decomposition of
//! `K_{2n+1}` into `n` Hamiltonian cycles in which the edges of `H` lie in
//! pairwise different cycles, and returns a certificate checkable by
//! [`certificate::verify_certificate`].

pub mod certificate;
pub mod coloring;
pub mod embed_dense;
pub mod error;
pub mod extend_sparse;
mod flow;
pub mod gen;
pub mod graph;
pub mod hilton;
pub mod io;
pub mod oracle;
pub mod solver;

pub use error::{Error, Result};
