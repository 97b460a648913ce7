//! Steiner triple systems, their incidence graphs, and the minimum semidefinite
//! rank machinery around them.
//!
//! The crate is organised bottom-up:
//!
//! * [`designs`]: triple systems, validation, the STS text format, weak 2-colorings.
//! * [`graphs`]: simple graphs, incidence graphs, girth, spectra, graph6.
//! * [`linalg`]: complex vectors, Hermitian matrices, Gram matrices, Jacobi eigen solves.
//! * [`orthrep`]: tail-vector conditions, row completion, assembly of orthogonal
//!   representations and faithfulness checks.
//! * [`sphere`]: the Riemann-sphere picture of vectors in C².
//! * [`zeroforcing`]: standard and positive semidefinite zero forcing.
//! * [`certificate`]: serialisable, re-checkable records of verified claims.
//! * [`commands`]: the end-to-end reports behind the command-line tool.
//!
//! Data-parallel loops go through [`par`]; with the `parallel` feature disabled
//! every [`Execution`] runs sequentially.

pub mod catalog;
pub mod certificate;
pub mod commands;
pub mod designs;
pub mod graphs;
pub mod linalg;
pub mod orthrep;
pub mod par;
pub mod sphere;
pub mod zeroforcing;

pub use certificate::{Certificate, ClaimKind, Verdict};
pub use designs::{Coloring, DesignError, TripleSystem};
pub use graphs::{Girth, Graph, GraphError};
pub use linalg::{CMatrix, CVector, HermitianMatrix, LinalgError};
pub use par::Execution;

pub use num_complex::Complex64;

/// Version string embedded in emitted certificates.
pub const TOOL_VERSION: &str = concat!("steiner-msr ", env!("CARGO_PKG_VERSION"));
