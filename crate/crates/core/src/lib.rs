//! Exact arithmetic for the metacyclic groups `G(p, p-1)` and their integral
//! group rings, with an end-to-end certified check of the syzygy condition
//! `M(7)`.
//!
//! Layers, bottom up:
//!
//! * [`exactlin`]: big-integer matrices, Hermite and Smith forms, kernels,
//!   exact solvability with certificates, lattice operations.
//! * [`metacyclic`]: the group, its group ring, ideals.
//! * [`trimat`]: the triangular ring `T_{p-1}(Z, p)`, its row modules and
//!   explicit unit constructions.
//! * [`modrep`]: lattices with a group action, representations, isomorphism
//!   certificates for row modules.
//! * [`m7pipeline`]: the full `M(7)` verification.
//! * [`report`] and [`cli`]: check reports and the `d2verify` front end.

pub mod cli;
pub mod error;
pub mod exactlin;
pub mod fixtures;
pub mod m7pipeline;
pub mod metacyclic;
pub mod modrep;
pub mod report;
pub mod trimat;

pub use error::{Error, Result};
pub use exactlin::IntMatrix;
