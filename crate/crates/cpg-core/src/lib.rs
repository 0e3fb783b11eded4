//! Enumeration, singularity analysis, and exact-distribution samplers for
//! labelled cubic planar graphs.
//!
//! The pipeline has five layers:
//!
//! * [`series`]: truncated power series over exact rationals or floats, the
//!   network grammar solver, and the triangulation counting series.
//! * [`numeric`]: an arbitrary-precision binary float and the solver for the
//!   singular constants (radius of convergence, core-density constant, and
//!   the derived scaling constants).
//! * [`airy`]: the map-Airy density and distribution function that governs
//!   fluctuations of the largest 3-connected component.
//! * [`graph`]: cubic multigraphs, rooted networks, planarity testing,
//!   combinatorial maps, and the network decomposition grammar.
//! * [`sampler`] and [`harness`]: Boltzmann samplers with exact output
//!   distributions, exhaustive enumeration oracles, and the Monte Carlo
//!   experiment drivers.

pub mod airy;
pub mod error;
pub mod graph;
pub mod harness;
pub mod numeric;
pub mod sampler;
pub mod series;

pub use error::{CpgError, Result};
