//! Random generation: critical Boltzmann samplers over the network grammar,
//! uniform simple triangulations via blossoming trees, uniform connected
//! cubic planar graphs, and the core-resampled model.

pub mod blossom;
pub mod boltzmann;
pub mod connected;
pub mod context;

pub use blossom::sample_triangulation;
pub use boltzmann::{sample_boltzmann_network, sample_size_biased, MarkedNetwork};
pub use connected::{sample_connected_cubic, sample_o_model, ConnectedSample};
pub use context::SamplerContext;
