//! Graph layer: cubic multigraphs, planarity, rooted maps, and the
//! series-parallel / polyhedral decomposition of rooted networks.

pub mod decompose;
pub mod iso;
pub mod map;
pub mod multigraph;
pub mod neighborhood;
pub mod network;
pub mod planarity;

pub use decompose::{
    decompose, insert_networks, is_three_connected, recompose, three_connected_components,
    DecompositionTree, RootRule,
};
pub use iso::{isomorphic_graphs, isomorphic_networks};
pub use map::PlanarMap;
pub use multigraph::{CubicGraph, ValidationReport};
pub use neighborhood::{neighborhood_key, NeighborhoodKey};
pub use network::{Network, NetworkClass};
pub use planarity::{embed, is_planar};
