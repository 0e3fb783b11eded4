//! Experiment harness: exhaustive oracles, statistical tests, large-scale
//! sampling experiments, and report serialization.

pub mod enumerate;
pub mod experiments;
pub mod report;
pub mod stats;

pub use enumerate::{enumerate_cubic_planar, enumerate_networks};
pub use experiments::{
    run_census, run_core_experiment, run_fragments, run_second_largest, CensusReport,
    CoreReport, FragmentReport, SecondLargestReport,
};
