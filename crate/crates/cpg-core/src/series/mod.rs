//! Truncated power series and the combinatorial series they encode.

pub mod coeff;
pub mod grammar;
pub mod power_series;
pub mod triangulation;

pub use coeff::Coeff;
pub use grammar::{
    evaluate_y_law, solve_grammar_fixed_point, solve_grammar_newton, GrammarTable, YLaw,
};
pub use power_series::{Parity, PowerSeries};
