//! Numeric support: singular constants and arbitrary-precision floats.

pub mod bigfloat;
pub mod constants;
pub mod gamma;

pub use bigfloat::BigFloat;
pub use gamma::gamma_rational;
pub use constants::{class_values, singular_constants, ClassValues, SingularConstants};
