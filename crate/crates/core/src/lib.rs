//! Stable subordination of Markov semigroups, with explicit Harnack-type
//! constants and numerical checks of the resulting inequalities.

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub(crate) mod floatfmt;
pub mod quad;
pub mod semigroup;
pub mod specfun;
pub mod subordinator;
pub mod verify;

pub use error::{Error, Result};
pub use quad::{Estimate, QuadratureSpec};
pub use subordinator::{MCSpec, SeriesEval, StableSubordinator};
