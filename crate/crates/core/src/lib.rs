//! Numerical exploration of the Cahn-Hilliard energy landscape on the flat
//! torus in the critical regime of large system size and mean close to -1.
//!
//! * [`limit_model`]: the sharp-interface limit `f_xi` and its constants.
//! * [`field`]: periodic grid fields, the rescaled energy gap, droplets.
//! * [`shape`]: perimeter, Fraenkel asymmetry and other shape diagnostics
//!   of superlevel sets in two dimensions.
//! * [`steiner`]: discrete Steiner symmetrisation.
//! * [`optimize`]: volume-constrained minimisers and barrier sweeps.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod limit_model;
pub mod numeric;
pub mod optimize;
pub mod shape;
mod spectral;
pub mod steiner;
pub mod synth;

pub use error::{Error, FormatError, Result};
pub use field::{uniform_field, Field, ModelParams};
pub use limit_model::{solve_extrema, Extrema, LimitLandscape, LimitParams};
pub use optimize::{BarrierCurve, ConstrainedResult, MinimizeConfig};
pub use shape::{Mask, ShapeReport};
