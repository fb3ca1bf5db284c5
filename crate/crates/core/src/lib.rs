//! Generalized-uncertainty bounds for entangled pairs of identical particles.
//!
//! - [`models`]: the five commutator deformations and their bound right-hand sides.
//! - [`minimal`]: closed-form and golden-section minimal position uncertainties.
//! - [`sim`]: two-particle wavefunction grids, moments and inequality checks.
//! - [`kimshih`]: minimal-length upper bound from the ghost-slit data.

// `!(x > 0.0)` style checks are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod kimshih;
pub mod minimal;
pub mod models;
pub mod quadratic;
pub mod search;
pub mod sim;
pub mod units;

pub use error::{Error, Result};
pub use kimshih::{
    compare_methods, estimate_bound, load_experiment, parse_experiment, BoundEstimate, ExperimentRecord,
    MethodComparison, RootMethod,
};
pub use minimal::{analytic_min, effective_parameter, minimal_length, numeric_min, MinimalLengthQuery, MinimumResult};
pub use models::{
    bound_curve, entangled_pair_rhs, gamma, single_particle_rhs, BoundContext, GupKind, GupModel, MomentumStats,
};
pub use sim::{check_inequalities, GridSpec, PairState, UncertaintyReport};
pub use units::{LengthUnit, UnitSystem};
