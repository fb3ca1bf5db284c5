//! Upper bound on the KMM minimal length from the Kim–Shih ghost-slit data.
//!
//! Slit case (separable, single-particle KMM with `4 beta`):
//! `w dP = (hbar/2) [1 + 4 beta dP^2 + gamma]`, i.e.
//! `2 hbar beta x^2 - w x + hbar eta / 2 = 0`, with `eta = 1 + gamma`.
//! Its larger root, scaled by the measured non-slit/slit spread ratio, is
//! then required to satisfy the entangled pair bound
//! `w dP_ns >= (hbar/4) [1 + beta dP_ns^2 + gamma]`; the largest such
//! `beta` bounds the minimal length by `hbar sqrt(beta)`.
//!
//! Computations run in the record's length unit with `hbar` as given
//! (natural units, `hbar = 1` by default); meters only appear in outputs.

mod estimate;
mod record;

pub use estimate::{
    compare_methods, estimate_bound, exact_root_limit, paper_real_root_limit, slit_roots_exact, slit_roots_paper,
    BoundEstimate, BoundLimit, MethodComparison, RootMethod, SlitRoots,
};
pub use record::{load_experiment, parse_experiment, ExperimentRecord, KIM_SHIH_RECORD};
