//! Two-particle wavefunctions on a periodic grid, with the moments,
//! quantum covariance functions and inequality checks computed from them.
//!
//! Position moments come from direct quadrature of `|psi|^2`; momentum
//! moments from `|phi|^2` after a two-axis DFT. Reductions use pairwise
//! summation in a fixed order so results do not depend on the thread count.

mod fixture;
mod grid;
mod moments;
mod state;

pub use fixture::{read_fixture, write_fixture, FIXTURE_MAGIC};
pub use grid::GridSpec;
pub use moments::{check_inequalities, moments, qcf, Moments, UncertaintyReport, SYMMETRY_TOL};
pub use state::{make_correlated_gaussian, make_product_state, PairState, Wavepacket, DECAY_CELLS, DECAY_THRESHOLD};

pub use rustfft::num_complex::Complex64;
