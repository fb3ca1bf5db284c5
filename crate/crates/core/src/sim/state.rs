use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use super::grid::GridSpec;
use super::moments::pairwise_sum;
use crate::error::{invalid, Error, Result};
use crate::units::check_hbar;

/// Amplitudes in the outer `DECAY_CELLS` cells of every edge must stay below
/// this magnitude.
pub const DECAY_THRESHOLD: f64 = 1e-12;
pub const DECAY_CELLS: usize = 4;

const NORM_TOL: f64 = 1e-10;

/// Normalized two-particle amplitude grid `psi(x1, x2)`, row-major with `x1`
/// indexing rows.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    grid: GridSpec,
    amplitudes: Vec<Complex64>,
    hbar: f64,
}

impl PairState {
    /// Samples `f`, normalizes, and checks the boundary-decay invariant.
    pub fn from_fn<F>(grid: GridSpec, hbar: f64, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        check_hbar(hbar)?;
        let xs = grid.coords();
        let n = grid.n();
        let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
        amps.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, a) in row.iter_mut().enumerate() {
                *a = f(xs[i], xs[j]);
            }
        });
        let mut state = PairState {
            grid,
            amplitudes: amps,
            hbar,
        };
        state.normalize()?;
        state.check_decay()?;
        Ok(state)
    }

    /// Wraps existing amplitudes; they must already be normalized.
    pub fn from_amplitudes(grid: GridSpec, hbar: f64, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_hbar(hbar)?;
        let n = grid.n();
        if amplitudes.len() != n * n {
            return Err(invalid(
                "amplitudes",
                format!("expected {} values, got {}", n * n, amplitudes.len()),
            ));
        }
        let state = PairState { grid, amplitudes, hbar };
        let norm = state.norm_sq();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(invalid(
                "amplitudes",
                format!("not normalized: sum |psi|^2 dx^2 = {norm}"),
            ));
        }
        state.check_decay()?;
        Ok(state)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[i * self.grid.n() + j]
    }

    /// `sum |psi|^2 dx^2`.
    pub fn norm_sq(&self) -> f64 {
        let n = self.grid.n();
        let rows: Vec<f64> = self
            .amplitudes
            .par_chunks(n)
            .map(|row| pairwise_sum(&row.iter().map(|a| a.norm_sqr()).collect::<Vec<_>>()))
            .collect();
        let dx = self.grid.dx();
        pairwise_sum(&rows) * dx * dx
    }

    fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sq();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(invalid("state", format!("cannot normalize: norm = {norm}")));
        }
        let s = 1.0 / norm.sqrt();
        self.amplitudes.par_iter_mut().for_each(|a| *a *= s);
        Ok(())
    }

    /// Largest amplitude magnitude within `DECAY_CELLS` of any edge.
    pub fn boundary_max(&self) -> f64 {
        let n = self.grid.n();
        let edge = |k: usize| k < DECAY_CELLS || k >= n - DECAY_CELLS;
        let mut max = 0.0f64;
        for i in 0..n {
            let row = &self.amplitudes[i * n..(i + 1) * n];
            if edge(i) {
                max = row.iter().fold(max, |m, a| m.max(a.norm()));
            } else {
                for j in (0..DECAY_CELLS).chain(n - DECAY_CELLS..n) {
                    max = max.max(row[j].norm());
                }
            }
        }
        max
    }

    fn check_decay(&self) -> Result<()> {
        let m = self.boundary_max();
        if m >= DECAY_THRESHOLD {
            let c = 0.5 * (self.grid.x_min() + self.grid.x_max());
            let half = 0.75 * (self.grid.x_max() - self.grid.x_min());
            return Err(Error::GridTooSmall {
                detail: format!(
                    "|psi| = {m:.3e} within {DECAY_CELLS} cells of the boundary (limit {DECAY_THRESHOLD:e})"
                ),
                suggest_min: c - half,
                suggest_max: c + half,
            });
        }
        Ok(())
    }

    /// Particle labels exchanged: `psi(x1, x2) -> psi(x2, x1)`.
    pub fn swapped(&self) -> PairState {
        let n = self.grid.n();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, a) in row.iter_mut().enumerate() {
                *a = self.amplitudes[j * n + i];
            }
        });
        PairState {
            grid: self.grid,
            amplitudes: out,
            hbar: self.hbar,
        }
    }

    /// Normalized `psi(x1, x2) + psi(x2, x1)`.
    pub fn symmetrized(&self) -> Result<PairState> {
        let swapped = self.swapped();
        Self::superpose(&[(Complex64::new(1.0, 0.0), self), (Complex64::new(1.0, 0.0), &swapped)])
    }

    /// Normalized linear combination of states on the same grid.
    pub fn superpose(terms: &[(Complex64, &PairState)]) -> Result<PairState> {
        let first = terms.first().ok_or_else(|| invalid("terms", "empty superposition"))?.1;
        for (_, s) in terms {
            if s.grid != first.grid || s.hbar != first.hbar {
                return Err(invalid("terms", "states live on different grids"));
            }
        }
        let n = first.grid.n();
        let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
        amps.par_iter_mut().enumerate().for_each(|(idx, a)| {
            for (c, s) in terms {
                *a += c * s.amplitudes[idx];
            }
        });
        let mut state = PairState {
            grid: first.grid,
            amplitudes: amps,
            hbar: first.hbar,
        };
        state.normalize()?;
        state.check_decay()?;
        Ok(state)
    }
}

/// One-particle Gaussian wavepacket: center, position width, carrier wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavepacket {
    pub center: f64,
    pub sigma: f64,
    pub k: f64,
}

impl Wavepacket {
    pub fn new(center: f64, sigma: f64, k: f64) -> Self {
        Wavepacket { center, sigma, k }
    }

    fn amplitude(&self, x: f64) -> Complex64 {
        let d = x - self.center;
        let norm = (2.0 * PI * self.sigma * self.sigma).powf(-0.25);
        Complex64::from_polar(norm * (-d * d / (4.0 * self.sigma * self.sigma)).exp(), self.k * x)
    }
}

/// Separable state `phi_1(x1) phi_2(x2)`; carrier momenta are `hbar k_i`.
pub fn make_product_state(grid: GridSpec, hbar: f64, p1: Wavepacket, p2: Wavepacket) -> Result<PairState> {
    for (name, p) in [("sigma1", p1.sigma), ("sigma2", p2.sigma)] {
        if !(p > 0.0 && p.is_finite()) {
            return Err(invalid(name, format!("must be positive, got {p}")));
        }
    }
    PairState::from_fn(grid, hbar, |x1, x2| p1.amplitude(x1) * p2.amplitude(x2))
}

/// Gaussian in center-of-mass and relative coordinates
/// `u = (x1+x2)/sqrt 2`, `v = (x1-x2)/sqrt 2`:
/// `exp(-u^2/(4 s+^2) - v^2/(4 s-^2)) exp(i k_total u / sqrt 2)`.
/// Entangled iff `sigma_plus != sigma_minus`; total momentum `hbar k_total`.
pub fn make_correlated_gaussian(
    grid: GridSpec,
    hbar: f64,
    sigma_plus: f64,
    sigma_minus: f64,
    k_total: f64,
) -> Result<PairState> {
    for (name, s) in [("sigma_plus", sigma_plus), ("sigma_minus", sigma_minus)] {
        if !(s > 0.0 && s.is_finite()) {
            return Err(invalid(name, format!("must be positive, got {s}")));
        }
    }
    let ap = 1.0 / (4.0 * sigma_plus * sigma_plus);
    let am = 1.0 / (4.0 * sigma_minus * sigma_minus);
    PairState::from_fn(grid, hbar, |x1, x2| {
        let u = (x1 + x2) * FRAC_1_SQRT_2;
        let v = (x1 - x2) * FRAC_1_SQRT_2;
        Complex64::from_polar((-ap * u * u - am * v * v).exp(), k_total * u * FRAC_1_SQRT_2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::symmetric(20.0, 128).unwrap()
    }

    #[test]
    fn product_is_normalized() {
        let s = make_product_state(
            grid(),
            1.0,
            Wavepacket::new(0.0, 1.0, 0.0),
            Wavepacket::new(1.0, 1.5, 2.0),
        )
        .unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decay_violation_suggests_bounds() {
        let err = make_product_state(
            grid(),
            1.0,
            Wavepacket::new(0.0, 4.0, 0.0),
            Wavepacket::new(0.0, 1.0, 0.0),
        )
        .unwrap_err();
        match err {
            Error::GridTooSmall {
                suggest_min,
                suggest_max,
                ..
            } => assert!(suggest_min < -16.0 && suggest_max > 16.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_widths_rejected() {
        assert!(make_correlated_gaussian(grid(), 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(make_product_state(
            grid(),
            1.0,
            Wavepacket::new(0.0, -1.0, 0.0),
            Wavepacket::new(0.0, 1.0, 0.0)
        )
        .is_err());
    }

    #[test]
    fn unnormalized_amplitudes_rejected() {
        let g = GridSpec::symmetric(8.0, 64).unwrap();
        let amps = vec![Complex64::new(0.0, 0.0); 64 * 64];
        assert!(PairState::from_amplitudes(g, 1.0, amps).is_err());
    }

    #[test]
    fn swap_twice_is_identity() {
        let s = make_correlated_gaussian(GridSpec::symmetric(30.0, 128).unwrap(), 1.0, 2.0, 1.0, 0.5).unwrap();
        assert_eq!(s.swapped().swapped(), s);
    }
}
