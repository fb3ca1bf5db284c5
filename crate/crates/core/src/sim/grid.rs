use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Square periodic grid shared by both particle axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl GridSpec {
    /// `n` points per axis at `x_min + i*dx`, `dx = (x_max - x_min)/n`.
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 64, got {n}"
            )));
        }
        Ok(GridSpec { x_min, x_max, n })
    }

    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dx())
    }

    pub fn coords(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|i| self.x_min + dx * i as f64).collect()
    }

    /// Angular wavenumbers in DFT order (`0, dk, ..., -dk`).
    pub fn wavenumbers(&self) -> Vec<f64> {
        let dk = self.dk();
        let n = self.n as i64;
        (0..n)
            .map(|j| {
                let f = if j < n / 2 { j } else { j - n };
                dk * f as f64
            })
            .collect()
    }

    /// Same interval with twice the points.
    pub fn refined(&self) -> Self {
        GridSpec { n: self.n * 2, ..*self }
    }
}
