use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::state::PairState;

/// Largest `|dQ1 - dQ2|` and `|dP1 - dP2|` for which the symmetric
/// single-particle form of the pair inequality is checked.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Relative slack for the inequality flags; anything beyond it is a
/// discretization failure, not round-off.
const CHECK_RTOL: f64 = 1e-9;

const PAIRWISE_BLOCK: usize = 32;

/// Sum in a fixed binary-tree order.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= PAIRWISE_BLOCK {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Joint first and second moments of a two-axis density.
#[derive(Debug, Clone, Copy, PartialEq)]
struct JointMoments {
    mean1: f64,
    mean2: f64,
    var1: f64,
    var2: f64,
    cov: f64,
}

/// `density` is row-major `n x n`, rows indexed by `c1`, columns by `c2`.
fn joint_moments(density: &[f64], n: usize, c1: &[f64], c2: &[f64]) -> JointMoments {
    let row_stats: Vec<[f64; 2]> = density
        .par_chunks(n)
        .map(|row| {
            let w: Vec<f64> = row.to_vec();
            let x: Vec<f64> = row.iter().zip(c2).map(|(r, c)| r * c).collect();
            [pairwise_sum(&w), pairwise_sum(&x)]
        })
        .collect();
    let mass: Vec<f64> = row_stats.iter().map(|r| r[0]).collect();
    let total = pairwise_sum(&mass);
    let mean1 = pairwise_sum(&mass.iter().zip(c1).map(|(m, c)| m * c).collect::<Vec<_>>()) / total;
    let mean2 = pairwise_sum(&row_stats.iter().map(|r| r[1]).collect::<Vec<_>>()) / total;

    let central: Vec<[f64; 3]> = density
        .par_chunks(n)
        .enumerate()
        .map(|(i, row)| {
            let d1 = c1[i] - mean1;
            let lin: Vec<f64> = row.iter().zip(c2).map(|(r, c)| r * (c - mean2)).collect();
            let quad: Vec<f64> = row.iter().zip(c2).map(|(r, c)| r * (c - mean2) * (c - mean2)).collect();
            let m = pairwise_sum(row);
            [m * d1 * d1, pairwise_sum(&lin) * d1, pairwise_sum(&quad)]
        })
        .collect();
    let col = |k: usize| pairwise_sum(&central.iter().map(|r| r[k]).collect::<Vec<_>>()) / total;
    JointMoments {
        mean1,
        mean2,
        var1: col(0),
        var2: col(2),
        cov: col(1),
    }
}

fn momentum_density(state: &PairState) -> Vec<f64> {
    let n = state.grid().n();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let mut buf: Vec<Complex64> = state.amplitudes().to_vec();
    buf.par_chunks_mut(n).for_each(|row| fft.process(row));
    let mut t = transpose(&buf, n);
    t.par_chunks_mut(n).for_each(|row| fft.process(row));
    transpose(&t, n).iter().map(|a| a.norm_sqr()).collect()
}

fn transpose(a: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[j * n + i];
        }
    });
    out
}

/// Per-particle means and variances plus the two covariances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean_q1: f64,
    pub mean_q2: f64,
    pub var_q1: f64,
    pub var_q2: f64,
    pub mean_p1: f64,
    pub mean_p2: f64,
    pub var_p1: f64,
    pub var_p2: f64,
    pub cq: f64,
    pub cp: f64,
}

impl Moments {
    pub fn compute(state: &PairState) -> Moments {
        let grid = state.grid();
        let n = grid.n();
        let xs = grid.coords();
        let pos_density: Vec<f64> = state.amplitudes().iter().map(|a| a.norm_sqr()).collect();
        let q = joint_moments(&pos_density, n, &xs, &xs);

        let ps: Vec<f64> = grid.wavenumbers().iter().map(|k| state.hbar() * k).collect();
        let p = joint_moments(&momentum_density(state), n, &ps, &ps);

        Moments {
            mean_q1: q.mean1,
            mean_q2: q.mean2,
            var_q1: q.var1,
            var_q2: q.var2,
            mean_p1: p.mean1,
            mean_p2: p.mean2,
            var_p1: p.var1,
            var_p2: p.var2,
            cq: q.cov,
            cp: p.cov,
        }
    }
}

/// `(mean_q1, mean_q2, var_q1, var_q2, mean_p1, mean_p2, var_p1, var_p2)`.
pub fn moments(state: &PairState) -> (f64, f64, f64, f64, f64, f64, f64, f64) {
    let m = Moments::compute(state);
    (
        m.mean_q1, m.mean_q2, m.var_q1, m.var_q2, m.mean_p1, m.mean_p2, m.var_p1, m.var_p2,
    )
}

/// Quantum covariance functions `(C_Q(1,2), C_P(1,2))`.
pub fn qcf(state: &PairState) -> (f64, f64) {
    let m = Moments::compute(state);
    (m.cq, m.cp)
}

/// Spreads, covariances and every inequality of the pair chain for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub dq1: f64,
    pub dq2: f64,
    pub dp1: f64,
    pub dp2: f64,
    pub mean_q1: f64,
    pub mean_q2: f64,
    pub mean_p1: f64,
    pub mean_p2: f64,
    pub cq: f64,
    pub cp: f64,
    /// `(dQ1^2 + dQ2^2)(dP1^2 + dP2^2)`
    pub lhs_pair: f64,
    /// `|<[Q,P]>|^2 / 16 = hbar^2 / 4`
    pub rhs_pair: f64,
    /// `dQ_i dP_i`, present only when the spreads agree within `SYMMETRY_TOL`.
    pub lhs_symmetric: Option<f64>,
    /// `|<[Q,P]>| / 8 = hbar / 4`
    pub rhs_symmetric: f64,
    pub schwarz_q_ok: bool,
    pub schwarz_p_ok: bool,
    pub pair_ok: bool,
    /// `None` when the symmetric form does not apply.
    pub symmetric_ok: Option<bool>,
}

impl UncertaintyReport {
    pub fn all_ok(&self) -> bool {
        self.schwarz_q_ok && self.schwarz_p_ok && self.pair_ok && self.symmetric_ok.unwrap_or(true)
    }

    /// Marginal products `(dQ1 dP1, dQ2 dP2)`.
    pub fn marginal_products(&self) -> (f64, f64) {
        (self.dq1 * self.dp1, self.dq2 * self.dp2)
    }
}

fn holds(lhs: f64, rhs: f64) -> bool {
    lhs >= rhs - CHECK_RTOL * lhs.abs().max(rhs.abs())
}

/// Evaluates the covariance-Schwarz inequalities, the pair product bound and,
/// for symmetric spreads, `dQ_i dP_i >= hbar/4`. Undeformed commutator:
/// `<[Q, P]> = 2 i hbar`.
pub fn check_inequalities(state: &PairState) -> UncertaintyReport {
    let m = Moments::compute(state);
    let hbar = state.hbar();
    let commutator = 2.0 * hbar;

    let (dq1, dq2) = (m.var_q1.sqrt(), m.var_q2.sqrt());
    let (dp1, dp2) = (m.var_p1.sqrt(), m.var_p2.sqrt());

    let lhs_pair = (m.var_q1 + m.var_q2) * (m.var_p1 + m.var_p2);
    let rhs_pair = commutator * commutator / 16.0;
    let rhs_symmetric = commutator / 8.0;

    let symmetric = (dq1 - dq2).abs() < SYMMETRY_TOL && (dp1 - dp2).abs() < SYMMETRY_TOL;
    let lhs_symmetric = symmetric.then_some(0.5 * (dq1 * dp1 + dq2 * dp2));

    UncertaintyReport {
        dq1,
        dq2,
        dp1,
        dp2,
        mean_q1: m.mean_q1,
        mean_q2: m.mean_q2,
        mean_p1: m.mean_p1,
        mean_p2: m.mean_p2,
        cq: m.cq,
        cp: m.cp,
        lhs_pair,
        rhs_pair,
        lhs_symmetric,
        rhs_symmetric,
        schwarz_q_ok: holds(m.var_q1 + m.var_q2, 2.0 * m.cq),
        schwarz_p_ok: holds(m.var_p1 + m.var_p2, 2.0 * m.cp),
        pair_ok: holds(lhs_pair, rhs_pair),
        symmetric_ok: lhs_symmetric.map(|l| holds(l, rhs_symmetric)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn holds_allows_round_off_only() {
        assert!(holds(1.0, 1.0 + 1e-12));
        assert!(!holds(1.0, 1.0 + 1e-6));
    }
}
