use std::fmt;
use std::str::FromStr;

use super::record::ExperimentRecord;
use crate::error::{invalid, Error, Result};
use crate::quadratic::real_roots;
use crate::units::{check_hbar, LengthUnit};

/// Which expression supplies the slit-case momentum spread.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    /// Three-term series for the two roots, as published.
    PaperSeries,
    /// Both roots of the slit quadratic, solved without cancellation.
    ExactQuadratic,
}

impl RootMethod {
    pub fn name(self) -> &'static str {
        match self {
            RootMethod::PaperSeries => "paper-series",
            RootMethod::ExactQuadratic => "exact-quadratic",
        }
    }
}

impl fmt::Display for RootMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RootMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper-series" | "paper_series" | "series" => Ok(RootMethod::PaperSeries),
            "exact-quadratic" | "exact_quadratic" | "exact" => Ok(RootMethod::ExactQuadratic),
            other => Err(Error::Parse(format!("unknown root method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitRoots {
    pub r_plus: f64,
    pub r_minus: f64,
    /// Series mode only: `beta` exceeds the published real-root condition
    /// `beta <= w^2/(hbar^2 eta)`. The series still evaluates.
    pub beyond_real_root_condition: bool,
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(invalid("beta", format!("must be positive, got {beta}")))
    }
}

/// Published real-root condition `w^2/(hbar^2 eta)` (four times the exact
/// discriminant threshold).
pub fn paper_real_root_limit(record: &ExperimentRecord, hbar: f64) -> f64 {
    let w = record.slit_width();
    w * w / (hbar * hbar * record.eta())
}

/// Exact discriminant threshold `w^2/(4 hbar^2 eta)`.
pub fn exact_root_limit(record: &ExperimentRecord, hbar: f64) -> f64 {
    0.25 * paper_real_root_limit(record, hbar)
}

/// Series roots with `0.32` generalized to `2w`:
/// `r+ = 2w/(hbar beta) - hbar eta/(2w) - beta hbar^3 eta^2/(2w)^3`,
/// `r- = hbar eta/(2w) + beta hbar^3 eta^2/(2w)^3`.
pub fn slit_roots_paper(beta: f64, record: &ExperimentRecord, hbar: f64) -> Result<SlitRoots> {
    check_beta(beta)?;
    check_hbar(hbar)?;
    let two_w = 2.0 * record.slit_width();
    let eta = record.eta();
    let lead = hbar * eta / two_w;
    let corr = beta * hbar.powi(3) * eta * eta / two_w.powi(3);
    Ok(SlitRoots {
        r_plus: two_w / (hbar * beta) - lead - corr,
        r_minus: lead + corr,
        beyond_real_root_condition: beta > paper_real_root_limit(record, hbar),
    })
}

/// Roots of `2 hbar beta x^2 - w x + hbar eta / 2 = 0`, descending.
pub fn slit_roots_exact(beta: f64, record: &ExperimentRecord, hbar: f64) -> Result<SlitRoots> {
    check_beta(beta)?;
    check_hbar(hbar)?;
    let w = record.slit_width();
    let (r_plus, r_minus) = real_roots(2.0 * hbar * beta, -w, 0.5 * hbar * record.eta()).ok_or(Error::NoRealRoots {
        beta,
        beta_crit: exact_root_limit(record, hbar),
    })?;
    Ok(SlitRoots {
        r_plus,
        r_minus,
        beyond_real_root_condition: false,
    })
}

fn slit_roots(method: RootMethod, beta: f64, record: &ExperimentRecord, hbar: f64) -> Result<SlitRoots> {
    match method {
        RootMethod::PaperSeries => slit_roots_paper(beta, record, hbar),
        RootMethod::ExactQuadratic => slit_roots_exact(beta, record, hbar),
    }
}

/// What stopped the search for a larger `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundLimit {
    /// The entangled bound fails just above `beta_max`.
    BoundCrossing,
    /// The slit quadratic has no real roots above `beta_max`.
    RootExistence,
}

impl fmt::Display for BoundLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundLimit::BoundCrossing => "bound-crossing",
            BoundLimit::RootExistence => "root-existence",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEstimate {
    pub method: RootMethod,
    /// Largest admissible `beta`, in units of `length^2 / hbar^2`.
    pub beta_max: f64,
    /// `beta_max hbar^2 eta`, a squared length in `length_unit`.
    pub beta_scaled: f64,
    /// `hbar sqrt(beta_max)` in `length_unit`.
    pub l_min_upper: f64,
    /// `l_min_upper` in meters.
    pub l_min_upper_m: f64,
    pub length_unit: LengthUnit,
    /// Slit roots at `beta_max`.
    pub roots_used: (f64, f64),
    /// Non-slit spread `ratio * r_plus` at `beta_max`.
    pub dp_nonslit: f64,
    pub limited_by: BoundLimit,
    /// Series mode: `beta_max` lies beyond the published real-root condition.
    pub beyond_real_root_condition: bool,
}

const SCAN_POINTS: usize = 512;
const SCAN_DECADES: f64 = 12.0;
const MAX_BISECTIONS: usize = 200;

/// `w dP_ns - (hbar/4)[1 + beta dP_ns^2 + gamma]` with `dP_ns = ratio r+`.
fn entangled_margin(method: RootMethod, beta: f64, record: &ExperimentRecord, hbar: f64) -> Result<f64> {
    let roots = slit_roots(method, beta, record, hbar)?;
    let dp = record.ratio_ns_over_s() * roots.r_plus;
    Ok(record.slit_width() * dp - 0.25 * hbar * (1.0 + beta * dp * dp + record.gamma()))
}

/// Upper end of the `beta` search interval.
fn search_ceiling(method: RootMethod, record: &ExperimentRecord, hbar: f64) -> f64 {
    match method {
        RootMethod::ExactQuadratic => exact_root_limit(record, hbar),
        RootMethod::PaperSeries => {
            // r+ = A/beta - B - C beta is decreasing; its zero bounds the search
            let two_w = 2.0 * record.slit_width();
            let eta = record.eta();
            let a = two_w / hbar;
            let b = hbar * eta / two_w;
            let c = hbar.powi(3) * eta * eta / two_w.powi(3);
            2.0 * a / (b + (b * b + 4.0 * a * c).sqrt())
        }
    }
}

/// Largest `beta` for which the slit root, scaled by the spread ratio, still
/// satisfies the entangled KMM bound.
pub fn estimate_bound(record: &ExperimentRecord, method: RootMethod, hbar: f64) -> Result<BoundEstimate> {
    check_hbar(hbar)?;
    let ceiling = search_ceiling(method, record, hbar);
    let margin = |b: f64| entangled_margin(method, b, record, hbar);

    let (beta_max, limited_by) = if method == RootMethod::ExactQuadratic && margin(ceiling)? >= 0.0 {
        (ceiling, BoundLimit::RootExistence)
    } else {
        // walk down a log grid from just below the ceiling to the first admissible point
        let step = 10f64.powf(-SCAN_DECADES / SCAN_POINTS as f64);
        let mut hi = ceiling;
        let mut lo = ceiling * step;
        let mut found = false;
        for _ in 0..SCAN_POINTS {
            if margin(lo)? >= 0.0 {
                found = true;
                break;
            }
            hi = lo;
            lo *= step;
        }
        if !found {
            return Err(Error::DegenerateData(format!(
                "entangled bound fails for every beta in [{lo:e}, {ceiling:e}] ({method})"
            )));
        }
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if margin(mid)? >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, BoundLimit::BoundCrossing)
    };

    let roots = slit_roots(method, beta_max, record, hbar)?;
    let l_min_upper = hbar * beta_max.sqrt();
    Ok(BoundEstimate {
        method,
        beta_max,
        beta_scaled: beta_max * hbar * hbar * record.eta(),
        l_min_upper,
        l_min_upper_m: record.length_unit().convert(l_min_upper, LengthUnit::Meter),
        length_unit: record.length_unit(),
        roots_used: (roots.r_plus, roots.r_minus),
        dp_nonslit: record.ratio_ns_over_s() * roots.r_plus,
        limited_by,
        beyond_real_root_condition: roots.beyond_real_root_condition,
    })
}

/// Both root methods on one record, with their ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodComparison {
    pub series: BoundEstimate,
    pub exact: BoundEstimate,
    /// `series.beta_max / exact.beta_max`
    pub beta_ratio: f64,
    /// `series.l_min_upper / exact.l_min_upper`
    pub l_min_ratio: f64,
    /// Ratio of the series `r+` leading term `2w/(hbar beta)` to the exact
    /// small-`beta` expansion `w/(2 hbar beta)`: always 4.
    pub leading_term_ratio: f64,
    /// Ratio of the published real-root condition to the exact discriminant
    /// threshold: always 4.
    pub real_root_condition_ratio: f64,
}

pub fn compare_methods(record: &ExperimentRecord, hbar: f64) -> Result<MethodComparison> {
    let series = estimate_bound(record, RootMethod::PaperSeries, hbar)?;
    let exact = estimate_bound(record, RootMethod::ExactQuadratic, hbar)?;
    let w = record.slit_width();
    Ok(MethodComparison {
        beta_ratio: series.beta_max / exact.beta_max,
        l_min_ratio: series.l_min_upper / exact.l_min_upper,
        leading_term_ratio: (2.0 * w / hbar) / (w / (2.0 * hbar)),
        real_root_condition_ratio: paper_real_root_limit(record, hbar) / exact_root_limit(record, hbar),
        series,
        exact,
    })
}
