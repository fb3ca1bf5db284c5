//! Deformed-commutator models and their uncertainty-bound right-hand sides.
//!
//! Each model fixes a factor `f(p)` with `[x, p] = i hbar f(p)`:
//!
//! | kind   | f(p)                     | parameter |
//! |--------|--------------------------|-----------|
//! | HUP    | 1                        | ignored   |
//! | KMM    | 1 + beta p^2             | beta      |
//! | ADV    | 1 - 2 alpha p + 4 alpha^2 p^2 | alpha |
//! | Pedram | 1 / (1 - beta p^2)       | beta      |
//! | EXP    | exp(beta p^2)            | beta      |
//!
//! The pair bounds are for two identical particles with equal marginal
//! spreads: `dQ_i dP_i >= (hbar/4) * bracket`, where the bracket is the
//! expectation of `f` reduced to moments (through Jensen's inequality for the
//! Pedram and exponential forms). The single-particle bound is the same
//! bracket with `hbar/2`.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::units::check_hbar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GupKind {
    Hup,
    Kmm,
    Adv,
    Pedram,
    Exp,
}

impl GupKind {
    pub const ALL: [GupKind; 5] = [GupKind::Hup, GupKind::Kmm, GupKind::Adv, GupKind::Pedram, GupKind::Exp];

    /// The four kinds that induce a nonzero minimal position uncertainty.
    pub const DEFORMED: [GupKind; 4] = [GupKind::Kmm, GupKind::Adv, GupKind::Pedram, GupKind::Exp];

    pub fn name(self) -> &'static str {
        match self {
            GupKind::Hup => "hup",
            GupKind::Kmm => "kmm",
            GupKind::Adv => "adv",
            GupKind::Pedram => "pedram",
            GupKind::Exp => "exp",
        }
    }

    /// Symbol of the deformation parameter (`beta`, `alpha`, or `-` for HUP).
    pub fn param_symbol(self) -> &'static str {
        match self {
            GupKind::Hup => "-",
            GupKind::Adv => "alpha",
            _ => "beta",
        }
    }

    pub fn commutator_formula(self) -> &'static str {
        match self {
            GupKind::Hup => "1",
            GupKind::Kmm => "1 + beta*p^2",
            GupKind::Adv => "1 - 2*alpha*p + 4*alpha^2*p^2",
            GupKind::Pedram => "1/(1 - beta*p^2)",
            GupKind::Exp => "exp(beta*p^2)",
        }
    }

    pub fn pair_bound_formula(self) -> &'static str {
        match self {
            GupKind::Hup => "hbar/4",
            GupKind::Kmm => "(hbar/4)*(1 + beta*dP^2 + gamma)",
            GupKind::Adv => "(hbar/4)*(1 + 4*alpha^2*dP^2 + gamma')",
            GupKind::Pedram => "(hbar/4)/(1 - beta*dP^2 - gamma)",
            GupKind::Exp => "(hbar/4)*exp(beta*dP^2 + gamma)",
        }
    }

    pub fn entangled_min_formula(self) -> &'static str {
        match self {
            GupKind::Hup => "none",
            GupKind::Kmm => "(hbar/2)*sqrt(beta)",
            GupKind::Adv => "hbar*alpha",
            GupKind::Pedram => "(3*hbar/8)*sqrt(3*beta)",
            GupKind::Exp => "(hbar/2)*sqrt(e*beta/2)",
        }
    }
}

impl fmt::Display for GupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hup" | "heisenberg" => Ok(GupKind::Hup),
            "kmm" => Ok(GupKind::Kmm),
            "adv" => Ok(GupKind::Adv),
            "pedram" => Ok(GupKind::Pedram),
            "exp" | "exponential" => Ok(GupKind::Exp),
            other => Err(Error::Parse(format!("unknown GUP model `{other}`"))),
        }
    }
}

/// A deformation family together with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GupModel {
    kind: GupKind,
    param: f64,
}

impl GupModel {
    pub fn new(kind: GupKind, param: f64) -> Result<Self> {
        if !(param >= 0.0 && param.is_finite()) {
            return Err(invalid(
                "param",
                format!("{} must be finite and >= 0, got {param}", kind.param_symbol()),
            ));
        }
        let param = if kind == GupKind::Hup { 0.0 } else { param };
        Ok(GupModel { kind, param })
    }

    pub fn hup() -> Self {
        GupModel {
            kind: GupKind::Hup,
            param: 0.0,
        }
    }

    pub fn kmm(beta: f64) -> Result<Self> {
        Self::new(GupKind::Kmm, beta)
    }

    pub fn adv(alpha: f64) -> Result<Self> {
        Self::new(GupKind::Adv, alpha)
    }

    pub fn pedram(beta: f64) -> Result<Self> {
        Self::new(GupKind::Pedram, beta)
    }

    pub fn exp(beta: f64) -> Result<Self> {
        Self::new(GupKind::Exp, beta)
    }

    pub fn kind(&self) -> GupKind {
        self.kind
    }

    pub fn param(&self) -> f64 {
        self.param
    }

    /// Same kind, different parameter.
    pub fn with_param(&self, param: f64) -> Result<Self> {
        Self::new(self.kind, param)
    }

    /// Largest |p| inside the Pedram domain, `1/sqrt(beta)`; infinite otherwise.
    pub fn max_momentum(&self) -> f64 {
        match self.kind {
            GupKind::Pedram if self.param > 0.0 => 1.0 / self.param.sqrt(),
            _ => f64::INFINITY,
        }
    }

    /// `f(p)` such that `[x, p] = i hbar f(p)`.
    pub fn commutator_factor(&self, p: f64) -> Result<f64> {
        let b = self.param;
        Ok(match self.kind {
            GupKind::Hup => 1.0,
            GupKind::Kmm => 1.0 + b * p * p,
            GupKind::Adv => 1.0 - 2.0 * b * p + 4.0 * b * b * p * p,
            GupKind::Pedram => {
                let x = b * p * p;
                if x >= 1.0 {
                    return Err(Error::PedramPole {
                        detail: format!(
                            "beta*p^2 = {x} >= 1 at p = {p}; |p| must stay below 1/sqrt(beta) = {}",
                            self.max_momentum()
                        ),
                    });
                }
                1.0 / (1.0 - x)
            }
            GupKind::Exp => (b * p * p).exp(),
        })
    }

    /// The commutator factor reduced to the first two momentum moments:
    /// KMM/ADV exactly, Pedram/EXP as the Jensen lower bound `f(<p^2>)`.
    pub fn factor_at_moments(&self, mean_p: f64, mean_p_sq: f64) -> Result<f64> {
        let b = self.param;
        Ok(match self.kind {
            GupKind::Hup => 1.0,
            GupKind::Kmm => 1.0 + b * mean_p_sq,
            GupKind::Adv => 1.0 - 2.0 * b * mean_p + 4.0 * b * b * mean_p_sq,
            GupKind::Pedram => {
                let x = b * mean_p_sq;
                if x >= 1.0 {
                    return Err(Error::PedramPole {
                        detail: format!("beta*<p^2> = {x} >= 1"),
                    });
                }
                1.0 / (1.0 - x)
            }
            GupKind::Exp => (b * mean_p_sq).exp(),
        })
    }

    /// `sum_k w_k f(p_k)` for a discrete momentum distribution (weights
    /// normalized internally).
    pub fn expected_factor(&self, dist: &[(f64, f64)]) -> Result<f64> {
        let total = weight_total(dist)?;
        let mut acc = 0.0;
        for &(p, w) in dist {
            acc += w * self.commutator_factor(p)?;
        }
        Ok(acc / total)
    }
}

fn weight_total(dist: &[(f64, f64)]) -> Result<f64> {
    if dist.is_empty() {
        return Err(invalid("distribution", "empty"));
    }
    let mut total = 0.0;
    for &(p, w) in dist {
        if !(w >= 0.0 && w.is_finite() && p.is_finite()) {
            return Err(invalid("distribution", format!("bad point ({p}, {w})")));
        }
        total += w;
    }
    if total <= 0.0 {
        return Err(invalid("distribution", "weights sum to zero"));
    }
    Ok(total)
}

/// First two moments `(<p>, <p^2>)` of a discrete distribution.
pub fn distribution_moments(dist: &[(f64, f64)]) -> Result<(f64, f64)> {
    let total = weight_total(dist)?;
    let (m1, m2) = dist
        .iter()
        .fold((0.0, 0.0), |(a, b), &(p, w)| (a + w * p, b + w * p * p));
    Ok((m1 / total, m2 / total))
}

/// Momentum statistics of one particle: spread, mean, and second moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumStats {
    dp: f64,
    mean_p: f64,
    mean_p_sq: f64,
}

impl MomentumStats {
    pub fn new(dp: f64, mean_p: f64) -> Result<Self> {
        if !(dp > 0.0 && dp.is_finite()) {
            return Err(invalid("dp", format!("must be positive, got {dp}")));
        }
        if !mean_p.is_finite() {
            return Err(invalid("mean_p", "must be finite"));
        }
        Ok(MomentumStats {
            dp,
            mean_p,
            mean_p_sq: dp * dp + mean_p * mean_p,
        })
    }

    /// From `<p>` and `<p^2>`; requires `<p^2> > <p>^2`.
    pub fn from_moments(mean_p: f64, mean_p_sq: f64) -> Result<Self> {
        let var = mean_p_sq - mean_p * mean_p;
        if !(var > 0.0) {
            return Err(invalid(
                "mean_p_sq",
                format!("<p^2> = {mean_p_sq} must exceed <p>^2 = {}", mean_p * mean_p),
            ));
        }
        Ok(MomentumStats {
            dp: var.sqrt(),
            mean_p,
            mean_p_sq,
        })
    }

    pub fn dp(&self) -> f64 {
        self.dp
    }

    pub fn mean_p(&self) -> f64 {
        self.mean_p
    }

    pub fn mean_p_sq(&self) -> f64 {
        self.mean_p_sq
    }
}

/// `gamma = beta <P>^2` (KMM, Pedram, EXP) or `gamma' = 4 alpha^2 <P>^2` (ADV).
pub fn gamma(model: &GupModel, stats: &MomentumStats) -> f64 {
    let m2 = stats.mean_p * stats.mean_p;
    match model.kind {
        GupKind::Hup => 0.0,
        GupKind::Adv => 4.0 * model.param * model.param * m2,
        _ => model.param * m2,
    }
}

/// Everything one bound evaluation needs; `gamma` is always derived from the
/// model and stats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundContext {
    model: GupModel,
    stats: MomentumStats,
    gamma: f64,
    hbar: f64,
    opposite_momenta: bool,
}

impl BoundContext {
    /// General configuration: the ADV linear term `-2 alpha <P>` is kept.
    pub fn new(model: GupModel, stats: MomentumStats, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        Ok(BoundContext {
            model,
            stats,
            gamma: gamma(&model, &stats),
            hbar,
            opposite_momenta: false,
        })
    }

    /// Pair with `<P_1> + <P_2> = 0`; the ADV linear term cancels.
    pub fn opposite_momenta(model: GupModel, stats: MomentumStats, hbar: f64) -> Result<Self> {
        let mut ctx = Self::new(model, stats, hbar)?;
        ctx.opposite_momenta = true;
        Ok(ctx)
    }

    pub fn with_opposite_momenta(mut self, on: bool) -> Self {
        self.opposite_momenta = on;
        self
    }

    pub fn model(&self) -> &GupModel {
        &self.model
    }

    pub fn stats(&self) -> &MomentumStats {
        &self.stats
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn is_opposite_momenta(&self) -> bool {
        self.opposite_momenta
    }

    /// Bracket of the bound at spread `dp`, with `gamma` held fixed.
    pub fn bracket_at(&self, dp: f64) -> Result<f64> {
        let linear = if self.opposite_momenta { 0.0 } else { self.stats.mean_p };
        bound_bracket(&self.model, dp, self.gamma, linear)
    }

    /// Entangled-pair bound `(hbar/4) * bracket(dp)`.
    pub fn pair_rhs_at(&self, dp: f64) -> Result<f64> {
        Ok(self.hbar / 4.0 * self.bracket_at(dp)?)
    }
}

/// Moment-reduced commutator expectation for one particle with spread `dp`,
/// offset `gamma` and, for ADV only, linear mean `linear_mean`.
pub(crate) fn bound_bracket(model: &GupModel, dp: f64, gamma: f64, linear_mean: f64) -> Result<f64> {
    let b = model.param;
    let dp2 = dp * dp;
    Ok(match model.kind {
        GupKind::Hup => 1.0,
        GupKind::Kmm => 1.0 + b * dp2 + gamma,
        GupKind::Adv => 1.0 - 2.0 * b * linear_mean + 4.0 * b * b * dp2 + gamma,
        GupKind::Pedram => {
            let x = b * dp2 + gamma;
            if x >= 1.0 {
                return Err(Error::PedramPole {
                    detail: format!(
                        "beta*dP^2 + gamma = {x} >= 1 at dP = {dp}; admissible dP in (0, {})",
                        pedram_dp_limit(b, gamma)
                    ),
                });
            }
            1.0 / (1.0 - x)
        }
        GupKind::Exp => (b * dp2 + gamma).exp(),
    })
}

/// Upper end of the admissible spread range for Pedram, `sqrt((1-gamma)/beta)`.
pub fn pedram_dp_limit(beta: f64, gamma: f64) -> f64 {
    if beta <= 0.0 {
        return f64::INFINITY;
    }
    ((1.0 - gamma).max(0.0) / beta).sqrt()
}

/// Right-hand side of `dQ_i dP_i >= RHS` for the entangled symmetric pair.
pub fn entangled_pair_rhs(ctx: &BoundContext) -> Result<f64> {
    ctx.pair_rhs_at(ctx.stats.dp)
}

/// Non-entangled bound `(hbar/2) * bracket`, keeping the ADV linear term.
pub fn single_particle_rhs(model: &GupModel, stats: &MomentumStats, hbar: f64) -> Result<f64> {
    let ctx = BoundContext::new(*model, *stats, hbar)?;
    Ok(hbar / 2.0 * ctx.bracket_at(stats.dp)?)
}

/// Samples `(dP, RHS(dP)/dP)`, the smallest position spread the pair bound
/// allows, at `n` evenly spaced spreads in `[dp_min, dp_max]`.
pub fn bound_curve(ctx: &BoundContext, dp_min: f64, dp_max: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    if !(dp_min > 0.0 && dp_max > dp_min && dp_max.is_finite()) {
        return Err(invalid(
            "dp range",
            format!("need 0 < dp_min < dp_max, got [{dp_min}, {dp_max}]"),
        ));
    }
    if n < 2 {
        return Err(invalid("n", format!("need at least 2 points, got {n}")));
    }
    if ctx.model.kind == GupKind::Pedram {
        let limit = pedram_dp_limit(ctx.model.param, ctx.gamma);
        if dp_max >= limit {
            return Err(Error::PedramPole {
                detail: format!("range [{dp_min}, {dp_max}] crosses the pole; admissible dP in (0, {limit})"),
            });
        }
    }
    let step = (dp_max - dp_min) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let dp = if i == n - 1 { dp_max } else { dp_min + step * i as f64 };
            Ok((dp, ctx.pair_rhs_at(dp)? / dp))
        })
        .collect()
}
