//! Minimal position uncertainties under each deformed commutator.
//!
//! The quantity minimized is `g(dP) = RHS(dP) / dP`, the smallest `dQ`
//! compatible with the bound at spread `dP`. Closed forms exist for
//! `gamma = 0`; the golden-section route covers any `gamma` and serves as
//! an independent check of the closed forms.

use std::f64::consts::E;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::models::{bound_bracket, pedram_dp_limit, GupKind, GupModel};
use crate::search::minimize_positive;
use crate::units::check_hbar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Numeric,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Analytic => "analytic",
            Method::Numeric => "numeric",
        })
    }
}

/// One minimal-uncertainty question.
///
/// `model.param()` is the single-particle parameter. With `n_particles = 2`
/// the pair bound is evaluated with the parameter whose composite rescaling
/// gives it back (see [`pair_bound_model`]); with `n_particles = 1` it is
/// used unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalLengthQuery {
    pub model: GupModel,
    pub entangled: bool,
    pub gamma: f64,
    pub n_particles: u32,
    pub hbar: f64,
}

impl MinimalLengthQuery {
    pub fn entangled(model: GupModel, hbar: f64) -> Self {
        MinimalLengthQuery {
            model,
            entangled: true,
            gamma: 0.0,
            n_particles: 1,
            hbar,
        }
    }

    pub fn separable(model: GupModel, hbar: f64) -> Self {
        MinimalLengthQuery {
            entangled: false,
            ..Self::entangled(model, hbar)
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_particles(mut self, n: u32) -> Self {
        self.n_particles = n;
        self
    }

    fn validate(&self) -> Result<()> {
        check_hbar(self.hbar)?;
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(invalid("gamma", format!("must be finite and >= 0, got {}", self.gamma)));
        }
        match self.n_particles {
            0 => Err(invalid("n_particles", "must be >= 1")),
            1 => Ok(()),
            2 if self.entangled => Ok(()),
            2 => Err(Error::UnsupportedParticleCount {
                n: 2,
                reason: "the N = 2 rescaling applies to the entangled pair bound only",
            }),
            n => Err(Error::UnsupportedParticleCount {
                n,
                reason: "bounds are only derived for entangled pairs (N = 2)",
            }),
        }
    }

    /// Model with the parameter that actually enters the bound.
    pub fn bound_model(&self) -> Result<GupModel> {
        self.validate()?;
        pair_bound_model(&self.model, self.n_particles)
    }

    fn prefactor(&self) -> f64 {
        if self.entangled {
            self.hbar / 4.0
        } else {
            self.hbar / 2.0
        }
    }

    /// `g(dp) = RHS(dp) / dp` for this query.
    pub fn objective(&self, dp: f64) -> Result<f64> {
        let model = self.bound_model()?;
        Ok(self.prefactor() * bound_bracket(&model, dp, self.gamma, 0.0)? / dp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimumResult {
    pub dq_min: f64,
    pub dp_star: f64,
    pub method: Method,
}

/// Closed-form minimum for `gamma = 0`.
pub fn analytic_min(query: &MinimalLengthQuery) -> Result<MinimumResult> {
    let model = query.bound_model()?;
    if model.kind() == GupKind::Hup {
        return Err(Error::NoMinimum);
    }
    if query.gamma != 0.0 {
        return Err(Error::UnsupportedAnalytic { gamma: query.gamma });
    }
    let hbar = query.hbar;
    let p = model.param();
    if p == 0.0 {
        return Err(invalid(
            "param",
            format!(
                "{} = 0 reduces to HUP, which has no minimum",
                model.kind().param_symbol()
            ),
        ));
    }
    let (dq, dp_star) = match model.kind() {
        GupKind::Kmm => (hbar / 2.0 * p.sqrt(), 1.0 / p.sqrt()),
        GupKind::Adv => (hbar * p, 1.0 / (2.0 * p)),
        GupKind::Pedram => (3.0 * hbar / 8.0 * (3.0 * p).sqrt(), 1.0 / (3.0 * p).sqrt()),
        GupKind::Exp => (hbar / 2.0 * (E * p / 2.0).sqrt(), 1.0 / (2.0 * p).sqrt()),
        GupKind::Hup => unreachable!(),
    };
    let dq_min = if query.entangled { dq } else { 2.0 * dq };
    Ok(MinimumResult {
        dq_min,
        dp_star,
        method: Method::Analytic,
    })
}

/// Golden-section minimum of `g` to relative tolerance `tol` on `dp`.
pub fn numeric_min(query: &MinimalLengthQuery, tol: f64) -> Result<MinimumResult> {
    let model = query.bound_model()?;
    if model.kind() == GupKind::Hup {
        return Err(Error::NoMinimum);
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("must be positive, got {tol}")));
    }
    let upper = if model.kind() == GupKind::Pedram {
        if query.gamma >= 1.0 {
            return Err(Error::PedramPole {
                detail: format!("gamma = {} >= 1 leaves no admissible dP", query.gamma),
            });
        }
        pedram_dp_limit(model.param(), query.gamma)
    } else {
        f64::INFINITY
    };
    let x0 = if upper > 2.0 { 1.0 } else { 0.5 * upper };
    // within an ulp of the pole the bracket can round to 1; g is +inf there
    let g = |dp: f64| match query.objective(dp) {
        Err(Error::PedramPole { .. }) => Ok(f64::INFINITY),
        other => other,
    };
    let m = minimize_positive(g, x0, upper, tol).map_err(|e| match e {
        Error::Bracket(msg) => Error::Bracket(format!("{} bound: {msg}", model.kind())),
        other => other,
    })?;
    Ok(MinimumResult {
        dq_min: m.value,
        dp_star: m.x,
        method: Method::Numeric,
    })
}

/// Composite parameter `param / N^2`.
pub fn effective_parameter(param: f64, n_particles: u32) -> Result<f64> {
    if n_particles == 0 {
        return Err(invalid("n_particles", "must be >= 1"));
    }
    if !(param >= 0.0 && param.is_finite()) {
        return Err(invalid("param", format!("must be finite and >= 0, got {param}")));
    }
    let n = n_particles as f64;
    Ok(param / (n * n))
}

/// Applies the composite rescaling to a model: `beta / N^2` for the
/// beta-type families, `alpha / N` for ADV (the same rule on `alpha^2`).
pub fn effective_model(model: &GupModel, n_particles: u32) -> Result<GupModel> {
    let p = model.param();
    let scaled = match model.kind() {
        GupKind::Adv => effective_parameter(p * p, n_particles)?.sqrt(),
        _ => effective_parameter(p, n_particles)?,
    };
    model.with_param(scaled)
}

/// Inverse of [`effective_model`]: the pair-bound parameter whose composite
/// value is `model.param()`.
pub fn pair_bound_model(model: &GupModel, n_particles: u32) -> Result<GupModel> {
    if n_particles == 0 {
        return Err(invalid("n_particles", "must be >= 1"));
    }
    let n = n_particles as f64;
    let p = model.param();
    let scaled = match model.kind() {
        GupKind::Adv => p * n,
        _ => p * n * n,
    };
    model.with_param(scaled)
}

/// Minimal length implied by the single-particle parameter.
///
/// `N = 1` is the separable single-particle minimum; `N = 2` is the
/// entangled-pair minimum with the rescaled pair parameter, which lands on the
/// same value.
pub fn minimal_length(kind: GupKind, single_particle_param: f64, n_particles: u32, hbar: f64) -> Result<f64> {
    if kind == GupKind::Hup {
        return Err(Error::NoMinimum);
    }
    if !(single_particle_param > 0.0) {
        return Err(invalid(
            "single_particle_param",
            format!("must be positive, got {single_particle_param}"),
        ));
    }
    let model = GupModel::new(kind, single_particle_param)?;
    let query = match n_particles {
        1 => MinimalLengthQuery::separable(model, hbar),
        _ => MinimalLengthQuery::entangled(model, hbar).with_particles(n_particles),
    };
    Ok(analytic_min(&query)?.dq_min)
}
