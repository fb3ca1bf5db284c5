use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use clap::Args;
use gupent_core::kimshih::{exact_root_limit, paper_real_root_limit};
use gupent_core::minimal::{pair_bound_model, MinimumResult};
use gupent_core::sim::{make_correlated_gaussian, make_product_state, read_fixture, write_fixture, Wavepacket};
use gupent_core::{
    analytic_min, bound_curve, check_inequalities, compare_methods, entangled_pair_rhs, estimate_bound,
    load_experiment, numeric_min, single_particle_rhs, BoundContext, ExperimentRecord, GridSpec, GupKind, GupModel,
    MinimalLengthQuery, MomentumStats, PairState, RootMethod,
};

use crate::report::{Fields, Report, Value};
use crate::ModelArgs;

type CmdResult = Result<Report, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

impl ModelArgs {
    fn build(&self) -> Result<GupModel, String> {
        let kind: GupKind = self.model.parse().map_err(err)?;
        if self.alpha.is_some() && kind != GupKind::Adv {
            return Err(format!("--alpha applies to adv only; use --beta or --param for {kind}"));
        }
        if self.beta.is_some() && kind == GupKind::Adv {
            return Err("adv takes --alpha (or --param), not --beta".into());
        }
        match (kind, self.param.or(self.beta).or(self.alpha)) {
            (GupKind::Hup, _) => Ok(GupModel::hup()),
            (_, Some(p)) => GupModel::new(kind, p).map_err(err),
            (_, None) => Err(format!("{kind} needs --{} (or --param)", kind.param_symbol())),
        }
    }
}

fn model_fields(model: &GupModel) -> Fields {
    Fields::new()
        .add("model", model.kind().name())
        .add("param_name", model.kind().param_symbol())
        .add("param", model.param())
}

pub fn models() -> Report {
    let rows = GupKind::ALL
        .iter()
        .map(|k| {
            vec![
                Value::from(k.name()),
                k.param_symbol().into(),
                k.commutator_formula().into(),
                k.pair_bound_formula().into(),
                k.entangled_min_formula().into(),
            ]
        })
        .collect();
    Report::default().table(
        "models",
        &["model", "param", "commutator_factor", "pair_bound", "entangled_min"],
        rows,
    )
}

fn context(model: GupModel, dp: f64, mean_p: f64, hbar: f64, keep_linear: bool) -> Result<BoundContext, String> {
    let stats = MomentumStats::new(dp, mean_p).map_err(err)?;
    let ctx = BoundContext::new(model, stats, hbar).map_err(err)?;
    Ok(ctx.with_opposite_momenta(!keep_linear))
}

pub fn bound(args: &ModelArgs, dp: f64, mean_p: f64, hbar: f64, keep_linear: bool) -> CmdResult {
    let model = args.build()?;
    let ctx = context(model, dp, mean_p, hbar, keep_linear)?;
    let fields = model_fields(&model)
        .add("dp", dp)
        .add("mean_p", mean_p)
        .add("hbar", hbar)
        .add("opposite_momenta", ctx.is_opposite_momenta())
        .add("gamma", ctx.gamma())
        .add("bracket", ctx.bracket_at(dp).map_err(err)?)
        .add("pair_rhs", entangled_pair_rhs(&ctx).map_err(err)?)
        .add(
            "single_particle_rhs",
            single_particle_rhs(&model, ctx.stats(), hbar).map_err(err)?,
        );
    Ok(Report::default().fields("bound", fields))
}

pub fn minimize(
    args: &ModelArgs,
    entangled: bool,
    gamma: f64,
    n_particles: u32,
    method: Option<&str>,
    tol: f64,
    hbar: f64,
) -> CmdResult {
    let model = args.build()?;
    let query = if entangled {
        MinimalLengthQuery::entangled(model, hbar)
    } else {
        MinimalLengthQuery::separable(model, hbar)
    }
    .with_gamma(gamma)
    .with_particles(n_particles);

    let method = method.unwrap_or(if gamma == 0.0 { "analytic" } else { "numeric" });
    let (primary, check): (MinimumResult, Option<MinimumResult>) = match method {
        "analytic" => (analytic_min(&query).map_err(err)?, None),
        "numeric" => (numeric_min(&query, tol).map_err(err)?, None),
        "both" => (
            analytic_min(&query).map_err(err)?,
            Some(numeric_min(&query, tol).map_err(err)?),
        ),
        other => return Err(format!("unknown method `{other}` (expected analytic, numeric or both)")),
    };

    let mut fields = model_fields(&model)
        .add("state", if entangled { "entangled" } else { "separable" })
        .add("n_particles", n_particles)
        .add(
            "bound_param",
            pair_bound_model(&model, n_particles).map_err(err)?.param(),
        )
        .add("gamma", gamma)
        .add("hbar", hbar)
        .add("method", primary.method.to_string())
        .add("dq_min", primary.dq_min)
        .add("dp_star", primary.dp_star);
    if let Some(n) = check {
        fields.push("numeric_dq_min", n.dq_min);
        fields.push("numeric_dp_star", n.dp_star);
    }
    Ok(Report::default().fields("minimize", fields))
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// product or correlated
    #[arg(long, default_value = "product")]
    state: String,
    /// Position spread of both particles (product state)
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    sigma1: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    center1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    center2: f64,
    /// Carrier wavenumber of particle 1 (momentum hbar*k1)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k2: f64,
    /// Center-of-mass width (correlated state)
    #[arg(long, default_value_t = 2.0)]
    sigma_plus: f64,
    /// Relative-coordinate width (correlated state)
    #[arg(long, default_value_t = 1.0)]
    sigma_minus: f64,
    /// Total wavenumber (correlated state)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k_total: f64,
    /// Points per axis, a power of two >= 64 [default: sized from the state]
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, requires = "x_max", allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long, requires = "x_min", allow_negative_numbers = true)]
    x_max: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Read the state from a fixture file instead of building it
    #[arg(long, conflicts_with = "save")]
    load: Option<PathBuf>,
    /// Write the simulated state to a fixture file
    #[arg(long)]
    save: Option<PathBuf>,
}

/// Position half-width leaving `|psi| < 1e-12` well inside the boundary.
const WIDTHS_PER_SIGMA: f64 = 12.0;
const MAX_AUTO_N: usize = 2048;

/// Grid size from the requested bounds or from the state's widths and
/// momenta: the box holds the packet and the Nyquist wavenumber clears the
/// momentum tail by the same margin.
fn auto_grid(args: &SimulateArgs, half: f64, k_max: f64, sigma_min: f64) -> Result<GridSpec, String> {
    let (x_min, x_max) = match (args.x_min, args.x_max) {
        (Some(a), Some(b)) => (a, b),
        _ => (-half, half),
    };
    let n = match args.n {
        Some(n) => n,
        None => {
            let k_needed = k_max + WIDTHS_PER_SIGMA / (2.0 * sigma_min);
            let need = ((x_max - x_min) * k_needed / std::f64::consts::PI).ceil() as usize;
            let n = need.max(64).next_power_of_two();
            if n > MAX_AUTO_N {
                return Err(format!("state needs n = {n} points per axis; pass --n explicitly"));
            }
            n
        }
    };
    GridSpec::new(x_min, x_max, n).map_err(err)
}

fn positive(name: &str, v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{name} must be positive, got {v}"))
    }
}

fn build_state(args: &SimulateArgs) -> Result<(String, PairState), String> {
    if let Some(path) = &args.load {
        let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let state = read_fixture(BufReader::new(file)).map_err(err)?;
        return Ok((format!("fixture {}", path.display()), state));
    }
    match args.state.as_str() {
        "product" => {
            let s1 = positive("sigma1", args.sigma1.unwrap_or(args.sigma))?;
            let s2 = positive("sigma2", args.sigma2.unwrap_or(args.sigma))?;
            let p1 = Wavepacket::new(args.center1, s1, args.k1);
            let p2 = Wavepacket::new(args.center2, s2, args.k2);
            let half = [p1, p2]
                .iter()
                .map(|p| p.center.abs() + WIDTHS_PER_SIGMA * p.sigma)
                .fold(0.0, f64::max);
            let grid = auto_grid(args, half, p1.k.abs().max(p2.k.abs()), p1.sigma.min(p2.sigma))?;
            Ok((
                "product".into(),
                make_product_state(grid, args.hbar, p1, p2).map_err(err)?,
            ))
        }
        "correlated" => {
            let sp = positive("sigma-plus", args.sigma_plus)?;
            let sm = positive("sigma-minus", args.sigma_minus)?;
            // the marginal amplitude falls off like exp(-x^2 / (2 (s+^2 + s-^2)))
            let half = 0.75 * WIDTHS_PER_SIGMA * (sp * sp + sm * sm).sqrt();
            let grid = auto_grid(args, half, args.k_total.abs(), sp.min(sm))?;
            let state = make_correlated_gaussian(grid, args.hbar, sp, sm, args.k_total).map_err(err)?;
            Ok(("correlated".into(), state))
        }
        other => Err(format!("unknown state `{other}` (expected product or correlated)")),
    }
}

pub fn simulate(args: &SimulateArgs) -> CmdResult {
    let (kind, state) = build_state(args)?;
    if let Some(path) = &args.save {
        let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        write_fixture(&state, BufWriter::new(file)).map_err(err)?;
    }
    let g = state.grid();
    let r = check_inequalities(&state);
    let (m1, m2) = r.marginal_products();

    let grid = Fields::new()
        .add("state", kind)
        .add("n", g.n())
        .add("x_min", g.x_min())
        .add("x_max", g.x_max())
        .add("dx", g.dx())
        .add("hbar", state.hbar())
        .add("norm", state.norm_sq())
        .add("boundary_max", state.boundary_max());
    let moments = Fields::new()
        .add("mean_q1", r.mean_q1)
        .add("mean_q2", r.mean_q2)
        .add("dq1", r.dq1)
        .add("dq2", r.dq2)
        .add("mean_p1", r.mean_p1)
        .add("mean_p2", r.mean_p2)
        .add("dp1", r.dp1)
        .add("dp2", r.dp2)
        .add("cq", r.cq)
        .add("cp", r.cp);
    let checks = Fields::new()
        .add("lhs_pair", r.lhs_pair)
        .add("rhs_pair", r.rhs_pair)
        .add("lhs_symmetric", r.lhs_symmetric)
        .add("rhs_symmetric", r.rhs_symmetric)
        .add("marginal_1", m1)
        .add("marginal_2", m2)
        .add("schwarz_q_ok", r.schwarz_q_ok)
        .add("schwarz_p_ok", r.schwarz_p_ok)
        .add("pair_ok", r.pair_ok)
        .add("symmetric_ok", r.symmetric_ok)
        .add("all_ok", r.all_ok());
    Ok(Report::default()
        .fields("grid", grid)
        .fields("moments", moments)
        .fields("inequalities", checks))
}

fn record(data: Option<&Path>) -> Result<ExperimentRecord, String> {
    match data {
        Some(path) => load_experiment(path).map_err(err),
        None => Ok(ExperimentRecord::kim_shih()),
    }
}

pub fn estimate(data: Option<&Path>, method: &str, hbar: f64) -> CmdResult {
    let rec = record(data)?;
    let method: RootMethod = method.parse().map_err(err)?;
    let est = estimate_bound(&rec, method, hbar).map_err(err)?;
    let cmp = compare_methods(&rec, hbar).map_err(err)?;
    let unit = rec.length_unit().symbol();

    let input = Fields::new()
        .add("source", rec.source())
        .add("slit_width", rec.slit_width())
        .add("length_unit", unit)
        .add("ratio_ns_over_s", rec.ratio_ns_over_s())
        .add("eta", rec.eta())
        .add("hbar", hbar);
    let result = Fields::new()
        .add("method", est.method.name())
        .add("beta_max", est.beta_max)
        .add("beta_max_hbar2_eta", est.beta_scaled)
        .add("beta_unit", format!("{unit}^2/hbar^2"))
        .add("l_min_upper", est.l_min_upper)
        .add("l_min_upper_unit", unit)
        .add("l_min_upper_m", est.l_min_upper_m)
        .add("limited_by", est.limited_by.to_string())
        .add("r_plus", est.roots_used.0)
        .add("r_minus", est.roots_used.1)
        .add("dp_nonslit", est.dp_nonslit)
        .add("beyond_real_root_condition", est.beyond_real_root_condition);
    let comparison = Fields::new()
        .add("series_beta_max", cmp.series.beta_max)
        .add("exact_beta_max", cmp.exact.beta_max)
        .add("beta_ratio", cmp.beta_ratio)
        .add("series_l_min_upper_m", cmp.series.l_min_upper_m)
        .add("exact_l_min_upper_m", cmp.exact.l_min_upper_m)
        .add("l_min_ratio", cmp.l_min_ratio)
        .add("series_real_root_limit", paper_real_root_limit(&rec, hbar))
        .add("exact_real_root_limit", exact_root_limit(&rec, hbar))
        .add("real_root_condition_ratio", cmp.real_root_condition_ratio)
        .add("leading_term_ratio", cmp.leading_term_ratio)
        .add("exact_limited_by", cmp.exact.limited_by.to_string())
        .add(
            "note",
            "series r+ leading term 2w/(hbar beta) and real-root condition beta <= w^2/(hbar^2 eta) \
             are both 4x the exact quadratic's w/(2 hbar beta) and w^2/(4 hbar^2 eta)",
        );
    Ok(Report::default()
        .fields("record", input)
        .fields("estimate", result)
        .fields("comparison", comparison))
}

pub fn curve(
    args: &ModelArgs,
    dp_min: f64,
    dp_max: f64,
    n: usize,
    mean_p: f64,
    hbar: f64,
    keep_linear: bool,
) -> CmdResult {
    let model = args.build()?;
    // the spread in the context is only a placeholder; gamma depends on <P> alone
    let ctx = context(model, 1.0, mean_p, hbar, keep_linear)?;
    let rows = bound_curve(&ctx, dp_min, dp_max, n)
        .map_err(err)?
        .into_iter()
        .map(|(dp, dq)| vec![Value::from(dp), dq.into()])
        .collect();
    Ok(Report::default().table("curve", &["dp", "dq_lower_bound"], rows))
}
