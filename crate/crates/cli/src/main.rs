mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Format;

/// Generalized-uncertainty bounds for entangled particle pairs.
#[derive(Debug, Parser)]
#[command(name = "gupent", version, about)]
struct Cli {
    /// Output format: table, csv or json [default: table; csv for `curve`]
    #[arg(long, global = true, env = "GUPENT_FORMAT", value_parser = parse_format)]
    format: Option<Format>,

    /// Write the report to this file instead of stdout
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

/// Model selection shared by the model-dependent commands.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// hup, kmm, adv, pedram or exp
    #[arg(long)]
    pub model: String,

    /// Deformation parameter (beta for kmm/pedram/exp, alpha for adv)
    #[arg(long, conflicts_with_all = ["beta", "alpha"])]
    pub param: Option<f64>,

    /// Same as --param, for kmm, pedram and exp
    #[arg(long, conflicts_with = "alpha")]
    pub beta: Option<f64>,

    /// Same as --param, for adv
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the commutator models and their bound formulas
    Models,

    /// Evaluate the pair and single-particle bounds at one momentum spread
    Bound {
        #[command(flatten)]
        model: ModelArgs,
        /// Momentum spread dP of each particle
        #[arg(long)]
        dp: f64,
        /// Mean momentum <P> of a particle
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mean_p: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// Keep the ADV linear term in the pair bound (no opposite momenta)
        #[arg(long)]
        keep_linear: bool,
    },

    /// Minimal position uncertainty for one model
    Minimize {
        #[command(flatten)]
        model: ModelArgs,
        /// Entangled pair (default)
        #[arg(long, conflicts_with = "separable")]
        entangled: bool,
        /// Separable particles
        #[arg(long)]
        separable: bool,
        /// Mean-momentum offset in the bound bracket
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// 1 uses the parameter as given, 2 applies the composite rescaling
        #[arg(long, default_value_t = 1)]
        n_particles: u32,
        /// analytic, numeric or both [default: analytic when gamma = 0]
        #[arg(long)]
        method: Option<String>,
        /// Golden-section tolerance on ln dP
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },

    /// Simulate a two-particle state on a grid and check the inequality chain
    Simulate(commands::SimulateArgs),

    /// Upper bound on the minimal length from ghost-slit data
    Estimate {
        /// Experiment record file (built-in published record if omitted)
        #[arg(long)]
        data: Option<PathBuf>,
        /// paper-series or exact-quadratic
        #[arg(long, default_value = "paper-series")]
        method: String,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },

    /// Sample the smallest position spread the pair bound allows
    Curve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        dp_min: f64,
        #[arg(long)]
        dp_max: f64,
        /// Number of samples
        #[arg(long, short = 'n', default_value_t = 101)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mean_p: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long)]
        keep_linear: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Models => "models",
            Command::Bound { .. } => "bound",
            Command::Minimize { .. } => "minimize",
            Command::Simulate(_) => "simulate",
            Command::Estimate { .. } => "estimate",
            Command::Curve { .. } => "curve",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Curve { .. } => Format::Csv,
            _ => Format::Table,
        }
    }
}

fn run(command: &Command) -> Result<report::Report, String> {
    match command {
        Command::Models => Ok(commands::models()),
        Command::Bound {
            model,
            dp,
            mean_p,
            hbar,
            keep_linear,
        } => commands::bound(model, *dp, *mean_p, *hbar, *keep_linear),
        Command::Minimize {
            model,
            separable,
            gamma,
            n_particles,
            method,
            tol,
            hbar,
            ..
        } => commands::minimize(model, !separable, *gamma, *n_particles, method.as_deref(), *tol, *hbar),
        Command::Simulate(args) => commands::simulate(args),
        Command::Estimate { data, method, hbar } => commands::estimate(data.as_deref(), method, *hbar),
        Command::Curve {
            model,
            dp_min,
            dp_max,
            n,
            mean_p,
            hbar,
            keep_linear,
        } => commands::curve(model, *dp_min, *dp_max, *n, *mean_p, *hbar, *keep_linear),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());

    let text = match run(&cli.command) {
        Ok(report) => report.render(format),
        Err(msg) => {
            eprintln!("{name}: {msg}");
            return ExitCode::FAILURE;
        }
    };

    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("{name}: {msg}");
            ExitCode::FAILURE
        }
    }
}
