//! `beamnet`: coverage and throughput sweeps for directional Poisson
//! networks, emitted as CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use beamnet::cli::{self, Command as RunCommand, ExperimentSpec};
use clap::{Args, Parser, Subcommand};

const SPEC_HELP: &str = "\
Spec files are flat key=value lines ('#' starts a comment); --set overrides \
them. Keys: pattern.kind (omni|ideal|transition|3gpp), pattern.omega_deg, \
pattern.g2, pattern.g2_db, pattern.gamma_deg; error.kind \
(zero|uniform|exponential|halfnormal|dimple), error.mean_deg, \
error.eps_max_deg, error.dimple.{a,b,c1,c2}; net.{lambda,d,alpha,beta,eta,pt}; \
outage.pe; sweep.{axis,min,max,points,log}; sim.{window,reps,seed}; \
optimize.metric. Angles are degrees at this interface and sidelobe gains are \
linear (pattern.g2_db converts from dB). Defaults: alpha=3, beta=4, d=100 m, \
eta=1e-12 W, pt=1 W, pe=0.15, ideal sector omega=20 deg g2=0.1, half-normal \
error mean 3 deg, lambda=1e-5 per m^2.";

#[derive(Parser)]
#[command(
    name = "beamnet",
    about = "Coverage, spatial throughput, and transmission capacity for \
             directional wireless Poisson networks with orientation error",
    after_help = SPEC_HELP,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Args)]
struct Common {
    /// Key=value spec file; overridable with --set.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Override one spec key, e.g. --set net.lambda=1e-4 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Sidelobe gain in dB (shorthand for --set pattern.g2_db=...).
    #[arg(long, value_name = "DB", allow_hyphen_values = true)]
    g2_db: Option<f64>,
    /// Output CSV path (stdout when omitted).
    #[arg(long, short, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Commands {
    /// Success probability vs intensity.
    ///
    /// Sweeps net.lambda over the sweep grid. Columns: lambda, ps_analytic
    /// (closed form for omni/ideal sectors, otherwise equal to ps_general),
    /// ps_general (gain-expectation evaluator).
    SuccessCurve(Common),
    /// Density of successful transmissions vs intensity.
    ///
    /// Columns: lambda, ps, throughput (= lambda * ps).
    ThroughputCurve(Common),
    /// Spatial throughput and transmission capacity vs beamwidth.
    ///
    /// Sweeps omega (degrees). Columns: omega_deg, tp, tc, tp_over_omni,
    /// tc_over_omni, tc_feasible (1 when the outage constraint is
    /// attainable). Beamwidths where the pattern family is not admissible
    /// are omitted.
    SweepBeamwidth(Common),
    /// Metric-maximizing beamwidth vs mean orientation error.
    ///
    /// Sweeps error.mean_deg. Columns: mean_deg, omega_star_deg,
    /// metric_value, method (stationarity | grid+golden).
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Metric to maximize over beamwidth.
        #[arg(long, value_parser = ["tp", "tc"])]
        metric: Option<String>,
    },
    /// Monte Carlo estimate of the success probability vs intensity.
    ///
    /// Columns: lambda, ps_analytic, ps_sim, ci_low, ci_high, reps
    /// (95% Wilson interval). Byte-identical output for identical specs.
    Simulate(Common),
    /// Agreement suite: closed forms vs quadrature vs Monte Carlo plus
    /// monotonicity, maximizer, and determinism checks.
    ///
    /// Columns: check, status, detail. Exits 3 if any check fails.
    Validate(Common),
}

fn to_spec(
    command: RunCommand,
    common: &Common,
    extra: &[(String, String)],
) -> Result<ExperimentSpec, cli::CliError> {
    let mut overrides: Vec<(String, String)> = Vec::new();
    for s in &common.sets {
        let Some((k, v)) = s.split_once('=') else {
            return Err(cli::CliError::Config {
                field: "--set".into(),
                message: format!("expected KEY=VALUE, got {s:?}"),
            });
        };
        overrides.push((k.to_string(), v.to_string()));
    }
    if let Some(db) = common.g2_db {
        overrides.push(("pattern.g2_db".into(), format!("{db}")));
    }
    overrides.extend_from_slice(extra);
    ExperimentSpec::resolve(
        command,
        common.spec.as_deref(),
        &overrides,
        common.out.clone(),
    )
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let result = match &args.command {
        Commands::SuccessCurve(c) => to_spec(RunCommand::SuccessCurve, c, &[]),
        Commands::ThroughputCurve(c) => to_spec(RunCommand::ThroughputCurve, c, &[]),
        Commands::SweepBeamwidth(c) => to_spec(RunCommand::SweepBeamwidth, c, &[]),
        Commands::Optimize { common, metric } => {
            let extra: Vec<(String, String)> = metric
                .iter()
                .map(|m| ("optimize.metric".to_string(), m.clone()))
                .collect();
            to_spec(RunCommand::Optimize, common, &extra)
        }
        Commands::Simulate(c) => to_spec(RunCommand::Simulate, c, &[]),
        Commands::Validate(c) => to_spec(RunCommand::Validate, c, &[]),
    }
    .and_then(|spec| cli::run(&spec));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("beamnet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
