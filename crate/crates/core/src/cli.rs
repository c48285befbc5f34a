//! Experiment front end: key=value specs, sweep execution, CSV output.
//!
//! A run is described by a flat key=value spec (file plus command-line
//! overrides); angles cross this boundary in degrees and are converted to
//! radians internally. Every CSV starts with `#`-prefixed comment lines
//! echoing the fully resolved spec, so artifacts are self-describing and
//! reruns of the same spec are byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::capacity::{self, Metric, OutageConstraint, PatternFamily, ThroughputResult};
use crate::error_models::OrientationErrorModel;
use crate::link::{self, NetworkParams, SuccessProfile};
use crate::patterns::RadiationPattern;
use crate::simulate::{simulate_success, SimConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error in {field}: {message}")]
    Config { field: String, message: String },
    #[error("numeric failure in {op}: {message}")]
    Numeric { op: String, message: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    fn numeric(op: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Numeric {
            op: op.into(),
            message: message.into(),
        }
    }

    /// Process exit code contract: 2 for configuration problems, 3 for
    /// numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 2,
            CliError::Numeric { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SuccessCurve,
    ThroughputCurve,
    SweepBeamwidth,
    Optimize,
    Simulate,
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SuccessCurve => "success-curve",
            Command::ThroughputCurve => "throughput-curve",
            Command::SweepBeamwidth => "sweep-beamwidth",
            Command::Optimize => "optimize",
            Command::Simulate => "simulate",
            Command::Validate => "validate",
        }
    }

    fn default_axis(&self) -> (&'static str, f64, f64, u64, bool) {
        match self {
            Command::SuccessCurve | Command::ThroughputCurve | Command::Simulate => {
                ("lambda", 1e-7, 1e-3, 50, true)
            }
            Command::SweepBeamwidth => ("omega", 1.0, 359.0, 100, false),
            Command::Optimize => ("mean", 1.0, 10.0, 10, false),
            Command::Validate => ("lambda", 1e-7, 1e-3, 10, true),
        }
    }
}

const VALID_KEYS: &[&str] = &[
    "pattern.kind",
    "pattern.omega_deg",
    "pattern.g2",
    "pattern.g2_db",
    "pattern.gamma_deg",
    "error.kind",
    "error.mean_deg",
    "error.eps_max_deg",
    "error.dimple.a",
    "error.dimple.b",
    "error.dimple.c1",
    "error.dimple.c2",
    "net.lambda",
    "net.d",
    "net.alpha",
    "net.beta",
    "net.eta",
    "net.pt",
    "outage.pe",
    "sweep.axis",
    "sweep.min",
    "sweep.max",
    "sweep.points",
    "sweep.log",
    "sim.window",
    "sim.reps",
    "sim.seed",
    "optimize.metric",
];

/// A fully resolved experiment: command, canonical key=value map, output.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub command: Command,
    entries: BTreeMap<String, String>,
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Merge defaults, an optional spec file, and override pairs (in that
    /// order of precedence, later wins). Unknown keys are config errors.
    pub fn resolve(
        command: Command,
        spec_file: Option<&Path>,
        overrides: &[(String, String)],
        out: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let mut entries = default_entries(command);
        if let Some(path) = spec_file {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((k, v)) = line.split_once('=') else {
                    return Err(CliError::config(
                        format!("{}:{}", path.display(), lineno + 1),
                        format!("expected key=value, got {line:?}"),
                    ));
                };
                insert_checked(&mut entries, k.trim(), v.trim())?;
            }
        }
        for (k, v) in overrides {
            insert_checked(&mut entries, k.trim(), v.trim())?;
        }
        canonicalize_g2(&mut entries)?;
        let spec = ExperimentSpec {
            command,
            entries,
            out,
        };
        // parse everything once so config errors surface before any output
        spec.network()?;
        spec.pattern()?;
        spec.error_model()?;
        spec.outage()?;
        spec.sweep()?;
        spec.sim_config()?;
        if spec.command == Command::Optimize {
            spec.metric()?;
        }
        Ok(spec)
    }

    fn get(&self, key: &str) -> &str {
        self.entries
            .get(key)
            .map(String::as_str)
            .unwrap_or_default()
    }

    fn get_f64(&self, key: &str) -> Result<f64, CliError> {
        self.get(key)
            .parse::<f64>()
            .map_err(|e| CliError::config(key, format!("{:?}: {e}", self.get(key))))
    }

    fn get_u64(&self, key: &str) -> Result<u64, CliError> {
        self.get(key)
            .parse::<u64>()
            .map_err(|e| CliError::config(key, format!("{:?}: {e}", self.get(key))))
    }

    fn get_bool(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key) {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            other => Err(CliError::config(
                key,
                format!("expected boolean, got {other:?}"),
            )),
        }
    }

    pub fn network(&self) -> Result<NetworkParams, CliError> {
        NetworkParams::new(
            self.get_f64("net.lambda")?,
            self.get_f64("net.d")?,
            self.get_f64("net.alpha")?,
            self.get_f64("net.beta")?,
            self.get_f64("net.eta")?,
            self.get_f64("net.pt")?,
        )
        .map_err(|e| CliError::config(format!("net.{}", param_name(&e)), e.to_string()))
    }

    pub fn pattern(&self) -> Result<RadiationPattern, CliError> {
        self.pattern_at(self.get_f64("pattern.omega_deg")?.to_radians())
    }

    /// Pattern of the configured kind at an explicit beamwidth (radians).
    pub fn pattern_at(&self, omega: f64) -> Result<RadiationPattern, CliError> {
        let g2 = self.get_f64("pattern.g2")?;
        let kind = self.get("pattern.kind");
        let built = match kind {
            "omni" => Ok(RadiationPattern::omni()),
            "ideal" => RadiationPattern::ideal_sector(omega, g2),
            "transition" => RadiationPattern::transition_sector(
                omega,
                self.get_f64("pattern.gamma_deg")?.to_radians(),
                g2,
            ),
            "3gpp" => RadiationPattern::three_gpp_sector(omega, g2),
            other => {
                return Err(CliError::config(
                    "pattern.kind",
                    format!("unknown kind {other:?} (omni | ideal | transition | 3gpp)"),
                ))
            }
        };
        built.map_err(|e| CliError::config("pattern", e.to_string()))
    }

    pub fn pattern_family(&self) -> Result<Option<PatternFamily>, CliError> {
        let g2 = self.get_f64("pattern.g2")?;
        Ok(match self.get("pattern.kind") {
            "ideal" => Some(PatternFamily::IdealSector { g2 }),
            "transition" => Some(PatternFamily::TransitionSector {
                g2,
                gamma: self.get_f64("pattern.gamma_deg")?.to_radians(),
            }),
            "3gpp" => Some(PatternFamily::ThreeGppSector { g2 }),
            _ => None,
        })
    }

    pub fn error_model(&self) -> Result<OrientationErrorModel, CliError> {
        self.error_model_with_mean(self.get_f64("error.mean_deg")?.to_radians())
    }

    /// Error model of the configured kind with an explicit mean (radians).
    /// For the uniform family the mean determines the support (`eps_max = 2
    /// mean`) unless `error.eps_max_deg` was set explicitly.
    pub fn error_model_with_mean(&self, mean: f64) -> Result<OrientationErrorModel, CliError> {
        let kind = self.get("error.kind");
        let built = match kind {
            "zero" => Ok(OrientationErrorModel::zero()),
            "uniform" => {
                let eps_max = if self.entries.contains_key("error.eps_max_deg") {
                    self.get_f64("error.eps_max_deg")?.to_radians()
                } else {
                    2.0 * mean
                };
                OrientationErrorModel::uniform(eps_max)
            }
            "exponential" => OrientationErrorModel::truncated_exponential(mean),
            "halfnormal" => OrientationErrorModel::truncated_half_normal(mean),
            "dimple" => OrientationErrorModel::dimple(
                self.get_f64("error.dimple.a")?,
                self.get_f64("error.dimple.b")?,
                self.get_f64("error.dimple.c1")?,
                self.get_f64("error.dimple.c2")?,
            ),
            other => return Err(CliError::config(
                "error.kind",
                format!(
                    "unknown kind {other:?} (zero | uniform | exponential | halfnormal | dimple)"
                ),
            )),
        };
        built.map_err(|e| CliError::config("error", e.to_string()))
    }

    pub fn outage(&self) -> Result<OutageConstraint, CliError> {
        OutageConstraint::new(self.get_f64("outage.pe")?)
            .map_err(|e| CliError::config("outage.pe", e.to_string()))
    }

    pub fn sweep(&self) -> Result<Sweep, CliError> {
        let axis = match self.get("sweep.axis") {
            "lambda" => SweepAxis::Lambda,
            "omega" => SweepAxis::Omega,
            "mean" => SweepAxis::Mean,
            other => {
                return Err(CliError::config(
                    "sweep.axis",
                    format!("unknown axis {other:?} (lambda | omega | mean)"),
                ))
            }
        };
        let expected = match self.command {
            Command::SweepBeamwidth => SweepAxis::Omega,
            Command::Optimize => SweepAxis::Mean,
            _ => SweepAxis::Lambda,
        };
        if axis != expected {
            return Err(CliError::config(
                "sweep.axis",
                format!(
                    "command {} sweeps {}, got {}",
                    self.command.name(),
                    expected.key(),
                    axis.key()
                ),
            ));
        }
        let min = self.get_f64("sweep.min")?;
        let max = self.get_f64("sweep.max")?;
        let points = self.get_u64("sweep.points")?;
        let log = self.get_bool("sweep.log")?;
        if !min.is_finite() || min <= 0.0 {
            return Err(CliError::config("sweep.min", "must be positive"));
        }
        if max < min {
            return Err(CliError::config("sweep.max", "must be >= sweep.min"));
        }
        if points == 0 {
            return Err(CliError::config("sweep.points", "must be >= 1"));
        }
        Ok(Sweep {
            axis,
            min,
            max,
            points,
            log,
        })
    }

    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        Ok(SimConfig::new(
            self.get_f64("sim.window")?,
            self.get_u64("sim.reps")?,
            self.get_u64("sim.seed")?,
        ))
    }

    pub fn metric(&self) -> Result<Metric, CliError> {
        match self.get("optimize.metric") {
            "tp" => Ok(Metric::Throughput),
            "tc" => Ok(Metric::TransmissionCapacity),
            other => Err(CliError::config(
                "optimize.metric",
                format!("unknown metric {other:?} (tp | tc)"),
            )),
        }
    }

    fn comment_header(&self, warnings: &[String]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# beamnet {}", self.command.name());
        for (k, v) in &self.entries {
            let _ = writeln!(s, "# {k}={v}");
        }
        for w in warnings {
            let _ = writeln!(s, "# warning: {w}");
        }
        s
    }
}

fn param_name(e: &link::LinkError) -> String {
    match e {
        link::LinkError::InvalidParameter { name, .. } => (*name).to_string(),
        _ => "params".to_string(),
    }
}

fn insert_checked(
    entries: &mut BTreeMap<String, String>,
    key: &str,
    value: &str,
) -> Result<(), CliError> {
    if !VALID_KEYS.contains(&key) {
        return Err(CliError::config(key, "unknown spec key"));
    }
    entries.insert(key.to_string(), value.to_string());
    Ok(())
}

/// Replace a dB sidelobe specification with its linear value.
fn canonicalize_g2(entries: &mut BTreeMap<String, String>) -> Result<(), CliError> {
    if let Some(db) = entries.remove("pattern.g2_db") {
        let db: f64 = db
            .parse()
            .map_err(|e| CliError::config("pattern.g2_db", format!("{db:?}: {e}")))?;
        let linear = 10f64.powf(db / 10.0);
        entries.insert("pattern.g2".to_string(), format!("{linear}"));
    }
    Ok(())
}

fn default_entries(command: Command) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        m.insert(k.to_string(), v);
    };
    put("pattern.kind", "ideal".into());
    put("pattern.omega_deg", "20".into());
    put("pattern.g2", "0.1".into());
    put("pattern.gamma_deg", "5".into());
    put("error.kind", "halfnormal".into());
    put("error.mean_deg", "3".into());
    put("error.dimple.a", "0.5".into());
    put("error.dimple.b", "0.5".into());
    put("error.dimple.c1", "15".into());
    put("error.dimple.c2", "1".into());
    put("net.lambda", "1e-5".into());
    put("net.d", "100".into());
    put("net.alpha", "3".into());
    put("net.beta", "4".into());
    put("net.eta", "1e-12".into());
    put("net.pt", "1".into());
    put("outage.pe", "0.15".into());
    let (axis, min, max, points, log) = command.default_axis();
    put("sweep.axis", axis.into());
    put("sweep.min", format!("{min}"));
    put("sweep.max", format!("{max}"));
    put("sweep.points", format!("{points}"));
    put("sweep.log", format!("{log}"));
    put("sim.window", "3000".into());
    put("sim.reps", "10000".into());
    put("sim.seed", "42".into());
    put("optimize.metric", "tc".into());
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Lambda,
    Omega,
    Mean,
}

impl SweepAxis {
    fn key(&self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::Omega => "omega",
            SweepAxis::Mean => "mean",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub min: f64,
    pub max: f64,
    pub points: u64,
    pub log: bool,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.min];
        }
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + t * (self.max - self.min)
                }
            })
            .collect()
    }
}

/// Execute the experiment and write its CSV artifact. Output goes to the
/// spec's `out` path, or standard output when none is set.
pub fn run(spec: &ExperimentSpec) -> Result<(), CliError> {
    let body = render(spec)?;
    match &spec.out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".to_string(),
                    source,
                })
        }
    }
}

/// Render the full CSV artifact for an experiment.
pub fn render(spec: &ExperimentSpec) -> Result<String, CliError> {
    match spec.command {
        Command::SuccessCurve => success_curve(spec),
        Command::ThroughputCurve => throughput_curve(spec),
        Command::SweepBeamwidth => sweep_beamwidth(spec),
        Command::Optimize => optimize(spec),
        Command::Simulate => simulate(spec),
        Command::Validate => validate(spec),
    }
}

fn numeric_op<E: std::fmt::Display>(op: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::numeric(op, e.to_string())
}

/// Closed-form success probability where one exists for the pattern kind.
fn ps_closed(
    params: &NetworkParams,
    pattern: &RadiationPattern,
    error: &OrientationErrorModel,
) -> Result<Option<f64>, CliError> {
    Ok(match pattern {
        RadiationPattern::Omni => Some(link::success_omni(params)),
        RadiationPattern::IdealSector { g2, .. } => {
            let ps = if *g2 == 0.0 {
                link::success_sector_noside(params, pattern, error)
            } else {
                link::success_sector(params, pattern, error)
            };
            Some(ps.map_err(numeric_op("success closed form"))?)
        }
        _ => None,
    })
}

fn success_curve(spec: &ExperimentSpec) -> Result<String, CliError> {
    let params = spec.network()?;
    let pattern = spec.pattern()?;
    let error = spec.error_model()?;
    let lambdas = spec.sweep()?.values();
    let profile =
        SuccessProfile::new(&params, &pattern, &error).map_err(numeric_op("success_general"))?;
    let mut out = spec.comment_header(&[]);
    out.push_str("lambda,ps_analytic,ps_general\n");
    for &lam in &lambdas {
        let general = profile
            .eval(lam)
            .map_err(numeric_op("success_general quadrature"))?;
        let p = params.with_lambda(lam);
        let analytic = ps_closed(&p, &pattern, &error)?.unwrap_or(general);
        let _ = writeln!(out, "{lam},{analytic},{general}");
    }
    Ok(out)
}

fn throughput_curve(spec: &ExperimentSpec) -> Result<String, CliError> {
    let params = spec.network()?;
    let pattern = spec.pattern()?;
    let error = spec.error_model()?;
    let lambdas = spec.sweep()?.values();
    let profile =
        SuccessProfile::new(&params, &pattern, &error).map_err(numeric_op("success profile"))?;
    let mut out = spec.comment_header(&[]);
    out.push_str("lambda,ps,throughput\n");
    for &lam in &lambdas {
        let ps = profile
            .eval(lam)
            .map_err(numeric_op("success quadrature"))?;
        let _ = writeln!(out, "{lam},{ps},{}", lam * ps);
    }
    Ok(out)
}

struct BeamwidthRow {
    omega_deg: f64,
    tp: ThroughputResult,
    tc: ThroughputResult,
}

fn sweep_beamwidth(spec: &ExperimentSpec) -> Result<String, CliError> {
    let params = spec.network()?;
    let error = spec.error_model()?;
    let outage = spec.outage()?;
    let family = spec.pattern_family()?.ok_or_else(|| {
        CliError::config(
            "pattern.kind",
            "sweep-beamwidth requires a sector family (ideal | transition | 3gpp)",
        )
    })?;
    let omegas = spec.sweep()?.values();
    let noside = matches!(family, PatternFamily::IdealSector { g2 } if g2 == 0.0);
    let rows: Vec<Result<Option<BeamwidthRow>, CliError>> = omegas
        .par_iter()
        .map(|&omega_deg| {
            let omega = omega_deg.to_radians();
            let Ok(pattern) = family.build(omega) else {
                return Ok(None);
            };
            let (tp, tc) = if noside {
                (
                    capacity::tp_sector_noside(&params, omega, &error)
                        .map_err(numeric_op("tp_sector_noside"))?,
                    capacity::tc_sector_noside(&params, omega, &error, &outage)
                        .map_err(numeric_op("tc_sector_noside"))?,
                )
            } else {
                (
                    capacity::tp_numeric(&params, &pattern, &error)
                        .map_err(numeric_op("tp_numeric"))?,
                    capacity::tc_numeric(&params, &pattern, &error, &outage)
                        .map_err(numeric_op("tc_numeric"))?,
                )
            };
            Ok(Some(BeamwidthRow { omega_deg, tp, tc }))
        })
        .collect();
    let tp_omni = capacity::tp_omni(&params);
    let tc_omni = capacity::tc_omni(&params, &outage);
    let mut out = spec.comment_header(&[]);
    out.push_str("omega_deg,tp,tc,tp_over_omni,tc_over_omni,tc_feasible\n");
    for row in rows {
        let Some(row) = row? else { continue };
        let omega = row.omega_deg.to_radians();
        // exact gain formulas when noise is off and the closed form applies;
        // ratio of the two results otherwise
        let (tp_norm, tc_norm) = if noside && params.eta == 0.0 {
            (
                capacity::tp_gain(omega, &error).map_err(numeric_op("tp_gain"))?,
                capacity::tc_gain(omega, &error, &outage).map_err(numeric_op("tc_gain"))?,
            )
        } else {
            (row.tp.value / tp_omni.value, row.tc.value / tc_omni.value)
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.omega_deg,
            row.tp.value,
            row.tc.value,
            tp_norm,
            tc_norm,
            u8::from(row.tc.feasible)
        );
    }
    Ok(out)
}

fn optimize(spec: &ExperimentSpec) -> Result<String, CliError> {
    let params = spec.network()?;
    let outage = spec.outage()?;
    let metric = spec.metric()?;
    let family = spec.pattern_family()?.ok_or_else(|| {
        CliError::config(
            "pattern.kind",
            "optimize requires a sector family (ideal | transition | 3gpp)",
        )
    })?;
    match spec.get("error.kind") {
        "zero" | "dimple" => {
            return Err(CliError::config(
                "error.kind",
                "optimize sweeps the error mean; use uniform, exponential, or halfnormal",
            ))
        }
        _ => {}
    }
    let means = spec.sweep()?.values();
    let noside = matches!(family, PatternFamily::IdealSector { g2 } if g2 == 0.0);
    let mut out = spec.comment_header(&[]);
    out.push_str("mean_deg,omega_star_deg,metric_value,method\n");
    let rows: Vec<Result<String, CliError>> = means
        .par_iter()
        .map(|&mean_deg| {
            let error = spec.error_model_with_mean(mean_deg.to_radians())?;
            let (concave, _) = error.is_concave_cdf();
            let use_stationarity = noside && metric == Metric::TransmissionCapacity && concave;
            let (omega_star, value, method) = if use_stationarity {
                let m = capacity::tc_beamwidth_maximizer(&error, &outage)
                    .map_err(numeric_op("tc_beamwidth_maximizer"))?;
                let value = capacity::tc_sector_noside(&params, m.omega_star, &error, &outage)
                    .map_err(numeric_op("tc_sector_noside"))?
                    .value;
                (m.omega_star, value, "stationarity")
            } else {
                let (omega_star, value) =
                    capacity::optimize_beamwidth(&params, &family, &error, metric, Some(&outage))
                        .map_err(numeric_op("optimize_beamwidth"))?;
                (omega_star, value, "grid+golden")
            };
            Ok(format!(
                "{mean_deg},{},{value},{method}\n",
                omega_star.to_degrees()
            ))
        })
        .collect();
    for row in rows {
        out.push_str(&row?);
    }
    Ok(out)
}

fn simulate(spec: &ExperimentSpec) -> Result<String, CliError> {
    let params = spec.network()?;
    let pattern = spec.pattern()?;
    let error = spec.error_model()?;
    let cfg = spec.sim_config()?;
    let lambdas = spec.sweep()?.values();
    let mut warnings = Vec::new();
    for &lam in &lambdas {
        let mut w = cfg
            .validate(&params.with_lambda(lam))
            .map_err(|e| CliError::config("sim", e.to_string()))?;
        warnings.append(&mut w);
    }
    warnings.dedup();
    let mut out = spec.comment_header(&warnings);
    out.push_str("lambda,ps_analytic,ps_sim,ci_low,ci_high,reps\n");
    for &lam in &lambdas {
        let p = params.with_lambda(lam);
        let est = simulate_success(&p, &pattern, &error, &cfg)
            .map_err(|e| CliError::config("sim", e.to_string()))?;
        let analytic = match ps_closed(&p, &pattern, &error)? {
            Some(v) => v,
            None => link::success_general(&p, &pattern, &error)
                .map_err(numeric_op("success_general"))?,
        };
        let _ = writeln!(
            out,
            "{lam},{analytic},{},{},{},{}",
            est.p_hat, est.ci_low, est.ci_high, est.n
        );
    }
    Ok(out)
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

/// Agreement suite: closed forms vs quadrature vs Monte Carlo, throughput
/// monotonicity, the capacity maximizer against a grid, and determinism.
fn validate(spec: &ExperimentSpec) -> Result<String, CliError> {
    let outage = spec.outage()?;
    let mut checks: Vec<Check> = Vec::new();

    // closed form vs general quadrature across patterns, errors, intensities
    {
        let patterns = [
            RadiationPattern::omni(),
            RadiationPattern::ideal_sector(20f64.to_radians(), 0.0).unwrap(),
            RadiationPattern::ideal_sector(20f64.to_radians(), 0.1).unwrap(),
        ];
        let errors = [
            OrientationErrorModel::zero(),
            OrientationErrorModel::uniform(std::f64::consts::PI).unwrap(),
            OrientationErrorModel::truncated_half_normal(3f64.to_radians()).unwrap(),
        ];
        let mut worst = 0.0f64;
        for pattern in &patterns {
            for error in &errors {
                for i in 0..5 {
                    let lam = 1e-7 * 10f64.powf(i as f64);
                    let params = NetworkParams::defaults_with_lambda(lam);
                    let general = link::success_general(&params, pattern, error)
                        .map_err(numeric_op("success_general"))?;
                    let closed = ps_closed(&params, pattern, error)?.unwrap();
                    let scale = closed.abs().max(1e-300);
                    worst = worst.max((general - closed).abs() / scale);
                }
            }
        }
        checks.push(Check {
            name: "closed_form_vs_quadrature",
            pass: worst < 1e-10,
            detail: format!("max_rel_diff={worst:.3e}"),
        });
    }

    // Monte Carlo vs analytic on three bias-controlled configurations
    {
        let cases: [(RadiationPattern, OrientationErrorModel, f64, f64); 3] = [
            (
                RadiationPattern::omni(),
                OrientationErrorModel::zero(),
                3e-7,
                30_000.0,
            ),
            (
                RadiationPattern::ideal_sector(20f64.to_radians(), 0.0).unwrap(),
                OrientationErrorModel::truncated_half_normal(3f64.to_radians()).unwrap(),
                1e-5,
                6_000.0,
            ),
            (
                RadiationPattern::ideal_sector(20f64.to_radians(), 0.1).unwrap(),
                OrientationErrorModel::truncated_half_normal(3f64.to_radians()).unwrap(),
                3e-6,
                10_000.0,
            ),
        ];
        let mut hits = 0;
        let mut detail = String::new();
        for (i, (pattern, error, lam, window)) in cases.iter().enumerate() {
            let params = NetworkParams::defaults_with_lambda(*lam);
            let cfg = SimConfig::new(*window, 30_000, 20_240 + i as u64);
            let est = simulate_success(&params, pattern, error, &cfg)
                .map_err(|e| CliError::config("sim", e.to_string()))?;
            let analytic = match ps_closed(&params, pattern, error)? {
                Some(v) => v,
                None => unreachable!("validate cases have closed forms"),
            };
            if est.contains(analytic) {
                hits += 1;
            }
            let _ = write!(
                detail,
                "case{i}: analytic={analytic:.5} ci=[{:.5};{:.5}] ",
                est.ci_low, est.ci_high
            );
        }
        checks.push(Check {
            name: "monte_carlo_agreement",
            pass: hits >= 2,
            detail: format!("{hits}/3 in CI; {}", detail.trim_end()),
        });
    }

    // TP monotone in beamwidth for concave errors without sidelobes
    {
        let params = NetworkParams::defaults_with_lambda(1e-5);
        let models = [
            OrientationErrorModel::uniform(std::f64::consts::PI).unwrap(),
            OrientationErrorModel::truncated_half_normal(3f64.to_radians()).unwrap(),
        ];
        let mut pass = true;
        let mut worst = 0.0f64;
        for error in &models {
            let mut last = f64::INFINITY;
            for i in 1..=300 {
                let omega = 2.0 * std::f64::consts::PI * i as f64 / 300.0;
                let v = capacity::tp_sector_noside(&params, omega, error)
                    .map_err(numeric_op("tp_sector_noside"))?
                    .value;
                if v > last {
                    worst = worst.max((v - last) / last);
                    if (v - last) / last > 1e-12 {
                        pass = false;
                    }
                }
                last = v;
            }
        }
        checks.push(Check {
            name: "tp_monotone_in_beamwidth",
            pass,
            detail: format!("worst_rel_increase={worst:.3e}"),
        });
    }

    // stationarity root against a dense grid of the closed form
    {
        let params = NetworkParams::defaults_with_lambda(1e-5).with_eta(0.0);
        let mut pass = true;
        let mut detail = String::new();
        for error in [
            OrientationErrorModel::truncated_half_normal(3f64.to_radians()).unwrap(),
            OrientationErrorModel::truncated_exponential(10f64.to_radians()).unwrap(),
        ] {
            let m = capacity::tc_beamwidth_maximizer(&error, &outage)
                .map_err(numeric_op("tc_beamwidth_maximizer"))?;
            let x_lo = error
                .quantile((1.0 - outage.p_e).sqrt())
                .map_err(|e| CliError::numeric("quantile", e.to_string()))?;
            let n = 4000;
            let mut best = (0.0, f64::NEG_INFINITY);
            for i in 1..=n {
                let omega = 2.0 * (x_lo + (error.eps_max() - x_lo) * i as f64 / n as f64);
                let v = capacity::tc_sector_noside(&params, omega, &error, &outage)
                    .map_err(numeric_op("tc_sector_noside"))?
                    .value;
                if v > best.1 {
                    best = (omega, v);
                }
            }
            let cell = 2.0 * (error.eps_max() - x_lo) / n as f64;
            if (m.omega_star - best.0).abs() > cell {
                pass = false;
            }
            let _ = write!(detail, "omega*={:.6} grid={:.6} ", m.omega_star, best.0);
        }
        checks.push(Check {
            name: "tc_maximizer_vs_grid",
            pass,
            detail: detail.trim_end().to_string(),
        });
    }

    // seeded determinism of the simulator
    {
        let params = NetworkParams::defaults_with_lambda(1e-5);
        let pattern = RadiationPattern::ideal_sector(20f64.to_radians(), 0.1).unwrap();
        let error = OrientationErrorModel::truncated_half_normal(3f64.to_radians()).unwrap();
        let cfg = SimConfig::new(3000.0, 2000, 7);
        let a = simulate_success(&params, &pattern, &error, &cfg)
            .map_err(|e| CliError::config("sim", e.to_string()))?;
        let b = simulate_success(&params, &pattern, &error, &cfg)
            .map_err(|e| CliError::config("sim", e.to_string()))?;
        checks.push(Check {
            name: "simulator_determinism",
            pass: a == b,
            detail: format!("p_hat={}", a.p_hat),
        });
    }

    let mut out = spec.comment_header(&[]);
    out.push_str("check,status,detail\n");
    let mut failed = Vec::new();
    for c in &checks {
        let status = if c.pass { "pass" } else { "FAIL" };
        let _ = writeln!(out, "{},{},{}", c.name, status, c.detail);
        if !c.pass {
            failed.push(c.name);
        }
    }
    if failed.is_empty() {
        Ok(out)
    } else {
        // still write the artifact so the failure is inspectable
        if let Some(path) = &spec.out {
            let _ = fs::write(path, &out);
        }
        Err(CliError::numeric(
            "validate",
            format!("checks failed: {}", failed.join(", ")),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(command: Command, sets: &[(&str, &str)]) -> Result<ExperimentSpec, CliError> {
        let overrides: Vec<(String, String)> = sets
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        ExperimentSpec::resolve(command, None, &overrides, None)
    }

    #[test]
    fn defaults_resolve_for_every_command() {
        for cmd in [
            Command::SuccessCurve,
            Command::ThroughputCurve,
            Command::SweepBeamwidth,
            Command::Optimize,
            Command::Simulate,
            Command::Validate,
        ] {
            let spec = resolve(cmd, &[]).unwrap();
            assert_eq!(spec.command, cmd);
        }
    }

    #[test]
    fn unknown_key_is_config_error() {
        let err = resolve(Command::SuccessCurve, &[("net.lambduh", "1")]).unwrap_err();
        assert!(matches!(err, CliError::Config { .. }));
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("net.lambduh"));
    }

    #[test]
    fn exit_code_contract() {
        assert_eq!(CliError::config("f", "m").exit_code(), 2);
        assert_eq!(CliError::numeric("op", "m").exit_code(), 3);
        let numeric = CliError::numeric("tp_numeric", "bracket");
        assert!(numeric.to_string().contains("tp_numeric"));
    }

    #[test]
    fn invalid_value_names_field() {
        let err = resolve(Command::SuccessCurve, &[("net.alpha", "1.5")]).unwrap_err();
        assert!(err.to_string().contains("alpha"), "{err}");
        let err = resolve(Command::SuccessCurve, &[("outage.pe", "1.5")]).unwrap_err();
        assert!(err.to_string().contains("outage.pe"), "{err}");
    }

    #[test]
    fn g2_db_converts_to_linear() {
        let spec = resolve(Command::SuccessCurve, &[("pattern.g2_db", "-10")]).unwrap();
        let p = spec.pattern().unwrap();
        assert!((p.g2() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn axis_mismatch_rejected() {
        let err = resolve(Command::SweepBeamwidth, &[("sweep.axis", "lambda")]).unwrap_err();
        assert!(err.to_string().contains("sweep"), "{err}");
    }

    #[test]
    fn sweep_values_log_and_linear() {
        let spec = resolve(
            Command::SuccessCurve,
            &[
                ("sweep.min", "1e-7"),
                ("sweep.max", "1e-3"),
                ("sweep.points", "5"),
                ("sweep.log", "true"),
            ],
        )
        .unwrap();
        let v = spec.sweep().unwrap().values();
        assert_eq!(v.len(), 5);
        assert!((v[0] - 1e-7).abs() < 1e-20);
        assert!((v[4] - 1e-3).abs() < 1e-15);
        assert!((v[2] - 1e-5).abs() < 1e-12);
    }

    #[test]
    fn success_curve_rows_match_closed_form() {
        let spec = resolve(
            Command::SuccessCurve,
            &[("pattern.kind", "omni"), ("sweep.points", "10")],
        )
        .unwrap();
        let csv = render(&spec).unwrap();
        let mut rows = 0;
        for line in csv.lines() {
            if line.starts_with('#') || line.starts_with("lambda") {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            let lam: f64 = cols[0].parse().unwrap();
            let analytic: f64 = cols[1].parse().unwrap();
            let expect = link::success_omni(&NetworkParams::defaults_with_lambda(lam));
            assert!((analytic - expect).abs() <= 1e-12 * expect.max(1e-300));
            rows += 1;
        }
        assert_eq!(rows, 10);
    }

    #[test]
    fn csv_numbers_round_trip() {
        let spec = resolve(Command::SuccessCurve, &[("sweep.points", "7")]).unwrap();
        let csv = render(&spec).unwrap();
        for line in csv.lines().filter(|l| !l.starts_with('#')) {
            if line.starts_with("lambda") {
                continue;
            }
            for field in line.split(',') {
                let x: f64 = field.parse().unwrap();
                assert_eq!(format!("{x}"), field, "field {field} not shortest form");
            }
        }
    }

    #[test]
    fn renders_are_deterministic() {
        let spec = resolve(
            Command::Simulate,
            &[
                ("sweep.points", "3"),
                ("sim.reps", "500"),
                ("sweep.min", "1e-6"),
                ("sweep.max", "1e-5"),
            ],
        )
        .unwrap();
        let a = render(&spec).unwrap();
        let b = render(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn optimize_tc_row_matches_maximizer() {
        let spec = resolve(
            Command::Optimize,
            &[
                ("pattern.g2", "0"),
                ("sweep.min", "3"),
                ("sweep.max", "3"),
                ("sweep.points", "1"),
                ("optimize.metric", "tc"),
            ],
        )
        .unwrap();
        let csv = render(&spec).unwrap();
        let row = csv
            .lines()
            .find(|l| !l.starts_with('#') && !l.starts_with("mean_deg"))
            .unwrap();
        let cols: Vec<&str> = row.split(',').collect();
        let omega_star_deg: f64 = cols[1].parse().unwrap();
        let expect = capacity::tc_beamwidth_maximizer(
            &OrientationErrorModel::truncated_half_normal(3f64.to_radians()).unwrap(),
            &OutageConstraint::new(0.15).unwrap(),
        )
        .unwrap()
        .omega_star
        .to_degrees();
        assert!(
            (omega_star_deg - expect).abs() < 1e-8,
            "{omega_star_deg} vs {expect}"
        );
        assert!(cols[3].contains("stationarity"));
    }

    #[test]
    fn spec_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.spec");
        std::fs::write(&path, "pattern.kind = omni\n# comment\nnet.lambda = 2e-6\n").unwrap();
        let spec = ExperimentSpec::resolve(
            Command::SuccessCurve,
            Some(&path),
            &[("sweep.points".into(), "2".into())],
            None,
        )
        .unwrap();
        assert_eq!(spec.get("pattern.kind"), "omni");
        assert_eq!(spec.get("net.lambda"), "2e-6");
        assert_eq!(spec.get("sweep.points"), "2");
        let csv = render(&spec).unwrap();
        assert!(csv.contains("# net.lambda=2e-6"));
    }
}
