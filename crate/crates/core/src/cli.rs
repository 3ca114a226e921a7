//! Command-line front end: one experiment per TOML configuration file, written
//! as CSV (with `# key = value` metadata lines) or as a JSON object with
//! `meta` and `results` keys.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::evolution::{supershift_gap, GapGrid, GapReport};
use crate::fresnel::{default_eps_list, reference_suite, verify_suite, FresnelIntegrand};
use crate::operators::DispersionSpec;
use crate::propagators::{
    default_probe_times, singularity_probe, supershift_gap_centrifugal, supershift_gap_harmonic,
    CentrifugalSpec, HarmonicSpec,
};
use crate::sequences::{evaluate_product, gap_bound, SuperoscParams};

#[derive(Debug, Parser)]
#[command(
    name = "supershift",
    version,
    about = "Run a superoscillation experiment from a TOML file"
)]
pub struct Args {
    /// Experiment configuration (TOML).
    pub config: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Synth,
    Evolve,
    FresnelVerify,
    Harmonic,
    Centrifugal,
    Probe,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default = "empty_table")]
    pub parameters: toml::Value,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub output_format: OutputFormat,
    #[serde(default)]
    pub seed: u64,
}

fn empty_table() -> toml::Value {
    toml::Value::Table(Default::default())
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::invalid(format!("configuration: {e}")))
    }

    fn params<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        self.parameters
            .clone()
            .try_into()
            .map_err(|e| Error::invalid(format!("parameters: {e}")))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SynthParams {
    a: f64,
    n: usize,
    #[serde(default = "neg_three")]
    x_min: f64,
    #[serde(default = "three")]
    x_max: f64,
    #[serde(default = "default_nx")]
    nx: usize,
    /// Random complex points checked against the error bound.
    #[serde(default)]
    random_checks: usize,
}

fn neg_three() -> f64 {
    -3.0
}
fn three() -> f64 {
    3.0
}
fn default_nx() -> usize {
    61
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum DispersionKindParam {
    Polynomial,
    PowerSeries,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DispersionParams {
    kind: DispersionKindParam,
    gammas: Vec<f64>,
    #[serde(default)]
    radius: Option<f64>,
}

impl DispersionParams {
    fn build(&self) -> Result<DispersionSpec> {
        let g: Vec<Complex64> = self
            .gammas
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        match self.kind {
            DispersionKindParam::Polynomial => DispersionSpec::polynomial(g),
            DispersionKindParam::PowerSeries => DispersionSpec::power_series(g, self.radius),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvolveParams {
    dispersion: DispersionParams,
    a: f64,
    ns: Vec<usize>,
    #[serde(default)]
    grid: Option<GapGrid>,
    #[serde(default)]
    mu: usize,
    #[serde(default)]
    nu: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum FactorParams {
    One,
    Polynomial { coeffs: Vec<f64> },
    PlaneWave { lambda: f64 },
    Gaussian { rate: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegrandParams {
    chi: f64,
    phase: f64,
    factor: FactorParams,
}

impl IntegrandParams {
    fn build(&self) -> Result<FresnelIntegrand> {
        match &self.factor {
            FactorParams::One => FresnelIntegrand::polynomial(self.chi, self.phase, vec![1.0]),
            FactorParams::Polynomial { coeffs } => {
                FresnelIntegrand::polynomial(self.chi, self.phase, coeffs.clone())
            }
            FactorParams::PlaneWave { lambda } => {
                FresnelIntegrand::plane_wave(self.chi, self.phase, *lambda)
            }
            FactorParams::Gaussian { rate } => {
                FresnelIntegrand::gaussian(self.chi, self.phase, *rate)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FresnelParams {
    #[serde(default = "yes")]
    suite: bool,
    #[serde(default)]
    integrands: Vec<IntegrandParams>,
    #[serde(default)]
    eps_list: Option<Vec<f64>>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct HarmonicParams {
    a: f64,
    ns: Vec<usize>,
    #[serde(default)]
    grid: Option<GapGrid>,
    #[serde(default)]
    mu: usize,
    #[serde(default)]
    nu: usize,
    #[serde(default)]
    margin: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CentrifugalParams {
    u: f64,
    a: f64,
    ns: Vec<usize>,
    #[serde(default)]
    grid: Option<GapGrid>,
    #[serde(default)]
    tolerance: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeParams {
    lambda: f64,
    x: f64,
    #[serde(default)]
    ts: Option<Vec<f64>>,
}

/// Tabular result with scalar summary fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub summary: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    fn new(columns: &[&str]) -> Self {
        Self {
            summary: BTreeMap::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.summary.insert(key.to_string(), v);
    }
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{v}")))
}

fn gap_report(r: &GapReport) -> Report {
    let mut rep = Report::new(&["n", "gap"]);
    for (n, g) in r.ns.iter().zip(&r.gaps) {
        rep.rows.push(vec![json!(n), num(*g)]);
    }
    rep.set("fitted_rate", num(r.fitted_rate));
    rep.set("fit_residual", num(r.fit.residual));
    rep.set("mu", json!(r.derivative_orders.0));
    rep.set("nu", json!(r.derivative_orders.1));
    if let Some(c) = r.superoscillation_criterion {
        rep.set("superoscillation_criterion", json!(c));
    }
    rep
}

fn run_synth(p: &SynthParams, seed: u64) -> Result<Report> {
    let params = SuperoscParams::new(p.a, p.n)?;
    if !(p.x_max > p.x_min) || p.nx < 2 {
        return Err(Error::invalid("synth needs x_max > x_min and nx >= 2"));
    }
    let mut rep = Report::new(&["x", "re_f", "im_f", "abs_gap", "bound"]);
    for k in 0..p.nx {
        let x = p.x_min + (p.x_max - p.x_min) * k as f64 / (p.nx - 1) as f64;
        let z = Complex64::new(x, 0.0);
        let f = evaluate_product(z, &params);
        let gap = (f - Complex64::new(0.0, p.a * x).exp()).norm();
        rep.rows.push(vec![
            num(x),
            num(f.re),
            num(f.im),
            num(gap),
            num(gap_bound(z, &params)),
        ]);
    }
    if p.random_checks > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut violations = 0usize;
        for _ in 0..p.random_checks {
            let r = 5.0 * rng.gen::<f64>().sqrt();
            let z = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
            let f = evaluate_product(z, &params);
            let gap = (f - (Complex64::i() * p.a * z).exp()).norm();
            if gap > gap_bound(z, &params) {
                violations += 1;
            }
        }
        rep.set("random_checks", json!(p.random_checks));
        rep.set("bound_violations", json!(violations));
    }
    Ok(rep)
}

/// Runs a parsed configuration. `seed` overrides the configured seed.
pub fn run_experiment(cfg: &ExperimentConfig, seed: u64) -> Result<Report> {
    match cfg.experiment {
        Experiment::Synth => run_synth(&cfg.params()?, seed),
        Experiment::Evolve => {
            let p: EvolveParams = cfg.params()?;
            let spec = p.dispersion.build()?;
            let grid = p.grid.unwrap_or_default();
            grid.validate()?;
            Ok(gap_report(&supershift_gap(
                &spec, p.a, &grid, &p.ns, p.mu, p.nu,
            )?))
        }
        Experiment::FresnelVerify => {
            let p: FresnelParams = cfg.params()?;
            let mut suite = p
                .integrands
                .iter()
                .map(|i| i.build())
                .collect::<Result<Vec<_>>>()?;
            if p.suite {
                suite.extend(reference_suite()?);
            }
            if suite.is_empty() {
                return Err(Error::invalid("no integrands to verify"));
            }
            let eps = p.eps_list.unwrap_or_else(default_eps_list);
            let r = verify_suite(&suite, &eps)?;
            let mut rep = Report::new(&[
                "description",
                "contour_re",
                "contour_im",
                "oracle_re",
                "oracle_im",
                "relative_deviation",
                "angle_deviation",
            ]);
            for e in &r.entries {
                rep.rows.push(vec![
                    json!(e.description),
                    num(e.contour.re),
                    num(e.contour.im),
                    num(e.oracle.re),
                    num(e.oracle.im),
                    num(e.relative_deviation),
                    num(e.angle_deviation),
                ]);
            }
            rep.set("max_oracle_deviation", num(r.max_oracle_deviation));
            rep.set("max_angle_deviation", num(r.max_angle_deviation));
            Ok(rep)
        }
        Experiment::Harmonic => {
            let p: HarmonicParams = cfg.params()?;
            let spec = HarmonicSpec {
                margin: p.margin.unwrap_or(HarmonicSpec::default().margin),
            };
            let grid = p.grid.unwrap_or(GapGrid {
                t_min: 0.2,
                t_max: 1.3,
                nt: 12,
                x_min: -2.0,
                x_max: 2.0,
                nx: 41,
            });
            Ok(gap_report(&supershift_gap_harmonic(
                p.a, &grid, &p.ns, p.mu, p.nu, &spec,
            )?))
        }
        Experiment::Centrifugal => {
            let p: CentrifugalParams = cfg.params()?;
            let spec = CentrifugalSpec::new(p.u)?;
            let grid = p.grid.unwrap_or(GapGrid {
                t_min: 0.5,
                t_max: 1.5,
                nt: 6,
                x_min: 0.5,
                x_max: 2.0,
                nx: 7,
            });
            let mut q = crate::fresnel::QuadratureConfig::default();
            if let Some(t) = p.tolerance {
                q.tolerance = t;
            }
            q.validate()?;
            Ok(gap_report(&supershift_gap_centrifugal(
                &spec, p.a, &grid, &p.ns, &q,
            )?))
        }
        Experiment::Probe => {
            let p: ProbeParams = cfg.params()?;
            let ts = p.ts.unwrap_or_else(|| default_probe_times(10));
            let r = singularity_probe(p.lambda, p.x, &ts)?;
            let mut rep = Report::new(&["t", "cos_abs", "magnitude"]);
            for k in 0..r.ts.len() {
                rep.rows
                    .push(vec![num(r.ts[k]), num(r.cos_abs[k]), num(r.magnitudes[k])]);
            }
            rep.set("fitted_exponent", num(r.fitted_exponent));
            rep.set("blow_up", json!(r.blow_up));
            Ok(rep)
        }
    }
}

fn unix_time() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn meta(cfg: &ExperimentConfig, seed: u64) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert(
        "experiment".into(),
        serde_json::to_value(cfg.experiment).unwrap_or(Value::Null),
    );
    m.insert("seed".into(), json!(seed));
    m.insert(
        "parameters".into(),
        serde_json::to_value(&cfg.parameters).unwrap_or(Value::Null),
    );
    m.insert("timestamp".into(), json!(unix_time()));
    m
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(f) if !(n.is_i64() || n.is_u64()) => format!("{f:.16e}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders a report. The timestamp occupies a line of its own in both formats.
pub fn render(
    cfg: &ExperimentConfig,
    seed: u64,
    rep: &Report,
    format: OutputFormat,
) -> Result<Vec<u8>> {
    let m = meta(cfg, seed);
    match format {
        OutputFormat::Json => {
            let v = json!({ "meta": m, "results": rep });
            let mut s =
                serde_json::to_string_pretty(&v).map_err(|e| Error::invalid(e.to_string()))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        OutputFormat::Csv => {
            let mut out = Vec::new();
            for (k, v) in &m {
                let text = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                writeln!(out, "# {k} = {text}").map_err(|e| Error::invalid(e.to_string()))?;
            }
            for (k, v) in &rep.summary {
                writeln!(out, "# {k} = {}", csv_cell(v))
                    .map_err(|e| Error::invalid(e.to_string()))?;
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&rep.columns)
                .map_err(|e| Error::invalid(e.to_string()))?;
            for row in &rep.rows {
                w.write_record(row.iter().map(csv_cell))
                    .map_err(|e| Error::invalid(e.to_string()))?;
            }
            w.into_inner().map_err(|e| Error::invalid(e.to_string()))
        }
    }
}

/// Parses arguments, runs the experiment and writes the output. Returns the
/// process exit code: 0 on success, 1 for invalid input, 2 for numerical failure.
pub fn main_with_args(args: Args) -> i32 {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return 1;
        }
    };
    let cfg = match ExperimentConfig::from_toml(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let seed = args.seed.unwrap_or(cfg.seed);
    let format = args.format.unwrap_or(cfg.output_format);
    let rep = match run_experiment(&cfg, seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_validation() { 1 } else { 2 };
        }
    };
    let bytes = match render(&cfg, seed, &rep, format) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let path = args
        .output
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
    let written = match &path {
        Some(p) => std::fs::write(p, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return 1;
    }
    0
}
