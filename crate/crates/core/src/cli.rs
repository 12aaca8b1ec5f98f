//! The `spiralmap` command-line frontend.
//!
//! Settings are resolved as defaults, then the JSON file given by `--config`,
//! then flags. The resolved [`RunConfig`] is echoed to stderr and embedded in
//! every output, either inline (JSON) or as a `<file>.config.json` sidecar.
//!
//! Exit codes: 0 when every check passed, 1 when a certified claim failed,
//! 2 on invalid input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use log::warn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::construct::{select_a, MappingInstance};
use crate::error::Error;
use crate::kernel::{hg_eval, psi, ConstructionParams, DiskPoint};
use crate::verify::dilatation::dilatation_sup;
use crate::verify::eta::eta_estimate;
use crate::verify::grid::{evaluate_grid, GridSpec, StripRegion};
use crate::verify::radial::radial_trace;
use crate::verify::report::{finite, VerificationReport};
use crate::verify::suite::{run_suite, validate_filter, SuiteOptions};

/// Relative noise band of the `eta` monotonicity check.
pub const ETA_NOISE_BAND: f64 = 0.05;
const PNG_SIZE: u32 = 800;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Construct,
    #[default]
    Verify,
    Eta,
    Grid,
    Curve,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
pub enum Format {
    #[default]
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "json")]
    Json,
    #[serde(rename = "png-pointcloud", alias = "png")]
    #[value(name = "png", alias = "png-pointcloud")]
    Png,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub alpha: f64,
    pub eps: f64,
    pub k: f64,
    /// When absent, `A` is selected by the construction search.
    #[serde(rename = "A")]
    pub a: Option<f64>,
    pub b: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            alpha: 0.3,
            eps: 0.1,
            k: 0.5,
            a: None,
            b: std::f64::consts::FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub angular_count: usize,
    pub m_max: u32,
    pub interior_count: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = GridSpec::default();
        Self {
            angular_count: g.angular_count,
            m_max: g.m_max,
            interior_count: g.interior_count,
        }
    }
}

/// Strip settings. `A` lists the left edges used by `eta`; `x_max` defaults
/// to `1000 A`; `sample_count` is the estimator budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StripConfig {
    #[serde(rename = "A")]
    pub a_values: Vec<f64>,
    pub x_max: Option<f64>,
    pub sample_count: usize,
}

impl Default for StripConfig {
    fn default() -> Self {
        Self {
            a_values: Vec::new(),
            x_max: None,
            sample_count: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveConfig {
    pub radii: Vec<f64>,
    pub samples: usize,
}

impl Default for CurveConfig {
    fn default() -> Self {
        Self {
            radii: vec![0.5, 0.9, 0.99],
            samples: 4096,
        }
    }
}

/// Everything one invocation needs. The JSON config file uses these field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: ParamsConfig,
    pub grid: GridConfig,
    pub strip: StripConfig,
    pub curve: CurveConfig,
    pub seed: u64,
    /// Pair count of the injectivity and separation scans.
    pub pairs: usize,
    pub only: Option<String>,
    /// Instance file written by `construct`; replaces `params` when given.
    pub instance: Option<PathBuf>,
    /// Bundle read by `report`; defaults to `<output_dir>/verify_bundle.json`.
    pub bundle: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: CommandKind::default(),
            params: ParamsConfig::default(),
            grid: GridConfig::default(),
            strip: StripConfig::default(),
            curve: CurveConfig::default(),
            seed: 42,
            pairs: 10_000,
            only: None,
            instance: None,
            bundle: None,
            output_dir: PathBuf::from("out"),
            format: Format::default(),
        }
    }
}

impl RunConfig {
    pub fn grid_spec(&self) -> Result<GridSpec, Error> {
        GridSpec::new(
            self.grid.angular_count,
            self.grid.m_max,
            self.grid.interior_count,
            self.seed,
        )
    }

    pub fn suite_options(&self) -> Result<SuiteOptions, Error> {
        Ok(SuiteOptions {
            grid: self.grid_spec()?,
            pairs: self.pairs,
            eta_budget: self.strip.sample_count,
            strip_x_max: self.strip.x_max,
            seed: self.seed,
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "spiralmap", version, about = "Bounded univalent harmonic map with unbounded analytic part")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: CommandKind,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Shift A; repeat to give several values to `eta`.
    #[arg(long = "A")]
    pub a: Vec<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub grid_angular: Option<usize>,
    #[arg(long)]
    pub grid_mmax: Option<u32>,
    #[arg(long)]
    pub grid_interior: Option<usize>,
    #[arg(long)]
    pub strip_xmax: Option<f64>,
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Evaluation budget of the stability modulus estimator.
    #[arg(long)]
    pub eta_budget: Option<usize>,
    #[arg(long)]
    pub only: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    /// Circle radius for `curve`; repeatable.
    #[arg(long = "r")]
    pub radii: Vec<f64>,
    #[arg(long)]
    pub curve_samples: Option<usize>,
}

/// Failure of a command, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Invalid(String),
    /// Exit code 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SearchExhausted { .. } | Error::DegenerateDenominator { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{}: {e}", path.display()))
}

/// Merges defaults, the config file and flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            serde_json::from_str::<RunConfig>(&text).map_err(|e| io_err(path, e))?
        }
        None => RunConfig::default(),
    };
    cfg.command = cli.command;
    let p = &mut cfg.params;
    p.k = cli.k.unwrap_or(p.k);
    p.eps = cli.eps.unwrap_or(p.eps);
    p.alpha = cli.alpha.unwrap_or(p.alpha);
    p.b = cli.b.unwrap_or(p.b);
    if cli.command == CommandKind::Eta {
        if !cli.a.is_empty() {
            cfg.strip.a_values = cli.a.clone();
        }
    } else {
        match cli.a.as_slice() {
            [] => {}
            [a] => cfg.params.a = Some(*a),
            _ => return Err(CliError::Invalid("--A given more than once; only eta accepts a list".into())),
        }
    }
    cfg.seed = cli.seed.unwrap_or(cfg.seed);
    cfg.grid.angular_count = cli.grid_angular.unwrap_or(cfg.grid.angular_count);
    cfg.grid.m_max = cli.grid_mmax.unwrap_or(cfg.grid.m_max);
    cfg.grid.interior_count = cli.grid_interior.unwrap_or(cfg.grid.interior_count);
    if cli.strip_xmax.is_some() {
        cfg.strip.x_max = cli.strip_xmax;
    }
    cfg.strip.sample_count = cli.eta_budget.unwrap_or(cfg.strip.sample_count);
    cfg.pairs = cli.pairs.unwrap_or(cfg.pairs);
    if cli.only.is_some() {
        cfg.only = cli.only.clone();
    }
    if cli.instance.is_some() {
        cfg.instance = cli.instance.clone();
    }
    if cli.bundle.is_some() {
        cfg.bundle = cli.bundle.clone();
    }
    cfg.output_dir = cli.out.clone().unwrap_or(cfg.output_dir);
    cfg.format = cli.format.unwrap_or(cfg.format);
    if !cli.radii.is_empty() {
        cfg.curve.radii = cli.radii.clone();
    }
    cfg.curve.samples = cli.curve_samples.unwrap_or(cfg.curve.samples);
    Ok(cfg)
}

/// The instance file written by `construct` and read back through `--instance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub alpha: f64,
    pub eps: f64,
    pub k: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "A0")]
    pub a0: f64,
    #[serde(rename = "K")]
    pub big_k: f64,
    pub b: f64,
    pub dilatation_sup_estimate: f64,
    pub selection_trace: Vec<(f64, f64)>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
}

impl InstanceFile {
    pub fn new(inst: &MappingInstance, config: &RunConfig) -> Self {
        let p = &inst.params;
        Self {
            alpha: p.alpha(),
            eps: p.eps(),
            k: p.k(),
            a: p.a(),
            a0: p.a0(),
            big_k: p.max_dilatation(),
            b: p.b(),
            dilatation_sup_estimate: finite(inst.dilatation_sup_estimate),
            selection_trace: inst.selection_trace.iter().map(|&(a, s)| (a, finite(s))).collect(),
            warnings: inst.warnings.clone(),
            config: Some(config.clone()),
        }
    }

    pub fn params(&self) -> Result<ConstructionParams, Error> {
        ConstructionParams::new(self.alpha, self.eps, self.k, self.a)?.with_b(self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleSummary {
    pub passed_all: bool,
    pub params: ConstructionParams,
    pub seed: u64,
    pub version: String,
}

/// The JSON document written by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub reports: Vec<VerificationReport>,
    pub summary: BundleSummary,
    pub config: RunConfig,
}

/// Shortest round-trip decimal form, `.` separator, exponent for extreme magnitudes.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn sanitize(mut r: VerificationReport) -> VerificationReport {
    r.extremum = finite(r.extremum);
    r.tolerance = finite(r.tolerance);
    r.witness.iter_mut().for_each(|w| *w = finite(*w));
    r
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Invalid(e.to_string()))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(OsString::from).unwrap_or_default();
    name.push(".config.json");
    path.with_file_name(name)
}

/// Writes `path` and its config sidecar.
fn write_with_sidecar(path: &Path, bytes: &[u8], cfg: &RunConfig) -> Result<(), CliError> {
    write_file(path, bytes)?;
    write_json(&sidecar_path(path), cfg)
}

fn csv_table(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt_f64).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Rasterizes point series into a PNG with a viewport padded 5% around the data.
pub fn point_cloud_png(series: &[Vec<(f64, f64)>]) -> Result<Vec<u8>, CliError> {
    const PALETTE: [[u8; 3]; 4] = [[20, 20, 20], [200, 40, 40], [40, 110, 200], [40, 160, 60]];
    let pts = series.iter().flatten().filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x0 <= x1 && y0 <= y1) {
        return Err(CliError::Invalid("no finite points to draw".into()));
    }
    let (w, h) = ((x1 - x0).max(1e-300), (y1 - y0).max(1e-300));
    let (x0, y0, w, h) = (x0 - 0.05 * w, y0 - 0.05 * h, 1.1 * w, 1.1 * h);
    let mut img = image::RgbImage::from_pixel(PNG_SIZE, PNG_SIZE, image::Rgb([255, 255, 255]));
    let last = (PNG_SIZE - 1) as f64;
    for (i, s) in series.iter().enumerate() {
        let color = image::Rgb(PALETTE[i % PALETTE.len()]);
        for &(x, y) in s.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
            let px = ((x - x0) / w * last).round() as u32;
            let py = ((1.0 - (y - y0) / h) * last).round() as u32;
            img.put_pixel(px.min(PNG_SIZE - 1), py.min(PNG_SIZE - 1), color);
        }
    }
    let mut bytes = Vec::new();
    img.write_to(&mut std::io::Cursor::new(&mut bytes), image::ImageFormat::Png)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    Ok(bytes)
}

/// Parameters of the run: from `--instance`, from an explicit `A`, or by selection.
/// The second value is the selection result when one was run.
fn resolve_params(cfg: &RunConfig) -> Result<(ConstructionParams, Option<MappingInstance>), CliError> {
    if let Some(path) = &cfg.instance {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let file: InstanceFile = serde_json::from_str(&text).map_err(|e| io_err(path, e))?;
        return Ok((file.params()?, None));
    }
    let p = &cfg.params;
    match p.a {
        Some(a) => Ok((ConstructionParams::new(p.alpha, p.eps, p.k, a)?.with_b(p.b)?, None)),
        None => {
            let mut inst = select_a(p.k, p.eps, p.alpha, &cfg.grid_spec()?)?;
            inst.params = inst.params.with_b(p.b)?;
            Ok((inst.params, Some(inst)))
        }
    }
}

pub fn cmd_construct(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let grid = cfg.grid_spec()?;
    let (params, selected) = resolve_params(cfg)?;
    let (inst, report) = match selected {
        Some(inst) => (inst, None),
        None => {
            let r = dilatation_sup(&params, &grid)?;
            let inst = MappingInstance {
                params,
                dilatation_sup_estimate: r.extremum,
                selection_trace: vec![(params.a(), r.extremum)],
                warnings: Vec::new(),
            };
            (inst, Some(r))
        }
    };
    let path = cfg.output_dir.join("instance.json");
    write_json(&path, &InstanceFile::new(&inst, cfg))?;
    let mut lines = vec![format!(
        "A = {}, sup|omega| = {:.6e}, K = {}; wrote {}",
        fmt_f64(params.a()),
        inst.dilatation_sup_estimate,
        fmt_f64(params.max_dilatation()),
        path.display()
    )];
    if let Some(r) = report {
        lines.push(r.summary_line());
        if !r.passed {
            write_json(&cfg.output_dir.join("dilatation_report.json"), &sanitize(r.clone()))?;
            return Err(CliError::Failed(format!(
                "{}\ndilatation_sup failed: sup|omega| = {:.6e} > k = {}",
                lines.join("\n"),
                r.extremum,
                params.k()
            )));
        }
    }
    Ok(lines)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let opts = cfg.suite_options()?;
    if let Some(name) = &cfg.only {
        validate_filter(name)?;
    }
    let (params, _) = resolve_params(cfg)?;
    let reports: Vec<VerificationReport> = run_suite(&params, &opts, cfg.only.as_deref())?
        .into_iter()
        .map(sanitize)
        .collect();
    let passed_all = reports.iter().all(|r| r.passed);
    let bundle = ReportBundle {
        summary: BundleSummary {
            passed_all,
            params,
            seed: cfg.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        reports,
        config: cfg.clone(),
    };
    let path = cfg.output_dir.join("verify_bundle.json");
    write_json(&path, &bundle)?;
    let mut lines: Vec<String> = bundle.reports.iter().map(|r| r.summary_line()).collect();
    lines.push(format!("wrote {}", path.display()));
    match bundle.reports.iter().find(|r| !r.passed) {
        Some(r) => Err(CliError::Failed(format!("{}\nfirst failing report: {}", lines.join("\n"), r.name))),
        None => Ok(lines),
    }
}

pub fn cmd_eta(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let a_values: Vec<f64> = match (&cfg.strip.a_values[..], cfg.params.a) {
        ([], Some(a)) => vec![a],
        ([], None) => return Err(CliError::Invalid("eta needs at least one --A value".into())),
        (list, _) => list.to_vec(),
    };
    let mut rows = Vec::with_capacity(a_values.len());
    for &a in &a_values {
        let x_max = cfg.strip.x_max.unwrap_or(1e3 * a);
        let region = StripRegion::new(a, cfg.params.b, x_max, cfg.strip.sample_count, cfg.seed)?;
        let est = eta_estimate(&region, cfg.params.alpha, cfg.strip.sample_count)?;
        if let Some(w) = &est.warning {
            warn!("A = {a}: {w}");
        }
        rows.push((a, est));
    }
    let table = csv_table(
        "A,eta_hat,s_re,s_im,t_re,t_im",
        rows.iter().map(|(a, e)| {
            vec![*a, e.eta_hat, e.witness.0.re, e.witness.0.im, e.witness.1.re, e.witness.1.im]
        }),
    );
    let path = cfg.output_dir.join("eta.csv");
    match cfg.format {
        Format::Json => {
            let json: Vec<_> = rows
                .iter()
                .map(|(a, e)| serde_json::json!({"A": a, "eta_hat": e.eta_hat, "witness": [e.witness.0, e.witness.1]}))
                .collect();
            write_json(
                &cfg.output_dir.join("eta.json"),
                &serde_json::json!({"rows": json, "config": cfg}),
            )?;
        }
        _ => write_with_sidecar(&path, table.as_bytes(), cfg)?,
    }

    let mut lines: Vec<String> = rows
        .iter()
        .map(|(a, e)| format!("A = {}: eta_hat = {:.6e}", fmt_f64(*a), e.eta_hat))
        .collect();
    let mut sorted: Vec<(f64, f64)> = rows.iter().map(|(a, e)| (*a, e.eta_hat)).collect();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let violation = sorted
        .windows(2)
        .find(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1 * (1.0 + ETA_NOISE_BAND));
    if let Some(w) = violation {
        return Err(CliError::Failed(format!(
            "{}\neta_hat increases from A = {} to A = {} beyond the {}% band",
            lines.join("\n"),
            w[0].0,
            w[1].0,
            100.0 * ETA_NOISE_BAND
        )));
    }
    lines.push("eta_hat non-increasing in A".into());
    Ok(lines)
}

pub const GRID_HEADER: &str = "z_re,z_im,S_re,S_im,f_re,f_im,h_re,h_im,g_re,g_im,omega_abs,jacobian";

pub fn cmd_grid(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let grid = cfg.grid_spec()?;
    let (params, _) = resolve_params(cfg)?;
    let bundles = evaluate_grid(&params, &grid)?;
    let path = cfg.output_dir.join("grid.csv");
    let table = csv_table(
        GRID_HEADER,
        bundles.iter().map(|b| {
            vec![
                b.z.re,
                b.z.im,
                b.s.re,
                b.s.im,
                b.f.re,
                b.f.im,
                b.h.re,
                b.h.im,
                b.g.re,
                b.g.im,
                b.omega_abs(),
                b.jacobian,
            ]
        }),
    );
    write_with_sidecar(&path, table.as_bytes(), cfg)?;
    Ok(vec![format!("{} rows; wrote {}", bundles.len(), path.display())])
}

pub fn cmd_curve(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    if let Some(r) = cfg.curve.radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(CliError::Invalid(format!("radius {r} outside (0, 1)")));
    }
    let n = cfg.curve.samples;
    if n < 2 {
        return Err(CliError::Invalid("curve samples must be at least 2".into()));
    }
    let (params, _) = resolve_params(cfg)?;
    let alpha = params.alpha();

    let x_lo = params.a0();
    let x_hi = cfg.strip.x_max.unwrap_or(1e3 * x_lo);
    if !(x_hi > x_lo) {
        return Err(CliError::Invalid(format!("strip x_max = {x_hi} must exceed A0 = {x_lo}")));
    }
    let ratio = (x_hi / x_lo).ln();
    let spiral: Vec<(f64, Complex64)> = (0..n)
        .map(|j| {
            let x = x_lo * (ratio * j as f64 / (n - 1) as f64).exp();
            Ok((x, psi(Complex64::new(x, 0.0), alpha)?))
        })
        .collect::<Result<_, Error>>()?;

    let tau = std::f64::consts::TAU;
    let mut circles: Vec<(f64, f64, Complex64)> = Vec::new();
    for &r in &cfg.curve.radii {
        for j in 0..=n {
            let theta = tau * j as f64 / n as f64;
            circles.push((r, theta, hg_eval(&DiskPoint::polar(1.0 - r, theta)?, &params)?.f));
        }
    }
    let radial = radial_trace(&params, cfg.grid.m_max)?;

    let dir = &cfg.output_dir;
    let mut written = Vec::new();
    match cfg.format {
        Format::Csv => {
            let spiral_csv = csv_table(
                "x,psi_re,psi_im,modulus",
                spiral.iter().map(|(x, p)| vec![*x, p.re, p.im, p.norm()]),
            );
            let circle_csv = csv_table(
                "r,theta,f_re,f_im",
                circles.iter().map(|(r, t, f)| vec![*r, *t, f.re, f.im]),
            );
            let radial_csv = csv_table(
                "m,r,S,h_re,h_im,remainder,envelope",
                radial.iter().map(|t| {
                    vec![t.m as f64, 1.0 - 10f64.powi(-(t.m as i32)), t.s, t.h.re, t.h.im, t.remainder, t.envelope]
                }),
            );
            for (name, body) in [("spiral.csv", spiral_csv), ("circles.csv", circle_csv), ("radial.csv", radial_csv)] {
                let path = dir.join(name);
                write_with_sidecar(&path, body.as_bytes(), cfg)?;
                written.push(path);
            }
        }
        Format::Json => {
            let doc = serde_json::json!({
                "spiral": spiral.iter().map(|(x, p)| serde_json::json!({"x": x, "psi": p})).collect::<Vec<_>>(),
                "circles": circles.iter().map(|(r, t, f)| serde_json::json!({"r": r, "theta": t, "f": f})).collect::<Vec<_>>(),
                "radial": radial.iter().map(|t| serde_json::json!({"m": t.m, "S": t.s, "h": t.h, "remainder": t.remainder, "envelope": t.envelope})).collect::<Vec<_>>(),
                "config": cfg,
            });
            let path = dir.join("curves.json");
            write_json(&path, &doc)?;
            written.push(path);
        }
        Format::Png => {
            let spiral_pts = vec![spiral.iter().map(|(_, p)| (p.re, p.im)).collect()];
            let circle_pts: Vec<Vec<(f64, f64)>> = cfg
                .curve
                .radii
                .iter()
                .map(|&r| circles.iter().filter(|c| c.0 == r).map(|c| (c.2.re, c.2.im)).collect())
                .collect();
            let radial_pts = vec![radial.iter().map(|t| (t.h.re, t.h.im)).collect()];
            for (name, series) in [("spiral.png", spiral_pts), ("circles.png", circle_pts), ("radial.png", radial_pts)] {
                let path = dir.join(name);
                write_with_sidecar(&path, &point_cloud_png(&series)?, cfg)?;
                written.push(path);
            }
        }
    }
    let mut line = String::from("wrote");
    for p in &written {
        let _ = write!(line, " {}", p.display());
    }
    Ok(vec![line])
}

/// Prints the status lines of an existing bundle.
pub fn cmd_report(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let path = cfg
        .bundle
        .clone()
        .unwrap_or_else(|| cfg.output_dir.join("verify_bundle.json"));
    let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    let bundle: ReportBundle = serde_json::from_str(&text).map_err(|e| io_err(&path, e))?;
    let mut lines: Vec<String> = bundle.reports.iter().map(|r| r.summary_line()).collect();
    let passed = bundle.reports.iter().all(|r| r.passed);
    lines.push(format!(
        "{}: {} reports, {}",
        path.display(),
        bundle.reports.len(),
        if passed { "all passed" } else { "FAILED" }
    ));
    if passed {
        Ok(lines)
    } else {
        Err(CliError::Failed(lines.join("\n")))
    }
}

pub fn dispatch(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    match cfg.command {
        CommandKind::Construct => cmd_construct(cfg),
        CommandKind::Verify => cmd_verify(cfg),
        CommandKind::Eta => cmd_eta(cfg),
        CommandKind::Grid => cmd_grid(cfg),
        CommandKind::Curve => cmd_curve(cfg),
        CommandKind::Report => cmd_report(cfg),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = resolve_config(&cli).and_then(|cfg| {
        if let Ok(echo) = serde_json::to_string(&cfg) {
            eprintln!("resolved config: {echo}");
        }
        dispatch(&cfg)
    });
    match outcome {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            0
        }
        Err(e) => {
            match &e {
                CliError::Invalid(m) => eprintln!("error: {m}"),
                CliError::Failed(m) => println!("{m}"),
            }
            e.exit_code()
        }
    }
}
