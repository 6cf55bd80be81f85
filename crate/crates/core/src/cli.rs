//! Configuration and the command pipelines behind the `fhn-isr` binary.
//!
//! Configuration is a flat TOML table. Every key may be overridden by an
//! environment variable `FHN_<KEY>` (upper case, value in TOML syntax or a
//! bare string), and the binary's flags override both.
//!
//! | key | default |
//! |-----|---------|
//! | `profile` | `"desk"` (`"full"` switches `trials`/`horizon` to 200/7500) |
//! | `a`, `b`, `c` | -0.05, 1, 2 |
//! | `epsilon`, `sigma` | 0.02785, 0 |
//! | `dt`, `horizon`, `transient` | 1e-3, 2000, 2000 |
//! | `trials`, `seed`, `workers` | 50, 0, 0 (all cores) |
//! | `sigma_grid` | unset: log grid `sigma_min..sigma_max`, `sigma_points`, plus 0 when `sigma_zero` |
//! | `sigma_min`, `sigma_max`, `sigma_points`, `sigma_zero` | 1e-9, 1e-3, 25, true |
//! | `noise_scale` | `"intensity"` (amplitude = √σ) or `"amplitude"` |
//! | `scheme` | `"stochastic-rk4"` or `"euler-maruyama"` |
//! | `epsilon_list` | 0.02501, 0.02559, 0.0260, 0.0266, 0.027673, 0.02785 |
//! | `basins` | `["fp", "lc"]` |
//! | `fp_ic`, `lc_ic` | [0.001, 0.001], [-0.4, 0.2] |
//! | `epsilon_grid` | unset: `grid_points` values from `grid_min` to `grid_max` |
//! | `grid_min`, `grid_max`, `grid_points` | 0.02505, 0.027815, 20 |
//! | `sn_bracket` | [0.026, 0.029] |
//! | `v_th`, `rearm` | 0.25, 0.0 |
//! | `sample_every` | 1.0 (time between stored states for `simulate`) |
//! | `format`, `out` | `"csv"`, `"out"` |

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::det_analysis::{critical_manifold, fixed_points, hopf_epsilon_origin, Stability};
use crate::error::Error;
use crate::mahalanobis::distances_at;
use crate::model::{ModelParams, PhaseState};
use crate::orbits::{find_stable_cycle, saddle_node_epsilon, BasinLabel};
use crate::sde::{simulate_strided, NoiseStream, Scheme};
use crate::spikes::{
    count_spikes, log_grid, sweep_sigma, u_shape_metric, verify_basins, NoiseScale, SpikeExperiment,
    SweepResult,
};
use crate::ssf::{ssf_cycle, ssf_fixed_point};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENV_PREFIX: &str = "FHN_";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric error: {0}")]
    Numeric(#[from] Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Desk,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub profile: Profile,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub epsilon: f64,
    pub sigma: f64,
    pub dt: f64,
    pub horizon: f64,
    pub transient: f64,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_grid: Option<Vec<f64>>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub sigma_points: usize,
    pub sigma_zero: bool,
    pub noise_scale: NoiseScale,
    pub scheme: Scheme,
    pub epsilon_list: Vec<f64>,
    pub basins: Vec<String>,
    pub fp_ic: [f64; 2],
    pub lc_ic: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_grid: Option<Vec<f64>>,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    pub sn_bracket: [f64; 2],
    pub v_th: f64,
    pub rearm: f64,
    pub sample_every: f64,
    pub format: Format,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            profile: Profile::Desk,
            a: -0.05,
            b: 1.0,
            c: 2.0,
            epsilon: 0.02785,
            sigma: 0.0,
            dt: 1e-3,
            horizon: 2000.0,
            transient: 2000.0,
            trials: 50,
            seed: 0,
            workers: 0,
            sigma_grid: None,
            sigma_min: 1e-9,
            sigma_max: 1e-3,
            sigma_points: 25,
            sigma_zero: true,
            noise_scale: NoiseScale::Intensity,
            scheme: Scheme::StochasticRK4,
            epsilon_list: vec![0.02501, 0.02559, 0.0260, 0.0266, 0.027673, 0.02785],
            basins: vec!["fp".into(), "lc".into()],
            fp_ic: [0.001, 0.001],
            lc_ic: [-0.4, 0.2],
            epsilon_grid: None,
            grid_min: 0.02505,
            grid_max: 0.027815,
            grid_points: 20,
            sn_bracket: [0.026, 0.029],
            v_th: 0.25,
            rearm: 0.0,
            sample_every: 1.0,
            format: Format::Csv,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    /// Parses `text` (if any), then applies `FHN_*` overrides from `env`.
    pub fn load<I>(text: Option<&str>, env: I) -> CliResult<Self>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut table: toml::Table = match text {
            Some(t) => toml::from_str(t).map_err(|e| CliError::Config(e.to_string()))?,
            None => toml::Table::new(),
        };
        for (key, raw) in env {
            let Some(name) = key.strip_prefix(ENV_PREFIX) else {
                continue;
            };
            table.insert(name.to_ascii_lowercase(), parse_env_value(&raw));
        }
        if table.get("profile").and_then(|v| v.as_str()) == Some("full") {
            table.entry("trials").or_insert(toml::Value::Integer(200));
            table.entry("horizon").or_insert(toml::Value::Float(7500.0));
        }
        let cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::load(Some(&text), std::env::vars())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn validate(&self) -> CliResult<()> {
        self.params().map_err(|e| CliError::Config(e.to_string()))?;
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if !(self.dt > 0.0) || !(self.horizon > 0.0) || !(self.transient >= 0.0) {
            return bad("dt and horizon must be > 0, transient >= 0");
        }
        if self.trials == 0 {
            return bad("trials must be >= 1");
        }
        if !(self.rearm < self.v_th) {
            return bad("rearm must be below v_th");
        }
        if !(self.sample_every > 0.0) {
            return bad("sample_every must be > 0");
        }
        for b in &self.basins {
            if b != "fp" && b != "lc" {
                return bad("basins entries must be \"fp\" or \"lc\"");
            }
        }
        if self.sigma_grid.is_none() && !(self.sigma_min > 0.0 && self.sigma_max > self.sigma_min) {
            return bad("need 0 < sigma_min < sigma_max");
        }
        Ok(())
    }

    pub fn params(&self) -> crate::Result<ModelParams> {
        ModelParams::new(self.a, self.b, self.c, self.epsilon, self.sigma)
    }

    pub fn sigma_values(&self) -> Vec<f64> {
        match &self.sigma_grid {
            Some(g) => g.clone(),
            None => log_grid(self.sigma_min, self.sigma_max, self.sigma_points, self.sigma_zero),
        }
    }

    pub fn epsilon_values(&self) -> Vec<f64> {
        match &self.epsilon_grid {
            Some(g) => g.clone(),
            None => {
                let n = self.grid_points;
                (0..n)
                    .map(|i| {
                        if n == 1 {
                            self.grid_min
                        } else {
                            self.grid_min + (self.grid_max - self.grid_min) * i as f64 / (n - 1) as f64
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn basin_ics(&self) -> BTreeMap<BasinLabel, PhaseState> {
        self.basins
            .iter()
            .map(|b| {
                if b == "fp" {
                    (BasinLabel::FixedPointBasin, PhaseState::new(self.fp_ic[0], self.fp_ic[1]))
                } else {
                    (BasinLabel::LimitCycleBasin, PhaseState::new(self.lc_ic[0], self.lc_ic[1]))
                }
            })
            .collect()
    }

    pub fn experiment(&self) -> SpikeExperiment {
        SpikeExperiment {
            trials: self.trials,
            horizon: self.horizon,
            dt: self.dt,
            v_th: self.v_th,
            rearm: self.rearm,
            seed: self.seed,
            scheme: self.scheme,
            noise_scale: self.noise_scale,
        }
    }

    /// Runs `f` on a pool with `workers` threads (0 keeps the global pool).
    pub fn in_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> CliResult<T> {
        if self.workers == 0 {
            return Ok(f());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(pool.install(f))
    }
}

fn parse_env_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("x = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("x"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Files written by a command plus a short human summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("serialisable output");
    write_text(path, &(text + "\n"))
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T], format: Format) -> CliResult<()> {
    match format {
        Format::Json => write_json(path, &rows),
        Format::Csv => {
            let mut w = csv::Writer::from_path(path)
                .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
            for r in rows {
                w.serialize(r).map_err(|e| CliError::Output(e.to_string()))?;
            }
            w.flush().map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

/// `Some(x)` when finite, otherwise `None` so no NaN reaches a file.
fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointRow {
    pub v: f64,
    pub w: f64,
    pub stability: Stability,
    pub trace: f64,
    pub determinant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub epsilon: f64,
    pub fixed_points: Vec<FixedPointRow>,
    pub epsilon_hp: Option<f64>,
    pub epsilon_sn: Option<f64>,
    pub epsilon_sn_error: Option<String>,
    pub fold_lower: f64,
    pub fold_upper: f64,
    pub cycle_period: Option<f64>,
    pub bistable: bool,
}

pub fn analyze(cfg: &RunConfig) -> CliResult<AnalyzeReport> {
    let params = cfg.params().map_err(|e| CliError::Config(e.to_string()))?;
    let fps = fixed_points(&params);
    let m = critical_manifold(&params);
    let cycle = find_stable_cycle(&params);
    let (epsilon_sn, epsilon_sn_error) =
        match saddle_node_epsilon(&params, (cfg.sn_bracket[0], cfg.sn_bracket[1])) {
            Ok(e) => (Some(e), None),
            Err(e) => (None, Some(e.to_string())),
        };
    let bistable = cycle.is_some() && fps.iter().any(|f| f.stability == Stability::Stable);
    Ok(AnalyzeReport {
        epsilon: params.epsilon(),
        fixed_points: fps
            .iter()
            .map(|f| FixedPointRow {
                v: f.location.v,
                w: f.location.w,
                stability: f.stability,
                trace: f.trace,
                determinant: f.determinant,
            })
            .collect(),
        epsilon_hp: hopf_epsilon_origin(&params),
        epsilon_sn,
        epsilon_sn_error,
        fold_lower: m.fold_lower,
        fold_upper: m.fold_upper,
        cycle_period: cycle.map(|c| c.period),
        bistable,
    })
}

pub fn cmd_analyze(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let report = cfg.in_pool(|| analyze(cfg))??;
    ensure_dir(&cfg.out)?;
    let path = cfg.out.join(format!("analyze.{}", cfg.format.extension()));
    match cfg.format {
        Format::Json => write_json(&path, &report)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Kv {
                key: String,
                value: String,
            }
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            let mut rows = vec![
                Kv { key: "epsilon".into(), value: report.epsilon.to_string() },
                Kv { key: "epsilon_hp".into(), value: opt(report.epsilon_hp) },
                Kv { key: "epsilon_sn".into(), value: opt(report.epsilon_sn) },
                Kv { key: "fold_lower".into(), value: report.fold_lower.to_string() },
                Kv { key: "fold_upper".into(), value: report.fold_upper.to_string() },
                Kv { key: "cycle_period".into(), value: opt(report.cycle_period) },
                Kv { key: "bistable".into(), value: report.bistable.to_string() },
            ];
            for (i, f) in report.fixed_points.iter().enumerate() {
                rows.push(Kv {
                    key: format!("fixed_point_{i}"),
                    value: format!("{} {} {:?}", f.v, f.w, f.stability),
                });
            }
            write_rows(&path, &rows, Format::Csv)?;
        }
    }
    Ok(CommandOutput {
        summary: format!(
            "epsilon = {}: bistable = {}, epsilon_hp = {:?}, epsilon_sn = {:?}, period = {:?}",
            report.epsilon, report.bistable, report.epsilon_hp, report.epsilon_sn, report.cycle_period
        ),
        files: vec![path],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsfRow {
    pub epsilon: f64,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub ssf_max_cycle: Option<f64>,
    pub mu_max_cycle: Option<f64>,
    pub error: Option<String>,
}

pub fn ssf_table(cfg: &RunConfig) -> CliResult<Vec<SsfRow>> {
    let base = cfg.params().map_err(|e| CliError::Config(e.to_string()))?;
    let rows = cfg
        .epsilon_values()
        .into_iter()
        .map(|eps| {
            let mut row = SsfRow {
                epsilon: eps,
                lambda1: None,
                lambda2: None,
                ssf_max_cycle: None,
                mu_max_cycle: None,
                error: None,
            };
            let params = match base.with_epsilon(eps) {
                Ok(p) => p,
                Err(e) => {
                    row.error = Some(e.to_string());
                    return row;
                }
            };
            let mut errors = Vec::new();
            match ssf_fixed_point(&params) {
                Ok(s) => {
                    row.lambda1 = finite(s.eigenvalues.0);
                    row.lambda2 = finite(s.eigenvalues.1);
                }
                Err(e) => errors.push(e.to_string()),
            }
            match find_stable_cycle(&params).map(|c| ssf_cycle(&params, &c)) {
                Some(Ok(cs)) => {
                    row.ssf_max_cycle = finite(cs.ssf_max);
                    row.mu_max_cycle = finite(cs.mu_max);
                }
                Some(Err(e)) => errors.push(e.to_string()),
                None => errors.push("no stable limit cycle".into()),
            }
            if !errors.is_empty() {
                row.error = Some(errors.join("; "));
            }
            row
        })
        .collect();
    Ok(rows)
}

pub fn cmd_ssf(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let rows = cfg.in_pool(|| ssf_table(cfg))??;
    ensure_dir(&cfg.out)?;
    let path = cfg.out.join(format!("ssf.{}", cfg.format.extension()));
    write_rows(&path, &rows, cfg.format)?;
    Ok(CommandOutput {
        summary: format!("{} rows", rows.len()),
        files: vec![path],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceRow {
    pub epsilon: f64,
    pub d_fp: Option<f64>,
    pub d_lc: Option<f64>,
    pub d_fp_along_u2: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceTable {
    pub rows: Vec<DistanceRow>,
    /// Linear interpolation of the sign changes of `d_fp - d_lc`.
    pub crossings: Vec<f64>,
}

pub fn distance_table(cfg: &RunConfig) -> CliResult<DistanceTable> {
    let base = cfg.params().map_err(|e| CliError::Config(e.to_string()))?;
    let rows: Vec<DistanceRow> = cfg
        .epsilon_values()
        .into_iter()
        .map(|eps| match base.with_epsilon(eps).and_then(|p| distances_at(&p)) {
            Ok(r) => DistanceRow {
                epsilon: eps,
                d_fp: finite(r.d_fp),
                d_lc: finite(r.d_lc),
                d_fp_along_u2: r.d_fp_along_u2.and_then(finite),
                error: None,
            },
            Err(e) => DistanceRow {
                epsilon: eps,
                d_fp: None,
                d_lc: None,
                d_fp_along_u2: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let crossings = sign_changes(
        &rows
            .iter()
            .filter_map(|r| Some((r.epsilon, r.d_fp? - r.d_lc?)))
            .collect::<Vec<_>>(),
    );
    Ok(DistanceTable { rows, crossings })
}

/// Zeros of a sampled function by linear interpolation between sign changes.
pub fn sign_changes(points: &[(f64, f64)]) -> Vec<f64> {
    points
        .windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .map(|w| {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            x0 + (x1 - x0) * y0 / (y0 - y1)
        })
        .collect()
}

pub fn cmd_distance(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let table = cfg.in_pool(|| distance_table(cfg))??;
    ensure_dir(&cfg.out)?;
    let path = cfg.out.join(format!("distance.{}", cfg.format.extension()));
    write_rows(&path, &table.rows, cfg.format)?;
    let summary = cfg.out.join("distance_summary.json");
    write_json(&summary, &serde_json::json!({ "schema_version": SCHEMA_VERSION, "crossings": table.crossings }))?;
    Ok(CommandOutput {
        summary: format!("{} rows, crossings at {:?}", table.rows.len(), table.crossings),
        files: vec![path, summary],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub mean_n: f64,
    pub stderr_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepManifest {
    pub schema_version: u32,
    pub version: String,
    pub seed: u64,
    pub trials: usize,
    pub horizon: f64,
    pub dt: f64,
    pub v_th: f64,
    pub rearm: f64,
    pub noise_scale: NoiseScale,
    pub scheme: Scheme,
    pub sigma_grid: Vec<f64>,
    pub files: Vec<SweepFileEntry>,
    pub config: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFileEntry {
    pub file: String,
    pub epsilon: f64,
    pub basin: String,
    pub initial_condition: [f64; 2],
    pub has_isr: Option<bool>,
}

pub fn sweep_rows(result: &SweepResult) -> Vec<SweepRow> {
    result
        .sigma_grid
        .iter()
        .enumerate()
        .map(|(i, &sigma)| SweepRow {
            sigma,
            mean_n: result.mean_counts[i],
            stderr_n: result.stderr(i),
        })
        .collect()
}

pub fn version_string() -> String {
    format!("fhn-isr {}", env!("CARGO_PKG_VERSION"))
}

/// Runs every `(ε, basin)` sweep, writing each file as soon as it is done.
pub fn cmd_sweep(cfg: &RunConfig) -> CliResult<CommandOutput> {
    cfg.in_pool(|| run_sweep(cfg))?
}

fn run_sweep(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let base = cfg.params().map_err(|e| CliError::Config(e.to_string()))?;
    let ics = cfg.basin_ics();
    if cfg.epsilon_list.is_empty() || ics.is_empty() {
        return Err(CliError::Config("need at least one epsilon and one basin".into()));
    }
    let grid = cfg.sigma_values();
    let exp = cfg.experiment();
    ensure_dir(&cfg.out)?;
    let mut manifest = SweepManifest {
        schema_version: SCHEMA_VERSION,
        version: version_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        horizon: cfg.horizon,
        dt: cfg.dt,
        v_th: cfg.v_th,
        rearm: cfg.rearm,
        noise_scale: cfg.noise_scale,
        scheme: cfg.scheme,
        sigma_grid: grid.clone(),
        files: Vec::new(),
        config: cfg.to_toml(),
    };
    let manifest_path = cfg.out.join("manifest.json");
    let mut files = Vec::new();
    for &eps in &cfg.epsilon_list {
        let params = base.with_epsilon(eps)?.with_sigma(0.0)?;
        verify_basins(&params, &ics)?;
        for (&basin, &s0) in &ics {
            let result = sweep_sigma(&params, basin, s0, &grid, &exp)?;
            let name = format!("sweep_eps{eps}_{basin}.{}", cfg.format.extension());
            let path = cfg.out.join(&name);
            write_rows(&path, &sweep_rows(&result), cfg.format)?;
            manifest.files.push(SweepFileEntry {
                file: name,
                epsilon: eps,
                basin: basin.to_string(),
                initial_condition: [s0.v, s0.w],
                has_isr: u_shape_metric(&result).ok().map(|m| m.has_isr),
            });
            write_json(&manifest_path, &manifest)?;
            files.push(path);
        }
    }
    files.push(manifest_path);
    Ok(CommandOutput {
        summary: format!("{} sweep files", files.len() - 1),
        files,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathRow {
    pub t: f64,
    pub v: f64,
    pub w: f64,
}

/// One noisy path from the LC-basin initial condition with grid-value
/// `sigma` converted through `noise_scale`.
pub fn cmd_simulate(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let params = cfg.params().map_err(|e| CliError::Config(e.to_string()))?;
    let params = params.with_sigma(cfg.noise_scale.amplitude(cfg.sigma))?;
    let s0 = PhaseState::new(cfg.lc_ic[0], cfg.lc_ic[1]);
    let stride = ((cfg.sample_every / cfg.dt).round() as usize).max(1);
    let mut stream = NoiseStream::new(cfg.seed, 0);
    let path = simulate_strided(&params, s0, cfg.horizon, cfg.dt, &mut stream, cfg.scheme, 1)?;
    let spikes = count_spikes(&path, cfg.v_th, cfg.rearm)?;
    let rows: Vec<PathRow> = path
        .states
        .iter()
        .enumerate()
        .step_by(stride)
        .map(|(i, s)| PathRow {
            t: i as f64 * cfg.dt,
            v: s.v,
            w: s.w,
        })
        .collect();
    ensure_dir(&cfg.out)?;
    let file = cfg.out.join(format!("simulate.{}", cfg.format.extension()));
    write_rows(&file, &rows, cfg.format)?;
    let summary = cfg.out.join("simulate_summary.json");
    write_json(
        &summary,
        &serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "seed": cfg.seed,
            "epsilon": cfg.epsilon,
            "sigma": cfg.sigma,
            "amplitude": params.sigma(),
            "spikes": spikes.count,
            "spike_times": spikes.crossing_times,
        }),
    )?;
    Ok(CommandOutput {
        summary: format!("{} spikes over {} time units", spikes.count, cfg.horizon),
        files: vec![file, summary],
    })
}
