//! Scenario configuration, parameter sweeps, deterministic CSV emission and
//! the self-checking property suite behind the command-line interface.
//!
//! A *scenario* is a flat-key TOML file describing one protocol operating
//! point and the grids to sweep (distances, fluctuation variances). The
//! runners in this module turn a validated scenario into row lists; every
//! row list serializes to a byte-stable CSV (17-significant-digit floats,
//! `.` decimal separator, fixed row order independent of the worker count)
//! accompanied by a column-mapping manifest.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::attack::{
    attack_scenario_rates, estimated_channel, estimated_channel_raw, estimated_observables,
    min_vk, practical_observables, true_channel_for_estimate, BiasFactors, FluctuationKind,
    FluctuationModel,
};
use crate::constellation::{protocol_truncation_deltas, Constellation};
use crate::estimator::{
    calibration_linear_moment_exact, calibration_linear_moment_taylor,
    calibration_quadratic_moment_exact, verify_bias, verify_calibration_bias, MeasurementSetup,
};
use crate::keyrate::{
    gaussian_capacity, holevo_bound, holevo_bound_oracle, mutual_info_mc, symplectic_eigenvalues,
    transmittance_from_distance, ChannelParams, ChannelObservables, CovarianceTriple,
    KeyRateModel, MutualInfoMethod, DEFAULT_GH_NODES, DEFAULT_LOSS_DB_PER_KM,
};
use crate::{Error, Result};

/// Version tag every scenario file must carry.
pub const SCHEMA_VERSION: u32 = 1;

fn default_seed() -> u64 {
    1
}
fn default_kind() -> String {
    "uniform".into()
}
fn default_iab() -> String {
    "discrete".into()
}
fn default_loss() -> f64 {
    DEFAULT_LOSS_DB_PER_KM
}
fn default_max_vk() -> f64 {
    5e-3
}
fn default_gh_nodes() -> usize {
    DEFAULT_GH_NODES
}
fn default_mc_trials() -> usize {
    24
}
fn default_mc_pulses() -> usize {
    100_000
}
fn default_cal_samples() -> usize {
    100
}
fn default_cal_reps() -> usize {
    1_000_000
}

/// Flat-key scenario description, deserialized from TOML. Unknown keys are
/// rejected so typos surface as configuration errors instead of silently
/// falling back to defaults.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Must equal [`SCHEMA_VERSION`].
    pub schema_version: u32,
    /// Identifier used in output file names and CSV rows
    /// (`[A-Za-z0-9_-]+`).
    pub id: String,
    /// `"qpsk"` or `"pcs-qam"`.
    pub constellation: String,
    /// Modulation variance `V_A = 2 <n>` in shot-noise units.
    pub modulation_variance: f64,
    /// Square QAM order (16, 64, 256, ...); `pcs-qam` only.
    #[serde(default)]
    pub qam_order: Option<usize>,
    /// Maxwell-Boltzmann shaping parameter; `pcs-qam` only.
    #[serde(default)]
    pub shaping_nu: Option<f64>,
    /// Excess noise the parties *estimate*; the sweep solves for the true
    /// channel that produces it. Exactly one of the two noise keys may be
    /// set.
    #[serde(default)]
    pub excess_noise_estimated: Option<f64>,
    /// True (practical) excess noise; the sweep derives what the parties
    /// would estimate under the attack.
    #[serde(default)]
    pub excess_noise_practical: Option<f64>,
    /// Reconciliation efficiency `beta` in `(0, 1]`.
    pub reconciliation_efficiency: f64,
    /// Fluctuation variances `V_k` to sweep; must be non-empty.
    pub fluctuation_variances: Vec<f64>,
    /// `"uniform"`, `"two-point"` or `"truncated-gaussian"`.
    #[serde(default = "default_kind")]
    pub fluctuation_kind: String,
    /// Strictly increasing channel lengths in km.
    pub distances_km: Vec<f64>,
    /// Mutual-information rule: `"discrete"` (exact constellation input)
    /// or `"gaussian"` (Gaussian-capacity stand-in).
    #[serde(default = "default_iab")]
    pub iab_variant: String,
    /// Upper bracket for the minimum-fluctuation search.
    #[serde(default = "default_max_vk")]
    pub max_fluctuation_variance: f64,
    /// Base RNG seed for every Monte Carlo element.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Fock-space dimension override (default: rule of thumb from the
    /// largest constellation amplitude).
    #[serde(default)]
    pub dim_override: Option<usize>,
    /// Fiber loss in dB/km.
    #[serde(default = "default_loss")]
    pub loss_db_per_km: f64,
    /// Monte Carlo bias verification: number of independent batches.
    #[serde(default = "default_mc_trials")]
    pub mc_trials: usize,
    /// Monte Carlo bias verification: pulses per batch.
    #[serde(default = "default_mc_pulses")]
    pub mc_pulses_per_trial: usize,
    /// Shot-noise calibration block size `N`.
    #[serde(default = "default_cal_samples")]
    pub mc_calibration_samples: usize,
    /// Number of repeated calibrations averaged in the bias check.
    #[serde(default = "default_cal_reps")]
    pub mc_calibration_reps: usize,
    /// Gauss-Hermite node count for the discrete mutual information.
    #[serde(default = "default_gh_nodes")]
    pub gh_nodes: usize,
}

/// Which of the two excess-noise parameters the config pins down.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseAnchor {
    /// The parties' estimate is fixed; the true channel follows from it.
    Estimated(f64),
    /// The true channel is fixed; the estimate follows from it.
    Practical(f64),
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ScenarioConfig {
    /// Parse and validate a scenario from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| cfg_err(format!("invalid scenario TOML: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Read, parse and validate a scenario file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// The pinned excess-noise parameter.
    pub fn noise_anchor(&self) -> NoiseAnchor {
        match (self.excess_noise_estimated, self.excess_noise_practical) {
            (Some(e), None) => NoiseAnchor::Estimated(e),
            (None, Some(p)) => NoiseAnchor::Practical(p),
            // validate() rules the other arms out
            _ => unreachable!("validated config has exactly one noise key"),
        }
    }

    /// Full validation; every failure is a configuration error.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(cfg_err(format!(
                "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.id.is_empty()
            || !self
                .id
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
        {
            return Err(cfg_err(format!(
                "id must be non-empty and use only [A-Za-z0-9_-], got {:?}",
                self.id
            )));
        }
        match self.constellation.as_str() {
            "qpsk" => {
                if self.qam_order.is_some() || self.shaping_nu.is_some() {
                    return Err(cfg_err(
                        "qam_order / shaping_nu only apply to constellation = \"pcs-qam\"",
                    ));
                }
            }
            "pcs-qam" => {
                if self.qam_order.is_none() || self.shaping_nu.is_none() {
                    return Err(cfg_err(
                        "constellation = \"pcs-qam\" requires qam_order and shaping_nu",
                    ));
                }
            }
            other => {
                return Err(cfg_err(format!(
                    "unknown constellation {other:?} (expected \"qpsk\" or \"pcs-qam\")"
                )))
            }
        }
        if !(self.modulation_variance > 0.0) || !self.modulation_variance.is_finite() {
            return Err(cfg_err(format!(
                "modulation_variance must be positive, got {}",
                self.modulation_variance
            )));
        }
        match (self.excess_noise_estimated, self.excess_noise_practical) {
            (Some(_), Some(_)) => {
                return Err(cfg_err(
                    "set exactly one of excess_noise_estimated / excess_noise_practical, not both",
                ))
            }
            (None, None) => {
                return Err(cfg_err(
                    "set exactly one of excess_noise_estimated / excess_noise_practical",
                ))
            }
            (Some(x), None) | (None, Some(x)) => {
                if !(x >= 0.0) || !x.is_finite() {
                    return Err(cfg_err(format!("excess noise must be >= 0, got {x}")));
                }
            }
        }
        if !(self.reconciliation_efficiency > 0.0 && self.reconciliation_efficiency <= 1.0) {
            return Err(cfg_err(format!(
                "reconciliation_efficiency must be in (0, 1], got {}",
                self.reconciliation_efficiency
            )));
        }
        let kind = FluctuationKind::from_str(&self.fluctuation_kind)
            .map_err(|e| cfg_err(e.to_string()))?;
        if self.fluctuation_variances.is_empty() {
            return Err(cfg_err("fluctuation_variances must not be empty"));
        }
        for &vk in &self.fluctuation_variances {
            FluctuationModel::new(kind, vk)
                .map_err(|e| cfg_err(format!("fluctuation_variances entry {vk}: {e}")))?;
        }
        if self.distances_km.is_empty() {
            return Err(cfg_err("distances_km must not be empty"));
        }
        for w in self.distances_km.windows(2) {
            if !(w[1] > w[0]) {
                return Err(cfg_err(format!(
                    "distances_km must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        for &d in &self.distances_km {
            if !(d >= 0.0) || !d.is_finite() {
                return Err(cfg_err(format!("distances_km entries must be >= 0, got {d}")));
            }
        }
        if self.iab_variant != "discrete" && self.iab_variant != "gaussian" {
            return Err(cfg_err(format!(
                "iab_variant must be \"discrete\" or \"gaussian\", got {:?}",
                self.iab_variant
            )));
        }
        if !(self.max_fluctuation_variance > 0.0 && self.max_fluctuation_variance < 1.0) {
            return Err(cfg_err(format!(
                "max_fluctuation_variance must be in (0, 1), got {}",
                self.max_fluctuation_variance
            )));
        }
        if !(self.loss_db_per_km > 0.0) || !self.loss_db_per_km.is_finite() {
            return Err(cfg_err(format!(
                "loss_db_per_km must be positive, got {}",
                self.loss_db_per_km
            )));
        }
        if self.gh_nodes < 2 {
            return Err(cfg_err("gh_nodes must be at least 2"));
        }
        if self.mc_trials < 2 {
            return Err(cfg_err("mc_trials must be at least 2"));
        }
        if self.mc_pulses_per_trial < 2 {
            return Err(cfg_err("mc_pulses_per_trial must be at least 2"));
        }
        if self.mc_calibration_samples < 4 {
            return Err(cfg_err("mc_calibration_samples must be at least 4"));
        }
        if self.mc_calibration_reps < 2 {
            return Err(cfg_err("mc_calibration_reps must be at least 2"));
        }
        Ok(())
    }
}

/// A validated scenario with its protocol objects built and ready to run.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub kind: FluctuationKind,
    pub model: KeyRateModel,
}

impl Scenario {
    /// Build the constellation and key-rate model described by `config`.
    pub fn from_config(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let constellation = match config.constellation.as_str() {
            "qpsk" => Constellation::qpsk(config.modulation_variance),
            "pcs-qam" => Constellation::pcs_qam(
                config.qam_order.expect("validated"),
                config.shaping_nu.expect("validated"),
                config.modulation_variance,
            ),
            _ => unreachable!("validated config"),
        }
        .map_err(|e| cfg_err(format!("cannot build constellation: {e}")))?;
        let method = match config.iab_variant.as_str() {
            "discrete" => MutualInfoMethod::Discrete { nodes: config.gh_nodes },
            _ => MutualInfoMethod::GaussianCapacity,
        };
        let model = KeyRateModel::new(
            constellation,
            config.reconciliation_efficiency,
            method,
            config.dim_override,
        )
        .map_err(|e| cfg_err(format!("cannot build key-rate model: {e}")))?;
        let kind = FluctuationKind::from_str(&config.fluctuation_kind).expect("validated");
        Ok(Self { config, kind, model })
    }

    /// Load a scenario file and build it.
    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_config(ScenarioConfig::from_path(path)?)
    }
}

/// Run `f` on a dedicated rayon pool of `jobs` threads (0 = default pool).
fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot build thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

/// 17-significant-digit float formatting used in every CSV cell; this
/// round-trips `f64` exactly and is byte-stable across platforms.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A row type that knows its CSV header and field encoding.
pub trait CsvRecord {
    /// Column names, in emission order.
    fn header() -> &'static [&'static str];
    /// One human-readable sentence per column, aligned with [`header`].
    ///
    /// [`header`]: CsvRecord::header
    fn column_docs() -> &'static [&'static str];
    /// Encoded cells for this row, aligned with the header.
    fn fields(&self) -> Vec<String>;
}

/// Serialize rows to CSV text (UTF-8, `\n` line ends, trailing newline).
pub fn csv_string<R: CsvRecord>(rows: &[R]) -> String {
    let mut out = String::new();
    out.push_str(&R::header().join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.fields().join(","));
        out.push('\n');
    }
    out
}

/// Write rows as CSV to `path`.
pub fn write_csv<R: CsvRecord>(path: &Path, rows: &[R]) -> Result<()> {
    std::fs::write(path, csv_string(rows))?;
    Ok(())
}

/// Write the flat-key TOML manifest mapping CSV columns to meanings.
pub fn write_column_manifest<R: CsvRecord>(
    path: &Path,
    csv_file: &str,
    scenario_id: &str,
) -> Result<()> {
    let header = R::header();
    let docs = R::column_docs();
    debug_assert_eq!(header.len(), docs.len());
    let mut out = String::new();
    out.push_str(&format!("schema_version = {SCHEMA_VERSION}\n"));
    out.push_str(&format!("file = {csv_file:?}\n"));
    out.push_str(&format!("scenario_id = {scenario_id:?}\n"));
    out.push_str("float_format = \"%.16e\"\n");
    let quoted: Vec<String> = header.iter().map(|h| format!("{h:?}")).collect();
    out.push_str(&format!("columns = [{}]\n", quoted.join(", ")));
    for (name, doc) in header.iter().zip(docs) {
        out.push_str(&format!("col_{name} = {doc:?}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// One evaluated sweep cell (distance x fluctuation variance).
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub scenario_id: String,
    pub distance_km: f64,
    pub fluctuation_variance: f64,
    /// True channel transmittance (set by the distance).
    pub transmittance_practical: f64,
    /// True channel excess noise.
    pub excess_noise_practical: f64,
    /// Transmittance the parties estimate under the attack.
    pub transmittance_estimated: f64,
    /// Excess noise the parties estimate (negative values mark the row
    /// infeasible: the stale normalization pushed the estimate below zero).
    pub excess_noise_estimated: f64,
    pub mutual_info_estimated: f64,
    pub holevo_estimated: f64,
    /// Rate the parties believe they achieve.
    pub rate_estimated: f64,
    pub mutual_info_practical: f64,
    pub holevo_practical: f64,
    /// Rate the true channel actually supports.
    pub rate_practical: f64,
    /// `"ok"` or `"infeasible"`.
    pub status: String,
}

impl CsvRecord for SweepRow {
    fn header() -> &'static [&'static str] {
        &[
            "scenario_id",
            "distance_km",
            "fluctuation_variance",
            "transmittance_practical",
            "excess_noise_practical",
            "transmittance_estimated",
            "excess_noise_estimated",
            "mutual_info_estimated",
            "holevo_estimated",
            "rate_estimated",
            "mutual_info_practical",
            "holevo_practical",
            "rate_practical",
            "status",
        ]
    }

    fn column_docs() -> &'static [&'static str] {
        &[
            "Identifier of the scenario configuration that produced the row.",
            "Channel length in kilometres.",
            "Variance V_k of the local-oscillator intensity factor.",
            "True channel transmittance implied by the distance and fiber loss.",
            "True channel excess noise in shot-noise units at the channel input.",
            "Transmittance the parties estimate under the stale calibration.",
            "Excess noise the parties estimate; negative values mark an infeasible row.",
            "Mutual information (bits/symbol) evaluated on the estimated channel.",
            "Holevo bound (bits/symbol) evaluated from the estimated observables.",
            "Asymptotic key rate the parties believe they achieve (bits/symbol).",
            "Mutual information (bits/symbol) evaluated on the true channel.",
            "Holevo bound (bits/symbol) evaluated from the true observables.",
            "Asymptotic key rate the true channel actually supports (bits/symbol).",
            "Row status: ok, or infeasible when no physical estimated channel exists.",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.scenario_id.clone(),
            fmt_float(self.distance_km),
            fmt_float(self.fluctuation_variance),
            fmt_float(self.transmittance_practical),
            fmt_float(self.excess_noise_practical),
            fmt_float(self.transmittance_estimated),
            fmt_float(self.excess_noise_estimated),
            fmt_float(self.mutual_info_estimated),
            fmt_float(self.holevo_estimated),
            fmt_float(self.rate_estimated),
            fmt_float(self.mutual_info_practical),
            fmt_float(self.holevo_practical),
            fmt_float(self.rate_practical),
            self.status.clone(),
        ]
    }
}

fn sweep_cell(scenario: &Scenario, d_km: f64, vk: f64) -> Result<SweepRow> {
    let cfg = &scenario.config;
    let model = &scenario.model;
    let va = model.constellation().modulation_variance();
    let id = cfg.id.clone();
    match cfg.noise_anchor() {
        NoiseAnchor::Estimated(xi_e) => {
            let sc = attack_scenario_rates(model, d_km, cfg.loss_db_per_km, xi_e, vk)?;
            Ok(SweepRow {
                scenario_id: id,
                distance_km: d_km,
                fluctuation_variance: vk,
                transmittance_practical: sc.true_channel.transmittance,
                excess_noise_practical: sc.true_channel.excess_noise,
                transmittance_estimated: sc.estimated_channel.transmittance,
                excess_noise_estimated: sc.estimated_channel.excess_noise,
                mutual_info_estimated: sc.estimated.mutual_info,
                holevo_estimated: sc.estimated.holevo,
                rate_estimated: sc.estimated.rate,
                mutual_info_practical: sc.practical.mutual_info,
                holevo_practical: sc.practical.holevo,
                rate_practical: sc.practical.rate,
                status: "ok".into(),
            })
        }
        NoiseAnchor::Practical(xi_c) => {
            let t_c = transmittance_from_distance(d_km, cfg.loss_db_per_km)?;
            let true_ch = ChannelParams::new(t_c, xi_c)?;
            let factors = BiasFactors::taylor(vk)?;
            let (t_e, xi_e) = estimated_channel_raw(&true_ch, va, &factors);
            let practical = model.key_rate(&true_ch)?;
            if xi_e < 0.0 {
                return Ok(SweepRow {
                    scenario_id: id,
                    distance_km: d_km,
                    fluctuation_variance: vk,
                    transmittance_practical: t_c,
                    excess_noise_practical: xi_c,
                    transmittance_estimated: t_e,
                    excess_noise_estimated: xi_e,
                    mutual_info_estimated: f64::NAN,
                    holevo_estimated: f64::NAN,
                    rate_estimated: f64::NAN,
                    mutual_info_practical: practical.mutual_info,
                    holevo_practical: practical.holevo,
                    rate_practical: practical.rate,
                    status: "infeasible".into(),
                });
            }
            let est_ch = ChannelParams::new(t_e, xi_e)?;
            let estimated = model.key_rate(&est_ch)?;
            Ok(SweepRow {
                scenario_id: id,
                distance_km: d_km,
                fluctuation_variance: vk,
                transmittance_practical: t_c,
                excess_noise_practical: xi_c,
                transmittance_estimated: t_e,
                excess_noise_estimated: xi_e,
                mutual_info_estimated: estimated.mutual_info,
                holevo_estimated: estimated.holevo,
                rate_estimated: estimated.rate,
                mutual_info_practical: practical.mutual_info,
                holevo_practical: practical.holevo,
                rate_practical: practical.rate,
                status: "ok".into(),
            })
        }
    }
}

/// Evaluate the full distance x fluctuation grid. Row order is
/// distance-major and identical for every worker count.
pub fn run_sweep(scenario: &Scenario, jobs: usize) -> Result<Vec<SweepRow>> {
    let cells: Vec<(f64, f64)> = scenario
        .config
        .distances_km
        .iter()
        .flat_map(|&d| {
            scenario
                .config
                .fluctuation_variances
                .iter()
                .map(move |&vk| (d, vk))
        })
        .collect();
    with_pool(jobs, || {
        cells
            .par_iter()
            .map(|&(d, vk)| sweep_cell(scenario, d, vk))
            .collect::<Result<Vec<_>>>()
    })?
}

/// One distance of the minimum-fluctuation threshold search.
#[derive(Clone, Debug)]
pub struct MinVkRow {
    pub scenario_id: String,
    pub distance_km: f64,
    /// Estimated excess noise the attack holds fixed.
    pub excess_noise_estimated: f64,
    /// Smallest V_k that drives the practical rate to zero (0 when the
    /// channel supports no key even without fluctuation).
    pub min_fluctuation_variance: f64,
    /// Practical rate at the threshold.
    pub rate_practical: f64,
    /// Rate the parties still believe they get at the threshold.
    pub rate_estimated: f64,
    /// `"threshold"`, or `"no-key"` when the honest rate is already zero.
    pub status: String,
}

impl CsvRecord for MinVkRow {
    fn header() -> &'static [&'static str] {
        &[
            "scenario_id",
            "distance_km",
            "excess_noise_estimated",
            "min_fluctuation_variance",
            "rate_practical",
            "rate_estimated",
            "status",
        ]
    }

    fn column_docs() -> &'static [&'static str] {
        &[
            "Identifier of the scenario configuration that produced the row.",
            "Channel length in kilometres.",
            "Excess noise the parties estimate (held fixed by the attack).",
            "Smallest intensity-fluctuation variance with non-positive practical rate.",
            "Practical key rate at the threshold (bits/symbol, at most zero up to the bisection width).",
            "Key rate the parties still believe they achieve at the threshold (bits/symbol).",
            "Row status: threshold, or no-key when the rate is zero without any attack.",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.scenario_id.clone(),
            fmt_float(self.distance_km),
            fmt_float(self.excess_noise_estimated),
            fmt_float(self.min_fluctuation_variance),
            fmt_float(self.rate_practical),
            fmt_float(self.rate_estimated),
            self.status.clone(),
        ]
    }
}

/// Search the minimum defeating fluctuation variance at every distance.
/// Requires an `excess_noise_estimated` anchor: the attack controls what
/// the parties see, so their estimate is the held-fixed quantity.
pub fn run_min_vk_sweep(scenario: &Scenario, jobs: usize) -> Result<Vec<MinVkRow>> {
    let cfg = &scenario.config;
    let xi_e = match cfg.noise_anchor() {
        NoiseAnchor::Estimated(x) => x,
        NoiseAnchor::Practical(_) => {
            return Err(cfg_err(
                "the minimum-fluctuation sweep needs excess_noise_estimated (the attack pins the estimate)",
            ))
        }
    };
    with_pool(jobs, || {
        cfg.distances_km
            .par_iter()
            .map(|&d| {
                let res = min_vk(
                    &scenario.model,
                    d,
                    cfg.loss_db_per_km,
                    xi_e,
                    cfg.max_fluctuation_variance,
                )?;
                Ok(MinVkRow {
                    scenario_id: cfg.id.clone(),
                    distance_km: d,
                    excess_noise_estimated: xi_e,
                    min_fluctuation_variance: res.vk,
                    rate_practical: res.practical_rate,
                    rate_estimated: res.estimated_rate,
                    status: if res.vk > 0.0 { "threshold".into() } else { "no-key".into() },
                })
            })
            .collect::<Result<Vec<_>>>()
    })?
}

/// One verified Monte Carlo ratio (estimator-bias or calibration moment).
#[derive(Clone, Debug)]
pub struct McBiasRow {
    pub scenario_id: String,
    /// Ratio name, e.g. `c1:fluctuating-snu:vk=2e-3`.
    pub statistic: String,
    pub observed: f64,
    pub predicted: f64,
    pub std_error: f64,
}

impl McBiasRow {
    pub fn z_score(&self) -> f64 {
        if self.std_error == 0.0 {
            if self.observed == self.predicted {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.observed - self.predicted) / self.std_error
        }
    }
}

impl CsvRecord for McBiasRow {
    fn header() -> &'static [&'static str] {
        &["scenario_id", "statistic", "observed", "predicted", "std_error"]
    }

    fn column_docs() -> &'static [&'static str] {
        &[
            "Identifier of the scenario configuration that produced the row.",
            "Name of the verified ratio: statistic, estimator pipeline and fluctuation variance (or calibration moment).",
            "Monte Carlo mean of the ratio.",
            "Predicted value (exact distribution moment or exact calibration moment).",
            "Standard error of the Monte Carlo mean.",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.scenario_id.clone(),
            self.statistic.clone(),
            fmt_float(self.observed),
            fmt_float(self.predicted),
            fmt_float(self.std_error),
        ]
    }
}

/// Odd 64-bit constant used to derive independent seeds per row block.
const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Monte Carlo verification of the estimator-bias ratios (every non-zero
/// `V_k` in the config) plus the finite-size calibration moments.
///
/// Each `V_k` block gets its own derived seed, so results do not depend on
/// the worker count or on which other blocks run.
pub fn run_mc_bias(scenario: &Scenario, jobs: usize) -> Result<Vec<McBiasRow>> {
    let cfg = &scenario.config;
    let xi = match cfg.noise_anchor() {
        NoiseAnchor::Estimated(x) | NoiseAnchor::Practical(x) => x,
    };
    let t = transmittance_from_distance(cfg.distances_km[0], cfg.loss_db_per_km)?;
    let channel = ChannelParams::new(t, xi)?;
    let constellation = scenario.model.constellation();
    let quantities = scenario.model.quantities();
    let vks: Vec<(usize, f64)> = cfg
        .fluctuation_variances
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, vk)| vk > 0.0)
        .collect();
    let blocks = with_pool(jobs, || {
        vks.par_iter()
            .map(|&(i, vk)| {
                let setup = MeasurementSetup {
                    constellation,
                    quantities,
                    channel,
                    shot_noise_unit: 1.0,
                };
                let fluct = FluctuationModel::new(scenario.kind, vk)?;
                let seed = cfg.seed.wrapping_add((i as u64 + 1).wrapping_mul(SEED_STRIDE));
                let report =
                    verify_bias(&setup, &fluct, cfg.mc_trials, cfg.mc_pulses_per_trial, seed)?;
                let mut rows = Vec::new();
                for (pipeline, list) in [
                    ("fluctuating-snu", &report.fluctuating_rows),
                    ("stale-snu", &report.stale_rows),
                ] {
                    for r in list {
                        rows.push(McBiasRow {
                            scenario_id: cfg.id.clone(),
                            statistic: format!("{}:{}:vk={:e}", r.statistic, pipeline, vk),
                            observed: r.observed,
                            predicted: r.predicted,
                            std_error: r.std_error,
                        });
                    }
                }
                Ok(rows)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mut rows: Vec<McBiasRow> = blocks.into_iter().flatten().collect();
    let cal_seed = cfg.seed.wrapping_add(SEED_STRIDE.wrapping_mul(0x5CA1_AB1E));
    let cal = verify_calibration_bias(
        cfg.mc_calibration_samples,
        cfg.mc_calibration_reps,
        1.0,
        cal_seed,
    )?;
    for r in &cal {
        rows.push(McBiasRow {
            scenario_id: cfg.id.clone(),
            statistic: format!("{}:n={}", r.statistic, cfg.mc_calibration_samples),
            observed: r.observed,
            predicted: r.predicted_exact,
            std_error: r.std_error,
        });
    }
    Ok(rows)
}

/// Standard output bundle: CSV plus its column manifest, named after the
/// scenario id.
fn write_outputs<R: CsvRecord>(
    dir: &Path,
    scenario_id: &str,
    suffix: &str,
    rows: &[R],
) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let csv_name = format!("{scenario_id}{suffix}.csv");
    let csv_path = dir.join(&csv_name);
    write_csv(&csv_path, rows)?;
    let manifest_path = dir.join(format!("{scenario_id}{suffix}.columns.toml"));
    write_column_manifest::<R>(&manifest_path, &csv_name, scenario_id)?;
    Ok((csv_path, manifest_path))
}

/// Write sweep rows and manifest into `dir`; returns the two paths.
pub fn write_sweep_outputs(
    dir: &Path,
    scenario: &Scenario,
    rows: &[SweepRow],
) -> Result<(PathBuf, PathBuf)> {
    write_outputs(dir, &scenario.config.id, "", rows)
}

/// Write minimum-fluctuation rows and manifest into `dir`.
pub fn write_min_vk_outputs(
    dir: &Path,
    scenario: &Scenario,
    rows: &[MinVkRow],
) -> Result<(PathBuf, PathBuf)> {
    write_outputs(dir, &scenario.config.id, "-min-vk", rows)
}

/// Write Monte Carlo bias rows and manifest into `dir`.
pub fn write_mc_bias_outputs(
    dir: &Path,
    scenario: &Scenario,
    rows: &[McBiasRow],
) -> Result<(PathBuf, PathBuf)> {
    write_outputs(dir, &scenario.config.id, "-mc-bias", rows)
}

/// Result of one suite property.
#[derive(Clone, Debug)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

type PropResult = std::result::Result<String, String>;

fn run_prop(name: &'static str, f: impl FnOnce() -> PropResult) -> PropertyOutcome {
    match f() {
        Ok(details) => PropertyOutcome { name, passed: true, details },
        Err(details) => PropertyOutcome { name, passed: false, details },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("unexpected error: {e}"))
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

const PROP_KINDS: [FluctuationKind; 3] = [
    FluctuationKind::Uniform,
    FluctuationKind::TwoPoint,
    FluctuationKind::TruncatedGaussian,
];

/// Run the executable invariant suite: physicality of the covariance
/// spectrum, bounds and limits of the mutual information, bias-map
/// round-trips, Monte Carlo consistency, determinism of the sweep encoder,
/// and mutation checks proving the oracles can detect seeded defects.
///
/// Every outcome carries a human-readable detail string; `seed` controls
/// all randomized elements, so two runs with the same seed are identical.
pub fn run_property_suite(seed: u64) -> Result<Vec<PropertyOutcome>> {
    let qpsk = KeyRateModel::new(
        Constellation::qpsk(0.456)?,
        0.95,
        MutualInfoMethod::default(),
        None,
    )?;
    let qam16 = KeyRateModel::new(
        Constellation::pcs_qam(16, 0.085, 1.0)?,
        0.95,
        MutualInfoMethod::default(),
        None,
    )?;
    let mean_photons = qpsk.quantities().mean_photons;
    // shared physicality grid: distances x excess noises
    let dist_grid = grid(0.0, 50.0, 21);
    let noise_grid = grid(0.0, 0.05, 21);
    let channel_grid: Vec<ChannelParams> = dist_grid
        .iter()
        .flat_map(|&d| {
            let t = transmittance_from_distance(d, DEFAULT_LOSS_DB_PER_KM).unwrap();
            noise_grid
                .iter()
                .map(move |&xi| ChannelParams::new(t, xi).unwrap())
        })
        .collect();

    let mut outcomes = Vec::new();

    outcomes.push(run_prop("symplectic-floor", || {
        let mut min_lambda = f64::INFINITY;
        for ch in &channel_grid {
            let cov = lift(qpsk.covariance_from_observables(&qpsk.expected_observables(ch)))?;
            let (l1, l2, _) = lift(symplectic_eigenvalues(&cov))?;
            min_lambda = min_lambda.min(l1).min(l2);
            ensure(l1 >= 1.0 - 1e-9 && l2 >= 1.0 - 1e-9, || {
                format!("lambda below floor at T={} xi={}: {l1}, {l2}", ch.transmittance, ch.excess_noise)
            })?;
        }
        Ok(format!("grid={} min_lambda={min_lambda:.6}", channel_grid.len()))
    }));

    outcomes.push(run_prop("holevo-nonnegative-and-pure-iff", || {
        let mut min_chi = f64::INFINITY;
        for ch in &channel_grid {
            let cov = lift(qpsk.covariance_from_observables(&qpsk.expected_observables(ch)))?;
            let chi = lift(holevo_bound(&cov))?;
            min_chi = min_chi.min(chi);
            ensure(chi >= 0.0, || format!("negative holevo {chi} at T={}", ch.transmittance))?;
            if chi < 1e-12 {
                let (l1, l2, _) = lift(symplectic_eigenvalues(&cov))?;
                ensure((l1 - 1.0).abs() < 1e-9 && (l2 - 1.0).abs() < 1e-9, || {
                    format!("chi=0 without pure spectrum: {l1}, {l2}")
                })?;
            }
        }
        // the saturated (pure) triple must hit exactly zero
        let pure = CovarianceTriple { v: 3.0, w: 3.0, z: 8.0f64.sqrt() };
        let chi0 = lift(holevo_bound(&pure))?;
        ensure(chi0.abs() < 1e-9, || format!("saturated triple gives chi={chi0}"))?;
        let (l1, l2, _) = lift(symplectic_eigenvalues(&pure))?;
        ensure((l1 - 1.0).abs() < 1e-9 && (l2 - 1.0).abs() < 1e-9, || {
            format!("saturated triple not pure: {l1}, {l2}")
        })?;
        Ok(format!("grid min_chi={min_chi:.3e}, saturated chi={chi0:.1e}"))
    }));

    outcomes.push(run_prop("cross-term-radicand", || {
        let mut min_rad = f64::INFINITY;
        for ch in &channel_grid {
            let obs = qpsk.expected_observables(ch);
            let rad = obs.n_b - obs.c2 * obs.c2 / mean_photons;
            min_rad = min_rad.min(rad);
            ensure(rad >= -1e-9, || {
                format!("radicand {rad} at T={} xi={}", ch.transmittance, ch.excess_noise)
            })?;
        }
        // equality case: no excess noise, no loss
        let obs = qpsk.expected_observables(&lift(ChannelParams::new(1.0, 0.0))?);
        let rad0 = obs.n_b - obs.c2 * obs.c2 / mean_photons;
        ensure(rad0.abs() <= 1e-9, || format!("radicand at (T=1, xi=0) is {rad0}"))?;
        Ok(format!("min_radicand={min_rad:.3e}, identity case {rad0:.1e}"))
    }));

    outcomes.push(run_prop("rate-monotone-distance", || {
        let mut prev = f64::INFINITY;
        for &d in &grid(0.0, 30.0, 25) {
            let t = lift(transmittance_from_distance(d, DEFAULT_LOSS_DB_PER_KM))?;
            let r = lift(qpsk.key_rate(&lift(ChannelParams::new(t, 0.01))?))?.rate;
            ensure(r <= prev + 1e-12, || format!("rate rose at {d} km: {prev} -> {r}"))?;
            prev = r;
        }
        Ok("25 distances, non-increasing".into())
    }));

    outcomes.push(run_prop("rate-monotone-noise", || {
        let t = lift(transmittance_from_distance(10.0, DEFAULT_LOSS_DB_PER_KM))?;
        let mut prev = f64::INFINITY;
        for &xi in &grid(0.0, 0.03, 25) {
            let r = lift(qpsk.key_rate(&lift(ChannelParams::new(t, xi))?))?.rate;
            ensure(r <= prev + 1e-12, || format!("rate rose at xi={xi}: {prev} -> {r}"))?;
            prev = r;
        }
        Ok("25 noise points, non-increasing".into())
    }));

    outcomes.push(run_prop("iab-upper-bounds", || {
        for (model, label) in [(&qpsk, "qpsk"), (&qam16, "16-qam")] {
            let m = model.constellation().len() as f64;
            let va = model.constellation().modulation_variance();
            for ch in channel_grid.iter().step_by(7) {
                let i = model.mutual_info(ch);
                ensure(i <= m.log2() + 1e-9, || {
                    format!("{label}: I_AB={i} exceeds log2(M)={}", m.log2())
                })?;
                let cap = gaussian_capacity(va, ch);
                ensure(i <= cap + 1e-9, || {
                    format!("{label}: I_AB={i} exceeds Gaussian capacity {cap}")
                })?;
            }
        }
        Ok("I_AB <= min(log2 M, Gaussian capacity) on both constellations".into())
    }));

    outcomes.push(run_prop("iab-vanishing-transmittance", || {
        let i = qpsk.mutual_info(&lift(ChannelParams::new(1e-9, 0.01))?);
        ensure(i.abs() < 1e-6, || format!("I_AB at T=1e-9 is {i}"))?;
        Ok(format!("I_AB(T=1e-9)={i:.3e}"))
    }));

    outcomes.push(run_prop("iab-tensor-agreement", || {
        let mut max_gap: f64 = 0.0;
        for (model, label) in [(&qpsk, "qpsk"), (&qam16, "16-qam")] {
            for &(t, xi) in &[(1.0, 0.0), (0.7, 0.01), (0.3, 0.02), (0.1, 0.05), (0.05, 0.0)] {
                let ch = lift(ChannelParams::new(t, xi))?;
                let gap = (model.mutual_info(&ch) - model.mutual_info_tensor_rule(&ch)).abs();
                max_gap = max_gap.max(gap);
                ensure(gap < 1e-9, || format!("{label} separable vs tensor gap {gap} at T={t}"))?;
            }
        }
        Ok(format!("max separable-vs-tensor gap {max_gap:.2e}"))
    }));

    outcomes.push(run_prop("iab-quadrature-vs-mc", || {
        let samples = 2_000_000u64;
        let mut max_z: f64 = 0.0;
        for (i, &(t, xi)) in [(0.9, 0.005), (0.63, 0.01), (0.4, 0.02), (0.2, 0.01), (0.1, 0.03)]
            .iter()
            .enumerate()
        {
            let ch = lift(ChannelParams::new(t, xi))?;
            let exact = qpsk.mutual_info(&ch);
            let (mc, se) = mutual_info_mc(qpsk.constellation(), &ch, samples, seed ^ (i as u64));
            let z = (exact - mc).abs() / se;
            max_z = max_z.max(z);
            ensure(z < 3.0, || {
                format!("T={t}: quadrature {exact} vs MC {mc} +- {se} (z={z:.2})")
            })?;
        }
        Ok(format!("5 channels x {samples} samples, max |z| = {max_z:.2}"))
    }));

    outcomes.push(run_prop("zero-attack-identity", || {
        let mut max_gap: f64 = 0.0;
        for &d in &grid(1.0, 50.0, 50) {
            let sc = lift(attack_scenario_rates(&qpsk, d, DEFAULT_LOSS_DB_PER_KM, 0.01, 0.0))?;
            ensure(sc.true_channel == sc.estimated_channel, || {
                format!("channels differ at {d} km")
            })?;
            let gap = (sc.estimated.rate - sc.practical.rate).abs();
            max_gap = max_gap.max(gap);
            ensure(gap <= 1e-12, || format!("rate gap {gap} at {d} km"))?;
        }
        Ok(format!("50 distances, max rate gap {max_gap:.2e}"))
    }));

    outcomes.push(run_prop("attack-bias-direction", || {
        for &vk in &[5e-4, 2e-3] {
            for &d in &grid(1.0, 28.0, 10) {
                let sc = lift(attack_scenario_rates(&qpsk, d, DEFAULT_LOSS_DB_PER_KM, 0.01, vk))?;
                ensure(sc.true_channel.excess_noise > sc.estimated_channel.excess_noise, || {
                    format!("noise not underestimated at {d} km, vk={vk}")
                })?;
                ensure(sc.estimated_channel.transmittance < sc.true_channel.transmittance, || {
                    format!("transmittance not underestimated at {d} km, vk={vk}")
                })?;
                ensure(sc.estimated.rate >= sc.practical.rate, || {
                    format!("estimated rate below practical at {d} km, vk={vk}")
                })?;
            }
        }
        Ok("20 points x 2 variances: noise and transmittance underestimated".into())
    }));

    outcomes.push(run_prop("channel-map-roundtrip", || {
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xC0DE);
        let va = 0.456;
        let mut max_err: f64 = 0.0;
        for _ in 0..64 {
            let t = rng.gen_range(0.01..1.0);
            let xi_e = rng.gen_range(0.0..0.05);
            let vk = rng.gen_range(0.0..5e-3);
            let f = lift(BiasFactors::taylor(vk))?;
            let (true_ch, est_ch) = lift(true_channel_for_estimate(t, xi_e, va, &f))?;
            let back = lift(estimated_channel(&true_ch, va, &f))?;
            let err = (back.excess_noise - est_ch.excess_noise)
                .abs()
                .max((back.transmittance - est_ch.transmittance).abs());
            max_err = max_err.max(err);
            ensure(err < 1e-12, || format!("roundtrip error {err} at T={t} vk={vk}"))?;
        }
        Ok(format!("64 random draws, max roundtrip error {max_err:.2e}"))
    }));

    outcomes.push(run_prop("observable-map-roundtrip", || {
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x0B5E);
        let mut max_err: f64 = 0.0;
        for _ in 0..64 {
            let f = lift(BiasFactors::taylor(rng.gen_range(0.0..5e-3)))?;
            let obs = ChannelObservables {
                c1: rng.gen_range(-1.0..1.0),
                c2: rng.gen_range(-1.0..1.0),
                n_b: rng.gen_range(-0.5..3.0),
            };
            let back = practical_observables(&estimated_observables(&obs, &f), &f);
            let err = (back.c1 - obs.c1)
                .abs()
                .max((back.c2 - obs.c2).abs())
                .max((back.n_b - obs.n_b).abs());
            max_err = max_err.max(err);
            ensure(err < 1e-12, || format!("observable roundtrip error {err}"))?;
        }
        Ok(format!("64 random draws, max roundtrip error {max_err:.2e}"))
    }));

    outcomes.push(run_prop("taylor-linear-accuracy", || {
        let mut max_res: f64 = 0.0;
        for kind in PROP_KINDS {
            let m = lift(FluctuationModel::new(kind, 2e-3))?;
            let res = (m.moment_inv_sqrt() - (1.0 + 3.0 * 2e-3 / 8.0)).abs();
            max_res = max_res.max(res);
            ensure(res < 1e-5, || format!("{kind}: linear Taylor residual {res:.2e}"))?;
        }
        Ok(format!("all kinds at V_k=2e-3, max residual {max_res:.2e}"))
    }));

    outcomes.push(run_prop("kind-agreement", || {
        // exact inverse moments of the three shapes agree to O(V_k^2)
        let vk = 2e-3;
        let moments: Vec<f64> = PROP_KINDS
            .iter()
            .map(|&k| FluctuationModel::new(k, vk).map(|m| m.moment_inv_sqrt()))
            .collect::<Result<_>>()
            .map_err(|e| e.to_string())?;
        let spread = moments.iter().cloned().fold(f64::MIN, f64::max)
            - moments.iter().cloned().fold(f64::MAX, f64::min);
        ensure(spread < 2e-5, || format!("kind spread {spread:.2e}"))?;
        // and each kind's measured ratio matches its own exact moment
        let t = lift(transmittance_from_distance(10.0, DEFAULT_LOSS_DB_PER_KM))?;
        let channel = lift(ChannelParams::new(t, 0.01))?;
        let setup = MeasurementSetup {
            constellation: qpsk.constellation(),
            quantities: qpsk.quantities(),
            channel,
            shot_noise_unit: 1.0,
        };
        for (i, &kind) in PROP_KINDS.iter().enumerate() {
            let m = lift(FluctuationModel::new(kind, vk))?;
            let report = lift(verify_bias(&setup, &m, 16, 20_000, seed ^ (0xF00D + i as u64)))?;
            let z = report.max_abs_z();
            ensure(z < 3.5, || format!("{kind}: bias ratio z={z:.2}"))?;
        }
        Ok(format!("exact-moment spread {spread:.2e}; per-kind MC ratios within 3.5 sigma"))
    }));

    outcomes.push(run_prop("stderr-scaling", || {
        let t = lift(transmittance_from_distance(10.0, DEFAULT_LOSS_DB_PER_KM))?;
        let channel = lift(ChannelParams::new(t, 0.01))?;
        let setup = MeasurementSetup {
            constellation: qpsk.constellation(),
            quantities: qpsk.quantities(),
            channel,
            shot_noise_unit: 1.0,
        };
        let m = lift(FluctuationModel::new(FluctuationKind::Uniform, 2e-3))?;
        let small = lift(verify_bias(&setup, &m, 24, 20_000, seed ^ 0xA))?;
        let large = lift(verify_bias(&setup, &m, 24, 200_000, seed ^ 0xB))?;
        // ten times the data shrinks the per-trial spread ~ sqrt(10)
        let ratio = small.fluctuating_rows[0].std_error / large.fluctuating_rows[0].std_error;
        ensure(ratio > 2.2 && ratio < 4.5, || {
            format!("stderr ratio {ratio:.2} (expected near sqrt(10) = 3.16)")
        })?;
        Ok(format!("stderr ratio at 10x pulses: {ratio:.2}"))
    }));

    outcomes.push(run_prop("monitored-pipeline-unbiased", || {
        let t = lift(transmittance_from_distance(10.0, DEFAULT_LOSS_DB_PER_KM))?;
        let channel = lift(ChannelParams::new(t, 0.01))?;
        let setup = MeasurementSetup {
            constellation: qpsk.constellation(),
            quantities: qpsk.quantities(),
            channel,
            shot_noise_unit: 1.0,
        };
        let expected = qpsk.expected_observables(&channel);
        let m = lift(FluctuationModel::new(FluctuationKind::Uniform, 2e-3))?;
        let trials = 24;
        let pulses = 50_000;
        let mut acc = [Vec::new(), Vec::new(), Vec::new()];
        for trial in 0..trials {
            let batch = lift(crate::estimator::simulate_batch(
                &setup,
                &m,
                pulses,
                seed ^ 0x1AB,
                trial,
            ))?;
            let est = crate::estimator::estimate_all(&setup, &batch);
            acc[0].push(est.monitored.c1);
            acc[1].push(est.monitored.c2);
            acc[2].push(est.monitored.n_b);
        }
        let targets = [expected.c1, expected.c2, expected.n_b];
        let names = ["c1", "c2", "n_b"];
        let mut max_z: f64 = 0.0;
        for s in 0..3 {
            let n = acc[s].len() as f64;
            let mean: f64 = acc[s].iter().sum::<f64>() / n;
            let var: f64 =
                acc[s].iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            let se = (var / n).sqrt();
            let z = (mean - targets[s]).abs() / se;
            max_z = max_z.max(z);
            ensure(z < 4.0, || {
                format!("{}: monitored {mean} vs analytic {} (z={z:.2})", names[s], targets[s])
            })?;
        }
        Ok(format!("monitored estimates match analytic observables, max |z| = {max_z:.2}"))
    }));

    outcomes.push(run_prop("calibration-moments", || {
        let n = 100;
        let exact = lift(calibration_linear_moment_exact(n))?;
        let taylor = calibration_linear_moment_taylor(n);
        let gap = exact - taylor;
        ensure(gap > 7e-5 && gap < 9e-5, || {
            format!("exact-vs-Taylor gap {gap:.3e} out of expected window")
        })?;
        let quad = lift(calibration_quadratic_moment_exact(n))?;
        ensure((quad - 100.0 / 98.0).abs() < 1e-15, || format!("quadratic moment {quad}"))?;
        let rows = lift(verify_calibration_bias(n, 100_000, 1.0, seed ^ 0xCA1))?;
        let mut max_z: f64 = 0.0;
        for r in &rows {
            let z = (r.observed - r.predicted_exact).abs() / r.std_error;
            max_z = max_z.max(z);
            ensure(z < 4.0, || format!("{}: z={z:.2}", r.statistic))?;
        }
        Ok(format!("gap={gap:.2e}, MC max |z| = {max_z:.2}"))
    }));

    outcomes.push(run_prop("mutation-natural-log-detected", || {
        let t = lift(transmittance_from_distance(10.0, DEFAULT_LOSS_DB_PER_KM))?;
        let ch = lift(ChannelParams::new(t, 0.01))?;
        let cov = lift(qpsk.covariance_from_observables(&qpsk.expected_observables(&ch)))?;
        let real = lift(holevo_bound(&cov))?;
        let oracle = lift(holevo_bound_oracle(&cov))?;
        ensure((real - oracle).abs() < 1e-9, || {
            format!("healthy implementation disagrees with oracle by {}", (real - oracle).abs())
        })?;
        // seeded defect: entropy evaluated with the natural logarithm
        let g_nat = |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                (x + 1.0) * (x + 1.0).ln() - x * x.ln()
            }
        };
        let (l1, l2, l3) = lift(symplectic_eigenvalues(&cov))?;
        let mutant =
            g_nat((l1 - 1.0) / 2.0) + g_nat((l2 - 1.0) / 2.0) - g_nat((l3 - 1.0) / 2.0);
        let deviation = (mutant - oracle).abs();
        ensure(deviation > 1e-3, || {
            format!("natural-log mutant not detected: deviation {deviation:.2e}")
        })?;
        Ok(format!("healthy gap {:.1e}, mutant gap {deviation:.2e}", (real - oracle).abs()))
    }));

    outcomes.push(run_prop("mutation-inversion-sign-detected", || {
        let f = lift(BiasFactors::taylor(2e-3))?;
        let va = 0.456;
        let (t, xi_e) = (0.5, 0.01);
        let t_e = t / (f.linear * f.linear);
        // seeded defect: bias terms subtracted instead of added when
        // solving for the true noise
        let bad_xi_c =
            (xi_e - (1.0 - f.a()) * va - (1.0 - f.b()) * (2.0 / t_e)) / f.a();
        let bad_true = lift(ChannelParams::new(t, bad_xi_c.max(0.0)))?;
        let (_, xi_back) = estimated_channel_raw(&bad_true, va, &f);
        let deviation = (xi_back - xi_e).abs();
        ensure(deviation > 1e-6, || {
            format!("sign-flipped inversion not detected: deviation {deviation:.2e}")
        })?;
        // while the correct inversion round-trips
        let (good_true, _) = lift(true_channel_for_estimate(t, xi_e, va, &f))?;
        let (_, xi_good) = estimated_channel_raw(&good_true, va, &f);
        ensure((xi_good - xi_e).abs() < 1e-12, || {
            format!("correct inversion failed roundtrip by {}", (xi_good - xi_e).abs())
        })?;
        Ok(format!("mutant deviation {deviation:.2e}, correct roundtrip exact"))
    }));

    outcomes.push(run_prop("truncation-convergence", || {
        let mut max_delta: f64 = 0.0;
        for (model, label) in [(&qpsk, "qpsk"), (&qam16, "16-qam")] {
            let c = model.constellation();
            let (dn, dc1, dw) = lift(protocol_truncation_deltas(c, c.default_dim(), 8))?;
            for (what, d) in [("mean-photons", dn), ("c1-factor", dc1), ("w", dw)] {
                max_delta = max_delta.max(d);
                ensure(d < 1e-6, || format!("{label} {what} delta {d:.2e} at dim+8"))?;
            }
            for &dkm in &[0.0, 10.0, 25.0, 40.0] {
                let t = lift(transmittance_from_distance(dkm, DEFAULT_LOSS_DB_PER_KM))?;
                let ch = lift(ChannelParams::new(t, 0.01))?;
                let d = lift(model.truncation_rate_delta(&ch, 8))?;
                max_delta = max_delta.max(d);
                ensure(d < 1e-6, || format!("{label} rate delta {d:.2e} at {dkm} km"))?;
            }
        }
        Ok(format!("max truncation delta {max_delta:.2e} under dim+8"))
    }));

    outcomes.push(run_prop("sweep-determinism", || {
        let cfg = ScenarioConfig::from_toml_str(
            r#"
                schema_version = 1
                id = "prop-determinism"
                constellation = "qpsk"
                modulation_variance = 0.456
                excess_noise_estimated = 0.01
                reconciliation_efficiency = 0.95
                fluctuation_variances = [0.0, 1e-3, 2e-3]
                distances_km = [1.0, 5.0, 9.0, 13.0]
            "#,
        )
        .map_err(|e| e.to_string())?;
        let scenario = Scenario::from_config(cfg).map_err(|e| e.to_string())?;
        let base = csv_string(&lift(run_sweep(&scenario, 1))?);
        for jobs in [2, 3, 8] {
            let other = csv_string(&lift(run_sweep(&scenario, jobs))?);
            ensure(other == base, || format!("CSV differs between 1 and {jobs} workers"))?;
        }
        Ok(format!("{} bytes identical across 1/2/3/8 workers", base.len()))
    }));

    Ok(outcomes)
}
