//! Run-plan assembly: band presets, flat-key config files, `key=value`
//! overrides, and the reproducibility manifest that a finished run emits and
//! that can be fed back in as a config.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::power::PowerConfig;
use crate::scenario::ScenarioConfig;
use crate::Scalar;

/// One band to simulate: scenario parameters plus the matching front-end
/// power model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandConfig {
    pub label: String,
    pub scenario: ScenarioConfig<Scalar>,
    pub power: PowerConfig<Scalar>,
}

impl BandConfig {
    pub fn preset(label: &str) -> Result<Self> {
        match label {
            "28ghz" => Ok(Self {
                label: label.into(),
                scenario: ScenarioConfig::band_28ghz(),
                power: PowerConfig::preset_28ghz(),
            }),
            "140ghz" => Ok(Self {
                label: label.into(),
                scenario: ScenarioConfig::band_140ghz(),
                power: PowerConfig::preset_140ghz(),
            }),
            other => Err(Error::Config(format!(
                "unknown band '{other}' (expected 28ghz or 140ghz)"
            ))),
        }
    }
}

/// Everything a run needs; serialized verbatim into the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunPlan {
    pub seed: u64,
    pub k_values: Vec<usize>,
    pub bands: Vec<BandConfig>,
}

/// Reproducibility manifest written next to the results.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_name: String,
    pub tool_version: String,
    /// Wall-clock stamp; the only field allowed to differ between reruns.
    pub created_unix_s: u64,
    /// How the metrics were averaged.
    pub averaging: String,
    pub plan: RunPlan,
}

impl RunManifest {
    pub fn new(plan: RunPlan) -> Self {
        Self {
            tool_name: env!("CARGO_PKG_NAME").into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            created_unix_s: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            averaging: "per-instance within trajectory, then across trajectories".into(),
            plan,
        }
    }
}

/// Optional overrides for every scenario field (flat keys) plus an optional
/// `power` table for the front-end model.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub carrier_freq_hz: Option<Scalar>,
    pub bandwidth_hz: Option<Scalar>,
    pub n_cells: Option<usize>,
    pub cell_grid_side_m: Option<Scalar>,
    pub bs_height_m: Option<Scalar>,
    pub ue_height_m: Option<Scalar>,
    pub m_ue: Option<usize>,
    pub m_bs: Option<usize>,
    pub tx_power_dbm: Option<Scalar>,
    pub temperature_k: Option<Scalar>,
    pub noise_figure_db: Option<Scalar>,
    pub gamma_min_db: Option<Scalar>,
    pub t_ss_per_s: Option<Scalar>,
    pub t_ss0_s: Option<Scalar>,
    pub sweep_len_cycles: Option<u32>,
    pub k_listen: Option<usize>,
    pub blocker_density_per_m2: Option<Scalar>,
    pub blocker_disc_radius_m: Option<Scalar>,
    pub n_trajectories: Option<usize>,
    pub n_steps: Option<usize>,
    pub rng_seed: Option<u64>,
    pub shadow_fading: Option<bool>,
    pub shadow_sigma_los_db: Option<Scalar>,
    pub shadow_sigma_nlos_db: Option<Scalar>,
    #[serde(default)]
    pub power: PowerOverrides,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerOverrides {
    pub adc_fom_j_per_step: Option<Scalar>,
    pub adc_bits: Option<u32>,
    pub adc_count: Option<u32>,
    pub f_s_hz: Option<Scalar>,
    pub n_rx: Option<usize>,
    pub lna_fom_per_mw: Option<Scalar>,
    pub ps_insertion_loss_db: Option<Scalar>,
    pub lo_power_dbm: Option<Scalar>,
    pub rffe_cal_constant: Option<Scalar>,
}

macro_rules! apply_field {
    ($dst:expr, $src:expr, { $($field:ident),* $(,)? }) => {
        $( if let Some(v) = $src.$field.clone() { $dst.$field = v; } )*
    };
}

impl Overrides {
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Parse repeated `key=value` flags (with optional `power.` prefix) by
    /// routing them through the same TOML path as config files.
    pub fn from_set_args(sets: &[String]) -> Result<Self> {
        let mut scenario_lines = Vec::new();
        let mut power_lines = Vec::new();
        for raw in sets {
            let (key, value) = raw.split_once('=').ok_or_else(|| {
                Error::Config(format!("--set expects key=value, got '{raw}'"))
            })?;
            let key = key.trim();
            let value = value.trim();
            if let Some(pkey) = key.strip_prefix("power.") {
                power_lines.push(format!("{pkey} = {value}"));
            } else {
                scenario_lines.push(format!("{key} = {value}"));
            }
        }
        let mut text = scenario_lines.join("\n");
        if !power_lines.is_empty() {
            text.push_str("\n[power]\n");
            text.push_str(&power_lines.join("\n"));
        }
        Self::from_toml_str(&text, Path::new("--set"))
    }

    pub fn apply(&self, band: &mut BandConfig) {
        apply_field!(band.scenario, self, {
            carrier_freq_hz, bandwidth_hz, n_cells, cell_grid_side_m, bs_height_m,
            ue_height_m, m_ue, m_bs, tx_power_dbm, temperature_k, noise_figure_db,
            gamma_min_db, t_ss_per_s, t_ss0_s, sweep_len_cycles, k_listen,
            blocker_density_per_m2, blocker_disc_radius_m, n_trajectories, n_steps,
            rng_seed, shadow_fading, shadow_sigma_los_db, shadow_sigma_nlos_db,
        });
        apply_field!(band.power, self.power, {
            adc_fom_j_per_step, adc_bits, adc_count, f_s_hz, n_rx, lna_fom_per_mw,
            ps_insertion_loss_db, lo_power_dbm, rffe_cal_constant,
        });
    }
}

/// A config file is either a flat override TOML or a previously emitted
/// manifest (JSON) to replay.
#[derive(Debug)]
pub enum ConfigSource {
    Overrides(Overrides),
    Manifest(RunManifest),
}

pub fn load_config_file(path: &Path) -> Result<ConfigSource> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let manifest: RunManifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(ConfigSource::Manifest(manifest))
    } else {
        Ok(ConfigSource::Overrides(Overrides::from_toml_str(&text, path)?))
    }
}

/// Parse a listening-set sweep spec: `4`, `1,4,9`, `1..9` or `1-9`
/// (ranges inclusive).
pub fn parse_k_spec(spec: &str, n_cells: usize) -> Result<Vec<usize>> {
    let parse_one = |s: &str| -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("invalid listening-set size '{s}'")))
    };
    let mut ks = Vec::new();
    if let Some((lo, hi)) = spec.split_once("..").or_else(|| spec.split_once('-')) {
        let (lo, hi) = (parse_one(lo)?, parse_one(hi)?);
        if lo == 0 || lo > hi {
            return Err(Error::Config(format!("invalid K range '{spec}'")));
        }
        ks.extend(lo..=hi);
    } else {
        for part in spec.split(',') {
            ks.push(parse_one(part)?);
        }
    }
    for &k in &ks {
        if k == 0 || k > n_cells {
            return Err(Error::Config(format!(
                "listening-set size {k} outside 1..={n_cells}"
            )));
        }
    }
    Ok(ks)
}
