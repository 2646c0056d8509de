//! Link budget: UMi path loss, LOS state, beamforming gain, noise power and
//! the per-instance SNR samples driving the DRX machine.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::blockage::{total_blockage_loss_db, BlockerField};
use crate::error::{Error, Result};
use crate::scalar::{boltzmann, real, Real};
use crate::scenario::{Deployment, ScenarioConfig};

/// UMi street-canyon path loss, dB.
///
/// LOS: 32.4 + 21 log10(d) + 20 log10(f_GHz).
/// NLOS: max(LOS, 22.4 + 35.3 log10(d) + 21.3 log10(f_GHz) - 0.3 (h_UE - 1.5)).
pub fn path_loss_db<F: Real>(d3_m: F, fc_hz: F, los: bool, ue_height_m: F) -> Result<F> {
    if d3_m <= F::zero() {
        return Err(Error::Domain(format!(
            "path loss undefined for non-positive distance {d3_m}"
        )));
    }
    let f_ghz = fc_hz / real(1e9);
    let los_pl = real::<F>(32.4) + real::<F>(21.0) * d3_m.log10() + real::<F>(20.0) * f_ghz.log10();
    if los {
        Ok(los_pl)
    } else {
        let nlos = real::<F>(22.4)
            + real::<F>(35.3) * d3_m.log10()
            + real::<F>(21.3) * f_ghz.log10()
            - real::<F>(0.3) * (ue_height_m - real(1.5));
        Ok(los_pl.max(nlos))
    }
}

/// UMi LOS probability at 2-D distance `d2_m`, clamped to [0, 1].
pub fn los_probability<F: Real>(d2_m: F) -> F {
    if d2_m <= F::zero() {
        return F::one();
    }
    let e = (-d2_m / real(36.0)).exp();
    let p = (real::<F>(18.0) / d2_m).min(F::one()) * (F::one() - e) + e;
    p.max(F::zero()).min(F::one())
}

/// Ideal rank-1 beamforming gain on both link ends, dB.
pub fn bf_gain_db<F: Real>(m_ue: usize, m_bs: usize) -> F {
    real::<F>(10.0) * real::<F>((m_ue * m_bs) as f64).log10()
}

/// Thermal noise power over the signal bandwidth plus noise figure, dBm.
pub fn noise_power_dbm<F: Real>(bandwidth_hz: F, temperature_k: F, nf_db: F) -> F {
    let ktb_mw = boltzmann::<F>() * temperature_k * bandwidth_hz * real(1e3);
    real::<F>(10.0) * ktb_mw.log10() + nf_db
}

/// Large-scale state of one cell's link, drawn once per trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkState<F> {
    pub cell_k: usize,
    pub los: bool,
    /// Lognormal shadow fading, dB (0 when disabled).
    pub shadow_db: F,
}

/// One (monitoring instance, cell) SNR sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkSample<F> {
    pub instance_n: usize,
    pub cell_k: usize,
    /// Path loss including any per-trajectory shadow fading, dB.
    pub path_loss_db: F,
    pub blockage_loss_db: F,
    pub bf_gain_db: F,
    pub snr_db: F,
    pub blocked: bool,
}

/// Draw the per-trajectory LOS/shadow state of every cell.
pub fn draw_link_states<F: Real, R: Rng>(
    deployment: &Deployment<F>,
    cfg: &ScenarioConfig<F>,
    rng: &mut R,
) -> Vec<LinkState<F>> {
    deployment
        .bs_positions
        .iter()
        .enumerate()
        .map(|(cell_k, bs)| {
            let d2 = bs.xy().distance(deployment.ue_position.xy());
            let p_los = los_probability(d2).to_f64().unwrap();
            let los = rng.gen::<f64>() < p_los;
            let shadow_db = if cfg.shadow_fading {
                let sigma = if los {
                    cfg.shadow_sigma_los_db
                } else {
                    cfg.shadow_sigma_nlos_db
                };
                let g: f64 = StandardNormal.sample(rng);
                sigma * real(g)
            } else {
                F::zero()
            };
            LinkState {
                cell_k,
                los,
                shadow_db,
            }
        })
        .collect()
}

/// SNR of every cell at monitoring instance `n` for the current blocker field.
pub fn sample_links<F: Real>(
    deployment: &Deployment<F>,
    link_states: &[LinkState<F>],
    field: &BlockerField<F>,
    cfg: &ScenarioConfig<F>,
    n: usize,
) -> Result<Vec<LinkSample<F>>> {
    if link_states.len() != deployment.bs_positions.len() {
        return Err(Error::Internal(format!(
            "expected one link state per cell: {} states for {} cells",
            link_states.len(),
            deployment.bs_positions.len()
        )));
    }
    let wavelength = cfg.wavelength_m();
    let noise_dbm = noise_power_dbm(cfg.bandwidth_hz, cfg.temperature_k, cfg.noise_figure_db);
    let gain = bf_gain_db::<F>(cfg.m_ue, cfg.m_bs);
    deployment
        .bs_positions
        .iter()
        .zip(link_states)
        .map(|(bs, state)| {
            let d3 = bs.distance(deployment.ue_position);
            let pl = path_loss_db(d3, cfg.carrier_freq_hz, state.los, cfg.ue_height_m)?
                + state.shadow_db;
            let bl = total_blockage_loss_db(*bs, deployment.ue_position, field, wavelength, None);
            let snr = cfg.tx_power_dbm + gain - pl - bl - noise_dbm;
            Ok(LinkSample {
                instance_n: n,
                cell_k: state.cell_k,
                path_loss_db: pl,
                blockage_loss_db: bl,
                bf_gain_db: gain,
                snr_db: snr,
                blocked: snr < cfg.gamma_min_db,
            })
        })
        .collect()
}
