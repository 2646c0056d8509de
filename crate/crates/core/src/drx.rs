//! Connected-mode DRX cell tracking: serving-cell stickiness, listening-set
//! fallback, exhaustive-sweep recovery, and awake/sleep accounting.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::LinkSample;
use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::scenario::ScenarioConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DrxMode {
    Tracking,
    Sweeping,
}

/// What happened in one DRX cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DrxEvent {
    /// Serving SNR above threshold, nothing to do.
    Served,
    /// Serving below threshold, switched to the best listening-set cell.
    Handover,
    /// Whole listening set below threshold; sweep armed, full cycle awake.
    SweepTriggered,
    /// Mid-sweep cycle, full cycle awake.
    Sweeping,
}

impl DrxEvent {
    pub fn as_str(self) -> &'static str {
        match self {
            DrxEvent::Served => "served",
            DrxEvent::Handover => "handover",
            DrxEvent::SweepTriggered => "sweep_triggered",
            DrxEvent::Sweeping => "sweeping",
        }
    }
}

/// Tracker state across DRX cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrxState {
    pub serving_cell: usize,
    /// Listening set (sorted cell indices, always contains the serving cell).
    pub listening_set: Vec<usize>,
    pub mode: DrxMode,
    /// Remaining full-cycle sweep instances when `mode == Sweeping`.
    pub sweep_remaining: u32,
}

/// Timing outcome of one DRX cycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleOutcome<F> {
    pub instance_n: usize,
    pub awake_time_s: F,
    pub slept_time_s: F,
    pub event: DrxEvent,
    pub all_blocked: bool,
}

fn argmax_snr<F: Real>(samples: &[LinkSample<F>]) -> Option<&LinkSample<F>> {
    let mut best: Option<&LinkSample<F>> = None;
    for s in samples {
        // strict comparison keeps the lowest cell index on ties
        if best.is_none_or(|b| s.snr_db > b.snr_db) {
            best = Some(s);
        }
    }
    best
}

/// Draw `serving` plus a uniform (K-1)-subset of the other cells.
fn draw_listening_set<R: Rng>(
    serving: usize,
    n_cells: usize,
    k: usize,
    rng: &mut R,
) -> Vec<usize> {
    let others: Vec<usize> = (0..n_cells).filter(|&c| c != serving).collect();
    let picks = rand::seq::index::sample(rng, others.len(), k - 1);
    let mut set: Vec<usize> = picks.iter().map(|i| others[i]).collect();
    set.push(serving);
    set.sort_unstable();
    set
}

/// Listen to all cells, serve the strongest, and fill the listening set with
/// K-1 uniformly chosen companions.
pub fn init_association<F: Real, R: Rng>(
    samples_all_cells: &[LinkSample<F>],
    k_listen: usize,
    rng: &mut R,
) -> Result<DrxState> {
    let n_cells = samples_all_cells.len();
    if k_listen == 0 || k_listen > n_cells {
        return Err(Error::Config(format!(
            "listening-set size {k_listen} outside 1..={n_cells}"
        )));
    }
    let serving = argmax_snr(samples_all_cells)
        .ok_or_else(|| Error::Config("cannot associate with zero cells".into()))?
        .cell_k;
    Ok(DrxState {
        serving_cell: serving,
        listening_set: draw_listening_set(serving, n_cells, k_listen, rng),
        mode: DrxMode::Tracking,
        sweep_remaining: 0,
    })
}

/// One tracking-mode cycle over the listening-set samples.
pub fn drx_step<F: Real, R: Rng>(
    state: &mut DrxState,
    samples: &[LinkSample<F>],
    cfg: &ScenarioConfig<F>,
    rng: &mut R,
) -> Result<CycleOutcome<F>> {
    if state.mode != DrxMode::Tracking {
        return Err(Error::Internal("drx_step requires tracking mode".into()));
    }
    let mut cells: Vec<usize> = samples.iter().map(|s| s.cell_k).collect();
    cells.sort_unstable();
    if cells != state.listening_set {
        return Err(Error::Internal(format!(
            "samples {:?} do not cover the listening set {:?}",
            cells, state.listening_set
        )));
    }
    let n = samples.first().map_or(0, |s| s.instance_n);
    let monitor_time = real::<F>(state.listening_set.len() as f64) * cfg.t_ss0_s;
    let serving_snr = samples
        .iter()
        .find(|s| s.cell_k == state.serving_cell)
        .expect("serving cell is in the listening set")
        .snr_db;

    let (event, awake) = if serving_snr >= cfg.gamma_min_db {
        (DrxEvent::Served, monitor_time)
    } else {
        let best = argmax_snr(samples).expect("non-empty listening set");
        if best.snr_db >= cfg.gamma_min_db {
            state.serving_cell = best.cell_k;
            state.listening_set = draw_listening_set(
                best.cell_k,
                cfg.n_cells,
                state.listening_set.len(),
                rng,
            );
            (DrxEvent::Handover, monitor_time)
        } else {
            state.mode = DrxMode::Sweeping;
            state.sweep_remaining = cfg.sweep_len_cycles;
            (DrxEvent::SweepTriggered, cfg.t_ss_per_s)
        }
    };
    Ok(CycleOutcome {
        instance_n: n,
        awake_time_s: awake,
        slept_time_s: cfg.t_ss_per_s - awake,
        event,
        all_blocked: event == DrxEvent::SweepTriggered,
    })
}

/// One full-awake sweep cycle; re-associates from all-cell samples when the
/// countdown expires.
pub fn sweep_step<F: Real, R: Rng>(
    state: &mut DrxState,
    samples_all_cells: &[LinkSample<F>],
    cfg: &ScenarioConfig<F>,
    rng: &mut R,
) -> Result<CycleOutcome<F>> {
    if state.mode != DrxMode::Sweeping {
        return Err(Error::Internal("sweep_step requires sweeping mode".into()));
    }
    let n = samples_all_cells.first().map_or(0, |s| s.instance_n);
    state.sweep_remaining -= 1;
    if state.sweep_remaining == 0 {
        let k = state.listening_set.len();
        *state = init_association(samples_all_cells, k, rng)?;
    }
    Ok(CycleOutcome {
        instance_n: n,
        awake_time_s: cfg.t_ss_per_s,
        slept_time_s: F::zero(),
        event: DrxEvent::Sweeping,
        all_blocked: false,
    })
}

/// Product-form blocking probability over a listening set of independent
/// per-cell blocking marginals; an empty set cannot offer a usable link.
pub fn blocking_probability<F: Real>(marginals: &[F]) -> F {
    marginals.iter().fold(F::one(), |acc, &p| acc * p)
}

/// Lower bound on the awake fraction and its sleep complement:
/// `beta_awake >= (1 - P_B) K T_SS,0 / T_SS,per + P_B`.
pub fn awake_fraction_bound<F: Real>(p_b: F, k: usize, cfg: &ScenarioConfig<F>) -> (F, F) {
    let duty = real::<F>(k as f64) * cfg.t_ss0_s / cfg.t_ss_per_s;
    let awake = (F::one() - p_b) * duty + p_b;
    (awake, F::one() - awake)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn samples(snrs: &[f64]) -> Vec<LinkSample<f64>> {
        samples_at(0, snrs)
    }

    fn samples_at(n: usize, snrs: &[f64]) -> Vec<LinkSample<f64>> {
        snrs.iter()
            .enumerate()
            .map(|(cell_k, &snr_db)| LinkSample {
                instance_n: n,
                cell_k,
                path_loss_db: 0.0,
                blockage_loss_db: 0.0,
                bf_gain_db: 0.0,
                snr_db,
                blocked: snr_db < -6.5,
            })
            .collect()
    }

    fn subset<'a>(all: &'a [LinkSample<f64>], set: &[usize]) -> Vec<LinkSample<f64>> {
        set.iter().map(|&k| all[k]).collect()
    }

    fn cfg() -> ScenarioConfig<f64> {
        let mut c = ScenarioConfig::band_28ghz();
        c.n_cells = 3;
        c.k_listen = 2;
        c
    }

    #[test]
    fn init_serves_the_strongest_cell() {
        let all = samples(&[10.0, 20.0, 5.0]);
        let mut seen_companions = HashSet::new();
        for seed in 0..64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let state = init_association(&all, 2, &mut rng).unwrap();
            assert_eq!(state.serving_cell, 1);
            assert_eq!(state.listening_set.len(), 2);
            assert!(state.listening_set.contains(&1));
            assert_eq!(state.mode, DrxMode::Tracking);
            let companion = *state.listening_set.iter().find(|&&c| c != 1).unwrap();
            seen_companions.insert(companion);
        }
        // the companion is drawn uniformly over the remaining cells
        assert_eq!(seen_companions, HashSet::from([0, 2]));
    }

    #[test]
    fn init_with_k_equals_n_listens_everywhere() {
        let all = samples(&[10.0, 20.0, 5.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let state = init_association(&all, 3, &mut rng).unwrap();
        assert_eq!(state.listening_set, vec![0, 1, 2]);
    }

    #[test]
    fn init_breaks_ties_towards_the_lowest_index() {
        let all = samples(&[7.0, 7.0, 7.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(init_association(&all, 1, &mut rng).unwrap().serving_cell, 0);
    }

    #[test]
    fn init_rejects_oversized_listening_sets() {
        let all = samples(&[1.0, 2.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(init_association(&all, 3, &mut rng).is_err());
        assert!(init_association(&all, 0, &mut rng).is_err());
    }

    #[test]
    fn healthy_serving_cell_sticks() {
        let c = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let all = samples(&[0.0, -30.0, -30.0]);
        let mut state = init_association(&all, 2, &mut rng).unwrap();
        let set = state.listening_set.clone();
        let out = drx_step(&mut state, &subset(&all, &set), &c, &mut rng).unwrap();
        assert_eq!(out.event, DrxEvent::Served);
        assert_eq!(state.serving_cell, 0);
        assert_eq!(state.listening_set, set, "listening set is kept while tracking");
        assert_relative_eq!(out.awake_time_s, 2.0 * c.t_ss0_s);
        assert_relative_eq!(out.awake_time_s + out.slept_time_s, c.t_ss_per_s);
        assert!(!out.all_blocked);
    }

    #[test]
    fn blocked_serving_hands_over_to_best_alternative() {
        let c = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut state = DrxState {
            serving_cell: 0,
            listening_set: vec![0, 2],
            mode: DrxMode::Tracking,
            sweep_remaining: 0,
        };
        let all = samples(&[-10.0, -30.0, -2.0]);
        let out = drx_step(&mut state, &subset(&all, &[0, 2]), &c, &mut rng).unwrap();
        assert_eq!(out.event, DrxEvent::Handover);
        assert_eq!(state.serving_cell, 2);
        assert!(state.listening_set.contains(&2));
        assert_eq!(state.listening_set.len(), 2);
        assert_relative_eq!(out.awake_time_s, 2.0 * c.t_ss0_s);
    }

    #[test]
    fn fully_blocked_listening_set_triggers_a_sweep() {
        let c = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut state = DrxState {
            serving_cell: 0,
            listening_set: vec![0, 1],
            mode: DrxMode::Tracking,
            sweep_remaining: 0,
        };
        let all = samples(&[-20.0, -20.0, -20.0]);
        let out = drx_step(&mut state, &subset(&all, &[0, 1]), &c, &mut rng).unwrap();
        assert_eq!(out.event, DrxEvent::SweepTriggered);
        assert!(out.all_blocked);
        assert_eq!(state.mode, DrxMode::Sweeping);
        assert_eq!(state.sweep_remaining, 1);
        assert_relative_eq!(out.awake_time_s, c.t_ss_per_s);
        assert_eq!(out.slept_time_s, 0.0);
    }

    #[test]
    fn threshold_equality_counts_as_served() {
        let c = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut state = DrxState {
            serving_cell: 0,
            listening_set: vec![0, 1],
            mode: DrxMode::Tracking,
            sweep_remaining: 0,
        };
        let all = samples(&[c.gamma_min_db, -40.0, -40.0]);
        let out = drx_step(&mut state, &subset(&all, &[0, 1]), &c, &mut rng).unwrap();
        assert_eq!(out.event, DrxEvent::Served);
    }

    #[test]
    fn mismatched_samples_are_an_internal_error() {
        let c = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut state = DrxState {
            serving_cell: 0,
            listening_set: vec![0, 1],
            mode: DrxMode::Tracking,
            sweep_remaining: 0,
        };
        let all = samples(&[0.0, 0.0, 0.0]);
        let err = drx_step(&mut state, &subset(&all, &[0, 2]), &c, &mut rng).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }

    #[test]
    fn sweep_lasts_the_configured_cycle_count() {
        for sweep_len in [1u32, 3] {
            let mut c = cfg();
            c.sweep_len_cycles = sweep_len;
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let mut state = DrxState {
                serving_cell: 0,
                listening_set: vec![0, 1],
                mode: DrxMode::Tracking,
                sweep_remaining: 0,
            };
            let blocked = samples(&[-20.0, -20.0, -20.0]);
            let out = drx_step(&mut state, &subset(&blocked, &[0, 1]), &c, &mut rng).unwrap();
            assert_eq!(out.event, DrxEvent::SweepTriggered);

            // recovery samples make cell 2 the clear winner
            let recovered = samples(&[-20.0, -20.0, 4.0]);
            let mut sweep_cycles = 0;
            while state.mode == DrxMode::Sweeping {
                let out = sweep_step(&mut state, &recovered, &c, &mut rng).unwrap();
                assert_eq!(out.event, DrxEvent::Sweeping);
                assert_relative_eq!(out.awake_time_s, c.t_ss_per_s);
                sweep_cycles += 1;
                assert!(sweep_cycles <= sweep_len, "sweep overran its countdown");
            }
            assert_eq!(sweep_cycles, sweep_len);
            assert_eq!(state.serving_cell, 2, "re-association picks the max-SNR cell");
            assert_eq!(state.mode, DrxMode::Tracking);
        }
    }

    #[test]
    fn blocking_probability_is_a_product() {
        assert_relative_eq!(blocking_probability(&[0.5, 0.5]), 0.25);
        assert_eq!(blocking_probability(&[0.7, 0.0, 0.9]), 0.0);
        assert_relative_eq!(
            blocking_probability(&[0.3, 0.3, 0.3, 0.3]),
            0.0081,
            max_relative = 1e-12
        );
        // empty set: no usable link can exist
        assert_eq!(blocking_probability::<f64>(&[]), 1.0);
    }

    #[test]
    fn awake_bound_reference_points() {
        let c = ScenarioConfig::<f64>::band_28ghz();
        let (awake, sleep) = awake_fraction_bound(1.0, 4, &c);
        assert_eq!(awake, 1.0);
        assert_eq!(sleep, 0.0);
        let (awake, sleep) = awake_fraction_bound(0.0, 4, &c);
        assert_relative_eq!(awake, 0.14, max_relative = 1e-12);
        assert_relative_eq!(sleep, 0.86, max_relative = 1e-12);
        // empty-listening-set convention: P_B = 1 forces beta_awake = 1
        let (awake, _) = awake_fraction_bound(1.0, 0, &c);
        assert_eq!(awake, 1.0);
    }
}
