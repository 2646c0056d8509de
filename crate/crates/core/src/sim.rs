//! Trajectory engine: seeded generation of per-cell SNR trajectories and the
//! DRX run over them.
//!
//! A trajectory owns two ChaCha streams derived from the master seed so that
//! the channel realization is identical no matter how many listening-set
//! sizes are later evaluated on it (common random numbers), and so that
//! trajectories can run on any number of threads with identical results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blockage::BlockerField;
use crate::channel::{draw_link_states, sample_links, LinkSample};
use crate::drx::{drx_step, init_association, sweep_step, DrxEvent, DrxMode};
use crate::error::Result;
use crate::scalar::Real;
use crate::scenario::{build_deployment, Deployment, ScenarioConfig};

/// RNG for the world of trajectory `t`: deployment drop, LOS draws, blockers.
pub fn channel_rng(master_seed: u64, trajectory: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(2 * trajectory as u64 + 2);
    rng
}

/// RNG for the DRX policy of trajectory `t` (listening-set draws). Kept on a
/// separate stream so policy decisions never perturb the channel.
pub fn policy_rng(master_seed: u64, trajectory: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(2 * trajectory as u64 + 3);
    rng
}

/// A fully materialized channel trajectory: all-cell SNR samples for the
/// association instance (n = 0) and every monitoring instance 1..=n_steps.
#[derive(Clone, Debug)]
pub struct Trajectory<F> {
    pub deployment: Deployment<F>,
    /// samples[n][k] = sample of cell k at instance n.
    pub samples: Vec<Vec<LinkSample<F>>>,
}

/// Generate a trajectory on a given deployment, consuming `rng` for the LOS
/// states and the blocker process.
pub fn generate_trajectory_on<F: Real>(
    deployment: Deployment<F>,
    cfg: &ScenarioConfig<F>,
    rng: &mut ChaCha8Rng,
) -> Result<Trajectory<F>> {
    let link_states = draw_link_states(&deployment, cfg, rng);
    let mut field = BlockerField::init(cfg, deployment.ue_position.xy(), rng);
    let mut samples = Vec::with_capacity(cfg.n_steps + 1);
    samples.push(sample_links(&deployment, &link_states, &field, cfg, 0)?);
    for n in 1..=cfg.n_steps {
        field.step(rng);
        samples.push(sample_links(&deployment, &link_states, &field, cfg, n)?);
    }
    Ok(Trajectory {
        deployment,
        samples,
    })
}

/// Generate a trajectory with its own uniform UE drop.
pub fn generate_trajectory<F: Real>(
    cfg: &ScenarioConfig<F>,
    rng: &mut ChaCha8Rng,
) -> Result<Trajectory<F>> {
    let deployment = build_deployment(cfg, rng)?;
    generate_trajectory_on(deployment, cfg, rng)
}

/// Per-trajectory tallies of one DRX run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TrajectoryStats {
    /// Monitoring instances driven (excludes the association instance).
    pub n_steps: usize,
    /// Tracking-mode instances (the blocking-probability denominator).
    pub n_tracking: usize,
    /// Tracking instances with the whole listening set blocked.
    pub n_all_blocked: usize,
    pub n_handovers: usize,
    pub n_sweep_cycles: usize,
    /// Total awake seconds over the run.
    pub awake_s: f64,
    /// Awake fraction of the run.
    pub beta_awake: f64,
}

impl TrajectoryStats {
    /// Empirical blocking probability over tracking instances.
    pub fn p_blocking(&self) -> f64 {
        if self.n_tracking == 0 {
            1.0
        } else {
            self.n_all_blocked as f64 / self.n_tracking as f64
        }
    }

    pub fn beta_sleep(&self) -> f64 {
        1.0 - self.beta_awake
    }
}

/// One row of the optional event log.
#[derive(Clone, Copy, Debug)]
pub struct CycleRecord<F> {
    pub instance_n: usize,
    pub event: DrxEvent,
    /// Serving cell at the start of the instance.
    pub serving_before: usize,
    /// Its SNR at this instance, dB.
    pub serving_snr_db: F,
    /// Best listening-set SNR at this instance, dB.
    pub max_listening_snr_db: F,
    /// Serving cell after the instance.
    pub serving_after: usize,
    pub awake_s: F,
}

/// Drive the DRX tracker over a materialized trajectory with listening-set
/// size `k`, optionally recording per-cycle events.
pub fn run_drx<F: Real>(
    trajectory: &Trajectory<F>,
    k: usize,
    cfg: &ScenarioConfig<F>,
    rng: &mut ChaCha8Rng,
    mut log: Option<&mut Vec<CycleRecord<F>>>,
) -> Result<TrajectoryStats> {
    let mut state = init_association(&trajectory.samples[0], k, rng)?;
    let mut stats = TrajectoryStats::default();
    let mut awake = F::zero();
    for n in 1..=cfg.n_steps {
        let all = &trajectory.samples[n];
        let serving_before = state.serving_cell;
        let outcome = match state.mode {
            DrxMode::Tracking => {
                let listening: Vec<LinkSample<F>> = state
                    .listening_set
                    .iter()
                    .map(|&cell| all[cell])
                    .collect();
                drx_step(&mut state, &listening, cfg, rng)?
            }
            DrxMode::Sweeping => sweep_step(&mut state, all, cfg, rng)?,
        };
        stats.n_steps += 1;
        awake += outcome.awake_time_s;
        match outcome.event {
            DrxEvent::Served => stats.n_tracking += 1,
            DrxEvent::Handover => {
                stats.n_tracking += 1;
                stats.n_handovers += 1;
            }
            DrxEvent::SweepTriggered => {
                stats.n_tracking += 1;
                stats.n_all_blocked += 1;
            }
            DrxEvent::Sweeping => stats.n_sweep_cycles += 1,
        }
        if let Some(records) = log.as_deref_mut() {
            let serving_snr = all[serving_before].snr_db;
            let max_listening = state
                .listening_set
                .iter()
                .map(|&cell| all[cell].snr_db)
                .fold(F::neg_infinity(), F::max);
            records.push(CycleRecord {
                instance_n: n,
                event: outcome.event,
                serving_before,
                serving_snr_db: serving_snr,
                max_listening_snr_db: max_listening,
                serving_after: state.serving_cell,
                awake_s: outcome.awake_time_s,
            });
        }
    }
    stats.awake_s = awake.to_f64().unwrap();
    // per-cycle awake never exceeds the cycle; trim summation roundoff
    stats.beta_awake =
        (stats.awake_s / (cfg.n_steps as f64 * cfg.t_ss_per_s.to_f64().unwrap())).min(1.0);
    Ok(stats)
}

/// Generate and run a single trajectory on an existing deployment at the
/// configured `k_listen`, splitting `rng` into channel and policy streams.
pub fn run_trajectory<F: Real>(
    deployment: &Deployment<F>,
    cfg: &ScenarioConfig<F>,
    rng: &mut ChaCha8Rng,
) -> Result<TrajectoryStats> {
    use rand::Rng;
    let mut channel = ChaCha8Rng::seed_from_u64(rng.gen());
    let mut policy = ChaCha8Rng::seed_from_u64(rng.gen());
    let trajectory = generate_trajectory_on(deployment.clone(), cfg, &mut channel)?;
    run_drx(&trajectory, cfg.k_listen, cfg, &mut policy, None)
}
