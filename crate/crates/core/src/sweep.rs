//! Monte Carlo orchestration: trajectory batches per band, listening-set
//! sweeps over common random numbers, metric aggregation with normal-theory
//! confidence intervals, and deterministic CSV/JSON emission.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::blockage::BlockerField;
use crate::channel::draw_link_states;
use crate::config::{BandConfig, RunManifest, RunPlan};
use crate::drx::DrxEvent;
use crate::error::{Error, Result};
use crate::power::{fom_sweep, mean_drx_power_w};
use crate::scenario::build_deployment;
use crate::sim::{channel_rng, generate_trajectory, policy_rng, run_drx, CycleRecord, TrajectoryStats};

/// Aggregated metrics of one (band, K) cell of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct RunMetrics {
    pub band: String,
    pub k: usize,
    /// Mean empirical blocking probability across trajectories.
    pub p_b: f64,
    pub p_b_ci95: f64,
    pub beta_awake: f64,
    pub beta_awake_ci95: f64,
    pub beta_sleep: f64,
    pub beta_sleep_ci95: f64,
    /// Handover events per monitoring instance.
    pub handover_rate: f64,
    /// Sweep triggers per monitoring instance.
    pub sweep_rate: f64,
    /// Duty-cycled mean front-end draw, mW.
    pub mean_power_mw: f64,
}

fn mean_and_ci95(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, 1.96 * (var / n as f64).sqrt())
}

/// Per-trajectory stats for every requested K, over common random numbers:
/// the channel realization of trajectory `t` is generated once and replayed
/// for each listening-set size.
pub fn per_trajectory_stats(
    band: &BandConfig,
    k_values: &[usize],
    seed: u64,
) -> Result<Vec<Vec<TrajectoryStats>>> {
    let cfg = &band.scenario;
    cfg.validate()?;
    for &k in k_values {
        if k == 0 || k > cfg.n_cells {
            return Err(Error::Config(format!(
                "listening-set size {k} outside 1..={} for band {}",
                cfg.n_cells, band.label
            )));
        }
    }
    (0..cfg.n_trajectories)
        .into_par_iter()
        .map(|t| {
            let mut crng = channel_rng(seed, t);
            let trajectory = generate_trajectory(cfg, &mut crng)?;
            k_values
                .iter()
                .map(|&k| {
                    let mut prng = policy_rng(seed, t);
                    run_drx(&trajectory, k, cfg, &mut prng, None)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// Sweep one band over the listening-set sizes and aggregate.
pub fn run_band_sweep(band: &BandConfig, k_values: &[usize], seed: u64) -> Result<Vec<RunMetrics>> {
    let stats = per_trajectory_stats(band, k_values, seed)?;
    Ok(aggregate(band, k_values, &stats))
}

/// Fold per-trajectory stats (trajectory-major) into one row per K.
pub fn aggregate(
    band: &BandConfig,
    k_values: &[usize],
    stats: &[Vec<TrajectoryStats>],
) -> Vec<RunMetrics> {
    k_values
        .iter()
        .enumerate()
        .map(|(ki, &k)| {
            let column: Vec<&TrajectoryStats> = stats.iter().map(|row| &row[ki]).collect();
            let p_bs: Vec<f64> = column.iter().map(|s| s.p_blocking()).collect();
            let betas: Vec<f64> = column.iter().map(|s| s.beta_awake).collect();
            let (p_b, p_b_ci95) = mean_and_ci95(&p_bs);
            let (beta_awake, beta_awake_ci95) = mean_and_ci95(&betas);
            let steps: usize = column.iter().map(|s| s.n_steps).sum();
            let handovers: usize = column.iter().map(|s| s.n_handovers).sum();
            let triggers: usize = column.iter().map(|s| s.n_all_blocked).sum();
            let mean_power_mw =
                mean_drx_power_w(beta_awake, &band.power, 0.0) * 1e3;
            RunMetrics {
                band: band.label.clone(),
                k,
                p_b,
                p_b_ci95,
                beta_awake,
                beta_awake_ci95,
                beta_sleep: 1.0 - beta_awake,
                beta_sleep_ci95: beta_awake_ci95,
                handover_rate: handovers as f64 / steps as f64,
                sweep_rate: triggers as f64 / steps as f64,
                mean_power_mw,
            }
        })
        .collect()
}

/// Run every band of a plan; rows are ordered band-major, then by K.
pub fn run_plan(plan: &RunPlan) -> Result<Vec<RunMetrics>> {
    let mut rows = Vec::new();
    for band in &plan.bands {
        rows.extend(run_band_sweep(band, &plan.k_values, plan.seed)?);
    }
    Ok(rows)
}

pub const RESULTS_HEADER: &str =
    "band,k,p_b,p_b_ci95,beta_awake,beta_sleep,beta_sleep_ci95,handover_rate,sweep_rate,mean_power_mw";

/// Render the results CSV (byte-deterministic for a given metric list).
pub fn results_csv(metrics: &[RunMetrics]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for m in metrics {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            m.band,
            m.k,
            m.p_b,
            m.p_b_ci95,
            m.beta_awake,
            m.beta_sleep,
            m.beta_sleep_ci95,
            m.handover_rate,
            m.sweep_rate,
            m.mean_power_mw
        );
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Write `results.csv` and `manifest.json` under `out_dir`; returns both
/// paths.
pub fn emit_results(
    metrics: &[RunMetrics],
    out_dir: &Path,
    manifest: &RunManifest,
) -> Result<(PathBuf, PathBuf)> {
    if metrics.is_empty() {
        return Err(Error::Internal("no metrics to emit".into()));
    }
    let csv_path = out_dir.join("results.csv");
    write_file(&csv_path, &results_csv(metrics))?;
    let manifest_path = out_dir.join("manifest.json");
    let json = serde_json::to_string_pretty(manifest).map_err(|e| Error::Parse {
        path: manifest_path.clone(),
        message: e.to_string(),
    })?;
    write_file(&manifest_path, &(json + "\n"))?;
    Ok((csv_path, manifest_path))
}

/// Write the Fig.-3-style RFFE power curve for one band's front end.
pub fn emit_fom_sweep(band: &BandConfig, grid: &[f64], out_dir: &Path) -> Result<PathBuf> {
    let mut out = String::from("fom_inv_mw,power_mw\n");
    for (fom, watts) in fom_sweep(&band.power, grid) {
        let _ = writeln!(out, "{},{}", fom, watts * 1e3);
    }
    let path = out_dir.join(format!("fom_sweep_{}.csv", band.label));
    write_file(&path, &out)?;
    Ok(path)
}

/// Default FoM grid: 1..15 mW^-1 in quarter steps.
pub fn default_fom_grid() -> Vec<f64> {
    (4..=60).map(|i| i as f64 * 0.25).collect()
}

/// Per-step SNR and DRX event traces, regenerated from the same streams the
/// sweep used so they match the emitted metrics exactly.
pub fn emit_traces(
    band: &BandConfig,
    k_values: &[usize],
    seed: u64,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let cfg = &band.scenario;
    let mut paths = Vec::new();

    let mut snr = String::from("traj_id,n,cell_k,snr_db,blocked\n");
    let mut event_logs: Vec<String> = k_values
        .iter()
        .map(|_| String::from("traj_id,n,event,serving_cell,awake_s\n"))
        .collect();
    for t in 0..cfg.n_trajectories {
        let mut crng = channel_rng(seed, t);
        let trajectory = generate_trajectory(cfg, &mut crng)?;
        for row in &trajectory.samples {
            for s in row {
                let _ = writeln!(
                    snr,
                    "{},{},{},{},{}",
                    t, s.instance_n, s.cell_k, s.snr_db, s.blocked
                );
            }
        }
        for (ki, &k) in k_values.iter().enumerate() {
            let mut prng = policy_rng(seed, t);
            let mut log: Vec<CycleRecord<f64>> = Vec::new();
            run_drx(&trajectory, k, cfg, &mut prng, Some(&mut log))?;
            for r in &log {
                let _ = writeln!(
                    event_logs[ki],
                    "{},{},{},{},{}",
                    t,
                    r.instance_n,
                    r.event.as_str(),
                    r.serving_after,
                    r.awake_s
                );
            }
        }
    }
    let snr_path = out_dir.join(format!("snr_trace_{}.csv", band.label));
    write_file(&snr_path, &snr)?;
    paths.push(snr_path);
    for (ki, &k) in k_values.iter().enumerate() {
        let path = out_dir.join(format!("events_{}_k{}.csv", band.label, k));
        write_file(&path, &event_logs[ki])?;
        paths.push(path);
    }
    Ok(paths)
}

/// Blocker positions/velocities of trajectory 0, for debugging mobility.
/// Replays the world stream exactly as the sweep consumed it.
pub fn emit_blocker_trace(band: &BandConfig, seed: u64, out_dir: &Path) -> Result<PathBuf> {
    let cfg = &band.scenario;
    let mut rng = channel_rng(seed, 0);
    let deployment = build_deployment(cfg, &mut rng)?;
    let _states = draw_link_states(&deployment, cfg, &mut rng);
    let mut field = BlockerField::init(cfg, deployment.ue_position.xy(), &mut rng);
    let mut out = String::from("n,blocker_id,x,y,vx,vy\n");
    let dump = |n: usize, field: &BlockerField<f64>, out: &mut String| {
        for (id, b) in field.blockers.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                n, id, b.position_xy.x, b.position_xy.y, b.velocity_xy.x, b.velocity_xy.y
            );
        }
    };
    dump(0, &field, &mut out);
    for n in 1..=cfg.n_steps {
        field.step(&mut rng);
        dump(n, &field, &mut out);
    }
    let path = out_dir.join(format!("blockers_{}_traj0.csv", band.label));
    write_file(&path, &out)?;
    Ok(path)
}

/// Count of events of one kind across a stats table (handy for tests).
pub fn total_events(stats: &[Vec<TrajectoryStats>], ki: usize, event: DrxEvent) -> usize {
    stats
        .iter()
        .map(|row| match event {
            DrxEvent::Handover => row[ki].n_handovers,
            DrxEvent::SweepTriggered => row[ki].n_all_blocked,
            DrxEvent::Sweeping => row[ki].n_sweep_cycles,
            DrxEvent::Served => {
                row[ki].n_tracking - row[ki].n_handovers - row[ki].n_all_blocked
            }
        })
        .sum()
}
