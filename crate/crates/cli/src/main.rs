//! Command-line front end: resolves a run plan from band presets, config
//! files and flag overrides, executes the sweep, and writes the results CSV
//! plus a replayable manifest.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use drxsim_core::config::{
    load_config_file, parse_k_spec, BandConfig, ConfigSource, Overrides, RunManifest, RunPlan,
};
use drxsim_core::sweep::{
    default_fom_grid, emit_blocker_trace, emit_fom_sweep, emit_results, emit_traces, run_plan,
    RunMetrics,
};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Band {
    #[value(name = "28ghz")]
    B28,
    #[value(name = "140ghz")]
    B140,
    Both,
}

impl Band {
    fn labels(self) -> Vec<&'static str> {
        match self {
            Band::B28 => vec!["28ghz"],
            Band::B140 => vec!["140ghz"],
            Band::Both => vec!["28ghz", "140ghz"],
        }
    }
}

/// Monte Carlo simulator of connected-mode DRX over blockage-prone
/// mmWave/THz links.
#[derive(Debug, Parser)]
#[command(name = "drxsim", version, about)]
struct Args {
    /// Flat TOML config (scenario keys, optional [power] table) or a
    /// manifest.json from a previous run to replay.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Carrier band preset(s) to simulate.
    #[arg(long, value_enum, default_value = "both")]
    band: Band,

    /// Listening-set sizes: `4`, `1,4,9`, or an inclusive range `1..9`.
    #[arg(short = 'k', long = "k")]
    k: Option<String>,

    /// Number of independent trajectories per (band, K).
    #[arg(long)]
    trajectories: Option<usize>,

    /// Monitoring instances per trajectory.
    #[arg(long)]
    steps: Option<usize>,

    /// Master RNG seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,

    /// Also write per-step SNR traces and per-K DRX event logs.
    #[arg(long)]
    trace: bool,

    /// Also write the blocker mobility trace of trajectory 0 (large).
    #[arg(long)]
    trace_blockers: bool,

    /// Also write the RFFE power vs LNA figure-of-merit curves.
    #[arg(long)]
    fom_sweep: bool,

    /// Override any scenario field (`key=value`) or power field
    /// (`power.key=value`); repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,

    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn resolve_plan(args: &Args) -> drxsim_core::Result<RunPlan> {
    let mut file_overrides: Option<Overrides> = None;
    let mut plan: Option<RunPlan> = None;
    if let Some(path) = &args.config {
        match load_config_file(path)? {
            ConfigSource::Manifest(manifest) => plan = Some(manifest.plan),
            ConfigSource::Overrides(ov) => file_overrides = Some(ov),
        }
    }
    let replayed = plan.is_some();

    let mut plan = match plan {
        Some(plan) => plan,
        None => {
            let mut bands = Vec::new();
            for label in args.band.labels() {
                bands.push(BandConfig::preset(label)?);
            }
            RunPlan {
                seed: 0, // resolved below
                k_values: Vec::new(),
                bands,
            }
        }
    };

    let set_overrides = Overrides::from_set_args(&args.sets)?;
    for band in &mut plan.bands {
        if let Some(ov) = &file_overrides {
            ov.apply(band);
        }
        set_overrides.apply(band);
        if let Some(n) = args.trajectories {
            band.scenario.n_trajectories = n;
        }
        if let Some(n) = args.steps {
            band.scenario.n_steps = n;
        }
    }

    // master seed precedence: --seed flag, config-file rng_seed, then the
    // replayed or preset seed
    let seed = args
        .seed
        .or(set_overrides.rng_seed)
        .or_else(|| file_overrides.as_ref().and_then(|ov| ov.rng_seed))
        .unwrap_or(if replayed {
            plan.seed
        } else {
            plan.bands[0].scenario.rng_seed
        });
    plan.seed = seed;
    for band in &mut plan.bands {
        band.scenario.rng_seed = seed;
    }

    let n_cells = plan
        .bands
        .iter()
        .map(|b| b.scenario.n_cells)
        .min()
        .unwrap_or(1);
    if let Some(spec) = &args.k {
        plan.k_values = parse_k_spec(spec, n_cells)?;
    } else if plan.k_values.is_empty() {
        plan.k_values = (1..=n_cells).collect();
    }
    Ok(plan)
}

fn print_summary(rows: &[RunMetrics]) {
    println!(
        "{:>7} {:>3} {:>10} {:>11} {:>12} {:>12} {:>13}",
        "band", "k", "p_b", "beta_sleep", "handover/cyc", "sweep/cyc", "mean_power_mw"
    );
    for m in rows {
        println!(
            "{:>7} {:>3} {:>10.6} {:>11.4} {:>12.6} {:>12.6} {:>13.2}",
            m.band, m.k, m.p_b, m.beta_sleep, m.handover_rate, m.sweep_rate, m.mean_power_mw
        );
    }
}

fn run(args: &Args) -> drxsim_core::Result<()> {
    if let Some(threads) = args.threads {
        // harmless if a global pool was already built
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let plan = resolve_plan(args)?;
    let rows = run_plan(&plan)?;
    let manifest = RunManifest::new(plan.clone());
    let (csv_path, manifest_path) = emit_results(&rows, &args.out, &manifest)?;
    print_summary(&rows);
    println!("results:  {}", csv_path.display());
    println!("manifest: {}", manifest_path.display());
    if args.fom_sweep {
        let grid = default_fom_grid();
        for band in &plan.bands {
            let path = emit_fom_sweep(band, &grid, &args.out)?;
            println!("fom:      {}", path.display());
        }
    }
    if args.trace {
        for band in &plan.bands {
            for path in emit_traces(band, &plan.k_values, plan.seed, &args.out)? {
                println!("trace:    {}", path.display());
            }
        }
    }
    if args.trace_blockers {
        for band in &plan.bands {
            let path = emit_blocker_trace(band, plan.seed, &args.out)?;
            println!("blockers: {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("drxsim: {err}");
            ExitCode::FAILURE
        }
    }
}
