//! `lrvqe` command-line front end.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use lrvqe::circuit::{build_ansatz, cnot_count, AnsatzKind};
use lrvqe::config::{parse_config, ConfigFile};
use lrvqe::entanglement::{entanglement_error, negativity_profile, PairStrategy};
use lrvqe::error::{Error, Result};
use lrvqe::exact::{dense_matrix, dispersion, ground_state};
use lrvqe::model::{build_hamiltonian, critical_fields, ModelParams};
use lrvqe::report::{emit_reports, emit_scaling_csv};
use lrvqe::store::ResultStore;
use lrvqe::sweep::run_grid;
use lrvqe::vqe::{minimize, OptimizerConfig};

#[derive(Parser)]
#[command(
    name = "lrvqe",
    version,
    about = "VQE resource scaling on the long-range extended Ising chain"
)]
struct Cli {
    /// Seed override: optimizer seed for `vqe`, base seed for `sweep`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for the sweep.
    #[arg(long, global = true, env = "LRVQE_JOBS")]
    jobs: Option<usize>,

    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact diagnostics: ground energy, gap, negativity profile, dispersion.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "lambda")]
        lambda: f64,
        /// Evenly spaced momentum samples in [0, pi].
        #[arg(long = "k-samples", default_value_t = 2)]
        k_samples: usize,
        #[arg(long, default_value = "average")]
        strategy: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// One VQE optimization against the exact benchmark.
    Vqe {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "lambda")]
        lambda: f64,
        #[arg(long)]
        ansatz: String,
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long, default_value = "average")]
        strategy: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the configured grid into a result store.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
        /// Continue into a store that already holds runs.
        #[arg(long)]
        resume: bool,
    },
    /// Aggregate a store into scaling.csv.
    Fit {
        #[arg(long = "in")]
        store_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit every report artifact (scaling.csv, fits.csv, plot data).
    Report {
        #[arg(long = "in")]
        store_dir: PathBuf,
    },
}

fn write_json(path: &PathBuf, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("serializing output: {e}")))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn cmd_exact(
    n: usize,
    alpha: f64,
    lambda: f64,
    k_samples: usize,
    strategy: &str,
    out: &PathBuf,
) -> Result<()> {
    let strategy: PairStrategy = strategy.parse()?;
    let params = ModelParams::new(n, alpha, lambda)?;
    let ham = build_hamiltonian(&params);
    let solution = ground_state(&dense_matrix(&ham)?)?;
    let profile = negativity_profile(&solution.state, strategy)?;
    let (h_c0, h_cpi) = critical_fields(&params);
    let samples: Vec<_> = match k_samples {
        0 => Vec::new(),
        1 => vec![dispersion(&params, 0.0)],
        m => (0..m)
            .map(|j| {
                let k = std::f64::consts::PI * j as f64 / (m - 1) as f64;
                dispersion(&params, k)
            })
            .collect(),
    };
    write_json(
        out,
        &serde_json::json!({
            "params": params,
            "field": params.field(),
            "e0": solution.energy,
            "gap": solution.gap,
            "critical_fields": {"k0": h_c0, "kpi": h_cpi},
            "negativity_profile": profile,
            "dispersion": samples,
        }),
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_vqe(
    n: usize,
    alpha: f64,
    lambda: f64,
    ansatz: &str,
    layers: usize,
    seed: u64,
    restarts: Option<usize>,
    strategy: &str,
    out: &PathBuf,
) -> Result<()> {
    let kind: AnsatzKind = ansatz.parse()?;
    let strategy: PairStrategy = strategy.parse()?;
    let params = ModelParams::new(n, alpha, lambda)?;
    let ham = build_hamiltonian(&params);
    let solution = ground_state(&dense_matrix(&ham)?)?;
    let spec = build_ansatz(kind, n, layers)?;
    let mut cfg = OptimizerConfig {
        seed,
        ..Default::default()
    };
    if let Some(r) = restarts {
        cfg.restarts = r;
    }
    let result = minimize(&spec, &ham, &cfg, &solution)?;
    let exact_profile = negativity_profile(&solution.state, strategy)?;
    let trial_profile = negativity_profile(&result.state, strategy)?;
    let ent_error = entanglement_error(&trial_profile, &exact_profile)?;
    write_json(
        out,
        &serde_json::json!({
            "params": params,
            "ansatz": kind.token(),
            "layers": layers,
            "total_params": spec.total_params,
            "cnots": cnot_count(kind, n, layers)?,
            "optimizer": cfg,
            "energy": result.energy,
            "exact_energy": solution.energy,
            "gap": solution.gap,
            "fidelity": result.fidelity,
            "ent_error": ent_error,
            "strategy": strategy,
            "n_iters": result.n_iters,
            "total_iters": result.total_iters,
            "n_iters_mean": result.mean_restart_iters(),
            "converged": result.converged,
            "best_params": result.best_params,
        }),
    )
}

fn cmd_sweep(
    config_path: &PathBuf,
    out_dir: &PathBuf,
    resume: bool,
    seed: Option<u64>,
    quiet: bool,
) -> Result<()> {
    let mut config: ConfigFile = parse_config(config_path)?;
    if let Some(s) = seed {
        config.base_seed = s;
    }
    let store = ResultStore::open(out_dir)?;
    if store.has_any_runs()? && !resume {
        return Err(Error::Config(format!(
            "store at {} already contains runs; pass --resume to continue",
            out_dir.display()
        )));
    }
    let canonical = config.canonical_json();
    if store.resolved_config_path().exists() {
        let existing = store.read_resolved_config()?;
        if existing != canonical {
            return Err(Error::Config(format!(
                "resolved config in {} differs from the requested one; \
                 use a fresh --out-dir or the original config",
                out_dir.display()
            )));
        }
    } else {
        store.write_resolved_config(&canonical)?;
    }
    let sweep_cfg = config.sweep_config();
    let outcome = run_grid(&sweep_cfg, &store, |record, fresh| {
        if !quiet {
            eprintln!(
                "alpha={} lambda={} n={} kind={} p={} E(p)={:.3e} fidelity={:.6} [{}]",
                record.alpha,
                record.lambda,
                record.n,
                record.kind.token(),
                record.p,
                record.ent_error,
                record.fidelity,
                if fresh { "new" } else { "cached" }
            );
        }
    })?;
    if !quiet {
        eprintln!(
            "sweep complete: {} records ({} new)",
            outcome.records.len(),
            outcome.new_runs
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Exact {
            n,
            alpha,
            lambda,
            k_samples,
            strategy,
            out,
        } => cmd_exact(*n, *alpha, *lambda, *k_samples, strategy, out),
        Command::Vqe {
            n,
            alpha,
            lambda,
            ansatz,
            layers,
            restarts,
            strategy,
            out,
        } => cmd_vqe(
            *n,
            *alpha,
            *lambda,
            ansatz,
            *layers,
            cli.seed.unwrap_or(0),
            *restarts,
            strategy,
            out,
        ),
        Command::Sweep {
            config,
            out_dir,
            resume,
        } => cmd_sweep(config, out_dir, *resume, cli.seed, cli.quiet),
        Command::Fit { store_dir, out } => {
            let store = ResultStore::open(store_dir)?;
            let out_path = out.clone().unwrap_or_else(|| store.scaling_csv_path());
            emit_scaling_csv(&store, &out_path)?;
            if !cli.quiet {
                eprintln!("wrote {}", out_path.display());
            }
            Ok(())
        }
        Command::Report { store_dir } => {
            let store = ResultStore::open(store_dir)?;
            let written = emit_reports(&store)?;
            if !cli.quiet {
                for path in written {
                    eprintln!("wrote {}", path.display());
                }
            }
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the pool can only be installed once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
