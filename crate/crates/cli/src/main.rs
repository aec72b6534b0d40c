//! `nemslab`: sweep transmission, current, or traversal-time curves for
//! negative-effective-mass slab structures and write them as CSV.
//!
//! Exit codes: 0 on success, 2 for configuration problems (bad flags, bad
//! config file, unwritable output), 3 for numerical failures (a sweep with
//! no usable rows, or a failed `--verify` cross-check).

use std::path::PathBuf;
use std::process::exit;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;

use nemslab_cli::{
    apply_flags, dump_presets, parse_config, parse_grid_flag, resolve, FlagOverrides, Mode,
    RawConfig,
};

#[derive(Parser)]
#[command(
    name = "nemslab",
    version,
    about = "Ballistic transport sweeps through negative-effective-mass slabs"
)]
struct Cli {
    /// Sweep mode: transmission, iv, traversal, or traversal_bias
    #[arg(long)]
    mode: Option<String>,

    /// Built-in parameter set (list them with --dump-presets)
    #[arg(long)]
    preset: Option<String>,

    /// Config file of key = value lines under [section] headers
    #[arg(long)]
    config: Option<PathBuf>,

    /// Sweep grid as min:max:n (energies in eV or voltages in V)
    #[arg(long)]
    grid: Option<String>,

    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads: an integer or 'auto'
    #[arg(long)]
    threads: Option<String>,

    /// Re-check about 1% of rows with an independent method
    #[arg(long)]
    verify: bool,

    /// Also write a gnuplot script next to the CSV
    #[arg(long)]
    gnuplot: bool,

    /// Print what every preset expands to, then exit
    #[arg(long)]
    dump_presets: bool,
}

fn main() {
    exit(run_main());
}

fn fail_config(message: impl std::fmt::Display) -> i32 {
    eprintln!("nemslab: {message}");
    2
}

fn run_main() -> i32 {
    let cli = Cli::parse();

    if cli.dump_presets {
        print!("{}", dump_presets());
        return 0;
    }

    let mode = match cli.mode.as_deref() {
        None => None,
        Some("transmission") => Some(Mode::Transmission),
        Some("iv") => Some(Mode::Iv),
        Some("traversal") => Some(Mode::Traversal),
        Some("traversal_bias") => Some(Mode::TraversalBias),
        Some(other) => {
            return fail_config(format!(
                "--mode: expected transmission, iv, traversal, or traversal_bias, got '{other}'"
            ));
        }
    };

    let grid = match &cli.grid {
        None => None,
        Some(spec) => match parse_grid_flag(spec) {
            Ok(g) => Some(g),
            Err(e) => return fail_config(e),
        },
    };

    let threads = match cli.threads.as_deref() {
        None => None,
        Some("auto") => Some(None),
        Some(n) => match n.parse::<usize>() {
            Ok(n) if n >= 1 => Some(Some(n)),
            _ => return fail_config(format!("--threads: expected a positive integer or 'auto', got '{n}'")),
        },
    };

    let mut raw = match &cli.config {
        None => RawConfig::default(),
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail_config(format!("cannot read {}: {e}", path.display())),
            };
            match parse_config(&text) {
                Ok(raw) => raw,
                Err(e) => return fail_config(e),
            }
        }
    };

    let flags = FlagOverrides {
        mode,
        preset: cli.preset.clone(),
        grid,
        out: cli.out.clone(),
        threads,
        verify: cli.verify,
        gnuplot: cli.gnuplot,
    };
    apply_flags(&mut raw, &flags);

    let cfg = match resolve(&raw) {
        Ok(cfg) => cfg,
        Err(e) => return fail_config(e),
    };

    let result = match nemslab_cli::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("nemslab: {e}");
            return e.exit_code();
        }
    };

    for (x, reason) in &result.dropped {
        eprintln!("nemslab: dropped row at {x}: {reason}");
    }

    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let csv = nemslab_cli::render_csv(&cfg, &result, timestamp);
    if let Err(e) = std::fs::write(&cfg.out, csv) {
        return fail_config(format!("cannot write {}: {e}", cfg.out.display()));
    }

    if cfg.gnuplot {
        let script_path = cfg.out.with_extension("gp");
        if let Err(e) = std::fs::write(&script_path, nemslab_cli::gnuplot_script(&cfg)) {
            return fail_config(format!("cannot write {}: {e}", script_path.display()));
        }
        eprintln!("nemslab: wrote {}", script_path.display());
    }

    if result.verified > 0 {
        eprintln!("nemslab: verified {} of {} rows", result.verified, result.rows.len());
    }
    eprintln!(
        "nemslab: wrote {} rows to {}{}",
        result.rows.len(),
        cfg.out.display(),
        if result.dropped.is_empty() {
            String::new()
        } else {
            format!(" ({} dropped)", result.dropped.len())
        }
    );
    0
}
