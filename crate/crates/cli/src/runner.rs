//! Sweep execution and output rendering.
//!
//! The runner walks the configured grid in parallel (rayon over row indices,
//! collected back in index order, so the output is identical for any thread
//! count), drops rows whose physics fails with a logged reason, optionally
//! re-checks a sample of rows with an independent method, and renders the
//! survivors as CSV with a `#`-prefixed metadata block.

use std::fmt;

use nemslab_core::{
    current, integrate_through, solve_n_layer, traversal_at_bias, traversal_numeric, wavenumber,
    BiasModel, TimeRegime, TransportError,
};
use rayon::prelude::*;

use crate::config::{Mode, SweepConfig};

/// Failure that aborts the whole run (individual bad rows are dropped, not
/// fatal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunError {
    /// Setup problems (thread pool construction and the like); exit 2.
    Setup(String),
    /// The sweep produced nothing usable, or verification found a mismatch;
    /// exit 3.
    Numeric(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Setup(_) => 2,
            RunError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Setup(m) => write!(f, "setup: {m}"),
            RunError::Numeric(m) => write!(f, "numerical: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

/// One CSV cell: a number rendered at 12 significant digits, or a fixed
/// label (the regime column).
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(&'static str),
}

impl Cell {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.11e}"),
            Cell::Text(t) => (*t).to_string(),
        }
    }
}

/// Output of a sweep, before CSV rendering.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    /// Grid values whose rows failed, with the reason; logged, not emitted.
    pub dropped: Vec<(f64, String)>,
    /// How many rows the `--verify` pass re-checked (0 when off).
    pub verified: usize,
}

/// Uniform grid with both endpoints included.
pub fn grid_points(min: f64, max: f64, n: usize) -> Vec<f64> {
    let h = (max - min) / (n - 1) as f64;
    (0..n).map(|i| min + i as f64 * h).collect()
}

pub fn columns_for(mode: Mode) -> &'static [&'static str] {
    match mode {
        Mode::Transmission => &["E_eV", "T", "R", "k2_re", "k2_im"],
        Mode::Iv => &["V_volt", "J_norm", "J_abs"],
        Mode::Traversal => &["E_eV", "tau_fs", "tau_no_slab_fs", "tau_no_refl_fs", "alpha", "regime"],
        Mode::TraversalBias => {
            &["V_volt", "tau_fs", "tau_no_slab_fs", "tau_no_refl_fs", "alpha", "regime"]
        }
    }
}

fn regime_name(regime: TimeRegime) -> &'static str {
    match regime {
        TimeRegime::Fast => "fast",
        TimeRegime::Slow => "slow",
        TimeRegime::Equal => "equal",
    }
}

/// Run the configured sweep.  Respects `cfg.threads` by installing a local
/// pool of that size; `None` uses the process-wide default.
pub fn run(cfg: &SweepConfig) -> Result<SweepResult, RunError> {
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::Setup(format!("thread pool: {e}")))?
            .install(|| run_on_current_pool(cfg)),
        None => run_on_current_pool(cfg),
    }
}

fn run_on_current_pool(cfg: &SweepConfig) -> Result<SweepResult, RunError> {
    let xs = grid_points(cfg.grid.0, cfg.grid.1, cfg.grid.2);

    let outcomes: Vec<Result<Vec<Cell>, TransportError>> = match cfg.mode {
        Mode::Transmission => {
            let biased = cfg.structure.apply_bias(&cfg.bias);
            xs.par_iter().map(|&e| transmission_row(e, &biased)).collect()
        }
        Mode::Iv => xs
            .par_iter()
            .map(|&v| {
                current(v, &cfg.structure, cfg.bias.kind, &cfg.landauer)
                    .map(|p| vec![Cell::Num(v), Cell::Num(p.j_norm), Cell::Num(p.j_abs)])
            })
            .collect(),
        Mode::Traversal => {
            let biased = cfg.structure.apply_bias(&cfg.bias);
            xs.par_iter()
                .map(|&e| traversal_at_bias(e, &biased).map(|r| traversal_cells(e, &r)))
                .collect()
        }
        Mode::TraversalBias => xs
            .par_iter()
            .map(|&v| {
                let biased = cfg.structure.apply_bias(&BiasModel {
                    kind: cfg.bias.kind,
                    voltage: v,
                });
                traversal_at_bias(cfg.fixed_energy, &biased).map(|r| traversal_cells(v, &r))
            })
            .collect(),
    };

    let mut rows = Vec::with_capacity(xs.len());
    let mut dropped = Vec::new();
    for (&x, outcome) in xs.iter().zip(outcomes) {
        match outcome {
            Ok(cells) => rows.push(cells),
            Err(e) => dropped.push((x, e.to_string())),
        }
    }

    if rows.is_empty() {
        let first = &dropped[0];
        return Err(RunError::Numeric(format!(
            "every grid point failed; first failure at {}: {}",
            first.0, first.1
        )));
    }

    let verified = if cfg.verify { verify_rows(cfg, &rows)? } else { 0 };

    Ok(SweepResult {
        columns: columns_for(cfg.mode),
        rows,
        dropped,
        verified,
    })
}

fn transmission_row(e: f64, biased: &nemslab_core::Heterostructure) -> Result<Vec<Cell>, TransportError> {
    let sol = solve_n_layer(e, biased)?;
    let k2 = wavenumber(e, &biased.interior[0])?;
    Ok(vec![
        Cell::Num(e),
        Cell::Num(sol.transmission),
        Cell::Num(sol.reflection),
        Cell::Num(k2.value.re),
        Cell::Num(k2.value.im),
    ])
}

fn traversal_cells(x: f64, r: &nemslab_core::TraversalReport) -> Vec<Cell> {
    vec![
        Cell::Num(x),
        Cell::Num(r.tau),
        Cell::Num(r.tau_no_slab),
        Cell::Num(r.tau_no_refl),
        Cell::Num(r.alpha),
        Cell::Text(regime_name(r.regime)),
    ]
}

/// Re-check every 100th emitted row against an independent computation:
/// the RK4 integrator for transmission, a doubled integration grid for
/// currents, and a refined quadrature for traversal times.  Any mismatch
/// fails the run.
fn verify_rows(cfg: &SweepConfig, rows: &[Vec<Cell>]) -> Result<usize, RunError> {
    let sampled: Vec<usize> = (0..rows.len()).step_by(100).collect();
    let mut failures: Vec<String> = Vec::new();

    match cfg.mode {
        Mode::Transmission => {
            let biased = cfg.structure.apply_bias(&cfg.bias);
            let thinnest = biased
                .interior
                .iter()
                .map(|l| l.thickness)
                .fold(f64::INFINITY, f64::min);
            let step = (thinnest / 16.0).min(1e-3);
            for &i in &sampled {
                let e = rows[i][0].as_num().unwrap();
                let t = rows[i][1].as_num().unwrap();
                match integrate_through(e, &biased, step) {
                    Ok(r) if (r.transmission - t).abs() <= 1e-6 => {}
                    Ok(r) => failures.push(format!(
                        "E = {e}: T = {t} but the integrator finds {}",
                        r.transmission
                    )),
                    Err(err) => failures.push(format!("E = {e}: integrator failed: {err}")),
                }
            }
        }
        Mode::Iv => {
            let mut dense = cfg.landauer.clone();
            dense.grid.n_points = 2 * cfg.landauer.grid.n_points + 1;
            for &i in &sampled {
                let v = rows[i][0].as_num().unwrap();
                let j = rows[i][1].as_num().unwrap();
                match current(v, &cfg.structure, cfg.bias.kind, &dense) {
                    Ok(p) => {
                        let ok = if j.abs() < 1e-20 {
                            p.j_norm.abs() < 1e-20
                        } else {
                            ((p.j_norm - j) / j).abs() <= 5e-3
                        };
                        if !ok {
                            failures.push(format!(
                                "V = {v}: J = {j} moves to {} on a doubled grid",
                                p.j_norm
                            ));
                        }
                    }
                    Err(err) => failures.push(format!("V = {v}: dense re-integration failed: {err}")),
                }
            }
        }
        Mode::Traversal | Mode::TraversalBias => {
            for &i in &sampled {
                let x = rows[i][0].as_num().unwrap();
                let tau = rows[i][1].as_num().unwrap();
                let (e, biased) = if cfg.mode == Mode::Traversal {
                    (x, cfg.structure.apply_bias(&cfg.bias))
                } else {
                    let biased = cfg.structure.apply_bias(&BiasModel {
                        kind: cfg.bias.kind,
                        voltage: x,
                    });
                    (cfg.fixed_energy, biased)
                };
                match traversal_numeric(e, &biased, 8192) {
                    Ok(t2) if ((t2 - tau) / tau).abs() <= 1e-6 => {}
                    Ok(t2) => failures.push(format!(
                        "x = {x}: tau = {tau} but refined quadrature finds {t2}"
                    )),
                    Err(err) => failures.push(format!("x = {x}: quadrature failed: {err}")),
                }
            }
        }
    }

    if failures.is_empty() {
        Ok(sampled.len())
    } else {
        Err(RunError::Numeric(format!(
            "verification failed on {} of {} sampled rows; first: {}",
            failures.len(),
            sampled.len(),
            failures[0]
        )))
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Hash of the physical constant set, so output files record which values
/// produced them.
pub fn constant_set_hash() -> String {
    let c = nemslab_core::constants();
    let mut bytes = Vec::with_capacity(32);
    for v in [c.hbar_sq_over_2m0, c.hbar, c.kb, c.m0] {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    format!("{:016x}", fnv1a64(&bytes))
}

/// Render the result as CSV text.  Everything except the timestamp line is a
/// pure function of the configuration, so two runs of the same config differ
/// in at most that one line.
pub fn render_csv(cfg: &SweepConfig, result: &SweepResult, timestamp_unix_s: u64) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# nemslab {} (core {})\n",
        env!("CARGO_PKG_VERSION"),
        nemslab_core::VERSION
    ));
    out.push_str(&format!("# generated-unix-s: {timestamp_unix_s}\n"));
    out.push_str(&format!("# constants-fnv1a: {}\n", constant_set_hash()));
    out.push_str(&format!(
        "# rows: {} of {} requested, {} dropped\n",
        result.rows.len(),
        cfg.grid.2,
        result.dropped.len()
    ));
    if result.verified > 0 {
        out.push_str(&format!("# verified: {} rows re-checked\n", result.verified));
    }
    out.push_str("# config:\n");
    for line in cfg.echo().lines() {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            out.push_str(&format!("#   {line}\n"));
        }
    }
    if !cfg.overridden.is_empty() {
        out.push_str(&format!(
            "# overridden by flags: {}\n",
            cfg.overridden.join(", ")
        ));
    }
    out.push_str(&result.columns.join(","));
    out.push('\n');
    for row in &result.rows {
        let cells: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Companion gnuplot script for a rendered CSV.  Written next to the CSV and
/// meant to be run from that directory.
pub fn gnuplot_script(cfg: &SweepConfig) -> String {
    let csv = cfg
        .out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| cfg.out.display().to_string());
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str("set grid\n");
    match cfg.mode {
        Mode::Transmission => {
            s.push_str("set xlabel 'E (eV)'\nset ylabel 'probability'\n");
            s.push_str(&format!(
                "plot '{csv}' using 1:2 with lines lw 2, '' using 1:3 with lines\n"
            ));
        }
        Mode::Iv => {
            s.push_str("set xlabel 'V (V)'\nset ylabel 'J (normalized)'\n");
            s.push_str(&format!("plot '{csv}' using 1:2 with lines lw 2\n"));
        }
        Mode::Traversal => {
            s.push_str("set xlabel 'E (eV)'\nset ylabel 'time (fs)'\n");
            s.push_str(&format!(
                "plot '{csv}' using 1:2 with lines lw 2, '' using 1:3 with lines, \
                 '' using 1:4 with lines\n"
            ));
        }
        Mode::TraversalBias => {
            s.push_str("set xlabel 'V (V)'\nset ylabel 'time (fs)'\n");
            s.push_str(&format!(
                "plot '{csv}' using 1:2 with lines lw 2, '' using 1:3 with lines, \
                 '' using 1:4 with lines\n"
            ));
        }
    }
    s
}
