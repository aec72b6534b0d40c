//! Sweep configuration: presets, the key=value config file format, and the
//! merge of file keys with command-line flags.
//!
//! A config file is a flat list of `key = value` lines grouped under bracketed
//! section headers (`[structure]`, `[grid]`, `[bias]`, `[landauer]`,
//! `[output]`), with `#` starting a comment.  The only key allowed before the
//! first section header is `mode`.  Unknown sections, unknown keys, duplicate
//! keys, and malformed values are all hard errors that name the offending
//! line.  Flags given on the command line override file keys.
//!
//! [`SweepConfig::echo`] serializes the fully resolved configuration back into
//! this same format; feeding that text through [`parse_config`] and
//! [`resolve`] reproduces the configuration exactly, which is what the output
//! metadata block relies on.

use std::fmt;
use std::path::PathBuf;

use nemslab_core::{
    BiasKind, BiasModel, EnergyGrid, Heterostructure, LandauerConfig, Layer, SlabVariant,
    SupplyForm, CONSTANTS,
};

/// What quantity the sweep runs over and what columns come out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Transmission and reflection versus incident energy.
    Transmission,
    /// Current density versus applied bias.
    Iv,
    /// Traversal times versus incident energy.
    Traversal,
    /// Traversal times at a fixed energy versus applied bias.
    TraversalBias,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Transmission => "transmission",
            Mode::Iv => "iv",
            Mode::Traversal => "traversal",
            Mode::TraversalBias => "traversal_bias",
        }
    }

    fn parse(s: &str) -> Option<Mode> {
        match s {
            "transmission" => Some(Mode::Transmission),
            "iv" => Some(Mode::Iv),
            "traversal" => Some(Mode::Traversal),
            "traversal_bias" => Some(Mode::TraversalBias),
            _ => None,
        }
    }
}

/// Error from config parsing or resolution.  Carries the 1-based line number
/// when the problem can be pinned to a specific line of the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "config: line {}: {}", n, self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// A value that may be the literal `auto` or an explicit number.
#[derive(Debug, Clone, Copy, PartialEq)]
enum AutoOrNum {
    Auto,
    Num(f64),
}

/// Everything a config file may set, all optional.  Flags overlay onto this
/// before resolution fills in defaults.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    mode: Option<Mode>,
    preset: Option<String>,
    left_mass: Option<f64>,
    left_potential: Option<f64>,
    right_mass: Option<f64>,
    right_potential: Option<f64>,
    layers: Option<Vec<(f64, f64, f64)>>,
    grid_min: Option<f64>,
    grid_max: Option<f64>,
    grid_n: Option<usize>,
    fixed_energy: Option<f64>,
    bias_kind: Option<BiasKind>,
    bias_voltage: Option<f64>,
    temperature: Option<f64>,
    fermi_level: Option<f64>,
    supply_mass: Option<AutoOrNum>,
    form: Option<SupplyForm>,
    e_min: Option<f64>,
    e_max: Option<AutoOrNum>,
    e_points: Option<usize>,
    out: Option<PathBuf>,
    threads: Option<Option<usize>>,
    verify: Option<bool>,
    gnuplot: Option<bool>,
    /// Keys where a command-line flag displaced a value from the file,
    /// recorded so the metadata echo can note the override.
    overridden: Vec<&'static str>,
}

/// The six built-in parameter sets.  Names are opaque scenario identifiers;
/// `nemslab --dump-presets` prints what each one expands to.
pub const PRESET_NAMES: [&str; 6] = [
    "fig1a-5nm",
    "fig1a-15nm",
    "fig1b-30nm",
    "fig1b-34nm",
    "fig3c",
    "fig3d",
];

fn preset_definition(name: &str) -> Option<(SlabVariant, f64, Mode)> {
    match name {
        "fig1a-5nm" => Some((SlabVariant::Standard, 5.0, Mode::Transmission)),
        "fig1a-15nm" => Some((SlabVariant::Standard, 15.0, Mode::Transmission)),
        "fig1b-30nm" => Some((SlabVariant::Standard, 30.0, Mode::Transmission)),
        "fig1b-34nm" => Some((SlabVariant::Standard, 34.0, Mode::Transmission)),
        "fig3c" => Some((SlabVariant::EqualMass, 5.0, Mode::Traversal)),
        "fig3d" => Some((SlabVariant::Standard, 5.0, Mode::TraversalBias)),
        _ => None,
    }
}

/// Structure a preset expands to, for `--dump-presets` and resolution.
pub fn preset_structure(name: &str) -> Option<Heterostructure> {
    preset_definition(name).map(|(variant, d, _)| {
        nemslab_core::reference_slab(d, variant).expect("built-in preset parameters are valid")
    })
}

/// Human-readable table of every preset, used by `--dump-presets`.
pub fn dump_presets() -> String {
    let mut out = String::new();
    for name in PRESET_NAMES {
        let (_, _, mode) = preset_definition(name).unwrap();
        let s = preset_structure(name).unwrap();
        out.push_str(&format!("{name}\n"));
        out.push_str(&format!("  default mode: {}\n", mode.as_str()));
        out.push_str(&format!(
            "  leads: m = {} m0, V = {} eV (left) | m = {} m0, V = {} eV (right)\n",
            s.left_lead.mass, s.left_lead.potential, s.right_lead.mass, s.right_lead.potential
        ));
        for layer in &s.interior {
            out.push_str(&format!(
                "  slab:  m = {} m0, V = {} eV, d = {} nm\n",
                layer.mass, layer.potential, layer.thickness
            ));
        }
    }
    out
}

fn set<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Err(ConfigError::at(line, format!("duplicate key '{key}'")));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_f64(value: &str, key: &str, line: usize) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .map_err(|_| ConfigError::at(line, format!("key '{key}': expected a number, got '{value}'")))
}

fn parse_usize(value: &str, key: &str, line: usize) -> Result<usize, ConfigError> {
    value.parse::<usize>().map_err(|_| {
        ConfigError::at(
            line,
            format!("key '{key}': expected a non-negative integer, got '{value}'"),
        )
    })
}

fn parse_bool(value: &str, key: &str, line: usize) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::at(
            line,
            format!("key '{key}': expected true or false, got '{value}'"),
        )),
    }
}

fn parse_auto_or_num(value: &str, key: &str, line: usize) -> Result<AutoOrNum, ConfigError> {
    if value == "auto" {
        Ok(AutoOrNum::Auto)
    } else {
        parse_f64(value, key, line).map(AutoOrNum::Num)
    }
}

fn parse_bias_kind(value: &str, line: usize) -> Result<BiasKind, ConfigError> {
    if value == "none" {
        return Ok(BiasKind::None);
    }
    if value == "midpoint" {
        return Ok(BiasKind::Midpoint);
    }
    if let Some(n) = value.strip_prefix("stepped:") {
        let n: u32 = n.parse().map_err(|_| {
            ConfigError::at(line, format!("key 'kind': bad step count in '{value}'"))
        })?;
        if n == 0 {
            return Err(ConfigError::at(line, "key 'kind': stepped:0 is not allowed"));
        }
        return Ok(BiasKind::Stepped(n));
    }
    Err(ConfigError::at(
        line,
        format!("key 'kind': expected none, midpoint, or stepped:<n>, got '{value}'"),
    ))
}

fn parse_layers(value: &str, line: usize) -> Result<Vec<(f64, f64, f64)>, ConfigError> {
    let mut layers = Vec::new();
    for part in value.split(',') {
        let part = part.trim();
        let fields: Vec<&str> = part.split(':').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(ConfigError::at(
                line,
                format!("key 'layers': expected mass:potential:thickness, got '{part}'"),
            ));
        }
        let m = parse_f64(fields[0], "layers", line)?;
        let v = parse_f64(fields[1], "layers", line)?;
        let t = parse_f64(fields[2], "layers", line)?;
        layers.push((m, v, t));
    }
    Ok(layers)
}

fn parse_threads(value: &str, line: usize) -> Result<Option<usize>, ConfigError> {
    if value == "auto" {
        return Ok(None);
    }
    let n = parse_usize(value, "threads", line)?;
    if n == 0 {
        return Err(ConfigError::at(line, "key 'threads': must be at least 1"));
    }
    Ok(Some(n))
}

/// Parse config file text into a [`RawConfig`].  Every diagnostic names the
/// 1-based line it came from.
pub fn parse_config(text: &str) -> Result<RawConfig, ConfigError> {
    let mut raw = RawConfig::default();
    let mut section: Option<String> = None;

    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.find('#') {
            Some(pos) => &full_line[..pos],
            None => full_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }

        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(line_no, "unterminated section header"))?
                .trim();
            match name {
                "structure" | "grid" | "bias" | "landauer" | "output" => {
                    section = Some(name.to_string());
                }
                _ => {
                    return Err(ConfigError::at(line_no, format!("unknown section '[{name}]'")));
                }
            }
            continue;
        }

        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::at(line_no, format!("expected 'key = value', got '{line}'"))
        })?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(ConfigError::at(line_no, format!("key '{key}' has no value")));
        }

        match (section.as_deref(), key) {
            (None, "mode") => {
                let mode = Mode::parse(value).ok_or_else(|| {
                    ConfigError::at(
                        line_no,
                        format!(
                            "key 'mode': expected transmission, iv, traversal, or \
                             traversal_bias, got '{value}'"
                        ),
                    )
                })?;
                set(&mut raw.mode, mode, key, line_no)?;
            }
            (None, _) => {
                return Err(ConfigError::at(
                    line_no,
                    format!("key '{key}' appears before any section header (only 'mode' may)"),
                ));
            }
            (Some("structure"), "preset") => {
                if preset_definition(value).is_none() {
                    return Err(ConfigError::at(
                        line_no,
                        format!(
                            "unknown preset '{value}' (known: {})",
                            PRESET_NAMES.join(", ")
                        ),
                    ));
                }
                set(&mut raw.preset, value.to_string(), key, line_no)?;
            }
            (Some("structure"), "left_mass") => {
                set(&mut raw.left_mass, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("structure"), "left_potential") => {
                set(&mut raw.left_potential, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("structure"), "right_mass") => {
                set(&mut raw.right_mass, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("structure"), "right_potential") => {
                set(&mut raw.right_potential, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("structure"), "layers") => {
                set(&mut raw.layers, parse_layers(value, line_no)?, key, line_no)?;
            }
            (Some("grid"), "min") => {
                set(&mut raw.grid_min, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("grid"), "max") => {
                set(&mut raw.grid_max, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("grid"), "n") => {
                set(&mut raw.grid_n, parse_usize(value, key, line_no)?, key, line_no)?;
            }
            (Some("grid"), "fixed_energy") => {
                set(&mut raw.fixed_energy, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("bias"), "kind") => {
                set(&mut raw.bias_kind, parse_bias_kind(value, line_no)?, key, line_no)?;
            }
            (Some("bias"), "voltage") => {
                set(&mut raw.bias_voltage, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("landauer"), "temperature") => {
                set(&mut raw.temperature, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("landauer"), "fermi_level") => {
                set(&mut raw.fermi_level, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("landauer"), "supply_mass") => {
                set(
                    &mut raw.supply_mass,
                    parse_auto_or_num(value, key, line_no)?,
                    key,
                    line_no,
                )?;
            }
            (Some("landauer"), "form") => {
                let form = match value {
                    "tsu-esaki" => SupplyForm::TsuEsaki3D,
                    "two-terminal" => SupplyForm::TwoTerminal1D,
                    _ => {
                        return Err(ConfigError::at(
                            line_no,
                            format!("key 'form': expected tsu-esaki or two-terminal, got '{value}'"),
                        ));
                    }
                };
                set(&mut raw.form, form, key, line_no)?;
            }
            (Some("landauer"), "e_min") => {
                set(&mut raw.e_min, parse_f64(value, key, line_no)?, key, line_no)?;
            }
            (Some("landauer"), "e_max") => {
                set(&mut raw.e_max, parse_auto_or_num(value, key, line_no)?, key, line_no)?;
            }
            (Some("landauer"), "e_points") => {
                set(&mut raw.e_points, parse_usize(value, key, line_no)?, key, line_no)?;
            }
            (Some("output"), "path") => {
                set(&mut raw.out, PathBuf::from(value), key, line_no)?;
            }
            (Some("output"), "threads") => {
                set(&mut raw.threads, parse_threads(value, line_no)?, key, line_no)?;
            }
            (Some("output"), "verify") => {
                set(&mut raw.verify, parse_bool(value, key, line_no)?, key, line_no)?;
            }
            (Some("output"), "gnuplot") => {
                set(&mut raw.gnuplot, parse_bool(value, key, line_no)?, key, line_no)?;
            }
            (Some(section), _) => {
                return Err(ConfigError::at(
                    line_no,
                    format!("unknown key '{key}' in section [{section}]"),
                ));
            }
        }
    }

    Ok(raw)
}

/// Command-line flags that participate in config resolution.  `None` means
/// the flag was not given; a present flag overrides the file key.
#[derive(Debug, Clone, Default)]
pub struct FlagOverrides {
    pub mode: Option<Mode>,
    pub preset: Option<String>,
    pub grid: Option<(f64, f64, usize)>,
    pub out: Option<PathBuf>,
    pub threads: Option<Option<usize>>,
    pub verify: bool,
    pub gnuplot: bool,
}

/// Parse a `min:max:n` grid flag.
pub fn parse_grid_flag(value: &str) -> Result<(f64, f64, usize), ConfigError> {
    let fields: Vec<&str> = value.split(':').collect();
    if fields.len() != 3 {
        return Err(ConfigError::general(format!(
            "--grid: expected min:max:n, got '{value}'"
        )));
    }
    let min: f64 = fields[0]
        .parse()
        .map_err(|_| ConfigError::general(format!("--grid: bad minimum '{}'", fields[0])))?;
    let max: f64 = fields[1]
        .parse()
        .map_err(|_| ConfigError::general(format!("--grid: bad maximum '{}'", fields[1])))?;
    let n: usize = fields[2]
        .parse()
        .map_err(|_| ConfigError::general(format!("--grid: bad point count '{}'", fields[2])))?;
    Ok((min, max, n))
}

/// Overlay flags onto the file config.  Records which file keys lost to a
/// flag so the echo can say so.
pub fn apply_flags(raw: &mut RawConfig, flags: &FlagOverrides) {
    fn overlay<T>(slot: &mut Option<T>, flag: Option<T>, name: &'static str, log: &mut Vec<&'static str>) {
        if let Some(v) = flag {
            if slot.is_some() {
                log.push(name);
            }
            *slot = Some(v);
        }
    }

    let mut log = std::mem::take(&mut raw.overridden);
    overlay(&mut raw.mode, flags.mode, "mode", &mut log);
    overlay(&mut raw.preset, flags.preset.clone(), "preset", &mut log);
    if let Some((min, max, n)) = flags.grid {
        if raw.grid_min.is_some() || raw.grid_max.is_some() || raw.grid_n.is_some() {
            log.push("grid");
        }
        raw.grid_min = Some(min);
        raw.grid_max = Some(max);
        raw.grid_n = Some(n);
    }
    overlay(&mut raw.out, flags.out.clone(), "out", &mut log);
    overlay(&mut raw.threads, flags.threads, "threads", &mut log);
    if flags.verify {
        if raw.verify.is_some() {
            log.push("verify");
        }
        raw.verify = Some(true);
    }
    if flags.gnuplot {
        if raw.gnuplot.is_some() {
            log.push("gnuplot");
        }
        raw.gnuplot = Some(true);
    }
    raw.overridden = log;
}

/// Fully resolved sweep configuration: every default filled in, the structure
/// built and validated, ready to hand to the runner.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub preset: Option<String>,
    pub structure: Heterostructure,
    pub grid: (f64, f64, usize),
    pub fixed_energy: f64,
    pub bias: BiasModel,
    pub landauer: LandauerConfig,
    pub out: PathBuf,
    /// `None` lets the thread pool size itself from the machine.
    pub threads: Option<usize>,
    pub verify: bool,
    pub gnuplot: bool,
    /// File keys displaced by command-line flags, for the metadata echo.
    pub overridden: Vec<&'static str>,
}

fn mode_grid_default(mode: Mode) -> (f64, f64, usize) {
    match mode {
        Mode::Transmission => (0.001, 0.6, 600),
        Mode::Iv => (0.0, 1.2, 121),
        Mode::Traversal => (0.001, 0.499, 500),
        Mode::TraversalBias => (0.0, 0.6, 121),
    }
}

/// Highest interior band edge, used to size the supply integral window.
fn barrier_top(s: &Heterostructure) -> f64 {
    s.interior
        .iter()
        .map(|l| l.potential)
        .fold(0.0_f64, f64::max)
}

/// Turn a raw config plus implied defaults into a [`SweepConfig`].
pub fn resolve(raw: &RawConfig) -> Result<SweepConfig, ConfigError> {
    let inline_given = raw.left_mass.is_some()
        || raw.left_potential.is_some()
        || raw.right_mass.is_some()
        || raw.right_potential.is_some()
        || raw.layers.is_some();

    if raw.preset.is_some() && inline_given {
        return Err(ConfigError::general(
            "give either 'preset' or explicit layer keys in [structure], not both",
        ));
    }

    let (structure, preset_mode) = if let Some(name) = &raw.preset {
        let (_, _, mode) = preset_definition(name)
            .ok_or_else(|| ConfigError::general(format!("unknown preset '{name}'")))?;
        (preset_structure(name).unwrap(), Some(mode))
    } else if inline_given {
        let layers = raw.layers.as_ref().ok_or_else(|| {
            ConfigError::general("[structure] needs a 'layers' key when built inline")
        })?;
        let interior: Vec<Layer> = layers
            .iter()
            .map(|&(m, v, t)| Layer::new(m, v, t))
            .collect();
        let s = Heterostructure {
            left_lead: Layer::lead(raw.left_mass.unwrap_or(0.4), raw.left_potential.unwrap_or(0.0)),
            interior,
            right_lead: Layer::lead(
                raw.right_mass.unwrap_or(0.4),
                raw.right_potential.unwrap_or(0.0),
            ),
        };
        (s, None)
    } else {
        return Err(ConfigError::general(
            "no structure given: set a preset or layer keys in [structure]",
        ));
    };

    structure
        .validate()
        .map_err(|e| ConfigError::general(format!("bad structure: {e}")))?;

    let mode = raw
        .mode
        .or(preset_mode)
        .ok_or_else(|| ConfigError::general("no mode given and the structure has no preset default"))?;

    let grid_default = mode_grid_default(mode);
    let grid = (
        raw.grid_min.unwrap_or(grid_default.0),
        raw.grid_max.unwrap_or(grid_default.1),
        raw.grid_n.unwrap_or(grid_default.2),
    );
    if !grid.0.is_finite() || !grid.1.is_finite() {
        return Err(ConfigError::general("grid endpoints must be finite"));
    }
    if grid.1 <= grid.0 {
        return Err(ConfigError::general(format!(
            "grid maximum {} must exceed minimum {}",
            grid.1, grid.0
        )));
    }
    if grid.2 < 2 {
        return Err(ConfigError::general("grid needs at least 2 points"));
    }
    match mode {
        Mode::Transmission | Mode::Traversal => {
            if grid.0 <= 0.0 {
                return Err(ConfigError::general(
                    "energy grids start above 0 (zero-energy states carry no flux)",
                ));
            }
        }
        Mode::Iv | Mode::TraversalBias => {
            if grid.0 < 0.0 {
                return Err(ConfigError::general("bias grids start at or above 0 V"));
            }
        }
    }

    let fixed_energy = raw.fixed_energy.unwrap_or(0.2);
    if !(fixed_energy.is_finite() && fixed_energy > 0.0) {
        return Err(ConfigError::general(format!(
            "fixed_energy must be a positive energy, got {fixed_energy}"
        )));
    }

    let default_kind = match mode {
        Mode::Iv | Mode::TraversalBias => BiasKind::Midpoint,
        Mode::Transmission | Mode::Traversal => BiasKind::None,
    };
    let bias = BiasModel {
        kind: raw.bias_kind.unwrap_or(default_kind),
        voltage: raw.bias_voltage.unwrap_or(0.0),
    };
    if !bias.voltage.is_finite() || bias.voltage < 0.0 {
        return Err(ConfigError::general(format!(
            "bias voltage must be finite and non-negative, got {}",
            bias.voltage
        )));
    }
    if bias.voltage > 0.0
        && bias.kind == BiasKind::None
        && matches!(mode, Mode::Transmission | Mode::Traversal)
    {
        return Err(ConfigError::general(
            "a bias voltage was set but kind = none; pick midpoint or stepped:<n>",
        ));
    }

    let temperature = raw.temperature.unwrap_or(300.0);
    let fermi_level = raw.fermi_level.unwrap_or(0.0);
    let supply_mass = match raw.supply_mass.unwrap_or(AutoOrNum::Auto) {
        AutoOrNum::Num(m) => m,
        AutoOrNum::Auto => structure.left_lead.mass.abs(),
    };
    let form = raw.form.unwrap_or(SupplyForm::TsuEsaki3D);
    let e_min = raw.e_min.unwrap_or(0.0);
    let e_max = match raw.e_max.unwrap_or(AutoOrNum::Auto) {
        AutoOrNum::Num(e) => e,
        AutoOrNum::Auto => {
            let v_reach = match mode {
                Mode::Iv | Mode::TraversalBias => grid.1,
                _ => bias.voltage,
            };
            barrier_top(&structure) + 10.0 * CONSTANTS.kb * temperature + v_reach
        }
    };
    let e_points = raw.e_points.unwrap_or(4000);

    let landauer = LandauerConfig {
        temperature,
        fermi_level,
        grid: EnergyGrid {
            min: e_min,
            max: e_max,
            n_points: e_points,
        },
        supply_mass,
        form,
    };
    landauer
        .validate()
        .map_err(|e| ConfigError::general(format!("bad [landauer] settings: {e}")))?;

    let out = raw
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", mode.as_str())));

    Ok(SweepConfig {
        mode,
        preset: raw.preset.clone(),
        structure,
        grid,
        fixed_energy,
        bias,
        landauer,
        out,
        threads: raw.threads.unwrap_or(None),
        verify: raw.verify.unwrap_or(false),
        gnuplot: raw.gnuplot.unwrap_or(false),
        overridden: raw.overridden.clone(),
    })
}

impl SweepConfig {
    /// Serialize back to config-file text.  Parsing and resolving the result
    /// reconstructs this exact configuration (`echo` then re-`echo` is a
    /// fixed point), which the output metadata block depends on.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("mode = {}\n\n", self.mode.as_str()));

        s.push_str("[structure]\n");
        if let Some(name) = &self.preset {
            s.push_str(&format!("preset = {name}\n"));
        } else {
            s.push_str(&format!("left_mass = {}\n", self.structure.left_lead.mass));
            s.push_str(&format!(
                "left_potential = {}\n",
                self.structure.left_lead.potential
            ));
            s.push_str(&format!("right_mass = {}\n", self.structure.right_lead.mass));
            s.push_str(&format!(
                "right_potential = {}\n",
                self.structure.right_lead.potential
            ));
            let layers: Vec<String> = self
                .structure
                .interior
                .iter()
                .map(|l| format!("{}:{}:{}", l.mass, l.potential, l.thickness))
                .collect();
            s.push_str(&format!("layers = {}\n", layers.join(", ")));
        }

        s.push_str("\n[grid]\n");
        s.push_str(&format!("min = {}\n", self.grid.0));
        s.push_str(&format!("max = {}\n", self.grid.1));
        s.push_str(&format!("n = {}\n", self.grid.2));
        s.push_str(&format!("fixed_energy = {}\n", self.fixed_energy));

        s.push_str("\n[bias]\n");
        let kind = match self.bias.kind {
            BiasKind::None => "none".to_string(),
            BiasKind::Midpoint => "midpoint".to_string(),
            BiasKind::Stepped(n) => format!("stepped:{n}"),
        };
        s.push_str(&format!("kind = {kind}\n"));
        s.push_str(&format!("voltage = {}\n", self.bias.voltage));

        s.push_str("\n[landauer]\n");
        s.push_str(&format!("temperature = {}\n", self.landauer.temperature));
        s.push_str(&format!("fermi_level = {}\n", self.landauer.fermi_level));
        s.push_str(&format!("supply_mass = {}\n", self.landauer.supply_mass));
        let form = match self.landauer.form {
            SupplyForm::TsuEsaki3D => "tsu-esaki",
            SupplyForm::TwoTerminal1D => "two-terminal",
        };
        s.push_str(&format!("form = {form}\n"));
        s.push_str(&format!("e_min = {}\n", self.landauer.grid.min));
        s.push_str(&format!("e_max = {}\n", self.landauer.grid.max));
        s.push_str(&format!("e_points = {}\n", self.landauer.grid.n_points));

        s.push_str("\n[output]\n");
        s.push_str(&format!("path = {}\n", self.out.display()));
        match self.threads {
            None => s.push_str("threads = auto\n"),
            Some(n) => s.push_str(&format!("threads = {n}\n")),
        }
        s.push_str(&format!("verify = {}\n", self.verify));
        s.push_str(&format!("gnuplot = {}\n", self.gnuplot));

        s
    }
}
