//! Current-voltage characteristics from the bias-dependent transmission.
//!
//! The current is an energy integral of the transmission weighted by how
//! many more carriers the source lead supplies than the drain accepts. Two
//! supply forms are implemented: the 3D planar-contact form, whose
//! transverse-momentum sum gives the familiar logarithmic factor, and the
//! strictly one-dimensional two-terminal form (occupation difference). The
//! 3D form is the default for these slab structures; the 1D form exists for
//! sensitivity checks. Negative differential conductance shows up as bias
//! windows where the current falls while the voltage rises, and a small
//! detector extracts those regions from a swept curve.

use crate::constants::constants;
use crate::error::TransportError;
use crate::scattering::solve_n_layer;
use crate::structure::{BiasKind, BiasModel, Heterostructure};

// CODATA 2018 SI values, used only to convert the normalized integral into
// an absolute current scale.
const HBAR_JS: f64 = 1.054571817e-34;
const M0_KG: f64 = 9.1093837015e-31;
const E_C: f64 = 1.602176634e-19;
const KB_JK: f64 = 1.380649e-23;

/// Uniform energy grid for the current integral, in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyGrid {
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

/// Which occupation-difference factor weights the transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupplyForm {
    /// Planar 3D contacts: log-factor supply function, current density in
    /// A/m^2.
    TsuEsaki3D,
    /// Single 1D channel: Fermi-function difference, current in A per
    /// channel.
    TwoTerminal1D,
}

/// Everything the current integral needs besides the structure itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauerConfig {
    /// Contact temperature in K.
    pub temperature: f64,
    /// Fermi level of the source lead, in eV.
    pub fermi_level: f64,
    pub grid: EnergyGrid,
    /// Effective mass (units of m0) entering the 3D supply prefactor.
    pub supply_mass: f64,
    pub form: SupplyForm,
}

impl LandauerConfig {
    /// Room-temperature defaults for a sweep up to `v_max` volts: Fermi
    /// level at zero, supply mass from the source lead, and an energy grid
    /// reaching past the tallest barrier by ten thermal energies plus the
    /// full bias window, so nothing the bias drags down ever leaves the
    /// grid.
    pub fn for_sweep(s: &Heterostructure, v_max: f64) -> Self {
        let kt = constants().kb * 300.0;
        let barrier_top = s
            .interior
            .iter()
            .map(|l| l.potential)
            .fold(0.0_f64, f64::max);
        LandauerConfig {
            temperature: 300.0,
            fermi_level: 0.0,
            grid: EnergyGrid {
                min: 0.0,
                max: barrier_top + 10.0 * kt + v_max.max(0.0),
                n_points: 4000,
            },
            supply_mass: s.left_lead.mass.abs(),
            form: SupplyForm::TsuEsaki3D,
        }
    }

    pub fn validate(&self) -> Result<(), TransportError> {
        let bad = |what: String| Err(TransportError::InvalidConfig { what });
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return bad(format!("temperature {} K must be positive", self.temperature));
        }
        if !self.fermi_level.is_finite() {
            return bad("fermi level must be finite".into());
        }
        if self.grid.n_points < 100 {
            return bad(format!("energy grid needs at least 100 points, got {}", self.grid.n_points));
        }
        if !(self.grid.min >= 0.0) {
            return bad(format!("energy grid minimum {} eV must be nonnegative", self.grid.min));
        }
        if !(self.grid.max > self.grid.min) {
            return bad("energy grid maximum must exceed its minimum".into());
        }
        if !(self.supply_mass > 0.0) {
            return bad(format!("supply mass {} m0 must be positive", self.supply_mass));
        }
        Ok(())
    }
}

/// One point of an I-V curve. `j_norm` is the bare integral in eV
/// (supply-function weighted transmission); `j_abs` carries the physical
/// prefactor for the configured supply form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvPoint {
    pub voltage: f64,
    pub j_norm: f64,
    pub j_abs: f64,
}

/// Absolute scale multiplying the normalized integral: e m kT / (2 pi^2
/// hbar^3) per eV for the 3D form, 2e/h per eV for the 1D form.
fn prefactor(cfg: &LandauerConfig) -> f64 {
    match cfg.form {
        SupplyForm::TsuEsaki3D => {
            E_C * cfg.supply_mass * M0_KG * KB_JK * cfg.temperature
                / (2.0 * std::f64::consts::PI.powi(2) * HBAR_JS.powi(3))
                * E_C
        }
        SupplyForm::TwoTerminal1D => 2.0 * E_C / (2.0 * std::f64::consts::PI * HBAR_JS) * E_C,
    }
}

fn supply(e: f64, v: f64, cfg: &LandauerConfig, kt: f64) -> f64 {
    let x = (e - cfg.fermi_level) / kt;
    let y = (e - cfg.fermi_level + v) / kt;
    match cfg.form {
        SupplyForm::TsuEsaki3D => (-x).exp().ln_1p() - (-y).exp().ln_1p(),
        SupplyForm::TwoTerminal1D => 1.0 / (1.0 + x.exp()) - 1.0 / (1.0 + y.exp()),
    }
}

/// Current at a single bias point.
///
/// The transmission is solved on the biased structure at every grid energy
/// and integrated against the supply function by composite Simpson (the
/// grid is used with one extra point whenever an even count is configured,
/// since Simpson needs an odd number of samples). Energies where a lead
/// carries no propagating state contribute zero transmission.
pub fn current(
    v: f64,
    s: &Heterostructure,
    kind: BiasKind,
    cfg: &LandauerConfig,
) -> Result<IvPoint, TransportError> {
    cfg.validate()?;
    if !v.is_finite() {
        return Err(TransportError::NonFinite { name: "voltage", value: v });
    }
    let biased = s.apply_bias(&BiasModel { kind, voltage: v });
    let n = if cfg.grid.n_points % 2 == 1 { cfg.grid.n_points } else { cfg.grid.n_points + 1 };
    let h = (cfg.grid.max - cfg.grid.min) / (n - 1) as f64;
    let kt = constants().kb * cfg.temperature;

    let mut sum = 0.0;
    for j in 0..n {
        let e = cfg.grid.min + j as f64 * h;
        let t = match solve_n_layer(e, &biased) {
            Ok(sol) => sol.transmission,
            Err(TransportError::ClosedLead { .. }) => 0.0,
            Err(other) => return Err(other),
        };
        let weight = if j == 0 || j == n - 1 {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += weight * t * supply(e, v, cfg, kt);
    }
    let j_norm = sum * h / 3.0;
    Ok(IvPoint { voltage: v, j_norm, j_abs: prefactor(cfg) * j_norm })
}

/// Sweeps the bias over a uniform grid, returning points in voltage order.
pub fn iv_sweep(
    s: &Heterostructure,
    kind: BiasKind,
    cfg: &LandauerConfig,
    v_min: f64,
    v_max: f64,
    n_points: usize,
) -> Result<Vec<IvPoint>, TransportError> {
    if n_points < 2 {
        return Err(TransportError::InvalidConfig {
            what: format!("bias sweep needs at least 2 points, got {n_points}"),
        });
    }
    let h = (v_max - v_min) / (n_points - 1) as f64;
    (0..n_points)
        .map(|i| current(v_min + i as f64 * h, s, kind, cfg))
        .collect()
}

/// A maximal run of grid points with negative current slope. Indices refer
/// to the swept curve; `peak` and `valley` bracket the current drop across
/// the region (peak includes the point just before the run, valley the one
/// just after, so the ratio captures the full fall).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdcRegion {
    pub start: usize,
    pub end: usize,
    pub peak: f64,
    pub valley: f64,
}

impl NdcRegion {
    pub fn peak_to_valley(&self) -> f64 {
        self.peak / self.valley
    }
}

/// Finds negative-differential-conductance regions on a swept current curve.
///
/// Slopes are centered three-point differences, and a slope only counts as
/// negative when it falls below -1e-9 times the curve maximum; without that
/// relative floor, flat stretches of the curve sprout spurious regions out
/// of floating-point roundoff.
pub fn ndc_regions(current_values: &[f64]) -> Vec<NdcRegion> {
    let n = current_values.len();
    if n < 3 {
        return Vec::new();
    }
    let scale = current_values.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    let floor = -1e-9 * scale;
    let mut regions = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 1..n - 1 {
        let falling = current_values[i + 1] - current_values[i - 1] < floor;
        match (falling, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(start)) => {
                regions.push(make_region(current_values, start, i - 1));
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(start) = run_start {
        regions.push(make_region(current_values, start, n - 2));
    }
    regions
}

fn make_region(j: &[f64], start: usize, end: usize) -> NdcRegion {
    let peak = j[start - 1..=end].iter().cloned().fold(f64::MIN, f64::max);
    let valley_end = (end + 1).min(j.len() - 1);
    let valley = j[start..=valley_end].iter().cloned().fold(f64::MAX, f64::min);
    NdcRegion { start, end, peak, valley }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{reference_slab, SlabVariant};

    fn cfg_d5() -> LandauerConfig {
        // The exact grid the frozen reference values were computed on.
        LandauerConfig {
            temperature: 300.0,
            fermi_level: 0.0,
            grid: EnergyGrid { min: 0.0, max: 2.2585199978643553, n_points: 4001 },
            supply_mass: 0.4,
            form: SupplyForm::TsuEsaki3D,
        }
    }

    #[test]
    fn zero_bias_carries_zero_current() {
        let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
        let p = current(0.0, &s, BiasKind::Midpoint, &cfg_d5()).unwrap();
        assert_eq!(p.j_norm, 0.0);
        assert_eq!(p.j_abs, 0.0);
    }

    #[test]
    fn pinned_currents_on_the_reference_grid() {
        // Frozen from an independent evaluation of the same integral.
        let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
        let cfg = cfg_d5();
        let cases = [
            (0.3, 0.0014224693400564784),
            (0.89, 0.009153812162156261),
            (1.5, 0.00018289622104157197),
        ];
        for (v, expect) in cases {
            let p = current(v, &s, BiasKind::Midpoint, &cfg).unwrap();
            let rel = (p.j_norm - expect).abs() / expect;
            assert!(rel < 1e-9, "V = {v}: j_norm = {}, rel = {rel:e}", p.j_norm);
        }
    }

    #[test]
    fn absolute_scale_applies_the_supply_prefactor() {
        let cfg = cfg_d5();
        let c = prefactor(&cfg);
        assert!((c - 1.6734628987513718e12).abs() / c < 1e-12);
        let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
        let p = current(0.3, &s, BiasKind::Midpoint, &cfg).unwrap();
        assert!((p.j_abs - c * p.j_norm).abs() <= f64::EPSILON * p.j_abs.abs());
    }

    #[test]
    fn one_dimensional_form_is_available_and_distinct() {
        let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
        let mut cfg = cfg_d5();
        cfg.form = SupplyForm::TwoTerminal1D;
        let p0 = current(0.0, &s, BiasKind::Midpoint, &cfg).unwrap();
        assert_eq!(p0.j_norm, 0.0);
        let p = current(0.3, &s, BiasKind::Midpoint, &cfg).unwrap();
        let p3d = current(0.3, &s, BiasKind::Midpoint, &cfg_d5()).unwrap();
        assert!(p.j_norm > 0.0);
        assert!((p.j_norm - p3d.j_norm).abs() / p3d.j_norm > 1e-3);
    }

    #[test]
    fn sweep_is_ordered_and_zero_at_zero_range() {
        let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
        let mut cfg = cfg_d5();
        cfg.grid.n_points = 301; // keep this smoke test quick
        let pts = iv_sweep(&s, BiasKind::Midpoint, &cfg, 0.0, 0.0, 5).unwrap();
        assert!(pts.iter().all(|p| p.j_norm == 0.0));
        let pts = iv_sweep(&s, BiasKind::Midpoint, &cfg, 0.0, 0.4, 9).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].voltage > w[0].voltage);
        }
    }

    #[test]
    fn config_validation_catches_nonsense() {
        let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
        let mut cfg = cfg_d5();
        cfg.grid.n_points = 10;
        assert!(matches!(
            current(0.1, &s, BiasKind::Midpoint, &cfg),
            Err(TransportError::InvalidConfig { .. })
        ));
        let mut cfg = cfg_d5();
        cfg.temperature = -5.0;
        assert!(cfg.validate().is_err());
        let mut cfg = cfg_d5();
        cfg.grid.min = -0.2;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn default_config_tracks_the_sweep_window() {
        let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
        let cfg = LandauerConfig::for_sweep(&s, 1.5);
        cfg.validate().unwrap();
        assert_eq!(cfg.supply_mass, 0.4);
        assert!((cfg.grid.max - 2.2585199978643553).abs() < 1e-12);
        assert_eq!(cfg.grid.n_points, 4000);
    }

    #[test]
    fn ndc_detector_on_synthetic_curves() {
        let j = [0.0, 5.0, 3.0, 1.0, 2.0, 4.0];
        let regions = ndc_regions(&j);
        assert_eq!(regions.len(), 1);
        let r = regions[0];
        assert_eq!((r.start, r.end), (2, 3));
        assert_eq!(r.peak, 5.0);
        assert_eq!(r.valley, 1.0);
        assert!((r.peak_to_valley() - 5.0).abs() < 1e-15);

        // Two separated drops.
        let j = [0.0, 6.0, 5.0, 4.0, 1.0, 3.0, 6.0, 5.0, 4.0, 2.0, 3.0];
        let regions = ndc_regions(&j);
        assert_eq!(regions.len(), 2);
        assert_eq!((regions[0].peak, regions[0].valley), (6.0, 1.0));
        assert_eq!((regions[1].peak, regions[1].valley), (6.0, 2.0));

        // Monotone curve: nothing to find.
        assert!(ndc_regions(&[0.0, 1.0, 2.0, 3.0]).is_empty());
    }

    #[test]
    fn ndc_detector_ignores_roundoff_wiggles() {
        let j = [1.0, 1.0 + 1e-15, 1.0 - 1e-15, 1.0, 1.0 + 2e-15, 1.0];
        assert!(ndc_regions(&j).is_empty());
    }

    #[test]
    fn ndc_region_running_to_the_curve_end_includes_the_last_point() {
        let j = [0.0, 3.0, 2.0, 1.0, 0.5];
        let regions = ndc_regions(&j);
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].peak, 3.0);
        assert_eq!(regions[0].valley, 0.5);
    }
}
