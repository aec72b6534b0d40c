//! Layer wavenumbers with the sign and branch conventions that make
//! negative-mass transport come out right.
//!
//! In a layer with effective mass m and potential V the dispersion gives
//! k^2 = m (E - V) / (hbar^2 / 2 m0). For m < 0 this flips the usual rules:
//! the wave propagates below the barrier top and becomes evanescent above
//! it. For propagating waves in a negative-mass layer the negative root is
//! the physical one, exactly like the negative refractive index of a
//! left-handed optical medium: it keeps the probability current flowing the
//! same way as the wavefunction's phase advance.

use num_complex::Complex64;

use crate::constants::constants;
use crate::error::TransportError;
use crate::structure::Layer;

/// Which kind of solution the layer supports at a given energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Real nonzero k; travelling waves.
    Propagating,
    /// Purely imaginary k with Im(k) > 0; exp(ikz) decays in +z.
    Evanescent,
    /// k exactly zero (E = V); the wavefunction is linear in z.
    Critical,
}

/// A complex wavenumber (1/nm) tagged with its regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber {
    pub value: Complex64,
    pub regime: Regime,
}

/// Computes the layer wavenumber at energy `e` (eV).
///
/// Branch rules: for m (E - V) > 0 the wave propagates, with k > 0 when
/// m > 0 and k < 0 when m < 0; for m (E - V) < 0 the wave is evanescent and
/// k sits on the positive imaginary axis; m (E - V) = 0 is the critical
/// case, k = 0.
pub fn wavenumber(e: f64, layer: &Layer) -> Result<Wavenumber, TransportError> {
    if !e.is_finite() {
        return Err(TransportError::NonFinite { name: "energy", value: e });
    }
    let m = layer.mass.abs();
    if !(m > 1e-4 && m < 1e2) {
        return Err(TransportError::BadMass { index: 0, mass: layer.mass });
    }
    let q_sq = layer.mass * (e - layer.potential) / constants().hbar_sq_over_2m0;
    let w = if q_sq > 0.0 {
        let k = q_sq.sqrt();
        let k = if layer.mass < 0.0 { -k } else { k };
        Wavenumber { value: Complex64::new(k, 0.0), regime: Regime::Propagating }
    } else if q_sq < 0.0 {
        Wavenumber {
            value: Complex64::new(0.0, (-q_sq).sqrt()),
            regime: Regime::Evanescent,
        }
    } else {
        Wavenumber { value: Complex64::new(0.0, 0.0), regime: Regime::Critical }
    };
    Ok(w)
}
