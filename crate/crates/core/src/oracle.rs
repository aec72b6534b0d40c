//! Brute-force verifier for the transfer solver.
//!
//! Instead of plane-wave matching, this module integrates the stationary
//! Schrödinger equation through the structure as a first-order complex ODE
//! system with fixed-step RK4, seeding a pure outgoing wave in the right
//! lead and marching backward to the left lead. Decomposing the resulting
//! left-lead state into incident and reflected parts yields an independent
//! transmission value. The module deliberately shares no code with the
//! scattering module (it even derives its own wavenumbers), so agreement
//! between the two is meaningful evidence.

use num_complex::Complex64;

use crate::constants::constants;
use crate::error::TransportError;
use crate::structure::Heterostructure;

/// The integration state: wavefunction value and spatial derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeState {
    pub psi: Complex64,
    /// d psi / d z, in 1/nm.
    pub phi: Complex64,
}

/// Result of one backward integration: the verified transmission plus the
/// state recorded at every region boundary (right lead seed first, then each
/// interior layer's left edge, then the left-lead state after the final
/// mass jump).
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub transmission: f64,
    pub boundary_states: Vec<(f64, OdeState)>,
}

/// Integrates through `s` at energy `e` with RK4 step `step` (nm) and
/// returns the transmission extracted from the lead asymptotics.
///
/// The step must resolve the thinnest layer: anything coarser than
/// thickness / 16 is rejected rather than silently underresolved. Leads must
/// be positive-mass and propagating; the integrator exists to check the
/// canonical structures, not to extend them.
pub fn integrate_through(
    e: f64,
    s: &Heterostructure,
    step: f64,
) -> Result<OracleResult, TransportError> {
    s.validate()?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(TransportError::NonFinite { name: "step", value: step });
    }
    let thinnest = s.interior.iter().map(|l| l.thickness).fold(f64::INFINITY, f64::min);
    let limit = thinnest / 16.0;
    if step > limit {
        return Err(TransportError::StepTooCoarse { step, limit });
    }
    if s.left_lead.mass <= 0.0 || s.right_lead.mass <= 0.0 {
        return Err(TransportError::Unsupported {
            what: "the integrator handles positive-mass leads only",
        });
    }
    let c = constants();
    let kin1 = s.left_lead.mass * (e - s.left_lead.potential) / c.hbar_sq_over_2m0;
    let kin3 = s.right_lead.mass * (e - s.right_lead.potential) / c.hbar_sq_over_2m0;
    if kin1 <= 0.0 {
        return Err(TransportError::ClosedLead { side: "left", energy: e });
    }
    if kin3 <= 0.0 {
        return Err(TransportError::ClosedLead { side: "right", energy: e });
    }
    let k1 = kin1.sqrt();
    let k3 = kin3.sqrt();

    // Seed: psi = exp(i k3 (z - d)) evaluated at z = d.
    let mut psi = Complex64::new(1.0, 0.0);
    let mut phi = Complex64::new(0.0, k3);
    let mut z = s.total_thickness();
    let mut states = vec![(z, OdeState { psi, phi })];
    let mut m_prev = s.right_lead.mass;

    for layer in s.interior.iter().rev() {
        // Mass-scaled derivative continuity across the interface on the
        // layer's right edge: phi jumps by the mass ratio.
        phi *= layer.mass / m_prev;
        let q_sq = layer.mass * (e - layer.potential) / c.hbar_sq_over_2m0;
        let n = (layer.thickness / step).ceil().max(1.0) as usize;
        let h = -layer.thickness / n as f64;
        for _ in 0..n {
            let (p1, f1) = (phi, -q_sq * psi);
            let (p2, f2) = (phi + 0.5 * h * f1, -q_sq * (psi + 0.5 * h * p1));
            let (p3, f3) = (phi + 0.5 * h * f2, -q_sq * (psi + 0.5 * h * p2));
            let (p4, f4) = (phi + h * f3, -q_sq * (psi + h * p3));
            psi += h / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
            phi += h / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
        }
        z -= layer.thickness;
        states.push((z, OdeState { psi, phi }));
        if !psi.is_finite() || !phi.is_finite() {
            return Err(TransportError::EvanescentOverflow { exponent: f64::INFINITY });
        }
        m_prev = layer.mass;
    }

    // Final jump into the left lead, then split into the incident and
    // reflected travelling waves at z = 0.
    phi *= s.left_lead.mass / m_prev;
    states.push((0.0, OdeState { psi, phi }));
    let ik1 = Complex64::new(0.0, k1);
    let a_inc = 0.5 * (psi + phi / ik1);
    let transmission = (k3 * s.left_lead.mass) / (s.right_lead.mass * k1) / a_inc.norm_sqr();

    Ok(OracleResult { transmission, boundary_states: states })
}
