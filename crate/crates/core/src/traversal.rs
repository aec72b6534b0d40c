//! Ballistic traversal times through the slab.
//!
//! The dwell time is the integral of inverse group velocity across the slab,
//! with the group velocity expressed through the (constant) transmitted
//! probability flux: tau = integral of |psi(z)|^2 / J over the slab. For a
//! single slab between leads this has the closed form
//!
//! tau = (m3 / 2 hbar k3) [ (1 + a^2) d + (1 - a^2) sin(2 k2 d) / (2 k2) ]
//!
//! with a = k3 m2 / (m3 k2). Comparing tau against two references, the free
//! flight through the leads' medium (tau_no_slab) and the reflection-free
//! flight through the slab medium (tau_no_refl), splits the spectrum into a
//! fast regime below the equal-time energy and a slow regime above it.

use crate::constants::constants;
use crate::error::TransportError;
use crate::kinematics::{wavenumber, Regime};
use crate::scattering::solve_n_layer;
use crate::structure::{BiasKind, BiasModel, Heterostructure};

/// Whether the slab delivers the electron earlier or later than free flight
/// through the surrounding medium would.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeRegime {
    /// tau < tau_no_slab.
    Fast,
    /// tau > tau_no_slab.
    Slow,
    /// Equal within a 1e-9 relative band.
    Equal,
}

/// The three traversal times at one energy (or one bias point), plus the
/// dimensionless ratio a and the fast/slow classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraversalReport {
    pub energy: f64,
    pub tau: f64,
    pub tau_no_slab: f64,
    pub tau_no_refl: f64,
    /// k3 m2 / (m3 k2) for a single slab; generalized to
    /// tau_no_refl / tau_no_slab for multi-layer profiles, which coincides
    /// with the ratio definition in the single-slab case.
    pub alpha: f64,
    pub regime: TimeRegime,
}

fn classify(tau: f64, tau_no_slab: f64) -> TimeRegime {
    let scale = tau.abs().max(tau_no_slab.abs());
    if (tau - tau_no_slab).abs() <= 1e-9 * scale {
        TimeRegime::Equal
    } else if tau < tau_no_slab {
        TimeRegime::Fast
    } else {
        TimeRegime::Slow
    }
}

/// Free flight time across thickness `t` in a medium with mass `m` and real
/// wavenumber `k`.
fn free_flight(t: f64, m: f64, k: f64) -> f64 {
    let c = constants();
    t * m * c.m0 / (c.hbar * k)
}

/// Closed-form traversal report for a single-slab structure.
///
/// Requires the slab and the right lead to be propagating at `e`; the
/// expression is derived for real k2 and does not extend to the evanescent
/// side (the numeric path does).
pub fn traversal_closed(e: f64, s: &Heterostructure) -> Result<TraversalReport, TransportError> {
    s.validate()?;
    if s.interior.len() != 1 {
        return Err(TransportError::SingleLayerOnly { count: s.interior.len() });
    }
    let k3 = wavenumber(e, &s.right_lead)?;
    if k3.regime != Regime::Propagating {
        return Err(TransportError::ClosedLead { side: "right", energy: e });
    }
    let k2 = wavenumber(e, &s.interior[0])?;
    if k2.regime != Regime::Propagating {
        return Err(TransportError::NonPropagatingSlab { energy: e });
    }
    let c = constants();
    let d = s.interior[0].thickness;
    let (m2, m3) = (s.interior[0].mass, s.right_lead.mass);
    let (k2, k3) = (k2.value.re, k3.value.re);
    let alpha = k3 * m2 / (m3 * k2);
    let tau = m3 * c.m0 / (2.0 * c.hbar * k3)
        * ((1.0 + alpha * alpha) * d
            + (1.0 - alpha * alpha) * (2.0 * k2 * d).sin() / (2.0 * k2));
    let tau_no_slab = free_flight(d, m3, k3);
    let tau_no_refl = free_flight(d, m2, k2);
    Ok(TraversalReport {
        energy: e,
        tau,
        tau_no_slab,
        tau_no_refl,
        alpha,
        regime: classify(tau, tau_no_slab),
    })
}

/// Traversal time by direct quadrature of |psi|^2 / J across the interior.
///
/// The transmitted flux J is constant in z, so the integrand only needs the
/// solved wavefunction density; composite Simpson panels are laid per layer
/// (n_quad points distributed by thickness) so kinks at interfaces never
/// land inside a panel.
pub fn traversal_numeric(
    e: f64,
    s: &Heterostructure,
    n_quad: usize,
) -> Result<f64, TransportError> {
    if n_quad < 64 {
        return Err(TransportError::InvalidConfig {
            what: format!("n_quad = {n_quad} is below the minimum of 64"),
        });
    }
    let sol = solve_n_layer(e, s)?;
    let c = constants();
    let last = sol.waves.last().unwrap();
    let k3 = last.k.value.re;
    let flux = c.hbar * k3 * last.a.norm_sqr() / (last.mass * c.m0);
    if flux == 0.0 {
        return Err(TransportError::ZeroFlux);
    }
    let d_total = s.total_thickness();
    let mut integral = 0.0;
    for (i, w) in sol.waves[1..sol.waves.len() - 1].iter().enumerate() {
        let thickness = s.interior[i].thickness;
        let share = (n_quad as f64 * thickness / d_total).ceil() as usize;
        let n = share.max(2).next_multiple_of(2);
        let h = thickness / n as f64;
        let mut acc = 0.0;
        for j in 0..=n {
            let z = w.z_left + j as f64 * h;
            let density = w.eval(z).0.norm_sqr();
            let weight = if j == 0 || j == n {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += weight * density;
        }
        integral += acc * h / 3.0;
    }
    Ok(integral / flux)
}

/// The energy at which all three traversal times coincide (a = 1), for a
/// single slab between unbiased leads: E = V2 m3 / (m3 - m2).
pub fn equal_time_energy(s: &Heterostructure) -> Result<f64, TransportError> {
    s.validate()?;
    if s.interior.len() != 1 {
        return Err(TransportError::SingleLayerOnly { count: s.interior.len() });
    }
    if s.left_lead.potential != 0.0 || s.right_lead.potential != 0.0 {
        return Err(TransportError::Unsupported {
            what: "equal-time energy is defined for unbiased leads (V1 = V3 = 0)",
        });
    }
    let m2 = s.interior[0].mass;
    let m3 = s.right_lead.mass;
    if m2 == m3 {
        return Err(TransportError::Unsupported {
            what: "equal slab and lead masses leave the crossing energy undefined",
        });
    }
    Ok(s.interior[0].potential * m3 / (m3 - m2))
}

/// One bias point of a traversal-versus-voltage sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasPoint {
    pub voltage: f64,
    pub report: TraversalReport,
}

/// Evaluates the three traversal times at fixed energy `e` across a bias
/// sweep, rebuilding the potential profile at every voltage.
///
/// Midpoint bias keeps a single slab, so the closed form applies; stepped
/// bias goes through the quadrature path, with tau_no_refl summed over the
/// reflection-free flight of each sublayer. Any voltage that closes the
/// collector lead or makes a sublayer non-propagating fails the whole sweep;
/// callers that want to drop such points instead should evaluate per point.
pub fn traversal_vs_bias(
    e: f64,
    s: &Heterostructure,
    voltages: &[f64],
    kind: BiasKind,
) -> Result<Vec<BiasPoint>, TransportError> {
    voltages
        .iter()
        .map(|&v| {
            let biased = s.apply_bias(&BiasModel { kind, voltage: v });
            let report = traversal_at_bias(e, &biased)?;
            Ok(BiasPoint { voltage: v, report })
        })
        .collect()
}

/// Traversal report for an already-biased structure; shared by the sweep and
/// by callers that iterate voltages themselves.
pub fn traversal_at_bias(e: f64, biased: &Heterostructure) -> Result<TraversalReport, TransportError> {
    if biased.interior.len() == 1 {
        return traversal_closed(e, biased);
    }
    let k3 = wavenumber(e, &biased.right_lead)?;
    if k3.regime != Regime::Propagating {
        return Err(TransportError::ClosedLead { side: "right", energy: e });
    }
    let tau = traversal_numeric(e, biased, 4096)?;
    let tau_no_slab = free_flight(biased.total_thickness(), biased.right_lead.mass, k3.value.re);
    let mut tau_no_refl = 0.0;
    for layer in &biased.interior {
        let k = wavenumber(e, layer)?;
        if k.regime != Regime::Propagating {
            return Err(TransportError::NonPropagatingSlab { energy: e });
        }
        tau_no_refl += free_flight(layer.thickness, layer.mass, k.value.re);
    }
    Ok(TraversalReport {
        energy: e,
        tau,
        tau_no_slab,
        tau_no_refl,
        alpha: tau_no_refl / tau_no_slab,
        regime: classify(tau, tau_no_slab),
    })
}
