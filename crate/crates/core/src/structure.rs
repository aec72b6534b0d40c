//! Layered heterostructures: semi-infinite leads, interior layers, and how an
//! applied bias deforms the potential profile.

use crate::error::TransportError;

/// One homogeneous region: effective mass (units of m0, may be negative,
/// never zero), potential energy (eV), and thickness (nm).
///
/// Leads are semi-infinite; their `thickness` is stored as infinity and never
/// enters any arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    pub mass: f64,
    pub potential: f64,
    pub thickness: f64,
}

impl Layer {
    /// An interior layer of finite thickness.
    pub fn new(mass: f64, potential: f64, thickness: f64) -> Self {
        Layer { mass, potential, thickness }
    }

    /// A semi-infinite lead.
    pub fn lead(mass: f64, potential: f64) -> Self {
        Layer { mass, potential, thickness: f64::INFINITY }
    }

    fn check_mass(&self, index: usize) -> Result<(), TransportError> {
        let m = self.mass.abs();
        if !(m > 1e-4 && m < 1e2) {
            return Err(TransportError::BadMass { index, mass: self.mass });
        }
        Ok(())
    }
}

/// An ordered layer stack: left lead, at least one interior layer, right
/// lead. The first interface sits at z = 0 and interior layers follow in
/// order, so the last interface is at z = total interior thickness.
#[derive(Debug, Clone, PartialEq)]
pub struct Heterostructure {
    pub left_lead: Layer,
    pub interior: Vec<Layer>,
    pub right_lead: Layer,
}

/// The two canonical slab variants used by the bundled presets.
///
/// `Standard` puts a light negative-mass barrier between heavy positive-mass
/// leads; `EqualMass` makes the lead mass equal in magnitude to the slab
/// mass, which moves the equal-time energy to exactly half the barrier
/// height.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlabVariant {
    /// Leads 0.4 m0 at 0 eV, interior -0.02 m0 at 0.5 eV.
    Standard,
    /// Leads 0.02 m0 at 0 eV, interior -0.02 m0 at 0.5 eV.
    EqualMass,
}

/// Builds the reference negative-mass slab: a single barrier layer of
/// thickness `d` nm between symmetric leads, with the parameter set picked by
/// `variant`.
pub fn reference_slab(d: f64, variant: SlabVariant) -> Result<Heterostructure, TransportError> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(TransportError::BadThickness { index: 0, thickness: d });
    }
    let lead_mass = match variant {
        SlabVariant::Standard => 0.4,
        SlabVariant::EqualMass => 0.02,
    };
    Ok(Heterostructure {
        left_lead: Layer::lead(lead_mass, 0.0),
        interior: vec![Layer::new(-0.02, 0.5, d)],
        right_lead: Layer::lead(lead_mass, 0.0),
    })
}

/// How an applied voltage deforms the potential profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasKind {
    /// Leave the structure untouched.
    None,
    /// Shift every interior layer by half the drop and the right lead by the
    /// full drop. Equivalent to `Stepped(1)`.
    Midpoint,
    /// Split each interior layer into n equal sublayers sampling a linear
    /// drop across the interior at the sublayer midpoints.
    Stepped(u32),
}

/// A bias kind plus the applied voltage in volts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasModel {
    pub kind: BiasKind,
    pub voltage: f64,
}

impl Heterostructure {
    /// Checks layer sanity: non-empty interior, positive finite interior
    /// thicknesses, masses inside the supported window.
    pub fn validate(&self) -> Result<(), TransportError> {
        if self.interior.is_empty() {
            return Err(TransportError::EmptyInterior);
        }
        self.left_lead.check_mass(0)?;
        for (i, layer) in self.interior.iter().enumerate() {
            layer.check_mass(i + 1)?;
            if !(layer.thickness > 0.0 && layer.thickness.is_finite()) {
                return Err(TransportError::BadThickness {
                    index: i + 1,
                    thickness: layer.thickness,
                });
            }
        }
        self.right_lead.check_mass(self.interior.len() + 1)?;
        Ok(())
    }

    /// Total interior thickness (the z coordinate of the last interface).
    pub fn total_thickness(&self) -> f64 {
        self.interior.iter().map(|l| l.thickness).sum()
    }

    /// Applies a bias model, producing the deformed structure. The electron
    /// potential energy drops toward the right lead (by e*V at the collector
    /// for positive bias), which makes positive bias drive forward current.
    ///
    /// Zero voltage returns the structure unchanged for every kind, and no
    /// kind ever changes masses or the total interior thickness.
    pub fn apply_bias(&self, bias: &BiasModel) -> Heterostructure {
        if bias.voltage == 0.0 || bias.kind == BiasKind::None {
            return self.clone();
        }
        let v = bias.voltage;
        let mut out = self.clone();
        out.right_lead.potential -= v;
        match bias.kind {
            BiasKind::None => unreachable!(),
            BiasKind::Midpoint => {
                for layer in &mut out.interior {
                    layer.potential -= v / 2.0;
                }
            }
            BiasKind::Stepped(n) => {
                let n = n.max(1) as usize;
                let d_total = self.total_thickness();
                let mut split = Vec::with_capacity(self.interior.len() * n);
                let mut z_left = 0.0;
                for layer in &self.interior {
                    let dt = layer.thickness / n as f64;
                    for j in 0..n {
                        // Potential sampled at the sublayer midpoint of the
                        // linear drop from 0 at z = 0 to -v at z = d_total.
                        let z_mid = z_left + (j as f64 + 0.5) * dt;
                        split.push(Layer::new(
                            layer.mass,
                            layer.potential - v * z_mid / d_total,
                            dt,
                        ));
                    }
                    z_left += layer.thickness;
                }
                out.interior = split;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slab5() -> Heterostructure {
        reference_slab(5.0, SlabVariant::Standard).unwrap()
    }

    #[test]
    fn reference_slab_standard_parameters() {
        let s = slab5();
        assert_eq!(s.left_lead.mass, 0.4);
        assert_eq!(s.left_lead.potential, 0.0);
        assert_eq!(s.interior.len(), 1);
        assert_eq!(s.interior[0].mass, -0.02);
        assert_eq!(s.interior[0].potential, 0.5);
        assert_eq!(s.interior[0].thickness, 5.0);
        assert_eq!(s.right_lead.mass, 0.4);
        s.validate().unwrap();

        let s30 = reference_slab(30.0, SlabVariant::Standard).unwrap();
        assert_eq!(s30.interior[0].thickness, 30.0);
        assert_eq!(s30.interior[0].mass, -0.02);
    }

    #[test]
    fn reference_slab_equal_mass_parameters() {
        let s = reference_slab(5.0, SlabVariant::EqualMass).unwrap();
        assert_eq!(s.left_lead.mass, 0.02);
        assert_eq!(s.right_lead.mass, 0.02);
        assert_eq!(s.interior[0].mass, -0.02);
    }

    #[test]
    fn reference_slab_rejects_bad_thickness() {
        assert!(reference_slab(0.0, SlabVariant::Standard).is_err());
        assert!(reference_slab(-3.0, SlabVariant::Standard).is_err());
        assert!(reference_slab(f64::NAN, SlabVariant::Standard).is_err());
    }

    #[test]
    fn validate_flags_silly_masses() {
        let mut s = slab5();
        s.interior[0].mass = 0.0;
        assert!(matches!(s.validate(), Err(TransportError::BadMass { index: 1, .. })));
        s.interior[0].mass = 1e5;
        assert!(s.validate().is_err());
    }

    #[test]
    fn bias_none_and_zero_volt_are_identities() {
        let s = slab5();
        let b = BiasModel { kind: BiasKind::None, voltage: 0.3 };
        assert_eq!(s.apply_bias(&b), s);
        for kind in [BiasKind::Midpoint, BiasKind::Stepped(4)] {
            let b = BiasModel { kind, voltage: 0.0 };
            assert_eq!(s.apply_bias(&b), s);
        }
    }

    #[test]
    fn midpoint_bias_shifts_interior_and_collector() {
        let s = slab5();
        let biased = s.apply_bias(&BiasModel { kind: BiasKind::Midpoint, voltage: 0.2 });
        assert_eq!(biased.interior[0].potential, 0.4);
        assert_eq!(biased.right_lead.potential, -0.2);
        assert_eq!(biased.left_lead.potential, 0.0);
        assert_eq!(biased.interior[0].mass, -0.02);
    }

    #[test]
    fn stepped_bias_samples_the_linear_drop_at_midpoints() {
        let s = slab5();
        let biased = s.apply_bias(&BiasModel { kind: BiasKind::Stepped(4), voltage: 0.2 });
        assert_eq!(biased.interior.len(), 4);
        let fractions = [1.0 / 8.0, 3.0 / 8.0, 5.0 / 8.0, 7.0 / 8.0];
        for (layer, f) in biased.interior.iter().zip(fractions) {
            assert_eq!(layer.thickness, 1.25);
            assert!((layer.potential - (0.5 - 0.2 * f)).abs() < 1e-15);
        }
        assert_eq!(biased.right_lead.potential, -0.2);
    }

    #[test]
    fn stepped_one_matches_midpoint() {
        let s = slab5();
        let a = s.apply_bias(&BiasModel { kind: BiasKind::Stepped(1), voltage: 0.37 });
        let b = s.apply_bias(&BiasModel { kind: BiasKind::Midpoint, voltage: 0.37 });
        assert_eq!(a.interior.len(), 1);
        assert!((a.interior[0].potential - b.interior[0].potential).abs() < 1e-15);
        assert_eq!(a.right_lead, b.right_lead);
    }

    #[test]
    fn bias_preserves_total_thickness() {
        let s = reference_slab(7.3, SlabVariant::Standard).unwrap();
        for kind in [BiasKind::Midpoint, BiasKind::Stepped(3), BiasKind::Stepped(11)] {
            let biased = s.apply_bias(&BiasModel { kind, voltage: 0.41 });
            assert!((biased.total_thickness() - 7.3).abs() < 1e-12);
        }
    }
}
