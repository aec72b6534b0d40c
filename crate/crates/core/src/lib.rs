//! Ballistic electron transport through negative-effective-mass slabs.
//!
//! A thin barrier made of a material whose carriers have negative effective
//! mass behaves as the electronic cousin of a left-handed optical medium:
//! electrons below the barrier top propagate through it (on the negative
//! wavenumber branch), turn evanescent above it, and interfere into
//! transmission resonances that make the structure transparent at discrete
//! energies. This crate models one-dimensional transport through such
//! stacks:
//!
//! - [`structure`]: layer stacks, the canonical slab parameter sets, and
//!   bias profiles.
//! - [`kinematics`]: wavenumber branch rules for both mass signs.
//! - [`scattering`]: a closed form for the single slab plus a general
//!   N-layer solver with mass-scaled matching conditions.
//! - [`oracle`]: an independent fixed-step RK4 integration of the same
//!   physics, used to cross-check the solver.
//! - [`landauer`]: current integrals over the bias-deformed structure and
//!   detection of negative-differential-conductance regions.
//! - [`traversal`]: dwell times, their free-flight references, and the
//!   fast/slow regime split around the equal-time energy.
//!
//! All quantities live in the {eV, nm, fs, m0} unit system defined in
//! [`constants`]. Every operation is a pure function of its inputs, so
//! sweeps parallelize trivially.

/// Library version, stamped into output metadata by downstream tools.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod constants;
pub mod error;
pub mod kinematics;
pub mod landauer;
pub mod oracle;
pub mod scattering;
pub mod structure;
pub mod traversal;

pub use constants::{constants, PhysicalConstants, CONSTANTS};
pub use error::TransportError;
pub use kinematics::{wavenumber, Regime, Wavenumber};
pub use landauer::{
    current, iv_sweep, ndc_regions, EnergyGrid, IvPoint, LandauerConfig, NdcRegion, SupplyForm,
};
pub use oracle::{integrate_through, OdeState, OracleResult};
pub use scattering::{
    count_local_maxima, solve_n_layer, transmission_closed_form, transmission_peak_count,
    RegionWave, ScatteringSolution,
};
pub use structure::{
    reference_slab, BiasKind, BiasModel, Heterostructure, Layer, SlabVariant,
};
pub use traversal::{
    equal_time_energy, traversal_at_bias, traversal_closed, traversal_numeric, traversal_vs_bias,
    BiasPoint, TimeRegime, TraversalReport,
};
