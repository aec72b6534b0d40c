//! Unit system and physical constants.
//!
//! The whole crate works in {eV, nm, fs, m0}: energies in electron-volts,
//! lengths in nanometres, times in femtoseconds, and effective masses as
//! multiples of the free-electron mass. Semiconductor slab parameters are
//! naturally quoted in exactly these units, so no conversions appear at call
//! sites. The constants are CODATA 2018 values converted once and frozen as
//! literals; keeping them compile-time keeps the math core deterministic and
//! free of I/O.

/// The constant set in the {eV, nm, fs, m0} unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// hbar^2 / (2 m0), in eV nm^2. The coefficient that turns
    /// mass-normalized curvature into kinetic energy.
    pub hbar_sq_over_2m0: f64,
    /// Reduced Planck constant, in eV fs.
    pub hbar: f64,
    /// Boltzmann constant, in eV / K.
    pub kb: f64,
    /// Free-electron mass, in eV fs^2 / nm^2.
    pub m0: f64,
}

/// CODATA 2018 source values: hbar = 1.054571817e-34 J s,
/// m0 = 9.1093837015e-31 kg, e = 1.602176634e-19 C,
/// kB = 1.380649e-23 J / K.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar_sq_over_2m0: 0.038099821114859614,
    hbar: 0.6582119565476074,
    kb: 8.617333262145179e-5,
    m0: 5.685630103565724,
};

/// Returns the single canonical constant set used everywhere in the crate.
pub const fn constants() -> PhysicalConstants {
    CONSTANTS
}
