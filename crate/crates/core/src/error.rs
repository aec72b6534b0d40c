use thiserror::Error;

/// Everything that can go wrong in the math core.
///
/// Variants distinguish configuration mistakes (bad layers, unsupported
/// parameter combinations) from genuine numerical-range failures so that
/// callers can map them to different exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    /// The lead carries no propagating state at this energy, so there is no
    /// incident channel to normalize against.
    #[error("no propagating state in the {side} lead at E = {energy} eV")]
    ClosedLead { side: &'static str, energy: f64 },

    /// The interior wavenumber is exactly zero; the closed form divides by k
    /// and cannot be used. The general solver handles this case via the
    /// linear-wavefunction limit.
    #[error("interior wavenumber vanishes at E = {energy} eV; use the general solver, which takes the k -> 0 limit")]
    CriticalInterior { energy: f64 },

    /// The closed-form traversal time is derived for a propagating slab.
    #[error("slab is not propagating at E = {energy} eV; closed-form traversal time undefined")]
    NonPropagatingSlab { energy: f64 },

    /// An evanescent factor would exceed exp(200), past which amplitude
    /// ratios lose all precision long before f64 overflow.
    #[error("evanescent growth exp({exponent:.1}) exceeds the supported range (exp(200) per layer)")]
    EvanescentOverflow { exponent: f64 },

    /// A heterostructure must have at least one interior layer.
    #[error("structure has no interior layers")]
    EmptyInterior,

    /// Interior layers need a positive, finite thickness.
    #[error("layer {index}: thickness {thickness} nm is not positive and finite")]
    BadThickness { index: usize, thickness: f64 },

    /// Masses of zero (or absurd magnitude) break the kinematics.
    #[error("layer {index}: mass {mass} m0 is outside the supported window |m| in (1e-4, 1e2)")]
    BadMass { index: usize, mass: f64 },

    /// The brute-force integrator refuses steps too coarse to resolve the
    /// thinnest layer.
    #[error("integration step {step} nm exceeds the resolution limit {limit} nm (thinnest layer / 16)")]
    StepTooCoarse { step: f64, limit: f64 },

    /// Transmitted probability flux is exactly zero, so the dwell-time
    /// integrand (inverse group velocity) is undefined.
    #[error("transmitted flux is zero; traversal time undefined")]
    ZeroFlux,

    /// The requested operation is defined only for a single interior layer.
    #[error("operation requires exactly one interior layer, structure has {count}")]
    SingleLayerOnly { count: usize },

    /// Parameter combination outside what the operation supports.
    #[error("unsupported configuration: {what}")]
    Unsupported { what: &'static str },

    /// A configuration value failed validation.
    #[error("invalid configuration: {what}")]
    InvalidConfig { what: String },

    /// An input that must be finite was NaN or infinite.
    #[error("non-finite input: {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },
}
