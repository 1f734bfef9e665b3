//! Coherent-state quantization of the cylindric phase space S^1 x R.
//!
//! Starting from an admissible action-variable probability distribution, the
//! crate builds the associated family of coherent states on the circle,
//! quantizes classical observables into truncated operator matrices,
//! evaluates lower symbols and commutators, and follows the phase-space
//! localization distribution under a quantized Hamiltonian.
//!
//! Modules:
//! - [`dist`]: admissible distributions (Gaussian, uniform, custom) and the
//!   numeric verifier for the admissibility conditions;
//! - [`cs`]: coherent states, the normalization function, overlap kernels,
//!   and the resolution-of-identity diagnostic;
//! - [`quantizer`]: observable specifications, truncated operators, and
//!   commutators;
//! - [`symbols`]: lower symbols, d-coefficients, and the closed-form suite
//!   for the uniform family;
//! - [`dynamics`]: time evolution and the localization distribution;
//! - [`io`]: reproducible CSV/JSON emission and input-file parsers.

pub mod cs;
pub mod dist;
pub mod dynamics;
mod error;
pub mod io;
pub mod quad;
pub mod quantizer;
pub mod symbols;

pub use cs::{
    coherent_state, cs_overlap, cs_overlap_gaussian_poisson, discrete_distribution,
    normalization, resolution_of_identity_residual, CoherentState, IdentityResidualPlan,
    NormalizationFn, NormalizationMethod, PhasePoint,
};
pub use dist::{
    verify_admissibility, ActionDistribution, AdmissibilityReport, ConditionStatus,
    Interpolation, Kind, OverlapMatrix, SampledDensity, SamplingPlan,
};
pub use dynamics::{
    evolve_state, evolved_lower_symbol, gaussian_rho_series, localization_frame,
    localization_frames, EvolutionFrame, PhaseGrid, SeriesForm,
};
pub use error::{Error, Result};
pub use quantizer::{
    action_angle_commutator, angle_operator, commutator, energy_harmonic_commutator,
    fourier_harmonic, quantize, quantize_generic, ObservableSpec, RadialFn, TruncatedOperator,
};
pub use symbols::{
    commutator_lower_symbol, d_coefficients, lower_symbol, lower_symbol_angle_closed,
    lower_symbol_field, lower_symbol_fourier, relative_error, DCoefficients, LowerSymbolField,
};

pub type Complex64 = num_complex::Complex<f64>;
