//! Robust pulse-sequence synthesis for single-qubit gates.
//!
//! The crate builds pulse sequences that realize a target unitary exactly in
//! the noise-free limit while cancelling, to first order, the sensitivity to
//! marked decoherence and control-error sources:
//!
//! - [`algebra`]: 2x2 Hermitian/unitary operator algebra with closed-form
//!   exponentials and a phase-invariant gate distance.
//! - [`control`]: drift + shaped-pulse control channel, device constraints,
//!   symbolically marked error sources, and the piecewise-constant
//!   Hamiltonian grid.
//! - [`sensitivity`]: toggling-frame propagation, first-order sensitivity
//!   operators per source, gate-distance and sensitivity objectives, and a
//!   finite-difference cross-check.
//! - [`synthesis`]: constrained multi-start minimization over pulse
//!   amplitudes with an incremental pulse-count schedule.
//! - [`evaluation`]: quasi-static noise sweeps, Gaussian ensemble averages
//!   (Gauss-Hermite quadrature and seeded Monte Carlo), and log-log slope
//!   diagnostics.
//!
//! All numeric code is generic over the scalar type via [`float::Real`];
//! the `*64`/`*32` aliases below pin the two supported precisions.

pub mod algebra;
pub mod control;
pub mod error;
pub mod evaluation;
pub mod float;
pub mod rng;
pub mod sensitivity;
pub mod synthesis;

pub use algebra::{HermitianOp, Unitary};
pub use control::{
    control_amplitude_grid, hamiltonian_grid, validate, ControlModel, DeviceConstraints,
    ErrorSource, GridSample, Pulse, PulseSequence, PulseShape, ShapeKind, SourceKind, Violation,
};
pub use error::{CoreError, Result};
pub use evaluation::{
    ensemble_average, fidelity_loss, noisy_propagator, slope_fit, sweep, EnsembleMethod,
    EnsembleSpec, NoisePoint, SweepRow,
};
pub use float::Real;
pub use sensitivity::{
    epg_compose, fd_oracle, objectives, propagate, sensitivity_operator, FdEstimate,
    SensitivityReport, SourceSensitivity,
};
pub use synthesis::{
    local_minimize, numeric_gradient, scalarize, synthesize, SynthesisProblem, SynthesisResult,
};

/// Double-precision aliases (the production instantiation).
pub type HermitianOp64 = HermitianOp<f64>;
pub type Unitary64 = Unitary<f64>;
pub type PulseShape64 = PulseShape<f64>;
pub type PulseSequence64 = PulseSequence<f64>;
pub type ControlModel64 = ControlModel<f64>;
pub type DeviceConstraints64 = DeviceConstraints<f64>;
pub type ErrorSource64 = ErrorSource<f64>;
pub type SensitivityReport64 = SensitivityReport<f64>;
pub type SynthesisProblem64 = SynthesisProblem<f64>;
pub type SynthesisResult64 = SynthesisResult<f64>;

/// Single-precision aliases (for quick low-precision experiments).
pub type HermitianOp32 = HermitianOp<f32>;
pub type Unitary32 = Unitary<f32>;
pub type PulseShape32 = PulseShape<f32>;
pub type PulseSequence32 = PulseSequence<f32>;
pub type ControlModel32 = ControlModel<f32>;
