//! Controlled-system description: drift, control channel with a fixed
//! digitized pulse shape, device constraints, and marked error sources.
//!
//! The single product this module hands to the propagation engine is the
//! piecewise-constant Hamiltonian grid: one `(HermitianOp, dt)` cell per
//! shape sample per pulse. All generators are angular frequencies in rad/ns;
//! durations are ns.

use crate::algebra::HermitianOp;
use crate::error::{CoreError, Result};
use crate::float::{scaled_tol, Real};

/// Analytic pulse-profile families that can be digitized into a [`PulseShape`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeKind {
    /// Raised-cosine rise and fall around a unit flat top. `ramp_fraction` is
    /// the fraction of the pulse spent in each ramp, in (0, 0.5].
    FlatTopCosine { ramp_fraction: f64 },
    /// `sin(pi x)` arch.
    HalfSine,
}

impl ShapeKind {
    fn value(&self, x: f64) -> f64 {
        match *self {
            ShapeKind::FlatTopCosine { ramp_fraction: r } => {
                if x < r {
                    0.5 * (1.0 - (std::f64::consts::PI * x / r).cos())
                } else if x > 1.0 - r {
                    0.5 * (1.0 - (std::f64::consts::PI * (1.0 - x) / r).cos())
                } else {
                    1.0
                }
            }
            ShapeKind::HalfSine => (std::f64::consts::PI * x).sin(),
        }
    }
}

/// Digitized normalized pulse profile.
///
/// Stores `cells + 1` nodal samples `c(x_k)` at uniform `x_k = k / cells`,
/// with `c(0) = c(1) = 0` (finite rise and drop) and `max = 1`. The
/// piecewise-constant realization used on the time grid takes each cell's
/// value at its midpoint (mean of the adjacent nodes), which keeps the
/// digitization error of a smooth profile second order in the cell width.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseShape<T: Real> {
    samples: Vec<T>,
    cell_means: Vec<T>,
}

impl<T: Real> PulseShape<T> {
    /// Validates and adopts nodal samples: non-negative, zero endpoints,
    /// maximum 1.
    pub fn from_samples(samples: Vec<T>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(CoreError::Validation(format!(
                "pulse shape needs at least 3 samples, got {}",
                samples.len()
            )));
        }
        let tol = scaled_tol::<T>(1e-12);
        let mut max = T::zero();
        for (k, &s) in samples.iter().enumerate() {
            if !s.is_finite() || s < T::zero() {
                return Err(CoreError::Validation(format!(
                    "pulse shape sample {k} is negative or non-finite"
                )));
            }
            if s > max {
                max = s;
            }
        }
        if (max - T::one()).abs() > tol {
            return Err(CoreError::Validation(format!(
                "pulse shape max sample is {max}, expected 1 (normalized convention)"
            )));
        }
        if samples[0] > tol || samples[samples.len() - 1] > tol {
            return Err(CoreError::Validation(
                "pulse shape must rise from 0 and drop to 0 at the endpoints".into(),
            ));
        }
        let cell_means = samples
            .windows(2)
            .map(|w| (w[0] + w[1]) * T::of(0.5))
            .collect();
        Ok(PulseShape {
            samples,
            cell_means,
        })
    }

    /// Digitizes an analytic profile on `cells` grid cells (`cells + 1`
    /// nodes), normalizing the maximum to 1.
    pub fn digitize(kind: ShapeKind, cells: usize) -> Result<Self> {
        if cells < 2 {
            return Err(CoreError::Validation(format!(
                "pulse shape digitization needs at least 2 cells, got {cells}"
            )));
        }
        if let ShapeKind::FlatTopCosine { ramp_fraction } = kind {
            if !(ramp_fraction > 0.0 && ramp_fraction <= 0.5) {
                return Err(CoreError::Validation(format!(
                    "ramp_fraction must lie in (0, 0.5], got {ramp_fraction}"
                )));
            }
        }
        let mut samples: Vec<f64> = (0..=cells)
            .map(|k| kind.value(k as f64 / cells as f64))
            .collect();
        let max = samples.iter().cloned().fold(0.0f64, f64::max);
        for s in &mut samples {
            *s /= max;
        }
        Self::from_samples(samples.into_iter().map(T::of).collect())
    }

    /// Nodal samples, endpoints included.
    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    /// Number of grid cells this shape digitizes a pulse into.
    pub fn cells(&self) -> usize {
        self.cell_means.len()
    }

    /// Per-cell midpoint values of the profile.
    pub fn cell_values(&self) -> &[T] {
        &self.cell_means
    }
}

/// One pulse: amplitude in rad/ns, duration in ns. The profile is owned by
/// the sequence (all pulses share it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse<T: Real> {
    pub amplitude: T,
    pub duration: T,
}

/// Back-to-back pulses sharing one digitized profile.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence<T: Real> {
    shape: PulseShape<T>,
    pulses: Vec<Pulse<T>>,
}

impl<T: Real> PulseSequence<T> {
    /// Durations must be positive and finite; amplitude bounds are checked
    /// against a model by [`validate`], not here.
    pub fn new(shape: PulseShape<T>, pulses: Vec<Pulse<T>>) -> Result<Self> {
        for (i, p) in pulses.iter().enumerate() {
            if !(p.duration > T::zero() && p.duration.is_finite()) {
                return Err(CoreError::Validation(format!(
                    "pulse {i} has non-positive duration {}",
                    p.duration
                )));
            }
            if !p.amplitude.is_finite() {
                return Err(CoreError::Validation(format!(
                    "pulse {i} has non-finite amplitude"
                )));
            }
        }
        Ok(PulseSequence { shape, pulses })
    }

    /// Uniform-duration sequence from an amplitude vector.
    pub fn from_amplitudes(shape: PulseShape<T>, amplitudes: &[T], duration: T) -> Result<Self> {
        Self::new(
            shape,
            amplitudes
                .iter()
                .map(|&amplitude| Pulse {
                    amplitude,
                    duration,
                })
                .collect(),
        )
    }

    pub fn shape(&self) -> &PulseShape<T> {
        &self.shape
    }

    pub fn pulses(&self) -> &[Pulse<T>] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn total_duration(&self) -> T {
        self.pulses
            .iter()
            .fold(T::zero(), |acc, p| acc + p.duration)
    }

    pub fn amplitudes(&self) -> Vec<T> {
        self.pulses.iter().map(|p| p.amplitude).collect()
    }
}

/// Hardware limits the synthesizer and validator enforce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceConstraints<T: Real> {
    /// Amplitude bounds in rad/ns (closed interval).
    pub h_min: T,
    pub h_max: T,
    /// Fixed per-pulse duration in ns.
    pub tau_fixed: T,
    /// Pulse-count bounds.
    pub n_min: usize,
    pub n_max: usize,
    /// Grid cells per pulse.
    pub samples_per_pulse: usize,
}

impl<T: Real> DeviceConstraints<T> {
    pub fn check_feasible(&self) -> Result<()> {
        if !(self.h_min >= T::zero() && self.h_min < self.h_max && self.h_max.is_finite()) {
            return Err(CoreError::Infeasible(format!(
                "need 0 <= h_min < h_max, got [{}, {}]",
                self.h_min, self.h_max
            )));
        }
        if !(self.tau_fixed > T::zero() && self.tau_fixed.is_finite()) {
            return Err(CoreError::Infeasible(format!(
                "need tau_fixed > 0, got {}",
                self.tau_fixed
            )));
        }
        if self.n_min < 1 || self.n_max < self.n_min {
            return Err(CoreError::Infeasible(format!(
                "need 1 <= n_min <= n_max, got [{}, {}]",
                self.n_min, self.n_max
            )));
        }
        if self.samples_per_pulse < 2 {
            return Err(CoreError::Infeasible(format!(
                "need samples_per_pulse >= 2, got {}",
                self.samples_per_pulse
            )));
        }
        Ok(())
    }
}

/// How a marked error source enters the Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceKind<T: Real> {
    /// `delta * generator` added to the Hamiltonian (decoherence-type, e.g.
    /// a field-gradient fluctuation coupling through sigma_x/2).
    Additive { generator: HermitianOp<T> },
    /// `delta * (nominal control term)`: the generator is the instantaneous
    /// control `h_i c(x) H_channel` on the referenced channel.
    Multiplicative { channel: usize },
    /// Pure-bath term: acts as identity on the system, so its projected
    /// sensitivity is identically zero. Carried for bookkeeping only.
    PureBath,
}

/// A symbolically marked error source. `bath_label` names the bath factor
/// (never a numeric value); sensitivities are reported per label.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSource<T: Real> {
    pub label: String,
    pub kind: SourceKind<T>,
    pub bath_label: String,
}

impl<T: Real> ErrorSource<T> {
    pub fn additive(label: &str, generator: HermitianOp<T>, bath_label: &str) -> Self {
        ErrorSource {
            label: label.into(),
            kind: SourceKind::Additive { generator },
            bath_label: bath_label.into(),
        }
    }

    pub fn multiplicative(label: &str, channel: usize) -> Self {
        ErrorSource {
            label: label.into(),
            kind: SourceKind::Multiplicative { channel },
            bath_label: "identity".into(),
        }
    }

    pub fn pure_bath(label: &str, bath_label: &str) -> Self {
        ErrorSource {
            label: label.into(),
            kind: SourceKind::PureBath,
            bath_label: bath_label.into(),
        }
    }
}

/// Drift + control channels + constraints + marked error sources.
///
/// The channel list is single-entry for now (one tunable axis); the grid
/// builders index it so a multi-channel extension stays additive.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlModel<T: Real> {
    drift: HermitianOp<T>,
    channels: Vec<HermitianOp<T>>,
    shape: PulseShape<T>,
    constraints: DeviceConstraints<T>,
    error_sources: Vec<ErrorSource<T>>,
}

impl<T: Real> ControlModel<T> {
    pub fn new(
        drift: HermitianOp<T>,
        channels: Vec<HermitianOp<T>>,
        shape: PulseShape<T>,
        constraints: DeviceConstraints<T>,
        error_sources: Vec<ErrorSource<T>>,
    ) -> Result<Self> {
        constraints.check_feasible()?;
        if channels.len() != 1 {
            return Err(CoreError::Validation(format!(
                "exactly one control channel is supported, got {}",
                channels.len()
            )));
        }
        // Complete-controllability prerequisite: drift and channel must not
        // commute (i[A,B] is Hermitian; test its norm).
        let ab = drift.mat().mul(channels[0].mat());
        let ba = channels[0].mat().mul(drift.mat());
        let comm = HermitianOp::from_mat_hermitized(
            ab.sub(&ba)
                .scale(num_complex::Complex::new(T::zero(), T::one())),
        );
        let floor = scaled_tol::<T>(1e-12)
            * T::one().max(drift.op_norm() * channels[0].op_norm());
        if comm.op_norm() <= floor {
            return Err(CoreError::Validation(
                "drift and control channel commute; the model is not controllable".into(),
            ));
        }
        for (i, s) in error_sources.iter().enumerate() {
            if let SourceKind::Multiplicative { channel } = s.kind {
                if channel >= channels.len() {
                    return Err(CoreError::Validation(format!(
                        "error source '{}' references channel {channel}, but only {} exist",
                        s.label,
                        channels.len()
                    )));
                }
            }
            if error_sources[..i].iter().any(|o| o.label == s.label) {
                return Err(CoreError::Validation(format!(
                    "duplicate error source label '{}'",
                    s.label
                )));
            }
        }
        Ok(ControlModel {
            drift,
            channels,
            shape,
            constraints,
            error_sources,
        })
    }

    /// The worked model of this crate: fixed field-gradient drift
    /// `(b/2) sigma_x` with one exchange channel `sigma_z / 2`.
    pub fn exchange_qubit(
        b: T,
        shape: PulseShape<T>,
        constraints: DeviceConstraints<T>,
        error_sources: Vec<ErrorSource<T>>,
    ) -> Result<Self> {
        Self::new(
            HermitianOp::pauli_x().scale(b * T::of(0.5)),
            vec![HermitianOp::pauli_z().scale(T::of(0.5))],
            shape,
            constraints,
            error_sources,
        )
    }

    pub fn drift(&self) -> &HermitianOp<T> {
        &self.drift
    }

    pub fn channel(&self, index: usize) -> &HermitianOp<T> {
        &self.channels[index]
    }

    pub fn shape(&self) -> &PulseShape<T> {
        &self.shape
    }

    pub fn constraints(&self) -> &DeviceConstraints<T> {
        &self.constraints
    }

    pub fn error_sources(&self) -> &[ErrorSource<T>] {
        &self.error_sources
    }

    pub fn source(&self, label: &str) -> Result<&ErrorSource<T>> {
        self.error_sources
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| CoreError::Lookup(format!("unknown error source label '{label}'")))
    }
}

/// One piecewise-constant cell of the time grid.
pub type GridSample<T> = (HermitianOp<T>, T);

/// A constraint violation found by [`validate`]; data, not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation<T: Real> {
    AmplitudeLow { pulse: usize, amount: T },
    AmplitudeHigh { pulse: usize, amount: T },
    DurationMismatch { pulse: usize, amount: T },
    CountLow { n: usize, n_min: usize },
    CountHigh { n: usize, n_max: usize },
}

impl<T: Real> std::fmt::Display for Violation<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::AmplitudeLow { pulse, amount } => {
                write!(f, "pulse {pulse}: amplitude {amount:e} below h_min")
            }
            Violation::AmplitudeHigh { pulse, amount } => {
                write!(f, "pulse {pulse}: amplitude {amount:e} above h_max")
            }
            Violation::DurationMismatch { pulse, amount } => {
                write!(f, "pulse {pulse}: duration deviates from tau_fixed by {amount:e}")
            }
            Violation::CountLow { n, n_min } => write!(f, "n = {n} < n_min = {n_min}"),
            Violation::CountHigh { n, n_max } => write!(f, "n = {n} > n_max = {n_max}"),
        }
    }
}

/// Checks a sequence against the model's device constraints. Every violation
/// is reported with its pulse index and magnitude; an empty list means ok.
/// Bounds are closed: `h == h_max` is acceptable.
pub fn validate<T: Real>(model: &ControlModel<T>, seq: &PulseSequence<T>) -> Vec<Violation<T>> {
    let c = model.constraints();
    let mut out = Vec::new();
    let n = seq.len();
    if n < c.n_min {
        out.push(Violation::CountLow { n, n_min: c.n_min });
    }
    if n > c.n_max {
        out.push(Violation::CountHigh { n, n_max: c.n_max });
    }
    let tau_tol = scaled_tol::<T>(1e-12) * T::one().max(c.tau_fixed);
    for (i, p) in seq.pulses().iter().enumerate() {
        if p.amplitude < c.h_min {
            out.push(Violation::AmplitudeLow {
                pulse: i,
                amount: c.h_min - p.amplitude,
            });
        }
        if p.amplitude > c.h_max {
            out.push(Violation::AmplitudeHigh {
                pulse: i,
                amount: p.amplitude - c.h_max,
            });
        }
        let dev = (p.duration - c.tau_fixed).abs();
        if dev > tau_tol {
            out.push(Violation::DurationMismatch {
                pulse: i,
                amount: dev,
            });
        }
    }
    out
}

fn require_valid<T: Real>(model: &ControlModel<T>, seq: &PulseSequence<T>) -> Result<()> {
    let violations = validate(model, seq);
    if let Some(v) = violations.first() {
        return Err(CoreError::Validation(format!(
            "sequence violates device constraints ({} total): {v}",
            violations.len()
        )));
    }
    Ok(())
}

/// Piecewise-constant Hamiltonian samples
/// `H_k = drift + h_i c_k * channel`, each of width `dt = tau_i / cells`,
/// covering `[0, total_duration]` exactly.
pub fn hamiltonian_grid<T: Real>(
    model: &ControlModel<T>,
    seq: &PulseSequence<T>,
) -> Result<Vec<GridSample<T>>> {
    require_valid(model, seq)?;
    Ok(raw_hamiltonian_grid(model, seq))
}

/// Grid construction without the constraint check; shared with the noisy
/// propagation path, which perturbs the same cells.
pub(crate) fn raw_hamiltonian_grid<T: Real>(
    model: &ControlModel<T>,
    seq: &PulseSequence<T>,
) -> Vec<GridSample<T>> {
    build_grid(model, seq, &[])
}

/// Builds the grid with error sources physically dialed in: each `(index,
/// delta)` shift perturbs `model.error_sources()[index]` by the scalar
/// `delta` (bath factors replaced by 1). With no shifts this is exactly the
/// nominal grid, bit for bit: multiplicative factors of `1.0` and skipped
/// zero-additions leave the arithmetic unchanged.
pub(crate) fn build_grid<T: Real>(
    model: &ControlModel<T>,
    seq: &PulseSequence<T>,
    shifts: &[(usize, T)],
) -> Vec<GridSample<T>> {
    let cells = seq.shape().cell_values();
    let mut control_factor = T::one();
    let mut added: Vec<(HermitianOp<T>, T)> = Vec::new();
    for &(idx, delta) in shifts {
        match &model.error_sources()[idx].kind {
            SourceKind::Multiplicative { .. } => control_factor *= T::one() + delta,
            SourceKind::Additive { generator } => {
                if delta != T::zero() {
                    added.push((*generator, delta));
                }
            }
            SourceKind::PureBath => {
                if delta != T::zero() {
                    added.push((HermitianOp::identity(), delta));
                }
            }
        }
    }
    let channel = model.channel(0);
    let mut grid = Vec::with_capacity(seq.len() * cells.len());
    for p in seq.pulses() {
        let dt = p.duration / T::of(cells.len() as f64);
        for &c in cells {
            let mut h = *model.drift() + channel.scale(p.amplitude * c * control_factor);
            for &(gen, delta) in &added {
                h = h + gen.scale(delta);
            }
            grid.push((h, dt));
        }
    }
    grid
}

/// Amplitude-grid construction without the constraint check.
pub(crate) fn raw_control_amplitude_grid<T: Real>(
    model: &ControlModel<T>,
    seq: &PulseSequence<T>,
    channel: usize,
) -> Vec<GridSample<T>> {
    let cells = seq.shape().cell_values();
    let generator = model.channel(channel);
    let mut grid = Vec::with_capacity(seq.len() * cells.len());
    for p in seq.pulses() {
        let dt = p.duration / T::of(cells.len() as f64);
        for &c in cells {
            grid.push((generator.scale(p.amplitude * c), dt));
        }
    }
    grid
}

/// Error-generator samples `dH/d(delta) at delta = 0` for a multiplicative
/// source: `h_i c_k * channel` on the same grid as [`hamiltonian_grid`].
pub fn control_amplitude_grid<T: Real>(
    model: &ControlModel<T>,
    seq: &PulseSequence<T>,
    source: &ErrorSource<T>,
) -> Result<Vec<GridSample<T>>> {
    let channel = match source.kind {
        SourceKind::Multiplicative { channel } => channel,
        _ => {
            return Err(CoreError::Contract(format!(
                "control_amplitude_grid requires a multiplicative source, '{}' is not",
                source.label
            )))
        }
    };
    require_valid(model, seq)?;
    Ok(raw_control_amplitude_grid(model, seq, channel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Unitary;
    use crate::rng::SplitMix64;

    const TWO_PI: f64 = std::f64::consts::TAU;

    fn default_shape(cells: usize) -> PulseShape<f64> {
        PulseShape::digitize(ShapeKind::FlatTopCosine { ramp_fraction: 0.25 }, cells).unwrap()
    }

    fn paper_constraints() -> DeviceConstraints<f64> {
        DeviceConstraints {
            h_min: 0.0,
            h_max: TWO_PI * 0.3,
            tau_fixed: 3.0,
            n_min: 1,
            n_max: 25,
            samples_per_pulse: 60,
        }
    }

    fn paper_model() -> ControlModel<f64> {
        ControlModel::exchange_qubit(
            TWO_PI * 0.1,
            default_shape(60),
            paper_constraints(),
            vec![
                ErrorSource::additive("delta_b", HermitianOp::pauli_x().scale(0.5), "B_x"),
                ErrorSource::multiplicative("delta_j", 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn shape_invariants_hold_for_digitized_profiles() {
        for cells in [4usize, 10, 60, 121] {
            let s = default_shape(cells);
            assert_eq!(s.sample_count(), cells + 1);
            assert_eq!(s.cells(), cells);
            assert_eq!(s.samples()[0], 0.0);
            assert_eq!(*s.samples().last().unwrap(), 0.0);
            let max = s.samples().iter().cloned().fold(0.0, f64::max);
            assert!((max - 1.0).abs() < 1e-15);

            let h = PulseShape::<f64>::digitize(ShapeKind::HalfSine, cells).unwrap();
            let max = h.samples().iter().cloned().fold(0.0, f64::max);
            assert!((max - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn shape_rejects_bad_samples() {
        assert!(PulseShape::<f64>::from_samples(vec![0.0, 0.5, 0.0]).is_err()); // max != 1
        assert!(PulseShape::<f64>::from_samples(vec![0.2, 1.0, 0.0]).is_err()); // nonzero start
        assert!(PulseShape::<f64>::from_samples(vec![0.0, -1.0, 0.0]).is_err());
        assert!(PulseShape::<f64>::from_samples(vec![0.0, 1.0]).is_err());
        assert!(PulseShape::<f64>::from_samples(vec![0.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn grid_of_zero_amplitude_is_pure_drift() {
        let model = paper_model();
        let seq =
            PulseSequence::from_amplitudes(model.shape().clone(), &[0.0], 3.0).unwrap();
        let grid = hamiltonian_grid(&model, &seq).unwrap();
        assert_eq!(grid.len(), 60);
        for (h, dt) in &grid {
            assert!((*dt - 0.05).abs() < 1e-15);
            assert!(h.mat().max_abs_diff(model.drift().mat()) < 1e-15);
        }
    }

    #[test]
    fn grid_flat_top_sample_value() {
        let model = paper_model();
        let h = TWO_PI * 0.1;
        let seq = PulseSequence::from_amplitudes(model.shape().clone(), &[h], 3.0).unwrap();
        let grid = hamiltonian_grid(&model, &seq).unwrap();
        // Cell 30 sits in the flat top where c = 1.
        let expected = *model.drift() + HermitianOp::pauli_z().scale(TWO_PI * 0.05);
        assert!(grid[30].0.mat().max_abs_diff(expected.mat()) < 1e-13);
    }

    #[test]
    fn grid_spans_total_duration() {
        let model = paper_model();
        let seq = PulseSequence::from_amplitudes(
            model.shape().clone(),
            &vec![0.1; 17],
            3.0,
        )
        .unwrap();
        let grid = hamiltonian_grid(&model, &seq).unwrap();
        let total: f64 = grid.iter().map(|(_, dt)| dt).sum();
        assert!((total - 51.0).abs() < 1e-12);
    }

    #[test]
    fn grid_is_linear_in_amplitudes() {
        let model = paper_model();
        let mut rng = SplitMix64::new(21);
        let h1: Vec<f64> = (0..4).map(|_| rng.uniform_in(0.0, 0.9)).collect();
        let h2: Vec<f64> = (0..4).map(|_| rng.uniform_in(0.0, 0.9)).collect();
        let sum: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| a + b).collect();
        let shape = model.shape().clone();
        let make = |h: &[f64]| {
            let seq = PulseSequence::from_amplitudes(shape.clone(), h, 3.0).unwrap();
            hamiltonian_grid(&model, &seq).unwrap()
        };
        let (ga, gb, g0, gsum) = (make(&h1), make(&h2), make(&[0.0; 4]), make(&sum));
        for k in 0..ga.len() {
            let lhs = ga[k].0 + gb[k].0 - g0[k].0;
            assert!(lhs.mat().max_abs_diff(gsum[k].0.mat()) < 1e-12);
        }
    }

    #[test]
    fn amplitude_grid_matches_control_term() {
        let model = paper_model();
        let source = model.source("delta_j").unwrap().clone();
        let h = TWO_PI * 0.1;
        let seq = PulseSequence::from_amplitudes(model.shape().clone(), &[h], 3.0).unwrap();
        let agrid = control_amplitude_grid(&model, &seq, &source).unwrap();
        let hgrid = hamiltonian_grid(&model, &seq).unwrap();
        assert_eq!(agrid.len(), hgrid.len());
        for k in 0..agrid.len() {
            // H_k - drift == error generator sample, and widths agree.
            let diff = hgrid[k].0 - *model.drift();
            assert!(diff.mat().max_abs_diff(agrid[k].0.mat()) < 1e-13);
            assert_eq!(agrid[k].1, hgrid[k].1);
        }
        // Zero amplitude -> all-zero generators.
        let seq0 = PulseSequence::from_amplitudes(model.shape().clone(), &[0.0], 3.0).unwrap();
        for (op, _) in control_amplitude_grid(&model, &seq0, &source).unwrap() {
            assert_eq!(op.op_norm(), 0.0);
        }
    }

    #[test]
    fn amplitude_grid_rejects_additive_source() {
        let model = paper_model();
        let source = model.source("delta_b").unwrap().clone();
        let seq = PulseSequence::from_amplitudes(model.shape().clone(), &[0.1], 3.0).unwrap();
        match control_amplitude_grid(&model, &seq, &source) {
            Err(CoreError::Contract(_)) => {}
            other => panic!("expected contract violation, got {other:?}"),
        }
    }

    #[test]
    fn validate_closed_interval_and_empty_sequence() {
        let model = paper_model();
        let shape = model.shape().clone();
        let at = |h: f64| PulseSequence::from_amplitudes(shape.clone(), &[h], 3.0).unwrap();

        assert!(validate(&model, &at(TWO_PI * 0.3)).is_empty());
        let violations = validate(&model, &at(TWO_PI * 0.3 + 1e-9));
        assert_eq!(violations.len(), 1);
        match &violations[0] {
            Violation::AmplitudeHigh { pulse: 0, amount } => {
                assert!((amount - 1e-9).abs() < 1e-12)
            }
            v => panic!("unexpected violation {v:?}"),
        }

        let empty = PulseSequence::new(shape.clone(), vec![]).unwrap();
        let violations = validate(&model, &empty);
        assert!(matches!(violations[0], Violation::CountLow { n: 0, n_min: 1 }));

        let wrong_tau = PulseSequence::from_amplitudes(shape, &[0.1], 2.5).unwrap();
        assert!(validate(&model, &wrong_tau)
            .iter()
            .any(|v| matches!(v, Violation::DurationMismatch { .. })));
    }

    #[test]
    fn grid_refinement_converges_at_second_order() {
        // Doubling samples_per_pulse must shrink the propagator error by ~4x.
        let mut rng = SplitMix64::new(31);
        let kind = ShapeKind::FlatTopCosine { ramp_fraction: 0.25 };
        for _ in 0..5 {
            let amps: Vec<f64> = (0..3).map(|_| rng.uniform_in(0.0, TWO_PI * 0.3)).collect();
            let propagator = |cells: usize| -> Unitary<f64> {
                let mut c = paper_constraints();
                c.samples_per_pulse = cells;
                let model = ControlModel::exchange_qubit(
                    TWO_PI * 0.1,
                    PulseShape::digitize(kind, cells).unwrap(),
                    c,
                    vec![],
                )
                .unwrap();
                let seq =
                    PulseSequence::from_amplitudes(model.shape().clone(), &amps, 3.0).unwrap();
                let grid = hamiltonian_grid(&model, &seq).unwrap();
                let mut u = Unitary::identity();
                for (h, dt) in grid {
                    u = h.expm(dt).mul(&u);
                }
                u
            };
            let reference = propagator(960);
            let e1 = propagator(30).distance(&reference);
            let e2 = propagator(60).distance(&reference);
            let slope = (e1 / e2).log2();
            assert!(
                (slope - 2.0).abs() < 0.35,
                "refinement slope {slope}, errors {e1:e} -> {e2:e}"
            );
        }
    }

    #[test]
    fn additive_sources_with_traceless_generator_are_projection_fixed_points() {
        let model = paper_model();
        for s in model.error_sources() {
            if let SourceKind::Additive { generator } = &s.kind {
                let p = generator.traceless_part();
                assert!(p.mat().max_abs_diff(generator.mat()) < 1e-15);
            }
        }
    }

    #[test]
    fn model_rejects_commuting_drift_and_channel() {
        let shape = default_shape(10);
        let err = ControlModel::new(
            HermitianOp::pauli_z().scale(0.3),
            vec![HermitianOp::pauli_z().scale(0.5)],
            shape,
            paper_constraints(),
            vec![],
        );
        assert!(err.is_err());
    }

    #[test]
    fn infeasible_constraints_rejected() {
        let mut c = paper_constraints();
        c.h_min = 1.0;
        c.h_max = 0.5;
        assert!(matches!(c.check_feasible(), Err(CoreError::Infeasible(_))));
    }
}
