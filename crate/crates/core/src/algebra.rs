//! Exact 2x2 complex operator algebra.
//!
//! [`HermitianOp`] and [`Unitary`] are the substrate every other module
//! propagates, integrates, and compares. The dimension is fixed at 2: the
//! matrix exponential uses the closed form
//! `exp(-i (c0*I + v.sigma) t) = e^{-i c0 t} (cos(|v|t) I - i sin(|v|t) vhat.sigma)`
//! and the operator norm of a Hermitian matrix is `max |c0 +- |v||` in Pauli
//! coordinates.

use num_complex::Complex;

use crate::error::{CoreError, Result};
use crate::float::{scaled_tol, Real};

/// Max entry-wise asymmetry tolerated when accepting a Hermitian matrix.
pub fn hermiticity_tol<T: Real>() -> T {
    scaled_tol(1e-14)
}

/// Max deviation of `U^dag U` from identity tolerated when accepting a unitary.
pub fn unitarity_tol<T: Real>() -> T {
    scaled_tol(1e-12)
}

/// Plain 2x2 complex matrix; the unvalidated substrate behind the domain types.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Mat2<T: Real> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Mat2<T> {
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Mat2 { m: [[z, z], [z, z]] }
    }

    pub fn identity() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        let o = Complex::new(T::one(), T::zero());
        Mat2 { m: [[o, z], [z, o]] }
    }

    #[inline]
    pub fn mul(&self, rhs: &Mat2<T>) -> Mat2<T> {
        let a = &self.m;
        let b = &rhs.m;
        Mat2 {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    #[inline]
    pub fn adjoint(&self) -> Mat2<T> {
        Mat2 {
            m: [
                [self.m[0][0].conj(), self.m[1][0].conj()],
                [self.m[0][1].conj(), self.m[1][1].conj()],
            ],
        }
    }

    #[inline]
    pub fn add(&self, rhs: &Mat2<T>) -> Mat2<T> {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = out.m[r][c] + rhs.m[r][c];
            }
        }
        out
    }

    #[inline]
    pub fn sub(&self, rhs: &Mat2<T>) -> Mat2<T> {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = out.m[r][c] - rhs.m[r][c];
            }
        }
        out
    }

    #[inline]
    pub fn scale(&self, s: Complex<T>) -> Mat2<T> {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = out.m[r][c] * s;
            }
        }
        out
    }

    #[inline]
    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest absolute entry of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Mat2<T>) -> T {
        let mut worst = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                let d = (self.m[r][c] - rhs.m[r][c]).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Hermitian part `(M + M^dag)/2`.
    pub fn hermitian_part(&self) -> Mat2<T> {
        let half = Complex::new(T::of(0.5), T::zero());
        self.add(&self.adjoint()).scale(half)
    }
}

/// A 2x2 Hermitian operator (generators, error actions, sensitivity operators).
///
/// Construction validates hermiticity; the stored entries are the exact
/// Hermitian part, so Pauli coefficients are real by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOp<T: Real> {
    mat: Mat2<T>,
}

impl<T: Real> HermitianOp<T> {
    /// Validates `entries` against its own conjugate transpose and stores the
    /// Hermitian part. Entry layout is `[[m00, m01], [m10, m11]]`.
    pub fn from_entries(entries: [[Complex<T>; 2]; 2]) -> Result<Self> {
        let mat = Mat2 { m: entries };
        let asym = mat.max_abs_diff(&mat.adjoint());
        if asym > hermiticity_tol::<T>() {
            return Err(CoreError::Validation(format!(
                "matrix is not Hermitian: max asymmetry {asym:e} exceeds {:e}",
                hermiticity_tol::<T>()
            )));
        }
        Ok(HermitianOp {
            mat: mat.hermitian_part(),
        })
    }

    /// Builds `c0*I + cx*sigma_x + cy*sigma_y + cz*sigma_z`.
    pub fn from_pauli(c0: T, cx: T, cy: T, cz: T) -> Self {
        let re = |x: T| Complex::new(x, T::zero());
        HermitianOp {
            mat: Mat2 {
                m: [
                    [re(c0 + cz), Complex::new(cx, -cy)],
                    [Complex::new(cx, cy), re(c0 - cz)],
                ],
            },
        }
    }

    pub fn zero() -> Self {
        HermitianOp { mat: Mat2::zero() }
    }

    pub fn identity() -> Self {
        HermitianOp {
            mat: Mat2::identity(),
        }
    }

    pub fn pauli_x() -> Self {
        Self::from_pauli(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn pauli_y() -> Self {
        Self::from_pauli(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn pauli_z() -> Self {
        Self::from_pauli(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// Operator dimension (fixed at 2 in this crate).
    pub const fn dim(&self) -> usize {
        2
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex<T> {
        self.mat.m[r][c]
    }

    /// Decomposes into Pauli coordinates `(c0, cx, cy, cz)` with
    /// `self = c0*I + cx*sigma_x + cy*sigma_y + cz*sigma_z`.
    pub fn pauli_expand(&self) -> (T, T, T, T) {
        let half = T::of(0.5);
        let m = &self.mat.m;
        let c0 = (m[0][0].re + m[1][1].re) * half;
        let cz = (m[0][0].re - m[1][1].re) * half;
        let cx = (m[0][1].re + m[1][0].re) * half;
        let cy = (m[1][0].im - m[0][1].im) * half;
        (c0, cx, cy, cz)
    }

    /// Operator norm (largest absolute eigenvalue): `max|c0 +- r|` with
    /// `r = sqrt(cx^2 + cy^2 + cz^2)`.
    pub fn op_norm(&self) -> T {
        let (c0, cx, cy, cz) = self.pauli_expand();
        let r = (cx * cx + cy * cy + cz * cz).sqrt();
        (c0 + r).abs().max((c0 - r).abs())
    }

    /// Removes the trace: `self - Tr(self)/2 * I`. Idempotent.
    pub fn traceless_part(&self) -> HermitianOp<T> {
        let (_, cx, cy, cz) = self.pauli_expand();
        Self::from_pauli(T::zero(), cx, cy, cz)
    }

    pub fn scale(&self, s: T) -> HermitianOp<T> {
        HermitianOp {
            mat: self.mat.scale(Complex::new(s, T::zero())),
        }
    }

    /// Closed-form `exp(-i self dt)`. Exact for any finite `dt` (negative
    /// values propagate backwards).
    pub fn expm(&self, dt: T) -> Unitary<T> {
        let (c0, cx, cy, cz) = self.pauli_expand();
        let r = (cx * cx + cy * cy + cz * cz).sqrt();
        let theta = r * dt;
        let cos_t = theta.cos();
        // sin(r dt)/r, continued through r -> 0 as dt * sinc(theta).
        let sin_over_r = if r * dt.abs() < T::of(1e-4) {
            let t2 = theta * theta;
            dt * (T::one() - t2 / T::of(6.0) + t2 * t2 / T::of(120.0))
        } else {
            theta.sin() / r
        };
        let phase = Complex::from_polar(T::one(), -c0 * dt);
        let i = Complex::new(T::zero(), T::one());
        let re = |x: T| Complex::new(x, T::zero());
        // cos(theta) I - i sin(theta) vhat.sigma, then the global phase.
        let m = Mat2 {
            m: [
                [
                    re(cos_t) - i * re(sin_over_r * cz),
                    -i * Complex::new(sin_over_r * cx, -sin_over_r * cy),
                ],
                [
                    -i * Complex::new(sin_over_r * cx, sin_over_r * cy),
                    re(cos_t) + i * re(sin_over_r * cz),
                ],
            ],
        };
        Unitary {
            mat: m.scale(phase),
        }
    }

    pub(crate) fn mat(&self) -> &Mat2<T> {
        &self.mat
    }

    pub(crate) fn from_mat_hermitized(mat: Mat2<T>) -> Self {
        HermitianOp {
            mat: mat.hermitian_part(),
        }
    }
}

impl<T: Real> std::ops::Add for HermitianOp<T> {
    type Output = HermitianOp<T>;
    fn add(self, rhs: Self) -> Self::Output {
        HermitianOp {
            mat: self.mat.add(&rhs.mat),
        }
    }
}

impl<T: Real> std::ops::Sub for HermitianOp<T> {
    type Output = HermitianOp<T>;
    fn sub(self, rhs: Self) -> Self::Output {
        HermitianOp {
            mat: self.mat.sub(&rhs.mat),
        }
    }
}

/// A 2x2 unitary (propagators, toggling frames, gate targets).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary<T: Real> {
    mat: Mat2<T>,
}

impl<T: Real> Unitary<T> {
    /// Validates `U^dag U = I` and `|det U| = 1` before accepting.
    pub fn from_entries(entries: [[Complex<T>; 2]; 2]) -> Result<Self> {
        let mat = Mat2 { m: entries };
        let gram = mat.adjoint().mul(&mat);
        let dev = gram.max_abs_diff(&Mat2::identity());
        if dev > unitarity_tol::<T>() {
            return Err(CoreError::Validation(format!(
                "matrix is not unitary: max |U^dag U - I| entry {dev:e} exceeds {:e}",
                unitarity_tol::<T>()
            )));
        }
        let det_dev = (mat.det().norm() - T::one()).abs();
        if det_dev > unitarity_tol::<T>() {
            return Err(CoreError::Validation(format!(
                "matrix is not unitary: ||det| - 1| = {det_dev:e} exceeds {:e}",
                unitarity_tol::<T>()
            )));
        }
        Ok(Unitary { mat })
    }

    pub fn identity() -> Self {
        Unitary {
            mat: Mat2::identity(),
        }
    }

    pub const fn dim(&self) -> usize {
        2
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex<T> {
        self.mat.m[r][c]
    }

    /// Matrix product `self * rhs` (applies `rhs` first).
    pub fn mul(&self, rhs: &Unitary<T>) -> Unitary<T> {
        Unitary {
            mat: self.mat.mul(&rhs.mat),
        }
    }

    pub fn adjoint(&self) -> Unitary<T> {
        Unitary {
            mat: self.mat.adjoint(),
        }
    }

    /// Phase-invariant gate distance `sqrt(1 - |Tr(U^dag V)| / 2)`, in [0, 1].
    pub fn distance(&self, other: &Unitary<T>) -> T {
        let tr = self.mat.adjoint().mul(&other.mat).trace();
        let val = T::one() - tr.norm() / T::of(2.0);
        val.max(T::zero()).sqrt()
    }

    /// Conjugation `U^dag H U`; Hermitian by construction (re-symmetrized
    /// against round-off).
    pub fn conjugate(&self, h: &HermitianOp<T>) -> HermitianOp<T> {
        let m = self.mat.adjoint().mul(h.mat()).mul(&self.mat);
        HermitianOp::from_mat_hermitized(m)
    }

    /// Worst-entry deviation of `U^dag U` from the identity.
    pub fn unitarity_defect(&self) -> T {
        self.mat
            .adjoint()
            .mul(&self.mat)
            .max_abs_diff(&Mat2::identity())
    }

    pub(crate) fn mat(&self) -> &Mat2<T> {
        &self.mat
    }

    pub(crate) fn from_mat_unchecked(mat: Mat2<T>) -> Self {
        Unitary { mat }
    }
}
