//! Elementary qubit algebra: Bloch-sphere pure states, 2x2 density
//! matrices and state-operator fidelity.
//!
//! The state constructor applies the half-angle formula literally, so
//! `theta` outside `[0, pi]` is accepted; target maps routinely produce
//! formal angles like `theta - pi`. Global phase is never normalized
//! away; state equality is always checked through density matrices or
//! |overlap|.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Polar/azimuthal coordinates of a qubit on the Bloch sphere.
///
/// `theta` may be any real; physical averaging domains restrict it to
/// `[0, pi]` at the integration layer, not here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }
}

/// A (normalized) two-component amplitude vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    pub amp0: C64,
    pub amp1: C64,
}

impl PureState {
    pub fn norm_sq(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn overlap(&self, other: &PureState) -> C64 {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }
}

/// `(cos(theta/2), e^{i phi} sin(theta/2))`.
pub fn state_from_angles(angles: BlochAngles) -> PureState {
    let half = 0.5 * angles.theta;
    PureState {
        amp0: C64::new(half.cos(), 0.0),
        amp1: C64::from_polar(1.0, angles.phi) * half.sin(),
    }
}

/// The orthogonal state `|psi(theta - pi, phi)>`.
pub fn orthogonal_state(angles: BlochAngles) -> PureState {
    state_from_angles(BlochAngles::new(angles.theta - std::f64::consts::PI, angles.phi))
}

/// Rotation about the z-axis: amplitudes pick up `e^{-i beta/2}` and
/// `e^{+i beta/2}`, advancing the azimuth by `beta`.
pub fn rotate_phase(state: &PureState, beta: f64) -> PureState {
    PureState {
        amp0: state.amp0 * C64::from_polar(1.0, -0.5 * beta),
        amp1: state.amp1 * C64::from_polar(1.0, 0.5 * beta),
    }
}

/// 2x2 complex operator; valid density matrices are Hermitian,
/// unit-trace and PSD (see [`DensityMatrix::validate`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub m00: C64,
    pub m01: C64,
    pub m10: C64,
    pub m11: C64,
}

impl DensityMatrix {
    pub fn trace(&self) -> C64 {
        self.m00 + self.m11
    }

    pub fn det(&self) -> C64 {
        self.m00 * self.m11 - self.m01 * self.m10
    }

    /// Checks Hermiticity, unit trace and positivity within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm = (self.m01 - self.m10.conj()).norm().max(self.m00.im.abs()).max(self.m11.im.abs());
        if herm > tol {
            return Err(Error::NotHermitian(herm));
        }
        let tr = (self.trace() - C64::new(1.0, 0.0)).norm();
        if tr > tol {
            return Err(Error::BadTrace(tr));
        }
        let det = self.det().re;
        if det < -tol || self.m00.re < -tol || self.m11.re < -tol {
            return Err(Error::NotPositive(det));
        }
        Ok(())
    }
}

/// Rank-1 projector `|psi><psi|`.
pub fn density_of(state: &PureState) -> DensityMatrix {
    DensityMatrix {
        m00: state.amp0 * state.amp0.conj(),
        m01: state.amp0 * state.amp1.conj(),
        m10: state.amp1 * state.amp0.conj(),
        m11: state.amp1 * state.amp1.conj(),
    }
}

/// `<psi|rho|psi>`. Rejects non-Hermitian `rho` (a malformed channel
/// output); the returned value is the real part of the quadratic form.
pub fn fidelity(state: &PureState, rho: &DensityMatrix) -> Result<f64> {
    let herm = (rho.m01 - rho.m10.conj()).norm();
    if herm > 1e-9 {
        return Err(Error::NotHermitian(herm));
    }
    Ok(fidelity_unchecked(state, rho))
}

/// Same quadratic form without the Hermiticity guard; quadrature inner
/// loops call this after the channel output has been checked once.
pub(crate) fn fidelity_unchecked(state: &PureState, rho: &DensityMatrix) -> f64 {
    let a0 = state.amp0;
    let a1 = state.amp1;
    (a0.conj() * (rho.m00 * a0 + rho.m01 * a1) + a1.conj() * (rho.m10 * a0 + rho.m11 * a1)).re
}
