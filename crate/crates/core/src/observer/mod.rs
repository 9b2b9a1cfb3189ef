//! Observer velocity fields and precession relative to them.
//!
//! An observer field is a unit timelike vector field U on (a region of)
//! spacetime; its integral curves are the observers. Two stationary families
//! matter here:
//!
//! - rigidly rotating fields, built from a rotation generator and a radial
//!   profile ([`RotatingObserver`], [`Profile`]);
//! - co-moving families around one accelerated world line, built from a
//!   transport law plus an optional extra spin ([`TwistedComovingObserver`]).
//!
//! A field assigns each world line a moving rest space; whether "the angular
//! velocity of a gyroscope relative to the field" is well defined depends on
//! the field's flow acting as a rigid rotation on those rest spaces. The
//! [`foucault`] module quantifies exactly that, producing a residual that is
//! zero when the precession rate is meaningful and order one when it is not.

mod comoving;
mod foucault;
mod profile;
mod rotating;
mod transport;

pub use comoving::{TransportLaw, TwistedComovingObserver};
pub use foucault::{
    foucault_analyze, foucault_vs_spin, gamma_twist_angle, FoucaultOptions, FoucaultReport,
    FoucaultSampleRow, TwistAngles,
};
pub use profile::{Profile, ProfileValues};
pub use rotating::RotatingObserver;
pub use transport::{flow_jacobian_ode, transport_map, TransportMap};

use crate::gyroscope::GyroscopeError;
use crate::minkowski::{
    spatial_projector, AbsoluteVelocity, AntisymMap, Event, LinMap, MinkowskiError,
};
use crate::worldline::WorldlineError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ObserverError {
    #[error("radial parameter k = {k} is outside the profile's domain")]
    OutsideDomain { k: f64 },
    #[error("profile is not unit-speed at k = {k}: alpha^2 - k beta^2 - 1 = {defect}")]
    UnitSpeedViolation { k: f64, defect: f64 },
    #[error("profile parameter out of range: {detail}")]
    BadProfileParameter { detail: String },
    #[error("rotation map does not annihilate the axis velocity: |W u| = {residual}")]
    InvalidRotation { residual: f64 },
    #[error("twist map does not annihilate the line velocity at s = 0: |G r'(0)| = {residual}")]
    TwistNotSpatial { residual: f64 },
    #[error(
        "exponential transport law does not carry the line velocity back to r'(0): defect {defect}"
    )]
    TransportLawMismatch { defect: f64 },
    #[error("field vector is not timelike at the requested event: V.V = {norm_sq}")]
    FieldNotTimelike { norm_sq: f64 },
    #[error("world line is not an integral curve of the field: |U(r(s)) - r'(s)| = {defect} at s = {s}")]
    MismatchedObserver { s: f64, defect: f64 },
    #[error("invalid sample sequence: {detail}")]
    InvalidSamples { detail: String },
    #[error(
        "precession is not meaningful for this field: antisymmetry residual {max_residual}"
    )]
    NotMeaningful { max_residual: f64 },
    #[error(transparent)]
    Worldline(#[from] WorldlineError),
    #[error(transparent)]
    Transport(#[from] GyroscopeError),
    #[error(transparent)]
    Minkowski(#[from] MinkowskiError),
}

/// A unit future-directed timelike vector field.
pub trait ObserverField {
    /// The field vector at x.
    fn velocity(&self, x: Event) -> Result<AbsoluteVelocity, ObserverError>;

    /// The Jacobian DU at x: U(x + eps w) = U(x) + eps (DU) w + O(eps^2).
    fn jacobian(&self, x: Event) -> Result<LinMap, ObserverError>;

    /// Closed-form backward-flow Jacobian along the integral curve through
    /// `start`: the derivative, at the curve point with flow parameter s, of
    /// the flow map that returns it to `start`. `Ok(None)` means no closed
    /// form is available and callers should integrate the variational
    /// equation instead.
    fn flow_jacobian_closed(
        &self,
        start: Event,
        s: f64,
    ) -> Result<Option<LinMap>, ObserverError> {
        let _ = (start, s);
        Ok(None)
    }

    /// Closed-form s-derivative of [`ObserverField::flow_jacobian_closed`],
    /// when available.
    fn flow_jacobian_derivative_closed(
        &self,
        start: Event,
        s: f64,
    ) -> Result<Option<LinMap>, ObserverError> {
        let _ = (start, s);
        Ok(None)
    }
}

/// Kinematic angular velocity of the field at x: the antisymmetric part of
/// the velocity gradient restricted to the field's rest space,
/// Omega = -1/2 P (DU* - DU) P with P the projector onto E_U(x).
///
/// Its restriction to E_U generates the instantaneous rotation of
/// neighboring observers around the one at x; it annihilates U itself.
pub fn observer_angular_velocity<F: ObserverField + ?Sized>(
    field: &F,
    x: Event,
) -> Result<AntisymMap, ObserverError> {
    let u = field.velocity(x)?;
    let du = field.jacobian(x)?;
    let p = spatial_projector(&u);
    let skew = du.lorentz_adjoint() - du;
    Ok(AntisymMap::antisymmetrize(p * skew * p * (-0.5)))
}
