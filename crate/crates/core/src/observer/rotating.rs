//! Rigidly rotating observer fields.

use super::profile::Profile;
use super::{ObserverError, ObserverField};
use crate::minkowski::{
    AbsoluteVelocity, AntisymMap, Event, FourVector, LinMap,
};
use crate::worldline::CircularWorldLine;

/// Tolerance for the rotation generator annihilating the axis velocity.
const ROTATION_AXIS_TOL: f64 = 1e-9;

/// A stationary rotating field U(x) = alpha(k) u + beta(k) W xi, where u is
/// the velocity of the rotation axis, W a rotation generator of its rest
/// space, xi the spatial offset of x from the axis point o, and
/// k = |W xi|^2.
///
/// Field values, flow maps and Jacobians all have closed forms; every
/// integral curve is a [`CircularWorldLine`]. The profile's unit-speed
/// identity alpha^2 - k beta^2 = 1 keeps the field unit timelike; the
/// Jacobian and flow formulas assume it holds exactly, which is an algebraic
/// identity for the preset profiles and a checked tolerance for custom ones.
#[derive(Debug, Clone)]
pub struct RotatingObserver {
    origin: Event,
    axis_velocity: AbsoluteVelocity,
    rotation: AntisymMap,
    profile: Profile,
}

impl RotatingObserver {
    /// The rotation generator must belong to the rest space of
    /// `axis_velocity` (W u = 0).
    pub fn new(
        origin: Event,
        axis_velocity: AbsoluteVelocity,
        rotation: AntisymMap,
        profile: Profile,
    ) -> Result<Self, ObserverError> {
        let residual = (rotation.as_linmap() * axis_velocity.vector()).max_abs();
        if residual > ROTATION_AXIS_TOL {
            return Err(ObserverError::InvalidRotation { residual });
        }
        Ok(RotatingObserver {
            origin,
            axis_velocity,
            rotation,
            profile,
        })
    }

    pub fn origin(&self) -> Event {
        self.origin
    }

    pub fn axis_velocity(&self) -> AbsoluteVelocity {
        self.axis_velocity
    }

    pub fn rotation(&self) -> &AntisymMap {
        &self.rotation
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// Axis time tau, spatial offset xi, and radial parameter k = |W xi|^2
    /// of an event relative to the axis point.
    fn decompose(&self, x: Event) -> (f64, FourVector, f64) {
        let offset = x - self.origin;
        let u = self.axis_velocity.vector();
        let tau = -offset.dot(&u);
        let xi = offset + u * offset.dot(&u);
        let k = (self.rotation.as_linmap() * xi).norm_sq();
        (tau, xi, k)
    }

    /// The flow of the field by parameter t (proper time along every
    /// integral curve): Psi_t(x) = o + (tau + t alpha) u + exp(t beta W) xi.
    pub fn flow(&self, x: Event, t: f64) -> Result<Event, ObserverError> {
        let (tau, xi, k) = self.decompose(x);
        let v = self.profile.evaluate(k)?;
        Ok(self.origin
            + self.axis_velocity.vector() * (tau + t * v.alpha)
            + self.rotation.exp(t * v.beta) * xi)
    }

    /// The integral curve through x, as a circular world line with
    /// parameter 0 at x's axis time. Its velocity at the corresponding
    /// parameter equals the field there.
    pub fn integral_curve(&self, x: Event) -> Result<CircularWorldLine, ObserverError> {
        let (tau, xi, k) = self.decompose(x);
        let v = self.profile.evaluate(k)?;
        Ok(CircularWorldLine::new(
            self.origin + self.axis_velocity.vector() * tau,
            self.axis_velocity,
            self.rotation,
            xi,
            v.alpha,
            v.beta,
        )?)
    }
}

impl ObserverField for RotatingObserver {
    fn velocity(&self, x: Event) -> Result<AbsoluteVelocity, ObserverError> {
        let (_, xi, k) = self.decompose(x);
        let v = self.profile.evaluate(k)?;
        let raw = self.axis_velocity.vector() * v.alpha + self.rotation * xi * v.beta;
        let norm_sq = raw.norm_sq();
        if norm_sq >= 0.0 {
            return Err(ObserverError::FieldNotTimelike { norm_sq });
        }
        // exact unit normalization; a no-op up to rounding for profiles
        // satisfying the unit-speed identity
        Ok(AbsoluteVelocity::new_unchecked(
            raw * (1.0 / (-norm_sq).sqrt()),
        ))
    }

    /// DU = beta W - 2 (alpha' u + beta' W xi) (W^2 xi . _), using
    /// Dk = -2 (W^2 xi . _) and W P = W.
    fn jacobian(&self, x: Event) -> Result<LinMap, ObserverError> {
        let (_, xi, k) = self.decompose(x);
        let v = self.profile.evaluate(k)?;
        let w = self.rotation.as_linmap();
        let radial =
            self.axis_velocity.vector() * v.alpha_prime + w * xi * v.beta_prime;
        Ok(w * v.beta - LinMap::outer(radial, w * (w * xi)) * 2.0)
    }

    /// Closed backward-flow Jacobian
    /// R(s) = exp(-s beta W) + 2 s (alpha' u + beta' W xi) (W^2 xi_s . _),
    /// with xi_s = exp(s beta W) xi the rotated offset.
    fn flow_jacobian_closed(
        &self,
        start: Event,
        s: f64,
    ) -> Result<Option<LinMap>, ObserverError> {
        let (_, xi, k) = self.decompose(start);
        let v = self.profile.evaluate(k)?;
        let w = self.rotation.as_linmap();
        let c = self.axis_velocity.vector() * v.alpha_prime + w * xi * v.beta_prime;
        let xi_s = self.rotation.exp(s * v.beta) * xi;
        Ok(Some(
            self.rotation.exp(-s * v.beta) + LinMap::outer(c, w * (w * xi_s)) * (2.0 * s),
        ))
    }

    fn flow_jacobian_derivative_closed(
        &self,
        start: Event,
        s: f64,
    ) -> Result<Option<LinMap>, ObserverError> {
        let (_, xi, k) = self.decompose(start);
        let v = self.profile.evaluate(k)?;
        let w = self.rotation.as_linmap();
        let c = self.axis_velocity.vector() * v.alpha_prime + w * xi * v.beta_prime;
        let xi_s = self.rotation.exp(s * v.beta) * xi;
        let w2xi_s = w * (w * xi_s);
        Ok(Some(
            self.rotation.exp(-s * v.beta) * w * (-v.beta)
                + LinMap::outer(c, w2xi_s) * 2.0
                + LinMap::outer(c, w * w2xi_s) * (2.0 * s * v.beta),
        ))
    }
}
