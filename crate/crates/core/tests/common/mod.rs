//! Shared fixtures for the integration tests: the canonical circular-orbit
//! setup, observer builders, and a hook-free field wrapper that forces the
//! generic (variational / finite-difference) code paths.

#![allow(dead_code)]

use relkin::{
    lorentz_dot, wedge, AbsoluteVelocity, AntisymMap, CircularWorldLine, Event, FourVector,
    LinMap, ObserverError, ObserverField, Profile, RotatingObserver,
};

/// Angular speed of the canonical orbit.
pub const OMEGA: f64 = 0.6;
/// Lorentz factor of the canonical orbit (omega |d| = 0.6).
pub const GAMMA: f64 = 1.25;
/// Thomas angle for the canonical orbit, 2 pi (gamma - 1) = pi / 2.
pub const THOMAS_ANGLE: f64 = std::f64::consts::FRAC_PI_2;

pub fn e_t() -> FourVector {
    FourVector::new(1.0, 0.0, 0.0, 0.0)
}

pub fn e_x() -> FourVector {
    FourVector::new(0.0, 1.0, 0.0, 0.0)
}

pub fn e_y() -> FourVector {
    FourVector::new(0.0, 0.0, 1.0, 0.0)
}

pub fn e_z() -> FourVector {
    FourVector::new(0.0, 0.0, 0.0, 1.0)
}

/// Rotation of the rest space of the static observer, rate `omega` about
/// +z: W e_x = omega e_y.
pub fn rest_rotation(omega: f64) -> AntisymMap {
    wedge(e_y(), e_x()) * omega
}

/// A rotating-observer field about the origin with the given profile, and
/// its integral curve through origin + d_norm e_x.
pub fn rotating_setup(
    profile: Profile,
    omega: f64,
    d_norm: f64,
) -> (RotatingObserver, CircularWorldLine) {
    let field = RotatingObserver::new(
        Event::origin(),
        AbsoluteVelocity::rest(),
        rest_rotation(omega),
        profile,
    )
    .expect("rotation annihilates the rest velocity");
    let line = field
        .integral_curve(Event::origin() + e_x() * d_norm)
        .expect("orbit parameters inside the profile domain");
    (field, line)
}

/// The conventional (velocity-orthogonal clock rate) setup.
pub fn conventional_setup(omega: f64, d_norm: f64) -> (RotatingObserver, CircularWorldLine) {
    rotating_setup(Profile::conventional(), omega, d_norm)
}

/// n uniform samples of [0, end], starting at exactly 0.0.
pub fn uniform_samples(end: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n).map(|i| end * i as f64 / (n - 1) as f64).collect()
}

/// Wrapper that hides a field's closed-form flow Jacobians so transport
/// maps are rebuilt from the variational equation and finite differences.
pub struct NoHooks<'a, F: ObserverField>(pub &'a F);

impl<F: ObserverField> ObserverField for NoHooks<'_, F> {
    fn velocity(&self, x: Event) -> Result<AbsoluteVelocity, ObserverError> {
        self.0.velocity(x)
    }

    fn jacobian(&self, x: Event) -> Result<LinMap, ObserverError> {
        self.0.jacobian(x)
    }
}

/// Jacobian of the field by central differences, independent of
/// [`ObserverField::jacobian`].
pub fn fd_jacobian<F: ObserverField>(field: &F, x: Event, eps: f64) -> LinMap {
    let basis = [e_t(), e_x(), e_y(), e_z()];
    let mut du = LinMap::zero();
    for e in basis {
        let plus = field.velocity(x + e * eps).expect("field defined near x");
        let minus = field.velocity(x + e * (-eps)).expect("field defined near x");
        let column = (plus.vector() - minus.vector()) * (1.0 / (2.0 * eps));
        // outer(c, b) with b the metric dual of e reproduces column e -> c
        let dual = e * e.dot(&e);
        du = du + LinMap::outer(column, dual);
    }
    du
}

/// Largest absolute entry of the difference of two maps.
pub fn map_diff(a: &LinMap, b: &LinMap) -> f64 {
    (*a - *b).max_abs()
}

/// |cos| angle between a map's rotation axis and +z, signed by the z
/// component: negative means the rotation is clockwise about +z.
pub fn axis_z_component(axis: FourVector) -> f64 {
    lorentz_dot(axis, e_z())
}
