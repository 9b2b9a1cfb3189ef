//! Flow Jacobians of observer fields and the induced rest-space transport.
//!
//! Flowing a field's neighborhood of r(s) backward to r(0) and projecting
//! gives a linear map A(s) from the rest space at r(s) to the rest space at
//! r(0). A is how "the same direction as seen by the observers" is carried
//! along the curve; comparing it with Fermi-Walker transport is what turns
//! gyroscope precession into a statement about the field.

use super::{ObserverError, ObserverField};
use crate::gyroscope::{GyroscopeError, DRIFT_LIMIT};
use crate::integrate::rk4_integrate;
use crate::minkowski::{lorentz_dot, spatial_projector, FourVector, LinMap};
use crate::worldline::WorldLine;

/// Tolerance for the line actually being an integral curve of the field.
const INTEGRAL_CURVE_TOL: f64 = 1e-9;

/// Integrates the variational equation dM/ds = -M DU(r(s)) from s0 to s1
/// with M(s0) = 1. With s0 = 0 this is the backward-flow Jacobian R(s1):
/// the derivative at r(s1) of the flow map carrying it to r(0). Segments
/// chain by right multiplication, R(s1) = R(s0) M(s0 -> s1).
///
/// The line must be an integral curve of the field, parametrized so that
/// r'(s) = U(r(s)); the Jacobian then satisfies R(s) r'(s) = r'(0).
pub fn flow_jacobian_ode<F, L>(
    field: &F,
    line: &L,
    s0: f64,
    s1: f64,
    max_step: f64,
) -> Result<LinMap, ObserverError>
where
    F: ObserverField + ?Sized,
    L: WorldLine + ?Sized,
{
    if !(max_step > 0.0) {
        return Err(GyroscopeError::BadStep { step: max_step }.into());
    }
    // the derivative evaluations cannot report errors through rk4_integrate,
    // so stash the first failure and bail afterwards
    let mut failure: Option<ObserverError> = None;
    let result = rk4_integrate(
        |sigma, m: LinMap| {
            if failure.is_some() {
                return LinMap::zero();
            }
            match field.jacobian(line.eval(sigma)) {
                Ok(du) => -(m * du),
                Err(e) => {
                    failure = Some(e);
                    LinMap::zero()
                }
            }
        },
        s0,
        s1,
        max_step,
        LinMap::identity(),
        |_, _| {},
    );
    if let Some(e) = failure {
        return Err(e);
    }
    // M r'(s) is a first integral of the variational equation; its drift
    // measures the accumulated integration error
    let drift = (result * line.velocity(s1).vector() - line.velocity(s0).vector()).max_abs();
    if drift > DRIFT_LIMIT {
        return Err(GyroscopeError::StepTooLarge { s: s1, drift }.into());
    }
    Ok(result)
}

/// The rest-space transport A(s) = P(0) R(s) induced by an observer field
/// along one of its integral curves, together with its inverse and
/// s-derivative.
///
/// A maps the rest space at r(s) onto the rest space at r(0) and kills
/// r'(s); `a_inv` is the corresponding inverse map E_0 -> E_s (a
/// pseudo-inverse as a spacetime map: a_inv * a = P(s), a * a_inv = P(0)).
#[derive(Debug, Clone, Copy)]
pub struct TransportMap {
    /// Curve parameter this map transports from.
    pub s: f64,
    /// E_s -> E_0.
    pub a: LinMap,
    /// E_0 -> E_s.
    pub a_inv: LinMap,
    /// s-derivative of `a`.
    pub a_dot: LinMap,
}

impl TransportMap {
    /// The inner product the field induces on the rest space at r(s) by
    /// pulling vectors to r(0): (A^-1 q1).(A^-1 q2) for q1, q2 in E_0.
    /// Fields whose flow is rigid give the Lorentz inner product back.
    pub fn spatial_metric(&self, q1: FourVector, q2: FourVector) -> f64 {
        lorentz_dot(self.a_inv * q1, self.a_inv * q2)
    }
}

/// Builds the transport map at parameter s along an integral curve of the
/// field (parameter 0 is the reference point). Uses the field's closed-form
/// Jacobian hooks when available; otherwise integrates the variational
/// equation with steps of `ode_max_step` and differentiates R by a
/// five-point stencil of half-width `fd_step` (widened proportionally
/// beyond |s| = 1).
///
/// Verifies that the line is an integral curve of the field — the
/// construction is meaningless otherwise — by comparing velocities at both
/// ends and the midpoint.
pub fn transport_map<F, L>(
    field: &F,
    line: &L,
    s: f64,
    ode_max_step: f64,
    fd_step: f64,
) -> Result<TransportMap, ObserverError>
where
    F: ObserverField + ?Sized,
    L: WorldLine + ?Sized,
{
    if !(fd_step > 0.0) {
        return Err(GyroscopeError::BadStep { step: fd_step }.into());
    }
    for t in [0.0, 0.5 * s, s] {
        let defect =
            (field.velocity(line.eval(t))?.vector() - line.velocity(t).vector()).max_abs();
        if defect > INTEGRAL_CURVE_TOL {
            return Err(ObserverError::MismatchedObserver { s: t, defect });
        }
    }
    let start = line.eval(0.0);
    let r = match field.flow_jacobian_closed(start, s)? {
        Some(m) => m,
        None => flow_jacobian_ode(field, line, 0.0, s, ode_max_step)?,
    };
    let r_dot = match field.flow_jacobian_derivative_closed(start, s)? {
        Some(m) => m,
        None => {
            // R at a nearby parameter: closed form if the field has one,
            // otherwise a short variational integration chained onto R(s)
            let r_near = |delta: f64| -> Result<LinMap, ObserverError> {
                match field.flow_jacobian_closed(start, s + delta)? {
                    Some(m) => Ok(m),
                    None => {
                        Ok(r * flow_jacobian_ode(field, line, s, s + delta, ode_max_step)?)
                    }
                }
            };
            let h = fd_step * s.abs().max(1.0);
            (r_near(-2.0 * h)? + r_near(h)? * 8.0 - r_near(-h)? * 8.0 - r_near(2.0 * h)?)
                * (1.0 / (12.0 * h))
        }
    };
    let p0 = spatial_projector(&line.velocity(0.0));
    let ps = spatial_projector(&line.velocity(s));
    Ok(TransportMap {
        s,
        a: p0 * r,
        a_inv: ps * r.try_inverse()?,
        a_dot: p0 * r_dot,
    })
}
