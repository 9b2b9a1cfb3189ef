//! Observer fields co-moving with one circular world line.
//!
//! Around an accelerated line r(s) there is no canonical notion of "the
//! points at rest relative to r": one must pick how each rest space is
//! carried along the line. A transport law H(s) (Fermi-Walker, pure boost,
//! or a fixed exponential) plus an optional constant spin Gamma produces the
//! family x_q(s) = r(s) + H(s)^{-1} q of observers labeled by rest vectors
//! q at s = 0, and from it a velocity field on a neighbourhood of the line.

use super::{ObserverError, ObserverField};
use crate::gyroscope::fermi_walker_map_closed;
use crate::minkowski::{
    boost, lorentz_dot, wedge, AbsoluteVelocity, AntisymMap, Event, LinMap,
};
use crate::worldline::{sync_time, CircularWorldLine, SyncSolveResult, WorldLine};

/// Tolerance for the twist annihilating the line velocity at s = 0 and for
/// an exponential law carrying velocities correctly.
const LAW_TOL: f64 = 1e-9;

/// Parameters where an exponential transport law is checked against the
/// line's velocities at construction.
const LAW_CHECK_POINTS: [f64; 3] = [0.7, 1.9, 3.1];

/// Relative half-width of the five-point stencils differentiating the
/// transport maps in s.
const FD_STEP: f64 = 1e-3;

/// How each observer's rest frame is carried along the reference line. The
/// map H(s) of the law sends the tangent space at r(s) to the one at r(0)
/// and always carries r'(s) to r'(0).
#[derive(Debug, Clone)]
pub enum TransportLaw {
    /// Frames that do not rotate in themselves; H(s) is the inverse of the
    /// Fermi-Walker map.
    FermiWalker,
    /// The pure boost taking r'(s) to r'(0) in their common plane.
    PureBoost,
    /// H(s) = exp(-sW) for a fixed generator W; W must satisfy
    /// exp(-sW) r'(s) = r'(0), which the constructor verifies on sample
    /// parameters. For a circular line, W = beta0 Omega qualifies.
    Exponential(AntisymMap),
}

/// The observer field of a family co-moving with a circular world line
/// under a transport law, with an optional constant extra rotation
/// ("twist") Gamma of the carried frames.
///
/// The field is U(x) = V(x)/|V(x)| with
/// V(x) = r'(s) - G(s)(x - r(s)), where s = s(x) solves the
/// synchronization equation and G = H^{-1} dH/ds for the twisted law
/// H(s) = e^{s Gamma} H0(s). G is antisymmetric because every H is a
/// Lorentz map, and G r'(s) = -r''(s) because H r'(s) = r'(0) identically.
#[derive(Debug, Clone)]
pub struct TwistedComovingObserver {
    line: CircularWorldLine,
    law: TransportLaw,
    twist: AntisymMap,
}

impl TwistedComovingObserver {
    /// The twist must annihilate the line velocity at s = 0 (it rotates the
    /// initial rest space). An exponential law must carry r'(s) back to
    /// r'(0); this is checked at a few parameters.
    pub fn new(
        line: CircularWorldLine,
        law: TransportLaw,
        twist: AntisymMap,
    ) -> Result<Self, ObserverError> {
        let v0 = line.velocity(0.0).vector();
        let residual = (twist * v0).max_abs();
        if residual > LAW_TOL * (1.0 + twist.as_linmap().max_abs()) {
            return Err(ObserverError::TwistNotSpatial { residual });
        }
        if let TransportLaw::Exponential(w) = &law {
            for s in LAW_CHECK_POINTS {
                let defect = (w.exp(-s) * line.velocity(s).vector() - v0).max_abs();
                if defect > LAW_TOL {
                    return Err(ObserverError::TransportLawMismatch { defect });
                }
            }
        }
        Ok(TwistedComovingObserver { line, law, twist })
    }

    pub fn line(&self) -> &CircularWorldLine {
        &self.line
    }

    pub fn law(&self) -> &TransportLaw {
        &self.law
    }

    pub fn twist(&self) -> &AntisymMap {
        &self.twist
    }

    /// The untwisted transport H0(s): tangent space at r(s) -> tangent
    /// space at r(0).
    fn h0(&self, s: f64) -> LinMap {
        match &self.law {
            TransportLaw::FermiWalker => fermi_walker_map_closed(&self.line, s).lorentz_adjoint(),
            TransportLaw::PureBoost => {
                boost(&self.line.velocity(s), &self.line.velocity(0.0))
            }
            TransportLaw::Exponential(w) => w.exp(-s),
        }
    }

    /// The frame return map H(s) = e^{s Gamma} H0(s): the Jacobian of the
    /// congruence flow from r(s) back to r(0). Always a Lorentz map with
    /// H(s) r'(s) = r'(0).
    pub fn frame_map(&self, s: f64) -> LinMap {
        self.twist.exp(s) * self.h0(s)
    }

    /// G(s) = H(s)^{-1} dH/ds, the (antisymmetric) connection of the
    /// transport: observers at offset xi from r(s) have velocity
    /// r'(s) - G(s) xi.
    pub fn connection(&self, s: f64) -> LinMap {
        let gamma = self.twist.as_linmap();
        match &self.law {
            TransportLaw::FermiWalker => {
                // H0 = K^{-1}: H0^{-1} Gamma H0 = K Gamma K^{-1}, and
                // H0^{-1} dH0/ds = -dK/ds K^{-1} = r'' ^ r'
                let k = fermi_walker_map_closed(&self.line, s);
                let st = self.line.state(s);
                k * gamma * k.lorentz_adjoint()
                    + wedge(st.acceleration, st.velocity.vector()).as_linmap()
            }
            TransportLaw::Exponential(w) => {
                w.exp(s) * gamma * w.exp(-s) - w.as_linmap()
            }
            TransportLaw::PureBoost => {
                let b = self.h0(s);
                let b_inv = b.lorentz_adjoint();
                // circular-orbit boost maps stay bounded in s, so a fixed
                // stencil width keeps the truncation error uniform
                let h = FD_STEP;
                let db = (self.h0(s - 2.0 * h) + self.h0(s + h) * 8.0
                    - self.h0(s - h) * 8.0
                    - self.h0(s + 2.0 * h))
                    * (1.0 / (12.0 * h));
                b_inv * gamma * b + b_inv * db
            }
        }
    }

    /// dG/ds by a five-point stencil; the connection is bounded in s on a
    /// circular orbit, so the width needs no scaling.
    fn connection_derivative(&self, s: f64) -> LinMap {
        let h = FD_STEP;
        (self.connection(s - 2.0 * h) + self.connection(s + h) * 8.0
            - self.connection(s - h) * 8.0
            - self.connection(s + 2.0 * h))
            * (1.0 / (12.0 * h))
    }

    /// Synchronization parameter of x, seeded from the axis time.
    fn sync(&self, x: Event) -> Result<SyncSolveResult, ObserverError> {
        let offset = x - self.line.origin();
        let tau = -lorentz_dot(offset, self.line.axis_velocity().vector());
        Ok(sync_time(&self.line, x, tau / self.line.alpha0())?)
    }
}

impl ObserverField for TwistedComovingObserver {
    fn velocity(&self, x: Event) -> Result<AbsoluteVelocity, ObserverError> {
        let sn = self.sync(x)?;
        let st = self.line.state(sn.s);
        let xi = x - st.event;
        let v = st.velocity.vector() - self.connection(sn.s) * xi;
        let norm_sq = v.norm_sq();
        if norm_sq >= 0.0 {
            return Err(ObserverError::FieldNotTimelike { norm_sq });
        }
        Ok(AbsoluteVelocity::new_unchecked(
            v * (1.0 / (-norm_sq).sqrt()),
        ))
    }

    /// One formula on and off the line: with s = s(x) and xi = x - r(s),
    /// DV = (G' xi)(r'(s) . _)/(1 + xi.r'') - G (the G r' = -r'' identity
    /// cancels the remaining synchronization terms), then DU follows from
    /// normalizing V.
    fn jacobian(&self, x: Event) -> Result<LinMap, ObserverError> {
        let sn = self.sync(x)?;
        let st = self.line.state(sn.s);
        let xi = x - st.event;
        let g = self.connection(sn.s);
        let g_prime = self.connection_derivative(sn.s);
        let denom = 1.0 + lorentz_dot(xi, st.acceleration);
        let v = st.velocity.vector() - g * xi;
        let norm_sq = v.norm_sq();
        if norm_sq >= 0.0 {
            return Err(ObserverError::FieldNotTimelike { norm_sq });
        }
        let nu = (-norm_sq).sqrt();
        let dv = LinMap::outer(g_prime * xi, st.velocity.vector()) * (1.0 / denom) - g;
        Ok(dv * (1.0 / nu)
            + LinMap::outer(v, dv.lorentz_adjoint() * v) * (1.0 / (nu * nu * nu)))
    }

    /// The congruence's own backward Jacobian H(s), available when `start`
    /// is the line's reference point r(0). (The proper-time flow Jacobian
    /// differs from H(s) by a rank-one term along r'(0) that every
    /// rest-space quantity projects away.)
    fn flow_jacobian_closed(
        &self,
        start: Event,
        s: f64,
    ) -> Result<Option<LinMap>, ObserverError> {
        if (start - self.line.eval(0.0)).max_abs() > LAW_TOL {
            return Ok(None);
        }
        Ok(Some(self.frame_map(s)))
    }

    fn flow_jacobian_derivative_closed(
        &self,
        start: Event,
        s: f64,
    ) -> Result<Option<LinMap>, ObserverError> {
        if (start - self.line.eval(0.0)).max_abs() > LAW_TOL {
            return Ok(None);
        }
        Ok(Some(self.frame_map(s) * self.connection(s)))
    }
}
