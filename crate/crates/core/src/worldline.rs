//! Proper-time parametrized world lines.
//!
//! A world line is a curve r(s) with unit timelike velocity, r'.r' = -1, so
//! the parameter s is proper time. The two concrete families here are
//! inertial lines and circular lines
//!
//!   r(s) = o + s alpha0 u + exp(s beta0 W) d,
//!
//! with u a velocity, W a rotation generator of E_u, d in E_u, and
//! alpha0^2 - beta0^2 |W d|^2 = 1 so the speed stays unit. Circular lines
//! cover every stationary orbit of a rigid rotation, from the classic
//! centrifuge (alpha0 = beta0 = gamma) to time-translated variants with the
//! same spatial track but different clock rates.

use crate::minkowski::{
    lorentz_dot, AbsoluteVelocity, AntisymMap, Event, FourVector, MinkowskiError,
};
use thiserror::Error;

/// Relative tolerance for the algebraic constraints checked by constructors.
pub const CONSTRUCTION_TOL: f64 = 1e-9;

/// Synchronization stops when |f(s)| <= SYNC_TOL * (1 + max|x - r(s)|).
pub const SYNC_TOL: f64 = 1e-12;

/// Newton iteration cap for synchronization.
pub const SYNC_MAX_ITER: usize = 50;

/// Newton steps are refused when |f'(s)| falls below this.
pub const SYNC_DERIVATIVE_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldlineError {
    #[error("rotation map does not annihilate the axis velocity: |W u| = {residual}")]
    NotSpatialGenerator { residual: f64 },
    #[error("displacement is not in the rest space of the axis velocity: u.d = {dot}")]
    DisplacementNotSpatial { dot: f64 },
    #[error(
        "coefficients do not satisfy unit speed: alpha0^2 - beta0^2 |W d|^2 - 1 = {defect}"
    )]
    SpeedConstraint { defect: f64 },
    #[error("alpha0 must be >= 1 for a future-directed line, got {alpha0}")]
    NotForward { alpha0: f64 },
    #[error("orbit parameter |W d|^2 = {k0} leaves no unit-speed solution (needs < 1)")]
    OrbitTooFast { k0: f64 },
    #[error("synchronization did not converge in {iterations} steps, last residual {residual}")]
    SyncNonConvergence { iterations: usize, residual: f64 },
    #[error("synchronization hit a critical point at s = {s}: f'(s) = {derivative}")]
    SyncDegenerate { s: f64, derivative: f64 },
    #[error(transparent)]
    Minkowski(#[from] MinkowskiError),
}

/// Position, velocity and acceleration of a world line at one parameter
/// value, bundled so implementations can share work between the three.
#[derive(Debug, Clone, Copy)]
pub struct WorldLineState {
    pub event: Event,
    pub velocity: AbsoluteVelocity,
    pub acceleration: FourVector,
}

/// A proper-time parametrized curve with unit timelike velocity.
pub trait WorldLine {
    fn eval(&self, s: f64) -> Event;
    fn velocity(&self, s: f64) -> AbsoluteVelocity;
    fn acceleration(&self, s: f64) -> FourVector;

    /// All three at once; override when they share expensive factors.
    fn state(&self, s: f64) -> WorldLineState {
        WorldLineState {
            event: self.eval(s),
            velocity: self.velocity(s),
            acceleration: self.acceleration(s),
        }
    }
}

// ---------------------------------------------------------------------------
// Inertial lines
// ---------------------------------------------------------------------------

/// The straight line r(s) = o + s u.
#[derive(Debug, Clone, Copy)]
pub struct InertialWorldLine {
    origin: Event,
    velocity: AbsoluteVelocity,
}

impl InertialWorldLine {
    pub fn new(origin: Event, velocity: AbsoluteVelocity) -> Self {
        InertialWorldLine { origin, velocity }
    }
}

impl WorldLine for InertialWorldLine {
    fn eval(&self, s: f64) -> Event {
        self.origin + self.velocity.vector() * s
    }

    fn velocity(&self, _s: f64) -> AbsoluteVelocity {
        self.velocity
    }

    fn acceleration(&self, _s: f64) -> FourVector {
        FourVector::zero()
    }
}

// ---------------------------------------------------------------------------
// Circular lines
// ---------------------------------------------------------------------------

/// The stationary orbit r(s) = o + s alpha0 u + exp(s beta0 W) d.
///
/// u is the axis velocity, W a rotation generator of its rest space, d the
/// displacement from the axis. The velocity is
/// r'(s) = alpha0 u + beta0 exp(s beta0 W) W d, whose Lorentz square is
/// -alpha0^2 + beta0^2 |W d|^2 = -1 by the constructor constraint, and the
/// acceleration is r''(s) = beta0^2 exp(s beta0 W) W^2 d.
#[derive(Debug, Clone)]
pub struct CircularWorldLine {
    origin: Event,
    axis_velocity: AbsoluteVelocity,
    rotation: AntisymMap,
    displacement: FourVector,
    alpha0: f64,
    beta0: f64,
    orbital_k: f64,
}

impl CircularWorldLine {
    pub fn new(
        origin: Event,
        axis_velocity: AbsoluteVelocity,
        rotation: AntisymMap,
        displacement: FourVector,
        alpha0: f64,
        beta0: f64,
    ) -> Result<Self, WorldlineError> {
        let u = axis_velocity.vector();
        let wu = rotation.as_linmap() * u;
        let scale = 1.0 + rotation.as_linmap().max_abs();
        if wu.max_abs() > CONSTRUCTION_TOL * scale {
            return Err(WorldlineError::NotSpatialGenerator {
                residual: wu.max_abs(),
            });
        }
        let dot = lorentz_dot(u, displacement);
        if dot.abs() > CONSTRUCTION_TOL * (1.0 + displacement.max_abs()) {
            return Err(WorldlineError::DisplacementNotSpatial { dot });
        }
        let wd = rotation.as_linmap() * displacement;
        let orbital_k = wd.norm_sq();
        let defect = alpha0 * alpha0 - beta0 * beta0 * orbital_k - 1.0;
        if defect.abs() > CONSTRUCTION_TOL * (1.0 + alpha0 * alpha0) {
            return Err(WorldlineError::SpeedConstraint { defect });
        }
        if alpha0 < 1.0 - CONSTRUCTION_TOL {
            return Err(WorldlineError::NotForward { alpha0 });
        }
        Ok(CircularWorldLine {
            origin,
            axis_velocity,
            rotation,
            displacement,
            alpha0,
            beta0,
            orbital_k,
        })
    }

    /// The centrifuge parametrization: alpha0 = beta0 = 1/sqrt(1 - k0) with
    /// k0 = |W d|^2, so the line advances axis time at the same rate it
    /// sweeps rotation phase. Requires k0 < 1.
    pub fn conventional(
        origin: Event,
        axis_velocity: AbsoluteVelocity,
        rotation: AntisymMap,
        displacement: FourVector,
    ) -> Result<Self, WorldlineError> {
        let wd = rotation.as_linmap() * displacement;
        let k0 = wd.norm_sq();
        if k0 >= 1.0 - CONSTRUCTION_TOL {
            return Err(WorldlineError::OrbitTooFast { k0 });
        }
        let gamma = 1.0 / (1.0 - k0).sqrt();
        Self::new(origin, axis_velocity, rotation, displacement, gamma, gamma)
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

    pub fn displacement(&self) -> FourVector {
        self.displacement
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    /// |W d|^2, the squared orbital speed parameter.
    pub fn orbital_k(&self) -> f64 {
        self.orbital_k
    }

    /// Proper time for the velocity to return to itself:
    /// 2 pi / (|beta0| * rate(W)). None when the velocity is constant.
    pub fn velocity_period(&self) -> Option<f64> {
        let rate = self.beta0.abs() * self.rotation.rotation_rate();
        if rate > 0.0 && self.orbital_k > 0.0 {
            Some(std::f64::consts::TAU / rate)
        } else {
            None
        }
    }
}

impl WorldLine for CircularWorldLine {
    fn eval(&self, s: f64) -> Event {
        self.state(s).event
    }

    fn velocity(&self, s: f64) -> AbsoluteVelocity {
        self.state(s).velocity
    }

    fn acceleration(&self, s: f64) -> FourVector {
        self.state(s).acceleration
    }

    fn state(&self, s: f64) -> WorldLineState {
        let rot = self.rotation.exp(s * self.beta0);
        let turned = rot * self.displacement;
        let w = self.rotation.as_linmap();
        let event = self.origin + self.axis_velocity.vector() * (s * self.alpha0) + turned;
        let velocity = AbsoluteVelocity::new_unchecked(
            self.axis_velocity.vector() * self.alpha0 + (w * turned) * self.beta0,
        );
        let acceleration = (w * (w * turned)) * (self.beta0 * self.beta0);
        WorldLineState {
            event,
            velocity,
            acceleration,
        }
    }
}

// ---------------------------------------------------------------------------
// Synchronization
// ---------------------------------------------------------------------------

/// Solution of the synchronization equation for one event.
#[derive(Debug, Clone, Copy)]
pub struct SyncSolveResult {
    /// Parameter s* with (x - r(s*)).r'(s*) = 0.
    pub s: f64,
    /// Gradient of the synchronization function at x: the vector G with
    /// sigma(x + eps v) = sigma(x) + eps G.v + O(eps^2). On the line itself
    /// G = -r'(s*).
    pub gradient: FourVector,
    pub iterations: usize,
    pub residual: f64,
}

/// Finds the parameter s at which x lies in the rest space of the line,
/// f(s) = (x - r(s)).r'(s) = 0, by Newton iteration from `guess` with
/// f'(s) = 1 + (x - r(s)).r''(s).
///
/// The solution is unique for events within 1/|r''| of the line; further out
/// the rest spaces of different points cross and the returned root depends
/// on the guess.
pub fn sync_time<L: WorldLine + ?Sized>(
    line: &L,
    x: Event,
    guess: f64,
) -> Result<SyncSolveResult, WorldlineError> {
    let mut s = guess;
    let mut residual = f64::INFINITY;
    for iteration in 0..SYNC_MAX_ITER {
        let state = line.state(s);
        let offset = x - state.event;
        let f = lorentz_dot(offset, state.velocity.vector());
        residual = f.abs();
        if residual <= SYNC_TOL * (1.0 + offset.max_abs()) {
            let fp = 1.0 + lorentz_dot(offset, state.acceleration);
            if fp.abs() < SYNC_DERIVATIVE_FLOOR {
                return Err(WorldlineError::SyncDegenerate { s, derivative: fp });
            }
            return Ok(SyncSolveResult {
                s,
                gradient: state.velocity.vector() * (-1.0 / fp),
                iterations: iteration,
                residual,
            });
        }
        let fp = 1.0 + lorentz_dot(offset, state.acceleration);
        if fp.abs() < SYNC_DERIVATIVE_FLOOR {
            return Err(WorldlineError::SyncDegenerate { s, derivative: fp });
        }
        s -= f / fp;
    }
    Err(WorldlineError::SyncNonConvergence {
        iterations: SYNC_MAX_ITER,
        residual,
    })
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Self-consistency report for a `WorldLine` implementation over a set of
/// sample parameters.
#[derive(Debug, Clone, Copy)]
pub struct WorldlineValidation {
    /// max |r'.r' + 1| over the samples.
    pub max_norm_defect: f64,
    /// max |r' - central difference of r| at step h.
    pub velocity_fd_error: f64,
    /// max |r'' - central difference of r'| at step h.
    pub acceleration_fd_error: f64,
    /// Step used for the finite differences.
    pub h: f64,
}

impl WorldlineValidation {
    /// True when the analytic derivatives are consistent: the norm defect is
    /// below `tol` and the finite-difference errors are below the O(h^2)
    /// truncation allowance `fd_allowance`.
    pub fn is_consistent(&self, tol: f64, fd_allowance: f64) -> bool {
        self.max_norm_defect <= tol
            && self.velocity_fd_error <= fd_allowance
            && self.acceleration_fd_error <= fd_allowance
    }
}

/// Checks unit speed and derivative consistency of a world line by central
/// differences with step h at the given samples. The finite-difference
/// errors shrink like h^2 for a correct implementation; comparing two
/// reports at h and h/10 separates truncation from genuine inconsistency.
pub fn validate_worldline<L: WorldLine + ?Sized>(
    line: &L,
    samples: &[f64],
    h: f64,
) -> WorldlineValidation {
    let mut max_norm_defect: f64 = 0.0;
    let mut velocity_fd_error: f64 = 0.0;
    let mut acceleration_fd_error: f64 = 0.0;
    for &s in samples {
        let state = line.state(s);
        let v = state.velocity.vector();
        max_norm_defect = max_norm_defect.max((v.norm_sq() + 1.0).abs());
        let fd_v = (line.eval(s + h) - line.eval(s - h)) * (0.5 / h);
        velocity_fd_error = velocity_fd_error.max((v - fd_v).max_abs());
        let fd_a = (line.velocity(s + h).vector() - line.velocity(s - h).vector()) * (0.5 / h);
        acceleration_fd_error = acceleration_fd_error.max((state.acceleration - fd_a).max_abs());
    }
    WorldlineValidation {
        max_norm_defect,
        velocity_fd_error,
        acceleration_fd_error,
        h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::rotation_generator;
    use approx::assert_abs_diff_eq;

    fn canonical_line() -> CircularWorldLine {
        let u = AbsoluteVelocity::rest();
        let omega = rotation_generator(&u, FourVector::new(0.0, 0.0, 0.0, 0.6)).unwrap();
        CircularWorldLine::conventional(
            Event::origin(),
            u,
            omega,
            FourVector::new(0.0, 1.0, 0.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn inertial_line_basics() {
        let u = AbsoluteVelocity::from_three_velocity(0.3, 0.0, 0.4).unwrap();
        let line = InertialWorldLine::new(Event::new(1.0, 2.0, 3.0, 4.0), u);
        let s = 2.5;
        assert!(
            ((line.eval(s) - Event::new(1.0, 2.0, 3.0, 4.0)) - u.vector() * s).max_abs() < 1e-14
        );
        assert_eq!(line.velocity(s), u);
        assert_eq!(line.acceleration(s).max_abs(), 0.0);
    }

    #[test]
    fn canonical_circle_frozen_state() {
        let line = canonical_line();
        assert_abs_diff_eq!(line.alpha0(), 1.25, epsilon = 1e-14);
        assert_abs_diff_eq!(line.beta0(), 1.25, epsilon = 1e-14);
        assert_abs_diff_eq!(line.orbital_k(), 0.36, epsilon = 1e-14);

        let state = line.state(0.0);
        assert_abs_diff_eq!(
            (state.event - Event::new(0.0, 1.0, 0.0, 0.0)).max_abs(),
            0.0,
            epsilon = 1e-15
        );
        let v = state.velocity.vector();
        assert_abs_diff_eq!(v.t(), 1.25, epsilon = 1e-14);
        assert_abs_diff_eq!(v.x(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.y(), 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(v.z(), 0.0, epsilon = 1e-14);
        let a = state.acceleration;
        assert_abs_diff_eq!(a.t(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a.x(), -0.5625, epsilon = 1e-14);
        assert_abs_diff_eq!(a.y(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a.z(), 0.0, epsilon = 1e-14);

        // velocity returns to itself after 2 pi / (beta0 omega)
        let period = line.velocity_period().unwrap();
        assert_abs_diff_eq!(period, std::f64::consts::TAU / 0.75, epsilon = 1e-12);
        let v1 = line.velocity(period).vector();
        assert!((v1 - v).max_abs() < 1e-12);
        // but the event does not return: the line advances in time
        assert!((line.eval(period) - line.eval(0.0)).max_abs() > 1.0);
    }

    #[test]
    fn unit_speed_everywhere() {
        let line = canonical_line();
        for i in 0..30 {
            let s = -7.0 + i as f64 * 0.5;
            assert_abs_diff_eq!(
                line.velocity(s).vector().norm_sq(),
                -1.0,
                epsilon = 1e-12
            );
            // acceleration is orthogonal to velocity
            assert_abs_diff_eq!(
                lorentz_dot(line.velocity(s).vector(), line.acceleration(s)),
                0.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn axial_displacement_component_is_carried_along() {
        // d with a component along the rotation axis: the orbit is a circle
        // displaced along z, same orbital speed
        let u = AbsoluteVelocity::rest();
        let omega = rotation_generator(&u, FourVector::new(0.0, 0.0, 0.0, 0.6)).unwrap();
        let d = FourVector::new(0.0, 1.0, 0.0, 0.5);
        let line = CircularWorldLine::conventional(Event::origin(), u, omega, d).unwrap();
        assert_abs_diff_eq!(line.orbital_k(), 0.36, epsilon = 1e-14);
        assert_abs_diff_eq!(line.alpha0(), 1.25, epsilon = 1e-14);
        for s in [0.0, 1.3, 4.0] {
            let p = line.eval(s).components();
            assert_abs_diff_eq!(p[3], 0.5, epsilon = 1e-13);
            assert_abs_diff_eq!(
                line.velocity(s).vector().norm_sq(),
                -1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn zero_displacement_reduces_to_inertial() {
        let u = AbsoluteVelocity::rest();
        let omega = rotation_generator(&u, FourVector::new(0.0, 0.0, 0.0, 0.6)).unwrap();
        let line =
            CircularWorldLine::conventional(Event::origin(), u, omega, FourVector::zero())
                .unwrap();
        assert_eq!(line.alpha0(), 1.0);
        assert!(line.velocity_period().is_none());
        for s in [0.0, 2.0, -3.5] {
            assert!((line.eval(s) - (Event::origin() + u.vector() * s)).max_abs() < 1e-15);
            assert!(line.acceleration(s).max_abs() < 1e-15);
        }
    }

    #[test]
    fn constructor_rejections() {
        let u = AbsoluteVelocity::rest();
        let omega = rotation_generator(&u, FourVector::new(0.0, 0.0, 0.0, 0.6)).unwrap();
        let d = FourVector::new(0.0, 1.0, 0.0, 0.0);

        // displacement with a time component
        let bad_d = FourVector::new(0.5, 1.0, 0.0, 0.0);
        assert!(matches!(
            CircularWorldLine::conventional(Event::origin(), u, omega, bad_d),
            Err(WorldlineError::DisplacementNotSpatial { .. })
        ));

        // boost generator instead of a rotation of E_u
        let boost_gen = crate::minkowski::wedge(u.vector(), d);
        assert!(matches!(
            CircularWorldLine::conventional(Event::origin(), u, boost_gen, d),
            Err(WorldlineError::NotSpatialGenerator { .. })
        ));

        // coefficients violating unit speed
        assert!(matches!(
            CircularWorldLine::new(Event::origin(), u, omega, d, 1.0, 1.0),
            Err(WorldlineError::SpeedConstraint { .. })
        ));

        // past-directed root
        assert!(matches!(
            CircularWorldLine::new(Event::origin(), u, omega, d, -1.25, 1.25),
            Err(WorldlineError::NotForward { .. })
        ));

        // orbital speed at or beyond light speed
        let fast = rotation_generator(&u, FourVector::new(0.0, 0.0, 0.0, 1.2)).unwrap();
        assert!(matches!(
            CircularWorldLine::conventional(Event::origin(), u, fast, d),
            Err(WorldlineError::OrbitTooFast { .. })
        ));
    }

    #[test]
    fn sync_on_inertial_line_is_exact() {
        let line = InertialWorldLine::new(Event::origin(), AbsoluteVelocity::rest());
        let x = Event::new(3.2, 5.0, -1.0, 2.0);
        let sol = sync_time(&line, x, -10.0).unwrap();
        assert_abs_diff_eq!(sol.s, 3.2, epsilon = 1e-14);
        // rest-frame synchronization function is t; its gradient satisfies
        // G.v = v_t, so G = (-1, 0, 0, 0)
        assert!((sol.gradient - FourVector::new(-1.0, 0.0, 0.0, 0.0)).max_abs() < 1e-14);
    }

    #[test]
    fn sync_finds_line_points_and_their_gradient() {
        let line = canonical_line();
        let x = line.eval(2.0);
        let sol = sync_time(&line, x, 1.4).unwrap();
        assert_abs_diff_eq!(sol.s, 2.0, epsilon = 1e-10);
        // on the line f' = 1, so the gradient is -r'(s)
        let expected = line.velocity(2.0).vector() * -1.0;
        assert!((sol.gradient - expected).max_abs() < 1e-9);
    }

    #[test]
    fn sync_converges_from_rest_space_offsets() {
        let line = canonical_line();
        // displace off the line within the rest space at s = 1.0
        let state = line.state(1.0);
        let p = crate::minkowski::spatial_projector(&state.velocity);
        let w = p * FourVector::new(0.0, 0.1, -0.2, 0.3);
        let x = state.event + w;
        let sol = sync_time(&line, x, 0.3).unwrap();
        assert_abs_diff_eq!(sol.s, 1.0, epsilon = 1e-9);
        assert!(sol.iterations < 10);
    }

    #[test]
    fn sync_detects_critical_point() {
        // at distance 1/|r''| along the acceleration the rest spaces of
        // neighboring points cross and f'(0) = 1 + (x - r(0)).r''(0) = 0
        let line = canonical_line();
        let x = line.eval(0.0) + FourVector::new(0.0, 1.0 / 0.5625, 0.0, 0.0);
        assert!(matches!(
            sync_time(&line, x, 0.0),
            Err(WorldlineError::SyncDegenerate { .. })
        ));
    }

    /// A deliberately inconsistent implementation: eval advances at a
    /// quarter of the claimed velocity, so Newton's model derivative is 4x
    /// the true slope and each step only closes 3/4 of the gap.
    struct CrawlingLine;

    impl WorldLine for CrawlingLine {
        fn eval(&self, s: f64) -> Event {
            Event::origin() + AbsoluteVelocity::rest().vector() * (0.25 * s)
        }
        fn velocity(&self, _s: f64) -> AbsoluteVelocity {
            AbsoluteVelocity::rest()
        }
        fn acceleration(&self, _s: f64) -> FourVector {
            FourVector::zero()
        }
    }

    #[test]
    fn sync_reports_nonconvergence() {
        let x = Event::new(1.0, 0.0, 0.0, 0.0);
        match sync_time(&CrawlingLine, x, 0.0) {
            Err(WorldlineError::SyncNonConvergence { iterations, .. }) => {
                assert_eq!(iterations, SYNC_MAX_ITER);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn validation_is_clean_for_circle_and_flags_inconsistency() {
        let line = canonical_line();
        let samples: Vec<f64> = (0..12).map(|i| i as f64 * 0.7 - 4.0).collect();
        let coarse = validate_worldline(&line, &samples, 1e-3);
        let fine = validate_worldline(&line, &samples, 1e-4);
        assert!(coarse.max_norm_defect < 1e-12);
        assert!(coarse.is_consistent(1e-12, 1e-6));
        // central differences are O(h^2): a factor 100 improvement
        let ratio = coarse.velocity_fd_error / fine.velocity_fd_error;
        assert!(
            (50.0..200.0).contains(&ratio),
            "expected ~100x from h^2 scaling, got {ratio}"
        );

        let bad = validate_worldline(&CrawlingLine, &samples, 1e-3);
        assert!(bad.velocity_fd_error > 0.7);
    }
}
