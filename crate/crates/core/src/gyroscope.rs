//! Gyroscope axis transport and precession.
//!
//! A torque-free gyroscope carried along a world line keeps its spin axis
//! Fermi-Walker constant: z' = r' (r''.z) - r'' (r'.z), which preserves the
//! Lorentz product of transported vectors and keeps spatial vectors spatial.
//! Between two passes through the same velocity the transport map restricts
//! to a rotation of the rest space; its angle is the net gyroscopic rotation
//! (for a circular orbit, 2 pi (gamma - 1) per turn, opposite to the orbital
//! sense).
//!
//! The same physics viewed from a fixed reference observer u is a
//! precession: the axis, decomposed in the u rest space, turns with the
//! instantaneous angular velocity gamma^2/(1+gamma) v ^ a built from the
//! relative velocity and acceleration.

use crate::integrate::rk4_integrate;
use crate::minkowski::{
    lorentz_dot, orthonormal_spatial_basis, spatial_projector, wedge, AbsoluteVelocity,
    AntisymMap, FourVector, LinMap,
};
use crate::worldline::{CircularWorldLine, WorldLine};
use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

/// Transported invariants (|z|^2 and r'.z) may drift by at most this,
/// relative to 1 + |z0|^2, before the step size is rejected.
pub const DRIFT_LIMIT: f64 = 1e-6;

/// Velocities at the two ends of a rotation extraction must agree to this.
pub const VELOCITY_MATCH_TOL: f64 = 1e-9;

/// Rotation matrices must have determinant within this of +1.
pub const DETERMINANT_TOL: f64 = 1e-9;

/// Below this sine of the angle, axis extraction switches to the
/// degenerate-angle branches.
const AXIS_SIN_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GyroscopeError {
    #[error("integrator step must be positive, got {step}")]
    BadStep { step: f64 },
    #[error("initial vector is not in the rest space of the start velocity: r'.z = {dot}")]
    NotSpatialAtStart { dot: f64 },
    #[error(
        "transport invariants drifted by {drift} at s = {s}; reduce the step size"
    )]
    StepTooLarge { s: f64, drift: f64 },
    #[error("velocities at the endpoints differ by {defect}; no rest-space rotation is defined")]
    VelocitiesDiffer { defect: f64 },
    #[error("transported frame matrix is not a rotation: det = {det}")]
    NotARotation { det: f64 },
}

/// Step control for the fixed-step transport integrators.
#[derive(Debug, Clone, Copy)]
pub struct IntegratorOptions {
    /// Upper bound on the RK4 step (the actual step divides the span
    /// evenly).
    pub max_step: f64,
    /// Re-project the transported vector onto the local rest space and
    /// restore its length at every sample point. Off by default; when on,
    /// the drift guard is disabled (the reported drift is still measured,
    /// before the projection).
    pub reproject: bool,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            max_step: 1e-3,
            reproject: false,
        }
    }
}

/// A transported axis sample with the conservation drift accumulated since
/// transport began.
#[derive(Debug, Clone, Copy)]
pub struct GyroscopicVector {
    pub s: f64,
    pub z: FourVector,
    /// max | |z|^2 - |z0|^2 | seen so far.
    pub norm_drift: f64,
    /// max |r'(s).z| seen so far.
    pub orthogonality_drift: f64,
}

fn fermi_walker_generator(state: &crate::worldline::WorldLineState) -> AntisymMap {
    wedge(state.velocity.vector(), state.acceleration)
}

/// Fermi-Walker transports z0 from s0 to s1. z0 must lie in the rest space
/// of the velocity at s0.
pub fn fermi_walker_transport<L: WorldLine + ?Sized>(
    line: &L,
    z0: FourVector,
    s0: f64,
    s1: f64,
    options: &IntegratorOptions,
) -> Result<GyroscopicVector, GyroscopeError> {
    let samples = [s1];
    let mut result = fermi_walker_transport_samples(line, z0, s0, &samples, options)?;
    Ok(result.pop().expect("one sample requested"))
}

/// Fermi-Walker transports z0 from s0 through a monotone sequence of sample
/// parameters, reusing the integration state between consecutive samples.
pub fn fermi_walker_transport_samples<L: WorldLine + ?Sized>(
    line: &L,
    z0: FourVector,
    s0: f64,
    samples: &[f64],
    options: &IntegratorOptions,
) -> Result<Vec<GyroscopicVector>, GyroscopeError> {
    if !(options.max_step > 0.0) {
        return Err(GyroscopeError::BadStep {
            step: options.max_step,
        });
    }
    let v0 = line.velocity(s0).vector();
    let dot = lorentz_dot(v0, z0);
    if dot.abs() > 1e-9 * (1.0 + z0.max_abs()) {
        return Err(GyroscopeError::NotSpatialAtStart { dot });
    }

    let norm0 = z0.norm_sq();
    let drift_scale = 1.0 + norm0.abs();
    let mut z = z0;
    let mut s_prev = s0;
    let mut norm_drift: f64 = 0.0;
    let mut orth_drift: f64 = 0.0;
    let mut out = Vec::with_capacity(samples.len());

    for &s in samples {
        z = rk4_integrate(
            |sigma, y: FourVector| {
                let st = line.state(sigma);
                fermi_walker_generator(&st) * y
            },
            s_prev,
            s,
            options.max_step,
            z,
            |_, _| {},
        );
        let state = line.state(s);
        norm_drift = norm_drift.max((z.norm_sq() - norm0).abs());
        orth_drift = orth_drift.max(lorentz_dot(state.velocity.vector(), z).abs());
        let drift = norm_drift.max(orth_drift);
        if options.reproject {
            z = spatial_projector(&state.velocity) * z;
            let n = z.norm_sq();
            if n > 0.0 {
                z = z * (norm0 / n).sqrt();
            }
        } else if drift > DRIFT_LIMIT * drift_scale {
            return Err(GyroscopeError::StepTooLarge { s, drift });
        }
        out.push(GyroscopicVector {
            s,
            z,
            norm_drift,
            orthogonality_drift: orth_drift,
        });
        s_prev = s;
    }
    Ok(out)
}

/// Fermi-Walker transports the whole tangent space: integrates
/// K' = (r' ^ r'') K from s0 to s1 with K(s0) = 1. The result maps the rest
/// space at s0 isometrically onto the rest space at s1 and r'(s0) to
/// r'(s1).
pub fn fermi_walker_map<L: WorldLine + ?Sized>(
    line: &L,
    s0: f64,
    s1: f64,
    options: &IntegratorOptions,
) -> Result<LinMap, GyroscopeError> {
    if !(options.max_step > 0.0) {
        return Err(GyroscopeError::BadStep {
            step: options.max_step,
        });
    }
    let k = rk4_integrate(
        |sigma, m: LinMap| {
            let st = line.state(sigma);
            fermi_walker_generator(&st).as_linmap() * m
        },
        s0,
        s1,
        options.max_step,
        LinMap::identity(),
        |_, _| {},
    );
    Ok(k)
}

/// The constant rotation generator left over when Fermi-Walker transport
/// around a circular line is viewed from the frame co-rotating with the
/// orbit: Omega_r = -beta0 antisym(P(0) Omega P(0)), a generator of the rest
/// space at s = 0 with rate alpha0 beta0 |Omega|.
///
/// It solves the transport in closed form; see
/// [`fermi_walker_map_closed`].
pub fn circular_spin_generator(line: &CircularWorldLine) -> AntisymMap {
    let p0 = spatial_projector(&line.velocity(0.0));
    AntisymMap::antisymmetrize(p0 * line.rotation().as_linmap() * p0) * (-line.beta0())
}

/// Closed form of [`fermi_walker_map`] for circular world lines:
/// K(s) = P(s) e^{s beta0 Omega} e^{s Omega_r} P(0) - r'(s)(r'(0) . _),
/// exact up to the matrix exponentials. The factorization splits the
/// transport into the orbital rotation and the residual co-rotating spin
/// [`circular_spin_generator`].
pub fn fermi_walker_map_closed(line: &CircularWorldLine, s: f64) -> LinMap {
    let omega_r = circular_spin_generator(line);
    let v0 = line.velocity(0.0);
    let vs = line.velocity(s);
    let middle = line.rotation().exp(s * line.beta0()) * omega_r.exp(s);
    spatial_projector(&vs) * middle * spatial_projector(&v0)
        - LinMap::outer(vs.vector(), v0.vector())
}

// ---------------------------------------------------------------------------
// Net rotation between equal-velocity passes
// ---------------------------------------------------------------------------

/// Net rest-space rotation produced by Fermi-Walker transport between two
/// parameters with equal velocities.
#[derive(Debug, Clone)]
pub struct RotationSummary {
    /// The full transport map from s1 to s2.
    pub map: LinMap,
    /// Rotation angle in [0, pi].
    pub angle: f64,
    /// Unit rotation axis in the common rest space; zero when the angle
    /// vanishes.
    pub axis: FourVector,
}

/// Extracts angle and axis from a 3x3 rotation matrix expressed in a
/// right-handed orthonormal triad. Returns the axis in triad components.
pub(crate) fn rotation_summary_from_matrix3(m: &Matrix3<f64>) -> (f64, Vector3<f64>) {
    let cos = ((m.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let angle = cos.acos();
    let sin = angle.sin();
    if sin > AXIS_SIN_FLOOR {
        let axis = Vector3::new(
            m[(2, 1)] - m[(1, 2)],
            m[(0, 2)] - m[(2, 0)],
            m[(1, 0)] - m[(0, 1)],
        ) / (2.0 * sin);
        (angle, axis.normalize())
    } else if cos > 0.0 {
        // angle ~ 0: no meaningful axis
        (angle, Vector3::zeros())
    } else {
        // angle ~ pi: R ~ 2 n n^T - 1, recover n from the largest diagonal
        let diag = [m[(0, 0)], m[(1, 1)], m[(2, 2)]];
        let k = (0..3).max_by(|&a, &b| diag[a].total_cmp(&diag[b])).unwrap();
        let nk = ((diag[k] + 1.0) * 0.5).max(0.0).sqrt();
        let mut n = Vector3::zeros();
        n[k] = nk;
        for j in 0..3 {
            if j != k {
                n[j] = (m[(j, k)] + m[(k, j)]) * 0.25 / nk;
            }
        }
        (angle, n.normalize())
    }
}

/// Fermi-Walker transports the deterministic triad of the rest space at s1
/// to s2 and extracts the resulting rotation. Requires the line velocities
/// at s1 and s2 to agree (within [`VELOCITY_MATCH_TOL`]); s2 - s1 is then
/// typically a multiple of the velocity period.
pub fn thomas_rotation<L: WorldLine + ?Sized>(
    line: &L,
    s1: f64,
    s2: f64,
    options: &IntegratorOptions,
) -> Result<RotationSummary, GyroscopeError> {
    let u1 = line.velocity(s1);
    let u2 = line.velocity(s2);
    let defect = (u1.vector() - u2.vector()).max_abs();
    if defect > VELOCITY_MATCH_TOL {
        return Err(GyroscopeError::VelocitiesDiffer { defect });
    }

    let k = fermi_walker_map(line, s1, s2, options)?;
    let triad = orthonormal_spatial_basis(&u1);
    let mut m = Matrix3::zeros();
    for (j, h) in triad.iter().enumerate() {
        let kh = k * *h;
        for (i, hi) in triad.iter().enumerate() {
            m[(i, j)] = lorentz_dot(*hi, kh);
        }
    }
    let det = m.determinant();
    if (det - 1.0).abs() > DETERMINANT_TOL {
        return Err(GyroscopeError::NotARotation { det });
    }
    let (angle, axis3) = rotation_summary_from_matrix3(&m);
    let axis = triad[0] * axis3[0] + triad[1] * axis3[1] + triad[2] * axis3[2];
    Ok(RotationSummary { map: k, angle, axis })
}

// ---------------------------------------------------------------------------
// Precession relative to a fixed reference observer
// ---------------------------------------------------------------------------

/// Instantaneous kinematics of a world line as seen by a fixed inertial
/// reference velocity u.
#[derive(Debug, Clone)]
pub struct PrecessionState {
    pub s: f64,
    /// Lorentz factor gamma = -u.r'(s); the clock rate dt/ds.
    pub gamma: f64,
    /// Relative velocity v = r'/gamma - u, in the u rest space.
    pub velocity: FourVector,
    /// Relative acceleration dv/dt, in the u rest space.
    pub acceleration: FourVector,
    /// Gyroscopic angular velocity gamma^2/(1+gamma) v ^ a: the rate, per u
    /// time, at which the spin axis turns in the u rest space.
    pub omega: AntisymMap,
}

/// Velocity, acceleration and spin angular velocity of the line relative to
/// the reference observer at parameter s.
pub fn thomas_precession_omega<L: WorldLine + ?Sized>(
    line: &L,
    reference: &AbsoluteVelocity,
    s: f64,
) -> PrecessionState {
    let state = line.state(s);
    let u = reference.vector();
    let rdot = state.velocity.vector();
    let rddot = state.acceleration;
    let gamma = -lorentz_dot(u, rdot);
    let velocity = rdot * (1.0 / gamma) - u;
    let u_dot_rddot = lorentz_dot(u, rddot);
    let acceleration = (rddot + rdot * (u_dot_rddot / gamma)) * (1.0 / (gamma * gamma));
    let omega = wedge(velocity, acceleration) * (gamma * gamma / (1.0 + gamma));
    PrecessionState {
        s,
        gamma,
        velocity,
        acceleration,
        omega,
    }
}

/// A step of the precession evolution relative to a fixed reference.
#[derive(Debug, Clone, Copy)]
pub struct PrecessionSample {
    pub s: f64,
    /// Reference time elapsed, t = integral of gamma ds.
    pub t: f64,
    /// The axis in the reference rest space.
    pub z: FourVector,
    /// Unsigned angle integral of the precession rate over reference time.
    pub angle_accum: f64,
}

/// Evolves an axis in the rest space of a fixed reference observer under
/// the precession equation dz/dt = Omega(t) z, alongside the elapsed
/// reference time and the accumulated unsigned angle integral |Omega| dt.
/// The samples are visited in order, reusing the state between them.
pub fn precession_evolve_samples<L: WorldLine + ?Sized>(
    line: &L,
    reference: &AbsoluteVelocity,
    z0: FourVector,
    s0: f64,
    samples: &[f64],
    options: &IntegratorOptions,
) -> Result<Vec<PrecessionSample>, GyroscopeError> {
    if !(options.max_step > 0.0) {
        return Err(GyroscopeError::BadStep {
            step: options.max_step,
        });
    }
    let dot = lorentz_dot(reference.vector(), z0);
    if dot.abs() > 1e-9 * (1.0 + z0.max_abs()) {
        return Err(GyroscopeError::NotSpatialAtStart { dot });
    }

    // state = (t, angle_accum, z); dz/ds = gamma Omega z
    type State = nalgebra::SVector<f64, 6>;
    let pack = |t: f64, phi: f64, z: FourVector| {
        let c = z.components();
        State::from_column_slice(&[t, phi, c[0], c[1], c[2], c[3]])
    };
    let unpack_z = |y: &State| FourVector::new(y[2], y[3], y[4], y[5]);

    let mut y = pack(0.0, 0.0, z0);
    let mut s_prev = s0;
    let mut out = Vec::with_capacity(samples.len());
    for &s in samples {
        y = rk4_integrate(
            |sigma, y: State| {
                let st = thomas_precession_omega(line, reference, sigma);
                let z = FourVector::new(y[2], y[3], y[4], y[5]);
                let dz = (st.omega * z) * st.gamma;
                let rate = st.omega.rotation_rate() * st.gamma;
                let c = dz.components();
                State::from_column_slice(&[st.gamma, rate, c[0], c[1], c[2], c[3]])
            },
            s_prev,
            s,
            options.max_step,
            y,
            |_, _| {},
        );
        out.push(PrecessionSample {
            s,
            t: y[0],
            z: unpack_z(&y),
            angle_accum: y[1],
        });
        s_prev = s;
    }
    Ok(out)
}

/// Single-endpoint form of [`precession_evolve_samples`].
pub fn precession_evolve<L: WorldLine + ?Sized>(
    line: &L,
    reference: &AbsoluteVelocity,
    z0: FourVector,
    s0: f64,
    s1: f64,
    options: &IntegratorOptions,
) -> Result<PrecessionSample, GyroscopeError> {
    let mut v = precession_evolve_samples(line, reference, z0, s0, &[s1], options)?;
    Ok(v.pop().expect("one sample requested"))
}
