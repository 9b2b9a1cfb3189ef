//! Minkowski vector-space primitives.
//!
//! Everything in this crate works on a fixed four-dimensional real vector
//! space M carrying the Lorentz form of signature (-, +, +, +). Components
//! are ordered (t, x, y, z) and units are natural, c = 1. The fixed
//! component basis is a computational device only; every public operation is
//! basis-covariant (see the covariance integration tests).
//!
//! Velocities are absolute in the sense that they are unit future-directed
//! timelike vectors of M itself, not three-velocities relative to a frame.
//! The rest space of a velocity u is the spacelike hyperplane
//! E_u = { x : u . x = 0 }, on which the Lorentz form is positive definite.

use nalgebra::{Matrix4, Vector4};
use thiserror::Error;

/// Construction tolerance for unit timelike vectors: |u.u + 1| must not
/// exceed this.
pub const VELOCITY_NORM_TOL: f64 = 1e-12;

/// Construction tolerance for Lorentz-antisymmetric maps, relative to
/// 1 + max |entry|.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

/// Inversion rejects maps whose 1-norm condition estimate exceeds this.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Gram-Schmidt cutoff: a candidate whose residual squared norm falls below
/// this is treated as linearly dependent on the vectors already kept.
const GRAM_SCHMIDT_CUTOFF: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinkowskiError {
    #[error("vector is not unit timelike: u.u = {norm_sq}, expected -1 within {VELOCITY_NORM_TOL}")]
    NotUnitTimelike { norm_sq: f64 },
    #[error("vector is not future-directed: time component {t}")]
    NotFutureDirected { t: f64 },
    #[error("map is not Lorentz-antisymmetric: residual {residual}")]
    NotAntisymmetric { residual: f64 },
    #[error("singular linear map")]
    SingularMap,
    #[error("ill-conditioned linear map: condition estimate {cond:.3e} exceeds {CONDITION_LIMIT:.1e}")]
    IllConditioned { cond: f64 },
    #[error("vector is not in the rest space of the velocity: u.v = {dot}")]
    NotSpatialForVelocity { dot: f64 },
    #[error("three-velocity must satisfy |v| < 1, got |v| = {speed}")]
    SuperluminalSpeed { speed: f64 },
}

// ---------------------------------------------------------------------------
// Vectors and events
// ---------------------------------------------------------------------------

/// An element of the Minkowski vector space M, components (t, x, y, z).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector(pub(crate) Vector4<f64>);

/// A point of the affine Minkowski spacetime. Differences of events are
/// `FourVector`s; events themselves carry no linear structure.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Event(pub(crate) Vector4<f64>);

/// A unit future-directed timelike vector: u.u = -1 and u_t > 0.
///
/// The constructor validates both conditions, so code receiving an
/// `AbsoluteVelocity` may rely on them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsoluteVelocity(FourVector);

impl FourVector {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector(Vector4::new(t, x, y, z))
    }

    pub fn zero() -> Self {
        FourVector(Vector4::zeros())
    }

    pub fn t(&self) -> f64 {
        self.0[0]
    }

    pub fn x(&self) -> f64 {
        self.0[1]
    }

    pub fn y(&self) -> f64 {
        self.0[2]
    }

    pub fn z(&self) -> f64 {
        self.0[3]
    }

    pub fn components(&self) -> [f64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    /// Lorentz inner product with another vector.
    pub fn dot(&self, other: &FourVector) -> f64 {
        lorentz_dot(*self, *other)
    }

    /// Lorentz square u.u (negative for timelike vectors).
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    /// Length of a spacelike vector, sqrt(u.u). Returns NaN for timelike
    /// input; callers use it only on rest-space vectors.
    pub fn spatial_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute component; the scale used by relative tolerances.
    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub(crate) fn unit(i: usize) -> Self {
        let mut v = Vector4::zeros();
        v[i] = 1.0;
        FourVector(v)
    }
}

/// The Lorentz form, g = diag(-1, +1, +1, +1):
/// x.y = -x_t y_t + x_x y_x + x_y y_y + x_z y_z.
pub fn lorentz_dot(a: FourVector, b: FourVector) -> f64 {
    -a.0[0] * b.0[0] + a.0[1] * b.0[1] + a.0[2] * b.0[2] + a.0[3] * b.0[3]
}

/// Metric-lowered copy of a vector: g applied componentwise. Internal helper
/// for assembling matrices of the form a (g b)^T.
fn lowered(v: &FourVector) -> Vector4<f64> {
    Vector4::new(-v.0[0], v.0[1], v.0[2], v.0[3])
}

impl std::ops::Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector(self.0 + rhs.0)
    }
}

impl std::ops::Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector(self.0 - rhs.0)
    }
}

impl std::ops::Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector(-self.0)
    }
}

impl std::ops::Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, rhs: f64) -> FourVector {
        FourVector(self.0 * rhs)
    }
}

impl std::ops::Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, rhs: FourVector) -> FourVector {
        FourVector(rhs.0 * self)
    }
}

impl Event {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Event(Vector4::new(t, x, y, z))
    }

    pub fn origin() -> Self {
        Event(Vector4::zeros())
    }

    pub fn components(&self) -> [f64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }
}

impl std::ops::Sub for Event {
    type Output = FourVector;
    fn sub(self, rhs: Event) -> FourVector {
        FourVector(self.0 - rhs.0)
    }
}

impl std::ops::Add<FourVector> for Event {
    type Output = Event;
    fn add(self, rhs: FourVector) -> Event {
        Event(self.0 + rhs.0)
    }
}

impl std::ops::Sub<FourVector> for Event {
    type Output = Event;
    fn sub(self, rhs: FourVector) -> Event {
        Event(self.0 - rhs.0)
    }
}

impl AbsoluteVelocity {
    /// Validates u.u = -1 (within [`VELOCITY_NORM_TOL`]) and u_t > 0.
    pub fn new(v: FourVector) -> Result<Self, MinkowskiError> {
        let norm_sq = v.norm_sq();
        if (norm_sq + 1.0).abs() > VELOCITY_NORM_TOL {
            return Err(MinkowskiError::NotUnitTimelike { norm_sq });
        }
        if v.t() <= 0.0 {
            return Err(MinkowskiError::NotFutureDirected { t: v.t() });
        }
        Ok(AbsoluteVelocity(v))
    }

    /// The velocity gamma (1, v) of a point moving with three-velocity v in
    /// the basis frame; |v| must be < 1.
    pub fn from_three_velocity(vx: f64, vy: f64, vz: f64) -> Result<Self, MinkowskiError> {
        let speed_sq = vx * vx + vy * vy + vz * vz;
        if speed_sq >= 1.0 {
            return Err(MinkowskiError::SuperluminalSpeed {
                speed: speed_sq.sqrt(),
            });
        }
        let gamma = 1.0 / (1.0 - speed_sq).sqrt();
        Ok(AbsoluteVelocity(FourVector::new(
            gamma,
            gamma * vx,
            gamma * vy,
            gamma * vz,
        )))
    }

    /// The basis rest velocity (1, 0, 0, 0).
    pub fn rest() -> Self {
        AbsoluteVelocity(FourVector::new(1.0, 0.0, 0.0, 0.0))
    }

    /// For internal construction of vectors that are unit timelike by
    /// algebraic identity (world-line velocities). Debug builds still check.
    pub(crate) fn new_unchecked(v: FourVector) -> Self {
        debug_assert!(
            (v.norm_sq() + 1.0).abs() < 1e-9 && v.t() > 0.0,
            "new_unchecked received a non-velocity: norm_sq = {}, t = {}",
            v.norm_sq(),
            v.t()
        );
        AbsoluteVelocity(v)
    }

    pub fn vector(&self) -> FourVector {
        self.0
    }

    /// Lorentz factor relative to another velocity, gamma = -u.u2 >= 1.
    pub fn gamma_to(&self, other: &AbsoluteVelocity) -> f64 {
        -lorentz_dot(self.0, other.0)
    }
}

impl From<AbsoluteVelocity> for FourVector {
    fn from(u: AbsoluteVelocity) -> FourVector {
        u.0
    }
}

// ---------------------------------------------------------------------------
// Linear maps
// ---------------------------------------------------------------------------

/// A linear map M -> M in the fixed component basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinMap(pub(crate) Matrix4<f64>);

impl LinMap {
    pub fn identity() -> Self {
        LinMap(Matrix4::identity())
    }

    pub fn zero() -> Self {
        LinMap(Matrix4::zeros())
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        LinMap(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    /// Rank-one map x |-> a (b.x) built from the Lorentz form.
    pub fn outer(a: FourVector, b: FourVector) -> Self {
        LinMap(a.0 * lowered(&b).transpose())
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    /// Adjoint with respect to the Lorentz form: A* = g A^T g, the unique map
    /// with (A* x).y = x.(A y).
    pub fn lorentz_adjoint(&self) -> LinMap {
        let g = metric();
        LinMap(g * self.0.transpose() * g)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    /// Frobenius norm of the component matrix.
    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Largest absolute entry of A* A - 1; zero exactly when the map
    /// preserves the Lorentz form.
    pub fn lorentz_residual(&self) -> f64 {
        let g = metric();
        (self.0.transpose() * g * self.0 - g).amax()
    }

    /// Inverse by LU with partial pivoting. Fails on singular input and on a
    /// 1-norm condition estimate above [`CONDITION_LIMIT`].
    pub fn try_inverse(&self) -> Result<LinMap, MinkowskiError> {
        let inv = self
            .0
            .lu()
            .try_inverse()
            .ok_or(MinkowskiError::SingularMap)?;
        let cond = one_norm(&self.0) * one_norm(&inv);
        if !cond.is_finite() || cond > CONDITION_LIMIT {
            return Err(MinkowskiError::IllConditioned { cond });
        }
        Ok(LinMap(inv))
    }
}

fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

fn one_norm(m: &Matrix4<f64>) -> f64 {
    (0..4)
        .map(|j| (0..4).map(|i| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl std::ops::Mul<FourVector> for LinMap {
    type Output = FourVector;
    fn mul(self, rhs: FourVector) -> FourVector {
        FourVector(self.0 * rhs.0)
    }
}

impl std::ops::Mul for LinMap {
    type Output = LinMap;
    fn mul(self, rhs: LinMap) -> LinMap {
        LinMap(self.0 * rhs.0)
    }
}

impl std::ops::Add for LinMap {
    type Output = LinMap;
    fn add(self, rhs: LinMap) -> LinMap {
        LinMap(self.0 + rhs.0)
    }
}

impl std::ops::Sub for LinMap {
    type Output = LinMap;
    fn sub(self, rhs: LinMap) -> LinMap {
        LinMap(self.0 - rhs.0)
    }
}

impl std::ops::Neg for LinMap {
    type Output = LinMap;
    fn neg(self) -> LinMap {
        LinMap(-self.0)
    }
}

impl std::ops::Mul<f64> for LinMap {
    type Output = LinMap;
    fn mul(self, rhs: f64) -> LinMap {
        LinMap(self.0 * rhs)
    }
}

// ---------------------------------------------------------------------------
// Antisymmetric maps
// ---------------------------------------------------------------------------

/// A Lorentz-antisymmetric map: (W x).y = -x.(W y), equivalently
/// g W^T g = -W. These are the generators of the Lorentz group; spatial ones
/// (W u = 0 for a velocity u) generate rotations of E_u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntisymMap(LinMap);

impl AntisymMap {
    /// Validates antisymmetry to [`ANTISYMMETRY_TOL`] relative to the entry
    /// scale.
    pub fn new(map: LinMap) -> Result<Self, MinkowskiError> {
        let residual = (map.lorentz_adjoint() + map).max_abs();
        if residual > ANTISYMMETRY_TOL * (1.0 + map.max_abs()) {
            return Err(MinkowskiError::NotAntisymmetric { residual });
        }
        Ok(AntisymMap(map))
    }

    /// Projects onto the antisymmetric part, (A - A*)/2. Used where a map is
    /// antisymmetric analytically but carries numerical noise.
    pub fn antisymmetrize(map: LinMap) -> Self {
        AntisymMap((map - map.lorentz_adjoint()) * 0.5)
    }

    pub fn zero() -> Self {
        AntisymMap(LinMap::zero())
    }

    pub fn as_linmap(&self) -> LinMap {
        self.0
    }

    /// exp(s W) by scaling and squaring. See [`exp_map`].
    pub fn exp(&self, s: f64) -> LinMap {
        exp_map(self, s)
    }

    /// Rotation rate sqrt(-Tr(W^2)/2).
    ///
    /// For a map annihilating a velocity u this is the angular speed of the
    /// rotation that exp(sW) induces on E_u; for a pure boost generator the
    /// trace is positive and the rate is reported as zero.
    pub fn rotation_rate(&self) -> f64 {
        let w = self.0 .0;
        let tr = (w * w).trace();
        (-0.5 * tr).max(0.0).sqrt()
    }
}

impl std::ops::Add for AntisymMap {
    type Output = AntisymMap;
    fn add(self, rhs: AntisymMap) -> AntisymMap {
        AntisymMap(self.0 + rhs.0)
    }
}

impl std::ops::Sub for AntisymMap {
    type Output = AntisymMap;
    fn sub(self, rhs: AntisymMap) -> AntisymMap {
        AntisymMap(self.0 - rhs.0)
    }
}

impl std::ops::Neg for AntisymMap {
    type Output = AntisymMap;
    fn neg(self) -> AntisymMap {
        AntisymMap(-self.0)
    }
}

impl std::ops::Mul<f64> for AntisymMap {
    type Output = AntisymMap;
    fn mul(self, rhs: f64) -> AntisymMap {
        AntisymMap(self.0 * rhs)
    }
}

impl std::ops::Mul<FourVector> for AntisymMap {
    type Output = FourVector;
    fn mul(self, rhs: FourVector) -> FourVector {
        self.0 * rhs
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Orthogonal projector onto the rest space E_u: P x = x + u (u.x).
///
/// P is idempotent, kills u, has rank 3, and the Lorentz form restricted to
/// its range is positive definite.
pub fn spatial_projector(u: &AbsoluteVelocity) -> LinMap {
    LinMap::identity() + LinMap::outer(u.vector(), u.vector())
}

/// Wedge of two vectors: (a ^ b) x = a (b.x) - b (a.x), always
/// Lorentz-antisymmetric.
pub fn wedge(a: FourVector, b: FourVector) -> AntisymMap {
    AntisymMap(LinMap::outer(a, b) - LinMap::outer(b, a))
}

/// exp(s W) via nalgebra's scaling-and-squaring Pade evaluation.
///
/// The result preserves the Lorentz form to machine precision relative to
/// the squared entry scale of the exponential. Spatial (rotation) generators
/// have bounded exponentials, so for them the absolute residual stays below
/// 1e-10 for |s| * ||W|| up to 20, which covers every transport span in this
/// crate; boost generators grow like cosh of the rapidity and the residual
/// grows with them.
pub fn exp_map(w: &AntisymMap, s: f64) -> LinMap {
    LinMap((w.0 .0 * s).exp())
}

/// The boost taking u to u2: the unique Lorentz map with L u = u2 acting as
/// the identity on the orthogonal complement of span{u, u2}.
///
/// With gamma = -u.u2 and v = u + u2:
/// L x = x + v (v.x)/(1 + gamma) - 2 u2 (u.x).
/// For unit future-directed inputs gamma >= 1, so the anti-parallel
/// degeneracy (1 + gamma = 0) cannot occur.
pub fn boost(u: &AbsoluteVelocity, u2: &AbsoluteVelocity) -> LinMap {
    let gamma = u.gamma_to(u2);
    let denom = 1.0 + gamma;
    assert!(
        denom > 1e-12,
        "boost degenerate: inputs are not both future-directed"
    );
    let v = u.vector() + u2.vector();
    LinMap::identity() + LinMap::outer(v, v) * (1.0 / denom)
        - LinMap::outer(u2.vector(), u.vector()) * 2.0
}

/// Orthonormal basis of the range of a projector onto a spacelike subspace,
/// by modified Gram-Schmidt over the projected basis vectors (x, y, z, t
/// candidate order, which keeps the rest-frame basis fixed).
pub fn range_basis(p: &LinMap) -> Vec<FourVector> {
    let mut basis: Vec<FourVector> = Vec::new();
    for idx in [1usize, 2, 3, 0] {
        let mut v = *p * FourVector::unit(idx);
        for b in &basis {
            v = v - *b * lorentz_dot(v, *b);
        }
        let n2 = v.norm_sq();
        if n2 > GRAM_SCHMIDT_CUTOFF {
            basis.push(v * (1.0 / n2.sqrt()));
        }
    }
    basis
}

/// Deterministic orthonormal triad of the rest space E_u. For the basis rest
/// velocity this is exactly (x, y, z).
pub fn orthonormal_spatial_basis(u: &AbsoluteVelocity) -> [FourVector; 3] {
    let basis = range_basis(&spatial_projector(u));
    debug_assert_eq!(basis.len(), 3, "rest space of a velocity has dimension 3");
    [basis[0], basis[1], basis[2]]
}

/// Departure of a map from antisymmetry on the range of a projector:
/// max over an orthonormal basis {h_i} of range(P) of
/// |h_i.(W h_j) + (W h_i).h_j|.
///
/// Zero exactly when W restricted to range(P) is antisymmetric for the
/// restricted (positive definite) form.
pub fn antisymmetry_residual(w: &LinMap, p: &LinMap) -> f64 {
    let basis = range_basis(p);
    let mut worst: f64 = 0.0;
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let wi = *w * basis[i];
            let wj = *w * basis[j];
            worst = worst.max((lorentz_dot(basis[i], wj) + lorentz_dot(wi, basis[j])).abs());
        }
    }
    worst
}

/// Rotation generator of E_u about the given axis: W u = 0, W axis = 0, and
/// exp(sW) rotates E_u right-handedly about the axis at rate |axis|
/// (handedness taken in the deterministic triad of
/// [`orthonormal_spatial_basis`]).
pub fn rotation_generator(
    u: &AbsoluteVelocity,
    axis: FourVector,
) -> Result<AntisymMap, MinkowskiError> {
    let dot = lorentz_dot(u.vector(), axis);
    if dot.abs() > 1e-9 * (1.0 + axis.max_abs()) {
        return Err(MinkowskiError::NotSpatialForVelocity { dot });
    }
    let [h1, h2, h3] = orthonormal_spatial_basis(u);
    let a1 = lorentz_dot(h1, axis);
    let a2 = lorentz_dot(h2, axis);
    let a3 = lorentz_dot(h3, axis);
    let w = wedge(h3, h2) * a1 + wedge(h1, h3) * a2 + wedge(h2, h1) * a3;
    Ok(w)
}

/// Axis of a rotation generator of E_u, the inverse of
/// [`rotation_generator`]: returns the vector a in E_u with |a| equal to the
/// rotation rate. Exact for maps with W u = 0.
pub fn rotation_axis(u: &AbsoluteVelocity, w: &AntisymMap) -> FourVector {
    let [h1, h2, h3] = orthonormal_spatial_basis(u);
    let a1 = lorentz_dot(h3, w.as_linmap() * h2);
    let a2 = lorentz_dot(h1, w.as_linmap() * h3);
    let a3 = lorentz_dot(h2, w.as_linmap() * h1);
    h1 * a1 + h2 * a2 + h3 * a3
}
