//! Radial profiles of rigidly rotating observer fields.
//!
//! A rotating field has the form U(x) = alpha(k) u + beta(k) W xi with
//! k = |W xi|^2 the squared rotational speed parameter at the field point.
//! Any pair (alpha, beta) with alpha^2 - k beta^2 = 1 gives a unit field, so
//! there is a whole family of "rotating observers" sharing the same spatial
//! tracks but differing in how their clocks advance along the axis.
//!
//! The distinguished sub-family alpha = 1/sqrt(1 - h^2 k), beta = h alpha
//! (one member per h > 0) is exactly the set of profiles whose flow acts as
//! a rigid rotation on observer rest spaces; [`Profile::criterion_defect`]
//! measures the deviation (2 alpha' - alpha beta^2, 2 beta' - beta^3),
//! which vanishes identically precisely on that sub-family.

use super::ObserverError;
use crate::minkowski::{AbsoluteVelocity, AntisymMap, Event, FourVector};
use crate::worldline::CircularWorldLine;
use std::sync::Arc;

/// Switch to series evaluation of the cosh-based profile below this k, where
/// the closed form loses digits to cancellation.
const SERIES_THRESHOLD: f64 = 1e-4;

/// Relative tolerance for the unit-speed identity of user-supplied profiles.
const UNIT_SPEED_TOL: f64 = 1e-8;

/// alpha, beta and their k-derivatives at one k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValues {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_prime: f64,
    pub beta_prime: f64,
}

type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    /// alpha = (1 - h^2 k)^{-1/2}, beta = h alpha.
    HFamily { h: f64 },
    /// alpha = cosh sqrt(k), beta = sinh(sqrt k)/sqrt k: unit coordinate
    /// rate along the axis.
    TemporallyTrivial,
    /// alpha = sqrt(1 + k), beta = 1: unit rotation rate.
    SqrtAlpha,
    /// alpha = a constant, beta = sqrt(a^2 - 1)/sqrt(k): fixed clock rate.
    ConstAlpha { a: f64 },
    /// User-supplied alpha and beta; derivatives by finite differences.
    Custom {
        name: String,
        alpha: ProfileFn,
        beta: ProfileFn,
    },
}

/// A radial profile (alpha(k), beta(k)) with alpha^2 - k beta^2 = 1.
#[derive(Clone)]
pub struct Profile {
    kind: Kind,
}

impl std::fmt::Debug for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Profile({})", self.name())
    }
}

impl Profile {
    /// The centrifuge profile alpha = beta = 1/sqrt(1 - k): observers whose
    /// clocks tick at the rate of the co-rotating circular lines.
    pub fn conventional() -> Self {
        Profile {
            kind: Kind::HFamily { h: 1.0 },
        }
    }

    /// The rigid sub-family member with parameter h > 0.
    pub fn h_family(h: f64) -> Result<Self, ObserverError> {
        if !(h > 0.0) {
            return Err(ObserverError::BadProfileParameter {
                detail: format!("h must be positive, got {h}"),
            });
        }
        Ok(Profile {
            kind: Kind::HFamily { h },
        })
    }

    /// alpha = cosh sqrt(k), beta = sinh(sqrt k)/sqrt(k).
    pub fn temporally_trivial() -> Self {
        Profile {
            kind: Kind::TemporallyTrivial,
        }
    }

    /// alpha = sqrt(1 + k), beta = 1.
    pub fn sqrt_alpha() -> Self {
        Profile {
            kind: Kind::SqrtAlpha,
        }
    }

    /// Constant alpha = a > 1; defined for k > 0 only.
    pub fn const_alpha(a: f64) -> Result<Self, ObserverError> {
        if !(a > 1.0) {
            return Err(ObserverError::BadProfileParameter {
                detail: format!("constant alpha must exceed 1, got {a}"),
            });
        }
        Ok(Profile {
            kind: Kind::ConstAlpha { a },
        })
    }

    /// A user-supplied profile. The unit-speed identity
    /// alpha^2 - k beta^2 = 1 is checked at every evaluation; derivatives
    /// come from fourth-order finite differences.
    pub fn custom(
        name: impl Into<String>,
        alpha: impl Fn(f64) -> f64 + Send + Sync + 'static,
        beta: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Profile {
            kind: Kind::Custom {
                name: name.into(),
                alpha: Arc::new(alpha),
                beta: Arc::new(beta),
            },
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            Kind::HFamily { h } if *h == 1.0 => "conventional".to_string(),
            Kind::HFamily { h } => format!("h-family(h={h})"),
            Kind::TemporallyTrivial => "temporally-trivial".to_string(),
            Kind::SqrtAlpha => "sqrt-alpha".to_string(),
            Kind::ConstAlpha { a } => format!("const-alpha(a={a})"),
            Kind::Custom { name, .. } => format!("custom({name})"),
        }
    }

    /// Evaluates the profile and its derivatives at k = |W xi|^2 >= 0.
    pub fn evaluate(&self, k: f64) -> Result<ProfileValues, ObserverError> {
        if k < 0.0 || !k.is_finite() {
            return Err(ObserverError::OutsideDomain { k });
        }
        match &self.kind {
            Kind::HFamily { h } => {
                let hh = h * h;
                let w = 1.0 - hh * k;
                if w <= 1e-9 {
                    return Err(ObserverError::OutsideDomain { k });
                }
                let alpha = 1.0 / w.sqrt();
                let a3 = alpha / w; // (1 - h^2 k)^{-3/2}
                Ok(ProfileValues {
                    alpha,
                    beta: h * alpha,
                    alpha_prime: 0.5 * hh * a3,
                    beta_prime: 0.5 * hh * h * a3,
                })
            }
            Kind::TemporallyTrivial => {
                if k < SERIES_THRESHOLD {
                    // Maclaurin series in k; the closed form cancels badly
                    // near k = 0
                    Ok(ProfileValues {
                        alpha: 1.0 + k * (0.5 + k * (1.0 / 24.0 + k / 720.0)),
                        beta: 1.0 + k * (1.0 / 6.0 + k * (1.0 / 120.0 + k / 5040.0)),
                        alpha_prime: 0.5 + k * (1.0 / 12.0 + k / 240.0),
                        beta_prime: 1.0 / 6.0 + k * (1.0 / 60.0 + k / 1680.0),
                    })
                } else {
                    let q = k.sqrt();
                    let (sh, ch) = (q.sinh(), q.cosh());
                    Ok(ProfileValues {
                        alpha: ch,
                        beta: sh / q,
                        alpha_prime: sh / (2.0 * q),
                        beta_prime: (q * ch - sh) / (2.0 * q * q * q),
                    })
                }
            }
            Kind::SqrtAlpha => {
                let alpha = (1.0 + k).sqrt();
                Ok(ProfileValues {
                    alpha,
                    beta: 1.0,
                    alpha_prime: 0.5 / alpha,
                    beta_prime: 0.0,
                })
            }
            Kind::ConstAlpha { a } => {
                if k <= 1e-12 {
                    return Err(ObserverError::OutsideDomain { k });
                }
                let c = (a * a - 1.0).sqrt();
                let q = k.sqrt();
                Ok(ProfileValues {
                    alpha: *a,
                    beta: c / q,
                    alpha_prime: 0.0,
                    beta_prime: -0.5 * c / (k * q),
                })
            }
            Kind::Custom { alpha, beta, .. } => {
                let a = alpha(k);
                let b = beta(k);
                let defect = a * a - k * b * b - 1.0;
                if defect.abs() > UNIT_SPEED_TOL * (1.0 + a * a) {
                    return Err(ObserverError::UnitSpeedViolation { k, defect });
                }
                Ok(ProfileValues {
                    alpha: a,
                    beta: b,
                    alpha_prime: fd_derivative(alpha.as_ref(), k),
                    beta_prime: fd_derivative(beta.as_ref(), k),
                })
            }
        }
    }

    /// The rigidity defect (2 alpha' - alpha beta^2, 2 beta' - beta^3).
    /// Identically zero exactly for the h-family members.
    pub fn criterion_defect(&self, k: f64) -> Result<(f64, f64), ObserverError> {
        let v = self.evaluate(k)?;
        Ok((
            2.0 * v.alpha_prime - v.alpha * v.beta * v.beta,
            2.0 * v.beta_prime - v.beta * v.beta * v.beta,
        ))
    }

    /// The circular world line this profile assigns to the orbit through
    /// origin + displacement: r(s) = o + s alpha(k0) u + exp(s beta(k0) W) d.
    pub fn circular_line(
        &self,
        origin: Event,
        axis_velocity: AbsoluteVelocity,
        rotation: &AntisymMap,
        displacement: FourVector,
    ) -> Result<CircularWorldLine, ObserverError> {
        let k0 = (rotation.as_linmap() * displacement).norm_sq();
        let v = self.evaluate(k0)?;
        Ok(CircularWorldLine::new(
            origin,
            axis_velocity,
            *rotation,
            displacement,
            v.alpha,
            v.beta,
        )?)
    }
}

/// Fourth-order finite difference derivative, one-sided near k = 0 so the
/// function is never evaluated at negative arguments.
fn fd_derivative(f: &dyn Fn(f64) -> f64, k: f64) -> f64 {
    let h = 1e-4 * k.abs().max(1.0);
    if k >= 2.0 * h {
        (-f(k + 2.0 * h) + 8.0 * f(k + h) - 8.0 * f(k - h) + f(k - 2.0 * h)) / (12.0 * h)
    } else {
        (-25.0 * f(k) + 48.0 * f(k + h) - 36.0 * f(k + 2.0 * h) + 16.0 * f(k + 3.0 * h)
            - 3.0 * f(k + 4.0 * h))
            / (12.0 * h)
    }
}
