//! Coordinate-free special-relativistic kinematics.
//!
//! The crate models gyroscope transport along accelerated world lines and
//! the observer fields (rigidly rotating and co-moving families) needed to
//! describe precession relative to such observers, in flat spacetime with
//! signature (-, +, +, +) and c = 1. It provides:
//!
//! - Minkowski vector algebra: velocities, projectors, wedge maps,
//!   Lorentz exponentials and boosts ([`minkowski`]);
//! - parametrized world lines, circular ones in closed form, and radar
//!   synchronization onto them ([`worldline`]);
//! - Fermi-Walker transport, gyroscope axis evolution and the net rotation
//!   between passes through the same velocity ([`gyroscope`]);
//! - observer velocity fields, their kinematic angular velocity, transport
//!   maps between rest spaces and the meaningfulness analysis for
//!   Foucault-style precession rates ([`observer`]).
//!
//! Everything is computed on the fixed component basis of
//! [`minkowski::FourVector`], but all public quantities are constructed
//! covariantly; conjugation tests under random Lorentz maps keep that
//! honest.

pub mod gyroscope;
mod integrate;
pub mod minkowski;
pub mod observer;
pub mod worldline;

pub use minkowski::{
    antisymmetry_residual, boost, exp_map, lorentz_dot, orthonormal_spatial_basis,
    rotation_axis, rotation_generator, spatial_projector, wedge, AbsoluteVelocity, AntisymMap,
    Event, FourVector, LinMap, MinkowskiError,
};

pub use worldline::{
    sync_time, validate_worldline, CircularWorldLine, InertialWorldLine, SyncSolveResult,
    WorldLine, WorldLineState, WorldlineError, WorldlineValidation,
};

pub use gyroscope::{
    circular_spin_generator, fermi_walker_map, fermi_walker_map_closed, fermi_walker_transport,
    fermi_walker_transport_samples, precession_evolve, precession_evolve_samples,
    thomas_precession_omega, thomas_rotation, GyroscopeError, GyroscopicVector,
    IntegratorOptions, PrecessionSample, PrecessionState, RotationSummary,
};

pub use observer::{
    flow_jacobian_ode, foucault_analyze, foucault_vs_spin, gamma_twist_angle,
    observer_angular_velocity, transport_map, FoucaultOptions, FoucaultReport,
    FoucaultSampleRow, ObserverError, ObserverField, Profile, ProfileValues, RotatingObserver,
    TransportLaw, TransportMap, TwistAngles, TwistedComovingObserver,
};
