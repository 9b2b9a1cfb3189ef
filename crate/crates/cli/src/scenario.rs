//! The scenario runners. Each one builds its observer fields and world
//! line from the validated config, runs the relevant analyses, and returns
//! a [`Report`]: an ordered summary block plus one or more sample tables
//! with the common column layout s, t_u, z, residual, angle_accum.

use std::f64::consts::TAU;

use relkin::{
    circular_spin_generator, foucault_analyze, foucault_vs_spin, gamma_twist_angle, lorentz_dot,
    observer_angular_velocity, orthonormal_spatial_basis, rotation_generator,
    precession_evolve_samples, thomas_precession_omega, thomas_rotation, AbsoluteVelocity,
    AntisymMap, CircularWorldLine, Event, FoucaultOptions, FoucaultReport, FourVector,
    IntegratorOptions, LinMap, Profile, RotatingObserver, TransportLaw, TwistedComovingObserver,
    WorldLine,
};

use crate::config::{Config, Scenario};
use crate::error::CliError;

// ---------------------------------------------------------------------------
// Report shape
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum SummaryValue {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl std::fmt::Display for SummaryValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SummaryValue::Float(x) => write!(f, "{x}"),
            SummaryValue::Int(n) => write!(f, "{n}"),
            SummaryValue::Bool(b) => write!(f, "{b}"),
            SummaryValue::Text(t) => write!(f, "{t}"),
        }
    }
}

/// One sampled reading. `angle_accum` is kept unreduced here; the report
/// writers split it into a value in [0, 2 pi) plus a winding count.
#[derive(Debug, Clone, Copy)]
pub struct Row {
    /// Curve parameter (proper time along the studied line).
    pub s: f64,
    /// Reference observer time elapsed.
    pub t_u: f64,
    /// Spatial components of the tracked axis.
    pub z: [f64; 3],
    /// Scenario-specific residual (criterion residual or norm drift).
    pub residual: f64,
    /// Accumulated unsigned rotation angle.
    pub angle_accum: f64,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub scenario: &'static str,
    pub summary: Vec<(String, SummaryValue)>,
    pub tables: Vec<Table>,
}

impl Report {
    fn new(scenario: &'static str) -> Self {
        Report {
            scenario,
            summary: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: SummaryValue) {
        self.summary.push((key.into(), value));
    }

    fn float(&mut self, key: impl Into<String>, value: f64) {
        self.push(key, SummaryValue::Float(value));
    }

    fn int(&mut self, key: impl Into<String>, value: i64) {
        self.push(key, SummaryValue::Int(value));
    }

    fn flag(&mut self, key: impl Into<String>, value: bool) {
        self.push(key, SummaryValue::Bool(value));
    }

    fn text(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.push(key, SummaryValue::Text(value.into()));
    }

    fn table(&mut self, name: impl Into<String>, rows: Vec<Row>) {
        self.tables.push(Table {
            name: name.into(),
            rows,
        });
    }
}

pub fn run_scenario(config: &Config) -> Result<Report, CliError> {
    match config.scenario {
        Scenario::ThomasCircle => thomas_circle(config),
        Scenario::HerreraResolution => herrera_resolution(config),
        Scenario::NoangCounterexample => noang_counterexample(config),
        Scenario::GammaTwist => gamma_twist(config),
        Scenario::Custom => custom(config),
    }
}

// ---------------------------------------------------------------------------
// Shared setup
// ---------------------------------------------------------------------------

fn e_x() -> FourVector {
    FourVector::new(0.0, 1.0, 0.0, 0.0)
}

fn e_z() -> FourVector {
    FourVector::new(0.0, 0.0, 0.0, 1.0)
}

struct Orbit {
    field: RotatingObserver,
    line: CircularWorldLine,
}

/// The rotating observer field about the z axis of the rest observer, and
/// its integral curve through the configured starting point on the x axis.
fn build_orbit(config: &Config, profile: Profile) -> Result<Orbit, CliError> {
    let u = AbsoluteVelocity::rest();
    let rotation = rotation_generator(&u, FourVector::new(0.0, 0.0, 0.0, config.omega))
        .map_err(|e| CliError::numerical(e.to_string()))?;
    let field = RotatingObserver::new(Event::origin(), u, rotation, profile)?;
    let line = field.integral_curve(Event::new(0.0, config.d_norm, 0.0, 0.0))?;
    Ok(Orbit { field, line })
}

/// Proper time of one revolution; for the degenerate on-axis line (constant
/// velocity) the span of one frame revolution, t = 2 pi / omega.
fn revolution_span(config: &Config, line: &CircularWorldLine) -> f64 {
    line.velocity_period()
        .unwrap_or_else(|| TAU / (config.omega * line.alpha0()))
}

fn uniform_samples(end: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                end
            } else {
                end * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn integrator_options(config: &Config) -> IntegratorOptions {
    IntegratorOptions {
        max_step: config.integrator.step,
        reproject: config.integrator.reproject,
    }
}

fn foucault_options(config: &Config) -> FoucaultOptions {
    FoucaultOptions {
        meaningful_tol: config.tolerances.meaningful,
        ode_max_step: config.tolerances.ode,
        fw_max_step: config.integrator.step,
        ..FoucaultOptions::default()
    }
}

fn spatial(v: &FourVector) -> [f64; 3] {
    let c = v.components();
    [c[1], c[2], c[3]]
}

fn foucault_rows(report: &FoucaultReport, alpha0: f64) -> Vec<Row> {
    report
        .rows
        .iter()
        .map(|row| Row {
            s: row.s,
            t_u: alpha0 * row.s,
            z: spatial(&row.z),
            residual: row.residual,
            angle_accum: row.angle_accum,
        })
        .collect()
}

/// Splits an accumulated angle into its reduction to [0, 2 pi) and the
/// completed turn count.
pub(crate) fn reduced_angle(accum: f64) -> (f64, i64) {
    let winding = (accum / TAU).floor() as i64;
    (accum - TAU * winding as f64, winding)
}

// ---------------------------------------------------------------------------
// thomas-circle
// ---------------------------------------------------------------------------

/// Gyroscope on a circular orbit, watched from the rest observer: the spin
/// direction trace, the precession rate and its time integral, and the net
/// rotation after one revolution.
fn thomas_circle(config: &Config) -> Result<Report, CliError> {
    let profile = config.build_profile()?;
    let orbit = build_orbit(config, profile.clone())?;
    let line = &orbit.line;
    let s1 = revolution_span(config, line);
    let reference = AbsoluteVelocity::rest();
    let options = integrator_options(config);

    let samples = uniform_samples(s1, config.samples);
    let evolution = precession_evolve_samples(line, &reference, e_x(), 0.0, &samples, &options)?;
    let rows: Vec<Row> = evolution
        .iter()
        .map(|sample| Row {
            s: sample.s,
            t_u: sample.t,
            z: spatial(&sample.z),
            residual: (lorentz_dot(sample.z, sample.z) - 1.0).abs(),
            angle_accum: sample.angle_accum,
        })
        .collect();
    let max_norm_drift = rows.iter().fold(0.0f64, |m, r| m.max(r.residual));

    let rotation = thomas_rotation(line, 0.0, s1, &options)?;
    let state = thomas_precession_omega(line, &reference, 0.0);
    let last = evolution.last().expect("at least two samples");
    let (integral_reduced, integral_winding) = reduced_angle(last.angle_accum);

    let mut report = Report::new(config.scenario.name());
    report.text("profile", profile.name());
    report.float("gamma", state.gamma);
    report.float("s1", s1);
    report.float("t_period", last.t);
    report.float("thomas_angle", rotation.angle);
    report.float("thomas_axis_z", lorentz_dot(rotation.axis, e_z()));
    report.float("omega_u_rate", state.omega.rotation_rate());
    report.float("omega_u_integral", integral_reduced);
    report.int("omega_u_winding", integral_winding);
    report.float("max_norm_drift", max_norm_drift);
    report.table("precession", rows);
    Ok(report)
}

// ---------------------------------------------------------------------------
// herrera-resolution
// ---------------------------------------------------------------------------

/// Four observer fields sharing the same orbit radius — the conventional
/// rotating one and three alternatives with different clock-rate profiles —
/// analyzed side by side. Only the conventional field moves its rest spaces
/// rigidly, so only there does a Foucault precession rate exist; the three
/// alternatives each produce a different, equally defensible-looking angle,
/// which is how three contradictory published answers could coexist.
fn herrera_resolution(config: &Config) -> Result<Report, CliError> {
    let frozen_alpha = 1.0 / (1.0 - config.orbit_k()).sqrt();
    let presets: [(&str, Profile); 4] = [
        ("conventional", Profile::conventional()),
        ("temporally-trivial", Profile::temporally_trivial()),
        ("sqrt-alpha", Profile::sqrt_alpha()),
        (
            "const-alpha",
            Profile::const_alpha(frozen_alpha).map_err(|e| CliError::config(e.to_string()))?,
        ),
    ];
    let foptions = foucault_options(config);
    let options = integrator_options(config);

    let mut report = Report::new(config.scenario.name());
    let mut conventional: Option<FoucaultReport> = None;
    let mut tables = Vec::new();

    for (name, profile) in presets {
        let orbit = build_orbit(config, profile)?;
        let s1 = revolution_span(config, &orbit.line);
        let samples = uniform_samples(s1, config.samples);
        let analysis = foucault_analyze(&orbit.field, &orbit.line, &samples, e_x(), &foptions)?;
        let key = name.replace('-', "_");
        report.flag(format!("{key}_meaningful"), analysis.meaningful);
        report.float(format!("{key}_max_residual"), analysis.max_residual);
        tables.push(Table {
            name: name.to_owned(),
            rows: foucault_rows(&analysis, orbit.line.alpha0()),
        });
        if name == "conventional" {
            let spin_defect = foucault_vs_spin(&orbit.field, &orbit.line, &samples, &foptions)?;
            let rotation = thomas_rotation(&orbit.line, 0.0, s1, &options)?;
            report.float("gamma", orbit.line.alpha0());
            report.float("s1", s1);
            report.float("thomas_angle", rotation.angle);
            report.float("spin_opposition_defect", spin_defect);
            conventional = Some(analysis);
        }
    }

    let analysis = conventional.expect("conventional preset ran first");
    if let Some(omega_f) = analysis.omega_foucault {
        report.float("foucault_rate", omega_f.rotation_rate());
    }
    let last = analysis.rows.last().expect("at least two samples");
    let (angle, winding) = reduced_angle(last.angle_accum);
    report.float("foucault_angle", angle);
    report.int("foucault_winding", winding);

    report.tables = tables;
    Ok(report)
}

// ---------------------------------------------------------------------------
// noang-counterexample
// ---------------------------------------------------------------------------

/// Two observer fields that both contain the same circular world line: the
/// conventional rotating field, whose kinematic angular velocity on the
/// line is the co-rotating spin rate, and the Fermi-Walker co-moving field,
/// whose angular velocity vanishes identically along it. Since both extend
/// the same line, "the angular velocity of the world line" is not a
/// well-formed notion — only fields have one.
fn noang_counterexample(config: &Config) -> Result<Report, CliError> {
    let orbit = build_orbit(config, Profile::conventional())?;
    let line = &orbit.line;
    let s1 = revolution_span(config, line);
    let samples = uniform_samples(s1, config.samples);
    let foptions = foucault_options(config);

    let comoving =
        TwistedComovingObserver::new(line.clone(), TransportLaw::FermiWalker, AntisymMap::zero())?;

    let mut comoving_max_rate = 0.0f64;
    for &s in &samples {
        let omega_u = observer_angular_velocity(&comoving, line.eval(s))?;
        comoving_max_rate = comoving_max_rate.max(omega_u.rotation_rate());
    }
    let rotating_rate = observer_angular_velocity(&orbit.field, line.eval(0.0))?.rotation_rate();
    let spin_rate = circular_spin_generator(line).rotation_rate();

    let comoving_analysis = foucault_analyze(&comoving, line, &samples, e_x(), &foptions)?;
    let rotating_analysis = foucault_analyze(&orbit.field, line, &samples, e_x(), &foptions)?;

    let mut report = Report::new(config.scenario.name());
    report.float("gamma", line.alpha0());
    report.float("s1", s1);
    report.float("comoving_max_angular_rate", comoving_max_rate);
    report.float("rotating_angular_rate", rotating_rate);
    report.float("rotating_spin_rate", spin_rate);
    report.float("angular_rate_gap", rotating_rate - comoving_max_rate);
    report.flag("comoving_meaningful", comoving_analysis.meaningful);
    report.flag("rotating_meaningful", rotating_analysis.meaningful);
    if let Some(w) = comoving_analysis.omega_foucault {
        report.float("comoving_foucault_rate", w.rotation_rate());
    }
    if let Some(w) = rotating_analysis.omega_foucault {
        report.float("rotating_foucault_rate", w.rotation_rate());
    }
    let alpha0 = line.alpha0();
    report.table(
        "comoving-fermi-walker",
        foucault_rows(&comoving_analysis, alpha0),
    );
    report.table(
        "rotating-conventional",
        foucault_rows(&rotating_analysis, alpha0),
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// gamma-twist
// ---------------------------------------------------------------------------

/// Co-moving observers carried with an extra constant frame rotation
/// (twist) Gamma. The gyroscope reading turns by a different net angle for
/// every twist, so the angle measured "after one revolution" belongs to the
/// observer family, not to the world line; the twist-free angle is the
/// Thomas angle.
fn gamma_twist(config: &Config) -> Result<Report, CliError> {
    let orbit = build_orbit(config, Profile::conventional())?;
    let line = &orbit.line;
    let s1 = revolution_span(config, line);
    let foptions = foucault_options(config);
    let options = integrator_options(config);

    let components = config.gamma_twist.expect("validated: twist present");
    let v0 = line.velocity(0.0);
    let triad = orthonormal_spatial_basis(&v0);
    let axis = triad[0] * components[0] + triad[1] * components[1] + triad[2] * components[2];
    let twist =
        rotation_generator(&v0, axis).map_err(|e| CliError::config(e.to_string()))?;

    let twisted = gamma_twist_angle(line, twist, s1, &foptions)?;
    let untwisted = gamma_twist_angle(line, AntisymMap::zero(), s1, &foptions)?;
    let rotation = thomas_rotation(line, 0.0, s1, &options)?;

    // reading trace: z_0(s) = e^{s Gamma} e^{s Omega_r} z_0 with per-leg
    // angle accumulation through the rest-triad trace
    let spin = circular_spin_generator(line);
    let z0 = triad[0];
    let samples = uniform_samples(s1, config.samples);
    let trace3 = |m: &LinMap| -> f64 {
        triad
            .iter()
            .map(|h| lorentz_dot(*h, *m * *h))
            .sum()
    };
    let mut rows = Vec::with_capacity(samples.len());
    let mut accum = 0.0f64;
    let mut previous_inverse = LinMap::identity();
    for (i, &s) in samples.iter().enumerate() {
        let evolution = twist.exp(s) * spin.exp(s);
        let z = evolution * z0;
        if i > 0 {
            let leg = evolution * previous_inverse;
            let cos = ((trace3(&leg) - 1.0) / 2.0).clamp(-1.0, 1.0);
            accum += cos.acos();
        }
        previous_inverse = spin.exp(-s) * twist.exp(-s);
        rows.push(Row {
            s,
            t_u: line.alpha0() * s,
            z: spatial(&z),
            residual: (lorentz_dot(z, z) - 1.0).abs(),
            angle_accum: accum,
        });
    }

    let mut report = Report::new(config.scenario.name());
    report.float("gamma", line.alpha0());
    report.float("s1", s1);
    report.float("twist_rate", twist.rotation_rate());
    report.float("angle_closed", twisted.closed);
    report.float("angle_generic", twisted.generic);
    report.float("route_gap", (twisted.closed - twisted.generic).abs());
    report.float("angle_untwisted", untwisted.closed);
    report.float("thomas_angle", rotation.angle);
    report.float(
        "departure_from_untwisted",
        (twisted.closed - untwisted.closed).abs(),
    );
    report.table("readings", rows);
    Ok(report)
}

// ---------------------------------------------------------------------------
// custom
// ---------------------------------------------------------------------------

/// Free-form run: any preset or expression profile on any orbit. Reports
/// the rigidity criterion verdict with the profile's criterion defect, the
/// precession rate when one exists, and the Thomas rotation of the orbit.
fn custom(config: &Config) -> Result<Report, CliError> {
    let profile = config.build_profile()?;
    let orbit = build_orbit(config, profile.clone())?;
    let line = &orbit.line;
    let s1 = revolution_span(config, line);
    let samples = uniform_samples(s1, config.samples);
    let foptions = foucault_options(config);
    let options = integrator_options(config);

    let analysis = foucault_analyze(&orbit.field, line, &samples, e_x(), &foptions)?;
    let (defect_alpha, defect_beta) = profile.criterion_defect(config.orbit_k())?;
    let rotation = thomas_rotation(line, 0.0, s1, &options)?;

    let mut report = Report::new(config.scenario.name());
    report.text("profile", profile.name());
    report.float("gamma", line.alpha0());
    report.float("s1", s1);
    report.float("k", config.orbit_k());
    report.float("defect_alpha", defect_alpha);
    report.float("defect_beta", defect_beta);
    report.flag("meaningful", analysis.meaningful);
    report.float("max_residual", analysis.max_residual);
    if let Some(w) = analysis.omega_foucault {
        report.float("foucault_rate", w.rotation_rate());
    }
    if analysis.meaningful {
        let spin_defect = foucault_vs_spin(&orbit.field, line, &samples, &foptions)?;
        report.float("spin_opposition_defect", spin_defect);
    }
    report.float("thomas_angle", rotation.angle);
    let last = analysis.rows.last().expect("at least two samples");
    let (angle, winding) = reduced_angle(last.angle_accum);
    report.float("foucault_angle", angle);
    report.int("foucault_winding", winding);
    report.table("readings", foucault_rows(&analysis, line.alpha0()));
    Ok(report)
}

// ---------------------------------------------------------------------------
