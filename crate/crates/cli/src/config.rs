//! Declarative run configuration: a versioned JSON document describing a
//! scenario, its orbit and clock-rate profile, integration controls, and
//! where the report goes. Everything that can be rejected before any
//! numerics runs is rejected here.

use relkin::Profile;
use serde::Deserialize;

use crate::error::CliError;
use crate::expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    ThomasCircle,
    HerreraResolution,
    NoangCounterexample,
    GammaTwist,
    Custom,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::ThomasCircle => "thomas-circle",
            Scenario::HerreraResolution => "herrera-resolution",
            Scenario::NoangCounterexample => "noang-counterexample",
            Scenario::GammaTwist => "gamma-twist",
            Scenario::Custom => "custom",
        }
    }
}

/// Clock-rate profile selector: either a preset name or a pair of
/// expressions in the orbit parameter k.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ProfileConfig {
    Preset(String),
    Expressions(ProfileExpressions),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileExpressions {
    pub alpha: String,
    pub beta: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default = "defaults::step")]
    pub step: f64,
    #[serde(default)]
    pub reproject: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step: defaults::step(),
            reproject: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesConfig {
    #[serde(default = "defaults::meaningful")]
    pub meaningful: f64,
    #[serde(default = "defaults::ode")]
    pub ode: f64,
}

impl Default for TolerancesConfig {
    fn default() -> Self {
        TolerancesConfig {
            meaningful: defaults::meaningful(),
            ode: defaults::ode(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
    pub path: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Config format version; this binary understands version 1.
    pub schema: u32,
    pub scenario: Scenario,
    #[serde(default = "defaults::omega")]
    pub omega: f64,
    #[serde(default = "defaults::d_norm")]
    pub d_norm: f64,
    #[serde(default)]
    pub profile: Option<ProfileConfig>,
    /// Parameter of the h-family profile; required with it, meaningless
    /// otherwise.
    #[serde(default)]
    pub h: Option<f64>,
    /// Extra frame rotation for the gamma-twist scenario: components of the
    /// rotation axis (scaled by the rate) in the orthonormal rest triad of
    /// the orbit's starting velocity.
    #[serde(default)]
    pub gamma_twist: Option<[f64; 3]>,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default = "defaults::samples")]
    pub samples: usize,
    #[serde(default)]
    pub tolerances: TolerancesConfig,
    pub output: OutputConfig,
}

mod defaults {
    pub fn omega() -> f64 {
        0.6
    }
    pub fn d_norm() -> f64 {
        1.0
    }
    pub fn samples() -> usize {
        64
    }
    pub fn step() -> f64 {
        1e-3
    }
    pub fn meaningful() -> f64 {
        1e-8
    }
    pub fn ode() -> f64 {
        1e-3
    }
}

/// What the profile selector resolves to, with enough information for the
/// domain checks that depend on the orbit.
enum ProfileKind {
    Conventional,
    HFamily(f64),
    TemporallyTrivial,
    SqrtAlpha,
    /// Constant clock rate frozen at the configured orbit's k: agrees with
    /// the conventional observer on the orbit itself but fails the rigidity
    /// criterion off it.
    ConstAlpha,
    Expressions,
}

pub const PRESET_NAMES: [&str; 5] = [
    "conventional",
    "h-family",
    "temporally-trivial",
    "sqrt-alpha",
    "const-alpha",
];

impl Config {
    /// Parses a config document, reporting the JSON path of whatever field
    /// is malformed.
    pub fn from_json(text: &str) -> Result<Config, CliError> {
        let mut deserializer = serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(&mut deserializer)
            .map_err(|error| CliError::config(format!("invalid config: {error}")))
    }

    /// The orbit parameter k = (omega |d|)^2 at which the studied world
    /// line sits.
    pub fn orbit_k(&self) -> f64 {
        (self.omega * self.d_norm).powi(2)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |message: String| Err(CliError::Config(message));

        if self.schema != 1 {
            return bad(format!("schema: expected 1, got {}", self.schema));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return bad(format!("omega: must be finite and > 0, got {}", self.omega));
        }
        if !(self.d_norm.is_finite() && self.d_norm >= 0.0) {
            return bad(format!(
                "d_norm: must be finite and >= 0, got {}",
                self.d_norm
            ));
        }
        if self.samples < 2 {
            return bad(format!("samples: need at least 2, got {}", self.samples));
        }
        if !(self.integrator.step.is_finite() && self.integrator.step > 0.0) {
            return bad(format!(
                "integrator.step: must be finite and > 0, got {}",
                self.integrator.step
            ));
        }
        for (name, value) in [
            ("tolerances.meaningful", self.tolerances.meaningful),
            ("tolerances.ode", self.tolerances.ode),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return bad(format!("{name}: must be finite and > 0, got {value}"));
            }
        }
        if self.output.path.is_empty() {
            return bad("output.path: must not be empty".to_owned());
        }

        match self.scenario {
            Scenario::ThomasCircle | Scenario::Custom => {
                if self.gamma_twist.is_some() {
                    return bad(format!(
                        "gamma_twist: only used by the gamma-twist scenario, not {}",
                        self.scenario.name()
                    ));
                }
                let kind = self.profile_kind()?;
                self.check_profile_domain(&kind)?;
                // also surfaces expression parse errors before anything runs
                self.build_profile()?;
            }
            Scenario::HerreraResolution | Scenario::NoangCounterexample => {
                self.reject_profile_fields()?;
                if self.gamma_twist.is_some() {
                    return bad(format!(
                        "gamma_twist: only used by the gamma-twist scenario, not {}",
                        self.scenario.name()
                    ));
                }
                // both scenarios build the conventional observer
                self.check_profile_domain(&ProfileKind::Conventional)?;
                if self.scenario == Scenario::HerreraResolution && self.d_norm == 0.0 {
                    return bad(
                        "d_norm: herrera-resolution compares observers on an actual orbit; \
                         need d_norm > 0"
                            .to_owned(),
                    );
                }
            }
            Scenario::GammaTwist => {
                self.reject_profile_fields()?;
                match self.gamma_twist {
                    None => {
                        return bad(
                            "gamma_twist: required by the gamma-twist scenario (3 reals: \
                             rotation axis scaled by rate, in the starting rest triad)"
                                .to_owned(),
                        );
                    }
                    Some(components) if components.iter().any(|c| !c.is_finite()) => {
                        return bad(format!(
                            "gamma_twist: components must be finite, got {components:?}"
                        ));
                    }
                    Some(_) => {}
                }
                self.check_profile_domain(&ProfileKind::Conventional)?;
            }
        }
        Ok(())
    }

    fn reject_profile_fields(&self) -> Result<(), CliError> {
        if self.profile.is_some() {
            return Err(CliError::config(format!(
                "profile: the {} scenario fixes its own profile(s); remove the field",
                self.scenario.name()
            )));
        }
        if self.h.is_some() {
            return Err(CliError::config(format!(
                "h: the {} scenario does not take a profile parameter",
                self.scenario.name()
            )));
        }
        Ok(())
    }

    fn profile_kind(&self) -> Result<ProfileKind, CliError> {
        let kind = match &self.profile {
            None => ProfileKind::Conventional,
            Some(ProfileConfig::Expressions(_)) => ProfileKind::Expressions,
            Some(ProfileConfig::Preset(name)) => match name.as_str() {
                "conventional" => ProfileKind::Conventional,
                "temporally-trivial" => ProfileKind::TemporallyTrivial,
                "sqrt-alpha" => ProfileKind::SqrtAlpha,
                "const-alpha" => ProfileKind::ConstAlpha,
                "h-family" => {
                    let h = self.h.ok_or_else(|| {
                        CliError::config("h: required with the h-family profile".to_owned())
                    })?;
                    if !(h.is_finite() && h > 0.0) {
                        return Err(CliError::config(format!(
                            "h: must be finite and > 0, got {h}"
                        )));
                    }
                    return Ok(ProfileKind::HFamily(h));
                }
                other => {
                    return Err(CliError::config(format!(
                        "profile: unknown preset '{other}' (expected one of {})",
                        PRESET_NAMES.join(" | ")
                    )));
                }
            },
        };
        if self.h.is_some() && !matches!(kind, ProfileKind::HFamily(_)) {
            return Err(CliError::config(
                "h: only used with the h-family profile".to_owned(),
            ));
        }
        Ok(kind)
    }

    /// Domain checks that depend on the orbit: clock-rate presets with a
    /// bounded domain must admit the configured k. Expression profiles are
    /// checked at evaluation time instead.
    fn check_profile_domain(&self, kind: &ProfileKind) -> Result<(), CliError> {
        let rim = self.omega * self.d_norm;
        match kind {
            ProfileKind::Conventional if rim >= 1.0 => Err(CliError::config(format!(
                "omega * d_norm = {rim} >= 1: the conventional profile only exists inside \
                 the light cylinder"
            ))),
            ProfileKind::HFamily(h) if h * rim >= 1.0 => Err(CliError::config(format!(
                "h * omega * d_norm = {} >= 1: outside the h-family domain",
                h * rim
            ))),
            ProfileKind::ConstAlpha if !(rim > 0.0 && rim < 1.0) => {
                Err(CliError::config(format!(
                    "const-alpha freezes the conventional clock rate at the orbit, which \
                     needs 0 < omega * d_norm < 1; got {rim}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Builds the profile the config selects. Call after [`validate`].
    pub fn build_profile(&self) -> Result<Profile, CliError> {
        match self.profile_kind()? {
            ProfileKind::Conventional => Ok(Profile::conventional()),
            ProfileKind::TemporallyTrivial => Ok(Profile::temporally_trivial()),
            ProfileKind::SqrtAlpha => Ok(Profile::sqrt_alpha()),
            ProfileKind::HFamily(h) => {
                Profile::h_family(h).map_err(|e| CliError::config(e.to_string()))
            }
            ProfileKind::ConstAlpha => {
                let alpha = 1.0 / (1.0 - self.orbit_k()).sqrt();
                Profile::const_alpha(alpha).map_err(|e| CliError::config(e.to_string()))
            }
            ProfileKind::Expressions => {
                let Some(ProfileConfig::Expressions(sources)) = &self.profile else {
                    unreachable!("kind Expressions implies expression config");
                };
                let alpha = expr::parse(&sources.alpha).map_err(|e| {
                    CliError::config(format!("profile.alpha: {e}"))
                })?;
                let beta = expr::parse(&sources.beta).map_err(|e| {
                    CliError::config(format!("profile.beta: {e}"))
                })?;
                let name = format!("expr(alpha = {}, beta = {})", sources.alpha, sources.beta);
                Ok(Profile::custom(
                    name,
                    move |k| alpha.eval(k),
                    move |k| beta.eval(k),
                ))
            }
        }
    }
}
