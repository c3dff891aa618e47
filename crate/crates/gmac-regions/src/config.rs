//! JSON run configuration.
//!
//! Channel levels are numbers in the unit named by `units` (`db` or
//! `linear`), or one of the words `"off"` (zero variance) and `"inf"`
//! (unbounded interference; only `q1`/`q2`). Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use gmac_core::gaussian::Scenario;
use gmac_core::gaussian::{GaussianChannel, StateVariance};
use gmac_core::sweep::{CooperationCase, Model, SweepSpec};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelTag {
    Prop1,
    Prop2,
    Prop2PureDpc,
    Prop3,
    GmacCsit,
    MacCsit,
    GmacNoCsit,
    MacNoCsit,
    Case1,
    Case2,
    Case3,
    Case4,
    FourCase,
    Discrete,
}

impl ModelTag {
    pub const ALL: [ModelTag; 14] = [
        ModelTag::Prop1,
        ModelTag::Prop2,
        ModelTag::Prop2PureDpc,
        ModelTag::Prop3,
        ModelTag::GmacCsit,
        ModelTag::MacCsit,
        ModelTag::GmacNoCsit,
        ModelTag::MacNoCsit,
        ModelTag::Case1,
        ModelTag::Case2,
        ModelTag::Case3,
        ModelTag::Case4,
        ModelTag::FourCase,
        ModelTag::Discrete,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ModelTag::Prop1 => "prop1",
            ModelTag::Prop2 => "prop2",
            ModelTag::Prop2PureDpc => "prop2-pure-dpc",
            ModelTag::Prop3 => "prop3",
            ModelTag::GmacCsit => "gmac-csit",
            ModelTag::MacCsit => "mac-csit",
            ModelTag::GmacNoCsit => "gmac-no-csit",
            ModelTag::MacNoCsit => "mac-no-csit",
            ModelTag::Case1 => "case1",
            ModelTag::Case2 => "case2",
            ModelTag::Case3 => "case3",
            ModelTag::Case4 => "case4",
            ModelTag::FourCase => "four-case",
            ModelTag::Discrete => "discrete",
        }
    }

    pub fn parse(s: &str) -> Option<ModelTag> {
        ModelTag::ALL.into_iter().find(|m| m.tag() == s)
    }

    /// The traced union, or `None` for the composite `four-case` and
    /// `discrete` models.
    pub fn sweep_model(self) -> Option<Model> {
        Some(match self {
            ModelTag::Prop1 => Model::Prop1,
            ModelTag::Prop2 => Model::Prop2 { pure_dpc: false },
            ModelTag::Prop2PureDpc => Model::Prop2 { pure_dpc: true },
            ModelTag::Prop3 => Model::Prop3,
            ModelTag::GmacCsit => Model::Baseline(Scenario::GmacCsit),
            ModelTag::MacCsit => Model::Baseline(Scenario::MacCsit),
            ModelTag::GmacNoCsit => Model::Baseline(Scenario::GmacNoCsit),
            ModelTag::MacNoCsit => Model::Baseline(Scenario::MacNoCsit),
            ModelTag::Case1 => Model::Case(CooperationCase::FullCooperation),
            ModelTag::Case2 => Model::Case(CooperationCase::DirectOnly),
            ModelTag::Case3 => Model::Case(CooperationCase::RelayByEncoder2),
            ModelTag::Case4 => Model::Case(CooperationCase::RelayByEncoder1),
            ModelTag::FourCase | ModelTag::Discrete => return None,
        })
    }
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Db,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Csv, Format::Json, Format::Svg];

    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            "svg" => Some(Format::Svg),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Word {
    Off,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Level {
    Number(f64),
    Word(Word),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub p1: Option<Level>,
    pub p2: Option<Level>,
    pub n1: Option<Level>,
    pub n2: Option<Level>,
    pub n3: Option<Level>,
    pub q0: Option<Level>,
    pub q1: Option<Level>,
    pub q2: Option<Level>,
}

impl ChannelSpec {
    /// Fields of `over` replace those of `self`.
    pub fn overlay(&self, over: &ChannelSpec) -> ChannelSpec {
        ChannelSpec {
            p1: over.p1.or(self.p1),
            p2: over.p2.or(self.p2),
            n1: over.n1.or(self.n1),
            n2: over.n2.or(self.n2),
            n3: over.n3.or(self.n3),
            q0: over.q0.or(self.q0),
            q1: over.q1.or(self.q1),
            q2: over.q2.or(self.q2),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub rho_points: Option<usize>,
    pub eta_points: Option<usize>,
    pub split_points: Option<usize>,
    pub alpha_points: Option<usize>,
    pub depth: Option<usize>,
    pub shrink: Option<f64>,
    pub weights: Option<usize>,
    pub alpha_cap: Option<f64>,
    pub seed: Option<u64>,
}

impl SweepConfig {
    pub fn overlay(&self, over: &SweepConfig) -> SweepConfig {
        SweepConfig {
            rho_points: over.rho_points.or(self.rho_points),
            eta_points: over.eta_points.or(self.eta_points),
            split_points: over.split_points.or(self.split_points),
            alpha_points: over.alpha_points.or(self.alpha_points),
            depth: over.depth.or(self.depth),
            shrink: over.shrink.or(self.shrink),
            weights: over.weights.or(self.weights),
            alpha_cap: over.alpha_cap.or(self.alpha_cap),
            seed: over.seed.or(self.seed),
        }
    }

    pub fn resolve(&self) -> SweepSpec {
        let d = SweepSpec::default();
        SweepSpec {
            rho_points: self.rho_points.unwrap_or(d.rho_points),
            eta_points: self.eta_points.unwrap_or(d.eta_points),
            split_points: self.split_points.unwrap_or(d.split_points),
            alpha_points: self.alpha_points.unwrap_or(d.alpha_points),
            depth: self.depth.unwrap_or(d.depth),
            shrink: self.shrink.unwrap_or(d.shrink),
            weights: self.weights.unwrap_or(d.weights),
            alpha_cap: self.alpha_cap.or(d.alpha_cap),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

/// One plot: the base channel with some fields replaced.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Panel {
    pub name: String,
    pub title: Option<String>,
    #[serde(default)]
    pub channel: ChannelSpec,
}

/// One curve of every panel. `points` supplies a fixed curve (for example a
/// published outer bound) instead of a computed one.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overlay {
    pub label: Option<String>,
    pub model: Option<ModelTag>,
    #[serde(default)]
    pub channel: ChannelSpec,
    #[serde(default)]
    pub sweep: SweepConfig,
    pub points: Option<Vec<[f64; 2]>>,
}

/// A finite-alphabet distribution. Alphabet sizes are keyed by variable
/// name (`S0`, …, `Y3`); missing variables have a single symbol.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PmfSource {
    /// Row-major probabilities in the order `S0 S1 S2 U V1 V2 V13 V23 X1 X2
    /// Y1 Y2 Y3`, last variable fastest.
    Dense { sizes: BTreeMap<String, usize>, probs: Vec<f64> },
    /// One table per factor: a row per assignment of the conditioning
    /// variables (row-major), each row a distribution over the outputs.
    /// Factors whose outputs all have one symbol may be omitted.
    Factors { sizes: BTreeMap<String, usize>, tables: BTreeMap<String, Vec<Vec<f64>>> },
    /// `count` random members of a special-case family (`gmac`,
    /// `cribbing-mac`, `relay-partial-df`, …), drawn from the sweep seed.
    Fixture { row: String, alphabet: usize, count: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteConfig {
    pub pmfs: Vec<PmfSource>,
    /// User 2 sends no message.
    #[serde(default)]
    pub message2_empty: bool,
}

/// Offsets added to the optimal dirty-paper coefficients before the
/// orthogonality check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    #[serde(default)]
    pub alpha0: f64,
    #[serde(default)]
    pub alpha1: f64,
    #[serde(default)]
    pub alpha2: f64,
    #[serde(default)]
    pub alpha13: f64,
    #[serde(default)]
    pub alpha23: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default)]
    pub perturb: Perturbation,
    #[serde(default)]
    pub pmfs: Vec<PmfSource>,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    #[serde(default = "default_mc_draws")]
    pub mc_draws: usize,
}

fn default_mc_samples() -> usize {
    100_000
}

fn default_mc_draws() -> usize {
    4
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            perturb: Perturbation::default(),
            pmfs: Vec::new(),
            mc_samples: default_mc_samples(),
            mc_draws: default_mc_draws(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelTag,
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub channel: ChannelSpec,
    pub title: Option<String>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub panels: Vec<Panel>,
    #[serde(default)]
    pub overlays: Vec<Overlay>,
    /// Signal-to-interference ratios for `sumrate-sir`, in dB.
    #[serde(default)]
    pub sir_db: Vec<f64>,
    pub formats: Option<Vec<Format>>,
    pub out: Option<PathBuf>,
    pub discrete: Option<DiscreteConfig>,
    #[serde(default)]
    pub verify: VerifyConfig,
}

/// A parsed configuration together with its source text, kept for
/// line-numbered error messages.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub path: PathBuf,
    source: String,
}

impl LoadedConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let source = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: cannot read config: {e}", path.display())))?;
        Self::from_str(&source, path)
    }

    pub fn from_str(source: &str, path: &Path) -> Result<Self, CliError> {
        let config: RunConfig = serde_json::from_str(source).map_err(|e| {
            CliError::Config(format!("{}:{}:{}: {}", path.display(), e.line(), e.column(), strip_position(&e)))
        })?;
        let loaded = Self { config, path: path.to_path_buf(), source: source.to_string() };
        loaded.check()?;
        Ok(loaded)
    }

    /// Error at the first line mentioning `key` (or line 1).
    pub fn error_at(&self, key: &str, msg: impl fmt::Display) -> CliError {
        let needle = format!("\"{key}\"");
        let line = self.source.lines().position(|l| l.contains(&needle)).map_or(1, |i| i + 1);
        CliError::Config(format!("{}:{line}: {key}: {msg}", self.path.display()))
    }

    fn check(&self) -> Result<(), CliError> {
        let c = &self.config;
        if let Err(e) = c.sweep.resolve().validate() {
            return Err(self.error_at("sweep", e));
        }
        for o in &c.overlays {
            if let Err(e) = c.sweep.overlay(&o.sweep).resolve().validate() {
                return Err(self.error_at("sweep", e));
            }
            if o.points.is_some() && o.model.is_some() {
                return Err(self.error_at("points", "an overlay has either fixed points or a model, not both"));
            }
            if let Some(pts) = &o.points {
                if pts.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(self.error_at("points", "rates must be finite and non-negative"));
                }
            }
        }
        let mut names: Vec<&str> = c.panels.iter().map(|p| p.name.as_str()).collect();
        for n in &names {
            if n.is_empty() || !n.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '-' || ch == '_') {
                return Err(self.error_at("name", format!("panel name {n:?} must be non-empty [A-Za-z0-9_-]")));
            }
        }
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(self.error_at("panels", "panel names must be unique"));
        }
        if c.sir_db.iter().any(|s| !s.is_finite()) {
            return Err(self.error_at("sir_db", "SIR values must be finite"));
        }
        if c.model == ModelTag::Discrete && c.discrete.is_none() {
            return Err(self.error_at("model", "model \"discrete\" needs a \"discrete\" section"));
        }
        if c.verify.mc_samples < 2 {
            return Err(self.error_at("mc_samples", "at least 2 samples are required"));
        }
        Ok(())
    }

    /// Resolve a channel spec (already merged with overrides) to linear
    /// parameters.
    pub fn channel(&self, spec: &ChannelSpec) -> Result<GaussianChannel, CliError> {
        let units = self.config.units;
        let required = |name: &str, v: Option<Level>| -> Result<f64, CliError> {
            match v {
                None => Err(self.error_at("channel", format!("missing field {name}"))),
                Some(l) => self.level(name, l, units, false).map(|s| match s {
                    StateVariance::Finite(x) => x,
                    StateVariance::Unbounded => unreachable!("rejected by level()"),
                }),
            }
        };
        let optional = |name: &str, v: Option<Level>, inf: bool| -> Result<StateVariance, CliError> {
            match v {
                None => Ok(StateVariance::Finite(0.0)),
                Some(l) => self.level(name, l, units, inf),
            }
        };
        let finite = |s: StateVariance| s.finite().expect("rejected by level()");
        Ok(GaussianChannel {
            p1: required("p1", spec.p1)?,
            p2: required("p2", spec.p2)?,
            n1: required("n1", spec.n1)?,
            n2: required("n2", spec.n2)?,
            n3: required("n3", spec.n3)?,
            q0: finite(optional("q0", spec.q0, false)?),
            q1: optional("q1", spec.q1, true)?,
            q2: optional("q2", spec.q2, true)?,
        })
    }

    fn level(&self, name: &str, l: Level, units: Units, allow_inf: bool) -> Result<StateVariance, CliError> {
        match l {
            Level::Word(Word::Off) => Ok(StateVariance::Finite(0.0)),
            Level::Word(Word::Inf) if allow_inf => Ok(StateVariance::Unbounded),
            Level::Word(Word::Inf) => Err(self.error_at(name, "\"inf\" is only allowed for q1 and q2")),
            Level::Number(x) => {
                let v = match units {
                    Units::Db => gmac_core::db_to_linear(gmac_core::DbValue(x)).map_err(|e| self.error_at(name, e))?,
                    Units::Linear => x,
                };
                if !(v.is_finite() && v >= 0.0) {
                    return Err(self.error_at(name, format!("{x} is not a finite non-negative level")));
                }
                Ok(StateVariance::Finite(v))
            }
        }
    }

    pub fn formats(&self, cli: Option<&[Format]>) -> Vec<Format> {
        let mut f: Vec<Format> = match (cli, &self.config.formats) {
            (Some(f), _) => f.to_vec(),
            (None, Some(f)) => f.clone(),
            (None, None) => Format::ALL.to_vec(),
        };
        f.sort_unstable();
        f.dedup();
        f
    }

    /// Panels to draw; a config without panels has one named `main`.
    pub fn panels(&self) -> Vec<Panel> {
        if self.config.panels.is_empty() {
            vec![Panel { name: "main".into(), title: None, channel: ChannelSpec::default() }]
        } else {
            self.config.panels.clone()
        }
    }

    /// Curves of every panel; a config without overlays has one curve of
    /// the top-level model.
    pub fn overlays(&self) -> Vec<Overlay> {
        if self.config.overlays.is_empty() {
            vec![Overlay {
                label: None,
                model: None,
                channel: ChannelSpec::default(),
                sweep: SweepConfig::default(),
                points: None,
            }]
        } else {
            self.config.overlays.clone()
        }
    }
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}
