//! Experiment configuration as read from JSON.

use std::path::{Path, PathBuf};

use rotvec_core::measures::SeedLayout;
use rotvec_core::pbracket::{ChordOptions, PbOptions};
use rotvec_core::suspension::TimeOneSearchOptions;
use rotvec_core::{
    Bump, ClosedOneForm, CohomologyClass, HamiltonianSpec, IntegrationOptions, PhaseSpace,
    ProfileBasis, SearchOptions, SpaceKind, SymplecticStructure, TrigSeries, TrigTerm,
};
use serde::{Deserialize, Serialize};
use serde_path_to_error::Segment;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// `pointer` is an RFC 6901 JSON pointer into the config document.
    #[error("invalid config at '{pointer}': {message}")]
    Invalid { pointer: String, message: String },
}

impl ConfigError {
    pub fn pointer(&self) -> Option<&str> {
        match self {
            Self::Invalid { pointer, .. } => Some(pointer),
            Self::Io { .. } => None,
        }
    }

    fn at(pointer: &str, message: impl Into<String>) -> Self {
        Self::Invalid {
            pointer: pointer.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Example1Bound,
    Example1Sharpness,
    Example3Twisted,
    PbUpper,
    Chord,
    NonautoSuspension,
    Custom,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        Self::Example1Bound,
        Self::Example1Sharpness,
        Self::Example3Twisted,
        Self::PbUpper,
        Self::Chord,
        Self::NonautoSuspension,
        Self::Custom,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Example1Bound => "example1-bound",
            Self::Example1Sharpness => "example1-sharpness",
            Self::Example3Twisted => "example3-twisted",
            Self::PbUpper => "pb-upper",
            Self::Chord => "chord",
            Self::NonautoSuspension => "nonauto-suspension",
            Self::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceConfig {
    Standard {
        #[serde(default = "one")]
        n: usize,
        #[serde(default)]
        cotangent: bool,
    },
    TwistedGamma {
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
    /// Explicit rows of the coefficient matrix `Ω`.
    Explicit {
        rows: Vec<Vec<f64>>,
        #[serde(default)]
        cotangent: bool,
    },
}

fn one() -> usize {
    1
}

pub fn default_gamma() -> f64 {
    2f64.sqrt() - 1.0
}

impl SpaceConfig {
    pub fn build(&self) -> rotvec_core::Result<PhaseSpace> {
        let kind = |cot: bool| {
            if cot {
                SpaceKind::CotangentOfTorus
            } else {
                SpaceKind::Torus
            }
        };
        match self {
            Self::Standard { n, cotangent } => Ok(PhaseSpace::new(
                kind(*cotangent),
                SymplecticStructure::standard(*n),
            )),
            Self::TwistedGamma { gamma } => PhaseSpace::twisted_torus(*gamma),
            Self::Explicit { rows, cotangent } => Ok(PhaseSpace::new(
                kind(*cotangent),
                SymplecticStructure::from_rows(rows)?,
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HamiltonianConfig {
    SinSquared {
        #[serde(default)]
        coord: usize,
    },
    ForcedSinSquared {
        #[serde(default)]
        coord: usize,
        eps: f64,
    },
    Fourier {
        #[serde(default)]
        constant: f64,
        terms: Vec<TrigTerm>,
    },
    Profile {
        #[serde(default)]
        coord: usize,
        pins: Vec<(f64, f64)>,
        n_modes: usize,
        #[serde(default)]
        slope_target: Option<f64>,
        #[serde(default)]
        basis: ProfileBasis,
    },
    Bump {
        coord: usize,
        center: f64,
        radius: f64,
        height: f64,
    },
    Sum {
        parts: Vec<HamiltonianConfig>,
    },
}

impl HamiltonianConfig {
    pub fn build(&self, dim: usize) -> rotvec_core::Result<HamiltonianSpec> {
        match self {
            Self::SinSquared { coord } => {
                check_coord(*coord, dim)?;
                Ok(HamiltonianSpec::sin_squared(dim, *coord))
            }
            Self::ForcedSinSquared { coord, eps } => {
                check_coord(*coord, dim)?;
                Ok(HamiltonianSpec::forced_sin_squared(dim, *coord, *eps))
            }
            Self::Fourier { constant, terms } => Ok(HamiltonianSpec::Fourier(TrigSeries::new(
                dim,
                *constant,
                terms.clone(),
            )?)),
            Self::Profile {
                coord,
                pins,
                n_modes,
                slope_target,
                basis,
            } => {
                let u = rotvec_core::make_pinned_profile_with(pins, *slope_target, *n_modes, *basis)?;
                HamiltonianSpec::profile(dim, *coord, u)
            }
            Self::Bump {
                coord,
                center,
                radius,
                height,
            } => HamiltonianSpec::bump(
                dim,
                Bump {
                    coord: *coord,
                    center: *center,
                    radius: *radius,
                    height: *height,
                },
            ),
            Self::Sum { parts } => HamiltonianSpec::sum(
                parts
                    .iter()
                    .map(|p| p.build(dim))
                    .collect::<rotvec_core::Result<_>>()?,
            ),
        }
    }
}

fn check_coord(coord: usize, dim: usize) -> rotvec_core::Result<()> {
    if coord < dim {
        Ok(())
    } else {
        Err(rotvec_core::Error::InvalidArgument(format!(
            "coordinate {coord} out of range for dimension {dim}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormConfig {
    /// Coefficients on `[dp₁..dpₙ, dq₁..dqₙ]`.
    pub class: Vec<f64>,
    /// Terms of the potential `g` of the exact part `dg`.
    #[serde(default)]
    pub potential: Vec<TrigTerm>,
}

impl FormConfig {
    pub fn build(&self) -> rotvec_core::Result<ClosedOneForm> {
        let dim = self.class.len();
        let class = CohomologyClass(self.class.clone());
        if self.potential.is_empty() {
            return Ok(ClosedOneForm::constant(class));
        }
        ClosedOneForm::new(class, Some(TrigSeries::new(dim, 0.0, self.potential.clone())?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeedConfig {
    pub resolution: usize,
    pub layout: SeedLayout,
}

impl Default for SeedConfig {
    fn default() -> Self {
        Self {
            resolution: 32,
            layout: SeedLayout::Full,
        }
    }
}

/// Optional lower and upper thresholds on the best pairing of a custom run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub min_best_value: Option<f64>,
    pub max_abs_value: Option<f64>,
}

/// A full experiment description. Every field except `experiment` has a
/// builtin default; fields that an experiment does not use are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub space: Option<SpaceConfig>,
    #[serde(default)]
    pub hamiltonian: Option<HamiltonianConfig>,
    #[serde(default)]
    pub form: Option<FormConfig>,
    #[serde(default)]
    pub seeds: Option<SeedConfig>,
    #[serde(default)]
    pub search: Option<SearchOptions>,
    #[serde(default)]
    pub time_one: Option<TimeOneSearchOptions>,
    #[serde(default)]
    pub integration: Option<IntegrationOptions>,
    #[serde(default)]
    pub optimizer: Option<PbOptions>,
    #[serde(default)]
    pub chord: Option<ChordOptions>,
    /// Odd modes of the profile family used by `example1-sharpness` and `pb-upper`.
    #[serde(default)]
    pub n_modes: Option<usize>,
    /// Momentum of the orbit followed by `example3-twisted`.
    #[serde(default)]
    pub p1: Option<f64>,
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub thresholds: Thresholds,
}

impl ExperimentConfig {
    pub fn builtin(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            seed: 0,
            out_dir: None,
            space: None,
            hamiltonian: None,
            form: None,
            seeds: None,
            search: None,
            time_one: None,
            integration: None,
            optimizer: None,
            chord: None,
            n_modes: None,
            p1: None,
            horizon: None,
            thresholds: Thresholds::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = json_pointer(e.path());
            ConfigError::at(&pointer, e.into_inner().to_string())
        })?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Semantic checks that the schema alone cannot express.
    pub fn check(&self) -> Result<(), ConfigError> {
        let space = match &self.space {
            Some(s) => Some(s.build().map_err(|e| ConfigError::at("/space", e.to_string()))?),
            None => None,
        };
        if let Some(o) = &self.integration {
            o.validate()
                .map_err(|e| ConfigError::at("/integration", e.to_string()))?;
        }
        if let Some(s) = &self.seeds {
            if s.resolution == 0 {
                return Err(ConfigError::at("/seeds/resolution", "must be positive"));
            }
        }
        if let Some(s) = &self.search {
            if !(s.t0 > 0.0 && s.t_max >= s.t0) {
                return Err(ConfigError::at("/search", "need 0 < t0 <= t_max"));
            }
        }
        if let Some(h) = self.horizon {
            if !(h > 0.0 && h.is_finite()) {
                return Err(ConfigError::at("/horizon", "must be positive"));
            }
        }
        if self.experiment == ExperimentKind::Custom {
            let space = space.ok_or_else(|| ConfigError::at("/space", "custom experiments need a space"))?;
            let dim = space.dim();
            let h = self
                .hamiltonian
                .as_ref()
                .ok_or_else(|| ConfigError::at("/hamiltonian", "custom experiments need a hamiltonian"))?;
            h.build(dim)
                .map_err(|e| ConfigError::at("/hamiltonian", e.to_string()))?;
            let form = self
                .form
                .as_ref()
                .ok_or_else(|| ConfigError::at("/form", "custom experiments need a form"))?;
            let alpha = form.build().map_err(|e| ConfigError::at("/form", e.to_string()))?;
            if alpha.dim() != dim {
                return Err(ConfigError::at(
                    "/form/class",
                    format!("expected {dim} coefficients, got {}", alpha.dim()),
                ));
            }
        }
        Ok(())
    }
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => {
                out.push('/');
                out.push_str(&key.replace('~', "~0").replace('/', "~1"));
            }
            Segment::Enum { .. } | Segment::Unknown => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_a_config_error() {
        let err = ExperimentConfig::from_json("").unwrap_err();
        assert_eq!(err.pointer(), Some(""));
    }

    #[test]
    fn pointer_names_the_offending_field() {
        let err = ExperimentConfig::from_json(
            r#"{"experiment": "custom", "integration": {"h": "fast"}}"#,
        )
        .unwrap_err();
        assert_eq!(err.pointer(), Some("/integration/h"));
        let err = ExperimentConfig::from_json(r#"{"experiment": "nope"}"#).unwrap_err();
        assert_eq!(err.pointer(), Some("/experiment"));
        let err = ExperimentConfig::from_json(
            r#"{"experiment": "custom", "hamiltonian": {"family": "fourier", "terms": [{"k": [1, "x"]}]}}"#,
        )
        .unwrap_err();
        // Tagged objects are buffered whole, so the pointer stops at the tagged object.
        assert_eq!(err.pointer(), Some("/hamiltonian"));
        assert!(err.to_string().contains("invalid type"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = ExperimentConfig::from_json(r#"{"experiment": "chord", "sead": 3}"#).unwrap_err();
        assert!(err.to_string().contains("sead"));
    }

    #[test]
    fn custom_needs_consistent_dimensions() {
        let err = ExperimentConfig::from_json(
            r#"{"experiment": "custom",
                "space": {"preset": "standard", "n": 2},
                "hamiltonian": {"family": "sin-squared"},
                "form": {"class": [0, 1]}}"#,
        )
        .unwrap_err();
        assert_eq!(err.pointer(), Some("/form/class"));
    }

    #[test]
    fn presets_build() {
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment": "custom",
                "space": {"preset": "twisted-gamma"},
                "hamiltonian": {"family": "sum", "parts": [
                    {"family": "sin-squared", "coord": 0},
                    {"family": "fourier", "terms": [{"k": [0, 1, 0, 0], "cos": 0.1}]}]},
                "form": {"class": [0, 0, 1, 0], "potential": [{"k": [0, 0, 1, 1], "sin": 0.2}]},
                "integration": {"h": 0.005}}"#,
        )
        .unwrap();
        let space = cfg.space.unwrap().build().unwrap();
        assert_eq!(space.dim(), 4);
        assert_eq!(cfg.integration.unwrap().fixed_point_max_iter, 50);
        let explicit = SpaceConfig::Explicit {
            rows: vec![vec![0.0, 1.0], vec![-1.0, 0.0]],
            cotangent: false,
        };
        assert_eq!(explicit.build().unwrap(), PhaseSpace::standard_torus(1));
    }
}
