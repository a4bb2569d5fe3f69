//! JSON scenario configuration. Unknown keys are a hard error so typos fail
//! loudly instead of silently falling back to defaults.

use std::path::PathBuf;

use serde::Deserialize;

use oscnet::gaussian::InitialExcitation;
use oscnet::topology::{CouplingModel, CouplingProfile, DiagonalMode, NetworkKind, NetworkSpec};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub network: NetworkConfig,
    pub input: InputConfig,
    pub time: TimeConfig,
    pub measures: Vec<MeasureName>,
    pub pairs: PairMode,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub kind: KindName,
    pub m_in: usize,
    pub m_out: usize,
    #[serde(default)]
    pub n_arms: Option<usize>,
    pub c: f64,
    #[serde(default)]
    pub profile: ProfileName,
    #[serde(default)]
    pub diagonal: DiagonalName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindName {
    Chain,
    Y,
    Star,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ProfileName {
    #[default]
    Engineered,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalName {
    #[default]
    Unit,
    Cloning,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub kind: InputKind,
    pub z: f64,
    /// 0-based mode indices; defaults to the input head (squeezed/thermal)
    /// or the two input-arm heads of an x network (two_mode_squeezed).
    #[serde(default)]
    pub target_sites: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Squeezed,
    Thermal,
    TwoModeSqueezed,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureName {
    LogNegativity,
    Entropy,
    Fidelity,
    PurityDefect,
    Energy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    Ends,
    AllPositions,
}

impl ScenarioConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: ScenarioConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.time.steps < 1 {
            return Err(CliError::Config("time.steps must be >= 1".into()));
        }
        if !(self.time.t_max > 0.0) {
            return Err(CliError::Config("time.t_max must be positive".into()));
        }
        if self.measures.is_empty() {
            return Err(CliError::Config("measures must not be empty".into()));
        }
        Ok(())
    }

    pub fn wants(&self, m: MeasureName) -> bool {
        self.measures.contains(&m)
    }
}

impl NetworkConfig {
    pub fn to_spec(&self) -> Result<NetworkSpec, CliError> {
        let kind = match self.kind {
            KindName::Chain => NetworkKind::Chain,
            KindName::Y => NetworkKind::Y,
            KindName::Star => NetworkKind::Star,
            KindName::X => NetworkKind::X,
        };
        let n_arms = match (self.kind, self.n_arms) {
            (KindName::Star, None) => {
                return Err(CliError::Config(
                    "star networks require network.n_arms".into(),
                ))
            }
            (_, Some(n)) => n,
            (KindName::Chain, None) => 1,
            (KindName::Y, None) | (KindName::X, None) => 2,
        };
        let spec = NetworkSpec {
            kind,
            m_in: self.m_in,
            m_out: self.m_out,
            n_arms,
            c: self.c,
            profile: match self.profile {
                ProfileName::Engineered => CouplingProfile::Engineered,
                ProfileName::Uniform => CouplingProfile::Uniform,
            },
            diagonal: match self.diagonal {
                DiagonalName::Unit => DiagonalMode::Unit,
                DiagonalName::Cloning => DiagonalMode::Cloning,
            },
        };
        spec.validate().map_err(CliError::from)?;
        Ok(spec)
    }
}

impl InputConfig {
    pub fn to_excitation(&self, model: &CouplingModel) -> Result<InitialExcitation, CliError> {
        let roles = model.site_roles();
        match self.kind {
            InputKind::Squeezed | InputKind::Thermal => {
                let site = match &self.target_sites {
                    None => roles.input_head(),
                    Some(v) if v.len() == 1 => v[0],
                    Some(v) => {
                        return Err(CliError::Config(format!(
                            "{:?} input takes exactly one target site, got {}",
                            self.kind,
                            v.len()
                        )))
                    }
                };
                Ok(match self.kind {
                    InputKind::Squeezed => InitialExcitation::Squeezed { z: self.z, site },
                    _ => InitialExcitation::Thermal { z: self.z, site },
                })
            }
            InputKind::TwoModeSqueezed => {
                let sites = match &self.target_sites {
                    None if roles.input_heads.len() == 2 => {
                        (roles.input_heads[0], roles.input_heads[1])
                    }
                    None => {
                        return Err(CliError::Config(
                            "two_mode_squeezed input needs explicit target_sites on this network"
                                .into(),
                        ))
                    }
                    Some(v) if v.len() == 2 => (v[0], v[1]),
                    Some(v) => {
                        return Err(CliError::Config(format!(
                            "two_mode_squeezed input takes exactly two target sites, got {}",
                            v.len()
                        )))
                    }
                };
                Ok(InitialExcitation::TwoModeSqueezed { z: self.z, sites })
            }
        }
    }
}
