//! Experiment configuration: strict JSON schema plus eager physics
//! validation, so a typo'd key or an out-of-range parameter fails at load
//! time rather than mid-run.

use serde::{Deserialize, Serialize};

use phnet::lattice::{build_ladder, validate_network, ClusterSpec, Coupling, NetworkSpec};
use phnet::numeric::ComplexMatrix;
use phnet::{C64, Error as CoreError, Ladder64, Network64};

use crate::error::{CliError, Result};

/// Complete experiment description. Every section is required; unknown
/// keys anywhere are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub state: StateSection,
    pub evolution: EvolutionSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSection {
    /// PT-symmetric two-leg ladder by its four parameters.
    Ladder(LadderParams),
    /// General network: explicit cluster matrix, scale factors, couplings.
    Network(NetworkParams),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderParams {
    pub n: usize,
    pub j: f64,
    pub gamma: f64,
    pub kappa: f64,
}

/// Complex scalars appear in configs as `[re, im]` pairs.
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkParams {
    /// Cluster hopping matrix, row-major rows of `[re, im]` entries.
    pub cluster: Vec<Vec<ComplexPair>>,
    /// Per-cluster real scale factors; the length fixes the cluster count.
    pub scale: Vec<f64>,
    pub couplings: Vec<CouplingParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingParams {
    pub a: usize,
    pub b: usize,
    pub strength: ComplexPair,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSection {
    /// Two Gaussian packets (upper band at `n_a`, lower band at `n_b`).
    Gaussian(GaussianParams),
    /// One cluster eigenmode with per-cluster coefficients
    /// (uniform `1/sqrt(N)` when omitted).
    SingleMode(SingleModeParams),
    /// Explicit site amplitudes as `[re, im]` pairs, cluster-major.
    Amplitudes(Vec<ComplexPair>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianParams {
    pub n_a: usize,
    pub n_b: usize,
    pub phi_a: f64,
    pub phi_b: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleModeParams {
    /// Mode index in ascending-eigenvalue order.
    pub mode: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<ComplexPair>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    /// Horizon; defaults to two breathing periods for ladder models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    /// Number of samples on the uniform grid, including `t = 0`.
    pub samples: usize,
    /// Defaults to `spectral`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodParam>,
    /// RK4 step bound; ignored by the other methods.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodParam {
    Rk4,
    Expm,
    Spectral,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_norms_csv")]
    pub norms_csv: String,
    #[serde(default = "default_profiles_csv")]
    pub profiles_csv: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
}

fn default_norms_csv() -> String {
    "norms.csv".to_string()
}

fn default_profiles_csv() -> String {
    "profiles.csv".to_string()
}

/// Parse and validate a JSON experiment config.
///
/// Syntax problems surface as [`CliError::Parse`] with position, schema
/// violations (unknown or missing keys, wrong types) as
/// [`CliError::Schema`] naming the offender, and out-of-range physics
/// (an exceptional-point ladder, malformed couplings, bad packet
/// parameters) as [`CliError::Value`].
pub fn load_config(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
        if e.classify() == serde_json::error::Category::Data {
            CliError::Schema(e.to_string())
        } else {
            CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
        }
    })?;
    validate_physics(&config)?;
    Ok(config)
}

fn validate_physics(config: &ExperimentConfig) -> Result<()> {
    let net = config.model.build()?;

    match &config.state {
        StateSection::Gaussian(g) => {
            let ladder = match &config.model {
                ModelSection::Ladder(_) => config.model.ladder().unwrap(),
                ModelSection::Network(_) => {
                    return Err(CliError::Value(CoreError::Invalid(
                        "gaussian states require a ladder model".into(),
                    )))
                }
            };
            phnet::wavepacket::gaussian_kspace(&g.to_spec(), &ladder)?;
        }
        StateSection::SingleMode(s) => {
            if s.mode >= net.cluster_dim() {
                return Err(CliError::Value(CoreError::Invalid(format!(
                    "mode index {} out of range for cluster dimension {}",
                    s.mode,
                    net.cluster_dim()
                ))));
            }
            if let Some(c) = &s.coefficients {
                if c.len() != net.n_clusters {
                    return Err(CliError::Value(CoreError::Invalid(format!(
                        "{} coefficients for {} clusters",
                        c.len(),
                        net.n_clusters
                    ))));
                }
            }
        }
        StateSection::Amplitudes(a) => {
            if a.len() != net.total_dim() {
                return Err(CliError::Value(CoreError::Invalid(format!(
                    "{} amplitudes for total dimension {}",
                    a.len(),
                    net.total_dim()
                ))));
            }
        }
    }

    let evo = &config.evolution;
    if evo.samples == 0 {
        return Err(CliError::Value(CoreError::Invalid("samples must be >= 1".into())));
    }
    if let Some(t) = evo.t_max {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Value(CoreError::Invalid("t_max must be finite and > 0".into())));
        }
    } else if matches!(config.model, ModelSection::Network(_)) {
        return Err(CliError::Value(CoreError::Invalid(
            "t_max is required for general network models".into(),
        )));
    }
    if let Some(dt) = evo.dt {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(CliError::Value(CoreError::Invalid("dt must be finite and > 0".into())));
        }
    }
    Ok(())
}

impl ModelSection {
    /// Expand into the general network form, validating as we go.
    pub fn build(&self) -> Result<Network64> {
        match self {
            ModelSection::Ladder(p) => {
                let net = build_ladder(&p.to_spec())?;
                Ok(net)
            }
            ModelSection::Network(p) => {
                let rows: Vec<Vec<C64>> = p
                    .cluster
                    .iter()
                    .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
                    .collect();
                let cluster = ClusterSpec::new(ComplexMatrix::from_rows(&rows)?)?;
                let couplings = p
                    .couplings
                    .iter()
                    .map(|c| Coupling { a: c.a, b: c.b, strength: C64::new(c.strength[0], c.strength[1]) })
                    .collect();
                let net = NetworkSpec {
                    cluster,
                    n_clusters: p.scale.len(),
                    scale: p.scale.clone(),
                    couplings,
                };
                validate_network(&net)?;
                Ok(net)
            }
        }
    }

    /// Ladder parameters when this model is a ladder.
    pub fn ladder(&self) -> Option<Ladder64> {
        match self {
            ModelSection::Ladder(p) => Some(p.to_spec()),
            ModelSection::Network(_) => None,
        }
    }
}

impl LadderParams {
    pub fn to_spec(&self) -> Ladder64 {
        phnet::lattice::LadderSpec { n: self.n, j: self.j, gamma: self.gamma, kappa: self.kappa }
    }
}

impl GaussianParams {
    pub fn to_spec(&self) -> phnet::Gaussian64 {
        phnet::wavepacket::GaussianSpec {
            n_a: self.n_a,
            n_b: self.n_b,
            phi_a: self.phi_a,
            phi_b: self.phi_b,
            rho: self.rho,
        }
    }
}

impl MethodParam {
    pub fn to_method(self, dt: Option<f64>) -> phnet::dynamics::EvolveMethod<f64> {
        match self {
            MethodParam::Rk4 => phnet::dynamics::EvolveMethod::Rk4 { dt },
            MethodParam::Expm => phnet::dynamics::EvolveMethod::Expm,
            MethodParam::Spectral => phnet::dynamics::EvolveMethod::Spectral,
        }
    }
}
