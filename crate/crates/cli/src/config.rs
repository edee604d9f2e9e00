//! Run configuration. Every key has a default, so an empty file is a valid
//! config; command-line flags override file values.

use std::path::{Path, PathBuf};

use pauli_core::criteria::SeriesOptions;
use pauli_core::discretize::Identity;
use pauli_core::eigensolve::{ProxyOptions, SolverOptions};
use pauli_core::measure;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Weight expression, e.g. `|z1|^2 + |z2|^4`.
    pub weight: String,
    /// Complex dimension; inferred from the weight when absent.
    pub n: Option<usize>,
    /// Half-width of the box `[−L, L]^{2n}`.
    pub l: f64,
    /// Grid spacing.
    pub h: f64,
    pub output_dir: PathBuf,
    /// Worker threads; all available cores when absent.
    pub threads: Option<usize>,
    pub spectrum: SpectrumConfig,
    pub identity: IdentityConfig,
    pub doubling: DoublingConfig,
    pub criteria: SeriesOptions,
    pub proxy: ProxyConfig,
    pub landau: LandauConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            weight: "|z1|^2".into(),
            n: None,
            l: 6.0,
            h: 0.1,
            output_dir: PathBuf::from("out"),
            threads: None,
            spectrum: SpectrumConfig::default(),
            identity: IdentityConfig::default(),
            doubling: DoublingConfig::default(),
            criteria: SeriesOptions::default(),
            proxy: ProxyConfig::default(),
            landau: LandauConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    #[serde(rename = "pauli+")]
    PauliPlus,
    #[serde(rename = "pauli-")]
    PauliMinus,
    #[serde(rename = "dirac")]
    Dirac,
    #[serde(rename = "box00")]
    Box00,
    #[serde(rename = "box0n")]
    Box0n,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub operator: OperatorKind,
    /// Number of eigenpairs (for `dirac`: of `UU†`, reported as `±` pairs).
    pub k: usize,
    /// Matrix Market export of the assembled operator.
    pub dump_operator: Option<PathBuf>,
    pub solver: SolverOptions,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            operator: OperatorKind::PauliPlus,
            k: 6,
            dump_operator: None,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentityConfig {
    pub which: Vec<Identity>,
    /// Coarsest spacing; each further level halves it.
    pub h: f64,
    pub levels: usize,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        Self {
            which: vec![Identity::Box00, Identity::Box0n, Identity::DiracSquare],
            h: 0.2,
            levels: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DoublingConfig {
    /// Disk centers; the 9×9 lattice over `[−8, 8]²` when absent.
    pub centers: Option<Vec<[f64; 2]>>,
    pub radii: Vec<f64>,
    /// Gauss–Legendre nodes per direction.
    pub rule: usize,
    pub claimed_constant: Option<f64>,
}

impl Default for DoublingConfig {
    fn default() -> Self {
        Self {
            centers: None,
            radii: measure::DEFAULT_RADII.to_vec(),
            rule: measure::DEFAULT_RULE,
            claimed_constant: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProxyConfig {
    pub l_values: Vec<f64>,
    pub h: f64,
    /// Index of the tracked `P+` eigenvalue (1-based).
    pub k: usize,
    /// Counting level for `P+`.
    pub lambda: f64,
    pub kernel_tol: f64,
    pub solver: SolverOptions,
}

impl Default for ProxyConfig {
    fn default() -> Self {
        let o = ProxyOptions::default();
        Self {
            l_values: vec![4.0, 6.0, 8.0],
            h: 0.1,
            k: o.k,
            lambda: o.lambda,
            kernel_tol: o.kernel_tol,
            solver: o.solver,
        }
    }
}

impl ProxyConfig {
    pub fn options(&self) -> ProxyOptions {
        ProxyOptions {
            k: self.k,
            lambda: self.lambda,
            kernel_tol: self.kernel_tol,
            solver: SolverOptions {
                kernel_tol: self.kernel_tol,
                ..self.solver.clone()
            },
        }
    }
}

/// Parameters of the `landau` suite; its weights are fixed (`|z1|^2`, and
/// `|z1|^2 + |z2|^2` for the criteria check), so `weight` is ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LandauConfig {
    /// Box and spacing of the Landau-level spectrum.
    pub l: f64,
    pub h: f64,
    /// Box and coarsest spacing of the identity checks.
    pub identity_l: f64,
    pub identity_h: f64,
    pub identity_levels: usize,
    /// Box sweep for zero-mode and counting growth.
    pub sweep_l: Vec<f64>,
    pub sweep_h: f64,
    /// Counting level for `P+`.
    pub lambda: f64,
    pub kernel_tol: f64,
    pub solver: SolverOptions,
}

impl Default for LandauConfig {
    fn default() -> Self {
        Self {
            l: 8.0,
            h: 0.1,
            identity_l: 6.0,
            identity_h: 0.2,
            identity_levels: 3,
            sweep_l: vec![4.0, 6.0, 8.0],
            sweep_h: 0.1,
            lambda: 10.0,
            kernel_tol: 0.1,
            solver: SolverOptions::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable in TOML")
    }
}
