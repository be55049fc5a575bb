//! Run configuration: strict JSON with exactly these keys; unknown keys
//! are rejected so parameter typos surface instead of silently defaulting.

use lindblad_skin_core::model::{BoundaryCondition, SshParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<EvolveConfig>,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n_cells: usize,
    pub t1: f64,
    pub t2: f64,
    pub gamma_l: f64,
    pub gamma_g: f64,
    /// Loss/gain coupling angles in radians; omitted fields take the
    /// standard values theta = theta_p = pi/4, phi = -pi/2, phi_p = pi/2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_p: Option<f64>,
    pub boundary: Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Spectrum,
    Ness,
    Modes,
    Evolve,
    Kspace,
    SkinScan,
    OracleCheck,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Spectrum => "spectrum",
            Task::Ness => "ness",
            Task::Modes => "modes",
            Task::Evolve => "evolve",
            Task::Kspace => "kspace",
            Task::SkinScan => "skin-scan",
            Task::OracleCheck => "oracle-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub t_max: f64,
    pub samples: usize,
    pub initial: InitialState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    UnitFilling,
    Ness,
    /// Path to a JSON file holding the Majorana covariance as a 2N x 2N
    /// matrix of [re, im] pairs.
    CustomCovariance(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: String,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl RunConfig {
    pub fn params(&self) -> SshParams {
        let m = &self.model;
        let mut p = SshParams::standard(m.n_cells, m.t1, m.t2, m.gamma_l, m.gamma_g);
        if let Some(theta) = m.theta {
            p.theta = theta;
        }
        if let Some(phi) = m.phi {
            p.phi = phi;
        }
        if let Some(theta_p) = m.theta_p {
            p.theta_p = theta_p;
        }
        if let Some(phi_p) = m.phi_p {
            p.phi_p = phi_p;
        }
        p
    }

    pub fn boundary(&self) -> BoundaryCondition {
        match self.model.boundary {
            Boundary::Open => BoundaryCondition::Open,
            Boundary::Periodic => BoundaryCondition::Periodic,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(ev) = &self.evolve {
            if ev.samples < 2 {
                return Err("evolve.samples must be >= 2".into());
            }
            if !(ev.t_max > 0.0) {
                return Err("evolve.t_max must be > 0".into());
            }
        }
        if matches!(self.task, Task::Evolve | Task::Kspace) && self.evolve.is_none() {
            return Err(format!(
                "task {} requires the evolve section",
                self.task.name()
            ));
        }
        Ok(())
    }
}
