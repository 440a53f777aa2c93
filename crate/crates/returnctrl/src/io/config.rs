//! TOML run configuration. One file fully determines a run; command-line
//! flags override individual keys.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hum::HumConfig;
use crate::nonlinear::PicardConfig;
use crate::pde::SpaceTimeGrid;
use crate::trajectory::BumpConfig;
use crate::Kind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    BuildTrajectory,
    SolveControl,
    RunNonlinear,
    DemoObstruction,
    Observability,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::BuildTrajectory => "build-trajectory",
            Command::SolveControl => "solve-control",
            Command::RunNonlinear => "run-nonlinear",
            Command::DemoObstruction => "demo-obstruction",
            Command::Observability => "observability",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub nt: usize,
    pub t_final: f64,
    pub theta: f64,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            nx: 200,
            nt: 400,
            t_final: 0.5,
            theta: 0.5,
            x_lo: 0.0,
            x_hi: 1.0,
        }
    }
}

impl GridConfig {
    pub fn grid(&self) -> Result<SpaceTimeGrid> {
        SpaceTimeGrid::new(self.x_lo, self.x_hi, self.nx, self.t_final, self.nt, self.theta)
    }
}

/// Penalty sweep of `solve-control`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub enabled: bool,
    pub penalty_hi: f64,
    pub penalty_lo: f64,
    pub per_decade: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            enabled: true,
            penalty_hi: 1e-2,
            penalty_lo: 1e-8,
            per_decade: 1,
        }
    }
}

/// Initial data `c·(sin πx, sin πx)`; the complex kind adds `i·c/2·sin 2πx`
/// to both components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    /// absolute amplitude for `solve-control`
    pub control_amplitude: f64,
    /// amplitude for `run-nonlinear` as a fraction of `max|ū|`
    pub nonlinear_fraction: f64,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            control_amplitude: 1e-3,
            nonlinear_fraction: 4e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObstructionConfig {
    pub nx: usize,
    pub nt: usize,
    pub t_final: f64,
    pub reaction: f64,
    /// `g(u, v) = −c·u²`
    pub c: f64,
    pub n_controls: usize,
    /// standard deviation of the nodal control values
    pub amplitude: f64,
    /// `u0 = u0_amplitude·sin πx`; `v0 = sin πx`
    pub u0_amplitude: f64,
    pub omega: [f64; 2],
}

impl Default for ObstructionConfig {
    fn default() -> Self {
        ObstructionConfig {
            nx: 100,
            nt: 200,
            t_final: 0.5,
            reaction: 0.5,
            c: 1.0,
            n_controls: 32,
            amplitude: 5.0,
            u0_amplitude: 0.1,
            omega: [0.3, 0.6],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObservedCoefficients {
    /// linearization around the reference trajectory
    Trajectory,
    /// `a21 = 1`, all others zero
    Constant,
    /// `a21 ≡ 0`
    Decoupled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObservabilityConfig {
    pub coefficients: ObservedCoefficients,
    pub n_samples: usize,
    /// smaller run compared against `n_samples` for stability
    pub compare_samples: usize,
    /// observation set; `None` takes the control window's `ω₀`
    pub omega0: Option<[f64; 2]>,
}

impl Default for ObservabilityConfig {
    fn default() -> Self {
        ObservabilityConfig {
            coefficients: ObservedCoefficients::Trajectory,
            n_samples: 128,
            compare_samples: 64,
            omega0: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: bool,
    pub binary: bool,
    pub plots: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            csv: true,
            binary: true,
            plots: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub kind: Kind,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub grid: GridConfig,
    pub omega: [f64; 2],
    /// `c` in `g(u, v) = −c(u^p − v)`
    pub coupling_c: f64,
    /// `None`: the certified construction for `build-trajectory`, the
    /// resolvable one for the solver commands
    pub trajectory: Option<BumpConfig>,
    pub control: HumConfig,
    pub sweep: SweepConfig,
    pub data: DataConfig,
    pub picard: PicardConfig,
    pub obstruction: ObstructionConfig,
    pub observability: ObservabilityConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            kind: Kind::Cubic,
            seed: 1,
            out: None,
            grid: GridConfig::default(),
            omega: [0.2, 0.8],
            coupling_c: 1.0,
            trajectory: None,
            control: HumConfig::default(),
            sweep: SweepConfig::default(),
            data: DataConfig::default(),
            picard: PicardConfig::default(),
            obstruction: ObstructionConfig::default(),
            observability: ObservabilityConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Trajectory settings for `cmd`.
    pub fn bump(&self, cmd: Command) -> BumpConfig {
        match (self.trajectory, cmd) {
            (Some(b), _) => b,
            (None, Command::BuildTrajectory) => BumpConfig::default(),
            (None, _) => BumpConfig::resolvable(),
        }
    }

    /// Range checks before dispatch.
    pub fn validate(&self) -> Result<()> {
        self.grid.grid()?;
        let [a, b] = self.omega;
        if !(a >= self.grid.x_lo && b <= self.grid.x_hi && a < b) {
            return Err(Error::Config(format!(
                "omega ({a}, {b}) must lie inside ({}, {})",
                self.grid.x_lo, self.grid.x_hi
            )));
        }
        if !(self.coupling_c.is_finite() && self.coupling_c != 0.0) {
            return Err(Error::Config(format!("coupling_c must be finite and nonzero, got {}", self.coupling_c)));
        }
        if let Some(t) = &self.trajectory {
            t.validate()?;
        }
        self.control.validate()?;
        self.picard.control.validate()?;
        let s = &self.sweep;
        if s.enabled && !(s.penalty_hi > s.penalty_lo && s.penalty_lo > 0.0 && s.per_decade >= 1) {
            return Err(Error::Config(format!(
                "sweep needs penalty_hi > penalty_lo > 0 and per_decade >= 1, got {} {} {}",
                s.penalty_hi, s.penalty_lo, s.per_decade
            )));
        }
        if !(self.data.control_amplitude.is_finite() && self.data.nonlinear_fraction.is_finite()) {
            return Err(Error::Config("data amplitudes must be finite".into()));
        }
        let o = &self.obstruction;
        if o.n_controls == 0 || !(o.amplitude >= 0.0) {
            return Err(Error::Config("obstruction needs n_controls >= 1 and amplitude >= 0".into()));
        }
        let ob = &self.observability;
        if ob.n_samples == 0 || ob.compare_samples == 0 || ob.compare_samples > ob.n_samples {
            return Err(Error::Config(format!(
                "observability needs 1 <= compare_samples <= n_samples, got {} and {}",
                ob.compare_samples, ob.n_samples
            )));
        }
        Ok(())
    }
}
