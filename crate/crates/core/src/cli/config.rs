use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CliError, CommonArgs};
use crate::manifold::{ThermoParams, R_MIN};
use crate::optimizer::OptimizerConfig;

pub const DEFAULT_MU: f64 = 0.01;

/// Full run configuration: defaults, then the `--config` file, then flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `t_c / t_f`; mutually exclusive with `tf`.
    pub mu: Option<f64>,
    pub tf: Option<f64>,
    pub gamma: f64,
    #[serde(rename = "Tx")]
    pub tx: f64,
    #[serde(rename = "Ty")]
    pub ty: f64,
    #[serde(rename = "kB")]
    pub kb: f64,
    pub ell_r: f64,
    pub optimizer: OptimizerConfig,
    pub n_particles: usize,
    /// Time step; `None` means `10⁻³ t_c`.
    pub dt: Option<f64>,
    pub seed: u64,
    pub mus: Vec<f64>,
    pub eta: Option<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mu: None,
            tf: None,
            gamma: 1.0,
            tx: 3.0,
            ty: 1.0,
            kb: 1.0,
            ell_r: 1.0,
            optimizer: OptimizerConfig::default(),
            n_particles: 20_000,
            dt: None,
            seed: 42,
            mus: Vec::new(),
            eta: None,
            r_min: R_MIN,
            r_max: 3.0,
            samples: 300,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Defaults, overridden by the file named in `args.config`, overridden by flags.
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let mut cfg = match &args.config {
            Some(p) => Self::load(p)?,
            None => RunConfig::default(),
        };
        if args.mu.is_some() && args.tf.is_some() {
            return Err(CliError::usage("give either --mu or --tf, not both"));
        }
        if let Some(mu) = args.mu {
            cfg.mu = Some(mu);
            cfg.tf = None;
        }
        if let Some(tf) = args.tf {
            cfg.tf = Some(tf);
            cfg.mu = None;
        }
        let set = |dst: &mut f64, src: Option<f64>| {
            if let Some(v) = src {
                *dst = v;
            }
        };
        set(&mut cfg.gamma, args.gamma);
        set(&mut cfg.tx, args.tx);
        set(&mut cfg.ty, args.ty);
        set(&mut cfg.kb, args.kb);
        set(&mut cfg.ell_r, args.ell_r);
        if let Some(n) = args.n_points {
            cfg.optimizer.n_points = n;
        }
        if let Some(n) = args.particles {
            cfg.n_particles = n;
        }
        if args.dt.is_some() {
            cfg.dt = args.dt;
        }
        if let Some(s) = args.seed {
            cfg.seed = s;
        }
        if args.eta.is_some() {
            cfg.eta = args.eta;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.mu.is_some() && self.tf.is_some() {
            return Err(CliError::usage("config sets both mu and tf; exactly one is allowed"));
        }
        if let Some(mu) = self.mu {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(CliError::usage(format!("mu must be > 0 (got {mu})")));
            }
        }
        self.params()?;
        self.optimizer.validate().map_err(CliError::from_lib)?;
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(CliError::usage(format!("dt must be > 0 (got {dt})")));
            }
        }
        if let Some(eta) = self.eta {
            if !(eta > 0.0 && eta < 1.0) {
                return Err(CliError::usage(format!("eta must lie in (0, 1) (got {eta})")));
            }
        }
        Ok(())
    }

    /// Whether the period was given explicitly rather than defaulted.
    pub fn has_period(&self) -> bool {
        self.mu.is_some() || self.tf.is_some()
    }

    pub fn params(&self) -> Result<ThermoParams, CliError> {
        let base =
            ThermoParams::new(self.gamma, self.tx, self.ty, self.kb, self.ell_r, 1.0).map_err(CliError::from_lib)?;
        let p = match (self.mu, self.tf) {
            (_, Some(tf)) => base.with_tf(tf),
            (mu, None) => base.with_mu(mu.unwrap_or(DEFAULT_MU)),
        };
        p.validate().map_err(CliError::from_lib)?;
        Ok(p)
    }

    pub fn dt(&self, params: &ThermoParams) -> f64 {
        self.dt.unwrap_or(1e-3 * params.t_c())
    }
}

/// Config echo stored in every output file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
}

impl Header {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Header {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: config.clone(),
        }
    }
}

pub fn output_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
