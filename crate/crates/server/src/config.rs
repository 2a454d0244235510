use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thematic_core::excerpt::{DEFAULT_INCLUSION_THRESHOLD, DEFAULT_MAX_SELECTION};
use thematic_core::map::DEFAULT_PRESENCE_THRESHOLD;

use crate::error::StartupError;

/// Environment variables that override the matching config entries.
pub const ENV_BIND: &str = "THEMATIC_BIND";
pub const ENV_MODEL: &str = "THEMATIC_MODEL";
pub const ENV_BUNDLE: &str = "THEMATIC_BUNDLE";
pub const ENV_LAYOUT: &str = "THEMATIC_LAYOUT";
pub const ENV_SESSIONS: &str = "THEMATIC_SESSIONS";
pub const ENV_STATIC_DIR: &str = "THEMATIC_STATIC_DIR";

/// Largest corpus the service will load.
pub const MAX_PAPERS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApiConfig {
    #[serde(default = "default_bind")]
    pub bind: String,
    pub model: PathBuf,
    pub bundle: PathBuf,
    pub layout: PathBuf,
    pub sessions: PathBuf,
    /// Origins allowed to call the API from a browser. Empty disables CORS.
    #[serde(default)]
    pub cors_origins: Vec<String>,
    /// Directory of UI assets served at `/`.
    #[serde(default)]
    pub static_dir: Option<PathBuf>,
    #[serde(default = "default_theta_min")]
    pub theta_min: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_max_selection")]
    pub max_selection: usize,
}

fn default_bind() -> String {
    "127.0.0.1:8080".to_owned()
}

fn default_theta_min() -> f64 {
    DEFAULT_INCLUSION_THRESHOLD
}

fn default_tau() -> f64 {
    DEFAULT_PRESENCE_THRESHOLD
}

fn default_max_selection() -> usize {
    DEFAULT_MAX_SELECTION
}

impl ApiConfig {
    /// Config with default settings for the given artifact paths.
    pub fn new(model: PathBuf, bundle: PathBuf, layout: PathBuf, sessions: PathBuf) -> Self {
        Self {
            bind: default_bind(),
            model,
            bundle,
            layout,
            sessions,
            cors_origins: Vec::new(),
            static_dir: None,
            theta_min: default_theta_min(),
            tau: default_tau(),
            max_selection: default_max_selection(),
        }
    }

    /// Parses a TOML config. Relative paths are resolved against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self, StartupError> {
        let mut config: ApiConfig = toml::from_str(text).map_err(|e| StartupError::Config(e.to_string()))?;
        for p in [&mut config.model, &mut config.bundle, &mut config.layout, &mut config.sessions] {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if let Some(p) = config.static_dir.as_mut().filter(|p| p.is_relative()) {
            *p = base.join(&*p);
        }
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, StartupError> {
        let text = fs::read_to_string(path)
            .map_err(|e| StartupError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Applies overrides from `lookup`, normally `std::env::var`.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) {
        if let Some(v) = lookup(ENV_BIND) {
            self.bind = v;
        }
        for (key, slot) in [
            (ENV_MODEL, &mut self.model),
            (ENV_BUNDLE, &mut self.bundle),
            (ENV_LAYOUT, &mut self.layout),
            (ENV_SESSIONS, &mut self.sessions),
        ] {
            if let Some(v) = lookup(key) {
                *slot = PathBuf::from(v);
            }
        }
        if let Some(v) = lookup(ENV_STATIC_DIR) {
            self.static_dir = Some(PathBuf::from(v));
        }
    }

    pub fn validate(&self) -> Result<(), StartupError> {
        if !(self.theta_min > 0.0 && self.theta_min < 1.0) {
            return Err(StartupError::Config(format!("theta_min must lie in (0, 1), got {}", self.theta_min)));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(StartupError::Config(format!("tau must lie in (0, 1), got {}", self.tau)));
        }
        if self.max_selection == 0 {
            return Err(StartupError::Config("max_selection must be at least 1".into()));
        }
        Ok(())
    }
}
