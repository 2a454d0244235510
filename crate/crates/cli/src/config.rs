//! The pipeline config file: TOML with one table per command. Relative paths
//! in the file are resolved against the file's directory.
//!
//! ```toml
//! [ingest]
//! corpus = "abstracts/manifest.jsonl"
//! out = "build/corpus.bin"
//! chunk_count = 30
//!
//! [train]
//! topics = 85
//! iterations = 1000
//! seed = 1
//!
//! [map]
//! target = "largest_gap"
//!
//! [serve]
//! bind = "127.0.0.1:8080"
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thematic_server::ApiConfig;

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IngestSection {
    pub corpus: Option<PathBuf>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub chunk_count: Option<usize>,
    pub min_df: Option<u32>,
    pub max_df_fraction: Option<f64>,
    pub min_token_len: Option<usize>,
    /// `"english"`, `"none"`, or a path to a file with one word per line.
    pub stopwords: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    pub bundle: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub topics: Option<usize>,
    pub iterations: Option<usize>,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSection {
    pub model: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tau: Option<f64>,
    /// `"largest_gap"`, a cluster count, or `"height:<h>"`.
    pub target: Option<toml::Value>,
    pub top_terms: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub ingest: IngestSection,
    pub train: TrainSection,
    pub map: MapSection,
    /// The `[serve]` table, kept raw until the artifact paths are known.
    pub serve: toml::Table,
    /// Directory relative paths are resolved against.
    pub base: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    ingest: IngestSection,
    #[serde(default)]
    train: TrainSection,
    #[serde(default)]
    map: MapSection,
    #[serde(default)]
    serve: toml::Table,
}

fn resolve(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p.as_mut().filter(|p| p.is_relative()) {
        *path = base.join(&*path);
    }
}

impl FileConfig {
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let raw: RawFile = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        let mut c = FileConfig {
            ingest: raw.ingest,
            train: raw.train,
            map: raw.map,
            serve: raw.serve,
            base: base.to_path_buf(),
        };
        for p in [
            &mut c.ingest.corpus,
            &mut c.ingest.out,
            &mut c.train.bundle,
            &mut c.train.out,
            &mut c.map.model,
            &mut c.map.out,
        ] {
            resolve(base, p);
        }
        if let Some(s) = c.ingest.stopwords.as_mut() {
            if s != "english" && s != "none" && Path::new(s.as_str()).is_relative() {
                *s = base.join(&*s).to_string_lossy().into_owned();
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Service config: `[serve]` entries, falling back to the artifact paths
    /// the other sections write.
    pub fn api_config(&self) -> Result<ApiConfig, CliError> {
        let mut table = self.serve.clone();
        let fallbacks = [
            ("model", &self.train.out),
            ("bundle", &self.ingest.out),
            ("layout", &self.map.out),
        ];
        for (key, path) in fallbacks {
            if let (false, Some(p)) = (table.contains_key(key), path) {
                table.insert(key.into(), toml::Value::String(p.to_string_lossy().into_owned()));
            }
        }
        for key in ["model", "bundle", "layout", "sessions"] {
            if !table.contains_key(key) {
                return Err(CliError::Usage(format!("config has no [serve] {key} path")));
            }
        }
        let text = toml::to_string(&table).map_err(|e| CliError::Internal(e.to_string()))?;
        ApiConfig::from_toml(&text, &self.base).map_err(CliError::from)
    }
}
