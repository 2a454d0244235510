//! The pipeline stages, with settings merged from flags, config file and
//! defaults (in that order of precedence).

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thematic_core::bundle::{ingest, CorpusBundle, IngestConfig};
use thematic_core::corpus::{load_corpus, CorpusFormat};
use thematic_core::map::{build_theme_map, ClusterTarget, MapConfig};
use thematic_core::report::session_report;
use thematic_core::tokenize::english_stopwords;
use thematic_core::topic::{train_with_progress, LdaParams, TopicModel};
use thematic_core::vocab::VocabConfig;
use thematic_server::AppState;

use crate::config::{FileConfig, IngestSection, MapSection, TrainSection};
use crate::error::CliError;

/// Progress and results, printed as JSON lines with `--json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Loaded { stage: &'static str, items: usize },
    Excluded { doc_id: String, tokens: usize, required: usize },
    Sweep { sweep: usize, total: usize, log_likelihood: f64 },
    Wrote { stage: &'static str, path: PathBuf, hash: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub path: PathBuf,
    pub hash: String,
}

fn required<T>(value: Option<T>, what: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing {what} (pass it as a flag or set it in the config file)")))
}

fn merge<T: Clone>(flag: &Option<T>, file: &Option<T>) -> Option<T> {
    flag.clone().or_else(|| file.clone())
}

fn ensure_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(|e| {
            CliError::Data(thematic_core::Error::Io { path: dir.to_path_buf(), source: e })
        }),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestSettings {
    pub corpus: PathBuf,
    pub format: CorpusFormat,
    pub out: PathBuf,
    pub config: IngestConfig,
}

fn stopword_set(spec: &str) -> Result<BTreeSet<String>, CliError> {
    match spec {
        "english" => Ok(english_stopwords().clone()),
        "none" => Ok(BTreeSet::new()),
        path => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Data(thematic_core::Error::Io { path: path.into(), source: e })
            })?;
            Ok(text.lines().map(|l| l.trim().to_lowercase()).filter(|l| !l.is_empty()).collect())
        }
    }
}

impl IngestSettings {
    pub fn resolve(flags: &IngestSection, file: &IngestSection) -> Result<Self, CliError> {
        let defaults = IngestConfig::default();
        let format = match merge(&flags.format, &file.format) {
            Some(f) => f.parse().map_err(|e: thematic_core::Error| CliError::Usage(e.to_string()))?,
            None => CorpusFormat::Manifest,
        };
        let mut config = IngestConfig {
            chunk_count: merge(&flags.chunk_count, &file.chunk_count).unwrap_or(defaults.chunk_count),
            vocab: VocabConfig {
                min_df: merge(&flags.min_df, &file.min_df).unwrap_or(defaults.vocab.min_df),
                max_df_fraction: merge(&flags.max_df_fraction, &file.max_df_fraction)
                    .unwrap_or(defaults.vocab.max_df_fraction),
            },
            tokenizer: defaults.tokenizer,
        };
        config.tokenizer.min_len = merge(&flags.min_token_len, &file.min_token_len).unwrap_or(config.tokenizer.min_len);
        if let Some(spec) = merge(&flags.stopwords, &file.stopwords) {
            config.tokenizer.stopwords = stopword_set(&spec)?;
        }
        if config.chunk_count == 0 {
            return Err(CliError::Usage("chunk_count must be at least 1".into()));
        }
        config.vocab.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Self {
            corpus: required(merge(&flags.corpus, &file.corpus), "corpus path")?,
            format,
            out: required(merge(&flags.out, &file.out), "output path")?,
            config,
        })
    }
}

pub fn run_ingest(s: &IngestSettings, on: &mut dyn FnMut(Event)) -> Result<Artifact, CliError> {
    let docs = load_corpus(&s.corpus, s.format)?;
    on(Event::Loaded { stage: "ingest", items: docs.len() });
    let bundle = ingest(&docs, &s.config)?;
    for ex in &bundle.excluded {
        on(Event::Excluded { doc_id: ex.doc_id.clone(), tokens: ex.tokens, required: ex.required });
    }
    ensure_parent(&s.out)?;
    let hash = bundle.save(&s.out)?;
    on(Event::Wrote { stage: "ingest", path: s.out.clone(), hash: hash.clone() });
    Ok(Artifact { path: s.out.clone(), hash })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSettings {
    pub bundle: PathBuf,
    pub out: PathBuf,
    pub params: LdaParams,
}

impl TrainSettings {
    pub fn resolve(flags: &TrainSection, file: &TrainSection) -> Result<Self, CliError> {
        let d = LdaParams::default();
        let params = LdaParams {
            topics: merge(&flags.topics, &file.topics).unwrap_or(d.topics),
            alpha: merge(&flags.alpha, &file.alpha),
            beta: merge(&flags.beta, &file.beta).unwrap_or(d.beta),
            iterations: merge(&flags.iterations, &file.iterations).unwrap_or(d.iterations),
            seed: merge(&flags.seed, &file.seed).unwrap_or(d.seed),
        };
        if params.topics < 2 || params.iterations == 0 {
            return Err(CliError::Usage("need at least 2 topics and 1 iteration".into()));
        }
        if !(params.alpha() > 0.0 && params.beta > 0.0) {
            return Err(CliError::Usage("alpha and beta must be positive".into()));
        }
        Ok(Self {
            bundle: required(merge(&flags.bundle, &file.bundle), "corpus bundle path")?,
            out: required(merge(&flags.out, &file.out), "output path")?,
            params,
        })
    }
}

pub fn run_train(s: &TrainSettings, on: &mut dyn FnMut(Event)) -> Result<Artifact, CliError> {
    let (bundle, bundle_hash) = CorpusBundle::load(&s.bundle)?;
    on(Event::Loaded { stage: "train", items: bundle.num_chunks() });
    let total = s.params.iterations;
    let model = train_with_progress(&bundle, &bundle_hash, &s.params, |st| {
        on(Event::Sweep { sweep: st.sweep, total, log_likelihood: st.log_likelihood })
    })?;
    ensure_parent(&s.out)?;
    let hash = model.save(&s.out)?;
    on(Event::Wrote { stage: "train", path: s.out.clone(), hash: hash.clone() });
    Ok(Artifact { path: s.out.clone(), hash })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapSettings {
    pub model: PathBuf,
    pub out: PathBuf,
    pub config: MapConfig,
}

/// Parses `largest_gap`, a cluster count, or `height:<h>`.
pub fn parse_target(s: &str) -> Result<ClusterTarget, CliError> {
    let bad = || CliError::Usage(format!("bad cluster target {s:?} (use largest_gap, a count, or height:<h>)"));
    if s == "largest_gap" {
        Ok(ClusterTarget::LargestGap)
    } else if let Some(h) = s.strip_prefix("height:") {
        let h: f64 = h.parse().map_err(|_| bad())?;
        if !(0.0..=1.0).contains(&h) {
            return Err(bad());
        }
        Ok(ClusterTarget::Height(h))
    } else {
        let n: usize = s.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok(ClusterTarget::Count(n))
    }
}

impl MapSettings {
    pub fn resolve(flags: &MapSection, file: &MapSection) -> Result<Self, CliError> {
        let d = MapConfig::default();
        let target = match merge(&flags.target, &file.target) {
            None => d.target,
            Some(toml::Value::Integer(n)) if n > 0 => ClusterTarget::Count(n as usize),
            Some(toml::Value::String(s)) => parse_target(&s)?,
            Some(other) => return Err(CliError::Usage(format!("bad cluster target {other}"))),
        };
        let config = MapConfig {
            tau: merge(&flags.tau, &file.tau).unwrap_or(d.tau),
            target,
            top_terms: merge(&flags.top_terms, &file.top_terms).unwrap_or(d.top_terms),
        };
        config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Self {
            model: required(merge(&flags.model, &file.model), "model path")?,
            out: required(merge(&flags.out, &file.out), "output path")?,
            config,
        })
    }
}

pub fn run_map(s: &MapSettings, on: &mut dyn FnMut(Event)) -> Result<Artifact, CliError> {
    let (model, model_hash) = TopicModel::load(&s.model)?;
    on(Event::Loaded { stage: "map", items: model.topics });
    let map = build_theme_map(&model, &model_hash, &s.config)?;
    ensure_parent(&s.out)?;
    let hash = map.save(&s.out)?;
    on(Event::Wrote { stage: "map", path: s.out.clone(), hash: hash.clone() });
    Ok(Artifact { path: s.out.clone(), hash })
}

/// Writes the report for one session as pretty JSON.
pub fn run_export(file: &FileConfig, session_id: &str, out: &Path, on: &mut dyn FnMut(Event)) -> Result<Artifact, CliError> {
    let api = file.api_config()?;
    let state = AppState::load(&api)?;
    let session = state.sessions().get(session_id)?.clone();
    let report = session_report(&session, &state.bundle, &state.model, &state.model_hash, &state.excerpt_config)?;
    let mut bytes = serde_json::to_vec_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    bytes.push(b'\n');
    ensure_parent(out)?;
    fs::write(out, &bytes).map_err(|e| CliError::Data(thematic_core::Error::Io { path: out.into(), source: e }))?;
    let hash = thematic_core::content_hash(&bytes);
    on(Event::Wrote { stage: "export", path: out.to_path_buf(), hash: hash.clone() });
    Ok(Artifact { path: out.to_path_buf(), hash })
}

/// Paths of the three pipeline artifacts under `dir`.
pub fn artifact_paths(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    (dir.join("corpus.bin"), dir.join("model.bin"), dir.join("layout.json"))
}

/// ingest, train and map in one go, writing into `out_dir`.
pub fn run_pipeline(
    file: &FileConfig,
    corpus: Option<PathBuf>,
    out_dir: &Path,
    on: &mut dyn FnMut(Event),
) -> Result<[Artifact; 3], CliError> {
    let (bundle, model, layout) = artifact_paths(out_dir);
    let ingest = IngestSettings::resolve(&IngestSection { corpus, out: Some(bundle.clone()), ..Default::default() }, &file.ingest)?;
    let a = run_ingest(&ingest, on)?;
    let train = TrainSettings::resolve(&TrainSection { bundle: Some(bundle), out: Some(model.clone()), ..Default::default() }, &file.train)?;
    let b = run_train(&train, on)?;
    let map = MapSettings::resolve(&MapSection { model: Some(model), out: Some(layout), ..Default::default() }, &file.map)?;
    let c = run_map(&map, on)?;
    Ok([a, b, c])
}
