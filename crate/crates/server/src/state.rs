use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};

use thematic_core::bundle::CorpusBundle;
use thematic_core::excerpt::{build_excerpt_map, excerpt_wheels, extract_relevant_themes, ExcerptConfig, ExcerptMap};
use thematic_core::map::{model_similarity, ThemeMap, ThemeSimilarityMatrix};
use thematic_core::session::{ConfigSnapshot, SessionStore, StoreSettings};
use thematic_core::topic::{PaperThemeDistribution, TopicModel};
use thematic_core::wheel::ThemeWheel;
use thematic_core::{content_hash, Error};

use crate::config::{ApiConfig, MAX_PAPERS};
use crate::error::StartupError;

/// Everything a request may read, loaded once at startup.
pub struct Artifacts {
    pub model: TopicModel,
    pub model_hash: String,
    pub bundle: CorpusBundle,
    pub map: ThemeMap,
    /// The layout file exactly as stored, served verbatim.
    pub map_bytes: Vec<u8>,
}

/// An excerpt map with the wheels of its selected papers.
pub struct ExcerptView {
    pub excerpt: ExcerptMap,
    pub wheels: Vec<ThemeWheel>,
}

pub struct AppState {
    pub model: TopicModel,
    pub model_hash: String,
    pub bundle: CorpusBundle,
    pub map: ThemeMap,
    pub map_bytes: Vec<u8>,
    pub papers: Vec<PaperThemeDistribution>,
    /// Full-map colour of each theme.
    pub colors: Vec<Option<String>>,
    pub similarity: ThemeSimilarityMatrix,
    pub excerpt_config: ExcerptConfig,
    sessions: Mutex<SessionStore>,
    excerpts: Mutex<HashMap<(String, String), Arc<ExcerptView>>>,
}

fn mismatch(msg: String) -> StartupError {
    StartupError::Core(Error::HashMismatch(msg))
}

impl Artifacts {
    pub fn load(config: &ApiConfig) -> Result<Self, StartupError> {
        let (model, model_hash) = TopicModel::load(&config.model)?;
        let (bundle, bundle_hash) = CorpusBundle::load(&config.bundle)?;
        let (map, map_bytes) = ThemeMap::load(&config.layout)?;
        if model.bundle_hash != bundle_hash {
            return Err(mismatch(format!(
                "model {} was trained on bundle {}, but {} has hash {bundle_hash}",
                config.model.display(),
                model.bundle_hash,
                config.bundle.display()
            )));
        }
        Ok(Self { model, model_hash, bundle, map, map_bytes })
    }
}

impl AppState {
    pub fn new(artifacts: Artifacts, config: &ApiConfig) -> Result<Self, StartupError> {
        config.validate()?;
        let Artifacts { model, model_hash, bundle, map, map_bytes } = artifacts;
        if model.topics == 0 || model.num_docs() == 0 {
            return Err(StartupError::Config("model has no themes or no papers".into()));
        }
        if model.num_docs() > MAX_PAPERS {
            return Err(StartupError::TooManyPapers { papers: model.num_docs(), limit: MAX_PAPERS });
        }
        if model_hash != content_hash(&model.to_bytes()) {
            return Err(mismatch("model hash does not match its contents".into()));
        }
        if model.vocab_hash != bundle.vocab.hash() {
            return Err(mismatch("model vocabulary differs from the bundle's".into()));
        }
        if map.model_hash != model_hash {
            return Err(mismatch(format!(
                "layout was built from model {}, loaded model is {model_hash}",
                map.model_hash
            )));
        }
        if model.doc_ids.iter().any(|id| bundle.doc(id).is_none()) || model.num_docs() != bundle.docs.len() {
            return Err(mismatch("model papers differ from the bundle's".into()));
        }
        let mut map_ids = map.theme_ids();
        map_ids.sort();
        if map_ids != (0..model.topics).collect::<Vec<_>>() {
            return Err(mismatch("layout does not cover every theme of the model".into()));
        }

        let settings = StoreSettings {
            snapshot: ConfigSnapshot {
                theta_min: config.theta_min,
                tau: config.tau,
                chunk_count: model.chunk_count,
                topics: model.topics,
                model_hash: model_hash.clone(),
            },
            max_selection: config.max_selection,
        };
        let store = SessionStore::open(&config.sessions, settings, model.doc_ids.iter().cloned())?;
        let excerpt_config = ExcerptConfig {
            theta_min: config.theta_min,
            tau: config.tau,
            max_selection: config.max_selection,
            ..ExcerptConfig::default()
        };
        Ok(Self {
            papers: model.paper_distributions(),
            colors: map.colors_by_theme(model.topics),
            similarity: model_similarity(&model, config.tau),
            model,
            model_hash,
            bundle,
            map,
            map_bytes,
            excerpt_config,
            sessions: Mutex::new(store),
            excerpts: Mutex::new(HashMap::new()),
        })
    }

    pub fn load(config: &ApiConfig) -> Result<Self, StartupError> {
        Self::new(Artifacts::load(config)?, config)
    }

    pub fn sessions(&self) -> MutexGuard<'_, SessionStore> {
        // A panic mid-update never leaves the store half-written, so the
        // data behind a poisoned lock is still consistent.
        self.sessions.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn excerpt_cache(&self) -> MutexGuard<'_, HashMap<(String, String), Arc<ExcerptView>>> {
        self.excerpts.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Excerpt map for a session's current selection, cached per
    /// (session, selection id).
    pub fn excerpt(&self, session_id: &str, selection: &[String]) -> thematic_core::Result<Arc<ExcerptView>> {
        let key = (session_id.to_owned(), thematic_core::excerpt::selection_id(selection));
        if let Some(hit) = self.excerpt_cache().get(&key) {
            // Same paper set picked in a different order keeps the map but
            // not the wheel order.
            if hit.excerpt.selection == selection {
                return Ok(hit.clone());
            }
        }
        let config = ExcerptConfig {
            max_selection: self.excerpt_config.max_selection.max(selection.len()),
            ..self.excerpt_config
        };
        let subset = extract_relevant_themes(&self.model, selection, config.theta_min, config.max_selection)?;
        let excerpt = build_excerpt_map(&subset, selection, &self.model, &self.model_hash, &self.similarity, &config)?;
        let wheels = excerpt_wheels(&self.model, &excerpt)?;
        let view = Arc::new(ExcerptView { excerpt, wheels });
        let mut cache = self.excerpt_cache();
        cache.retain(|(sid, _), _| sid != session_id);
        cache.insert(key, view.clone());
        Ok(view)
    }

    /// Drops cached excerpts of a session whose selection changed.
    pub fn forget_excerpts(&self, session_id: &str) {
        self.excerpt_cache().retain(|(sid, _), _| sid != session_id);
    }

    pub fn cached_excerpts(&self) -> usize {
        self.excerpt_cache().len()
    }
}
