#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use thematic_core::bundle::{ingest, IngestConfig};
use thematic_core::corpus::Document;
use thematic_core::map::{build_theme_map, MapConfig};
use thematic_core::topic::{train, LdaParams};
use thematic_server::{app, ApiConfig, AppState};
use tower::ServiceExt;

pub const TOPICS: usize = 6;
pub const PAPERS: usize = 40;

/// Title of paper `i`; unusual enough never to occur by accident.
pub fn title(i: usize) -> String {
    format!("Quixotic Heliograph Study {i:02}")
}

fn word(group: usize, i: usize) -> String {
    let letters = |n: usize| (b'a' + (n % 26) as u8) as char;
    format!("w{}{}{}", letters(group), letters(i), letters(i / 26))
}

pub fn documents() -> Vec<Document> {
    let mut state = 0x2545_f491_u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    (0..PAPERS)
        .map(|i| {
            // Each paper mixes two of six word groups.
            let (a, b) = (i % TOPICS, (i / TOPICS + i) % TOPICS);
            let words: Vec<String> = (0..120)
                .map(|j| {
                    let group = if j % 3 == 0 { b } else { a };
                    word(group, (next() % 15) as usize)
                })
                .collect();
            Document {
                doc_id: format!("doc{i:03}"),
                title: title(i),
                body: words.join(" "),
                metadata: BTreeMap::from([("venue".to_owned(), format!("V{}", i % 3))]),
            }
        })
        .collect()
}

/// Builds bundle, model and layout under `dir` and returns a config for them.
pub fn build_artifacts(dir: &Path) -> ApiConfig {
    let ingest_config = IngestConfig { chunk_count: 10, ..IngestConfig::default() };
    let bundle = ingest(&documents(), &ingest_config).unwrap();
    let bundle_path = dir.join("corpus.bin");
    let bundle_hash = bundle.save(&bundle_path).unwrap();
    let params = LdaParams { topics: TOPICS, alpha: Some(0.5), beta: 0.01, iterations: 40, seed: 7 };
    let model = train(&bundle, &bundle_hash, &params).unwrap();
    let model_path = dir.join("model.bin");
    let model_hash = model.save(&model_path).unwrap();
    let map = build_theme_map(&model, &model_hash, &MapConfig::default()).unwrap();
    let layout_path = dir.join("layout.json");
    map.save(&layout_path).unwrap();
    ApiConfig::new(model_path, bundle_path, layout_path, dir.join("sessions.json"))
}

pub struct Harness {
    pub dir: tempfile::TempDir,
    pub config: ApiConfig,
    pub state: Arc<AppState>,
    pub router: Router,
}

impl Harness {
    pub fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let config = build_artifacts(dir.path());
        Self::with_config(dir, config)
    }

    pub fn with_config(dir: tempfile::TempDir, config: ApiConfig) -> Self {
        let state = Arc::new(AppState::load(&config).unwrap());
        let router = app(state.clone(), &config).unwrap();
        Self { dir, config, state, router }
    }

    /// Restarts the service over the same files.
    pub fn restart(self) -> Self {
        let Harness { dir, config, .. } = self;
        Self::with_config(dir, config)
    }

    pub async fn call(&self, method: &str, uri: &str, body: Option<serde_json::Value>) -> (StatusCode, Vec<u8>) {
        let mut req = Request::builder().method(method).uri(uri);
        let body = match body {
            Some(v) => {
                req = req.header("content-type", "application/json");
                Body::from(serde_json::to_vec(&v).unwrap())
            }
            None => Body::empty(),
        };
        let resp = self.router.clone().oneshot(req.body(body).unwrap()).await.unwrap();
        let status = resp.status();
        let bytes = axum::body::to_bytes(resp.into_body(), usize::MAX).await.unwrap();
        (status, bytes.to_vec())
    }

    pub async fn json(&self, method: &str, uri: &str, body: Option<serde_json::Value>) -> (StatusCode, serde_json::Value) {
        let (status, bytes) = self.call(method, uri, body).await;
        let value = serde_json::from_slice(&bytes)
            .unwrap_or_else(|e| panic!("{method} {uri} returned non-JSON ({e}): {}", String::from_utf8_lossy(&bytes)));
        (status, value)
    }

    pub async fn new_session(&self) -> String {
        let (status, v) = self.json("POST", "/v1/sessions", None).await;
        assert_eq!(status, StatusCode::CREATED);
        v["session"]["session_id"].as_str().unwrap().to_owned()
    }
}
