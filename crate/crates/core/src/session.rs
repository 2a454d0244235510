//! Reading sessions: a user's paper selection, reading strategy and
//! title-reveal state, persisted in a single JSON file.
//!
//! Every accepted change rewrites the whole file through a temporary file in
//! the same directory followed by a rename, so the file on disk is always
//! either the old or the new state. Rejected changes touch nothing.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SESSIONS_FORMAT: &str = "thematic-sessions";
pub const SESSIONS_VERSION: u32 = 1;

/// Inclusive range of chunk indices a reader means to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentRange {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyEntry {
    pub doc_id: String,
    /// 1-based reading position.
    pub rank: usize,
    #[serde(default)]
    pub note: String,
    #[serde(default)]
    pub target_segments: Vec<SegmentRange>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub theta_min: f64,
    pub tau: f64,
    pub chunk_count: usize,
    pub topics: usize,
    pub model_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub session_id: String,
    /// Milliseconds since the Unix epoch.
    pub created_ms: i64,
    pub updated_ms: i64,
    /// Selected papers in the order they were chosen.
    pub selection: Vec<String>,
    pub reading_strategy: Vec<StrategyEntry>,
    pub titles_revealed: bool,
    pub config: ConfigSnapshot,
}

/// What new sessions are stamped with and what updates are checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct StoreSettings {
    pub snapshot: ConfigSnapshot,
    pub max_selection: usize,
}

#[derive(Serialize, Deserialize)]
struct StoreFile {
    format: String,
    version: u32,
    sessions: Vec<Session>,
}

pub struct SessionStore {
    path: PathBuf,
    settings: StoreSettings,
    modeled: BTreeSet<String>,
    sessions: BTreeMap<String, Session>,
}

fn now_ms() -> i64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as i64)
        .unwrap_or_default()
}

impl SessionStore {
    /// Opens the store at `path`, creating an empty one if the file does not
    /// exist yet. `modeled` lists the doc_ids a selection may contain.
    pub fn open(path: &Path, settings: StoreSettings, modeled: impl IntoIterator<Item = String>) -> Result<Self> {
        let sessions = if path.exists() {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            decode(&bytes).map_err(|msg| Error::malformed(path, msg))?
        } else {
            BTreeMap::new()
        };
        Ok(Self {
            path: path.to_path_buf(),
            settings,
            modeled: modeled.into_iter().collect(),
            sessions,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn settings(&self) -> &StoreSettings {
        &self.settings
    }

    pub fn get(&self, id: &str) -> Result<&Session> {
        self.sessions.get(id).ok_or_else(|| Error::UnknownSession(id.to_owned()))
    }

    pub fn sessions(&self) -> impl Iterator<Item = &Session> {
        self.sessions.values()
    }

    pub fn is_read_only(&self, session: &Session) -> bool {
        session.config.model_hash != self.settings.snapshot.model_hash
    }

    /// A new session with an empty selection and hidden titles.
    pub fn create_session(&mut self) -> Result<Session> {
        let now = now_ms();
        let session = Session {
            session_id: uuid::Uuid::new_v4().to_string(),
            created_ms: now,
            updated_ms: now,
            selection: Vec::new(),
            reading_strategy: Vec::new(),
            titles_revealed: false,
            config: self.settings.snapshot.clone(),
        };
        self.commit(session.clone())?;
        Ok(session)
    }

    /// Replaces the selection. Strategy entries for papers no longer selected
    /// are dropped and the remaining ranks closed up.
    pub fn update_selection(&mut self, id: &str, doc_ids: Vec<String>) -> Result<Session> {
        let mut session = self.writable(id)?.clone();
        self.check_selection(&doc_ids)?;
        session.reading_strategy.retain(|e| doc_ids.contains(&e.doc_id));
        session.reading_strategy.sort_by_key(|e| e.rank);
        for (i, e) in session.reading_strategy.iter_mut().enumerate() {
            e.rank = i + 1;
        }
        session.selection = doc_ids;
        self.touch_and_commit(session)
    }

    pub fn save_strategy(&mut self, id: &str, mut entries: Vec<StrategyEntry>) -> Result<Session> {
        let mut session = self.writable(id)?.clone();
        check_strategy(&session.selection, &entries, session.config.chunk_count)?;
        entries.sort_by_key(|e| e.rank);
        session.reading_strategy = entries;
        self.touch_and_commit(session)
    }

    /// One-way; revealing twice is a no-op.
    pub fn reveal_titles(&mut self, id: &str) -> Result<Session> {
        let session = self.writable(id)?;
        if session.titles_revealed {
            return Ok(session.clone());
        }
        let mut session = session.clone();
        session.titles_revealed = true;
        self.touch_and_commit(session)
    }

    /// Inserts a session as-is, e.g. one imported from another store.
    pub fn insert(&mut self, session: Session) -> Result<()> {
        self.commit(session)
    }

    fn writable(&self, id: &str) -> Result<&Session> {
        let session = self.get(id)?;
        if self.is_read_only(session) {
            return Err(Error::ReadOnlySession(id.to_owned()));
        }
        Ok(session)
    }

    fn check_selection(&self, doc_ids: &[String]) -> Result<()> {
        if doc_ids.len() > self.settings.max_selection {
            return Err(Error::Selection(format!(
                "{} papers selected, at most {} allowed",
                doc_ids.len(),
                self.settings.max_selection
            )));
        }
        let mut seen = BTreeSet::new();
        for id in doc_ids {
            if !seen.insert(id) {
                return Err(Error::Selection(format!("paper {id:?} selected twice")));
            }
            if !self.modeled.contains(id) {
                return Err(Error::UnknownDoc(id.clone()));
            }
        }
        Ok(())
    }

    fn touch_and_commit(&mut self, mut session: Session) -> Result<Session> {
        session.updated_ms = now_ms().max(session.updated_ms);
        self.commit(session.clone())?;
        Ok(session)
    }

    fn commit(&mut self, session: Session) -> Result<()> {
        let mut next = self.sessions.clone();
        next.insert(session.session_id.clone(), session);
        write_atomic(&self.path, &encode(&next))?;
        self.sessions = next;
        Ok(())
    }
}

fn check_strategy(selection: &[String], entries: &[StrategyEntry], chunk_count: usize) -> Result<()> {
    let mut docs = BTreeSet::new();
    let mut ranks = BTreeSet::new();
    for e in entries {
        if !selection.contains(&e.doc_id) {
            return Err(Error::Strategy(format!("paper {:?} is not in the selection", e.doc_id)));
        }
        if !docs.insert(&e.doc_id) {
            return Err(Error::Strategy(format!("paper {:?} appears twice", e.doc_id)));
        }
        if !ranks.insert(e.rank) {
            return Err(Error::Strategy(format!("rank {} is used twice", e.rank)));
        }
        for r in &e.target_segments {
            if r.start > r.end || r.end >= chunk_count {
                return Err(Error::Strategy(format!(
                    "segment range {}..={} invalid for {chunk_count} chunks",
                    r.start, r.end
                )));
            }
        }
    }
    if ranks.iter().copied().ne(1..=entries.len()) {
        return Err(Error::Strategy(format!("ranks must be exactly 1..={}", entries.len())));
    }
    Ok(())
}

fn encode(sessions: &BTreeMap<String, Session>) -> Vec<u8> {
    let file = StoreFile {
        format: SESSIONS_FORMAT.to_owned(),
        version: SESSIONS_VERSION,
        sessions: sessions.values().cloned().collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&file).expect("sessions serialize");
    bytes.push(b'\n');
    bytes
}

fn decode(bytes: &[u8]) -> std::result::Result<BTreeMap<String, Session>, String> {
    let file: StoreFile = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    if file.format != SESSIONS_FORMAT || file.version != SESSIONS_VERSION {
        return Err(format!(
            "expected {SESSIONS_FORMAT} v{SESSIONS_VERSION}, found {} v{}",
            file.format, file.version
        ));
    }
    Ok(file.sessions.into_iter().map(|s| (s.session_id.clone(), s)).collect())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
