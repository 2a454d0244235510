//! Paper views and session reports.
//!
//! [`PaperView::new`] is the only place a paper's title is copied into an
//! outgoing payload, and it does so only once the session has revealed
//! titles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bundle::CorpusBundle;
use crate::error::{Error, Result};
use crate::excerpt::{excerpt_for_selection, excerpt_wheels, ExcerptConfig, ExcerptMap};
use crate::session::Session;
use crate::topic::TopicModel;
use crate::wheel::ThemeWheel;

pub const REPORT_FORMAT: &str = "thematic-session-report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperView {
    pub doc_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub metadata: BTreeMap<String, String>,
}

impl PaperView {
    pub fn new(bundle: &CorpusBundle, doc_id: &str, titles_revealed: bool) -> Result<Self> {
        let doc = bundle.doc(doc_id).ok_or_else(|| Error::UnknownDoc(doc_id.to_owned()))?;
        Ok(Self {
            doc_id: doc.doc_id.clone(),
            title: titles_revealed.then(|| doc.title.clone()),
            metadata: doc.metadata.clone(),
        })
    }
}

/// A shareable document describing one session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionReport {
    pub format: String,
    pub version: u32,
    pub session: Session,
    pub papers: Vec<PaperView>,
    /// Absent when the selection is empty.
    pub excerpt_map: Option<ExcerptMap>,
    pub wheels: Vec<ThemeWheel>,
}

pub fn session_report(
    session: &Session,
    bundle: &CorpusBundle,
    model: &TopicModel,
    model_hash: &str,
    config: &ExcerptConfig,
) -> Result<SessionReport> {
    let papers = session
        .selection
        .iter()
        .map(|id| PaperView::new(bundle, id, session.titles_revealed))
        .collect::<Result<Vec<_>>>()?;
    let (excerpt_map, wheels) = if session.selection.is_empty() {
        (None, Vec::new())
    } else {
        let config = ExcerptConfig { max_selection: config.max_selection.max(session.selection.len()), ..*config };
        let excerpt = excerpt_for_selection(model, model_hash, &session.selection, &config)?;
        let wheels = excerpt_wheels(model, &excerpt)?;
        (Some(excerpt), wheels)
    };
    Ok(SessionReport {
        format: REPORT_FORMAT.to_owned(),
        version: REPORT_VERSION,
        session: session.clone(),
        papers,
        excerpt_map,
        wheels,
    })
}
