//! Response bodies. Papers only ever appear as [`PaperView`]s, which carry a
//! title only once the requesting session has revealed titles.

use serde::{Deserialize, Serialize};
use thematic_core::excerpt::ExcerptMap;
use thematic_core::map::MapTheme;
use thematic_core::report::PaperView;
use thematic_core::session::{Session, StrategyEntry};
use thematic_core::wheel::ThemeWheel;

/// Papers listed with each theme.
pub const THEME_TOP_PAPERS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedPaper {
    pub paper: PaperView,
    pub relevance_percent: f64,
    /// Single-theme wheel for the listed theme.
    pub wheel: ThemeWheel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThemeDetail {
    pub theme: MapTheme,
    pub papers: Vec<RankedPaper>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperDetail {
    pub paper: PaperView,
    /// Paper-level theme weights, indexed by theme id.
    pub weights: Vec<f64>,
    pub wheel: ThemeWheel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub session: Session,
    pub papers: Vec<PaperView>,
    /// The session was saved against another model and cannot change.
    pub read_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcerptView {
    pub excerpt_map: ExcerptMap,
    pub wheels: Vec<ThemeWheel>,
    pub papers: Vec<PaperView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRequest {
    pub doc_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyRequest {
    pub entries: Vec<StrategyEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WheelKind {
    #[default]
    Multi,
    Single,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct WheelQuery {
    #[serde(default)]
    pub variant: WheelKind,
    pub theme: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct SessionQuery {
    pub session: Option<String>,
}
