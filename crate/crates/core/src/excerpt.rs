//! Excerpt maps: a smaller thematic map over only the themes relevant to a
//! handful of selected papers.
//!
//! Similarity between the kept themes is taken from the full corpus, not
//! from the selection alone, so that clusters are not built from a
//! co-occurrence signal over six papers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{assemble_map, model_similarity, ClusterTarget, Palette, ThemeMap, ThemeSimilarityMatrix};
use crate::topic::TopicModel;
use crate::wheel::{build_multi_theme_wheel, ThemeWheel};

pub const DEFAULT_MAX_SELECTION: usize = 6;
pub const DEFAULT_INCLUSION_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcerptConfig {
    /// Paper-level weight a theme needs in some selected paper to be kept.
    pub theta_min: f64,
    pub max_selection: usize,
    /// Presence threshold for the co-occurrence similarity.
    pub tau: f64,
    pub target: ClusterTarget,
    pub top_terms: usize,
}

impl Default for ExcerptConfig {
    fn default() -> Self {
        Self {
            theta_min: DEFAULT_INCLUSION_THRESHOLD,
            max_selection: DEFAULT_MAX_SELECTION,
            tau: crate::map::DEFAULT_PRESENCE_THRESHOLD,
            target: ClusterTarget::LargestGap,
            top_terms: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub doc_id: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThemeProvenance {
    pub theme_id: usize,
    /// Selected papers whose weight for the theme reaches the threshold.
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThemeSubset {
    pub theta_min: f64,
    /// Kept themes, ascending, each with its provenance.
    pub themes: Vec<ThemeProvenance>,
}

impl ThemeSubset {
    pub fn theme_ids(&self) -> Vec<usize> {
        self.themes.iter().map(|t| t.theme_id).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcerptMap {
    pub selection_id: String,
    pub selection: Vec<String>,
    pub map: ThemeMap,
    pub provenance: Vec<ThemeProvenance>,
}

/// Stable id for a selection, independent of the order papers were picked.
pub fn selection_id(selection: &[String]) -> String {
    let sorted: BTreeSet<&str> = selection.iter().map(String::as_str).collect();
    let joined = sorted.into_iter().collect::<Vec<_>>().join("\n");
    crate::content_hash(joined.as_bytes())[..16].to_owned()
}

/// Checks a selection against the size limit and the model's documents.
pub fn validate_selection(model: &TopicModel, selection: &[String], max_selection: usize) -> Result<()> {
    if selection.is_empty() {
        return Err(Error::Selection("selection is empty".into()));
    }
    if selection.len() > max_selection {
        return Err(Error::Selection(format!(
            "{} papers selected, at most {max_selection} allowed",
            selection.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for id in selection {
        if !seen.insert(id) {
            return Err(Error::Selection(format!("paper {id:?} selected twice")));
        }
        model.doc_index(id)?;
    }
    Ok(())
}

/// Themes whose paper-level weight reaches `theta_min` in at least one
/// selected paper, with the papers that justify each.
pub fn extract_relevant_themes(
    model: &TopicModel,
    selection: &[String],
    theta_min: f64,
    max_selection: usize,
) -> Result<ThemeSubset> {
    if theta_min.is_nan() || theta_min <= 0.0 {
        return Err(Error::Config(format!("inclusion threshold must be positive, got {theta_min}")));
    }
    validate_selection(model, selection, max_selection)?;
    let dists = selection
        .iter()
        .map(|id| model.paper_distribution(id))
        .collect::<Result<Vec<_>>>()?;
    let themes = (0..model.topics)
        .filter_map(|k| {
            let witnesses: Vec<Witness> = dists
                .iter()
                .filter(|d| d.weights[k] >= theta_min)
                .map(|d| Witness { doc_id: d.doc_id.clone(), weight: d.weights[k] })
                .collect();
            (!witnesses.is_empty()).then_some(ThemeProvenance { theme_id: k, witnesses })
        })
        .collect();
    Ok(ThemeSubset { theta_min, themes })
}

/// Re-clusters and re-lays out `subset` with fresh colours. `full` is the
/// similarity matrix over all of the model's themes.
pub fn build_excerpt_map(
    subset: &ThemeSubset,
    selection: &[String],
    model: &TopicModel,
    model_hash: &str,
    full: &ThemeSimilarityMatrix,
    config: &ExcerptConfig,
) -> Result<ExcerptMap> {
    let ids = subset.theme_ids();
    if ids.is_empty() {
        return Err(Error::Selection("no theme reaches the inclusion threshold in the selected papers".into()));
    }
    let s = full.restrict(&ids);
    let map = assemble_map(model, model_hash, &ids, &s, config.target, Palette::Excerpt, config.top_terms)?;
    Ok(ExcerptMap {
        selection_id: selection_id(selection),
        selection: selection.to_vec(),
        map,
        provenance: subset.themes.clone(),
    })
}

/// Extraction and map building in one step, computing the full similarity.
pub fn excerpt_for_selection(
    model: &TopicModel,
    model_hash: &str,
    selection: &[String],
    config: &ExcerptConfig,
) -> Result<ExcerptMap> {
    let subset = extract_relevant_themes(model, selection, config.theta_min, config.max_selection)?;
    let full = model_similarity(model, config.tau);
    build_excerpt_map(&subset, selection, model, model_hash, &full, config)
}

/// Multi-theme wheels for the selected papers, coloured with the excerpt
/// map's palette. Each segment's dominant theme is taken over the excerpt's
/// themes only.
pub fn excerpt_wheels(model: &TopicModel, excerpt: &ExcerptMap) -> Result<Vec<ThemeWheel>> {
    let colors = excerpt.map.colors_by_theme(model.topics);
    excerpt
        .selection
        .iter()
        .map(|id| build_multi_theme_wheel(model, id, &colors))
        .collect()
}
