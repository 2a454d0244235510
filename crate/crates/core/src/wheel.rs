//! Theme wheels: one donut segment per chunk, chunk 0 at twelve o'clock and
//! proceeding clockwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topic::{PaperThemeDistribution, TopicModel};

/// Intensities below this multiple of the chunk's smoothing floor render as
/// empty.
pub const TRACE_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WheelVariant {
    Multi,
    Single { theme_id: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WheelSegment {
    pub chunk: usize,
    /// Degrees clockwise from twelve o'clock.
    pub start_angle: f64,
    pub end_angle: f64,
    pub dominant_theme: usize,
    pub dominant_weight: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
    /// Weight of the wheel's theme in this chunk (single-theme wheels).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intensity: Option<f64>,
    /// Whether the intensity is indistinguishable from smoothing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<bool>,
    /// The chunk's full theme distribution (multi-theme wheels).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThemeWheel {
    pub doc_id: String,
    pub variant: WheelVariant,
    pub segments: Vec<WheelSegment>,
    /// Single-theme wheels only: every segment is a trace.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_only: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperRelevance {
    pub doc_id: String,
    pub theme_id: usize,
    pub relevance_percent: f64,
}

/// Index of the largest entry among `eligible` ones; ties go to the lower index.
fn argmax(row: &[f64], eligible: impl Fn(usize) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, &w) in row.iter().enumerate() {
        if eligible(k) && best.is_none_or(|b| w > row[b]) {
            best = Some(k);
        }
    }
    best
}

fn angles(chunk: usize, total: usize) -> (f64, f64) {
    let step = 360.0 / total as f64;
    (chunk as f64 * step, (chunk + 1) as f64 * step)
}

/// Multi-theme wheel. `colors[k]` is theme `k`'s cluster colour; each
/// segment is coloured by its dominant theme, taken over the themes that
/// have a colour. With a full map every theme is coloured and the dominant
/// theme is the chunk's argmax.
pub fn build_multi_theme_wheel(model: &TopicModel, doc_id: &str, colors: &[Option<String>]) -> Result<ThemeWheel> {
    if colors.len() < model.topics || colors.iter().all(Option::is_none) {
        return Err(Error::Config("wheel colours must cover the model's themes".into()));
    }
    let c = model.chunk_count;
    let segments = model
        .doc_chunk_rows(doc_id)?
        .enumerate()
        .map(|(i, row)| {
            let k = argmax(row, |k| colors[k].is_some()).expect("at least one coloured theme");
            let (start_angle, end_angle) = angles(i, c);
            WheelSegment {
                chunk: i,
                start_angle,
                end_angle,
                dominant_theme: k,
                dominant_weight: row[k],
                color: colors[k].clone(),
                intensity: None,
                trace: None,
                weights: Some(row.to_vec()),
            }
        })
        .collect();
    Ok(ThemeWheel {
        doc_id: doc_id.to_owned(),
        variant: WheelVariant::Multi,
        segments,
        trace_only: None,
    })
}

/// Single-theme wheel: each segment's intensity is the theme's weight in
/// that chunk.
pub fn build_single_theme_wheel(
    model: &TopicModel,
    doc_id: &str,
    theme_id: usize,
    color: Option<&str>,
) -> Result<ThemeWheel> {
    model.check_theme(theme_id)?;
    let first = model.doc_index(doc_id)? * model.chunk_count;
    let c = model.chunk_count;
    let segments: Vec<WheelSegment> = model
        .doc_chunk_rows(doc_id)?
        .enumerate()
        .map(|(i, row)| {
            let k = argmax(row, |_| true).expect("non-empty row");
            let intensity = row[theme_id];
            let (start_angle, end_angle) = angles(i, c);
            WheelSegment {
                chunk: i,
                start_angle,
                end_angle,
                dominant_theme: k,
                dominant_weight: row[k],
                color: color.map(str::to_owned),
                intensity: Some(intensity),
                trace: Some(intensity < TRACE_FACTOR * model.smoothing_floor(first + i)),
                weights: None,
            }
        })
        .collect();
    let trace_only = segments.iter().all(|s| s.trace == Some(true));
    Ok(ThemeWheel {
        doc_id: doc_id.to_owned(),
        variant: WheelVariant::Single { theme_id },
        segments,
        trace_only: Some(trace_only),
    })
}

/// Top `n` papers for a theme from precomputed paper distributions, by
/// descending relevance then ascending doc_id. Papers with zero weight are
/// left out.
pub fn rank_papers(papers: &[PaperThemeDistribution], theme_id: usize, n: usize) -> Result<Vec<PaperRelevance>> {
    if n == 0 {
        return Err(Error::Config("ranking needs n >= 1".into()));
    }
    let mut ranked: Vec<PaperRelevance> = papers
        .iter()
        .filter_map(|p| {
            let w = *p.weights.get(theme_id)?;
            (w > 0.0).then(|| PaperRelevance {
                doc_id: p.doc_id.clone(),
                theme_id,
                relevance_percent: (w * 100.0).clamp(0.0, 100.0),
            })
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.relevance_percent
            .total_cmp(&a.relevance_percent)
            .then_with(|| a.doc_id.cmp(&b.doc_id))
    });
    ranked.truncate(n);
    Ok(ranked)
}

pub fn rank_papers_for_theme(model: &TopicModel, theme_id: usize, n: usize) -> Result<Vec<PaperRelevance>> {
    model.check_theme(theme_id)?;
    rank_papers(&model.paper_distributions(), theme_id, n)
}
