//! The thematic map: themes clustered by co-occurrence and laid out as
//! groups of hexagons, one colour per cluster.

pub mod cluster;
pub mod hex;
pub mod palette;
pub mod similarity;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use cluster::{agglomerative_cluster, ClusterTarget, ClusterTree, Merge, TIE_RESOLUTION};
pub use hex::{hex_layout, Hex, HexLayout};
pub use palette::{assign_colors, Palette};
pub use similarity::{theme_cooccurrence, ThemeSimilarityMatrix, DEFAULT_PRESENCE_THRESHOLD};

use crate::error::{Error, Result};
use crate::topic::TopicModel;

pub const MAP_FORMAT: &str = "thematic-map";
pub const MAP_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapConfig {
    /// Paper-level weight at which a theme counts as present in a paper.
    pub tau: f64,
    pub target: ClusterTarget,
    /// Word-cloud terms stored per theme.
    pub top_terms: usize,
}

impl Default for MapConfig {
    fn default() -> Self {
        Self {
            tau: DEFAULT_PRESENCE_THRESHOLD,
            target: ClusterTarget::LargestGap,
            top_terms: 10,
        }
    }
}

impl MapConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::Config(format!("presence threshold must lie in (0, 1), got {}", self.tau)));
        }
        if self.top_terms == 0 {
            return Err(Error::Config("top_terms must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermWeight {
    pub term: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapTheme {
    pub theme_id: usize,
    pub label: String,
    pub top_terms: Vec<TermWeight>,
    pub q: i32,
    pub r: i32,
    pub cluster: usize,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapCluster {
    pub cluster_id: usize,
    pub color: String,
    pub theme_ids: Vec<usize>,
    pub centroid: [f64; 2],
}

/// Serialized map, shared by the full map and excerpt maps.
///
/// `merges` refer to positions in `themes` (leaf `i` is `themes[i]`), and
/// `similarity` is indexed the same way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThemeMap {
    pub format: String,
    pub version: u32,
    pub model_hash: String,
    pub tau: f64,
    pub palette: Palette,
    pub themes: Vec<MapTheme>,
    pub clusters: Vec<MapCluster>,
    pub merges: Vec<Merge>,
    pub similarity: Vec<Vec<f64>>,
    /// Theme ids present in no paper at the threshold.
    pub empty_themes: Vec<usize>,
}

impl ThemeMap {
    pub fn theme(&self, theme_id: usize) -> Option<&MapTheme> {
        self.themes.iter().find(|t| t.theme_id == theme_id)
    }

    pub fn theme_ids(&self) -> Vec<usize> {
        self.themes.iter().map(|t| t.theme_id).collect()
    }

    /// Cluster colour per theme id, `None` for themes not on this map.
    pub fn colors_by_theme(&self, topics: usize) -> Vec<Option<String>> {
        let mut out = vec![None; topics];
        for t in &self.themes {
            if t.theme_id < topics {
                out[t.theme_id] = Some(t.color.clone());
            }
        }
        out
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("map serializes");
        bytes.push(b'\n');
        bytes
    }

    pub fn save(&self, path: &Path) -> Result<String> {
        let bytes = self.to_json();
        fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;
        Ok(crate::content_hash(&bytes))
    }

    /// Loads a layout artifact, returning it with the file's raw bytes.
    pub fn load(path: &Path) -> Result<(Self, Vec<u8>)> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let map: ThemeMap = serde_json::from_slice(&bytes).map_err(|e| Error::malformed(path, e.to_string()))?;
        if map.format != MAP_FORMAT || map.version != MAP_VERSION {
            return Err(Error::malformed(
                path,
                format!("expected {MAP_FORMAT} v{MAP_VERSION}, found {} v{}", map.format, map.version),
            ));
        }
        Ok((map, bytes))
    }
}

/// Clusters, lays out and colours the themes `theme_ids`, whose similarity
/// matrix (rows in the same order) is `s`.
pub fn assemble_map(
    model: &TopicModel,
    model_hash: &str,
    theme_ids: &[usize],
    s: &ThemeSimilarityMatrix,
    target: ClusterTarget,
    palette: Palette,
    top_terms: usize,
) -> Result<ThemeMap> {
    assert_eq!(theme_ids.len(), s.len(), "similarity rows must match theme ids");
    if theme_ids.is_empty() {
        return Err(Error::Config("cannot build a map with no themes".into()));
    }
    if let ClusterTarget::Count(c) = target {
        if c == 0 || c > theme_ids.len() {
            return Err(Error::Config(format!(
                "target cluster count {c} outside 1..={}",
                theme_ids.len()
            )));
        }
    }
    let tree = agglomerative_cluster(s, target);
    let layout = hex_layout(&tree, s);
    let colors = assign_colors(&tree, palette);

    let themes = theme_ids
        .iter()
        .enumerate()
        .map(|(i, &theme_id)| {
            let theme = model.top_words(theme_id, top_terms)?;
            let cell = &layout.cells[i];
            Ok(MapTheme {
                theme_id,
                label: theme.auto_label,
                top_terms: theme
                    .top_terms
                    .into_iter()
                    .map(|(term, weight)| TermWeight { term, weight })
                    .collect(),
                q: cell.hex.q,
                r: cell.hex.r,
                cluster: cell.cluster,
                color: colors[cell.cluster].clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let clusters = tree
        .clusters()
        .into_iter()
        .enumerate()
        .map(|(c, members)| MapCluster {
            cluster_id: c,
            color: colors[c].clone(),
            theme_ids: members.into_iter().map(|i| theme_ids[i]).collect(),
            centroid: [layout.centroids[c].0, layout.centroids[c].1],
        })
        .collect();
    Ok(ThemeMap {
        format: MAP_FORMAT.to_owned(),
        version: MAP_VERSION,
        model_hash: model_hash.to_owned(),
        tau: s.tau,
        palette,
        themes,
        clusters,
        merges: tree.merges,
        similarity: s.values.clone(),
        empty_themes: s.empty_themes.iter().map(|&i| theme_ids[i]).collect(),
    })
}

/// Similarity over every paper of the model.
pub fn model_similarity(model: &TopicModel, tau: f64) -> ThemeSimilarityMatrix {
    let papers: Vec<Vec<f64>> = model.paper_distributions().into_iter().map(|p| p.weights).collect();
    theme_cooccurrence(&papers, model.topics, tau)
}

/// The full map over every theme of `model`.
pub fn build_theme_map(model: &TopicModel, model_hash: &str, config: &MapConfig) -> Result<ThemeMap> {
    config.validate()?;
    let s = model_similarity(model, config.tau);
    let ids: Vec<usize> = (0..model.topics).collect();
    assemble_map(model, model_hash, &ids, &s, config.target, Palette::Overview, config.top_terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topic::fixture;

    #[test]
    fn full_map_shape_and_round_trip() {
        // Four papers, one chunk each, three themes.
        let theta = vec![
            0.8, 0.15, 0.05, //
            0.7, 0.25, 0.05, //
            0.02, 0.03, 0.95, //
            0.02, 0.9, 0.08,
        ];
        let model = fixture(theta, 3, 1, &["a", "b", "c", "d"]);
        let map = build_theme_map(&model, "h", &MapConfig::default()).unwrap();
        assert_eq!(map.theme_ids(), vec![0, 1, 2]);
        let coords: std::collections::HashSet<_> = map.themes.iter().map(|t| (t.q, t.r)).collect();
        assert_eq!(coords.len(), 3);
        for t in &map.themes {
            assert_eq!(t.color, map.clusters[t.cluster].color);
        }
        let back: ThemeMap = serde_json::from_slice(&map.to_json()).unwrap();
        assert_eq!(back, map);
    }

    #[test]
    fn bad_threshold_rejected() {
        let model = fixture(vec![0.5, 0.5], 2, 1, &["a"]);
        for tau in [0.0, 1.0, -0.5] {
            let cfg = MapConfig { tau, ..MapConfig::default() };
            assert!(build_theme_map(&model, "h", &cfg).is_err());
        }
    }
}
