//! Theme-theme similarity from co-occurrence in papers.

use serde::{Deserialize, Serialize};

pub const DEFAULT_PRESENCE_THRESHOLD: f64 = 0.05;

/// Symmetric `n × n` similarity matrix with unit diagonal and entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThemeSimilarityMatrix {
    /// Presence threshold the matrix was computed with.
    pub tau: f64,
    pub values: Vec<Vec<f64>>,
    /// Row indices of themes present in no paper.
    pub empty_themes: Vec<usize>,
}

impl ThemeSimilarityMatrix {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    /// The sub-matrix over `rows`, in the given order.
    pub fn restrict(&self, rows: &[usize]) -> Self {
        let values = rows
            .iter()
            .map(|&i| rows.iter().map(|&j| self.values[i][j]).collect())
            .collect();
        let empty_themes = rows
            .iter()
            .enumerate()
            .filter(|(_, i)| self.empty_themes.contains(i))
            .map(|(pos, _)| pos)
            .collect();
        Self { tau: self.tau, values, empty_themes }
    }

    /// Builds a matrix from explicit values, checking the invariants.
    pub fn from_values(values: Vec<Vec<f64>>, tau: f64) -> Result<Self, String> {
        let n = values.len();
        for (i, row) in values.iter().enumerate() {
            if row.len() != n {
                return Err(format!("row {i} has {} entries, expected {n}", row.len()));
            }
            if row[i] != 1.0 {
                return Err(format!("diagonal entry {i} is {}", row[i]));
            }
            for (j, &s) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&s) || s != values[j][i] {
                    return Err(format!("entry ({i}, {j}) = {s} is out of range or asymmetric"));
                }
            }
        }
        Ok(Self { tau, values, empty_themes: Vec::new() })
    }
}

/// Jaccard similarity of the paper sets in which each theme is present.
///
/// `papers[d][k]` is paper `d`'s weight for theme `k`; theme `k` is present in
/// paper `d` when that weight is at least `tau`. The diagonal is 1 even for
/// themes present nowhere; such themes have similarity 0 to every other theme
/// and are listed in `empty_themes`.
pub fn theme_cooccurrence<W: AsRef<[f64]>>(papers: &[W], topics: usize, tau: f64) -> ThemeSimilarityMatrix {
    let words = papers.len().div_ceil(64);
    let mut present = vec![vec![0u64; words]; topics];
    for (d, weights) in papers.iter().enumerate() {
        for (k, &w) in weights.as_ref().iter().enumerate().take(topics) {
            if w >= tau {
                present[k][d / 64] |= 1 << (d % 64);
            }
        }
    }
    let counts: Vec<u32> = present.iter().map(|bits| bits.iter().map(|b| b.count_ones()).sum()).collect();
    let mut values = vec![vec![0.0; topics]; topics];
    for i in 0..topics {
        values[i][i] = 1.0;
        for j in i + 1..topics {
            let inter: u32 = present[i].iter().zip(&present[j]).map(|(a, b)| (a & b).count_ones()).sum();
            let union = counts[i] + counts[j] - inter;
            let s = if union == 0 { 0.0 } else { f64::from(inter) / f64::from(union) };
            values[i][j] = s;
            values[j][i] = s;
        }
    }
    let empty_themes = (0..topics).filter(|&k| counts[k] == 0).collect();
    ThemeSimilarityMatrix { tau, values, empty_themes }
}
