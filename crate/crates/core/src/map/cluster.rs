//! Average-linkage agglomerative clustering over a similarity matrix.
//!
//! Each step merges the pair of clusters with the highest mean pairwise
//! similarity. Linkage values are compared on a grid of [`TIE_RESOLUTION`];
//! equal values go to the pair with the smallest `(lo, hi)`, where `lo` and
//! `hi` are the smallest theme ids of the two clusters and `lo < hi`.

use serde::{Deserialize, Serialize};

use super::similarity::ThemeSimilarityMatrix;

/// Linkage values closer than this are treated as tied.
pub const TIE_RESOLUTION: f64 = 1e-10;

/// Quantized linkage value used for comparisons.
pub fn linkage_key(similarity: f64) -> i64 {
    (similarity / TIE_RESOLUTION).round() as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterTarget {
    /// Stop when this many clusters remain.
    Count(usize),
    /// Apply every merge whose height (`1 - similarity`) is at most this.
    Height(f64),
    /// Cut where consecutive merge heights differ the most.
    LargestGap,
}

/// One merge. Node ids follow the usual dendrogram convention: leaves are
/// `0..n`, and merge `t` creates node `n + t`. `left` is the child holding the
/// smaller theme id.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    /// Average-linkage similarity between the two children.
    pub similarity: f64,
    /// `1 - similarity`, made non-decreasing across merges.
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterTree {
    pub leaves: usize,
    /// All `leaves - 1` merges, in order.
    pub merges: Vec<Merge>,
    /// Number of leading merges applied to form the clusters.
    pub applied: usize,
    /// Cluster id per leaf. Ids are numbered by smallest member.
    pub labels: Vec<usize>,
    /// Leaves in dendrogram order (left subtree first).
    pub leaf_order: Vec<usize>,
}

impl ClusterTree {
    pub fn n_clusters(&self) -> usize {
        self.leaves - self.applied
    }

    /// Members of each cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_clusters()];
        for (leaf, &c) in self.labels.iter().enumerate() {
            out[c].push(leaf);
        }
        out
    }

    /// Leaves under dendrogram node `node`, in dendrogram order.
    pub fn node_leaves(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            if n < self.leaves {
                out.push(n);
            } else {
                let m = &self.merges[n - self.leaves];
                stack.push(m.right);
                stack.push(m.left);
            }
        }
        out
    }
}

/// Builds the full dendrogram and cuts it according to `target`.
///
/// Panics if `target` asks for zero clusters or more clusters than themes.
pub fn agglomerative_cluster(s: &ThemeSimilarityMatrix, target: ClusterTarget) -> ClusterTree {
    let n = s.len();
    assert!(n >= 1, "cannot cluster an empty matrix");
    let merges = build_merges(s);
    let applied = match target {
        ClusterTarget::Count(c) => {
            assert!((1..=n).contains(&c), "cluster count {c} outside 1..={n}");
            n - c
        }
        ClusterTarget::Height(h) => merges.iter().take_while(|m| m.height <= h).count(),
        ClusterTarget::LargestGap => largest_gap_cut(&merges),
    };
    let labels = cut_labels(n, &merges, applied);
    let leaf_order = if n == 1 { vec![0] } else { Vec::new() };
    let mut tree = ClusterTree { leaves: n, merges, applied, labels, leaf_order };
    if n > 1 {
        tree.leaf_order = tree.node_leaves(2 * n - 2);
    }
    tree
}

// (linkage key, smallest-leaf pair, i, j, average similarity)
type Candidate = (i64, (usize, usize), usize, usize, f64);

fn build_merges(s: &ThemeSimilarityMatrix) -> Vec<Merge> {
    let n = s.len();
    // Slot i holds a live cluster: its dendrogram node, size and smallest leaf.
    let mut node: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut min_leaf: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];
    // Sum of pairwise similarities between the members of two live clusters.
    let mut sum: Vec<Vec<f64>> = s.values.clone();

    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    let mut last_height = f64::NEG_INFINITY;
    for t in 0..n.saturating_sub(1) {
        let mut best: Option<Candidate> = None;
        for i in (0..n).filter(|&i| alive[i]) {
            for j in (i + 1..n).filter(|&j| alive[j]) {
                let avg = sum[i][j] / (size[i] * size[j]) as f64;
                let key = linkage_key(avg);
                let ids = if min_leaf[i] < min_leaf[j] { (min_leaf[i], min_leaf[j]) } else { (min_leaf[j], min_leaf[i]) };
                let better = match &best {
                    None => true,
                    Some((bk, bids, ..)) => key > *bk || (key == *bk && ids < *bids),
                };
                if better {
                    best = Some((key, ids, i, j, avg));
                }
            }
        }
        let (_, _, i, j, avg) = best.expect("at least two live clusters");
        let (keep, gone) = if min_leaf[i] < min_leaf[j] { (i, j) } else { (j, i) };
        let height = (1.0 - avg).max(last_height);
        last_height = height;
        merges.push(Merge {
            left: node[keep],
            right: node[gone],
            similarity: avg,
            height,
            size: size[keep] + size[gone],
        });
        for k in 0..n {
            if alive[k] && k != keep && k != gone {
                sum[keep][k] += sum[gone][k];
                sum[k][keep] = sum[keep][k];
            }
        }
        alive[gone] = false;
        size[keep] += size[gone];
        min_leaf[keep] = min_leaf[keep].min(min_leaf[gone]);
        node[keep] = n + t;
    }
    merges
}

/// Number of merges to apply so the cut falls in the widest gap between
/// consecutive merge heights. The earliest widest gap wins.
fn largest_gap_cut(merges: &[Merge]) -> usize {
    if merges.len() < 2 {
        return merges.len();
    }
    let mut best = (f64::NEG_INFINITY, merges.len());
    for (i, w) in merges.windows(2).enumerate() {
        let gap = w[1].height - w[0].height;
        if gap > best.0 {
            best = (gap, i + 1);
        }
    }
    best.1
}

fn cut_labels(n: usize, merges: &[Merge], applied: usize) -> Vec<usize> {
    // Union-find over dendrogram nodes: every node points at its parent.
    let mut parent: Vec<usize> = (0..n + applied).collect();
    for (t, m) in merges.iter().take(applied).enumerate() {
        parent[m.left] = n + t;
        parent[m.right] = n + t;
    }
    let root = |mut x: usize| {
        while parent[x] != x {
            x = parent[x];
        }
        x
    };
    let roots: Vec<usize> = (0..n).map(root).collect();
    // Number clusters by first appearance, i.e. by smallest member.
    let mut ids = std::collections::HashMap::new();
    roots
        .iter()
        .map(|r| {
            let next = ids.len();
            *ids.entry(*r).or_insert(next)
        })
        .collect()
}
