//! Independent reference implementations used as test oracles. Nothing here
//! calls into the code paths it checks.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Best one-to-one matching of estimated to true rows by exhaustive search,
/// returning the matching (`est[perm[k]]` pairs with `truth[k]`) and its mean
/// cosine.
pub fn best_assignment(truth: &[Vec<f64>], est: &[Vec<f64>]) -> (Vec<usize>, f64) {
    assert_eq!(truth.len(), est.len());
    let k = truth.len();
    let cos: Vec<Vec<f64>> = truth.iter().map(|t| est.iter().map(|e| cosine(t, e)).collect()).collect();
    permutations(k)
        .into_iter()
        .map(|p| {
            let mean = (0..k).map(|i| cos[i][p[i]]).sum::<f64>() / k as f64;
            (p, mean)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

/// Jaccard by explicit set intersection and union.
pub fn brute_jaccard(papers: &[Vec<f64>], topics: usize, tau: f64) -> Vec<Vec<f64>> {
    let sets: Vec<BTreeSet<usize>> = (0..topics)
        .map(|k| (0..papers.len()).filter(|&d| papers[d][k] >= tau).collect())
        .collect();
    (0..topics)
        .map(|i| {
            (0..topics)
                .map(|j| {
                    if i == j {
                        return 1.0;
                    }
                    let inter = sets[i].intersection(&sets[j]).count();
                    let union = sets[i].union(&sets[j]).count();
                    if union == 0 {
                        0.0
                    } else {
                        inter as f64 / union as f64
                    }
                })
                .collect()
        })
        .collect()
}

/// Output of the naive average-linkage oracle.
pub struct OracleClustering {
    /// Each merge as (members of the cluster with the smaller id, members of the other).
    pub merges: Vec<(Vec<usize>, Vec<usize>)>,
    /// Final clusters, each ascending, ordered by smallest member.
    pub clusters: Vec<Vec<usize>>,
}

/// Average linkage recomputing every cluster-pair mean from scratch at each
/// step. `resolution` is the tie grid the contract specifies.
pub fn oracle_average_linkage(s: &[Vec<f64>], target: usize, resolution: f64) -> OracleClustering {
    let mut clusters: Vec<Vec<usize>> = (0..s.len()).map(|i| vec![i]).collect();
    let mut merges = Vec::new();
    while clusters.len() > target {
        let mut best: Option<(i64, (usize, usize), usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in 0..clusters.len() {
                if clusters[a][0] >= clusters[b][0] {
                    continue;
                }
                let mut total = 0.0;
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        total += s[i][j];
                    }
                }
                let mean = total / (clusters[a].len() * clusters[b].len()) as f64;
                let key = (mean / resolution).round() as i64;
                let ids = (clusters[a][0], clusters[b][0]);
                let take = match best {
                    None => true,
                    Some((bk, bids, _, _)) => key > bk || (key == bk && ids < bids),
                };
                if take {
                    best = Some((key, ids, a, b));
                }
            }
        }
        let (_, _, a, b) = best.unwrap();
        let (left, right) = (clusters[a].clone(), clusters[b].clone());
        let mut joined: Vec<usize> = left.iter().chain(&right).copied().collect();
        joined.sort();
        merges.push((left, right));
        let (hi, lo) = if a > b { (a, b) } else { (b, a) };
        clusters.remove(hi);
        clusters[lo] = joined;
        clusters.sort_by_key(|c| c[0]);
    }
    OracleClustering { merges, clusters }
}

/// Full sort by (-relevance, doc_id), dropping zero weights.
pub fn oracle_rank(papers: &[(String, Vec<f64>)], theme: usize, n: usize) -> Vec<(String, f64)> {
    let mut all: Vec<(String, f64)> = papers
        .iter()
        .filter(|(_, w)| w[theme] > 0.0)
        .map(|(id, w)| (id.clone(), w[theme] * 100.0))
        .collect();
    all.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    all.truncate(n);
    all
}

fn hex_distance(a: (i32, i32), b: (i32, i32)) -> i32 {
    let dq = a.0 - b.0;
    let dr = a.1 - b.1;
    (dq.abs() + dr.abs() + (dq + dr).abs()) / 2
}

#[derive(Debug)]
pub struct LayoutCheck {
    pub distinct: bool,
    pub connected: bool,
    pub intra_mean: Option<f64>,
    pub inter_mean: Option<f64>,
}

impl LayoutCheck {
    pub fn separation_ok(&self) -> bool {
        match (self.intra_mean, self.inter_mean) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }

    pub fn ok(&self) -> bool {
        self.distinct && self.connected && self.separation_ok()
    }
}

/// Checks `(q, r, cluster)` cells for distinct coordinates, 6-connected
/// clusters, and mean intra-cluster vs inter-cluster hex distance.
pub fn check_layout(cells: &[(i32, i32, usize)]) -> LayoutCheck {
    let coords: HashSet<(i32, i32)> = cells.iter().map(|&(q, r, _)| (q, r)).collect();
    let distinct = coords.len() == cells.len();

    let mut by_cluster: HashMap<usize, Vec<(i32, i32)>> = HashMap::new();
    for &(q, r, c) in cells {
        by_cluster.entry(c).or_default().push((q, r));
    }
    let steps = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];
    let connected = by_cluster.values().all(|hexes| {
        let set: HashSet<(i32, i32)> = hexes.iter().copied().collect();
        let mut seen = HashSet::from([hexes[0]]);
        let mut stack = vec![hexes[0]];
        while let Some((q, r)) = stack.pop() {
            for (dq, dr) in steps {
                let nb = (q + dq, r + dr);
                if set.contains(&nb) && seen.insert(nb) {
                    stack.push(nb);
                }
            }
        }
        seen.len() == set.len()
    });

    let (mut intra, mut n_intra, mut inter, mut n_inter) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let d = f64::from(hex_distance((cells[i].0, cells[i].1), (cells[j].0, cells[j].1)));
            if cells[i].2 == cells[j].2 {
                intra += d;
                n_intra += 1;
            } else {
                inter += d;
                n_inter += 1;
            }
        }
    }
    LayoutCheck {
        distinct,
        connected,
        intra_mean: (n_intra > 0).then(|| intra / n_intra as f64),
        inter_mean: (n_inter > 0).then(|| inter / n_inter as f64),
    }
}

/// Symmetric matrix with unit diagonal. Half the time uniform noise, half the
/// time Jaccard over random sparse paper sets (which produces many exact ties).
#[allow(clippy::needless_range_loop)]
pub fn random_similarity(rng: &mut impl Rng, n: usize) -> Vec<Vec<f64>> {
    if rng.random_bool(0.5) {
        let mut s = vec![vec![1.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v: f64 = rng.random();
                s[i][j] = v;
                s[j][i] = v;
            }
        }
        s
    } else {
        let papers = rng.random_range(5..40);
        let dists: Vec<Vec<f64>> = (0..papers)
            .map(|_| (0..n).map(|_| if rng.random_bool(0.3) { 1.0 } else { 0.0 }).collect())
            .collect();
        brute_jaccard(&dists, n, 0.5)
    }
}
