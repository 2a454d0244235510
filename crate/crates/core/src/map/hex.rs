//! Hexagonal layout of clustered themes.
//!
//! Coordinates are axial `(q, r)` on a pointy-top grid. Clusters are placed
//! one at a time in dendrogram merge order: the first at the origin, each
//! later one seated on the free border of the map where it sits closest to
//! the clusters it is most similar to. A cluster then grows from its seat,
//! always taking the free neighbouring hex nearest the seat, so it stays a
//! connected patch.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::cluster::ClusterTree;
use super::similarity::ThemeSimilarityMatrix;

/// Weight added to every cluster-cluster similarity when choosing seats, so
/// unrelated clusters still pack together.
const COMPACTNESS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hex {
    pub q: i32,
    pub r: i32,
}

/// Neighbour offsets, counter-clockwise starting east.
pub const DIRECTIONS: [Hex; 6] = [
    Hex { q: 1, r: 0 },
    Hex { q: 1, r: -1 },
    Hex { q: 0, r: -1 },
    Hex { q: -1, r: 0 },
    Hex { q: -1, r: 1 },
    Hex { q: 0, r: 1 },
];

impl std::ops::Add for Hex {
    type Output = Hex;

    fn add(self, o: Hex) -> Hex {
        Hex::new(self.q + o.q, self.r + o.r)
    }
}

impl Hex {
    pub const ORIGIN: Hex = Hex { q: 0, r: 0 };

    pub fn new(q: i32, r: i32) -> Self {
        Self { q, r }
    }

    pub fn scale(self, k: i32) -> Hex {
        Hex::new(self.q * k, self.r * k)
    }

    pub fn distance(self, o: Hex) -> i32 {
        let dq = self.q - o.q;
        let dr = self.r - o.r;
        (dq.abs() + dr.abs() + (dq + dr).abs()) / 2
    }

    pub fn neighbors(self) -> impl Iterator<Item = Hex> {
        DIRECTIONS.into_iter().map(move |d| self + d)
    }

    /// Centre of the hex in unit-size pointy-top pixel space.
    pub fn to_pixel(self) -> (f64, f64) {
        let (q, r) = (f64::from(self.q), f64::from(self.r));
        (3f64.sqrt() * (q + r / 2.0), 1.5 * r)
    }

    /// Position of this hex in the spiral around `center`: the center is 0,
    /// then ring 1 (starting south-west, walking counter-clockwise), ring 2...
    pub fn spiral_index(self, center: Hex) -> usize {
        let k = self.distance(center);
        if k == 0 {
            return 0;
        }
        let before = 1 + 3 * (k as usize) * (k as usize - 1);
        ring(center, k)
            .position(|h| h == self)
            .map(|p| before + p)
            .expect("hex lies on its own ring")
    }
}

/// Hexes at exactly distance `k >= 1` from `center`.
pub fn ring(center: Hex, k: i32) -> impl Iterator<Item = Hex> {
    let mut h = center + DIRECTIONS[4].scale(k);
    (0..6).flat_map(move |side| (0..k).map(move |_| side)).map(move |side| {
        let out = h;
        h = h + DIRECTIONS[side];
        out
    })
}

/// The first `n` hexes of the spiral around `center`.
pub fn spiral(center: Hex, n: usize) -> Vec<Hex> {
    let mut out = Vec::with_capacity(n);
    out.push(center);
    let mut k = 1;
    while out.len() < n {
        out.extend(ring(center, k));
        k += 1;
    }
    out.truncate(n);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexCell {
    /// Row of the similarity matrix (leaf of the tree).
    pub theme: usize,
    pub hex: Hex,
    pub cluster: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexLayout {
    /// One cell per theme, indexed by theme.
    pub cells: Vec<HexCell>,
    /// Mean axial coordinate of each cluster.
    pub centroids: Vec<(f64, f64)>,
}

impl HexLayout {
    pub fn hex_of(&self, theme: usize) -> Hex {
        self.cells[theme].hex
    }
}

/// Lays out the clusters of `tree` on the hex grid.
pub fn hex_layout(tree: &ClusterTree, s: &ThemeSimilarityMatrix) -> HexLayout {
    let n = tree.leaves;
    let clusters = tree.clusters();
    let n_clusters = clusters.len();

    let position: HashMap<usize, usize> = tree.leaf_order.iter().enumerate().map(|(p, &l)| (l, p)).collect();
    let mut members = clusters.clone();
    for m in &mut members {
        m.sort_by_key(|l| position[l]);
    }

    let cluster_sim = cluster_similarity(&clusters, s);
    let order = placement_order(tree, n_clusters);

    let mut occupied: HashMap<Hex, usize> = HashMap::new();
    let mut hexes = vec![Hex::ORIGIN; n];
    let mut centroids = vec![(0.0, 0.0); n_clusters];
    let mut placed: Vec<usize> = Vec::new();

    for &c in &order {
        let seat = if placed.is_empty() {
            Hex::ORIGIN
        } else {
            choose_seat(&occupied, &placed, &centroids, &cluster_sim[c])
        };
        let cells = grow(seat, members[c].len(), &occupied);
        for (&theme, &h) in members[c].iter().zip(&cells) {
            hexes[theme] = h;
            occupied.insert(h, c);
        }
        let len = cells.len() as f64;
        centroids[c] = (
            cells.iter().map(|h| f64::from(h.q)).sum::<f64>() / len,
            cells.iter().map(|h| f64::from(h.r)).sum::<f64>() / len,
        );
        placed.push(c);
    }

    let cells = (0..n)
        .map(|t| HexCell { theme: t, hex: hexes[t], cluster: tree.labels[t] })
        .collect();
    HexLayout { cells, centroids }
}

fn cluster_similarity(clusters: &[Vec<usize>], s: &ThemeSimilarityMatrix) -> Vec<Vec<f64>> {
    clusters
        .iter()
        .map(|a| {
            clusters
                .iter()
                .map(|b| {
                    let total: f64 = a.iter().flat_map(|&i| b.iter().map(move |&j| s.get(i, j))).sum();
                    total / (a.len() * b.len()) as f64
                })
                .collect()
        })
        .collect()
}

/// Clusters in the order the merges above the cut first touch them.
fn placement_order(tree: &ClusterTree, n_clusters: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(n_clusters);
    let mut seen = vec![false; n_clusters];
    let mut visit = |leaves: Vec<usize>, order: &mut Vec<usize>| {
        for l in leaves {
            let c = tree.labels[l];
            if !seen[c] {
                seen[c] = true;
                order.push(c);
            }
        }
    };
    for m in &tree.merges[tree.applied..] {
        visit(tree.node_leaves(m.left), &mut order);
        visit(tree.node_leaves(m.right), &mut order);
    }
    visit(tree.leaf_order.clone(), &mut order);
    order
}

/// Free hexes bordering the map that are reachable from outside it.
fn open_border(occupied: &HashMap<Hex, usize>) -> Vec<Hex> {
    let radius = occupied.keys().map(|h| h.distance(Hex::ORIGIN)).max().unwrap_or(0) + 1;
    let mut outside: HashSet<Hex> = ring(Hex::ORIGIN, radius).collect();
    let mut queue: VecDeque<Hex> = outside.iter().copied().collect();
    while let Some(h) = queue.pop_front() {
        for nb in h.neighbors() {
            if nb.distance(Hex::ORIGIN) <= radius && !occupied.contains_key(&nb) && outside.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    let mut border: Vec<Hex> = outside
        .into_iter()
        .filter(|h| h.neighbors().any(|nb| occupied.contains_key(&nb)))
        .collect();
    border.sort_by_key(|h| h.spiral_index(Hex::ORIGIN));
    border
}

fn choose_seat(occupied: &HashMap<Hex, usize>, placed: &[usize], centroids: &[(f64, f64)], sim: &[f64]) -> Hex {
    let pixel = |(q, r): (f64, f64)| (3f64.sqrt() * (q + r / 2.0), 1.5 * r);
    let mut best: Option<(f64, Hex)> = None;
    for h in open_border(occupied) {
        let (x, y) = h.to_pixel();
        let cost: f64 = placed
            .iter()
            .map(|&p| {
                let (cx, cy) = pixel(centroids[p]);
                (sim[p] + COMPACTNESS) * ((x - cx).powi(2) + (y - cy).powi(2)).sqrt()
            })
            .sum();
        // Candidates arrive in spiral order, so strict improvement keeps the earliest.
        if best.is_none_or(|(b, _)| cost < b) {
            best = Some((cost, h));
        }
    }
    best.expect("an occupied map always has a border").1
}

/// `count` connected free hexes grown outward from `seat`.
fn grow(seat: Hex, count: usize, occupied: &HashMap<Hex, usize>) -> Vec<Hex> {
    let mut cells = vec![seat];
    let mut taken: HashSet<Hex> = cells.iter().copied().collect();
    while cells.len() < count {
        let next = cells
            .iter()
            .flat_map(|h| h.neighbors())
            .filter(|h| !taken.contains(h) && !occupied.contains_key(h))
            .min_by_key(|h| {
                let touching = h.neighbors().filter(|nb| taken.contains(nb)).count();
                (h.distance(seat), std::cmp::Reverse(touching), h.spiral_index(seat))
            })
            .expect("a seat on the open border can always grow");
        taken.insert(next);
        cells.push(next);
    }
    cells
}
