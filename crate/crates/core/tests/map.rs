#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thematic_core::map::{
    agglomerative_cluster, build_theme_map, hex_layout, theme_cooccurrence, ClusterTarget, ClusterTree, MapConfig,
    Palette, ThemeMap, ThemeSimilarityMatrix, TIE_RESOLUTION,
};
use thematic_core::synthetic::random_model;

fn sparse_papers(rng: &mut impl Rng, papers: usize, topics: usize) -> Vec<Vec<f64>> {
    (0..papers)
        .map(|_| {
            let raw: Vec<f64> = (0..topics)
                .map(|_| if rng.random_bool(0.35) { rng.random::<f64>() } else { 0.0 })
                .collect();
            let total: f64 = raw.iter().sum::<f64>().max(1e-12);
            raw.into_iter().map(|x| x / total).collect()
        })
        .collect()
}

fn matrix(values: Vec<Vec<f64>>) -> ThemeSimilarityMatrix {
    ThemeSimilarityMatrix::from_values(values, 0.05).unwrap()
}

fn merge_sets(tree: &ClusterTree) -> Vec<(Vec<usize>, Vec<usize>)> {
    tree.merges
        .iter()
        .map(|m| {
            let mut l = tree.node_leaves(m.left);
            let mut r = tree.node_leaves(m.right);
            l.sort();
            r.sort();
            (l, r)
        })
        .collect()
}

fn layout_cells(tree: &ClusterTree, s: &ThemeSimilarityMatrix) -> Vec<(i32, i32, usize)> {
    hex_layout(tree, s).cells.iter().map(|c| (c.hex.q, c.hex.r, c.cluster)).collect()
}

#[test]
fn jaccard_matches_set_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let papers = sparse_papers(&mut rng, 20, 6);
        let got = theme_cooccurrence(&papers, 6, 0.05);
        let want = common::brute_jaccard(&papers, 6, 0.05);
        for i in 0..6 {
            for j in 0..6 {
                assert!((got.get(i, j) - want[i][j]).abs() < 1e-12, "({i},{j})");
            }
        }
    }
}

#[test]
fn jaccard_threshold_is_inclusive() {
    let papers = vec![vec![0.05, 0.95], vec![0.5, 0.5]];
    let s = theme_cooccurrence(&papers, 2, 0.05);
    assert_eq!(s.get(0, 1), 1.0);
}

#[test]
fn theme_present_nowhere_is_flagged() {
    let papers = vec![vec![0.99, 0.01, 0.0], vec![0.5, 0.0, 0.5]];
    let s = theme_cooccurrence(&papers, 3, 0.05);
    assert_eq!(s.empty_themes, vec![1]);
    assert_eq!(s.get(1, 1), 1.0);
    assert_eq!(s.get(0, 1), 0.0);
}

#[test]
fn clustering_matches_naive_average_linkage() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..40 {
        let n = rng.random_range(8..=15);
        let target = rng.random_range(1..=n);
        let values = common::random_similarity(&mut rng, n);
        let tree = agglomerative_cluster(&matrix(values.clone()), ClusterTarget::Count(target));
        let oracle = common::oracle_average_linkage(&values, target, TIE_RESOLUTION);
        assert_eq!(merge_sets(&tree)[..n - target], oracle.merges[..], "case {case}");
        assert_eq!(tree.clusters(), oracle.clusters, "case {case}");
    }
}

#[test]
fn eight_theme_reference_case() {
    // Two tight groups {0,1,2} and {5,6,7}, with 3 and 4 loosely attached.
    let mut s = vec![vec![0.1; 8]; 8];
    for i in 0..8 {
        s[i][i] = 1.0;
    }
    let mut set = |a: usize, b: usize, v: f64| {
        s[a][b] = v;
        s[b][a] = v;
    };
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        set(a, b, 0.8);
    }
    for (a, b) in [(5, 6), (5, 7), (6, 7)] {
        set(a, b, 0.7);
    }
    set(3, 0, 0.4);
    set(4, 7, 0.45);
    let tree = agglomerative_cluster(&matrix(s.clone()), ClusterTarget::Count(3));
    let oracle = common::oracle_average_linkage(&s, 3, TIE_RESOLUTION);
    assert_eq!(tree.clusters(), oracle.clusters);
    // 4 joins {5,6,7} at (0.45 + 0.1 + 0.1) / 3, above 3 joining {0,1,2} at 0.2.
    assert_eq!(tree.clusters(), vec![vec![0, 1, 2], vec![3], vec![4, 5, 6, 7]]);
}

#[test]
fn merge_heights_never_decrease() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let n = rng.random_range(2..30);
        let tree = agglomerative_cluster(&matrix(common::random_similarity(&mut rng, n)), ClusterTarget::LargestGap);
        assert_eq!(tree.merges.len(), n - 1);
        assert!(tree.merges.windows(2).all(|w| w[0].height <= w[1].height));
        assert_eq!(tree.merges.last().unwrap().size, n);
        let mut order = tree.leaf_order.clone();
        order.sort();
        assert_eq!(order, (0..n).collect::<Vec<_>>());
    }
}

#[test]
fn height_cut_applies_every_merge_below() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let s = matrix(common::random_similarity(&mut rng, 12));
    let full = agglomerative_cluster(&s, ClusterTarget::Count(1));
    let h = full.merges[6].height;
    let cut = agglomerative_cluster(&s, ClusterTarget::Height(h));
    assert!(cut.applied >= 7);
    assert!(cut.merges[..cut.applied].iter().all(|m| m.height <= h));
    assert!(cut.merges[cut.applied..].iter().all(|m| m.height > h));
}

#[test]
fn layout_invariants_on_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for case in 0..60 {
        let n = rng.random_range(1..=40);
        let s = matrix(common::random_similarity(&mut rng, n));
        let target = if rng.random_bool(0.5) {
            ClusterTarget::Count(rng.random_range(1..=n))
        } else {
            ClusterTarget::LargestGap
        };
        let tree = agglomerative_cluster(&s, target);
        let cells = layout_cells(&tree, &s);
        let check = common::check_layout(&cells);
        assert!(check.distinct && check.connected, "case {case}: {check:?}");
    }
}

#[test]
fn clusters_sit_closer_together_than_apart() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for case in 0..40 {
        let n = rng.random_range(6..=40);
        let s = matrix(common::random_similarity(&mut rng, n));
        let clusters = rng.random_range(2..=(n / 2).max(2));
        let tree = agglomerative_cluster(&s, ClusterTarget::Count(clusters));
        let check = common::check_layout(&layout_cells(&tree, &s));
        assert!(check.ok(), "case {case}: {check:?}");
    }
}

#[test]
fn full_size_map_layout() {
    let model = random_model(300, 4, 85, 0.05, 3);
    let map = build_theme_map(&model, "hash", &MapConfig::default()).unwrap();
    assert_eq!(map.themes.len(), 85);
    let cells: Vec<(i32, i32, usize)> = map.themes.iter().map(|t| (t.q, t.r, t.cluster)).collect();
    let check = common::check_layout(&cells);
    assert!(check.ok(), "{check:?}");
    let covered: HashSet<usize> = map.clusters.iter().flat_map(|c| c.theme_ids.clone()).collect();
    assert_eq!(covered.len(), 85);

    let forced = build_theme_map(&model, "hash", &MapConfig { target: ClusterTarget::Count(85), ..MapConfig::default() }).unwrap();
    let colors: HashSet<&str> = forced.clusters.iter().map(|c| c.color.as_str()).collect();
    assert_eq!(colors.len(), 85);
}

#[test]
fn excerpt_palette_has_thirty_five_distinct_colours() {
    let colors: HashSet<String> = (0..35).map(|i| Palette::Excerpt.color(i)).collect();
    assert_eq!(colors.len(), 35);
    let overview: HashSet<String> = (0..8).map(|i| Palette::Overview.color(i)).collect();
    let excerpt: HashSet<String> = (0..8).map(|i| Palette::Excerpt.color(i)).collect();
    assert!(overview.is_disjoint(&excerpt));
}

#[test]
fn map_is_deterministic_and_round_trips() {
    let model = random_model(80, 3, 20, 0.1, 4);
    let a = build_theme_map(&model, "h", &MapConfig::default()).unwrap();
    let b = build_theme_map(&model, "h", &MapConfig::default()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let back: ThemeMap = serde_json::from_slice(&a.to_json()).unwrap();
    assert_eq!(back.to_json(), a.to_json());
}
