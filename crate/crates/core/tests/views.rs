mod common;

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thematic_core::excerpt::{excerpt_for_selection, excerpt_wheels, extract_relevant_themes, ExcerptConfig};
use thematic_core::map::{build_theme_map, MapConfig, Palette};
use thematic_core::synthetic::random_model;
use thematic_core::topic::TopicModel;
use thematic_core::wheel::{build_multi_theme_wheel, build_single_theme_wheel, rank_papers, rank_papers_for_theme};
use thematic_core::Error;

fn id(i: usize) -> String {
    format!("d{i:04}")
}

/// Paper weight computed straight from the chunk rows.
fn paper_weight(model: &TopicModel, doc: usize, theme: usize) -> f64 {
    let c = model.chunk_count;
    (0..c).map(|i| model.theta[(doc * c + i) * model.topics + theme]).sum::<f64>() / c as f64
}

#[test]
fn multi_wheel_segments_follow_chunk_argmax() {
    let model = random_model(10, 30, 12, 0.2, 1);
    let map = build_theme_map(&model, "h", &MapConfig::default()).unwrap();
    let colors = map.colors_by_theme(model.topics);
    for doc in 0..10 {
        let wheel = build_multi_theme_wheel(&model, &id(doc), &colors).unwrap();
        assert_eq!(wheel.segments.len(), 30);
        for (i, seg) in wheel.segments.iter().enumerate() {
            let row = model.theta_row(doc * 30 + i);
            let max = row.iter().cloned().fold(f64::MIN, f64::max);
            let expected = row.iter().position(|&w| w == max).unwrap();
            assert_eq!(seg.dominant_theme, expected);
            assert_eq!(seg.color, colors[expected]);
            assert!((seg.start_angle - 12.0 * i as f64).abs() < 1e-9);
            assert!((seg.end_angle - 12.0 * (i + 1) as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn single_wheel_intensity_is_direct_lookup() {
    let model = random_model(6, 30, 8, 0.3, 2);
    for doc in 0..6 {
        for theme in 0..8 {
            let wheel = build_single_theme_wheel(&model, &id(doc), theme, Some("#123456")).unwrap();
            let mut all_trace = true;
            for (i, seg) in wheel.segments.iter().enumerate() {
                let m = doc * 30 + i;
                let w = model.theta[m * 8 + theme];
                assert_eq!(seg.intensity, Some(w));
                let floor = model.alpha / (model.chunk_lengths[m] as f64 + 8.0 * model.alpha);
                let trace = w < 1.5 * floor;
                assert_eq!(seg.trace, Some(trace));
                all_trace &= trace;
            }
            assert_eq!(wheel.trace_only, Some(all_trace));
        }
    }
    assert!(matches!(build_single_theme_wheel(&model, &id(0), 8, None), Err(Error::UnknownTheme { .. })));
    assert!(matches!(build_single_theme_wheel(&model, "zz", 0, None), Err(Error::UnknownDoc(_))));
}

#[test]
fn ranking_matches_full_sort() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..30 {
        let model = random_model(50, 3, 10, 0.1, case);
        let mut papers = model.paper_distributions();
        // Force some exact ties and zero weights.
        for p in papers.iter_mut() {
            if rng.random_bool(0.2) {
                p.weights[0] = 0.25;
            }
            if rng.random_bool(0.2) {
                p.weights[0] = 0.0;
            }
        }
        let pairs: Vec<(String, Vec<f64>)> = papers.iter().map(|p| (p.doc_id.clone(), p.weights.clone())).collect();
        for theme in [0, 4, 9] {
            let n = rng.random_range(1..=60);
            let got: Vec<(String, f64)> = rank_papers(&papers, theme, n)
                .unwrap()
                .into_iter()
                .map(|r| (r.doc_id, r.relevance_percent))
                .collect();
            assert_eq!(got, common::oracle_rank(&pairs, theme, n), "case {case} theme {theme}");
        }
    }
}

#[test]
fn ranking_rejects_bad_requests() {
    let model = random_model(5, 2, 4, 0.5, 4);
    assert!(rank_papers_for_theme(&model, 0, 0).is_err());
    assert!(matches!(rank_papers_for_theme(&model, 4, 10), Err(Error::UnknownTheme { .. })));
    assert_eq!(rank_papers_for_theme(&model, 1, 10).unwrap().len(), 5);
}

#[test]
fn excerpt_subset_matches_threshold_scan() {
    let model = random_model(40, 5, 25, 0.08, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let all: Vec<usize> = (0..40).collect();
    for case in 0..20 {
        let size = rng.random_range(1..=6);
        let picked: Vec<usize> = all.choose_multiple(&mut rng, size).copied().collect();
        let selection: Vec<String> = picked.iter().map(|&d| id(d)).collect();
        let theta_min = [0.02, 0.05, 0.1, 0.2][case % 4];
        let subset = extract_relevant_themes(&model, &selection, theta_min, 6).unwrap();
        let expected: Vec<usize> = (0..25)
            .filter(|&k| picked.iter().any(|&d| paper_weight(&model, d, k) >= theta_min))
            .collect();
        assert_eq!(subset.theme_ids(), expected, "case {case}");
        for t in &subset.themes {
            let witnesses: BTreeSet<&str> = t.witnesses.iter().map(|w| w.doc_id.as_str()).collect();
            let want: BTreeSet<String> = picked
                .iter()
                .filter(|&&d| paper_weight(&model, d, t.theme_id) >= theta_min)
                .map(|&d| id(d))
                .collect();
            assert_eq!(witnesses, want.iter().map(String::as_str).collect());
        }
    }
}

#[test]
fn excerpt_shrinks_as_threshold_rises() {
    let model = random_model(30, 4, 20, 0.1, 7);
    let selection: Vec<String> = (0..6).map(id).collect();
    let mut prev: Option<BTreeSet<usize>> = None;
    for theta_min in [0.01, 0.03, 0.05, 0.08, 0.12, 0.2, 0.35] {
        let ids: BTreeSet<usize> =
            extract_relevant_themes(&model, &selection, theta_min, 6).unwrap().theme_ids().into_iter().collect();
        if let Some(p) = &prev {
            assert!(ids.is_subset(p), "{theta_min}");
        }
        prev = Some(ids);
    }
}

#[test]
fn excerpt_map_invariants() {
    let model = random_model(60, 6, 40, 0.05, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let all: Vec<usize> = (0..60).collect();
    for case in 0..10 {
        let size = rng.random_range(1..=6);
        let selection: Vec<String> = all.choose_multiple(&mut rng, size).map(|&d| id(d)).collect();
        let ex = excerpt_for_selection(&model, "h", &selection, &ExcerptConfig::default()).unwrap();
        let subset = extract_relevant_themes(&model, &selection, 0.05, 6).unwrap();
        assert_eq!(ex.map.theme_ids(), subset.theme_ids(), "case {case}");
        assert_eq!(ex.map.palette, Palette::Excerpt);
        let cells: Vec<(i32, i32, usize)> = ex.map.themes.iter().map(|t| (t.q, t.r, t.cluster)).collect();
        let check = common::check_layout(&cells);
        assert!(check.distinct && check.connected, "case {case}: {check:?}");
        let colors: BTreeSet<&str> = ex.map.clusters.iter().map(|c| c.color.as_str()).collect();
        assert_eq!(colors.len(), ex.map.clusters.len());

        let wheels = excerpt_wheels(&model, &ex).unwrap();
        assert_eq!(wheels.len(), selection.len());
        let kept: BTreeSet<usize> = subset.theme_ids().into_iter().collect();
        for w in &wheels {
            assert!(w.segments.iter().all(|s| kept.contains(&s.dominant_theme) && s.color.is_some()));
        }
    }
}

#[test]
fn excerpt_is_independent_of_selection_order() {
    let model = random_model(20, 4, 15, 0.1, 10);
    let a: Vec<String> = [3, 7, 11].map(id).to_vec();
    let b: Vec<String> = [11, 3, 7].map(id).to_vec();
    let ea = excerpt_for_selection(&model, "h", &a, &ExcerptConfig::default()).unwrap();
    let eb = excerpt_for_selection(&model, "h", &b, &ExcerptConfig::default()).unwrap();
    assert_eq!(ea.selection_id, eb.selection_id);
    assert_eq!(ea.map.to_json(), eb.map.to_json());
}
