use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use thematic::config::FileConfig;
use thematic_server::AppState;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thematic"))
}

fn samples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn sample_config() -> String {
    samples().join("thematic.toml").to_string_lossy().into_owned()
}

fn pipeline(out: &Path) -> Output {
    run(&["pipeline", "--config", &sample_config(), "--out-dir", out.to_str().unwrap()])
}

#[test]
fn sample_pipeline_succeeds_and_repeats_exactly() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = pipeline(a.path());
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let second = pipeline(b.path());
    assert_eq!(second.status.code(), Some(0));
    for name in ["corpus.bin", "model.bin", "layout.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between runs");
    }
    let hashes = |o: &Output| {
        String::from_utf8_lossy(&o.stdout).lines().map(|l| l.rsplit(' ').next().unwrap().to_owned()).collect::<Vec<_>>()
    };
    assert_eq!(hashes(&first), hashes(&second));
}

#[test]
fn stages_run_separately_with_json_progress() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let corpus = samples().join("abstracts").to_string_lossy().into_owned();
    let o = run(&["--json", "ingest", "--corpus", &corpus, "--out", &d("c.bin"), "--chunks", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["train", "--json", "--corpus", &d("c.bin"), "--topics", "8", "--iters", "20", "--seed", "3", "--out", &d("m.bin")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let events: Vec<serde_json::Value> =
        String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let sweeps = events.iter().filter(|e| e["event"] == "sweep").count();
    assert_eq!(sweeps, 20);
    let last = events.last().unwrap();
    assert_eq!(last["event"], "wrote");
    assert_eq!(last["hash"].as_str().unwrap().len(), 64);
    let o = run(&["map", "--model", &d("m.bin"), "--out", &d("l.json"), "--target", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let map: serde_json::Value = serde_json::from_slice(&std::fs::read(d("l.json")).unwrap()).unwrap();
    assert_eq!(map["themes"].as_array().unwrap().len(), 8);
    assert_eq!(map["clusters"].as_array().unwrap().len(), 3);
}

#[test]
fn missing_bundle_is_a_data_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no-such-bundle.bin");
    let out = dir.path().join("m.bin");
    let o = run(&["train", "--corpus", missing.to_str().unwrap(), "--out", out.to_str().unwrap(), "--topics", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no-such-bundle.bin"), "{}", stderr(&o));

    let o = run(&["--json", "train", "--corpus", missing.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let line: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(line["event"], "error");
    assert_eq!(line["code"], "io_error");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["train", "--topics", "many"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["train", "--topics", "5"]).status.code(), Some(1));
    assert_eq!(run(&["map", "--model", "x", "--out", "y", "--target", "height:2"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[train]\ntopcs = 3\n").unwrap();
    let o = run(&["train", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("topcs"), "{}", stderr(&o));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_corpus_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.jsonl");
    std::fs::write(&manifest, "not json\n").unwrap();
    let o = run(&["ingest", "--corpus", manifest.to_str().unwrap(), "--out", dir.path().join("c.bin").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("manifest.jsonl"));
}

#[test]
fn export_writes_session_report() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(pipeline(dir.path()).status.code(), Some(0));
    let cfg = dir.path().join("serve.toml");
    std::fs::write(
        &cfg,
        "[serve]\nmodel='model.bin'\nbundle='corpus.bin'\nlayout='layout.json'\nsessions='sessions.json'\n",
    )
    .unwrap();
    let api = FileConfig::load(&cfg).unwrap().api_config().unwrap();
    let id = {
        let state = AppState::load(&api).unwrap();
        let mut store = state.sessions();
        let s = store.create_session().unwrap();
        store.update_selection(&s.session_id, vec!["s001".into(), "s014".into(), "s020".into()]).unwrap();
        s.session_id
    };
    let out = dir.path().join("report.json");
    let o = run(&["export", "--config", cfg.to_str().unwrap(), "--session", &id, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["session"]["session_id"], id.as_str());
    assert_eq!(report["wheels"].as_array().unwrap().len(), 3);
    assert!(report["excerpt_map"]["map"]["themes"].as_array().is_some_and(|t| !t.is_empty()));
    assert!(report["papers"].as_array().unwrap().iter().all(|p| p.get("title").is_none()));

    let o = run(&["export", "--config", cfg.to_str().unwrap(), "--session", "nope", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
