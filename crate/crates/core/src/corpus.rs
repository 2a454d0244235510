//! Loading documents from disk.
//!
//! Two layouts are accepted:
//!
//! * [`CorpusFormat::Manifest`]: a JSON-lines manifest, one record per
//!   document with `doc_id`, `title`, `body_path` (relative to the manifest's
//!   directory) and an optional string-to-string `metadata` object. Bodies
//!   are UTF-8 plain text.
//! * [`CorpusFormat::JsonDir`]: a directory of `*.json` files, each holding a
//!   single record with `doc_id`, `title`, `body` and optional `metadata`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub title: String,
    pub body: String,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Manifest,
    JsonDir,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "manifest" => Ok(CorpusFormat::Manifest),
            "json-dir" => Ok(CorpusFormat::JsonDir),
            other => Err(Error::Config(format!(
                "unknown corpus format {other:?} (expected \"manifest\" or \"json-dir\")"
            ))),
        }
    }
}

/// One line of a corpus manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub doc_id: Option<String>,
    pub title: Option<String>,
    pub body_path: Option<String>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
struct InlineRecord {
    doc_id: Option<String>,
    title: Option<String>,
    body: Option<String>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

/// Loads every document under `source`, sorted by `doc_id`.
///
/// For [`CorpusFormat::Manifest`], `source` may name the manifest file itself
/// or a directory containing `manifest.jsonl`.
pub fn load_corpus(source: &Path, format: CorpusFormat) -> Result<Vec<Document>> {
    if !source.exists() {
        return Err(Error::io(
            source,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory"),
        ));
    }
    let docs = match format {
        CorpusFormat::Manifest => {
            let manifest = if source.is_dir() {
                source.join("manifest.jsonl")
            } else {
                source.to_path_buf()
            };
            load_manifest(&manifest)?
        }
        CorpusFormat::JsonDir => load_json_dir(source)?,
    };
    finalize(docs)
}

fn load_manifest(manifest: &Path) -> Result<Vec<Document>> {
    let text = fs::read_to_string(manifest).map_err(|e| Error::io(manifest, e))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let mut docs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let at = || format!("{}:{}", manifest.display(), lineno + 1);
        let rec: ManifestRecord =
            serde_json::from_str(line).map_err(|e| Error::malformed(at(), e.to_string()))?;
        let doc_id = required(rec.doc_id, "doc_id", &at())?;
        let title = required(rec.title, "title", &at())
            .map_err(|_| missing_field(&doc_id, "title"))?;
        let body_path = required(rec.body_path, "body_path", &at())
            .map_err(|_| missing_field(&doc_id, "body_path"))?;
        let path = base.join(&body_path);
        let body = fs::read_to_string(&path).map_err(|e| Error::io(path, e))?;
        docs.push(Document {
            doc_id,
            title,
            body,
            metadata: rec.metadata,
        });
    }
    Ok(docs)
}

fn load_json_dir(dir: &Path) -> Result<Vec<Document>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|ext| ext == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    let mut docs = Vec::with_capacity(paths.len());
    for path in paths {
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let rec: InlineRecord =
            serde_json::from_str(&text).map_err(|e| Error::malformed(&path, e.to_string()))?;
        let at = path.display().to_string();
        let doc_id = required(rec.doc_id, "doc_id", &at)?;
        let title = required(rec.title, "title", &at).map_err(|_| missing_field(&doc_id, "title"))?;
        let body = required(rec.body, "body", &at).map_err(|_| missing_field(&doc_id, "body"))?;
        docs.push(Document {
            doc_id,
            title,
            body,
            metadata: rec.metadata,
        });
    }
    Ok(docs)
}

fn required(value: Option<String>, field: &str, at: &str) -> Result<String> {
    match value {
        Some(v) if !v.trim().is_empty() => Ok(v),
        _ => Err(Error::malformed(at, format!("missing or empty `{field}`"))),
    }
}

fn missing_field(doc_id: &str, field: &str) -> Error {
    Error::InvalidDocument {
        doc_id: doc_id.to_owned(),
        reason: format!("missing or empty `{field}`"),
    }
}

fn finalize(mut docs: Vec<Document>) -> Result<Vec<Document>> {
    let mut seen = BTreeSet::new();
    for doc in &docs {
        if !seen.insert(doc.doc_id.as_str()) {
            return Err(Error::DuplicateDocId(doc.doc_id.clone()));
        }
        if doc.body.trim().is_empty() {
            return Err(Error::InvalidDocument {
                doc_id: doc.doc_id.clone(),
                reason: "body is empty".into(),
            });
        }
    }
    docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    Ok(docs)
}

/// Writes `docs` as a manifest plus one body file per document under `dir`.
/// Returns the manifest path.
pub fn write_manifest(dir: &Path, docs: &[Document]) -> Result<PathBuf> {
    let bodies = dir.join("bodies");
    fs::create_dir_all(&bodies).map_err(|e| Error::io(&bodies, e))?;
    let mut manifest = String::new();
    for (i, doc) in docs.iter().enumerate() {
        let rel = format!("bodies/{i:06}.txt");
        let path = dir.join(&rel);
        fs::write(&path, &doc.body).map_err(|e| Error::io(&path, e))?;
        let rec = ManifestRecord {
            doc_id: Some(doc.doc_id.clone()),
            title: Some(doc.title.clone()),
            body_path: Some(rel),
            metadata: doc.metadata.clone(),
        };
        manifest.push_str(&serde_json::to_string(&rec).expect("manifest record serializes"));
        manifest.push('\n');
    }
    let path = dir.join("manifest.jsonl");
    fs::write(&path, manifest).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_json(dir: &Path, name: &str, id: &str) {
        let rec = serde_json::json!({"doc_id": id, "title": format!("T {id}"), "body": "some body text"});
        fs::write(dir.join(name), rec.to_string()).unwrap();
    }

    #[test]
    fn json_dir_sorted_by_doc_id() {
        let tmp = tempfile::tempdir().unwrap();
        write_json(tmp.path(), "a.json", "p3");
        write_json(tmp.path(), "b.json", "p1");
        write_json(tmp.path(), "c.json", "p2");
        let docs = load_corpus(tmp.path(), CorpusFormat::JsonDir).unwrap();
        let ids: Vec<_> = docs.iter().map(|d| d.doc_id.as_str()).collect();
        assert_eq!(ids, ["p1", "p2", "p3"]);
    }

    #[test]
    fn duplicate_doc_id_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        write_json(tmp.path(), "a.json", "p1");
        write_json(tmp.path(), "b.json", "p1");
        match load_corpus(tmp.path(), CorpusFormat::JsonDir) {
            Err(Error::DuplicateDocId(id)) => assert_eq!(id, "p1"),
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn missing_doc_id_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        fs::write(tmp.path().join("x.json"), r#"{"title": "t", "body": "b"}"#).unwrap();
        let err = load_corpus(tmp.path(), CorpusFormat::JsonDir).unwrap_err();
        assert!(err.to_string().contains("doc_id"), "{err}");
        assert!(err.to_string().contains("x.json"), "{err}");
    }

    #[test]
    fn missing_body_file_names_path() {
        let tmp = tempfile::tempdir().unwrap();
        fs::write(
            tmp.path().join("manifest.jsonl"),
            r#"{"doc_id": "p1", "title": "t", "body_path": "nowhere.txt"}"#,
        )
        .unwrap();
        let err = load_corpus(tmp.path(), CorpusFormat::Manifest).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(err.to_string().contains("nowhere.txt"), "{err}");
    }

    #[test]
    fn missing_source() {
        let err = load_corpus(Path::new("/definitely/not/here"), CorpusFormat::Manifest).unwrap_err();
        assert!(err.to_string().contains("/definitely/not/here"));
    }

    #[test]
    fn manifest_round_trip() {
        let tmp = tempfile::tempdir().unwrap();
        let docs: Vec<Document> = (0..5)
            .rev()
            .map(|i| Document {
                doc_id: format!("d{i}"),
                title: format!("Title {i}"),
                body: format!("body of document {i}"),
                metadata: BTreeMap::from([("year".to_owned(), "2020".to_owned())]),
            })
            .collect();
        let manifest = write_manifest(tmp.path(), &docs).unwrap();
        let loaded = load_corpus(&manifest, CorpusFormat::Manifest).unwrap();
        let mut expected = docs.clone();
        expected.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        assert_eq!(loaded, expected);
    }

    #[test]
    fn empty_body_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        fs::write(
            tmp.path().join("e.json"),
            r#"{"doc_id": "e1", "title": "t", "body": "   "}"#,
        )
        .unwrap();
        let err = load_corpus(tmp.path(), CorpusFormat::JsonDir).unwrap_err();
        assert!(err.to_string().contains("e1"));
    }
}
