//! The corpus bundle: vocabulary plus every modeled document's encoded
//! chunks, produced by [`ingest`] and stored as a single binary file.
//!
//! The byte layout is documented in `docs/formats.md`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{self, Cursor};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chunk::{chunk_document, TooShort, DEFAULT_CHUNK_COUNT};
use crate::codec::{Reader, Writer};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::tokenize::{tokenize, TokenizerConfig};
use crate::vocab::{VocabConfig, Vocabulary};

pub const BUNDLE_MAGIC: [u8; 8] = *b"THMCORP\0";
pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    pub chunk_count: usize,
    pub vocab: VocabConfig,
    pub tokenizer: TokenizerConfig,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            chunk_count: DEFAULT_CHUNK_COUNT,
            vocab: VocabConfig::default(),
            tokenizer: TokenizerConfig::default(),
        }
    }
}

/// A modeled document: everything but the raw body.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleDoc {
    pub doc_id: String,
    pub title: String,
    pub metadata: BTreeMap<String, String>,
    /// Exactly `chunk_count` chunks of term ids, in reading order.
    pub chunks: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusBundle {
    pub chunk_count: usize,
    pub lowercase: bool,
    pub min_token_len: usize,
    pub vocab: Vocabulary,
    pub docs: Vec<BundleDoc>,
    /// Documents left out of modeling because they had too few tokens.
    pub excluded: Vec<TooShort>,
}

/// Tokenizes, builds the vocabulary over all documents, encodes and chunks.
/// Documents with fewer than `chunk_count` in-vocabulary tokens are excluded
/// and listed in [`CorpusBundle::excluded`].
pub fn ingest(docs: &[Document], config: &IngestConfig) -> Result<CorpusBundle> {
    if config.chunk_count < 1 {
        return Err(Error::Config("chunk_count must be at least 1".into()));
    }
    let tokenized: Vec<Vec<String>> = docs
        .iter()
        .map(|d| tokenize(&d.body, &config.tokenizer))
        .collect();
    let vocab = Vocabulary::build(&tokenized, config.vocab, &config.tokenizer.stopwords)?;

    let mut modeled = Vec::new();
    let mut excluded = Vec::new();
    for (doc, tokens) in docs.iter().zip(&tokenized) {
        let ids = vocab.encode(tokens);
        match chunk_document(&doc.doc_id, &ids, config.chunk_count) {
            Ok(chunks) => modeled.push(BundleDoc {
                doc_id: doc.doc_id.clone(),
                title: doc.title.clone(),
                metadata: doc.metadata.clone(),
                chunks: chunks.into_iter().map(|c| c.tokens).collect(),
            }),
            Err(short) => excluded.push(short),
        }
    }
    if modeled.is_empty() {
        return Err(Error::Config(format!(
            "no document has at least {} in-vocabulary tokens",
            config.chunk_count
        )));
    }
    Ok(CorpusBundle {
        chunk_count: config.chunk_count,
        lowercase: config.tokenizer.lowercase,
        min_token_len: config.tokenizer.min_len,
        vocab,
        docs: modeled,
        excluded,
    })
}

impl CorpusBundle {
    pub fn num_chunks(&self) -> usize {
        self.docs.len() * self.chunk_count
    }

    /// All chunks in document order, then chunk order.
    pub fn chunks(&self) -> impl Iterator<Item = &[u32]> {
        self.docs.iter().flat_map(|d| d.chunks.iter().map(Vec::as_slice))
    }

    pub fn doc(&self, doc_id: &str) -> Option<&BundleDoc> {
        self.docs
            .binary_search_by(|d| d.doc_id.as_str().cmp(doc_id))
            .ok()
            .map(|i| &self.docs[i])
    }

    pub fn titles(&self) -> HashMap<&str, &str> {
        self.docs
            .iter()
            .map(|d| (d.doc_id.as_str(), d.title.as_str()))
            .collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.encode().expect("writing to a Vec cannot fail")
    }

    fn encode(&self) -> io::Result<Vec<u8>> {
        let mut w = Writer::new(Vec::new());
        w.bytes(&BUNDLE_MAGIC)?;
        w.u32(BUNDLE_VERSION)?;
        w.len(self.chunk_count)?;
        w.u32(u32::from(self.lowercase))?;
        w.len(self.min_token_len)?;
        w.u32(self.vocab.config.min_df)?;
        w.f64(self.vocab.config.max_df_fraction)?;
        w.u32(self.vocab.num_docs)?;
        w.len(self.vocab.stopwords.len())?;
        for s in &self.vocab.stopwords {
            w.str(s)?;
        }
        w.len(self.vocab.len())?;
        for (term, &df) in self.vocab.terms().iter().zip(self.vocab.doc_freqs()) {
            w.str(term)?;
            w.u32(df)?;
        }
        w.len(self.docs.len())?;
        for doc in &self.docs {
            w.str(&doc.doc_id)?;
            w.str(&doc.title)?;
            w.len(doc.metadata.len())?;
            for (k, v) in &doc.metadata {
                w.str(k)?;
                w.str(v)?;
            }
            for chunk in &doc.chunks {
                w.u32s(chunk)?;
            }
        }
        w.len(self.excluded.len())?;
        for ex in &self.excluded {
            w.str(&ex.doc_id)?;
            w.len(ex.tokens)?;
            w.len(ex.required)?;
        }
        Ok(w.into_inner())
    }

    pub fn from_bytes(bytes: &[u8]) -> io::Result<Self> {
        let mut r = Reader::new(Cursor::new(bytes));
        if r.bytes::<8>()? != BUNDLE_MAGIC {
            return Err(invalid("not a corpus bundle (bad magic)"));
        }
        let version = r.u32()?;
        if version != BUNDLE_VERSION {
            return Err(invalid(&format!("unsupported bundle version {version}")));
        }
        let chunk_count = r.len()?;
        let lowercase = r.u32()? != 0;
        let min_token_len = r.len()?;
        let min_df = r.u32()?;
        let max_df_fraction = r.f64()?;
        let num_docs = r.u32()?;
        let stopwords = (0..r.len()?).map(|_| r.str()).collect::<io::Result<Vec<_>>>()?;
        let n_terms = r.len()?;
        let mut terms = Vec::with_capacity(n_terms);
        let mut dfs = Vec::with_capacity(n_terms);
        for _ in 0..n_terms {
            terms.push(r.str()?);
            dfs.push(r.u32()?);
        }
        let vocab = Vocabulary::from_parts(
            terms,
            dfs,
            stopwords,
            VocabConfig { min_df, max_df_fraction },
            num_docs,
        );
        let n_docs = r.len()?;
        let mut docs = Vec::with_capacity(n_docs);
        for _ in 0..n_docs {
            let doc_id = r.str()?;
            let title = r.str()?;
            let mut metadata = BTreeMap::new();
            for _ in 0..r.len()? {
                let k = r.str()?;
                metadata.insert(k, r.str()?);
            }
            let chunks = (0..chunk_count).map(|_| r.u32s()).collect::<io::Result<Vec<_>>>()?;
            if chunks.iter().flatten().any(|&t| t as usize >= n_terms) {
                return Err(invalid(&format!("document {doc_id:?} has an out-of-range term id")));
            }
            docs.push(BundleDoc { doc_id, title, metadata, chunks });
        }
        let mut excluded = Vec::new();
        for _ in 0..r.len()? {
            excluded.push(TooShort {
                doc_id: r.str()?,
                tokens: r.len()?,
                required: r.len()?,
            });
        }
        r.finish()?;
        if docs.windows(2).any(|w| w[0].doc_id >= w[1].doc_id) {
            return Err(invalid("documents not sorted by doc_id"));
        }
        Ok(Self {
            chunk_count,
            lowercase,
            min_token_len,
            vocab,
            docs,
            excluded,
        })
    }

    pub fn save(&self, path: &Path) -> Result<String> {
        let bytes = self.to_bytes();
        fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;
        Ok(crate::content_hash(&bytes))
    }

    /// Loads a bundle, returning it with the file's content hash.
    pub fn load(path: &Path) -> Result<(Self, String)> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let bundle = Self::from_bytes(&bytes).map_err(|e| Error::malformed(path, e.to_string()))?;
        Ok((bundle, crate::content_hash(&bytes)))
    }
}

fn invalid(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_owned())
}
