//! Document-frequency filtered vocabulary.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VocabConfig {
    pub min_df: u32,
    pub max_df_fraction: f64,
}

impl Default for VocabConfig {
    fn default() -> Self {
        Self {
            min_df: 2,
            max_df_fraction: 0.9,
        }
    }
}

impl VocabConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_df < 1 {
            return Err(Error::Config("min_df must be at least 1".into()));
        }
        if !(self.max_df_fraction > 0.0 && self.max_df_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "max_df_fraction must lie in (0, 1], got {}",
                self.max_df_fraction
            )));
        }
        Ok(())
    }
}

/// Term/id bijection. Ids are assigned in lexicographic term order.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<u32>,
    index: HashMap<String, u32>,
    pub stopwords: Vec<String>,
    pub config: VocabConfig,
    /// Number of documents the frequencies were counted over.
    pub num_docs: u32,
}

impl Vocabulary {
    /// Keeps the terms whose document frequency over `docs` lies in
    /// `[min_df, max_df_fraction * docs.len()]` and that are not stopwords.
    pub fn build<S: AsRef<str>>(
        docs: &[Vec<S>],
        config: VocabConfig,
        stopwords: &BTreeSet<String>,
    ) -> Result<Self> {
        config.validate()?;
        let mut df: BTreeMap<&str, u32> = BTreeMap::new();
        for doc in docs {
            let distinct: BTreeSet<&str> = doc.iter().map(AsRef::as_ref).collect();
            for term in distinct {
                *df.entry(term).or_default() += 1;
            }
        }
        let ceiling = config.max_df_fraction * docs.len() as f64;
        let (terms, doc_freq): (Vec<String>, Vec<u32>) = df
            .into_iter()
            .filter(|&(term, n)| n >= config.min_df && f64::from(n) <= ceiling && !stopwords.contains(term))
            .map(|(term, n)| (term.to_owned(), n))
            .unzip();
        if terms.is_empty() {
            return Err(Error::Config(format!(
                "vocabulary is empty after filtering (min_df={}, max_df_fraction={}, {} documents)",
                config.min_df,
                config.max_df_fraction,
                docs.len()
            )));
        }
        Ok(Self::from_parts(
            terms,
            doc_freq,
            stopwords.iter().cloned().collect(),
            config,
            docs.len() as u32,
        ))
    }

    pub(crate) fn from_parts(
        terms: Vec<String>,
        doc_freq: Vec<u32>,
        stopwords: Vec<String>,
        config: VocabConfig,
        num_docs: u32,
    ) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Self {
            terms,
            doc_freq,
            index,
            stopwords,
            config,
            num_docs,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn id(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: u32) -> Option<&str> {
        self.terms.get(id as usize).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freq(&self, id: u32) -> Option<u32> {
        self.doc_freq.get(id as usize).copied()
    }

    pub fn doc_freqs(&self) -> &[u32] {
        &self.doc_freq
    }

    /// Maps tokens to ids, dropping out-of-vocabulary tokens.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<u32> {
        tokens.iter().filter_map(|t| self.id(t.as_ref())).collect()
    }

    /// SHA-256 over the terms in id order, each followed by `\n`.
    pub fn hash(&self) -> String {
        let mut buf = Vec::new();
        for t in &self.terms {
            buf.extend_from_slice(t.as_bytes());
            buf.push(b'\n');
        }
        crate::content_hash(&buf)
    }
}
