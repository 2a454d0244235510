//! LDA topic model trained over document chunks.

mod artifact;
mod gibbs;

use serde::{Deserialize, Serialize};

pub use artifact::{MODEL_MAGIC, MODEL_VERSION};
pub use gibbs::{GibbsSampler, SweepStats};

use crate::bundle::CorpusBundle;
use crate::error::{Error, Result};

pub const DEFAULT_TOPICS: usize = 85;
pub const DEFAULT_BETA: f64 = 0.01;
pub const DEFAULT_ITERATIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaParams {
    pub topics: usize,
    /// Symmetric chunk-topic prior; `None` means `50 / topics`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for LdaParams {
    fn default() -> Self {
        Self {
            topics: DEFAULT_TOPICS,
            alpha: None,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            seed: 0,
        }
    }
}

impl LdaParams {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.topics as f64)
    }

    fn validate(&self, vocab_size: usize) -> Result<()> {
        if self.topics < 2 {
            return Err(Error::Config(format!("topic count must be at least 2, got {}", self.topics)));
        }
        if self.topics > vocab_size {
            return Err(Error::Config(format!(
                "topic count {} exceeds vocabulary size {vocab_size}",
                self.topics
            )));
        }
        if self.topics > u32::MAX as usize {
            return Err(Error::Config("topic count too large".into()));
        }
        let alpha = self.alpha();
        if !(alpha > 0.0 && alpha.is_finite()) || !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Config(format!("priors must be positive (alpha={alpha}, beta={})", self.beta)));
        }
        if self.iterations < 1 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// A trained model. Immutable once built.
///
/// Chunk rows are ordered document-major: document `d`'s chunk `c` is row
/// `d * chunk_count + c` of `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub iterations: usize,
    pub vocab_hash: String,
    /// Content hash of the corpus bundle file the model was trained from.
    pub bundle_hash: String,
    pub terms: Vec<String>,
    pub chunk_count: usize,
    pub doc_ids: Vec<String>,
    pub chunk_lengths: Vec<u32>,
    /// `K × V`, row-major.
    pub phi: Vec<f64>,
    /// `M × K`, row-major.
    pub theta: Vec<f64>,
    pub assignments: Vec<u32>,
    pub log_likelihood: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theme {
    pub theme_id: usize,
    pub top_terms: Vec<(String, f64)>,
    pub auto_label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperThemeDistribution {
    pub doc_id: String,
    pub weights: Vec<f64>,
}

/// Trains on every chunk of `bundle`. `bundle_hash` is recorded in the model
/// so downstream stages can check they are looking at the same corpus.
pub fn train(bundle: &CorpusBundle, bundle_hash: &str, params: &LdaParams) -> Result<TopicModel> {
    train_with_progress(bundle, bundle_hash, params, |_| {})
}

pub fn train_with_progress(
    bundle: &CorpusBundle,
    bundle_hash: &str,
    params: &LdaParams,
    progress: impl FnMut(&SweepStats),
) -> Result<TopicModel> {
    if bundle.docs.is_empty() {
        return Err(Error::Config("corpus bundle has no modeled documents".into()));
    }
    let doc_ids = bundle.docs.iter().map(|d| d.doc_id.clone()).collect();
    let mut model = train_chunks(bundle.chunks(), bundle.vocab.terms().to_vec(), bundle.chunk_count, doc_ids, params, progress)?;
    model.vocab_hash = bundle.vocab.hash();
    model.bundle_hash = bundle_hash.to_owned();
    Ok(model)
}

/// Trains on raw chunks. `doc_ids.len() * chunk_count` must equal the number
/// of chunks.
pub fn train_chunks<'a>(
    chunks: impl IntoIterator<Item = &'a [u32]>,
    terms: Vec<String>,
    chunk_count: usize,
    doc_ids: Vec<String>,
    params: &LdaParams,
    mut progress: impl FnMut(&SweepStats),
) -> Result<TopicModel> {
    params.validate(terms.len())?;
    let chunks: Vec<&[u32]> = chunks.into_iter().collect();
    if chunks.is_empty() || chunks.iter().all(|c| c.is_empty()) {
        return Err(Error::Config("cannot train on an empty corpus".into()));
    }
    if chunk_count == 0 || doc_ids.len() * chunk_count != chunks.len() {
        return Err(Error::Config(format!(
            "{} chunks do not match {} documents of {chunk_count} chunks",
            chunks.len(),
            doc_ids.len()
        )));
    }
    if doc_ids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("doc_ids must be unique and sorted".into()));
    }
    if chunks.iter().flat_map(|c| c.iter()).any(|&w| w as usize >= terms.len()) {
        return Err(Error::Config("chunk contains a term id outside the vocabulary".into()));
    }
    let alpha = params.alpha();
    let mut sampler = GibbsSampler::new(chunks.iter().copied(), terms.len(), params.topics, alpha, params.beta, params.seed);
    let mut trace = Vec::with_capacity(params.iterations);
    for _ in 0..params.iterations {
        let stats = sampler.sweep();
        debug_assert_eq!(stats.topic_count_total, sampler.num_tokens() as u64);
        trace.push(stats.log_likelihood);
        progress(&stats);
    }
    Ok(TopicModel {
        topics: params.topics,
        alpha,
        beta: params.beta,
        seed: params.seed,
        iterations: params.iterations,
        vocab_hash: String::new(),
        bundle_hash: String::new(),
        chunk_count,
        doc_ids,
        chunk_lengths: sampler.chunk_lengths(),
        phi: sampler.phi(),
        theta: sampler.theta(),
        assignments: sampler.assignments().to_vec(),
        log_likelihood: trace,
        terms,
    })
}

impl TopicModel {
    /// Checks matrix shapes, id ordering and row normalization.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("inconsistent model: {msg}")));
        let (k, v, m) = (self.topics, self.vocab_size(), self.num_chunks());
        if k < 2 {
            return bad(format!("{k} topics"));
        }
        if self.phi.len() != k * v {
            return bad(format!("phi has {} entries, expected {}", self.phi.len(), k * v));
        }
        if self.theta.len() != m * k {
            return bad(format!("theta has {} entries, expected {}", self.theta.len(), m * k));
        }
        if self.chunk_count == 0 || m != self.doc_ids.len() * self.chunk_count {
            return bad(format!("{m} chunks for {} documents", self.doc_ids.len()));
        }
        if self.doc_ids.windows(2).any(|w| w[0] >= w[1]) {
            return bad("doc_ids not strictly sorted".into());
        }
        let rows_ok = |data: &[f64], width: usize| {
            data.chunks(width)
                .all(|row| row.iter().all(|&x| x >= 0.0) && (row.iter().sum::<f64>() - 1.0).abs() <= 1e-9)
        };
        if !rows_ok(&self.phi, v) || !rows_ok(&self.theta, k) {
            return bad("a probability row is negative or does not sum to 1".into());
        }
        Ok(())
    }

    pub fn vocab_size(&self) -> usize {
        self.terms.len()
    }

    pub fn num_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn num_chunks(&self) -> usize {
        self.chunk_lengths.len()
    }

    pub fn phi_row(&self, theme: usize) -> &[f64] {
        let v = self.vocab_size();
        &self.phi[theme * v..(theme + 1) * v]
    }

    pub fn theta_row(&self, chunk: usize) -> &[f64] {
        &self.theta[chunk * self.topics..(chunk + 1) * self.topics]
    }

    pub fn doc_index(&self, doc_id: &str) -> Result<usize> {
        self.doc_ids
            .binary_search_by(|d| d.as_str().cmp(doc_id))
            .map_err(|_| Error::UnknownDoc(doc_id.to_owned()))
    }

    pub fn contains_doc(&self, doc_id: &str) -> bool {
        self.doc_index(doc_id).is_ok()
    }

    /// Theta rows of one document's chunks, in reading order.
    pub fn doc_chunk_rows(&self, doc_id: &str) -> Result<impl Iterator<Item = &[f64]>> {
        let d = self.doc_index(doc_id)?;
        let c = self.chunk_count;
        Ok((d * c..(d + 1) * c).map(move |m| self.theta_row(m)))
    }

    pub fn check_theme(&self, theme_id: usize) -> Result<()> {
        if theme_id < self.topics {
            Ok(())
        } else {
            Err(Error::UnknownTheme { theme_id, topics: self.topics })
        }
    }

    /// Smallest value theta can take in chunk `m` (a topic with no tokens).
    pub fn smoothing_floor(&self, chunk: usize) -> f64 {
        self.alpha / (f64::from(self.chunk_lengths[chunk]) + self.topics as f64 * self.alpha)
    }

    /// The `n` highest-weight terms of a theme; ties go to the lower term id.
    pub fn top_words(&self, theme_id: usize, n: usize) -> Result<Theme> {
        self.check_theme(theme_id)?;
        if n == 0 {
            return Err(Error::Config("top_words needs n >= 1".into()));
        }
        let row = self.phi_row(theme_id);
        let mut ids: Vec<usize> = (0..row.len()).collect();
        ids.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
        let top_terms: Vec<(String, f64)> = ids
            .into_iter()
            .take(n)
            .map(|i| (self.terms[i].clone(), row[i]))
            .collect();
        let auto_label = top_terms
            .iter()
            .take(3)
            .map(|(t, _)| t.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        Ok(Theme { theme_id, top_terms, auto_label })
    }

    /// Mean of the document's chunk theta rows.
    pub fn paper_distribution(&self, doc_id: &str) -> Result<PaperThemeDistribution> {
        let mut weights = vec![0.0; self.topics];
        for row in self.doc_chunk_rows(doc_id)? {
            for (acc, &t) in weights.iter_mut().zip(row) {
                *acc += t;
            }
        }
        let c = self.chunk_count as f64;
        weights.iter_mut().for_each(|w| *w /= c);
        Ok(PaperThemeDistribution { doc_id: doc_id.to_owned(), weights })
    }

    /// Paper distributions for every modeled document, in model order.
    pub fn paper_distributions(&self) -> Vec<PaperThemeDistribution> {
        self.doc_ids
            .iter()
            .map(|id| self.paper_distribution(id).expect("modeled doc"))
            .collect()
    }
}

/// A model whose theta is supplied directly, for the read-side operations.
#[cfg(test)]
pub(crate) fn fixture(theta: Vec<f64>, topics: usize, chunk_count: usize, doc_ids: &[&str]) -> TopicModel {
    let m = theta.len() / topics;
    let terms: Vec<String> = (0..topics).map(|i| format!("term{i}")).collect();
    let v = terms.len();
    let mut phi = vec![0.0; topics * v];
    for k in 0..topics {
        phi[k * v + k] = 1.0;
    }
    TopicModel {
        topics,
        alpha: 0.1,
        beta: 0.01,
        seed: 0,
        iterations: 1,
        vocab_hash: String::new(),
        bundle_hash: String::new(),
        terms,
        chunk_count,
        doc_ids: doc_ids.iter().map(|s| s.to_string()).collect(),
        chunk_lengths: vec![10; m],
        phi,
        theta,
        assignments: Vec::new(),
        log_likelihood: Vec::new(),
    }
}
