//! Synthetic data with known structure, for testing and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::topic::TopicModel;

/// A corpus drawn from the LDA generative process with disjoint topic
/// vocabularies: topic `k` owns terms `k * V / K .. (k + 1) * V / K`.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    /// True topic-word distributions, `K` rows of length `V`.
    pub phi: Vec<Vec<f64>>,
    /// True document-topic distributions.
    pub theta: Vec<Vec<f64>>,
    pub docs: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub topics: usize,
    pub vocab: usize,
    pub docs: usize,
    pub doc_len: usize,
    /// Dirichlet concentration of each document's topic mixture.
    pub doc_concentration: f64,
    /// Dirichlet concentration of each topic over its own terms.
    pub topic_concentration: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            topics: 5,
            vocab: 500,
            docs: 200,
            doc_len: 100,
            doc_concentration: 0.1,
            topic_concentration: 1.0,
            seed: 42,
        }
    }
}

/// A draw from a symmetric Dirichlet of dimension `n`.
pub fn dirichlet(rng: &mut impl Rng, n: usize, concentration: f64) -> Vec<f64> {
    let gamma = Gamma::new(concentration, 1.0).expect("positive concentration");
    loop {
        let draws: Vec<f64> = (0..n).map(|_| gamma.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 {
            return draws.into_iter().map(|x| x / total).collect();
        }
    }
}

fn categorical(rng: &mut impl Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

impl SyntheticCorpus {
    pub fn generate(spec: &SyntheticSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let per_topic = spec.vocab / spec.topics;
        let phi: Vec<Vec<f64>> = (0..spec.topics)
            .map(|k| {
                let own = dirichlet(&mut rng, per_topic, spec.topic_concentration);
                let mut row = vec![0.0; spec.vocab];
                row[k * per_topic..(k + 1) * per_topic].copy_from_slice(&own);
                row
            })
            .collect();
        let mut theta = Vec::with_capacity(spec.docs);
        let mut docs = Vec::with_capacity(spec.docs);
        for _ in 0..spec.docs {
            let mix = dirichlet(&mut rng, spec.topics, spec.doc_concentration);
            let doc = (0..spec.doc_len)
                .map(|_| {
                    let k = categorical(&mut rng, &mix);
                    categorical(&mut rng, &phi[k]) as u32
                })
                .collect();
            theta.push(mix);
            docs.push(doc);
        }
        Self { phi, theta, docs }
    }
}

/// A model with random Dirichlet chunk distributions, for exercising the
/// read-side operations without training. Doc ids are `d0000`, `d0001`, ...
pub fn random_model(num_docs: usize, chunk_count: usize, topics: usize, concentration: f64, seed: u64) -> TopicModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = topics.max(2) * 4;
    let phi: Vec<f64> = (0..topics).flat_map(|_| dirichlet(&mut rng, vocab, 0.5)).collect();
    let theta: Vec<f64> = (0..num_docs * chunk_count)
        .flat_map(|_| dirichlet(&mut rng, topics, concentration))
        .collect();
    TopicModel {
        topics,
        alpha: concentration,
        beta: 0.01,
        seed,
        iterations: 1,
        vocab_hash: String::new(),
        bundle_hash: String::new(),
        terms: (0..vocab).map(|i| format!("t{i:04}")).collect(),
        chunk_count,
        doc_ids: (0..num_docs).map(|i| format!("d{i:04}")).collect(),
        chunk_lengths: vec![100; num_docs * chunk_count],
        phi,
        theta,
        assignments: Vec::new(),
        log_likelihood: Vec::new(),
    }
}
