//! Collapsed Gibbs sampler for LDA.
//!
//! Every token's topic is resampled in turn from
//!
//! ```text
//! p(z = k | rest) ∝ (n[chunk][k] + alpha) * (n[k][word] + beta) / (n[k] + V * beta)
//! ```
//!
//! with the token's own assignment removed from the counts. Randomness comes
//! from ChaCha8 (`rand_chacha`) seeded with `seed_from_u64`; uniform draws are
//! `rand`'s 53-bit `f64` in `[0, 1)`, and initial topics are drawn uniformly
//! with `random_range`. A run is therefore reproducible bit for bit across
//! platforms for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::ln_gamma;

/// Per-sweep diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepStats {
    /// 1-based sweep number.
    pub sweep: usize,
    /// Joint log-likelihood `log p(w, z)` after the sweep.
    pub log_likelihood: f64,
    /// Sum of the per-topic token counts; always equals the token count.
    pub topic_count_total: u64,
}

pub struct GibbsSampler {
    topics: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
    words: Vec<u32>,
    /// `offsets[m]..offsets[m + 1]` are the tokens of chunk `m`.
    offsets: Vec<usize>,
    assignments: Vec<u32>,
    chunk_topic: Vec<u32>,
    topic_word: Vec<u32>,
    topic_total: Vec<u32>,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
    sweeps: usize,
}

impl GibbsSampler {
    /// Draws an initial topic for every token uniformly at random.
    ///
    /// Term ids must be `< vocab_size`; `topics` must be positive.
    pub fn new<'a, I>(chunks: I, vocab_size: usize, topics: usize, alpha: f64, beta: f64, seed: u64) -> Self
    where
        I: IntoIterator<Item = &'a [u32]>,
    {
        let mut words = Vec::new();
        let mut offsets = vec![0];
        for chunk in chunks {
            words.extend_from_slice(chunk);
            offsets.push(words.len());
        }
        let n_chunks = offsets.len() - 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = Self {
            topics,
            vocab_size,
            alpha,
            beta,
            assignments: Vec::with_capacity(words.len()),
            chunk_topic: vec![0; n_chunks * topics],
            topic_word: vec![0; topics * vocab_size],
            topic_total: vec![0; topics],
            weights: vec![0.0; topics],
            words,
            offsets,
            rng: ChaCha8Rng::seed_from_u64(0),
            sweeps: 0,
        };
        for m in 0..n_chunks {
            for i in s.offsets[m]..s.offsets[m + 1] {
                let k = rng.random_range(0..topics as u32);
                s.assignments.push(k);
                s.add(m, s.words[i] as usize, k as usize);
            }
        }
        s.rng = rng;
        s
    }

    #[inline]
    fn add(&mut self, m: usize, w: usize, k: usize) {
        self.chunk_topic[m * self.topics + k] += 1;
        self.topic_word[k * self.vocab_size + w] += 1;
        self.topic_total[k] += 1;
    }

    #[inline]
    fn remove(&mut self, m: usize, w: usize, k: usize) {
        self.chunk_topic[m * self.topics + k] -= 1;
        self.topic_word[k * self.vocab_size + w] -= 1;
        self.topic_total[k] -= 1;
    }

    /// Resamples every token once, in chunk then token order.
    pub fn sweep(&mut self) -> SweepStats {
        let (kk, vv) = (self.topics, self.vocab_size);
        let v_beta = vv as f64 * self.beta;
        for m in 0..self.num_chunks() {
            for i in self.offsets[m]..self.offsets[m + 1] {
                let w = self.words[i] as usize;
                let old = self.assignments[i] as usize;
                self.remove(m, w, old);

                let row = &self.chunk_topic[m * kk..(m + 1) * kk];
                let mut total = 0.0;
                for (k, &c) in row.iter().enumerate() {
                    let p = (f64::from(c) + self.alpha)
                        * (f64::from(self.topic_word[k * vv + w]) + self.beta)
                        / (f64::from(self.topic_total[k]) + v_beta);
                    total += p;
                    self.weights[k] = total;
                }
                let u = self.rng.random::<f64>() * total;
                let new = self.weights.iter().position(|&c| u < c).unwrap_or(kk - 1);

                self.assignments[i] = new as u32;
                self.add(m, w, new);
            }
        }
        self.sweeps += 1;
        SweepStats {
            sweep: self.sweeps,
            log_likelihood: self.log_likelihood(),
            topic_count_total: self.topic_count_total(),
        }
    }

    pub fn num_chunks(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_tokens(&self) -> usize {
        self.words.len()
    }

    pub fn topic_count_total(&self) -> u64 {
        self.topic_total.iter().map(|&n| u64::from(n)).sum()
    }

    pub fn assignments(&self) -> &[u32] {
        &self.assignments
    }

    pub fn chunk_lengths(&self) -> Vec<u32> {
        self.offsets.windows(2).map(|w| (w[1] - w[0]) as u32).collect()
    }

    /// `log p(w | z) + log p(z)` under the collapsed model.
    pub fn log_likelihood(&self) -> f64 {
        let (kk, vv) = (self.topics, self.vocab_size);
        let (alpha, beta) = (self.alpha, self.beta);
        let lg_beta = ln_gamma(beta);
        let lg_alpha = ln_gamma(alpha);

        let mut words_given_topics = kk as f64 * ln_gamma(vv as f64 * beta);
        for k in 0..kk {
            for &n in &self.topic_word[k * vv..(k + 1) * vv] {
                if n > 0 {
                    words_given_topics += ln_gamma(f64::from(n) + beta) - lg_beta;
                }
            }
            words_given_topics -= ln_gamma(f64::from(self.topic_total[k]) + vv as f64 * beta);
        }

        let n_chunks = self.num_chunks();
        let mut topics_given_chunks = n_chunks as f64 * ln_gamma(kk as f64 * alpha);
        for m in 0..n_chunks {
            for &n in &self.chunk_topic[m * kk..(m + 1) * kk] {
                if n > 0 {
                    topics_given_chunks += ln_gamma(f64::from(n) + alpha) - lg_alpha;
                }
            }
            let len = (self.offsets[m + 1] - self.offsets[m]) as f64;
            topics_given_chunks -= ln_gamma(len + kk as f64 * alpha);
        }
        words_given_topics + topics_given_chunks
    }

    /// Smoothed topic-word matrix, `K × V` row-major.
    pub fn phi(&self) -> Vec<f64> {
        let (kk, vv) = (self.topics, self.vocab_size);
        let mut phi = Vec::with_capacity(kk * vv);
        for k in 0..kk {
            let denom = f64::from(self.topic_total[k]) + vv as f64 * self.beta;
            phi.extend(
                self.topic_word[k * vv..(k + 1) * vv]
                    .iter()
                    .map(|&n| (f64::from(n) + self.beta) / denom),
            );
        }
        phi
    }

    /// Smoothed chunk-topic matrix, `M × K` row-major.
    pub fn theta(&self) -> Vec<f64> {
        let kk = self.topics;
        let mut theta = Vec::with_capacity(self.num_chunks() * kk);
        for m in 0..self.num_chunks() {
            let len = (self.offsets[m + 1] - self.offsets[m]) as f64;
            let denom = len + kk as f64 * self.alpha;
            theta.extend(
                self.chunk_topic[m * kk..(m + 1) * kk]
                    .iter()
                    .map(|&n| (f64::from(n) + self.alpha) / denom),
            );
        }
        theta
    }
}
