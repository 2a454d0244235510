//! Splitting a token sequence into a fixed number of near-equal chunks.

use serde::{Deserialize, Serialize};

/// Default chunks per document.
pub const DEFAULT_CHUNK_COUNT: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub doc_id: String,
    pub index: usize,
    pub tokens: Vec<u32>,
}

/// A document with fewer filtered tokens than the chunk count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TooShort {
    pub doc_id: String,
    pub tokens: usize,
    pub required: usize,
}

/// Boundaries of `c` consecutive chunks over `n` items. Sizes differ by at
/// most one; the first `n % c` chunks carry the extra item.
pub fn chunk_bounds(n: usize, c: usize) -> Vec<(usize, usize)> {
    assert!(c >= 1, "chunk count must be positive");
    let base = n / c;
    let extra = n % c;
    let mut start = 0;
    (0..c)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let span = (start, start + len);
            start += len;
            span
        })
        .collect()
}

/// Splits a document's encoded tokens into `c` chunks, or reports it as too
/// short when it has fewer than `c` tokens.
pub fn chunk_document(doc_id: &str, tokens: &[u32], c: usize) -> Result<Vec<Chunk>, TooShort> {
    if tokens.len() < c {
        return Err(TooShort {
            doc_id: doc_id.to_owned(),
            tokens: tokens.len(),
            required: c,
        });
    }
    Ok(chunk_bounds(tokens.len(), c)
        .into_iter()
        .enumerate()
        .map(|(index, (s, e))| Chunk {
            doc_id: doc_id.to_owned(),
            index,
            tokens: tokens[s..e].to_vec(),
        })
        .collect())
}
