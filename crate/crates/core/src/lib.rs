//! Thematic exploration of document corpora.
//!
//! The pipeline turns a manifest of plain-text documents into a corpus
//! bundle of equal-size chunks, trains an LDA model over those chunks by
//! collapsed Gibbs sampling, and derives browsing structures from it: a
//! clustered hexagonal theme map, per-paper theme wheels, theme rankings,
//! and excerpt maps for small user-selected paper sets.

pub mod bundle;
pub mod chunk;
mod codec;
pub mod corpus;
pub mod error;
pub mod excerpt;
pub mod map;
pub mod report;
pub mod session;
pub mod synthetic;
pub mod tokenize;
pub mod topic;
pub mod vocab;
pub mod wheel;

pub use error::{Error, Result};

/// Hex-encoded SHA-256 of `bytes`; used for artifact content hashes.
pub fn content_hash(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}
