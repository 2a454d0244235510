//! Text normalization and tokenization.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

const ENGLISH_STOPWORDS: &str = include_str!("stopwords_en.txt");

/// The built-in English stopword list (318 terms, one per line, sorted).
pub fn english_stopwords() -> &'static BTreeSet<String> {
    static LIST: OnceLock<BTreeSet<String>> = OnceLock::new();
    LIST.get_or_init(|| ENGLISH_STOPWORDS.lines().map(str::to_owned).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    /// Minimum token length in characters.
    pub min_len: usize,
    pub stopwords: BTreeSet<String>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            lowercase: true,
            min_len: 3,
            stopwords: english_stopwords().clone(),
        }
    }
}

/// Splits `text` into maximal runs of alphabetic characters, lowercases
/// them, and drops runs shorter than `min_len` or found in the stopword list.
pub fn tokenize(text: &str, rules: &TokenizerConfig) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|run| !run.is_empty())
        .map(|run| {
            if rules.lowercase {
                run.to_lowercase()
            } else {
                run.to_owned()
            }
        })
        .filter(|tok| tok.chars().count() >= rules.min_len && !rules.stopwords.contains(tok))
        .collect()
}
