//! Bag-of-ngrams features over preprocessed tweets.
//!
//! A vocabulary is built once from a training corpus: every contiguous ngram
//! of order 1..=N is counted corpus-wide (with multiplicity), ngrams seen
//! fewer than K times are dropped, and stop words are removed from the
//! unigrams that survive. The remaining entries get dense indices in a fixed
//! canonical order — ascending ngram order, then lexicographic by token bytes
//! — so a vocabulary built from the same corpus and config is always
//! identical, and feature index j means the same ngram everywhere.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::corpus::{Corpus, Label, ProcessedTweet};

/// A contiguous token sequence. Ordering is by length first, then
/// lexicographic over the tokens, which is exactly the vocabulary index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ngram {
    tokens: Vec<String>,
}

impl Ngram {
    /// Wraps a non-empty token sequence.
    ///
    /// # Panics
    ///
    /// Panics if `tokens` is empty; an ngram always has order >= 1.
    pub fn new(tokens: Vec<String>) -> Ngram {
        assert!(!tokens.is_empty(), "an ngram must contain at least one token");
        Ngram { tokens }
    }

    /// The ngram order (number of tokens).
    pub fn order(&self) -> usize {
        self.tokens.len()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

impl Ord for Ngram {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.tokens.cmp(&other.tokens))
    }
}

impl PartialOrd for Ngram {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ngram {
    /// Space-joined tokens, e.g. `bahut acha`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t)?;
        }
        Ok(())
    }
}

/// Vocabulary-building parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabConfig {
    /// Minimum corpus-wide occurrence count; ngrams seen fewer than `k` times
    /// are dropped. Must be >= 1.
    pub k: usize,
    /// Maximum ngram order; orders 1..=n are extracted. Must be >= 1.
    pub n: usize,
    /// Stop words, removed from surviving unigrams only. Matching is done on
    /// case-folded forms regardless of `case_fold`.
    pub stopwords: BTreeSet<String>,
    /// Whether tokens are lowercased before counting and lookup.
    pub case_fold: bool,
}

impl VocabConfig {
    /// Config with the given threshold and maximum order, no stop words, and
    /// case folding on.
    pub fn new(k: usize, n: usize) -> VocabConfig {
        VocabConfig { k, n, stopwords: BTreeSet::new(), case_fold: true }
    }

    pub fn with_stopwords(mut self, stopwords: BTreeSet<String>) -> VocabConfig {
        self.stopwords = stopwords;
        self
    }

    pub fn with_case_fold(mut self, case_fold: bool) -> VocabConfig {
        self.case_fold = case_fold;
        self
    }

    fn validate(&self) -> Result<(), FeatureError> {
        if self.k < 1 {
            return Err(FeatureError::InvalidConfig("k must be >= 1"));
        }
        if self.n < 1 {
            return Err(FeatureError::InvalidConfig("n must be >= 1"));
        }
        Ok(())
    }
}

/// How a tweet's ngram counts are turned into feature values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureMode {
    /// Presence only: element j is `min(count_j, 1)`.
    Binary,
    /// Raw occurrence counts.
    Count,
}

impl FeatureMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureMode::Binary => "binary",
            FeatureMode::Count => "count",
        }
    }
}

impl core::str::FromStr for FeatureMode {
    type Err = ();

    fn from_str(s: &str) -> Result<FeatureMode, ()> {
        if s.eq_ignore_ascii_case("binary") {
            Ok(FeatureMode::Binary)
        } else if s.eq_ignore_ascii_case("count") {
            Ok(FeatureMode::Count)
        } else {
            Err(())
        }
    }
}

/// Dense feature vector; length always equals the vocabulary size.
pub type FeatureVector = Vec<f64>;

/// Errors from vocabulary building and vectorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureError {
    InvalidConfig(&'static str),
    /// `from_ordered_entries` was given entries out of canonical order.
    UnorderedEntries { position: usize },
    /// A tweet without a label where one is required.
    UnlabeledTweet { id: u64 },
}

impl fmt::Display for FeatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureError::InvalidConfig(msg) => write!(f, "invalid vocabulary config: {msg}"),
            FeatureError::UnorderedEntries { position } => {
                write!(f, "vocabulary entries out of canonical order at index {position}")
            }
            FeatureError::UnlabeledTweet { id } => {
                write!(f, "tweet {id} has no label but one is required here")
            }
        }
    }
}

impl core::error::Error for FeatureError {}

/// A frozen mapping from ngrams to dense feature indices 0..len-1.
///
/// Iteration (and the indices themselves) follow the canonical [`Ngram`]
/// order, so the same entries always produce the same indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    entries: BTreeMap<Ngram, usize>,
    config: VocabConfig,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn config(&self) -> &VocabConfig {
        &self.config
    }

    /// The dense index of an ngram, if present. The ngram must already be
    /// case-folded the same way the vocabulary was built.
    pub fn index_of(&self, ngram: &Ngram) -> Option<usize> {
        self.entries.get(ngram).copied()
    }

    pub fn contains(&self, ngram: &Ngram) -> bool {
        self.entries.contains_key(ngram)
    }

    /// Entries in ascending index order (which is canonical ngram order).
    pub fn iter(&self) -> impl Iterator<Item = (&Ngram, usize)> {
        self.entries.iter().map(|(ng, idx)| (ng, *idx))
    }

    /// Rebuilds a vocabulary from entries listed in index order, as read back
    /// from a vocabulary file. The entries must already be in canonical ngram
    /// order; anything else would silently renumber features, so it is
    /// rejected instead.
    pub fn from_ordered_entries(
        entries: Vec<Ngram>,
        config: VocabConfig,
    ) -> Result<Vocabulary, FeatureError> {
        config.validate()?;
        let mut map = BTreeMap::new();
        let mut prev: Option<&Ngram> = None;
        for (position, ngram) in entries.iter().enumerate() {
            if let Some(p) = prev {
                if p >= ngram {
                    return Err(FeatureError::UnorderedEntries { position });
                }
            }
            map.insert(ngram.clone(), position);
            prev = Some(ngram);
        }
        Ok(Vocabulary { entries: map, config })
    }
}

/// Case-folds a token if requested (full Unicode lowercasing).
fn fold(token: &str, case_fold: bool) -> String {
    if case_fold {
        token.to_lowercase()
    } else {
        String::from(token)
    }
}

/// Extracts every contiguous ngram of order 1..=n from one token sequence,
/// with multiplicities. Case folding happens before extraction. A sequence
/// shorter than some order simply contributes no ngrams of that order; an
/// empty sequence contributes nothing at all.
pub fn extract_ngrams(tokens: &[String], n: usize, case_fold: bool) -> BTreeMap<Ngram, usize> {
    let folded: Vec<String> = tokens.iter().map(|t| fold(t, case_fold)).collect();
    let mut out: BTreeMap<Ngram, usize> = BTreeMap::new();
    for order in 1..=n {
        if folded.len() < order {
            break;
        }
        for window in folded.windows(order) {
            *out.entry(Ngram::new(window.to_vec())).or_insert(0) += 1;
        }
    }
    out
}

/// Corpus-wide ngram occurrence counts for orders 1..=n.
fn count_corpus_ngrams(corpus: &Corpus, n: usize, case_fold: bool) -> BTreeMap<Ngram, usize> {
    let mut counts: BTreeMap<Ngram, usize> = BTreeMap::new();
    for tweet in corpus.iter() {
        for (ngram, c) in extract_ngrams(&tweet.tokens, n, case_fold) {
            *counts.entry(ngram).or_insert(0) += c;
        }
    }
    counts
}

/// Builds the vocabulary for a training corpus: count corpus-wide, keep
/// ngrams with count >= k, then drop unigrams whose case-folded form is a
/// stop word (higher orders are never stop-word filtered), and finally assign
/// indices in canonical order. The result may be empty.
pub fn build_vocabulary(corpus: &Corpus, config: VocabConfig) -> Result<Vocabulary, FeatureError> {
    config.validate()?;
    let folded_stopwords: BTreeSet<String> =
        config.stopwords.iter().map(|w| w.to_lowercase()).collect();
    let counts = count_corpus_ngrams(corpus, config.n, config.case_fold);
    let mut entries = BTreeMap::new();
    let mut next_index = 0;
    // BTreeMap iteration is already canonical ngram order, so indices are
    // assigned 0, 1, 2, ... as we keep entries.
    for (ngram, count) in counts {
        if count < config.k {
            continue;
        }
        if ngram.order() == 1 && folded_stopwords.contains(&ngram.tokens()[0].to_lowercase()) {
            continue;
        }
        entries.insert(ngram, next_index);
        next_index += 1;
    }
    Ok(Vocabulary { entries, config })
}

/// Turns one tweet into a dense feature vector over `vocab`. Ngrams outside
/// the vocabulary are ignored; an empty tweet yields the zero vector.
pub fn vectorize(tweet: &ProcessedTweet, vocab: &Vocabulary, mode: FeatureMode) -> FeatureVector {
    let mut x = alloc::vec![0.0; vocab.len()];
    let grams = extract_ngrams(&tweet.tokens, vocab.config.n, vocab.config.case_fold);
    for (ngram, count) in grams {
        if let Some(j) = vocab.index_of(&ngram) {
            x[j] = match mode {
                FeatureMode::Binary => 1.0,
                FeatureMode::Count => count as f64,
            };
        }
    }
    x
}

/// Vectorizes a whole corpus into training examples, requiring every tweet to
/// be labeled.
pub fn labeled_examples(
    corpus: &Corpus,
    vocab: &Vocabulary,
    mode: FeatureMode,
) -> Result<Vec<(FeatureVector, Label)>, FeatureError> {
    corpus
        .iter()
        .map(|tweet| {
            let label = tweet.label.ok_or(FeatureError::UnlabeledTweet { id: tweet.id })?;
            Ok((vectorize(tweet, vocab, mode), label))
        })
        .collect()
}

/// Counts the distinct ngrams of exactly `order` whose corpus-wide occurrence
/// count is >= k. No stop-word filtering is applied; this answers "how many
/// frequent trigrams are there" style questions about a corpus.
pub fn count_frequent_ngrams(corpus: &Corpus, k: usize, order: usize, case_fold: bool) -> usize {
    count_corpus_ngrams(corpus, order, case_fold)
        .iter()
        .filter(|(ngram, count)| ngram.order() == order && **count >= k)
        .count()
}
