//! Synthetic code-mixed corpora for tests and demos.
//!
//! The generators build small Hinglish-flavored tweets whose sentiment is
//! carried by class-specific keywords, padded with shared filler words. With
//! zero confusion the classes are trivially separable from unigrams; raising
//! the confusion rate swaps in keywords from the wrong class, which is what
//! the bagging tests want.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::corpus::{Corpus, Label, ProcessedTweet};
use crate::rng::Rng;

const NEGATIVE_WORDS: &[&str] = &[
    "bekar", "bura", "kharab", "worst", "sad", "hate", "rona", "ganda",
];
const NEUTRAL_WORDS: &[&str] = &[
    "theek", "okay", "normal", "news", "update", "schedule", "kal", "aaj",
];
const POSITIVE_WORDS: &[&str] = &[
    "acha", "badhiya", "mast", "love", "great", "khushi", "superb", "happy",
];
const FILLER_WORDS: &[&str] = &[
    "yaar", "bhai", "movie", "match", "din", "raat", "log", "baat", "time", "phone", "ghar",
    "school", "gaana", "city", "photo", "video", "song", "game", "road", "shop",
];

fn class_words(label: Label) -> &'static [&'static str] {
    match label {
        Label::Negative => NEGATIVE_WORDS,
        Label::Neutral => NEUTRAL_WORDS,
        Label::Positive => POSITIVE_WORDS,
    }
}

fn generate(seed: u64, len: usize, confusion: f64) -> Corpus {
    let mut rng = Rng::seed_from(seed);
    let mut tweets = Vec::with_capacity(len);
    for i in 0..len {
        let label = Label::from_index(i % 3).unwrap();
        // Keywords usually come from the label's own pool; with probability
        // `confusion` each keyword is drawn from a uniformly random class.
        let keyword_count = 2 + rng.below(3);
        let filler_count = 3 + rng.below(4);
        let mut tokens = Vec::with_capacity(keyword_count + filler_count);
        for _ in 0..keyword_count {
            let pool = if confusion > 0.0 && rng.next_f64() < confusion {
                class_words(Label::from_index(rng.below(3)).unwrap())
            } else {
                class_words(label)
            };
            tokens.push(pool[rng.below(pool.len())].to_string());
        }
        for _ in 0..filler_count {
            tokens.push(FILLER_WORDS[rng.below(FILLER_WORDS.len())].to_string());
        }
        rng.shuffle(&mut tokens);
        tweets.push(ProcessedTweet { id: i as u64, label: Some(label), tokens });
    }
    Corpus::new(tweets)
}

/// A cleanly separable corpus: every keyword matches its tweet's label.
/// Labels cycle negative/neutral/positive, so any split along the tweet
/// order stays balanced.
pub fn separable(seed: u64, len: usize) -> Corpus {
    generate(seed, len, 0.0)
}

/// Like [`separable`], but each keyword is replaced by one from a random
/// class with probability `confusion` (label noise).
pub fn noisy(seed: u64, len: usize, confusion: f64) -> Corpus {
    generate(seed, len, confusion)
}
