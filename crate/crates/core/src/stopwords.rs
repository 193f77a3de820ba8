//! Bundled English stop-word list.
//!
//! This is the widely used English list popularized by NLTK (179 entries,
//! including contraction fragments like `don` / `t` that show up when tweets
//! are tokenized aggressively). Callers can extend or replace it; vocabulary
//! building compares case-folded forms against it.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};

/// The bundled list, lowercase, in alphabetical order.
pub const ENGLISH: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "ain", "all", "am", "an", "and", "any",
    "are", "aren", "aren't", "as", "at", "be", "because", "been", "before", "being", "below",
    "between", "both", "but", "by", "can", "couldn", "couldn't", "d", "did", "didn", "didn't",
    "do", "does", "doesn", "doesn't", "doing", "don", "don't", "down", "during", "each", "few",
    "for", "from", "further", "had", "hadn", "hadn't", "has", "hasn", "hasn't", "have", "haven",
    "haven't", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
    "i", "if", "in", "into", "is", "isn", "isn't", "it", "it's", "its", "itself", "just", "ll",
    "m", "ma", "me", "mightn", "mightn't", "more", "most", "mustn", "mustn't", "my", "myself",
    "needn", "needn't", "no", "nor", "not", "now", "o", "of", "off", "on", "once", "only", "or",
    "other", "our", "ours", "ourselves", "out", "over", "own", "re", "s", "same", "shan",
    "shan't", "she", "she's", "should", "should've", "shouldn", "shouldn't", "so", "some", "such",
    "t", "than", "that", "that'll", "the", "their", "theirs", "them", "themselves", "then",
    "there", "these", "they", "this", "those", "through", "to", "too", "under", "until", "up",
    "ve", "very", "was", "wasn", "wasn't", "we", "were", "weren", "weren't", "what", "when",
    "where", "which", "while", "who", "whom", "why", "will", "with", "won", "won't", "wouldn",
    "wouldn't", "y", "you", "you'd", "you'll", "you're", "you've", "your", "yours", "yourself",
    "yourselves",
];

/// The bundled list as an owned set, ready for a `VocabConfig`.
pub fn english_set() -> BTreeSet<String> {
    ENGLISH.iter().map(|w| w.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_is_lowercase_sorted_and_distinct() {
        let set = english_set();
        assert_eq!(set.len(), ENGLISH.len(), "duplicates in the bundled list");
        for w in ENGLISH {
            assert_eq!(*w, w.to_lowercase());
        }
        let mut sorted: alloc::vec::Vec<&str> = ENGLISH.to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, ENGLISH);
    }

    #[test]
    fn common_function_words_present() {
        let set = english_set();
        for w in ["the", "is", "and", "it", "not", "you"] {
            assert!(set.contains(w), "missing {w:?}");
        }
        assert!(!set.contains("best"));
        assert!(!set.contains("ladki"));
    }

    extern crate alloc;
}
