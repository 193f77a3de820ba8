//! CoNLL-style tweet corpora: parsing and username/URL stripping.
//!
//! Input files hold one tweet per block: a `meta <id> [<label>]` line followed
//! by one token per line (`surface <tag>`), where the tag marks the token as
//! English, Hindi, or other. Parsing keeps everything; [`preprocess`] then
//! drops usernames (a standalone `@` plus the following token) and URL tokens,
//! and discards the language tags. Original casing is preserved.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Sentiment label. The discriminant order (negative < neutral < positive) is
/// the canonical class index used by feature vectors, networks and metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Negative = 0,
    Neutral = 1,
    Positive = 2,
}

impl Label {
    /// All labels in canonical index order.
    pub const ALL: [Label; 3] = [Label::Negative, Label::Neutral, Label::Positive];

    /// Canonical class index: negative 0, neutral 1, positive 2.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Inverse of [`Label::index`].
    pub fn from_index(index: usize) -> Option<Label> {
        Label::ALL.get(index).copied()
    }

    /// Lowercase name, as written in the simple tweet format.
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Negative => "negative",
            Label::Neutral => "neutral",
            Label::Positive => "positive",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = ();

    /// Parses a label name, case-insensitively.
    fn from_str(s: &str) -> Result<Label, ()> {
        if s.eq_ignore_ascii_case("negative") {
            Ok(Label::Negative)
        } else if s.eq_ignore_ascii_case("neutral") {
            Ok(Label::Neutral)
        } else if s.eq_ignore_ascii_case("positive") {
            Ok(Label::Positive)
        } else {
            Err(())
        }
    }
}

/// Per-token language tag from the CoNLL file: `Eng`, `Hin` or `O`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LangTag {
    Eng,
    Hin,
    Other,
}

impl LangTag {
    pub fn as_str(self) -> &'static str {
        match self {
            LangTag::Eng => "Eng",
            LangTag::Hin => "Hin",
            LangTag::Other => "O",
        }
    }
}

impl FromStr for LangTag {
    type Err = ();

    /// Parses a tag, case-insensitively (`ENG`, `eng`, `Eng` all work).
    fn from_str(s: &str) -> Result<LangTag, ()> {
        if s.eq_ignore_ascii_case("eng") {
            Ok(LangTag::Eng)
        } else if s.eq_ignore_ascii_case("hin") {
            Ok(LangTag::Hin)
        } else if s.eq_ignore_ascii_case("o") {
            Ok(LangTag::Other)
        } else {
            Err(())
        }
    }
}

/// A surface form plus its language tag, exactly as read from the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub surface: String,
    pub tag: LangTag,
}

/// One tweet as parsed from a CoNLL file, before preprocessing.
///
/// `label` is `None` for unlabeled data (test-time input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTweet {
    pub id: u64,
    pub label: Option<Label>,
    pub tokens: Vec<RawToken>,
}

/// A tweet after username/URL stripping; only the surviving surface forms
/// remain, in their original order and casing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessedTweet {
    pub id: u64,
    pub label: Option<Label>,
    pub tokens: Vec<String>,
}

/// An ordered collection of processed tweets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub tweets: Vec<ProcessedTweet>,
}

impl Corpus {
    pub fn new(tweets: Vec<ProcessedTweet>) -> Self {
        Corpus { tweets }
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, ProcessedTweet> {
        self.tweets.iter()
    }
}

/// Errors raised while parsing a CoNLL tweet file. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusError {
    /// A token line appeared before any `meta` line.
    TokenBeforeMeta { line: usize },
    /// A `meta` line did not have 2 or 3 fields.
    MalformedMeta { line: usize, content: String },
    /// The id field of a `meta` line was not a non-negative integer.
    InvalidId { line: usize, field: String },
    /// The label field of a `meta` line was not a known sentiment.
    UnknownLabel { line: usize, field: String },
    /// A token line did not have exactly 2 fields.
    MalformedTokenLine { line: usize, content: String },
    /// A token's language tag was not `Eng`, `Hin` or `O`.
    UnknownTag { line: usize, field: String },
    /// A `meta` line was followed by no token lines.
    EmptyTweet { line: usize, id: u64 },
    /// The same tweet id appeared twice in one file.
    DuplicateId { line: usize, id: u64 },
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::TokenBeforeMeta { line } => {
                write!(f, "line {line}: token line before any meta line")
            }
            CorpusError::MalformedMeta { line, content } => {
                write!(f, "line {line}: malformed meta line {content:?} (expected `meta <id> [<label>]`)")
            }
            CorpusError::InvalidId { line, field } => {
                write!(f, "line {line}: invalid tweet id {field:?}")
            }
            CorpusError::UnknownLabel { line, field } => {
                write!(f, "line {line}: unknown sentiment label {field:?}")
            }
            CorpusError::MalformedTokenLine { line, content } => {
                write!(f, "line {line}: malformed token line {content:?} (expected `<surface> <tag>`)")
            }
            CorpusError::UnknownTag { line, field } => {
                write!(f, "line {line}: unknown language tag {field:?}")
            }
            CorpusError::EmptyTweet { line, id } => {
                write!(f, "line {line}: tweet {id} has no tokens")
            }
            CorpusError::DuplicateId { line, id } => {
                write!(f, "line {line}: duplicate tweet id {id}")
            }
        }
    }
}

impl core::error::Error for CorpusError {}

/// Splits a line into fields on runs of spaces and tabs.
fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split([' ', '\t']).filter(|s| !s.is_empty())
}

/// Parses the CoNLL tweet format.
///
/// Blank lines are ignored; a trailing `\r` on each line is tolerated so CRLF
/// files parse unchanged. Empty input yields an empty list. Tweets keep the
/// order they appear in; ids must be unique within the input and every tweet
/// must have at least one token.
pub fn parse_conll(input: &str) -> Result<Vec<RawTweet>, CorpusError> {
    let mut tweets: Vec<RawTweet> = Vec::new();
    let mut seen_ids: alloc::collections::BTreeSet<u64> = alloc::collections::BTreeSet::new();
    // Line number of the meta line of the tweet currently being collected,
    // for the empty-tweet diagnostic.
    let mut open_meta: Option<usize> = None;

    for (idx, raw_line) in input.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let mut parts = fields(line);
        let Some(first) = parts.next() else {
            continue; // blank line
        };

        if first == "meta" {
            if let (Some(meta_line), Some(tweet)) = (open_meta, tweets.last()) {
                if tweet.tokens.is_empty() {
                    return Err(CorpusError::EmptyTweet { line: meta_line, id: tweet.id });
                }
            }
            let Some(id_field) = parts.next() else {
                return Err(CorpusError::MalformedMeta { line: line_no, content: line.to_string() });
            };
            let id: u64 = id_field
                .parse()
                .map_err(|_| CorpusError::InvalidId { line: line_no, field: id_field.to_string() })?;
            let label = match parts.next() {
                None => None,
                Some(label_field) => Some(label_field.parse::<Label>().map_err(|_| {
                    CorpusError::UnknownLabel { line: line_no, field: label_field.to_string() }
                })?),
            };
            if parts.next().is_some() {
                return Err(CorpusError::MalformedMeta { line: line_no, content: line.to_string() });
            }
            if !seen_ids.insert(id) {
                return Err(CorpusError::DuplicateId { line: line_no, id });
            }
            tweets.push(RawTweet { id, label, tokens: Vec::new() });
            open_meta = Some(line_no);
        } else {
            let Some(current) = tweets.last_mut() else {
                return Err(CorpusError::TokenBeforeMeta { line: line_no });
            };
            let Some(tag_field) = parts.next() else {
                return Err(CorpusError::MalformedTokenLine { line: line_no, content: line.to_string() });
            };
            if parts.next().is_some() {
                return Err(CorpusError::MalformedTokenLine { line: line_no, content: line.to_string() });
            }
            let tag = tag_field
                .parse::<LangTag>()
                .map_err(|_| CorpusError::UnknownTag { line: line_no, field: tag_field.to_string() })?;
            current.tokens.push(RawToken { surface: first.to_string(), tag });
        }
    }

    if let (Some(meta_line), Some(tweet)) = (open_meta, tweets.last()) {
        if tweet.tokens.is_empty() {
            return Err(CorpusError::EmptyTweet { line: meta_line, id: tweet.id });
        }
    }
    Ok(tweets)
}

/// Returns true for tokens that should be treated as URLs: after ASCII
/// lowercasing, anything starting with `http://`, `https://` or `www.`, or
/// containing `://`.
pub fn is_url(token: &str) -> bool {
    let lower = token.to_ascii_lowercase();
    lower.starts_with("http://")
        || lower.starts_with("https://")
        || lower.starts_with("www.")
        || lower.contains("://")
}

/// Strips usernames and URLs from one tweet and drops the language tags.
///
/// Username removal deletes a standalone `@` token *and* exactly one token
/// following it (the handle itself, however it was tokenized). The scan is
/// left to right, so in `@ @ x` the first `@` consumes the second and `x`
/// survives. A trailing `@` with nothing after it is simply deleted. Tokens
/// that merely contain `@` are kept. The result may be empty.
pub fn preprocess(tweet: &RawTweet) -> ProcessedTweet {
    let mut tokens = Vec::with_capacity(tweet.tokens.len());
    let mut i = 0;
    while i < tweet.tokens.len() {
        let surface = tweet.tokens[i].surface.as_str();
        if surface == "@" {
            i += 2; // the marker and the handle after it
        } else if is_url(surface) {
            i += 1;
        } else {
            tokens.push(surface.to_string());
            i += 1;
        }
    }
    ProcessedTweet { id: tweet.id, label: tweet.label, tokens }
}

/// Preprocesses a whole parsed file, preserving tweet order.
pub fn preprocess_corpus(raw: &[RawTweet]) -> Corpus {
    Corpus::new(raw.iter().map(preprocess).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    extern crate alloc;

    const SAMPLE: &str = "meta\t173\tpositive\n\
@\tO\n\
BeingSalmanKhan\tEng\n\
It\tEng\n\
means\tEng\n\
sidhi\tHin\n\
sadhi\tHin\n\
ladki\tHin\n\
best\tEng\n\
couple\tEng\n";

    #[test]
    fn parses_sample_tweet() {
        let tweets = parse_conll(SAMPLE).unwrap();
        assert_eq!(tweets.len(), 1);
        let t = &tweets[0];
        assert_eq!(t.id, 173);
        assert_eq!(t.label, Some(Label::Positive));
        assert_eq!(t.tokens.len(), 9);
        assert_eq!(t.tokens[0].surface, "@");
        assert_eq!(t.tokens[0].tag, LangTag::Other);
        assert_eq!(t.tokens[1].surface, "BeingSalmanKhan");
        assert_eq!(t.tokens[1].tag, LangTag::Eng);
        assert_eq!(t.tokens[4].surface, "sidhi");
        assert_eq!(t.tokens[4].tag, LangTag::Hin);
    }

    #[test]
    fn preprocesses_sample_tweet() {
        let tweets = parse_conll(SAMPLE).unwrap();
        let p = preprocess(&tweets[0]);
        assert_eq!(p.id, 173);
        assert_eq!(p.label, Some(Label::Positive));
        assert_eq!(
            p.tokens,
            vec!["It", "means", "sidhi", "sadhi", "ladki", "best", "couple"]
        );
    }

    #[test]
    fn empty_input_is_empty_corpus() {
        assert_eq!(parse_conll("").unwrap(), vec![]);
        assert_eq!(parse_conll("\n\n").unwrap(), vec![]);
    }

    #[test]
    fn meta_without_label_is_unlabeled() {
        let tweets = parse_conll("meta 7\nhello Eng\n").unwrap();
        assert_eq!(tweets[0].label, None);
        assert_eq!(tweets[0].id, 7);
    }

    #[test]
    fn fields_split_on_mixed_runs_of_whitespace() {
        let tweets = parse_conll("meta \t 12  negative\nword\t \tHIN\n").unwrap();
        assert_eq!(tweets[0].id, 12);
        assert_eq!(tweets[0].label, Some(Label::Negative));
        assert_eq!(tweets[0].tokens[0].tag, LangTag::Hin);
    }

    #[test]
    fn crlf_input_parses_like_lf() {
        let lf = parse_conll("meta 1 neutral\nhi Eng\n").unwrap();
        let crlf = parse_conll("meta 1 neutral\r\nhi Eng\r\n").unwrap();
        assert_eq!(lf, crlf);
    }

    #[test]
    fn rejects_token_before_meta() {
        assert_eq!(
            parse_conll("hello Eng\n"),
            Err(CorpusError::TokenBeforeMeta { line: 1 })
        );
    }

    #[test]
    fn rejects_bad_meta_lines() {
        assert!(matches!(
            parse_conll("meta\n"),
            Err(CorpusError::MalformedMeta { line: 1, .. })
        ));
        assert!(matches!(
            parse_conll("meta 1 positive extra\n"),
            Err(CorpusError::MalformedMeta { line: 1, .. })
        ));
        assert!(matches!(
            parse_conll("meta abc\n"),
            Err(CorpusError::InvalidId { line: 1, .. })
        ));
        assert!(matches!(
            parse_conll("meta 1 happy\n"),
            Err(CorpusError::UnknownLabel { line: 1, .. })
        ));
    }

    #[test]
    fn rejects_bad_token_lines() {
        assert!(matches!(
            parse_conll("meta 1\nword\n"),
            Err(CorpusError::MalformedTokenLine { line: 2, .. })
        ));
        assert!(matches!(
            parse_conll("meta 1\nword Eng extra\n"),
            Err(CorpusError::MalformedTokenLine { line: 2, .. })
        ));
        assert!(matches!(
            parse_conll("meta 1\nword Fr\n"),
            Err(CorpusError::UnknownTag { line: 2, .. })
        ));
    }

    #[test]
    fn rejects_empty_tweets() {
        assert_eq!(
            parse_conll("meta 1 positive\n"),
            Err(CorpusError::EmptyTweet { line: 1, id: 1 })
        );
        assert_eq!(
            parse_conll("meta 1 positive\nmeta 2 negative\nhi Eng\n"),
            Err(CorpusError::EmptyTweet { line: 1, id: 1 })
        );
    }

    #[test]
    fn rejects_duplicate_ids() {
        assert_eq!(
            parse_conll("meta 5\na Eng\nmeta 5\nb Eng\n"),
            Err(CorpusError::DuplicateId { line: 3, id: 5 })
        );
    }

    #[test]
    fn label_round_trip_and_order() {
        for (i, label) in Label::ALL.iter().enumerate() {
            assert_eq!(label.index(), i);
            assert_eq!(Label::from_index(i), Some(*label));
            assert_eq!(label.as_str().parse::<Label>(), Ok(*label));
        }
        assert_eq!("POSITIVE".parse::<Label>(), Ok(Label::Positive));
        assert!("pos".parse::<Label>().is_err());
        assert_eq!(Label::from_index(3), None);
        assert!(Label::Negative < Label::Neutral && Label::Neutral < Label::Positive);
    }

    #[test]
    fn url_detection_cases() {
        assert!(is_url("http://t.co/x"));
        assert!(is_url("HTTPS://example.com"));
        assert!(is_url("www.example.com"));
        assert!(is_url("ftp://files.example.com"));
        assert!(!is_url("example.com"));
        assert!(!is_url("howwwdy"));
        assert!(!is_url("#www"));
    }

    fn raw(tokens: &[&str]) -> RawTweet {
        RawTweet {
            id: 1,
            label: None,
            tokens: tokens
                .iter()
                .map(|s| RawToken { surface: s.to_string(), tag: LangTag::Other })
                .collect(),
        }
    }

    #[test]
    fn preprocess_drops_username_pairs() {
        assert_eq!(preprocess(&raw(&["@", "user", "hi"])).tokens, vec!["hi"]);
        // Trailing @ with no handle after it.
        assert_eq!(preprocess(&raw(&["hi", "@"])).tokens, vec!["hi"]);
        // Left-to-right: the first @ consumes the second, x survives.
        assert_eq!(preprocess(&raw(&["@", "@", "x"])).tokens, vec!["x"]);
        // Tokens merely containing @ are kept.
        assert_eq!(preprocess(&raw(&["a@b"])).tokens, vec!["a@b"]);
    }

    #[test]
    fn preprocess_drops_urls_keeps_hashtags_and_casing() {
        let p = preprocess(&raw(&["Check", "#Trending", "http://t.co/abc", "NOW"]));
        assert_eq!(p.tokens, vec!["Check", "#Trending", "NOW"]);
    }

    #[test]
    fn preprocess_can_empty_a_tweet() {
        assert_eq!(preprocess(&raw(&["@", "user"])).tokens, Vec::<String>::new());
        assert_eq!(preprocess(&raw(&["www.a.com"])).tokens, Vec::<String>::new());
    }

    #[test]
    fn username_rule_consumes_url_handles_too() {
        // The token after @ is removed regardless of what it looks like.
        assert_eq!(
            preprocess(&raw(&["@", "www.a.com", "ok"])).tokens,
            vec!["ok"]
        );
    }

    #[test]
    fn preprocess_corpus_preserves_order() {
        let tweets = parse_conll("meta 2 neutral\nb Eng\nmeta 1 positive\na Hin\n").unwrap();
        let corpus = preprocess_corpus(&tweets);
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.tweets[0].id, 2);
        assert_eq!(corpus.tweets[1].id, 1);
    }

    #[test]
    fn error_messages_name_the_line() {
        let err = parse_conll("meta 1\nword Fr\n").unwrap_err();
        let msg = alloc::format!("{err}");
        assert!(msg.contains("line 2"), "got: {msg}");
        assert!(msg.contains("Fr"), "got: {msg}");
    }
}
