//! On-disk formats: the simple tweet TSV, prediction files, vocabulary files,
//! model files, ensemble directories, and stop-word lists.
//!
//! Everything is UTF-8 text. Vocabulary and model files are bit-exact: saving
//! what was loaded reproduces the original bytes, and floating-point values
//! survive the round trip unchanged (they are printed as the shortest decimal
//! that parses back to the same 64-bit float).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use mixbow_core::corpus::{Corpus, Label, ProcessedTweet};
use mixbow_core::ensemble::{Ensemble, EnsembleConfig};
use mixbow_core::features::{Ngram, VocabConfig, Vocabulary};
use mixbow_core::network::{LayerParams, Matrix, Network, NetworkConfig, Optimizer};
use thiserror::Error;

use crate::error::CliError;

/// Name of the manifest file inside an ensemble directory.
pub const MANIFEST_NAME: &str = "manifest";
/// Name of the vocabulary file an ensemble directory carries.
pub const ENSEMBLE_VOCAB_NAME: &str = "vocab";

/// A malformed file. The path is attached by the caller, which knows it.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Structure(String),
}

fn line_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Line { line, msg: msg.into() }
}

/// Converts a [`FormatError`] into a data-class [`CliError`] naming the file.
pub fn data_error(path: &Path, e: FormatError) -> CliError {
    CliError::Data(format!("{}: {}", path.display(), e))
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::io(path, e))
}

/// Iterates (1-based line number, line) with trailing `\r` stripped and fully
/// blank lines dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.is_empty())
}

// ---------------------------------------------------------------------------
// Simple tweet format: one line per tweet, "id TAB tokens TAB label".
// ---------------------------------------------------------------------------

/// Renders a corpus in the simple format: per tweet, its id, a tab, the
/// space-joined tokens, a tab, and the lowercase label (`-` when absent).
pub fn corpus_to_simple(corpus: &Corpus) -> String {
    let mut out = String::new();
    for tweet in corpus.iter() {
        out.push_str(&tweet.id.to_string());
        out.push('\t');
        out.push_str(&tweet.tokens.join(" "));
        out.push('\t');
        match tweet.label {
            Some(label) => out.push_str(label.as_str()),
            None => out.push('-'),
        }
        out.push('\n');
    }
    out
}

/// Parses the simple format back into a corpus (the inverse of
/// [`corpus_to_simple`]). Duplicate ids are rejected: they would make joins
/// on id ambiguous.
pub fn corpus_from_simple(text: &str) -> Result<Corpus, FormatError> {
    let mut tweets = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, content) in content_lines(text) {
        let fields: Vec<&str> = content.split('\t').collect();
        if fields.len() != 3 {
            return Err(line_err(
                line,
                format!("expected 3 tab-separated fields, got {}", fields.len()),
            ));
        }
        let id: u64 = fields[0]
            .parse()
            .map_err(|_| line_err(line, format!("invalid tweet id {:?}", fields[0])))?;
        if !seen.insert(id) {
            return Err(line_err(line, format!("duplicate tweet id {id}")));
        }
        let tokens: Vec<String> = fields[1].split_whitespace().map(String::from).collect();
        let label = parse_label_field(line, fields[2])?;
        tweets.push(ProcessedTweet { id, label, tokens });
    }
    Ok(Corpus::new(tweets))
}

fn parse_label_field(line: usize, field: &str) -> Result<Option<Label>, FormatError> {
    if field == "-" {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|()| line_err(line, format!("unknown label {field:?}")))
}

pub fn load_simple(path: &Path) -> Result<Corpus, CliError> {
    corpus_from_simple(&read_file(path)?).map_err(|e| data_error(path, e))
}

// ---------------------------------------------------------------------------
// Label files: predictions ("id TAB label") and gold label extraction.
// ---------------------------------------------------------------------------

/// Renders predictions as "id TAB label" lines, in the given order.
pub fn predictions_to_string(preds: &[(u64, Label)]) -> String {
    let mut out = String::new();
    for (id, label) in preds {
        let _ = writeln!(out, "{id}\t{label}");
    }
    out
}

/// Reads (id, label) pairs from either a prediction file ("id TAB label") or
/// a simple-format file ("id TAB tokens TAB label"); the two may be mixed.
/// Every line must carry a real label; `-` is an error here, since these
/// pairs exist to be scored.
pub fn labels_from_str(text: &str) -> Result<Vec<(u64, Label)>, FormatError> {
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, content) in content_lines(text) {
        let fields: Vec<&str> = content.split('\t').collect();
        let (id_field, label_field) = match fields.len() {
            2 => (fields[0], fields[1]),
            3 => (fields[0], fields[2]),
            n => {
                return Err(line_err(line, format!("expected 2 or 3 tab-separated fields, got {n}")))
            }
        };
        let id: u64 = id_field
            .parse()
            .map_err(|_| line_err(line, format!("invalid tweet id {id_field:?}")))?;
        if !seen.insert(id) {
            return Err(line_err(line, format!("duplicate tweet id {id}")));
        }
        let label = parse_label_field(line, label_field)?
            .ok_or_else(|| line_err(line, format!("tweet {id} has no label")))?;
        pairs.push((id, label));
    }
    Ok(pairs)
}

pub fn load_labels(path: &Path) -> Result<Vec<(u64, Label)>, CliError> {
    labels_from_str(&read_file(path)?).map_err(|e| data_error(path, e))
}

// ---------------------------------------------------------------------------
// Stop-word files: one token per line.
// ---------------------------------------------------------------------------

pub fn stopwords_from_str(text: &str) -> BTreeSet<String> {
    content_lines(text).map(|(_, l)| l.trim().to_string()).filter(|w| !w.is_empty()).collect()
}

pub fn load_stopwords(path: &Path) -> Result<BTreeSet<String>, CliError> {
    Ok(stopwords_from_str(&read_file(path)?))
}

// ---------------------------------------------------------------------------
// Vocabulary files.
// ---------------------------------------------------------------------------

/// Renders a vocabulary: header `vocab v1 K=<K> N=<N> case_fold=<0|1>`, then
/// one `index TAB ngram` line per entry in index order.
pub fn vocab_to_string(vocab: &Vocabulary) -> String {
    let config = vocab.config();
    let mut out = format!(
        "vocab v1 K={} N={} case_fold={}\n",
        config.k,
        config.n,
        u8::from(config.case_fold)
    );
    for (ngram, index) in vocab.iter() {
        let _ = writeln!(out, "{index}\t{ngram}");
    }
    out
}

/// Parses a vocabulary file. The loaded config carries the header's K, N and
/// case_fold but an empty stop-word set: stop-word removal happens when a
/// vocabulary is built, so the surviving entries already reflect it.
pub fn vocab_from_str(text: &str) -> Result<Vocabulary, FormatError> {
    let mut lines = content_lines(text);
    let (header_no, header) =
        lines.next().ok_or_else(|| FormatError::Structure("empty vocabulary file".into()))?;
    let parts: Vec<&str> = header.split(' ').collect();
    if parts.len() != 5 || parts[0] != "vocab" || parts[1] != "v1" {
        return Err(line_err(header_no, format!("expected \"vocab v1 K=.. N=.. case_fold=..\" header, got {header:?}")));
    }
    let k: usize = parse_kv(header_no, parts[2], "K")?;
    let n: usize = parse_kv(header_no, parts[3], "N")?;
    let fold_flag: u8 = parse_kv(header_no, parts[4], "case_fold")?;
    if fold_flag > 1 {
        return Err(line_err(header_no, "case_fold must be 0 or 1"));
    }

    let mut entries = Vec::new();
    for (line, content) in lines {
        let (index_field, ngram_field) = content
            .split_once('\t')
            .ok_or_else(|| line_err(line, "expected \"index TAB ngram\""))?;
        let index: usize = index_field
            .parse()
            .map_err(|_| line_err(line, format!("invalid index {index_field:?}")))?;
        if index != entries.len() {
            return Err(line_err(line, format!("expected index {}, got {index}", entries.len())));
        }
        let tokens: Vec<String> = ngram_field.split(' ').map(String::from).collect();
        if tokens.iter().any(String::is_empty) {
            return Err(line_err(line, "empty token in ngram"));
        }
        if tokens.len() > n {
            return Err(line_err(line, format!("ngram order {} exceeds N={n}", tokens.len())));
        }
        entries.push(Ngram::new(tokens));
    }
    let config = VocabConfig::new(k, n).with_case_fold(fold_flag == 1);
    Vocabulary::from_ordered_entries(entries, config)
        .map_err(|e| FormatError::Structure(e.to_string()))
}

fn parse_kv<T: std::str::FromStr>(line: usize, part: &str, key: &str) -> Result<T, FormatError> {
    let value = part
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| line_err(line, format!("expected {key}=<value>, got {part:?}")))?;
    value.parse().map_err(|_| line_err(line, format!("invalid value in {part:?}")))
}

pub fn save_vocab(path: &Path, vocab: &Vocabulary) -> Result<(), CliError> {
    write_file(path, &vocab_to_string(vocab))
}

pub fn load_vocab(path: &Path) -> Result<Vocabulary, CliError> {
    vocab_from_str(&read_file(path)?).map_err(|e| data_error(path, e))
}

// ---------------------------------------------------------------------------
// Model files.
// ---------------------------------------------------------------------------

/// The configuration keys a model file must carry, in file order (the
/// [`NetworkConfig`] field order).
const MODEL_KEYS: [&str; 13] = [
    "input_dim",
    "num_layers",
    "hidden_size",
    "output_dim",
    "seed",
    "learning_rate",
    "epochs",
    "batch_size",
    "optimizer",
    "adam_beta1",
    "adam_beta2",
    "adam_epsilon",
    "l2_weight_decay",
];

/// Renders a network: `model v1`, the full config as key=value lines, then
/// per layer a `layer <i> <out> <in>` line followed by the row-major weights
/// and then the biases, one value per line.
pub fn model_to_string(net: &Network) -> String {
    let c = &net.config;
    let mut out = String::from("model v1\n");
    let _ = writeln!(out, "input_dim={}", c.input_dim);
    let _ = writeln!(out, "num_layers={}", c.num_layers);
    let _ = writeln!(out, "hidden_size={}", c.hidden_size);
    let _ = writeln!(out, "output_dim={}", c.output_dim);
    let _ = writeln!(out, "seed={}", c.seed);
    let _ = writeln!(out, "learning_rate={}", c.learning_rate);
    let _ = writeln!(out, "epochs={}", c.epochs);
    let _ = writeln!(out, "batch_size={}", c.batch_size);
    let _ = writeln!(out, "optimizer={}", c.optimizer);
    let _ = writeln!(out, "adam_beta1={}", c.adam_beta1);
    let _ = writeln!(out, "adam_beta2={}", c.adam_beta2);
    let _ = writeln!(out, "adam_epsilon={}", c.adam_epsilon);
    let _ = writeln!(out, "l2_weight_decay={}", c.l2_weight_decay);
    for (i, layer) in net.layers.iter().enumerate() {
        let rows = layer.weights.rows();
        let cols = layer.weights.cols();
        let _ = writeln!(out, "layer {i} {rows} {cols}");
        for value in layer.weights.data() {
            let _ = writeln!(out, "{value}");
        }
        for value in &layer.biases {
            let _ = writeln!(out, "{value}");
        }
    }
    out
}

/// Parses a model file back into a network (the inverse of
/// [`model_to_string`]). Each float is recovered exactly.
pub fn model_from_str(text: &str) -> Result<Network, FormatError> {
    let mut lines = content_lines(text).peekable();
    let (line, header) =
        lines.next().ok_or_else(|| FormatError::Structure("empty model file".into()))?;
    if header != "model v1" {
        return Err(line_err(line, format!("expected \"model v1\" header, got {header:?}")));
    }

    let mut kvs: Vec<(String, usize, String)> = Vec::new();
    while let Some(&(line, content)) = lines.peek() {
        if content.starts_with("layer ") {
            break;
        }
        lines.next();
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| line_err(line, format!("expected key=value, got {content:?}")))?;
        if !MODEL_KEYS.contains(&key) {
            return Err(line_err(line, format!("unknown config key {key:?}")));
        }
        if kvs.iter().any(|(k, _, _)| k == key) {
            return Err(line_err(line, format!("duplicate config key {key:?}")));
        }
        kvs.push((key.to_string(), line, value.to_string()));
    }
    let lookup = |key: &str| -> Result<(usize, &str), FormatError> {
        kvs.iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, line, value)| (*line, value.as_str()))
            .ok_or_else(|| FormatError::Structure(format!("missing config key {key:?}")))
    };
    fn want<T: std::str::FromStr>((line, raw): (usize, &str), key: &str) -> Result<T, FormatError> {
        raw.parse().map_err(|_| line_err(line, format!("invalid value for {key}: {raw:?}")))
    }

    let config = NetworkConfig {
        input_dim: want(lookup("input_dim")?, "input_dim")?,
        num_layers: want(lookup("num_layers")?, "num_layers")?,
        hidden_size: want(lookup("hidden_size")?, "hidden_size")?,
        output_dim: want(lookup("output_dim")?, "output_dim")?,
        seed: want(lookup("seed")?, "seed")?,
        learning_rate: want(lookup("learning_rate")?, "learning_rate")?,
        epochs: want(lookup("epochs")?, "epochs")?,
        batch_size: want(lookup("batch_size")?, "batch_size")?,
        optimizer: {
            let (line, raw) = lookup("optimizer")?;
            raw.parse::<Optimizer>()
                .map_err(|()| line_err(line, format!("invalid value for optimizer: {raw:?}")))?
        },
        adam_beta1: want(lookup("adam_beta1")?, "adam_beta1")?,
        adam_beta2: want(lookup("adam_beta2")?, "adam_beta2")?,
        adam_epsilon: want(lookup("adam_epsilon")?, "adam_epsilon")?,
        l2_weight_decay: want(lookup("l2_weight_decay")?, "l2_weight_decay")?,
    };
    config.validate().map_err(|e| FormatError::Structure(format!("stored config: {e}")))?;

    let mut layers = Vec::with_capacity(config.num_layers);
    for (i, (rows, cols)) in config.layer_dims().into_iter().enumerate() {
        let (line, content) = lines
            .next()
            .ok_or_else(|| FormatError::Structure(format!("missing layer {i}")))?;
        let parts: Vec<&str> = content.split(' ').collect();
        let ok = parts.len() == 4
            && parts[0] == "layer"
            && parts[1].parse() == Ok(i)
            && parts[2].parse() == Ok(rows)
            && parts[3].parse() == Ok(cols);
        if !ok {
            return Err(line_err(
                line,
                format!("expected \"layer {i} {rows} {cols}\", got {content:?}"),
            ));
        }
        let mut take = |what: &str| -> Result<f64, FormatError> {
            let (line, content) = lines
                .next()
                .ok_or_else(|| FormatError::Structure(format!("layer {i}: missing {what}")))?;
            content.parse().map_err(|_| line_err(line, format!("invalid float {content:?}")))
        };
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(take("weight")?);
        }
        let mut biases = Vec::with_capacity(rows);
        for _ in 0..rows {
            biases.push(take("bias")?);
        }
        layers.push(LayerParams { weights: Matrix::from_vec(rows, cols, data), biases });
    }
    if let Some((line, content)) = lines.next() {
        return Err(line_err(line, format!("trailing content {content:?}")));
    }
    Ok(Network { config, layers })
}

pub fn save_model(path: &Path, net: &Network) -> Result<(), CliError> {
    write_file(path, &model_to_string(net))
}

pub fn load_model(path: &Path) -> Result<Network, CliError> {
    model_from_str(&read_file(path)?).map_err(|e| data_error(path, e))
}

// ---------------------------------------------------------------------------
// Ensemble directories.
// ---------------------------------------------------------------------------

/// Writes an ensemble as a directory: a `manifest` ("ensemble v1" plus
/// num_bags, master_seed, and the vocabulary file name), the shared
/// vocabulary, and one model file per member named `member_<i>`.
pub fn save_ensemble(dir: &Path, ensemble: &Ensemble, vocab: &Vocabulary) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let manifest = format!(
        "ensemble v1\nnum_bags={}\nmaster_seed={}\nvocab_file={}\n",
        ensemble.config.num_bags, ensemble.config.master_seed, ENSEMBLE_VOCAB_NAME
    );
    write_file(&dir.join(MANIFEST_NAME), &manifest)?;
    save_vocab(&dir.join(ENSEMBLE_VOCAB_NAME), vocab)?;
    for (i, member) in ensemble.members.iter().enumerate() {
        save_model(&dir.join(format!("member_{i}")), member)?;
    }
    Ok(())
}

/// Loads an ensemble directory. The returned config's `base` mirrors member
/// 0's stored config (whose seed is that member's derived seed); prediction
/// uses only the members, so this is informational.
pub fn load_ensemble(dir: &Path) -> Result<(Ensemble, Vocabulary), CliError> {
    let manifest_path = dir.join(MANIFEST_NAME);
    let text = read_file(&manifest_path)?;
    let mut lines = content_lines(&text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| data_error(&manifest_path, FormatError::Structure("empty manifest".into())))?;
    if header != "ensemble v1" {
        return Err(data_error(
            &manifest_path,
            line_err(line, format!("expected \"ensemble v1\" header, got {header:?}")),
        ));
    }
    let mut num_bags: Option<usize> = None;
    let mut master_seed: Option<u64> = None;
    let mut vocab_file: Option<String> = None;
    for (line, content) in lines {
        let (key, value) = content.split_once('=').ok_or_else(|| {
            data_error(&manifest_path, line_err(line, format!("expected key=value, got {content:?}")))
        })?;
        let invalid =
            || data_error(&manifest_path, line_err(line, format!("invalid value {value:?} for {key}")));
        match key {
            "num_bags" => num_bags = Some(value.parse().map_err(|_| invalid())?),
            "master_seed" => master_seed = Some(value.parse().map_err(|_| invalid())?),
            "vocab_file" => vocab_file = Some(value.to_string()),
            _ => {
                return Err(data_error(
                    &manifest_path,
                    line_err(line, format!("unknown manifest key {key:?}")),
                ))
            }
        }
    }
    let missing = |key: &str| {
        data_error(&manifest_path, FormatError::Structure(format!("missing manifest key {key:?}")))
    };
    let num_bags = num_bags.ok_or_else(|| missing("num_bags"))?;
    let master_seed = master_seed.ok_or_else(|| missing("master_seed"))?;
    let vocab_file = vocab_file.ok_or_else(|| missing("vocab_file"))?;
    if num_bags < 1 {
        return Err(data_error(
            &manifest_path,
            FormatError::Structure("num_bags must be >= 1".into()),
        ));
    }

    let vocab = load_vocab(&dir.join(&vocab_file))?;
    let mut members = Vec::with_capacity(num_bags);
    for i in 0..num_bags {
        let path = dir.join(format!("member_{i}"));
        let member = load_model(&path)?;
        if member.config.input_dim != vocab.len() {
            return Err(CliError::Data(format!(
                "{}: member input_dim {} does not match vocabulary size {}",
                path.display(),
                member.config.input_dim,
                vocab.len()
            )));
        }
        members.push(member);
    }
    let config = EnsembleConfig::new(num_bags, members[0].config.clone())
        .with_master_seed(master_seed);
    Ok((Ensemble { config, members }, vocab))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mixbow_core::features::FeatureMode;
    use mixbow_core::network::init_network;

    fn sample_corpus() -> Corpus {
        Corpus::new(vec![
            ProcessedTweet {
                id: 173,
                label: Some(Label::Positive),
                tokens: ["It", "means", "sidhi", "sadhi", "ladki", "best", "couple"]
                    .map(String::from)
                    .to_vec(),
            },
            ProcessedTweet { id: 9, label: None, tokens: vec!["a".into(), "b".into()] },
            ProcessedTweet { id: 10, label: Some(Label::Negative), tokens: vec![] },
        ])
    }

    #[test]
    fn simple_format_renders_the_documented_lines() {
        let text = corpus_to_simple(&sample_corpus());
        assert_eq!(
            text,
            "173\tIt means sidhi sadhi ladki best couple\tpositive\n9\ta b\t-\n10\t\tnegative\n"
        );
    }

    #[test]
    fn simple_format_round_trips() {
        let corpus = sample_corpus();
        let parsed = corpus_from_simple(&corpus_to_simple(&corpus)).unwrap();
        assert_eq!(parsed, corpus);
    }

    #[test]
    fn simple_format_accepts_crlf_and_blank_lines() {
        let parsed = corpus_from_simple("\n1\tx y\tneutral\r\n\n").unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed.tweets[0].tokens, vec!["x", "y"]);
    }

    #[test]
    fn simple_format_rejects_bad_lines() {
        for (text, needle) in [
            ("1\tonly two", "expected 3"),
            ("x\ta b\tpositive", "invalid tweet id"),
            ("1\ta\tgood", "unknown label"),
            ("1\ta\tpositive\n1\tb\tnegative", "duplicate tweet id 1"),
        ] {
            let err = corpus_from_simple(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?} -> {err}");
        }
    }

    #[test]
    fn label_files_accept_two_and_three_field_lines() {
        let pairs =
            labels_from_str("5\tpositive\n6\tsome tokens here\tnegative\n7\tNEUTRAL\n").unwrap();
        assert_eq!(
            pairs,
            vec![(5, Label::Positive), (6, Label::Negative), (7, Label::Neutral)]
        );
    }

    #[test]
    fn label_files_reject_unlabeled_and_duplicates() {
        assert!(labels_from_str("5\ta b\t-").unwrap_err().to_string().contains("no label"));
        assert!(labels_from_str("5\tpositive\n5\tnegative")
            .unwrap_err()
            .to_string()
            .contains("duplicate"));
    }

    #[test]
    fn predictions_render_one_pair_per_line() {
        let text = predictions_to_string(&[(3, Label::Neutral), (1, Label::Positive)]);
        assert_eq!(text, "3\tneutral\n1\tpositive\n");
    }

    #[test]
    fn stopword_files_split_on_lines() {
        let set = stopwords_from_str("the\n\nand\r\n  of  \n");
        assert_eq!(set.into_iter().collect::<Vec<_>>(), vec!["and", "of", "the"]);
    }

    fn small_vocab() -> Vocabulary {
        let corpus = corpus_from_simple(
            "1\tgood good bad movie\tpositive\n2\tgood bad bad movie\tnegative\n",
        )
        .unwrap();
        mixbow_core::features::build_vocabulary(&corpus, VocabConfig::new(2, 2)).unwrap()
    }

    #[test]
    fn vocab_file_round_trips_bit_exactly() {
        let vocab = small_vocab();
        let text = vocab_to_string(&vocab);
        assert!(text.starts_with("vocab v1 K=2 N=2 case_fold=1\n"));
        let reloaded = vocab_from_str(&text).unwrap();
        assert_eq!(vocab_to_string(&reloaded), text);
        assert_eq!(reloaded.len(), vocab.len());
        for (ngram, index) in vocab.iter() {
            assert_eq!(reloaded.index_of(ngram), Some(index));
        }
    }

    #[test]
    fn vocab_parser_rejects_malformed_files() {
        for (text, needle) in [
            ("", "empty vocabulary file"),
            ("vocab v2 K=1 N=1 case_fold=1\n", "header"),
            ("vocab v1 K=x N=1 case_fold=1\n", "invalid value"),
            ("vocab v1 K=1 N=1 case_fold=2\n", "case_fold must be 0 or 1"),
            ("vocab v1 K=1 N=1 case_fold=1\n1\tword\n", "expected index 0"),
            ("vocab v1 K=1 N=1 case_fold=1\n0\ttwo words\n", "exceeds N=1"),
            ("vocab v1 K=1 N=2 case_fold=1\n0\tb\n1\ta\n", "canonical order"),
            ("vocab v1 K=1 N=1 case_fold=1\nnotanindex\n", "index TAB ngram"),
        ] {
            let err = vocab_from_str(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?} -> {err}");
        }
    }

    #[test]
    fn empty_vocab_file_round_trips() {
        let text = "vocab v1 K=3 N=1 case_fold=0\n";
        let vocab = vocab_from_str(text).unwrap();
        assert!(vocab.is_empty());
        assert!(!vocab.config().case_fold);
        assert_eq!(vocab_to_string(&vocab), text);
    }

    fn odd_network() -> Network {
        let config = NetworkConfig::new(3, 3, 2)
            .with_seed(7)
            .with_learning_rate(0.1 + 0.2)
            .with_l2_weight_decay(1e-300);
        let mut net = init_network(&config).unwrap();
        net.layers[0].weights.set(0, 0, -0.0);
        net.layers[1].biases[0] = f64::MIN_POSITIVE / 2.0; // subnormal
        net.layers[2].biases[2] = 5.0;
        net
    }

    #[test]
    fn model_file_round_trips_bit_exactly() {
        let net = odd_network();
        let text = model_to_string(&net);
        assert!(text.starts_with("model v1\ninput_dim=3\nnum_layers=3\n"));
        let reloaded = model_from_str(&text).unwrap();
        assert_eq!(reloaded.config, net.config);
        assert_eq!(reloaded.layers.len(), net.layers.len());
        for (a, b) in net.layers.iter().zip(&reloaded.layers) {
            let bits = |xs: &[f64]| xs.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(a.weights.data()), bits(b.weights.data()));
            assert_eq!(bits(&a.biases), bits(&b.biases));
        }
        assert_eq!(model_to_string(&reloaded), text);
    }

    #[test]
    fn model_parser_rejects_malformed_files() {
        let good = model_to_string(&odd_network());
        let cases: Vec<(String, &str)> = vec![
            (String::new(), "empty model file"),
            ("model v2\n".into(), "header"),
            (good.replace("seed=7\n", ""), "missing config key \"seed\""),
            (good.replace("seed=7", "seed=7\nseed=8"), "duplicate config key"),
            (good.replace("seed=7", "sneed=7"), "unknown config key"),
            (good.replace("epochs=30", "epochs=x"), "invalid value for epochs"),
            (good.replace("layer 1 2 2", "layer 1 2 3"), "expected \"layer 1 2 2\""),
            (format!("{good}0.5\n"), "trailing content"),
            (good.replace("layer 2 3 2\n", "layer 2 3 2\nwhoops\n"), "invalid float"),
        ];
        for (text, needle) in cases {
            let err = model_from_str(&text).unwrap_err().to_string();
            assert!(err.contains(needle), "wanted {needle:?} in {err}");
        }
    }

    #[test]
    fn model_parser_validates_stored_config() {
        let good = model_to_string(&odd_network());
        let err = model_from_str(&good.replace("num_layers=3", "num_layers=1")).unwrap_err();
        assert!(err.to_string().contains("stored config"));
    }

    #[test]
    fn ensemble_directory_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let vocab = small_vocab();
        let corpus = corpus_from_simple(
            "1\tgood good bad movie\tpositive\n2\tgood bad bad movie\tnegative\n",
        )
        .unwrap();
        let examples =
            mixbow_core::features::labeled_examples(&corpus, &vocab, FeatureMode::Binary).unwrap();
        let base = NetworkConfig::new(vocab.len(), 2, 4).with_epochs(2);
        let config = EnsembleConfig::new(3, base).with_master_seed(11);
        let ensemble =
            mixbow_core::ensemble::train_ensemble(&examples, &examples, &config).unwrap();

        let path = dir.path().join("ens");
        save_ensemble(&path, &ensemble, &vocab).unwrap();
        let manifest = std::fs::read_to_string(path.join(MANIFEST_NAME)).unwrap();
        assert_eq!(manifest, "ensemble v1\nnum_bags=3\nmaster_seed=11\nvocab_file=vocab\n");

        let (reloaded, revocab) = load_ensemble(&path).unwrap();
        assert_eq!(reloaded.members, ensemble.members);
        assert_eq!(reloaded.config.num_bags, 3);
        assert_eq!(reloaded.config.master_seed, 11);
        assert_eq!(vocab_to_string(&revocab), vocab_to_string(&vocab));
    }

    #[test]
    fn ensemble_loader_reports_missing_members_and_mismatches() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ens");
        std::fs::create_dir_all(&path).unwrap();
        write_file(
            &path.join(MANIFEST_NAME),
            "ensemble v1\nnum_bags=1\nmaster_seed=0\nvocab_file=vocab\n",
        )
        .unwrap();
        save_vocab(&path.join("vocab"), &small_vocab()).unwrap();
        let err = load_ensemble(&path).unwrap_err();
        assert_eq!(err.exit_code(), 1); // missing member file is an I/O error
        assert!(err.to_string().contains("member_0"));

        // A member whose input_dim disagrees with the vocabulary is data-bad.
        let net = init_network(&NetworkConfig::new(2, 2, 2)).unwrap();
        save_model(&path.join("member_0"), &net).unwrap();
        let err = load_ensemble(&path).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("does not match vocabulary size"));
    }
}
