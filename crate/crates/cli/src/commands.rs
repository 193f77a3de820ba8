//! The six subcommands: convert, train, bag, predict, evaluate, sweep.
//!
//! Every command is deterministic given its configuration and seeds, returns
//! `Ok` exactly when it exits 0, and writes its human-facing output to the
//! supplied writer (stdout in the binary, a buffer in tests).

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mixbow_core::corpus::{parse_conll, preprocess_corpus, Label};
use mixbow_core::ensemble::{predict_vote, train_ensemble, Ensemble, EnsembleConfig};
use mixbow_core::features::{
    build_vocabulary, labeled_examples, vectorize, FeatureVector, Vocabulary,
};
use mixbow_core::metrics::{confusion, report};
use mixbow_core::network::{train, Network};

use crate::config::{required, RunConfig};
use crate::error::CliError;
use crate::formats;
use crate::render;

/// Loaded and vectorized train/validation splits plus their vocabulary.
struct Prepared {
    vocab: Vocabulary,
    train: Vec<(FeatureVector, Label)>,
    val: Vec<(FeatureVector, Label)>,
}

/// Reads both splits, builds the vocabulary from the training split only,
/// and vectorizes everything.
fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let train_path = required(&cfg.train_file, "train_file")?;
    let val_path = required(&cfg.validation_file, "validation_file")?;
    let train_corpus = formats::load_simple(train_path)?;
    let val_corpus = formats::load_simple(val_path)?;
    let vocab = build_vocabulary(&train_corpus, cfg.vocab_config()?)?;
    if vocab.is_empty() {
        return Err(CliError::Data(format!(
            "empty vocabulary: no ngram appears at least {} times in {}",
            cfg.k,
            train_path.display()
        )));
    }
    let examples = |corpus, path: &Path| {
        labeled_examples(corpus, &vocab, cfg.mode)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    };
    let train = examples(&train_corpus, train_path)?;
    let val = examples(&val_corpus, val_path)?;
    Ok(Prepared { vocab, train, val })
}

fn accuracy_of(net: &Network, set: &[(FeatureVector, Label)]) -> Result<f64, CliError> {
    let mut hits = 0usize;
    for (x, gold) in set {
        if net.predict(x)?.0 == *gold {
            hits += 1;
        }
    }
    Ok(hits as f64 / set.len() as f64)
}

fn ensemble_accuracy(
    ensemble: &Ensemble,
    set: &[(FeatureVector, Label)],
) -> Result<f64, CliError> {
    let mut hits = 0usize;
    for (x, gold) in set {
        if predict_vote(ensemble, x)?.0 == *gold {
            hits += 1;
        }
    }
    Ok(hits as f64 / set.len() as f64)
}

/// Parses a CoNLL file, preprocesses it, and writes the simple format.
pub fn cmd_convert(
    conll_path: &Path,
    out_path: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = formats::read_file(conll_path)?;
    let raw = parse_conll(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", conll_path.display())))?;
    let corpus = preprocess_corpus(&raw);
    formats::write_file(out_path, &formats::corpus_to_simple(&corpus))?;

    let mut counts = [0usize; 3];
    let mut unlabeled = 0usize;
    for tweet in corpus.iter() {
        match tweet.label {
            Some(label) => counts[label.index()] += 1,
            None => unlabeled += 1,
        }
    }
    writeln!(out, "tweets: {}", corpus.len())?;
    writeln!(
        out,
        "labels: negative={} neutral={} positive={} unlabeled={}",
        counts[0], counts[1], counts[2], unlabeled
    )?;
    Ok(())
}

/// Trains one classifier and writes the model, vocabulary, and train report.
pub fn cmd_train(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let model_path = required(&cfg.model_file, "model_file")?;
    let vocab_path = required(&cfg.vocab_file, "vocab_file")?;
    let prepared = prepare(cfg)?;
    writeln!(out, "vocabulary: {} entries", prepared.vocab.len())?;
    writeln!(
        out,
        "examples: {} train, {} validation",
        prepared.train.len(),
        prepared.val.len()
    )?;

    let net_config = cfg.network_config(prepared.vocab.len());
    let (net, train_report) = train(&prepared.train, &prepared.val, &net_config)?;
    for (epoch, (loss, acc)) in
        train_report.train_loss.iter().zip(&train_report.val_accuracy).enumerate()
    {
        writeln!(out, "epoch {epoch} train_loss={loss:.6} val_accuracy={acc:.6}")?;
    }

    formats::save_vocab(vocab_path, &prepared.vocab)?;
    formats::save_model(model_path, &net)?;
    let report_path = cfg
        .report_file
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.report", model_path.display())));
    formats::write_file(&report_path, &render::train_report_text(&train_report))?;

    writeln!(out, "best epoch: {}", train_report.best_epoch)?;
    writeln!(out, "validation accuracy: {:.6}", train_report.best_val_accuracy)?;
    Ok(())
}

/// Trains a bagged ensemble and writes it as a directory.
pub fn cmd_bag(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let dir = required(&cfg.ensemble_dir, "ensemble_dir")?;
    let prepared = prepare(cfg)?;
    writeln!(out, "vocabulary: {} entries", prepared.vocab.len())?;
    writeln!(
        out,
        "examples: {} train, {} validation",
        prepared.train.len(),
        prepared.val.len()
    )?;

    let ens_config = EnsembleConfig::new(cfg.num_bags, cfg.network_config(prepared.vocab.len()))
        .with_master_seed(cfg.master_seed);
    let ensemble = train_ensemble(&prepared.train, &prepared.val, &ens_config)?;
    for (i, member) in ensemble.members.iter().enumerate() {
        writeln!(out, "member {i}: val_accuracy={:.6}", accuracy_of(member, &prepared.val)?)?;
    }
    formats::save_ensemble(dir, &ensemble, &prepared.vocab)?;
    writeln!(out, "ensemble: val_accuracy={:.6}", ensemble_accuracy(&ensemble, &prepared.val)?)?;
    Ok(())
}

enum Predictor {
    Single(Network),
    Bagged(Ensemble),
}

/// Predicts labels for a (possibly unlabeled) simple-format file using a
/// saved model file or ensemble directory, writing "id TAB label" lines in
/// input order.
pub fn cmd_predict(
    model_path: &Path,
    input_path: &Path,
    out_path: &Path,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let corpus = formats::load_simple(input_path)?;
    let (predictor, vocab) = if model_path.is_dir() {
        let (ensemble, vocab) = formats::load_ensemble(model_path)?;
        let vocab = match &cfg.vocab_file {
            Some(path) => formats::load_vocab(path)?,
            None => vocab,
        };
        check_dims(&ensemble.members[0], &vocab)?;
        (Predictor::Bagged(ensemble), vocab)
    } else {
        let net = formats::load_model(model_path)?;
        let vocab_path = required(&cfg.vocab_file, "vocab_file")?;
        let vocab = formats::load_vocab(vocab_path)?;
        check_dims(&net, &vocab)?;
        (Predictor::Single(net), vocab)
    };

    let mut preds = Vec::with_capacity(corpus.len());
    for tweet in corpus.iter() {
        let x = vectorize(tweet, &vocab, cfg.mode);
        let label = match &predictor {
            Predictor::Single(net) => net.predict(&x)?.0,
            Predictor::Bagged(ensemble) => predict_vote(ensemble, &x)?.0,
        };
        preds.push((tweet.id, label));
    }
    formats::write_file(out_path, &formats::predictions_to_string(&preds))?;
    writeln!(out, "predicted {} tweets", preds.len())?;
    Ok(())
}

fn check_dims(net: &Network, vocab: &Vocabulary) -> Result<(), CliError> {
    if net.config.input_dim != vocab.len() {
        return Err(CliError::Usage(format!(
            "model expects {} features but the vocabulary has {} entries",
            net.config.input_dim,
            vocab.len()
        )));
    }
    Ok(())
}

/// Joins gold and predicted labels on tweet id and prints the full report.
pub fn cmd_evaluate(
    gold_path: &Path,
    pred_path: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let gold = formats::load_labels(gold_path)?;
    let pred = formats::load_labels(pred_path)?;
    let pred_map: BTreeMap<u64, Label> = pred.iter().copied().collect();
    let gold_ids: BTreeSet<u64> = gold.iter().map(|(id, _)| *id).collect();

    let missing: Vec<u64> =
        gold_ids.iter().copied().filter(|id| !pred_map.contains_key(id)).collect();
    let extra: Vec<u64> =
        pred_map.keys().copied().filter(|id| !gold_ids.contains(id)).collect();
    if !missing.is_empty() || !extra.is_empty() {
        let join = |ids: &[u64]| {
            ids.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
        };
        let mut msg = String::from("gold and prediction id sets differ");
        if !missing.is_empty() {
            msg.push_str(&format!("; missing from predictions: {}", join(&missing)));
        }
        if !extra.is_empty() {
            msg.push_str(&format!("; not in gold: {}", join(&extra)));
        }
        return Err(CliError::Data(msg));
    }

    let golds: Vec<Label> = gold.iter().map(|(_, label)| *label).collect();
    let preds: Vec<Label> = gold.iter().map(|(id, _)| pred_map[id]).collect();
    let cm = confusion(&golds, &preds)?;
    let rep = report(&cm)?;
    write!(out, "{}", render::report_table(&cm, &rep))?;
    write!(out, "{}", render::report_kv(&rep))?;
    Ok(())
}

/// The hyperparameter axis a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    K,
    N,
    NumLayers,
    HiddenSize,
    Mode,
}

impl SweepAxis {
    /// The configuration key this axis sets.
    pub fn key(self) -> &'static str {
        match self {
            SweepAxis::K => "k",
            SweepAxis::N => "n",
            SweepAxis::NumLayers => "num_layers",
            SweepAxis::HiddenSize => "hidden_size",
            SweepAxis::Mode => "mode",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<SweepAxis, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "k" => Ok(SweepAxis::K),
            "n" => Ok(SweepAxis::N),
            "num_layers" | "m" => Ok(SweepAxis::NumLayers),
            "hidden_size" | "h" => Ok(SweepAxis::HiddenSize),
            "mode" => Ok(SweepAxis::Mode),
            _ => Err(CliError::Usage(format!(
                "invalid sweep axis {s:?} (expected k, n, num_layers, hidden_size, or mode)"
            ))),
        }
    }
}

fn annotate(e: CliError, cell: &str) -> CliError {
    match e {
        CliError::Usage(m) => CliError::Usage(format!("{cell}: {m}")),
        CliError::Data(m) => CliError::Data(format!("{cell}: {m}")),
        CliError::Numeric(m) => CliError::Numeric(format!("{cell}: {m}")),
        CliError::Io { context, source } => {
            CliError::Io { context: format!("{cell}: {context}"), source }
        }
    }
}

/// Trains one model per axis value (all from scratch, same seed) and prints
/// a value -> validation-accuracy table plus machine-readable rows.
pub fn cmd_sweep(
    cfg: &RunConfig,
    axis: SweepAxis,
    values: &[String],
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::Usage("sweep requires at least one value".into()));
    }
    let cells: Vec<RunConfig> = values
        .iter()
        .map(|value| {
            let mut cell = cfg.clone();
            cell.apply_pair(axis.key(), value)?;
            Ok(cell)
        })
        .collect::<Result<_, CliError>>()?;

    // Cells are independent, so they may run concurrently; results are
    // collected and reported strictly in cell order.
    let mut results: Vec<Result<f64, CliError>> = Vec::with_capacity(cells.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = cells
            .iter()
            .map(|cell| {
                scope.spawn(move || -> Result<f64, CliError> {
                    let prepared = prepare(cell)?;
                    let net_config = cell.network_config(prepared.vocab.len());
                    let (_, train_report) = train(&prepared.train, &prepared.val, &net_config)?;
                    Ok(train_report.best_val_accuracy)
                })
            })
            .collect();
        for handle in handles {
            results.push(handle.join().unwrap_or_else(|_| {
                Err(CliError::Numeric("sweep worker panicked".into()))
            }));
        }
    });

    let mut table = Vec::with_capacity(values.len());
    for (value, result) in values.iter().zip(results) {
        let acc = result.map_err(|e| annotate(e, &format!("cell {}={value}", axis.key())))?;
        table.push((value, acc));
    }

    writeln!(out, "sweep over {}", axis.key())?;
    writeln!(out, "{:>12}  val_accuracy", axis.key())?;
    for (value, acc) in &table {
        writeln!(out, "{value:>12}  {acc:.6}")?;
    }
    writeln!(out)?;
    for (value, acc) in &table {
        writeln!(out, "axis={} value={value} val_accuracy={acc:.6}", axis.key())?;
    }
    Ok(())
}
