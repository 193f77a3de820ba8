//! Run configuration: defaults, the flat key=value config file, and
//! command-line overrides.
//!
//! A config file holds one `key=value` pair per line; blank lines and lines
//! starting with `#` are ignored. Every key can also be passed as a
//! command-line flag of the same name (`--learning_rate 0.01`), and flags win
//! over the file.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use mixbow_core::features::{FeatureMode, VocabConfig};
use mixbow_core::network::{NetworkConfig, Optimizer, NUM_CLASSES};
use mixbow_core::stopwords;

use crate::error::CliError;
use crate::formats;

/// Where the stop-word list comes from when no explicit file is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopwordSource {
    /// No stop-word removal.
    None,
    /// The built-in English list.
    English,
}

/// Everything a run needs: paths, featurization, network hyperparameters,
/// and bagging parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub train_file: Option<PathBuf>,
    pub validation_file: Option<PathBuf>,
    pub test_file: Option<PathBuf>,
    pub model_file: Option<PathBuf>,
    pub ensemble_dir: Option<PathBuf>,
    pub vocab_file: Option<PathBuf>,
    pub stopword_file: Option<PathBuf>,
    pub report_file: Option<PathBuf>,

    pub k: usize,
    pub n: usize,
    pub case_fold: bool,
    pub mode: FeatureMode,
    pub stopwords: StopwordSource,

    pub num_layers: usize,
    pub hidden_size: usize,
    pub seed: u64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub optimizer: Optimizer,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    pub l2_weight_decay: f64,

    pub num_bags: usize,
    pub master_seed: u64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        let net = NetworkConfig::new(1, 2, 300);
        RunConfig {
            train_file: None,
            validation_file: None,
            test_file: None,
            model_file: None,
            ensemble_dir: None,
            vocab_file: None,
            stopword_file: None,
            report_file: None,
            k: 15,
            n: 1,
            case_fold: true,
            mode: FeatureMode::Binary,
            stopwords: StopwordSource::English,
            num_layers: net.num_layers,
            hidden_size: net.hidden_size,
            seed: net.seed,
            learning_rate: net.learning_rate,
            epochs: net.epochs,
            batch_size: net.batch_size,
            optimizer: net.optimizer,
            adam_beta1: net.adam_beta1,
            adam_beta2: net.adam_beta2,
            adam_epsilon: net.adam_epsilon,
            l2_weight_decay: net.l2_weight_decay,
            num_bags: 10,
            master_seed: 0,
        }
    }
}

fn bad_value(key: &str, value: &str, expected: &str) -> CliError {
    CliError::Usage(format!("invalid value for {key}: {value:?} (expected {expected})"))
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str, expected: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| bad_value(key, value, expected))
}

fn parse_flag(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "1" | "true" => Ok(true),
        "0" | "false" => Ok(false),
        _ => Err(bad_value(key, value, "0, 1, true, or false")),
    }
}

impl RunConfig {
    /// Applies one key=value pair, as found in a config file or flag.
    pub fn apply_pair(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if value.is_empty() {
            return Err(CliError::Usage(format!("empty value for {key}")));
        }
        match key {
            "train_file" => self.train_file = Some(PathBuf::from(value)),
            "validation_file" => self.validation_file = Some(PathBuf::from(value)),
            "test_file" => self.test_file = Some(PathBuf::from(value)),
            "model_file" => self.model_file = Some(PathBuf::from(value)),
            "ensemble_dir" => self.ensemble_dir = Some(PathBuf::from(value)),
            "vocab_file" => self.vocab_file = Some(PathBuf::from(value)),
            "stopword_file" => self.stopword_file = Some(PathBuf::from(value)),
            "report_file" => self.report_file = Some(PathBuf::from(value)),
            "k" => self.k = parse_num(key, value, "a positive integer")?,
            "n" => self.n = parse_num(key, value, "a positive integer")?,
            "case_fold" => self.case_fold = parse_flag(key, value)?,
            "mode" => {
                self.mode =
                    value.parse().map_err(|()| bad_value(key, value, "binary or count"))?
            }
            "stopwords" => {
                self.stopwords = match value {
                    "none" => StopwordSource::None,
                    "english" => StopwordSource::English,
                    _ => return Err(bad_value(key, value, "none or english")),
                }
            }
            "num_layers" => self.num_layers = parse_num(key, value, "an integer >= 2")?,
            "hidden_size" => self.hidden_size = parse_num(key, value, "a positive integer")?,
            "seed" => self.seed = parse_num(key, value, "an unsigned integer")?,
            "learning_rate" => self.learning_rate = parse_num(key, value, "a number")?,
            "epochs" => self.epochs = parse_num(key, value, "a positive integer")?,
            "batch_size" => self.batch_size = parse_num(key, value, "a positive integer")?,
            "optimizer" => {
                self.optimizer =
                    value.parse().map_err(|()| bad_value(key, value, "adam or sgd"))?
            }
            "adam_beta1" => self.adam_beta1 = parse_num(key, value, "a number")?,
            "adam_beta2" => self.adam_beta2 = parse_num(key, value, "a number")?,
            "adam_epsilon" => self.adam_epsilon = parse_num(key, value, "a number")?,
            "l2_weight_decay" => self.l2_weight_decay = parse_num(key, value, "a number")?,
            "num_bags" => self.num_bags = parse_num(key, value, "a positive integer")?,
            "master_seed" => self.master_seed = parse_num(key, value, "an unsigned integer")?,
            _ => return Err(CliError::Usage(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    /// Reads a config file and applies every pair in order.
    pub fn apply_config_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = formats::read_file(path)?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "{} line {}: expected key=value, got {line:?}",
                    path.display(),
                    i + 1
                ))
            })?;
            self.apply_pair(key.trim(), value.trim()).map_err(|e| {
                CliError::Usage(format!("{} line {}: {e}", path.display(), i + 1))
            })?;
        }
        Ok(())
    }

    /// The stop-word set this run removes: an explicit file wins, otherwise
    /// the selected built-in source.
    pub fn resolve_stopwords(&self) -> Result<BTreeSet<String>, CliError> {
        if let Some(path) = &self.stopword_file {
            return formats::load_stopwords(path);
        }
        Ok(match self.stopwords {
            StopwordSource::None => BTreeSet::new(),
            StopwordSource::English => stopwords::english_set(),
        })
    }

    pub fn vocab_config(&self) -> Result<VocabConfig, CliError> {
        Ok(VocabConfig::new(self.k, self.n)
            .with_case_fold(self.case_fold)
            .with_stopwords(self.resolve_stopwords()?))
    }

    /// The network config for a given feature dimension.
    pub fn network_config(&self, input_dim: usize) -> NetworkConfig {
        NetworkConfig {
            input_dim,
            num_layers: self.num_layers,
            hidden_size: self.hidden_size,
            output_dim: NUM_CLASSES,
            seed: self.seed,
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            batch_size: self.batch_size,
            optimizer: self.optimizer,
            adam_beta1: self.adam_beta1,
            adam_beta2: self.adam_beta2,
            adam_epsilon: self.adam_epsilon,
            l2_weight_decay: self.l2_weight_decay,
        }
    }
}

/// Returns the path or a usage error naming the missing key.
pub fn required<'a>(path: &'a Option<PathBuf>, key: &str) -> Result<&'a Path, CliError> {
    path.as_deref().ok_or_else(|| {
        CliError::Usage(format!(
            "{key} is required (set it in the config file or pass --{key})"
        ))
    })
}

/// Command-line overrides: one optional flag per configuration key, applied
/// on top of the config file. Values are parsed exactly like file values.
#[derive(Debug, Default, Clone, clap::Args)]
pub struct Overrides {
    /// Training corpus in the simple tab-separated format
    #[arg(long = "train_file", overrides_with = "train_file", value_name = "PATH")]
    pub train_file: Option<String>,
    /// Validation corpus in the simple tab-separated format
    #[arg(long = "validation_file", overrides_with = "validation_file", value_name = "PATH")]
    pub validation_file: Option<String>,
    /// Held-out corpus (reserved; not read by train/bag)
    #[arg(long = "test_file", overrides_with = "test_file", value_name = "PATH")]
    pub test_file: Option<String>,
    /// Where train writes / predict reads the model
    #[arg(long = "model_file", overrides_with = "model_file", value_name = "PATH")]
    pub model_file: Option<String>,
    /// Where bag writes / predict reads the ensemble
    #[arg(long = "ensemble_dir", overrides_with = "ensemble_dir", value_name = "PATH")]
    pub ensemble_dir: Option<String>,
    /// Where train writes / predict reads the vocabulary
    #[arg(long = "vocab_file", overrides_with = "vocab_file", value_name = "PATH")]
    pub vocab_file: Option<String>,
    /// File of stop words, one per line (overrides --stopwords)
    #[arg(long = "stopword_file", overrides_with = "stopword_file", value_name = "PATH")]
    pub stopword_file: Option<String>,
    /// Where train writes the per-epoch report (default: <model_file>.report)
    #[arg(long = "report_file", overrides_with = "report_file", value_name = "PATH")]
    pub report_file: Option<String>,
    /// Frequency threshold: an ngram needs >= k occurrences [default: 15]
    #[arg(long = "k", overrides_with = "k", value_name = "INT")]
    pub k: Option<String>,
    /// Maximum ngram order (1 = unigrams only) [default: 1]
    #[arg(long = "n", overrides_with = "n", value_name = "INT")]
    pub n: Option<String>,
    /// Lowercase tokens before counting [default: 1]
    #[arg(long = "case_fold", overrides_with = "case_fold", value_name = "0|1")]
    pub case_fold: Option<String>,
    /// Feature values: presence or occurrence count [default: binary]
    #[arg(long = "mode", overrides_with = "mode", value_name = "binary|count")]
    pub mode: Option<String>,
    /// Built-in stop-word list to remove [default: english]
    #[arg(long = "stopwords", overrides_with = "stopwords", value_name = "none|english")]
    pub stopwords: Option<String>,
    /// Affine layers, input to output (>= 2) [default: 2]
    #[arg(long = "num_layers", overrides_with = "num_layers", value_name = "INT")]
    pub num_layers: Option<String>,
    /// Width of each hidden layer [default: 300]
    #[arg(long = "hidden_size", overrides_with = "hidden_size", value_name = "INT")]
    pub hidden_size: Option<String>,
    /// Seed for weight init and epoch shuffling [default: 0]
    #[arg(long = "seed", overrides_with = "seed", value_name = "INT")]
    pub seed: Option<String>,
    /// Step size [default: 0.001]
    #[arg(long = "learning_rate", overrides_with = "learning_rate", value_name = "FLOAT")]
    pub learning_rate: Option<String>,
    /// Training epochs; the best-validation epoch is kept [default: 30]
    #[arg(long = "epochs", overrides_with = "epochs", value_name = "INT")]
    pub epochs: Option<String>,
    /// Mini-batch size [default: 32]
    #[arg(long = "batch_size", overrides_with = "batch_size", value_name = "INT")]
    pub batch_size: Option<String>,
    /// Update rule [default: adam]
    #[arg(long = "optimizer", overrides_with = "optimizer", value_name = "adam|sgd")]
    pub optimizer: Option<String>,
    /// Adam first-moment decay [default: 0.9]
    #[arg(long = "adam_beta1", overrides_with = "adam_beta1", value_name = "FLOAT")]
    pub adam_beta1: Option<String>,
    /// Adam second-moment decay [default: 0.999]
    #[arg(long = "adam_beta2", overrides_with = "adam_beta2", value_name = "FLOAT")]
    pub adam_beta2: Option<String>,
    /// Adam denominator fuzz [default: 1e-8]
    #[arg(long = "adam_epsilon", overrides_with = "adam_epsilon", value_name = "FLOAT")]
    pub adam_epsilon: Option<String>,
    /// L2 penalty strength, 0 disables [default: 0]
    #[arg(long = "l2_weight_decay", overrides_with = "l2_weight_decay", value_name = "FLOAT")]
    pub l2_weight_decay: Option<String>,
    /// Ensemble members for bag [default: 10]
    #[arg(long = "num_bags", overrides_with = "num_bags", value_name = "INT")]
    pub num_bags: Option<String>,
    /// Seed from which member resample/train seeds derive [default: 0]
    #[arg(long = "master_seed", overrides_with = "master_seed", value_name = "INT")]
    pub master_seed: Option<String>,
}

impl Overrides {
    /// The (key, value) pairs that were actually set.
    pub fn pairs(&self) -> Vec<(&'static str, &str)> {
        let fields: [(&'static str, &Option<String>); 26] = [
            ("train_file", &self.train_file),
            ("validation_file", &self.validation_file),
            ("test_file", &self.test_file),
            ("model_file", &self.model_file),
            ("ensemble_dir", &self.ensemble_dir),
            ("vocab_file", &self.vocab_file),
            ("stopword_file", &self.stopword_file),
            ("report_file", &self.report_file),
            ("k", &self.k),
            ("n", &self.n),
            ("case_fold", &self.case_fold),
            ("mode", &self.mode),
            ("stopwords", &self.stopwords),
            ("num_layers", &self.num_layers),
            ("hidden_size", &self.hidden_size),
            ("seed", &self.seed),
            ("learning_rate", &self.learning_rate),
            ("epochs", &self.epochs),
            ("batch_size", &self.batch_size),
            ("optimizer", &self.optimizer),
            ("adam_beta1", &self.adam_beta1),
            ("adam_beta2", &self.adam_beta2),
            ("adam_epsilon", &self.adam_epsilon),
            ("l2_weight_decay", &self.l2_weight_decay),
            ("num_bags", &self.num_bags),
            ("master_seed", &self.master_seed),
        ];
        fields
            .into_iter()
            .filter_map(|(key, value)| value.as_deref().map(|v| (key, v)))
            .collect()
    }
}

/// Builds the effective config: defaults, then the file, then the flags.
pub fn resolve(config_file: Option<&Path>, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = config_file {
        cfg.apply_config_file(path)?;
    }
    for (key, value) in overrides.pairs() {
        cfg.apply_pair(key, value)?;
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    #[test]
    fn defaults_match_the_documented_values() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.k, 15);
        assert_eq!(cfg.n, 1);
        assert!(cfg.case_fold);
        assert_eq!(cfg.mode, FeatureMode::Binary);
        assert_eq!(cfg.stopwords, StopwordSource::English);
        assert_eq!(cfg.num_layers, 2);
        assert_eq!(cfg.hidden_size, 300);
        assert_eq!(cfg.learning_rate, 1e-3);
        assert_eq!(cfg.epochs, 30);
        assert_eq!(cfg.batch_size, 32);
        assert_eq!(cfg.optimizer, Optimizer::Adam);
        assert_eq!(cfg.num_bags, 10);
    }

    #[test]
    fn config_file_applies_pairs_and_skips_comments() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# a comment").unwrap();
        writeln!(file).unwrap();
        writeln!(file, "k = 20").unwrap();
        writeln!(file, "mode=count").unwrap();
        writeln!(file, "train_file = data/train.tsv").unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_config_file(file.path()).unwrap();
        assert_eq!(cfg.k, 20);
        assert_eq!(cfg.mode, FeatureMode::Count);
        assert_eq!(cfg.train_file.as_deref(), Some(Path::new("data/train.tsv")));
    }

    #[test]
    fn flags_override_the_file() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "k=20\nseed=5").unwrap();
        let overrides = Overrides { k: Some("30".into()), ..Overrides::default() };
        let cfg = resolve(Some(file.path()), &overrides).unwrap();
        assert_eq!(cfg.k, 30);
        assert_eq!(cfg.seed, 5);
    }

    #[test]
    fn errors_name_the_file_line_or_key() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "k=20\nnot a pair").unwrap();
        let err = RunConfig::default().apply_config_file(file.path()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("line 2"));

        let mut cfg = RunConfig::default();
        for (key, value) in [
            ("sneed", "1"),
            ("k", "x"),
            ("case_fold", "maybe"),
            ("mode", "trinary"),
            ("optimizer", "lbfgs"),
            ("stopwords", "french"),
            ("k", ""),
        ] {
            let err = cfg.apply_pair(key, value).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{key}={value}");
        }
    }

    #[test]
    fn bool_values_accept_both_spellings() {
        let mut cfg = RunConfig::default();
        cfg.apply_pair("case_fold", "0").unwrap();
        assert!(!cfg.case_fold);
        cfg.apply_pair("case_fold", "true").unwrap();
        assert!(cfg.case_fold);
    }

    #[test]
    fn stopword_resolution_prefers_the_file() {
        let mut cfg = RunConfig::default();
        assert!(cfg.resolve_stopwords().unwrap().contains("the"));
        cfg.stopwords = StopwordSource::None;
        assert!(cfg.resolve_stopwords().unwrap().is_empty());

        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "foo\nbar").unwrap();
        cfg.stopword_file = Some(file.path().to_path_buf());
        let set = cfg.resolve_stopwords().unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.contains("foo"));
    }

    #[test]
    fn network_config_carries_every_hyperparameter() {
        let mut cfg = RunConfig::default();
        cfg.apply_pair("num_layers", "4").unwrap();
        cfg.apply_pair("learning_rate", "0.01").unwrap();
        cfg.apply_pair("optimizer", "sgd").unwrap();
        cfg.apply_pair("l2_weight_decay", "1e-4").unwrap();
        let net = cfg.network_config(123);
        assert_eq!(net.input_dim, 123);
        assert_eq!(net.output_dim, NUM_CLASSES);
        assert_eq!(net.num_layers, 4);
        assert_eq!(net.learning_rate, 0.01);
        assert_eq!(net.optimizer, Optimizer::Sgd);
        assert_eq!(net.l2_weight_decay, 1e-4);
        net.validate().unwrap();
    }

    #[test]
    fn required_reports_the_missing_key() {
        let err = required(&None, "model_file").unwrap_err();
        assert!(err.to_string().contains("model_file"));
        assert_eq!(err.exit_code(), 1);
    }
}
