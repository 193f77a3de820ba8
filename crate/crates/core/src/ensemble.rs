//! Bagging: bootstrap-resampled network ensembles with plurality voting.
//!
//! Each member trains on its own bootstrap resample of the training set
//! (original size, drawn with replacement) with its own weight seed. Both
//! seeds come from the master seed through [`derive_seed`]: member `i` uses
//! stream `2i` for its resample and `2i + 1` for training. Streams only
//! depend on `i`, so growing an ensemble never changes the members you
//! already had.

use alloc::vec::Vec;
use core::fmt;

use crate::corpus::Label;
use crate::features::FeatureVector;
use crate::network::{train, Network, NetworkConfig, NetworkError, NUM_CLASSES};
use crate::rng::{derive_seed, Rng};

/// Bagging parameters: how many members and the base network config they
/// share (each member overrides only the seed).
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub num_bags: usize,
    pub master_seed: u64,
    pub base: NetworkConfig,
}

impl EnsembleConfig {
    pub fn new(num_bags: usize, base: NetworkConfig) -> EnsembleConfig {
        EnsembleConfig { num_bags, master_seed: 0, base }
    }

    pub fn with_master_seed(mut self, master_seed: u64) -> EnsembleConfig {
        self.master_seed = master_seed;
        self
    }

    pub fn validate(&self) -> Result<(), EnsembleError> {
        if self.num_bags < 1 {
            return Err(EnsembleError::InvalidConfig("num_bags must be >= 1"));
        }
        self.base.validate().map_err(EnsembleError::Network)
    }

    /// Seed for member `i`'s bootstrap resample.
    pub fn sample_seed(&self, member: usize) -> u64 {
        derive_seed(self.master_seed, 2 * member as u64)
    }

    /// Seed for member `i`'s weight initialization and shuffling.
    pub fn train_seed(&self, member: usize) -> u64 {
        derive_seed(self.master_seed, 2 * member as u64 + 1)
    }
}

/// A trained bag of networks.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub config: EnsembleConfig,
    pub members: Vec<Network>,
}

/// Errors from bagging.
#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleError {
    InvalidConfig(&'static str),
    /// Cannot resample an empty training set.
    EmptyTrainingSet,
    /// An ensemble with no members cannot vote.
    NoMembers,
    /// Training member `index` failed.
    Member { index: usize, source: NetworkError },
    /// A network error outside member training (validation, prediction).
    Network(NetworkError),
}

impl fmt::Display for EnsembleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleError::InvalidConfig(msg) => write!(f, "invalid ensemble config: {msg}"),
            EnsembleError::EmptyTrainingSet => {
                f.write_str("cannot bootstrap-sample an empty training set")
            }
            EnsembleError::NoMembers => f.write_str("ensemble has no members"),
            EnsembleError::Member { index, source } => {
                write!(f, "training ensemble member {index} failed: {source}")
            }
            EnsembleError::Network(source) => source.fmt(f),
        }
    }
}

impl core::error::Error for EnsembleError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            EnsembleError::Member { source, .. } => Some(source),
            EnsembleError::Network(source) => Some(source),
            _ => None,
        }
    }
}

/// Draws `data.len()` elements from `data` uniformly with replacement,
/// deterministically from `seed`. On average a resample contains about
/// 63.2% of the distinct originals.
pub fn bootstrap_sample<T: Clone>(data: &[T], seed: u64) -> Result<Vec<T>, EnsembleError> {
    if data.is_empty() {
        return Err(EnsembleError::EmptyTrainingSet);
    }
    let mut rng = Rng::seed_from(seed);
    Ok((0..data.len()).map(|_| data[rng.below(data.len())].clone()).collect())
}

/// Trains `num_bags` networks, each on its own bootstrap resample with its
/// own seeds, all validated against the same (un-resampled) validation set.
pub fn train_ensemble(
    train_set: &[(FeatureVector, Label)],
    val_set: &[(FeatureVector, Label)],
    config: &EnsembleConfig,
) -> Result<Ensemble, EnsembleError> {
    config.validate()?;
    let mut members = Vec::with_capacity(config.num_bags);
    for i in 0..config.num_bags {
        let sample = bootstrap_sample(train_set, config.sample_seed(i))?;
        let member_config = config.base.clone().with_seed(config.train_seed(i));
        let (net, _) = train(&sample, val_set, &member_config)
            .map_err(|source| EnsembleError::Member { index: i, source })?;
        members.push(net);
    }
    Ok(Ensemble { config: config.clone(), members })
}

/// Plurality vote over the members. Returns the winning label and the raw
/// vote counts per class (they always sum to the member count).
///
/// If several labels tie on votes, the members' probability vectors are
/// summed (in member order) and the tied label with the largest summed
/// probability wins; a further exact tie goes to the lowest class index.
pub fn predict_vote(
    ensemble: &Ensemble,
    x: &[f64],
) -> Result<(Label, [u32; NUM_CLASSES]), EnsembleError> {
    if ensemble.members.is_empty() {
        return Err(EnsembleError::NoMembers);
    }
    let mut votes = [0u32; NUM_CLASSES];
    let mut prob_sum = [0.0f64; NUM_CLASSES];
    for member in &ensemble.members {
        let (label, probs) = member.predict(x).map_err(EnsembleError::Network)?;
        votes[label.index()] += 1;
        for (acc, p) in prob_sum.iter_mut().zip(&probs) {
            *acc += p;
        }
    }
    let top = *votes.iter().max().expect("3 classes");
    let mut winner: Option<usize> = None;
    for c in 0..NUM_CLASSES {
        if votes[c] == top {
            winner = match winner {
                None => Some(c),
                Some(w) if prob_sum[c] > prob_sum[w] => Some(c),
                keep => keep,
            };
        }
    }
    let label = Label::from_index(winner.expect("at least one class has the top vote")).unwrap();
    Ok((label, votes))
}
