//! The minibatch training loop.

use alloc::vec::Vec;

use crate::corpus::Label;
use crate::features::FeatureVector;
use crate::rng::{derive_seed, Rng};

use super::optim::{adam_step, sgd_step, AdamState, Optimizer};
use super::{init_network, Network, NetworkConfig, NetworkError, SparseVec};

/// Stream index for the epoch-shuffling generator, derived from the config
/// seed (stream 0 is implicitly the weight initialization, which consumes the
/// seed directly).
const SHUFFLE_STREAM: u64 = 1;

/// Per-epoch history of a training run plus which epoch won.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Mean training loss of each epoch, in epoch order.
    pub train_loss: Vec<f64>,
    /// Validation accuracy measured after each epoch.
    pub val_accuracy: Vec<f64>,
    /// Zero-based epoch whose parameters were kept (highest validation
    /// accuracy; ties go to the earliest epoch).
    pub best_epoch: usize,
    pub best_val_accuracy: f64,
}

fn to_sparse(
    set: &[(FeatureVector, Label)],
    input_dim: usize,
) -> Result<Vec<(SparseVec, Label)>, NetworkError> {
    set.iter()
        .map(|(x, y)| {
            if x.len() != input_dim {
                return Err(NetworkError::DimensionMismatch { expected: input_dim, got: x.len() });
            }
            Ok((SparseVec::from_dense(x), *y))
        })
        .collect()
}

/// Trains a fresh network on `train_set`, scoring `val_set` after every epoch
/// and returning the parameters from the best epoch together with the full
/// history.
///
/// Each epoch visits every training example once, in an order drawn by a
/// seeded Fisher-Yates shuffle (a fresh permutation of 0..n per epoch), in
/// minibatches of `batch_size` with the final short batch included. The whole
/// run is a pure function of the config and the data; a non-finite batch loss
/// aborts with [`NetworkError::Diverged`].
pub fn train(
    train_set: &[(FeatureVector, Label)],
    val_set: &[(FeatureVector, Label)],
    config: &NetworkConfig,
) -> Result<(Network, TrainReport), NetworkError> {
    config.validate()?;
    if train_set.is_empty() {
        return Err(NetworkError::EmptyTrainingSet);
    }
    if val_set.is_empty() {
        return Err(NetworkError::EmptyValidationSet);
    }
    let train_sparse = to_sparse(train_set, config.input_dim)?;
    let val_sparse = to_sparse(val_set, config.input_dim)?;

    let mut net = init_network(config)?;
    let mut adam = match config.optimizer {
        Optimizer::Adam => Some(AdamState::new(&net)),
        Optimizer::Sgd => None,
    };
    let mut shuffle_rng = Rng::seed_from(derive_seed(config.seed, SHUFFLE_STREAM));

    let n = train_sparse.len();
    let mut train_loss = Vec::with_capacity(config.epochs);
    let mut val_accuracy = Vec::with_capacity(config.epochs);
    let mut best: Option<(f64, Vec<super::LayerParams>, usize)> = None;

    for epoch in 0..config.epochs {
        let mut order: Vec<usize> = (0..n).collect();
        shuffle_rng.shuffle(&mut order);

        let mut loss_sum = 0.0;
        for chunk in order.chunks(config.batch_size) {
            let (grads, loss) = net.backward_indexed(&train_sparse, chunk);
            if !loss.is_finite() {
                return Err(NetworkError::Diverged { epoch });
            }
            match adam.as_mut() {
                Some(state) => adam_step(&mut net, &grads, state)?,
                None => sgd_step(&mut net, &grads)?,
            }
            loss_sum += loss * chunk.len() as f64;
        }
        train_loss.push(loss_sum / n as f64);

        let correct = val_sparse
            .iter()
            .filter(|(x, y)| net.predict_sparse(x).0 == *y)
            .count();
        let acc = correct as f64 / val_sparse.len() as f64;
        val_accuracy.push(acc);

        let improved = match &best {
            None => true,
            Some((best_acc, _, _)) => acc > *best_acc,
        };
        if improved {
            best = Some((acc, net.layers.clone(), epoch));
        }
    }

    let (best_val_accuracy, layers, best_epoch) = best.expect("epochs >= 1 is validated");
    let trained = Network { config: config.clone(), layers };
    Ok((trained, TrainReport { train_loss, val_accuracy, best_epoch, best_val_accuracy }))
}
