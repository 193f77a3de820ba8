//! Small feedforward softmax classifiers, written out by hand.
//!
//! A network is a stack of `num_layers` affine maps: input -> hidden ->
//! ... -> 3 logits, with ReLU after every layer except the last. Weights are
//! Xavier-uniform initialized from a seed; gradients come from manual
//! backpropagation of the mean softmax cross-entropy over a minibatch.
//! Everything is `f64` and every computation has a fixed order, so identical
//! seeds and inputs give bit-identical results run after run.
//!
//! Feature vectors are mostly zeros, so the input layer skips zero entries.
//! Adding a zero term to a partial sum cannot change an IEEE result here
//! (all accumulators start at +0.0), which keeps the shortcut exact, not
//! approximate.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::corpus::Label;
use crate::features::FeatureVector;
use crate::rng::Rng;

mod optim;
mod train;

pub use optim::{adam_step, sgd_step, AdamState, Optimizer};
pub use train::{train, TrainReport};

/// Number of output classes (the three sentiments).
pub const NUM_CLASSES: usize = 3;

/// Floor applied to the gold-class probability inside the loss so a fully
/// confident wrong prediction stays finite. NaN still propagates.
pub const PROB_FLOOR: f64 = 1e-12;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// Builds a matrix from row-major data.
    ///
    /// # Panics
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data does not match its shape");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: f64) {
        self.data[r * self.cols + c] = value;
    }

    /// Row-major view of all entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

/// Weights (`out x in`, row-major) and biases of one affine layer. Also used
/// as the shape-compatible container for gradients and optimizer moments.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    pub weights: Matrix,
    pub biases: Vec<f64>,
}

impl LayerParams {
    pub(crate) fn zeros_like(&self) -> LayerParams {
        LayerParams {
            weights: Matrix::zeros(self.weights.rows(), self.weights.cols()),
            biases: vec![0.0; self.biases.len()],
        }
    }
}

/// Which optimizer and with which hyperparameters a network is trained.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    /// Feature vector length.
    pub input_dim: usize,
    /// Number of affine maps; a "2-layer" network is input -> hidden -> output.
    /// Must be >= 2.
    pub num_layers: usize,
    /// Width of every hidden layer.
    pub hidden_size: usize,
    /// Always [`NUM_CLASSES`]; kept as a field so saved models spell it out.
    pub output_dim: usize,
    /// Seed for weight initialization and epoch shuffling.
    pub seed: u64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub optimizer: Optimizer,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    /// L2 penalty strength; applied to every parameter as an additive
    /// gradient term `g + l2 * theta` before any optimizer bookkeeping.
    pub l2_weight_decay: f64,
}

impl NetworkConfig {
    /// A config with the customary defaults: Adam (betas 0.9/0.999, epsilon
    /// 1e-8), learning rate 1e-3, 30 epochs, batches of 32, no weight decay,
    /// seed 0.
    pub fn new(input_dim: usize, num_layers: usize, hidden_size: usize) -> NetworkConfig {
        NetworkConfig {
            input_dim,
            num_layers,
            hidden_size,
            output_dim: NUM_CLASSES,
            seed: 0,
            learning_rate: 1e-3,
            epochs: 30,
            batch_size: 32,
            optimizer: Optimizer::Adam,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            l2_weight_decay: 0.0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> NetworkConfig {
        self.seed = seed;
        self
    }

    pub fn with_learning_rate(mut self, lr: f64) -> NetworkConfig {
        self.learning_rate = lr;
        self
    }

    pub fn with_epochs(mut self, epochs: usize) -> NetworkConfig {
        self.epochs = epochs;
        self
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> NetworkConfig {
        self.batch_size = batch_size;
        self
    }

    pub fn with_optimizer(mut self, optimizer: Optimizer) -> NetworkConfig {
        self.optimizer = optimizer;
        self
    }

    pub fn with_l2_weight_decay(mut self, l2: f64) -> NetworkConfig {
        self.l2_weight_decay = l2;
        self
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        if self.input_dim < 1 {
            return Err(NetworkError::InvalidConfig("input_dim must be >= 1"));
        }
        if self.num_layers < 2 {
            return Err(NetworkError::InvalidConfig("num_layers must be >= 2"));
        }
        if self.hidden_size < 1 {
            return Err(NetworkError::InvalidConfig("hidden_size must be >= 1"));
        }
        if self.output_dim != NUM_CLASSES {
            return Err(NetworkError::InvalidConfig("output_dim must be 3"));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(NetworkError::InvalidConfig("learning_rate must be finite and > 0"));
        }
        if self.epochs < 1 {
            return Err(NetworkError::InvalidConfig("epochs must be >= 1"));
        }
        if self.batch_size < 1 {
            return Err(NetworkError::InvalidConfig("batch_size must be >= 1"));
        }
        if !(0.0..1.0).contains(&self.adam_beta1) {
            return Err(NetworkError::InvalidConfig("adam_beta1 must be in [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.adam_beta2) {
            return Err(NetworkError::InvalidConfig("adam_beta2 must be in [0, 1)"));
        }
        if !(self.adam_epsilon.is_finite() && self.adam_epsilon > 0.0) {
            return Err(NetworkError::InvalidConfig("adam_epsilon must be finite and > 0"));
        }
        if !(self.l2_weight_decay.is_finite() && self.l2_weight_decay >= 0.0) {
            return Err(NetworkError::InvalidConfig("l2_weight_decay must be finite and >= 0"));
        }
        Ok(())
    }

    /// The `(out, in)` shape of each affine layer, first to last.
    pub fn layer_dims(&self) -> Vec<(usize, usize)> {
        let mut dims = Vec::with_capacity(self.num_layers);
        let mut in_dim = self.input_dim;
        for _ in 0..self.num_layers - 1 {
            dims.push((self.hidden_size, in_dim));
            in_dim = self.hidden_size;
        }
        dims.push((self.output_dim, in_dim));
        dims
    }
}

/// Errors from network construction, inference and training.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkError {
    InvalidConfig(&'static str),
    /// An input vector did not match the network's input dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// Gradient or moment tensors did not match the network's layer shapes.
    ShapeMismatch { layer: usize },
    EmptyBatch,
    EmptyTrainingSet,
    EmptyValidationSet,
    /// The training loss became non-finite.
    Diverged { epoch: usize },
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::InvalidConfig(msg) => write!(f, "invalid network config: {msg}"),
            NetworkError::DimensionMismatch { expected, got } => {
                write!(f, "input has {got} features but the network expects {expected}")
            }
            NetworkError::ShapeMismatch { layer } => {
                write!(f, "tensor shape does not match network layer {layer}")
            }
            NetworkError::EmptyBatch => f.write_str("cannot compute gradients for an empty batch"),
            NetworkError::EmptyTrainingSet => f.write_str("training set is empty"),
            NetworkError::EmptyValidationSet => f.write_str("validation set is empty"),
            NetworkError::Diverged { epoch } => {
                write!(f, "training diverged (non-finite loss) in epoch {epoch}")
            }
        }
    }
}

impl core::error::Error for NetworkError {}

/// A feedforward network: its config plus one [`LayerParams`] per affine map.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub config: NetworkConfig,
    pub layers: Vec<LayerParams>,
}

/// Sparse view of a feature vector: the indices and values of its nonzeros.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SparseVec {
    idx: Vec<u32>,
    val: Vec<f64>,
}

impl SparseVec {
    pub(crate) fn from_dense(x: &[f64]) -> SparseVec {
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for (j, &v) in x.iter().enumerate() {
            if v != 0.0 {
                idx.push(j as u32);
                val.push(v);
            }
        }
        SparseVec { idx, val }
    }

    #[inline]
    fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.idx.iter().zip(&self.val).map(|(&j, &v)| (j as usize, v))
    }
}

/// Dot product with a fixed four-lane unroll. The summation order is part of
/// the determinism contract: lanes accumulate stride-4, then fold as
/// `(s0 + s1) + (s2 + s3)`, then the tail is added left to right.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for (qa, qb) in (&mut ca).zip(&mut cb) {
        s0 += qa[0] * qb[0];
        s1 += qa[1] * qb[1];
        s2 += qa[2] * qb[2];
        s3 += qa[3] * qb[3];
    }
    let mut s = (s0 + s1) + (s2 + s3);
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        s += x * y;
    }
    s
}

#[inline]
fn relu(z: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        0.0
    }
}

/// Numerically stable softmax over the three logits: the max is subtracted
/// before exponentiation, so nothing overflows.
pub fn softmax(logits: &[f64; NUM_CLASSES]) -> [f64; NUM_CLASSES] {
    let mut max = logits[0];
    for &l in &logits[1..] {
        if l > max {
            max = l;
        }
    }
    let mut exps = [0.0; NUM_CLASSES];
    let mut sum = 0.0;
    for (e, &l) in exps.iter_mut().zip(logits) {
        *e = libm::exp(l - max);
        sum += *e;
    }
    for e in &mut exps {
        *e /= sum;
    }
    exps
}

/// Cross-entropy of one prediction: `-ln(probs[gold])`, with the gold
/// probability floored at [`PROB_FLOOR`]. A NaN probability stays NaN so
/// divergence remains visible.
pub fn cross_entropy(probs: &[f64; NUM_CLASSES], gold: Label) -> f64 {
    let p = probs[gold.index()];
    let clamped = if p < PROB_FLOOR { PROB_FLOOR } else { p };
    -libm::log(clamped)
}

/// Builds a network with Xavier-uniform weights and zero biases.
///
/// For each layer, in order, every weight is drawn row-major from
/// `U(-s, s)` with `s = sqrt(6 / (fan_in + fan_out))` using the xoshiro
/// stream seeded from `config.seed`; the draw order is fixed, so a seed pins
/// the exact parameters forever.
pub fn init_network(config: &NetworkConfig) -> Result<Network, NetworkError> {
    config.validate()?;
    let mut rng = Rng::seed_from(config.seed);
    let mut layers = Vec::with_capacity(config.num_layers);
    for (out_dim, in_dim) in config.layer_dims() {
        let s = libm::sqrt(6.0 / (in_dim + out_dim) as f64);
        let mut weights = Matrix::zeros(out_dim, in_dim);
        for w in weights.data_mut() {
            *w = rng.uniform(-s, s);
        }
        layers.push(LayerParams { weights, biases: vec![0.0; out_dim] });
    }
    Ok(Network { config: config.clone(), layers })
}

impl Network {
    fn check_input(&self, x: &[f64]) -> Result<(), NetworkError> {
        if x.len() != self.config.input_dim {
            return Err(NetworkError::DimensionMismatch {
                expected: self.config.input_dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Runs the network on one feature vector and returns the three logits
    /// (pre-softmax).
    pub fn forward(&self, x: &[f64]) -> Result<[f64; NUM_CLASSES], NetworkError> {
        self.check_input(x)?;
        Ok(self.forward_sparse(&SparseVec::from_dense(x)))
    }

    pub(crate) fn forward_sparse(&self, x: &SparseVec) -> [f64; NUM_CLASSES] {
        let m = self.layers.len();
        let first = &self.layers[0];
        let mut cur = vec![0.0; first.weights.rows()];
        for (i, out) in cur.iter_mut().enumerate() {
            let row = first.weights.row(i);
            let mut s = first.biases[i];
            for (j, v) in x.iter() {
                s += row[j] * v;
            }
            *out = relu(s);
        }
        for layer in &self.layers[1..m - 1] {
            let mut next = vec![0.0; layer.weights.rows()];
            for (i, out) in next.iter_mut().enumerate() {
                *out = relu(layer.biases[i] + dot(layer.weights.row(i), &cur));
            }
            cur = next;
        }
        let last = &self.layers[m - 1];
        let mut logits = [0.0; NUM_CLASSES];
        for (c, out) in logits.iter_mut().enumerate() {
            *out = last.biases[c] + dot(last.weights.row(c), &cur);
        }
        logits
    }

    /// Predicts the label for one feature vector, returning the label and the
    /// full probability vector. Ties break toward the lowest class index.
    pub fn predict(&self, x: &[f64]) -> Result<(Label, [f64; NUM_CLASSES]), NetworkError> {
        self.check_input(x)?;
        Ok(self.predict_sparse(&SparseVec::from_dense(x)))
    }

    pub(crate) fn predict_sparse(&self, x: &SparseVec) -> (Label, [f64; NUM_CLASSES]) {
        let probs = softmax(&self.forward_sparse(x));
        (argmax_label(&probs), probs)
    }

    /// Mean-of-batch gradients of the softmax cross-entropy with respect to
    /// every parameter, plus the mean loss itself. The returned tensors are
    /// shaped exactly like [`Network::layers`].
    pub fn backward(
        &self,
        batch: &[(FeatureVector, Label)],
    ) -> Result<(Vec<LayerParams>, f64), NetworkError> {
        if batch.is_empty() {
            return Err(NetworkError::EmptyBatch);
        }
        let mut data = Vec::with_capacity(batch.len());
        for (x, y) in batch {
            self.check_input(x)?;
            data.push((SparseVec::from_dense(x), *y));
        }
        let order: Vec<usize> = (0..data.len()).collect();
        Ok(self.backward_indexed(&data, &order))
    }

    /// Backward pass over `data[batch[0]], data[batch[1]], ...`. Shared by
    /// [`Network::backward`] and the training loop so both take the same
    /// code path bit for bit.
    pub(crate) fn backward_indexed(
        &self,
        data: &[(SparseVec, Label)],
        batch: &[usize],
    ) -> (Vec<LayerParams>, f64) {
        let bsz = batch.len();
        let m = self.layers.len();

        // Forward, keeping every post-ReLU activation (example-major).
        let mut acts: Vec<Matrix> = Vec::with_capacity(m - 1);
        let first = &self.layers[0];
        let h0 = first.weights.rows();
        let mut a0 = Matrix::zeros(bsz, h0);
        for i in 0..h0 {
            let row = first.weights.row(i);
            let bias = first.biases[i];
            for (b, &ex) in batch.iter().enumerate() {
                let mut s = bias;
                for (j, v) in data[ex].0.iter() {
                    s += row[j] * v;
                }
                a0.set(b, i, relu(s));
            }
        }
        acts.push(a0);
        for layer in &self.layers[1..m - 1] {
            let prev = acts.last().unwrap();
            let out_dim = layer.weights.rows();
            let mut a = Matrix::zeros(bsz, out_dim);
            for i in 0..out_dim {
                let row = layer.weights.row(i);
                let bias = layer.biases[i];
                for b in 0..bsz {
                    a.set(b, i, relu(bias + dot(row, prev.row(b))));
                }
            }
            acts.push(a);
        }

        // Output distribution and the fused softmax + cross-entropy gradient
        // d(loss)/d(logit) = probs - onehot(gold), per example.
        let last = &self.layers[m - 1];
        let top = acts.last().unwrap();
        let mut delta = Matrix::zeros(bsz, NUM_CLASSES);
        let mut loss_sum = 0.0;
        for (b, &ex) in batch.iter().enumerate() {
            let hrow = top.row(b);
            let mut logits = [0.0; NUM_CLASSES];
            for (c, l) in logits.iter_mut().enumerate() {
                *l = last.biases[c] + dot(last.weights.row(c), hrow);
            }
            let probs = softmax(&logits);
            let gold = data[ex].1;
            loss_sum += cross_entropy(&probs, gold);
            for (c, &p) in probs.iter().enumerate() {
                let onehot = if c == gold.index() { 1.0 } else { 0.0 };
                delta.set(b, c, p - onehot);
            }
        }

        // Walk the layers backwards, accumulating parameter gradients and
        // propagating delta through W^T and the ReLU mask.
        let mut grads: Vec<LayerParams> = self.layers.iter().map(LayerParams::zeros_like).collect();
        for l in (0..m).rev() {
            let out_dim = self.layers[l].weights.rows();
            for (i, gb) in grads[l].biases.iter_mut().enumerate() {
                let mut s = 0.0;
                for b in 0..bsz {
                    s += delta.get(b, i);
                }
                *gb = s;
            }
            if l == 0 {
                for i in 0..out_dim {
                    let grow = grads[0].weights.row_mut(i);
                    for (b, &ex) in batch.iter().enumerate() {
                        let d = delta.get(b, i);
                        if d != 0.0 {
                            for (j, v) in data[ex].0.iter() {
                                grow[j] += d * v;
                            }
                        }
                    }
                }
            } else {
                let prev = &acts[l - 1];
                for i in 0..out_dim {
                    let grow = grads[l].weights.row_mut(i);
                    for b in 0..bsz {
                        let d = delta.get(b, i);
                        if d != 0.0 {
                            for (g, a) in grow.iter_mut().zip(prev.row(b)) {
                                *g += d * a;
                            }
                        }
                    }
                }
                let mut dprev = Matrix::zeros(bsz, self.layers[l].weights.cols());
                for i in 0..out_dim {
                    let wrow = self.layers[l].weights.row(i);
                    for b in 0..bsz {
                        let d = delta.get(b, i);
                        if d != 0.0 {
                            for (dp, w) in dprev.row_mut(b).iter_mut().zip(wrow) {
                                *dp += d * w;
                            }
                        }
                    }
                }
                // ReLU subgradient: 0 wherever the activation was 0.
                for b in 0..bsz {
                    let arow = prev.row(b);
                    for (j, dp) in dprev.row_mut(b).iter_mut().enumerate() {
                        if arow[j] <= 0.0 {
                            *dp = 0.0;
                        }
                    }
                }
                delta = dprev;
            }
        }

        // Mean over the batch.
        let inv = 1.0 / bsz as f64;
        for g in &mut grads {
            for w in g.weights.data_mut() {
                *w *= inv;
            }
            for b in &mut g.biases {
                *b *= inv;
            }
        }
        (grads, loss_sum * inv)
    }
}

/// Index of the largest probability; ties go to the lowest class index.
fn argmax_label(probs: &[f64; NUM_CLASSES]) -> Label {
    let mut best = 0;
    for c in 1..NUM_CLASSES {
        if probs[c] > probs[best] {
            best = c;
        }
    }
    Label::from_index(best).unwrap()
}
