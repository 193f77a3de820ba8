//! The two optimizers: plain SGD and Adam with bias correction.
//!
//! Both read their hyperparameters from the network's own config, apply L2
//! weight decay as an additive gradient term `g + l2 * theta` on every
//! parameter (weights and biases alike) before anything else, and update
//! parameters in a fixed order (layers first to last, weights row-major,
//! then biases), which keeps training bit-reproducible.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{LayerParams, Network, NetworkError};

/// Optimizer selection for a training run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimizer {
    Sgd,
    Adam,
}

impl Optimizer {
    pub fn as_str(self) -> &'static str {
        match self {
            Optimizer::Sgd => "sgd",
            Optimizer::Adam => "adam",
        }
    }
}

impl fmt::Display for Optimizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Optimizer {
    type Err = ();

    fn from_str(s: &str) -> Result<Optimizer, ()> {
        if s.eq_ignore_ascii_case("sgd") {
            Ok(Optimizer::Sgd)
        } else if s.eq_ignore_ascii_case("adam") {
            Ok(Optimizer::Adam)
        } else {
            Err(())
        }
    }
}

/// First/second moment estimates for Adam, shaped like the network.
///
/// The running powers `beta^t` for the bias corrections are kept incrementally
/// (multiplied once per step), which is the usual formulation and is exactly
/// as deterministic as recomputing them.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    m: Vec<LayerParams>,
    v: Vec<LayerParams>,
    t: u64,
    beta1_pow: f64,
    beta2_pow: f64,
}

impl AdamState {
    /// Zero-initialized moments for the given network.
    pub fn new(net: &Network) -> AdamState {
        AdamState {
            m: net.layers.iter().map(LayerParams::zeros_like).collect(),
            v: net.layers.iter().map(LayerParams::zeros_like).collect(),
            t: 0,
            beta1_pow: 1.0,
            beta2_pow: 1.0,
        }
    }

    /// Number of steps taken so far.
    pub fn step_count(&self) -> u64 {
        self.t
    }
}

fn check_tensors(layers: &[LayerParams], tensors: &[LayerParams]) -> Result<(), NetworkError> {
    if layers.len() != tensors.len() {
        return Err(NetworkError::ShapeMismatch { layer: layers.len().min(tensors.len()) });
    }
    for (l, (layer, t)) in layers.iter().zip(tensors).enumerate() {
        if layer.weights.rows() != t.weights.rows()
            || layer.weights.cols() != t.weights.cols()
            || layer.biases.len() != t.biases.len()
        {
            return Err(NetworkError::ShapeMismatch { layer: l });
        }
    }
    Ok(())
}

/// One SGD step: `theta -= lr * (g + l2 * theta)` for every parameter.
pub fn sgd_step(net: &mut Network, grads: &[LayerParams]) -> Result<(), NetworkError> {
    check_tensors(&net.layers, grads)?;
    let lr = net.config.learning_rate;
    let l2 = net.config.l2_weight_decay;
    for (layer, grad) in net.layers.iter_mut().zip(grads) {
        for (p, g) in layer.weights.data_mut().iter_mut().zip(grad.weights.data()) {
            *p -= lr * (g + l2 * *p);
        }
        for (p, g) in layer.biases.iter_mut().zip(&grad.biases) {
            *p -= lr * (g + l2 * *p);
        }
    }
    Ok(())
}

/// One Adam step with bias-corrected moments:
///
/// ```text
/// g      = grad + l2 * theta
/// m      = beta1 * m + (1 - beta1) * g
/// v      = beta2 * v + (1 - beta2) * g^2
/// m_hat  = m / (1 - beta1^t)
/// v_hat  = v / (1 - beta2^t)
/// theta -= lr * m_hat / (sqrt(v_hat) + epsilon)
/// ```
pub fn adam_step(
    net: &mut Network,
    grads: &[LayerParams],
    state: &mut AdamState,
) -> Result<(), NetworkError> {
    check_tensors(&net.layers, grads)?;
    check_tensors(&net.layers, &state.m)?;
    let lr = net.config.learning_rate;
    let l2 = net.config.l2_weight_decay;
    let beta1 = net.config.adam_beta1;
    let beta2 = net.config.adam_beta2;
    let eps = net.config.adam_epsilon;

    state.t += 1;
    state.beta1_pow *= beta1;
    state.beta2_pow *= beta2;
    let corr1 = 1.0 - state.beta1_pow;
    let corr2 = 1.0 - state.beta2_pow;

    for (l, (layer, grad)) in net.layers.iter_mut().zip(grads).enumerate() {
        let ms = &mut state.m[l];
        let vs = &mut state.v[l];
        adam_update(
            layer.weights.data_mut(),
            grad.weights.data(),
            ms.weights.data_mut(),
            vs.weights.data_mut(),
            lr, l2, beta1, beta2, eps, corr1, corr2,
        );
        adam_update(
            &mut layer.biases,
            &grad.biases,
            &mut ms.biases,
            &mut vs.biases,
            lr, l2, beta1, beta2, eps, corr1, corr2,
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn adam_update(
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    lr: f64,
    l2: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    corr1: f64,
    corr2: f64,
) {
    for i in 0..params.len() {
        let g = grads[i] + l2 * params[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        let m_hat = m[i] / corr1;
        let v_hat = v[i] / corr2;
        params[i] -= lr * m_hat / (libm::sqrt(v_hat) + eps);
    }
}
