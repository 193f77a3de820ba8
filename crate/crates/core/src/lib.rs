//! Core library for a bag-of-ngrams sentiment pipeline over code-mixed
//! (Hindi-English) tweets.
//!
//! The pipeline runs in four stages, each provided by a module here:
//!
//! 1. [`corpus`] — parse CoNLL-style tweet files and strip usernames/URLs;
//! 2. [`features`] — build a frequency-thresholded ngram vocabulary and turn
//!    tweets into dense feature vectors;
//! 3. [`network`] — train small feedforward softmax classifiers from scratch
//!    (manual backprop, SGD or Adam), optionally bagged via [`ensemble`];
//! 4. [`metrics`] — score predictions with precision/recall/F1.
//!
//! Everything is deterministic given the seeds in the relevant configs, and
//! the crate is `no_std` (it allocates, but performs no IO). File formats and
//! the command-line interface live in the companion `mixbow` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod corpus;
pub mod ensemble;
pub mod features;
pub mod metrics;
pub mod network;
pub mod rng;
pub mod stopwords;
pub mod synthetic;

pub use corpus::Label;
