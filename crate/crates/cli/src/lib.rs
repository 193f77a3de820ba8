//! Command-line pipeline around [`mixbow_core`]: file formats, run
//! configuration, and the convert/train/bag/predict/evaluate/sweep commands.
//!
//! The binary in this crate is a thin argument-parsing shell; everything it
//! does lives here so tests can drive commands in-process against buffers.

#![forbid(unsafe_code)]

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod render;
