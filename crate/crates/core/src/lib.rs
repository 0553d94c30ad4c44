//! Reconstruction of images from corrupted measurements with a denoising
//! diffusion prior that is adapted at test time.
//!
//! The crate provides the full pipeline: dense tensor numerics, forward
//! operators with matched adjoints (parallel-beam Radon, masked Fourier,
//! block-average downsampling), noise schedules and DDIM sampling, a small
//! time-conditioned convolutional ε-predictor with hand-written backward
//! passes, low-rank residual (LoRA) adaptation, and the DDS / SCD
//! reconstruction engines, plus synthetic data generation and on-disk
//! formats.

pub mod error;
pub mod tensor;
pub mod rng;
pub mod numerics;
pub mod operators;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use tensor::Tensor;
