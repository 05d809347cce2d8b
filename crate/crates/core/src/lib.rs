//! Mean map embeddings of distributions via random Fourier features, and a
//! differentiable mean map layer for classifying images by the distribution
//! of their convolutional features.
//!
//! The crate is organized bottom-up:
//!
//! - [`tensor`]: dense row-major arrays over `f32`/`f64` with deterministic
//!   construction and the arithmetic everything else builds on.
//! - [`rng`]: seeded, stream-splittable randomness so every run reproduces.
//! - [`io`]: the binary tensor file format used by all persistence.
//! - [`layers`]: forward/backward layer primitives and a finite-difference
//!   gradient checker.
//! - [`kernel`]: random Fourier feature bases, exact RBF evaluation, mean map
//!   embeddings of sample sets, and primal-space inner products.
//! - [`mml`]: the mean map layer (frequency convolution, cosine, global
//!   average pooling) with backprop through inputs, frequencies, and scale.
//! - [`synth`]: the synthetic Dirichlet-texture dataset generator.
//! - [`dataset`]: labeled image sets and the on-disk dataset layout.
//! - [`net`]: declarative network DAGs, the three synthetic architectures,
//!   and the replacing/replicating/forking extension topologies.
//! - [`train`]: momentum SGD with snapshots, model selection, and top-k
//!   evaluation.

pub mod dataset;
pub mod io;
pub mod kernel;
pub mod layers;
pub mod mml;
pub mod net;
pub mod rng;
pub mod synth;
pub mod tensor;
pub mod train;

pub use rng::Rng;
pub use tensor::{Scalar, Tensor};
