//! Computational homological algebra for operator modules over
//! finite-dimensional unital operator algebras.
//!
//! The crate builds the additive category of non-degenerate right operator
//! modules over a concretely represented algebra and makes its homological
//! structure executable at desk scale:
//!
//! - [`algebra`]: unital algebras embedded in a matrix algebra, semisimplicity
//!   detection through the radical, explicit matrix units for blocked
//!   semisimple algebras.
//! - [`opspace`]: operator spaces as compositional matrix-norm oracles
//!   (concrete embeddings, subspaces, quotients, direct sums, hom spaces,
//!   Haagerup tensors) with certified norm intervals where optimization is
//!   involved.
//! - [`modules`]: operator modules, completely bounded module maps, kernels,
//!   cokernels, pullbacks, pushouts and morphism classification.
//! - [`exact`]: kernel-cokernel pairs, the three exact structures
//!   (split, linearly split, all pairs), splitting solvers and the
//!   axiom property suite.
//! - [`haagerup`]: the module `E (x) A` with factorization norm bounds, the
//!   canonical projection onto `E`, and functional separation.
//! - [`homology`]: relative projectivity and injectivity, resolutions,
//!   injective dimension, global-dimension-zero certification and witness
//!   search over non-semisimple algebras.
//!
//! Sampling-heavy verdicts are data parallel. With the default `parallel`
//! feature they run on rayon; without it the same code runs sequentially.
//! Results are independent of the scheduling either way: every sample draws
//! from its own seeded stream.

pub mod algebra;
pub mod error;
pub mod exact;
pub mod haagerup;
pub mod homology;
pub mod modules;
pub mod numerics;
pub mod opspace;
pub mod par;
pub mod random;
pub mod tolerance;

pub use error::Error;
pub use tolerance::TolerancePolicy;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
