//! Complex dense linear algebra and the convex kernels behind every norm
//! computation: exact solves in one regime, certified optimization in the
//! other.

pub mod ascent;
pub mod cmat;
pub mod solve;
pub mod spectral;

pub use ascent::{ratio_ascent, top_singular_pair, RatioAscent};
pub use cmat::{
    block_assemble, c, check_finite, frob_inner, identity, is_finite_mat, mat_of_vec,
    operator_norm, random_mat, random_vec, singular_values, trace_norm, unit_mat, vec_of_mat,
    C64, CMat, CVec,
};
pub use solve::{
    lstsq_min_norm, null_basis, orthonormal_complement, orthonormalize, range_basis, rank,
    solve_affine, AffineOutcome,
};
pub use spectral::{min_opnorm_over_coset, minimize_block_norm, BlockProgram, CosetMin};
