//! Truncated Hilbert space, the representation of SU_q(2), Dirac operator,
//! real structure and residual checks.

mod basis;
mod rep;
mod sparse;
pub mod verify;

pub use basis::{
    basis_size, enumerate_basis, n_bound, Arrow, BasisVector, HalfInt, TruncatedBasis,
};
pub use rep::{
    coeff_cs, dirac, dirac_twice, generator_op, k_gradings, lq_weight, reality, reality_exponent,
    word_op, AntilinearOp, Phase4, PhaseFn, Representation,
};
pub use sparse::{compress, max_abs, norm2, sub_vec, CooMatrix, SparseOp, SparseVec};
