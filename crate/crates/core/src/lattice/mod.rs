//! Exact integer-lattice machinery: bases, Gram matrices, Hermite normal
//! form, LLL reduction, instance generators and an exhaustive SVP oracle.
//!
//! No floating point is used for anything that decides a result.

mod basis;
mod hnf;
pub mod io;
mod lll;
mod random;
mod svp;

pub use basis::{
    gram, scramble, Basis, CoefficientVector, GramMatrix, LatticeVector, UnimodularMatrix,
};
pub use hnf::{hnf, is_hnf};
pub use lll::{
    default_delta, gram_schmidt, is_lll_reduced, lll_reduce, lll_reduce_with_transform,
    GramSchmidtData,
};
pub use random::{
    random_good_bad_pair, random_lattice, random_prime, random_prime_det_hnf, random_uniform_basis,
    random_unimodular, GoodBadPair, GoodBadParams, LatticeMode, RandomLattice,
};
pub use svp::{
    coeff_of_vector, svp_enumerate, svp_enumerate_with_cap, SvpResult, DEFAULT_ORACLE_CAP,
};
