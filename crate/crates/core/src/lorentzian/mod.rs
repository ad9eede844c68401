//! Symmetric matrices, the Lorentzian test, the scaling action, rank-2
//! parametrisation, witness families and samplers.

mod matrix;
mod sample;
mod spectrum;
mod witness;

pub use matrix::{rank_exact, scale, AnyMatrix, SymMatrix};
pub use sample::{sample_lorentzian, sample_rank2, sample_rank2_params, Rank2Distribution};
pub use spectrum::{
    is_lorentzian, is_lorentzian_exact, is_lorentzian_float, signature_exact, signature_float,
    EigenSignature, LorentzianReport, EIGEN_ZERO_REL,
};
pub use witness::{rank2_hessian, witness_pentagonal, witness_tp, witness_triangular, Rank2Params};
