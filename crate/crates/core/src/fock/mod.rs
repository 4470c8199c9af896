//! Truncated doubled Fock-space oracle: every state built by brute-force matrix exponentials.

mod operator;
mod pipeline;
mod vectors;

pub use operator::{ladder_matrices, matrix_exp_apply, number_operator, OperatorMatrix, MAX_TAYLOR_TERMS};
pub use pipeline::{
    initial_cutoff, CutoffPolicy, OracleOptions, ThermalizedOracle, DEFAULT_DEFICIT_CEILING, DEFAULT_EXP_TOL, MAX_CUTOFF,
};
pub use vectors::{
    displaced_squeezed_number_vector, marginal_density, oracle_moments, thermalize, tilde_vector, time_evolve,
    FockVector1, FockVector2, DEFAULT_EDGE_CEILING,
};
