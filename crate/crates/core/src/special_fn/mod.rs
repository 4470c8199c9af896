//! Overflow-safe special-function kernels shared by every other module.

mod combinatorics;
mod hermite;
mod linearize;
mod quadrature;

pub use combinatorics::{binomial, ln_binomial, ln_factorial, EXACT_BINOMIAL_MAX};
pub use hermite::{eigenfunction, eigenfunction_table, hermite_fn, hermite_log, hermite_poly};
pub use linearize::{hermite_product_linearize, HermiteExpansion};
pub use quadrature::{
    gauss_hermite_rule, QuadratureRule, DEFAULT_QUADRATURE_NODES, MAX_QUADRATURE_NODES,
};
