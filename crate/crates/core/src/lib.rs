//! Position densities of thermalized displaced and squeezed number states in
//! thermofield dynamics, from closed forms and from a truncated Fock-space oracle.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod cli;
pub mod densities;
pub mod error;
pub mod fock;
pub mod model;
pub mod scalar;
pub mod special_fn;
pub mod states;

pub use error::{Result, ThermoError};

pub type OscillatorParams64 = model::OscillatorParams<f64>;
pub type ThermalParams64 = model::ThermalParams<f64>;
pub type Displacement64 = model::Displacement<f64>;
pub type Squeeze64 = model::Squeeze<f64>;
pub type StateSpec64 = model::StateSpec<f64>;
pub type TimePoint64 = model::TimePoint<f64>;
pub type GridSpec64 = densities::GridSpec<f64>;
pub type DensityProfile64 = densities::DensityProfile<f64>;
pub type FockVector1_64 = fock::FockVector1<f64>;
pub type FockVector2_64 = fock::FockVector2<f64>;
pub type ThermalizedOracle64 = fock::ThermalizedOracle<f64>;
pub type OracleOptions64 = fock::OracleOptions<f64>;
pub type Cplx64 = scalar::Cplx<f64>;
