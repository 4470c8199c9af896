//! Number state → squeeze → displace → tensor with tilde conjugate → thermalize → evolve.

use super::vectors::{build_single, marginal_density, oracle_moments, thermalize, tilde_vector, time_evolve, FockVector1, FockVector2};
use crate::error::{Result, ThermoError};
use crate::model::{OscillatorParams, StateSpec, ThermalParams};
use crate::scalar::{Cplx, Real};

/// Hard ceiling for the adaptive cutoff.
pub const MAX_CUTOFF: usize = 512;
pub const DEFAULT_DEFICIT_CEILING: f64 = 1e-10;
pub const DEFAULT_EXP_TOL: f64 = 1e-15;

/// How the Fock cutoff is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffPolicy {
    /// Start from an occupation estimate and double until the edge weight is small.
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions<T> {
    pub cutoff: CutoffPolicy,
    /// Series tolerance of each exponential.
    pub tol: T,
    /// Largest accepted edge weight.
    pub deficit_ceiling: T,
}

impl<T: Real> Default for OracleOptions<T> {
    fn default() -> Self {
        Self { cutoff: CutoffPolicy::Auto, tol: T::lit(DEFAULT_EXP_TOL), deficit_ceiling: T::lit(DEFAULT_DEFICIT_CEILING) }
    }
}

/// `4(n + |α|² + sinh²r + n̄) + 20` with `n̄ = 1/(e^{βħω} - 1)`.
pub fn initial_cutoff<T: Real>(state: &StateSpec<T>, th: &ThermalParams<T>) -> usize {
    let r = state.squeeze().r();
    let nbar = th.mean_occupation();
    let est = T::count(state.n()) + state.alpha().norm_sqr() + r.sinh() * r.sinh() + nbar;
    (T::lit(4.0) * est + T::lit(20.0)).ceil().to_usize().unwrap_or(MAX_CUTOFF + 1)
}

/// The thermalized doubled state at `t = 0`; evolve it per phase with [`ThermalizedOracle::at`].
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalizedOracle<T> {
    pub state: StateSpec<T>,
    pub thermal: ThermalParams<T>,
    pub vector: FockVector2<T>,
    pub cutoff: usize,
    /// Edge weight at the accepted cutoff.
    pub deficit: T,
}

fn doubled_initial<T: Real>(state: &StateSpec<T>, cutoff: usize, tol: T) -> Result<FockVector2<T>> {
    let u = match state {
        StateSpec::ThermalVacuum => FockVector1::basis(0, cutoff),
        _ => build_single(&state.alpha(), &state.squeeze(), state.n(), cutoff, tol)?,
    };
    FockVector2::product(&u, &tilde_vector(&u))
}

impl<T: Real> ThermalizedOracle<T> {
    pub fn build(state: &StateSpec<T>, th: &ThermalParams<T>, opts: &OracleOptions<T>) -> Result<Self> {
        let at = |cutoff: usize| -> Result<Self> {
            let c = doubled_initial(state, cutoff, opts.tol)?;
            let vector = thermalize(&c, th.theta(), opts.tol)?;
            let deficit = vector.edge_weight();
            Ok(Self { state: *state, thermal: *th, vector, cutoff, deficit })
        };
        match opts.cutoff {
            CutoffPolicy::Fixed(n) => {
                if n < 2 * state.n() || n < 1 {
                    return Err(ThermoError::Domain(format!("cutoff {n} leaves no headroom above n = {}", state.n())));
                }
                at(n)
            }
            CutoffPolicy::Auto => {
                let mut n = initial_cutoff(state, th).max(2 * state.n()).min(MAX_CUTOFF);
                loop {
                    let o = at(n)?;
                    if o.deficit < opts.deficit_ceiling {
                        return Ok(o);
                    }
                    if n >= MAX_CUTOFF {
                        return Err(ThermoError::CutoffTooSmall {
                            cutoff: n,
                            deficit: o.deficit.as_f64(),
                            ceiling: opts.deficit_ceiling.as_f64(),
                        });
                    }
                    n = (2 * n).min(MAX_CUTOFF);
                }
            }
        }
    }

    pub fn at(&self, omega_t: T) -> FockVector2<T> {
        time_evolve(&self.vector, omega_t)
    }

    pub fn density(&self, x: T, p: &OscillatorParams<T>, omega_t: T) -> T {
        marginal_density(&self.at(omega_t), x, p)
    }

    /// Densities on many points for one phase.
    pub fn densities(&self, xs: &[T], p: &OscillatorParams<T>, omega_t: T) -> Vec<T> {
        use rayon::prelude::*;
        let c = self.at(omega_t);
        xs.par_iter().map(|&x| marginal_density(&c, x, p)).collect()
    }

    pub fn moments(&self, p: &OscillatorParams<T>, omega_t: T) -> (T, T) {
        oracle_moments(&self.at(omega_t), p)
    }

    pub fn amplitude(&self, x: T, x_tilde: T, p: &OscillatorParams<T>, omega_t: T) -> Cplx<T> {
        self.at(omega_t).amplitude(x, x_tilde, p)
    }
}
