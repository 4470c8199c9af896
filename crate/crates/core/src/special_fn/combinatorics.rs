use crate::error::{Result, ThermoError};
use crate::scalar::Real;

/// Largest `n` for which [`binomial`] is computed exactly in integers.
pub const EXACT_BINOMIAL_MAX: usize = 62;

const DIRECT_FACTORIAL_MAX: usize = 170;

/// `ln(n!)`.
///
/// Direct product up to `170!` (the last factorial finite in binary64), Stirling series beyond.
pub fn ln_factorial<T: Real>(n: usize) -> T {
    T::lit(ln_factorial_f64(n))
}

pub(crate) fn ln_factorial_f64(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= DIRECT_FACTORIAL_MAX {
        let prod: f64 = (2..=n).map(|k| k as f64).product();
        return prod.ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    (x + 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

fn exact_binomial(n: usize, r: usize) -> u128 {
    let r = r.min(n - r);
    let mut c: u128 = 1;
    for i in 0..r {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// Binomial coefficient `C(n, r)`: exact integer arithmetic for `n <= 62`, log-scale above.
pub fn binomial<T: Real>(n: usize, r: usize) -> Result<T> {
    if r > n {
        return Err(ThermoError::Domain(format!("binomial({n}, {r}) requires r <= n")));
    }
    if n <= EXACT_BINOMIAL_MAX {
        return Ok(T::lit(exact_binomial(n, r) as f64));
    }
    Ok(T::lit(ln_binomial_f64(n, r).exp()))
}

/// `ln C(n, r)`.
pub fn ln_binomial<T: Real>(n: usize, r: usize) -> Result<T> {
    if r > n {
        return Err(ThermoError::Domain(format!("binomial({n}, {r}) requires r <= n")));
    }
    Ok(T::lit(ln_binomial_f64(n, r)))
}

fn ln_binomial_f64(n: usize, r: usize) -> f64 {
    if n <= EXACT_BINOMIAL_MAX {
        return (exact_binomial(n, r) as f64).ln();
    }
    ln_factorial_f64(n) - ln_factorial_f64(r) - ln_factorial_f64(n - r)
}
