//! Physicists' Hermite polynomials `H_n` and the normalized oscillator
//! eigenfunctions built from them.
//!
//! Every density in this crate uses the physicists' convention
//! (`H_1(x) = 2x`, weight `e^{-x²}`). Substituting the probabilists' `He_n`
//! silently rescales every Hermite argument by `√2`.

use crate::error::{Result, ThermoError};
use crate::model::OscillatorParams;
use crate::scalar::Real;

use super::combinatorics::ln_factorial;

fn check_finite<T: Real>(x: T, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(ThermoError::Domain(format!("{what} must be finite, got {x}")))
    }
}

/// `H_n(x)` by the three-term recurrence `H_{k+1} = 2x H_k - 2k H_{k-1}`.
///
/// Overflows to infinity for large `n·|x|`; use [`hermite_log`] there.
pub fn hermite_poly<T: Real>(n: usize, x: T) -> Result<T> {
    check_finite(x, "Hermite argument")?;
    Ok(hermite_poly_unchecked(n, x))
}

pub(crate) fn hermite_poly_unchecked<T: Real>(n: usize, x: T) -> T {
    let two = T::lit(2.0);
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two * x;
    for k in 1..n {
        let next = two * x * cur - two * T::count(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `h_n(x) = H_n(x) / √(2ⁿ n!)` held as `mantissa · e^{ln_scale}`.
#[derive(Debug, Clone, Copy)]
struct Scaled<T> {
    mantissa: T,
    ln_scale: T,
}

/// Runs the normalized recurrence `h_{k+1} = √(2/(k+1)) x h_k - √(k/(k+1)) h_{k-1}`,
/// rescaling whenever the magnitude approaches overflow. `visit` sees every degree.
fn normalized_sweep<T: Real>(n: usize, x: T, mut visit: impl FnMut(usize, Scaled<T>)) -> Scaled<T> {
    let limit = T::max_value().sqrt();
    let ln_limit = limit.ln();
    let two = T::lit(2.0);
    let mut ln_scale = T::zero();
    let mut prev = T::zero();
    let mut cur = T::one();
    visit(0, Scaled { mantissa: cur, ln_scale });
    for k in 0..n {
        let kp1 = T::count(k + 1);
        let next = (two / kp1).sqrt() * x * cur - (T::count(k) / kp1).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > limit {
            cur /= limit;
            prev /= limit;
            ln_scale += ln_limit;
        }
        visit(k + 1, Scaled { mantissa: cur, ln_scale });
    }
    Scaled { mantissa: cur, ln_scale }
}

/// Sign and natural log of `|H_n(x)|`, free of overflow for any degree.
///
/// Returns `(0, -inf)` at an exact zero.
pub fn hermite_log<T: Real>(n: usize, x: T) -> (T, T) {
    let h = normalized_sweep(n, x, |_, _| {});
    if h.mantissa == T::zero() {
        return (T::zero(), T::neg_infinity());
    }
    let half_norm = T::lit(0.5) * (T::count(n) * T::LN_2() + ln_factorial::<T>(n));
    (h.mantissa.signum(), h.mantissa.abs().ln() + h.ln_scale + half_norm)
}

fn eigen_from_scaled<T: Real>(h: Scaled<T>, xi: T) -> T {
    if h.mantissa == T::zero() {
        return T::zero();
    }
    let quarter_ln_pi = T::lit(0.25) * T::PI().ln();
    let ln_mag = h.mantissa.abs().ln() + h.ln_scale - T::lit(0.5) * xi * xi - quarter_ln_pi;
    h.mantissa.signum() * ln_mag.exp()
}

/// Dimensionless normalized eigenfunction `π^{-1/4} (2ⁿ n!)^{-1/2} H_n(ξ) e^{-ξ²/2}`.
pub fn eigenfunction<T: Real>(n: usize, xi: T) -> T {
    let h = normalized_sweep(n, xi, |_, _| {});
    eigen_from_scaled(h, xi)
}

/// All eigenfunctions `ψ_0(ξ) … ψ_nmax(ξ)` in one recurrence sweep.
pub fn eigenfunction_table<T: Real>(nmax: usize, xi: T) -> Vec<T> {
    let mut out = Vec::with_capacity(nmax + 1);
    normalized_sweep(nmax, xi, |_, h| out.push(eigen_from_scaled(h, xi)));
    out
}

/// Normalized oscillator eigenfunction `ψ_n(x)` in physical units (length^{-1/2}).
pub fn hermite_fn<T: Real>(n: usize, x: T, p: &OscillatorParams<T>) -> Result<T> {
    check_finite(x, "position")?;
    let len = p.length_scale();
    Ok(eigenfunction(n, x / len) / len.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::gauss_hermite_rule;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    #[test]
    fn spot_values() {
        assert_eq!(hermite_poly(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite_poly(1, 0.5).unwrap(), 1.0);
        // 8x³ - 12x at x = 2
        assert_eq!(hermite_poly(3, 2.0).unwrap(), 40.0);
        assert!(hermite_poly(2, f64::NAN).is_err());
        assert!(hermite_poly(2, f64::INFINITY).is_err());
    }

    #[test]
    fn ground_state_at_origin() {
        let p = OscillatorParams::default();
        let v = hermite_fn(0, 0.0, &p).unwrap();
        assert!((v - std::f64::consts::PI.powf(-0.25)).abs() < 1e-15);
        assert!((v - 0.751126).abs() < 1e-6);
        assert_eq!(hermite_fn(1, 0.0, &p).unwrap(), 0.0);
        let odd = OscillatorParams::new(2.5, 0.3, 1.7).unwrap();
        assert_eq!(hermite_fn(1, 0.0, &odd).unwrap(), 0.0);
    }

    #[test]
    fn fifth_eigenfunction_matches_direct_formula() {
        let p = OscillatorParams::default();
        let x = 1.3_f64;
        let direct = (32.0 * factorial(5)).powf(-0.5)
            * hermite_poly(5, x).unwrap()
            * (-0.845_f64).exp()
            * std::f64::consts::PI.powf(-0.25);
        let got = hermite_fn(5, x, &p).unwrap();
        assert!((got - direct).abs() < 1e-14 * direct.abs().max(1.0));
    }

    #[test]
    fn physical_units_scale_the_argument() {
        let p = OscillatorParams::new(2.0, 3.0, 0.5).unwrap();
        let len = (0.5_f64 / 6.0).sqrt();
        let x = 0.2;
        let expected = eigenfunction(3, x / len) / len.sqrt();
        assert_eq!(hermite_fn(3, x, &p).unwrap(), expected);
    }

    #[test]
    fn log_form_agrees_with_direct_recurrence() {
        for n in 0..30 {
            for &x in &[-3.3, -0.4, 0.0, 0.7, 2.9] {
                let direct: f64 = hermite_poly(n, x).unwrap();
                let (s, l) = hermite_log(n, x);
                let back = s * l.exp();
                let tol = 1e-12 * direct.abs().max(1e-300);
                assert!((back - direct).abs() <= tol.max(1e-300), "n={n} x={x}: {back} vs {direct}");
            }
        }
    }

    #[test]
    fn high_degree_does_not_overflow() {
        let (s, l) = hermite_log::<f64>(400, 30.0);
        assert_eq!(s, 1.0);
        assert!(l.is_finite() && l > 700.0);
        let tab = eigenfunction_table::<f64>(256, 20.0);
        assert!(tab.iter().all(|v| v.is_finite()));
        assert!(tab[256].abs() > 1e-3);
        // deep in the classically forbidden region the ground state underflows, high n does not
        assert!(eigenfunction::<f64>(300, 24.0).abs() > 0.0);
    }

    #[test]
    fn table_matches_single_evaluations() {
        let tab = eigenfunction_table::<f64>(40, 1.7);
        for (n, v) in tab.iter().enumerate() {
            assert!((v - eigenfunction(n, 1.7)).abs() < 1e-15);
        }
    }

    #[test]
    fn eigenfunctions_are_orthonormal() {
        // ψ_m ψ_n = e^{-ξ²} · poly; integrate with the scaled weights of a 200-point rule
        let rule = gauss_hermite_rule::<f64>(200).unwrap();
        let tables: Vec<Vec<f64>> = rule.nodes.iter().map(|&y| eigenfunction_table(50, y)).collect();
        for m in 0..=50 {
            for n in m..=50 {
                if m > 30 && n != m {
                    continue;
                }
                let s: f64 = rule
                    .scaled_weights
                    .iter()
                    .zip(&tables)
                    .map(|(w, t)| w * t[m] * t[n])
                    .sum();
                let expected = if m == n { 1.0 } else { 0.0 };
                assert!((s - expected).abs() < 1e-10, "m={m} n={n}: {s}");
            }
        }
    }

    #[test]
    fn f32_kernels_run() {
        let v: f32 = eigenfunction(4, 0.3f32);
        let w = eigenfunction(4, 0.3f64) as f32;
        assert!((v - w).abs() < 1e-5);
    }
}
