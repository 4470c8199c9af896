//! Gauss-Hermite quadrature for the weight `e^{-y²}` on the real line.
//!
//! Nodes come from the eigenvalues of the Jacobi matrix (Golub-Welsch),
//! polished by Newton steps on the normalized recurrence. Weights use the
//! closed form `w_i = √π / (k h_{k-1}(y_i)²)`, evaluated in log space, so the
//! outermost weights keep full relative precision instead of inheriting the
//! absolute error of an eigenvector component.

use crate::error::{Result, ThermoError};
use crate::scalar::Real;

/// Node count used wherever a caller does not pick one.
pub const DEFAULT_QUADRATURE_NODES: usize = 200;

/// Largest supported rule.
pub const MAX_QUADRATURE_NODES: usize = 512;

/// A k-point rule: `∫ e^{-y²} f(y) dy ≈ Σ weights[i] f(nodes[i])`.
///
/// `scaled_weights[i] = weights[i] · e^{nodes[i]²}` integrate integrands that
/// already carry their Gaussian factor and never underflow. For `k` beyond
/// roughly 300 the outermost entries of `weights` fall below the smallest
/// positive binary64 value and read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub scaled_weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ e^{-y²} f(y) dy`.
    pub fn integrate_weighted(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&y, &w)| acc + w * f(y))
    }

    /// `∫ g(x) dx` after the substitution `x = center + scale·y`.
    ///
    /// Exact when `g(center + scale·y)` is a polynomial of degree `< 2k` times `e^{-y²}`.
    pub fn integrate_line(&self, center: T, scale: T, g: impl Fn(T) -> T) -> T {
        let s = self
            .nodes
            .iter()
            .zip(&self.scaled_weights)
            .fold(T::zero(), |acc, (&y, &w)| acc + w * g(center + scale * y));
        s * scale
    }

    /// Sample points of [`Self::integrate_line`], for callers that evaluate the integrand in parallel.
    pub fn line_points(&self, center: T, scale: T) -> Vec<T> {
        self.nodes.iter().map(|&y| center + scale * y).collect()
    }

    /// Combines precomputed integrand values at [`Self::line_points`].
    pub fn sum_line(&self, scale: T, values: &[T]) -> T {
        self.scaled_weights
            .iter()
            .zip(values)
            .fold(T::zero(), |acc, (&w, &v)| acc + w * v)
            * scale
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson-style shifts.
///
/// `diag` is overwritten with the (unsorted) eigenvalues. `off[i]` couples rows `i` and `i+1`.
fn tridiagonal_eigenvalues<T: Real>(diag: &mut [T], off: &mut [T]) -> Result<()> {
    let n = diag.len();
    if n < 2 {
        return Ok(());
    }
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 64 {
                return Err(ThermoError::NonConvergence {
                    terms: iterations,
                    residual: off[l].abs().as_f64(),
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (two * off[l]);
            let mut r = g.hypot(T::one());
            let shift = if g >= T::zero() { r } else { -r };
            g = diag[m] - diag[l] + off[l] / (g + shift);
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == T::zero() {
                    diag[i + 1] -= p;
                    off[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = T::zero();
        }
    }
    Ok(())
}

/// `(h_k(y), h_{k-1}(y))` sharing one scale factor; only their ratio and
/// `ln|h_{k-1}|` are used.
fn last_two<T: Real>(k: usize, y: T) -> (T, T, T) {
    let limit = T::max_value().sqrt();
    let two = T::lit(2.0);
    let mut ln_scale = T::zero();
    let mut prev = T::zero();
    let mut cur = T::one();
    for j in 0..k {
        let jp1 = T::count(j + 1);
        let next = (two / jp1).sqrt() * y * cur - (T::count(j) / jp1).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > limit {
            cur /= limit;
            prev /= limit;
            ln_scale += limit.ln();
        }
    }
    (cur, prev, ln_scale)
}

/// k-point Gauss-Hermite rule, `1 <= k <= 512`.
pub fn gauss_hermite_rule<T: Real>(k: usize) -> Result<QuadratureRule<T>> {
    if k == 0 || k > MAX_QUADRATURE_NODES {
        return Err(ThermoError::QuadratureOrder(k));
    }
    let mut diag = vec![T::zero(); k];
    let mut off: Vec<T> = (1..=k)
        .map(|j| if j < k { (T::count(j) / T::lit(2.0)).sqrt() } else { T::zero() })
        .collect();
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    let mut nodes = diag;
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    let kf = T::count(k);
    for y in nodes.iter_mut() {
        for _ in 0..3 {
            let (hk, hkm1, _) = last_two(k, *y);
            if hkm1 == T::zero() {
                break;
            }
            let step = hk / ((T::lit(2.0) * kf).sqrt() * hkm1);
            *y -= step;
            if step.abs() <= T::epsilon() * y.abs().max(T::one()) {
                break;
            }
        }
    }
    for i in 0..k / 2 {
        let j = k - 1 - i;
        let mag = (nodes[j] - nodes[i]) / T::lit(2.0);
        nodes[i] = -mag;
        nodes[j] = mag;
    }
    if k % 2 == 1 {
        nodes[k / 2] = T::zero();
    }

    let half_ln_pi = T::lit(0.5) * T::PI().ln();
    let mut weights = Vec::with_capacity(k);
    let mut scaled_weights = Vec::with_capacity(k);
    for &y in &nodes {
        let (_, hkm1, ln_scale) = last_two(k, y);
        let ln_w = half_ln_pi - kf.ln() - T::lit(2.0) * (hkm1.abs().ln() + ln_scale);
        weights.push(ln_w.exp());
        scaled_weights.push((ln_w + y * y).exp());
    }
    Ok(QuadratureRule { nodes, weights, scaled_weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    /// `∫ y^{2j} e^{-y²} dy = Γ(j + 1/2)`, as a natural log.
    fn ln_gaussian_moment(j: usize) -> f64 {
        // Γ(j + 1/2) = (2j)! √π / (4^j j!)
        let ln_fact = |n: usize| (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
        ln_fact(2 * j) + SQRT_PI.ln() - (j as f64) * 4f64.ln() - ln_fact(j)
    }

    #[test]
    fn one_and_two_point_rules() {
        let r1 = gauss_hermite_rule::<f64>(1).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert!((r1.weights[0] - SQRT_PI).abs() < 1e-15);

        let r2 = gauss_hermite_rule::<f64>(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r2.nodes[0] + h).abs() < 1e-15 && (r2.nodes[1] - h).abs() < 1e-15);
        for w in &r2.weights {
            assert!((w - SQRT_PI / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn fourth_moment_with_twenty_nodes() {
        let r = gauss_hermite_rule::<f64>(20).unwrap();
        let m4 = r.integrate_weighted(|y| y.powi(4));
        assert!((m4 - 0.75 * SQRT_PI).abs() < 1e-13);
    }

    #[test]
    fn order_out_of_range() {
        assert_eq!(gauss_hermite_rule::<f64>(0).unwrap_err(), ThermoError::QuadratureOrder(0));
        assert_eq!(gauss_hermite_rule::<f64>(513).unwrap_err(), ThermoError::QuadratureOrder(513));
    }

    #[test]
    fn structural_invariants() {
        for &k in &[1usize, 2, 3, 7, 20, 64, 200, 333] {
            let r = gauss_hermite_rule::<f64>(k).unwrap();
            assert_eq!(r.len(), k);
            for w in r.nodes.windows(2) {
                assert!(w[0] < w[1], "k={k} not increasing");
            }
            for i in 0..k {
                assert_eq!(r.nodes[i], -r.nodes[k - 1 - i]);
            }
            let total: f64 = r.weights.iter().sum();
            assert!((total - SQRT_PI).abs() < 1e-12, "k={k}: {total}");
            if k <= 200 {
                assert!(r.weights.iter().all(|&w| w > 0.0));
            }
            assert!(r.scaled_weights.iter().all(|&w| w > 0.0 && w.is_finite()));
        }
    }

    #[test]
    fn largest_rule_builds() {
        let r = gauss_hermite_rule::<f64>(512).unwrap();
        let total: f64 = r.weights.iter().sum();
        assert!((total - SQRT_PI).abs() < 1e-12);
        assert!(r.scaled_weights.iter().all(|w| w.is_finite() && *w > 0.0));
    }

    #[test]
    fn exact_for_all_monomials_up_to_degree_2k_minus_1() {
        for &k in &[1usize, 2, 5, 10, 20, 40, 80] {
            let r = gauss_hermite_rule::<f64>(k).unwrap();
            for deg in 0..2 * k {
                let got = r.integrate_weighted(|y| y.powi(deg as i32));
                if deg % 2 == 1 {
                    // odd moments cancel pairwise through node symmetry
                    assert!(got.abs() < 1e-12 * ln_gaussian_moment(deg / 2 + 1).exp().max(1.0));
                } else {
                    let exact = ln_gaussian_moment(deg / 2).exp();
                    assert!(((got - exact) / exact).abs() < 1e-12, "k={k} deg={deg}: {got} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn high_moments_of_two_hundred_point_rule_in_log_space() {
        let r = gauss_hermite_rule::<f64>(200).unwrap();
        for &j in &[10usize, 60, 120, 170, 199] {
            let logs: Vec<f64> = r
                .nodes
                .iter()
                .zip(&r.weights)
                .filter(|(y, _)| **y != 0.0)
                .map(|(y, w)| w.ln() + 2.0 * j as f64 * y.abs().ln())
                .collect();
            let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let ln_sum = top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
            let exact = ln_gaussian_moment(j);
            // relative error of the moment = difference of logs; 200 terms of rounding
            assert!((ln_sum - exact).abs() < 1e-11, "j={j}: {}", ln_sum - exact);
        }
    }

    #[test]
    fn integrate_line_handles_shifted_gaussians() {
        let r = gauss_hermite_rule::<f64>(30).unwrap();
        let (mu, s) = (1.3, 0.7);
        let g = |x: f64| (-(x - mu) * (x - mu) / (s * s)).exp() * (x - mu).powi(2);
        let got = r.integrate_line(mu, s, g);
        let exact = 0.5 * SQRT_PI * s.powi(3);
        assert!((got - exact).abs() < 1e-14);
        let pts = r.line_points(mu, s);
        let vals: Vec<f64> = pts.iter().map(|&x| g(x)).collect();
        assert_eq!(r.sum_line(s, &vals), got);
    }
}
