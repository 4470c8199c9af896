//! Position densities with the tilde coordinate integrated out, and position moments.
//!
//! Every density has the form `e^{-X²}·P(X)/scale` with `X` affine in `x`, so a
//! Gauss-Hermite rule centered on the mean and scaled by [`envelope_scale`]
//! integrates polynomial moments of it exactly.

use rayon::prelude::*;

use crate::error::{Result, ThermoError};
use crate::model::{Displacement, OscillatorParams, Squeeze, StateSpec, ThermalParams, TimePoint};
use crate::scalar::Real;
use crate::special_fn::{gauss_hermite_rule, ln_factorial};

mod kernel;

use kernel::{hermite_double_sum, ln_pair};

/// Values in `[-NEGATIVE_TOLERANCE, 0)` (in units of `1/ℓ`) are clamped to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_GRID_POINTS: usize = 801;
pub const DEFAULT_GRID_SIGMAS: f64 = 8.0;

/// Intermediate coefficients of the tilde integral at one `x`.
///
/// The integrand is `exp{-(a₁x̃+a₂)² - (b₁x̃+b₂)²}` times squared Hermite factors;
/// substituting `y = a₁x̃ + a₂` leaves `exp{-y² - (ay+b)²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumIntermediates<T> {
    pub a1: T,
    pub a2: T,
    pub b1: T,
    pub b2: T,
    pub a: T,
    pub b: T,
}

impl<T: Real> SumIntermediates<T> {
    /// `center = α₁ cos ωt + α₂ sin ωt`.
    pub fn new(x: T, center: T, th: &ThermalParams<T>, p: &OscillatorParams<T>) -> Self {
        let inv_len = p.length_scale().recip();
        let (c, s) = (th.cosh_theta(), th.sinh_theta());
        let shift = T::SQRT_2() * center;
        let xi = x * inv_len;
        let (a1, a2) = (inv_len * c, -xi * s - shift);
        let (b1, b2) = (inv_len * s, -xi * c + shift);
        let a = b1 / a1;
        Self { a1, a2, b1, b2, a, b: -a * a2 + b2 }
    }
}

fn ln_norm<T: Real>(n: usize) -> T {
    T::count(n) * T::LN_2() + ln_factorial::<T>(n)
}

fn width_factor<T: Real>(z: &Squeeze<T>, omega_t: T) -> T {
    z.f4() * TimePoint::new(omega_t, z).b().norm()
}

/// Unclamped density in the intermediate `(a, b)` form, with Gaussian width `σ₀ = F₄|B|`.
///
/// `σ₀ = 1` is the displaced number state.
pub fn rho_general_raw<T: Real>(
    x: T,
    alpha: &Displacement<T>,
    sigma0: T,
    n: usize,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
    omega_t: T,
) -> T {
    let si = SumIntermediates::new(x, alpha.center_at(omega_t), th, p);
    let len = p.length_scale();
    let one_a2 = T::one() + si.a * si.a;
    let arg = si.b / (one_a2.sqrt() * sigma0);
    let ln_a = si.a.ln();
    let ln_1a2 = one_a2.ln();
    let (sign, ln_sum) = hermite_double_sum(n, arg, si.a, |j, k| {
        let pow_a = if j == n { T::zero() } else { T::count(2 * (n - j)) * ln_a };
        T::count(j + k) * T::LN_2() + ln_pair::<T>(n, j, k) + pow_a + (T::count(j + k) - T::count(2 * n)) * ln_1a2
    });
    let half = T::lit(0.5);
    let ln_pref = -T::PI().ln() - (len * len * si.a1).ln() - ln_norm::<T>(n) * T::lit(2.0)
        + half * (T::PI().ln() - ln_1a2)
        - sigma0.ln();
    sign * (ln_pref - arg * arg + ln_sum).exp()
}

/// Scaled argument `X = (√tanh(βħω/2)·ξ - √2·center·√(1+sech(βħω/2)))/σ₀`.
fn reduced_argument<T: Real>(x: T, center: T, sigma0: T, th: &ThermalParams<T>, p: &OscillatorParams<T>) -> T {
    let xi = x / p.length_scale();
    (th.tanh_half().sqrt() * xi - T::SQRT_2() * center * (T::one() + th.sech_half()).sqrt()) / sigma0
}

/// Unclamped density in the reduced temperature form, summed in log space.
pub fn rho_reduced_raw<T: Real>(
    x: T,
    alpha: &Displacement<T>,
    sigma0: T,
    n: usize,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
    omega_t: T,
) -> T {
    let arg = reduced_argument(x, alpha.center_at(omega_t), sigma0, th, p);
    let y = th.beta_hw() * T::lit(0.5);
    // ln cosh y - y, finite at y = ∞
    let tail = if y.is_infinite() { -T::LN_2() } else { (-(y + y)).exp().ln_1p() - T::LN_2() };
    // e^{(j-k)y} cosh^{j+k-2n} y equals the general coefficient at a = e^{-y}
    let (sign, ln_sum) = hermite_double_sum(n, arg, th.tanh_theta(), |j, k| {
        let growth = if j == n { T::zero() } else { (T::count(2 * j) - T::count(2 * n)) * y };
        (T::count(2 * (j + k)) - T::count(2 * n)) * T::LN_2()
            + ln_pair::<T>(n, j, k)
            + growth
            + (T::count(j + k) - T::count(2 * n)) * tail
    });
    let len = p.length_scale();
    let ln_pref = -T::lit(0.5) * T::PI().ln() - ln_norm::<T>(n) * T::lit(2.0) + T::lit(0.5) * th.tanh_half().ln()
        - sigma0.ln()
        - len.ln();
    sign * (ln_pref - arg * arg + ln_sum).exp()
}

/// Clamps cancellation noise to zero; `Ok((value, clamped))`.
pub fn clamp_density<T: Real>(x: T, raw: T, p: &OscillatorParams<T>) -> Result<(T, bool)> {
    if raw >= T::zero() {
        return Ok((raw, false));
    }
    if raw * p.length_scale() < -T::lit(NEGATIVE_TOLERANCE) || raw.is_nan() {
        return Err(ThermoError::NegativeDensity { x: x.as_f64(), value: raw.as_f64() });
    }
    Ok((T::zero(), true))
}

/// Thermal vacuum density, a Gaussian of variance `coth(βħω/2)·ħ/2mω`.
pub fn rho_vacuum<T: Real>(x: T, th: &ThermalParams<T>, p: &OscillatorParams<T>) -> T {
    let len = p.length_scale();
    let t = th.tanh_half();
    let xi = x / len;
    (t / T::PI()).sqrt() / len * (-t * xi * xi).exp()
}

/// Thermalized displaced number state density.
pub fn rho_tdn<T: Real>(
    x: T,
    alpha: &Displacement<T>,
    n: usize,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
    omega_t: T,
) -> Result<T> {
    clamp_density(x, rho_reduced_raw(x, alpha, T::one(), n, th, p, omega_t), p).map(|v| v.0)
}

/// Intermediate-form counterpart of [`rho_tdn`].
pub fn rho_tdn_general<T: Real>(
    x: T,
    alpha: &Displacement<T>,
    n: usize,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
    omega_t: T,
) -> Result<T> {
    clamp_density(x, rho_general_raw(x, alpha, T::one(), n, th, p, omega_t), p).map(|v| v.0)
}

/// Thermalized squeezed number state density.
pub fn rho_tsn<T: Real>(
    x: T,
    alpha: &Displacement<T>,
    z: &Squeeze<T>,
    n: usize,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
    omega_t: T,
) -> Result<T> {
    let s0 = width_factor(z, omega_t);
    clamp_density(x, rho_reduced_raw(x, alpha, s0, n, th, p, omega_t), p).map(|v| v.0)
}

/// Intermediate-form counterpart of [`rho_tsn`].
pub fn rho_tsn_general<T: Real>(
    x: T,
    alpha: &Displacement<T>,
    z: &Squeeze<T>,
    n: usize,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
    omega_t: T,
) -> Result<T> {
    let s0 = width_factor(z, omega_t);
    clamp_density(x, rho_general_raw(x, alpha, s0, n, th, p, omega_t), p).map(|v| v.0)
}

/// Unclamped density of any state.
pub fn density_raw<T: Real>(state: &StateSpec<T>, x: T, th: &ThermalParams<T>, p: &OscillatorParams<T>, omega_t: T) -> T {
    match state.canonical() {
        StateSpec::ThermalVacuum => rho_vacuum(x, th, p),
        StateSpec::ThermalizedDisplacedNumber { alpha, n } => rho_reduced_raw(x, &alpha, T::one(), n, th, p, omega_t),
        StateSpec::ThermalizedSqueezedNumber { alpha, z, n } => {
            rho_reduced_raw(x, &alpha, width_factor(&z, omega_t), n, th, p, omega_t)
        }
    }
}

/// Clamped density of any state.
pub fn density<T: Real>(state: &StateSpec<T>, x: T, th: &ThermalParams<T>, p: &OscillatorParams<T>, omega_t: T) -> Result<T> {
    clamp_density(x, density_raw(state, x, th, p, omega_t), p).map(|v| v.0)
}

/// `⟨x⟩ = √coth(βħω/4)·√(2ħ/mω)·(α₁ cos ωt + α₂ sin ωt)`.
pub fn mean_x<T: Real>(alpha: &Displacement<T>, th: &ThermalParams<T>, p: &OscillatorParams<T>, omega_t: T) -> T {
    th.coth_quarter().sqrt() * T::SQRT_2() * p.length_scale() * alpha.center_at(omega_t)
}

/// `(Δₙx)² = coth(βħω/2)(2n+1)·ħF₄²|B|²/2mω`.
pub fn var_x<T: Real>(z: &Squeeze<T>, n: usize, th: &ThermalParams<T>, p: &OscillatorParams<T>, omega_t: T) -> T {
    let len = p.length_scale();
    let s0 = width_factor(z, omega_t);
    th.coth_half() * T::count(2 * n + 1) * len * len * s0 * s0 * T::lit(0.5)
}

/// Mean and variance of any state.
pub fn moments<T: Real>(state: &StateSpec<T>, th: &ThermalParams<T>, p: &OscillatorParams<T>, omega_t: T) -> (T, T) {
    let alpha = state.alpha();
    let z = state.squeeze();
    (mean_x(&alpha, th, p, omega_t), var_x(&z, state.n(), th, p, omega_t))
}

/// Length over which the Gaussian envelope `e^{-X²}` decays by `e`.
pub fn envelope_scale<T: Real>(state: &StateSpec<T>, th: &ThermalParams<T>, p: &OscillatorParams<T>, omega_t: T) -> T {
    p.length_scale() * width_factor(&state.squeeze(), omega_t) / th.tanh_half().sqrt()
}

/// The `n = 0` density as the normal law with the closed-form mean and variance.
pub fn rho_tsn_n0_gaussian<T: Real>(x: T, mean: T, var: T) -> T {
    let d = x - mean;
    (-(d * d) / (var + var)).exp() / (T::lit(2.0) * T::PI() * var).sqrt()
}

/// The `n = 1` density as a quartic in `w = (x-⟨x⟩)²/2(Δ₀x)²` times `e^{-w}`;
/// `var0` is the `n = 0` variance.
pub fn rho_tsn_n1_quartic<T: Real>(x: T, mean: T, var0: T, th: &ThermalParams<T>) -> T {
    let d = x - mean;
    let w = d * d / (var0 + var0);
    let sech = th.sech_half();
    let (half, three_halves) = (T::lit(0.5), T::lit(1.5));
    let poly = half * sech * sech * ((w - three_halves) * (w - three_halves) - three_halves) + w;
    (T::lit(2.0) / (T::PI() * var0)).sqrt() * (-w).exp() * poly
}

/// Integral, mean and variance of the density by Gauss-Hermite quadrature.
///
/// Exact up to rounding while `2k - 1 ≥ 4n + 2`.
pub fn quadrature_moments<T: Real>(
    state: &StateSpec<T>,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
    omega_t: T,
    nodes: usize,
) -> Result<(T, T, T)> {
    let rule = gauss_hermite_rule::<T>(nodes)?;
    let (mean, _) = moments(state, th, p, omega_t);
    let scale = envelope_scale(state, th, p, omega_t);
    let pts = rule.line_points(mean, scale);
    let vals: Vec<T> = pts.iter().map(|&x| density_raw(state, x, th, p, omega_t)).collect();
    let norm = rule.sum_line(scale, &vals);
    let first: Vec<T> = pts.iter().zip(&vals).map(|(&x, &v)| (x - mean) * v).collect();
    let shift = rule.sum_line(scale, &first) / norm;
    let second: Vec<T> = pts.iter().zip(&vals).map(|(&x, &v)| (x - mean - shift) * (x - mean - shift) * v).collect();
    Ok((norm, mean + shift, rule.sum_line(scale, &second) / norm))
}

/// Where to sample a density profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec<T> {
    /// `⟨x⟩ ± sigmas·Δx` with `count` points.
    Auto { sigmas: T, count: usize },
    Range { min: T, max: T, count: usize },
}

impl<T: Real> Default for GridSpec<T> {
    fn default() -> Self {
        Self::Auto { sigmas: T::lit(DEFAULT_GRID_SIGMAS), count: DEFAULT_GRID_POINTS }
    }
}

impl<T: Real> GridSpec<T> {
    pub fn points(&self, state: &StateSpec<T>, th: &ThermalParams<T>, p: &OscillatorParams<T>, omega_t: T) -> Result<Vec<T>> {
        let (min, max, count) = match *self {
            Self::Range { min, max, count } => (min, max, count),
            Self::Auto { sigmas, count } => {
                let (m, v) = moments(state, th, p, omega_t);
                let half = sigmas * v.sqrt();
                (m - half, m + half, count)
            }
        };
        if count < 2 || !min.is_finite() || !max.is_finite() || min >= max {
            return Err(ThermoError::Domain(format!("grid needs min < max and at least 2 points, got {min}:{max}:{count}")));
        }
        let step = (max - min) / T::count(count - 1);
        Ok((0..count).map(|i| if i + 1 == count { max } else { min + step * T::count(i) }).collect())
    }
}

/// A sampled density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile<T> {
    pub grid: Vec<T>,
    pub values: Vec<T>,
    pub state: StateSpec<T>,
    pub beta_hw: T,
    pub omega_t: T,
    /// Values in the tolerated negative band that were set to zero.
    pub clamped: usize,
}

impl<T: Real> DensityProfile<T> {
    /// Samples the density; grid points are evaluated in parallel.
    pub fn build(
        state: &StateSpec<T>,
        th: &ThermalParams<T>,
        p: &OscillatorParams<T>,
        omega_t: T,
        grid: &GridSpec<T>,
    ) -> Result<Self> {
        let xs = grid.points(state, th, p, omega_t)?;
        let evaluated: Vec<(T, bool)> = xs
            .par_iter()
            .map(|&x| clamp_density(x, density_raw(state, x, th, p, omega_t), p))
            .collect::<Result<_>>()?;
        let clamped = evaluated.iter().filter(|e| e.1).count();
        Ok(Self {
            grid: xs,
            values: evaluated.into_iter().map(|e| e.0).collect(),
            state: *state,
            beta_hw: th.beta_hw(),
            omega_t,
            clamped,
        })
    }

    pub fn trapezoid_integral(&self) -> T {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .fold(T::zero(), |acc, (x, v)| acc + (x[1] - x[0]) * (v[0] + v[1]) * T::lit(0.5))
    }
}
