//! Closed-form coordinate wavefunctions.
//!
//! Single-mode amplitudes `⟨x|α,n⟩` and `⟨x|α,z,n⟩` serve the zero-temperature
//! reduction checks. The doubled amplitudes `⟨x̃,x|…⟩` are written in thermal
//! coordinates `(x_β, x̃_β)`, at `t = 0` and at a general phase `ωt`.
//!
//! All evaluators assemble `sign · exp(ln prefactor + exponent + Σ ln|H|)` so a
//! large Hermite factor and a tiny Gaussian never meet in linear scale.
//! Inputs are physical; internally everything runs in `ξ = x √(mω/ħ)`.

use crate::model::{thermal_coords, Displacement, OscillatorParams, Squeeze, StateSpec, ThermalParams, TimePoint};
use crate::scalar::{cplx, real, Cplx, Real};
use crate::special_fn::{hermite_log, ln_factorial};

/// One amplitude `⟨x̃,x|ψ(t)⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionSample<T> {
    pub value: Cplx<T>,
    pub at: (T, T),
    pub omega_t: T,
}

fn sqrt2<T: Real>() -> T {
    T::SQRT_2()
}

/// `ln(2ⁿ n!)`.
fn ln_norm<T: Real>(n: usize) -> T {
    T::count(n) * T::LN_2() + ln_factorial::<T>(n)
}

fn assemble<T: Real>(ln_prefactor: T, exponent: Cplx<T>, hermite: &[(T, T)]) -> Cplx<T> {
    let mut sign = T::one();
    let mut ln_h = T::zero();
    for &(s, l) in hermite {
        if s == T::zero() {
            return Cplx::new(T::zero(), T::zero());
        }
        sign *= s;
        ln_h += l;
    }
    (exponent + real(ln_prefactor + ln_h)).exp() * sign
}

fn hermite_complex_log<T: Real>(n: usize, arg: T) -> (T, T) {
    hermite_log(n, arg)
}

/// `⟨x|α,n⟩ = D(α)|n⟩` in the coordinate representation.
pub fn psi_displaced_number<T: Real>(x: T, alpha: &Displacement<T>, n: usize, p: &OscillatorParams<T>) -> Cplx<T> {
    let len = p.length_scale();
    let xi = x / len;
    let (a1, a2) = (alpha.alpha1(), alpha.alpha2());
    let y = xi - sqrt2::<T>() * a1;
    let ln_pref = -T::lit(0.25) * T::PI().ln() - T::lit(0.5) * len.ln() - T::lit(0.5) * ln_norm::<T>(n);
    let exponent = cplx(-T::lit(0.5) * y * y, sqrt2::<T>() * a2 * xi - a1 * a2);
    assemble(ln_pref, exponent, &[hermite_complex_log(n, y)])
}

/// `⟨x|α,z,n⟩ = D(α)S(z)|n⟩`, principal branches for `√F₁` and `√F₃`.
///
/// Only densities are branch independent; the global phase follows the branch choice.
pub fn psi_squeezed_number<T: Real>(
    x: T,
    alpha: &Displacement<T>,
    z: &Squeeze<T>,
    n: usize,
    p: &OscillatorParams<T>,
) -> Cplx<T> {
    let len = p.length_scale();
    let xi = x / len;
    let (a1, a2) = (alpha.alpha1(), alpha.alpha2());
    let y = xi - sqrt2::<T>() * a1;
    let half = T::lit(0.5);
    let ln_pref = -T::lit(0.25) * T::PI().ln() - half * len.ln() - half * ln_norm::<T>(n);
    let branch = z.f3().ln() * (half * T::count(n)) - z.f1().ln() * half;
    let exponent = branch - z.f2() * (half * y * y) + cplx(T::zero(), sqrt2::<T>() * a2 * xi - a1 * a2);
    assemble(ln_pref, exponent, &[hermite_complex_log(n, y / z.f4())])
}

/// Thermal vacuum `(mω/πħ)^{1/2} exp{-(mω/2ħ)(x_β² + x̃_β²)}`.
pub fn psi_thermal_vacuum<T: Real>(x: T, x_tilde: T, th: &ThermalParams<T>, p: &OscillatorParams<T>) -> T {
    let len = p.length_scale();
    let (xb, xtb) = thermal_coords(x / len, x_tilde / len, th.theta());
    (-T::lit(0.5) * (xb * xb + xtb * xtb)).exp() / (T::PI().sqrt() * len)
}

struct Doubled<T> {
    xb: T,
    xtb: T,
    ln_pref: T,
}

fn doubled<T: Real>(x: T, x_tilde: T, th: &ThermalParams<T>, p: &OscillatorParams<T>, n: usize) -> Doubled<T> {
    let len = p.length_scale();
    let (xb, xtb) = thermal_coords(x / len, x_tilde / len, th.theta());
    let ln_pref = -T::lit(0.5) * T::PI().ln() - len.ln() - ln_norm::<T>(n);
    Doubled { xb, xtb, ln_pref }
}

/// Thermalized displaced number state at `t = 0`, written in thermal coordinates.
pub fn psi_tdn_t0<T: Real>(
    x: T,
    x_tilde: T,
    alpha: &Displacement<T>,
    n: usize,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
) -> Cplx<T> {
    let d = doubled(x, x_tilde, th, p, n);
    let s2 = sqrt2::<T>();
    let shift = s2 * alpha.alpha1();
    let (u, v) = (d.xb - shift, d.xtb - shift);
    let exponent = cplx(-T::lit(0.5) * (u * u + v * v), s2 * alpha.alpha2() * (d.xb - d.xtb));
    assemble(d.ln_pref, exponent, &[hermite_complex_log(n, u), hermite_complex_log(n, v)])
}

/// Thermalized displaced number state at phase `ωt`.
pub fn psi_tdn<T: Real>(
    x: T,
    x_tilde: T,
    alpha: &Displacement<T>,
    n: usize,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
    omega_t: T,
) -> Cplx<T> {
    let d = doubled(x, x_tilde, th, p, n);
    let s2 = sqrt2::<T>();
    let tp = TimePoint::new(omega_t, &Squeeze::zero());
    let (a, (_, cos)) = (tp.a(), omega_t.sin_cos());
    let al = alpha.as_complex();
    let al_c = al.conj();
    let a1 = alpha.alpha1();
    let constant = (al * al / a + al_c * al_c / a.conj()) * cos - real(T::lit(2.0) * a1 * a1);
    let u = real(d.xb) - al / a * s2;
    let v = real(d.xtb) - al_c / a.conj() * s2;
    let exponent = constant - (u * u + v * v) * T::lit(0.5);
    let center = s2 * alpha.center_at(omega_t);
    assemble(
        d.ln_pref,
        exponent,
        &[hermite_complex_log(n, d.xb - center), hermite_complex_log(n, d.xtb - center)],
    )
}

/// Thermalized squeezed number state at `t = 0`, written in thermal coordinates.
pub fn psi_tsn_t0<T: Real>(
    x: T,
    x_tilde: T,
    alpha: &Displacement<T>,
    z: &Squeeze<T>,
    n: usize,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
) -> Cplx<T> {
    let d = doubled(x, x_tilde, th, p, n);
    let s2 = sqrt2::<T>();
    let ln_pref = d.ln_pref + T::count(n) * z.f3().norm().ln() - z.f1().norm().ln();
    let shift = s2 * alpha.alpha1();
    let (u, v) = (d.xb - shift, d.xtb - shift);
    let half = T::lit(0.5);
    let exponent = -(z.f2() * (u * u) + z.f2().conj() * (v * v)) * half
        + cplx(T::zero(), s2 * alpha.alpha2() * (d.xb - d.xtb));
    assemble(
        ln_pref,
        exponent,
        &[hermite_complex_log(n, u / z.f4()), hermite_complex_log(n, v / z.f4())],
    )
}

/// Thermalized squeezed number state at phase `ωt`.
///
/// Smooth in `ωt`; the `tan ωt` of the intermediate propagator never appears.
#[allow(clippy::too_many_arguments)]
pub fn psi_tsn<T: Real>(
    x: T,
    x_tilde: T,
    alpha: &Displacement<T>,
    z: &Squeeze<T>,
    n: usize,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
    omega_t: T,
) -> Cplx<T> {
    let d = doubled(x, x_tilde, th, p, n);
    let s2 = sqrt2::<T>();
    let tp = TimePoint::new(omega_t, z);
    let b = tp.b();
    let bc = b.conj();
    let (sin, cos) = omega_t.sin_cos();
    let (a1, a2) = (alpha.alpha1(), alpha.alpha2());
    let f2 = z.f2();
    let f2c = f2.conj();
    let i = cplx(T::zero(), T::one());
    let two = T::lit(2.0);
    let half = T::lit(0.5);

    let ln_pref = d.ln_pref + T::count(n) * z.f3().norm().ln() - z.f1().norm().ln() - b.norm().ln();
    let e1 = -(f2 * (cos * a1 * a1) + f2 * (two * sin * a1 * a2) + i * (sin * a2 * a2)) / b;
    let e2 = -(f2c * (cos * a1 * a1) + f2c * (two * sin * a1 * a2) - i * (sin * a2 * a2)) / bc;
    // 2√(mω/2ħ) x_β = √2 ξ_β
    let e3 = -(f2 * cos + i * sin) / b * (half * d.xb * d.xb) + (f2 * a1 + i * a2) / b * (s2 * d.xb);
    let e4 = -(f2c * cos - i * sin) / bc * (half * d.xtb * d.xtb) + (f2c * a1 - i * a2) / bc * (s2 * d.xtb);

    let width = z.f4() * b.norm();
    let center = s2 * (cos * a1 + sin * a2);
    assemble(
        ln_pref,
        e1 + e2 + e3 + e4,
        &[
            hermite_complex_log(n, (d.xb - center) / width),
            hermite_complex_log(n, (d.xtb - center) / width),
        ],
    )
}

/// Amplitude of any [`StateSpec`] at `(x, x̃)` and phase `ωt`.
pub fn wavefunction<T: Real>(
    state: &StateSpec<T>,
    x: T,
    x_tilde: T,
    th: &ThermalParams<T>,
    p: &OscillatorParams<T>,
    omega_t: T,
) -> WavefunctionSample<T> {
    let value = match state {
        StateSpec::ThermalVacuum => real(psi_thermal_vacuum(x, x_tilde, th, p)),
        StateSpec::ThermalizedDisplacedNumber { alpha, n } => psi_tdn(x, x_tilde, alpha, *n, th, p, omega_t),
        StateSpec::ThermalizedSqueezedNumber { alpha, z, n } => psi_tsn(x, x_tilde, alpha, z, *n, th, p, omega_t),
    };
    WavefunctionSample { value, at: (x, x_tilde), omega_t }
}

/// `|⟨x|α,z,n⟩|²` written through its center `√(2ħ/mω)·center` and width factor `F₄`.
///
/// With `center = α₁ cos ωt + α₂ sin ωt` and `width = F₄|B|` this is the
/// zero-temperature density at phase `ωt`.
pub fn single_mode_density<T: Real>(x: T, center: T, width: T, n: usize, p: &OscillatorParams<T>) -> T {
    let len = p.length_scale();
    let w = (x / len - sqrt2::<T>() * center) / width;
    let (s, l) = hermite_log(n, w);
    if s == T::zero() {
        return T::zero();
    }
    let ln_v = -w * w + l + l - T::lit(0.5) * T::PI().ln() - ln_norm::<T>(n) - width.ln() - len.ln();
    ln_v.exp()
}
