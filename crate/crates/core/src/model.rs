//! Parameter records for the oscillator, the heat bath, and the
//! displacement/squeezing that define a state. Constructors enforce every
//! invariant; the records are immutable afterwards.

use crate::error::{Result, ThermoError};
use crate::scalar::{cplx, Cplx, Real};

/// Smallest accepted `βħω`. Below it `θ` grows without bound and the
/// `coth` factors of the moments blow up.
pub const BETA_HW_FLOOR: f64 = 1e-6;

/// Default cap on the number-state index `n`.
pub const DEFAULT_MAX_N: usize = 64;

/// Series cutoff for the removable singularity `sinh(r)/r` at `r = 0`.
const SINHC_SERIES_BELOW: f64 = 1e-4;

fn finite<T: Real>(v: T, what: &str) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ThermoError::Domain(format!("{what} must be finite, got {v}")))
    }
}

/// Mass, angular frequency and ħ of the oscillator. All default to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams<T> {
    mass: T,
    omega: T,
    hbar: T,
}

impl<T: Real> OscillatorParams<T> {
    pub fn new(mass: T, omega: T, hbar: T) -> Result<Self> {
        for (v, name) in [(mass, "mass"), (omega, "angular frequency"), (hbar, "hbar")] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(ThermoError::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { mass, omega, hbar })
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    /// Oscillator length `√(ħ/mω)`; `ξ = x / length_scale` is the dimensionless coordinate.
    pub fn length_scale(&self) -> T {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }
}

impl<T: Real> Default for OscillatorParams<T> {
    fn default() -> Self {
        Self { mass: T::one(), omega: T::one(), hbar: T::one() }
    }
}

/// Dimensionless inverse temperature `βħω` and the thermal angle with `tanh θ = e^{-βħω/2}`.
///
/// `βħω = +inf` is the exact zero-temperature state (`θ = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParams<T> {
    beta_hw: T,
    theta: T,
}

impl<T: Real> ThermalParams<T> {
    pub fn new(beta_hw: T) -> Result<Self> {
        if beta_hw.is_nan() || beta_hw < T::lit(BETA_HW_FLOOR) {
            return Err(ThermoError::Temperature { beta_hw: beta_hw.as_f64(), floor: BETA_HW_FLOOR });
        }
        if beta_hw.is_infinite() {
            return Ok(Self::zero_temperature());
        }
        // artanh(q) = ½ ln((1+q)/(1-q)) with 1-q from expm1 for small βħω
        let half = beta_hw / T::lit(2.0);
        let q = (-half).exp();
        let one_minus_q = -(-half).exp_m1();
        let theta = T::lit(0.5) * ((T::one() + q) / one_minus_q).ln();
        Ok(Self { beta_hw, theta })
    }

    pub fn zero_temperature() -> Self {
        Self { beta_hw: T::infinity(), theta: T::zero() }
    }

    pub fn beta_hw(&self) -> T {
        self.beta_hw
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta_hw.is_infinite()
    }

    /// `tanh θ = e^{-βħω/2}`.
    pub fn tanh_theta(&self) -> T {
        (-self.beta_hw / T::lit(2.0)).exp()
    }

    pub fn cosh_theta(&self) -> T {
        self.theta.cosh()
    }

    pub fn sinh_theta(&self) -> T {
        self.theta.sinh()
    }

    /// `tanh(βħω/2)`.
    pub fn tanh_half(&self) -> T {
        (self.beta_hw / T::lit(2.0)).tanh()
    }

    /// `coth(βħω/2) = cosh 2θ`.
    pub fn coth_half(&self) -> T {
        self.tanh_half().recip()
    }

    /// `coth(βħω/4) = e^{2θ}`.
    pub fn coth_quarter(&self) -> T {
        (self.beta_hw / T::lit(4.0)).tanh().recip()
    }

    /// `sech(βħω/2)`; zero at zero temperature.
    pub fn sech_half(&self) -> T {
        if self.is_zero_temperature() {
            return T::zero();
        }
        (self.beta_hw / T::lit(2.0)).cosh().recip()
    }

    /// Bose occupation `1/(e^{βħω} - 1)`.
    pub fn mean_occupation(&self) -> T {
        if self.is_zero_temperature() {
            return T::zero();
        }
        self.beta_hw.exp_m1().recip()
    }
}

/// `thermal_params_from`: validates `βħω` and derives `θ = artanh(e^{-βħω/2})`.
pub fn thermal_params_from<T: Real>(beta_hw: T) -> Result<ThermalParams<T>> {
    ThermalParams::new(beta_hw)
}

/// Displacement `α = α₁ + iα₂`. The tilde partner is always `α*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement<T> {
    alpha1: T,
    alpha2: T,
}

impl<T: Real> Displacement<T> {
    pub fn new(alpha1: T, alpha2: T) -> Result<Self> {
        Ok(Self { alpha1: finite(alpha1, "α₁")?, alpha2: finite(alpha2, "α₂")? })
    }

    pub fn zero() -> Self {
        Self { alpha1: T::zero(), alpha2: T::zero() }
    }

    pub fn alpha1(&self) -> T {
        self.alpha1
    }

    pub fn alpha2(&self) -> T {
        self.alpha2
    }

    pub fn as_complex(&self) -> Cplx<T> {
        cplx(self.alpha1, self.alpha2)
    }

    pub fn norm_sqr(&self) -> T {
        self.alpha1 * self.alpha1 + self.alpha2 * self.alpha2
    }

    /// `α₁ cos ωt + α₂ sin ωt = Re(α e^{-iωt})`, the time-shifted real part.
    pub fn center_at(&self, omega_t: T) -> T {
        self.alpha1 * omega_t.cos() + self.alpha2 * omega_t.sin()
    }

    /// `α e^{-iωt}`: the displacement a freely evolving coherent amplitude reaches at `ωt`.
    pub fn evolved(&self, omega_t: T) -> Self {
        let a = self.as_complex() * Cplx::from_polar(T::one(), -omega_t);
        Self { alpha1: a.re, alpha2: a.im }
    }
}

/// Squeeze parameter `z = z₁ + iz₂ = r e^{iφ}` with the derived `S`, `κ` and `F₁…F₄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeeze<T> {
    z1: T,
    z2: T,
    r: T,
    phi: T,
    s: T,
    kappa: T,
    f1: Cplx<T>,
    f2: Cplx<T>,
    f3: Cplx<T>,
    f4: T,
}

/// `sinh(r)/r`, by series near zero.
fn sinhc<T: Real>(r: T) -> T {
    if r < T::lit(SINHC_SERIES_BELOW) {
        let r2 = r * r;
        T::one() + r2 / T::lit(6.0) + r2 * r2 / T::lit(120.0)
    } else {
        r.sinh() / r
    }
}

impl<T: Real> Squeeze<T> {
    pub fn new(z1: T, z2: T) -> Result<Self> {
        let z1 = finite(z1, "z₁")?;
        let z2 = finite(z2, "z₂")?;
        let r = z1.hypot(z2);
        let phi = z2.atan2(z1);
        let sc = sinhc(r);
        let s = r.cosh() + z1 * sc;
        let two = T::lit(2.0);
        let kappa = z2 * sc / (two * s);
        let one = Cplx::new(T::one(), T::zero());
        let two_i_kappa = cplx(T::zero(), two * kappa);
        let f1 = (one + two_i_kappa) * s;
        let f2 = ((one + two_i_kappa) * (s * s)).inv() - two_i_kappa;
        let f3 = (one - two_i_kappa) / (one + two_i_kappa);
        let f4 = s * (T::one() + T::lit(4.0) * kappa * kappa).sqrt();
        Ok(Self { z1, z2, r, phi, s, kappa, f1, f2, f3, f4 })
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero()).expect("zero squeeze is valid")
    }

    pub fn z1(&self) -> T {
        self.z1
    }
    pub fn z2(&self) -> T {
        self.z2
    }
    pub fn as_complex(&self) -> Cplx<T> {
        cplx(self.z1, self.z2)
    }
    pub fn r(&self) -> T {
        self.r
    }
    pub fn phi(&self) -> T {
        self.phi
    }
    pub fn s(&self) -> T {
        self.s
    }
    pub fn kappa(&self) -> T {
        self.kappa
    }
    pub fn f1(&self) -> Cplx<T> {
        self.f1
    }
    pub fn f2(&self) -> Cplx<T> {
        self.f2
    }
    pub fn f3(&self) -> Cplx<T> {
        self.f3
    }
    pub fn f4(&self) -> T {
        self.f4
    }

    pub fn is_zero(&self) -> bool {
        self.z1 == T::zero() && self.z2 == T::zero()
    }

    /// `z e^{-2iωt}`: the squeeze a freely evolving squeezed state reaches at `ωt`.
    pub fn evolved(&self, omega_t: T) -> Self {
        let z = self.as_complex() * Cplx::from_polar(T::one(), -(omega_t + omega_t));
        Self::new(z.re, z.im).expect("rotation keeps z finite")
    }

    #[cfg(test)]
    pub(crate) fn with_f2(mut self, f2: Cplx<T>) -> Self {
        self.f2 = f2;
        self
    }
}

/// `squeeze_from`: all derived squeeze quantities from `z₁, z₂`.
pub fn squeeze_from<T: Real>(z1: T, z2: T) -> Result<Squeeze<T>> {
    Squeeze::new(z1, z2)
}

/// Phase `ωt` with `A = cos ωt + i sin ωt` and `B = cos ωt + i F₂ sin ωt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePoint<T> {
    omega_t: T,
    a: Cplx<T>,
    b: Cplx<T>,
}

impl<T: Real> TimePoint<T> {
    pub fn new(omega_t: T, squeeze: &Squeeze<T>) -> Self {
        let (sin, cos) = omega_t.sin_cos();
        Self {
            omega_t,
            a: cplx(cos, sin),
            b: cplx(cos, T::zero()) + cplx(T::zero(), sin) * squeeze.f2(),
        }
    }

    pub fn omega_t(&self) -> T {
        self.omega_t
    }
    pub fn a(&self) -> Cplx<T> {
        self.a
    }
    pub fn b(&self) -> Cplx<T> {
        self.b
    }
}

/// Which thermalized state is being described.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec<T> {
    ThermalVacuum,
    ThermalizedDisplacedNumber { alpha: Displacement<T>, n: usize },
    ThermalizedSqueezedNumber { alpha: Displacement<T>, z: Squeeze<T>, n: usize },
}

impl<T: Real> StateSpec<T> {
    pub fn displaced(alpha: Displacement<T>, n: usize) -> Self {
        Self::ThermalizedDisplacedNumber { alpha, n }
    }

    pub fn squeezed(alpha: Displacement<T>, z: Squeeze<T>, n: usize) -> Self {
        Self::ThermalizedSqueezedNumber { alpha, z, n }
    }

    pub fn n(&self) -> usize {
        match *self {
            Self::ThermalVacuum => 0,
            Self::ThermalizedDisplacedNumber { n, .. } | Self::ThermalizedSqueezedNumber { n, .. } => n,
        }
    }

    pub fn alpha(&self) -> Displacement<T> {
        match *self {
            Self::ThermalVacuum => Displacement::zero(),
            Self::ThermalizedDisplacedNumber { alpha, .. } | Self::ThermalizedSqueezedNumber { alpha, .. } => alpha,
        }
    }

    pub fn squeeze(&self) -> Squeeze<T> {
        match *self {
            Self::ThermalizedSqueezedNumber { z, .. } => z,
            _ => Squeeze::zero(),
        }
    }

    /// The simplest variant describing the same state: zero squeeze drops to the
    /// displaced family, and `n = 0` with no displacement to the thermal vacuum.
    pub fn canonical(&self) -> Self {
        match *self {
            Self::ThermalizedSqueezedNumber { alpha, z, n } if z.is_zero() => Self::displaced(alpha, n).canonical(),
            Self::ThermalizedDisplacedNumber { alpha, n: 0 } if alpha.norm_sqr() == T::zero() => Self::ThermalVacuum,
            s => s,
        }
    }

    /// Rejects `n` above `cap`.
    pub fn validate(&self, cap: usize) -> Result<()> {
        let n = self.n();
        if n > cap {
            return Err(ThermoError::NumberCap { n, cap });
        }
        Ok(())
    }
}

/// Thermal coordinates `x_β = x cosh θ - x̃ sinh θ`, `x̃_β = x̃ cosh θ - x sinh θ`.
pub fn thermal_coords<T: Real>(x: T, x_tilde: T, theta: T) -> (T, T) {
    let (c, s) = (theta.cosh(), theta.sinh());
    (x * c - x_tilde * s, x_tilde * c - x * s)
}
