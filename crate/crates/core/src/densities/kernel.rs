//! The double Hermite sum shared by both density forms.
//!
//! `S(X) = Σ_{j,k≤n} c_jk H_{2(2n-j-k)}[X]` with
//! `c_jk = 2^{j+k} j! k! (C_n^j C_n^k)² r^{2(n-j)} (1+r²)^{j+k-2n}`.
//! The Hermite signs alternate inside the oscillatory region and the sum loses
//! roughly one digit per quantum there, so it is evaluated exactly: `X` and `r`
//! are binary fractions and `(1+r²)^{2n} S` is a binary fraction too. Outside the
//! last Hermite zero all terms are positive and a log-space sum is used instead.

use num_bigint::{BigInt, Sign};
use num_traits::{Float, One, ToPrimitive, Zero};

use crate::scalar::Real;
use crate::special_fn::{hermite_log, ln_factorial};

/// Signed log-sum-exp accumulator.
#[derive(Debug, Clone)]
pub(crate) struct SignedLogSum<T> {
    terms: Vec<(T, T)>,
}

impl<T: Real> SignedLogSum<T> {
    pub(crate) fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub(crate) fn push(&mut self, sign: T, ln_abs: T) {
        if sign != T::zero() && ln_abs > T::neg_infinity() {
            self.terms.push((sign, ln_abs));
        }
    }

    /// `(sign, ln|Σ|)`; sign 0 for an empty or exactly cancelling sum.
    pub(crate) fn finish(&self) -> (T, T) {
        let top = self.terms.iter().fold(T::neg_infinity(), |m, &(_, l)| m.max(l));
        if top == T::neg_infinity() {
            return (T::zero(), T::neg_infinity());
        }
        let s = self.terms.iter().fold(T::zero(), |acc, &(sg, l)| acc + sg * (l - top).exp());
        if s == T::zero() {
            return (T::zero(), T::neg_infinity());
        }
        (s.signum(), top + s.abs().ln())
    }
}

/// `ln(j! k! (C_n^j C_n^k)²)`.
pub(crate) fn ln_pair<T: Real>(n: usize, j: usize, k: usize) -> T {
    let ln_c = |r: usize| ln_factorial::<T>(n) - ln_factorial::<T>(r) - ln_factorial::<T>(n - r);
    ln_factorial::<T>(j) + ln_factorial::<T>(k) + (ln_c(j) + ln_c(k)) * T::lit(2.0)
}

/// `(sign, ln|S|)`. `ln_coef(j, k)` is `ln c_jk` written in the caller's form; it
/// drives the log-space path and must agree with `ratio` for the exact one.
pub(crate) fn hermite_double_sum<T: Real>(
    n: usize,
    arg: T,
    ratio: T,
    ln_coef: impl Fn(usize, usize) -> T,
) -> (T, T) {
    let beyond_zeros = arg.abs() > T::count(8 * n + 1).sqrt();
    if !beyond_zeros && arg.is_finite() {
        let (s, l) = exact_double_sum(n, arg.as_f64(), ratio.as_f64());
        return (T::lit(s), T::lit(l));
    }
    log_double_sum(n, arg, ln_coef)
}

pub(crate) fn log_double_sum<T: Real>(n: usize, arg: T, ln_coef: impl Fn(usize, usize) -> T) -> (T, T) {
    let mut acc = SignedLogSum::new();
    for j in 0..=n {
        for k in 0..=n {
            let c = ln_coef(j, k);
            if c == T::neg_infinity() {
                continue;
            }
            let (s, l) = hermite_log(2 * (2 * n - j - k), arg);
            acc.push(s, c + l);
        }
    }
    acc.finish()
}

/// `v = m·2^{-e}` with integer `m` and `e ≥ 0`.
fn binary_fraction(v: f64) -> (BigInt, u64) {
    if v == 0.0 {
        return (BigInt::zero(), 0);
    }
    let (mant, exp, sign) = v.integer_decode();
    let tz = mant.trailing_zeros() as i64;
    let (mant, exp) = (mant >> tz, exp as i64 + tz);
    let m = BigInt::from(mant) * i64::from(sign).signum();
    if exp >= 0 {
        (m << exp as usize, 0)
    } else {
        (m, (-exp) as u64)
    }
}

fn ln_abs_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    let drop = bits.saturating_sub(64);
    let top = (v.magnitude() >> drop as usize).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + drop as f64 * std::f64::consts::LN_2
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one()];
    for i in 1..=n {
        let next = &f[i - 1] * BigInt::from(i);
        f.push(next);
    }
    f
}

/// Exact `S` for binary-fraction `x` and `r`, returned as `(sign, ln|S|)`.
pub(crate) fn exact_double_sum(n: usize, x: f64, r: f64) -> (f64, f64) {
    let (xm, s) = binary_fraction(x);
    let (a, t) = binary_fraction(r.abs());
    let fact = factorials(n);
    let choose = |k: usize| &fact[n] / (&fact[k] * &fact[n - k]);
    let c: Vec<BigInt> = (0..=n).map(choose).collect();
    let pair = |j: usize| &fact[j] * &c[j] * &c[j];

    // Hermite numerators P_k = 2^{sk} H_k(x)
    let top = 4 * n;
    let mut h = Vec::with_capacity(top + 1);
    h.push(BigInt::one());
    h.push(&xm << 1usize);
    for k in 1..top {
        let next = ((&xm * &h[k]) << 1usize) - ((&h[k - 1] * BigInt::from(2 * k)) << (2 * s) as usize);
        h.push(next);
    }

    // a^{2i}·2^{2t(n-i)}, so every j-term in G_m carries the same power of two
    let a2 = &a * &a;
    let mut a_pow = vec![BigInt::one()];
    for i in 1..=n {
        let next = &a_pow[i - 1] * &a2;
        a_pow.push(next);
    }
    let r_big = (BigInt::one() << (2 * t) as usize) + &a2;

    // term_m = G_m R^m P_{4n-2m} · 2^{f_m}, f_m = m - 2tm - 2tn - s(4n-2m)
    let mut terms = Vec::with_capacity(2 * n + 1);
    let mut r_pow = BigInt::one();
    for m in 0..=2 * n {
        let mut g = BigInt::zero();
        for j in m.saturating_sub(n)..=m.min(n) {
            let k = m - j;
            g += (pair(j) * pair(k) * &a_pow[n - j]) << (2 * t * j as u64) as usize;
        }
        if !g.is_zero() {
            let f = m as i64 - (2 * t as i64) * (m as i64 + n as i64) - s as i64 * (4 * n - 2 * m) as i64;
            terms.push((g * &r_pow * &h[4 * n - 2 * m], f));
        }
        r_pow *= &r_big;
    }
    let e_min = terms.iter().map(|t| t.1).min().unwrap_or(0);
    let total: BigInt = terms.into_iter().map(|(v, f)| v << (f - e_min) as usize).sum();
    match total.sign() {
        Sign::NoSign => (0.0, f64::NEG_INFINITY),
        sg => {
            let ln_s = ln_abs_big(&total) + e_min as f64 * std::f64::consts::LN_2 - 2.0 * n as f64 * (r * r).ln_1p();
            (if sg == Sign::Minus { -1.0 } else { 1.0 }, ln_s)
        }
    }
}
