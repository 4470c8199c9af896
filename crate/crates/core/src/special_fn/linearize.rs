use std::collections::BTreeMap;

use crate::scalar::Real;

use super::combinatorics::{binomial, ln_factorial};
use super::hermite::hermite_poly_unchecked;

/// `Σ_d c_d H_d(x)`; a missing degree has coefficient zero.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion<T> {
    pub terms: BTreeMap<usize, T>,
}

impl<T: Real> HermiteExpansion<T> {
    pub fn coefficient(&self, degree: usize) -> T {
        self.terms.get(&degree).copied().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: T) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, (&d, &c)| acc + c * hermite_poly_unchecked(d, x))
    }
}

/// Linearization `H_m H_n = Σ_{r=0}^{min(m,n)} 2^r r! C(m,r) C(n,r) H_{m+n-2r}`.
pub fn hermite_product_linearize<T: Real>(m: usize, n: usize) -> HermiteExpansion<T> {
    let terms = (0..=m.min(n))
        .map(|r| {
            let coeff = (T::count(r) * T::LN_2() + ln_factorial::<T>(r)).exp()
                * binomial::<T>(m, r).expect("r <= m")
                * binomial::<T>(n, r).expect("r <= n");
            // small coefficients are integers; snap away the exp/ln round trip
            let coeff = if coeff < T::lit(9.0e15) { coeff.round() } else { coeff };
            (m + n - 2 * r, coeff)
        })
        .collect();
    HermiteExpansion { terms }
}
