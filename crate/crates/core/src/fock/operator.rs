//! Banded complex matrices on a truncated number basis and the action of their exponential.

use std::collections::BTreeMap;

use crate::error::{Result, ThermoError};
use crate::scalar::{Cplx, Real};

/// Taylor terms allowed per scaling step before giving up.
pub const MAX_TAYLOR_TERMS: usize = 120;

// largest ‖hM‖ per scaling step
const STEP_NORM: f64 = 4.0;

/// Square matrix stored by diagonals; offset `d` holds the entries `(i, i+d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<T> {
    dim: usize,
    bands: BTreeMap<isize, Vec<Cplx<T>>>,
}

fn band_len(dim: usize, d: isize) -> usize {
    dim.saturating_sub(d.unsigned_abs())
}

fn first_row(d: isize) -> usize {
    if d < 0 {
        d.unsigned_abs()
    } else {
        0
    }
}

impl<T: Real> OperatorMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, bands: BTreeMap::new() }
    }

    /// Builds from `(offset, diagonal)` pairs; repeated offsets are summed.
    pub fn from_bands(dim: usize, bands: impl IntoIterator<Item = (isize, Vec<Cplx<T>>)>) -> Result<Self> {
        let mut m = Self::zeros(dim);
        for (d, v) in bands {
            if v.len() != band_len(dim, d) || v.is_empty() {
                return Err(ThermoError::Domain(format!("band {d} of a {dim}x{dim} matrix cannot have {} entries", v.len())));
            }
            m.add_band(d, v);
        }
        Ok(m)
    }

    pub fn diagonal(values: Vec<Cplx<T>>) -> Self {
        let dim = values.len();
        let mut m = Self::zeros(dim);
        m.add_band(0, values);
        m
    }

    fn add_band(&mut self, d: isize, v: Vec<Cplx<T>>) {
        match self.bands.get_mut(&d) {
            Some(b) => b.iter_mut().zip(v).for_each(|(x, y)| *x += y),
            None => {
                self.bands.insert(d, v);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offsets(&self) -> Vec<isize> {
        self.bands.keys().copied().collect()
    }

    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        let d = j as isize - i as isize;
        match self.bands.get(&d) {
            Some(b) if i < self.dim && j < self.dim => b[i - first_row(d)],
            _ => Cplx::new(T::zero(), T::zero()),
        }
    }

    pub fn apply(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let mut out = vec![Cplx::new(T::zero(), T::zero()); self.dim];
        for (&d, b) in &self.bands {
            let r0 = first_row(d);
            for (p, &e) in b.iter().enumerate() {
                let i = r0 + p;
                out[i] += e * v[(i as isize + d) as usize];
            }
        }
        out
    }

    pub fn scale(&self, c: Cplx<T>) -> Self {
        let bands = self.bands.iter().map(|(&d, b)| (d, b.iter().map(|&e| e * c).collect())).collect();
        Self { dim: self.dim, bands }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (&d, b) in &other.bands {
            m.add_band(d, b.clone());
        }
        m
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(Cplx::new(-T::one(), T::zero())))
    }

    /// Matrix product; band offsets add.
    pub fn times(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.dim);
        for (&d1, b1) in &self.bands {
            for (&d2, b2) in &other.bands {
                let d = d1 + d2;
                if d.unsigned_abs() >= self.dim {
                    continue;
                }
                let mut band = vec![Cplx::new(T::zero(), T::zero()); band_len(self.dim, d)];
                for (p, slot) in band.iter_mut().enumerate() {
                    let i = first_row(d) + p;
                    let k = i as isize + d1;
                    if k < 0 || k as usize >= self.dim {
                        continue;
                    }
                    let k = k as usize;
                    if (k as isize + d2) < 0 || (k as isize + d2) as usize >= self.dim {
                        continue;
                    }
                    *slot = b1[i - first_row(d1)] * b2[k - first_row(d2)];
                }
                m.add_band(d, band);
            }
        }
        m
    }

    /// Upper bound on the 1-norm: sum over bands of the largest entry magnitude.
    pub fn norm_bound(&self) -> T {
        self.bands
            .values()
            .map(|b| b.iter().fold(T::zero(), |m, e| m.max(e.norm())))
            .fold(T::zero(), |a, b| a + b)
    }
}

/// `(a, a†)` on the basis `|0⟩…|N⟩`.
pub fn ladder_matrices<T: Real>(cutoff: usize) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>)> {
    if cutoff < 1 {
        return Err(ThermoError::Domain("Fock cutoff must be at least 1".into()));
    }
    let sq: Vec<Cplx<T>> = (1..=cutoff).map(|k| Cplx::new(T::count(k).sqrt(), T::zero())).collect();
    let dim = cutoff + 1;
    Ok((OperatorMatrix::from_bands(dim, [(1, sq.clone())])?, OperatorMatrix::from_bands(dim, [(-1, sq)])?))
}

/// `a†a` on the basis `|0⟩…|N⟩`.
pub fn number_operator<T: Real>(cutoff: usize) -> OperatorMatrix<T> {
    OperatorMatrix::diagonal((0..=cutoff).map(|k| Cplx::new(T::count(k), T::zero())).collect())
}

fn norm<T: Real>(v: &[Cplx<T>]) -> T {
    v.iter().fold(T::zero(), |a, e| a + e.norm_sqr()).sqrt()
}

/// `e^M v` by scaled Taylor steps with `‖hM‖ ≤ 4`; series truncation error at most `tol·‖v‖`.
pub fn matrix_exp_apply<T: Real>(m: &OperatorMatrix<T>, v: &[Cplx<T>], tol: T) -> Result<Vec<Cplx<T>>> {
    if v.len() != m.dim() {
        return Err(ThermoError::Domain(format!("vector of length {} for a {}-dimensional operator", v.len(), m.dim())));
    }
    let bound = m.norm_bound();
    if !bound.is_finite() {
        return Err(ThermoError::Domain("operator norm is not finite".into()));
    }
    let steps = (bound / T::lit(STEP_NORM)).ceil().max(T::one());
    let h = steps.recip();
    let n_steps = steps.to_usize().unwrap_or(usize::MAX);
    let step_tol = tol / steps;
    let mut acc = v.to_vec();
    for _ in 0..n_steps {
        let mut term = acc.clone();
        let mut sum = acc.clone();
        let mut converged = false;
        let mut k = 1;
        while k <= MAX_TAYLOR_TERMS {
            let scale = Cplx::new(h / T::count(k), T::zero());
            term = m.apply(&term).into_iter().map(|e| e * scale).collect();
            sum.iter_mut().zip(&term).for_each(|(s, t)| *s += *t);
            // past the peak of ‖hM‖^k/k! the remainder is below the last term
            if T::count(k) > T::lit(STEP_NORM) && norm(&term) <= step_tol * norm(&sum).max(T::min_positive_value()) {
                converged = true;
                break;
            }
            k += 1;
        }
        if !converged {
            return Err(ThermoError::NonConvergence { terms: MAX_TAYLOR_TERMS, residual: norm(&term).as_f64() });
        }
        acc = sum;
    }
    Ok(acc)
}
