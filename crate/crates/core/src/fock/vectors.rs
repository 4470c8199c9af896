//! Single-mode and doubled Fock-space states.

use rayon::prelude::*;

use super::operator::{ladder_matrices, matrix_exp_apply, OperatorMatrix};
use crate::error::{Result, ThermoError};
use crate::model::{Displacement, OscillatorParams, Squeeze};
use crate::scalar::{cplx, Cplx, Real};
use crate::special_fn::eigenfunction_table;

/// Largest tolerated weight in the top quarter of the basis for a directly requested vector.
pub const DEFAULT_EDGE_CEILING: f64 = 1e-10;

fn edge_start(cutoff: usize) -> usize {
    3 * cutoff / 4 + 1
}

fn zero<T: Real>() -> Cplx<T> {
    Cplx::new(T::zero(), T::zero())
}

/// Amplitudes on `|0⟩…|N⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector1<T> {
    pub coefficients: Vec<Cplx<T>>,
}

impl<T: Real> FockVector1<T> {
    pub fn basis(k: usize, cutoff: usize) -> Self {
        let mut c = vec![zero(); cutoff + 1];
        c[k] = cplx(T::one(), T::zero());
        Self { coefficients: c }
    }

    pub fn cutoff(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn norm_sqr(&self) -> T {
        self.coefficients.iter().fold(T::zero(), |a, c| a + c.norm_sqr())
    }

    /// Weight on `k > 3N/4`, the truncation diagnostic.
    pub fn edge_weight(&self) -> T {
        self.coefficients[edge_start(self.cutoff()).min(self.coefficients.len())..]
            .iter()
            .fold(T::zero(), |a, c| a + c.norm_sqr())
    }

    /// `Σ_k c_k ψ_k(x)`.
    pub fn position(&self, x: T, p: &OscillatorParams<T>) -> Cplx<T> {
        let len = p.length_scale();
        let psi = eigenfunction_table(self.cutoff(), x / len);
        let inv = len.sqrt().recip();
        self.coefficients.iter().zip(&psi).fold(zero(), |a, (&c, &f)| a + c * (f * inv))
    }
}

/// Tilde conjugation: entrywise complex conjugate.
pub fn tilde_vector<T: Real>(v: &FockVector1<T>) -> FockVector1<T> {
    FockVector1 { coefficients: v.coefficients.iter().map(|c| c.conj()).collect() }
}

/// `D(α)S(z)|n⟩` without a truncation check.
pub(crate) fn build_single<T: Real>(alpha: &Displacement<T>, z: &Squeeze<T>, n: usize, cutoff: usize, tol: T) -> Result<FockVector1<T>> {
    let (a, ad) = ladder_matrices::<T>(cutoff)?;
    let mut v = FockVector1::basis(n, cutoff).coefficients;
    if !z.is_zero() {
        let zc = z.as_complex();
        let half = T::lit(0.5);
        let gen = ad.times(&ad).scale(zc * half).minus(&a.times(&a).scale(zc.conj() * half));
        v = matrix_exp_apply(&gen, &v, tol)?;
    }
    let al = alpha.as_complex();
    if al.norm_sqr() > T::zero() {
        let gen = ad.scale(al).minus(&a.scale(al.conj()));
        v = matrix_exp_apply(&gen, &v, tol)?;
    }
    Ok(FockVector1 { coefficients: v })
}

/// `D(α)S(z)|n⟩`: squeeze first, then displace.
pub fn displaced_squeezed_number_vector<T: Real>(
    alpha: &Displacement<T>,
    z: &Squeeze<T>,
    n: usize,
    cutoff: usize,
    tol: T,
) -> Result<FockVector1<T>> {
    if 2 * n > cutoff {
        return Err(ThermoError::Domain(format!("number {n} needs a cutoff of at least {}", 2 * n)));
    }
    let v = build_single(alpha, z, n, cutoff, tol)?;
    let edge = v.edge_weight();
    if edge > T::lit(DEFAULT_EDGE_CEILING) {
        return Err(ThermoError::CutoffTooSmall { cutoff, deficit: edge.as_f64(), ceiling: DEFAULT_EDGE_CEILING });
    }
    Ok(v)
}

/// Amplitudes `c_kl` on `|k⟩⊗|l̃⟩`, row-major in `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector2<T> {
    pub coefficients: Vec<Cplx<T>>,
    pub cutoff: usize,
}

impl<T: Real> FockVector2<T> {
    pub fn product(u: &FockVector1<T>, v: &FockVector1<T>) -> Result<Self> {
        if u.cutoff() != v.cutoff() {
            return Err(ThermoError::Domain("physical and tilde vectors need the same cutoff".into()));
        }
        let coefficients = u.coefficients.iter().flat_map(|&a| v.coefficients.iter().map(move |&b| a * b)).collect();
        Ok(Self { coefficients, cutoff: u.cutoff() })
    }

    fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn get(&self, k: usize, l: usize) -> Cplx<T> {
        self.coefficients[k * self.dim() + l]
    }

    pub fn norm_sqr(&self) -> T {
        self.coefficients.iter().fold(T::zero(), |a, c| a + c.norm_sqr())
    }

    /// `1 - Σ|c_kl|²`. Zero up to rounding: the truncated generators are anti-Hermitian.
    pub fn norm_deficit(&self) -> T {
        T::one() - self.norm_sqr()
    }

    /// Weight on `max(k, l) > 3N/4`, the truncation diagnostic.
    pub fn edge_weight(&self) -> T {
        let e = edge_start(self.cutoff);
        let d = self.dim();
        (0..d)
            .flat_map(|k| (0..d).map(move |l| (k, l)))
            .filter(|&(k, l)| k.max(l) >= e)
            .fold(T::zero(), |a, (k, l)| a + self.get(k, l).norm_sqr())
    }

    /// `⟨x̃,x|c⟩ = Σ c_kl ψ_k(x) ψ_l(x̃)`.
    pub fn amplitude(&self, x: T, x_tilde: T, p: &OscillatorParams<T>) -> Cplx<T> {
        let len = p.length_scale();
        let px = eigenfunction_table(self.cutoff, x / len);
        let pt = eigenfunction_table(self.cutoff, x_tilde / len);
        let mut s = zero();
        for (k, &fk) in px.iter().enumerate() {
            let row = &self.coefficients[k * self.dim()..(k + 1) * self.dim()];
            let inner = row.iter().zip(&pt).fold(zero(), |a, (&c, &fl)| a + c * fl);
            s += inner * fk;
        }
        s / len
    }
}

/// Tridiagonal generator of the thermal transformation on stripe `k - l = d`.
fn stripe_generator<T: Real>(d: isize, theta: T, cutoff: usize) -> OperatorMatrix<T> {
    let len = cutoff + 1 - d.unsigned_abs();
    let (k0, l0) = if d >= 0 { (d as usize, 0) } else { (0, d.unsigned_abs()) };
    let up: Vec<Cplx<T>> = (0..len - 1)
        .map(|j| cplx(theta * (T::count((k0 + j + 1) * (l0 + j + 1))).sqrt(), T::zero()))
        .collect();
    let down: Vec<Cplx<T>> = up.iter().map(|&e| -e).collect();
    if len == 1 {
        return OperatorMatrix::zeros(1);
    }
    // entry (j+1, j) raises both quanta, (j, j+1) lowers them
    OperatorMatrix::from_bands(len, [(-1, up), (1, down)]).expect("stripe bands match dimension")
}

fn stripe_indices(d: isize, cutoff: usize) -> impl Iterator<Item = (usize, usize)> {
    let len = cutoff + 1 - d.unsigned_abs();
    let (k0, l0) = if d >= 0 { (d as usize, 0) } else { (0, d.unsigned_abs()) };
    (0..len).map(move |j| (k0 + j, l0 + j))
}

/// `exp{θ(a†ã† - aã)} c`, one independent tridiagonal problem per stripe `k - l`.
pub fn thermalize<T: Real>(c: &FockVector2<T>, theta: T, tol: T) -> Result<FockVector2<T>> {
    if !theta.is_finite() || theta < T::zero() {
        return Err(ThermoError::Domain(format!("thermal angle must be finite and non-negative, got {theta}")));
    }
    if theta == T::zero() {
        return Ok(c.clone());
    }
    let n = c.cutoff as isize;
    let stripes: Vec<(isize, Vec<Cplx<T>>)> = (-n..=n)
        .into_par_iter()
        .map(|d| {
            let v: Vec<Cplx<T>> = stripe_indices(d, c.cutoff).map(|(k, l)| c.get(k, l)).collect();
            matrix_exp_apply(&stripe_generator(d, theta, c.cutoff), &v, tol).map(|out| (d, out))
        })
        .collect::<Result<_>>()?;
    let mut out = FockVector2 { coefficients: vec![zero(); c.coefficients.len()], cutoff: c.cutoff };
    let dim = c.cutoff + 1;
    for (d, vals) in stripes {
        for ((k, l), v) in stripe_indices(d, c.cutoff).zip(vals) {
            out.coefficients[k * dim + l] = v;
        }
    }
    Ok(out)
}

/// `c_kl → e^{-iωt(k-l)} c_kl`.
pub fn time_evolve<T: Real>(c: &FockVector2<T>, omega_t: T) -> FockVector2<T> {
    let dim = c.cutoff + 1;
    let coefficients = c
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let d = T::count(i / dim) - T::count(i % dim);
            let (s, co) = (omega_t * d).sin_cos();
            v * cplx(co, -s)
        })
        .collect();
    FockVector2 { coefficients, cutoff: c.cutoff }
}

/// `Σ_l |Σ_k c_kl ψ_k(x)|²`, the tilde integral done by orthonormality.
pub fn marginal_density<T: Real>(c: &FockVector2<T>, x: T, p: &OscillatorParams<T>) -> T {
    let len = p.length_scale();
    let psi = eigenfunction_table(c.cutoff, x / len);
    let dim = c.cutoff + 1;
    let mut cols = vec![zero::<T>(); dim];
    for (k, &f) in psi.iter().enumerate() {
        let row = &c.coefficients[k * dim..(k + 1) * dim];
        cols.iter_mut().zip(row).for_each(|(s, &v)| *s += v * f);
    }
    cols.iter().fold(T::zero(), |a, v| a + v.norm_sqr()) / len
}

/// `(⟨x⟩, ⟨x²⟩ - ⟨x⟩²)` from `x = √(ħ/2mω)(a + a†)` on the physical index.
pub fn oracle_moments<T: Real>(c: &FockVector2<T>, p: &OscillatorParams<T>) -> (T, T) {
    let dim = c.cutoff + 1;
    let (mut first, mut second, mut diag) = (zero::<T>(), zero::<T>(), T::zero());
    for k in 0..dim {
        for l in 0..dim {
            let v = c.get(k, l);
            diag += T::count(2 * k + 1) * v.norm_sqr();
            if k >= 1 {
                first += c.get(k - 1, l).conj() * v * T::count(k).sqrt();
            }
            if k >= 2 {
                second += c.get(k - 2, l).conj() * v * (T::count(k * (k - 1))).sqrt();
            }
        }
    }
    let len = p.length_scale();
    let two = T::lit(2.0);
    let mean = len * T::SQRT_2() * first.re;
    let x2 = len * len * (two * second.re + diag) / two;
    (mean, x2 - mean * mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{psi_squeezed_number, psi_thermal_vacuum};
    use crate::model::ThermalParams;
    use proptest::prelude::*;

    fn unit() -> OscillatorParams<f64> {
        OscillatorParams::default()
    }

    fn disp(a1: f64, a2: f64) -> Displacement<f64> {
        Displacement::new(a1, a2).unwrap()
    }

    fn doubled(alpha: Displacement<f64>, z: Squeeze<f64>, n: usize, cutoff: usize) -> FockVector2<f64> {
        let u = build_single(&alpha, &z, n, cutoff, 1e-15).unwrap();
        FockVector2::product(&u, &tilde_vector(&u)).unwrap()
    }

    #[test]
    fn single_mode_examples() {
        let v = displaced_squeezed_number_vector(&Displacement::zero(), &Squeeze::zero(), 3, 10, 1e-14).unwrap();
        assert_eq!(v, FockVector1::basis(3, 10));

        let v = displaced_squeezed_number_vector(&disp(1.0, 0.0), &Squeeze::zero(), 0, 40, 1e-15).unwrap();
        let mut fact = 1.0;
        for k in 0..15 {
            if k > 0 {
                fact *= k as f64;
            }
            let want = (-0.5f64).exp() / fact.sqrt();
            assert!((v.coefficients[k] - cplx(want, 0.0)).norm() < 1e-13, "k={k}");
        }
        assert!(matches!(
            displaced_squeezed_number_vector(&disp(3.0, 0.0), &Squeeze::zero(), 0, 12, 1e-14),
            Err(ThermoError::CutoffTooSmall { .. })
        ));
        assert!(displaced_squeezed_number_vector(&Displacement::zero(), &Squeeze::zero(), 7, 12, 1e-14).is_err());
    }

    #[test]
    fn position_synthesis_matches_closed_form() {
        let p = unit();
        let (a, z) = (disp(1.0, 0.5), Squeeze::new(0.3, 0.4).unwrap());
        let v = displaced_squeezed_number_vector(&a, &z, 2, 160, 1e-15).unwrap();
        // closed form uses principal branches, so compare up to one global phase
        let phase = {
            let (s, c) = (v.position(0.7, &p), psi_squeezed_number(0.7, &a, &z, 2, &p));
            s / c
        };
        assert!((phase.norm() - 1.0).abs() < 1e-10, "{phase}");
        for i in 0..=60 {
            let x = -6.0 + 0.2 * i as f64;
            let s = v.position(x, &p);
            let c = psi_squeezed_number(x, &a, &z, 2, &p) * phase;
            assert!((s - c).norm() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn displacement_and_squeeze_do_not_commute() {
        let (a, z) = (disp(1.0, 0.5), Squeeze::new(0.3, 0.4).unwrap());
        let ds = build_single(&a, &z, 1, 60, 1e-15).unwrap();
        let (lo, ad) = ladder_matrices::<f64>(60).unwrap();
        let al = a.as_complex();
        let d_gen = ad.scale(al).minus(&lo.scale(al.conj()));
        let zc = z.as_complex();
        let s_gen = ad.times(&ad).scale(zc * 0.5).minus(&lo.times(&lo).scale(zc.conj() * 0.5));
        let sd = matrix_exp_apply(&s_gen, &matrix_exp_apply(&d_gen, &FockVector1::basis(1, 60).coefficients, 1e-15).unwrap(), 1e-15).unwrap();
        let diff: f64 = ds.coefficients.iter().zip(&sd).map(|(x, y)| (x - y).norm_sqr()).sum();
        assert!(diff > 1e-3);
    }

    #[test]
    fn tilde_conjugation() {
        let v = build_single(&disp(0.0, 1.0), &Squeeze::zero(), 0, 30, 1e-15).unwrap();
        let w = build_single(&disp(0.0, -1.0), &Squeeze::zero(), 0, 30, 1e-15).unwrap();
        let t = tilde_vector(&v);
        assert!(t.coefficients.iter().zip(&w.coefficients).all(|(x, y)| (x - y).norm() < 1e-12));
        assert_eq!(tilde_vector(&t), v);
        let real = FockVector1 { coefficients: vec![cplx(0.3, 0.0), cplx(-0.2, 0.0)] };
        assert_eq!(tilde_vector(&real), real);
    }

    #[test]
    fn thermal_vacuum_expansion() {
        let vac = FockVector2::product(&FockVector1::basis(0, 40), &FockVector1::basis(0, 40)).unwrap();
        assert_eq!(thermalize(&vac, 0.0, 1e-14).unwrap(), vac);
        let theta = 0.5 * 2f64.ln();
        let t = thermalize(&vac, theta, 1e-15).unwrap();
        assert!((t.get(0, 0).re - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
        assert!((t.get(0, 0).re - 0.942809).abs() < 1e-6);
        assert!((t.get(1, 1).re - 0.314270).abs() < 1e-6);
        for k in 0..=40 {
            for l in 0..=40 {
                let want = if k == l { theta.tanh().powi(k as i32) / theta.cosh() } else { 0.0 };
                assert!((t.get(k, l) - cplx(want, 0.0)).norm() < 1e-10, "({k},{l})");
            }
        }
        let p = unit();
        let th = ThermalParams::new(1.0).unwrap();
        let t = thermalize(&vac, th.theta(), 1e-15).unwrap();
        for &(x, xt) in &[(0.0, 0.0), (1.0, -0.5), (-2.0, 1.5)] {
            assert!((t.amplitude(x, xt, &p).re - psi_thermal_vacuum(x, xt, &th, &p)).abs() < 1e-8);
        }
    }

    #[test]
    fn time_evolution() {
        let c = doubled(disp(1.0, 0.5), Squeeze::new(0.2, 0.1).unwrap(), 1, 30);
        let full = time_evolve(&c, 2.0 * std::f64::consts::PI);
        assert!(full.coefficients.iter().zip(&c.coefficients).all(|(x, y)| (x - y).norm() < 1e-12));
        assert!((time_evolve(&c, 0.9).norm_sqr() - c.norm_sqr()).abs() < 1e-14);
        let vac = FockVector2::product(&FockVector1::basis(0, 30), &FockVector1::basis(0, 30)).unwrap();
        let t = thermalize(&vac, 0.6, 1e-15).unwrap();
        assert_eq!(time_evolve(&t, 1.3).coefficients.iter().zip(&t.coefficients).filter(|(x, y)| (*x - *y).norm() > 1e-15).count(), 0);
    }

    #[test]
    fn marginal_and_moments_of_simple_states() {
        let p = unit();
        let g = FockVector2::product(&FockVector1::basis(0, 10), &FockVector1::basis(0, 10)).unwrap();
        for &x in &[0.0f64, 0.5, -1.7] {
            let want = std::f64::consts::PI.powf(-0.5) * (-x * x).exp();
            assert!((marginal_density(&g, x, &p) - want).abs() < 1e-15);
        }
        for n in 0..5 {
            let c = FockVector2::product(&FockVector1::basis(n, 12), &FockVector1::basis(n, 12)).unwrap();
            let (m, v) = oracle_moments(&c, &p);
            assert!(m.abs() < 1e-15 && (v - (2 * n + 1) as f64 / 2.0).abs() < 1e-13);
        }
        let th = ThermalParams::new(1.0).unwrap();
        let t = thermalize(&FockVector2::product(&FockVector1::basis(0, 60), &FockVector1::basis(0, 60)).unwrap(), th.theta(), 1e-15).unwrap();
        let (_, v) = oracle_moments(&t, &p);
        assert!((v - 0.5 / 0.5f64.tanh()).abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn thermalize_commutes_with_time_evolution(
            seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 21 * 21),
            theta in 0.0f64..1.5, wt in 0.0f64..6.3,
        ) {
            let norm: f64 = seed.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            let c = FockVector2 { coefficients: seed.iter().map(|&(a, b)| cplx(a / norm, b / norm)).collect(), cutoff: 20 };
            let one = time_evolve(&thermalize(&c, theta, 1e-15).unwrap(), wt);
            let two = thermalize(&time_evolve(&c, wt), theta, 1e-15).unwrap();
            let diff = one.coefficients.iter().zip(&two.coefficients).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            prop_assert!(diff < 1e-10);
            prop_assert!((one.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
