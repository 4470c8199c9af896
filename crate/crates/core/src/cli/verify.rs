//! Self-checks of the closed forms against the Fock oracle, quadrature and known identities.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::densities::{density, moments, quadrature_moments, rho_tsn_n0_gaussian, rho_tsn_n1_quartic, var_x};
use crate::error::Result;
use crate::fock::{thermalize, time_evolve, FockVector1, FockVector2, OracleOptions, ThermalizedOracle};
use crate::model::{Displacement, OscillatorParams, Squeeze, StateSpec, ThermalParams};
use crate::special_fn::{hermite_poly, hermite_product_linearize};
use crate::states::single_mode_density;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    OracleEquivalence,
    Normalization,
    Moments,
    ZeroTemperature,
    ThermalVacuum,
    Identities,
    SpecialCases,
}

impl Group {
    pub const ALL: [Group; 7] = [
        Group::OracleEquivalence,
        Group::Normalization,
        Group::Moments,
        Group::ZeroTemperature,
        Group::ThermalVacuum,
        Group::Identities,
        Group::SpecialCases,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub group: Group,
    pub params: Value,
    pub metric: &'static str,
    pub threshold: f64,
    pub measured: f64,
    pub pass: bool,
}

impl Check {
    fn new(id: impl Into<String>, group: Group, params: Value, metric: &'static str, threshold: f64, measured: f64) -> Self {
        // NaN never passes
        let pass = measured <= threshold;
        Self { id: id.into(), group, params, metric, threshold, measured, pass }
    }
}

/// A shortcut formula compared with the general density; agreement is informational.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Erratum {
    pub id: &'static str,
    pub params: Value,
    pub metric: &'static str,
    pub measured: f64,
    pub agrees: bool,
    pub note: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub pass: bool,
    pub summary: Summary,
    pub checks: Vec<Check>,
    pub errata: Vec<Erratum>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Parameter lattice swept by the equivalence, normalization and moment checks.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub n: Vec<usize>,
    pub beta_hw: Vec<f64>,
    pub alpha: Vec<(f64, f64)>,
    pub z: Vec<(f64, f64)>,
    pub omega_t: Vec<f64>,
}

impl Lattice {
    pub fn for_level(level: Level) -> Self {
        match level {
            Level::Full => Self {
                n: vec![0, 1, 2, 5],
                beta_hw: vec![0.5, 1.0, 2.0, f64::INFINITY],
                alpha: vec![(0.0, 0.0), (1.0, 0.0), (1.0, 0.5)],
                z: vec![(0.0, 0.0), (0.5, 0.0), (0.3, 0.4)],
                omega_t: vec![0.0, 0.7, FRAC_PI_2],
            },
            Level::Quick => Self {
                n: vec![0, 1, 2],
                beta_hw: vec![1.0, f64::INFINITY],
                alpha: vec![(0.0, 0.0), (1.0, 0.5)],
                z: vec![(0.0, 0.0), (0.3, 0.4)],
                omega_t: vec![0.7],
            },
        }
    }

    /// Every `(state, βħω)` pair; `z = 0` selects the displaced family.
    fn states(&self) -> Vec<(StateSpec<f64>, f64)> {
        let mut out = Vec::new();
        for &b in &self.beta_hw {
            for &n in &self.n {
                for &(a1, a2) in &self.alpha {
                    for &(z1, z2) in &self.z {
                        out.push((spec(n, (a1, a2), (z1, z2)), b));
                    }
                }
            }
        }
        out
    }
}

fn spec(n: usize, a: (f64, f64), z: (f64, f64)) -> StateSpec<f64> {
    let alpha = Displacement::new(a.0, a.1).expect("finite lattice value");
    if z == (0.0, 0.0) {
        StateSpec::displaced(alpha, n)
    } else {
        StateSpec::squeezed(alpha, Squeeze::new(z.0, z.1).expect("finite lattice value"), n)
    }
}

fn thermal(b: f64) -> ThermalParams<f64> {
    ThermalParams::new(b).expect("lattice temperature above the floor")
}

fn beta_value(b: f64) -> Value {
    if b.is_infinite() {
        json!("inf")
    } else {
        json!(b)
    }
}

fn state_params(s: &StateSpec<f64>, b: f64) -> Value {
    let (a, z) = (s.alpha(), s.squeeze());
    json!({
        "n": s.n(),
        "alpha": [a.alpha1(), a.alpha2()],
        "z": [z.z1(), z.z2()],
        "beta_hw": beta_value(b),
    })
}

fn with(mut v: Value, key: &str, val: Value) -> Value {
    v[key] = val;
    v
}

/// Points of `|x| ≤ 6` spaced 0.05 apart.
fn window() -> Vec<f64> {
    (0..=240).map(|i| -6.0 + 0.05 * i as f64).collect()
}

fn sup_rel(a: &[f64], b: &[f64], scale: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

/// Largest closed-form value on the window or at the mean.
fn peak(s: &StateSpec<f64>, th: &ThermalParams<f64>, p: &OscillatorParams<f64>, wt: f64, vals: &[f64]) -> Result<f64> {
    let m = moments(s, th, p, wt).0;
    Ok(vals.iter().copied().fold(density(s, m, th, p, wt)?, f64::max))
}

fn closed_on(xs: &[f64], s: &StateSpec<f64>, th: &ThermalParams<f64>, p: &OscillatorParams<f64>, wt: f64) -> Result<Vec<f64>> {
    xs.iter().map(|&x| density(s, x, th, p, wt)).collect()
}

fn oracle_equivalence(lat: &Lattice, opts: &OracleOptions<f64>) -> Result<Vec<Check>> {
    let p = OscillatorParams::default();
    let xs = window();
    lat.states()
        .par_iter()
        .map(|(s, b)| {
            let th = thermal(*b);
            let o = ThermalizedOracle::build(s, &th, opts)?;
            let mut worst = 0.0f64;
            for &wt in &lat.omega_t {
                let c = closed_on(&xs, s, &th, &p, wt)?;
                let f = o.densities(&xs, &p, wt);
                worst = worst.max(sup_rel(&f, &c, peak(s, &th, &p, wt, &c)?));
            }
            let params = with(state_params(s, *b), "cutoff", json!(o.cutoff));
            let params = with(params, "edge_weight", json!(o.deficit));
            Ok(Check::new("oracle_density", Group::OracleEquivalence, params, "sup-rel-error", 1e-6, worst))
        })
        .collect()
}

fn nodes_for(n: usize) -> usize {
    2 * n + 32
}

fn normalization(lat: &Lattice) -> Result<Vec<Check>> {
    let p = OscillatorParams::default();
    let mut out = Vec::new();
    for (s, b) in lat.states() {
        let th = thermal(b);
        for &wt in &lat.omega_t {
            let (norm, _, _) = quadrature_moments(&s, &th, &p, wt, nodes_for(s.n()))?;
            let params = with(state_params(&s, b), "omega_t", json!(wt));
            out.push(Check::new("integral", Group::Normalization, params, "integral-deviation", 1e-8, (norm - 1.0).abs()));
        }
    }
    Ok(out)
}

fn moment_checks(lat: &Lattice, opts: &OracleOptions<f64>) -> Result<Vec<Check>> {
    let p = OscillatorParams::default();
    let mut out = Vec::new();
    for (s, b) in lat.states() {
        let th = thermal(b);
        for &wt in &lat.omega_t {
            let (_, qm, qv) = quadrature_moments(&s, &th, &p, wt, nodes_for(s.n()))?;
            let (m, v) = moments(&s, &th, &p, wt);
            let params = with(state_params(&s, b), "omega_t", json!(wt));
            // a vanishing mean is compared on the scale of the spread
            let mean_err = (qm - m).abs() / m.abs().max(v.sqrt());
            out.push(Check::new("mean", Group::Moments, params.clone(), "rel-error", 1e-8, mean_err));
            out.push(Check::new("variance", Group::Moments, params, "rel-error", 1e-8, (qv - v).abs() / v));
        }
    }

    let th = thermal(2.0);
    let s = spec(0, (1.0, 0.0), (0.0, 0.0));
    let direct = (0.5f64.tanh().recip()).sqrt() * 2f64.sqrt();
    let m = moments(&s, &th, &p, 0.0).0;
    out.push(Check::new("mean_spot", Group::Moments, json!({"alpha": [1.0, 0.0], "beta_hw": 2.0, "omega_t": 0.0, "expected": direct}), "abs-error", 1e-12, (m - direct).abs()));
    let v = var_x(&Squeeze::zero(), 1, &th, &p, 0.0);
    out.push(Check::new("variance_spot", Group::Moments, json!({"n": 1, "beta_hw": 2.0, "expected": 1.969553}), "abs-error", 1e-6, (v - 1.969553).abs()));

    // the thermal factor on the mean, read off the oracle's own moments
    let th = thermal(1.0);
    let s = spec(0, (1.0, 0.0), (0.0, 0.0));
    let o = ThermalizedOracle::build(&s, &th, opts)?;
    let (om, _) = o.moments(&p, 0.0);
    let amplified = (0.25f64.tanh().recip()).sqrt() * 2f64.sqrt();
    out.push(Check::new("oracle_mean_amplification", Group::Moments, json!({"alpha": [1.0, 0.0], "beta_hw": 1.0, "omega_t": 0.0, "expected": amplified}), "rel-error", 1e-8, (om - amplified).abs() / amplified));
    Ok(out)
}

fn zero_temperature(lat: &Lattice) -> Result<Vec<Check>> {
    let p = OscillatorParams::default();
    let th = ThermalParams::zero_temperature();
    let xs = window();
    let mut out = Vec::new();
    for (s, b) in lat.states().into_iter().filter(|(_, b)| b.is_infinite()) {
        for &wt in &lat.omega_t {
            let center = s.alpha().center_at(wt);
            let width = s.squeeze().f4() * crate::model::TimePoint::new(wt, &s.squeeze()).b().norm();
            let single: Vec<f64> = xs.iter().map(|&x| single_mode_density(x, center, width, s.n(), &p)).collect();
            let c = closed_on(&xs, &s, &th, &p, wt)?;
            let params = with(state_params(&s, b), "omega_t", json!(wt));
            out.push(Check::new("single_mode_reduction", Group::ZeroTemperature, params, "sup-rel-error", 1e-9, sup_rel(&c, &single, peak(&s, &th, &p, wt, &c)?)));
        }
    }
    Ok(out)
}

fn thermal_vacuum(lat: &Lattice, opts: &OracleOptions<f64>) -> Result<Vec<Check>> {
    let p = OscillatorParams::default();
    let xs = window();
    let s = StateSpec::ThermalVacuum;
    let mut out = Vec::new();
    for &b in &lat.beta_hw {
        let th = thermal(b);
        let params = json!({"beta_hw": beta_value(b)});
        let o = ThermalizedOracle::build(&s, &th, opts)?;
        let c = closed_on(&xs, &s, &th, &p, 0.0)?;
        let f0 = o.densities(&xs, &p, 0.0);
        out.push(Check::new("oracle_density", Group::ThermalVacuum, params.clone(), "sup-rel-error", 1e-8, sup_rel(&f0, &c, peak(&s, &th, &p, 0.0, &c)?)));

        let (mut oracle_drift, mut closed_drift) = (0.0f64, 0.0f64);
        for wt in [0.7, FRAC_PI_2, 3.0] {
            oracle_drift = oracle_drift.max(sup_rel(&o.densities(&xs, &p, wt), &f0, 1.0));
            closed_drift = closed_drift.max(sup_rel(&closed_on(&xs, &s, &th, &p, wt)?, &c, 1.0));
        }
        out.push(Check::new("oracle_time_invariance", Group::ThermalVacuum, params.clone(), "sup-abs-change", 1e-12, oracle_drift));
        out.push(Check::new("closed_time_invariance", Group::ThermalVacuum, params.clone(), "sup-abs-change", 0.0, closed_drift));

        let (_, _, qv) = quadrature_moments(&s, &th, &p, 0.0, 32)?;
        let want = p.length_scale().powi(2) * th.coth_half() / 2.0;
        out.push(Check::new("variance", Group::ThermalVacuum, params, "rel-error", 1e-10, (qv - want).abs() / want));
    }
    Ok(out)
}

fn identities(level: Level) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let samples = if level == Level::Full { 1000 } else { 200 };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (r, phi) = (rng.gen_range(0.0..3.0), rng.gen_range(-PI..PI));
        let z = Squeeze::new(r * f64::cos(phi), r * f64::sin(phi))?;
        worst = worst.max((z.f3().norm() - 1.0).abs());
    }
    out.push(Check::new("f3_unit_modulus", Group::Identities, json!({"samples": samples, "seed": 0x5eed, "r_max": 3.0}), "max-abs-error", 1e-14, worst));

    let mut worst = 0.0f64;
    for m in 0..=10 {
        for n in 0..=10 {
            let e = hermite_product_linearize::<f64>(m, n);
            for x in [-2.5, -0.7, 0.3, 1.9] {
                let direct = hermite_poly(m, x)? * hermite_poly(n, x)?;
                let scale: f64 = e.terms.iter().map(|(&d, &c)| (c * hermite_poly(d, x).unwrap_or(0.0)).abs()).sum();
                worst = worst.max((e.eval(x) - direct).abs() / scale.max(f64::MIN_POSITIVE));
            }
        }
    }
    out.push(Check::new("hermite_linearization", Group::Identities, json!({"max_degree": 10}), "rel-error", 1e-9, worst));

    let th = thermal(1.0);
    let u = crate::fock::displaced_squeezed_number_vector(&Displacement::new(0.6, -0.3)?, &Squeeze::new(0.2, 0.1)?, 1, 60, 1e-15)?;
    let c = FockVector2::product(&u, &crate::fock::tilde_vector(&u))?;
    let a = time_evolve(&thermalize(&c, th.theta(), 1e-15)?, 0.7);
    let b = thermalize(&time_evolve(&c, 0.7), th.theta(), 1e-15)?;
    let diff = a.coefficients.iter().zip(&b.coefficients).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    out.push(Check::new("thermalize_evolve_commute", Group::Identities, json!({"beta_hw": 1.0, "omega_t": 0.7, "cutoff": 60}), "max-abs-diff", 1e-10, diff));

    for b in [0.5, 1.0, 2.0] {
        let th = thermal(b);
        let cutoff = 200;
        let vac = FockVector2::product(&FockVector1::basis(0, cutoff), &FockVector1::basis(0, cutoff))?;
        let t = thermalize(&vac, th.theta(), 1e-15)?;
        let (tt, ch) = (th.tanh_theta(), th.cosh_theta());
        let worst = (0..=cutoff).map(|k| (t.get(k, k).re - tt.powi(k as i32) / ch).abs()).fold(0.0, f64::max);
        out.push(Check::new("thermal_vacuum_fock_diagonal", Group::Identities, json!({"beta_hw": b, "cutoff": cutoff}), "max-abs-error", 1e-10, worst));
    }
    Ok(out)
}

fn special_cases(lat: &Lattice) -> Result<(Vec<Check>, Vec<Erratum>)> {
    let p = OscillatorParams::default();
    let xs = window();
    let mut checks = Vec::new();
    let mut quartic_worst = 0.0f64;
    for (s, b) in lat.states().into_iter().filter(|(s, _)| s.n() <= 1) {
        let th = thermal(b);
        for &wt in &lat.omega_t {
            let (m, v) = moments(&s, &th, &p, wt);
            let c = closed_on(&xs, &s, &th, &p, wt)?;
            let pk = peak(&s, &th, &p, wt, &c)?;
            if s.n() == 0 {
                let g: Vec<f64> = xs.iter().map(|&x| rho_tsn_n0_gaussian(x, m, v)).collect();
                let params = with(state_params(&s, b), "omega_t", json!(wt));
                checks.push(Check::new("n0_gaussian", Group::SpecialCases, params, "sup-rel-error", 1e-10, sup_rel(&g, &c, pk)));
            } else {
                let v0 = v / 3.0;
                let q: Vec<f64> = xs.iter().map(|&x| rho_tsn_n1_quartic(x, m, v0, &th)).collect();
                quartic_worst = quartic_worst.max(sup_rel(&q, &c, pk));
            }
        }
    }
    let errata = vec![Erratum {
        id: "n1_quartic",
        params: json!({"lattice": "n = 1 points of the checked lattice"}),
        metric: "sup-rel-error",
        measured: quartic_worst,
        agrees: quartic_worst <= 1e-10,
        note: "n = 1 quartic shortcut √(2/πΔ₀²)·e^(-w)·{½sech²(βħω/2)[(w-3/2)²-3/2] + w}, \
               w = (x-⟨x⟩)²/2Δ₀², against the general density",
    }];
    Ok((checks, errata))
}

pub fn run_group(group: Group, level: Level, opts: &OracleOptions<f64>) -> Result<(Vec<Check>, Vec<Erratum>)> {
    let lat = Lattice::for_level(level);
    Ok(match group {
        Group::OracleEquivalence => (oracle_equivalence(&lat, opts)?, vec![]),
        Group::Normalization => (normalization(&lat)?, vec![]),
        Group::Moments => (moment_checks(&lat, opts)?, vec![]),
        Group::ZeroTemperature => (zero_temperature(&lat)?, vec![]),
        Group::ThermalVacuum => (thermal_vacuum(&lat, opts)?, vec![]),
        Group::Identities => (identities(level)?, vec![]),
        Group::SpecialCases => special_cases(&lat)?,
    })
}

pub fn assemble(level: Level, parts: Vec<(Vec<Check>, Vec<Erratum>)>) -> VerifyReport {
    let (mut checks, mut errata) = (Vec::new(), Vec::new());
    for (c, e) in parts {
        checks.extend(c);
        errata.extend(e);
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed };
    let amp = checks.iter().find(|c| c.id == "oracle_mean_amplification").map(|c| c.measured);
    let notes = vec![format!(
        "mean position carries the factor √coth(βħω/4) from displacing both physical and tilde modes; \
         the Fock oracle, built from the same doubled displacement, reproduces it (rel. error {})",
        amp.map_or_else(|| "n/a".into(), |v| format!("{v:e}"))
    )];
    VerifyReport { level, pass: summary.failed == 0, summary, checks, errata, notes }
}

pub fn run(level: Level, opts: &OracleOptions<f64>) -> Result<VerifyReport> {
    let parts = Group::ALL.iter().map(|&g| run_group(g, level, opts)).collect::<Result<Vec<_>>>()?;
    Ok(assemble(level, parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_report_passes() {
        let r = run(Level::Quick, &OracleOptions::default()).unwrap();
        let failing: Vec<_> = r.failures().collect();
        assert!(r.pass, "{failing:?}");
        assert_eq!(r.summary.total, r.checks.len());
        assert!(Group::ALL.iter().all(|g| r.checks.iter().any(|c| c.group == *g)));
        assert_eq!(r.errata.len(), 1);
    }

    #[test]
    fn report_pass_is_conjunction_of_checks() {
        let good = Check::new("a", Group::Identities, json!({}), "m", 1.0, 0.5);
        let bad = Check::new("b", Group::Identities, json!({}), "m", 1.0, 2.0);
        let nan = Check::new("c", Group::Identities, json!({}), "m", 1.0, f64::NAN);
        assert!(assemble(Level::Quick, vec![(vec![good.clone()], vec![])]).pass);
        let r = assemble(Level::Quick, vec![(vec![good, bad, nan], vec![])]);
        assert!(!r.pass);
        assert_eq!(r.summary, Summary { total: 3, passed: 1, failed: 2 });
    }

    #[test]
    fn tampered_f2_is_caught_by_the_oracle() {
        let p = OscillatorParams::default();
        let th = thermal(1.0);
        let s = spec(1, (1.0, 0.5), (0.3, 0.4));
        let z = s.squeeze();
        let tampered = StateSpec::squeezed(s.alpha(), z.with_f2(z.f2().conj()), 1);
        let o = ThermalizedOracle::build(&s, &th, &OracleOptions::default()).unwrap();
        let xs = window();
        let c = closed_on(&xs, &tampered, &th, &p, 0.7).unwrap();
        let err = sup_rel(&o.densities(&xs, &p, 0.7), &c, peak(&tampered, &th, &p, 0.7, &c).unwrap());
        assert!(err > 1e-3, "{err}");
    }
}
