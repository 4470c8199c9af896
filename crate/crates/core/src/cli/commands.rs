//! The `density`, `moments` and `sweep` computations, rendered to text.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use super::config::{fmt_f64, BetaHw, Format, RunConfig};
use crate::densities::{moments, DensityProfile};
use crate::error::{Result, ThermoError};

pub fn profile(cfg: &RunConfig) -> Result<DensityProfile<f64>> {
    cfg.validate()?;
    DensityProfile::build(&cfg.state_spec()?, &cfg.thermal()?, &cfg.oscillator()?, cfg.omega_t, &cfg.grid_spec())
}

pub fn cmd_density(cfg: &RunConfig) -> Result<String> {
    let prof = profile(cfg)?;
    Ok(match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("x,rho\n");
            for (x, r) in prof.grid.iter().zip(&prof.values) {
                let _ = writeln!(s, "{},{}", fmt_f64(*x), fmt_f64(*r));
            }
            s
        }
        Format::Json => pretty(&json!({
            "config": cfg,
            "x": prof.grid,
            "rho": prof.values,
            "clamped": prof.clamped,
        })),
    })
}

pub fn cmd_moments(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let (m, v) = moments(&cfg.state_spec()?, &cfg.thermal()?, &cfg.oscillator()?, cfg.omega_t);
    Ok(match cfg.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({
            "mean_x": m,
            "var_x": v,
            "beta_hw": beta_value(cfg.beta_hw),
            "omega_t": cfg.omega_t,
        })),
        Format::Csv => format!("mean_x,var_x,beta_hw,omega_t\n{},{},{},{}\n", fmt_f64(m), fmt_f64(v), cfg.beta_hw, fmt_f64(cfg.omega_t)),
    })
}

fn beta_value(b: BetaHw) -> Value {
    if b.0.is_infinite() {
        Value::String("inf".into())
    } else {
        json!(b.0)
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

/// The single parameter a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    BetaHw,
    OmegaT,
    N,
    Alpha1,
    Alpha2,
    Z1,
    Z2,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            Self::BetaHw => "beta_hw",
            Self::OmegaT => "omega_t",
            Self::N => "n",
            Self::Alpha1 => "alpha1",
            Self::Alpha2 => "alpha2",
            Self::Z1 => "z1",
            Self::Z2 => "z2",
        }
    }
}

impl FromStr for SweepParam {
    type Err = ThermoError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "beta_hw" | "beta-hw" => Self::BetaHw,
            "omega_t" | "omega-t" => Self::OmegaT,
            "n" => Self::N,
            "alpha1" => Self::Alpha1,
            "alpha2" => Self::Alpha2,
            "z1" => Self::Z1,
            "z2" => Self::Z2,
            _ => return Err(ThermoError::Usage(format!("cannot sweep `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<String>,
}

impl FromStr for Sweep {
    type Err = ThermoError;
    fn from_str(s: &str) -> Result<Self> {
        let (name, list) = s
            .split_once('=')
            .ok_or_else(|| ThermoError::Usage(format!("sweep must be NAME=V1,V2,..., got `{s}`")))?;
        let values: Vec<String> = list.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
        if values.is_empty() {
            return Err(ThermoError::Usage(format!("sweep `{name}` has no values")));
        }
        Ok(Sweep { param: name.trim().parse()?, values })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Quantity {
    Density,
    Moments,
}

/// One configuration per sweep value, ordered by value; the label is the canonical text.
fn sweep_points(base: &RunConfig, sweep: &Sweep) -> Result<Vec<(f64, String, RunConfig)>> {
    let mut pts = Vec::with_capacity(sweep.values.len());
    for v in &sweep.values {
        let mut cfg = base.clone();
        let bad = || ThermoError::Usage(format!("bad value `{v}` for {}", sweep.param.name()));
        let (key, label) = match sweep.param {
            SweepParam::BetaHw => {
                cfg.beta_hw = v.parse()?;
                (cfg.beta_hw.0, cfg.beta_hw.to_string())
            }
            SweepParam::N => {
                cfg.n = v.parse().map_err(|_| bad())?;
                (cfg.n as f64, cfg.n.to_string())
            }
            p => {
                let x: f64 = v.parse().map_err(|_| bad())?;
                match p {
                    SweepParam::OmegaT => cfg.omega_t = x,
                    SweepParam::Alpha1 => cfg.alpha.0 = x,
                    SweepParam::Alpha2 => cfg.alpha.1 = x,
                    SweepParam::Z1 => cfg.z.0 = x,
                    SweepParam::Z2 => cfg.z.1 = x,
                    SweepParam::BetaHw | SweepParam::N => unreachable!(),
                }
                (x, fmt_f64(x))
            }
        };
        if !key.is_finite() && sweep.param != SweepParam::BetaHw {
            return Err(ThermoError::Usage(format!("sweep value `{v}` is not finite")));
        }
        cfg.validate()?;
        pts.push((key, label, cfg));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pts)
}

pub fn cmd_sweep(base: &RunConfig, sweeps: &[Sweep], quantity: Quantity) -> Result<String> {
    let sweep = match sweeps {
        [one] => one,
        [] => return Err(ThermoError::Usage("sweep needs one --sweep NAME=V1,V2,...".into())),
        _ => return Err(ThermoError::Usage("sweep varies exactly one parameter".into())),
    };
    let pts = sweep_points(base, sweep)?;
    let format = base.format.unwrap_or(Format::Csv);
    let mut csv = String::new();
    let mut rows = Vec::new();
    match quantity {
        Quantity::Density => {
            csv.push_str("param,x,rho\n");
            for (_, label, cfg) in &pts {
                let prof = profile(cfg)?;
                for (x, r) in prof.grid.iter().zip(&prof.values) {
                    let _ = writeln!(csv, "{label},{},{}", fmt_f64(*x), fmt_f64(*r));
                    rows.push(json!({ "param": label, "x": x, "rho": r }));
                }
            }
        }
        Quantity::Moments => {
            csv.push_str("param,mean_x,var_x\n");
            for (_, label, cfg) in &pts {
                let (m, v) = moments(&cfg.state_spec()?, &cfg.thermal()?, &cfg.oscillator()?, cfg.omega_t);
                let _ = writeln!(csv, "{label},{},{}", fmt_f64(m), fmt_f64(v));
                rows.push(json!({ "param": label, "mean_x": m, "var_x": v }));
            }
        }
    }
    Ok(match format {
        Format::Csv => csv,
        Format::Json => pretty(&json!({ "sweep": sweep.param.name(), "rows": rows })),
    })
}
