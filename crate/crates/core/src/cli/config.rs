//! Run configuration: flag values, their text forms, and conversion to model records.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::densities::{GridSpec, DEFAULT_GRID_POINTS, DEFAULT_GRID_SIGMAS};
use crate::error::{Result, ThermoError};
use crate::fock::{CutoffPolicy, OracleOptions};
use crate::model::{Displacement, OscillatorParams, Squeeze, StateSpec, ThermalParams, DEFAULT_MAX_N};

pub const DEFAULT_TOL: f64 = 1e-8;

fn usage(msg: impl Into<String>) -> ThermoError {
    ThermoError::Usage(msg.into())
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| usage(format!("{what}: cannot parse `{s}` as a number")))?;
    if !v.is_finite() {
        return Err(usage(format!("{what}: `{s}` is not finite")));
    }
    Ok(v)
}

/// Shortest text that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Vacuum,
    Displaced,
    Squeezed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A complex parameter written `RE,IM`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Pair(pub f64, pub f64);

impl FromStr for Pair {
    type Err = ThermoError;
    fn from_str(s: &str) -> Result<Self> {
        let (re, im) = s.split_once(',').ok_or_else(|| usage(format!("expected RE,IM, got `{s}`")))?;
        Ok(Pair(parse_f64(re, "real part")?, parse_f64(im, "imaginary part")?))
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", fmt_f64(self.0), fmt_f64(self.1))
    }
}

/// Dimensionless `βħω`, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BetaHw(pub f64);

impl FromStr for BetaHw {
    type Err = ThermoError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" => Ok(BetaHw(f64::INFINITY)),
            t => parse_f64(t, "beta-hw").map(BetaHw),
        }
    }
}

impl fmt::Display for BetaHw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            f.write_str(&fmt_f64(self.0))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GridArg {
    Auto,
    Range { min: f64, max: f64, count: usize },
}

impl FromStr for GridArg {
    type Err = ThermoError;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "auto" {
            return Ok(GridArg::Auto);
        }
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts[..] else {
            return Err(usage(format!("grid must be MIN:MAX:COUNT or auto, got `{s}`")));
        };
        let count = count.trim().parse().map_err(|_| usage(format!("grid count `{count}` is not a positive integer")))?;
        let (min, max) = (parse_f64(min, "grid min")?, parse_f64(max, "grid max")?);
        if count < 2 || min >= max {
            return Err(usage(format!("grid needs MIN < MAX and COUNT >= 2, got `{s}`")));
        }
        Ok(GridArg::Range { min, max, count })
    }
}

impl fmt::Display for GridArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GridArg::Auto => f.write_str("auto"),
            GridArg::Range { min, max, count } => write!(f, "{}:{}:{count}", fmt_f64(min), fmt_f64(max)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Units {
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { mass: 1.0, omega: 1.0, hbar: 1.0 }
    }
}

impl FromStr for Units {
    type Err = ThermoError;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        let [m, w, h] = parts[..] else {
            return Err(usage(format!("units must be M,OMEGA,HBAR, got `{s}`")));
        };
        Ok(Units { mass: parse_f64(m, "mass")?, omega: parse_f64(w, "omega")?, hbar: parse_f64(h, "hbar")? })
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", fmt_f64(self.mass), fmt_f64(self.omega), fmt_f64(self.hbar))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CutoffArg {
    Auto,
    Fixed(usize),
}

impl FromStr for CutoffArg {
    type Err = ThermoError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" => Ok(CutoffArg::Auto),
            t => t
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .map(CutoffArg::Fixed)
                .ok_or_else(|| usage(format!("cutoff must be auto or a positive integer, got `{s}`"))),
        }
    }
}

impl fmt::Display for CutoffArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutoffArg::Auto => f.write_str("auto"),
            CutoffArg::Fixed(n) => write!(f, "{n}"),
        }
    }
}

macro_rules! string_serde {
    ($($t:ty),*) => {$(
        impl TryFrom<String> for $t {
            type Error = ThermoError;
            fn try_from(s: String) -> Result<Self> {
                s.parse()
            }
        }
        impl From<$t> for String {
            fn from(v: $t) -> String {
                v.to_string()
            }
        }
    )*};
}
string_serde!(Pair, BetaHw, GridArg, Units, CutoffArg);

/// Everything a single run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub state: StateKind,
    pub n: usize,
    pub alpha: Pair,
    pub z: Pair,
    pub beta_hw: BetaHw,
    pub omega_t: f64,
    pub units: Units,
    pub grid: GridArg,
    pub cutoff: CutoffArg,
    pub tol: f64,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            state: StateKind::Vacuum,
            n: 0,
            alpha: Pair::default(),
            z: Pair::default(),
            beta_hw: BetaHw(f64::INFINITY),
            omega_t: 0.0,
            units: Units::default(),
            grid: GridArg::Auto,
            cutoff: CutoffArg::Auto,
            tol: DEFAULT_TOL,
            format: None,
            out: None,
        }
    }
}

impl RunConfig {
    /// Rejects combinations the model cannot represent.
    pub fn validate(&self) -> Result<()> {
        if self.state == StateKind::Vacuum && (self.n != 0 || self.alpha != Pair::default() || self.z != Pair::default()) {
            return Err(usage("--n, --alpha and --z do not apply to --state vacuum"));
        }
        if self.state == StateKind::Displaced && self.z != Pair::default() {
            return Err(usage("--z needs --state squeezed"));
        }
        if !self.omega_t.is_finite() {
            return Err(usage("--omega-t must be finite"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(usage(format!("--tol must lie in (0, 1), got {}", self.tol)));
        }
        self.state_spec()?;
        self.thermal()?;
        self.oscillator()?;
        Ok(())
    }

    pub fn state_spec(&self) -> Result<StateSpec<f64>> {
        let alpha = Displacement::new(self.alpha.0, self.alpha.1).map_err(as_usage)?;
        let spec = match self.state {
            StateKind::Vacuum => StateSpec::ThermalVacuum,
            StateKind::Displaced => StateSpec::displaced(alpha, self.n),
            StateKind::Squeezed => StateSpec::squeezed(alpha, Squeeze::new(self.z.0, self.z.1).map_err(as_usage)?, self.n),
        };
        spec.validate(DEFAULT_MAX_N).map_err(as_usage)?;
        Ok(spec)
    }

    pub fn thermal(&self) -> Result<ThermalParams<f64>> {
        ThermalParams::new(self.beta_hw.0).map_err(as_usage)
    }

    pub fn oscillator(&self) -> Result<OscillatorParams<f64>> {
        OscillatorParams::new(self.units.mass, self.units.omega, self.units.hbar).map_err(as_usage)
    }

    pub fn grid_spec(&self) -> GridSpec<f64> {
        match self.grid {
            GridArg::Auto => GridSpec::Auto { sigmas: DEFAULT_GRID_SIGMAS, count: DEFAULT_GRID_POINTS },
            GridArg::Range { min, max, count } => GridSpec::Range { min, max, count },
        }
    }

    /// Oracle settings: `tol` bounds the density change under cutoff doubling,
    /// the edge-weight ceiling sits two decades below it.
    pub fn oracle_options(&self) -> OracleOptions<f64> {
        OracleOptions {
            cutoff: match self.cutoff {
                CutoffArg::Auto => CutoffPolicy::Auto,
                CutoffArg::Fixed(n) => CutoffPolicy::Fixed(n),
            },
            deficit_ceiling: self.tol * 1e-2,
            ..OracleOptions::default()
        }
    }

    /// Command-line flags that reproduce this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let state = match self.state {
            StateKind::Vacuum => "vacuum",
            StateKind::Displaced => "displaced",
            StateKind::Squeezed => "squeezed",
        };
        let mut args = vec![
            "--state".into(),
            state.into(),
            "--n".into(),
            self.n.to_string(),
            "--alpha".into(),
            self.alpha.to_string(),
            "--z".into(),
            self.z.to_string(),
            "--beta-hw".into(),
            self.beta_hw.to_string(),
            "--omega-t".into(),
            fmt_f64(self.omega_t),
            "--units".into(),
            self.units.to_string(),
            "--grid".into(),
            self.grid.to_string(),
            "--cutoff".into(),
            self.cutoff.to_string(),
            "--tol".into(),
            fmt_f64(self.tol),
        ];
        if let Some(f) = self.format {
            args.push("--format".into());
            args.push(if f == Format::Csv { "csv" } else { "json" }.into());
        }
        if let Some(p) = &self.out {
            args.push("--out".into());
            args.push(p.display().to_string());
        }
        args
    }
}

fn as_usage(e: ThermoError) -> ThermoError {
    match e {
        ThermoError::Usage(_) => e,
        other => usage(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms_round_trip() {
        for s in ["1,0.5", "-0.3,4e-7", "0,0"] {
            assert_eq!(s.parse::<Pair>().unwrap().to_string().parse::<Pair>().unwrap(), s.parse().unwrap());
        }
        assert_eq!("inf".parse::<BetaHw>().unwrap().0, f64::INFINITY);
        assert_eq!(BetaHw(0.1).to_string(), "0.1");
        assert_eq!("-4:4:5".parse::<GridArg>().unwrap(), GridArg::Range { min: -4.0, max: 4.0, count: 5 });
        assert_eq!("auto".parse::<GridArg>().unwrap().to_string(), "auto");
        assert_eq!("96".parse::<CutoffArg>().unwrap(), CutoffArg::Fixed(96));
        assert_eq!(Units::default().to_string(), "1,1,1");
        assert!("4:-4:5".parse::<GridArg>().is_err());
        assert!("1;2".parse::<Pair>().is_err());
        assert!("0".parse::<CutoffArg>().is_err());
        assert!("nan".parse::<BetaHw>().is_err());
    }

    #[test]
    fn shortest_float_text() {
        for v in [0.1, 1.0 / 3.0, 1e-20, 6.02e23, -2.5e-300, 0.0, 123456.789] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(fmt_f64(1e-20), "1e-20");
        assert_eq!(fmt_f64(0.25), "0.25");
    }

    #[test]
    fn json_round_trip() {
        let cfg = RunConfig {
            state: StateKind::Squeezed,
            n: 2,
            alpha: Pair(1.0, 0.5),
            z: Pair(0.3, 0.4),
            beta_hw: BetaHw(f64::INFINITY),
            omega_t: 0.7,
            grid: GridArg::Range { min: -6.0, max: 6.0, count: 13 },
            cutoff: CutoffArg::Fixed(120),
            format: Some(Format::Json),
            out: Some("rho.json".into()),
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig { beta_hw: BetaHw(1e-9), ..RunConfig::default() };
        assert!(matches!(bad.validate(), Err(ThermoError::Usage(_))));
        let bad = RunConfig { n: 1, ..RunConfig::default() };
        assert!(bad.validate().is_err());
        let bad = RunConfig { state: StateKind::Displaced, z: Pair(0.1, 0.0), ..RunConfig::default() };
        assert!(bad.validate().is_err());
        let bad = RunConfig { state: StateKind::Displaced, n: 65, ..RunConfig::default() };
        assert!(matches!(bad.validate(), Err(ThermoError::Usage(_))));
        let bad = RunConfig { units: Units { mass: -1.0, omega: 1.0, hbar: 1.0 }, ..RunConfig::default() };
        assert!(bad.validate().is_err());
    }
}
