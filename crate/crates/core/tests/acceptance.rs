//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

use std::process::Command;
use std::time::Instant;

use thermofield::cli::verify::{self, Check, Erratum, Group, Level};
use thermofield::fock::OracleOptions;

struct Outcome {
    pass: bool,
    detail: String,
}

/// Each check must sit at or below the tolerance listed for its id.
fn against(checks: &[Check], limits: &[(&str, f64)]) -> Outcome {
    let mut pass = !checks.is_empty();
    let mut parts = Vec::new();
    for &(id, tol) in limits {
        let sel: Vec<&Check> = checks.iter().filter(|c| c.id == id).collect();
        let worst = sel.iter().map(|c| c.measured).fold(0.0f64, f64::max);
        let ok = !sel.is_empty() && sel.iter().all(|c| c.measured <= tol);
        pass &= ok;
        parts.push(format!("{id}: {} cases, worst {worst:.2e} vs {tol:.0e}", sel.len()));
    }
    let unlisted = checks.iter().filter(|c| !limits.iter().any(|l| l.0 == c.id)).count();
    if unlisted > 0 {
        pass = false;
        parts.push(format!("{unlisted} checks without a stated tolerance"));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn group(g: Group) -> (Vec<Check>, Vec<Erratum>) {
    verify::run_group(g, Level::Full, &OracleOptions::default()).unwrap_or_else(|e| panic!("{g:?}: {e}"))
}

fn binary(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_thermofield")).args(args).output().expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn main() {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut lines = Vec::new();
    let mut parts = Vec::new();

    let t = Instant::now();
    let (oracle, e) = single.install(|| group(Group::OracleEquivalence));
    let secs = t.elapsed().as_secs_f64();
    let mut o = against(&oracle, &[("oracle_density", 1e-6)]);
    let full_lattice = oracle.len() == 4 * 4 * 3 * 3;
    o.pass &= full_lattice && secs <= 600.0;
    o.detail = format!("{}; {} lattice states x 3 phases, largest cutoff {}, {secs:.0} s on one thread", o.detail, oracle.len(),
        oracle.iter().filter_map(|c| c.params["cutoff"].as_u64()).max().unwrap_or(0));
    lines.push((1, "oracle equivalence", o));
    parts.push((oracle, e));

    let (norm, e) = group(Group::Normalization);
    let mut o = against(&norm, &[("integral", 1e-8)]);
    o.pass &= norm.len() == 4 * 4 * 3 * 3 * 3;
    lines.push((2, "normalization", o));
    parts.push((norm, e));

    let (mom, e) = group(Group::Moments);
    let mut o = against(&mom, &[("mean", 1e-8), ("variance", 1e-8), ("mean_spot", 1e-12), ("variance_spot", 1e-6), ("oracle_mean_amplification", 1e-8)]);
    let spot = mom.iter().find(|c| c.id == "mean_spot").and_then(|c| c.params["expected"].as_f64()).unwrap_or(f64::NAN);
    o.detail = format!("{}; mean spot value {spot:.7}", o.detail);
    lines.push((3, "moments", o));
    parts.push((mom, e));

    let (zt, e) = group(Group::ZeroTemperature);
    lines.push((4, "zero-temperature reduction", against(&zt, &[("single_mode_reduction", 1e-9)])));
    parts.push((zt, e));

    let (tv, e) = group(Group::ThermalVacuum);
    let o = against(&tv, &[("oracle_density", 1e-8), ("oracle_time_invariance", 1e-12), ("closed_time_invariance", 0.0), ("variance", 1e-10)]);
    lines.push((5, "thermal vacuum", o));
    parts.push((tv, e));

    let (ids, e) = group(Group::Identities);
    let mut o = against(&ids, &[("f3_unit_modulus", 1e-14), ("hermite_linearization", 1e-9), ("thermalize_evolve_commute", 1e-10), ("thermal_vacuum_fock_diagonal", 1e-10)]);
    o.pass &= ids.iter().any(|c| c.id == "f3_unit_modulus" && c.params["samples"] == 1000);
    lines.push((6, "algebraic identities", o));
    parts.push((ids, e));

    let (sc, errata) = group(Group::SpecialCases);
    let mut o = against(&sc, &[("n0_gaussian", 1e-10)]);
    match errata.iter().find(|e| e.id == "n1_quartic") {
        Some(q) if q.measured.is_finite() => {
            o.detail = format!("{}; n = 1 quartic shortcut {} (sup rel {:.2e}, recorded)", o.detail, if q.agrees { "agrees" } else { "disagrees" }, q.measured)
        }
        _ => {
            o.pass = false;
            o.detail.push_str("; n = 1 comparison missing");
        }
    }
    lines.push((7, "special cases", o));
    parts.push((sc, errata));

    // the in-process report and a fresh binary run must serialize identically
    let report = verify::assemble(Level::Full, parts);
    let text = report.to_json();
    let from_binary = binary(&["verify", "full"]);
    let density = ["density", "--state", "squeezed", "--n", "5", "--alpha", "1,0.5", "--z", "0.3,0.4", "--beta-hw", "0.5", "--omega-t", "0.7"];
    let (d1, d2) = (binary(&density), binary(&density));
    let pass = text.as_bytes() == from_binary.as_slice() && d1 == d2 && report.pass;
    let detail = format!("verify full: {} bytes, identical = {}; density: {} bytes, identical = {}", from_binary.len(), text.as_bytes() == from_binary.as_slice(), d1.len(), d1 == d2);
    lines.push((8, "determinism", Outcome { pass, detail }));

    let mut failed = 0;
    for (i, name, o) in &lines {
        println!("criterion {i} {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
