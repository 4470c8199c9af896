use thermofield::densities::density;
use thermofield::fock::{CutoffPolicy, OracleOptions, ThermalizedOracle};
use thermofield::model::{Displacement, OscillatorParams, Squeeze, StateSpec, ThermalParams};
use thermofield::special_fn::gauss_hermite_rule;

fn squeezed(n: usize, a: (f64, f64), z: (f64, f64)) -> StateSpec<f64> {
    StateSpec::squeezed(Displacement::new(a.0, a.1).unwrap(), Squeeze::new(z.0, z.1).unwrap(), n)
}

#[test]
fn marginal_integrates_to_retained_norm() {
    let p = OscillatorParams::default();
    for (s, b) in [(squeezed(2, (1.0, 0.5), (0.3, 0.4)), 1.0), (squeezed(1, (0.0, 1.0), (0.5, 0.0)), 0.5)] {
        let o = ThermalizedOracle::build(&s, &ThermalParams::new(b).unwrap(), &OracleOptions::default()).unwrap();
        // every term is a polynomial of degree ≤ 2N times e^{-x²}
        let rule = gauss_hermite_rule::<f64>(o.cutoff + 2).unwrap();
        let xs = rule.line_points(0.0, 1.0);
        for wt in [0.0, 0.7] {
            let integral = rule.sum_line(1.0, &o.densities(&xs, &p, wt));
            assert!((integral - o.vector.norm_sqr()).abs() < 1e-9, "{integral}");
            assert!((integral - 1.0).abs() < 1e-9 + o.vector.norm_deficit());
        }
    }
}

#[test]
fn doubling_the_accepted_cutoff_changes_densities_little() {
    let p = OscillatorParams::default();
    for (s, b) in [(squeezed(5, (1.0, 0.5), (0.3, 0.4)), 1.0), (squeezed(2, (1.0, 0.0), (0.5, 0.0)), 0.5), (squeezed(5, (0.0, 0.0), (0.5, 0.0)), 2.0)] {
        let th = ThermalParams::new(b).unwrap();
        let o = ThermalizedOracle::build(&s, &th, &OracleOptions::default()).unwrap();
        let big = ThermalizedOracle::build(&s, &th, &OracleOptions { cutoff: CutoffPolicy::Fixed(2 * o.cutoff), ..OracleOptions::default() }).unwrap();
        let xs: Vec<f64> = (0..=48).map(|i| -6.0 + 0.25 * i as f64).collect();
        for wt in [0.0, 0.7] {
            let (a, c) = (o.densities(&xs, &p, wt), big.densities(&xs, &p, wt));
            let change = a.iter().zip(&c).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(change < 1e-8, "cutoff {}: {change}", o.cutoff);
            for (&x, &v) in xs.iter().zip(&a) {
                assert!((v - density(&s, x, &th, &p, wt).unwrap()).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn accepted_cutoff_respects_the_edge_ceiling() {
    let th = ThermalParams::new(0.5).unwrap();
    let opts = OracleOptions::default();
    let o = ThermalizedOracle::build(&squeezed(5, (1.0, 0.5), (0.5, 0.0)), &th, &opts).unwrap();
    assert!(o.deficit < opts.deficit_ceiling);
    assert!(o.cutoff <= thermofield::fock::MAX_CUTOFF);
}
