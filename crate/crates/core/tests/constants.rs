use mdtree::constants::*;
use mdtree::experiments::{run_experiment, ExperimentConfig, ModelSpec};
use mdtree::generators::{OffspringPmf, PAParams};
use mdtree::verify::TABLE;

fn grid() -> Vec<PAParams> {
    TABLE.iter().map(|&(rho, chi, _, _)| PAParams::new(rho, chi).unwrap()).collect()
}

#[test]
fn conditional_pk_integrates_to_the_limit() {
    // c = p_leaf - ∫ (rho+chi) e^{-(rho+chi)x} P_K|x dx, integrated over
    // w = e^{-(rho+chi)x} with the Kronrod rule
    let spec = QuadratureSpec::default();
    for params in grid() {
        let a = params.rho() + f64::from(params.chi());
        let pk = gauss_kronrod(|w: f64| pk_given_x(params, -w.ln() / a).unwrap(), 0.0, 1.0, &spec).unwrap();
        let unmerged = p_leaf(params) - pk.value;
        let merged = c_general(params).unwrap().value;
        assert!((unmerged - merged).abs() < 1e-8, "{params:?}: {unmerged} vs {merged}");
    }
}

#[test]
fn rich_integrals_with_the_kronrod_rule() {
    let spec = QuadratureSpec::default();
    for rho in [0.1, 0.5, 1.0, 2.0, 7.0] {
        let a = rho + 1.0;
        let k = rho / a;
        let f1 = |x: f64| {
            let base = 1.0 + ((x + k * (1.0 - (-a * x).exp())).exp() - x.exp()) / rho;
            a * (-a * x).exp() * base.powf(-rho)
        };
        let f2 = |x: f64| a * (-a * x).exp() * (-rho * x + k * (1.0 - (-a * x).exp())).exp();
        // plain x-space on [0, 40], the tails beyond are below e^{-40 rho}
        let cut = 40.0 / rho.min(1.0);
        let i1 = gauss_kronrod(f1, 0.0, cut.min(300.0), &spec).unwrap();
        let i2 = gauss_kronrod(f2, 0.0, cut.min(300.0), &spec).unwrap();
        let tail = (-rho * cut.min(300.0)).exp();
        let c = c_rich(rho).unwrap().value;
        assert!((-1.0 + i1.value + i2.value - c).abs() < 1e-8 + tail, "rho {rho}");
    }
}

#[test]
fn halving_tolerances_stays_within_error_estimates() {
    let spec = QuadratureSpec::default();
    let pairs: Vec<(ConstantResult, ConstantResult)> =
        vec![(c_rrt_with(&spec).unwrap(), c_rrt_with(&spec.halved()).unwrap())]
            .into_iter()
            .chain(
                [0.1, 0.5, 1.0, 2.0]
                    .iter()
                    .map(|&rho| (c_rich_with(rho, &spec).unwrap(), c_rich_with(rho, &spec.halved()).unwrap())),
            )
            .chain(
                grid()
                    .into_iter()
                    .map(|p| (c_general_with(p, &spec).unwrap(), c_general_with(p, &spec.halved()).unwrap())),
            )
            .collect();
    for (a, b) in pairs {
        assert!((a.value - b.value).abs() <= a.abs_error_estimate.max(f64::EPSILON), "{a:?} vs {b:?}");
        assert!(a.abs_error_estimate >= 0.0 && a.abs_error_estimate <= 1e-8);
        assert!(a.value > 0.0 && a.value < 1.0);
    }
}

#[test]
fn rich_constants_decrease_along_the_grid() {
    let values: Vec<f64> = [0.1, 0.5, 1.0, 2.0].iter().map(|&r| c_rich(r).unwrap().value).collect();
    println!("c_rich at rho 0.1, 0.5, 1, 2: {values:?}");
    assert!(values.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn mary_matches_general_for_larger_m() {
    for m in [6u32, 8, 12] {
        let a = c_mary(m).unwrap().value;
        let b = c_general(PAParams::new(f64::from(m), -1).unwrap()).unwrap().value;
        assert!((a - b).abs() < 1e-9, "m {m}");
    }
}

#[test]
fn gw_constants_by_monte_carlo() {
    for (pmf, exact, n) in [
        (OffspringPmf::new(vec![0.5, 0.0, 0.5]).unwrap(), 0.125, 2001),
        (OffspringPmf::geometric(60).unwrap(), 4.0 / 15.0, 2000),
    ] {
        assert!((c_gw(&pmf).unwrap().value - exact).abs() < 1e-12);
        let s = run_experiment(&ExperimentConfig::new(ModelSpec::Gw(pmf), n, 300, 41)).unwrap();
        assert!((s.mean - exact).abs() < 0.005, "{} vs {exact}", s.mean);
    }
}

#[test]
fn incomplete_gamma_against_quadrature() {
    let spec = QuadratureSpec::default();
    for (s, t) in [(1.5, 3.0), (2.5, 1.2), (4.0, 2.6667), (6.0, 7.5), (0.7, 0.3)] {
        let direct = gauss_kronrod(|x: f64| x.powf(s - 1.0) * (-x).exp(), 0.0, t, &spec).unwrap().value;
        let g = lower_incomplete_gamma(s, t).unwrap();
        assert!((direct - g).abs() <= 1e-9 * g, "γ({s}, {t}): {g} vs {direct}");
    }
}
