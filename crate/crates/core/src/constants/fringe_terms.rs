//! Conditional probabilities for the fringe of a CMJ tree stopped at an
//! exponential time: the root has age `x`, its children are born by the
//! attachment rates, and each child subtree is a line with probability `q`.

use crate::generators::PAParams;

use super::ConstantError;

fn check(params: PAParams, x: f64) -> Result<(f64, f64), ConstantError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(ConstantError::Domain(format!("age x must be positive and finite, got {x}")));
    }
    if params.chi() == 0 && params.rho() != 1.0 {
        return Err(ConstantError::Unsupported(format!(
            "chi = 0 is handled only at rho = 1, got rho = {}",
            params.rho()
        )));
    }
    Ok((params.rho(), f64::from(params.chi())))
}

/// Probability that the subtree of a uniformly chosen child of a root aged
/// `x` is still a line.
pub fn q_line_prob(params: PAParams, x: f64) -> Result<f64, ConstantError> {
    let (rho, chi) = check(params, x)?;
    let a = rho + chi;
    let bump = ((rho / a) * -(-a * x).exp_m1()).exp_m1();
    if chi == 0.0 {
        return Ok(bump / x);
    }
    // e^{chi x} bump / (rho (e^{chi x} - 1) / chi)
    Ok(chi * bump / (rho * -(-chi * x).exp_m1()))
}

/// PGF of the root's child count at age `x`, evaluated at `z`.
pub fn root_degree_pgf(params: PAParams, x: f64, z: f64) -> Result<f64, ConstantError> {
    let (rho, chi) = check(params, x)?;
    if chi == 0.0 {
        return Ok((-rho * x * (1.0 - z)).exp());
    }
    // (e^{chi x} + (1 - e^{chi x}) z)^{-rho/chi} = (1 + (1 - z)(e^{chi x} - 1))^{-rho/chi}
    let s = 1.0 - z;
    let log_base =
        if chi > 0.0 && x > 30.0 { x + (s + (1.0 - s) * (-x).exp()).ln() } else { (s * (chi * x).exp_m1()).ln_1p() };
    Ok((-rho / chi * log_base).exp())
}

/// Probability that the root has exactly one child at age `x`.
pub fn root_degree_p1(params: PAParams, x: f64) -> Result<f64, ConstantError> {
    let (rho, chi) = check(params, x)?;
    if chi == 0.0 {
        return Ok(rho * x * (-rho * x).exp());
    }
    if chi > 0.0 {
        Ok(rho / chi * -(-chi * x).exp_m1() * (-rho * x).exp())
    } else {
        Ok(rho / chi * (chi * x).exp_m1() * (-x * (rho + chi)).exp())
    }
}

/// Probability that a root aged `x` has at least two children and at least
/// one of them heads a line.
pub fn pk_given_x(params: PAParams, x: f64) -> Result<f64, ConstantError> {
    let q = q_line_prob(params, x)?;
    let g = root_degree_pgf(params, x, 1.0 - q)?;
    let p1 = root_degree_p1(params, x)?;
    Ok(1.0 - g - q * p1)
}

/// Probability that the fringe tree is a single vertex.
pub fn p_leaf(params: PAParams) -> f64 {
    let (rho, chi) = (params.rho(), f64::from(params.chi()));
    (rho + chi) / (2.0 * rho + chi)
}

/// `P(H > t)` for the race variable with base rate `lambda` and decay `nu`.
pub fn h_tail(lambda: f64, nu: f64, t: f64) -> Result<f64, ConstantError> {
    if !(lambda > 0.0 && lambda.is_finite() && nu > 0.0 && nu.is_finite()) {
        return Err(ConstantError::Domain(format!("rates must be positive, got lambda {lambda}, nu {nu}")));
    }
    if t.is_nan() || t < 0.0 {
        return Err(ConstantError::Domain(format!("t must be nonnegative, got {t}")));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    Ok((-lambda * t - lambda / nu * (-nu * t).exp_m1()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_examples() {
        let rrt = PAParams::RRT;
        let expected = (1.0 - (-1.0f64).exp()).exp() - 1.0;
        assert!((q_line_prob(rrt, 1.0).unwrap() - expected).abs() < 1e-14);
        for p in [PAParams::RRT, PAParams::PLPA, PAParams::BST] {
            assert!((q_line_prob(p, 1e-9).unwrap() - 1.0).abs() < 1e-6);
            let q = q_line_prob(p, 800.0).unwrap();
            assert!(q.is_finite() && (0.0..=1.0).contains(&q));
        }
        assert!(q_line_prob(rrt, 0.0).is_err());
        assert!(q_line_prob(PAParams::new(2.0, 0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn pk_examples() {
        let rrt = PAParams::RRT;
        let e = std::f64::consts::E;
        let hand = 1.0 - (1.0 - (1.0 - 1.0 / e).exp()).exp() - (-1.0 / e).exp() + 1.0 / e;
        let pk = pk_given_x(rrt, 1.0).unwrap();
        assert!((pk - hand).abs() < 1e-14);
        assert!((pk - 0.2615575).abs() < 1e-7);
        for p in [PAParams::RRT, PAParams::PLPA, PAParams::BST] {
            assert!(pk_given_x(p, 1e-9).unwrap().abs() < 1e-6);
            let far = pk_given_x(p, 900.0).unwrap();
            assert!(far.is_finite());
        }
    }

    #[test]
    fn root_degree_law() {
        // chi = -1: Binomial(rho, 1 - e^{-x})
        let bst = PAParams::BST;
        let x = 0.7f64;
        let s = 1.0 - (-x).exp();
        let z = 0.3;
        let binom = (1.0 - s + s * z).powi(2);
        assert!((root_degree_pgf(bst, x, z).unwrap() - binom).abs() < 1e-14);
        assert!((root_degree_p1(bst, x).unwrap() - 2.0 * s * (1.0 - s)).abs() < 1e-14);
        // chi = 1: NegBin(rho, e^{-x}) has P(1) = rho e^{-rho x}(1 - e^{-x})
        let p = PAParams::new(2.0, 1).unwrap();
        let nb = 2.0 * (-2.0 * x).exp() * s;
        assert!((root_degree_p1(p, x).unwrap() - nb).abs() < 1e-14);
        assert!((root_degree_pgf(p, x, 1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn leaf_and_tail() {
        assert!((p_leaf(PAParams::BST) - 1.0 / 3.0).abs() < 1e-15);
        assert!((p_leaf(PAParams::RRT) - 0.5).abs() < 1e-15);
        assert_eq!(h_tail(1.0, 1.0, 0.0).unwrap(), 1.0);
        assert!((h_tail(1.0, 1.0, 1.0).unwrap() - (-(-1.0f64).exp()).exp()).abs() < 1e-15);
        let t = 40.0;
        assert!((h_tail(1.0, 1.0, t).unwrap() / (1.0 - t).exp() - 1.0).abs() < 1e-12);
        assert!(h_tail(0.0, 1.0, 1.0).is_err());
        assert!(h_tail(1.0, 1.0, -1.0).is_err());
    }
}
