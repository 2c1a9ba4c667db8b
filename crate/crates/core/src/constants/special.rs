//! Gamma-family special functions and the trinomial coefficient.

use super::ConstantError;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 10_000;

/// `ln Γ(s)` for `s > 0` (Lanczos, g = 7).
pub fn ln_gamma(s: f64) -> f64 {
    if s < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * s).sin()).ln() - ln_gamma(1.0 - s);
    }
    let x = s - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn gamma(s: f64) -> f64 {
    if s.fract() == 0.0 && (1.0..=171.0).contains(&s) {
        return (1..s as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    ln_gamma(s).exp()
}

/// Lower incomplete gamma `γ(s, t) = ∫_0^t x^(s-1) e^(-x) dx`.
///
/// Power series below `t = s + 1`, otherwise `Γ(s)` minus the upper
/// continued fraction evaluated with the modified Lentz method.
pub fn lower_incomplete_gamma(s: f64, t: f64) -> Result<f64, ConstantError> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(ConstantError::Domain(format!("incomplete gamma needs s > 0, got {s}")));
    }
    if t.is_nan() || t < 0.0 {
        return Err(ConstantError::Domain(format!("incomplete gamma needs t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if t.is_infinite() {
        return Ok(gamma(s));
    }
    let prefactor = (s * t.ln() - t).exp();
    if t < s + 1.0 {
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut denom = s;
        for _ in 0..MAX_ITER {
            denom += 1.0;
            term *= t / denom;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                return Ok(sum * prefactor);
            }
        }
        Err(ConstantError::Convergence(format!("series for γ({s}, {t}) did not converge")))
    } else {
        let mut b = t + 1.0 - s;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=MAX_ITER {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < EPS {
                return Ok(gamma(s) - prefactor * h);
            }
        }
        Err(ConstantError::Convergence(format!("continued fraction for Γ({s}, {t}) did not converge")))
    }
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// `m! / (i! j! (m - i - j)!)`, exact for `m <= 60`.
pub fn trinomial(m: u32, i: u32, j: u32) -> Result<u128, ConstantError> {
    if i.checked_add(j).is_none_or(|s| s > m) {
        return Err(ConstantError::Domain(format!("trinomial({m}; {i}, {j}) needs i + j <= m")));
    }
    if m > 60 {
        return Err(ConstantError::Domain(format!("trinomial supports m <= 60, got {m}")));
    }
    Ok(binomial(m, i) * binomial(m - i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(5.0), 24.0);
        assert!(close(gamma(0.5), std::f64::consts::PI.sqrt(), 1e-14));
        assert!(close(gamma(2.5), 0.75 * std::f64::consts::PI.sqrt(), 1e-14));
        assert!(close(ln_gamma(30.5), gamma(30.5).ln(), 1e-14));
    }

    #[test]
    fn closed_forms() {
        assert!(close(lower_incomplete_gamma(1.0, 1.0).unwrap(), 1.0 - 1.0 / E, 1e-13));
        assert!(close(lower_incomplete_gamma(2.0, 1.0).unwrap(), 1.0 - 2.0 / E, 1e-13));
        assert!(close(lower_incomplete_gamma(3.0, 2.0).unwrap(), 2.0 * (1.0 - 5.0 * (-2.0f64).exp()), 1e-13));
        // both branches around the switch point
        assert!(close(lower_incomplete_gamma(2.0, 2.9).unwrap(), 1.0 - 3.9 * (-2.9f64).exp(), 1e-13));
        assert!(close(lower_incomplete_gamma(2.0, 3.1).unwrap(), 1.0 - 4.1 * (-3.1f64).exp(), 1e-13));
        assert!(close(lower_incomplete_gamma(3.0, 4.0).unwrap(), 2.0 - 26.0 * (-4.0f64).exp(), 1e-13));
        assert!(close(lower_incomplete_gamma(0.5, 40.0).unwrap(), std::f64::consts::PI.sqrt(), 1e-13));
        assert_eq!(lower_incomplete_gamma(2.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(lower_incomplete_gamma(0.0, 1.0).is_err());
        assert!(lower_incomplete_gamma(-1.0, 1.0).is_err());
        assert!(lower_incomplete_gamma(1.0, -0.1).is_err());
        assert!(lower_incomplete_gamma(1.0, f64::NAN).is_err());
        assert!(trinomial(3, 2, 2).is_err());
        assert!(trinomial(61, 1, 1).is_err());
    }

    #[test]
    fn trinomials() {
        assert_eq!(trinomial(2, 1, 1).unwrap(), 2);
        assert_eq!(trinomial(3, 1, 1).unwrap(), 6);
        assert_eq!(trinomial(5, 2, 2).unwrap(), 30);
        assert_eq!(trinomial(4, 0, 0).unwrap(), 1);
        // 60! / (20!)^3
        assert_eq!(trinomial(60, 20, 20).unwrap(), 577_831_214_478_475_823_831_865_900u128);
    }

    #[test]
    fn trinomials_sum_to_power_of_three() {
        for m in [1u32, 7, 20, 40] {
            let mut total = 0u128;
            for i in 0..=m {
                for j in 0..=(m - i) {
                    total += trinomial(m, i, j).unwrap();
                }
            }
            assert_eq!(total, 3u128.pow(m));
        }
    }
}
