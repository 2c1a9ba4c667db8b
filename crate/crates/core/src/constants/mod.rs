//! Limiting constants of `β(T_n)/n` and the analytic pieces they are built from.

mod fringe_terms;
mod quadrature;
mod special;

use std::f64::consts::E;

use thiserror::Error;

use crate::generators::{GeneratorError, OffspringPmf, PAParams};

pub use fringe_terms::{h_tail, p_leaf, pk_given_x, q_line_prob, root_degree_p1, root_degree_pgf};
pub use quadrature::{adaptive_simpson, gauss_kronrod, Integral, QuadratureSpec};
pub use special::{gamma, ln_gamma, lower_incomplete_gamma, trinomial};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid offspring distribution: {0}")]
    InvalidPmf(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("evaluation routes disagree: {first} vs {second}")]
    Inconsistent { first: f64, second: f64 },
}

impl From<GeneratorError> for ConstantError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::InvalidPmf(m) => ConstantError::InvalidPmf(m),
            other => ConstantError::Domain(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Series,
    Quadrature,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Series => "series",
            Method::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub method: Method,
}

// relative accuracy assumed for each special-function evaluation
const SPECIAL_REL_ERR: f64 = 1e-13;

/// Limit for a critical Galton-Watson tree:
/// `p0 - 1 + G(1 - q) + p1 q` with `q = p0 / (1 - p1)`.
pub fn c_gw(pmf: &OffspringPmf) -> Result<ConstantResult, ConstantError> {
    pmf.require_critical()?;
    let (p0, p1) = (pmf.p(0), pmf.p(1));
    if p0 <= 0.0 || p1 >= 1.0 {
        return Err(ConstantError::InvalidPmf(format!("need p0 > 0 and p1 < 1, got p0 = {p0}, p1 = {p1}")));
    }
    let q = p0 / (1.0 - p1);
    let value = p0 - 1.0 + pmf.pgf(1.0 - q) + p1 * q;
    let abs_error_estimate = f64::EPSILON * (4.0 + pmf.max_offspring() as f64);
    Ok(ConstantResult { value, abs_error_estimate, method: Method::ClosedForm })
}

/// Coefficient of `γ((i+j)/(m-1) + 1, im/(m-1))` in the m-ary limit.
fn mary_coefficient(m: u32, i: u32, j: u32) -> Result<f64, ConstantError> {
    let mf = f64::from(m);
    let t = f64::from(i) * mf / (mf - 1.0);
    let power = f64::from(i + j) / (mf - 1.0) + 1.0;
    let tail = t.exp() * (1.0 / t).powf(power);
    if i == 1 && j == m - 1 {
        // the leaf integral merges into this term
        return Ok((1.0 - mf / mf.powi(m as i32)) * tail);
    }
    let sign = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * trinomial(m, i, j)? as f64 / mf.powi((i + j) as i32) * tail)
}

/// Limit for m-ary increasing trees (`rho = m`, `chi = -1`).
pub fn c_mary(m: u32) -> Result<ConstantResult, ConstantError> {
    if !(2..=60).contains(&m) {
        return Err(ConstantError::Domain(format!("m-ary constant needs 2 <= m <= 60, got {m}")));
    }
    let mf = f64::from(m);
    let mut value = 0.0;
    let mut magnitude = 0.0;
    for j in 1..=m {
        let term = (mf - 1.0) / ((mf - 1.0 + f64::from(j)) * mf.powi(j as i32)) * trinomial(m, j, 0)? as f64;
        value += term;
        magnitude += term.abs();
    }
    for i in 1..=m {
        for j in 0..=(m - i) {
            let s = f64::from(i + j) / (mf - 1.0) + 1.0;
            let t = f64::from(i) * mf / (mf - 1.0);
            let term = mary_coefficient(m, i, j)? * lower_incomplete_gamma(s, t)?;
            value += term;
            magnitude += term.abs();
        }
    }
    Ok(ConstantResult { value, abs_error_estimate: magnitude * SPECIAL_REL_ERR, method: Method::ClosedForm })
}

pub fn c_rrt() -> Result<ConstantResult, ConstantError> {
    c_rrt_with(&QuadratureSpec::default())
}

/// `e (∫_1^e e^{-x}/x dx + γ(2,1)) - 1`.
pub fn c_rrt_with(spec: &QuadratureSpec) -> Result<ConstantResult, ConstantError> {
    let integral = adaptive_simpson(|x| (-x).exp() / x, 1.0, E, spec)?;
    let g = lower_incomplete_gamma(2.0, 1.0)?;
    let value = E * (integral.value + g) - 1.0;
    let abs_error_estimate = E * (integral.abs_error + g * SPECIAL_REL_ERR);
    Ok(ConstantResult { value, abs_error_estimate, method: Method::Quadrature })
}

/// RRT limit from the unsimplified form `∫_0^1 e^{1 - e^{1-u}} du + e γ(2,1) - 1`.
fn c_rrt_unit_interval(spec: &QuadratureSpec) -> Result<ConstantResult, ConstantError> {
    let integral = adaptive_simpson(|u| (1.0 - (1.0 - u).exp()).exp(), 0.0, 1.0, spec)?;
    let g = lower_incomplete_gamma(2.0, 1.0)?;
    let value = integral.value + E * g - 1.0;
    Ok(ConstantResult {
        value,
        abs_error_estimate: integral.abs_error + E * g * SPECIAL_REL_ERR,
        method: Method::Quadrature,
    })
}

pub fn c_rich(rho: f64) -> Result<ConstantResult, ConstantError> {
    c_rich_with(rho, &QuadratureSpec::default())
}

/// The two integrals of the rich-get-richer limit, `c = -1 + I1 + I2`.
pub fn rich_integrals(rho: f64, spec: &QuadratureSpec) -> Result<(Integral, Integral), ConstantError> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(ConstantError::Domain(format!("rho must be positive, got {rho}")));
    }
    let a = rho + 1.0;
    let k = rho / a;
    // u = 1 - e^{-(rho+1)x}; the density (rho+1)e^{-(rho+1)x} dx becomes du
    let x_of = move |u: f64| -(-u).ln_1p() / a;
    let first = move |u: f64| {
        let x = x_of(u);
        if !x.is_finite() {
            return 0.0;
        }
        let bump = (k * u).exp_m1();
        // log of 1 + (e^{x + k u} - e^x) / rho, kept finite for large x
        let log_base = x + ((-x).exp() + bump / rho).ln();
        (-rho * log_base).exp()
    };
    let second = move |u: f64| {
        let x = x_of(u);
        if !x.is_finite() {
            return 0.0;
        }
        (-rho * x + k * u).exp()
    };
    Ok((adaptive_simpson(first, 0.0, 1.0, spec)?, adaptive_simpson(second, 0.0, 1.0, spec)?))
}

pub fn c_rich_with(rho: f64, spec: &QuadratureSpec) -> Result<ConstantResult, ConstantError> {
    let (i1, i2) = rich_integrals(rho, spec)?;
    Ok(ConstantResult {
        value: -1.0 + i1.value + i2.value,
        abs_error_estimate: i1.abs_error + i2.abs_error,
        method: Method::Quadrature,
    })
}

pub fn c_general(params: PAParams) -> Result<ConstantResult, ConstantError> {
    c_general_with(params, &QuadratureSpec::default())
}

const CROSS_CHECK_TOL: f64 = 1e-8;

/// Limit for general linear preferential attachment. `chi = 0` is handled
/// only at `rho = 1`; `chi = -1` results are checked against `c_mary`.
pub fn c_general_with(params: PAParams, spec: &QuadratureSpec) -> Result<ConstantResult, ConstantError> {
    let (rho, chi) = (params.rho(), params.chi());
    match chi {
        0 if rho != 1.0 => Err(ConstantError::Unsupported(format!("chi = 0 is evaluated only at rho = 1, got {rho}"))),
        0 => c_rrt_unit_interval(spec),
        -1 if rho == 1.0 => Err(ConstantError::Unsupported("(1, -1) grows a path; the limit is 0".into())),
        _ => {
            let result = general_quadrature(rho, f64::from(chi), spec)?;
            if chi == -1 && rho <= 60.0 {
                let mary = c_mary(rho as u32)?;
                if (mary.value - result.value).abs() > CROSS_CHECK_TOL {
                    return Err(ConstantError::Inconsistent { first: result.value, second: mary.value });
                }
            }
            Ok(result)
        }
    }
}

/// `-1 + ∫ f1 + ∫ f2` over `w = e^{-(rho+chi)x} ∈ (0, 1]`.
fn general_quadrature(rho: f64, chi: f64, spec: &QuadratureSpec) -> Result<ConstantResult, ConstantError> {
    let a = rho + chi;
    let k = rho / a;
    let first = move |w: f64| {
        let bump = (k * (1.0 - w)).exp_m1();
        if chi > 0.0 {
            // (1 + w^{-1/a} bump/rho)^{-rho} = w^{rho/a} (w^{1/a} + bump/rho)^{-rho}
            w.powf(rho / a) * (w.powf(1.0 / a) + bump / rho).powf(-rho)
        } else {
            (1.0 - w.powf(1.0 / a) * bump / rho).powf(rho)
        }
    };
    let second = move |w: f64| w.powf(rho / a) * (k * (1.0 - w)).exp();
    let i1 = adaptive_simpson(first, 0.0, 1.0, spec)?;
    let i2 = adaptive_simpson(second, 0.0, 1.0, spec)?;
    Ok(ConstantResult {
        value: -1.0 + i1.value + i2.value,
        abs_error_estimate: i1.abs_error + i2.abs_error,
        method: Method::Quadrature,
    })
}
