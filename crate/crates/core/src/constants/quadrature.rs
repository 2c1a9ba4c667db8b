//! Adaptive quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::ConstantError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_depth: 60 }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_depth: u32) -> Result<Self, ConstantError> {
        if !(rel_tol > 0.0 && rel_tol.is_finite()) || !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(ConstantError::Domain(format!(
                "quadrature tolerances must be positive, got rel {rel_tol}, abs {abs_tol}"
            )));
        }
        if max_depth < 10 {
            return Err(ConstantError::Domain(format!("quadrature depth must be at least 10, got {max_depth}")));
        }
        Ok(Self { rel_tol, abs_tol, max_depth })
    }

    /// Both tolerances halved, depth unchanged.
    pub fn halved(&self) -> Self {
        Self { rel_tol: self.rel_tol / 2.0, abs_tol: self.abs_tol / 2.0, max_depth: self.max_depth }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
}

const INITIAL_PANELS: usize = 8;

/// Adaptive Simpson with Richardson correction. Each panel is bisected
/// until its two-level difference is within `15 * eps`, with `eps` halved
/// at every level; panels reaching `max_depth` are accepted as they are and
/// their difference is still charged to the error estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral, ConstantError> {
    check_interval(a, b)?;
    let width = (b - a) / INITIAL_PANELS as f64;
    let panels: Vec<(f64, f64, f64, f64, f64, f64)> = (0..INITIAL_PANELS)
        .map(|k| {
            let lo = a + width * k as f64;
            let hi = if k + 1 == INITIAL_PANELS { b } else { lo + width };
            let mid = 0.5 * (lo + hi);
            let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
            (lo, hi, flo, fmid, fhi, simpson(lo, hi, flo, fmid, fhi))
        })
        .collect();
    let rough: f64 = panels.iter().map(|p| p.5).sum();
    let eps = spec.abs_tol.max(spec.rel_tol * rough.abs()) / INITIAL_PANELS as f64;
    let mut out = Integral { value: 0.0, abs_error: 0.0 };
    for (lo, hi, flo, fmid, fhi, whole) in panels {
        let part = simpson_step(&f, lo, hi, flo, fmid, fhi, whole, eps, spec.max_depth)?;
        out.value += part.value;
        out.abs_error += part.abs_error;
    }
    finite(out)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<Integral, ConstantError> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(ConstantError::Convergence(format!("non-finite integrand on [{a}, {b}]")));
    }
    if depth == 0 || delta.abs() <= 15.0 * eps || m <= a || m >= b {
        return Ok(Integral { value: left + right + delta / 15.0, abs_error: delta.abs() / 15.0 });
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)?;
    Ok(Integral { value: l.value + r.value, abs_error: l.abs_error + r.abs_error })
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let x = h * XGK[k];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    Panel { a, b, value: kronrod * h, error: ((kronrod - gauss) * h).abs(), depth }
}

const MAX_PANELS: usize = 20_000;

/// Globally adaptive 7/15-point Gauss-Kronrod: the panel with the largest
/// error is bisected until the summed error meets the tolerance. The
/// Kronrod-Gauss difference is used unscaled as the error.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral, ConstantError> {
    check_interval(a, b)?;
    let mut heap = BinaryHeap::from([kronrod_panel(&f, a, b, 0)]);
    let mut frozen = Integral { value: 0.0, abs_error: 0.0 };
    loop {
        let (value, error) = heap.iter().fold((frozen.value, frozen.abs_error), |(v, e), p| (v + p.value, e + p.error));
        if !value.is_finite() {
            return Err(ConstantError::Convergence(format!("non-finite integrand on [{a}, {b}]")));
        }
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target || heap.len() >= MAX_PANELS {
            return finite(Integral { value, abs_error: error });
        }
        let Some(worst) = heap.pop() else {
            return finite(Integral { value, abs_error: error });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= spec.max_depth || mid <= worst.a || mid >= worst.b {
            frozen.value += worst.value;
            frozen.abs_error += worst.error;
            continue;
        }
        heap.push(kronrod_panel(&f, worst.a, mid, worst.depth + 1));
        heap.push(kronrod_panel(&f, mid, worst.b, worst.depth + 1));
    }
}

fn check_interval(a: f64, b: f64) -> Result<(), ConstantError> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(ConstantError::Domain(format!("quadrature needs a finite interval a < b, got [{a}, {b}]")))
    }
}

fn finite(i: Integral) -> Result<Integral, ConstantError> {
    if i.value.is_finite() && i.abs_error.is_finite() {
        Ok(i)
    } else {
        Err(ConstantError::Convergence("quadrature produced a non-finite value".into()))
    }
}
