//! Generalized translation on (-1, 1).
//!
//! The asymmetric operator in its algebraic form is
//!
//! ```text
//! tau_y(f, x) = 4 / (pi (1-x^2) (1+y)^2) * int B_y(x, z, R) f(R) dz / sqrt(1-z^2),
//! R = x y - z sqrt(1-x^2) sqrt(1-y^2),
//! ```
//!
//! and in angular form T_t(f, x) = tau_{cos t}(f, x). Functions that declare
//! singular points get the z-integral split where R crosses them, so kinks do
//! not cost accuracy.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::function::FunctionHandle;
use crate::jacobi::{d_handle, jacobi_eval, DOperatorParams};
use crate::quadrature::{chebyshev_split, gauss_legendre};
use crate::space::{validate_params, Admissibility, SpaceParams, WeightedNorm, DEFAULT_NORM_NODES, INTERIOR_MARGIN};

pub const DEFAULT_QUAD_N: usize = 128;
pub const MIN_QUAD_N: usize = 8;
pub const DEFAULT_T_POINTS: usize = 16;

/// Abscissae at which tau_y(P_n, x) / P_n(x) is sampled for psi_n(y).
pub const REFERENCE_ABSCISSAE: [f64; 3] = [0.15, 0.35, 0.55];
/// Reference points where |P_n| falls below this are skipped.
pub const REFERENCE_FLOOR: f64 = 1e-3;

/// Translation parameter in either form, y = cos t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationParams {
    y: f64,
    t: Option<f64>,
    quad_n: usize,
}

impl TranslationParams {
    pub fn from_y(y: f64, quad_n: usize) -> Result<Self> {
        check_y(y)?;
        check_quad(quad_n)?;
        Ok(Self { y, t: None, quad_n })
    }

    pub fn from_t(t: f64, quad_n: usize) -> Result<Self> {
        check_t(t)?;
        check_quad(quad_n)?;
        Ok(Self { y: t.cos(), t: Some(t), quad_n })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn t(&self) -> Option<f64> {
        self.t
    }

    pub fn quad_n(&self) -> usize {
        self.quad_n
    }

    pub fn apply(&self, f: &FunctionHandle, x: f64) -> Result<f64> {
        match self.t {
            Some(t) => asym_translate_t(f, t, x, self.quad_n),
            None => asym_translate(f, self.y, x, self.quad_n),
        }
    }
}

fn check_y(y: f64) -> Result<()> {
    if !(y > -1.0 && y <= 1.0) {
        return invalid(format!("y = {y} outside (-1, 1]"));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t.abs() < std::f64::consts::PI) {
        return invalid(format!("t = {t} outside (-pi, pi)"));
    }
    Ok(())
}

fn check_quad(quad_n: usize) -> Result<()> {
    if quad_n < MIN_QUAD_N {
        return invalid(format!("quad_n = {quad_n} below {MIN_QUAD_N}"));
    }
    Ok(())
}

fn check_interior(x: f64) -> Result<()> {
    if !(x.abs() <= 1.0 - INTERIOR_MARGIN) {
        return invalid(format!("x = {x} outside the interior margin"));
    }
    Ok(())
}

fn one_minus_sq(x: f64) -> f64 {
    (1.0 - x) * (1.0 + x)
}

fn co(x: f64) -> f64 {
    one_minus_sq(x).max(0.0).sqrt()
}

/// R = c x - z sx s with sx = sqrt(1-x^2), clamped to [-1, 1] against rounding.
fn r_value(x: f64, sx: f64, z: f64, c: f64, s: f64) -> f64 {
    (x * c - z * sx * s).clamp(-1.0, 1.0)
}

fn b_value(x: f64, sx: f64, z: f64, r: f64, c: f64, s: f64) -> f64 {
    let bracket = sx * c + z * x * s + sx * (1.0 - c) * one_minus_sq(z);
    2.0 * bracket * bracket - one_minus_sq(r)
}

pub fn compute_r(x: f64, z: f64, y: f64) -> f64 {
    r_value(x, co(x), z, y, co(y))
}

pub fn kernel_b(x: f64, z: f64, y: f64) -> f64 {
    let (sx, sy) = (co(x), co(y));
    b_value(x, sx, z, r_value(x, sx, z, y, sy), y, sy)
}

/// int g(z, R) dz / sqrt(1-z^2), with angular panels split where R meets a
/// singular point of f. Summed in ascending z.
fn chebyshev_integral(
    f: &FunctionHandle,
    x: f64,
    c: f64,
    s: f64,
    quad_n: usize,
    mut g: impl FnMut(f64, f64) -> Result<f64>,
) -> Result<f64> {
    let sx = co(x);
    let scale = sx * s;
    let cuts: Vec<f64> = if scale.abs() > 0.0 {
        f.interior_singular_points().map(|b| (x * c - b) / scale).filter(|z| z.abs() < 1.0).collect()
    } else {
        Vec::new()
    };
    let rule = chebyshev_split(quad_n, &cuts)?;
    let mut acc = 0.0;
    for (z, w) in rule.iter() {
        acc += w * g(z, r_value(x, sx, z, c, s))?;
    }
    Ok(acc)
}

fn translate_core(f: &FunctionHandle, x: f64, c: f64, s: f64, quad_n: usize) -> Result<f64> {
    let sx = co(x);
    chebyshev_integral(f, x, c, s, quad_n, |z, r| Ok(b_value(x, sx, z, r, c, s) * f.try_eval(r)?))
}

/// tau_y(f, x) for y in (-1, 1] and |x| <= 1 - 1e-6.
pub fn asym_translate(f: &FunctionHandle, y: f64, x: f64, quad_n: usize) -> Result<f64> {
    check_y(y)?;
    check_quad(quad_n)?;
    check_interior(x)?;
    let integral = translate_core(f, x, y, co(y), quad_n)?;
    let pre = 4.0 / (std::f64::consts::PI * one_minus_sq(x) * (1.0 + y) * (1.0 + y));
    finite(x, pre * integral)
}

/// T_t(f, x), the same operator with y = cos t and prefactor
/// 1 / (pi (1-x^2) cos^4(t/2)). The sign of t is kept in sin t.
pub fn asym_translate_t(f: &FunctionHandle, t: f64, x: f64, quad_n: usize) -> Result<f64> {
    check_t(t)?;
    check_quad(quad_n)?;
    check_interior(x)?;
    let integral = translate_core(f, x, t.cos(), t.sin(), quad_n)?;
    let pre = 1.0 / (std::f64::consts::PI * one_minus_sq(x) * (0.5 * t).cos().powi(4));
    finite(x, pre * integral)
}

/// Symmetric companion (8 / (3 pi)) int (1-z^2)^2 f(R) dz / sqrt(1-z^2).
pub fn sym_translate(f: &FunctionHandle, y: f64, x: f64, quad_n: usize) -> Result<f64> {
    if !(x.abs() <= 1.0 && y.abs() <= 1.0) {
        return invalid(format!("(x, y) = ({x}, {y}) outside [-1, 1]^2"));
    }
    check_quad(quad_n)?;
    let integral = chebyshev_integral(f, x, y, co(y), quad_n, |z, r| {
        let w = one_minus_sq(z);
        Ok(w * w * f.try_eval(r)?)
    })?;
    finite(x, 8.0 / (3.0 * std::f64::consts::PI) * integral)
}

fn finite(x: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation { x, value })
    }
}

/// Points where x -> T_t(f, x) may fail to be smooth: cos(theta_b +- t) for
/// every singular point b = cos(theta_b) of f, endpoints included.
pub fn translated_breakpoints(f: &FunctionHandle, t: f64) -> Vec<f64> {
    let beta = t.abs();
    let mut out = Vec::new();
    if beta == 0.0 {
        return out;
    }
    for &b in f.singular_points() {
        let theta = b.clamp(-1.0, 1.0).acos();
        out.push((theta + beta).cos());
        out.push((theta - beta).cos());
    }
    out.retain(|p| p.abs() < 1.0 - 1e-12);
    out
}

/// Pull x into the interior margin. Quadrature panels ending at a
/// breakpoint close to +-1 can place nodes beyond it, where the weight is
/// already below 1e-11.
fn to_margin(x: f64) -> f64 {
    x.clamp(-1.0 + INTERIOR_MARGIN, 1.0 - INTERIOR_MARGIN)
}

/// x -> T_t(f, x) as a handle carrying its breakpoints. Failed evaluations
/// surface as NaN, which `try_eval` reports.
pub fn translated(f: &FunctionHandle, t: f64, quad_n: usize) -> Result<FunctionHandle> {
    check_t(t)?;
    check_quad(quad_n)?;
    let g = f.clone();
    let breaks = translated_breakpoints(f, t);
    Ok(FunctionHandle::new(format!("T[{}]", f.label()), move |x| {
        asym_translate_t(&g, t, to_margin(x), quad_n).unwrap_or(f64::NAN)
    })
    .with_singular_points(breaks))
}

/// T_t f - f with the union of breakpoints of both terms.
pub fn translation_difference(f: &FunctionHandle, t: f64, quad_n: usize) -> Result<FunctionHandle> {
    let tf = translated(f, t, quad_n)?;
    Ok(tf.sub(f).with_singular_points(f.singular_points().iter().copied()))
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// psi_n(y) = tau_y(P_n, x) / P_n(x), the second factor of the product
/// formula, as the median over the reference abscissae.
pub fn multiplier_psi(n: usize, y: f64, quad_n: usize) -> Result<f64> {
    check_y(y)?;
    let pn = jacobi_handle(n);
    let mut ratios = Vec::with_capacity(REFERENCE_ABSCISSAE.len());
    for &x in &REFERENCE_ABSCISSAE {
        let px = jacobi_eval(n, 2.0, 2.0, x)?;
        if px.abs() < REFERENCE_FLOOR {
            continue;
        }
        ratios.push(asym_translate(&pn, y, x, quad_n)? / px);
    }
    if ratios.is_empty() {
        return Err(Error::DegenerateReference { degree: n });
    }
    Ok(median(&mut ratios))
}

/// Normalized P_n^{(2,2)} as a function handle.
pub fn jacobi_handle(n: usize) -> FunctionHandle {
    FunctionHandle::new(format!("P{n}"), move |x| jacobi_eval(n, 2.0, 2.0, x).unwrap_or(f64::NAN))
        .with_parity(if n % 2 == 0 { crate::Parity::Even } else { crate::Parity::Odd })
}

/// psi_n(y) for n = 0..=max_degree on a grid of y values.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MultiplierTable {
    pub ys: Vec<f64>,
    /// `values[n][j]` is psi_n(ys[j]).
    pub values: Vec<Vec<f64>>,
    pub reference: Vec<f64>,
    pub quad_n: usize,
}

impl MultiplierTable {
    pub fn compute(max_degree: usize, ys: &[f64], quad_n: usize) -> Result<Self> {
        let values = (0..=max_degree)
            .map(|n| ys.iter().map(|&y| multiplier_psi(n, y, quad_n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ys: ys.to_vec(), values, reference: REFERENCE_ABSCISSAE.to_vec(), quad_n })
    }

    pub fn get(&self, n: usize, j: usize) -> Option<f64> {
        self.values.get(n)?.get(j).copied()
    }
}

/// Resolution knobs for moduli of smoothness.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ModulusConfig {
    pub quad_n: usize,
    pub norm_nodes: usize,
    pub t_points: usize,
}

impl Default for ModulusConfig {
    fn default() -> Self {
        Self { quad_n: DEFAULT_QUAD_N, norm_nodes: DEFAULT_NORM_NODES, t_points: DEFAULT_T_POINTS }
    }
}

impl ModulusConfig {
    pub fn doubled(self) -> Self {
        Self { quad_n: 2 * self.quad_n, norm_nodes: 2 * self.norm_nodes, t_points: self.t_points }
    }
}

fn admissible(params: SpaceParams) -> Result<()> {
    match validate_params(params.p, params.alpha)? {
        Admissibility::Valid => Ok(()),
        Admissibility::Invalid(why) => invalid(why),
    }
}

/// ||T_t f - f||_{p,alpha}.
pub fn translation_deviation(f: &FunctionHandle, t: f64, params: SpaceParams, cfg: &ModulusConfig) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let diff = translation_difference(f, t, cfg.quad_n)?;
    WeightedNorm::new(params, cfg.norm_nodes, diff.singular_points())?.norm(&diff)
}

/// Generalized modulus of smoothness: the largest ||T_t f - f|| over the
/// grid t = delta k / t_points, k = 0..=t_points. Only t >= 0 is sampled since
/// the operator is even in t.
pub fn modulus(f: &FunctionHandle, delta: f64, params: SpaceParams, cfg: &ModulusConfig) -> Result<f64> {
    admissible(params)?;
    if !(0.0..std::f64::consts::PI).contains(&delta) {
        return invalid(format!("delta = {delta} outside [0, pi)"));
    }
    if cfg.t_points == 0 {
        return invalid("t_points must be positive");
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let values: Vec<Result<f64>> = (1..=cfg.t_points)
        .into_par_iter()
        .map(|k| translation_deviation(f, delta * k as f64 / cfg.t_points as f64, params, cfg))
        .collect();
    values.into_iter().try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
}

/// (1-x^2)^{-1} int (1-R^2) |f(R)| dz / sqrt(1-z^2) with R = x cos t - z sqrt(1-x^2) sin t.
pub fn averaged_magnitude(f: &FunctionHandle, t: f64, x: f64, quad_n: usize) -> Result<f64> {
    check_t(t)?;
    check_quad(quad_n)?;
    check_interior(x)?;
    let integral = chebyshev_integral(f, x, t.cos(), t.sin(), quad_n, |_, r| Ok(one_minus_sq(r) * f.try_eval(r)?.abs()))?;
    finite(x, integral / one_minus_sq(x))
}

pub fn averaged_magnitude_handle(f: &FunctionHandle, t: f64, quad_n: usize) -> Result<FunctionHandle> {
    check_t(t)?;
    check_quad(quad_n)?;
    let g = f.clone();
    Ok(FunctionHandle::new(format!("A[{}]", f.label()), move |x| {
        averaged_magnitude(&g, t, to_margin(x), quad_n).unwrap_or(f64::NAN)
    })
    .with_singular_points(translated_breakpoints(f, t)))
}

/// Right-hand side of
///
/// ```text
/// T_t f(x) - f(x) = int_0^t [sin(v/2) cos^9(v/2)]^{-1}
///                   int_0^v T_u(D f, x) sin(u/2) cos^9(u/2) du dv
/// ```
///
/// with `nodes`-point Gauss-Legendre rules in both variables.
pub fn integral_representation(f: &FunctionHandle, t: f64, x: f64, quad_n: usize, nodes: usize) -> Result<f64> {
    check_t(t)?;
    check_interior(x)?;
    let df = d_handle(f, DOperatorParams::default());
    let rule = gauss_legendre(nodes)?;
    let half = |u: f64| (0.5 * u).sin() * (0.5 * u).cos().powi(9);
    let mut outer = 0.0;
    for (v, wv) in rule.mapped(0.0, t.abs()) {
        let mut inner = 0.0;
        for (u, wu) in rule.mapped(0.0, v) {
            inner += wu * asym_translate_t(&df, u, x, quad_n)? * half(u);
        }
        outer += wv * inner / half(v);
    }
    finite(x, outer)
}
