//! Polynomial approximation in weighted norms: best approximation by
//! polynomials of degree at most n-1, Jackson smoothing through the symmetric
//! translation, the K-functional, and Bernstein-Markov ratios.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::function::FunctionHandle;
use crate::jacobi::{expand_in_jacobi, jacobi_basis_into, DOperatorParams, JacobiSeries, Polynomial};
use crate::quadrature::gauss_legendre;
use crate::space::{
    make_grid, validate_params, Admissibility, Exponent, SpaceParams, WeightedNorm, DEFAULT_NORM_NODES,
};
use crate::translation::sym_translate;

/// Largest n accepted by [`best_approx`] (polynomials of degree <= n-1).
pub const MAX_APPROX_N: usize = 64;
/// Largest witness degree for [`k_functional`] and Jackson polynomials.
pub const MAX_WITNESS_DEGREE: usize = 48;

const IRLS_FLOOR: f64 = 1e-12;
const IRLS_MAX_ITER: usize = 500;
const IRLS_TOL: f64 = 1e-10;
const REMEZ_MAX_EXCHANGES: usize = 100;
const DESCENT_MAX_ITER: usize = 20_000;
const DESCENT_WINDOW: usize = 20;
const DESCENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxMethod {
    L2Projection,
    RemezGrid,
    IrlsGrid,
}

#[derive(Debug, Clone, Serialize)]
pub struct BestApproxResult {
    /// E_n(f), measured with the same discrete norm the minimizer saw.
    pub value: f64,
    pub argmin: JacobiSeries,
    pub method: ApproxMethod,
    pub iterations: usize,
    /// Orthogonality defect (L2), level gap (Remez) or last relative change (IRLS).
    pub defect: f64,
    pub trace: Vec<f64>,
}

/// Values of the normalized Jacobi basis, one row per point.
fn basis_matrix(points: &[f64], cols: usize, a: f64, b: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(points.len(), cols);
    let mut row = Vec::with_capacity(cols);
    for (i, &x) in points.iter().enumerate() {
        jacobi_basis_into(cols - 1, a, b, x, &mut row);
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    m
}

fn residuals(values: &[f64], basis: &DMatrix<f64>, coeffs: &DVector<f64>) -> Vec<f64> {
    let g = basis * coeffs;
    values.iter().zip(g.iter()).map(|(f, g)| f - g).collect()
}

/// Solve a symmetric positive definite system, falling back to LU.
fn solve_spd(m: DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    match m.clone().cholesky() {
        Some(ch) => Some(ch.solve(rhs)),
        None => m.lu().solve(rhs),
    }
}

/// Least squares min ||sqrt(u) (f - B c)|| through Householder QR.
fn weighted_least_squares(basis: &DMatrix<f64>, values: &[f64], u: &[f64]) -> Option<DVector<f64>> {
    let (rows, cols) = basis.shape();
    let mut a = basis.clone();
    let mut rhs = DVector::zeros(rows);
    for i in 0..rows {
        let s = u[i].sqrt();
        a.row_mut(i).scale_mut(s);
        rhs[i] = s * values[i];
    }
    let qr = a.qr();
    qr.q_tr_mul(&mut rhs);
    let r = qr.r();
    r.solve_upper_triangular(&rhs.rows(0, cols).into_owned())
}

/// E_n(f)_{p,alpha}: distance from f to polynomials of degree <= n-1.
///
/// p = 2 solves the normal equations in the (2 alpha, 2 alpha) Jacobi basis
/// on the norm's Gauss-Jacobi nodes. p = inf runs a discrete exchange
/// iteration on the sup-norm grid of max(grid_n, 8n) points. Other p use
/// iteratively reweighted least squares on the norm's nodes. In every case
/// `value` is the discrete norm of f - argmin, so it agrees with
/// [`crate::space::weighted_norm`] at the same node count.
pub fn best_approx(f: &FunctionHandle, n: usize, params: SpaceParams, grid_n: usize) -> Result<BestApproxResult> {
    if n == 0 || n > MAX_APPROX_N {
        return invalid(format!("n = {n} outside 1..={MAX_APPROX_N}"));
    }
    match params.p {
        Exponent::Finite(p) if p == 2.0 => l2_projection(f, n, params, grid_n),
        Exponent::Finite(_) => irls(f, n, params, grid_n),
        Exponent::Infinity => remez(f, n, params, grid_n.max(8 * n)),
    }
}

fn l2_projection(f: &FunctionHandle, n: usize, params: SpaceParams, grid_n: usize) -> Result<BestApproxResult> {
    let norm = WeightedNorm::new(params, grid_n, f.singular_points())?;
    let w = norm.weights().expect("finite p");
    let ab = 2.0 * params.alpha;
    let values = norm.sample(f)?;
    let basis = basis_matrix(norm.points(), n, ab, ab);
    let mut weighted = basis.clone();
    for (i, wi) in w.iter().enumerate() {
        weighted.row_mut(i).scale_mut(*wi);
    }
    let gram = basis.transpose() * &weighted;
    let rhs = weighted.transpose() * DVector::from_column_slice(&values);
    let coeffs = solve_spd(gram.clone(), &rhs)
        .ok_or(Error::Convergence { method: "l2-projection", iterations: 0, trace: Vec::new() })?;
    let res = residuals(&values, &basis, &coeffs);
    let value = norm.of_values(&res);

    let scale = norm.of_values(&values).max(f64::MIN_POSITIVE);
    let inner = weighted.transpose() * DVector::from_column_slice(&res);
    let defect = (0..n).map(|k| inner[k].abs() / gram[(k, k)].sqrt()).fold(0.0, f64::max) / scale;
    Ok(BestApproxResult {
        value,
        argmin: JacobiSeries::new(ab, ab, coeffs.iter().copied().collect()),
        method: ApproxMethod::L2Projection,
        iterations: 1,
        defect,
        trace: vec![value],
    })
}

fn remez(f: &FunctionHandle, n: usize, params: SpaceParams, grid_n: usize) -> Result<BestApproxResult> {
    let norm = WeightedNorm::new(params, grid_n, f.singular_points())?;
    let points = norm.points();
    let factors = norm.sup_factors().expect("sup norm");
    let values = norm.sample(f)?;
    let basis = basis_matrix(points, n, 0.0, 0.0);
    let len = points.len();
    if len < n + 1 {
        return invalid(format!("grid of {len} points too small for degree {}", n - 1));
    }

    let mut reference: Vec<usize> = (0..=n).map(|k| (k * (len - 1) + n / 2) / n).collect();
    reference.dedup();
    let mut trace = Vec::new();
    let mut best: Option<(f64, DVector<f64>, f64)> = None;

    for iteration in 0..REMEZ_MAX_EXCHANGES {
        // rows: g(x_i) + (-1)^i E / w_i = f(x_i)
        let size = n + 1;
        let mut a = DMatrix::zeros(size, size);
        let mut rhs = DVector::zeros(size);
        for (r, &i) in reference.iter().enumerate() {
            for k in 0..n {
                a[(r, k)] = basis[(i, k)];
            }
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            a[(r, n)] = sign / factors[i];
            rhs[r] = values[i];
        }
        let Some(sol) = a.lu().solve(&rhs) else {
            return Err(Error::Convergence { method: "remez-grid", iterations: iteration, trace });
        };
        let coeffs = sol.rows(0, n).into_owned();
        let level = sol[n].abs();
        let res = residuals(&values, &basis, &coeffs);
        let errors: Vec<f64> = res.iter().zip(factors).map(|(r, w)| r * w).collect();
        let value = norm.of_values(&res);
        trace.push(value);
        let gap = value - level;
        if best.as_ref().is_none_or(|b| value < b.0) {
            best = Some((value, coeffs.clone(), gap));
        }
        if gap <= 1e-12 * value.max(f64::MIN_POSITIVE) || value == 0.0 {
            return Ok(remez_result(value, coeffs, iteration + 1, gap.max(0.0), trace));
        }
        reference = exchange(&errors, &reference, n + 1);
    }
    // exchange budget exhausted: keep the best iterate, report its gap
    let (value, coeffs, gap) = best.expect("at least one iteration");
    Ok(remez_result(value, coeffs, REMEZ_MAX_EXCHANGES, gap.max(0.0), trace))
}

fn remez_result(value: f64, coeffs: DVector<f64>, iterations: usize, gap: f64, trace: Vec<f64>) -> BestApproxResult {
    BestApproxResult {
        value,
        argmin: JacobiSeries::new(0.0, 0.0, coeffs.iter().copied().collect()),
        method: ApproxMethod::RemezGrid,
        iterations,
        defect: gap,
        trace,
    }
}

/// New reference of `size` alternating extrema of `errors`, keeping the
/// global maximum.
fn exchange(errors: &[f64], old: &[usize], size: usize) -> Vec<usize> {
    let peak = (0..errors.len()).max_by(|&i, &j| errors[i].abs().total_cmp(&errors[j].abs())).unwrap_or(0);
    let mut runs: Vec<usize> = Vec::new();
    for (i, &e) in errors.iter().enumerate() {
        if e == 0.0 {
            continue;
        }
        match runs.last_mut() {
            Some(last) if errors[*last].signum() == e.signum() => {
                if e.abs() > errors[*last].abs() {
                    *last = i;
                }
            }
            _ => runs.push(i),
        }
    }
    if runs.len() < size {
        return single_exchange(errors, old, peak);
    }
    while runs.len() > size {
        let first = runs[0];
        let last = runs[runs.len() - 1];
        let drop_first = if first == peak {
            false
        } else if last == peak {
            true
        } else {
            errors[first].abs() <= errors[last].abs()
        };
        if drop_first {
            runs.remove(0);
        } else {
            runs.pop();
        }
    }
    runs
}

/// Swap the peak into the old reference, preserving sign alternation.
fn single_exchange(errors: &[f64], old: &[usize], peak: usize) -> Vec<usize> {
    let mut r = old.to_vec();
    if r.contains(&peak) {
        return r;
    }
    let sign = |i: usize| errors[i].signum();
    let s = sign(peak);
    let pos = r.partition_point(|&i| i < peak);
    if pos == 0 {
        if sign(r[0]) == s {
            r[0] = peak;
        } else {
            r.insert(0, peak);
            r.pop();
        }
    } else if pos == r.len() {
        let last = r.len() - 1;
        if sign(r[last]) == s {
            r[last] = peak;
        } else {
            r.push(peak);
            r.remove(0);
        }
    } else if sign(r[pos - 1]) == s {
        r[pos - 1] = peak;
    } else {
        r[pos] = peak;
    }
    r
}

fn irls(f: &FunctionHandle, n: usize, params: SpaceParams, grid_n: usize) -> Result<BestApproxResult> {
    let p = params.p.as_f64();
    let norm = WeightedNorm::new(params, grid_n, f.singular_points())?;
    let w = norm.weights().expect("finite p").to_vec();
    let values = norm.sample(f)?;
    let basis = basis_matrix(norm.points(), n, 0.0, 0.0);
    let fail = |iterations, trace| Error::Convergence { method: "irls-grid", iterations, trace };

    let mut coeffs = weighted_least_squares(&basis, &values, &w).ok_or_else(|| fail(0, Vec::new()))?;
    let objective = |c: &DVector<f64>| -> f64 {
        residuals(&values, &basis, c).iter().zip(&w).map(|(r, w)| w * r.abs().powf(p)).sum()
    };
    let mut current = objective(&coeffs);
    let mut trace = vec![current.powf(1.0 / p)];
    // p > 2 needs damping to avoid oscillation
    let theta = if p > 2.0 { 1.0 / (p - 1.0) } else { 1.0 };
    for iteration in 1..=IRLS_MAX_ITER {
        let res = residuals(&values, &basis, &coeffs);
        let u: Vec<f64> = res.iter().zip(&w).map(|(r, w)| w * r.abs().max(IRLS_FLOOR).powf(p - 2.0)).collect();
        let next = weighted_least_squares(&basis, &values, &u).ok_or_else(|| fail(iteration, trace.clone()))?;
        let candidate = &coeffs + (next - &coeffs) * theta;
        let obj = objective(&candidate);
        let change = (current - obj).abs() / current.max(f64::MIN_POSITIVE);
        coeffs = candidate;
        current = obj;
        trace.push(current.powf(1.0 / p));
        if change < IRLS_TOL || current == 0.0 {
            let res = residuals(&values, &basis, &coeffs);
            return Ok(BestApproxResult {
                value: norm.of_values(&res),
                argmin: JacobiSeries::new(0.0, 0.0, coeffs.iter().copied().collect()),
                method: ApproxMethod::IrlsGrid,
                iterations: iteration,
                defect: change,
                trace,
            });
        }
    }
    Err(fail(IRLS_MAX_ITER, trace))
}

/// Power of the Dirichlet-type ratio sin(mt/2) / sin(t/2) used as the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelExponent {
    /// 2q: the classical Jackson kernel, a cosine polynomial of degree q(m-1).
    Classical,
    /// 2(q+2): degree (q+2)(m-1), with int t^2 K sin^5 t dt / gamma_m = O(m^-2).
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacksonParams {
    pub q: u32,
    pub m: u32,
    /// Gauss-Legendre nodes per t-panel.
    pub t_nodes: usize,
    pub exponent: KernelExponent,
}

impl JacksonParams {
    pub fn new(q: u32, m: u32) -> Result<Self> {
        if q < 3 {
            return invalid(format!("q = {q} must exceed 2"));
        }
        if m == 0 {
            return invalid("m must be positive");
        }
        Ok(Self { q, m, t_nodes: 128, exponent: KernelExponent::Shifted })
    }

    pub fn with_t_nodes(self, t_nodes: usize) -> Self {
        Self { t_nodes, ..self }
    }

    pub fn with_exponent(self, exponent: KernelExponent) -> Self {
        Self { exponent, ..self }
    }

    pub fn power(&self) -> i32 {
        match self.exponent {
            KernelExponent::Classical => 2 * self.q as i32,
            KernelExponent::Shifted => 2 * (self.q as i32 + 2),
        }
    }
}

/// (q + 2)(m - 1).
pub fn jackson_degree_bound(params: &JacksonParams) -> usize {
    (params.q as usize + 2) * (params.m as usize - 1)
}

pub fn jackson_kernel(t: f64, params: &JacksonParams) -> f64 {
    let m = params.m as f64;
    let s = (0.5 * t).sin();
    let ratio = if s.abs() < 1e-12 { m } else { (0.5 * m * t).sin() / s };
    ratio.powi(params.power())
}

/// gamma_m = int_0^pi K(t) sin^5 t dt.
pub fn gamma_norm(params: &JacksonParams) -> Result<f64> {
    let rule = gauss_legendre(params.t_nodes)?;
    Ok(rule.mapped(0.0, std::f64::consts::PI).map(|(t, w)| w * jackson_kernel(t, params) * t.sin().powi(5)).sum())
}

/// Angles in (0, pi) where t -> sT_{cos t}(f, x) can have a kink.
fn t_breakpoints(f: &FunctionHandle, x: f64) -> Vec<f64> {
    use std::f64::consts::PI;
    let a = x.clamp(-1.0, 1.0).acos();
    let mut out = Vec::new();
    for b in f.interior_singular_points() {
        let theta = b.acos();
        for t in [theta - a, a - theta, theta + a, 2.0 * PI - theta - a] {
            if t > 1e-12 && t < PI - 1e-12 {
                out.push(t);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|p, q| (*p - *q).abs() < 1e-12);
    out
}

/// Q(x) = gamma_m^{-1} int_0^pi sT_{cos t}(f, x) K(t) sin^5 t dt, integrated
/// directly (no polynomial fit).
pub fn jackson_eval(f: &FunctionHandle, x: f64, params: &JacksonParams, quad_n: usize) -> Result<f64> {
    let gamma = gamma_norm(params)?;
    jackson_eval_with(f, x, params, quad_n, gamma)
}

fn jackson_eval_with(f: &FunctionHandle, x: f64, params: &JacksonParams, quad_n: usize, gamma: f64) -> Result<f64> {
    let rule = gauss_legendre(params.t_nodes)?;
    let mut bounds = vec![0.0];
    bounds.extend(t_breakpoints(f, x));
    bounds.push(std::f64::consts::PI);
    let mut acc = 0.0;
    for pair in bounds.windows(2) {
        for (t, w) in rule.mapped(pair[0], pair[1]) {
            let k = jackson_kernel(t, params) * t.sin().powi(5);
            acc += w * k * sym_translate(f, t.cos(), x, quad_n)?;
        }
    }
    Ok(acc / gamma)
}

/// Raw values of Q as a handle.
pub fn jackson_handle(f: &FunctionHandle, params: &JacksonParams, quad_n: usize) -> Result<FunctionHandle> {
    let gamma = gamma_norm(params)?;
    let (g, p) = (f.clone(), *params);
    Ok(FunctionHandle::new(format!("Q[{}]", f.label()), move |x| {
        jackson_eval_with(&g, x, &p, quad_n, gamma).unwrap_or(f64::NAN)
    }))
}

/// The Jackson polynomial Q in the (2,2) basis, of degree (q+2)(m-1).
///
/// Q is sampled on a Chebyshev grid of 2 * degree + 8 points; even-indexed
/// points are fitted by least squares and odd-indexed points are held out.
/// A held-out residual above 1e-6 means Q is not a polynomial of that degree.
pub fn jackson_operator(f: &FunctionHandle, params: &JacksonParams, quad_n: usize) -> Result<JacobiSeries> {
    let degree = jackson_degree_bound(params);
    if degree > MAX_WITNESS_DEGREE {
        return invalid(format!("degree bound {degree} exceeds {MAX_WITNESS_DEGREE}"));
    }
    let gamma = gamma_norm(params)?;
    let grid = make_grid(2 * degree + 8);
    let raw = grid.iter().map(|&x| jackson_eval_with(f, x, params, quad_n, gamma)).collect::<Result<Vec<_>>>()?;
    let (fit_x, fit_v): (Vec<f64>, Vec<f64>) = grid.iter().zip(&raw).step_by(2).map(|(x, v)| (*x, *v)).unzip();
    let basis = basis_matrix(&fit_x, degree + 1, 2.0, 2.0);
    let coeffs = weighted_least_squares(&basis, &fit_v, &vec![1.0; fit_x.len()])
        .ok_or(Error::DegreeViolation { degree, residual: f64::INFINITY })?;
    let series = JacobiSeries::new(2.0, 2.0, coeffs.iter().copied().collect());
    let residual = grid
        .iter()
        .zip(&raw)
        .skip(1)
        .step_by(2)
        .map(|(x, v)| (series.eval(*x) - v).abs())
        .fold(0.0, f64::max);
    if residual > 1e-6 {
        return Err(Error::DegreeViolation { degree, residual });
    }
    Ok(series)
}

#[derive(Debug, Clone, Serialize)]
pub struct KFunctionalResult {
    pub value: f64,
    /// Witness g in the normalized (2,2) basis.
    pub witness: JacobiSeries,
    pub max_deg: usize,
    /// Objective values of accepted iterates.
    pub trace: Vec<f64>,
}

struct KProblem<'a> {
    norm: &'a WeightedNorm,
    values: Vec<f64>,
    basis: DMatrix<f64>,
    lambda: Vec<f64>,
    delta2: f64,
}

impl KProblem<'_> {
    fn parts(&self, c: &DVector<f64>) -> (Vec<f64>, Vec<f64>) {
        let res = residuals(&self.values, &self.basis, c);
        let dc = DVector::from_iterator(c.len(), c.iter().zip(&self.lambda).map(|(c, l)| c * l));
        let dg: Vec<f64> = (&self.basis * dc).iter().copied().collect();
        (res, dg)
    }

    fn objective(&self, c: &DVector<f64>) -> f64 {
        let (res, dg) = self.parts(c);
        self.norm.of_values(&res) + self.delta2 * self.norm.of_values(&dg)
    }

    /// Derivative of the discrete norm with respect to the sampled values.
    fn norm_gradient(&self, v: &[f64]) -> Vec<f64> {
        let params = self.norm.params();
        let total = self.norm.of_values(v);
        if total == 0.0 {
            return vec![0.0; v.len()];
        }
        match (params.p, self.norm.weights(), self.norm.sup_factors()) {
            (Exponent::Finite(p), Some(w), _) => {
                let scale = total.powf(p - 1.0);
                v.iter().zip(w).map(|(v, w)| w * v.abs().powf(p - 1.0) * v.signum() / scale).collect()
            }
            (_, _, Some(factors)) => {
                let peak = (0..v.len())
                    .max_by(|&i, &j| (factors[i] * v[i].abs()).total_cmp(&(factors[j] * v[j].abs())))
                    .unwrap_or(0);
                let mut g = vec![0.0; v.len()];
                g[peak] = factors[peak] * v[peak].signum();
                g
            }
            _ => vec![0.0; v.len()],
        }
    }

    fn gradient(&self, c: &DVector<f64>) -> DVector<f64> {
        let (res, dg) = self.parts(c);
        let g1 = self.basis.tr_mul(&DVector::from_vec(self.norm_gradient(&res)));
        let g2 = self.basis.tr_mul(&DVector::from_vec(self.norm_gradient(&dg)));
        DVector::from_iterator(c.len(), (0..c.len()).map(|k| -g1[k] + self.delta2 * self.lambda[k] * g2[k]))
    }
}

/// Peetre K-functional K(f, delta) = inf_g ||f - g|| + delta^2 ||D g|| over
/// polynomial witnesses of degree <= `max_deg`; an upper bound on the
/// unrestricted infimum.
///
/// Candidates g = 0 and the (2,2) Fourier-Jacobi projection are always
/// considered. For p = 2 the minimizer lies on the curve of minimizers of
/// ||f-g||^2 + s ||Dg||^2, which is searched exactly in s; for other p an
/// accelerated gradient descent with backtracking starts from the best
/// candidate and stops once 20 iterations lower the objective by less than a
/// relative 1e-8.
pub fn k_functional(
    f: &FunctionHandle,
    delta: f64,
    params: SpaceParams,
    max_deg: usize,
    norm_nodes: usize,
) -> Result<KFunctionalResult> {
    if let Admissibility::Invalid(why) = validate_params(params.p, params.alpha)? {
        return invalid(why);
    }
    if max_deg > MAX_WITNESS_DEGREE {
        return invalid(format!("max_deg = {max_deg} exceeds {MAX_WITNESS_DEGREE}"));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return invalid(format!("delta = {delta} must be finite and nonnegative"));
    }
    let norm = WeightedNorm::new(params, norm_nodes, f.singular_points())?;
    let cols = max_deg + 1;
    let d = DOperatorParams::default();
    let problem = KProblem {
        values: norm.sample(f)?,
        basis: basis_matrix(norm.points(), cols, 2.0, 2.0),
        lambda: (0..cols).map(|k| d.eigenvalue(k)).collect(),
        delta2: delta * delta,
        norm: &norm,
    };

    let zero = DVector::zeros(cols);
    let projection = DVector::from_vec(expand_in_jacobi(f, max_deg, norm_nodes)?);
    let mut best = (problem.objective(&zero), zero);
    let mut trace = vec![best.0];
    let consider = |c: DVector<f64>, best: &mut (f64, DVector<f64>), trace: &mut Vec<f64>| {
        let v = problem.objective(&c);
        if v < best.0 {
            *best = (v, c);
            trace.push(v);
        }
    };
    consider(projection, &mut best, &mut trace);

    if params.p == Exponent::Finite(2.0) {
        if let Some(c) = path_search(&problem) {
            consider(c, &mut best, &mut trace);
        }
    } else if best.0 > 0.0 {
        let c = descend(&problem, best.1.clone(), &mut trace)?;
        consider(c, &mut best, &mut trace);
    }

    let (value, coeffs) = best;
    Ok(KFunctionalResult {
        value,
        witness: JacobiSeries::new(2.0, 2.0, coeffs.iter().copied().collect()),
        max_deg,
        trace,
    })
}

/// Minimize the objective along c(s) = argmin ||f - g||^2 + s ||Dg||^2.
fn path_search(problem: &KProblem) -> Option<DVector<f64>> {
    let w = problem.norm.weights()?;
    let mut weighted = problem.basis.clone();
    for (i, wi) in w.iter().enumerate() {
        weighted.row_mut(i).scale_mut(*wi);
    }
    let gram = problem.basis.tr_mul(&weighted);
    let rhs = weighted.tr_mul(&DVector::from_column_slice(&problem.values));
    let lam = DMatrix::from_diagonal(&DVector::from_column_slice(&problem.lambda));
    let penalty = &lam * &gram * &lam;
    let at = |log_s: f64| -> Option<(f64, DVector<f64>)> {
        let s = 10f64.powf(log_s);
        let c = solve_spd(&gram + &penalty * s, &rhs)?;
        Some((problem.objective(&c), c))
    };

    let grid: Vec<f64> = (-64..=64).map(|k| k as f64 / 4.0).collect();
    let mut scan = Vec::with_capacity(grid.len());
    for &g in &grid {
        scan.push(at(g)?);
    }
    let k = (0..scan.len()).min_by(|&i, &j| scan[i].0.total_cmp(&scan[j].0))?;
    let (mut lo, mut hi) = (grid[k.saturating_sub(1)], grid[(k + 1).min(grid.len() - 1)]);
    let mut best = scan.swap_remove(k);

    // golden section in log s
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (hi - r * (hi - lo), lo + r * (hi - lo));
    let (mut f1, mut f2) = (at(x1)?, at(x2)?);
    for _ in 0..80 {
        if f1.0 <= f2.0 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = at(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = at(x2)?;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    for cand in [f1, f2] {
        if cand.0 < best.0 {
            best = cand;
        }
    }
    Some(best.1)
}

/// Accelerated gradient descent with backtracking and adaptive restart.
fn descend(problem: &KProblem, start: DVector<f64>, trace: &mut Vec<f64>) -> Result<DVector<f64>> {
    let mut x = start;
    let mut fx = problem.objective(&x);
    let mut y = x.clone();
    let mut momentum = 1.0f64;
    let mut step = 1.0f64;
    let mut history = vec![fx];
    for _ in 0..DESCENT_MAX_ITER {
        let fy = problem.objective(&y);
        let grad = problem.gradient(&y);
        let g2 = grad.norm_squared();
        if g2 == 0.0 {
            break;
        }
        let mut candidate = None;
        while step > 1e-30 {
            let xn = &y - &grad * step;
            let fxn = problem.objective(&xn);
            if fxn <= fy - 0.5 * step * g2 {
                candidate = Some((xn, fxn));
                break;
            }
            step *= 0.5;
        }
        match candidate {
            Some((xn, fxn)) if fxn < fx => {
                let next = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
                y = &xn + (&xn - &x) * ((momentum - 1.0) / next);
                momentum = next;
                x = xn;
                fx = fxn;
                step *= 2.0;
            }
            _ => {
                // restart from the last accepted point
                y = x.clone();
                momentum = 1.0;
                if step <= 1e-30 {
                    break;
                }
            }
        }
        history.push(fx);
        let len = history.len();
        if len > DESCENT_WINDOW && history[len - 1 - DESCENT_WINDOW] - fx <= DESCENT_TOL * fx.abs() {
            trace.extend(history.iter().skip(1).step_by(DESCENT_WINDOW));
            return Ok(x);
        }
    }
    let len = history.len();
    if len > DESCENT_WINDOW && history[len - 1 - DESCENT_WINDOW] - fx > DESCENT_TOL * fx.abs() {
        return Err(Error::Convergence { method: "k-functional descent", iterations: len, trace: history });
    }
    trace.push(fx);
    Ok(x)
}

/// (||P'||_{p,alpha+1/2} / (n ||P||_{p,alpha}), ||P||_{p,alpha} / (n^{2 rho} ||P||_{p,alpha+rho}))
/// with n = deg P + 1.
pub fn bernstein_markov_ratios(poly: &Polynomial, params: SpaceParams, rho: f64) -> Result<(f64, f64)> {
    let Some(deg) = poly.degree() else {
        return invalid("zero polynomial");
    };
    if !(rho >= 0.0) {
        return invalid(format!("rho = {rho} must be nonnegative"));
    }
    let n = (deg + 1) as f64;
    let norm = |q: &Polynomial, alpha: f64| -> Result<f64> {
        let h = q.to_handle("p");
        WeightedNorm::new(params.with_alpha(alpha), DEFAULT_NORM_NODES, &[])?.norm(&h)
    };
    let base = norm(poly, params.alpha)?;
    let first = norm(&poly.derivative(), params.alpha + 0.5)? / (n * base);
    let second = base / (n.powf(2.0 * rho) * norm(poly, params.alpha + rho)?);
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{fourier_jacobi_coeff, jacobi_poly};
    use crate::space::weighted_norm;
    use approx::assert_relative_eq;

    fn abs_handle() -> FunctionHandle {
        FunctionHandle::new("|x|", f64::abs).with_singular_points([0.0])
    }

    fn all_methods() -> [SpaceParams; 4] {
        [
            SpaceParams::default(),
            SpaceParams::sup(1.2),
            SpaceParams::finite(1.5, 0.9),
            SpaceParams::finite(4.0, 0.9),
        ]
    }

    #[test]
    fn reproduces_polynomials() {
        let p = jacobi_poly(3, 2.0, 2.0).unwrap().add(&Polynomial::new(vec![0.5, -0.25]));
        let f = p.to_handle("p");
        for params in all_methods() {
            let r = best_approx(&f, 4, params, 128).unwrap();
            assert!(r.value <= 1e-12, "{params:?}: {}", r.value);
            for &x in &make_grid(9) {
                assert!((r.argmin.eval(x) - p.eval(x)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn odd_function_by_constants() {
        let x = FunctionHandle::new("x", |x| x);
        let r = best_approx(&x, 1, SpaceParams::default(), 64).unwrap();
        assert_relative_eq!(r.value, (16.0f64 / 105.0).sqrt(), max_relative = 1e-13);
        assert!(r.argmin.eval(0.3).abs() < 1e-15);
        assert_eq!(r.method, ApproxMethod::L2Projection);
    }

    #[test]
    fn value_matches_norm_of_residual() {
        let fs = [abs_handle(), FunctionHandle::new("sin3", |x: f64| (3.0 * x).sin())];
        for f in &fs {
            for params in all_methods() {
                for n in [1, 3, 6] {
                    let r = best_approx(f, n, params, 128).unwrap();
                    let g = r.argmin.to_handle("g");
                    let grid = if params.p == Exponent::Infinity { 128.max(8 * n) } else { 128 };
                    let direct = weighted_norm(&f.sub(&g), params, grid).unwrap();
                    assert!((r.value - direct).abs() <= 1e-9, "{} {params:?} n={n}: {} {direct}", f.label(), r.value);
                }
            }
        }
    }

    #[test]
    fn monotone_in_n() {
        let f = abs_handle();
        for params in [SpaceParams::default(), SpaceParams::sup(1.2), SpaceParams::finite(1.5, 0.9)] {
            let values: Vec<f64> = (1..=16).map(|n| best_approx(&f, n, params, 256).unwrap().value).collect();
            for pair in values.windows(2) {
                assert!(pair[1] <= pair[0] * (1.0 + 1e-9) + 1e-14, "{params:?}: {values:?}");
            }
        }
    }

    #[test]
    fn l2_residual_is_orthogonal() {
        let f = abs_handle();
        let r = best_approx(&f, 9, SpaceParams::default(), 128).unwrap();
        let res = f.sub(&r.argmin.to_handle("g"));
        for k in 0..9 {
            assert!(fourier_jacobi_coeff(&res, k, 128).unwrap().abs() <= 1e-9);
        }
        assert!(r.defect <= 1e-12);
    }

    #[test]
    fn sup_norm_oracle() {
        // unweighted: x^2 - 1/2 equioscillates at -1, 0, 1
        let f = FunctionHandle::new("x^2", |x| x * x);
        let r = best_approx(&f, 2, SpaceParams::sup(0.0), 257).unwrap();
        assert!((r.value - 0.5).abs() <= 2e-6, "{}", r.value);
        assert!((r.argmin.eval(0.0) - 0.5).abs() <= 2e-6);
        assert_eq!(r.method, ApproxMethod::RemezGrid);
    }

    #[test]
    fn l1_oracle() {
        // the best constant in L1 on [-1, 1] is the median of x^2, 1/4; error 1/2.
        // The discrete minimizer is a weighted median of node values, so the
        // constant is only as sharp as the node spacing; the value is second order.
        let f = FunctionHandle::new("x^2", |x| x * x).with_singular_points([-0.5, 0.5]);
        let r = best_approx(&f, 1, SpaceParams::finite(1.0, 0.0), 64).unwrap();
        assert!((r.argmin.eval(0.0) - 0.25).abs() <= 1e-3, "{}", r.argmin.eval(0.0));
        assert!((r.value - 0.5).abs() <= 1e-6, "{}", r.value);
    }

    #[test]
    fn lp_oracle_by_scalar_search() {
        let params = SpaceParams::finite(4.0, 0.9);
        let f = FunctionHandle::new("exp", f64::exp);
        let r = best_approx(&f, 1, params, 64).unwrap();
        let norm = WeightedNorm::new(params, 64, &[]).unwrap();
        let vals = norm.sample(&f).unwrap();
        let obj = |c: f64| norm.of_values(&vals.iter().map(|v| v - c).collect::<Vec<_>>());
        let (mut lo, mut hi) = (0.0, 3.0);
        for _ in 0..200 {
            let (a, b) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
            if obj(a) < obj(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        assert!((r.value - obj(0.5 * (lo + hi))).abs() <= 1e-9);
    }

    #[test]
    fn argument_errors() {
        let f = abs_handle();
        assert!(best_approx(&f, 0, SpaceParams::default(), 64).is_err());
        assert!(best_approx(&f, 65, SpaceParams::default(), 64).is_err());
        assert!(best_approx(&f, 3, SpaceParams::finite(2.0, -0.6), 64).is_err());
    }

    #[test]
    fn exchange_keeps_peak_and_alternation() {
        let errors = [0.1, -0.3, 0.2, -0.05, 0.9, -0.4, 0.3];
        let r = exchange(&errors, &[0, 2, 4, 6], 4);
        assert_eq!(r.len(), 4);
        assert!(r.contains(&4));
        for pair in r.windows(2) {
            assert!(errors[pair[0]].signum() != errors[pair[1]].signum());
        }
    }

    #[test]
    fn kernel_examples() {
        let p = JacksonParams::new(3, 4).unwrap().with_exponent(KernelExponent::Classical);
        assert_eq!(jackson_kernel(0.0, &p), 4096.0);
        assert_relative_eq!(jackson_kernel(1e-9, &p), 4096.0, max_relative = 1e-12);
        let p2 = JacksonParams::new(3, 2).unwrap().with_exponent(KernelExponent::Classical);
        assert!(jackson_kernel(std::f64::consts::PI, &p2).abs() < 1e-90);
        assert_relative_eq!(jackson_kernel(std::f64::consts::FRAC_PI_2, &p2), 8.0, max_relative = 1e-14);
        let shifted = JacksonParams::new(3, 2).unwrap();
        assert_relative_eq!(jackson_kernel(std::f64::consts::FRAC_PI_2, &shifted), 32.0, max_relative = 1e-14);
        assert!(JacksonParams::new(2, 3).is_err());
        assert!(JacksonParams::new(3, 0).is_err());
    }

    #[test]
    fn degree_bounds() {
        assert_eq!(jackson_degree_bound(&JacksonParams::new(3, 1).unwrap()), 0);
        assert_eq!(jackson_degree_bound(&JacksonParams::new(3, 2).unwrap()), 5);
        assert_eq!(jackson_degree_bound(&JacksonParams::new(4, 3).unwrap()), 12);
    }

    #[test]
    fn gamma_values() {
        for exponent in [KernelExponent::Classical, KernelExponent::Shifted] {
            let one = JacksonParams::new(3, 1).unwrap().with_exponent(exponent);
            assert_relative_eq!(gamma_norm(&one).unwrap(), 16.0 / 15.0, max_relative = 1e-13);
        }
        // the shifted kernel's mass grows like m^4 at q = 3
        let g: Vec<f64> = [4, 8, 16]
            .iter()
            .map(|&m| gamma_norm(&JacksonParams::new(3, m).unwrap().with_t_nodes(256)).unwrap())
            .collect();
        for pair in g.windows(2) {
            let ratio = pair[1] / pair[0];
            assert!((8.0..=32.0).contains(&ratio), "{g:?}");
        }
        // exact for the trigonometric polynomial integrand
        let p = JacksonParams::new(4, 3).unwrap();
        let a = gamma_norm(&p.with_t_nodes(64)).unwrap();
        let b = gamma_norm(&p.with_t_nodes(128)).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-13);
    }

    #[test]
    fn jackson_constants_and_parity() {
        let p = JacksonParams::new(3, 2).unwrap().with_t_nodes(48);
        let one = jackson_operator(&FunctionHandle::constant(1.0), &p, 32).unwrap();
        assert_relative_eq!(one.coeffs[0], 1.0, epsilon = 1e-12);
        assert!(one.coeffs[1..].iter().all(|c| c.abs() <= 1e-10));
        let x = FunctionHandle::new("x", |x| x);
        let q = jackson_operator(&x, &p, 32).unwrap();
        for (k, c) in q.coeffs.iter().enumerate() {
            if k % 2 == 0 {
                assert!(c.abs() <= 1e-10, "k={k} {c}");
            }
        }
        // Q(x) = x psi-type factor: x times int P_1(cos t) K sin^5 / gamma
        assert!(q.coeffs[1] > 0.0 && q.coeffs[1] < 1.0);
    }

    #[test]
    fn jackson_spectral_cutoff() {
        let sq = FunctionHandle::new("x^2", |x| x * x);
        let p = JacksonParams::new(3, 3).unwrap().with_t_nodes(64);
        let bound = jackson_degree_bound(&p);
        let q = jackson_handle(&sq, &p, 32).unwrap();
        for nu in bound + 1..=bound + 6 {
            assert!(fourier_jacobi_coeff(&q, nu, 64).unwrap().abs() <= 1e-8);
        }
        let kink = abs_handle();
        let p = JacksonParams::new(3, 2).unwrap().with_t_nodes(64);
        let q = jackson_handle(&kink, &p, 64).unwrap();
        let bound = jackson_degree_bound(&p);
        let lo = fourier_jacobi_coeff(&q, 2, 64).unwrap().abs();
        assert!(lo > 1e-4);
        for nu in bound + 1..=bound + 6 {
            assert!(fourier_jacobi_coeff(&q, nu, 64).unwrap().abs() <= 1e-8, "nu={nu}");
        }
        assert!(jackson_operator(&kink, &JacksonParams::new(3, 12).unwrap(), 16).is_err());
    }

    #[test]
    fn k_functional_trivial_cases() {
        let params = SpaceParams::default();
        let zero = FunctionHandle::constant(0.0);
        let r = k_functional(&zero, 0.7, params, 8, 64).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.witness.coeffs.iter().all(|c| *c == 0.0));
        let p = jacobi_poly(3, 2.0, 2.0).unwrap().to_handle("P3");
        assert!(k_functional(&p, 0.0, params, 8, 64).unwrap().value <= 1e-13);
        assert!(k_functional(&p, 0.1, params, 49, 64).is_err());
        assert!(k_functional(&p, 0.1, SpaceParams::finite(2.0, 1.6), 8, 64).is_err());
    }

    #[test]
    fn k_functional_linear_oracle() {
        let params = SpaceParams::default();
        let x = FunctionHandle::new("x", |x| x);
        let nx = (16.0f64 / 105.0).sqrt();
        let r = k_functional(&x, 0.1, params, 8, 64).unwrap();
        assert!(r.value <= 0.06 * nx + 1e-12);
        // g = c x: (1 - c) ||x|| + 6 c delta^2 ||x||, minimized at c = 1
        let grid_best = (0..=1000)
            .map(|k| k as f64 / 1000.0)
            .map(|c| ((1.0 - c) + 0.06 * c) * nx)
            .fold(f64::INFINITY, f64::min);
        assert!(r.value <= grid_best + 1e-12);
        let check = f64::abs(r.value - (weighted_norm(&x.sub(&r.witness.to_handle("g")), params, 64).unwrap()
            + 0.01 * weighted_norm(&r.witness.apply_d().to_handle("Dg"), params, 64).unwrap()));
        assert!(check <= 1e-9);
    }

    #[test]
    fn k_functional_bounds_and_monotonicity() {
        let f = abs_handle();
        for params in [SpaceParams::default(), SpaceParams::finite(1.5, 0.8), SpaceParams::sup(1.2)] {
            let mut last = 0.0;
            for &delta in &[0.05, 0.2, 0.8, 2.4] {
                let r = k_functional(&f, delta, params, 16, 64).unwrap();
                let norm = WeightedNorm::new(params, 64, f.singular_points()).unwrap();
                let proj = JacobiSeries::new(2.0, 2.0, expand_in_jacobi(&f, 16, 64).unwrap());
                let two = norm.norm(&f).unwrap().min(
                    norm.norm(&f.sub(&proj.to_handle("g"))).unwrap()
                        + delta * delta * norm.norm(&proj.apply_d().to_handle("Dg")).unwrap(),
                );
                assert!(r.value <= two + 1e-10, "{params:?} {delta}");
                assert!(last <= r.value + 1e-10, "{params:?} {delta}: {last} > {}", r.value);
                last = r.value;
            }
        }
    }

    #[test]
    fn bernstein_markov() {
        let params = SpaceParams::default();
        let (a, _) = bernstein_markov_ratios(&Polynomial::constant(2.0), params, 0.5).unwrap();
        assert_eq!(a, 0.0);
        let (a, b) = bernstein_markov_ratios(&jacobi_poly(8, 2.0, 2.0).unwrap(), params, 0.5).unwrap();
        assert!(a.is_finite() && a < 10.0 && b.is_finite() && b < 10.0);
        let ratios: Vec<(f64, f64)> = [2, 4, 8, 16]
            .iter()
            .map(|&n| bernstein_markov_ratios(&jacobi_poly(n, 2.0, 2.0).unwrap(), params, 0.5).unwrap())
            .collect();
        let (max_a, max_b) = ratios.iter().fold((0.0f64, 0.0f64), |m, r| (m.0.max(r.0), m.1.max(r.1)));
        assert!(max_a < 2.0 * ratios[0].0.max(ratios[1].0) && max_b < 10.0, "{ratios:?}");
        assert!(bernstein_markov_ratios(&Polynomial::zero(), params, 0.5).is_err());
    }
}
