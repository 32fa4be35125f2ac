//! Jacobi polynomials normalized by P_n(1) = 1, the operator
//! D_{x,nu,mu} = (1-x^2) d^2/dx^2 + (mu - nu - (nu+mu+2) x) d/dx, and
//! Fourier-Jacobi analysis for the weight (1-x^2)^2.

use std::sync::OnceLock;

use crate::error::{invalid, Result};
use crate::function::{FunctionHandle, Parity};
use crate::quadrature::{gauss_jacobi, gauss_jacobi_split};
use crate::space::INTERIOR_MARGIN;

/// Largest degree held in monomial form or in the cached norm table.
pub const MAX_DEGREE: usize = 64;

/// Exponent of the Fourier-Jacobi weight (1-x)^2 (1+x)^2.
pub const FJ_EXPONENT: f64 = 2.0;

/// Algebraic polynomial in the monomial basis, `coeffs[k]` multiplying x^k.
///
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + other.coeffs.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0.0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    pub fn parity(&self) -> Parity {
        let odd_zero = self.coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0);
        let even_zero = self.coeffs.iter().step_by(2).all(|&c| c == 0.0);
        match (even_zero, odd_zero) {
            (_, true) => Parity::Even,
            (true, false) => Parity::Odd,
            _ => Parity::None,
        }
    }

    pub fn to_handle(&self, label: impl Into<String>) -> FunctionHandle {
        let (p, d1, d2) = (self.clone(), self.derivative(), self.derivative().derivative());
        FunctionHandle::new(label, move |x| p.eval(x))
            .with_derivatives(move |x| d1.eval(x), move |x| d2.eval(x))
            .with_parity(self.parity())
    }
}

fn check_ab(a: f64, b: f64) -> Result<()> {
    if !(a > -1.0 && b > -1.0) {
        return invalid(format!("Jacobi parameters must exceed -1, got ({a}, {b})"));
    }
    Ok(())
}

/// Standard (unnormalized) P_n^{(a,b)}(x) by the three-term recurrence.
fn jacobi_standard(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
    for k in 2..=n {
        let (c0, c1, c2, c3) = recurrence_coeffs(k, a, b);
        let next = ((c1 * x + c2) * cur - c3 * prev) / c0;
        prev = cur;
        cur = next;
    }
    cur
}

/// c0 P_k = (c1 x + c2) P_{k-1} - c3 P_{k-2}, valid for k >= 2.
fn recurrence_coeffs(k: usize, a: f64, b: f64) -> (f64, f64, f64, f64) {
    let k = k as f64;
    let s = 2.0 * k + a + b;
    let c0 = 2.0 * k * (k + a + b) * (s - 2.0);
    let c1 = (s - 1.0) * s * (s - 2.0);
    let c2 = (s - 1.0) * (a * a - b * b);
    let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    (c0, c1, c2, c3)
}

/// Degree-n Jacobi polynomial for the weight (1-x)^a (1+x)^b, scaled to equal
/// 1 at x = 1.
pub fn jacobi_eval(n: usize, a: f64, b: f64, x: f64) -> Result<f64> {
    check_ab(a, b)?;
    if !(x.abs() <= 1.0) {
        return invalid(format!("x = {x} outside [-1, 1]"));
    }
    // same operation sequence at x and at 1, so the value at 1 is exactly 1
    Ok(jacobi_standard(n, a, b, x) / jacobi_standard(n, a, b, 1.0))
}

/// Values of the normalized P_0..=P_max at x.
pub fn jacobi_basis(max: usize, a: f64, b: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    jacobi_basis_into(max, a, b, x, &mut out);
    out
}

pub(crate) fn jacobi_basis_into(max: usize, a: f64, b: f64, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if max == 0 {
        return;
    }
    // standard recurrence rescaled by P_k(1) = P_{k-1}(1) (k + a) / k
    out.push(1.0 + 0.5 * (a + b + 2.0) * (x - 1.0) / (a + 1.0));
    for k in 2..=max {
        let (c0, c1, c2, c3) = recurrence_coeffs(k, a, b);
        let kf = k as f64;
        let r1 = kf / (kf + a);
        let r2 = r1 * (kf - 1.0) / (kf + a - 1.0);
        let next = ((c1 * x + c2) * out[k - 1] * r1 - c3 * out[k - 2] * r2) / c0;
        out.push(next);
    }
}

/// Monomial coefficients of the normalized Jacobi polynomial.
pub fn jacobi_poly(n: usize, a: f64, b: f64) -> Result<Polynomial> {
    check_ab(a, b)?;
    if n > MAX_DEGREE {
        return invalid(format!("degree {n} exceeds the monomial cap {MAX_DEGREE}"));
    }
    let mut prev = Polynomial::constant(1.0);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = Polynomial::new(vec![(a + 1.0) - 0.5 * (a + b + 2.0), 0.5 * (a + b + 2.0)]);
    for k in 2..=n {
        let (c0, c1, c2, c3) = recurrence_coeffs(k, a, b);
        let next = cur.shift(1).scale(c1).add(&cur.scale(c2)).sub(&prev.scale(c3)).scale(1.0 / c0);
        prev = cur;
        cur = next;
    }
    Ok(cur.scale(1.0 / jacobi_standard(n, a, b, 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DOperatorParams {
    pub nu: f64,
    pub mu: f64,
}

impl Default for DOperatorParams {
    fn default() -> Self {
        Self { nu: 2.0, mu: 2.0 }
    }
}

impl DOperatorParams {
    /// Eigenvalue of D on P_n^{(nu,mu)}: -n (n + nu + mu + 1).
    pub fn eigenvalue(&self, n: usize) -> f64 {
        let n = n as f64;
        -n * (n + self.nu + self.mu + 1.0)
    }

    fn drift(&self, x: f64) -> f64 {
        self.mu - self.nu - (self.nu + self.mu + 2.0) * x
    }
}

pub fn apply_d_poly(p: &Polynomial, d: DOperatorParams) -> Polynomial {
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let second = d2.sub(&d2.shift(2));
    let first = d1.scale(d.mu - d.nu).sub(&d1.shift(1).scale(d.nu + d.mu + 2.0));
    second.add(&first)
}

/// Step for central differences at x: small enough to stay inside (-1, 1).
fn fd_step(x: f64) -> f64 {
    2e-4f64.min(0.5 * (1.0 - x.abs()))
}

/// D f at an interior point, from analytic derivatives when the handle has
/// them and from central differences otherwise.
pub fn apply_d_func(f: &FunctionHandle, d: DOperatorParams, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0 - INTERIOR_MARGIN) {
        return invalid(format!("x = {x} outside the interior margin"));
    }
    let (f1, f2) = match (f.d1(), f.d2()) {
        (Some(d1), Some(d2)) => (d1(x), d2(x)),
        _ => {
            let h = fd_step(x);
            let (fm, f0, fp) = (f.try_eval(x - h)?, f.try_eval(x)?, f.try_eval(x + h)?);
            ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
        }
    };
    let value = (1.0 - x * x) * f2 + d.drift(x) * f1;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(crate::Error::Evaluation { x, value })
    }
}

/// D f as a function handle (no derivatives of its own).
pub fn d_handle(f: &FunctionHandle, d: DOperatorParams) -> FunctionHandle {
    let g = f.clone();
    FunctionHandle::new(format!("D[{}]", f.label()), move |x| {
        apply_d_func(&g, d, x).unwrap_or(f64::NAN)
    })
    .with_singular_points(f.singular_points().iter().copied())
}

/// Squared weighted norms h_n = a_n(P_n) for n <= MAX_DEGREE.
pub fn norm_constants() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let rule = gauss_jacobi(MAX_DEGREE + 8, FJ_EXPONENT, FJ_EXPONENT).expect("fixed rule");
        let mut h = vec![0.0; MAX_DEGREE + 1];
        let mut basis = Vec::new();
        for (x, w) in rule.iter() {
            jacobi_basis_into(MAX_DEGREE, FJ_EXPONENT, FJ_EXPONENT, x, &mut basis);
            for (acc, p) in h.iter_mut().zip(&basis) {
                *acc += w * p * p;
            }
        }
        h
    })
}

/// a_n(f) = integral of f P_n (1-x^2)^2 over (-1, 1).
pub fn fourier_jacobi_coeff(f: &FunctionHandle, n: usize, n_nodes: usize) -> Result<f64> {
    let cuts: Vec<f64> = f.interior_singular_points().collect();
    let rule = gauss_jacobi_split(n_nodes, FJ_EXPONENT, FJ_EXPONENT, &cuts)?;
    rule.try_sum_with(|x| Ok(f.try_eval(x)? * jacobi_eval(n, FJ_EXPONENT, FJ_EXPONENT, x)?))
}

/// All a_0(f)..=a_max(f) in one pass over the nodes.
pub fn fourier_jacobi_coeffs(f: &FunctionHandle, max: usize, n_nodes: usize) -> Result<Vec<f64>> {
    let cuts: Vec<f64> = f.interior_singular_points().collect();
    let rule = gauss_jacobi_split(n_nodes, FJ_EXPONENT, FJ_EXPONENT, &cuts)?;
    let mut out = vec![0.0; max + 1];
    let mut basis = Vec::new();
    for (x, w) in rule.iter() {
        let v = f.try_eval(x)?;
        jacobi_basis_into(max, FJ_EXPONENT, FJ_EXPONENT, x, &mut basis);
        for (acc, p) in out.iter_mut().zip(&basis) {
            *acc += w * v * p;
        }
    }
    Ok(out)
}

/// Coefficients of f in the normalized (2,2) basis: a_n(f) / h_n.
pub fn expand_in_jacobi(f: &FunctionHandle, max: usize, n_nodes: usize) -> Result<Vec<f64>> {
    if max > MAX_DEGREE {
        return invalid(format!("degree cap {max} exceeds {MAX_DEGREE}"));
    }
    let h = norm_constants();
    Ok(fourier_jacobi_coeffs(f, max, n_nodes)?.into_iter().zip(h).map(|(a, h)| a / h).collect())
}

/// Polynomial held as coefficients in the normalized Jacobi basis
/// P_k^{(a,b)} / P_k^{(a,b)}(1). Evaluation runs the recurrence, which stays
/// accurate at degrees where monomial coefficients do not.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct JacobiSeries {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
}

impl JacobiSeries {
    pub fn new(a: f64, b: f64, coeffs: Vec<f64>) -> Self {
        Self { a, b, coeffs }
    }

    pub fn zero(a: f64, b: f64) -> Self {
        Self::new(a, b, Vec::new())
    }

    /// Highest index with a nonzero coefficient; None when all vanish.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        let basis = jacobi_basis(self.coeffs.len() - 1, self.a, self.b, x);
        self.coeffs.iter().zip(&basis).fold(0.0, |acc, (c, p)| acc + c * p)
    }

    /// Derivative, expressed in the (a+1, b+1) basis.
    pub fn derivative(&self) -> Self {
        let (a, b) = (self.a, self.b);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| {
                let nf = n as f64;
                c * nf * (nf + a + b + 1.0) / (2.0 * (a + 1.0))
            })
            .collect();
        Self::new(a + 1.0, b + 1.0, coeffs)
    }

    /// D_{x,a,b} applied through its eigenvalues.
    pub fn apply_d(&self) -> Self {
        let d = DOperatorParams { nu: self.a, mu: self.b };
        let coeffs = self.coeffs.iter().enumerate().map(|(n, c)| c * d.eigenvalue(n)).collect();
        Self::new(self.a, self.b, coeffs)
    }

    pub fn to_monomial(&self) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (n, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                out = out.add(&jacobi_poly(n, self.a, self.b)?.scale(c));
            }
        }
        Ok(out)
    }

    pub fn to_handle(&self, label: impl Into<String>) -> FunctionHandle {
        let d1 = self.derivative();
        let d2 = d1.derivative();
        let s = self.clone();
        FunctionHandle::new(label, move |x| s.eval(x))
            .with_derivatives(move |x| d1.eval(x), move |x| d2.eval(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_jacobi;
    use crate::space::make_grid;
    use approx::assert_relative_eq;

    /// Gram-Schmidt on 1, x, x^2 against (1-x^2)^2 with exact moments
    /// m0 = 16/15, m2 = 16/105, m4 = 16/315 gives x^2 - 1/7, i.e. (7x^2 - 1)/6
    /// after scaling to 1 at x = 1.
    fn gram_schmidt_p2(x: f64) -> f64 {
        let (m0, m2) = (16.0 / 15.0, 16.0 / 105.0);
        let monic = x * x - m2 / m0;
        monic / (1.0 - m2 / m0)
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(jacobi_eval(0, 2.0, 2.0, 0.3).unwrap(), 1.0);
        for &x in &[-0.9, -0.2, 0.0, 0.45, 1.0] {
            assert_relative_eq!(jacobi_eval(1, 2.0, 2.0, x).unwrap(), x, epsilon = 1e-15);
            assert_relative_eq!(jacobi_eval(2, 2.0, 2.0, x).unwrap(), gram_schmidt_p2(x), epsilon = 1e-15);
            assert_relative_eq!(gram_schmidt_p2(x), (7.0 * x * x - 1.0) / 6.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn coefficient_forms() {
        assert_eq!(jacobi_poly(1, 2.0, 2.0).unwrap().coeffs(), &[0.0, 1.0]);
        let p2 = jacobi_poly(2, 2.0, 2.0).unwrap();
        assert_relative_eq!(p2.coeffs()[0], -1.0 / 6.0, epsilon = 1e-15);
        assert_eq!(p2.coeffs()[1], 0.0);
        assert_relative_eq!(p2.coeffs()[2], 7.0 / 6.0, epsilon = 1e-15);
        assert_eq!(jacobi_poly(0, 0.3, 1.7).unwrap().coeffs(), &[1.0]);
        assert!(jacobi_poly(MAX_DEGREE + 1, 2.0, 2.0).is_err());
        assert!(jacobi_eval(3, -1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn normalization_is_exact() {
        for n in 0..=32 {
            for &(a, b) in &[(2.0, 2.0), (0.0, 4.0), (1.8, 1.8), (0.5, -0.5)] {
                assert_eq!(jacobi_eval(n, a, b, 1.0).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn recurrence_agrees_with_coefficients() {
        let grid = make_grid(64);
        for n in 0..=32 {
            let p = jacobi_poly(n, 2.0, 2.0).unwrap();
            for &x in &grid {
                let r = jacobi_eval(n, 2.0, 2.0, x).unwrap();
                // Horner rounding is bounded by the absolute-value polynomial
                let scale: f64 = p.coeffs().iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs());
                assert!((p.eval(x) - r).abs() <= 64.0 * f64::EPSILON * scale.max(1.0), "n={n} x={x}");
                assert!((jacobi_basis(n, 2.0, 2.0, x)[n] - r).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn orthogonality() {
        let rule = gauss_jacobi(64, 2.0, 2.0).unwrap();
        for m in 0..=16 {
            for n in 0..m {
                let ip = rule.sum_with(|x| {
                    jacobi_eval(m, 2.0, 2.0, x).unwrap() * jacobi_eval(n, 2.0, 2.0, x).unwrap()
                });
                assert!(ip.abs() <= 1e-10, "m={m} n={n}: {ip}");
            }
        }
    }

    #[test]
    fn eigen_relation() {
        let d = DOperatorParams::default();
        for n in 0..=16 {
            let p = jacobi_poly(n, 2.0, 2.0).unwrap();
            let lhs = apply_d_poly(&p, d);
            let rhs = p.scale(-(n as f64) * (n as f64 + 5.0));
            let diff = lhs.sub(&rhs);
            let scale = rhs.coeffs().iter().fold(1.0f64, |m, c| m.max(c.abs()));
            assert!(diff.coeffs().iter().all(|c| c.abs() <= 1e-13 * scale), "n={n}: {diff:?}");
        }
    }

    #[test]
    fn d_operator_examples() {
        let d = DOperatorParams::default();
        assert!(apply_d_poly(&Polynomial::constant(3.0), d).is_zero());
        let x = Polynomial::new(vec![0.0, 1.0]);
        assert_eq!(apply_d_poly(&x, d), Polynomial::new(vec![0.0, -6.0]));
        let p2 = jacobi_poly(2, 2.0, 2.0).unwrap();
        let got = apply_d_poly(&p2, d);
        let want = p2.scale(-14.0);
        for (g, w) in got.coeffs().iter().zip(want.coeffs()) {
            assert_relative_eq!(g, w, epsilon = 1e-14);
        }

        let sq = FunctionHandle::new("x^2", |x| x * x).with_derivatives(|x| 2.0 * x, |_| 2.0);
        assert_eq!(apply_d_func(&sq, d, 0.0).unwrap(), 2.0);
        let lin = Polynomial::new(vec![0.0, 1.0]).to_handle("x");
        assert_relative_eq!(apply_d_func(&lin, d, 0.5).unwrap(), -3.0, epsilon = 1e-15);
        assert!(apply_d_func(&lin, d, 1.0).is_err());
    }

    #[test]
    fn finite_differences_match_analytic() {
        let d = DOperatorParams::default();
        let analytic = |x: f64| (1.0 - x * x) * (-x.sin()) - 6.0 * x * x.cos();
        let bare = FunctionHandle::new("sin", f64::sin);
        for &x in &[0.2, -0.7, 0.95, 0.999] {
            let got = apply_d_func(&bare, d, x).unwrap();
            assert!((got - analytic(x)).abs() <= 1e-6, "x={x}: {got} vs {}", analytic(x));
        }
        // stays inside the domain near the edge
        let edge = FunctionHandle::new("(1-x)^(3/4)", |x: f64| (1.0 - x).powf(0.75));
        assert!(apply_d_func(&edge, d, 1.0 - 2e-6).unwrap().is_finite());
    }

    #[test]
    fn fourier_coefficients() {
        let one = FunctionHandle::constant(1.0);
        let x = FunctionHandle::new("x", |x| x);
        assert_relative_eq!(fourier_jacobi_coeff(&one, 0, 32).unwrap(), 16.0 / 15.0, epsilon = 1e-14);
        assert!(fourier_jacobi_coeff(&one, 1, 32).unwrap().abs() < 1e-15);
        assert_relative_eq!(fourier_jacobi_coeff(&x, 1, 32).unwrap(), 16.0 / 105.0, epsilon = 1e-15);
    }

    #[test]
    fn norm_constants_match_closed_form() {
        let gamma = crate::quadrature::gamma;
        for (n, &h) in norm_constants().iter().enumerate() {
            let nf = n as f64;
            let std_sq = 32.0 / (2.0 * nf + 5.0) * gamma(nf + 3.0) * gamma(nf + 3.0)
                / (gamma(nf + 5.0) * gamma(nf + 1.0));
            let at_one = gamma(nf + 3.0) / (2.0 * gamma(nf + 1.0));
            assert_relative_eq!(h, std_sq / (at_one * at_one), max_relative = 1e-12);
        }
    }

    #[test]
    fn expansions() {
        let p3 = jacobi_poly(3, 2.0, 2.0).unwrap().to_handle("P3");
        let c = expand_in_jacobi(&p3, 10, 64).unwrap();
        for (k, v) in c.iter().enumerate() {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((v - want).abs() <= 1e-10, "k={k} {v}");
        }
        let one = expand_in_jacobi(&FunctionHandle::constant(1.0), 6, 32).unwrap();
        assert_relative_eq!(one[0], 1.0, epsilon = 1e-14);
        assert!(one[1..].iter().all(|v| v.abs() < 1e-14));

        // x^2 = 1/7 + (6/7) P2 by the Gram-Schmidt construction above
        let sq = FunctionHandle::new("x^2", |x| x * x);
        let c = expand_in_jacobi(&sq, 8, 32).unwrap();
        assert_relative_eq!(c[0], 1.0 / 7.0, epsilon = 1e-14);
        assert_relative_eq!(c[2], 6.0 / 7.0, epsilon = 1e-14);
        for (k, v) in c.iter().enumerate() {
            if k != 0 && k != 2 {
                assert!(v.abs() < 1e-13, "k={k} {v}");
            }
        }
    }

    #[test]
    fn expansion_residual_shrinks() {
        let f = FunctionHandle::new("exp", f64::exp);
        let rule = gauss_jacobi(128, 2.0, 2.0).unwrap();
        let residual = |n: usize| {
            let s = JacobiSeries::new(2.0, 2.0, expand_in_jacobi(&f, n, 128).unwrap());
            rule.sum_with(|x| (x.exp() - s.eval(x)).powi(2)).sqrt()
        };
        let (r4, r8) = (residual(4), residual(8));
        assert!(r8 < 0.5 * r4, "{r4} {r8}");
    }

    #[test]
    fn series_derivative_and_monomial_form() {
        let s = JacobiSeries::new(2.0, 2.0, vec![0.3, -1.2, 0.7, 0.05, 0.4]);
        let mono = s.to_monomial().unwrap();
        let dm = mono.derivative();
        let ds = s.derivative();
        let d2s = ds.derivative();
        for &x in &make_grid(17) {
            assert_relative_eq!(s.eval(x), mono.eval(x), epsilon = 1e-13);
            assert_relative_eq!(ds.eval(x), dm.eval(x), epsilon = 1e-12);
            assert_relative_eq!(d2s.eval(x), dm.derivative().eval(x), epsilon = 1e-11);
        }
        let d = DOperatorParams::default();
        let lhs = s.apply_d().to_monomial().unwrap();
        let rhs = apply_d_poly(&mono, d);
        for &x in &make_grid(9) {
            assert_relative_eq!(lhs.eval(x), rhs.eval(x), epsilon = 1e-11);
        }
    }

    #[test]
    fn polynomial_parity() {
        assert_eq!(jacobi_poly(4, 2.0, 2.0).unwrap().parity(), Parity::Even);
        assert_eq!(jacobi_poly(5, 2.0, 2.0).unwrap().parity(), Parity::Odd);
        assert_eq!(Polynomial::new(vec![1.0, 1.0]).parity(), Parity::None);
    }
}
