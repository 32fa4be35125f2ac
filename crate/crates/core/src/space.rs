//! Weighted spaces L_{p,alpha}: the norm of f is the L_p norm of
//! f(x) (1-x^2)^alpha on [-1, 1].

use std::f64::consts::PI;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::function::FunctionHandle;
use crate::quadrature::{gauss_jacobi_split, QuadratureRule};

/// Distance kept from +-1 for every pointwise evaluation.
pub const INTERIOR_MARGIN: f64 = 1e-6;

pub const DEFAULT_NORM_NODES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "oo" => Some(Exponent::Infinity),
            other => other.parse::<f64>().ok().map(|p| {
                if p.is_infinite() && p > 0.0 {
                    Exponent::Infinity
                } else {
                    Exponent::Finite(p)
                }
            }),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceParams {
    pub p: Exponent,
    pub alpha: f64,
}

impl SpaceParams {
    pub fn new(p: Exponent, alpha: f64) -> Self {
        Self { p, alpha }
    }

    pub fn finite(p: f64, alpha: f64) -> Self {
        Self { p: Exponent::Finite(p), alpha }
    }

    pub fn sup(alpha: f64) -> Self {
        Self { p: Exponent::Infinity, alpha }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }
}

impl Default for SpaceParams {
    fn default() -> Self {
        Self::finite(2.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admissibility {
    Valid,
    Invalid(String),
}

impl Admissibility {
    pub fn is_valid(&self) -> bool {
        matches!(self, Admissibility::Valid)
    }
}

/// Which hypothesis table a parameter pair is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamRegime {
    /// Boundedness of the translation, modulus/K-functional equivalence and the
    /// direct/inverse theorems.
    Equivalence,
    /// The O(n^-2) direct estimate for functions with D f in the space.
    DirectEstimate,
    /// Bernstein-Markov inequalities for polynomials.
    BernsteinMarkov,
}

/// Admissibility of (p, alpha) for the equivalence results:
/// 1/2 < alpha <= 1 for p = 1, 1 - 1/(2p) < alpha < 3/2 - 1/(2p) for 1 < p < inf,
/// 1 <= alpha < 3/2 for p = inf.
pub fn validate_params(p: Exponent, alpha: f64) -> Result<Admissibility> {
    validate_params_for(ParamRegime::Equivalence, p, alpha)
}

pub fn validate_params_for(regime: ParamRegime, p: Exponent, alpha: f64) -> Result<Admissibility> {
    if let Exponent::Finite(pv) = p {
        if pv.is_nan() || pv < 1.0 {
            return invalid(format!("p must be >= 1, got {pv}"));
        }
    }
    if !alpha.is_finite() {
        return invalid(format!("alpha must be finite, got {alpha}"));
    }
    // (lower, lower inclusive, upper, upper inclusive)
    let (lo, lo_incl, hi, hi_incl) = match (regime, p) {
        (ParamRegime::Equivalence, Exponent::Finite(pv)) if pv == 1.0 => (0.5, false, 1.0, true),
        (ParamRegime::Equivalence, Exponent::Finite(pv)) => {
            (1.0 - 0.5 / pv, false, 1.5 - 0.5 / pv, false)
        }
        (ParamRegime::Equivalence, Exponent::Infinity) => (1.0, true, 1.5, false),
        (ParamRegime::DirectEstimate, Exponent::Finite(pv)) if pv == 1.0 => (-0.5, false, 2.0, true),
        (ParamRegime::DirectEstimate, Exponent::Finite(pv)) => (-0.5 / pv, false, 2.5 - 0.5 / pv, false),
        (ParamRegime::DirectEstimate, Exponent::Infinity) => (0.0, true, 2.5, false),
        (ParamRegime::BernsteinMarkov, Exponent::Finite(pv)) => (-1.0 / pv, false, f64::INFINITY, false),
        (ParamRegime::BernsteinMarkov, Exponent::Infinity) => (0.0, true, f64::INFINITY, false),
    };
    let above = if lo_incl { alpha >= lo } else { alpha > lo };
    let below = if hi_incl { alpha <= hi } else { alpha < hi };
    if above && below {
        Ok(Admissibility::Valid)
    } else {
        let l = if lo_incl { '[' } else { '(' };
        let r = if hi_incl { ']' } else { ')' };
        Ok(Admissibility::Invalid(format!(
            "alpha = {alpha} outside {l}{lo}, {hi}{r} for p = {p} ({regime:?})"
        )))
    }
}

/// Chebyshev-distributed interior points cos((2k-1) pi / (2n)), k = 1..n,
/// clamped to |x| <= 1 - INTERIOR_MARGIN.
pub fn make_grid(n: usize) -> Vec<f64> {
    let n = n.max(1);
    let edge = 1.0 - INTERIOR_MARGIN;
    (1..=n)
        .map(|k| {
            let x = ((2 * k - 1) as f64 * PI / (2 * n) as f64).cos();
            if 2 * k - 1 == n {
                0.0
            } else {
                x.clamp(-edge, edge)
            }
        })
        .collect()
}

enum NormRule {
    Quadrature { p: f64, rule: QuadratureRule },
    Sup { points: Vec<f64>, factors: Vec<f64> },
}

/// A discretized weighted norm: the nodes at which a function must be known
/// and the reduction that turns those values into ||f||_{p,alpha}.
pub struct WeightedNorm {
    params: SpaceParams,
    rule: NormRule,
}

impl WeightedNorm {
    /// `singular` lists points where the integrand may have kinks; interior
    /// ones split the quadrature panels (finite p) or join the grid (p = inf).
    pub fn new(params: SpaceParams, n_nodes: usize, singular: &[f64]) -> Result<Self> {
        let rule = match params.p {
            Exponent::Finite(p) => {
                let exponent = p * params.alpha;
                if exponent <= -1.0 {
                    return invalid(format!(
                        "p * alpha = {exponent} <= -1: weight is not integrable"
                    ));
                }
                NormRule::Quadrature { p, rule: gauss_jacobi_split(n_nodes, exponent, exponent, singular)? }
            }
            Exponent::Infinity => {
                let edge = 1.0 - INTERIOR_MARGIN;
                let mut points = make_grid(n_nodes.max(2));
                points.push(edge);
                points.push(-edge);
                points.extend(singular.iter().copied().filter(|s| s.abs() < edge));
                crate::function::normalize_points(&mut points);
                let factors = points.iter().map(|x| (1.0 - x * x).powf(params.alpha)).collect();
                NormRule::Sup { points, factors }
            }
        };
        Ok(Self { params, rule })
    }

    pub fn params(&self) -> SpaceParams {
        self.params
    }

    /// Abscissae at which values must be supplied, ascending.
    pub fn points(&self) -> &[f64] {
        match &self.rule {
            NormRule::Quadrature { rule, .. } => rule.nodes(),
            NormRule::Sup { points, .. } => points,
        }
    }

    /// Norm of the function whose values at [`Self::points`] are `values`.
    pub fn of_values(&self, values: &[f64]) -> f64 {
        match &self.rule {
            NormRule::Quadrature { p, rule } => {
                let mut acc = 0.0;
                if *p == 2.0 {
                    for (w, v) in rule.weights().iter().zip(values) {
                        acc += w * v * v;
                    }
                    acc.sqrt()
                } else if *p == 1.0 {
                    for (w, v) in rule.weights().iter().zip(values) {
                        acc += w * v.abs();
                    }
                    acc
                } else {
                    for (w, v) in rule.weights().iter().zip(values) {
                        acc += w * v.abs().powf(*p);
                    }
                    acc.powf(1.0 / p)
                }
            }
            NormRule::Sup { factors, .. } => {
                let mut best = 0.0f64;
                for (f, v) in factors.iter().zip(values) {
                    best = best.max(f * v.abs());
                }
                best
            }
        }
    }

    /// Weight factors (1-x^2)^alpha at the grid points of the sup norm
    /// (None for finite p).
    pub fn sup_factors(&self) -> Option<&[f64]> {
        match &self.rule {
            NormRule::Quadrature { .. } => None,
            NormRule::Sup { factors, .. } => Some(factors),
        }
    }

    /// Quadrature weights for finite p (None for the sup norm).
    pub fn weights(&self) -> Option<&[f64]> {
        match &self.rule {
            NormRule::Quadrature { rule, .. } => Some(rule.weights()),
            NormRule::Sup { .. } => None,
        }
    }

    pub fn sample(&self, f: &FunctionHandle) -> Result<Vec<f64>> {
        self.points().iter().map(|&x| f.try_eval(x)).collect()
    }

    pub fn norm(&self, f: &FunctionHandle) -> Result<f64> {
        Ok(self.of_values(&self.sample(f)?))
    }
}

/// ||f||_{p,alpha} with `n_nodes` Gauss-Jacobi nodes (finite p) or Chebyshev
/// grid points (p = inf).
pub fn weighted_norm(f: &FunctionHandle, params: SpaceParams, n_nodes: usize) -> Result<f64> {
    WeightedNorm::new(params, n_nodes, f.singular_points())?.norm(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn corpus_like() -> Vec<FunctionHandle> {
        vec![
            FunctionHandle::new("x", |x| x),
            FunctionHandle::new("x^2", |x| x * x),
            FunctionHandle::new("|x|", f64::abs).with_singular_points([0.0]),
            FunctionHandle::new("(1-x)^(3/4)", |x: f64| (1.0 - x).powf(0.75)).with_singular_points([1.0]),
            FunctionHandle::new("sin 3x", |x: f64| (3.0 * x).sin()),
        ]
    }

    #[test]
    fn truth_table() {
        use Exponent::*;
        let cases = [
            // p = 1: (1/2, 1]
            (Finite(1.0), 0.5, false),
            (Finite(1.0), 0.75, true),
            (Finite(1.0), 1.0, true),
            (Finite(1.0), 1.01, false),
            // p = 2: (3/4, 5/4)
            (Finite(2.0), 0.75, false),
            (Finite(2.0), 1.0, true),
            (Finite(2.0), 1.25, false),
            (Finite(4.0), 0.9, true),
            // p = inf: [1, 3/2)
            (Infinity, 0.5, false),
            (Infinity, 1.0, true),
            (Infinity, 1.2, true),
            (Infinity, 1.5, false),
        ];
        for (p, alpha, expected) in cases {
            assert_eq!(validate_params(p, alpha).unwrap().is_valid(), expected, "p={p} alpha={alpha}");
        }
        assert!(validate_params(Finite(0.5), 1.0).is_err());
        assert!(validate_params(Finite(f64::NAN), 1.0).is_err());
    }

    #[test]
    fn other_regimes() {
        use Exponent::*;
        let de = ParamRegime::DirectEstimate;
        assert!(validate_params_for(de, Finite(1.0), 2.0).unwrap().is_valid());
        assert!(!validate_params_for(de, Finite(1.0), -0.5).unwrap().is_valid());
        assert!(validate_params_for(de, Finite(2.0), 0.0).unwrap().is_valid());
        assert!(!validate_params_for(de, Finite(2.0), 2.25).unwrap().is_valid());
        assert!(validate_params_for(de, Infinity, 0.0).unwrap().is_valid());
        let bm = ParamRegime::BernsteinMarkov;
        assert!(validate_params_for(bm, Finite(2.0), -0.4).unwrap().is_valid());
        assert!(!validate_params_for(bm, Finite(2.0), -0.5).unwrap().is_valid());
        assert!(!validate_params_for(bm, Infinity, -0.1).unwrap().is_valid());
    }

    #[test]
    fn norm_examples() {
        let zero = FunctionHandle::constant(0.0);
        assert_eq!(weighted_norm(&zero, SpaceParams::default(), 64).unwrap(), 0.0);
        assert_eq!(weighted_norm(&zero, SpaceParams::sup(1.2), 64).unwrap(), 0.0);

        let one = FunctionHandle::constant(1.0);
        assert_relative_eq!(
            weighted_norm(&one, SpaceParams::finite(2.0, 1.0), 64).unwrap(),
            (16.0f64 / 15.0).sqrt(),
            epsilon = 1e-14
        );

        // max of x (1 - x^2) is at 1/sqrt(3)
        let x = FunctionHandle::new("x", |x| x);
        let got = weighted_norm(&x, SpaceParams::sup(1.0), 256).unwrap();
        assert_relative_eq!(got, 2.0 / (3.0 * 3f64.sqrt()), max_relative = 1e-4);
    }

    #[test]
    fn non_integrable_weight_rejected() {
        let one = FunctionHandle::constant(1.0);
        assert!(weighted_norm(&one, SpaceParams::finite(2.0, -0.6), 32).is_err());
    }

    #[test]
    fn grid_examples() {
        let g = make_grid(2);
        let h = 2f64.sqrt() / 2.0;
        assert!((g[0] - h).abs() < 1e-15 && (g[1] + h).abs() < 1e-15);
        assert!(make_grid(3).contains(&0.0));
        assert!(make_grid(64).iter().all(|x| x.abs() < 1.0));
        assert!(make_grid(100_000).iter().all(|x| x.abs() <= 1.0 - INTERIOR_MARGIN));
    }

    #[test]
    fn monotone_in_alpha() {
        for f in corpus_like() {
            for p in [1.0, 2.0, 3.5] {
                let mut last = f64::INFINITY;
                for alpha in [0.0, 0.5, 1.0, 1.3, 2.0] {
                    let v = weighted_norm(&f, SpaceParams::finite(p, alpha), 128).unwrap();
                    assert!(v <= last * (1.0 + 1e-12), "{} p={p} alpha={alpha}", f.label());
                    last = v;
                }
            }
        }
    }

    #[test]
    fn triangle_inequality_on_pairs() {
        let fs = corpus_like();
        for params in [SpaceParams::finite(2.0, 1.0), SpaceParams::finite(1.0, 0.9), SpaceParams::sup(1.2)] {
            for f in &fs {
                for g in &fs {
                    let s = weighted_norm(&f.add(g), params, 256).unwrap();
                    let a = weighted_norm(f, params, 256).unwrap();
                    let b = weighted_norm(g, params, 256).unwrap();
                    assert!(s <= a + b + 1e-10);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn homogeneity(c in -50.0f64..50.0, k in 0usize..5, p in 1.0f64..6.0) {
            let f = &corpus_like()[k];
            let params = SpaceParams::finite(p, 1.0);
            let base = weighted_norm(f, params, 64).unwrap();
            let scaled = weighted_norm(&f.scale(c), params, 64).unwrap();
            prop_assert!((scaled - c.abs() * base).abs() <= 1e-12 * (c.abs() * base).max(1e-300));
        }
    }
}
