//! Gauss-type quadrature rules on (-1, 1).
//!
//! Gauss-Legendre and Gauss-Jacobi nodes come from the Golub-Welsch
//! construction: the eigenvalues of the symmetric tridiagonal Jacobi matrix
//! built from the three-term recurrence are the nodes, and the squared first
//! components of its eigenvectors times the total mass are the weights. Only the
//! first eigenvector row is tracked through the implicit QL sweeps, so a rule of
//! size n costs O(n^2).
//!
//! Every sum is taken in ascending node order so repeated calls are
//! bit-identical.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;
use statrs::function::gamma::gamma as gamma_lanczos;

use crate::error::{invalid, Error, Result};
use crate::function::FunctionHandle;

pub const MAX_NODES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleKind {
    Legendre,
    Chebyshev1,
    Jacobi { a: f64, b: f64 },
    /// Jacobi weight (1-x)^a (1+x)^b integrated panel by panel.
    CompositeJacobi { a: f64, b: f64 },
    /// Chebyshev measure dz / sqrt(1 - z^2) integrated panel by panel in the angle.
    CompositeChebyshev1,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Sum of w_i g(x_i) in ascending node order, without finiteness checks.
    pub fn sum_with(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (x, w) in self.iter() {
            acc += w * g(x);
        }
        acc
    }

    /// Sum of w_i g(x_i); fails on the first non-finite value of `g`.
    pub fn try_sum_with(&self, mut g: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (x, w) in self.iter() {
            let value = g(x)?;
            if !value.is_finite() {
                return Err(Error::Evaluation { x, value });
            }
            acc += w * value;
        }
        Ok(acc)
    }

    /// Nodes and weights of this rule affinely mapped onto [lo, hi].
    ///
    /// Only meaningful for unweighted (Legendre) rules.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        self.iter().map(move |(s, w)| (lo + half * (s + 1.0), half * w))
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_NODES {
        return invalid(format!("node count {n} outside 1..={MAX_NODES}"));
    }
    Ok(())
}

pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    check_size(n)?;
    let rule = golub_welsch(n, 0.0, 0.0)?;
    Ok(QuadratureRule { kind: RuleKind::Legendre, nodes: rule.0.clone(), weights: rule.1.clone() })
}

/// Gauss-Chebyshev rule of the first kind: nodes cos((2k-1)pi/(2n)), weights pi/n.
pub fn gauss_chebyshev(n: usize) -> Result<QuadratureRule> {
    check_size(n)?;
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let hit = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&n).cloned();
    let nodes = match hit {
        Some(nodes) => nodes,
        None => {
            let mut nodes: Vec<f64> = (1..=n)
                .rev()
                .map(|k| ((2 * k - 1) as f64 * PI / (2 * n) as f64).cos())
                .collect();
            // cos(pi/2) is 6e-17, not 0
            if n % 2 == 1 {
                nodes[n / 2] = 0.0;
            }
            let nodes = Arc::new(nodes);
            cache.lock().unwrap_or_else(|e| e.into_inner()).insert(n, nodes.clone());
            nodes
        }
    };
    let w = PI / n as f64;
    Ok(QuadratureRule { kind: RuleKind::Chebyshev1, nodes: nodes.to_vec(), weights: vec![w; n] })
}

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    check_size(n)?;
    check_jacobi_params(a, b)?;
    let rule = golub_welsch(n, a, b)?;
    Ok(QuadratureRule { kind: RuleKind::Jacobi { a, b }, nodes: rule.0.clone(), weights: rule.1.clone() })
}

fn check_jacobi_params(a: f64, b: f64) -> Result<()> {
    if !(a > -1.0 && b > -1.0) || !a.is_finite() || !b.is_finite() {
        return invalid(format!("Jacobi exponents must exceed -1, got a = {a}, b = {b}"));
    }
    Ok(())
}

/// Composite Gauss-Jacobi rule for (1-x)^a (1+x)^b with panels split at `cuts`.
///
/// Each panel gets `n` nodes. The end panels carry the endpoint singularity of
/// the weight in their own Jacobi rule; interior panels use Gauss-Legendre with
/// the weight folded into the node weights. With no interior cuts this is just
/// [`gauss_jacobi`].
pub fn gauss_jacobi_split(n: usize, a: f64, b: f64, cuts: &[f64]) -> Result<QuadratureRule> {
    check_size(n)?;
    check_jacobi_params(a, b)?;
    let mut inner: Vec<f64> = cuts.iter().copied().filter(|c| c.abs() < 1.0 - 1e-12).collect();
    crate::function::normalize_points(&mut inner);
    if inner.is_empty() {
        return gauss_jacobi(n, a, b);
    }
    let mut bounds = Vec::with_capacity(inner.len() + 2);
    bounds.push(-1.0);
    bounds.extend(inner);
    bounds.push(1.0);

    let legendre = golub_welsch(n, 0.0, 0.0)?;
    let left = golub_welsch(n, 0.0, b)?;
    let right = golub_welsch(n, a, 0.0)?;
    let last = bounds.len() - 2;

    let mut nodes = Vec::with_capacity(n * (bounds.len() - 1));
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (i, pair) in bounds.windows(2).enumerate() {
        let (lo, hi) = (pair[0], pair[1]);
        let h = 0.5 * (hi - lo);
        let (base, mode) = if i == 0 {
            (&left, 1)
        } else if i == last {
            (&right, 2)
        } else {
            (&legendre, 0)
        };
        for (&s, &w) in base.0.iter().zip(&base.1) {
            let x = lo + h * (1.0 + s);
            let factor = match mode {
                // (1+x)^b = h^b (1+s)^b is inside the rule
                1 => h.powf(1.0 + b) * (1.0 - x).powf(a),
                // (1-x)^a = h^a (1-s)^a is inside the rule
                2 => h.powf(1.0 + a) * (1.0 + x).powf(b),
                _ => h * (1.0 - x).powf(a) * (1.0 + x).powf(b),
            };
            nodes.push(x);
            weights.push(w * factor);
        }
    }
    Ok(QuadratureRule { kind: RuleKind::CompositeJacobi { a, b }, nodes, weights })
}

/// Rule for the Chebyshev measure dz / sqrt(1 - z^2), split at `z_cuts`.
///
/// Substituting z = cos(phi) turns the measure into d(phi) on [0, pi]; each
/// angular panel gets an `n`-point Gauss-Legendre rule, so integrands with
/// kinks at the cuts keep spectral accuracy.
pub fn chebyshev_split(n: usize, z_cuts: &[f64]) -> Result<QuadratureRule> {
    check_size(n)?;
    let mut inner: Vec<f64> = z_cuts.iter().copied().filter(|c| c.abs() < 1.0 - 1e-12).collect();
    crate::function::normalize_points(&mut inner);
    if inner.is_empty() {
        return gauss_chebyshev(n);
    }
    let legendre = gauss_legendre(n)?;
    // ascending z is descending phi
    let mut phis = Vec::with_capacity(inner.len() + 2);
    phis.push(PI);
    phis.extend(inner.iter().map(|z| z.acos()));
    phis.push(0.0);
    let mut nodes = Vec::with_capacity(n * (phis.len() - 1));
    let mut weights = Vec::with_capacity(nodes.capacity());
    for pair in phis.windows(2) {
        let (hi, lo) = (pair[0], pair[1]);
        // walk the panel from high phi to low phi so z ascends
        let pts: Vec<(f64, f64)> = legendre.mapped(lo, hi).collect();
        for &(phi, w) in pts.iter().rev() {
            nodes.push(phi.cos());
            weights.push(w);
        }
    }
    Ok(QuadratureRule { kind: RuleKind::CompositeChebyshev1, nodes, weights })
}

pub fn integrate(f: &FunctionHandle, rule: &QuadratureRule) -> Result<f64> {
    rule.try_sum_with(|x| f.try_eval(x))
}

/// Integral of f(z) dz / sqrt(1 - z^2) over (-1, 1) with an n-point Chebyshev rule.
pub fn integrate_unit_circle(f: &FunctionHandle, n: usize) -> Result<f64> {
    integrate(f, &gauss_chebyshev(n)?)
}

/// Recurrence coefficients (alpha_k, beta_k) of the monic Jacobi polynomials.
pub(crate) fn jacobi_recurrence(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        alpha.push(if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        });
        beta.push(match k {
            0 => jacobi_mass(a, b),
            1 => 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab)),
            _ => 4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0)),
        });
    }
    (alpha, beta)
}

/// Integral of (1-x)^a (1+x)^b over (-1, 1).
pub fn jacobi_mass(a: f64, b: f64) -> f64 {
    2f64.powf(a + b + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(a + b + 2.0)
}

/// Gamma for positive arguments, shifted into [1, 2) first so integer and
/// half-integer arguments come out exact to rounding.
pub(crate) fn gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut x = x;
    let mut scale = 1.0;
    while x >= 2.0 {
        x -= 1.0;
        scale *= x;
    }
    while x < 1.0 {
        scale /= x;
        x += 1.0;
    }
    if x == 1.0 {
        scale
    } else if x == 1.5 {
        scale * 0.5 * PI.sqrt()
    } else {
        scale * gamma_lanczos(x)
    }
}

type NodePairs = Arc<(Vec<f64>, Vec<f64>)>;

/// Memoized [`golub_welsch_uncached`]; rules are pure functions of (n, a, b).
fn golub_welsch(n: usize, a: f64, b: f64) -> Result<NodePairs> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64, u64), NodePairs>>> = OnceLock::new();
    let key = (n, a.to_bits(), b.to_bits());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(hit.clone());
    }
    let rule = Arc::new(golub_welsch_uncached(n, a, b)?);
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(key, rule.clone());
    Ok(rule)
}

fn golub_welsch_uncached(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (alpha, beta) = jacobi_recurrence(n, a, b);
    let mut d = alpha;
    // e[i] couples rows i and i+1
    let mut e: Vec<f64> = (0..n).map(|i| if i + 1 < n { beta[i + 1].sqrt() } else { 0.0 }).collect();
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    tridiagonal_ql(&mut d, &mut e, &mut z)?;

    let mass = beta[0];
    let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z).map(|(x, v)| (x, mass * v * v)).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    if a == b {
        symmetrize(&mut pairs);
    }
    Ok(pairs.into_iter().unzip())
}

/// Mirror-average a rule whose weight is even so x_i = -x_{n-1-i} holds exactly.
fn symmetrize(pairs: &mut [(f64, f64)]) {
    let n = pairs.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (pairs[j].0 - pairs[i].0);
        let w = 0.5 * (pairs[i].1 + pairs[j].1);
        pairs[i] = (-x, w);
        pairs[j] = (x, w);
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// On return `d` holds the eigenvalues and `z` the first component of each
/// normalized eigenvector.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Convergence { method: "tridiagonal QL", iterations: iter, trace: vec![] });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let bb = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
