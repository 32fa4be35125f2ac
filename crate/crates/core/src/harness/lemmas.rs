//! Identity and boundedness checks for the individual operators.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;

use super::config::Config;
use super::corpus::{corpus, CorpusEntry};
use super::report::{CaseResult, VerificationReport};
use crate::approx::{
    bernstein_markov_ratios, best_approx, jackson_degree_bound, jackson_handle, jackson_operator, k_functional,
    JacksonParams,
};
use crate::error::Result;
use crate::function::FunctionHandle;
use crate::jacobi::{
    apply_d_poly, expand_in_jacobi, fourier_jacobi_coeffs, jacobi_basis, jacobi_eval, jacobi_poly, norm_constants,
    DOperatorParams, JacobiSeries, Polynomial,
};
use crate::quadrature::{gamma, gauss_chebyshev, gauss_jacobi, gauss_jacobi_split, gauss_legendre, QuadratureRule};
use crate::space::{make_grid, validate_params, validate_params_for, ParamRegime, SpaceParams, WeightedNorm};
use crate::translation::{
    asym_translate, asym_translate_t, averaged_magnitude_handle, integral_representation, modulus, multiplier_psi,
    translated, translated_breakpoints, ModulusConfig,
};

/// Largest acceptable Gauss-rule discrepancy between n and 2n nodes.
pub const GATE_TOLERANCE: f64 = 1e-8;

/// Translation parameters t on [0, 3] for the boundedness checks.
fn t_grid() -> Vec<f64> {
    (0..=12).map(|k| 0.25 * k as f64).collect()
}

fn union(mut a: Vec<f64>, b: &[f64]) -> Vec<f64> {
    a.extend_from_slice(b);
    a
}

fn fail_all(id: &str, tolerance: f64, why: String) -> VerificationReport {
    VerificationReport::identity(id, tolerance, vec![CaseResult::failed("all", tolerance, why)])
}

/// Run `body`; a panic becomes a failed check instead of unwinding further.
fn guarded(id: &str, tolerance: f64, body: impl FnOnce() -> VerificationReport) -> VerificationReport {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(r) => r,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            fail_all(id, tolerance, msg)
        }
    }
}

fn identity(id: &str, tolerance: f64, body: impl FnOnce(f64) -> Vec<CaseResult>) -> VerificationReport {
    guarded(id, tolerance, || VerificationReport::identity(id, tolerance, body(tolerance)))
}

type Check<'a> = Box<dyn Fn() -> VerificationReport + Send + Sync + 'a>;

/// Every lemma-level identity and bound, in a fixed order.
pub fn run_lemma_suite(config: &Config) -> Vec<VerificationReport> {
    if let Err(e) = config.validate() {
        return vec![fail_all("config", 0.0, e.to_string())];
    }
    let c = config;
    let set = corpus(c.seed);
    let set = &set;
    let tol = c.tol;
    let checks: Vec<Check> = vec![
        Box::new(move || quadrature_exactness(1e-12 * tol)),
        Box::new(move || convergence_gate(c, set, GATE_TOLERANCE * tol)),
        Box::new(move || jacobi_normalization()),
        Box::new(move || jacobi_orthogonality(1e-10 * tol)),
        Box::new(move || jacobi_eigen_relation(1e-10 * tol)),
        Box::new(move || jacobi_recurrence_vs_coefficients(1e-12 * tol)),
        Box::new(move || space_homogeneity(c, set, 1e-12 * tol)),
        Box::new(move || space_triangle(c, set, 1e-10 * tol)),
        Box::new(move || space_alpha_monotone(c, set, 1e-10 * tol)),
        Box::new(move || identity_and_constants(c, set, 1e-10 * tol)),
        Box::new(move || linearity(c, set, 1e-12 * tol)),
        Box::new(move || product_formula(c, 1e-8 * tol)),
        Box::new(move || coefficient_multiplier(c, set, 1e-7 * tol)),
        Box::new(move || self_adjointness(c, set, 1e-8 * tol)),
        Box::new(move || commutation(c, set, 1e-7 * tol)),
        Box::new(move || integral_representation_check(c, set, 1e-6 * tol)),
        Box::new(move || translation_boundedness(c, set)),
        Box::new(move || averaged_boundedness(c, set)),
        Box::new(move || modulus_monotone(c, set, 1e-12 * tol)),
        Box::new(move || bernstein_markov(c)),
        Box::new(move || jackson_cutoff(c, set, 1e-8 * tol)),
        Box::new(move || l2_optimality(c, set, 1e-9 * tol)),
        Box::new(move || best_approx_monotone(c, set, 1e-10 * tol)),
        Box::new(move || k_upper_bound(c, set, 1e-10 * tol)),
        Box::new(move || k_monotone(c, set, 1e-10 * tol)),
    ];
    checks.par_iter().map(|check| check()).collect()
}

// ---------------------------------------------------------------- quadrature

/// Integral of x^k (1-x^2)^a over (-1, 1).
fn symmetric_moment(k: usize, a: f64) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let m = (k / 2) as f64;
    gamma(m + 0.5) * gamma(a + 1.0) / gamma(m + a + 1.5)
}

pub fn quadrature_exactness(tolerance: f64) -> VerificationReport {
    identity("quadrature.exactness", tolerance, |tol| {
        let mut cases = Vec::new();
        let kinds: [(&str, f64, fn(usize) -> Result<QuadratureRule>); 4] = [
            ("legendre", 0.0, gauss_legendre),
            ("chebyshev", -0.5, gauss_chebyshev),
            ("jacobi(2,2)", 2.0, |n| gauss_jacobi(n, 2.0, 2.0)),
            ("jacobi(4,4)", 4.0, |n| gauss_jacobi(n, 4.0, 4.0)),
        ];
        for (name, a, make) in kinds {
            for n in [2usize, 4, 8, 16] {
                let case = format!("{name}, n={n}");
                let rule = match make(n) {
                    Ok(r) => r,
                    Err(e) => {
                        cases.push(CaseResult::failed(case, tol, e.to_string()));
                        continue;
                    }
                };
                let mass = symmetric_moment(0, a);
                let worst = (0..2 * n)
                    .map(|k| {
                        let want = symmetric_moment(k, a);
                        let got = rule.sum_with(|x| x.powi(k as i32));
                        // odd moments vanish; measure them against the mass
                        (got - want).abs() / if want == 0.0 { mass } else { want.abs() }
                    })
                    .fold(0.0, f64::max);
                cases.push(CaseResult::measured(case, worst, tol));
            }
        }
        cases
    })
}

/// Discrepancy between `quad_n` and `2 quad_n` nodes for the (2,2)-weighted
/// integral of each corpus function and for its translates at a few points.
pub fn convergence_gate(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    let n = config.quad_n;
    identity("quadrature.convergence_gate", tolerance, |tol| {
        let mut cases = Vec::new();
        for e in set {
            let f = &e.function;
            let cuts: Vec<f64> = f.interior_singular_points().collect();
            let integral = |m: usize| -> Result<f64> {
                gauss_jacobi_split(m, 2.0, 2.0, &cuts)?.try_sum_with(|x| f.try_eval(x))
            };
            let diff = integral(n).and_then(|a| Ok((a - integral(2 * n)?).abs()));
            cases.push(CaseResult::from_result(format!("{}, integral", e.label), diff, tol));
            let mut worst = Ok(0.0f64);
            for y in [-0.5, 0.5] {
                for x in [-0.7, 0.1, 0.6] {
                    worst = worst.and_then(|w| {
                        let d = (asym_translate(f, y, x, n)? - asym_translate(f, y, x, 2 * n)?).abs();
                        Ok(w.max(d))
                    });
                }
            }
            cases.push(CaseResult::from_result(format!("{}, translation", e.label), worst, tol));
        }
        cases
    })
    .with_note(format!("quad_n = {n} against {}", 2 * n))
}

// ---------------------------------------------------------------- jacobi

pub fn jacobi_normalization() -> VerificationReport {
    identity("jacobi.normalization", 0.0, |tol| {
        [(2.0, 2.0), (0.0, 4.0)]
            .into_iter()
            .map(|(a, b)| {
                let worst = (0..=32).map(|n| jacobi_eval(n, a, b, 1.0).map(|v| (v - 1.0).abs()));
                let worst = worst.collect::<Result<Vec<_>>>().map(|v| v.into_iter().fold(0.0, f64::max));
                CaseResult::from_result(format!("P^({a},{b})_n(1), n<=32"), worst, tol)
            })
            .collect()
    })
}

pub fn jacobi_orthogonality(tolerance: f64) -> VerificationReport {
    identity("jacobi.orthogonality", tolerance, |tol| {
        let rule = match gauss_jacobi(64, 2.0, 2.0) {
            Ok(r) => r,
            Err(e) => return vec![CaseResult::failed("rule", tol, e.to_string())],
        };
        let mut gram = vec![vec![0.0; 17]; 17];
        for (x, w) in rule.iter() {
            let p = jacobi_basis(16, 2.0, 2.0, x);
            for m in 0..=16 {
                for n in 0..=16 {
                    gram[m][n] += w * p[m] * p[n];
                }
            }
        }
        let worst = (0..=16)
            .flat_map(|m| (0..=16).filter(move |&n| n != m).map(move |n| (m, n)))
            .map(|(m, n)| gram[m][n].abs())
            .fold(0.0, f64::max);
        vec![CaseResult::measured("m != n <= 16, 64 nodes", worst, tol)]
    })
}

/// Coefficientwise, relative to the largest coefficient of the product.
pub fn jacobi_eigen_relation(tolerance: f64) -> VerificationReport {
    identity("jacobi.eigen_relation", tolerance, |tol| {
        let d = DOperatorParams::default();
        (0..=16)
            .map(|n| {
                let value = jacobi_poly(n, 2.0, 2.0).map(|p| {
                    let lhs = apply_d_poly(&p, d);
                    let rhs = p.scale(d.eigenvalue(n));
                    let diff = lhs.sub(&rhs);
                    let scale = rhs.coeffs().iter().fold(1.0f64, |m, c| m.max(c.abs()));
                    diff.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs())) / scale
                });
                CaseResult::from_result(format!("n={n}"), value, tol)
            })
            .collect()
    })
}

/// Monomial evaluation against the recurrence, relative to sum |c_k x^k|.
pub fn jacobi_recurrence_vs_coefficients(tolerance: f64) -> VerificationReport {
    identity("jacobi.recurrence_vs_coefficients", tolerance, |tol| {
        let grid = make_grid(64);
        (0..=16)
            .map(|n| {
                let value = jacobi_poly(n, 2.0, 2.0).and_then(|p| {
                    let mut worst = 0.0f64;
                    for &x in &grid {
                        let scale: f64 = p.coeffs().iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs());
                        let diff = (p.eval(x) - jacobi_eval(n, 2.0, 2.0, x)?).abs();
                        worst = worst.max(diff / scale.max(1.0));
                    }
                    Ok(worst)
                });
                CaseResult::from_result(format!("n={n}"), value, tol)
            })
            .collect()
    })
}

// ---------------------------------------------------------------- space

fn norm_of(f: &FunctionHandle, params: SpaceParams, nodes: usize) -> Result<f64> {
    WeightedNorm::new(params, nodes, f.singular_points())?.norm(f)
}

pub fn space_homogeneity(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("space.homogeneity", tolerance, |tol| {
        let params = config.params();
        set.iter()
            .map(|e| {
                let f = &e.function;
                let value = (|| {
                    let base = norm_of(f, params, config.norm_nodes)?;
                    let mut worst = 0.0f64;
                    for c in [-2.5, 0.3] {
                        let scaled = norm_of(&f.scale(c), params, config.norm_nodes)?;
                        let want = c.abs() * base;
                        worst = worst.max((scaled - want).abs() / want.max(f64::MIN_POSITIVE));
                    }
                    Ok(worst)
                })();
                CaseResult::from_result(e.label.clone(), value, tol)
            })
            .collect()
    })
}

pub fn space_triangle(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("space.triangle", tolerance, |tol| {
        let params = config.params();
        let mut cases = Vec::new();
        for (i, a) in set.iter().enumerate() {
            for b in &set[i + 1..] {
                let value = (|| {
                    let sum = a.function.add(&b.function);
                    let lhs = norm_of(&sum, params, config.norm_nodes)?;
                    let rhs = norm_of(&a.function, params, config.norm_nodes)? + norm_of(&b.function, params, config.norm_nodes)?;
                    Ok((lhs - rhs).max(0.0))
                })();
                cases.push(CaseResult::from_result(format!("{} + {}", a.label, b.label), value, tol));
            }
        }
        cases
    })
}

pub fn space_alpha_monotone(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("space.alpha_monotone", tolerance, |tol| {
        let alphas = [0.0, 0.5, 1.0, 1.4];
        set.iter()
            .map(|e| {
                let value = (|| {
                    let norms = alphas
                        .iter()
                        .map(|&a| norm_of(&e.function, SpaceParams::new(config.p, a), config.norm_nodes))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(norms.windows(2).map(|w| (w[1] - w[0]).max(0.0)).fold(0.0, f64::max))
                })();
                CaseResult::from_result(e.label.clone(), value, tol)
            })
            .collect()
    })
}

// ---------------------------------------------------------------- translation

pub fn identity_and_constants(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("lemma1.identity", tolerance, |tol| {
        let grid = make_grid(16);
        let n = config.quad_n;
        let mut cases: Vec<CaseResult> = set
            .iter()
            .map(|e| {
                let value = grid.iter().try_fold(0.0f64, |w, &x| {
                    Ok(w.max((asym_translate(&e.function, 1.0, x, n)? - e.function.try_eval(x)?).abs()))
                });
                CaseResult::from_result(format!("tau_1 {}", e.label), value, tol)
            })
            .collect();
        let one = FunctionHandle::constant(1.0);
        for y in [-0.9, -0.5, 0.0, 0.5, 0.9] {
            let value = grid.iter().try_fold(0.0f64, |w, &x| Ok(w.max((asym_translate(&one, y, x, n)? - 1.0).abs())));
            cases.push(CaseResult::from_result(format!("tau_y 1, y={y}"), value, tol));
        }
        let value = (0..=12).try_fold(0.0f64, |w, k| Ok(w.max((multiplier_psi(k, 1.0, n)? - 1.0).abs())));
        cases.push(CaseResult::from_result("psi_n(1), n<=12", value, tol));
        cases
    })
}

pub fn linearity(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("lemma1.linearity", tolerance, |tol| {
        let n = config.quad_n;
        let (a, b) = (1.7, -0.6);
        let grid = make_grid(8);
        let mut cases = Vec::new();
        for pair in set.windows(2) {
            // same breakpoints on both sides, so the node sets agree
            let h = pair[0].function.combine(a, &pair[1].function, b);
            let (f, g) = (
                &pair[0].function.clone().with_singular_points(h.singular_points().iter().copied()),
                &pair[1].function.clone().with_singular_points(h.singular_points().iter().copied()),
            );
            let mut value = Ok(0.0f64);
            for y in [-0.5, 0.3, 0.9] {
                for &x in &grid {
                    value = value.and_then(|w| {
                        let lhs = asym_translate(&h, y, x, n)?;
                        let rhs = a * asym_translate(f, y, x, n)? + b * asym_translate(g, y, x, n)?;
                        Ok(w.max((lhs - rhs).abs() / (1.0 + lhs.abs())))
                    });
                }
            }
            cases.push(CaseResult::from_result(format!("{a} {} + {b} {}", pair[0].label, pair[1].label), value, tol));
        }
        cases
    })
}

pub fn product_formula(config: &Config, tolerance: f64) -> VerificationReport {
    identity("lemma1.product_formula", tolerance, |tol| {
        let n = config.quad_n;
        let grid = make_grid(16);
        let mut cases = Vec::new();
        for deg in 0..=8 {
            let pn = crate::translation::jacobi_handle(deg);
            for y in [-0.5, 0.0, 0.5, 0.9] {
                let value = multiplier_psi(deg, y, n).and_then(|psi| {
                    grid.iter().try_fold(0.0f64, |w, &x| {
                        let lhs = asym_translate(&pn, y, x, n)?;
                        Ok(w.max((lhs - jacobi_eval(deg, 2.0, 2.0, x)? * psi).abs()))
                    })
                });
                cases.push(CaseResult::from_result(format!("n={deg}, y={y}"), value, tol));
            }
        }
        cases
    })
}

/// Fourier-Jacobi nodes per panel for coefficient checks.
const COEFF_NODES: usize = 96;

pub fn coefficient_multiplier(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("lemma1.multiplier", tolerance, |tol| {
        let n = config.quad_n;
        let mut cases = Vec::new();
        for y in [-0.5, 0.3, 0.9] {
            let psi = (0..=6).map(|m| multiplier_psi(m, y, n)).collect::<Result<Vec<_>>>();
            for e in set {
                let value = psi.as_ref().map_err(clone_err).and_then(|psi| {
                    let a = fourier_jacobi_coeffs(&e.function, 6, COEFF_NODES)?;
                    let ta = fourier_jacobi_coeffs(&translated(&e.function, y.acos(), n)?, 6, COEFF_NODES)?;
                    Ok((0..=6).map(|m| (ta[m] - a[m] * psi[m]).abs()).fold(0.0, f64::max))
                });
                cases.push(CaseResult::from_result(format!("{}, y={y}, m<=6", e.label), value, tol));
            }
        }
        cases
    })
}

fn clone_err(e: &crate::Error) -> crate::Error {
    crate::Error::InvalidArgument(e.to_string())
}

/// Nodes per panel of the outer x-integral in the self-adjointness check.
const OUTER_NODES: usize = 64;

pub fn self_adjointness(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("lemma4.self_adjoint", tolerance, |tol| {
        let n = config.quad_n;
        let mut cases = Vec::new();
        for (i, a) in set.iter().enumerate() {
            for b in &set[i + 1..] {
                for y in [-0.5f64, 0.5] {
                    let value = (|| {
                        let t = y.acos();
                        let (f, g) = (&a.function, &b.function);
                        let cuts = union(translated_breakpoints(f, t), f.singular_points());
                        let cuts = union(union(cuts, g.singular_points()), &translated_breakpoints(g, t));
                        let rule = gauss_jacobi_split(OUTER_NODES, 2.0, 2.0, &cuts)?;
                        let (tf, tg) = (translated(f, t, n)?, translated(g, t, n)?);
                        let lhs = rule.try_sum_with(|x| Ok(f.try_eval(x)? * tg.try_eval(x)?))?;
                        let rhs = rule.try_sum_with(|x| Ok(g.try_eval(x)? * tf.try_eval(x)?))?;
                        Ok((lhs - rhs).abs())
                    })();
                    cases.push(CaseResult::from_result(format!("({}, {}), y={y}", a.label, b.label), value, tol));
                }
            }
        }
        cases
    })
}

/// Polynomials of degree <= 8 used for the commutation and representation checks.
fn test_polynomials(set: &[CorpusEntry]) -> Vec<(String, Polynomial)> {
    let mut out: Vec<(String, Polynomial)> = Vec::new();
    for (label, coeffs) in [("x", vec![0.0, 1.0]), ("x^2", vec![0.0, 0.0, 1.0])] {
        if set.iter().any(|e| e.label == label) {
            out.push((label.into(), Polynomial::new(coeffs)));
        }
    }
    for deg in [5, 8] {
        if let Ok(p) = jacobi_poly(deg, 2.0, 2.0) {
            out.push((format!("P{deg}"), p));
        }
    }
    if let (Ok(p4), Ok(p1)) = (jacobi_poly(4, 2.0, 2.0), jacobi_poly(1, 2.0, 2.0)) {
        out.push(("P4 + P1/2".into(), p4.add(&p1.scale(0.5))));
    }
    out
}

pub fn commutation(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("lemma5.commutation", tolerance, |tol| {
        let n = config.quad_n;
        let d = DOperatorParams::default();
        let grid = make_grid(9);
        let mut cases = Vec::new();
        for (label, p) in test_polynomials(set) {
            let f = p.to_handle(label.clone());
            let df = apply_d_poly(&p, d).to_handle(format!("D {label}"));
            for y in [-0.4, 0.5] {
                let value = (|| {
                    let g = f.clone();
                    let tf = FunctionHandle::new("tf", move |x| asym_translate(&g, y, x, n).unwrap_or(f64::NAN));
                    let fit = JacobiSeries::new(2.0, 2.0, expand_in_jacobi(&tf, 8, COEFF_NODES)?).apply_d();
                    grid.iter().try_fold(0.0f64, |w, &x| Ok(w.max((asym_translate(&df, y, x, n)? - fit.eval(x)).abs())))
                })();
                cases.push(CaseResult::from_result(format!("{label}, y={y}"), value, tol));
            }
        }
        cases
    })
}

/// Gauss-Legendre nodes for both variables of the integral representation.
const REPRESENTATION_NODES: usize = 64;

pub fn integral_representation_check(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("lemma6.integral_representation", tolerance, |tol| {
        let n = config.quad_n;
        let mut cases = Vec::new();
        for (label, p) in test_polynomials(set).into_iter().filter(|(_, p)| p.degree().unwrap_or(0) <= 5) {
            let f = p.to_handle(label.clone());
            for t in [0.3, 1.0] {
                let value = [-0.5, 0.2, 0.7].iter().try_fold(0.0f64, |w, &x| {
                    let lhs = asym_translate_t(&f, t, x, n)? - p.eval(x);
                    let rhs = integral_representation(&f, t, x, n, REPRESENTATION_NODES)?;
                    Ok(w.max((lhs - rhs).abs()))
                });
                cases.push(CaseResult::from_result(format!("{label}, t={t}"), value, tol));
            }
        }
        cases
    })
}

/// Ratios `map(f, t) / ||f||` over corpus x [0, 3] at base and doubled
/// resolution; entries with ||f|| below 1e-13 are skipped.
fn boundedness(
    id: &str,
    config: &Config,
    set: &[CorpusEntry],
    map: impl Fn(&FunctionHandle, f64, &ModulusConfig) -> Result<f64> + Sync,
) -> VerificationReport {
    guarded(id, f64::INFINITY, || {
        let params = config.params();
        let run = |cfg: ModulusConfig| -> Vec<CaseResult> {
            let jobs: Vec<(&CorpusEntry, f64)> = set.iter().flat_map(|e| t_grid().into_iter().map(move |t| (e, t))).collect();
            jobs.par_iter()
                .map(|&(e, t)| {
                    let case = format!("{}, t={t}", e.label);
                    let value = (|| -> Result<Option<f64>> {
                        let base = norm_of(&e.function, params, cfg.norm_nodes)?;
                        if base < 1e-13 {
                            return Ok(None);
                        }
                        Ok(Some(map(&e.function, t, &cfg)? / base))
                    })();
                    match value {
                        Ok(Some(v)) => CaseResult::value(case, v),
                        Ok(None) => CaseResult::skipped(case, "||f|| below 1e-13"),
                        Err(e) => CaseResult::failed(case, f64::INFINITY, e.to_string()),
                    }
                })
                .collect()
        };
        let base = run(config.modulus_config());
        let fine = run(config.modulus_config().doubled());
        VerificationReport::bound(id, 0.1, base, &fine)
    })
}

/// ||T_t f|| cos^4(t/2) / ||f||.
pub fn translation_boundedness(config: &Config, set: &[CorpusEntry]) -> VerificationReport {
    let params = config.params();
    boundedness("lemma3.boundedness", config, set, move |f, t, cfg| {
        let tf = translated(f, t, cfg.quad_n)?;
        let cuts = union(tf.singular_points().to_vec(), f.singular_points());
        Ok(WeightedNorm::new(params, cfg.norm_nodes, &cuts)?.norm(&tf)? * (0.5 * t).cos().powi(4))
    })
}

/// ||(1-x^2)^{-1} int (1-R^2) |f(R)| dz / sqrt(1-z^2)|| / ||f||.
pub fn averaged_boundedness(config: &Config, set: &[CorpusEntry]) -> VerificationReport {
    let params = config.params();
    boundedness("lemma2.averaged_magnitude", config, set, move |f, t, cfg| {
        let h = averaged_magnitude_handle(f, t, cfg.quad_n)?;
        let cuts = union(h.singular_points().to_vec(), f.singular_points());
        WeightedNorm::new(params, cfg.norm_nodes, &cuts)?.norm(&h)
    })
}

pub fn modulus_monotone(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("translation.modulus_monotone", tolerance, |tol| {
        let mut deltas = config.deltas.clone();
        deltas.sort_by(f64::total_cmp);
        let cfg = config.modulus_config();
        set.iter()
            .map(|e| {
                let value = deltas
                    .iter()
                    .map(|&d| modulus(&e.function, d, config.params(), &cfg))
                    .collect::<Result<Vec<_>>>()
                    .map(|w| w.windows(2).map(|p| (p[0] - p[1]).max(0.0)).fold(0.0, f64::max));
                CaseResult::from_result(e.label.clone(), value, tol)
            })
            .collect()
    })
}

// ---------------------------------------------------------------- approx

/// Both ratios must stay below this for P_n, n in {2, 4, 8, 16}.
pub const BERNSTEIN_MARKOV_CAP: f64 = 10.0;

pub fn bernstein_markov(config: &Config) -> VerificationReport {
    let params = match validate_params_for(ParamRegime::BernsteinMarkov, config.p, config.alpha) {
        Ok(a) if a.is_valid() => config.params(),
        _ => SpaceParams::default(),
    };
    identity("lemma7.bernstein_markov", BERNSTEIN_MARKOV_CAP, |tol| {
        let mut cases = Vec::new();
        for rho in [0.5, 1.0] {
            for n in [2usize, 4, 8, 16] {
                let value = jacobi_poly(n, 2.0, 2.0)
                    .and_then(|p| bernstein_markov_ratios(&p, params, rho))
                    .map(|(a, b)| a.max(b));
                cases.push(CaseResult::from_result(format!("P{n}, rho={rho}"), value, tol));
            }
        }
        cases
    })
}

/// Coefficients a_nu(Q) for nu in bound+1..=bound+6 of the raw Jackson
/// integral, and the held-out residual of the polynomial fit.
pub fn jackson_cutoff(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("lemma8.jackson_cutoff", tolerance, |tol| {
        let n = config.quad_n;
        let mut cases = Vec::new();
        for (q, m) in [(3u32, 2u32), (3, 3), (4, 2)] {
            let params = match JacksonParams::new(q, m) {
                Ok(p) => p,
                Err(e) => {
                    cases.push(CaseResult::failed(format!("q={q}, m={m}"), tol, e.to_string()));
                    continue;
                }
            };
            let bound = jackson_degree_bound(&params);
            for e in set {
                let value = (|| {
                    let raw = jackson_handle(&e.function, &params, n)?;
                    // Q has degree <= bound; 32 nodes integrate Q P_nu exactly up to nu = 63 - bound
                    let a = fourier_jacobi_coeffs(&raw, bound + 6, 32)?;
                    Ok(a[bound + 1..].iter().fold(0.0f64, |w, v| w.max(v.abs())))
                })();
                cases.push(CaseResult::from_result(format!("{}, q={q}, m={m}", e.label), value, tol));
            }
            let fit = jackson_operator(&set[set.len() - 1].function, &params, n).map(|_| 0.0);
            cases.push(CaseResult::from_result(format!("fit, q={q}, m={m}"), fit, tol));
        }
        cases
    })
    .with_note("cutoff above degree (q+2)(m-1)")
}

/// The p = 2 parameters the orthogonality check runs with.
fn l2_params(config: &Config) -> Option<SpaceParams> {
    let params = SpaceParams::finite(2.0, config.alpha);
    validate_params(params.p, params.alpha).ok().filter(|a| a.is_valid()).map(|_| params)
}

/// Residual f - argmin is orthogonal to P_k^{(2a,2a)}, k < n, in the
/// (1-x^2)^{2 alpha} inner product, relative to ||f||.
pub fn l2_optimality(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("approx.l2_optimality", tolerance, |tol| {
        let Some(params) = l2_params(config) else {
            return vec![CaseResult::skipped("all", "alpha not admissible for p = 2")];
        };
        let mut cases = Vec::new();
        for e in set {
            for n in [4usize, 8] {
                let value = (|| {
                    let r = best_approx(&e.function, n, params, config.norm_nodes)?;
                    let norm = WeightedNorm::new(params, config.norm_nodes, e.function.singular_points())?;
                    let w = norm.weights().unwrap_or(&[]);
                    let ab = 2.0 * params.alpha;
                    let mut inner = vec![0.0; n];
                    for (&x, &wx) in norm.points().iter().zip(w) {
                        let res = e.function.try_eval(x)? - r.argmin.eval(x);
                        for (acc, p) in inner.iter_mut().zip(jacobi_basis(n - 1, ab, ab, x)) {
                            *acc += wx * res * p;
                        }
                    }
                    let scale = norm.norm(&e.function)?.max(1.0);
                    Ok(inner.iter().fold(0.0f64, |m, v| m.max(v.abs())) / scale)
                })();
                cases.push(CaseResult::from_result(format!("{}, n={n}", e.label), value, tol));
            }
        }
        cases
    })
}

pub fn best_approx_monotone(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("approx.best_approx_monotone", tolerance, |tol| {
        let mut degrees = config.degrees.clone();
        degrees.sort_unstable();
        set.iter()
            .map(|e| {
                let value = degrees
                    .iter()
                    .map(|&n| best_approx(&e.function, n, config.params(), config.norm_nodes).map(|r| r.value))
                    .collect::<Result<Vec<_>>>()
                    .map(|v| v.windows(2).map(|p| (p[1] - p[0]).max(0.0)).fold(0.0, f64::max));
                CaseResult::from_result(e.label.clone(), value, tol)
            })
            .collect()
    })
}

/// K(f, delta) against min(||f||, ||f - S f|| + delta^2 ||D S f||), where S f
/// is the (2,2) Fourier-Jacobi partial sum of degree kdeg.
pub fn k_upper_bound(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("approx.k_upper_bound", tolerance, |tol| {
        let params = config.params();
        let mut cases = Vec::new();
        for e in set {
            let f = &e.function;
            let prepared = (|| {
                let norm = WeightedNorm::new(params, config.norm_nodes, f.singular_points())?;
                let coeffs = fourier_jacobi_coeffs(f, config.kdeg, COEFF_NODES)?;
                let s = JacobiSeries::new(2.0, 2.0, coeffs.iter().zip(norm_constants()).map(|(a, h)| a / h).collect());
                let fs = norm.norm(&f.sub(&s.to_handle("S f")))?;
                let ds = norm.norm(&s.apply_d().to_handle("D S f"))?;
                Ok((norm.norm(f)?, fs, ds))
            })();
            for &delta in &config.deltas {
                let value = prepared.as_ref().map_err(clone_err).and_then(|&(f0, fs, ds)| {
                    let k = k_functional(f, delta, params, config.kdeg, config.norm_nodes)?.value;
                    Ok((k - f0.min(fs + delta * delta * ds)).max(0.0))
                });
                cases.push(CaseResult::from_result(format!("{}, delta={delta}", e.label), value, tol));
            }
        }
        cases
    })
}

pub fn k_monotone(config: &Config, set: &[CorpusEntry], tolerance: f64) -> VerificationReport {
    identity("approx.k_monotone", tolerance, |tol| {
        let mut deltas = config.deltas.clone();
        deltas.sort_by(f64::total_cmp);
        set.iter()
            .map(|e| {
                let value = deltas
                    .iter()
                    .map(|&d| k_functional(&e.function, d, config.params(), config.kdeg, config.norm_nodes).map(|k| k.value))
                    .collect::<Result<Vec<_>>>()
                    .map(|k| k.windows(2).map(|p| (p[0] - p[1]).max(0.0)).fold(0.0, f64::max));
                CaseResult::from_result(e.label.clone(), value, tol)
            })
            .collect()
    })
}
