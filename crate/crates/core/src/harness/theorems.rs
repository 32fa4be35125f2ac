//! Ratio sweeps for the two-sided estimates between moduli, K-functionals and
//! best approximations.

use rayon::prelude::*;

use super::config::Config;
use super::corpus::{corpus, CorpusEntry};
use super::report::{CaseResult, Status, VerificationReport};
use crate::approx::{best_approx, k_functional};
use crate::error::Result;
use crate::jacobi::{d_handle, DOperatorParams};
use crate::space::{validate_params_for, ParamRegime, SpaceParams, WeightedNorm};
use crate::translation::modulus;

/// Values below this make a ratio undefined; the case is skipped.
pub const RATIO_FLOOR: f64 = 1e-13;

/// Raw quantities for one corpus entry at one resolution.
#[derive(Debug, Clone)]
pub struct EntrySweep {
    pub label: String,
    /// (delta, omega(f, delta), K(f, delta)).
    pub by_delta: Vec<(f64, f64, f64)>,
    /// (n, E_n, omega(f, 1/n)).
    pub by_degree: Vec<(usize, f64, f64)>,
    /// E_1..=E_max over every nu up to the largest sweep degree.
    pub e_all: Vec<f64>,
}

fn sweep_entry(entry: &CorpusEntry, config: &Config) -> Result<EntrySweep> {
    let f = &entry.function;
    let params = config.params();
    let mcfg = config.modulus_config();
    let by_delta = config
        .deltas
        .iter()
        .map(|&d| {
            let w = modulus(f, d, params, &mcfg)?;
            let k = k_functional(f, d, params, config.kdeg, config.norm_nodes)?.value;
            Ok((d, w, k))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_n = config.degrees.iter().copied().max().unwrap_or(1);
    let e_all = (1..=max_n)
        .map(|nu| best_approx(f, nu, params, config.norm_nodes).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    let by_degree = config
        .degrees
        .iter()
        .map(|&n| Ok((n, e_all[n - 1], modulus(f, 1.0 / n as f64, params, &mcfg)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntrySweep { label: entry.label.clone(), by_delta, by_degree, e_all })
}

fn ratio_case(case: String, num: f64, den: f64) -> CaseResult {
    if den < RATIO_FLOOR {
        CaseResult::skipped(case, format!("denominator {den:e} below {RATIO_FLOOR:e}"))
    } else {
        CaseResult::value(case, num / den)
    }
}

/// Best-approximation errors below the floor are rounding noise.
fn clean(e: f64) -> f64 {
    if e < RATIO_FLOOR {
        0.0
    } else {
        e
    }
}

/// The four ratio families for one entry, in the order r1, r2, r3, r4.
fn ratios(s: &EntrySweep) -> [Vec<CaseResult>; 4] {
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for &(d, w, k) in &s.by_delta {
        r1.push(ratio_case(format!("{}, delta={d}", s.label), w, k));
        r2.push(ratio_case(format!("{}, delta={d}", s.label), w * (0.5 * d).cos().powi(4), k));
    }
    let mut r3 = Vec::new();
    let mut r4 = Vec::new();
    for &(n, e, w) in &s.by_degree {
        r3.push(ratio_case(format!("{}, n={n}", s.label), clean(e), w));
        let sum: f64 = s.e_all[..n].iter().enumerate().map(|(i, &e)| (i + 1) as f64 * clean(e)).sum();
        r4.push(ratio_case(format!("{}, n={n}", s.label), w * (n * n) as f64, sum));
    }
    [r1, r2, r3, r4]
}

fn failed_families(label: &str, err: &crate::Error) -> [Vec<CaseResult>; 4] {
    let case = || vec![CaseResult::failed(label.to_string(), f64::INFINITY, err.to_string())];
    [case(), case(), case(), case()]
}

fn families(set: &[CorpusEntry], config: &Config) -> [Vec<CaseResult>; 4] {
    let per_entry: Vec<[Vec<CaseResult>; 4]> = set
        .par_iter()
        .map(|e| match sweep_entry(e, config) {
            Ok(s) => ratios(&s),
            Err(err) => failed_families(&e.label, &err),
        })
        .collect();
    let mut out: [Vec<CaseResult>; 4] = Default::default();
    for fam in per_entry {
        for (acc, cases) in out.iter_mut().zip(fam) {
            acc.extend(cases);
        }
    }
    out
}

/// Theorem 1 ratios r1 = omega / K and r2 = omega cos^4(delta/2) / K, and
/// Theorem 2 ratios r3 = E_n / omega(1/n) and r4 = omega(1/n) n^2 / sum nu E_nu,
/// each at base resolution and with quadrature, norm nodes and witness
/// degree doubled.
pub fn run_theorem_sweep(config: &Config) -> Vec<VerificationReport> {
    if let Err(e) = config.validate() {
        return vec![VerificationReport::identity("config", 0.0, vec![CaseResult::failed("all", 0.0, e.to_string())])];
    }
    let set = corpus(config.seed);
    let [r1, r2, r3, r4] = families(&set, config);
    let [f1, f2, f3, f4] = families(&set, &config.doubled());
    let (span, stab) = (config.ratio_span, config.stability);
    vec![
        VerificationReport::ratio("theorem1.r1", span, stab, r1, &f1),
        VerificationReport::ratio("theorem1.r2", span, stab, r2, &f2),
        VerificationReport::bound("theorem2.r3", stab, r3, &f3),
        VerificationReport::bound("theorem2.r4", stab, r4, &f4),
        abs_decay(config),
        direct_estimate(config),
    ]
}

/// E_32(|x|) < E_4(|x|) / 4.
pub fn abs_decay(config: &Config) -> VerificationReport {
    let set = corpus(config.seed);
    let Some(entry) = set.iter().find(|e| e.label == "|x|") else {
        return VerificationReport::identity("theorem2.abs_decay", 0.25, vec![CaseResult::skipped("|x|", "not in corpus")]);
    };
    let value = (|| {
        let e4 = best_approx(&entry.function, 4, config.params(), config.norm_nodes)?.value;
        let e32 = best_approx(&entry.function, 32, config.params(), config.norm_nodes)?.value;
        Ok(e32 / e4)
    })();
    VerificationReport::identity("theorem2.abs_decay", 0.25, vec![CaseResult::from_result("E_32 / E_4", value, 0.25)])
}

/// Degrees of the direct estimate sweep.
pub const DIRECT_DEGREES: [usize; 5] = [2, 4, 8, 16, 32];

/// For each smooth corpus entry, sup over n of n^2 E_n(f) / ||D f||; the
/// per-entry values must span at most `ratio_span`. Cases with E_n below
/// 1e-13 carry no information and are left out.
pub fn direct_estimate(config: &Config) -> VerificationReport {
    let params = match validate_params_for(ParamRegime::DirectEstimate, config.p, config.alpha) {
        Ok(a) if a.is_valid() => config.params(),
        _ => SpaceParams::default(),
    };
    let set = corpus(config.seed);
    let run = |cfg: &Config| -> Vec<CaseResult> {
        set.par_iter()
            .filter(|e| e.is_smooth())
            .map(|e| {
                let value = (|| -> Result<Option<f64>> {
                    let df = d_handle(&e.function, DOperatorParams::default());
                    let dn = WeightedNorm::new(params, cfg.norm_nodes, e.function.singular_points())?.norm(&df)?;
                    if dn < RATIO_FLOOR {
                        return Ok(None);
                    }
                    let mut sup: Option<f64> = None;
                    for &n in &DIRECT_DEGREES {
                        let en = best_approx(&e.function, n, params, cfg.norm_nodes)?.value;
                        if en >= RATIO_FLOOR {
                            let r = (n * n) as f64 * en / dn;
                            sup = Some(sup.map_or(r, |s| s.max(r)));
                        }
                    }
                    Ok(sup)
                })();
                match value {
                    Ok(Some(v)) => CaseResult::value(e.label.clone(), v),
                    Ok(None) => CaseResult::skipped(e.label.clone(), "||D f|| or every E_n below 1e-13"),
                    Err(err) => CaseResult::failed(e.label.clone(), f64::INFINITY, err.to_string()),
                }
            })
            .collect()
    };
    let base = run(config);
    let fine = run(&config.doubled());
    VerificationReport::ratio("lemma9.direct_estimate", config.ratio_span, config.stability, base, &fine)
}

/// True when no check failed.
pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.status != Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_cases_are_skipped() {
        let s = EntrySweep {
            label: "1".into(),
            by_delta: vec![(0.1, 0.0, 0.0)],
            by_degree: vec![(2, 0.0, 0.0)],
            e_all: vec![3e-16, 2e-16],
        };
        for fam in ratios(&s) {
            assert!(fam.iter().all(|c| c.status == Status::Skipped));
        }
    }

    #[test]
    fn inverse_ratio_for_x() {
        // omega(x, 1/n) = 3 (1 - cos(1/n)) ||x|| and sum nu E_nu = E_1 = ||x||
        let norm = (16.0f64 / 105.0).sqrt();
        let s = EntrySweep {
            label: "x".into(),
            by_delta: vec![],
            by_degree: vec![(4, 0.0, 3.0 * (1.0 - 0.25f64.cos()) * norm)],
            e_all: vec![norm, 0.0, 0.0, 0.0],
        };
        let r4 = &ratios(&s)[3][0];
        assert!((r4.observed - 48.0 * (1.0 - 0.25f64.cos())).abs() < 1e-12);
    }
}
