//! The fixed test corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::function::{FunctionHandle, Parity};
use crate::jacobi::{jacobi_poly, JacobiSeries};

/// Highest index of the random Jacobi series.
pub const RANDOM_SERIES_DEGREE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothnessClass {
    Polynomial,
    Analytic,
    Kink,
    EndpointSingular,
    RandomSeries,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub label: String,
    pub function: FunctionHandle,
    pub class: SmoothnessClass,
    /// Exact degree for polynomial entries.
    pub degree: Option<usize>,
    pub seed: Option<u64>,
}

impl CorpusEntry {
    /// Entries with analytic derivatives.
    pub fn is_smooth(&self) -> bool {
        matches!(self.class, SmoothnessClass::Polynomial | SmoothnessClass::Analytic | SmoothnessClass::RandomSeries)
    }
}

/// c_nu = u_nu (1 + nu)^-3 with u_nu uniform in [-1, 1], nu = 0..=12.
pub fn random_coefficients(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..=RANDOM_SERIES_DEGREE)
        .map(|nu| rng.random_range(-1.0..=1.0) * (1.0 + nu as f64).powi(-3))
        .collect()
}

fn entry(function: FunctionHandle, class: SmoothnessClass, degree: Option<usize>) -> CorpusEntry {
    CorpusEntry { label: function.label().to_string(), function, class, degree, seed: None }
}

pub fn corpus(seed: u64) -> Vec<CorpusEntry> {
    use SmoothnessClass::*;
    let p5 = jacobi_poly(5, 2.0, 2.0).expect("degree 5 is below the cap").to_handle("P5");
    let random = JacobiSeries::new(2.0, 2.0, random_coefficients(seed)).to_handle(format!("series[{seed}]"));
    vec![
        entry(FunctionHandle::constant(1.0).with_label("1"), Polynomial, Some(0)),
        entry(
            FunctionHandle::new("x", |x| x).with_derivatives(|_| 1.0, |_| 0.0).with_parity(Parity::Odd),
            Polynomial,
            Some(1),
        ),
        entry(
            FunctionHandle::new("x^2", |x| x * x).with_derivatives(|x| 2.0 * x, |_| 2.0).with_parity(Parity::Even),
            Polynomial,
            Some(2),
        ),
        entry(p5, Polynomial, Some(5)),
        entry(
            FunctionHandle::new("|x|", f64::abs).with_parity(Parity::Even).with_singular_points([0.0]),
            Kink,
            None,
        ),
        entry(
            FunctionHandle::new("(1-x)^(3/4)", |x: f64| (1.0 - x).powf(0.75))
                .with_derivatives(|x: f64| -0.75 * (1.0 - x).powf(-0.25), |x: f64| -0.1875 * (1.0 - x).powf(-1.25))
                .with_singular_points([1.0]),
            EndpointSingular,
            None,
        ),
        entry(
            FunctionHandle::new("sin(3x)", |x: f64| (3.0 * x).sin())
                .with_derivatives(|x: f64| 3.0 * (3.0 * x).cos(), |x: f64| -9.0 * (3.0 * x).sin())
                .with_parity(Parity::Odd),
            Analytic,
            None,
        ),
        CorpusEntry { seed: Some(seed), ..entry(random, RandomSeries, None) },
    ]
}
