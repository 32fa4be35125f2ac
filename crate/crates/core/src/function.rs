//! Evaluable real functions on (-1, 1).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// A real function on (-1, 1) with optional analytic derivatives.
///
/// `singular_points` lists abscissae in [-1, 1] where the function (or one of
/// its low derivatives) is not smooth. Interior points split quadrature panels;
/// endpoints matter only through the translation operator, which maps them to
/// interior points.
#[derive(Clone)]
pub struct FunctionHandle {
    label: String,
    eval: RealFn,
    d1: Option<RealFn>,
    d2: Option<RealFn>,
    parity: Parity,
    singular_points: Vec<f64>,
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("label", &self.label)
            .field("parity", &self.parity)
            .field("has_derivatives", &self.has_derivatives())
            .field("singular_points", &self.singular_points)
            .finish()
    }
}

impl FunctionHandle {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
            d1: None,
            d2: None,
            parity: Parity::None,
            singular_points: Vec::new(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_| c)
            .with_derivatives(|_| 0.0, |_| 0.0)
            .with_parity(Parity::Even)
    }

    pub fn with_derivatives(
        mut self,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.d1 = Some(Arc::new(d1));
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn with_singular_points(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.singular_points.extend(points);
        normalize_points(&mut self.singular_points);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn singular_points(&self) -> &[f64] {
        &self.singular_points
    }

    /// Singular points strictly inside (-1, 1).
    pub fn interior_singular_points(&self) -> impl Iterator<Item = f64> + '_ {
        self.singular_points.iter().copied().filter(|p| p.abs() < 1.0)
    }

    pub fn has_derivatives(&self) -> bool {
        self.d1.is_some() && self.d2.is_some()
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn try_eval(&self, x: f64) -> Result<f64> {
        let value = (self.eval)(x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Evaluation { x, value })
        }
    }

    pub fn d1(&self) -> Option<&RealFn> {
        self.d1.as_ref()
    }

    pub fn d2(&self) -> Option<&RealFn> {
        self.d2.as_ref()
    }

    /// Largest parity violation over `samples` pairs (x, -x) spread over (0, 1).
    pub fn parity_defect(&self, samples: usize) -> f64 {
        let sign = match self.parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
            Parity::None => return 0.0,
        };
        (1..=samples)
            .map(|k| {
                let x = k as f64 / (samples + 1) as f64;
                (self.eval(-x) - sign * self.eval(x)).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: f64) -> Self {
        let f = self.eval.clone();
        let mut out = Self::new(format!("{c}*{}", self.label), move |x| c * f(x));
        if let (Some(d1), Some(d2)) = (self.d1.clone(), self.d2.clone()) {
            out = out.with_derivatives(move |x| c * d1(x), move |x| c * d2(x));
        }
        out.parity = self.parity;
        out.singular_points = self.singular_points.clone();
        out
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &FunctionHandle, b: f64) -> Self {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let mut out = Self::new(
            format!("{a}*{} + {b}*{}", self.label, other.label),
            move |x| a * f(x) + b * g(x),
        );
        if let (Some(f1), Some(f2), Some(g1), Some(g2)) =
            (self.d1.clone(), self.d2.clone(), other.d1.clone(), other.d2.clone())
        {
            out = out.with_derivatives(move |x| a * f1(x) + b * g1(x), move |x| a * f2(x) + b * g2(x));
        }
        out.parity = if self.parity == other.parity { self.parity } else { Parity::None };
        out.with_singular_points(self.singular_points.iter().chain(&other.singular_points).copied())
    }

    pub fn sub(&self, other: &FunctionHandle) -> Self {
        self.combine(1.0, other, -1.0)
    }

    pub fn add(&self, other: &FunctionHandle) -> Self {
        self.combine(1.0, other, 1.0)
    }
}

pub(crate) fn normalize_points(points: &mut Vec<f64>) {
    points.retain(|p| p.is_finite() && p.abs() <= 1.0);
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
}
