//! Run configuration and the key=value config file format.
//!
//! ```text
//! # comments and blank lines are ignored
//! p = 2
//! alpha = 1
//! quad_n = 128
//! deltas = 0.05, 0.1, 0.2
//! ```

use std::path::Path;

use serde::Serialize;

use crate::approx::MAX_WITNESS_DEGREE;
use crate::error::{Error, Result};
use crate::quadrature::MAX_NODES;
use crate::space::{validate_params, Admissibility, Exponent, SpaceParams, DEFAULT_NORM_NODES};
use crate::translation::{ModulusConfig, DEFAULT_QUAD_N, DEFAULT_T_POINTS, MIN_QUAD_N};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_DELTAS: [f64; 7] = [0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 2.4];
pub const DEFAULT_DEGREES: [usize; 5] = [2, 4, 8, 16, 32];
pub const DEFAULT_KDEG: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub p: Exponent,
    pub alpha: f64,
    /// Nodes for every operator integral.
    pub quad_n: usize,
    /// Nodes per panel for weighted norms.
    pub norm_nodes: usize,
    /// Grid size for the supremum over t in the modulus.
    pub t_points: usize,
    /// Multiplier applied to every identity tolerance.
    pub tol: f64,
    pub seed: u64,
    pub deltas: Vec<f64>,
    pub degrees: Vec<usize>,
    /// Degree cap of K-functional witnesses.
    pub kdeg: usize,
    /// Largest accepted U/L for a ratio family.
    pub ratio_span: f64,
    /// Largest accepted relative drift of recorded bounds under doubling.
    pub stability: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            p: Exponent::Finite(2.0),
            alpha: 1.0,
            quad_n: DEFAULT_QUAD_N,
            norm_nodes: DEFAULT_NORM_NODES,
            t_points: DEFAULT_T_POINTS,
            tol: 1.0,
            seed: DEFAULT_SEED,
            deltas: DEFAULT_DELTAS.to_vec(),
            degrees: DEFAULT_DEGREES.to_vec(),
            kdeg: DEFAULT_KDEG,
            ratio_span: 100.0,
            stability: 0.15,
        }
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_num(key, s)).collect()
}

impl Config {
    pub fn params(&self) -> SpaceParams {
        SpaceParams::new(self.p, self.alpha)
    }

    pub fn modulus_config(&self) -> ModulusConfig {
        ModulusConfig { quad_n: self.quad_n, norm_nodes: self.norm_nodes, t_points: self.t_points }
    }

    /// Twice the quadrature and norm resolution, and twice the witness degree
    /// up to its cap.
    pub fn doubled(&self) -> Self {
        Self {
            quad_n: 2 * self.quad_n,
            norm_nodes: 2 * self.norm_nodes,
            kdeg: (2 * self.kdeg).min(MAX_WITNESS_DEGREE),
            ..self.clone()
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim().replace('-', "_").as_str() {
            "p" => {
                self.p = Exponent::parse(value).ok_or_else(|| Error::Config(format!("p: cannot parse {value:?}")))?
            }
            "alpha" => self.alpha = parse_num(key, value)?,
            "quad_n" | "quad_nodes" => self.quad_n = parse_num(key, value)?,
            "norm_nodes" => self.norm_nodes = parse_num(key, value)?,
            "t_points" => self.t_points = parse_num(key, value)?,
            "tol" => self.tol = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "deltas" => self.deltas = parse_list(key, value)?,
            "degrees" => self.degrees = parse_list(key, value)?,
            "kdeg" => self.kdeg = parse_num(key, value)?,
            "ratio_span" => self.ratio_span = parse_num(key, value)?,
            "stability" => self.stability = parse_num(key, value)?,
            other => return config_err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Apply every `key = value` line of `text` on top of `self`.
    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return config_err(format!("line {}: expected key = value, got {raw:?}", n + 1));
            };
            self.set(key, value).map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        self.merge_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if let Admissibility::Invalid(why) = validate_params(self.p, self.alpha)? {
            return config_err(why);
        }
        if !(MIN_QUAD_N..=MAX_NODES / 2).contains(&self.quad_n) {
            return config_err(format!("quad_n = {} outside {MIN_QUAD_N}..={}", self.quad_n, MAX_NODES / 2));
        }
        if !(8..=MAX_NODES / 2).contains(&self.norm_nodes) {
            return config_err(format!("norm_nodes = {} outside 8..={}", self.norm_nodes, MAX_NODES / 2));
        }
        if self.t_points == 0 {
            return config_err("t_points must be positive");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return config_err(format!("tol = {} must be positive", self.tol));
        }
        if self.deltas.is_empty() || self.deltas.iter().any(|d| !(*d > 0.0 && *d < std::f64::consts::PI)) {
            return config_err(format!("deltas {:?} must be nonempty and inside (0, pi)", self.deltas));
        }
        if self.degrees.is_empty() || self.degrees.iter().any(|&n| n == 0 || n > 64) {
            return config_err(format!("degrees {:?} must be nonempty and inside 1..=64", self.degrees));
        }
        if self.kdeg > MAX_WITNESS_DEGREE {
            return config_err(format!("kdeg = {} exceeds {MAX_WITNESS_DEGREE}", self.kdeg));
        }
        if !(self.ratio_span >= 1.0) || !(self.stability > 0.0) {
            return config_err("ratio_span must be >= 1 and stability positive");
        }
        Ok(())
    }
}
