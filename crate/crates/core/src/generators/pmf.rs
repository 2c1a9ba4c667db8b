use std::path::Path;

use super::GeneratorError;

const SUM_TOLERANCE: f64 = 1e-12;
const CRITICAL_TOLERANCE: f64 = 1e-9;

/// Finite offspring distribution `p_0..p_K` of a Galton-Watson tree.
#[derive(Debug, Clone, PartialEq)]
pub struct OffspringPmf {
    probs: Vec<f64>,
    mean: f64,
    second_moment: f64,
}

impl OffspringPmf {
    /// Validates a probability vector. The entries must sum to one within
    /// `1e-12`; they are then rescaled to sum to one exactly.
    pub fn new(probs: Vec<f64>) -> Result<Self, GeneratorError> {
        if probs.is_empty() {
            return Err(GeneratorError::InvalidPmf("empty probability vector".into()));
        }
        if let Some(k) = probs.iter().position(|p| !p.is_finite() || *p < 0.0) {
            return Err(GeneratorError::InvalidPmf(format!("p_{k} = {} is not a probability", probs[k])));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(GeneratorError::InvalidPmf(format!("probabilities sum to {total}, not 1")));
        }
        Self::from_weights(probs)
    }

    /// Normalizes arbitrary non-negative weights into a pmf.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self, GeneratorError> {
        if let Some(k) = weights.iter().position(|p| !p.is_finite() || *p < 0.0) {
            return Err(GeneratorError::InvalidPmf(format!("weight {k} = {} is invalid", weights[k])));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(GeneratorError::InvalidPmf("weights sum to zero".into()));
        }
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        if probs[0] <= 0.0 {
            return Err(GeneratorError::InvalidPmf("p_0 must be positive".into()));
        }
        let mean = probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        let second_moment = probs.iter().enumerate().map(|(k, p)| (k * k) as f64 * p).sum();
        Ok(Self { probs, mean, second_moment })
    }

    /// Poisson(`lambda`) truncated at `cutoff` and renormalized.
    pub fn poisson(lambda: f64, cutoff: usize) -> Result<Self, GeneratorError> {
        let mut w = Vec::with_capacity(cutoff + 1);
        let mut term = (-lambda).exp();
        for k in 0..=cutoff {
            w.push(term);
            term *= lambda / (k + 1) as f64;
        }
        Self::from_weights(w)
    }

    /// Critical geometric law `p_k = 2^-(k+1)`, truncated at `cutoff`.
    pub fn geometric(cutoff: usize) -> Result<Self, GeneratorError> {
        Self::from_weights((0..=cutoff).map(|k| 0.5f64.powi(k as i32 + 1)).collect())
    }

    /// The offspring law used for uniform random trees: Poisson(1) cut at 30.
    pub fn poisson_critical() -> Self {
        Self::poisson(1.0, 30).expect("Poisson(1) is a valid pmf")
    }

    /// Reads whitespace-separated probabilities `p_0 p_1 ...`; `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self, GeneratorError> {
        let mut probs = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                let p: f64 = tok
                    .parse()
                    .map_err(|_| GeneratorError::InvalidPmf(format!("cannot parse {tok:?} as a probability")))?;
                probs.push(p);
            }
        }
        Self::new(probs)
    }

    pub fn read_file(path: &Path) -> Result<Self, GeneratorError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeneratorError::InvalidPmf(format!("{}: {e}", path.display())))?;
        Self::parse_text(&text)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn p(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn max_offspring(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn second_moment(&self) -> f64 {
        self.second_moment
    }

    /// Probability generating function `Σ p_k x^k` (Horner).
    pub fn pgf(&self, x: f64) -> f64 {
        self.probs.iter().rev().fold(0.0, |acc, p| acc * x + p)
    }

    pub fn is_critical(&self) -> bool {
        (self.mean - 1.0).abs() <= CRITICAL_TOLERANCE
    }

    pub fn require_critical(&self) -> Result<(), GeneratorError> {
        if self.is_critical() {
            Ok(())
        } else {
            Err(GeneratorError::InvalidPmf(format!("offspring mean {} is not 1", self.mean)))
        }
    }
}
