//! Seeded Monte Carlo harness.
//!
//! Trial `i` draws from stream `i` of the master seed, so a run is a pure
//! function of its configuration. Trials are grouped into fixed blocks; each
//! block is reduced with Welford's update and the blocks are merged in index
//! order, which keeps results bit-identical for any worker count.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{c_general, c_gw, p_leaf, ConstantError, ConstantResult};
use crate::fringe::{count_with_summary, Property, SubtreeSummary};
use crate::generators::{
    sample_conditioned_gw, sample_pa_tree, sample_uniform_tree, GeneratorError, OffspringPmf, PAParams, RngSpec,
};
use crate::metric_dimension::md_report;
use crate::tree::RootedTree;

const BLOCK: usize = 256;
const Z95: f64 = 1.96;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
    #[error("trial {index} failed: {source}")]
    Trial { index: usize, source: GeneratorError },
    #[error("reference constant: {0}")]
    Constant(#[from] ConstantError),
    #[error("io error: {0}")]
    Io(String),
    #[error("could not parse results: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Gw(OffspringPmf),
    Uniform,
    Pa(PAParams),
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Gw(_) => "gw",
            ModelSpec::Uniform => "uniform",
            ModelSpec::Pa(_) => "pa",
        }
    }

    pub fn params(&self) -> Option<PAParams> {
        match self {
            ModelSpec::Pa(p) => Some(*p),
            _ => None,
        }
    }

    pub fn generate<R: rand::Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<RootedTree, GeneratorError> {
        match self {
            ModelSpec::Gw(pmf) => sample_conditioned_gw(pmf, n, rng),
            ModelSpec::Uniform => sample_uniform_tree(n, rng),
            ModelSpec::Pa(p) => sample_pa_tree(*p, n, rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// `β(T) / n`.
    BetaOverN,
    /// Fraction of vertices that are leaves.
    PlFraction,
    /// Fraction of vertices with at least two children and a line child.
    PkFraction,
    /// Fraction of vertices whose subtree has exactly `k` vertices.
    FringeFraction(usize),
}

impl Statistic {
    pub fn evaluate(&self, tree: &RootedTree) -> f64 {
        let n = tree.len() as f64;
        match self {
            Statistic::BetaOverN => md_report(tree).beta as f64 / n,
            Statistic::PlFraction | Statistic::PkFraction => {
                let summary = SubtreeSummary::new(tree);
                let prop = if *self == Statistic::PlFraction { Property::Leaf } else { Property::ExteriorProxy };
                count_with_summary(tree, &summary, &prop) as f64 / n
            }
            Statistic::FringeFraction(k) => {
                let summary = SubtreeSummary::new(tree);
                summary.size.iter().filter(|&&s| s == *k).count() as f64 / n
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub statistic: Statistic,
    pub workers: usize,
    pub retain_values: bool,
}

impl ExperimentConfig {
    pub fn new(model: ModelSpec, n: usize, trials: usize, master_seed: u64) -> Self {
        Self { model, n, trials, master_seed, statistic: Statistic::BetaOverN, workers: 1, retain_values: false }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials == 0 {
            return Err(ExperimentError::InvalidConfig("trials must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(ExperimentError::InvalidConfig(format!("n must be at least 2, got {}", self.n)));
        }
        if self.workers == 0 {
            return Err(ExperimentError::InvalidConfig("worker count must be at least 1".into()));
        }
        if let Statistic::FringeFraction(0) = self.statistic {
            return Err(ExperimentError::InvalidConfig("fringe size must be at least 1".into()));
        }
        if let ModelSpec::Gw(pmf) = &self.model {
            pmf.require_critical().map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
        }
        Ok(())
    }

    pub fn trial(&self, index: usize) -> Result<f64, ExperimentError> {
        let mut rng = RngSpec::new(self.master_seed).stream(index as u64);
        let tree = self.model.generate(self.n, &mut rng).map_err(|source| ExperimentError::Trial { index, source })?;
        Ok(self.statistic.evaluate(&tree))
    }
}

/// Streaming mean and variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Welford) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total as f64;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / total as f64;
        self.count = total;
    }

    /// Sample variance (zero for fewer than two observations).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub model: String,
    pub rho: Option<f64>,
    pub chi: Option<i8>,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub statistic: Statistic,
    pub mean: f64,
    pub stddev: f64,
    pub stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub constant: Option<f64>,
    pub abs_diff: Option<f64>,
    pub values: Option<Vec<f64>>,
}

/// One exported line; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub model: String,
    pub rho: Option<f64>,
    pub chi: Option<i8>,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mean: f64,
    pub stddev: f64,
    pub stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub constant: Option<f64>,
    pub abs_diff: Option<f64>,
}

impl ExperimentSummary {
    pub fn row(&self) -> SummaryRow {
        SummaryRow {
            model: self.model.clone(),
            rho: self.rho,
            chi: self.chi,
            n: self.n,
            trials: self.trials,
            seed: self.seed,
            mean: self.mean,
            stddev: self.stddev,
            stderr: self.stderr,
            ci_lo: self.ci_lo,
            ci_hi: self.ci_hi,
            constant: self.constant,
            abs_diff: self.abs_diff,
        }
    }
}

/// Limit of the statistic as `n -> ∞`, where one is known.
pub fn reference_constant(model: &ModelSpec, statistic: Statistic) -> Result<Option<ConstantResult>, ConstantError> {
    let exact =
        |value: f64| ConstantResult { value, abs_error_estimate: 0.0, method: crate::constants::Method::ClosedForm };
    let pmf = match model {
        ModelSpec::Gw(pmf) => Some(pmf.clone()),
        ModelSpec::Uniform => Some(OffspringPmf::poisson_critical()),
        ModelSpec::Pa(_) => None,
    };
    if let Some(pmf) = pmf {
        return Ok(match statistic {
            Statistic::BetaOverN => Some(c_gw(&pmf)?),
            Statistic::PlFraction => Some(exact(pmf.p(0))),
            Statistic::PkFraction => {
                let c = c_gw(&pmf)?;
                Some(ConstantResult { value: pmf.p(0) - c.value, ..c })
            }
            Statistic::FringeFraction(_) => None,
        });
    }
    let Some(params) = model.params() else { return Ok(None) };
    let c = match c_general(params) {
        Ok(c) => c,
        Err(ConstantError::Unsupported(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(match statistic {
        Statistic::BetaOverN => Some(c),
        Statistic::PlFraction => Some(exact(p_leaf(params))),
        Statistic::PkFraction => Some(ConstantResult { value: p_leaf(params) - c.value, ..c }),
        Statistic::FringeFraction(k) if params == PAParams::BST => Some(exact(2.0 / ((k + 1) * (k + 2)) as f64)),
        Statistic::FringeFraction(_) => None,
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary, ExperimentError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
    let blocks: Vec<(usize, usize)> =
        (0..config.trials).step_by(BLOCK).map(|lo| (lo, (lo + BLOCK).min(config.trials))).collect();
    let reduced: Vec<Result<(Welford, Vec<f64>), ExperimentError>> = pool.install(|| {
        blocks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut acc = Welford::default();
                let mut kept = Vec::new();
                for i in lo..hi {
                    let v = config.trial(i)?;
                    acc.push(v);
                    if config.retain_values {
                        kept.push(v);
                    }
                }
                Ok((acc, kept))
            })
            .collect()
    });

    let mut total = Welford::default();
    let mut values = config.retain_values.then(Vec::new);
    for block in reduced {
        let (acc, kept) = block?;
        total.merge(&acc);
        if let Some(all) = values.as_mut() {
            all.extend(kept);
        }
    }

    let stddev = total.variance().sqrt();
    let stderr = stddev / (config.trials as f64).sqrt();
    let constant = reference_constant(&config.model, config.statistic)?.map(|c| c.value);
    let params = config.model.params();
    Ok(ExperimentSummary {
        model: config.model.name().to_string(),
        rho: params.map(|p| p.rho()),
        chi: params.map(|p| p.chi()),
        n: config.n,
        trials: config.trials,
        seed: config.master_seed,
        statistic: config.statistic,
        mean: total.mean,
        stddev,
        stderr,
        ci_lo: total.mean - Z95 * stderr,
        ci_hi: total.mean + Z95 * stderr,
        constant,
        abs_diff: constant.map(|c| (total.mean - c).abs()),
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub mean: f64,
    pub constant: f64,
    pub abs_diff: f64,
    pub tol: f64,
    pub within_tol: bool,
    /// `|mean - constant| <= 3 stderr`, widened by the constant's own error.
    pub within_3se: bool,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.within_tol && self.within_3se
    }
}

pub fn compare_to_constant(summary: &ExperimentSummary, constant: &ConstantResult, tol: f64) -> Comparison {
    let abs_diff = (summary.mean - constant.value).abs();
    Comparison {
        mean: summary.mean,
        constant: constant.value,
        abs_diff,
        tol,
        within_tol: abs_diff <= tol,
        within_3se: abs_diff <= 3.0 * summary.stderr + constant.abs_error_estimate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

pub fn export(summaries: &[ExperimentSummary], format: ExportFormat, path: &Path) -> Result<(), ExperimentError> {
    let io = |e: std::io::Error| ExperimentError::Io(format!("{}: {e}", path.display()));
    let rows: Vec<SummaryRow> = summaries.iter().map(ExperimentSummary::row).collect();
    match format {
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_path(path).map_err(|e| ExperimentError::Io(e.to_string()))?;
            for row in &rows {
                w.serialize(row).map_err(|e| ExperimentError::Io(e.to_string()))?;
            }
            w.flush().map_err(io)?;
        }
        ExportFormat::Json => {
            let mut w = BufWriter::new(File::create(path).map_err(io)?);
            serde_json::to_writer_pretty(&mut w, &rows).map_err(|e| ExperimentError::Io(e.to_string()))?;
            writeln!(w).map_err(io)?;
            w.flush().map_err(io)?;
        }
    }
    Ok(())
}

pub fn read_export(format: ExportFormat, path: &Path) -> Result<Vec<SummaryRow>, ExperimentError> {
    let file = File::open(path).map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))?;
    match format {
        ExportFormat::Csv => csv::Reader::from_reader(file)
            .deserialize()
            .collect::<Result<_, _>>()
            .map_err(|e| ExperimentError::Parse(e.to_string())),
        ExportFormat::Json => {
            serde_json::from_reader(BufReader::new(file)).map_err(|e| ExperimentError::Parse(e.to_string()))
        }
    }
}
