//! Random tree samplers. Every sampler takes an explicit RNG so that a trial
//! is a pure function of its `(master_seed, index)` stream.

mod cmj;
mod fenwick;
mod gw;
mod pa;
mod pmf;
mod race;
mod rng;
mod uniform;

use thiserror::Error;

pub use cmj::{simulate_cmj, CmjTree, StopRule};
pub use fenwick::FenwickTree;
pub use gw::{
    cycle_lemma_rotation, sample_conditioned_gw, sample_conditioned_gw_with_budget, tree_from_preorder_degrees,
    DEFAULT_REJECTION_BUDGET,
};
pub use pa::sample_pa_tree;
pub use pmf::OffspringPmf;
pub use race::{sample_child_birth, sample_h};
pub use rng::RngSpec;
pub use uniform::{prufer_decode, sample_uniform_tree};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("invalid offspring distribution: {0}")]
    InvalidPmf(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("tree size {0} is invalid")]
    InvalidSize(usize),
    #[error("size {n} is unreachable: {reason}")]
    UnreachableSize { n: usize, reason: String },
    #[error("internal generator error: {0}")]
    Internal(String),
}

/// Parameters `(rho, chi)` of general linear preferential attachment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PAParams {
    rho: f64,
    chi: i8,
}

impl PAParams {
    pub fn new(rho: f64, chi: i8) -> Result<Self, GeneratorError> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(GeneratorError::InvalidParams(format!("rho = {rho} must be positive")));
        }
        if !matches!(chi, -1..=1) {
            return Err(GeneratorError::InvalidParams(format!("chi = {chi} must be -1, 0 or 1")));
        }
        if chi == -1 && rho.fract() != 0.0 {
            return Err(GeneratorError::InvalidParams(format!("chi = -1 requires integer rho, got {rho}")));
        }
        Ok(Self { rho, chi })
    }

    pub const BST: PAParams = PAParams { rho: 2.0, chi: -1 };
    pub const RRT: PAParams = PAParams { rho: 1.0, chi: 0 };
    pub const PLPA: PAParams = PAParams { rho: 1.0, chi: 1 };

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn chi(&self) -> i8 {
        self.chi
    }

    /// Attachment weight (equivalently, next-birth rate) of a vertex that
    /// already has `children` children.
    pub fn birth_rate(&self, children: usize) -> f64 {
        (self.rho + f64::from(self.chi) * children as f64).max(0.0)
    }

    /// Child capacity for `chi = -1`, unbounded otherwise.
    pub fn max_children(&self) -> Option<usize> {
        (self.chi == -1).then_some(self.rho as usize)
    }
}
