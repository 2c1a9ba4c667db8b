//! Exact sampling of critical Galton-Watson trees conditioned on their size.
//!
//! Draws `n` i.i.d. offspring counts, rejects unless they sum to `n - 1`, then
//! rotates the sequence with the cycle lemma so the Łukasiewicz walk stays
//! non-negative until its final step, and reads it as a preorder degree
//! sequence.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{GeneratorError, OffspringPmf};
use crate::tree::RootedTree;

pub const DEFAULT_REJECTION_BUDGET: usize = 1_000_000;

/// Whether some length-`n` offspring sequence over the support sums to `n - 1`.
///
/// Zeros pad freely (p_0 > 0), so this is membership of `n - 1` in the
/// additive semigroup generated by the positive support points.
fn size_reachable(pmf: &OffspringPmf, n: usize) -> bool {
    let target = n - 1;
    let support: Vec<usize> = (1..=pmf.max_offspring()).filter(|&k| pmf.p(k) > 0.0).collect();
    let mut reach = vec![false; target + 1];
    reach[0] = true;
    for s in 1..=target {
        reach[s] = support.iter().any(|&k| k <= s && reach[s - k]);
    }
    reach[target]
}

/// Reorders an offspring sequence summing to `len - 1` into the unique cyclic
/// shift that is a valid preorder degree sequence.
pub fn cycle_lemma_rotation(degrees: &[usize]) -> Vec<usize> {
    let mut walk = 0i64;
    let mut min = i64::MAX;
    let mut argmin = 0;
    for (i, &d) in degrees.iter().enumerate() {
        walk += d as i64 - 1;
        if walk < min {
            min = walk;
            argmin = i;
        }
    }
    let start = (argmin + 1) % degrees.len();
    degrees[start..].iter().chain(&degrees[..start]).copied().collect()
}

/// Builds the ordered tree whose preorder outdegree sequence is `degrees`.
pub fn tree_from_preorder_degrees(degrees: &[usize]) -> Result<RootedTree, GeneratorError> {
    let n = degrees.len();
    let mut parents = vec![None; n];
    let mut open: Vec<(usize, usize)> = vec![(0, degrees[0])];
    for (v, &d) in degrees.iter().enumerate().skip(1) {
        while matches!(open.last(), Some(&(_, 0))) {
            open.pop();
        }
        let top = open
            .last_mut()
            .ok_or_else(|| GeneratorError::Internal(format!("degree sequence closes early at vertex {v}")))?;
        top.1 -= 1;
        parents[v] = Some(top.0);
        open.push((v, d));
    }
    if open.iter().any(|&(_, r)| r > 0) {
        return Err(GeneratorError::Internal("degree sequence leaves unfilled slots".into()));
    }
    RootedTree::from_parents(&parents).map_err(|e| GeneratorError::Internal(e.to_string()))
}

pub fn sample_conditioned_gw<R: Rng + ?Sized>(
    pmf: &OffspringPmf,
    n: usize,
    rng: &mut R,
) -> Result<RootedTree, GeneratorError> {
    sample_conditioned_gw_with_budget(pmf, n, DEFAULT_REJECTION_BUDGET, rng)
}

pub fn sample_conditioned_gw_with_budget<R: Rng + ?Sized>(
    pmf: &OffspringPmf,
    n: usize,
    budget: usize,
    rng: &mut R,
) -> Result<RootedTree, GeneratorError> {
    pmf.require_critical()?;
    if n == 0 {
        return Err(GeneratorError::InvalidSize(0));
    }
    if n == 1 {
        return Ok(RootedTree::singleton());
    }
    if !size_reachable(pmf, n) {
        return Err(GeneratorError::UnreachableSize {
            n,
            reason: "no offspring sequence over the support sums to n - 1".into(),
        });
    }
    let dist = WeightedIndex::new(pmf.probs()).map_err(|e| GeneratorError::InvalidPmf(e.to_string()))?;
    let target = n - 1;
    let mut degrees = Vec::with_capacity(n);
    'attempt: for _ in 0..budget {
        degrees.clear();
        let mut sum = 0;
        for _ in 0..n {
            let d = dist.sample(rng);
            sum += d;
            if sum > target {
                continue 'attempt;
            }
            degrees.push(d);
        }
        if sum == target {
            return tree_from_preorder_degrees(&cycle_lemma_rotation(&degrees));
        }
    }
    Err(GeneratorError::UnreachableSize { n, reason: format!("rejection budget of {budget} attempts exhausted") })
}
