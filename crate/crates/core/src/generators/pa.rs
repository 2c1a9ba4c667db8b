use rand::Rng;

use super::fenwick::FenwickTree;
use super::{GeneratorError, PAParams};
use crate::tree::RootedTree;

/// Grows a general linear preferential attachment tree on `n` vertices.
///
/// Vertex `i` attaches to an existing vertex `v` with probability
/// proportional to `rho + chi * outdeg(v)`.
pub fn sample_pa_tree<R: Rng + ?Sized>(params: PAParams, n: usize, rng: &mut R) -> Result<RootedTree, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::InvalidSize(0));
    }
    let mut weights = FenwickTree::with_capacity(n);
    let mut parents = Vec::with_capacity(n);
    parents.push(None);
    weights.push(params.rho());
    let chi = f64::from(params.chi());
    for _ in 1..n {
        let total = weights.total();
        if total <= 0.0 {
            return Err(GeneratorError::Internal("attachment weights exhausted".into()));
        }
        let v = weights.find(rng.random::<f64>() * total);
        parents.push(Some(v));
        if chi != 0.0 {
            weights.add(v, chi);
        }
        weights.push(params.rho());
    }
    RootedTree::from_parents(&parents).map_err(|e| GeneratorError::Internal(e.to_string()))
}
