//! Continuous-time Crump-Mode-Jagers simulation with linear preferential
//! attachment reproduction: a vertex with `j` children gets its next child
//! after an independent `Exp(rho + chi * j)` wait.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;
use rand_distr::Exp1;

use super::{GeneratorError, PAParams};
use crate::tree::RootedTree;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Stop at the birth of the `n`-th vertex.
    FixedSize(usize),
    /// Keep every vertex born strictly before time `t`.
    Horizon(f64),
    /// Draw an independent `Exp(rho + chi)` doomsday time, then stop there.
    ExpDoomsday,
}

/// A CMJ tree with vertices numbered in birth order.
#[derive(Debug, Clone)]
pub struct CmjTree {
    pub tree: RootedTree,
    pub birth_time: Vec<f64>,
    /// Horizon the process was run to (birth time of the last vertex for `FixedSize`).
    pub stop_time: f64,
}

#[derive(Debug, PartialEq)]
struct Birth {
    time: f64,
    parent: usize,
}

impl Eq for Birth {}

impl Ord for Birth {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on time
        other.time.total_cmp(&self.time).then_with(|| other.parent.cmp(&self.parent))
    }
}

impl PartialOrd for Birth {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn exp_sample<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    e / rate
}

pub fn simulate_cmj<R: Rng + ?Sized>(params: PAParams, stop: StopRule, rng: &mut R) -> Result<CmjTree, GeneratorError> {
    let (max_size, horizon) = match stop {
        StopRule::FixedSize(0) => return Err(GeneratorError::InvalidSize(0)),
        StopRule::FixedSize(n) => (n, f64::INFINITY),
        StopRule::Horizon(t) if t.is_nan() || t < 0.0 => {
            return Err(GeneratorError::InvalidParams(format!("horizon {t} must be non-negative")))
        }
        StopRule::Horizon(t) => (usize::MAX, t),
        StopRule::ExpDoomsday => {
            let rate = params.rho() + f64::from(params.chi());
            if rate <= 0.0 {
                return Err(GeneratorError::InvalidParams(format!(
                    "doomsday rate rho + chi = {rate} must be positive"
                )));
            }
            (usize::MAX, exp_sample(rate, rng))
        }
    };

    let mut parents = vec![None];
    let mut birth_time = vec![0.0];
    let mut child_count = vec![0usize];
    let mut pending = BinaryHeap::new();
    pending.push(Birth { time: exp_sample(params.birth_rate(0), rng), parent: 0 });

    while parents.len() < max_size {
        let Some(next) = pending.pop() else { break };
        if next.time >= horizon {
            break;
        }
        let id = parents.len();
        parents.push(Some(next.parent));
        birth_time.push(next.time);
        child_count.push(0);

        child_count[next.parent] += 1;
        let rate = params.birth_rate(child_count[next.parent]);
        if rate > 0.0 {
            pending.push(Birth { time: next.time + exp_sample(rate, rng), parent: next.parent });
        }
        pending.push(Birth { time: next.time + exp_sample(params.birth_rate(0), rng), parent: id });
    }

    let stop_time = if horizon.is_finite() { horizon } else { *birth_time.last().unwrap_or(&0.0) };
    let tree = RootedTree::from_parents(&parents).map_err(|e| GeneratorError::Internal(e.to_string()))?;
    Ok(CmjTree { tree, birth_time, stop_time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::RngSpec;

    #[test]
    fn fixed_size_one_is_root_at_zero() {
        let mut rng = RngSpec::new(0).stream(0);
        let t = simulate_cmj(PAParams::new(1.0, 1).unwrap(), StopRule::FixedSize(1), &mut rng).unwrap();
        assert_eq!(t.tree.len(), 1);
        assert_eq!(t.birth_time, vec![0.0]);
    }

    #[test]
    fn birth_times_are_consistent() {
        let mut rng = RngSpec::new(1).stream(0);
        for (rho, chi) in [(2.0, -1), (1.0, 0), (1.0, 1), (0.5, 1)] {
            let p = PAParams::new(rho, chi).unwrap();
            let t = simulate_cmj(p, StopRule::FixedSize(400), &mut rng).unwrap();
            assert_eq!(t.tree.len(), 400);
            for v in 0..t.tree.len() {
                if let Some(par) = t.tree.parent(v) {
                    assert!(t.birth_time[v] > t.birth_time[par]);
                }
                let kids = t.tree.children(v);
                assert!(kids.windows(2).all(|w| t.birth_time[w[0]] < t.birth_time[w[1]]));
            }
            assert!(t.birth_time.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn horizon_keeps_only_earlier_births() {
        let mut rng = RngSpec::new(2).stream(0);
        let p = PAParams::new(1.0, 0).unwrap();
        let t = simulate_cmj(p, StopRule::Horizon(3.0), &mut rng).unwrap();
        assert!(t.birth_time.iter().all(|&b| b < 3.0));
        assert_eq!(t.stop_time, 3.0);
        let t0 = simulate_cmj(p, StopRule::Horizon(0.0), &mut rng).unwrap();
        assert_eq!(t0.tree.len(), 1);
        assert!(simulate_cmj(p, StopRule::Horizon(-1.0), &mut rng).is_err());
    }

    #[test]
    fn doomsday_needs_positive_rate() {
        let mut rng = RngSpec::new(3).stream(0);
        let path = PAParams::new(1.0, -1).unwrap();
        assert!(simulate_cmj(path, StopRule::ExpDoomsday, &mut rng).is_err());
        assert!(simulate_cmj(path, StopRule::FixedSize(0), &mut rng).is_err());
    }

    #[test]
    fn truncated_reproduction_caps_children() {
        let mut rng = RngSpec::new(4).stream(0);
        let p = PAParams::new(3.0, -1).unwrap();
        let t = simulate_cmj(p, StopRule::FixedSize(500), &mut rng).unwrap();
        assert!((0..500).all(|v| t.tree.outdeg(v) <= 3));
    }
}
