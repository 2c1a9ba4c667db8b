//! Metric dimension of trees.
//!
//! `md_report` evaluates `|L(T)| - |K(T)|` (leaves minus exterior major
//! vertices) in linear time. `is_resolving` and `brute_force_md` work from
//! the definition and serve as the oracle for it.

use std::collections::{BTreeSet, HashSet, VecDeque};

use itertools::Itertools;
use thiserror::Error;

use crate::tree::RootedTree;

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MdError {
    #[error("vertex {vertex} is out of range for a tree on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("tree has {n} vertices, above the brute-force cap of {cap}")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdReport {
    pub leaves: Vec<usize>,
    pub exterior_major: Vec<usize>,
    pub beta: usize,
    pub is_path: bool,
}

pub fn md_report(tree: &RootedTree) -> MdReport {
    let n = tree.len();
    let leaves: Vec<usize> = (0..n).filter(|&v| tree.deg(v) == 1).collect();
    if tree.is_path() {
        return MdReport { leaves, exterior_major: Vec::new(), beta: usize::from(n >= 2), is_path: true };
    }
    let mut exterior = BTreeSet::new();
    for &leaf in &leaves {
        let mut prev = leaf;
        let mut cur = tree.neighbors(leaf).next().expect("a leaf has one neighbour");
        while tree.deg(cur) == 2 {
            let next = tree.neighbors(cur).find(|&w| w != prev).expect("degree two");
            prev = cur;
            cur = next;
        }
        // a non-path tree has no leaf-to-leaf line, so `cur` is major
        debug_assert!(tree.deg(cur) >= 3);
        exterior.insert(cur);
    }
    let exterior_major: Vec<usize> = exterior.into_iter().collect();
    let beta = leaves.len() - exterior_major.len();
    MdReport { leaves, exterior_major, beta, is_path: false }
}

/// A candidate sensor set together with its distance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvingWitness {
    pub set: Vec<usize>,
    /// `distance_table[i][v]` is the distance from `set[i]` to `v`.
    pub distance_table: Vec<Vec<u32>>,
    n: usize,
}

impl ResolvingWitness {
    pub fn new(tree: &RootedTree, set: &[usize]) -> Result<Self, MdError> {
        let n = tree.len();
        if let Some(&vertex) = set.iter().find(|&&v| v >= n) {
            return Err(MdError::VertexOutOfRange { vertex, n });
        }
        let distance_table = set.iter().map(|&s| bfs_distances(tree, s)).collect();
        Ok(Self { set: set.to_vec(), distance_table, n })
    }

    /// True iff every vertex has a distinct column of distances.
    pub fn is_resolving(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.n);
        (0..self.n).all(|v| seen.insert(self.distance_table.iter().map(|row| row[v]).collect::<Vec<_>>()))
    }
}

fn bfs_distances(tree: &RootedTree, source: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; tree.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for w in tree.neighbors(v) {
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn is_resolving(tree: &RootedTree, candidate: &[usize]) -> Result<bool, MdError> {
    Ok(ResolvingWitness::new(tree, candidate)?.is_resolving())
}

pub fn brute_force_md(tree: &RootedTree) -> Result<(usize, Vec<usize>), MdError> {
    brute_force_md_with_cap(tree, DEFAULT_BRUTE_FORCE_CAP)
}

/// Smallest resolving set by exhaustive search in increasing size; the
/// witness is the lexicographically first set of that size.
pub fn brute_force_md_with_cap(tree: &RootedTree, cap: usize) -> Result<(usize, Vec<usize>), MdError> {
    let n = tree.len();
    if n > cap {
        return Err(MdError::TooLarge { n, cap });
    }
    if n == 1 {
        return Ok((0, Vec::new()));
    }
    let dist: Vec<Vec<u32>> = (0..n).map(|s| bfs_distances(tree, s)).collect();
    let mut columns = vec![0u128; n];
    for k in 1..=n {
        for set in (0..n).combinations(k) {
            // distances are < 2^7 for n <= 128, so a column packs into a u128
            // for |set| <= 18
            let resolving = if n <= 128 && k <= 18 {
                for (v, col) in columns.iter_mut().enumerate() {
                    *col = set.iter().fold(0u128, |acc, &s| (acc << 7) | u128::from(dist[s][v]));
                }
                columns.sort_unstable();
                columns.windows(2).all(|w| w[0] != w[1])
            } else {
                let mut seen = HashSet::new();
                (0..n).all(|v| seen.insert(set.iter().map(|&s| dist[s][v]).collect::<Vec<_>>()))
            };
            if resolving {
                return Ok((k, set));
            }
        }
    }
    unreachable!("the full vertex set always resolves")
}
