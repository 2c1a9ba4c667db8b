//! Subtree properties and fringe counts.
//!
//! A subtree property looks only at `T_v`, the part of the tree hanging below
//! `v`. All built-in properties are evaluated from one bottom-up pass that
//! records subtree sizes and whether each subtree is a line.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::metric_dimension::md_report;
use crate::tree::RootedTree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FringeError {
    #[error("tree is a path; its metric dimension is 1 (or 0 for one vertex)")]
    IsPath,
}

/// Per-vertex memo of subtree size and line-ness.
#[derive(Debug, Clone)]
pub struct SubtreeSummary {
    pub size: Vec<usize>,
    pub is_line: Vec<bool>,
}

impl SubtreeSummary {
    pub fn new(tree: &RootedTree) -> Self {
        let n = tree.len();
        let mut size = vec![1usize; n];
        let mut is_line = vec![true; n];
        for v in tree.post_order() {
            let kids = tree.children(v);
            size[v] += kids.iter().map(|&c| size[c]).sum::<usize>();
            is_line[v] = match kids {
                [] => true,
                [c] => is_line[*c],
                _ => false,
            };
        }
        Self { size, is_line }
    }
}

/// A predicate on the subtree hanging below a vertex.
pub trait SubtreePredicate {
    fn holds(&self, tree: &RootedTree, summary: &SubtreeSummary, v: usize) -> bool;
}

impl<F> SubtreePredicate for F
where
    F: Fn(&RootedTree, &SubtreeSummary, usize) -> bool,
{
    fn holds(&self, tree: &RootedTree, summary: &SubtreeSummary, v: usize) -> bool {
        self(tree, summary, v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    /// `T_v` is a single vertex.
    Leaf,
    /// `v` has at least two children and some child subtree is a line.
    ExteriorProxy,
    /// Every vertex of `T_v` has at most one child.
    Line,
}

impl SubtreePredicate for Property {
    fn holds(&self, tree: &RootedTree, summary: &SubtreeSummary, v: usize) -> bool {
        match self {
            Property::Leaf => summary.size[v] == 1,
            Property::Line => summary.is_line[v],
            Property::ExteriorProxy => {
                let kids = tree.children(v);
                kids.len() >= 2 && kids.iter().any(|&c| summary.is_line[c])
            }
        }
    }
}

pub fn is_line(tree: &RootedTree, v: usize) -> bool {
    let mut cur = v;
    loop {
        match tree.children(cur) {
            [] => return true,
            [c] => cur = *c,
            _ => return false,
        }
    }
}

pub fn is_pl(tree: &RootedTree, v: usize) -> bool {
    tree.outdeg(v) == 0
}

pub fn is_pk(tree: &RootedTree, v: usize) -> bool {
    let kids = tree.children(v);
    kids.len() >= 2 && kids.iter().any(|&c| is_line(tree, c))
}

/// `n_P(T)`: the number of vertices whose hanging subtree satisfies `predicate`.
pub fn count_subtree_property<P: SubtreePredicate + ?Sized>(tree: &RootedTree, predicate: &P) -> usize {
    let summary = SubtreeSummary::new(tree);
    count_with_summary(tree, &summary, predicate)
}

pub fn count_with_summary<P: SubtreePredicate + ?Sized>(
    tree: &RootedTree,
    summary: &SubtreeSummary,
    predicate: &P,
) -> usize {
    (0..tree.len()).filter(|&v| predicate.holds(tree, summary, v)).count()
}

/// Counts feeding the leaf/exterior-major decomposition of the metric dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpsilonAudit {
    pub n_pl: usize,
    pub n_pk: usize,
    pub leaves: usize,
    pub exterior: usize,
    pub beta: usize,
    /// `beta - (n_pl - n_pk)`.
    pub epsilon: i64,
}

pub fn epsilon_audit(tree: &RootedTree) -> Result<EpsilonAudit, FringeError> {
    let md = md_report(tree);
    if md.is_path {
        return Err(FringeError::IsPath);
    }
    let summary = SubtreeSummary::new(tree);
    let n_pl = count_with_summary(tree, &summary, &Property::Leaf);
    let n_pk = count_with_summary(tree, &summary, &Property::ExteriorProxy);
    let epsilon = md.beta as i64 - (n_pl as i64 - n_pk as i64);
    Ok(EpsilonAudit { n_pl, n_pk, leaves: md.leaves.len(), exterior: md.exterior_major.len(), beta: md.beta, epsilon })
}

/// Histogram `k -> |{v : |T_v| = k}|`.
pub fn fringe_size_counts(tree: &RootedTree) -> BTreeMap<usize, usize> {
    let summary = SubtreeSummary::new(tree);
    let mut hist = BTreeMap::new();
    for &s in &summary.size {
        *hist.entry(s).or_insert(0) += 1;
    }
    hist
}
