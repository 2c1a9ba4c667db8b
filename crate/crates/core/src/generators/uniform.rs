use rand::Rng;

use super::GeneratorError;
use crate::tree::RootedTree;

/// Decodes a Prüfer sequence over labels `0..n` (length `n - 2`) into an edge list.
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = degree.iter().position(|&d| d == 1).expect("a tree has a leaf");
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

/// Uniform labelled tree on `n` vertices, rooted at a uniform vertex.
pub fn sample_uniform_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<RootedTree, GeneratorError> {
    match n {
        0 => Err(GeneratorError::InvalidSize(0)),
        1 => Ok(RootedTree::singleton()),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
            let edges = prufer_decode(&seq, n);
            let root = rng.random_range(0..n);
            RootedTree::from_edges(n, &edges, root).map_err(|e| GeneratorError::Internal(e.to_string()))
        }
    }
}
