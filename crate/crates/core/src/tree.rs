//! Rooted tree representation shared by every other module.
//!
//! Trees are stored as a dense parent array together with the derived
//! children lists. Children are kept in increasing index order; all the
//! generators number vertices in birth (or depth-first) order, so index order
//! doubles as the left-to-right order of an ordered tree.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("parent list is empty")]
    Empty,
    #[error("vertex {vertex} has parent {parent}, outside 0..{n}")]
    IndexOutOfRange { vertex: usize, parent: usize, n: usize },
    #[error("vertex {vertex} is a second root (first root is {first})")]
    MultipleRoots { first: usize, vertex: usize },
    #[error("no root: every vertex has a parent (vertex 0 lies on a cycle)")]
    NoRoot,
    #[error("vertex {vertex} is not connected to the root (parent relation has a cycle)")]
    CycleDetected { vertex: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

/// A finite rooted tree on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

/// Unrooted degrees and outdegrees of every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeView {
    pub deg: Vec<usize>,
    pub outdeg: Vec<usize>,
}

impl RootedTree {
    /// Builds and validates a tree from a parent list (`None` marks the root).
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self, TreeError> {
        let n = parents.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut root = None;
        for (v, p) in parents.iter().enumerate() {
            match *p {
                Some(p) if p >= n => {
                    return Err(TreeError::IndexOutOfRange { vertex: v, parent: p, n });
                }
                Some(_) => {}
                None => match root {
                    Some(first) => return Err(TreeError::MultipleRoots { first, vertex: v }),
                    None => root = Some(v),
                },
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;

        let mut children = vec![Vec::new(); n];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }

        // Every vertex must be reachable from the root; otherwise the parent
        // pointers of the unreachable part close a cycle.
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &c in &children[v] {
                if !seen[c] {
                    seen[c] = true;
                    reached += 1;
                    stack.push(c);
                }
            }
        }
        if reached != n {
            let vertex = seen.iter().position(|s| !s).unwrap_or(0);
            return Err(TreeError::CycleDetected { vertex });
        }

        Ok(Self { parent: parents.to_vec(), children, root })
    }

    /// The one-vertex tree.
    pub fn singleton() -> Self {
        Self { parent: vec![None], children: vec![Vec::new()], root: 0 }
    }

    /// Rooted path `0 -> 1 -> ... -> n-1`.
    pub fn path(n: usize) -> Self {
        assert!(n >= 1);
        let parents: Vec<_> = (0..n).map(|i| i.checked_sub(1)).collect();
        Self::from_parents(&parents).expect("a chain is a tree")
    }

    /// Root `0` with `leaves` leaf children.
    pub fn star(leaves: usize) -> Self {
        let parents: Vec<_> = (0..=leaves).map(|i| if i == 0 { None } else { Some(0) }).collect();
        Self::from_parents(&parents).expect("a star is a tree")
    }

    /// Re-roots an unrooted tree given by its edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x >= n {
                    return Err(TreeError::IndexOutOfRange { vertex: y, parent: x, n });
                }
                adj[x].push(y);
            }
        }
        if root >= n {
            return Err(TreeError::IndexOutOfRange { vertex: root, parent: root, n });
        }
        let mut parents = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parents[w] = Some(v);
                    stack.push(w);
                }
            }
        }
        if let Some(vertex) = seen.iter().position(|s| !s) {
            return Err(TreeError::CycleDetected { vertex });
        }
        if edges.len() != n - 1 {
            return Err(TreeError::CycleDetected { vertex: root });
        }
        Self::from_parents(&parents)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn outdeg(&self, v: usize) -> usize {
        self.children[v].len()
    }

    /// Degree of `v` in the underlying unrooted graph.
    pub fn deg(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.parent[v].is_some())
    }

    /// Neighbours of `v` in the unrooted graph: parent first, then children.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent[v].into_iter().chain(self.children[v].iter().copied())
    }

    pub fn degrees(&self) -> DegreeView {
        let outdeg: Vec<usize> = self.children.iter().map(Vec::len).collect();
        let deg = (0..self.len()).map(|v| self.deg(v)).collect();
        DegreeView { deg, outdeg }
    }

    /// True iff the unrooted tree is a path; a single vertex counts.
    pub fn is_path(&self) -> bool {
        (0..self.len()).all(|v| self.deg(v) <= 2)
    }

    /// Vertices in an order where every vertex comes after all its descendants.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children[v].iter().copied());
        }
        order.reverse();
        order
    }

    /// The subtree hanging below `v`, relabelled in depth-first preorder with
    /// children kept in their original order.
    pub fn subtree(&self, v: usize) -> RootedTree {
        let mut parents = vec![None];
        let mut stack: Vec<(usize, usize)> = self.children[v].iter().rev().map(|&c| (c, 0)).collect();
        while let Some((u, new_parent)) = stack.pop() {
            let id = parents.len();
            parents.push(Some(new_parent));
            stack.extend(self.children[u].iter().rev().map(|&c| (c, id)));
        }
        RootedTree::from_parents(&parents).expect("subtree of a tree is a tree")
    }

    /// Canonical code of the ordered rooted shape: `(` children `)` recursively.
    pub fn ordered_shape(&self) -> String {
        enum Step {
            Open(usize),
            Close,
        }
        let mut s = String::with_capacity(2 * self.len());
        let mut stack = vec![Step::Open(self.root)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Open(v) => {
                    s.push('(');
                    stack.push(Step::Close);
                    stack.extend(self.children[v].iter().rev().map(|&c| Step::Open(c)));
                }
                Step::Close => s.push(')'),
            }
        }
        s
    }

    /// Serializes to the line-oriented interchange format.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(8 * self.len());
        let _ = writeln!(s, "{}", self.len());
        for p in &self.parent {
            match p {
                Some(p) => {
                    let _ = writeln!(s, "{p}");
                }
                None => s.push_str("R\n"),
            }
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self, TreeError> {
        let mut lines = text.lines().enumerate();
        let (_, first) =
            lines.next().ok_or_else(|| TreeError::Parse { line: 1, message: "missing vertex count".into() })?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| TreeError::Parse { line: 1, message: format!("invalid vertex count {first:?}") })?;
        let mut parents = Vec::with_capacity(n);
        for (i, line) in lines {
            let token = line.trim();
            if token.is_empty() && i > n {
                continue;
            }
            if parents.len() == n {
                return Err(TreeError::Parse { line: i + 1, message: "more vertex lines than declared".into() });
            }
            let p = match token {
                "R" => None,
                t => Some(t.parse::<usize>().map_err(|_| TreeError::Parse {
                    line: i + 1,
                    message: format!("expected parent index or R, found {t:?}"),
                })?),
            };
            parents.push(p);
        }
        if parents.len() != n {
            return Err(TreeError::Parse {
                line: parents.len() + 2,
                message: format!("expected {n} vertex lines, found {}", parents.len()),
            });
        }
        Self::from_parents(&parents)
    }

    pub fn read_file(path: &Path) -> Result<Self, TreeError> {
        let text = fs::read_to_string(path).map_err(|e| TreeError::Io(format!("{}: {e}", path.display())))?;
        Self::parse_text(&text)
    }

    pub fn write_file(&self, path: &Path) -> Result<(), TreeError> {
        fs::write(path, self.to_text()).map_err(|e| TreeError::Io(format!("{}: {e}", path.display())))
    }
}
