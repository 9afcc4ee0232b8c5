//! Combinatorial types of rational tropical curves: trivalent trees with
//! labeled leaves, one leaf per end of the degree.
//!
//! Nodes `0..n` are the leaves (end `i` of the degree is leaf `i`); nodes
//! `n..2n-2` are the trivalent vertices. The root is the vertex adjacent to
//! leaf 0, and every edge is oriented away from it.

use std::fmt;

use thiserror::Error;

use crate::lattice::{wedge, Degree, LatticeVector};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a trivalent tree needs at least 3 ends, got {0}")]
    TooFewEnds(usize),
    #[error("edge list does not describe a trivalent tree on {0} leaves")]
    NotTrivalentTree(usize),
    #[error("expected {expected} leaf directions, got {got}")]
    DirectionCount { expected: usize, got: usize },
}

/// Unrooted tree topology on `n` labeled leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeShape {
    n_leaves: usize,
    edges: Vec<(NodeId, NodeId)>,
}

impl TreeShape {
    /// Validates that `edges` form a trivalent tree with leaves `0..n` and
    /// internal nodes `n..2n-2`.
    pub fn from_edges(n_leaves: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Self, TreeError> {
        if n_leaves < 3 {
            return Err(TreeError::TooFewEnds(n_leaves));
        }
        let n_nodes = 2 * n_leaves - 2;
        let bad = || TreeError::NotTrivalentTree(n_leaves);
        if edges.len() != 2 * n_leaves - 3 {
            return Err(bad());
        }
        let mut degree = vec![0usize; n_nodes];
        let mut uf: Vec<usize> = (0..n_nodes).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for &(a, b) in &edges {
            if a >= n_nodes || b >= n_nodes || a == b {
                return Err(bad());
            }
            degree[a] += 1;
            degree[b] += 1;
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra == rb {
                return Err(bad());
            }
            uf[ra] = rb;
        }
        let ok = (0..n_nodes).all(|v| degree[v] == if v < n_leaves { 1 } else { 3 });
        if !ok {
            return Err(bad());
        }
        Ok(Self { n_leaves, edges })
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Tree obtained from the star on leaves 0, 1, 2 by attaching leaf `k`
    /// to edge `choices[k - 3]` for `k = 3..n`.
    fn from_insertions(n_leaves: usize, choices: &[usize]) -> Self {
        let center = n_leaves;
        let mut edges = Vec::with_capacity(2 * n_leaves - 3);
        edges.extend([(0, center), (1, center), (2, center)]);
        for (i, &choice) in choices.iter().enumerate() {
            let leaf = i + 3;
            let v = n_leaves + leaf - 2;
            let (a, b) = edges[choice];
            edges[choice] = (a, v);
            edges.push((v, b));
            edges.push((v, leaf));
        }
        Self { n_leaves, edges }
    }
}

/// Streaming enumeration of all trivalent tree shapes on `n` labeled leaves.
///
/// Every shape is produced exactly once: leaf `k` is inserted on one of the
/// `2k - 3` edges of the tree on the first `k` leaves, and the insertion
/// sequence can be read back from the result by deleting leaves in reverse.
#[derive(Debug, Clone)]
pub struct ShapeEnumerator {
    n_leaves: usize,
    choices: Vec<usize>,
    done: bool,
}

impl ShapeEnumerator {
    pub fn new(n_leaves: usize) -> Result<Self, TreeError> {
        if n_leaves < 3 {
            return Err(TreeError::TooFewEnds(n_leaves));
        }
        Ok(Self {
            n_leaves,
            choices: vec![0; n_leaves - 3],
            done: false,
        })
    }

    /// `(2n - 5)!!`.
    pub fn count(n_leaves: usize) -> u64 {
        (3..n_leaves).map(|k| (2 * k - 3) as u64).product()
    }
}

impl Iterator for ShapeEnumerator {
    type Item = TreeShape;

    fn next(&mut self) -> Option<TreeShape> {
        if self.done {
            return None;
        }
        let shape = TreeShape::from_insertions(self.n_leaves, &self.choices);
        // odometer over choice k-3 in 0..2k-3 with the last leaf varying fastest
        let mut i = self.choices.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            let bound = 2 * (i + 3) - 3;
            self.choices[i] += 1;
            if self.choices[i] < bound {
                break;
            }
            self.choices[i] = 0;
        }
        Some(shape)
    }
}

/// Iterator over all combinatorial types of a degree.
pub struct TypeEnumerator {
    shapes: ShapeEnumerator,
    dirs: Vec<LatticeVector>,
}

impl Iterator for TypeEnumerator {
    type Item = CombinatorialType;

    fn next(&mut self) -> Option<CombinatorialType> {
        let shape = self.shapes.next()?;
        Some(derive_slopes(&shape, &self.dirs).expect("direction count matches shape"))
    }
}

/// All leaf-labeled trivalent trees with leaf `i` carrying end `i` of `delta`.
pub fn enumerate_types(delta: &Degree) -> Result<TypeEnumerator, TreeError> {
    Ok(TypeEnumerator {
        shapes: ShapeEnumerator::new(delta.len())?,
        dirs: delta.directions().collect(),
    })
}

/// An edge oriented away from the root; `head` may be a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeEdge {
    pub tail: NodeId,
    pub head: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialType {
    n_leaves: usize,
    root: NodeId,
    edges: Vec<TypeEdge>,
    edge_slopes: Vec<LatticeVector>,
    leaf_dirs: Vec<LatticeVector>,
    parent_edge: Vec<Option<usize>>,
    child_edges: Vec<Vec<usize>>,
    bounded: Vec<usize>,
}

/// Roots the shape at the vertex adjacent to leaf 0 and assigns to every edge
/// the sum of the leaf directions beyond it, which is the slope balancing
/// forces on a tree.
pub fn derive_slopes(
    shape: &TreeShape,
    dirs: &[LatticeVector],
) -> Result<CombinatorialType, TreeError> {
    let n = shape.n_leaves;
    if dirs.len() != n {
        return Err(TreeError::DirectionCount {
            expected: n,
            got: dirs.len(),
        });
    }
    let n_nodes = 2 * n - 2;
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::with_capacity(3); n_nodes];
    for &(a, b) in &shape.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let root = adj[0][0];
    // preorder traversal from the root, leaf 0 first
    let mut edges = Vec::with_capacity(shape.edges.len());
    let mut parent_edge = vec![None; n_nodes];
    let mut child_edges = vec![Vec::new(); n_nodes];
    let mut stack = vec![(root, usize::MAX)];
    let mut order = Vec::with_capacity(n_nodes);
    while let Some((v, from)) = stack.pop() {
        order.push(v);
        let mut next: Vec<NodeId> = adj[v].iter().copied().filter(|&u| u != from).collect();
        next.sort_unstable_by_key(|&u| std::cmp::Reverse(u));
        for &u in next.iter().rev() {
            let id = edges.len();
            edges.push(TypeEdge { tail: v, head: u });
            parent_edge[u] = Some(id);
            child_edges[v].push(id);
        }
        for u in next {
            stack.push((u, v));
        }
    }
    let mut beyond = vec![LatticeVector::ZERO; n_nodes];
    for &v in order.iter().rev() {
        if v < n {
            beyond[v] = dirs[v];
        } else {
            beyond[v] = child_edges[v].iter().map(|&e| beyond[edges[e].head]).sum();
        }
    }
    let edge_slopes = edges.iter().map(|e| beyond[e.head]).collect();
    let bounded = (0..edges.len()).filter(|&e| edges[e].head >= n).collect();
    Ok(CombinatorialType {
        n_leaves: n,
        root,
        edges,
        edge_slopes,
        leaf_dirs: dirs.to_vec(),
        parent_edge,
        child_edges,
        bounded,
    })
}

/// Per-vertex data: the three outgoing slopes and `|ω(u, v)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexData {
    pub vertex: NodeId,
    pub slopes: [LatticeVector; 3],
    pub multiplicity: u64,
}

impl VertexData {
    pub fn is_flat(&self) -> bool {
        self.multiplicity == 0
    }
}

impl CombinatorialType {
    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn n_nodes(&self) -> usize {
        2 * self.n_leaves - 2
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn is_leaf(&self, node: NodeId) -> bool {
        node < self.n_leaves
    }

    pub fn edges(&self) -> &[TypeEdge] {
        &self.edges
    }

    pub fn edge_slope(&self, edge: usize) -> LatticeVector {
        self.edge_slopes[edge]
    }

    pub fn edge_slopes(&self) -> &[LatticeVector] {
        &self.edge_slopes
    }

    pub fn leaf_direction(&self, leaf: usize) -> LatticeVector {
        self.leaf_dirs[leaf]
    }

    pub fn leaf_directions(&self) -> &[LatticeVector] {
        &self.leaf_dirs
    }

    /// Bounded edges in traversal order; this is the order of the length
    /// coordinates everywhere.
    pub fn bounded_edges(&self) -> &[usize] {
        &self.bounded
    }

    pub fn parent_edge(&self, node: NodeId) -> Option<usize> {
        self.parent_edge[node]
    }

    pub fn child_edges(&self, node: NodeId) -> &[usize] {
        &self.child_edges[node]
    }

    /// The unbounded end attached to leaf `leaf`.
    pub fn leaf_edge(&self, leaf: usize) -> usize {
        self.parent_edge[leaf].expect("every leaf hangs below the root")
    }

    pub fn internal_vertices(&self) -> std::ops::Range<NodeId> {
        self.n_leaves..self.n_nodes()
    }

    /// Outgoing slopes at an internal vertex: parent side first.
    pub fn outgoing_slopes(&self, v: NodeId) -> Vec<LatticeVector> {
        let mut out = Vec::with_capacity(3);
        if let Some(p) = self.parent_edge[v] {
            out.push(-self.edge_slopes[p]);
        }
        out.extend(self.child_edges[v].iter().map(|&e| self.edge_slopes[e]));
        out
    }

    pub fn vertex_multiplicities(&self) -> Vec<VertexData> {
        self.internal_vertices()
            .map(|v| {
                let s = self.outgoing_slopes(v);
                let slopes = [s[0], s[1], s[2]];
                VertexData {
                    vertex: v,
                    slopes,
                    multiplicity: wedge(s[0], s[1]).unsigned_abs(),
                }
            })
            .collect()
    }

    /// Leaves separated from the root by `edge`, ascending.
    pub fn leaves_beyond(&self, edge: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.edges[edge].head];
        while let Some(v) = stack.pop() {
            if self.is_leaf(v) {
                out.push(v);
            } else {
                stack.extend(self.child_edges[v].iter().map(|&e| self.edges[e].head));
            }
        }
        out.sort_unstable();
        out
    }

    /// Internal vertices on the path from the root to `node`, root first,
    /// together with the edges traversed.
    pub fn path_edges_to(&self, node: NodeId) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = node;
        while let Some(e) = self.parent_edge[cur] {
            path.push(e);
            cur = self.edges[e].tail;
        }
        path.reverse();
        path
    }

    /// Always zero: every internal vertex is trivalent.
    pub fn overvalence(&self) -> usize {
        overvalence(
            self.internal_vertices()
                .map(|v| self.outgoing_slopes(v).len()),
        )
    }

    /// Nested-parenthesis form rooted at the root vertex, ends numbered from
    /// 1, children sorted by their smallest end. Equal strings iff the labeled
    /// trees are isomorphic.
    pub fn serialize_tree(&self) -> String {
        fn walk(t: &CombinatorialType, v: NodeId) -> (usize, String) {
            if t.is_leaf(v) {
                return (v, (v + 1).to_string());
            }
            let mut parts: Vec<(usize, String)> = t.child_edges[v]
                .iter()
                .map(|&e| walk(t, t.edges[e].head))
                .collect();
            parts.sort();
            let min = parts[0].0;
            let body: Vec<String> = parts.into_iter().map(|p| p.1).collect();
            (min, format!("({})", body.join(",")))
        }
        walk(self, self.root).1
    }
}

impl fmt::Display for CombinatorialType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize_tree())
    }
}

/// `Σ (val(V) - 3)` over the given vertex valences.
pub fn overvalence<I: IntoIterator<Item = usize>>(valences: I) -> usize {
    valences.into_iter().map(|v| v.saturating_sub(3)).sum()
}
