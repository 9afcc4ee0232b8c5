//! Exact solution of the evaluation map on a single combinatorial type.
//!
//! Unknowns are the root position `(x, y)` followed by the lengths of the
//! bounded edges in [`CombinatorialType::bounded_edges`] order; the outputs are
//! the moments of ends `2..n`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{moment_of, wedge, MomentVector, RatPoint};
use crate::laurent::HalfLaurent;
use crate::tree::{CombinatorialType, NodeId};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("expected {expected} moments, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("moment vector lies on a wall: bounded edge {edge} has length 0")]
    NonGeneric { edge: usize },
    #[error("|det| = {det} differs from the product of vertex multiplicities {product}")]
    FactorizationMismatch { det: BigInt, product: BigInt },
}

/// Result of solving one type against one moment vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(TropicalSolution),
    /// Some bounded edge would need negative length.
    NoSolution,
    /// The evaluation map is singular on this type (a flat vertex).
    Degenerate,
}

impl SolveOutcome {
    pub fn solution(self) -> Option<TropicalSolution> {
        match self {
            SolveOutcome::Solved(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalSolution {
    ctype: CombinatorialType,
    root_pos: RatPoint,
    lengths: Vec<Rational>,
    det_abs: BigInt,
}

/// Rows are ends `2..n`, columns are `x`, `y`, then bounded edge lengths.
/// The moment of end `i` is `ω(n_i, h(v))` with `v` the vertex the end hangs
/// from, and `h(v)` the root position plus the slopes along the path to `v`.
pub fn evaluation_matrix(t: &CombinatorialType) -> Vec<Vec<i64>> {
    let n = t.n_leaves();
    let bounded = t.bounded_edges();
    let mut column = vec![usize::MAX; t.edges().len()];
    for (j, &e) in bounded.iter().enumerate() {
        column[e] = j + 2;
    }
    (1..n)
        .map(|leaf| {
            let dir = t.leaf_direction(leaf);
            let mut row = vec![0i64; n - 1];
            row[0] = -dir.y;
            row[1] = dir.x;
            let path = t.path_edges_to(leaf);
            for &e in &path[..path.len() - 1] {
                row[column[e]] = wedge(dir, t.edge_slope(e));
            }
            row
        })
        .collect()
}

/// Gaussian elimination on `a x = b`; returns `None` when `a` is singular,
/// otherwise the solution and `det(a)`.
fn solve_linear(a: &[Vec<i64>], b: &[Rational]) -> Option<(Vec<Rational>, Rational)> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            row.iter()
                .map(|&v| Rational::from_integer(v.into()))
                .chain(std::iter::once(rhs.clone()))
                .collect()
        })
        .collect();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..=n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    let mut x = vec![Rational::zero(); n];
    for row in (0..n).rev() {
        let mut acc = m[row][n].clone();
        for c in row + 1..n {
            acc -= &m[row][c] * &x[c];
        }
        x[row] = acc / &m[row][row];
    }
    Some((x, det))
}

/// Solves `ev(Γ) = μ` on the cone of `t`.
///
/// A negative length anywhere means the point lies outside the cone, which
/// takes precedence over a zero length elsewhere.
pub fn solve(t: &CombinatorialType, mu: &MomentVector) -> Result<SolveOutcome, SolveError> {
    let n = t.n_leaves();
    if mu.len() != n - 1 {
        return Err(SolveError::DimensionMismatch {
            expected: n - 1,
            got: mu.len(),
        });
    }
    let a = evaluation_matrix(t);
    let Some((x, det)) = solve_linear(&a, mu.values()) else {
        return Ok(SolveOutcome::Degenerate);
    };
    let lengths = x[2..].to_vec();
    if lengths.iter().any(Signed::is_negative) {
        return Ok(SolveOutcome::NoSolution);
    }
    if let Some(j) = lengths.iter().position(Zero::is_zero) {
        return Err(SolveError::NonGeneric {
            edge: t.bounded_edges()[j],
        });
    }
    let det_abs = det.abs().to_integer();
    let product: BigInt = t
        .vertex_multiplicities()
        .iter()
        .map(|v| BigInt::from(v.multiplicity))
        .product();
    if det_abs != product || !det.is_integer() {
        return Err(SolveError::FactorizationMismatch {
            det: det_abs,
            product,
        });
    }
    let mut xs = x.into_iter();
    let root_pos = RatPoint::new(xs.next().unwrap(), xs.next().unwrap());
    Ok(SolveOutcome::Solved(TropicalSolution {
        ctype: t.clone(),
        root_pos,
        lengths,
        det_abs,
    }))
}

impl TropicalSolution {
    pub fn combinatorial_type(&self) -> &CombinatorialType {
        &self.ctype
    }

    pub fn root_pos(&self) -> &RatPoint {
        &self.root_pos
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn det_abs(&self) -> &BigInt {
        &self.det_abs
    }

    pub fn vertex_multiplicities(&self) -> Vec<u64> {
        self.ctype
            .vertex_multiplicities()
            .iter()
            .map(|v| v.multiplicity)
            .collect()
    }

    /// Length of an edge by its index in the type; `None` for unbounded ends.
    pub fn edge_length(&self, edge: usize) -> Option<&Rational> {
        self.ctype
            .bounded_edges()
            .iter()
            .position(|&e| e == edge)
            .map(|j| &self.lengths[j])
    }

    /// Positions of all internal vertices, indexed by `node - n_leaves`.
    pub fn vertex_positions(&self) -> Vec<RatPoint> {
        let t = &self.ctype;
        let n = t.n_leaves();
        let mut pos: Vec<Option<RatPoint>> = vec![None; t.n_nodes()];
        pos[t.root()] = Some(self.root_pos.clone());
        // edges are stored in traversal order, so tails are placed first
        for (e, edge) in t.edges().iter().enumerate() {
            if edge.head < n {
                continue;
            }
            let from = pos[edge.tail].clone().expect("tail placed before head");
            let len = self
                .edge_length(e)
                .expect("edge to internal vertex is bounded");
            pos[edge.head] = Some(from.offset(t.edge_slope(e), len));
        }
        pos.drain(n..)
            .map(|p| p.expect("every vertex reachable"))
            .collect()
    }

    pub fn vertex_position(&self, v: NodeId) -> RatPoint {
        self.vertex_positions()[v - self.ctype.n_leaves()].clone()
    }

    /// Moments `μ1..μn` recomputed from the vertex positions.
    pub fn end_moments(&self) -> Vec<Rational> {
        let t = &self.ctype;
        let positions = self.vertex_positions();
        (0..t.n_leaves())
            .map(|leaf| {
                let v = t.edges()[t.leaf_edge(leaf)].tail;
                moment_of(t.leaf_direction(leaf), &positions[v - t.n_leaves()])
            })
            .collect()
    }

    /// Block-Göttsche multiplicity `∏ [m_V]_q`.
    pub fn refined_multiplicity(&self) -> HalfLaurent {
        refined_multiplicity(&self.vertex_multiplicities())
    }
}

/// `∏ [m]_q` over the given nonzero vertex multiplicities.
pub fn refined_multiplicity(mults: &[u64]) -> HalfLaurent {
    mults
        .iter()
        .map(|&m| HalfLaurent::q_analog(m as i64).expect("vertex multiplicity is positive"))
        .product()
}
