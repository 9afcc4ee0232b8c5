//! Real structures on plane tropical curves with weight-2 ends.
//!
//! A [`WeightedPlaneParam`] is the parametrization whose even ends carry
//! direction `2v`. Cutting it along an admissible point set and doubling what
//! lies beyond gives a real parametrization [`RealSplit`] whose involution
//! swaps the two copies; taking the quotient recovers the base.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::lattice::{wedge, LatticeVector, RatPoint};
use crate::laurent::{HalfLaurent, LaurentError};
use crate::solver::TropicalSolution;
use crate::tree::overvalence;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("curve is not a tree")]
    NotATree,
    #[error("balancing fails at vertex {0}")]
    Unbalanced(usize),
    #[error("edge {0} is inconsistent with the vertex positions")]
    InconsistentEdge(usize),
    #[error("end {label} has weight {weight}; only 1 and 2 are allowed")]
    BadEndWeight { label: usize, weight: i64 },
    #[error("a plane parametrization needs at least one odd end")]
    NoOddEnd,
    #[error("end label {0} is repeated")]
    DuplicateEndLabel(usize),
    #[error("component of the even graph has {0} stems")]
    NoUniqueStem(usize),
    #[error("inadmissible splitting set: {0}")]
    InadmissibleSet(String),
    #[error("even ends point in {0} distinct directions")]
    MultipleDivisors(usize),
    #[error("vertex is flat")]
    FlatVertex,
    #[error("k = {k} is outside 0..{m1}")]
    OutOfRange { m1: i64, k: i64 },
    #[error("quadrivalent vertex has odd multiplicity {0}")]
    OddQuadMultiplicity(u64),
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("split curve violates {0}")]
    InvalidSplit(&'static str),
    #[error(transparent)]
    NotDivisible(#[from] LaurentError),
}

/// Where an edge ends: another vertex or an unbounded end. Conjugate ends of
/// a split curve share a label and differ in `copy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Vertex(usize),
    End { label: usize, copy: Option<u8> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamEdge {
    pub tail: usize,
    pub head: Endpoint,
    /// Slope pointing from `tail` to `head`.
    pub slope: LatticeVector,
    /// `None` exactly for unbounded ends.
    pub length: Option<Rational>,
}

impl ParamEdge {
    pub fn is_end(&self) -> bool {
        matches!(self.head, Endpoint::End { .. })
    }

    pub fn head_vertex(&self) -> Option<usize> {
        match self.head {
            Endpoint::Vertex(v) => Some(v),
            Endpoint::End { .. } => None,
        }
    }

    /// Slope pointing away from `v`, which must be an endpoint.
    pub fn slope_from(&self, v: usize) -> LatticeVector {
        if self.tail == v {
            self.slope
        } else {
            -self.slope
        }
    }

    pub fn other(&self, v: usize) -> Endpoint {
        if self.tail == v {
            self.head
        } else {
            Endpoint::Vertex(self.tail)
        }
    }
}

/// A parametrized tropical curve given by vertex images and edge data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamCurve {
    pub vertices: Vec<RatPoint>,
    pub edges: Vec<ParamEdge>,
}

impl ParamCurve {
    /// Vertex `i` is internal node `n + i` of the type, end `i` is leaf `i`.
    pub fn from_solution(sol: &TropicalSolution) -> Self {
        let t = sol.combinatorial_type();
        let n = t.n_leaves();
        let vertices = sol.vertex_positions();
        let edges = t
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| ParamEdge {
                tail: e.tail - n,
                head: if e.head < n {
                    Endpoint::End {
                        label: e.head,
                        copy: None,
                    }
                } else {
                    Endpoint::Vertex(e.head - n)
                },
                slope: t.edge_slope(i),
                length: sol.edge_length(i).cloned(),
            })
            .collect();
        ParamCurve { vertices, edges }
    }

    pub fn incident(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.tail].push(i);
            if let Endpoint::Vertex(h) = e.head {
                inc[h].push(i);
            }
        }
        inc
    }

    pub fn valences(&self) -> Vec<usize> {
        self.incident().iter().map(Vec::len).collect()
    }

    pub fn overvalence(&self) -> usize {
        overvalence(self.valences())
    }

    pub fn ends(&self) -> impl Iterator<Item = (usize, &ParamEdge)> {
        self.edges.iter().enumerate().filter(|(_, e)| e.is_end())
    }

    /// Checks connectivity, acyclicity, balancing and that every bounded
    /// edge joins its endpoints' images.
    pub fn validate(&self) -> Result<(), RealError> {
        let nv = self.vertices.len();
        let bounded = self.edges.iter().filter(|e| !e.is_end()).count();
        if nv == 0 || bounded + 1 != nv {
            return Err(RealError::NotATree);
        }
        let mut uf = UnionFind::new(nv);
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail >= nv {
                return Err(RealError::NotATree);
            }
            match (e.head, &e.length) {
                (Endpoint::Vertex(h), Some(len)) => {
                    if h >= nv || !uf.union(e.tail, h) {
                        return Err(RealError::NotATree);
                    }
                    if !len.is_positive()
                        || self.vertices[e.tail].offset(e.slope, len) != self.vertices[h]
                    {
                        return Err(RealError::InconsistentEdge(i));
                    }
                }
                (Endpoint::End { .. }, None) => {}
                _ => return Err(RealError::InconsistentEdge(i)),
            }
            if e.slope.is_zero() {
                return Err(RealError::InconsistentEdge(i));
            }
        }
        if (1..nv).any(|v| uf.find(v) != uf.find(0)) {
            return Err(RealError::NotATree);
        }
        for (v, inc) in self.incident().iter().enumerate() {
            let sum: LatticeVector = inc.iter().map(|&e| self.edges[e].slope_from(v)).sum();
            if !sum.is_zero() {
                return Err(RealError::Unbalanced(v));
            }
        }
        Ok(())
    }

    /// Canonical string of the curve rooted at the vertex of end `(0, None)`;
    /// equal strings exactly for isomorphic parametrized curves.
    pub fn canonical_form(&self) -> String {
        let inc = self.incident();
        let root = self
            .edges
            .iter()
            .find(|e| {
                e.head
                    == Endpoint::End {
                        label: 0,
                        copy: None,
                    }
            })
            .or_else(|| self.edges.iter().find(|e| e.is_end()))
            .map_or(0, |e| e.tail);
        fn walk(c: &ParamCurve, inc: &[Vec<usize>], v: usize, from: Option<usize>) -> String {
            let mut parts: Vec<String> = inc[v]
                .iter()
                .filter(|&&e| Some(e) != from)
                .map(|&e| {
                    let edge = &c.edges[e];
                    let tail = match edge.other(v) {
                        Endpoint::Vertex(u) => walk(c, inc, u, Some(e)),
                        Endpoint::End { label, copy } => match copy {
                            Some(k) => format!("e{label}.{k}"),
                            None => format!("e{label}"),
                        },
                    };
                    let len = edge
                        .length
                        .as_ref()
                        .map_or("inf".to_string(), |l| l.to_string());
                    format!("{}:{}:{}", edge.slope_from(v), len, tail)
                })
                .collect();
            parts.sort();
            format!("[{};{}]", c.vertices[v], parts.join(","))
        }
        walk(self, &inc, root, None)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// False if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

/// The rational parametrization of a plane curve with ends of weight 1 or 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPlaneParam {
    curve: ParamCurve,
}

impl WeightedPlaneParam {
    pub fn new(curve: ParamCurve) -> Result<Self, RealError> {
        curve.validate()?;
        let mut labels = BTreeSet::new();
        let mut odd = false;
        for (_, e) in curve.ends() {
            let Endpoint::End { label, copy } = e.head else {
                unreachable!()
            };
            if copy.is_some() || !labels.insert(label) {
                return Err(RealError::DuplicateEndLabel(label));
            }
            match e.slope.lattice_length() {
                1 => odd = true,
                2 => {}
                weight => return Err(RealError::BadEndWeight { label, weight }),
            }
        }
        if !odd {
            return Err(RealError::NoOddEnd);
        }
        Ok(Self { curve })
    }

    /// The plane parametrization underlying a solver solution.
    pub fn from_solution(sol: &TropicalSolution) -> Result<Self, RealError> {
        Self::new(ParamCurve::from_solution(sol))
    }

    pub fn curve(&self) -> &ParamCurve {
        &self.curve
    }

    pub fn n_ends(&self) -> usize {
        self.curve.ends().count()
    }

    /// Edge indices of the weight-2 ends.
    pub fn even_ends(&self) -> Vec<usize> {
        self.curve
            .ends()
            .filter(|(_, e)| e.slope.lattice_length() == 2)
            .map(|(i, _)| i)
            .collect()
    }

    /// `|ω(u, v)|` at every vertex, from two of its outgoing slopes.
    pub fn vertex_multiplicities(&self) -> Vec<u64> {
        self.curve
            .incident()
            .iter()
            .enumerate()
            .map(|(v, inc)| {
                let s: Vec<_> = inc
                    .iter()
                    .map(|&e| self.curve.edges[e].slope_from(v))
                    .collect();
                wedge(s[0], s[1]).unsigned_abs()
            })
            .collect()
    }

    pub fn is_isomorphic(&self, other: &WeightedPlaneParam) -> bool {
        self.curve.canonical_form() == other.curve.canonical_form()
    }
}

/// Smallest subgraph containing the even ends and closed under extendable
/// vertices (all incident edges but one already included). Edge indices,
/// ascending.
pub fn gamma_even(base: &WeightedPlaneParam) -> Vec<usize> {
    let curve = base.curve();
    let mut inside = vec![false; curve.edges.len()];
    for e in base.even_ends() {
        inside[e] = true;
    }
    let inc = curve.incident();
    loop {
        let mut changed = false;
        for edges in &inc {
            let missing: Vec<usize> = edges.iter().copied().filter(|&e| !inside[e]).collect();
            if missing.len() == 1 && edges.len() > 1 {
                inside[missing[0]] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..inside.len()).filter(|&e| inside[e]).collect()
}

/// A connected component of `Γ_even`, oriented away from its stem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenComponent {
    pub stem: usize,
    pub edges: Vec<usize>,
    /// For each vertex of the component, the edges leaving it away from the stem.
    children: BTreeMap<usize, Vec<usize>>,
}

impl EvenComponent {
    pub fn child_edges(&self, v: usize) -> &[usize] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.children.keys().copied()
    }

    /// Edges from the stem down to `edge`, inclusive, with the vertices passed.
    fn path_to(&self, curve: &ParamCurve, edge: usize) -> (Vec<usize>, Vec<usize>) {
        let mut parent_edge: BTreeMap<usize, usize> = BTreeMap::new();
        for (&v, kids) in &self.children {
            for &k in kids {
                if let Endpoint::Vertex(h) = curve.edges[k].other(v) {
                    parent_edge.insert(h, k);
                }
            }
        }
        let mut edges = vec![edge];
        let owner = |e: usize| {
            self.children
                .iter()
                .find(|(_, k)| k.contains(&e))
                .map(|(&v, _)| v)
                .expect("edge in component")
        };
        let mut verts = vec![owner(edge)];
        while let Some(&pe) = parent_edge.get(verts.last().unwrap()) {
            edges.push(pe);
            verts.push(owner(pe));
        }
        edges.reverse();
        verts.reverse();
        (edges, verts)
    }
}

/// Components of `Γ_even`, each with its unique non-extendable vertex.
pub fn even_components(base: &WeightedPlaneParam) -> Result<Vec<EvenComponent>, RealError> {
    let curve = base.curve();
    let even = gamma_even(base);
    let in_even: BTreeSet<usize> = even.iter().copied().collect();
    let inc = curve.incident();
    let mut uf = UnionFind::new(curve.edges.len());
    for edges in &inc {
        let inner: Vec<usize> = edges
            .iter()
            .copied()
            .filter(|e| in_even.contains(e))
            .collect();
        for w in inner.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in &even {
        groups.entry(uf.find(e)).or_default().push(e);
    }
    let mut out = Vec::new();
    for edges in groups.into_values() {
        let members: BTreeSet<usize> = edges.iter().copied().collect();
        let mut verts = BTreeSet::new();
        for &e in &edges {
            verts.insert(curve.edges[e].tail);
            if let Some(h) = curve.edges[e].head_vertex() {
                verts.insert(h);
            }
        }
        let stems: Vec<usize> = verts
            .iter()
            .copied()
            .filter(|&v| inc[v].iter().any(|e| !members.contains(e)))
            .collect();
        if stems.len() != 1 {
            return Err(RealError::NoUniqueStem(stems.len()));
        }
        let stem = stems[0];
        let mut children = BTreeMap::new();
        let mut stack = vec![(stem, usize::MAX)];
        while let Some((v, from)) = stack.pop() {
            let kids: Vec<usize> = inc[v]
                .iter()
                .copied()
                .filter(|&e| e != from && members.contains(&e))
                .collect();
            for &k in &kids {
                if let Endpoint::Vertex(u) = curve.edges[k].other(v) {
                    stack.push((u, k));
                }
            }
            children.insert(v, kids);
        }
        out.push(EvenComponent {
            stem,
            edges,
            children,
        });
    }
    Ok(out)
}

/// A point of a splitting set. `offset` is measured from the edge's tail in
/// the edge's length parameter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SplitPoint {
    EdgeInterior { edge: usize, offset: Rational },
    AtVertex(usize),
}

/// All cut classes of a component: edge sets meeting every stem-to-end path
/// exactly once.
pub fn admissible_sets(component: &EvenComponent, curve: &ParamCurve) -> Vec<Vec<usize>> {
    fn cuts(c: &EvenComponent, curve: &ParamCurve, edge: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![edge]];
        let e = &curve.edges[edge];
        let below = match e.other(owner_of(c, edge)) {
            Endpoint::Vertex(h) => h,
            Endpoint::End { .. } => return out,
        };
        out.extend(cuts_below(c, curve, below));
        out
    }
    fn cuts_below(c: &EvenComponent, curve: &ParamCurve, v: usize) -> Vec<Vec<usize>> {
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        for &k in c.child_edges(v) {
            let options = cuts(c, curve, k);
            acc = acc
                .iter()
                .flat_map(|prefix| {
                    options.iter().map(move |o| {
                        let mut p = prefix.clone();
                        p.extend(o);
                        p
                    })
                })
                .collect();
        }
        acc
    }
    fn owner_of(c: &EvenComponent, edge: usize) -> usize {
        c.children
            .iter()
            .find(|(_, k)| k.contains(&edge))
            .map(|(&v, _)| v)
            .unwrap()
    }
    if component.edges.is_empty() {
        return Vec::new();
    }
    let mut all = cuts_below(component, curve, component.stem);
    for cut in &mut all {
        cut.sort_unstable();
    }
    all
}

/// Points at the middle of each cut edge (at offset 1 on unbounded ends).
pub fn interior_points(curve: &ParamCurve, cut: &[usize]) -> Vec<SplitPoint> {
    cut.iter()
        .map(|&edge| {
            let offset = curve.edges[edge].length.as_ref().map_or_else(
                || Rational::from_integer(1.into()),
                |l| l / Rational::from_integer(2.into()),
            );
            SplitPoint::EdgeInterior { edge, offset }
        })
        .collect()
}

fn check_admissible(base: &WeightedPlaneParam, points: &[SplitPoint]) -> Result<(), RealError> {
    let curve = base.curve();
    let comps = even_components(base)?;
    let reject = |msg: String| Err(RealError::InadmissibleSet(msg));
    for p in points {
        match p {
            SplitPoint::EdgeInterior { edge, offset } => {
                let Some(e) = curve.edges.get(*edge) else {
                    return reject(format!("no edge {edge}"));
                };
                if !comps.iter().any(|c| c.edges.contains(edge)) {
                    return reject(format!("edge {edge} is not in the even graph"));
                }
                let inside = offset.is_positive() && e.length.as_ref().is_none_or(|l| offset < l);
                if !inside {
                    return reject(format!("offset {offset} outside edge {edge}"));
                }
            }
            SplitPoint::AtVertex(v) => {
                if !comps.iter().any(|c| !c.child_edges(*v).is_empty()) {
                    return reject(format!(
                        "vertex {v} is not an inner point of the even graph"
                    ));
                }
            }
        }
    }
    for c in &comps {
        for &e in &c.edges {
            if !curve.edges[e].is_end() {
                continue;
            }
            let (path, verts) = c.path_to(curve, e);
            let hits = points
                .iter()
                .filter(|p| match p {
                    SplitPoint::EdgeInterior { edge, .. } => path.contains(edge),
                    SplitPoint::AtVertex(v) => verts.contains(v),
                })
                .count();
            if hits != 1 {
                return reject(format!("{hits} points between the stem and end edge {e}"));
            }
        }
    }
    Ok(())
}

/// A quadrivalent vertex of a split curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadVertex {
    pub vertex: usize,
    pub base_vertex: usize,
    /// Multiplicity of the trivalent base vertex, `m_W`.
    pub multiplicity: u64,
}

/// `Γ(ℛ)` with its involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealSplit {
    base: WeightedPlaneParam,
    points: Vec<SplitPoint>,
    curve: ParamCurve,
    sigma_vertices: Vec<usize>,
    sigma_edges: Vec<usize>,
    quads: Vec<QuadVertex>,
    flats: Vec<usize>,
}

/// Cuts `base` at `points` and doubles every part reaching an even end.
pub fn build_split(
    base: &WeightedPlaneParam,
    points: &[SplitPoint],
) -> Result<RealSplit, RealError> {
    check_admissible(base, points)?;
    // refine: every interior point becomes a bivalent vertex
    let mut refined = base.curve().clone();
    let mut cut_vertices = BTreeSet::new();
    let mut origin: Vec<Option<usize>> = (0..refined.vertices.len()).map(Some).collect();
    for p in points {
        match p {
            SplitPoint::AtVertex(v) => {
                cut_vertices.insert(*v);
            }
            SplitPoint::EdgeInterior { edge, offset } => {
                let e = refined.edges[*edge].clone();
                let v = refined.vertices.len();
                refined
                    .vertices
                    .push(refined.vertices[e.tail].offset(e.slope, offset));
                origin.push(None);
                refined.edges[*edge] = ParamEdge {
                    tail: e.tail,
                    head: Endpoint::Vertex(v),
                    slope: e.slope,
                    length: Some(offset.clone()),
                };
                refined.edges.push(ParamEdge {
                    tail: v,
                    head: e.head,
                    slope: e.slope,
                    length: e.length.map(|l| l - offset),
                });
                cut_vertices.insert(v);
            }
        }
    }
    let inc = refined.incident();
    let ne = refined.edges.len();
    let mut uf = UnionFind::new(ne);
    for (v, edges) in inc.iter().enumerate() {
        if !cut_vertices.contains(&v) {
            for w in edges.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
    }
    let mut doubled_roots = BTreeSet::new();
    for (i, e) in refined.ends() {
        if e.slope.lattice_length() == 2 {
            doubled_roots.insert(uf.find(i));
        }
    }
    let doubled: Vec<bool> = (0..ne)
        .map(|e| doubled_roots.contains(&uf.find(e)))
        .collect();
    for (i, e) in refined.ends() {
        if doubled[i] && e.slope.lattice_length() != 2 {
            return Err(RealError::InadmissibleSet(format!(
                "odd end edge {i} would be doubled"
            )));
        }
    }
    // vertex copies: fixed vertices get one id, doubled ones two
    let mut ids: Vec<[usize; 2]> = Vec::with_capacity(refined.vertices.len());
    let mut vertices = Vec::new();
    let mut sigma_vertices = Vec::new();
    for v in 0..refined.vertices.len() {
        let is_doubled = !cut_vertices.contains(&v) && inc[v].iter().all(|&e| doubled[e]);
        let a = vertices.len();
        vertices.push(refined.vertices[v].clone());
        if is_doubled {
            vertices.push(refined.vertices[v].clone());
            sigma_vertices.extend([a + 1, a]);
            ids.push([a, a + 1]);
        } else {
            sigma_vertices.push(a);
            ids.push([a, a]);
        }
    }
    let two = Rational::from_integer(2.into());
    let mut edges = Vec::new();
    let mut sigma_edges = Vec::new();
    for (i, e) in refined.edges.iter().enumerate() {
        if !doubled[i] {
            sigma_edges.push(edges.len());
            edges.push(ParamEdge {
                tail: ids[e.tail][0],
                head: match e.head {
                    Endpoint::Vertex(h) => Endpoint::Vertex(ids[h][0]),
                    end => end,
                },
                slope: e.slope,
                length: e.length.clone(),
            });
            continue;
        }
        let half = e
            .slope
            .checked_div(2)
            .ok_or(RealError::InvalidSplit("even slopes on doubled edges"))?;
        let a = edges.len();
        sigma_edges.extend([a + 1, a]);
        for copy in 0..2u8 {
            edges.push(ParamEdge {
                tail: ids[e.tail][copy as usize],
                head: match e.head {
                    Endpoint::Vertex(h) => Endpoint::Vertex(ids[h][copy as usize]),
                    Endpoint::End { label, .. } => Endpoint::End {
                        label,
                        copy: Some(copy),
                    },
                },
                slope: half,
                length: e.length.as_ref().map(|l| l * &two),
            });
        }
    }
    let curve = ParamCurve { vertices, edges };
    let base_mults = base.vertex_multiplicities();
    let valences = curve.valences();
    let mut quads = Vec::new();
    let mut flats = Vec::new();
    for &v in &cut_vertices {
        let id = ids[v][0];
        match (valences[id], origin[v]) {
            (3, _) => flats.push(id),
            (4, Some(b)) => quads.push(QuadVertex {
                vertex: id,
                base_vertex: b,
                multiplicity: base_mults[b],
            }),
            _ => {}
        }
    }
    let mut points = points.to_vec();
    points.sort();
    let split = RealSplit {
        base: base.clone(),
        points,
        curve,
        sigma_vertices,
        sigma_edges,
        quads,
        flats,
    };
    split.validate()?;
    Ok(split)
}

impl RealSplit {
    pub fn base(&self) -> &WeightedPlaneParam {
        &self.base
    }

    pub fn points(&self) -> &[SplitPoint] {
        &self.points
    }

    pub fn curve(&self) -> &ParamCurve {
        &self.curve
    }

    pub fn sigma_vertices(&self) -> &[usize] {
        &self.sigma_vertices
    }

    pub fn sigma_edges(&self) -> &[usize] {
        &self.sigma_edges
    }

    pub fn quad_vertices(&self) -> &[QuadVertex] {
        &self.quads
    }

    /// Flat trivalent vertices created by splitting inside an edge.
    pub fn flat_vertices(&self) -> &[usize] {
        &self.flats
    }

    /// Edges fixed by the involution.
    pub fn fixed_edges(&self) -> Vec<usize> {
        (0..self.sigma_edges.len())
            .filter(|&e| self.sigma_edges[e] == e)
            .collect()
    }

    /// Number of conjugate pairs of ends.
    pub fn conjugate_pairs(&self) -> usize {
        self.base.even_ends().len()
    }

    /// Involution, equivariance of the map, connected fixed locus, balancing.
    pub fn validate(&self) -> Result<(), RealError> {
        let c = &self.curve;
        let sv = &self.sigma_vertices;
        let se = &self.sigma_edges;
        if sv.len() != c.vertices.len() || se.len() != c.edges.len() {
            return Err(RealError::InvalidSplit("involution size"));
        }
        if (0..sv.len()).any(|v| sv[sv[v]] != v) || (0..se.len()).any(|e| se[se[e]] != e) {
            return Err(RealError::InvalidSplit("involution"));
        }
        if (0..sv.len()).any(|v| c.vertices[sv[v]] != c.vertices[v]) {
            return Err(RealError::InvalidSplit("h∘σ = h"));
        }
        for (i, e) in c.edges.iter().enumerate() {
            let f = &c.edges[se[i]];
            let head_ok = match (e.head, f.head) {
                (Endpoint::Vertex(a), Endpoint::Vertex(b)) => sv[a] == b,
                (Endpoint::End { label: a, .. }, Endpoint::End { label: b, .. }) => a == b,
                _ => false,
            };
            if sv[e.tail] != f.tail || !head_ok || e.slope != f.slope || e.length != f.length {
                return Err(RealError::InvalidSplit("σ is an isometry commuting with h"));
            }
        }
        let fixed_vertices: Vec<usize> = (0..sv.len()).filter(|&v| sv[v] == v).collect();
        let mut uf = UnionFind::new(c.vertices.len());
        let mut fixed_components = fixed_vertices.len();
        for e in self.fixed_edges() {
            if let Some(h) = c.edges[e].head_vertex() {
                if uf.union(c.edges[e].tail, h) {
                    fixed_components -= 1;
                }
            }
        }
        if fixed_components != 1 {
            return Err(RealError::InvalidSplit("connected fixed locus"));
        }
        c.validate()
    }

    /// The base with each doubled end's multiplicity `m_V`, indexed by base vertex.
    pub fn base_multiplicities(&self) -> Vec<u64> {
        self.base.vertex_multiplicities()
    }
}

/// `Γ(ℛ)/σ`: orbits of vertices and edges, halved lengths and doubled slopes
/// on swapped pairs, with bivalent vertices smoothed out.
pub fn quotient_curve(split: &RealSplit) -> Result<WeightedPlaneParam, RealError> {
    let c = split.curve();
    let sv = split.sigma_vertices();
    let se = split.sigma_edges();
    let mut new_id = vec![usize::MAX; c.vertices.len()];
    let mut vertices = Vec::new();
    for v in 0..c.vertices.len() {
        if sv[v] >= v {
            new_id[v] = vertices.len();
            new_id[sv[v]] = vertices.len();
            vertices.push(c.vertices[v].clone());
        }
    }
    let two = Rational::from_integer(2.into());
    let mut edges: Vec<ParamEdge> = Vec::new();
    for (i, e) in c.edges.iter().enumerate() {
        if se[i] < i {
            continue;
        }
        let swapped = se[i] != i;
        edges.push(ParamEdge {
            tail: new_id[e.tail],
            head: match e.head {
                Endpoint::Vertex(h) => Endpoint::Vertex(new_id[h]),
                Endpoint::End { label, .. } => Endpoint::End { label, copy: None },
            },
            slope: if swapped { 2 * e.slope } else { e.slope },
            length: e
                .length
                .as_ref()
                .map(|l| if swapped { l / &two } else { l.clone() }),
        });
    }
    let mut curve = ParamCurve { vertices, edges };
    smooth_bivalent(&mut curve)?;
    WeightedPlaneParam::new(curve)
}

fn smooth_bivalent(curve: &mut ParamCurve) -> Result<(), RealError> {
    loop {
        let inc = curve.incident();
        let Some(v) = (0..inc.len()).find(|&v| inc[v].len() == 2) else {
            break;
        };
        let (x, y) = (inc[v][0], inc[v][1]);
        let ex = curve.edges[x].clone();
        let ey = curve.edges[y].clone();
        // orient as a -> v -> b, ends kept as heads
        let (first, second) = if ex.is_end() { (ey, ex) } else { (ex, ey) };
        let Endpoint::Vertex(a) = first.other(v) else {
            return Err(RealError::InvalidSplit(
                "two unbounded ends at a bivalent vertex",
            ));
        };
        let slope = -first.slope_from(v);
        if second.slope_from(v) != slope {
            return Err(RealError::Unbalanced(v));
        }
        let length = match (&first.length, &second.length) {
            (Some(p), Some(q)) => Some(p + q),
            _ => None,
        };
        let merged = ParamEdge {
            tail: a,
            head: second.other(v),
            slope,
            length,
        };
        let (lo, hi) = (x.min(y), x.max(y));
        curve.edges[lo] = merged;
        curve.edges.remove(hi);
        curve.vertices.remove(v);
        let shift = |u: usize| if u > v { u - 1 } else { u };
        for e in &mut curve.edges {
            e.tail = shift(e.tail);
            if let Endpoint::Vertex(h) = e.head {
                e.head = Endpoint::Vertex(shift(h));
            }
        }
    }
    Ok(())
}

/// The split at every stem: no flat vertices, one quadrivalent vertex per
/// component of `Γ_even`. Requires all even ends to be parallel.
pub fn maximal_split(base: &WeightedPlaneParam) -> Result<RealSplit, RealError> {
    let curve = base.curve();
    let mut dirs: Vec<LatticeVector> = base
        .even_ends()
        .iter()
        .map(|&e| curve.edges[e].slope)
        .collect();
    dirs.sort();
    dirs.dedup();
    if dirs.len() > 1 {
        return Err(RealError::MultipleDivisors(dirs.len()));
    }
    let points: Vec<SplitPoint> = even_components(base)?
        .iter()
        .map(|c| SplitPoint::AtVertex(c.stem))
        .collect();
    build_split(base, &points)
}

/// `m'_Γ = 4 ∏_W (q^{m_W/2} - q^{-m_W/2})/(q - q^{-1}) ∏_{V≠W} (q^{m_V/2} - q^{-m_V/2})`
/// over the vertices of the base.
pub fn m_prime(split: &RealSplit) -> Result<HalfLaurent, RealError> {
    for q in split.quad_vertices() {
        if q.multiplicity % 2 == 1 {
            return Err(RealError::OddQuadMultiplicity(q.multiplicity));
        }
    }
    let numerator: HalfLaurent = split
        .base_multiplicities()
        .into_iter()
        .map(|m| HalfLaurent::q_difference(m as i64))
        .product::<HalfLaurent>()
        .scale(&BigInt::from(4));
    let s = split.quad_vertices().len() as u32;
    Ok(numerator.exact_div(&HalfLaurent::q_difference(2).pow(s))?)
}

/// `(1/4) m'·(q - q^{-1})^s == (q^{1/2} - q^{-1/2})^{m-2-s} · m^q`.
pub fn bridge_identity_holds(m_prime: &HalfLaurent, mq: &HalfLaurent, m: usize, s: usize) -> bool {
    let Some(quarter) = m_prime.div_integer(&BigInt::from(4)) else {
        return false;
    };
    let exponent = m as i64 - 2 - s as i64;
    let left = &quarter * &HalfLaurent::q_difference(2).pow(s as u32);
    if exponent >= 0 {
        left == mq * &HalfLaurent::q_difference(1).pow(exponent as u32)
    } else {
        &left * &HalfLaurent::q_difference(1).pow(exponent.unsigned_abs() as u32) == *mq
    }
}

/// `2^{m - 2s} ∏ m_{W_i}` with `m = n_ends + s` the number of ends of `Δ`.
pub fn oriented_solution_count(split: &RealSplit) -> BigInt {
    let s = split.quad_vertices().len();
    let m = split.base().n_ends() + split.conjugate_pairs();
    let prod: BigInt = split
        .quad_vertices()
        .iter()
        .map(|q| BigInt::from(q.multiplicity))
        .product();
    (BigInt::from(1) << (m - 2 * s)) * prod
}

/// A half-integer `k/2`, stored as `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(pub i64);

impl HalfInteger {
    pub fn from_integer(n: i64) -> Self {
        HalfInteger(2 * n)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.0.into(), 2.into())
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// The two quantum indices `±|ω(u, v)|/2` of a real trivalent vertex.
pub fn trivalent_quantum_index(
    u: LatticeVector,
    v: LatticeVector,
) -> Result<[HalfInteger; 2], RealError> {
    let m = wedge(u, v).abs();
    if m == 0 {
        return Err(RealError::FlatVertex);
    }
    Ok([HalfInteger(-m), HalfInteger(m)])
}

fn check_quad_params(m1: i64, delta: i64) -> Result<(), RealError> {
    if m1 < 1 || delta < 1 {
        return Err(RealError::InvalidParameter(format!(
            "m1 = {m1}, delta = {delta}"
        )));
    }
    Ok(())
}

/// `δ(2k + 1 - m1)` for `k = 0..m1`, ascending.
pub fn quad_indices(m1: i64, delta: i64) -> Result<Vec<i64>, RealError> {
    check_quad_params(m1, delta)?;
    Ok((0..m1).map(|k| delta * (2 * k + 1 - m1)).collect())
}

/// `Σ_k q^{δ(2k + 1 - m1)}`.
pub fn quad_refined_sum(m1: i64, delta: i64) -> Result<HalfLaurent, RealError> {
    Ok(HalfLaurent::from_terms(
        quad_indices(m1, delta)?.into_iter().map(|k| (2 * k, 1)),
    ))
}

/// Logarithmic area of the `k`-th local curve in units of `π²`.
pub fn coamoeba_area(m1: i64, k: i64) -> Result<Rational, RealError> {
    check_quad_params(m1, 1)?;
    if !(0..m1).contains(&k) {
        return Err(RealError::OutOfRange { m1, k });
    }
    Ok(Rational::new((2 * k + 1).into(), m1.into()) - Rational::from_integer(1.into()))
}

/// Arguments `(2k + 1)/(2 m1)` with `c_k = cot(π (2k + 1)/(2 m1))`.
pub fn c_k_values(m1: i64) -> Result<Vec<Rational>, RealError> {
    check_quad_params(m1, 1)?;
    Ok((0..m1)
        .map(|k| Rational::new((2 * k + 1).into(), (2 * m1).into()))
        .collect())
}

/// Lattice normal form `Δ(m1, m2, m3)` of a vertex with an even end.
///
/// `m1` and `δ = m3 - m2` are invariants. `m2` is only defined up to the
/// shear acting on the even side, and a representative with `2 m2` even may
/// not exist; in that case `m2` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadNormalForm {
    pub m1: i64,
    pub delta: i64,
    pub m2: Option<i64>,
}

impl QuadNormalForm {
    pub fn m3(&self) -> Option<i64> {
        self.m2.map(|m2| m2 + self.delta)
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Normal form of the vertex with outgoing slopes `even` (lattice length
/// `2δ`), `a`, and `-even - a`.
pub fn quad_normal_form(
    even: LatticeVector,
    a: LatticeVector,
) -> Result<QuadNormalForm, RealError> {
    let len = even.lattice_length();
    if len == 0 || len % 2 == 1 {
        return Err(RealError::InvalidParameter(format!(
            "{even} is not an even direction"
        )));
    }
    let delta = len / 2;
    let b = -even - a;
    // dual triangle: sides are the rotated slopes in counterclockwise order
    let side = even.rotate_ccw();
    let next = if wedge(side, a.rotate_ccw()) > 0 {
        a.rotate_ccw()
    } else {
        b.rotate_ccw()
    };
    if wedge(side, next) <= 0 {
        return Err(RealError::FlatVertex);
    }
    // SL2 change of basis sending the primitive side direction to (1, 0)
    let w = side.primitive();
    let (_, r, s) = ext_gcd(w.x, w.y);
    // r w.x + s w.y = 1, so rows (r, s) and (-w.y, w.x) map w to (1, 0)
    let map = |p: LatticeVector| LatticeVector::new(r * p.x + s * p.y, -w.y * p.x + w.x * p.y);
    let base_end = map(side);
    let apex = map(side + next);
    debug_assert_eq!(base_end, LatticeVector::new(2 * delta, 0));
    let m1 = apex.y;
    debug_assert_eq!(m1, wedge(a, even.primitive()).abs());
    // translate the apex to x = 0; shears move 2 m2 by multiples of m1
    let r0 = (-apex.x).rem_euclid(m1);
    let m2 = if r0 % 2 == 0 {
        Some(r0 / 2)
    } else if m1 % 2 == 1 {
        Some((r0 + m1) / 2)
    } else {
        None
    };
    Ok(QuadNormalForm { m1, delta, m2 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuantumVertexKind {
    TrivalentReal,
    Quadrivalent(QuadNormalForm),
}

/// Local quantum-index data of one vertex of a real curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumVertexData {
    pub kind: QuantumVertexKind,
    pub indices: Vec<HalfInteger>,
    pub refined_sum: HalfLaurent,
    /// Logarithmic rotation number when it is determined locally.
    pub rot_log: Option<i64>,
}

impl QuantumVertexData {
    pub fn trivalent(u: LatticeVector, v: LatticeVector) -> Result<Self, RealError> {
        let indices = trivalent_quantum_index(u, v)?.to_vec();
        let refined_sum = HalfLaurent::from_terms(indices.iter().map(|k| (k.doubled(), 1)));
        Ok(Self {
            kind: QuantumVertexKind::TrivalentReal,
            indices,
            refined_sum,
            rot_log: None,
        })
    }

    pub fn quadrivalent(form: QuadNormalForm) -> Result<Self, RealError> {
        let indices = quad_indices(form.m1, form.delta)?
            .into_iter()
            .map(HalfInteger::from_integer)
            .collect();
        let refined_sum = quad_refined_sum(form.m1, form.delta)?;
        Ok(Self {
            kind: QuantumVertexKind::Quadrivalent(form),
            indices,
            refined_sum,
            rot_log: Some(0),
        })
    }
}

/// Local data for every quadrivalent vertex of a split, from the slopes of
/// the corresponding base vertex.
pub fn quad_vertex_data(split: &RealSplit) -> Result<Vec<QuantumVertexData>, RealError> {
    let base = split.base().curve();
    let inc = base.incident();
    split
        .quad_vertices()
        .iter()
        .map(|q| {
            let slopes: Vec<LatticeVector> = inc[q.base_vertex]
                .iter()
                .map(|&e| base.edges[e].slope_from(q.base_vertex))
                .collect();
            let even = *slopes.iter().find(|s| s.lattice_length() % 2 == 0).ok_or(
                RealError::InvalidSplit("quadrivalent vertex without even edge"),
            )?;
            let other = *slopes.iter().find(|&&s| s != even).unwrap_or(&slopes[0]);
            QuantumVertexData::quadrivalent(quad_normal_form(even, other)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    fn rat(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn end(tail: usize, label: usize, slope: LatticeVector) -> ParamEdge {
        ParamEdge {
            tail,
            head: Endpoint::End { label, copy: None },
            slope,
            length: None,
        }
    }

    /// Single vertex at the origin with ends `(-2,0)`, `(1,1)`, `(1,-1)`.
    fn tripod() -> WeightedPlaneParam {
        let curve = ParamCurve {
            vertices: vec![RatPoint::origin()],
            edges: vec![end(0, 0, v(1, 1)), end(0, 1, v(1, -1)), end(0, 2, v(-2, 0))],
        };
        WeightedPlaneParam::new(curve).unwrap()
    }

    /// Chain where two weight-2 ends meet at an extendable vertex.
    fn extendable_chain() -> WeightedPlaneParam {
        // vertex 1 at the origin carries ends (0,-2) and (-2,2); its third edge
        // has slope (2,0) to vertex 0 at (1,0), which has ends (1,1), (1,-1)
        let curve = ParamCurve {
            vertices: vec![RatPoint::from_ints(1, 0), RatPoint::origin()],
            edges: vec![
                ParamEdge {
                    tail: 1,
                    head: Endpoint::Vertex(0),
                    slope: v(2, 0),
                    length: Some(Rational::new(1.into(), 2.into())),
                },
                end(0, 0, v(1, 1)),
                end(0, 1, v(1, -1)),
                end(1, 2, v(0, -2)),
                end(1, 3, v(-2, 2)),
            ],
        };
        WeightedPlaneParam::new(curve).unwrap()
    }

    #[test]
    fn gamma_even_examples() {
        let odd = WeightedPlaneParam::new(ParamCurve {
            vertices: vec![RatPoint::origin()],
            edges: vec![end(0, 0, v(-1, 0)), end(0, 1, v(0, -1)), end(0, 2, v(1, 1))],
        })
        .unwrap();
        assert!(gamma_even(&odd).is_empty());
        assert!(admissible_sets_of(&odd).is_empty());
        assert_eq!(gamma_even(&tripod()), vec![2]);
        assert_eq!(gamma_even(&extendable_chain()), vec![0, 3, 4]);
    }

    fn admissible_sets_of(b: &WeightedPlaneParam) -> Vec<Vec<Vec<usize>>> {
        even_components(b)
            .unwrap()
            .iter()
            .map(|c| admissible_sets(c, b.curve()))
            .collect()
    }

    #[test]
    fn cut_classes() {
        assert_eq!(admissible_sets_of(&tripod()), vec![vec![vec![2]]]);
        let sets = admissible_sets_of(&extendable_chain());
        assert_eq!(sets, vec![vec![vec![0], vec![3, 4]]]);
        let comps = even_components(&extendable_chain()).unwrap();
        assert_eq!(comps[0].stem, 0);
    }

    #[test]
    fn split_at_vertex_is_quadrivalent() {
        let base = tripod();
        let split = build_split(&base, &[SplitPoint::AtVertex(0)]).unwrap();
        assert_eq!(split.quad_vertices().len(), 1);
        assert_eq!(split.quad_vertices()[0].multiplicity, 2);
        assert!(split.flat_vertices().is_empty());
        assert_eq!(split.curve().overvalence(), 1);
        let conj: Vec<_> = split
            .curve()
            .ends()
            .filter(|(_, e)| matches!(e.head, Endpoint::End { copy: Some(_), .. }))
            .collect();
        assert_eq!(conj.len(), 2);
        assert!(conj.iter().all(|(_, e)| e.slope == v(-1, 0)));
        assert!(quotient_curve(&split).unwrap().is_isomorphic(&base));
    }

    #[test]
    fn split_inside_end_is_flat() {
        let base = tripod();
        let points = interior_points(base.curve(), &[2]);
        let split = build_split(&base, &points).unwrap();
        assert!(split.quad_vertices().is_empty());
        assert_eq!(split.flat_vertices().len(), 1);
        assert_eq!(split.curve().vertices.len(), 2);
        assert!(quotient_curve(&split).unwrap().is_isomorphic(&base));
    }

    #[test]
    fn inadmissible_sets() {
        let base = extendable_chain();
        assert!(matches!(
            build_split(&base, &[]),
            Err(RealError::InadmissibleSet(_))
        ));
        let both = [
            interior_points(base.curve(), &[0]),
            interior_points(base.curve(), &[3]),
        ]
        .concat();
        assert!(matches!(
            build_split(&base, &both),
            Err(RealError::InadmissibleSet(_))
        ));
        assert!(matches!(
            build_split(&base, &interior_points(base.curve(), &[1])),
            Err(RealError::InadmissibleSet(_))
        ));
    }

    #[test]
    fn extendable_round_trips() {
        let base = extendable_chain();
        let c = base.curve();
        for points in [
            interior_points(c, &[0]),
            interior_points(c, &[3, 4]),
            vec![SplitPoint::AtVertex(0)],
            vec![SplitPoint::AtVertex(1)],
        ] {
            let split = build_split(&base, &points).unwrap();
            assert!(
                quotient_curve(&split).unwrap().is_isomorphic(&base),
                "{points:?}"
            );
        }
    }

    #[test]
    fn maximal_split_rules() {
        let split = maximal_split(&tripod()).unwrap();
        assert_eq!(split.quad_vertices().len(), 1);
        assert_eq!(oriented_solution_count(&split), BigInt::from(8));
        assert!(matches!(
            maximal_split(&extendable_chain()),
            Err(RealError::MultipleDivisors(2))
        ));
    }

    #[test]
    fn m_prime_examples() {
        let split = maximal_split(&tripod()).unwrap();
        // m = 4 ends of Δ, s = 1, single W with m_W = 2
        let mp = m_prime(&split).unwrap();
        assert_eq!(mp, HalfLaurent::constant(4));
        assert!(bridge_identity_holds(&mp, &HalfLaurent::q_sum(1), 4, 1));
    }

    #[test]
    fn trivalent_indices() {
        assert_eq!(
            trivalent_quantum_index(v(-1, 0), v(0, -1)).unwrap(),
            [HalfInteger(-1), HalfInteger(1)]
        );
        assert_eq!(
            trivalent_quantum_index(v(-2, 0), v(1, 1)).unwrap(),
            [HalfInteger(-2), HalfInteger(2)]
        );
        assert_eq!(
            trivalent_quantum_index(v(1, 0), v(2, 0)),
            Err(RealError::FlatVertex)
        );
        assert_eq!(HalfInteger(1).to_string(), "1/2");
        assert_eq!(HalfInteger(-4).to_string(), "-2");
    }

    #[test]
    fn quadrivalent_tables() {
        assert_eq!(quad_indices(1, 1).unwrap(), vec![0]);
        assert_eq!(quad_indices(2, 1).unwrap(), vec![-1, 1]);
        assert_eq!(quad_indices(3, 1).unwrap(), vec![-2, 0, 2]);
        assert_eq!(quad_refined_sum(1, 1).unwrap(), HalfLaurent::one());
        assert_eq!(quad_refined_sum(2, 1).unwrap(), HalfLaurent::q_sum(2));
        assert_eq!(
            quad_refined_sum(4, 1).unwrap(),
            HalfLaurent::from_terms([(6, 1), (2, 1), (-2, 1), (-6, 1)])
        );
        assert_eq!(coamoeba_area(1, 0).unwrap(), rat(0));
        assert_eq!(
            coamoeba_area(2, 0).unwrap(),
            Rational::new((-1).into(), 2.into())
        );
        assert_eq!(
            coamoeba_area(2, 1).unwrap(),
            Rational::new(1.into(), 2.into())
        );
        assert_eq!(
            coamoeba_area(2, 2),
            Err(RealError::OutOfRange { m1: 2, k: 2 })
        );
        let q = |a: i64, b: i64| Rational::new(a.into(), b.into());
        assert_eq!(c_k_values(1).unwrap(), vec![q(1, 2)]);
        assert_eq!(c_k_values(2).unwrap(), vec![q(1, 4), q(3, 4)]);
        assert_eq!(c_k_values(3).unwrap(), vec![q(1, 6), q(3, 6), q(5, 6)]);
    }

    #[test]
    fn normal_form_of_standard_triangle() {
        // Δ(m1, m2, m3) has slopes dual to (2m2,0)-(2m3,0)-(0,m1)
        for (m1, m2, m3) in [(1, 0, 1), (2, 0, 1), (3, 1, 2), (4, 1, 2), (5, 2, 4)] {
            // outward normals of the triangle's sides, lattice length included
            let e1 = LatticeVector::new(2 * m3 - 2 * m2, 0);
            let e2 = LatticeVector::new(-2 * m3, m1);
            let normal = |s: LatticeVector| LatticeVector::new(s.y, -s.x);
            let form = quad_normal_form(normal(e1), normal(e2)).unwrap();
            assert_eq!((form.m1, form.delta), (m1, m3 - m2));
            if let Some(k) = form.m2 {
                assert_eq!((2 * k - 2 * m2).rem_euclid(m1), 0);
            }
        }
        let f = quad_normal_form(v(-2, 0), v(1, 1)).unwrap();
        assert_eq!((f.m1, f.delta), (1, 1));
    }
}
