//! Integer lattice vectors, toric degrees and their dual polygons.
//!
//! Directions live in the cocharacter lattice `N = Z^2`; polygons live in the
//! dual lattice `M`, identified with `Z^2` through the standard pairing. The
//! symplectic form is the standard determinant `ω(u, v) = u.x v.y - u.y v.x`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("degree entries sum to ({0}, {1}) instead of zero")]
    NonZeroSum(i64, i64),
    #[error("degree entry {0} is the zero vector")]
    ZeroDirection(usize),
    #[error("direction {direction} occurs {available} times, surgery needs {needed}")]
    InsufficientMultiplicity {
        direction: LatticeVector,
        available: usize,
        needed: usize,
    },
    #[error("degree entry {0} is not primitive")]
    NonPrimitive(usize),
    #[error("all directions of the degree are collinear")]
    DegenerateDegree,
    #[error("expected {expected} moments, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A vector of the lattice `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Lattice length: the gcd of the coordinates.
    pub fn lattice_length(self) -> i64 {
        self.x.gcd(&self.y)
    }

    pub fn is_primitive(self) -> bool {
        self.lattice_length() == 1
    }

    pub fn primitive(self) -> LatticeVector {
        let g = self.lattice_length();
        if g == 0 {
            self
        } else {
            LatticeVector::new(self.x / g, self.y / g)
        }
    }

    /// Both coordinates even.
    pub fn is_even(self) -> bool {
        self.x % 2 == 0 && self.y % 2 == 0
    }

    /// Rotation by a quarter turn counterclockwise.
    pub fn rotate_ccw(self) -> LatticeVector {
        LatticeVector::new(-self.y, self.x)
    }

    /// Exact division by an integer, if it divides both coordinates.
    pub fn checked_div(self, d: i64) -> Option<LatticeVector> {
        if d != 0 && self.x % d == 0 && self.y % d == 0 {
            Some(LatticeVector::new(self.x / d, self.y / d))
        } else {
            None
        }
    }

    /// Counterclockwise angular order starting from the positive x axis.
    pub fn angle_cmp(self, other: LatticeVector) -> Ordering {
        fn half(v: LatticeVector) -> u8 {
            if v.y > 0 || (v.y == 0 && v.x > 0) {
                0
            } else {
                1
            }
        }
        half(self)
            .cmp(&half(other))
            .then_with(|| 0.cmp(&wedge(self, other)))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for LatticeVector {
    fn add_assign(&mut self, rhs: LatticeVector) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(-self.x, -self.y)
    }
}

impl Mul<LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector::new(self * rhs.x, self * rhs.y)
    }
}

impl std::iter::Sum for LatticeVector {
    fn sum<I: Iterator<Item = LatticeVector>>(iter: I) -> LatticeVector {
        iter.fold(LatticeVector::ZERO, Add::add)
    }
}

/// The symplectic form `ω(u, v) = u.x v.y - u.y v.x`.
pub fn wedge(u: LatticeVector, v: LatticeVector) -> i64 {
    u.x * v.y - u.y * v.x
}

/// A point of `N_R` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RatPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(
            Rational::from_integer(x.into()),
            Rational::from_integer(y.into()),
        )
    }

    /// `self + t * v`.
    pub fn offset(&self, v: LatticeVector, t: &Rational) -> RatPoint {
        RatPoint::new(
            &self.x + t * Rational::from_integer(v.x.into()),
            &self.y + t * Rational::from_integer(v.y.into()),
        )
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `ω(n, p)` for a lattice direction and a point of `N_R`.
pub fn moment_of(n: LatticeVector, p: &RatPoint) -> Rational {
    Rational::from_integer(n.x.into()) * &p.y - Rational::from_integer(n.y.into()) * &p.x
}

/// One labeled unbounded end of a degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegreeEntry {
    pub direction: LatticeVector,
    pub label: usize,
}

/// An ordered family of nonzero lattice vectors summing to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degree {
    entries: Vec<DegreeEntry>,
    name: Option<String>,
}

impl Degree {
    /// Builds a degree from directions; labels are the positions in the list.
    pub fn new(directions: impl IntoIterator<Item = LatticeVector>) -> Result<Self, LatticeError> {
        let entries = directions
            .into_iter()
            .enumerate()
            .map(|(label, direction)| DegreeEntry { direction, label })
            .collect();
        Self::from_entries(entries)
    }

    pub fn from_entries(entries: Vec<DegreeEntry>) -> Result<Self, LatticeError> {
        if let Some(i) = entries.iter().position(|e| e.direction.is_zero()) {
            return Err(LatticeError::ZeroDirection(i));
        }
        let sum: LatticeVector = entries.iter().map(|e| e.direction).sum();
        if !sum.is_zero() {
            return Err(LatticeError::NonZeroSum(sum.x, sum.y));
        }
        Ok(Self {
            entries,
            name: None,
        })
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self, LatticeError> {
        Self::new(pairs.iter().map(|&(x, y)| LatticeVector::new(x, y)))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// `Δ_d`: `d` copies each of `-e1`, `-e2`, `e1 + e2`.
    pub fn projective_plane(d: usize) -> Self {
        let mut dirs = Vec::with_capacity(3 * d);
        dirs.extend(std::iter::repeat_n(LatticeVector::new(-1, 0), d));
        dirs.extend(std::iter::repeat_n(LatticeVector::new(0, -1), d));
        dirs.extend(std::iter::repeat_n(LatticeVector::new(1, 1), d));
        Self::new(dirs)
            .expect("projective plane degree is balanced")
            .with_name(format!("P2 degree {d}"))
    }

    /// The `a x b` rectangle degree: `b` copies of `∓e1` and `a` copies of `∓e2`.
    pub fn rectangle(a: usize, b: usize) -> Self {
        let mut dirs = Vec::with_capacity(2 * (a + b));
        dirs.extend(std::iter::repeat_n(LatticeVector::new(-1, 0), b));
        dirs.extend(std::iter::repeat_n(LatticeVector::new(0, -1), a));
        dirs.extend(std::iter::repeat_n(LatticeVector::new(1, 0), b));
        dirs.extend(std::iter::repeat_n(LatticeVector::new(0, 1), a));
        Self::new(dirs)
            .expect("rectangle degree is balanced")
            .with_name(format!("rectangle {a}x{b}"))
    }

    pub fn entries(&self) -> &[DegreeEntry] {
        &self.entries
    }

    pub fn directions(&self) -> impl ExactSizeIterator<Item = LatticeVector> + '_ {
        self.entries.iter().map(|e| e.direction)
    }

    pub fn direction(&self, end: usize) -> LatticeVector {
        self.entries[end].direction
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_primitive(&self) -> bool {
        self.directions().all(LatticeVector::is_primitive)
    }

    pub fn multiplicity_of(&self, v: LatticeVector) -> usize {
        self.directions().filter(|&d| d == v).count()
    }

    /// Sorted by `(direction, label)`; labels are kept.
    pub fn canonicalized(&self) -> Degree {
        let mut entries = self.entries.clone();
        entries.sort_by_key(|e| (e.direction, e.label));
        Degree {
            entries,
            name: self.name.clone(),
        }
    }

    /// The sorted list of directions, forgetting labels and order.
    pub fn direction_multiset(&self) -> Vec<LatticeVector> {
        let mut dirs: Vec<_> = self.directions().collect();
        dirs.sort();
        dirs
    }

    /// Replaces `2s` copies of `n1` by `s` copies of `2 n1`.
    ///
    /// The first `2s` occurrences of `n1` are removed, the remaining entries
    /// keep their order and are relabeled `0..`, and the weight-two ends are
    /// appended last.
    pub fn build_delta_s(&self, n1: LatticeVector, s: usize) -> Result<Degree, LatticeError> {
        if let Some(i) = self.directions().position(|d| !d.is_primitive()) {
            return Err(LatticeError::NonPrimitive(i));
        }
        let available = self.multiplicity_of(n1);
        if available < 2 * s {
            return Err(LatticeError::InsufficientMultiplicity {
                direction: n1,
                available,
                needed: 2 * s,
            });
        }
        let mut to_remove = 2 * s;
        let mut dirs = Vec::with_capacity(self.len() - s);
        for d in self.directions() {
            if d == n1 && to_remove > 0 {
                to_remove -= 1;
            } else {
                dirs.push(d);
            }
        }
        dirs.extend(std::iter::repeat_n(2 * n1, s));
        let mut out = Degree::new(dirs)?;
        out.name = self.name.as_ref().map(|n| format!("{n} (s={s})"));
        Ok(out)
    }

    /// The dual lattice polygon `P_Δ`.
    pub fn polygon(&self) -> Result<LatticePolygon, LatticeError> {
        polygon_of(self)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.directions().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct DegreeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    entries: Vec<[i64; 2]>,
}

impl Serialize for Degree {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DegreeJson {
            name: self.name.clone(),
            entries: self.directions().map(|d| [d.x, d.y]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = DegreeJson::deserialize(deserializer)?;
        let mut degree = Degree::new(raw.entries.iter().map(|&[x, y]| LatticeVector::new(x, y)))
            .map_err(serde::de::Error::custom)?;
        degree.name = raw.name;
        Ok(degree)
    }
}

/// A convex lattice polygon in `M`, vertices listed counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticePolygon {
    vertices: Vec<(i64, i64)>,
}

/// A side of a polygon: outward primitive normal and lattice length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolygonSide {
    pub normal: LatticeVector,
    pub lattice_length: i64,
}

impl LatticePolygon {
    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    /// Sides in counterclockwise order, starting at the first vertex.
    pub fn sides(&self) -> Vec<PolygonSide> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (ax, ay) = self.vertices[i];
                let (bx, by) = self.vertices[(i + 1) % n];
                let edge = LatticeVector::new(bx - ax, by - ay);
                let len = edge.lattice_length();
                // outward normal of a counterclockwise edge is its clockwise rotation
                let normal = LatticeVector::new(edge.y / len, -edge.x / len);
                PolygonSide {
                    normal,
                    lattice_length: len,
                }
            })
            .collect()
    }

    /// Primitive outward normals repeated by lattice length, sorted.
    pub fn primitive_normals(&self) -> Vec<LatticeVector> {
        let mut out: Vec<_> = self
            .sides()
            .into_iter()
            .flat_map(|s| std::iter::repeat_n(s.normal, s.lattice_length as usize))
            .collect();
        out.sort();
        out
    }

    /// Twice the Euclidean area (the normalized lattice area).
    pub fn double_area(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (ax, ay) = self.vertices[i];
                let (bx, by) = self.vertices[(i + 1) % n];
                ax * by - ay * bx
            })
            .sum()
    }

    pub fn boundary_points(&self) -> i64 {
        self.sides().iter().map(|s| s.lattice_length).sum()
    }
}

/// The polygon whose outward normals, counted with lattice length, are the
/// directions of `delta`. Anchored with its lexicographically minimal vertex
/// at the origin.
pub fn polygon_of(delta: &Degree) -> Result<LatticePolygon, LatticeError> {
    let dirs: Vec<_> = delta.directions().collect();
    if dirs.iter().all(|&u| dirs.iter().all(|&v| wedge(u, v) == 0)) {
        return Err(LatticeError::DegenerateDegree);
    }
    // side vector of a counterclockwise boundary = normal rotated by +90°
    let mut sides: Vec<LatticeVector> = Vec::new();
    let mut rotated: Vec<LatticeVector> = dirs.iter().map(|d| d.rotate_ccw()).collect();
    rotated.sort_by(|a, b| a.angle_cmp(*b));
    for r in rotated {
        match sides.last_mut() {
            Some(last) if wedge(*last, r) == 0 && last.x * r.x + last.y * r.y > 0 => *last += r,
            _ => sides.push(r),
        }
    }
    let mut vertices = Vec::with_capacity(sides.len());
    let mut cur = LatticeVector::ZERO;
    for s in &sides {
        vertices.push((cur.x, cur.y));
        cur += *s;
    }
    debug_assert!(cur.is_zero());
    let start = (0..vertices.len()).min_by_key(|&i| vertices[i]).unwrap();
    let (ox, oy) = vertices[start];
    vertices.rotate_left(start);
    for v in &mut vertices {
        v.0 -= ox;
        v.1 -= oy;
    }
    Ok(LatticePolygon { vertices })
}

/// Moments of the ends 2..n; the first moment is implied by Menelaus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MomentVector {
    values: Vec<Rational>,
}

impl MomentVector {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(
            values
                .iter()
                .map(|&v| Rational::from_integer(v.into()))
                .collect(),
        )
    }

    /// Accepts a full moment list (validated against Menelaus) and drops `μ1`.
    pub fn from_full(full: Vec<Rational>, delta: &Degree) -> Result<Self, MenelausViolation> {
        let sum = menelaus_sum(&full, delta).map_err(|_| MenelausViolation {
            sum: Rational::zero(),
            length: full.len(),
        })?;
        if !sum.is_zero() {
            return Err(MenelausViolation {
                sum,
                length: full.len(),
            });
        }
        Ok(Self::new(full[1..].to_vec()))
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `μ1 = -Σ μi` followed by the stored values.
    pub fn full(&self) -> Vec<Rational> {
        let first: Rational = -self.values.iter().sum::<Rational>();
        std::iter::once(first)
            .chain(self.values.iter().cloned())
            .collect()
    }

    pub fn scaled(&self, factor: &Rational) -> MomentVector {
        MomentVector::new(self.values.iter().map(|v| v * factor).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("moment list of length {length} violates Menelaus: sum is {sum}")]
pub struct MenelausViolation {
    pub sum: Rational,
    pub length: usize,
}

/// `Σ μe` over all ends; zero for any realizable configuration.
pub fn menelaus_sum(full_moments: &[Rational], delta: &Degree) -> Result<Rational, LatticeError> {
    if full_moments.len() != delta.len() {
        return Err(LatticeError::LengthMismatch {
            expected: delta.len(),
            got: full_moments.len(),
        });
    }
    Ok(full_moments.iter().sum())
}
