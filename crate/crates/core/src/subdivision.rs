//! Dual subdivision of the image of a parametrized curve.
//!
//! Each complementary region of the image gets the lattice point of its
//! dominant monomial. Crossing an edge of weighted slope `s` while moving in
//! direction `d` changes that point by `J s · sign(<J s, d>)`, with `J` the
//! quarter turn. Vertices of the curve give polygons with sides `J u`; nodes
//! where two edges cross give parallelograms.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{wedge, LatticePolygon, LatticeVector, RatPoint};
use crate::real::{Endpoint, ParamCurve};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubdivisionError {
    #[error("edges {0} and {1} overlap in the image")]
    Overlap(usize, usize),
    #[error("no generic ray direction found")]
    NoGenericRay,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCell {
    /// Lattice points in counterclockwise order.
    pub vertices: Vec<(i64, i64)>,
    /// True for the parallelogram dual to a node.
    pub is_node: bool,
}

impl DualCell {
    pub fn double_area(&self) -> i64 {
        let v = &self.vertices;
        (0..v.len())
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % v.len()]);
                a.0 * b.1 - a.1 * b.0
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub cells: Vec<DualCell>,
}

impl Subdivision {
    pub fn double_area(&self) -> i64 {
        self.cells.iter().map(DualCell::double_area).sum()
    }

    /// Matches the dual polygon: equal total area, all cell vertices inside.
    pub fn tiles(&self, polygon: &LatticePolygon) -> bool {
        let pv = polygon.vertices();
        let inside = |p: (i64, i64)| {
            (0..pv.len()).all(|i| {
                let (a, b) = (pv[i], pv[(i + 1) % pv.len()]);
                (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0
            })
        };
        self.double_area() == polygon.double_area()
            && self
                .cells
                .iter()
                .all(|c| c.vertices.iter().all(|&p| inside(p)))
    }
}

/// A piece of the image: `start + r·slope` for `r` in `(0, len)` or `r > 0`.
struct Piece {
    start: RatPoint,
    slope: LatticeVector,
    len: Option<Rational>,
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Parameters `(t, r)` with `p + t d = a + r s`, if the lines are not parallel.
fn intersect(
    p: &RatPoint,
    d: LatticeVector,
    a: &RatPoint,
    s: LatticeVector,
) -> Option<(Rational, Rational)> {
    let den = wedge(d, s);
    if den == 0 {
        return None;
    }
    let (dx, dy) = (&a.x - &p.x, &a.y - &p.y);
    // solve t d - r s = a - p
    let t = (&dx * rat(-s.y) + &dy * rat(s.x)) / rat(-den);
    let r = (&dx * rat(-d.y) + &dy * rat(d.x)) / rat(-den);
    Some((t, r))
}

enum RayHit {
    Cross,
    Miss,
    Degenerate,
}

fn ray_hit(p: &RatPoint, d: LatticeVector, piece: &Piece) -> RayHit {
    if wedge(d, piece.slope) == 0 {
        return RayHit::Degenerate;
    }
    let (t, r) = intersect(p, d, &piece.start, piece.slope).expect("not parallel");
    if !t.is_positive() {
        return RayHit::Miss;
    }
    let inside_far = piece.len.as_ref().is_none_or(|l| &r < l);
    let at_far = piece.len.as_ref() == Some(&r);
    if r.is_zero() || at_far {
        RayHit::Degenerate
    } else if r.is_positive() && inside_far {
        RayHit::Cross
    } else {
        RayHit::Miss
    }
}

/// Lattice point of the region entered by the ray from `p` in direction `d`
/// right after leaving `p`, relative to the far region in direction `d`.
fn region_point(p: &RatPoint, d: LatticeVector, pieces: &[Piece]) -> Option<LatticeVector> {
    let mut g = LatticeVector::ZERO;
    for piece in pieces {
        match ray_hit(p, d, piece) {
            RayHit::Cross => {
                let j = piece.slope.rotate_ccw();
                let jump = if j.x * d.x + j.y * d.y > 0 { j } else { -j };
                g += -jump;
            }
            RayHit::Miss => {}
            RayHit::Degenerate => return None,
        }
    }
    Some(g)
}

/// Cell around a point with outgoing weighted directions `dirs`, positioned
/// by casting a ray from the point.
fn cell_at(
    p: &RatPoint,
    mut dirs: Vec<LatticeVector>,
    pieces: &[Piece],
) -> Option<Vec<LatticeVector>> {
    dirs.sort_by(|a, b| a.angle_cmp(*b));
    let k = dirs.len();
    let candidates = (1..200i64).flat_map(|i| {
        [
            LatticeVector::new(2 * i + 1, 7 * i * i + 3),
            LatticeVector::new(-(3 * i + 2), 5 * i + 1),
        ]
    });
    for d in candidates {
        if dirs.iter().any(|&u| wedge(u, d) == 0) {
            continue;
        }
        // sector i lies between dirs[i] and dirs[i + 1]
        let sector = (0..k).find(|&i| {
            let (a, b) = (dirs[i], dirs[(i + 1) % k]);
            if wedge(a, b) > 0 {
                wedge(a, d) > 0 && wedge(d, b) > 0
            } else {
                wedge(a, d) > 0 || wedge(d, b) > 0
            }
        });
        let Some(sector) = sector else { continue };
        let Some(g) = region_point(p, d, pieces) else {
            continue;
        };
        let mut points = vec![g; k];
        for step in 1..k {
            let i = (sector + step) % k;
            let prev = (sector + step - 1) % k;
            points[i] = points[prev] + dirs[i].rotate_ccw();
        }
        return Some(points);
    }
    None
}

/// Dual subdivision of a trivalent parametrized curve with generic image.
pub fn dual_subdivision(curve: &ParamCurve) -> Result<Subdivision, SubdivisionError> {
    let pieces: Vec<Piece> = curve
        .edges
        .iter()
        .map(|e| Piece {
            start: curve.vertices[e.tail].clone(),
            slope: e.slope,
            len: e.length.clone(),
        })
        .collect();
    let inc = curve.incident();
    let mut raw: Vec<(Vec<LatticeVector>, bool)> = Vec::new();
    for (v, edges) in inc.iter().enumerate() {
        let dirs = edges
            .iter()
            .map(|&e| curve.edges[e].slope_from(v))
            .collect();
        let pts =
            cell_at(&curve.vertices[v], dirs, &pieces).ok_or(SubdivisionError::NoGenericRay)?;
        raw.push((pts, false));
    }
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let (a, b) = (&curve.edges[i], &curve.edges[j]);
            let shares = |x: usize| a.tail == x || a.head == Endpoint::Vertex(x);
            if shares(b.tail) || b.head_vertex().is_some_and(shares) {
                continue;
            }
            let (pa, pb) = (&pieces[i], &pieces[j]);
            let Some((t, r)) = intersect(&pa.start, pa.slope, &pb.start, pb.slope) else {
                if collinear_overlap(pa, pb) {
                    return Err(SubdivisionError::Overlap(i, j));
                }
                continue;
            };
            let within = |x: &Rational, len: &Option<Rational>| {
                x.is_positive() && len.as_ref().is_none_or(|l| x < l)
            };
            if within(&t, &pa.len) && within(&r, &pb.len) {
                let p = pa.start.offset(pa.slope, &t);
                let dirs = vec![pa.slope, -pa.slope, pb.slope, -pb.slope];
                let pts = cell_at(&p, dirs, &pieces).ok_or(SubdivisionError::NoGenericRay)?;
                raw.push((pts, true));
            }
        }
    }
    let min = raw
        .iter()
        .flat_map(|(p, _)| p.iter().copied())
        .min()
        .unwrap_or(LatticeVector::ZERO);
    let cells = raw
        .into_iter()
        .map(|(pts, is_node)| {
            let mut vertices: Vec<(i64, i64)> =
                pts.iter().map(|&g| (g.x - min.x, g.y - min.y)).collect();
            vertices.dedup();
            DualCell { vertices, is_node }
        })
        .collect();
    Ok(Subdivision { cells })
}

/// Parallel pieces on one line whose parameter ranges overlap.
fn collinear_overlap(a: &Piece, b: &Piece) -> bool {
    let dx = &b.start.x - &a.start.x;
    let dy = &b.start.y - &a.start.y;
    // same line iff the offset is parallel to the slope
    if &dx * rat(a.slope.y) != &dy * rat(a.slope.x) {
        return false;
    }
    let proj = |p: &RatPoint| &p.x * rat(a.slope.x) + &p.y * rat(a.slope.y);
    let range = |pc: &Piece| {
        let s0 = proj(&pc.start);
        let dir = rat(pc.slope.x * a.slope.x + pc.slope.y * a.slope.y);
        match &pc.len {
            Some(l) => {
                let s1 = &s0 + &(&dir * l);
                (Some(s0.clone().min(s1.clone())), Some(s0.max(s1)))
            }
            None if dir.is_positive() => (Some(s0), None),
            None => (None, Some(s0)),
        }
    };
    let (alo, ahi) = range(a);
    let (blo, bhi) = range(b);
    let lo_ok = match (&alo, &bhi) {
        (Some(l), Some(h)) => l < h,
        _ => true,
    };
    let hi_ok = match (&blo, &ahi) {
        (Some(l), Some(h)) => l < h,
        _ => true,
    };
    lo_ok && hi_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::generic_sample;
    use crate::lattice::Degree;
    use crate::real::WeightedPlaneParam;

    fn check(delta: &Degree, seed: u64) {
        let polygon = delta.polygon().unwrap();
        for sol in generic_sample(delta, seed).unwrap().solutions {
            let curve = WeightedPlaneParam::from_solution(&sol).unwrap();
            let sub = dual_subdivision(curve.curve()).unwrap();
            let areas: i64 = sol.vertex_multiplicities().iter().map(|&m| m as i64).sum();
            let nodes: i64 = sub
                .cells
                .iter()
                .filter(|c| c.is_node)
                .map(DualCell::double_area)
                .sum();
            assert_eq!(areas + nodes, polygon.double_area());
            assert!(sub.tiles(&polygon), "{delta} seed {seed}");
        }
    }

    #[test]
    fn single_vertex_is_the_triangle() {
        let d = Degree::projective_plane(1);
        let sol = generic_sample(&d, 0).unwrap().solutions.remove(0);
        let sub =
            dual_subdivision(WeightedPlaneParam::from_solution(&sol).unwrap().curve()).unwrap();
        assert_eq!(sub.cells.len(), 1);
        let mut v = sub.cells[0].vertices.clone();
        v.sort();
        assert_eq!(v, vec![(0, 0), (0, 1), (1, 0)]);
    }

    #[test]
    fn areas_add_up() {
        for seed in 0..10 {
            check(&Degree::projective_plane(2), seed);
            check(&Degree::rectangle(2, 1), seed);
            check(
                &Degree::from_pairs(&[(0, -1), (0, -1), (1, 1), (1, 1), (-2, 0)]).unwrap(),
                seed,
            );
        }
    }
}
