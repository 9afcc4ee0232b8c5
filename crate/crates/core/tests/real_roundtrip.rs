use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use tropical_refine::invariants::invariant_report;
use tropical_refine::lattice::{wedge, Degree, LatticeVector, RatPoint};
use tropical_refine::laurent::HalfLaurent;
use tropical_refine::real::{
    admissible_sets, bridge_identity_holds, build_split, even_components, gamma_even,
    interior_points, m_prime, maximal_split, oriented_solution_count, quad_indices,
    quad_refined_sum, quad_vertex_data, quotient_curve, Endpoint, ParamCurve, ParamEdge, RealError,
    SplitPoint, WeightedPlaneParam,
};
use tropical_refine::Rational;

fn below(rng: &mut SplitMix64, n: u64) -> u64 {
    rng.next_u64() % n
}

fn small(rng: &mut SplitMix64, r: i64) -> i64 {
    below(rng, 2 * r as u64 + 1) as i64 - r
}

fn primitive(rng: &mut SplitMix64) -> LatticeVector {
    loop {
        let v = LatticeVector::new(small(rng, 3), small(rng, 3));
        if v.is_primitive() {
            return v;
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Random base curve: `k` even ends, odd ends closing the balance, even
/// subtrees joined first half of the time so that `Γ_even` grows past the ends.
fn random_base(rng: &mut SplitMix64) -> WeightedPlaneParam {
    'retry: loop {
        let k = 1 + below(rng, 3) as usize;
        let j = 2 + below(rng, 3) as usize;
        let mut dirs: Vec<LatticeVector> = (0..k).map(|_| 2 * primitive(rng)).collect();
        dirs.extend((0..j - 1).map(|_| primitive(rng)));
        let last = -dirs.iter().copied().sum::<LatticeVector>();
        if gcd(last.x, last.y) != 1 {
            continue;
        }
        dirs.push(last);
        let n = dirs.len();
        // subtree: (root node, slope out of the root towards its parent, even-only)
        let mut free: Vec<(usize, LatticeVector, bool)> =
            (0..n).map(|i| (i, dirs[i], i < k)).collect();
        let mut joins: Vec<(usize, usize)> = Vec::new();
        let mut next = n;
        while free.len() > 3 {
            let evens: Vec<usize> = (0..free.len()).filter(|&i| free[i].2).collect();
            let (a, b) = if evens.len() >= 2 && below(rng, 2) == 0 {
                let a = evens[below(rng, evens.len() as u64) as usize];
                let rest: Vec<usize> = evens.iter().copied().filter(|&x| x != a).collect();
                (a, rest[below(rng, rest.len() as u64) as usize])
            } else {
                let a = below(rng, free.len() as u64) as usize;
                let b = (a + 1 + below(rng, free.len() as u64 - 1) as usize) % free.len();
                (a, b)
            };
            let (x, y) = (free[a], free[b]);
            let slope = x.1 + y.1;
            if slope.is_zero() {
                continue 'retry;
            }
            joins.push((x.0, next));
            joins.push((y.0, next));
            for idx in [a.max(b), a.min(b)] {
                free.swap_remove(idx);
            }
            free.push((next, slope, x.2 && y.2));
            next += 1;
        }
        let root = next;
        joins.extend(free.iter().map(|f| (f.0, root)));
        // orient from the root and place vertices
        let mut child_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(c, p) in &joins {
            child_of.entry(p).or_default().push(c);
        }
        let slope_of = |node: usize, memo: &mut BTreeMap<usize, LatticeVector>| -> LatticeVector {
            fn go(
                n: usize,
                dirs: &[LatticeVector],
                ch: &BTreeMap<usize, Vec<usize>>,
                memo: &mut BTreeMap<usize, LatticeVector>,
            ) -> LatticeVector {
                if n < dirs.len() {
                    return dirs[n];
                }
                if let Some(&s) = memo.get(&n) {
                    return s;
                }
                let s = ch[&n].iter().map(|&c| go(c, dirs, ch, memo)).sum();
                memo.insert(n, s);
                s
            }
            go(node, &dirs, &child_of, memo)
        };
        let mut memo = BTreeMap::new();
        let vid = |node: usize| root - node;
        let mut vertices = vec![RatPoint::origin(); root - n + 1];
        vertices[0] = RatPoint::new(
            Rational::new(small(rng, 20).into(), (1 + below(rng, 3) as i64).into()),
            Rational::new(small(rng, 20).into(), (1 + below(rng, 3) as i64).into()),
        );
        let mut edges = Vec::new();
        let mut stack = vec![root];
        while let Some(p) = stack.pop() {
            for &c in &child_of[&p] {
                let slope = slope_of(c, &mut memo);
                if c < n {
                    edges.push(ParamEdge {
                        tail: vid(p),
                        head: Endpoint::End {
                            label: c,
                            copy: None,
                        },
                        slope,
                        length: None,
                    });
                } else {
                    let len = Rational::new(
                        (1 + below(rng, 9) as i64).into(),
                        (1 + below(rng, 3) as i64).into(),
                    );
                    vertices[vid(c)] = vertices[vid(p)].offset(slope, &len);
                    edges.push(ParamEdge {
                        tail: vid(p),
                        head: Endpoint::Vertex(vid(c)),
                        slope,
                        length: Some(len),
                    });
                    stack.push(c);
                }
            }
        }
        let distinct: BTreeSet<String> = vertices.iter().map(|v| v.to_string()).collect();
        if distinct.len() != vertices.len() {
            continue;
        }
        return WeightedPlaneParam::new(ParamCurve { vertices, edges })
            .expect("generator builds valid curves");
    }
}

/// Edge multiset keyed by images; determines the curve up to isomorphism when
/// vertex images are distinct.
fn geometry(c: &ParamCurve) -> Vec<String> {
    let mut out: Vec<String> = c
        .edges
        .iter()
        .map(|e| match e.head {
            Endpoint::Vertex(h) => {
                let (a, b) = (c.vertices[e.tail].to_string(), c.vertices[h].to_string());
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                let s = if (e.slope.x, e.slope.y) > (0, 0) {
                    e.slope
                } else {
                    -e.slope
                };
                format!("{a}-{b}:{s}:{}", e.length.as_ref().unwrap())
            }
            Endpoint::End { label, copy } => {
                format!("{}>{label}{copy:?}:{}", c.vertices[e.tail], e.slope)
            }
        })
        .collect();
    out.sort();
    out
}

/// Edge sets meeting every stem-to-even-end path in exactly one edge, by
/// brute force over subsets.
fn brute_cuts(curve: &ParamCurve, stem: usize, comp: &[usize]) -> BTreeSet<Vec<usize>> {
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<(usize, Option<usize>, Vec<usize>)> = vec![(stem, None, Vec::new())];
    while let Some((v, from, path)) = stack.pop() {
        for &e in comp {
            if Some(e) == from {
                continue;
            }
            let edge = &curve.edges[e];
            let other = if edge.tail == v {
                edge.head
            } else if edge.head == Endpoint::Vertex(v) {
                Endpoint::Vertex(edge.tail)
            } else {
                continue;
            };
            let mut p = path.clone();
            p.push(e);
            match other {
                Endpoint::Vertex(u) => stack.push((u, Some(e), p)),
                Endpoint::End { .. } => paths.push(p),
            }
        }
    }
    (1u32..1 << comp.len())
        .map(|mask| {
            (0..comp.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| comp[i])
                .collect::<Vec<_>>()
        })
        .filter(|set| {
            paths
                .iter()
                .all(|p| p.iter().filter(|e| set.contains(e)).count() == 1)
        })
        .map(|mut s| {
            s.sort_unstable();
            s
        })
        .collect()
}

/// The interior-point set of `cut`, plus each variant moving the points on
/// all child edges of one vertex onto that vertex.
fn point_sets(base: &WeightedPlaneParam, cut: &[usize]) -> Vec<Vec<SplitPoint>> {
    let curve = base.curve();
    let mut out = vec![interior_points(curve, cut)];
    for comp in even_components(base).unwrap() {
        for v in comp.vertices() {
            let kids = comp.child_edges(v);
            if !kids.is_empty() && kids.iter().all(|k| cut.contains(k)) {
                let rest: Vec<usize> = cut.iter().copied().filter(|e| !kids.contains(e)).collect();
                let mut pts = interior_points(curve, &rest);
                pts.push(SplitPoint::AtVertex(v));
                out.push(pts);
            }
        }
    }
    out
}

fn check_round_trip(base: &WeightedPlaneParam) -> usize {
    let curve = base.curve();
    let comps = even_components(base).unwrap();
    let even: BTreeSet<usize> = gamma_even(base).into_iter().collect();
    let covered: BTreeSet<usize> = comps.iter().flat_map(|c| c.edges.iter().copied()).collect();
    assert_eq!(even, covered);
    for &e in &even {
        assert!(
            curve.edges[e].slope.is_even(),
            "Γ_even edge {e} has odd slope"
        );
    }
    let per_comp: Vec<Vec<Vec<usize>>> = comps
        .iter()
        .map(|c| {
            let ours = admissible_sets(c, curve);
            let set: BTreeSet<Vec<usize>> = ours.iter().cloned().collect();
            assert_eq!(set.len(), ours.len(), "repeated cut class");
            assert_eq!(set, brute_cuts(curve, c.stem, &c.edges));
            ours
        })
        .collect();
    // every combination of one cut class per component
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for classes in &per_comp {
        combos = combos
            .iter()
            .flat_map(|pre| {
                classes
                    .iter()
                    .map(move |c| pre.iter().chain(c).copied().collect())
            })
            .collect();
    }
    let n_even = base.even_ends().len();
    let mut splits = 0;
    for cut in &combos {
        for points in point_sets(base, cut) {
            let split = build_split(base, &points).unwrap();
            let sc = split.curve();
            assert_eq!(sc.ends().count(), base.n_ends() + n_even);
            let interior = points
                .iter()
                .filter(|p| matches!(p, SplitPoint::EdgeInterior { .. }))
                .count();
            assert_eq!(split.flat_vertices().len(), interior);
            let expected_ov: usize = points
                .iter()
                .map(|p| match p {
                    SplitPoint::AtVertex(v) => comps.iter().map(|c| c.child_edges(*v).len()).sum(),
                    SplitPoint::EdgeInterior { .. } => 0,
                })
                .sum();
            assert_eq!(sc.overvalence(), expected_ov);
            // σ swaps the copies: every non-fixed edge has a twin with the same image
            let se = split.sigma_edges();
            for (i, e) in sc.edges.iter().enumerate() {
                assert_eq!(se[se[i]], i);
                if se[i] != i {
                    assert_eq!(sc.edges[se[i]].slope, e.slope);
                }
            }
            let q = quotient_curve(&split).unwrap();
            assert_eq!(geometry(q.curve()), geometry(curve));
            assert!(q.is_isomorphic(base));
            splits += 1;
        }
    }
    splits
}

#[test]
fn synthetic_round_trips() {
    let mut rng = SplitMix64::seed_from_u64(2024);
    let mut total = 0;
    let mut deep = 0;
    for _ in 0..150 {
        let base = random_base(&mut rng);
        if gamma_even(&base).len() > base.even_ends().len() {
            deep += 1;
        }
        total += check_round_trip(&base);
    }
    assert!(total >= 300, "{total} splits");
    assert!(deep >= 10, "only {deep} bases with extended even graphs");
}

#[test]
fn inadmissible_sets_are_rejected() {
    let mut rng = SplitMix64::seed_from_u64(7);
    for _ in 0..40 {
        let base = random_base(&mut rng);
        assert!(matches!(
            build_split(&base, &[]),
            Err(RealError::InadmissibleSet(_))
        ));
        let comps = even_components(&base).unwrap();
        let stem = comps[0].stem;
        let cut = &admissible_sets(&comps[0], base.curve())[0];
        let mut doubled = interior_points(base.curve(), cut);
        doubled.push(SplitPoint::AtVertex(stem));
        assert!(matches!(
            build_split(&base, &doubled),
            Err(RealError::InadmissibleSet(_))
        ));
        let odd = (0..base.curve().edges.len())
            .find(|e| !gamma_even(&base).contains(e))
            .unwrap();
        let off = interior_points(base.curve(), &[odd]);
        assert!(matches!(
            build_split(&base, &off),
            Err(RealError::InadmissibleSet(_))
        ));
    }
}

#[test]
fn two_even_directions_are_out_of_scope() {
    let mut rng = SplitMix64::seed_from_u64(99);
    let mut seen = 0;
    while seen < 5 {
        let base = random_base(&mut rng);
        let dirs: BTreeSet<LatticeVector> = base
            .even_ends()
            .iter()
            .map(|&e| base.curve().edges[e].slope)
            .collect();
        if dirs.len() >= 2 {
            assert_eq!(
                maximal_split(&base).unwrap_err(),
                RealError::MultipleDivisors(dirs.len())
            );
            seen += 1;
        }
    }
}

/// `q^{a/2} - q^{-a/2}`.
fn qdiff(a: i64) -> HalfLaurent {
    HalfLaurent::from_terms([(a, 1), (-a, -1)])
}

#[test]
fn maximal_splits_of_solutions() {
    let square = Degree::from_pairs(&[(-1, 0), (-1, 0), (0, -1), (1, 1), (1, 0)]).unwrap();
    for (d, s) in [
        (Degree::projective_plane(2), 1),
        (square, 1),
        (Degree::projective_plane(1), 0),
    ] {
        let report = invariant_report(&d, None, s, 4, 5).unwrap();
        let m = report.m;
        for trial in &report.trials {
            let mut quarter_sum = HalfLaurent::zero();
            for sol in &trial.solutions {
                let base = WeightedPlaneParam::from_solution(sol).unwrap();
                check_round_trip(&base);
                let split = maximal_split(&base).unwrap();
                assert!(split.flat_vertices().is_empty());
                assert_eq!(split.quad_vertices().len(), s);
                let mv = sol.vertex_multiplicities();
                for w in split.quad_vertices() {
                    assert_eq!(w.multiplicity % 2, 0);
                    assert_eq!(w.multiplicity, mv[w.base_vertex]);
                }
                let mp = m_prime(&split).unwrap();
                // cross-multiplied definition
                let full: HalfLaurent = mv.iter().map(|&x| qdiff(x as i64)).product();
                assert_eq!(&mp * &qdiff(2).pow(s as u32), full.scale(&BigInt::from(4)));
                assert!(bridge_identity_holds(
                    &mp,
                    &sol.refined_multiplicity(),
                    m,
                    s
                ));
                let prod: u64 = split
                    .quad_vertices()
                    .iter()
                    .map(|w| w.multiplicity)
                    .product();
                assert_eq!(
                    oriented_solution_count(&split),
                    BigInt::from(prod) << (m - 2 * s)
                );
                for (data, w) in quad_vertex_data(&split)
                    .unwrap()
                    .iter()
                    .zip(split.quad_vertices())
                {
                    assert_eq!(data.indices.len() as u64 * 2, w.multiplicity);
                    assert_eq!(data.refined_sum.eval_q1(), BigInt::from(w.multiplicity / 2));
                }
                quarter_sum = &quarter_sum + &mp.div_integer(&BigInt::from(4)).unwrap();
            }
            assert_eq!(quarter_sum, report.r_inv, "{d}");
        }
    }
}

#[test]
fn quad_identities() {
    for m1 in 1..=50i64 {
        for delta in 1..=5i64 {
            let sum = quad_refined_sum(m1, delta).unwrap();
            let lhs = &sum * &qdiff(2 * delta);
            assert_eq!(lhs, qdiff(2 * delta * m1));
            let by_hand =
                HalfLaurent::from_terms((0..m1).map(|k| (2 * delta * (2 * k + 1 - m1), 1)));
            assert_eq!(sum, by_hand);
            assert_eq!(sum.eval_q1(), BigInt::from(m1));
            let idx = quad_indices(m1, delta).unwrap();
            assert_eq!(idx.len() as i64, m1);
            let mut neg: Vec<i64> = idx.iter().map(|k| -k).collect();
            neg.sort();
            let mut sorted = idx.clone();
            sorted.sort();
            assert_eq!(neg, sorted);
        }
    }
}

#[test]
fn trivalent_base_multiplicities_match_wedges() {
    let mut rng = SplitMix64::seed_from_u64(3);
    for _ in 0..30 {
        let base = random_base(&mut rng);
        let c = base.curve();
        for (v, inc) in c.incident().iter().enumerate() {
            let u = c.edges[inc[1]].slope_from(v);
            let w = c.edges[inc[2]].slope_from(v);
            assert_eq!(base.vertex_multiplicities()[v], wedge(u, w).unsigned_abs());
        }
    }
}
