use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use tropical_refine::lattice::{wedge, LatticeVector, MomentVector};
use tropical_refine::solver::{evaluation_matrix, solve, SolveError, SolveOutcome};
use tropical_refine::tree::{derive_slopes, CombinatorialType, TreeShape};
use tropical_refine::Rational;

/// Fraction-free elimination over i128.
fn bareiss_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn small(rng: &mut SplitMix64, r: i64) -> i64 {
    (rng.next_u64() % (2 * r as u64 + 1)) as i64 - r
}

/// Random balanced directions, no zero vector.
fn random_dirs(rng: &mut SplitMix64, n: usize) -> Vec<LatticeVector> {
    loop {
        let mut v: Vec<LatticeVector> = (0..n - 1)
            .map(|_| LatticeVector::new(small(rng, 3), small(rng, 3)))
            .collect();
        let last = -v.iter().copied().sum::<LatticeVector>();
        v.push(last);
        if v.iter().all(|d| !d.is_zero()) {
            return v;
        }
    }
}

/// Independent random trivalent tree: repeatedly join two free subtrees.
fn random_type(rng: &mut SplitMix64, dirs: &[LatticeVector]) -> CombinatorialType {
    let n = dirs.len();
    let mut free: Vec<usize> = (0..n).collect();
    let mut edges = Vec::new();
    let mut next = n;
    while free.len() > 3 {
        let i = (rng.next_u64() % free.len() as u64) as usize;
        let a = free.swap_remove(i);
        let j = (rng.next_u64() % free.len() as u64) as usize;
        let b = free.swap_remove(j);
        edges.push((a, next));
        edges.push((b, next));
        free.push(next);
        next += 1;
    }
    for &f in &free {
        edges.push((f, next));
    }
    let shape = TreeShape::from_edges(n, edges).unwrap();
    derive_slopes(&shape, dirs).unwrap()
}

fn random_moments(rng: &mut SplitMix64, k: usize) -> MomentVector {
    MomentVector::new(
        (0..k)
            .map(|_| Rational::new(small(rng, 500).into(), (1 + rng.next_u64() % 9).into()))
            .collect(),
    )
}

#[test]
fn determinant_factorizes_and_moments_reproduce() {
    let mut rng = SplitMix64::seed_from_u64(2024);
    let mut accepted = 0;
    let mut tried = 0;
    while accepted < 1000 {
        tried += 1;
        assert!(tried < 200_000);
        let n = 3 + (rng.next_u64() % 5) as usize;
        let dirs = random_dirs(&mut rng, n);
        let t = random_type(&mut rng, &dirs);
        let m = evaluation_matrix(&t);
        let det = bareiss_det(&m).unsigned_abs();
        let product: u128 = t
            .vertex_multiplicities()
            .iter()
            .map(|v| {
                let (a, b) = (v.slopes[0], v.slopes[1]);
                wedge(a, b).unsigned_abs() as u128
            })
            .product();
        assert_eq!(det, product, "matrix {m:?}");
        let mu = random_moments(&mut rng, n - 1);
        match solve(&t, &mu) {
            Ok(SolveOutcome::Solved(sol)) => {
                accepted += 1;
                assert_eq!(sol.det_abs(), &BigInt::from(det));
                assert!(sol.lengths().iter().all(Signed::is_positive));
                let full = sol.end_moments();
                assert_eq!(&full[1..], mu.values());
                assert!(full.iter().sum::<Rational>().is_zero());
                assert_eq!(full, mu.full());
                assert_eq!(sol.refined_multiplicity().eval_q1(), BigInt::from(det));
            }
            Ok(SolveOutcome::Degenerate) => assert_eq!(det, 0),
            Ok(SolveOutcome::NoSolution) => assert_ne!(det, 0),
            Err(SolveError::NonGeneric { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scaling_is_homogeneous(seed in any::<u64>(), num in 1i64..50, den in 1i64..50) {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let n = 3 + (rng.next_u64() % 4) as usize;
        let dirs = random_dirs(&mut rng, n);
        let t = random_type(&mut rng, &dirs);
        let mu = random_moments(&mut rng, n - 1);
        let lambda = Rational::new(num.into(), den.into());
        let a = solve(&t, &mu);
        let b = solve(&t, &mu.scaled(&lambda));
        match (a, b) {
            (Ok(SolveOutcome::Solved(x)), Ok(SolveOutcome::Solved(y))) => {
                prop_assert_eq!(&x.root_pos().x * &lambda, y.root_pos().x.clone());
                prop_assert_eq!(&x.root_pos().y * &lambda, y.root_pos().y.clone());
                for (l, m) in x.lengths().iter().zip(y.lengths()) {
                    prop_assert_eq!(l * &lambda, m.clone());
                }
            }
            (Ok(SolveOutcome::NoSolution), Ok(SolveOutcome::NoSolution))
            | (Ok(SolveOutcome::Degenerate), Ok(SolveOutcome::Degenerate))
            | (Err(SolveError::NonGeneric { .. }), Err(SolveError::NonGeneric { .. })) => {}
            (a, b) => prop_assert!(false, "verdicts differ: {:?} vs {:?}", a, b),
        }
    }
}
