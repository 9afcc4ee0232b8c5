use std::collections::{BTreeSet, HashSet};

use tropical_refine::lattice::LatticeVector;
use tropical_refine::tree::{derive_slopes, ShapeEnumerator};

fn double_factorial(n: usize) -> u64 {
    // (2n - 5)!!
    (1..=2 * n as u64 - 5).step_by(2).product()
}

/// Nontrivial splits as bitmasks of the side not containing leaf 0.
fn all_splits(n: usize) -> Vec<u32> {
    let full = (1u32 << n) - 1;
    (1..full)
        .filter(|m| m & 1 == 0)
        .filter(|m| {
            let k = m.count_ones() as usize;
            k >= 2 && n - k >= 2
        })
        .collect()
}

fn compatible(a: u32, b: u32, n: usize) -> bool {
    let full = (1u32 << n) - 1;
    a & b == 0 || a & b == a || a & b == b || (a | b) == full
}

/// Every set of n - 3 pairwise compatible splits is a trivalent tree.
fn brute_force_trees(n: usize) -> BTreeSet<BTreeSet<u32>> {
    let splits = all_splits(n);
    let mut out = BTreeSet::new();
    let mut chosen: Vec<u32> = Vec::new();
    fn rec(
        i: usize,
        splits: &[u32],
        n: usize,
        chosen: &mut Vec<u32>,
        out: &mut BTreeSet<BTreeSet<u32>>,
    ) {
        if chosen.len() == n - 3 {
            out.insert(chosen.iter().copied().collect());
            return;
        }
        for j in i..splits.len() {
            if chosen.iter().all(|&c| compatible(c, splits[j], n)) {
                chosen.push(splits[j]);
                rec(j + 1, splits, n, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(0, &splits, n, &mut chosen, &mut out);
    out
}

fn dirs(n: usize) -> Vec<LatticeVector> {
    let mut v: Vec<LatticeVector> = (1..n as i64)
        .map(|i| LatticeVector::new(i, 1 - i * i))
        .collect();
    let last = -v.iter().copied().sum::<LatticeVector>();
    v.push(last);
    v
}

#[test]
fn counts_match_double_factorial() {
    for n in 3..=8 {
        assert_eq!(
            ShapeEnumerator::new(n).unwrap().count() as u64,
            double_factorial(n),
            "n = {n}"
        );
        assert_eq!(ShapeEnumerator::count(n), double_factorial(n));
    }
}

#[test]
fn matches_split_system_brute_force() {
    for n in 3..=6 {
        let expected = brute_force_trees(n);
        assert_eq!(expected.len() as u64, double_factorial(n));
        let d = dirs(n);
        let mut got = BTreeSet::new();
        let mut canon = HashSet::new();
        for shape in ShapeEnumerator::new(n).unwrap() {
            let t = derive_slopes(&shape, &d).unwrap();
            let splits: BTreeSet<u32> = t
                .bounded_edges()
                .iter()
                .map(|&e| t.leaves_beyond(e).iter().map(|&l| 1u32 << l).sum())
                .collect();
            assert!(got.insert(splits), "repeated tree for n = {n}");
            assert!(canon.insert(t.serialize_tree()));
        }
        assert_eq!(got, expected, "n = {n}");
    }
}
