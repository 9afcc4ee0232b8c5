//! Refined counts `N` summed over all types, invariance audits over random
//! moment vectors, and the conversion to real counts `R` and the Broccoli
//! normalization.

use num_bigint::BigInt;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{Degree, LatticeError, LatticeVector, MomentVector, RatPoint};
use crate::laurent::{HalfLaurent, LaurentError};
use crate::solver::{solve, SolveError, SolveOutcome, TropicalSolution};
use crate::tree::{enumerate_types, TreeError};
use crate::Rational;

/// Attempts per seed before [`InvariantError::ExhaustedRetries`].
pub const MAX_RETRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Solver(SolveError),
    #[error("moment vector is not generic: type {type_index} has a zero-length edge")]
    NonGenericConfiguration { type_index: usize },
    #[error("no generic moment vector found for seed {seed} after {attempts} attempts")]
    ExhaustedRetries { seed: u64, attempts: usize },
    #[error("invariance violated: seed {first_seed} gives {first_n}, seed {second_seed} gives {second_n}")]
    InvarianceViolation {
        first_seed: u64,
        first_moments: MomentVector,
        first_n: HalfLaurent,
        second_seed: u64,
        second_moments: MomentVector,
        second_n: HalfLaurent,
    },
    #[error("division not exact: {0}")]
    NotDivisible(#[from] LaurentError),
    #[error("the two forms of the conversion disagree: {first} vs {second}")]
    TheoremFormMismatch {
        first: HalfLaurent,
        second: HalfLaurent,
    },
    #[error("at least one trial is required")]
    NoTrials,
}

/// `N(μ) = Σ m^q_Γ` over the types realizing `μ`, with the solutions sorted
/// by type index. Types are solved in parallel.
pub fn refined_count(
    delta_s: &Degree,
    mu: &MomentVector,
) -> Result<(HalfLaurent, Vec<TropicalSolution>), InvariantError> {
    let mut outcomes: Vec<(usize, Result<SolveOutcome, SolveError>)> = enumerate_types(delta_s)?
        .enumerate()
        .par_bridge()
        .map(|(i, t)| (i, solve(&t, mu)))
        .collect();
    outcomes.sort_unstable_by_key(|(i, _)| *i);
    let mut solutions = Vec::new();
    for (i, outcome) in outcomes {
        match outcome {
            Ok(SolveOutcome::Solved(s)) => solutions.push(s),
            Ok(_) => {}
            Err(SolveError::NonGeneric { .. }) => {
                return Err(InvariantError::NonGenericConfiguration { type_index: i })
            }
            Err(e) => return Err(InvariantError::Solver(e)),
        }
    }
    let n = solutions
        .iter()
        .map(TropicalSolution::refined_multiplicity)
        .sum();
    Ok((n, solutions))
}

/// Draws one candidate moment from the stream:
/// `(a mod 2001 - 1000) / (1 + b mod 7)` for two consecutive outputs `a, b`.
fn draw_moment(rng: &mut SplitMix64) -> Rational {
    let a = rng.next_u64() % 2001;
    let b = rng.next_u64() % 7;
    Rational::new(BigInt::from(a as i64 - 1000), BigInt::from(1 + b))
}

fn sorted_vertices(s: &TropicalSolution) -> Vec<RatPoint> {
    let mut v = s.vertex_positions();
    v.sort();
    v
}

/// A generic sample together with what it took to find it.
#[derive(Debug, Clone)]
pub struct GenericSample {
    pub moments: MomentVector,
    pub attempts: usize,
    pub n_trop: HalfLaurent,
    pub solutions: Vec<TropicalSolution>,
}

/// Draws moment vectors for `ends 2..n` from a SplitMix64 stream seeded with
/// `seed` until none of the solves hits a wall and no two solutions coincide.
pub fn generic_sample(delta_s: &Degree, seed: u64) -> Result<GenericSample, InvariantError> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let count = delta_s.len().saturating_sub(1);
    for attempt in 1..=MAX_RETRIES {
        let moments = MomentVector::new((0..count).map(|_| draw_moment(&mut rng)).collect());
        match refined_count(delta_s, &moments) {
            Ok((n_trop, solutions)) => {
                let images: Vec<Vec<RatPoint>> = solutions.iter().map(sorted_vertices).collect();
                let clash = (0..images.len())
                    .flat_map(|i| (i + 1..images.len()).map(move |j| (i, j)))
                    .any(|(i, j)| images[i] == images[j]);
                if !clash {
                    return Ok(GenericSample {
                        moments,
                        attempts: attempt,
                        n_trop,
                        solutions,
                    });
                }
            }
            Err(InvariantError::NonGenericConfiguration { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(InvariantError::ExhaustedRetries {
        seed,
        attempts: MAX_RETRIES,
    })
}

pub fn random_generic_moments(delta_s: &Degree, seed: u64) -> Result<MomentVector, InvariantError> {
    generic_sample(delta_s, seed).map(|s| s.moments)
}

#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub seed: u64,
    pub moments: MomentVector,
    pub attempts: usize,
    pub n_trop: HalfLaurent,
    /// `Σ det_abs`, the unrefined count.
    pub complex_count: BigInt,
    pub solutions: Vec<TropicalSolution>,
}

impl TrialRecord {
    pub fn solution_count(&self) -> usize {
        self.solutions.len()
    }
}

#[derive(Debug, Clone)]
pub struct Audit {
    pub delta_s: Degree,
    pub n_trop: HalfLaurent,
    pub trials: Vec<TrialRecord>,
}

/// Runs `trials` samples with seeds `seed, seed + 1, ...` and requires every
/// one of them to give the same `N`.
pub fn invariance_audit(
    delta_s: &Degree,
    trials: usize,
    seed: u64,
) -> Result<Audit, InvariantError> {
    if trials == 0 {
        return Err(InvariantError::NoTrials);
    }
    let mut records: Vec<TrialRecord> = Vec::with_capacity(trials);
    for i in 0..trials {
        let trial_seed = seed.wrapping_add(i as u64);
        let sample = generic_sample(delta_s, trial_seed)?;
        let complex_count = sample.solutions.iter().map(|s| s.det_abs().clone()).sum();
        let record = TrialRecord {
            seed: trial_seed,
            moments: sample.moments,
            attempts: sample.attempts,
            n_trop: sample.n_trop,
            complex_count,
            solutions: sample.solutions,
        };
        if let Some(first) = records.first() {
            if first.n_trop != record.n_trop {
                return Err(InvariantError::InvarianceViolation {
                    first_seed: first.seed,
                    first_moments: first.moments.clone(),
                    first_n: first.n_trop.clone(),
                    second_seed: record.seed,
                    second_moments: record.moments,
                    second_n: record.n_trop,
                });
            }
        }
        records.push(record);
    }
    Ok(Audit {
        delta_s: delta_s.clone(),
        n_trop: records[0].n_trop.clone(),
        trials: records,
    })
}

/// `num · f^e / den`, moving `f^{-e}` into the denominator when `e < 0`.
fn scaled_quotient(
    num: &HalfLaurent,
    factor: &HalfLaurent,
    exponent: i64,
    den: &HalfLaurent,
) -> Result<HalfLaurent, LaurentError> {
    let k = exponent.unsigned_abs() as u32;
    if exponent >= 0 {
        (num * &factor.pow(k)).exact_div(den)
    } else {
        num.exact_div(&(den * &factor.pow(k)))
    }
}

/// `R_{Δ,s} = (q^{1/2} - q^{-1/2})^{m-2-2s} / (q^{1/2} + q^{-1/2})^s · N`,
/// cross-checked against `(q^{1/2} - q^{-1/2})^{m-2-s} / (q - q^{-1})^s · N`.
pub fn r_from_n(n_trop: &HalfLaurent, m: usize, s: usize) -> Result<HalfLaurent, InvariantError> {
    let (m, s) = (m as i64, s as i64);
    let diff = HalfLaurent::q_difference(1);
    let first = scaled_quotient(
        n_trop,
        &diff,
        m - 2 - 2 * s,
        &HalfLaurent::q_sum(1).pow(s as u32),
    )?;
    let second = scaled_quotient(
        n_trop,
        &diff,
        m - 2 - s,
        &HalfLaurent::q_difference(2).pow(s as u32),
    )?;
    if first != second {
        return Err(InvariantError::TheoremFormMismatch { first, second });
    }
    Ok(first)
}

/// `BG = R · (q + q^{-1})^s / (q^{1/2} - q^{-1/2})^{m-2-2s}`.
pub fn broccoli_from_r(r: &HalfLaurent, m: usize, s: usize) -> Result<HalfLaurent, InvariantError> {
    let e = m as i64 - 2 - 2 * s as i64;
    let num = r * &HalfLaurent::q_sum(2).pow(s as u32);
    let diff = HalfLaurent::q_difference(1);
    let k = e.unsigned_abs() as u32;
    let bg = if e >= 0 {
        num.exact_div(&diff.pow(k))?
    } else {
        &num * &diff.pow(k)
    };
    Ok(bg)
}

/// `BG · (q^{1/2} + q^{-1/2})^s == N · (q + q^{-1})^s`.
pub fn broccoli_identity_holds(bg: &HalfLaurent, n_trop: &HalfLaurent, s: usize) -> bool {
    let s = s as u32;
    bg * &HalfLaurent::q_sum(1).pow(s) == n_trop * &HalfLaurent::q_sum(2).pow(s)
}

#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub delta: Degree,
    pub delta_s: Degree,
    pub n1: Option<LatticeVector>,
    pub s: usize,
    /// Number of ends of `Δ`.
    pub m: usize,
    pub n_trop: HalfLaurent,
    pub r_inv: HalfLaurent,
    pub broccoli: HalfLaurent,
    pub trials: Vec<TrialRecord>,
}

/// Default side normal: the lexicographically smallest direction occurring at
/// least `2s` times.
pub fn default_n1(delta: &Degree, s: usize) -> Option<LatticeVector> {
    let mut dirs = delta.direction_multiset();
    dirs.dedup();
    dirs.into_iter()
        .find(|&d| delta.multiplicity_of(d) >= 2 * s)
}

/// `Δ(s)` with the side normal actually used; `n1` defaults to [`default_n1`].
pub fn surgery(
    delta: &Degree,
    n1: Option<LatticeVector>,
    s: usize,
) -> Result<(Degree, Option<LatticeVector>), InvariantError> {
    if s == 0 {
        return Ok((delta.clone(), n1));
    }
    let n1 = n1
        .or_else(|| default_n1(delta, s))
        .unwrap_or_else(|| delta.direction_multiset()[0]);
    Ok((delta.build_delta_s(n1, s)?, Some(n1)))
}

/// Full pipeline for `Δ`: surgery to `Δ(s)`, audit, conversions.
pub fn invariant_report(
    delta: &Degree,
    n1: Option<LatticeVector>,
    s: usize,
    trials: usize,
    seed: u64,
) -> Result<InvariantReport, InvariantError> {
    let (delta_s, n1) = surgery(delta, n1, s)?;
    let audit = invariance_audit(&delta_s, trials, seed)?;
    let m = delta.len();
    let r_inv = r_from_n(&audit.n_trop, m, s)?;
    let broccoli = broccoli_from_r(&r_inv, m, s)?;
    Ok(InvariantReport {
        delta: delta.clone(),
        delta_s,
        n1,
        s,
        m,
        n_trop: audit.n_trop,
        r_inv,
        broccoli,
        trials: audit.trials,
    })
}

impl InvariantReport {
    /// `N` is symmetric under `q ↔ q^{-1}`; `R` picks up the sign `(-1)^m`
    /// from the odd power of `q^{1/2} - q^{-1/2}` when `m` is odd.
    pub fn is_symmetric(&self) -> bool {
        let r_ok = if self.m.is_multiple_of(2) {
            self.r_inv.is_symmetric()
        } else {
            self.r_inv.is_antisymmetric()
        };
        self.n_trop.is_symmetric() && r_ok
    }
}
