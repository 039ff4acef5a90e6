//! Exhaustive ground truth at small `N`: counts every r-coloring of `[1, N]`
//! containing a monochromatic k-term progression and checks the counting
//! arguments against those exact counts.
//!
//! Colorings are base-r counters. Progressions are precomputed once per
//! `(N, k, family)` as bit masks, so each coloring is a scan over that list.
//! Color symmetry is not used here: counts are over all `r^N` colorings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::progression::{
    all_progressions, forced_elements, primary_progression, progressions_from, Coloring, Family,
    Progression,
};
use crate::spectral::{
    quasi_counting_bound, rational_to_f64, semi_counting_bound_colors, FREQUENCY_VECTOR_LIMIT,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBudget {
    pub max_points: usize,
    pub max_colorings: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_points: 24,
            max_colorings: 1 << 24,
        }
    }
}

impl OracleBudget {
    /// `r^N`, or a budget error naming it.
    pub fn admit(&self, r: usize, n_points: usize) -> Result<u64> {
        if r < 2 || n_points == 0 {
            return invalid("need r >= 2 and N >= 1");
        }
        let total = (r as u64).checked_pow(n_points as u32);
        match total {
            Some(t) if n_points <= self.max_points && t <= self.max_colorings => Ok(t),
            _ => Err(Error::BudgetExceeded(format!(
                "{r}^{n_points} colorings exceeds oracle budget (max {} points, {} colorings)",
                self.max_points, self.max_colorings
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub n_points: usize,
    pub k: usize,
    pub family: Family,
    pub r: usize,
    /// Colorings with at least one monochromatic k-term progression.
    pub mono_count: u64,
    /// `r^N`.
    pub total: u64,
    #[serde(serialize_with = "crate::spectral::ser_rational")]
    pub bound_value: BigRational,
    pub bound_approx: f64,
    pub bound_satisfied: bool,
}

impl CountReport {
    pub fn proportion(&self) -> f64 {
        self.mono_count as f64 / self.total as f64
    }

    pub fn all_monochromatic(&self) -> bool {
        self.mono_count == self.total
    }
}

/// Derivation-faithful counting bound for the family.
pub fn counting_bound(r: usize, n_points: usize, k: usize, family: Family) -> Result<BigRational> {
    match family {
        Family::Semi(m) => {
            Ok(semi_counting_bound_colors(r, n_points, k, m, FREQUENCY_VECTOR_LIMIT)?.closed_form)
        }
        Family::Quasi(n) => quasi_counting_bound(r, n_points, k, n),
    }
}

/// Distinct progression supports as bit masks (bit `i` is point `i + 1`).
pub fn progression_masks(n_points: usize, k: usize, family: Family) -> Vec<u64> {
    assert!(n_points <= 64);
    let set: BTreeSet<u64> = all_progressions(n_points, k, family)
        .iter()
        .map(|p| p.terms().iter().fold(0u64, |m, &t| m | 1 << (t - 1)))
        .collect();
    set.into_iter().collect()
}

/// Decodes coloring `index` into one mask per color.
fn color_masks(index: u64, r: usize, n_points: usize, masks: &mut [u64]) {
    masks.iter_mut().for_each(|m| *m = 0);
    let mut x = index;
    for i in 0..n_points {
        masks[(x % r as u64) as usize] |= 1 << i;
        x /= r as u64;
    }
}

fn decode(index: u64, r: usize, n_points: usize) -> Coloring {
    let mut x = index;
    let colors = (0..n_points)
        .map(|_| {
            let c = (x % r as u64) as u8;
            x /= r as u64;
            c
        })
        .collect();
    Coloring::new(r, colors).expect("decoded coloring is valid")
}

#[inline]
fn has_mono(color_masks: &[u64], progs: &[u64]) -> bool {
    progs
        .iter()
        .any(|&p| color_masks.iter().any(|&c| p & !c == 0))
}

const CHUNK: u64 = 1 << 12;

/// Counts colorings in `0..total` satisfying `pred`, in parallel over disjoint
/// counter ranges.
fn par_count(total: u64, r: usize, n_points: usize, pred: impl Fn(&[u64]) -> bool + Sync) -> u64 {
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut masks = vec![0u64; r];
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            (lo..hi)
                .filter(|&i| {
                    color_masks(i, r, n_points, &mut masks);
                    pred(&masks)
                })
                .count() as u64
        })
        .sum()
}

/// Exact number of r-colorings of `[1, N]` containing a monochromatic k-term
/// progression of `family`, with the counting bound alongside.
pub fn count_mono_colorings(
    r: usize,
    n_points: usize,
    k: usize,
    family: Family,
    budget: &OracleBudget,
) -> Result<CountReport> {
    if k < 2 {
        return invalid("progressions have at least two terms");
    }
    let total = budget.admit(r, n_points)?;
    let progs = progression_masks(n_points, k, family);
    let mono_count = if progs.is_empty() {
        0
    } else {
        par_count(total, r, n_points, |masks| has_mono(masks, &progs))
    };
    let bound_value = counting_bound(r, n_points, k, family)?;
    let bound_satisfied = BigRational::from_integer(BigInt::from(mono_count)) <= bound_value;
    Ok(CountReport {
        n_points,
        k,
        family,
        r,
        mono_count,
        total,
        bound_approx: rational_to_f64(&bound_value),
        bound_value,
        bound_satisfied,
    })
}

/// Same computation as [`count_mono_colorings`]; the verdict is `bound_satisfied`.
/// A `false` verdict is a finding, not an error.
pub fn verify_counting_inequality(
    r: usize,
    n_points: usize,
    k: usize,
    family: Family,
    budget: &OracleBudget,
) -> Result<CountReport> {
    count_mono_colorings(r, n_points, k, family, budget)
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateCount {
    pub terms: Vec<usize>,
    pub conjugate: Vec<usize>,
    pub weight: usize,
    /// Colorings in which this candidate is the primary progression.
    pub primary_count: u64,
    /// `r (r-1)^w r^{N-k-w}`.
    pub bound: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub r: usize,
    pub n_points: usize,
    pub k: usize,
    pub family: Family,
    pub a: usize,
    pub d: usize,
    pub total: u64,
    /// Colorings with some monochromatic `(a, d)` progression.
    pub with_mono: u64,
    pub candidates: Vec<CandidateCount>,
    /// Colorings where the primary progression disagreed with brute-force lex
    /// minimisation (or existed when none was monochromatic, or vice versa).
    pub primary_mismatches: u64,
    /// Colorings where a forced element of the primary shared its color.
    pub forcing_violations: u64,
    pub partition_holds: bool,
    pub forced_bound_holds: bool,
}

/// Sweeps all colorings and tallies, per `(a, d)` candidate, how often it is primary.
pub fn primary_census(
    r: usize,
    n_points: usize,
    k: usize,
    family: Family,
    a: usize,
    d: usize,
    budget: &OracleBudget,
) -> Result<PartitionReport> {
    if k < 2 || a == 0 || d == 0 {
        return invalid("need k >= 2, a >= 1, d >= 1");
    }
    let total = budget.admit(r, n_points)?;
    let candidates = progressions_from(a, d, n_points, k, family);
    let forced: Vec<BTreeSet<usize>> = candidates.iter().map(forced_elements).collect();

    #[derive(Default)]
    struct Tally {
        per: Vec<u64>,
        with_mono: u64,
        mismatches: u64,
        violations: u64,
    }
    let merge = |mut x: Tally, y: Tally| {
        if x.per.is_empty() {
            return y;
        }
        for (p, q) in x.per.iter_mut().zip(&y.per) {
            *p += q;
        }
        x.with_mono += y.with_mono;
        x.mismatches += y.mismatches;
        x.violations += y.violations;
        x
    };
    let tally = if candidates.is_empty() || a > n_points {
        Tally::default()
    } else {
        (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut t = Tally {
                    per: vec![0; candidates.len()],
                    ..Tally::default()
                };
                for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    let chi = decode(i, r, n_points);
                    let brute = candidates.iter().position(|p| p.is_monochromatic(&chi));
                    let primary =
                        primary_progression(&chi, a, d, k, family).expect("validated parameters");
                    let found = primary
                        .as_ref()
                        .and_then(|p| candidates.iter().position(|c| c == p));
                    if found != brute {
                        t.mismatches += 1;
                    }
                    if let Some(idx) = found {
                        t.with_mono += 1;
                        t.per[idx] += 1;
                        let color = chi.color(a);
                        if forced[idx].iter().any(|&e| chi.color(e) == color) {
                            t.violations += 1;
                        }
                    } else if brute.is_some() {
                        t.with_mono += 1;
                    }
                }
                t
            })
            .reduce(Tally::default, merge)
    };
    let per = if tally.per.is_empty() {
        vec![0; candidates.len()]
    } else {
        tally.per
    };

    let rr = r as u64;
    let candidates: Vec<CandidateCount> = candidates
        .iter()
        .zip(per)
        .map(|(p, count)| candidate_row(p, count, rr, n_points))
        .collect();
    let partition_sum: u64 = candidates.iter().map(|c| c.primary_count).sum();
    let partition_holds = tally.mismatches == 0 && partition_sum == tally.with_mono;
    let forced_bound_holds =
        tally.violations == 0 && candidates.iter().all(|c| c.primary_count <= c.bound);
    Ok(PartitionReport {
        r,
        n_points,
        k,
        family,
        a,
        d,
        total,
        with_mono: tally.with_mono,
        candidates,
        primary_mismatches: tally.mismatches,
        forcing_violations: tally.violations,
        partition_holds,
        forced_bound_holds,
    })
}

fn candidate_row(p: &Progression, count: u64, r: u64, n_points: usize) -> CandidateCount {
    let u = p.conjugate_vector();
    let w = u.weight();
    let free = (n_points - p.k() - w) as u32;
    CandidateCount {
        terms: p.terms().to_vec(),
        conjugate: u.entries().to_vec(),
        weight: w,
        primary_count: count,
        bound: r * (r - 1).pow(w as u32) * r.pow(free),
    }
}

/// Each coloring with a monochromatic `(a, d)` progression has exactly one
/// primary, and the primaries partition those colorings.
pub fn primary_partition_check(
    r: usize,
    n_points: usize,
    k: usize,
    family: Family,
    a: usize,
    d: usize,
    budget: &OracleBudget,
) -> Result<bool> {
    Ok(primary_census(r, n_points, k, family, a, d, budget)?.partition_holds)
}

/// For every candidate `P` with first term `a` and low-difference `d`, the
/// number of colorings with `P` primary is at most `r (r-1)^w r^{N-k-w}`.
pub fn forced_count_check(
    r: usize,
    n_points: usize,
    k: usize,
    family: Family,
    a: usize,
    d: usize,
    budget: &OracleBudget,
) -> Result<bool> {
    Ok(primary_census(r, n_points, k, family, a, d, budget)?.forced_bound_holds)
}
