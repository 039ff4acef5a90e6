//! Progressions, colorings and the combinatorial fingerprints used by the
//! counting arguments: conjugate vectors, frequency vectors, weights, primary
//! progressions and forced-color element sets.
//!
//! Ground-set positions are 1-based throughout, colors are `0..r`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// The progression family: semi-progressions of scope `m` (gaps `d, 2d, .., md`)
/// or quasi-progressions of diameter `n` (gaps `d, d+1, .., d+n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "lowercase")]
pub enum Family {
    Semi(usize),
    Quasi(usize),
}

impl Family {
    pub fn semi(scope: usize) -> Result<Self> {
        if scope == 0 {
            return invalid("semi-progression scope must be at least 1");
        }
        Ok(Family::Semi(scope))
    }

    pub fn quasi(diameter: usize) -> Self {
        Family::Quasi(diameter)
    }

    /// Parses `semi`/`quasi` together with its parameter.
    pub fn from_parts(kind: &str, param: usize) -> Result<Self> {
        match kind {
            "semi" => Family::semi(param),
            "quasi" => Ok(Family::quasi(param)),
            other => invalid(format!("unknown family {other:?} (expected semi or quasi)")),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Family::Semi(_) => "semi",
            Family::Quasi(_) => "quasi",
        }
    }

    /// Scope `m` or diameter `n`.
    pub fn param(&self) -> usize {
        match *self {
            Family::Semi(m) | Family::Quasi(m) => m,
        }
    }

    /// Largest conjugate-vector entry: `m - 1` for Semi, `n` for Quasi.
    pub fn max_entry(&self) -> usize {
        match *self {
            Family::Semi(m) => m - 1,
            Family::Quasi(n) => n,
        }
    }

    /// The gap realised by conjugate entry `entry` at low-difference `d`.
    #[inline]
    pub fn gap(&self, d: usize, entry: usize) -> usize {
        match self {
            Family::Semi(_) => (entry + 1) * d,
            Family::Quasi(_) => d + entry,
        }
    }

    /// Inverse of [`Family::gap`]; `None` when `gap` is not in the allowed set for `d`.
    pub fn entry_of_gap(&self, d: usize, gap: usize) -> Option<usize> {
        if d == 0 || gap < d {
            return None;
        }
        let entry = match self {
            Family::Semi(_) if gap.is_multiple_of(d) => gap / d - 1,
            Family::Semi(_) => return None,
            Family::Quasi(_) => gap - d,
        };
        (entry <= self.max_entry()).then_some(entry)
    }

    /// Allowed gaps for low-difference `d`, ascending.
    pub fn allowed_gaps(&self, d: usize) -> Vec<usize> {
        (0..=self.max_entry()).map(|e| self.gap(d, e)).collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Semi(m) => write!(f, "semi(m={m})"),
            Family::Quasi(n) => write!(f, "quasi(n={n})"),
        }
    }
}

/// An `r`-coloring of `[1, N]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    r: usize,
    colors: Vec<u8>,
}

impl Coloring {
    pub fn new(r: usize, colors: Vec<u8>) -> Result<Self> {
        if !(2..=u8::MAX as usize).contains(&r) {
            return invalid(format!("number of colors must be in 2..=255, got {r}"));
        }
        if colors.is_empty() {
            return invalid("a coloring needs at least one point");
        }
        if let Some(pos) = colors.iter().position(|&c| c as usize >= r) {
            return invalid(format!(
                "color {} at point {} is not below r={r}",
                colors[pos],
                pos + 1
            ));
        }
        Ok(Coloring { r, colors })
    }

    /// Single color on all `n_points` points.
    pub fn constant(r: usize, n_points: usize, color: u8) -> Result<Self> {
        Coloring::new(r, vec![color; n_points])
    }

    /// Parses a string of base-`r` digits (`0-9a-z`), position `i + 1` at index `i`.
    pub fn from_digits(r: usize, digits: &str) -> Result<Self> {
        let colors = digits
            .chars()
            .map(|ch| {
                ch.to_digit(36)
                    .map(|v| v as u8)
                    .ok_or_else(|| crate::Error::Parse(format!("bad color digit {ch:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Coloring::new(r, colors)
    }

    pub fn to_digits(&self) -> String {
        self.colors
            .iter()
            .map(|&c| char::from_digit(c as u32, 36).expect("color below 36"))
            .collect()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n_points(&self) -> usize {
        self.colors.len()
    }

    /// Color of point `pos` (1-based).
    #[inline]
    pub fn color(&self, pos: usize) -> u8 {
        self.colors[pos - 1]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn set_color(&mut self, pos: usize, color: u8) {
        assert!((color as usize) < self.r);
        self.colors[pos - 1] = color;
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_digits())
    }
}

/// A valid k-term progression of its family with low-difference `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Progression {
    terms: Vec<usize>,
    low_difference: usize,
    family: Family,
}

/// Returns whether `terms` is a progression of `family` with low-difference `d`.
///
/// Non-increasing terms, fewer than two terms, a zero term or `d = 0` are
/// input errors rather than a `false` answer.
pub fn validate_progression(terms: &[usize], d: usize, family: Family) -> Result<bool> {
    if d == 0 {
        return invalid("low-difference must be positive");
    }
    if terms.len() < 2 {
        return invalid("a progression needs at least two terms");
    }
    if terms[0] == 0 {
        return invalid("terms are 1-based positive integers");
    }
    if terms.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("terms must be strictly increasing");
    }
    Ok(terms
        .windows(2)
        .all(|w| family.entry_of_gap(d, w[1] - w[0]).is_some()))
}

impl Progression {
    pub fn new(terms: Vec<usize>, d: usize, family: Family) -> Result<Self> {
        if !validate_progression(&terms, d, family)? {
            return invalid(format!(
                "{terms:?} is not a {family} progression with d={d}"
            ));
        }
        Ok(Progression {
            terms,
            low_difference: d,
            family,
        })
    }

    /// Builds the progression starting at `a` whose conjugate vector is `entries`.
    pub fn from_conjugate(a: usize, d: usize, entries: &[usize], family: Family) -> Result<Self> {
        if a == 0 || d == 0 {
            return invalid("first term and low-difference must be positive");
        }
        if entries.is_empty() {
            return invalid("a progression needs at least two terms");
        }
        if let Some(&e) = entries.iter().find(|&&e| e > family.max_entry()) {
            return invalid(format!("conjugate entry {e} out of range for {family}"));
        }
        Ok(Progression {
            terms: terms_from_entries(a, d, entries, family),
            low_difference: d,
            family,
        })
    }

    pub fn terms(&self) -> &[usize] {
        &self.terms
    }

    pub fn k(&self) -> usize {
        self.terms.len()
    }

    pub fn first(&self) -> usize {
        self.terms[0]
    }

    pub fn last(&self) -> usize {
        *self.terms.last().unwrap()
    }

    pub fn low_difference(&self) -> usize {
        self.low_difference
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn conjugate_vector(&self) -> ConjugateVector {
        conjugate_vector(self)
    }

    pub fn is_monochromatic(&self, chi: &Coloring) -> bool {
        self.last() <= chi.n_points() && {
            let c = chi.color(self.terms[0]);
            self.terms.iter().all(|&t| chi.color(t) == c)
        }
    }
}

fn terms_from_entries(a: usize, d: usize, entries: &[usize], family: Family) -> Vec<usize> {
    let mut terms = Vec::with_capacity(entries.len() + 1);
    let mut x = a;
    terms.push(x);
    for &e in entries {
        x += family.gap(d, e);
        terms.push(x);
    }
    terms
}

/// Per-gap excess over the minimal gap, normalized by `d` for semi-progressions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConjugateVector {
    entries: Vec<usize>,
    family: Family,
}

impl ConjugateVector {
    pub fn new(entries: Vec<usize>, family: Family) -> Result<Self> {
        if let Some(&e) = entries.iter().find(|&&e| e > family.max_entry()) {
            return invalid(format!("conjugate entry {e} out of range for {family}"));
        }
        Ok(ConjugateVector { entries, family })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn weight(&self) -> usize {
        weight(self)
    }
}

pub fn conjugate_vector(p: &Progression) -> ConjugateVector {
    let d = p.low_difference;
    let entries = p
        .terms
        .windows(2)
        .map(|w| {
            p.family
                .entry_of_gap(d, w[1] - w[0])
                .expect("validated progression")
        })
        .collect();
    ConjugateVector {
        entries,
        family: p.family,
    }
}

/// Histogram `(v_0, .., v_{m-1})` of a semi conjugate vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FrequencyVector {
    counts: Vec<usize>,
}

impl FrequencyVector {
    pub fn new(counts: Vec<usize>) -> Self {
        FrequencyVector { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `sum_j v_j`, the number of gaps.
    pub fn len_sum(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `<mu, v>` with `mu = (0, 1, .., m-1)`.
    pub fn weight(&self) -> usize {
        self.counts.iter().enumerate().map(|(j, v)| j * v).sum()
    }
}

pub fn frequency_vector(u: &[usize], m: usize) -> Result<FrequencyVector> {
    let mut counts = vec![0; m];
    for &e in u {
        if e >= m {
            return invalid(format!("entry {e} is not below scope {m}"));
        }
        counts[e] += 1;
    }
    Ok(FrequencyVector { counts })
}

/// Number of lexicographically smaller one-element exchanges for the pair
/// `xy` in a quasi conjugate vector of diameter `n`: `min(x, n - y)`.
pub fn pair_multiplicity(x: usize, y: usize, n: usize) -> Result<usize> {
    if x > n || y > n {
        return invalid(format!("pair ({x},{y}) out of range for diameter {n}"));
    }
    Ok(x.min(n - y))
}

/// Number of cells forced to a different color when the progression is primary.
///
/// Semi: sum of entries. Quasi: last entry plus `min(u_i, n - u_{i+1})` over
/// consecutive pairs.
pub fn weight(u: &ConjugateVector) -> usize {
    let e = &u.entries;
    match u.family {
        Family::Semi(_) => e.iter().sum(),
        Family::Quasi(n) => {
            let pairs: usize = e.windows(2).map(|w| w[0].min(n - w[1])).sum();
            pairs + e.last().copied().unwrap_or(0)
        }
    }
}

/// Cells whose color must differ from the progression's color whenever `p`
/// is the `(a, d)`-primary progression of a coloring.
pub fn forced_elements(p: &Progression) -> BTreeSet<usize> {
    let u = conjugate_vector(p);
    let u = u.entries();
    let d = p.low_difference;
    let a = &p.terms;
    let mut out = BTreeSet::new();
    match p.family {
        Family::Semi(_) => {
            for (i, &ui) in u.iter().enumerate() {
                out.extend((0..ui).map(|j| a[i] + (j + 1) * d));
            }
        }
        Family::Quasi(n) => {
            let last = u.len() - 1;
            for i in 0..last {
                let lo = u[i].saturating_sub(n - u[i + 1]);
                out.extend((lo..u[i]).map(|j| a[i] + d + j));
            }
            out.extend((0..u[last]).map(|j| a[last] + d + j));
        }
    }
    out
}

/// Lexicographically least conjugate vector among monochromatic k-term
/// progressions with first term `a` and low-difference `d` inside `[1, N]`.
///
/// Depth-first in increasing entry order, so the first completion is the
/// lex-least. Failed `(position, terms placed)` states are remembered: whether
/// a state can be completed does not depend on how it was reached.
pub(crate) fn primary_entries(
    chi: &Coloring,
    a: usize,
    d: usize,
    k: usize,
    family: Family,
) -> Option<Vec<usize>> {
    let n_points = chi.n_points();
    if a + (k - 1) * d > n_points {
        return None;
    }
    let color = chi.color(a);
    let mut dead = vec![false; (n_points + 1) * k];
    let mut entries = Vec::with_capacity(k - 1);
    fn go(
        chi: &Coloring,
        x: usize,
        placed: usize,
        ctx: (usize, usize, Family, u8),
        dead: &mut [bool],
        entries: &mut Vec<usize>,
    ) -> bool {
        let (d, k, family, color) = ctx;
        if placed == k {
            return true;
        }
        let idx = x * k + placed;
        if dead[idx] {
            return false;
        }
        for e in 0..=family.max_entry() {
            let next = x + family.gap(d, e);
            // the remaining terms need at least (k - placed - 1) * d more room
            if next + (k - placed - 1) * d > chi.n_points() {
                break;
            }
            if chi.color(next) != color {
                continue;
            }
            entries.push(e);
            if go(chi, next, placed + 1, ctx, dead, entries) {
                return true;
            }
            entries.pop();
        }
        dead[idx] = true;
        false
    }
    go(chi, a, 1, (d, k, family, color), &mut dead, &mut entries).then_some(entries)
}

/// The `(a, d)`-primary progression of `chi`, if any k-term progression with
/// that first term and low-difference is monochromatic.
pub fn primary_progression(
    chi: &Coloring,
    a: usize,
    d: usize,
    k: usize,
    family: Family,
) -> Result<Option<Progression>> {
    if k < 2 {
        return invalid("progressions have at least two terms");
    }
    if a == 0 || a > chi.n_points() || d == 0 {
        return invalid(format!("need 1 <= a <= {} and d >= 1", chi.n_points()));
    }
    Ok(primary_entries(chi, a, d, k, family).map(|u| Progression {
        terms: terms_from_entries(a, d, &u, family),
        low_difference: d,
        family,
    }))
}

/// Scans `(a, d)` lexicographically, with `d <= (N - a) / (k - 1)`, and returns
/// the primary progression of the first pair that has one.
pub fn find_monochromatic(chi: &Coloring, k: usize, family: Family) -> Result<Option<Progression>> {
    if k < 2 {
        return invalid("progressions have at least two terms");
    }
    let n_points = chi.n_points();
    for a in 1..=n_points {
        for d in 1..=(n_points - a) / (k - 1) {
            if let Some(p) = primary_progression(chi, a, d, k, family)? {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}

/// Every k-term progression with first term `a` and low-difference `d` inside
/// `[1, N]`, in lexicographic order of conjugate vectors.
pub fn progressions_from(
    a: usize,
    d: usize,
    n_points: usize,
    k: usize,
    family: Family,
) -> Vec<Progression> {
    let mut out = Vec::new();
    if k < 2 || a == 0 || d == 0 || a + (k - 1) * d > n_points {
        return out;
    }
    let mut entries = Vec::with_capacity(k - 1);
    fn go(
        x: usize,
        entries: &mut Vec<usize>,
        ctx: (usize, usize, usize, usize, Family),
        out: &mut Vec<Progression>,
    ) {
        let (a, d, n_points, k, family) = ctx;
        if entries.len() == k - 1 {
            out.push(Progression {
                terms: terms_from_entries(a, d, entries, family),
                low_difference: d,
                family,
            });
            return;
        }
        let remaining = k - 2 - entries.len();
        for e in 0..=family.max_entry() {
            let next = x + family.gap(d, e);
            if next + remaining * d > n_points {
                break;
            }
            entries.push(e);
            go(next, entries, ctx, out);
            entries.pop();
        }
    }
    go(a, &mut entries, (a, d, n_points, k, family), &mut out);
    out
}

/// Every k-term progression of the family inside `[1, N]`, ordered by `(a, d, u)`.
pub fn all_progressions(n_points: usize, k: usize, family: Family) -> Vec<Progression> {
    if k < 2 {
        return Vec::new();
    }
    (1..=n_points)
        .flat_map(|a| (1..=(n_points - a) / (k - 1)).map(move |d| (a, d)))
        .flat_map(|(a, d)| progressions_from(a, d, n_points, k, family))
        .collect()
}
