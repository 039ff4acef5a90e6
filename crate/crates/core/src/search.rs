//! Exact Ramsey thresholds by backtracking over colorings, and seeded random
//! search for witness colorings at lower-bound scale.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::progression::{find_monochromatic, Coloring, Family};
use crate::witness::WitnessFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Backtracking nodes for exact search; total repair moves for random search.
    pub max_nodes: u64,
    /// Longest coloring the exact search may build before giving up.
    pub max_length: usize,
    pub seed: u64,
    /// Independent random streams; each gets `max_nodes / restarts` moves.
    pub restarts: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 100_000_000,
            max_length: 512,
            seed: 0,
            restarts: 16,
        }
    }
}

impl SearchBudget {
    fn validate(&self) -> Result<()> {
        if self.max_nodes == 0 || self.max_length == 0 || self.restarts == 0 {
            return invalid("search budget fields must be positive");
        }
        Ok(())
    }
}

/// An exact Ramsey value with a longest valid coloring as witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdCertificate {
    pub family: Family,
    pub r: usize,
    pub k: usize,
    pub value: usize,
    #[serde(serialize_with = "ser_coloring")]
    pub witness: Coloring,
    pub nodes_explored: u64,
    /// The search tree was exhausted, proving no valid coloring of length `value`.
    pub exhaustive: bool,
}

fn ser_coloring<S: Serializer>(c: &Coloring, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_digits())
}

impl ThresholdCertificate {
    pub fn witness_file(&self) -> Result<WitnessFile> {
        WitnessFile::new(self.witness.clone(), self.k, self.family)
    }
}

/// Whether a monochromatic k-term progression of `family` ends at point `x`,
/// using only points `1..=x` of `colors`.
pub fn ends_monochromatic_at(colors: &[u8], x: usize, k: usize, family: Family) -> bool {
    debug_assert!(k >= 2 && x >= 1 && x <= colors.len());
    if x < k {
        return false;
    }
    let color = colors[x - 1];
    let mut dead = vec![false; (x + 1) * k];
    // walks backwards from `pos` with `placed` terms already chosen
    fn go(
        colors: &[u8],
        pos: usize,
        placed: usize,
        ctx: (usize, usize, Family, u8),
        dead: &mut [bool],
    ) -> bool {
        let (d, k, family, color) = ctx;
        if placed == k {
            return true;
        }
        let idx = pos * k + placed;
        if dead[idx] {
            return false;
        }
        let room = (k - placed - 1) * d;
        for e in 0..=family.max_entry() {
            let gap = family.gap(d, e);
            if pos < gap + 1 + room {
                break;
            }
            let prev = pos - gap;
            if colors[prev - 1] == color && go(colors, prev, placed + 1, ctx, dead) {
                return true;
            }
        }
        dead[idx] = true;
        false
    }
    for d in 1..=(x - 1) / (k - 1) {
        dead.iter_mut().for_each(|v| *v = false);
        if go(colors, x, 1, (d, k, family, color), &mut dead) {
            return true;
        }
    }
    false
}

enum Abort {
    Nodes,
    Length,
}

struct Backtracker {
    r: usize,
    k: usize,
    family: Family,
    max_nodes: u64,
    max_length: usize,
    colors: Vec<u8>,
    best: Vec<u8>,
    nodes: u64,
}

impl Backtracker {
    /// Explores every valid extension of the current (valid) prefix.
    /// `max_used` is the largest color used so far.
    fn extend(&mut self, max_used: Option<u8>) -> std::result::Result<(), Abort> {
        if self.colors.len() > self.best.len() {
            self.best.clone_from(&self.colors);
        }
        if self.colors.len() == self.max_length {
            return Err(Abort::Length);
        }
        // new colors appear in ascending order; point 1 is color 0
        let top = match max_used {
            None => 0,
            Some(m) => (m as usize + 1).min(self.r - 1) as u8,
        };
        for c in 0..=top {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(Abort::Nodes);
            }
            self.colors.push(c);
            let x = self.colors.len();
            if !ends_monochromatic_at(&self.colors, x, self.k, self.family) {
                self.extend(Some(max_used.map_or(c, |m| m.max(c))))?;
            }
            self.colors.pop();
        }
        Ok(())
    }
}

/// Least `N` such that every r-coloring of `[1, N]` has a monochromatic k-term
/// progression, by exhausting the tree of valid colorings.
pub fn exact_threshold(
    r: usize,
    k: usize,
    family: Family,
    budget: &SearchBudget,
) -> Result<ThresholdCertificate> {
    if k < 2 {
        return invalid("progressions have at least two terms");
    }
    if !(2..=36).contains(&r) {
        return invalid("exact search supports 2 <= r <= 36");
    }
    budget.validate()?;
    let mut bt = Backtracker {
        r,
        k,
        family,
        max_nodes: budget.max_nodes,
        max_length: budget.max_length,
        colors: Vec::new(),
        best: Vec::new(),
        nodes: 0,
    };
    match bt.extend(None) {
        Ok(()) => {
            let witness = Coloring::new(r, bt.best)?;
            Ok(ThresholdCertificate {
                family,
                r,
                k,
                value: witness.n_points() + 1,
                witness,
                nodes_explored: bt.nodes,
                exhaustive: true,
            })
        }
        Err(Abort::Nodes | Abort::Length) => {
            let best = if bt.best.is_empty() { vec![0] } else { bt.best };
            Err(Error::SearchBudgetExceeded {
                nodes: bt.nodes,
                best: Coloring::new(r, best)?,
            })
        }
    }
}

/// Seeded random colorings with local repair: while a monochromatic
/// progression exists, recolor a uniformly chosen term of the first one found.
///
/// Streams are independent (`seed`, stream index `0..restarts`); the valid
/// coloring from the lowest-index successful stream is returned, so the result
/// does not depend on the thread count.
pub fn random_witness_search(
    r: usize,
    n_points: usize,
    k: usize,
    family: Family,
    budget: &SearchBudget,
) -> Result<Option<Coloring>> {
    if k < 2 || n_points == 0 || !(2..=255).contains(&r) {
        return invalid("need k >= 2, N >= 1, 2 <= r <= 255");
    }
    budget.validate()?;
    let moves = (budget.max_nodes / budget.restarts).max(1);
    let found = (0..budget.restarts)
        .into_par_iter()
        .map(|stream| repair_stream(r, n_points, k, family, budget.seed, stream, moves))
        .find_first(|res| res.is_some());
    Ok(found.flatten())
}

fn repair_stream(
    r: usize,
    n_points: usize,
    k: usize,
    family: Family,
    seed: u64,
    stream: u64,
    moves: u64,
) -> Option<Coloring> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let colors = (0..n_points).map(|_| rng.gen_range(0..r) as u8).collect();
    let mut chi = Coloring::new(r, colors).expect("colors below r");
    let mut used = 0;
    loop {
        let Some(p) = find_monochromatic(&chi, k, family).expect("k >= 2") else {
            return Some(chi);
        };
        if used == moves {
            return None;
        }
        let pos = p.terms()[rng.gen_range(0..k)];
        let shift = rng.gen_range(1..r) as u8;
        chi.set_color(pos, ((chi.color(pos) as usize + shift as usize) % r) as u8);
        used += 1;
    }
}

/// Re-verifies a coloring from scratch: no monochromatic k-term progression.
pub fn check_witness(chi: &Coloring, k: usize, family: Family) -> Result<bool> {
    Ok(find_monochromatic(chi, k, family)?.is_none())
}
