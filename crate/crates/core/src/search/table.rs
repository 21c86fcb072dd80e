//! Search for triple systems whose identity labeling has prescribed MinSum
//! and MaxSum.
//!
//! Only triples with sum inside `[target_min, target_max]` are ever used, so
//! any completed system meets both targets as bounds. The search is a
//! randomized backtracking over uncovered pairs with Luby restarts.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::design::{Design, Labeling};
use crate::error::{Error, Result};
use crate::metrics::{basic_bounds, sts_admissible, sts_diffsum_lower};
use crate::search::{Objective, SearchResult};

/// One row of the reference table of achieved (MinSum, MaxSum) pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub v: u32,
    pub target_min: i64,
    pub target_max: i64,
}

/// Every (v, MinSum, MaxSum) row of the reference table, ordered by `v`.
pub fn table_rows() -> Vec<TableRow> {
    let mut rows = Vec::new();
    let mut add = |vs: &[u32], f: fn(i64) -> (i64, i64)| {
        for &v in vs {
            let (target_min, target_max) = f(v as i64);
            rows.push(TableRow { v, target_min, target_max });
        }
    };
    add(&[7], |v| (v - 1, 2 * v - 1));
    add(&[9], |v| (v, 2 * v));
    add(&[13, 15, 19, 21, 25, 27], |v| (v - 1, 2 * v));
    add(&[7, 15, 19, 21, 27], |v| (v, 2 * v + 1));
    add(&[13, 25], |v| (v, 2 * v + 2));
    rows.sort_by_key(|r| (r.v, r.target_min, r.target_max));
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableStatus {
    /// A system meeting both targets exactly was found.
    Hit,
    /// No such system exists: the targets contradict a proven bound, or
    /// backtracking exhausted every system inside the window.
    Miss,
    /// The step budget ran out.
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableOutcome {
    pub row: TableRow,
    pub status: TableStatus,
    pub steps: u64,
    pub restarts: u64,
    pub seed: u64,
    pub found: Option<(Design, SearchResult)>,
}

const NONE: u32 = u32::MAX;

/// Steps per unit of the Luby restart schedule.
const LUBY_BASE: u64 = 2000;

struct Walk {
    v: usize,
    lo: u32,
    hi: u32,
    /// `owner[x*v+y]`: index of the block covering `{x,y}`.
    owner: Vec<u32>,
    blocks: Vec<[u32; 3]>,
}

impl Walk {
    fn new(v: usize, lo: u32, hi: u32) -> Self {
        Walk {
            v,
            lo,
            hi,
            owner: vec![NONE; v * v],
            blocks: Vec::new(),
        }
    }

    fn set_pairs(&mut self, b: [u32; 3], value: u32) {
        let v = self.v;
        for (x, y) in [(b[0], b[1]), (b[0], b[2]), (b[1], b[2])] {
            let (x, y) = (x as usize, y as usize);
            self.owner[x * v + y] = value;
            self.owner[y * v + x] = value;
        }
    }

    fn add(&mut self, b: [u32; 3]) {
        let i = self.blocks.len() as u32;
        self.blocks.push(b);
        self.set_pairs(b, i);
    }

    fn remove(&mut self, i: u32) {
        let b = self.blocks[i as usize];
        self.set_pairs(b, NONE);
        self.blocks.swap_remove(i as usize);
        if (i as usize) < self.blocks.len() {
            let moved = self.blocks[i as usize];
            self.set_pairs(moved, i);
        }
    }

    fn in_window(&self, s: u32) -> bool {
        (self.lo..=self.hi).contains(&s)
    }
}

/// Randomized backtracking over pairs: always extend the uncovered pair with
/// the fewest in-window completions. Each tried triple costs one step.
struct Backtrack<'a> {
    walk: Walk,
    full: usize,
    targets: (i64, i64),
    rng: &'a mut ChaCha8Rng,
    steps: u64,
    limit: u64,
}

impl Backtrack<'_> {
    /// The most constrained uncovered pair and its completions.
    fn branch(&self) -> Option<((u32, u32), Vec<u32>)> {
        let v = self.walk.v as u32;
        let owner = &self.walk.owner;
        let free = |a: u32, b: u32| owner[(a * v + b) as usize] == NONE;
        let fits = |a: u32, b: u32, c: u32| {
            c != a && c != b && free(a, c) && free(b, c) && self.walk.in_window(a + b + c)
        };
        let mut best: Option<((u32, u32), usize)> = None;
        'scan: for a in 0..v {
            for b in a + 1..v {
                if !free(a, b) {
                    continue;
                }
                // count completions, giving up once this pair is no better
                let cap = best.map_or(usize::MAX, |(_, n)| n);
                let mut n = 0;
                for c in 0..v {
                    if fits(a, b, c) {
                        n += 1;
                        if n >= cap {
                            break;
                        }
                    }
                }
                if n < cap {
                    best = Some(((a, b), n));
                    if n <= 1 {
                        break 'scan;
                    }
                }
            }
        }
        let ((a, b), _) = best?;
        Some(((a, b), (0..v).filter(|&c| fits(a, b, c)).collect()))
    }

    /// `Some(true)` on a system meeting the targets, `None` when out of steps.
    fn run(&mut self) -> Option<bool> {
        if self.walk.blocks.len() == self.full {
            return Some(extremes(&self.walk.blocks) == self.targets);
        }
        let Some(((a, b), mut cands)) = self.branch() else {
            return Some(false);
        };
        cands.shuffle(self.rng);
        for c in cands {
            self.steps += 1;
            if self.steps > self.limit {
                return None;
            }
            let mut blk = [a, b, c];
            blk.sort_unstable();
            self.walk.add(blk);
            match self.run() {
                Some(false) => {}
                other => return other,
            }
            let i = self.walk.blocks.len() as u32 - 1;
            self.walk.remove(i);
        }
        Some(false)
    }
}

fn excluded_by_bounds(row: &TableRow) -> bool {
    let v = row.v;
    let Ok(sheet) = basic_bounds(2, 3, v) else {
        return true;
    };
    let diff_lower = sts_diffsum_lower(v).unwrap_or(sheet.best_diffsum_lower());
    row.target_max - row.target_min < diff_lower
        || row.target_min > sheet.minsum_upper
        || row.target_max < sheet.maxsum_lower
        || row.target_min < 3
}

/// Searches for an STS(v) whose identity labeling has MinSum `target_min`
/// and MaxSum `target_max` within `budget` steps. Each attempt is a fresh
/// randomized backtracking run whose step limit follows the Luby sequence.
pub fn table_search_outcome(
    v: u32,
    target_min: i64,
    target_max: i64,
    seed: u64,
    budget: u64,
) -> Result<TableOutcome> {
    if !sts_admissible(v) || !(7..=27).contains(&v) {
        return Err(Error::InvalidParameters(format!(
            "table search needs v = 1 or 3 (mod 6) with 7 <= v <= 27, got {v}"
        )));
    }
    let row = TableRow { v, target_min, target_max };
    let mut outcome = TableOutcome {
        row,
        status: TableStatus::Miss,
        steps: 0,
        restarts: 0,
        seed,
        found: None,
    };
    if excluded_by_bounds(&row) {
        return Ok(outcome);
    }
    outcome.status = TableStatus::Timeout;
    let (lo, hi) = (target_min as u32, target_max as u32);
    let n = v as usize;
    let full = n * (n - 1) / 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets = (target_min, target_max);

    while outcome.steps < budget {
        let mut bt = Backtrack {
            walk: Walk::new(n, lo, hi),
            full,
            targets,
            rng: &mut rng,
            steps: 0,
            limit: (LUBY_BASE * luby(outcome.restarts + 1)).min(budget - outcome.steps),
        };
        let found = bt.run();
        outcome.steps += bt.steps.min(bt.limit);
        match found {
            Some(true) => {
                let blocks = bt.walk.blocks.clone();
                return record_hit(outcome, &blocks, "backtrack");
            }
            Some(false) => {
                // the window admits no system at all
                outcome.status = TableStatus::Miss;
                return Ok(outcome);
            }
            None => outcome.restarts += 1,
        }
    }
    Ok(outcome)
}

/// The Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ... (1-based).
fn luby(i: u64) -> u64 {
    let mut k = 1u32;
    while (1u64 << k) - 1 < i {
        k += 1;
    }
    if i == (1u64 << k) - 1 {
        1 << (k - 1)
    } else {
        luby(i - ((1u64 << (k - 1)) - 1))
    }
}

fn extremes(blocks: &[[u32; 3]]) -> (i64, i64) {
    blocks
        .iter()
        .map(|b| b.iter().sum::<u32>() as i64)
        .fold((i64::MAX, i64::MIN), |(l, h), s| (l.min(s), h.max(s)))
}

fn record_hit(mut outcome: TableOutcome, blocks: &[[u32; 3]], method: &str) -> Result<TableOutcome> {
    let v = outcome.row.v;
    let design = Design::new(v, 2, 3, blocks.iter().map(|b| b.to_vec()).collect())?;
    let mut result = SearchResult::new(&design, Labeling::identity(v), Objective::MinDiffSum, method)?;
    result.rng_seed = Some(outcome.seed);
    result.iterations = outcome.steps;
    outcome.status = TableStatus::Hit;
    outcome.found = Some((design, result));
    Ok(outcome)
}

/// The design and its identity-labeling result on a hit.
pub fn table_search(
    v: u32,
    target_min: i64,
    target_max: i64,
    seed: u64,
    budget: u64,
) -> Result<Option<(Design, SearchResult)>> {
    table_search_outcome(v, target_min, target_max, seed, budget).map(|o| o.found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::validate;
    use crate::metrics::metric_report;

    #[test]
    fn rows() {
        let rows = table_rows();
        assert_eq!(rows.len(), 15);
        assert_eq!(rows[0], TableRow { v: 7, target_min: 6, target_max: 13 });
        assert!(rows.contains(&TableRow { v: 13, target_min: 12, target_max: 26 }));
        assert!(rows.contains(&TableRow { v: 25, target_min: 25, target_max: 52 }));
    }

    #[test]
    fn hit_v9() {
        let (d, r) = table_search(9, 9, 18, 0, 1_000_000).unwrap().unwrap();
        assert!(validate(&d).is_steiner);
        let rep = metric_report(&d, &r.labeling).unwrap();
        assert_eq!((rep.min_sum, rep.max_sum), (9, 18));
    }

    #[test]
    fn hit_v13() {
        let o = table_search_outcome(13, 12, 26, 0, 10_000_000).unwrap();
        assert_eq!(o.status, TableStatus::Hit);
        let (d, r) = o.found.unwrap();
        assert!(validate(&d).is_steiner);
        assert_eq!((r.report.min_sum, r.report.max_sum, r.report.diff_sum), (12, 26, 14));
    }

    #[test]
    fn miss_v13_diffsum_13() {
        let o = table_search_outcome(13, 13, 26, 0, 1_000).unwrap();
        assert_eq!(o.status, TableStatus::Miss);
        assert_eq!(o.steps, 0);
    }

    #[test]
    fn deterministic() {
        let a = table_search_outcome(7, 6, 13, 5, 100_000).unwrap();
        let b = table_search_outcome(7, 6, 13, 5, 100_000).unwrap();
        assert_eq!(a, b);
        assert!(table_search(11, 10, 22, 0, 10).is_err());
    }
}
