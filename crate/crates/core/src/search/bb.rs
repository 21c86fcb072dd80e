//! Exact labeling search by branch and bound over block-sum windows.
//!
//! Every objective reduces to questions of the form "is there a labeling with
//! all block sums in `[lo, hi]`?". Feasibility is decided by assigning ranks
//! from both ends of the range (0, v-1, 1, v-2, ...), which closes blocks on
//! small and large ranks early. Once the optimum is known, the least rank
//! vector reaching it is found by a second pass that assigns points in index
//! order with ranks ascending.

use rayon::prelude::*;

use crate::design::{Design, Labeling};
use crate::error::{Error, Result};
use crate::independence::{independent_pair, labeling_from_pair, PAIR_EXACT_CAP};
use crate::metrics::metric_report;
use crate::rational::{ceil, floor, Rational};
use crate::search::{Objective, SearchResult, ValidBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BbConfig {
    /// Largest order accepted.
    pub max_v: u32,
    /// Node budget for each window query; when exceeded the search stops
    /// and reports a heuristic result.
    pub node_budget: u64,
}

impl Default for BbConfig {
    fn default() -> Self {
        BbConfig {
            max_v: 13,
            node_budget: 50_000_000,
        }
    }
}

const FREE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Outcome {
    Found(Vec<u32>),
    Infeasible,
    Exhausted,
}

#[derive(Clone, Copy)]
enum Order {
    /// Ranks from both ends; points tried in index order.
    BothEnds,
    /// Points in index order; ranks tried ascending.
    Lexicographic,
}

struct Window<'a> {
    v: usize,
    blocks: &'a [Vec<u32>],
    by_point: Vec<Vec<usize>>,
    lo: i64,
    hi: i64,
    rank: Vec<u32>,
    sum: Vec<i64>,
    open: Vec<usize>,
    avail: u64,
    nodes: u64,
    budget: u64,
}

impl<'a> Window<'a> {
    fn new(design: &'a Design, lo: i64, hi: i64, budget: u64) -> Self {
        let v = design.v() as usize;
        Window {
            v,
            blocks: design.blocks(),
            by_point: design.incidence(),
            lo,
            hi,
            rank: vec![FREE; v],
            sum: vec![0; design.block_count()],
            open: vec![design.k() as usize; design.block_count()],
            avail: if v == 64 { u64::MAX } else { (1u64 << v) - 1 },
            nodes: 0,
            budget,
        }
    }

    fn assign(&mut self, p: usize, r: u32) {
        self.rank[p] = r;
        self.avail &= !(1u64 << r);
        for &b in &self.by_point[p] {
            self.sum[b] += r as i64;
            self.open[b] -= 1;
        }
    }

    fn unassign(&mut self, p: usize) {
        let r = self.rank[p];
        self.rank[p] = FREE;
        self.avail |= 1u64 << r;
        for &b in &self.by_point[p] {
            self.sum[b] -= r as i64;
            self.open[b] += 1;
        }
    }

    /// Block completion ranges against the window, plus a per-point check
    /// that blocks with a single open point leave it some free rank.
    fn consistent(&self) -> bool {
        let mut small = [0i64; 65];
        let mut large = [0i64; 65];
        let mut n = 0;
        let mut bits = self.avail;
        while bits != 0 {
            let r = bits.trailing_zeros() as i64;
            bits &= bits - 1;
            small[n + 1] = small[n] + r;
            n += 1;
        }
        let mut bits = self.avail;
        let mut m = 0;
        while bits != 0 {
            let r = 63 - bits.leading_zeros() as i64;
            bits &= !(1u64 << r);
            large[m + 1] = large[m] + r;
            m += 1;
        }
        let mut dom_lo = [0i64; 64];
        let mut dom_hi = [i64::MAX; 64];
        for (b, block) in self.blocks.iter().enumerate() {
            let (s, u) = (self.sum[b], self.open[b]);
            if s + large[u] < self.lo || s + small[u] > self.hi {
                return false;
            }
            if u == 1 {
                let p = block.iter().find(|&&p| self.rank[p as usize] == FREE).unwrap();
                let p = *p as usize;
                dom_lo[p] = dom_lo[p].max(self.lo - s);
                dom_hi[p] = dom_hi[p].min(self.hi - s);
            }
        }
        for p in 0..self.v {
            if self.rank[p] != FREE || dom_hi[p] == i64::MAX && dom_lo[p] == 0 {
                continue;
            }
            let (a, b) = (dom_lo[p].max(0), dom_hi[p].min(63));
            if a > b {
                return false;
            }
            let span = if b - a == 63 { u64::MAX } else { ((1u64 << (b - a + 1)) - 1) << a };
            if self.avail & span == 0 {
                return false;
            }
        }
        true
    }

    fn solve(&mut self, order: Order) -> Outcome {
        let seq: Vec<u32> = match order {
            Order::BothEnds => {
                let v = self.v as u32;
                (0..v).map(|i| if i % 2 == 0 { i / 2 } else { v - 1 - i / 2 }).collect()
            }
            Order::Lexicographic => Vec::new(),
        };
        if !self.consistent() {
            return Outcome::Infeasible;
        }
        match self.dfs(0, order, &seq) {
            Some(true) => Outcome::Found(self.rank.clone()),
            Some(false) => Outcome::Infeasible,
            None => Outcome::Exhausted,
        }
    }

    /// `Some(found)`, or `None` once the node budget runs out.
    fn dfs(&mut self, depth: usize, order: Order, seq: &[u32]) -> Option<bool> {
        if depth == self.v {
            return Some(true);
        }
        let moves: Vec<(usize, u32)> = match order {
            Order::BothEnds => {
                let r = seq[depth];
                (0..self.v).filter(|&p| self.rank[p] == FREE).map(|p| (p, r)).collect()
            }
            Order::Lexicographic => {
                let p = depth;
                (0..self.v as u32)
                    .filter(|&r| self.avail >> r & 1 == 1)
                    .map(|r| (p, r))
                    .collect()
            }
        };
        for (p, r) in moves {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.assign(p, r);
            if self.consistent() {
                match self.dfs(depth + 1, order, seq) {
                    Some(true) => return Some(true),
                    None => {
                        self.unassign(p);
                        return None;
                    }
                    Some(false) => {}
                }
            }
            self.unassign(p);
        }
        Some(false)
    }
}

fn query(design: &Design, lo: i64, hi: i64, budget: u64, order: Order) -> (Outcome, u64) {
    let mut w = Window::new(design, lo, hi, budget);
    let out = w.solve(order);
    (out, w.nodes)
}

struct Driver<'a> {
    design: &'a Design,
    objective: Objective,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    /// Best labeling seen so far, by objective cost.
    incumbent: Labeling,
}

impl Driver<'_> {
    fn consider(&mut self, ranks: &[u32]) {
        let l = Labeling::new(ranks.to_vec()).expect("search yields permutations");
        let new = metric_report(self.design, &l).expect("nonempty");
        let cur = metric_report(self.design, &self.incumbent).expect("nonempty");
        if self.objective.cost(&new) < self.objective.cost(&cur) {
            self.incumbent = l;
        }
    }

    /// Feasibility of many windows at once, answered in input order.
    fn feasible_many(&mut self, windows: &[(i64, i64)]) -> Vec<Outcome> {
        let (design, budget) = (self.design, self.budget);
        let answers: Vec<(Outcome, u64)> = windows
            .par_iter()
            .map(|&(lo, hi)| query(design, lo, hi, budget, Order::BothEnds))
            .collect();
        let mut out = Vec::with_capacity(answers.len());
        for (o, n) in answers {
            self.nodes += n;
            if let Outcome::Found(r) = &o {
                self.consider(r);
            }
            if o == Outcome::Exhausted {
                self.exhausted = true;
            }
            out.push(o);
        }
        out
    }

    fn feasible(&mut self, lo: i64, hi: i64) -> Outcome {
        self.feasible_many(&[(lo, hi)]).pop().unwrap()
    }

    /// Least rank vector over windows known to be feasible.
    fn least_over(&mut self, windows: &[(i64, i64)]) -> Option<Vec<u32>> {
        let (design, budget) = (self.design, self.budget);
        let answers: Vec<(Outcome, u64)> = windows
            .par_iter()
            .map(|&(lo, hi)| query(design, lo, hi, budget, Order::Lexicographic))
            .collect();
        let mut best: Option<Vec<u32>> = None;
        for (o, n) in answers {
            self.nodes += n;
            match o {
                Outcome::Found(r) => {
                    if best.as_ref().is_none_or(|b| r < *b) {
                        best = Some(r);
                    }
                }
                Outcome::Exhausted => self.exhausted = true,
                Outcome::Infeasible => {}
            }
        }
        best
    }
}

fn current(d: &Driver) -> crate::metrics::MetricReport {
    metric_report(d.design, &d.incumbent).expect("nonempty")
}

fn max_minsum(d: &mut Driver, b: &ValidBounds, top: i64) -> Option<Vec<u32>> {
    let start = current(d).min_sum;
    let upper = b.minsum_upper.unwrap_or(top);
    let mut opt = start;
    for m in (start + 1..=upper).rev() {
        match d.feasible(m, top) {
            Outcome::Found(_) => {
                opt = m;
                break;
            }
            Outcome::Infeasible => {}
            Outcome::Exhausted => return None,
        }
    }
    d.least_over(&[(opt, top)])
}

fn min_diffsum(d: &mut Driver, b: &ValidBounds, top: i64, floor_sum: i64) -> Option<Vec<u32>> {
    let start = current(d).diff_sum;
    let min_hi = b.minsum_upper.unwrap_or(top);
    let max_lo = b.maxsum_lower.unwrap_or(floor_sum);
    for diff in b.diffsum_lower..=start {
        let lo_m = floor_sum.max(max_lo - diff);
        let hi_m = min_hi.min((top + floor_sum - diff).div_euclid(2));
        let windows: Vec<(i64, i64)> = (lo_m..=hi_m).map(|m| (m, m + diff)).collect();
        let answers = d.feasible_many(&windows);
        if d.exhausted {
            return None;
        }
        let mut hits: Vec<(i64, i64)> = Vec::new();
        for (&(m, _), o) in windows.iter().zip(&answers) {
            if matches!(o, Outcome::Found(_)) {
                hits.push((m, m + diff));
                // reversal maps sums s to (top + floor_sum) - s
                let mirror = top + floor_sum - m - diff;
                hits.push((mirror, mirror + diff));
            }
        }
        if !hits.is_empty() {
            hits.sort_unstable();
            hits.dedup();
            return d.least_over(&hits);
        }
    }
    unreachable!("the starting labeling's own window is feasible")
}

fn min_ratiosum(d: &mut Driver, b: &ValidBounds, top: i64, floor_sum: i64) -> Option<Vec<u32>> {
    let start = current(d);
    let mut best = start.ratio_sum.expect("k >= 2 keeps MinSum positive");
    let m_top = b.minsum_upper.unwrap_or(top);
    let max_lo = b.maxsum_lower.unwrap_or(floor_sum).max(floor_sum);
    for m in (floor_sum.max(1)..=m_top).rev() {
        if Rational::new(max_lo, m) >= best {
            break;
        }
        loop {
            // strictly better means MaxSum < best * m
            let cap = ceil(&(best * m)) - 1;
            if cap < m.max(max_lo) {
                break;
            }
            match d.feasible(m, cap) {
                Outcome::Found(r) => {
                    let l = Labeling::new(r).expect("permutation");
                    let rep = metric_report(d.design, &l).expect("nonempty");
                    best = rep.ratio_sum.expect("positive MinSum");
                }
                Outcome::Infeasible => break,
                Outcome::Exhausted => return None,
            }
        }
    }
    let first = ceil(&(Rational::from_integer(max_lo) / best)).max(floor_sum.max(1));
    let windows: Vec<(i64, i64)> = (first..=m_top)
        .map(|m| (m, floor(&(best * m))))
        .filter(|&(m, hi)| hi >= m)
        .collect();
    let answers = d.feasible_many(&windows);
    if d.exhausted {
        return None;
    }
    let live: Vec<(i64, i64)> = windows
        .into_iter()
        .zip(answers)
        .filter(|(_, o)| matches!(o, Outcome::Found(_)))
        .map(|(w, _)| w)
        .collect();
    d.least_over(&live)
}

/// Exact optimum by branch and bound; the least optimal rank vector is
/// returned. Falls back to the best labeling seen, flagged heuristic, when a
/// window query runs out of nodes.
pub fn bb_labeling(design: &Design, objective: Objective, config: &BbConfig) -> Result<SearchResult> {
    let v = design.v();
    if design.is_empty() {
        return Err(Error::EmptyDesign);
    }
    if v > config.max_v || v > 64 {
        return Err(Error::ExactnessCap {
            what: "order for branch and bound",
            value: v as u64,
            cap: config.max_v.min(64) as u64,
            hint: "use anneal_labeling",
        });
    }
    let k = design.k() as i64;
    let top = k * (v as i64 - 1) - k * (k - 1) / 2;
    let floor_sum = k * (k - 1) / 2;
    let bounds = ValidBounds::of(design);

    let mut incumbent = Labeling::identity(v);
    if v <= PAIR_EXACT_CAP {
        let from_pair = labeling_from_pair(design, &independent_pair(design))?;
        let cost = |l: &Labeling| objective.cost(&metric_report(design, l).expect("nonempty"));
        if cost(&from_pair) < cost(&incumbent) {
            incumbent = from_pair;
        }
    }
    let mut driver = Driver {
        design,
        objective,
        budget: config.node_budget,
        nodes: 0,
        exhausted: false,
        incumbent,
    };
    let least = match objective {
        Objective::MaxMinSum => max_minsum(&mut driver, &bounds, top),
        Objective::MinDiffSum => min_diffsum(&mut driver, &bounds, top, floor_sum),
        Objective::MinRatioSum => min_ratiosum(&mut driver, &bounds, top, floor_sum),
    };
    let mut result = match least {
        Some(ranks) if !driver.exhausted => {
            SearchResult::new(design, Labeling::new(ranks)?, objective, "branch-and-bound")?.certify()
        }
        _ => SearchResult::new(design, driver.incumbent.clone(), objective, "branch-and-bound")?,
    };
    result.iterations = driver.nodes;
    Ok(result)
}
