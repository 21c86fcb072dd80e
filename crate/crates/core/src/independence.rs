//! Independent sets and pairs of independent sets.
//!
//! A point set is independent when it contains no whole block. Large
//! disjoint independent pairs are what allow a labeling to push every block
//! sum away from both ends of the rank range.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::design::{binomial, Design, Labeling};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::search::Optimality;

/// Largest order for the exact maximum independent set search.
pub const MIS_EXACT_CAP: u32 = 30;
/// Largest order for the exact independent pair search.
pub const PAIR_EXACT_CAP: u32 = 15;
/// Greedy restarts used by the heuristic pair search.
pub const PAIR_HEURISTIC_RESTARTS: u64 = 64;

/// True when no block of `design` lies inside `set`.
pub fn is_independent(design: &Design, set: &[u32]) -> bool {
    let mut member = vec![false; design.v() as usize];
    for &p in set {
        if let Some(m) = member.get_mut(p as usize) {
            *m = true;
        }
    }
    !design
        .blocks()
        .iter()
        .any(|b| b.iter().all(|&p| member[p as usize]))
}

fn mask_points(mask: u64) -> Vec<u32> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Lexicographic order on the ascending point lists of two masks of equal
/// size: the one holding the smallest differing point sorts first.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let low = (a ^ b) & (a ^ b).wrapping_neg();
    if a & low != 0 { Ordering::Less } else { Ordering::Greater }
}

struct MisSearch<'a> {
    blocks: &'a [u64],
    by_point: Vec<Vec<u64>>,
    best: u64,
    best_size: u32,
}

impl MisSearch<'_> {
    /// Greedy count of blocks inside `set | cand` whose candidate parts are
    /// pairwise disjoint; each costs at least one candidate.
    fn forced_losses(&self, set: u64, cand: u64) -> u32 {
        let live = set | cand;
        let mut used = 0u64;
        let mut count = 0;
        for &b in self.blocks {
            if b & !live == 0 && b & cand & used == 0 {
                used |= b & cand;
                count += 1;
            }
        }
        count
    }

    fn run(&mut self, set: u64, cand: u64) {
        let size = set.count_ones();
        if cand == 0 {
            if size > self.best_size {
                self.best = set;
                self.best_size = size;
            }
            return;
        }
        let room = size + cand.count_ones();
        if room <= self.best_size || room - self.forced_losses(set, cand) <= self.best_size {
            return;
        }
        let p = cand.trailing_zeros();
        let bit = 1u64 << p;
        let with = set | bit;
        let mut next = cand & !bit;
        for &b in &self.by_point[p as usize] {
            let rest = b & !with;
            if rest.count_ones() == 1 {
                next &= !rest;
            }
        }
        self.run(with, next);
        self.run(set, cand & !bit);
    }
}

fn exact_mis_within(design: &Design, allowed: u64) -> u64 {
    let blocks: Vec<u64> = design
        .block_masks()
        .into_iter()
        .filter(|&b| b & !allowed == 0)
        .collect();
    let mut by_point = vec![Vec::new(); design.v() as usize];
    for &b in &blocks {
        for p in mask_points(b) {
            by_point[p as usize].push(b);
        }
    }
    let mut search = MisSearch {
        blocks: &blocks,
        by_point,
        best: 0,
        best_size: 0,
    };
    search.run(0, allowed);
    search.best
}

fn full_mask(v: u32) -> u64 {
    if v == 64 { u64::MAX } else { (1u64 << v) - 1 }
}

/// A maximum independent set by branch and bound; among maximum sets the
/// lexicographically least is returned.
pub fn max_independent_set(design: &Design) -> Result<Vec<u32>> {
    let v = design.v();
    if v > MIS_EXACT_CAP {
        return Err(Error::ExactnessCap {
            what: "order for exact maximum independent set",
            value: v as u64,
            cap: MIS_EXACT_CAP as u64,
            hint: "use greedy_independent_set",
        });
    }
    Ok(mask_points(exact_mis_within(design, full_mask(v))))
}

/// `alpha(D)`, exactly.
pub fn independence_number(design: &Design) -> Result<u32> {
    max_independent_set(design).map(|s| s.len() as u32)
}

/// Adds points of `order` one at a time, skipping any that would complete a
/// block. The result is maximal within `order`.
fn greedy_from(design: &Design, incidence: &[Vec<usize>], order: &[u32]) -> Vec<u32> {
    let k = design.k() as usize;
    let mut inside = vec![0usize; design.block_count()];
    let mut set = Vec::new();
    for &p in order {
        let blocked = incidence[p as usize].iter().any(|&b| inside[b] == k - 1);
        if !blocked {
            for &b in &incidence[p as usize] {
                inside[b] += 1;
            }
            set.push(p);
        }
    }
    set.sort_unstable();
    set
}

/// Random-order greedy insertion. For partial triple systems the result has
/// at least `floor(sqrt(2v))` points.
pub fn greedy_independent_set(design: &Design, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..design.v()).collect();
    order.shuffle(&mut rng);
    greedy_from(design, &design.incidence(), &order)
}

/// `v(k-t+1)/(2k) + (k+t)/2 - 1`: sizes above this never help a pair.
pub fn clip_threshold(v: u32, t: u32, k: u32) -> Rational {
    let (v, t, k) = (v as i64, t as i64, k as i64);
    Rational::new(v * (k - t + 1), 2 * k) + Rational::new(k + t, 2) - 1
}

/// Two disjoint independent sets with raw and clipped sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentPair {
    pub set_a: Vec<u32>,
    pub set_b: Vec<u32>,
    pub gamma: u32,
    pub delta: u32,
    #[serde(with = "crate::rational::small")]
    pub gamma_clip: Rational,
    #[serde(with = "crate::rational::small")]
    pub delta_clip: Rational,
    pub optimality: Optimality,
}

impl IndependentPair {
    /// Checks both sets and orders them so that `gamma >= delta`. The result
    /// is marked heuristic; exact searches upgrade it.
    pub fn from_sets(design: &Design, mut a: Vec<u32>, mut b: Vec<u32>) -> Result<Self> {
        let v = design.v();
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        if let Some(&p) = a.iter().chain(&b).find(|&&p| p >= v) {
            return Err(Error::InvalidParameters(format!("point {p} outside 0..{v}")));
        }
        if let Some(&p) = a.iter().find(|p| b.binary_search(p).is_ok()) {
            return Err(Error::OverlappingSets(p));
        }
        for s in [&a, &b] {
            if !is_independent(design, s) {
                return Err(Error::InvalidParameters(format!(
                    "{s:?} contains a block and is not independent"
                )));
            }
        }
        if b.len() > a.len() || (b.len() == a.len() && b < a) {
            std::mem::swap(&mut a, &mut b);
        }
        let threshold = clip_threshold(v, design.t(), design.k());
        let clip = |n: usize| Rational::from_integer(n as i64).min(threshold);
        Ok(IndependentPair {
            gamma: a.len() as u32,
            delta: b.len() as u32,
            gamma_clip: clip(a.len()),
            delta_clip: clip(b.len()),
            set_a: a,
            set_b: b,
            optimality: Optimality::Heuristic,
        })
    }

    /// The clipped objective `gamma' + delta'`.
    pub fn objective(&self) -> Rational {
        self.gamma_clip + self.delta_clip
    }

    /// Ordering used to rank pairs: clipped sum, then raw sum (both larger
    /// first), then the lexicographically least sets.
    fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .objective()
            .cmp(&self.objective())
            .then((other.gamma + other.delta).cmp(&(self.gamma + self.delta)))
            .then_with(|| (&self.set_a, &self.set_b).cmp(&(&other.set_a, &other.set_b)))
    }
}

fn exact_pair(design: &Design) -> IndependentPair {
    let v = design.v();
    let size = 1usize << v;
    let blocks = design.block_masks();
    let independent: Vec<bool> = (0..size as u64)
        .map(|m| !blocks.iter().any(|&b| b & !m == 0))
        .collect();
    // best[m]: lexicographically least maximum independent subset of m
    let mut best = vec![0u64; size];
    for m in 1..size {
        if independent[m] {
            best[m] = m as u64;
            continue;
        }
        let mut choice: Option<u64> = None;
        let mut bits = m as u64;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            bits ^= low;
            let c = best[m ^ low as usize];
            choice = Some(match choice {
                None => c,
                Some(cur) => match c.count_ones().cmp(&cur.count_ones()) {
                    Ordering::Greater => c,
                    Ordering::Less => cur,
                    Ordering::Equal => {
                        if lex_cmp(c, cur) == Ordering::Less { c } else { cur }
                    }
                },
            });
        }
        best[m] = choice.unwrap_or(0);
    }
    let full = size as u64 - 1;
    let mut top: Option<IndependentPair> = None;
    for a in 0..size as u64 {
        if !independent[a as usize] {
            continue;
        }
        let b = best[(full ^ a) as usize];
        if b.count_ones() > a.count_ones() {
            // the swapped pair is met from the other side
            continue;
        }
        let cand = IndependentPair::from_sets(design, mask_points(a), mask_points(b))
            .expect("subset search yields valid pairs");
        if top.as_ref().is_none_or(|t| cand.rank_cmp(t) == Ordering::Less) {
            top = Some(cand);
        }
    }
    let mut pair = top.expect("the empty pair always exists");
    pair.optimality = Optimality::Exact;
    pair
}

fn heuristic_pair(design: &Design) -> IndependentPair {
    let v = design.v();
    let incidence = design.incidence();
    let mut candidates = Vec::new();
    for seed in 0..PAIR_HEURISTIC_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<u32> = (0..v).collect();
        order.shuffle(&mut rng);
        let a = greedy_from(design, &incidence, &order);
        order.shuffle(&mut rng);
        order.retain(|p| a.binary_search(p).is_err());
        let b = greedy_from(design, &incidence, &order);
        if v <= MIS_EXACT_CAP {
            // alternate exact completions inside each other's complement
            let full = full_mask(v);
            let mut a = a.iter().fold(0u64, |m, &p| m | 1 << p);
            for _ in 0..2 {
                let b = exact_mis_within(design, full & !a);
                candidates.push((mask_points(a), mask_points(b)));
                a = exact_mis_within(design, full & !b);
                candidates.push((mask_points(a), mask_points(b)));
            }
        }
        candidates.push((a, b));
    }
    if v <= MIS_EXACT_CAP {
        let a = exact_mis_within(design, full_mask(v));
        let b = exact_mis_within(design, full_mask(v) & !a);
        candidates.push((mask_points(a), mask_points(b)));
    }
    candidates
        .into_iter()
        .map(|(a, b)| IndependentPair::from_sets(design, a, b).expect("greedy sets are valid"))
        .min_by(|x, y| x.rank_cmp(y))
        .expect("at least one restart")
}

/// A maximum independent pair: exact for `v <= PAIR_EXACT_CAP`, otherwise
/// the best of seeded greedy restarts (marked heuristic).
pub fn independent_pair(design: &Design) -> IndependentPair {
    if design.v() <= PAIR_EXACT_CAP {
        exact_pair(design)
    } else {
        heuristic_pair(design)
    }
}

/// Bounds a labeling built from a disjoint independent pair can guarantee.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairLabelingBounds {
    pub minsum_lower: i64,
    pub maxsum_upper: i64,
    pub diffsum_upper: i64,
}

/// Smallest sum of a block with at most `k-1` points among ranks `0..a-1`
/// when the rest carry ranks `a` and up.
fn low_end_guarantee(a: i64, k: i64) -> i64 {
    (0..=(k - 1).min(a))
        .map(|j| binomial(j as u64, 2) as i64 + (k - j) * a + binomial((k - j) as u64, 2) as i64)
        .min()
        .unwrap_or(0)
}

/// Guarantees of the labeling produced by [`labeling_from_pair`] for sets of
/// sizes `alpha` (low ranks) and `beta` (high ranks).
pub fn pair_labeling_bounds(v: u32, k: u32, alpha: u32, beta: u32) -> PairLabelingBounds {
    let (v, k) = (v as i64, k as i64);
    let minsum_lower = low_end_guarantee(alpha as i64, k);
    let maxsum_upper = k * (v - 1) - low_end_guarantee(beta as i64, k);
    PairLabelingBounds {
        minsum_lower,
        maxsum_upper,
        diffsum_upper: maxsum_upper - minsum_lower,
    }
}

/// Bounds implied by the independence number and, optionally, a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndepBounds {
    pub alpha: u32,
    pub minsum_upper: i64,
    pub maxsum_lower: i64,
    pub diffsum_lower: i64,
    /// `k(v+k-2-delta'-gamma')`.
    #[serde(with = "crate::rational::small_opt")]
    pub pair_diffsum_lower: Option<Rational>,
    /// Independence number needed to reach the basic MinSum bound.
    #[serde(with = "crate::rational::small")]
    pub alpha_threshold: Rational,
    pub alpha_meets_threshold: bool,
    /// Clip threshold; both pair sizes reaching it is what the basic DiffSum
    /// bound asks for.
    #[serde(with = "crate::rational::small")]
    pub pair_threshold: Rational,
    /// Whether the pair leaves the basic DiffSum bound attainable.
    pub pair_allows_diffsum_bound: Option<bool>,
    pub pair_labeling: Option<PairLabelingBounds>,
}

pub fn indep_bounds(design: &Design, alpha: u32, pair: Option<&IndependentPair>) -> IndepBounds {
    let (v, t, k) = (design.v() as i64, design.t() as i64, design.k() as i64);
    let a = alpha as i64;
    let ck2 = k * (k - 1) / 2;
    let pair_diffsum_lower =
        pair.map(|p| Rational::from_integer(k * (v + k - 2)) - (p.gamma_clip + p.delta_clip) * k);
    let alpha_threshold =
        Rational::new(v * (k - t + 1), 2 * k) + Rational::new(k + t - 3, 2);
    let basic_diff = Rational::from_integer((v - k) * (t - 1));
    IndepBounds {
        alpha,
        minsum_upper: k * a - ck2,
        maxsum_lower: k * (v - 1 - a) + ck2,
        diffsum_lower: k * (v + k - 2 - 2 * a),
        pair_diffsum_lower,
        alpha_meets_threshold: Rational::from_integer(a) >= alpha_threshold,
        alpha_threshold,
        pair_threshold: clip_threshold(design.v(), design.t(), design.k()),
        pair_allows_diffsum_bound: pair_diffsum_lower.map(|d| d <= basic_diff),
        pair_labeling: pair.map(|p| {
            pair_labeling_bounds(design.v(), design.k(), p.gamma, p.delta)
        }),
    }
}

/// `set_a` gets ranks `0..alpha`, `set_b` gets `v-beta..v`, the remaining
/// points get the middle ranks in ascending point order.
pub fn labeling_from_pair(design: &Design, pair: &IndependentPair) -> Result<Labeling> {
    let v = design.v();
    let mut role = vec![0u8; v as usize];
    for (tag, set) in [(1u8, &pair.set_a), (2u8, &pair.set_b)] {
        for &p in set.iter() {
            match role.get_mut(p as usize) {
                None => {
                    return Err(Error::InvalidParameters(format!("point {p} outside 0..{v}")))
                }
                Some(r) if *r != 0 => return Err(Error::OverlappingSets(p)),
                Some(r) => *r = tag,
            }
        }
    }
    let mut order: Vec<u32> = pair.set_a.clone();
    order.sort_unstable();
    order.extend((0..v).filter(|&p| role[p as usize] == 0));
    let mut high = pair.set_b.clone();
    high.sort_unstable();
    order.extend(high);
    Labeling::from_order(&order)
}
