use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::design::{Design, Labeling};
use crate::error::{Error, Result};
use crate::independence::{independent_pair, labeling_from_pair};
use crate::metrics::{metric_report, MetricReport};
use crate::rational::Rational;
use crate::search::{Objective, SearchResult};

/// Where the walk starts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Initialization {
    /// The better of the identity and the labeling built from an
    /// independent pair.
    Auto,
    Identity,
    Given(Labeling),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealConfig {
    pub seed: u64,
    /// Number of proposed swaps.
    pub budget: u64,
    /// Starting temperature; `None` means `k * v`.
    pub start_temperature: Option<f64>,
    pub cooling: f64,
    pub init: Initialization,
}

impl AnnealConfig {
    pub fn new(seed: u64, budget: u64) -> Self {
        AnnealConfig {
            seed,
            budget,
            start_temperature: None,
            cooling: 0.999,
            init: Initialization::Auto,
        }
    }
}

/// Primary objective cost plus the number of blocks sitting at either
/// extreme, which breaks plateaus. Compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Score {
    primary: Rational,
    ties: usize,
}

fn score(objective: Objective, sums: &[i64]) -> Score {
    let report = MetricReport::from_sums(sums).expect("nonempty design");
    let ties = sums
        .iter()
        .filter(|&&s| s == report.min_sum || s == report.max_sum)
        .count();
    Score {
        primary: objective.cost(&report),
        ties,
    }
}

/// Energy on the scale of rank sums: ratios are multiplied by `v`, and the
/// tie count is weighted below one primary unit.
fn energy(s: &Score, v: f64, b: f64, objective: Objective) -> f64 {
    let p = *s.primary.numer() as f64 / *s.primary.denom() as f64;
    let p = if objective == Objective::MinRatioSum { p * v } else { p };
    p + s.ties as f64 / (b + 1.0)
}

fn initial(design: &Design, objective: Objective, init: &Initialization) -> Result<Labeling> {
    let v = design.v();
    Ok(match init {
        Initialization::Identity => Labeling::identity(v),
        Initialization::Given(l) => {
            l.check_for(design)?;
            l.clone()
        }
        Initialization::Auto => {
            let id = Labeling::identity(v);
            let pair = labeling_from_pair(design, &independent_pair(design))?;
            let cost = |l: &Labeling| objective.cost(&metric_report(design, l).expect("nonempty"));
            if cost(&pair) < cost(&id) { pair } else { id }
        }
    })
}

/// Simulated annealing over rank swaps with geometric cooling. Equal-energy
/// moves are taken with probability one half. Returns the best labeling
/// seen, so the result is never worse than the start.
pub fn anneal_labeling(design: &Design, objective: Objective, config: &AnnealConfig) -> Result<SearchResult> {
    if design.is_empty() {
        return Err(Error::EmptyDesign);
    }
    let v = design.v() as usize;
    let start = initial(design, objective, &config.init)?;
    let mut ranks = start.ranks().to_vec();
    let incidence = design.incidence();
    let blocks = design.blocks();
    let mut sums: Vec<i64> = blocks
        .iter()
        .map(|b| b.iter().map(|&p| ranks[p as usize] as i64).sum())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (vf, bf) = (v as f64, blocks.len() as f64);
    let mut temperature = config
        .start_temperature
        .unwrap_or(design.k() as f64 * vf);

    let mut cur = score(objective, &sums);
    let mut cur_e = energy(&cur, vf, bf, objective);
    let mut best = (cur.clone(), ranks.clone());

    for _ in 0..config.budget {
        if v < 2 {
            break;
        }
        let p = rng.gen_range(0..v);
        let mut q = rng.gen_range(0..v - 1);
        if q >= p {
            q += 1;
        }
        let delta = ranks[q] as i64 - ranks[p] as i64;
        for &b in &incidence[p] {
            sums[b] += delta;
        }
        for &b in &incidence[q] {
            sums[b] -= delta;
        }
        ranks.swap(p, q);

        let next = score(objective, &sums);
        let next_e = energy(&next, vf, bf, objective);
        let accept = if next < cur {
            true
        } else if next == cur {
            rng.gen_bool(0.5)
        } else {
            let d = (next_e - cur_e).max(0.0);
            temperature > 0.0 && rng.gen::<f64>() < (-d / temperature).exp()
        };
        if accept {
            if next < best.0 {
                best = (next.clone(), ranks.clone());
            }
            cur = next;
            cur_e = next_e;
        } else {
            ranks.swap(p, q);
            for &b in &incidence[p] {
                sums[b] += delta;
            }
            for &b in &incidence[q] {
                sums[b] -= delta;
            }
        }
        temperature *= config.cooling;
    }

    let labeling = Labeling::new(best.1)?;
    let mut result = SearchResult::new(design, labeling, objective, "anneal")?;
    result.rng_seed = Some(config.seed);
    result.iterations = config.budget;
    if let Some(bound) = objective.bound(design) {
        let cost = objective.cost(&result.report);
        let bound_cost = if objective == Objective::MaxMinSum { -bound } else { bound };
        if cost == bound_cost {
            result = result.certify();
        }
    }
    Ok(result)
}
