//! Labeling optimization: an exhaustive oracle for tiny orders, an exact
//! branch and bound, seeded simulated annealing, and a combined
//! design-and-labeling search for triple systems with prescribed metrics.

mod anneal;
mod bb;
mod exhaustive;
mod table;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::design::{validate, Design, Labeling};
use crate::error::{Error, Result};
use crate::independence::{independence_number, indep_bounds, MIS_EXACT_CAP};
use crate::metrics::{basic_bounds, metric_report, sts_diffsum_lower, MetricReport};
use crate::rational::Rational;

pub use anneal::{anneal_labeling, AnnealConfig, Initialization};
pub use bb::{bb_labeling, BbConfig};
pub use exhaustive::{exhaustive_labeling, EXHAUSTIVE_CAP};
pub use table::{table_rows, table_search, table_search_outcome, TableOutcome, TableRow, TableStatus};

/// Whether a result is certified optimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimality {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    #[serde(rename = "max-minsum")]
    MaxMinSum,
    #[serde(rename = "min-diffsum")]
    MinDiffSum,
    #[serde(rename = "min-ratiosum")]
    MinRatioSum,
}

impl Objective {
    pub const ALL: [Objective; 3] = [
        Objective::MaxMinSum,
        Objective::MinDiffSum,
        Objective::MinRatioSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Objective::MaxMinSum => "max-minsum",
            Objective::MinDiffSum => "min-diffsum",
            Objective::MinRatioSum => "min-ratiosum",
        }
    }

    /// The metric this objective optimizes.
    pub fn value(self, report: &MetricReport) -> Rational {
        match self {
            Objective::MaxMinSum => Rational::from_integer(report.min_sum),
            Objective::MinDiffSum => Rational::from_integer(report.diff_sum),
            Objective::MinRatioSum => report
                .ratio_sum
                .unwrap_or_else(|| Rational::from_integer(i64::MAX)),
        }
    }

    /// The value turned into something to minimize.
    pub fn cost(self, report: &MetricReport) -> Rational {
        match self {
            Objective::MaxMinSum => -self.value(report),
            _ => self.value(report),
        }
    }

    /// Value no labeling of `design` can beat, from the closed-form and
    /// independence bounds that apply.
    pub fn bound(self, design: &Design) -> Option<Rational> {
        let b = ValidBounds::of(design);
        match self {
            Objective::MaxMinSum => b.minsum_upper.map(Rational::from_integer),
            Objective::MinDiffSum => Some(Rational::from_integer(b.diffsum_lower)),
            Objective::MinRatioSum => b.ratiosum_lower,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameters(format!(
                    "unknown objective {s:?}; expected max-minsum, min-diffsum or min-ratiosum"
                ))
            })
    }
}

/// Outcome of a labeling search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub labeling: Labeling,
    pub report: MetricReport,
    pub objective: Objective,
    pub optimality: Optimality,
    /// For exact results, the optimum value itself, proven by the search.
    #[serde(with = "crate::rational::small_opt")]
    pub certificate: Option<Rational>,
    pub rng_seed: Option<u64>,
    pub iterations: u64,
    pub method: String,
}

impl SearchResult {
    /// Evaluates `labeling` under `objective`, as an uncertified result.
    pub fn new(
        design: &Design,
        labeling: Labeling,
        objective: Objective,
        method: &str,
    ) -> Result<Self> {
        let report = metric_report(design, &labeling)?;
        Ok(SearchResult {
            labeling,
            report,
            objective,
            optimality: Optimality::Heuristic,
            certificate: None,
            rng_seed: None,
            iterations: 0,
            method: method.to_string(),
        })
    }

    pub(crate) fn certify(mut self) -> Self {
        self.optimality = Optimality::Exact;
        self.certificate = Some(self.objective.value(&self.report));
        self
    }

    pub fn value(&self) -> Rational {
        self.objective.value(&self.report)
    }

    /// Recomputes the report from the labeling.
    pub fn is_consistent(&self, design: &Design) -> bool {
        metric_report(design, &self.labeling).as_ref() == Ok(&self.report)
    }
}

/// Bounds valid for `design` itself: closed forms when it is a Steiner
/// system, the triple-system refinement for STS, and independence bounds
/// whenever the independence number is computable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidBounds {
    pub alpha: Option<u32>,
    pub minsum_upper: Option<i64>,
    pub maxsum_lower: Option<i64>,
    pub diffsum_lower: i64,
    pub ratiosum_lower: Option<Rational>,
}

impl ValidBounds {
    pub fn of(design: &Design) -> Self {
        let (v, t, k) = (design.v(), design.t(), design.k());
        let mut minsum_upper: Option<i64> = None;
        let mut maxsum_lower: Option<i64> = None;
        let mut diffsum_lower = 0i64;
        let mut ratiosum_lower = None;
        let tighten_min = |cur: &mut Option<i64>, x: i64| *cur = Some(cur.map_or(x, |c| c.min(x)));
        let tighten_max = |cur: &mut Option<i64>, x: i64| *cur = Some(cur.map_or(x, |c| c.max(x)));

        let alpha = (v <= MIS_EXACT_CAP && !design.is_empty())
            .then(|| independence_number(design).ok())
            .flatten();
        if let Some(a) = alpha {
            let ib = indep_bounds(design, a, None);
            tighten_min(&mut minsum_upper, ib.minsum_upper);
            tighten_max(&mut maxsum_lower, ib.maxsum_lower);
            diffsum_lower = diffsum_lower.max(ib.diffsum_lower);
        }
        if !design.is_empty() && validate(design).is_steiner {
            if let Ok(sheet) = basic_bounds(t, k, v) {
                tighten_min(&mut minsum_upper, sheet.minsum_upper);
                tighten_max(&mut maxsum_lower, sheet.maxsum_lower);
                diffsum_lower = diffsum_lower.max(sheet.best_diffsum_lower());
                ratiosum_lower = Some(sheet.best_ratiosum_lower());
                if t == 2 && k == 3 {
                    if let Ok(d) = sts_diffsum_lower(v) {
                        diffsum_lower = diffsum_lower.max(d);
                    }
                }
            }
        }
        if let (Some(lo), Some(hi)) = (maxsum_lower, minsum_upper) {
            diffsum_lower = diffsum_lower.max(lo - hi);
            let r = Rational::new(lo, hi.max(1));
            ratiosum_lower = Some(ratiosum_lower.map_or(r, |c: Rational| c.max(r)));
        }
        ValidBounds {
            alpha,
            minsum_upper,
            maxsum_lower,
            diffsum_lower: diffsum_lower.max(0),
            ratiosum_lower,
        }
    }

    /// Every bound the report breaks, as readable lines.
    pub fn violations(&self, report: &MetricReport) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(u) = self.minsum_upper {
            if report.min_sum > u {
                out.push(format!("MinSum {} exceeds upper bound {u}", report.min_sum));
            }
        }
        if let Some(l) = self.maxsum_lower {
            if report.max_sum < l {
                out.push(format!("MaxSum {} below lower bound {l}", report.max_sum));
            }
        }
        if report.diff_sum < self.diffsum_lower {
            out.push(format!(
                "DiffSum {} below lower bound {}",
                report.diff_sum, self.diffsum_lower
            ));
        }
        if let (Some(l), Some(r)) = (self.ratiosum_lower, report.ratio_sum) {
            if r < l {
                out.push(format!("RatioSum {r} below lower bound {l}"));
            }
        }
        out
    }
}
