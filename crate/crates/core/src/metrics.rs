//! Block sums, the four sum metrics, and the closed-form bounds on them.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::design::{Design, Labeling};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Rank sum of every block, in the design's canonical block order.
pub fn block_sums(design: &Design, labeling: &Labeling) -> Vec<i64> {
    let ranks = labeling.ranks();
    design
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&p| ranks[p as usize] as i64).sum())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricReport {
    pub min_sum: i64,
    pub max_sum: i64,
    pub diff_sum: i64,
    /// `max_sum / min_sum`; `None` (serialized as `"undefined"`) when the
    /// smallest block sum is zero.
    #[serde(with = "ratio_or_undefined")]
    pub ratio_sum: Option<Rational>,
    pub argmin_block: usize,
    pub argmax_block: usize,
}

impl MetricReport {
    pub fn from_sums(sums: &[i64]) -> Result<Self> {
        let (argmin, &min) = sums
            .iter()
            .enumerate()
            .min_by_key(|&(i, s)| (*s, i))
            .ok_or(Error::EmptyDesign)?;
        let (argmax, &max) = sums
            .iter()
            .enumerate()
            .max_by_key(|&(i, s)| (*s, std::cmp::Reverse(i)))
            .ok_or(Error::EmptyDesign)?;
        Ok(MetricReport {
            min_sum: min,
            max_sum: max,
            diff_sum: max - min,
            ratio_sum: (min > 0).then(|| Rational::new(max, min)),
            argmin_block: argmin,
            argmax_block: argmax,
        })
    }
}

mod ratio_or_undefined {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Defined(#[serde(with = "rational::small")] Rational),
        Undefined(String),
    }

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => Repr::Defined(*r).serialize(s),
            None => Repr::Undefined("undefined".into()).serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Defined(r) => Ok(Some(r)),
            Repr::Undefined(s) if s == "undefined" => Ok(None),
            Repr::Undefined(s) => Err(serde::de::Error::custom(format!("unexpected {s:?}"))),
        }
    }
}

pub fn metric_report(design: &Design, labeling: &Labeling) -> Result<MetricReport> {
    labeling.check_for(design)?;
    MetricReport::from_sums(&block_sums(design, labeling))
}

/// True when a Steiner triple system of order `v` exists (`v = 1, 3 mod 6`).
pub fn sts_admissible(v: u32) -> bool {
    v % 6 == 1 || v % 6 == 3
}

/// Extra bounds that hold for Steiner triple systems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StsRefined {
    pub diffsum_lower: i64,
    #[serde(with = "rational::small")]
    pub ratiosum_lower: Rational,
}

/// Bounds on the sum metrics of any labeling of an `S(t,k,v)`.
///
/// These hold for Steiner systems only; packings are bounded through their
/// independence number instead (see `independence::indep_bounds`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSheet {
    pub t: u32,
    pub k: u32,
    pub v: u32,
    pub minsum_upper: i64,
    pub maxsum_lower: i64,
    pub diffsum_lower: i64,
    #[serde(with = "rational::small")]
    pub ratiosum_lower: Rational,
    pub sts_refined: Option<StsRefined>,
    pub steiner_only: bool,
}

pub fn basic_bounds(t: u32, k: u32, v: u32) -> Result<BoundSheet> {
    if t == 0 || t >= k || k > v {
        return Err(Error::InvalidParameters(format!(
            "need 0 < t < k <= v, got t={t} k={k} v={v}"
        )));
    }
    let (t, k, v) = (t as i64, k as i64, v as i64);
    let min_twice = v * (k - t + 1) + k * (t - 2);
    let max_twice = v * (k + t - 1) - k * t;
    let sts_refined = (t == 2 && k == 3).then(|| {
        if v >= 13 && sts_admissible(v as u32) {
            StsRefined {
                diffsum_lower: v + 1,
                ratiosum_lower: Rational::new(2 * v + 1, v),
            }
        } else {
            StsRefined {
                diffsum_lower: v,
                ratiosum_lower: Rational::from_integer(2),
            }
        }
    });
    Ok(BoundSheet {
        t: t as u32,
        k: k as u32,
        v: v as u32,
        minsum_upper: min_twice.div_euclid(2),
        maxsum_lower: (max_twice + 1).div_euclid(2),
        diffsum_lower: (v - k) * (t - 1),
        ratiosum_lower: Rational::new(max_twice, min_twice),
        sts_refined,
        steiner_only: true,
    })
}

impl BoundSheet {
    /// Strongest available lower bound on DiffSum.
    pub fn best_diffsum_lower(&self) -> i64 {
        self.sts_refined
            .as_ref()
            .map_or(self.diffsum_lower, |r| r.diffsum_lower.max(self.diffsum_lower))
    }

    /// Strongest available lower bound on RatioSum.
    pub fn best_ratiosum_lower(&self) -> Rational {
        self.sts_refined
            .as_ref()
            .map_or(self.ratiosum_lower, |r| r.ratiosum_lower.max(self.ratiosum_lower))
    }
}

/// Upper bound on the number of pairs usable by a triple packing on
/// `{0..x-1}` whose triples all sum to at most `x - 1`.
pub fn phi(x: u32) -> Rational {
    let x = x as i64;
    let correction = match x % 6 {
        0 | 1 | 4 => Rational::from_integer(0),
        2 | 3 => Rational::new(1, 2),
        _ => Rational::from_integer(1),
    };
    Rational::new(x * (x - 1), 4) - Rational::from_integer(x / 6) - correction
}

/// Maximum number of triples in such a packing: `floor(phi(x) / 3)`.
pub fn triple_bound(x: u32) -> i64 {
    rational::floor(&(phi(x) / 3))
}

/// Lower bound on the DiffSum of any STS(v): `v` for orders 7 and 9, `v + 1`
/// from 13 on.
pub fn sts_diffsum_lower(v: u32) -> Result<i64> {
    if !sts_admissible(v) || v < 7 {
        return Err(Error::Inadmissible {
            v,
            reason: "an STS needs v = 1 or 3 (mod 6) and v >= 7 here".into(),
        });
    }
    Ok(if v <= 9 { v as i64 } else { v as i64 + 1 })
}
