//! Storage-layer view of a labeled design: every block is a storage node
//! holding the items (points) it contains, and item popularity is a
//! deterministic function of rank.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{binomial, Design, Labeling};
use crate::error::{Error, Result};

/// Largest number of block subsets `frc_rate` will enumerate.
pub const FRC_SUBSET_CAP: u64 = 1_000_000;

/// Denominator used when Zipf weights with a fractional exponent are
/// rounded to rationals.
pub const ZIPF_DENOMINATOR: i64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProfileKind {
    Zipf { exponent: f64 },
    Uniform,
    /// `w(r) = v - 1 - r`; loads are then block sums of the reversed labeling.
    Linear,
    Custom,
}

/// Weight of each rank; rank 0 is the most popular item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessProfile {
    pub kind: ProfileKind,
    #[serde(with = "crate::rational::big_vec")]
    pub weights: Vec<BigRational>,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl AccessProfile {
    pub fn uniform(v: u32) -> Self {
        AccessProfile {
            kind: ProfileKind::Uniform,
            weights: vec![BigRational::one(); v as usize],
        }
    }

    pub fn linear(v: u32) -> Self {
        AccessProfile {
            kind: ProfileKind::Linear,
            weights: (0..v as i64).rev().map(int).collect(),
        }
    }

    /// `1/(r+1)^s`, exact for integer `s`; otherwise rounded to a multiple
    /// of `1/ZIPF_DENOMINATOR`.
    pub fn zipf(v: u32, exponent: f64) -> Result<Self> {
        if !exponent.is_finite() || exponent < 0.0 {
            return Err(Error::Profile(format!(
                "zipf exponent must be finite and nonnegative, got {exponent}"
            )));
        }
        let weights = if exponent.fract() == 0.0 && exponent <= u32::MAX as f64 {
            let s = exponent as u32;
            (1..=v as i64)
                .map(|n| BigRational::new(BigInt::one(), BigInt::from(n).pow(s)))
                .collect()
        } else {
            (1..=v)
                .map(|n| {
                    let w = (n as f64).powf(-exponent) * ZIPF_DENOMINATOR as f64;
                    BigRational::new(BigInt::from(w.round() as i64), BigInt::from(ZIPF_DENOMINATOR))
                })
                .collect()
        };
        Ok(AccessProfile {
            kind: ProfileKind::Zipf { exponent },
            weights,
        })
    }

    pub fn custom(weights: Vec<BigRational>) -> Result<Self> {
        let p = AccessProfile {
            kind: ProfileKind::Custom,
            weights,
        };
        p.check()?;
        Ok(p)
    }

    /// Parses `uniform`, `linear` or `zipf:<s>`.
    pub fn from_spec(spec: &str, v: u32) -> Result<Self> {
        match spec {
            "uniform" => Ok(Self::uniform(v)),
            "linear" => Ok(Self::linear(v)),
            _ => {
                let s = spec
                    .strip_prefix("zipf:")
                    .ok_or_else(|| Error::Profile(format!("unknown profile {spec:?}")))?;
                let e: f64 = s
                    .parse()
                    .map_err(|_| Error::Profile(format!("bad zipf exponent {s:?}")))?;
                Self::zipf(v, e)
            }
        }
    }

    /// Rebuilds the weights for order `v` from a profile read from a file.
    /// Only custom profiles carry their own weights.
    pub fn from_file_form(file: &ProfileFile, v: u32) -> Result<Self> {
        match file.kind.as_str() {
            "uniform" => Ok(Self::uniform(v)),
            "linear" => Ok(Self::linear(v)),
            "zipf" => Self::zipf(
                v,
                file.exponent
                    .ok_or_else(|| Error::Profile("zipf profile needs an exponent".into()))?,
            ),
            "custom" => {
                let w = file
                    .weights
                    .clone()
                    .ok_or_else(|| Error::Profile("custom profile needs weights".into()))?;
                let p = Self::custom(w)?;
                if p.weights.len() != v as usize {
                    return Err(Error::Profile(format!(
                        "profile has {} weights for {v} points",
                        p.weights.len()
                    )));
                }
                Ok(p)
            }
            k => Err(Error::Profile(format!("unknown profile kind {k:?}"))),
        }
    }

    pub fn check(&self) -> Result<()> {
        if let Some(r) = self.weights.iter().position(|w| w.is_negative()) {
            return Err(Error::Profile(format!("weight of rank {r} is negative")));
        }
        if let Some(r) = self.weights.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::Profile(format!(
                "weights must be nonincreasing in rank; rank {} outweighs rank {r}",
                r + 1
            )));
        }
        Ok(())
    }

    pub fn total(&self) -> BigRational {
        self.weights.iter().sum()
    }
}

/// On-disk profile: `{"kind": .., "exponent"?: .., "weights"?: [{"num","den"}, ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_weights")]
    pub weights: Option<Vec<BigRational>>,
}

mod opt_weights {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "crate::rational::big_vec")] Vec<BigRational>);

    pub fn serialize<S: Serializer>(w: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        w.clone().map(W).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRational>>, D::Error> {
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    /// Load of each node, in block order.
    #[serde(with = "crate::rational::big_vec")]
    pub per_node_load: Vec<BigRational>,
    #[serde(with = "crate::rational::big")]
    pub total: BigRational,
    #[serde(with = "crate::rational::big")]
    pub max: BigRational,
    #[serde(with = "crate::rational::big")]
    pub min: BigRational,
    #[serde(with = "crate::rational::big")]
    pub spread: BigRational,
    #[serde(with = "crate::rational::big")]
    pub mean: BigRational,
    /// Population variance.
    #[serde(with = "crate::rational::big")]
    pub variance: BigRational,
    /// Standard deviation over mean; zero when the mean is zero.
    pub coefficient_of_variation: f64,
}

impl LoadReport {
    pub fn from_loads(loads: Vec<BigRational>) -> Result<Self> {
        if loads.is_empty() {
            return Err(Error::EmptyDesign);
        }
        let n = int(loads.len() as i64);
        let total: BigRational = loads.iter().sum();
        let max = loads.iter().max().cloned().expect("nonempty");
        let min = loads.iter().min().cloned().expect("nonempty");
        let mean = &total / &n;
        let variance = loads
            .iter()
            .map(|l| {
                let d = l - &mean;
                &d * &d
            })
            .sum::<BigRational>()
            / &n;
        let as_f64 = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        let coefficient_of_variation = if mean.is_zero() {
            0.0
        } else {
            as_f64(&variance).sqrt() / as_f64(&mean)
        };
        Ok(LoadReport {
            spread: &max - &min,
            per_node_load: loads,
            total,
            max,
            min,
            mean,
            variance,
            coefficient_of_variation,
        })
    }

    /// `node,load_num,load_den,load` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,load_num,load_den,load\n");
        for (i, l) in self.per_node_load.iter().enumerate() {
            out.push_str(&format!(
                "{i},{},{},{}\n",
                l.numer(),
                l.denom(),
                l.to_f64().unwrap_or(f64::NAN)
            ));
        }
        out
    }
}

/// Node load = sum of the weights of the ranks of the node's items.
pub fn access_load(design: &Design, labeling: &Labeling, profile: &AccessProfile) -> Result<LoadReport> {
    labeling.check_for(design)?;
    if profile.weights.len() != design.v() as usize {
        return Err(Error::Profile(format!(
            "profile has {} weights for {} points",
            profile.weights.len(),
            design.v()
        )));
    }
    profile.check()?;
    let loads = design
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&p| &profile.weights[labeling.rank(p) as usize]).sum())
        .collect();
    LoadReport::from_loads(loads)
}

/// FRC rate: the fewest distinct items any `read_k` nodes hold together.
pub fn frc_rate(design: &Design, read_k: u32) -> Result<u32> {
    let b = design.block_count();
    if read_k == 0 || read_k as usize > b {
        return Err(Error::InvalidParameters(format!(
            "read_k must be in 1..={b}, got {read_k}"
        )));
    }
    let subsets = binomial(b as u64, read_k as u64);
    if subsets > FRC_SUBSET_CAP {
        return Err(Error::ExactnessCap {
            what: "number of block subsets for frc_rate",
            value: subsets,
            cap: FRC_SUBSET_CAP,
            hint: "lower read_k or use a smaller design",
        });
    }
    let words = (design.v() as usize).div_ceil(64);
    let masks: Vec<Vec<u64>> = design
        .blocks()
        .iter()
        .map(|blk| {
            let mut m = vec![0u64; words];
            for &p in blk {
                m[p as usize / 64] |= 1 << (p % 64);
            }
            m
        })
        .collect();

    fn rec(masks: &[Vec<u64>], from: usize, left: u32, acc: &[u64], best: &mut u32) {
        let size: u32 = acc.iter().map(|w| w.count_ones()).sum();
        if size >= *best {
            return;
        }
        if left == 0 {
            *best = size;
            return;
        }
        for i in from..=masks.len() - left as usize {
            let next: Vec<u64> = acc.iter().zip(&masks[i]).map(|(a, m)| a | m).collect();
            rec(masks, i + 1, left - 1, &next, best);
        }
    }

    let rate = (0..=b - read_k as usize)
        .into_par_iter()
        .map(|first| {
            let mut best = u32::MAX;
            rec(&masks, first + 1, read_k - 1, &masks[first], &mut best);
            best
        })
        .min()
        .expect("at least one subset");
    Ok(rate)
}

/// Parity stripes through each disk in the declustered-RAID reading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub stripes: Vec<u64>,
    pub uniform: bool,
    /// The common count when uniform.
    pub c: Option<u64>,
}

pub fn recovery_uniformity(design: &Design) -> RecoveryReport {
    let mut stripes = vec![0u64; design.v() as usize];
    for b in design.blocks() {
        for &p in b {
            stripes[p as usize] += 1;
        }
    }
    let c = stripes
        .first()
        .copied()
        .filter(|&f| stripes.iter().all(|&s| s == f));
    RecoveryReport {
        uniform: c.is_some(),
        stripes,
        c,
    }
}
