use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::design::{binomial, Design};
use crate::error::{Error, Result};

/// Which sum class to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumClass {
    /// Class index `0 <= w < v`.
    Raw(u32),
    /// Signed index `-C(t+2,2) + 1 <= s < C(t+1,2)`; negative values select
    /// class `v + s`. Only this form carries the MinSum/MaxSum guarantee.
    Signed(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumClassParams {
    pub t: u32,
    pub v: u32,
    pub sigma: SumClass,
}

impl SumClassParams {
    pub fn signed(t: u32, v: u32, sigma: i64) -> Self {
        SumClassParams {
            t,
            v,
            sigma: SumClass::Signed(sigma),
        }
    }

    pub fn raw(t: u32, v: u32, class: u32) -> Self {
        SumClassParams {
            t,
            v,
            sigma: SumClass::Raw(class),
        }
    }

    /// Signed window `(lo, hi)` with `lo <= sigma < hi`.
    pub fn signed_window(t: u32) -> (i64, i64) {
        let t = t as u64;
        (
            1 - binomial(t + 2, 2) as i64,
            binomial(t + 1, 2) as i64,
        )
    }

    /// Raw class index in `0..v`, after checking every precondition.
    pub fn class_index(&self) -> Result<u32> {
        let (t, v) = (self.t, self.v);
        if t == 0 || v <= t + 1 {
            return Err(Error::InvalidParameters(format!(
                "need t >= 1 and v > t + 1, got t={t} v={v}"
            )));
        }
        if v.gcd(&(t + 1)) != 1 {
            return Err(Error::InvalidParameters(format!(
                "gcd(v, t+1) = gcd({v}, {}) != 1: translates would not spread over all classes",
                t + 1
            )));
        }
        match self.sigma {
            SumClass::Raw(w) if w < v => Ok(w),
            SumClass::Raw(w) => Err(Error::InvalidParameters(format!(
                "raw class {w} outside 0..{v}"
            ))),
            SumClass::Signed(s) => {
                let (lo, hi) = Self::signed_window(t);
                if s < lo || s >= hi {
                    return Err(Error::InvalidParameters(format!(
                        "sigma {s} outside the window {lo} <= sigma < {hi}"
                    )));
                }
                let min_v = binomial(t as u64 + 2, 2) + binomial(t as u64 + 1, 2);
                if (v as u64) <= min_v {
                    return Err(Error::InvalidParameters(format!(
                        "v = {v} too small for a signed class; need v > {min_v}"
                    )));
                }
                Ok(s.rem_euclid(v as i64) as u32)
            }
        }
    }
}

/// Residue of the element sum of `subset` modulo `v`.
pub fn sum_class_of(subset: &[u32], v: u32) -> u32 {
    (subset.iter().map(|&x| x as u64).sum::<u64>() % v as u64) as u32
}

/// All `(t+1)`-subsets of `Z_v` whose element sum is congruent to the chosen
/// class. A `t-(v,t+1,1)` packing with exactly `C(v,t+1)/v` blocks.
pub fn sum_class_packing(params: &SumClassParams) -> Result<Design> {
    let class = params.class_index()? as u64;
    let (t, v) = (params.t as usize, params.v);
    let v64 = v as u64;
    let mut blocks = Vec::with_capacity((binomial(v64, t as u64 + 1) / v64) as usize);

    // every t-subset extends in exactly one way; keep it only when the
    // completing element is the largest, so each block appears once
    let mut prefix: Vec<u32> = Vec::with_capacity(t + 1);
    fn rec(
        start: u32,
        t: usize,
        v: u32,
        class: u64,
        prefix: &mut Vec<u32>,
        blocks: &mut Vec<Vec<u32>>,
    ) {
        if prefix.len() == t {
            let s: u64 = prefix.iter().map(|&x| x as u64).sum();
            let last = ((class + v as u64 - s % v as u64) % v as u64) as u32;
            if prefix.last().is_none_or(|&m| last > m) {
                let mut b = prefix.clone();
                b.push(last);
                blocks.push(b);
            }
            return;
        }
        for x in start..v {
            prefix.push(x);
            rec(x + 1, t, v, class, prefix, blocks);
            prefix.pop();
        }
    }
    rec(0, t, v, class, &mut prefix, &mut blocks);
    Design::new(v, params.t, params.t + 1, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{validate, Labeling};
    use crate::metrics::metric_report;

    /// Independent oracle: filter every (t+1)-subset by its sum.
    fn brute(t: u32, v: u32, class: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let k = t as usize + 1;
        for mask in 0u32..(1 << v) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let s: Vec<u32> = (0..v).filter(|&i| mask >> i & 1 == 1).collect();
            if sum_class_of(&s, v) == class {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn t2_v11_sigma2() {
        let d = sum_class_packing(&SumClassParams::signed(2, 11, 2)).unwrap();
        assert_eq!(d.blocks(), brute(2, 11, 2).as_slice());
        assert_eq!(d.block_count(), 15);
        let r = metric_report(&d, &Labeling::identity(11)).unwrap();
        assert_eq!((r.min_sum, r.max_sum, r.diff_sum), (13, 24, 11));
    }

    #[test]
    fn t2_v11_class0_is_a_packing() {
        let d = sum_class_packing(&SumClassParams::raw(2, 11, 0)).unwrap();
        let st = validate(&d);
        assert!(st.is_packing && !st.is_steiner);
        assert_eq!(st.block_count, 15);
    }

    #[test]
    fn t2_v13_sigma2() {
        let d = sum_class_packing(&SumClassParams::signed(2, 13, 2)).unwrap();
        assert_eq!(d.blocks(), brute(2, 13, 2).as_slice());
        assert_eq!(d.block_count(), 22);
        let r = metric_report(&d, &Labeling::identity(13)).unwrap();
        assert_eq!((r.min_sum, r.max_sum), (15, 28));
    }

    #[test]
    fn t3_v11_raw_class2() {
        let d = sum_class_packing(&SumClassParams::raw(3, 11, 2)).unwrap();
        assert_eq!(d.blocks(), brute(3, 11, 2).as_slice());
        assert!(validate(&d).is_packing);
        let r = metric_report(&d, &Labeling::identity(11)).unwrap();
        assert_eq!(r.max_sum, 24);
        // the signed form of the same class needs v > 16
        assert!(sum_class_packing(&SumClassParams::signed(3, 11, -9)).is_err());
        let d17 = sum_class_packing(&SumClassParams::signed(3, 17, -9)).unwrap();
        let r = metric_report(&d17, &Labeling::identity(17)).unwrap();
        assert_eq!(r.max_sum, 3 * 17 - 9);
    }

    #[test]
    fn precondition_errors() {
        assert!(sum_class_packing(&SumClassParams::signed(2, 12, 0)).is_err());
        assert!(sum_class_packing(&SumClassParams::signed(2, 11, 3)).is_err());
        assert!(sum_class_packing(&SumClassParams::signed(2, 11, -6)).is_err());
        assert!(sum_class_packing(&SumClassParams::raw(2, 11, 11)).is_err());
        assert!(sum_class_packing(&SumClassParams::signed(2, 8, 0)).is_err());
    }

    #[test]
    fn signed_window_t2() {
        assert_eq!(SumClassParams::signed_window(2), (-5, 3));
        assert_eq!(SumClassParams::signed(2, 11, -5).class_index().unwrap(), 6);
    }
}
