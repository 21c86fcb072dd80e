use std::collections::BTreeSet;

use crate::constructions::sum_class::{sum_class_packing, SumClassParams};
use crate::design::{Design, Labeling};
use crate::error::{Error, Result};
use crate::metrics::sts_admissible;
use crate::numtheory::{
    cubic_one_factorization, neg2_cycles, split_two_factors, swc_condition, Edge, FactorSplit,
};

/// A completed triple system together with the pieces it was built from.
#[derive(Debug, Clone)]
pub struct Completion {
    pub design: Design,
    pub labeling: Labeling,
    /// Blocks of type (1), (2) and (3), in construction order.
    pub typed_blocks: [Vec<Vec<u32>>; 3],
    /// The 1-factors used for the type (2) blocks.
    pub split: FactorSplit,
}

fn check_order(v: u32) -> Result<()> {
    if !sts_admissible(v) || v < 7 {
        return Err(Error::Inadmissible {
            v,
            reason: "need v = 1 or 3 (mod 6) and v >= 7".into(),
        });
    }
    Ok(())
}

/// Pairs of `Z_n` left uncovered by the sum-class-0 triples.
fn uncovered_pairs(n: u32, blocks: &[Vec<u32>]) -> Vec<Edge> {
    let mut covered = vec![false; (n * n) as usize];
    for b in blocks {
        for i in 0..3 {
            for j in i + 1..3 {
                covered[(b[i] * n + b[j]) as usize] = true;
            }
        }
    }
    let mut out = Vec::new();
    for a in 1..n {
        for b in a + 1..n {
            if !covered[(a * n + b) as usize] {
                out.push((a, b));
            }
        }
    }
    out
}

fn finish(v: u32, typed_blocks: [Vec<Vec<u32>>; 3], split: FactorSplit) -> Result<Completion> {
    let all: Vec<Vec<u32>> = typed_blocks.iter().flatten().cloned().collect();
    let design = Design::new(v, 2, 3, all)?;
    Ok(Completion {
        design,
        labeling: Labeling::identity(v),
        typed_blocks,
        split,
    })
}

fn sorted(mut b: Vec<u32>) -> Vec<u32> {
    b.sort_unstable();
    b
}

/// Completion for orders where every cycle of `x -> -2x` on `Z_{v-2}` is
/// even. Two new points absorb the two 1-factors of the uncovered pairs.
pub fn sw_special_completion(v: u32) -> Result<Completion> {
    check_order(v)?;
    if !swc_condition(v) {
        return Err(Error::Inadmissible {
            v,
            reason: "the order of -2 is not singly even for some prime dividing v-2; \
                     use sw_complete_general"
                .into(),
        });
    }
    let n = v - 2;
    let base = sum_class_packing(&SumClassParams::raw(2, n, 0))?;
    let split = split_two_factors(&neg2_cycles(n)?)?;
    debug_assert_eq!(split.source_graph, uncovered_pairs(n, base.blocks()));

    let h = (v - 3) / 2;
    let phi = |x: u32| if x <= h { x } else { x + 2 };
    let type1 = base
        .blocks()
        .iter()
        .map(|b| sorted(b.iter().map(|&x| phi(x)).collect()))
        .collect();
    let mut type2 = Vec::new();
    for (i, factor) in split.factors.iter().enumerate() {
        let new_point = h + 1 + i as u32;
        for &(x, y) in factor {
            type2.push(sorted(vec![new_point, phi(x), phi(y)]));
        }
    }
    let type3 = vec![vec![0, h + 1, h + 2]];
    finish(v, [type1, type2, type3], split)
}

/// Special completion, design and identity labeling only.
pub fn sw_complete_special(v: u32) -> Result<(Design, Labeling)> {
    sw_special_completion(v).map(|c| (c.design, c.labeling))
}

/// Completion for every admissible order: drop point 0, 1-factorize the
/// cubic graph of uncovered pairs plus `{x, n-x}`, and add three new points.
pub fn sw_general_completion(v: u32) -> Result<Completion> {
    check_order(v)?;
    let n = v - 2;
    let base = sum_class_packing(&SumClassParams::raw(2, n, 0))?;
    let kept: Vec<&Vec<u32>> = base.blocks().iter().filter(|b| b[0] != 0).collect();

    let mut graph: BTreeSet<Edge> = uncovered_pairs(n, base.blocks()).into_iter().collect();
    for x in 1..=(n - 1) / 2 {
        graph.insert((x, n - x));
    }
    let graph: Vec<Edge> = graph.into_iter().collect();
    let split = cubic_one_factorization(&graph)?;

    let h = (v - 3) / 2;
    let psi = |x: u32| if x <= h { x - 1 } else { x + 2 };
    let type1 = kept
        .iter()
        .map(|b| sorted(b.iter().map(|&x| psi(x)).collect()))
        .collect();
    let mut type2 = Vec::new();
    for (i, factor) in split.factors.iter().enumerate() {
        let new_point = h + i as u32;
        for &(x, y) in factor {
            type2.push(sorted(vec![new_point, psi(x), psi(y)]));
        }
    }
    let type3 = vec![vec![h, h + 1, h + 2]];
    finish(v, [type1, type2, type3], split)
}

/// General completion, design and identity labeling only.
pub fn sw_complete_general(v: u32) -> Result<(Design, Labeling)> {
    sw_general_completion(v).map(|c| (c.design, c.labeling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::validate;
    use crate::metrics::metric_report;

    fn sum(b: &[u32]) -> u32 {
        b.iter().sum()
    }

    fn check_special(v: u32) {
        let c = sw_special_completion(v).unwrap();
        let st = validate(&c.design);
        assert!(st.is_steiner, "v={v}");
        c.split.verify().unwrap();
        let [t1, t2, t3] = &c.typed_blocks;
        for b in t1 {
            let s = sum(b);
            assert!((v - 2..=v + 2).contains(&s) || (2 * v - 2..=2 * v + 2).contains(&s), "{b:?}");
        }
        for b in t2 {
            assert!((v - 1..=2 * v + 1).contains(&sum(b)), "{b:?}");
        }
        assert_eq!(t3.len(), 1);
        assert_eq!(sum(&t3[0]), v);
        let r = metric_report(&c.design, &c.labeling).unwrap();
        assert!(r.min_sum >= v as i64 - 2 && r.max_sum <= 2 * v as i64 + 2);
    }

    fn check_general(v: u32) {
        let c = sw_general_completion(v).unwrap();
        assert!(validate(&c.design).is_steiner, "v={v}");
        c.split.verify().unwrap();
        let [t1, t2, t3] = &c.typed_blocks;
        for b in t1 {
            let s = sum(b);
            assert!((v - 5..=v - 2).contains(&s) || (2 * v - 1..=2 * v + 2).contains(&s), "{b:?}");
        }
        for b in t2 {
            assert!((v - 4..=2 * v + 1).contains(&sum(b)), "{b:?}");
        }
        assert_eq!(t3[0], vec![(v - 3) / 2, (v - 1) / 2, v.div_ceil(2)]);
        assert_eq!(sum(&t3[0]), 3 * (v - 1) / 2);
        let r = metric_report(&c.design, &c.labeling).unwrap();
        assert!(r.min_sum >= v as i64 - 5);
        assert!(r.max_sum <= 2 * v as i64 + 2);
        assert!(r.diff_sum <= v as i64 + 7);
    }

    #[test]
    fn special_v9_v25() {
        check_special(9);
        check_special(25);
        assert_eq!(sw_complete_special(9).unwrap().0.block_count(), 12);
        assert_eq!(sw_complete_special(25).unwrap().0.block_count(), 100);
    }

    #[test]
    fn special_rejects_v21() {
        assert!(matches!(
            sw_complete_special(21),
            Err(Error::Inadmissible { v: 21, .. })
        ));
        assert!(sw_complete_special(10).is_err());
    }

    #[test]
    fn general_small_orders() {
        for v in [7, 9, 13, 15, 19, 21] {
            check_general(v);
        }
        assert_eq!(sw_complete_general(13).unwrap().0.block_count(), 26);
        assert_eq!(sw_complete_general(19).unwrap().0.block_count(), 57);
    }

    #[test]
    fn general_rejects_inadmissible() {
        assert!(sw_complete_general(11).is_err());
        assert!(sw_complete_general(3).is_err());
    }
}
