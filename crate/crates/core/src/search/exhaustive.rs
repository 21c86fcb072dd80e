use rayon::prelude::*;

use crate::design::{Design, Labeling};
use crate::error::{Error, Result};
use crate::metrics::MetricReport;
use crate::rational::Rational;
use crate::search::{Objective, SearchResult};

/// Largest order enumerated exhaustively (`9! = 362880` labelings).
pub const EXHAUSTIVE_CAP: u32 = 9;

/// Rearranges `a` into the next permutation in lexicographic order; false
/// once the last one has been passed.
fn next_permutation(a: &mut [u32]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn cost_of(objective: Objective, blocks: &[Vec<u32>], ranks: &[u32]) -> Rational {
    let sums: Vec<i64> = blocks
        .iter()
        .map(|b| b.iter().map(|&p| ranks[p as usize] as i64).sum())
        .collect();
    let report = MetricReport::from_sums(&sums).expect("nonempty design");
    objective.cost(&report)
}

/// Global optimum over all `v!` labelings; among optimal labelings the
/// lexicographically least rank vector is returned.
pub fn exhaustive_labeling(design: &Design, objective: Objective) -> Result<SearchResult> {
    let v = design.v();
    if v > EXHAUSTIVE_CAP {
        return Err(Error::ExactnessCap {
            what: "order for exhaustive labeling",
            value: v as u64,
            cap: EXHAUSTIVE_CAP as u64,
            hint: "use bb_labeling or anneal_labeling",
        });
    }
    if design.is_empty() {
        return Err(Error::EmptyDesign);
    }
    let blocks = design.blocks();
    // one task per rank of point 0; each scans its slice in lexicographic
    // order, so keeping the first strict improvement keeps the least vector
    let best = (0..v)
        .into_par_iter()
        .map(|first| {
            let mut rest: Vec<u32> = (0..v).filter(|&r| r != first).collect();
            let mut ranks = vec![first];
            ranks.extend(&rest);
            let mut best = (cost_of(objective, blocks, &ranks), ranks.clone(), 1u64);
            while next_permutation(&mut rest) {
                ranks[1..].copy_from_slice(&rest);
                let c = cost_of(objective, blocks, &ranks);
                best.2 += 1;
                if c < best.0 {
                    best.0 = c;
                    best.1.copy_from_slice(&ranks);
                }
            }
            best
        })
        .reduce_with(|a, b| {
            let n = a.2 + b.2;
            let (c, r) = if (&b.0, &b.1) < (&a.0, &a.1) { (b.0, b.1) } else { (a.0, a.1) };
            (c, r, n)
        })
        .expect("v >= 1");
    let labeling = Labeling::new(best.1)?;
    let mut result = SearchResult::new(design, labeling, objective, "exhaustive")?.certify();
    result.iterations = best.2;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::catalog;
    use crate::search::Optimality;

    #[test]
    fn permutations_in_order() {
        let mut a = vec![0, 1, 2];
        let mut all = vec![a.clone()];
        while next_permutation(&mut a) {
            all.push(a.clone());
        }
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fano_optima() {
        let (d, _) = catalog("STS7").unwrap();
        let r = exhaustive_labeling(&d, Objective::MinDiffSum).unwrap();
        assert_eq!(r.report.diff_sum, 7);
        assert_eq!(r.optimality, Optimality::Exact);
        assert_eq!(r.iterations, 5040);
        let m = exhaustive_labeling(&d, Objective::MaxMinSum).unwrap();
        assert!(m.report.min_sum <= 7 && m.report.min_sum >= 6);
        assert!(r.is_consistent(&d) && m.is_consistent(&d));
    }

    #[test]
    fn cap_and_empty() {
        let d = crate::constructions::bose(15).unwrap();
        assert!(matches!(
            exhaustive_labeling(&d, Objective::MinDiffSum),
            Err(Error::ExactnessCap { .. })
        ));
        let e = Design::new(5, 2, 3, vec![]).unwrap();
        assert_eq!(exhaustive_labeling(&e, Objective::MinDiffSum), Err(Error::EmptyDesign));
    }
}
