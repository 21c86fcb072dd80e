//! Designs, point labelings and packing validation.
//!
//! Points are `0..v` and every block is stored ascending; the block list is
//! kept in lexicographic order so that equal designs compare equal.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// A `t-(v,k,1)` packing candidate: `v` points, blocks of size `k`.
///
/// Construction only enforces structure (block sizes, point range, no
/// repeated points or blocks). Whether the blocks actually form a packing is
/// answered by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Design {
    v: u32,
    t: u32,
    k: u32,
    blocks: Vec<Vec<u32>>,
}

impl Design {
    pub fn new(v: u32, t: u32, k: u32, blocks: Vec<Vec<u32>>) -> Result<Self> {
        if t == 0 || t >= k || k > v {
            return Err(Error::InvalidParameters(format!(
                "need 0 < t < k <= v, got v={v} t={t} k={k}"
            )));
        }
        let mut seen = HashSet::with_capacity(blocks.len());
        let mut canonical = Vec::with_capacity(blocks.len());
        for (index, block) in blocks.into_iter().enumerate() {
            let malformed = |reason: String| Error::MalformedBlock {
                index,
                block: block.clone(),
                reason,
            };
            if block.len() != k as usize {
                return Err(malformed(format!("expected {k} points, found {}", block.len())));
            }
            if let Some(&p) = block.iter().find(|&&p| p >= v) {
                return Err(malformed(format!("point {p} outside 0..{v}")));
            }
            let mut sorted = block.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(malformed(format!("point {} repeated", w[0])));
            }
            if !seen.insert(sorted.clone()) {
                return Err(malformed("duplicate block".to_string()));
            }
            canonical.push(sorted);
        }
        canonical.sort_unstable();
        Ok(Design {
            v,
            t,
            k,
            blocks: canonical,
        })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of blocks a Steiner system with these parameters has.
    pub fn steiner_block_count(&self) -> u64 {
        binomial(self.v as u64, self.t as u64) / binomial(self.k as u64, self.t as u64)
    }

    /// Replication number `C(v-1,t-1)/C(k-1,t-1)` of a Steiner system with
    /// these parameters.
    pub fn steiner_replication(&self) -> u64 {
        binomial(self.v as u64 - 1, self.t as u64 - 1)
            / binomial(self.k as u64 - 1, self.t as u64 - 1)
    }

    /// For every point, the indices of the blocks containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.v as usize];
        for (i, block) in self.blocks.iter().enumerate() {
            for &p in block {
                inc[p as usize].push(i);
            }
        }
        inc
    }

    /// Blocks as point bitmasks; only meaningful for `v <= 64`.
    pub(crate) fn block_masks(&self) -> Vec<u64> {
        debug_assert!(self.v <= 64);
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0u64, |m, &p| m | (1u64 << p)))
            .collect()
    }
}

/// A point labeling: `ranks[p]` is the popularity rank of point `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Labeling {
    ranks: Vec<u32>,
}

impl Labeling {
    pub fn new(ranks: Vec<u32>) -> Result<Self> {
        let v = ranks.len();
        let mut seen = vec![false; v];
        for (p, &r) in ranks.iter().enumerate() {
            if r as usize >= v {
                return Err(Error::InvalidLabeling(format!(
                    "point {p} has rank {r}, outside 0..{v}"
                )));
            }
            if std::mem::replace(&mut seen[r as usize], true) {
                return Err(Error::InvalidLabeling(format!("rank {r} used twice")));
            }
        }
        Ok(Labeling { ranks })
    }

    pub fn identity(v: u32) -> Self {
        Labeling {
            ranks: (0..v).collect(),
        }
    }

    /// Labeling that gives `order[i]` rank `i`.
    pub fn from_order(order: &[u32]) -> Result<Self> {
        let mut ranks = vec![u32::MAX; order.len()];
        for (r, &p) in order.iter().enumerate() {
            match ranks.get_mut(p as usize) {
                Some(slot) if *slot == u32::MAX => *slot = r as u32,
                Some(_) => {
                    return Err(Error::InvalidLabeling(format!("point {p} listed twice")))
                }
                None => {
                    return Err(Error::InvalidLabeling(format!(
                        "point {p} outside 0..{}",
                        order.len()
                    )))
                }
            }
        }
        Ok(Labeling { ranks })
    }

    pub fn v(&self) -> u32 {
        self.ranks.len() as u32
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn rank(&self, point: u32) -> u32 {
        self.ranks[point as usize]
    }

    /// `order()[r]` is the point holding rank `r`.
    pub fn order(&self) -> Vec<u32> {
        let mut order = vec![0; self.ranks.len()];
        for (p, &r) in self.ranks.iter().enumerate() {
            order[r as usize] = p as u32;
        }
        order
    }

    /// The reverse labeling, `v - 1 - rank`.
    pub fn reverse(&self) -> Labeling {
        let top = self.ranks.len() as u32 - 1;
        Labeling {
            ranks: self.ranks.iter().map(|&r| top - r).collect(),
        }
    }

    pub fn check_for(&self, design: &Design) -> Result<()> {
        if self.v() != design.v() {
            return Err(Error::InvalidLabeling(format!(
                "labeling has {} points, design has {}",
                self.v(),
                design.v()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<u32>> for Labeling {
    type Error = Error;

    fn try_from(ranks: Vec<u32>) -> Result<Self> {
        Labeling::new(ranks)
    }
}

impl From<Labeling> for Vec<u32> {
    fn from(l: Labeling) -> Self {
        l.ranks
    }
}

/// Free-function form of [`Labeling::reverse`] that also checks the order.
pub fn reverse(labeling: &Labeling, v: u32) -> Result<Labeling> {
    if labeling.v() != v {
        return Err(Error::InvalidLabeling(format!(
            "labeling has {} points, expected {v}",
            labeling.v()
        )));
    }
    Ok(labeling.reverse())
}

/// A `t`-subset covered by more than one block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub subset: Vec<u32>,
    pub blocks: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingStatus {
    pub is_packing: bool,
    pub is_steiner: bool,
    pub uncovered_t_subsets: u64,
    pub replication: Vec<u64>,
    pub block_count: usize,
    /// First repeated `t`-subset in block order, if any.
    pub conflict: Option<Conflict>,
}

impl PackingStatus {
    /// True when every point lies in the same number of blocks.
    pub fn uniform_replication(&self) -> Option<u64> {
        let first = *self.replication.first()?;
        self.replication.iter().all(|&r| r == first).then_some(first)
    }
}

/// Colexicographic rank of a sorted subset.
fn subset_rank(subset: &[u32]) -> u64 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c as u64, i as u64 + 1))
        .sum()
}

/// Calls `f` on every `t`-subset of `block` (ascending, lexicographic).
pub(crate) fn for_each_subset(block: &[u32], t: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(block: &[u32], t: usize, start: usize, buf: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if buf.len() == t {
            f(buf);
            return;
        }
        let need = t - buf.len();
        for i in start..=block.len() - need {
            buf.push(block[i]);
            rec(block, t, i + 1, buf, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(t);
    rec(block, t, 0, &mut buf, f);
}

const DENSE_LIMIT: u64 = 1 << 26;

/// Checks the packing and Steiner properties of `design`.
pub fn validate(design: &Design) -> PackingStatus {
    let total = binomial(design.v as u64, design.t as u64);
    let t = design.t as usize;
    let mut replication = vec![0u64; design.v as usize];
    let mut covered = 0u64;
    let mut conflict = None;

    // owner of each t-subset: block index + 1, 0 when uncovered
    let mut dense = (total <= DENSE_LIMIT).then(|| vec![0u32; total as usize]);
    let mut sparse: HashMap<Vec<u32>, usize> = HashMap::new();

    for (bi, block) in design.blocks.iter().enumerate() {
        for &p in block {
            replication[p as usize] += 1;
        }
        for_each_subset(block, t, &mut |sub| {
            let previous = match dense.as_mut() {
                Some(owner) => {
                    let slot = &mut owner[subset_rank(sub) as usize];
                    if *slot == 0 {
                        *slot = bi as u32 + 1;
                        None
                    } else {
                        Some(*slot as usize - 1)
                    }
                }
                None => match sparse.get(sub) {
                    Some(&other) => Some(other),
                    None => {
                        sparse.insert(sub.to_vec(), bi);
                        None
                    }
                },
            };
            match previous {
                None => covered += 1,
                Some(other) if conflict.is_none() => {
                    conflict = Some(Conflict {
                        subset: sub.to_vec(),
                        blocks: [other, bi],
                    })
                }
                Some(_) => {}
            }
        });
    }

    let is_packing = conflict.is_none();
    let uncovered = total - covered;
    PackingStatus {
        is_packing,
        is_steiner: is_packing && uncovered == 0,
        uncovered_t_subsets: uncovered,
        replication,
        block_count: design.blocks.len(),
        conflict,
    }
}
