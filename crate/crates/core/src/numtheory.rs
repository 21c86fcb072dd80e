//! Number-theoretic and graph subroutines for completing sum-class triple
//! packings: the order of -2 modulo a prime, the cycle structure of
//! `x -> -2x` on `Z_n \ {0}`, and splits of regular graphs into perfect
//! matchings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::sts_admissible;

pub type Edge = (u32, u32);

fn edge(a: u32, b: u32) -> Edge {
    (a.min(b), a.max(b))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `-2` modulo the odd prime `p`.
pub fn order_of_minus2(p: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let g = p - 2;
    let mut x = g % p;
    let mut order = 1;
    while x != 1 {
        x = x * g % p;
        order += 1;
    }
    Ok(order)
}

/// `n = 2 (mod 4)`.
pub fn is_singly_even(n: u64) -> bool {
    n % 4 == 2
}

/// True when `v` is an admissible STS order (`v >= 7`) and, for every prime
/// `p | v - 2`, the order of -2 mod `p` is singly even.
pub fn swc_condition(v: u32) -> bool {
    if !sts_admissible(v) || v < 7 {
        return false;
    }
    prime_factors(v as u64 - 2)
        .into_iter()
        .all(|p| order_of_minus2(p).map(is_singly_even).unwrap_or(false))
}

/// Cycles of `x -> -2x (mod n)` on the nonzero residues. Each cycle starts at
/// its smallest element; cycles are listed by that element.
pub fn neg2_cycles(n: u32) -> Result<Vec<Vec<u32>>> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "-2 acts as a permutation only for odd n >= 3, got {n}"
        )));
    }
    let n64 = n as u64;
    let mut seen = vec![false; n as usize];
    let mut cycles = Vec::new();
    for start in 1..n {
        if seen[start as usize] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x as usize] {
            seen[x as usize] = true;
            cycle.push(x);
            x = ((n64 - 2) * x as u64 % n64) as u32;
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// A partition of a graph's edges into perfect matchings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSplit {
    pub factors: Vec<Vec<Edge>>,
    pub source_graph: Vec<Edge>,
}

impl FactorSplit {
    /// Checks that the factors partition the source edges and that each one
    /// meets every vertex exactly once.
    pub fn verify(&self) -> Result<(), String> {
        let vertices: BTreeSet<u32> = self
            .source_graph
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .collect();
        let mut all: Vec<Edge> = self.factors.iter().flatten().copied().collect();
        all.sort_unstable();
        let mut source = self.source_graph.clone();
        source.sort_unstable();
        if all != source {
            return Err("factors do not partition the source edges".into());
        }
        for (i, f) in self.factors.iter().enumerate() {
            let mut hit = BTreeMap::new();
            for &(a, b) in f {
                *hit.entry(a).or_insert(0) += 1;
                *hit.entry(b).or_insert(0) += 1;
            }
            if hit.len() != vertices.len() || hit.values().any(|&c| c != 1) {
                return Err(format!("factor {i} is not a perfect matching"));
            }
        }
        Ok(())
    }
}

/// Splits a union of even cycles into two perfect matchings by alternating
/// edges, starting each cycle at its smallest element.
pub fn split_two_factors(cycles: &[Vec<u32>]) -> Result<FactorSplit> {
    let mut f1 = Vec::new();
    let mut f2 = Vec::new();
    let mut source = Vec::new();
    for cycle in cycles {
        let len = cycle.len();
        let Some(min_pos) = (0..len).min_by_key(|&i| cycle[i]) else {
            continue;
        };
        if len % 2 == 1 {
            return Err(Error::OddCycle {
                start: cycle[min_pos],
                length: len,
            });
        }
        for i in 0..len {
            let a = cycle[(min_pos + i) % len];
            let b = cycle[(min_pos + i + 1) % len];
            let e = edge(a, b);
            source.push(e);
            if i % 2 == 0 { f1.push(e) } else { f2.push(e) }
        }
    }
    f1.sort_unstable();
    f2.sort_unstable();
    source.sort_unstable();
    Ok(FactorSplit {
        factors: vec![f1, f2],
        source_graph: source,
    })
}

/// Proper 3-edge-coloring of a simple cubic graph by backtracking.
///
/// Edges are colored in canonical (sorted) order. A color may be opened only
/// after every lower color is in use, which fixes the first edge to color 0
/// and removes color permutations from the search.
pub fn cubic_one_factorization(edges: &[Edge]) -> Result<FactorSplit> {
    let mut sorted: Vec<Edge> = edges.iter().map(|&(a, b)| edge(a, b)).collect();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameters(format!("repeated edge {:?}", w[0])));
    }
    if let Some(&(a, _)) = sorted.iter().find(|(a, b)| a == b) {
        return Err(Error::InvalidParameters(format!("loop at vertex {a}")));
    }
    let mut index = BTreeMap::new();
    for &(a, b) in &sorted {
        for x in [a, b] {
            let next = index.len();
            index.entry(x).or_insert(next);
        }
    }
    let mut degree = vec![0usize; index.len()];
    for &(a, b) in &sorted {
        degree[index[&a]] += 1;
        degree[index[&b]] += 1;
    }
    if let Some((&vertex, _)) = index.iter().find(|(_, &i)| degree[i] != 3) {
        return Err(Error::NotRegular {
            degree: 3,
            vertex,
            actual: degree[index[&vertex]],
        });
    }

    let ends: Vec<(usize, usize)> = sorted.iter().map(|(a, b)| (index[a], index[b])).collect();
    let mut used = vec![0u8; index.len()];
    let mut color = vec![0u8; ends.len()];

    fn search(i: usize, opened: u8, ends: &[(usize, usize)], used: &mut [u8], color: &mut [u8]) -> bool {
        if i == ends.len() {
            return true;
        }
        let (a, b) = ends[i];
        let free = !(used[a] | used[b]) & 0b111;
        for c in 0..3u8.min(opened + 1) {
            let bit = 1 << c;
            if free & bit == 0 {
                continue;
            }
            used[a] |= bit;
            used[b] |= bit;
            color[i] = c;
            if search(i + 1, opened.max(c + 1), ends, used, color) {
                return true;
            }
            used[a] &= !bit;
            used[b] &= !bit;
        }
        false
    }

    if !search(0, 0, &ends, &mut used, &mut color) {
        return Err(Error::NoOneFactorization { factors: 3 });
    }
    let mut factors = vec![Vec::new(); 3];
    for (e, &c) in sorted.iter().zip(&color) {
        factors[c as usize].push(*e);
    }
    Ok(FactorSplit {
        factors,
        source_graph: sorted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_order(g: u64, p: u64) -> u64 {
        (1..p).find(|&e| (0..e).fold(1, |acc, _| acc * g % p) == 1).unwrap()
    }

    #[test]
    fn orders_of_minus_two() {
        assert_eq!(order_of_minus2(7).unwrap(), 6);
        assert_eq!(order_of_minus2(23).unwrap(), 22);
        assert_eq!(order_of_minus2(19).unwrap(), 9);
        assert!(is_singly_even(6) && is_singly_even(22) && !is_singly_even(9));
        for p in (3..400).filter(|&p| is_prime(p)) {
            assert_eq!(order_of_minus2(p).unwrap(), naive_order(p - 2, p), "p={p}");
        }
        assert_eq!(order_of_minus2(9), Err(Error::NotOddPrime(9)));
        assert_eq!(order_of_minus2(2), Err(Error::NotOddPrime(2)));
    }

    #[test]
    fn swc_examples() {
        assert!(swc_condition(9));
        assert!(swc_condition(25));
        assert!(!swc_condition(21));
        assert!(!swc_condition(7));
        assert!(!swc_condition(11));
        let upto60: Vec<u32> = (7..=60).filter(|&v| swc_condition(v)).collect();
        assert_eq!(upto60, vec![9, 25, 33, 49, 51]);
    }

    #[test]
    fn cycles_of_minus_two() {
        assert_eq!(neg2_cycles(7).unwrap(), vec![vec![1, 5, 4, 6, 2, 3]]);
        assert_eq!(neg2_cycles(5).unwrap(), vec![vec![1, 3, 4, 2]]);
        let c19 = neg2_cycles(19).unwrap();
        assert!(c19.iter().any(|c| c.len() == 9));
        assert!(neg2_cycles(8).is_err());
    }

    #[test]
    fn split_examples() {
        let s = split_two_factors(&neg2_cycles(7).unwrap()).unwrap();
        assert_eq!(s.factors[0], vec![(1, 5), (2, 3), (4, 6)]);
        assert_eq!(s.factors[1], vec![(1, 3), (2, 6), (4, 5)]);
        s.verify().unwrap();
        let s5 = split_two_factors(&neg2_cycles(5).unwrap()).unwrap();
        s5.verify().unwrap();
        assert_eq!(s5.factors[0].len(), 2);
        match split_two_factors(&neg2_cycles(19).unwrap()) {
            Err(Error::OddCycle { length: 9, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn k4_factorization() {
        let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let s = cubic_one_factorization(&k4).unwrap();
        s.verify().unwrap();
        let mut fs: Vec<Vec<Edge>> = s.factors.clone();
        fs.sort();
        assert_eq!(fs, vec![vec![(0, 1), (2, 3)], vec![(0, 2), (1, 3)], vec![(0, 3), (1, 2)]]);
    }

    #[test]
    fn prism_is_factorizable() {
        let prism = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)];
        let s = cubic_one_factorization(&prism).unwrap();
        s.verify().unwrap();
        assert_eq!(s.factors.len(), 3);
    }

    #[test]
    fn petersen_is_not() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let petersen: Vec<Edge> = outer.chain(spokes).chain(inner).collect();
        assert_eq!(
            cubic_one_factorization(&petersen),
            Err(Error::NoOneFactorization { factors: 3 })
        );
    }

    #[test]
    fn rejects_non_cubic_input() {
        assert!(matches!(
            cubic_one_factorization(&[(0, 1), (1, 2), (2, 0)]),
            Err(Error::NotRegular { .. })
        ));
        assert!(cubic_one_factorization(&[(0, 1), (1, 0)]).is_err());
    }
}
