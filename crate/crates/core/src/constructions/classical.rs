//! Bose and Skolem triple systems.
//!
//! Bose: points `(x, i)` of `Z_n x {0,1,2}`, `n = v/3` odd, named `x + n*i`.
//! Skolem: points `(x, i)` of `Z_{2n} x {0,1,2}` plus `inf`, `v = 6n+1`,
//! named `x + 2n*i` with `inf = v-1`.

use crate::design::Design;
use crate::error::{Error, Result};
use crate::independence::{is_independent, IndependentPair};

fn bose_parts(v: u32) -> Result<(Design, u32)> {
    if v % 6 != 3 {
        return Err(Error::Inadmissible {
            v,
            reason: "Bose construction needs v = 3 (mod 6)".into(),
        });
    }
    let n = v / 3;
    let half = n.div_ceil(2);
    let op = |x: u32, y: u32| (x + y) * half % n;
    let p = |x: u32, i: u32| x + n * (i % 3);
    let mut blocks = Vec::new();
    for x in 0..n {
        blocks.push(vec![p(x, 0), p(x, 1), p(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..n {
            for y in x + 1..n {
                blocks.push(vec![p(x, i), p(y, i), p(op(x, y), i + 1)]);
            }
        }
    }
    Ok((Design::new(v, 2, 3, blocks)?, n))
}

/// Bose STS(v) for `v = 3 (mod 6)` over the idempotent commutative
/// quasigroup `x o y = (x+y)(n+1)/2 mod n`.
pub fn bose(v: u32) -> Result<Design> {
    bose_parts(v).map(|(d, _)| d)
}

/// Bose system plus two disjoint independent sets of size `v/3 + 1`:
/// level 0 with `(0,2)`, and level 2 minus `(0,2)` with `(1,1), (n-1,1)`.
pub fn bose_with_pair(v: u32) -> Result<(Design, IndependentPair)> {
    let (d, n) = bose_parts(v)?;
    if n < 3 {
        return Err(Error::InvalidParameters(
            "the exposed pair needs v >= 9".into(),
        ));
    }
    let mut a: Vec<u32> = (0..n).collect();
    a.push(2 * n);
    let mut b: Vec<u32> = (2 * n + 1..3 * n).collect();
    b.extend([n + 1, 2 * n - 1]);
    let pair = IndependentPair::from_sets(&d, a, b)?;
    Ok((d, pair))
}

fn skolem_parts(v: u32) -> Result<(Design, u32)> {
    if v % 6 != 1 || v < 7 {
        return Err(Error::Inadmissible {
            v,
            reason: "Skolem construction needs v = 1 (mod 6), v >= 7".into(),
        });
    }
    let n = (v - 1) / 6;
    let m = 2 * n;
    let inf = v - 1;
    // half-idempotent commutative quasigroup of order 2n
    let op = |x: u32, y: u32| {
        let s = (x + y) % m;
        if s.is_multiple_of(2) { s / 2 } else { (s - 1) / 2 + n }
    };
    let p = |x: u32, i: u32| x + m * (i % 3);
    let mut blocks = Vec::new();
    for x in 0..n {
        blocks.push(vec![p(x, 0), p(x, 1), p(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..n {
            blocks.push(vec![inf, p(x + n, i), p(x, i + 1)]);
        }
        for x in 0..m {
            for y in x + 1..m {
                blocks.push(vec![p(x, i), p(y, i), p(op(x, y), i + 1)]);
            }
        }
    }
    Ok((Design::new(v, 2, 3, blocks)?, n))
}

/// Skolem STS(v) for `v = 1 (mod 6)` over the half-idempotent quasigroup
/// `x o y = (x+y)/2` or `(x+y-1)/2 + n` on `Z_{2n}`.
pub fn skolem(v: u32) -> Result<Design> {
    skolem_parts(v).map(|(d, _)| d)
}

/// Skolem system plus a disjoint independent pair: level 0 with `inf` and
/// `(0,2)` (size `2n+2`), and level 2 minus `(0,2)` with `(1,1), (2n-1,1)`
/// (size `2n+1`). For `v = 7` the second set is grown greedily instead.
pub fn skolem_with_pair(v: u32) -> Result<(Design, IndependentPair)> {
    let (d, n) = skolem_parts(v)?;
    let m = 2 * n;
    let mut a: Vec<u32> = (0..m).collect();
    a.extend([v - 1, 2 * m]);
    let mut b: Vec<u32> = (2 * m + 1..3 * m).collect();
    if n >= 2 {
        b.extend([m + 1, 2 * m - 1]);
    } else {
        for x in 0..v {
            if a.contains(&x) || b.contains(&x) {
                continue;
            }
            b.push(x);
            if !is_independent(&d, &b) {
                b.pop();
            }
        }
    }
    let pair = IndependentPair::from_sets(&d, a, b)?;
    Ok((d, pair))
}
