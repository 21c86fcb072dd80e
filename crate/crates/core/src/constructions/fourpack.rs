use crate::design::{binomial, Design};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Block count `(v-4)/(v-1) * C(v,3)/4`, exact.
pub fn fourpack_block_count(v: u32) -> Rational {
    Rational::new(v as i64 - 4, v as i64 - 1) * Rational::new(binomial(v as u64, 3) as i64, 4)
}

/// A 3-(v,4,1) packing on `{0..2s-1}`, `v = 2s`, from two block classes:
///
/// 1. `{a, b, c, s+d}` with `a+b+c+d = 2 (mod s)`;
/// 2. `{s+a, s+b, s+c, d}` with `a+b+c+d = s-6 (mod s)`;
///
/// for `0 <= a < b < c < s` and `0 <= d < s`. Under the identity labeling the
/// first class sums to `2s+2` at least and the second to `6s-6` at most.
pub fn fourpack(v: u32) -> Result<Design> {
    if v % 2 == 1 || v <= 18 {
        return Err(Error::InvalidParameters(format!(
            "the two-class 3-(v,4,1) packing needs even v > 18, got {v}"
        )));
    }
    let s = v / 2;
    let mut blocks = Vec::with_capacity(2 * binomial(s as u64, 3) as usize);
    for a in 0..s {
        for b in a + 1..s {
            for c in b + 1..s {
                let abc = a + b + c;
                let d1 = (2 * s + 2 - abc % s) % s;
                blocks.push(vec![a, b, c, s + d1]);
                let d2 = (3 * s - 6 - abc % s) % s;
                blocks.push(vec![s + a, s + b, s + c, d2]);
            }
        }
    }
    Design::new(v, 3, 4, blocks)
}
