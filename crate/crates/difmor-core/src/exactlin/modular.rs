//! Rank computation modulo word-size primes.
//!
//! Reduction modulo a prime can only lose rank, never gain it, so two
//! random primes agreeing gives strong evidence for the rational rank;
//! disagreement (or a request for an actual kernel) falls back to exact
//! rational elimination. Primes dividing any denominator in the matrix are
//! unusable and skipped.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::elim::{gather_rows, sparsest_first, Echelon, Field, Row};
use super::matrix::Matrix;

/// Word-size primes used by the fast rank path.
pub(crate) const PRIMES: [u64; 9] = [
    2_305_843_009_213_693_951, // 2^61 - 1
    2_147_483_647,             // 2^31 - 1
    1_000_000_007,
    1_000_000_009,
    999_999_937,
    998_244_353,
    754_974_721,
    469_762_049,
    167_772_161,
];

/// The prime field `F_p` for a word-size prime `p`.
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl Field for Fp {
    type E = u64;

    fn is_zero(&self, e: &u64) -> bool {
        *e == 0
    }

    fn neg(&self, e: &u64) -> u64 {
        if *e == 0 {
            0
        } else {
            self.p - *e
        }
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }

    fn inv(&self, a: &u64) -> u64 {
        // Fermat: a^(p-2) mod p for prime p.
        self.pow(*a, self.p - 2)
    }
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits u64")
}

/// Rows of `m` reduced mod `p`; `None` if `p` divides a denominator.
fn rows_mod(m: &Matrix, p: u64) -> Option<Vec<(usize, Row<u64>)>> {
    let f = Fp { p };
    let mut out: Vec<(usize, Row<u64>)> = Vec::new();
    for (idx, row) in gather_rows(m.iter()) {
        let mut reduced: Row<u64> = Vec::with_capacity(row.len());
        for (c, v) in row {
            let den = bigint_mod(v.denom(), p);
            if den == 0 {
                return None;
            }
            let num = bigint_mod(v.numer(), p);
            let e = f.mul_raw(num, f.inv(&den));
            if e != 0 {
                reduced.push((c, e));
            }
        }
        if !reduced.is_empty() {
            out.push((idx, reduced));
        }
    }
    Some(out)
}

/// Rank of `m` over `F_p`, or `None` if `p` is unusable for `m`.
pub(crate) fn rank_mod(m: &Matrix, p: u64) -> Option<usize> {
    let mut rows = rows_mod(m, p)?;
    sparsest_first(&mut rows);
    let f = Fp { p };
    let mut ech = Echelon::new(&f, false);
    for (_, row) in rows {
        ech.insert(row);
    }
    Some(ech.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Scalar;
    use alloc::vec;

    #[test]
    fn field_ops() {
        let f = Fp { p: 1_000_000_007 };
        let a = 123_456_789u64;
        assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        assert_eq!(f.add(&a, &f.neg(&a)), 0);
    }

    #[test]
    fn prime_dividing_denominator_is_rejected() {
        let mut m = Matrix::zero(1, 1);
        m.set(0, 0, Scalar::new(1, 998_244_353));
        assert_eq!(rank_mod(&m, 998_244_353), None);
        assert_eq!(rank_mod(&m, 1_000_000_007), Some(1));
    }

    #[test]
    fn rank_of_small_matrix() {
        let s = Scalar::from_int;
        let m = Matrix::from_rows(vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
            vec![s(0), s(1), s(1)],
        ])
        .unwrap();
        assert_eq!(rank_mod(&m, 1_000_000_007), Some(2));
    }
}
