//! Arithmetic in GF(p) for an odd prime p < 2^31.
//!
//! Field elements are plain `u32` residues in `[0, p)`. The context carries
//! the modulus and the accumulation budget used by the matrix kernels: with
//! p < 2^31 a product fits in 62 bits, so several products can be summed in
//! a `u64` before a reduction is needed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A residue modulo the field's prime, always kept in `[0, p)`.
pub type FieldElem = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    modulus: u32,
    /// Number of products `(p-1)^2` that can be summed without overflowing `u64`.
    acc_budget: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        let max_prod = (p - 1) * (p - 1);
        let budget = ((u64::MAX - p) / max_prod).min(u32::MAX as u64) as u32;
        Ok(PrimeField {
            modulus: p as u32,
            acc_budget: budget,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub(crate) fn acc_budget(&self) -> usize {
        self.acc_budget as usize
    }

    /// Reduce an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn from_i64(&self, x: i64) -> FieldElem {
        x.rem_euclid(self.modulus as i64) as u32
    }

    #[inline]
    pub fn from_u64(&self, x: u64) -> FieldElem {
        (x % self.modulus as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let s = a as u64 + b as u64;
        let p = self.modulus as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a >= b {
            a - b
        } else {
            a + (self.modulus - b)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        ((a as u64 * b as u64) % self.modulus as u64) as u32
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(&self, a: FieldElem, b: FieldElem, c: FieldElem) -> FieldElem {
        ((a as u64 + b as u64 * c as u64) % self.modulus as u64) as u32
    }

    pub fn pow(&self, mut base: FieldElem, mut exp: u64) -> FieldElem {
        let mut acc = 1 % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a == 0 {
            return None;
        }
        // extended Euclid on i64
        let (mut r0, mut r1) = (self.modulus as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.from_i64(t0))
    }

    #[inline]
    pub fn contains(&self, a: u64) -> bool {
        a < self.modulus as u64
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.modulus as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 91, 1 << 31, (1u64 << 31) + 11] {
            assert!(PrimeField::new(p).is_err(), "{p}");
        }
        // largest prime below 2^31
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert!(PrimeField::new(65521).is_ok());
    }

    #[test]
    fn inverse_and_arith() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(2), Some(4));
        assert_eq!(f.inv(0), None);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.neg(3), 4);
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.pow(3, 6), 1);
    }

    #[test]
    fn inverse_large_prime() {
        let f = PrimeField::new(2_147_483_647).unwrap();
        for a in [1u32, 2, 12345, 2_147_483_646] {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.acc_budget(), 4);
    }
}
