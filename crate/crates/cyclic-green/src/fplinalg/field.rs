use crate::error::{Error, Result};

/// The prime field F_p for a prime p <= 64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u32) -> bool {
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

impl PrimeField {
    pub fn new(p: u32) -> Result<PrimeField> {
        if p > 64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.p) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.p - b as u32) % self.p) as u8
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.p) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        ((self.p - a as u32) % self.p) as u8
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u8) -> u8 {
        assert!(!(a as u32).is_multiple_of(self.p), "zero has no inverse");
        // a^(p-2)
        let mut base = a as u32 % self.p;
        let mut e = self.p - 2;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_large() {
        for n in [0, 1, 4, 9, 15, 49, 67, 97] {
            assert!(PrimeField::new(n).is_err(), "{n}");
        }
        for p in [2, 3, 5, 7, 61] {
            assert!(PrimeField::new(p).is_ok(), "{p}");
        }
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7, 13, 61] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p as u8 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }
}
