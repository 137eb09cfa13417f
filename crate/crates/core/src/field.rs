//! Elements of prime fields `F_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::is_prime;

/// A residue modulo a prime `p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeFieldElement {
    residue: u32,
    modulus: u32,
}

impl PrimeFieldElement {
    pub fn new(value: i64, p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Self::reduce(value, p))
    }

    /// Trusts that `p` is prime.
    pub(crate) fn reduce(value: i64, p: u32) -> Self {
        PrimeFieldElement { residue: value.rem_euclid(p as i64) as u32, modulus: p }
    }

    pub fn residue(self) -> u32 {
        self.residue
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let p = self.modulus as u64;
        let mut base = self.residue as u64;
        let mut acc = 1 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        PrimeFieldElement { residue: acc as u32, modulus: self.modulus }
    }

    pub fn inverse(self) -> Result<Self> {
        if self.residue == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(self.modulus as u64 - 2))
    }

    fn check(self, other: Self) {
        assert_eq!(self.modulus, other.modulus, "mixed prime fields F_{} and F_{}", self.modulus, other.modulus);
    }
}

impl fmt::Debug for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Add for PrimeFieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        Self::reduce(self.residue as i64 + rhs.residue as i64, self.modulus)
    }
}

impl Sub for PrimeFieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        Self::reduce(self.residue as i64 - rhs.residue as i64, self.modulus)
    }
}

impl Mul for PrimeFieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        Self::reduce(self.residue as i64 * rhs.residue as i64, self.modulus)
    }
}

impl Neg for PrimeFieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self::reduce(-(self.residue as i64), self.modulus)
    }
}

/// Smallest generator of the multiplicative group `F_p^×`.
pub fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let n = (p - 1) as u64;
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| {
            let e = PrimeFieldElement::reduce(g as i64, p);
            factors.iter().all(|&q| e.pow(n / q).residue != 1)
        })
        .expect("every prime field has a primitive root")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small_primes() {
        for p in [2u32, 3, 5, 7, 11, 31, 97] {
            let one = PrimeFieldElement::new(1, p).unwrap();
            for a in 0..p as i64 {
                let x = PrimeFieldElement::new(a, p).unwrap();
                assert_eq!(x + (-x), PrimeFieldElement::new(0, p).unwrap());
                if a != 0 {
                    assert_eq!(x * x.inverse().unwrap(), one);
                } else {
                    assert_eq!(x.inverse(), Err(Error::ZeroInverse));
                }
                for b in [0i64, 1, (p - 1) as i64] {
                    let y = PrimeFieldElement::new(b, p).unwrap();
                    assert_eq!(x * y, y * x);
                    assert_eq!((x - y) + y, x);
                }
            }
        }
        assert!(PrimeFieldElement::new(3, 4).is_err());
        assert_eq!(PrimeFieldElement::new(-1, 7).unwrap().residue(), 6);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(2), 1);
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        for p in [11u32, 13, 97] {
            let g = PrimeFieldElement::reduce(primitive_root(p) as i64, p);
            let order = (1..p as u64).find(|&k| g.pow(k).residue() == 1).unwrap();
            assert_eq!(order, (p - 1) as u64);
        }
    }
}
