//! Coefficient rings for chains and linear algebra: `ℤ`, `ℚ` and `F_p`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A commutative coefficient ring with runtime parameters.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Short human-readable name, e.g. `Z`, `Q`, `F5`.
    fn name(&self) -> String;

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn characteristic(&self) -> u64;
}

/// The integers, with `i64` coefficients.
///
/// Chain coefficients in this crate are small; arithmetic panics on overflow
/// rather than wrapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn from_i64(&self, v: i64) -> i64 {
        v
    }
    fn add(&self, a: &i64, b: &i64) -> i64 {
        a.checked_add(*b).expect("integer chain coefficient overflow")
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a.checked_mul(*b).expect("integer chain coefficient overflow")
    }
    fn neg(&self, a: &i64) -> i64 {
        -a
    }
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn name(&self) -> String {
        "Z".into()
    }
}

/// The rationals, with arbitrary-precision coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn name(&self) -> String {
        "Q".into()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// `F_p` for a prime `p`, with residues stored as `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn name(&self) -> String {
        format!("F{}", self.p)
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        self.pow(*a, self.p - 2)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
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

/// Runtime choice of coefficients, as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Rationals,
    Prime(u64),
}

impl Coefficients {
    /// Parses `Z`, `Q` or `F<p>` (case-insensitive).
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_uppercase().as_str() {
            "Z" | "ZZ" => Ok(Coefficients::Integers),
            "Q" | "QQ" => Ok(Coefficients::Rationals),
            u if u.starts_with('F') => {
                let p: u64 = u[1..].parse().map_err(|_| Error::Unsupported(format!("cannot parse ring {s:?}")))?;
                PrimeField::new(p)?;
                Ok(Coefficients::Prime(p))
            }
            _ => Err(Error::Unsupported(format!("unknown ring {s:?}; expected Z, Q or F<p>"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Coefficients::Integers => "Z".into(),
            Coefficients::Rationals => "Q".into(),
            Coefficients::Prime(p) => format!("F{p}"),
        }
    }
}

/// Converts a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::gcd(g, x.clone());
    }
    if g.is_zero() {
        return ints;
    }
    let first_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if first_negative { -g } else { g };
    ints.into_iter().map(|x| x / &g).collect()
}
