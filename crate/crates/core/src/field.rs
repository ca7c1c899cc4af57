//! Exact base fields: prime fields `F_p` and the rationals.
//!
//! Field elements are plain values; all arithmetic goes through the field
//! context so that the same generic code runs over `F_p` (runtime modulus)
//! and over `Q`.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{AdeleError, Result};

pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elt: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elt;
    fn one(&self) -> Self::Elt;
    fn integer(&self, n: i64) -> Self::Elt;
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn neg(&self, a: &Self::Elt) -> Self::Elt;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elt) -> Option<Self::Elt>;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// Short descriptor used on the command line and in reports (`f5`, `q`).
    fn name(&self) -> String;
    fn parse_elt(&self, s: &str) -> Result<Self::Elt>;
    fn fmt_elt(&self, a: &Self::Elt) -> String;
    /// A small random element; over `Q` numerators and denominators stay tiny.
    fn random_elt<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elt;
    /// The first `count` elements in a fixed enumeration order
    /// (all of `F_p` in order, or rationals ordered by height).
    fn enumerate(&self, count: usize) -> Vec<Self::Elt>;

    fn is_zero(&self, a: &Self::Elt) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elt) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elt, b: &Self::Elt) -> Option<Self::Elt> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elt, mut e: u64) -> Self::Elt {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Random nonzero element.
    fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elt {
        loop {
            let x = self.random_elt(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
}

/// The prime field `F_p`, `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1u64 << 31)).contains(&p) || !is_prime(p) {
            return Err(AdeleError::InvalidInput(format!(
                "{p} is not a supported prime modulus"
            )));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
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

impl Field for PrimeField {
    type Elt = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn integer(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn name(&self) -> String {
        format!("f{}", self.p)
    }
    fn parse_elt(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = self.parse_elt(n)?;
            let d = self.parse_elt(d)?;
            return self
                .div(&n, &d)
                .ok_or_else(|| AdeleError::Parse(format!("division by zero in `{s}`")));
        }
        let v: i64 = s
            .parse()
            .map_err(|_| AdeleError::Parse(format!("bad F_{} element `{s}`", self.p)))?;
        Ok(self.integer(v))
    }
    fn fmt_elt(&self, a: &u64) -> String {
        a.to_string()
    }
    fn random_elt<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn enumerate(&self, count: usize) -> Vec<u64> {
        (0..self.p).take(count).collect()
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Field for Rationals {
    type Elt = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn integer(&self, n: i64) -> BigRational {
        big(n)
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn name(&self) -> String {
        "q".to_string()
    }
    fn parse_elt(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || AdeleError::Parse(format!("bad rational `{s}`"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        } else {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
    fn fmt_elt(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn random_elt<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let n: i64 = rng.gen_range(-4..=4);
        let d: i64 = rng.gen_range(1..=3);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn enumerate(&self, count: usize) -> Vec<BigRational> {
        // 0, then by height max(|n|, d), positive before negative.
        let mut out = vec![self.zero()];
        let mut h: i64 = 1;
        while out.len() < count {
            let mut level = Vec::new();
            for d in 1..=h {
                for n in 0..=h {
                    if n.max(d) != h || num_integer::gcd(n, d) != 1 || n == 0 {
                        continue;
                    }
                    level.push(BigRational::new(BigInt::from(n), BigInt::from(d)));
                }
            }
            level.sort();
            for q in level {
                out.push(q.clone());
                out.push(-q);
            }
            h += 1;
        }
        out.truncate(count);
        out
    }
}

/// Absolute value helper for height-based orderings over `Q`.
pub fn rational_height(q: &BigRational) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_axioms_exhaustive_f5() {
        let k = PrimeField::new(5).unwrap();
        for a in 0..5u64 {
            assert_eq!(k.add(&a, &k.neg(&a)), 0);
            if a != 0 {
                assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), 1);
            }
            for b in 0..5u64 {
                for c in 0..5u64 {
                    let lhs = k.mul(&a, &k.add(&b, &c));
                    let rhs = k.add(&k.mul(&a, &b), &k.mul(&a, &c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(6).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn rational_enumeration_is_distinct() {
        let q = Rationals;
        let xs = q.enumerate(40);
        let mut sorted = xs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 40);
        assert_eq!(xs[0], q.zero());
        assert_eq!(xs[1], q.one());
        assert_eq!(xs[2], q.integer(-1));
    }

    #[test]
    fn parse_and_format() {
        let q = Rationals;
        let x = q.parse_elt("-3/6").unwrap();
        assert_eq!(q.fmt_elt(&x), "-1/2");
        let k = PrimeField::new(7).unwrap();
        assert_eq!(k.parse_elt("-1").unwrap(), 6);
        assert_eq!(k.parse_elt("1/2").unwrap(), 4);
    }
}
