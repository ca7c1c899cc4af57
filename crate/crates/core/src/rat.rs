//! Exact rational functions `k(t)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{AdeleError, Result};
use crate::field::Field;
use crate::point::ClosedPoint;
use crate::poly::{BaseField, Poly};

/// `num / den`, reduced, `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat<K: Field> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Field> fmt::Display for Rat<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<K: Field> fmt::Debug for Rat<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<K: Field> Ord for Rat<K> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.den.cmp(&other.den).then_with(|| self.num.cmp(&other.num))
    }
}
impl<K: Field> PartialOrd for Rat<K> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<K: Field> Rat<K> {
    pub fn new(num: Poly<K>, den: Poly<K>) -> Result<Self> {
        if den.is_zero() {
            return Err(AdeleError::DivisionByZero);
        }
        let k = num.field().clone();
        if num.is_zero() {
            return Ok(Self::zero(&k));
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let li = k.inv(&den.lead()).unwrap();
        Ok(Self {
            num: num.scale(&li),
            den: den.scale(&li),
        })
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        let k = p.field().clone();
        Self {
            num: p,
            den: Poly::one(&k),
        }
    }

    pub fn zero(field: &K) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: &K) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn constant(field: &K, c: K::Elt) -> Self {
        Self::from_poly(Poly::constant(field, c))
    }

    pub fn t(field: &K) -> Self {
        Self::from_poly(Poly::t(field))
    }

    pub fn field(&self) -> &K {
        self.num.field()
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .unwrap()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.field());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// `v_x(self)`, `None` for zero.
    pub fn valuation(&self, x: &ClosedPoint<K>) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(match x {
            ClosedPoint::Finite(p) => {
                self.num.split_off(p).0 as i64 - self.den.split_off(p).0 as i64
            }
            ClosedPoint::Infinity => self.den.deg() - self.num.deg(),
        })
    }

    pub fn is_integral_at(&self, x: &ClosedPoint<K>) -> bool {
        self.valuation(x).is_none_or(|v| v >= 0)
    }

    /// Whether every pole of `self` lies in `allowed`; needs no factorization.
    pub fn poles_within(&self, allowed: &BTreeSet<ClosedPoint<K>>) -> bool {
        remove_supported(&self.den, allowed).is_constant()
            && (self.num.deg() <= self.den.deg() || allowed.contains(&ClosedPoint::Infinity))
    }

    /// Whether `self` is a unit at every point outside `allowed`.
    pub fn unit_outside(&self, allowed: &BTreeSet<ClosedPoint<K>>) -> bool {
        !self.is_zero()
            && remove_supported(&self.den, allowed).is_constant()
            && remove_supported(&self.num, allowed).is_constant()
            && (self.num.deg() == self.den.deg() || allowed.contains(&ClosedPoint::Infinity))
    }

    pub fn eval(&self, a: &K::Elt) -> Option<K::Elt> {
        let k = self.field();
        k.div(&self.num.eval(a), &self.den.eval(a))
    }

    pub fn parse(field: &K, num: &str, den: &str) -> Result<Self> {
        Self::new(Poly::parse(field, num)?, Poly::parse(field, den)?)
    }
}

fn remove_supported<K: Field>(p: &Poly<K>, allowed: &BTreeSet<ClosedPoint<K>>) -> Poly<K> {
    let mut cur = p.clone();
    for x in allowed {
        if let ClosedPoint::Finite(q) = x {
            cur = cur.split_off(q).1;
        }
    }
    cur
}

impl<K: BaseField> Rat<K> {
    /// Poles as closed points with their orders.
    pub fn poles(&self) -> Result<Vec<(ClosedPoint<K>, i64)>> {
        let mut out = Vec::new();
        if !self.den.is_constant() {
            for (p, e) in K::factor(&self.den)? {
                out.push((ClosedPoint::Finite(p), e as i64));
            }
        }
        if self.num.deg() > self.den.deg() {
            out.push((ClosedPoint::Infinity, self.num.deg() - self.den.deg()));
        }
        Ok(out)
    }

    /// Zeros as closed points with their orders (`self` nonzero).
    pub fn zeros(&self) -> Result<Vec<(ClosedPoint<K>, i64)>> {
        self.inv()?.poles()
    }

    /// The principal divisor as a sorted list.
    pub fn divisor(&self) -> Result<Vec<(ClosedPoint<K>, i64)>> {
        let mut d: Vec<_> = self
            .zeros()?
            .into_iter()
            .chain(self.poles()?.into_iter().map(|(x, e)| (x, -e)))
            .collect();
        d.sort();
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn valuation_examples() {
        let q = Rationals;
        let f = Rat::parse(&q, "t^2", "t+1").unwrap();
        let zero = ClosedPoint::origin(&q);
        assert_eq!(f.valuation(&zero), Some(2));
        assert_eq!(f.valuation(&ClosedPoint::Infinity), Some(-1));
        assert_eq!(Rat::one(&q).valuation(&zero), Some(0));
        assert_eq!(Rat::zero(&q).valuation(&zero), None);
    }

    #[test]
    fn reduced_form() {
        let k = PrimeField::new(5).unwrap();
        let f = Rat::parse(&k, "2*t^2+2*t", "3*t+3").unwrap();
        assert_eq!(f.den().to_string(), "1");
        assert_eq!(f.num().to_string(), "4*t");
    }

    #[test]
    fn principal_divisor_has_degree_zero() {
        let k = PrimeField::new(5).unwrap();
        let f = Rat::parse(&k, "t^3+t+1", "t^2+2").unwrap().mul(&Rat::parse(&k, "1", "t").unwrap());
        let deg: i64 = f.divisor().unwrap().iter().map(|(x, e)| e * x.degree() as i64).sum();
        assert_eq!(deg, 0);
    }

    #[test]
    fn pole_containment_without_factoring() {
        let k = PrimeField::new(5).unwrap();
        let f = Rat::parse(&k, "t^3", "t^2+2").unwrap();
        let mut s = BTreeSet::new();
        s.insert(ClosedPoint::parse(&k, "t^2+2").unwrap());
        assert!(!f.poles_within(&s));
        s.insert(ClosedPoint::Infinity);
        assert!(f.poles_within(&s));
    }
}
