//! Divisors on `P^1`: finitely supported integer combinations of closed points.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{AdeleError, Result};
use crate::field::Field;
use crate::point::ClosedPoint;
use crate::poly::BaseField;
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor<K: Field> {
    mult: BTreeMap<ClosedPoint<K>, i64>,
}

impl<K: Field> Default for Divisor<K> {
    fn default() -> Self {
        Self {
            mult: BTreeMap::new(),
        }
    }
}

impl<K: Field> fmt::Debug for Divisor<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<K: Field> fmt::Display for Divisor<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.mult.iter().map(|(x, m)| format!("{m}*[{x}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<K: Field> Divisor<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(x: ClosedPoint<K>, m: i64) -> Self {
        let mut d = Self::zero();
        d.add_at(x, m);
        d
    }

    /// `n * [inf]`, the divisor of `O(n)`.
    pub fn at_infinity(n: i64) -> Self {
        Self::point(ClosedPoint::Infinity, n)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ClosedPoint<K>, i64)>) -> Self {
        let mut d = Self::zero();
        for (x, m) in pairs {
            d.add_at(x, m);
        }
        d
    }

    pub fn add_at(&mut self, x: ClosedPoint<K>, m: i64) {
        let e = self.mult.entry(x.clone()).or_insert(0);
        *e += m;
        if *e == 0 {
            self.mult.remove(&x);
        }
    }

    pub fn get(&self, x: &ClosedPoint<K>) -> i64 {
        self.mult.get(x).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &ClosedPoint<K>> {
        self.mult.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClosedPoint<K>, &i64)> {
        self.mult.iter()
    }

    pub fn degree(&self) -> i64 {
        self.mult.iter().map(|(x, m)| m * x.degree() as i64).sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut d = self.clone();
        for (x, m) in &o.mult {
            d.add_at(x.clone(), *m);
        }
        d
    }

    pub fn neg(&self) -> Self {
        Self {
            mult: self.mult.iter().map(|(x, m)| (x.clone(), -m)).collect(),
        }
    }

    pub fn is_effective(&self) -> bool {
        self.mult.values().all(|&m| m >= 0)
    }

    /// Whether `f` lies in `L(self)`: `v_x(f) >= -D_x` at every point.
    /// Only the points of `support(f) ∪ support(self)` need checking; the
    /// finite part is checked without factoring.
    pub fn contains(&self, f: &Rat<K>) -> bool {
        if f.is_zero() {
            return true;
        }
        // strip the allowed poles and require the remainder to be integral
        let mut den = f.den().clone();
        for (x, m) in &self.mult {
            if let ClosedPoint::Finite(p) = x {
                if *m > 0 {
                    for _ in 0..*m {
                        match den.div_exact(p) {
                            Some(q) => den = q,
                            None => break,
                        }
                    }
                }
            }
        }
        if !den.is_constant() {
            return false;
        }
        self.mult.iter().all(|(x, m)| f.valuation(x).unwrap() >= -m)
            && f.valuation(&ClosedPoint::Infinity).unwrap() >= -self.get(&ClosedPoint::Infinity)
    }
}

impl<K: BaseField> Divisor<K> {
    /// The principal divisor of a nonzero rational function.
    pub fn principal(f: &Rat<K>) -> Result<Self> {
        if f.is_zero() {
            return Err(AdeleError::InvalidInput("divisor of zero".into()));
        }
        Ok(Self::from_pairs(f.divisor()?))
    }

    /// Parse `"2*[t] + -1*[inf]"`-style text (as produced by `Display`),
    /// or a bare integer `n` meaning `n*[inf]`.
    pub fn parse(field: &K, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Self::zero());
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(Self::at_infinity(n));
        }
        let mut d = Self::zero();
        for term in s.split(" + ") {
            let (m, x) = term
                .trim()
                .split_once("*[")
                .ok_or_else(|| AdeleError::Parse(format!("bad divisor term `{term}`")))?;
            let m: i64 = m
                .trim()
                .parse()
                .map_err(|_| AdeleError::Parse(format!("bad multiplicity in `{term}`")))?;
            let x = x
                .strip_suffix(']')
                .ok_or_else(|| AdeleError::Parse(format!("missing `]` in `{term}`")))?;
            d.add_at(ClosedPoint::parse(field, x)?, m);
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn degree_weights_residue_degree() {
        let k = PrimeField::new(5).unwrap();
        let d = Divisor::from_pairs([
            (ClosedPoint::parse(&k, "t^2+2").unwrap(), 3),
            (ClosedPoint::Infinity, -1),
        ]);
        assert_eq!(d.degree(), 5);
        assert_eq!(Divisor::parse(&k, &d.to_string()).unwrap(), d);
    }

    #[test]
    fn riemann_roch_membership() {
        let k = PrimeField::new(5).unwrap();
        let d = Divisor::point(ClosedPoint::origin(&k), 2);
        assert!(d.contains(&Rat::parse(&k, "1", "t^2").unwrap()));
        assert!(!d.contains(&Rat::parse(&k, "1", "t^3").unwrap()));
        assert!(!d.contains(&Rat::parse(&k, "t", "1").unwrap()));
        assert!(!d.contains(&Rat::parse(&k, "1", "t+1").unwrap()));
    }
}
