//! Points of the projective line and their residue fields.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{AdeleError, Result};
use crate::field::Field;
use crate::poly::{BaseField, Poly};

/// A closed point of `P^1`: a monic irreducible polynomial in `t`, or `inf`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ClosedPoint<K: Field> {
    Finite(Poly<K>),
    Infinity,
}

/// Finite points by (degree, coefficients); infinity last.
impl<K: Field> Ord for ClosedPoint<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => a.cmp(b),
            (Self::Finite(_), Self::Infinity) => Ordering::Less,
            (Self::Infinity, Self::Finite(_)) => Ordering::Greater,
            (Self::Infinity, Self::Infinity) => Ordering::Equal,
        }
    }
}
impl<K: Field> PartialOrd for ClosedPoint<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<K: Field> fmt::Display for ClosedPoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl<K: Field> fmt::Debug for ClosedPoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl<K: BaseField> ClosedPoint<K> {
    /// Validates that `p` is monic and irreducible.
    pub fn finite(p: Poly<K>) -> Result<Self> {
        if !p.is_monic() || p.is_constant() {
            return Err(AdeleError::InvalidInput(format!(
                "point label `{p}` must be a monic nonconstant polynomial"
            )));
        }
        if !K::is_irreducible(&p)? {
            return Err(AdeleError::InvalidInput(format!("`{p}` is reducible")));
        }
        Ok(Self::Finite(p))
    }

    /// The rational point `t = a`.
    pub fn rational(field: &K, a: &K::Elt) -> Self {
        Self::Finite(Poly::linear(field, a))
    }

    /// The point `t = 0`.
    pub fn origin(field: &K) -> Self {
        Self::rational(field, &field.zero())
    }

    pub fn parse(field: &K, s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(Self::Infinity),
            other => Self::finite(Poly::parse(field, other)?),
        }
    }
}

/// The first `count` closed points in a fixed order: `inf`, then finite
/// points by degree (rational points in the field's enumeration order).
pub fn closed_points<K: BaseField>(field: &K, count: usize) -> Vec<ClosedPoint<K>> {
    let mut out = vec![ClosedPoint::Infinity];
    let mut d = 1usize;
    while out.len() < count {
        let elts = field.enumerate(if d == 1 { count } else { usize::MAX });
        if d == 1 {
            out.extend(elts.iter().map(|a| ClosedPoint::rational(field, a)));
            if elts.len() >= count {
                break;
            }
        } else {
            // finite field: all monic polynomials of degree d in lexicographic order
            let q = elts.len();
            let total = q.checked_pow(d as u32).unwrap_or(usize::MAX);
            for idx in 0..total {
                let mut coeffs = Vec::with_capacity(d + 1);
                let mut i = idx;
                for _ in 0..d {
                    coeffs.push(elts[i % q].clone());
                    i /= q;
                }
                coeffs.push(field.one());
                let p = Poly::new(field.clone(), coeffs);
                if K::is_irreducible(&p).unwrap_or(false) {
                    out.push(ClosedPoint::Finite(p));
                    if out.len() >= count {
                        break;
                    }
                }
            }
        }
        d += 1;
    }
    out.truncate(count);
    out
}

impl<K: Field> ClosedPoint<K> {
    pub fn degree(&self) -> usize {
        match self {
            Self::Finite(p) => p.degree().unwrap_or(0),
            Self::Infinity => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn residue_field(&self, field: &K) -> ResidueField<K> {
        match self {
            Self::Finite(p) => ResidueField::new(p.clone()),
            Self::Infinity => ResidueField::new(Poly::t(field)),
        }
    }
}

/// A point of `P^1` viewed in its specialization order: the generic point
/// lies above every closed point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Point<K: Field> {
    Closed(ClosedPoint<K>),
    Generic,
}

impl<K: Field> Point<K> {
    pub fn specializes_to(&self, other: &Self) -> bool {
        // x <= y iff x lies in the closure of y
        match (self, other) {
            (_, Self::Generic) => true,
            (Self::Closed(a), Self::Closed(b)) => a == b,
            (Self::Generic, Self::Closed(_)) => false,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Closed(c) => c.label(),
            Self::Generic => "eta".to_string(),
        }
    }

    pub fn residue_degree(&self) -> usize {
        match self {
            Self::Closed(c) => c.degree(),
            // transcendence, not a finite degree; reported as 1 by convention
            Self::Generic => 1,
        }
    }
}

/// `kappa(x) = k[t]/(p)`; elements are reduced polynomials in `t`.
///
/// For the point at infinity the modulus is `t` and the residue field is `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidueField<K: Field> {
    modulus: Poly<K>,
}

impl<K: Field> ResidueField<K> {
    pub fn new(modulus: Poly<K>) -> Self {
        Self { modulus }
    }

    pub fn base(&self) -> &K {
        self.modulus.field()
    }

    pub fn modulus(&self) -> &Poly<K> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(1)
    }

    pub fn zero(&self) -> Poly<K> {
        Poly::zero(self.base())
    }

    pub fn one(&self) -> Poly<K> {
        Poly::one(self.base())
    }

    pub fn from_base(&self, c: K::Elt) -> Poly<K> {
        Poly::constant(self.base(), c)
    }

    /// The class of `t`.
    pub fn generator(&self) -> Poly<K> {
        Poly::t(self.base()).rem(&self.modulus)
    }

    pub fn reduce(&self, a: &Poly<K>) -> Poly<K> {
        a.rem(&self.modulus)
    }

    pub fn add(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        a.add(b)
    }

    pub fn sub(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        a.sub(b)
    }

    pub fn neg(&self, a: &Poly<K>) -> Poly<K> {
        a.neg()
    }

    pub fn mul(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        if self.degree() == 1 {
            return a.mul(b);
        }
        a.mul(b).rem(&self.modulus)
    }

    pub fn inv(&self, a: &Poly<K>) -> Option<Poly<K>> {
        if a.is_zero() {
            return None;
        }
        a.inv_mod(&self.modulus)
    }

    /// Coordinates in the basis `1, t, ..., t^(d-1)`.
    pub fn coords(&self, a: &Poly<K>) -> Vec<K::Elt> {
        (0..self.degree()).map(|i| a.coeff(i)).collect()
    }

    pub fn from_coords(&self, c: &[K::Elt]) -> Poly<K> {
        Poly::new(self.base().clone(), c.to_vec())
    }

    /// The `d x d` matrix (columns = images of basis vectors) of
    /// multiplication by `a`, as a `k`-linear map.
    pub fn mul_matrix(&self, a: &Poly<K>) -> Vec<Vec<K::Elt>> {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut basis = self.one();
        let t = self.generator();
        for _ in 0..d {
            cols.push(self.coords(&self.mul(a, &basis)));
            basis = self.mul(&basis, &t);
        }
        // transpose to rows
        (0..d).map(|r| (0..d).map(|c| cols[c][r].clone()).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn labels_are_canonical() {
        let k = PrimeField::new(5).unwrap();
        let a = ClosedPoint::parse(&k, "t^2+2").unwrap();
        let b = ClosedPoint::finite(Poly::parse(&k, "t^2+2").unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), 2);
        assert!(ClosedPoint::parse(&k, "t^2+4").is_err()); // (t-1)(t+1)... reducible
        assert!(ClosedPoint::parse(&k, "2*t+1").is_err()); // not monic
        assert_eq!(ClosedPoint::<PrimeField>::parse(&k, "inf").unwrap(), ClosedPoint::Infinity);
    }

    #[test]
    fn specialization_order() {
        let q = Rationals;
        let x = Point::Closed(ClosedPoint::origin(&q));
        let y = Point::Closed(ClosedPoint::Infinity);
        let eta = Point::Generic;
        assert!(x.specializes_to(&eta));
        assert!(!eta.specializes_to(&x));
        assert!(!x.specializes_to(&y));
        assert!(x.specializes_to(&x));
    }

    #[test]
    fn residue_field_inverse() {
        let k = PrimeField::new(5).unwrap();
        let kx = ClosedPoint::parse(&k, "t^2+2").unwrap().residue_field(&k);
        let a = Poly::parse(&k, "3*t+1").unwrap();
        let ai = kx.inv(&a).unwrap();
        assert!(kx.mul(&a, &ai).is_one());
    }
}
