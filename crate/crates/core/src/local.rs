//! A single local component: an exact rational function or a truncated
//! series, both read in the completion at a fixed closed point.

use crate::error::{AdeleError, Result};
use crate::point::ClosedPoint;
use crate::poly::BaseField;
use crate::rat::Rat;
use crate::series::{expand, Comparison, LocalSeries, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalElt<K: BaseField> {
    Exact(Rat<K>),
    Series(LocalSeries<K>),
}

/// `expand`, except that a request below the valuation yields a zero
/// series known modulo `pi^prec`.
pub fn expand_to<K: BaseField>(f: &Rat<K>, x: &ClosedPoint<K>, prec: i64) -> Result<LocalSeries<K>> {
    match expand(f, x, prec) {
        Err(AdeleError::NoSignificantDigits { .. }) => Ok(LocalSeries::zero(x.clone(), f.field(), prec)),
        other => other,
    }
}

fn lowest(s: &LocalSeries<impl BaseField>) -> i64 {
    match s.valuation() {
        Valuation::Exact(v) => v,
        _ => s.abs_prec(),
    }
}

impl<K: BaseField> LocalElt<K> {
    pub fn zero(field: &K) -> Self {
        Self::Exact(Rat::zero(field))
    }

    pub fn one(field: &K) -> Self {
        Self::Exact(Rat::one(field))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn valuation(&self, x: &ClosedPoint<K>) -> Valuation {
        match self {
            Self::Exact(f) => match f.valuation(x) {
                None => Valuation::Infinite,
                Some(v) => Valuation::Exact(v),
            },
            Self::Series(s) => s.valuation(),
        }
    }

    /// Lower bound for the valuation usable in window sizing.
    pub fn min_valuation(&self, x: &ClosedPoint<K>) -> Option<i64> {
        match self.valuation(x) {
            Valuation::Infinite => None,
            Valuation::Exact(v) | Valuation::AtLeast(v) => Some(v),
        }
    }

    /// `Some(true/false)` when integrality at `x` is decided.
    pub fn is_integral(&self, x: &ClosedPoint<K>) -> Option<bool> {
        match self.valuation(x) {
            Valuation::Infinite => Some(true),
            Valuation::Exact(v) => Some(v >= 0),
            Valuation::AtLeast(p) => (p >= 0).then_some(true),
        }
    }

    pub fn to_series(&self, x: &ClosedPoint<K>, prec: i64) -> Result<LocalSeries<K>> {
        match self {
            Self::Exact(f) => expand_to(f, x, prec),
            Self::Series(s) => {
                if s.point() != x {
                    return Err(AdeleError::PointMismatch(s.point().label(), x.label()));
                }
                if s.abs_prec() < prec {
                    return Err(AdeleError::InsufficientPrecision(format!(
                        "series at {x} known to O(pi^{}), {prec} requested",
                        s.abs_prec()
                    )));
                }
                Ok(s.truncate(prec))
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Self::Exact(f) => Self::Exact(f.neg()),
            Self::Series(s) => Self::Series(s.neg()),
        }
    }

    pub fn add(&self, o: &Self, x: &ClosedPoint<K>) -> Result<Self> {
        Ok(match (self, o) {
            (Self::Exact(a), Self::Exact(b)) => Self::Exact(a.add(b)),
            (Self::Series(s), Self::Exact(f)) | (Self::Exact(f), Self::Series(s)) => {
                Self::Series(s.add(&expand_to(f, x, s.abs_prec())?)?)
            }
            (Self::Series(a), Self::Series(b)) => Self::Series(a.add(b)?),
        })
    }

    pub fn sub(&self, o: &Self, x: &ClosedPoint<K>) -> Result<Self> {
        self.add(&o.neg(), x)
    }

    pub fn mul(&self, o: &Self, x: &ClosedPoint<K>) -> Result<Self> {
        Ok(match (self, o) {
            (Self::Exact(a), Self::Exact(b)) => Self::Exact(a.mul(b)),
            (Self::Series(s), Self::Exact(f)) | (Self::Exact(f), Self::Series(s)) => {
                if f.is_zero() {
                    return Ok(Self::Exact(Rat::zero(f.field())));
                }
                let vf = f.valuation(x).unwrap();
                // enough digits of f that the product precision is v(f) + prec(s)
                let need = vf + s.abs_prec() - lowest(s) + 1;
                Self::Series(s.mul(&expand_to(f, x, need)?)?)
            }
            (Self::Series(a), Self::Series(b)) => Self::Series(a.mul(b)?),
        })
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(match self {
            Self::Exact(f) => Self::Exact(f.inv()?),
            Self::Series(s) => Self::Series(s.invert()?),
        })
    }

    pub fn compare(&self, o: &Self, x: &ClosedPoint<K>) -> Result<Comparison> {
        Ok(match (self, o) {
            (Self::Exact(a), Self::Exact(b)) => {
                if a == b {
                    Comparison::Equal
                } else {
                    Comparison::NotEqual
                }
            }
            _ => match self.sub(o, x)? {
                Self::Series(d) => {
                    if d.is_known_zero() {
                        Comparison::EqualToPrecision(d.abs_prec())
                    } else {
                        Comparison::NotEqual
                    }
                }
                Self::Exact(_) => unreachable!("mixed difference is a series"),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn mixed_product_keeps_series_precision() {
        let k = PrimeField::new(5).unwrap();
        let x = ClosedPoint::origin(&k);
        let s = LocalElt::Series(expand(&Rat::parse(&k, "1", "1-t").unwrap(), &x, 5).unwrap());
        let f = LocalElt::Exact(Rat::parse(&k, "1-t", "t").unwrap());
        let p = s.mul(&f, &x).unwrap();
        match &p {
            LocalElt::Series(ps) => assert_eq!(ps.abs_prec(), 4),
            _ => panic!("expected series"),
        }
        let expected = LocalElt::Exact(Rat::parse(&k, "1", "t").unwrap());
        assert_eq!(p.compare(&expected, &x).unwrap(), Comparison::EqualToPrecision(4));
    }
}
