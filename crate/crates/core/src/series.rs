//! Truncated Laurent series over residue fields: the completed local
//! rings `kappa(x)[[pi_x]]` with explicit absolute precision.
//!
//! A [`LocalSeries`] is known modulo `pi^prec`. Arithmetic follows the usual
//! non-archimedean rules: sums keep the smaller absolute precision, products
//! keep `min(v(a) + prec(b), v(b) + prec(a))`. Nothing beyond `prec` is ever
//! reported.

use std::fmt;

use crate::error::{AdeleError, Result};
use crate::field::Field;
use crate::point::{ClosedPoint, ResidueField};
use crate::poly::{BaseField, Poly};
use crate::rat::Rat;

/// Valuation of a local element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// The element is exactly zero.
    Infinite,
    Exact(i64),
    /// Indistinguishable from zero at the represented precision.
    AtLeast(i64),
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinite => write!(f, "+inf"),
            Self::Exact(v) => write!(f, "{v}"),
            Self::AtLeast(v) => write!(f, ">={v} (precision-limited)"),
        }
    }
}

/// Outcome of comparing values known only to finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    /// Agree modulo `pi^N`; undecidable beyond.
    EqualToPrecision(i64),
    NotEqual,
}

impl Comparison {
    /// Combine the outcomes of componentwise comparisons.
    pub fn and(self, other: Self) -> Self {
        use Comparison::*;
        match (self, other) {
            (NotEqual, _) | (_, NotEqual) => NotEqual,
            (Equal, x) | (x, Equal) => x,
            (EqualToPrecision(a), EqualToPrecision(b)) => EqualToPrecision(a.min(b)),
        }
    }

    pub fn is_not_equal(self) -> bool {
        self == Comparison::NotEqual
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LocalSeries<K: Field> {
    point: ClosedPoint<K>,
    kappa: ResidueField<K>,
    val: i64,
    coeffs: Vec<Poly<K>>,
    prec: i64,
}

impl<K: Field> fmt::Debug for LocalSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<K: Field> fmt::Display for LocalSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*pi^{}", self.val + i as i64)?;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(pi^{}) @ {}", self.prec, self.point)
    }
}

impl<K: Field> LocalSeries<K> {
    /// Normalizing constructor: strips leading zeros, drops digits at or
    /// beyond `prec`, trims trailing zeros.
    pub fn new(
        point: ClosedPoint<K>,
        kappa: ResidueField<K>,
        val: i64,
        coeffs: Vec<Poly<K>>,
        prec: i64,
    ) -> Self {
        let coeffs: Vec<Poly<K>> = coeffs.into_iter().map(|c| kappa.reduce(&c)).collect();
        let keep = (prec - val).max(0) as usize;
        let mut coeffs: Vec<Poly<K>> = coeffs.into_iter().take(keep).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Self {
                point,
                kappa,
                val: prec,
                coeffs: Vec::new(),
                prec,
            },
            Some(s) => Self {
                point,
                kappa,
                val: val + s as i64,
                coeffs: coeffs.split_off(s),
                prec,
            },
        }
    }

    pub fn zero(point: ClosedPoint<K>, field: &K, prec: i64) -> Self {
        let kappa = point.residue_field(field);
        Self::new(point, kappa, prec, Vec::new(), prec)
    }

    pub fn one(point: ClosedPoint<K>, field: &K, prec: i64) -> Self {
        let kappa = point.residue_field(field);
        let one = kappa.one();
        Self::new(point, kappa, 0, vec![one], prec)
    }

    /// `c * pi^e + O(pi^prec)`
    pub fn monomial(point: ClosedPoint<K>, field: &K, c: Poly<K>, e: i64, prec: i64) -> Self {
        let kappa = point.residue_field(field);
        Self::new(point, kappa, e, vec![c], prec)
    }

    pub fn point(&self) -> &ClosedPoint<K> {
        &self.point
    }

    pub fn residue_field(&self) -> &ResidueField<K> {
        &self.kappa
    }

    pub fn field(&self) -> &K {
        self.kappa.base()
    }

    pub fn val_offset(&self) -> i64 {
        self.val
    }

    pub fn coeffs(&self) -> &[Poly<K>] {
        &self.coeffs
    }

    pub fn abs_prec(&self) -> i64 {
        self.prec
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        if self.coeffs.is_empty() {
            Valuation::AtLeast(self.prec)
        } else {
            Valuation::Exact(self.val)
        }
    }

    /// Coefficient of `pi^e`; `None` past the precision horizon.
    pub fn coeff(&self, e: i64) -> Option<Poly<K>> {
        if e >= self.prec {
            return None;
        }
        if e < self.val {
            return Some(self.kappa.zero());
        }
        Some(
            self.coeffs
                .get((e - self.val) as usize)
                .cloned()
                .unwrap_or_else(|| self.kappa.zero()),
        )
    }

    fn check_point(&self, o: &Self) -> Result<()> {
        if self.point != o.point {
            return Err(AdeleError::PointMismatch(
                self.point.label(),
                o.point.label(),
            ));
        }
        Ok(())
    }

    fn with(&self, val: i64, coeffs: Vec<Poly<K>>, prec: i64) -> Self {
        Self::new(self.point.clone(), self.kappa.clone(), val, coeffs, prec)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_point(o)?;
        let prec = self.prec.min(o.prec);
        let lo = self.val.min(o.val).min(prec);
        let coeffs = (lo..prec)
            .map(|e| {
                self.kappa
                    .add(&self.coeff(e).unwrap(), &o.coeff(e).unwrap())
            })
            .collect();
        Ok(self.with(lo, coeffs, prec))
    }

    pub fn neg(&self) -> Self {
        self.with(
            self.val,
            self.coeffs.iter().map(|c| self.kappa.neg(c)).collect(),
            self.prec,
        )
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_point(o)?;
        let prec = (self.val + o.prec).min(o.val + self.prec);
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Ok(self.with(prec, Vec::new(), prec));
        }
        let val = self.val + o.val;
        let n = (prec - val).max(0) as usize;
        let coeffs = mul_trunc(&self.kappa, &self.coeffs, &o.coeffs, n);
        Ok(self.with(val, coeffs, prec))
    }

    /// Multiply by a residue-field constant.
    pub fn scale(&self, c: &Poly<K>) -> Self {
        self.with(
            self.val,
            self.coeffs.iter().map(|a| self.kappa.mul(a, c)).collect(),
            self.prec,
        )
    }

    /// Multiply by `pi^k`.
    pub fn shift(&self, k: i64) -> Self {
        self.with(self.val + k, self.coeffs.clone(), self.prec + k)
    }

    pub fn truncate(&self, prec: i64) -> Self {
        self.with(self.val, self.coeffs.clone(), prec.min(self.prec))
    }

    /// Inverse with the same relative precision. Fails with
    /// `InsufficientPrecision` when `self` is indistinguishable from zero.
    pub fn invert(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(AdeleError::InsufficientPrecision(format!(
                "cannot invert an element known only to be O(pi^{}) at {}",
                self.prec, self.point
            )));
        }
        let rel = (self.prec - self.val) as usize;
        let inv = inv_trunc(&self.kappa, &self.coeffs, rel)?;
        Ok(self.with(-self.val, inv, -self.val + rel as i64))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.invert()?)
    }

    /// Compare at the common precision.
    pub fn compare(&self, o: &Self) -> Result<Comparison> {
        let d = self.sub(o)?;
        Ok(if d.is_known_zero() {
            Comparison::EqualToPrecision(d.prec)
        } else {
            Comparison::NotEqual
        })
    }

    /// Whether `v(self) >= bound` is certain; `None` when the precision
    /// horizon does not reach `bound`.
    pub fn valuation_at_least(&self, bound: i64) -> Option<bool> {
        match self.valuation() {
            Valuation::Exact(v) => Some(v >= bound),
            Valuation::AtLeast(p) if p >= bound => Some(true),
            _ => None,
        }
    }

    pub fn relative_precision(&self) -> i64 {
        self.prec - self.val
    }
}

/// Truncated product of coefficient vectors (first `n` digits).
pub(crate) fn mul_trunc<K: Field>(
    kappa: &ResidueField<K>,
    a: &[Poly<K>],
    b: &[Poly<K>],
    n: usize,
) -> Vec<Poly<K>> {
    let mut out = vec![kappa.zero(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            out[i + j] = kappa.add(&out[i + j], &kappa.mul(ai, bj));
        }
    }
    out
}

/// First `n` digits of `1/a`, `a[0]` a unit.
pub(crate) fn inv_trunc<K: Field>(
    kappa: &ResidueField<K>,
    a: &[Poly<K>],
    n: usize,
) -> Result<Vec<Poly<K>>> {
    let a0 = a
        .first()
        .and_then(|c| kappa.inv(c))
        .ok_or(AdeleError::DivisionByZero)?;
    let mut out: Vec<Poly<K>> = Vec::with_capacity(n);
    for m in 0..n {
        if m == 0 {
            out.push(a0.clone());
            continue;
        }
        let mut s = kappa.zero();
        for j in 1..=m.min(a.len().saturating_sub(1)) {
            s = kappa.add(&s, &kappa.mul(&a[j], &out[m - j]));
        }
        out.push(kappa.neg(&kappa.mul(&s, &a0)));
    }
    Ok(out)
}

/// Evaluate a polynomial with base-field coefficients at a truncated power
/// series `g` (valuation >= 0), keeping `n` digits.
fn poly_at_series<K: Field>(
    kappa: &ResidueField<K>,
    p: &Poly<K>,
    g: &[Poly<K>],
    n: usize,
) -> Vec<Poly<K>> {
    let mut acc = vec![kappa.zero(); n];
    for c in p.coeffs().iter().rev() {
        acc = mul_trunc(kappa, &acc, g, n);
        if n > 0 {
            acc[0] = kappa.add(&acc[0], &kappa.from_base(c.clone()));
        }
    }
    acc
}

/// Compose `f(g)` for truncated series, `g` with zero constant term.
pub(crate) fn compose_trunc<K: Field>(
    kappa: &ResidueField<K>,
    f: &[Poly<K>],
    g: &[Poly<K>],
    n: usize,
) -> Vec<Poly<K>> {
    let mut acc = vec![kappa.zero(); n];
    for c in f.iter().take(n).rev() {
        acc = mul_trunc(kappa, &acc, g, n);
        if n > 0 {
            acc[0] = kappa.add(&acc[0], c);
        }
    }
    acc
}

/// Expansion machinery at one closed point: the canonical uniformizer is the
/// point's label (`p(t)`, or `1/t` at infinity) and `t` is identified with a
/// Hensel lift `theta` in `kappa(x)[[pi]]` with `p(theta) = pi`.
#[derive(Clone, Debug)]
pub struct Chart<K: Field> {
    point: ClosedPoint<K>,
    kappa: ResidueField<K>,
    // digits of theta, length = cached precision
    theta: Vec<Poly<K>>,
}

impl<K: BaseField> Chart<K> {
    pub fn new(point: &ClosedPoint<K>, field: &K) -> Self {
        Self {
            point: point.clone(),
            kappa: point.residue_field(field),
            theta: Vec::new(),
        }
    }

    pub fn point(&self) -> &ClosedPoint<K> {
        &self.point
    }

    pub fn residue_field(&self) -> &ResidueField<K> {
        &self.kappa
    }

    fn theta(&mut self, n: usize) -> &[Poly<K>] {
        if self.theta.len() >= n {
            return &self.theta[..n];
        }
        let p = match &self.point {
            ClosedPoint::Finite(p) => p.clone(),
            ClosedPoint::Infinity => unreachable!("no lift needed at infinity"),
        };
        let kappa = &self.kappa;
        let alpha = kappa.generator();
        let mut theta = vec![alpha];
        if p.degree() == Some(1) {
            theta.push(kappa.one());
        } else {
            // Newton: theta <- theta - (p(theta) - pi) / p'(theta)
            let dp = p.derivative();
            let mut good = 1usize;
            while good < n {
                good = (good * 2).min(n);
                theta.resize(good, kappa.zero());
                let mut val = poly_at_series(kappa, &p, &theta, good);
                if good > 1 {
                    val[1] = kappa.sub(&val[1], &kappa.one());
                }
                let der = poly_at_series(kappa, &dp, &theta, good);
                let corr = mul_trunc(kappa, &val, &inv_trunc(kappa, &der, good).unwrap(), good);
                for (t, c) in theta.iter_mut().zip(corr) {
                    *t = kappa.sub(t, &c);
                }
            }
        }
        theta.resize(n.max(theta.len()), kappa.zero());
        self.theta = theta;
        &self.theta[..n]
    }

    /// The unit part `A(theta)` of a polynomial prime to the point, `n` digits.
    fn unit_digits(&mut self, a: &Poly<K>, n: usize) -> Vec<Poly<K>> {
        match self.point.clone() {
            ClosedPoint::Infinity => {
                let d = a.degree().unwrap_or(0);
                let rev = a.reverse(d);
                (0..n).map(|i| self.kappa.from_base(rev.coeff(i))).collect()
            }
            ClosedPoint::Finite(_) => {
                let theta = self.theta(n.max(2)).to_vec();
                poly_at_series(&self.kappa, a, &theta, n)
            }
        }
    }

    /// The image of `f` in `kappa(x)((pi))` modulo `pi^prec`.
    pub fn expand(&mut self, f: &Rat<K>, prec: i64) -> Result<LocalSeries<K>> {
        let field = f.field().clone();
        if f.is_zero() {
            return Ok(LocalSeries::zero(self.point.clone(), &field, prec));
        }
        let (v, a, b) = match &self.point {
            ClosedPoint::Finite(p) => {
                let (en, a) = f.num().split_off(p);
                let (ed, b) = f.den().split_off(p);
                (en as i64 - ed as i64, a, b)
            }
            ClosedPoint::Infinity => (
                f.den().deg() - f.num().deg(),
                f.num().clone(),
                f.den().clone(),
            ),
        };
        if prec <= v {
            return Err(AdeleError::NoSignificantDigits {
                prec,
                valuation: v,
            });
        }
        let rel = (prec - v) as usize;
        let ad = self.unit_digits(&a, rel);
        let bd = self.unit_digits(&b, rel);
        let digits = mul_trunc(&self.kappa, &ad, &inv_trunc(&self.kappa, &bd, rel)?, rel);
        Ok(LocalSeries::new(
            self.point.clone(),
            self.kappa.clone(),
            v,
            digits,
            prec,
        ))
    }
}

/// The image of `f` in the completion at `x`, modulo `pi_x^prec`.
pub fn expand<K: BaseField>(f: &Rat<K>, x: &ClosedPoint<K>, prec: i64) -> Result<LocalSeries<K>> {
    Chart::new(x, f.field()).expand(f, prec)
}

/// Valuation of an exact or series-valued local element.
pub fn valuation_of_rat<K: Field>(f: &Rat<K>, x: &ClosedPoint<K>) -> Valuation {
    match f.valuation(x) {
        None => Valuation::Infinite,
        Some(v) => Valuation::Exact(v),
    }
}

/// Coordinates with respect to an alternative uniformizer `u` at a point:
/// `u = pi * w(pi)` with `w(0) != 0`. Series in `pi` are re-expressed as
/// series in `u` by substituting the reversion `pi = psi(u)`.
#[derive(Clone, Debug)]
pub struct Reparametrization<K: Field> {
    kappa: ResidueField<K>,
    // digits of psi, psi[0] = 0
    psi: Vec<Poly<K>>,
}

impl<K: BaseField> Reparametrization<K> {
    pub fn new(u: &Rat<K>, x: &ClosedPoint<K>, digits: usize) -> Result<Self> {
        if u.valuation(x) != Some(1) {
            return Err(AdeleError::InvalidInput(format!(
                "{u} is not a uniformizer at {x}"
            )));
        }
        let field = u.field().clone();
        let n = digits + 1;
        let us = expand(u, x, n as i64 + 1)?;
        let kappa = us.residue_field().clone();
        // w = u / pi
        let w: Vec<Poly<K>> = (0..n).map(|i| us.coeff(i as i64 + 1).unwrap()).collect();
        // fixed point psi = s / w(psi)
        let mut psi = vec![kappa.zero(); n];
        psi.resize(n, kappa.zero());
        for _ in 0..n {
            let wpsi = compose_trunc(&kappa, &w, &psi, n);
            let inv = inv_trunc(&kappa, &wpsi, n)?;
            let mut next = vec![kappa.zero(); n];
            next[1..n].clone_from_slice(&inv[..n - 1]);
            psi = next;
        }
        let _ = field;
        Ok(Self { kappa, psi })
    }

    /// Digits of `s` re-expressed in `u`, starting at the same valuation
    /// offset and covering the same relative precision.
    pub fn apply(&self, s: &LocalSeries<K>) -> LocalSeries<K> {
        // s = pi^v * unit(pi); pi^v = u^v * (psi(u)/u)^v
        let rel = s.relative_precision().max(0) as usize;
        let v = s.val_offset();
        let n = rel.min(self.psi.len());
        let unit: Vec<Poly<K>> = (0..n).map(|i| s.coeff(v + i as i64).unwrap_or_else(|| self.kappa.zero())).collect();
        let unit_u = compose_trunc(&self.kappa, &unit, &self.psi, n);
        let ratio: Vec<Poly<K>> = (0..n).map(|i| self.psi.get(i + 1).cloned().unwrap_or_else(|| self.kappa.zero())).collect();
        let mut factor = vec![self.kappa.zero(); n];
        if n > 0 {
            factor[0] = self.kappa.one();
        }
        let base = if v >= 0 { ratio } else { inv_trunc(&self.kappa, &ratio, n).unwrap_or_default() };
        for _ in 0..v.unsigned_abs() {
            factor = mul_trunc(&self.kappa, &factor, &base, n);
        }
        let digits = mul_trunc(&self.kappa, &unit_u, &factor, n);
        LocalSeries::new(
            s.point().clone(),
            self.kappa.clone(),
            v,
            digits,
            v + n as i64,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn digits<K: Field>(s: &LocalSeries<K>, upto: i64) -> Vec<String> {
        (s.val_offset().min(0)..upto).map(|e| s.coeff(e).unwrap().to_string()).collect()
    }

    #[test]
    fn geometric_series_at_origin() {
        // oracle: long division 1/(1-t) = 1 + t + t^2 + ...
        let q = Rationals;
        let f = Rat::parse(&q, "1", "1-t").unwrap();
        let s = expand(&f, &ClosedPoint::origin(&q), 3).unwrap();
        assert_eq!(s.val_offset(), 0);
        assert_eq!(s.abs_prec(), 3);
        assert_eq!(digits(&s, 3), vec!["1", "1", "1"]);
    }

    #[test]
    fn t_at_infinity() {
        let q = Rationals;
        let s = expand(&Rat::t(&q), &ClosedPoint::Infinity, 2).unwrap();
        assert_eq!(s.val_offset(), -1);
        assert_eq!(s.coeffs().len(), 1);
        assert_eq!(s.abs_prec(), 2);
        assert_eq!(s.coeff(0).unwrap().to_string(), "0");
    }

    #[test]
    fn zero_expansion_keeps_precision() {
        let q = Rationals;
        let s = expand(&Rat::zero(&q), &ClosedPoint::Infinity, 7).unwrap();
        assert!(s.is_known_zero());
        assert_eq!(s.valuation(), Valuation::AtLeast(7));
    }

    #[test]
    fn precision_below_valuation_is_rejected() {
        let q = Rationals;
        let f = Rat::parse(&q, "t^3", "1").unwrap();
        let err = expand(&f, &ClosedPoint::origin(&q), 3).unwrap_err();
        assert_eq!(err, AdeleError::NoSignificantDigits { prec: 3, valuation: 3 });
    }

    #[test]
    fn product_of_truncations() {
        // (1+pi+O(pi^3)) (1-pi+O(pi^3)) = 1 - pi^2 + O(pi^3) by convolution
        let q = Rationals;
        let x = ClosedPoint::origin(&q);
        let one = Poly::one(&q);
        let kappa = x.residue_field(&q);
        let a = LocalSeries::new(x.clone(), kappa.clone(), 0, vec![one.clone(), one.clone()], 3);
        let b = LocalSeries::new(x.clone(), kappa, 0, vec![one.clone(), one.neg()], 3);
        let c = a.mul(&b).unwrap();
        assert_eq!(digits(&c, 3), vec!["1", "0", "-1"]);
        assert_eq!(c.abs_prec(), 3);
    }

    #[test]
    fn invert_one_plus_pi() {
        let q = Rationals;
        let x = ClosedPoint::origin(&q);
        let one = Poly::one(&q);
        let a = LocalSeries::new(x.clone(), x.residue_field(&q), 0, vec![one.clone(), one], 4);
        let inv = a.invert().unwrap();
        assert_eq!(digits(&inv, 4), vec!["1", "-1", "1", "-1"]);
        assert_eq!(inv.abs_prec(), 4);
    }

    #[test]
    fn invert_precision_limited_zero_is_distinct_error() {
        let q = Rationals;
        let z = LocalSeries::zero(ClosedPoint::origin(&q), &q, 5);
        assert!(matches!(z.invert(), Err(AdeleError::InsufficientPrecision(_))));
        assert_eq!(z.valuation(), Valuation::AtLeast(5));
    }

    #[test]
    fn add_zero_is_identity() {
        let k = PrimeField::new(5).unwrap();
        let x = ClosedPoint::parse(&k, "t^2+2").unwrap();
        let f = Rat::parse(&k, "t^3+1", "t^2+2").unwrap();
        let s = expand(&f, &x, 6).unwrap();
        let z = LocalSeries::zero(x.clone(), &k, 6);
        assert_eq!(s.add(&z).unwrap(), s);
    }

    #[test]
    fn cohen_lift_satisfies_label_equation() {
        // expanding the label p itself must give exactly pi
        let k = PrimeField::new(5).unwrap();
        for label in ["t^2+2", "t^3+t+1"] {
            let x = ClosedPoint::parse(&k, label).unwrap();
            let p = Rat::parse(&k, label, "1").unwrap();
            let s = expand(&p, &x, 8).unwrap();
            assert_eq!(s.val_offset(), 1);
            assert_eq!(s.coeffs().len(), 1);
            assert!(s.coeffs()[0].is_one());
        }
    }

    #[test]
    fn reparametrization_preserves_valuation() {
        let q = Rationals;
        let x = ClosedPoint::origin(&q);
        let u = Rat::parse(&q, "t+t^2", "1").unwrap();
        let rep = Reparametrization::new(&u, &x, 8).unwrap();
        // u itself becomes exactly the new uniformizer
        let us = expand(&u, &x, 9).unwrap();
        let r = rep.apply(&us);
        assert_eq!(r.val_offset(), 1);
        assert!(r.coeffs()[0].is_one());
        assert!(r.coeffs()[1..].iter().all(|c| c.is_zero()));
        let f = Rat::parse(&q, "1", "t^2-t^3").unwrap();
        let fs = expand(&f, &x, 6).unwrap();
        assert_eq!(rep.apply(&fs).val_offset(), -2);
    }
}
