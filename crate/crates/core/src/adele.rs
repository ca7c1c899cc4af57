//! Level-`n` adeles on `P^1`, one component per chain pattern.
//!
//! The rational pattern `(eta, ..., eta)` carries an element of `F`. Every
//! other pattern carries a restricted-product element: finitely many
//! exceptional local values over a rational default tail `r`, whose value at
//! a non-exceptional point `x` is the expansion of `r` at `x`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;

use crate::error::{AdeleError, Result};
use crate::local::{expand_to, LocalElt};
use crate::point::{closed_points, ClosedPoint};
use crate::poly::{BaseField, Poly};
use crate::rat::Rat;
use crate::scheme::{CurvePattern, PatternRing};
use crate::series::Comparison;

/// How a local component behaves away from its exceptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefaultTail<K: BaseField> {
    Zero,
    One,
    Integral(Rat<K>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalComponent<K: BaseField> {
    exceptions: BTreeMap<ClosedPoint<K>, LocalElt<K>>,
    tail: Rat<K>,
}

impl<K: BaseField> LocalComponent<K> {
    pub fn new(exceptions: BTreeMap<ClosedPoint<K>, LocalElt<K>>, tail: Rat<K>) -> Self {
        let mut c = Self { exceptions, tail };
        c.canonicalize();
        c
    }

    pub fn from_tail(tail: DefaultTail<K>, field: &K) -> Self {
        let tail = match tail {
            DefaultTail::Zero => Rat::zero(field),
            DefaultTail::One => Rat::one(field),
            DefaultTail::Integral(r) => r,
        };
        Self::new(BTreeMap::new(), tail)
    }

    /// The diagonal image of `f`: exceptions exactly at its poles.
    pub fn diag(f: &Rat<K>) -> Result<Self> {
        let mut exceptions = BTreeMap::new();
        for (x, _) in f.poles()? {
            exceptions.insert(x, LocalElt::Exact(f.clone()));
        }
        Ok(Self::new(exceptions, f.clone()))
    }

    fn canonicalize(&mut self) {
        let tail = self.tail.clone();
        self.exceptions.retain(|x, v| match v {
            LocalElt::Exact(r) => !(r == &tail && tail.is_integral_at(x)),
            LocalElt::Series(_) => true,
        });
    }

    pub fn exceptions(&self) -> &BTreeMap<ClosedPoint<K>, LocalElt<K>> {
        &self.exceptions
    }

    pub fn tail(&self) -> &Rat<K> {
        &self.tail
    }

    pub fn default_tail(&self) -> DefaultTail<K> {
        if self.tail.is_zero() {
            DefaultTail::Zero
        } else if self.tail.is_one() {
            DefaultTail::One
        } else {
            DefaultTail::Integral(self.tail.clone())
        }
    }

    pub fn value_at(&self, x: &ClosedPoint<K>) -> LocalElt<K> {
        self.exceptions
            .get(x)
            .cloned()
            .unwrap_or_else(|| LocalElt::Exact(self.tail.clone()))
    }

    pub fn support(&self) -> impl Iterator<Item = &ClosedPoint<K>> {
        self.exceptions.keys()
    }

    /// Restricted-product condition: the tail is integral at every point
    /// that is neither exceptional nor in `removed`.
    pub fn is_restricted(&self, removed: &BTreeSet<ClosedPoint<K>>) -> bool {
        let allowed: BTreeSet<ClosedPoint<K>> =
            self.exceptions.keys().chain(removed.iter()).cloned().collect();
        self.tail.poles_within(&allowed)
    }

    /// Membership in `prod O_x`; `None` if a series exception is too coarse.
    pub fn is_integral(&self, removed: &BTreeSet<ClosedPoint<K>>) -> Option<bool> {
        if !self.is_restricted(removed) {
            return Some(false);
        }
        let mut undecided = false;
        for (x, v) in &self.exceptions {
            match v.is_integral(x) {
                Some(false) => return Some(false),
                None => undecided = true,
                Some(true) => {}
            }
        }
        if undecided {
            None
        } else {
            Some(true)
        }
    }

    fn combine(
        &self,
        o: &Self,
        elt: impl Fn(&LocalElt<K>, &LocalElt<K>, &ClosedPoint<K>) -> Result<LocalElt<K>>,
        tail: impl Fn(&Rat<K>, &Rat<K>) -> Rat<K>,
    ) -> Result<Self> {
        let points: BTreeSet<&ClosedPoint<K>> = self.exceptions.keys().chain(o.exceptions.keys()).collect();
        let mut exceptions = BTreeMap::new();
        for x in points {
            let v = elt(&self.value_at(x), &o.value_at(x), x)?;
            exceptions.insert(x.clone(), v);
        }
        Ok(Self::new(exceptions, tail(&self.tail, &o.tail)))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, |a, b, x| a.add(b, x), |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, |a, b, x| a.sub(b, x), |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.combine(o, |a, b, x| a.mul(b, x), |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Self {
        Self {
            exceptions: self.exceptions.iter().map(|(x, v)| (x.clone(), v.neg())).collect(),
            tail: self.tail.neg(),
        }
    }

    /// Componentwise inverse. Zeros of the tail outside the exception set
    /// (and outside `removed`) are first made exceptional.
    pub fn inv(&self, removed: &BTreeSet<ClosedPoint<K>>) -> Result<Self> {
        if self.tail.is_zero() {
            return Err(AdeleError::DivisionByZero);
        }
        let mut exceptions = self.exceptions.clone();
        for (x, _) in self.tail.zeros()? {
            if !removed.contains(&x) {
                exceptions
                    .entry(x)
                    .or_insert_with(|| LocalElt::Exact(self.tail.clone()));
            }
        }
        let mut inv = BTreeMap::new();
        for (x, v) in exceptions {
            inv.insert(x, v.inv()?);
        }
        Ok(Self::new(inv, self.tail.inv()?))
    }

    pub fn compare(&self, o: &Self) -> Result<Comparison> {
        if self.tail != o.tail {
            return Ok(Comparison::NotEqual);
        }
        let mut acc = Comparison::Equal;
        let points: BTreeSet<&ClosedPoint<K>> = self.exceptions.keys().chain(o.exceptions.keys()).collect();
        for x in points {
            acc = acc.and(self.value_at(x).compare(&o.value_at(x), x)?);
            if acc.is_not_equal() {
                break;
            }
        }
        Ok(acc)
    }

    fn restrict(&self, s: &BTreeSet<ClosedPoint<K>>) -> Self {
        let mut c = self.clone();
        c.exceptions.retain(|x, _| !s.contains(x));
        c
    }

    fn extend_by_zero(&self, s: &BTreeSet<ClosedPoint<K>>) -> Self {
        let mut c = self.clone();
        let zero = Rat::zero(self.tail.field());
        for x in s {
            c.exceptions.insert(x.clone(), LocalElt::Exact(zero.clone()));
        }
        c.canonicalize();
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component<K: BaseField> {
    Global(Rat<K>),
    Local(LocalComponent<K>),
}

impl<K: BaseField> Component<K> {
    fn add(&self, o: &Self) -> Result<Self> {
        Ok(match (self, o) {
            (Self::Global(a), Self::Global(b)) => Self::Global(a.add(b)),
            (Self::Local(a), Self::Local(b)) => Self::Local(a.add(b)?),
            _ => return Err(AdeleError::InvalidInput("component kinds differ".into())),
        })
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(match (self, o) {
            (Self::Global(a), Self::Global(b)) => Self::Global(a.mul(b)),
            (Self::Local(a), Self::Local(b)) => Self::Local(a.mul(b)?),
            _ => return Err(AdeleError::InvalidInput("component kinds differ".into())),
        })
    }

    fn neg(&self) -> Self {
        match self {
            Self::Global(a) => Self::Global(a.neg()),
            Self::Local(a) => Self::Local(a.neg()),
        }
    }

    pub fn as_global(&self) -> Option<&Rat<K>> {
        match self {
            Self::Global(r) => Some(r),
            Self::Local(_) => None,
        }
    }

    pub fn as_local(&self) -> Option<&LocalComponent<K>> {
        match self {
            Self::Local(c) => Some(c),
            Self::Global(_) => None,
        }
    }
}

/// An element of `A^n` (or of `A^n` over an open `U = X \ removed`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adele<K: BaseField> {
    field: K,
    level: usize,
    removed: BTreeSet<ClosedPoint<K>>,
    // indexed by the number of closed entries of the pattern
    comps: Vec<Component<K>>,
}

impl<K: BaseField> fmt::Display for Adele<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "adele of level {}", self.level)?;
        for (p, c) in CurvePattern::all(self.level).iter().zip(&self.comps) {
            match c {
                Component::Global(r) => writeln!(f, "  {p}: {r}")?,
                Component::Local(l) => {
                    write!(f, "  {p}: tail {}", l.tail)?;
                    for (x, v) in &l.exceptions {
                        match v {
                            LocalElt::Exact(r) => write!(f, "; {x} -> {r}")?,
                            LocalElt::Series(s) => write!(f, "; {x} -> {s}")?,
                        }
                    }
                    writeln!(f)?;
                }
            }
        }
        Ok(())
    }
}

impl<K: BaseField> Adele<K> {
    /// Components in pattern order; kinds must match the pattern rings.
    pub fn new(field: &K, level: usize, comps: Vec<Component<K>>) -> Result<Self> {
        if comps.len() != level + 2 {
            return Err(AdeleError::InvalidInput(format!(
                "level {level} needs {} components, got {}",
                level + 2,
                comps.len()
            )));
        }
        for (p, c) in CurvePattern::all(level).iter().zip(&comps) {
            let ok = matches!(
                (p.ring(), c),
                (PatternRing::Rational, Component::Global(_)) | (PatternRing::Adelic | PatternRing::Integral, Component::Local(_))
            );
            if !ok {
                return Err(AdeleError::InvalidInput(format!("component kind mismatch at {p}")));
            }
        }
        Ok(Self {
            field: field.clone(),
            level,
            removed: BTreeSet::new(),
            comps,
        })
    }

    fn uniform(field: &K, level: usize, r: &Rat<K>) -> Self {
        let comps = CurvePattern::all(level)
            .iter()
            .map(|p| match p.ring() {
                PatternRing::Rational => Component::Global(r.clone()),
                _ => Component::Local(LocalComponent::new(BTreeMap::new(), r.clone())),
            })
            .collect();
        Self {
            field: field.clone(),
            level,
            removed: BTreeSet::new(),
            comps,
        }
    }

    pub fn zero(field: &K, level: usize) -> Self {
        Self::uniform(field, level, &Rat::zero(field))
    }

    pub fn one(field: &K, level: usize) -> Self {
        Self::uniform(field, level, &Rat::one(field))
    }

    /// `f` placed in every component. The integral pattern is populated as
    /// well, so the result lies in `prod O_x` there only for constants;
    /// [`Adele::validate`] reports this, [`Adele::validate_restricted`] does not.
    pub fn diag(f: &Rat<K>, level: usize) -> Result<Self> {
        let field = f.field().clone();
        let local = LocalComponent::diag(f)?;
        let comps = CurvePattern::all(level)
            .iter()
            .map(|p| match p.ring() {
                PatternRing::Rational => Component::Global(f.clone()),
                _ => Component::Local(local.clone()),
            })
            .collect();
        Ok(Self {
            field,
            level,
            removed: BTreeSet::new(),
            comps,
        })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn removed(&self) -> &BTreeSet<ClosedPoint<K>> {
        &self.removed
    }

    pub fn components(&self) -> &[Component<K>] {
        &self.comps
    }

    pub fn component(&self, p: &CurvePattern) -> Result<&Component<K>> {
        if p.level != self.level {
            return Err(AdeleError::InvalidInput(format!(
                "pattern {p} does not belong to level {}",
                self.level
            )));
        }
        Ok(&self.comps[p.closed])
    }

    /// Replace one component (kind must match the pattern).
    pub fn with_component(&self, p: &CurvePattern, c: Component<K>) -> Result<Self> {
        let mut comps = self.comps.clone();
        comps[p.closed] = c;
        let mut a = Self::new(&self.field, self.level, comps)?;
        a.removed = self.removed.clone();
        Ok(a)
    }

    /// Every point occurring as an exception in some component.
    pub fn support(&self) -> BTreeSet<ClosedPoint<K>> {
        self.comps
            .iter()
            .filter_map(Component::as_local)
            .flat_map(|c| c.support().cloned())
            .collect()
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.level != o.level {
            return Err(AdeleError::InvalidInput(format!(
                "levels differ: {} vs {}",
                self.level, o.level
            )));
        }
        if self.removed != o.removed {
            return Err(AdeleError::InvalidInput("adeles live over different opens".into()));
        }
        Ok(())
    }

    fn zip(&self, o: &Self, f: impl Fn(&Component<K>, &Component<K>) -> Result<Component<K>>) -> Result<Self> {
        self.check_compatible(o)?;
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(Self {
            field: self.field.clone(),
            level: self.level,
            removed: self.removed.clone(),
            comps,
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            level: self.level,
            removed: self.removed.clone(),
            comps: self.comps.iter().map(Component::neg).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let comps = self
            .comps
            .iter()
            .map(|c| {
                Ok(match c {
                    Component::Global(r) => Component::Global(r.inv()?),
                    Component::Local(l) => Component::Local(l.inv(&self.removed)?),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            comps,
            ..self.clone()
        })
    }

    /// Equal, equal modulo the coarsest series precision involved, or not.
    pub fn compare(&self, o: &Self) -> Result<Comparison> {
        self.check_compatible(o)?;
        let mut acc = Comparison::Equal;
        for (a, b) in self.comps.iter().zip(&o.comps) {
            let c = match (a, b) {
                (Component::Global(x), Component::Global(y)) => {
                    if x == y {
                        Comparison::Equal
                    } else {
                        Comparison::NotEqual
                    }
                }
                (Component::Local(x), Component::Local(y)) => x.compare(y)?,
                _ => Comparison::NotEqual,
            };
            acc = acc.and(c);
            if acc.is_not_equal() {
                break;
            }
        }
        Ok(acc)
    }

    /// Restricted-product condition on every non-rational pattern.
    pub fn validate_restricted(&self) -> Result<()> {
        for (p, c) in CurvePattern::all(self.level).iter().zip(&self.comps) {
            if let Component::Local(l) = c {
                if !l.is_restricted(&self.removed) {
                    return Err(AdeleError::NotRestricted(format!(
                        "tail {} of {p} has a pole outside the exceptions",
                        l.tail
                    )));
                }
                if let Some(x) = l.exceptions.keys().find(|x| self.removed.contains(*x)) {
                    return Err(AdeleError::NotRestricted(format!(
                        "{p} has an exception at the removed point {x}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Full membership in `A^n`: restricted everywhere and integral on the
    /// pattern `(x, ..., x)`.
    pub fn validate(&self) -> Result<()> {
        self.validate_restricted()?;
        let top = CurvePattern {
            level: self.level,
            closed: self.level + 1,
        };
        match self.comps[top.closed].as_local().unwrap().is_integral(&self.removed) {
            Some(true) => Ok(()),
            Some(false) => Err(AdeleError::NotRestricted(format!("{top} component is not integral"))),
            None => Err(AdeleError::InsufficientPrecision(format!(
                "integrality of {top} undecided at the stored precision"
            ))),
        }
    }

    /// `d^i: A^n -> A^(n+1)`: the component at a chain `c` is the canonical
    /// image of the component at `face_i(c)`.
    pub fn coface(&self, i: usize) -> Result<Self> {
        if i > self.level + 1 {
            return Err(AdeleError::IndexOutOfRange {
                index: i,
                level: self.level,
            });
        }
        let comps = CurvePattern::all(self.level + 1)
            .iter()
            .map(|c| {
                let src = c.face(i)?;
                let comp = &self.comps[src.closed];
                Ok(match (comp, c.ring()) {
                    (Component::Global(f), PatternRing::Adelic | PatternRing::Integral) => {
                        Component::Local(LocalComponent::diag(f)?.restrict(&self.removed))
                    }
                    (other, _) => other.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            field: self.field.clone(),
            level: self.level + 1,
            removed: self.removed.clone(),
            comps,
        })
    }

    /// `s^i: A^n -> A^(n-1)`: the component at `c` is the component at
    /// `degeneracy_i(c)`.
    pub fn codegeneracy(&self, i: usize) -> Result<Self> {
        if self.level == 0 || i >= self.level {
            return Err(AdeleError::IndexOutOfRange {
                index: i,
                level: self.level,
            });
        }
        let comps = CurvePattern::all(self.level - 1)
            .iter()
            .map(|c| Ok(self.comps[c.degeneracy(i)?.closed].clone()))
            .collect::<Result<_>>()?;
        Ok(Self {
            field: self.field.clone(),
            level: self.level - 1,
            removed: self.removed.clone(),
            comps,
        })
    }

    /// Restriction to `U = X \ s`: components at chains meeting `s` are dropped.
    pub fn restrict(&self, s: &BTreeSet<ClosedPoint<K>>) -> Result<Self> {
        let removed: BTreeSet<_> = self.removed.union(s).cloned().collect();
        let comps = self
            .comps
            .iter()
            .map(|c| match c {
                Component::Local(l) => Component::Local(l.restrict(s)),
                g => g.clone(),
            })
            .collect();
        Ok(Self {
            field: self.field.clone(),
            level: self.level,
            removed,
            comps,
        })
    }

    /// The section of restriction: components at the removed points are set
    /// to zero and the result lives on all of `X`.
    pub fn extend_by_zero(&self) -> Self {
        let comps = self
            .comps
            .iter()
            .map(|c| match c {
                Component::Local(l) => Component::Local(l.extend_by_zero(&self.removed)),
                g => g.clone(),
            })
            .collect();
        Self {
            field: self.field.clone(),
            level: self.level,
            removed: BTreeSet::new(),
            comps,
        }
    }
}

fn random_rat<K: BaseField, R: Rng>(field: &K, rng: &mut R) -> Rat<K> {
    let poly = |deg: usize, rng: &mut R| Poly::new(field.clone(), (0..=deg).map(|_| field.random_elt(rng)).collect());
    let num = poly(rng.gen_range(0..=2), rng);
    let mut den = poly(rng.gen_range(0..=2), rng);
    while den.is_zero() {
        den = poly(1, rng);
    }
    Rat::new(num, den).expect("nonzero denominator")
}

/// Multiplies `r` by a power of the uniformizer at `x` to make it integral there.
fn make_integral<K: BaseField>(r: &Rat<K>, x: &ClosedPoint<K>) -> Rat<K> {
    match r.valuation(x) {
        Some(v) if v < 0 => {
            let u = match x {
                ClosedPoint::Finite(p) => Rat::from_poly(p.clone()),
                ClosedPoint::Infinity => Rat::t(r.field()).inv().expect("t is nonzero"),
            };
            r.mul(&u.pow(-v).expect("nonzero"))
        }
        _ => r.clone(),
    }
}

impl<K: BaseField> Adele<K> {
    /// A random element of `A^level` over a few small closed points, with
    /// exact and series-valued exceptions; the `(x, ..., x)` component is
    /// integral.
    pub fn random<R: Rng>(field: &K, level: usize, rng: &mut R) -> Result<Self> {
        let pool = closed_points(field, 6);
        let comps = CurvePattern::all(level)
            .iter()
            .map(|p| {
                let integral = p.ring() == PatternRing::Integral;
                Ok(match p.ring() {
                    PatternRing::Rational => Component::Global(random_rat(field, rng)),
                    _ => {
                        let tail = if integral {
                            Rat::constant(field, field.random_elt(rng))
                        } else {
                            random_rat(field, rng)
                        };
                        let mut points: BTreeSet<ClosedPoint<K>> = tail.poles()?.into_iter().map(|(x, _)| x).collect();
                        for _ in 0..rng.gen_range(0..=2) {
                            points.insert(pool[rng.gen_range(0..pool.len())].clone());
                        }
                        let mut exceptions = BTreeMap::new();
                        for x in points {
                            let mut r = random_rat(field, rng);
                            if integral {
                                r = make_integral(&r, &x);
                            }
                            let v = if rng.gen_bool(0.3) {
                                LocalElt::Series(expand_to(&r, &x, 6)?)
                            } else {
                                LocalElt::Exact(r)
                            };
                            exceptions.insert(x, v);
                        }
                        Component::Local(LocalComponent::new(exceptions, tail))
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, level, comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::series::expand;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn diag_of_inverse_t() {
        let k = f5();
        let f = Rat::parse(&k, "1", "t").unwrap();
        let a = Adele::diag(&f, 1).unwrap();
        let zero = ClosedPoint::origin(&k);
        let xe = a.component(&CurvePattern::new(1, 1).unwrap()).unwrap().as_local().unwrap();
        assert_eq!(xe.exceptions().keys().collect::<Vec<_>>(), vec![&zero]);
        assert_eq!(xe.default_tail(), DefaultTail::Integral(f.clone()));
        let s = xe.value_at(&zero).to_series(&zero, 3).unwrap();
        assert_eq!(s, expand(&f, &zero, 3).unwrap());
        assert_eq!(s.val_offset(), -1);
        assert_eq!(a.components()[0].as_global(), Some(&f));
        assert!(a.validate_restricted().is_ok());
        assert!(a.validate().is_err());
    }

    #[test]
    fn diag_zero_is_zero() {
        let k = f5();
        for level in 0..=3 {
            assert_eq!(Adele::diag(&Rat::zero(&k), level).unwrap(), Adele::zero(&k, level));
        }
    }

    #[test]
    fn diag_is_multiplicative() {
        let k = f5();
        let f = Rat::parse(&k, "t^2+1", "t^3+t+1").unwrap();
        let g = Rat::parse(&k, "t^3+t+1", "t-2").unwrap();
        let lhs = Adele::diag(&f, 2).unwrap().mul(&Adele::diag(&g, 2).unwrap()).unwrap();
        let rhs = Adele::diag(&f.mul(&g), 2).unwrap();
        assert_eq!(lhs.compare(&rhs).unwrap(), Comparison::Equal);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn coface_of_integral_keeps_local_data() {
        // the (x<eta) component of d^0(a) is the (x) component of a
        let k = f5();
        let x = ClosedPoint::origin(&k);
        let mut exc = BTreeMap::new();
        exc.insert(x.clone(), LocalElt::Exact(Rat::parse(&k, "t^2", "t+1").unwrap()));
        let o = LocalComponent::new(exc, Rat::one(&k));
        let a = Adele::new(&k, 0, vec![Component::Global(Rat::t(&k)), Component::Local(o.clone())]).unwrap();
        // deleting entry 1 of (x, eta) leaves (x): d^1 is the map O -> A there
        let d1 = a.coface(1).unwrap();
        assert_eq!(d1.components()[1], Component::Local(o.clone()));
        let d0 = a.coface(0).unwrap();
        assert_eq!(d0.components()[1], Component::Local(LocalComponent::diag(&Rat::t(&k)).unwrap()));
        for i in 0..2 {
            assert_eq!(a.coface(i).unwrap().codegeneracy(0).unwrap(), a);
        }
    }

    #[test]
    fn inverse_materializes_tail_zeros() {
        let k = f5();
        let r = Rat::parse(&k, "t^2+2", "1").unwrap();
        let c = LocalComponent::new(BTreeMap::new(), r.clone());
        let inv = c.inv(&BTreeSet::new()).unwrap();
        assert!(inv.is_restricted(&BTreeSet::new()));
        let prod = c.mul(&inv).unwrap();
        assert_eq!(prod.compare(&LocalComponent::from_tail(DefaultTail::One, &k)).unwrap(), Comparison::Equal);
    }

    #[test]
    fn restrict_then_extend() {
        let k = f5();
        let a = Adele::diag(&Rat::parse(&k, "1", "t^2-1").unwrap(), 1).unwrap();
        let s: BTreeSet<_> = [ClosedPoint::parse(&k, "t-1").unwrap()].into_iter().collect();
        let r = a.restrict(&s).unwrap();
        assert!(r.validate_restricted().is_ok());
        assert_eq!(r.extend_by_zero().restrict(&s).unwrap(), r);
        let e = r.extend_by_zero();
        let x = ClosedPoint::parse(&k, "t-1").unwrap();
        let comp = e.components()[1].as_local().unwrap();
        assert_eq!(comp.value_at(&x), LocalElt::zero(&k));
    }
}
