//! Coherent sheaves on `P^1` at desk scale: line bundles `O(D)`,
//! skyscrapers, and glued bundles, with their adelic module elements.

use std::collections::BTreeMap;
use std::fmt;

use crate::adele::{Adele, Component};
use crate::divisor::Divisor;
use crate::error::{AdeleError, Result};
use crate::point::{ClosedPoint, ResidueField};
use crate::poly::{BaseField, Poly};
use crate::scheme::{CurvePattern, PatternRing};
use crate::window::Lattice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sheaf<K: BaseField> {
    /// `O(D)`.
    Line(Divisor<K>),
    /// `⊕ kappa(x)^{d_x}` on finitely many closed points.
    Skyscraper(BTreeMap<ClosedPoint<K>, usize>),
    /// A vector bundle given by its lattice datum.
    Bundle(Lattice<K>),
}

impl<K: BaseField> fmt::Display for Sheaf<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Line(d) => {
                let only_inf = d.iter().all(|(x, _)| x.is_infinity());
                if only_inf {
                    write!(f, "O({})", d.degree())
                } else {
                    write!(f, "O({d})")
                }
            }
            Self::Skyscraper(fib) => {
                let parts: Vec<String> = fib.iter().map(|(x, d)| format!("{x},{d}")).collect();
                write!(f, "sky({})", parts.join(";"))
            }
            Self::Bundle(l) => write!(f, "bundle(rank {})", l.rank()),
        }
    }
}

impl<K: BaseField> Sheaf<K> {
    /// `O(n)`, `O(2*[t] + -1*[inf])`, `sky(t,2)` or `sky(t,2;t-1,1)`.
    pub fn parse(field: &K, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Self::Line(Divisor::parse(field, inner)?));
        }
        if let Some(inner) = s.strip_prefix("sky(").and_then(|r| r.strip_suffix(')')) {
            let mut fib = BTreeMap::new();
            for part in inner.split(';') {
                let (x, d) = part
                    .rsplit_once(',')
                    .ok_or_else(|| AdeleError::Parse(format!("expected `point,dim` in `{part}`")))?;
                let d: usize = d
                    .trim()
                    .parse()
                    .map_err(|_| AdeleError::Parse(format!("bad fiber dimension in `{part}`")))?;
                *fib.entry(ClosedPoint::parse(field, x.trim())?).or_insert(0) += d;
            }
            fib.retain(|_, d| *d > 0);
            return Ok(Self::Skyscraper(fib));
        }
        Err(AdeleError::Parse(format!("unknown sheaf descriptor `{s}`")))
    }

    /// The lattice datum of a locally free sheaf.
    pub fn lattice(&self, field: &K) -> Option<Lattice<K>> {
        match self {
            Self::Line(d) => Some(Lattice::line(field, d)),
            Self::Bundle(l) => Some(l.clone()),
            Self::Skyscraper(_) => None,
        }
    }

    /// `dim_k` of the global fiber data of a skyscraper.
    pub fn skyscraper_dim(&self) -> Option<usize> {
        match self {
            Self::Skyscraper(fib) => Some(fib.iter().map(|(x, d)| d * x.degree()).sum()),
            _ => None,
        }
    }
}

/// An element of `A^n(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleAdele<K: BaseField> {
    /// An adele satisfying the `O(D)` bounds.
    Twisted { divisor: Divisor<K>, adele: Adele<K> },
    /// Fiber vectors (over `kappa(x)`) carried by the pattern `(x, ..., x)`;
    /// every other pattern is zero.
    Skyscraper { level: usize, data: BTreeMap<ClosedPoint<K>, Vec<Poly<K>>> },
}

/// Data for [`module_adele`].
#[derive(Clone, Debug)]
pub enum ModuleData<K: BaseField> {
    Adele(Adele<K>),
    Fibers(BTreeMap<ClosedPoint<K>, Vec<Poly<K>>>),
}

/// Checks `data` against `sheaf` and packages it as a level-`level` element.
pub fn module_adele<K: BaseField>(sheaf: &Sheaf<K>, level: usize, data: ModuleData<K>) -> Result<ModuleAdele<K>> {
    match (sheaf, data) {
        (Sheaf::Line(d), ModuleData::Adele(a)) => {
            if a.level() != level {
                return Err(AdeleError::InvalidInput(format!("adele has level {}, expected {level}", a.level())));
            }
            check_twisted(d, &a)?;
            Ok(ModuleAdele::Twisted { divisor: d.clone(), adele: a })
        }
        (Sheaf::Skyscraper(fib), ModuleData::Fibers(data)) => {
            for (x, v) in &data {
                let dim = fib
                    .get(x)
                    .ok_or_else(|| AdeleError::SupportViolation(format!("data at {x} outside the declared support")))?;
                if v.len() != *dim {
                    return Err(AdeleError::SupportViolation(format!(
                        "fiber at {x} has dimension {dim}, got {} entries",
                        v.len()
                    )));
                }
            }
            let data = data
                .into_iter()
                .map(|(x, v)| {
                    let kappa = match &x {
                        ClosedPoint::Finite(p) => ResidueField::new(p.clone()),
                        ClosedPoint::Infinity => ResidueField::new(Poly::t(v[0].field())),
                    };
                    let v = v.iter().map(|c| kappa.reduce(c)).collect();
                    (x, v)
                })
                .collect();
            Ok(ModuleAdele::Skyscraper { level, data })
        }
        _ => Err(AdeleError::InvalidInput("data does not match the sheaf kind".into())),
    }
}

/// `v_x(f_x) >= -D_x`: away from the exceptions on the adelic patterns,
/// everywhere on the integral pattern.
fn check_twisted<K: BaseField>(d: &Divisor<K>, a: &Adele<K>) -> Result<()> {
    for (p, c) in CurvePattern::all(a.level()).iter().zip(a.components()) {
        let Component::Local(l) = c else { continue };
        let mut allowed: Vec<ClosedPoint<K>> = l.support().cloned().collect();
        allowed.extend(a.removed().iter().cloned());
        for (x, _) in l.tail().poles()? {
            if allowed.contains(&x) {
                continue;
            }
            let v = l.tail().valuation(&x).unwrap_or(i64::MAX);
            if v < -d.get(&x) {
                return Err(AdeleError::NotRestricted(format!("{p} tail has order {v} at {x}, bound {}", -d.get(&x))));
            }
        }
        if p.ring() == PatternRing::Integral {
            for (x, v) in l.exceptions() {
                match v.min_valuation(x) {
                    Some(m) if m < -d.get(x) => {
                        return Err(AdeleError::NotRestricted(format!("{p} value at {x} has order {m}, bound {}", -d.get(x))));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(())
}

impl<K: BaseField> ModuleAdele<K> {
    pub fn level(&self) -> usize {
        match self {
            Self::Twisted { adele, .. } => adele.level(),
            Self::Skyscraper { level, .. } => *level,
        }
    }

    pub fn coface(&self, i: usize) -> Result<Self> {
        match self {
            Self::Twisted { divisor, adele } => Ok(Self::Twisted {
                divisor: divisor.clone(),
                adele: adele.coface(i)?,
            }),
            Self::Skyscraper { level, data } => {
                if i > level + 1 {
                    return Err(AdeleError::IndexOutOfRange { index: i, level: *level });
                }
                Ok(Self::Skyscraper { level: level + 1, data: data.clone() })
            }
        }
    }

    pub fn codegeneracy(&self, i: usize) -> Result<Self> {
        match self {
            Self::Twisted { divisor, adele } => Ok(Self::Twisted {
                divisor: divisor.clone(),
                adele: adele.codegeneracy(i)?,
            }),
            Self::Skyscraper { level, data } => {
                if *level == 0 || i >= *level {
                    return Err(AdeleError::IndexOutOfRange { index: i, level: *level });
                }
                Ok(Self::Skyscraper { level: level - 1, data: data.clone() })
            }
        }
    }

    /// Fiber data on a pattern (skyscrapers only): empty off `(x, ..., x)`.
    pub fn fiber_component(&self, p: &CurvePattern) -> Option<BTreeMap<ClosedPoint<K>, Vec<Poly<K>>>> {
        match self {
            Self::Skyscraper { data, .. } => Some(if p.ring() == PatternRing::Integral {
                data.clone()
            } else {
                BTreeMap::new()
            }),
            Self::Twisted { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, PrimeField};
    use crate::rat::Rat;

    #[test]
    fn parse_descriptors() {
        let k = PrimeField::new(5).unwrap();
        assert_eq!(Sheaf::parse(&k, "O(3)").unwrap(), Sheaf::Line(Divisor::at_infinity(3)));
        let s = Sheaf::parse(&k, "sky(t,2;t^2+2,1)").unwrap();
        assert_eq!(s.skyscraper_dim(), Some(4));
        assert_eq!(Sheaf::parse(&k, &s.to_string()).unwrap(), s);
        assert!(Sheaf::parse(&k, "Q(3)").is_err());
    }

    #[test]
    fn twisted_bound_for_double_pole() {
        let k = PrimeField::new(5).unwrap();
        let d = Divisor::point(ClosedPoint::origin(&k), 2);
        let f = Rat::parse(&k, "1", "t^2").unwrap();
        let a = Adele::diag(&f, 0).unwrap();
        assert!(module_adele(&Sheaf::Line(d), 0, ModuleData::Adele(a.clone())).is_ok());
        let small = Divisor::point(ClosedPoint::origin(&k), 1);
        assert!(module_adele(&Sheaf::Line(small), 0, ModuleData::Adele(a)).is_err());
    }

    #[test]
    fn skyscraper_support_is_enforced() {
        let k = PrimeField::new(5).unwrap();
        let o = ClosedPoint::origin(&k);
        let sheaf = Sheaf::Skyscraper(BTreeMap::from([(o.clone(), 2)]));
        let v = vec![Poly::constant(&k, k.integer(1)), Poly::constant(&k, k.integer(3))];
        let m = module_adele(&sheaf, 1, ModuleData::Fibers(BTreeMap::from([(o.clone(), v.clone())]))).unwrap();
        let up = m.coface(0).unwrap().coface(2).unwrap();
        let top = CurvePattern::new(3, 4).unwrap();
        assert_eq!(up.fiber_component(&top).unwrap()[&o], v);
        let other = ClosedPoint::rational(&k, &k.integer(1));
        let bad = module_adele(&sheaf, 1, ModuleData::Fibers(BTreeMap::from([(other, v)])));
        assert!(matches!(bad, Err(AdeleError::SupportViolation(_))));
    }
}
