//! Descent data for vector bundles on `P^1`: cocycles in `GL_n` of level-1
//! adeles, gluing, invariants, gauge equivalence and Weil reduction.
//!
//! Conventions: the gauge group `GL_n(A^0) = GL_n(F) x GL_n(O)` acts by
//! `phi -> d^0(g) phi d^1(g)^{-1}`, so on the adelic component
//! `psi_A = g_F phi_A g_O^{-1}`. Sections of the glued bundle are row
//! vectors `v` with `v phi_x` integral everywhere, which makes the idele
//! `t` at the origin glue to `O(1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;

use crate::adele::{Adele, Component, LocalComponent};
use crate::cohomology::{adelic_cohomology, WindowPolicy};
use crate::error::{AdeleError, Result};
use crate::local::LocalElt;
use crate::module::Sheaf;
use crate::point::{closed_points, ClosedPoint};
use crate::poly::{BaseField, Poly};
use crate::rat::Rat;
use crate::scheme::CurvePattern;
use crate::series::Comparison;
use crate::window::{h0_dim, rat_det, Lattice};

pub type AdeleMatrix<K> = Vec<Vec<Adele<K>>>;

fn check_square<T>(m: &[Vec<T>]) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(AdeleError::InvalidInput("matrix must be square and nonempty".into()));
    }
    Ok(n)
}

pub fn mat_mul<K: BaseField>(a: &AdeleMatrix<K>, b: &AdeleMatrix<K>) -> Result<AdeleMatrix<K>> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = Vec::with_capacity(n);
        for s in 0..n {
            let mut acc = a[r][0].mul(&b[0][s])?;
            for k in 1..n {
                acc = acc.add(&a[r][k].mul(&b[k][s])?)?;
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

pub fn mat_identity<K: BaseField>(field: &K, n: usize, level: usize) -> AdeleMatrix<K> {
    (0..n)
        .map(|r| {
            (0..n)
                .map(|s| if r == s { Adele::one(field, level) } else { Adele::zero(field, level) })
                .collect()
        })
        .collect()
}

pub fn mat_coface<K: BaseField>(a: &AdeleMatrix<K>, i: usize) -> Result<AdeleMatrix<K>> {
    a.iter().map(|r| r.iter().map(|e| e.coface(i)).collect()).collect()
}

/// Inverse of a small matrix of rational functions.
pub fn rat_inverse<K: BaseField>(m: &[Vec<Rat<K>>], field: &K) -> Result<Vec<Vec<Rat<K>>>> {
    let n = check_square(m)?;
    let det = rat_det(m, field);
    if det.is_zero() {
        return Err(AdeleError::DivisionByZero);
    }
    let dinv = det.inv()?;
    let mut out = vec![vec![Rat::zero(field); n]; n];
    for r in 0..n {
        for s in 0..n {
            let minor: Vec<Vec<Rat<K>>> = (0..n)
                .filter(|&i| i != s)
                .map(|i| (0..n).filter(|&j| j != r).map(|j| m[i][j].clone()).collect())
                .collect();
            let c = rat_det(&minor, field).mul(&dinv);
            out[r][s] = if (r + s) % 2 == 0 { c } else { c.neg() };
        }
    }
    Ok(out)
}

fn comp_det<K: BaseField>(m: &[Vec<LocalComponent<K>>]) -> Result<LocalComponent<K>> {
    let n = m.len();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc: Option<LocalComponent<K>> = None;
    for c in 0..n {
        let minor: Vec<Vec<LocalComponent<K>>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = m[0][c].mul(&comp_det(&minor)?)?;
        let term = if c % 2 == 0 { term } else { term.neg() };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("nonempty"))
}

/// Inverse in `GL_n` of a restricted product (integral or adelic entries).
pub fn comp_inverse<K: BaseField>(m: &[Vec<LocalComponent<K>>]) -> Result<Vec<Vec<LocalComponent<K>>>> {
    let n = check_square(m)?;
    let dinv = comp_det(m)?.inv(&BTreeSet::new())?;
    let mut out = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = Vec::with_capacity(n);
        for s in 0..n {
            let c = if n == 1 {
                dinv.clone()
            } else {
                let minor: Vec<Vec<LocalComponent<K>>> = (0..n)
                    .filter(|&i| i != s)
                    .map(|i| (0..n).filter(|&j| j != r).map(|j| m[i][j].clone()).collect())
                    .collect();
                comp_det(&minor)?.mul(&dinv)?
            };
            row.push(if (r + s) % 2 == 0 { c } else { c.neg() });
        }
        out.push(row);
    }
    Ok(out)
}

/// A level-0 gauge `g = (g_F, g_O)` in `GL_n(F) x GL_n(O)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gauge<K: BaseField> {
    pub g_f: Vec<Vec<Rat<K>>>,
    pub g_o: Vec<Vec<LocalComponent<K>>>,
}

impl<K: BaseField> Gauge<K> {
    pub fn identity(field: &K, n: usize) -> Self {
        let one = |r: usize, s: usize| if r == s { Rat::one(field) } else { Rat::zero(field) };
        Self {
            g_f: (0..n).map(|r| (0..n).map(|s| one(r, s)).collect()).collect(),
            g_o: (0..n)
                .map(|r| (0..n).map(|s| LocalComponent::new(BTreeMap::new(), one(r, s))).collect())
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.g_f.len()
    }

    /// `g_O` must be integral with unit determinant; `g_F` invertible.
    pub fn check(&self, field: &K) -> Result<()> {
        let n = check_square(&self.g_f)?;
        if check_square(&self.g_o)? != n {
            return Err(AdeleError::RankMismatch(self.g_o.len(), n));
        }
        if rat_det(&self.g_f, field).is_zero() {
            return Err(AdeleError::InvalidInput("g_F is singular".into()));
        }
        let none = BTreeSet::new();
        for c in self.g_o.iter().flatten() {
            if c.is_integral(&none) != Some(true) {
                return Err(AdeleError::InvalidInput("g_O has a non-integral entry".into()));
            }
        }
        let det = comp_det(&self.g_o)?;
        let inv = det.inv(&none)?;
        if inv.is_integral(&none) != Some(true) {
            return Err(AdeleError::InvalidInput("det g_O is not a unit everywhere".into()));
        }
        Ok(())
    }

    pub fn to_adeles(&self, field: &K) -> Result<AdeleMatrix<K>> {
        self.g_f
            .iter()
            .zip(&self.g_o)
            .map(|(rf, ro)| {
                rf.iter()
                    .zip(ro)
                    .map(|(f, o)| Adele::new(field, 0, vec![Component::Global(f.clone()), Component::Local(o.clone())]))
                    .collect()
            })
            .collect()
    }

    pub fn inverse(&self, field: &K) -> Result<Self> {
        Ok(Self {
            g_f: rat_inverse(&self.g_f, field)?,
            g_o: comp_inverse(&self.g_o)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Unchecked,
    /// `precision: None` means the identity holds exactly.
    Valid { precision: Option<i64> },
    Invalid { pattern: String, entry: (usize, usize), detail: String },
    /// Some component could not be decided at the stored precision.
    Indeterminate { pattern: String, detail: String },
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unchecked => write!(f, "unchecked"),
            Self::Valid { precision: None } => write!(f, "valid"),
            Self::Valid { precision: Some(p) } => write!(f, "valid to O(pi^{p})"),
            Self::Invalid { pattern, entry, detail } => {
                write!(f, "invalid at {pattern} entry ({}, {}): {detail}", entry.0, entry.1)
            }
            Self::Indeterminate { pattern, detail } => write!(f, "indeterminate at {pattern}: {detail}"),
        }
    }
}

/// An `n x n` matrix of level-1 adeles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle<K: BaseField> {
    field: K,
    entries: AdeleMatrix<K>,
    status: Validation,
}

impl<K: BaseField> Cocycle<K> {
    pub fn new(field: &K, entries: AdeleMatrix<K>) -> Result<Self> {
        check_square(&entries)?;
        if entries.iter().flatten().any(|a| a.level() != 1) {
            return Err(AdeleError::InvalidInput("cocycle entries must be level-1 adeles".into()));
        }
        Ok(Self {
            field: field.clone(),
            entries,
            status: Validation::Unchecked,
        })
    }

    pub fn identity(field: &K, n: usize) -> Self {
        Self::new(field, mat_identity(field, n, 1)).expect("square")
    }

    /// The classical Weil datum `g` in `GL_n(A)` as a cocycle (identity in
    /// the `F` and `O` components).
    pub fn from_weil(field: &K, g: &[Vec<LocalComponent<K>>]) -> Result<Self> {
        let n = check_square(g)?;
        let tails: Vec<Vec<Rat<K>>> = g.iter().map(|r| r.iter().map(|c| c.tail().clone()).collect()).collect();
        let det = rat_det(&tails, field);
        let mut exc: BTreeSet<ClosedPoint<K>> = BTreeSet::new();
        for c in g.iter().flatten() {
            exc.extend(c.support().cloned());
        }
        if det.is_zero() || !det.unit_outside(&exc) {
            return Err(AdeleError::NonUnitTail(format!("det of the default tail is {det}")));
        }
        for c in g.iter().flatten() {
            if !c.is_restricted(&BTreeSet::new()) {
                return Err(AdeleError::NonUnitTail(format!("tail {} has a pole off the exceptions", c.tail())));
            }
        }
        let entries = (0..n)
            .map(|r| {
                (0..n)
                    .map(|s| {
                        let one = if r == s { Rat::one(field) } else { Rat::zero(field) };
                        Adele::new(
                            field,
                            1,
                            vec![
                                Component::Global(one.clone()),
                                Component::Local(g[r][s].clone()),
                                Component::Local(LocalComponent::new(BTreeMap::new(), one)),
                            ],
                        )
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, entries)
    }

    /// The adelic component `phi_A`.
    pub fn to_weil(&self) -> Vec<Vec<LocalComponent<K>>> {
        let p = CurvePattern { level: 1, closed: 1 };
        self.entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|a| a.component(&p).expect("level 1").as_local().expect("adelic").clone())
                    .collect()
            })
            .collect()
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &AdeleMatrix<K> {
        &self.entries
    }

    pub fn status(&self) -> &Validation {
        &self.status
    }

    /// `d^1 phi = d^0 phi * d^2 phi` in `GL_n(A^2)`, pattern by pattern,
    /// plus invertibility of `phi`.
    pub fn validate(&self) -> Validation {
        match self.check_identity() {
            Ok(v) => v,
            Err(AdeleError::InsufficientPrecision(d)) => Validation::Indeterminate {
                pattern: "-".into(),
                detail: d,
            },
            Err(e) => Validation::Invalid {
                pattern: "-".into(),
                entry: (0, 0),
                detail: e.to_string(),
            },
        }
    }

    /// [`Cocycle::validate`] at working precision `n`: an identity that is
    /// known only modulo `pi^p` with `p < n` is indeterminate.
    pub fn validate_at(&self, n: i64) -> Validation {
        match self.validate() {
            Validation::Valid { precision: Some(p) } if p < n => Validation::Indeterminate {
                pattern: "-".into(),
                detail: format!("identity known only modulo pi^{p}, below the working precision {n}"),
            },
            other => other,
        }
    }

    pub fn validated(mut self) -> Self {
        self.status = self.validate();
        self
    }

    fn check_identity(&self) -> Result<Validation> {
        for a in self.entries.iter().flatten() {
            a.validate_restricted()?;
        }
        let d0 = mat_coface(&self.entries, 0)?;
        let d1 = mat_coface(&self.entries, 1)?;
        let d2 = mat_coface(&self.entries, 2)?;
        let rhs = mat_mul(&d0, &d2)?;
        let mut precision: Option<i64> = None;
        for p in CurvePattern::all(2) {
            for (r, (lrow, rrow)) in d1.iter().zip(&rhs).enumerate() {
                for (s, (a, b)) in lrow.iter().zip(rrow).enumerate() {
                    let ca = a.component(&p)?;
                    let cb = b.component(&p)?;
                    let cmp = match (ca, cb) {
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
                    match cmp {
                        Comparison::NotEqual => {
                            return Ok(Validation::Invalid {
                                pattern: p.to_string(),
                                entry: (r, s),
                                detail: "d^1 phi differs from d^0 phi * d^2 phi".into(),
                            })
                        }
                        Comparison::EqualToPrecision(n) => {
                            precision = Some(precision.map_or(n, |q| q.min(n)));
                        }
                        Comparison::Equal => {}
                    }
                }
            }
        }
        // invertibility of the adelic component (and a usable lattice)
        let l = self.lattice()?;
        for x in l.points() {
            l.det_valuation(x)?;
        }
        Ok(Validation::Valid { precision })
    }

    /// The lattice datum of `phi_A`.
    pub fn lattice(&self) -> Result<Lattice<K>> {
        Lattice::from_components(&self.field, &self.to_weil())
    }

    /// `d^0(g) phi d^1(g)^{-1}`.
    pub fn gauge(&self, g: &Gauge<K>) -> Result<Self> {
        if g.rank() != self.rank() {
            return Err(AdeleError::RankMismatch(g.rank(), self.rank()));
        }
        let ga = g.to_adeles(&self.field)?;
        let gi = g.inverse(&self.field)?.to_adeles(&self.field)?;
        let left = mat_coface(&ga, 0)?;
        let right = mat_coface(&gi, 1)?;
        let entries = mat_mul(&mat_mul(&left, &self.entries)?, &right)?;
        Self::new(&self.field, entries)
    }

    /// Entrywise product `phi psi` (used for degree additivity).
    pub fn product(&self, o: &Self) -> Result<Self> {
        if o.rank() != self.rank() {
            return Err(AdeleError::RankMismatch(o.rank(), self.rank()));
        }
        Self::new(&self.field, mat_mul(&self.entries, &o.entries)?)
    }

    /// `phi` times the scalar idele `t^{-m}` at infinity: the cocycle of `E(m)`.
    pub fn twist(&self, m: i64) -> Result<Self> {
        let u = LocalComponent::new(
            BTreeMap::from([(ClosedPoint::Infinity, LocalElt::Exact(Rat::t(&self.field).pow(-m)?))]),
            Rat::one(&self.field),
        );
        let mut scalar = Adele::one(&self.field, 1);
        scalar = scalar.with_component(&CurvePattern { level: 1, closed: 1 }, Component::Local(u))?;
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|a| a.mul(&scalar)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.field, entries)
    }
}

/// A glued bundle with its lattice datum.
#[derive(Clone, Debug)]
pub struct Bundle<K: BaseField> {
    cocycle: Cocycle<K>,
    lattice: Lattice<K>,
    degree: i64,
}

/// Glues a cocycle; it is validated first when unchecked.
pub fn glue<K: BaseField>(phi: &Cocycle<K>) -> Result<Bundle<K>> {
    let status = match phi.status() {
        Validation::Unchecked => phi.validate(),
        s => s.clone(),
    };
    match &status {
        Validation::Valid { .. } => {}
        other => return Err(AdeleError::InvalidCocycle(other.to_string())),
    }
    let lattice = phi.lattice()?;
    let degree = lattice.degree()?;
    let mut cocycle = phi.clone();
    cocycle.status = status;
    Ok(Bundle { cocycle, lattice, degree })
}

impl<K: BaseField> Bundle<K> {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn cocycle(&self) -> &Cocycle<K> {
        &self.cocycle
    }

    pub fn lattice(&self) -> &Lattice<K> {
        &self.lattice
    }

    pub fn twist(&self, m: i64) -> Result<Self> {
        glue(&self.cocycle.twist(m)?)
    }

    /// `dim H^0(E(m))`.
    pub fn h0(&self, m: i64) -> Result<usize> {
        h0_dim(&self.lattice.twist(m))
    }

    /// `(dim H^0(E(m)), dim H^1(E(m)))` through the full adelic engine.
    pub fn cohomology(&self, m: i64) -> Result<(usize, usize)> {
        let field = self.lattice.field().clone();
        let r = adelic_cohomology(&field, &Sheaf::Bundle(self.lattice.twist(m)), &WindowPolicy::default())?;
        if !r.stabilized {
            return Err(AdeleError::NotStabilized { rounds: r.windows_used.len() });
        }
        Ok((r.h(0), r.h(1)))
    }

    /// Splitting type from the `H^0` twist profile.
    pub fn splitting_type(&self) -> Result<Vec<i64>> {
        splitting_from_profile(self.rank(), self.degree, |m| self.h0(m))
    }
}

/// `(a_1 >= ... >= a_n)` with `h(m) = sum max(a_i + m + 1, 0)`.
pub fn splitting_from_profile<F>(n: usize, degree: i64, mut h: F) -> Result<Vec<i64>>
where
    F: FnMut(i64) -> Result<usize>,
{
    const STEPS: usize = 200;
    let mut cache: BTreeMap<i64, usize> = BTreeMap::new();
    let mut eval = |m: i64, cache: &mut BTreeMap<i64, usize>| -> Result<usize> {
        if let Some(v) = cache.get(&m) {
            return Ok(*v);
        }
        let v = h(m)?;
        cache.insert(m, v);
        Ok(v)
    };
    // below the largest summand: h vanishes
    let mut lo = -degree.div_euclid(n as i64) - 1;
    let mut steps = 0;
    while eval(lo, &mut cache)? > 0 {
        lo -= 1;
        steps += 1;
        if steps > STEPS {
            return Err(AdeleError::ProfileNotRealizable("h^0 never vanishes".into()));
        }
    }
    let mut a = Vec::new();
    let mut prev_delta = 0usize;
    let mut m = lo + 1;
    loop {
        let d = eval(m, &mut cache)?
            .checked_sub(eval(m - 1, &mut cache)?)
            .ok_or_else(|| AdeleError::ProfileNotRealizable(format!("h^0 decreases at twist {m}")))?;
        if d < prev_delta || d > n {
            return Err(AdeleError::ProfileNotRealizable(format!("first difference {d} at twist {m}")));
        }
        for _ in prev_delta..d {
            a.push(-m);
        }
        prev_delta = d;
        if d == n {
            break;
        }
        m += 1;
        steps += 1;
        if steps > STEPS {
            return Err(AdeleError::ProfileNotRealizable("profile does not reach full rank".into()));
        }
    }
    if a.iter().sum::<i64>() != degree {
        return Err(AdeleError::ProfileNotRealizable(format!(
            "summands {a:?} do not add up to the degree {degree}"
        )));
    }
    // the next twist must follow the formula as well
    let expected: i64 = a.iter().map(|&ai| (ai + m + 2).max(0)).sum();
    if eval(m + 1, &mut cache)? as i64 != expected {
        return Err(AdeleError::ProfileNotRealizable(format!("twist {} breaks the profile", m + 1)));
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Yes,
    No,
    Indeterminate,
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Yes => "yes",
            Self::No => "no",
            Self::Indeterminate => "indeterminate",
        })
    }
}

/// On `P^1` the splitting type is a complete invariant.
pub fn gauge_equivalent<K: BaseField>(phi: &Cocycle<K>, psi: &Cocycle<K>) -> Result<Equivalence> {
    if phi.rank() != psi.rank() {
        return Err(AdeleError::RankMismatch(phi.rank(), psi.rank()));
    }
    let a = glue(phi)?;
    let b = glue(psi)?;
    if a.degree() != b.degree() {
        return Ok(Equivalence::No);
    }
    Ok(if a.splitting_type()? == b.splitting_type()? {
        Equivalence::Yes
    } else {
        Equivalence::No
    })
}

/// Rank 1: an explicit gauge `g` with `psi = d^0(g) phi d^1(g)^{-1}`,
/// supported on the union of the two cocycles' special points, or `None`.
pub fn witness_gauge<K: BaseField>(phi: &Cocycle<K>, psi: &Cocycle<K>) -> Result<Option<Gauge<K>>> {
    if phi.rank() != 1 || psi.rank() != 1 {
        return Err(AdeleError::Unsupported("witness search is implemented for rank 1".into()));
    }
    let field = phi.field().clone();
    let (lp, lq) = (phi.lattice()?, psi.lattice()?);
    let points: BTreeSet<ClosedPoint<K>> = lp.points().chain(lq.points()).cloned().collect();
    let mut e = BTreeMap::new();
    let mut deg = 0;
    for x in &points {
        let v = lq.det_valuation(x)? - lp.det_valuation(x)?;
        deg += v * x.degree() as i64;
        e.insert(x.clone(), v);
    }
    if deg != 0 {
        return Ok(None);
    }
    let mut f = Rat::one(&field);
    for (x, v) in &e {
        if let ClosedPoint::Finite(p) = x {
            f = f.mul(&Rat::from_poly(p.clone()).pow(*v)?);
        }
    }
    // g_O = g_F phi / psi, a unit at every point
    let a = phi.to_weil()[0][0].clone();
    let b = psi.to_weil()[0][0].clone();
    let fa = LocalComponent::diag(&f)?.mul(&a)?;
    let mut exc = BTreeMap::new();
    for x in &points {
        let q = fa.value_at(x).mul(&b.value_at(x).inv()?, x)?;
        exc.insert(x.clone(), q);
    }
    let tail = fa.tail().div(b.tail())?;
    let g = Gauge {
        g_f: vec![vec![f]],
        g_o: vec![vec![LocalComponent::new(exc, tail)]],
    };
    if g.check(&field).is_err() {
        return Ok(None);
    }
    let moved = phi.gauge(&g)?;
    let same = moved
        .entries()
        .iter()
        .flatten()
        .zip(psi.entries().iter().flatten())
        .map(|(x, y)| x.compare(y))
        .collect::<Result<Vec<_>>>()?;
    Ok(same.iter().all(|c| !c.is_not_equal()).then_some(g))
}

/// Normal form `t^d` at the origin of a rank-1 class, with the moves used.
#[derive(Clone, Debug)]
pub struct DoubleCoset<K: BaseField> {
    pub degree: i64,
    pub normal_form: Cocycle<K>,
    pub gauge: Gauge<K>,
    pub log: Vec<String>,
}

pub fn weil_reduce<K: BaseField>(b: &Bundle<K>) -> Result<DoubleCoset<K>> {
    if b.rank() != 1 {
        return Err(AdeleError::Unsupported("Weil reduction is implemented for line bundles".into()));
    }
    let phi = b.cocycle();
    let field = phi.field().clone();
    let l = b.lattice();
    let d = b.degree();
    let origin = ClosedPoint::origin(&field);
    let mut log = Vec::new();

    // F-move: g_F = t^d / prod p_x^{v_x}
    let mut g_f = Rat::t(&field).pow(d)?;
    for x in l.points() {
        if let ClosedPoint::Finite(p) = x {
            let v = l.det_valuation(x)?;
            g_f = g_f.div(&Rat::from_poly(p.clone()).pow(v)?)?;
        }
    }
    log.push(format!("F-move: multiply by {g_f}"));

    let normal_idele = LocalComponent::new(
        BTreeMap::from([(origin.clone(), LocalElt::Exact(Rat::t(&field).pow(d)?))]),
        Rat::one(&field),
    );
    let moved = LocalComponent::diag(&g_f)?.mul(&phi.to_weil()[0][0])?;
    // O-move: g_O = (g_F phi) / t^d at every special point, a unit
    let mut points: BTreeSet<ClosedPoint<K>> = l.points().cloned().collect();
    points.extend(moved.support().cloned());
    points.insert(origin.clone());
    let mut exc = BTreeMap::new();
    for x in &points {
        let u = moved.value_at(x).mul(&normal_idele.value_at(x).inv()?, x)?;
        if u != LocalElt::one(&field) {
            log.push(format!("O-move at {x}: divide by the unit {}", describe(&u)));
        }
        exc.insert(x.clone(), u);
    }
    let g = Gauge {
        g_f: vec![vec![g_f]],
        g_o: vec![vec![LocalComponent::new(exc, moved.tail().clone())]],
    };
    g.check(&field)?;
    let normal_form = Cocycle::from_weil(&field, &[vec![normal_idele]])?;
    let reduced = phi.gauge(&g)?;
    for (x, y) in reduced.entries().iter().flatten().zip(normal_form.entries().iter().flatten()) {
        if x.compare(y)?.is_not_equal() {
            return Err(AdeleError::InvalidCocycle("reduction does not reach the normal form".into()));
        }
    }
    Ok(DoubleCoset {
        degree: d,
        normal_form,
        gauge: g,
        log,
    })
}

fn describe<K: BaseField>(u: &LocalElt<K>) -> String {
    match u {
        LocalElt::Exact(r) => r.to_string(),
        LocalElt::Series(s) => s.to_string(),
    }
}

fn uniformizer<K: BaseField>(x: &ClosedPoint<K>, field: &K) -> Rat<K> {
    match x {
        ClosedPoint::Finite(p) => Rat::from_poly(p.clone()),
        ClosedPoint::Infinity => Rat::t(field).inv().expect("t is nonzero"),
    }
}

fn random_poly<K: BaseField, R: Rng>(field: &K, deg: usize, rng: &mut R) -> Poly<K> {
    Poly::new(field.clone(), (0..=deg).map(|_| field.random_elt(rng)).collect())
}

fn random_unit<K: BaseField, R: Rng>(field: &K, rng: &mut R) -> K::Elt {
    loop {
        let c = field.random_elt(rng);
        if !field.is_zero(&c) {
            return c;
        }
    }
}

/// A random Weil datum of rank `n`: at one to three points of a small pool,
/// a global matrix `D U` with `D` diagonal in powers of the uniformizer and
/// `U` unipotent; identity elsewhere.
pub fn random_idele<K: BaseField, R: Rng>(field: &K, n: usize, max_exp: i64, rng: &mut R) -> Vec<Vec<LocalComponent<K>>> {
    let pool = closed_points(field, 5);
    let k = rng.gen_range(1..=3usize);
    let mut mats: BTreeMap<ClosedPoint<K>, Vec<Vec<Rat<K>>>> = BTreeMap::new();
    for _ in 0..k {
        let x = pool[rng.gen_range(0..pool.len())].clone();
        let u = uniformizer(&x, field);
        let mut m = vec![vec![Rat::zero(field); n]; n];
        for (r, row) in m.iter_mut().enumerate() {
            let e = rng.gen_range(-max_exp..=max_exp);
            let d = u.pow(e).expect("nonzero").mul(&Rat::constant(field, random_unit(field, rng)));
            for (s, slot) in row.iter_mut().enumerate() {
                *slot = match s.cmp(&r) {
                    std::cmp::Ordering::Equal => d.clone(),
                    std::cmp::Ordering::Greater => {
                        // an off-diagonal entry, occasionally with a pole
                        let c = Rat::from_poly(random_poly(field, 1, rng));
                        let c = if rng.gen_bool(0.5) { c.div(&u).expect("nonzero") } else { c };
                        d.mul(&c)
                    }
                    std::cmp::Ordering::Less => Rat::zero(field),
                };
            }
        }
        mats.insert(x, m);
    }
    (0..n)
        .map(|r| {
            (0..n)
                .map(|s| {
                    let exc = mats.iter().map(|(x, m)| (x.clone(), LocalElt::Exact(m[r][s].clone()))).collect();
                    LocalComponent::new(exc, if r == s { Rat::one(field) } else { Rat::zero(field) })
                })
                .collect()
        })
        .collect()
}

/// A random gauge: `g_F` a product of a diagonal of rational functions and
/// a unipotent matrix; `g_O` a constant invertible matrix times a
/// polynomial unipotent one, with exact unit matrices at infinity and at
/// one random finite point.
pub fn random_gauge<K: BaseField, R: Rng>(field: &K, n: usize, rng: &mut R) -> Gauge<K> {
    let pool = closed_points(field, 5);
    let finite: Vec<&ClosedPoint<K>> = pool.iter().filter(|x| !x.is_infinity()).collect();
    let mut g_f = vec![vec![Rat::zero(field); n]; n];
    for r in 0..n {
        let y = finite[rng.gen_range(0..finite.len())];
        let e = rng.gen_range(-1..=1);
        g_f[r][r] = uniformizer(y, field).pow(e).expect("nonzero").mul(&Rat::constant(field, random_unit(field, rng)));
        for s in r + 1..n {
            let z = finite[rng.gen_range(0..finite.len())];
            g_f[r][s] = Rat::from_poly(random_poly(field, 1, rng))
                .div(&uniformizer(z, field))
                .expect("nonzero");
        }
    }
    // upper unipotent U(t) with polynomial entries, then a constant lower one
    let mut tail = vec![vec![Rat::zero(field); n]; n];
    for r in 0..n {
        for s in 0..n {
            tail[r][s] = match s.cmp(&r) {
                std::cmp::Ordering::Equal => Rat::constant(field, random_unit(field, rng)),
                std::cmp::Ordering::Greater => Rat::from_poly(random_poly(field, 1, rng)),
                std::cmp::Ordering::Less => Rat::zero(field),
            };
        }
    }
    let y = finite[rng.gen_range(0..finite.len())].clone();
    let uy = uniformizer(&y, field);
    let mut at_y = tail.clone();
    for r in 0..n {
        for s in 0..r {
            // lower entries integral at y keep det a unit there
            at_y[r][s] = Rat::from_poly(random_poly(field, 0, rng)).mul(&uy);
        }
    }
    let at_inf: Vec<Vec<Rat<K>>> = (0..n)
        .map(|r| (0..n).map(|s| if r == s { Rat::one(field) } else { Rat::zero(field) }).collect())
        .collect();
    let g_o = (0..n)
        .map(|r| {
            (0..n)
                .map(|s| {
                    let exc = BTreeMap::from([
                        (ClosedPoint::Infinity, LocalElt::Exact(at_inf[r][s].clone())),
                        (y.clone(), LocalElt::Exact(at_y[r][s].clone())),
                    ]);
                    LocalComponent::new(exc, tail[r][s].clone())
                })
                .collect()
        })
        .collect();
    Gauge { g_f, g_o }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn idele_at(field: &PrimeField, x: &ClosedPoint<PrimeField>, m: Vec<Vec<Rat<PrimeField>>>) -> Vec<Vec<LocalComponent<PrimeField>>> {
        let n = m.len();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|s| {
                        let one = if r == s { Rat::one(field) } else { Rat::zero(field) };
                        LocalComponent::new(BTreeMap::from([(x.clone(), LocalElt::Exact(m[r][s].clone()))]), one)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn t_at_origin_glues_o1() {
        let k = k5();
        let o = ClosedPoint::origin(&k);
        let phi = Cocycle::from_weil(&k, &idele_at(&k, &o, vec![vec![Rat::t(&k)]])).unwrap();
        assert_eq!(phi.validate(), Validation::Valid { precision: None });
        let b = glue(&phi).unwrap();
        assert_eq!(b.degree(), 1);
        let prof: Vec<usize> = (0..3).map(|m| b.h0(m).unwrap()).collect();
        assert_eq!(prof, vec![2, 3, 4]);
        assert_eq!(b.splitting_type().unwrap(), vec![1]);
    }

    #[test]
    fn unipotent_entry_changes_the_class() {
        let k = k5();
        let o = ClosedPoint::origin(&k);
        let t = Rat::t(&k);
        let ti = t.inv().unwrap();
        let z = Rat::zero(&k);
        let diag = Cocycle::from_weil(&k, &idele_at(&k, &o, vec![vec![t.clone(), z.clone()], vec![z.clone(), ti.clone()]])).unwrap();
        let unip = Cocycle::from_weil(&k, &idele_at(&k, &o, vec![vec![t, Rat::one(&k)], vec![z, ti]])).unwrap();
        assert_eq!(glue(&diag).unwrap().splitting_type().unwrap(), vec![1, -1]);
        assert_eq!(glue(&unip).unwrap().splitting_type().unwrap(), vec![0, 0]);
        assert_eq!(gauge_equivalent(&diag, &unip).unwrap(), Equivalence::No);
    }

    #[test]
    fn corrupted_integral_part_fails_at_xxeta() {
        let k = k5();
        let phi = Cocycle::identity(&k, 2);
        let mut entries = phi.entries().clone();
        let bad = LocalComponent::new(BTreeMap::new(), Rat::parse(&k, "2", "1").unwrap());
        entries[0][0] = entries[0][0].with_component(&CurvePattern { level: 1, closed: 2 }, Component::Local(bad)).unwrap();
        match Cocycle::new(&k, entries).unwrap().validate() {
            Validation::Invalid { pattern, .. } => assert_eq!(pattern, "(x,x,eta)"),
            other => panic!("expected failure, got {other}"),
        }
    }

    #[test]
    fn coboundaries_validate_and_orbits_share_invariants() {
        let k = k5();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=2 {
            let g = random_gauge(&k, n, &mut rng);
            g.check(&k).unwrap();
            let cob = Cocycle::identity(&k, n).gauge(&g).unwrap();
            assert!(matches!(cob.validate(), Validation::Valid { .. }));
            let phi = Cocycle::from_weil(&k, &random_idele(&k, n, 2, &mut rng)).unwrap();
            let psi = phi.gauge(&g).unwrap();
            let (a, b) = (glue(&phi).unwrap(), glue(&psi).unwrap());
            assert_eq!(a.degree(), b.degree());
            assert_eq!(a.splitting_type().unwrap(), b.splitting_type().unwrap());
        }
    }

    #[test]
    fn weil_reduction_of_a_point_at_one() {
        let k = k5();
        let one = ClosedPoint::rational(&k, &1);
        let p = Rat::parse(&k, "t-1", "1").unwrap();
        let phi = Cocycle::from_weil(&k, &idele_at(&k, &one, vec![vec![p]])).unwrap();
        let dc = weil_reduce(&glue(&phi).unwrap()).unwrap();
        assert_eq!(dc.degree, 1);
        assert_eq!(dc.gauge.g_f[0][0], Rat::parse(&k, "t", "t-1").unwrap());
        assert!(witness_gauge(&phi, &dc.normal_form).unwrap().is_some());
    }
}
