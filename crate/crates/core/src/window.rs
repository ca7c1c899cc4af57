//! Lattice data on `P^1` and their finite windows.
//!
//! A rank-`n` lattice datum assigns to each closed point `x` a matrix
//! `phi_x` in `GL_n(K_x)`, equal to a unit matrix away from finitely many
//! points. Its sections are the row vectors `v` in `F^n` with `v phi_x`
//! integral for every `x`. Line bundles `O(D)` use `phi_x = p_x^{D_x}`.

use std::collections::{BTreeMap, BTreeSet};

use crate::adele::LocalComponent;
use crate::cosimplicial::PatternModule;
use crate::divisor::Divisor;
use crate::error::{AdeleError, Result};
use crate::field::Field;
use crate::linalg::{Matrix, SpanTracker};
use crate::local::{expand_to, LocalElt};
use crate::point::{ClosedPoint, ResidueField};
use crate::poly::{BaseField, Poly};
use crate::rat::Rat;
use crate::series::{Chart, Valuation};

type LocalMatrix<K> = Vec<Vec<LocalElt<K>>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice<K: BaseField> {
    field: K,
    rank: usize,
    local: BTreeMap<ClosedPoint<K>, LocalMatrix<K>>,
}

fn identity_local<K: BaseField>(field: &K, n: usize) -> LocalMatrix<K> {
    (0..n)
        .map(|r| {
            (0..n)
                .map(|s| if r == s { LocalElt::one(field) } else { LocalElt::zero(field) })
                .collect()
        })
        .collect()
}

/// Determinant by cofactor expansion (ranks here are small).
pub(crate) fn local_det<K: BaseField>(m: &LocalMatrix<K>, x: &ClosedPoint<K>, field: &K) -> Result<LocalElt<K>> {
    let n = m.len();
    if n == 0 {
        return Ok(LocalElt::one(field));
    }
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = LocalElt::zero(field);
    for c in 0..n {
        let minor: LocalMatrix<K> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = m[0][c].mul(&local_det(&minor, x, field)?, x)?;
        acc = if c % 2 == 0 { acc.add(&term, x)? } else { acc.sub(&term, x)? };
    }
    Ok(acc)
}

impl<K: BaseField> Lattice<K> {
    pub fn new(field: &K, rank: usize, local: BTreeMap<ClosedPoint<K>, LocalMatrix<K>>) -> Result<Self> {
        if rank == 0 {
            return Err(AdeleError::InvalidInput("rank must be positive".into()));
        }
        for (x, m) in &local {
            if m.len() != rank || m.iter().any(|r| r.len() != rank) {
                return Err(AdeleError::InvalidInput(format!("matrix at {x} is not {rank}x{rank}")));
            }
        }
        let mut l = Self { field: field.clone(), rank, local };
        l.local.entry(ClosedPoint::Infinity).or_insert_with(|| identity_local(field, rank));
        Ok(l)
    }

    pub fn trivial(field: &K, rank: usize) -> Self {
        Self::new(field, rank, BTreeMap::new()).expect("positive rank")
    }

    /// `O(D)`.
    pub fn line(field: &K, d: &Divisor<K>) -> Self {
        let mut local = BTreeMap::new();
        for (x, &m) in d.iter() {
            let u = match x {
                ClosedPoint::Finite(p) => Rat::from_poly(p.clone()),
                ClosedPoint::Infinity => Rat::t(field).inv().expect("t is nonzero"),
            };
            local.insert(x.clone(), vec![vec![LocalElt::Exact(u.pow(m).expect("nonzero base"))]]);
        }
        Self::new(field, 1, local).expect("rank 1")
    }

    /// The lattice of an adelic matrix `phi_A` (restricted-product entries):
    /// its value at the exceptions, at the poles of the tail entries, at
    /// the zeros and poles of the tail determinant, and at infinity.
    pub fn from_components(field: &K, entries: &[Vec<LocalComponent<K>>]) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(AdeleError::InvalidInput("adelic matrix must be square and nonempty".into()));
        }
        let mut points: BTreeSet<ClosedPoint<K>> = BTreeSet::new();
        points.insert(ClosedPoint::Infinity);
        let tails: Vec<Vec<Rat<K>>> = entries.iter().map(|r| r.iter().map(|c| c.tail().clone()).collect()).collect();
        for row in entries {
            for c in row {
                points.extend(c.support().cloned());
                for (x, _) in c.tail().poles()? {
                    points.insert(x);
                }
            }
        }
        let det = rat_det(&tails, field);
        if det.is_zero() {
            return Err(AdeleError::InvalidCocycle("default tail matrix is singular".into()));
        }
        for (x, _) in det.divisor()? {
            points.insert(x);
        }
        let mut local = BTreeMap::new();
        for x in points {
            let m = entries.iter().map(|r| r.iter().map(|c| c.value_at(&x)).collect()).collect();
            local.insert(x, m);
        }
        Self::new(field, n, local)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Points where `phi_x` is given explicitly (always includes infinity).
    pub fn points(&self) -> impl Iterator<Item = &ClosedPoint<K>> {
        self.local.keys()
    }

    pub fn matrix_at(&self, x: &ClosedPoint<K>) -> LocalMatrix<K> {
        self.local.get(x).cloned().unwrap_or_else(|| identity_local(&self.field, self.rank))
    }

    /// `E(m)`: `phi_inf` multiplied by `t^{-m}`.
    pub fn twist(&self, m: i64) -> Self {
        let mut l = self.clone();
        let u = LocalElt::Exact(Rat::t(&self.field).pow(-m).expect("t is nonzero"));
        let inf = ClosedPoint::Infinity;
        let phi = l.local.get_mut(&inf).expect("infinity is always present");
        for row in phi.iter_mut() {
            for e in row.iter_mut() {
                *e = e.mul(&u, &inf).expect("exact factor");
            }
        }
        l
    }

    /// `E ⊗ O(D)`: multiply `phi_x` by `p_x^{D_x}`.
    pub fn twist_by(&self, d: &Divisor<K>) -> Result<Self> {
        let line = Self::line(&self.field, d);
        let mut l = self.clone();
        for (x, m) in &line.local {
            let u = &m[0][0];
            let phi = l.local.entry(x.clone()).or_insert_with(|| identity_local(&self.field, self.rank));
            for row in phi.iter_mut() {
                for e in row.iter_mut() {
                    *e = e.mul(u, x)?;
                }
            }
        }
        Ok(l)
    }

    pub fn det_valuation(&self, x: &ClosedPoint<K>) -> Result<i64> {
        let d = local_det(&self.matrix_at(x), x, &self.field)?;
        match d.valuation(x) {
            Valuation::Exact(v) => Ok(v),
            Valuation::Infinite => Err(AdeleError::InvalidCocycle(format!("matrix at {x} is singular"))),
            Valuation::AtLeast(p) => Err(AdeleError::InsufficientPrecision(format!(
                "determinant at {x} is zero modulo pi^{p}"
            ))),
        }
    }

    /// Smallest valuation among the entries of `phi_x`.
    pub fn min_valuation(&self, x: &ClosedPoint<K>) -> i64 {
        self.matrix_at(x)
            .iter()
            .flatten()
            .filter_map(|e| e.min_valuation(x))
            .min()
            .unwrap_or(0)
    }

    /// `sum_x v_x(det phi_x) deg(x)`.
    pub fn degree(&self) -> Result<i64> {
        let mut d = 0;
        for x in self.local.keys() {
            d += self.det_valuation(x)? * x.degree() as i64;
        }
        Ok(d)
    }

    /// Whether the global row vector `v` is a section: `v phi_x` integral
    /// at every point.
    pub fn is_section(&self, v: &[Rat<K>]) -> Result<bool> {
        if v.len() != self.rank {
            return Err(AdeleError::RankMismatch(v.len(), self.rank));
        }
        let mut points: BTreeSet<ClosedPoint<K>> = self.local.keys().cloned().collect();
        for f in v {
            points.extend(f.poles()?.into_iter().map(|(x, _)| x));
        }
        for x in &points {
            let vals: Vec<LocalElt<K>> = v.iter().map(|f| LocalElt::Exact(f.clone())).collect();
            if !self.is_integral_at(x, &vals)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `u phi_x` is integral; an undecidable series is an error.
    pub fn is_integral_at(&self, x: &ClosedPoint<K>, u: &[LocalElt<K>]) -> Result<bool> {
        let phi = self.matrix_at(x);
        for s in 0..self.rank {
            let mut acc = LocalElt::zero(&self.field);
            for (r, b) in u.iter().enumerate() {
                acc = acc.add(&phi[r][s].mul(b, x)?, x)?;
            }
            match acc.is_integral(x) {
                Some(true) => {}
                Some(false) => return Ok(false),
                None => {
                    return Err(AdeleError::InsufficientPrecision(format!(
                        "integrality at {x} not decided at the given precision"
                    )))
                }
            }
        }
        Ok(true)
    }
}

/// Determinant of a small matrix of rational functions.
pub fn rat_det<K: BaseField>(m: &[Vec<Rat<K>>], field: &K) -> Rat<K> {
    let n = m.len();
    match n {
        0 => Rat::one(field),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Rat::zero(field);
            for c in 0..n {
                let minor: Vec<Vec<Rat<K>>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = m[0][c].mul(&rat_det(&minor, field));
                acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// A finite window: support points, pole bounds and a uniform precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window<K: Field> {
    pub support: Vec<ClosedPoint<K>>,
    pub pole_bound: Divisor<K>,
    pub precision: i64,
}

impl<K: BaseField> Window<K> {
    /// The smallest window on which the windowed complex is exact for `l`.
    pub fn minimal(l: &Lattice<K>) -> Result<Self> {
        let n = l.rank as i64;
        let mut pole = Divisor::zero();
        let mut precision = 0;
        for x in l.local.keys() {
            let minv = l.min_valuation(x);
            let p = (l.det_valuation(x)? - (n - 1) * minv).max(0);
            pole.add_at(x.clone(), p);
            precision = precision.max(-minv);
        }
        Ok(Self {
            support: l.local.keys().cloned().collect(),
            pole_bound: pole,
            precision,
        })
    }

    /// Whether `self` contains the minimal window of `l`.
    pub fn is_valid_for(&self, l: &Lattice<K>) -> Result<bool> {
        let m = Self::minimal(l)?;
        let s: BTreeSet<&ClosedPoint<K>> = self.support.iter().collect();
        Ok(self.precision >= m.precision
            && m.support.iter().all(|x| s.contains(x))
            && m.pole_bound.iter().all(|(x, &p)| self.pole_bound.get(x) >= p))
    }

    /// Grow every pole bound by `dp` and add `extra` support points.
    pub fn enlarged(&self, dp: i64, extra: &[ClosedPoint<K>]) -> Self {
        let mut support: BTreeSet<ClosedPoint<K>> = self.support.iter().cloned().collect();
        support.extend(extra.iter().cloned());
        let mut pole = Divisor::zero();
        for x in &support {
            pole.add_at(x.clone(), (self.pole_bound.get(x) + dp).max(0));
        }
        Self {
            support: support.into_iter().collect(),
            pole_bound: pole,
            precision: self.precision,
        }
    }

    pub fn with_pole_bound(&self, x: &ClosedPoint<K>, p: i64) -> Self {
        let mut w = self.clone();
        if !w.support.contains(x) {
            w.support.push(x.clone());
            w.support.sort();
        }
        let cur = w.pole_bound.get(x);
        w.pole_bound.add_at(x.clone(), p - cur);
        w
    }
}

struct PointBlock<K: BaseField> {
    point: ClosedPoint<K>,
    kappa: ResidueField<K>,
    pole: i64,
    offset: usize,
}

impl<K: BaseField> PointBlock<K> {
    fn width(&self, prec: i64) -> usize {
        (self.pole + prec) as usize * self.kappa.degree()
    }
}

/// One H^1 representative: the rational function `value` placed in row
/// `row` at the single point `point`, zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Rep<K: BaseField> {
    pub point: ClosedPoint<K>,
    pub row: usize,
    pub value: Rat<K>,
}

/// The windowed slices `F_W = L(P)^n`, `Lambda_W` and `A_W` of the adelic
/// complex of a lattice, with the inclusions `F_W -> A_W`, `Lambda_W -> A_W`.
pub struct LatticeWindow<K: BaseField> {
    field: K,
    rank: usize,
    window: Window<K>,
    blocks: Vec<PointBlock<K>>,
    dim_a: usize,
    f_basis: Vec<Rat<K>>,
    f_to_a: Matrix<K>,
    lambda: Matrix<K>,
}

impl<K: BaseField> LatticeWindow<K> {
    pub fn new(l: &Lattice<K>, window: &Window<K>) -> Result<Self> {
        let field = l.field.clone();
        let n = l.rank;
        let prec = window.precision;
        let mut blocks = Vec::new();
        let mut offset = 0;
        for x in &window.support {
            let b = PointBlock {
                point: x.clone(),
                kappa: x.residue_field(&field),
                pole: window.pole_bound.get(x).max(0),
                offset,
            };
            offset += n * b.width(prec);
            blocks.push(b);
        }
        let dim_a = offset;

        // F_W: t^i / Q with Q the finite part of the pole divisor
        let mut q = Poly::one(&field);
        for b in &blocks {
            if let ClosedPoint::Finite(p) = &b.point {
                q = q.mul(&p.pow(b.pole as u32));
            }
        }
        let p_inf = window.pole_bound.get(&ClosedPoint::Infinity).max(0);
        let top = q.deg() + p_inf;
        let qr = Rat::from_poly(q.clone());
        let f_basis: Vec<Rat<K>> = (0..=top)
            .map(|i| Rat::from_poly(Poly::monomial(&field, field.one(), i as usize)).div(&qr).expect("Q is nonzero"))
            .collect();

        let mut w = Self {
            field: field.clone(),
            rank: n,
            window: window.clone(),
            blocks,
            dim_a,
            f_basis,
            f_to_a: Matrix::zeros(&field, dim_a, 0),
            lambda: Matrix::zeros(&field, dim_a, 0),
        };
        w.f_to_a = w.build_f_map()?;
        w.lambda = w.build_lambda(l)?;
        Ok(w)
    }

    fn index(&self, b: usize, r: usize, e: i64, c: usize) -> usize {
        let blk = &self.blocks[b];
        let d = blk.kappa.degree();
        let per_row = blk.width(self.window.precision);
        blk.offset + r * per_row + ((e + blk.pole) as usize) * d + c
    }

    fn build_f_map(&self) -> Result<Matrix<K>> {
        let nb = self.f_basis.len();
        let mut m = Matrix::zeros(&self.field, self.dim_a, self.rank * nb);
        let prec = self.window.precision;
        for (bi, blk) in self.blocks.iter().enumerate() {
            let mut chart = Chart::new(&blk.point, &self.field);
            for (i, f) in self.f_basis.iter().enumerate() {
                let s = match chart.expand(f, prec) {
                    Ok(s) => s,
                    Err(AdeleError::NoSignificantDigits { .. }) => continue,
                    Err(e) => return Err(e),
                };
                for e in -blk.pole..prec {
                    let coeff = s.coeff(e).expect("below precision");
                    if e < -blk.pole && !coeff.is_zero() {
                        return Err(AdeleError::WindowMismatch(format!("basis element {f} exceeds the pole bound at {}", blk.point)));
                    }
                    for (c, v) in blk.kappa.coords(&coeff).into_iter().enumerate() {
                        if self.field.is_zero(&v) {
                            continue;
                        }
                        for r in 0..self.rank {
                            m.set(self.index(bi, r, e, c), r * nb + i, v.clone());
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    fn build_lambda(&self, l: &Lattice<K>) -> Result<Matrix<K>> {
        let n = self.rank;
        let prec = self.window.precision;
        let mut cols: Vec<Vec<K::Elt>> = Vec::new();
        for (bi, blk) in self.blocks.iter().enumerate() {
            let x = &blk.point;
            let d = blk.kappa.degree();
            let pole = blk.pole;
            let phi = l.matrix_at(x);
            let minv = l.min_valuation(x).min(0);
            // digits of phi below exponent `pole` decide the principal part;
            // series[s][r] is phi_rs, so the row vector u maps to u phi
            let mut series = Vec::with_capacity(n);
            for s in 0..n {
                let mut out = Vec::with_capacity(n);
                for e in phi.iter().map(|row| &row[s]) {
                    out.push(match e {
                        LocalElt::Exact(f) => expand_to(f, x, pole)?,
                        s => s.to_series(x, pole)?,
                    });
                }
                series.push(out);
            }
            let lo = -pole + minv;
            let pp_rows = ((-lo).max(0) as usize) * d * n;
            let width = (pole + prec) as usize;
            let ncols = n * width * d;
            let mut pp = Matrix::zeros(&self.field, pp_rows, ncols);
            let pp_index = |r: usize, e: i64, c: usize| (r * (-lo) as usize + (e - lo) as usize) * d + c;
            for s in 0..n {
                for ei in 0..width {
                    let e = ei as i64 - pole;
                    for c in 0..d {
                        let col = (s * width + ei) * d + c;
                        let alpha = Poly::monomial(&self.field, self.field.one(), c);
                        for r in 0..n {
                            let ser = &series[r][s];
                            for f in minv..pole {
                                if f + e >= 0 {
                                    break;
                                }
                                let Some(g) = ser.coeff(f) else { break };
                                if g.is_zero() {
                                    continue;
                                }
                                let prod = blk.kappa.mul(&alpha, &g);
                                for (cc, v) in blk.kappa.coords(&prod).into_iter().enumerate() {
                                    if !self.field.is_zero(&v) {
                                        let row = pp_index(r, f + e, cc);
                                        let cur = pp.get(row, col).clone();
                                        pp.set(row, col, self.field.add(&cur, &v));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            for v in pp.kernel() {
                let mut full = vec![self.field.zero(); self.dim_a];
                for s in 0..n {
                    for ei in 0..width {
                        for c in 0..d {
                            full[self.index(bi, s, ei as i64 - pole, c)] = v[(s * width + ei) * d + c].clone();
                        }
                    }
                }
                cols.push(full);
            }
        }
        Ok(Matrix::from_cols(&self.field, self.dim_a, &cols))
    }

    pub fn window(&self) -> &Window<K> {
        &self.window
    }

    pub fn dim_f(&self) -> usize {
        self.f_to_a.cols()
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_lambda(&self) -> usize {
        self.lambda.cols()
    }

    pub fn module(&self) -> PatternModule<K> {
        PatternModule::new(&self.field, self.f_to_a.clone(), self.lambda.clone()).expect("same target")
    }

    pub fn f_to_a(&self) -> &Matrix<K> {
        &self.f_to_a
    }

    pub fn lambda(&self) -> &Matrix<K> {
        &self.lambda
    }

    /// The global vector with `F_W` coordinates `coeffs`.
    pub fn global_vector(&self, coeffs: &[K::Elt]) -> Vec<Rat<K>> {
        let nb = self.f_basis.len();
        (0..self.rank)
            .map(|r| {
                let mut acc = Rat::zero(&self.field);
                for (i, f) in self.f_basis.iter().enumerate() {
                    let c = &coeffs[r * nb + i];
                    if !self.field.is_zero(c) {
                        acc = acc.add(&f.mul(&Rat::constant(&self.field, c.clone())));
                    }
                }
                acc
            })
            .collect()
    }

    /// Basis of the window's global sections (row vectors).
    pub fn h0_basis(&self) -> Vec<Vec<Rat<K>>> {
        let neg = self.lambda.scale(&self.field.neg(&self.field.one()));
        let d = self.f_to_a.hstack(&neg);
        let nf = self.dim_f();
        let mut tracker = SpanTracker::new(&self.field, nf);
        let mut out = Vec::new();
        for v in d.kernel() {
            let f = &v[..nf];
            if tracker.insert(f) {
                out.push(self.global_vector(f));
            }
        }
        out
    }

    /// A_W coordinates of a rational adele supported on the window: `values`
    /// maps a support point to a column of rational functions.
    pub fn adele_vector(&self, values: &BTreeMap<ClosedPoint<K>, Vec<Rat<K>>>) -> Result<Vec<K::Elt>> {
        let mut out = vec![self.field.zero(); self.dim_a];
        let prec = self.window.precision;
        for (x, col) in values {
            let bi = self
                .blocks
                .iter()
                .position(|b| &b.point == x)
                .ok_or_else(|| AdeleError::WindowMismatch(format!("{x} is outside the window")))?;
            let blk = &self.blocks[bi];
            for (r, f) in col.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let s = expand_to(f, x, prec)?;
                if s.val_offset() < -blk.pole && !s.is_known_zero() {
                    return Err(AdeleError::WindowMismatch(format!("{f} exceeds the pole bound at {x}")));
                }
                for e in -blk.pole..prec {
                    let coeff = s.coeff(e).expect("below precision");
                    for (c, v) in blk.kappa.coords(&coeff).into_iter().enumerate() {
                        out[self.index(bi, r, e, c)] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rational adeles `t^c p_x^e` (one point, one row) completing the image
    /// of `F_W + Lambda_W` to all of `A_W`.
    pub fn h1_representatives(&self) -> Result<Vec<H1Rep<K>>> {
        let mut tracker = SpanTracker::new(&self.field, self.dim_a);
        for c in 0..self.f_to_a.cols() {
            tracker.insert(&self.f_to_a.col(c));
        }
        for c in 0..self.lambda.cols() {
            tracker.insert(&self.lambda.col(c));
        }
        let mut reps = Vec::new();
        if tracker.rank() == self.dim_a {
            return Ok(reps);
        }
        for blk in &self.blocks {
            let x = &blk.point;
            let (u, step) = match x {
                ClosedPoint::Finite(p) => (Rat::from_poly(p.clone()), Rat::t(&self.field)),
                ClosedPoint::Infinity => (Rat::t(&self.field).inv()?, Rat::t(&self.field).inv()?),
            };
            let exps: Vec<i64> = (1..=blk.pole).map(|e| -e).chain(0..self.window.precision).collect();
            for r in 0..self.rank {
                for &e in &exps {
                    for c in 0..blk.kappa.degree() {
                        let value = step.pow(c as i64)?.mul(&u.pow(e)?);
                        let mut col = vec![Rat::zero(&self.field); self.rank];
                        col[r] = value.clone();
                        let v = self.adele_vector(&BTreeMap::from([(x.clone(), col)]))?;
                        if tracker.insert(&v) {
                            reps.push(H1Rep { point: x.clone(), row: r, value });
                            if tracker.rank() == self.dim_a {
                                return Ok(reps);
                            }
                        }
                    }
                }
            }
        }
        Err(AdeleError::WindowMismatch("candidate adeles do not span the window".into()))
    }

    /// `(dim H^0, dim H^1)` of the windowed complex.
    pub fn h0_h1(&self) -> (usize, usize) {
        self.module().h0_h1()
    }
}

/// `dim H^0` alone, through the smallest valid window.
pub fn h0_dim<K: BaseField>(l: &Lattice<K>) -> Result<usize> {
    let w = Window::minimal(l)?;
    Ok(LatticeWindow::new(l, &w)?.h0_h1().0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn h<K: BaseField>(l: &Lattice<K>) -> (usize, usize) {
        LatticeWindow::new(l, &Window::minimal(l).unwrap()).unwrap().h0_h1()
    }

    #[test]
    fn line_bundles_on_f5() {
        let k = PrimeField::new(5).unwrap();
        for n in -6..=6i64 {
            let l = Lattice::line(&k, &Divisor::at_infinity(n));
            assert_eq!(h(&l), ((n + 1).max(0) as usize, (-n - 1).max(0) as usize), "O({n})");
            assert_eq!(l.degree().unwrap(), n);
        }
    }

    #[test]
    fn divisor_at_degree_two_point() {
        let k = PrimeField::new(5).unwrap();
        let x = ClosedPoint::parse(&k, "t^2+2").unwrap();
        let d = Divisor::point(x, 1).add(&Divisor::point(ClosedPoint::origin(&k), -4));
        let l = Lattice::line(&k, &d);
        assert_eq!(l.degree().unwrap(), -2);
        assert_eq!(h(&l), (0, 1));
    }

    #[test]
    fn anchor_t_at_origin_is_o1() {
        let k = Rationals;
        let t = Rat::t(&k);
        let l = Lattice::new(&k, 1, BTreeMap::from([(ClosedPoint::origin(&k), vec![vec![LocalElt::Exact(t)]])])).unwrap();
        assert_eq!(l.degree().unwrap(), 1);
        let w = LatticeWindow::new(&l, &Window::minimal(&l).unwrap()).unwrap();
        assert_eq!(w.h0_h1(), (2, 0));
        for v in w.h0_basis() {
            assert!(l.is_section(&v).unwrap());
        }
    }

    #[test]
    fn rank_two_splitting_examples() {
        let k = PrimeField::new(5).unwrap();
        let t = Rat::t(&k);
        let ti = t.inv().unwrap();
        let o = ClosedPoint::origin(&k);
        let e = |a: Rat<PrimeField>| LocalElt::Exact(a);
        let diag = Lattice::new(&k, 2, BTreeMap::from([(o.clone(), vec![vec![e(t.clone()), e(Rat::zero(&k))], vec![e(Rat::zero(&k)), e(ti.clone())]])])).unwrap();
        let unip = Lattice::new(&k, 2, BTreeMap::from([(o, vec![vec![e(t.clone()), e(Rat::one(&k))], vec![e(Rat::zero(&k)), e(ti)]])])).unwrap();
        // O(1) + O(-1) against O + O
        assert_eq!(h(&diag.twist(-1)).0, 1);
        assert_eq!(h(&unip.twist(-1)).0, 0);
        assert_eq!(diag.degree().unwrap(), 0);
        assert_eq!(h(&diag).0, 2);
        assert_eq!(h(&unip).0, 2);
    }

    #[test]
    fn h1_representatives_span_the_cokernel() {
        let k = PrimeField::new(5).unwrap();
        let l = Lattice::line(&k, &Divisor::at_infinity(-4));
        let w = LatticeWindow::new(&l, &Window::minimal(&l).unwrap().enlarged(1, &[ClosedPoint::origin(&k)])).unwrap();
        assert_eq!(w.h0_h1(), (0, 3));
        assert_eq!(w.h1_representatives().unwrap().len(), 3);
    }
}
