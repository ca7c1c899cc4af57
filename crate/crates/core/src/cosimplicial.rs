//! Finite-dimensional cosimplicial vector spaces and their cochain complexes.

use crate::error::{AdeleError, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::scheme::{degeneracy, face, CurvePattern, PatternRing, Poset};

/// A cosimplicial vector space truncated at some level, given by its
/// coface and codegeneracy matrices.
pub trait Cosimplicial<K: Field> {
    fn field(&self) -> &K;
    fn dim(&self, level: usize) -> usize;
    /// `d^i: C^level -> C^(level+1)`, `0 <= i <= level + 1`.
    fn coface(&self, level: usize, i: usize) -> Matrix<K>;
    /// `s^i: C^level -> C^(level-1)`, `0 <= i < level`.
    fn codegeneracy(&self, level: usize, i: usize) -> Matrix<K>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DoldKan {
    /// `d = sum (-1)^i d^i` on the full cosimplicial object.
    Alternating,
    /// The same differential on `N^k = ∩ ker s^j`.
    Normalized,
}

/// Cochain complex `C^0 -> C^1 -> ...`; `diffs[k]: C^k -> C^(k+1)`.
#[derive(Clone, Debug)]
pub struct CochainComplex<K: Field> {
    pub dims: Vec<usize>,
    pub diffs: Vec<Matrix<K>>,
}

impl<K: Field> CochainComplex<K> {
    /// `d^(k+1) d^k = 0` for every consecutive pair, exactly.
    pub fn is_complex(&self) -> bool {
        self.diffs
            .windows(2)
            .all(|w| w[1].mul(&w[0]).map(|m| m.is_zero()).unwrap_or(false))
    }

    /// `dim H^k` for `k` below the top degree.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.diffs.iter().map(Matrix::rank).collect();
        (0..self.diffs.len())
            .map(|k| {
                let incoming = if k == 0 { 0 } else { ranks[k - 1] };
                self.dims[k] - ranks[k] - incoming
            })
            .collect()
    }
}

/// Alternating-sum differential `C^k -> C^(k+1)`.
pub fn alternating_differential<K: Field, M: Cosimplicial<K> + ?Sized>(m: &M, level: usize) -> Matrix<K> {
    let k = m.field();
    let mut d = Matrix::zeros(k, m.dim(level + 1), m.dim(level));
    for i in 0..=level + 1 {
        let f = m.coface(level, i);
        let f = if i % 2 == 1 { f.scale(&k.neg(&k.one())) } else { f };
        d = d.add(&f).expect("coface shapes agree");
    }
    d
}

/// Basis (as columns in `C^level`) of `∩_j ker s^j`.
pub fn normalized_basis<K: Field, M: Cosimplicial<K> + ?Sized>(m: &M, level: usize) -> Matrix<K> {
    let k = m.field();
    let n = m.dim(level);
    if level == 0 {
        return Matrix::identity(k, n);
    }
    let mut stacked = Matrix::zeros(k, 0, n);
    for j in 0..level {
        stacked = stacked.vstack(&m.codegeneracy(level, j));
    }
    Matrix::from_cols(k, n, &stacked.kernel())
}

/// The complex in degrees `0..=top` (so cohomology in degrees `0..top`).
pub fn dold_kan<K: Field, M: Cosimplicial<K> + ?Sized>(m: &M, mode: DoldKan, top: usize) -> Result<CochainComplex<K>> {
    for level in 0..top {
        let d = alternating_differential(m, level);
        if d.cols() != m.dim(level) || d.rows() != m.dim(level + 1) {
            return Err(AdeleError::WindowMismatch(format!("level {level} dimensions disagree")));
        }
    }
    match mode {
        DoldKan::Alternating => Ok(CochainComplex {
            dims: (0..=top).map(|l| m.dim(l)).collect(),
            diffs: (0..top).map(|l| alternating_differential(m, l)).collect(),
        }),
        DoldKan::Normalized => {
            let bases: Vec<Matrix<K>> = (0..=top).map(|l| normalized_basis(m, l)).collect();
            let mut diffs = Vec::with_capacity(top);
            for l in 0..top {
                let image = alternating_differential(m, l).mul(&bases[l])?;
                let coords = solve_columns(&bases[l + 1], &image).ok_or_else(|| {
                    AdeleError::WindowMismatch(format!("differential leaves the normalized part at level {l}"))
                })?;
                diffs.push(coords);
            }
            Ok(CochainComplex {
                dims: bases.iter().map(Matrix::cols).collect(),
                diffs,
            })
        }
    }
}

/// `X` with `basis * X = rhs`, for `basis` of full column rank.
fn solve_columns<K: Field>(basis: &Matrix<K>, rhs: &Matrix<K>) -> Option<Matrix<K>> {
    let k = basis.field();
    let aug = basis.hstack(rhs);
    let e = aug.echelon();
    let n = basis.cols();
    // full column rank puts the first n pivots on the basis columns
    if e.pivots.len() != n || (n > 0 && e.pivots[n - 1] != n - 1) {
        return None;
    }
    let mut x = Matrix::zeros(k, n, rhs.cols());
    for r in 0..n {
        for c in 0..rhs.cols() {
            x.set(r, c, e.matrix.get(r, n + c).clone());
        }
    }
    Some(x)
}

/// First violated cosimplicial identity among levels `0..=top`, if any.
pub fn check_identities<K: Field, M: Cosimplicial<K> + ?Sized>(m: &M, top: usize) -> Option<String> {
    let k = m.field();
    let eq = |a: &Matrix<K>, b: &Matrix<K>| a == b;
    for n in 0..top {
        // d^j d^i = d^i d^(j-1), i < j
        for j in 0..=n + 2 {
            for i in 0..j {
                let lhs = m.coface(n + 1, j).mul(&m.coface(n, i)).ok()?;
                let rhs = m.coface(n + 1, i).mul(&m.coface(n, j - 1)).ok()?;
                if !eq(&lhs, &rhs) {
                    return Some(format!("d^{j} d^{i} != d^{i} d^{} on level {n}", j - 1));
                }
            }
        }
    }
    for n in 1..=top {
        // s^j d^i relations on C^(n-1) -> C^(n-1) via C^n
        for j in 0..n {
            for i in 0..=n {
                let lhs = m.codegeneracy(n, j).mul(&m.coface(n - 1, i)).ok()?;
                let rhs = if i < j {
                    m.coface(n - 2, i).mul(&m.codegeneracy(n - 1, j - 1)).ok()?
                } else if i == j || i == j + 1 {
                    Matrix::identity(k, m.dim(n - 1))
                } else {
                    m.coface(n - 2, i - 1).mul(&m.codegeneracy(n - 1, j)).ok()?
                };
                if !eq(&lhs, &rhs) {
                    return Some(format!("s^{j} d^{i} identity fails on level {}", n - 1));
                }
            }
        }
        // s^j s^i = s^i s^(j+1), i <= j, on C^(n+1)
        if n < top && n >= 1 {
            for j in 0..n {
                for i in 0..=j {
                    let lhs = m.codegeneracy(n, j).mul(&m.codegeneracy(n + 1, i)).ok()?;
                    let rhs = m.codegeneracy(n, i).mul(&m.codegeneracy(n + 1, j + 1)).ok()?;
                    if !eq(&lhs, &rhs) {
                        return Some(format!("s^{j} s^{i} != s^{i} s^{} on level {}", j + 1, n + 1));
                    }
                }
            }
        }
    }
    None
}

/// A cosimplicial space on curve patterns: at level `n` it is the sum over
/// the patterns `(x^j, eta^(n+1-j))` of a rational part `F`, an adelic part
/// `A`, or an integral part `O`, with the inclusions `F -> A`, `O -> A`.
#[derive(Clone, Debug)]
pub struct PatternModule<K: Field> {
    field: K,
    dim_f: usize,
    dim_a: usize,
    dim_o: usize,
    f_to_a: Matrix<K>,
    o_to_a: Matrix<K>,
}

impl<K: Field> PatternModule<K> {
    pub fn new(field: &K, f_to_a: Matrix<K>, o_to_a: Matrix<K>) -> Result<Self> {
        if f_to_a.rows() != o_to_a.rows() {
            return Err(AdeleError::WindowMismatch(format!(
                "F and O land in spaces of dimension {} and {}",
                f_to_a.rows(),
                o_to_a.rows()
            )));
        }
        Ok(Self {
            field: field.clone(),
            dim_f: f_to_a.cols(),
            dim_a: f_to_a.rows(),
            dim_o: o_to_a.cols(),
            f_to_a,
            o_to_a,
        })
    }

    /// The constant cosimplicial space on a `d`-dimensional space, carried by
    /// the integral patterns alone (the adelization of a skyscraper).
    pub fn constant(field: &K, d: usize) -> Self {
        Self {
            field: field.clone(),
            dim_f: 0,
            dim_a: 0,
            dim_o: d,
            f_to_a: Matrix::zeros(field, 0, 0),
            o_to_a: Matrix::zeros(field, 0, d),
        }
    }

    pub fn f_to_a(&self) -> &Matrix<K> {
        &self.f_to_a
    }

    pub fn o_to_a(&self) -> &Matrix<K> {
        &self.o_to_a
    }

    fn block_dim(&self, p: &CurvePattern) -> usize {
        match p.ring() {
            PatternRing::Rational => self.dim_f,
            PatternRing::Adelic => self.dim_a,
            PatternRing::Integral => self.dim_o,
        }
    }

    fn offsets(&self, level: usize) -> Vec<usize> {
        let mut off = vec![0];
        for p in CurvePattern::all(level) {
            off.push(off.last().unwrap() + self.block_dim(&p));
        }
        off
    }

    fn block(&self, src: PatternRing, dst: PatternRing) -> Matrix<K> {
        use PatternRing::*;
        match (src, dst) {
            (Rational, Adelic) => self.f_to_a.clone(),
            (Integral, Adelic) => self.o_to_a.clone(),
            (Rational, Rational) => Matrix::identity(&self.field, self.dim_f),
            (Adelic, Adelic) => Matrix::identity(&self.field, self.dim_a),
            (Integral, Integral) => Matrix::identity(&self.field, self.dim_o),
            _ => unreachable!("no canonical map {src:?} -> {dst:?}"),
        }
    }

    fn reindex(&self, from: usize, to: usize, src_of: impl Fn(&CurvePattern) -> CurvePattern) -> Matrix<K> {
        let so = self.offsets(from);
        let to_off = self.offsets(to);
        let mut m = Matrix::zeros(&self.field, *to_off.last().unwrap(), *so.last().unwrap());
        for p in CurvePattern::all(to) {
            let s = src_of(&p);
            m.put(to_off[p.closed], so[s.closed], &self.block(s.ring(), p.ring()));
        }
        m
    }

    /// `H^0` and `H^1` from `F + O -> A` directly (the normalized complex of
    /// a curve pattern module stops in degree 1).
    pub fn h0_h1(&self) -> (usize, usize) {
        let neg = self.o_to_a.scale(&self.field.neg(&self.field.one()));
        let d = self.f_to_a.hstack(&neg);
        let r = d.rank();
        (self.dim_f + self.dim_o - r, self.dim_a - r)
    }
}

impl<K: Field> Cosimplicial<K> for PatternModule<K> {
    fn field(&self) -> &K {
        &self.field
    }

    fn dim(&self, level: usize) -> usize {
        *self.offsets(level).last().unwrap()
    }

    fn coface(&self, level: usize, i: usize) -> Matrix<K> {
        self.reindex(level, level + 1, |p| p.face(i).expect("coface index"))
    }

    fn codegeneracy(&self, level: usize, i: usize) -> Matrix<K> {
        self.reindex(level, level - 1, |p| p.degeneracy(i).expect("codegeneracy index"))
    }
}

/// `k^{S_n}` for the nerve `S` of a finite poset: functions on chains,
/// cofaces and codegeneracies by precomposition.
#[derive(Clone, Debug)]
pub struct ChainModule<K: Field> {
    field: K,
    chains: Vec<Vec<Vec<usize>>>,
}

impl<K: Field> ChainModule<K> {
    pub fn new(field: &K, poset: &Poset, top: usize) -> Self {
        Self {
            field: field.clone(),
            chains: (0..=top + 1).map(|l| poset.chains(l)).collect(),
        }
    }

    fn index(&self, level: usize, c: &[usize]) -> usize {
        self.chains[level].binary_search_by(|x| x.as_slice().cmp(c)).expect("chain present")
    }
}

impl<K: Field> Cosimplicial<K> for ChainModule<K> {
    fn field(&self) -> &K {
        &self.field
    }

    fn dim(&self, level: usize) -> usize {
        self.chains[level].len()
    }

    fn coface(&self, level: usize, i: usize) -> Matrix<K> {
        let mut m = Matrix::zeros(&self.field, self.dim(level + 1), self.dim(level));
        for (r, c) in self.chains[level + 1].iter().enumerate() {
            let src = face(c, i).expect("face index");
            m.set(r, self.index(level, &src), self.field.one());
        }
        m
    }

    fn codegeneracy(&self, level: usize, i: usize) -> Matrix<K> {
        let mut m = Matrix::zeros(&self.field, self.dim(level - 1), self.dim(level));
        for (r, c) in self.chains[level - 1].iter().enumerate() {
            let src = degeneracy(c, i).expect("degeneracy index");
            m.set(r, self.index(level, &src), self.field.one());
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn constant_object_is_acyclic_above_zero() {
        let k = PrimeField::new(5).unwrap();
        let m = PatternModule::constant(&k, 3);
        assert!(check_identities(&m, 3).is_none());
        for mode in [DoldKan::Alternating, DoldKan::Normalized] {
            let c = dold_kan(&m, mode, 3).unwrap();
            assert!(c.is_complex());
            assert_eq!(c.cohomology_dims(), vec![3, 0, 0]);
        }
    }

    #[test]
    fn poset_nerve_with_maximum_is_contractible() {
        let k = PrimeField::new(7).unwrap();
        let p = Poset::from_relation(4, &[(0, 1), (2, 1), (1, 3)]).unwrap();
        let m = ChainModule::new(&k, &p, 3);
        assert!(check_identities(&m, 3).is_none());
        let alt = dold_kan(&m, DoldKan::Alternating, 3).unwrap();
        let norm = dold_kan(&m, DoldKan::Normalized, 3).unwrap();
        assert!(alt.is_complex() && norm.is_complex());
        assert_eq!(alt.cohomology_dims(), vec![1, 0, 0]);
        assert_eq!(norm.cohomology_dims(), vec![1, 0, 0]);
    }

    #[test]
    fn circle_nerve_has_h1() {
        // two minima under two maxima: the nerve is a circle
        let k = PrimeField::new(7).unwrap();
        let p = Poset::from_relation(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let m = ChainModule::new(&k, &p, 3);
        let norm = dold_kan(&m, DoldKan::Normalized, 3).unwrap();
        assert_eq!(norm.cohomology_dims(), vec![1, 1, 0]);
    }

    #[test]
    fn pattern_module_normalized_degrees() {
        // F = k^2, O = k, A = k^2 with F -> A the identity and O -> A the first axis
        let k = PrimeField::new(5).unwrap();
        let m = PatternModule::new(
            &k,
            Matrix::identity(&k, 2),
            Matrix::from_rows(&k, vec![vec![1], vec![0]], 1),
        )
        .unwrap();
        assert!(check_identities(&m, 3).is_none());
        let norm = dold_kan(&m, DoldKan::Normalized, 3).unwrap();
        assert_eq!(norm.dims, vec![3, 2, 0, 0]);
        let alt = dold_kan(&m, DoldKan::Alternating, 3).unwrap();
        assert_eq!(alt.cohomology_dims(), norm.cohomology_dims());
        assert_eq!(norm.cohomology_dims(), vec![m.h0_h1().0, m.h0_h1().1, 0]);
    }
}
