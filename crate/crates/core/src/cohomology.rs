//! Sheaf cohomology on `P^1` through the adelic complex, with an
//! independent Čech computation on the standard two-chart cover.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::adele::LocalComponent;
use crate::cosimplicial::{dold_kan, DoldKan, PatternModule};
use crate::divisor::Divisor;
use crate::error::{AdeleError, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::local::LocalElt;
use crate::module::Sheaf;
use crate::point::{closed_points, ClosedPoint};
use crate::poly::{BaseField, Poly};
use crate::rat::Rat;
use crate::window::{H1Rep, Lattice, LatticeWindow, Window};

/// How windows grow between rounds.
#[derive(Clone, Debug)]
pub struct WindowPolicy {
    pub mode: DoldKan,
    /// Start this far below the minimal pole bound (exercises growth).
    pub initial_slack: i64,
    /// Round cap; by default `|deg| + 2 + slack`.
    pub max_rounds: Option<usize>,
    pub grow_support: bool,
    pub representatives: bool,
    /// Windows needing more series digits than this end the run unstabilized.
    pub max_precision: Option<i64>,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        Self {
            mode: DoldKan::Normalized,
            initial_slack: 0,
            max_rounds: None,
            grow_support: true,
            representatives: false,
            max_precision: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowTrace {
    pub round: usize,
    pub support: Vec<String>,
    pub pole_bound: String,
    pub precision: i64,
    pub dims: Vec<usize>,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representatives<K: BaseField> {
    pub h0: Vec<Vec<Rat<K>>>,
    pub h1: Vec<H1Rep<K>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport<K: BaseField> {
    pub dims: BTreeMap<usize, usize>,
    pub windows_used: Vec<WindowTrace>,
    pub representatives: Option<Representatives<K>>,
    pub stabilized: bool,
}

impl<K: BaseField> CohomologyReport<K> {
    pub fn h(&self, i: usize) -> usize {
        self.dims.get(&i).copied().unwrap_or(0)
    }

    pub fn dims_vec(&self) -> Vec<usize> {
        vec![self.h(0), self.h(1)]
    }
}

fn dims_of<K: Field>(m: &PatternModule<K>, mode: DoldKan) -> Result<Vec<usize>> {
    let c = dold_kan(m, mode, 2)?;
    if !c.is_complex() {
        return Err(AdeleError::WindowMismatch("d^2 != 0 on the windowed complex".into()));
    }
    Ok(c.cohomology_dims())
}

fn trace_of<K: BaseField>(round: usize, w: &Window<K>, dims: &[usize], valid: bool) -> WindowTrace {
    WindowTrace {
        round,
        support: w.support.iter().map(|x| x.label()).collect(),
        pole_bound: w.pole_bound.to_string(),
        precision: w.precision,
        dims: dims.to_vec(),
        valid,
    }
}

/// The window used in round `round` of `policy`.
fn round_window<K: BaseField>(l: &Lattice<K>, base: &Window<K>, policy: &WindowPolicy, round: usize) -> Window<K> {
    let dp = round as i64 - policy.initial_slack;
    let extra: Vec<ClosedPoint<K>> = if policy.grow_support && round > 0 {
        let have: BTreeSet<&ClosedPoint<K>> = base.support.iter().collect();
        closed_points(l.field(), base.support.len() + round + 1)
            .into_iter()
            .filter(|x| !have.contains(x))
            .take(round)
            .collect()
    } else {
        Vec::new()
    };
    base.enlarged(dp, &extra)
}

/// `H^*` of a sheaf through windows of its adelic complex.
pub fn adelic_cohomology<K: BaseField>(field: &K, sheaf: &Sheaf<K>, policy: &WindowPolicy) -> Result<CohomologyReport<K>> {
    if let Some(d) = sheaf.skyscraper_dim() {
        // the adelization of a skyscraper is the constant object on its fibers
        let m = PatternModule::constant(field, d);
        let points: Vec<String> = match sheaf {
            Sheaf::Skyscraper(f) => f.keys().map(|x| x.label()).collect(),
            _ => unreachable!(),
        };
        let mut windows_used = Vec::new();
        let mut last: Option<Vec<usize>> = None;
        for round in 0..2 {
            let dims = dims_of(&m, policy.mode)?;
            windows_used.push(WindowTrace {
                round,
                support: points.clone(),
                pole_bound: "0".into(),
                precision: 0,
                dims: dims.clone(),
                valid: true,
            });
            last = Some(dims);
        }
        let dims = last.unwrap();
        return Ok(CohomologyReport {
            dims: BTreeMap::from([(0, dims[0]), (1, dims[1])]),
            windows_used,
            representatives: None,
            stabilized: true,
        });
    }
    let l = sheaf.lattice(field).expect("locally free");
    let base = Window::minimal(&l)?;
    let deg = l.degree()?;
    let cap = policy
        .max_rounds
        .unwrap_or(deg.unsigned_abs() as usize + 2 + policy.initial_slack.max(0) as usize);
    let mut windows_used = Vec::new();
    let mut prev: Option<Vec<usize>> = None;
    for round in 0..cap {
        let w = round_window(&l, &base, policy, round);
        if policy.max_precision.is_some_and(|n| w.precision > n) {
            // recorded with no dimensions: the window exceeds the working precision
            windows_used.push(trace_of(round, &w, &[], false));
            break;
        }
        let valid = w.is_valid_for(&l)?;
        let lw = LatticeWindow::new(&l, &w)?;
        let dims = dims_of(&lw.module(), policy.mode)?;
        windows_used.push(trace_of(round, &w, &dims, valid));
        if valid && prev.as_ref() == Some(&dims) {
            let representatives = if policy.representatives {
                Some(Representatives {
                    h0: lw.h0_basis(),
                    h1: lw.h1_representatives()?,
                })
            } else {
                None
            };
            return Ok(CohomologyReport {
                dims: BTreeMap::from([(0, dims[0]), (1, dims[1])]),
                windows_used,
                representatives,
                stabilized: true,
            });
        }
        prev = Some(dims);
    }
    let dims = prev.unwrap_or_default();
    Ok(CohomologyReport {
        dims: dims.iter().copied().enumerate().collect(),
        windows_used,
        representatives: None,
        stabilized: false,
    })
}

/// Čech cohomology for the cover `U_0 = P^1 - {inf}`, `U_1 = P^1 - {0}`.
///
/// `O(D)` is computed as `O(deg D)` (the two are isomorphic through a
/// rational function), on Laurent monomials `t^k`, `|k| <= |deg D| + 2`.
pub fn cech_cohomology<K: BaseField>(field: &K, sheaf: &Sheaf<K>) -> Result<CohomologyReport<K>> {
    let (d0, d1, label) = match sheaf {
        Sheaf::Line(d) => {
            let n = d.degree();
            let w = n.abs() + 2;
            let c1: Vec<i64> = (-w..=w).collect();
            let u0: Vec<i64> = (0..=w).collect();
            let u1: Vec<i64> = (-w..=n.min(w)).collect();
            let mut m = Matrix::zeros(field, c1.len(), u0.len() + u1.len());
            let pos = |k: i64| (k + w) as usize;
            for (j, &k) in u0.iter().enumerate() {
                m.set(pos(k), j, field.neg(&field.one()));
            }
            for (j, &k) in u1.iter().enumerate() {
                m.set(pos(k), u0.len() + j, field.one());
            }
            let r = m.rank();
            (u0.len() + u1.len() - r, c1.len() - r, format!("laurent window [{}, {w}]", -w))
        }
        Sheaf::Skyscraper(fib) => {
            let zero = ClosedPoint::origin(field);
            let mut c0 = 0;
            let mut c1 = 0;
            let mut blocks: Vec<(usize, bool, bool)> = Vec::new();
            for (x, d) in fib {
                let dim = d * x.degree();
                let in0 = !x.is_infinity();
                let in1 = x != &zero;
                c0 += dim * (in0 as usize + in1 as usize);
                if in0 && in1 {
                    c1 += dim;
                }
                blocks.push((dim, in0, in1));
            }
            let mut m = Matrix::zeros(field, c1, c0);
            let (mut col, mut row) = (0, 0);
            for (dim, in0, in1) in blocks {
                for i in 0..dim {
                    if in0 && in1 {
                        m.set(row + i, col + i, field.neg(&field.one()));
                        m.set(row + i, col + dim + i, field.one());
                    }
                }
                col += dim * (in0 as usize + in1 as usize);
                if in0 && in1 {
                    row += dim;
                }
            }
            let r = m.rank();
            (c0 - r, c1 - r, "fibers".to_string())
        }
        Sheaf::Bundle(_) => {
            return Err(AdeleError::Unsupported("the Čech oracle covers line bundles and skyscrapers".into()))
        }
    };
    Ok(CohomologyReport {
        dims: BTreeMap::from([(0, d0), (1, d1)]),
        windows_used: vec![WindowTrace {
            round: 0,
            support: vec!["0".into(), "inf".into()],
            pole_bound: label,
            precision: 0,
            dims: vec![d0, d1],
            valid: true,
        }],
        representatives: None,
        stabilized: true,
    })
}

/// Degree-wise differences `(degree, adelic, cech)`.
pub fn oracle_diff<K: BaseField>(a: &CohomologyReport<K>, c: &CohomologyReport<K>) -> Vec<(usize, usize, usize)> {
    let degrees: BTreeSet<usize> = a.dims.keys().chain(c.dims.keys()).copied().collect();
    degrees
        .into_iter()
        .filter(|&i| a.h(i) != c.h(i))
        .map(|i| (i, a.h(i), c.h(i)))
        .collect()
}

/// Whether a level-0 pair `(f, o)` of `A^0(E)` lies in the kernel of the
/// differential: `o` must be a section of the integral lattice and equal
/// to the diagonal image of `f` at every point.
pub fn level0_in_kernel<K: BaseField>(l: &Lattice<K>, f: &[Rat<K>], o: &[LocalComponent<K>]) -> Result<bool> {
    if f.len() != l.rank() || o.len() != l.rank() {
        return Err(AdeleError::RankMismatch(f.len(), l.rank()));
    }
    let mut points: BTreeSet<ClosedPoint<K>> = l.points().cloned().collect();
    for (fr, or) in f.iter().zip(o) {
        points.extend(or.support().cloned());
        if !fr.is_zero() {
            points.extend(fr.poles()?.into_iter().map(|(x, _)| x));
        }
        if !or.tail().is_zero() {
            points.extend(or.tail().poles()?.into_iter().map(|(x, _)| x));
        }
        if or.tail() != fr {
            return Ok(false);
        }
    }
    for x in &points {
        let vals: Vec<LocalElt<K>> = o.iter().map(|c| c.value_at(x)).collect();
        if !l.is_integral_at(x, &vals)? {
            return Ok(false);
        }
        for (fr, v) in f.iter().zip(&vals) {
            if v.compare(&LocalElt::Exact(fr.clone()), x)?.is_not_equal() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolutionReport {
    /// `dim ker(A^0 -> A^1)` on the window.
    pub kernel_dim: usize,
    pub h1_dim: usize,
    pub samples: usize,
    pub coboundaries: usize,
    pub matched_h1: usize,
    pub unexplained: usize,
    pub witnesses: Vec<String>,
}

fn random_poly<K: BaseField, R: Rng>(field: &K, deg: usize, rng: &mut R) -> Poly<K> {
    let coeffs = (0..=deg).map(|_| field.random_elt(rng)).collect();
    Poly::new(field.clone(), coeffs)
}

/// Samples rational level-1 adeles (one row-vector value at each of a few
/// points of a fixed pool) and explains each one as `f - lambda` plus a
/// combination of H^1 representatives, then re-verifies the explanation
/// exactly at every point.
pub fn resolution_check<K: BaseField, R: Rng>(l: &Lattice<K>, samples: usize, rng: &mut R) -> Result<ResolutionReport> {
    let field = l.field().clone();
    let n = l.rank();
    let pool: Vec<ClosedPoint<K>> = closed_points(&field, 6);
    let max_pole = 3;
    let mut w = Window::minimal(l)?;
    for x in &pool {
        let p = w.pole_bound.get(x).max(0) + max_pole;
        w = w.with_pole_bound(x, p);
    }
    let lw = LatticeWindow::new(l, &w)?;
    let (h0, h1) = lw.h0_h1();
    let reps = lw.h1_representatives()?;
    let neg = lw.lambda().scale(&field.neg(&field.one()));
    let rep_cols: Vec<Vec<K::Elt>> = reps
        .iter()
        .map(|r| {
            let mut col = vec![Rat::zero(&field); n];
            col[r.row] = r.value.clone();
            lw.adele_vector(&BTreeMap::from([(r.point.clone(), col)]))
        })
        .collect::<Result<_>>()?;
    let system = lw
        .f_to_a()
        .hstack(&neg)
        .hstack(&Matrix::from_cols(&field, lw.dim_a(), &rep_cols));
    let (nf, nl) = (lw.dim_f(), lw.dim_lambda());

    let mut report = ResolutionReport {
        kernel_dim: h0,
        h1_dim: h1,
        samples,
        ..Default::default()
    };
    for s in 0..samples {
        let k = rng.gen_range(1..=3usize);
        let mut values: BTreeMap<ClosedPoint<K>, Vec<Rat<K>>> = BTreeMap::new();
        for _ in 0..k {
            let x = pool[rng.gen_range(0..pool.len())].clone();
            let e = rng.gen_range(0..=max_pole);
            let u = match &x {
                ClosedPoint::Finite(p) => Rat::from_poly(p.clone()),
                ClosedPoint::Infinity => Rat::t(&field).inv()?,
            };
            let den = u.pow(e)?;
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                // a unit-or-integral numerator at x, then the pole
                let c = random_poly(&field, 2, rng);
                let c = match &x {
                    ClosedPoint::Finite(_) => Rat::from_poly(c),
                    ClosedPoint::Infinity => Rat::new(c.reverse(2), Poly::monomial(&field, field.one(), 2))?,
                };
                row.push(c.div(&den)?);
            }
            values.insert(x, row);
        }
        let target = lw.adele_vector(&values)?;
        let Some(sol) = system.solve(&target) else {
            report.unexplained += 1;
            report.witnesses.push(format!("sample {s}: no solution in the window"));
            continue;
        };
        let f = lw.global_vector(&sol[..nf]);
        let coeffs = &sol[nf + nl..];
        // residual a - sum c_i rep_i - f must lie in the lattice everywhere
        let mut points: BTreeSet<ClosedPoint<K>> = values.keys().cloned().collect();
        points.extend(l.points().cloned());
        points.extend(reps.iter().map(|r| r.point.clone()));
        for fr in &f {
            if !fr.is_zero() {
                points.extend(fr.poles()?.into_iter().map(|(x, _)| x));
            }
        }
        let mut ok = true;
        for x in &points {
            let mut res: Vec<Rat<K>> = values.get(x).cloned().unwrap_or_else(|| vec![Rat::zero(&field); n]);
            for (c, r) in coeffs.iter().zip(&reps) {
                if !field.is_zero(c) && &r.point == x {
                    res[r.row] = res[r.row].sub(&r.value.mul(&Rat::constant(&field, c.clone())));
                }
            }
            for (slot, fr) in res.iter_mut().zip(&f) {
                *slot = slot.sub(fr);
            }
            let vals: Vec<LocalElt<K>> = res.into_iter().map(LocalElt::Exact).collect();
            if !l.is_integral_at(x, &vals)? {
                ok = false;
                report.witnesses.push(format!("sample {s}: residual not integral at {x}"));
                break;
            }
        }
        if !ok {
            report.unexplained += 1;
        } else if coeffs.iter().all(|c| field.is_zero(c)) {
            report.coboundaries += 1;
        } else {
            report.matched_h1 += 1;
        }
    }
    Ok(report)
}

/// `O(D)` with `D` a random divisor of the given degree on a few points.
pub fn random_divisor<K: BaseField, R: Rng>(field: &K, degree: i64, rng: &mut R) -> Divisor<K> {
    let pool = closed_points(field, 5);
    let mut d = Divisor::zero();
    for _ in 0..rng.gen_range(0..3) {
        let x = pool[rng.gen_range(1..pool.len())].clone();
        if x.degree() == 1 {
            d.add_at(x, rng.gen_range(-2..=2));
        }
    }
    d.add_at(ClosedPoint::Infinity, degree - d.degree());
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn o3_on_f5_matches_cech() {
        let k = PrimeField::new(5).unwrap();
        let s = Sheaf::parse(&k, "O(3)").unwrap();
        let a = adelic_cohomology(&k, &s, &WindowPolicy::default()).unwrap();
        let c = cech_cohomology(&k, &s).unwrap();
        assert!(a.stabilized);
        assert_eq!(a.dims_vec(), vec![4, 0]);
        assert!(oracle_diff(&a, &c).is_empty());
    }

    #[test]
    fn o_minus_two_over_q() {
        let k = Rationals;
        let s = Sheaf::parse(&k, "O(-2)").unwrap();
        let a = adelic_cohomology(&k, &s, &WindowPolicy::default()).unwrap();
        assert_eq!(a.dims_vec(), vec![0, 1]);
    }

    #[test]
    fn cech_counts() {
        let k = PrimeField::new(5).unwrap();
        for n in -6..=6i64 {
            let c = cech_cohomology(&k, &Sheaf::Line(Divisor::at_infinity(n))).unwrap();
            assert_eq!(c.dims_vec(), vec![(n + 1).max(0) as usize, (-n - 1).max(0) as usize]);
        }
    }

    #[test]
    fn skyscraper_both_ways() {
        let k = PrimeField::new(5).unwrap();
        let s = Sheaf::parse(&k, "sky(t,2;inf,1;t^2+2,1)").unwrap();
        let a = adelic_cohomology(&k, &s, &WindowPolicy::default()).unwrap();
        let c = cech_cohomology(&k, &s).unwrap();
        assert_eq!(a.dims_vec(), vec![5, 0]);
        assert_eq!(c.dims_vec(), vec![5, 0]);
    }

    #[test]
    fn growth_from_undersized_window_is_monotone() {
        let k = PrimeField::new(5).unwrap();
        let s = Sheaf::parse(&k, "O(4)").unwrap();
        let policy = WindowPolicy { initial_slack: 3, ..Default::default() };
        let a = adelic_cohomology(&k, &s, &policy).unwrap();
        assert!(a.stabilized);
        assert_eq!(a.dims_vec(), vec![5, 0]);
        let h0: Vec<usize> = a.windows_used.iter().map(|t| t.dims[0]).collect();
        assert!(h0.windows(2).all(|w| w[0] <= w[1]), "{h0:?}");
        assert!(h0[0] < 5);
    }

    #[test]
    fn precision_cap_stops_the_run() {
        let k = PrimeField::new(5).unwrap();
        let sheaf = Sheaf::parse(&k, "O(-6)").unwrap();
        let policy = WindowPolicy { max_precision: Some(3), ..Default::default() };
        let r = adelic_cohomology(&k, &sheaf, &policy).unwrap();
        assert!(!r.stabilized);
        let last = r.windows_used.last().unwrap();
        assert!(!last.valid && last.dims.is_empty() && last.precision > 3);
        let policy = WindowPolicy { max_precision: Some(16), ..Default::default() };
        assert_eq!(adelic_cohomology(&k, &sheaf, &policy).unwrap().dims_vec(), vec![0, 5]);
    }

    #[test]
    fn capped_policy_reports_non_stabilization() {
        let k = PrimeField::new(5).unwrap();
        let s = Sheaf::parse(&k, "O(2)").unwrap();
        let policy = WindowPolicy { max_rounds: Some(1), ..Default::default() };
        assert!(!adelic_cohomology(&k, &s, &policy).unwrap().stabilized);
    }

    #[test]
    fn one_over_t_needs_matching_integral_part() {
        let k = PrimeField::new(5).unwrap();
        let o = ClosedPoint::origin(&k);
        let l = Lattice::line(&k, &Divisor::point(o.clone(), 1));
        let f = Rat::parse(&k, "1", "t").unwrap();
        let good = LocalComponent::diag(&f).unwrap();
        assert!(level0_in_kernel(&l, std::slice::from_ref(&f), &[good]).unwrap());
        let bad = LocalComponent::new(BTreeMap::from([(o, LocalElt::zero(&k))]), f.clone());
        assert!(!level0_in_kernel(&l, &[f], &[bad]).unwrap());
    }

    #[test]
    fn sampled_cocycles_are_explained() {
        let k = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for deg in [-3, 0, 2] {
            let d = random_divisor(&k, deg, &mut rng);
            let r = resolution_check(&Lattice::line(&k, &d), 10, &mut rng).unwrap();
            assert_eq!(r.unexplained, 0, "{:?}", r.witnesses);
            assert_eq!(r.kernel_dim, (deg + 1).max(0) as usize);
        }
    }
}
