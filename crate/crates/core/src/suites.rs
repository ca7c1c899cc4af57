//! Seeded property suites over the adele, cohomology and descent layers.
//! Each suite returns one result per property with the first failing
//! witness, if any.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adele::Adele;
use crate::cohomology::{adelic_cohomology, cech_cohomology, oracle_diff, random_divisor, resolution_check, WindowPolicy};
use crate::cosimplicial::{alternating_differential, check_identities, dold_kan, ChainModule, Cosimplicial, DoldKan};
use crate::descent::{gauge_equivalent, glue, random_gauge, random_idele, weil_reduce, witness_gauge, Cocycle, Equivalence, Validation};
use crate::divisor::Divisor;
use crate::error::Result;
use crate::field::{Field, PrimeField, Rationals};
use crate::linalg::Matrix;
use crate::module::{module_adele, ModuleData, Sheaf};
use crate::point::{closed_points, ClosedPoint};
use crate::poly::{BaseField, Poly};
use crate::rat::Rat;
use crate::scheme::{degeneracy, face, monotone_maps, precompose, CurvePattern, Poset};
use crate::series::Comparison;
use crate::window::Lattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub checked: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn first_failure(&self) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| !p.passed)
    }
}

struct Prop {
    name: String,
    checked: usize,
    witness: Option<String>,
}

impl Prop {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            checked: 0,
            witness: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    /// Records an error as a failure instead of aborting the suite.
    fn check_result(&mut self, r: Result<bool>, witness: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, witness),
            Err(e) => {
                let w = witness();
                self.check(false, || format!("{w}: {e}"));
            }
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name,
            checked: self.checked,
            passed: self.witness.is_none() && self.checked > 0,
            witness: self.witness,
        }
    }
}

fn same(c: Comparison) -> bool {
    !c.is_not_equal()
}

/// The five simplicial identity families on random adeles of levels
/// `0..=3` over `P^1(F_5)`, then exhaustively on chains of a 5-element poset.
pub fn cosimplicial_suite(seed: u64, samples: usize) -> Result<SuiteReport> {
    let k = PrimeField::new(5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dd = Prop::new("d^j d^i = d^i d^(j-1), i < j");
    let mut ss = Prop::new("s^j s^i = s^i s^(j+1), i <= j");
    let mut sd_low = Prop::new("s^j d^i = d^i s^(j-1), i < j");
    let mut sd_id = Prop::new("s^j d^j = s^j d^(j+1) = id");
    let mut sd_high = Prop::new("s^j d^i = d^(i-1) s^j, i > j + 1");
    for n in 0..=3usize {
        for _ in 0..samples {
            let a = Adele::random(&k, n, &mut rng)?;
            for j in 0..=n + 2 {
                for i in 0..j {
                    let r = (|| Ok(a.coface(i)?.coface(j)? == a.coface(j - 1)?.coface(i)?))();
                    dd.check_result(r, || format!("level {n}, i = {i}, j = {j}\n{a}"));
                }
            }
            for j in 0..n.saturating_sub(1) {
                for i in 0..=j {
                    let r = (|| Ok(a.codegeneracy(i)?.codegeneracy(j)? == a.codegeneracy(j + 1)?.codegeneracy(i)?))();
                    ss.check_result(r, || format!("level {n}, i = {i}, j = {j}\n{a}"));
                }
            }
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = a.coface(i).and_then(|b| b.codegeneracy(j));
                    if i < j {
                        let r = (|| Ok(lhs? == a.codegeneracy(j - 1)?.coface(i)?))();
                        sd_low.check_result(r, || format!("level {n}, i = {i}, j = {j}\n{a}"));
                    } else if i == j || i == j + 1 {
                        let r = lhs.map(|b| b == a);
                        sd_id.check_result(r, || format!("level {n}, i = {i}, j = {j}\n{a}"));
                    } else if j < n {
                        let r = (|| Ok(lhs? == a.codegeneracy(j)?.coface(i - 1)?))();
                        sd_high.check_result(r, || format!("level {n}, i = {i}, j = {j}\n{a}"));
                    }
                }
            }
        }
    }
    let poset = Poset::from_relation(5, &[(0, 2), (1, 2), (2, 4), (3, 4)])?;
    let mut chains = Prop::new("simplicial identities on all chains of a 5-element poset, levels <= 3");
    for n in 0..=3usize {
        for c in poset.chains(n) {
            chains.check_result(chain_identities(&c), || format!("chain {c:?}"));
        }
    }
    let mut module = Prop::new("cosimplicial identities of the chain module of the 5-element poset");
    let m = ChainModule::new(&k, &poset, 3);
    let fail = check_identities(&m, 3);
    module.check(fail.is_none(), || fail.unwrap_or_default());
    Ok(SuiteReport {
        suite: "cosimplicial".into(),
        seed,
        properties: [dd, ss, sd_low, sd_id, sd_high, chains, module].into_iter().map(Prop::finish).collect(),
    })
}

/// Face and degeneracy identities on one chain of level `n`.
fn chain_identities(c: &[usize]) -> Result<bool> {
    let n = c.len() - 1;
    // d_i d_j = d_(j-1) d_i, i < j
    if n >= 2 {
        for j in 0..=n {
            for i in 0..j {
                if face(&face(c, j)?, i)? != face(&face(c, i)?, j - 1)? {
                    return Ok(false);
                }
            }
        }
    }
    for j in 0..=n {
        for i in 0..=j {
            // s_i s_j = s_(j+1) s_i, i <= j
            if degeneracy(&degeneracy(c, j)?, i)? != degeneracy(&degeneracy(c, i)?, j + 1)? {
                return Ok(false);
            }
        }
        for i in 0..=n + 1 {
            let lhs = face(&degeneracy(c, j)?, i)?;
            let ok = if i < j {
                lhs == degeneracy(&face(c, i)?, j - 1)?
            } else if i == j || i == j + 1 {
                lhs == c
            } else {
                lhs == degeneracy(&face(c, i - 1)?, j)?
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Extension by zero on five opens and kernels of random `2 x 3` adelic maps.
pub fn flasque_suite(seed: u64, samples: usize, kernels: usize) -> Result<SuiteReport> {
    let k = PrimeField::new(5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = closed_points(&k, 6);
    let opens: Vec<BTreeSet<ClosedPoint<PrimeField>>> = (0..5)
        .map(|i| pool.iter().skip(i).step_by(2).take(1 + i % 3).cloned().collect())
        .collect();
    let mut inverse = Prop::new("restrict(extend_by_zero(s)) = s");
    let mut differs = Prop::new("extend_by_zero(restrict(a)) differs from a exactly at S");
    let mut linear = Prop::new("extend_by_zero(r|U * s) = r * extend_by_zero(s)");
    let mut additive = Prop::new("extend_by_zero(s + s') = extend_by_zero(s) + extend_by_zero(s')");
    for i in 0..samples {
        let s_set = &opens[i % opens.len()];
        let level = i % 3;
        let a = Adele::random(&k, level, &mut rng)?;
        let b = Adele::random(&k, level, &mut rng)?;
        let r = random_rat(&k, &mut rng);
        let tag = || format!("sample {i}, S = {}", show_set(s_set));
        let s = a.restrict(s_set)?;
        let t = b.restrict(s_set)?;
        inverse.check_result(s.extend_by_zero().restrict(s_set).map(|x| x == s), tag);
        differs.check_result(differs_exactly_at(&a, &s.extend_by_zero(), s_set), tag);
        let lhs = (|| Adele::diag(&r, level)?.restrict(s_set)?.mul(&s).map(|x| x.extend_by_zero()))();
        let rhs = Adele::diag(&r, level).and_then(|d| d.mul(&s.extend_by_zero()));
        linear.check_result((|| Ok(same(lhs?.compare(&rhs?)?)))(), tag);
        let sum = s.add(&t).map(|x| x.extend_by_zero());
        let sep = s.extend_by_zero().add(&t.extend_by_zero());
        additive.check_result((|| Ok(same(sum?.compare(&sep?)?)))(), tag);
    }
    let mut kernel = Prop::new("kernel elements over U extend to kernel elements over X");
    for i in 0..kernels {
        let s_set = &opens[i % opens.len()];
        let f: Vec<Vec<Adele<PrimeField>>> = (0..2)
            .map(|_| (0..3).map(|_| Adele::random(&k, 1, &mut rng)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let c = Adele::diag(&random_rat(&k, &mut rng), 1)?;
        let r = (|| {
            let fu: Vec<Vec<Adele<PrimeField>>> = f
                .iter()
                .map(|row| row.iter().map(|e| e.restrict(s_set)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let cu = c.restrict(s_set)?;
            // c (row_1 x row_2) is killed by f
            let mut s = Vec::with_capacity(3);
            for m in 0..3 {
                let (p, q) = ((m + 1) % 3, (m + 2) % 3);
                let minor = fu[0][p].mul(&fu[1][q])?.sub(&fu[0][q].mul(&fu[1][p])?)?;
                s.push(cu.mul(&minor)?);
            }
            let zero_u = Adele::zero(&k, 1).restrict(s_set)?;
            let zero_x = Adele::zero(&k, 1);
            let mut ok = true;
            for row in &fu {
                let v = dot(row, &s)?;
                ok &= same(v.compare(&zero_u)?);
            }
            let ext: Vec<Adele<PrimeField>> = s.iter().map(Adele::extend_by_zero).collect();
            for row in &f {
                let v = dot(row, &ext)?;
                ok &= same(v.compare(&zero_x)?);
            }
            for (e, orig) in ext.iter().zip(&s) {
                ok &= e.restrict(s_set)? == *orig;
            }
            Ok(ok)
        })();
        kernel.check_result(r, || format!("map {i}, S = {}", show_set(s_set)));
    }
    Ok(SuiteReport {
        suite: "flasque".into(),
        seed,
        properties: [inverse, differs, linear, additive, kernel].into_iter().map(Prop::finish).collect(),
    })
}

fn dot<K: BaseField>(row: &[Adele<K>], v: &[Adele<K>]) -> Result<Adele<K>> {
    let mut acc = row[0].mul(&v[0])?;
    for (a, b) in row.iter().zip(v).skip(1) {
        acc = acc.add(&a.mul(b)?)?;
    }
    Ok(acc)
}

fn show_set<K: BaseField>(s: &BTreeSet<ClosedPoint<K>>) -> String {
    let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn random_rat<K: BaseField, R: Rng>(field: &K, rng: &mut R) -> Rat<K> {
    let num = Poly::new(field.clone(), (0..=2).map(|_| field.random_elt(rng)).collect());
    let mut den = Poly::new(field.clone(), (0..=1).map(|_| field.random_elt(rng)).collect());
    if den.is_zero() {
        den = Poly::one(field);
    }
    Rat::new(num, den).expect("nonzero denominator")
}

/// `e` agrees with `a` off `s` and vanishes on `s`, component by component.
fn differs_exactly_at<K: BaseField>(a: &Adele<K>, e: &Adele<K>, s: &BTreeSet<ClosedPoint<K>>) -> Result<bool> {
    for (ca, ce) in a.components().iter().zip(e.components()) {
        match (ca.as_local(), ce.as_local()) {
            (None, None) => {
                if ca != ce {
                    return Ok(false);
                }
            }
            (Some(la), Some(le)) => {
                if la.tail() != le.tail() {
                    return Ok(false);
                }
                let points: BTreeSet<&ClosedPoint<K>> = la.support().chain(le.support()).chain(s.iter()).collect();
                for x in points {
                    let expected = if s.contains(x) {
                        crate::local::LocalElt::zero(a.field())
                    } else {
                        la.value_at(x)
                    };
                    if le.value_at(x) != expected {
                        return Ok(false);
                    }
                }
            }
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Posets of sizes 3 to 6 with a maximum: the contraction `h_{n, alpha}`
/// commutes with every `f: [k] -> [n]`, the chain module has cohomology
/// `(1, 0, 0)`, and the chain-level homotopy `K` contracts it.
pub fn homotopy_suite(seed: u64, posets: &[Poset]) -> Result<SuiteReport> {
    let field = PrimeField::new(2_147_483_647)?;
    let mut squares = Prop::new("h_{n,alpha}(sigma) o f = h_{k,alpha o f}(sigma o f), n, k <= 3");
    let mut legs = Prop::new("h_{n,0} = id and h_{n,1} = constant at the maximum");
    let mut concentrated = Prop::new("normalized chain-module cohomology is (1, 0, 0)");
    let mut agree = Prop::new("alternating and normalized complexes agree");
    let mut contraction = Prop::new("dK + Kd = id (degree >= 1), Kd = id - eps (degree 0)");
    let mut patterns = Prop::new("curve-pattern contraction squares commute");
    for (pi, p) in posets.iter().enumerate() {
        let Some(top) = p.maximum() else {
            squares.check(false, || format!("poset {pi} has no maximum"));
            continue;
        };
        for n in 0..=3usize {
            let alphas = monotone_maps(n, 1);
            for sigma in p.chains(n) {
                for alpha in &alphas {
                    let h = p.contract_chain(&sigma, alpha, top)?;
                    if alpha.iter().all(|&a| a == 0) {
                        legs.check(h == sigma, || format!("poset {pi}, {sigma:?}"));
                    }
                    if alpha.iter().all(|&a| a == 1) {
                        legs.check(h.iter().all(|&x| x == top), || format!("poset {pi}, {sigma:?}"));
                    }
                    for kk in 0..=3usize {
                        for f in monotone_maps(kk, n) {
                            let lhs = precompose(&h, &f);
                            let rhs = p.contract_chain(&precompose(&sigma, &f), &precompose(alpha, &f), top)?;
                            squares.check(lhs == rhs, || format!("poset {pi}, sigma {sigma:?}, alpha {alpha:?}, f {f:?}"));
                        }
                    }
                }
            }
        }
        let m = ChainModule::new(&field, p, 3);
        let norm = dold_kan(&m, DoldKan::Normalized, 3)?;
        let alt = dold_kan(&m, DoldKan::Alternating, 3)?;
        let dims = norm.cohomology_dims();
        concentrated.check(norm.is_complex() && dims == vec![1, 0, 0], || format!("poset {pi}: {dims:?}"));
        agree.check(alt.cohomology_dims() == dims, || format!("poset {pi}"));
        contraction.check_result(check_contraction(&field, p, &m, top), || format!("poset {pi}"));
    }
    for n in 0..=3usize {
        for closed in 0..=n + 1 {
            let c = CurvePattern::new(n, closed)?;
            for alpha in monotone_maps(n, 1) {
                for kk in 0..=3usize {
                    for f in monotone_maps(kk, n) {
                        let lhs = c.contract(&alpha)?.precompose(&f);
                        let rhs = c.precompose(&f).contract(&precompose(&alpha, &f))?;
                        patterns.check(lhs == rhs, || format!("{c}, alpha {alpha:?}, f {f:?}"));
                    }
                }
            }
        }
    }
    Ok(SuiteReport {
        suite: "homotopy".into(),
        seed,
        properties: [squares, legs, concentrated, agree, contraction, patterns]
            .into_iter()
            .map(Prop::finish)
            .collect(),
    })
}

/// `(K a)(x_0..x_n) = (-1)^(n+1) a(x_0..x_n, top)` against the alternating
/// differential of the chain module.
fn check_contraction<K: Field>(field: &K, p: &Poset, m: &ChainModule<K>, top: usize) -> Result<bool> {
    let chains: Vec<Vec<Vec<usize>>> = (0..=4).map(|l| p.chains(l)).collect();
    let kop = |n: usize| -> Matrix<K> {
        let mut out = Matrix::zeros(field, m.dim(n), m.dim(n + 1));
        let sign = if n.is_multiple_of(2) { field.neg(&field.one()) } else { field.one() };
        for (r, c) in chains[n].iter().enumerate() {
            let mut ext = c.clone();
            ext.push(top);
            let col = chains[n + 1].binary_search(&ext).expect("appending the maximum keeps a chain");
            out.set(r, col, sign.clone());
        }
        out
    };
    let d = |n: usize| alternating_differential(m, n);
    // degree 0: K_0 d_0 = id - eps
    let mut eps = Matrix::zeros(field, m.dim(0), m.dim(0));
    let top_idx = chains[0].binary_search(&vec![top]).expect("maximum is a chain");
    for r in 0..m.dim(0) {
        eps.set(r, top_idx, field.one());
    }
    let id0 = Matrix::identity(field, m.dim(0));
    let minus_eps = eps.scale(&field.neg(&field.one()));
    if kop(0).mul(&d(0))? != id0.add(&minus_eps)? {
        return Ok(false);
    }
    for n in 1..=2 {
        let lhs = d(n - 1).mul(&kop(n - 1))?.add(&kop(n).mul(&d(n))?)?;
        if lhs != Matrix::identity(field, m.dim(n)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sizes 3 to 6: chains, fans, and a seeded random poset with a maximum.
pub fn homotopy_posets(seed: u64) -> Result<Vec<Poset>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for size in 3..=6 {
        out.push(Poset::total(size));
        out.push(Poset::fan(size));
        let top = size - 1;
        let mut pairs: Vec<(usize, usize)> = (0..top).map(|i| (i, top)).collect();
        for a in 0..top {
            for b in a + 1..top {
                if rng.gen_bool(0.35) {
                    pairs.push((a, b));
                }
            }
        }
        out.push(Poset::from_relation(size, &pairs)?);
    }
    Ok(out)
}

/// Invariants of glued bundles: gauge-orbit constancy, `sum a_i = degree`,
/// twist shift, coboundary validity and rank-1 degree additivity.
pub fn descent_suite(seed: u64, max_rank: usize, samples: usize, orbit: usize) -> Result<SuiteReport> {
    let k = PrimeField::new(5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut valid = Prop::new("sampled cocycles and their gauge transforms validate");
    let mut coboundary = Prop::new("d^0(g) d^1(g)^-1 validates for every sampled gauge");
    let mut invariance = Prop::new("degree, H^0/H^1 and splitting type constant on gauge orbits");
    let mut sum = Prop::new("sum of the splitting type = degree");
    let mut shift = Prop::new("splitting_type(B(m)) = splitting_type(B) + m, m in [-3, 3]");
    let mut additivity = Prop::new("degree(phi psi) = degree(phi) + degree(psi) in rank 1");
    for i in 0..samples {
        let n = 1 + i % max_rank.max(1);
        let phi = Cocycle::from_weil(&k, &random_idele(&k, n, 2, &mut rng))?;
        let tag = || format!("sample {i}, rank {n}");
        let status = phi.validate();
        valid.check(matches!(status, Validation::Valid { .. }), || format!("{}: {status}", tag()));
        let b = match glue(&phi) {
            Ok(b) => b,
            Err(e) => {
                invariance.check(false, || format!("{}: {e}", tag()));
                continue;
            }
        };
        let base = (|| -> Result<_> { Ok((b.degree(), b.splitting_type()?, b.cohomology(0)?)) })();
        let (deg, split, coh) = match base {
            Ok(v) => v,
            Err(e) => {
                invariance.check(false, || format!("{}: {e}", tag()));
                continue;
            }
        };
        sum.check(split.iter().sum::<i64>() == deg, || format!("{}: {split:?} vs {deg}", tag()));
        for m in -3..=3i64 {
            let r = b.twist(m).and_then(|bm| bm.splitting_type());
            let expected: Vec<i64> = split.iter().map(|a| a + m).collect();
            shift.check_result(r.map(|s| s == expected), || format!("{}, twist {m}", tag()));
        }
        for j in 0..orbit {
            let g = random_gauge(&k, n, &mut rng);
            let cob = Cocycle::identity(&k, n).gauge(&g).map(|c| c.validate());
            coboundary.check_result(cob.map(|v| matches!(v, Validation::Valid { .. })), || format!("{}, gauge {j}", tag()));
            let r = (|| {
                let psi = phi.gauge(&g)?;
                let v = psi.validate();
                if !matches!(v, Validation::Valid { .. }) {
                    return Ok(false);
                }
                let c = glue(&psi)?;
                Ok(c.degree() == deg && c.splitting_type()? == split && c.cohomology(0)? == coh)
            })();
            invariance.check_result(r, || format!("{}, gauge {j}", tag()));
        }
        if n == 1 {
            let other = Cocycle::from_weil(&k, &random_idele(&k, 1, 2, &mut rng))?;
            let r = (|| {
                let prod = phi.product(&other)?;
                Ok(glue(&prod)?.degree() == deg + glue(&other)?.degree())
            })();
            additivity.check_result(r, tag);
        }
    }
    Ok(SuiteReport {
        suite: "descent".into(),
        seed,
        properties: [valid, coboundary, invariance, sum, shift, additivity].into_iter().map(Prop::finish).collect(),
    })
}

/// Rank-1 ideles reduce to `t^d` at the origin with `d` the degree, and
/// gauge equivalence matches equality of degrees on every pair.
pub fn weil_suite(seed: u64, samples: usize) -> Result<SuiteReport> {
    let k = PrimeField::new(5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = Prop::new("weil_reduce gives t^d at the origin with d = degree");
    let mut sound = Prop::new("the normal form is gauge equivalent to the input, with a witness");
    let mut pairs = Prop::new("gauge_equivalent agrees with equality of degrees on all pairs");
    let mut items = Vec::with_capacity(samples);
    for i in 0..samples {
        let phi = Cocycle::from_weil(&k, &random_idele(&k, 1, 3, &mut rng))?;
        let r = (|| -> Result<_> {
            let b = glue(&phi)?;
            let dc = weil_reduce(&b)?;
            let t = dc.normal_form.to_weil()[0][0].clone();
            let origin = ClosedPoint::origin(&k);
            let expected = Rat::t(&k).pow(dc.degree)?;
            let ok = dc.degree == b.degree()
                && t.value_at(&origin) == crate::local::LocalElt::Exact(expected)
                && t.tail().is_one()
                && t.support().all(|x| *x == origin);
            Ok((ok, b.degree(), dc))
        })();
        match r {
            Ok((ok, d, dc)) => {
                normal.check(ok, || format!("idele {i}"));
                let w = (|| Ok(gauge_equivalent(&phi, &dc.normal_form)? == Equivalence::Yes && witness_gauge(&phi, &dc.normal_form)?.is_some()))();
                sound.check_result(w, || format!("idele {i}"));
                items.push((phi, d));
            }
            Err(e) => normal.check(false, || format!("idele {i}: {e}")),
        }
    }
    for a in 0..items.len() {
        for b in a + 1..items.len() {
            let r = gauge_equivalent(&items[a].0, &items[b].0)
                .map(|e| (e == Equivalence::Yes) == (items[a].1 == items[b].1));
            pairs.check_result(r, || format!("pair ({a}, {b}) with degrees {} and {}", items[a].1, items[b].1));
        }
    }
    Ok(SuiteReport {
        suite: "weil".into(),
        seed,
        properties: [normal, sound, pairs].into_iter().map(Prop::finish).collect(),
    })
}

/// Adelic and Čech cohomology of `O(n)`, `n in [-6, 6]`, over `F_5` and `Q`,
/// against the closed form `(max(n+1, 0), max(-n-1, 0))`.
pub fn oracle_suite() -> Result<SuiteReport> {
    fn run<K: BaseField>(field: &K, name: &str) -> Result<PropertyResult> {
        let mut p = Prop::new(&format!("adelic = Čech = closed form for O(n) over {name}"));
        for n in -6..=6i64 {
            let sheaf = Sheaf::Line(Divisor::at_infinity(n));
            let r = (|| {
                let a = adelic_cohomology(field, &sheaf, &WindowPolicy::default())?;
                let c = cech_cohomology(field, &sheaf)?;
                let expected = vec![(n + 1).max(0) as usize, (-n - 1).max(0) as usize];
                Ok(a.stabilized && oracle_diff(&a, &c).is_empty() && a.dims_vec() == expected && c.dims_vec() == expected)
            })();
            p.check_result(r, || format!("O({n})"));
        }
        Ok(p.finish())
    }
    Ok(SuiteReport {
        suite: "oracle".into(),
        seed: 0,
        properties: vec![run(&PrimeField::new(5)?, "F_5")?, run(&Rationals, "Q")?],
    })
}

/// Skyscrapers with fiber dimensions up to 4 on up to 3 points.
pub fn skyscraper_suite(seed: u64, samples: usize) -> Result<SuiteReport> {
    let k = PrimeField::new(5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = closed_points(&k, 6);
    let finite: Vec<ClosedPoint<PrimeField>> = pool.into_iter().filter(|x| !x.is_infinity()).collect();
    let mut dims = Prop::new("H^0 = total fiber dimension and H^1 = 0");
    let mut rigid = Prop::new("adelization is the identity on fiber data at levels 0..=3");
    for i in 0..samples {
        let count = rng.gen_range(1..=3usize);
        let mut fib = BTreeMap::new();
        while fib.len() < count {
            fib.insert(finite[rng.gen_range(0..finite.len())].clone(), rng.gen_range(1..=4usize));
        }
        let sheaf = Sheaf::Skyscraper(fib.clone());
        let total = sheaf.skyscraper_dim().unwrap_or(0);
        let r = adelic_cohomology(&k, &sheaf, &WindowPolicy::default())
            .map(|rep| rep.stabilized && rep.dims_vec() == vec![total, 0]);
        dims.check_result(r, || format!("{sheaf}"));
        let data: BTreeMap<ClosedPoint<PrimeField>, Vec<Poly<PrimeField>>> = fib
            .iter()
            .map(|(x, d)| {
                let v = (0..*d)
                    .map(|_| Poly::new(k, (0..x.degree()).map(|_| k.random_elt(&mut rng)).collect()))
                    .collect();
                (x.clone(), v)
            })
            .collect();
        let r = (|| {
            let m0 = module_adele(&sheaf, 0, ModuleData::Fibers(data.clone()))?;
            let mut ok = true;
            let mut cur = m0.clone();
            for level in 0..=3usize {
                let top = CurvePattern::new(level, level + 1)?;
                ok &= cur.fiber_component(&top).as_ref() == Some(&data);
                for p in CurvePattern::all(level) {
                    if p != top {
                        ok &= cur.fiber_component(&p).is_some_and(|d| d.is_empty());
                    }
                }
                if level < 3 {
                    for i in 0..=level + 1 {
                        let up = cur.coface(i)?;
                        ok &= up.codegeneracy(i.min(level))? == cur;
                    }
                    cur = cur.coface(0)?;
                }
            }
            Ok(ok)
        })();
        rigid.check_result(r, || format!("sample {i}: {sheaf}"));
    }
    Ok(SuiteReport {
        suite: "skyscraper".into(),
        seed,
        properties: [dims, rigid].into_iter().map(Prop::finish).collect(),
    })
}

/// `samples` level-1 elements for `O(D)` spread over `deg D in [-4, 4]`:
/// every one is a coboundary or matched to an `H^1` representative.
pub fn resolution_suite(seed: u64, samples: usize) -> Result<SuiteReport> {
    let k = PrimeField::new(5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut explained = Prop::new("every sampled level-1 element is a coboundary or an H^1 class");
    let mut kernel = Prop::new("ker(A^0 -> A^1) = H^0(O(D))");
    let degrees: Vec<i64> = (-4..=4).collect();
    let mut total = 0;
    for (idx, &deg) in degrees.iter().enumerate() {
        let share = samples / degrees.len() + usize::from(idx < samples % degrees.len());
        let d = random_divisor(&k, deg, &mut rng);
        let l = Lattice::line(&k, &d);
        let r = resolution_check(&l, share, &mut rng);
        match r {
            Ok(rep) => {
                total += rep.samples;
                explained.check(rep.unexplained == 0 && rep.coboundaries + rep.matched_h1 == rep.samples, || {
                    format!("O({d}): {} unexplained, {:?}", rep.unexplained, rep.witnesses.first())
                });
                kernel.check(rep.kernel_dim == (deg + 1).max(0) as usize, || format!("O({d}): kernel {}", rep.kernel_dim));
            }
            Err(e) => explained.check(false, || format!("O({d}): {e}")),
        }
    }
    explained.checked = total;
    Ok(SuiteReport {
        suite: "resolution".into(),
        seed,
        properties: [explained, kernel].into_iter().map(Prop::finish).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for r in [
            cosimplicial_suite(1, 3).unwrap(),
            flasque_suite(1, 10, 5).unwrap(),
            homotopy_suite(1, &[Poset::total(3), Poset::fan(4)]).unwrap(),
            descent_suite(1, 2, 2, 1).unwrap(),
            weil_suite(1, 4).unwrap(),
            skyscraper_suite(1, 3).unwrap(),
        ] {
            assert!(r.passed(), "{}: {:?}", r.suite, r.first_failure());
        }
    }
}
