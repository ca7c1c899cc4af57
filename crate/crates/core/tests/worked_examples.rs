//! Small worked examples across modules, each checked against a direct
//! computation rather than the library's own answer.

use std::collections::BTreeMap;

use adelekit_core::adele::{Component, LocalComponent};
use adelekit_core::cohomology::{adelic_cohomology, WindowPolicy};
use adelekit_core::cosimplicial::DoldKan;
use adelekit_core::descent::{gauge_equivalent, glue, weil_reduce, Cocycle, Equivalence, Validation};
use adelekit_core::field::{PrimeField, Rationals};
use adelekit_core::local::LocalElt;
use adelekit_core::module::Sheaf;
use adelekit_core::point::ClosedPoint;
use adelekit_core::rat::Rat;
use adelekit_core::scheme::CurvePattern;
use adelekit_core::series::{valuation_of_rat, Valuation};

fn k5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

/// Rank-1 cocycle with `p^e` at each listed point; its degree is
/// `sum e * deg p`.
fn line(k: &PrimeField, at: &[(&str, i64)]) -> (Cocycle<PrimeField>, i64) {
    let mut exc = BTreeMap::new();
    let mut degree = 0;
    for (p, e) in at {
        let x = ClosedPoint::parse(k, p).unwrap();
        degree += e * x.degree() as i64;
        exc.insert(x, LocalElt::Exact(Rat::parse(k, p, "1").unwrap().pow(*e).unwrap()));
    }
    let g = LocalComponent::new(exc, Rat::one(k));
    (Cocycle::from_weil(k, &[vec![g]]).unwrap(), degree)
}

#[test]
fn valuation_counts_factors() {
    let k = k5();
    let f = Rat::parse(&k, "t^2", "t+1").unwrap();
    let origin = ClosedPoint::origin(&k);
    assert_eq!(valuation_of_rat(&f, &origin), Valuation::Exact(2));
    // at t = -1 the denominator contributes one pole
    assert_eq!(valuation_of_rat(&f, &ClosedPoint::parse(&k, "t+1").unwrap()), Valuation::Exact(-1));
    assert_eq!(valuation_of_rat(&Rat::one(&k), &origin), Valuation::Exact(0));
}

#[test]
fn trivial_bundle_has_n_sections() {
    let k = k5();
    for n in 1..=3 {
        let b = glue(&Cocycle::identity(&k, n)).unwrap();
        assert_eq!(b.h0(0).unwrap(), n);
        assert_eq!(b.splitting_type().unwrap(), vec![0; n]);
    }
    assert_eq!(weil_reduce(&glue(&Cocycle::identity(&k, 1)).unwrap()).unwrap().degree, 0);
}

#[test]
fn corrupted_off_diagonal_entry_fails_at_xxeta() {
    let k = k5();
    let mut entries = Cocycle::identity(&k, 2).entries().clone();
    let bad = LocalComponent::new(BTreeMap::new(), Rat::parse(&k, "2", "1").unwrap());
    let xx = CurvePattern::new(1, 2).unwrap();
    entries[0][1] = entries[0][1].with_component(&xx, Component::Local(bad)).unwrap();
    match Cocycle::new(&k, entries).unwrap().validate() {
        Validation::Invalid { pattern, .. } => assert_eq!(pattern, "(x,x,eta)"),
        other => panic!("expected a failure, got {other}"),
    }
}

#[test]
fn line_bundles_are_classified_by_degree() {
    let k = k5();
    let cases = [
        line(&k, &[("t", 1)]),
        line(&k, &[("t-1", 1)]),
        line(&k, &[("t", 2)]),
        line(&k, &[("t", 1), ("t-1", 1)]),
        line(&k, &[("t^2+2", 1)]),
        line(&k, &[("t", -1), ("t-2", 1)]),
    ];
    for (a, da) in &cases {
        let b = glue(a).unwrap();
        assert_eq!(b.degree(), *da);
        // Riemann-Roch on P^1: h^0(O(d)) = max(d + 1, 0)
        assert_eq!(b.h0(0).unwrap() as i64, (da + 1).max(0));
        for (c, dc) in &cases {
            let expected = if da == dc { Equivalence::Yes } else { Equivalence::No };
            assert_eq!(gauge_equivalent(a, c).unwrap(), expected, "degrees {da} and {dc}");
        }
    }
}

#[test]
fn alternating_and_normalized_agree() {
    let k = k5();
    for s in ["O(-3)", "O(0)", "O(2)", "O(1*[t] + -3*[inf])"] {
        let sheaf = Sheaf::parse(&k, s).unwrap();
        let dims = |mode| {
            let policy = WindowPolicy { mode, ..Default::default() };
            adelic_cohomology(&k, &sheaf, &policy).unwrap().dims_vec()
        };
        assert_eq!(dims(DoldKan::Alternating), dims(DoldKan::Normalized), "{s}");
    }
}

#[test]
fn cohomology_over_q_follows_riemann_roch() {
    for n in -5..=5i64 {
        let sheaf = Sheaf::parse(&Rationals, &format!("O({n})")).unwrap();
        let r = adelic_cohomology(&Rationals, &sheaf, &WindowPolicy::default()).unwrap();
        let h0 = (n + 1).max(0) as usize;
        // h^0 - h^1 = n + 1
        let h1 = (h0 as i64 - n - 1) as usize;
        assert_eq!(r.dims_vec(), vec![h0, h1], "O({n})");
    }
}
