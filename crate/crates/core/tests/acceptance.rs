//! One line per acceptance criterion: PASS/FAIL, elapsed time and limit.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use adelekit_core::cohomology::{adelic_cohomology, cech_cohomology, WindowPolicy};
use adelekit_core::divisor::Divisor;
use adelekit_core::field::{PrimeField, Rationals};
use adelekit_core::module::Sheaf;
use adelekit_core::point::ClosedPoint;
use adelekit_core::poly::BaseField;
use adelekit_core::scheme::Poset;
use adelekit_core::specz::{accept_level0, primes, validate_descent, DescentCheck, ZFamily};
use adelekit_core::suites::{
    cosimplicial_suite, descent_suite, flasque_suite, homotopy_posets, homotopy_suite, resolution_suite,
    skyscraper_suite, weil_suite, SuiteReport,
};

const SEED: u64 = 20_240_601;

/// Čech complex of `O(n)` on the two standard charts, counted by monomials:
/// `C^0 = k[t] t^0..` and `k[1/t]`, with `H^0` spanned by `t^i, 0 <= i <= n`
/// and `H^1` by `t^i, n < i < 0`.
fn monomial_count(n: i64) -> (usize, usize) {
    let h0 = (0..=n.max(-1)).count();
    let h1 = (n + 1..0).count();
    (h0, h1)
}

fn check_oracle<K: BaseField>(field: &K) -> Result<(), String> {
    for n in -6..=6i64 {
        let sheaf = Sheaf::Line(Divisor::at_infinity(n));
        let a = adelic_cohomology(field, &sheaf, &WindowPolicy::default()).map_err(|e| e.to_string())?;
        let c = cech_cohomology(field, &sheaf).map_err(|e| e.to_string())?;
        let (h0, h1) = monomial_count(n);
        let closed = ((n + 1).max(0) as usize, (-n - 1).max(0) as usize);
        if !a.stabilized {
            return Err(format!("O({n}) did not stabilize"));
        }
        if (a.h(0), a.h(1)) != (h0, h1) || (c.h(0), c.h(1)) != (h0, h1) || closed != (h0, h1) {
            return Err(format!(
                "O({n}): adelic {:?}, Čech {:?}, monomials {:?}",
                a.dims_vec(),
                c.dims_vec(),
                (h0, h1)
            ));
        }
    }
    Ok(())
}

fn suite(r: adelekit_core::error::Result<SuiteReport>) -> Result<String, String> {
    let r = r.map_err(|e| e.to_string())?;
    let checks: usize = r.properties.iter().map(|p| p.checked).sum();
    match r.first_failure() {
        None => Ok(format!("{} properties, {checks} checks", r.properties.len())),
        Some(p) => Err(format!("{}: {}", p.name, p.witness.clone().unwrap_or_default())),
    }
}

fn criterion_2() -> Result<String, String> {
    // all fiber dimensions 1..=4 at one, two and three points, then seeded samples
    let k = PrimeField::new(5).map_err(|e| e.to_string())?;
    let pts: Vec<ClosedPoint<PrimeField>> = ["t", "t-1", "t^2+2"]
        .iter()
        .map(|s| ClosedPoint::parse(&k, s).unwrap())
        .collect();
    for count in 1..=3 {
        for d in 1..=4usize {
            let fib: BTreeMap<_, _> = pts.iter().take(count).map(|x| (x.clone(), d)).collect();
            let total: usize = fib.iter().map(|(x, d)| d * x.degree()).sum();
            let sheaf = Sheaf::Skyscraper(fib);
            let r = adelic_cohomology(&k, &sheaf, &WindowPolicy::default()).map_err(|e| e.to_string())?;
            if r.dims_vec() != vec![total, 0] {
                return Err(format!("{sheaf}: {:?}, expected [{total}, 0]", r.dims_vec()));
            }
        }
    }
    suite(skyscraper_suite(SEED, 40))
}

fn criterion_9() -> Result<String, String> {
    let bound = accept_level0(ZFamily::ResidueFields, 1).map_err(|e| e.to_string())?;
    if bound != (-1, 0) {
        return Err(format!("amplitude {bound:?}"));
    }
    if accept_level0(ZFamily::GrowingAmplitude, 4).is_ok() {
        return Err("an unbounded family was accepted".into());
    }
    let all = primes(30);
    for m in 0..=all.len() {
        let support = &all[..m];
        match validate_descent(ZFamily::ResidueFields, support, 6).map_err(|e| e.to_string())? {
            DescentCheck::Rejected(w) => {
                // independent check: q is prime, outside the support, and divides no p^k
                let q = w.prime;
                let q_prime = (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0);
                let divides = support.iter().any(|&p| p % q == 0);
                if !q_prime || divides || support.contains(&q) {
                    return Err(format!("bad witness {w}"));
                }
            }
            other => return Err(format!("support {support:?}: accepted as {other:?}")),
        }
    }
    match validate_descent(ZFamily::Free(1), &all[..3], 2) {
        Ok(DescentCheck::Cartesian { rank: 1 }) => {}
        other => return Err(format!("the structure sheaf was rejected: {other:?}")),
    }
    let ranks = adelekit_core::specz::structure_sheaf_ranks(&all[..4], 2).map_err(|e| e.to_string())?;
    if ranks != (1, 0) {
        return Err(format!("ranks of O on Spec Z: {ranks:?}"));
    }
    Ok(format!("rejected for {} support bounds", all.len() + 1))
}

fn main() -> ExitCode {
    type Check = Box<dyn Fn() -> Result<String, String>>;
    let criteria: Vec<(u32, &str, u64, Check)> = vec![
        (
            1,
            "adelic and Čech cohomology of O(n), n in [-6, 6], over F_5 and Q",
            5,
            Box::new(|| {
                check_oracle(&PrimeField::new(5).unwrap())?;
                check_oracle(&Rationals)?;
                Ok("26 sheaves".into())
            }),
        ),
        (2, "skyscraper rigidity", 1, Box::new(criterion_2)),
        (3, "cosimplicial identities", 10, Box::new(|| suite(cosimplicial_suite(SEED, 100)))),
        (4, "resolution exactness for O(D), deg D in [-4, 4]", 20, Box::new(|| suite(resolution_suite(SEED, 200)))),
        (5, "very flasque and lâche properties", 10, Box::new(|| suite(flasque_suite(SEED, 100, 50)))),
        (6, "descent invariance on gauge orbits", 60, Box::new(|| suite(descent_suite(SEED, 3, 50, 5)))),
        (7, "Weil classification of line bundles", 10, Box::new(|| suite(weil_suite(SEED, 30)))),
        (
            8,
            "homotopy contraction on posets with a maximum",
            10,
            Box::new(|| {
                let mut posets = homotopy_posets(SEED).map_err(|e| e.to_string())?;
                posets.push(Poset::total(4));
                suite(homotopy_suite(SEED, &posets))
            }),
        ),
        (9, "prod_p F_p over Spec Z is not a descent datum", 5, Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "[{status}] criterion {id}: {name} ({:.2} s, limit {limit} s): {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
