//! `adelekit`: cohomology runs, cocycle gluing and classification, and the
//! property suites, all with canonical JSON output.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use adelekit_core::adele::LocalComponent;
use adelekit_core::cohomology::{adelic_cohomology, cech_cohomology, oracle_diff, WindowPolicy};
use adelekit_core::descent::{
    gauge_equivalent, glue, weil_reduce, witness_gauge, Cocycle, Equivalence, Validation,
};
use adelekit_core::field::{PrimeField, Rationals};
use adelekit_core::json::{
    cocycle_from_json, double_coset_to_json, gauge_to_json, report_to_json, validation_to_json,
};
use adelekit_core::local::LocalElt;
use adelekit_core::module::Sheaf;
use adelekit_core::point::ClosedPoint;
use adelekit_core::poly::BaseField;
use adelekit_core::rat::Rat;
use adelekit_core::scheme::{CurvePattern, Poset, SchemeModel};
use adelekit_core::specz::{accept_level0, primes, structure_sheaf_ranks, validate_descent, DescentCheck, ZFamily};
use adelekit_core::suites::{
    cosimplicial_suite, descent_suite, flasque_suite, homotopy_posets, homotopy_suite, oracle_suite,
    resolution_suite, skyscraper_suite, weil_suite, SuiteReport,
};
use adelekit_core::DEFAULT_PRECISION;

const EXIT_FAILURE: u8 = 1;
const EXIT_NOT_STABILIZED: u8 = 2;
const EXIT_ORACLE_MISMATCH: u8 = 3;
const EXIT_INDETERMINATE: u8 = 4;

#[derive(Parser)]
#[command(name = "adelekit", version, about = "Adelic descent on curves and finite posets")]
struct Cli {
    /// Base field: `f<p>` for a prime p, or `q`.
    #[arg(long, global = true, default_value = "f5")]
    field: String,
    /// Working precision for series-backed checks.
    #[arg(long, global = true, env = "ADELEKIT_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: i64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sheaf cohomology through windows of the adelic complex.
    Cohomology {
        #[arg(long, value_enum, default_value_t = Model::P1)]
        model: Model,
        /// `O(n)`, `O(2*[t] + -1*[inf])`, `sky(t,2)` or `sky(t,2;t-1,1)`; `O` on `specz`.
        #[arg(long)]
        sheaf: String,
        #[arg(long, value_enum)]
        oracle: Option<Oracle>,
        /// Include H^0 and H^1 representatives.
        #[arg(long)]
        representatives: bool,
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Number of primes in the `specz` window.
        #[arg(long, default_value_t = 4)]
        primes: usize,
    },
    /// Validate a cocycle and describe the glued bundle.
    Glue {
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long)]
        check_only: bool,
    },
    /// Splitting type of the glued bundle.
    Splitting {
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Are two cocycles in the same gauge orbit?
    Equiv { a: PathBuf, b: PathBuf },
    /// Randomized and exhaustive property suites.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Posets for `homotopy`: `fp<n>chain`, `fp<n>fan`, or `random`.
        #[arg(long, default_value = "random")]
        model: String,
    },
    /// Curated examples, each tied to the statement it checks.
    PaperDemos,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    P1,
    Specz,
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Cech,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Cosimplicial,
    Flasque,
    Homotopy,
    Descent,
    Weil,
    Oracle,
    Skyscraper,
    Resolution,
}

/// A report and the exit code that goes with it.
struct Outcome {
    report: Value,
    code: u8,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = out.report.to_string();
            let written = match &cli.output {
                Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
                None => {
                    println!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::from(out.code),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(EXIT_FAILURE)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    if cli.precision <= 0 {
        bail!("precision must be positive, got {}", cli.precision);
    }
    match &cli.command {
        Command::Suite {
            name,
            seed,
            rank,
            samples,
            model,
        } => return run_suite(*name, *seed, *rank, *samples, model),
        Command::PaperDemos => return paper_demos(cli.precision),
        Command::Cohomology {
            model: Model::Specz,
            sheaf,
            primes: n,
            ..
        } => return specz_cohomology(sheaf, *n),
        _ => {}
    }
    let f = cli.field.trim().to_ascii_lowercase();
    if f == "q" {
        run_over(&Rationals, cli)
    } else if let Some(p) = f.strip_prefix('f') {
        let p: u64 = p.parse().with_context(|| format!("bad field `{}`", cli.field))?;
        run_over(&PrimeField::new(p)?, cli)
    } else {
        bail!("unknown field `{}`: use f<p> or q", cli.field)
    }
}

fn run_over<K: BaseField>(field: &K, cli: &Cli) -> Result<Outcome> {
    let n = cli.precision;
    match &cli.command {
        Command::Cohomology {
            sheaf,
            oracle,
            representatives,
            max_rounds,
            ..
        } => cohomology(field, sheaf, *oracle, *representatives, *max_rounds, n),
        Command::Glue { cocycle, check_only } => {
            let phi = read_cocycle(field, cocycle)?;
            let v = phi.validate_at(n);
            let mut out = json!({"precision": n, "rank": phi.rank(), "validation": validation_to_json(&v)});
            let code = validation_code(&v);
            if code != 0 || *check_only {
                return Ok(Outcome { report: out, code });
            }
            let b = glue(&phi)?;
            let (h0, h1) = b.cohomology(0)?;
            out["degree"] = json!(b.degree());
            out["splitting_type"] = json!(b.splitting_type()?);
            out["cohomology"] = json!({"0": h0, "1": h1});
            if b.rank() == 1 {
                out["weil"] = double_coset_to_json(&weil_reduce(&b)?);
            }
            Ok(Outcome::ok(out))
        }
        Command::Splitting { cocycle } => {
            let phi = read_cocycle(field, cocycle)?;
            let v = phi.validate_at(n);
            let code = validation_code(&v);
            if code != 0 {
                return Ok(Outcome {
                    report: json!({"precision": n, "validation": validation_to_json(&v)}),
                    code,
                });
            }
            let b = glue(&phi)?;
            Ok(Outcome::ok(json!({
                "precision": n,
                "rank": b.rank(),
                "degree": b.degree(),
                "splitting_type": b.splitting_type()?,
            })))
        }
        Command::Equiv { a, b } => {
            let phi = read_cocycle(field, a)?;
            let psi = read_cocycle(field, b)?;
            let mut out = json!({"precision": n});
            for (key, c) in [("a", &phi), ("b", &psi)] {
                let v = c.validate_at(n);
                let code = validation_code(&v);
                if code != 0 {
                    out[key] = json!({"validation": validation_to_json(&v)});
                    return Ok(Outcome { report: out, code });
                }
                let g = glue(c)?;
                out[key] = json!({"degree": g.degree(), "splitting_type": g.splitting_type()?});
            }
            let eq = gauge_equivalent(&phi, &psi)?;
            out["equivalent"] = json!(eq.to_string());
            if eq == Equivalence::Yes && phi.rank() == 1 {
                match witness_gauge(&phi, &psi)? {
                    Some(g) => out["witness"] = gauge_to_json(&g),
                    None => bail!("the invariants agree but no rank-1 gauge was found"),
                }
            }
            let code = if eq == Equivalence::Indeterminate { EXIT_INDETERMINATE } else { 0 };
            Ok(Outcome { report: out, code })
        }
        Command::Suite { .. } | Command::PaperDemos => unreachable!("handled before field dispatch"),
    }
}

fn validation_code(v: &Validation) -> u8 {
    match v {
        Validation::Valid { .. } => 0,
        Validation::Indeterminate { .. } => EXIT_INDETERMINATE,
        Validation::Invalid { .. } | Validation::Unchecked => EXIT_FAILURE,
    }
}

fn read_cocycle<K: BaseField>(field: &K, path: &Path) -> Result<Cocycle<K>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    cocycle_from_json(field, &v).with_context(|| format!("decoding {}", path.display()))
}

fn cohomology<K: BaseField>(
    field: &K,
    descriptor: &str,
    oracle: Option<Oracle>,
    representatives: bool,
    max_rounds: Option<usize>,
    n: i64,
) -> Result<Outcome> {
    let sheaf = Sheaf::parse(field, descriptor)?;
    let policy = WindowPolicy {
        representatives,
        max_rounds,
        max_precision: Some(n),
        ..Default::default()
    };
    let report = adelic_cohomology(field, &sheaf, &policy)?;
    let mut out = report_to_json(&report);
    out["sheaf"] = json!(sheaf.to_string());
    out["precision"] = json!(n);
    if !report.stabilized {
        return Ok(Outcome {
            report: out,
            code: EXIT_NOT_STABILIZED,
        });
    }
    if let Some(Oracle::Cech) = oracle {
        let c = cech_cohomology(field, &sheaf)?;
        let diff = oracle_diff(&report, &c);
        let dims: serde_json::Map<String, Value> = c.dims.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        out["oracle"] = json!({"name": "cech", "dims": dims});
        out["diff"] = json!(diff
            .iter()
            .map(|(i, a, b)| json!({"degree": i, "adelic": a, "cech": b}))
            .collect::<Vec<_>>());
        if !diff.is_empty() {
            return Ok(Outcome {
                report: out,
                code: EXIT_ORACLE_MISMATCH,
            });
        }
    }
    Ok(Outcome::ok(out))
}

fn specz_cohomology(descriptor: &str, n: usize) -> Result<Outcome> {
    if descriptor.trim() != "O" && descriptor.trim() != "O(0)" {
        bail!("on specz only the structure sheaf `O` is supported");
    }
    if n == 0 {
        bail!("the specz window needs at least one prime");
    }
    let support = primes(n);
    let (h0, h1) = structure_sheaf_ranks(&support, 2)?;
    Ok(Outcome::ok(json!({
        "model": SchemeModel::SpecZ.to_json(),
        "sheaf": "O",
        "ranks": {"0": h0, "1": h1},
        "window": {"support": support, "pole": 2},
    })))
}

fn suite_posets(seed: u64, model: &str) -> Result<Vec<Poset>> {
    if model == "random" {
        return Ok(homotopy_posets(seed)?);
    }
    let parse = |s: &str| -> Result<usize> {
        let n: usize = s.parse().with_context(|| format!("bad poset model `{model}`"))?;
        if n == 0 {
            bail!("poset model `{model}` is empty");
        }
        Ok(n)
    };
    let body = model
        .strip_prefix("fp")
        .with_context(|| format!("unknown poset model `{model}`: use fp<n>chain, fp<n>fan or random"))?;
    if let Some(n) = body.strip_suffix("chain") {
        Ok(vec![Poset::total(parse(n)?)])
    } else if let Some(n) = body.strip_suffix("fan") {
        Ok(vec![Poset::fan(parse(n)?)])
    } else {
        bail!("unknown poset model `{model}`: use fp<n>chain, fp<n>fan or random")
    }
}

fn run_suite(name: SuiteName, seed: u64, rank: usize, samples: usize, model: &str) -> Result<Outcome> {
    let report = match name {
        SuiteName::Cosimplicial => cosimplicial_suite(seed, samples)?,
        SuiteName::Flasque => flasque_suite(seed, samples, samples.div_ceil(2))?,
        SuiteName::Homotopy => homotopy_suite(seed, &suite_posets(seed, model)?)?,
        SuiteName::Descent => descent_suite(seed, rank, samples, 5)?,
        SuiteName::Weil => weil_suite(seed, samples)?,
        SuiteName::Oracle => oracle_suite()?,
        SuiteName::Skyscraper => skyscraper_suite(seed, samples)?,
        SuiteName::Resolution => resolution_suite(seed, samples)?,
    };
    Ok(suite_outcome(&report))
}

fn suite_outcome(report: &SuiteReport) -> Outcome {
    let mut out = serde_json::to_value(report).expect("suite reports serialize");
    out["passed"] = json!(report.passed());
    if let Some(p) = report.first_failure() {
        out["first_failure"] = serde_json::to_value(p).expect("suite reports serialize");
    }
    let code = if report.passed() { 0 } else { EXIT_FAILURE };
    Outcome { report: out, code }
}

struct Demo {
    name: &'static str,
    statement: &'static str,
    passed: bool,
    detail: Value,
}

fn curve_diagram() -> Result<Demo> {
    // the first three levels of the cosimplicial ring on a curve
    let levels: Vec<Value> = (0..3)
        .map(|n| {
            let parts: Vec<Value> = CurvePattern::all(n)
                .iter()
                .map(|p| json!({"pattern": p.to_string(), "ring": format!("{:?}", p.ring())}))
                .collect();
            json!({"level": n, "factors": parts})
        })
        .collect();
    let report = cosimplicial_suite(1, 20)?;
    Ok(Demo {
        name: "curve-diagram",
        statement: "the adeles of a curve form a cosimplicial ring F x prod O_x, then F, A, O at level one, with the simplicial identities",
        passed: report.passed(),
        detail: json!({"levels": levels, "identity_checks": report.properties.iter().map(|p| p.checked).sum::<usize>()}),
    })
}

fn skyscraper_demo(field: &PrimeField) -> Result<Demo> {
    let sheaf = Sheaf::parse(field, "sky(t,2)")?;
    let r = adelic_cohomology(field, &sheaf, &WindowPolicy::default())?;
    Ok(Demo {
        name: "skyscraper",
        statement: "the adelic resolution of a skyscraper sheaf is constant, so H^0 is the fiber and H^1 vanishes",
        passed: r.stabilized && r.dims_vec() == vec![2, 0],
        detail: report_to_json(&r),
    })
}

fn specz_demo() -> Result<Demo> {
    let bound = accept_level0(ZFamily::ResidueFields, 1)?;
    let support = primes(5);
    let check = validate_descent(ZFamily::ResidueFields, &support, 6)?;
    let (passed, witness) = match &check {
        DescentCheck::Rejected(w) => (bound == (-1, 0), w.to_string()),
        DescentCheck::Cartesian { rank } => (false, format!("accepted with rank {rank}")),
    };
    Ok(Demo {
        name: "specz-rejection",
        statement: "prod_p F_p is a perfect complex over prod_p Z_p but not an adelic descent datum on Spec Z",
        passed,
        detail: json!({"amplitude": [bound.0, bound.1], "witness": witness}),
    })
}

fn weil_demo(field: &PrimeField, n: i64) -> Result<Demo> {
    // the idele (t-1) at the point t = 1 glues to O(1)
    let x = ClosedPoint::parse(field, "t-1")?;
    let p = Rat::parse(field, "t-1", "1")?;
    let idele = LocalComponent::new([(x, LocalElt::Exact(p))].into_iter().collect(), Rat::one(field));
    let phi = Cocycle::from_weil(field, &[vec![idele]])?;
    let valid = matches!(phi.validate_at(n), Validation::Valid { .. });
    let b = glue(&phi)?;
    let d = weil_reduce(&b)?;
    Ok(Demo {
        name: "weil-reduction",
        statement: "line bundles on P^1 are the double cosets GL_1(F) \\ GL_1(A) / GL_1(O), represented by t^d at the origin",
        passed: valid && d.degree == 1,
        detail: double_coset_to_json(&d),
    })
}

fn paper_demos(n: i64) -> Result<Outcome> {
    let k = PrimeField::new(5)?;
    let demos = [curve_diagram()?, skyscraper_demo(&k)?, specz_demo()?, weil_demo(&k, n)?];
    let passed = demos.iter().all(|d| d.passed);
    let list: Vec<Value> = demos
        .iter()
        .map(|d| json!({"name": d.name, "statement": d.statement, "passed": d.passed, "detail": d.detail}))
        .collect();
    Ok(Outcome {
        report: json!({"demos": list, "passed": passed, "precision": n}),
        code: if passed { 0 } else { EXIT_FAILURE },
    })
}
