//! One line per acceptance criterion, written straight to stdout so it shows
//! without --nocapture.

use optwist::classical::{lambda_as, Ger};
use optwist::complexes::{br_slice, br_twbt_quasi_iso, eta_quasi_iso, non_fixed_point_witness};
use optwist::{gerbr, suite, vectors};
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

struct Outcome {
    passed: bool,
    detail: String,
}

fn line(n: usize, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let el = t.elapsed();
    let ok = o.passed && el <= limit;
    writeln!(
        std::io::stdout(),
        "criterion {n}: {} ({:.1}s, limit {}s) {}",
        if ok { "PASS" } else { "FAIL" },
        el.as_secs_f64(),
        limit.as_secs(),
        o.detail
    )
    .unwrap();
    ok
}

fn failed(names: Vec<String>) -> Outcome {
    let passed = names.is_empty();
    let detail = if passed { "exact".into() } else { format!("failing: {}", names.join(", ")) };
    Outcome { passed, detail }
}

fn vectors() -> Outcome {
    failed(vectors::replay().into_iter().filter(|c| !c.passed).map(|c| c.name).collect())
}

fn axioms() -> Outcome {
    let runs = [
        ("ger", 4, 0),
        ("lalie", 4, 0),
        ("as", 4, 0),
        ("lambda-as", 4, 0),
        ("bt", 4, 0),
        ("br", 3, 0),
        ("twbt", 3, 3),
        ("lalieinf", 4, 0),
        ("gerinf", 3, 0),
        ("asinf", 4, 0),
        ("tw:ger", 3, 2),
        ("tw:lambda-as", 3, 2),
    ];
    let mut bad = Vec::new();
    for (op, n, r) in runs {
        match suite::axioms(op, n, r, 12, 1) {
            Ok(rep) if rep.passed() => {}
            Ok(rep) => bad.push(format!("{op} {:?}", rep.failures.first())),
            Err(e) => bad.push(format!("{op} {e}")),
        }
    }
    // the complexes of the quasi-isomorphism checks refuse to assemble when d² ≠ 0
    for n in 1..=3 {
        if let Err(e) = br_twbt_quasi_iso(n) {
            bad.push(format!("br/twbt({n}) {e}"));
        }
    }
    failed(bad)
}

fn mc() -> Outcome {
    let runs = [("ulalie", 4, 0), ("uger", 4, 0), ("alpha-T", 3, 3), ("alpha-G", 3, 2), ("asinf-c", 3, 2), ("bt-jacobi", 3, 0)];
    failed(
        runs.iter()
            .filter(|(w, n, r)| !suite::mc_check(w, *n, *r).map(|rep| rep.passed).unwrap_or(false))
            .map(|(w, _, _)| w.to_string())
            .collect(),
    )
}

fn coalgebras() -> Outcome {
    let mut bad = Vec::new();
    let mut sampled = Vec::new();
    for op in ["ger", "lambda-as", "gerinf", "lalieinf"] {
        match suite::coalgebra(op, 3, 2, 50, 7) {
            Ok(rep) => {
                sampled.push(format!("{op}:{}+{}", rep.exhaustive, rep.sampled));
                if !rep.passed || rep.sampled < 50 {
                    bad.push(format!("{op} {:?}", rep.defects.first()));
                }
            }
            Err(e) => bad.push(format!("{op} {e}")),
        }
    }
    let mut o = failed(bad);
    o.detail = format!("{} [exhaustive+sampled {}]", o.detail, sampled.join(" "));
    o
}

fn quasi_isos() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=3 {
        if !br_twbt_quasi_iso(n).map(|r| r.passed()).unwrap_or(false) {
            bad.push(format!("Br({n}) -> TwBT({n})"));
        }
        if !eta_quasi_iso(&Ger, n, n).map(|r| r.passed()).unwrap_or(false) {
            bad.push(format!("eta Ger({n})"));
        }
        if !eta_quasi_iso(&lambda_as(), n, n + 1).map(|r| r.passed()).unwrap_or(false) {
            bad.push(format!("eta LambdaAs({n})"));
        }
    }
    let h: usize = br_slice(2, -3, 1).map(|s| s.cohomology_dims().values().sum()).unwrap_or(0);
    if h != 2 {
        bad.push(format!("dim H(Br(2)) = {h}"));
    }
    if !non_fixed_point_witness(1, 1, 1).map(|w| w.exhibits_failure()).unwrap_or(false) {
        bad.push("negative control".into());
    }
    failed(bad)
}

fn algebras() -> Outcome {
    failed(suite::algebra_properties().into_iter().filter(|c| !c.passed).map(|c| c.name).collect())
}

fn fprime() -> Outcome {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/ger_inf_to_twbt.json");
    match gerbr::load(&path).and_then(|f| suite::fprime(&f, 3)) {
        Ok(rep) => Outcome {
            passed: rep.passed(),
            detail: format!(
                "f-Tcc {} coalgebra {} in Br {} forbidden-clean {} ({} ordered terms of arity ≥ 3)",
                rep.input_f_tcc, rep.coalgebra_morphism, rep.image_in_br, rep.forbidden.clean, rep.forbidden.terms_checked
            ),
        },
        Err(e) => Outcome { passed: false, detail: e.to_string() },
    }
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let results = [
        line(1, s(10), vectors),
        line(2, s(300), axioms),
        line(3, s(600), mc),
        line(4, s(600), coalgebras),
        line(5, s(900), quasi_isos),
        line(6, s(300), algebras),
        line(7, s(120), fprime),
    ];
    let failing: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failing.is_empty(), "criteria failing: {failing:?}");
}
