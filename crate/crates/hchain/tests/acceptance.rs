//! End-to-end acceptance run: one PASS/FAIL line per criterion, then a single
//! assertion over all of them. Details of each failure are printed beneath its line.

#[path = "../../core/tests/common/suites.rs"]
mod suites;

use std::time::Instant;

use hchain::checks::{verify_chain, verify_structure_functions, verify_system, Finding, Verification};
use hchain::cli::{default_params, default_state};
use hchain::numeric::grid::{default_domain, grid_study, GridSpec, Stencil};
use hchain::numeric::integrator::{convergence_study, TrajectorySetup};
use hchain::numeric::oracle::compare_with_oracle;
use hchain_core::spectrum::{ladder, Spacing};
use hchain_core::systems::{classical_c_system, classical_q_system, ChainLabel, Family, Regime, SystemKind};
use hchain_core::Scalar;

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Outcome { passed, summary: summary.into(), details }
    }
}

fn kind(family: Family, regime: Regime) -> SystemKind {
    SystemKind { family, regime }
}

fn all_kinds() -> Vec<SystemKind> {
    let mut out = Vec::new();
    for f in [Family::Cubic, Family::Quadratic] {
        for r in [Regime::Classical, Regime::Quantum] {
            out.push(kind(f, r));
        }
    }
    out
}

fn findings<'a>(v: &'a Verification, topic: &'a str) -> impl Iterator<Item = &'a Finding> + 'a {
    v.findings.iter().filter(move |f| f.topic == topic)
}

fn clip(s: &str) -> String {
    const MAX: usize = 120;
    if s.chars().count() > MAX {
        format!("{} …", s.chars().take(MAX).collect::<String>())
    } else {
        s.to_string()
    }
}

fn show(sel: &str, f: &Finding) -> String {
    format!("{sel}: {} printed `{}` derived `{}`", f.item, clip(&f.printed), clip(&f.derived))
}

fn criterion_1(systems: &[(SystemKind, Verification)], seconds: f64) -> Outcome {
    let mut details = Vec::new();
    let mut n = 0;
    for (k, v) in systems {
        for c in v.checks.iter().filter(|c| c.name.starts_with("{H,X}") || c.name.starts_with("[H,X]")) {
            n += 1;
            if !c.passed {
                details.push(format!("{k}: {} residual {}", c.name, c.detail));
            }
        }
    }
    let fast = seconds < 60.0;
    if !fast {
        details.push(format!("system verification took {seconds:.1} s"));
    }
    Outcome::new(n == 8 && details.is_empty(), format!("{n} brackets exactly zero, {seconds:.1} s"), details)
}

fn criterion_2(systems: &[(SystemKind, Verification)]) -> Outcome {
    let mut details = Vec::new();
    let mut n = 0;
    for (k, v) in systems.iter().filter(|(k, _)| k.regime == Regime::Quantum) {
        if let Some(c) = v.checks.iter().find(|c| c.name == "ternary algebra closes" && !c.passed) {
            details.push(format!("{k}: fit failed: {}", c.detail));
        }
        for f in findings(v, "structure constants") {
            n += 1;
            if !f.matches {
                details.push(show(&k.to_string(), f));
            }
        }
    }
    Outcome::new(n > 0 && details.is_empty(), format!("{n} printed quantum constants compared"), details)
}

fn criterion_3(systems: &[(SystemKind, Verification)]) -> Outcome {
    let mut details = Vec::new();
    let mut required = 0;
    for (k, v) in systems {
        for f in findings(v, "Casimir").filter(|f| f.item.starts_with('k') || f.item == "constant term at r = 0") {
            required += 1;
            if !f.matches {
                details.push(show(&k.to_string(), f));
            }
        }
        for c in v.checks.iter().filter(|c| c.name == "K = C² − 2h") {
            required += 1;
            if !c.passed {
                details.push(format!("{k}: K = C² − 2h fails"));
            }
        }
        for c in v.checks.iter().filter(|c| c.name.starts_with("Casimir is central") && !c.passed) {
            details.push(format!("{k}: {}", c.detail));
        }
    }
    // six c-list coefficients, four q-list, the quantum constant term, two generating functions
    let complete = required == 6 + 4 + 1 + 2;
    if !complete {
        details.push(format!("expected 13 Casimir items, found {required}"));
    }
    Outcome::new(details.is_empty(), format!("{required} Casimir items"), details)
}

fn criterion_4(systems: &[(SystemKind, Verification)], generic: &Verification) -> Outcome {
    let mut details = Vec::new();
    let mut verdict = None;
    let mut compared = 0;
    for (sel, v) in systems.iter().map(|(k, v)| (k.to_string(), v)).chain([(generic.selector.clone(), generic)]) {
        for c in v.checks.iter().filter(|c| !c.passed) {
            details.push(format!("{sel}: {} {}", c.name, c.detail));
        }
        for f in findings(v, "structure function") {
            if f.item.contains("degree-14") {
                if f.item.ends_with("operator relations") {
                    verdict = Some(f.derived.clone());
                }
                continue;
            }
            compared += 1;
            if !f.matches && !f.item.starts_with("β ≠ 0") {
                details.push(show(&sel, f));
            }
        }
    }
    let recorded = verdict.is_some();
    if !recorded {
        details.push("no verdict recorded for the degree-14 β ≠ 0 structure function".into());
    }
    let summary = format!(
        "{compared} structure-function identities; degree-14 form: {}",
        verdict.as_deref().unwrap_or("not validated")
    );
    Outcome::new(details.is_empty(), summary, details)
}

fn spectrum_findings(chains: &[Verification], spacing: Spacing, bounds: bool) -> (usize, Vec<String>) {
    let topic = format!("spectrum, {} spacing", spacing.name());
    let mut n = 0;
    let mut bad = Vec::new();
    for v in chains {
        for f in findings(v, &topic).filter(|f| f.item.ends_with(" >") == bounds) {
            n += 1;
            if !f.matches {
                bad.push(show(&v.selector, f));
            }
        }
    }
    (n, bad)
}

fn criterion_5(chains: &[Verification]) -> Outcome {
    let (n, mut details) = spectrum_findings(chains, Spacing::Oscillator, false);
    let (m, unit) = spectrum_findings(chains, Spacing::Unit, false);
    let summary = format!(
        "{} of {n} printed ladder items reproduced (oscillator spacing); unit spacing reproduces {} of {m}",
        n - details.len(),
        m - unit.len()
    );
    if n == 0 {
        details.push("no printed ladder items compared".into());
    }
    Outcome::new(details.is_empty(), summary, details)
}

fn criterion_6() -> Outcome {
    let sets: [[Scalar; 4]; 3] = [
        [Scalar::ratio(1, 2), Scalar::ratio(1, 2), Scalar::ratio(1, 2), Scalar::ratio(1, 2)],
        [Scalar::ratio(3, 2), Scalar::ratio(5, 2), Scalar::ratio(1, 2), Scalar::ratio(3, 2)],
        [Scalar::ratio(5, 2), Scalar::ratio(1, 2), Scalar::ratio(3, 2), Scalar::ratio(5, 2)],
    ];
    let mut details = Vec::new();
    let mut rows = 0;
    for chain in ChainLabel::ALL {
        let l = match ladder(chain, Spacing::Oscillator) {
            Ok(l) => l,
            Err(e) => {
                details.push(format!("chain ({chain}): {e}"));
                continue;
            }
        };
        let n = chain.dim();
        for mu in &sets {
            let mu = &mu[..n];
            let table = match l.enumerate(mu, 4) {
                Ok(t) => t,
                Err(e) => {
                    details.push(format!("chain ({chain}) at {mu:?}: {e}"));
                    continue;
                }
            };
            let cutoff = l.energies_at(&vec![5; n], mu).pop().expect("energies");
            let cmp = compare_with_oracle(&table, &cutoff);
            rows += cmp.rows;
            if !cmp.all_ok() {
                details.push(format!(
                    "chain ({chain}) at μ = {}: missing {:?}, not joint {:?}, duplicated {:?}, exhaustive {}",
                    mu.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
                    cmp.missing,
                    cmp.not_joint,
                    cmp.duplicated,
                    cmp.exhaustive_below_cutoff
                ));
            }
        }
    }
    let mut worst = 0.0f64;
    for mu in &sets {
        for (ratio, nu) in [1.0, 2.0, 4.0, 8.0].iter().zip(mu) {
            let nu = nu.to_f64();
            let (eps, length) = default_domain(*ratio, nu, 1.0, 3);
            let spec = GridSpec { points: 201, eps, length, stencil: Stencil::Numerov };
            match grid_study(*ratio, nu, 1.0, spec, 3) {
                Ok(g) => {
                    worst = worst.max(g.max_relative_error);
                    if g.max_relative_error >= 1e-4 {
                        details.push(format!("grid ω = {ratio}, ν = {nu}: relative error {:.2e}", g.max_relative_error));
                    }
                }
                Err(e) => details.push(format!("grid ω = {ratio}, ν = {nu}: {e}")),
            }
        }
    }
    let summary = format!("{rows} ladder tuples over 3 μ sets; worst 201-point grid error {worst:.2e}");
    Outcome::new(details.is_empty(), summary, details)
}

fn criterion_7() -> Outcome {
    let mut details = Vec::new();
    let mut parts = Vec::new();
    for (k, sys) in [
        (kind(Family::Cubic, Regime::Classical), classical_c_system()),
        (kind(Family::Quadratic, Regime::Classical), classical_q_system()),
    ] {
        let sys = sys.expect("system builds");
        let setup = TrajectorySetup::system(&sys);
        let params = default_params(Some(k), None);
        let state = default_state(2);
        match convergence_study(&setup, &params, &state, 1e-4, 10.0, 1e-3) {
            Ok(c) => {
                let worst = c.coarse.max_drift();
                parts.push(format!("{k} max drift {worst:.1e}"));
                for d in &c.coarse.drift {
                    if d.relative.is_nan() || d.relative >= 1e-9 {
                        details.push(format!("{k}: {} drifts {:.2e} at h = 1e-4, T = 10", d.name, d.relative));
                    }
                }
                for (name, r) in &c.ratios {
                    if r.is_nan() || *r < 3.0 {
                        details.push(format!("{k}: halving h reduces {name} drift only {r:.2}×"));
                    }
                }
                let rmin = c.ratios.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min);
                parts.push(format!("halving ratio ≥ {rmin:.2}"));
            }
            Err(e) => details.push(format!("{k}: {e}")),
        }
    }
    Outcome::new(details.is_empty(), parts.join(", "), details)
}

fn criterion_8(chains: &[Verification]) -> Outcome {
    let (n, mut details) = spectrum_findings(chains, Spacing::Oscillator, true);
    let (m, unit) = spectrum_findings(chains, Spacing::Unit, true);
    let summary = format!(
        "{} of {n} printed bounds reproduced (oscillator spacing); unit spacing reproduces {} of {m}",
        n - details.len(),
        m - unit.len()
    );
    for u in unit {
        details.push(format!("unit spacing: {u}"));
    }
    if n == 0 {
        details.push("no printed bounds compared".into());
    }
    Outcome::new(n > 0 && details.is_empty(), summary, details)
}

fn criterion_9() -> Outcome {
    let mut details = Vec::new();
    for (name, run) in suites::ALL {
        if let Err(e) = run() {
            details.push(format!("{name}: {e}"));
        }
    }
    let summary = format!("{} suites × {} cases", suites::ALL.len(), suites::CASES);
    Outcome::new(details.is_empty(), summary, details)
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let systems: Vec<(SystemKind, Verification)> = all_kinds().into_iter().map(|k| (k, verify_system(k))).collect();
    let seconds = start.elapsed().as_secs_f64();
    let generic = verify_structure_functions();
    let chains: Vec<Verification> = ChainLabel::ALL.into_iter().map(verify_chain).collect();

    let outcomes = [
        ("conservation exactness", criterion_1(&systems, seconds)),
        ("structure-constant recovery", criterion_2(&systems)),
        ("Casimir checks", criterion_3(&systems)),
        ("structure-function identities", criterion_4(&systems, &generic)),
        ("spectrum formulas", criterion_5(&chains)),
        ("oracle agreement", criterion_6()),
        ("classical numeric conservation", criterion_7()),
        ("positivity domains", criterion_8(&chains)),
        ("property suites", criterion_9()),
    ];
    let mut failed = Vec::new();
    for (i, (name, o)) in outcomes.iter().enumerate() {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {}: {tag}  {name}: {}", i + 1, o.summary);
        for d in &o.details {
            println!("    {d}");
        }
        if !o.passed {
            failed.push(i + 1);
        }
    }
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
