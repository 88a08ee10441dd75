//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`. All comparisons are exact.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use arrangement_core::invariants::chromatic_quasi;
use arrangement_core::lie::{enumerate_lie_layers, partial_characteristic, total_characteristic};
use arrangement_core::oracle::{randomized_battery, OracleReport};
use arrangement_core::toric::{enumerate_toric_layers, k_partial_characteristic};
use arrangement_core::{Arrangement, Int, Poly};

const SEED: u64 = 0;
const INSTANCES: usize = 25;
const QMAX: usize = 12;
const LIE_CASES: usize = 8;

fn example() -> Arrangement {
    Arrangement::from_i64(2, &[], &[&[-1, 1], &[0, 2], &[0, 4]]).unwrap()
}

fn poly(c: &[i64]) -> Poly {
    Poly::from_coeffs(c.iter().map(|&x| Int::from(x)).collect())
}

type Outcome = Result<String, String>;
type Shapes = Vec<(&'static str, usize)>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let detail = out?;
    match limit {
        Some(l) if elapsed > l => Err(format!("{detail}; took {elapsed:.2?}, limit {l:?}")),
        Some(l) => Ok(format!("{detail} [{elapsed:.2?} < {l:?}]")),
        None => Ok(format!("{detail} [{elapsed:.2?}]")),
    }
}

fn example_quasi() -> Outcome {
    let qp = chromatic_quasi(&example()).map_err(|e| e.to_string())?;
    ensure(qp.period() == 4, || format!("period {}", qp.period()))?;
    let expected = [poly(&[1, -2, 1]), poly(&[2, -3, 1]), poly(&[1, -2, 1]), poly(&[4, -5, 1])];
    for (k, f) in (1..=4).zip(&expected) {
        ensure(qp.constituent(k) == f, || format!("f^{k} = {}, expected {f}", qp.constituent(k)))?;
    }
    Ok("period 4; f1 = t^2 - 2t + 1, f2 = t^2 - 3t + 2, f3 = f1, f4 = t^2 - 5t + 4".into())
}

fn lie_layer_posets() -> Outcome {
    let arr = example();
    let cases: [(Vec<Int>, usize, Poly, Shapes); 3] = [
        (vec![], 1, poly(&[1, -2, 1]), vec![("diamond", 1)]),
        (vec![Int::from(2)], 4, poly(&[2, -6, 4]), vec![("diamond", 2), ("chain of 2", 2)]),
        (vec![Int::from(4)], 16, poly(&[4, -20, 16]), vec![("diamond", 4), ("chain of 2", 12)]),
    ];
    let mut details = Vec::new();
    for (orders, minimal, chi, shapes) in cases {
        let lie = enumerate_lie_layers(&arr, 1, &orders).map_err(|e| e.to_string())?;
        let total = total_characteristic(&arr, 1, &orders).map_err(|e| e.to_string())?;
        partial_characteristic(&arr, 1, &orders).map_err(|e| e.to_string())?;
        ensure(total == chi, || format!("F = {orders:?}: total {total}, expected {chi}"))?;
        let found_min = lie.poset().minimal_elements().len();
        ensure(found_min == minimal, || format!("F = {orders:?}: {found_min} minimal elements"))?;
        let mut found: Vec<(String, usize)> =
            lie.poset().component_shapes(&lie.poset().all_indices()).into_iter().map(|s| (s.name, s.count)).collect();
        found.sort();
        let mut want: Vec<(String, usize)> = shapes.iter().map(|(n, c)| (n.to_string(), *c)).collect();
        want.sort();
        ensure(found == want, || format!("F = {orders:?}: shapes {found:?}, expected {want:?}"))?;
        let shape_text: Vec<String> = want.iter().map(|(n, c)| format!("{n} x{c}")).collect();
        details.push(format!("{total} ({found_min} min; {})", shape_text.join(", ")));
    }
    Ok(details.join(" | "))
}

fn toric_partial_posets() -> Outcome {
    let arr = example();
    let layers = enumerate_toric_layers(&arr).map_err(|e| e.to_string())?;
    let cases = [(1, poly(&[1, -2, 1]), 4, 4), (2, poly(&[2, -3, 1]), 6, 7), (4, poly(&[4, -5, 1]), 10, 13)];
    let mut details = Vec::new();
    for (k, f, nodes, covers) in cases {
        let chi = k_partial_characteristic(&arr, k).map_err(|e| e.to_string())?;
        ensure(chi == f, || format!("k = {k}: {chi}, expected {f}"))?;
        let sub = layers.k_partial_subposet(k).map_err(|e| e.to_string())?;
        let edges = layers.poset().subset_covers(&sub).len();
        ensure(sub.len() == nodes && edges == covers, || {
            format!("k = {k}: {} layers / {edges} covers, expected {nodes} / {covers}", sub.len())
        })?;
        details.push(format!("k={k}: {chi}, {nodes} layers, {covers} covers"));
    }
    Ok(details.join(" | "))
}

/// All checks with the given name pass, and at least `min_count` ran.
fn suite(report: &OracleReport, names: &[&str], min_count: usize) -> Outcome {
    let mut ran = 0;
    for inst in &report.instances {
        for c in inst.checks.iter().filter(|c| names.contains(&c.check.as_str())) {
            ran += 1;
            if !c.pass {
                return Err(format!(
                    "instance {} ({}): {} {} expected {} found {}",
                    inst.index, inst.description, c.check, c.parameter, c.expected, c.found
                ));
            }
        }
    }
    // Enumeration errors are reported under their own names and always fail.
    for inst in &report.instances {
        if let Some(c) = inst.checks.iter().find(|c| !c.pass && c.check.ends_with("enumeration")) {
            return Err(format!("instance {}: {} {}", inst.index, c.check, c.found));
        }
    }
    ensure(ran >= min_count, || format!("only {ran} checks ran, expected at least {min_count}"))?;
    Ok(format!("{ran} checks"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut line = |id: &str, name: &str, outcome: Outcome| match outcome {
        Ok(d) => println!("PASS  {id:<3} {name}: {d}"),
        Err(e) => {
            failed += 1;
            println!("FAIL  {id:<3} {name}: {e}");
        }
    };
    let second = Some(Duration::from_secs(1));
    line("1", "rank-two example quasi-polynomial", timed(second, example_quasi));
    line("2", "Lie layer posets, g = 1, F in {1, Z/2, Z/4}", timed(second, lie_layer_posets));
    line("3", "toric k-partial posets, k in {1, 2, 4}", timed(second, toric_partial_posets));

    let start = Instant::now();
    let report = randomized_battery(SEED, INSTANCES);
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(60);
    let within = |o: Outcome| -> Outcome {
        let d = o?;
        ensure(elapsed < budget, || format!("battery took {elapsed:.2?}, limit {budget:?}"))?;
        Ok(format!("{d} [battery {elapsed:.2?} < {budget:?}]"))
    };
    line(
        "4",
        &format!("brute complement counts = quasi-polynomial, {INSTANCES} instances, q = 1..{QMAX}"),
        within(suite(&report, &["quasi-vs-brute"], INSTANCES * QMAX)),
    );
    line(
        "5",
        "partial Lie polynomial = chi^G(#F t^g), g in {1, 2}, F in {1, Z/2, Z/3, Z/4}",
        suite(&report, &["lie-partial"], INSTANCES * LIE_CASES),
    );
    line(
        "6",
        "k-partial polynomial = constituent k, 1 <= k <= rho",
        suite(&report, &["k-partial-constituent"], INSTANCES),
    );
    line(
        "7",
        "arithmetic Tutte specialization = last constituent",
        suite(&report, &["arithmetic-tutte-specialization"], 1),
    );

    let properties: [(&str, &str, &[&str]); 10] = [
        ("8a", "per-subset component counts in L[k]", &["k-component-count"]),
        ("8b", "alternating sums over R(C)", &["key-lie-sums"]),
        ("8c", "number of components avoiding torsion hyperplanes", &["toric-scc-count", "lie-partial"]),
        ("8d", "Mobius sign alternation", &["toric-sign-alternation", "lie-sign-alternation", "mobius-brute"]),
        ("8e", "L[a] within L[b] for a | b", &["k-subposet-nesting"]),
        ("8f", "beta_j(a) <= beta_j(b) for a | b", &["beta-monotonicity"]),
        ("8g", "(-1)^r f^k(-q) >= 0, q = 1..12", &["reciprocity-sign"]),
        ("8h", "duplicate-element invariance", &["duplicate-invariance"]),
        ("8i", "hom_count = enumeration", &["hom-count"]),
        ("8j", "total polynomials strip torsion", &["lie-total", "k-total-constituent"]),
    ];
    for (id, name, checks) in properties {
        line(id, name, suite(&report, checks, INSTANCES));
    }

    println!(
        "# battery seed {SEED}: {} instances, {} checks, {} failures",
        report.instances.len(),
        report.check_count(),
        report.failure_count()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{}", report.to_text().lines().filter(|l| l.contains("FAIL")).take(20).collect::<Vec<_>>().join("\n"));
        ExitCode::FAILURE
    }
}
