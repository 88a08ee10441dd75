//! `arrangement`: invariants of abelian Lie group arrangements from a JSON file.
//!
//! Results go to stdout as JSON with sorted keys; a short summary goes to
//! stderr. Exit status is 0 when every check passes, 1 when a check fails
//! and 2 on input or usage errors.

mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use arrangement_core::invariants::{
    arithmetic_tutte, beta_coefficients, characteristic_by_subsets, chromatic_quasi, compare_betas, g_characteristic,
    g_tutte, reciprocity_eval, toric_characteristic, tutte_to_characteristic,
};
use arrangement_core::oracle::{randomized_battery_with, BatteryOptions};
use arrangement_core::poset::{LayerKey, LayerPoset};
use arrangement_core::{json, lie, toric, Arrangement, Error, GroupSpec, Int, Poly};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "arrangement", version, about = "Exact invariants of abelian Lie group arrangements")]
struct Cli {
    /// Arrangement file; `-` reads standard input. Not needed for `verify`.
    #[arg(short, long, global = true)]
    file: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ranks, period, minimal period, torsion elements and the canonical file.
    Info,
    /// G-Tutte polynomial for G = F x (S^1)^p x R^q as [i, j, coefficient] triples.
    Tutte {
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        q: usize,
        /// Orders of the cyclic factors of F.
        #[arg(long, value_delimiter = ',')]
        torsion: Vec<Int>,
    },
    /// Arithmetic Tutte polynomial.
    ArithTutte,
    /// Characteristic polynomial of the complement in G = F x (S^1)^p x R^q.
    Char {
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        q: usize,
        #[arg(long, value_delimiter = ',')]
        torsion: Vec<Int>,
    },
    /// Period and all constituents of the chromatic quasi-polynomial.
    Quasi,
    /// Constituent K of the chromatic quasi-polynomial.
    Constituent { k: u64 },
    /// Layers of the toric arrangement, optionally restricted to L[K] and the partial poset.
    ToricLayers {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        partial: bool,
        /// Writes the Hasse diagram of the selected layers in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Layers of the arrangement in F x R^g.
    LieLayers {
        #[arg(long)]
        g: usize,
        #[arg(long, value_delimiter = ',')]
        torsion: Vec<Int>,
        #[arg(long)]
        partial: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Seeded randomized cross-checks against brute-force oracles.
    Verify {
        #[arg(long, default_value_t = 12)]
        qmax: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        count: usize,
    },
    /// (-1)^r f^K(-Q).
    Reciprocity {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        q: u64,
    },
    /// Coefficients of (-1)^r f^Q(-t).
    Beta {
        #[arg(long)]
        q: u64,
    },
    /// Compares those coefficients for Q = A and Q = B.
    Compare {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Named checks attached to a result.
#[derive(Default)]
struct Checks(Vec<Value>);

impl Checks {
    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.0.push(json!({ "name": name, "pass": pass, "detail": detail.into() }));
    }

    fn passed(&self) -> bool {
        self.0.iter().all(|c| c["pass"] == Value::Bool(true))
    }

    /// Records the outcome of a self-checking computation; a violated
    /// hypothesis becomes a note rather than a failure.
    fn outcome<T>(&mut self, name: &str, r: arrangement_core::Result<T>, ok: impl FnOnce(T) -> (bool, String)) {
        match r {
            Ok(v) => {
                let (pass, detail) = ok(v);
                self.push(name, pass, detail);
            }
            Err(e @ Error::InvariantViolation(_)) => self.push(name, false, e.to_string()),
            Err(e) => self.push(name, true, format!("skipped: {e}")),
        }
    }
}

struct Output {
    result: Value,
    checks: Checks,
    summary: String,
}

fn load(path: &Option<PathBuf>) -> Result<(Option<String>, Arrangement), Failure> {
    let path = path.as_ref().ok_or_else(|| Failure::Input("an arrangement file is required (--file PATH)".into()))?;
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Input(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    let file = input::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    for i in &file.reduced {
        let v = display_vec(&file.arrangement.elements()[*i]);
        eprintln!("warning: vectors[{i}]: torsion coordinates reduced to [{}]", v.join(", "));
    }
    Ok((file.name, file.arrangement))
}

fn display_vec(v: &[Int]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn spec_json(torsion: &[Int], p: usize, q: usize) -> Value {
    json!({ "torsion": torsion.iter().map(json::int).collect::<Vec<_>>(), "p": p, "q": q })
}

fn poset_json<K: LayerKey>(poset: &LayerPoset<K>, subset: &[usize]) -> Value {
    let layers: Vec<Value> = poset
        .records()
        .into_iter()
        .filter(|r| subset.contains(&r.index))
        .map(|r| {
            json!({
                "index": r.index,
                "key": r.key,
                "dim": r.dim,
                "rank": r.rank,
                "mobius": json::int(&r.mobius),
                "component": r.component,
                "covers": r.covers.into_iter().filter(|c| subset.contains(c)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let shapes: Vec<Value> = poset
        .component_shapes(subset)
        .into_iter()
        .map(|s| json!({ "shape": s.name, "nodes": s.nodes, "edges": s.edges, "count": s.count, "representative": s.representative }))
        .collect();
    json!({
        "layers": layers,
        "cover_count": poset.subset_covers(subset).len(),
        "minimal": subset
            .iter()
            .filter(|&&c| !poset.strictly_below(c).iter().any(|d| subset.contains(d)))
            .collect::<Vec<_>>(),
        "components": shapes,
        "characteristic": json::poly(&poset.characteristic(subset)),
    })
}

fn write_dot<K: LayerKey>(poset: &LayerPoset<K>, subset: &[usize], path: &Option<PathBuf>) -> Result<(), Failure> {
    if let Some(path) = path {
        let dot = poset.export_hasse(subset, "dot")?;
        std::fs::write(path, dot).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn equal_check(checks: &mut Checks, name: &str, found: &Poly, expected: &Poly) {
    checks.push(name, found == expected, format!("{found} vs {expected}"));
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let mut checks = Checks::default();
    if let Command::Verify { qmax, seed, count } = cli.command {
        let options = BatteryOptions { qmax, ..BatteryOptions::default() };
        let report = randomized_battery_with(seed, count, &options);
        checks.push("battery", report.passed(), format!("{} failures", report.failure_count()));
        let summary = match report.first_failure() {
            None => {
                format!("seed {seed}: {} instances, {} checks, all pass", report.instances.len(), report.check_count())
            }
            Some((inst, c)) => format!(
                "seed {seed}: {} failures; first: instance {} ({}) {} {}: expected {} found {}",
                report.failure_count(),
                inst.index,
                inst.shrunk.as_deref().unwrap_or(&inst.description),
                c.check,
                c.parameter,
                c.expected,
                c.found
            ),
        };
        return Ok(Output { result: report.to_json(), checks, summary });
    }

    let (name, arr) = load(&cli.file)?;
    let (result, summary) = match &cli.command {
        Command::Verify { .. } => unreachable!("handled above"),
        Command::Info => {
            let qp = chromatic_quasi(&arr)?;
            let result = json!({
                "name": name,
                "free_rank": arr.gamma().free_rank(),
                "torsion": arr.gamma().torsion().iter().map(json::int).collect::<Vec<_>>(),
                "rank_gamma": arr.rank_gamma(),
                "rank": arr.rank(),
                "elements": arr.len(),
                "period": json::int(&arr.lcm_period()),
                "minimal_period": qp.minimal_period(),
                "torsion_elements": arr.torsion_sublist().indices().collect::<Vec<_>>(),
                "contains_zero": arr.contains_zero(),
                "canonical": input::emit(name.as_deref(), &arr),
            });
            let summary = format!(
                "{} elements, rank {} in a group of rank {}, period {}, minimal period {}",
                arr.len(),
                arr.rank(),
                arr.rank_gamma(),
                arr.lcm_period(),
                qp.minimal_period()
            );
            (result, summary)
        }
        Command::Tutte { p, q, torsion } => {
            let spec = GroupSpec::from_orders(torsion, *p, *q)?;
            let t = g_tutte(&arr, &spec);
            let chi = tutte_to_characteristic(&arr, &t);
            equal_check(&mut checks, "tutte-vs-subsets", &chi, &characteristic_by_subsets(&arr, &spec));
            let summary = format!("{} terms, characteristic {chi}", t.triples().len());
            (
                json!({ "group": spec_json(torsion, *p, *q), "tutte": json::tutte(&t), "characteristic": json::poly(&chi) }),
                summary,
            )
        }
        Command::ArithTutte => {
            let t = arithmetic_tutte(&arr);
            let qp = chromatic_quasi(&arr)?;
            let last = qp.constituent(qp.period()).clone();
            checks.outcome("specialization-vs-last-constituent", toric_characteristic(&arr), |chi| {
                (chi == last, format!("{chi} vs {last}"))
            });
            (json!({ "tutte": json::tutte(&t) }), format!("{} terms", t.triples().len()))
        }
        Command::Char { p, q, torsion } => {
            let spec = GroupSpec::from_orders(torsion, *p, *q)?;
            let chi = g_characteristic(&arr, &spec)?;
            equal_check(&mut checks, "tutte-vs-subsets", &chi, &characteristic_by_subsets(&arr, &spec));
            let summary = format!("{chi}");
            (json!({ "group": spec_json(torsion, *p, *q), "characteristic": json::poly(&chi) }), summary)
        }
        Command::Quasi => {
            let qp = chromatic_quasi(&arr)?;
            let mut result = json::quasi(&qp);
            result["minimal_period"] = json!(qp.minimal_period());
            let mut distinct: Vec<&Poly> = Vec::new();
            for f in qp.classes().values() {
                if !distinct.contains(&f) {
                    distinct.push(f);
                }
            }
            let summary = format!("period {}, {} distinct constituents", qp.period(), distinct.len());
            (result, summary)
        }
        Command::Constituent { k } => {
            if *k == 0 {
                return Err(Failure::Input("K must be at least 1".into()));
            }
            let qp = chromatic_quasi(&arr)?;
            let f = qp.constituent(*k).clone();
            checks.outcome("toric-k-partial", toric::k_partial_characteristic(&arr, *k), |chi| {
                (chi == f, format!("{chi} vs {f}"))
            });
            if k % qp.period() == 0 {
                checks.outcome("arithmetic-tutte-specialization", toric_characteristic(&arr), |chi| {
                    (chi == f, format!("{chi} vs {f}"))
                });
            }
            (json!({ "k": k, "constituent": json::poly(&f) }), format!("f^{k} = {f}"))
        }
        Command::ToricLayers { k, partial, dot } => {
            let layers = toric::enumerate_toric_layers(&arr)?;
            let subset = match (k, partial) {
                (None, false) => layers.poset().all_indices(),
                (None, true) => layers.partial_subposet()?,
                (Some(k), false) => layers.k_total_subposet(*k)?,
                (Some(k), true) => layers.k_partial_subposet(*k)?,
            };
            if let Some(k) = k {
                let (name, r) = if *partial {
                    ("k-partial-vs-constituent", toric::k_partial_characteristic(&arr, *k))
                } else {
                    ("k-total-vs-stripped-constituent", toric::k_total_characteristic(&arr, *k))
                };
                let own = layers.poset().characteristic(&subset);
                checks.outcome(name, r, |chi| (chi == own, format!("{own}")));
            }
            checks.outcome("scc-count", toric::check_scc_count(&arr, &layers), |()| (true, String::new()));
            write_dot(layers.poset(), &subset, dot)?;
            let result = poset_json(layers.poset(), &subset);
            let summary = format!("{} layers, {} covers", subset.len(), layers.poset().subset_covers(&subset).len());
            (result, summary)
        }
        Command::LieLayers { g, torsion, partial, dot } => {
            let lie = lie::enumerate_lie_layers(&arr, *g, torsion)?;
            let subset = if *partial { lie.partial_subposet()? } else { lie.poset().all_indices() };
            let own = lie.poset().characteristic(&subset);
            let (name, r) = if *partial {
                ("partial-vs-rescaled", lie::partial_characteristic(&arr, *g, torsion))
            } else {
                ("total-vs-stripped", lie::total_characteristic(&arr, *g, torsion))
            };
            checks.outcome(name, r, |chi| (chi == own, format!("{own}")));
            let rows = lie.key_lie_sums();
            let bad = rows.iter().filter(|r| !r.holds()).count();
            checks.push("alternating-sums", bad == 0, format!("{} layers, {bad} violations", rows.len()));
            write_dot(lie.poset(), &subset, dot)?;
            let mut result = poset_json(lie.poset(), &subset);
            result["group"] = json!({ "g": g, "torsion": torsion.iter().map(json::int).collect::<Vec<_>>() });
            let summary = format!("{} layers, characteristic {own}", subset.len());
            (result, summary)
        }
        Command::Reciprocity { k, q } => {
            let v = reciprocity_eval(&arr, *k, *q)?;
            checks.push("nonnegative", v >= Int::from(0), v.to_string());
            (json!({ "k": k, "q": q, "value": json::int(&v) }), format!("{v}"))
        }
        Command::Beta { q } => {
            let b = beta_coefficients(&arr, *q)?;
            let summary = display_vec(&b).join(" ");
            (json!({ "q": q, "beta": b.iter().map(json::int).collect::<Vec<_>>() }), summary)
        }
        Command::Compare { a, b } => {
            let rows = compare_betas(&arr, *a, *b)?;
            for r in &rows {
                checks.push(&format!("j={}", r.j), r.holds, format!("{} <= {}", r.at_a, r.at_b));
            }
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "j": r.j, "at_a": json::int(&r.at_a), "at_b": json::int(&r.at_b), "holds": r.holds }))
                .collect();
            let held = rows.iter().filter(|r| r.holds).count();
            (json!({ "a": a, "b": b, "rows": rows_json }), format!("{held} of {} comparisons hold", rows.len()))
        }
    };
    Ok(Output { result, checks, summary })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let passed = out.checks.passed();
            let doc = json!({ "result": out.result, "checks": out.checks.0, "passed": passed });
            let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            // A closed pipe downstream is not an error of the computation.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            eprintln!("{}", out.summary);
            for c in out.checks.0.iter().filter(|c| c["pass"] == Value::Bool(false)) {
                eprintln!("FAIL {}: {}", c["name"].as_str().unwrap_or(""), c["detail"].as_str().unwrap_or(""));
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
