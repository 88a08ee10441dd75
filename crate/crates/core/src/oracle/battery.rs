use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::brute::{brute_complement_count, brute_hom_count, brute_mobius};
use crate::arrangement::{multiplicity, Arrangement, GroupSpec, SubsetData, SubsetMask};
use crate::error::Result;
use crate::invariants::{
    arithmetic_tutte, chromatic_quasi, compare_betas_with, divisors, g_characteristic, reciprocity_eval_with,
    tutte_to_characteristic, QuasiPolynomial,
};
use crate::lie::enumerate_lie_layers;
use crate::linalg::{hom_count, FgAbelianGroup};
use crate::poset::{LayerKey, LayerPoset};
use crate::toric::{check_scc_count, enumerate_toric_layers, ToricPoset};
use crate::Int;

pub type MultiplicityFn = fn(&SubsetData, &GroupSpec) -> Int;

/// Largest poset recomputed with the textbook Möbius recursion.
const BRUTE_MOBIUS_LIMIT: usize = 200;

#[derive(Clone, Debug)]
pub struct BatteryOptions {
    /// Complement counts are compared for `q = 1..=qmax`.
    pub qmax: u64,
    /// `(g, cyclic orders of F)` for the Lie layer checks.
    pub lie_cases: Vec<(usize, Vec<u64>)>,
    pub divisor_pairs: Vec<(u64, u64)>,
    /// Multiplicity used as the expected value of the per-subset counts.
    pub multiplicity: MultiplicityFn,
    /// Minimize failing instances before reporting them.
    pub shrink: bool,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        let mut lie_cases = Vec::new();
        for g in [1, 2] {
            for f in [vec![], vec![2], vec![3], vec![4]] {
                lie_cases.push((g, f));
            }
        }
        Self { qmax: 12, lie_cases, divisor_pairs: vec![(1, 2), (2, 4), (1, 3), (3, 6)], multiplicity, shrink: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub check: String,
    pub parameter: String,
    pub expected: String,
    pub found: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceReport {
    pub index: usize,
    pub description: String,
    pub checks: Vec<CheckRecord>,
    /// A smaller arrangement that still fails, when shrinking is enabled.
    pub shrunk: Option<String>,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub seed: u64,
    pub instances: Vec<InstanceReport>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.instances.iter().all(|i| i.passed())
    }

    pub fn check_count(&self) -> usize {
        self.instances.iter().map(|i| i.checks.len()).sum()
    }

    pub fn failure_count(&self) -> usize {
        self.instances.iter().flat_map(|i| &i.checks).filter(|c| !c.pass).count()
    }

    /// First failing check in instance order.
    pub fn first_failure(&self) -> Option<(&InstanceReport, &CheckRecord)> {
        self.instances.iter().find_map(|i| i.checks.iter().find(|c| !c.pass).map(|c| (i, c)))
    }

    /// Number of checks run with the given name.
    pub fn count_of(&self, check: &str) -> usize {
        self.instances.iter().flat_map(|i| &i.checks).filter(|c| c.check == check).count()
    }

    /// One line per check: instance, status, name, parameter, expected, found.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for inst in &self.instances {
            let _ = writeln!(out, "# instance {}: {}", inst.index, inst.description);
            for c in &inst.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{:>4}  {status}  {:<32} {:<24} expected {}  found {}",
                    inst.index, c.check, c.parameter, c.expected, c.found
                );
            }
            if let Some(s) = &inst.shrunk {
                let _ = writeln!(out, "# shrunk: {s}");
            }
        }
        let _ = writeln!(
            out,
            "# seed {}: {} instances, {} checks, {} failures",
            self.seed,
            self.instances.len(),
            self.check_count(),
            self.failure_count()
        );
        out
    }

    pub fn to_json(&self) -> Value {
        let instances: Vec<Value> = self
            .instances
            .iter()
            .map(|i| {
                json!({
                    "index": i.index,
                    "arrangement": i.description,
                    "passed": i.passed(),
                    "shrunk": i.shrunk,
                    "checks": i.checks.iter().map(|c| json!({
                        "check": c.check,
                        "parameter": c.parameter,
                        "expected": c.expected,
                        "found": c.found,
                        "pass": c.pass,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "seed": self.seed,
            "instances": instances,
            "checks": self.check_count(),
            "failures": self.failure_count(),
            "passed": self.passed(),
        })
    }
}

/// A random arrangement with `r_Γ ≤ 3`, at most two torsion factors of
/// order at most 6, at most five elements and entries in `[-4, 4]`.
pub fn random_arrangement(rng: &mut impl Rng) -> Arrangement {
    let r = rng.gen_range(1..=3);
    let torsion_count = rng.gen_range(0..=2);
    let orders: Vec<Int> = (0..torsion_count).map(|_| Int::from(rng.gen_range(2..=6))).collect();
    let gamma = FgAbelianGroup::from_cyclic_orders(r, &orders).expect("positive orders");
    let n = gamma.generator_count();
    let size = rng.gen_range(1..=5);
    let elements = (0..size).map(|_| (0..n).map(|_| Int::from(rng.gen_range(-4..=4))).collect()).collect();
    Arrangement::new(gamma, elements).expect("random arrangement is valid")
}

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn randomized_battery(seed: u64, count: usize) -> OracleReport {
    randomized_battery_with(seed, count, &BatteryOptions::default())
}

pub fn randomized_battery_with(seed: u64, count: usize, options: &BatteryOptions) -> OracleReport {
    let instances = (0..count)
        .into_par_iter()
        .map(|index| {
            let arr = random_arrangement(&mut instance_rng(seed, index));
            let checks = run_checks(&arr, options);
            let failed = checks.iter().any(|c| !c.pass);
            let shrunk = (failed && options.shrink)
                .then(|| shrink(&arr, |a| run_checks(a, options).iter().any(|c| !c.pass)).to_string());
            InstanceReport { index, description: arr.to_string(), checks, shrunk }
        })
        .collect();
    OracleReport { seed, instances }
}

/// Greedily drops elements, then moves entries towards zero, as long as
/// `fails` keeps holding.
pub fn shrink(arr: &Arrangement, fails: impl Fn(&Arrangement) -> bool) -> Arrangement {
    let mut current = arr.clone();
    let mut i = 0;
    while i < current.len() {
        let keep = SubsetMask(current.full_mask().0 & !(1 << i));
        let candidate = current.restrict(keep);
        if fails(&candidate) {
            current = candidate;
        } else {
            i += 1;
        }
    }
    loop {
        let mut improved = false;
        for e in 0..current.len() {
            for c in 0..current.gamma().generator_count() {
                let x = &current.elements()[e][c];
                if x.is_positive() || x.is_negative() {
                    let mut elements = current.elements().to_vec();
                    elements[e][c] = x - x.signum();
                    if let Ok(candidate) = Arrangement::new(current.gamma().clone(), elements) {
                        if fails(&candidate) {
                            current = candidate;
                            improved = true;
                        }
                    }
                }
            }
        }
        if !improved {
            return current;
        }
    }
}

struct Recorder {
    checks: Vec<CheckRecord>,
}

impl Recorder {
    fn compare<T: PartialEq + std::fmt::Display>(&mut self, check: &str, parameter: String, expected: &T, found: &T) {
        self.checks.push(CheckRecord {
            check: check.into(),
            parameter,
            expected: expected.to_string(),
            found: found.to_string(),
            pass: expected == found,
        });
    }

    fn result<T: PartialEq + std::fmt::Display>(
        &mut self,
        check: &str,
        parameter: String,
        expected: Result<T>,
        found: Result<T>,
    ) {
        match (expected, found) {
            (Ok(e), Ok(f)) => self.compare(check, parameter, &e, &f),
            (e, f) => self.checks.push(CheckRecord {
                check: check.into(),
                parameter,
                expected: e.map(|v| v.to_string()).unwrap_or_else(|err| format!("error: {err}")),
                found: f.map(|v| v.to_string()).unwrap_or_else(|err| format!("error: {err}")),
                pass: false,
            }),
        }
    }

    fn flag(&mut self, check: &str, parameter: String, outcome: Result<()>) {
        let (found, pass) = match outcome {
            Ok(()) => ("ok".to_string(), true),
            Err(e) => (format!("error: {e}"), false),
        };
        self.checks.push(CheckRecord { check: check.into(), parameter, expected: "ok".into(), found, pass });
    }
}

/// Runs the full identity suite on one arrangement. The per-subset
/// component counts come first, so a wrong multiplicity surfaces there.
pub fn run_checks(arr: &Arrangement, options: &BatteryOptions) -> Vec<CheckRecord> {
    let mut rec = Recorder { checks: Vec::new() };
    let toric = enumerate_toric_layers(arr);
    let qp = chromatic_quasi(arr);
    let rho = qp.as_ref().map(|q| q.period()).unwrap_or(1);

    if let Ok(layers) = &toric {
        // Character orders as machine integers; they divide the period.
        let orders: Vec<u64> =
            layers.poset().layers().iter().map(|l| l.key.character.order().to_u64().unwrap_or(u64::MAX)).collect();
        for k in k_values(2 * rho, rho) {
            let spec = GroupSpec::cyclic(k).expect("positive");
            let (mut expected, mut found) = (Vec::new(), Vec::new());
            for (s, layer_ids) in layers.per_subset() {
                expected.push((options.multiplicity)(&arr.subset_data(*s), &spec));
                found.push(Int::from(layer_ids.iter().filter(|&&i| k.is_multiple_of(orders[i])).count()));
            }
            rec.compare("k-component-count", format!("k={k}"), &IntList(expected), &IntList(found));
        }
    }
    rec.flag("toric-enumeration", String::new(), toric.as_ref().map(|_| ()).map_err(|e| e.clone()));
    rec.flag("quasi-polynomial", String::new(), qp.as_ref().map(|_| ()).map_err(|e| e.clone()));
    let (Ok(layers), Ok(qp)) = (toric, qp) else {
        return rec.checks;
    };

    for q in 1..=options.qmax {
        rec.result("quasi-vs-brute", format!("q={q}"), Ok(qp.eval(q)), brute_complement_count(arr, q).map(Int::from));
    }

    let ks = k_values(rho, rho);
    for &k in &ks {
        rec.result(
            "k-partial-constituent",
            format!("k={k}"),
            Ok(qp.constituent(k).clone()),
            layers.k_partial_characteristic(k),
        );
    }
    match chromatic_quasi(&arr.without_torsion()) {
        Ok(stripped) => {
            for &k in &ks {
                rec.result(
                    "k-total-constituent",
                    format!("k={k}"),
                    Ok(stripped.constituent(k).clone()),
                    layers.k_total_characteristic(k),
                );
            }
        }
        Err(e) => rec.flag("k-total-constituent", String::new(), Err(e)),
    }
    rec.flag("toric-scc-count", String::new(), check_scc_count(arr, &layers));
    rec.flag("toric-sign-alternation", String::new(), layers.poset().check_sign_alternation());
    mobius_check(&mut rec, "toric", layers.poset());
    nesting_checks(&mut rec, &layers, &options.divisor_pairs);

    if arr.gamma().torsion().is_empty() && !arr.contains_zero() {
        let chi = tutte_to_characteristic(arr, &arithmetic_tutte(arr));
        rec.compare("arithmetic-tutte-specialization", format!("rho={rho}"), qp.constituent(rho), &chi);
    }

    for (g, orders) in &options.lie_cases {
        let orders_int: Vec<Int> = orders.iter().map(|&o| Int::from(o)).collect();
        let param = format!("g={g} F={orders:?}");
        let lie = match enumerate_lie_layers(arr, *g, &orders_int) {
            Ok(lie) => lie,
            Err(e) => {
                rec.flag("lie-enumeration", param, Err(e));
                continue;
            }
        };
        let f_order: Int = orders_int.iter().product();
        let spec = GroupSpec::lie(*g, lie.finite_group().torsion().to_vec()).expect("valid spec");
        let expected = g_characteristic(arr, &spec).and_then(|c| c.scale_variable(&f_order, *g));
        rec.result("lie-partial", param.clone(), expected, lie.partial_characteristic());
        let stripped = g_characteristic(&arr.without_torsion(), &spec).and_then(|c| c.scale_variable(&f_order, *g));
        rec.result("lie-total", param.clone(), stripped, Ok(lie.total_characteristic()));
        let bad: Vec<usize> = lie.key_lie_sums().iter().filter(|r| !r.holds()).map(|r| r.layer).collect();
        rec.compare("key-lie-sums", param.clone(), &"[]".to_string(), &format!("{bad:?}"));
        rec.flag("lie-sign-alternation", param.clone(), lie.poset().check_sign_alternation());
        mobius_check(&mut rec, &format!("lie {param}"), lie.poset());
    }

    for (a, b) in &options.divisor_pairs {
        let outcome = compare_betas_with(&qp, arr.rank_gamma(), *a, *b)
            .map(|rows| rows.iter().filter(|r| !r.holds).map(|r| r.j).collect::<Vec<_>>());
        rec.result(
            "beta-monotonicity",
            format!("a={a} b={b}"),
            Ok("[]".to_string()),
            outcome.map(|v| format!("{v:?}")),
        );
    }

    for &k in &ks {
        for q in 1..=options.qmax {
            let outcome = reciprocity_eval_with(&qp, arr.rank_gamma(), k, q).map(|_| ());
            rec.flag("reciprocity-sign", format!("k={k} q={q}"), outcome);
        }
    }

    for i in 0..arr.len() {
        let dup = arr.with_duplicate(i).and_then(|d| chromatic_quasi(&d));
        rec.result("duplicate-invariance", format!("element {i}"), Ok(QuasiDisplay(qp.clone())), dup.map(QuasiDisplay));
    }

    for s in arr.subsets() {
        let group = arr.subset_data(s).torsion_group();
        for f in 2..=6u64 {
            let target = FgAbelianGroup::new(0, vec![Int::from(f)]).expect("f > 1");
            let symbolic = hom_count(&group, &[Int::from(f)]);
            rec.result(
                "hom-count",
                format!("S={s:?} f={f}"),
                symbolic,
                brute_hom_count(&group, &target).map(Int::from),
            );
        }
    }
    rec.checks
}

/// Every `k <= bound` when that is short; otherwise `1..=24`, every
/// divisor of the period and `bound`. All checks depend on `k` only through
/// `gcd(k, period)`, so the divisors already reach every class.
fn k_values(bound: u64, period: u64) -> Vec<u64> {
    const EXHAUSTIVE: u64 = 48;
    if bound <= EXHAUSTIVE {
        return (1..=bound).collect();
    }
    let mut ks: Vec<u64> = (1..=24).chain(divisors(period)).chain([bound]).filter(|&k| k <= bound).collect();
    ks.sort_unstable();
    ks.dedup();
    ks
}

#[derive(PartialEq)]
struct IntList(Vec<Int>);

impl std::fmt::Display for IntList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(PartialEq)]
struct QuasiDisplay(QuasiPolynomial);

impl std::fmt::Display for QuasiDisplay {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.classes().iter().map(|(d, p)| format!("{d}: {p}")).collect();
        write!(f, "[{}]", parts.join("; "))
    }
}

fn mobius_check<K: LayerKey>(rec: &mut Recorder, label: &str, poset: &LayerPoset<K>) {
    let n = poset.len();
    if n > BRUTE_MOBIUS_LIMIT {
        return;
    }
    let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| poset.leq(a, b)).collect()).collect();
    let mu = brute_mobius(&leq);
    let bad: Vec<usize> = (0..n)
        .filter(|&c| {
            let l = poset.layer(c);
            l.mobius.to_i64() != Some(mu[l.component][c])
        })
        .collect();
    rec.compare("mobius-brute", label.to_string(), &"[]".to_string(), &format!("{bad:?}"));
}

fn nesting_checks(rec: &mut Recorder, layers: &ToricPoset, pairs: &[(u64, u64)]) {
    for &(a, b) in pairs {
        let param = format!("a={a} b={b}");
        let outcome = (|| -> Result<bool> {
            let (ta, tb) = (layers.k_total_subposet(a)?, layers.k_total_subposet(b)?);
            let (pa, pb) = (layers.k_partial_subposet(a)?, layers.k_partial_subposet(b)?);
            Ok(ta.iter().all(|i| tb.contains(i)) && pa.iter().all(|i| pb.contains(i)))
        })();
        rec.result("k-subposet-nesting", param, Ok(true), outcome);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_battery_passes() {
        let r = randomized_battery(0, 0);
        assert!(r.passed());
        assert_eq!(r.check_count(), 0);
    }

    #[test]
    fn battery_is_deterministic() {
        let a = randomized_battery(7, 3);
        let b = randomized_battery(7, 3);
        assert_eq!(a, b);
        assert!(a.passed(), "{}", a.to_text());
    }

    fn doubled(data: &SubsetData, spec: &GroupSpec) -> Int {
        multiplicity(data, spec) * 2
    }

    #[test]
    fn corrupted_multiplicity_fails_at_component_counts() {
        let options = BatteryOptions { multiplicity: doubled, shrink: false, ..BatteryOptions::default() };
        let r = randomized_battery_with(0, 2, &options);
        let (_, first) = r.first_failure().expect("corruption must be caught");
        assert_eq!(first.check, "k-component-count");
        assert_eq!(first.parameter, "k=1");
    }

    #[test]
    fn k_value_sets() {
        assert_eq!(k_values(8, 4), (1..=8).collect::<Vec<_>>());
        let ks = k_values(1920, 960);
        assert!(ks.contains(&960) && ks.contains(&320) && ks.contains(&1920) && ks.contains(&17));
        assert!(!ks.contains(&25));
    }

    #[test]
    fn shrinking_drops_irrelevant_elements() {
        let arr = Arrangement::from_i64(2, &[], &[&[1, 0], &[3, 4], &[0, 2]]).unwrap();
        let small = shrink(&arr, |a| a.elements().iter().any(|v| v[1] == Int::from(2)));
        assert_eq!(small.len(), 1);
        assert_eq!(small.elements()[0], vec![Int::from(0), Int::from(2)]);
    }
}
