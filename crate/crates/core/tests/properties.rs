//! Property suites. Each test runs standalone, e.g.
//! `cargo test --test properties component_counts_in_k_total_poset`.

use arrangement_core::invariants::{
    characteristic_by_subsets, chromatic_quasi, compare_betas_with, g_characteristic, reciprocity_eval_with,
};
use arrangement_core::lie::enumerate_lie_layers;
use arrangement_core::linalg::{
    hermite_normal_form, hom_count, hom_enumerate, lattice_contains, smith_normal_form, FgAbelianGroup, IntegerMatrix,
};
use arrangement_core::oracle::{brute_complement_count, brute_hom_count, brute_mobius};
use arrangement_core::toric::{check_scc_count, enumerate_toric_layers};
use arrangement_core::{multiplicity, Arrangement, GroupSpec, Int, Matrix, Poly};
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

fn small_arrangement() -> impl Strategy<Value = Arrangement> {
    (1usize..=2, prop::collection::vec(2i64..=6, 0..=1), 1usize..=4).prop_flat_map(|(r, orders, size)| {
        let n = r + orders.len();
        prop::collection::vec(prop::collection::vec(-4i64..=4, n), size).prop_map(move |rows| {
            let orders: Vec<Int> = orders.iter().map(|&o| Int::from(o)).collect();
            let gamma = FgAbelianGroup::from_cyclic_orders(r, &orders).unwrap();
            let n = gamma.generator_count();
            let elements = rows.iter().map(|v| v[..n].iter().map(|&x| Int::from(x)).collect()).collect();
            Arrangement::new(gamma, elements).unwrap()
        })
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-6i64..=6, rows * cols)
        .prop_map(move |d| IntegerMatrix::new(rows, cols, d.into_iter().map(Int::from).collect()).unwrap())
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-9i64..=9, 0..5).prop_map(|c| Poly::from_coeffs(c.into_iter().map(Int::from).collect()))
}

fn period(arr: &Arrangement) -> u64 {
    arr.lcm_period().to_u64().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_form_reconstructs(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))) {
        let s = smith_normal_form(&m);
        let d = s.u.mul(&m).unwrap().mul(&s.v).unwrap();
        let diag = s.diagonal();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let want = if i == j { diag[i].clone() } else { Int::from(0) };
                prop_assert_eq!(&d[(i, j)], &want);
            }
        }
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero_or_multiple_of(&w[0]));
        }
        prop_assert_eq!(s.u.determinant().unwrap().abs(), Int::from(1));
        prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntegerMatrix::identity(m.cols()));
    }

    #[test]
    fn hermite_form_spans_the_same_lattice(m in (1usize..=4, 1usize..=3).prop_flat_map(|(r, c)| matrix(r, c))) {
        let h = hermite_normal_form(&m);
        for row in m.row_vecs() {
            prop_assert!(lattice_contains(&h, &row));
        }
        prop_assert_eq!(hermite_normal_form(&m.vstack(&h).unwrap()), h.clone());
        prop_assert_eq!(hermite_normal_form(&h), h);
    }

    #[test]
    fn polynomial_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn hom_count_matches_enumeration(
        source in prop::collection::vec(2i64..=8, 0..=2),
        target in prop::collection::vec(2i64..=8, 1..=2),
    ) {
        let src = FgAbelianGroup::from_cyclic_orders(0, &source.iter().map(|&x| Int::from(x)).collect::<Vec<_>>()).unwrap();
        let tgt = FgAbelianGroup::from_cyclic_orders(0, &target.iter().map(|&x| Int::from(x)).collect::<Vec<_>>()).unwrap();
        prop_assume!(src.torsion_order() <= Int::from(64) && tgt.torsion_order() <= Int::from(64));
        let symbolic = hom_count(&src, tgt.torsion()).unwrap();
        let brute = brute_hom_count(&src, &tgt).unwrap();
        let listed = hom_enumerate(&IntegerMatrix::zeros(0, src.generator_count()), &src, &tgt).unwrap().len();
        prop_assert_eq!(&symbolic, &Int::from(brute));
        prop_assert_eq!(symbolic, Int::from(listed));
    }

    #[test]
    fn quasi_polynomial_counts_complements(arr in small_arrangement()) {
        let qp = chromatic_quasi(&arr).unwrap();
        for q in 1..=12u64 {
            prop_assert_eq!(qp.eval(q), Int::from(brute_complement_count(&arr, q).unwrap()), "q = {}", q);
        }
    }

    #[test]
    fn tutte_and_subset_routes_agree(arr in small_arrangement(), p in 0usize..=1, q in 0usize..=2, f in 1u64..=6) {
        let spec = GroupSpec::from_orders(&[Int::from(f)], p, q).unwrap();
        prop_assert_eq!(g_characteristic(&arr, &spec).unwrap(), characteristic_by_subsets(&arr, &spec));
    }

    #[test]
    fn component_counts_in_k_total_poset(arr in small_arrangement()) {
        let layers = enumerate_toric_layers(&arr).unwrap();
        for k in 1..=2 * period(&arr) {
            for (s, found, expected) in layers.k_component_counts(&arr, k).unwrap() {
                prop_assert_eq!(Int::from(found), expected, "S = {:?}, k = {}", s, k);
            }
        }
    }

    #[test]
    fn k_partial_polynomials_are_constituents(arr in small_arrangement()) {
        let layers = enumerate_toric_layers(&arr).unwrap();
        let qp = chromatic_quasi(&arr).unwrap();
        for k in 1..=period(&arr) {
            prop_assert_eq!(&layers.k_partial_characteristic(k).unwrap(), qp.constituent(k));
        }
    }

    #[test]
    fn alternating_sums_over_generating_subsets(arr in small_arrangement(), f in 1i64..=4) {
        let lie = enumerate_lie_layers(&arr, 1, &[Int::from(f)]).unwrap();
        for row in lie.key_lie_sums() {
            prop_assert!(row.holds(), "layer {}: sum {} expected {}", row.layer, row.sum, row.expected);
        }
    }

    #[test]
    fn scc_cardinality(arr in small_arrangement(), g in 1usize..=2, f in 1i64..=4) {
        // Lie enumeration asserts the count itself.
        enumerate_lie_layers(&arr, g, &[Int::from(f)]).unwrap();
        check_scc_count(&arr, &enumerate_toric_layers(&arr).unwrap()).unwrap();
    }

    #[test]
    fn mobius_signs_alternate_and_match_brute_force(arr in small_arrangement(), f in 1i64..=3) {
        let toric = enumerate_toric_layers(&arr).unwrap();
        let lie = enumerate_lie_layers(&arr, 1, &[Int::from(f)]).unwrap();
        toric.poset().check_sign_alternation().unwrap();
        lie.poset().check_sign_alternation().unwrap();
        let p = toric.poset();
        prop_assume!(p.len() <= 200);
        let leq: Vec<Vec<bool>> = (0..p.len()).map(|a| (0..p.len()).map(|b| p.leq(a, b)).collect()).collect();
        let mu = brute_mobius(&leq);
        for (c, layer) in p.layers().iter().enumerate() {
            prop_assert_eq!(layer.mobius.to_i64().unwrap(), mu[layer.component][c]);
        }
    }

    #[test]
    fn k_total_posets_are_nested(arr in small_arrangement()) {
        let layers = enumerate_toric_layers(&arr).unwrap();
        for (a, b) in [(1u64, 2u64), (2, 4), (1, 3), (3, 6), (2, 6)] {
            let (la, lb) = (layers.k_total_subposet(a).unwrap(), layers.k_total_subposet(b).unwrap());
            prop_assert!(la.iter().all(|i| lb.contains(i)));
            let (pa, pb) = (layers.k_partial_subposet(a).unwrap(), layers.k_partial_subposet(b).unwrap());
            prop_assert!(pa.iter().all(|i| pb.contains(i)));
        }
    }

    #[test]
    fn betti_style_coefficients_grow_along_divisibility(arr in small_arrangement()) {
        let qp = chromatic_quasi(&arr).unwrap();
        for (a, b) in [(1u64, 2u64), (2, 4), (1, 3), (3, 6), (1, 12)] {
            for row in compare_betas_with(&qp, arr.rank_gamma(), a, b).unwrap() {
                prop_assert!(row.holds, "j = {}: {} > {}", row.j, row.at_a, row.at_b);
            }
        }
    }

    #[test]
    fn reciprocity_values_are_nonnegative(arr in small_arrangement()) {
        let qp = chromatic_quasi(&arr).unwrap();
        for k in 1..=period(&arr) {
            for q in 1..=12 {
                prop_assert!(!reciprocity_eval_with(&qp, arr.rank_gamma(), k, q).unwrap().is_negative());
            }
        }
    }

    #[test]
    fn duplicates_do_not_change_the_quasi_polynomial(arr in small_arrangement(), i in 0usize..4) {
        prop_assume!(i < arr.len());
        let dup = arr.with_duplicate(i).unwrap();
        let (a, b) = (chromatic_quasi(&arr).unwrap(), chromatic_quasi(&dup).unwrap());
        prop_assert_eq!(a.minimal_period(), b.minimal_period());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn multiplicity_is_a_hom_count(arr in small_arrangement(), f in 1u64..=6, p in 0usize..=1) {
        let spec = GroupSpec::from_orders(&[Int::from(f)], p, 0).unwrap();
        for s in arr.subsets() {
            let data = arr.subset_data(s);
            // Z/e stands in for a circle factor once e kills the torsion.
            let target: Vec<Int> = spec
                .f_torsion()
                .iter()
                .cloned()
                .chain(std::iter::repeat_n(data.largest_factor(), p))
                .filter(|x| *x > Int::from(1))
                .collect();
            let tgt = FgAbelianGroup::from_cyclic_orders(0, &target).unwrap();
            let brute = brute_hom_count(&data.torsion_group(), &tgt).unwrap();
            prop_assert_eq!(multiplicity(&data, &spec), Int::from(brute), "S = {:?}", s);
        }
    }
}

trait ZeroOrMultiple {
    fn is_zero_or_multiple_of(&self, other: &Self) -> bool;
}

impl ZeroOrMultiple for Int {
    fn is_zero_or_multiple_of(&self, other: &Self) -> bool {
        use num_integer::Integer;
        use num_traits::Zero;
        if other.is_zero() {
            self.is_zero()
        } else {
            self.is_multiple_of(other)
        }
    }
}
