//! Layers of `A(G)` for `G = R^g × F` with `F` finite and `g >= 1`.
//!
//! The real factor only contributes connectivity, so a layer is keyed by
//! the saturation of its defining subgroup together with a homomorphism
//! `Γ → F` killing the defining elements. Components of `T` are the
//! homomorphisms themselves, and `D ≤ C` requires equal homomorphisms.

use std::collections::BTreeMap;

use num_traits::{Pow, Zero};
use rayon::prelude::*;

use crate::arrangement::{multiplicity, Arrangement, GroupSpec, SubsetMask};
use crate::error::{Error, Result};
use crate::invariants::{chromatic_quasi, g_characteristic, torsion_complement_count};
use crate::linalg::{hom_enumerate, lattice_contains, saturation, FgAbelianGroup, FiniteHom};
use crate::poset::{LayerKey, LayerPoset, LayerSeed};
use crate::{AbelianGroup, Int, Matrix, Poly};

pub const MAX_LIE_ELEMENTS: usize = 12;
pub const MAX_LIE_LAYERS: usize = 10_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LieKey {
    pub span: Matrix,
    pub hom: FiniteHom<Int>,
}

impl LayerKey for LieKey {
    fn describe(&self) -> String {
        let rows: Vec<String> = self
            .span
            .row_vecs()
            .iter()
            .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let images: Vec<String> = self
            .hom
            .images
            .iter()
            .map(|img| format!("({})", img.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        format!("<{}> chi={}", rows.join(","), images.join(""))
    }
}

#[derive(Clone, Debug)]
pub struct LiePoset {
    poset: LayerPoset<LieKey>,
    per_subset: Vec<(SubsetMask, Vec<usize>)>,
    g: usize,
    finite: AbelianGroup,
    torsion_part: SubsetMask,
}

/// One row of the alternating-sum check over `R(C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyLieRow {
    pub layer: usize,
    pub partial: bool,
    /// `Σ_{S ∈ R(C)} (-1)^{#S}`
    pub sum: Int,
    /// `μ(T^C, C)` on `L^par`, zero elsewhere.
    pub expected: Int,
}

impl KeyLieRow {
    pub fn holds(&self) -> bool {
        self.sum == self.expected
    }
}

/// Polynomial of the partial poset for `F = Z/k`, split by component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieConstituent {
    pub polynomial: Poly,
    /// For every `T_i ∈ scc(T)`: its index and the sum over layers above it.
    pub per_component: Vec<(usize, Poly)>,
}

/// Enumerates all layers of `A(R^g × F)`, `F` given by cyclic orders.
pub fn enumerate_lie_layers(arr: &Arrangement, g: usize, f_orders: &[Int]) -> Result<LiePoset> {
    if g == 0 {
        return Err(Error::InvalidArgument("g must be positive; use leading_part for finite groups".into()));
    }
    if arr.len() > MAX_LIE_ELEMENTS {
        return Err(Error::CapExceeded {
            what: "elements for layer enumeration".into(),
            limit: MAX_LIE_ELEMENTS as u64,
        });
    }
    let finite = FgAbelianGroup::from_cyclic_orders(0, f_orders)?;
    let spec = GroupSpec::lie(g, finite.torsion().to_vec())?;
    let gamma = arr.gamma();
    let r = gamma.free_rank();
    let s_count = gamma.torsion().len();
    let f_order = finite.torsion_order();
    let masks: Vec<SubsetMask> = arr.subsets().collect();

    let per_mask: Vec<(Matrix, usize, Vec<FiniteHom<Int>>)> = masks
        .par_iter()
        .map(|&s| {
            let rows = arr.element_matrix(s);
            let span = saturation(&rows, gamma)?;
            let rank = span.rows() - s_count;
            let homs = hom_enumerate(&rows, gamma, &finite)?;
            let expected = multiplicity(&arr.subset_data(s), &spec) * Pow::pow(&f_order, (r - rank) as u32);
            if Int::from(homs.len()) != expected {
                return Err(Error::InvariantViolation(format!(
                    "H_S for S = {s:?} has {} components, expected {expected}",
                    homs.len()
                )));
            }
            Ok((span, rank, homs))
        })
        .collect::<Result<_>>()?;

    let mut merged: BTreeMap<LieKey, (usize, Vec<SubsetMask>)> = BTreeMap::new();
    for (&s, (span, rank, homs)) in masks.iter().zip(&per_mask) {
        for hom in homs {
            let key = LieKey { span: span.clone(), hom: hom.clone() };
            merged.entry(key).or_insert_with(|| (*rank, Vec::new())).1.push(s);
        }
        if merged.len() > MAX_LIE_LAYERS {
            return Err(Error::CapExceeded { what: "Lie layers".into(), limit: MAX_LIE_LAYERS as u64 });
        }
    }

    let mut seeds = Vec::with_capacity(merged.len());
    for (key, (rank, generating)) in merged {
        let localization = arr.elements().iter().enumerate().fold(SubsetMask::EMPTY, |acc, (i, a)| {
            let on = lattice_contains(&key.span, a) && key.hom.evaluate(a, &finite).iter().all(|x| x.is_zero());
            if on {
                acc.with(i)
            } else {
                acc
            }
        });
        let spanning: Vec<SubsetMask> = localization.subsets().filter(|&s| arr.subset_data(s).rank == rank).collect();
        if arr.subset_data(localization).rank != rank || spanning != generating {
            return Err(Error::InvariantViolation(format!(
                "layer {} is generated by {:?}, expected the spanning subsets {:?} of its localization",
                key.describe(),
                generating,
                spanning
            )));
        }
        seeds.push(LayerSeed { key, dim: g * (r - rank), rank, localization, generating_subsets: generating });
    }

    let poset = LayerPoset::build(
        seeds,
        |k: &LieKey| k.hom.clone(),
        |d, c| d.hom == c.hom && d.span.row_vecs().iter().all(|row| lattice_contains(&c.span, row)),
    )?;
    let mut per_subset: Vec<(SubsetMask, Vec<usize>)> = masks.iter().map(|&s| (s, Vec::new())).collect();
    for (i, layer) in poset.layers().iter().enumerate() {
        for s in &layer.generating_subsets {
            per_subset[s.0 as usize].1.push(i);
        }
    }
    let lie = LiePoset { poset, per_subset, g, finite, torsion_part: arr.torsion_sublist() };
    lie.check_scc_count(arr)?;
    Ok(lie)
}

impl LiePoset {
    pub fn poset(&self) -> &LayerPoset<LieKey> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn finite_group(&self) -> &AbelianGroup {
        &self.finite
    }

    pub fn per_subset(&self) -> &[(SubsetMask, Vec<usize>)] {
        &self.per_subset
    }

    fn is_partial(&self, i: usize) -> bool {
        self.poset.layer(i).localization.0 & self.torsion_part.0 == 0
    }

    /// Components `χ ∈ Hom(Γ, F)` with `χ(α) ≠ 0` for every `α ∈ A^tor`.
    pub fn scc(&self) -> Vec<usize> {
        self.poset.minimal_elements().into_iter().filter(|&i| self.is_partial(i)).collect()
    }

    fn check_scc_count(&self, arr: &Arrangement) -> Result<()> {
        let spec = GroupSpec::lie(self.g, self.finite.torsion().to_vec())?;
        let r = arr.rank_gamma() as u32;
        let expected = torsion_complement_count(arr, &spec)? * Pow::pow(self.finite.torsion_order(), r);
        let found = self.scc().len();
        if Int::from(found) != expected {
            return Err(Error::InvariantViolation(format!("#scc(T) = {found}, expected {expected}")));
        }
        Ok(())
    }

    /// `L^par`, asserted upward closed.
    pub fn partial_subposet(&self) -> Result<Vec<usize>> {
        let subset: Vec<usize> = (0..self.len()).filter(|&i| self.is_partial(i)).collect();
        if !self.poset.is_dual_order_ideal(&subset) {
            return Err(Error::InvariantViolation("L^par is not a dual order ideal".into()));
        }
        Ok(subset)
    }

    pub fn partial_characteristic(&self) -> Result<Poly> {
        Ok(self.poset.characteristic(&self.partial_subposet()?))
    }

    pub fn total_characteristic(&self) -> Poly {
        self.poset.characteristic(&self.poset.all_indices())
    }

    /// Alternating sums over `R(C)` against `μ(T^C, C)` or zero.
    pub fn key_lie_sums(&self) -> Vec<KeyLieRow> {
        (0..self.len())
            .map(|i| {
                let layer = self.poset.layer(i);
                let sum: Int = layer
                    .generating_subsets
                    .iter()
                    .map(|s| if s.len() % 2 == 1 { Int::from(-1) } else { Int::from(1) })
                    .sum();
                let partial = self.is_partial(i);
                let expected = if partial { layer.mobius.clone() } else { Int::zero() };
                KeyLieRow { layer: i, partial, sum, expected }
            })
            .collect()
    }

    /// Sum over the layers above each `T_i ∈ scc(T)`.
    pub fn per_component_characteristic(&self) -> Vec<(usize, Poly)> {
        self.scc()
            .into_iter()
            .map(|root| {
                let members: Vec<usize> = (0..self.len()).filter(|&i| self.poset.layer(i).component == root).collect();
                (root, self.poset.characteristic(&members))
            })
            .collect()
    }
}

fn scaled_characteristic(arr: &Arrangement, g: usize, finite: &AbelianGroup) -> Result<Poly> {
    let spec = GroupSpec::lie(g, finite.torsion().to_vec())?;
    g_characteristic(arr, &spec)?.scale_variable(&finite.torsion_order(), g)
}

/// `χ^par` from the layer poset, checked against `χ^G(#F · t^g)`.
pub fn partial_characteristic(arr: &Arrangement, g: usize, f_orders: &[Int]) -> Result<Poly> {
    let lie = enumerate_lie_layers(arr, g, f_orders)?;
    let chi = lie.partial_characteristic()?;
    let expected = scaled_characteristic(arr, g, lie.finite_group())?;
    if chi != expected {
        return Err(Error::InvariantViolation(format!(
            "partial polynomial {chi} differs from χ^G(#F t^g) = {expected}"
        )));
    }
    Ok(chi)
}

/// `χ^tot` from the layer poset, checked against the torsion-free part.
pub fn total_characteristic(arr: &Arrangement, g: usize, f_orders: &[Int]) -> Result<Poly> {
    let lie = enumerate_lie_layers(arr, g, f_orders)?;
    let chi = lie.total_characteristic();
    let expected = scaled_characteristic(&arr.without_torsion(), g, lie.finite_group())?;
    if chi != expected {
        return Err(Error::InvariantViolation(format!(
            "total polynomial {chi} differs from the torsion-free χ^G(#F t^g) = {expected}"
        )));
    }
    Ok(chi)
}

/// `χ^par` for `G = R^g × Z/k`, checked against `f^k(k t^g)`, with its
/// split over `scc(T)`.
pub fn constituent_via_lie(arr: &Arrangement, k: u64, g: usize) -> Result<LieConstituent> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let lie = enumerate_lie_layers(arr, g, &[Int::from(k)])?;
    let polynomial = lie.partial_characteristic()?;
    let qp = chromatic_quasi(arr)?;
    let expected = qp.constituent(k).scale_variable(&Int::from(k), g)?;
    if polynomial != expected {
        return Err(Error::InvariantViolation(format!(
            "partial polynomial {polynomial} differs from f^{k}({k} t^{g}) = {expected}"
        )));
    }
    let per_component = lie.per_component_characteristic();
    let total = per_component.iter().fold(Poly::zero(), |acc, (_, p)| &acc + p);
    if total != polynomial {
        return Err(Error::InvariantViolation("component split does not add up".into()));
    }
    Ok(LieConstituent { polynomial, per_component })
}

/// `χ^par(q)` for `G = R^g × Z/q`, which equals `f^q(q^{g+1})`.
pub fn lie_chromatic_value(arr: &Arrangement, q: u64, g: usize) -> Result<Int> {
    Ok(constituent_via_lie(arr, q, g)?.polynomial.eval(&Int::from(q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Arrangement {
        Arrangement::from_i64(2, &[], &[&[-1, 1], &[0, 2], &[0, 4]]).unwrap()
    }

    fn poly(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Int::from(x)).collect())
    }

    fn shapes(lie: &LiePoset) -> Vec<(String, usize)> {
        let all = lie.poset().all_indices();
        lie.poset().component_shapes(&all).into_iter().map(|s| (s.name, s.count)).collect()
    }

    type Shapes = Vec<(&'static str, usize)>;

    #[test]
    fn lie_posets_of_rank_two_example() {
        let a = example();
        let cases: [(&[i64], usize, &[i64], Shapes); 3] = [
            (&[], 1, &[1, -2, 1], vec![("diamond", 1)]),
            (&[2], 4, &[2, -6, 4], vec![("diamond", 2), ("chain of 2", 2)]),
            (&[4], 16, &[4, -20, 16], vec![("diamond", 4), ("chain of 2", 12)]),
        ];
        for (orders, minimal, chi, expected_shapes) in cases {
            let orders: Vec<Int> = orders.iter().map(|&x| Int::from(x)).collect();
            let lie = enumerate_lie_layers(&a, 1, &orders).unwrap();
            assert_eq!(lie.poset().minimal_elements().len(), minimal);
            assert_eq!(total_characteristic(&a, 1, &orders).unwrap(), poly(chi));
            assert_eq!(partial_characteristic(&a, 1, &orders).unwrap(), poly(chi));
            let mut found = shapes(&lie);
            found.sort();
            let mut want: Vec<(String, usize)> = expected_shapes.iter().map(|(n, c)| (n.to_string(), *c)).collect();
            want.sort();
            assert_eq!(found, want);
        }
    }

    #[test]
    fn key_lie_sums_hold() {
        let a = Arrangement::from_i64(1, &[2], &[&[1, 0], &[0, 1], &[2, 1]]).unwrap();
        for orders in [vec![], vec![Int::from(2)], vec![Int::from(4)]] {
            let lie = enumerate_lie_layers(&a, 1, &orders).unwrap();
            let rows = lie.key_lie_sums();
            assert!(rows.iter().all(|r| r.holds()));
            if !orders.is_empty() {
                assert!(rows.iter().any(|r| !r.partial && r.sum.is_zero()));
            }
        }
        let lie = enumerate_lie_layers(&example(), 1, &[]).unwrap();
        let top = lie.key_lie_sums().into_iter().last().unwrap();
        assert_eq!(top.sum, Int::from(1));
    }

    #[test]
    fn scc_halves_on_torsion_generator() {
        let a = Arrangement::from_i64(1, &[2], &[&[0, 1]]).unwrap();
        let lie = enumerate_lie_layers(&a, 1, &[Int::from(2)]).unwrap();
        assert_eq!(lie.poset().minimal_elements().len(), 4);
        assert_eq!(lie.scc().len(), 2);
        let trivial = enumerate_lie_layers(&a, 1, &[]).unwrap();
        assert!(trivial.scc().is_empty());
    }

    #[test]
    fn torsion_example_total_matches_stripped_partial() {
        let a = Arrangement::from_i64(1, &[2], &[&[1, 0], &[0, 1]]).unwrap();
        let stripped = a.without_torsion();
        for g in 1..=2 {
            for orders in [vec![], vec![Int::from(2)], vec![Int::from(3)]] {
                assert_eq!(
                    total_characteristic(&a, g, &orders).unwrap(),
                    partial_characteristic(&stripped, g, &orders).unwrap()
                );
            }
        }
    }

    #[test]
    fn empty_arrangement() {
        let a = Arrangement::from_i64(2, &[], &[]).unwrap();
        let chi = total_characteristic(&a, 2, &[Int::from(3)]).unwrap();
        assert_eq!(chi, Poly::monomial(Int::from(9), 4));
    }

    #[test]
    fn constituents_through_lie() {
        let a = example();
        let c = constituent_via_lie(&a, 2, 1).unwrap();
        assert_eq!(c.polynomial, poly(&[2, -6, 4]));
        assert_eq!(c.per_component.len(), 4);
        assert_eq!(constituent_via_lie(&a, 4, 2).unwrap().polynomial, poly(&[4, 0, -20, 0, 16]));
        assert_eq!(lie_chromatic_value(&a, 2, 1).unwrap(), Int::from(6));
    }

    #[test]
    fn rejects_g_zero() {
        assert!(enumerate_lie_layers(&example(), 0, &[]).is_err());
    }
}
