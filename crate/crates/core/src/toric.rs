//! Layers of the toric arrangement `A(S^1)`.
//!
//! A layer is keyed by the saturated lattice `Λ ⊆ Z^n` of its defining
//! subgroup (Hermite basis, always containing the torsion coordinates) and
//! a character `ψ: Λ → Q/Z` killing the defining elements, stored as its
//! values on the basis rows. Layer `D` lies below `C` when `Λ_D ⊆ Λ_C` and
//! `ψ_C` restricts to `ψ_D`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arrangement::{multiplicity, Arrangement, GroupSpec, SubsetMask};
use crate::error::{Error, Result};
use crate::invariants::{chromatic_quasi, torsion_complement_count};
use crate::linalg::{
    cokernel, hom_enumerate, lattice_contains, lattice_coordinates, saturation, FgAbelianGroup, IntegerMatrix,
};
use crate::poset::{LayerKey, LayerPoset, LayerSeed};
use crate::{Int, Matrix, Poly, Rational};

/// Largest arrangement accepted for explicit layer enumeration.
pub const MAX_TORIC_ELEMENTS: usize = 12;
/// Largest number of distinct layers.
pub const MAX_TORIC_LAYERS: usize = 10_000;

/// Values of a character on a lattice basis, reduced into `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Character(pub Vec<Rational>);

impl Character {
    /// `k ψ = 0`
    pub fn killed_by(&self, k: u64) -> bool {
        self.0.iter().all(|v| Int::from(k).is_multiple_of(v.denom()))
    }

    pub fn order(&self) -> Int {
        self.0.iter().fold(Int::one(), |acc, v| acc.lcm(v.denom()))
    }

    /// `ψ(Σ c_i b_i)`, reduced mod 1.
    pub fn evaluate(&self, coords: &[Int]) -> Rational {
        let sum = coords
            .iter()
            .zip(&self.0)
            .fold(Rational::zero(), |acc, (c, v)| acc + v * Rational::from_integer(c.clone()));
        reduce_mod_one(sum)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn reduce_mod_one(v: Rational) -> Rational {
    &v - v.floor()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ToricKey {
    pub lattice: Matrix,
    pub character: Character,
}

impl LayerKey for ToricKey {
    fn describe(&self) -> String {
        let rows: Vec<String> = self
            .lattice
            .row_vecs()
            .iter()
            .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        format!("<{}> psi={}", rows.join(","), self.character)
    }
}

/// The toric layer poset together with the per-subset component lists.
#[derive(Clone, Debug)]
pub struct ToricPoset {
    poset: LayerPoset<ToricKey>,
    /// For every subset `S`, the layers that are components of `H_S`.
    per_subset: Vec<(SubsetMask, Vec<usize>)>,
    r_gamma: usize,
    torsion_part: SubsetMask,
}

/// Enumerates all layers of `A(S^1)` with their order and Möbius values.
pub fn enumerate_toric_layers(arr: &Arrangement) -> Result<ToricPoset> {
    if arr.len() > MAX_TORIC_ELEMENTS {
        return Err(Error::CapExceeded {
            what: "elements for layer enumeration".into(),
            limit: MAX_TORIC_ELEMENTS as u64,
        });
    }
    let gamma = arr.gamma();
    let r = gamma.free_rank();
    let n = gamma.generator_count();
    let masks: Vec<SubsetMask> = arr.subsets().collect();
    let per_mask: Vec<Vec<(ToricKey, usize)>> =
        masks.par_iter().map(|&s| subset_layers(arr, s)).collect::<Result<_>>()?;

    let mut merged: BTreeMap<ToricKey, (usize, Vec<SubsetMask>)> = BTreeMap::new();
    for (&s, layers) in masks.iter().zip(&per_mask) {
        for (key, rank) in layers {
            merged.entry(key.clone()).or_insert_with(|| (*rank, Vec::new())).1.push(s);
        }
        if merged.len() > MAX_TORIC_LAYERS {
            return Err(Error::CapExceeded { what: "toric layers".into(), limit: MAX_TORIC_LAYERS as u64 });
        }
    }

    let mut seeds = Vec::with_capacity(merged.len());
    for (key, (rank, generating)) in merged {
        let localization = localization(arr, &key);
        let spanning: Vec<SubsetMask> = localization.subsets().filter(|&s| arr.subset_data(s).rank == rank).collect();
        if arr.subset_data(localization).rank != rank || spanning != generating {
            return Err(Error::InvariantViolation(format!(
                "layer {} is generated by {:?}, expected the spanning subsets {:?} of its localization",
                key.describe(),
                generating,
                spanning
            )));
        }
        seeds.push(LayerSeed { key, dim: r - rank, rank, localization, generating_subsets: generating });
    }

    let torsion_units: Vec<Vec<Int>> = (r..n)
        .map(|i| {
            let mut u = vec![Int::zero(); n];
            u[i] = Int::one();
            u
        })
        .collect();
    let restriction = |k: &ToricKey| -> Vec<Rational> {
        torsion_units
            .iter()
            .map(|u| {
                k.character.evaluate(&lattice_coordinates(&k.lattice, u).expect("torsion lies in every layer lattice"))
            })
            .collect()
    };
    let poset = LayerPoset::build(seeds, restriction, toric_leq)?;

    let mut per_subset: Vec<(SubsetMask, Vec<usize>)> = masks.iter().map(|&s| (s, Vec::new())).collect();
    for (i, layer) in poset.layers().iter().enumerate() {
        for s in &layer.generating_subsets {
            per_subset[s.0 as usize].1.push(i);
        }
    }
    Ok(ToricPoset { poset, per_subset, r_gamma: r, torsion_part: arr.torsion_sublist() })
}

/// Components of `H_S`: all characters of `Λ_S` that kill `S`.
fn subset_layers(arr: &Arrangement, s: SubsetMask) -> Result<Vec<(ToricKey, usize)>> {
    let gamma = arr.gamma();
    let r = gamma.free_rank();
    let n = gamma.generator_count();
    let rows = arr.element_matrix(s);
    let lattice = saturation(&rows, gamma)?;
    let m = lattice.rows();
    let rank = m - (n - r);
    let relations: Vec<Vec<Int>> = rows
        .vstack(&gamma.relation_matrix())?
        .row_vecs()
        .iter()
        .map(|v| lattice_coordinates(&lattice, v).expect("generators lie in their saturation"))
        .collect();
    let relations = IntegerMatrix::from_rows(m, &relations)?;
    let free = FgAbelianGroup::free(m);
    let quotient = cokernel(&relations, &free)?;
    if quotient.free_rank() != 0 {
        return Err(Error::InvariantViolation("saturation has larger rank than its generators".into()));
    }
    let exponent = quotient.exponent();
    let characters: Vec<Character> = if exponent.is_one() {
        vec![Character(vec![Rational::zero(); m])]
    } else {
        let target = FgAbelianGroup::new(0, vec![exponent.clone()])?;
        hom_enumerate(&relations, &free, &target)?
            .into_iter()
            .map(|h| Character(h.images.iter().map(|x| Rational::new(x[0].clone(), exponent.clone())).collect()))
            .collect()
    };
    let expected = multiplicity(&arr.subset_data(s), &GroupSpec::circle());
    if Int::from(characters.len()) != expected {
        return Err(Error::InvariantViolation(format!(
            "H_S for S = {s:?} has {} components, expected m(S; S^1) = {expected}",
            characters.len()
        )));
    }
    Ok(characters.into_iter().map(|character| (ToricKey { lattice: lattice.clone(), character }, rank)).collect())
}

/// `D ≤ C`: `Λ_D ⊆ Λ_C` and `ψ_C|Λ_D = ψ_D`.
fn toric_leq(d: &ToricKey, c: &ToricKey) -> bool {
    d.lattice.row_vecs().iter().zip(&d.character.0).all(|(row, value)| {
        lattice_coordinates(&c.lattice, row).is_some_and(|coords| c.character.evaluate(&coords) == *value)
    })
}

/// Elements `α ∈ Λ_C` with `ψ_C(α) = 0`.
fn localization(arr: &Arrangement, key: &ToricKey) -> SubsetMask {
    arr.elements().iter().enumerate().fold(SubsetMask::EMPTY, |acc, (i, a)| {
        let on_layer = lattice_contains(&key.lattice, a)
            && lattice_coordinates(&key.lattice, a).is_some_and(|c| key.character.evaluate(&c).is_zero());
        if on_layer {
            acc.with(i)
        } else {
            acc
        }
    })
}

impl ToricPoset {
    pub fn poset(&self) -> &LayerPoset<ToricKey> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// Layers that are components of `H_S`, for each subset `S`.
    pub fn per_subset(&self) -> &[(SubsetMask, Vec<usize>)] {
        &self.per_subset
    }

    /// `L[k]`: layers whose character is killed by `k`.
    pub fn k_total_subposet(&self, k: u64) -> Result<Vec<usize>> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        let subset: Vec<usize> = (0..self.len()).filter(|&i| self.poset.layer(i).key.character.killed_by(k)).collect();
        if !self.poset.is_order_ideal(&subset) {
            return Err(Error::InvariantViolation(format!("L[{k}] is not an order ideal")));
        }
        Ok(subset)
    }

    /// `scc(T)`: components of `T` whose localization has no torsion element.
    pub fn scc(&self) -> Vec<usize> {
        self.poset
            .minimal_elements()
            .into_iter()
            .filter(|&i| (self.poset.layer(i).localization.0 & self.torsion_part.0) == 0)
            .collect()
    }

    /// `L^par`: the layers above some element of `scc(T)`.
    pub fn partial_subposet(&self) -> Result<Vec<usize>> {
        let subset: Vec<usize> =
            (0..self.len()).filter(|&i| (self.poset.layer(i).localization.0 & self.torsion_part.0) == 0).collect();
        if !self.poset.is_dual_order_ideal(&subset) {
            return Err(Error::InvariantViolation("L^par is not a dual order ideal".into()));
        }
        Ok(subset)
    }

    /// `L^par[k] = L^par ∩ L[k]`
    pub fn k_partial_subposet(&self, k: u64) -> Result<Vec<usize>> {
        let partial = self.partial_subposet()?;
        let total = self.k_total_subposet(k)?;
        Ok(partial.into_iter().filter(|i| total.binary_search(i).is_ok()).collect())
    }

    pub fn k_total_characteristic(&self, k: u64) -> Result<Poly> {
        Ok(self.poset.characteristic(&self.k_total_subposet(k)?))
    }

    pub fn k_partial_characteristic(&self, k: u64) -> Result<Poly> {
        Ok(self.poset.characteristic(&self.k_partial_subposet(k)?))
    }

    /// For every `S`: the number of components of `H_S` in `L[k]` and `m(S; Z/k)`.
    pub fn k_component_counts(&self, arr: &Arrangement, k: u64) -> Result<Vec<(SubsetMask, usize, Int)>> {
        let spec = GroupSpec::cyclic(k)?;
        Ok(self
            .per_subset
            .iter()
            .map(|(s, layers)| {
                let count = layers.iter().filter(|&&i| self.poset.layer(i).key.character.killed_by(k)).count();
                (*s, count, multiplicity(&arr.subset_data(*s), &spec))
            })
            .collect())
    }

    pub fn r_gamma(&self) -> usize {
        self.r_gamma
    }
}

/// `χ^{k-par}` from the layer poset, checked against the constituent `f^k`.
pub fn k_partial_characteristic(arr: &Arrangement, k: u64) -> Result<Poly> {
    let layers = enumerate_toric_layers(arr)?;
    let chi = layers.k_partial_characteristic(k)?;
    let qp = chromatic_quasi(arr)?;
    let f = qp.constituent(k);
    if &chi != f {
        return Err(Error::InvariantViolation(format!("{k}-partial polynomial {chi} differs from f^{k} = {f}")));
    }
    Ok(chi)
}

/// `χ^{k-tot}` from the layer poset, checked against `f^k` of `A ∖ A^tor`.
pub fn k_total_characteristic(arr: &Arrangement, k: u64) -> Result<Poly> {
    let layers = enumerate_toric_layers(arr)?;
    let chi = layers.k_total_characteristic(k)?;
    let qp = chromatic_quasi(&arr.without_torsion())?;
    let f = qp.constituent(k);
    if &chi != f {
        return Err(Error::InvariantViolation(format!(
            "{k}-total polynomial {chi} differs from f^{k} of the torsion-free part = {f}"
        )));
    }
    Ok(chi)
}

/// Checks `#scc(T) = #M(A^tor; Γ_tor, S^1)`.
pub fn check_scc_count(arr: &Arrangement, layers: &ToricPoset) -> Result<()> {
    let expected = torsion_complement_count(arr, &GroupSpec::circle())?;
    let found = layers.scc().len();
    if Int::from(found) != expected {
        return Err(Error::InvariantViolation(format!("#scc(T) = {found}, expected {expected}")));
    }
    Ok(())
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

    #[test]
    fn circle_with_one_point() {
        let a = Arrangement::from_i64(1, &[], &[&[1]]).unwrap();
        let p = enumerate_toric_layers(&a).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.poset().layer(0).dim, 1);
        assert_eq!(p.poset().layer(1).mobius, Int::from(-1));
    }

    #[test]
    fn empty_arrangement_is_the_torus() {
        let a = Arrangement::from_i64(2, &[], &[]).unwrap();
        let p = enumerate_toric_layers(&a).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.poset().layer(0).dim, 2);
    }

    #[test]
    fn example_component_counts() {
        let a = example();
        let p = enumerate_toric_layers(&a).unwrap();
        let count = |m: u32| p.per_subset()[m as usize].1.len();
        assert_eq!(count(0b010), 2);
        assert_eq!(count(0b100), 4);
        assert_eq!(count(0b110), 2);
    }

    #[test]
    fn example_partial_polynomials() {
        let a = example();
        assert_eq!(k_partial_characteristic(&a, 1).unwrap(), poly(&[1, -2, 1]));
        assert_eq!(k_partial_characteristic(&a, 2).unwrap(), poly(&[2, -3, 1]));
        assert_eq!(k_partial_characteristic(&a, 4).unwrap(), poly(&[4, -5, 1]));
        assert_eq!(k_total_characteristic(&a, 4).unwrap(), poly(&[4, -5, 1]));
    }

    #[test]
    fn example_hasse_sizes() {
        let p = enumerate_toric_layers(&example()).unwrap();
        for (k, nodes, edges) in [(1, 4, 4), (2, 6, 7), (4, 10, 13)] {
            let sub = p.k_partial_subposet(k).unwrap();
            assert_eq!(sub.len(), nodes, "k = {k}");
            assert_eq!(p.poset().subset_covers(&sub).len(), edges, "k = {k}");
        }
        let mu: Vec<Int> =
            p.k_partial_subposet(1).unwrap().iter().map(|&i| p.poset().layer(i).mobius.clone()).collect();
        assert_eq!(mu, [1, -1, -1, 1].map(Int::from).to_vec());
    }

    #[test]
    fn k_two_keeps_two_components_of_h_gamma() {
        let p = enumerate_toric_layers(&example()).unwrap();
        let l2 = p.k_total_subposet(2).unwrap();
        let gamma_layers = &p.per_subset()[0b100].1;
        assert_eq!(gamma_layers.iter().filter(|i| l2.contains(i)).count(), 2);
    }

    #[test]
    fn component_counts_on_example() {
        let a = example();
        let p = enumerate_toric_layers(&a).unwrap();
        for k in 1..=8 {
            for (s, found, expected) in p.k_component_counts(&a, k).unwrap() {
                assert_eq!(Int::from(found), expected, "S = {s:?}, k = {k}");
            }
        }
    }

    #[test]
    fn torsion_element_partial_poset() {
        let a = Arrangement::from_i64(1, &[2], &[&[0, 1]]).unwrap();
        let p = enumerate_toric_layers(&a).unwrap();
        assert_eq!(p.scc().len(), 1);
        let par = p.partial_subposet().unwrap();
        assert_eq!(par.len(), 1);
        assert_eq!(p.poset().layer(par[0]).dim, 1);
        check_scc_count(&a, &p).unwrap();
    }

    #[test]
    fn torsion_example_total_strips_torsion() {
        let a = Arrangement::from_i64(1, &[2], &[&[1, 0], &[0, 1]]).unwrap();
        let stripped = Arrangement::from_i64(1, &[2], &[&[1, 0]]).unwrap();
        let qp = chromatic_quasi(&stripped).unwrap();
        for k in 1..=4 {
            assert_eq!(&k_total_characteristic(&a, k).unwrap(), qp.constituent(k));
            k_partial_characteristic(&a, k).unwrap();
        }
    }

    #[test]
    fn killed_torsion_leaves_empty_partial_poset() {
        let a = Arrangement::from_i64(1, &[2], &[&[0, 1], &[0, 0]]).unwrap();
        let p = enumerate_toric_layers(&a).unwrap();
        assert!(p.partial_subposet().unwrap().is_empty());
        assert!(p.k_partial_characteristic(2).unwrap().is_zero());
    }

    #[test]
    fn cap_is_enforced() {
        let rows: Vec<Vec<i64>> = (0..13).map(|i| vec![i + 1]).collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = Arrangement::from_i64(1, &[], &refs).unwrap();
        assert!(matches!(enumerate_toric_layers(&a), Err(Error::CapExceeded { .. })));
    }
}
