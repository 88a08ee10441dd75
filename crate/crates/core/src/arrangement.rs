//! The arrangement model: a finite list of elements of a finitely
//! generated abelian group, with per-subset quotient data.
//!
//! Subsets are addressed by bitmask over element positions. Every
//! invariant in this crate is a sum over all `2^n` subsets, so the number
//! of elements is capped at [`MAX_ELEMENTS`] and the quotient data for
//! each subset is computed once and memoized.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::linalg::{cokernel, FgAbelianGroup, IntegerMatrix};
use crate::scalar::{lcm, Scalar};
use crate::{AbelianGroup, Int, Matrix};

/// Largest supported number of elements; sweeps cost `2^n` quotient computations.
pub const MAX_ELEMENTS: usize = 24;

/// A sublist of an arrangement, bit `i` selecting element `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: usize) -> Self {
        if n >= 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        SubsetMask(1 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        SubsetMask(self.0 | 1 << i)
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All subsets of an `n`-element list in ascending mask order.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetMask> {
        (0..1u64 << n).map(|m| SubsetMask(m as u32))
    }

    /// All subsets of `self`, ascending.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(SubsetMask(cur))
        })
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<usize> = self.indices().collect();
        write!(f, "{idx:?}")
    }
}

/// Rank of `<S>` and the torsion invariant factors of `Γ/<S>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetData {
    pub mask: SubsetMask,
    pub rank: usize,
    pub torsion: Vec<Int>,
}

impl SubsetData {
    /// Largest invariant factor, or one when the quotient is torsion-free.
    pub fn largest_factor(&self) -> Int {
        self.torsion.last().cloned().unwrap_or_else(Int::one)
    }

    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().product()
    }

    pub fn torsion_group(&self) -> AbelianGroup {
        FgAbelianGroup::new(0, self.torsion.clone()).expect("cokernel factors form a chain")
    }
}

/// The group `G = F × (S^1)^p × R^q`, with `F` given by invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    f_torsion: Vec<Int>,
    p: usize,
    q: usize,
}

impl GroupSpec {
    pub fn new(f_torsion: Vec<Int>, p: usize, q: usize) -> Result<Self> {
        let f = FgAbelianGroup::new(0, f_torsion)?;
        Ok(Self { f_torsion: f.torsion().to_vec(), p, q })
    }

    /// Normalizes arbitrary cyclic orders `Z/k_1 × ... × Z/k_m` for `F`.
    pub fn from_orders(orders: &[Int], p: usize, q: usize) -> Result<Self> {
        let f = FgAbelianGroup::from_cyclic_orders(0, orders)?;
        Ok(Self { f_torsion: f.torsion().to_vec(), p, q })
    }

    pub fn real() -> Self {
        Self { f_torsion: Vec::new(), p: 0, q: 1 }
    }

    pub fn circle() -> Self {
        Self { f_torsion: Vec::new(), p: 1, q: 0 }
    }

    /// `Z/kZ`; `k = 1` is the trivial group.
    pub fn cyclic(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("cyclic order must be positive".into()));
        }
        Self::from_orders(&[Int::from(k)], 0, 0)
    }

    /// `R^g × F`
    pub fn lie(g: usize, f_torsion: Vec<Int>) -> Result<Self> {
        Self::new(f_torsion, 0, g)
    }

    pub fn f_torsion(&self) -> &[Int] {
        &self.f_torsion
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    /// `#F`
    pub fn finite_order(&self) -> Int {
        self.f_torsion.iter().product()
    }

    pub fn finite_part(&self) -> AbelianGroup {
        FgAbelianGroup::new(0, self.f_torsion.clone()).expect("validated on construction")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.f_torsion.iter().map(|e| format!("Z/{e}")).collect();
        match self.p {
            0 => {}
            1 => parts.push("S^1".into()),
            p => parts.push(format!("(S^1)^{p}")),
        }
        match self.q {
            0 => {}
            1 => parts.push("R".into()),
            q => parts.push(format!("R^{q}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// `m(S; G) = #Hom((Γ/<S>)_tor, G)`.
///
/// Circle factors contribute `d` per invariant factor `d`, the finite
/// part `gcd(d, f)` per pair, and real factors nothing.
pub fn multiplicity(data: &SubsetData, spec: &GroupSpec) -> Int {
    let mut m = Int::one();
    for d in &data.torsion {
        m *= Pow::pow(d, spec.p as u32);
        for f in &spec.f_torsion {
            m *= d.gcd_with(f);
        }
    }
    m
}

/// A finite list (multiset) of elements of `Γ`.
pub struct Arrangement {
    gamma: AbelianGroup,
    elements: Vec<Vec<Int>>,
    memo: RwLock<HashMap<SubsetMask, Arc<SubsetData>>>,
}

impl Arrangement {
    /// Torsion coordinates are reduced into their residue range; element
    /// order and duplicates are kept.
    pub fn new(gamma: AbelianGroup, elements: Vec<Vec<Int>>) -> Result<Self> {
        if elements.len() > MAX_ELEMENTS {
            return Err(Error::CapExceeded { what: "number of elements".into(), limit: MAX_ELEMENTS as u64 });
        }
        let elements = elements.iter().map(|v| gamma.reduce(v)).collect::<Result<Vec<_>>>()?;
        Ok(Self { gamma, elements, memo: RwLock::new(HashMap::new()) })
    }

    pub fn from_i64(free_rank: usize, torsion: &[i64], elements: &[&[i64]]) -> Result<Self> {
        let gamma = FgAbelianGroup::new(free_rank, torsion.iter().map(|&e| Int::from(e)).collect())?;
        let elements = elements.iter().map(|v| v.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::new(gamma, elements)
    }

    pub fn gamma(&self) -> &AbelianGroup {
        &self.gamma
    }

    pub fn elements(&self) -> &[Vec<Int>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `r_Γ`
    pub fn rank_gamma(&self) -> usize {
        self.gamma.free_rank()
    }

    /// `r_A`
    pub fn rank(&self) -> usize {
        self.subset_data(self.full_mask()).rank
    }

    pub fn full_mask(&self) -> SubsetMask {
        SubsetMask::full(self.len())
    }

    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> {
        SubsetMask::all(self.len())
    }

    /// Rows are the selected elements, in list order.
    pub fn element_matrix(&self, mask: SubsetMask) -> Matrix {
        let rows: Vec<Vec<Int>> = mask.indices().map(|i| self.elements[i].clone()).collect();
        IntegerMatrix::from_rows(self.gamma.generator_count(), &rows).expect("elements are validated")
    }

    pub fn subset_data(&self, mask: SubsetMask) -> Arc<SubsetData> {
        if let Some(d) = self.memo.read().expect("memo lock").get(&mask) {
            return d.clone();
        }
        let q = cokernel(&self.element_matrix(mask), &self.gamma).expect("elements are validated");
        let data =
            Arc::new(SubsetData { mask, rank: self.gamma.free_rank() - q.free_rank(), torsion: q.torsion().to_vec() });
        self.memo.write().expect("memo lock").entry(mask).or_insert(data).clone()
    }

    /// `A^tor`: elements with zero free part.
    pub fn torsion_sublist(&self) -> SubsetMask {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, v)| self.gamma.is_torsion_element(v))
            .fold(SubsetMask::EMPTY, |m, (i, _)| m.with(i))
    }

    pub fn contains_zero(&self) -> bool {
        self.elements.iter().any(|v| v.iter().all(|x| x.is_zero()))
    }

    /// `ρ_A = lcm` of the largest invariant factors over all subsets.
    pub fn lcm_period(&self) -> Int {
        self.subsets().fold(Int::one(), |acc, s| lcm(&acc, &self.subset_data(s).largest_factor()))
    }

    /// The sublist selected by `mask`, as a new arrangement over the same group.
    pub fn restrict(&self, mask: SubsetMask) -> Arrangement {
        let elements = mask.indices().map(|i| self.elements[i].clone()).collect();
        Arrangement::new(self.gamma.clone(), elements).expect("sublist of a valid arrangement")
    }

    /// `A ∖ A^tor`
    pub fn without_torsion(&self) -> Arrangement {
        let keep = SubsetMask(self.full_mask().0 & !self.torsion_sublist().0);
        self.restrict(keep)
    }

    /// A copy with element `i` appended once more.
    pub fn with_duplicate(&self, i: usize) -> Result<Arrangement> {
        let mut elements = self.elements.clone();
        elements.push(self.elements[i].clone());
        Arrangement::new(self.gamma.clone(), elements)
    }
}

impl Clone for Arrangement {
    fn clone(&self) -> Self {
        let memo = self.memo.read().expect("memo lock").clone();
        Self { gamma: self.gamma.clone(), elements: self.elements.clone(), memo: RwLock::new(memo) }
    }
}

impl PartialEq for Arrangement {
    fn eq(&self, other: &Self) -> bool {
        self.gamma == other.gamma && self.elements == other.elements
    }
}

impl Eq for Arrangement {}

impl fmt::Debug for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let els: Vec<String> = self
            .elements
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "Γ = {}, A = [{}]", self.gamma, els.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rank_two_example() -> Arrangement {
        Arrangement::from_i64(2, &[], &[&[-1, 1], &[0, 2], &[0, 4]]).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn subset_data_examples() {
        let a = rank_two_example();
        let empty = a.subset_data(SubsetMask::EMPTY);
        assert_eq!((empty.rank, empty.torsion.clone()), (0, vec![]));
        let g = a.subset_data(SubsetMask::singleton(2));
        assert_eq!((g.rank, g.torsion.clone()), (1, ints(&[4])));
        let all = a.subset_data(a.full_mask());
        assert_eq!((all.rank, all.torsion.clone()), (2, ints(&[2])));
    }

    #[test]
    fn multiplicity_examples() {
        let a = rank_two_example();
        let g = a.subset_data(SubsetMask::singleton(2));
        assert_eq!(multiplicity(&g, &GroupSpec::real()), Int::from(1));
        assert_eq!(multiplicity(&g, &GroupSpec::cyclic(4).unwrap()), Int::from(4));
        assert_eq!(multiplicity(&g, &GroupSpec::circle()), Int::from(4));
        assert_eq!(multiplicity(&g, &GroupSpec::cyclic(6).unwrap()), Int::from(2));
    }

    #[test]
    fn torsion_sublist_examples() {
        assert_eq!(rank_two_example().torsion_sublist(), SubsetMask::EMPTY);
        let a = Arrangement::from_i64(1, &[2], &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(a.torsion_sublist(), SubsetMask::singleton(1));
        let b = Arrangement::from_i64(0, &[6], &[&[2], &[3]]).unwrap();
        assert_eq!(b.torsion_sublist(), b.full_mask());
    }

    #[test]
    fn lcm_period_examples() {
        assert_eq!(Arrangement::from_i64(2, &[], &[]).unwrap().lcm_period(), Int::from(1));
        assert_eq!(rank_two_example().lcm_period(), Int::from(4));
        let a = Arrangement::from_i64(2, &[], &[&[2, 0], &[0, 3]]).unwrap();
        assert_eq!(a.lcm_period(), Int::from(6));
    }

    #[test]
    fn elements_are_reduced_and_validated() {
        let a = Arrangement::from_i64(1, &[2], &[&[0, 3], &[1, -1]]).unwrap();
        assert_eq!(a.elements()[0], ints(&[0, 1]));
        assert_eq!(a.elements()[1], ints(&[1, 1]));
        assert!(Arrangement::from_i64(2, &[], &[&[1]]).is_err());
        let too_many: Vec<&[i64]> = (0..25).map(|_| &[1i64][..]).collect();
        assert!(Arrangement::from_i64(1, &[], &too_many).is_err());
    }

    #[test]
    fn mask_subsets_enumerates_all() {
        let m = SubsetMask(0b1011);
        let subs: Vec<u32> = m.subsets().map(|s| s.0).collect();
        assert_eq!(subs, vec![0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(SubsetMask::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn group_spec_normalizes_orders() {
        let s = GroupSpec::from_orders(&ints(&[2, 3]), 0, 1).unwrap();
        assert_eq!(s.f_torsion(), ints(&[6]).as_slice());
        assert_eq!(GroupSpec::cyclic(1).unwrap().f_torsion(), &[] as &[Int]);
        assert!(GroupSpec::cyclic(0).is_err());
        assert_eq!(s.to_string(), "Z/6 x R");
    }
}
