use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{hermite_normal_form, smith_normal_form, IntegerMatrix};
use crate::scalar::Scalar;

/// Upper bound on the number of homomorphisms [`hom_enumerate`] will list.
pub const HOM_ENUMERATION_CAP: u64 = 1 << 22;

/// `Z^free_rank ⊕ Z/e_1 ⊕ ... ⊕ Z/e_s` with `1 < e_1 | e_2 | ... | e_s`.
///
/// Elements are coordinate vectors of length `free_rank + s`; the last `s`
/// coordinates are residues modulo the corresponding `e_i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbelianGroup<T> {
    free_rank: usize,
    torsion: Vec<T>,
}

impl<T: Scalar> FgAbelianGroup<T> {
    pub fn new(free_rank: usize, torsion: Vec<T>) -> Result<Self> {
        for (i, e) in torsion.iter().enumerate() {
            if *e <= T::one() {
                return Err(Error::InvalidGroup(format!("invariant factor {e} is not greater than 1")));
            }
            if i > 0 && !e.is_multiple_of(&torsion[i - 1]) {
                return Err(Error::InvalidGroup(format!(
                    "invariant factors {} and {e} break the divisibility chain",
                    torsion[i - 1]
                )));
            }
        }
        Ok(Self { free_rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    /// The invariant-factor form of `Z^free_rank ⊕ Z/o_1 ⊕ ... ⊕ Z/o_k` for
    /// arbitrary positive orders; orders equal to one are dropped.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[T]) -> Result<Self> {
        if let Some(o) = orders.iter().find(|o| !o.is_positive()) {
            return Err(Error::InvalidGroup(format!("cyclic order {o} is not positive")));
        }
        let diag = IntegerMatrix::diagonal(orders.len(), orders);
        let torsion = smith_normal_form(&diag).invariant_factors();
        Ok(Self { free_rank, torsion })
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[T] {
        &self.torsion
    }

    /// Number of coordinates of an element.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> T {
        self.torsion.iter().fold(T::one(), |a, e| a * e.clone())
    }

    pub fn order(&self) -> Option<T> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Largest invariant factor, or one for a torsion-free group.
    pub fn exponent(&self) -> T {
        self.torsion.last().cloned().unwrap_or_else(T::one)
    }

    /// Relations `e_i * g_{free_rank + i} = 0`, one row per torsion factor.
    pub fn relation_matrix(&self) -> IntegerMatrix<T> {
        let n = self.generator_count();
        let mut m = IntegerMatrix::zeros(self.torsion.len(), n);
        for (i, e) in self.torsion.iter().enumerate() {
            m[(i, self.free_rank + i)] = e.clone();
        }
        m
    }

    /// Reduces torsion coordinates into `[0, e_i)`.
    pub fn reduce(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_len(v.len())?;
        let mut out = v.to_vec();
        for (i, e) in self.torsion.iter().enumerate() {
            out[self.free_rank + i] = out[self.free_rank + i].mod_floor(e);
        }
        Ok(out)
    }

    pub fn is_reduced(&self, v: &[T]) -> bool {
        v.len() == self.generator_count()
            && self
                .torsion
                .iter()
                .enumerate()
                .all(|(i, e)| !v[self.free_rank + i].is_negative() && v[self.free_rank + i] < *e)
    }

    /// Whether `v` lies in the torsion subgroup, i.e. has zero free part.
    pub fn is_torsion_element(&self, v: &[T]) -> bool {
        v[..self.free_rank].iter().all(|x| x.is_zero())
    }

    pub fn is_zero_element(&self, v: &[T]) -> bool {
        self.reduce(v).map(|r| r.iter().all(|x| x.is_zero())).unwrap_or(false)
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.generator_count() {
            return Err(Error::DimensionMismatch { expected: self.generator_count(), found: len });
        }
        Ok(())
    }

    fn check_matrix(&self, m: &IntegerMatrix<T>) -> Result<()> {
        if m.cols() != self.generator_count() {
            return Err(Error::DimensionMismatch { expected: self.generator_count(), found: m.cols() });
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for FgAbelianGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbelianGroup(free_rank={}, torsion={:?})", self.free_rank, self.torsion)
    }
}

impl<T: fmt::Display> fmt::Display for FgAbelianGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|e| format!("Z/{e}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `ambient / <rows of generators>` in invariant-factor form.
pub fn cokernel<T: Scalar>(generators: &IntegerMatrix<T>, ambient: &FgAbelianGroup<T>) -> Result<FgAbelianGroup<T>> {
    ambient.check_matrix(generators)?;
    let n = ambient.generator_count();
    let relations = generators.vstack(&ambient.relation_matrix())?;
    let snf = smith_normal_form(&relations);
    let rank = snf.rank();
    Ok(FgAbelianGroup { free_rank: n - rank, torsion: snf.invariant_factors() })
}

/// Hermite basis of the smallest subgroup containing the generators and
/// the torsion of `ambient` whose quotient is free.
///
/// The subgroup is returned as its preimage lattice in `Z^n`, so the rows
/// always include the unit vectors of the torsion coordinates.
pub fn saturation<T: Scalar>(generators: &IntegerMatrix<T>, ambient: &FgAbelianGroup<T>) -> Result<IntegerMatrix<T>> {
    ambient.check_matrix(generators)?;
    let r = ambient.free_rank();
    let n = ambient.generator_count();
    let free_cols: Vec<usize> = (0..r).collect();
    let projected = generators.select_columns(&free_cols);
    let snf = smith_normal_form(&projected);
    let mut rows = Vec::new();
    for i in 0..snf.rank() {
        let mut row = snf.v_inv.row(i).to_vec();
        row.resize(n, T::zero());
        rows.push(row);
    }
    for i in r..n {
        let mut row = vec![T::zero(); n];
        row[i] = T::one();
        rows.push(row);
    }
    Ok(hermite_normal_form(&IntegerMatrix::from_rows(n, &rows)?))
}

/// `#Hom(source, Z/f_1 ⊕ ... ⊕ Z/f_k)` for a finite source.
pub fn hom_count<T: Scalar>(source: &FgAbelianGroup<T>, target_torsion: &[T]) -> Result<T> {
    if !source.is_finite() {
        return Err(Error::NotFinite(source.free_rank()));
    }
    Ok(source
        .torsion()
        .iter()
        .flat_map(|d| target_torsion.iter().map(move |f| d.gcd_with(f)))
        .fold(T::one(), |a, g| a * g))
}

/// A homomorphism given by the image of each generator; every image is a
/// tuple of residues, one per invariant factor of the target.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteHom<T> {
    pub images: Vec<Vec<T>>,
}

impl<T: Scalar> FiniteHom<T> {
    /// Image of an element given in generator coordinates.
    pub fn evaluate(&self, v: &[T], target: &FgAbelianGroup<T>) -> Vec<T> {
        target
            .torsion()
            .iter()
            .enumerate()
            .map(|(j, f)| {
                v.iter()
                    .zip(&self.images)
                    .fold(T::zero(), |acc, (c, img)| acc + c.clone() * img[j].clone())
                    .mod_floor(f)
            })
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().flatten().all(|x| x.is_zero())
    }
}

/// All homomorphisms from `ambient / <relations>` into a finite target,
/// sorted and without duplicates.
pub fn hom_enumerate<T: Scalar>(
    relations: &IntegerMatrix<T>,
    ambient: &FgAbelianGroup<T>,
    target: &FgAbelianGroup<T>,
) -> Result<Vec<FiniteHom<T>>> {
    if !target.is_finite() {
        return Err(Error::NotFinite(target.free_rank()));
    }
    ambient.check_matrix(relations)?;
    let n = ambient.generator_count();
    let full = relations.vstack(&ambient.relation_matrix())?;
    let snf = smith_normal_form(&full);
    let diag = snf.diagonal();

    // Per target factor f: x = V y with d_i * y_i = 0 mod f.
    let mut per_factor: Vec<Vec<Vec<T>>> = Vec::new();
    let mut total: u64 = 1;
    for f in target.torsion() {
        let ranges: Vec<Vec<T>> = (0..n)
            .map(|i| {
                let d = diag.get(i).cloned().unwrap_or_else(T::zero);
                let g = d.gcd_with(f);
                let step = f.clone() / g.clone();
                let count = g.to_u64().unwrap_or(u64::MAX);
                (0..count).map(|c| step.clone() * T::from_u64(c).expect("fits")).collect()
            })
            .collect();
        let size = ranges.iter().fold(1u64, |a, r| a.saturating_mul(r.len() as u64));
        total = total.saturating_mul(size);
        if total > HOM_ENUMERATION_CAP {
            return Err(Error::CapExceeded { what: "homomorphism enumeration".into(), limit: HOM_ENUMERATION_CAP });
        }
        let mut solutions = Vec::new();
        for y in cartesian(&ranges) {
            let x: Vec<T> = snf.v.apply(&y)?.into_iter().map(|c| c.mod_floor(f)).collect();
            solutions.push(x);
        }
        per_factor.push(solutions);
    }

    let mut homs = Vec::new();
    for choice in cartesian(&per_factor) {
        let images = (0..n).map(|g| choice.iter().map(|x| x[g].clone()).collect()).collect();
        homs.push(FiniteHom { images });
    }
    homs.sort();
    homs.dedup();
    Ok(homs)
}

/// Every way of choosing one item from each list, first list slowest.
pub(crate) fn cartesian<I: Clone>(lists: &[Vec<I>]) -> Vec<Vec<I>> {
    let mut out: Vec<Vec<I>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for item in list {
                let mut p = prefix.clone();
                p.push(item.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}
