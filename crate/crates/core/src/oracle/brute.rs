//! Naive enumerations used as ground truth. Written with machine integers
//! and plain loops, sharing nothing with the symbolic code beyond the
//! arrangement type.

use num_traits::ToPrimitive;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::AbelianGroup;

/// Largest enumeration the brute-force counters will walk.
pub const BRUTE_CAP: u64 = 10_000_000;

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

fn small(x: &crate::Int) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::InvalidArgument(format!("{x} does not fit a machine integer")))
}

/// Walks every tuple with `tuple[i]` in `choices[i]`, calling `visit` on each.
fn odometer(choices: &[Vec<i64>], mut visit: impl FnMut(&[i64])) {
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; choices.len()];
    let mut tuple: Vec<i64> = choices.iter().map(|c| c[0]).collect();
    loop {
        visit(&tuple);
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                tuple[pos] = choices[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = choices[pos][0];
        }
    }
}

fn check_cap(choices: &[Vec<i64>], what: &str) -> Result<()> {
    let mut total: u64 = 1;
    for c in choices {
        total = total.saturating_mul(c.len() as u64);
    }
    if total > BRUTE_CAP {
        return Err(Error::CapExceeded { what: what.into(), limit: BRUTE_CAP });
    }
    Ok(())
}

/// `#M(A; Γ, Z/q)`: homomorphisms `Γ → Z/q` nonzero on every element of `A`.
pub fn brute_complement_count(arr: &Arrangement, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let q = q as i64;
    let gamma = arr.gamma();
    let mut choices: Vec<Vec<i64>> = Vec::new();
    for _ in 0..gamma.free_rank() {
        choices.push((0..q).collect());
    }
    for e in gamma.torsion() {
        let e = small(e)?;
        let g = gcd(e, q);
        let step = q / g;
        choices.push((0..g).map(|c| c * step).collect());
    }
    check_cap(&choices, "complement enumeration")?;
    let elements: Vec<Vec<i64>> =
        arr.elements().iter().map(|v| v.iter().map(small).collect::<Result<_>>()).collect::<Result<_>>()?;
    let mut count = 0u64;
    odometer(&choices, |phi| {
        let avoids_all = elements.iter().all(|a| {
            let mut value: i128 = 0;
            for (x, y) in a.iter().zip(phi) {
                value += *x as i128 * *y as i128;
            }
            value.rem_euclid(q as i128) != 0
        });
        if avoids_all {
            count += 1;
        }
    });
    Ok(count)
}

/// `#Hom(source, target)` for a finite target, by trying every image tuple.
pub fn brute_hom_count(source: &AbelianGroup, target: &AbelianGroup) -> Result<u64> {
    if !target.is_finite() {
        return Err(Error::NotFinite(target.free_rank()));
    }
    let target_orders: Vec<i64> = target.torsion().iter().map(small).collect::<Result<_>>()?;
    // Every element of the target, as residue tuples.
    let mut elements: Vec<Vec<i64>> = Vec::new();
    let element_choices: Vec<Vec<i64>> = target_orders.iter().map(|&f| (0..f).collect()).collect();
    check_cap(&element_choices, "target elements")?;
    odometer(&element_choices, |x| elements.push(x.to_vec()));

    let mut generator_orders: Vec<i64> = vec![0; source.free_rank()];
    for e in source.torsion() {
        generator_orders.push(small(e)?);
    }
    let n = generator_orders.len();
    let index_choices: Vec<Vec<i64>> = (0..n).map(|_| (0..elements.len() as i64).collect()).collect();
    check_cap(&index_choices, "homomorphism candidates")?;
    let mut count = 0u64;
    odometer(&index_choices, |pick| {
        let ok = pick
            .iter()
            .zip(&generator_orders)
            .all(|(&i, &d)| elements[i as usize].iter().zip(&target_orders).all(|(&x, &f)| (d * x) % f == 0));
        if ok {
            count += 1;
        }
    });
    Ok(count)
}

/// `μ(a, b)` for every pair of a finite poset given by its order matrix
/// (`leq[a][b]` iff `a ≤ b`); pairs with `a ≰ b` get 0.
pub fn brute_mobius(leq: &[Vec<bool>]) -> Vec<Vec<i64>> {
    let n = leq.len();
    // Process b in an order compatible with the partial order: by size of lower set.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&b| (0..n).filter(|&c| leq[c][b]).count());
    let mut mu = vec![vec![0i64; n]; n];
    for a in 0..n {
        for &b in &order {
            if !leq[a][b] {
                continue;
            }
            if a == b {
                mu[a][b] = 1;
                continue;
            }
            let mut sum = 0;
            for c in 0..n {
                if c != b && leq[a][c] && leq[c][b] {
                    sum += mu[a][c];
                }
            }
            mu[a][b] = -sum;
        }
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FgAbelianGroup;
    use crate::Int;

    fn group(free: usize, torsion: &[i64]) -> AbelianGroup {
        FgAbelianGroup::new(free, torsion.iter().map(|&e| Int::from(e)).collect()).unwrap()
    }

    #[test]
    fn example_counts() {
        let a = Arrangement::from_i64(2, &[], &[&[-1, 1], &[0, 2], &[0, 4]]).unwrap();
        assert_eq!(brute_complement_count(&a, 5).unwrap(), 16);
        assert_eq!(brute_complement_count(&a, 2).unwrap(), 0);
        assert_eq!(brute_complement_count(&a, 1).unwrap(), 0);
        let empty = Arrangement::from_i64(2, &[], &[]).unwrap();
        assert_eq!(brute_complement_count(&empty, 1).unwrap(), 1);
        assert_eq!(brute_complement_count(&empty, 3).unwrap(), 9);
    }

    #[test]
    fn torsion_generators_only_reach_their_multiples() {
        // Hom(Z/2, Z/4) = {0, 2}; A = {generator} leaves one.
        let a = Arrangement::from_i64(0, &[2], &[&[1]]).unwrap();
        assert_eq!(brute_complement_count(&a, 4).unwrap(), 1);
        assert_eq!(brute_complement_count(&a, 3).unwrap(), 0);
    }

    #[test]
    fn hom_counts() {
        assert_eq!(brute_hom_count(&group(0, &[4]), &group(0, &[6])).unwrap(), 2);
        assert_eq!(brute_hom_count(&group(0, &[]), &group(0, &[5])).unwrap(), 1);
        assert_eq!(brute_hom_count(&group(0, &[2, 2]), &group(0, &[2])).unwrap(), 4);
        assert_eq!(brute_hom_count(&group(1, &[]), &group(0, &[3])).unwrap(), 3);
        assert!(brute_hom_count(&group(0, &[2]), &group(1, &[])).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let a = Arrangement::from_i64(3, &[], &[&[1, 0, 0]]).unwrap();
        assert!(matches!(brute_complement_count(&a, 1000), Err(Error::CapExceeded { .. })));
    }

    fn boolean_lattice(k: usize) -> Vec<Vec<bool>> {
        let n = 1 << k;
        (0..n).map(|a| (0..n).map(|b| a & b == a).collect()).collect()
    }

    #[test]
    fn classical_mobius_values() {
        let chain = vec![vec![true, true, true], vec![false, true, true], vec![false, false, true]];
        assert_eq!(brute_mobius(&chain)[0], vec![1, -1, 0]);
        let diamond = boolean_lattice(2);
        assert_eq!(brute_mobius(&diamond)[0], vec![1, -1, -1, 1]);
        let b3 = boolean_lattice(3);
        let mu = brute_mobius(&b3);
        for (b, m) in mu[0].iter().enumerate() {
            let sign = if b.count_ones() % 2 == 1 { -1 } else { 1 };
            assert_eq!(*m, sign);
        }
    }
}
