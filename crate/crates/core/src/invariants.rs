//! Closed-form invariants computed as subset sums: G-Tutte and arithmetic
//! Tutte polynomials, G-characteristic polynomials and the chromatic
//! quasi-polynomial with all of its constituents.

use std::collections::BTreeMap;

use num_integer::{binomial, Integer};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::arrangement::{multiplicity, Arrangement, GroupSpec};
use crate::error::{Error, Result};
use crate::linalg::{hom_enumerate, FgAbelianGroup, IntegerMatrix};
use crate::poly::{BiPoly, UniPoly};
use crate::{Int, Poly, TuttePoly};

/// Largest period for which the full list of constituents is materialized.
pub const MAX_PERIOD: u64 = 1 << 16;

/// Positive divisors of `n >= 1`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A quasi-polynomial whose constituent `f^k` depends only on `gcd(k, ρ)`.
///
/// One polynomial is stored per divisor of the period `ρ`, so very large
/// periods stay cheap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuasiPolynomial {
    period: u64,
    classes: BTreeMap<u64, Poly>,
}

impl QuasiPolynomial {
    /// From one polynomial per divisor of `period`.
    pub fn from_classes(period: u64, classes: BTreeMap<u64, Poly>) -> Result<Self> {
        if period == 0 || classes.keys().copied().ne(divisors(period)) {
            return Err(Error::InvalidArgument(format!("classes must be keyed by the divisors of {period}")));
        }
        Ok(Self { period, classes })
    }

    /// From the full list `f^1, ..., f^ρ`, which must depend on `gcd(k, ρ)` only.
    pub fn new(period: u64, constituents: Vec<Poly>) -> Result<Self> {
        if period == 0 || constituents.len() as u64 != period {
            return Err(Error::InvalidArgument(format!(
                "period {period} needs exactly {period} constituents, got {}",
                constituents.len()
            )));
        }
        for (i, f) in constituents.iter().enumerate() {
            let k = i as u64 + 1;
            if *f != constituents[(k.gcd(&period) - 1) as usize] {
                return Err(Error::InvalidArgument(format!(
                    "constituent {k} differs from constituent gcd({k}, {period})"
                )));
            }
        }
        let classes = divisors(period).into_iter().map(|d| (d, constituents[(d - 1) as usize].clone())).collect();
        Ok(Self { period, classes })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// `f^d` for every divisor `d` of the period.
    pub fn classes(&self) -> &BTreeMap<u64, Poly> {
        &self.classes
    }

    /// `f^1, ..., f^ρ` in order.
    pub fn constituents(&self) -> Result<Vec<Poly>> {
        if self.period > MAX_PERIOD {
            return Err(Error::CapExceeded {
                what: format!("listing {} constituents", self.period),
                limit: MAX_PERIOD,
            });
        }
        Ok((1..=self.period).map(|k| self.constituent(k).clone()).collect())
    }

    /// `f^k` for `k >= 1`.
    pub fn constituent(&self, k: u64) -> &Poly {
        assert!(k >= 1, "constituents are indexed from 1");
        &self.classes[&k.gcd(&self.period)]
    }

    pub fn eval(&self, q: u64) -> Int {
        self.constituent(q).eval(&Int::from(q))
    }

    /// Smallest divisor `d` of the period with `f^k = f^{k+d}` for all `k`.
    pub fn minimal_period(&self) -> u64 {
        // With gcd-dependence, d is a period iff f^c = f^{gcd(c, d)} for every divisor c.
        self.classes
            .keys()
            .copied()
            .find(|&d| self.classes.iter().all(|(c, f)| *f == self.classes[&c.gcd(&d)]))
            .unwrap_or(self.period)
    }

    /// `β_j(q) = (-1)^{r_Γ - j} [t^j] f^q`, for `j = 0..=r_gamma`.
    pub fn beta(&self, q: u64, r_gamma: usize) -> Result<Vec<Int>> {
        if q == 0 {
            return Err(Error::InvalidArgument("q must be positive".into()));
        }
        let f = self.constituent(q);
        let betas: Vec<Int> = (0..=r_gamma)
            .map(|j| {
                let c = f.coeff(j);
                if (r_gamma - j) % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        if let Some((j, b)) = betas.iter().enumerate().find(|(_, b)| b.is_negative()) {
            return Err(Error::InvariantViolation(format!("beta_{j}({q}) = {b} is negative")));
        }
        Ok(betas)
    }
}

/// `T_A^G(x, y) = Σ_S m(S;G) (x-1)^{r_A - r_S} (y-1)^{#S - r_S}`
pub fn g_tutte(arr: &Arrangement, spec: &GroupSpec) -> TuttePoly {
    let r_a = arr.rank();
    let mut shifted: BTreeMap<(usize, usize), Int> = BTreeMap::new();
    for s in arr.subsets() {
        let data = arr.subset_data(s);
        let m = multiplicity(&data, spec);
        *shifted.entry((r_a - data.rank, s.len() - data.rank)).or_insert_with(Int::zero) += m;
    }
    let mut out = BiPoly::zero();
    for ((a, b), c) in shifted {
        for i in 0..=a {
            let ci = binomial(Int::from(a), Int::from(i));
            let ci = if (a - i) % 2 == 1 { -ci } else { ci };
            for j in 0..=b {
                let cj = binomial(Int::from(b), Int::from(j));
                let cj = if (b - j) % 2 == 1 { -cj } else { cj };
                out.add_term(&c * &ci * cj, i, j);
            }
        }
    }
    out
}

/// The arithmetic Tutte polynomial, i.e. [`g_tutte`] with `G = S^1`.
pub fn arithmetic_tutte(arr: &Arrangement) -> TuttePoly {
    g_tutte(arr, &GroupSpec::circle())
}

/// `(-1)^{r_A} t^{r_Γ - r_A} T(1 - t, 0)` for a bivariate Tutte-type polynomial.
pub fn tutte_to_characteristic(arr: &Arrangement, tutte: &TuttePoly) -> Poly {
    let r_a = arr.rank();
    let sub = tutte.substitute_one_minus_t_zero();
    let sub = if r_a % 2 == 1 { -sub } else { sub };
    &sub * &UniPoly::monomial(Int::one(), arr.rank_gamma() - r_a)
}

/// `χ_A^G(t)` through the G-Tutte polynomial.
///
/// The coefficient of `t^{r_Γ}` is checked against an independent count
/// of `M(A^tor; Γ_tor, G)`.
pub fn g_characteristic(arr: &Arrangement, spec: &GroupSpec) -> Result<Poly> {
    let chi = tutte_to_characteristic(arr, &g_tutte(arr, spec));
    let r = arr.rank_gamma();
    if chi.degree().is_some_and(|d| d > r) {
        return Err(Error::InvariantViolation(format!("degree of {chi} exceeds r_Γ = {r}")));
    }
    let expected = torsion_complement_count(arr, spec)?;
    if chi.coeff(r) != expected {
        return Err(Error::InvariantViolation(format!(
            "coefficient of t^{r} in {chi} is {}, but #M(A^tor; Γ_tor, {spec}) = {expected}",
            chi.coeff(r)
        )));
    }
    Ok(chi)
}

/// `Σ_S (-1)^{#S} m(S;G) t^{r_Γ - r_S}`, the same polynomial as
/// [`g_characteristic`] expanded directly over subsets.
pub fn characteristic_by_subsets(arr: &Arrangement, spec: &GroupSpec) -> Poly {
    let r = arr.rank_gamma();
    let mut coeffs = vec![Int::zero(); r + 1];
    for s in arr.subsets() {
        let data = arr.subset_data(s);
        let m = multiplicity(&data, spec);
        let slot = &mut coeffs[r - data.rank];
        if s.len() % 2 == 1 {
            *slot -= m;
        } else {
            *slot += m;
        }
    }
    UniPoly::from_coeffs(coeffs)
}

/// `#M(A^tor; Γ_tor, G)`, counted over `Hom(Γ_tor, G)`.
///
/// Homomorphisms from `Γ_tor` into a circle land in the `N`-torsion with
/// `N` the exponent of `Γ_tor`, so `G` is replaced by `F × (Z/N)^p`.
pub fn torsion_complement_count(arr: &Arrangement, spec: &GroupSpec) -> Result<Int> {
    let gamma = arr.gamma();
    let tor = FgAbelianGroup::new(0, gamma.torsion().to_vec())?;
    let n = gamma.exponent();
    let mut orders = spec.f_torsion().to_vec();
    if !n.is_one() {
        orders.extend(std::iter::repeat_n(n, spec.p()));
    }
    let target = FgAbelianGroup::from_cyclic_orders(0, &orders)?;
    let s = tor.generator_count();
    let homs = hom_enumerate(&IntegerMatrix::zeros(0, s), &tor, &target)?;
    let tor_elements: Vec<Vec<Int>> =
        arr.torsion_sublist().indices().map(|i| arr.elements()[i][gamma.free_rank()..].to_vec()).collect();
    let count = homs
        .iter()
        .filter(|h| tor_elements.iter().all(|a| h.evaluate(a, &target).iter().any(|x| !x.is_zero())))
        .count();
    Ok(Int::from(count))
}

/// The chromatic quasi-polynomial with period `ρ_A`; constituent `k` is
/// the `Z/kZ`-characteristic polynomial, which only sees `gcd(k, ρ_A)`.
pub fn chromatic_quasi(arr: &Arrangement) -> Result<QuasiPolynomial> {
    let rho = arr.lcm_period();
    let period =
        rho.to_u64().ok_or_else(|| Error::CapExceeded { what: format!("LCM-period {rho}"), limit: u64::MAX })?;
    let classes = divisors(period)
        .into_iter()
        .map(|d| Ok((d, characteristic_by_subsets(arr, &GroupSpec::cyclic(d)?))))
        .collect::<Result<BTreeMap<_, _>>>()?;
    QuasiPolynomial::from_classes(period, classes)
}

/// `f^1_A`: zero when `A^tor` is nonempty, otherwise the characteristic
/// polynomial of the real arrangement.
pub fn first_constituent(arr: &Arrangement) -> Poly {
    characteristic_by_subsets(arr, &GroupSpec::cyclic(1).expect("1 is positive"))
}

/// The toric characteristic polynomial through the arithmetic Tutte
/// polynomial, checked against the last constituent.
///
/// Requires `Γ` free and `0 ∉ A`.
pub fn toric_characteristic(arr: &Arrangement) -> Result<Poly> {
    if !arr.gamma().torsion().is_empty() {
        return Err(Error::Hypothesis(format!("Γ = {} is not free", arr.gamma())));
    }
    if arr.contains_zero() {
        return Err(Error::Hypothesis("0 is an element of A".into()));
    }
    let chi = tutte_to_characteristic(arr, &arithmetic_tutte(arr));
    let qp = chromatic_quasi(arr)?;
    let last = qp.constituent(qp.period());
    if *last != chi {
        return Err(Error::InvariantViolation(format!(
            "arithmetic Tutte specialization {chi} differs from last constituent {last}"
        )));
    }
    Ok(chi)
}

pub fn beta_coefficients(arr: &Arrangement, q: u64) -> Result<Vec<Int>> {
    chromatic_quasi(arr)?.beta(q, arr.rank_gamma())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaComparison {
    pub j: usize,
    pub at_a: Int,
    pub at_b: Int,
    pub holds: bool,
}

/// Compares `β_j(a) <= β_j(b)` for every `j`, given `a | b`.
pub fn compare_betas(arr: &Arrangement, a: u64, b: u64) -> Result<Vec<BetaComparison>> {
    compare_betas_with(&chromatic_quasi(arr)?, arr.rank_gamma(), a, b)
}

pub fn compare_betas_with(qp: &QuasiPolynomial, r_gamma: usize, a: u64, b: u64) -> Result<Vec<BetaComparison>> {
    if a == 0 || b == 0 || !b.is_multiple_of(a) {
        return Err(Error::InvalidArgument(format!("{a} does not divide {b}")));
    }
    let ba = qp.beta(a, r_gamma)?;
    let bb = qp.beta(b, r_gamma)?;
    Ok(ba
        .into_iter()
        .zip(bb)
        .enumerate()
        .map(|(j, (x, y))| BetaComparison { j, holds: x <= y, at_a: x, at_b: y })
        .collect())
}

/// `(-1)^{r_Γ} f^k(-q)`, required to be nonnegative.
pub fn reciprocity_eval(arr: &Arrangement, k: u64, q: u64) -> Result<Int> {
    reciprocity_eval_with(&chromatic_quasi(arr)?, arr.rank_gamma(), k, q)
}

pub fn reciprocity_eval_with(qp: &QuasiPolynomial, r_gamma: usize, k: u64, q: u64) -> Result<Int> {
    if k == 0 || q == 0 {
        return Err(Error::InvalidArgument("k and q must be positive".into()));
    }
    let v = qp.constituent(k).eval(&-Int::from(q));
    let v = if r_gamma % 2 == 1 { -v } else { v };
    if v.is_negative() {
        return Err(Error::InvariantViolation(format!("(-1)^r f^{k}(-{q}) = {v} is negative")));
    }
    Ok(v)
}

/// Value of the leading term of `χ_A^G` at `#F`: the number of components
/// of the total group that avoid every torsion hyperplane.
pub fn leading_part(arr: &Arrangement, spec: &GroupSpec) -> Result<Int> {
    let chi = g_characteristic(arr, spec)?;
    let r = arr.rank_gamma();
    Ok(chi.coeff(r) * Pow::pow(spec.finite_order(), r as u32))
}

/// Minimal period of a quasi-polynomial, dividing its stored period.
pub fn minimal_period(qp: &QuasiPolynomial) -> u64 {
    qp.minimal_period()
}
