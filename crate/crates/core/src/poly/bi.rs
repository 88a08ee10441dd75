use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::poly::UniPoly;
use crate::scalar::Coefficient;

/// Sparse polynomial in `x` and `y`, keyed by exponent pair `(i, j)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly<R> {
    terms: BTreeMap<(usize, usize), R>,
}

impl<R: Coefficient> BiPoly<R> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::term(R::one(), 0, 0)
    }

    /// `c * x^i * y^j`
    pub fn term(c: R, i: usize, j: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(c, i, j);
        p
    }

    pub fn x() -> Self {
        Self::term(R::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::term(R::one(), 0, 1)
    }

    /// `(x - 1)^a * (y - 1)^b`
    pub fn shifted_monomial(a: usize, b: usize) -> Self {
        let xm = &Self::x() - &Self::one();
        let ym = &Self::y() - &Self::one();
        &xm.pow(a) * &ym.pow(b)
    }

    pub fn from_triples(triples: impl IntoIterator<Item = (usize, usize, R)>) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in triples {
            p.add_term(c, i, j);
        }
        p
    }

    pub fn add_term(&mut self, c: R, i: usize, j: usize) {
        let sum = match self.terms.remove(&(i, j)) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert((i, j), sum);
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> R {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms as `(i, j, c)`, sorted lexicographically by `(i, j)`.
    pub fn triples(&self) -> Vec<(usize, usize, R)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c.clone())).collect()
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval<V>(&self, x: &V, y: &V) -> V
    where
        V: Coefficient + From<R>,
    {
        let pw = |base: &V, e: usize| (0..e).fold(V::one(), |a, _| a * base.clone());
        self.terms.iter().fold(V::zero(), |acc, (&(i, j), c)| acc + V::from(c.clone()) * pw(x, i) * pw(y, j))
    }

    /// Substitutes `x := 1 - t` and `y := 0`.
    pub fn substitute_one_minus_t_zero(&self) -> UniPoly<R> {
        let one_minus_t = UniPoly::from_coeffs(vec![R::one(), -R::one()]);
        let mut out = UniPoly::zero();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                continue;
            }
            out = &out + &(&UniPoly::constant(c.clone()) * &one_minus_t.pow(i));
        }
        out
    }
}

impl<R: Coefficient> Add for &BiPoly<R> {
    type Output = BiPoly<R>;
    fn add(self, rhs: &BiPoly<R>) -> BiPoly<R> {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(c.clone(), i, j);
        }
        out
    }
}

impl<R: Coefficient> Sub for &BiPoly<R> {
    type Output = BiPoly<R>;
    fn sub(self, rhs: &BiPoly<R>) -> BiPoly<R> {
        self + &(-rhs)
    }
}

impl<R: Coefficient> Neg for &BiPoly<R> {
    type Output = BiPoly<R>;
    fn neg(self) -> BiPoly<R> {
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }
}

impl<R: Coefficient> Mul for &BiPoly<R> {
    type Output = BiPoly<R>;
    fn mul(self, rhs: &BiPoly<R>) -> BiPoly<R> {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(a.clone() * b.clone(), i + k, j + l);
            }
        }
        out
    }
}

impl<R: Coefficient> Add for BiPoly<R> {
    type Output = BiPoly<R>;
    fn add(self, rhs: BiPoly<R>) -> BiPoly<R> {
        &self + &rhs
    }
}

impl<R: Coefficient> Mul for BiPoly<R> {
    type Output = BiPoly<R>;
    fn mul(self, rhs: BiPoly<R>) -> BiPoly<R> {
        &self * &rhs
    }
}

impl<R: fmt::Display + Coefficient> fmt::Display for BiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (&(i, j), c) in self.terms.iter().rev() {
            let var = |name: &str, e: usize| match e {
                0 => String::new(),
                1 => name.to_string(),
                _ => format!("{name}^{e}"),
            };
            let mono: Vec<String> = [var("x", i), var("y", j)].into_iter().filter(|s| !s.is_empty()).collect();
            let cs = c.to_string();
            let body = match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs.clone(),
                ("1", false) => mono.join("*"),
                ("-1", false) => format!("-{}", mono.join("*")),
                _ => format!("{cs}*{}", mono.join("*")),
            };
            parts.push(body);
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

impl<R: fmt::Display + Coefficient> fmt::Debug for BiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type B = BiPoly<i64>;

    #[test]
    fn expand_shifted_product() {
        let p = B::shifted_monomial(1, 1);
        assert_eq!(p, B::from_triples([(1, 1, 1), (1, 0, -1), (0, 1, -1), (0, 0, 1)]));
        assert_eq!(p.to_string(), "x*y - x - y + 1");
    }

    #[test]
    fn cancellation_keeps_form_canonical() {
        let p = B::from_triples([(2, 0, 3), (0, 1, 1)]);
        assert!((&p - &p).is_zero());
        assert!((&p + &(-&p)).triples().is_empty());
    }

    #[test]
    fn substitution() {
        assert_eq!(B::one().substitute_one_minus_t_zero(), UniPoly::one());
        assert_eq!(B::shifted_monomial(1, 0).substitute_one_minus_t_zero(), UniPoly::from_coeffs(vec![0, -1]));
        let t = &B::shifted_monomial(2, 0) + &B::shifted_monomial(1, 1);
        assert_eq!(t.substitute_one_minus_t_zero(), UniPoly::from_coeffs(vec![0, 1, 1]));
    }

    #[test]
    fn evaluation_matches_substitution() {
        let t = &B::shifted_monomial(2, 1) + &B::term(5, 1, 3);
        let u = t.substitute_one_minus_t_zero();
        for v in -3i64..=3 {
            assert_eq!(t.eval(&(1 - v), &0), u.eval(&v));
        }
    }
}
