//! Polynomial differential forms on a single simplex.
//!
//! A form on the standard `n`-simplex is written in the reduced barycentric
//! coordinates `t1..tn`; the remaining coordinate `t0 = 1 − Σ ti` is
//! eliminated, so the forms are a free graded-commutative algebra over
//! `F[t1..tn]` on `dt1..dtn` and every form has a unique normal form.

mod basis;
mod face;
mod integral;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::combinat::inversions;
use crate::error::{Error, Result};
use crate::scalar::{int, sign, Field};

pub use basis::{differential_matrix, monomial_basis, trimming_matrix, MonomialBasis};
pub use face::{pullback, pullback_matrix, FaceInclusion};
pub use integral::{integrate, integrate_monomial, whitney};

/// `t^exponents · dt_{dts[0]} ∧ dt_{dts[1]} ∧ …` with zero-based, strictly
/// increasing `dts` (`0` stands for `t1`).
///
/// The derived order is lexicographic in `(exponents, dts)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub dts: Vec<usize>,
}

impl Monomial {
    pub fn coeff_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn form_degree(&self) -> usize {
        self.dts.len()
    }
}

/// A polynomial `p`-form on the standard `n`-simplex.
#[derive(Clone, PartialEq)]
pub struct PolyForm<F> {
    n: usize,
    p: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> PolyForm<F> {
    pub fn zero(n: usize, p: usize) -> Self {
        PolyForm {
            n,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: F) -> Self {
        let mut f = Self::zero(n, 0);
        f.add_term(
            Monomial {
                exponents: vec![0; n],
                dts: vec![],
            },
            c,
        );
        f
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, F::one())
    }

    /// The reduced coordinate `t_i`, `1 ≤ i ≤ n`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        assert!(
            (1..=n).contains(&i),
            "coordinate t{i} does not exist on a {n}-simplex"
        );
        let mut exponents = vec![0; n];
        exponents[i - 1] = 1;
        let mut f = Self::zero(n, 0);
        f.add_term(
            Monomial {
                exponents,
                dts: vec![],
            },
            F::one(),
        );
        f
    }

    /// The one-form `dt_i`, `1 ≤ i ≤ n`.
    pub fn dt(n: usize, i: usize) -> Self {
        assert!(
            (1..=n).contains(&i),
            "dt{i} does not exist on a {n}-simplex"
        );
        let mut f = Self::zero(n, 1);
        f.add_term(
            Monomial {
                exponents: vec![0; n],
                dts: vec![i - 1],
            },
            F::one(),
        );
        f
    }

    /// Barycentric coordinate of vertex `i`, `0 ≤ i ≤ n`; `λ0 = 1 − Σ t_j`.
    pub fn barycentric(n: usize, i: usize) -> Self {
        assert!(i <= n, "vertex {i} does not exist on a {n}-simplex");
        if i > 0 {
            return Self::coordinate(n, i);
        }
        let mut f = Self::one(n);
        for j in 1..=n {
            f = &f - &Self::coordinate(n, j);
        }
        f
    }

    /// Validates a single monomial and wraps it as a form.
    pub fn monomial(n: usize, m: Monomial, c: F) -> Result<Self> {
        if m.exponents.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} exponents on a {n}-simplex",
                m.exponents.len()
            )));
        }
        if m.dts.windows(2).any(|w| w[0] >= w[1]) || m.dts.iter().any(|&i| i >= n) {
            return Err(Error::Parse(format!(
                "bad differential index list {:?}",
                m.dts
            )));
        }
        let mut f = Self::zero(n, m.dts.len());
        f.add_term(m, c);
        Ok(f)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: F) {
        debug_assert_eq!(m.dts.len(), self.p);
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn simplex_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Largest total polynomial degree among the terms (0 for the zero form).
    pub fn coeff_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::coeff_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.n, self.p);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    fn check_same_space(&self, other: &Self) {
        assert_eq!(
            (self.n, self.p),
            (other.n, other.p),
            "forms live in different spaces"
        );
    }

    /// Exterior product; signs come from sorting the concatenated `dt` lists.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "wedge of forms on a {}-simplex and a {}-simplex",
                self.n, other.n
            )));
        }
        let mut out = Self::zero(self.n, self.p + other.p);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.dts.iter().any(|i| mb.dts.contains(i)) {
                    continue;
                }
                let mut dts: Vec<usize> = ma.dts.iter().chain(&mb.dts).copied().collect();
                let s = sign::<F>(inversions(&dts));
                dts.sort_unstable();
                let exponents = ma
                    .exponents
                    .iter()
                    .zip(&mb.exponents)
                    .map(|(a, b)| a + b)
                    .collect();
                out.add_term(Monomial { exponents, dts }, s * ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// `self^k` for a zero-form.
    pub fn pow(&self, k: u32) -> Self {
        assert_eq!(self.p, 0, "powers are only taken of functions");
        (0..k).fold(Self::one(self.n), |acc, _| {
            acc.wedge(self).expect("same simplex")
        })
    }

    /// Exterior derivative. Lowers coefficient degree of every term by one.
    pub fn differential(&self) -> Self {
        let mut out = Self::zero(self.n, self.p + 1);
        for (m, c) in &self.terms {
            for i in 0..self.n {
                let a = m.exponents[i];
                if a == 0 || m.dts.contains(&i) {
                    continue;
                }
                let mut exponents = m.exponents.clone();
                exponents[i] -= 1;
                // moving dt_i past the smaller entries of dts
                let before = m.dts.iter().filter(|&&j| j < i).count();
                let mut dts = m.dts.clone();
                dts.insert(before, i);
                out.add_term(
                    Monomial { exponents, dts },
                    sign::<F>(before) * int::<F>(a as i64) * c.clone(),
                );
            }
        }
        out
    }

    /// Contraction with the radial field `Σ t_i ∂/∂t_i` (centred at vertex 0).
    pub fn radial_contraction(&self) -> Self {
        let mut out = Self::zero(self.n, self.p.saturating_sub(1));
        if self.p == 0 {
            return out;
        }
        for (m, c) in &self.terms {
            for (j, &i) in m.dts.iter().enumerate() {
                let mut exponents = m.exponents.clone();
                exponents[i] += 1;
                let mut dts = m.dts.clone();
                dts.remove(j);
                out.add_term(Monomial { exponents, dts }, sign::<F>(j) * c.clone());
            }
        }
        out
    }

    /// The terms of coefficient degree exactly `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        let mut out = Self::zero(self.n, self.p);
        for (m, c) in &self.terms {
            if m.coeff_degree() == deg {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Partial derivative `∂/∂t_i` of every coefficient, `1 ≤ i ≤ n`.
    pub fn partial(&self, i: usize) -> Self {
        assert!((1..=self.n).contains(&i), "no coordinate t{i}");
        let k = i - 1;
        let mut out = Self::zero(self.n, self.p);
        for (m, c) in &self.terms {
            let a = m.exponents[k];
            if a == 0 {
                continue;
            }
            let mut mono = m.clone();
            mono.exponents[k] -= 1;
            out.add_term(mono, int::<F>(a as i64) * c.clone());
        }
        out
    }

    /// Evaluates a zero-form at a point given in reduced coordinates.
    pub fn evaluate(&self, point: &[F]) -> F {
        assert_eq!(self.p, 0, "only functions can be evaluated at a point");
        assert_eq!(point.len(), self.n);
        self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            let mut v = c.clone();
            for (x, &a) in point.iter().zip(&m.exponents) {
                for _ in 0..a {
                    v = v * x.clone();
                }
            }
            acc + v
        })
    }

    /// Coefficient of `dt_{dts}` as a zero-form.
    pub fn component(&self, dts: &[usize]) -> Self {
        let mut out = Self::zero(self.n, 0);
        for (m, c) in &self.terms {
            if m.dts == dts {
                out.add_term(
                    Monomial {
                        exponents: m.exponents.clone(),
                        dts: vec![],
                    },
                    c.clone(),
                );
            }
        }
        out
    }
}

impl<F: Field> Add for &PolyForm<F> {
    type Output = PolyForm<F>;

    fn add(self, rhs: &PolyForm<F>) -> PolyForm<F> {
        self.check_same_space(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<F: Field> Sub for &PolyForm<F> {
    type Output = PolyForm<F>;

    fn sub(self, rhs: &PolyForm<F>) -> PolyForm<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Neg for &PolyForm<F> {
    type Output = PolyForm<F>;

    fn neg(self) -> PolyForm<F> {
        self.scale(&(-F::one()))
    }
}

impl<F: Field> fmt::Display for PolyForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mut factors: Vec<String> = Vec::new();
            for (i, &a) in m.exponents.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("t{}", i + 1)),
                    _ => factors.push(format!("t{}^{a}", i + 1)),
                }
            }
            if !m.dts.is_empty() {
                let dts: Vec<String> = m.dts.iter().map(|i| format!("dt{}", i + 1)).collect();
                factors.push(dts.join("∧"));
            }
            let mag = c.abs();
            if !mag.is_one() || factors.is_empty() {
                factors.insert(0, mag.to_string());
            }
            let body = factors.join("·");
            match (k, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for PolyForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyForm(n={}, p={}: {})", self.n, self.p, self)
    }
}


#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::strategies::*;
    use super::*;
    use crate::Q;

    type P = PolyForm<Q>;

    fn q(a: i64) -> Q {
        int(a)
    }

    #[test]
    fn wedge_examples() {
        let dt1 = P::dt(2, 1);
        let dt2 = P::dt(2, 2);
        assert!(dt1.wedge(&dt1).unwrap().is_zero());
        assert_eq!(dt1.wedge(&dt2).unwrap(), -&dt2.wedge(&dt1).unwrap());
        let t1dt1 = P::coordinate(2, 1).wedge(&dt1).unwrap();
        let lhs = t1dt1.wedge(&dt2).unwrap();
        let rhs = P::coordinate(2, 1)
            .wedge(&dt1.wedge(&dt2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "t1·dt1∧dt2");
        assert!(dt1.wedge(&P::dt(3, 1)).is_err());
    }

    #[test]
    fn differential_examples() {
        let t1 = P::coordinate(2, 1);
        let t2 = P::coordinate(2, 2);
        assert_eq!(t1.differential(), P::dt(2, 1));
        let prod = t1.wedge(&t2).unwrap();
        let expected = &t2.wedge(&P::dt(2, 1)).unwrap() + &t1.wedge(&P::dt(2, 2)).unwrap();
        assert_eq!(prod.differential(), expected);
        let f = t1.pow(2).wedge(&P::dt(2, 2)).unwrap();
        assert!(f.differential().differential().is_zero());
    }

    #[test]
    fn rendering() {
        let m = Monomial {
            exponents: vec![2, 0],
            dts: vec![1],
        };
        let f = P::monomial(2, m, Q::new(3.into(), 2.into())).unwrap();
        assert_eq!(f.to_string(), "3/2·t1^2·dt2");
        assert_eq!(P::barycentric(1, 0).to_string(), "1 - t1");
        assert_eq!(P::zero(2, 1).to_string(), "0");
        assert_eq!(P::constant(0, q(-2)).to_string(), "-2");
    }

    #[test]
    fn partials_and_evaluation() {
        let f = &P::coordinate(2, 1).pow(3) + &P::coordinate(2, 2);
        assert_eq!(f.partial(1), P::coordinate(2, 1).pow(2).scale(&q(3)));
        assert_eq!(f.evaluate(&[q(2), q(5)]), q(13));
    }

    #[test]
    fn bad_monomials_rejected() {
        let m = Monomial {
            exponents: vec![0, 0],
            dts: vec![1, 0],
        };
        assert!(P::monomial(2, m, q(1)).is_err());
        let m = Monomial {
            exponents: vec![0],
            dts: vec![],
        };
        assert!(P::monomial(2, m, q(1)).is_err());
    }

    #[test]
    fn radial_contraction_examples() {
        // ι_X dt1 = t1, ι_X (dt1∧dt2) = t1·dt2 − t2·dt1
        assert_eq!(P::dt(2, 1).radial_contraction(), P::coordinate(2, 1));
        let area = P::dt(2, 1).wedge(&P::dt(2, 2)).unwrap();
        let expected = &P::coordinate(2, 1).wedge(&P::dt(2, 2)).unwrap()
            - &P::coordinate(2, 2).wedge(&P::dt(2, 1)).unwrap();
        assert_eq!(area.radial_contraction(), expected);
        assert!(P::one(2).radial_contraction().is_zero());
    }

    proptest! {
        #[test]
        fn d_squared_vanishes(f in poly_form(3, 1, 4)) {
            prop_assert!(f.differential().differential().is_zero());
        }

        #[test]
        fn d_is_a_graded_derivation(a in poly_form(3, 1, 3), b in poly_form(3, 1, 3)) {
            let lhs = a.wedge(&b).unwrap().differential();
            let rhs = &a.differential().wedge(&b).unwrap() - &a.wedge(&b.differential()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn graded_commutativity(a in poly_form(3, 1, 2), b in poly_form(3, 2, 2)) {
            prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        }

        #[test]
        fn radial_contraction_squares_to_zero(f in poly_form(3, 2, 3)) {
            prop_assert!(f.radial_contraction().radial_contraction().is_zero());
        }

        #[test]
        fn cartan_formula_counts_total_degree(f in poly_form(3, 1, 3)) {
            // (dκ + κd) ω = (coefficient degree + form degree) ω on homogeneous pieces
            for deg in 0..=3u32 {
                let h = f.homogeneous_part(deg);
                let lhs = &h.radial_contraction().differential() + &h.differential().radial_contraction();
                prop_assert_eq!(lhs, h.scale(&int(deg as i64 + 1)));
            }
        }

        #[test]
        fn d_lowers_coefficient_degree(f in poly_form(2, 0, 4)) {
            let df = f.differential();
            prop_assert!(df.is_zero() || df.coeff_degree() < f.coeff_degree());
        }
    }
}
