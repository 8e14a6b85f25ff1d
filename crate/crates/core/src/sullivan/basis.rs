use std::collections::BTreeMap;

use super::{Monomial, PolyForm};
use crate::combinat::subsets;
use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::scalar::Field;

/// The monomial forms `t^a · dt_S` with `Σa ≤ cap` and `|S| = p`, sorted
/// lexicographically by `(a, S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    p: usize,
    cap: usize,
    monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

fn exponent_vectors(n: usize, cap: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for a in 0..=left {
            prefix.push(a);
            rec(n, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, cap as u32, &mut Vec::new(), &mut out);
    out
}

pub fn monomial_basis(n: usize, p: usize, cap: usize) -> MonomialBasis {
    let dt_sets = subsets(n, p);
    let mut monomials: Vec<Monomial> = Vec::new();
    for exponents in exponent_vectors(n, cap) {
        for dts in &dt_sets {
            monomials.push(Monomial {
                exponents: exponents.clone(),
                dts: dts.clone(),
            });
        }
    }
    monomials.sort();
    let index = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    MonomialBasis {
        n,
        p,
        cap,
        monomials,
        index,
    }
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn simplex_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn forms<F: Field>(&self) -> Vec<PolyForm<F>> {
        self.monomials
            .iter()
            .map(|m| PolyForm::monomial(self.n, m.clone(), F::one()).expect("valid monomial"))
            .collect()
    }

    /// Coordinates of `f`; fails if `f` has a term above the cap.
    pub fn coords<F: Field>(&self, f: &PolyForm<F>) -> Result<Vec<F>> {
        if f.simplex_dim() != self.n || f.degree() != self.p {
            return Err(Error::DimensionMismatch(format!(
                "{}-form on a {}-simplex vs basis of {}-forms on a {}-simplex",
                f.degree(),
                f.simplex_dim(),
                self.p,
                self.n
            )));
        }
        let mut v = vec![F::zero(); self.len()];
        for (m, c) in f.terms() {
            let i = self.index_of(m).ok_or_else(|| {
                Error::NotInSpan(format!(
                    "term {m:?} exceeds coefficient degree {}",
                    self.cap
                ))
            })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn form<F: Field>(&self, coords: &[F]) -> PolyForm<F> {
        assert_eq!(coords.len(), self.len());
        let mut f = PolyForm::zero(self.n, self.p);
        for (m, c) in self.monomials.iter().zip(coords) {
            f.add_term(m.clone(), c.clone());
        }
        f
    }
}

/// Matrix of `d` from `monomial_basis(n, p, cap)` to `monomial_basis(n, p+1, cap)`.
pub fn differential_matrix<F: Field>(n: usize, p: usize, cap: usize) -> Matrix<F> {
    let source = monomial_basis(n, p, cap);
    let target = monomial_basis(n, p + 1, cap);
    let mut m = Matrix::zeros(target.len(), source.len());
    for (c, f) in source.forms::<F>().iter().enumerate() {
        for (mono, v) in f.differential().terms() {
            let r = target.index_of(mono).expect("d preserves the cap");
            m.set(r, c, v.clone());
        }
    }
    m
}

/// Constraint cutting the trimmed space out of `monomial_basis(n, p, cap)`:
/// a form lies in the trimmed space iff the radial contraction of its
/// coefficient-degree-`cap` part vanishes. Rows index the monomials of
/// `(p−1)`-forms of coefficient degree `cap + 1`.
pub fn trimming_matrix<F: Field>(n: usize, p: usize, cap: usize) -> Matrix<F> {
    let source = monomial_basis(n, p, cap);
    if p == 0 {
        return Matrix::zeros(0, source.len());
    }
    let target = monomial_basis(n, p - 1, cap + 1);
    let mut m = Matrix::zeros(target.len(), source.len());
    for (c, mono) in source.monomials().iter().enumerate() {
        if mono.coeff_degree() as usize != cap {
            continue;
        }
        let f = PolyForm::<F>::monomial(n, mono.clone(), F::one()).expect("valid monomial");
        for (t, v) in f.radial_contraction().terms() {
            m.set(target.index_of(t).expect("degree cap + 1"), c, v.clone());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::binomial;
    use crate::Q;

    #[test]
    fn basis_examples() {
        let b = monomial_basis(1, 0, 2);
        let rendered: Vec<String> = b.forms::<Q>().iter().map(ToString::to_string).collect();
        assert_eq!(rendered, vec!["1", "t1", "t1^2"]);
        assert_eq!(monomial_basis(2, 1, 1).len(), 6);
        assert!(monomial_basis(2, 3, 4).is_empty());
    }

    #[test]
    fn basis_counts() {
        for n in 0..4 {
            for p in 0..=n + 1 {
                for cap in 0..4 {
                    assert_eq!(
                        monomial_basis(n, p, cap).len(),
                        binomial(n + cap, cap) * binomial(n, p),
                        "n={n} p={p} cap={cap}"
                    );
                }
            }
        }
    }

    #[test]
    fn basis_is_sorted_and_unique() {
        let b = monomial_basis(3, 2, 2);
        assert!(b.monomials().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn coords_round_trip_and_cap() {
        let b = monomial_basis(2, 1, 1);
        let f = PolyForm::<Q>::coordinate(2, 2)
            .wedge(&PolyForm::dt(2, 1))
            .unwrap();
        let v = b.coords(&f).unwrap();
        assert_eq!(b.form(&v), f);
        let too_big = PolyForm::<Q>::coordinate(2, 2)
            .pow(2)
            .wedge(&PolyForm::dt(2, 1))
            .unwrap();
        assert!(b.coords(&too_big).is_err());
    }

    #[test]
    fn trimmed_dimensions() {
        // dim = C(r+n, r+k)·C(r+k−1, k) for r ≥ 1
        for n in 0..4 {
            for k in 0..=n {
                for r in 1..4 {
                    let full = monomial_basis(n, k, r).len();
                    let rank = crate::exactla::rank(&trimming_matrix::<Q>(n, k, r));
                    assert_eq!(
                        full - rank,
                        binomial(r + n, r + k) * binomial(r + k - 1, k),
                        "n={n} k={k} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn differential_matrices_compose_to_zero() {
        for n in 0..4 {
            for p in 0..n {
                let d0 = differential_matrix::<Q>(n, p, 3);
                let d1 = differential_matrix::<Q>(n, p + 1, 3);
                assert!((&d1 * &d0).is_zero());
            }
        }
    }
}
