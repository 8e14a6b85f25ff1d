//! Finite-dimensional Lie algebras over a field and their
//! Chevalley–Eilenberg complex `Λ* g*` with trivial coefficients.
//!
//! Cochains are evaluated with the determinant convention:
//! `(e^{j1} ∧ … ∧ e^{jq})(x_{j1}, …, x_{jq}) = 1`, no `1/q!`.

use std::collections::BTreeMap;

use crate::combinat::{binomial, subsets};
use crate::error::{Error, Result};
use crate::exactla::{BettiTable, FiniteComplex, Matrix};
use crate::scalar::{int, sign, Field};

/// Structure constants `[x_i, x_j] = Σ_k c(i,j,k) x_k`, stored for `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<F> {
    dim: usize,
    brackets: BTreeMap<(usize, usize), Vec<F>>,
}

impl<F: Field> LieAlgebra<F> {
    /// The abelian algebra; also the starting point for [`set_bracket`](Self::set_bracket).
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            brackets: BTreeMap::new(),
        }
    }

    /// Basis `(h, e, f)` with `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        let mut g = Self::abelian(3);
        g.set_bracket(0, 1, vec![int(0), int(2), int(0)]).unwrap();
        g.set_bracket(0, 2, vec![int(0), int(0), int(-2)]).unwrap();
        g.set_bracket(1, 2, vec![int(1), int(0), int(0)]).unwrap();
        g
    }

    /// The Heisenberg algebra: `[x0, x1] = x2`.
    pub fn heisenberg() -> Self {
        let mut g = Self::abelian(3);
        g.set_bracket(0, 1, vec![int(0), int(0), int(1)]).unwrap();
        g
    }

    /// Sets `[x_i, x_j]`; for `i > j` the antisymmetric partner is stored.
    pub fn set_bracket(&mut self, i: usize, j: usize, coeffs: Vec<F>) -> Result<()> {
        if i >= self.dim || j >= self.dim || coeffs.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "bracket [{i},{j}] with {} coefficients in a {}-dimensional algebra",
                coeffs.len(),
                self.dim
            )));
        }
        if i == j {
            return if coeffs.iter().all(|c| c.is_zero()) {
                Ok(())
            } else {
                Err(Error::Parse(format!("[x{i}, x{i}] must vanish")))
            };
        }
        let (key, coeffs) = if i < j {
            ((i, j), coeffs)
        } else {
            ((j, i), coeffs.into_iter().map(|c| -c).collect())
        };
        if coeffs.iter().all(|c| c.is_zero()) {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, coeffs);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero brackets `(i, j, coefficients)` with `i < j`.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, &[F])> {
        self.brackets
            .iter()
            .map(|(&(i, j), c)| (i, j, c.as_slice()))
    }

    /// Coefficients of `[x_i, x_j]` for any pair.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<F> {
        let zero = || vec![F::zero(); self.dim];
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => zero(),
            std::cmp::Ordering::Less => self.brackets.get(&(i, j)).cloned().unwrap_or_else(zero),
            std::cmp::Ordering::Greater => self
                .brackets
                .get(&(j, i))
                .map(|c| c.iter().map(|x| -x.clone()).collect())
                .unwrap_or_else(zero),
        }
    }

    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![F::zero(); self.dim];
        for (i, j, c) in self.structure_constants() {
            let w = x[i].clone() * y[j].clone() - x[j].clone() * y[i].clone();
            if w.is_zero() {
                continue;
            }
            for (o, ck) in out.iter_mut().zip(c) {
                *o = o.clone() + w.clone() * ck.clone();
            }
        }
        out
    }

    fn basis_vector(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim];
        v[i] = F::one();
        v
    }

    /// First triple `i < j < k` on which the Jacobi identity fails.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let m = self.dim;
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let (xi, xj, xk) = (
                        self.basis_vector(i),
                        self.basis_vector(j),
                        self.basis_vector(k),
                    );
                    let a = self.bracket(&self.bracket(&xi, &xj), &xk);
                    let b = self.bracket(&self.bracket(&xj, &xk), &xi);
                    let c = self.bracket(&self.bracket(&xk, &xi), &xj);
                    if a.iter()
                        .zip(&b)
                        .zip(&c)
                        .any(|((a, b), c)| !(a.clone() + b.clone() + c.clone()).is_zero())
                    {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn validate(&self) -> Result<()> {
        match self.jacobi_violation() {
            Some((i, j, k)) => Err(Error::JacobiViolation(i, j, k)),
            None => Ok(()),
        }
    }
}

/// Matrix of `d: Λ^q g* → Λ^{q+1} g*` in lexicographic subset bases.
pub fn ce_differential<F: Field>(g: &LieAlgebra<F>, q: usize) -> Result<Matrix<F>> {
    g.validate()?;
    Ok(ce_differential_unchecked(g, q))
}

/// [`ce_differential`] without the Jacobi check; `d∘d` may then fail to vanish.
pub fn ce_differential_unchecked<F: Field>(g: &LieAlgebra<F>, q: usize) -> Matrix<F> {
    let m = g.dim();
    let rows = subsets(m, q + 1);
    let cols = subsets(m, q);
    let col_index: BTreeMap<&Vec<usize>, usize> =
        cols.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut d = Matrix::zeros(rows.len(), cols.len());
    // (dω)(x_{i_0},…,x_{i_q}) = Σ_{a<b} (−1)^{a+b} ω([x_{i_a}, x_{i_b}], x_{i_0}, …, x̂, …, x̂, …)
    for (r, subset) in rows.iter().enumerate() {
        for a in 0..subset.len() {
            for b in a + 1..subset.len() {
                let c = g.bracket_basis(subset[a], subset[b]);
                let rest: Vec<usize> = subset
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != a && t != b)
                    .map(|(_, &v)| v)
                    .collect();
                for (k, ck) in c.iter().enumerate() {
                    if ck.is_zero() || rest.contains(&k) {
                        continue;
                    }
                    // ω(x_k, rest…) = ± ω on the sorted set
                    let before = rest.iter().filter(|&&v| v < k).count();
                    let mut target = rest.clone();
                    target.insert(before, k);
                    let col = col_index[&target];
                    d.add_to(r, col, sign::<F>(a + b + before) * ck.clone());
                }
            }
        }
    }
    d
}

/// The full CE complex in degrees `0..=dim g`.
pub fn ce_complex<F: Field>(g: &LieAlgebra<F>) -> Result<FiniteComplex<F>> {
    g.validate()?;
    Ok(ce_complex_unchecked(g))
}

pub fn ce_complex_unchecked<F: Field>(g: &LieAlgebra<F>) -> FiniteComplex<F> {
    let m = g.dim();
    let dims = (0..=m).map(|q| binomial(m, q)).collect();
    let diffs = (0..m).map(|q| ce_differential_unchecked(g, q)).collect();
    FiniteComplex::new(dims, diffs).expect("shapes agree by construction")
}

pub fn ce_betti<F: Field>(g: &LieAlgebra<F>) -> Result<BettiTable> {
    ce_complex(g)?.betti()
}

/// An element of `Λ^q g*`, keyed by increasing index subsets.
#[derive(Clone, Debug, PartialEq)]
pub struct CEElement<F> {
    degree: usize,
    values: BTreeMap<Vec<usize>, F>,
}

impl<F: Field> CEElement<F> {
    pub fn zero(degree: usize) -> Self {
        CEElement {
            degree,
            values: BTreeMap::new(),
        }
    }

    /// The basis covector `e^{subset}`.
    pub fn basis(subset: Vec<usize>) -> Result<Self> {
        if subset.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!("{subset:?} is not increasing")));
        }
        let mut e = Self::zero(subset.len());
        e.values.insert(subset, F::one());
        Ok(e)
    }

    /// From coordinates in the lexicographic basis of `Λ^q` of an `m`-dimensional space.
    pub fn from_coords(m: usize, degree: usize, coords: &[F]) -> Self {
        let subs = subsets(m, degree);
        assert_eq!(coords.len(), subs.len());
        CEElement {
            degree,
            values: subs
                .into_iter()
                .zip(coords)
                .filter(|(_, c)| !c.is_zero())
                .map(|(s, c)| (s, c.clone()))
                .collect(),
        }
    }

    pub fn coords(&self, m: usize) -> Vec<F> {
        subsets(m, self.degree)
            .iter()
            .map(|s| self.values.get(s).cloned().unwrap_or_else(F::zero))
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> impl Iterator<Item = (&Vec<usize>, &F)> {
        self.values.iter()
    }

    /// `ω(y_1, …, y_q) = Σ_J ω_J det[y_a(J_b)]`.
    pub fn evaluate(&self, args: &[Vec<F>]) -> F {
        assert_eq!(args.len(), self.degree, "wrong number of arguments");
        let mut total = F::zero();
        for (subset, w) in &self.values {
            let rows: Vec<Vec<F>> = args
                .iter()
                .map(|y| subset.iter().map(|&j| y[j].clone()).collect())
                .collect();
            total = total + w.clone() * determinant(rows);
        }
        total
    }

    pub fn differential(&self, g: &LieAlgebra<F>) -> Result<Self> {
        let d = ce_differential(g, self.degree)?;
        Ok(Self::from_coords(
            g.dim(),
            self.degree + 1,
            &d.apply(&self.coords(g.dim())),
        ))
    }
}

/// Determinant by cofactor expansion; only used on tiny matrices.
fn determinant<F: Field>(rows: Vec<Vec<F>>) -> F {
    let n = rows.len();
    if n == 0 {
        return F::one();
    }
    let mut total = F::zero();
    for c in 0..n {
        if rows[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<F>> = rows[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        total = total + sign::<F>(c) * rows[0][c].clone() * determinant(minor);
    }
    total
}
