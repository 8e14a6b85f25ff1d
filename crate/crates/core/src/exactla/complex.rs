use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{elim, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Cohomology dimensions indexed by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiTable(pub Vec<usize>);

impl BettiTable {
    pub fn new(dims: Vec<usize>) -> Self {
        BettiTable(dims)
    }

    /// Entry `p`, zero beyond the stored range.
    pub fn get(&self, p: usize) -> usize {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Pads with zeros or cuts to exactly `len` entries.
    pub fn resized(&self, len: usize) -> Self {
        BettiTable((0..len).map(|p| self.get(p)).collect())
    }

    /// Betti numbers of a tensor product of complexes, first `len` degrees.
    pub fn convolve(&self, other: &BettiTable, len: usize) -> Self {
        BettiTable(
            (0..len)
                .map(|r| (0..=r).map(|p| self.get(p) * other.get(r - p)).sum())
                .collect(),
        )
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A cochain complex `C^0 → C^1 → … → C^N → 0` of finite-dimensional spaces.
#[derive(Clone, Debug)]
pub struct FiniteComplex<F> {
    dims: Vec<usize>,
    diffs: Vec<Matrix<F>>,
}

impl<F: Field> FiniteComplex<F> {
    /// `diffs[p]` maps degree `p` to `p + 1` and must be `dims[p+1] × dims[p]`.
    /// The differential out of the last degree is zero.
    pub fn new(dims: Vec<usize>, diffs: Vec<Matrix<F>>) -> Result<Self> {
        if diffs.len() + 1 != dims.len() && !(dims.is_empty() && diffs.is_empty()) {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (p, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[p + 1], dims[p]) {
                return Err(Error::DimensionMismatch(format!(
                    "differential in degree {p} is {}x{}, expected {}x{}",
                    d.nrows(),
                    d.ncols(),
                    dims[p + 1],
                    dims[p]
                )));
            }
        }
        Ok(FiniteComplex { dims, diffs })
    }

    pub fn num_degrees(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, p: usize) -> usize {
        self.dims.get(p).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// The differential out of degree `p` (a zero matrix past the top).
    pub fn differential(&self, p: usize) -> Matrix<F> {
        match self.diffs.get(p) {
            Some(d) => d.clone(),
            None => Matrix::zeros(self.dim(p + 1), self.dim(p)),
        }
    }

    /// The differential into degree `p` (zero for `p = 0`).
    pub fn incoming(&self, p: usize) -> Matrix<F> {
        if p == 0 {
            Matrix::zeros(self.dim(0), 0)
        } else {
            self.differential(p - 1)
        }
    }

    /// First degree `p` with `d(p+1)·d(p) ≠ 0`, if any.
    pub fn d_squared_failure(&self) -> Option<usize> {
        (0..self.diffs.len().saturating_sub(1))
            .into_par_iter()
            .filter(|&p| !(&self.diffs[p + 1] * &self.diffs[p]).is_zero())
            .min()
    }

    pub fn check_d_squared(&self) -> Result<()> {
        match self.d_squared_failure() {
            Some(degree) => Err(Error::NotACochainComplex { degree }),
            None => Ok(()),
        }
    }

    /// Ranks of the differentials, one per degree.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks: Vec<usize> = self.diffs.par_iter().map(elim::rank).collect();
        ranks.resize(self.dims.len(), 0);
        ranks
    }

    /// `b_p = dim C^p − rank d(p) − rank d(p−1)`; refuses when `d∘d ≠ 0`.
    pub fn betti(&self) -> Result<BettiTable> {
        self.check_d_squared()?;
        let ranks = self.ranks();
        Ok(BettiTable(
            (0..self.dims.len())
                .map(|p| self.dims[p] - ranks[p] - if p > 0 { ranks[p - 1] } else { 0 })
                .collect(),
        ))
    }
}

/// A chosen basis of `H^p = Z^p / B^p` given by cocycle representatives.
#[derive(Clone, Debug)]
pub struct CohomologyBasis<F> {
    pub representatives: Vec<Vec<F>>,
    coboundaries: Matrix<F>,
    /// `[representatives | coboundaries]`, used to read off classes.
    system: Matrix<F>,
}

impl<F: Field> CohomologyBasis<F> {
    /// Representatives are picked greedily from the kernel basis of `d_out`,
    /// keeping a vector only when it is independent of `im d_in` plus the
    /// previously kept ones.
    pub fn new(d_in: &Matrix<F>, d_out: &Matrix<F>) -> Self {
        let n = d_out.ncols();
        assert_eq!(
            d_in.nrows(),
            n,
            "incoming differential has the wrong height"
        );
        let mut span = d_in.clone();
        let mut current = elim::rank(&span);
        let mut representatives = Vec::new();
        for z in elim::kernel_basis(d_out) {
            let candidate =
                Matrix::hstack(&[&span, &Matrix::from_columns(n, std::slice::from_ref(&z))]);
            let r = elim::rank(&candidate);
            if r > current {
                current = r;
                span = candidate;
                representatives.push(z);
            }
        }
        let reps = Matrix::from_columns(n, &representatives);
        let system = Matrix::hstack(&[&reps, d_in]);
        CohomologyBasis {
            representatives,
            coboundaries: d_in.clone(),
            system,
        }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn coboundaries(&self) -> &Matrix<F> {
        &self.coboundaries
    }

    /// Coordinates of the class of cocycle `z`; errors when `z` is not a cocycle.
    pub fn class_of(&self, z: &[F]) -> Result<Vec<F>> {
        let x = elim::solve(&self.system, z)
            .ok_or_else(|| Error::NotInSpan("vector is not a cocycle".into()))?;
        Ok(x[..self.dim()].to_vec())
    }

    /// Class coordinates of every column of `cocycles`, as a matrix.
    pub fn classes_of(&self, cocycles: &Matrix<F>) -> Result<Matrix<F>> {
        let x = elim::solve_many(&self.system, cocycles)
            .ok_or_else(|| Error::NotInSpan("column is not a cocycle".into()))?;
        let top: Vec<usize> = (0..self.dim()).collect();
        let mut out = Matrix::zeros(self.dim(), cocycles.ncols());
        for &r in &top {
            for (&c, v) in x.row(r) {
                out.set(r, c, v.clone());
            }
        }
        Ok(out)
    }
}

/// Rank of the map on cohomology induced by a cochain map `f`.
///
/// `source_cocycles` spans `Z(source)`; `target_coboundaries` spans
/// `B(target)`. The result is `dim(f(Z) + B) − dim B`.
pub fn induced_rank<F: Field>(
    f: &Matrix<F>,
    source_cocycles: &Matrix<F>,
    target_coboundaries: &Matrix<F>,
) -> usize {
    let image = f * source_cocycles;
    let joint = Matrix::hstack(&[&image, target_coboundaries]);
    elim::rank(&joint) - elim::rank(target_coboundaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::Q;
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        let dense: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        Matrix::from_dense(&dense).unwrap()
    }

    #[test]
    fn point_complex() {
        let c = FiniteComplex::<Q>::new(vec![1], vec![]).unwrap();
        assert_eq!(c.betti().unwrap(), BettiTable(vec![1]));
    }

    #[test]
    fn identity_differential_is_acyclic() {
        let c = FiniteComplex::new(vec![1, 1], vec![Matrix::<Q>::identity(1)]).unwrap();
        assert_eq!(c.betti().unwrap(), BettiTable(vec![0, 0]));
    }

    #[test]
    fn boundary_of_triangle_by_hand() {
        // vertices 0,1,2; edges 01,02,12; rows edges, columns vertices
        let d0 = m(&[&[-1, 1, 0], &[-1, 0, 1], &[0, -1, 1]]);
        let c = FiniteComplex::new(vec![3, 3], vec![d0]).unwrap();
        assert_eq!(c.betti().unwrap(), BettiTable(vec![1, 1]));
    }

    #[test]
    fn refuses_non_complex() {
        let c = FiniteComplex::new(
            vec![1, 1, 1],
            vec![Matrix::<Q>::identity(1), Matrix::identity(1)],
        )
        .unwrap();
        assert_eq!(c.betti(), Err(Error::NotACochainComplex { degree: 0 }));
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(FiniteComplex::new(vec![2, 1], vec![Matrix::<Q>::identity(2)]).is_err());
        assert!(FiniteComplex::<Q>::new(vec![2, 1], vec![]).is_err());
    }

    #[test]
    fn convolution() {
        let a = BettiTable(vec![1, 1]);
        let b = BettiTable(vec![1, 0, 0, 1]);
        assert_eq!(a.convolve(&b, 5), BettiTable(vec![1, 1, 0, 1, 1]));
        assert_eq!(a.to_string(), "(1,1)");
        assert_eq!(b.euler_characteristic(), 0);
    }

    #[test]
    fn cohomology_basis_of_circle() {
        let d0 = m(&[&[-1, 1, 0], &[-1, 0, 1], &[0, -1, 1]]);
        let h0 = CohomologyBasis::new(&Matrix::zeros(3, 0), &d0);
        assert_eq!(h0.dim(), 1);
        let h1 = CohomologyBasis::new(&d0, &Matrix::zeros(0, 3));
        assert_eq!(h1.dim(), 1);
        // the coboundary of a vertex indicator is the zero class
        let z = d0.column(0);
        assert!(h1.class_of(&z).unwrap().iter().all(|x| x.is_zero()));
        let e = vec![int(1), int(0), int(0)];
        assert!(!h1.class_of(&e).unwrap()[0].is_zero());
        assert!(h0.class_of(&e).is_err());
    }
}
