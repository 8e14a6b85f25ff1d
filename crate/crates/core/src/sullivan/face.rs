use super::{monomial_basis, PolyForm};
use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::scalar::Field;
use crate::simplicial::Simplex;

/// An order-preserving inclusion of the standard `m`-simplex as a face of
/// the standard `n`-simplex: vertex `j` of the face is vertex
/// `positions[j]` of the ambient simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceInclusion {
    target_dim: usize,
    positions: Vec<usize>,
}

impl FaceInclusion {
    pub fn new(positions: Vec<usize>, target_dim: usize) -> Result<Self> {
        if positions.is_empty()
            || positions.windows(2).any(|w| w[0] >= w[1])
            || positions.iter().any(|&p| p > target_dim)
        {
            return Err(Error::DimensionMismatch(format!(
                "{positions:?} is not an increasing list of vertices of a {target_dim}-simplex"
            )));
        }
        Ok(FaceInclusion {
            target_dim,
            positions,
        })
    }

    /// The inclusion `τ ⊆ σ` of two concrete simplices.
    pub fn between(tau: &Simplex, sigma: &Simplex) -> Result<Self> {
        let positions = tau
            .positions_in(sigma)
            .ok_or_else(|| Error::DimensionMismatch(format!("{tau} is not a face of {sigma}")))?;
        Self::new(positions, sigma.dim())
    }

    pub fn identity(n: usize) -> Self {
        FaceInclusion {
            target_dim: n,
            positions: (0..=n).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.positions.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// `self ∘ inner`, for `inner: υ ⊆ τ` and `self: τ ⊆ σ`.
    pub fn compose(&self, inner: &FaceInclusion) -> Result<FaceInclusion> {
        if inner.target_dim != self.source_dim() {
            return Err(Error::DimensionMismatch("inclusions do not compose".into()));
        }
        Ok(FaceInclusion {
            target_dim: self.target_dim,
            positions: inner.positions.iter().map(|&j| self.positions[j]).collect(),
        })
    }

    /// Images of the ambient reduced coordinates `t1..tn` as functions on the face.
    fn coordinate_images<F: Field>(&self) -> Vec<PolyForm<F>> {
        let m = self.source_dim();
        (1..=self.target_dim)
            .map(|i| match self.positions.iter().position(|&p| p == i) {
                Some(j) => PolyForm::barycentric(m, j),
                None => PolyForm::zero(m, 0),
            })
            .collect()
    }
}

/// Restriction of a form on `σ` to the face `τ`.
///
/// Substitutes each barycentric coordinate of `σ` by the matching one of `τ`
/// (or zero for vertices not in `τ`), then rewrites in `τ`'s reduced
/// coordinates. This is an algebra map commuting with `d`.
pub fn pullback<F: Field>(inc: &FaceInclusion, form: &PolyForm<F>) -> Result<PolyForm<F>> {
    if form.simplex_dim() != inc.target_dim {
        return Err(Error::DimensionMismatch(format!(
            "form lives on a {}-simplex, inclusion targets a {}-simplex",
            form.simplex_dim(),
            inc.target_dim
        )));
    }
    let m = inc.source_dim();
    let images = inc.coordinate_images::<F>();
    let d_images: Vec<PolyForm<F>> = images.iter().map(PolyForm::differential).collect();
    let mut out = PolyForm::zero(m, form.degree());
    if form.degree() > m {
        return Ok(out);
    }
    for (mono, c) in form.terms() {
        let mut term = PolyForm::constant(m, c.clone());
        for &i in &mono.dts {
            term = term.wedge(&d_images[i]).expect("same face");
            if term.is_zero() {
                break;
            }
        }
        if term.is_zero() {
            continue;
        }
        for (i, &a) in mono.exponents.iter().enumerate() {
            if a > 0 {
                term = images[i].pow(a).wedge(&term).expect("same face");
            }
        }
        out = &out + &term;
    }
    Ok(out)
}

/// Matrix of [`pullback`] between the capped monomial bases of `p`-forms.
pub fn pullback_matrix<F: Field>(inc: &FaceInclusion, p: usize, cap: usize) -> Matrix<F> {
    let source = monomial_basis(inc.target_dim(), p, cap);
    let target = monomial_basis(inc.source_dim(), p, cap);
    let mut mat = Matrix::zeros(target.len(), source.len());
    for (c, f) in source.forms::<F>().iter().enumerate() {
        let g = pullback(inc, f).expect("dimensions agree");
        for (mono, v) in g.terms() {
            let r = target.index_of(mono).expect("pullback preserves the cap");
            mat.set(r, c, v.clone());
        }
    }
    mat
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::super::strategies::poly_form;
    use super::*;
    use crate::scalar::int;
    use crate::Q;

    type P = PolyForm<Q>;

    #[test]
    fn dropping_a_vertex_kills_its_coordinate() {
        let inc = FaceInclusion::new(vec![0, 1], 2).unwrap();
        let f = P::coordinate(2, 1).wedge(&P::dt(2, 2)).unwrap();
        assert!(pullback(&inc, &f).unwrap().is_zero());
        assert_eq!(
            pullback(&inc, &P::coordinate(2, 1)).unwrap(),
            P::coordinate(1, 1)
        );
    }

    #[test]
    fn opposite_face_of_vertex_zero() {
        // face {1,2}: t1 ↦ 1 − s, t2 ↦ s
        let inc = FaceInclusion::new(vec![1, 2], 2).unwrap();
        let s = P::coordinate(1, 1);
        assert_eq!(
            pullback(&inc, &P::coordinate(2, 1)).unwrap(),
            &P::one(1) - &s
        );
        assert_eq!(pullback(&inc, &P::coordinate(2, 2)).unwrap(), s);
        assert_eq!(pullback(&inc, &P::dt(2, 1)).unwrap(), -&P::dt(1, 1));
    }

    #[test]
    fn pullback_to_a_vertex_evaluates() {
        let f = &P::coordinate(2, 1).pow(2).scale(&int(3)) + &P::one(2);
        for (v, expected) in [(0, 1), (1, 4), (2, 1)] {
            let inc = FaceInclusion::new(vec![v], 2).unwrap();
            assert_eq!(pullback(&inc, &f).unwrap(), P::constant(0, int(expected)));
        }
    }

    #[test]
    fn between_concrete_simplices() {
        let sigma = Simplex::new(vec![3, 5, 9]).unwrap();
        let tau = Simplex::new(vec![5, 9]).unwrap();
        let inc = FaceInclusion::between(&tau, &sigma).unwrap();
        assert_eq!(inc.positions(), &[1, 2]);
        assert!(FaceInclusion::between(&sigma, &tau).is_err());
        assert!(pullback(&inc, &P::dt(3, 1)).is_err());
    }

    #[test]
    fn identity_is_identity() {
        let f = &P::coordinate(3, 2).wedge(&P::dt(3, 1)).unwrap() + &P::dt(3, 3);
        assert_eq!(pullback(&FaceInclusion::identity(3), &f).unwrap(), f);
    }

    fn all_faces(n: usize) -> Vec<FaceInclusion> {
        (1u32..(1 << (n + 1)))
            .map(|mask| {
                let pos = (0..=n).filter(|i| mask & (1 << i) != 0).collect();
                FaceInclusion::new(pos, n).unwrap()
            })
            .collect()
    }

    #[test]
    fn functoriality_on_monomial_bases() {
        let n = 3;
        for outer in all_faces(n) {
            for inner in all_faces(outer.source_dim()) {
                let composite = outer.compose(&inner).unwrap();
                for p in 0..=n {
                    for f in monomial_basis(n, p, 2).forms::<Q>() {
                        let two_step = pullback(&inner, &pullback(&outer, &f).unwrap()).unwrap();
                        assert_eq!(two_step, pullback(&composite, &f).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn cap_is_preserved() {
        for inc in all_faces(3) {
            for p in 0..=3 {
                let m = pullback_matrix::<Q>(&inc, p, 2);
                assert_eq!(m.nrows(), monomial_basis(inc.source_dim(), p, 2).len());
            }
        }
    }

    proptest! {
        #[test]
        fn pullback_commutes_with_d(f in poly_form(3, 1, 3), face in 0usize..15) {
            let inc = &all_faces(3)[face];
            let lhs = pullback(inc, &f.differential()).unwrap();
            let rhs = pullback(inc, &f).unwrap().differential();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pullback_is_multiplicative(a in poly_form(3, 1, 2), b in poly_form(3, 1, 2), face in 0usize..15) {
            let inc = &all_faces(3)[face];
            let lhs = pullback(inc, &a.wedge(&b).unwrap()).unwrap();
            let rhs = pullback(inc, &a).unwrap().wedge(&pullback(inc, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
