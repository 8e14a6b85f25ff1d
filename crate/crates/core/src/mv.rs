//! Mayer–Vietoris for a cover of a simplicial complex by two closed
//! subcomplexes, with trivial or tensor (`Λ* g*`) coefficients.
//!
//! For `K = K1 ∪ K2` and `W = K1 ∩ K2` the short sequence is
//! `0 → Ω(K) →i Ω(K1) ⊕ Ω(K2) →j Ω(W) → 0` with `i = (r1, r2)` and
//! `j = r1W − r2W`. Every verdict below is a rank computation.

use serde::Serialize;

use crate::algebroid::{TensorComplex, TrivialAlgebroid};
use crate::cealg::LieAlgebra;
use crate::combinat::binomial;
use crate::error::{Error, Result};
use crate::exactla::{induced_rank, kernel_basis, rank, solve, CohomologyBasis, Matrix};
use crate::psforms::{integration_matrix, restriction_between, whitney_matrix};
use crate::scalar::Field;
use crate::simplicial::SimplicialComplex;

/// Recorded in every report.
pub const COVER_NOTE: &str = "closed subcomplexes K1, K2 with K1 ∪ K2 = K and W = K1 ∩ K2";

#[derive(Clone, Debug, PartialEq)]
pub struct MVSetup<F> {
    complex: SimplicialComplex,
    k1: SimplicialComplex,
    k2: SimplicialComplex,
    w: SimplicialComplex,
    cap: usize,
    fiber: Option<LieAlgebra<F>>,
}

impl<F: Field> MVSetup<F> {
    pub fn new(
        complex: SimplicialComplex,
        k1: SimplicialComplex,
        k2: SimplicialComplex,
        cap: usize,
        fiber: Option<LieAlgebra<F>>,
    ) -> Result<Self> {
        for (name, piece) in [("K1", &k1), ("K2", &k2)] {
            if !piece.is_subcomplex_of(&complex) {
                return Err(Error::InvalidCover(format!(
                    "{name} is not a subcomplex of K"
                )));
            }
        }
        if let Some(missing) = complex.iter().find(|s| !k1.contains(s) && !k2.contains(s)) {
            return Err(Error::InvalidCover(format!(
                "simplex {missing} lies in neither piece"
            )));
        }
        if let Some(g) = &fiber {
            g.validate()?;
        }
        let w = k1.intersection(&k2);
        Ok(MVSetup {
            complex,
            k1,
            k2,
            w,
            cap,
            fiber,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn k1(&self) -> &SimplicialComplex {
        &self.k1
    }

    pub fn k2(&self) -> &SimplicialComplex {
        &self.k2
    }

    pub fn w(&self) -> &SimplicialComplex {
        &self.w
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn fiber(&self) -> Option<&LieAlgebra<F>> {
        self.fiber.as_ref()
    }

    pub fn with_cap(&self, cap: usize) -> Self {
        MVSetup {
            cap,
            ..self.clone()
        }
    }

    fn algebroid(&self, base: &SimplicialComplex) -> TrivialAlgebroid<F> {
        match &self.fiber {
            Some(g) => TrivialAlgebroid::new(base.clone(), g.clone()).expect("fiber validated"),
            None => TrivialAlgebroid::tangent(base.clone()),
        }
    }

    fn coefficients(&self) -> String {
        match &self.fiber {
            Some(g) => format!("tensor, fiber dimension {}", g.dim()),
            None => "trivial".into(),
        }
    }
}

/// The four tensor complexes of a setup, with shapes defined in every degree.
struct Pieces<F> {
    k: TensorComplex<F>,
    k1: TensorComplex<F>,
    k2: TensorComplex<F>,
    w: TensorComplex<F>,
    m: usize,
}

fn dim<F: Field>(tc: &TensorComplex<F>, r: usize) -> usize {
    if r < tc.num_degrees() {
        tc.dim(r)
    } else {
        0
    }
}

fn diff<F: Field>(tc: &TensorComplex<F>, r: usize) -> Matrix<F> {
    if r + 1 < tc.num_degrees() {
        tc.differential(r)
    } else {
        Matrix::zeros(dim(tc, r + 1), dim(tc, r))
    }
}

/// `d` into degree `r`.
fn incoming<F: Field>(tc: &TensorComplex<F>, r: usize) -> Matrix<F> {
    match r {
        0 => Matrix::zeros(dim(tc, 0), 0),
        _ => diff(tc, r - 1),
    }
}

fn cohomology<F: Field>(tc: &TensorComplex<F>, r: usize) -> CohomologyBasis<F> {
    CohomologyBasis::new(&incoming(tc, r), &diff(tc, r))
}

fn cocycles<F: Field>(d: &Matrix<F>) -> Matrix<F> {
    Matrix::from_columns(d.ncols(), &kernel_basis(d))
}

/// Restriction `from → to` in total degree `r`, block by block.
fn restrict<F: Field>(
    from: &TensorComplex<F>,
    to: &TensorComplex<F>,
    m: usize,
    r: usize,
) -> Result<Matrix<F>> {
    let mut out = Matrix::zeros(dim(to, r), dim(from, r));
    for b in from.blocks(r) {
        let Some(t) = to.blocks(r).iter().find(|t| t.p == b.p && t.q == b.q) else {
            continue;
        };
        let piece = restriction_between(&from.ps().bases[b.p], &to.ps().bases[b.p])?
            .kron(&Matrix::identity(binomial(m, b.q)));
        for (i, j, v) in piece.iter() {
            out.set(t.offset + i, b.offset + j, v.clone());
        }
    }
    Ok(out)
}

impl<F: Field> Pieces<F> {
    fn new(s: &MVSetup<F>) -> Result<Self> {
        let build = |x: &SimplicialComplex| TensorComplex::new(&s.algebroid(x), s.cap);
        Ok(Pieces {
            k: build(&s.complex)?,
            k1: build(&s.k1)?,
            k2: build(&s.k2)?,
            w: build(&s.w)?,
            m: s.fiber.as_ref().map_or(0, LieAlgebra::dim),
        })
    }

    fn i(&self, r: usize) -> Result<Matrix<F>> {
        Ok(Matrix::vstack(&[
            &restrict(&self.k, &self.k1, self.m, r)?,
            &restrict(&self.k, &self.k2, self.m, r)?,
        ]))
    }

    fn j(&self, r: usize) -> Result<Matrix<F>> {
        let r1 = restrict(&self.k1, &self.w, self.m, r)?;
        let r2 = restrict(&self.k2, &self.w, self.m, r)?;
        Ok(Matrix::hstack(&[&r1, &-&r2]))
    }

    fn d_mid(&self, r: usize) -> Matrix<F> {
        Matrix::block_diag(&[&diff(&self.k1, r), &diff(&self.k2, r)])
    }

    fn incoming_mid(&self, r: usize) -> Matrix<F> {
        Matrix::block_diag(&[&incoming(&self.k1, r), &incoming(&self.k2, r)])
    }

    /// Lift through `j`, differentiate, pull back through `i`.
    fn zigzag(&self, r: usize, i_next: &Matrix<F>, j: &Matrix<F>, z: &[F]) -> Result<Vec<F>> {
        let y = solve(j, z).ok_or_else(|| Error::TruncationObstruction {
            coeff_degree: self.k.cap(),
            detail: format!("a degree-{r} form on W does not extend to K1 ⊔ K2"),
        })?;
        let dy = self.d_mid(r).apply(&y);
        solve(i_next, &dy).ok_or_else(|| {
            Error::NotInSpan(format!(
                "d of a lift in degree {r} is not a restriction from K"
            ))
        })
    }
}

/// The short sequence in total degree `r`.
pub fn mv_short_sequence<F: Field>(s: &MVSetup<F>, r: usize) -> Result<(Matrix<F>, Matrix<F>)> {
    let pieces = Pieces::new(s)?;
    Ok((pieces.i(r)?, pieces.j(r)?))
}

/// Short-sequence verdicts and cohomology data for one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MVDegree {
    pub degree: usize,
    pub dim_k: usize,
    pub dim_middle: usize,
    pub dim_w: usize,
    pub rank_i: usize,
    pub rank_j: usize,
    pub j_after_i_zero: bool,
    pub i_injective: bool,
    pub middle_exact: bool,
    pub j_surjective: bool,
    pub betti_k: usize,
    pub betti_middle: usize,
    pub betti_w: usize,
}

impl MVDegree {
    pub fn exact(&self) -> bool {
        self.j_after_i_zero && self.i_injective && self.middle_exact && self.j_surjective
    }
}

/// One node of the long sequence with the ranks of the maps on either side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesNode {
    pub node: String,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MVReport {
    pub cover: &'static str,
    pub coefficients: String,
    pub requested_coeff_degree: usize,
    pub coeff_degree: usize,
    pub truncation_obstruction: Option<String>,
    pub short_sequence: Vec<MVDegree>,
    pub connecting_ranks: Vec<usize>,
    pub long_sequence: Vec<LesNode>,
    pub exact: bool,
}

fn short_degree<F: Field>(p: &Pieces<F>, r: usize) -> Result<MVDegree> {
    let i = p.i(r)?;
    let j = p.j(r)?;
    let (dim_k, dim_middle, dim_w) = (dim(&p.k, r), i.nrows(), j.nrows());
    let rank_i = rank(&i);
    let rank_j = rank(&j);
    let ker_j = cocycles(&j);
    let middle_exact = ker_j.ncols() == rank_i && rank(&Matrix::hstack(&[&ker_j, &i])) == rank_i;
    let betti = |tc: &TensorComplex<F>| cohomology(tc, r).dim();
    Ok(MVDegree {
        degree: r,
        dim_k,
        dim_middle,
        dim_w,
        rank_i,
        rank_j,
        j_after_i_zero: (&j * &i).is_zero(),
        i_injective: rank_i == dim_k,
        middle_exact,
        j_surjective: rank_j == dim_w,
        betti_k: betti(&p.k),
        betti_middle: betti(&p.k1) + betti(&p.k2),
        betti_w: betti(&p.w),
    })
}

/// `δ: H^r(W) → H^{r+1}(K)` in the chosen cohomology bases.
#[derive(Clone, Debug, PartialEq)]
pub struct Connecting<F> {
    pub degree: usize,
    pub matrix: Matrix<F>,
    /// Changing the lift by an element of `ker j` never changes the class.
    pub well_defined: bool,
}

impl<F: Field> Connecting<F> {
    pub fn rank(&self) -> usize {
        rank(&self.matrix)
    }
}

fn connecting_in<F: Field>(p: &Pieces<F>, r: usize) -> Result<Connecting<F>> {
    let j = p.j(r)?;
    let i_next = p.i(r + 1)?;
    if rank(&j) != j.nrows() {
        return Err(Error::TruncationObstruction {
            coeff_degree: p.k.cap(),
            detail: format!("j is not surjective in degree {r}"),
        });
    }
    if rank(&i_next) != i_next.ncols() {
        return Err(Error::NotInSpan(format!(
            "i is not injective in degree {}",
            r + 1
        )));
    }
    let source = cohomology(&p.w, r);
    let target = cohomology(&p.k, r + 1);
    let images = source
        .representatives
        .iter()
        .map(|z| p.zigzag(r, &i_next, &j, z))
        .collect::<Result<Vec<_>>>()?;
    let matrix = target.classes_of(&Matrix::from_columns(i_next.ncols(), &images))?;
    // lifts differ by ker j; their images must be coboundaries
    let shifts = kernel_basis(&j)
        .iter()
        .map(|kappa| {
            solve(&i_next, &p.d_mid(r).apply(kappa))
                .ok_or_else(|| Error::NotInSpan("d of a kernel vector is not a restriction".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let shifts = Matrix::from_columns(i_next.ncols(), &shifts);
    let boundaries = target.coboundaries();
    let well_defined = rank(&Matrix::hstack(&[boundaries, &shifts])) == rank(boundaries);
    Ok(Connecting {
        degree: r,
        matrix,
        well_defined,
    })
}

pub fn connecting_homomorphism<F: Field>(s: &MVSetup<F>, r: usize) -> Result<Connecting<F>> {
    connecting_in(&Pieces::new(s)?, r)
}

fn les_in<F: Field>(p: &Pieces<F>, pmax: usize, connecting: &[usize]) -> Result<Vec<LesNode>> {
    let mut nodes = Vec::with_capacity(3 * (pmax + 1));
    let mut rank_in = 0;
    for (r, &delta) in connecting.iter().enumerate().take(pmax + 1) {
        let i = p.i(r)?;
        let j = p.j(r)?;
        let zk = cocycles(&diff(&p.k, r));
        let zmid = cocycles(&p.d_mid(r));
        let rank_i = induced_rank(&i, &zk, &p.incoming_mid(r));
        let rank_j = induced_rank(&j, &zmid, &incoming(&p.w, r));
        let dims = [
            cohomology(&p.k, r).dim(),
            cohomology(&p.k1, r).dim() + cohomology(&p.k2, r).dim(),
            cohomology(&p.w, r).dim(),
        ];
        let outs = [rank_i, rank_j, delta];
        for (idx, name) in ["K", "K1 ⊕ K2", "W"].iter().enumerate() {
            let rank_out = outs[idx];
            nodes.push(LesNode {
                node: format!("H^{r}({name})"),
                dim: dims[idx],
                rank_in,
                rank_out,
                exact: rank_in + rank_out == dims[idx],
            });
            rank_in = rank_out;
        }
    }
    Ok(nodes)
}

/// Exactness of the long sequence at its first `3 (pmax + 1)` nodes.
pub fn les_exactness_check<F: Field>(s: &MVSetup<F>, pmax: usize) -> Result<Vec<LesNode>> {
    let p = Pieces::new(s)?;
    let connecting = (0..=pmax)
        .map(|r| connecting_in(&p, r).map(|c| c.rank()))
        .collect::<Result<Vec<_>>>()?;
    les_in(&p, pmax, &connecting)
}

fn report_at<F: Field>(s: &MVSetup<F>, pmax: usize) -> Result<(MVReport, bool)> {
    let p = Pieces::new(s)?;
    let short_sequence = (0..=pmax + 1)
        .map(|r| short_degree(&p, r))
        .collect::<Result<Vec<_>>>()?;
    let surjective = short_sequence.iter().all(|d| d.j_surjective);
    let mut connecting_ranks = Vec::new();
    let mut long_sequence = Vec::new();
    if short_sequence.iter().all(MVDegree::exact) {
        let mut well_defined = true;
        for r in 0..=pmax {
            let c = connecting_in(&p, r)?;
            well_defined &= c.well_defined;
            connecting_ranks.push(c.rank());
        }
        if !well_defined {
            return Err(Error::NotInSpan(
                "connecting map depends on the lift".into(),
            ));
        }
        long_sequence = les_in(&p, pmax, &connecting_ranks)?;
    }
    let exact = short_sequence.iter().all(MVDegree::exact)
        && !long_sequence.is_empty()
        && long_sequence.iter().all(|n| n.exact);
    Ok((
        MVReport {
            cover: COVER_NOTE,
            coefficients: s.coefficients(),
            requested_coeff_degree: s.cap,
            coeff_degree: s.cap,
            truncation_obstruction: None,
            short_sequence,
            connecting_ranks,
            long_sequence,
            exact,
        },
        surjective,
    ))
}

/// Short-sequence verdicts in degrees `0..=pmax + 1`, connecting ranks and
/// long-sequence nodes up to degree `pmax`. If `j` fails to be surjective
/// the whole report is recomputed once at `cap + 1`.
pub fn mv_exactness_report<F: Field>(s: &MVSetup<F>, pmax: usize) -> Result<MVReport> {
    let (report, surjective) = report_at(s, pmax)?;
    if surjective {
        return Ok(report);
    }
    let (mut retry, _) = report_at(&s.with_cap(s.cap + 1), pmax)?;
    retry.requested_coeff_degree = s.cap;
    retry.truncation_obstruction = Some(format!("truncation obstruction at D = {}", s.cap));
    Ok(retry)
}

/// `δ` transported to simplicial cohomology: Whitney forms of simplicial
/// cocycle representatives on `W` go through the zigzag, and the result is
/// integrated and classified on `K`. Trivial coefficients only.
pub fn simplicial_connecting<F: Field>(s: &MVSetup<F>, r: usize) -> Result<Matrix<F>> {
    if s.fiber.is_some() {
        return Err(Error::Unsupported(
            "simplicial comparison with tensor coefficients".into(),
        ));
    }
    let p = Pieces::new(s)?;
    let j = p.j(r)?;
    let i_next = p.i(r + 1)?;
    let top = r + 2;
    let simp_w = s.w.cochain_complex::<F>(top);
    let simp_k = s.complex.cochain_complex::<F>(top);
    let source = CohomologyBasis::new(&simp_w.incoming(r), &simp_w.differential(r));
    let target = CohomologyBasis::new(&simp_k.incoming(r + 1), &simp_k.differential(r + 1));
    let w_basis = &p.w.ps().bases;
    let k_basis = &p.k.ps().bases;
    let mut images = Vec::new();
    for c in &source.representatives {
        let z = match w_basis.get(r) {
            Some(b) => whitney_matrix(b)?.apply(c),
            None => Vec::new(),
        };
        let x = p.zigzag(r, &i_next, &j, &z)?;
        let integrated = match k_basis.get(r + 1) {
            Some(b) => integration_matrix(b).apply(&x),
            None => vec![F::zero(); s.complex.count(r + 1)],
        };
        images.push(integrated);
    }
    target.classes_of(&Matrix::from_columns(s.complex.count(r + 1), &images))
}
