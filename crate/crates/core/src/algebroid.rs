//! The trivial transitive Lie algebroid `TΔ ⊕ (Δ × g)` over a simplicial
//! complex.
//!
//! Sections live on one simplex, in reduced coordinates: a vector field
//! `Σ X_i ∂/∂t_i` and a polynomial map into `g`. Forms are built from the
//! piecewise complex and the Chevalley–Eilenberg complex as
//! `Ω*_ps(K) ⊗ Λ* g*` with
//! `d(α ⊗ χ) = dα ⊗ χ + (−1)^{|α|} α ⊗ d_g χ`.
//! Forms pair with sections through the anchor on the first factor and the
//! fiber projection on the second, using the shuffle product and the
//! determinant convention throughout.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rayon::prelude::*;

use crate::cealg::{ce_betti, ce_complex, CEElement, LieAlgebra};
use crate::combinat::{binomial, inversions, permutations, subsets};
use crate::error::{Error, Result};
use crate::exactla::{BettiTable, FiniteComplex, Matrix};
use crate::psforms::{ps_betti, PsComplex};
use crate::scalar::{sign, Field};
use crate::simplicial::{Simplex, SimplicialComplex};
use crate::sullivan::{Monomial, PolyForm};

#[derive(Clone, Debug, PartialEq)]
pub struct TrivialAlgebroid<F> {
    base: SimplicialComplex,
    fiber: LieAlgebra<F>,
}

impl<F: Field> TrivialAlgebroid<F> {
    pub fn new(base: SimplicialComplex, fiber: LieAlgebra<F>) -> Result<Self> {
        fiber.validate()?;
        Ok(TrivialAlgebroid { base, fiber })
    }

    /// The tangent algebroid, i.e. a zero-dimensional fiber.
    pub fn tangent(base: SimplicialComplex) -> Self {
        TrivialAlgebroid {
            base,
            fiber: LieAlgebra::abelian(0),
        }
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn fiber(&self) -> &LieAlgebra<F> {
        &self.fiber
    }

    /// `[(X, f), (Y, g)] = ([X, Y], X·g − Y·f + [f, g])`.
    pub fn bracket(&self, a: &Section<F>, b: &Section<F>) -> Result<Section<F>> {
        self.check(a)?;
        self.check(b)?;
        if a.n != b.n {
            return Err(Error::DimensionMismatch(format!(
                "sections on a {}-simplex and a {}-simplex",
                a.n, b.n
            )));
        }
        let vector = a
            .vector
            .iter()
            .zip(&b.vector)
            .map(|(ai, bi)| &a.derive(bi) - &b.derive(ai))
            .collect();
        let mut fiber: Vec<PolyForm<F>> = a
            .fiber
            .iter()
            .zip(&b.fiber)
            .map(|(fk, gk)| &a.derive(gk) - &b.derive(fk))
            .collect();
        for (i, j, c) in self.fiber.structure_constants() {
            let w = &mul(&a.fiber[i], &b.fiber[j]) - &mul(&a.fiber[j], &b.fiber[i]);
            if w.is_zero() {
                continue;
            }
            for (fk, ck) in fiber.iter_mut().zip(c) {
                if !ck.is_zero() {
                    *fk = &*fk + &w.scale(ck);
                }
            }
        }
        Ok(Section {
            n: a.n,
            vector,
            fiber,
        })
    }

    /// `(dω)(ξ_0, …, ξ_r)` from the intrinsic formula
    /// `Σ (−1)^i ξ_i·ω(…ξ̂_i…) + Σ_{i<j} (−1)^{i+j} ω([ξ_i, ξ_j], …ξ̂_i…ξ̂_j…)`.
    pub fn koszul_differential(
        &self,
        omega: &LocalForm<F>,
        sections: &[Section<F>],
    ) -> Result<PolyForm<F>> {
        let r = omega.degree;
        if r > 2 {
            return Err(Error::Unsupported(format!(
                "intrinsic differential of a degree-{r} form"
            )));
        }
        if sections.len() != r + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} sections for a degree-{} result",
                sections.len(),
                r + 1
            )));
        }
        let mut total = PolyForm::zero(omega.n, 0);
        for (i, xi) in sections.iter().enumerate() {
            let rest: Vec<Section<F>> = others(sections, &[i]);
            let term = xi.derive(&omega.evaluate(&rest)?);
            total = &total + &term.scale(&sign(i));
        }
        for i in 0..sections.len() {
            for j in i + 1..sections.len() {
                let mut args = vec![self.bracket(&sections[i], &sections[j])?];
                args.extend(others(sections, &[i, j]));
                let term = omega.evaluate(&args)?;
                total = &total + &term.scale(&sign(i + j));
            }
        }
        Ok(total)
    }

    fn check(&self, s: &Section<F>) -> Result<()> {
        if s.fiber.len() != self.fiber.dim() {
            return Err(Error::DimensionMismatch(format!(
                "section with {} fiber components for a {}-dimensional fiber",
                s.fiber.len(),
                self.fiber.dim()
            )));
        }
        Ok(())
    }
}

fn others<F: Clone>(xs: &[F], skip: &[usize]) -> Vec<F> {
    xs.iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, x)| x.clone())
        .collect()
}

fn mul<F: Field>(a: &PolyForm<F>, b: &PolyForm<F>) -> PolyForm<F> {
    a.wedge(b).expect("functions on one simplex")
}

/// A section `(X, f)` over an `n`-simplex; all components are functions.
#[derive(Clone, PartialEq)]
pub struct Section<F> {
    n: usize,
    vector: Vec<PolyForm<F>>,
    fiber: Vec<PolyForm<F>>,
}

impl<F: Field> Section<F> {
    pub fn new(n: usize, vector: Vec<PolyForm<F>>, fiber: Vec<PolyForm<F>>) -> Result<Self> {
        if vector.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} vector components on a {n}-simplex",
                vector.len()
            )));
        }
        if let Some(bad) = vector
            .iter()
            .chain(&fiber)
            .find(|c| c.simplex_dim() != n || c.degree() != 0)
        {
            return Err(Error::DimensionMismatch(format!(
                "component {bad} is not a function on the {n}-simplex"
            )));
        }
        Ok(Section { n, vector, fiber })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        Section {
            n,
            vector: vec![PolyForm::zero(n, 0); n],
            fiber: vec![PolyForm::zero(n, 0); m],
        }
    }

    /// `(∂/∂t_i, 0)`, `1 ≤ i ≤ n`.
    pub fn coordinate_field(n: usize, m: usize, i: usize) -> Self {
        let mut s = Self::zero(n, m);
        s.vector[i - 1] = PolyForm::one(n);
        s
    }

    /// `(0, x)` for a constant `x ∈ g`.
    pub fn constant_fiber(n: usize, x: &[F]) -> Self {
        Section {
            n,
            vector: vec![PolyForm::zero(n, 0); n],
            fiber: x.iter().map(|c| PolyForm::constant(n, c.clone())).collect(),
        }
    }

    /// The lift `ι(X) = (X, 0)`, a right inverse of the anchor.
    pub fn from_vector_field(vector: Vec<PolyForm<F>>, m: usize) -> Result<Self> {
        let n = vector.len();
        Self::new(n, vector, vec![PolyForm::zero(n, 0); m])
    }

    pub fn simplex_dim(&self) -> usize {
        self.n
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber.len()
    }

    pub fn vector(&self) -> &[PolyForm<F>] {
        &self.vector
    }

    pub fn fiber(&self) -> &[PolyForm<F>] {
        &self.fiber
    }

    /// The anchor `γ(X, f) = X`.
    pub fn anchor(&self) -> Vec<PolyForm<F>> {
        self.vector.clone()
    }

    /// `γ(ξ)(h) = Σ X_i ∂h/∂t_i` for a function `h`.
    pub fn derive(&self, h: &PolyForm<F>) -> PolyForm<F> {
        assert_eq!(
            h.degree(),
            0,
            "only functions are differentiated along sections"
        );
        let mut out = PolyForm::zero(self.n, 0);
        for (i, x) in self.vector.iter().enumerate() {
            out = &out + &mul(x, &h.partial(i + 1));
        }
        out
    }

    /// `h·ξ` for a function `h`.
    pub fn scale(&self, h: &PolyForm<F>) -> Result<Self> {
        if h.simplex_dim() != self.n || h.degree() != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{h} is not a function on the {}-simplex",
                self.n
            )));
        }
        Ok(Section {
            n: self.n,
            vector: self.vector.iter().map(|x| mul(h, x)).collect(),
            fiber: self.fiber.iter().map(|x| mul(h, x)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.vector.iter().chain(&self.fiber).all(PolyForm::is_zero)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&PolyForm<F>, &PolyForm<F>) -> PolyForm<F>,
    ) -> Self {
        assert!(
            self.n == other.n && self.fiber.len() == other.fiber.len(),
            "sections of different shapes"
        );
        Section {
            n: self.n,
            vector: self
                .vector
                .iter()
                .zip(&other.vector)
                .map(|(a, b)| f(a, b))
                .collect(),
            fiber: self
                .fiber
                .iter()
                .zip(&other.fiber)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl<F: Field> fmt::Debug for Section<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Section")
            .field("n", &self.n)
            .field("vector", &self.vector)
            .field("fiber", &self.fiber)
            .finish()
    }
}

impl<F: Field> Add for &Section<F> {
    type Output = Section<F>;

    fn add(self, rhs: &Section<F>) -> Section<F> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<F: Field> Sub for &Section<F> {
    type Output = Section<F>;

    fn sub(self, rhs: &Section<F>) -> Section<F> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<F: Field> Neg for &Section<F> {
    type Output = Section<F>;

    fn neg(self) -> Section<F> {
        Section {
            n: self.n,
            vector: self.vector.iter().map(|x| -x).collect(),
            fiber: self.fiber.iter().map(|x| -x).collect(),
        }
    }
}

/// Determinant of a square matrix of functions.
fn det<F: Field>(n: usize, rows: &[Vec<PolyForm<F>>]) -> PolyForm<F> {
    let mut total = PolyForm::zero(n, 0);
    for perm in permutations(rows.len()) {
        let mut term = PolyForm::one(n);
        for (r, &c) in perm.iter().enumerate() {
            term = mul(&term, &rows[r][c]);
            if term.is_zero() {
                break;
            }
        }
        if inversions(&perm) % 2 == 1 {
            term = -&term;
        }
        total = &total + &term;
    }
    total
}

/// `α(X_1, …, X_p)` for a `p`-form and `p` vector fields.
fn pair_form<F: Field>(alpha: &PolyForm<F>, fields: &[&[PolyForm<F>]]) -> PolyForm<F> {
    let n = alpha.simplex_dim();
    let mut total = PolyForm::zero(n, 0);
    for (m, c) in alpha.terms() {
        let coeff = PolyForm::monomial(
            n,
            Monomial {
                exponents: m.exponents.clone(),
                dts: vec![],
            },
            c.clone(),
        )
        .expect("exponents of a valid form");
        let rows: Vec<Vec<PolyForm<F>>> = fields
            .iter()
            .map(|x| m.dts.iter().map(|&s| x[s].clone()).collect())
            .collect();
        total = &total + &mul(&coeff, &det(n, &rows));
    }
    total
}

/// A form `Σ_J α_J ⊗ e^J` on one simplex, with `|α_J| + |J|` the degree.
#[derive(Clone, PartialEq)]
pub struct LocalForm<F> {
    n: usize,
    m: usize,
    degree: usize,
    parts: BTreeMap<Vec<usize>, PolyForm<F>>,
}

impl<F: Field> LocalForm<F> {
    pub fn zero(n: usize, m: usize, degree: usize) -> Self {
        LocalForm {
            n,
            m,
            degree,
            parts: BTreeMap::new(),
        }
    }

    /// Adds `alpha ⊗ e^subset`.
    pub fn add_part(&mut self, alpha: PolyForm<F>, subset: Vec<usize>) -> Result<()> {
        if alpha.simplex_dim() != self.n || alpha.degree() + subset.len() != self.degree {
            return Err(Error::DimensionMismatch(format!(
                "{}-form on a {}-simplex times e^{subset:?} in a degree-{} form on a {}-simplex",
                alpha.degree(),
                alpha.simplex_dim(),
                self.degree,
                self.n
            )));
        }
        if subset.windows(2).any(|w| w[0] >= w[1]) || subset.iter().any(|&j| j >= self.m) {
            return Err(Error::Parse(format!(
                "{subset:?} is not an increasing subset of 0..{}",
                self.m
            )));
        }
        let sum = match self.parts.remove(&subset) {
            Some(old) => &old + &alpha,
            None => alpha,
        };
        if !sum.is_zero() {
            self.parts.insert(subset, sum);
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn simplex_dim(&self) -> usize {
        self.n
    }

    pub fn fiber_dim(&self) -> usize {
        self.m
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Vec<usize>, &PolyForm<F>)> {
        self.parts.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The tensor differential applied locally.
    pub fn differential(&self, g: &LieAlgebra<F>) -> Result<Self> {
        let mut out = Self::zero(self.n, self.m, self.degree + 1);
        for (subset, alpha) in &self.parts {
            out.add_part(alpha.differential(), subset.clone())?;
            let chi = CEElement::<F>::basis(subset.clone())?.differential(g)?;
            let s = sign::<F>(alpha.degree());
            for (target, c) in chi.values() {
                out.add_part(alpha.scale(&(s.clone() * c.clone())), target.clone())?;
            }
        }
        Ok(out)
    }

    /// `ω(ξ_1, …, ξ_r)`: each part contributes the shuffle sum
    /// `Σ ± α(X_P) · e^J(f_Q)`.
    pub fn evaluate(&self, sections: &[Section<F>]) -> Result<PolyForm<F>> {
        let r = self.degree;
        if sections.len() != r {
            return Err(Error::DimensionMismatch(format!(
                "{} sections for a degree-{r} form",
                sections.len()
            )));
        }
        if let Some(s) = sections
            .iter()
            .find(|s| s.n != self.n || s.fiber.len() != self.m)
        {
            return Err(Error::DimensionMismatch(format!(
                "section of shape ({}, {}) against a form of shape ({}, {})",
                s.n,
                s.fiber.len(),
                self.n,
                self.m
            )));
        }
        let mut total = PolyForm::zero(self.n, 0);
        for (subset, alpha) in &self.parts {
            let p = alpha.degree();
            for chosen in subsets(r, p) {
                let rest: Vec<usize> = (0..r).filter(|i| !chosen.contains(i)).collect();
                let order: Vec<usize> = chosen.iter().chain(&rest).copied().collect();
                let fields: Vec<&[PolyForm<F>]> =
                    chosen.iter().map(|&i| sections[i].vector()).collect();
                let values: Vec<Vec<PolyForm<F>>> = rest
                    .iter()
                    .map(|&i| {
                        subset
                            .iter()
                            .map(|&j| sections[i].fiber[j].clone())
                            .collect()
                    })
                    .collect();
                let mut term = mul(&pair_form(alpha, &fields), &det(self.n, &values));
                if inversions(&order) % 2 == 1 {
                    term = -&term;
                }
                total = &total + &term;
            }
        }
        Ok(total)
    }
}

impl<F: Field> fmt::Debug for LocalForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.parts.iter()).finish()
    }
}

/// Location of the `(p, q)` summand inside the degree-`p + q` coordinates.
/// Within a block, `ps_index · C(m, q) + subset_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Block {
    pub p: usize,
    pub q: usize,
    pub offset: usize,
    pub len: usize,
}

/// An element of the tensor complex, one coordinate vector per `(p, q)` block.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebroidForm<F> {
    degree: usize,
    blocks: BTreeMap<(usize, usize), Vec<F>>,
}

impl<F: Field> AlgebroidForm<F> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn block(&self, p: usize, q: usize) -> Option<&[F]> {
        self.blocks.get(&(p, q)).map(Vec::as_slice)
    }

    pub fn blocks(&self) -> impl Iterator<Item = ((usize, usize), &[F])> {
        self.blocks.iter().map(|(&k, v)| (k, v.as_slice()))
    }
}

/// `Ω*_ps(K) ⊗ Λ* g*` at coefficient cap `cap`, on the trimmed piecewise spaces.
pub struct TensorComplex<F> {
    algebroid: TrivialAlgebroid<F>,
    cap: usize,
    ps: PsComplex<F>,
    ce: FiniteComplex<F>,
    blocks: Vec<Vec<Block>>,
    complex: FiniteComplex<F>,
}

impl<F: Field> TensorComplex<F> {
    pub fn new(algebroid: &TrivialAlgebroid<F>, cap: usize) -> Result<Self> {
        let pmax = algebroid.base.dim().unwrap_or(0);
        let m = algebroid.fiber.dim();
        let ps = PsComplex::new(&algebroid.base, cap, pmax)?;
        let ce = ce_complex(&algebroid.fiber)?;
        let blocks: Vec<Vec<Block>> = (0..=pmax + m)
            .map(|r| {
                let mut offset = 0;
                (r.saturating_sub(m)..=r.min(pmax))
                    .map(|p| {
                        let q = r - p;
                        let len = ps.complex.dim(p) * binomial(m, q);
                        offset += len;
                        Block {
                            p,
                            q,
                            offset: offset - len,
                            len,
                        }
                    })
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = blocks
            .iter()
            .map(|bs| bs.iter().map(|b| b.len).sum())
            .collect();
        let diffs = (0..pmax + m)
            .into_par_iter()
            .map(|r| {
                tensor_block_differential(
                    &ps,
                    &ce,
                    m,
                    pmax,
                    &blocks[r],
                    &blocks[r + 1],
                    dims[r + 1],
                    dims[r],
                )
            })
            .collect();
        let complex = FiniteComplex::new(dims, diffs)?;
        Ok(TensorComplex {
            algebroid: algebroid.clone(),
            cap,
            ps,
            ce,
            blocks,
            complex,
        })
    }

    pub fn algebroid(&self) -> &TrivialAlgebroid<F> {
        &self.algebroid
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn ps(&self) -> &PsComplex<F> {
        &self.ps
    }

    pub fn ce(&self) -> &FiniteComplex<F> {
        &self.ce
    }

    pub fn complex(&self) -> &FiniteComplex<F> {
        &self.complex
    }

    pub fn num_degrees(&self) -> usize {
        self.complex.num_degrees()
    }

    pub fn dim(&self, r: usize) -> usize {
        self.complex.dim(r)
    }

    pub fn blocks(&self, r: usize) -> &[Block] {
        self.blocks.get(r).map_or(&[], Vec::as_slice)
    }

    pub fn differential(&self, r: usize) -> Matrix<F> {
        self.complex.differential(r)
    }

    pub fn betti(&self) -> Result<BettiTable> {
        self.complex.betti()
    }

    pub fn form(&self, r: usize, coords: &[F]) -> Result<AlgebroidForm<F>> {
        if coords.len() != self.dim(r) {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates in degree {r} of dimension {}",
                coords.len(),
                self.dim(r)
            )));
        }
        Ok(AlgebroidForm {
            degree: r,
            blocks: self
                .blocks(r)
                .iter()
                .map(|b| ((b.p, b.q), coords[b.offset..b.offset + b.len].to_vec()))
                .collect(),
        })
    }

    pub fn coords(&self, form: &AlgebroidForm<F>) -> Result<Vec<F>> {
        let r = form.degree;
        let mut out = vec![F::zero(); self.dim(r)];
        for ((p, q), v) in form.blocks() {
            let b = self
                .blocks(r)
                .iter()
                .find(|b| b.p == p && b.q == q && b.len == v.len())
                .ok_or_else(|| {
                    Error::DimensionMismatch(format!("no ({p}, {q}) block of length {}", v.len()))
                })?;
            out[b.offset..b.offset + b.len].clone_from_slice(v);
        }
        Ok(out)
    }

    pub fn apply_differential(&self, form: &AlgebroidForm<F>) -> Result<AlgebroidForm<F>> {
        let r = form.degree;
        let image = self.differential(r).apply(&self.coords(form)?);
        if r + 1 >= self.num_degrees() {
            return Ok(AlgebroidForm {
                degree: r + 1,
                blocks: BTreeMap::new(),
            });
        }
        self.form(r + 1, &image)
    }

    /// The restriction of `form` to the simplex `s`.
    pub fn local(&self, form: &AlgebroidForm<F>, s: &Simplex) -> Result<LocalForm<F>> {
        let m = self.algebroid.fiber.dim();
        let mut out = LocalForm::zero(s.dim(), m, form.degree);
        for ((p, q), v) in form.blocks() {
            let basis = &self.ps.bases[p];
            let width = binomial(m, q);
            for (j, subset) in subsets(m, q).into_iter().enumerate() {
                let coords: Vec<F> = (0..basis.dim()).map(|i| v[i * width + j].clone()).collect();
                out.add_part(basis.component(&coords, s)?, subset)?;
            }
        }
        Ok(out)
    }
}

#[allow(clippy::too_many_arguments)]
fn tensor_block_differential<F: Field>(
    ps: &PsComplex<F>,
    ce: &FiniteComplex<F>,
    m: usize,
    pmax: usize,
    source: &[Block],
    target: &[Block],
    rows: usize,
    cols: usize,
) -> Matrix<F> {
    let mut d = Matrix::zeros(rows, cols);
    let find = |p: usize, q: usize| target.iter().find(|b| b.p == p && b.q == q);
    for b in source {
        let width = binomial(m, b.q);
        if b.p < pmax {
            if let Some(t) = find(b.p + 1, b.q) {
                let piece = ps.complex.differential(b.p).kron(&Matrix::identity(width));
                for (i, j, v) in piece.iter() {
                    d.set(t.offset + i, b.offset + j, v.clone());
                }
            }
        }
        if b.q < m {
            if let Some(t) = find(b.p, b.q + 1) {
                let s = sign::<F>(b.p);
                let piece = Matrix::identity(ps.complex.dim(b.p)).kron(&ce.differential(b.q));
                for (i, j, v) in piece.iter() {
                    d.set(t.offset + i, b.offset + j, s.clone() * v.clone());
                }
            }
        }
    }
    d
}

/// Matrix of the tensor differential out of total degree `r`.
pub fn tensor_differential<F: Field>(
    algebroid: &TrivialAlgebroid<F>,
    r: usize,
    cap: usize,
) -> Result<Matrix<F>> {
    Ok(TensorComplex::new(algebroid, cap)?.differential(r))
}

/// Betti numbers of the tensor complex in degrees `0..=rmax`.
pub fn algebroid_betti<F: Field>(
    algebroid: &TrivialAlgebroid<F>,
    cap: usize,
    rmax: usize,
) -> Result<BettiTable> {
    Ok(TensorComplex::new(algebroid, cap)?
        .betti()?
        .resized(rmax + 1))
}

/// The tensor Betti numbers next to the convolution of the factors', each
/// computed from its own complex.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Kunneth {
    pub tensor: BettiTable,
    pub base: BettiTable,
    pub fiber: BettiTable,
    pub convolution: BettiTable,
}

impl Kunneth {
    pub fn holds(&self) -> bool {
        self.tensor == self.convolution
    }
}

pub fn kunneth<F: Field>(
    algebroid: &TrivialAlgebroid<F>,
    cap: usize,
    rmax: usize,
) -> Result<Kunneth> {
    let base = ps_betti::<F>(&algebroid.base, cap, rmax)?;
    let fiber = ce_betti(&algebroid.fiber)?;
    Ok(Kunneth {
        tensor: algebroid_betti(algebroid, cap, rmax)?,
        convolution: base.convolve(&fiber, rmax + 1),
        base,
        fiber,
    })
}

/// `(dω)(ξ_0, …, ξ_r)` computed intrinsically and through the tensor matrix.
#[derive(Clone, PartialEq)]
pub struct KoszulCheck<F> {
    pub koszul: PolyForm<F>,
    pub tensor: PolyForm<F>,
}

impl<F: Field> KoszulCheck<F> {
    pub fn agrees(&self) -> bool {
        self.koszul == self.tensor
    }
}

impl<F: Field> fmt::Debug for KoszulCheck<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "koszul: {}, tensor: {}", self.koszul, self.tensor)
    }
}

pub fn koszul_check<F: Field>(
    tc: &TensorComplex<F>,
    omega: &AlgebroidForm<F>,
    simplex: &Simplex,
    sections: &[Section<F>],
) -> Result<KoszulCheck<F>> {
    if omega.degree > 2 {
        return Err(Error::Unsupported(format!(
            "Koszul evaluation of a degree-{} form",
            omega.degree
        )));
    }
    let local = tc.local(omega, simplex)?;
    let koszul = tc.algebroid.koszul_differential(&local, sections)?;
    let d_omega = tc.apply_differential(omega)?;
    let tensor = if d_omega.blocks.is_empty() {
        LocalForm::zero(simplex.dim(), tc.algebroid.fiber.dim(), omega.degree + 1)
            .evaluate(sections)?
    } else {
        tc.local(&d_omega, simplex)?.evaluate(sections)?
    };
    Ok(KoszulCheck { koszul, tensor })
}

#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use crate::sullivan::strategies::poly_form;
    use crate::Q;
    use proptest::prelude::*;

    pub fn section(n: usize, m: usize, max_deg: u32) -> impl Strategy<Value = Section<Q>> {
        (
            proptest::collection::vec(poly_form(n, 0, max_deg), n),
            proptest::collection::vec(poly_form(n, 0, max_deg), m),
        )
            .prop_map(move |(v, f)| Section::new(n, v, f).unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::strategies::section;
    use super::*;
    use crate::scalar::int;
    use crate::sullivan::strategies::{poly_form, small_q};
    use crate::Q;
    use proptest::prelude::*;

    fn cx(tops: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::from_top_simplices(tops).unwrap()
    }

    fn simplex(n: usize) -> SimplicialComplex {
        cx(&[&(0..=n).collect::<Vec<_>>()])
    }

    fn circle() -> SimplicialComplex {
        cx(&[&[0, 1], &[1, 2], &[0, 2]])
    }

    fn t(n: usize, i: usize) -> PolyForm<Q> {
        PolyForm::coordinate(n, i)
    }

    fn unit(m: usize, k: usize) -> Vec<Q> {
        (0..m).map(|i| int(i64::from(i == k))).collect()
    }

    #[test]
    fn bracket_examples() {
        let a = TrivialAlgebroid::new(simplex(2), LieAlgebra::<Q>::abelian(2)).unwrap();
        let c1 = Section::constant_fiber(2, &[int(1), int(2)]);
        let c2 = Section::constant_fiber(2, &[int(3), int(-1)]);
        assert!(a.bracket(&c1, &c2).unwrap().is_zero());

        let d1 = Section::coordinate_field(2, 2, 1);
        let d2 = Section::coordinate_field(2, 2, 2);
        assert!(a.bracket(&d1, &d2).unwrap().is_zero());

        let a = TrivialAlgebroid::new(simplex(2), LieAlgebra::<Q>::sl2()).unwrap();
        let xi = Section::coordinate_field(2, 3, 1);
        let eta = Section::constant_fiber(2, &unit(3, 0));
        let lhs = a.bracket(&xi, &eta.scale(&t(2, 1)).unwrap()).unwrap();
        assert_eq!(lhs, eta);

        // [h, e] = 2e pointwise
        let e = Section::constant_fiber(2, &unit(3, 1));
        let he = a.bracket(&eta, &e).unwrap();
        assert_eq!(he, Section::constant_fiber(2, &[int(0), int(2), int(0)]));
    }

    #[test]
    fn bracket_rejects_mismatched_shapes() {
        let a = TrivialAlgebroid::new(simplex(2), LieAlgebra::<Q>::sl2()).unwrap();
        let ok = Section::<Q>::zero(2, 3);
        assert!(a.bracket(&ok, &Section::zero(2, 2)).is_err());
        assert!(a.bracket(&ok, &Section::zero(1, 3)).is_err());
        assert!(Section::new(2, vec![t(2, 1)], vec![]).is_err());
        assert!(Section::new(2, vec![t(2, 1), PolyForm::dt(2, 1)], vec![]).is_err());
    }

    #[test]
    fn invalid_fiber_is_rejected() {
        let mut g = LieAlgebra::<Q>::abelian(3);
        g.set_bracket(0, 1, vec![int(1), int(0), int(0)]).unwrap();
        g.set_bracket(1, 2, vec![int(0), int(0), int(1)]).unwrap();
        g.set_bracket(0, 2, vec![int(0), int(1), int(0)]).unwrap();
        if g.validate().is_err() {
            assert!(TrivialAlgebroid::new(simplex(1), g).is_err());
        }
    }

    fn algebras() -> Vec<LieAlgebra<Q>> {
        vec![
            LieAlgebra::abelian(2),
            LieAlgebra::heisenberg(),
            LieAlgebra::sl2(),
        ]
    }

    fn tensor(base: SimplicialComplex, g: LieAlgebra<Q>, cap: usize) -> TensorComplex<Q> {
        TensorComplex::new(&TrivialAlgebroid::new(base, g).unwrap(), cap).unwrap()
    }

    #[test]
    fn tensor_differential_squares_to_zero() {
        for base in [simplex(1), simplex(2), circle()] {
            for g in algebras() {
                for cap in 0..=2 {
                    let tc = tensor(base.clone(), g.clone(), cap);
                    assert_eq!(tc.complex().d_squared_failure(), None);
                }
            }
        }
    }

    #[test]
    fn tensor_differential_degenerate_cases() {
        // abelian fiber: d_ps ⊗ id
        let tc = tensor(circle(), LieAlgebra::abelian(2), 1);
        let d0 = tc.ps().complex.differential(0);
        for r in 0..tc.num_degrees() - 1 {
            let d = tc.differential(r);
            for b in tc.blocks(r) {
                if b.p == 0 {
                    let t = tc.blocks(r + 1).iter().find(|t| t.p == 1).unwrap();
                    let expected = d0.kron(&Matrix::identity(binomial(2, b.q)));
                    for i in 0..t.len {
                        for j in 0..b.len {
                            assert_eq!(d.get(t.offset + i, b.offset + j), expected.get(i, j));
                        }
                    }
                }
            }
        }
        // point base: the CE differential
        let g = LieAlgebra::<Q>::sl2();
        let tc = tensor(simplex(0), g.clone(), 2);
        for q in 0..3 {
            assert_eq!(
                tc.differential(q),
                crate::cealg::ce_differential(&g, q).unwrap()
            );
        }
    }

    #[test]
    fn algebroid_betti_examples() {
        let cases: Vec<(SimplicialComplex, LieAlgebra<Q>, Vec<usize>)> = vec![
            (simplex(0), LieAlgebra::sl2(), vec![1, 0, 0, 1]),
            (circle(), LieAlgebra::sl2(), vec![1, 1, 0, 1, 1]),
            (simplex(2), LieAlgebra::heisenberg(), vec![1, 2, 2, 1, 0, 0]),
            (simplex(1), LieAlgebra::heisenberg(), vec![1, 2, 2, 1, 0]),
        ];
        for (base, g, expected) in cases {
            let a = TrivialAlgebroid::new(base, g).unwrap();
            let rmax = expected.len() - 1;
            for cap in 1..=2 {
                let k = kunneth(&a, cap, rmax).unwrap();
                assert_eq!(k.tensor, BettiTable(expected.clone()));
                assert!(k.holds(), "{k:?}");
            }
        }
    }

    #[test]
    fn tangent_algebroid_is_the_piecewise_complex() {
        let a = TrivialAlgebroid::<Q>::tangent(circle());
        assert_eq!(algebroid_betti(&a, 1, 1).unwrap(), BettiTable(vec![1, 1]));
    }

    #[test]
    fn koszul_on_functions() {
        let g = LieAlgebra::<Q>::heisenberg();
        let tc = tensor(simplex(2), g, 2);
        let top = Simplex::new(vec![0, 1, 2]).unwrap();
        let basis = &tc.ps().bases[0];
        let coords: Vec<Q> = (0..basis.dim()).map(|i| int(i as i64 - 2)).collect();
        let f = basis.component(&coords, &top).unwrap();
        let omega = tc.form(0, &coords).unwrap();
        let xi = Section::new(2, vec![t(2, 2), PolyForm::one(2)], vec![t(2, 1); 3]).unwrap();
        let check = koszul_check(&tc, &omega, &top, std::slice::from_ref(&xi)).unwrap();
        assert!(check.agrees());
        assert_eq!(check.koszul, xi.derive(&f));
    }

    #[test]
    fn koszul_on_constant_covector() {
        let g = LieAlgebra::<Q>::sl2();
        let tc = tensor(simplex(2), g.clone(), 1);
        let top = Simplex::new(vec![0, 1, 2]).unwrap();
        // 1 ⊗ e^1 sits in block (0, 1)
        let k = simplex(2);
        let basis = &tc.ps().bases[0];
        let one = crate::PiecewiseForm::from_components(
            0,
            k.iter()
                .map(|s| (s.clone(), PolyForm::one(s.dim())))
                .collect(),
        );
        let b = tc.blocks(1).iter().find(|b| b.p == 0).unwrap();
        let mut coords = vec![int::<Q>(0); tc.dim(1)];
        for (i, c) in basis.coords_of(&one).unwrap().into_iter().enumerate() {
            coords[b.offset + i * 3 + 1] = c;
        }
        let omega = tc.form(1, &coords).unwrap();
        let local = tc.local(&omega, &top).unwrap();
        assert_eq!(local.parts().count(), 1);
        assert_eq!(local.parts().next().unwrap().1, &PolyForm::one(2));
        let (xa, xb) = (unit(3, 0), unit(3, 1));
        let sections = [
            Section::constant_fiber(2, &xa),
            Section::constant_fiber(2, &xb),
        ];
        let check = koszul_check(&tc, &omega, &top, &sections).unwrap();
        // −χ([h, e]) = −e^1(2e) = −2
        assert_eq!(check.koszul, PolyForm::constant(2, int(-2)));
        assert!(check.agrees());
        assert_eq!(g.bracket(&xa, &xb)[1], int(2));
    }

    #[test]
    fn koszul_rejects_high_degree() {
        let tc = tensor(simplex(2), LieAlgebra::sl2(), 1);
        let top = Simplex::new(vec![0, 1, 2]).unwrap();
        let omega = tc.form(3, &vec![int(0); tc.dim(3)]).unwrap();
        let err = koszul_check(&tc, &omega, &top, &vec![Section::zero(2, 3); 4]).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn local_differential_matches_matrix() {
        for g in [LieAlgebra::<Q>::heisenberg(), LieAlgebra::sl2()] {
            let tc = tensor(circle(), g.clone(), 2);
            for r in 0..tc.num_degrees() - 1 {
                for i in (0..tc.dim(r)).step_by(3) {
                    let mut coords = vec![int::<Q>(0); tc.dim(r)];
                    coords[i] = int(1);
                    let omega = tc.form(r, &coords).unwrap();
                    let d_omega = tc.apply_differential(&omega).unwrap();
                    for s in circle().iter() {
                        let lhs = tc.local(&omega, s).unwrap().differential(&g).unwrap();
                        let rhs = tc.local(&d_omega, s).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    fn lie(idx: usize) -> LieAlgebra<Q> {
        [LieAlgebra::heisenberg(), LieAlgebra::sl2()][idx].clone()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn bracket_is_antisymmetric(a in section(2, 3, 2), b in section(2, 3, 2), idx in 0..2usize) {
            let alg = TrivialAlgebroid::new(simplex(2), lie(idx)).unwrap();
            let ab = alg.bracket(&a, &b).unwrap();
            let ba = alg.bracket(&b, &a).unwrap();
            prop_assert_eq!(ab, -&ba);
        }

        #[test]
        fn bracket_satisfies_jacobi(
            a in section(2, 3, 2),
            b in section(2, 3, 2),
            c in section(2, 3, 2),
            idx in 0..2usize,
        ) {
            let alg = TrivialAlgebroid::new(simplex(2), lie(idx)).unwrap();
            let br = |x: &Section<Q>, y: &Section<Q>| alg.bracket(x, y).unwrap();
            let sum = &(&br(&a, &br(&b, &c)) + &br(&b, &br(&c, &a))) + &br(&c, &br(&a, &b));
            prop_assert!(sum.is_zero());
        }

        #[test]
        fn bracket_satisfies_leibniz(
            a in section(2, 3, 2),
            b in section(2, 3, 2),
            f in poly_form(2, 0, 2),
            idx in 0..2usize,
        ) {
            let alg = TrivialAlgebroid::new(simplex(2), lie(idx)).unwrap();
            let lhs = alg.bracket(&a, &b.scale(&f).unwrap()).unwrap();
            let rhs = &b.scale(&a.derive(&f)).unwrap() + &alg.bracket(&a, &b).unwrap().scale(&f).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn anchor_splits(a in section(2, 3, 2)) {
            let lifted = Section::from_vector_field(a.anchor(), 3).unwrap();
            prop_assert_eq!(lifted.anchor(), a.anchor());
        }

        #[test]
        fn koszul_agrees_on_random_forms(
            r in 0..3usize,
            seed in proptest::collection::vec(small_q(), 64),
            sections in proptest::collection::vec(section(2, 3, 1), 3),
            idx in 0..2usize,
        ) {
            let tc = tensor(simplex(2), lie(idx), 1);
            let coords: Vec<Q> = (0..tc.dim(r)).map(|i| seed[i % seed.len()].clone()).collect();
            let omega = tc.form(r, &coords).unwrap();
            let top = Simplex::new(vec![0, 1, 2]).unwrap();
            let check = koszul_check(&tc, &omega, &top, &sections[..r + 1]).unwrap();
            prop_assert!(check.agrees(), "{:?}", check);
        }
    }
}
