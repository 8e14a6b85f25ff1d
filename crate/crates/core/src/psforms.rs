//! Piecewise polynomial forms over a simplicial complex.
//!
//! A piecewise `p`-form assigns a polynomial form to every simplex such that
//! restricting the form on `σ` to a face `τ` gives the form on `τ`. Only the
//! maximal simplices carry free coordinates; every other component is the
//! pullback from the first maximal simplex containing it.
//!
//! Everything here is finite-dimensional: forms have coefficient degree
//! `≤ cap`. Two truncations are available. [`Truncation::Full`] keeps every
//! such form; it is closed under `d` and face pullbacks but its top
//! coefficient degree is never hit by `d`, so its cohomology carries spurious
//! classes. [`Truncation::Trimmed`] additionally asks the coefficient-degree-
//! `cap` part to be annihilated by the radial contraction (the trimmed
//! polynomial spaces `P⁻_cap Λ^p`). That subcomplex contains the Whitney
//! forms for `cap ≥ 1` and computes simplicial cohomology; every complex in
//! this crate is built from it.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactla::{kernel_and_free_columns, BettiTable, FiniteComplex, Matrix};
use crate::scalar::Field;
use crate::simplicial::{simplicial_betti_upto, Simplex, SimplicialComplex};
use crate::sullivan::{
    differential_matrix, integrate, monomial_basis, pullback, pullback_matrix, trimming_matrix,
    whitney, FaceInclusion, MonomialBasis, PolyForm,
};

/// Which finite-dimensional space of piecewise forms to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truncation {
    /// All compatible forms of coefficient degree `≤ cap`.
    Full,
    /// The trimmed subspace, a subcomplex with the right cohomology.
    #[default]
    Trimmed,
}

/// A face-compatible family of forms, one per simplex.
#[derive(Clone, PartialEq)]
pub struct PiecewiseForm<F> {
    degree: usize,
    components: BTreeMap<Simplex, PolyForm<F>>,
}

impl<F: Field> PiecewiseForm<F> {
    /// Wraps components without checking compatibility; see [`Self::is_compatible`].
    pub fn from_components(degree: usize, components: BTreeMap<Simplex, PolyForm<F>>) -> Self {
        PiecewiseForm { degree, components }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn component(&self, s: &Simplex) -> Option<&PolyForm<F>> {
        self.components.get(s)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Simplex, &PolyForm<F>)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(PolyForm::is_zero)
    }

    /// Some facet inclusion `τ ⊂ σ` of `k` on which restriction disagrees.
    pub fn facet_incompatibility(&self, k: &SimplicialComplex) -> Option<(Simplex, Simplex)> {
        self.incompatibility(k, |sigma| sigma.facets())
    }

    /// Checks every face inclusion, not just facets.
    pub fn face_incompatibility(&self, k: &SimplicialComplex) -> Option<(Simplex, Simplex)> {
        self.incompatibility(k, |sigma| {
            sigma.faces().into_iter().filter(|t| t != sigma).collect()
        })
    }

    fn incompatibility(
        &self,
        k: &SimplicialComplex,
        faces: impl Fn(&Simplex) -> Vec<Simplex>,
    ) -> Option<(Simplex, Simplex)> {
        for sigma in k.iter() {
            let Some(outer) = self.components.get(sigma) else {
                return Some((sigma.clone(), sigma.clone()));
            };
            for tau in faces(sigma) {
                let inc = FaceInclusion::between(&tau, sigma).expect("face of sigma");
                let restricted = pullback(&inc, outer).ok();
                if restricted.as_ref() != self.components.get(&tau) {
                    return Some((tau, sigma.clone()));
                }
            }
        }
        None
    }

    pub fn is_compatible(&self, k: &SimplicialComplex) -> bool {
        self.facet_incompatibility(k).is_none()
    }

    /// Componentwise exterior derivative.
    pub fn differential(&self) -> Self {
        PiecewiseForm {
            degree: self.degree + 1,
            components: self
                .components
                .iter()
                .map(|(s, f)| (s.clone(), f.differential()))
                .collect(),
        }
    }

    /// Componentwise wedge product; both forms must cover the same simplices.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let mut components = BTreeMap::new();
        for (s, f) in &self.components {
            let g = other
                .components
                .get(s)
                .ok_or_else(|| Error::NotInComplex(s.vertices().to_vec()))?;
            components.insert(s.clone(), f.wedge(g)?);
        }
        Ok(PiecewiseForm {
            degree: self.degree + other.degree,
            components,
        })
    }
}

impl<F: Field> fmt::Display for PiecewiseForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, form)) in self.components.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{s}: {form}")?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for PiecewiseForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PiecewiseForm(p={}) {{ {} }}",
            self.degree,
            self.to_string().replace('\n', "; ")
        )
    }
}

/// A basis of the compatible `p`-forms of coefficient degree `≤ cap`.
///
/// Coordinates are "stacked": the monomial coordinates of each maximal
/// simplex, concatenated in [`SimplicialComplex::top_simplices`] order.
#[derive(Clone, Debug)]
pub struct PsBasis<F> {
    complex: SimplicialComplex,
    degree: usize,
    cap: usize,
    truncation: Truncation,
    tops: Vec<Simplex>,
    top_bases: Vec<MonomialBasis>,
    offsets: Vec<usize>,
    /// Maps basis coordinates to stacked coordinates (columns are basis elements).
    embedding: Matrix<F>,
    /// Stacked slots in which the basis is the identity.
    free: Vec<usize>,
    /// Index of the maximal simplex each simplex is read from.
    owner: BTreeMap<Simplex, usize>,
}

impl<F: Field> PsBasis<F> {
    /// All compatible `p`-forms of coefficient degree `≤ cap`.
    pub fn new(k: &SimplicialComplex, degree: usize, cap: usize) -> Self {
        Self::with_truncation(k, degree, cap, Truncation::Full)
    }

    /// The trimmed compatible `p`-forms; see [`Truncation::Trimmed`].
    pub fn trimmed(k: &SimplicialComplex, degree: usize, cap: usize) -> Self {
        Self::with_truncation(k, degree, cap, Truncation::Trimmed)
    }

    /// Solves the compatibility system on every pair of maximal simplices
    /// that share a face: both restrictions to the shared face must agree.
    /// The trimmed variant adds the local radial-contraction rows per simplex.
    pub fn with_truncation(
        k: &SimplicialComplex,
        degree: usize,
        cap: usize,
        truncation: Truncation,
    ) -> Self {
        let tops = k.top_simplices();
        let top_bases: Vec<MonomialBasis> = tops
            .iter()
            .map(|t| monomial_basis(t.dim(), degree, cap))
            .collect();
        let mut offsets = vec![0];
        for b in &top_bases {
            offsets.push(offsets.last().unwrap() + b.len());
        }
        let unknowns = *offsets.last().unwrap();

        let mut owner = BTreeMap::new();
        for (i, t) in tops.iter().enumerate() {
            for face in t.faces() {
                owner.entry(face).or_insert(i);
            }
        }

        let mut blocks: Vec<Matrix<F>> = Vec::new();
        if truncation == Truncation::Trimmed {
            for (i, t) in tops.iter().enumerate() {
                let local: Matrix<F> = trimming_matrix(t.dim(), degree, cap);
                let mut row = Matrix::zeros(local.nrows(), unknowns);
                for (r, c, v) in local.iter() {
                    row.set(r, offsets[i] + c, v.clone());
                }
                blocks.push(row);
            }
        }
        for a in 0..tops.len() {
            for b in a + 1..tops.len() {
                let Some(shared) = tops[a].intersection(&tops[b]) else {
                    continue;
                };
                if monomial_basis(shared.dim(), degree, cap).is_empty() {
                    continue;
                }
                let pa: Matrix<F> = pullback_matrix(
                    &FaceInclusion::between(&shared, &tops[a]).expect("common face"),
                    degree,
                    cap,
                );
                let pb: Matrix<F> = pullback_matrix(
                    &FaceInclusion::between(&shared, &tops[b]).expect("common face"),
                    degree,
                    cap,
                );
                let mut row = Matrix::zeros(pa.nrows(), unknowns);
                for (r, c, v) in pa.iter() {
                    row.set(r, offsets[a] + c, v.clone());
                }
                for (r, c, v) in pb.iter() {
                    row.set(r, offsets[b] + c, -v.clone());
                }
                blocks.push(row);
            }
        }
        let constraints = if blocks.is_empty() {
            Matrix::zeros(0, unknowns)
        } else {
            Matrix::vstack(&blocks.iter().collect::<Vec<_>>())
        };
        let (kernel, free) = kernel_and_free_columns(&constraints);
        let embedding = Matrix::from_columns(unknowns, &kernel);
        PsBasis {
            complex: k.clone(),
            degree,
            cap,
            truncation,
            tops,
            top_bases,
            offsets,
            embedding,
            free,
            owner,
        }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn tops(&self) -> &[Simplex] {
        &self.tops
    }

    pub fn embedding(&self) -> &Matrix<F> {
        &self.embedding
    }

    pub fn stacked_len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn top_index(&self, s: &Simplex) -> Option<usize> {
        self.owner.get(s).copied()
    }

    /// Basis coordinates of stacked columns; fails if a column is not a
    /// compatible form.
    pub fn from_stacked(&self, stacked: &Matrix<F>) -> Result<Matrix<F>> {
        assert_eq!(stacked.nrows(), self.stacked_len());
        let mut x = Matrix::zeros(self.dim(), stacked.ncols());
        for (i, &f) in self.free.iter().enumerate() {
            for (&c, v) in stacked.row(f) {
                x.set(i, c, v.clone());
            }
        }
        if &self.embedding * &x != *stacked {
            return Err(Error::NotInSpan(format!(
                "stacked coordinates are not a compatible {}-form at cap {}",
                self.degree, self.cap
            )));
        }
        Ok(x)
    }

    /// The component on `s` of the form with basis coordinates `coords`.
    pub fn component(&self, coords: &[F], s: &Simplex) -> Result<PolyForm<F>> {
        assert_eq!(coords.len(), self.dim());
        let t = self
            .top_index(s)
            .ok_or_else(|| Error::NotInComplex(s.vertices().to_vec()))?;
        let stacked = self.embedding.apply(coords);
        let block = &stacked[self.offsets[t]..self.offsets[t + 1]];
        let top_form = self.top_bases[t].form(block);
        pullback(&FaceInclusion::between(s, &self.tops[t])?, &top_form)
    }

    pub fn form(&self, coords: &[F]) -> PiecewiseForm<F> {
        let components = self
            .complex
            .iter()
            .map(|s| {
                (
                    s.clone(),
                    self.component(coords, s).expect("simplex of the complex"),
                )
            })
            .collect();
        PiecewiseForm::from_components(self.degree, components)
    }

    pub fn element(&self, i: usize) -> PiecewiseForm<F> {
        let mut coords = vec![F::zero(); self.dim()];
        coords[i] = F::one();
        self.form(&coords)
    }

    /// Basis coordinates of a piecewise form given by its components.
    pub fn coords_of(&self, form: &PiecewiseForm<F>) -> Result<Vec<F>> {
        if form.degree() != self.degree {
            return Err(Error::DimensionMismatch(format!(
                "{}-form against a basis of {}-forms",
                form.degree(),
                self.degree
            )));
        }
        if let Some((tau, sigma)) = form.facet_incompatibility(&self.complex) {
            return Err(Error::NotInSpan(format!(
                "components disagree on {tau} ⊂ {sigma}"
            )));
        }
        let mut stacked = Vec::with_capacity(self.stacked_len());
        for (t, top) in self.tops.iter().enumerate() {
            let comp = form
                .component(top)
                .ok_or_else(|| Error::NotInComplex(top.vertices().to_vec()))?;
            stacked.extend(self.top_bases[t].coords(comp)?);
        }
        let x = self.from_stacked(&Matrix::from_columns(stacked.len(), &[stacked]))?;
        Ok(x.column(0))
    }

    /// Block-diagonal stacked operator built from one matrix per maximal simplex.
    fn per_top<G>(&self, f: G) -> Matrix<F>
    where
        G: Fn(usize, &Simplex) -> Matrix<F>,
    {
        let blocks: Vec<Matrix<F>> = self.tops.iter().enumerate().map(|(i, t)| f(i, t)).collect();
        Matrix::block_diag(&blocks.iter().collect::<Vec<_>>())
    }
}

/// `d_ps` from `source` (degree `p`) to `target` (degree `p + 1`, same complex and cap).
pub fn ps_differential_between<F: Field>(
    source: &PsBasis<F>,
    target: &PsBasis<F>,
) -> Result<Matrix<F>> {
    if target.degree != source.degree + 1
        || target.cap != source.cap
        || target.truncation != source.truncation
        || target.complex != source.complex
    {
        return Err(Error::DimensionMismatch(
            "bases are not consecutive degrees of one complex".into(),
        ));
    }
    let p = source.degree;
    let cap = source.cap;
    let stacked_d = source.per_top(|_, t| differential_matrix(t.dim(), p, cap));
    target.from_stacked(&(&stacked_d * &source.embedding))
}

/// `d_ps: Ω^p_ps → Ω^{p+1}_ps` between the trimmed bases at coefficient cap `cap`.
pub fn ps_differential<F: Field>(k: &SimplicialComplex, p: usize, cap: usize) -> Result<Matrix<F>> {
    ps_differential_between(
        &PsBasis::trimmed(k, p, cap),
        &PsBasis::trimmed(k, p + 1, cap),
    )
}

/// The truncated piecewise complex with its bases, degrees `0..=top`.
#[derive(Clone, Debug)]
pub struct PsComplex<F> {
    pub bases: Vec<PsBasis<F>>,
    pub complex: FiniteComplex<F>,
}

impl<F: Field> PsComplex<F> {
    /// The trimmed complex.
    pub fn new(k: &SimplicialComplex, cap: usize, top: usize) -> Result<Self> {
        Self::with_truncation(k, cap, top, Truncation::Trimmed)
    }

    pub fn with_truncation(
        k: &SimplicialComplex,
        cap: usize,
        top: usize,
        truncation: Truncation,
    ) -> Result<Self> {
        let bases: Vec<PsBasis<F>> = (0..=top)
            .into_par_iter()
            .map(|p| PsBasis::with_truncation(k, p, cap, truncation))
            .collect();
        let diffs = (0..top)
            .into_par_iter()
            .map(|p| ps_differential_between(&bases[p], &bases[p + 1]))
            .collect::<Result<Vec<_>>>()?;
        let complex = FiniteComplex::new(bases.iter().map(PsBasis::dim).collect(), diffs)?;
        Ok(PsComplex { bases, complex })
    }

    pub fn betti(&self) -> Result<BettiTable> {
        self.complex.betti()
    }
}

/// Betti numbers of the trimmed piecewise complex in degrees `0..=pmax`.
pub fn ps_betti<F: Field>(k: &SimplicialComplex, cap: usize, pmax: usize) -> Result<BettiTable> {
    ps_betti_with::<F>(k, cap, pmax, Truncation::Trimmed)
}

pub fn ps_betti_with<F: Field>(
    k: &SimplicialComplex,
    cap: usize,
    pmax: usize,
    truncation: Truncation,
) -> Result<BettiTable> {
    let top = pmax.max(k.dim().unwrap_or(0)) + 1;
    Ok(PsComplex::<F>::with_truncation(k, cap, top, truncation)?
        .betti()?
        .resized(pmax + 1))
}

/// Integration of each component over the `p`-simplices: rows are
/// `p`-simplices of the complex, columns basis elements.
pub fn integration_matrix<F: Field>(basis: &PsBasis<F>) -> Matrix<F> {
    let k = &basis.complex;
    let p = basis.degree;
    let simplices = k.simplices(p);
    let mut stacked = Matrix::zeros(simplices.len(), basis.stacked_len());
    for (r, sigma) in simplices.iter().enumerate() {
        let t = basis.top_index(sigma).expect("simplex of the complex");
        let inc = FaceInclusion::between(sigma, &basis.tops[t]).expect("owner contains simplex");
        for (c, f) in basis.top_bases[t].forms::<F>().iter().enumerate() {
            let restricted = pullback(&inc, f).expect("dimensions agree");
            let value = integrate(&restricted).expect("top degree on the face");
            stacked.set(r, basis.offsets[t] + c, value);
        }
    }
    &stacked * &basis.embedding
}

/// Integration on the trimmed basis.
pub fn integration_map<F: Field>(k: &SimplicialComplex, p: usize, cap: usize) -> Matrix<F> {
    integration_matrix(&PsBasis::trimmed(k, p, cap))
}

/// Whitney forms of the elementary cochains, expressed in `basis`
/// (needs `cap ≥ 1`): columns are `p`-simplices.
pub fn whitney_matrix<F: Field>(basis: &PsBasis<F>) -> Result<Matrix<F>> {
    if basis.cap == 0 {
        return Err(Error::Unsupported(
            "Whitney forms need coefficient degree at least 1".into(),
        ));
    }
    let k = &basis.complex;
    let p = basis.degree;
    let simplices = k.simplices(p);
    let mut stacked = Matrix::zeros(basis.stacked_len(), simplices.len());
    for (c, rho) in simplices.iter().enumerate() {
        for (t, top) in basis.tops.iter().enumerate() {
            let Some(pos) = rho.positions_in(top) else {
                continue;
            };
            let w: PolyForm<F> = whitney(top.dim(), &pos)?;
            for (i, v) in basis.top_bases[t].coords(&w)?.into_iter().enumerate() {
                stacked.set(basis.offsets[t] + i, c, v);
            }
        }
    }
    basis.from_stacked(&stacked)
}

/// The Whitney map into the trimmed basis at cap 1, which is spanned by
/// Whitney forms.
pub fn whitney_map<F: Field>(k: &SimplicialComplex, p: usize) -> Result<Matrix<F>> {
    whitney_matrix(&PsBasis::trimmed(k, p, 1))
}

/// Restriction from a complex to a subcomplex: drops every component
/// outside the subcomplex.
pub fn restriction_between<F: Field>(from: &PsBasis<F>, to: &PsBasis<F>) -> Result<Matrix<F>> {
    if !to.complex.is_subcomplex_of(&from.complex) {
        return Err(Error::NotSubcomplex(
            "target is not contained in the source complex".into(),
        ));
    }
    if from.degree != to.degree || from.cap != to.cap || from.truncation != to.truncation {
        return Err(Error::DimensionMismatch(
            "restriction between different degrees or caps".into(),
        ));
    }
    let p = from.degree;
    let cap = from.cap;
    let mut stacked = Matrix::zeros(to.stacked_len(), from.stacked_len());
    for (j, small_top) in to.tops.iter().enumerate() {
        let t = from.top_index(small_top).expect("subcomplex simplex");
        let inc = FaceInclusion::between(small_top, &from.tops[t]).expect("owner contains simplex");
        let pb: Matrix<F> = pullback_matrix(&inc, p, cap);
        for (r, c, v) in pb.iter() {
            stacked.set(to.offsets[j] + r, from.offsets[t] + c, v.clone());
        }
    }
    to.from_stacked(&(&stacked * &from.embedding))
}

pub fn restriction<F: Field>(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    p: usize,
    cap: usize,
) -> Result<Matrix<F>> {
    if !l.is_subcomplex_of(k) {
        return Err(Error::NotSubcomplex(
            "restriction target is not a subcomplex".into(),
        ));
    }
    restriction_between(&PsBasis::trimmed(k, p, cap), &PsBasis::trimmed(l, p, cap))
}

/// Evidence that integration induces an isomorphism onto simplicial cohomology.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IntegrationCertificate {
    pub cap: usize,
    /// `δ∘I = I∘d_ps` in every degree.
    pub stokes: bool,
    /// `I∘W = id` in every degree (vacuous when `cap = 0`).
    pub section: bool,
    /// `W∘δ = d_ps∘W` in every degree (vacuous when `cap = 0`).
    pub whitney_chain_map: bool,
    pub ps_betti: BettiTable,
    pub simplicial_betti: BettiTable,
}

impl IntegrationCertificate {
    pub fn holds(&self) -> bool {
        self.stokes
            && self.section
            && self.whitney_chain_map
            && self.ps_betti == self.simplicial_betti
    }
}

pub fn integration_certificate<F: Field>(
    k: &SimplicialComplex,
    cap: usize,
    pmax: usize,
) -> Result<IntegrationCertificate> {
    let top = pmax.max(k.dim().unwrap_or(0)) + 1;
    let ps = PsComplex::<F>::new(k, cap, top)?;
    let simp = k.cochain_complex::<F>(top);
    let integrals: Vec<Matrix<F>> = ps.bases.iter().map(integration_matrix).collect();
    let stokes = (0..top).all(|p| {
        &simp.differential(p) * &integrals[p] == &integrals[p + 1] * &ps.complex.differential(p)
    });
    let (section, whitney_chain_map) = if cap == 0 {
        (true, true)
    } else {
        let whitneys = ps
            .bases
            .iter()
            .map(whitney_matrix)
            .collect::<Result<Vec<_>>>()?;
        let section =
            (0..=top).all(|p| &integrals[p] * &whitneys[p] == Matrix::identity(k.count(p)));
        let chain = (0..top).all(|p| {
            &whitneys[p + 1] * &simp.differential(p) == &ps.complex.differential(p) * &whitneys[p]
        });
        (section, chain)
    };
    Ok(IntegrationCertificate {
        cap,
        stokes,
        section,
        whitney_chain_map,
        ps_betti: ps.betti()?.resized(pmax + 1),
        simplicial_betti: simplicial_betti_upto::<F>(k, pmax),
    })
}

/// Betti numbers at `cap` and `cap + 1`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Stabilization {
    pub at_cap: BettiTable,
    pub at_next_cap: BettiTable,
}

impl Stabilization {
    pub fn stable(&self) -> bool {
        self.at_cap == self.at_next_cap
    }
}

pub fn stabilization<F: Field>(
    k: &SimplicialComplex,
    cap: usize,
    pmax: usize,
) -> Result<Stabilization> {
    Ok(Stabilization {
        at_cap: ps_betti::<F>(k, cap, pmax)?,
        at_next_cap: ps_betti::<F>(k, cap + 1, pmax)?,
    })
}
