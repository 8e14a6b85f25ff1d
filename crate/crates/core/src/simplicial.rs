//! Finite abstract simplicial complexes and their simplicial cochains.
//!
//! Every simplex is oriented by its increasing vertex order. Within a
//! dimension, simplices are indexed lexicographically by vertex list; that
//! order fixes the rows and columns of every matrix built from a complex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{BettiTable, FiniteComplex, Matrix};
use crate::scalar::{sign, Field};

/// A nonempty, strictly increasing list of vertex identifiers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts the vertices; rejects empty lists and repeated vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        let original = vertices.clone();
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(original));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The face opposite the `k`-th vertex.
    pub fn facet(&self, k: usize) -> Option<Simplex> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(k);
        Some(Simplex(v))
    }

    pub fn facets(&self) -> Vec<Simplex> {
        (0..self.0.len()).filter_map(|k| self.facet(k)).collect()
    }

    /// All nonempty faces, including `self`.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    /// Positions of this simplex's vertices inside `other`'s vertex list.
    pub fn positions_in(&self, other: &Simplex) -> Option<Vec<usize>> {
        self.0
            .iter()
            .map(|v| other.0.binary_search(v).ok())
            .collect()
    }

    /// The common face, if the vertex sets meet.
    pub fn intersection(&self, other: &Simplex) -> Option<Simplex> {
        let common: Vec<usize> = self
            .0
            .iter()
            .copied()
            .filter(|v| other.0.binary_search(v).is_ok())
            .collect();
        (!common.is_empty()).then_some(Simplex(common))
    }
}

impl TryFrom<Vec<usize>> for Simplex {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<usize> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A face-closed finite set of simplices, stratified by dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// `strata[p]` holds the `p`-simplices in lexicographic order.
    strata: Vec<Vec<Simplex>>,
    index: BTreeMap<Simplex, usize>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The face closure of the given simplices.
    pub fn from_top_simplices<V: AsRef<[usize]>>(tops: &[V]) -> Result<Self> {
        let simplices = tops
            .iter()
            .map(|t| Simplex::new(t.as_ref().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_simplices(simplices))
    }

    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut all = BTreeSet::new();
        for s in simplices {
            if all.contains(&s) {
                continue;
            }
            all.extend(s.faces());
        }
        Self::from_closed_set(all)
    }

    fn from_closed_set(all: BTreeSet<Simplex>) -> Self {
        let mut strata: Vec<Vec<Simplex>> = Vec::new();
        for s in all {
            let d = s.dim();
            if strata.len() <= d {
                strata.resize(d + 1, Vec::new());
            }
            strata[d].push(s);
        }
        for stratum in &mut strata {
            stratum.sort();
        }
        let index = strata
            .iter()
            .flat_map(|st| st.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        SimplicialComplex { strata, index }
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.strata.len().checked_sub(1)
    }

    pub fn vertex_count(&self) -> usize {
        self.count(0)
    }

    pub fn count(&self, p: usize) -> usize {
        self.strata.get(p).map_or(0, Vec::len)
    }

    pub fn simplices(&self, p: usize) -> &[Simplex] {
        self.strata.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.strata.iter().flatten()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Lexicographic position of `s` among simplices of its dimension.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Maximal simplices, ordered by dimension then lexicographically.
    pub fn top_simplices(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<&Simplex> = BTreeSet::new();
        let mut facets = Vec::new();
        for stratum in self.strata.iter().rev() {
            for s in stratum {
                if !covered.contains(s) {
                    facets.push(s.clone());
                }
            }
            for s in stratum {
                for f in s.facets() {
                    if let Some((k, _)) = self.index.get_key_value(&f) {
                        covered.insert(k);
                    }
                }
            }
        }
        facets.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
        facets
    }

    /// The subcomplex generated by `tops`, each of which must lie in `self`.
    pub fn subcomplex<V: AsRef<[usize]>>(&self, tops: &[V]) -> Result<Self> {
        let simplices = tops
            .iter()
            .map(|t| Simplex::new(t.as_ref().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        if let Some(bad) = simplices.iter().find(|s| !self.contains(s)) {
            return Err(Error::NotInComplex(bad.vertices().to_vec()));
        }
        Ok(Self::from_simplices(simplices))
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    pub fn union(&self, other: &SimplicialComplex) -> Self {
        Self::from_closed_set(self.iter().chain(other.iter()).cloned().collect())
    }

    pub fn intersection(&self, other: &SimplicialComplex) -> Self {
        Self::from_closed_set(self.iter().filter(|s| other.contains(s)).cloned().collect())
    }

    /// Rows: `(p+1)`-simplices; columns: `p`-simplices.
    /// `(δf)(σ) = Σ_k (−1)^k f(σ minus its k-th vertex)`.
    pub fn coboundary_matrix<F: Field>(&self, p: usize) -> Matrix<F> {
        let rows = self.simplices(p + 1);
        let mut m = Matrix::zeros(rows.len(), self.count(p));
        for (r, sigma) in rows.iter().enumerate() {
            for k in 0..=p + 1 {
                let face = sigma.facet(k).expect("positive dimension");
                let c = self.index_of(&face).expect("complex is face-closed");
                m.set(r, c, sign(k));
            }
        }
        m
    }

    /// The simplicial cochain complex in degrees `0..=top`.
    pub fn cochain_complex<F: Field>(&self, top: usize) -> FiniteComplex<F> {
        let dims = (0..=top).map(|p| self.count(p)).collect();
        let diffs = (0..top).map(|p| self.coboundary_matrix(p)).collect();
        FiniteComplex::new(dims, diffs).expect("shapes agree by construction")
    }
}

/// Betti numbers of the simplicial cochain complex, degrees `0..=dim`.
pub fn simplicial_betti<F: Field>(k: &SimplicialComplex) -> BettiTable {
    match k.dim() {
        Some(d) => simplicial_betti_upto::<F>(k, d),
        None => BettiTable::default(),
    }
}

/// Betti numbers in degrees `0..=pmax`.
pub fn simplicial_betti_upto<F: Field>(k: &SimplicialComplex, pmax: usize) -> BettiTable {
    k.cochain_complex::<F>(pmax + 1)
        .betti()
        .expect("δ∘δ = 0")
        .resized(pmax + 1)
}

/// A simplicial `p`-cochain, valued on the `p`-simplices in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialCochain<F> {
    pub degree: usize,
    pub values: Vec<F>,
}

impl<F: Field> SimplicialCochain<F> {
    pub fn zero(k: &SimplicialComplex, degree: usize) -> Self {
        SimplicialCochain {
            degree,
            values: vec![F::zero(); k.count(degree)],
        }
    }

    /// The cochain that is one on `s` and zero elsewhere.
    pub fn indicator(k: &SimplicialComplex, s: &Simplex) -> Result<Self> {
        let i = k
            .index_of(s)
            .ok_or_else(|| Error::NotInComplex(s.vertices().to_vec()))?;
        let mut c = Self::zero(k, s.dim());
        c.values[i] = F::one();
        Ok(c)
    }

    pub fn value(&self, k: &SimplicialComplex, s: &Simplex) -> Option<&F> {
        (s.dim() == self.degree)
            .then(|| k.index_of(s))
            .flatten()
            .map(|i| &self.values[i])
    }

    pub fn coboundary(&self, k: &SimplicialComplex) -> Self {
        SimplicialCochain {
            degree: self.degree + 1,
            values: k.coboundary_matrix(self.degree).apply(&self.values),
        }
    }
}
