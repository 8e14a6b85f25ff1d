//! JSON input formats.
//!
//! Complex: `{"top_simplices": [[0, 1], [1, 2]]}`.
//! Lie algebra: `{"dim": 3, "brackets": [{"i": 0, "j": 1, "coeffs": {"2": "1"}}]}`,
//! `i < j`, omitted pairs and coefficients are zero, scalars are `"p/q"` strings.
//! Cover: `{"K1": [[0, 1]], "K2": [[1, 2]]}`, top simplices of each piece.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cealg::LieAlgebra;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::simplicial::SimplicialComplex;
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub top_simplices: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraFile {
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    #[serde(rename = "K1")]
    pub k1: Vec<Vec<usize>>,
    #[serde(rename = "K2")]
    pub k2: Vec<Vec<usize>>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let file: ComplexFile = from_json(text, "complex")?;
    SimplicialComplex::from_top_simplices(&file.top_simplices)
}

pub fn complex_to_file(k: &SimplicialComplex) -> ComplexFile {
    ComplexFile {
        top_simplices: k
            .top_simplices()
            .iter()
            .map(|s| s.vertices().to_vec())
            .collect(),
    }
}

/// Reads the structure constants; the Jacobi identity is left to the caller.
pub fn parse_lie_algebra(text: &str) -> Result<LieAlgebra<Q>> {
    let file: LieAlgebraFile = from_json(text, "Lie algebra")?;
    let mut g = LieAlgebra::abelian(file.dim);
    let mut seen = std::collections::BTreeSet::new();
    for entry in &file.brackets {
        if entry.i >= entry.j {
            return Err(Error::Parse(format!(
                "bracket entries need i < j, got ({}, {})",
                entry.i, entry.j
            )));
        }
        if !seen.insert((entry.i, entry.j)) {
            return Err(Error::Parse(format!(
                "bracket ({}, {}) given twice",
                entry.i, entry.j
            )));
        }
        let mut coeffs = vec![Q::from_integer(0.into()); file.dim];
        for (k, v) in &entry.coeffs {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("coefficient index {k:?} is not an integer")))?;
            if k >= file.dim {
                return Err(Error::Parse(format!(
                    "coefficient index {k} out of range for dimension {}",
                    file.dim
                )));
            }
            coeffs[k] = parse_rational(v)?;
        }
        g.set_bracket(entry.i, entry.j, coeffs)?;
    }
    Ok(g)
}

pub fn lie_algebra_to_file(g: &LieAlgebra<Q>) -> LieAlgebraFile {
    LieAlgebraFile {
        dim: g.dim(),
        brackets: g
            .structure_constants()
            .map(|(i, j, c)| BracketEntry {
                i,
                j,
                coeffs: c
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
                    .map(|(k, v)| (k.to_string(), format_rational(v)))
                    .collect(),
            })
            .collect(),
    }
}

/// The two pieces as subcomplexes of `k`.
pub fn parse_cover(
    text: &str,
    k: &SimplicialComplex,
) -> Result<(SimplicialComplex, SimplicialComplex)> {
    let file: CoverFile = from_json(text, "cover")?;
    let piece = |tops: &[Vec<usize>], name: &str| {
        k.subcomplex(tops)
            .map_err(|e| Error::InvalidCover(format!("{name}: {e}")))
    };
    Ok((piece(&file.k1, "K1")?, piece(&file.k2, "K2")?))
}
