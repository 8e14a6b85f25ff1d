use super::PolyForm;
use crate::error::{Error, Result};
use crate::scalar::{factorial, sign, Field};

/// `∫ t^a dt1…dtn` over `{ti ≥ 0, Σ ti ≤ 1}`, which equals
/// `Π ai! / (n + Σ ai)!`.
pub fn integrate_monomial<F: Field>(exponents: &[u32]) -> F {
    let n = exponents.len();
    let total: u32 = exponents.iter().sum();
    let num = exponents
        .iter()
        .fold(F::one(), |acc, &a| acc * factorial::<F>(a as usize));
    num / factorial::<F>(n + total as usize)
}

/// Integral of a top-degree form over the standard simplex, with
/// `dt1∧…∧dtn` positively oriented.
pub fn integrate<F: Field>(form: &PolyForm<F>) -> Result<F> {
    if form.degree() != form.simplex_dim() {
        return Err(Error::DimensionMismatch(format!(
            "cannot integrate a {}-form over a {}-simplex",
            form.degree(),
            form.simplex_dim()
        )));
    }
    Ok(form.terms().fold(F::zero(), |acc, (m, c)| {
        acc + c.clone() * integrate_monomial::<F>(&m.exponents)
    }))
}

/// Whitney form of the face with vertex positions `face` (increasing,
/// within `0..=n`):
/// `p! Σ_k (−1)^k λ_{i_k} dλ_{i_0}∧…∧(omit k)∧…∧dλ_{i_p}`.
pub fn whitney<F: Field>(n: usize, face: &[usize]) -> Result<PolyForm<F>> {
    if face.is_empty() || face.windows(2).any(|w| w[0] >= w[1]) || face.iter().any(|&i| i > n) {
        return Err(Error::DimensionMismatch(format!(
            "{face:?} is not a face of the standard {n}-simplex"
        )));
    }
    let p = face.len() - 1;
    let lambdas: Vec<PolyForm<F>> = face.iter().map(|&i| PolyForm::barycentric(n, i)).collect();
    let dlambdas: Vec<PolyForm<F>> = lambdas.iter().map(PolyForm::differential).collect();
    let mut out = PolyForm::zero(n, p);
    for (k, lambda) in lambdas.iter().enumerate() {
        let mut term = lambda.clone();
        for (j, dl) in dlambdas.iter().enumerate() {
            if j != k {
                term = term.wedge(dl)?;
            }
        }
        out = &out + &term.scale(&sign::<F>(k));
    }
    Ok(out.scale(&factorial::<F>(p)))
}
