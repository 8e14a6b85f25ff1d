//! Exact Gauss-Jordan elimination on sparse rows.
//!
//! Pivot order: the eligible column with the fewest entries among the
//! unpivoted rows (lowest index on ties), then within it the entry of
//! smallest magnitude (lowest row on ties). The order is a pure function of
//! the input, so every derived basis is reproducible.

use std::collections::BTreeMap;

use super::Matrix;
use crate::scalar::Field;

type Row<F> = BTreeMap<usize, F>;

/// Fully reduced rows plus the `(row, column)` pivot positions.
///
/// Each pivot column is zero outside its pivot row, where it is one.
struct Reduced<F> {
    rows: Vec<Row<F>>,
    pivots: Vec<(usize, usize)>,
}

/// `target -= factor * source`, dropping cancelled entries.
fn axpy<F: Field>(target: &mut Row<F>, factor: &F, source: &Row<F>) {
    for (&c, v) in source {
        let delta = factor.clone() * v.clone();
        let sum = match target.remove(&c) {
            Some(old) => old - delta,
            None => -delta,
        };
        if !sum.is_zero() {
            target.insert(c, sum);
        }
    }
}

/// Only columns `< eligible` may hold pivots.
fn reduce<F: Field>(mut rows: Vec<Row<F>>, eligible: usize) -> Reduced<F> {
    let mut active: Vec<bool> = vec![true; rows.len()];
    let mut pivots = Vec::new();
    loop {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (r, row) in rows.iter().enumerate() {
            if !active[r] {
                continue;
            }
            for &c in row.keys().take_while(|&&c| c < eligible) {
                *counts.entry(c).or_insert(0) += 1;
            }
        }
        let Some((&col, _)) = counts.iter().min_by_key(|(&c, &n)| (n, c)) else {
            break;
        };
        let mut best: Option<(usize, F)> = None;
        for (r, row) in rows.iter().enumerate() {
            if !active[r] {
                continue;
            }
            if let Some(v) = row.get(&col) {
                let mag = v.abs();
                if best.as_ref().is_none_or(|(_, b)| mag < *b) {
                    best = Some((r, mag));
                }
            }
        }
        let (prow, _) = best.expect("column count was positive");
        let inv = F::one() / rows[prow][&col].clone();
        for v in rows[prow].values_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = rows[prow].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == prow {
                continue;
            }
            if let Some(factor) = row.get(&col).cloned() {
                axpy(row, &factor, &pivot_row);
            }
        }
        active[prow] = false;
        pivots.push((prow, col));
    }
    Reduced { rows, pivots }
}

/// Rank over the field.
pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    if m.is_zero() {
        return 0;
    }
    // Eliminate along the shorter side.
    let rows = if m.nrows() <= m.ncols() {
        m.clone().into_rows()
    } else {
        m.transpose().into_rows()
    };
    let eligible = usize::MAX;
    reduce(rows, eligible).pivots.len()
}

/// A basis of the null space `{v : m·v = 0}`.
///
/// One vector per non-pivot column `f`, with a one in slot `f` and zeros in
/// every other non-pivot slot. Coordinates of a kernel element in this basis
/// are therefore its entries at [`free_columns`].
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    kernel_and_free_columns(m).0
}

/// The non-pivot columns, in increasing order; index `k` of this list is the
/// distinguished slot of the `k`-th vector returned by [`kernel_basis`].
pub fn free_columns<F: Field>(m: &Matrix<F>) -> Vec<usize> {
    kernel_and_free_columns(m).1
}

/// [`kernel_basis`] and [`free_columns`] from a single elimination.
pub fn kernel_and_free_columns<F: Field>(m: &Matrix<F>) -> (Vec<Vec<F>>, Vec<usize>) {
    let n = m.ncols();
    let red = reduce(m.clone().into_rows(), n);
    let mut is_pivot = vec![false; n];
    for &(_, c) in &red.pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&f| !is_pivot[f]).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(); n];
            v[f] = F::one();
            for &(r, c) in &red.pivots {
                if let Some(x) = red.rows[r].get(&f) {
                    v[c] = -x.clone();
                }
            }
            v
        })
        .collect();
    (basis, free)
}

/// Some `x` with `m·x = b`, or `None` when the system is inconsistent.
///
/// Free variables are set to zero.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(b.len(), m.nrows(), "right-hand side has the wrong length");
    let n = m.ncols();
    let mut rows = m.clone().into_rows();
    for (row, rhs) in rows.iter_mut().zip(b) {
        if !rhs.is_zero() {
            row.insert(n, rhs.clone());
        }
    }
    let red = reduce(rows, n);
    let mut pivot_row = vec![false; red.rows.len()];
    for &(r, _) in &red.pivots {
        pivot_row[r] = true;
    }
    let inconsistent = red
        .rows
        .iter()
        .enumerate()
        .any(|(r, row)| !pivot_row[r] && row.contains_key(&n));
    if inconsistent {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for &(r, c) in &red.pivots {
        if let Some(v) = red.rows[r].get(&n) {
            x[c] = v.clone();
        }
    }
    Some(x)
}

/// Solves `m·X = B` column by column, sharing one elimination.
pub fn solve_many<F: Field>(m: &Matrix<F>, rhs: &Matrix<F>) -> Option<Matrix<F>> {
    assert_eq!(
        rhs.nrows(),
        m.nrows(),
        "right-hand side has the wrong height"
    );
    let n = m.ncols();
    let k = rhs.ncols();
    let mut rows = m.clone().into_rows();
    for (r, row) in rows.iter_mut().enumerate() {
        for (&c, v) in rhs.row(r) {
            row.insert(n + c, v.clone());
        }
    }
    let red = reduce(rows, n);
    let mut pivot_row = vec![false; red.rows.len()];
    for &(r, _) in &red.pivots {
        pivot_row[r] = true;
    }
    if red
        .rows
        .iter()
        .enumerate()
        .any(|(r, row)| !pivot_row[r] && !row.is_empty())
    {
        return None;
    }
    let mut x = Matrix::zeros(n, k);
    for &(r, c) in &red.pivots {
        for (&j, v) in red.rows[r].range(n..) {
            x.set(c, j - n, v.clone());
        }
    }
    Some(x)
}
