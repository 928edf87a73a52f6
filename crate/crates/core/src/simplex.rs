//! Dense tableau simplex over any [`Scalar`].
//!
//! Solves `max c·x` subject to `A x <= b`, `x >= 0` with `b >= 0`, so the slack
//! basis is an initial feasible vertex and no phase one is needed. Pivoting uses
//! Bland's rule: the entering column is the lowest-index column with a positive
//! improvement, and ratio-test ties go to the lowest-index basic variable. With
//! exact scalars this terminates; with floats it is deterministic for a given
//! input.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpOptions {
    /// Entries at most this large in magnitude are treated as zero when pivoting.
    /// Ignored by exact scalars.
    pub pivot_tol: f64,
    pub max_pivots: usize,
}

impl LpOptions {
    /// Settings for re-verification runs.
    pub fn tightened() -> Self {
        LpOptions { pivot_tol: 1e-15, ..Self::default() }
    }
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { pivot_tol: 1e-12, max_pivots: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<V> {
    pub objective: V,
    /// Optimal `x`.
    pub primal: Vec<V>,
    /// Optimal multipliers of the `A x <= b` rows, i.e. an optimal solution of
    /// `min b·y` subject to `Aᵀ y >= c`, `y >= 0`.
    pub dual: Vec<V>,
    pub pivots: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpError {
    ShapeMismatch,
    NegativeRhs,
    Unbounded,
    PivotLimit,
}

pub fn maximize<V: Scalar>(
    objective: &[V],
    rows: &[Vec<V>],
    rhs: &[V],
    options: &LpOptions,
) -> Result<LpSolution<V>, LpError> {
    let n = objective.len();
    let r = rows.len();
    if rhs.len() != r || rows.iter().any(|row| row.len() != n) {
        return Err(LpError::ShapeMismatch);
    }
    if rhs.iter().any(|b| *b < V::zero()) {
        return Err(LpError::NegativeRhs);
    }
    let eps = options.pivot_tol;
    let width = n + r + 1;
    let mut tab: Vec<Vec<V>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut line = Vec::with_capacity(width);
            line.extend(row.iter().cloned());
            line.extend((0..r).map(|k| if k == i { V::one() } else { V::zero() }));
            line.push(rhs[i].clone());
            line
        })
        .collect();
    // Reduced costs; the last entry holds the current objective value.
    let mut cost: Vec<V> = objective.iter().map(|c| -c.clone()).collect();
    cost.extend((0..=r).map(|_| V::zero()));
    let mut basis: Vec<usize> = (n..n + r).collect();

    let mut pivots = 0;
    while let Some(enter) = (0..n + r).find(|&j| (-cost[j].clone()).exceeds(eps)) {
        let mut leave: Option<(usize, V)> = None;
        for i in 0..r {
            if !tab[i][enter].exceeds(eps) {
                continue;
            }
            let ratio = tab[i][n + r].clone() / tab[i][enter].clone();
            let better = match &leave {
                None => true,
                Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((row, _)) = leave else {
            return Err(LpError::Unbounded);
        };
        if pivots == options.max_pivots {
            return Err(LpError::PivotLimit);
        }
        pivot(&mut tab, &mut cost, row, enter);
        basis[row] = enter;
        pivots += 1;
    }

    let mut primal = vec![V::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            primal[j] = tab[i][n + r].clone();
        }
    }
    let dual = cost[n..n + r].to_vec();
    Ok(LpSolution { objective: cost[n + r].clone(), primal, dual, pivots })
}

fn pivot<V: Scalar>(tab: &mut [Vec<V>], cost: &mut [V], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v = v.clone() / p.clone();
    }
    tab[row][col] = V::one();
    let pivot_row = tab[row].clone();
    for (i, line) in tab.iter_mut().enumerate() {
        if i != row {
            eliminate(line, &pivot_row, col);
        }
    }
    eliminate(cost, &pivot_row, col);
}

fn eliminate<V: Scalar>(line: &mut [V], pivot_row: &[V], col: usize) {
    let factor = line[col].clone();
    if factor == V::zero() {
        return;
    }
    for (v, p) in line.iter_mut().zip(pivot_row) {
        if *p != V::zero() {
            *v = v.clone() - factor.clone() * p.clone();
        }
    }
    line[col] = V::zero();
}
