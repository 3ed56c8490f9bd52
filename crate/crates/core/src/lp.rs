//! Exact dense simplex over the rationals.
//!
//! Solves `max c.x` subject to `A x <= b`, `x >= 0` with `b >= 0`, so the
//! all-slack basis is feasible. Bland's rule guarantees termination.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("objective is unbounded")]
    Unbounded,
    #[error("right-hand side must be nonnegative (row {0})")]
    NegativeRhs(usize),
    #[error("constraint matrix is ragged")]
    Shape,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
    /// Optimal dual prices, one per constraint row.
    pub duals: Vec<Rational>,
    pub pivots: usize,
}

pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Result<LpSolution, LpError> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(LpError::Shape);
    }
    if let Some(r) = b.iter().position(|v| v.is_negative()) {
        return Err(LpError::NegativeRhs(r));
    }
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let mut row = vec![Rational::zero(); width];
            row[..n].clone_from_slice(&a[r]);
            row[n + r] = Rational::from_integer(1.into());
            row[rhs] = b[r].clone();
            row
        })
        .collect();
    let mut z = vec![Rational::zero(); width];
    for (j, cj) in c.iter().enumerate() {
        z[j] = -cj;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut pivots = 0;

    while let Some(enter) = (0..n + m).find(|&j| z[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((p, _)) = leave else {
            return Err(LpError::Unbounded);
        };
        pivot(&mut t, &mut z, p, enter);
        basis[p] = enter;
        pivots += 1;
    }

    let mut x = vec![Rational::zero(); n];
    for (r, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = t[r][rhs].clone();
        }
    }
    Ok(LpSolution { value: z[rhs].clone(), x, duals: z[n..n + m].to_vec(), pivots })
}

fn pivot(t: &mut [Vec<Rational>], z: &mut [Rational], p: usize, col: usize) {
    let inv = t[p][col].recip();
    let support: Vec<usize> = (0..t[p].len()).filter(|&j| !t[p][j].is_zero()).collect();
    for &j in &support {
        t[p][j] = &t[p][j] * &inv;
    }
    let prow = t[p].clone();
    for (r, row) in t.iter_mut().enumerate() {
        if r == p || row[col].is_zero() {
            continue;
        }
        let f = row[col].clone();
        for &j in &support {
            row[j] -= &f * &prow[j];
        }
    }
    if !z[col].is_zero() {
        let f = z[col].clone();
        for &j in &support {
            z[j] -= &f * &prow[j];
        }
    }
}
