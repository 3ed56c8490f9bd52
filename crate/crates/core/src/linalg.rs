//! Dense Gaussian elimination over GF(2^b).

use crate::field::{FieldCtx, FieldElem};

/// Rank of the span of `rows`.
pub fn rank(field: &FieldCtx, rows: &[Vec<FieldElem>]) -> usize {
    let mut m: Vec<Vec<FieldElem>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = field.inv(m[rank][col]).expect("pivot is nonzero");
        for x in &mut m[rank][col..] {
            *x = field.mul(*x, inv);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col];
                for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = field.add(*x, field.mul(factor, p));
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Finds coefficients `c` with `sum_j c_j * vectors[j] == target`, if any exist.
pub fn solve_combination(field: &FieldCtx, vectors: &[Vec<FieldElem>], target: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let n = vectors.len();
    let dim = target.len();
    // Augmented system: one row per coordinate of the target, one column per vector.
    let mut m: Vec<Vec<FieldElem>> = (0..dim)
        .map(|row| {
            let mut r: Vec<FieldElem> = vectors.iter().map(|v| v[row]).collect();
            r.push(target[row]);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..dim).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = field.inv(m[rank][col]).expect("pivot is nonzero");
        for x in &mut m[rank][col..] {
            *x = field.mul(*x, inv);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col];
                for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = field.add(*x, field.mul(factor, p));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if (rank..dim).any(|r| !m[r][n].is_zero()) {
        return None;
    }
    let mut out = vec![FieldElem::ZERO; n];
    for (row, &col) in pivots.iter().enumerate() {
        out[col] = m[row][n];
    }
    Some(out)
}

/// `sum_j coeffs[j] * vectors[j]`.
pub fn combine(field: &FieldCtx, coeffs: &[FieldElem], vectors: &[&[FieldElem]], dim: usize) -> Vec<FieldElem> {
    let mut acc = vec![FieldElem::ZERO; dim];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(v.iter()) {
            *a = field.add(*a, field.mul(*c, *x));
        }
    }
    acc
}

pub fn dot(field: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    a.iter().zip(b).fold(FieldElem::ZERO, |acc, (x, y)| field.add(acc, field.mul(*x, *y)))
}

pub fn unit(dim: usize, i: usize) -> Vec<FieldElem> {
    let mut v = vec![FieldElem::ZERO; dim];
    v[i] = FieldElem::ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_solve_over_gf4() {
        let f = FieldCtx::new(2).unwrap();
        let g = f.x();
        let a = vec![FieldElem::ONE, g];
        let b = vec![g, f.mul(g, g)]; // g * a
        assert_eq!(rank(&f, &[a.clone(), b.clone()]), 1);
        assert_eq!(rank(&f, &[a.clone(), unit(2, 0)]), 2);
        assert!(solve_combination(&f, &[a.clone(), b.clone()], &unit(2, 0)).is_none());
        let c = solve_combination(&f, &[a.clone(), unit(2, 0)], &unit(2, 1)).unwrap();
        assert_eq!(combine(&f, &c, &[&a, &unit(2, 0)], 2), unit(2, 1));
    }
}
