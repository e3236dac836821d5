//! Exact Gaussian elimination over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row, in order. Pivots are taken left to right, first nonzero
/// entry from the top.
pub fn rref(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// One solution of `Σ_j c_j · columns[j] = target`, free variables set to
/// zero, or `None` if the target is outside the column span.
pub fn solve_columns(columns: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let p = target.len();
    let k = columns.len();
    let mut aug: Vec<Vec<Q>> = (0..p)
        .map(|i| {
            let mut row: Vec<Q> = columns.iter().map(|col| col[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut sol = vec![Q::zero(); k];
    for (row, &c) in aug.iter().zip(&pivots) {
        sol[c] = row[k].clone();
    }
    Some(sol)
}

/// Integer form of a reduced row: `denominator · x_pivot = Σ numerators[f] · x_free[f]`.
#[derive(Debug, Clone)]
pub struct PivotRelation {
    pub pivot: usize,
    pub denominator: BigInt,
    pub numerators: Vec<BigInt>,
}

/// Parametrization of the rational nullspace of a matrix by its free columns.
#[derive(Debug, Clone)]
pub struct NullspaceParam {
    pub free: Vec<usize>,
    pub relations: Vec<PivotRelation>,
}

pub fn nullspace_param(rows: &[Vec<Q>], ncols: usize) -> NullspaceParam {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let relations = m
        .iter()
        .zip(&pivots)
        .map(|(row, &pc)| {
            let lcm = free.iter().fold(BigInt::one(), |acc, &f| acc.lcm(row[f].denom()));
            let numerators = free
                .iter()
                .map(|&f| {
                    let scaled = -&row[f] * Q::from_integer(lcm.clone());
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect();
            PivotRelation { pivot: pc, denominator: lcm.abs(), numerators }
        })
        .collect();
    NullspaceParam { free, relations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn rref_of_rank_deficient_matrix() {
        let mut m = vec![vec![q(1, 1), q(2, 1), q(3, 1)], vec![q(2, 1), q(4, 1), q(6, 1)]];
        let piv = rref(&mut m);
        assert_eq!(piv, vec![0]);
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn span_membership() {
        let cols = vec![vec![q(1, 1)], vec![q(-1, 1)]];
        assert_eq!(solve_columns(&cols, &[q(1, 1)]), Some(vec![q(1, 1), q(0, 1)]));
        let cols = vec![vec![q(1, 2), q(0, 1)]];
        assert_eq!(solve_columns(&cols, &[q(1, 1), q(1, 1)]), None);
        assert_eq!(solve_columns(&[], &[q(0, 1)]), Some(vec![]));
        assert_eq!(solve_columns(&[], &[q(1, 1)]), None);
    }

    #[test]
    fn nullspace_of_ap_row() {
        let p = nullspace_param(&[vec![q(1, 1), q(-2, 1), q(1, 1)]], 3);
        assert_eq!(p.free, vec![1, 2]);
        let rel = &p.relations[0];
        assert_eq!(rel.pivot, 0);
        assert_eq!(rel.denominator, BigInt::from(1));
        assert_eq!(rel.numerators, vec![BigInt::from(2), BigInt::from(-1)]);
    }
}
