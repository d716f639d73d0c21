//! Exact feasibility of `A·x = b, x ≥ 0` over ℚ.
//!
//! Phase-one simplex on a dense tableau with Bland's rule, so it always
//! terminates. Problems here are tiny (a handful of equations, a few dozen
//! columns).

use num_traits::{Signed, Zero};

use crate::scalar::Q;

/// Returns a nonnegative solution of `a·x = b` if one exists.
///
/// `a` is given row-major; every row must have the same length.
pub(crate) fn nonnegative_solution(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.len();
    debug_assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    if rows == 0 {
        return Some(vec![Q::zero(); cols]);
    }

    // Tableau columns: original variables, then one artificial per row, then rhs.
    let width = cols + rows + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(rows);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r = vec![Q::zero(); width];
        for (j, v) in row.iter().enumerate() {
            r[j] = if flip { -v.clone() } else { v.clone() };
        }
        r[cols + i] = Q::from_integer(1.into());
        r[rhs] = if flip { -bi.clone() } else { bi.clone() };
        t.push(r);
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Reduced costs for minimising the sum of artificials.
    let mut cost = vec![Q::zero(); width];
    for r in &t {
        for j in 0..cols {
            cost[j] -= &r[j];
        }
        cost[rhs] -= &r[rhs];
    }

    while let Some(enter) = (0..cols + rows).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for (i, r) in t.iter().enumerate() {
            if r[enter].is_positive() {
                let ratio = &r[rhs] / &r[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so an entering column always
        // has a positive entry.
        let (pivot_row, _) = leave.expect("phase-one simplex is bounded");
        pivot(&mut t, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    if !cost[rhs].is_zero() {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < cols {
            x[bv] = t[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Q>], cost: &mut [Q], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    if !cost[col].is_zero() {
        let f = cost[col].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    fn check(a: &[Vec<Q>], b: &[Q], x: &[Q]) {
        assert!(x.iter().all(|v| !v.is_negative()));
        for (row, bi) in a.iter().zip(b) {
            let lhs: Q = row.iter().zip(x).map(|(u, v)| u * v).sum();
            assert_eq!(&lhs, bi);
        }
    }

    #[test]
    fn feasible_combination() {
        // [1,1] = 1·[1,0] + 1·[0,1]
        let a = mat(&[&[1, 0], &[0, 1]]);
        let b = vec![q(1), q(1)];
        let x = nonnegative_solution(&a, &b).unwrap();
        check(&a, &b, &x);
    }

    #[test]
    fn infeasible_sign() {
        let a = mat(&[&[1, 2]]);
        assert!(nonnegative_solution(&a, &[q(-1)]).is_none());
    }

    #[test]
    fn degenerate_and_negative_rhs() {
        let a = mat(&[&[1, -1, 0], &[0, 1, -1], &[1, 0, -1]]);
        let b = vec![q(-2), q(-3), q(-5)];
        let x = nonnegative_solution(&a, &b).unwrap();
        check(&a, &b, &x);
        let b = vec![q(-2), q(-3), q(-4)];
        assert!(nonnegative_solution(&a, &b).is_none());
    }
}
