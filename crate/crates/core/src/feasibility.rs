//! Exact nonnegative feasibility: find `c ≥ 0` with `A c = b` over the rationals.
//!
//! Phase-one simplex on a dense rational tableau with Bland's rule, so it
//! always terminates and the answer is exact: `Some` is a genuine solution and
//! `None` means the system is infeasible.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// `columns[j][i]` is entry `(i, j)` of `A`; `rhs` has one entry per row.
pub fn nonnegative_solution(columns: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = rhs.len();
    let ncols = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    if rows == 0 {
        return Some(vec![Rational::zero(); ncols]);
    }

    // Tableau layout: original columns, then one artificial per row, then rhs.
    let width = ncols + rows + 1;
    let rhs_col = width - 1;
    let mut tab: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let flip = rhs[i].is_negative();
            let mut row = Vec::with_capacity(width);
            for col in columns {
                row.push(if flip { -col[i].clone() } else { col[i].clone() });
            }
            for k in 0..rows {
                row.push(if k == i { Rational::from_integer(1.into()) } else { Rational::zero() });
            }
            row.push(rhs[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (ncols..ncols + rows).collect();

    // Reduced costs of the phase-one objective Σ artificials.
    let mut cost: Vec<Rational> = (0..width)
        .map(|j| {
            if (ncols..ncols + rows).contains(&j) {
                Rational::zero()
            } else {
                -tab.iter().fold(Rational::zero(), |acc, row| acc + &row[j])
            }
        })
        .collect();

    loop {
        let Some(enter) = (0..ncols).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best_ratio = Rational::zero();
        for i in 0..rows {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][rhs_col] / &tab[i][enter];
            let better = match leave {
                None => true,
                Some(l) => ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[l]),
            };
            if better {
                leave = Some(i);
                best_ratio = ratio;
            }
        }
        // Phase one is bounded below by zero, so an entering column always has a pivot.
        let leave = leave.expect("phase-one simplex is bounded");
        pivot(&mut tab, &mut cost, leave, enter);
        basis[leave] = enter;
    }

    if !cost[rhs_col].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &b) in basis.iter().enumerate() {
        if b < ncols {
            x[b] = tab[i][rhs_col].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Rational>], cost: &mut [Rational], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        if !v.is_zero() {
            *v /= &p;
        }
    }
    let pivot_row = tab[row].clone();
    let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for &j in &nz {
            r[j] -= &factor * &pivot_row[j];
        }
    }
    if !cost[col].is_zero() {
        let factor = cost[col].clone();
        for &j in &nz {
            cost[j] -= &factor * &pivot_row[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn cols(a: &[&[i64]]) -> Vec<Vec<Rational>> {
        // a is given row-major; transpose into columns
        let rows = a.len();
        let ncols = a[0].len();
        (0..ncols).map(|j| (0..rows).map(|i| int(a[i][j])).collect()).collect()
    }

    fn check(columns: &[Vec<Rational>], rhs: &[Rational], x: &[Rational]) {
        assert!(x.iter().all(|v| !v.is_negative()));
        for i in 0..rhs.len() {
            let lhs = columns.iter().zip(x).fold(Rational::zero(), |acc, (c, v)| acc + &c[i] * v);
            assert_eq!(lhs, rhs[i]);
        }
    }

    #[test]
    fn feasible_system() {
        let a = cols(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = [int(3), rat(1, 2)];
        let x = nonnegative_solution(&a, &b).unwrap();
        check(&a, &b, &x);
    }

    #[test]
    fn infeasible_sign() {
        let a = cols(&[&[1, 1]]);
        assert!(nonnegative_solution(&a, &[int(-1)]).is_none());
    }

    #[test]
    fn negative_rhs_with_negative_column() {
        let a = cols(&[&[1, -1], &[0, 2]]);
        let b = [int(-1), int(4)];
        let x = nonnegative_solution(&a, &b).unwrap();
        check(&a, &b, &x);
    }

    #[test]
    fn degenerate_and_redundant_rows() {
        let a = cols(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 0]]);
        let b = [int(6), int(12), int(0)];
        let x = nonnegative_solution(&a, &b).unwrap();
        check(&a, &b, &x);
        assert!(nonnegative_solution(&a, &[int(6), int(11), int(0)]).is_none());
    }

    #[test]
    fn empty_system() {
        assert_eq!(nonnegative_solution(&[], &[]), Some(vec![]));
        assert!(nonnegative_solution(&[], &[int(1)]).is_none());
        assert_eq!(nonnegative_solution(&[], &[int(0)]), Some(vec![]));
    }
}
