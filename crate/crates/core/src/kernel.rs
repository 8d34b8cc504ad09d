//! Exact integer kernels by fraction-free elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Content of a slice (gcd of all entries, non-negative).
fn content(row: &[BigInt]) -> BigInt {
    row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

fn normalize_row(row: &mut [BigInt]) {
    let c = content(row);
    if !c.is_zero() && !c.is_one() {
        row.iter_mut().for_each(|x| *x /= &c);
    }
}

/// Brings `rows` (each of length `cols`) into a reduced echelon form over
/// `Z` where every pivot column is zero outside its pivot row. Rows are
/// divided by their content after each update, so entries stay small.
/// Returns the pivot columns in row order.
fn integer_rref(rows: &mut Vec<Vec<BigInt>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // Smallest nonzero magnitude keeps growth down.
        let Some(pr) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
        else {
            continue;
        };
        rows.swap(r, pr);
        let pivot_row = rows[r].clone();
        let p = &pivot_row[c];
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let l = p.lcm(&row[c]);
            let fr = &l / &row[c];
            let fp = &l / p;
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &fr - y * &fp;
            }
            normalize_row(row);
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A basis of the rational kernel `{x : A x = 0}` of an `rows x cols`
/// integer matrix, each vector scaled to a primitive integer vector whose
/// first nonzero entry is positive.
pub fn integer_kernel(matrix: &[Vec<i64>], cols: usize) -> (usize, Vec<Vec<BigInt>>) {
    let mut rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let pivots = integer_rref(&mut rows, cols);
    let rank = pivots.len();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        // x_f = L, x_{pivot_r} = -a_{r,f} L / p_r with L the lcm of the pivots involved.
        let l = rows
            .iter()
            .zip(&pivots)
            .filter(|(row, _)| !row[f].is_zero())
            .fold(BigInt::one(), |acc, (row, &pc)| acc.lcm(&row[pc].abs()));
        let mut x = vec![BigInt::zero(); cols];
        x[f] = l.clone();
        for (row, &pc) in rows.iter().zip(&pivots) {
            if !row[f].is_zero() {
                x[pc] = -(&row[f] * &l) / &row[pc];
            }
        }
        normalize_row(&mut x);
        if x.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
            x.iter_mut().for_each(|v| *v = -&*v);
        }
        basis.push(x);
    }
    (rank, basis)
}
