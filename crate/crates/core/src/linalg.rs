//! Exact linear algebra: rational row reduction and integer Hermite normal form.

use num_traits::{One, Zero};

use crate::arith::{primitive_int, IntVec, Rat};
use crate::error::{Error, Result};

/// Reduced row echelon form. Returns the nonzero rows and pivot columns.
pub fn rref(rows: &[Vec<Rat>], cols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rat>], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

pub fn rank_int(rows: &[IntVec], cols: usize) -> usize {
    let q: Vec<Vec<Rat>> = rows.iter().map(|r| crate::arith::to_rat_vec(r)).collect();
    rank(&q, cols)
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let (m, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Nullspace basis scaled to primitive integer vectors.
pub fn integer_nullspace(rows: &[Vec<Rat>], cols: usize) -> Result<Vec<IntVec>> {
    nullspace(rows, cols).iter().map(|v| primitive_int(v)).collect()
}

/// Solve `x . rows = target` over the rationals, if solvable.
pub fn solve_left(rows: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let cols = target.len();
    let n = rows.len();
    // transpose: unknowns are coefficients on rows
    let mut aug: Vec<Vec<Rat>> = (0..cols)
        .map(|j| {
            let mut r: Vec<Rat> = rows.iter().map(|row| row[j].clone()).collect();
            r.push(target[j].clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug, n + 1);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = m[i][n].clone();
    }
    aug.clear();
    Some(x)
}

/// Row-style Hermite normal form with a unimodular transform `u`, so that
/// `u * m = h`. The first `rank` rows of `h` are the echelon basis with
/// positive pivots and reduced entries above each pivot; the remaining rows
/// are zero and the matching rows of `u` span the integer left kernel.
#[derive(Debug, Clone)]
pub struct Hnf {
    pub h: Vec<Vec<i128>>,
    pub u: Vec<Vec<i128>>,
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn checked_row_op(target: &mut [i128], src: &[i128], q: i128) -> Result<()> {
    for (t, s) in target.iter_mut().zip(src) {
        *t = t
            .checked_sub(q.checked_mul(*s).ok_or(Error::Overflow)?)
            .ok_or(Error::Overflow)?;
    }
    Ok(())
}

pub fn hnf(rows: &[IntVec], cols: usize) -> Result<Hnf> {
    let n = rows.len();
    let mut h: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below r
            let best = (r..n)
                .filter(|&i| h[i][c] != 0)
                .min_by_key(|&i| h[i][c].abs());
            let Some(b) = best else { break };
            h.swap(r, b);
            u.swap(r, b);
            let mut done = true;
            for i in r + 1..n {
                if h[i][c] != 0 {
                    let q = h[i][c].div_euclid(h[r][c]);
                    let (hr, ur) = (h[r].clone(), u[r].clone());
                    checked_row_op(&mut h[i], &hr, q)?;
                    checked_row_op(&mut u[i], &ur, q)?;
                    if h[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < n && h[r][c] != 0 {
            if h[r][c] < 0 {
                for x in h[r].iter_mut() {
                    *x = -*x;
                }
                for x in u[r].iter_mut() {
                    *x = -*x;
                }
            }
            let (hr, ur) = (h[r].clone(), u[r].clone());
            for i in 0..r {
                let q = h[i][c].div_euclid(hr[c]);
                if q != 0 {
                    checked_row_op(&mut h[i], &hr, q)?;
                    checked_row_op(&mut u[i], &ur, q)?;
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    Ok(Hnf { h, u, pivots })
}

pub fn to_i64_vec(v: &[i128]) -> Result<IntVec> {
    v.iter()
        .map(|&x| i64::try_from(x).map_err(|_| Error::Overflow))
        .collect()
}

/// Integer coefficients `y` with `y . rows = target`, if they exist.
pub fn solve_integer(rows: &[IntVec], target: &[i64]) -> Result<Option<Vec<i64>>> {
    let cols = target.len();
    let f = hnf(rows, cols)?;
    let mut rem: Vec<i128> = target.iter().map(|&x| x as i128).collect();
    let mut y = vec![0i128; rows.len()];
    for (i, &p) in f.pivots.iter().enumerate() {
        let piv = f.h[i][p];
        if rem[p] % piv != 0 {
            return Ok(None);
        }
        let q = rem[p] / piv;
        checked_row_op(&mut rem, &f.h[i], q)?;
        y[i] = q;
    }
    if rem.iter().any(|&x| x != 0) {
        return Ok(None);
    }
    // y . h = target and h = u . m, so (y . u) . m = target
    let mut coeffs = vec![0i128; rows.len()];
    for (i, yi) in y.iter().enumerate() {
        if *yi != 0 {
            for j in 0..rows.len() {
                coeffs[j] = coeffs[j]
                    .checked_add(yi.checked_mul(f.u[i][j]).ok_or(Error::Overflow)?)
                    .ok_or(Error::Overflow)?;
            }
        }
    }
    to_i64_vec(&coeffs).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn nullspace_of_line() {
        let ns = integer_nullspace(&q(&[&[1, -1]]), 2).unwrap();
        assert_eq!(ns, vec![vec![1, 1]]);
    }

    #[test]
    fn hnf_transform_identity() {
        let rows = vec![vec![2, 0], vec![0, 2], vec![1, 1]];
        let f = hnf(&rows, 2).unwrap();
        assert_eq!(f.rank(), 2);
        assert_eq!(f.h[0], vec![1, 1]);
        assert_eq!(f.h[1], vec![0, 2]);
        for (i, urow) in f.u.iter().enumerate() {
            for c in 0..2 {
                let s: i128 = urow.iter().zip(&rows).map(|(a, r)| a * r[c] as i128).sum();
                assert_eq!(s, f.h[i][c]);
            }
        }
    }

    #[test]
    fn integer_solutions() {
        let rows = vec![vec![2], vec![3]];
        let y = solve_integer(&rows, &[1]).unwrap().unwrap();
        assert_eq!(2 * y[0] + 3 * y[1], 1);
        assert!(solve_integer(&[vec![2, 0]], &[1, 0]).unwrap().is_none());
    }

    #[test]
    fn left_solve() {
        let rows = q(&[&[1, 0], &[1, 1]]);
        let x = solve_left(&rows, &[rat(3), rat(2)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(2)]);
        assert!(solve_left(&q(&[&[1, 1]]), &[rat(1), rat(0)]).is_none());
    }
}
