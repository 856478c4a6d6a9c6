//! Exact linear algebra over the rationals, plus a fraction-free rank
//! computation for matrices with polynomial entries.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::poly::{Poly, Variable};
use super::Rational;
use crate::error::{Error, Result};

/// Cooperative cancellation flag, polled between elimination pivots.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        let n = rows.len();
        Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Rational::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, cancel: Option<&CancelToken>) -> Result<Vec<usize>> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            if cancel.is_some_and(CancelToken::is_cancelled) {
                return Err(Error::Cancelled);
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                if !self[(r, j)].is_zero() {
                    self[(r, j)] *= &inv;
                }
            }
            let pivot_row: Vec<(usize, Rational)> = (c..self.cols)
                .filter(|&j| !self[(r, j)].is_zero())
                .map(|j| (j, self[(r, j)].clone()))
                .collect();
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for (j, v) in &pivot_row {
                    let t = &f * v;
                    self[(i, *j)] -= t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(pivots)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref(None).map(|p| p.len()).unwrap_or(0)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Basis of `{x : M x = 0}`, one vector per free column of the RREF.
///
/// The vector for free column `f` has a 1 in position `f` and zeros in the
/// other free positions.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Rational>> {
    nullspace_cancellable(m, None).expect("not cancellable")
}

pub fn nullspace_cancellable(
    m: &Matrix,
    cancel: Option<&CancelToken>,
) -> Result<Vec<Vec<Rational>>> {
    let mut r = m.clone();
    let pivots = r.rref(cancel)?;
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); m.cols];
        v[f] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, f)].clone();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// One solution of `A x = b` (free variables set to zero), if consistent.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    solve_many(a, &[b.to_vec()]).map(|mut xs| xs.remove(0))
}

/// Solves `A x = b` for several right-hand sides with a single elimination.
pub fn solve_many(a: &Matrix, rhs: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let k = rhs.len();
    let mut aug = Matrix::zeros(a.rows, a.cols + k);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        for (t, b) in rhs.iter().enumerate() {
            aug[(i, a.cols + t)] = b[i].clone();
        }
    }
    let pivots = aug.rref(None).ok()?;
    if pivots.iter().any(|&p| p >= a.cols) {
        return None;
    }
    let mut out = vec![vec![Rational::zero(); a.cols]; k];
    for (row, &p) in pivots.iter().enumerate() {
        for (t, x) in out.iter_mut().enumerate() {
            x[p] = aug[(row, a.cols + t)].clone();
        }
    }
    Some(out)
}

/// Rank over the fraction field of the polynomial ring, by fraction-free
/// (Bareiss) elimination with exact polynomial division.
pub fn poly_rank<V: Variable>(rows: &[Vec<Poly<V>>]) -> usize {
    let mut m: Vec<Vec<Poly<V>>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = Poly::<V>::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| (m[i][c].len(), m[i][c].total_degree()))
        else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let t = &(&m[r][c] * &m[i][j]) - &(&m[i][c] * &m[r][j]);
                m[i][j] = t
                    .exact_div(&prev)
                    .expect("Bareiss step is an exact division");
            }
            m[i][c] = Poly::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{rat, Polynomial, VariableId};

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(nullspace(&Matrix::identity(3)).is_empty());
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        assert_eq!(nullspace(&Matrix::zeros(2, 2)).len(), 2);
    }

    #[test]
    fn single_relation() {
        let basis = nullspace(&Matrix::from_i64(&[&[1, 1]]));
        assert_eq!(basis, vec![vec![rat(-1, 1), rat(1, 1)]]);
    }

    #[test]
    fn empty_shapes() {
        assert!(nullspace(&Matrix::zeros(0, 0)).is_empty());
        assert_eq!(nullspace(&Matrix::zeros(0, 3)).len(), 3);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let x = solve(&a, &[rat(3, 1), rat(6, 1)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![rat(3, 1), rat(6, 1)]);
        assert!(solve(&a, &[rat(3, 1), rat(7, 1)]).is_none());
    }

    #[test]
    fn cancellation_is_observed() {
        let token = CancelToken::new();
        token.cancel();
        assert_eq!(
            nullspace_cancellable(&Matrix::identity(2), Some(&token)),
            Err(Error::Cancelled)
        );
    }

    #[test]
    fn polynomial_rank() {
        let x = Polynomial::var(VariableId::q(1));
        let y = Polynomial::var(VariableId::q(2));
        // [[x, y], [x*y, y^2]] has rank 1; [[x, y], [y, x]] has rank 2.
        let dep = vec![vec![x.clone(), y.clone()], vec![&x * &y, &y * &y]];
        assert_eq!(poly_rank(&dep), 1);
        let ind = vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]];
        assert_eq!(poly_rank(&ind), 2);
    }
}
