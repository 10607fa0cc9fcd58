//! Dense direct solvers.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Relative pivot threshold below which [`LuFactor`] reports a singular matrix.
pub const SINGULAR_PIVOT_TOL: f64 = 1e-14;

/// LU factorization with partial pivoting, `P M = L U`.
#[derive(Debug, Clone)]
pub struct LuFactor<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> LuFactor<T> {
    pub fn new(m: &Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::BadShape { rows: m.rows(), cols: m.cols() });
        }
        let n = m.rows();
        let tol = T::lit(SINGULAR_PIVOT_TOL) * m.norm_inf();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmax > tol) || pmax == T::zero() {
                return Err(Error::Singular { pivot: k });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l != T::zero() {
                    for j in k + 1..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= l * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.len() });
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solves `M X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.dim();
        if b.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.rows() });
        }
        let mut out = Matrix::zeros(n, b.cols());
        let mut col = vec![T::zero(); n];
        for j in 0..b.cols() {
            for (i, c) in col.iter_mut().enumerate() {
                *c = b[(i, j)];
            }
            let x = self.solve(&col)?;
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }
}

/// Solves `M x = b` by LU with partial pivoting.
pub fn lu_solve<T: Scalar>(m: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    LuFactor::new(m)?.solve(b)
}

/// Reduced row echelon form computed with partial pivoting. Columns whose best
/// remaining pivot is at most `tol` are treated as free.
pub fn row_echelon<T: Scalar>(m: &Matrix<T>, tol: T) -> (Matrix<T>, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let (p, pmax) = (row..rows)
            .map(|i| (i, r[(i, col)].abs()))
            .fold((row, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax <= tol {
            for i in row..rows {
                r[(i, col)] = T::zero();
            }
            continue;
        }
        for j in 0..cols {
            let tmp = r[(row, j)];
            r[(row, j)] = r[(p, j)];
            r[(p, j)] = tmp;
        }
        let pivot = r[(row, col)];
        for j in 0..cols {
            r[(row, j)] /= pivot;
        }
        for i in 0..rows {
            if i == row {
                continue;
            }
            let f = r[(i, col)];
            if f != T::zero() {
                for j in 0..cols {
                    let v = r[(row, j)];
                    r[(i, j)] -= f * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (r, pivots)
}

/// Numerical rank with an absolute pivot threshold.
pub fn rank<T: Scalar>(m: &Matrix<T>, tol: T) -> usize {
    row_echelon(m, tol).1.len()
}

/// Basis of the null space of `m`, one vector per free column of the echelon form.
pub fn null_space<T: Scalar>(m: &Matrix<T>, tol: T) -> Vec<Vec<T>> {
    let (r, pivots) = row_echelon(m, tol);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)];
            }
            v
        })
        .collect()
}

/// Solves `M x = b` for a matrix with non-positive off-diagonal entries and
/// known, positive column sums `c_j = sum_i M_ij`, using a subtraction-free
/// elimination.
///
/// The diagonal of `m` is not read: each pivot is rebuilt from the running
/// column sums and the remaining off-diagonal magnitudes. With `b >= 0` every
/// operation adds non-negative quantities, so the result is non-negative and
/// accurate to a few ulps componentwise independent of the conditioning of
/// `M`. In particular `sum(x) = sum(b)` holds to rounding whenever all column
/// sums are one.
pub fn solve_m_matrix<T: Scalar>(m: &Matrix<T>, column_sums: &[T], b: &[T]) -> Result<Vec<T>> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::BadShape { rows: m.rows(), cols: m.cols() });
    }
    if column_sums.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: column_sums.len() });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    // Off-diagonal magnitudes; the working matrix is -off + diag(pivots).
    let mut off = Matrix::from_fn(n, n, |i, j| if i == j { T::zero() } else { -m[(i, j)] });
    let mut sums = column_sums.to_vec();
    let mut rhs = b.to_vec();
    let mut pivots = vec![T::zero(); n];
    for k in 0..n {
        let below = (k + 1..n).fold(T::zero(), |acc, i| acc + off[(i, k)]);
        let pivot = sums[k] + below;
        if !(pivot > T::zero()) {
            return Err(Error::Singular { pivot: k });
        }
        pivots[k] = pivot;
        for j in k + 1..n {
            let ukj = off[(k, j)];
            if ukj != T::zero() {
                let sk = sums[k];
                sums[j] += sk * ukj / pivot;
            }
        }
        for i in k + 1..n {
            let lik = off[(i, k)] / pivot;
            if lik == T::zero() {
                continue;
            }
            for j in k + 1..n {
                if i != j {
                    let ukj = off[(k, j)];
                    off[(i, j)] += lik * ukj;
                }
            }
            let rk = rhs[k];
            rhs[i] += lik * rk;
        }
    }
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let s = (k + 1..n).fold(rhs[k], |acc, j| acc + off[(k, j)] * x[j]);
        x[k] = s / pivots[k];
    }
    Ok(x)
}
