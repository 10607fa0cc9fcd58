use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{norm_inf, null_space, rank, Matrix};
use crate::pds::ProductionDestruction;
use crate::scalar::Scalar;

/// Relative tolerance on column sums, scaled by `||A||_inf`.
pub const CONSERVATION_TOL: f64 = 1e-12;
/// Relative pivot threshold used for rank and null space computations.
pub const RANK_TOL: f64 = 1e-10;
/// Relative residual allowed for linear invariants `A^T n = 0`.
pub const INVARIANT_TOL: f64 = 1e-13;
/// Relative residual allowed for eigenpairs `A v = lambda v`.
pub const EIGENPAIR_TOL: f64 = 1e-10;
/// Relative residual allowed for steady states `A y* = 0`.
pub const STEADY_STATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    pub value: Complex<T>,
    pub vector: Vec<Complex<T>>,
}

impl<T: Scalar> EigenPair<T> {
    pub fn real(value: T, vector: &[T]) -> Self {
        Self {
            value: Complex::new(value, T::zero()),
            vector: vector.iter().map(|&x| Complex::new(x, T::zero())).collect(),
        }
    }

    fn residual(&self, a: &Matrix<T>) -> Result<(T, T)> {
        let av = a.mul_vec_complex(&self.vector)?;
        let res = av
            .iter()
            .zip(&self.vector)
            .fold(T::zero(), |m, (x, v)| m.max((x - self.value * v).norm()));
        let vnorm = self.vector.iter().fold(T::zero(), |m, v| m.max(v.norm()));
        Ok((res, vnorm))
    }
}

/// Linear conservative system `y' = A y` with `A` Metzler and `1^T A = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPds<T> {
    matrix: Matrix<T>,
    zero_multiplicity: usize,
    invariant_basis: Vec<Vec<T>>,
    eigenpairs: Vec<EigenPair<T>>,
}

/// Validates the structural assumptions on `A` and computes the dimension of
/// its kernel together with a basis of linear invariants.
///
/// Equality of algebraic and geometric multiplicity of the zero eigenvalue is
/// assumed, not checked.
pub fn validate_linear_pds<T: Scalar>(matrix: Matrix<T>) -> Result<LinearPds<T>> {
    let n = matrix.rows();
    if !matrix.is_square() || n < 2 {
        return Err(Error::BadShape { rows: matrix.rows(), cols: matrix.cols() });
    }
    for i in 0..n {
        for j in 0..n {
            if !matrix[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    let scale = matrix.norm_inf();
    if scale == T::zero() {
        return Err(Error::ZeroMatrix);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && matrix[(i, j)] < T::zero() {
                return Err(Error::NotMetzler { row: i, col: j });
            }
        }
    }
    let tol = T::tol(CONSERVATION_TOL) * scale;
    for j in 0..n {
        let sum = (0..n).fold(T::zero(), |s, i| s + matrix[(i, j)]);
        if sum.abs() > tol {
            return Err(Error::NotConservative { col: j, residual: sum.abs().to_f64().unwrap_or(f64::NAN) });
        }
    }
    let rank_tol = T::tol(RANK_TOL) * scale;
    let zero_multiplicity = n - rank(&matrix, rank_tol);
    let invariant_basis = invariant_basis_from_kernel(&matrix, rank_tol);
    Ok(LinearPds { matrix, zero_multiplicity, invariant_basis, eigenpairs: Vec::new() })
}

/// Basis of `ker(A^T)` whose first element is the all-ones vector.
fn invariant_basis_from_kernel<T: Scalar>(a: &Matrix<T>, tol: T) -> Vec<Vec<T>> {
    let n = a.rows();
    let ones = vec![T::one(); n];
    let mut basis = vec![ones];
    for v in null_space(&a.transpose(), tol) {
        let mut candidate = basis.clone();
        candidate.push(v.clone());
        let stacked = Matrix::from_fn(candidate.len(), n, |i, j| candidate[i][j]);
        if rank(&stacked, tol) == candidate.len() {
            basis.push(v);
        }
    }
    basis
}

impl<T: Scalar> LinearPds<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Geometric multiplicity of the zero eigenvalue, `N - rank(A)`.
    pub fn zero_multiplicity(&self) -> usize {
        self.zero_multiplicity
    }

    pub fn invariant_basis(&self) -> &[Vec<T>] {
        &self.invariant_basis
    }

    pub fn eigenpairs(&self) -> &[EigenPair<T>] {
        &self.eigenpairs
    }

    /// Values `n^T y` for every invariant `n` of the basis.
    pub fn invariants(&self, y: &[T]) -> Vec<T> {
        self.invariant_basis.iter().map(|n| crate::linalg::dot(n, y)).collect()
    }

    /// Replaces the computed invariant basis, checking that the vectors lie in
    /// `ker(A^T)`, are independent and span it.
    pub fn with_invariant_basis(mut self, basis: Vec<Vec<T>>) -> Result<Self> {
        let n = self.dim();
        let scale = self.matrix.norm_inf();
        let at = self.matrix.transpose();
        for v in &basis {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
            let r = norm_inf(&at.mul_vec(v)?);
            if r > T::tol(INVARIANT_TOL) * scale * norm_inf(v) {
                return Err(Error::InvalidParams(format!(
                    "vector {v:?} is not a linear invariant (residual {r})"
                )));
            }
        }
        let stacked = Matrix::from_fn(basis.len(), n, |i, j| basis[i][j]);
        if basis.len() != self.zero_multiplicity || rank(&stacked, T::tol(RANK_TOL) * stacked.norm_inf()) != basis.len() {
            return Err(Error::InvalidParams(format!(
                "invariant basis must contain {} independent vectors",
                self.zero_multiplicity
            )));
        }
        self.invariant_basis = basis;
        Ok(self)
    }

    /// Attaches known eigenpairs after checking their residuals.
    pub fn with_eigenpairs(mut self, pairs: Vec<EigenPair<T>>) -> Result<Self> {
        let scale = self.matrix.norm_inf();
        for p in &pairs {
            if p.vector.len() != self.dim() {
                return Err(Error::DimensionMismatch { expected: self.dim(), got: p.vector.len() });
            }
            let (res, vnorm) = p.residual(&self.matrix)?;
            if res > T::tol(EIGENPAIR_TOL) * scale * vnorm {
                return Err(Error::InvalidParams(format!(
                    "eigenpair with value {} has residual {res}",
                    p.value
                )));
            }
        }
        self.eigenpairs = pairs;
        Ok(self)
    }

    pub fn rates(&self) -> LinearRates<T> {
        rates_from_matrix(self)
    }
}

/// Rates `p_ij(y) = a_ij y_j`, `d_ij(y) = p_ji(y)` of a linear system.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRates<T> {
    matrix: Matrix<T>,
}

pub fn rates_from_matrix<T: Scalar>(pds: &LinearPds<T>) -> LinearRates<T> {
    LinearRates { matrix: pds.matrix.clone() }
}

impl<T: Scalar> ProductionDestruction<T> for LinearRates<T> {
    fn dim(&self) -> usize {
        self.matrix.rows()
    }

    fn production(&self, y: &[T]) -> Matrix<T> {
        let a = &self.matrix;
        Matrix::from_fn(a.rows(), a.cols(), |i, j| if i == j { T::zero() } else { a[(i, j)] * y[j] })
    }

    fn rhs(&self, y: &[T]) -> Vec<T> {
        self.matrix.mul_vec(y).expect("state has the system dimension")
    }
}

impl<T: Scalar> ProductionDestruction<T> for LinearPds<T> {
    fn dim(&self) -> usize {
        self.matrix.rows()
    }

    fn production(&self, y: &[T]) -> Matrix<T> {
        LinearRates { matrix: self.matrix.clone() }.production(y)
    }

    fn rhs(&self, y: &[T]) -> Vec<T> {
        self.matrix.mul_vec(y).expect("state has the system dimension")
    }
}

/// Positive element of `ker(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState<T> {
    vector: Vec<T>,
}

impl<T: Scalar> SteadyState<T> {
    pub fn new(pds: &LinearPds<T>, vector: Vec<T>) -> Result<Self> {
        if vector.len() != pds.dim() {
            return Err(Error::DimensionMismatch { expected: pds.dim(), got: vector.len() });
        }
        if let Some(i) = vector.iter().position(|&x| !(x > T::zero())) {
            return Err(Error::NonPositiveState { component: i });
        }
        let r = norm_inf(&pds.matrix.mul_vec(&vector)?);
        if r > T::tol(STEADY_STATE_TOL) * pds.matrix.norm_inf() * norm_inf(&vector) {
            return Err(Error::InvalidParams(format!("A y* has residual {r}")));
        }
        Ok(Self { vector })
    }

    pub fn vector(&self) -> &[T] {
        &self.vector
    }
}
