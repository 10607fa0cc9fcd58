//! Production-destruction systems `y_i' = P_i(y) - D_i(y)`.

mod catalog;
mod linear;

pub use catalog::{test_problem, CatalogEntry, ExactSolution, Mode, TestProblem};
pub use linear::{
    rates_from_matrix, validate_linear_pds, EigenPair, LinearPds, LinearRates, SteadyState,
    CONSERVATION_TOL, EIGENPAIR_TOL, INVARIANT_TOL, RANK_TOL, STEADY_STATE_TOL,
};

use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Rate functions of a production-destruction system.
///
/// `production(y)[(i, j)]` is `p_ij(y) >= 0`, the rate at which constituent `j`
/// is turned into constituent `i`. The default destruction matrix is the
/// transpose of the production matrix, which makes the system conservative.
pub trait ProductionDestruction<T: Scalar> {
    fn dim(&self) -> usize;

    fn production(&self, y: &[T]) -> Matrix<T>;

    fn destruction(&self, y: &[T]) -> Matrix<T> {
        self.production(y).transpose()
    }

    /// Right-hand side `P_i(y) - D_i(y)`.
    fn rhs(&self, y: &[T]) -> Vec<T> {
        let p = self.production(y);
        let d = self.destruction(y);
        (0..self.dim())
            .map(|i| {
                p.row(i).iter().fold(T::zero(), |a, &x| a + x)
                    - d.row(i).iter().fold(T::zero(), |a, &x| a + x)
            })
            .collect()
    }
}

/// Conservative system defined by a closure returning the production matrix.
pub struct FnRates<F> {
    dim: usize,
    production: F,
}

impl<F> FnRates<F> {
    pub fn new(dim: usize, production: F) -> Self {
        Self { dim, production }
    }
}

impl<T: Scalar, F: Fn(&[T]) -> Matrix<T>> ProductionDestruction<T> for FnRates<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn production(&self, y: &[T]) -> Matrix<T> {
        (self.production)(y)
    }
}

impl<T: Scalar, R: ProductionDestruction<T> + ?Sized> ProductionDestruction<T> for &R {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn production(&self, y: &[T]) -> Matrix<T> {
        (**self).production(y)
    }

    fn destruction(&self, y: &[T]) -> Matrix<T> {
        (**self).destruction(y)
    }
}
