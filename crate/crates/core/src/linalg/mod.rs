//! Dense linear algebra kernel: matrices, direct solvers and polynomials.

mod matrix;
mod polynomial;
mod solve;

pub use matrix::{dot, norm_inf, Matrix};
pub use polynomial::{
    complex_rational_eval, integrate_polynomial, lagrange_basis, lagrange_basis_all, InterpolatoryQuadrature,
    MappedPolynomial, Polynomial,
    MAX_LAGRANGE_NODES, POLE_TOL,
};
pub use solve::{lu_solve, null_space, rank, row_echelon, solve_m_matrix, LuFactor, SINGULAR_PIVOT_TOL};
