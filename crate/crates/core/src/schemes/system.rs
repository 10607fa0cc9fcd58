//! Assembly and solution of modified Patankar linear systems.

use crate::error::{Error, Result};
use crate::linalg::{lu_solve, solve_m_matrix, Matrix};
use crate::pds::ProductionDestruction;
use crate::scalar::Scalar;

/// Production and destruction matrices evaluated at one stage value.
#[derive(Debug, Clone)]
pub struct StageRates<T> {
    pub production: Matrix<T>,
    pub destruction: Matrix<T>,
}

impl<T: Scalar> StageRates<T> {
    /// Evaluates both matrices and rejects negative or non-finite entries.
    pub fn eval<R: ProductionDestruction<T> + ?Sized>(rates: &R, y: &[T]) -> Result<Self> {
        let out = Self { production: rates.production(y), destruction: rates.destruction(y) };
        let n = y.len();
        for m in [&out.production, &out.destruction] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, got: m.rows() });
            }
            if let Some(k) = m.as_slice().iter().position(|&x| !(x >= T::zero() && x.is_finite())) {
                return Err(Error::InvalidRate { row: k / n, col: k % n });
            }
        }
        Ok(out)
    }
}

/// Linear system `(I + diag(d) - Off) x = b` where `Off` has a zero diagonal.
///
/// Column sums of the system matrix are tracked separately as
/// `1 + defect_j`; for a conservative system every defect is exactly zero,
/// which lets the solver reconstruct pivots without cancellation.
#[derive(Debug, Clone)]
pub struct PatankarSystem<T> {
    off: Matrix<T>,
    diag: Vec<T>,
    defect: Vec<T>,
}

impl<T: Scalar> PatankarSystem<T> {
    pub fn new(n: usize) -> Self {
        Self { off: Matrix::zeros(n, n), diag: vec![T::zero(); n], defect: vec![T::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Adds `w dt sum_j (p_ij x_j / sigma_j - d_ij x_i / sigma_i)` to the
    /// right-hand side of the stage equation. Entries whose weighted value is
    /// negative are moved to the other Patankar index, which keeps the system
    /// an M-matrix.
    pub fn add_weighted(&mut self, w: T, rates: &StageRates<T>, sigma: &[T], dt: T) {
        self.add_terms(w * dt, &rates.production, &rates.destruction, sigma);
    }

    /// Same as [`Self::add_weighted`] with production and destruction swapped,
    /// as required for negative correction weights in deferred correction.
    pub fn add_swapped(&mut self, w: T, rates: &StageRates<T>, sigma: &[T], dt: T) {
        self.add_terms(-w * dt, &rates.production, &rates.destruction, sigma);
    }

    /// Adds the combined rates `sum_k w_k p_ij(y_k)` and `sum_k w_k d_ij(y_k)`
    /// as a single term, so that only the sign of each combined entry decides
    /// its Patankar index.
    pub fn add_combined(&mut self, terms: &[(T, &StageRates<T>)], sigma: &[T], dt: T) {
        let n = self.dim();
        let mut prod = Matrix::zeros(n, n);
        let mut dest = Matrix::zeros(n, n);
        for &(w, r) in terms {
            prod.add_scaled(w, &r.production);
            dest.add_scaled(w, &r.destruction);
        }
        self.add_terms(dt, &prod, &dest, sigma);
    }

    fn add_terms(&mut self, s: T, prod: &Matrix<T>, dest: &Matrix<T>, sigma: &[T]) {
        if s == T::zero() {
            return;
        }
        let zero = T::zero();
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let p = s * prod[(i, j)];
                let d = s * dest[(i, j)];
                if p > zero {
                    self.off[(i, j)] += p / sigma[j];
                } else if p < zero {
                    self.diag[i] -= p / sigma[i];
                }
                if d > zero {
                    self.diag[i] += d / sigma[i];
                } else if d < zero {
                    self.off[(i, j)] -= d / sigma[j];
                }
            }
        }
        // Column j loses what row j puts on its diagonal and gains what the
        // other rows take from x_j; pairing i <-> j makes the defect vanish
        // exactly for conservative rates.
        for j in 0..n {
            let mut defect = zero;
            for i in 0..n {
                if i == j {
                    continue;
                }
                let (p_ji, d_ji) = (s * prod[(j, i)], s * dest[(j, i)]);
                let (p_ij, d_ij) = (s * prod[(i, j)], s * dest[(i, j)]);
                defect += (d_ji.max(zero) - p_ij.max(zero)) + ((-p_ji).max(zero) - (-d_ij).max(zero));
            }
            if defect != zero {
                self.defect[j] += defect / sigma[j];
            }
        }
    }

    pub fn matrix(&self) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() + self.diag[i] } else { -self.off[(i, j)] })
    }

    pub fn column_sums(&self) -> Vec<T> {
        self.defect.iter().map(|&d| T::one() + d).collect()
    }

    /// True when all off-diagonal entries are non-positive and all column sums
    /// positive, so the subtraction-free elimination applies.
    pub fn is_m_matrix(&self) -> bool {
        let n = self.dim();
        self.off.as_slice().iter().all(|&x| x >= T::zero())
            && (0..n).all(|j| T::one() + self.defect[j] > T::zero())
    }

    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let m = self.matrix();
        if self.is_m_matrix() {
            solve_m_matrix(&m, &self.column_sums(), rhs)
        } else {
            lu_solve(&m, rhs)
        }
    }
}

pub(crate) fn check_time_step<T: Scalar>(dt: T) -> Result<()> {
    if dt >= T::zero() && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTimeStep)
    }
}

pub(crate) fn check_state<T: Scalar>(y: &[T]) -> Result<()> {
    match y.iter().position(|&x| !(x > T::zero() && x.is_finite())) {
        Some(i) => Err(Error::NonPositiveState { component: i }),
        None => Ok(()),
    }
}

pub(crate) fn check_stage<T: Scalar>(y: &[T], stage: usize) -> Result<()> {
    match y.iter().position(|&x| !(x > T::zero() && x.is_finite())) {
        Some(i) => Err(Error::NonPositiveStage { stage, component: i }),
        None => Ok(()),
    }
}

pub(crate) fn check_sigma<T: Scalar>(sigma: &[T]) -> Result<()> {
    match sigma.iter().position(|&x| !(x > T::zero() && x.is_finite())) {
        Some(i) => Err(Error::NonPositiveSigma { component: i }),
        None => Ok(()),
    }
}

/// Matrix of the generic modified Patankar stage equation
/// `x_i = y_i + dt sum_k w_k sum_j (p_ij(y_k) x_j / sigma_j - d_ij(y_k) x_i / sigma_i)`.
pub fn assemble_mp_system<T: Scalar>(
    rates: &dyn ProductionDestruction<T>,
    stage_values: &[&[T]],
    weights: &[T],
    sigma: &[T],
    dt: T,
) -> Result<Matrix<T>> {
    if stage_values.len() != weights.len() {
        return Err(Error::DimensionMismatch { expected: stage_values.len(), got: weights.len() });
    }
    let n = rates.dim();
    if sigma.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: sigma.len() });
    }
    check_sigma(sigma)?;
    let mut sys = PatankarSystem::new(n);
    for (k, (y, &w)) in stage_values.iter().zip(weights).enumerate() {
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        check_stage(y, k)?;
        sys.add_weighted(w, &StageRates::eval(rates, y)?, sigma, dt);
    }
    Ok(sys.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pds::validate_linear_pds;

    fn two_by_two(a: f64, b: f64) -> crate::pds::LinearPds<f64> {
        validate_linear_pds(Matrix::from_rows(&[[-a, b], [a, -b]]).unwrap()).unwrap()
    }

    #[test]
    fn single_stage_matrix() {
        let (a, b, dt) = (2.0, 3.0, 0.1);
        let pds = two_by_two(a, b);
        let y = [0.4, 0.7];
        let m = assemble_mp_system(&pds, &[&y], &[1.0], &y, dt).unwrap();
        let expect = Matrix::from_rows(&[[1.0 + dt * a, -dt * b], [-dt * a, 1.0 + dt * b]]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)] - expect[(i, j)]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_step_or_weights_give_identity() {
        let pds = two_by_two(2.0, 3.0);
        let y = [0.4, 0.7];
        assert_eq!(assemble_mp_system(&pds, &[&y], &[1.0], &y, 0.0).unwrap(), Matrix::identity(2));
        assert_eq!(assemble_mp_system(&pds, &[&y, &y], &[0.0, 0.0], &y, 0.5).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn non_positive_inputs_rejected() {
        let pds = two_by_two(2.0, 3.0);
        let y = [0.4, 0.7];
        let bad = [0.4, 0.0];
        assert_eq!(
            assemble_mp_system(&pds, &[&bad], &[1.0], &y, 0.1),
            Err(Error::NonPositiveStage { stage: 0, component: 1 })
        );
        assert_eq!(
            assemble_mp_system(&pds, &[&y], &[1.0], &bad, 0.1),
            Err(Error::NonPositiveSigma { component: 1 })
        );
    }

    #[test]
    fn conservative_system_has_unit_column_sums() {
        let pds = two_by_two(2.0, 3.0);
        let y = [0.4, 0.7];
        let mut sys = PatankarSystem::new(2);
        sys.add_weighted(0.3, &StageRates::eval(&pds, &y).unwrap(), &y, 7.0);
        sys.add_swapped(0.2, &StageRates::eval(&pds, &[1.0, 2.0]).unwrap(), &y, 7.0);
        assert_eq!(sys.column_sums(), vec![1.0, 1.0]);
        assert!(sys.is_m_matrix());
    }

    #[test]
    fn negative_combined_weights_keep_the_sign_structure() {
        let pds = validate_linear_pds(
            Matrix::from_rows(&[[-5.0, 1.0, 2.0], [3.0, -4.0, 0.5], [2.0, 3.0, -2.5]]).unwrap(),
        )
        .unwrap();
        let sigma = [0.3, 1.1, 2.0];
        let r0 = StageRates::eval(&pds, &[1.0, 2.0, 3.0]).unwrap();
        let r1 = StageRates::eval(&pds, &[4.0, 0.2, 1.0]).unwrap();
        let mut sys = PatankarSystem::new(3);
        sys.add_combined(&[(-0.4, &r0), (0.25, &r1)], &sigma, 2.0);
        assert!(sys.is_m_matrix());
        assert_eq!(sys.column_sums(), vec![1.0; 3]);
        let m = sys.matrix();
        for j in 0..3 {
            let s: f64 = (0..3).map(|i| m[(i, j)]).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
        let x = sys.solve(&[1.0, 1.0, 1.0]).unwrap();
        assert!(x.iter().all(|&v| v > 0.0));
        assert!((x.iter().sum::<f64>() - 3.0).abs() < 1e-13);
    }
}
