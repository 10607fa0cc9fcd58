//! Linear stability of MPDeC schemes.
//!
//! Linearizing the correction relation for node `m` in sweep `k` at a
//! positive steady state `y*` of `y' = A y` gives, with
//! `B = diag(y*) A^T diag(y*)^{-1}` and `theta_+`, `theta_-` the positive and
//! negative parts of the weights,
//!
//! ```text
//! D_n      = -(I + theta_0 dt A)
//! D_l      = -theta_l dt A                                      (l != m)
//! D_m      = S_+ dt A - S_- dt B - theta_m dt A                  (Patankar denominator)
//! D_self   = I - S_+ dt A + S_- dt B
//! ```
//!
//! where `S_+-` are the row sums of `theta_+-`. Because every `y^{r,(0)}` equals
//! `y_n`, the first sweep is the same formula with all previous derivatives set
//! to the identity.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{LuFactor, Matrix, POLE_TOL};
use crate::mpdec::{MpdecConfig, ThetaTable};
use crate::pds::LinearPds;
use crate::scalar::Scalar;
use crate::stability::StabilityFunction;

/// How the adjoint-like matrix `B` acts on an eigenvector of `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MpdecMode {
    /// `B` contributes `conj(z)`; exact when `A` is normal and `y*` is a
    /// multiple of the ones vector.
    General,
    /// `B` contributes `z`; exact for real spectra of the two-by-two class and
    /// symmetric `A`.
    Reduced,
}

/// Scalar stability function of an MPDeC configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct MpdecStability<T> {
    theta: ThetaTable<T>,
    corrections: usize,
    mode: MpdecMode,
}

impl<T: Scalar> MpdecStability<T> {
    pub fn new(config: &MpdecConfig<T>, mode: MpdecMode) -> Self {
        Self { theta: config.theta().clone(), corrections: config.corrections(), mode }
    }

    pub fn mode(&self) -> MpdecMode {
        self.mode
    }

    /// All sweep values `R^{m,(k)}(z)`, `k = 0..=K`, `m = 0..=M`.
    pub fn sweep_table(&self, z: Complex<T>) -> Result<Vec<Vec<Complex<T>>>> {
        let big_m = self.theta.subintervals();
        let zb = match self.mode {
            MpdecMode::General => z.conj(),
            MpdecMode::Reduced => z,
        };
        let one = Complex::new(T::one(), T::zero());
        let mut table = vec![vec![one; big_m + 1]];
        for _ in 1..=self.corrections {
            let prev = table.last().expect("sweep zero");
            let mut row = vec![one; big_m + 1];
            for m in 1..=big_m {
                let th = self.theta.row(m);
                let sp = self.theta.row_plus_sum(m);
                let sm = self.theta.row_minus_sum(m);
                let mut num = one + z * th[0];
                for (l, &w) in th.iter().enumerate().skip(1) {
                    if l != m {
                        num += z * w * prev[l];
                    }
                }
                num += (z * (th[m] - sp) + zb * sm) * prev[m];
                let den = one - z * sp + zb * sm;
                if !(den.norm() > T::lit(POLE_TOL)) {
                    return Err(Error::PoleAt {
                        re: z.re.to_f64().unwrap_or(f64::NAN),
                        im: z.im.to_f64().unwrap_or(f64::NAN),
                    });
                }
                row[m] = num / den;
            }
            table.push(row);
        }
        Ok(table)
    }
}

impl<T: Scalar> StabilityFunction<T> for MpdecStability<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        let table = self.sweep_table(z)?;
        Ok(table[self.corrections][self.theta.subintervals()])
    }
}

/// `R_p(z)` for one point.
pub fn mpdec_stability<T: Scalar>(config: &MpdecConfig<T>, z: Complex<T>, mode: MpdecMode) -> Result<Complex<T>> {
    MpdecStability::new(config, mode).eval(z)
}

/// Jacobian of the MPDeC step map at the positive steady state `y_star` of a
/// linear system.
pub fn mpdec_jacobian<T: Scalar>(
    config: &MpdecConfig<T>,
    pds: &LinearPds<T>,
    y_star: &[T],
    dt: T,
) -> Result<Matrix<T>> {
    let a = pds.matrix();
    let n = a.rows();
    if y_star.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: y_star.len() });
    }
    if let Some(i) = y_star.iter().position(|&v| !(v > T::zero())) {
        return Err(Error::NonPositiveState { component: i });
    }
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::InvalidTimeStep);
    }
    let a_dt = a.scale(dt);
    let b_dt = Matrix::from_fn(n, n, |i, j| y_star[i] * a_dt[(j, i)] / y_star[j]);
    let theta = config.theta();
    let big_m = theta.subintervals();
    let eye = Matrix::identity(n);

    let mut prev = vec![eye.clone(); big_m + 1];
    for _ in 1..=config.corrections() {
        let mut cur = vec![eye.clone(); big_m + 1];
        for m in 1..=big_m {
            let th = theta.row(m);
            let sp = theta.row_plus_sum(m);
            let sm = theta.row_minus_sum(m);
            // rhs = I + theta_0 dt A + sum_{l != m} theta_l dt A Y_l
            //       + ((theta_m - S_+) dt A + S_- dt B) Y_m
            let mut rhs = eye.clone();
            rhs.add_scaled(th[0], &a_dt);
            let mut weighted = Matrix::zeros(n, n);
            for (l, &w) in th.iter().enumerate().skip(1) {
                if l != m && w != T::zero() {
                    weighted.add_scaled(w, &prev[l]);
                }
            }
            rhs = rhs.add(&a_dt.matmul(&weighted)?);
            let mut own = a_dt.scale(th[m] - sp);
            own.add_scaled(sm, &b_dt);
            rhs = rhs.add(&own.matmul(&prev[m])?);
            let mut lhs = eye.clone();
            lhs.add_scaled(-sp, &a_dt);
            lhs.add_scaled(sm, &b_dt);
            cur[m] = LuFactor::new(&lhs)?.solve_matrix(&rhs)?;
        }
        prev = cur;
    }
    Ok(prev.swap_remove(big_m))
}
