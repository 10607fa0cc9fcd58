//! Modified Patankar Runge-Kutta schemes of order two and three.

use crate::error::{Error, Result};
use crate::pds::ProductionDestruction;
use crate::scalar::{Field, Scalar};
use crate::schemes::system::{check_stage, check_state, check_time_step, PatankarSystem, StageRates};

/// Slack applied to the inclusive parameter-region bounds, so that values
/// such as `2.0 / 3.0` typed in decimal still land on the boundary.
pub const REGION_SLACK: f64 = 1e-12;

/// Root in `(2/3, 1)` of `-18a^3 + 27a^2 - 12a + 2`, where the two lower
/// boundaries of the admissible `(alpha, beta)` region meet.
pub fn alpha0() -> f64 {
    let f = |a: f64| ((-18.0 * a + 27.0) * a - 12.0) * a + 2.0;
    let (mut lo, mut hi) = (2.0 / 3.0 + 1e-9, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// True when `(alpha, beta)` lies in the admissible region of the
/// two-parameter third order family (bounds inclusive).
pub fn in_mprk43_region(alpha: f64, beta: f64) -> bool {
    let e = REGION_SLACK;
    let two_thirds = 2.0 / 3.0;
    let a0 = alpha0();
    let upper_parabola = 3.0 * alpha * (1.0 - alpha);
    if alpha >= 1.0 / 3.0 - e && alpha < two_thirds {
        beta >= two_thirds - e && beta <= upper_parabola + e
    } else if alpha >= two_thirds && alpha <= a0 {
        beta >= upper_parabola - e && beta <= two_thirds + e
    } else if alpha > a0 {
        beta >= (3.0 * alpha - 2.0) / (6.0 * alpha - 3.0) - e && beta <= two_thirds + e
    } else {
        false
    }
}

/// Butcher coefficients and Patankar exponents shared by both third order
/// families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mprk43Tableau<T> {
    pub a21: T,
    pub a31: T,
    pub a32: T,
    pub b1: T,
    pub b2: T,
    pub b3: T,
    pub p: T,
    pub q: T,
    pub beta1: T,
    pub beta2: T,
}

impl<K: Field> Mprk43Tableau<K> {
    fn with_exponents(a21: K, a31: K, a32: K, b1: K, b2: K, b3: K) -> Self {
        let p = K::int(3) * a21.clone() * (a31.clone() + a32.clone()) * b3.clone();
        let beta2 = K::one() / (a21.clone() + a21.clone());
        let beta1 = K::one() - beta2.clone();
        Self { q: a21.clone(), a21, a31, a32, b1, b2, b3, p, beta1, beta2 }
    }

    /// Tableau of the two-parameter family over any coefficient field. Fails
    /// only when a coefficient denominator vanishes; the region is not checked.
    pub fn two_parameter(alpha: K, beta: K) -> Result<Self> {
        let (one, two, three, six) = (K::one(), K::int(2), K::int(3), K::int(6));
        let den_a = alpha.clone() * (two.clone() - three.clone() * alpha.clone());
        let den_ab = alpha.clone() * beta.clone();
        let gap = beta.clone() - alpha.clone();
        if den_a.is_zero() || den_ab.is_zero() || gap.is_zero() {
            return Err(Error::DegenerateParams(format!(
                "alpha = {alpha:?}, beta = {beta:?} makes a tableau denominator vanish"
            )));
        }
        let a = alpha.clone();
        let b = beta.clone();
        let a31 = (three.clone() * a.clone() * b.clone() * (one.clone() - a.clone()) - b.clone() * b.clone())
            / den_a.clone();
        let a32 = b.clone() * gap.clone() / den_a;
        let b1 = one + (two.clone() - three.clone() * (a.clone() + b.clone())) / (six.clone() * den_ab);
        let b2 = (three * b.clone() - two.clone()) / (six.clone() * a.clone() * gap.clone());
        let b3 = (two - K::int(3) * a.clone()) / (six * b * gap);
        Ok(Self::with_exponents(a, a31, a32, b1, b2, b3))
    }

    /// Tableau of the one-parameter family over any coefficient field.
    pub fn one_parameter(gamma: K) -> Self {
        let two_thirds = K::frac(2, 3);
        let quarter = K::frac(1, 4);
        let inv = quarter.clone() / gamma.clone();
        Self::with_exponents(
            two_thirds.clone(),
            two_thirds - inv.clone(),
            inv,
            quarter,
            K::frac(3, 4) - gamma.clone(),
            gamma,
        )
    }
}

/// Parameters of the two-parameter third order family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mprk43Params<T> {
    alpha: T,
    beta: T,
    tableau: Mprk43Tableau<T>,
}

impl<T: Scalar> Mprk43Params<T> {
    /// Validates `(alpha, beta)` against the admissible region and builds the
    /// tableau.
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        let tableau = mprk43ab_tableau(alpha, beta)?;
        let (a, b) = (alpha.to_f64().unwrap_or(f64::NAN), beta.to_f64().unwrap_or(f64::NAN));
        if !in_mprk43_region(a, b) {
            return Err(Error::InvalidParams(format!(
                "(alpha, beta) = ({a}, {b}) lies outside the admissible region"
            )));
        }
        Ok(Self { alpha, beta, tableau })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn tableau(&self) -> &Mprk43Tableau<T> {
        &self.tableau
    }
}

/// Tableau of the two-parameter family without the region check. Fails only
/// when a coefficient denominator vanishes.
pub fn mprk43ab_tableau<T: Scalar>(alpha: T, beta: T) -> Result<Mprk43Tableau<T>> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParams("alpha and beta must be finite".into()));
    }
    Mprk43Tableau::two_parameter(alpha, beta)
}

/// Parameters of the one-parameter third order family, `3/8 <= gamma <= 3/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mprk43GammaParams<T> {
    gamma: T,
    tableau: Mprk43Tableau<T>,
}

impl<T: Scalar> Mprk43GammaParams<T> {
    pub fn new(gamma: T) -> Result<Self> {
        let lo = T::lit(0.375 - REGION_SLACK);
        let hi = T::lit(0.75 + REGION_SLACK);
        if !(gamma >= lo && gamma <= hi) {
            return Err(Error::InvalidParams(format!("gamma = {gamma} outside [3/8, 3/4]")));
        }
        let mut tableau = Mprk43Tableau::one_parameter(gamma);
        // Exact forms of the derived exponents.
        tableau.p = T::lit(4.0) * gamma / T::lit(3.0);
        tableau.beta1 = T::lit(0.25);
        tableau.beta2 = T::lit(0.75);
        Ok(Self { gamma, tableau })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn tableau(&self) -> &Mprk43Tableau<T> {
        &self.tableau
    }
}

fn prepare<T: Scalar>(rates: &dyn ProductionDestruction<T>, y: &[T], dt: T) -> Result<()> {
    check_time_step(dt)?;
    if y.len() != rates.dim() {
        return Err(Error::DimensionMismatch { expected: rates.dim(), got: y.len() });
    }
    check_state(y)
}

fn solve_stage<T: Scalar>(
    terms: &[(T, &StageRates<T>)],
    sigma: &[T],
    y_n: &[T],
    dt: T,
    stage: usize,
) -> Result<Vec<T>> {
    let mut sys = PatankarSystem::new(y_n.len());
    sys.add_combined(terms, sigma, dt);
    let x = sys.solve(y_n)?;
    check_stage(&x, stage)?;
    Ok(x)
}

/// `a^(1/p) b^(1 - 1/p)` computed in log space.
fn geometric_blend<T: Scalar>(a: &[T], b: &[T], p: T) -> Vec<T> {
    let inv = T::one() / p;
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (inv * x.ln() + (T::one() - inv) * y.ln()).exp())
        .collect()
}

/// Modified Patankar-Euler step.
pub fn mpe_step<T: Scalar>(rates: &dyn ProductionDestruction<T>, y_n: &[T], dt: T) -> Result<Vec<T>> {
    prepare(rates, y_n, dt)?;
    let r0 = StageRates::eval(rates, y_n)?;
    solve_stage(&[(T::one(), &r0)], y_n, y_n, dt, 1)
}

/// Second order, three-solve modified Patankar Runge-Kutta step.
pub fn mprk32_step<T: Scalar>(rates: &dyn ProductionDestruction<T>, y_n: &[T], dt: T) -> Result<Vec<T>> {
    prepare(rates, y_n, dt)?;
    let quarter = T::lit(0.25);
    let sixth = T::one() / T::lit(6.0);
    let r0 = StageRates::eval(rates, y_n)?;
    let y1 = solve_stage(&[(T::one(), &r0)], y_n, y_n, dt, 1)?;
    let r1 = StageRates::eval(rates, &y1)?;
    let y2 = solve_stage(&[(quarter, &r0), (quarter, &r1)], &y1, y_n, dt, 2)?;
    let r2 = StageRates::eval(rates, &y2)?;
    solve_stage(&[(sixth, &r0), (sixth, &r1), (T::lit(2.0) / T::lit(3.0), &r2)], &y1, y_n, dt, 3)
}

/// Third order modified Patankar Runge-Kutta step for either family.
pub fn mprk43_step<T: Scalar>(
    tab: &Mprk43Tableau<T>,
    rates: &dyn ProductionDestruction<T>,
    y_n: &[T],
    dt: T,
) -> Result<Vec<T>> {
    prepare(rates, y_n, dt)?;
    let r0 = StageRates::eval(rates, y_n)?;
    let y1 = solve_stage(&[(tab.a21, &r0)], y_n, y_n, dt, 1)?;
    let r1 = StageRates::eval(rates, &y1)?;
    let sigma2 = geometric_blend(&y1, y_n, tab.p);
    let y2 = solve_stage(&[(tab.a31, &r0), (tab.a32, &r1)], &sigma2, y_n, dt, 2)?;
    let r2 = StageRates::eval(rates, &y2)?;
    let sigma3 = geometric_blend(&y1, y_n, tab.q);
    let y3 = solve_stage(&[(tab.beta1, &r0), (tab.beta2, &r1)], &sigma3, y_n, dt, 3)?;
    solve_stage(&[(tab.b1, &r0), (tab.b2, &r1), (tab.b3, &r2)], &y3, y_n, dt, 4)
}

pub fn mprk43ab_step<T: Scalar>(
    params: &Mprk43Params<T>,
    rates: &dyn ProductionDestruction<T>,
    y_n: &[T],
    dt: T,
) -> Result<Vec<T>> {
    mprk43_step(params.tableau(), rates, y_n, dt)
}

pub fn mprk43g_step<T: Scalar>(
    params: &Mprk43GammaParams<T>,
    rates: &dyn ProductionDestruction<T>,
    y_n: &[T],
    dt: T,
) -> Result<Vec<T>> {
    mprk43_step(params.tableau(), rates, y_n, dt)
}
