use crate::error::Result;
use crate::linalg::Polynomial;
use crate::scalar::Field;
use crate::schemes::Mprk43Tableau;
use crate::stability::RationalStabilityFunction;

/// `R(z) = (z^3 + 18 z - 12) / (6 (1 - z)^2 (z - 2))` of the second order
/// scheme, in integer form. Use [`RationalStabilityFunction::normalized`] for
/// `R(0) = 1` coefficients.
pub fn stability_mprk32<K: Field>() -> RationalStabilityFunction<K> {
    RationalStabilityFunction::from_coeffs(
        vec![K::int(-12), K::int(18), K::zero(), K::one()],
        vec![K::int(-12), K::int(30), K::int(-24), K::int(6)],
    )
    .expect("nonzero denominator")
}

/// Numerator and denominator coefficients `n_0..n_4`, `d_0..d_4` of the
/// two-parameter family, valid for every `(alpha, beta)`.
pub fn mprk43ab_coefficients<K: Field>(alpha: &K, beta: &K) -> ([K; 5], [K; 5]) {
    let (a, b) = (alpha.clone(), beta.clone());
    let ab = a.clone() * b.clone();
    let one = K::one();
    let two = K::int(2);
    let three = K::int(3);
    let n = [
        one.clone(),
        -(one.clone() + a.clone() + b.clone()),
        (two.clone() * (ab.clone() + a.clone() + b.clone()) - one.clone()) / two.clone(),
        (one.clone() + three.clone() * (a.clone() + b.clone()) - K::int(6) * ab.clone()) / K::int(6),
        -(K::frac(1, 6) + (b.clone() - K::frac(1, 2)) * a.clone()),
    ];
    let d = [
        one.clone(),
        -(a.clone() + b.clone() + two.clone()),
        ab.clone() + two.clone() * (a.clone() + b.clone()) + one,
        -(two * ab.clone() + a + b),
        ab,
    ];
    (n, d)
}

/// Stability function of the two-parameter family. Rejects parameters for
/// which the tableau does not exist.
pub fn stability_mprk43ab<K: Field>(alpha: K, beta: K) -> Result<RationalStabilityFunction<K>> {
    Mprk43Tableau::two_parameter(alpha.clone(), beta.clone())?;
    let (n, d) = mprk43ab_coefficients(&alpha, &beta);
    RationalStabilityFunction::from_coeffs(n.to_vec(), d.to_vec())
}

/// Stability function of the one-parameter family, which does not depend on
/// `gamma`.
pub fn stability_mprk43g<K: Field>() -> RationalStabilityFunction<K> {
    RationalStabilityFunction::from_coeffs(
        vec![K::one(), K::frac(-7, 3), K::frac(23, 18), K::frac(7, 18), K::frac(-5, 18)],
        vec![K::one(), K::frac(-10, 3), K::frac(37, 9), K::frac(-20, 9), K::frac(4, 9)],
    )
    .expect("nonzero denominator")
}

/// Coefficients of `y^2, y^4, y^6, y^8` in `|N(iy)|^2 - |D(iy)|^2` for a
/// stability function `N / D`; negative values mean `|R(iy)| < 1`.
pub fn imaginary_axis_constants<K: Field>(r: &RationalStabilityFunction<K>) -> Vec<K> {
    let (num, den) = r.imaginary_axis_moduli();
    let diff: Polynomial<K> = &num - &den;
    let top = diff.degree().unwrap_or(0);
    (1..=top / 2).map(|k| diff.coeff(2 * k)).collect()
}

/// Sign conditions on the two-parameter family that imply `|R(z)| < 1` on
/// the sector `3pi/4 < arg z < 5pi/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport<K> {
    /// `c_0..c_7`.
    pub coefficients: [K; 8],
    /// Whether `c_2..c_6 <= 0`.
    pub passes: bool,
    /// Difference between `c_7(alpha, 1/4)` and `1/36 - alpha/12`; zero
    /// unless the coefficient formulas are inconsistent.
    pub self_test_residual: K,
}

impl<K: Field + PartialOrd> ConditionReport<K> {
    /// Largest of the constrained coefficients `c_2..c_6`.
    pub fn worst(&self) -> K {
        self.coefficients[2..7]
            .iter()
            .cloned()
            .fold(self.coefficients[2].clone(), |m, c| if c > m { c } else { m })
    }
}

fn condition_coefficients<K: Field>(n: &[K; 5], d: &[K; 5]) -> [K; 8] {
    let two = K::int(2);
    let sq = |x: &K| x.clone() * x.clone();
    let m = |x: &K, y: &K| x.clone() * y.clone();
    [
        d[1].clone() - n[1].clone(),
        sq(&n[1]) - sq(&d[1]),
        -m(&n[1], &n[2]) + m(&d[1], &d[2]) + n[3].clone() - d[3].clone(),
        sq(&n[2]) - sq(&d[2]) - two.clone() * n[4].clone() + two * d[4].clone(),
        m(&n[1], &n[4]) - m(&n[2], &n[3]) - m(&d[1], &d[4]) + m(&d[2], &d[3]),
        sq(&n[3]) - sq(&d[3]),
        m(&d[3], &d[4]) - m(&n[3], &n[4]),
        sq(&n[4]) - sq(&d[4]),
    ]
}

pub fn check_mprk43ab_conditions<K: Field + PartialOrd>(alpha: K, beta: K) -> ConditionReport<K> {
    let (n, d) = mprk43ab_coefficients(&alpha, &beta);
    let coefficients = condition_coefficients(&n, &d);
    let passes = coefficients[2..7].iter().all(|c| *c <= K::zero());
    let (nq, dq) = mprk43ab_coefficients(&alpha, &K::frac(1, 4));
    let c7_quarter = condition_coefficients(&nq, &dq)[7].clone();
    let self_test_residual = c7_quarter - (K::frac(1, 36) - alpha / K::int(12));
    ConditionReport { coefficients, passes, self_test_residual }
}
