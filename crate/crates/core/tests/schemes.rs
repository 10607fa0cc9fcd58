mod common;

use common::{all_scheme_families, random_conservative_metzler, scheme_zoo};
use patankar::linalg::Matrix;
use patankar::mpdec::{MpdecConfig, NodeKind};
use patankar::pds::{test_problem, validate_linear_pds, FnRates, ProductionDestruction, TestProblem};
use patankar::schemes::{mpe_step, Mprk43GammaParams, Mprk43Params, Scheme};
use patankar::{Error, Scheme32};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Nonlinear three-species chain: a saturating transfer from the first to the
/// second constituent and a linear decay from the second to the third.
fn nonlinear_chain() -> FnRates<impl Fn(&[f64]) -> Matrix<f64>> {
    FnRates::new(3, |y: &[f64]| {
        let mut p = Matrix::zeros(3, 3);
        p[(1, 0)] = y[0] * y[1] / (y[0] + 1.0);
        p[(2, 1)] = 0.3 * y[1];
        p
    })
}

fn rk4(f: &dyn Fn(&[f64]) -> Vec<f64>, y0: &[f64], t: f64, n: usize) -> Vec<f64> {
    let h = t / n as f64;
    let axpy = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    let mut y = y0.to_vec();
    for _ in 0..n {
        let k1 = f(&y);
        let k2 = f(&axpy(&y, &k1, h / 2.0));
        let k3 = f(&axpy(&y, &k2, h / 2.0));
        let k4 = f(&axpy(&y, &k3, h));
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

fn max_rel_err(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// Implicit Euler for a 2x2 or 3x3 system via Cramer's rule.
fn implicit_euler_small(a: &Matrix<f64>, y: &[f64], dt: f64) -> Vec<f64> {
    let n = y.len();
    let m = Matrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - dt * a[(i, j)]);
    let det = |m: &Matrix<f64>| -> f64 {
        if n == 2 {
            m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
        } else {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
    };
    let d = det(&m);
    (0..n)
        .map(|c| {
            let mc = Matrix::from_fn(n, n, |i, j| if j == c { y[i] } else { m[(i, j)] });
            det(&mc) / d
        })
        .collect()
}

#[test]
fn patankar_euler_is_implicit_euler_on_linear_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 3] {
        for _ in 0..20 {
            let a = random_conservative_metzler(&mut rng, n);
            let pds = validate_linear_pds(a.clone()).unwrap();
            let y: Vec<f64> = (0..n).map(|i| 0.5 + i as f64).collect();
            for dt in [1e-3, 0.7, 40.0] {
                let got = mpe_step(&pds, &y, dt).unwrap();
                let want = implicit_euler_small(&a, &y, dt);
                assert!(max_rel_err(&got, &want) < 1e-12, "n = {n}, dt = {dt}");
            }
        }
    }
}

#[test]
fn nonlinear_conservation_and_positivity() {
    let rates = nonlinear_chain();
    let y0 = [9.98, 0.01, 0.01];
    for scheme in scheme_zoo() {
        for dt in [0.01, 1.0, 50.0] {
            let path = scheme.integrate(&rates, &y0, dt, 40).unwrap();
            for y in &path {
                assert!(y.iter().all(|&v| v > 0.0), "{scheme} dt {dt}");
                assert!((y.iter().sum::<f64>() - 10.0).abs() < 1e-12, "{scheme} dt {dt}");
            }
        }
    }
}

#[test]
fn nonlinear_convergence_orders() {
    let rates = nonlinear_chain();
    let f = |y: &[f64]| rates.rhs(y);
    let y0 = [9.98, 0.01, 0.01];
    let t = 10.0;
    let reference = rk4(&f, &y0, t, 200_000);
    let cases: Vec<(Scheme<f64>, f64)> = vec![
        (Scheme::Mpe, 1.0),
        (Scheme::Mprk32, 2.0),
        (Scheme::Mprk43(Mprk43Params::new(0.5, 2.0 / 3.0).unwrap()), 3.0),
        (Scheme::Mprk43Gamma(Mprk43GammaParams::new(0.6).unwrap()), 3.0),
        (Scheme::Mpdec(MpdecConfig::new(4, NodeKind::GaussLobatto).unwrap()), 4.0),
        (Scheme::Mpdec(MpdecConfig::new(5, NodeKind::Equispaced).unwrap()), 5.0),
    ];
    for (scheme, expected) in cases {
        let err = |n: usize| {
            let path = scheme.integrate(&rates, &y0, t / n as f64, n).unwrap();
            max_rel_err(path.last().unwrap(), &reference)
        };
        let order = (err(100) / err(200)).log2();
        assert!((order - expected).abs() < 0.3, "{scheme}: observed order {order:.3}");
    }
}

#[test]
fn steady_state_is_kept_for_large_steps() {
    for id in TestProblem::ALL {
        let e = test_problem::<f64>(id);
        let ys = e.steady_state.vector();
        for scheme in scheme_zoo() {
            let y = scheme.step(&e.pds, ys, 1e4).unwrap();
            assert!(max_rel_err(&y, ys) < 1e-12, "{id} {scheme}");
        }
    }
}

#[test]
fn converges_to_the_steady_state_on_every_catalog_problem() {
    for id in [TestProblem::Real3, TestProblem::Complex3, TestProblem::DoubleZero4] {
        let e = test_problem::<f64>(id);
        let ys = e.steady_state.vector();
        for scheme in all_scheme_families() {
            let path = scheme.integrate(&e.pds, &e.y0, 0.05, 400).unwrap();
            assert!(max_rel_err(path.last().unwrap(), ys) < 1e-10, "{id} {scheme}");
        }
    }
}

#[test]
fn tiny_components_stay_positive() {
    let e = test_problem::<f64>(TestProblem::Real3);
    let y = [1e-30, 15.0, 1e-20];
    for scheme in scheme_zoo() {
        for dt in [1e-6, 1.0, 1e6] {
            let next = scheme.step(&e.pds, &y, dt).unwrap_or_else(|err| panic!("{scheme} dt {dt}: {err}"));
            assert!(next.iter().all(|&v| v > 0.0), "{scheme} dt {dt}");
            assert!((next.iter().sum::<f64>() - 15.0).abs() < 1e-12);
        }
    }
}

#[test]
fn single_precision() {
    let e = test_problem::<f32>(TestProblem::Real3);
    let schemes: Vec<Scheme32> = vec![
        Scheme::Mpe,
        Scheme::Mprk32,
        Scheme::Mprk43(Mprk43Params::new(0.5, 2.0 / 3.0).unwrap()),
        Scheme::Mpdec(MpdecConfig::new(5, NodeKind::GaussLobatto).unwrap()),
    ];
    for scheme in schemes {
        let path = scheme.integrate(&e.pds, &e.y0, 0.01, 200).unwrap();
        let y = path.last().unwrap();
        assert!((y.iter().sum::<f32>() - 15.0).abs() < 1e-4);
        for (a, b) in y.iter().zip(e.steady_state.vector()) {
            assert!((a - b).abs() < 1e-4, "{scheme}");
        }
    }
}

#[test]
fn zero_step_returns_the_input() {
    let e = test_problem::<f64>(TestProblem::Complex3);
    for scheme in scheme_zoo() {
        assert_eq!(scheme.step(&e.pds, &e.y0, 0.0).unwrap(), e.y0, "{scheme}");
    }
}

#[test]
fn input_errors() {
    let e = test_problem::<f64>(TestProblem::Real3);
    for scheme in all_scheme_families() {
        assert_eq!(scheme.step(&e.pds, &e.y0, f64::NAN), Err(Error::InvalidTimeStep));
        assert_eq!(scheme.step(&e.pds, &e.y0, -0.1), Err(Error::InvalidTimeStep));
        assert_eq!(scheme.step(&e.pds, &[1.0, 2.0], 0.1), Err(Error::DimensionMismatch { expected: 3, got: 2 }));
        assert_eq!(scheme.step(&e.pds, &[1.0, 0.0, 2.0], 0.1), Err(Error::NonPositiveState { component: 1 }));
    }
}

#[test]
fn failures_report_the_step() {
    // The transfer rate turns invalid once the second component passes 1.5.
    let rates = FnRates::new(2, |y: &[f64]| {
        let mut p = Matrix::zeros(2, 2);
        p[(1, 0)] = if y[1] > 1.5 { f64::NAN } else { y[0] };
        p
    });
    for scheme in all_scheme_families() {
        match scheme.integrate(&rates, &[1.0, 1.0], 1.0, 10).unwrap_err() {
            Error::AtStep { step, source } => {
                assert!(step >= 1, "{scheme}");
                assert!(matches!(*source, Error::InvalidRate { row: 1, col: 0 }), "{scheme}: {source}");
            }
            other => panic!("{scheme}: unexpected error {other}"),
        }
    }
    let negative = FnRates::new(2, |_: &[f64]| Matrix::from_rows(&[[0.0, -1.0], [0.0, 0.0]]).unwrap());
    assert_eq!(Scheme::Mprk32.step(&negative, &[1.0, 1.0], 0.1), Err(Error::InvalidRate { row: 0, col: 1 }));
}

#[test]
fn parameter_validation() {
    assert!(Mprk43Params::new(0.9, 0.6).is_ok());
    assert!(Mprk43Params::new(1.0 / 3.0, 2.0 / 3.0).is_ok());
    assert!(matches!(Mprk43Params::new(0.2, 0.7), Err(Error::InvalidParams(_))));
    assert!(matches!(Mprk43Params::new(0.2, 0.2), Err(Error::DegenerateParams(_))));
    assert!(matches!(Mprk43Params::new(f64::NAN, 0.5), Err(Error::InvalidParams(_))));
    assert!(Mprk43GammaParams::new(0.375).is_ok());
    assert!(Mprk43GammaParams::new(0.75).is_ok());
    assert!(matches!(Mprk43GammaParams::new(0.8), Err(Error::InvalidParams(_))));
    assert!(matches!(MpdecConfig::<f64>::new(0, NodeKind::Equispaced), Err(Error::OrderOutOfRange { .. })));
}

#[test]
fn display_names() {
    let names: Vec<String> = all_scheme_families().iter().map(|s| s.to_string()).collect();
    assert_eq!(names, ["MPE", "MPRK32", "MPRK43(0.5,0.6666666666666666)", "MPRK43(0.5)", "MPDeC(5,gl)"]);
    let orders: Vec<usize> = all_scheme_families().iter().map(|s| s.order()).collect();
    assert_eq!(orders, [1, 2, 3, 3, 5]);
}
