use std::f64::consts::PI;

use desk_numerics::autodiff::{self, Var};
use desk_numerics::dynamics::{backward_euler_solve, rk4_solve, IvpProblem};
use desk_numerics::interp::CubicSpline;
use desk_numerics::lindecomp::{eig, solve_direct, solve_iterative, svd, DirectMethod, IterConfig, IterMethod};
use desk_numerics::optimize::{bfgs_minimize, lbfgs_minimize, nelder_mead, DEFAULT_LBFGS_MEMORY};
use desk_numerics::quadrature::{gauss_legendre, simpson};
use desk_numerics::roots::{broyden, newton_system};
use desk_numerics::spectral::{convolve_direct, convolve_fft, fft_real, ifft, lowpass1d, peak_frequency};
use desk_numerics::{Matrix, NumError};

fn rosenbrock<'t>(v: &[Var<'t>]) -> Var<'t> {
    let a = 1.0 - v[0];
    let b = v[1] - v[0] * v[0];
    a * a + 100.0 * b * b
}

#[test]
fn autodiff_gradients_drive_quasi_newton() {
    let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
    let g = |x: &[f64]| autodiff::value_and_grad(x, |_, v| rosenbrock(v)).unwrap().1;
    let r = bfgs_minimize(f, g, &[-1.2, 1.0], 1e-8, 500).unwrap();
    assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4);
    let r = lbfgs_minimize(f, g, &[-1.2, 1.0], DEFAULT_LBFGS_MEMORY, 1e-8, 500).unwrap();
    assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4);
    let r = nelder_mead(f, &[-1.2, 1.0], 1e-10, 5000).unwrap();
    assert!((r.x[0] - 1.0).abs() < 1e-3 && (r.x[1] - 1.0).abs() < 1e-3);
}

#[test]
fn autodiff_jacobian_feeds_newton_system() {
    let residual = |x: &[f64]| vec![x[0] * x[0] + x[1] * x[1] - 1.0, x[1] - x[0] * x[0]];
    let jac =
        |x: &[f64]| autodiff::jacobian(x, |_, v| vec![v[0] * v[0] + v[1] * v[1] - 1.0, v[1] - v[0] * v[0]]).unwrap();
    let exact = newton_system(residual, Some(jac), &[1.0, 1.0], 1e-10, 50).unwrap();
    let quasi = broyden(residual, &[1.0, 1.0], None, 1e-10, 100).unwrap();
    let y = (5f64.sqrt() - 1.0) / 2.0;
    for r in [&exact.root, &quasi.root] {
        assert!((r[0] - y.sqrt()).abs() < 1e-8 && (r[1] - y).abs() < 1e-8);
    }
}

#[test]
fn direct_and_iterative_solvers_agree() {
    let a =
        Matrix::from_rows(&[[10.0, 1.0, 2.0, 0.0], [1.0, 8.0, 0.5, 1.0], [2.0, 0.5, 9.0, 1.5], [0.0, 1.0, 1.5, 7.0]])
            .unwrap();
    let b = [1.0, -2.0, 3.0, 0.5];
    let reference = solve_direct(&a, &b, DirectMethod::Lu).unwrap();
    for m in DirectMethod::ALL {
        let x = solve_direct(&a, &b, m).unwrap();
        assert!(x.iter().zip(&reference).all(|(p, q)| (p - q).abs() < 1e-12), "{m:?}");
    }
    for m in [IterMethod::Jacobi, IterMethod::GaussSeidel, IterMethod::ConjugateGradient] {
        let (x, rep) = solve_iterative(&a, &b, &[0.0; 4], m, IterConfig::default()).unwrap();
        assert!(rep.converged);
        assert!(x.iter().zip(&reference).all(|(p, q)| (p - q).abs() < 1e-9), "{m:?}");
    }
}

#[test]
fn eigenvalues_and_singular_values_of_a_gram_matrix() {
    let a = Matrix::from_rows(&[[3.0, 1.0, 1.0], [-1.0, 3.0, 1.0]]).unwrap();
    let gram = a.matmul(&a.transpose()).unwrap();
    let ev = eig(&gram).unwrap().values;
    let sv = svd(&a).unwrap().sigma;
    for (l, s) in ev.iter().zip(&sv) {
        assert!((l.sqrt() - s).abs() < 1e-9);
    }
}

#[test]
fn spline_integral_matches_the_sampled_function() {
    let xs: Vec<f64> = (0..=40).map(|i| i as f64 * PI / 40.0).collect();
    let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
    let s = CubicSpline::natural(&xs, &ys).unwrap();
    let via_spline = gauss_legendre(|x| s.eval(x), 0.0, PI, 20).unwrap();
    let direct = simpson(f64::sin, 0.0, PI, 200).unwrap();
    assert!((via_spline - 2.0).abs() < 1e-4);
    assert!((direct - 2.0).abs() < 1e-8);
}

#[test]
fn filtering_and_convolution_in_both_domains() {
    let fs = 1000.0;
    let t: Vec<f64> = (0..1024).map(|i| i as f64 / fs).collect();
    let clean: Vec<f64> = t.iter().map(|t| (2.0 * PI * 50.0 * t).sin()).collect();
    let noisy: Vec<f64> = t.iter().zip(&clean).map(|(t, c)| c + 0.5 * (2.0 * PI * 300.0 * t).sin()).collect();
    let smooth = lowpass1d(&noisy, fs, 100.0).unwrap();
    assert!((peak_frequency(&smooth, fs).unwrap() - 50.0).abs() <= fs / 1024.0);

    let round = ifft(&fft_real(&noisy).unwrap()).unwrap();
    assert!(round.re.iter().zip(&noisy).all(|(a, b)| (a - b).abs() < 1e-12));

    let kernel = [0.25, 0.5, 0.25];
    let a = convolve_direct(&noisy[..100], &kernel).unwrap();
    let b = convolve_fft(&noisy[..100], &kernel).unwrap();
    assert!(a.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-12));
}

#[test]
fn implicit_and_explicit_integrators_agree_on_smooth_problems() {
    let f = |t: f64, y: &[f64]| vec![-0.5 * y[0] + t.cos()];
    let p = IvpProblem::new(f, 0.0, &[1.0], 0.001, 2.0).unwrap();
    let a = rk4_solve(&p).unwrap().final_state()[0];
    let b = backward_euler_solve(&p).unwrap().final_state()[0];
    assert!((a - b).abs() < 1e-3);
}

#[test]
fn errors_carry_stable_names() {
    let singular = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
    let err = solve_direct(&singular, &[1.0, 2.0], DirectMethod::Lu).unwrap_err();
    assert_eq!(err, NumError::Singular);
    assert_eq!(err.name(), "Singular");
    assert_eq!(NumError::Unstable(0.6).name(), "Unstable");
}
