//! Scalar root finding and nonlinear systems.
//!
//! Scalar methods return a [`RootReport`] holding the root, the number of
//! iterations and the full list of iterates, which is what the convergence
//! order helpers look at. Running out of iterations is an error
//! ([`NumError::MaxIterations`]), so a returned report is always converged.

use crate::error::{NumError, Result};
use crate::lindecomp::lu;
use crate::ndcore::{norm_inf, Matrix};

pub const DEFAULT_TOL: f64 = 1e-5;
pub const DEFAULT_SYSTEM_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 100;

/// Threshold below which a derivative counts as zero in Newton's method.
pub const ZERO_DERIVATIVE: f64 = 1e-14;
/// Iterates beyond this magnitude are treated as divergence.
pub const DIVERGENCE_BOUND: f64 = 1e12;

const NEWTON_FD_STEP: f64 = 1e-6;
const JACOBIAN_FD_STEP: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct RootReport<T> {
    pub root: T,
    pub iterations: usize,
    /// `|f(root)|`, or `‖F(root)‖∞` for systems.
    pub residual: f64,
    pub converged: bool,
    /// Iterates in order, starting with the initial guess (the midpoints for
    /// bisection).
    pub history: Vec<T>,
}

fn checked(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(NumError::NonFinite)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(NumError::InvalidParameter("tolerance must be positive"))
    }
}

/// Bisection bracket `[a, b]` with `f(a)·f(b) ≤ 0`, advanced one halving at
/// a time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub a: f64,
    pub b: f64,
    pub fa: f64,
    pub fb: f64,
}

impl Bracket {
    pub fn new<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<Self> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let fa = checked(f(a))?;
        let fb = checked(f(b))?;
        if fa * fb > 0.0 {
            return Err(NumError::NoSignChange);
        }
        Ok(Bracket { a, b, fa, fb })
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        (self.a + self.b) / 2.0
    }

    /// Halves the bracket. Returns the midpoint and its function value; when
    /// that value is exactly zero the bracket collapses onto it.
    pub fn step<F: Fn(f64) -> f64>(&mut self, f: F) -> Result<(f64, f64)> {
        let c = self.midpoint();
        let fc = checked(f(c))?;
        if fc == 0.0 {
            self.a = c;
            self.b = c;
            self.fa = 0.0;
            self.fb = 0.0;
        } else if self.fa * fc < 0.0 {
            self.b = c;
            self.fb = fc;
        } else {
            self.a = c;
            self.fa = fc;
        }
        Ok((c, fc))
    }
}

pub fn bisection<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_iter: usize) -> Result<RootReport<f64>> {
    check_tol(tol)?;
    let mut br = Bracket::new(&f, a, b)?;
    let mut history = Vec::new();
    let mut iterations = 0;
    if br.fa == 0.0 || br.fb == 0.0 {
        let root = if br.fa == 0.0 { br.a } else { br.b };
        return Ok(RootReport { root, iterations, residual: 0.0, converged: true, history: vec![root] });
    }
    while br.width() / 2.0 > tol {
        if iterations == max_iter {
            return Err(NumError::MaxIterations(max_iter));
        }
        let (c, fc) = br.step(&f)?;
        history.push(c);
        iterations += 1;
        if fc == 0.0 {
            return Ok(RootReport { root: c, iterations, residual: 0.0, converged: true, history });
        }
    }
    let root = br.midpoint();
    history.push(root);
    Ok(RootReport { root, iterations, residual: checked(f(root))?.abs(), converged: true, history })
}

/// Newton's method. Without `df` the derivative is a central difference
/// with step `1e-6`.
pub fn newton_scalar<F, D>(f: F, df: Option<D>, x0: f64, tol: f64, max_iter: usize) -> Result<RootReport<f64>>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    check_tol(tol)?;
    let mut x = checked(x0)?;
    let mut history = vec![x];
    for it in 1..=max_iter {
        let fx = checked(f(x))?;
        let d = match &df {
            Some(df) => df(x),
            None => (f(x + NEWTON_FD_STEP) - f(x - NEWTON_FD_STEP)) / (2.0 * NEWTON_FD_STEP),
        };
        let d = checked(d)?;
        if d.abs() < ZERO_DERIVATIVE {
            return Err(NumError::ZeroDerivative);
        }
        let x_new = checked(x - fx / d)?;
        history.push(x_new);
        if (x_new - x).abs() < tol {
            return Ok(RootReport {
                root: x_new,
                iterations: it,
                residual: checked(f(x_new))?.abs(),
                converged: true,
                history,
            });
        }
        x = x_new;
    }
    Err(NumError::MaxIterations(max_iter))
}

/// Secant method. Fails with [`NumError::FlatSecant`] when two successive
/// function values differ by less than `tol`.
pub fn secant<F: Fn(f64) -> f64>(f: F, x0: f64, x1: f64, tol: f64, max_iter: usize) -> Result<RootReport<f64>> {
    check_tol(tol)?;
    let (mut x0, mut x1) = (checked(x0)?, checked(x1)?);
    let mut f0 = checked(f(x0))?;
    let mut f1 = checked(f(x1))?;
    let mut history = vec![x0, x1];
    for it in 1..=max_iter {
        if f1 == 0.0 {
            return Ok(RootReport { root: x1, iterations: it - 1, residual: 0.0, converged: true, history });
        }
        if (f1 - f0).abs() < tol {
            return Err(NumError::FlatSecant);
        }
        let x2 = checked(x1 - f1 * (x1 - x0) / (f1 - f0))?;
        history.push(x2);
        let f2 = checked(f(x2))?;
        if (x2 - x1).abs() < tol {
            return Ok(RootReport { root: x2, iterations: it, residual: f2.abs(), converged: true, history });
        }
        (x0, f0, x1, f1) = (x1, f1, x2, f2);
    }
    Err(NumError::MaxIterations(max_iter))
}

/// Iterates `x ← g(x)` until `|g(x) − x| < tol`.
pub fn fixed_point<G: Fn(f64) -> f64>(g: G, x0: f64, tol: f64, max_iter: usize) -> Result<RootReport<f64>> {
    check_tol(tol)?;
    let mut x = checked(x0)?;
    let mut history = vec![x];
    for it in 1..=max_iter {
        let gx = g(x);
        if !gx.is_finite() || gx.abs() > DIVERGENCE_BOUND {
            return Err(NumError::NonFinite);
        }
        history.push(gx);
        if (gx - x).abs() < tol {
            return Ok(RootReport { root: gx, iterations: it, residual: (g(gx) - gx).abs(), converged: true, history });
        }
        x = gx;
    }
    Err(NumError::MaxIterations(max_iter))
}

fn eval_system<F: Fn(&[f64]) -> Vec<f64>>(f: &F, x: &[f64]) -> Result<Vec<f64>> {
    let fx = f(x);
    if fx.len() != x.len() {
        return Err(NumError::shape("system must map R^n to R^n"));
    }
    if fx.iter().any(|v| !v.is_finite()) {
        return Err(NumError::NonFinite);
    }
    Ok(fx)
}

/// Forward-difference Jacobian with step `1e-7`.
pub fn fd_jacobian<F: Fn(&[f64]) -> Vec<f64>>(f: F, x: &[f64]) -> Result<Matrix> {
    let fx = eval_system(&f, x)?;
    fd_jacobian_at(&f, x, &fx)
}

fn fd_jacobian_at<F: Fn(&[f64]) -> Vec<f64>>(f: &F, x: &[f64], fx: &[f64]) -> Result<Matrix> {
    let n = x.len();
    let mut jac = Matrix::zeros(n, n);
    let mut probe = x.to_vec();
    for j in 0..n {
        probe[j] = x[j] + JACOBIAN_FD_STEP;
        let fp = eval_system(f, &probe)?;
        probe[j] = x[j];
        for i in 0..n {
            jac[(i, j)] = (fp[i] - fx[i]) / JACOBIAN_FD_STEP;
        }
    }
    Ok(jac)
}

fn solve_step(m: &Matrix, rhs: &[f64], err: NumError) -> Result<Vec<f64>> {
    match lu(m).and_then(|f| f.solve(rhs)) {
        Ok(s) => Ok(s),
        Err(NumError::Singular) => Err(err),
        Err(e) => Err(e),
    }
}

fn start_system(x0: &[f64], tol: f64) -> Result<Vec<f64>> {
    check_tol(tol)?;
    if x0.is_empty() {
        return Err(NumError::EmptyInput);
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(NumError::NonFinite);
    }
    Ok(x0.to_vec())
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// A residual this small means the next step would be far below `tol`, so
/// the current iterate is returned as is.
fn negligible(fx: &[f64], tol: f64) -> bool {
    norm_inf(fx) <= tol * tol
}

/// Newton's method for `F(x) = 0`, solving `J Δ = −F` each step. Without
/// `jac` the Jacobian is a forward difference.
pub fn newton_system<F, J>(f: F, jac: Option<J>, x0: &[f64], tol: f64, max_iter: usize) -> Result<RootReport<Vec<f64>>>
where
    F: Fn(&[f64]) -> Vec<f64>,
    J: Fn(&[f64]) -> Matrix,
{
    let mut x = start_system(x0, tol)?;
    let n = x.len();
    let mut fx = eval_system(&f, &x)?;
    let mut history = vec![x.clone()];
    for it in 0..max_iter {
        if negligible(&fx, tol) {
            return Ok(RootReport { residual: norm_inf(&fx), root: x, iterations: it, converged: true, history });
        }
        let j = match &jac {
            Some(jf) => {
                let j = jf(&x);
                if j.shape() != (n, n) {
                    return Err(NumError::shape("Jacobian must be n x n"));
                }
                j
            }
            None => fd_jacobian_at(&f, &x, &fx)?,
        };
        let rhs: Vec<f64> = fx.iter().map(|v| -v).collect();
        let dx = solve_step(&j, &rhs, NumError::SingularJacobian)?;
        x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
        fx = eval_system(&f, &x)?;
        history.push(x.clone());
        if l2(&dx) < tol {
            return Ok(RootReport { residual: norm_inf(&fx), root: x, iterations: it + 1, converged: true, history });
        }
    }
    Err(NumError::MaxIterations(max_iter))
}

/// Current Jacobian approximation of Broyden's method.
#[derive(Debug, Clone, PartialEq)]
pub struct BroydenState {
    pub b: Matrix,
}

impl BroydenState {
    pub fn new(b: Matrix) -> Result<Self> {
        if !b.is_square() {
            return Err(NumError::shape("Broyden matrix must be square"));
        }
        Ok(BroydenState { b })
    }

    /// Rank-one update `B ← B + (y − B s) sᵀ / (sᵀ s)`, after which `B s = y`.
    pub fn update(&mut self, s: &[f64], y: &[f64]) -> Result<()> {
        let n = self.b.rows();
        if s.len() != n || y.len() != n {
            return Err(NumError::shape("Broyden update vector length"));
        }
        let ss: f64 = s.iter().map(|v| v * v).sum();
        if ss == 0.0 {
            return Ok(());
        }
        let bs = self.b.mul_vec(s)?;
        for i in 0..n {
            let r = (y[i] - bs[i]) / ss;
            for j in 0..n {
                self.b[(i, j)] += r * s[j];
            }
        }
        Ok(())
    }
}

/// Broyden's method. `b0` defaults to the identity.
pub fn broyden<F: Fn(&[f64]) -> Vec<f64>>(
    f: F,
    x0: &[f64],
    b0: Option<Matrix>,
    tol: f64,
    max_iter: usize,
) -> Result<RootReport<Vec<f64>>> {
    let mut x = start_system(x0, tol)?;
    let n = x.len();
    let mut state = BroydenState::new(b0.unwrap_or_else(|| Matrix::identity(n)))?;
    if state.b.rows() != n {
        return Err(NumError::shape("initial Jacobian does not match the system size"));
    }
    let mut fx = eval_system(&f, &x)?;
    let mut history = vec![x.clone()];
    for it in 0..max_iter {
        if negligible(&fx, tol) {
            return Ok(RootReport { residual: norm_inf(&fx), root: x, iterations: it, converged: true, history });
        }
        let rhs: Vec<f64> = fx.iter().map(|v| -v).collect();
        let s = solve_step(&state.b, &rhs, NumError::SingularApproximation)?;
        x.iter_mut().zip(&s).for_each(|(xi, d)| *xi += d);
        let f_new = eval_system(&f, &x)?;
        history.push(x.clone());
        if l2(&s) < tol {
            return Ok(RootReport {
                residual: norm_inf(&f_new),
                root: x,
                iterations: it + 1,
                converged: true,
                history,
            });
        }
        let y: Vec<f64> = f_new.iter().zip(&fx).map(|(a, b)| a - b).collect();
        state.update(&s, &y)?;
        fx = f_new;
    }
    Err(NumError::MaxIterations(max_iter))
}

/// Order estimate `log(e₃/e₂) / log(e₂/e₁)` from the last three errors.
/// Returns `None` when fewer than three positive errors are available.
pub fn empirical_order(errors: &[f64]) -> Option<f64> {
    let e: Vec<f64> = errors.iter().copied().filter(|v| *v > 0.0).collect();
    if e.len() < 3 {
        return None;
    }
    let k = e.len();
    Some((e[k - 1] / e[k - 2]).ln() / (e[k - 2] / e[k - 3]).ln())
}
