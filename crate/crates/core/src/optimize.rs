//! First-order optimizers, learning-rate schedules, gradient clipping and
//! Newton, quasi-Newton and simplex minimizers.

use std::collections::VecDeque;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{NumError, Result};
use crate::lindecomp::lu;
use crate::ndcore::{norm_inf, Matrix};

fn check_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(NumError::shape(format!("length {} vs {}", a.len(), b.len())))
    }
}

fn all_finite(v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(NumError::NonFinite)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Plain gradient descent. The trajectory starts with `x0` and has
/// `iters + 1` points.
pub fn gd_minimize<G>(grad: G, x0: &[f64], eta: f64, iters: usize) -> Result<Vec<Vec<f64>>>
where
    G: Fn(&[f64]) -> Vec<f64>,
{
    if !(eta > 0.0) {
        return Err(NumError::InvalidParameter("learning rate must be positive"));
    }
    let mut path = Vec::with_capacity(iters + 1);
    let mut x = x0.to_vec();
    all_finite(&x)?;
    path.push(x.clone());
    for _ in 0..iters {
        let g = grad(&x);
        check_len(&x, &g)?;
        x.iter_mut().zip(&g).for_each(|(xi, gi)| *xi -= eta * gi);
        all_finite(&x)?;
        path.push(x.clone());
    }
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptConfig {
    pub eta: f64,
    /// Momentum and RMSprop decay.
    pub beta: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Decoupled weight decay for AdamW.
    pub weight_decay: f64,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig { eta: 0.01, beta: 0.9, beta1: 0.9, beta2: 0.999, eps: 1e-8, weight_decay: 0.0 }
    }
}

impl OptConfig {
    pub fn with_eta(eta: f64) -> Self {
        OptConfig { eta, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        let unit = |b: f64| (0.0..1.0).contains(&b);
        if !(self.eta > 0.0) {
            return Err(NumError::InvalidParameter("learning rate must be positive"));
        }
        if !(unit(self.beta) && unit(self.beta1) && unit(self.beta2)) {
            return Err(NumError::InvalidParameter("decay rates must lie in [0, 1)"));
        }
        if !(self.eps > 0.0) || !(self.weight_decay >= 0.0) {
            return Err(NumError::InvalidParameter("eps must be positive and weight decay nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimizer {
    Sgd,
    Momentum,
    Adagrad,
    RmsProp,
    Adam,
    AdamW,
}

/// Per-parameter optimizer memory. Accumulators start at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OptState {
    pub velocity: Vec<f64>,
    pub accum: Vec<f64>,
    pub sq_avg: Vec<f64>,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl OptState {
    pub fn new(n: usize) -> Self {
        OptState {
            velocity: vec![0.0; n],
            accum: vec![0.0; n],
            sq_avg: vec![0.0; n],
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }
}

/// Applies one update of `kind` and returns the new parameters.
pub fn optimizer_step(
    kind: Optimizer,
    theta: &[f64],
    g: &[f64],
    state: &mut OptState,
    cfg: &OptConfig,
) -> Result<Vec<f64>> {
    check_len(theta, g)?;
    if state.velocity.len() != theta.len() {
        return Err(NumError::shape("optimizer state sized for another parameter count"));
    }
    cfg.validate()?;
    all_finite(g)?;
    state.t += 1;
    let eta = cfg.eta;
    let mut out = theta.to_vec();
    match kind {
        Optimizer::Sgd => {
            for i in 0..out.len() {
                out[i] -= eta * g[i];
            }
        }
        Optimizer::Momentum => {
            for i in 0..out.len() {
                state.velocity[i] = cfg.beta * state.velocity[i] + (1.0 - cfg.beta) * g[i];
                out[i] -= eta * state.velocity[i];
            }
        }
        Optimizer::Adagrad => {
            for i in 0..out.len() {
                state.accum[i] += g[i] * g[i];
                out[i] -= eta / (state.accum[i] + cfg.eps).sqrt() * g[i];
            }
        }
        Optimizer::RmsProp => {
            for i in 0..out.len() {
                state.sq_avg[i] = cfg.beta * state.sq_avg[i] + (1.0 - cfg.beta) * g[i] * g[i];
                out[i] -= eta / (state.sq_avg[i] + cfg.eps).sqrt() * g[i];
            }
        }
        Optimizer::Adam | Optimizer::AdamW => {
            let t = state.t as i32;
            let c1 = 1.0 - cfg.beta1.powi(t);
            let c2 = 1.0 - cfg.beta2.powi(t);
            for i in 0..out.len() {
                state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g[i];
                state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                let m_hat = state.m[i] / c1;
                let v_hat = state.v[i] / c2;
                out[i] -= eta * m_hat / (v_hat.sqrt() + cfg.eps);
                if kind == Optimizer::AdamW {
                    out[i] -= eta * cfg.weight_decay * theta[i];
                }
            }
        }
    }
    all_finite(&out)?;
    Ok(out)
}

/// Learning rate as a function of the step or epoch counter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    Step { eta0: f64, drop_factor: f64, drop_epoch: usize },
    Exponential { eta0: f64, lambda: f64 },
    CosineWarmRestarts { eta_min: f64, eta_max: f64, t0: usize, t_mult: usize },
}

impl Schedule {
    pub fn warm_restarts(eta_min: f64, eta_max: f64, t0: usize) -> Self {
        Schedule::CosineWarmRestarts { eta_min, eta_max, t0, t_mult: 2 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Schedule::Step { drop_epoch: 0, .. } => Err(NumError::InvalidParameter("drop_epoch must be at least 1")),
            Schedule::CosineWarmRestarts { eta_min, eta_max, t0, t_mult } => {
                if eta_min > eta_max {
                    Err(NumError::InvalidParameter("eta_min must not exceed eta_max"))
                } else if t0 == 0 || t_mult == 0 {
                    Err(NumError::InvalidParameter("restart periods must be at least 1"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn lr_at(&self, t: usize) -> f64 {
        match *self {
            Schedule::Step { eta0, drop_factor, drop_epoch } => eta0 * drop_factor.powi((t / drop_epoch.max(1)) as i32),
            Schedule::Exponential { eta0, lambda } => eta0 * (-lambda * t as f64).exp(),
            Schedule::CosineWarmRestarts { eta_min, eta_max, t0, t_mult } => {
                let (t_cur, t_i) = restart_position(t, t0.max(1), t_mult.max(1));
                cosine_annealing(eta_min, eta_max, t_cur as f64, t_i as f64)
            }
        }
    }
}

/// Position inside the current restart cycle and that cycle's length.
pub fn restart_position(t: usize, t0: usize, t_mult: usize) -> (usize, usize) {
    let mut t_cur = t;
    let mut t_i = t0;
    while t_cur >= t_i {
        t_cur -= t_i;
        t_i *= t_mult;
    }
    (t_cur, t_i)
}

/// `η_min + ½(η_max − η_min)(1 + cos(π·T_cur/T_max))`.
pub fn cosine_annealing(eta_min: f64, eta_max: f64, t_cur: f64, t_max: f64) -> f64 {
    eta_min + 0.5 * (eta_max - eta_min) * (1.0 + (PI * t_cur / t_max).cos())
}

/// Rescales `g` to norm `threshold` when it is longer than that.
pub fn clip_by_norm(g: &[f64], threshold: f64) -> Result<Vec<f64>> {
    if !(threshold > 0.0) {
        return Err(NumError::InvalidParameter("clip threshold must be positive"));
    }
    let n = l2(g);
    if n <= threshold {
        return Ok(g.to_vec());
    }
    Ok(g.iter().map(|v| v * threshold / n).collect())
}

/// Outcome of the Newton, quasi-Newton and simplex minimizers.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeReport {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    /// `‖∇f(x)‖∞`, or the simplex spread for Nelder-Mead.
    pub residual: f64,
    pub converged: bool,
    pub path: Vec<Vec<f64>>,
}

/// Newton's method `x ← x − H⁻¹∇f`, solving with LU. Stops when
/// `‖Δx‖∞ < tol`, or before stepping when the gradient is already below
/// `tol²`.
pub fn newton_minimize<G, H>(grad: G, hess: H, x0: &[f64], tol: f64, max_iter: usize) -> Result<MinimizeReport>
where
    G: Fn(&[f64]) -> Vec<f64>,
    H: Fn(&[f64]) -> Matrix,
{
    if !(tol > 0.0) {
        return Err(NumError::InvalidParameter("tolerance must be positive"));
    }
    let mut x = x0.to_vec();
    all_finite(&x)?;
    let mut path = vec![x.clone()];
    for it in 0..max_iter {
        let g = grad(&x);
        check_len(&x, &g)?;
        all_finite(&g)?;
        if norm_inf(&g) <= tol * tol {
            return Ok(MinimizeReport {
                fx: f64::NAN,
                residual: norm_inf(&g),
                x,
                iterations: it,
                converged: true,
                path,
            });
        }
        let h = hess(&x);
        if h.shape() != (x.len(), x.len()) {
            return Err(NumError::shape("Hessian must be n x n"));
        }
        let dx = match lu(&h).and_then(|f| f.solve(&g)) {
            Ok(d) => d,
            Err(NumError::Singular) => return Err(NumError::SingularHessian),
            Err(e) => return Err(e),
        };
        x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi -= d);
        all_finite(&x)?;
        path.push(x.clone());
        if norm_inf(&dx) < tol {
            let g = grad(&x);
            return Ok(MinimizeReport {
                fx: f64::NAN,
                residual: norm_inf(&g),
                x,
                iterations: it + 1,
                converged: true,
                path,
            });
        }
    }
    Err(NumError::MaxIterations(max_iter))
}

pub const ARMIJO_C: f64 = 1e-4;
pub const CURVATURE_GUARD: f64 = 1e-10;
pub const DEFAULT_LBFGS_MEMORY: usize = 10;

/// Curvature information kept by BFGS (dense inverse Hessian) or L-BFGS
/// (the most recent `(s, y)` pairs).
#[derive(Debug, Clone, PartialEq)]
pub enum QuasiNewtonState {
    Bfgs { h_inv: Matrix },
    Lbfgs { pairs: VecDeque<(Vec<f64>, Vec<f64>)>, memory: usize },
}

impl QuasiNewtonState {
    pub fn bfgs(n: usize) -> Self {
        QuasiNewtonState::Bfgs { h_inv: Matrix::identity(n) }
    }

    pub fn lbfgs(memory: usize) -> Self {
        QuasiNewtonState::Lbfgs { pairs: VecDeque::with_capacity(memory), memory }
    }

    /// `H·g` for the current approximation.
    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        match self {
            QuasiNewtonState::Bfgs { h_inv, .. } => h_inv.mul_vec(g).expect("state sized to the problem"),
            QuasiNewtonState::Lbfgs { pairs, .. } => two_loop(pairs, g),
        }
    }

    /// Incorporates a step; skipped (returns false) when
    /// `yᵀs ≤ CURVATURE_GUARD·‖s‖‖y‖`.
    pub fn update(&mut self, s: &[f64], y: &[f64]) -> bool {
        let ys = dot(y, s);
        if ys <= CURVATURE_GUARD * dot(s, s).sqrt() * dot(y, y).sqrt() {
            return false;
        }
        match self {
            QuasiNewtonState::Bfgs { h_inv } => {
                let rho = 1.0 / ys;
                let hy = h_inv.mul_vec(y).expect("state sized to the problem");
                let yhy = dot(y, &hy);
                let c = rho * rho * yhy + rho;
                let n = s.len();
                for i in 0..n {
                    for j in 0..n {
                        h_inv[(i, j)] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + c * s[i] * s[j];
                    }
                }
            }
            QuasiNewtonState::Lbfgs { pairs, memory } => {
                if pairs.len() == *memory {
                    pairs.pop_front();
                }
                pairs.push_back((s.to_vec(), y.to_vec()));
            }
        }
        true
    }

    fn reset(&mut self) {
        match self {
            QuasiNewtonState::Bfgs { h_inv } => *h_inv = Matrix::identity(h_inv.rows()),
            QuasiNewtonState::Lbfgs { pairs, .. } => pairs.clear(),
        }
    }
}

fn two_loop(pairs: &VecDeque<(Vec<f64>, Vec<f64>)>, g: &[f64]) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y) in pairs.iter().rev() {
        let rho = 1.0 / dot(y, s);
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push((a, rho));
    }
    if let Some((s, y)) = pairs.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y), (a, rho)) in pairs.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q
}

/// Quasi-Newton iteration with a backtracking Armijo line search, advanced
/// one step at a time.
#[derive(Debug, Clone)]
pub struct QuasiNewton {
    pub x: Vec<f64>,
    pub fx: f64,
    pub g: Vec<f64>,
    pub state: QuasiNewtonState,
    pub iterations: usize,
    pub path: Vec<Vec<f64>>,
}

impl QuasiNewton {
    pub fn new<F, G>(f: F, grad: G, x0: &[f64], state: QuasiNewtonState) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
        G: Fn(&[f64]) -> Vec<f64>,
    {
        all_finite(x0)?;
        if let QuasiNewtonState::Bfgs { h_inv, .. } = &state {
            if h_inv.shape() != (x0.len(), x0.len()) {
                return Err(NumError::shape("inverse Hessian does not match x0"));
            }
        }
        let fx = f(x0);
        let g = grad(x0);
        check_len(x0, &g)?;
        if !fx.is_finite() {
            return Err(NumError::NonFinite);
        }
        all_finite(&g)?;
        Ok(QuasiNewton { x: x0.to_vec(), fx, g, state, iterations: 0, path: vec![x0.to_vec()] })
    }

    pub fn grad_norm(&self) -> f64 {
        norm_inf(&self.g)
    }

    pub fn step<F, G>(&mut self, f: F, grad: G) -> Result<()>
    where
        F: Fn(&[f64]) -> f64,
        G: Fn(&[f64]) -> Vec<f64>,
    {
        let mut p: Vec<f64> = self.state.apply(&self.g).iter().map(|v| -v).collect();
        let mut slope = dot(&self.g, &p);
        if !(slope < 0.0) {
            self.state.reset();
            p = self.g.iter().map(|v| -v).collect();
            slope = dot(&self.g, &p);
        }
        let mut alpha = 1.0;
        let (x_new, f_new) = loop {
            let cand: Vec<f64> = self.x.iter().zip(&p).map(|(x, d)| x + alpha * d).collect();
            let fc = f(&cand);
            if fc.is_finite() && fc <= self.fx + ARMIJO_C * alpha * slope {
                break (cand, fc);
            }
            alpha /= 2.0;
            if alpha < 1e-20 {
                return Err(NumError::LineSearchFailure);
            }
        };
        let g_new = grad(&x_new);
        check_len(&x_new, &g_new)?;
        all_finite(&g_new)?;
        let s: Vec<f64> = x_new.iter().zip(&self.x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&self.g).map(|(a, b)| a - b).collect();
        // stale L-BFGS pairs from a region of negative curvature stall the search
        if !self.state.update(&s, &y) && matches!(self.state, QuasiNewtonState::Lbfgs { .. }) {
            self.state.reset();
        }
        self.x = x_new;
        self.fx = f_new;
        self.g = g_new;
        self.iterations += 1;
        self.path.push(self.x.clone());
        Ok(())
    }

    /// Steps until `‖∇f‖∞ < tol`.
    pub fn run<F, G>(mut self, f: F, grad: G, tol: f64, max_iter: usize) -> Result<(MinimizeReport, QuasiNewtonState)>
    where
        F: Fn(&[f64]) -> f64,
        G: Fn(&[f64]) -> Vec<f64>,
    {
        while self.grad_norm() >= tol {
            if self.iterations == max_iter {
                return Err(NumError::MaxIterations(max_iter));
            }
            self.step(&f, &grad)?;
        }
        let report = MinimizeReport {
            residual: self.grad_norm(),
            x: self.x,
            fx: self.fx,
            iterations: self.iterations,
            converged: true,
            path: self.path,
        };
        Ok((report, self.state))
    }
}

pub fn bfgs_minimize<F, G>(f: F, grad: G, x0: &[f64], tol: f64, max_iter: usize) -> Result<MinimizeReport>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let qn = QuasiNewton::new(&f, &grad, x0, QuasiNewtonState::bfgs(x0.len()))?;
    Ok(qn.run(f, grad, tol, max_iter)?.0)
}

pub fn lbfgs_minimize<F, G>(
    f: F,
    grad: G,
    x0: &[f64],
    memory: usize,
    tol: f64,
    max_iter: usize,
) -> Result<MinimizeReport>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    if memory == 0 {
        return Err(NumError::InvalidParameter("L-BFGS memory must be at least 1"));
    }
    let qn = QuasiNewton::new(&f, &grad, x0, QuasiNewtonState::lbfgs(memory))?;
    Ok(qn.run(f, grad, tol, max_iter)?.0)
}

/// Nelder-Mead simplex search with reflection 1, expansion 2, contraction
/// 0.5 and shrink 0.5. Stops when both the spread of function values and
/// the coordinate extent of the simplex drop below `tol`; the extent check
/// keeps two vertices with equal values on either side of a minimum from
/// passing as converged.
pub fn nelder_mead<F>(f: F, x0: &[f64], tol: f64, max_iter: usize) -> Result<MinimizeReport>
where
    F: Fn(&[f64]) -> f64,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;
    let n = x0.len();
    if n == 0 {
        return Err(NumError::EmptyInput);
    }
    all_finite(x0)?;
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            Err(NumError::NonFinite)
        } else {
            Ok(v)
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), eval(x0)?)];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] = if v[i] != 0.0 { 1.05 * v[i] } else { 0.00025 };
        let fv = eval(&v)?;
        simplex.push((v, fv));
    }
    let mut path = vec![x0.to_vec()];
    let mut it = 0;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let extent = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread < tol && extent < tol {
            let (x, fx) = simplex.swap_remove(0);
            return Ok(MinimizeReport { x, fx, iterations: it, residual: spread.max(0.0), converged: true, path });
        }
        if it == max_iter {
            return Err(NumError::MaxIterations(max_iter));
        }
        it += 1;
        let centroid: Vec<f64> =
            (0..n).map(|j| simplex[..n].iter().map(|(v, _)| v[j]).sum::<f64>() / n as f64).collect();
        let toward =
            |coef: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + coef * (c - w)).collect() };
        let xr = toward(ALPHA);
        let fr = eval(&xr)?;
        if fr < simplex[0].1 {
            let xe = toward(GAMMA);
            let fe = eval(&xe)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = toward(RHO * ALPHA);
                let fc = eval(&xc)?;
                (xc, fc)
            } else {
                let xc = toward(-RHO);
                let fc = eval(&xc)?;
                (xc, fc)
            };
            if fc < fr.min(simplex[n].1) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (v, fv) in simplex.iter_mut().skip(1) {
                    v.iter_mut().zip(&best).for_each(|(vi, bi)| *vi = bi + SIGMA * (*vi - bi));
                    *fv = eval(v)?;
                }
            }
        }
        let best = simplex.iter().min_by(|a, b| a.1.total_cmp(&b.1)).expect("nonempty simplex");
        path.push(best.0.clone());
    }
}

/// `y = 2x + 1 + 0.1·noise` with `x` uniform on `[0, 1)` and standard
/// normal noise.
pub fn linreg_synthetic(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let ys = xs
        .iter()
        .map(|x| {
            let z: f64 = rng.sample(StandardNormal);
            2.0 * x + 1.0 + 0.1 * z
        })
        .collect();
    (xs, ys)
}

/// Mini-batch SGD for `y ≈ θ₀ + θ₁x` with squared loss. `θ` starts from
/// standard normal draws; batch indices are sampled with replacement.
/// Returns `[intercept, slope]`.
pub fn sgd_linreg(xs: &[f64], ys: &[f64], batch: usize, eta: f64, iters: usize, seed: u64) -> Result<[f64; 2]> {
    check_len(xs, ys)?;
    if xs.is_empty() {
        return Err(NumError::EmptyInput);
    }
    if batch == 0 || batch > xs.len() {
        return Err(NumError::InvalidParameter("batch must be in 1..=len"));
    }
    if !(eta > 0.0) {
        return Err(NumError::InvalidParameter("learning rate must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta = [rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)];
    for _ in 0..iters {
        let mut g = [0.0; 2];
        for _ in 0..batch {
            let i = rng.random_range(0..xs.len());
            let r = theta[0] + theta[1] * xs[i] - ys[i];
            g[0] += r;
            g[1] += r * xs[i];
        }
        let scale = 2.0 / batch as f64;
        theta[0] -= eta * scale * g[0];
        theta[1] -= eta * scale * g[1];
    }
    all_finite(&theta)?;
    Ok(theta)
}
