//! ODE integrators and a few small dynamical models.
//!
//! All integrators run on a uniform grid `t0, t0 + h, …` and store every
//! step. When `h` does not divide `t_end − t0` the final step is shortened to
//! land on `t_end`.

use crate::error::{NumError, Result};
use crate::ndcore::Matrix;
use crate::roots::{self, RootReport};

/// Convergence tolerance on the Newton step inside backward Euler.
pub const IMPLICIT_TOL: f64 = 1e-12;
pub const IMPLICIT_MAX_ITER: usize = 50;
/// Largest accepted residual of the implicit equation after Newton stops.
pub const IMPLICIT_RESIDUAL: f64 = 1e-10;
/// Explicit heat scheme limit on `α·Δt/Δx²`.
pub const HEAT_STABILITY_LIMIT: f64 = 0.5;

/// Initial value problem `y' = f(t, y)`, `y(t0) = y0` on `[t0, t_end]`.
#[derive(Clone)]
pub struct IvpProblem<F> {
    pub f: F,
    pub t0: f64,
    pub y0: Vec<f64>,
    pub h: f64,
    pub t_end: f64,
}

impl<F: Fn(f64, &[f64]) -> Vec<f64>> IvpProblem<F> {
    pub fn new(f: F, t0: f64, y0: &[f64], h: f64, t_end: f64) -> Result<Self> {
        if !(t0.is_finite() && t_end.is_finite() && h.is_finite()) || y0.iter().any(|v| !v.is_finite()) {
            return Err(NumError::NonFinite);
        }
        if y0.is_empty() {
            return Err(NumError::EmptyInput);
        }
        if h <= 0.0 {
            return Err(NumError::InvalidParameter("step must be positive"));
        }
        if t_end <= t0 {
            return Err(NumError::InvalidParameter("t_end must exceed t0"));
        }
        if h > t_end - t0 {
            return Err(NumError::InvalidParameter("step longer than the interval"));
        }
        Ok(IvpProblem { f, t0, y0: y0.to_vec(), h, t_end })
    }

    fn eval(&self, t: f64, y: &[f64]) -> Result<Vec<f64>> {
        let d = (self.f)(t, y);
        if d.len() != y.len() {
            return Err(NumError::shape(format!("f returned {} values for a state of {}", d.len(), y.len())));
        }
        Ok(d)
    }

    /// Time grid, with the last point pinned to `t_end`.
    fn grid(&self) -> Vec<f64> {
        let span = self.t_end - self.t0;
        // tolerate round-off in span / h so that e.g. 1.0 / 0.1 gives 10 steps
        let steps = ((span / self.h) - 1e-9).ceil().max(1.0) as usize;
        let mut ts: Vec<f64> = (0..steps).map(|i| self.t0 + i as f64 * self.h).collect();
        ts.push(self.t_end);
        ts
    }
}

/// Solution samples, one row of `ys` per entry of `ts`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub ts: Vec<f64>,
    pub ys: Matrix,
}

impl Trajectory {
    fn from_states(ts: Vec<f64>, states: Vec<Vec<f64>>) -> Result<Self> {
        let dim = states[0].len();
        let data: Vec<f64> = states.into_iter().flatten().collect();
        let ys = Matrix::new(ts.len(), dim, data)?;
        Ok(Trajectory { ts, ys })
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        self.ts[self.ts.len() - 1]
    }

    pub fn final_state(&self) -> &[f64] {
        self.ys.row(self.ys.rows() - 1)
    }

    /// State component `j` over time.
    pub fn component(&self, j: usize) -> Vec<f64> {
        self.ys.col(j)
    }
}

fn finite(y: Vec<f64>) -> Result<Vec<f64>> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(y)
    } else {
        Err(NumError::NonFinite)
    }
}

fn axpy(y: &[f64], a: f64, d: &[f64]) -> Vec<f64> {
    y.iter().zip(d).map(|(yi, di)| yi + a * di).collect()
}

fn integrate<F, S>(p: &IvpProblem<F>, mut step: S) -> Result<Trajectory>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
    S: FnMut(f64, &[f64], f64) -> Result<Vec<f64>>,
{
    let ts = p.grid();
    let mut states = Vec::with_capacity(ts.len());
    states.push(p.y0.clone());
    for w in ts.windows(2) {
        let y = states.last().expect("nonempty");
        let next = finite(step(w[0], y, w[1] - w[0])?)?;
        states.push(next);
    }
    Trajectory::from_states(ts, states)
}

/// Explicit Euler: `y ← y + h·f(t, y)`.
pub fn euler_solve<F: Fn(f64, &[f64]) -> Vec<f64>>(p: &IvpProblem<F>) -> Result<Trajectory> {
    integrate(p, |t, y, h| Ok(axpy(y, h, &p.eval(t, y)?)))
}

pub fn rk4_step<F: Fn(f64, &[f64]) -> Vec<f64>>(f: &F, t: f64, y: &[f64], h: f64) -> Vec<f64> {
    rk4_from(f, t, y, h, f(t, y))
}

fn rk4_from<F: Fn(f64, &[f64]) -> Vec<f64>>(f: &F, t: f64, y: &[f64], h: f64, k1: Vec<f64>) -> Vec<f64> {
    let k2 = f(t + h / 2.0, &axpy(y, h / 2.0, &k1));
    let k3 = f(t + h / 2.0, &axpy(y, h / 2.0, &k2));
    let k4 = f(t + h, &axpy(y, h, &k3));
    (0..y.len()).map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
}

/// Classical fourth-order Runge-Kutta.
pub fn rk4_solve<F: Fn(f64, &[f64]) -> Vec<f64>>(p: &IvpProblem<F>) -> Result<Trajectory> {
    integrate(p, |t, y, h| Ok(rk4_from(&p.f, t, y, h, p.eval(t, y)?)))
}

/// Backward Euler. Each step solves `z − y − h·f(t + h, z) = 0` by Newton's
/// method with a finite-difference Jacobian, starting from the current state.
pub fn backward_euler_solve<F: Fn(f64, &[f64]) -> Vec<f64>>(p: &IvpProblem<F>) -> Result<Trajectory> {
    integrate(p, |t, y, h| {
        let t1 = t + h;
        let g = |z: &[f64]| -> Vec<f64> {
            let fz = (p.f)(t1, z);
            z.iter().zip(y).zip(&fz).map(|((zi, yi), fi)| zi - yi - h * fi).collect()
        };
        p.eval(t1, y)?;
        let report: RootReport<Vec<f64>> =
            roots::newton_system(g, None::<fn(&[f64]) -> Matrix>, y, IMPLICIT_TOL, IMPLICIT_MAX_ITER)
                .map_err(|_| NumError::NewtonFailure)?;
        if report.residual > IMPLICIT_RESIDUAL * (1.0 + y.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            return Err(NumError::NewtonFailure);
        }
        Ok(report.root)
    })
}

/// Leaky integrate-and-fire membrane, `τ_m dV/dt = −(V − V_rest) + R_m·I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifParams {
    /// ms
    pub tau_m: f64,
    /// mV
    pub v_rest: f64,
    /// MΩ
    pub r_m: f64,
    /// µA
    pub current: f64,
}

impl Default for LifParams {
    fn default() -> Self {
        LifParams { tau_m: 10.0, v_rest: -65.0, r_m: 10.0, current: 20.0 }
    }
}

impl LifParams {
    pub fn steady_state(&self) -> f64 {
        self.v_rest + self.r_m * self.current
    }
}

/// RK4 integration of the membrane potential from `V(0) = V_rest`. There is no
/// spike threshold or reset.
pub fn lif_simulate(params: LifParams, h: f64, t_end: f64) -> Result<Trajectory> {
    if !(params.tau_m > 0.0) {
        return Err(NumError::InvalidParameter("tau_m must be positive"));
    }
    let LifParams { tau_m, v_rest, r_m, current } = params;
    let f = move |_t: f64, v: &[f64]| vec![(-(v[0] - v_rest) + r_m * current) / tau_m];
    rk4_solve(&IvpProblem::new(f, 0.0, &[v_rest], h, t_end)?)
}

/// First-order system `τ·y' + y = K` driven by a unit step, from `y(0) = 0`.
pub fn lti_step_response(k: f64, tau: f64, h: f64, t_end: f64) -> Result<Trajectory> {
    if !(tau > 0.0) {
        return Err(NumError::InvalidParameter("tau must be positive"));
    }
    let f = move |_t: f64, y: &[f64]| vec![(k - y[0]) / tau];
    rk4_solve(&IvpProblem::new(f, 0.0, &[0.0], h, t_end)?)
}

/// Rod of length `L` on `nx` grid points, advanced `nt` explicit steps to
/// `t_total`.
#[derive(Clone)]
pub struct HeatProblem<U> {
    pub alpha: f64,
    pub length: f64,
    pub nx: usize,
    pub nt: usize,
    pub t_total: f64,
    pub u0: U,
}

impl<U: Fn(f64) -> f64> HeatProblem<U> {
    pub fn new(alpha: f64, length: f64, nx: usize, nt: usize, t_total: f64, u0: U) -> Result<Self> {
        if !(alpha > 0.0 && length > 0.0 && t_total > 0.0) {
            return Err(NumError::InvalidParameter("alpha, length and t_total must be positive"));
        }
        if nx < 3 {
            return Err(NumError::InvalidParameter("nx must be at least 3"));
        }
        if nt < 1 {
            return Err(NumError::InvalidParameter("nt must be at least 1"));
        }
        let p = HeatProblem { alpha, length, nx, nt, t_total, u0 };
        let r = p.stability_factor();
        if !r.is_finite() {
            return Err(NumError::NonFinite);
        }
        if r >= HEAT_STABILITY_LIMIT {
            return Err(NumError::Unstable(r));
        }
        Ok(p)
    }

    pub fn dx(&self) -> f64 {
        self.length / (self.nx - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_total / self.nt as f64
    }

    /// `α·Δt/Δx²`
    pub fn stability_factor(&self) -> f64 {
        self.alpha * self.dt() / (self.dx() * self.dx())
    }

    pub fn xs(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.nx).map(|i| i as f64 * dx).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatSolution {
    pub xs: Vec<f64>,
    /// Temperature at `t_total`.
    pub u: Vec<f64>,
    /// `(t, u)` pairs, starting with the initial condition.
    pub snapshots: Vec<(f64, Vec<f64>)>,
}

/// Forward-time centred-space scheme. The end points keep their initial
/// values. `snapshot_every = Some(k)` records the field every `k` steps.
pub fn heat1d_explicit<U: Fn(f64) -> f64>(p: &HeatProblem<U>, snapshot_every: Option<usize>) -> Result<HeatSolution> {
    let xs = p.xs();
    let mut u = finite(xs.iter().map(|&x| (p.u0)(x)).collect())?;
    let r = p.stability_factor();
    let dt = p.dt();
    let mut snapshots = Vec::new();
    let every = snapshot_every.filter(|&k| k > 0);
    if every.is_some() {
        snapshots.push((0.0, u.clone()));
    }
    let mut next = u.clone();
    for n in 1..=p.nt {
        for i in 1..p.nx - 1 {
            next[i] = u[i] + r * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
        }
        std::mem::swap(&mut u, &mut next);
        if let Some(k) = every {
            if n % k == 0 || n == p.nt {
                snapshots.push((n as f64 * dt, u.clone()));
            }
        }
    }
    let u = finite(u)?;
    Ok(HeatSolution { xs, u, snapshots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn decay(_t: f64, y: &[f64]) -> Vec<f64> {
        vec![-2.0 * y[0]]
    }

    fn err_at_one(h: f64, rk: bool) -> f64 {
        let p = IvpProblem::new(decay, 0.0, &[1.0], h, 1.0).unwrap();
        let tr = if rk { rk4_solve(&p) } else { euler_solve(&p) }.unwrap();
        (tr.final_state()[0] - (-2.0f64).exp()).abs()
    }

    #[test]
    fn grid_lands_on_t_end() {
        let p = IvpProblem::new(decay, 0.0, &[1.0], 0.1, 1.0).unwrap();
        let tr = euler_solve(&p).unwrap();
        assert_eq!(tr.len(), 11);
        assert_eq!(tr.final_time(), 1.0);
        let p = IvpProblem::new(decay, 0.0, &[1.0], 0.3, 1.0).unwrap();
        let tr = euler_solve(&p).unwrap();
        assert_eq!(tr.len(), 5);
        assert!((tr.ts[4] - tr.ts[3] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn bad_problems() {
        assert!(IvpProblem::new(decay, 0.0, &[1.0], 0.0, 1.0).is_err());
        assert!(IvpProblem::new(decay, 1.0, &[1.0], 0.1, 1.0).is_err());
        assert!(IvpProblem::new(decay, 0.0, &[1.0], 2.0, 1.0).is_err());
        assert!(matches!(IvpProblem::new(decay, 0.0, &[f64::NAN], 0.1, 1.0), Err(NumError::NonFinite)));
        let p = IvpProblem::new(|_t: f64, _y: &[f64]| vec![0.0, 0.0], 0.0, &[1.0], 0.1, 1.0).unwrap();
        assert!(matches!(euler_solve(&p), Err(NumError::ShapeMismatch(_))));
    }

    #[test]
    fn euler_and_rk4_on_exponential_decay() {
        assert!(err_at_one(0.1, false) < 0.05);
        assert!(err_at_one(0.1, true) < 1e-5);
    }

    #[test]
    fn euler_on_constants_and_lines() {
        let p = IvpProblem::new(|_t: f64, _y: &[f64]| vec![0.0], 0.0, &[3.0], 0.25, 2.0).unwrap();
        for tr in [euler_solve(&p).unwrap(), rk4_solve(&p).unwrap(), backward_euler_solve(&p).unwrap()] {
            assert!(tr.component(0).iter().all(|&v| v == 3.0));
        }
        let p = IvpProblem::new(|_t: f64, _y: &[f64]| vec![1.0], 1.0, &[2.0], 0.125, 3.0).unwrap();
        let tr = euler_solve(&p).unwrap();
        for (t, y) in tr.ts.iter().zip(tr.component(0)) {
            assert!((y - (2.0 + t - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn rk4_is_exact_on_polynomials_in_t() {
        let p = IvpProblem::new(|t: f64, _y: &[f64]| vec![t], 0.0, &[0.0], 0.3, 2.0).unwrap();
        let tr = rk4_solve(&p).unwrap();
        for (t, y) in tr.ts.iter().zip(tr.component(0)) {
            assert!((y - t * t / 2.0).abs() < 1e-12);
        }
        let p = IvpProblem::new(|t: f64, _y: &[f64]| vec![4.0 * t.powi(3)], 0.0, &[0.0], 0.1, 1.0).unwrap();
        assert!((rk4_solve(&p).unwrap().final_state()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_of_accuracy() {
        let euler = err_at_one(0.1, false) / err_at_one(0.05, false);
        let rk = err_at_one(0.1, true) / err_at_one(0.05, true);
        assert!((euler - 2.0).abs() < 0.4, "{euler}");
        assert!((rk - 16.0).abs() < 4.0, "{rk}");
    }

    #[test]
    fn systems_rotate() {
        // y'' = −y as a first-order system, one full period
        let f = |_t: f64, y: &[f64]| vec![y[1], -y[0]];
        let p = IvpProblem::new(f, 0.0, &[1.0, 0.0], 2.0 * PI / 200.0, 2.0 * PI).unwrap();
        let end = rk4_solve(&p).unwrap();
        assert!((end.final_state()[0] - 1.0).abs() < 1e-6);
        assert!(end.final_state()[1].abs() < 1e-6);
        assert_eq!(end.ys.cols(), 2);
    }

    fn stiff(t: f64, y: &[f64]) -> Vec<f64> {
        vec![-1000.0 * y[0] + 3000.0 - 2000.0 * (-t).exp()]
    }

    fn stiff_exact(t: f64) -> f64 {
        3.0 - 2000.0 / 999.0 * (-t).exp() - 997.0 / 999.0 * (-1000.0 * t).exp()
    }

    #[test]
    fn stiff_problem() {
        // the closed form satisfies the ODE and the initial condition
        assert!(stiff_exact(0.0).abs() < 1e-15);
        let t = 0.3;
        let d = (stiff_exact(t + 1e-6) - stiff_exact(t - 1e-6)) / 2e-6;
        assert!((d - stiff(t, &[stiff_exact(t)])[0]).abs() < 1e-5);

        let p = IvpProblem::new(stiff, 0.0, &[0.0], 0.01, 5.0).unwrap();
        let tr = backward_euler_solve(&p).unwrap();
        assert!(tr.component(0).iter().all(|v| v.abs() < 4.0));
        assert!((tr.final_state()[0] - stiff_exact(5.0)).abs() < 0.01);

        match euler_solve(&p) {
            Err(NumError::NonFinite) => {}
            Ok(tr) => assert!(tr.final_state()[0].abs() > 1e6),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn backward_euler_solves_its_implicit_equation() {
        let f = |t: f64, y: &[f64]| vec![-y[0] * y[0] + t.sin(), y[0] - 3.0 * y[1]];
        let h = 0.05;
        let p = IvpProblem::new(f, 0.0, &[1.0, 0.5], h, 1.0).unwrap();
        let tr = backward_euler_solve(&p).unwrap();
        for i in 1..tr.len() {
            let (y0, y1) = (tr.ys.row(i - 1), tr.ys.row(i));
            let fy = f(tr.ts[i], y1);
            for j in 0..2 {
                assert!((y1[j] - y0[j] - h * fy[j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn backward_euler_is_stable_for_large_steps() {
        for lh in [1.0, 10.0, 100.0] {
            let lambda = lh / 0.1;
            let p = IvpProblem::new(move |_t: f64, y: &[f64]| vec![-lambda * y[0]], 0.0, &[1.0], 0.1, 2.0).unwrap();
            let ys = backward_euler_solve(&p).unwrap().component(0);
            assert!(ys.windows(2).all(|w| w[1].abs() <= w[0].abs()), "λh = {lh}");
        }
    }

    #[test]
    fn lif_examples() {
        let p = LifParams::default();
        let tr = lif_simulate(p, 0.1, 100.0).unwrap();
        assert!((tr.final_state()[0] - 135.0).abs() < 0.5);
        assert_eq!(p.steady_state(), 135.0);

        let i = tr.ts.iter().position(|&t| (t - 10.0).abs() < 1e-9).unwrap();
        let rise = tr.ys[(i, 0)] - p.v_rest;
        let expected = (1.0 - (-1.0f64).exp()) * p.r_m * p.current;
        assert!((rise - expected).abs() < 0.01 * expected);

        let idle = lif_simulate(LifParams { current: 0.0, ..p }, 0.1, 50.0).unwrap();
        assert!(idle.component(0).iter().all(|&v| v == -65.0));
        assert!(lif_simulate(LifParams { tau_m: 0.0, ..p }, 0.1, 1.0).is_err());
    }

    #[test]
    fn lti_examples() {
        let (k, tau) = (2.0, 0.5);
        let tr = lti_step_response(k, tau, 0.01, 5.0 * tau).unwrap();
        assert!((tr.final_state()[0] - k).abs() < 0.01 * k);
        let i = tr.ts.iter().position(|&t| (t - tau).abs() < 1e-9).unwrap();
        assert!((tr.ys[(i, 0)] - k * (1.0 - (-1.0f64).exp())).abs() < 1e-3);
        let zero = lti_step_response(0.0, tau, 0.01, 1.0).unwrap();
        assert!(zero.component(0).iter().all(|&v| v == 0.0));
        assert!(lti_step_response(1.0, 0.0, 0.01, 1.0).is_err());
    }

    fn reference_heat() -> HeatProblem<impl Fn(f64) -> f64> {
        HeatProblem::new(0.01, 10.0, 100, 500, 1.0, |x: f64| (PI * x / 10.0).sin()).unwrap()
    }

    #[test]
    fn heat_matches_separated_solution() {
        let p = reference_heat();
        let sol = heat1d_explicit(&p, None).unwrap();
        let k = PI / 10.0;
        let worst = sol
            .xs
            .iter()
            .zip(&sol.u)
            .map(|(&x, &u)| (u - (k * x).sin() * (-0.01 * k * k * 1.0).exp()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-2, "{worst}");
        assert_eq!(sol.u.len(), 100);
        assert!(sol.snapshots.is_empty());
    }

    #[test]
    fn heat_boundaries_and_max_principle() {
        let p = HeatProblem::new(1.0, 1.0, 21, 400, 0.5, |x: f64| (PI * x).sin() + 0.5 * x).unwrap();
        let sol = heat1d_explicit(&p, Some(10)).unwrap();
        assert_eq!(sol.snapshots.len(), 41);
        let u0 = &sol.snapshots[0].1;
        for (_, u) in &sol.snapshots {
            assert_eq!(u[0], u0[0]);
            assert_eq!(u[20], u0[20]);
        }

        let p = HeatProblem::new(1.0, 1.0, 21, 400, 0.5, |x: f64| (PI * x).sin()).unwrap();
        let sol = heat1d_explicit(&p, Some(1)).unwrap();
        let peaks: Vec<f64> = sol.snapshots.iter().map(|(_, u)| u.iter().fold(0.0f64, |m, v| m.max(v.abs()))).collect();
        assert!(peaks.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn heat_trivial_and_unstable() {
        let p = HeatProblem::new(0.01, 10.0, 100, 500, 1.0, |_x: f64| 0.0).unwrap();
        assert!(heat1d_explicit(&p, None).unwrap().u.iter().all(|&v| v == 0.0));

        // dx = 0.1, dt = 0.06, alpha = 0.1 → factor 0.6
        let err = HeatProblem::new(0.1, 1.0, 11, 10, 0.6, |_x: f64| 0.0).err().unwrap();
        match err {
            NumError::Unstable(r) => assert!((r - 0.6).abs() < 1e-12),
            e => panic!("{e}"),
        }
        assert!(err.to_string().contains("unstable"));
        assert!(matches!(HeatProblem::new(0.2, 1.0, 100, 10, 1.0, |_x: f64| 0.0), Err(NumError::Unstable(_))));
    }

    proptest! {
        #[test]
        fn lif_shifts_with_rest_potential(c in -50.0..50.0f64, current in -5.0..5.0f64) {
            let p = LifParams { current, ..LifParams::default() };
            let a = lif_simulate(p, 0.5, 30.0).unwrap();
            let b = lif_simulate(LifParams { v_rest: p.v_rest + c, ..p }, 0.5, 30.0).unwrap();
            for (va, vb) in a.component(0).iter().zip(b.component(0)) {
                prop_assert!((vb - va - c).abs() < 1e-9);
            }
        }

        #[test]
        fn rk4_error_beats_euler(lambda in 0.5..3.0f64, h in 0.01..0.1f64) {
            let f = move |_t: f64, y: &[f64]| vec![-lambda * y[0]];
            let p = IvpProblem::new(f, 0.0, &[1.0], h, 1.0).unwrap();
            let exact = (-lambda).exp();
            let e = (euler_solve(&p).unwrap().final_state()[0] - exact).abs();
            let r = (rk4_solve(&p).unwrap().final_state()[0] - exact).abs();
            prop_assert!(r < e);
        }
    }
}
