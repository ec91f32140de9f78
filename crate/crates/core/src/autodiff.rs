//! Reverse-mode automatic differentiation over scalar expression graphs.
//!
//! An expression is built inside [`record`] from [`Var`] handles handed out
//! by a [`Recorder`]. Every elementary operation appends a node holding its
//! value, its parents and the local partial derivatives with respect to
//! those parents. The finished, immutable [`Tape`] is then swept backwards
//! once to obtain the gradient of the output with respect to every input.
//!
//! ```
//! use desk_numerics::autodiff::{gradient, record};
//!
//! let tape = record(&[2.0], |_, x| x[0] * x[0] + 3.0 * x[0] + 5.0).unwrap();
//! assert_eq!(tape.value(), 15.0);
//! assert_eq!(gradient(&tape).partials, vec![7.0]);
//! ```
//!
//! Domain violations (log of a nonpositive number, division by zero) cannot
//! be reported from inside an operator overload, so the recorder remembers
//! the first one and [`record`] returns it as an error.

use std::cell::RefCell;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{NumError, Result};
use crate::ndcore::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Input,
    Const,
    Add,
    Sub,
    Mul,
    Div,
    PowConst,
    Exp,
    Log,
    Sin,
    Cos,
    Tanh,
    Sigmoid,
    Neg,
}

/// One recorded elementary operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub op: OpKind,
    pub value: f64,
    /// Parent indices; only the first `arity` entries are meaningful.
    pub parents: [usize; 2],
    /// Local partials `∂node/∂parent`, aligned with `parents`.
    pub partials: [f64; 2],
    pub arity: u8,
}

/// Finished recording in topological order.
#[derive(Debug, Clone)]
pub struct Tape {
    nodes: Vec<Node>,
    inputs: Vec<usize>,
    output: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grad {
    /// `∂output/∂input_i`, aligned with the recorded inputs.
    pub partials: Vec<f64>,
}

impl Tape {
    pub fn value(&self) -> f64 {
        self.nodes[self.output].value
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn input_indices(&self) -> &[usize] {
        &self.inputs
    }

    pub fn output_index(&self) -> usize {
        self.output
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Builder handed to expression closures.
#[derive(Debug, Default)]
pub struct Recorder {
    nodes: RefCell<Vec<Node>>,
    error: RefCell<Option<NumError>>,
}

/// Handle to a recorded node.
#[derive(Clone, Copy)]
pub struct Var<'t> {
    rec: &'t Recorder,
    idx: usize,
    value: f64,
}

impl std::fmt::Debug for Var<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Var(#{} = {})", self.idx, self.value)
    }
}

impl Recorder {
    fn push(&self, op: OpKind, value: f64, parents: &[(usize, f64)]) -> usize {
        let mut nodes = self.nodes.borrow_mut();
        let mut node = Node { op, value, parents: [0; 2], partials: [0.0; 2], arity: parents.len() as u8 };
        for (k, &(p, d)) in parents.iter().enumerate() {
            node.parents[k] = p;
            node.partials[k] = d;
        }
        if !value.is_finite() {
            self.fail(NumError::NonFinite);
        }
        nodes.push(node);
        nodes.len() - 1
    }

    fn fail(&self, e: NumError) {
        let mut slot = self.error.borrow_mut();
        if slot.is_none() {
            *slot = Some(e);
        }
    }

    fn var(&self, op: OpKind, value: f64, parents: &[(usize, f64)]) -> Var<'_> {
        let idx = self.push(op, value, parents);
        Var { rec: self, idx, value }
    }

    /// Records a constant (a leaf that is not an input).
    pub fn constant(&self, value: f64) -> Var<'_> {
        self.var(OpKind::Const, value, &[])
    }

    fn input(&self, value: f64) -> Var<'_> {
        self.var(OpKind::Input, value, &[])
    }
}

impl<'t> Var<'t> {
    pub fn value(&self) -> f64 {
        self.value
    }

    fn unary(self, op: OpKind, value: f64, d: f64) -> Var<'t> {
        self.rec.var(op, value, &[(self.idx, d)])
    }

    fn binary(self, other: Var<'t>, op: OpKind, value: f64, da: f64, db: f64) -> Var<'t> {
        debug_assert!(std::ptr::eq(self.rec, other.rec), "vars from different tapes");
        self.rec.var(op, value, &[(self.idx, da), (other.idx, db)])
    }

    fn lift(self, c: f64) -> Var<'t> {
        self.rec.constant(c)
    }

    pub fn exp(self) -> Var<'t> {
        let e = self.value.exp();
        self.unary(OpKind::Exp, e, e)
    }

    pub fn ln(self) -> Var<'t> {
        if self.value <= 0.0 {
            self.rec.fail(NumError::DomainError("log of a nonpositive value"));
        }
        self.unary(OpKind::Log, self.value.ln(), 1.0 / self.value)
    }

    pub fn sin(self) -> Var<'t> {
        self.unary(OpKind::Sin, self.value.sin(), self.value.cos())
    }

    pub fn cos(self) -> Var<'t> {
        self.unary(OpKind::Cos, self.value.cos(), -self.value.sin())
    }

    pub fn tanh(self) -> Var<'t> {
        let t = self.value.tanh();
        self.unary(OpKind::Tanh, t, 1.0 - t * t)
    }

    pub fn sigmoid(self) -> Var<'t> {
        let s = sigmoid(self.value);
        self.unary(OpKind::Sigmoid, s, s * (1.0 - s))
    }

    /// `self^p` for a constant exponent.
    pub fn powf(self, p: f64) -> Var<'t> {
        let x = self.value;
        let d = if p == 0.0 { 0.0 } else { p * x.powf(p - 1.0) };
        self.unary(OpKind::PowConst, x.powf(p), d)
    }

    pub fn powi(self, p: i32) -> Var<'t> {
        let x = self.value;
        let d = if p == 0 { 0.0 } else { p as f64 * x.powi(p - 1) };
        self.unary(OpKind::PowConst, x.powi(p), d)
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl<'t> Add for Var<'t> {
    type Output = Var<'t>;
    fn add(self, rhs: Var<'t>) -> Var<'t> {
        self.binary(rhs, OpKind::Add, self.value + rhs.value, 1.0, 1.0)
    }
}

impl<'t> Sub for Var<'t> {
    type Output = Var<'t>;
    fn sub(self, rhs: Var<'t>) -> Var<'t> {
        self.binary(rhs, OpKind::Sub, self.value - rhs.value, 1.0, -1.0)
    }
}

impl<'t> Mul for Var<'t> {
    type Output = Var<'t>;
    fn mul(self, rhs: Var<'t>) -> Var<'t> {
        self.binary(rhs, OpKind::Mul, self.value * rhs.value, rhs.value, self.value)
    }
}

impl<'t> Div for Var<'t> {
    type Output = Var<'t>;
    fn div(self, rhs: Var<'t>) -> Var<'t> {
        if rhs.value == 0.0 {
            self.rec.fail(NumError::DomainError("division by zero"));
        }
        let q = self.value / rhs.value;
        self.binary(rhs, OpKind::Div, q, 1.0 / rhs.value, -q / rhs.value)
    }
}

impl<'t> Neg for Var<'t> {
    type Output = Var<'t>;
    fn neg(self) -> Var<'t> {
        self.unary(OpKind::Neg, -self.value, -1.0)
    }
}

macro_rules! scalar_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl<'t> $trait<f64> for Var<'t> {
            type Output = Var<'t>;
            fn $method(self, rhs: f64) -> Var<'t> {
                let c = self.lift(rhs);
                $trait::$method(self, c)
            }
        }
        impl<'t> $trait<Var<'t>> for f64 {
            type Output = Var<'t>;
            fn $method(self, rhs: Var<'t>) -> Var<'t> {
                let c = rhs.lift(self);
                $trait::$method(c, rhs)
            }
        }
    )*};
}

scalar_ops!(Add add, Sub sub, Mul mul, Div div);

fn finish(rec: Recorder, inputs: Vec<usize>, output: usize) -> Result<Tape> {
    if let Some(e) = rec.error.into_inner() {
        return Err(e);
    }
    Ok(Tape { nodes: rec.nodes.into_inner(), inputs, output })
}

fn start(inputs: &[f64]) -> Result<Recorder> {
    if inputs.iter().any(|v| !v.is_finite()) {
        return Err(NumError::NonFinite);
    }
    Ok(Recorder::default())
}

/// Records `f` evaluated at `inputs`.
pub fn record<F>(inputs: &[f64], f: F) -> Result<Tape>
where
    F: for<'t> Fn(&'t Recorder, &[Var<'t>]) -> Var<'t>,
{
    let rec = start(inputs)?;
    let (idx, out) = {
        let vars: Vec<Var<'_>> = inputs.iter().map(|&v| rec.input(v)).collect();
        let out = f(&rec, &vars);
        (vars.iter().map(|v| v.idx).collect::<Vec<_>>(), out.idx)
    };
    finish(rec, idx, out)
}

/// Single backward sweep from `output`, returning the adjoint of every node.
fn sweep(nodes: &[Node], output: usize) -> Vec<f64> {
    let mut adj = vec![0.0; nodes.len()];
    adj[output] = 1.0;
    for i in (0..=output).rev() {
        let a = adj[i];
        if a == 0.0 {
            continue;
        }
        let node = &nodes[i];
        for k in 0..node.arity as usize {
            adj[node.parents[k]] += a * node.partials[k];
        }
    }
    adj
}

pub fn gradient(tape: &Tape) -> Grad {
    let adj = sweep(&tape.nodes, tape.output);
    Grad { partials: tape.inputs.iter().map(|&i| adj[i]).collect() }
}

/// Value and gradient of `f` at `x` in one call.
pub fn value_and_grad<F>(x: &[f64], f: F) -> Result<(f64, Vec<f64>)>
where
    F: for<'t> Fn(&'t Recorder, &[Var<'t>]) -> Var<'t>,
{
    let tape = record(x, f)?;
    Ok((tape.value(), gradient(&tape).partials))
}

/// Jacobian of a vector-valued `f` at `x`: one recording, one reverse sweep
/// per output.
pub fn jacobian<F>(x: &[f64], f: F) -> Result<Matrix>
where
    F: for<'t> Fn(&'t Recorder, &[Var<'t>]) -> Vec<Var<'t>>,
{
    let rec = start(x)?;
    let (inputs, outputs) = {
        let vars: Vec<Var<'_>> = x.iter().map(|&v| rec.input(v)).collect();
        let outs = f(&rec, &vars);
        (vars.iter().map(|v| v.idx).collect::<Vec<_>>(), outs.iter().map(|v| v.idx).collect::<Vec<_>>())
    };
    if outputs.is_empty() {
        return Err(NumError::EmptyInput);
    }
    let tape = finish(rec, inputs, 0)?;
    let mut jac = Matrix::zeros(outputs.len(), x.len().max(1));
    for (i, &out) in outputs.iter().enumerate() {
        let adj = sweep(&tape.nodes, out);
        for (j, &inp) in tape.inputs.iter().enumerate() {
            jac[(i, j)] = adj[inp];
        }
    }
    Ok(jac)
}

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Hessian by central differences of the reverse-mode gradient, symmetrized.
pub fn hessian_fd<F>(x: &[f64], h: f64, f: F) -> Result<Matrix>
where
    F: for<'t> Fn(&'t Recorder, &[Var<'t>]) -> Var<'t>,
{
    if !(h > 0.0) {
        return Err(NumError::InvalidParameter("finite-difference step must be positive"));
    }
    let n = x.len();
    if n == 0 {
        return Err(NumError::EmptyInput);
    }
    let mut raw = Matrix::zeros(n, n);
    let mut probe = x.to_vec();
    for j in 0..n {
        probe[j] = x[j] + h;
        let gp = value_and_grad(&probe, &f)?.1;
        probe[j] = x[j] - h;
        let gm = value_and_grad(&probe, &f)?.1;
        probe[j] = x[j];
        for i in 0..n {
            raw[(i, j)] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    Ok(Matrix::from_fn(n, n, |i, j| 0.5 * (raw[(i, j)] + raw[(j, i)])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Central finite difference of a plain closure, used as the oracle.
    fn fd_grad(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
        let mut p = x.to_vec();
        (0..x.len())
            .map(|i| {
                p[i] = x[i] + h;
                let up = f(&p);
                p[i] = x[i] - h;
                let dn = f(&p);
                p[i] = x[i];
                (up - dn) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn quadratic_value_and_derivative() {
        let tape = record(&[2.0], |_, x| x[0].powi(2) + 3.0 * x[0] + 5.0).unwrap();
        assert_eq!(tape.value(), 15.0);
        assert_eq!(gradient(&tape).partials, vec![7.0]);
    }

    #[test]
    fn two_variable_gradient() {
        let (v, g) = value_and_grad(&[1.0, 2.0], |_, x| 3.0 * x[0] * x[0] + 4.0 * x[1] * x[1] * x[1]).unwrap();
        assert_eq!(v, 35.0);
        assert_eq!(g, vec![6.0, 48.0]);
    }

    #[test]
    fn trivial_records() {
        let t = record(&[7.0], |_, x| x[0]).unwrap();
        assert_eq!(t.value(), 7.0);
        assert_eq!(gradient(&t).partials, vec![1.0]);
        let t = record(&[0.0], |_, x| x[0].exp()).unwrap();
        assert_eq!(t.value(), 1.0);
    }

    #[test]
    fn tape_is_topological() {
        let t = record(&[0.3, -1.2], |_, x| (x[0] * x[1]).sin() / (x[1].exp() + 1.0)).unwrap();
        for (i, n) in t.nodes().iter().enumerate() {
            for k in 0..n.arity as usize {
                assert!(n.parents[k] < i);
            }
            assert!(n.value.is_finite());
        }
        assert_eq!(t.input_indices(), &[0, 1]);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(record(&[-1.0], |_, x| x[0].ln()), Err(NumError::DomainError(_))));
        assert!(matches!(record(&[0.0], |_, x| 1.0 / x[0]), Err(NumError::DomainError(_))));
        assert_eq!(record(&[1000.0], |_, x| x[0].exp()).unwrap_err(), NumError::NonFinite);
        assert_eq!(record(&[f64::NAN], |_, x| x[0]).unwrap_err(), NumError::NonFinite);
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian(&[1.0, 2.0], |_, x| vec![x[0] * x[0], x[1].powi(3)]).unwrap();
        assert_eq!(j.to_rows(), vec![vec![2.0, 0.0], vec![0.0, 12.0]]);
        // Cross-check against central differences.
        let fd0 = fd_grad(|v| v[0] * v[0], &[1.0, 2.0], 1e-6);
        let fd1 = fd_grad(|v| v[1].powi(3), &[1.0, 2.0], 1e-6);
        for (row, fd) in [fd0, fd1].iter().enumerate() {
            for c in 0..2 {
                assert!((j[(row, c)] - fd[c]).abs() < 1e-6);
            }
        }

        let id = jacobian(&[0.5, -3.0, 2.0], |_, x| x.to_vec()).unwrap();
        assert_eq!(id, Matrix::identity(3));
        let zero = jacobian(&[0.5, -3.0], |r, _| vec![r.constant(4.0), r.constant(1.0)]).unwrap();
        assert_eq!(zero, Matrix::zeros(2, 2));
    }

    #[test]
    fn hessian_examples() {
        let h = hessian_fd(&[1.0], DEFAULT_FD_STEP, |_, x| x[0].powi(4)).unwrap();
        assert!((h[(0, 0)] - 12.0).abs() < 1e-4);
        for x in [-3.0, 0.0, 2.5] {
            let h = hessian_fd(&[x], DEFAULT_FD_STEP, |_, v| v[0] * v[0] + 4.0 * v[0] + 4.0).unwrap();
            assert!((h[(0, 0)] - 2.0).abs() < 1e-6);
        }
        let h = hessian_fd(&[1.0, 2.0], DEFAULT_FD_STEP, |_, v| 3.0 * v[0] - 2.0 * v[1]).unwrap();
        assert!(h.data().iter().all(|v| v.abs() < 1e-6));
    }

    #[test]
    fn hessian_of_quadratic_form() {
        let q = [[2.0, 0.5, -1.0], [0.5, 1.0, 0.3], [-1.0, 0.3, 4.0]];
        let h = hessian_fd(&[0.2, -0.7, 1.1], DEFAULT_FD_STEP, |_, x| {
            let mut acc = x[0] * 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    acc = acc + q[i][j] * x[i] * x[j];
                }
            }
            acc
        })
        .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((h[(i, j)] - 2.0 * q[i][j]).abs() < 1e-4);
                assert_eq!(h[(i, j)], h[(j, i)]);
            }
        }
    }

    #[test]
    fn sigmoid_local_partial() {
        for &x in &[-8.0, -1.5, 0.0, 0.3, 4.0] {
            let t = record(&[x], |_, v| v[0].sigmoid()).unwrap();
            let n = t.nodes()[t.output_index()];
            assert!((n.partials[0] - n.value * (1.0 - n.value)).abs() < 1e-12);
        }
    }

    // Random expression trees over the supported operations, evaluated both
    // through the tape and as plain closures for the finite-difference oracle.
    #[derive(Debug, Clone)]
    enum Expr {
        X(usize),
        C(f64),
        Add(Box<Expr>, Box<Expr>),
        Sub(Box<Expr>, Box<Expr>),
        Mul(Box<Expr>, Box<Expr>),
        Div(Box<Expr>, Box<Expr>),
        Exp(Box<Expr>),
        LogSq(Box<Expr>),
        Sin(Box<Expr>),
        Cos(Box<Expr>),
        Tanh(Box<Expr>),
        Sigmoid(Box<Expr>),
    }

    fn expr_strategy(n: usize) -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![(0..n).prop_map(Expr::X), (-2.0..2.0f64).prop_map(Expr::C),];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(a.into(), b.into())),
                inner.clone().prop_map(|a| Expr::Exp(a.into())),
                inner.clone().prop_map(|a| Expr::LogSq(a.into())),
                inner.clone().prop_map(|a| Expr::Sin(a.into())),
                inner.clone().prop_map(|a| Expr::Cos(a.into())),
                inner.clone().prop_map(|a| Expr::Tanh(a.into())),
                inner.prop_map(|a| Expr::Sigmoid(a.into())),
            ]
        })
    }

    // Division and log are kept in safe domains: divide by (1 + b²), take
    // log of (1 + a²), and squash exp arguments through tanh.
    fn eval(e: &Expr, x: &[f64]) -> f64 {
        match e {
            Expr::X(i) => x[*i],
            Expr::C(c) => *c,
            Expr::Add(a, b) => eval(a, x) + eval(b, x),
            Expr::Sub(a, b) => eval(a, x) - eval(b, x),
            Expr::Mul(a, b) => eval(a, x) * eval(b, x),
            Expr::Div(a, b) => {
                let d = eval(b, x);
                eval(a, x) / (1.0 + d * d)
            }
            Expr::Exp(a) => eval(a, x).tanh().exp(),
            Expr::LogSq(a) => {
                let v = eval(a, x);
                (1.0 + v * v).ln()
            }
            Expr::Sin(a) => eval(a, x).sin(),
            Expr::Cos(a) => eval(a, x).cos(),
            Expr::Tanh(a) => eval(a, x).tanh(),
            Expr::Sigmoid(a) => sigmoid(eval(a, x)),
        }
    }

    fn build<'t>(e: &Expr, r: &'t Recorder, x: &[Var<'t>]) -> Var<'t> {
        match e {
            Expr::X(i) => x[*i],
            Expr::C(c) => r.constant(*c),
            Expr::Add(a, b) => build(a, r, x) + build(b, r, x),
            Expr::Sub(a, b) => build(a, r, x) - build(b, r, x),
            Expr::Mul(a, b) => build(a, r, x) * build(b, r, x),
            Expr::Div(a, b) => {
                let d = build(b, r, x);
                build(a, r, x) / (1.0 + d * d)
            }
            Expr::Exp(a) => build(a, r, x).tanh().exp(),
            Expr::LogSq(a) => {
                let v = build(a, r, x);
                (1.0 + v * v).ln()
            }
            Expr::Sin(a) => build(a, r, x).sin(),
            Expr::Cos(a) => build(a, r, x).cos(),
            Expr::Tanh(a) => build(a, r, x).tanh(),
            Expr::Sigmoid(a) => build(a, r, x).sigmoid(),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn gradient_matches_central_differences(
            e in expr_strategy(3),
            x in prop::collection::vec(-1.5..1.5f64, 3),
        ) {
            let (v, g) = value_and_grad(&x, |r, xs| build(&e, r, xs)).unwrap();
            prop_assert!((v - eval(&e, &x)).abs() <= 1e-12 * (1.0 + v.abs()));
            let fd = fd_grad(|p| eval(&e, p), &x, 1e-6);
            for (a, b) in g.iter().zip(&fd) {
                prop_assert!((a - b).abs() <= f64::max(1e-5, 1e-4 * a.abs()), "{a} vs {b}");
            }
        }

        #[test]
        fn gradient_is_linear(
            e1 in expr_strategy(2),
            e2 in expr_strategy(2),
            a in -3.0..3.0f64,
            b in -3.0..3.0f64,
            x in prop::collection::vec(-1.0..1.0f64, 2),
        ) {
            let (_, g1) = value_and_grad(&x, |r, xs| build(&e1, r, xs)).unwrap();
            let (_, g2) = value_and_grad(&x, |r, xs| build(&e2, r, xs)).unwrap();
            let (_, g) = value_and_grad(&x, |r, xs| a * build(&e1, r, xs) + b * build(&e2, r, xs)).unwrap();
            for i in 0..2 {
                prop_assert!((g[i] - (a * g1[i] + b * g2[i])).abs() <= 1e-10 * (1.0 + g[i].abs()));
            }
        }
    }
}
