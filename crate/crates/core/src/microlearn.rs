//! Tiny learning demos: a sigmoid MLP trained by full-batch gradient descent,
//! the batch-normalization forward pass and tabular Q-learning.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::autodiff::sigmoid;
use crate::error::{NumError, Result};
use crate::ndcore::Matrix;

pub const DEFAULT_BN_EPS: f64 = 1e-5;

/// Fully connected network. `weights[l]` is `sizes[l] × sizes[l+1]`, inputs
/// are rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    pub sizes: Vec<usize>,
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
}

impl MlpParams {
    pub fn layers(&self) -> usize {
        self.weights.len()
    }

    fn check(&self) -> Result<()> {
        if self.sizes.len() < 2 || self.sizes.contains(&0) {
            return Err(NumError::BadArchitecture("need at least two nonempty layers"));
        }
        let chained = self.weights.len() == self.sizes.len() - 1
            && self.biases.len() == self.weights.len()
            && self.weights.iter().enumerate().all(|(l, w)| w.shape() == (self.sizes[l], self.sizes[l + 1]))
            && self.biases.iter().enumerate().all(|(l, b)| b.len() == self.sizes[l + 1]);
        if chained {
            Ok(())
        } else {
            Err(NumError::BadArchitecture("weights and biases do not match sizes"))
        }
    }
}

/// Standard normal weights, zero biases.
pub fn mlp_init(sizes: &[usize], seed: u64) -> Result<MlpParams> {
    if sizes.len() < 2 || sizes.contains(&0) {
        return Err(NumError::BadArchitecture("need at least two nonempty layers"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = sizes.windows(2).map(|w| Matrix::from_fn(w[0], w[1], |_, _| rng.sample(StandardNormal))).collect();
    let biases = sizes[1..].iter().map(|&n| vec![0.0; n]).collect();
    Ok(MlpParams { sizes: sizes.to_vec(), weights, biases })
}

/// `x·W + b` with `b` added to every row.
pub fn dense_affine(x: &Matrix, w: &Matrix, b: &[f64]) -> Result<Matrix> {
    if b.len() != w.cols() {
        return Err(NumError::shape(format!("bias of {} for {} outputs", b.len(), w.cols())));
    }
    let mut z = x.matmul(w)?;
    for i in 0..z.rows() {
        for (j, bj) in b.iter().enumerate() {
            z[(i, j)] += bj;
        }
    }
    Ok(z)
}

fn map(m: &Matrix, f: impl Fn(f64) -> f64) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| f(m[(i, j)]))
}

/// Post-activation outputs of every layer; the last one is the network output.
#[derive(Debug, Clone, PartialEq)]
pub struct Forward {
    pub activations: Vec<Matrix>,
}

impl Forward {
    pub fn output(&self) -> &Matrix {
        self.activations.last().expect("at least one layer")
    }
}

pub fn mlp_forward(p: &MlpParams, x: &Matrix) -> Result<Forward> {
    p.check()?;
    if x.cols() != p.sizes[0] {
        return Err(NumError::shape(format!("input has {} columns, network expects {}", x.cols(), p.sizes[0])));
    }
    let mut activations: Vec<Matrix> = Vec::with_capacity(p.layers());
    for (w, b) in p.weights.iter().zip(&p.biases) {
        let input = activations.last().unwrap_or(x);
        let z = dense_affine(input, w, b)?;
        activations.push(map(&z, sigmoid));
    }
    Ok(Forward { activations })
}

/// Mean of squared differences over every entry.
pub fn mse(out: &Matrix, y: &Matrix) -> Result<f64> {
    if out.shape() != y.shape() {
        return Err(NumError::shape(format!("output {:?} vs target {:?}", out.shape(), y.shape())));
    }
    let n = out.data().len() as f64;
    Ok(out.data().iter().zip(y.data()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / n)
}

/// Gradients of [`mse`] with respect to every weight and bias.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
    pub loss: f64,
}

/// Backpropagation through the sigmoid layers.
pub fn mlp_gradients(p: &MlpParams, x: &Matrix, y: &Matrix) -> Result<Gradients> {
    let fwd = mlp_forward(p, x)?;
    let out = fwd.output();
    let loss = mse(out, y)?;
    let scale = 2.0 / out.data().len() as f64;
    let layers = p.layers();
    let mut delta = Matrix::from_fn(out.rows(), out.cols(), |i, j| {
        let a = out[(i, j)];
        scale * (a - y[(i, j)]) * a * (1.0 - a)
    });
    let mut weights = Vec::with_capacity(layers);
    let mut biases = Vec::with_capacity(layers);
    for l in (0..layers).rev() {
        let input = if l == 0 { x } else { &fwd.activations[l - 1] };
        weights.push(input.transpose().matmul(&delta)?);
        biases.push((0..delta.cols()).map(|j| delta.col(j).iter().sum()).collect());
        if l > 0 {
            let back = delta.matmul(&p.weights[l].transpose())?;
            delta = Matrix::from_fn(back.rows(), back.cols(), |i, j| {
                let a = input[(i, j)];
                back[(i, j)] * a * (1.0 - a)
            });
        }
    }
    weights.reverse();
    biases.reverse();
    Ok(Gradients { weights, biases, loss })
}

/// Full-batch gradient descent on the MSE loss. The history holds the loss
/// seen at the start of each epoch.
pub fn mlp_train(p: &MlpParams, x: &Matrix, y: &Matrix, eta: f64, epochs: usize) -> Result<(MlpParams, Vec<f64>)> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(NumError::InvalidParameter("learning rate must be positive"));
    }
    p.check()?;
    if x.rows() != y.rows() || y.cols() != p.sizes[p.sizes.len() - 1] {
        return Err(NumError::shape("targets do not match inputs or output layer"));
    }
    let mut p = p.clone();
    let mut history = Vec::with_capacity(epochs);
    for _ in 0..epochs {
        let g = mlp_gradients(&p, x, y)?;
        if !g.loss.is_finite() {
            return Err(NumError::NonFinite);
        }
        history.push(g.loss);
        for (w, gw) in p.weights.iter_mut().zip(&g.weights) {
            *w = w.sub(&gw.scale(eta))?;
        }
        for (b, gb) in p.biases.iter_mut().zip(&g.biases) {
            b.iter_mut().zip(gb).for_each(|(bi, gi)| *bi -= eta * gi);
        }
    }
    Ok((p, history))
}

/// The XOR task with a constant bias column.
pub fn xor_dataset() -> (Matrix, Matrix) {
    let x = Matrix::from_rows(&[[0.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 1.0]]).expect("static");
    let y = Matrix::column(&[0.0, 1.0, 1.0, 0.0]).expect("static");
    (x, y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchNormParams {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub eps: f64,
}

impl BatchNormParams {
    /// `γ = 1`, `β = 0`.
    pub fn identity(features: usize) -> Self {
        BatchNormParams { gamma: vec![1.0; features], beta: vec![0.0; features], eps: DEFAULT_BN_EPS }
    }
}

/// Normalizes each column with the batch mean and biased variance, then
/// scales by `γ` and shifts by `β`.
pub fn batchnorm_forward(x: &Matrix, p: &BatchNormParams) -> Result<Matrix> {
    if x.rows() < 2 {
        return Err(NumError::TooSmallBatch);
    }
    if p.gamma.len() != x.cols() || p.beta.len() != x.cols() {
        return Err(NumError::shape("gamma and beta must have one entry per feature"));
    }
    if !(p.eps > 0.0) {
        return Err(NumError::InvalidParameter("eps must be positive"));
    }
    let n = x.rows() as f64;
    let mut out = Matrix::zeros(x.rows(), x.cols());
    for j in 0..x.cols() {
        let col = x.col(j);
        let mu = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n;
        let denom = (var + p.eps).sqrt();
        for (i, v) in col.iter().enumerate() {
            out[(i, j)] = p.gamma[j] * (v - mu) / denom + p.beta[j];
        }
    }
    Ok(out)
}

/// Ring of states where either action moves to the next state; an episode
/// ends on reaching `goal`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEnv {
    /// states × actions
    pub rewards: Matrix,
    pub goal: usize,
}

impl Default for GridEnv {
    fn default() -> Self {
        let rewards =
            Matrix::from_rows(&[[-1.0, 0.0], [0.0, 1.0], [0.0, -1.0], [-1.0, 1.0], [10.0, -10.0]]).expect("static");
        GridEnv { rewards, goal: 4 }
    }
}

impl GridEnv {
    pub fn states(&self) -> usize {
        self.rewards.rows()
    }

    pub fn actions(&self) -> usize {
        self.rewards.cols()
    }

    pub fn next_state(&self, s: usize, _action: usize) -> usize {
        (s + 1) % self.states()
    }
}

/// Index of the largest entry, lowest index on ties.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// ε-greedy tabular Q-learning. Each episode starts in a uniformly random state.
pub fn q_learn(env: &GridEnv, alpha: f64, gamma: f64, epsilon: f64, episodes: usize, seed: u64) -> Result<Matrix> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(NumError::InvalidParameter("alpha must lie in (0, 1]"));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(NumError::InvalidParameter("gamma must lie in [0, 1)"));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(NumError::InvalidParameter("epsilon must lie in [0, 1]"));
    }
    if env.goal >= env.states() || env.actions() == 0 {
        return Err(NumError::InvalidParameter("goal must be a valid state"));
    }
    let (ns, na) = (env.states(), env.actions());
    let mut q = Matrix::zeros(ns, na);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..episodes {
        let mut s = rng.random_range(0..ns);
        while s != env.goal {
            let a = if rng.random::<f64>() < epsilon { rng.random_range(0..na) } else { argmax(q.row(s)) };
            let r = env.rewards[(s, a)];
            let next = env.next_state(s, a);
            let best_next = q.row(next).iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            q[(s, a)] += alpha * (r + gamma * best_next - q[(s, a)]);
            s = next;
        }
    }
    Ok(q)
}

/// States visited by acting greedily from `start` until the goal or `max_steps`.
pub fn greedy_rollout(env: &GridEnv, q: &Matrix, start: usize, max_steps: usize) -> Vec<usize> {
    let mut path = vec![start];
    let mut s = start;
    for _ in 0..max_steps {
        if s == env.goal {
            break;
        }
        s = env.next_state(s, argmax(q.row(s)));
        path.push(s);
    }
    path
}
