use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use desk_numerics::dynamics::{
    backward_euler_solve, euler_solve, heat1d_explicit, lif_simulate, lti_step_response, rk4_solve, HeatProblem,
    IvpProblem, LifParams, Trajectory,
};
use desk_numerics::interp::{lagrange_eval, linear_interp, CubicSpline, DividedDiffPoly};
use desk_numerics::lindecomp::{
    det, eig, inv, pca, solve_direct, solve_iterative, svd, DirectMethod, IterConfig, IterMethod,
};
use desk_numerics::microlearn::{mlp_init, mlp_train, q_learn, xor_dataset, GridEnv};
use desk_numerics::ndcore::MatMulAlgo;
use desk_numerics::optimize::{
    bfgs_minimize, lbfgs_minimize, nelder_mead, newton_minimize, optimizer_step, OptConfig, OptState, Optimizer,
    Schedule, DEFAULT_LBFGS_MEMORY,
};
use desk_numerics::quadrature::{gauss_legendre, simpson, trapezoid_fn};
use desk_numerics::roots::{self, RootReport};
use desk_numerics::spectral::{fft2, spectral_pool2d, spectrum};
use desk_numerics::{Matrix, NumError};

use crate::csv_io::{read_csv, Table};
use crate::error::{CliError, CliResult};
use crate::pgm::{read_pgm, to_grey};
use crate::registry::{circle_parabola, circle_parabola_jacobian, Objective, ScalarFn};

#[derive(Debug, Parser)]
#[command(name = "numcli", version, about = "Deterministic numerical demos writing CSV and PGM")]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Matrix products, inverse, determinant, transpose.
    Linalg(LinalgArgs),
    /// Solve A x = b.
    Solve(SolveArgs),
    /// Eigenvalues, singular values or a PCA projection.
    Eig(EigArgs),
    /// Root finding on a built-in function.
    Roots(RootsArgs),
    /// Sample an interpolant through knots.
    Interp(InterpArgs),
    /// Definite integral of a built-in function.
    Integrate(IntegrateArgs),
    /// Spectrum of a signal.
    Fft(FftArgs),
    /// Spectral low-pass of a greyscale image.
    ImageLowpass(ImageArgs),
    /// Minimize a built-in objective.
    Optimize(OptimizeArgs),
    /// Integrate an initial value problem.
    Ode(OdeArgs),
    /// Explicit 1D heat equation.
    Heat(HeatArgs),
    /// Train the XOR network.
    Xor(XorArgs),
    /// Q-learning on the five-state ring.
    Qlearn(QlearnArgs),
}

/// What a subcommand produced.
pub enum Output {
    Csv(Table),
    /// Written with its shape as the header line.
    Matrix(Matrix),
    /// PGM bytes for `--out`, plus an optional second image and its path.
    Pgm(Vec<u8>, Option<(PathBuf, Vec<u8>)>),
}

fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::usage(format!("{t:?} is not a number"))))
        .collect()
}

/// Rows separated by `;`, entries by `,`.
fn parse_matrix(s: &str) -> CliResult<Matrix> {
    let rows = s.split(';').map(parse_list).collect::<CliResult<Vec<_>>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(CliError::usage("matrix rows differ in length"));
    }
    Ok(Matrix::from_rows(&rows)?)
}

fn column_table(header: &str, values: &[f64]) -> Table {
    let mut t = Table::new(&[header]);
    values.iter().for_each(|&v| t.push(vec![v]));
    t
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LinalgOp {
    Inv,
    Det,
    Matmul,
    Strassen,
    Transpose,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct LinalgArgs {
    #[arg(long, value_enum, default_value = "inv")]
    pub op: LinalgOp,
    #[arg(long, default_value = "1,2;3,4", allow_hyphen_values = true)]
    pub a: String,
    /// Right factor for the products.
    #[arg(long, default_value = "5,6;7,8", allow_hyphen_values = true)]
    pub b: String,
}

fn linalg(args: &LinalgArgs) -> CliResult<Output> {
    let a = parse_matrix(&args.a)?;
    let m = match args.op {
        LinalgOp::Inv => inv(&a)?,
        LinalgOp::Det => return Ok(Output::Csv(column_table("det", &[det(&a)?]))),
        LinalgOp::Matmul => a.matmul_with(&parse_matrix(&args.b)?, MatMulAlgo::Naive)?,
        LinalgOp::Strassen => a.matmul_with(&parse_matrix(&args.b)?, MatMulAlgo::Strassen)?,
        LinalgOp::Transpose => a.transpose(),
    };
    Ok(Output::Matrix(m))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolveMethod {
    Gauss,
    Lu,
    Qr,
    Cholesky,
    Inverse,
    Jacobi,
    GaussSeidel,
    Cg,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value = "lu")]
    pub method: SolveMethod,
    #[arg(long, default_value = "1,2;3,4", allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, default_value = "5,6", allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
}

fn solve(args: &SolveArgs) -> CliResult<Output> {
    let a = parse_matrix(&args.a)?;
    let b = parse_list(&args.b)?;
    let direct = |m| solve_direct(&a, &b, m);
    let iterative = |m| -> CliResult<Vec<f64>> {
        let cfg = IterConfig { tol: args.tol, max_iter: args.max_iter };
        let (x, rep) = solve_iterative(&a, &b, &vec![0.0; b.len()], m, cfg)?;
        if !rep.converged {
            return Err(NumError::NoConvergence(rep.iterations).into());
        }
        Ok(x)
    };
    let x = match args.method {
        SolveMethod::Gauss => direct(DirectMethod::Gauss)?,
        SolveMethod::Lu => direct(DirectMethod::Lu)?,
        SolveMethod::Qr => direct(DirectMethod::Qr)?,
        SolveMethod::Cholesky => direct(DirectMethod::Cholesky)?,
        SolveMethod::Inverse => direct(DirectMethod::Inverse)?,
        SolveMethod::Jacobi => iterative(IterMethod::Jacobi)?,
        SolveMethod::GaussSeidel => iterative(IterMethod::GaussSeidel)?,
        SolveMethod::Cg => iterative(IterMethod::ConjugateGradient)?,
    };
    Ok(Output::Csv(column_table("x", &x)))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EigOp {
    Eig,
    Svd,
    Pca,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EigArgs {
    #[arg(long, value_enum, default_value = "eig")]
    pub op: EigOp,
    #[arg(long, default_value = "1,2;3,4", allow_hyphen_values = true)]
    pub a: String,
    /// Components kept by PCA.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

fn eigen(args: &EigArgs) -> CliResult<Output> {
    let a = parse_matrix(&args.a)?;
    match args.op {
        EigOp::Eig => {
            let r = eig(&a)?;
            let n = r.values.len();
            let mut headers = vec!["value".to_string()];
            headers.extend((0..n).map(|i| format!("v{i}")));
            let mut t = Table::new(&headers);
            for (j, &l) in r.values.iter().enumerate() {
                let mut row = vec![l];
                row.extend(r.vectors.col(j));
                t.push(row);
            }
            Ok(Output::Csv(t))
        }
        EigOp::Svd => Ok(Output::Csv(column_table("sigma", &svd(&a)?.sigma))),
        EigOp::Pca => Ok(Output::Matrix(pca(&a, args.k)?)),
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RootMethod {
    Bisection,
    Newton,
    Secant,
    FixedPoint,
    NewtonSystem,
    Broyden,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RootsArgs {
    #[arg(long, value_enum, default_value = "newton")]
    pub method: RootMethod,
    /// Scalar function; the system methods always use the circle/parabola pair.
    #[arg(long, value_enum, default_value = "x2m4")]
    pub f: ScalarFn,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 3.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,
    #[arg(long, default_value_t = 3.0)]
    pub x1: f64,
    /// Starting point for the system methods.
    #[arg(long, default_value = "0.5,0.5", allow_hyphen_values = true)]
    pub start: String,
    /// Fixed-point map is x − lambda·f(x).
    #[arg(long, default_value_t = 0.25)]
    pub lambda: f64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = roots::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

fn scalar_table(rep: &RootReport<f64>, f: impl Fn(f64) -> f64) -> Table {
    let mut t = Table::new(&["iter", "x", "fx"]);
    for (i, &x) in rep.history.iter().enumerate() {
        t.push(vec![i as f64, x, f(x)]);
    }
    t
}

fn find_roots(args: &RootsArgs) -> CliResult<Output> {
    let f = |x: f64| args.f.eval(x);
    let scalar_tol = args.tol.unwrap_or(roots::DEFAULT_TOL);
    let system_tol = args.tol.unwrap_or(roots::DEFAULT_SYSTEM_TOL);
    let n = args.max_iter;
    let rep = match args.method {
        RootMethod::Bisection => roots::bisection(f, args.a, args.b, scalar_tol, n)?,
        RootMethod::Newton => roots::newton_scalar(f, Some(|x| args.f.derivative(x)), args.x0, scalar_tol, n)?,
        RootMethod::Secant => roots::secant(f, args.x0, args.x1, scalar_tol, n)?,
        RootMethod::FixedPoint => roots::fixed_point(|x| x - args.lambda * f(x), args.x0, scalar_tol, n)?,
        RootMethod::NewtonSystem | RootMethod::Broyden => {
            let x0 = parse_list(&args.start)?;
            if x0.len() != 2 {
                return Err(CliError::usage("--start needs two values"));
            }
            let rep = if let RootMethod::Broyden = args.method {
                roots::broyden(circle_parabola, &x0, None, system_tol, n)?
            } else {
                roots::newton_system(circle_parabola, Some(circle_parabola_jacobian), &x0, system_tol, n)?
            };
            let mut t = Table::new(&["iter", "x0", "x1", "residual"]);
            for (i, x) in rep.history.iter().enumerate() {
                let r = circle_parabola(x).iter().fold(0.0f64, |m, v| m.max(v.abs()));
                t.push(vec![i as f64, x[0], x[1], r]);
            }
            return Ok(Output::Csv(t));
        }
    };
    Ok(Output::Csv(scalar_table(&rep, f)))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InterpMethod {
    Lagrange,
    Newton,
    Spline,
    Linear,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct InterpArgs {
    #[arg(long, value_enum, default_value = "spline")]
    pub method: InterpMethod,
    /// Knot CSV with columns x,y; the built-in knots are used when absent.
    #[arg(long)]
    pub knots: Option<PathBuf>,
    #[arg(long, default_value = "0,1,2", allow_hyphen_values = true)]
    pub xs: String,
    #[arg(long, default_value = "1,3,2", allow_hyphen_values = true)]
    pub ys: String,
    /// Number of evenly spaced sample points between the end knots.
    #[arg(long, default_value_t = 21)]
    pub n: usize,
}

fn interp(args: &InterpArgs) -> CliResult<Output> {
    let (xs, ys) = match &args.knots {
        Some(path) => {
            let t = read_csv(&std::fs::read(path)?)?;
            if t.headers.len() != 2 {
                return Err(CliError::MalformedCsv("knot file needs two columns x,y".into()));
            }
            (t.column(0), t.column(1))
        }
        None => (parse_list(&args.xs)?, parse_list(&args.ys)?),
    };
    if args.n < 2 {
        return Err(CliError::usage("--n must be at least 2"));
    }
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(NumError::EmptyInput.into());
    }
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let grid: Vec<f64> = (0..args.n).map(|i| lo + (hi - lo) * i as f64 / (args.n - 1) as f64).collect();
    let values: Vec<f64> = match args.method {
        InterpMethod::Lagrange => grid.iter().map(|&x| lagrange_eval(&xs, &ys, x)).collect::<Result<_, _>>()?,
        InterpMethod::Newton => {
            let p = DividedDiffPoly::build(&xs, &ys)?;
            grid.iter().map(|&x| p.eval(x)).collect()
        }
        InterpMethod::Spline => {
            let s = CubicSpline::natural(&xs, &ys)?;
            grid.iter().map(|&x| s.eval(x)).collect()
        }
        InterpMethod::Linear => grid.iter().map(|&x| linear_interp(&xs, &ys, x)).collect::<Result<_, _>>()?,
    };
    let mut t = Table::new(&["x", "y"]);
    grid.iter().zip(values).for_each(|(&x, y)| t.push(vec![x, y]));
    Ok(Output::Csv(t))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum QuadMethod {
    Trapezoid,
    Simpson,
    Gauss,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct IntegrateArgs {
    #[arg(long, value_enum, default_value = "simpson")]
    pub method: QuadMethod,
    #[arg(long, value_enum, default_value = "sin")]
    pub f: ScalarFn,
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long, default_value_t = PI)]
    pub b: f64,
    /// Subintervals, or nodes for Gauss-Legendre.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
}

fn integrate(args: &IntegrateArgs) -> CliResult<Output> {
    let f = |x: f64| args.f.eval(x);
    let value = match args.method {
        QuadMethod::Trapezoid => trapezoid_fn(f, args.a, args.b, args.n)?,
        QuadMethod::Simpson => simpson(f, args.a, args.b, args.n)?,
        QuadMethod::Gauss => gauss_legendre(f, args.a, args.b, args.n)?,
    };
    let exact = args.f.antiderivative(args.b) - args.f.antiderivative(args.a);
    let mut t = Table::new(&["n", "value", "exact", "abs_error"]);
    t.push(vec![args.n as f64, value, exact, (value - exact).abs()]);
    Ok(Output::Csv(t))
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FftArgs {
    /// One-column CSV signal; a synthetic tone is used when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 1000.0)]
    pub fs: f64,
    /// Synthetic signal: tone frequency in Hz.
    #[arg(long, default_value_t = 50.0)]
    pub tone: f64,
    /// Synthetic signal: number of samples.
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Synthetic signal: amplitude of seeded uniform noise.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
}

fn fft(args: &FftArgs, seed: u64) -> CliResult<Output> {
    let signal = match &args.input {
        Some(path) => {
            let t = read_csv(&std::fs::read(path)?)?;
            if t.headers.len() != 1 {
                return Err(CliError::MalformedCsv("signal file needs exactly one column".into()));
            }
            t.column(0)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..args.n)
                .map(|i| {
                    let t = i as f64 / args.fs;
                    (2.0 * PI * args.tone * t).sin() + args.noise * rng.random_range(-1.0..1.0)
                })
                .collect()
        }
    };
    let s = spectrum(&signal, args.fs)?;
    let mut t = Table::new(&["freq", "re", "im", "magnitude"]);
    let mag = s.bins.magnitude();
    for (k, (&f, &a)) in s.freqs.iter().zip(&mag).enumerate() {
        t.push(vec![f, s.bins.re[k], s.bins.im[k], a]);
    }
    Ok(Output::Csv(t))
}

#[derive(Debug, Args)]
pub struct ImageArgs {
    /// P2 image; a seeded synthetic 64×64 image is used when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Frequency rows and columns kept.
    #[arg(long, default_value_t = 8)]
    pub keep: usize,
    /// Where to write the log-magnitude spectrum.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
}

fn synthetic_image(seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(64, 64, |i, j| {
        let base = if (i / 16 + j / 16) % 2 == 0 { 200.0 } else { 50.0 };
        base + rng.random_range(-40.0..40.0)
    })
}

fn image_lowpass(args: &ImageArgs, seed: u64) -> CliResult<Output> {
    let img = match &args.input {
        Some(path) => read_pgm(&std::fs::read(path)?)?,
        None => synthetic_image(seed),
    };
    let smooth = spectral_pool2d(&img, args.keep)?;
    let clamped = Matrix::from_fn(smooth.rows(), smooth.cols(), |i, j| smooth[(i, j)].clamp(0.0, 255.0));
    let main = crate::pgm::write_pgm(&clamped)?;
    let extra = match &args.spectrum {
        Some(path) => {
            let mag = fft2(&img)?.magnitude();
            let log = Matrix::from_fn(mag.rows(), mag.cols(), |i, j| mag[(i, j)].ln_1p());
            Some((path.clone(), crate::pgm::write_pgm(&to_grey(&log))?))
        }
        None => None,
    };
    Ok(Output::Pgm(main, extra))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OptMethod {
    Gd,
    Momentum,
    Adagrad,
    Rmsprop,
    Adam,
    Adamw,
    Newton,
    Bfgs,
    Lbfgs,
    NelderMead,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScheduleKind {
    Constant,
    /// Halve every 10 steps.
    Step,
    /// eta·e^(−0.1 t)
    Exponential,
    /// Cosine annealing from eta to 0 with warm restarts every 10, 20, 40… steps.
    Cosine,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct OptimizeArgs {
    #[arg(long, value_enum, default_value = "quadratic1d")]
    pub f: Objective,
    #[arg(long, value_enum, default_value = "gd")]
    pub method: OptMethod,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    #[arg(long, default_value_t = 50)]
    pub iters: usize,
    #[arg(long, value_enum, default_value = "constant")]
    pub schedule: ScheduleKind,
    #[arg(long, default_value_t = 0.0)]
    pub weight_decay: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
}

fn optimize(args: &OptimizeArgs) -> CliResult<Output> {
    let obj = args.f;
    let x0 = match &args.x0 {
        Some(s) => parse_list(s)?,
        None => obj.default_start(),
    };
    if x0.len() != obj.dim() {
        return Err(CliError::usage(format!("--x0 needs {} values", obj.dim())));
    }
    let mut headers = vec!["step".to_string()];
    headers.extend((0..x0.len()).map(|i| format!("x{i}")));
    headers.push("f".into());
    let first_order = match args.method {
        OptMethod::Gd => Some(Optimizer::Sgd),
        OptMethod::Momentum => Some(Optimizer::Momentum),
        OptMethod::Adagrad => Some(Optimizer::Adagrad),
        OptMethod::Rmsprop => Some(Optimizer::RmsProp),
        OptMethod::Adam => Some(Optimizer::Adam),
        OptMethod::Adamw => Some(Optimizer::AdamW),
        _ => None,
    };
    if let Some(kind) = first_order {
        let schedule = match args.schedule {
            ScheduleKind::Constant => Schedule::Exponential { eta0: args.eta, lambda: 0.0 },
            ScheduleKind::Step => Schedule::Step { eta0: args.eta, drop_factor: 0.5, drop_epoch: 10 },
            ScheduleKind::Exponential => Schedule::Exponential { eta0: args.eta, lambda: 0.1 },
            ScheduleKind::Cosine => Schedule::warm_restarts(0.0, args.eta, 10),
        };
        schedule.validate()?;
        headers.push("lr".into());
        let mut t = Table::new(&headers);
        let mut state = OptState::new(x0.len());
        let mut x = x0;
        for step in 0..=args.iters {
            let lr = schedule.lr_at(step);
            let mut row = vec![step as f64];
            row.extend(&x);
            row.extend([obj.value(&x), lr]);
            t.push(row);
            if step == args.iters {
                break;
            }
            let cfg = OptConfig { weight_decay: args.weight_decay, ..OptConfig::with_eta(lr) };
            x = optimizer_step(kind, &x, &obj.gradient(&x), &mut state, &cfg)?;
        }
        return Ok(Output::Csv(t));
    }
    let f = |x: &[f64]| obj.value(x);
    let g = |x: &[f64]| obj.gradient(x);
    let rep = match args.method {
        OptMethod::Newton => newton_minimize(g, |x: &[f64]| obj.hessian(x), &x0, args.tol, args.max_iter)?,
        OptMethod::Bfgs => bfgs_minimize(f, g, &x0, args.tol, args.max_iter)?,
        OptMethod::Lbfgs => lbfgs_minimize(f, g, &x0, DEFAULT_LBFGS_MEMORY, args.tol, args.max_iter)?,
        _ => nelder_mead(f, &x0, args.tol, args.max_iter)?,
    };
    let mut t = Table::new(&headers);
    for (i, x) in rep.path.iter().enumerate() {
        let mut row = vec![i as f64];
        row.extend(x);
        row.push(obj.value(x));
        t.push(row);
    }
    Ok(Output::Csv(t))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OdeProblem {
    /// y' = −2y, y(0) = 1
    Decay,
    /// y' = −1000y + 3000 − 2000e^(−t), y(0) = 0
    Stiff,
    /// Leaky integrate-and-fire membrane.
    Lif,
    /// First-order step response τy' + y = K.
    Lti,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OdeMethod {
    Euler,
    Rk4,
    BackwardEuler,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct OdeArgs {
    #[arg(long, value_enum, default_value = "decay")]
    pub problem: OdeProblem,
    #[arg(long, value_enum, default_value = "rk4")]
    pub method: OdeMethod,
    #[arg(long, default_value_t = 0.1)]
    pub h: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    /// Gain for `lti`.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Time constant for `lti`.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Input current for `lif`.
    #[arg(long, default_value_t = 20.0)]
    pub current: f64,
}

fn solve_ivp<F: Fn(f64, &[f64]) -> Vec<f64>>(p: &IvpProblem<F>, m: OdeMethod) -> CliResult<Trajectory> {
    Ok(match m {
        OdeMethod::Euler => euler_solve(p)?,
        OdeMethod::Rk4 => rk4_solve(p)?,
        OdeMethod::BackwardEuler => backward_euler_solve(p)?,
    })
}

fn ode(args: &OdeArgs) -> CliResult<Output> {
    let tr = match args.problem {
        OdeProblem::Decay => {
            let p = IvpProblem::new(|_t: f64, y: &[f64]| vec![-2.0 * y[0]], 0.0, &[1.0], args.h, args.t_end)?;
            solve_ivp(&p, args.method)?
        }
        OdeProblem::Stiff => {
            let f = |t: f64, y: &[f64]| vec![-1000.0 * y[0] + 3000.0 - 2000.0 * (-t).exp()];
            solve_ivp(&IvpProblem::new(f, 0.0, &[0.0], args.h, args.t_end)?, args.method)?
        }
        OdeProblem::Lif => {
            lif_simulate(LifParams { current: args.current, ..LifParams::default() }, args.h, args.t_end)?
        }
        OdeProblem::Lti => lti_step_response(args.k, args.tau, args.h, args.t_end)?,
    };
    let mut headers = vec!["t".to_string()];
    headers.extend((0..tr.ys.cols()).map(|j| if tr.ys.cols() == 1 { "y".into() } else { format!("y{j}") }));
    let mut t = Table::new(&headers);
    for (i, &time) in tr.ts.iter().enumerate() {
        let mut row = vec![time];
        row.extend(tr.ys.row(i));
        t.push(row);
    }
    Ok(Output::Csv(t))
}

#[derive(Debug, Args)]
pub struct HeatArgs {
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long = "L", default_value_t = 10.0)]
    pub length: f64,
    #[arg(long, default_value_t = 100)]
    pub nx: usize,
    #[arg(long, default_value_t = 500)]
    pub nt: usize,
    /// Total simulated time.
    #[arg(long = "t", default_value_t = 1.0)]
    pub t_total: f64,
}

fn heat(args: &HeatArgs) -> CliResult<Output> {
    let l = args.length;
    let p = HeatProblem::new(args.alpha, l, args.nx, args.nt, args.t_total, move |x: f64| (PI * x / l).sin())?;
    let sol = heat1d_explicit(&p, None)?;
    let mut t = Table::new(&["x", "u"]);
    sol.xs.iter().zip(&sol.u).for_each(|(&x, &u)| t.push(vec![x, u]));
    Ok(Output::Csv(t))
}

#[derive(Debug, Args)]
pub struct XorArgs {
    #[arg(long, default_value_t = 10_000)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    /// Write every n-th epoch (the last epoch is always written).
    #[arg(long, default_value_t = 100)]
    pub every: usize,
}

fn xor(args: &XorArgs, seed: u64) -> CliResult<Output> {
    if args.every == 0 {
        return Err(CliError::usage("--every must be at least 1"));
    }
    let (x, y) = xor_dataset();
    let p = mlp_init(&[3, 4, 1], seed)?;
    let (_, hist) = mlp_train(&p, &x, &y, args.eta, args.epochs)?;
    let mut t = Table::new(&["epoch", "loss"]);
    for (e, &l) in hist.iter().enumerate() {
        if e % args.every == 0 || e + 1 == hist.len() {
            t.push(vec![e as f64, l]);
        }
    }
    Ok(Output::Csv(t))
}

#[derive(Debug, Args)]
pub struct QlearnArgs {
    #[arg(long, default_value_t = 1000)]
    pub episodes: usize,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.9)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
}

fn qlearn(args: &QlearnArgs, seed: u64) -> CliResult<Output> {
    let env = GridEnv::default();
    let q = q_learn(&env, args.alpha, args.gamma, args.epsilon, args.episodes, seed)?;
    let mut headers = vec!["state".to_string()];
    headers.extend((0..env.actions()).map(|a| format!("q{a}")));
    let mut t = Table::new(&headers);
    for s in 0..env.states() {
        let mut row = vec![s as f64];
        row.extend(q.row(s));
        t.push(row);
    }
    Ok(Output::Csv(t))
}

pub fn execute(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Linalg(a) => linalg(a),
        Command::Solve(a) => solve(a),
        Command::Eig(a) => eigen(a),
        Command::Roots(a) => find_roots(a),
        Command::Interp(a) => interp(a),
        Command::Integrate(a) => integrate(a),
        Command::Fft(a) => fft(a, cli.seed),
        Command::ImageLowpass(a) => image_lowpass(a, cli.seed),
        Command::Optimize(a) => optimize(a),
        Command::Ode(a) => ode(a),
        Command::Heat(a) => heat(a),
        Command::Xor(a) => xor(a, cli.seed),
        Command::Qlearn(a) => qlearn(a, cli.seed),
    }
}
