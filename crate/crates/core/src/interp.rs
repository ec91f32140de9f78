//! Polynomial interpolation, natural cubic splines and piecewise linear
//! interpolation.

use crate::error::{NumError, Result};

/// Knots closer than this are considered equal.
pub const KNOT_TOL: f64 = 1e-12;

fn check_data(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(NumError::shape(format!("{} knots but {} values", xs.len(), ys.len())));
    }
    if xs.is_empty() {
        return Err(NumError::EmptyInput);
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(NumError::NonFinite);
    }
    Ok(())
}

fn check_distinct(xs: &[f64]) -> Result<()> {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if (xs[i] - xs[j]).abs() < KNOT_TOL {
                return Err(NumError::DuplicateKnots);
            }
        }
    }
    Ok(())
}

fn check_increasing(xs: &[f64]) -> Result<()> {
    if xs.windows(2).all(|w| w[1] - w[0] >= KNOT_TOL) {
        Ok(())
    } else {
        Err(NumError::UnsortedKnots)
    }
}

/// Value at `x` of the polynomial of degree `len − 1` through the points.
pub fn lagrange_eval(xs: &[f64], ys: &[f64], x: f64) -> Result<f64> {
    check_data(xs, ys)?;
    check_distinct(xs)?;
    let mut total = 0.0;
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if x == xi {
            return Ok(yi);
        }
        let mut basis = 1.0;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                basis *= (x - xj) / (xi - xj);
            }
        }
        total += yi * basis;
    }
    Ok(total)
}

/// Newton form of the interpolating polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct DividedDiffPoly {
    xs: Vec<f64>,
    coeffs: Vec<f64>,
}

impl DividedDiffPoly {
    pub fn build(xs: &[f64], ys: &[f64]) -> Result<Self> {
        check_data(xs, ys)?;
        check_distinct(xs)?;
        let n = xs.len();
        let mut table = ys.to_vec();
        let mut coeffs = Vec::with_capacity(n);
        coeffs.push(table[0]);
        for level in 1..n {
            for i in 0..n - level {
                table[i] = (table[i + 1] - table[i]) / (xs[i + level] - xs[i]);
            }
            coeffs.push(table[0]);
        }
        Ok(DividedDiffPoly { xs: xs.to_vec(), coeffs })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    /// `coeffs[k] = f[x₀, …, x_k]`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Horner-style evaluation of the nested Newton form.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.coeffs.len();
        let mut acc = self.coeffs[n - 1];
        for k in (0..n - 1).rev() {
            acc = acc * (x - self.xs[k]) + self.coeffs[k];
        }
        acc
    }
}

/// Natural cubic spline, `S(x) = a + b t + c t² + d t³` with `t = x − xᵢ` on
/// each interval.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    coeffs: Vec<[f64; 4]>,
}

impl CubicSpline {
    pub fn natural(xs: &[f64], ys: &[f64]) -> Result<Self> {
        check_data(xs, ys)?;
        if xs.len() < 3 {
            return Err(NumError::TooFewPoints(3));
        }
        check_increasing(xs)?;
        let n = xs.len() - 1;
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        // Tridiagonal system for the interior second derivatives, solved by
        // forward elimination and back substitution.
        let m_int = n - 1;
        let mut diag = vec![0.0; m_int];
        let mut rhs = vec![0.0; m_int];
        for k in 0..m_int {
            diag[k] = 2.0 * (h[k] + h[k + 1]);
            rhs[k] = 6.0 * (slope[k + 1] - slope[k]);
        }
        for k in 1..m_int {
            let w = h[k] / diag[k - 1];
            diag[k] -= w * h[k];
            rhs[k] -= w * rhs[k - 1];
        }
        let mut m = vec![0.0; n + 1];
        for k in (0..m_int).rev() {
            let upper = if k + 1 < m_int { h[k + 1] * m[k + 2] } else { 0.0 };
            m[k + 1] = (rhs[k] - upper) / diag[k];
        }

        let coeffs = (0..n)
            .map(|i| {
                [ys[i], slope[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0, m[i] / 2.0, (m[i + 1] - m[i]) / (6.0 * h[i])]
            })
            .collect();
        Ok(CubicSpline { xs: xs.to_vec(), coeffs })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    /// Per-interval `[a, b, c, d]`.
    pub fn coeffs(&self) -> &[[f64; 4]] {
        &self.coeffs
    }

    /// Interval used for `x`; points outside the knots use the boundary
    /// cubic.
    pub fn interval(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&k| k <= x);
        k.saturating_sub(1).min(self.coeffs.len() - 1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_on(self.interval(x), x)
    }

    /// Evaluates the cubic of interval `i` at `x`, even outside it.
    pub fn eval_on(&self, i: usize, x: f64) -> f64 {
        let [a, b, c, d] = self.coeffs[i];
        let t = x - self.xs[i];
        a + t * (b + t * (c + t * d))
    }

    pub fn derivative_on(&self, i: usize, x: f64) -> f64 {
        let [_, b, c, d] = self.coeffs[i];
        let t = x - self.xs[i];
        b + t * (2.0 * c + 3.0 * d * t)
    }

    pub fn second_derivative_on(&self, i: usize, x: f64) -> f64 {
        let [_, _, c, d] = self.coeffs[i];
        2.0 * c + 6.0 * d * (x - self.xs[i])
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.derivative_on(self.interval(x), x)
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        self.second_derivative_on(self.interval(x), x)
    }
}

/// Piecewise linear interpolation, clamped to the end values outside the
/// knots.
pub fn linear_interp(xs: &[f64], ys: &[f64], x: f64) -> Result<f64> {
    check_data(xs, ys)?;
    check_increasing(xs)?;
    let n = xs.len();
    if x <= xs[0] {
        return Ok(ys[0]);
    }
    if x >= xs[n - 1] {
        return Ok(ys[n - 1]);
    }
    let i = xs.partition_point(|&k| k <= x) - 1;
    Ok(ys[i] + (ys[i + 1] - ys[i]) * (x - xs[i]) / (xs[i + 1] - xs[i]))
}
