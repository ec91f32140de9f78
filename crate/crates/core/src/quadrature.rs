//! Finite differences and numerical integration.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{NumError, Result};

pub const DEFAULT_FD_STEP: f64 = 1e-5;
pub const MAX_GAUSS_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdScheme {
    Forward,
    Backward,
    Central,
}

pub fn finite_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, scheme: FdScheme) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(NumError::InvalidParameter("step must be positive"));
    }
    let d = match scheme {
        FdScheme::Forward => (f(x + h) - f(x)) / h,
        FdScheme::Backward => (f(x) - f(x - h)) / h,
        FdScheme::Central => (f(x + h) - f(x - h)) / (2.0 * h),
    };
    if d.is_finite() {
        Ok(d)
    } else {
        Err(NumError::NonFinite)
    }
}

fn check_interval(a: f64, b: f64, n: usize) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(NumError::NonFinite);
    }
    if a >= b {
        return Err(NumError::BadPartition("lower bound must be below upper bound"));
    }
    if n == 0 {
        return Err(NumError::BadPartition("need at least one subinterval"));
    }
    Ok(())
}

/// Composite trapezoid rule with `n` equal subintervals.
pub fn trapezoid_fn<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Result<f64> {
    check_interval(a, b, n)?;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
    Ok(h / 2.0 * (f(a) + 2.0 * inner + f(b)))
}

/// Trapezoid rule over sampled points, e.g. the area under an ROC curve.
pub fn trapezoid_samples(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(NumError::shape(format!("{} abscissae but {} values", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(NumError::TooFewPoints(2));
    }
    if xs.windows(2).any(|w| w[1] < w[0]) {
        return Err(NumError::UnsortedKnots);
    }
    Ok(xs.windows(2).zip(ys.windows(2)).map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / 2.0).sum())
}

/// Composite Simpson rule; `n` must be even.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Result<f64> {
    check_interval(a, b, n)?;
    if n % 2 == 1 {
        return Err(NumError::OddPartition);
    }
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    Ok(s * h / 3.0)
}

/// Gauss-Legendre nodes and weights on `[−1, 1]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Computes the rule from scratch: Newton's method on `Pₙ` using the
    /// three-term recurrence.
    pub fn compute(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GAUSS_ORDER {
            return Err(NumError::BadOrder);
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // Largest root first, mirrored into the lower half.
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(GaussRule { n, nodes, weights })
    }

    /// `∫ₐᵇ f` with this rule after the affine change of variables.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = (b - a) / 2.0;
        let mid = (a + b) / 2.0;
        half * self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
    }
}

/// `Pₙ(x)` and `Pₙ′(x)`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

type RuleCache = RwLock<HashMap<usize, Arc<GaussRule>>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared, memoized rule of order `n`.
pub fn gauss_rule(n: usize) -> Result<Arc<GaussRule>> {
    if let Some(r) = cache().read().expect("rule cache poisoned").get(&n) {
        return Ok(Arc::clone(r));
    }
    let rule = Arc::new(GaussRule::compute(n)?);
    let mut w = cache().write().expect("rule cache poisoned");
    Ok(Arc::clone(w.entry(n).or_insert(rule)))
}

pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Result<f64> {
    let rule = gauss_rule(n)?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(NumError::NonFinite);
    }
    Ok(rule.integrate(f, a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn finite_difference_examples() {
        let d = finite_diff(f64::sin, FRAC_PI_4, 1e-5, FdScheme::Central).unwrap();
        assert!((d - FRAC_PI_4.cos()).abs() < 1e-8);
        let y = 2.0;
        // Forward quotient of x² + 3xy + y² in x at (1, 2) is exactly 8 + h.
        let d = finite_diff(|x| x * x + 3.0 * x * y + y * y, 1.0, 1e-5, FdScheme::Forward).unwrap();
        assert!((d - 8.00001).abs() < 1e-4);
        let x = 1.0;
        let d = finite_diff(|y| x * x + 3.0 * x * y + y * y, 2.0, 1e-5, FdScheme::Forward).unwrap();
        assert!((d - 7.00001).abs() < 1e-4);
        for s in [FdScheme::Forward, FdScheme::Backward, FdScheme::Central] {
            assert_eq!(finite_diff(|_| 3.0, 0.2, 1e-3, s).unwrap(), 0.0);
        }
        assert!(finite_diff(f64::sin, 0.0, 0.0, FdScheme::Central).is_err());
    }

    #[test]
    fn central_difference_is_second_order() {
        let err = |h: f64| (finite_diff(f64::sin, FRAC_PI_4, h, FdScheme::Central).unwrap() - FRAC_PI_4.cos()).abs();
        for h in [1e-3, 5e-4, 2e-4] {
            let ratio = err(h) / err(h / 2.0);
            assert!((ratio - 4.0).abs() < 0.8, "h={h} ratio={ratio}");
        }
    }

    #[test]
    fn trapezoid_and_simpson_on_sine() {
        let t = trapezoid_fn(f64::sin, 0.0, PI, 1000).unwrap();
        assert!((t - 2.0).abs() < 2e-6);
        let s = simpson(f64::sin, 0.0, PI, 1000).unwrap();
        assert!((s - 2.0).abs() < 1e-10);
    }

    #[test]
    fn exact_cases() {
        assert_eq!(trapezoid_fn(|_| 2.5, 1.0, 3.0, 7).unwrap(), 5.0);
        assert!((trapezoid_fn(|x| 3.0 * x - 1.0, 0.0, 2.0, 3).unwrap() - 4.0).abs() < 1e-14);
        assert!((simpson(|x| x * x * x, 0.0, 2.0, 2).unwrap() - 4.0).abs() < 1e-12);
        assert!((simpson(|x| x * x, 0.0, 3.0, 2).unwrap() - 9.0).abs() < 1e-12);
        assert_eq!(simpson(f64::sin, 0.0, 1.0, 3), Err(NumError::OddPartition));
        assert!(matches!(trapezoid_fn(f64::sin, 1.0, 0.0, 4), Err(NumError::BadPartition(_))));
        assert!(matches!(trapezoid_fn(f64::sin, 0.0, 1.0, 0), Err(NumError::BadPartition(_))));
    }

    #[test]
    fn roc_area() {
        let fpr = [0.0, 0.1, 0.4, 0.8, 1.0];
        let tpr = [0.0, 0.4, 0.7, 0.9, 1.0];
        // Four trapezoids: 0.02 + 0.165 + 0.32 + 0.19.
        let by_hand = 0.1 * 0.4 / 2.0 + 0.3 * 1.1 / 2.0 + 0.4 * 1.6 / 2.0 + 0.2 * 1.9 / 2.0;
        let auc = trapezoid_samples(&fpr, &tpr).unwrap();
        assert!((auc - by_hand).abs() < 1e-12);
        assert!((auc - 0.695).abs() < 1e-12);
        assert_eq!(trapezoid_samples(&[0.0, 2.0], &[1.0, 3.0]).unwrap(), 4.0);
        assert_eq!(trapezoid_samples(&fpr, &[0.0; 5]).unwrap(), 0.0);
        assert_eq!(trapezoid_samples(&[1.0, 0.0], &[0.0, 0.0]), Err(NumError::UnsortedKnots));
        assert!(matches!(trapezoid_samples(&fpr, &tpr[..3]), Err(NumError::ShapeMismatch(_))));
    }

    #[test]
    fn gauss_examples() {
        assert!(gauss_legendre(|x| x.powi(5), -1.0, 1.0, 3).unwrap().abs() < 1e-14);
        assert!((gauss_legendre(|x| x.powi(4), -1.0, 1.0, 3).unwrap() - 0.4).abs() < 1e-12);
        assert!((gauss_legendre(f64::sin, 0.0, PI, 8).unwrap() - 2.0).abs() < 1e-10);
        assert_eq!(gauss_legendre(f64::sin, 0.0, 1.0, 0), Err(NumError::BadOrder));
        assert_eq!(gauss_legendre(f64::sin, 0.0, 1.0, 65), Err(NumError::BadOrder));
    }

    #[test]
    fn rules_are_symmetric_and_sum_to_two() {
        for n in 1..=MAX_GAUSS_ORDER {
            let r = gauss_rule(n).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-12, "n={n}");
            for i in 0..n {
                assert!((r.nodes[i] + r.nodes[n - 1 - i]).abs() < 1e-12);
                assert!(r.weights[i] > 0.0 && r.nodes[i].abs() < 1.0);
            }
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn gauss_is_exact_for_low_degree_monomials() {
        for n in 2..=10 {
            for k in 0..2 * n {
                let got = gauss_legendre(|x| x.powi(k as i32), -1.0, 1.0, n).unwrap();
                let want = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
                assert!((got - want).abs() <= 1e-12, "n={n} k={k}: {got}");
            }
        }
    }

    #[test]
    fn cache_returns_the_same_rule() {
        let a = gauss_rule(7).unwrap();
        let b = gauss_rule(7).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(*a, GaussRule::compute(7).unwrap());
        let handles: Vec<_> = (0..4).map(|_| std::thread::spawn(|| gauss_rule(13).unwrap())).collect();
        let rules: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(rules.iter().all(|r| **r == *rules[0]));
    }

    #[test]
    fn richardson_ratios() {
        let err_t = |n| (trapezoid_fn(f64::sin, 0.0, PI, n).unwrap() - 2.0).abs();
        let err_s = |n| (simpson(f64::sin, 0.0, PI, n).unwrap() - 2.0).abs();
        for n in [16, 32, 64] {
            let rt = err_t(n) / err_t(2 * n);
            let rs = err_s(n) / err_s(2 * n);
            assert!((rt - 4.0).abs() < 0.6, "trapezoid ratio {rt}");
            assert!((rs - 16.0).abs() < 2.4, "simpson ratio {rs}");
        }
    }

    proptest! {
        #[test]
        fn samples_match_function_rule(a in -3.0..0.0f64, w in 0.5..4.0f64, n in 1usize..200) {
            let b = a + w;
            let f = |x: f64| (x * 1.3).cos() + x * x;
            let xs: Vec<f64> = (0..=n).map(|i| a + i as f64 * (w / n as f64)).collect();
            let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
            let s = trapezoid_samples(&xs, &ys).unwrap();
            let t = trapezoid_fn(f, a, b, n).unwrap();
            prop_assert!((s - t).abs() < 1e-12 * (1.0 + t.abs()));
        }

        #[test]
        fn gauss_integrates_random_polynomials(
            coeffs in prop::collection::vec(-3.0..3.0f64, 1..12),
            a in -2.0..0.0f64,
            b in 0.1..2.0f64,
        ) {
            let deg = coeffs.len() - 1;
            let n = deg / 2 + 1;
            let p = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            let antider = |x: f64| {
                coeffs.iter().enumerate().map(|(k, c)| c * x.powi(k as i32 + 1) / (k as f64 + 1.0)).sum::<f64>()
            };
            let want = antider(b) - antider(a);
            let got = gauss_legendre(p, a, b, n).unwrap();
            prop_assert!((got - want).abs() <= 1e-10 * (1.0 + want.abs()));
        }
    }
}
