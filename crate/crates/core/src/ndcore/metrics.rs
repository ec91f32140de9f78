use crate::error::{NumError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    Sum,
    Mean,
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L1,
    L2,
    /// Square root of the sum of squared entries. On a flat slice this is the
    /// same value as `L2`; it exists so matrix callers can say what they mean.
    Frobenius,
}

/// Absolute and relative error of an approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPair {
    pub absolute: f64,
    pub relative: f64,
}

pub fn reduce(v: &[f64], kind: Reduction) -> Result<f64> {
    if v.is_empty() {
        return Err(NumError::EmptyInput);
    }
    Ok(match kind {
        Reduction::Sum => v.iter().sum(),
        Reduction::Mean => v.iter().sum::<f64>() / v.len() as f64,
        Reduction::Max => v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Reduction::Min => v.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

pub fn dot(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(NumError::shape(format!("dot of lengths {} and {}", a.len(), b.len())));
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
}

pub fn cross3(a: &[f64], b: &[f64]) -> Result<[f64; 3]> {
    match (a, b) {
        (&[a0, a1, a2], &[b0, b1, b2]) => Ok([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0]),
        _ => Err(NumError::shape("cross product needs two 3-vectors")),
    }
}

pub fn norm(x: &[f64], kind: NormKind) -> Result<f64> {
    if x.is_empty() {
        return Err(NumError::EmptyInput);
    }
    Ok(match kind {
        NormKind::L1 => x.iter().map(|v| v.abs()).sum(),
        NormKind::L2 | NormKind::Frobenius => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
    })
}

/// Infinity norm; zero for an empty slice.
pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
}

pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    let d = dot(a, b)?;
    let na = norm(a, NormKind::L2)?;
    let nb = norm(b, NormKind::L2)?;
    if na == 0.0 || nb == 0.0 {
        return Err(NumError::ZeroNorm);
    }
    Ok((d / (na * nb)).clamp(-1.0, 1.0))
}

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(NumError::shape("distance between unequal lengths"));
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

pub fn error_metrics(exact: f64, approx: f64) -> Result<ErrorPair> {
    if exact == 0.0 {
        return Err(NumError::RelativeUndefined);
    }
    let absolute = (exact - approx).abs();
    Ok(ErrorPair { absolute, relative: absolute / exact.abs() })
}
