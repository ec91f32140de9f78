//! Discrete Fourier transforms, convolution and frequency-domain filtering.
//!
//! Forward transforms are unscaled and inverse transforms carry the `1/n`
//! factor. The FFT is the iterative radix-2 Cooley-Tukey algorithm and only
//! accepts power-of-two lengths; [`convolve_fft`] pads internally.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{NumError, Result};
use crate::ndcore::Matrix;

/// Row-major real image; the same layout as [`Matrix`].
pub type Image2D = Matrix;

/// Complex sequence stored as separate real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexVec {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ComplexVec {
    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if re.len() != im.len() {
            return Err(NumError::shape("real and imaginary parts differ in length"));
        }
        if re.iter().chain(&im).any(|v| !v.is_finite()) {
            return Err(NumError::NonFinite);
        }
        Ok(ComplexVec { re, im })
    }

    pub fn from_real(re: &[f64]) -> Self {
        ComplexVec { re: re.to_vec(), im: vec![0.0; re.len()] }
    }

    pub fn zeros(n: usize) -> Self {
        ComplexVec { re: vec![0.0; n], im: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn get(&self, k: usize) -> (f64, f64) {
        (self.re[k], self.im[k])
    }

    pub fn magnitude(&self) -> Vec<f64> {
        self.re.iter().zip(&self.im).map(|(a, b)| a.hypot(*b)).collect()
    }

    /// Σ |x_k|².
    pub fn energy(&self) -> f64 {
        self.re.iter().zip(&self.im).map(|(a, b)| a * a + b * b).sum()
    }
}

/// Naive `O(n²)` transform straight from the definition.
pub fn dft(x: &ComplexVec) -> Result<ComplexVec> {
    let n = x.len();
    if n == 0 {
        return Err(NumError::EmptyInput);
    }
    let mut out = ComplexVec::zeros(n);
    for k in 0..n {
        let (mut sr, mut si) = (0.0, 0.0);
        for t in 0..n {
            // Reduce k·t mod n first so the angle stays small.
            let ang = -2.0 * PI * ((k * t) % n) as f64 / n as f64;
            let (s, c) = ang.sin_cos();
            sr += x.re[t] * c - x.im[t] * s;
            si += x.re[t] * s + x.im[t] * c;
        }
        out.re[k] = sr;
        out.im[k] = si;
    }
    Ok(out)
}

type TwiddleCache = RwLock<HashMap<usize, Arc<Vec<(f64, f64)>>>>;

/// `(cos, sin)` of `−2πk/n` for `k < n/2`, computed once per size.
fn twiddles(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<TwiddleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().expect("twiddle cache poisoned").get(&n) {
        return Arc::clone(t);
    }
    let table: Vec<(f64, f64)> = (0..n / 2)
        .map(|k| {
            if 4 * k == n {
                return (0.0, -1.0);
            }
            let (s, c) = (-2.0 * PI * k as f64 / n as f64).sin_cos();
            (c, s)
        })
        .collect();
    let mut w = cache.write().expect("twiddle cache poisoned");
    Arc::clone(w.entry(n).or_insert_with(|| Arc::new(table)))
}

fn require_pow2(n: usize) -> Result<()> {
    if n.is_power_of_two() {
        Ok(())
    } else {
        Err(NumError::NotPowerOfTwo(n))
    }
}

/// In-place transform; `inverse` conjugates the twiddles and scales by `1/n`.
fn fft_in_place(re: &mut [f64], im: &mut [f64], inverse: bool) {
    let n = re.len();
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let table = twiddles(n);
    let sign = if inverse { -1.0 } else { 1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let (wr, wi) = table[k * stride];
                let wi = sign * wi;
                let (a, b) = (start + k, start + k + half);
                let tr = re[b] * wr - im[b] * wi;
                let ti = re[b] * wi + im[b] * wr;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
            }
        }
        len *= 2;
    }
    if inverse {
        let scale = 1.0 / n as f64;
        re.iter_mut().chain(im.iter_mut()).for_each(|v| *v *= scale);
    }
}

pub fn fft(x: &ComplexVec) -> Result<ComplexVec> {
    require_pow2(x.len())?;
    let mut out = x.clone();
    fft_in_place(&mut out.re, &mut out.im, false);
    Ok(out)
}

pub fn ifft(x: &ComplexVec) -> Result<ComplexVec> {
    require_pow2(x.len())?;
    let mut out = x.clone();
    fft_in_place(&mut out.re, &mut out.im, true);
    Ok(out)
}

pub fn fft_real(x: &[f64]) -> Result<ComplexVec> {
    fft(&ComplexVec::from_real(x))
}

/// Sample frequencies in standard order for spacing `d`.
pub fn fft_freqs(n: usize, d: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(NumError::EmptyInput);
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(NumError::InvalidParameter("sample spacing must be positive"));
    }
    let split = n.div_ceil(2);
    let scale = 1.0 / (n as f64 * d);
    Ok((0..n).map(|k| if k < split { k as f64 * scale } else { (k as f64 - n as f64) * scale }).collect())
}

/// Rotates so that the zero frequency sits in the middle.
pub fn fftshift<T: Clone>(v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    out.rotate_right(v.len() / 2);
    out
}

/// Transform of a real signal together with its frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub bins: ComplexVec,
    pub freqs: Vec<f64>,
    pub spacing: f64,
}

pub fn spectrum(signal: &[f64], sample_rate: f64) -> Result<Spectrum> {
    if !(sample_rate > 0.0 && sample_rate.is_finite()) {
        return Err(NumError::InvalidParameter("sample rate must be positive"));
    }
    let bins = fft_real(signal)?;
    let spacing = 1.0 / sample_rate;
    let freqs = fft_freqs(signal.len(), spacing)?;
    Ok(Spectrum { bins, freqs, spacing })
}

fn nonempty(f: &[f64], g: &[f64]) -> Result<()> {
    if f.is_empty() || g.is_empty() {
        Err(NumError::EmptyInput)
    } else {
        Ok(())
    }
}

/// Linear convolution from the definition; length `len f + len g − 1`.
pub fn convolve_direct(f: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    nonempty(f, g)?;
    let mut out = vec![0.0; f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    Ok(out)
}

/// Linear convolution through zero-padded FFTs.
pub fn convolve_fft(f: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    nonempty(f, g)?;
    let len = f.len() + g.len() - 1;
    let n = len.next_power_of_two();
    let pad = |v: &[f64]| {
        let mut re = v.to_vec();
        re.resize(n, 0.0);
        ComplexVec::from_real(&re)
    };
    let fa = fft(&pad(f))?;
    let gb = fft(&pad(g))?;
    let prod = pointwise(&fa, &gb);
    let mut out = ifft(&prod)?.re;
    out.truncate(len);
    Ok(out)
}

fn pointwise(a: &ComplexVec, b: &ComplexVec) -> ComplexVec {
    let mut out = ComplexVec::zeros(a.len());
    for k in 0..a.len() {
        out.re[k] = a.re[k] * b.re[k] - a.im[k] * b.im[k];
        out.im[k] = a.re[k] * b.im[k] + a.im[k] * b.re[k];
    }
    out
}

/// Circular convolution of period `n`.
pub fn convolve_circular(f: &[f64], g: &[f64], n: usize) -> Result<Vec<f64>> {
    nonempty(f, g)?;
    if n < f.len().max(g.len()) {
        return Err(NumError::InvalidParameter("period shorter than the inputs"));
    }
    let mut out = vec![0.0; n];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[(i + j) % n] += a * b;
        }
    }
    Ok(out)
}

/// 2D complex field, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl Spectrum2D {
    pub fn get(&self, r: usize, c: usize) -> (f64, f64) {
        let i = r * self.cols + c;
        (self.re[i], self.im[i])
    }

    pub fn magnitude(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            let (a, b) = self.get(r, c);
            a.hypot(b)
        })
    }
}

fn transform2(field: &mut Spectrum2D, inverse: bool) {
    let (rows, cols) = (field.rows, field.cols);
    for r in 0..rows {
        let span = r * cols..(r + 1) * cols;
        fft_in_place(&mut field.re[span.clone()], &mut field.im[span], inverse);
    }
    let mut cr = vec![0.0; rows];
    let mut ci = vec![0.0; rows];
    for c in 0..cols {
        for r in 0..rows {
            cr[r] = field.re[r * cols + c];
            ci[r] = field.im[r * cols + c];
        }
        fft_in_place(&mut cr, &mut ci, inverse);
        for r in 0..rows {
            field.re[r * cols + c] = cr[r];
            field.im[r * cols + c] = ci[r];
        }
    }
}

/// Separable 2D transform: rows first, then columns.
pub fn fft2(img: &Image2D) -> Result<Spectrum2D> {
    let (rows, cols) = img.shape();
    require_pow2(rows)?;
    require_pow2(cols)?;
    let mut field = Spectrum2D { rows, cols, re: img.data().to_vec(), im: vec![0.0; rows * cols] };
    transform2(&mut field, false);
    Ok(field)
}

pub fn ifft2(spec: &Spectrum2D) -> Result<Spectrum2D> {
    require_pow2(spec.rows)?;
    require_pow2(spec.cols)?;
    if spec.re.len() != spec.rows * spec.cols || spec.im.len() != spec.re.len() {
        return Err(NumError::shape("field storage does not match its shape"));
    }
    let mut field = spec.clone();
    transform2(&mut field, true);
    Ok(field)
}

/// Zeroes every bin with `|freq| > cutoff` and returns the real part of the
/// inverse transform.
pub fn lowpass1d(signal: &[f64], sample_rate: f64, cutoff: f64) -> Result<Vec<f64>> {
    require_pow2(signal.len())?;
    if !(cutoff > 0.0 && cutoff < sample_rate / 2.0) {
        return Err(NumError::BadCutoff);
    }
    let Spectrum { mut bins, freqs, .. } = spectrum(signal, sample_rate)?;
    // Frequencies come in ± pairs, so masking by |f| hits both partners.
    for (k, f) in freqs.iter().enumerate() {
        if f.abs() > cutoff {
            bins.re[k] = 0.0;
            bins.im[k] = 0.0;
        }
    }
    Ok(ifft(&bins)?.re)
}

/// Keeps the bins with row and column index below `keep`, then transforms
/// back.
pub fn spectral_pool2d(map: &Image2D, keep: usize) -> Result<Image2D> {
    let mut spec = fft2(map)?;
    let (rows, cols) = (spec.rows, spec.cols);
    if keep == 0 || keep > rows.min(cols) {
        return Err(NumError::BadKeep);
    }
    for r in 0..rows {
        for c in 0..cols {
            if r >= keep || c >= keep {
                spec.re[r * cols + c] = 0.0;
                spec.im[r * cols + c] = 0.0;
            }
        }
    }
    let back = ifft2(&spec)?;
    Matrix::new(rows, cols, back.re)
}

/// Frequency of the strongest non-DC bin in the nonnegative half; ties go
/// to the lower frequency.
pub fn peak_frequency(signal: &[f64], sample_rate: f64) -> Result<f64> {
    let s = spectrum(signal, sample_rate)?;
    let mag = s.bins.magnitude();
    let n = signal.len();
    let scale = mag.iter().copied().fold(0.0, f64::max);
    let mut best: Option<(usize, f64)> = None;
    for k in 1..=n / 2 {
        if best.is_none_or(|(_, m)| mag[k] > m) {
            best = Some((k, mag[k]));
        }
    }
    match best {
        Some((k, m)) if m > 1e-12 * scale.max(f64::MIN_POSITIVE) && m > 0.0 => Ok(s.freqs[k].abs()),
        _ => Err(NumError::NoPeak),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: &ComplexVec, b: &ComplexVec, tol: f64) -> bool {
        a.len() == b.len() && (0..a.len()).all(|k| (a.re[k] - b.re[k]).abs() <= tol && (a.im[k] - b.im[k]).abs() <= tol)
    }

    fn random_complex(n: usize, seed: u64) -> ComplexVec {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexVec {
            re: (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
            im: (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        }
    }

    #[test]
    fn dft_examples() {
        let x = dft(&ComplexVec::from_real(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(x.re, vec![1.0; 4]);
        let x = dft(&ComplexVec::from_real(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        let want = ComplexVec::new(vec![10.0, -2.0, -2.0, -2.0], vec![0.0, 2.0, 0.0, -2.0]).unwrap();
        assert!(close(&x, &want, 1e-12));
        let x = dft(&ComplexVec::from_real(&[2.5; 6])).unwrap();
        assert!((x.re[0] - 15.0).abs() < 1e-12);
        assert!(x.re[1..].iter().chain(&x.im).all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn fft_examples() {
        let x = fft_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let oracle = dft(&ComplexVec::from_real(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert!(close(&x, &oracle, 1e-12));
        assert_eq!(x.re, vec![10.0, -2.0, -2.0, -2.0]);
        assert_eq!(x.im, vec![0.0, 2.0, 0.0, -2.0]);
        let mut delta = vec![0.0; 16];
        delta[0] = 1.0;
        let d = fft_real(&delta).unwrap();
        assert!(d.re.iter().all(|&v| v == 1.0) && d.im.iter().all(|&v| v == 0.0));
        assert_eq!(fft_real(&[1.0, 2.0, 3.0]), Err(NumError::NotPowerOfTwo(3)));
        let x = random_complex(64, 3);
        assert!(close(&ifft(&fft(&x).unwrap()).unwrap(), &x, 1e-10));
    }

    #[test]
    fn fft_matches_dft_up_to_1024() {
        for p in 0..=10 {
            let n = 1usize << p;
            let x = random_complex(n, p as u64);
            assert!(close(&fft(&x).unwrap(), &dft(&x).unwrap(), 1e-9 * n as f64), "n={n}");
        }
    }

    #[test]
    fn frequency_grid() {
        assert_eq!(fft_freqs(4, 1.0).unwrap(), vec![0.0, 0.25, -0.5, -0.25]);
        assert_eq!(fft_freqs(1, 1.0).unwrap(), vec![0.0]);
        assert_eq!(fft_freqs(5, 0.5).unwrap(), vec![0.0, 0.4, 0.8, -0.8, -0.4]);
        assert_eq!(fftshift(&[0, 1, 2, 3]), vec![2, 3, 0, 1]);
        assert_eq!(fftshift(&[0, 1, 2, 3, 4]), vec![3, 4, 0, 1, 2]);
    }

    #[test]
    fn convolution_examples() {
        let f = [1.0, 2.0, 3.0];
        let g = [0.0, 1.0, 0.5];
        assert_eq!(convolve_direct(&f, &g).unwrap(), vec![0.0, 1.0, 2.5, 4.0, 1.5]);
        let via = convolve_fft(&f, &g).unwrap();
        for (a, b) in via.iter().zip([0.0, 1.0, 2.5, 4.0, 1.5]) {
            assert!((a - b).abs() < 1e-9);
        }
        assert_eq!(convolve_direct(&f, &[1.0]).unwrap(), f.to_vec());
        assert_eq!(convolve_direct(&f, &g).unwrap(), convolve_direct(&g, &f).unwrap());
        let c = convolve_circular(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 0.0, 1.0], 4).unwrap();
        assert_eq!(c, vec![8.0, 8.0, 12.0, 12.0]);
        let id = convolve_fft(&f, &[1.0]).unwrap();
        assert!(id.iter().zip(&f).all(|(a, b)| (a - b).abs() < 1e-12));
        assert_eq!(convolve_direct(&[], &g), Err(NumError::EmptyInput));
        assert_eq!(convolve_fft(&f, &[]), Err(NumError::EmptyInput));
    }

    #[test]
    fn fft2_examples() {
        let z = fft2(&Matrix::zeros(4, 8)).unwrap();
        assert!(z.re.iter().chain(&z.im).all(|v| *v == 0.0));
        let mut imp = Matrix::zeros(4, 4);
        imp[(0, 0)] = 1.0;
        let s = fft2(&imp).unwrap();
        assert!(s.magnitude().data().iter().all(|m| (m - 1.0).abs() < 1e-15));
        let c = fft2(&Matrix::from_fn(4, 8, |_, _| 0.75)).unwrap();
        assert!((c.get(0, 0).0 - 4.0 * 8.0 * 0.75).abs() < 1e-12);
        assert_eq!(fft2(&Matrix::zeros(3, 4)).unwrap_err(), NumError::NotPowerOfTwo(3));
    }

    fn naive_dft2(img: &Matrix) -> Spectrum2D {
        let (r, c) = img.shape();
        let mut out = Spectrum2D { rows: r, cols: c, re: vec![0.0; r * c], im: vec![0.0; r * c] };
        for u in 0..r {
            for v in 0..c {
                let (mut sr, mut si) = (0.0, 0.0);
                for x in 0..r {
                    for y in 0..c {
                        let ang = -2.0 * PI * ((u * x) as f64 / r as f64 + (v * y) as f64 / c as f64);
                        sr += img[(x, y)] * ang.cos();
                        si += img[(x, y)] * ang.sin();
                    }
                }
                out.re[u * c + v] = sr;
                out.im[u * c + v] = si;
            }
        }
        out
    }

    fn naive_idft2_real(s: &Spectrum2D) -> Matrix {
        let (r, c) = (s.rows, s.cols);
        Matrix::from_fn(r, c, |x, y| {
            let mut acc = 0.0;
            for u in 0..r {
                for v in 0..c {
                    let ang = 2.0 * PI * ((u * x) as f64 / r as f64 + (v * y) as f64 / c as f64);
                    let (a, b) = s.get(u, v);
                    acc += a * ang.cos() - b * ang.sin();
                }
            }
            acc / (r * c) as f64
        })
    }

    #[test]
    fn spectral_pooling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let img = Matrix::from_fn(8, 8, |_, _| rng.random_range(-1.0..1.0));
        let full = spectral_pool2d(&img, 8).unwrap();
        assert!(full.data().iter().zip(img.data()).all(|(a, b)| (a - b).abs() < 1e-9));

        let mut masked = naive_dft2(&img);
        for u in 0..8 {
            for v in 0..8 {
                if u >= 4 || v >= 4 {
                    masked.re[u * 8 + v] = 0.0;
                    masked.im[u * 8 + v] = 0.0;
                }
            }
        }
        let oracle = naive_idft2_real(&masked);
        let pooled = spectral_pool2d(&img, 4).unwrap();
        assert!(pooled.data().iter().zip(oracle.data()).all(|(a, b)| (a - b).abs() < 1e-9));

        let flat = Matrix::from_fn(4, 4, |_, _| 2.0);
        let p = spectral_pool2d(&flat, 1).unwrap();
        assert!(p.data().iter().all(|v| (v - 2.0).abs() < 1e-9));
        assert_eq!(spectral_pool2d(&flat, 0), Err(NumError::BadKeep));
        assert_eq!(spectral_pool2d(&flat, 5), Err(NumError::BadKeep));
    }

    fn tone(freq: f64, fs: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| (2.0 * PI * freq * i as f64 / fs).sin()).collect()
    }

    #[test]
    fn lowpass_examples() {
        let n = 1024;
        let fs = 1024.0;
        let slow = tone(50.0, fs, n);
        let mixed: Vec<f64> = slow.iter().zip(tone(120.0, fs, n)).map(|(a, b)| a + b).collect();
        let out = lowpass1d(&mixed, fs, 100.0).unwrap();
        let worst = out.iter().zip(&slow).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst < 0.02, "{worst}");
        let out = lowpass1d(&slow, fs, 200.0).unwrap();
        assert!(out.iter().zip(&slow).all(|(a, b)| (a - b).abs() < 1e-9));
        assert!(lowpass1d(&vec![0.0; 64], 64.0, 10.0).unwrap().iter().all(|v| *v == 0.0));
        assert_eq!(lowpass1d(&slow, fs, 600.0), Err(NumError::BadCutoff));
        assert_eq!(lowpass1d(&slow, fs, 0.0), Err(NumError::BadCutoff));
    }

    #[test]
    fn peak_examples() {
        let f = peak_frequency(&tone(50.0, 1000.0, 1024), 1000.0).unwrap();
        assert!((f - 50.0).abs() <= 1000.0 / 1024.0, "{f}");
        let f = peak_frequency(&tone(5.0, 500.0, 512), 500.0).unwrap();
        assert!((f - 5.0).abs() <= 500.0 / 512.0, "{f}");
        assert_eq!(peak_frequency(&[3.0; 64], 64.0), Err(NumError::NoPeak));
    }

    proptest! {
        #[test]
        fn parseval_and_linearity(
            p in 0u32..9,
            seed in any::<u64>(),
            a in -2.0..2.0f64,
            b in -2.0..2.0f64,
        ) {
            let n = 1usize << p;
            let x = random_complex(n, seed);
            let y = random_complex(n, seed.wrapping_add(1));
            let fx = fft(&x).unwrap();
            let fy = fft(&y).unwrap();
            let e = x.energy();
            prop_assert!((e - fx.energy() / n as f64).abs() <= 1e-9 * e);
            let comb = ComplexVec {
                re: (0..n).map(|k| a * x.re[k] + b * y.re[k]).collect(),
                im: (0..n).map(|k| a * x.im[k] + b * y.im[k]).collect(),
            };
            let fc = fft(&comb).unwrap();
            for k in 0..n {
                prop_assert!((fc.re[k] - (a * fx.re[k] + b * fy.re[k])).abs() <= 1e-9);
                prop_assert!((fc.im[k] - (a * fx.im[k] + b * fy.im[k])).abs() <= 1e-9);
            }
        }

        #[test]
        fn real_input_is_conjugate_symmetric(x in prop::collection::vec(-5.0..5.0f64, 32)) {
            let s = fft_real(&x).unwrap();
            for k in 1..32 {
                prop_assert!((s.re[k] - s.re[32 - k]).abs() <= 1e-10);
                prop_assert!((s.im[k] + s.im[32 - k]).abs() <= 1e-10);
            }
        }

        #[test]
        fn fft_convolution_matches_direct(
            f in prop::collection::vec(-1.0..1.0f64, 1..=257),
            g in prop::collection::vec(-1.0..1.0f64, 1..=257),
            h in prop::collection::vec(-1.0..1.0f64, 1..=257),
        ) {
            let d = convolve_direct(&f, &g).unwrap();
            let q = convolve_fft(&f, &g).unwrap();
            prop_assert_eq!(d.len(), q.len());
            for (a, b) in d.iter().zip(&q) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
            let gf = convolve_direct(&g, &f).unwrap();
            for (a, b) in d.iter().zip(&gf) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
            // Distributivity when g and h share a length.
            let m = g.len().min(h.len());
            let sum: Vec<f64> = g[..m].iter().zip(&h[..m]).map(|(a, b)| a + b).collect();
            let lhs = convolve_direct(&f, &sum).unwrap();
            let r1 = convolve_direct(&f, &g[..m]).unwrap();
            let r2 = convolve_direct(&f, &h[..m]).unwrap();
            for k in 0..lhs.len() {
                prop_assert!((lhs[k] - r1[k] - r2[k]).abs() <= 1e-9);
            }
        }

        #[test]
        fn fft2_roundtrip(seed in any::<u64>(), pr in 0u32..5, pc in 0u32..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let img = Matrix::from_fn(1 << pr, 1 << pc, |_, _| rng.random_range(-3.0..3.0));
            let back = ifft2(&fft2(&img).unwrap()).unwrap();
            for (a, b) in back.re.iter().zip(img.data()) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
            prop_assert!(back.im.iter().all(|v| v.abs() <= 1e-9));
        }
    }
}
