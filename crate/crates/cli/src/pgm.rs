//! ASCII greyscale images (PGM "P2").

use desk_numerics::{Matrix, NumError};

use crate::error::{CliError, CliResult};

pub const MAXVAL: u32 = 255;
const LINE_WIDTH: usize = 70;

/// Rounds each pixel to the nearest integer; pixels must already lie in
/// `[0, 255]`.
pub fn write_pgm(img: &Matrix) -> CliResult<Vec<u8>> {
    let (rows, cols) = img.shape();
    let mut out = format!("P2\n{cols} {rows}\n{MAXVAL}\n");
    let mut line = String::new();
    for &v in img.data() {
        if !v.is_finite() {
            return Err(NumError::NonFinite.into());
        }
        let p = v.round();
        if !(0.0..=MAXVAL as f64).contains(&p) {
            return Err(CliError::MalformedPgm(format!("pixel {v} outside 0..=255")));
        }
        let tok = (p as u32).to_string();
        if !line.is_empty() && line.len() + 1 + tok.len() > LINE_WIDTH {
            out.push_str(&line);
            out.push('\n');
            line.clear();
        }
        if !line.is_empty() {
            line.push(' ');
        }
        line.push_str(&tok);
    }
    out.push_str(&line);
    out.push('\n');
    Ok(out.into_bytes())
}

pub fn read_pgm(bytes: &[u8]) -> CliResult<Matrix> {
    let bad = |m: &str| CliError::MalformedPgm(m.to_string());
    let text = std::str::from_utf8(bytes).map_err(|_| bad("not ASCII"))?;
    let mut tokens = text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace);
    match tokens.next() {
        Some("P2") => {}
        Some(m) => return Err(CliError::MalformedPgm(format!("unsupported magic {m:?}, only P2"))),
        None => return Err(bad("empty file")),
    }
    let mut header = |what: &str| -> CliResult<u32> {
        tokens.next().and_then(|t| t.parse().ok()).ok_or_else(|| CliError::MalformedPgm(format!("bad {what}")))
    };
    let cols = header("width")? as usize;
    let rows = header("height")? as usize;
    let maxval = header("maxval")?;
    if rows == 0 || cols == 0 || maxval == 0 || maxval > 65535 {
        return Err(bad("dimensions and maxval must be positive"));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for t in tokens.by_ref() {
        let v: u32 = t.parse().map_err(|_| CliError::MalformedPgm(format!("bad pixel {t:?}")))?;
        if v > maxval {
            return Err(CliError::MalformedPgm(format!("pixel {v} above maxval {maxval}")));
        }
        data.push(v as f64);
    }
    if data.len() != rows * cols {
        return Err(CliError::MalformedPgm(format!("expected {} pixels, found {}", rows * cols, data.len())));
    }
    Ok(Matrix::new(rows, cols, data)?)
}

/// Min-max scaling to `[0, 255]`; a flat image maps to 0.
pub fn to_grey(m: &Matrix) -> Matrix {
    let lo = m.data().iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = m.data().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    Matrix::from_fn(m.rows(), m.cols(), |i, j| if span > 0.0 { (m[(i, j)] - lo) / span * MAXVAL as f64 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_black_pixel() {
        let img = Matrix::zeros(1, 1);
        assert_eq!(write_pgm(&img).unwrap(), b"P2\n1 1\n255\n0\n");
    }

    #[test]
    fn identity_round_trips() {
        let img = Matrix::identity(2).scale(255.0);
        let bytes = write_pgm(&img).unwrap();
        assert_eq!(bytes, b"P2\n2 2\n255\n255 0 0 255\n");
        assert_eq!(read_pgm(&bytes).unwrap(), img);
    }

    #[test]
    fn rejects_binary_and_broken_files() {
        assert!(matches!(read_pgm(b"P5\n1 1\n255\n\x00"), Err(CliError::MalformedPgm(_))));
        assert!(matches!(read_pgm(b"P2\n2 2\n255\n1 2 3\n"), Err(CliError::MalformedPgm(_))));
        assert!(matches!(read_pgm(b"P2\n1 1\n255\n300\n"), Err(CliError::MalformedPgm(_))));
        assert!(matches!(read_pgm(b""), Err(CliError::MalformedPgm(_))));
        assert!(matches!(write_pgm(&Matrix::from_rows(&[[256.0]]).unwrap()), Err(CliError::MalformedPgm(_))));
    }

    #[test]
    fn comments_are_skipped() {
        let img = read_pgm(b"P2\n# made by hand\n3 1\n255\n1 2 3 # trailing\n").unwrap();
        assert_eq!(img.data(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn grey_scaling() {
        let m = Matrix::from_rows(&[[-1.0, 0.0, 3.0]]).unwrap();
        assert_eq!(to_grey(&m).data(), &[0.0, 63.75, 255.0]);
        assert!(to_grey(&Matrix::zeros(2, 2)).data().iter().all(|&v| v == 0.0));
    }

    proptest! {
        #[test]
        fn integer_images_round_trip(rows in 1usize..12, cols in 1usize..40, seed in any::<u64>()) {
            let img = Matrix::from_fn(rows, cols, |i, j| ((seed >> ((i * cols + j) % 56)) as usize % 256) as f64);
            let bytes = write_pgm(&img).unwrap();
            prop_assert!(std::str::from_utf8(&bytes).unwrap().lines().all(|l| l.len() <= 70));
            prop_assert_eq!(read_pgm(&bytes).unwrap(), img);
        }
    }
}
