//! Dense complex matrices and their plain-text serialization.
//!
//! Text format: the first line holds `rows cols`; each following line holds one
//! row of whitespace-separated entries. An entry is either a real number (`-0.5`)
//! or a complex number written `re+imi` / `re-imi` (`0+1i`, `-0.5-2i`). A bare
//! imaginary `imi` is accepted as well. Blank lines and lines starting with `#`
//! are skipped.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{shape, Error, Result};

/// Dense row-major matrix of complex doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// length mismatches and non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(shape(
                "new",
                format!("{rows}x{cols} has an empty dimension"),
            ));
        }
        let len = rows.checked_mul(cols).ok_or(Error::Sizing { rows, cols })?;
        if data.len() != len {
            return Err(shape(
                "new",
                format!("{rows}x{cols} needs {len} entries, got {}", data.len()),
            ));
        }
        if let Some(k) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Real-valued convenience constructor from nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(shape("from_real_rows", "ragged rows"));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(shape("from_rows", "ragged rows"));
        }
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(rows.len(), cols, data)
    }

    /// Zero matrix, failing instead of aborting when the allocation is too large.
    pub fn try_zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(shape(
                "zeros",
                format!("{rows}x{cols} has an empty dimension"),
            ));
        }
        let len = rows.checked_mul(cols).ok_or(Error::Sizing { rows, cols })?;
        let bytes = len
            .checked_mul(std::mem::size_of::<Complex64>())
            .ok_or(Error::Sizing { rows, cols })?;
        let mut data = Vec::new();
        data.try_reserve_exact(len)
            .map_err(|_| Error::Allocation { bytes })?;
        data.resize(len, Complex64::new(0.0, 0.0));
        Ok(Self { rows, cols, data })
    }

    /// # Panics
    /// On an empty shape or when the entry count overflows `usize`.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::try_zeros(rows, cols).expect("valid matrix shape")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::try_zeros(n, n)?;
        for (i, &d) in diag.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::NonFinite { row: i, col: i });
            }
            m.data[i * n + i] = d;
        }
        Ok(m)
    }

    /// Crate-internal constructor for buffers already known to be well formed.
    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    /// # Panics
    /// If `value` is not finite or the index is out of bounds.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(value.is_finite(), "matrix entries must be finite");
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.shape() != other.shape() {
            return Err(shape(
                "distance",
                format!("{:?} vs {:?}", self.shape(), other.shape()),
            ));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.shape() != other.shape() {
            return Err(shape(
                "max_abs_diff",
                format!("{:?} vs {:?}", self.shape(), other.shape()),
            ));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let want = if r == c { 1.0 } else { 0.0 };
                    (self.get(r, c) - want).norm() <= tol
                })
            })
    }

    /// Serializes to the text format with shortest round-trip decimals.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|&z| format_entry(z)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        parse_text(text)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for ComplexMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_text(s)
    }
}

fn format_real(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Formats one entry. A `+0.0` imaginary part is omitted; `-0.0` is kept so the
/// round trip is bitwise.
pub fn format_entry(z: Complex64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        return format_real(z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", format_real(z.re), sign, format_real(z.im.abs()))
}

/// Parses one entry of the text format.
pub fn parse_entry(token: &str) -> std::result::Result<Complex64, String> {
    let bad = || format!("malformed entry `{token}`");
    let Some(body) = token.strip_suffix('i') else {
        return token
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // The split point is the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            let im_text = &body[k..];
            let im = match im_text {
                "+" => 1.0,
                "-" => -1.0,
                _ => im_text.parse::<f64>().map_err(|_| bad())?,
            };
            (re, im)
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => body.parse::<f64>().map_err(|_| bad())?,
            };
            (0.0, im)
        }
    };
    let z = Complex64::new(re, im);
    if !z.is_finite() {
        return Err(format!("non-finite entry `{token}`"));
    }
    Ok(z)
}

fn parse_text(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });

    let err = |line, column, message: String| Error::Parse {
        line,
        column,
        message,
    };

    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(1, 1, "empty input; expected `rows cols` header".into()))?;
    let dims: Vec<(usize, &str)> = tokens(header).collect();
    if dims.len() != 2 {
        return Err(err(hline, 1, "header must be `rows cols`".into()));
    }
    let parse_dim = |(col, tok): (usize, &str)| {
        tok.parse::<usize>()
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| err(hline, col, format!("invalid dimension `{tok}`")))
    };
    let rows = parse_dim(dims[0])?;
    let cols = parse_dim(dims[1])?;
    let len = rows.checked_mul(cols).ok_or(Error::Sizing { rows, cols })?;

    let mut data = Vec::new();
    data.try_reserve_exact(len).map_err(|_| Error::Allocation {
        bytes: len.saturating_mul(16),
    })?;
    let mut last_line = hline;
    for r in 0..rows {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| err(last_line + 1, 1, format!("expected {rows} rows, found {r}")))?;
        last_line = lno;
        let mut count = 0;
        for (col, tok) in tokens(line) {
            if count == cols {
                return Err(err(lno, col, format!("too many entries; expected {cols}")));
            }
            data.push(parse_entry(tok).map_err(|m| err(lno, col, m))?);
            count += 1;
        }
        if count != cols {
            return Err(err(
                lno,
                line.chars().count() + 1,
                format!("expected {cols} entries, found {count}"),
            ));
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(err(lno, 1, format!("trailing data after {rows} rows")));
    }
    ComplexMatrix::new(rows, cols, data)
}

/// Whitespace-separated tokens with their 1-based character column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut col_of_start = 0;
    for (col, (idx, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => {
                start = Some(idx);
                col_of_start = col + 1;
            }
            (true, Some(s)) => {
                out.push((col_of_start, &line[s..idx]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((col_of_start, &line[s..]));
    }
    out.into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]),
            Err(Error::Shape { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(0, 2, vec![]),
            Err(Error::Shape { .. })
        ));
        assert_eq!(
            ComplexMatrix::new(1, 2, vec![c(0.0, 0.0), c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        );
    }

    #[test]
    fn parses_entry_forms() {
        assert_eq!(parse_entry("0+1i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_entry("-0.5-2i").unwrap(), c(-0.5, -2.0));
        assert_eq!(parse_entry("3").unwrap(), c(3.0, 0.0));
        assert_eq!(parse_entry("1e-3+2E-5i").unwrap(), c(1e-3, 2e-5));
        assert_eq!(parse_entry("-2.5e+3-1e-2i").unwrap(), c(-2500.0, -0.01));
        assert_eq!(parse_entry("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_entry("4.5i").unwrap(), c(0.0, 4.5));
        assert!(parse_entry("1+").is_err());
        assert!(parse_entry("abc").is_err());
        assert!(parse_entry("1+2j").is_err());
    }

    #[test]
    fn parses_matrix_and_reports_location() {
        let m: ComplexMatrix = "2 2\n0 1\n1 0+0i\n".parse().unwrap();
        assert_eq!(m.get(0, 1), c(1.0, 0.0));
        assert_eq!(m.shape(), (2, 2));

        match ComplexMatrix::from_text("2 2\n0 1\n1 x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match ComplexMatrix::from_text("2 2\n0 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(ComplexMatrix::from_text("2 2\n0 1 2\n1 0\n").is_err());
        assert!(ComplexMatrix::from_text("0 2\n").is_err());
    }

    #[test]
    fn negative_zero_survives_text() {
        let m = ComplexMatrix::new(1, 2, vec![c(-0.0, -0.0), c(1e-300, 1e300)]).unwrap();
        let back = ComplexMatrix::from_text(&m.to_text()).unwrap();
        for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}
