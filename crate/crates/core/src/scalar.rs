//! Scalar backends.
//!
//! Two backends share one trait: [`Exact`] is a Gaussian rational (a complex
//! number whose real and imaginary parts are arbitrary-precision rationals) and
//! [`Float`] is a double-precision complex number. Everything above this module
//! is generic over [`Scalar`], so the same code path assembles matrices for
//! both; only rank, Hermiticity and semidefiniteness tests dispatch on the
//! backend.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Matrix;

pub type Exact = Complex<BigRational>;
pub type Float = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Parse(format!("unknown backend {other:?}"))),
        }
    }
}

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    const BACKEND: Backend;

    fn conj(&self) -> Self;
    /// Real part, as a scalar with zero imaginary part.
    fn re(&self) -> Self;
    /// Imaginary part, as a scalar with zero imaginary part.
    fn im(&self) -> Self;
    fn imag_unit() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn is_real(&self) -> bool;

    /// `|x|^2` as a real scalar.
    fn norm_sqr(&self) -> Self {
        (self.clone() * self.conj()).re()
    }

    /// Rank of a matrix. The tolerance is relative to the largest singular
    /// value and is ignored by the exact backend.
    fn rank(m: &Matrix<Self>, tol: Option<f64>) -> usize;
    fn is_hermitian(m: &Matrix<Self>) -> bool;
    fn is_psd(m: &Matrix<Self>) -> bool;
}

impl Scalar for Exact {
    const BACKEND: Backend = Backend::Exact;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn re(&self) -> Self {
        Complex::new(self.re.clone(), BigRational::zero())
    }

    fn im(&self) -> Self {
        Complex::new(self.im.clone(), BigRational::zero())
    }

    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    fn rank(m: &Matrix<Self>, _tol: Option<f64>) -> usize {
        linalg::exact_rank(m)
    }

    fn is_hermitian(m: &Matrix<Self>) -> bool {
        m.rows() == m.cols() && *m == m.conj_transpose()
    }

    fn is_psd(m: &Matrix<Self>) -> bool {
        linalg::exact_is_psd(m)
    }
}

impl Scalar for Float {
    const BACKEND: Backend = Backend::Float;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn re(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }

    fn im(&self) -> Self {
        Complex64::new(self.im, 0.0)
    }

    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn is_real(&self) -> bool {
        self.im == 0.0
    }

    fn rank(m: &Matrix<Self>, tol: Option<f64>) -> usize {
        let tol = tol.unwrap_or_else(|| default_float_tol(m.rows().max(m.cols())));
        linalg::float_rank(m, tol)
    }

    fn is_hermitian(m: &Matrix<Self>) -> bool {
        if m.rows() != m.cols() {
            return false;
        }
        let scale = m.max_abs();
        let tol = 1e-12 * scale;
        (0..m.rows()).all(|i| (i..m.cols()).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= tol))
    }

    fn is_psd(m: &Matrix<Self>) -> bool {
        linalg::float_is_psd(m)
    }
}

/// Default relative rank threshold for an `n`-dimensional problem: `n * 2^-40`.
pub fn default_float_tol(n: usize) -> f64 {
    n as f64 * 2f64.powi(-40)
}

/// Shorthand for a double-precision complex number.
pub fn c(re: f64, im: f64) -> Float {
    Complex64::new(re, im)
}

/// Shorthand for an exact Gaussian integer `re + i im`.
pub fn gi(re: i64, im: i64) -> Exact {
    Complex::new(
        BigRational::from_integer(re.into()),
        BigRational::from_integer(im.into()),
    )
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn real_exact(r: BigRational) -> Exact {
    Complex::new(r, BigRational::zero())
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Ok(p) = s.parse::<BigInt>() {
        return Ok(BigRational::from_integer(p));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (
            &s[..pos],
            s[pos + 1..].parse::<i32>().map_err(|_| bad())?,
        ),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').ok_or_else(bad)?;
    let negative = int_part.starts_with('-');
    let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if negative {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Canonical text for a rational: `"p"` for integers, `"p/q"` otherwise, always reduced.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Canonical 17-significant-digit text for a float, with a signed exponent.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    }
}

pub fn abs_rational(r: &BigRational) -> BigRational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), rational(-7, 1));
        assert_eq!(parse_rational("-0.125").unwrap(), rational(-1, 8));
        assert_eq!(parse_rational("2.5e1").unwrap(), rational(25, 1));
        assert_eq!(parse_rational("1.5E-1").unwrap(), rational(3, 20));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn exact_arithmetic_closes() {
        let a = gi(1, 2);
        let b = gi(3, -1);
        let prod = a.clone() * b.clone();
        assert_eq!(prod, gi(5, 5));
        let quotient = prod / b;
        assert_eq!(quotient, a);
        assert_eq!(Scalar::conj(&gi(1, 2)), gi(1, -2));
        assert_eq!(Scalar::norm_sqr(&gi(3, 4)), gi(25, 0));
    }

    #[test]
    fn canonical_formats() {
        assert_eq!(format_rational(&rational(4, 8)), "1/2");
        assert_eq!(format_rational(&rational(86528, 1)), "86528");
        assert_eq!(format_float(1.0), "1.0000000000000000e+0");
        assert_eq!(format_float(0.0), "0.0000000000000000e+0");
        assert_eq!(format_float(-0.5), "-5.0000000000000000e-1");
        // 17 significant digits expose the nearest double
        assert_eq!(format_float(-2.5e-7), "-2.4999999999999999e-7");
        assert_eq!(format_float(1e300), "1.0000000000000001e+300");
    }
}
