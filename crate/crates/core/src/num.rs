//! Scalar traits shared by the numeric modules.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num};

/// Floating point scalar used by the floor-field, dynamics and engine code.
pub trait Real: Float + FloatConst + FromPrimitive + Default + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Widens to `f64` for reporting.
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ring-like scalar for the symmetry tables. Integers and rationals keep
/// every operation exact; floats work too.
pub trait Exact: Num + Copy + Neg<Output = Self> + PartialEq + Debug + Send + Sync {
    fn from_sign(s: i8) -> Self {
        match s {
            1 => Self::one(),
            -1 => -Self::one(),
            0 => Self::zero(),
            _ => unreachable!("table entries are -1, 0 or 1"),
        }
    }

    fn four() -> Self {
        let two = Self::one() + Self::one();
        two + two
    }
}

impl<T> Exact for T where T: Num + Copy + Neg<Output = T> + PartialEq + Debug + Send + Sync {}

/// Formats a value with six significant digits, `%g` style: trailing zeros
/// are dropped and scientific notation is used outside `1e-5 ..= 1e6`.
pub fn fmt_sig<T: Into<f64>>(value: T) -> String {
    fmt_sig_digits(value.into(), 6)
}

pub fn fmt_sig_digits(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    if x == 0.0 {
        return "0".to_owned();
    }
    let precision = digits.max(1) - 1;
    let sci = format!("{:.*e}", precision, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (precision as i32 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_owned()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-0.5), "-0.5");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333");
        assert_eq!(fmt_sig(2.0f64.sqrt() * 1.5), "2.12132");
        assert_eq!(fmt_sig(123456.7), "123457");
        assert_eq!(fmt_sig(999999.7), "1e+06");
        assert_eq!(fmt_sig(1.0e-7), "1e-07");
        assert_eq!(fmt_sig(0.000123456789), "0.000123457");
        assert_eq!(fmt_sig(3466.27), "3466.27");
    }

    #[test]
    fn exact_signs() {
        assert_eq!(<i64 as Exact>::from_sign(-1), -1);
        assert_eq!(<i64 as Exact>::four(), 4);
    }
}
