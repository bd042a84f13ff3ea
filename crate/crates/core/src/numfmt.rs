//! Exact decimal text for rationals and fixed-width float formatting.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `123`, `-1.25`, `6.02e23` or `7/3` into an exact rational.
pub(crate) fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad numerator in `{s}`")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::parse(n.len() + 1, format!("bad denominator in `{s}`")))?;
        if den.is_zero() {
            return Err(Error::parse(n.len() + 1, "zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad exponent in `{s}`")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::parse(0, format!("no digits in `{s}`")));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(0, format!("not a decimal number: `{s}`")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let magnitude: BigUint = if all.is_empty() {
        BigUint::zero()
    } else {
        all.parse().map_err(|_| Error::parse(0, format!("bad digits in `{s}`")))?
    };
    let scale = exponent - frac_part.len() as i64;
    let ten = BigUint::from(10u32);
    let mut value = if scale >= 0 {
        BigRational::from_integer(BigInt::from_biguint(Sign::Plus, magnitude * ten.pow(scale as u32)))
    } else {
        BigRational::new(
            BigInt::from_biguint(Sign::Plus, magnitude),
            BigInt::from_biguint(Sign::Plus, ten.pow((-scale) as u32)),
        )
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Exact text for a rational: a terminating decimal when one exists, `n/d` otherwise.
pub(crate) fn format_rational(value: &BigRational) -> String {
    let den = value.denom().magnitude().clone();
    let two = BigUint::from(2u32);
    let five = BigUint::from(5u32);
    let (mut rest, mut twos, mut fives) = (den.clone(), 0u32, 0u32);
    while rest.is_even() && !rest.is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    if places == 0 {
        return value.numer().to_string();
    }
    let scaled = value.numer().magnitude() * BigUint::from(10u32).pow(places) / den;
    let mut digits = scaled.to_string();
    if digits.len() <= places as usize {
        digits = format!("{}{}", "0".repeat(places as usize + 1 - digits.len()), digits);
    }
    let split = digits.len() - places as usize;
    let sign = if value.numer().sign() == Sign::Minus { "-" } else { "" };
    format!("{sign}{}.{}", &digits[..split], &digits[split..])
}

/// Natural logarithm of a positive big integer, without overflow.
pub(crate) fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational.
pub(crate) fn ln_rational(r: &BigRational) -> f64 {
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

/// Exact rational value of a finite float.
pub(crate) fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Seventeen significant digits in scientific notation; the fixed report format.
pub(crate) fn sci17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Pretty JSON formatter that writes every float with [`sci17`].
///
/// serde_json turns non-finite floats into `null` before they reach it.
pub(crate) struct Sci17Formatter(serde_json::ser::PrettyFormatter<'static>);

impl Sci17Formatter {
    pub(crate) fn new() -> Self {
        Sci17Formatter(serde_json::ser::PrettyFormatter::with_indent(b"  "))
    }
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + std::io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> std::io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl serde_json::ser::Formatter for Sci17Formatter {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(sci17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// Serializes a value as indented JSON with fixed float formatting and a trailing newline.
pub(crate) fn to_json_sci17<T: serde::Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sci17Formatter::new());
    value
        .serialize(&mut ser)
        .expect("serializing an in-memory report cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}
