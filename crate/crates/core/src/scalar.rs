//! Exact scalars of the tropical semifield `T = Q ∪ {−∞}`.
//!
//! Tropical addition is `max`, tropical multiplication is rational addition.
//! The bottom element `−∞` is the additive identity and absorbs under
//! multiplication; the rational `0` is the multiplicative unit.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Signed, Zero};
use thiserror::Error;

/// Exact rational number used everywhere in the crate.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct RationalParseError(pub String);

/// Build a rational from an integer.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Build the rational `num/den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `p`, `-p`, `p/q` or `-p/q`.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let t = text.trim();
    let err = || RationalParseError(text.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(err());
    }
    let n = BigInt::from_str(num.trim_start_matches('+')).map_err(|_| err())?;
    let d = BigInt::from_str(den).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: integers bare, everything else as `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact decimal rendering rounded half away from zero to `places` digits.
pub fn format_decimal(q: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = q * Rational::from_integer(scale.clone());
    let half = ratio(1, 2);
    let rounded = if scaled.is_negative() {
        -((-scaled) + half).floor()
    } else {
        (scaled + half).floor()
    };
    let n = rounded.to_integer();
    let neg = n.is_negative();
    let abs = n.abs();
    let int_part = &abs / &scale;
    let frac_part = &abs % &scale;
    let sign = if neg && !abs.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = format!("{:0>width$}", frac_part.to_string(), width = places as usize);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// An element of the tropical semifield: a rational or bottom (−∞).
///
/// The derived order puts bottom below every rational, which is exactly the
/// order induced by tropical addition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TropScalar(Option<Rational>);

impl TropScalar {
    pub fn bottom() -> Self {
        TropScalar(None)
    }

    /// The multiplicative unit `1_T`, i.e. the rational 0.
    pub fn unit() -> Self {
        TropScalar(Some(Rational::zero()))
    }

    pub fn finite(q: Rational) -> Self {
        TropScalar(Some(q))
    }

    pub fn from_int(v: i64) -> Self {
        TropScalar(Some(int(v)))
    }

    pub fn is_bottom(&self) -> bool {
        self.0.is_none()
    }

    pub fn value(&self) -> Option<&Rational> {
        self.0.as_ref()
    }

    pub fn into_value(self) -> Option<Rational> {
        self.0
    }

    /// Tropical sum: `max(a, b)`.
    pub fn add(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Tropical product: rational sum, bottom absorbing.
    pub fn mul(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Some(a), Some(b)) => TropScalar(Some(a + b)),
            _ => TropScalar(None),
        }
    }

    /// Multiplicative inverse; `None` for bottom.
    pub fn inv(&self) -> Option<Self> {
        self.0.as_ref().map(|a| TropScalar(Some(-a)))
    }

    /// Is this the Boolean sub-semifield `{−∞, 0}`?
    pub fn is_boolean(&self) -> bool {
        self.0.as_ref().is_none_or(|q| q.is_zero())
    }
}

impl From<Rational> for TropScalar {
    fn from(q: Rational) -> Self {
        TropScalar(Some(q))
    }
}

impl fmt::Display for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            None => f.write_str("-inf"),
            Some(q) => f.write_str(&format_rational(q)),
        }
    }
}

impl FromStr for TropScalar {
    type Err = RationalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "-inf" {
            Ok(TropScalar::bottom())
        } else {
            parse_rational(s).map(TropScalar::finite)
        }
    }
}

/// Tropical sum of two scalars.
pub fn scalar_add(a: &TropScalar, b: &TropScalar) -> TropScalar {
    a.add(b)
}

/// Tropical product of two scalars.
pub fn scalar_mul(a: &TropScalar, b: &TropScalar) -> TropScalar {
    a.mul(b)
}
