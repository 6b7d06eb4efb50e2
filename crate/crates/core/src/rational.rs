//! Exact rational scalars and points.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used throughout the kernel.
pub type Rat = BigRational;

/// Builds a rational from a small integer.
pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Builds `num / den`. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion for rendering and logging only.
pub fn to_f64(v: &Rat) -> f64 {
    match v.to_f64() {
        Some(f) if f.is_finite() => f,
        _ => {
            // numerator/denominator too wide for a direct conversion
            let n = v.numer().to_f64().unwrap_or(f64::NAN);
            let d = v.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Sign of a rational as -1, 0 or +1.
pub fn sign(v: &Rat) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// The rational with the smallest denominator strictly between `lo` and
/// `hi`, for `lo < hi`.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo < hi, "empty interval");
    let fl = lo.floor();
    let next = &fl + Rat::one();
    if &next < hi {
        return next;
    }
    // both ends lie in [fl, fl + 1]
    let (a, b) = (lo - &fl, hi - &fl);
    let inner = if a.is_zero() {
        (Rat::one() / b).floor() + Rat::one()
    } else {
        simplest_between(&(Rat::one() / b), &(Rat::one() / a))
    };
    fl + Rat::one() / inner
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRatError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `"a"` or `"a/b"` with integer `a`, `b`; rejects `b = 0`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(n).map_err(|_| ParseRatError::Malformed(s.to_string()))?;
    let den = BigInt::from_str(d).map_err(|_| ParseRatError::Malformed(s.to_string()))?;
    if den.is_zero() {
        return Err(ParseRatError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(num, den))
}

/// Canonical text form: `"a"` for integers, `"a/b"` otherwise.
pub fn format_rat(v: &Rat) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// A point with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Point::new(Rat::zero(), Rat::zero())
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, s: &Rat) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }

    pub fn dot(&self, o: &Point) -> Rat {
        &self.x * &o.x + &self.y * &o.y
    }

    /// z-component of the 2-D cross product `self × o`.
    pub fn cross(&self, o: &Point) -> Rat {
        &self.x * &o.y - &self.y * &o.x
    }

    /// Counterclockwise quarter turn.
    pub fn perp(&self) -> Point {
        Point::new(-&self.y, self.x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rat(&self.x), format_rat(&self.y))
    }
}
