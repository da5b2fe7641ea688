//! Exact rational helpers on top of [`num_rational::BigRational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.35"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(whole * &scale + frac_num, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Closest rational to `x` with denominator at most `max_den` (continued-fraction
/// best approximation of the exact binary value of `x`).
pub fn limit_denominator(x: f64, max_den: u64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("cannot approximate non-finite {x}")));
    }
    if max_den == 0 {
        return Err(Error::invalid("max_den must be >= 1"));
    }
    let exact = Rational::from_float(x).expect("finite float");
    let max_den = BigInt::from(max_den);
    if exact.denom() <= &max_den {
        return Ok(exact);
    }
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (exact.numer().clone(), exact.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    let k = (&max_den - &q0).div_floor(&q1);
    let bound1 = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let bound2 = Rational::new(p1, q1);
    if (&bound2 - &exact).abs() <= (&bound1 - &exact).abs() {
        Ok(bound2)
    } else {
        Ok(bound1)
    }
}

/// `p/q` with a trailing decimal rendering, e.g. `13/84 (0.154762)`.
pub fn describe(r: &Rational) -> String {
    format!("{r} ({:.6})", to_f64(r))
}
