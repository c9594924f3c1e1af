//! Exact integer and rational helpers shared by the counters.
//!
//! Every boundary decision in the counting code goes through
//! [`ExactInt::floor_sqrt`] and [`quadratic_interval`], so the counters are
//! generic over the integer type: `i128` when the magnitudes are provably
//! small enough, `BigInt` otherwise.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer arithmetic used by the exact counters.
pub trait ExactInt: Clone + Ord + Integer + Signed + From<i64> {
    /// `⌊√self⌋` for `self ≥ 0`.
    fn floor_sqrt(&self) -> Self;
}

impl ExactInt for i128 {
    fn floor_sqrt(&self) -> Self {
        debug_assert!(*self >= 0);
        let n = *self;
        if n < 2 {
            return n;
        }
        let mut s = (n as f64).sqrt() as i128;
        while s.checked_mul(s).map_or(true, |sq| sq > n) {
            s -= 1;
        }
        while (s + 1).checked_mul(s + 1).is_some_and(|sq| sq <= n) {
            s += 1;
        }
        s
    }
}

impl ExactInt for BigInt {
    fn floor_sqrt(&self) -> Self {
        debug_assert!(!self.is_negative());
        newton_isqrt(self)
    }
}

fn newton_isqrt(n: &BigInt) -> BigInt {
    if n < &BigInt::from(2) {
        return n.clone();
    }
    // 2^ceil(bits/2) is an upper bound; Newton decreases monotonically from above.
    let bits = n.bits();
    let mut x = BigInt::one() << bits.div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Exact `⌊√n⌋` for a nonnegative big integer.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::NegativeInput);
    }
    Ok(n.floor_sqrt())
}

/// Largest integer `s` with `s² ≤ x` for a nonnegative rational `x`.
///
/// Uses `⌊√x⌋ = ⌊√⌊x⌋⌋`, valid for every real `x ≥ 0`.
pub fn rat_floor_sqrt(x: &BigRational) -> Result<BigInt> {
    if x.is_negative() {
        return Err(Error::NegativeInput);
    }
    Ok(x.floor().to_integer().floor_sqrt())
}

/// Integer solutions of `a·x² + 2·h·x + c ≤ 0` for `a > 0`.
///
/// The condition is equivalent to `|a·x + h| ≤ √(h² − a·c)`, and since the
/// left side is an integer the square root may be replaced by its floor.
/// Returns the closed interval `[lo, hi]`, or `None` when empty.
pub fn quadratic_interval<T: ExactInt>(a: &T, h: &T, c: &T) -> Option<(T, T)> {
    debug_assert!(a.is_positive());
    let disc = h.clone() * h.clone() - a.clone() * c.clone();
    if disc.is_negative() {
        return None;
    }
    let s = disc.floor_sqrt();
    let lo = ceil_div(-(h.clone()) - s.clone(), a.clone());
    let hi = (-(h.clone()) + s).div_floor(a);
    if lo > hi {
        return None;
    }
    debug_assert!(endpoints_exact(a, h, c, &lo, &hi));
    Some((lo, hi))
}

fn ceil_div<T: ExactInt>(num: T, den: T) -> T {
    -((-num).div_floor(&den))
}

// Re-substitution check: both endpoints satisfy the inequality and their
// outer neighbours do not.
fn endpoints_exact<T: ExactInt>(a: &T, h: &T, c: &T, lo: &T, hi: &T) -> bool {
    let q = |x: &T| {
        a.clone() * x.clone() * x.clone() + T::from(2) * h.clone() * x.clone() + c.clone()
    };
    let one = T::one();
    !q(lo).is_positive()
        && !q(hi).is_positive()
        && q(&(lo.clone() - one.clone())).is_positive()
        && q(&(hi.clone() + one)).is_positive()
}

/// Parse `"p/q"`, `"p"` or a finite decimal such as `"10.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        return Ok(BigRational::new(num, den));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Exact textual form of a rational: a terminating decimal when the reduced
/// denominator has no prime factors besides 2 and 5, otherwise `"p/q"`.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        return x.numer().to_string();
    }
    let den = x.denom();
    let mut rest = den.clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while rest.is_even() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", x.numer(), x.denom());
    }
    let digits = twos.max(fives);
    let scaled = x * BigRational::from_integer(num_traits::pow(BigInt::from(10), digits));
    let scaled = scaled.to_integer();
    let (sign, mag) = match scaled.sign() {
        Sign::Minus => ("-", -scaled),
        _ => ("", scaled),
    };
    let mut text = mag.to_string();
    if text.len() <= digits {
        text = format!("{}{}", "0".repeat(digits + 1 - text.len()), text);
    }
    let split = text.len() - digits;
    format!("{sign}{}.{}", &text[..split], &text[split..])
}

/// Nearest binary64 value of a rational.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: fall back to a scaled division.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Big integer to binary64 (rounded).
pub fn bigint_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&BigInt::from(0)).unwrap(), BigInt::from(0));
        assert_eq!(isqrt(&BigInt::from(25)).unwrap(), BigInt::from(5));
        assert_eq!(isqrt(&BigInt::from(24)).unwrap(), BigInt::from(4));
        assert!(matches!(isqrt(&BigInt::from(-1)), Err(Error::NegativeInput)));
    }

    #[test]
    fn isqrt_large_perfect_squares() {
        let base: BigInt = "123456789012345678901234567890".parse().unwrap();
        let sq = &base * &base;
        assert_eq!(isqrt(&sq).unwrap(), base);
        assert_eq!(isqrt(&(&sq - 1)).unwrap(), &base - 1);
        assert_eq!(isqrt(&(&sq + 1)).unwrap(), base);
    }

    #[test]
    fn i128_floor_sqrt_near_float_rounding() {
        for k in [3_037_000_499i128, 1 << 40, (1 << 52) + 1, 99_999_999_999] {
            let sq = k * k;
            assert_eq!(sq.floor_sqrt(), k);
            assert_eq!((sq - 1).floor_sqrt(), k - 1);
            assert_eq!((sq + 2 * k).floor_sqrt(), k);
        }
    }

    #[test]
    fn rat_floor_sqrt_examples() {
        assert_eq!(rat_floor_sqrt(&r("25")).unwrap(), BigInt::from(5));
        assert_eq!(rat_floor_sqrt(&r("99/4")).unwrap(), BigInt::from(4));
        assert_eq!(rat_floor_sqrt(&r("1/2")).unwrap(), BigInt::from(0));
        assert!(rat_floor_sqrt(&r("-1/2")).is_err());
    }

    #[test]
    fn quadratic_interval_matches_scan() {
        for a in 1i128..5 {
            for h in -6i128..6 {
                for c in -30i128..5 {
                    let scan: Vec<i128> = (-40..=40)
                        .filter(|x| a * x * x + 2 * h * x + c <= 0)
                        .collect();
                    let got = quadratic_interval(&a, &h, &c);
                    match got {
                        None => assert!(scan.is_empty(), "a={a} h={h} c={c}"),
                        Some((lo, hi)) => {
                            assert_eq!(scan.first(), Some(&lo));
                            assert_eq!(scan.last(), Some(&hi));
                            assert_eq!(scan.len() as i128, hi - lo + 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rational_text_forms() {
        assert_eq!(format_rational(&r("41/4")), "10.25");
        assert_eq!(format_rational(&r("1/3")), "1/3");
        assert_eq!(format_rational(&r("-1/8")), "-0.125");
        assert_eq!(format_rational(&r("7")), "7");
        assert_eq!(r("10.25"), r("41/4"));
        assert_eq!(r("-0.5"), r("-1/2"));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }
}
