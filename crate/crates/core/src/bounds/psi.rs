//! Sawtooth decomposition of the circle count.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{bigint_to_f64, rat_floor_sqrt, rational_to_f64};
use crate::error::{Error, Result};
use crate::exactcount::count_circle;

/// `w − ⌊w⌋ − 1/2 ∈ [−1/2, 1/2)`.
pub fn psi_value(w: f64) -> f64 {
    w - w.floor() - 0.5
}

/// `count = main − 8·psi_sum + residual` for the closed disc of radius² `X²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiDecomposition {
    #[serde(serialize_with = "ser_display")]
    pub count: BigInt,
    pub main: f64,
    pub psi_sum: f64,
    pub residual: f64,
}

fn ser_display<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `ψ(√r)` with the integer part of `√r` decided exactly.
fn psi_of_sqrt(r: &BigRational) -> Result<f64> {
    let ip = rat_floor_sqrt(r)?;
    let ip_sq = BigRational::from_integer(&ip * &ip);
    // √r − ⌊√r⌋ = (r − ⌊√r⌋²)/(√r + ⌊√r⌋), free of cancellation.
    let gap = rational_to_f64(&(r - ip_sq));
    let ip_f = bigint_to_f64(&ip);
    let denom = rational_to_f64(r).sqrt() + ip_f;
    let frac = if denom == 0.0 { 0.0 } else { gap / denom };
    Ok(frac.clamp(0.0, 1.0 - f64::EPSILON) - 0.5)
}

/// Splits the circle count into `πX²`, the sawtooth sum over
/// `0 < n ≤ X/√2` of `ψ(√(X² − n²))`, and the residual, which stays within 5.
pub fn circle_psi_decomposition(x_sq: &BigRational) -> Result<PsiDecomposition> {
    if !x_sq.is_positive() {
        return Err(Error::NonpositiveInput);
    }
    let count = count_circle(x_sq)?;
    let main = PI * rational_to_f64(x_sq);
    let mut psi_sum = 0.0;
    let mut n = BigInt::from(1);
    loop {
        let n_sq = BigRational::from_integer(&n * &n);
        // n ≤ X/√2 ⟺ 2n² ≤ X².
        if &n_sq + &n_sq > *x_sq {
            break;
        }
        let rest = x_sq - &n_sq;
        debug_assert!(!rest.is_zero());
        psi_sum += psi_of_sqrt(&rest)?;
        n += 1;
    }
    let residual = bigint_to_f64(&count) - main + 8.0 * psi_sum;
    Ok(PsiDecomposition { count, main, psi_sum, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_rational;

    #[test]
    fn psi_examples() {
        assert_eq!(psi_value(0.0), -0.5);
        assert_eq!(psi_value(0.75), 0.25);
        assert_eq!(psi_value(-0.25), 0.25);
    }

    #[test]
    fn decomposition_examples() {
        let d = circle_psi_decomposition(&parse_rational("25").unwrap()).unwrap();
        assert_eq!(d.count, BigInt::from(81));
        assert!((d.main - 25.0 * PI).abs() < 1e-12);
        assert!(d.residual.abs() <= 5.0);
        let d = circle_psi_decomposition(&parse_rational("2").unwrap()).unwrap();
        assert!(d.residual.abs() <= 5.0);
        assert!(circle_psi_decomposition(&parse_rational("0").unwrap()).is_err());
    }

    #[test]
    fn exact_integer_part_at_perfect_squares() {
        // √(25 − 9) = 4 exactly: ψ must see fractional part 0, not 0.999….
        assert_eq!(psi_of_sqrt(&parse_rational("16").unwrap()).unwrap(), -0.5);
        let below = psi_of_sqrt(&parse_rational("15.99999999999999").unwrap()).unwrap();
        assert!(below > 0.49);
    }

    #[test]
    fn residual_by_brute_sum() {
        // Independent evaluation: count from the defining sum over n.
        for k in 1..=400u32 {
            let x_sq = BigRational::new(BigInt::from(k), BigInt::from(4));
            let d = circle_psi_decomposition(&x_sq).unwrap();
            let xf = k as f64 / 4.0;
            let mut count = 0i64;
            let r = xf.sqrt().ceil() as i64 + 1;
            for a in -r..=r {
                for b in -r..=r {
                    if ((a * a + b * b) as f64) <= xf {
                        count += 1;
                    }
                }
            }
            assert_eq!(d.count, BigInt::from(count));
            assert!(d.residual.abs() <= 5.0, "X²={xf}: {}", d.residual);
        }
    }
}
