//! Exact lattice-point counters.
//!
//! Every counter reduces to counting integers in intervals cut out by
//! integer quadratics, so all boundary decisions are exact (closed bodies,
//! `Q(k) ≤ T`). Each counter picks `i128` arithmetic when a magnitude bound
//! on every intermediate value fits, and falls back to `BigInt` otherwise.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{bigint_to_f64, quadratic_interval, rational_to_f64, ExactInt};
use crate::error::{Error, Result};
use crate::forms::{eval_i128, odometer_step, to_i128_matrix, Dimension, QuadraticForm};
use crate::profiles::RevolutionProfile;

// Headroom below i128::MAX for sums of a few terms of the estimated size.
const I128_SAFE_BITS: u64 = 122;

/// Volume of the unit body as `π · pi_multiple / √det`.
///
/// Kept symbolic so the main term is computed from exact data in one
/// floating step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Volume {
    pub dim: Dimension,
    #[serde(serialize_with = "ser_rational")]
    pub pi_multiple: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub det: BigRational,
}

impl Volume {
    pub fn disc(det: BigRational) -> Self {
        Volume { dim: Dimension::Two, pi_multiple: BigRational::one(), det }
    }

    pub fn ball(det: BigRational) -> Self {
        Volume {
            dim: Dimension::Three,
            pi_multiple: BigRational::new(BigInt::from(4), BigInt::from(3)),
            det,
        }
    }

    pub fn of_form(form: &QuadraticForm) -> Self {
        match form.dim() {
            Dimension::Two => Volume::disc(form.det().clone()),
            Dimension::Three => Volume::ball(form.det().clone()),
        }
    }

    pub fn coefficient(&self) -> f64 {
        PI * rational_to_f64(&self.pi_multiple) / rational_to_f64(&self.det).sqrt()
    }

    /// `vol(K) · t^dim`.
    pub fn main_term(&self, t: &BigRational) -> f64 {
        let power = num_traits::pow(t.clone(), self.dim.get());
        let exact = &self.pi_multiple * power;
        PI * rational_to_f64(&exact) / rational_to_f64(&self.det).sqrt()
    }
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::arith::format_rational(x))
}

/// Exact count at one dilation together with its main term and lattice rest.
#[derive(Clone, Debug, PartialEq)]
pub struct CountResult {
    pub t: BigRational,
    pub t_sq: BigRational,
    pub count: BigInt,
    pub volume: Volume,
    pub main_term: f64,
    pub discrepancy: f64,
}

impl CountResult {
    pub fn new(t: BigRational, count: BigInt, volume: Volume) -> Self {
        let main_term = volume.main_term(&t);
        let discrepancy = bigint_to_f64(&count) - main_term;
        let t_sq = &t * &t;
        CountResult { t, t_sq, count, volume, main_term, discrepancy }
    }
}

fn fits_i128(bits: u64) -> bool {
    bits <= I128_SAFE_BITS
}

fn circle_count_int<T: ExactInt>(n: &T) -> T {
    if n.is_negative() {
        return T::zero();
    }
    let two = T::from(2);
    let r = n.floor_sqrt();
    let mut total = two.clone() * r.clone() + T::one();
    let mut x = T::one();
    while x <= r {
        let rest = n.clone() - x.clone() * x.clone();
        total = total + two.clone() * (two.clone() * rest.floor_sqrt() + T::one());
        x = x + T::one();
    }
    total
}

/// `#{(n₁,n₂) ∈ Z² : n₁² + n₂² ≤ N}` for an integer threshold.
fn circle_count_bigint(n: &BigInt) -> BigInt {
    if fits_i128(n.bits() + 2) {
        BigInt::from(circle_count_int(&n.to_i128().expect("checked width")))
    } else {
        circle_count_int(n)
    }
}

/// Lattice points in the closed disc `n₁² + n₂² ≤ X²`.
pub fn count_circle(x_sq: &BigRational) -> Result<BigInt> {
    if x_sq.is_negative() {
        return Err(Error::NegativeInput);
    }
    Ok(circle_count_bigint(&x_sq.floor().to_integer()))
}

/// Lattice points in the closed ball `‖m‖² ≤ t²`, by circular slices.
pub fn count_ball(t_sq: &BigRational) -> Result<BigInt> {
    if t_sq.is_negative() {
        return Err(Error::NegativeInput);
    }
    let n = t_sq.floor().to_integer();
    if fits_i128(n.bits() + 2) {
        let n = n.to_i128().expect("checked width");
        Ok(BigInt::from(ball_count_int(&n)))
    } else {
        Ok(ball_count_int(&n))
    }
}

fn ball_count_int<T: ExactInt>(n: &T) -> T {
    let two = T::from(2);
    let r = n.floor_sqrt();
    let mut total = circle_count_int(n);
    let mut m = T::one();
    while m <= r {
        total = total + two.clone() * circle_count_int(&(n.clone() - m.clone() * m.clone()));
        m = m + T::one();
    }
    total
}

/// Lattice points with `Q(n₁,n₂) ≤ T` for a binary form.
pub fn count_ellipse(form: &QuadraticForm, threshold: &BigRational) -> Result<BigInt> {
    expect_dim(form, Dimension::Two)?;
    if threshold.is_negative() {
        return Err(Error::NegativeInput);
    }
    let (b, scale) = form.integer_scaled();
    let s = (threshold * BigRational::from_integer(scale)).floor().to_integer();
    let bits = magnitude_bits(&b, &s);
    if fits_i128(bits) {
        let b: Vec<Vec<i128>> = to_i128_matrix(&b);
        let s = s.to_i128().expect("checked width");
        Ok(BigInt::from(ellipse_count(&b, &s)))
    } else {
        Ok(ellipse_count(&b, &s))
    }
}

fn ellipse_count<T: ExactInt>(b: &[Vec<T>], s: &T) -> T {
    let det = b[0][0].clone() * b[1][1].clone() - b[0][1].clone() * b[0][1].clone();
    let Some((lo, hi)) = quadratic_interval(&det, &T::zero(), &-(b[1][1].clone() * s.clone()))
    else {
        return T::zero();
    };
    let mut total = T::zero();
    let mut x = lo;
    while x <= hi {
        let h = b[0][1].clone() * x.clone();
        let c = b[0][0].clone() * x.clone() * x.clone() - s.clone();
        if let Some((ylo, yhi)) = quadratic_interval(&b[1][1], &h, &c) {
            total = total + yhi - ylo + T::one();
        }
        x = x + T::one();
    }
    total
}

/// Lattice points with `Q(k) ≤ T` for a ternary form.
///
/// Slices along the last coordinate `m`; for each `(m, n₁)` the admissible
/// `n₂` form an interval bounded by the roots of an integer quadratic.
pub fn count_ellipsoid(form: &QuadraticForm, threshold: &BigRational) -> Result<BigInt> {
    expect_dim(form, Dimension::Three)?;
    if threshold.is_negative() {
        return Err(Error::NegativeInput);
    }
    let (b, scale) = form.integer_scaled();
    let s = (threshold * BigRational::from_integer(scale)).floor().to_integer();
    let bits = magnitude_bits(&b, &s);
    if fits_i128(bits) {
        let b: Vec<Vec<i128>> = to_i128_matrix(&b);
        let s = s.to_i128().expect("checked width");
        Ok(BigInt::from(ellipsoid_count(&b, &s)))
    } else {
        Ok(ellipsoid_count(&b, &s))
    }
}

fn ellipsoid_count<T: ExactInt>(b: &[Vec<T>], s: &T) -> T {
    let e = |i: usize, j: usize| b[i][j].clone();
    let det2 = e(0, 0) * e(1, 1) - e(0, 1) * e(0, 1);
    // Coefficients of the n₁-range as a function of m:
    //   det2·x² + 2·(hx·m)·x + (cx·m² − b22·S) ≤ 0
    let hx = e(1, 1) * e(0, 2) - e(0, 1) * e(1, 2);
    let cx = e(1, 1) * e(2, 2) - e(1, 2) * e(1, 2);
    let b22_s = e(1, 1) * s.clone();
    // m-range: (det2·cx − hx²)·m² ≤ det2·b22·S
    let am = det2.clone() * cx.clone() - hx.clone() * hx.clone();
    let Some((mlo, mhi)) = quadratic_interval(&am, &T::zero(), &-(det2.clone() * b22_s.clone()))
    else {
        return T::zero();
    };
    let mut total = T::zero();
    let mut m = mlo;
    while m <= mhi {
        let h = hx.clone() * m.clone();
        let c = cx.clone() * m.clone() * m.clone() - b22_s.clone();
        if let Some((xlo, xhi)) = quadratic_interval(&det2, &h, &c) {
            let lin = e(1, 2) * m.clone();
            let constant = e(2, 2) * m.clone() * m.clone() - s.clone();
            let cross = T::from(2) * e(0, 2) * m.clone();
            let mut x = xlo;
            while x <= xhi {
                // b22·y² + 2(b12·x + b23·m)·y + (b11·x² + 2·b13·x·m + b33·m² − S) ≤ 0
                let hy = e(0, 1) * x.clone() + lin.clone();
                let cy = e(0, 0) * x.clone() * x.clone() + cross.clone() * x.clone() + constant.clone();
                if let Some((ylo, yhi)) = quadratic_interval(&b[1][1], &hy, &cy) {
                    total = total + yhi - ylo + T::one();
                }
                x = x + T::one();
            }
        }
        m = m + T::one();
    }
    total
}

/// Lattice points in `t·K` for a body of revolution: the sum over `|m| ≤ t`
/// of the disc counts with `X² = t²·f²(m/t)`. At `t = 0` only the origin counts.
pub fn count_revolution(profile: &RevolutionProfile, t: &BigRational) -> Result<BigInt> {
    if t.is_negative() {
        return Err(Error::NegativeInput);
    }
    if t.is_zero() {
        return Ok(BigInt::one());
    }
    let t_sq = t * t;
    let reach = t.floor().to_integer();
    let slice = |m: &BigInt| -> Result<BigInt> {
        let z = BigRational::from_integer(m.clone()) / t;
        count_circle(&(&t_sq * profile.f_squared(&z)?))
    };
    // f² is even, so slices ±m agree.
    let mut total = slice(&BigInt::zero())?;
    let mut m = BigInt::one();
    while m <= reach {
        total += slice(&m)? * 2;
        m += 1;
    }
    Ok(total)
}

/// Exhaustive count of integer vectors in the box `∏[−rᵢ, rᵢ]` accepted by
/// `membership`.
pub fn brute_count<F>(membership: F, radii: &[i64]) -> BigInt
where
    F: Fn(&[i64]) -> bool,
{
    if radii.iter().any(|&r| r < 0) {
        return BigInt::zero();
    }
    let mut k: Vec<i64> = radii.iter().map(|r| -r).collect();
    let mut total = 0u64;
    loop {
        if membership(&k) {
            total += 1;
        }
        if !odometer_step(&mut k, radii) {
            break;
        }
    }
    BigInt::from(total)
}

/// Per-axis radii of the smallest box containing `Q ≤ T`:
/// `|kᵢ| ≤ √(T·(A⁻¹)ᵢᵢ)`.
pub fn bounding_radii(form: &QuadraticForm, threshold: &BigRational) -> Vec<i64> {
    (0..form.dim().get())
        .map(|i| {
            let bound = threshold * &form.inverse()[i][i];
            if bound.is_negative() {
                return -1;
            }
            bound
                .floor()
                .to_integer()
                .floor_sqrt()
                .to_i64()
                .expect("desk-scale radius")
        })
        .collect()
}

/// Brute-force count of `Q(k) ≤ T` over the bounding box, using the
/// integer-scaled form for membership.
pub fn brute_count_form(form: &QuadraticForm, threshold: &BigRational) -> BigInt {
    let (b, scale) = form.integer_scaled();
    let b = to_i128_matrix(&b);
    let s = (threshold * BigRational::from_integer(scale)).floor().to_integer();
    let Some(s) = s.to_i128() else {
        panic!("brute force threshold out of range");
    };
    brute_count(|k| eval_i128(&b, k) <= s, &bounding_radii(form, threshold))
}

fn expect_dim(form: &QuadraticForm, dim: Dimension) -> Result<()> {
    if form.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim.get(), got: form.dim().get() });
    }
    Ok(())
}

// Upper estimate of the bit width of every intermediate in the slice
// counters: entries E, threshold S, and the n₁/m discriminants, which are
// of degree at most 8 in E and linear in S.
fn magnitude_bits(b: &[Vec<BigInt>], s: &BigInt) -> u64 {
    let entry_bits = b.iter().flatten().map(|x| x.bits()).max().unwrap_or(0);
    8 * entry_bits + s.bits() + 12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn n(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn form(rows: &[&[&str]]) -> QuadraticForm {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        QuadraticForm::from_strings(&rows).unwrap()
    }

    fn diag3() -> QuadraticForm {
        form(&[&["2", "0", "0"], &["0", "1", "0"], &["0", "0", "1/2"]])
    }

    #[test]
    fn circle_examples() {
        assert_eq!(count_circle(&q("0")).unwrap(), n(1));
        assert_eq!(count_circle(&q("2")).unwrap(), n(9));
        assert_eq!(count_circle(&q("25")).unwrap(), n(81));
        assert!(count_circle(&q("-1")).is_err());
    }

    #[test]
    fn circle_matches_brute_force() {
        for k in 0..200 {
            let x_sq = BigRational::new(n(k), n(4));
            let r = (k as f64 / 4.0).sqrt() as i64 + 1;
            let brute = brute_count(
                |v| BigRational::from_integer(n(v[0] * v[0] + v[1] * v[1])) <= x_sq,
                &[r, r],
            );
            assert_eq!(count_circle(&x_sq).unwrap(), brute, "X² = {x_sq}");
        }
    }

    #[test]
    fn ball_examples() {
        assert_eq!(count_ball(&q("0")).unwrap(), n(1));
        assert_eq!(count_ball(&q("1")).unwrap(), n(7));
        assert_eq!(count_ball(&q("4")).unwrap(), n(33));
        assert_eq!(count_ball(&q("100")).unwrap(), n(4169));
    }

    #[test]
    fn ellipse_examples() {
        let id = QuadraticForm::identity(Dimension::Two);
        assert_eq!(count_ellipse(&id, &q("25")).unwrap(), n(81));
        let d = form(&[&["2", "0"], &["0", "1/2"]]);
        assert_eq!(count_ellipse(&d, &q("2")).unwrap(), n(7));
        let b = form(&[&["2", "1"], &["1", "1"]]);
        assert_eq!(count_ellipse(&b, &q("1")).unwrap(), n(5));
        assert!(count_ellipse(&b, &q("-1")).is_err());
        assert!(count_ellipse(&diag3(), &q("1")).is_err());
    }

    #[test]
    fn ellipsoid_examples() {
        let id = QuadraticForm::identity(Dimension::Three);
        assert_eq!(count_ellipsoid(&id, &q("4")).unwrap(), n(33));
        assert_eq!(count_ellipsoid(&diag3(), &q("1/2")).unwrap(), n(3));
        // 4a² + 2b² + c² ≤ 4: origin, c = ±1, ±2, b = ±1 with c ∈ {0, ±1}, a = ±1.
        let brute = brute_count(
            |k| 4 * k[0] * k[0] + 2 * k[1] * k[1] + k[2] * k[2] <= 4,
            &[2, 2, 2],
        );
        assert_eq!(brute, n(1 + 4 + 6 + 2));
        assert_eq!(count_ellipsoid(&diag3(), &q("2")).unwrap(), brute);
    }

    #[test]
    fn brute_count_examples() {
        assert_eq!(brute_count(|k| k[0] * k[0] + k[1] * k[1] <= 25, &[5, 5]), n(81));
        assert_eq!(brute_count(|k| k.iter().map(|x| x * x).sum::<i64>() <= 1, &[1, 1, 1]), n(7));
        assert_eq!(brute_count(|_| false, &[3, 3]), n(0));
    }

    #[test]
    fn revolution_examples() {
        let sphere = RevolutionProfile::sphere();
        assert_eq!(count_revolution(&sphere, &q("2")).unwrap(), n(33));

        let spheroid = RevolutionProfile::spheroid(&q("1/2")).unwrap();
        // (n₁² + n₂²) ≤ t²·α²(1 − (m/t)²) = (4 − m²)/4 with t = 2.
        let brute = brute_count(|k| 4 * (k[0] * k[0] + k[1] * k[1]) <= 4 - k[2] * k[2], &[1, 1, 2]);
        assert_eq!(count_revolution(&spheroid, &q("2")).unwrap(), brute);

        // Thin body: only the axis points survive.
        let thin = RevolutionProfile::spheroid(&q("1/10")).unwrap();
        assert_eq!(count_revolution(&thin, &q("7/2")).unwrap(), n(7));
        assert_eq!(count_revolution(&sphere, &q("0")).unwrap(), n(1));
        assert!(count_revolution(&sphere, &q("-1")).is_err());
    }

    #[test]
    fn bigint_path_agrees_with_fast_path() {
        let d = diag3();
        let b: Vec<Vec<BigInt>> = d.integer_scaled().0;
        for t_sq in [0i64, 1, 7, 50, 313] {
            let s = BigInt::from(2 * t_sq);
            let big = ellipsoid_count(&b, &s);
            let fast = ellipsoid_count(&to_i128_matrix(&b), &(2 * t_sq as i128));
            assert_eq!(big, BigInt::from(fast));
        }
    }

    #[test]
    fn wide_entries_take_bigint_path() {
        let f = form(&[&["1", "0"], &["0", "1/65537"]]);
        let (b, _) = f.integer_scaled();
        assert!(!fits_i128(magnitude_bits(&b, &BigInt::from(4 * 65537))));
        assert_eq!(count_ellipse(&f, &q("4")).unwrap(), brute_count_form(&f, &q("4")));
        let g = form(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1/65537"]]);
        assert_eq!(count_ellipsoid(&g, &q("3/2")).unwrap(), brute_count_form(&g, &q("3/2")));
    }

    #[test]
    fn count_result_discrepancy() {
        let t = q("10");
        let res = CountResult::new(t, count_ball(&q("100")).unwrap(), Volume::ball(q("1")));
        assert!((res.main_term - 4.0 * PI / 3.0 * 1000.0).abs() < 1e-9);
        assert!((res.discrepancy - (4169.0 - res.main_term)).abs() < 1e-9);
    }
}
