//! Bodies of revolution about the z-axis, given by the profile `y = f(z)`
//! on `[-1, 1]`.
//!
//! Profiles are stored through `f²` as an even polynomial with rational
//! coefficients, which keeps the slice thresholds `t²·f²(m/t)` exact and the
//! volume `π∫f²` a rational multiple of `π`. The derivatives of `f` are
//! evaluated in floating point from the polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{format_rational, rational_to_f64};
use crate::error::{Error, Result};

/// Direct parametrization is refused this close to the poles.
pub const POLE_GUARD: f64 = 1e-6;

// Invariant extraction scans |z| ≤ 1 − SCAN_EDGE directly and switches to
// z = g(y) beyond that.
const SCAN_EDGE: f64 = 1e-4;
const GOLDEN_ITERS: usize = 80;

/// Profile constants feeding the revolution bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileInvariants {
    pub r_max: f64,
    pub r_min: f64,
    pub r0: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub z0: f64,
    #[serde(rename = "F2")]
    pub f2: f64,
    /// True for closed-form invariants of built-in profiles; sampled
    /// invariants are not certified.
    pub certified: bool,
}

impl ProfileInvariants {
    pub fn validate(&self) -> Result<()> {
        let positive = [("r_max", self.r_max), ("r_min", self.r_min), ("r0", self.r0)];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidInvariants(format!("{name} = {value} must be positive")));
            }
        }
        if self.r_max < self.r_min {
            return Err(Error::InvalidInvariants(format!(
                "r_max = {} is below r_min = {}",
                self.r_max, self.r_min
            )));
        }
        for (name, value) in [("M", self.m), ("F2", self.f2), ("z0", self.z0)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidInvariants(format!("{name} = {value} must be nonnegative")));
            }
        }
        Ok(())
    }
}

/// A convex body of revolution, symmetric in the equatorial plane, with
/// `f(±1) = 0`, `f(0) ≤ 1` and `f'' < 0` on `(−1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RevolutionProfile {
    name: String,
    /// `f²(z) = Σ coefficients[k]·z^(2k)`.
    coefficients: Vec<BigRational>,
    coeff_f64: Vec<f64>,
    closed_form: Option<ProfileInvariants>,
}

impl RevolutionProfile {
    /// The unit ball: `f²(z) = 1 − z²`.
    pub fn sphere() -> Self {
        let one = BigRational::one();
        let mut p = Self::from_parts("sphere", vec![one.clone(), -one], None);
        p.closed_form = Some(ProfileInvariants {
            r_max: 1.0,
            r_min: 1.0,
            r0: 1.0,
            m: 1.0,
            z0: 0.0,
            f2: 0.0,
            certified: true,
        });
        p
    }

    /// Spheroid with polar semi-axis 1 and equatorial semi-axis `α ∈ (0, 1]`:
    /// `f²(z) = α²(1 − z²)`.
    pub fn spheroid(alpha: &BigRational) -> Result<Self> {
        if !alpha.is_positive() || alpha > &BigRational::one() {
            return Err(Error::BadAlpha(format_rational(alpha)));
        }
        if alpha.is_one() {
            return Ok(Self::sphere());
        }
        let a2 = alpha * alpha;
        let a = rational_to_f64(alpha);
        let a2f = rational_to_f64(&a2);
        let name = format!("spheroid(alpha={})", format_rational(alpha));
        let mut p = Self::from_parts(&name, vec![a2.clone(), -a2], None);
        // Ellipse with semi-axes α (equatorial) and 1 (polar): curvature radii
        // run from α² at the poles to 1/α at the equator, and f'² + f·f'' ≡ −α².
        p.closed_form = Some(ProfileInvariants {
            r_max: 1.0 / a,
            r_min: a2f,
            r0: a2f,
            m: a2f,
            z0: 0.0,
            f2: 0.0,
            certified: true,
        });
        Ok(p)
    }

    /// A custom profile `f²(z) = Σ c_k z^(2k)`. The standing assumptions are
    /// checked exactly where possible (`f²(1) = 0`, `0 < f²(0) ≤ 1`, a simple
    /// zero at the pole) and on a sample grid otherwise (`f² > 0`, `f'' < 0`).
    /// Invariants of custom profiles are sampled, never certified.
    pub fn polynomial(name: &str, coefficients: Vec<BigRational>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::BadProfile("f² needs at least a z² term".into()));
        }
        let p = Self::from_parts(name, coefficients, None);
        let at_pole: BigRational = p.coefficients.iter().sum();
        if !at_pole.is_zero() {
            return Err(Error::BadProfile(format!(
                "f²(1) = {} but the pole must lie at z = 1",
                format_rational(&at_pole)
            )));
        }
        let c0 = &p.coefficients[0];
        if !c0.is_positive() || c0 > &BigRational::one() {
            return Err(Error::BadProfile(format!(
                "f²(0) = {} must lie in (0, 1]",
                format_rational(c0)
            )));
        }
        let slope: BigRational = p
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(2 * k)))
            .sum();
        if !slope.is_negative() {
            return Err(Error::BadProfile("(f²)'(1) must be negative".into()));
        }
        let n = 2000;
        for i in 0..n {
            let z = i as f64 / n as f64 * (1.0 - SCAN_EDGE);
            if p.poly(z, 0) <= 0.0 {
                return Err(Error::BadProfile(format!("f² is not positive at z = {z}")));
            }
            if p.f2(z) >= 0.0 {
                return Err(Error::DegenerateCurvature(z));
            }
        }
        Ok(p)
    }

    fn from_parts(
        name: &str,
        coefficients: Vec<BigRational>,
        closed_form: Option<ProfileInvariants>,
    ) -> Self {
        let coeff_f64 = coefficients.iter().map(rational_to_f64).collect();
        RevolutionProfile { name: name.to_string(), coefficients, coeff_f64, closed_form }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Coefficients of `f²` in powers of `z²`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn closed_form_invariants(&self) -> Option<&ProfileInvariants> {
        self.closed_form.as_ref()
    }

    /// Exact `f²(z)` for rational `z ∈ [−1, 1]`.
    pub fn f_squared(&self, z: &BigRational) -> Result<BigRational> {
        if z.abs() > BigRational::one() {
            return Err(Error::ProfileDomain(format_rational(z)));
        }
        let z2 = z * z;
        Ok(self
            .coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &z2 + c))
    }

    /// `∫_{−1}^{1} f²(z) dz`, exactly; the volume is `π` times this.
    pub fn volume_pi_multiple(&self) -> BigRational {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| c * BigRational::new(BigInt::from(2), BigInt::from(2 * k + 1)))
            .sum()
    }

    /// Value (order 0), first or second derivative of `f²` at `z`.
    fn poly(&self, z: f64, order: u32) -> f64 {
        let mut acc = 0.0;
        for (k, &c) in self.coeff_f64.iter().enumerate() {
            let e = 2 * k as i32;
            let factor = match order {
                0 => 1.0,
                1 => e as f64,
                _ => (e * (e - 1)) as f64,
            };
            if factor == 0.0 {
                continue;
            }
            acc += factor * c * z.powi(e - order as i32);
        }
        acc
    }

    pub fn f(&self, z: f64) -> f64 {
        self.poly(z, 0).max(0.0).sqrt()
    }

    pub fn f1(&self, z: f64) -> f64 {
        self.poly(z, 1) / (2.0 * self.f(z))
    }

    pub fn f2(&self, z: f64) -> f64 {
        let p = self.poly(z, 0);
        let p1 = self.poly(z, 1);
        let p2 = self.poly(z, 2);
        (2.0 * p * p2 - p1 * p1) / (4.0 * p.powf(1.5))
    }

    /// `f'² + f·f'' = (f²)''/2`, continuous on all of `[−1, 1]`.
    pub fn slice_area_curvature(&self, z: f64) -> f64 {
        self.poly(z, 2) / 2.0
    }

    /// Curvature radius `(1 + f'²)^{3/2} / |f''|` of the profile curve.
    pub fn curvature_radius(&self, z: f64) -> Result<f64> {
        if z.abs() > 1.0 - POLE_GUARD {
            return Err(Error::PoleProximity(z));
        }
        let f2 = self.f2(z);
        if f2 == 0.0 || !f2.is_finite() {
            return Err(Error::DegenerateCurvature(z));
        }
        Ok((1.0 + self.f1(z).powi(2)).powf(1.5) / f2.abs())
    }

    /// The inverse branch `z = g(y)` on `[0, 1]`, found by bisection on
    /// the decreasing map `z ↦ f²(z)`.
    fn inverse(&self, y: f64) -> f64 {
        let target = y * y;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.poly(mid, 0) > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Curvature radius at the point with abscissa `y` near the pole, using
    /// the swapped parametrization `z = g(y)`; smooth through `y = 0`.
    pub fn curvature_radius_near_pole(&self, y: f64) -> f64 {
        let z = if y == 0.0 { 1.0 } else { self.inverse(y) };
        let p1 = self.poly(z, 1);
        let p2 = self.poly(z, 2);
        let g1 = 2.0 * y / p1;
        let g2 = 2.0 / p1 - 4.0 * y * y * p2 / p1.powi(3);
        (1.0 + g1 * g1).powf(1.5) / g2.abs()
    }
}

/// Invariants of a profile: the closed forms when available, otherwise a
/// sampled estimate on a grid of `grid_n` points (marked uncertified).
pub fn compute_invariants(profile: &RevolutionProfile, grid_n: usize) -> Result<ProfileInvariants> {
    if let Some(inv) = profile.closed_form_invariants() {
        return Ok(inv.clone());
    }
    sample_invariants(profile, grid_n)
}

/// Numeric invariant extraction, regardless of closed forms.
pub fn sample_invariants(profile: &RevolutionProfile, grid_n: usize) -> Result<ProfileInvariants> {
    let grid_n = grid_n.max(1000);
    let z_edge = 1.0 - SCAN_EDGE;
    let y_edge = profile.f(z_edge);

    let radius = |z: f64| profile.curvature_radius(z);
    let body = grid(0.0, z_edge, grid_n)
        .into_par_iter()
        .map(|z| radius(z).map(|r| (z, r)))
        .collect::<Result<Vec<_>>>()?;
    let cap: Vec<(f64, f64)> = grid(0.0, y_edge, grid_n / 10)
        .into_iter()
        .map(|y| (y, profile.curvature_radius_near_pole(y)))
        .collect();

    let body_fn = |z: f64| radius(z).unwrap_or(f64::NAN);
    let cap_fn = |y: f64| profile.curvature_radius_near_pole(y);
    let r_max = refine_extreme(&body, &body_fn, true).max(refine_extreme(&cap, &cap_fn, true));
    let r_min = refine_extreme(&body, &body_fn, false).min(refine_extreme(&cap, &cap_fn, false));

    let m_samples: Vec<(f64, f64)> = grid(0.0, 1.0, grid_n)
        .into_iter()
        .map(|z| (z, profile.slice_area_curvature(z).abs()))
        .collect();
    let m = refine_extreme(&m_samples, &|z| profile.slice_area_curvature(z).abs(), true);

    let r0 = pole_limit(profile);
    let (z0, f2) = monotonicity_onset(profile, grid_n);

    Ok(ProfileInvariants { r_max, r_min, r0, m, z0, f2, certified: false })
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

// Best grid sample, then golden-section search on the neighbouring cells.
fn refine_extreme(samples: &[(f64, f64)], f: &dyn Fn(f64) -> f64, maximize: bool) -> f64 {
    let sign = if maximize { 1.0 } else { -1.0 };
    let (idx, &(_, best)) = samples
        .iter()
        .enumerate()
        .max_by(|a, b| (sign * a.1 .1).total_cmp(&(sign * b.1 .1)))
        .expect("nonempty grid");
    let lo = samples[idx.saturating_sub(1)].0;
    let hi = samples[(idx + 1).min(samples.len() - 1)].0;
    let refined = golden_section(|x| sign * f(x), lo, hi);
    if refined.is_finite() {
        sign * refined.max(sign * best)
    } else {
        best
    }
}

/// Maximum of `f` on `[a, b]` by golden-section search (unimodal `f`).
fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd).max(f(a)).max(f(b))
}

/// `lim_{z→1⁻} −f(z)·f'(z)`, by Richardson extrapolation of samples at
/// `z = 1 − h·2^{−k}` (error expansion in powers of `h`).
fn pole_limit(profile: &RevolutionProfile) -> f64 {
    const LEVELS: usize = 6;
    let h0 = 1e-2;
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(LEVELS);
    for k in 0..LEVELS {
        let h = h0 / 2f64.powi(k as i32);
        let z = 1.0 - h;
        let mut row = vec![-profile.f(z) * profile.f1(z)];
        for j in 1..=k {
            let factor = 2f64.powi(j as i32);
            let prev = &table[k - 1];
            let value = (factor * row[j - 1] - prev[j - 1]) / (factor - 1.0);
            row.push(value);
        }
        table.push(row);
    }
    table[LEVELS - 1][LEVELS - 1]
}

/// Smallest `z0` with `f''` monotone on `[z0, 1)`, detected from sign
/// changes of a finite-difference `f'''`, and `F2 = max_{[0,z0)} |f''|`.
fn monotonicity_onset(profile: &RevolutionProfile, grid_n: usize) -> (f64, f64) {
    const GUARD: usize = 3;
    let z_end = 1.0 - 1e-3;
    let h = 1e-5;
    let zs = grid(0.0, z_end, grid_n);
    let third: Vec<f64> = zs
        .iter()
        .map(|&z| {
            let lo = (z - h).max(-z_end);
            let hi = z + h;
            (profile.f2(hi) - profile.f2(lo)) / (hi - lo)
        })
        .collect();
    // Near the pole f'' → −∞, so f''' is negative on the final monotone stretch.
    let tol = 1e-9;
    let last_bad = third
        .iter()
        .enumerate()
        .skip(GUARD)
        .filter(|(_, &d)| d > tol)
        .map(|(i, _)| i)
        .last();
    match last_bad {
        None => (0.0, 0.0),
        Some(i) => {
            // Round toward the larger z0, which only enlarges the F2 window.
            let idx = (i + 1).min(zs.len() - 1);
            let z0 = zs[idx];
            let f2 = zs[..=idx].iter().map(|&z| profile.f2(z).abs()).fold(0.0, f64::max);
            (z0, f2)
        }
    }
}
