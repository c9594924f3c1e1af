//! Explicit discrepancy bounds and the analytic kernels behind them.
//!
//! All bound arithmetic is binary64 and `log` is the natural logarithm.
//! Evaluators return the formula value for every admissible `t` and report
//! separately whether `t` lies in the range where the bound is certified.

mod ellipse;
mod kernels;
mod psi;
mod revolution;
mod sphere;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::forms::{counting_majorant, Dimension};

pub use ellipse::{bound_circle_2, bound_ellipse_2, bound_ellipse_2_with, ellipse_constant_c, ellipse_cutoff};
pub use kernels::{ball_kernel_majorant, fourier_ball_kernel, fourier_disc_kernel, BESSEL_PEAK};
pub use psi::{circle_psi_decomposition, psi_value, PsiDecomposition};
pub use revolution::{bound_revolution_3, RevolutionConstants};
pub use sphere::{
    bound_ellipsoid_1b, bound_ellipsoid_1b_with, bound_sphere_1a, ellipsoid_constant_b,
    BoundParameters1B, ELLIPSOID_CONSTANT_C,
};

/// Which bound to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Unit ball, certified for `t ≥ 10`.
    Sphere1A,
    /// Ellipsoid, certified for `t ≥ G0²`.
    Ellipsoid1B,
    /// Ellipse disc, certified for `t ≥ 28·G0³`.
    Ellipse2,
    /// Unit disc, certified for `t ≥ 28`.
    Circle2,
    /// Body of revolution.
    Revolution3,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::Sphere1A => "1A",
            Theorem::Ellipsoid1B => "1B",
            Theorem::Ellipse2 => "2",
            Theorem::Circle2 => "2circle",
            Theorem::Revolution3 => "3",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1A" | "1a" => Ok(Theorem::Sphere1A),
            "1B" | "1b" => Ok(Theorem::Ellipsoid1B),
            "2" => Ok(Theorem::Ellipse2),
            "2circle" => Ok(Theorem::Circle2),
            "3" => Ok(Theorem::Revolution3),
            other => Err(Error::Parse(format!("unknown theorem tag {other:?}"))),
        }
    }
}

impl Serialize for Theorem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// A bound value with its itemized components and certification status.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundBreakdown {
    pub theorem: Theorem,
    pub t: f64,
    pub total: f64,
    pub valid: bool,
    /// Smallest certified `t`, in the caller's (unnormalized) units.
    #[serde(skip)]
    pub threshold: f64,
    pub components: Vec<(String, f64)>,
}

impl BoundBreakdown {
    fn new(theorem: Theorem, t: f64, threshold: f64, valid: bool, components: Vec<(String, f64)>) -> Self {
        let total = components.iter().map(|(_, v)| v).sum();
        BoundBreakdown { theorem, t, total, valid, threshold, components }
    }

    pub fn component(&self, label: &str) -> Option<f64> {
        self.components.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }
}

pub(crate) fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonpositiveT(t))
    }
}

/// `∫_L^U u^m du`, with `upper = None` meaning `U = ∞`.
pub fn power_integral(m: f64, lower: f64, upper: Option<f64>) -> Result<f64> {
    if !(lower > 0.0) {
        return Err(Error::NonpositiveInput);
    }
    match upper {
        None => {
            if m >= -1.0 {
                return Err(Error::DivergentIntegral { exponent: m });
            }
            Ok(-lower.powf(m + 1.0) / (m + 1.0))
        }
        Some(upper) => {
            if upper < lower {
                return Err(Error::BadRange { lower, upper });
            }
            if m == -1.0 {
                Ok((upper / lower).ln())
            } else {
                Ok((upper.powf(m + 1.0) - lower.powf(m + 1.0)) / (m + 1.0))
            }
        }
    }
}

/// `∫_L^U a_g(u)·u^{−p} du` with the counting majorant expanded binomially
/// into power integrals.
pub(crate) fn majorant_moment(g1: f64, dim: Dimension, p: f64, lower: f64, upper: Option<f64>) -> Result<f64> {
    let d = dim.get() as i32;
    let volume = match dim {
        Dimension::Two => std::f64::consts::PI,
        Dimension::Three => 4.0 * std::f64::consts::PI / 3.0,
    };
    let mut sum = 0.0;
    for i in 0..=d {
        let binom = binomial(d, i);
        sum += binom * g1.powi(d - i) * power_integral(i as f64 - p, lower, upper)?;
    }
    Ok(volume * sum - power_integral(-p, lower, upper)?)
}

fn binomial(n: i32, k: i32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `a_g(u)` for the given dimension.
pub(crate) fn majorant(u: f64, g1: f64, dim: Dimension) -> f64 {
    counting_majorant(u, g1, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, integrate_to_infinity};

    #[test]
    fn power_integral_examples() {
        assert_eq!(power_integral(0.0, 1.0, Some(2.0)).unwrap(), 1.0);
        assert_eq!(power_integral(-2.0, 1.0, None).unwrap(), 1.0);
        assert!((power_integral(-1.0, 1.0, Some(std::f64::consts::E)).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(power_integral(-1.0, 1.0, None), Err(Error::DivergentIntegral { .. })));
        assert!(matches!(power_integral(0.5, 1.0, None), Err(Error::DivergentIntegral { .. })));
        assert!(matches!(power_integral(0.0, 2.0, Some(1.0)), Err(Error::BadRange { .. })));
    }

    #[test]
    fn majorant_moments_match_quadrature() {
        for (dim, g1, p, lo, hi) in [
            (Dimension::Three, 0.866, 3.0, 1.0, Some(7.5)),
            (Dimension::Three, 0.5, 5.0, 0.7, None),
            (Dimension::Three, 1.2, 13.0, 3.0, None),
            (Dimension::Two, 0.79, 2.5, 0.7, Some(4.0)),
            (Dimension::Two, 0.79, 4.0, 4.0, None),
        ] {
            let closed = majorant_moment(g1, dim, p, lo, hi).unwrap();
            let integrand = |u: f64| majorant(u, g1, dim) * u.powf(-p);
            let numeric = match hi {
                Some(h) => integrate(integrand, lo, h, 1e-13),
                None => integrate_to_infinity(integrand, lo, 1e-13),
            };
            assert!((closed - numeric).abs() <= 1e-9 * closed.abs(), "{closed} vs {numeric}");
        }
    }

    #[test]
    fn theorem_tags_round_trip() {
        for th in [
            Theorem::Sphere1A,
            Theorem::Ellipsoid1B,
            Theorem::Ellipse2,
            Theorem::Circle2,
            Theorem::Revolution3,
        ] {
            assert_eq!(th.tag().parse::<Theorem>().unwrap(), th);
        }
        assert!("4".parse::<Theorem>().is_err());
    }

    #[test]
    fn breakdown_json_shape() {
        let b = BoundBreakdown::new(
            Theorem::Circle2,
            2.0,
            28.0,
            false,
            vec![("a".into(), 1.5), ("b".into(), 2.0)],
        );
        assert_eq!(b.total, 3.5);
        assert_eq!(
            serde_json::to_string(&b).unwrap(),
            r#"{"theorem":"2circle","t":2.0,"total":3.5,"valid":false,"components":[["a",1.5],["b",2.0]]}"#
        );
    }
}
