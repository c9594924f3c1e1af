//! Ball and ternary-ellipsoid bounds.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::forms::{Dimension, EllipsoidInvariants, QuadraticForm};

use super::{check_t, majorant, majorant_moment, BoundBreakdown, Theorem};

/// `c` in `ε = c/√t`.
pub const ELLIPSOID_CONSTANT_C: f64 = 0.277;

const SPHERE_THRESHOLD: f64 = 10.0;

/// `b = (1/π)·√(3/8 + √15/8)` in `K = b/ε`.
pub fn ellipsoid_constant_b() -> f64 {
    (3.0 / 8.0 + 15f64.sqrt() / 8.0).sqrt() / PI
}

/// Unit-ball bound `14 t^{3/2} + 3.5 t log t + …`, certified for `t ≥ 10`.
pub fn bound_sphere_1a(t: f64) -> Result<BoundBreakdown> {
    check_t(t)?;
    let l = t.ln();
    let s = t.sqrt();
    let components = vec![
        ("14 t^(3/2)".to_string(), 14.0 * t * s),
        ("3.5 t log t".to_string(), 3.5 * t * l),
        ("12.9 t".to_string(), 12.9 * t),
        ("0.53 t^(1/2)".to_string(), 0.53 * s),
        ("8.2".to_string(), 8.2),
        ("2 log t / t^(1/2)".to_string(), 2.0 * l / s),
        ("7.3 / t^(1/2)".to_string(), 7.3 / s),
        ("0.36 / t".to_string(), 0.36 / t),
        ("1 / t^(3/2)".to_string(), 1.0 / (t * s)),
    ];
    Ok(BoundBreakdown::new(
        Theorem::Sphere1A,
        t,
        SPHERE_THRESHOLD,
        t >= SPHERE_THRESHOLD,
        components,
    ))
}

/// Smoothing width, frequency cutoff and shifted radii at a (normalized) `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundParameters1B {
    pub epsilon: f64,
    pub c: f64,
    pub b: f64,
    pub k: f64,
    pub r_plus: f64,
    pub r_minus: f64,
}

impl BoundParameters1B {
    pub fn new(t: f64) -> Result<Self> {
        check_t(t)?;
        let c = ELLIPSOID_CONSTANT_C;
        let b = ellipsoid_constant_b();
        let epsilon = c / t.sqrt();
        Ok(BoundParameters1B {
            epsilon,
            c,
            b,
            k: b / epsilon,
            r_plus: t + 2.0 * epsilon,
            r_minus: t - 2.0 * epsilon,
        })
    }

    /// `(j, F_j)` for `j ∈ {6, 8, 10, 12}` at radius `r`.
    pub fn f_coeffs(&self, r: f64) -> [(u32, f64); 4] {
        let e = self.epsilon;
        [
            (6, 9.0 * r / (16.0 * PI.powi(5) * e.powi(4))),
            (8, 9.0 * (e * e + 2.0 * r * r) / (128.0 * PI.powi(7) * e.powi(6) * r)),
            (10, 9.0 * (2.0 * e * e + r * r) / (1024.0 * PI.powi(9) * e.powi(8) * r)),
            (12, 9.0 / (8192.0 * PI.powi(11) * e.powi(8) * r)),
        ]
    }
}

/// The lattice-sum majorant at radius `r`, itemized.
pub(crate) fn smoothed_sum_terms(
    params: &BoundParameters1B,
    g0: f64,
    g1: f64,
    r: f64,
) -> Result<Vec<(String, f64)>> {
    let dim = Dimension::Three;
    let k = params.k;
    let mut terms = vec![
        ("boundary at K".to_string(), r / PI * majorant(k, g1, dim) / (k * k)),
        (
            "integral G0..K".to_string(),
            2.0 * r / PI * majorant_moment(g1, dim, 3.0, g0, Some(k))?,
        ),
        (
            "integral G0..inf".to_string(),
            majorant_moment(g1, dim, 5.0, g0, None)? / (2.0 * PI.powi(3) * r),
        ),
    ];
    for (j, fj) in params.f_coeffs(r) {
        let tail = fj * j as f64 * majorant_moment(g1, dim, j as f64 + 1.0, k, None)?;
        terms.push((format!("tail F{j}"), tail));
    }
    Ok(terms)
}

/// Ternary-ellipsoid bound for the form's count at dilation `t`, certified
/// for `t ≥ G0²` of the determinant-one normalization.
pub fn bound_ellipsoid_1b(form: &QuadraticForm, t: f64) -> Result<BoundBreakdown> {
    if form.dim() != Dimension::Three {
        return Err(Error::DimensionMismatch { expected: 3, got: form.dim().get() });
    }
    bound_ellipsoid_1b_with(&EllipsoidInvariants::compute(form), t)
}

/// As [`bound_ellipsoid_1b`] with precomputed invariants.
pub fn bound_ellipsoid_1b_with(inv: &EllipsoidInvariants, t: f64) -> Result<BoundBreakdown> {
    check_t(t)?;
    if inv.dim != Dimension::Three {
        return Err(Error::DimensionMismatch { expected: 3, got: inv.dim.get() });
    }
    let t_norm = t / inv.scale;
    let g0 = inv.normalized_g0();
    let g1 = inv.normalized_g1();
    let params = BoundParameters1B::new(t_norm)?;
    if params.k <= g0 {
        return Err(Error::InfeasibleRange { k: params.k, g0 });
    }
    if params.r_minus <= 0.0 {
        return Err(Error::NonpositiveT(params.r_minus));
    }
    let mut best: Option<(f64, Vec<(String, f64)>)> = None;
    for r in [params.r_minus, params.r_plus] {
        let terms = smoothed_sum_terms(&params, g0, g1, r)?;
        let value: f64 = terms.iter().map(|(_, v)| v).sum();
        if best.as_ref().map_or(true, |(b, _)| value > *b) {
            best = Some((value, terms));
        }
    }
    let (_, terms) = best.expect("two radii evaluated");
    let shell = 4.0 * PI / 3.0 * (params.r_plus.powi(3) - t_norm.powi(3));
    let mut components = vec![("volume shell".to_string(), shell)];
    components.extend(terms);
    let g0_sq_norm = g0 * g0;
    Ok(BoundBreakdown::new(
        Theorem::Ellipsoid1B,
        t,
        g0_sq_norm * inv.scale,
        t_norm >= g0_sq_norm,
        components,
    ))
}
