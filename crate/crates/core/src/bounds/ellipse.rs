//! Binary-form (ellipse disc) and circle bounds.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::forms::{Dimension, EllipsoidInvariants, QuadraticForm};

use super::{check_t, majorant, majorant_moment, BoundBreakdown, Theorem};

const CIRCLE_THRESHOLD: f64 = 28.0;

/// `c = (1/6)(2823576/π²)^{1/9}` in `ε = c/t^{1/3}`.
pub fn ellipse_constant_c() -> f64 {
    (2_823_576.0 / (PI * PI)).powf(1.0 / 9.0) / 6.0
}

/// Frequency cutoff `K = (3π)^{−2/3}/ε`.
pub fn ellipse_cutoff(epsilon: f64) -> f64 {
    (3.0 * PI).powf(-2.0 / 3.0) / epsilon
}

/// Ellipse-disc bound for the form's count at dilation `t`, certified for
/// `t ≥ 28·G0³` of the determinant-one normalization.
pub fn bound_ellipse_2(form: &QuadraticForm, t: f64) -> Result<BoundBreakdown> {
    if form.dim() != Dimension::Two {
        return Err(Error::DimensionMismatch { expected: 2, got: form.dim().get() });
    }
    bound_ellipse_2_with(&EllipsoidInvariants::compute(form), t)
}

/// As [`bound_ellipse_2`] with precomputed invariants.
pub fn bound_ellipse_2_with(inv: &EllipsoidInvariants, t: f64) -> Result<BoundBreakdown> {
    check_t(t)?;
    if inv.dim != Dimension::Two {
        return Err(Error::DimensionMismatch { expected: 2, got: inv.dim.get() });
    }
    let dim = Dimension::Two;
    let t_norm = t / inv.scale;
    let g0 = inv.normalized_g0();
    let g1 = inv.normalized_g1();
    let eps = ellipse_constant_c() / t_norm.cbrt();
    let k = ellipse_cutoff(eps);
    if k <= g0 {
        return Err(Error::InfeasibleRange { k, g0 });
    }
    let root = (t_norm + eps).sqrt();
    let components = vec![
        ("area shell".to_string(), PI * ((t_norm + eps).powi(2) - t_norm * t_norm)),
        ("boundary at K".to_string(), root / (3.0 * k.powf(1.5)) * majorant(k, g1, dim)),
        (
            "integral G0..K".to_string(),
            root / 2.0 * majorant_moment(g1, dim, 2.5, g0, Some(k))?,
        ),
        (
            "tail K..inf".to_string(),
            root / (3.0 * PI * eps.powf(1.5)) * majorant_moment(g1, dim, 4.0, k, None)?,
        ),
    ];
    let threshold = 28.0 * g0.powi(3);
    Ok(BoundBreakdown::new(
        Theorem::Ellipse2,
        t,
        threshold * inv.scale,
        t_norm >= threshold,
        components,
    ))
}

/// Unit-disc bound `8.46 t^{2/3} + 1.5 t^{1/2} + 1 + …`, certified for `t ≥ 28`.
pub fn bound_circle_2(t: f64) -> Result<BoundBreakdown> {
    check_t(t)?;
    let c = t.cbrt();
    let s = t.sqrt();
    let components = vec![
        ("8.46 t^(2/3)".to_string(), 8.46 * c * c),
        ("1.5 t^(1/2)".to_string(), 1.5 * s),
        ("1".to_string(), 1.0),
        ("3 / t^(1/3)".to_string(), 3.0 / c),
        ("2.85 / t^(2/3)".to_string(), 2.85 / (c * c)),
        ("0.51 / t^(5/6)".to_string(), 0.51 / (c * s)),
        ("0.34 / t^(4/3)".to_string(), 0.34 / (t * c)),
    ];
    Ok(BoundBreakdown::new(
        Theorem::Circle2,
        t,
        CIRCLE_THRESHOLD,
        t >= CIRCLE_THRESHOLD,
        components,
    ))
}
