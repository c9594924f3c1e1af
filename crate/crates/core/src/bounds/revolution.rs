//! Bound for convex bodies of revolution.

use serde::Serialize;

use crate::error::Result;
use crate::profiles::ProfileInvariants;

use super::{check_t, BoundBreakdown, Theorem};

// Below t = 1 the t·log t term is negative and the formula stops being an
// upper bound (its total can drop below zero), so certification starts here.
const REVOLUTION_THRESHOLD: f64 = 1.0;

/// The six constants of `C1 t^{3/2} + C2 t log t + C3 t + C4 t^{3/4} + C5 t^{1/2} + C6`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RevolutionConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

// x^e with 0^e = 0 for e > 0.
fn pow0(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(e)
    }
}

fn log_plus(x: f64) -> f64 {
    x.ln().max(0.0)
}

impl RevolutionConstants {
    pub fn new(inv: &ProfileInvariants) -> Result<Self> {
        inv.validate()?;
        let r = inv.r_max;
        let f2 = inv.f2;
        Ok(RevolutionConstants {
            c1: 53.0 * r.sqrt() * pow0(f2, 0.75)
                + 12.0 * r.sqrt() * pow0(f2, 0.25)
                + 73.0 * r.powf(0.75)
                + 13.0 * r.powf(0.25),
            c2: 7315.0 * r.sqrt() + 241.0,
            c3: 3658.0 * r.sqrt() * log_plus(r)
                + 642.0 * (r / inv.r_min).ln()
                + 1.6 * (inv.m + inv.r0)
                + 281.0,
            c4: 19.0 * r.powf(0.75) * pow0(f2, 9.0 / 8.0) + 34.0 * r.powf(0.625),
            c5: 1302.0 * r.powf(0.25),
            c6: 5.0,
        })
    }
}

/// Body-of-revolution bound, certified for `t ≥ 1` when the invariants are.
pub fn bound_revolution_3(inv: &ProfileInvariants, t: f64) -> Result<BoundBreakdown> {
    check_t(t)?;
    let c = RevolutionConstants::new(inv)?;
    let components = vec![
        ("C1 t^(3/2)".to_string(), c.c1 * t.powf(1.5)),
        ("C2 t log t".to_string(), c.c2 * t * t.ln()),
        ("C3 t".to_string(), c.c3 * t),
        ("C4 t^(3/4)".to_string(), c.c4 * t.powf(0.75)),
        ("C5 t^(1/2)".to_string(), c.c5 * t.sqrt()),
        ("C6".to_string(), c.c6),
    ];
    Ok(BoundBreakdown::new(
        Theorem::Revolution3,
        t,
        REVOLUTION_THRESHOLD,
        inv.certified && t >= REVOLUTION_THRESHOLD,
        components,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::profiles::{compute_invariants, RevolutionProfile};

    fn sphere() -> ProfileInvariants {
        RevolutionProfile::sphere().closed_form_invariants().unwrap().clone()
    }

    #[test]
    fn sphere_constants() {
        let c = RevolutionConstants::new(&sphere()).unwrap();
        assert_eq!(c.c1, 86.0);
        assert_eq!(c.c2, 7556.0);
        assert!((c.c3 - 284.2).abs() < 1e-12);
        assert_eq!((c.c4, c.c5, c.c6), (34.0, 1302.0, 5.0));
    }

    #[test]
    fn sphere_at_one() {
        let b = bound_revolution_3(&sphere(), 1.0).unwrap();
        assert!((b.total - 1711.2).abs() < 1e-9);
        assert!(b.valid);
    }

    #[test]
    fn curvature_terms_enter_when_onset_is_positive() {
        let mut inv = sphere();
        inv.f2 = 16.0;
        inv.z0 = 0.5;
        let c = RevolutionConstants::new(&inv).unwrap();
        assert!((c.c1 - (53.0 * 8.0 + 12.0 * 2.0 + 86.0)).abs() < 1e-9);
        assert!((c.c4 - (19.0 * 16f64.powf(9.0 / 8.0) + 34.0)).abs() < 1e-9);
    }

    #[test]
    fn sampled_invariants_are_not_certified() {
        let p = RevolutionProfile::polynomial(
            "bumpy",
            ["1", "-3/2", "1", "-1/2"]
                .iter()
                .map(|s| crate::arith::parse_rational(s).unwrap())
                .collect(),
        )
        .unwrap();
        let inv = compute_invariants(&p, 2000).unwrap();
        let b = bound_revolution_3(&inv, 50.0).unwrap();
        assert!(!b.valid && b.total > 0.0);
    }

    #[test]
    fn rejects_inconsistent_invariants() {
        let mut inv = sphere();
        inv.r_min = 2.0;
        assert!(matches!(bound_revolution_3(&inv, 5.0), Err(Error::InvalidInvariants(_))));
        let mut inv = sphere();
        inv.r0 = 0.0;
        assert!(bound_revolution_3(&inv, 5.0).is_err());
    }

    #[test]
    fn monotone_and_positive_from_one() {
        for inv in [
            sphere(),
            RevolutionProfile::spheroid(&crate::arith::parse_rational("3/4").unwrap())
                .unwrap()
                .closed_form_invariants()
                .unwrap()
                .clone(),
        ] {
            let mut prev = 0.0;
            for i in 0..400 {
                let total = bound_revolution_3(&inv, 1.0 + i as f64 * 0.75).unwrap().total;
                assert!(total > 0.0 && total >= prev);
                prev = total;
            }
        }
    }
}
