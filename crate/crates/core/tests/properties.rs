use latdisc_core::arith::{format_rational, isqrt, parse_rational, quadratic_interval, rat_floor_sqrt};
use latdisc_core::bounds::{
    bound_circle_2, bound_ellipsoid_1b, bound_revolution_3, bound_sphere_1a, power_integral, psi_value,
};
use latdisc_core::exactcount::{brute_count_form, count_circle, count_ellipse, count_ellipsoid};
use latdisc_core::forms::{Dimension, QuadraticForm};
use latdisc_core::harness::{VerificationReport, VerificationRow};
use latdisc_core::profiles::RevolutionProfile;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Symmetric positive definite `MᵀM + D` with entries of M in ±3/den.
fn form_strategy(dim: usize) -> impl Strategy<Value = QuadraticForm> {
    (
        proptest::collection::vec((-3i64..=3, 1i64..=4), dim * dim),
        proptest::collection::vec((1i64..=6, 1i64..=3), dim),
    )
        .prop_map(move |(m, d)| {
            let m: Vec<BigRational> = m.into_iter().map(|(n, den)| rat(n, den)).collect();
            let entries = (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            let mut s: BigRational = (0..dim).map(|k| &m[k * dim + i] * &m[k * dim + j]).sum();
                            if i == j {
                                s += rat(d[i].0, 2 * d[i].1);
                            }
                            s
                        })
                        .collect()
                })
                .collect();
            QuadraticForm::new(entries).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn isqrt_brackets(n in any::<u128>(), shift in 0u32..80) {
        let n = BigInt::from(n) << shift;
        let s = isqrt(&n).unwrap();
        prop_assert!(&s * &s <= n);
        prop_assert!((&s + 1) * (&s + 1) > n);
    }

    #[test]
    fn rational_floor_sqrt_brackets(p in 0i64..1_000_000, d in 1i64..1000) {
        let x = rat(p, d);
        let s = BigRational::from_integer(rat_floor_sqrt(&x).unwrap());
        prop_assert!(&s * &s <= x);
        let next = &s + rat(1, 1);
        prop_assert!(&next * &next > x);
    }

    #[test]
    fn quadratic_interval_is_exact(a in 1i128..50, h in -10_000i128..10_000, c in -1_000_000i128..1000) {
        let q = |x: i128| a * x * x + 2 * h * x + c;
        match quadratic_interval(&a, &h, &c) {
            None => {
                // The real minimum at -h/a is positive near both neighbouring integers.
                let x0 = (-h).div_euclid(a);
                prop_assert!(q(x0) > 0 && q(x0 + 1) > 0);
            }
            Some((lo, hi)) => {
                prop_assert!(q(lo) <= 0 && q(hi) <= 0);
                prop_assert!(q(lo - 1) > 0 && q(hi + 1) > 0);
            }
        }
    }

    #[test]
    fn rational_text_round_trip(n in -100_000i64..100_000, d in 1i64..2000) {
        let x = rat(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn binary_counts_match_brute_force(form in form_strategy(2), num in 0i64..200, den in 1i64..5) {
        let threshold = rat(num, den);
        prop_assert_eq!(count_ellipse(&form, &threshold).unwrap(), brute_count_form(&form, &threshold));
    }

    #[test]
    fn ternary_counts_match_brute_force(form in form_strategy(3), num in 0i64..80, den in 1i64..5) {
        let threshold = rat(num, den);
        prop_assert_eq!(count_ellipsoid(&form, &threshold).unwrap(), brute_count_form(&form, &threshold));
    }

    #[test]
    fn counts_are_invariant_under_joint_scaling(form in form_strategy(3), num in 0i64..60, lambda in 1i64..7) {
        let scaled = QuadraticForm::new(
            form.entries().iter().map(|r| r.iter().map(|x| x * rat(lambda, 1)).collect()).collect(),
        ).unwrap();
        let threshold = rat(num, 1);
        prop_assert_eq!(
            count_ellipsoid(&form, &threshold).unwrap(),
            count_ellipsoid(&scaled, &(threshold * rat(lambda, 1))).unwrap()
        );
    }

    #[test]
    fn circle_count_is_monotone(a in 0i64..5000, b in 0i64..5000) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(count_circle(&rat(lo, 1)).unwrap() <= count_circle(&rat(hi, 1)).unwrap());
    }

    #[test]
    fn psi_range(w in -1e6f64..1e6) {
        let p = psi_value(w);
        prop_assert!((-0.5..0.5).contains(&p));
    }

    #[test]
    fn power_integrals_are_additive(m in -6.0f64..3.0, l in 0.1f64..5.0, a in 0.0f64..5.0, b in 0.0f64..5.0) {
        let mid = l + a;
        let up = mid + b;
        let whole = power_integral(m, l, Some(up)).unwrap();
        let parts = power_integral(m, l, Some(mid)).unwrap() + power_integral(m, mid, Some(up)).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-9 * (1.0 + whole.abs()));
        if m < -1.0 {
            let tail = power_integral(m, up, None).unwrap();
            let from_l = power_integral(m, l, None).unwrap();
            prop_assert!((from_l - whole - tail).abs() <= 1e-9 * (1.0 + from_l.abs()));
        }
    }

    #[test]
    fn bounds_are_positive_and_monotone(t in 10.0f64..2000.0, dt in 0.0f64..50.0) {
        let id = QuadraticForm::identity(Dimension::Three);
        let sphere = RevolutionProfile::sphere();
        let inv = sphere.closed_form_invariants().unwrap();
        for f in [
            &(|t: f64| bound_sphere_1a(t).unwrap()) as &dyn Fn(f64) -> _,
            &|t: f64| bound_circle_2(t).unwrap(),
            &|t: f64| bound_ellipsoid_1b(&id, t).unwrap(),
            &|t: f64| bound_revolution_3(inv, t).unwrap(),
        ] {
            let (a, b) = (f(t), f(t + dt));
            prop_assert!(a.total > 0.0);
            prop_assert!(a.total <= b.total);
            let sum: f64 = a.components.iter().map(|(_, v)| v).sum();
            prop_assert!((sum - a.total).abs() <= 1e-9 * a.total);
        }
    }

    #[test]
    fn profiles_are_even(p in -1000i64..=1000, alpha_num in 1i64..=8) {
        let z = rat(p, 1000);
        let profile = RevolutionProfile::spheroid(&rat(alpha_num, 8)).unwrap();
        let neg = -z.clone();
        prop_assert_eq!(profile.f_squared(&z).unwrap(), profile.f_squared(&neg).unwrap());
    }

    #[test]
    fn reports_round_trip(rows in proptest::collection::vec(
        (1i64..10_000, 1i64..8, any::<u64>(), -1e6f64..1e6, 1e-3f64..1e7, any::<bool>(), 0.0f64..1e4),
        0..20,
    )) {
        let mut rows: Vec<VerificationRow> = rows
            .into_iter()
            .map(|(n, d, count, disc, bound, valid, ms)| {
                VerificationRow::new(rat(n, d), BigInt::from(count), disc.abs() * 3.0, disc, bound, valid, ms)
            })
            .collect();
        rows.sort_by(|a, b| a.t.cmp(&b.t));
        rows.dedup_by(|a, b| a.t == b.t);
        let report = VerificationReport::from_rows(rows, 1.0);
        let csv = report.to_csv().unwrap();
        prop_assert_eq!(VerificationReport::from_csv(&csv).unwrap().to_csv().unwrap(), csv);
        let json = report.to_json().unwrap();
        prop_assert_eq!(VerificationReport::from_json(&json).unwrap().to_json().unwrap(), json);
        let expected: Vec<BigRational> =
            report.rows.iter().filter(|r| r.bound_valid && r.ratio > 1.0).map(|r| r.t.clone()).collect();
        prop_assert_eq!(&report.summary.violations, &expected);
    }
}
