//! Fourier transforms of the unit ball and disc indicators, as functions of
//! the support value `g`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::integrate;

/// `max_x |J1(x)|·√x`, attained near `x = 2.16587`.
pub const BESSEL_PEAK: f64 = 0.82503;

// Below this x = 2πg the closed form cancels badly; the series is used.
const SERIES_CUTOFF: f64 = 0.5;

fn check_g(g: f64) -> Result<()> {
    if g > 0.0 && g.is_finite() {
        Ok(())
    } else {
        Err(Error::NonpositiveG(g))
    }
}

/// `sin(2πg)/(2π²g³) − cos(2πg)/(πg²)`.
pub fn fourier_ball_kernel(g: f64) -> Result<f64> {
    check_g(g)?;
    let x = 2.0 * PI * g;
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        let series = 1.0 - x2 / 10.0 + x2 * x2 / 280.0 - x2.powi(3) / 15_120.0 + x2.powi(4) / 1_330_560.0;
        return Ok(4.0 * PI / 3.0 * series);
    }
    Ok(x.sin() / (2.0 * PI * PI * g.powi(3)) - x.cos() / (PI * g * g))
}

/// `(1/(πg²))·√(1 + 1/(4π²g²))`, an envelope of the ball kernel.
pub fn ball_kernel_majorant(g: f64) -> f64 {
    (1.0 + 1.0 / (4.0 * PI * PI * g * g)).sqrt() / (PI * g * g)
}

/// `2∫_{−1}^{1} √(1−v²)·cos(2πgv) dv = J1(2πg)/g`.
pub fn fourier_disc_kernel(g: f64) -> Result<f64> {
    check_g(g)?;
    // v = sin θ removes the endpoint square-root singularity.
    let w = 2.0 * PI * g;
    let half = integrate(
        |theta: f64| {
            let c = theta.cos();
            c * c * (w * theta.sin()).cos()
        },
        0.0,
        PI / 2.0,
        1e-13,
    );
    Ok(4.0 * half)
}

#[cfg(test)]
mod tests {
    use super::*;

    // J1(x) = (1/2π)∫_0^{2π} cos(θ − x sin θ) dθ; the trapezoid rule is
    // spectrally accurate for this periodic integrand.
    fn bessel_j1(x: f64) -> f64 {
        let n = 512;
        let h = 2.0 * PI / n as f64;
        (0..n).map(|k| (k as f64 * h - x * (k as f64 * h).sin()).cos()).sum::<f64>() / n as f64
    }

    #[test]
    fn ball_kernel_examples() {
        assert!((fourier_ball_kernel(0.5).unwrap() - 4.0 / PI).abs() < 1e-12);
        let near_zero = fourier_ball_kernel(1e-4).unwrap();
        assert!((near_zero - 4.0 * PI / 3.0).abs() <= 1e-6 * 4.0 * PI / 3.0);
        assert!(fourier_ball_kernel(10.0).unwrap().abs() <= ball_kernel_majorant(10.0));
        assert!(matches!(fourier_ball_kernel(0.0), Err(Error::NonpositiveG(_))));
    }

    #[test]
    fn ball_series_joins_closed_form() {
        let g = SERIES_CUTOFF / (2.0 * PI);
        let series = fourier_ball_kernel(g * (1.0 - 1e-12)).unwrap();
        let x = 2.0 * PI * g;
        let closed = x.sin() / (2.0 * PI * PI * g.powi(3)) - x.cos() / (PI * g * g);
        assert!((series - closed).abs() < 1e-10);
    }

    #[test]
    fn disc_kernel_matches_bessel_integral() {
        for g in [0.05, 0.3, 1.0, 2.5, 4.0, 12.0] {
            let x = 2.0 * PI * g;
            let expected = bessel_j1(x) / g;
            let got = fourier_disc_kernel(g).unwrap();
            assert!((got - expected).abs() < 1e-10, "g={g}: {got} vs {expected}");
        }
        assert!((fourier_disc_kernel(1e-4).unwrap() - PI).abs() < 1e-6);
    }

    #[test]
    fn disc_kernel_peak() {
        let g = 2.16587 / (2.0 * PI);
        let v = fourier_disc_kernel(g).unwrap().abs() * g.powf(1.5) * (2.0 * PI).sqrt();
        assert!((v - BESSEL_PEAK).abs() <= 5e-4, "{v}");
    }

    #[test]
    fn disc_kernel_decay() {
        for i in 0..=200 {
            let g = 0.1 * 1000f64.powf(i as f64 / 200.0);
            let v = fourier_disc_kernel(g).unwrap().abs();
            assert!(v <= g.powf(-1.5) / 3.0, "g={g}");
        }
    }
}
