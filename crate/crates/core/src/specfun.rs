//! Complex-argument special functions used by the moment formulas.
//!
//! Everything here is pure and allocation free. Accuracy targets: gamma to
//! ~1e-13 relative on the right half-plane and through reflection, the
//! hypergeometric series to ~1e-12 on the parameter ranges the channel models use.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Arguments closer than this to a non-positive integer are treated as poles.
pub const GAMMA_POLE_TOLERANCE: f64 = 1e-12;

/// Largest |z| accepted by [`kummer_1f1`].
pub const KUMMER_Z_MAX: f64 = 30.0;

/// Above this `z` the Gauss series is replaced by Euler's transformation.
pub const GAUSS_EULER_SWITCH: f64 = 0.75;

const SERIES_EPS: f64 = 1e-16;
const KUMMER_MAX_TERMS: usize = 20_000;
const GAUSS_MAX_TERMS: usize = 20_000_000;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn lanczos_sum(w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (w + k as f64);
    }
    acc
}

fn check_gamma_pole(z: Complex64) -> Result<()> {
    let nearest = z.re.round();
    if nearest <= 0.0 && (z - nearest).norm() < GAMMA_POLE_TOLERANCE {
        return Err(Error::PoleAtArgument(z));
    }
    Ok(())
}

/// `sin(pi z)` with exact reduction of the integer part of `Re z`.
fn sin_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let frac = Complex64::new(z.re - n, z.im);
    let s = (frac * PI).sin();
    if (n as i64).rem_euclid(2) == 0 {
        s
    } else {
        -s
    }
}

/// Γ(z) for complex `z`, Lanczos on `Re z >= 0.5`, reflection elsewhere.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    check_gamma_pole(z)?;
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let g = complex_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(PI / (sin_pi(z) * g));
    }
    let w = z - 1.0;
    let t = w + LANCZOS_G + 0.5;
    let log_head = HALF_LN_2PI + (w + 0.5) * t.ln() - t;
    Ok(log_head.exp() * lanczos_sum(w))
}

fn log_gamma_right(z: Complex64) -> Complex64 {
    let w = z - 1.0;
    let t = w + LANCZOS_G + 0.5;
    HALF_LN_2PI + (w + 0.5) * t.ln() - t + lanczos_sum(w).ln()
}

/// Principal branch of ln Γ(z).
///
/// For `Re z < 0.5` the argument is walked up with `ln Γ(z) = ln Γ(z+n) - Σ ln(z+k)`,
/// which stays on the principal branch off the negative real axis (on it, the
/// value is the limit from above). Very negative real parts (< -200) fall back to
/// the reflection formula, whose imaginary part is then only correct modulo 2π.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_gamma_pole(z)?;
    if z.re >= 0.5 {
        return Ok(log_gamma_right(z));
    }
    if z.re < -200.0 {
        let one = Complex64::new(1.0, 0.0);
        return Ok(Complex64::new(PI.ln(), 0.0) - sin_pi(z).ln() - log_gamma_right(one - z));
    }
    let steps = (0.5 - z.re).ceil() as usize;
    let mut shift = Complex64::new(0.0, 0.0);
    for k in 0..steps {
        let mut term = z + k as f64;
        // keep real negatives on the upper side of the cut
        if term.im == 0.0 && term.re < 0.0 {
            term.im = 0.0;
        }
        shift += term.ln();
    }
    Ok(log_gamma_right(z + steps as f64) - shift)
}

/// Kummer's confluent hypergeometric function `1F1(a; b; z)` by direct Taylor series.
///
/// The series converges for every finite `z`; it is only trusted up to
/// `|z| <=` [`KUMMER_Z_MAX`], past which cancellation and term growth take over.
pub fn kummer_1f1(a: Complex64, b: f64, z: f64) -> Result<Complex64> {
    if !z.is_finite() || z.abs() > KUMMER_Z_MAX {
        return Err(Error::OutOfRange { what: "kummer_1f1", value: z, bound: KUMMER_Z_MAX });
    }
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::Domain(format!("1F1 lower parameter b = {b} is a non-positive integer")));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    if z == 0.0 {
        return Ok(sum);
    }
    for n in 0..KUMMER_MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) / (b + nf) * (z / (nf + 1.0));
        term *= ratio;
        sum += term;
        if term == Complex64::new(0.0, 0.0) {
            return Ok(sum);
        }
        if ratio.norm() < 0.5 && term.norm() <= SERIES_EPS * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::Divergence(z))
}

fn gauss_series(a: Complex64, b: Complex64, c: f64, z: f64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    if z == 0.0 {
        return Ok(sum);
    }
    for n in 0..GAUSS_MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        term *= ratio;
        sum += term;
        if term == Complex64::new(0.0, 0.0) {
            return Ok(sum);
        }
        if ratio.norm() < 1.0 && term.norm() <= SERIES_EPS * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::Divergence(z))
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for real `-1 < z < 1`.
///
/// Plain Gauss series up to `z = 0.75`; above that Euler's transformation
/// `(1-z)^(c-a-b) 2F1(c-a, c-b; c; z)`, which tames the algebraic growth of the
/// terms when `Re(a+b-c) > 0`.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: f64, z: f64) -> Result<Complex64> {
    if !z.is_finite() || z >= 1.0 || z <= -1.0 {
        return Err(Error::Divergence(z));
    }
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::Domain(format!("2F1 lower parameter c = {c} is a non-positive integer")));
    }
    if z <= GAUSS_EULER_SWITCH {
        return gauss_series(a, b, c, z);
    }
    let ca = Complex64::new(c, 0.0) - a;
    let cb = Complex64::new(c, 0.0) - b;
    let prefactor = ((ca - b) * (1.0 - z).ln()).exp();
    Ok(prefactor * gauss_series(ca, cb, c, z)?)
}

/// `e^{-|x|} I0(x)`, finite for every finite `x`.
pub(crate) fn bessel_i0_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x <= 30.0 {
        return (-x).exp() * i0_series(x);
    }
    // Hankel asymptotic series; terms shrink until k ~ 2x, far past what is needed here.
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= (2.0 * kf - 1.0).powi(2) / (8.0 * kf * x);
        sum += term;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < SERIES_EPS * sum {
            return sum;
        }
        k += 1.0;
    }
}

/// Modified Bessel function of the first kind, order zero.
///
/// Fails with [`Error::Overflow`] once `I0(x)` leaves the `f64` range (|x| ≳ 713.9).
pub fn bessel_i0(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("bessel_i0 of NaN".into()));
    }
    let ax = x.abs();
    if ax <= 30.0 {
        return Ok(i0_series(ax));
    }
    let scaled = bessel_i0_scaled(ax);
    let log_value = ax + scaled.ln();
    if log_value >= f64::MAX.ln() {
        return Err(Error::Overflow("bessel_i0"));
    }
    Ok(log_value.exp())
}
