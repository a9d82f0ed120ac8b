//! Per-hop channel gain models `X = α² |h|²`.
//!
//! Each model owns its density, CDF, complex-order moments `E[X^s]`, the pole
//! lattice of `s ↦ E[X^s]`, and a sampler. Nakagami-m and Weibull share the
//! density `ω/(θ^m ν) x^{m-1} exp(-(x/θ)^ω)` with `(ω, ν) = (1, Γ(m))` and
//! `(m, 1)` respectively.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use statrs::function::gamma::{gamma_lr, gamma_ur};

use crate::rng::RandomStream;
use crate::specfun::{bessel_i0_scaled, complex_gamma, gauss_2f1, kummer_1f1, log_gamma, KUMMER_Z_MAX};
use crate::{Error, Result};

/// Two pole locations closer than this are the same pole.
pub const POLE_TOLERANCE: f64 = 1e-9;

/// Smallest accepted Hoyt axial ratio; below it the `2F1` argument is too close to 1.
pub const HOYT_Q_MIN: f64 = 1e-3;

const MIXTURE_EPS: f64 = 1e-17;
const MIXTURE_MAX_TERMS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FadingFamily {
    Nakagami,
    Weibull,
    Rician,
    Hoyt,
}

impl FadingFamily {
    pub const ALL: [FadingFamily; 4] =
        [FadingFamily::Nakagami, FadingFamily::Weibull, FadingFamily::Rician, FadingFamily::Hoyt];

    pub fn name(self) -> &'static str {
        match self {
            FadingFamily::Nakagami => "nakagami",
            FadingFamily::Weibull => "weibull",
            FadingFamily::Rician => "rician",
            FadingFamily::Hoyt => "hoyt",
        }
    }

    /// Conventional name of the shape parameter (`m`, `K` or `q`).
    pub fn shape_name(self) -> &'static str {
        match self {
            FadingFamily::Nakagami | FadingFamily::Weibull => "m",
            FadingFamily::Rician => "K",
            FadingFamily::Hoyt => "q",
        }
    }

    /// The `b` of the left half-plane decay `|E[X^s]| = O(|s|^{-b|s|})`.
    ///
    /// Every supported family decays through a gamma factor (Stirling); Weibull's
    /// `Γ(1 + s/m)` gives `b = 1/m`, the rest `b = 1`. Heavy-tailed laws such as
    /// the log-normal have no such `b` and are not representable.
    pub fn decay_rate(self, shape: f64) -> f64 {
        match self {
            FadingFamily::Weibull => 1.0 / shape,
            _ => 1.0,
        }
    }
}

impl fmt::Display for FadingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FadingFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nakagami" | "nakagami-m" => Ok(FadingFamily::Nakagami),
            "weibull" => Ok(FadingFamily::Weibull),
            "rician" | "rice" => Ok(FadingFamily::Rician),
            "hoyt" | "nakagami-q" => Ok(FadingFamily::Hoyt),
            _ => Err(Error::UnsupportedFamily(s.to_string())),
        }
    }
}

/// Checks that `(family, shape, theta)` describes a supported gain law.
pub fn validate_model(family: FadingFamily, shape: f64, theta: f64) -> Result<()> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::ParameterOutOfRange { name: "theta", value: theta, expected: "0 < theta < inf" });
    }
    let ok = shape.is_finite()
        && match family {
            FadingFamily::Nakagami | FadingFamily::Weibull => shape > 0.0,
            FadingFamily::Rician => (0.0..=KUMMER_Z_MAX).contains(&shape),
            FadingFamily::Hoyt => (HOYT_Q_MIN..=1.0).contains(&shape),
        };
    if ok {
        return Ok(());
    }
    let (name, expected) = match family {
        FadingFamily::Nakagami | FadingFamily::Weibull => ("m", "m > 0"),
        FadingFamily::Rician => ("K", "0 <= K <= 30"),
        FadingFamily::Hoyt => ("q", "0.001 <= q <= 1"),
    };
    Err(Error::ParameterOutOfRange { name, value: shape, expected })
}

/// A validated fading gain model. Fields are private so every value in
/// circulation satisfies its family's parameter ranges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FadingModel {
    family: FadingFamily,
    shape: f64,
    theta: f64,
}

/// A pole of a Mellin-type function: location and multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleSpec {
    pub location: Complex64,
    pub order: u32,
}

impl PoleSpec {
    pub fn real(location: f64, order: u32) -> Self {
        Self { location: Complex64::new(location, 0.0), order }
    }
}

/// One hop of the relay chain: its gain law and noise-scaling factor `ρ_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HopConfig {
    pub model: FadingModel,
    pub rho: f64,
}

impl HopConfig {
    pub fn new(model: FadingModel, rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidNetwork(format!("noise ratio rho = {rho} must be positive and finite")));
        }
        Ok(Self { model, rho })
    }
}

fn cpow(base: f64, exponent: Complex64) -> Complex64 {
    (exponent * base.ln()).exp()
}

fn p_lower(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else {
        gamma_lr(a, x)
    }
}

fn q_upper(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x.is_infinite() {
        0.0
    } else {
        gamma_ur(a, x)
    }
}

impl FadingModel {
    pub fn new(family: FadingFamily, shape: f64, theta: f64) -> Result<Self> {
        validate_model(family, shape, theta)?;
        Ok(Self { family, shape, theta })
    }

    /// Builds a model from a family name such as `"rician"`.
    pub fn from_name(family: &str, shape: f64, theta: f64) -> Result<Self> {
        Self::new(family.parse()?, shape, theta)
    }

    pub fn nakagami(m: f64, theta: f64) -> Result<Self> {
        Self::new(FadingFamily::Nakagami, m, theta)
    }

    pub fn weibull(m: f64, theta: f64) -> Result<Self> {
        Self::new(FadingFamily::Weibull, m, theta)
    }

    pub fn rician(k: f64, theta: f64) -> Result<Self> {
        Self::new(FadingFamily::Rician, k, theta)
    }

    pub fn hoyt(q: f64, theta: f64) -> Result<Self> {
        Self::new(FadingFamily::Hoyt, q, theta)
    }

    pub fn family(&self) -> FadingFamily {
        self.family
    }

    /// `m`, `K` or `q` depending on the family.
    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn validate(&self) -> Result<()> {
        validate_model(self.family, self.shape, self.theta)
    }

    /// `(ω, ν)` of the shared Nakagami/Weibull density, `None` for the others.
    pub fn omega_nu(&self) -> Option<(f64, f64)> {
        match self.family {
            FadingFamily::Nakagami => Some((1.0, complex_gamma(Complex64::new(self.shape, 0.0)).ok()?.re)),
            FadingFamily::Weibull => Some((self.shape, 1.0)),
            _ => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match self.family {
            FadingFamily::Nakagami => self.shape * self.theta,
            FadingFamily::Weibull => {
                self.theta * log_gamma(Complex64::new(1.0 + 1.0 / self.shape, 0.0)).map(|v| v.re.exp()).unwrap_or(1.0)
            }
            FadingFamily::Rician | FadingFamily::Hoyt => self.theta,
        }
    }

    /// Location of the rightmost pole of `E[X^s]` and the spacing of the lattice.
    fn pole_lattice(&self) -> (f64, f64) {
        match self.family {
            FadingFamily::Nakagami => (-self.shape, 1.0),
            FadingFamily::Weibull => (-self.shape, self.shape),
            FadingFamily::Rician | FadingFamily::Hoyt => (-1.0, 1.0),
        }
    }

    pub fn rightmost_pole(&self) -> f64 {
        self.pole_lattice().0
    }

    /// Distance from `s` to the nearest pole of `E[X^s]`.
    pub fn pole_distance(&self, s: Complex64) -> f64 {
        let (first, step) = self.pole_lattice();
        let j = ((first - s.re) / step).round().max(0.0);
        (s - Complex64::new(first - j * step, 0.0)).norm()
    }

    fn check_pole(&self, s: Complex64) -> Result<()> {
        if self.pole_distance(s) < POLE_TOLERANCE {
            return Err(Error::PoleAtArgument(s));
        }
        Ok(())
    }

    fn hoyt_params(&self) -> (f64, f64) {
        let q2 = self.shape * self.shape;
        let r = (1.0 - q2) / (1.0 + q2);
        (r * r, 2.0 * self.shape / (1.0 + q2))
    }

    /// Density of `X` at `x` (zero for `x < 0`).
    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 || x.is_nan() {
            return 0.0;
        }
        let (m, th) = (self.shape, self.theta);
        match self.family {
            FadingFamily::Nakagami | FadingFamily::Weibull => {
                let (omega, ln_nu) = match self.family {
                    FadingFamily::Nakagami => (1.0, log_gamma(Complex64::new(m, 0.0)).map(|v| v.re).unwrap_or(0.0)),
                    _ => (m, 0.0),
                };
                if x == 0.0 {
                    return if m < 1.0 {
                        f64::INFINITY
                    } else if m == 1.0 {
                        omega / (th * ln_nu.exp())
                    } else {
                        0.0
                    };
                }
                let ln_f = omega.ln() - m * th.ln() - ln_nu + (m - 1.0) * x.ln() - (x / th).powf(omega);
                ln_f.exp()
            }
            FadingFamily::Rician => {
                let k = m;
                let y = (4.0 * k * (k + 1.0) * x / th).sqrt();
                (k + 1.0) / th * (-k - (k + 1.0) * x / th + y).exp() * bessel_i0_scaled(y)
            }
            FadingFamily::Hoyt => {
                let q2 = m * m;
                let rate = (1.0 + q2).powi(2) / (4.0 * q2 * th);
                let arg = (1.0 - q2 * q2) * x / (4.0 * q2 * th);
                (1.0 + q2) / (2.0 * m * th) * (arg - rate * x).exp() * bessel_i0_scaled(arg)
            }
        }
    }

    /// `P(X <= x)`, accurate in relative terms for small `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 || x.is_nan() {
            return 0.0;
        }
        let (m, th) = (self.shape, self.theta);
        match self.family {
            FadingFamily::Nakagami => p_lower(m, x / th),
            FadingFamily::Weibull => -(-(x / th).powf(m)).exp_m1(),
            FadingFamily::Rician => self.rician_mixture(x, p_lower, true),
            FadingFamily::Hoyt => self.hoyt_mixture(x, p_lower, true),
        }
    }

    /// `P(X > x)`, accurate in relative terms in the upper tail.
    pub fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 || x.is_nan() {
            return 1.0;
        }
        let (m, th) = (self.shape, self.theta);
        match self.family {
            FadingFamily::Nakagami => q_upper(m, x / th),
            FadingFamily::Weibull => (-(x / th).powf(m)).exp(),
            FadingFamily::Rician => self.rician_mixture(x, q_upper, false),
            FadingFamily::Hoyt => self.hoyt_mixture(x, q_upper, false),
        }
    }

    // Rician power is a Poisson(K) mixture of Gamma(j+1, θ/(K+1)) laws.
    fn rician_mixture(&self, x: f64, part: fn(f64, f64) -> f64, lower: bool) -> f64 {
        let k = self.shape;
        let u = (k + 1.0) * x / self.theta;
        let mut weight = (-k).exp();
        let mut sum = 0.0;
        for j in 0..MIXTURE_MAX_TERMS {
            let jf = j as f64;
            let term = part(jf + 1.0, u);
            sum += weight * term;
            let next = weight * k / (jf + 1.0);
            let ratio = k / (jf + 2.0);
            if jf + 1.0 > k && ratio < 1.0 {
                let tail = next / (1.0 - ratio);
                let bound = if lower { tail * term } else { tail };
                if bound <= MIXTURE_EPS * sum || tail < f64::MIN_POSITIVE {
                    break;
                }
            }
            weight = next;
        }
        sum
    }

    // Hoyt power is a mixture of Gamma(2k+1, 1/a) laws with weights √(1-z) C(2k,k) (z/4)^k.
    fn hoyt_mixture(&self, x: f64, part: fn(f64, f64) -> f64, lower: bool) -> f64 {
        let q2 = self.shape * self.shape;
        let rate = (1.0 + q2).powi(2) / (4.0 * q2 * self.theta);
        let (z, mut weight) = self.hoyt_params();
        let mut sum = 0.0;
        for k in 0..MIXTURE_MAX_TERMS {
            let kf = k as f64;
            let term = part(2.0 * kf + 1.0, rate * x);
            sum += weight * term;
            if z == 0.0 {
                break;
            }
            let next = weight * z * (2.0 * kf + 1.0) / (2.0 * kf + 2.0);
            let tail = next / (1.0 - z);
            let bound = if lower { tail * term } else { tail };
            if bound <= MIXTURE_EPS * sum || tail < f64::MIN_POSITIVE {
                break;
            }
            weight = next;
        }
        sum
    }

    /// `E[X^s]`, continued meromorphically to every non-pole `s`.
    pub fn moment(&self, s: Complex64) -> Result<Complex64> {
        self.check_pole(s)?;
        let one = Complex64::new(1.0, 0.0);
        let (m, th) = (self.shape, self.theta);
        match self.family {
            FadingFamily::Nakagami => {
                let norm = complex_gamma(Complex64::new(m, 0.0))?;
                Ok(cpow(th, s) * complex_gamma(s + m)? / norm)
            }
            FadingFamily::Weibull => Ok(cpow(th, s) * complex_gamma(one + s / m)?),
            FadingFamily::Rician => {
                let k = m;
                Ok((-k).exp() * cpow(th / (k + 1.0), s) * complex_gamma(s + 1.0)? * kummer_1f1(s + 1.0, 1.0, k)?)
            }
            FadingFamily::Hoyt => {
                let (z, pref) = self.hoyt_params();
                let f = gauss_2f1((s + 1.0) * 0.5, (s + 2.0) * 0.5, 1.0, z)?;
                Ok(cpow(pref, 2.0 * s + 1.0) * cpow(th, s) * complex_gamma(s + 1.0)? * f)
            }
        }
    }

    /// `ln E[X^s]` (any branch); used where products of moments could overflow.
    pub fn log_moment(&self, s: Complex64) -> Result<Complex64> {
        self.check_pole(s)?;
        let one = Complex64::new(1.0, 0.0);
        let (m, th) = (self.shape, self.theta);
        match self.family {
            FadingFamily::Nakagami => {
                Ok(s * th.ln() + log_gamma(s + m)? - log_gamma(Complex64::new(m, 0.0))?)
            }
            FadingFamily::Weibull => Ok(s * th.ln() + log_gamma(one + s / m)?),
            FadingFamily::Rician => {
                let k = m;
                Ok(-k + s * (th / (k + 1.0)).ln() + log_gamma(s + 1.0)? + kummer_1f1(s + 1.0, 1.0, k)?.ln())
            }
            FadingFamily::Hoyt => {
                let (z, pref) = self.hoyt_params();
                let f = gauss_2f1((s + 1.0) * 0.5, (s + 2.0) * 0.5, 1.0, z)?;
                Ok((2.0 * s + 1.0) * pref.ln() + s * th.ln() + log_gamma(s + 1.0)? + f.ln())
            }
        }
    }

    /// Poles of `s ↦ E[X^s]` with `Re s >= re_min`, rightmost first.
    ///
    /// Every pole comes from a single gamma factor and is simple; special
    /// parameter values where a hypergeometric zero cancels one are not
    /// filtered here.
    pub fn mellin_poles(&self, re_min: f64) -> Vec<PoleSpec> {
        let (first, step) = self.pole_lattice();
        let mut poles = Vec::new();
        let mut j = 0.0;
        loop {
            let p = first - j * step;
            if p < re_min {
                break;
            }
            poles.push(PoleSpec::real(p, 1));
            j += 1.0;
        }
        poles
    }

    pub fn sampler(&self) -> GainSampler {
        let (m, th) = (self.shape, self.theta);
        match self.family {
            FadingFamily::Nakagami => GainSampler::Gamma(Gamma::new(m, th).expect("validated shape and scale")),
            FadingFamily::Weibull => GainSampler::Weibull { theta: th, inv_m: 1.0 / m },
            FadingFamily::Rician => {
                GainSampler::Rician { scale: th / (2.0 * (m + 1.0)), shift: (2.0 * m).sqrt() }
            }
            FadingFamily::Hoyt => {
                let q2 = m * m;
                GainSampler::Hoyt { var1: th / (1.0 + q2), var2: th * q2 / (1.0 + q2) }
            }
        }
    }

    /// Draws one gain realization from `stream`.
    pub fn sample(&self, stream: &mut RandomStream) -> f64 {
        self.sampler().sample(stream)
    }
}

impl fmt::Display for FadingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}={}, theta={})", self.family, self.family.shape_name(), self.shape, self.theta)
    }
}

/// Precomputed sampler for one gain law.
#[derive(Clone, Copy, Debug)]
pub enum GainSampler {
    Gamma(Gamma<f64>),
    /// `θ (-ln U)^{1/m}`
    Weibull { theta: f64, inv_m: f64 },
    /// `scale · ((Z₁ + shift)² + Z₂²)`
    Rician { scale: f64, shift: f64 },
    /// `var1 Z₁² + var2 Z₂²`
    Hoyt { var1: f64, var2: f64 },
}

impl Distribution<f64> for GainSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            GainSampler::Gamma(g) => g.sample(rng),
            GainSampler::Weibull { theta, inv_m } => {
                let u: f64 = rng.random();
                theta * (-(1.0 - u).ln()).powf(inv_m)
            }
            GainSampler::Rician { scale, shift } => {
                let z1: f64 = rng.sample(StandardNormal);
                let z2: f64 = rng.sample(StandardNormal);
                scale * ((z1 + shift).powi(2) + z2 * z2)
            }
            GainSampler::Hoyt { var1, var2 } => {
                let z1: f64 = rng.sample(StandardNormal);
                let z2: f64 = rng.sample(StandardNormal);
                var1 * z1 * z1 + var2 * z2 * z2
            }
        }
    }
}
