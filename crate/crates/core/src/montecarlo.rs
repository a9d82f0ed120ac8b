//! Ground-truth outage engines.
//!
//! [`estimate_outage`] samples the end-to-end SNR directly. Work is cut into
//! fixed-size blocks, each drawn from its own counter-based substream, and the
//! per-block outage counts are summed in block order, so the result depends only
//! on `(seed, n_samples)` and never on the worker count.
//!
//! [`oracle_outage`] evaluates the outage probability by nested adaptive
//! quadrature. Writing `W_n = W_{n-1} X_n - ξ_n` with `W_0 = 1`, the link is
//! up iff every `W_n > 0`, and the outage probability of the tail starting at
//! hop `n` with incoming `W = w` obeys
//!
//! ```text
//! Out_n(w) = F_n(ξ_n/w) + ∫_0^∞ f_n(t + ξ_n/w) Out_{n+1}(w t) dt,   Out_N(w) = F_N(ξ_N/w)
//! ```
//!
//! with `p_o = Out_1(1)`.

use std::cell::RefCell;

use rand::distr::Distribution;
use statrs::distribution::{Beta, ContinuousCDF};

use crate::channels::GainSampler;
use crate::mellin::NetworkConfig;
use crate::parallel::{map_collect, Execution};
use crate::quadrature::{integrate_log_domain, Tolerance};
use crate::{Error, Result};

pub use crate::rng::RandomStream;

/// Samples drawn from one substream.
pub const SAMPLES_PER_BLOCK: u64 = 1 << 16;
pub const MIN_SAMPLES: u64 = 1000;
pub const CONFIDENCE: f64 = 0.95;
/// Largest hop count the nested-quadrature oracle accepts.
pub const ORACLE_MAX_HOPS: usize = 3;

/// A Monte Carlo outage estimate with its exact binomial 95% interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_samples: u64,
    pub n_outages: u64,
    pub seed: u64,
}

impl OutageEstimate {
    pub fn from_counts(n_outages: u64, n_samples: u64, seed: u64) -> Self {
        let (ci_low, ci_high) = clopper_pearson(n_outages, n_samples, CONFIDENCE);
        Self { p_hat: n_outages as f64 / n_samples as f64, ci_low, ci_high, n_samples, n_outages, seed }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    /// Half-width relative to `p_hat`; infinite when no outage was observed.
    pub fn relative_half_width(&self) -> f64 {
        self.half_width() / self.p_hat
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// Exact (Clopper–Pearson) two-sided interval for `x` successes in `n` trials.
pub fn clopper_pearson(x: u64, n: u64, confidence: f64) -> (f64, f64) {
    assert!(n > 0 && x <= n, "need 0 <= x <= n and n > 0");
    let alpha = 1.0 - confidence;
    let (xf, nf) = (x as f64, n as f64);
    let low = if x == 0 {
        0.0
    } else {
        Beta::new(xf, nf - xf + 1.0).expect("positive shapes").inverse_cdf(alpha / 2.0)
    };
    let high = if x == n {
        1.0
    } else {
        Beta::new(xf + 1.0, nf - xf).expect("positive shapes").inverse_cdf(1.0 - alpha / 2.0)
    };
    (low, high)
}

/// End-to-end SNR `γ̄ Π X_n / Σ_n ρ_n Π_{j>n} X_j`.
pub fn end_to_end_snr(gains: &[f64], rhos: &[f64], gamma_bar: f64) -> Result<f64> {
    if gains.len() != rhos.len() || gains.is_empty() {
        return Err(Error::DimensionMismatch { gains: gains.len(), rhos: rhos.len() });
    }
    let positive = |x: &f64| x.is_finite() && *x > 0.0;
    if !gains.iter().all(positive) || !rhos.iter().all(positive) || !positive(&gamma_bar) {
        return Err(Error::InvalidArgument("gains, noise ratios and gamma_bar must be positive and finite".into()));
    }
    Ok(snr_unchecked(gains, rhos, gamma_bar))
}

#[inline]
fn snr_unchecked(gains: &[f64], rhos: &[f64], gamma_bar: f64) -> f64 {
    let mut suffix = 1.0;
    let mut denom = 0.0;
    for (x, rho) in gains.iter().zip(rhos).rev() {
        denom += rho * suffix;
        suffix *= x;
    }
    gamma_bar * suffix / denom
}

/// Plain Monte Carlo outage estimate; an SNR equal to `γ_t` counts as outage.
pub fn estimate_outage(network: &NetworkConfig, gamma_bar: f64, n_samples: u64, seed: u64) -> Result<OutageEstimate> {
    estimate_outage_with(network, gamma_bar, n_samples, seed, Execution::default())
}

pub fn estimate_outage_with(
    network: &NetworkConfig,
    gamma_bar: f64,
    n_samples: u64,
    seed: u64,
    exec: Execution,
) -> Result<OutageEstimate> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {n_samples}")));
    }
    if !(gamma_bar.is_finite() && gamma_bar > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma_bar = {gamma_bar} must be positive and finite")));
    }
    let samplers: Vec<GainSampler> = network.hops().iter().map(|h| h.model.sampler()).collect();
    let rhos = network.rhos();
    let gamma_t = network.gamma_t();
    let blocks: Vec<u64> = (0..n_samples.div_ceil(SAMPLES_PER_BLOCK)).collect();
    let counts = map_collect(exec, &blocks, |&block| {
        let mut stream = RandomStream::new(seed, block);
        let len = SAMPLES_PER_BLOCK.min(n_samples - block * SAMPLES_PER_BLOCK);
        let mut gains = vec![0.0; samplers.len()];
        let mut outages = 0u64;
        for _ in 0..len {
            for (g, sampler) in gains.iter_mut().zip(&samplers) {
                *g = sampler.sample(&mut stream);
            }
            if snr_unchecked(&gains, &rhos, gamma_bar) <= gamma_t {
                outages += 1;
            }
        }
        outages
    });
    Ok(OutageEstimate::from_counts(counts.iter().sum(), n_samples, seed))
}

/// Default oracle accuracy for a network with `hops` hops.
pub fn default_oracle_tolerance(hops: usize) -> f64 {
    if hops <= 2 {
        1e-10
    } else {
        1e-8
    }
}

const ORACLE_REL_TOL: f64 = 1e-11;
const ORACLE_MAX_SEGMENTS: usize = 4000;

struct Oracle<'a> {
    network: &'a NetworkConfig,
    xis: Vec<f64>,
    failure: RefCell<Option<Error>>,
}

impl Oracle<'_> {
    fn outage(&self, n: usize, w: f64, tol: f64) -> f64 {
        let model = &self.network.hops()[n].model;
        let c = self.xis[n] / w;
        let base = model.cdf(c);
        if n + 1 == self.xis.len() || !c.is_finite() {
            return base;
        }
        // below t_lo the downstream outage is 1 to within the tolerance
        let t_lo = (1e-6 * self.xis[n + 1] / w).min(1e-3 * tol / model.pdf(c).max(1.0));
        let near = model.cdf(c + t_lo) - base;
        let mut t_hi = model.mean().max(c);
        while model.survival(c + t_hi) > 1e-3 * tol {
            t_hi *= 2.0;
        }
        if t_hi <= t_lo {
            return base + near;
        }
        let inner_tol = 0.1 * tol;
        let result = integrate_log_domain(
            |t| {
                let density = model.pdf(t + c);
                if density == 0.0 {
                    0.0
                } else {
                    density * self.outage(n + 1, w * t, inner_tol)
                }
            },
            t_lo,
            t_hi,
            1.0,
            Tolerance::new(tol, ORACLE_REL_TOL),
            ORACLE_MAX_SEGMENTS,
        );
        match result {
            Ok(r) => (base + near + r.value).min(1.0),
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }
}

/// Exact outage probability by nested quadrature, accurate to about `abs_tol`.
pub fn oracle_outage(network: &NetworkConfig, gamma_bar: f64, abs_tol: f64) -> Result<f64> {
    let n = network.len();
    if n > ORACLE_MAX_HOPS {
        return Err(Error::UnsupportedHopCount(n));
    }
    if !(gamma_bar.is_finite() && gamma_bar > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma_bar = {gamma_bar} must be positive and finite")));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {abs_tol} must be positive")));
    }
    let oracle = Oracle {
        network,
        xis: (0..n).map(|i| network.xi(i, gamma_bar)).collect(),
        failure: RefCell::new(None),
    };
    let p = oracle.outage(0, 1.0, abs_tol);
    match oracle.failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(p.clamp(0.0, 1.0)),
    }
}

/// `K_1(z) = ∫_0^∞ e^{-z cosh t} cosh t dt` by the trapezoidal rule, which
/// converges geometrically for this analytic, doubly-exponentially decaying integrand.
pub fn bessel_k1(z: f64) -> f64 {
    assert!(z > 0.0, "K1 needs a positive argument");
    let h = 0.02;
    let t_max = (60.0 / z).max(1.0).acosh() + 1.0;
    let steps = (t_max / h).ceil() as usize;
    let f = |t: f64| {
        let c = t.cosh();
        (-z * c).exp() * c
    };
    h * (0.5 * f(0.0) + (1..=steps).map(|i| f(i as f64 * h)).sum::<f64>())
}

/// Closed-form outage of a two-hop Rayleigh link with mean gains `θ_1, θ_2`:
/// `1 - e^{-ξ_1/θ_1} z K_1(z)` with `z = 2 sqrt(ξ_2 / (θ_1 θ_2))`.
pub fn two_hop_rayleigh_outage(xi1: f64, xi2: f64, theta1: f64, theta2: f64) -> f64 {
    let z = 2.0 * (xi2 / (theta1 * theta2)).sqrt();
    let survive = (-xi1 / theta1).exp() * z * bessel_k1(z);
    1.0 - survive
}
