//! Diversity metrics and asymptote-versus-simulation sweeps.

use std::f64::consts::E;

use crate::mellin::{build_expansion_with, leading_term, NetworkConfig, DEFAULT_LAMBDA_MAX};
use crate::montecarlo::{default_oracle_tolerance, estimate_outage_with, oracle_outage, ORACLE_MAX_HOPS};
use crate::{Error, Execution, Result};

/// `γ̄_dB = 10 log10 γ̄`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Finite-SNR diversity `-s0 - (k-1) ln ln γ̄ / ln γ̄`.
pub fn finite_diversity(s0: f64, k: u32, gamma_bar: f64) -> Result<f64> {
    if !(gamma_bar > E) {
        return Err(Error::Domain(format!("finite diversity needs gamma_bar > e, got {gamma_bar}")));
    }
    let l = gamma_bar.ln();
    Ok(-s0 - (k as f64 - 1.0) * l.ln() / l)
}

/// Log-log slopes `-Δ ln p / Δ ln γ̄` of adjacent points, reported at the
/// geometric midpoint of each pair.
pub fn empirical_slope(points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("slope estimation needs at least two points".into()));
    }
    for (index, &(g, p)) in points.iter().enumerate() {
        if !(p > 0.0) {
            return Err(Error::NonPositiveProbability { value: p, index });
        }
        if !(g > 0.0) {
            return Err(Error::InvalidArgument(format!("gamma_bar must be positive, got {g}")));
        }
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::InvalidArgument("gamma_bar values must be strictly increasing".into()));
    }
    Ok(points
        .windows(2)
        .map(|w| {
            let (g0, p0) = w[0];
            let (g1, p1) = w[1];
            ((g0 * g1).sqrt(), -(p1.ln() - p0.ln()) / (g1.ln() - g0.ln()))
        })
        .collect())
}

/// An inclusive dB grid `from, from + step, …, to`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DbRange {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl DbRange {
    pub fn new(from: f64, to: f64, step: f64) -> Result<Self> {
        if !(from.is_finite() && to.is_finite() && from < to) {
            return Err(Error::InvalidArgument(format!("dB range needs from < to, got [{from}, {to}]")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidArgument(format!("dB step must be positive, got {step}")));
        }
        Ok(Self { from, to, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.to - self.from) / self.step + 1e-9).floor() as usize;
        (0..=count).map(|i| self.from + i as f64 * self.step).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    /// Monte Carlo sample count per row; `None` skips simulation.
    pub mc_samples: Option<u64>,
    /// Adds the nested-quadrature oracle for networks of up to three hops.
    pub oracle: bool,
    pub lambda_max: u32,
    pub re_min: Option<f64>,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            mc_samples: None,
            oracle: false,
            lambda_max: DEFAULT_LAMBDA_MAX,
            re_min: None,
            seed: 42,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub gamma_bar_db: f64,
    pub p_asym: f64,
    pub p_mc: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub p_oracle: Option<f64>,
    /// Absent below `γ̄ = e`, where the finite-SNR diversity is undefined.
    pub d_finite: Option<f64>,
}

/// Evaluates the expansion, and optionally Monte Carlo and the oracle, on every
/// grid point. Row `i` simulates with seed `seed + i`.
pub fn sweep_compare(network: &NetworkConfig, range: DbRange, options: &SweepOptions) -> Result<Vec<SweepRow>> {
    let expansion = build_expansion_with(network, options.lambda_max, options.re_min, options.execution)?;
    let lead = leading_term(network)?;
    let use_oracle = options.oracle && network.len() <= ORACLE_MAX_HOPS;
    if options.oracle && !use_oracle {
        log::warn!("oracle skipped: {} hops exceeds the supported {ORACLE_MAX_HOPS}", network.len());
    }
    let mut rows = Vec::new();
    for (i, db) in range.points().into_iter().enumerate() {
        let g = db_to_linear(db);
        expansion.warn_if_unsettled(g);
        let mc = match options.mc_samples {
            Some(n) => Some(estimate_outage_with(network, g, n, options.seed.wrapping_add(i as u64), options.execution)?),
            None => None,
        };
        let p_oracle =
            if use_oracle { Some(oracle_outage(network, g, default_oracle_tolerance(network.len()))?) } else { None };
        rows.push(SweepRow {
            gamma_bar_db: db,
            p_asym: expansion.evaluate(g).value,
            p_mc: mc.map(|e| e.p_hat),
            ci_low: mc.map(|e| e.ci_low),
            ci_high: mc.map(|e| e.ci_high),
            p_oracle,
            d_finite: finite_diversity(lead.s0, lead.order, g).ok(),
        });
    }
    Ok(rows)
}
