//! High-SNR outage asymptotics for N-hop fixed-gain amplify-and-forward relay links.
//!
//! The per-hop channel gains `X_n` enter only through their complex-order moments
//! `E[X_n^s]`. The rightmost pole of the moment product and its order fix the
//! outage decay law `(ln γ̄)^(k-1) γ̄^(s0)`; the residues of a formal Mellin series
//! give the coefficients. Monte Carlo and nested-quadrature engines provide the
//! ground truth that the asymptotes are checked against.
//!
//! Module map:
//! - [`specfun`]: complex gamma, log-gamma, `1F1`, `2F1`, `I0`.
//! - [`channels`]: Nakagami-m, Weibull, Rician and Hoyt gain models.
//! - [`mellin`]: pole bookkeeping, contour residues, the asymptotic expansion.
//! - [`montecarlo`]: end-to-end SNR sampling and exact quadrature oracles.
//! - [`analysis`]: diversity metrics and theory-vs-simulation sweeps.

pub mod analysis;
pub mod channels;
mod error;
pub mod mellin;
pub mod montecarlo;
mod parallel;
pub mod quadrature;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use parallel::{with_thread_cap, Execution};

pub use analysis::{db_to_linear, empirical_slope, finite_diversity, sweep_compare, DbRange, SweepOptions, SweepRow};
pub use channels::{FadingFamily, FadingModel, HopConfig, PoleSpec};
pub use mellin::{
    build_expansion, enumerate_poles, evaluate_expansion, leading_term, product_moment, residue_at,
    AsymptoteTerm, AsymptoticExpansion, CompositionTerm, LeadingTerm, NetworkConfig,
};
pub use montecarlo::{end_to_end_snr, estimate_outage, oracle_outage, OutageEstimate};
pub use rng::RandomStream;
