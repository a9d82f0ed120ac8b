//! Residue calculus for the outage probability.
//!
//! The outage probability admits the formal series
//!
//! ```text
//! p_o = 1 - Σ_{λ_N ≥ 0} Σ_{ℓ ⊢ λ_N} Π_{j<N} (-ρ_j/ρ_N)^{ℓ_j} / ℓ_j!  · I(ℓ)
//! I(ℓ) = (1/2πi) ∫ ξ_N^{-s} Γ(s+λ_N)/Γ(s+1) Π_j E[X_j^{s+λ_j}] ds
//! ```
//!
//! where `ℓ` runs over weak compositions of `λ_N` into `N-1` parts and
//! `λ_j = ℓ_1 + … + ℓ_{j-1}`. Closing each contour to the left turns `I(ℓ)` into
//! a sum of residues; a pole of order `k` at `s_p` contributes a polynomial of
//! degree `k-1` in `ln γ̄` times `γ̄^{s_p}`. The `λ_N = 0` residue at the origin is
//! exactly 1 and cancels the leading 1.
//!
//! Residues are computed from the Taylor coefficients of
//! `H(s) = (s - s_p)^k f(s)`, which are read off a 64-node trapezoidal rule on a
//! circle around the pole.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channels::{HopConfig, PoleSpec, POLE_TOLERANCE};
use crate::parallel::{map_collect, Execution};
use crate::{Error, FadingModel, Result};

/// Pole locations closer than this are merged into one pole.
pub const MERGE_TOLERANCE: f64 = POLE_TOLERANCE;
/// Distinct poles closer than this trigger a conditioning warning.
pub const NEAR_COINCIDENCE: f64 = 1e-3;
pub const CONTOUR_NODES: usize = 64;
pub const MAX_CONTOUR_RADIUS: f64 = 0.5;
/// Contour radius as a fraction of the distance to the nearest other singular point.
pub const RADIUS_FRACTION: f64 = 0.4;
pub const ILL_CONDITIONED_RATIO: f64 = 1e12;
/// `|H(s_p)|` below this fraction of `max |H|` on the contour lowers the pole order.
pub const ORDER_REDUCTION_THRESHOLD: f64 = 1e-10;
pub const DEFAULT_LAMBDA_MAX: u32 = 2;
/// Default `re_min` is the rightmost non-origin pole minus this offset.
pub const DEFAULT_RE_MIN_OFFSET: f64 = 1.5;
/// Relative change between adjacent truncation orders that triggers a warning.
pub const TRUNCATION_WARN_RATIO: f64 = 0.1;

/// The full problem statement: ordered hops and the outage threshold `γ_t` (linear).
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkConfig {
    hops: Vec<HopConfig>,
    gamma_t: f64,
}

impl NetworkConfig {
    pub fn new(hops: Vec<HopConfig>, gamma_t: f64) -> Result<Self> {
        if hops.is_empty() {
            return Err(Error::InvalidNetwork("at least one hop is required".into()));
        }
        if !(gamma_t.is_finite() && gamma_t > 0.0) {
            return Err(Error::InvalidNetwork(format!("threshold gamma_t = {gamma_t} must be positive and finite")));
        }
        if (hops[0].rho - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidNetwork(format!("first hop must have rho = 1, got {}", hops[0].rho)));
        }
        for hop in &hops {
            if !(hop.rho.is_finite() && hop.rho > 0.0) {
                return Err(Error::InvalidNetwork(format!("noise ratio rho = {} must be positive", hop.rho)));
            }
            hop.model.validate()?;
        }
        Ok(Self { hops, gamma_t })
    }

    /// All hops with `ρ_n = 1`.
    pub fn with_unit_rhos(models: &[FadingModel], gamma_t: f64) -> Result<Self> {
        let hops = models.iter().map(|&model| HopConfig { model, rho: 1.0 }).collect();
        Self::new(hops, gamma_t)
    }

    pub fn hops(&self) -> &[HopConfig] {
        &self.hops
    }

    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    pub fn gamma_t(&self) -> f64 {
        self.gamma_t
    }

    pub fn rhos(&self) -> Vec<f64> {
        self.hops.iter().map(|h| h.rho).collect()
    }

    /// `ξ_n = ρ_n γ_t / γ̄` for the zero-based hop index `n`.
    pub fn xi(&self, n: usize, gamma_bar: f64) -> f64 {
        self.hops[n].rho * self.gamma_t / gamma_bar
    }

    /// Rightmost pole of the moment product `G(s)`.
    pub fn rightmost_pole(&self) -> f64 {
        self.hops.iter().map(|h| h.model.rightmost_pole()).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `G(s) = Π_n E[X_n^s]`, accumulated in log space.
pub fn product_moment(network: &NetworkConfig, s: Complex64) -> Result<Complex64> {
    let mut log_sum = Complex64::new(0.0, 0.0);
    for hop in network.hops() {
        log_sum += hop.model.log_moment(s)?;
    }
    Ok(log_sum.exp())
}

/// All weak compositions of `total` into `parts` nonnegative parts.
pub fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn fill(rest: u32, slot: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot + 1 == current.len() {
            current[slot] = rest;
            out.push(current.clone());
            return;
        }
        for first in (0..=rest).rev() {
            current[slot] = first;
            fill(rest - first, slot + 1, current, out);
        }
    }
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    fill(total, 0, &mut vec![0; parts], &mut out);
    out
}

/// One term of the outer double sum: a weak composition with its prefix sums
/// and its coefficient `Π (-ρ_j/ρ_N)^{ℓ_j} / ℓ_j!`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionTerm {
    pub ell: Vec<u32>,
    pub lambda_total: u32,
    /// `λ_1 … λ_N`; `λ_1 = 0` and `λ_N = lambda_total`.
    pub lambda_partial: Vec<u32>,
    pub coefficient: f64,
}

impl CompositionTerm {
    pub fn new(network: &NetworkConfig, ell: Vec<u32>) -> Result<Self> {
        let n = network.len();
        if ell.len() + 1 != n {
            return Err(Error::InvalidArgument(format!("composition has {} parts, expected {}", ell.len(), n - 1)));
        }
        let rho_n = network.hops()[n - 1].rho;
        let mut lambda_partial = Vec::with_capacity(n);
        let mut acc = 0u32;
        let mut coefficient = 1.0;
        lambda_partial.push(0);
        for (j, &l) in ell.iter().enumerate() {
            acc += l;
            lambda_partial.push(acc);
            let ratio = -network.hops()[j].rho / rho_n;
            let mut factor = 1.0;
            for i in 1..=l {
                factor *= ratio / i as f64;
            }
            coefficient *= factor;
        }
        Ok(Self { ell, lambda_total: acc, lambda_partial, coefficient })
    }

    /// All composition terms with the given `λ_N`.
    pub fn enumerate(network: &NetworkConfig, lambda_total: u32) -> Vec<Self> {
        weak_compositions(lambda_total, network.len() - 1)
            .into_iter()
            .map(|ell| Self::new(network, ell).expect("part count matches the network"))
            .collect()
    }
}

/// The `ξ`-free part of the integrand of `I(ℓ)`:
/// `Γ(s+λ_N)/Γ(s+1) Π_j E[X_j^{s+λ_j}]`.
struct TermIntegrand<'a> {
    network: &'a NetworkConfig,
    shifts: &'a [u32],
    lambda_total: u32,
}

impl TermIntegrand<'_> {
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        let mut log_sum = Complex64::new(0.0, 0.0);
        for (hop, &shift) in self.network.hops().iter().zip(self.shifts) {
            log_sum += hop.model.log_moment(s + shift as f64)?;
        }
        // Γ(s+λ)/Γ(s+1) is 1/s for λ = 0 and the polynomial (s+1)…(s+λ-1) otherwise.
        let prefactor = if self.lambda_total == 0 {
            Complex64::new(1.0, 0.0) / s
        } else {
            (1..self.lambda_total).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (s + i as f64))
        };
        Ok(prefactor * log_sum.exp())
    }
}

fn check_shifts(network: &NetworkConfig, shifts: &[u32], lambda_total: u32) -> Result<()> {
    let ok = shifts.len() == network.len()
        && shifts.first() == Some(&0)
        && shifts.windows(2).all(|w| w[0] <= w[1])
        && *shifts.last().expect("nonempty") == lambda_total;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "shifts {shifts:?} are not the prefix sums of a composition of {lambda_total} for {} hops",
            network.len()
        )))
    }
}

/// Net pole orders of the term integrand at every candidate point with
/// `Re s >= re_min`, merged and sorted rightmost first. Points whose order
/// cancels to zero or below are kept so callers can stay clear of them.
fn singular_points(network: &NetworkConfig, shifts: &[u32], lambda_total: u32, re_min: f64) -> Vec<(f64, i32)> {
    let mut raw: Vec<(f64, i32)> = Vec::new();
    for (hop, &shift) in network.hops().iter().zip(shifts) {
        let shift = shift as f64;
        for pole in hop.model.mellin_poles(re_min + shift) {
            raw.push((pole.location.re - shift, pole.order as i32));
        }
    }
    if lambda_total == 0 {
        raw.push((0.0, 1));
    }
    // zeros of (s+1)…(s+λ-1)
    for i in 1..lambda_total {
        let z = -(i as f64);
        if z >= re_min {
            raw.push((z, -1));
        }
    }
    raw.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut merged: Vec<(f64, i32)> = Vec::new();
    for (loc, order) in raw {
        match merged.last_mut() {
            Some(last) if (last.0 - loc).abs() < MERGE_TOLERANCE => last.1 += order,
            Some(last) => {
                if last.0 - loc < NEAR_COINCIDENCE {
                    log::warn!(
                        "poles at {} and {loc} are {:.2e} apart; residues there are poorly conditioned",
                        last.0,
                        last.0 - loc
                    );
                }
                merged.push((loc, order));
            }
            None => merged.push((loc, order)),
        }
    }
    merged
}

/// Poles of the term integrand `Γ(s+λ_N)/Γ(s+1) Π_j E[X_j^{s+λ_j}]` with
/// `Re s >= re_min`, rightmost first, with merged net orders.
///
/// `shifts` are `λ_1 … λ_N`. For `λ_N = 0` the prefactor reduces to `1/s` and
/// contributes the simple pole at the origin.
pub fn enumerate_poles(
    network: &NetworkConfig,
    shifts: &[u32],
    lambda_total: u32,
    re_min: f64,
) -> Result<Vec<PoleSpec>> {
    check_shifts(network, shifts, lambda_total)?;
    Ok(singular_points(network, shifts, lambda_total, re_min)
        .into_iter()
        .filter(|&(_, order)| order > 0)
        .map(|(loc, order)| PoleSpec::real(loc, order as u32))
        .collect())
}

/// Taylor data of `H(s) = (s - s_p)^k f(s)` at a pole `s_p` of effective order `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentData {
    pub location: f64,
    /// Effective order after numerical order reduction; 0 means no pole.
    pub order: u32,
    /// `H^{(0)}(s_p) … H^{(k-1)}(s_p)`.
    pub derivatives: Vec<f64>,
    pub radius: f64,
}

impl LaurentData {
    /// Residue of `f` itself: `H^{(k-1)}(s_p) / (k-1)!`.
    pub fn residue(&self) -> f64 {
        match self.order {
            0 => 0.0,
            k => self.derivatives[k as usize - 1] / factorial(k - 1),
        }
    }

    /// Residue of `ξ^{-s} f(s)` with `ln ξ = log_scale - ln γ̄`, as coefficients
    /// `c_i` of `Σ_i c_i (ln γ̄)^i γ̄^{s_p}`.
    ///
    /// From `res = 1/(k-1)! Σ_m C(k-1,m) H^{(k-1-m)}(s_p) (-ln ξ)^m ξ^{-s_p}`,
    /// expanding `(-ln ξ)^m = (ln γ̄ - log_scale)^m` binomially.
    pub fn log_polynomial(&self, log_scale: f64) -> Vec<f64> {
        let k = self.order as usize;
        if k == 0 {
            return Vec::new();
        }
        let prefactor = (-self.location * log_scale).exp() / factorial(self.order - 1);
        (0..k)
            .map(|i| {
                (i..k)
                    .map(|m| {
                        binomial(k - 1, m) * binomial(m, i) * (-log_scale).powi((m - i) as i32) * self.derivatives[k - 1 - m]
                    })
                    .sum::<f64>()
                    * prefactor
            })
            .collect()
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Laurent data of `f` at a real pole via the Cauchy integral on a circle.
///
/// The circle has radius `min(0.4 · nearest_singularity, 0.5)` and
/// [`CONTOUR_NODES`] nodes; `H^{(n)}(s_p) = n!/r^n · (1/M) Σ_j H(s_j) e^{-inθ_j}`.
/// If `H(s_p)` vanishes relative to `H` on the circle the order is lowered
/// and the coefficients re-read.
pub fn residue_at<F>(f: F, pole: &PoleSpec, nearest_singularity: f64) -> Result<LaurentData>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let radius = (RADIUS_FRACTION * nearest_singularity).min(MAX_CONTOUR_RADIUS);
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad nearest-singularity distance {nearest_singularity}")));
    }
    let center = pole.location;
    let mut order = pole.order;
    let directions: Vec<Complex64> =
        (0..CONTOUR_NODES).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / CONTOUR_NODES as f64)).collect();

    let mut values = Vec::with_capacity(CONTOUR_NODES);
    for dir in &directions {
        let offset = dir * radius;
        values.push(f(center + offset)? * offset.powu(order));
    }
    let (lo, hi) = values.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v.norm()), hi.max(v.norm())));
    let ratio = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if ratio > ILL_CONDITIONED_RATIO || !hi.is_finite() {
        return Err(Error::IllConditionedContour { location: center.re, ratio });
    }

    let coefficient = |values: &[Complex64], n: usize| -> Complex64 {
        values.iter().zip(&directions).map(|(v, d)| v * d.powi(-(n as i32))).sum::<Complex64>()
            / CONTOUR_NODES as f64
    };
    while order > 0 {
        let scale = values.iter().fold(0.0f64, |acc, v| acc.max(v.norm()));
        if coefficient(&values, 0).norm() >= ORDER_REDUCTION_THRESHOLD * scale {
            break;
        }
        log::debug!("pole at {} has effective order {} (nominal {})", center.re, order - 1, pole.order);
        for (v, d) in values.iter_mut().zip(&directions) {
            *v /= d * radius;
        }
        order -= 1;
    }

    let derivatives =
        (0..order as usize).map(|n| coefficient(&values, n).re * factorial(n as u32) / radius.powi(n as i32)).collect();
    Ok(LaurentData { location: center.re, order, derivatives, radius })
}

/// One `Σ_i c_i (ln γ̄)^i γ̄^{exponent}` term of the outage expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoteTerm {
    pub exponent: f64,
    pub log_coeffs: Vec<f64>,
}

impl AsymptoteTerm {
    pub fn eval(&self, gamma_bar: f64) -> f64 {
        let l = gamma_bar.ln();
        let poly = self.log_coeffs.iter().rev().fold(0.0, |acc, c| acc * l + c);
        poly * (self.exponent * l).exp()
    }

    /// Highest power of `ln γ̄` plus one.
    pub fn order(&self) -> usize {
        self.log_coeffs.len()
    }
}

struct Contribution {
    exponent: f64,
    coeffs: Vec<f64>,
}

/// Sums contributions exponent by exponent, in input order.
fn accumulate<'a>(contribs: impl IntoIterator<Item = &'a Contribution>) -> Vec<AsymptoteTerm> {
    let mut terms: Vec<AsymptoteTerm> = Vec::new();
    for c in contribs {
        let slot = match terms.iter().position(|t| (t.exponent - c.exponent).abs() < MERGE_TOLERANCE) {
            Some(i) => i,
            None => {
                terms.push(AsymptoteTerm { exponent: c.exponent, log_coeffs: Vec::new() });
                terms.len() - 1
            }
        };
        let dst = &mut terms[slot].log_coeffs;
        if dst.len() < c.coeffs.len() {
            dst.resize(c.coeffs.len(), 0.0);
        }
        for (d, v) in dst.iter_mut().zip(&c.coeffs) {
            *d += v;
        }
    }
    for t in &mut terms {
        let scale = t.log_coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        while t.log_coeffs.last().is_some_and(|c| c.abs() <= 1e-12 * scale) {
            t.log_coeffs.pop();
        }
    }
    terms.retain(|t| !t.log_coeffs.is_empty());
    terms.sort_by(|a, b| b.exponent.total_cmp(&a.exponent));
    terms
}

struct TermResidues {
    lambda: u32,
    contributions: Vec<Contribution>,
    origin_residue: Option<f64>,
}

fn term_residues(network: &NetworkConfig, term: &CompositionTerm, re_min: f64) -> Result<TermResidues> {
    let integrand = TermIntegrand { network, shifts: &term.lambda_partial, lambda_total: term.lambda_total };
    // look past re_min so circles near the cut-off still see their neighbours
    let points = singular_points(network, &term.lambda_partial, term.lambda_total, re_min - 2.0);
    let log_scale = (network.gamma_t() * network.hops()[network.len() - 1].rho).ln();
    let mut contributions = Vec::new();
    let mut origin_residue = None;
    for (idx, &(loc, order)) in points.iter().enumerate() {
        if order <= 0 || loc < re_min {
            continue;
        }
        let nearest = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .map(|(_, &(other, _))| (other - loc).abs())
            .fold(f64::INFINITY, f64::min);
        let nearest = if nearest.is_finite() { nearest } else { 2.0 * MAX_CONTOUR_RADIUS / RADIUS_FRACTION };
        let laurent = residue_at(|s| integrand.eval(s), &PoleSpec::real(loc, order as u32), nearest)?;
        if laurent.order == 0 {
            continue;
        }
        if term.lambda_total == 0 && loc == 0.0 {
            origin_residue = Some(laurent.residue());
            continue;
        }
        let coeffs = laurent.log_polynomial(log_scale).into_iter().map(|c| -term.coefficient * c).collect();
        contributions.push(Contribution { exponent: loc, coeffs });
    }
    Ok(TermResidues { lambda: term.lambda_total, contributions, origin_residue })
}

/// The truncated asymptotic outage expansion `p_o ≈ Σ_p Σ_i c_{p,i} (ln γ̄)^i γ̄^{s_p}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticExpansion {
    terms: Vec<AsymptoteTerm>,
    levels: Vec<Vec<AsymptoteTerm>>,
    lambda_max: u32,
    re_min: f64,
    origin_residue: f64,
    network: NetworkConfig,
}

/// Value of an expansion at one `γ̄`, clamped to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub unclamped: f64,
    pub clamped: bool,
}

impl Evaluation {
    fn from_raw(raw: f64) -> Self {
        let value = raw.clamp(0.0, 1.0);
        Self { value, unclamped: raw, clamped: value != raw }
    }
}

impl AsymptoticExpansion {
    /// Terms sorted by descending exponent, summed over every `λ_N <= lambda_max`.
    pub fn terms(&self) -> &[AsymptoteTerm] {
        &self.terms
    }

    /// Terms contributed by compositions with exactly this `λ_N`.
    pub fn level(&self, lambda: u32) -> &[AsymptoteTerm] {
        &self.levels[lambda as usize]
    }

    pub fn lambda_max(&self) -> u32 {
        self.lambda_max
    }

    pub fn re_min(&self) -> f64 {
        self.re_min
    }

    pub fn network(&self) -> &NetworkConfig {
        &self.network
    }

    /// Residue of the `λ_N = 0` integrand at the origin; 1 up to rounding.
    pub fn origin_residue(&self) -> f64 {
        self.origin_residue
    }

    pub fn term_at(&self, exponent: f64) -> Option<&AsymptoteTerm> {
        self.terms.iter().find(|t| (t.exponent - exponent).abs() < MERGE_TOLERANCE)
    }

    pub fn evaluate(&self, gamma_bar: f64) -> Evaluation {
        Evaluation::from_raw(self.terms.iter().map(|t| t.eval(gamma_bar)).sum())
    }

    /// Evaluates only the levels `λ_N <= lambda`.
    pub fn evaluate_truncated(&self, gamma_bar: f64, lambda: u32) -> Evaluation {
        let raw = self.levels.iter().take(lambda as usize + 1).flatten().map(|t| t.eval(gamma_bar)).sum();
        Evaluation::from_raw(raw)
    }

    /// Relative change of the evaluated series between truncation orders
    /// `lambda_max - 1` and `lambda_max`; `None` when `lambda_max = 0`.
    pub fn truncation_change(&self, gamma_bar: f64) -> Option<f64> {
        if self.lambda_max == 0 {
            return None;
        }
        let hi = self.evaluate_truncated(gamma_bar, self.lambda_max).unclamped;
        let lo = self.evaluate_truncated(gamma_bar, self.lambda_max - 1).unclamped;
        Some((hi - lo).abs() / hi.abs())
    }

    /// Logs a warning if the last truncation order moved the value by more than 10%,
    /// a sign the formal series is not yet in its asymptotic regime at `gamma_bar`.
    pub fn warn_if_unsettled(&self, gamma_bar: f64) -> bool {
        match self.truncation_change(gamma_bar) {
            Some(change) if change > TRUNCATION_WARN_RATIO || change.is_nan() => {
                log::warn!(
                    "series truncation at lambda = {} changes p_o by {:.1}% at gamma_bar = {gamma_bar:e}",
                    self.lambda_max,
                    100.0 * change
                );
                true
            }
            _ => false,
        }
    }
}

/// Evaluates `exp` at `gamma_bar` (expects `gamma_bar > 1`).
pub fn evaluate_expansion(exp: &AsymptoticExpansion, gamma_bar: f64) -> Evaluation {
    exp.evaluate(gamma_bar)
}

/// Builds the expansion from every composition with `λ_N <= lambda_max` and
/// every pole with `Re s >= re_min` (default: rightmost pole minus 1.5).
pub fn build_expansion(network: &NetworkConfig, lambda_max: u32, re_min: Option<f64>) -> Result<AsymptoticExpansion> {
    build_expansion_with(network, lambda_max, re_min, Execution::default())
}

pub fn build_expansion_with(
    network: &NetworkConfig,
    lambda_max: u32,
    re_min: Option<f64>,
    exec: Execution,
) -> Result<AsymptoticExpansion> {
    let rightmost = network.rightmost_pole();
    let re_min = re_min.unwrap_or(rightmost - DEFAULT_RE_MIN_OFFSET);
    if !(re_min < rightmost) {
        return Err(Error::InvalidArgument(format!("re_min = {re_min} must lie left of the rightmost pole {rightmost}")));
    }
    let jobs: Vec<CompositionTerm> = (0..=lambda_max).flat_map(|l| CompositionTerm::enumerate(network, l)).collect();
    let results = map_collect(exec, &jobs, |term| term_residues(network, term, re_min));

    let mut per_level: Vec<Vec<Contribution>> = (0..=lambda_max).map(|_| Vec::new()).collect();
    let mut origin_residue = f64::NAN;
    for result in results {
        let r = result?;
        if let Some(o) = r.origin_residue {
            origin_residue = o;
        }
        per_level[r.lambda as usize].extend(r.contributions);
    }
    let levels: Vec<Vec<AsymptoteTerm>> = per_level.iter().map(accumulate).collect();
    let terms = accumulate(per_level.iter().flatten());
    Ok(AsymptoticExpansion { terms, levels, lambda_max, re_min, origin_residue, network: network.clone() })
}

/// The dominant behaviour `(ln γ̄)^{k-1} γ̄^{s0}` of the outage probability.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingTerm {
    /// Rightmost non-origin pole of `G(s)`.
    pub s0: f64,
    /// Effective merged order of that pole.
    pub order: u32,
    /// Everything the expansion (default truncation) places at `γ̄^{s0}`.
    pub term: AsymptoteTerm,
    /// The `λ_N = 0` residue alone.
    pub lambda_zero: AsymptoteTerm,
}

impl LeadingTerm {
    pub fn diversity(&self) -> f64 {
        -self.s0
    }
}

/// Locates the rightmost non-origin pole of `G(s)`, its effective order, and
/// the coefficients of the leading `γ̄^{s0}` term.
pub fn leading_term(network: &NetworkConfig) -> Result<LeadingTerm> {
    let n = network.len();
    let shifts = vec![0u32; n];
    let term = CompositionTerm::new(network, vec![0; n - 1])?;
    let rightmost = network.rightmost_pole();
    let re_min = rightmost - 3.0 * DEFAULT_RE_MIN_OFFSET;
    let residues = term_residues(network, &term, re_min)?;
    let first = residues.contributions.into_iter().next().ok_or_else(|| {
        Error::Domain(format!("no pole of G(s) found in [{re_min}, 0) for shifts {shifts:?}"))
    })?;
    let lambda_zero = AsymptoteTerm { exponent: first.exponent, log_coeffs: first.coeffs };
    let s0 = first.exponent;
    let order = lambda_zero.log_coeffs.len() as u32;
    let full = build_expansion(network, DEFAULT_LAMBDA_MAX, Some(s0 - 0.5))?;
    let term = full.term_at(s0).cloned().unwrap_or_else(|| lambda_zero.clone());
    Ok(LeadingTerm { s0, order, term, lambda_zero })
}
