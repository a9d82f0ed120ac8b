//! JSON network configuration.
//!
//! ```json
//! {"gamma_t_db": 0.0, "hops": [{"fading": "nakagami", "m": 2.2, "theta": 1.0, "rho": 1.0}]}
//! ```
//!
//! Shape keys are per family: `m` (nakagami, weibull), `K` (rician), `q` (hoyt).
//! `theta` and `rho` default to 1; `gamma_t` may be given linearly instead of in dB.

use relay_asym::analysis::db_to_linear;
use relay_asym::{FadingFamily, FadingModel, HopConfig, NetworkConfig};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    gamma_t_db: Option<f64>,
    gamma_t: Option<f64>,
    hops: Vec<RawHop>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHop {
    fading: String,
    m: Option<f64>,
    #[serde(rename = "K")]
    k: Option<f64>,
    q: Option<f64>,
    theta: Option<f64>,
    rho: Option<f64>,
}

impl RawHop {
    fn shape(&self, index: usize, family: FadingFamily) -> Result<f64, CliError> {
        let present: Vec<(&str, f64)> =
            [("m", self.m), ("K", self.k), ("q", self.q)].into_iter().filter_map(|(k, v)| Some((k, v?))).collect();
        match present.as_slice() {
            [(key, value)] if *key == family.shape_name() => Ok(*value),
            _ => Err(CliError::Schema(format!(
                "hops[{index}]: {} fading takes exactly one shape key `{}`",
                family,
                family.shape_name()
            ))),
        }
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<NetworkConfig, CliError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    let gamma_t = match (raw.gamma_t_db, raw.gamma_t) {
        (Some(_), Some(_)) => return Err(CliError::Schema("give either gamma_t_db or gamma_t, not both".into())),
        (Some(db), None) => db_to_linear(db),
        (None, Some(g)) => g,
        (None, None) => 1.0,
    };
    if !(gamma_t.is_finite() && gamma_t > 0.0) {
        return Err(CliError::Schema(format!("threshold must be positive and finite, got {gamma_t}")));
    }
    if raw.hops.is_empty() {
        return Err(CliError::Schema("hops must not be empty".into()));
    }
    let mut hops = Vec::with_capacity(raw.hops.len());
    for (i, hop) in raw.hops.iter().enumerate() {
        let rho = hop.rho.unwrap_or(1.0);
        if i == 0 && rho != 1.0 {
            return Err(CliError::Schema(format!("hops[0].rho must be 1, got {rho}")));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(CliError::Schema(format!("hops[{i}].rho must be positive, got {rho}")));
        }
        let family: FadingFamily = hop.fading.parse()?;
        let model = FadingModel::new(family, hop.shape(i, family)?, hop.theta.unwrap_or(1.0))?;
        hops.push(HopConfig::new(model, rho)?);
    }
    Ok(NetworkConfig::new(hops, gamma_t)?)
}
