use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::BetaRule;
use crate::error::Result;
use crate::linalg::{check_len, dot_unchecked};

/// Denominators at or below this magnitude count as zero.
pub const DENOMINATOR_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BreakdownSite {
    ExactStepsize,
    OrthogonalStepsize,
    Beta(BetaRule),
}

/// A vanishing denominator in a stepsize or β formula.
#[derive(Debug, Clone, Copy, PartialEq, Error, Serialize, Deserialize)]
#[error("breakdown in {site:?} at iteration {iteration}: denominator {denominator:e}")]
pub struct Breakdown {
    pub site: BreakdownSite,
    pub iteration: usize,
    pub denominator: f64,
}

/// `β_k` from `g_k`, `g_{k−1}` and `d_{k−1}`, with `y = g_k − g_{k−1}`.
pub fn beta(rule: BetaRule, g: &[f64], g_prev: &[f64], d_prev: &[f64]) -> Result<f64> {
    beta_at(rule, g, g_prev, d_prev, 0)
}

pub(crate) fn beta_at(rule: BetaRule, g: &[f64], g_prev: &[f64], d_prev: &[f64], iteration: usize) -> Result<f64> {
    check_len(g.len(), g_prev.len())?;
    check_len(g.len(), d_prev.len())?;
    let y: Vec<f64> = g.iter().zip(g_prev).map(|(a, b)| a - b).collect();
    let (num, den) = match rule {
        BetaRule::FletcherReeves => (dot_unchecked(g, g), dot_unchecked(g_prev, g_prev)),
        BetaRule::HestenesStiefel => (dot_unchecked(g, &y), dot_unchecked(d_prev, &y)),
        BetaRule::PolakRibierePolyak => (dot_unchecked(g, &y), dot_unchecked(g_prev, g_prev)),
        BetaRule::DaiYuan => (dot_unchecked(g, g), dot_unchecked(d_prev, &y)),
    };
    if den.abs() <= DENOMINATOR_FLOOR {
        return Err(Breakdown {
            site: BreakdownSite::Beta(rule),
            iteration,
            denominator: den,
        }
        .into());
    }
    Ok(num / den)
}

/// `−g` when `d_prev` is `None`, otherwise `−g + β d_prev`.
pub fn direction(g: &[f64], beta: f64, d_prev: Option<&[f64]>) -> Result<Vec<f64>> {
    match d_prev {
        None => Ok(g.iter().map(|v| -v).collect()),
        Some(d) => {
            check_len(g.len(), d.len())?;
            Ok(g.iter().zip(d).map(|(gi, di)| -gi + beta * di).collect())
        }
    }
}

/// `α = −gᵀd / dᵀAd`
pub fn stepsize_exact(g: &[f64], d: &[f64], ad: &[f64]) -> Result<f64> {
    stepsize_exact_at(g, d, ad, 0)
}

pub(crate) fn stepsize_exact_at(g: &[f64], d: &[f64], ad: &[f64], iteration: usize) -> Result<f64> {
    check_len(g.len(), d.len())?;
    check_len(g.len(), ad.len())?;
    let den = dot_unchecked(d, ad);
    if den <= DENOMINATOR_FLOOR {
        return Err(Breakdown {
            site: BreakdownSite::ExactStepsize,
            iteration,
            denominator: den,
        }
        .into());
    }
    Ok(-dot_unchecked(g, d) / den)
}

/// `α = −gᵀg / gᵀAd`; makes the next gradient orthogonal to `g`.
pub fn stepsize_orthogonal(g: &[f64], ad: &[f64]) -> Result<f64> {
    stepsize_orthogonal_at(g, ad, 0)
}

pub(crate) fn stepsize_orthogonal_at(g: &[f64], ad: &[f64], iteration: usize) -> Result<f64> {
    check_len(g.len(), ad.len())?;
    let den = dot_unchecked(g, ad);
    if den.abs() <= DENOMINATOR_FLOOR {
        return Err(Breakdown {
            site: BreakdownSite::OrthogonalStepsize,
            iteration,
            denominator: den,
        }
        .into());
    }
    Ok(-dot_unchecked(g, g) / den)
}
