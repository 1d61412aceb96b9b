use super::{OctantTopology, Sector, WrappingNumbers};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Conformal,
    Anticonformal,
    Nonconformal,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Conformal => "conformal",
            Kind::Anticonformal => "anticonformal",
            Kind::Nonconformal => "nonconformal",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: Kind,
    pub sigma_plus: Option<Sector>,
    pub sigma_minus: Option<Sector>,
    pub chi: u8,
}

/// Conformal when every w_σ ≤ 0 (this wins when w vanishes identically),
/// anticonformal when every w_σ ≥ 0, nonconformal otherwise. Ties for σ±
/// are broken by the fixed sector order.
pub fn classify(w: &WrappingNumbers, t: &OctantTopology) -> Classification {
    classify_with_chi(w, t.chi())
}

pub fn classify_with_chi(w: &WrappingNumbers, chi: u8) -> Classification {
    if w.w.iter().all(|v| *v <= 0) {
        return Classification { kind: Kind::Conformal, sigma_plus: None, sigma_minus: None, chi };
    }
    if w.w.iter().all(|v| *v >= 0) {
        return Classification {
            kind: Kind::Anticonformal,
            sigma_plus: None,
            sigma_minus: None,
            chi,
        };
    }
    let max = *w.w.iter().max().expect("eight entries");
    let min = *w.w.iter().min().expect("eight entries");
    let sigma_plus = Sector::ALL.into_iter().find(|s| w.get(*s) == max);
    let sigma_minus = Sector::ALL.into_iter().find(|s| w.get(*s) == min);
    Classification { kind: Kind::Nonconformal, sigma_plus, sigma_minus, chi }
}

fn phi(x: i64) -> i64 {
    (x + x.abs()) / 2
}

/// Δ(H) = 2 max(0, w_σ₊ − Σ_{σ~σ₊} Φ(w_σ) − χ, |w_σ₋| − Σ_{σ~σ₋} Φ(−w_σ) − χ),
/// evaluated for every tied choice of σ± and required to agree.
pub fn delta_invariant(w: &WrappingNumbers, c: &Classification) -> Result<i64> {
    if c.kind != Kind::Nonconformal {
        return Ok(0);
    }
    let chi = c.chi as i64;
    let max = *w.w.iter().max().expect("eight entries");
    let min = *w.w.iter().min().expect("eight entries");
    let plus = |s: Sector| w.get(s) - s.neighbours().map(|t| phi(w.get(t))).sum::<i64>() - chi;
    let minus =
        |s: Sector| w.get(s).abs() - s.neighbours().map(|t| phi(-w.get(t))).sum::<i64>() - chi;
    let mut values = Vec::new();
    for sp in Sector::ALL.into_iter().filter(|s| w.get(*s) == max) {
        for sm in Sector::ALL.into_iter().filter(|s| w.get(*s) == min) {
            values.push(2 * 0.max(plus(sp)).max(minus(sm)));
        }
    }
    let first = values[0];
    if values.iter().any(|v| *v != first) {
        return Err(Error::Consistency(format!(
            "Δ depends on the choice among tied extremal sectors: {values:?}"
        )));
    }
    Ok(first)
}

/// Σ_σ |w_σ| + Δ(H), the infimum energy in units of π.
pub fn infimum_energy(w: &WrappingNumbers, c: &Classification) -> Result<i64> {
    Ok(w.abs_sum() + delta_invariant(w, c)?)
}
