//! Which kind of dynamics the mapping class group has on a level set.

use serde::{Deserialize, Serialize};

use crate::algebra::Sector;
use crate::error::{Error, Result};
use crate::model::TracePoint;

/// Tolerance for deciding that `t` sits exactly on a breakpoint.
pub const REGIME_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeTag {
    /// Four discs, each a copy of Fricke space; proper action.
    ProperFricke,
    /// Four punctured discs plus the quaternion fixed point.
    TeichPlusFixedPoint,
    /// A compact SU(2) component with ergodic action, plus cone components
    /// with proper action.
    MixedCompactErgodicProperCone,
    /// Characters of abelian representations.
    AbelianLevel,
    Ergodic,
    /// Wandering domains coexisting with an ergodic region.
    WanderingPlusErgodic,
    OpenProblem,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub tag: RegimeTag,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn near(t: f64, b: f64) -> bool {
    (t - b).abs() <= REGIME_TOL
}

/// Real level sets `κ = t` of the one-holed torus, breakpoints `−2, 2, 18`.
pub fn classify_level_set_regime(t: f64) -> Regime {
    let tag = if near(t, -2.0) {
        RegimeTag::TeichPlusFixedPoint
    } else if t < -2.0 {
        RegimeTag::ProperFricke
    } else if near(t, 2.0) {
        RegimeTag::AbelianLevel
    } else if t < 2.0 {
        RegimeTag::MixedCompactErgodicProperCone
    } else if t <= 18.0 + REGIME_TOL {
        RegimeTag::Ergodic
    } else {
        RegimeTag::WanderingPlusErgodic
    };
    Regime { tag, t, note: None }
}

/// Level sets inside one of the three mixed `G±` sectors, breakpoints `−14, 2`.
pub fn gpm_sector_regime(sector: Sector, t: f64) -> Result<Regime> {
    if !Sector::MIXED.contains(&sector) {
        return Err(Error::NotMixedSector(sector.label().to_string()));
    }
    let (tag, note) = if t < -14.0 - REGIME_TOL {
        (RegimeTag::WanderingPlusErgodic, None)
    } else if t < 2.0 - REGIME_TOL {
        (RegimeTag::Ergodic, None)
    } else {
        let note = if t > 6.0 + REGIME_TOL {
            "open; contains wandering domains from Fricke spaces of a one-holed Klein bottle"
        } else {
            "open"
        };
        (RegimeTag::OpenProblem, Some(note.to_string()))
    };
    Ok(Regime { tag, t, note })
}

/// Membership in the closed region `(−∞, −2]³` of discrete embeddings.
pub fn wandering_membership(p: &TracePoint) -> Result<bool> {
    crate::model::SurfaceModel::OneHoledTorus.expect(p.model)?;
    if !p.is_real() {
        return Err(Error::NotReal);
    }
    Ok(p.values.iter().all(|v| v.re <= -2.0))
}
