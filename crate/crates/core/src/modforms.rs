//! Dimensions of spaces of modular forms of even weight and trivial
//! character, and the Eichler-Shimura count for level `Gamma_1(2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Genus, elliptic points of period 2 and 3, and cusps of a modular curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveData {
    pub genus: u32,
    pub eps2: u32,
    pub eps3: u32,
    pub eps_inf: u32,
}

impl CurveData {
    pub const GAMMA1_2: CurveData = CurveData {
        genus: 0,
        eps2: 1,
        eps3: 0,
        eps_inf: 2,
    };

    pub const SL2Z: CurveData = CurveData {
        genus: 0,
        eps2: 1,
        eps3: 1,
        eps_inf: 1,
    };
}

fn even_weight(k: i64) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        Err(Error::BadWeight(k))
    } else {
        Ok(())
    }
}

/// `dim S_k` by the valence formula.
pub fn cusp_dim(data: &CurveData, k: i64) -> Result<u64> {
    even_weight(k)?;
    if k == 2 {
        return Ok(data.genus as u64);
    }
    let d = (k - 1) * (data.genus as i64 - 1)
        + (k / 4) * data.eps2 as i64
        + (k / 3) * data.eps3 as i64
        + (k / 2 - 1) * data.eps_inf as i64;
    Ok(d.max(0) as u64)
}

/// Closed form for `Gamma_1(2)`.
pub fn cusp_dim_gamma12(k: i64) -> Result<u64> {
    even_weight(k)?;
    Ok(if k >= 8 { (k / 4 - 1) as u64 } else { 0 })
}

/// `dim E_k`: one Eisenstein series per cusp, one fewer in weight 2.
pub fn eisenstein_dim(data: &CurveData, k: i64) -> Result<u64> {
    even_weight(k)?;
    let c = data.eps_inf as u64;
    Ok(if k == 2 { c.saturating_sub(1) } else { c })
}

/// `dim H^1(Gamma_1(2), Sym^{k-2})`; zero for odd `k`.
pub fn eichler_shimura_dim(k: i64) -> Result<u64> {
    if k < 2 {
        return Err(Error::BadWeight(k));
    }
    if k % 2 != 0 {
        return Ok(0);
    }
    Ok(2 * cusp_dim_gamma12(k)? + eisenstein_dim(&CurveData::GAMMA1_2, k)?)
}

/// Least even weight carrying a nonzero cusp form, searched up to 200.
pub fn first_nonzero_cusp_weight(data: &CurveData) -> Result<i64> {
    (2..=200)
        .step_by(2)
        .find(|&k| cusp_dim(data, k).map(|d| d > 0).unwrap_or(false))
        .ok_or(Error::NoCuspForm(200))
}
