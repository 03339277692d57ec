use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::params::Params;
use crate::primitives::BitString;

/// The CRS-simulating sampler `M_CRS` and its trapdoor relation `R_CRS`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrsVariant {
    /// `tau = r`.
    #[default]
    Identity,
    /// `r = PRG(tau)` truncated to n bits.
    PrgSeed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrsPair {
    pub r: BitString,
    pub tau: BitString,
}

pub fn m_crs_sample<R: RngCore + ?Sized>(params: &Params, variant: CrsVariant, rng: &mut R) -> CrsPair {
    let tau = BitString::random(params.n, rng);
    let r = match variant {
        CrsVariant::Identity => tau.clone(),
        CrsVariant::PrgSeed => params.prg().expand(&tau, params.n),
    };
    CrsPair { r, tau }
}

pub fn r_crs(params: &Params, variant: CrsVariant, r: &BitString, tau: &BitString) -> bool {
    match variant {
        CrsVariant::Identity => r == tau,
        CrsVariant::PrgSeed => tau.len() == params.n && &params.prg().expand(tau, params.n) == r,
    }
}

/// The simulator's predefined outputs: `S_L` for left sessions and `S_R` for
/// right sessions, drawn once per simulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrsDraws {
    pub variant: CrsVariant,
    pub left: Vec<CrsPair>,
    pub right: Vec<CrsPair>,
}

impl CrsDraws {
    pub fn sample<R: RngCore + ?Sized>(params: &Params, variant: CrsVariant, sessions: usize, rng: &mut R) -> Self {
        let left = (0..sessions).map(|_| m_crs_sample(params, variant, rng)).collect();
        let right = (0..sessions).map(|_| m_crs_sample(params, variant, rng)).collect();
        Self { variant, left, right }
    }

    pub fn all_valid(&self, params: &Params) -> bool {
        self.left.iter().chain(&self.right).all(|p| r_crs(params, self.variant, &p.r, &p.tau))
    }
}
