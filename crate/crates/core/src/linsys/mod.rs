//! Dimension, virtual dimension and toric virtual dimension of fat-point linear systems.

pub mod field;
pub mod interpolation;
pub mod rank;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cox_presentation::{section_polytope, CoxPresentation, StandardFormDivisor};
use crate::error::{Error, Result};
use crate::lattice::LatticePolytope;

pub use interpolation::{binomial, build_matrix, derivative_orders};
pub use rank::{derive_seed, generic_rank, RankConfig, RankOutcome, TrialEvidence};

/// `L_D(mu_1, ..., mu_k)` on the variety of a normalized quasi-transitive fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    presentation: CoxPresentation,
    divisor: StandardFormDivisor,
    multiplicities: Vec<u32>,
}

impl LinearSystem {
    /// Zero multiplicities are dropped and the rest sorted in decreasing order.
    pub fn new(presentation: CoxPresentation, divisor: StandardFormDivisor, multiplicities: &[u32]) -> Result<Self> {
        if divisor.coeffs.len() != presentation.class_rank() {
            return Err(Error::DimensionMismatch { expected: presentation.class_rank(), found: divisor.coeffs.len() });
        }
        Ok(LinearSystem { presentation, divisor, multiplicities: normalize_multiplicities(multiplicities) })
    }

    pub fn presentation(&self) -> &CoxPresentation {
        &self.presentation
    }

    pub fn divisor(&self) -> &StandardFormDivisor {
        &self.divisor
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn polytope_system(&self) -> Result<PolytopeSystem> {
        let section = section_polytope(&self.presentation, &self.divisor)?;
        Ok(PolytopeSystem::new(section.polytope, &self.multiplicities))
    }
}

fn normalize_multiplicities(mults: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = mults.iter().copied().filter(|&m| m > 0).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// `L_P(mu_1, ..., mu_k)`: sections are the monomials `x^m`, `m` a lattice point of `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeSystem {
    pub polytope: LatticePolytope,
    pub multiplicities: Vec<u32>,
}

impl PolytopeSystem {
    pub fn new(polytope: LatticePolytope, multiplicities: &[u32]) -> Self {
        PolytopeSystem { polytope, multiplicities: normalize_multiplicities(multiplicities) }
    }

    pub fn rank(&self) -> usize {
        self.polytope.rank()
    }
}

/// `|{u : |u| <= mu_i - 1} ∩ P|` for each point.
pub fn toric_truncation(sys: &PolytopeSystem) -> Vec<usize> {
    sys.multiplicities
        .iter()
        .map(|&mu| derivative_orders(sys.rank(), mu).iter().filter(|u| sys.polytope.contains_i64(u)).count())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialityReport {
    pub h0: i64,
    pub rank: i64,
    pub dim: i64,
    pub vdim: i64,
    pub edim: i64,
    pub tvdim: i64,
    pub tedim: i64,
    pub special: bool,
    pub toric_special: bool,
    pub multiplicities: Vec<u32>,
    pub seed: u64,
    pub samples: Vec<TrialEvidence>,
    pub degree_bound: u64,
    pub per_trial_failure_bound: f64,
}

impl SpecialityReport {
    /// `dim >= tedim >= edim` and `dim + rank + 1 = h0`.
    pub fn is_consistent(&self) -> bool {
        self.dim >= self.tedim && self.tedim >= self.edim && self.dim + self.rank + 1 == self.h0
    }
}

pub fn analyze(sys: &LinearSystem, cfg: &RankConfig) -> Result<SpecialityReport> {
    analyze_polytope(&sys.polytope_system()?, cfg)
}

pub fn analyze_polytope(sys: &PolytopeSystem, cfg: &RankConfig) -> Result<SpecialityReport> {
    let n = sys.rank();
    let columns = sys.polytope.lattice_points_i64();
    let h0 = columns.len() as i64;
    let outcome = generic_rank(n, &columns, &sys.multiplicities, cfg);
    let rank = outcome.rank as i64;
    let naive: i64 = sys
        .multiplicities
        .iter()
        .map(|&mu| binomial(n as u64 + mu as u64 - 1, n as u64).to_i64().ok_or_else(|| Error::Overflow("condition count".into())))
        .sum::<Result<i64>>()?;
    let truncated: i64 = toric_truncation(sys).iter().map(|&c| c as i64).sum();
    let dim = h0 - rank - 1;
    let vdim = h0 - naive - 1;
    let tvdim = h0 - truncated - 1;
    let (edim, tedim) = (vdim.max(-1), tvdim.max(-1));
    let report = SpecialityReport {
        h0,
        rank,
        dim,
        vdim,
        edim,
        tvdim,
        tedim,
        special: dim > edim,
        toric_special: dim > tedim,
        multiplicities: sys.multiplicities.clone(),
        seed: cfg.seed,
        samples: outcome.samples,
        degree_bound: outcome.degree_bound,
        per_trial_failure_bound: outcome.per_trial_failure_bound,
    };
    if !report.is_consistent() {
        return Err(Error::SubGenericRank);
    }
    Ok(report)
}
