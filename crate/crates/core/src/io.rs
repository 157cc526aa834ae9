//! JSON input documents shared by the command line and the tests.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cox_presentation::{build_presentation, to_standard_form, CoxPresentation, StandardFormDivisor, TDivisor};
use crate::error::{Error, Result};
use crate::fan_analysis::transitive_cones;
use crate::lattice::vector::serde_int;
use crate::lattice::Fan;
use crate::linsys::LinearSystem;

/// `{"coeffs": [...]}` over all rays in input order, or `{"standard": [...]}` over the rays outside
/// the distinguished transitive cone, in normalized order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorSpec {
    Coeffs(#[serde(with = "serde_int::vec")] Vec<BigInt>),
    Standard(#[serde(with = "serde_int::vec")] Vec<BigInt>),
}

impl DivisorSpec {
    pub fn resolve(&self, cp: &CoxPresentation) -> Result<StandardFormDivisor> {
        match self {
            DivisorSpec::Standard(coeffs) => {
                if coeffs.len() != cp.class_rank() {
                    return Err(Error::DimensionMismatch { expected: cp.class_rank(), found: coeffs.len() });
                }
                Ok(StandardFormDivisor { coeffs: coeffs.clone() })
            }
            DivisorSpec::Coeffs(coeffs) => {
                if coeffs.len() != cp.num_rays() {
                    return Err(Error::DimensionMismatch { expected: cp.num_rays(), found: coeffs.len() });
                }
                let reordered = cp.ray_order().iter().map(|&i| coeffs[i].clone()).collect();
                to_standard_form(cp, &TDivisor { coeffs: reordered })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub fan: Fan,
    pub divisor: DivisorSpec,
    #[serde(default)]
    pub multiplicities: Vec<u32>,
}

impl SystemFile {
    pub fn presentation(&self) -> Result<CoxPresentation> {
        build_presentation(&transitive_cones(&self.fan)?)
    }

    pub fn linear_system(&self) -> Result<LinearSystem> {
        let cp = self.presentation()?;
        let divisor = self.divisor.resolve(&cp)?;
        LinearSystem::new(cp, divisor, &self.multiplicities)
    }
}
