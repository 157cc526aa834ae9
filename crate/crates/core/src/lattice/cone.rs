use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::matrix::{self, IntMatrix};
use super::vector::LatticeVector;
use crate::error::{Error, Result};

/// A simplicial pointed cone given by primitive generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone {
    rays: Vec<LatticeVector>,
    ambient_rank: usize,
}

impl Cone {
    /// Rays are primitivized; they must be nonzero and linearly independent.
    pub fn new(ambient_rank: usize, rays: Vec<LatticeVector>) -> Result<Self> {
        let mut prim = Vec::with_capacity(rays.len());
        for r in &rays {
            if r.rank() != ambient_rank {
                return Err(Error::DimensionMismatch { expected: ambient_rank, found: r.rank() });
            }
            prim.push(r.primitivize()?);
        }
        let rows: Vec<Vec<BigRational>> = prim.iter().map(LatticeVector::to_rational).collect();
        if matrix::rank_rational(&rows) != prim.len() {
            return Err(Error::DependentRays);
        }
        Ok(Self { rays: prim, ambient_rank })
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.rays.len() == self.ambient_rank
    }

    /// Matrix with the rays as columns.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.rays)
    }

    pub fn is_smooth(&self) -> Result<bool> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        Ok(self.ray_matrix().det().abs().is_one())
    }

    /// Exact test for `v` being a nonnegative combination of the rays.
    pub fn contains(&self, v: &LatticeVector) -> bool {
        match self.coefficients(v) {
            Some(c) => c.iter().all(|x| !x.is_negative()),
            None => false,
        }
    }

    /// Coordinates of `v` in the ray basis, if `v` lies in their span.
    pub fn coefficients(&self, v: &LatticeVector) -> Option<Vec<BigRational>> {
        let m = self.ray_matrix().to_rational();
        matrix::solve(&m, &v.to_rational())
    }

    pub fn negated(&self) -> Cone {
        Cone { rays: self.rays.iter().map(|r| -r).collect(), ambient_rank: self.ambient_rank }
    }
}

/// Unimodular `A` with `A * ray_i = -e_i` for the rays of a smooth full-dimensional cone.
pub fn gl_change_of_basis(src: &Cone) -> Result<IntMatrix> {
    if !src.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let inv = src.ray_matrix().inverse_unimodular().ok_or(Error::NoUnimodularNormalization)?;
    Ok(inv.neg())
}
