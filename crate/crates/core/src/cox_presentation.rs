//! Grading matrices, standard-form divisors, section polytopes and root automorphisms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan_analysis::{DemazureRoot, TransitivityVerdict};
use crate::lattice::vector::serde_int;
use crate::lattice::{Fan, IntMatrix, LatticePolytope, LatticeVector};

/// `P = [-Id | P0]` and `Q = [P0^t | Id]` for a fan normalized at `<-e_1, ..., -e_n>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxPresentation {
    fan: Fan,
    p: IntMatrix,
    q: IntMatrix,
    /// Input ray index of each normalized ray.
    ray_order: Vec<usize>,
}

impl CoxPresentation {
    /// Builds from a fan whose first `n` rays are `-e_1, ..., -e_n`.
    pub fn from_normalized_fan(fan: Fan, ray_order: Vec<usize>) -> Result<Self> {
        let n = fan.ambient_rank();
        let r = fan.num_rays();
        for i in 0..n.min(r) {
            if fan.ray(i) != &-&LatticeVector::unit(n, i) {
                return Err(Error::NotNormalized(format!("ray {i} is not -e_{}", i + 1)));
            }
        }
        if r < n || !fan.is_face(&(0..n).collect::<Vec<_>>()) {
            return Err(Error::NotNormalized("first n rays do not span a maximal cone".into()));
        }
        if fan.rays()[n..].iter().any(|ray| !ray.is_nonnegative()) {
            return Err(Error::NotQuasiTransitive);
        }
        let p = IntMatrix::from_columns(fan.rays());
        let q_rows = (0..r - n)
            .map(|j| {
                let mut row: Vec<BigInt> = fan.ray(n + j).coords().to_vec();
                row.extend((0..r - n).map(|k| BigInt::from(u8::from(k == j))));
                LatticeVector::new(row)
            })
            .collect();
        let q = IntMatrix::from_rows(q_rows);
        Ok(CoxPresentation { fan, p, q, ray_order })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn p(&self) -> &IntMatrix {
        &self.p
    }

    pub fn q(&self) -> &IntMatrix {
        &self.q
    }

    pub fn ray_order(&self) -> &[usize] {
        &self.ray_order
    }

    /// Lattice rank `n`.
    pub fn rank(&self) -> usize {
        self.fan.ambient_rank()
    }

    pub fn num_rays(&self) -> usize {
        self.fan.num_rays()
    }

    pub fn class_rank(&self) -> usize {
        self.num_rays() - self.rank()
    }

    /// `deg(x_i)`, the `i`-th column of `Q`.
    pub fn degree(&self, i: usize) -> LatticeVector {
        self.q.column(i)
    }

    /// `Q P^t = 0`.
    pub fn is_exact(&self) -> bool {
        self.q.mul(&self.p.transpose()).is_zero()
    }
}

pub fn build_presentation(verdict: &TransitivityVerdict) -> Result<CoxPresentation> {
    let norm = verdict.normalization.as_ref().ok_or(Error::NotQuasiTransitive)?;
    CoxPresentation::from_normalized_fan(norm.normalized_fan.clone(), norm.ray_order.clone())
}

/// `sum d_i D_i` over all rays.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TDivisor {
    #[serde(with = "serde_int::vec")]
    pub coeffs: Vec<BigInt>,
}

impl TDivisor {
    pub fn from_i64s(xs: &[i64]) -> Self {
        TDivisor { coeffs: xs.iter().map(|&x| x.into()).collect() }
    }

    /// Adds `div(chi^e) = sum <e, rho_i> D_i`.
    pub fn add_principal(&self, fan: &Fan, e: &LatticeVector) -> TDivisor {
        TDivisor { coeffs: self.coeffs.iter().zip(fan.rays()).map(|(d, r)| d + e.dot(r)).collect() }
    }
}

/// Coefficients `d_{n+1}, ..., d_r`; the first `n` are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardFormDivisor {
    #[serde(with = "serde_int::vec")]
    pub coeffs: Vec<BigInt>,
}

impl StandardFormDivisor {
    pub fn from_i64s(xs: &[i64]) -> Self {
        StandardFormDivisor { coeffs: xs.iter().map(|&x| x.into()).collect() }
    }

    pub fn to_tdivisor(&self, n: usize) -> TDivisor {
        let mut coeffs = vec![BigInt::zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        TDivisor { coeffs }
    }
}

/// Removes `d_1..d_n` with a principal divisor; the result is the class `Q d`.
pub fn to_standard_form(cp: &CoxPresentation, d: &TDivisor) -> Result<StandardFormDivisor> {
    if d.coeffs.len() != cp.num_rays() {
        return Err(Error::DimensionMismatch { expected: cp.num_rays(), found: d.coeffs.len() });
    }
    let e = LatticeVector::new(d.coeffs[..cp.rank()].to_vec());
    let shifted = d.add_principal(cp.fan(), &e);
    debug_assert!(shifted.coeffs[..cp.rank()].iter().all(Zero::is_zero));
    Ok(StandardFormDivisor { coeffs: shifted.coeffs[cp.rank()..].to_vec() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionPolytope {
    pub polytope: LatticePolytope,
    pub h0: usize,
}

/// `{m : <m, rho_j> <= d_j for all j}`; its lattice points index the sections of `O(D)`.
pub fn tdivisor_polytope(fan: &Fan, d: &TDivisor) -> Result<LatticePolytope> {
    if d.coeffs.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch { expected: fan.num_rays(), found: d.coeffs.len() });
    }
    LatticePolytope::new(fan.ambient_rank(), fan.rays().to_vec(), d.coeffs.clone())
}

/// `{m >= 0 : <m, rho_j> <= d_j for j > n}`, inside the first orthant.
pub fn section_polytope(cp: &CoxPresentation, d: &StandardFormDivisor) -> Result<SectionPolytope> {
    if d.coeffs.len() != cp.class_rank() {
        return Err(Error::DimensionMismatch { expected: cp.class_rank(), found: d.coeffs.len() });
    }
    let polytope = tdivisor_polytope(cp.fan(), &d.to_tdivisor(cp.rank()))?;
    let h0 = polytope.num_lattice_points();
    Ok(SectionPolytope { polytope, h0 })
}

/// Primitive collections: minimal ray sets not contained in a single cone.
pub fn irrelevant_generators(fan: &Fan) -> Vec<Vec<usize>> {
    let r = fan.num_rays();
    let cone_masks: Vec<u64> = fan.max_cones().iter().map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i)).collect();
    let in_cone = |s: u64| cone_masks.iter().any(|&c| s & c == s);
    let mut found: Vec<u64> = Vec::new();
    let mut subsets: Vec<u64> = (1u64..1 << r).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    for s in subsets {
        if !in_cone(s) && !found.iter().any(|&f| f & s == f) {
            found.push(s);
        }
    }
    found.into_iter().map(|s| (0..r).filter(|&i| s >> i & 1 == 1).collect()).collect()
}

/// `x_i -> x_i + t prod_{j != i} x_j^{<m, rho_j>}` for a root `m` of ray `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxAutomorphismStep {
    pub root: DemazureRoot,
    #[serde(with = "crate::lattice::vector::serde_rational")]
    pub t: BigRational,
}

fn monomial(fan: &Fan, root: &DemazureRoot, point: &[BigRational]) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for (j, ray) in fan.rays().iter().enumerate() {
        if j == root.ray_index {
            continue;
        }
        let e = root.m.dot(ray).to_usize().ok_or_else(|| Error::Overflow("root exponent".into()))?;
        acc *= num_traits::pow(point[j].clone(), e);
    }
    Ok(acc)
}

pub fn apply_root_step(fan: &Fan, point: &[BigRational], step: &CoxAutomorphismStep) -> Result<Vec<BigRational>> {
    if point.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch { expected: fan.num_rays(), found: point.len() });
    }
    if !step.root.is_valid_for(fan) {
        return Err(Error::InvalidRoot(format!("{} is not a root of ray {}", step.root.m, step.root.ray_index)));
    }
    let mut image = point.to_vec();
    image[step.root.ray_index] += &step.t * monomial(fan, &step.root, point)?;
    Ok(image)
}

/// Uses the roots `e_i` of `-e_i` to clear the first `n` Cox coordinates of a torus point.
pub fn move_torus_point_to_invariant(
    cp: &CoxPresentation,
    point: &[BigRational],
) -> Result<(Vec<CoxAutomorphismStep>, Vec<BigRational>)> {
    if point.len() != cp.num_rays() {
        return Err(Error::DimensionMismatch { expected: cp.num_rays(), found: point.len() });
    }
    if point.iter().any(Zero::is_zero) {
        return Err(Error::NotTorusPoint);
    }
    let n = cp.rank();
    let mut current = point.to_vec();
    let mut steps = Vec::with_capacity(n);
    for i in 0..n {
        let root = DemazureRoot { ray_index: i, m: LatticeVector::unit(n, i) };
        let t = -&current[i] / monomial(cp.fan(), &root, &current)?;
        let step = CoxAutomorphismStep { root, t };
        current = apply_root_step(cp.fan(), &current, &step)?;
        steps.push(step);
    }
    debug_assert!(current[..n].iter().all(Zero::is_zero));
    debug_assert_eq!(current[n..], point[n..]);
    Ok((steps, current))
}
