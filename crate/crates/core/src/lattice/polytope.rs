use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::fan::Fan;
use super::lp::{self, LpOutcome};
use super::matrix;
use super::vector::{serde_int, LatticeVector};
use crate::error::{Error, Result};

/// `{ m : <m, normal_k> <= offset_k for all k }`, bounded (possibly empty).
#[derive(Debug, Clone)]
pub struct LatticePolytope {
    rank: usize,
    normals: Vec<LatticeVector>,
    offsets: Vec<BigInt>,
    /// Integer bounding box per coordinate; `None` when empty.
    bbox: Option<Vec<(i64, i64)>>,
    vertices: OnceLock<Vec<Vec<BigRational>>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.normals == other.normals && self.offsets == other.offsets
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    pub fn new(rank: usize, normals: Vec<LatticeVector>, offsets: Vec<BigInt>) -> Result<Self> {
        if normals.len() != offsets.len() {
            return Err(Error::Input(format!("{} normals but {} offsets", normals.len(), offsets.len())));
        }
        if let Some(bad) = normals.iter().find(|a| a.rank() != rank) {
            return Err(Error::DimensionMismatch { expected: rank, found: bad.rank() });
        }
        let bbox = bounding_box(rank, &normals, &offsets)?;
        Ok(Self { rank, normals, offsets, bbox, vertices: OnceLock::new() })
    }

    pub fn from_i64(normals: &[Vec<i64>], offsets: &[i64]) -> Result<Self> {
        let rank = normals.first().map_or(0, Vec::len);
        Self::new(
            rank,
            normals.iter().map(|a| LatticeVector::from_i64s(a)).collect(),
            offsets.iter().map(|&b| BigInt::from(b)).collect(),
        )
    }

    /// The box `[0, a_1] x ... x [0, a_n]`.
    pub fn cube(sides: &[i64]) -> Self {
        let n = sides.len();
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for (i, &a) in sides.iter().enumerate() {
            normals.push(-&LatticeVector::unit(n, i));
            offsets.push(BigInt::zero());
            normals.push(LatticeVector::unit(n, i));
            offsets.push(BigInt::from(a));
        }
        Self::new(n, normals, offsets).expect("box is bounded")
    }

    /// The dilated standard simplex `{ m >= 0, sum m <= d }`.
    pub fn simplex(n: usize, d: i64) -> Self {
        let mut normals: Vec<LatticeVector> = (0..n).map(|i| -&LatticeVector::unit(n, i)).collect();
        let mut offsets = vec![BigInt::zero(); n];
        normals.push(LatticeVector::from_i64s(&vec![1; n]));
        offsets.push(BigInt::from(d));
        Self::new(n, normals, offsets).expect("simplex is bounded")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn normals(&self) -> &[LatticeVector] {
        &self.normals
    }

    pub fn offsets(&self) -> &[BigInt] {
        &self.offsets
    }

    pub fn is_empty(&self) -> bool {
        self.bbox.is_none()
    }

    pub fn bounding_box(&self) -> Option<&[(i64, i64)]> {
        self.bbox.as_deref()
    }

    pub fn contains(&self, m: &LatticeVector) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(a, b)| &a.dot(m) <= b)
    }

    pub fn contains_i64(&self, m: &[i64]) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(a, b)| &a.dot_i64(m) <= b)
    }

    pub fn contains_rational(&self, m: &[BigRational]) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(a, b)| a.dot_rational(m) <= BigRational::from_integer(b.clone()))
    }

    /// Adds one inequality `<m, normal> <= offset`.
    pub fn with_inequality(&self, normal: LatticeVector, offset: BigInt) -> Result<Self> {
        let mut normals = self.normals.clone();
        let mut offsets = self.offsets.clone();
        normals.push(normal);
        offsets.push(offset);
        Self::new(self.rank, normals, offsets)
    }

    /// The polytope shifted by `v`.
    pub fn translate(&self, v: &LatticeVector) -> Self {
        let offsets = self.normals.iter().zip(&self.offsets).map(|(a, b)| b + a.dot(v)).collect();
        Self::new(self.rank, self.normals.clone(), offsets).expect("translate preserves boundedness")
    }

    /// Integer points in lexicographic order.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        self.lattice_points_i64().into_iter().map(LatticeVector::from).collect()
    }

    pub fn lattice_points_i64(&self) -> Vec<Vec<i64>> {
        let Some(bbox) = &self.bbox else { return Vec::new() };
        // a nonempty rational polytope may still miss every integer slice
        if bbox.iter().any(|(lo, hi)| lo > hi) {
            return Vec::new();
        }
        let n = self.rank;
        if n == 0 {
            return if self.offsets.iter().all(|b| b >= &BigInt::zero()) { vec![vec![]] } else { Vec::new() };
        }
        let small: Option<Vec<(Vec<i128>, i128)>> = self
            .normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| Some((a.coords().iter().map(|c| c.to_i128()).collect::<Option<Vec<_>>>()?, b.to_i128()?)))
            .collect();
        let inside = |m: &[i64]| match &small {
            Some(rows) => rows.iter().all(|(a, b)| a.iter().zip(m).map(|(x, &y)| x * y as i128).sum::<i128>() <= *b),
            None => self.contains_i64(m),
        };
        let mut out = Vec::new();
        let mut cur: Vec<i64> = bbox.iter().map(|&(lo, _)| lo).collect();
        loop {
            if inside(&cur) {
                out.push(cur.clone());
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < bbox[k].1 {
                    cur[k] += 1;
                    for (c, &(lo, _)) in cur.iter_mut().zip(bbox.iter()).skip(k + 1) {
                        *c = lo;
                    }
                    break;
                }
            }
        }
    }

    pub fn num_lattice_points(&self) -> usize {
        self.lattice_points_i64().len()
    }

    /// Vertices by exhaustive basic-solution enumeration, sorted and deduplicated.
    pub fn vertices(&self) -> &[Vec<BigRational>] {
        self.vertices.get_or_init(|| {
            if self.is_empty() {
                return Vec::new();
            }
            let rows: Vec<Vec<BigRational>> = self.normals.iter().map(LatticeVector::to_rational).collect();
            let rhs: Vec<BigRational> = self.offsets.iter().cloned().map(BigRational::from_integer).collect();
            let mut found = BTreeSet::new();
            for subset in combinations(rows.len(), self.rank) {
                let a: Vec<Vec<BigRational>> = subset.iter().map(|&i| rows[i].clone()).collect();
                let Some(inv) = matrix::invert(&a) else { continue };
                let b: Vec<BigRational> = subset.iter().map(|&i| rhs[i].clone()).collect();
                let x = matrix::mat_vec(&inv, &b);
                if self.contains_rational(&x) {
                    found.insert(x);
                }
            }
            found.into_iter().collect()
        })
    }

    /// Affine dimension; `-1` when empty.
    pub fn dimension(&self) -> i64 {
        let vs = self.vertices();
        let Some(first) = vs.first() else { return -1 };
        let diffs: Vec<Vec<BigRational>> =
            vs[1..].iter().map(|v| v.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
        matrix::rank_rational(&diffs) as i64
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.rank as i64
    }

    /// Indices of inequalities tight at a rational point.
    pub fn tight_at(&self, p: &[BigRational]) -> Vec<usize> {
        (0..self.normals.len())
            .filter(|&k| self.normals[k].dot_rational(p) == BigRational::from_integer(self.offsets[k].clone()))
            .collect()
    }

    /// Indices of facet-defining inequalities, one per facet (first occurrence wins).
    pub fn facets(&self) -> Vec<usize> {
        let vs = self.vertices();
        let mut out = Vec::new();
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for k in 0..self.normals.len() {
            let b = BigRational::from_integer(self.offsets[k].clone());
            let on: Vec<usize> = (0..vs.len()).filter(|&v| self.normals[k].dot_rational(&vs[v]) == b).collect();
            if on.is_empty() || seen.contains(&on) {
                continue;
            }
            let diffs: Vec<Vec<BigRational>> =
                on[1..].iter().map(|&v| vs[v].iter().zip(&vs[on[0]]).map(|(a, b)| a - b).collect()).collect();
            if matrix::rank_rational(&diffs) + 1 == self.rank {
                seen.push(on);
                out.push(k);
            }
        }
        out
    }

    /// Outer normal fan of a full-dimensional simple polytope, with one maximal cone per
    /// vertex (in [`vertices`](Self::vertices) order) and one ray per facet.
    pub fn normal_fan(&self) -> Result<Fan> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        let facets = self.facets();
        let rays: Vec<LatticeVector> = facets.iter().map(|&k| self.normals[k].primitivize()).collect::<Result<_>>()?;
        let mut cones = Vec::new();
        for v in self.vertices() {
            let tight = self.tight_at(v);
            let cone: Vec<usize> = (0..facets.len()).filter(|&j| tight.contains(&facets[j])).collect();
            if cone.len() != self.rank {
                return Err(Error::NonSimplePolytope);
            }
            cones.push(cone);
        }
        Fan::new(self.rank, rays, cones)
    }
}

fn bounding_box(rank: usize, normals: &[LatticeVector], offsets: &[BigInt]) -> Result<Option<Vec<(i64, i64)>>> {
    let a: Vec<Vec<BigRational>> = normals.iter().map(LatticeVector::to_rational).collect();
    let b: Vec<BigRational> = offsets.iter().cloned().map(BigRational::from_integer).collect();
    let mut bbox = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut c = vec![BigRational::zero(); rank];
        c[i] = BigRational::from_integer(1.into());
        let hi = match lp::maximize(&a, &b, &c) {
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => return Err(Error::UnboundedPolyhedron),
            LpOutcome::Optimal { value, .. } => value.floor().to_integer(),
        };
        c[i] = BigRational::from_integer((-1).into());
        let lo = match lp::maximize(&a, &b, &c) {
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => return Err(Error::UnboundedPolyhedron),
            LpOutcome::Optimal { value, .. } => (-value).ceil().to_integer(),
        };
        let to_i64 = |x: BigInt| x.to_i64().ok_or_else(|| Error::Overflow("bounding box exceeds i64".into()));
        bbox.push((to_i64(lo)?, to_i64(hi)?));
    }
    Ok(Some(bbox))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return out };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeFile {
    normals: Vec<LatticeVector>,
    #[serde(with = "serde_int::vec")]
    offsets: Vec<BigInt>,
}

impl Serialize for LatticePolytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeFile { normals: self.normals.clone(), offsets: self.offsets.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = PolytopeFile::deserialize(d)?;
        let rank = f
            .normals
            .first()
            .map(LatticeVector::rank)
            .ok_or_else(|| serde::de::Error::custom("polytope needs at least one inequality"))?;
        LatticePolytope::new(rank, f.normals, f.offsets).map_err(serde::de::Error::custom)
    }
}
