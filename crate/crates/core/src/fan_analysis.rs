//! Quasi-transitivity, convex capsules, Demazure roots, fan symmetries and `(P^1)^n` detection.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cox_presentation::CoxPresentation;
use crate::error::{Error, Result};
use crate::lattice::{gl_change_of_basis, lp, matrix, validate_fan, Cone, Fan, IntMatrix, LatticePolytope, LatticeVector};

/// Transitive maximal cones, plus the fan moved so the first of them is `<-e_1, ..., -e_n>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityVerdict {
    pub transitive_cone_indices: Vec<usize>,
    pub normalization: Option<Normalization>,
}

impl TransitivityVerdict {
    pub fn is_quasi_transitive(&self) -> bool {
        !self.transitive_cone_indices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub cone_index: usize,
    pub normalized_fan: Fan,
    pub basis_change: IntMatrix,
    /// Normalized ray `k` is the image of input ray `ray_order[k]`.
    pub ray_order: Vec<usize>,
}

/// `rays` all lie in `-cone`.
pub fn rays_in_negative_cone<'a>(cone: &Cone, rays: impl IntoIterator<Item = &'a LatticeVector>) -> bool {
    let neg = cone.negated();
    rays.into_iter().all(|r| neg.contains(r))
}

/// Smooth, and every ray outside the cone lies in its negative.
pub fn is_transitive_cone(fan: &Fan, k: usize) -> Result<bool> {
    let cone = fan.cone(k)?;
    if !cone.is_smooth()? {
        return Ok(false);
    }
    let members = &fan.max_cones()[k];
    let outside = (0..fan.num_rays()).filter(|i| !members.contains(i)).map(|i| fan.ray(i));
    Ok(rays_in_negative_cone(&cone, outside))
}

fn require_valid(fan: &Fan) -> Result<()> {
    let report = validate_fan(fan);
    match report.violation {
        None => Ok(()),
        Some(v) => Err(Error::InvalidFan(v)),
    }
}

pub fn transitive_cones(fan: &Fan) -> Result<TransitivityVerdict> {
    require_valid(fan)?;
    let mut indices = Vec::new();
    for k in 0..fan.max_cones().len() {
        if is_transitive_cone(fan, k)? {
            indices.push(k);
        }
    }
    let normalization = match indices.first() {
        Some(&k) => Some(normalize_at(fan, k)?),
        None => None,
    };
    Ok(TransitivityVerdict { transitive_cone_indices: indices, normalization })
}

/// Moves maximal cone `k` to `<-e_1, ..., -e_n>` and lists its rays first.
pub fn normalize_at(fan: &Fan, k: usize) -> Result<Normalization> {
    let cone = fan.cone(k)?;
    let basis_change = gl_change_of_basis(&cone)?;
    let members = &fan.max_cones()[k];
    let mut ray_order = members.clone();
    ray_order.extend((0..fan.num_rays()).filter(|i| !members.contains(i)));
    let normalized_fan = fan.transform(&basis_change)?.reorder_rays(&ray_order)?;
    let first = normalized_fan.max_cones().iter().position(|c| {
        let mut s = c.clone();
        s.sort_unstable();
        s == (0..fan.ambient_rank()).collect::<Vec<_>>()
    });
    Ok(Normalization { cone_index: first.unwrap_or(k), normalized_fan, basis_change, ray_order })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapsuleResult {
    pub vertex: LatticeVector,
    /// Far endpoints of the edges at the vertex.
    #[serde(with = "crate::lattice::vector::serde_rational::vec_vec")]
    pub neighbors: Vec<Vec<BigRational>>,
    #[serde(with = "crate::lattice::vector::serde_rational::vec")]
    pub reflection: Vec<BigRational>,
    #[serde(with = "crate::lattice::vector::serde_rational::vec_vec")]
    pub capsule_vertices: Vec<Vec<BigRational>>,
    pub contains_polytope: bool,
    /// Only planar verdicts are certified; in higher dimension the fan criterion decides.
    pub certified: bool,
}

/// Convex capsule of a smooth vertex: the vertex, its edge neighbours `p_i`, and the point
/// reflection `sum p_i - (n-1) p`.
pub fn vertex_capsule(polytope: &LatticePolytope, vertex: &LatticeVector) -> Result<CapsuleResult> {
    let n = polytope.rank();
    if vertex.rank() != n {
        return Err(Error::DimensionMismatch { expected: n, found: vertex.rank() });
    }
    let p = vertex.to_rational();
    if !polytope.vertices().contains(&p) {
        return Err(Error::NotAVertex);
    }
    let tight = polytope.tight_at(&p);
    let facets: Vec<usize> = polytope.facets().into_iter().filter(|k| tight.contains(k)).collect();
    if facets.len() != n {
        return Err(Error::CapsuleUndefined);
    }
    let normals: Vec<Vec<BigRational>> = facets.iter().map(|&k| polytope.normals()[k].to_rational()).collect();
    let inv = matrix::invert(&normals).ok_or(Error::CapsuleUndefined)?;
    let mut directions = Vec::with_capacity(n);
    for i in 0..n {
        let d: Vec<BigRational> = (0..n).map(|r| -&inv[r][i]).collect();
        directions.push(LatticeVector::primitive_from_rational(&d)?);
    }
    if !IntMatrix::from_columns(&directions).is_unimodular() {
        return Err(Error::CapsuleUndefined);
    }

    let mut neighbors = Vec::with_capacity(n);
    for d in &directions {
        let dq = d.to_rational();
        let mut step: Option<BigRational> = None;
        for (a, b) in polytope.normals().iter().zip(polytope.offsets()) {
            let rate = a.dot(d);
            if rate.is_positive() {
                let slack = BigRational::from_integer(b.clone()) - a.dot_rational(&p);
                let t = slack / BigRational::from_integer(rate);
                if step.as_ref().is_none_or(|s| t < *s) {
                    step = Some(t);
                }
            }
        }
        let t = step.ok_or(Error::UnboundedPolyhedron)?;
        neighbors.push(p.iter().zip(&dq).map(|(x, y)| x + &t * y).collect::<Vec<_>>());
    }
    let scale = BigRational::from_integer(BigInt::from(n as i64 - 1));
    let reflection: Vec<BigRational> = (0..n)
        .map(|j| neighbors.iter().fold(BigRational::zero(), |s, q| s + &q[j]) - &scale * &p[j])
        .collect();

    let mut capsule_vertices = vec![p.clone()];
    capsule_vertices.extend(neighbors.iter().cloned());
    capsule_vertices.push(reflection.clone());
    let contains_polytope = polytope.vertices().iter().all(|w| in_convex_hull(&capsule_vertices, w));

    Ok(CapsuleResult {
        vertex: vertex.clone(),
        neighbors,
        reflection,
        capsule_vertices,
        contains_polytope,
        certified: n == 2,
    })
}

fn in_convex_hull(points: &[Vec<BigRational>], w: &[BigRational]) -> bool {
    let n = w.len();
    let mut rows: Vec<Vec<BigRational>> = (0..n).map(|j| points.iter().map(|q| q[j].clone()).collect()).collect();
    rows.push(vec![BigRational::one(); points.len()]);
    let mut rhs = w.to_vec();
    rhs.push(BigRational::one());
    lp::feasible_nonneg(&rows, &rhs).is_some()
}

/// `m` with `<m, rho_i> = -1` and `<m, rho_j> >= 0` for every other ray.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DemazureRoot {
    pub ray_index: usize,
    pub m: LatticeVector,
}

impl DemazureRoot {
    pub fn is_valid_for(&self, fan: &Fan) -> bool {
        self.ray_index < fan.num_rays()
            && self.m.rank() == fan.ambient_rank()
            && fan.rays().iter().enumerate().all(|(j, r)| {
                let v = self.m.dot(r);
                if j == self.ray_index { v == BigInt::from(-1) } else { !v.is_negative() }
            })
    }
}

pub fn demazure_roots(fan: &Fan) -> Result<Vec<DemazureRoot>> {
    if !validate_fan(fan).complete {
        return Err(Error::RootPolytopeUnbounded);
    }
    let n = fan.ambient_rank();
    let mut roots = Vec::new();
    for i in 0..fan.num_rays() {
        let rho = fan.ray(i);
        let mut normals = vec![rho.clone(), -rho];
        let mut offsets = vec![BigInt::from(-1), BigInt::one()];
        for (j, r) in fan.rays().iter().enumerate() {
            if j != i {
                normals.push(-r);
                offsets.push(BigInt::zero());
            }
        }
        let poly = LatticePolytope::new(n, normals, offsets).map_err(|e| match e {
            Error::UnboundedPolyhedron => Error::RootPolytopeUnbounded,
            other => other,
        })?;
        let verts = poly.vertices();
        if verts.is_empty() {
            continue;
        }
        // scan the integer hull of the exact vertex bounding box
        let lo: Vec<i64> = (0..n).map(|j| to_i64(verts.iter().map(|v| v[j].ceil()).min().unwrap())).collect::<Result<_>>()?;
        let hi: Vec<i64> = (0..n).map(|j| to_i64(verts.iter().map(|v| v[j].floor()).max().unwrap())).collect::<Result<_>>()?;
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            continue;
        }
        let mut cur = lo.clone();
        loop {
            if poly.contains_i64(&cur) {
                roots.push(DemazureRoot { ray_index: i, m: LatticeVector::from_i64s(&cur) });
            }
            let mut k = n;
            let mut done = true;
            while k > 0 {
                k -= 1;
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    cur[k + 1..].copy_from_slice(&lo[k + 1..]);
                    done = false;
                    break;
                }
            }
            if done {
                break;
            }
        }
    }
    debug_assert!(roots.iter().all(|r| r.is_valid_for(fan)));
    roots.sort();
    Ok(roots)
}

fn to_i64(q: BigRational) -> Result<i64> {
    use num_traits::ToPrimitive;
    q.to_integer().to_i64().ok_or_else(|| Error::Overflow("root bounding box exceeds i64".into()))
}

/// Every root of a ray outside the transitive cone is some `-e_i`.
pub fn roots_outside_sigma_check(verdict: &TransitivityVerdict, roots: &[DemazureRoot]) -> bool {
    let Some(norm) = &verdict.normalization else { return false };
    let n = norm.normalized_fan.ambient_rank();
    roots
        .iter()
        .filter(|r| r.ray_index >= n)
        .all(|r| (0..n).any(|i| r.m == -&LatticeVector::unit(n, i)))
}

/// `I_j = { i : column i of Q is e_j }` and `I = { i < n : i in no I_j }` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayIndexPartition {
    pub by_class_generator: Vec<Vec<usize>>,
    pub rest: Vec<usize>,
}

pub fn ray_index_partition(cp: &CoxPresentation) -> RayIndexPartition {
    let q = cp.q();
    let k = q.nrows();
    let by_class_generator: Vec<Vec<usize>> = (0..k)
        .map(|j| {
            let ej = LatticeVector::unit(k, j);
            (0..q.ncols()).filter(|&i| q.column(i) == ej).collect()
        })
        .collect();
    let rest = (0..q.ncols()).filter(|i| !by_class_generator.iter().any(|s| s.contains(i))).collect();
    RayIndexPartition { by_class_generator, rest }
}

/// All lattice automorphisms permuting the rays and the maximal cones, sorted.
pub fn fan_symmetries(fan: &Fan) -> Result<Vec<IntMatrix>> {
    require_valid(fan)?;
    let n = fan.ambient_rank();
    let base = &fan.max_cones()[0];
    let base_inv = IntMatrix::from_columns(&base.iter().map(|&i| fan.ray(i).clone()).collect::<Vec<_>>())
        .inverse_rational()
        .ok_or(Error::DependentRays)?;
    let degree: Vec<usize> = (0..fan.num_rays()).map(|i| fan.max_cones().iter().filter(|c| c.contains(&i)).count()).collect();
    let lookup: HashMap<&LatticeVector, usize> = fan.rays().iter().enumerate().map(|(i, r)| (r, i)).collect();
    let cone_sets: BTreeSet<Vec<usize>> = fan.max_cones().iter().map(|c| sorted(c)).collect();

    let mut found = BTreeSet::new();
    for target in fan.max_cones() {
        let mut image = Vec::with_capacity(n);
        let mut used = vec![false; n];
        extend_images(base, target, &degree, &mut image, &mut used, &mut |img: &[usize]| {
            let cols: Vec<LatticeVector> = img.iter().map(|&i| fan.ray(i).clone()).collect();
            let target_q = IntMatrix::from_columns(&cols).to_rational();
            let a = mat_mul(&target_q, &base_inv);
            if a.iter().flatten().any(|x| !x.is_integer()) {
                return;
            }
            let a = IntMatrix::from_rows(
                a.into_iter().map(|r| LatticeVector::new(r.into_iter().map(|x| x.to_integer()).collect())).collect(),
            );
            if !a.is_unimodular() {
                return;
            }
            let Some(perm) = fan.rays().iter().map(|r| lookup.get(&a.mul_vec(r)).copied()).collect::<Option<Vec<_>>>()
            else {
                return;
            };
            let maps_cones =
                fan.max_cones().iter().all(|c| cone_sets.contains(&sorted(&c.iter().map(|&i| perm[i]).collect::<Vec<_>>())));
            if maps_cones {
                found.insert(a);
            }
        });
    }
    Ok(found.into_iter().collect())
}

fn extend_images(
    base: &[usize],
    target: &[usize],
    degree: &[usize],
    image: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]),
) {
    let k = image.len();
    if k == base.len() {
        visit(image);
        return;
    }
    for (slot, &t) in target.iter().enumerate() {
        if used[slot] || degree[t] != degree[base[k]] {
            continue;
        }
        used[slot] = true;
        image.push(t);
        extend_images(base, target, degree, image, used, visit);
        image.pop();
        used[slot] = false;
    }
}

fn sorted(c: &[usize]) -> Vec<usize> {
    let mut s = c.to_vec();
    s.sort_unstable();
    s
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| row.iter().zip(b).fold(BigRational::zero(), |s, (x, br)| s + x * &br[j])).collect())
        .collect()
}

/// Identification of the fan with `(P^1)^n` from two antipodal transitive cones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct P1PowerDetection {
    pub n: usize,
    pub cones: (usize, usize),
    /// `(i, j)` with ray `j = -ray i`, `i` in the first cone.
    pub pairing: Vec<(usize, usize)>,
}

pub fn detect_p1_power(fan: &Fan) -> Result<Option<P1PowerDetection>> {
    let verdict = transitive_cones(fan)?;
    let n = fan.ambient_rank();
    let cones = fan.max_cones();
    let lookup: HashMap<&LatticeVector, usize> = fan.rays().iter().enumerate().map(|(i, r)| (r, i)).collect();
    for (ai, &a) in verdict.transitive_cone_indices.iter().enumerate() {
        for &b in &verdict.transitive_cone_indices[ai + 1..] {
            if cones[a].iter().any(|i| cones[b].contains(i)) {
                continue;
            }
            let pairing: Option<Vec<(usize, usize)>> =
                cones[a].iter().map(|&i| lookup.get(&-fan.ray(i)).map(|&j| (i, j))).collect();
            let Some(pairing) = pairing else { continue };
            if !pairing.iter().all(|(_, j)| cones[b].contains(j)) || fan.num_rays() != 2 * n {
                continue;
            }
            // every maximal cone picks exactly one ray from each antipodal pair
            let product_shape = cones.len() == 1 << n
                && cones.iter().all(|c| pairing.iter().all(|(i, j)| c.contains(i) != c.contains(j)));
            if product_shape {
                return Ok(Some(P1PowerDetection { n, cones: (a, b), pairing }));
            }
        }
    }
    Ok(None)
}
