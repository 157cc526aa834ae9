use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cone::Cone;
use super::lp;
use super::matrix::{self, IntMatrix};
use super::vector::LatticeVector;
use crate::error::{Error, Result};

/// A pure full-dimensional simplicial fan: global rays plus maximal cones as index sets.
///
/// Ray order is the input order and fixes the labelling `D_i`, `x_i` everywhere downstream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FanFile", into = "FanFile")]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Checks shapes only; see [`validate_fan`] for the geometric invariants.
    pub fn new(ambient_rank: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if ambient_rank == 0 {
            return Err(Error::InvalidFan("ambient rank must be positive".into()));
        }
        let mut prim = Vec::with_capacity(rays.len());
        let mut seen = HashSet::new();
        for r in rays {
            if r.rank() != ambient_rank {
                return Err(Error::DimensionMismatch { expected: ambient_rank, found: r.rank() });
            }
            let p = r.primitivize()?;
            if !seen.insert(p.clone()) {
                return Err(Error::InvalidFan(format!("duplicate ray {p}")));
            }
            prim.push(p);
        }
        for (k, c) in max_cones.iter().enumerate() {
            if let Some(&i) = c.iter().find(|&&i| i >= prim.len()) {
                return Err(Error::InvalidFan(format!("cone {k} references missing ray {i}")));
            }
            let distinct: HashSet<_> = c.iter().collect();
            if distinct.len() != c.len() {
                return Err(Error::InvalidFan(format!("cone {k} repeats a ray")));
            }
        }
        Ok(Self { ambient_rank, rays: prim, max_cones })
    }

    pub fn from_i64(ambient_rank: usize, rays: &[Vec<i64>], max_cones: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(ambient_rank, rays.iter().map(|r| LatticeVector::from_i64s(r)).collect(), max_cones)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn cone(&self, k: usize) -> Result<Cone> {
        Cone::new(self.ambient_rank, self.max_cones[k].iter().map(|&i| self.rays[i].clone()).collect())
    }

    pub fn ray_index(&self, v: &LatticeVector) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// Applies a lattice automorphism to every ray.
    pub fn transform(&self, a: &IntMatrix) -> Result<Fan> {
        Fan::new(self.ambient_rank, self.rays.iter().map(|r| a.mul_vec(r)).collect(), self.max_cones.clone())
    }

    /// Reorders rays so that new ray `k` is old ray `order[k]`.
    pub fn reorder_rays(&self, order: &[usize]) -> Result<Fan> {
        let mut inverse = vec![usize::MAX; self.rays.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        if order.len() != self.rays.len() || inverse.contains(&usize::MAX) {
            return Err(Error::InvalidFan("ray reordering is not a permutation".into()));
        }
        let rays = order.iter().map(|&o| self.rays[o].clone()).collect();
        let cones = self.max_cones.iter().map(|c| c.iter().map(|&i| inverse[i]).collect()).collect();
        Fan::new(self.ambient_rank, rays, cones)
    }

    /// Whether the ray indices span a cone of the fan (are contained in a maximal cone).
    pub fn is_face(&self, indices: &[usize]) -> bool {
        self.max_cones.iter().any(|c| indices.iter().all(|i| c.contains(i)))
    }
}

/// JSON shape: `{"rank": n, "rays": [[..], ..], "max_cones": [[..], ..]}` with 0-based indices.
#[derive(Serialize, Deserialize)]
struct FanFile {
    rank: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
}

impl TryFrom<FanFile> for Fan {
    type Error = Error;
    fn try_from(f: FanFile) -> Result<Self> {
        Fan::new(f.rank, f.rays, f.max_cones)
    }
}

impl From<Fan> for FanFile {
    fn from(f: Fan) -> Self {
        FanFile { rank: f.ambient_rank, rays: f.rays, max_cones: f.max_cones }
    }
}

/// Outcome of [`validate_fan`]. `violation` names the first failed invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub simplicial: bool,
    pub smooth_cones: Vec<bool>,
    pub smooth: bool,
    pub facets_paired: bool,
    pub interiors_disjoint: bool,
    pub rays_used: bool,
    pub point_location_ok: bool,
    pub complete: bool,
    pub violation: Option<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

const POINT_LOCATION_SAMPLES: usize = 64;
const POINT_LOCATION_SEED: u64 = 0x5eed_fa11;

pub fn validate_fan(fan: &Fan) -> ValidationReport {
    let n = fan.ambient_rank;
    let mut violation: Option<String> = None;
    let mut note = |msg: String| {
        if violation.is_none() {
            violation = Some(msg);
        }
    };

    let mut cones = Vec::new();
    let mut simplicial = true;
    for (k, c) in fan.max_cones.iter().enumerate() {
        if c.len() != n {
            simplicial = false;
            note(format!("maximal cone {k} has {} rays, expected {n}", c.len()));
            continue;
        }
        match fan.cone(k) {
            Ok(cone) => cones.push(cone),
            Err(_) => {
                simplicial = false;
                note(format!("maximal cone {k} is not simplicial"));
            }
        }
    }
    let distinct: HashSet<Vec<usize>> = fan
        .max_cones
        .iter()
        .map(|c| {
            let mut s = c.clone();
            s.sort_unstable();
            s
        })
        .collect();
    if distinct.len() != fan.max_cones.len() {
        simplicial = false;
        note("a maximal cone is listed twice".into());
    }
    if fan.max_cones.is_empty() {
        simplicial = false;
        note("fan has no maximal cones".into());
    }

    let smooth_cones: Vec<bool> = if simplicial {
        cones.iter().map(|c| c.is_smooth().unwrap_or(false)).collect()
    } else {
        vec![false; fan.max_cones.len()]
    };
    let smooth = simplicial && smooth_cones.iter().all(|&s| s);

    let rays_used = (0..fan.rays.len()).all(|i| fan.max_cones.iter().any(|c| c.contains(&i)));
    if !rays_used {
        note("a ray lies in no maximal cone".into());
    }

    let mut facets_paired = false;
    let mut interiors_disjoint = false;
    let mut point_location_ok = false;
    if simplicial {
        let mut facets: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in &fan.max_cones {
            for skip in 0..n {
                let mut f: Vec<usize> = c.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &i)| i).collect();
                f.sort_unstable();
                *facets.entry(f).or_default() += 1;
            }
        }
        facets_paired = true;
        if let Some((f, count)) = facets.iter().find(|(_, &c)| c != 2) {
            facets_paired = false;
            note(format!("facet {f:?} lies in {count} maximal cones, expected 2"));
        }

        let duals: Vec<Vec<LatticeVector>> = cones.iter().map(facet_normals).collect();
        interiors_disjoint = true;
        'pairs: for a in 0..cones.len() {
            for b in a + 1..cones.len() {
                if !interiors_disjoint_pair(&cones[a], &duals[a], &cones[b], &duals[b]) {
                    interiors_disjoint = false;
                    note(format!("maximal cones {a} and {b} overlap"));
                    break 'pairs;
                }
            }
        }

        point_location_ok = point_location_check(fan, POINT_LOCATION_SAMPLES, POINT_LOCATION_SEED);
        if facets_paired && interiors_disjoint && !point_location_ok {
            note("random point location found a direction not covered exactly once".into());
        }
    }
    let complete = facets_paired && interiors_disjoint && point_location_ok;

    ValidationReport {
        simplicial,
        smooth_cones,
        smooth,
        facets_paired,
        interiors_disjoint,
        rays_used,
        point_location_ok,
        complete,
        violation,
    }
}

/// Inward facet normals of a full-dimensional simplicial cone, scaled to integers.
fn facet_normals(cone: &Cone) -> Vec<LatticeVector> {
    let inv = cone.ray_matrix().inverse_rational().expect("simplicial cone");
    inv.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::from(1), |l, q| l.lcm(q.denom()));
            let lq = BigRational::from_integer(l);
            LatticeVector::new(row.iter().map(|q| (q * &lq).to_integer()).collect())
        })
        .collect()
}

fn interiors_disjoint_pair(a: &Cone, a_normals: &[LatticeVector], b: &Cone, b_normals: &[LatticeVector]) -> bool {
    let separated = |normals: &[LatticeVector], other: &Cone| {
        normals.iter().any(|w| other.rays().iter().all(|r| !w.dot(r).is_positive()))
    };
    if separated(a_normals, b) || separated(b_normals, a) {
        return true;
    }
    // Interiors meet iff R_a (1 + x) = R_b (1 + y) has a solution with x, y >= 0.
    let n = a.ambient_rank();
    let ra = a.ray_matrix().to_rational();
    let rb = b.ray_matrix().to_rational();
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| ra[i].iter().cloned().chain(rb[i].iter().map(|x| -x)).collect())
        .collect();
    let rhs: Vec<BigRational> = (0..n)
        .map(|i| rb[i].iter().fold(BigRational::zero(), |s, x| s + x) - ra[i].iter().fold(BigRational::zero(), |s, x| s + x))
        .collect();
    lp::feasible_nonneg(&rows, &rhs).is_none()
}

/// Samples random integer directions and checks each lies in the interior of exactly one
/// maximal cone; directions that land on a cone boundary are redrawn.
pub fn point_location_check(fan: &Fan, samples: usize, seed: u64) -> bool {
    let n = fan.ambient_rank;
    let Ok(inverses) = fan
        .max_cones
        .iter()
        .enumerate()
        .map(|(k, _)| fan.cone(k).ok().and_then(|c| c.ray_matrix().inverse_rational()).ok_or(()))
        .collect::<std::result::Result<Vec<_>, ()>>()
    else {
        return false;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < samples {
        attempts += 1;
        if attempts > samples * 20 {
            return false;
        }
        let v: Vec<BigRational> = (0..n).map(|_| BigRational::from_integer(rng.gen_range(-1000i64..=1000).into())).collect();
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        let mut hits = 0;
        let mut boundary = false;
        for inv in &inverses {
            let coeffs = matrix::mat_vec(inv, &v);
            if coeffs.iter().all(|c| !c.is_negative()) {
                if coeffs.iter().any(Zero::is_zero) {
                    boundary = true;
                }
                hits += 1;
            }
        }
        if boundary {
            continue;
        }
        if hits != 1 {
            return false;
        }
        accepted += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn projective_plane_is_complete_and_smooth() {
        let fan = Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap();
        let r = validate_fan(&fan);
        assert!(r.is_valid(), "{r:?}");
        assert!(r.complete && r.smooth);
    }

    #[test]
    fn removing_a_cone_breaks_completeness() {
        let fan = Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2]]).unwrap();
        let r = validate_fan(&fan);
        assert!(!r.complete && !r.facets_paired);
        assert!(r.violation.unwrap().contains("facet"));
    }

    #[test]
    fn hirzebruch_one_is_complete_and_smooth() {
        let r = validate_fan(&catalog::hirzebruch(1));
        assert!(r.complete && r.smooth, "{r:?}");
    }

    #[test]
    fn overlapping_cones_detected() {
        // Two copies of the plane wrapped around the origin twice.
        let rays = [vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![1, 1], vec![-1, 1], vec![-1, -1], vec![1, -1]];
        let cones = vec![vec![0, 5], vec![5, 3], vec![3, 4], vec![4, 2], vec![2, 7], vec![7, 1], vec![1, 6], vec![6, 0]];
        let r = validate_fan(&Fan::from_i64(2, &rays, cones).unwrap());
        assert!(r.facets_paired);
        assert!(!r.interiors_disjoint);
        assert!(!r.complete);
    }

    #[test]
    fn non_smooth_but_simplicial() {
        // weighted projective plane P(1,1,2)
        let fan = Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![-1, -2]], vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap();
        let r = validate_fan(&fan);
        assert!(r.complete && !r.smooth, "{r:?}");
    }

    #[test]
    fn unimodular_invariance() {
        let fan = catalog::hirzebruch(2);
        let a = IntMatrix::from_i64_rows(&[vec![2, 1], vec![1, 1]]);
        let moved = fan.transform(&a).unwrap();
        assert_eq!(validate_fan(&fan).complete, validate_fan(&moved).complete);
        assert_eq!(validate_fan(&fan).smooth, validate_fan(&moved).smooth);
    }

    #[test]
    fn thousand_directions_located_once() {
        for fan in [catalog::projective_space(3), catalog::p1_power(3), catalog::hirzebruch(3), catalog::bl3_p2()] {
            assert!(point_location_check(&fan, 1000, 7));
        }
    }
}
