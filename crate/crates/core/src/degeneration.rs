//! Coordinate-hyperplane degenerations of standard-form polytopes and recursive certificates of
//! toric non-speciality.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePolytope, LatticeVector};
use crate::linsys::{analyze_polytope, derivative_orders, derive_seed, toric_truncation, PolytopeSystem, RankConfig, SpecialityReport};

/// Full-dimensional polytope in the first orthant whose vertex at the origin is smooth, has its
/// edges along the coordinate axes, and is transitive for the normal fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardFormPolytope {
    polytope: LatticePolytope,
}

impl StandardFormPolytope {
    pub fn new(polytope: LatticePolytope) -> Result<Self> {
        standard_form_violation(&polytope).map_or(Ok(StandardFormPolytope { polytope }), |why| Err(Error::NotStandardForm(why)))
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    pub fn into_inner(self) -> LatticePolytope {
        self.polytope
    }

    /// Largest value of coordinate `axis` on the polytope.
    pub fn width(&self, axis: usize) -> i64 {
        self.polytope.bounding_box().map_or(0, |b| b[axis].1)
    }
}

fn standard_form_violation(p: &LatticePolytope) -> Option<String> {
    let n = p.rank();
    if !p.is_full_dimensional() {
        return Some("not full-dimensional".into());
    }
    if p.vertices().iter().flatten().any(Signed::is_negative) {
        return Some("not in the first orthant".into());
    }
    let origin = vec![Zero::zero(); n];
    if !p.contains_rational(&origin) {
        return Some("origin is not in the polytope".into());
    }
    let facets = p.facets();
    let tight = p.tight_at(&origin);
    let mut at_origin = vec![false; n];
    for &k in &facets {
        let a = &p.normals()[k];
        if tight.contains(&k) {
            // the facet must be m_i >= 0
            match (0..n).find(|&i| a == &-&LatticeVector::unit(n, i).scale(&a.content())) {
                Some(i) if p.offsets()[k].is_zero() => at_origin[i] = true,
                _ => return Some(format!("facet {k} through the origin is not a coordinate hyperplane")),
            }
        } else if !a.is_nonnegative() {
            return Some(format!("facet normal {a} is not in the nonnegative orthant; origin not transitive"));
        }
    }
    if at_origin.iter().any(|x| !x) {
        return Some("origin is not a vertex with edges along the axes".into());
    }
    None
}

/// Cut `m_axis = level`; the first `s` multiplicities go to the minus side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSpec {
    pub axis: usize,
    pub level: i64,
    pub s: usize,
}

/// `P^-_{c-1}`, `P^-_c`, `P^+_{c-1}`, `P^+_c` in the coordinates of `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPieces {
    pub minus_c_minus_1: LatticePolytope,
    pub minus_c: LatticePolytope,
    pub plus_c_minus_1: LatticePolytope,
    pub plus_c: LatticePolytope,
}

fn slab(p: &LatticePolytope, axis: usize, level: i64, below: bool) -> LatticePolytope {
    let n = p.rank();
    let e = LatticeVector::unit(n, axis);
    let (normal, offset) = if below { (e, BigInt::from(level)) } else { (-&e, BigInt::from(-level)) };
    p.with_inequality(normal, offset).expect("a slab of a polytope is bounded")
}

fn pieces(p: &LatticePolytope, axis: usize, c: i64) -> SplitPieces {
    SplitPieces {
        minus_c_minus_1: slab(p, axis, c - 1, true),
        minus_c: slab(p, axis, c, true),
        plus_c_minus_1: slab(p, axis, c - 1, false),
        plus_c: slab(p, axis, c, false),
    }
}

pub fn split_polytope(p: &StandardFormPolytope, axis: usize, c: i64) -> Result<SplitPieces> {
    let n = p.polytope.rank();
    if axis >= n {
        return Err(Error::InvalidSplit(format!("axis {axis} out of range for rank {n}")));
    }
    if c < 1 || c > p.width(axis) {
        return Err(Error::InvalidSplit(format!("level {c} outside 1..={}", p.width(axis))));
    }
    Ok(pieces(&p.polytope, axis, c))
}

/// `c e_axis + {u >= 0 : |u| <= mu - 1}`.
pub fn delta_c_mu(n: usize, axis: usize, c: i64, mu: u32) -> Vec<Vec<i64>> {
    derivative_orders(n, mu)
        .into_iter()
        .map(|mut u| {
            u[axis] += c;
            u
        })
        .collect()
}

/// What a parent needs from a child: its toric virtual dimension and whether it is toric non-special.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildSummary {
    pub tvdim: i64,
    pub toric_nonspecial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisTranscript {
    pub tvdim_minus: i64,
    pub tvdim_plus: i64,
    pub children_toric_nonspecial: bool,
    pub tvdim_product_nonnegative: bool,
    /// `Delta(c, mu_i)` inside `P^+_c` for the first `s` points.
    pub plus_containment: bool,
    /// `Delta(0, mu_i)` inside `P^-_{c-1}` for the remaining points.
    pub minus_containment: bool,
    pub witness: Option<String>,
    pub passed: bool,
}

/// The three hypotheses of the degeneration theorem, checked literally; `mults` in split order.
pub fn check_hypotheses(
    p: &LatticePolytope,
    split: &SplitSpec,
    mults: &[u32],
    minus: ChildSummary,
    plus: ChildSummary,
) -> HypothesisTranscript {
    let n = p.rank();
    let pcs = pieces(p, split.axis, split.level);
    let mut witness = None;

    let children_toric_nonspecial = minus.toric_nonspecial && plus.toric_nonspecial;
    if !children_toric_nonspecial {
        witness = Some(format!("child toric special (minus: {}, plus: {})", !minus.toric_nonspecial, !plus.toric_nonspecial));
    }
    let tvdim_product_nonnegative = (minus.tvdim + 1) * (plus.tvdim + 1) >= 0;
    if !tvdim_product_nonnegative && witness.is_none() {
        witness = Some(format!("(tvdim+ + 1)(tvdim- + 1) = ({})({}) < 0", plus.tvdim + 1, minus.tvdim + 1));
    }
    let mut containment = |range: std::ops::Range<usize>, c: i64, target: &LatticePolytope, label: &str| {
        for i in range {
            if let Some(u) = delta_c_mu(n, split.axis, c, mults[i]).into_iter().find(|u| !target.contains_i64(u)) {
                if witness.is_none() {
                    witness = Some(format!("{u:?} in Delta({c},{}) of point {} lies outside {label}", mults[i], i + 1));
                }
                return false;
            }
        }
        true
    };
    let s = split.s.min(mults.len());
    let plus_containment = containment(0..s, split.level, &pcs.plus_c, "P+_c");
    let minus_containment = containment(s..mults.len(), 0, &pcs.minus_c_minus_1, "P-_{c-1}");
    HypothesisTranscript {
        tvdim_minus: minus.tvdim,
        tvdim_plus: plus.tvdim,
        children_toric_nonspecial,
        tvdim_product_nonnegative,
        plus_containment,
        minus_containment,
        passed: children_toric_nonspecial && tvdim_product_nonnegative && plus_containment && minus_containment,
        witness,
    }
}

/// Child systems of a split: `P^-_{c-1}` with the first `s` points, and `P^+_c - c e_axis` with the rest.
pub fn child_systems(sys: &PolytopeSystem, split: &SplitSpec) -> (PolytopeSystem, PolytopeSystem) {
    let pcs = pieces(&sys.polytope, split.axis, split.level);
    let shift = LatticeVector::unit(sys.rank(), split.axis).scale(&BigInt::from(-split.level));
    let s = split.s.min(sys.multiplicities.len());
    (
        PolytopeSystem::new(pcs.minus_c_minus_1, &sys.multiplicities[..s]),
        PolytopeSystem::new(pcs.plus_c.translate(&shift), &sys.multiplicities[s..]),
    )
}

fn tvdim(sys: &PolytopeSystem) -> i64 {
    sys.polytope.num_lattice_points() as i64 - toric_truncation(sys).iter().sum::<usize>() as i64 - 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateNode {
    Leaf {
        system: PolytopeSystem,
        report: SpecialityReport,
    },
    Split {
        system: PolytopeSystem,
        tvdim: i64,
        split: SplitSpec,
        transcript: HypothesisTranscript,
        minus: Box<CertificateNode>,
        plus: Box<CertificateNode>,
    },
}

impl CertificateNode {
    pub fn system(&self) -> &PolytopeSystem {
        match self {
            CertificateNode::Leaf { system, .. } | CertificateNode::Split { system, .. } => system,
        }
    }

    pub fn tvdim(&self) -> i64 {
        match self {
            CertificateNode::Leaf { report, .. } => report.tvdim,
            CertificateNode::Split { tvdim, .. } => *tvdim,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            CertificateNode::Leaf { .. } => 0,
            CertificateNode::Split { minus, plus, .. } => 1 + minus.depth().max(plus.depth()),
        }
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            CertificateNode::Leaf { .. } => 1,
            CertificateNode::Split { minus, plus, .. } => minus.num_leaves() + plus.num_leaves(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CertifyOutcome {
    Certified { certificate: CertificateNode },
    /// No proof found; this says nothing about speciality.
    Inconclusive { reason: String },
}

/// Axes by decreasing width, levels from the middle outwards, point splits from balanced outwards.
fn candidate_splits(p: &StandardFormPolytope, k: usize) -> Vec<SplitSpec> {
    let n = p.polytope.rank();
    let mut axes: Vec<usize> = (0..n).collect();
    axes.sort_by_key(|&i| std::cmp::Reverse(p.width(i)));
    let mut out = Vec::new();
    for axis in axes {
        let w = p.width(axis);
        let mut levels: Vec<i64> = (1..=w).collect();
        levels.sort_by_key(|&c| ((2 * c - (w + 1)).abs(), c));
        for level in levels {
            let mut sizes: Vec<usize> = (1..k).collect();
            sizes.sort_by_key(|&s| ((2 * s as i64 - k as i64).abs(), s));
            out.extend(sizes.into_iter().map(|s| SplitSpec { axis, level, s }));
        }
    }
    out
}

struct Search<'a> {
    cfg: &'a RankConfig,
    depth_exhausted: bool,
}

impl Search<'_> {
    fn node(&mut self, sys: &PolytopeSystem, depth: usize, seed: u64) -> Result<Option<CertificateNode>> {
        let k = sys.multiplicities.len();
        if k >= 2 {
            if let Ok(sf) = StandardFormPolytope::new(sys.polytope.clone()) {
                if depth == 0 {
                    self.depth_exhausted = true;
                } else if let Some(node) = self.split(sys, &sf, depth, seed)? {
                    return Ok(Some(node));
                }
            }
        }
        let report = analyze_polytope(sys, &self.cfg.with_seed(seed))?;
        Ok((report.dim == report.tedim).then(|| CertificateNode::Leaf { system: sys.clone(), report }))
    }

    fn split(&mut self, sys: &PolytopeSystem, sf: &StandardFormPolytope, depth: usize, seed: u64) -> Result<Option<CertificateNode>> {
        for split in candidate_splits(sf, sys.multiplicities.len()) {
            let (minus_sys, plus_sys) = child_systems(sys, &split);
            let optimistic = ChildSummary { tvdim: tvdim(&minus_sys), toric_nonspecial: true };
            let optimistic_plus = ChildSummary { tvdim: tvdim(&plus_sys), toric_nonspecial: true };
            // cheap combinatorial hypotheses first
            if !check_hypotheses(&sys.polytope, &split, &sys.multiplicities, optimistic, optimistic_plus).passed {
                continue;
            }
            let Some(minus) = self.node(&minus_sys, depth - 1, derive_seed(seed, 1))? else { continue };
            let Some(plus) = self.node(&plus_sys, depth - 1, derive_seed(seed, 2))? else { continue };
            let transcript = check_hypotheses(
                &sys.polytope,
                &split,
                &sys.multiplicities,
                ChildSummary { tvdim: minus.tvdim(), toric_nonspecial: true },
                ChildSummary { tvdim: plus.tvdim(), toric_nonspecial: true },
            );
            debug_assert!(transcript.passed);
            return Ok(Some(CertificateNode::Split {
                system: sys.clone(),
                tvdim: tvdim(sys),
                split,
                transcript,
                minus: Box::new(minus),
                plus: Box::new(plus),
            }));
        }
        Ok(None)
    }
}

/// Depth-first search for a certificate that `sys` is toric non-special.
pub fn certify(sys: &PolytopeSystem, max_depth: usize, cfg: &RankConfig) -> Result<CertifyOutcome> {
    StandardFormPolytope::new(sys.polytope.clone())?;
    let mut search = Search { cfg, depth_exhausted: false };
    Ok(match search.node(sys, max_depth, cfg.seed)? {
        Some(certificate) => CertifyOutcome::Certified { certificate },
        None if search.depth_exhausted => CertifyOutcome::Inconclusive { reason: "depth limit exhausted".into() },
        None => CertifyOutcome::Inconclusive { reason: "no certificate found".into() },
    })
}

/// Re-derives every split and transcript and re-samples every leaf rank under `cfg`.
pub fn verify_certificate(cert: &CertificateNode, cfg: &RankConfig) -> bool {
    verify_node(cert, cfg, cfg.seed)
}

fn verify_node(node: &CertificateNode, cfg: &RankConfig, seed: u64) -> bool {
    match node {
        CertificateNode::Leaf { system, report } => {
            if report.dim != report.tedim || report.multiplicities != system.multiplicities {
                return false;
            }
            let Ok(fresh) = analyze_polytope(system, &cfg.with_seed(seed)) else { return false };
            fresh.dim == fresh.tedim
                && (fresh.h0, fresh.rank, fresh.dim, fresh.vdim, fresh.edim, fresh.tvdim, fresh.tedim)
                    == (report.h0, report.rank, report.dim, report.vdim, report.edim, report.tvdim, report.tedim)
        }
        CertificateNode::Split { system, tvdim: recorded, split, transcript, minus, plus } => {
            let Ok(sf) = StandardFormPolytope::new(system.polytope.clone()) else { return false };
            let k = system.multiplicities.len();
            if split.s == 0 || split.s >= k || split_polytope(&sf, split.axis, split.level).is_err() {
                return false;
            }
            if *recorded != tvdim(system) {
                return false;
            }
            let (minus_sys, plus_sys) = child_systems(system, split);
            if minus.system() != &minus_sys || plus.system() != &plus_sys {
                return false;
            }
            let fresh = check_hypotheses(
                &system.polytope,
                split,
                &system.multiplicities,
                ChildSummary { tvdim: tvdim(&minus_sys), toric_nonspecial: true },
                ChildSummary { tvdim: tvdim(&plus_sys), toric_nonspecial: true },
            );
            fresh == *transcript
                && fresh.passed
                && minus.tvdim() == fresh.tvdim_minus
                && plus.tvdim() == fresh.tvdim_plus
                && verify_node(minus, cfg, derive_seed(seed, 1))
                && verify_node(plus, cfg, derive_seed(seed, 2))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linsys::analyze_polytope;

    fn boxp(a: i64, b: i64) -> LatticePolytope {
        LatticePolytope::cube(&[a, b])
    }

    fn trapezoid(n: i64) -> LatticePolytope {
        LatticePolytope::from_i64(&[vec![-1, 0], vec![0, -1], vec![1, 1], vec![0, 1]], &[0, 0, n, 1]).unwrap()
    }

    #[test]
    fn standard_form_checks() {
        assert!(StandardFormPolytope::new(boxp(2, 1)).is_ok());
        assert!(StandardFormPolytope::new(trapezoid(3)).is_ok());
        assert!(StandardFormPolytope::new(LatticePolytope::simplex(3, 2)).is_ok());
        assert!(StandardFormPolytope::new(catalog::hexagon()).is_err());
        // edges at the origin are not both along the axes
        let slanted = LatticePolytope::from_i64(&[vec![1, 0], vec![0, -1], vec![-1, 1]], &[1, 0, 0]).unwrap();
        assert!(matches!(StandardFormPolytope::new(slanted), Err(Error::NotStandardForm(_))));
        let flat = LatticePolytope::cube(&[2, 0]);
        assert!(StandardFormPolytope::new(flat).is_err());
    }

    #[test]
    fn split_examples() {
        let b = StandardFormPolytope::new(boxp(2, 1)).unwrap();
        let pcs = split_polytope(&b, 0, 1).unwrap();
        assert_eq!(pcs.minus_c_minus_1.num_lattice_points(), 2);
        assert_eq!(pcs.plus_c.num_lattice_points(), 4);
        let t = StandardFormPolytope::new(trapezoid(3)).unwrap();
        let pcs = split_polytope(&t, 0, 2).unwrap();
        assert_eq!(pcs.minus_c_minus_1.num_lattice_points(), 4);
        assert_eq!(pcs.plus_c.num_lattice_points(), 3);
        let full = split_polytope(&b, 0, 2).unwrap();
        assert_eq!(full.minus_c.lattice_points_i64(), b.polytope().lattice_points_i64());
        assert!(!full.plus_c.is_full_dimensional());
        assert!(split_polytope(&b, 0, 3).is_err());
        assert!(split_polytope(&b, 0, 0).is_err());
    }

    #[test]
    fn slab_bookkeeping() {
        for p in [boxp(3, 2), trapezoid(5), LatticePolytope::simplex(2, 4)] {
            let sf = StandardFormPolytope::new(p.clone()).unwrap();
            for axis in 0..2 {
                for c in 1..=sf.width(axis) {
                    let pcs = split_polytope(&sf, axis, c).unwrap();
                    let minus: std::collections::BTreeSet<_> = pcs.minus_c_minus_1.lattice_points_i64().into_iter().collect();
                    let plus: std::collections::BTreeSet<_> = pcs.plus_c.lattice_points_i64().into_iter().collect();
                    assert!(minus.is_disjoint(&plus));
                    let overlap = p.lattice_points_i64().into_iter().filter(|m| m[axis] == c - 1).count();
                    assert_eq!(
                        pcs.minus_c_minus_1.num_lattice_points() + pcs.plus_c_minus_1.num_lattice_points(),
                        p.num_lattice_points() + overlap
                    );
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_c_mu(2, 0, 1, 1), vec![vec![1, 0]]);
        assert_eq!(delta_c_mu(2, 0, 0, 2), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(delta_c_mu(2, 0, 2, 2), vec![vec![2, 0], vec![2, 1], vec![3, 0]]);
        for c in 0..4 {
            let shifted: Vec<Vec<i64>> = delta_c_mu(3, 1, 0, 3).into_iter().map(|mut u| { u[1] += c; u }).collect();
            assert_eq!(delta_c_mu(3, 1, c, 3), shifted);
        }
    }

    #[test]
    fn hypothesis_examples() {
        let b = boxp(2, 1);
        let split = SplitSpec { axis: 0, level: 1, s: 1 };
        let ok = |t| ChildSummary { tvdim: t, toric_nonspecial: true };
        let t = check_hypotheses(&b, &split, &[1, 1], ok(0), ok(2));
        assert!(t.passed, "{t:?}");
        assert_eq!((t.tvdim_minus, t.tvdim_plus), (0, 2));

        let beyond = SplitSpec { axis: 0, level: 3, s: 1 };
        let t = check_hypotheses(&b, &beyond, &[1, 1], ok(0), ok(2));
        assert!(!t.passed && !t.plus_containment);
        assert!(t.witness.unwrap().contains("[3, 0]"));

        let t = check_hypotheses(&b, &split, &[1, 1], ok(-3), ok(1));
        assert!(!t.passed && !t.tvdim_product_nonnegative);
    }

    #[test]
    fn certify_examples() {
        let cfg = RankConfig::default();
        let leaf = certify(&PolytopeSystem::new(boxp(2, 1), &[]), 4, &cfg).unwrap();
        let CertifyOutcome::Certified { certificate: CertificateNode::Leaf { report, .. } } = leaf else { panic!("{leaf:?}") };
        assert_eq!((report.dim, report.tedim), (5, 5));

        let sys = PolytopeSystem::new(boxp(2, 1), &[1, 1]);
        let CertifyOutcome::Certified { certificate } = certify(&sys, 4, &cfg).unwrap() else { panic!() };
        let CertificateNode::Split { split, transcript, .. } = &certificate else { panic!("{certificate:?}") };
        assert_eq!(*split, SplitSpec { axis: 0, level: 1, s: 1 });
        assert_eq!((transcript.tvdim_minus, transcript.tvdim_plus), (0, 2));
        let direct = analyze_polytope(&sys, &cfg).unwrap();
        assert_eq!((direct.dim, direct.tedim), (3, 3));
        assert!(verify_certificate(&certificate, &cfg.with_seed(12345)));

        let f1 = PolytopeSystem::new(trapezoid(2), &[2]);
        let CertifyOutcome::Certified { certificate: CertificateNode::Leaf { report, .. } } = certify(&f1, 4, &cfg).unwrap() else { panic!() };
        assert_eq!((report.dim, report.tedim), (1, 1));
    }

    #[test]
    fn tampering_is_detected() {
        let cfg = RankConfig::default();
        let sys = PolytopeSystem::new(boxp(3, 2), &[2, 1, 1]);
        let CertifyOutcome::Certified { certificate } = certify(&sys, 4, &cfg).unwrap() else { panic!() };
        assert!(verify_certificate(&certificate, &cfg.with_seed(7)));
        let mut bad = certificate.clone();
        if let CertificateNode::Split { transcript, .. } = &mut bad {
            transcript.tvdim_plus += 1;
        }
        assert!(!verify_certificate(&bad, &cfg));
        let mut bad = certificate.clone();
        if let CertificateNode::Split { tvdim, .. } = &mut bad {
            *tvdim -= 1;
        }
        assert!(!verify_certificate(&bad, &cfg));
    }

    #[test]
    fn toric_special_leaf_is_rejected() {
        // L_2(2,2) on the plane: the double line, dim 0 against tedim -1
        let sys = PolytopeSystem::new(LatticePolytope::simplex(2, 2), &[2, 2]);
        let cfg = RankConfig::default();
        let report = analyze_polytope(&sys, &cfg).unwrap();
        assert!(report.toric_special);
        let forged = CertificateNode::Leaf { system: sys.clone(), report: SpecialityReport { dim: -1, rank: 6, ..report } };
        assert!(!verify_certificate(&forged, &cfg));
        assert!(matches!(certify(&sys, 3, &cfg).unwrap(), CertifyOutcome::Inconclusive { .. }));
    }

    #[test]
    fn certificates_round_trip_through_json() {
        let sys = PolytopeSystem::new(trapezoid(4), &[2, 1, 1]);
        let cfg = RankConfig::default();
        if let CertifyOutcome::Certified { certificate } = certify(&sys, 4, &cfg).unwrap() {
            let json = serde_json::to_string(&certificate).unwrap();
            let back: CertificateNode = serde_json::from_str(&json).unwrap();
            assert_eq!(back, certificate);
            assert!(verify_certificate(&back, &cfg.with_seed(3)));
        }
    }

    #[test]
    fn non_standard_root_rejected() {
        let sys = PolytopeSystem::new(catalog::hexagon(), &[1]);
        assert!(matches!(certify(&sys, 2, &RankConfig::default()), Err(Error::NotStandardForm(_))));
    }
}
