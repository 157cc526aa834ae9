//! Quasi-transitive toric varieties and multipoint linear systems on them.
//!
//! All verdicts are computed in exact integer or rational arithmetic; only the generic rank of
//! interpolation matrices is sampled, over random prime fields.

pub mod catalog;
pub mod cox_presentation;
pub mod degeneration;
pub mod error;
pub mod fan_analysis;
pub mod io;
pub mod lattice;
pub mod linsys;

pub use cox_presentation::{
    apply_root_step, build_presentation, irrelevant_generators, move_torus_point_to_invariant, section_polytope,
    tdivisor_polytope, to_standard_form, CoxAutomorphismStep, CoxPresentation, SectionPolytope, StandardFormDivisor,
    TDivisor,
};
pub use degeneration::{
    certify, check_hypotheses, delta_c_mu, split_polytope, verify_certificate, CertificateNode, CertifyOutcome,
    HypothesisTranscript, SplitSpec, StandardFormPolytope,
};
pub use error::{Error, Result};
pub use fan_analysis::{
    demazure_roots, detect_p1_power, fan_symmetries, is_transitive_cone, normalize_at, ray_index_partition,
    roots_outside_sigma_check, transitive_cones, vertex_capsule, CapsuleResult, DemazureRoot, Normalization,
    P1PowerDetection, RayIndexPartition, TransitivityVerdict,
};
pub use linsys::{
    analyze, analyze_polytope, generic_rank, toric_truncation, LinearSystem, PolytopeSystem, RankConfig, SpecialityReport,
    TrialEvidence,
};
pub use lattice::{
    gl_change_of_basis, point_location_check, validate_fan, Cone, Fan, IntMatrix, LatticePolytope, LatticeVector,
    ValidationReport,
};
