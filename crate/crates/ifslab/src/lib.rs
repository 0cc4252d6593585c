//! Exact and empirical analysis of affine iterated function systems.
//!
//! The library classifies finite systems of contracting affine maps into
//! structural families that admit an exact dimension equation
//! `Σ wᵢ·bᵢˢ = 1`, solves that equation with certified bracketing (and
//! recognizes closed polynomial forms), constructs separating-rectangle
//! certificates for planar two-map systems, classifies attractor
//! connectivity, and cross-validates everything empirically: chaos-game
//! sampling, box-count slopes, pixel connectivity, and homothetic-overlap
//! scoring.
//!
//! Entry points:
//! - [`classify::classify_system`] — structural family and parameters;
//! - [`dimension::build_equation`] / [`dimension::solve_dimension`] —
//!   the dimension value, with [`dimension::closed_form_check`] for
//!   polynomial closed forms;
//! - [`osc::certify_osc`] / [`osc::classify_topology`] — planar
//!   certificates and connectivity;
//! - [`attractor::chaos_game`] — reproducible sampling;
//! - [`metrology`] — box-counting, connectivity, overlap verification;
//! - [`export`] — CSV and PPM serialization.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod affine;
pub mod attractor;
pub mod classify;
pub mod dimension;
pub mod error;
pub mod export;
pub mod linalg;
pub mod metrology;
pub mod osc;
pub mod rng;
pub mod system;
pub mod tolerances;

pub use affine::{AffineMap, SimilarityTest};
pub use attractor::{
    bounding_box, chaos_game, chaos_game_weighted, cloud_diameter, contractivity_certificate,
    map_cloud, ContractivityCertificate, PointCloud,
};
pub use classify::{
    classify_system, decoupled_projection_bound, planar_classify, ASquareForm,
    AlignmentReport, ClassificationReport, ClassifyOptions, DecoupledProjection, Family,
    FamilyParams, GnOrder, PlanarClass, SForm, SimilaritySummary, UniformKOutcome,
    WordRatio,
};
pub use dimension::{
    build_equation, closed_form_check, natural_weights, solve_dimension, ClosedForm,
    DimensionEquation, DimensionResult, EquationTerm,
};
pub use error::{Error, Result};
pub use metrology::{
    box_count, hausdorff_distance, homothety_check, homothety_check_shared,
    homothety_check_system, max_nn_spacing, mean_nn_spacing, pixel_connectivity,
    BoxCountCurve, ConnectivityReport, HomothetyScore, KdTree2,
};
pub use osc::{
    certify_osc, classify_topology, invariant_interval_1d, verify_certificate, CaseTag,
    CertCheck, OscCertificate, TopologyClass, TopologyVerdict, VerificationReport,
};
pub use rng::SplitMix64;
pub use system::{IfsSystem, OverlapSpec};
