//! End-to-end dimension pipeline: classify -> build equation -> solve,
//! checked against independently frozen analytic values.

mod common;

use common::*;
use ifslab::classify::{classify_system, decoupled_projection_bound, ClassifyOptions, Family};
use ifslab::dimension::{
    build_equation, closed_form_check, solve_dimension, DimensionEquation, DimensionResult,
};
use ifslab::error::Error;
use ifslab::{ClassificationReport, FamilyParams, IfsSystem, OverlapSpec};

const DIM_TOL: f64 = 1e-12;

fn pipeline(system: &IfsSystem) -> (ClassificationReport, DimensionEquation, DimensionResult) {
    let report = classify_system(system, &ClassifyOptions::default());
    let equation = build_equation(&report)
        .unwrap_or_else(|e| panic!("{} should build an equation: {e}", system.name()));
    let result = solve_dimension(&equation, system.dimension())
        .unwrap_or_else(|e| panic!("{} should solve: {e}", system.name()));
    (report, equation, result)
}

fn assert_dimension(system: &IfsSystem, family: Family, expected: f64) -> DimensionEquation {
    let (report, equation, result) = pipeline(system);
    assert_eq!(report.family, family, "{} family", system.name());
    assert!(
        (result.s - expected).abs() <= DIM_TOL,
        "{}: s = {:.15} expected {:.15}",
        system.name(),
        result.s,
        expected
    );
    assert!(
        result.residual <= 1e-12,
        "{}: residual {:.3e}",
        system.name(),
        result.residual
    );
    equation
}

#[test]
fn rotation_squash_pair_dimension_matches_frozen_value() {
    let eq = assert_dimension(
        &rotation_squash_pair(),
        Family::AlignedGn,
        DIM_ROTATION_SQUASH,
    );
    assert!(
        closed_form_check(&eq).is_none(),
        "bases 2/3 and 3^(-1/2) are incommensurable"
    );
}

#[test]
fn golden_swap_dimension_is_twice_log2_phi() {
    let eq = assert_dimension(&golden_swap(), Family::AlignedGn, DIM_GOLDEN);
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    assert!((DIM_GOLDEN - 2.0 * phi.log2()).abs() <= 1e-15, "frozen constant sanity");

    let form = closed_form_check(&eq).expect("golden closed form");
    assert_eq!(form.coefficients, vec![(0, -1.0), (1, 1.0), (2, 1.0)]);
    assert!(
        (form.root_u - (5.0f64.sqrt() - 1.0) / 2.0).abs() <= 1e-12,
        "root is 1/phi, got {:.15}",
        form.root_u
    );
    assert!((form.dimension - DIM_GOLDEN).abs() <= DIM_TOL);
}

#[test]
fn triple_branch_dimension_is_log3_of_4() {
    let eq = assert_dimension(&triple_branch(), Family::AlignedGn, DIM_TRIPLE_BRANCH);
    assert!(
        (DIM_TRIPLE_BRANCH - 4.0f64.ln() / 3.0f64.ln()).abs() <= 1e-15,
        "frozen constant sanity"
    );
    let form = closed_form_check(&eq).expect("quadratic closed form");
    assert_eq!(form.coefficients, vec![(0, -1.0), (1, 1.0), (2, 2.0)]);
    assert!((form.root_u - 0.5).abs() <= 1e-12);
    assert!((form.dimension - DIM_TRIPLE_BRANCH).abs() <= DIM_TOL);
}

#[test]
fn expand_contract_pair_shares_the_golden_dimension() {
    // Different maps, same (c, r) = (1/2, 1/2) structure.
    assert_dimension(&expand_contract_pair(), Family::AlignedGn, DIM_GOLDEN);
}

#[test]
fn mirrored_wings_dimension_matches_frozen_value() {
    let eq = assert_dimension(&mirrored_wings(), Family::AlignedGn, DIM_MIRRORED_WINGS);
    assert!(
        closed_form_check(&eq).is_none(),
        "bases 3^(-1/2) and 1/2 are incommensurable"
    );
}

#[test]
fn bottleneck_pair_dimension_is_golden_for_every_translation() {
    for (name, b_f, b_g) in BOTTLENECK_TRANSLATIONS {
        let (_, _, result) = pipeline(&bottleneck_pair(b_f, b_g));
        assert!(
            (result.s - DIM_GOLDEN).abs() <= DIM_TOL,
            "{name}: translations must not affect the dimension, got {:.15}",
            result.s
        );
    }
}

#[test]
fn two_step_similarity_pair_uses_the_length_two_family() {
    let eq = assert_dimension(
        &two_step_similarity_pair(),
        Family::KIterate,
        DIM_TWO_STEP,
    );
    assert!(
        closed_form_check(&eq).is_none(),
        "bases 6^(-1/2) and (2/3)^(1/2) are incommensurable"
    );
}

#[test]
fn overlap_quartet_subtracts_its_two_declared_copies() {
    let eq = assert_dimension(
        &overlap_quartet(),
        Family::OverlapDeclared,
        DIM_OVERLAP_QUARTET,
    );
    assert!(
        (DIM_OVERLAP_QUARTET - (1.0 - 2.0f64.sqrt() / 2.0).ln() / 0.5f64.ln()).abs() <= 1e-15,
        "frozen constant sanity"
    );
    let form = closed_form_check(&eq).expect("quadratic closed form");
    assert_eq!(form.coefficients, vec![(0, -1.0), (1, 4.0), (2, -2.0)]);
    assert!((form.root_u - (1.0 - 2.0f64.sqrt() / 2.0)).abs() <= 1e-12);
    assert!((form.dimension - DIM_OVERLAP_QUARTET).abs() <= DIM_TOL);
}

#[test]
fn overlap_cross_subtracts_its_single_declared_copy() {
    let eq = assert_dimension(&overlap_cross(), Family::OverlapDeclared, DIM_OVERLAP_CROSS);
    assert!(
        (DIM_OVERLAP_CROSS - (-2.0 * (2.0 - 3.0f64.sqrt()).ln() / 5.0f64.ln())).abs() <= 1e-15,
        "frozen constant sanity"
    );
    let form = closed_form_check(&eq).expect("quadratic closed form");
    assert_eq!(form.coefficients, vec![(0, -1.0), (1, 4.0), (2, -1.0)]);
    assert!((form.root_u - (2.0 - 3.0f64.sqrt())).abs() <= 1e-12);
    assert!((form.dimension - DIM_OVERLAP_CROSS).abs() <= DIM_TOL);
}

#[test]
fn ignoring_declared_overlaps_would_inflate_the_dimension() {
    // The same four quartet maps without the overlap declaration solve the
    // uncorrected length-2 equation 4 (1/4)^(s/2) = 1, i.e. s = 2 exactly:
    // the overlap correction is what keeps the dimension meaningful.
    let plain = IfsSystem::new(overlap_quartet().maps().to_vec()).unwrap();
    let (report, _, result) = pipeline(&plain);
    assert_eq!(report.family, Family::KIterate);
    assert!((result.s - 2.0).abs() <= DIM_TOL, "s = {:.15}", result.s);
    assert!(result.s > DIM_OVERLAP_QUARTET + 0.2);
}

#[test]
fn hybrid_twin_affine_dimension_matches_frozen_value() {
    let eq = assert_dimension(&hybrid_twin_affine(), Family::Hybrid, DIM_HYBRID_TWIN);
    assert!(
        (DIM_HYBRID_TWIN - 2.0 * (1.0 + 2.0f64.sqrt()).ln() / 3.0f64.ln()).abs() <= 1e-15,
        "frozen constant sanity"
    );
    let form = closed_form_check(&eq).expect("quadratic closed form");
    assert_eq!(form.coefficients, vec![(0, -1.0), (1, 2.0), (2, 1.0)]);
    assert!((form.root_u - (2.0f64.sqrt() - 1.0)).abs() <= 1e-12);
    assert!((form.dimension - DIM_HYBRID_TWIN).abs() <= DIM_TOL);
}

#[test]
fn hybrid_five_map_dimension_matches_frozen_value() {
    let eq = assert_dimension(&hybrid_five_map(), Family::Hybrid, DIM_HYBRID_FIVE);
    let form = closed_form_check(&eq).expect("quartic closed form");
    assert_eq!(
        form.coefficients,
        vec![(0, -1.0), (1, 1.0), (3, 2.0), (4, 2.0)]
    );
    assert!(
        (form.root_u - 0.533700928345169).abs() <= 1e-12,
        "root_u = {:.15}",
        form.root_u
    );
    assert!((form.dimension - DIM_HYBRID_FIVE).abs() <= DIM_TOL);
}

#[test]
fn misaligned_rotations_are_refused_with_an_alignment_note() {
    let report = classify_system(&misaligned_rotations(), &ClassifyOptions::default());
    assert_eq!(report.family, Family::Unclassified);
    assert!(!report.guard_notes.is_empty(), "guard notes must explain");
    assert!(
        report
            .guard_notes
            .iter()
            .any(|n| n.contains("not aligned")),
        "notes: {:?}",
        report.guard_notes
    );
    let err = build_equation(&report).expect_err("no equation for unclassified systems");
    assert!(matches!(err, Error::Unclassified { .. }), "got {err:?}");
}

#[test]
fn misaligned_formula_value_is_far_from_every_supported_dimension() {
    // The number the aligned-family formula would produce for the
    // misaligned system must never coincide with anything the pipeline can
    // legitimately emit for the supported fixtures.
    for expected in [
        DIM_ROTATION_SQUASH,
        DIM_GOLDEN,
        DIM_TRIPLE_BRANCH,
        DIM_MIRRORED_WINGS,
        DIM_TWO_STEP,
        DIM_OVERLAP_QUARTET,
        DIM_OVERLAP_CROSS,
        DIM_HYBRID_TWIN,
        DIM_HYBRID_FIVE,
    ] {
        assert!(
            (expected - MISALIGNED_FORMULA_VALUE).abs() > 0.5,
            "dimension {expected} is suspiciously close to the misapplied-formula value"
        );
    }
}

#[test]
fn misaligned_system_still_certifies_a_line_segment_in_projection() {
    // The refusal is not the end of the analysis: a decoupled composite
    // pair pins an invariant interval on the vertical axis, proving the
    // attractor's dimension is at least 1 (far above the misapplied
    // formula's 0.754...).
    let proj = decoupled_projection_bound(&misaligned_rotations(), 3)
        .expect("search succeeds")
        .expect("a decoupled pair exists");
    assert_eq!(proj.axis, 1, "decouples on the vertical axis");
    assert_eq!(proj.words, vec![vec![0, 1], vec![0, 2]]);
    assert!(
        (proj.interval.0 + 4.0).abs() <= 1e-9 && (proj.interval.1 - 4.0).abs() <= 1e-9,
        "invariant interval should be [-4, 4], got {:?}",
        proj.interval
    );
    assert!((proj.slopes[0] + 0.5).abs() <= 1e-12);
    assert!((proj.slopes[1] + 0.5).abs() <= 1e-12);
}

#[test]
fn equation_is_invariant_under_doubling_the_iterate_order() {
    // c^(s/n) with (n, c) describes the same map as (2n, c^2): the solver
    // must agree to well below the acceptance tolerance.
    let base_report = |params| ClassificationReport {
        family: Family::AlignedGn,
        params: Some(params),
        similarity: Vec::new(),
        gn_orders: Vec::new(),
        alignment: None,
        k_uniform: None,
        planar: None,
        planar_swapped: false,
        guard_notes: Vec::new(),
    };
    let minimal = base_report(FamilyParams::AlignedGn {
        n: 2,
        c: 0.5,
        similarity_ratios: vec![0.5],
    });
    let doubled = base_report(FamilyParams::AlignedGn {
        n: 4,
        c: 0.25,
        similarity_ratios: vec![0.5],
    });
    let s_min = solve_dimension(&build_equation(&minimal).unwrap(), 2)
        .unwrap()
        .s;
    let s_dbl = solve_dimension(&build_equation(&doubled).unwrap(), 2)
        .unwrap()
        .s;
    assert!(
        (s_min - s_dbl).abs() <= 1e-10,
        "n vs 2n drifted: {s_min:.15} vs {s_dbl:.15}"
    );
    assert!((s_min - DIM_GOLDEN).abs() <= DIM_TOL);
}

#[test]
fn all_similarity_systems_reduce_to_the_plain_moran_equation() {
    // Three homotheties with ratios 1/2, 1/4, 1/4: the family equation is
    // exactly r1^s + r2^s + r3^s = 1 with solution s = 1.
    let system = IfsSystem::new(vec![
        map2([0.5, 0.0, 0.0, 0.5], [0.0, 0.0]),
        map2([0.25, 0.0, 0.0, 0.25], [1.0, 0.0]),
        map2([0.25, 0.0, 0.0, 0.25], [0.0, 1.0]),
    ])
    .unwrap();
    let (report, equation, result) = pipeline(&system);
    assert_eq!(report.family, Family::AlignedGn);
    assert!((result.s - 1.0).abs() <= DIM_TOL, "s = {:.15}", result.s);

    // The same numbers pushed through the uniform-composition family must
    // give the same root.
    let moran = ClassificationReport {
        family: Family::KIterate,
        params: Some(FamilyParams::KIterate {
            k: 1,
            iterate_ratios: vec![0.5, 0.25, 0.25],
        }),
        similarity: Vec::new(),
        gn_orders: Vec::new(),
        alignment: None,
        k_uniform: None,
        planar: None,
        planar_swapped: false,
        guard_notes: Vec::new(),
    };
    let s_moran = solve_dimension(&build_equation(&moran).unwrap(), 2).unwrap().s;
    assert!((result.s - s_moran).abs() <= 1e-12);
    assert_eq!(equation.terms.len(), 3);

    // A triple of half-scale maps gives the classic log2(3).
    let thirds = IfsSystem::new(vec![
        map2([0.5, 0.0, 0.0, 0.5], [0.0, 0.0]),
        map2([0.5, 0.0, 0.0, 0.5], [1.0, 0.0]),
        map2([0.5, 0.0, 0.0, 0.5], [0.0, 1.0]),
    ])
    .unwrap();
    let (_, _, tri) = pipeline(&thirds);
    assert!((tri.s - 3.0f64.ln() / 2.0f64.ln()).abs() <= DIM_TOL);
}

#[test]
fn single_image_overlap_declarations_contribute_nothing() {
    // multiplicity 1 means no double counting: the corrected equation must
    // coincide with the uncorrected one.
    let maps = overlap_cross().maps().to_vec();
    let with_noop = IfsSystem::new(maps.clone())
        .unwrap()
        .with_overlaps(vec![OverlapSpec::new(vec![2], 0.2).unwrap()])
        .unwrap();
    let plain = IfsSystem::new(maps).unwrap();

    let (noop_report, noop_eq, noop_res) = pipeline(&with_noop);
    let (plain_report, plain_eq, plain_res) = pipeline(&plain);
    assert_eq!(noop_report.family, Family::OverlapDeclared);
    assert_eq!(plain_report.family, Family::KIterate);
    assert_eq!(noop_eq.terms.len(), plain_eq.terms.len());
    assert!(
        (noop_res.s - plain_res.s).abs() <= 1e-12,
        "q = 1 must be a no-op: {:.15} vs {:.15}",
        noop_res.s,
        plain_res.s
    );
}

#[test]
fn certificate_fixtures_with_scalar_similarities_also_solve() {
    // The separating-rectangle fixtures are ordinary aligned systems for
    // the dimension pipeline; the spiral-halves pair shares the golden
    // parameters (c, r) = (1/2, 1/2).
    let (_, _, result) = pipeline(&cert_spiral_halves());
    assert!((result.s - DIM_GOLDEN).abs() <= DIM_TOL);

    // Residual check on a pair with c + r = 1 but c != r.
    let (report, equation, result) = pipeline(&cert_point_reflection());
    assert_eq!(report.family, Family::AlignedGn);
    let lhs = 0.8f64.powf(result.s / 2.0) + 0.2f64.powf(result.s);
    assert!((lhs - 1.0).abs() <= 1e-12, "defining equation holds");
    assert!(equation.terms.len() == 2);
}
