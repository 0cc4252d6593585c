//! Shared fixture systems for the integration suite.
//!
//! Every system here is built from exact map data; the `DIM_*` constants are
//! the corresponding analytic dimensions, frozen from an independent
//! high-precision bisection oracle (residuals at the printed digits are all
//! below 1e-14).

#![allow(dead_code)]

use ifslab::{AffineMap, IfsSystem, OverlapSpec};

/// (2/3)^s + (1/sqrt 3)^s = 1.
pub const DIM_ROTATION_SQUASH: f64 = 1.463547882699049;
/// 2 log2(phi): the golden-ratio dimension shared by three fixtures.
pub const DIM_GOLDEN: f64 = 1.388483827261235;
/// log3(4).
pub const DIM_TRIPLE_BRANCH: f64 = 1.261859507142915;
/// (1/3)^(s/2) + 2 (1/2)^s = 1.
pub const DIM_MIRRORED_WINGS: f64 = 1.713475120998813;
/// (1/6)^(s/2) + (2/3)^(s/2) = 1.
pub const DIM_TWO_STEP: f64 = 1.496443404955998;
/// ln(1 - sqrt2/2) / ln(1/2).
pub const DIM_OVERLAP_QUARTET: f64 = 1.771553303163612;
/// -2 ln(2 - sqrt3) / ln 5.
pub const DIM_OVERLAP_CROSS: f64 = 1.636543897407090;
/// 2 ln(1 + sqrt2) / ln 3.
pub const DIM_HYBRID_TWIN: f64 = 1.604521624435980;
/// Root of 2u^4 + 2u^3 + u - 1 mapped through s = 2 ln u / ln(1/2).
pub const DIM_HYBRID_FIVE: f64 = 1.811793148131048;
/// Value of the misapplied aligned-family formula on the misaligned
/// three-map system. The genuine attractor has dimension >= 1, so this
/// number must never be reported as a dimension; tests use it as a poison
/// marker.
pub const MISALIGNED_FORMULA_VALUE: f64 = 0.754238984358649;

/// Two-map planar builder from row-major matrix and translation.
pub fn map2(matrix: [f64; 4], translation: [f64; 2]) -> AffineMap {
    AffineMap::from_parts(&matrix, &translation).expect("fixture maps are valid")
}

/// Quarter-turn squash `(x,y) -> (-y/3, x)` plus a scalar 2/3 similarity.
/// Attractor stays inside the square [-3, 1]^2; dimension
/// `DIM_ROTATION_SQUASH`.
pub fn rotation_squash_pair() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, -1.0 / 3.0, 1.0, 0.0], [0.0, 0.0]),
        map2([2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0], [-1.0, 0.0]),
    ])
    .unwrap()
    .with_name("rotation_squash_pair")
}

/// Coordinate-swap map `(x,y) -> (y/2 + 1, x)` plus an axial half-scale
/// reflection; dimension `DIM_GOLDEN`.
pub fn golden_swap() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, 0.5, 1.0, 0.0], [1.0, 0.0]),
        map2([-0.5, 0.0, 0.0, 0.5], [0.0, 1.0]),
    ])
    .unwrap()
    .with_name("golden_swap")
}

/// Quarter-turn squash plus two third-scale homotheties; dimension
/// `DIM_TRIPLE_BRANCH` = log3(4).
pub fn triple_branch() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, -1.0 / 3.0, 1.0, 0.0], [0.0, 0.0]),
        map2([1.0 / 3.0, 0.0, 0.0, 1.0 / 3.0], [1.0, 0.0]),
        map2([1.0 / 3.0, 0.0, 0.0, 1.0 / 3.0], [-1.0, 0.0]),
    ])
    .unwrap()
    .with_name("triple_branch")
}

/// `(x,y) -> (y/4, 2x)` — expands one axis — plus a half-scale point
/// reflection. Same golden dimension as `golden_swap`; needs word length 4
/// to certify contraction.
pub fn expand_contract_pair() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, 0.25, 2.0, 0.0], [0.0, 0.0]),
        map2([-0.5, 0.0, 0.0, -0.5], [0.0, 1.0]),
    ])
    .unwrap()
    .with_name("expand_contract_pair")
}

/// `(x,y) -> (-y, x/3)` plus two mirrored half-scale wings; dimension
/// `DIM_MIRRORED_WINGS`.
pub fn mirrored_wings() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, -1.0, 1.0 / 3.0, 0.0], [0.0, 0.0]),
        map2([-0.5, 0.0, 0.0, 0.5], [10.0, -9.0]),
        map2([-0.5, 0.0, 0.0, 0.5], [-10.0, 9.0]),
    ])
    .unwrap()
    .with_name("mirrored_wings")
}

/// A strongly anisotropic map (`(x,y) -> (-y/50, 2x)`) with two
/// quarter-scale rotations whose 90-degree turns mix its principal axes.
/// No supported equation family applies: the aligned-family formula would
/// report `MISALIGNED_FORMULA_VALUE`, far below the true dimension
/// (the attractor contains a line segment's worth of structure).
pub fn misaligned_rotations() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, -1.0 / 50.0, 2.0, 0.0], [0.0, 0.0]),
        map2([0.0, -0.25, 0.25, 0.0], [1.0, 11.0]),
        map2([0.0, -0.25, 0.25, 0.0], [-1.0, -11.0]),
    ])
    .unwrap()
    .with_name("misaligned_rotations")
}

/// Two non-similarity maps every length-2 composition of which is similar;
/// dimension `DIM_TWO_STEP`.
pub fn two_step_similarity_pair() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, -1.0 / 6.0, 1.0, 0.0], [0.0, 0.0]),
        map2([0.0, 1.0 / 3.0, 2.0, 0.0], [1.0, 1.0]),
    ])
    .unwrap()
    .with_name("two_step_similarity_pair")
}

/// Four maps, uniformly similar at length 2, whose third and fourth images
/// intersect in two quarter-scale copies of the attractor; dimension
/// `DIM_OVERLAP_QUARTET`.
pub fn overlap_quartet() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, 0.25, -1.0, 0.0], [-1.0, 0.0]),
        map2([0.0, -0.25, 1.0, 0.0], [1.0, 0.0]),
        map2([0.0, -0.25, 1.0, 0.0], [0.0, 2.0]),
        map2([0.0, 0.25, -1.0, 0.0], [0.0, 2.0]),
    ])
    .unwrap()
    .with_overlaps(vec![
        OverlapSpec::new(vec![2, 3], 0.25).unwrap(),
        OverlapSpec::new(vec![2, 3], 0.25).unwrap(),
    ])
    .unwrap()
    .with_name("overlap_quartet")
}

/// The two homothetic copies making up `overlap_quartet`'s shared overlap
/// region: `(signed scale, center)`, derived by composing the overlapping
/// maps with the others (third map after first = fourth after second, and
/// third after second = fourth after first).
pub const OVERLAP_QUARTET_COPIES: [(f64, [f64; 2]); 2] =
    [(0.25, [0.0, 4.0 / 3.0]), (-0.25, [0.0, 12.0 / 5.0])];

/// Four maps, uniformly similar at length 2, with a single declared
/// fifth-scale overlap copy between the last two images; dimension
/// `DIM_OVERLAP_CROSS`.
pub fn overlap_cross() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, -1.0, 0.2, 0.0], [0.0, 1.0]),
        map2([0.0, -1.0, 0.2, 0.0], [0.0, -1.0]),
        map2([0.0, -1.0, 0.2, 0.0], [1.0, 0.0]),
        map2([0.0, -1.0, 0.2, 0.0], [-1.0, 0.0]),
    ])
    .unwrap()
    .with_overlaps(vec![OverlapSpec::new(vec![2, 3], 0.2).unwrap()])
    .unwrap()
    .with_name("overlap_cross")
}

/// The overlap copy of `overlap_cross`: point-reflected fifth-scale copy
/// about the origin (third map after first = fourth map after second).
pub const OVERLAP_CROSS_COPY: (f64, [f64; 2]) = (-0.2, [0.0, 0.0]);

/// Two affine twins (every mixed/diagonal pair composition is a third-scale
/// similarity) plus one third-scale homothety; dimension `DIM_HYBRID_TWIN`.
pub fn hybrid_twin_affine() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, -1.0 / 3.0, 1.0, 0.0], [-1.0, 0.0]),
        map2([0.0, -1.0 / 3.0, 1.0, 0.0], [1.0, 0.0]),
        map2([1.0 / 3.0, 0.0, 0.0, 1.0 / 3.0], [0.0, 0.0]),
    ])
    .unwrap()
    .with_name("hybrid_twin_affine")
}

/// Three affine maps with uniform second-iterate similarity plus two
/// quarter-scale homotheties; dimension `DIM_HYBRID_FIVE`.
pub fn hybrid_five_map() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, -1.0, 0.5, 0.0], [0.0, 0.0]),
        map2([0.0, 0.5, 0.25, 0.0], [0.0, 1.0]),
        map2([0.0, -0.5, -0.25, 0.0], [0.0, -1.0]),
        map2([0.25, 0.0, 0.0, 0.25], [1.0, 1.0]),
        map2([0.25, 0.0, 0.0, 0.25], [-1.0, -1.0]),
    ])
    .unwrap()
    .with_name("hybrid_five_map")
}

/// The swap-squash map `A = [[0, 0.5], [1, 0]]` with a half-scale homothety:
/// contraction ratios satisfy c + r = 1 exactly, so the attractor stays
/// connected and satisfies the separation property for every translation
/// choice. Dimension `DIM_GOLDEN`.
pub fn bottleneck_pair(b_f: [f64; 2], b_g: [f64; 2]) -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, 0.5, 1.0, 0.0], b_f),
        map2([0.5, 0.0, 0.0, 0.5], b_g),
    ])
    .unwrap()
    .with_name("bottleneck_pair")
}

/// The six published translation choices for `bottleneck_pair`, keyed by
/// the figure's color names.
pub const BOTTLENECK_TRANSLATIONS: [(&str, [f64; 2], [f64; 2]); 6] = [
    ("red", [0.0, 0.0], [0.0, 0.5]),
    ("green", [0.0, 0.5], [1.0, 0.5]),
    ("blue", [-0.5, 0.0], [0.0, 0.5]),
    ("gold", [0.2, -0.2], [-0.8, -3.2]),
    ("orange", [0.0, 0.0], [3.0, 1.0]),
    ("purple", [0.0, 0.5], [0.1, 1.0]),
];

/// Scalar control with c = r = 0.25: both maps are quarter-scale
/// homotheties with distinct fixed points, so c + r = 0.5 < 1 and the
/// attractor is totally disconnected dust.
pub fn scalar_quarter_pair() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.25, 0.0, 0.0, 0.25], [0.0, 0.0]),
        map2([0.25, 0.0, 0.0, 0.25], [0.75, 0.0]),
    ])
    .unwrap()
    .with_name("scalar_quarter_pair")
}

/// Rotation-like map with `A^2 = -0.5 I` plus a half-scale homothety;
/// certificate rectangle vertices are known exactly.
pub fn cert_spiral_halves() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.4, -0.6, 1.1, -0.4], [0.0, 0.0]),
        map2([0.5, 0.0, 0.0, 0.5], [1.0, 0.5]),
    ])
    .unwrap()
    .with_name("cert_spiral_halves")
}

/// Rotation-like map with `A^2 = -0.5 I` plus a fifth-scale point
/// reflection.
pub fn cert_point_reflection() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.2, -0.7, 1.2, -0.2], [0.0, 0.0]),
        map2([-0.2, 0.0, 0.0, -0.2], [1.0, 0.0]),
    ])
    .unwrap()
    .with_name("cert_point_reflection")
}

/// Symmetric map with `A^2 = +0.25 I` (itself a scaled axial reflection)
/// plus a three-quarter-scale homothety.
pub fn cert_mirror_quarters() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.3, 0.4, 0.4, -0.3], [0.0, 0.0]),
        map2([0.75, 0.0, 0.0, 0.75], [1.0, 2.0]),
    ])
    .unwrap()
    .with_name("cert_mirror_quarters")
}

/// Antidiagonal map with `A^2 = +0.25 I` plus a three-quarter-scale point
/// reflection; the certificate rectangle is the square [0, 1.75]^2.
pub fn cert_square_quarters() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, 1.0, 0.25, 0.0], [0.0, 0.0]),
        map2([-0.75, 0.0, 0.0, -0.75], [1.75, 1.75]),
    ])
    .unwrap()
    .with_name("cert_square_quarters")
}

/// `A^2 = -0.2 I` with an axially reflecting similarity: all scalar
/// hypotheses hold (c + r = 1) yet the images overlap, so no separation
/// certificate exists.
pub fn axial_overlap_a() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, -0.2, 1.0, 0.0], [0.0, 0.0]),
        map2([0.8, 0.0, 0.0, -0.8], [1.0, 0.87]),
    ])
    .unwrap()
    .with_name("axial_overlap_a")
}

/// `A^2 = +0.2 I` with an axially reflecting similarity: same failure as
/// `axial_overlap_a` in the other structural case.
pub fn axial_overlap_b() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, 0.2, 1.0, 0.0], [0.0, 0.0]),
        map2([0.8, 0.0, 0.0, -0.8], [1.0, 0.92]),
    ])
    .unwrap()
    .with_name("axial_overlap_b")
}

/// `A^2 = (2/3) I` with a half-scale axial reflection: c + r = 7/6 > 1
/// would force connectivity for scalar similarities, yet the reflection
/// leaves the attractor totally disconnected — the trichotomy does not
/// apply.
pub fn axial_disconnect() -> IfsSystem {
    IfsSystem::new(vec![
        map2([0.0, 2.0 / 3.0, 1.0, 0.0], [0.0, 0.0]),
        map2([0.5, 0.0, 0.0, -0.5], [1.0, 2.0]),
    ])
    .unwrap()
    .with_name("axial_disconnect")
}

/// Certificate-rectangle golden vertices for the four certificate
/// fixtures, in construction order.
pub const CERT_SPIRAL_VERTICES: [[f64; 2]; 4] =
    [[1.9, 0.1], [-1.1, -1.4], [-0.8, 1.3], [2.2, 2.8]];
pub const CERT_POINT_REFLECTION_VERTICES: [[f64; 2]; 4] = [
    [28.0 / 23.0, -2.0 / 23.0],
    [-12.0 / 23.0, -32.0 / 23.0],
    [-25.0 / 23.0, 10.0 / 23.0],
    [15.0 / 23.0, 40.0 / 23.0],
];
pub const CERT_MIRROR_VERTICES: [[f64; 2]; 4] = [
    [4.0, 8.0],
    [68.0 / 15.0, -56.0 / 15.0],
    [0.0, 0.0],
    [-8.0 / 15.0, 176.0 / 15.0],
];
pub const CERT_SQUARE_VERTICES: [[f64; 2]; 4] =
    [[1.75, 1.75], [1.75, 0.0], [0.0, 0.0], [0.0, 1.75]];
