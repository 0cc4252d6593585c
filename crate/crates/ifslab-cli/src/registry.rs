//! Bundled example systems, compiled into the binary.
//!
//! Any subcommand's positional `CONFIG` argument first tries these names,
//! then falls back to the filesystem. The same JSON files ship in the
//! crate's `configs/` directory for diffing and copying.

/// One bundled example.
pub struct Example {
    /// Registry name (also the positional argument that selects it).
    pub name: &'static str,
    /// One-line description for `--examples`.
    pub about: &'static str,
    /// The raw JSON config.
    pub json: &'static str,
}

macro_rules! example {
    ($name:literal, $about:literal) => {
        Example {
            name: $name,
            about: $about,
            json: include_str!(concat!("../configs/", $name, ".json")),
        }
    };
}

/// Every bundled example, in presentation order: solvable families first,
/// then the refused misaligned system, then certificate/topology pairs,
/// then synthetic calibration controls.
pub static EXAMPLES: &[Example] = &[
    example!(
        "rotation_squash_pair",
        "quarter-turn squash (square is a third-scale homothety) with a 2/3 homothety"
    ),
    example!(
        "golden_swap",
        "coordinate swap-squash with an axial half-scale reflection; golden-ratio dimension"
    ),
    example!(
        "triple_branch",
        "quarter-turn squash with two third-scale homotheties; dimension log_3(4)"
    ),
    example!(
        "expand_contract_pair",
        "axis-expanding map whose square contracts, plus a half-scale point reflection"
    ),
    example!(
        "mirrored_wings",
        "quarter-turn squash with two mirrored half-scale wings"
    ),
    example!(
        "two_step_similarity_pair",
        "two non-similar maps whose length-2 compositions are all similarities"
    ),
    example!(
        "overlap_quartet",
        "four quarter-scale maps with two declared overlap copies"
    ),
    example!(
        "overlap_cross",
        "four fifth-scale maps with one declared overlap copy"
    ),
    example!(
        "hybrid_twin_affine",
        "two affine twins plus a third-scale homothety; mixed-family equation"
    ),
    example!(
        "hybrid_five_map",
        "three affine maps plus two quarter-scale homotheties; mixed-family equation"
    ),
    example!(
        "misaligned_rotations",
        "rotated satellites misaligned with the squash axes; dimension is refused (exit 3)"
    ),
    example!(
        "bottleneck_red",
        "c + r = 1 boundary pair, translation variant red; connected through single points"
    ),
    example!(
        "bottleneck_green",
        "c + r = 1 boundary pair, translation variant green"
    ),
    example!(
        "bottleneck_blue",
        "c + r = 1 boundary pair, translation variant blue"
    ),
    example!(
        "bottleneck_gold",
        "c + r = 1 boundary pair, translation variant gold"
    ),
    example!(
        "bottleneck_orange",
        "c + r = 1 boundary pair, translation variant orange"
    ),
    example!(
        "bottleneck_purple",
        "c + r = 1 boundary pair, translation variant purple"
    ),
    example!(
        "scalar_quarter_pair",
        "two quarter-scale homotheties; totally disconnected dust"
    ),
    example!(
        "cert_spiral_halves",
        "certificate pair: A^2 = -I/2 map with a half-scale homothety"
    ),
    example!(
        "cert_point_reflection",
        "certificate pair: A^2 = -0.8 I map with a fifth-scale point reflection"
    ),
    example!(
        "cert_mirror_quarters",
        "certificate pair: scaled reflection (A^2 = I/4) with a 3/4-scale homothety"
    ),
    example!(
        "cert_square_quarters",
        "certificate pair whose separating rectangle is the square [0, 1.75]^2"
    ),
    example!(
        "axial_overlap_a",
        "axial-reflection partner with overlapping images; certificate refused (exit 6)"
    ),
    example!(
        "axial_overlap_b",
        "axial-reflection partner, opposite square sign; certificate refused (exit 6)"
    ),
    example!(
        "axial_disconnect",
        "axial reflection with c + r > 1 yet a disconnected attractor; topology INAPPLICABLE"
    ),
    example!(
        "filled_square",
        "four half-scale homotheties tiling the unit square; dimension exactly 2"
    ),
    example!(
        "flat_segment",
        "two half-scale homotheties on a segment; dimension exactly 1"
    ),
    example!(
        "cantor_quarter_diagonal",
        "two quarter-scale homotheties on a diagonal; dimension exactly 1/2"
    ),
];

/// Looks up a bundled example by name.
pub fn find(name: &str) -> Option<&'static Example> {
    EXAMPLES.iter().find(|e| e.name == name)
}

/// The `--examples` listing.
pub fn listing() -> String {
    let width = EXAMPLES.iter().map(|e| e.name.len()).max().unwrap_or(0);
    let mut out = String::from("bundled example systems (pass a name in place of a config path):\n");
    for e in EXAMPLES {
        out.push_str(&format!("  {:width$}  {}\n", e.name, e.about));
    }
    out
}
