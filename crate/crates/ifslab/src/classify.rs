//! Structural classification of affine systems.
//!
//! The dimension equations in this crate apply only to systems with special
//! algebraic structure. This module detects that structure:
//!
//! * **iterate order** — the smallest `n` for which a map's `n`-th
//!   self-composition is a similarity contraction;
//! * **alignment** — whether a similarity's scaling part commutes with an
//!   affine map's distortion (its Gram matrix `AᵀA`), which is what lets the
//!   two kinds of map share one dimension equation;
//! * **uniform composition order** — whether *every* length-`k` composition
//!   from the system is a similarity contraction;
//! * **planar two-map forms** — in the plane, whether `A² = ±cI` and whether
//!   the second map scales by `±rI` or by a scaled axial reflection;
//! * **decoupled projections** — composite subsystems whose coordinates
//!   separate, giving per-axis interval equations that lower-bound the
//!   attractor's extent.
//!
//! `classify_system` combines these probes into a family verdict. A system
//! that matches no family is reported as `UNCLASSIFIED` together with
//! guard notes explaining exactly which hypothesis failed; downstream
//! equation building refuses such systems rather than producing a number
//! whose hypotheses do not hold.

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::system::{for_each_word, IfsSystem};
use crate::tolerances;
use serde::Serialize;

/// Iterate-order diagnosis of a single map.
#[derive(Debug, Clone, Serialize)]
pub struct GnOrder {
    /// Index of the map within its system (0 for standalone queries).
    pub map_index: usize,
    /// Smallest `n ≤ n_max` with `fⁿ` a similarity contraction, if any.
    pub order: Option<usize>,
    /// Similarity ratio of `fⁿ` when `order` is present.
    pub ratio: Option<f64>,
    /// True when no smaller iterate is already a similarity (for the
    /// minimal order this always holds; the flag documents the invariant
    /// and guards tolerance edge cases).
    pub strict: bool,
    /// The search bound that was used.
    pub n_max: usize,
}

/// One similarity-vs-affine alignment check.
#[derive(Debug, Clone, Serialize)]
pub struct AlignmentEntry {
    /// Index of the similarity map.
    pub similarity_index: usize,
    /// Index of the affine map whose distortion it was tested against.
    pub affine_index: usize,
    /// Whether the scaling part commutes with the affine Gram matrix.
    pub aligned: bool,
    /// Relative Frobenius norm of the commutator.
    pub commutator_residual: f64,
}

/// All alignment checks performed during classification.
#[derive(Debug, Clone, Serialize)]
pub struct AlignmentReport {
    /// Individual checks, one per (similarity, affine) pair examined.
    pub entries: Vec<AlignmentEntry>,
    /// Conjunction of all entries.
    pub all_aligned: bool,
}

/// A composition word together with its similarity ratio.
#[derive(Debug, Clone, Serialize)]
pub struct WordRatio {
    /// Map indices, outermost first.
    pub word: Vec<usize>,
    /// Similarity ratio of the composite.
    pub ratio: f64,
}

/// Outcome of testing whether every length-`k` composition is a similarity
/// contraction.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome")]
pub enum UniformKOutcome {
    /// Every composition passed; ratios are listed in lexicographic word
    /// order.
    #[serde(rename = "ALL_SIMILAR")]
    AllSimilar {
        /// Ratio of each length-`k` word.
        ratios: Vec<WordRatio>,
    },
    /// At least one composition failed; the lexicographically first failure
    /// is reported.
    #[serde(rename = "FAILURE")]
    Failure {
        /// First failing word.
        word: Vec<usize>,
        /// Similarity residual of that composite.
        residual: f64,
        /// Candidate ratio of that composite.
        ratio: f64,
        /// True when the composite is a similarity but fails to contract.
        expansion: bool,
    },
}

/// Form of `A²` for a planar map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ASquareForm {
    /// `A² = +cI` with `c = |det A|`.
    #[serde(rename = "PLUS_cI")]
    PlusCI,
    /// `A² = −cI` with `c = |det A|`.
    #[serde(rename = "MINUS_cI")]
    MinusCI,
    /// Neither scalar form within tolerance.
    #[serde(rename = "NEITHER")]
    Neither,
}

/// Form of the scaling part of a planar similarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SForm {
    /// `S = +rI`.
    #[serde(rename = "PLUS_rI")]
    PlusRI,
    /// `S = −rI`.
    #[serde(rename = "MINUS_rI")]
    MinusRI,
    /// `S = r·H` for a reflection `H` across an axis.
    #[serde(rename = "AXIAL_REFLECTION")]
    AxialReflection,
    /// A similarity that is neither scalar nor an axial reflection
    /// (a proper rotation component).
    #[serde(rename = "OTHER")]
    Other,
}

/// Planar structure of an ordered pair (affine map `f`, similarity `g`).
#[derive(Debug, Clone, Serialize)]
pub struct PlanarClass {
    /// Form of `A²` where `A` is the linear part of `f`.
    pub a_square_form: ASquareForm,
    /// `c = |det A|`, the ratio of `f²` when the form is definite.
    pub c: f64,
    /// Sign of `det A` (`+1` or `-1`).
    pub det_sign: i8,
    /// When `f` is itself a similarity, its ratio.
    pub f_similarity_ratio: Option<f64>,
    /// True when the linear part of `f` is literally `±aI`.
    pub f_scalar: bool,
    /// Form of the scaling part of `g`.
    pub s_form: SForm,
    /// Similarity ratio of `g`.
    pub r: f64,
    /// Fixed point of `f`.
    pub z_f: [f64; 2],
    /// Fixed point of `g`.
    pub z_g: [f64; 2],
    /// Whether the two fixed points are distinct.
    pub fixed_points_distinct: bool,
    /// True when `v = z_g − z_f` and `Av` are (nearly) parallel, which
    /// degenerates the planar constructions built on this pair.
    pub collinear_degenerate: bool,
}

/// Relative parallelism threshold for the collinearity degeneracy test.
pub const COLLINEAR_TOL: f64 = 1e-10;

/// A decoupled composite subsystem and the axis interval it pins down.
#[derive(Debug, Clone, Serialize)]
pub struct DecoupledProjection {
    /// Coordinate axis on which the pair decouples.
    pub axis: usize,
    /// Invariant interval of the induced one-dimensional pair.
    pub interval: (f64, f64),
    /// The two composition words (outermost map first).
    pub words: Vec<Vec<usize>>,
    /// Slopes of the induced one-dimensional maps on the axis.
    pub slopes: Vec<f64>,
}

/// Equation family assigned to a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// One map with a similar `n`-th iterate plus aligned similarities.
    #[serde(rename = "ALIGNED_GN")]
    AlignedGn,
    /// Several affine maps with a uniform iterate order plus universally
    /// aligned similarities.
    #[serde(rename = "HYBRID")]
    Hybrid,
    /// Every length-`k` composition from the system is a similarity.
    #[serde(rename = "K_ITERATE")]
    KIterate,
    /// Uniformly similar at order `k` with declared homothetic overlaps.
    #[serde(rename = "OVERLAP_DECLARED")]
    OverlapDeclared,
    /// Planar two-map structure with definite forms but no equation family.
    #[serde(rename = "PLANAR_TWO_MAP")]
    PlanarTwoMap,
    /// No recognized structure; see the guard notes.
    #[serde(rename = "UNCLASSIFIED")]
    Unclassified,
}

/// Parameters extracted for the assigned family, in the exact shape the
/// equation builder consumes.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "family")]
pub enum FamilyParams {
    /// `c^{s/n} + Σ rᵢ^s = 1`.
    #[serde(rename = "ALIGNED_GN")]
    AlignedGn {
        /// Iterate order of the distinguished map.
        n: usize,
        /// Ratio of its `n`-th iterate.
        c: f64,
        /// Ratios of the remaining similarity maps.
        similarity_ratios: Vec<f64>,
    },
    /// `Σ cᵢ^{s/n} + Σ rⱼ^s = 1`.
    #[serde(rename = "HYBRID")]
    Hybrid {
        /// Uniform iterate order of the affine subfamily.
        n: usize,
        /// Ratios of each affine map's own `n`-th iterate.
        iterate_ratios: Vec<f64>,
        /// Ratios of the similarity maps.
        similarity_ratios: Vec<f64>,
    },
    /// `Σ cᵢ^{s/k} = 1`.
    #[serde(rename = "K_ITERATE")]
    KIterate {
        /// Uniform composition order.
        k: usize,
        /// Ratios of each map's own `k`-th iterate.
        iterate_ratios: Vec<f64>,
    },
    /// `Σ cᵢ^{s/k} − Σ (qⱼ−1)·pⱼ^s = 1`.
    #[serde(rename = "OVERLAP_DECLARED")]
    OverlapDeclared {
        /// Uniform composition order.
        k: usize,
        /// Ratios of each map's own `k`-th iterate.
        iterate_ratios: Vec<f64>,
        /// `(multiplicity, scale)` per declared overlap copy.
        overlaps: Vec<(usize, f64)>,
    },
}

/// Per-map similarity summary for reports.
#[derive(Debug, Clone, Serialize)]
pub struct SimilaritySummary {
    /// Map index.
    pub map_index: usize,
    /// Whether the map is a similarity.
    pub is_similarity: bool,
    /// Candidate ratio `|det A|^{1/m}`.
    pub ratio: f64,
    /// Frobenius deviation of `AᵀA` from `ratio²·I`.
    pub residual: f64,
}

/// Full structural diagnosis of a system.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    /// Assigned equation family.
    pub family: Family,
    /// Parameters for the equation builder when a family matched.
    pub params: Option<FamilyParams>,
    /// Per-map similarity summaries.
    pub similarity: Vec<SimilaritySummary>,
    /// Per-map iterate orders.
    pub gn_orders: Vec<GnOrder>,
    /// Alignment checks performed (present when similarities were tested
    /// against affine maps).
    pub alignment: Option<AlignmentReport>,
    /// Uniform composition order found, with all word ratios.
    pub k_uniform: Option<(usize, Vec<WordRatio>)>,
    /// Planar pair structure for two-map planar systems.
    pub planar: Option<PlanarClass>,
    /// True when the planar structure used the maps in swapped order
    /// (second map as the affine part).
    pub planar_swapped: bool,
    /// Human-readable explanations of every hypothesis that failed.
    pub guard_notes: Vec<String>,
}

/// Search bounds and tolerance for `classify_system`.
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Largest iterate order searched per map.
    pub n_max: usize,
    /// Largest uniform composition order searched.
    pub k_max: usize,
    /// Structural tolerance for all similarity/alignment/form tests.
    pub tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            n_max: 8,
            k_max: 8,
            tol: tolerances::STRUCTURAL,
        }
    }
}

/// Finds the smallest `n ≤ n_max` for which `fⁿ` is a similarity
/// contraction.
pub fn gn_order(f: &AffineMap, n_max: usize, tol: f64) -> GnOrder {
    let mut found: Option<(usize, f64)> = None;
    let mut earlier_similarity = false;
    let mut iterate = f.clone();
    for n in 1..=n_max {
        if n > 1 {
            iterate = match AffineMap::compose(f, &iterate) {
                Ok(next) => next,
                Err(_) => break,
            };
        }
        let test = iterate.similarity_test(tol);
        if test.is_similarity && test.ratio < 1.0 {
            found = Some((n, test.ratio));
            break;
        }
        if test.is_similarity {
            earlier_similarity = true;
        }
    }
    match found {
        Some((n, ratio)) => GnOrder {
            map_index: 0,
            order: Some(n),
            ratio: Some(ratio),
            strict: !earlier_similarity,
            n_max,
        },
        None => GnOrder {
            map_index: 0,
            order: None,
            ratio: None,
            strict: false,
            n_max,
        },
    }
}

/// Relative Frobenius norm of the commutator of `g`'s scaling part with
/// `f`'s Gram matrix `AᵀA`.
///
/// Errors when `g` is not a similarity (the alignment notion is only
/// defined for similarities).
pub fn alignment_residual(g: &AffineMap, f: &AffineMap, tol: f64) -> Result<f64> {
    let test = g.similarity_test(tol);
    if !test.is_similarity {
        return Err(Error::HypothesisNotSatisfied(format!(
            "alignment is only defined for similarity maps; candidate has similarity residual {:.3e}",
            test.residual
        )));
    }
    let s = g.linear();
    let gram = f.linear().transpose().mul(f.linear());
    let commutator = s.mul(&gram).sub(&gram.mul(s));
    let scale = gram.frobenius_norm();
    Ok(if scale > 0.0 {
        commutator.frobenius_norm() / scale
    } else {
        0.0
    })
}

/// True when the similarity `g` is aligned with the affine map `f`, i.e.
/// its scaling part commutes with `AᵀA` within tolerance.
pub fn is_f_aligned(g: &AffineMap, f: &AffineMap, tol: f64) -> Result<bool> {
    Ok(alignment_residual(g, f, tol)? <= tol)
}

/// Budget cap on `len(system)^k` composition enumerations.
pub const UNIFORM_K_BUDGET: usize = 1_000_000;

/// Tests whether every length-`k` composition from the system is a
/// similarity contraction.
pub fn uniform_k_similarity(system: &IfsSystem, k: usize, tol: f64) -> Result<UniformKOutcome> {
    if k == 0 {
        return Err(Error::InvalidSystem(
            "composition order k must be at least 1".to_string(),
        ));
    }
    let n = system.len();
    let budget_ok = (n as f64).powi(k as i32) <= UNIFORM_K_BUDGET as f64;
    if !budget_ok {
        return Err(Error::InvalidSystem(format!(
            "{n} maps at composition order {k} exceed the {UNIFORM_K_BUDGET}-word budget"
        )));
    }
    let mut ratios = Vec::new();
    let mut failure: Option<UniformKOutcome> = None;
    for_each_word(n, k, |word| {
        if failure.is_some() {
            return;
        }
        let composite = system
            .compose_word(word)
            .expect("validated system words always compose");
        let test = composite.similarity_test(tol);
        if test.is_similarity && test.ratio < 1.0 {
            ratios.push(WordRatio {
                word: word.to_vec(),
                ratio: test.ratio,
            });
        } else {
            failure = Some(UniformKOutcome::Failure {
                word: word.to_vec(),
                residual: test.residual,
                ratio: test.ratio,
                expansion: test.is_similarity,
            });
        }
    });
    Ok(failure.unwrap_or(UniformKOutcome::AllSimilar { ratios }))
}

/// Classifies the planar structure of an ordered pair: `f` arbitrary
/// invertible affine, `g` a similarity.
pub fn planar_classify(f: &AffineMap, g: &AffineMap, tol: f64) -> Result<PlanarClass> {
    if f.dimension() != 2 || g.dimension() != 2 {
        return Err(Error::HypothesisNotSatisfied(format!(
            "planar classification needs ambient dimension 2, got {} and {}",
            f.dimension(),
            g.dimension()
        )));
    }
    let g_test = g.similarity_test(tol);
    if !g_test.is_similarity {
        return Err(Error::HypothesisNotSatisfied(format!(
            "the scaling map must be a similarity; its Gram residual {:.3e} exceeds tolerance",
            g_test.residual
        )));
    }
    let r = g_test.ratio;

    let a = f.linear();
    let det = f.det();
    let c = det.abs();
    let a2 = a.mul(a);
    let scale = f64::max(1.0, c);
    let a_square_form = if a2.sub(&Mat::identity(2).scale(c)).frobenius_norm() <= tol * scale {
        ASquareForm::PlusCI
    } else if a2.sub(&Mat::identity(2).scale(-c)).frobenius_norm() <= tol * scale {
        ASquareForm::MinusCI
    } else {
        ASquareForm::Neither
    };

    let f_test = f.similarity_test(tol);
    let f_similarity_ratio = f_test.is_similarity.then_some(f_test.ratio);
    let f_scalar = f_test.is_similarity && {
        let rho = f_test.ratio;
        let id = Mat::identity(2);
        a.sub(&id.scale(rho)).frobenius_norm() <= tol * f64::max(1.0, rho)
            || a.sub(&id.scale(-rho)).frobenius_norm() <= tol * f64::max(1.0, rho)
    };

    let s = g.linear();
    let id = Mat::identity(2);
    let s_scale = f64::max(1.0, r);
    let s_form = if s.sub(&id.scale(r)).frobenius_norm() <= tol * s_scale {
        SForm::PlusRI
    } else if s.sub(&id.scale(-r)).frobenius_norm() <= tol * s_scale {
        SForm::MinusRI
    } else if s.sub(&s.transpose()).frobenius_norm() <= tol * s_scale && g.det() < 0.0 {
        // A symmetric similarity with negative determinant is r times a
        // reflection across an eigen-axis of the scaling part.
        SForm::AxialReflection
    } else {
        SForm::Other
    };

    let zf = f.fixed_point()?;
    let zg = g.fixed_point()?;
    let v = [zg[0] - zf[0], zg[1] - zf[1]];
    let v_norm = v[0].hypot(v[1]);
    let point_scale = f64::max(
        1.0,
        f64::max(zf[0].hypot(zf[1]), zg[0].hypot(zg[1])),
    );
    let fixed_points_distinct = v_norm > tol * point_scale;

    let av = a.mul_vec(&v);
    let av_norm = av[0].hypot(av[1]);
    let cross = v[0] * av[1] - v[1] * av[0];
    let collinear_degenerate =
        !fixed_points_distinct || cross.abs() <= COLLINEAR_TOL * v_norm * av_norm;

    Ok(PlanarClass {
        a_square_form,
        c,
        det_sign: if det >= 0.0 { 1 } else { -1 },
        f_similarity_ratio,
        f_scalar,
        s_form,
        r,
        z_f: [zf[0], zf[1]],
        z_g: [zg[0], zg[1]],
        fixed_points_distinct,
        collinear_degenerate,
    })
}

/// Searches pairs of composition words (length ≤ `max_word_len`) whose
/// composites decouple on a coordinate axis, and returns the first pair
/// whose induced one-dimensional maps tile an invariant interval.
///
/// The returned interval is an exact-cover certificate: the two induced
/// interval images partition it (up to endpoint tolerance), so the
/// attractor's projection onto that axis contains the full interval.
pub fn decoupled_projection_bound(
    system: &IfsSystem,
    max_word_len: usize,
) -> Result<Option<DecoupledProjection>> {
    let m = system.dimension();
    let n = system.len();
    if max_word_len == 0 || max_word_len > 3 {
        return Err(Error::InvalidSystem(
            "decoupled-projection search supports word lengths 1..=3".to_string(),
        ));
    }
    for len in 1..=max_word_len {
        let mut words: Vec<Vec<usize>> = Vec::new();
        for_each_word(n, len, |w| words.push(w.to_vec()));
        let composites: Vec<AffineMap> = words
            .iter()
            .map(|w| system.compose_word(w).expect("validated words compose"))
            .collect();
        for i in 0..composites.len() {
            for j in (i + 1)..composites.len() {
                for axis in 0..m {
                    if let Some(found) =
                        try_decoupled_pair(&composites[i], &composites[j], axis)
                    {
                        return Ok(Some(DecoupledProjection {
                            axis,
                            interval: found.0,
                            words: vec![words[i].clone(), words[j].clone()],
                            slopes: vec![found.1[0], found.1[1]],
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Checks one candidate pair on one axis; returns the invariant interval
/// and slopes when the axis decouples and the induced interval maps tile it.
fn try_decoupled_pair(
    a: &AffineMap,
    b: &AffineMap,
    axis: usize,
) -> Option<((f64, f64), [f64; 2])> {
    let tol = tolerances::STRUCTURAL;
    let row_decoupled = |map: &AffineMap| -> Option<(f64, f64)> {
        let lin = map.linear();
        let scale = f64::max(1.0, lin.max_abs());
        for jj in 0..map.dimension() {
            if jj != axis && lin.get(axis, jj).abs() > tol * scale {
                return None;
            }
        }
        let slope = lin.get(axis, axis);
        (slope.abs() < 1.0).then_some((slope, map.translation()[axis]))
    };
    let (s1, t1) = row_decoupled(a)?;
    let (s2, t2) = row_decoupled(b)?;

    // Hull iteration: start from the hull of the two 1-D fixed points and
    // expand by the pair's images until stationary. The hull converges
    // geometrically, so a fixed iteration budget suffices.
    let fp1 = t1 / (1.0 - s1);
    let fp2 = t2 / (1.0 - s2);
    let mut lo = fp1.min(fp2);
    let mut hi = fp1.max(fp2);
    let image = |s: f64, t: f64, lo: f64, hi: f64| -> (f64, f64) {
        let (p, q) = (s * lo + t, s * hi + t);
        (p.min(q), p.max(q))
    };
    for _ in 0..tolerances::INTERVAL_ITERATIONS {
        let (a_lo, a_hi) = image(s1, t1, lo, hi);
        let (b_lo, b_hi) = image(s2, t2, lo, hi);
        let new_lo = lo.min(a_lo.min(b_lo));
        let new_hi = hi.max(a_hi.max(b_hi));
        if new_lo == lo && new_hi == hi {
            break;
        }
        lo = new_lo;
        hi = new_hi;
    }

    // Coverage: the two images must tile [lo, hi] without an interior gap.
    let len = hi - lo;
    if !(len > 0.0) {
        return None;
    }
    let eps = tolerances::COVERAGE_SLACK * f64::max(1.0, len);
    let (a_img, b_img) = (image(s1, t1, lo, hi), image(s2, t2, lo, hi));
    let (first, second) = if a_img.0 <= b_img.0 {
        (a_img, b_img)
    } else {
        (b_img, a_img)
    };
    // Left-to-right sweep: any gap wider than the slack breaks coverage.
    let mut cover_hi = lo;
    for interval in [first, second] {
        if interval.0 > cover_hi + eps {
            return None;
        }
        cover_hi = cover_hi.max(interval.1);
    }
    (cover_hi >= hi - eps).then_some(((lo, hi), [s1, s2]))
}

/// Classifies a system into an equation family, collecting every probe
/// result and a guard note for every hypothesis that failed.
pub fn classify_system(system: &IfsSystem, opts: &ClassifyOptions) -> ClassificationReport {
    let tol = opts.tol;
    let maps = system.maps();
    let m = system.dimension();

    let tests: Vec<_> = maps.iter().map(|f| f.similarity_test(tol)).collect();
    let similarity: Vec<SimilaritySummary> = tests
        .iter()
        .enumerate()
        .map(|(i, t)| SimilaritySummary {
            map_index: i,
            is_similarity: t.is_similarity,
            ratio: t.ratio,
            residual: t.residual,
        })
        .collect();
    let gn_orders: Vec<GnOrder> = maps
        .iter()
        .enumerate()
        .map(|(i, f)| GnOrder {
            map_index: i,
            ..gn_order(f, opts.n_max, tol)
        })
        .collect();

    let sim_idx: Vec<usize> = (0..maps.len()).filter(|&i| tests[i].is_similarity).collect();
    let affine_idx: Vec<usize> = (0..maps.len()).filter(|&i| !tests[i].is_similarity).collect();
    let overlaps_declared = !system.overlaps().is_empty();

    let mut notes: Vec<String> = Vec::new();
    let mut family = Family::Unclassified;
    let mut params: Option<FamilyParams> = None;
    let mut alignment: Option<AlignmentReport> = None;
    let mut k_uniform: Option<(usize, Vec<WordRatio>)> = None;

    if overlaps_declared {
        notes.push(
            "declared overlap structure: the disjoint-images families do not apply; \
             using the overlap-corrected equation"
                .to_string(),
        );
    }

    // Family 1: one distinguished map with a similar iterate, all other
    // maps aligned similarity contractions.
    if !overlaps_declared && affine_idx.len() <= 1 {
        let f_pos = affine_idx.first().copied().unwrap_or(0);
        let order = if affine_idx.is_empty() {
            // Every map is a similarity: the first map serves as the
            // distinguished one with iterate order 1.
            (tests[f_pos].ratio < 1.0).then(|| (1usize, tests[f_pos].ratio))
        } else {
            gn_orders[f_pos]
                .order
                .map(|n| (n, gn_orders[f_pos].ratio.expect("ratio set with order")))
        };
        match order {
            None => notes.push(format!(
                "map {f_pos} has no similarity-contraction iterate up to order {}",
                opts.n_max
            )),
            Some((n, c)) => {
                let others: Vec<usize> = (0..maps.len()).filter(|&i| i != f_pos).collect();
                let mut entries = Vec::new();
                let mut all_aligned = true;
                let mut all_contract = true;
                for &j in &others {
                    if tests[j].ratio >= 1.0 {
                        all_contract = false;
                        notes.push(format!(
                            "similarity map {j} has ratio {:.6} and is not a contraction",
                            tests[j].ratio
                        ));
                    }
                    let residual = alignment_residual(&maps[j], &maps[f_pos], tol)
                        .expect("map {j} passed the similarity test");
                    let aligned = residual <= tol;
                    if !aligned {
                        all_aligned = false;
                        notes.push(format!(
                            "similarity map {j} is not aligned with map {f_pos}: its scaling \
                             part does not commute with the distortion AᵀA \
                             (commutator residual {residual:.3e})"
                        ));
                    }
                    entries.push(AlignmentEntry {
                        similarity_index: j,
                        affine_index: f_pos,
                        aligned,
                        commutator_residual: residual,
                    });
                }
                alignment = Some(AlignmentReport {
                    entries,
                    all_aligned,
                });
                if all_aligned && all_contract {
                    family = Family::AlignedGn;
                    params = Some(FamilyParams::AlignedGn {
                        n,
                        c,
                        similarity_ratios: others.iter().map(|&j| tests[j].ratio).collect(),
                    });
                }
            }
        }
    }

    // Family 2: several affine maps with one uniform iterate order, plus at
    // least one similarity aligned with every affine map.
    if family == Family::Unclassified
        && !overlaps_declared
        && affine_idx.len() >= 2
        && !sim_idx.is_empty()
    {
        let sub = IfsSystem::new(affine_idx.iter().map(|&i| maps[i].clone()).collect())
            .expect("affine subfamily shares the system dimension");
        let mut uniform_n: Option<usize> = None;
        for n in 1..=opts.n_max {
            match uniform_k_similarity(&sub, n, tol) {
                Ok(UniformKOutcome::AllSimilar { .. }) => {
                    uniform_n = Some(n);
                    break;
                }
                Ok(UniformKOutcome::Failure { .. }) => {}
                Err(_) => break,
            }
        }
        match uniform_n {
            None => notes.push(format!(
                "the affine subfamily has no uniform iterate order up to {}: some length-n \
                 composition of the non-similarity maps fails the similarity test for every \
                 n tried",
                opts.n_max
            )),
            Some(n) => {
                let mut entries = Vec::new();
                let mut all_aligned = true;
                for &j in &sim_idx {
                    for &i in &affine_idx {
                        let residual = alignment_residual(&maps[j], &maps[i], tol)
                            .expect("map {j} passed the similarity test");
                        let aligned = residual <= tol;
                        if !aligned {
                            all_aligned = false;
                            notes.push(format!(
                                "similarity map {j} is not aligned with map {i} \
                                 (commutator residual {residual:.3e})"
                            ));
                        }
                        entries.push(AlignmentEntry {
                            similarity_index: j,
                            affine_index: i,
                            aligned,
                            commutator_residual: residual,
                        });
                    }
                }
                let mut all_contract = true;
                for &j in &sim_idx {
                    if tests[j].ratio >= 1.0 {
                        all_contract = false;
                        notes.push(format!(
                            "similarity map {j} has ratio {:.6} and is not a contraction",
                            tests[j].ratio
                        ));
                    }
                }
                alignment = Some(AlignmentReport {
                    entries,
                    all_aligned,
                });
                if all_aligned && all_contract {
                    let iterate_ratios: Vec<f64> = affine_idx
                        .iter()
                        .map(|&i| {
                            maps[i]
                                .iterate(n)
                                .expect("iterates of valid maps compose")
                                .similarity_test(tol)
                                .ratio
                        })
                        .collect();
                    family = Family::Hybrid;
                    params = Some(FamilyParams::Hybrid {
                        n,
                        iterate_ratios,
                        similarity_ratios: sim_idx.iter().map(|&j| tests[j].ratio).collect(),
                    });
                }
            }
        }
    }

    // Families 3 and 4: uniform composition order over the whole system,
    // without (K_ITERATE) or with (OVERLAP_DECLARED) declared overlaps.
    if family == Family::Unclassified {
        let mut found: Option<(usize, Vec<WordRatio>)> = None;
        let mut first_failure: Option<(usize, Vec<usize>)> = None;
        for k in 1..=opts.k_max {
            match uniform_k_similarity(system, k, tol) {
                Ok(UniformKOutcome::AllSimilar { ratios }) => {
                    found = Some((k, ratios));
                    break;
                }
                Ok(UniformKOutcome::Failure { word, .. }) => {
                    if first_failure.is_none() && k >= 2 {
                        first_failure = Some((k, word));
                    }
                }
                Err(e) => {
                    notes.push(format!("uniform-order search stopped: {e}"));
                    break;
                }
            }
        }
        match found {
            Some((k, ratios)) => {
                let iterate_ratios: Vec<f64> = (0..maps.len())
                    .map(|i| {
                        ratios
                            .iter()
                            .find(|wr| wr.word.iter().all(|&w| w == i))
                            .expect("diagonal words are enumerated")
                            .ratio
                    })
                    .collect();
                if overlaps_declared {
                    family = Family::OverlapDeclared;
                    params = Some(FamilyParams::OverlapDeclared {
                        k,
                        iterate_ratios: iterate_ratios.clone(),
                        overlaps: system
                            .overlaps()
                            .iter()
                            .map(|o| (o.multiplicity_q, o.scale_p))
                            .collect(),
                    });
                } else {
                    family = Family::KIterate;
                    params = Some(FamilyParams::KIterate {
                        k,
                        iterate_ratios: iterate_ratios.clone(),
                    });
                }
                k_uniform = Some((k, ratios));
            }
            None => {
                let example = first_failure
                    .map(|(k, w)| format!(" (e.g. order {k} fails first at word {w:?})"))
                    .unwrap_or_default();
                notes.push(format!(
                    "no uniform composition order up to {}: some composition always fails \
                     the similarity-contraction test{example}",
                    opts.k_max
                ));
            }
        }
    }

    // Planar diagnosis for any two-map planar system; also the last-resort
    // family when the structure is definite but no equation family matched.
    let mut planar: Option<PlanarClass> = None;
    let mut planar_swapped = false;
    if m == 2 && maps.len() == 2 {
        match planar_classify(&maps[0], &maps[1], tol) {
            Ok(p) => planar = Some(p),
            Err(_) => match planar_classify(&maps[1], &maps[0], tol) {
                Ok(p) => {
                    planar = Some(p);
                    planar_swapped = true;
                }
                Err(_) => {}
            },
        }
        if let Some(p) = &planar {
            if p.s_form == SForm::AxialReflection {
                notes.push(
                    "the similarity scales by an axial reflection: no separating rectangle \
                     exists in general and the attractor can be disconnected even when \
                     c + r >= 1; verify separation empirically before trusting a dimension \
                     value"
                        .to_string(),
                );
            }
            if family == Family::Unclassified
                && p.a_square_form != ASquareForm::Neither
                && p.s_form != SForm::Other
            {
                family = Family::PlanarTwoMap;
                notes.push(
                    "planar two-map structure recognized, but no dimension-equation family \
                     applies; separation certificates and topology classification remain \
                     available"
                        .to_string(),
                );
            }
        }
    }

    if family == Family::Unclassified && notes.is_empty() {
        notes.push(
            "no recognized algebraic structure: the system matches none of the \
             equation families"
                .to_string(),
        );
    }

    ClassificationReport {
        family,
        params,
        similarity,
        gn_orders,
        alignment,
        k_uniform,
        planar,
        planar_swapped,
        guard_notes: notes,
    }
}
