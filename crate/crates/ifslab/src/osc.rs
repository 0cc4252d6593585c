//! Separating-rectangle certificates and connectivity classification for
//! planar two-map systems.
//!
//! For a pair (affine map `f` whose linear part squares to `±c·I`, scalar
//! similarity `g = ±r·I + b`), a rectangle `O` can be constructed whose
//! images under `f` and `g` are disjoint subsets of `O` whenever
//! `c + r ≤ 1`. The rectangle is an open-set certificate: it witnesses
//! that the dimension equation for the pair is exact. The same structure
//! drives a connectivity trichotomy on the invariant direction through the
//! two fixed points.

use crate::classify::{planar_classify, ASquareForm, PlanarClass, SForm};
use crate::error::{Error, Result};
use crate::system::IfsSystem;
use crate::tolerances;
use serde::Serialize;

/// Structural case of a certified pair: the sign in `A² = ±cI` crossed
/// with the sign in `S = ±rI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// `A² = −cI`, `S = +rI`.
    #[serde(rename = "NEG_cI_POS_r")]
    NegCiPosR,
    /// `A² = −cI`, `S = −rI`.
    #[serde(rename = "NEG_cI_NEG_r")]
    NegCiNegR,
    /// `A² = +cI`, `S = +rI`.
    #[serde(rename = "POS_cI_POS_r")]
    PosCiPosR,
    /// `A² = +cI`, `S = −rI`.
    #[serde(rename = "POS_cI_NEG_r")]
    PosCiNegR,
}

/// A separating rectangle for a planar two-map system.
///
/// The rectangle is `[alpha₁, alpha₂] × [beta₁, beta₂]` in the skew frame
/// `(u, w) = (⟨axis_u, x⟩, ⟨axis_w, x⟩)`; `vertices` are its corners in
/// the original coordinates, in the order `(α₁,β₁), (α₂,β₁), (α₂,β₂),
/// (α₁,β₂)`.
#[derive(Debug, Clone, Serialize)]
pub struct OscCertificate {
    /// Which structural case the construction used.
    pub case_tag: CaseTag,
    /// Index of the `±cI`-squared map in the system.
    pub f_index: usize,
    /// Index of the scalar similarity in the system.
    pub g_index: usize,
    /// `c = |det A|`.
    pub c: f64,
    /// Similarity ratio of the scaling map.
    pub r: f64,
    /// Fixed point of the `±cI`-squared map.
    pub z_f: [f64; 2],
    /// Fixed point of the scaling map.
    pub z_g: [f64; 2],
    /// Unit normal direction defining the `u`-coordinate.
    pub axis_u: [f64; 2],
    /// Transversal direction `Aᵀ·axis_u` defining the `w`-coordinate.
    pub axis_w: [f64; 2],
    /// Shear parameter of the mixed case (`A² = −cI`, `S = −rI`).
    pub lambda: Option<f64>,
    /// Affine offset of the boundary-line family in the `(u, w)` frame.
    pub k_offset: f64,
    /// `u`-extent of the rectangle, `alpha[0] < alpha[1]`.
    pub alpha: [f64; 2],
    /// `w`-extent of the rectangle, `beta[0] < beta[1]`.
    pub beta: [f64; 2],
    /// Rectangle corners in original coordinates.
    pub vertices: [[f64; 2]; 4],
    /// Whether the built-in verification passed.
    pub verified: bool,
}

/// One named inequality checked during certificate verification.
#[derive(Debug, Clone, Serialize)]
pub struct CertCheck {
    /// What the inequality asserts.
    pub name: String,
    /// Signed slack: positive means the inequality holds strictly.
    pub margin: f64,
    /// Whether the inequality holds within tolerance.
    pub pass: bool,
}

/// Outcome of re-verifying a certificate against the system.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    /// All inequalities, in the order checked.
    pub checks: Vec<CertCheck>,
    /// Conjunction of every check.
    pub all_pass: bool,
    /// Gap between the two image `u`-intervals (0 means exact abutment).
    pub u_gap: f64,
    /// `u`-length of the first map's image (equals `c·(α₂−α₁)`).
    pub f_u_length: f64,
    /// `u`-length of the scaling map's image (equals `r·(α₂−α₁)`).
    pub g_u_length: f64,
}

/// Connectivity verdict for a planar two-map attractor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TopologyClass {
    /// The image intervals overlap; the attractor is connected.
    #[serde(rename = "CONNECTED")]
    Connected,
    /// The image intervals leave a gap; the attractor is totally
    /// disconnected.
    #[serde(rename = "TOTALLY_DISCONNECTED")]
    TotallyDisconnected,
    /// The image intervals abut exactly; connected through single
    /// bottleneck points, and the boundary case of both regimes.
    #[serde(rename = "BOTTLENECK_BOTH")]
    BottleneckBoth,
    /// The structure needed for the interval reduction is absent.
    #[serde(rename = "INAPPLICABLE")]
    Inapplicable,
}

/// Connectivity classification with its supporting data.
#[derive(Debug, Clone, Serialize)]
pub struct TopologyVerdict {
    /// The verdict.
    pub verdict: TopologyClass,
    /// Effective contraction of the first map along the invariant
    /// direction (`|det A|` in the `±cI` cases, the scalar ratio when the
    /// map is a homothety).
    pub c: f64,
    /// Similarity ratio of the scaling map.
    pub r: f64,
    /// `c + r`, the quantity compared against 1.
    pub sum_cr: f64,
    /// Structural case, when the reduction applies.
    pub case_tag: Option<CaseTag>,
    /// Human-readable explanation of the verdict.
    pub reason: String,
    /// Invariant interval of the induced one-dimensional pair, in the
    /// normalized coordinate with the fixed points at 0 and 1 (present
    /// when `c + r ≥ 1`).
    pub invariant_interval: Option<[f64; 2]>,
}

#[inline]
fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
fn rot90(v: [f64; 2]) -> [f64; 2] {
    [-v[1], v[0]]
}

/// Classifies both orderings of a two-map planar system, keeping every
/// ordering in which the second map is a similarity.
fn viable_orderings(system: &IfsSystem) -> Result<Vec<(usize, usize, PlanarClass)>> {
    if system.dimension() != 2 || system.len() != 2 {
        return Err(Error::HypothesisNotSatisfied(format!(
            "this construction needs exactly two planar maps, got {} maps in dimension {}",
            system.len(),
            system.dimension()
        )));
    }
    let maps = system.maps();
    let mut viable = Vec::new();
    let mut failures = Vec::new();
    for (fi, gi) in [(0usize, 1usize), (1, 0)] {
        match planar_classify(&maps[fi], &maps[gi], tolerances::STRUCTURAL) {
            Ok(pc) => viable.push((fi, gi, pc)),
            Err(e) => failures.push(format!("with map {gi} as the scaling map: {e}")),
        }
    }
    if viable.is_empty() {
        return Err(Error::HypothesisNotSatisfied(format!(
            "neither map can serve as the scaling similarity ({})",
            failures.join("; ")
        )));
    }
    Ok(viable)
}

fn case_tag(a_form: ASquareForm, s_form: SForm) -> Option<CaseTag> {
    match (a_form, s_form) {
        (ASquareForm::MinusCI, SForm::PlusRI) => Some(CaseTag::NegCiPosR),
        (ASquareForm::MinusCI, SForm::MinusRI) => Some(CaseTag::NegCiNegR),
        (ASquareForm::PlusCI, SForm::PlusRI) => Some(CaseTag::PosCiPosR),
        (ASquareForm::PlusCI, SForm::MinusRI) => Some(CaseTag::PosCiNegR),
        _ => None,
    }
}

/// Builds and verifies a separating-rectangle certificate for a planar
/// two-map system.
///
/// One map must have a linear part whose square is `±c·I` with the
/// matching determinant sign, the other must be `±r·I` plus a
/// translation, the fixed points must be distinct, and `c + r ≤ 1`. Any
/// violated hypothesis is reported as a construction error; a constructed
/// rectangle that fails re-verification is a verification error.
pub fn certify_osc(system: &IfsSystem) -> Result<(OscCertificate, VerificationReport)> {
    let orderings = viable_orderings(system)?;

    let chosen = orderings.iter().find(|(_, _, pc)| {
        case_tag(pc.a_square_form, pc.s_form).is_some()
    });
    let (fi, gi, pc) = match chosen {
        Some((fi, gi, pc)) => (*fi, *gi, pc),
        None => {
            // Explain the most structured near-miss.
            if let Some((_, gi, pc)) = orderings.iter().find(|(_, _, pc)| {
                pc.s_form == SForm::AxialReflection && pc.a_square_form != ASquareForm::Neither
            }) {
                return Err(Error::CertificateConstruction(format!(
                    "map {gi}'s linear part is {:.6} times an axial reflection (a flip \
                     across an axis), not ±r·identity; the separating-rectangle \
                     construction requires a scalar similarity",
                    pc.r
                )));
            }
            if let Some((_, gi, pc)) = orderings
                .iter()
                .find(|(_, _, pc)| pc.s_form == SForm::AxialReflection)
            {
                return Err(Error::CertificateConstruction(format!(
                    "map {gi} is {:.6} times an axial reflection, not ±r·identity, and \
                     no ordering has a ±c·identity square",
                    pc.r
                )));
            }
            return Err(Error::CertificateConstruction(
                "no ordering of the two maps pairs a ±c·identity-squared linear part \
                 with a ±r·identity similarity"
                    .to_string(),
            ));
        }
    };
    let tag = case_tag(pc.a_square_form, pc.s_form).expect("chosen above");

    if !pc.fixed_points_distinct {
        return Err(Error::CertificateConstruction(
            "the two maps share a fixed point; their images always meet there and no \
             separating rectangle exists"
                .to_string(),
        ));
    }
    let (c, r) = (pc.c, pc.r);
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::CertificateConstruction(format!(
            "|det A| = {c:.6} must lie in (0, 1) for the rectangle construction"
        )));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::CertificateConstruction(format!(
            "the similarity ratio r = {r:.6} must lie in (0, 1); the scaling map must \
             contract"
        )));
    }
    match pc.a_square_form {
        ASquareForm::PlusCI if pc.det_sign > 0 => {
            return Err(Error::CertificateConstruction(if pc.f_scalar {
                "the candidate for the ±cI-squared map is a scalar homothety; its \
                 square is c·identity but the transversal frame degenerates (det A > 0)"
                    .to_string()
            } else {
                "A² = +c·identity requires det A < 0 for the construction, but det A > 0"
                    .to_string()
            }));
        }
        ASquareForm::MinusCI if pc.det_sign < 0 => {
            return Err(Error::CertificateConstruction(
                "A² = −c·identity with det A < 0 is inconsistent; no construction"
                    .to_string(),
            ));
        }
        _ => {}
    }
    if pc.collinear_degenerate {
        return Err(Error::CertificateConstruction(
            "the displacement between the fixed points is an eigendirection of the \
             first map's linear part; the projection frame degenerates"
                .to_string(),
        ));
    }
    if c + r > 1.0 + tolerances::STRUCTURAL {
        return Err(Error::CertificateConstruction(format!(
            "c + r = {:.12} exceeds 1; the image intervals overcover the separating \
             direction and cannot be disjoint",
            c + r
        )));
    }

    let maps = system.maps();
    let a = maps[fi].linear();
    let (zf, zg) = (pc.z_f, pc.z_g);
    let v = [zf[0] - zg[0], zf[1] - zg[1]];
    let av_vec = a.mul_vec(&v);
    let av = [av_vec[0], av_vec[1]];

    let (lambda, target) = match tag {
        CaseTag::NegCiPosR => (None, av),
        CaseTag::NegCiNegR => {
            let l = c * (c - r) / (1.0 - c * r);
            (Some(l), [av[0] - l * v[0], av[1] - l * v[1]])
        }
        CaseTag::PosCiPosR | CaseTag::PosCiNegR => {
            (None, [av[0] - c * v[0], av[1] - c * v[1]])
        }
    };
    let raw_n = rot90(target);
    let n_norm = raw_n[0].hypot(raw_n[1]);
    if n_norm <= 1e-300 {
        return Err(Error::CertificateConstruction(
            "the transversal direction vanishes; the projection frame degenerates"
                .to_string(),
        ));
    }
    let mut n = [raw_n[0] / n_norm, raw_n[1] / n_norm];
    if dot(n, v) < 0.0 {
        n = [-n[0], -n[1]];
    }
    if dot(n, v).abs() <= tolerances::STRUCTURAL * (v[0].hypot(v[1])) {
        return Err(Error::CertificateConstruction(
            "the fixed-point displacement is orthogonal to the separating direction; \
             the frame degenerates"
                .to_string(),
        ));
    }
    let at = a.transpose();
    let m_vec = at.mul_vec(&n);
    let m = [m_vec[0], m_vec[1]];

    let pin_f = dot(n, zf);
    let pin_g = dot(n, zg);
    let pim_f = dot(m, zf);

    let (k, a1, a2, b1, b2) = match tag {
        CaseTag::NegCiPosR => {
            let k = pim_f;
            let len = (1.0 + c) * (pin_f - pin_g);
            let a1 = pin_g;
            let a2 = a1 + len;
            let b1 = k - c * (a2 - pin_f);
            let b2 = k - c * (a1 - pin_f);
            (k, a1, a2, b1, b2)
        }
        CaseTag::NegCiNegR => {
            let lam = lambda.expect("set for this case");
            let k = pim_f - lam * pin_f;
            let a2 = ((1.0 + c) * pin_f - c * (1.0 + r) * pin_g) / (1.0 - c * r);
            let a1 = (1.0 + r) * pin_g - r * a2;
            let b1 = -c * a2 + k + (lam + c) * pin_f;
            let b2 = -c * a1 + k + (lam + c) * pin_f;
            (k, a1, a2, b1, b2)
        }
        CaseTag::PosCiPosR | CaseTag::PosCiNegR => {
            let k = pim_f - c * pin_f;
            let len = pin_f - pin_g;
            let a1 = if tag == CaseTag::PosCiPosR {
                pin_g
            } else {
                pin_g - r * len
            };
            let a2 = pin_f;
            (k, a1, a2, c * a1 + k, c * a2 + k)
        }
    };

    // Invert P = [n; m] to place the rectangle corners back in the plane.
    let det_p = n[0] * m[1] - n[1] * m[0];
    if det_p.abs() <= 1e-12 * f64::max(1.0, m[0].hypot(m[1])) {
        return Err(Error::CertificateConstruction(
            "the two frame directions are parallel; the rectangle frame is singular"
                .to_string(),
        ));
    }
    let p_inv = |u: f64, w: f64| -> [f64; 2] {
        [
            (m[1] * u - n[1] * w) / det_p,
            (-m[0] * u + n[0] * w) / det_p,
        ]
    };
    let vertices = [
        p_inv(a1, b1),
        p_inv(a2, b1),
        p_inv(a2, b2),
        p_inv(a1, b2),
    ];

    let mut cert = OscCertificate {
        case_tag: tag,
        f_index: fi,
        g_index: gi,
        c,
        r,
        z_f: zf,
        z_g: zg,
        axis_u: n,
        axis_w: m,
        lambda,
        k_offset: k,
        alpha: [a1, a2],
        beta: [b1, b2],
        vertices,
        verified: false,
    };
    let report = verify_certificate(system, &cert)?;
    if !report.all_pass {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|ch| !ch.pass)
            .map(|ch| ch.name.as_str())
            .collect();
        return Err(Error::CertificateVerification(format!(
            "constructed rectangle failed re-verification: {}",
            failed.join("; ")
        )));
    }
    cert.verified = true;
    Ok((cert, report))
}

/// Re-verifies a certificate against the system it claims to separate.
///
/// All five inequalities are checked by pushing the rectangle's corners
/// through both maps (exact, since the maps are affine): both image
/// `u`-intervals inside the rectangle's `u`-extent, the two `u`-intervals
/// disjoint, both image `w`-intervals inside the `w`-extent; plus a frame
/// consistency check that the stored vertices project back onto the
/// stored rectangle corners. Failures are reported in the result, not as
/// errors.
pub fn verify_certificate(
    system: &IfsSystem,
    cert: &OscCertificate,
) -> Result<VerificationReport> {
    if system.dimension() != 2 || system.len() != 2 {
        return Err(Error::HypothesisNotSatisfied(
            "certificate verification needs the original two planar maps".to_string(),
        ));
    }
    if cert.f_index >= 2 || cert.g_index >= 2 || cert.f_index == cert.g_index {
        return Err(Error::HypothesisNotSatisfied(format!(
            "certificate map indices ({}, {}) do not address a two-map system",
            cert.f_index, cert.g_index
        )));
    }
    let maps = system.maps();
    let f = &maps[cert.f_index];
    let g = &maps[cert.g_index];
    let n = cert.axis_u;
    let m = cert.axis_w;
    let [a1, a2] = cert.alpha;
    let [b1, b2] = cert.beta;
    let lu = a2 - a1;
    let lw = b2 - b1;
    let tol_u = tolerances::CERT_VERIFY_REL * lu.abs().max(1e-300);
    let tol_w = tolerances::CERT_VERIFY_REL * lw.abs().max(1e-300);

    // Frame consistency: stored vertices must project onto the corners.
    let expected = [[a1, b1], [a2, b1], [a2, b2], [a1, b2]];
    let mut corner_dev = 0.0f64;
    for (vtx, exp) in cert.vertices.iter().zip(&expected) {
        let u = dot(n, *vtx);
        let w = dot(m, *vtx);
        corner_dev = corner_dev.max((u - exp[0]).abs().max((w - exp[1]).abs()));
    }
    let corner_tol = tolerances::CERT_VERIFY_REL * f64::max(lu.abs(), lw.abs()).max(1.0);

    let project = |map: &crate::affine::AffineMap| -> ([f64; 2], [f64; 2]) {
        let mut u_range = [f64::INFINITY, f64::NEG_INFINITY];
        let mut w_range = [f64::INFINITY, f64::NEG_INFINITY];
        for vtx in &cert.vertices {
            let img = map.apply(vtx);
            let u = n[0] * img[0] + n[1] * img[1];
            let w = m[0] * img[0] + m[1] * img[1];
            u_range = [u_range[0].min(u), u_range[1].max(u)];
            w_range = [w_range[0].min(w), w_range[1].max(w)];
        }
        (u_range, w_range)
    };
    let (fu, fw) = project(f);
    let (gu, gw) = project(g);

    let containment = |range: [f64; 2], lo: f64, hi: f64| -> f64 {
        f64::min(range[0] - lo, hi - range[1])
    };
    let f_u_margin = containment(fu, a1, a2);
    let g_u_margin = containment(gu, a1, a2);
    let f_w_margin = containment(fw, b1, b2);
    let g_w_margin = containment(gw, b1, b2);
    let u_gap = f64::max(gu[0] - fu[1], fu[0] - gu[1]);

    let checks = vec![
        CertCheck {
            name: "vertices project onto the rectangle corners".to_string(),
            margin: corner_tol - corner_dev,
            pass: corner_dev <= corner_tol,
        },
        CertCheck {
            name: "first-map image u-interval inside the rectangle".to_string(),
            margin: f_u_margin,
            pass: f_u_margin >= -tol_u,
        },
        CertCheck {
            name: "scaling-map image u-interval inside the rectangle".to_string(),
            margin: g_u_margin,
            pass: g_u_margin >= -tol_u,
        },
        CertCheck {
            name: "image u-intervals disjoint".to_string(),
            margin: u_gap,
            pass: u_gap >= -tol_u,
        },
        CertCheck {
            name: "first-map image w-interval inside the rectangle".to_string(),
            margin: f_w_margin,
            pass: f_w_margin >= -tol_w,
        },
        CertCheck {
            name: "scaling-map image w-interval inside the rectangle".to_string(),
            margin: g_w_margin,
            pass: g_w_margin >= -tol_w,
        },
    ];
    let all_pass = checks.iter().all(|ch| ch.pass);
    Ok(VerificationReport {
        checks,
        all_pass,
        u_gap,
        f_u_length: fu[1] - fu[0],
        g_u_length: gu[1] - gu[0],
    })
}

/// Invariant interval of the induced one-dimensional pair, in the
/// normalized coordinate placing the first map's fixed point at 0 and the
/// scaling map's at 1.
///
/// Exists when `c + r ≥ 1` (within tolerance); the induced interval maps
/// then tile it. For `c + r < 1` the images leave a gap and no interval
/// is invariant.
pub fn invariant_interval_1d(case: CaseTag, c: f64, r: f64) -> Result<[f64; 2]> {
    if !(c > 0.0 && c < 1.0 && r > 0.0 && r < 1.0) {
        return Err(Error::HypothesisNotSatisfied(format!(
            "interval parameters must lie in (0, 1), got c = {c}, r = {r}"
        )));
    }
    if c + r < 1.0 - tolerances::STRUCTURAL {
        return Err(Error::HypothesisNotSatisfied(format!(
            "c + r = {:.12} < 1: the induced interval images leave a gap, so no \
             invariant interval exists",
            c + r
        )));
    }
    // Each case induces two affine interval maps t ↦ s·t + d with fixed
    // points 0 and 1 respectively.
    let (lo, hi, f_map, g_map) = match case {
        CaseTag::PosCiPosR => (0.0, 1.0, (c, 0.0), (r, 1.0 - r)),
        CaseTag::PosCiNegR => (0.0, 1.0 + r, (c, 0.0), (-r, 1.0 + r)),
        CaseTag::NegCiPosR => (-c, 1.0, (-c, 0.0), (r, 1.0 - r)),
        CaseTag::NegCiNegR => {
            let lo = -c * (1.0 + r) / (1.0 - r * c);
            let hi = (1.0 + r) / (1.0 - r * c);
            (lo, hi, (-c, 0.0), (-r, 1.0 + r))
        }
    };
    // Consistency: the two images must lie inside [lo, hi] and cover it.
    let image = |(s, d): (f64, f64)| -> [f64; 2] {
        let e0 = s * lo + d;
        let e1 = s * hi + d;
        [e0.min(e1), e0.max(e1)]
    };
    let (img_f, img_g) = (image(f_map), image(g_map));
    let slack = 1e-9 * (hi - lo);
    let inside =
        |iv: [f64; 2]| iv[0] >= lo - slack && iv[1] <= hi + slack;
    let (first, second) = if img_f[0] <= img_g[0] {
        (img_f, img_g)
    } else {
        (img_g, img_f)
    };
    let covers = first[0] <= lo + slack
        && second[1] >= hi - slack
        && second[0] <= first[1] + slack;
    if !(inside(img_f) && inside(img_g) && covers) {
        return Err(Error::HypothesisNotSatisfied(format!(
            "internal consistency failure: induced interval images {img_f:?} and \
             {img_g:?} do not tile [{lo}, {hi}]"
        )));
    }
    Ok([lo, hi])
}

/// Classifies the connectivity of a planar two-map attractor through the
/// one-dimensional reduction along the fixed-point direction.
///
/// `c + r > 1` gives a connected attractor, `c + r < 1` a totally
/// disconnected one, and `c + r = 1` (within tolerance) the boundary case
/// where the images abut at single bottleneck points. A scaling map that
/// is an axial reflection rather than `±r·identity` defeats the
/// reduction, yielding an `INAPPLICABLE` verdict rather than an error.
pub fn classify_topology(system: &IfsSystem) -> Result<TopologyVerdict> {
    let orderings = viable_orderings(system)?;

    // Prefer an ordering with the full (±cI-square, ±rI) structure.
    if let Some((fi, _, pc)) = orderings
        .iter()
        .find(|(_, _, pc)| case_tag(pc.a_square_form, pc.s_form).is_some())
    {
        // A scalar homothety maps every line through its fixed point to
        // itself, so its ratio (not |det|) is the contraction along the
        // invariant direction.
        let (c_eff, tag) = if pc.f_scalar {
            let ratio = pc
                .f_similarity_ratio
                .expect("scalar maps are similarities");
            let entry = system.maps()[*fi].linear().get(0, 0);
            let positive = entry > 0.0;
            let tag = match (positive, pc.s_form) {
                (true, SForm::PlusRI) => CaseTag::PosCiPosR,
                (true, SForm::MinusRI) => CaseTag::PosCiNegR,
                (false, SForm::PlusRI) => CaseTag::NegCiPosR,
                (false, SForm::MinusRI) => CaseTag::NegCiNegR,
                _ => unreachable!("filtered to ±rI forms"),
            };
            (ratio, tag)
        } else {
            (
                pc.c,
                case_tag(pc.a_square_form, pc.s_form).expect("filtered above"),
            )
        };
        let r = pc.r;
        let sum = c_eff + r;

        if !pc.fixed_points_distinct {
            return Ok(TopologyVerdict {
                verdict: TopologyClass::Connected,
                c: c_eff,
                r,
                sum_cr: sum,
                case_tag: Some(tag),
                reason: "the two maps share their fixed point, so the attractor is \
                         that single point (trivially connected)"
                    .to_string(),
                invariant_interval: None,
            });
        }

        let (verdict, reason, interval) = if (sum - 1.0).abs() <= tolerances::STRUCTURAL {
            (
                TopologyClass::BottleneckBoth,
                format!(
                    "c + r = {sum:.12} equals 1 within tolerance: the image intervals \
                     abut exactly, so the attractor is connected but every junction \
                     is a single bottleneck point (the boundary of both regimes)"
                ),
                Some(invariant_interval_1d(tag, c_eff, r)?),
            )
        } else if sum > 1.0 {
            (
                TopologyClass::Connected,
                format!(
                    "c + r = {sum:.12} > 1: the image intervals overlap and cover the \
                     invariant interval, so the attractor is connected"
                ),
                Some(invariant_interval_1d(tag, c_eff, r)?),
            )
        } else {
            (
                TopologyClass::TotallyDisconnected,
                format!(
                    "c + r = {sum:.12} < 1: the image intervals leave a gap, and the \
                     gap recurs inside every image, so the attractor is totally \
                     disconnected"
                ),
                None,
            )
        };
        return Ok(TopologyVerdict {
            verdict,
            c: c_eff,
            r,
            sum_cr: sum,
            case_tag: Some(tag),
            reason,
            invariant_interval: interval,
        });
    }

    // Axial reflection: structured enough to report, not enough to decide.
    if let Some((_, gi, pc)) = orderings.iter().find(|(_, _, pc)| {
        pc.s_form == SForm::AxialReflection && pc.a_square_form != ASquareForm::Neither
    }) {
        return Ok(TopologyVerdict {
            verdict: TopologyClass::Inapplicable,
            c: pc.c,
            r: pc.r,
            sum_cr: pc.c + pc.r,
            case_tag: None,
            reason: format!(
                "map {gi}'s linear part is {:.6} times an axial reflection, not \
                 ±r·identity; the one-dimensional reduction along the fixed-point \
                 direction does not apply, so no verdict is made",
                pc.r
            ),
            invariant_interval: None,
        });
    }

    Err(Error::HypothesisNotSatisfied(
        "no ordering of the two maps pairs a ±c·identity-squared linear part with a \
         scalar similarity; the connectivity reduction does not apply"
            .to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineMap;

    fn pair(a: [f64; 4], bf: [f64; 2], s: [f64; 4], bg: [f64; 2]) -> IfsSystem {
        IfsSystem::new(vec![
            AffineMap::from_parts(&a, &bf).unwrap(),
            AffineMap::from_parts(&s, &bg).unwrap(),
        ])
        .unwrap()
    }

    fn assert_vertices(got: &[[f64; 2]; 4], expected: &[[f64; 2]; 4]) {
        for (g, e) in got.iter().zip(expected) {
            let d = (g[0] - e[0]).hypot(g[1] - e[1]);
            assert!(d < 1e-9, "vertex {g:?} vs {e:?} (|d| = {d:.3e})");
        }
    }

    #[test]
    fn rectangle_for_minus_ci_plus_r_pair() {
        let system = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.5, 0.0, 0.0, 0.5],
            [1.0, 0.5],
        );
        let (cert, report) = certify_osc(&system).unwrap();
        assert_eq!(cert.case_tag, CaseTag::NegCiPosR);
        assert!(cert.verified);
        assert_vertices(
            &cert.vertices,
            &[[1.9, 0.1], [-1.1, -1.4], [-0.8, 1.3], [2.2, 2.8]],
        );
        assert!(report.all_pass);
        // c + r = 1: the images abut exactly.
        assert!(report.u_gap.abs() < 1e-9 * (cert.alpha[1] - cert.alpha[0]));
    }

    #[test]
    fn rectangle_for_minus_ci_minus_r_pair() {
        let system = pair(
            [0.2, -0.7, 1.2, -0.2],
            [0.0, 0.0],
            [-0.2, 0.0, 0.0, -0.2],
            [1.0, 0.0],
        );
        let (cert, report) = certify_osc(&system).unwrap();
        assert_eq!(cert.case_tag, CaseTag::NegCiNegR);
        assert!(cert.lambda.is_some());
        let e = |n: f64, d: f64| n / d;
        assert_vertices(
            &cert.vertices,
            &[
                [e(28.0, 23.0), e(-2.0, 23.0)],
                [e(-12.0, 23.0), e(-32.0, 23.0)],
                [e(-25.0, 23.0), e(10.0, 23.0)],
                [e(15.0, 23.0), e(40.0, 23.0)],
            ],
        );
        assert!(report.all_pass);
    }

    #[test]
    fn rectangle_for_plus_ci_plus_r_pair() {
        let system = pair(
            [0.3, 0.4, 0.4, -0.3],
            [0.0, 0.0],
            [0.75, 0.0, 0.0, 0.75],
            [1.0, 2.0],
        );
        let (cert, report) = certify_osc(&system).unwrap();
        assert_eq!(cert.case_tag, CaseTag::PosCiPosR);
        assert_vertices(
            &cert.vertices,
            &[
                [4.0, 8.0],
                [68.0 / 15.0, -56.0 / 15.0],
                [0.0, 0.0],
                [-8.0 / 15.0, 176.0 / 15.0],
            ],
        );
        assert!(report.all_pass);
    }

    #[test]
    fn rectangle_for_plus_ci_minus_r_pair() {
        let system = pair(
            [0.0, 1.0, 0.25, 0.0],
            [0.0, 0.0],
            [-0.75, 0.0, 0.0, -0.75],
            [1.75, 1.75],
        );
        let (cert, report) = certify_osc(&system).unwrap();
        assert_eq!(cert.case_tag, CaseTag::PosCiNegR);
        assert_vertices(
            &cert.vertices,
            &[[1.75, 1.75], [1.75, 0.0], [0.0, 0.0], [0.0, 1.75]],
        );
        assert!(report.all_pass);
    }

    #[test]
    fn image_u_lengths_scale_by_c_and_r() {
        let system = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.5, 0.0, 0.0, 0.5],
            [1.0, 0.5],
        );
        let (cert, report) = certify_osc(&system).unwrap();
        let lu = cert.alpha[1] - cert.alpha[0];
        assert!((report.f_u_length - cert.c * lu).abs() <= 1e-9 * lu);
        assert!((report.g_u_length - cert.r * lu).abs() <= 1e-9 * lu);
    }

    #[test]
    fn axial_reflection_scaling_map_is_rejected_with_reason() {
        let system = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.3, 0.0, 0.0, -0.3],
            [1.0, 0.5],
        );
        let err = certify_osc(&system).unwrap_err();
        assert!(
            err.to_string().contains("axial reflection"),
            "got: {err}"
        );
    }

    #[test]
    fn overcovering_ratios_are_rejected() {
        let system = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.6, 0.0, 0.0, 0.6],
            [1.0, 0.5],
        );
        let err = certify_osc(&system).unwrap_err();
        assert!(err.to_string().contains("exceeds 1"), "got: {err}");
    }

    #[test]
    fn shared_fixed_point_is_rejected() {
        // Both maps fix the origin.
        let system = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.5, 0.0, 0.0, 0.5],
            [0.0, 0.0],
        );
        let err = certify_osc(&system).unwrap_err();
        assert!(err.to_string().contains("share a fixed point"), "got: {err}");
    }

    #[test]
    fn tampered_vertices_fail_verification_with_named_check() {
        let system = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.5, 0.0, 0.0, 0.5],
            [1.0, 0.5],
        );
        let (mut cert, _) = certify_osc(&system).unwrap();
        cert.vertices[0][0] += 0.05;
        let report = verify_certificate(&system, &cert).unwrap();
        assert!(!report.all_pass);
        let corner = report
            .checks
            .iter()
            .find(|ch| ch.name.contains("corners"))
            .unwrap();
        assert!(!corner.pass, "the corner-consistency check must fire");
    }

    #[test]
    fn widened_alpha_interval_breaks_disjointness() {
        let system = pair(
            [0.3, 0.4, 0.4, -0.3],
            [0.0, 0.0],
            [0.75, 0.0, 0.0, 0.75],
            [1.0, 2.0],
        );
        let (mut cert, _) = certify_osc(&system).unwrap();
        // Push the rectangle's u-extent outward so the images (computed
        // from the stored vertices) no longer match the stored alpha; the
        // corner check and containment margins must flag it.
        cert.alpha[0] -= 0.5;
        let report = verify_certificate(&system, &cert).unwrap();
        assert!(!report.all_pass);
    }

    #[test]
    fn topology_bottleneck_at_unit_sum() {
        let system = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.5, 0.0, 0.0, 0.5],
            [1.0, 0.5],
        );
        let verdict = classify_topology(&system).unwrap();
        assert_eq!(verdict.verdict, TopologyClass::BottleneckBoth);
        assert!((verdict.sum_cr - 1.0).abs() < 1e-12);
        let iv = verdict.invariant_interval.unwrap();
        assert!((iv[0] - (-0.5)).abs() < 1e-12 && (iv[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn topology_connected_above_unit_sum() {
        let system = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.6, 0.0, 0.0, 0.6],
            [1.0, 0.5],
        );
        let verdict = classify_topology(&system).unwrap();
        assert_eq!(verdict.verdict, TopologyClass::Connected);
        assert!(verdict.invariant_interval.is_some());
    }

    #[test]
    fn topology_disconnected_below_unit_sum() {
        let system = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.4, 0.0, 0.0, 0.4],
            [1.0, 0.5],
        );
        let verdict = classify_topology(&system).unwrap();
        assert_eq!(verdict.verdict, TopologyClass::TotallyDisconnected);
        assert!(verdict.invariant_interval.is_none());
    }

    #[test]
    fn topology_uses_scalar_ratio_for_homothety_pairs() {
        // Both maps are 0.25-homotheties: the contraction along the
        // fixed-point line is 0.25 each, so c + r = 0.5, not
        // |det| + r = 0.3125.
        let system = pair(
            [0.25, 0.0, 0.0, 0.25],
            [0.0, 0.0],
            [0.25, 0.0, 0.0, 0.25],
            [1.0, 0.0],
        );
        let verdict = classify_topology(&system).unwrap();
        assert_eq!(verdict.verdict, TopologyClass::TotallyDisconnected);
        assert!((verdict.sum_cr - 0.5).abs() < 1e-12, "sum = {}", verdict.sum_cr);
    }

    #[test]
    fn topology_inapplicable_for_axial_reflection() {
        let system = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.75, 0.0, 0.0, -0.75],
            [1.0, 0.5],
        );
        let verdict = classify_topology(&system).unwrap();
        assert_eq!(verdict.verdict, TopologyClass::Inapplicable);
        assert!(verdict.reason.contains("axial reflection"));
        assert!(verdict.case_tag.is_none());
    }

    #[test]
    fn interval_endpoints_per_case() {
        let c = 0.5;
        let r = 0.5;
        assert_eq!(
            invariant_interval_1d(CaseTag::PosCiPosR, c, r).unwrap(),
            [0.0, 1.0]
        );
        assert_eq!(
            invariant_interval_1d(CaseTag::PosCiNegR, c, r).unwrap(),
            [0.0, 1.5]
        );
        assert_eq!(
            invariant_interval_1d(CaseTag::NegCiPosR, c, r).unwrap(),
            [-0.5, 1.0]
        );
        let iv = invariant_interval_1d(CaseTag::NegCiNegR, c, r).unwrap();
        assert!((iv[0] - (-1.0)).abs() < 1e-15);
        assert!((iv[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn interval_requires_unit_sum_or_more() {
        let err = invariant_interval_1d(CaseTag::PosCiPosR, 0.3, 0.3).unwrap_err();
        assert!(err.to_string().contains("leave a gap"), "got: {err}");
    }

    #[test]
    fn certificates_translate_with_the_system() {
        // Shifting both maps by the same conjugating translation shifts
        // every vertex by that translation.
        let base = pair(
            [0.4, -0.6, 1.1, -0.4],
            [0.0, 0.0],
            [0.5, 0.0, 0.0, 0.5],
            [1.0, 0.5],
        );
        let shift = [3.0, -2.0];
        // Conjugate: x ↦ f(x − t) + t has translation b + t − A t.
        let conj = |m: &AffineMap| {
            let a = m.linear();
            let at = a.mul_vec(&shift.to_vec());
            let b = m.translation();
            AffineMap::from_parts(
                &[a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1)],
                &[b[0] + shift[0] - at[0], b[1] + shift[1] - at[1]],
            )
            .unwrap()
        };
        let maps = base.maps();
        let shifted = IfsSystem::new(vec![conj(&maps[0]), conj(&maps[1])]).unwrap();
        let (c0, _) = certify_osc(&base).unwrap();
        let (c1, _) = certify_osc(&shifted).unwrap();
        for (v0, v1) in c0.vertices.iter().zip(&c1.vertices) {
            assert!((v1[0] - (v0[0] + shift[0])).abs() < 1e-9);
            assert!((v1[1] - (v0[1] + shift[1])).abs() < 1e-9);
        }
    }
}
