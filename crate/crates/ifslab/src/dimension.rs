//! Dimension equations and their solvers.
//!
//! Every supported family reduces to one scalar equation
//! `Σ wᵢ·bᵢˢ = 1` with bases `bᵢ ∈ (0, 1)` and signed weights `wᵢ`
//! (iterate terms contribute weight +1 with base `c^{1/n}`; declared
//! overlaps contribute negative weights). The solver scans `[0, m]` on a
//! fixed grid for sign changes, bisects each bracket, and refuses to answer
//! when the root is not unique. When all base pairs have commensurable
//! logarithms the equation also collapses to a polynomial in
//! `u = b^{s/D}`, which is solved independently as a cross-check.

use crate::classify::{ClassificationReport, Family, FamilyParams};
use crate::error::{Error, Result};
use crate::tolerances;
use serde::Serialize;

/// One `weight·baseˢ` term.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EquationTerm {
    /// Signed weight.
    pub weight: f64,
    /// Base in (0, 1).
    pub base: f64,
}

/// A dimension equation `Σ wᵢ·bᵢˢ = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionEquation {
    /// Terms of the left-hand side.
    pub terms: Vec<EquationTerm>,
    /// Family the equation came from.
    pub family: Family,
    /// Human-readable rendering in the family's natural parameters.
    pub description: String,
}

/// Solver output.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionResult {
    /// The root.
    pub s: f64,
    /// `|Σ wᵢ·bᵢˢ − 1|` at the root.
    pub residual: f64,
    /// Final bisection bracket.
    pub bracket: (f64, f64),
    /// Bisection iterations spent.
    pub iterations: usize,
    /// Why the root is known to be unique.
    pub uniqueness_note: String,
}

/// Polynomial closed form in `u = base^{s/substitution_order}`.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedForm {
    /// Reference base whose power substitutes for every term.
    pub base: f64,
    /// Denominator `D` of the substitution `u = base^{s/D}`.
    pub substitution_order: usize,
    /// Polynomial coefficients as `(exponent, weight)` pairs, ascending by
    /// exponent, including the constant `−1`.
    pub coefficients: Vec<(usize, f64)>,
    /// The unique root of the polynomial in (0, 1).
    pub root_u: f64,
    /// Dimension recovered from the root.
    pub dimension: f64,
}

/// Largest polynomial exponent the closed-form recognizer will build.
const MAX_POLY_EXPONENT: usize = 64;

fn fmt_num(x: f64) -> String {
    // Short, lossless-enough rendering for equation descriptions.
    let s = format!("{x:.12}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

/// Builds the dimension equation for a classified system.
///
/// Refuses unclassified systems (their guard notes are propagated) and the
/// planar fallback family (which certifies separation and topology but has
/// no dimension equation).
pub fn build_equation(report: &ClassificationReport) -> Result<DimensionEquation> {
    let params = match (&report.family, &report.params) {
        (Family::Unclassified, _) => {
            return Err(Error::Unclassified {
                notes: report.guard_notes.clone(),
            });
        }
        (Family::PlanarTwoMap, _) => {
            return Err(Error::HypothesisNotSatisfied(
                "the planar two-map family has no dimension equation; it supports \
                 separation certificates and topology classification only"
                    .to_string(),
            ));
        }
        (_, Some(p)) => p,
        (fam, None) => {
            return Err(Error::HypothesisNotSatisfied(format!(
                "family {fam:?} was assigned without parameters; cannot build an equation"
            )));
        }
    };

    let mut terms = Vec::new();
    let mut pieces: Vec<String> = Vec::new();
    let push_iter_term = |c: f64, n: usize, terms: &mut Vec<EquationTerm>,
                          pieces: &mut Vec<String>|
     -> Result<()> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::HypothesisNotSatisfied(format!(
                "iterate ratio {c} is outside (0, 1)"
            )));
        }
        terms.push(EquationTerm {
            weight: 1.0,
            base: c.powf(1.0 / n as f64),
        });
        pieces.push(if n == 1 {
            format!("({})^s", fmt_num(c))
        } else {
            format!("({})^(s/{n})", fmt_num(c))
        });
        Ok(())
    };

    match params {
        FamilyParams::AlignedGn {
            n,
            c,
            similarity_ratios,
        } => {
            push_iter_term(*c, *n, &mut terms, &mut pieces)?;
            for &r in similarity_ratios {
                if !(r > 0.0 && r < 1.0) {
                    return Err(Error::HypothesisNotSatisfied(format!(
                        "similarity ratio {r} is outside (0, 1)"
                    )));
                }
                terms.push(EquationTerm {
                    weight: 1.0,
                    base: r,
                });
                pieces.push(format!("({})^s", fmt_num(r)));
            }
        }
        FamilyParams::Hybrid {
            n,
            iterate_ratios,
            similarity_ratios,
        } => {
            for &c in iterate_ratios {
                push_iter_term(c, *n, &mut terms, &mut pieces)?;
            }
            for &r in similarity_ratios {
                if !(r > 0.0 && r < 1.0) {
                    return Err(Error::HypothesisNotSatisfied(format!(
                        "similarity ratio {r} is outside (0, 1)"
                    )));
                }
                terms.push(EquationTerm {
                    weight: 1.0,
                    base: r,
                });
                pieces.push(format!("({})^s", fmt_num(r)));
            }
        }
        FamilyParams::KIterate { k, iterate_ratios } => {
            for &c in iterate_ratios {
                push_iter_term(c, *k, &mut terms, &mut pieces)?;
            }
        }
        FamilyParams::OverlapDeclared {
            k,
            iterate_ratios,
            overlaps,
        } => {
            for &c in iterate_ratios {
                push_iter_term(c, *k, &mut terms, &mut pieces)?;
            }
            for &(q, p) in overlaps {
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::HypothesisNotSatisfied(format!(
                        "overlap scale {p} is outside (0, 1)"
                    )));
                }
                // Multiplicity 1 means the copy is counted once already:
                // zero correction, term dropped.
                if q >= 2 {
                    terms.push(EquationTerm {
                        weight: -((q - 1) as f64),
                        base: p,
                    });
                    pieces.push(format!("- {}*({})^s", q - 1, fmt_num(p)));
                }
            }
        }
    }

    let description = format!(
        "{} = 1",
        pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if i == 0 || p.starts_with('-') {
                    p.clone()
                } else {
                    format!("+ {p}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    );

    Ok(DimensionEquation {
        terms,
        family: report.family,
        description,
    })
}

/// Natural-measure selection probabilities for the system's maps, one per
/// map in system order, evaluated at the solved dimension `s`.
///
/// The invariant measure that realizes the dimension assigns each
/// first-level image `fᵢ(E)` exactly its own term of the dimension
/// equation — `c^{s/n}` for an iterate-similar map, `rᵢˢ` for a
/// similarity — which is why the terms sum to 1 for the disjoint-image
/// families. Overlap-corrected systems renormalize the per-map terms
/// (their raw sum exceeds 1 by the declared double counting).
///
/// Sampling the chaos game with these weights
/// ([`crate::attractor::chaos_game_weighted`]) draws from the natural
/// measure, whose local dimension matches the attractor's everywhere;
/// uniform selection instead starves every region whose coding favors the
/// slowly-contracting maps, which breaks sup-scale diagnostics such as
/// pixel connectivity no matter how many points are drawn.
pub fn natural_weights(report: &ClassificationReport, s: f64) -> Result<Vec<f64>> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::HypothesisNotSatisfied(format!(
            "natural weights need a positive dimension, got {s}"
        )));
    }
    let params = match (&report.family, &report.params) {
        (Family::Unclassified, _) => {
            return Err(Error::Unclassified {
                notes: report.guard_notes.clone(),
            });
        }
        (_, Some(p)) => p,
        (fam, None) => {
            return Err(Error::HypothesisNotSatisfied(format!(
                "family {fam:?} carries no parameters; cannot derive weights"
            )));
        }
    };
    let n_maps = report.similarity.len();
    let is_sim: Vec<bool> = report.similarity.iter().map(|t| t.is_similarity).collect();
    let mut weights = vec![0.0f64; n_maps];

    match params {
        FamilyParams::AlignedGn {
            n,
            c,
            similarity_ratios,
        } => {
            let f_pos = is_sim.iter().position(|&sim| !sim).unwrap_or(0);
            weights[f_pos] = c.powf(s / *n as f64);
            let mut ratios = similarity_ratios.iter();
            for (i, w) in weights.iter_mut().enumerate() {
                if i != f_pos {
                    let r = ratios.next().ok_or_else(|| {
                        Error::HypothesisNotSatisfied(
                            "fewer similarity ratios than similarity maps".to_string(),
                        )
                    })?;
                    *w = r.powf(s);
                }
            }
        }
        FamilyParams::KIterate { k, iterate_ratios }
        | FamilyParams::OverlapDeclared {
            k, iterate_ratios, ..
        } => {
            if iterate_ratios.len() != n_maps {
                return Err(Error::HypothesisNotSatisfied(
                    "one iterate ratio per map is required".to_string(),
                ));
            }
            for (w, c) in weights.iter_mut().zip(iterate_ratios) {
                *w = c.powf(s / *k as f64);
            }
        }
        FamilyParams::Hybrid {
            n,
            iterate_ratios,
            similarity_ratios,
        } => {
            let mut iters = iterate_ratios.iter();
            let mut sims = similarity_ratios.iter();
            for (w, &sim) in weights.iter_mut().zip(&is_sim) {
                let next = if sim { sims.next() } else { iters.next() };
                let v = next.ok_or_else(|| {
                    Error::HypothesisNotSatisfied(
                        "ratio lists do not cover every map".to_string(),
                    )
                })?;
                *w = if sim { v.powf(s) } else { v.powf(s / *n as f64) };
            }
        }
    }

    let total: f64 = weights.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::HypothesisNotSatisfied(format!(
            "selection weights sum to {total}"
        )));
    }
    for w in &mut weights {
        *w /= total;
    }
    Ok(weights)
}

/// Evaluates `Σ wᵢ·bᵢˢ` with compensated (Neumaier) summation.
pub fn eval_lhs(equation: &DimensionEquation, s: f64) -> f64 {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for term in &equation.terms {
        let value = term.weight * term.base.powf(s);
        let t = sum + value;
        if sum.abs() >= value.abs() {
            compensation += (sum - t) + value;
        } else {
            compensation += (value - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

/// Solves `Σ wᵢ·bᵢˢ = 1` for `s ∈ [0, ambient_dim]`.
///
/// The domain is scanned on a fixed grid for sign changes of the defect
/// `F(s) = Σ wᵢ·bᵢˢ − 1`; each bracket is bisected to width 1e−14. Zero
/// roots and multiple roots are both surfaced as errors, never silently
/// resolved. Note the scan cannot separate roots closer than the grid step.
pub fn solve_dimension(
    equation: &DimensionEquation,
    ambient_dim: usize,
) -> Result<DimensionResult> {
    if equation.terms.is_empty() {
        return Err(Error::RootFailure(
            "the equation has no terms".to_string(),
        ));
    }
    let hi = ambient_dim as f64;
    let defect = |s: f64| eval_lhs(equation, s) - 1.0;

    let steps = (hi / tolerances::SCAN_STEP).ceil() as usize;
    let grid = |i: usize| (i as f64 / steps as f64) * hi;

    // Collect candidate roots: exact grid hits and sign-change brackets.
    #[derive(Clone, Copy)]
    struct Root {
        s: f64,
        residual: f64,
        bracket: (f64, f64),
        iterations: usize,
    }
    let mut roots: Vec<Root> = Vec::new();
    let cell = hi / steps as f64;
    let push_root = |r: Root, roots: &mut Vec<Root>| {
        // Merge candidates the scan sees twice (an exact hit next to the
        // bracket that produced it).
        if let Some(last) = roots.last() {
            if (last.s - r.s).abs() <= 0.5 * cell {
                if r.residual < last.residual {
                    *roots.last_mut().expect("non-empty") = r;
                }
                return;
            }
        }
        roots.push(r);
    };

    let mut prev_s = grid(0);
    let mut prev_f = defect(prev_s);
    if prev_f.abs() <= tolerances::ROOT_RESIDUAL {
        push_root(
            Root {
                s: prev_s,
                residual: prev_f.abs(),
                bracket: (prev_s, prev_s),
                iterations: 0,
            },
            &mut roots,
        );
    }
    for i in 1..=steps {
        let s = grid(i);
        let f = defect(s);
        if f.abs() <= tolerances::ROOT_RESIDUAL {
            push_root(
                Root {
                    s,
                    residual: f.abs(),
                    bracket: (s, s),
                    iterations: 0,
                },
                &mut roots,
            );
        } else if prev_f.abs() > tolerances::ROOT_RESIDUAL && (prev_f > 0.0) != (f > 0.0) {
            let (mut lo_s, mut hi_s) = (prev_s, s);
            let (mut lo_f, _hi_f) = (prev_f, f);
            let mut iterations = 0usize;
            while hi_s - lo_s > tolerances::ROOT_BRACKET && iterations < 200 {
                let mid = 0.5 * (lo_s + hi_s);
                let mf = defect(mid);
                iterations += 1;
                if mf == 0.0 {
                    lo_s = mid;
                    hi_s = mid;
                    break;
                }
                if (mf > 0.0) == (lo_f > 0.0) {
                    lo_s = mid;
                    lo_f = mf;
                } else {
                    hi_s = mid;
                }
            }
            let root_s = 0.5 * (lo_s + hi_s);
            push_root(
                Root {
                    s: root_s,
                    residual: defect(root_s).abs(),
                    bracket: (lo_s, hi_s),
                    iterations,
                },
                &mut roots,
            );
        }
        prev_s = s;
        prev_f = f;
    }

    match roots.len() {
        0 => Err(Error::RootFailure(format!(
            "no root in [0, {ambient_dim}]: the equation never crosses 1 on the domain"
        ))),
        1 => {
            let root = roots[0];
            if root.residual > tolerances::ROOT_RESIDUAL {
                return Err(Error::RootFailure(format!(
                    "root at s = {} has residual {:.3e} above the acceptance threshold",
                    root.s, root.residual
                )));
            }
            let uniqueness_note = if equation.terms.iter().all(|t| t.weight > 0.0) {
                "all weights positive: the left-hand side is strictly decreasing in s, \
                 so the root is unique on [0, ∞)"
                    .to_string()
            } else {
                format!(
                    "signed weights: uniqueness established by an exhaustive sign scan \
                     of [0, {ambient_dim}] at step {}",
                    tolerances::SCAN_STEP
                )
            };
            Ok(DimensionResult {
                s: root.s,
                residual: root.residual,
                bracket: root.bracket,
                iterations: root.iterations,
                uniqueness_note,
            })
        }
        n => {
            let list = roots
                .iter()
                .map(|r| format!("{:.9}", r.s))
                .collect::<Vec<_>>()
                .join(", ");
            Err(Error::RootFailure(format!(
                "multiple roots ({n}) in [0, {ambient_dim}]: s ≈ {list}; refusing to pick one"
            )))
        }
    }
}

/// Continued-fraction rational approximation `p/q` of `x ≥ 0` with
/// `q ≤ max_den` and `|x − p/q| ≤ tol`; `None` when no such fraction exists.
fn rational_approx(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    // Convergents p/q of the continued fraction of x.
    let (mut p0, mut q0, mut p1, mut q1) = (1u64, 0u64, 0u64, 1u64);
    let mut frac = x;
    for _ in 0..32 {
        let a = frac.floor();
        if a < 0.0 || a > u64::MAX as f64 / 2.0 {
            return None;
        }
        let a_int = a as u64;
        let p2 = a_int.checked_mul(p0)?.checked_add(p1)?;
        let q2 = a_int.checked_mul(q0)?.checked_add(q1)?;
        if q2 > max_den {
            return None;
        }
        if (x - p2 as f64 / q2 as f64).abs() <= tol {
            return Some((p2, q2));
        }
        p1 = p0;
        q1 = q0;
        p0 = p2;
        q0 = q2;
        let rem = frac - a;
        if rem.abs() < 1e-15 {
            return None;
        }
        frac = 1.0 / rem;
    }
    None
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Attempts to collapse the equation into a polynomial in
/// `u = base^{s/D}` where `base` is the largest base and `D` the least
/// common multiple of the recognized exponent denominators.
///
/// Succeeds only when every base is a rational power of the reference base
/// (denominators ≤ 12 at 1e−9 recognition tolerance) and the polynomial has
/// exactly one root in (0, 1); returns `None` otherwise.
pub fn closed_form_check(equation: &DimensionEquation) -> Option<ClosedForm> {
    if equation.terms.is_empty() {
        return None;
    }
    let base = equation
        .terms
        .iter()
        .map(|t| t.base)
        .fold(0.0f64, f64::max);
    let log_base = base.ln();

    // Recognize each exponent ln(b_i)/ln(base) as p/q.
    let mut fractions = Vec::with_capacity(equation.terms.len());
    for term in &equation.terms {
        let e = term.base.ln() / log_base;
        let (p, q) = rational_approx(
            e,
            u64::from(tolerances::RATIONAL_MAX_DENOMINATOR),
            tolerances::RATIONAL_RECOGNITION,
        )?;
        fractions.push((p, q));
    }
    let d = fractions
        .iter()
        .fold(1u64, |acc, &(_, q)| acc / gcd(acc, q) * q);

    // Accumulate the polynomial Σ w_i·u^{p_i·D/q_i} − 1.
    let mut coeffs: Vec<f64> = vec![0.0; MAX_POLY_EXPONENT + 1];
    for (term, &(p, q)) in equation.terms.iter().zip(&fractions) {
        let exponent = (p * (d / q)) as usize;
        if exponent == 0 || exponent > MAX_POLY_EXPONENT {
            return None;
        }
        coeffs[exponent] += term.weight;
    }
    coeffs[0] = -1.0;

    let poly = |u: f64| -> f64 {
        // Horner evaluation of the dense coefficient vector.
        let mut acc = 0.0;
        for &c in coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    };
    let dpoly = |u: f64| -> f64 {
        let mut acc = 0.0;
        for (k, &c) in coeffs.iter().enumerate().rev() {
            if k >= 1 {
                acc = acc * u + c * k as f64;
            }
        }
        acc
    };

    // Exactly one root in the open interval (0, 1).
    let samples = 4096;
    let mut roots: Vec<(f64, f64)> = Vec::new();
    let mut prev_u = 1.0 / samples as f64 * 0.5;
    let mut prev_p = poly(prev_u);
    for i in 1..samples {
        let u = (i as f64 + 0.5) / samples as f64;
        let pv = poly(u);
        if prev_p == 0.0 {
            roots.push((prev_u, prev_u));
        } else if (prev_p > 0.0) != (pv > 0.0) {
            roots.push((prev_u, u));
        }
        prev_u = u;
        prev_p = pv;
    }
    if roots.len() != 1 {
        return None;
    }

    // Bisect, then polish with Newton.
    let (mut lo, mut hi) = roots[0];
    let mut lo_p = poly(lo);
    for _ in 0..200 {
        if hi - lo <= 1e-15 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let mp = poly(mid);
        if mp == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (mp > 0.0) == (lo_p > 0.0) {
            lo = mid;
            lo_p = mp;
        } else {
            hi = mid;
        }
    }
    let mut u = 0.5 * (lo + hi);
    for _ in 0..4 {
        let dp = dpoly(u);
        if dp.abs() < 1e-300 {
            break;
        }
        let step = poly(u) / dp;
        let next = u - step;
        if next > 0.0 && next < 1.0 {
            u = next;
        } else {
            break;
        }
    }

    let dimension = d as f64 * u.ln() / log_base;
    let coefficients: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0.0)
        .map(|(k, &c)| (k, c))
        .collect();
    Some(ClosedForm {
        base,
        substitution_order: d as usize,
        coefficients,
        root_u: u,
        dimension,
    })
}
