//! Central numeric tolerances.
//!
//! Every comparison threshold used by the library lives here so that the
//! precision contract is auditable in one place. Each constant documents
//! what it guards and why its magnitude is appropriate. Routines take no
//! ad-hoc epsilons; they import from this module.

/// Structural classification tolerance on matrix entries.
///
/// Used when deciding exact *algebraic shape* — whether a matrix is a
/// similarity (`AᵀA = r²I`), whether `A² = ±cI`, whether two maps commute,
/// whether an entry is zero. Inputs are user-supplied decimals and the
/// products involved are a handful of multiply-adds, so error is a small
/// multiple of machine epsilon scaled by the entries; `1e-9` leaves six
/// orders of headroom over that noise while still rejecting genuinely
/// non-conforming matrices, whose defects in every worked system are
/// `1e-2` or larger.
pub const STRUCTURAL: f64 = 1e-9;

/// Root-finding bracket width: bisection runs until the bracket is this
/// narrow. `f64` carries ~15-16 significant digits; dimensions live in
/// `[0, 8]`, so `1e-14` is close to the best representable resolution
/// without looping forever on non-representable roots.
pub const ROOT_BRACKET: f64 = 1e-14;

/// Maximum admissible residual `|F(s)|` at a reported root. A root
/// bracketed to [`ROOT_BRACKET`] on the monotone-in-practice equations
/// solved here leaves residuals near machine epsilon; `1e-12` flags any
/// solver malfunction while tolerating rounding in the exponential sums.
pub const ROOT_RESIDUAL: f64 = 1e-12;

/// Grid pitch of the coarse scan that brackets every sign change of a
/// dimension equation on `[0, m]`. Distinct roots of the exponential sums
/// arising from at most a few dozen terms are far wider apart than this;
/// the scan is the guard that proves uniqueness before bisection refines.
pub const SCAN_STEP: f64 = 1e-3;

/// Tolerance for recognising a rational exponent ratio when reducing an
/// equation to a polynomial. Continued-fraction convergents of a true
/// rational hit it exactly up to rounding; `1e-9` on the reconstruction
/// error separates genuine small-denominator rationals from
/// incommensurable ratios, which miss by `1e-3` or more at denominators
/// up to the cap.
pub const RATIONAL_RECOGNITION: f64 = 1e-9;

/// Largest denominator considered when recognising rational exponent
/// ratios. Polynomial reduction is a presentation nicety; degrees beyond
/// this are unreadable and the uniqueness guard no longer benefits.
pub const RATIONAL_MAX_DENOMINATOR: u32 = 12;

/// Relative tolerance for the separation-certificate verifier: projected
/// image intervals must sit inside the certified rectangle, and be
/// pairwise disjoint, within `CERT_VERIFY_REL` times the rectangle's edge
/// length. Sized for accumulated rounding in the projections; systems at
/// the touching boundary produce image intervals that abut *exactly*, so
/// the disjointness test accepts gaps down to `-CERT_VERIFY_REL · len`.
pub const CERT_VERIFY_REL: f64 = 1e-9;

/// Interval-coverage slack for projection subsystems: the union of the
/// projected images must cover the invariant interval up to this absolute
/// slack, which absorbs fixed-point iteration error on the interval
/// endpoints.
pub const COVERAGE_SLACK: f64 = 1e-9;

/// Iterations of the interval self-map used to converge on an invariant
/// interval. The map contracts endpoint error by the subsystem's ratio
/// (≤ 0.9 in practice), so 200 iterations reduce any initial bracket
/// below [`COVERAGE_SLACK`] with a wide margin.
pub const INTERVAL_ITERATIONS: usize = 200;

/// Operator-norm certification: compositions up to this word length are
/// searched for a uniform contraction bound.
pub const CONTRACTION_MAX_WORD: usize = 6;

/// Cap on the number of compositions examined during contraction
/// certification, guarding against combinatorial blowup on systems with
/// many maps.
pub const CONTRACTION_BUDGET: usize = 1_000_000;

/// Divergence guard for orbit iteration: any coordinate exceeding this
/// magnitude aborts the run as non-contractive in practice. Attractors of
/// certified systems stay within a ball of radius `max|t| / (1 - c)`,
/// orders of magnitude below this.
pub const ORBIT_DIVERGENCE: f64 = 1e9;

/// Points discarded from the start of a chaos-game orbit before sampling,
/// letting the orbit fall onto the attractor to within rendering
/// precision (contraction `0.9^200 ≈ 1e-9` even in the slowest case).
pub const ORBIT_BURN_IN: usize = 200;

/// Multiplier on mean nearest-neighbour spacing used when testing whether
/// a sampled point is reproduced inside another point cloud. `1.5×` the
/// mean spacing tolerates sampling noise while rejecting points that fall
/// in genuinely uncovered territory.
pub const CLOUD_MEMBERSHIP_FACTOR: f64 = 1.5;

/// Jacobi eigenvalue sweep threshold: off-diagonal mass below this ends
/// the iteration. Matrices here are at most 8×8 with entries `O(1)`, so
/// this is effectively convergence to machine precision.
pub const JACOBI_OFFDIAG: f64 = 1e-13;

/// Hard iteration cap for the Jacobi eigenvalue solver; 8×8 symmetric
/// matrices converge in a handful of sweeps, so hitting this indicates a
/// logic error rather than a hard input.
pub const JACOBI_MAX_SWEEPS: usize = 100;
