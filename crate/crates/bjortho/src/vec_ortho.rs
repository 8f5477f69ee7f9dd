//! Birkhoff-James orthogonality of vectors and its approximate variants.
//!
//! All predicates return a three-valued [`Verdict`] with a normalized margin.
//! Margins within [`MARGINAL_BAND`] of zero are classified `Marginal`:
//! boundary instances that floating point cannot adjudicate.

use crate::error::{BjError, Result};
use crate::linesearch::{minimize_convex, minimize_convex_onesided, Bracket, Side};
use crate::norms::{inner, norm, norm_axpy, norming_functional, pair, NormSpec, Vector};

/// Half-width of the margin band classified as `Marginal`.
pub const MARGINAL_BAND: f64 = 1e-7;

/// Approximation parameter, validated to 0 <= eps < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(0.0..1.0).contains(&value) {
            return Err(BjError::InvalidEpsilon(value));
        }
        Ok(Epsilon(value))
    }

    pub const ZERO: Epsilon = Epsilon(0.0);

    pub fn value(&self) -> f64 {
        self.0
    }

    /// sqrt(1 - eps^2), the threshold shrink factor.
    pub fn shrink(&self) -> f64 {
        (1.0 - self.0 * self.0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Marginal,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::Holds => write!(f, "Holds"),
            Outcome::Fails => write!(f, "Fails"),
            Outcome::Marginal => write!(f, "Marginal"),
        }
    }
}

/// A predicate decision with its signed normalized margin and any witness of
/// failure or attainment that the computation produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub margin: f64,
    pub witness_lambda: Option<f64>,
    pub witness_vec: Option<Vector>,
    /// Set when an approximate operator-norm path fed this verdict.
    pub approximate: bool,
}

impl Verdict {
    /// Classifies a margin against the marginal band.
    pub fn from_margin(margin: f64) -> Verdict {
        let outcome = if margin.abs() <= MARGINAL_BAND {
            Outcome::Marginal
        } else if margin > 0.0 {
            Outcome::Holds
        } else {
            Outcome::Fails
        };
        Verdict {
            outcome,
            margin,
            witness_lambda: None,
            witness_vec: None,
            approximate: false,
        }
    }

    /// Degenerate-input convention: zero vectors (and the zero operator) make
    /// every predicate hold. Reported at full unit margin so the outcome is
    /// `Holds`, not `Marginal`.
    pub fn trivial_holds() -> Verdict {
        Verdict {
            outcome: Outcome::Holds,
            margin: 1.0,
            witness_lambda: None,
            witness_vec: None,
            approximate: false,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Verdict {
        self.witness_lambda = Some(lambda);
        self
    }

    pub fn with_vec(mut self, v: Vector) -> Verdict {
        self.witness_vec = Some(v);
        self
    }

    pub fn with_approximate(mut self, flag: bool) -> Verdict {
        self.approximate = flag;
        self
    }

    /// True unless the predicate robustly fails (margin below the band).
    pub fn is_satisfied(&self) -> bool {
        self.outcome != Outcome::Fails
    }
}

// ---------------------------------------------------------------------------
// search-bound lemmas
//
// Each bound guarantees the defining inequality holds identically outside the
// returned range, by the reverse triangle inequality. Derivations:
//   exact:      |λ|‖y‖ >= 2‖x‖          ⇒ ‖x+λy‖ >= |λ|‖y‖-‖x‖ >= ‖x‖
//   threshold:  |λ|‖y‖ >= (1+s)‖x‖      ⇒ ‖x+λy‖ >= s‖x‖        (s = sqrt(1-eps^2))
//   quadratic:  with t = |λ|‖y‖, (t-‖x‖)^2 >= ‖x‖^2 - 2eps‖x‖t ⇔ t(t-2(1-eps)‖x‖) >= 0,
//               so t >= 2(1-eps)‖x‖ suffices.
// ---------------------------------------------------------------------------

/// λ-half-width outside which ‖x+λy‖ >= ‖x‖ automatically.
pub fn bj_search_halfwidth(xnorm: f64, ynorm: f64) -> f64 {
    2.0 * xnorm / ynorm
}

/// λ-half-width outside which ‖x+λy‖ >= sqrt(1-eps^2)‖x‖ automatically.
pub fn dragomir_search_halfwidth(xnorm: f64, ynorm: f64, eps: Epsilon) -> f64 {
    (1.0 + eps.shrink()) * xnorm / ynorm
}

/// Per-side λ-extent outside which ‖x+λy‖^2 >= ‖x‖^2 - 2eps‖x‖‖λy‖ automatically.
pub fn chmielinski_search_extent(xnorm: f64, ynorm: f64, eps: Epsilon) -> f64 {
    2.0 * (1.0 - eps.value()) * xnorm / ynorm
}

fn require_same_space(x: &Vector, y: &Vector) -> Result<()> {
    if x.space != y.space {
        return Err(BjError::SpaceMismatch);
    }
    Ok(())
}

pub(crate) fn norm_scale(xnorm: f64) -> f64 {
    xnorm.max(1.0)
}

// ---------------------------------------------------------------------------
// exact orthogonality and cones
// ---------------------------------------------------------------------------

/// x ⊥_B y: ‖x + λy‖ >= ‖x‖ for every real λ.
///
/// The inequality is tight at λ = 0, so satisfied instances have margin 0 and
/// are reported `Marginal`; only failures can be robust.
pub fn is_bj_orthogonal(x: &Vector, y: &Vector) -> Result<Verdict> {
    require_same_space(x, y)?;
    if x.is_zero() || y.is_zero() {
        return Ok(Verdict::trivial_holds());
    }
    let (xn, yn) = (x.norm(), y.norm());
    let w = bj_search_halfwidth(xn, yn);
    let f = |l: f64| norm_axpy(&x.space, &x.coords, l, &y.coords);
    debug_assert!(f(w) >= xn - 1e-9 * norm_scale(xn), "search bound violated");
    debug_assert!(f(-w) >= xn - 1e-9 * norm_scale(xn), "search bound violated");
    let r = minimize_convex(f, Bracket::new(-w, w)?, 1e-10)?;
    let minval = r.minval.min(xn); // λ = 0 is admissible, so the min never exceeds ‖x‖
    debug_assert!(minval <= xn + 1e-12 * norm_scale(xn));
    let margin = (minval - xn) / norm_scale(xn);
    Ok(Verdict::from_margin(margin).with_lambda(r.argmin))
}

fn one_sided_cone(x: &Vector, y: &Vector, side: Side, eps: Epsilon) -> Result<Verdict> {
    require_same_space(x, y)?;
    if x.is_zero() || y.is_zero() {
        return Ok(Verdict::trivial_holds());
    }
    let (xn, yn) = (x.norm(), y.norm());
    let threshold = eps.shrink() * xn;
    let extent = dragomir_search_halfwidth(xn, yn, eps);
    let f = |l: f64| norm_axpy(&x.space, &x.coords, l, &y.coords);
    let edge = match side {
        Side::NonNegative => extent,
        Side::NonPositive => -extent,
    };
    debug_assert!(f(edge) >= threshold - 1e-9 * norm_scale(xn));
    let r = minimize_convex_onesided(f, side, extent, 1e-10)?;
    let minval = r.minval.min(xn); // λ = 0 gives exactly ‖x‖
    let margin = (minval - threshold) / norm_scale(xn);
    Ok(Verdict::from_margin(margin).with_lambda(r.argmin))
}

/// y ∈ x⁺: ‖x + λy‖ >= ‖x‖ for all λ >= 0.
pub fn in_plus_cone(x: &Vector, y: &Vector) -> Result<Verdict> {
    one_sided_cone(x, y, Side::NonNegative, Epsilon::ZERO)
}

/// y ∈ x⁻: ‖x + λy‖ >= ‖x‖ for all λ <= 0.
pub fn in_minus_cone(x: &Vector, y: &Vector) -> Result<Verdict> {
    one_sided_cone(x, y, Side::NonPositive, Epsilon::ZERO)
}

/// y ∈ x^{+(eps)}: ‖x + λy‖ >= sqrt(1-eps^2)‖x‖ for all λ >= 0.
pub fn in_plus_cone_eps(x: &Vector, y: &Vector, eps: Epsilon) -> Result<Verdict> {
    one_sided_cone(x, y, Side::NonNegative, eps)
}

/// y ∈ x^{-(eps)}: ‖x + λy‖ >= sqrt(1-eps^2)‖x‖ for all λ <= 0.
pub fn in_minus_cone_eps(x: &Vector, y: &Vector, eps: Epsilon) -> Result<Verdict> {
    one_sided_cone(x, y, Side::NonPositive, eps)
}

/// x ⊥_D^eps y: ‖x + λy‖ >= sqrt(1-eps^2)‖x‖ for every real λ.
pub fn is_dragomir_orthogonal(x: &Vector, y: &Vector, eps: Epsilon) -> Result<Verdict> {
    require_same_space(x, y)?;
    if x.is_zero() || y.is_zero() {
        return Ok(Verdict::trivial_holds());
    }
    let (xn, yn) = (x.norm(), y.norm());
    let threshold = eps.shrink() * xn;
    let w = dragomir_search_halfwidth(xn, yn, eps);
    let f = |l: f64| norm_axpy(&x.space, &x.coords, l, &y.coords);
    debug_assert!(f(w) >= threshold - 1e-9 * norm_scale(xn));
    debug_assert!(f(-w) >= threshold - 1e-9 * norm_scale(xn));
    let r = minimize_convex(f, Bracket::new(-w, w)?, 1e-10)?;
    let minval = r.minval.min(xn);
    let margin = (minval - threshold) / norm_scale(xn);
    Ok(Verdict::from_margin(margin).with_lambda(r.argmin))
}

// ---------------------------------------------------------------------------
// the quadratic variant
// ---------------------------------------------------------------------------

/// One-sided slope of λ ↦ ‖x + λy‖² at λ = 0, from chord quotients at small λ
/// with one Richardson step. Falls back to the raw chord when the two
/// extrapolations disagree (a kink inside the stencil).
fn sq_slope_at_zero(space: &NormSpec, x: &[f64], y: &[f64], side: Side) -> f64 {
    let a = norm(space, x);
    let b = norm(space, y);
    if b == 0.0 {
        return 0.0;
    }
    let r = a.max(1e-300) / b;
    let base = 1e-7 * r;
    let sgn = match side {
        Side::NonNegative => 1.0,
        Side::NonPositive => -1.0,
    };
    let phi0 = a * a;
    let q = |l: f64| {
        let n = norm_axpy(space, x, l, y);
        (n * n - phi0) / l
    };
    let q1 = q(sgn * base);
    let q2 = q(sgn * 2.0 * base);
    let q4 = q(sgn * 4.0 * base);
    let e1 = 2.0 * q1 - q2;
    let e2 = 2.0 * q2 - q4;
    let tol = 1e-7 * (a * b).max(1e-300);
    if (e1 - e2).abs() <= tol {
        e1
    } else {
        q1 // kink suspected: the chord is a safe-side estimate of the limit
    }
}

/// Per-side slack of the quadratic inequality, normalized so that in an inner
/// product space it equals eps‖x‖‖y‖ ∓ ⟨x,y⟩ over max(‖x‖‖y‖, 1).
///
/// ‖x+λy‖² - ‖x‖² + 2eps‖x‖‖y‖|λ| >= 0 on a half-line iff the corresponding
/// slack is nonnegative, because the per-|λ| quotient of the left side is
/// monotone away from zero.
pub fn chmielinski_slacks(x: &Vector, y: &Vector, eps: Epsilon) -> Result<(f64, f64)> {
    require_same_space(x, y)?;
    let (xn, yn) = (x.norm(), y.norm());
    chmielinski_slacks_scaled(x, y, eps, xn, yn)
}

/// Same slacks with the eps-term scales supplied by the caller; used by the
/// operator-level checks where the scales are ‖T‖ and ‖A‖ rather than the
/// norms of the image vectors. Requires ‖x‖ ≈ xscale for the quotient form
/// to be tight at zero.
pub fn chmielinski_slacks_scaled(
    x: &Vector,
    y: &Vector,
    eps: Epsilon,
    xscale: f64,
    yscale: f64,
) -> Result<(f64, f64)> {
    require_same_space(x, y)?;
    let eps_term = 2.0 * eps.value() * xscale * yscale;
    let scale = 2.0 * (xscale * yscale).max(1.0);
    let d_plus = sq_slope_at_zero(&x.space, &x.coords, &y.coords, Side::NonNegative);
    let d_minus = sq_slope_at_zero(&x.space, &x.coords, &y.coords, Side::NonPositive);
    Ok(((d_plus + eps_term) / scale, (-d_minus + eps_term) / scale))
}

/// x ⊥_B^eps y: ‖x + λy‖² >= ‖x‖² - 2eps‖x‖‖λy‖ for every real λ.
///
/// The defining inequality is tight at λ = 0, so the margin is the smaller of
/// the two per-side slacks of the per-|λ| quotient rather than the raw
/// minimum (which is pinned to zero). In an inner product space this margin
/// coincides with the one reported by [`is_ip_approx_orthogonal`].
pub fn is_chmielinski_orthogonal(x: &Vector, y: &Vector, eps: Epsilon) -> Result<Verdict> {
    require_same_space(x, y)?;
    if x.is_zero() || y.is_zero() {
        return Ok(Verdict::trivial_holds());
    }
    let (xn, yn) = (x.norm(), y.norm());
    let (c_plus, c_minus) = chmielinski_slacks(x, y, eps)?;
    let margin = c_plus.min(c_minus);
    let mut verdict = Verdict::from_margin(margin);

    // one-sided minimization of g(λ) = ‖x+λy‖² - ‖x‖² + 2eps‖x‖‖y‖|λ| supplies
    // the failure witness; outside the derived extent g >= 0 identically
    let extent = chmielinski_search_extent(xn, yn, eps);
    if extent > 0.0 && verdict.outcome == Outcome::Fails {
        let phi0 = xn * xn;
        let g = |l: f64| {
            let n = norm_axpy(&x.space, &x.coords, l, &y.coords);
            n * n - phi0 + 2.0 * eps.value() * xn * yn * l.abs()
        };
        debug_assert!(g(extent) >= -1e-9 * phi0.max(1.0), "search bound violated");
        debug_assert!(g(-extent) >= -1e-9 * phi0.max(1.0), "search bound violated");
        let side = if c_plus <= c_minus {
            Side::NonNegative
        } else {
            Side::NonPositive
        };
        let r = minimize_convex_onesided(g, side, extent, 1e-10)?;
        debug_assert!(r.minval <= 1e-12 * phi0.max(1.0));
        verdict = verdict.with_lambda(r.argmin);
    }
    Ok(verdict)
}

/// x ⊥^eps y in an inner product space: |⟨x,y⟩| <= eps‖x‖‖y‖. Requires p = 2.
pub fn is_ip_approx_orthogonal(x: &Vector, y: &Vector, eps: Epsilon) -> Result<Verdict> {
    require_same_space(x, y)?;
    if x.is_zero() || y.is_zero() {
        // inner() still validates the space before the convention applies
        inner(x, y)?;
        return Ok(Verdict::trivial_holds());
    }
    let ip = inner(x, y)?;
    let (xn, yn) = (x.norm(), y.norm());
    let margin = (eps.value() * xn * yn - ip.abs()) / (xn * yn).max(1.0);
    Ok(Verdict::from_margin(margin))
}

// ---------------------------------------------------------------------------
// witness decomposition
// ---------------------------------------------------------------------------

/// Checks a candidate witness: x ⊥_B z within the band and ‖z-y‖ <= eps‖y‖
/// plus band slack.
fn witness_ok(x: &Vector, y: &Vector, z: &Vector, eps: Epsilon) -> bool {
    let dist = norm_axpy(&y.space, &z.coords, -1.0, &y.coords);
    if dist > eps.value() * y.norm() + MARGINAL_BAND * norm_scale(y.norm()) {
        return false;
    }
    match is_bj_orthogonal(x, z) {
        Ok(v) => v.margin >= -MARGINAL_BAND,
        Err(_) => false,
    }
}

/// Searches the span of x and y for z with x ⊥_B z and ‖z - y‖ <= eps‖y‖.
///
/// Such a z certifies x ⊥_B^eps y. Stage one scans z = y + t·x, using the
/// norming functional when the norm is smooth and a monotone bisection on the
/// one-sided cone margins otherwise. Stage two falls back to a grid over the
/// (α, β) plane of z = αx + βy with local refinement. Returns None when no
/// candidate passes the final validation.
pub fn find_bj_witness(x: &Vector, y: &Vector, eps: Epsilon) -> Result<Option<Vector>> {
    require_same_space(x, y)?;
    if x.is_zero() {
        return Err(BjError::ZeroVector("witness search".into()));
    }
    if y.is_zero() {
        return Err(BjError::ZeroVector("witness search".into()));
    }
    let (xn, yn) = (x.norm(), y.norm());
    let t_max = eps.value() * yn / xn;

    // stage one: z = y + t x, |t| <= t_max
    if let Some(z) = stage_one(x, y, eps, t_max)? {
        return Ok(Some(z));
    }
    // stage two: grid over z = αx + βy near (0, 1)
    stage_two(x, y, eps, xn, yn)
}

fn stage_one(x: &Vector, y: &Vector, eps: Epsilon, t_max: f64) -> Result<Option<Vector>> {
    let smooth = matches!(x.space.p, crate::norms::Exponent::Finite(p) if p > 1.0);
    if smooth {
        // f(y + t x) = f(y) + t‖x‖ vanishes at exactly one t
        let f = norming_functional(x)?;
        let t_star = -pair(&f, y) / x.norm();
        if t_star.abs() <= t_max * (1.0 + 1e-9) + 1e-15 {
            let t = t_star.clamp(-t_max, t_max);
            let z = y.axpy(t, x);
            if witness_ok(x, y, &z, eps) {
                return Ok(Some(z));
            }
        }
        return Ok(None);
    }
    if t_max == 0.0 {
        let z = y.clone();
        return Ok(if witness_ok(x, y, &z, eps) {
            Some(z)
        } else {
            None
        });
    }

    // plus-cone membership of y + t x is monotone in t: false below a unique
    // boundary, true above. Minus-cone membership mirrors it.
    let plus_sat = |t: f64| -> Result<bool> {
        Ok(in_plus_cone(x, &y.axpy(t, x))?.margin >= -MARGINAL_BAND)
    };
    let minus_sat = |t: f64| -> Result<bool> {
        Ok(in_minus_cone(x, &y.axpy(t, x))?.margin >= -MARGINAL_BAND)
    };

    if !plus_sat(t_max)? || !minus_sat(-t_max)? {
        return Ok(None); // the feasible t-interval misses [-t_max, t_max]
    }
    let t_plus = if plus_sat(-t_max)? {
        -t_max
    } else {
        bisect_boundary(-t_max, t_max, &plus_sat, true)?
    };
    let t_minus = if minus_sat(t_max)? {
        t_max
    } else {
        bisect_boundary(-t_max, t_max, &minus_sat, false)?
    };
    if t_plus > t_minus + 1e-12 * t_max.max(1.0) {
        return Ok(None);
    }
    let mid = 0.5 * (t_plus.max(-t_max) + t_minus.min(t_max));
    for t in [mid, t_plus, t_minus] {
        let t = t.clamp(-t_max, t_max);
        let z = y.axpy(t, x);
        if witness_ok(x, y, &z, eps) {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// Bisects [lo, hi] for the boundary of a monotone boolean. `rising` means
/// false below the boundary and true above; falling is the mirror image.
fn bisect_boundary<F>(mut lo: f64, mut hi: f64, sat: &F, rising: bool) -> Result<f64>
where
    F: Fn(f64) -> Result<bool>,
{
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let s = sat(mid)?;
        if s == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(if rising { hi } else { lo })
}

fn stage_two(
    x: &Vector,
    y: &Vector,
    eps: Epsilon,
    xn: f64,
    yn: f64,
) -> Result<Option<Vector>> {
    let w = 2.0 * eps.value() * yn / xn.min(yn);
    if w == 0.0 {
        return Ok(None);
    }
    let bj_margin = |alpha: f64, beta: f64| -> Result<Option<(f64, Vector)>> {
        let z = x.scaled(alpha).axpy(beta, y);
        let dist = norm_axpy(&y.space, &z.coords, -1.0, &y.coords);
        if dist > eps.value() * yn + MARGINAL_BAND * norm_scale(yn) {
            return Ok(None);
        }
        if z.is_zero() {
            return Ok(None);
        }
        Ok(Some((is_bj_orthogonal(x, &z)?.margin, z)))
    };

    let n = 201usize;
    let mut best: Option<(f64, f64, f64)> = None; // (margin, alpha, beta)
    for i in 0..n {
        let alpha = -w + 2.0 * w * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let beta = 1.0 - w + 2.0 * w * j as f64 / (n - 1) as f64;
            if let Some((m, _)) = bj_margin(alpha, beta)? {
                if best.map_or(true, |(bm, _, _)| m > bm) {
                    best = Some((m, alpha, beta));
                }
            }
        }
    }
    let Some((_, mut alpha, mut beta)) = best else {
        return Ok(None);
    };

    // pattern-search refinement of the best cell
    let mut step = 2.0 * w / (n - 1) as f64;
    let mut cur = bj_margin(alpha, beta)?.map(|(m, _)| m).unwrap_or(-1.0);
    for _ in 0..40 {
        let mut moved = false;
        for (da, db) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            if let Some((m, _)) = bj_margin(alpha + da, beta + db)? {
                if m > cur {
                    cur = m;
                    alpha += da;
                    beta += db;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
            if step < 1e-13 * w {
                break;
            }
        }
    }
    let z = x.scaled(alpha).axpy(beta, y);
    Ok(if witness_ok(x, y, &z, eps) {
        Some(z)
    } else {
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::Exponent;

    fn lp(dim: usize, p: f64) -> NormSpec {
        NormSpec::lp(dim, Exponent::finite(p).unwrap()).unwrap()
    }

    fn linf(dim: usize) -> NormSpec {
        NormSpec::lp(dim, Exponent::Infinity).unwrap()
    }

    fn vec2(s: &NormSpec, c: [f64; 2]) -> Vector {
        Vector::new(c.to_vec(), s.clone()).unwrap()
    }

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    #[test]
    fn epsilon_validation() {
        assert!(Epsilon::new(0.0).is_ok());
        assert!(Epsilon::new(0.999).is_ok());
        assert!(Epsilon::new(1.0).is_err());
        assert!(Epsilon::new(-0.1).is_err());
        assert!(Epsilon::new(f64::NAN).is_err());
    }

    #[test]
    fn bj_euclidean_axes_marginal_at_zero_margin() {
        let s = NormSpec::euclidean(2);
        let v = is_bj_orthogonal(&vec2(&s, [1.0, 0.0]), &vec2(&s, [0.0, 1.0])).unwrap();
        assert_eq!(v.outcome, Outcome::Marginal);
        assert!(v.margin >= -1e-12 && v.margin <= 0.0 + 1e-12, "{}", v.margin);
    }

    #[test]
    fn bj_l1_boundary_pair_satisfied() {
        let s = lp(2, 1.0);
        let v = is_bj_orthogonal(&vec2(&s, [1.0, 0.0]), &vec2(&s, [1.0, 1.0])).unwrap();
        assert!(v.is_satisfied());
        assert!(v.margin.abs() <= MARGINAL_BAND);
    }

    #[test]
    fn bj_collinear_fails_with_witness() {
        let s = NormSpec::euclidean(2);
        let v = is_bj_orthogonal(&vec2(&s, [1.0, 0.0]), &vec2(&s, [1.0, 0.0])).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        assert!((v.margin + 1.0).abs() < 1e-8);
        assert!((v.witness_lambda.unwrap() + 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_vector_conventions() {
        let s = NormSpec::euclidean(2);
        let z = vec2(&s, [0.0, 0.0]);
        let u = vec2(&s, [1.0, 0.0]);
        for v in [
            is_bj_orthogonal(&z, &u).unwrap(),
            is_bj_orthogonal(&u, &z).unwrap(),
            is_dragomir_orthogonal(&z, &u, eps(0.3)).unwrap(),
            is_chmielinski_orthogonal(&u, &z, eps(0.3)).unwrap(),
            in_plus_cone(&z, &u).unwrap(),
            is_ip_approx_orthogonal(&u, &z, eps(0.3)).unwrap(),
        ] {
            assert_eq!(v.outcome, Outcome::Holds);
            assert!(v.margin > MARGINAL_BAND);
        }
    }

    #[test]
    fn plus_cone_examples() {
        let s1 = lp(2, 1.0);
        let v = in_plus_cone(&vec2(&s1, [1.0, 0.0]), &vec2(&s1, [1.0, 1.0])).unwrap();
        assert!(v.is_satisfied());

        let s2 = NormSpec::euclidean(2);
        let v = in_plus_cone(&vec2(&s2, [1.0, 0.0]), &vec2(&s2, [1.0, 0.0])).unwrap();
        assert!(v.is_satisfied());
        let v = in_plus_cone(&vec2(&s2, [1.0, 0.0]), &vec2(&s2, [-1.0, 0.0])).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        assert!((v.witness_lambda.unwrap() - 1.0).abs() < 1e-6);
        let v = in_minus_cone(&vec2(&s2, [1.0, 0.0]), &vec2(&s2, [-1.0, 0.0])).unwrap();
        assert!(v.is_satisfied());
    }

    #[test]
    fn cone_decomposition_of_bj() {
        // x ⊥_B y iff y lies in both cones, up to the marginal band
        let s = lp(3, 3.0);
        for (i, pair) in crate::norms::sample_sphere(&s, 120, 5)
            .chunks(2)
            .enumerate()
        {
            let (x, y) = (&pair[0], &pair[1]);
            let bj = is_bj_orthogonal(x, y).unwrap();
            let plus = in_plus_cone(x, y).unwrap();
            let minus = in_minus_cone(x, y).unwrap();
            let both = plus.is_satisfied() && minus.is_satisfied();
            assert_eq!(bj.is_satisfied(), both, "instance {i}");
        }
    }

    #[test]
    fn eps_cone_examples() {
        let s = NormSpec::euclidean(2);
        let x = vec2(&s, [1.0, 0.0]);
        let v = in_plus_cone_eps(&x, &vec2(&s, [-1.0, 0.0]), eps(0.6)).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        assert!((v.margin + 0.8).abs() < 1e-9);

        let y = vec2(&s, [-1.0, 1.0]);
        let v = in_plus_cone_eps(&x, &y, eps(0.6)).unwrap();
        assert_eq!(v.outcome, Outcome::Fails); // one-sided min ≈ 0.7071 < 0.8
        let v = in_plus_cone_eps(&x, &y, eps(0.8)).unwrap();
        assert_eq!(v.outcome, Outcome::Holds); // threshold 0.6
        assert!((v.margin - (0.5f64.sqrt() - 0.6)).abs() < 1e-9);
    }

    #[test]
    fn eps_cone_monotone_in_eps() {
        let s = lp(3, 1.5);
        let pts = crate::norms::sample_sphere(&s, 40, 9);
        for pair in pts.chunks(2) {
            let (x, y) = (&pair[0], &pair[1]);
            let mut last = f64::NEG_INFINITY;
            for e in [0.0, 0.2, 0.4, 0.6, 0.8] {
                let v = in_plus_cone_eps(x, y, eps(e)).unwrap();
                assert!(v.margin >= last - 1e-12, "margin must grow with eps");
                last = v.margin;
            }
        }
    }

    #[test]
    fn dragomir_examples() {
        let s = NormSpec::euclidean(2);
        let x = vec2(&s, [1.0, 0.0]);
        let y = vec2(&s, [0.5, 0.8660254037844386]);
        let v = is_dragomir_orthogonal(&x, &y, eps(0.6)).unwrap();
        assert_eq!(v.outcome, Outcome::Holds); // min dist ≈ 0.866 >= 0.8
        assert!((v.margin - (0.75f64.sqrt() - 0.8)).abs() < 1e-8);
        let v = is_dragomir_orthogonal(&x, &y, eps(0.3)).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
    }

    #[test]
    fn dragomir_at_eps_zero_matches_bj() {
        for p in [1.0, 1.5, 2.0, 3.0] {
            let s = lp(3, p);
            for pair in crate::norms::sample_sphere(&s, 60, 13).chunks(2) {
                let (x, y) = (&pair[0], &pair[1]);
                let d = is_dragomir_orthogonal(x, y, Epsilon::ZERO).unwrap();
                let b = is_bj_orthogonal(x, y).unwrap();
                if d.outcome != Outcome::Marginal && b.outcome != Outcome::Marginal {
                    assert_eq!(d.outcome, b.outcome);
                }
                assert!((d.margin - b.margin).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn chmielinski_matches_ip_in_euclidean_space() {
        let s = NormSpec::euclidean(3);
        let pts = crate::norms::sample_sphere(&s, 200, 21);
        for (k, pair) in pts.chunks(2).enumerate() {
            let (x, y) = (&pair[0], &pair[1]);
            let e = eps(0.05 + 0.9 * ((k * 7919) % 100) as f64 / 100.0);
            let c = is_chmielinski_orthogonal(x, y, e).unwrap();
            let i = is_ip_approx_orthogonal(x, y, e).unwrap();
            assert!(
                (c.margin - i.margin).abs() < 1e-7,
                "margins diverge: {} vs {}",
                c.margin,
                i.margin
            );
            if c.outcome != Outcome::Marginal && i.outcome != Outcome::Marginal {
                assert_eq!(c.outcome, i.outcome);
            }
        }
    }

    #[test]
    fn chmielinski_boundary_example() {
        let s = NormSpec::euclidean(2);
        let x = vec2(&s, [1.0, 0.0]);
        let y = vec2(&s, [0.5, 0.8660254037844386]);
        let v = is_chmielinski_orthogonal(&x, &y, eps(0.5)).unwrap();
        assert_eq!(v.outcome, Outcome::Marginal);
        let v = is_chmielinski_orthogonal(&x, &y, eps(0.4)).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        let v = is_chmielinski_orthogonal(&x, &y, eps(0.6)).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn chmielinski_at_eps_zero_matches_bj_outcomes() {
        for p in [1.0, 1.5, 2.0, 3.0] {
            let s = lp(3, p);
            for pair in crate::norms::sample_sphere(&s, 60, 17).chunks(2) {
                let (x, y) = (&pair[0], &pair[1]);
                let c = is_chmielinski_orthogonal(x, y, Epsilon::ZERO).unwrap();
                let b = is_bj_orthogonal(x, y).unwrap();
                if c.outcome != Outcome::Marginal && b.outcome != Outcome::Marginal {
                    assert_eq!(c.outcome, b.outcome, "p={p}");
                }
            }
        }
    }

    #[test]
    fn ip_requires_euclidean() {
        let s = lp(2, 3.0);
        let x = vec2(&s, [1.0, 0.0]);
        let y = vec2(&s, [0.0, 1.0]);
        assert!(is_ip_approx_orthogonal(&x, &y, eps(0.1)).is_err());
    }

    #[test]
    fn ip_examples() {
        let s = NormSpec::euclidean(2);
        let x = vec2(&s, [1.0, 0.0]);
        let y = vec2(&s, [0.5, 0.8660254037844386]);
        let v = is_ip_approx_orthogonal(&x, &y, eps(0.6)).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
        assert!((v.margin - 0.1).abs() < 1e-12);
        let v = is_ip_approx_orthogonal(&x, &y, eps(0.4)).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
    }

    #[test]
    fn space_mismatch_is_an_error() {
        let a = vec2(&NormSpec::euclidean(2), [1.0, 0.0]);
        let b = vec2(&lp(2, 3.0), [0.0, 1.0]);
        assert!(is_bj_orthogonal(&a, &b).is_err());
    }

    #[test]
    fn witness_gram_schmidt_case() {
        let s = NormSpec::euclidean(2);
        let x = vec2(&s, [1.0, 0.0]);
        let y = vec2(&s, [0.5, 0.8660254037844386]);
        let z = find_bj_witness(&x, &y, eps(0.5)).unwrap().unwrap();
        assert!(z.coords[0].abs() < 1e-9, "z = {:?}", z.coords);
        assert!((z.coords[1] - 0.8660254037844386).abs() < 1e-9);
    }

    #[test]
    fn witness_identity_when_already_orthogonal() {
        let s = NormSpec::euclidean(2);
        let x = vec2(&s, [1.0, 0.0]);
        let y = vec2(&s, [0.0, 1.0]);
        let z = find_bj_witness(&x, &y, Epsilon::ZERO).unwrap().unwrap();
        assert_eq!(z.coords, y.coords);
    }

    #[test]
    fn witness_none_for_collinear() {
        let s = NormSpec::euclidean(2);
        let x = vec2(&s, [1.0, 0.0]);
        let y = vec2(&s, [1.0, 0.0]);
        assert!(find_bj_witness(&x, &y, eps(0.5)).unwrap().is_none());
    }

    #[test]
    fn witness_sound_when_found_across_norms() {
        for p in [1.0, 2.0, 3.0] {
            let s = lp(3, p);
            let pts = crate::norms::sample_sphere(&s, 80, 31);
            for (k, pair) in pts.chunks(2).enumerate() {
                let (x, y) = (&pair[0], &pair[1]);
                let e = eps(0.1 + 0.8 * ((k * 31) % 10) as f64 / 10.0);
                if let Some(z) = find_bj_witness(x, y, e).unwrap() {
                    let dist = norm_axpy(&s, &z.coords, -1.0, &y.coords);
                    assert!(dist <= e.value() * y.norm() + 1e-6, "p={p}");
                    let bj = is_bj_orthogonal(x, &z).unwrap();
                    assert!(bj.margin >= -MARGINAL_BAND, "p={p} margin {}", bj.margin);
                }
            }
        }
    }

    #[test]
    fn witness_complete_in_euclidean_space() {
        // when the quadratic predicate holds robustly in l2, a witness exists
        let s = NormSpec::euclidean(3);
        let pts = crate::norms::sample_sphere(&s, 120, 37);
        let mut holds_seen = 0;
        for (k, pair) in pts.chunks(2).enumerate() {
            let (x, y) = (&pair[0], &pair[1]);
            let e = eps(0.1 + 0.85 * ((k * 13) % 10) as f64 / 10.0);
            let c = is_chmielinski_orthogonal(x, y, e).unwrap();
            if c.outcome == Outcome::Holds {
                holds_seen += 1;
                assert!(
                    find_bj_witness(x, y, e).unwrap().is_some(),
                    "witness must exist at instance {k}"
                );
            }
        }
        assert!(holds_seen > 5, "test exercised too few Holds instances");
    }

    #[test]
    fn search_bounds_hold_identically_outside() {
        // dense sampling beyond each derived bound never violates the
        // corresponding defining inequality
        for p in [1.0, 2.0, 3.0] {
            let s = lp(3, p);
            let pts = crate::norms::sample_sphere(&s, 40, 41);
            for (k, pair) in pts.chunks(2).enumerate() {
                let (x, y) = (&pair[0], &pair[1]);
                let (xn, yn) = (x.norm(), y.norm());
                let e = eps(0.1 + 0.8 * ((k * 17) % 10) as f64 / 10.0);

                let wb = bj_search_halfwidth(xn, yn);
                let wd = dragomir_search_halfwidth(xn, yn, e);
                let wc = chmielinski_search_extent(xn, yn, e);
                for i in 1..=50 {
                    let t = 1.0 + 0.2 * i as f64;
                    for sgn in [1.0, -1.0] {
                        let lb = sgn * wb * t;
                        assert!(norm_axpy(&s, &x.coords, lb, &y.coords) >= xn - 1e-12);
                        let ld = sgn * wd * t;
                        assert!(
                            norm_axpy(&s, &x.coords, ld, &y.coords) >= e.shrink() * xn - 1e-12
                        );
                        let lc = sgn * wc * t;
                        let n = norm_axpy(&s, &x.coords, lc, &y.coords);
                        assert!(
                            n * n >= xn * xn - 2.0 * e.value() * xn * yn * lc.abs() - 1e-12
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn homogeneity_of_outcomes() {
        let s = lp(3, 1.5);
        let pts = crate::norms::sample_sphere(&s, 60, 43);
        let scales = [(2.0, 0.5), (-1.5, 3.0), (0.1, -0.2), (10.0, 10.0)];
        for (k, pair) in pts.chunks(2).enumerate() {
            let (x, y) = (&pair[0], &pair[1]);
            let e = eps(0.1 + 0.8 * ((k * 29) % 10) as f64 / 10.0);
            let (alpha, beta) = scales[k % scales.len()];
            let xs = x.scaled(alpha);
            let ys = y.scaled(beta);
            let d0 = is_dragomir_orthogonal(x, y, e).unwrap();
            let d1 = is_dragomir_orthogonal(&xs, &ys, e).unwrap();
            if d0.outcome != Outcome::Marginal && d1.outcome != Outcome::Marginal {
                assert_eq!(d0.outcome, d1.outcome);
            }
            let c0 = is_chmielinski_orthogonal(x, y, e).unwrap();
            let c1 = is_chmielinski_orthogonal(&xs, &ys, e).unwrap();
            if c0.outcome != Outcome::Marginal && c1.outcome != Outcome::Marginal {
                assert_eq!(c0.outcome, c1.outcome);
            }
        }
    }

    #[test]
    fn linf_kinked_instances_behave() {
        let s = linf(2);
        let x = vec2(&s, [1.0, 1.0]);
        let y = vec2(&s, [1.0, -1.0]);
        // ‖x+λy‖_inf = max(|1+λ|, |1-λ|) >= 1 for all λ
        let v = is_bj_orthogonal(&x, &y).unwrap();
        assert!(v.is_satisfied());
        let v = is_chmielinski_orthogonal(&x, &y, eps(0.3)).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
    }
}
