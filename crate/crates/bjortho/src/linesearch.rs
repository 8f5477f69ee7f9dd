//! Golden-section minimization of one-dimensional convex functions.
//!
//! Norm maps λ ↦ ‖x + λy‖ are convex but can be non-differentiable at kinks
//! (p = 1 and p = inf), so derivative-free bracketing is the right tool here.

use crate::error::{BjError, Result};

/// Inverse golden ratio, the interval shrink factor per iteration.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

pub const DEFAULT_TOL: f64 = 1e-10;

/// A closed search interval [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(BjError::EmptyBracket { lo, hi });
        }
        Ok(Bracket { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Outcome of a minimization: best evaluated point, its value, and the
/// number of function evaluations spent.
#[derive(Debug, Clone, Copy)]
pub struct MinResult {
    pub argmin: f64,
    pub minval: f64,
    pub evaluations: usize,
}

/// Which half-line a one-sided minimization covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    NonNegative,
    NonPositive,
}

/// Minimizes a convex `f` over `bracket` to within `tol` in the argument.
///
/// The returned `minval` is the smallest value seen across all evaluations,
/// endpoints included, so for convex inputs it never exceeds either endpoint
/// value. Non-finite evaluations abort with an error.
pub fn minimize_convex<F>(f: F, bracket: Bracket, tol: f64) -> Result<MinResult>
where
    F: Fn(f64) -> f64,
{
    let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
    let mut evals = 0usize;
    let mut best_x = f64::NAN;
    let mut best_v = f64::INFINITY;
    let eval = |x: f64, evals: &mut usize, best_x: &mut f64, best_v: &mut f64| -> Result<f64> {
        let v = f(x);
        *evals += 1;
        if !v.is_finite() {
            return Err(BjError::NonFiniteEval { lambda: x });
        }
        if v < *best_v {
            *best_v = v;
            *best_x = x;
        }
        Ok(v)
    };

    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    eval(lo, &mut evals, &mut best_x, &mut best_v)?;
    eval(hi, &mut evals, &mut best_x, &mut best_v)?;

    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = eval(a, &mut evals, &mut best_x, &mut best_v)?;
    let mut fb = eval(b, &mut evals, &mut best_x, &mut best_v)?;

    while hi - lo > tol {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = eval(a, &mut evals, &mut best_x, &mut best_v)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = eval(b, &mut evals, &mut best_x, &mut best_v)?;
        }
    }
    // midpoint of the final interval often beats the probes; include it
    let mid = 0.5 * (lo + hi);
    eval(mid, &mut evals, &mut best_x, &mut best_v)?;

    Ok(MinResult {
        argmin: best_x,
        minval: best_v,
        evaluations: evals,
    })
}

/// Minimizes convex `f` over [0, extent] or [-extent, 0].
///
/// λ = 0 is always evaluated, so boundary minima at the origin are exact.
pub fn minimize_convex_onesided<F>(f: F, side: Side, extent: f64, tol: f64) -> Result<MinResult>
where
    F: Fn(f64) -> f64,
{
    if !(extent.is_finite() && extent > 0.0) {
        return Err(BjError::EmptyBracket {
            lo: 0.0,
            hi: extent,
        });
    }
    let bracket = match side {
        Side::NonNegative => Bracket::new(0.0, extent)?,
        Side::NonPositive => Bracket::new(-extent, 0.0)?,
    };
    minimize_convex(f, bracket, tol)
}

/// Deterministic upper bound on evaluations for a given bracket and tol.
pub fn evaluation_budget(bracket: Bracket, tol: f64) -> usize {
    let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
    let ratio = (bracket.width() / tol).max(1.0);
    (ratio.ln() / (1.0 / INV_PHI).ln()).ceil() as usize + 5
}
