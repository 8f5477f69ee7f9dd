//! Brute-force reference implementations.
//!
//! Everything here works straight from the defining inequalities by grid
//! evaluation, sharing nothing with the fast paths except raw norm
//! evaluation. Slow on purpose: these are the implementations the fast
//! paths are validated against, so independence beats efficiency.

use crate::error::{BjError, Result};
use crate::norms::{norm_axpy, sample_sphere, Vector};
use crate::op_space::Op;
use crate::vec_ortho::{Epsilon, Outcome, Verdict, MARGINAL_BAND};

/// Default resolution for `grid_min_lambda`.
pub const DEFAULT_GRID_POINTS: usize = 1_000_000;

/// Default sphere-sample count for the operator-norm oracle.
pub const DEFAULT_OP_SAMPLES: usize = 10_000;

/// Default λ-grid resolution for the operator-predicate oracle.
pub const DEFAULT_OP_LAMBDA_POINTS: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredicateKind {
    Bj,
    Plus,
    Minus,
    PlusEps,
    MinusEps,
    Dragomir,
    Chmielinski,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpPredicateKind {
    Bj,
    Dragomir,
    Chmielinski,
}

// independent duplicate of the band thresholding: the oracle must not
// inherit a fast-path bug through a shared classifier
fn classify(margin: f64) -> Verdict {
    let outcome = if margin > MARGINAL_BAND {
        Outcome::Holds
    } else if margin < -MARGINAL_BAND {
        Outcome::Fails
    } else {
        Outcome::Marginal
    };
    Verdict {
        outcome,
        margin,
        witness_lambda: None,
        witness_vec: None,
        approximate: false,
    }
}

fn trivial() -> Verdict {
    let mut v = classify(1.0);
    v.outcome = Outcome::Holds;
    v
}

fn check_spaces(x: &Vector, y: &Vector) -> Result<()> {
    if x.space != y.space {
        return Err(BjError::SpaceMismatch);
    }
    Ok(())
}

/// Uniform-grid minimum of λ ↦ ‖x+λy‖ over [lo, hi].
pub fn grid_min_lambda(
    x: &Vector,
    y: &Vector,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<(f64, f64)> {
    check_spaces(x, y)?;
    assert!(points >= 2, "grid needs at least its two endpoints");
    assert!(lo <= hi);
    let step = (hi - lo) / (points - 1) as f64;
    let mut arg = lo;
    let mut min = f64::INFINITY;
    for k in 0..points {
        let l = lo + step * k as f64;
        let v = norm_axpy(&x.space, &x.coords, l, &y.coords);
        if v < min {
            min = v;
            arg = l;
        }
    }
    Ok((arg, min))
}

/// Grid minimization with zoom: a coarse uniform pass locates the minimizing
/// cell, then three 1024-point passes over ±2 cells shrink it. Each pass is
/// itself a plain uniform grid.
fn refined_grid_min(x: &Vector, y: &Vector, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let (mut arg, mut min) = grid_min_lambda(x, y, lo, hi, 4096)?;
    let mut cell = (hi - lo) / 4095.0;
    for _ in 0..3 {
        let zlo = (arg - 2.0 * cell).max(lo);
        let zhi = (arg + 2.0 * cell).min(hi);
        if zhi <= zlo {
            break;
        }
        let (a, m) = grid_min_lambda(x, y, zlo, zhi, 1024)?;
        if m < min {
            min = m;
            arg = a;
        }
        lo = zlo;
        hi = zhi;
        cell = (zhi - zlo) / 1023.0;
    }
    Ok((arg, min))
}

/// Worst slack per unit |λ| of the quadratic inequality
/// ‖x+λy‖² ≥ xscale² − 2ε·xscale·yscale·|λ| over a per-side geometric grid
/// running from `extent` down to `floor`. The inequality binds as λ → 0, so
/// the grid concentrates there; `floor` keeps the quotient clear of
/// cancellation noise.
fn quotient_grid_min(
    x: &Vector,
    y: &Vector,
    eps: Epsilon,
    xscale: f64,
    yscale: f64,
    extent: f64,
    floor: f64,
    per_side: usize,
) -> (f64, f64) {
    let base_sq = xscale * xscale;
    let rate = 2.0 * eps.value() * xscale * yscale;
    let ratio = (floor / extent).powf(1.0 / (per_side - 1) as f64);
    let mut worst = f64::INFINITY;
    let mut arg = 0.0;
    for side in [1.0, -1.0] {
        let mut l = extent;
        for _ in 0..per_side {
            let lam = side * l;
            let n = norm_axpy(&x.space, &x.coords, lam, &y.coords);
            let q = (n * n - base_sq) / l + rate;
            if q < worst {
                worst = q;
                arg = lam;
            }
            l *= ratio;
        }
    }
    (worst, arg)
}

/// Reference verdict for a vector predicate, straight from its defining
/// inequality on a λ grid.
pub fn oracle_predicate(
    kind: PredicateKind,
    x: &Vector,
    y: &Vector,
    eps: Epsilon,
) -> Result<Verdict> {
    check_spaces(x, y)?;
    let xn = x.norm();
    let yn = y.norm();
    if xn == 0.0 || yn == 0.0 {
        return Ok(trivial());
    }
    let scale = xn.max(1.0);
    let r = xn / yn;
    let s = eps.shrink();

    // reverse triangle: ‖x+λy‖ ≥ |λ|‖y‖ − ‖x‖, so outside these extents the
    // tested inequalities hold identically
    let two_sided = |lo: f64, hi: f64, threshold: f64| -> Result<Verdict> {
        let (arg, min) = refined_grid_min(x, y, lo, hi)?;
        // λ = 0 belongs to every range; the grid may straddle it
        let (arg, min) = if xn < min { (0.0, xn) } else { (arg, min) };
        Ok(classify((min - threshold) / scale).with_lambda(arg))
    };

    match kind {
        PredicateKind::Bj => two_sided(-2.0 * r, 2.0 * r, xn),
        PredicateKind::Plus => two_sided(0.0, 2.0 * r, xn),
        PredicateKind::Minus => two_sided(-2.0 * r, 0.0, xn),
        PredicateKind::PlusEps => {
            let (arg, min) = refined_grid_min(x, y, 0.0, (1.0 + s) * r)?;
            Ok(classify((min - s * xn) / scale).with_lambda(arg))
        }
        PredicateKind::MinusEps => {
            let (arg, min) = refined_grid_min(x, y, -(1.0 + s) * r, 0.0)?;
            Ok(classify((min - s * xn) / scale).with_lambda(arg))
        }
        PredicateKind::Dragomir => {
            let (arg, min) = refined_grid_min(x, y, -(1.0 + s) * r, (1.0 + s) * r)?;
            Ok(classify((min - s * xn) / scale).with_lambda(arg))
        }
        PredicateKind::Chmielinski => {
            let (worst, arg) =
                quotient_grid_min(x, y, eps, xn, yn, 2.0 * r, 3e-8 * r, 60);
            let margin = worst / (2.0 * (xn * yn).max(1.0));
            Ok(classify(margin).with_lambda(arg))
        }
    }
}

fn ascend_sample(t: &Op, start: &Vector) -> f64 {
    let dom = &t.domain;
    let mut v = start.coords.clone();
    let mut best = t.apply(start).map(|img| img.norm()).unwrap_or(0.0);
    let eval = |coords: &[f64]| -> Option<f64> {
        let n = crate::norms::norm(dom, coords);
        if n < 1e-12 {
            return None;
        }
        let unit: Vec<f64> = coords.iter().map(|c| c / n).collect();
        let img = t
            .apply(&Vector {
                coords: unit,
                space: dom.clone(),
            })
            .ok()?;
        Some(img.norm())
    };
    let mut delta = 0.5;
    let mut sweeps = 0;
    while delta > 1e-11 && sweeps < 5_000 {
        sweeps += 1;
        let mut improved = false;
        for i in 0..dom.dim {
            for sgn in [1.0, -1.0] {
                let mut cand = v.clone();
                cand[i] += sgn * delta;
                if let Some(val) = eval(&cand) {
                    if val > best {
                        best = val;
                        let n = crate::norms::norm(dom, &cand);
                        for c in cand.iter_mut() {
                            *c /= n;
                        }
                        v = cand;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            delta *= 0.5;
        }
    }
    best
}

fn oracle_op_norm_on_mesh(t: &Op, mesh: &[Vector]) -> f64 {
    if t.is_zero() {
        return 0.0;
    }
    let mut scored: Vec<(f64, usize)> = mesh
        .iter()
        .enumerate()
        .map(|(i, v)| (t.apply(v).map(|img| img.norm()).unwrap_or(0.0), i))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = scored.first().map_or(0.0, |(v, _)| *v);
    for (_, i) in scored.iter().take(10) {
        best = best.max(ascend_sample(t, &mesh[*i]));
    }
    best
}

/// Sampled lower bound on the operator norm: max of ‖Tv‖ over a seeded
/// sphere mesh, sharpened by coordinate ascent from the ten best samples.
/// Every evaluation is at a genuine unit vector, so the result never
/// exceeds the true norm.
pub fn oracle_op_norm(t: &Op, samples: usize, seed: u64) -> f64 {
    assert!(samples >= 1);
    let mesh = sample_sphere(&t.domain, samples, seed);
    oracle_op_norm_on_mesh(t, &mesh)
}

/// Reference verdict for an operator predicate: a λ grid with the sampled
/// norm oracle at every point. The sphere mesh is seeded once and shared
/// across λ (identical to resampling with the same seed).
pub fn oracle_op_predicate(
    kind: OpPredicateKind,
    t: &Op,
    a: &Op,
    eps: Epsilon,
    lambda_points: usize,
) -> Result<Verdict> {
    if t.domain != a.domain || t.codomain != a.codomain {
        return Err(BjError::SpaceMismatch);
    }
    assert!(lambda_points >= 2);
    if t.is_zero() || a.is_zero() {
        return Ok(trivial());
    }
    let mesh = sample_sphere(&t.domain, DEFAULT_OP_SAMPLES, 0x0bac1e);
    let tn = oracle_op_norm_on_mesh(t, &mesh);
    let an = oracle_op_norm_on_mesh(a, &mesh);
    let scale = tn.max(1.0);
    let r = tn / an;
    let norm_at = |l: f64| oracle_op_norm_on_mesh(&t.axpy(l, a), &mesh);

    let scan = |lo: f64, hi: f64, threshold: f64| -> Verdict {
        let step = (hi - lo) / (lambda_points - 1) as f64;
        let mut min = tn; // λ = 0 is in every range
        let mut arg = 0.0;
        for k in 0..lambda_points {
            let l = lo + step * k as f64;
            let v = norm_at(l);
            if v < min {
                min = v;
                arg = l;
            }
        }
        classify((min - threshold) / scale).with_lambda(arg)
    };

    match kind {
        OpPredicateKind::Bj => Ok(scan(-2.0 * r, 2.0 * r, tn)),
        OpPredicateKind::Dragomir => {
            let s = eps.shrink();
            Ok(scan(-(1.0 + s) * r, (1.0 + s) * r, s * tn))
        }
        OpPredicateKind::Chmielinski => {
            // sampled norms carry more noise than vector norms, so the
            // quotient floor stays three orders above the vector one
            let extent = 2.0 * r;
            let floor = 1e-3 * r;
            let per_side = (lambda_points / 2).max(8);
            let ratio = (floor / extent).powf(1.0 / (per_side - 1) as f64);
            let rate = 2.0 * eps.value() * tn * an;
            let mut worst = f64::INFINITY;
            let mut arg = 0.0;
            for side in [1.0, -1.0] {
                let mut l = extent;
                for _ in 0..per_side {
                    let lam = side * l;
                    let n = norm_at(lam);
                    let q = (n * n - tn * tn) / l + rate;
                    if q < worst {
                        worst = q;
                        arg = lam;
                    }
                    l *= ratio;
                }
            }
            Ok(classify(worst / (2.0 * (tn * an).max(1.0))).with_lambda(arg))
        }
    }
}
