//! Matrix operators between finite-dimensional lp spaces: induced operator
//! norm, the norm attainment set, restricted norms, and operator-level
//! orthogonality predicates.
//!
//! Exact norm computation covers domain p ∈ {1, ∞} (vertex enumeration) and
//! the p = 2 → p = 2 case (largest singular value). Everything else runs a
//! multistart projected ascent and is flagged approximate; that flag is
//! carried into every downstream verdict.

use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{BjError, Result};
use crate::linesearch::{minimize_convex, minimize_convex_onesided, Bracket, Side};
use crate::norms::{norm, sample_sphere, Exponent, NormSpec, Vector};
use crate::vec_ortho::{
    bj_search_halfwidth, chmielinski_search_extent, dragomir_search_halfwidth, norm_scale,
    Epsilon, Outcome, Verdict,
};

/// Relative width of the top singular cluster: singular values within this
/// of the maximum are treated as attaining.
pub const ATTAINMENT_REL_TOL: f64 = 1e-9;

const SIGN_ENUM_MAX_DIM: usize = 20;

/// A bounded linear operator as a dense matrix with tagged spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    pub matrix: DMatrix<f64>,
    pub domain: NormSpec,
    pub codomain: NormSpec,
}

impl Op {
    pub fn new(matrix: DMatrix<f64>, domain: NormSpec, codomain: NormSpec) -> Result<Op> {
        if matrix.nrows() != codomain.dim || matrix.ncols() != domain.dim {
            return Err(BjError::ShapeMismatch {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                dom: domain.dim,
                cod: codomain.dim,
            });
        }
        if matrix.iter().any(|e| !e.is_finite()) {
            return Err(BjError::InvalidSpace("non-finite matrix entry".into()));
        }
        Ok(Op {
            matrix,
            domain,
            codomain,
        })
    }

    /// Builds from a row-major entry slice.
    pub fn from_rows(
        rows: usize,
        cols: usize,
        entries: &[f64],
        domain: NormSpec,
        codomain: NormSpec,
    ) -> Result<Op> {
        if entries.len() != rows * cols {
            return Err(BjError::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Op::new(
            DMatrix::from_row_slice(rows, cols, entries),
            domain,
            codomain,
        )
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.space != self.domain {
            return Err(BjError::SpaceMismatch);
        }
        let coords: Vec<f64> = (0..self.matrix.nrows())
            .map(|i| {
                (0..self.matrix.ncols())
                    .map(|j| self.matrix[(i, j)] * x.coords[j])
                    .sum()
            })
            .collect();
        Ok(Vector {
            coords,
            space: self.codomain.clone(),
        })
    }

    /// T + lambda * A.
    pub fn axpy(&self, lambda: f64, a: &Op) -> Op {
        debug_assert_eq!(self.matrix.shape(), a.matrix.shape());
        Op {
            matrix: &self.matrix + lambda * &a.matrix,
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
        }
    }

    pub fn scaled(&self, alpha: f64) -> Op {
        Op {
            matrix: alpha * &self.matrix,
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|e| *e == 0.0)
    }
}

fn require_same_shape(t: &Op, a: &Op) -> Result<()> {
    if t.domain != a.domain || t.codomain != a.codomain {
        return Err(BjError::SpaceMismatch);
    }
    Ok(())
}

/// An operator norm value, flagged when it came from the non-exact path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpNorm {
    pub value: f64,
    pub approximate: bool,
}

fn is_l2(space: &NormSpec) -> bool {
    space.p == Exponent::Finite(2.0)
}

/// C^{1/2} T D^{-1/2}: the plain-Euclidean matrix whose singular values are
/// the weighted-l2 singular values of T.
fn weighted_transform(t: &Op) -> DMatrix<f64> {
    let mut m = t.matrix.clone();
    if let Some(c) = &t.codomain.weights {
        for (i, ci) in c.iter().enumerate() {
            let s = ci.sqrt();
            for j in 0..m.ncols() {
                m[(i, j)] *= s;
            }
        }
    }
    if let Some(d) = &t.domain.weights {
        for (j, dj) in d.iter().enumerate() {
            let s = dj.sqrt();
            for i in 0..m.nrows() {
                m[(i, j)] /= s;
            }
        }
    }
    m
}

fn max_singular_value(m: &DMatrix<f64>) -> f64 {
    // ordering of nalgebra's singular values is not relied on anywhere
    nalgebra::linalg::SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .fold(0.0, |acc: f64, s| acc.max(*s))
}

/// Induced operator norm sup_{‖x‖_dom = 1} ‖Tx‖_cod.
pub fn op_norm(t: &Op) -> Result<OpNorm> {
    if t.is_zero() {
        return Ok(OpNorm {
            value: 0.0,
            approximate: false,
        });
    }
    if is_l2(&t.domain) && is_l2(&t.codomain) {
        return Ok(OpNorm {
            value: max_singular_value(&weighted_transform(t)),
            approximate: false,
        });
    }
    match t.domain.p {
        // the weighted l1 ball has extreme points ±e_j / w_j
        Exponent::Finite(p) if p == 1.0 => {
            let mut best = 0.0f64;
            for j in 0..t.matrix.ncols() {
                let col: Vec<f64> = (0..t.matrix.nrows()).map(|i| t.matrix[(i, j)]).collect();
                let w = t.domain.weights.as_ref().map_or(1.0, |w| w[j]);
                best = best.max(norm(&t.codomain, &col) / w);
            }
            Ok(OpNorm {
                value: best,
                approximate: false,
            })
        }
        // the weighted l-inf ball has extreme points with coords ±1/w_i
        Exponent::Infinity => {
            let n = t.matrix.ncols();
            if n > SIGN_ENUM_MAX_DIM {
                return Err(BjError::DimensionOverflow {
                    max: SIGN_ENUM_MAX_DIM,
                    got: n,
                });
            }
            let (best, _) = linf_vertex_scan(t);
            Ok(OpNorm {
                value: best,
                approximate: false,
            })
        }
        _ => {
            let (best, _) = multistart_ascent(t);
            Ok(OpNorm {
                value: best,
                approximate: true,
            })
        }
    }
}

/// Scans the 2^{n-1} sign classes of the weighted sup-ball vertices; returns
/// the max image norm and the per-vertex values for attainment extraction.
fn linf_vertex_scan(t: &Op) -> (f64, Vec<(Vec<f64>, f64)>) {
    let n = t.matrix.ncols();
    let inv_w: Vec<f64> = (0..n)
        .map(|i| 1.0 / t.domain.weights.as_ref().map_or(1.0, |w| w[i]))
        .collect();
    let mut best = 0.0f64;
    let mut table = Vec::with_capacity(1usize << (n - 1));
    let mut x = vec![0.0f64; n];
    for mask in 0..(1usize << (n - 1)) {
        x[0] = inv_w[0]; // global sign fixed: ‖T(−x)‖ = ‖Tx‖
        for (k, xi) in x.iter_mut().enumerate().skip(1) {
            let sign = if mask >> (k - 1) & 1 == 1 { -1.0 } else { 1.0 };
            *xi = sign * inv_w[k];
        }
        let img: Vec<f64> = (0..t.matrix.nrows())
            .map(|i| (0..n).map(|j| t.matrix[(i, j)] * x[j]).sum())
            .collect();
        let v = norm(&t.codomain, &img);
        best = best.max(v);
        table.push((x.clone(), v));
    }
    (best, table)
}

// ---------------------------------------------------------------------------
// general-p ascent (approximate path)
// ---------------------------------------------------------------------------

const ASCENT_STARTS: usize = 48;
const ASCENT_SCAN: usize = 1024;
const ASCENT_SEED: u64 = 0x5eed;

fn image_subgradient(cod: &NormSpec, u: &[f64]) -> Vec<f64> {
    let w = |i: usize| cod.weights.as_ref().map_or(1.0, |w| w[i]);
    match cod.p {
        Exponent::Finite(p) if p > 1.0 => {
            let n = norm(cod, u);
            if n == 0.0 {
                return vec![0.0; u.len()];
            }
            u.iter()
                .enumerate()
                .map(|(i, c)| {
                    if *c == 0.0 {
                        0.0
                    } else {
                        w(i) * c.signum() * (c.abs() / n).powf(p - 1.0)
                    }
                })
                .collect()
        }
        Exponent::Finite(_) => u
            .iter()
            .enumerate()
            .map(|(i, c)| w(i) * c.signum() * if *c == 0.0 { 0.0 } else { 1.0 })
            .collect(),
        Exponent::Infinity => {
            let mut k = 0;
            let mut m = -1.0;
            for (i, c) in u.iter().enumerate() {
                if w(i) * c.abs() > m {
                    m = w(i) * c.abs();
                    k = i;
                }
            }
            let mut g = vec![0.0; u.len()];
            g[k] = w(k) * u[k].signum();
            g
        }
    }
}

fn normalize_in(space: &NormSpec, coords: &mut [f64]) -> bool {
    let n = norm(space, coords);
    if n < 1e-300 || !n.is_finite() {
        return false;
    }
    for c in coords.iter_mut() {
        *c /= n;
    }
    true
}

fn ascend(t: &Op, start: &[f64]) -> (Vec<f64>, f64) {
    let n = t.matrix.ncols();
    let eval = |x: &[f64]| -> f64 {
        let img: Vec<f64> = (0..t.matrix.nrows())
            .map(|i| (0..n).map(|j| t.matrix[(i, j)] * x[j]).sum())
            .collect();
        norm(&t.codomain, &img)
    };
    let mut x = start.to_vec();
    let mut val = eval(&x);
    let mut step = 0.5;
    for _ in 0..400 {
        let img: Vec<f64> = (0..t.matrix.nrows())
            .map(|i| (0..n).map(|j| t.matrix[(i, j)] * x[j]).sum())
            .collect();
        let j = image_subgradient(&t.codomain, &img);
        let g: Vec<f64> = (0..n)
            .map(|k| (0..t.matrix.nrows()).map(|i| t.matrix[(i, k)] * j[i]).sum())
            .collect();
        let gn = g.iter().map(|c| c * c).sum::<f64>().sqrt();
        if gn == 0.0 {
            break;
        }
        let mut cand: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b / gn).collect();
        if normalize_in(&t.domain, &mut cand) {
            let cv = eval(&cand);
            if cv > val {
                x = cand;
                val = cv;
                continue;
            }
        }
        step *= 0.5;
        if step < 1e-12 {
            break;
        }
    }
    // coordinate polish handles the nonsmooth stalls of subgradient ascent
    let mut delta = 1e-2;
    while delta > 1e-11 {
        let mut moved = false;
        for k in 0..n {
            for sgn in [1.0, -1.0] {
                let mut cand = x.clone();
                cand[k] += sgn * delta;
                if normalize_in(&t.domain, &mut cand) {
                    let cv = eval(&cand);
                    if cv > val {
                        x = cand;
                        val = cv;
                        moved = true;
                    }
                }
            }
        }
        if !moved {
            delta *= 0.5;
        }
    }
    (x, val)
}

/// Best value over a seeded sphere scan and ascents from the strongest
/// starts; the result is a certified lower bound attained at the returned
/// local maximizers.
fn multistart_ascent(t: &Op) -> (f64, Vec<(Vec<f64>, f64)>) {
    let scan = sample_sphere(&t.domain, ASCENT_SCAN, ASCENT_SEED);
    let eval = |x: &[f64]| -> f64 {
        let img: Vec<f64> = (0..t.matrix.nrows())
            .map(|i| {
                (0..t.matrix.ncols())
                    .map(|j| t.matrix[(i, j)] * x[j])
                    .sum()
            })
            .collect();
        norm(&t.codomain, &img)
    };
    let mut ranked: Vec<(f64, usize)> = scan
        .iter()
        .enumerate()
        .map(|(i, v)| (eval(&v.coords), i))
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut maximizers = Vec::new();
    let mut best = ranked.first().map_or(0.0, |r| r.0);
    for (_, idx) in ranked.iter().take(ASCENT_STARTS) {
        let (x, v) = ascend(t, &scan[*idx].coords);
        best = best.max(v);
        maximizers.push((x, v));
    }
    (best, maximizers)
}

// ---------------------------------------------------------------------------
// attainment
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum AttainmentKind {
    /// Discrete attaining vectors, closed under negation.
    FinitePoints(Vec<Vector>),
    /// The whole unit sphere of the span of the basis (orthonormal in the
    /// domain inner product) attains the norm.
    Subsphere(Vec<Vector>),
    /// Heuristic local maximizers from the general-p ascent; quality_gap is
    /// the value distance from the best cluster to the next distinct one.
    Approximate {
        points: Vec<Vector>,
        quality_gap: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttainmentSet {
    pub kind: AttainmentKind,
    pub attained_norm: f64,
    /// Relative distance from the attained norm down to the best candidate
    /// excluded from the attainment cluster; infinite when nothing was
    /// excluded. Small values mean membership is numerically ambiguous.
    pub tie_gap: f64,
}

impl AttainmentSet {
    /// Representative attaining vectors: finite lists as-is, subsphere as its
    /// basis.
    pub fn members(&self) -> &[Vector] {
        match &self.kind {
            AttainmentKind::FinitePoints(v) => v,
            AttainmentKind::Subsphere(b) => b,
            AttainmentKind::Approximate { points, .. } => points,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.kind, AttainmentKind::Approximate { .. })
    }
}

/// M_T: the unit vectors where ‖Tx‖ reaches ‖T‖.
pub fn attainment_set(t: &Op) -> Result<AttainmentSet> {
    if t.is_zero() {
        return Err(BjError::ZeroOperator("attainment set".into()));
    }
    if is_l2(&t.domain) && is_l2(&t.codomain) {
        let m = weighted_transform(t);
        let svd = nalgebra::linalg::SVD::new(m, false, true);
        let v_t = svd.v_t.expect("requested v_t");
        let smax = svd.singular_values.iter().fold(0.0f64, |a, s| a.max(*s));
        let mut basis = Vec::new();
        let mut runner_up: Option<f64> = None;
        for (k, s) in svd.singular_values.iter().enumerate() {
            if *s >= smax * (1.0 - ATTAINMENT_REL_TOL) {
                let mut coords: Vec<f64> = (0..v_t.ncols()).map(|j| v_t[(k, j)]).collect();
                if let Some(d) = &t.domain.weights {
                    for (c, dj) in coords.iter_mut().zip(d) {
                        *c /= dj.sqrt();
                    }
                }
                normalize_in(&t.domain, &mut coords);
                basis.push(Vector {
                    coords,
                    space: t.domain.clone(),
                });
            } else {
                runner_up = Some(runner_up.map_or(*s, |r: f64| r.max(*s)));
            }
        }
        // a wide matrix has nullspace directions competing at value 0
        if svd.singular_values.len() < t.domain.dim {
            runner_up = Some(runner_up.map_or(0.0, |r: f64| r.max(0.0)));
        }
        return Ok(AttainmentSet {
            kind: AttainmentKind::Subsphere(basis),
            attained_norm: smax,
            tie_gap: runner_up.map_or(f64::INFINITY, |r| (smax - r) / smax),
        });
    }
    match t.domain.p {
        Exponent::Finite(p) if p == 1.0 => {
            let n = t.matrix.ncols();
            let vals: Vec<f64> = (0..n)
                .map(|j| {
                    let col: Vec<f64> =
                        (0..t.matrix.nrows()).map(|i| t.matrix[(i, j)]).collect();
                    norm(&t.codomain, &col) / t.domain.weights.as_ref().map_or(1.0, |w| w[j])
                })
                .collect();
            let best = vals.iter().fold(0.0f64, |a, v| a.max(*v));
            let mut points = Vec::new();
            let mut runner_up: Option<f64> = None;
            for (j, v) in vals.iter().enumerate() {
                if *v >= best * (1.0 - ATTAINMENT_REL_TOL) {
                    let w = t.domain.weights.as_ref().map_or(1.0, |w| w[j]);
                    for sgn in [1.0, -1.0] {
                        let mut coords = vec![0.0; n];
                        coords[j] = sgn / w;
                        points.push(Vector {
                            coords,
                            space: t.domain.clone(),
                        });
                    }
                } else {
                    runner_up = Some(runner_up.map_or(*v, |r: f64| r.max(*v)));
                }
            }
            Ok(AttainmentSet {
                kind: AttainmentKind::FinitePoints(points),
                attained_norm: best,
                tie_gap: runner_up.map_or(f64::INFINITY, |r| (best - r) / best),
            })
        }
        Exponent::Infinity => {
            let n = t.matrix.ncols();
            if n > SIGN_ENUM_MAX_DIM {
                return Err(BjError::DimensionOverflow {
                    max: SIGN_ENUM_MAX_DIM,
                    got: n,
                });
            }
            let (best, table) = linf_vertex_scan(t);
            let mut points = Vec::new();
            let mut runner_up: Option<f64> = None;
            for (x, v) in &table {
                if *v >= best * (1.0 - ATTAINMENT_REL_TOL) {
                    for sgn in [1.0, -1.0] {
                        points.push(Vector {
                            coords: x.iter().map(|c| sgn * c).collect(),
                            space: t.domain.clone(),
                        });
                    }
                } else {
                    runner_up = Some(runner_up.map_or(*v, |r: f64| r.max(*v)));
                }
            }
            Ok(AttainmentSet {
                kind: AttainmentKind::FinitePoints(points),
                attained_norm: best,
                tie_gap: runner_up.map_or(f64::INFINITY, |r| (best - r) / best),
            })
        }
        _ => {
            let (best, maximizers) = multistart_ascent(t);
            // cluster the ascent endpoints at Euclidean distance 1e-6
            let mut clusters: Vec<(Vec<f64>, f64)> = Vec::new();
            for (x, v) in maximizers {
                let dup = clusters.iter_mut().find(|(cx, _)| {
                    cx.iter()
                        .zip(&x)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                        < 1e-6
                });
                match dup {
                    Some((_, cv)) => *cv = cv.max(v),
                    None => clusters.push((x, v)),
                }
            }
            clusters.sort_by(|a, b| b.1.total_cmp(&a.1));
            let second = clusters
                .iter()
                .map(|(_, v)| *v)
                .find(|v| *v < best * (1.0 - ATTAINMENT_REL_TOL));
            let quality_gap = best - second.unwrap_or(0.0);
            let points: Vec<Vector> = clusters
                .iter()
                .filter(|(_, v)| *v >= best * (1.0 - ATTAINMENT_REL_TOL))
                .map(|(x, _)| Vector {
                    coords: x.clone(),
                    space: t.domain.clone(),
                })
                .collect();
            Ok(AttainmentSet {
                kind: AttainmentKind::Approximate {
                    points,
                    quality_gap,
                },
                attained_norm: best,
                tie_gap: quality_gap / best,
            })
        }
    }
}

/// ‖T‖ restricted to the orthogonal complement of span(basis); 0 when the
/// basis spans the whole domain. Hilbert case only.
pub fn restricted_norm_complement(t: &Op, basis: &[Vector]) -> Result<f64> {
    if !is_l2(&t.domain) || !is_l2(&t.codomain) {
        return Err(BjError::NonHilbert);
    }
    let n = t.domain.dim;
    let mut u = DMatrix::zeros(n, basis.len());
    for (k, b) in basis.iter().enumerate() {
        if b.space != t.domain {
            return Err(BjError::SpaceMismatch);
        }
        for i in 0..n {
            let w = t.domain.weights.as_ref().map_or(1.0, |w| w[i]);
            u[(i, k)] = w.sqrt() * b.coords[i];
        }
    }
    let gram = u.transpose() * &u;
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (gram[(i, j)] - expect).abs() > 1e-7 {
                return Err(BjError::InvalidSpace("basis not orthonormal".into()));
            }
        }
    }
    let m = weighted_transform(t);
    let proj = DMatrix::identity(n, n) - &u * u.transpose();
    Ok(max_singular_value(&(m * proj)))
}

// ---------------------------------------------------------------------------
// operator-level orthogonality
// ---------------------------------------------------------------------------

fn op_norm_value(t: &Op) -> f64 {
    // branch validity is checked once by the caller; NaN feeds the
    // line-search error path if an evaluation ever degenerates
    op_norm(t).map_or(f64::NAN, |n| n.value)
}

/// T ⊥_B A for the operator norm: ‖T + λA‖ >= ‖T‖ for every λ.
pub fn op_is_bj_orthogonal(t: &Op, a: &Op) -> Result<Verdict> {
    require_same_shape(t, a)?;
    if t.is_zero() || a.is_zero() {
        return Ok(Verdict::trivial_holds());
    }
    let tn = op_norm(t)?;
    let an = op_norm(a)?;
    let approx = tn.approximate || an.approximate;
    let w = bj_search_halfwidth(tn.value, an.value);
    let f = |l: f64| op_norm_value(&t.axpy(l, a));
    debug_assert!(f(w) >= tn.value - 1e-7 * norm_scale(tn.value));
    debug_assert!(f(-w) >= tn.value - 1e-7 * norm_scale(tn.value));
    let r = minimize_convex(f, Bracket::new(-w, w)?, 1e-10 * w.max(1.0))?;
    let minval = r.minval.min(tn.value);
    let margin = (minval - tn.value) / norm_scale(tn.value);
    Ok(Verdict::from_margin(margin)
        .with_lambda(r.argmin)
        .with_approximate(approx))
}

/// T ⊥_D^eps A: ‖T + λA‖ >= sqrt(1-eps^2)‖T‖ for every λ.
pub fn op_is_dragomir_orthogonal(t: &Op, a: &Op, eps: Epsilon) -> Result<Verdict> {
    require_same_shape(t, a)?;
    if t.is_zero() || a.is_zero() {
        return Ok(Verdict::trivial_holds());
    }
    let tn = op_norm(t)?;
    let an = op_norm(a)?;
    let approx = tn.approximate || an.approximate;
    let threshold = eps.shrink() * tn.value;
    let w = dragomir_search_halfwidth(tn.value, an.value, eps);
    let f = |l: f64| op_norm_value(&t.axpy(l, a));
    debug_assert!(f(w) >= threshold - 1e-7 * norm_scale(tn.value));
    debug_assert!(f(-w) >= threshold - 1e-7 * norm_scale(tn.value));
    let r = minimize_convex(f, Bracket::new(-w, w)?, 1e-10 * w.max(1.0))?;
    let minval = r.minval.min(tn.value);
    let margin = (minval - threshold) / norm_scale(tn.value);
    Ok(Verdict::from_margin(margin)
        .with_lambda(r.argmin)
        .with_approximate(approx))
}

/// One-sided slope of λ ↦ ‖T+λA‖² at 0, by Richardson-extrapolated chords.
/// The base step is coarser than the vector analogue because each evaluation
/// carries SVD-level noise.
fn op_sq_slope_at_zero(t: &Op, a: &Op, tn: f64, an: f64, side: Side) -> f64 {
    let base = 1e-6 * tn.max(1e-300) / an;
    let sgn = match side {
        Side::NonNegative => 1.0,
        Side::NonPositive => -1.0,
    };
    let phi0 = tn * tn;
    let q = |l: f64| {
        let n = op_norm_value(&t.axpy(l, a));
        (n * n - phi0) / l
    };
    let q1 = q(sgn * base);
    let q2 = q(sgn * 2.0 * base);
    let q4 = q(sgn * 4.0 * base);
    let e1 = 2.0 * q1 - q2;
    let e2 = 2.0 * q2 - q4;
    let tol = 1e-5 * (tn * an).max(1e-300);
    if (e1 - e2).abs() <= tol {
        e1
    } else {
        q1
    }
}

/// Per-side slacks of ‖T+λA‖² >= ‖T‖² - 2eps‖T‖‖λA‖, normalized like the
/// vector version, plus the approximate flag of the norm path.
pub fn op_chmielinski_slacks(t: &Op, a: &Op, eps: Epsilon) -> Result<(f64, f64, bool)> {
    require_same_shape(t, a)?;
    let tn = op_norm(t)?;
    let an = op_norm(a)?;
    let eps_term = 2.0 * eps.value() * tn.value * an.value;
    let scale = 2.0 * (tn.value * an.value).max(1.0);
    let d_plus = op_sq_slope_at_zero(t, a, tn.value, an.value, Side::NonNegative);
    let d_minus = op_sq_slope_at_zero(t, a, tn.value, an.value, Side::NonPositive);
    Ok((
        (d_plus + eps_term) / scale,
        (-d_minus + eps_term) / scale,
        tn.approximate || an.approximate,
    ))
}

/// T ⊥_B^eps A: ‖T + λA‖² >= ‖T‖² - 2eps‖T‖‖λA‖ for every λ.
pub fn op_is_chmielinski_orthogonal(t: &Op, a: &Op, eps: Epsilon) -> Result<Verdict> {
    require_same_shape(t, a)?;
    if t.is_zero() || a.is_zero() {
        return Ok(Verdict::trivial_holds());
    }
    let tn = op_norm(t)?;
    let an = op_norm(a)?;
    let (c_plus, c_minus, approx) = op_chmielinski_slacks(t, a, eps)?;
    let margin = c_plus.min(c_minus);
    let mut verdict = Verdict::from_margin(margin).with_approximate(approx);
    let extent = chmielinski_search_extent(tn.value, an.value, eps);
    if extent > 0.0 && verdict.outcome == Outcome::Fails {
        let phi0 = tn.value * tn.value;
        let g = |l: f64| {
            let n = op_norm_value(&t.axpy(l, a));
            n * n - phi0 + 2.0 * eps.value() * tn.value * an.value * l.abs()
        };
        let side = if c_plus <= c_minus {
            Side::NonNegative
        } else {
            Side::NonPositive
        };
        let r = minimize_convex_onesided(g, side, extent, 1e-10 * extent.max(1.0))?;
        verdict = verdict.with_lambda(r.argmin);
    }
    Ok(verdict)
}

// ---------------------------------------------------------------------------
// text format
// ---------------------------------------------------------------------------

/// Serializes in the line-oriented text format:
/// rows/cols/domain_p/codomain_p headers, then row-major entries.
pub fn op_to_text(t: &Op) -> String {
    let mut out = String::new();
    out.push_str(&format!("rows {}\n", t.matrix.nrows()));
    out.push_str(&format!("cols {}\n", t.matrix.ncols()));
    out.push_str(&format!("domain_p {}\n", t.domain.p));
    out.push_str(&format!("codomain_p {}\n", t.codomain.p));
    out.push_str("entries\n");
    for i in 0..t.matrix.nrows() {
        let row: Vec<String> = (0..t.matrix.ncols())
            .map(|j| format!("{}", t.matrix[(i, j)]))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_op_text(text: &str) -> Result<Op> {
    let mut rows = None;
    let mut cols = None;
    let mut dom_p = None;
    let mut cod_p = None;
    let mut lines = text.lines();
    let malformed = |msg: &str| BjError::MalformedMatrixFile(msg.into());
    loop {
        let line = lines
            .next()
            .ok_or_else(|| malformed("missing entries section"))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "entries" {
            break;
        }
        let (key, value) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| malformed("expected 'key value' header line"))?;
        let value = value.trim();
        match key {
            "rows" => {
                rows = Some(value.parse::<usize>().map_err(|_| malformed("bad rows"))?)
            }
            "cols" => {
                cols = Some(value.parse::<usize>().map_err(|_| malformed("bad cols"))?)
            }
            "domain_p" => {
                dom_p = Some(
                    Exponent::parse(value).map_err(|_| malformed("bad domain_p"))?,
                )
            }
            "codomain_p" => {
                cod_p = Some(
                    Exponent::parse(value).map_err(|_| malformed("bad codomain_p"))?,
                )
            }
            other => return Err(malformed(&format!("unknown header '{other}'"))),
        }
    }
    let rows = rows.ok_or_else(|| malformed("missing rows"))?;
    let cols = cols.ok_or_else(|| malformed("missing cols"))?;
    let dom_p = dom_p.ok_or_else(|| malformed("missing domain_p"))?;
    let cod_p = cod_p.ok_or_else(|| malformed("missing codomain_p"))?;
    if rows == 0 || cols == 0 {
        return Err(malformed("rows and cols must be >= 1"));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for line in lines {
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| malformed(&format!("bad entry '{tok}'")))?;
            entries.push(v);
        }
    }
    if entries.len() != rows * cols {
        return Err(malformed(&format!(
            "expected {} entries, got {}",
            rows * cols,
            entries.len()
        )));
    }
    Op::from_rows(
        rows,
        cols,
        &entries,
        NormSpec::lp(cols, dom_p)?,
        NormSpec::lp(rows, cod_p)?,
    )
}

pub fn read_op_file(path: &Path) -> Result<Op> {
    parse_op_text(&std::fs::read_to_string(path)?)
}

pub fn write_op_file(path: &Path, t: &Op) -> Result<()> {
    Ok(std::fs::write(path, op_to_text(t))?)
}

/// Diagonal operator on unweighted l2 whose norm 1 is attained only at ±e1
/// while the remaining diagonal climbs toward 1/2: entry k (1-based, k >= 2)
/// is 1/2 - 1/(k+2), so the norm restricted off e1 stays strictly below 1.
pub fn norm_gap_operator(dim: usize) -> Result<Op> {
    if dim < 2 {
        return Err(BjError::InvalidSpace(
            "norm gap operator needs dim >= 2".into(),
        ));
    }
    let mut m = DMatrix::zeros(dim, dim);
    m[(0, 0)] = 1.0;
    for k in 2..=dim {
        m[(k - 1, k - 1)] = 0.5 - 1.0 / (k as f64 + 2.0);
    }
    Op::new(m, NormSpec::euclidean(dim), NormSpec::euclidean(dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::sample_sphere;

    fn lp(dim: usize, p: f64) -> NormSpec {
        NormSpec::lp(dim, Exponent::finite(p).unwrap()).unwrap()
    }

    fn linf(dim: usize) -> NormSpec {
        NormSpec::lp(dim, Exponent::Infinity).unwrap()
    }

    fn op2(entries: [f64; 4], dom: NormSpec, cod: NormSpec) -> Op {
        Op::from_rows(2, 2, &entries, dom, cod).unwrap()
    }

    fn diag21_l2() -> Op {
        op2(
            [2.0, 0.0, 0.0, 1.0],
            NormSpec::euclidean(2),
            NormSpec::euclidean(2),
        )
    }

    fn random_op(dim: usize, dom: NormSpec, cod: NormSpec, seed: u64) -> Op {
        // reuse the normal sampler: rows of unit vectors scaled back up
        let rows = sample_sphere(&NormSpec::euclidean(dim), dim, seed);
        let entries: Vec<f64> = rows
            .iter()
            .flat_map(|r| r.coords.iter().map(|c| c * 3.0))
            .collect();
        Op::from_rows(dim, dim, &entries, dom, cod).unwrap()
    }

    #[test]
    fn frozen_operator_norms() {
        let n = op_norm(&diag21_l2()).unwrap();
        assert!((n.value - 2.0).abs() < 1e-12);
        assert!(!n.approximate);

        let t1 = op2([1.0, 2.0, 3.0, 4.0], lp(2, 1.0), lp(2, 1.0));
        let n1 = op_norm(&t1).unwrap();
        assert_eq!(n1.value, 6.0);
        assert!(!n1.approximate);

        let ti = op2([1.0, 2.0, 3.0, 4.0], linf(2), linf(2));
        let ni = op_norm(&ti).unwrap();
        assert_eq!(ni.value, 7.0);
        assert!(!ni.approximate);
    }

    #[test]
    fn zero_operator_norm_is_zero() {
        let z = op2([0.0; 4], linf(2), lp(2, 3.0));
        assert_eq!(op_norm(&z).unwrap().value, 0.0);
    }

    #[test]
    fn weighted_l2_operator_norm() {
        let dom = NormSpec::weighted(2, Exponent::Finite(2.0), vec![4.0, 1.0]).unwrap();
        let t = op2([1.0, 0.0, 0.0, 1.0], dom, NormSpec::euclidean(2));
        let n = op_norm(&t).unwrap();
        assert!((n.value - 1.0).abs() < 1e-12, "{}", n.value);
    }

    #[test]
    fn sign_enumeration_dimension_cap() {
        let n = 21;
        let m = DMatrix::identity(n, n);
        let t = Op::new(m, linf(n), linf(n)).unwrap();
        assert!(matches!(
            op_norm(&t),
            Err(BjError::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn operator_norm_axioms_on_exact_branches() {
        let cases = [
            (lp(3, 2.0), lp(3, 2.0)),
            (lp(3, 1.0), lp(3, 1.0)),
            (linf(3), linf(3)),
            (lp(3, 1.0), linf(3)),
        ];
        for (k, (dom, cod)) in cases.into_iter().enumerate() {
            let t = random_op(3, dom.clone(), cod.clone(), 100 + k as u64);
            let a = random_op(3, dom, cod, 200 + k as u64);
            let nt = op_norm(&t).unwrap().value;
            let na = op_norm(&a).unwrap().value;
            let nsum = op_norm(&t.axpy(1.0, &a)).unwrap().value;
            assert!(nsum <= nt + na + 1e-12, "triangle violated");
            let nscaled = op_norm(&t.scaled(-2.5)).unwrap().value;
            assert!((nscaled - 2.5 * nt).abs() <= 1e-12 * nt.max(1.0), "homogeneity");
        }
    }

    #[test]
    fn operator_norm_dominates_sampled_images_and_attains() {
        let cases = [
            (lp(3, 2.0), lp(3, 2.0)),
            (lp(3, 1.0), lp(3, 2.0)),
            (linf(3), lp(3, 1.0)),
            (lp(3, 3.0), lp(3, 2.0)), // approximate branch
        ];
        for (k, (dom, cod)) in cases.into_iter().enumerate() {
            let t = random_op(3, dom.clone(), cod.clone(), 300 + k as u64);
            let n = op_norm(&t).unwrap();
            for v in sample_sphere(&dom, 1000, 400 + k as u64) {
                let img = t.apply(&v).unwrap();
                assert!(
                    img.norm() <= n.value + 1e-9,
                    "sampled image beats operator norm"
                );
            }
            let att = attainment_set(&t).unwrap();
            assert!((att.attained_norm - n.value).abs() <= 1e-9 * n.value.max(1.0));
            for m in att.members() {
                assert!((m.norm() - 1.0).abs() < 1e-9, "member not unit");
                let img = t.apply(m).unwrap();
                assert!(
                    img.norm() >= n.value * (1.0 - 1e-9) - 1e-12,
                    "member does not attain: {} vs {}",
                    img.norm(),
                    n.value
                );
            }
        }
    }

    #[test]
    fn lambda_to_norm_is_convex() {
        let t = random_op(3, lp(3, 1.0), lp(3, 1.0), 55);
        let a = random_op(3, lp(3, 1.0), lp(3, 1.0), 56);
        for i in 0..50 {
            let l1 = -3.0 + 0.11 * i as f64;
            let l2 = l1 + 1.7;
            let mid = 0.5 * (l1 + l2);
            let n1 = op_norm(&t.axpy(l1, &a)).unwrap().value;
            let n2 = op_norm(&t.axpy(l2, &a)).unwrap().value;
            let nm = op_norm(&t.axpy(mid, &a)).unwrap().value;
            assert!(nm <= 0.5 * (n1 + n2) + 1e-12);
        }
    }

    #[test]
    fn attainment_shapes_on_frozen_examples() {
        let att = attainment_set(&diag21_l2()).unwrap();
        match &att.kind {
            AttainmentKind::Subsphere(basis) => {
                assert_eq!(basis.len(), 1);
                assert!(basis[0].coords[0].abs() > 1.0 - 1e-9);
                assert!(basis[0].coords[1].abs() < 1e-9);
            }
            other => panic!("expected subsphere, got {other:?}"),
        }
        assert!((att.tie_gap - 0.5).abs() < 1e-12);

        let id = op2(
            [1.0, 0.0, 0.0, 1.0],
            NormSpec::euclidean(2),
            NormSpec::euclidean(2),
        );
        let att_id = attainment_set(&id).unwrap();
        match &att_id.kind {
            AttainmentKind::Subsphere(basis) => assert_eq!(basis.len(), 2),
            other => panic!("expected full subsphere, got {other:?}"),
        }
        assert_eq!(att_id.tie_gap, f64::INFINITY);

        let t1 = op2([1.0, 2.0, 3.0, 4.0], lp(2, 1.0), lp(2, 1.0));
        let att1 = attainment_set(&t1).unwrap();
        match &att1.kind {
            AttainmentKind::FinitePoints(pts) => {
                assert_eq!(pts.len(), 2);
                assert!(pts.iter().any(|p| p.coords == vec![0.0, 1.0]));
                assert!(pts.iter().any(|p| p.coords == vec![0.0, -1.0]));
            }
            other => panic!("expected finite points, got {other:?}"),
        }
        assert!((att1.tie_gap - 1.0 / 3.0).abs() < 1e-12);

        let ti = op2([1.0, 2.0, 3.0, 4.0], linf(2), linf(2));
        match attainment_set(&ti).unwrap().kind {
            AttainmentKind::FinitePoints(pts) => {
                assert!(pts.iter().any(|p| p.coords == vec![1.0, 1.0]));
                assert!(pts.iter().any(|p| p.coords == vec![-1.0, -1.0]));
            }
            other => panic!("expected finite points, got {other:?}"),
        }
    }

    #[test]
    fn zero_operator_has_no_attainment_set() {
        let z = op2([0.0; 4], NormSpec::euclidean(2), NormSpec::euclidean(2));
        assert!(matches!(
            attainment_set(&z),
            Err(BjError::ZeroOperator(_))
        ));
    }

    #[test]
    fn restricted_complement_examples() {
        let t = diag21_l2();
        let e1 = Vector::new(vec![1.0, 0.0], NormSpec::euclidean(2)).unwrap();
        let e2 = Vector::new(vec![0.0, 1.0], NormSpec::euclidean(2)).unwrap();
        let r = restricted_norm_complement(&t, &[e1.clone()]).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let r2 = restricted_norm_complement(&t, &[e1.clone(), e2.clone()]).unwrap();
        assert!(r2.abs() < 1e-12, "empty complement must give 0, got {r2}");

        let skew = Vector::new(vec![0.6, 0.8], NormSpec::euclidean(2)).unwrap();
        assert!(restricted_norm_complement(&t, &[e1.clone(), skew]).is_err());

        let t1 = op2([1.0, 2.0, 3.0, 4.0], lp(2, 1.0), lp(2, 1.0));
        assert!(matches!(
            restricted_norm_complement(&t1, &[e1]),
            Err(BjError::NonHilbert)
        ));
    }

    #[test]
    fn norm_gap_operator_matches_closed_form() {
        let t = norm_gap_operator(50).unwrap();
        let n = op_norm(&t).unwrap();
        assert_eq!(n.value, 1.0, "top diagonal entry must be recovered exactly");
        let att = attainment_set(&t).unwrap();
        match &att.kind {
            AttainmentKind::Subsphere(basis) => {
                assert_eq!(basis.len(), 1);
                assert!(basis[0].coords[0].abs() > 1.0 - 1e-9);
            }
            other => panic!("expected subsphere, got {other:?}"),
        }
        let r = restricted_norm_complement(&t, att.members()).unwrap();
        assert!((r - (0.5 - 1.0 / 52.0)).abs() < 1e-12, "{r}");

        let t2 = norm_gap_operator(2).unwrap();
        assert_eq!(t2.matrix[(1, 1)], 0.25);
        assert!(norm_gap_operator(1).is_err());
    }

    #[test]
    fn op_bj_frozen_examples() {
        let t = diag21_l2();
        let nilp = op2(
            [0.0, 1.0, 0.0, 0.0],
            NormSpec::euclidean(2),
            NormSpec::euclidean(2),
        );
        let v = op_is_bj_orthogonal(&t, &nilp).unwrap();
        // the minimum over λ sits exactly at the ‖T‖ threshold
        assert!(v.is_satisfied());
        assert!(v.margin.abs() <= crate::vec_ortho::MARGINAL_BAND);
        assert!(!v.approximate);

        let v = op_is_bj_orthogonal(&t, &t).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        assert!((v.margin + 1.0).abs() < 1e-6);
        assert!((v.witness_lambda.unwrap() + 1.0).abs() < 1e-5);

        let z = op2([0.0; 4], NormSpec::euclidean(2), NormSpec::euclidean(2));
        assert_eq!(op_is_bj_orthogonal(&t, &z).unwrap().outcome, Outcome::Holds);
        assert_eq!(op_is_bj_orthogonal(&z, &t).unwrap().outcome, Outcome::Holds);
    }

    #[test]
    fn op_dragomir_frozen_example() {
        let t = diag21_l2();
        let id = op2(
            [1.0, 0.0, 0.0, 1.0],
            NormSpec::euclidean(2),
            NormSpec::euclidean(2),
        );
        // min over λ of max(|2+λ|, |1+λ|) is 1/2 at λ = -3/2
        let v = op_is_dragomir_orthogonal(&t, &id, Epsilon::new(0.1).unwrap()).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        let expected = (0.5 - (1.0f64 - 0.01).sqrt() * 2.0) / 2.0;
        assert!((v.margin - expected).abs() < 1e-6, "{}", v.margin);
        assert!((v.witness_lambda.unwrap() + 1.5).abs() < 1e-4);
    }

    #[test]
    fn op_chmielinski_frozen_examples() {
        let t = diag21_l2();
        let id = op2(
            [1.0, 0.0, 0.0, 1.0],
            NormSpec::euclidean(2),
            NormSpec::euclidean(2),
        );
        let v = op_is_chmielinski_orthogonal(&t, &id, Epsilon::new(0.5).unwrap()).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        // slopes of (2+λ)² at 0 are ±4; slack (−4 + 2·0.5·2)/(2·2) = −1/2
        assert!((v.margin + 0.5).abs() < 1e-6, "{}", v.margin);
        assert!(v.witness_lambda.is_some());

        let v = op_is_chmielinski_orthogonal(&t, &t, Epsilon::ZERO).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);

        let nilp = op2(
            [0.0, 1.0, 0.0, 0.0],
            NormSpec::euclidean(2),
            NormSpec::euclidean(2),
        );
        let v = op_is_chmielinski_orthogonal(&t, &nilp, Epsilon::new(0.3).unwrap()).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn op_shape_mismatch_rejected() {
        let t = diag21_l2();
        let a = op2([1.0, 0.0, 0.0, 1.0], lp(2, 1.0), lp(2, 1.0));
        assert!(op_is_bj_orthogonal(&t, &a).is_err());
    }

    #[test]
    fn text_format_roundtrip() {
        let t = op2([1.5, -2.0, 0.25, 1e-3], lp(2, 1.0), linf(2));
        let text = op_to_text(&t);
        let back = parse_op_text(&text).unwrap();
        assert_eq!(back.matrix, t.matrix);
        assert_eq!(back.domain, t.domain);
        assert_eq!(back.codomain, t.codomain);
    }

    #[test]
    fn text_format_rejects_malformed() {
        for bad in [
            "rows 2\ncols 2\ndomain_p 2\nentries\n1 0 0 1\n", // missing codomain_p
            "rows 2\ncols 2\ndomain_p 2\ncodomain_p 2\nentries\n1 0 0\n", // short entries
            "rows 2\ncols 2\ndomain_p 2\ncodomain_p 2\nentries\n1 0 0 1 5\n", // long
            "rows 2\ncols 2\ndomain_p 0.5\ncodomain_p 2\nentries\n1 0 0 1\n", // bad p
            "rows 2\ncols 2\ndomain_p 2\ncodomain_p 2\nentries\n1 0 zero 1\n", // bad token
            "rows x\ncols 2\ndomain_p 2\ncodomain_p 2\nentries\n1 0 0 1\n", // bad rows
            "rows 2\ncols 2\nwhat 3\ndomain_p 2\ncodomain_p 2\nentries\n1 0 0 1\n",
        ] {
            assert!(parse_op_text(bad).is_err(), "accepted: {bad}");
        }
        let inf = parse_op_text("rows 1\ncols 1\ndomain_p inf\ncodomain_p inf\nentries\n3\n")
            .unwrap();
        assert!(inf.domain.p.is_infinity());
        assert_eq!(op_norm(&inf).unwrap().value, 3.0);
    }

    #[test]
    fn approximate_flag_propagates_to_verdicts() {
        let dom = lp(2, 3.0);
        let t = op2([1.0, 0.2, -0.3, 0.8], dom.clone(), NormSpec::euclidean(2));
        let a = op2([0.1, 1.0, 0.4, -0.2], dom, NormSpec::euclidean(2));
        let v = op_is_bj_orthogonal(&t, &a).unwrap();
        assert!(v.approximate);
        let v = op_is_chmielinski_orthogonal(&t, &a, Epsilon::new(0.2).unwrap()).unwrap();
        assert!(v.approximate);
    }
}
