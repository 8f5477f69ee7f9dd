//! Two-sided verifiers for the operator orthogonality characterizations.
//!
//! Each verifier evaluates the defining inequality (lhs) and the
//! characterizing condition (rhs) by independent computations and reports
//! whether they agree. Instances the numerics cannot adjudicate — margins
//! inside the marginal band, approximate norm paths, near-ties in the
//! attainment set, or existential searches limited by mesh resolution — are
//! skipped rather than counted as disagreements.

use nalgebra::DMatrix;

use crate::error::{BjError, Result};
use crate::linesearch::{minimize_convex, Bracket};
use crate::norms::{norm, NormSpec, Vector};
use crate::op_space::{
    attainment_set, op_is_bj_orthogonal, op_is_chmielinski_orthogonal,
    op_is_dragomir_orthogonal, op_norm, AttainmentKind, AttainmentSet, Op,
};
use crate::vec_ortho::{
    chmielinski_slacks_scaled, in_minus_cone, in_plus_cone, is_chmielinski_orthogonal,
    is_ip_approx_orthogonal, norm_scale, Epsilon, Outcome, Verdict, MARGINAL_BAND,
};

/// Relative attainment-tie threshold below which instances are skipped: the
/// verifiers cannot trust a cluster whose membership flips under 1e-6-level
/// perturbation.
pub const TIE_GAP_SKIP: f64 = 1e-6;

/// Mesh resolution for existential searches over a subsphere of dimension
/// two or more.
pub const SUBSPHERE_MESH: usize = 400;

const MESH_SEED: u64 = 1105;

#[derive(Debug, Clone, PartialEq)]
pub enum SkipReason {
    /// lhs margin inside the marginal band.
    MarginalLhs,
    /// rhs margin inside the marginal band.
    MarginalRhs,
    /// An approximate operator-norm path fed one of the sides.
    ApproximateNorm,
    /// The attainment cluster has a near-tie; membership is unreliable.
    AttainmentTie { gap: f64 },
    /// The attainment set does not have the shape the theorem hypothesis
    /// requires.
    HypothesisShape,
    /// The existential search over a continuum attainment set found no
    /// witness at mesh resolution while the defining side is satisfied;
    /// absence of a witness is not conclusive at this resolution.
    MeshInconclusive { mesh: usize },
}

/// Objects supporting the rhs decision.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WitnessRecord {
    /// Attaining vector backing the plus-side / primary condition.
    pub x: Option<Vector>,
    /// Attaining vector backing the minus-side condition.
    pub y: Option<Vector>,
    /// Interval or failure minimizer in lambda.
    pub lambda: Option<f64>,
    /// Decomposition witness, where a rhs produces one.
    pub z: Option<Vector>,
    /// Mesh size used for subsphere existential searches, when one ran.
    pub mesh: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremVerdict {
    pub lhs: Verdict,
    pub rhs: Verdict,
    /// lhs.outcome == rhs.outcome; meaningful only when skipped is false.
    pub agree: bool,
    pub skipped: bool,
    pub skip_reason: Option<SkipReason>,
    /// The secondary rhs form evaluated when the attainment sets nest
    /// (M_T inside M_A), where the theorems sharpen the characterization.
    pub moreover: Option<Verdict>,
    pub witnesses: WitnessRecord,
}

impl TheoremVerdict {
    fn trivial() -> Self {
        TheoremVerdict {
            lhs: Verdict::trivial_holds(),
            rhs: Verdict::trivial_holds(),
            agree: true,
            skipped: false,
            skip_reason: None,
            moreover: None,
            witnesses: WitnessRecord::default(),
        }
    }

    fn skipped_early(lhs: Verdict, reason: SkipReason) -> Self {
        TheoremVerdict {
            lhs,
            rhs: Verdict::from_margin(0.0),
            agree: false,
            skipped: true,
            skip_reason: Some(reason),
            moreover: None,
            witnesses: WitnessRecord::default(),
        }
    }

    fn assemble(
        lhs: Verdict,
        rhs: Verdict,
        moreover: Option<Verdict>,
        witnesses: WitnessRecord,
        mesh_limited_rescue: bool,
    ) -> Self {
        let mut skip_reason = None;
        if lhs.approximate || rhs.approximate {
            skip_reason = Some(SkipReason::ApproximateNorm);
        } else if mesh_limited_rescue && rhs.outcome == Outcome::Fails
            && lhs.outcome != Outcome::Fails
        {
            skip_reason = Some(SkipReason::MeshInconclusive {
                mesh: witnesses.mesh.unwrap_or(0),
            });
        } else if lhs.margin.abs() <= MARGINAL_BAND {
            skip_reason = Some(SkipReason::MarginalLhs);
        } else if rhs.margin.abs() <= MARGINAL_BAND {
            skip_reason = Some(SkipReason::MarginalRhs);
        }
        TheoremVerdict {
            agree: lhs.outcome == rhs.outcome,
            skipped: skip_reason.is_some(),
            skip_reason,
            lhs,
            rhs,
            moreover,
            witnesses,
        }
    }
}

// ---------------------------------------------------------------------------
// existential search over the attainment set
// ---------------------------------------------------------------------------

struct ProbeResult {
    best: Vector,
    value: f64,
    /// False when the search was a mesh over a continuum, so a negative
    /// maximum does not certify absence of a witness.
    exhaustive: bool,
    mesh: usize,
}

fn combine(basis: &[Vector], coeffs: &[f64], space: &NormSpec) -> Vector {
    let mut coords = vec![0.0; space.dim];
    for (c, b) in coeffs.iter().zip(basis) {
        for (o, bc) in coords.iter_mut().zip(&b.coords) {
            *o += c * bc;
        }
    }
    // basis orthonormality makes the combo unit; one corrective pass
    let n = norm(space, &coords);
    if n > 0.0 && (n - 1.0).abs() > 1e-15 {
        for c in coords.iter_mut() {
            *c /= n;
        }
    }
    Vector {
        coords,
        space: space.clone(),
    }
}

/// Maximizes `f` over the attainment set. Finite sets and one-dimensional
/// subspheres are scanned exhaustively; higher-dimensional subspheres get a
/// seeded coefficient mesh plus pattern-search refinement.
fn probe_max<F: Fn(&Vector) -> Result<f64>>(
    att: &AttainmentSet,
    domain: &NormSpec,
    f: &F,
) -> Result<ProbeResult> {
    let scan_points = |points: Vec<Vector>, exhaustive: bool, mesh: usize| -> Result<ProbeResult> {
        let mut best: Option<(f64, Vector)> = None;
        for p in points {
            let v = f(&p)?;
            if best.as_ref().map_or(true, |(bv, _)| v > *bv) {
                best = Some((v, p));
            }
        }
        let (value, bestp) = best.expect("attainment set is never empty");
        Ok(ProbeResult {
            best: bestp,
            value,
            exhaustive,
            mesh,
        })
    };

    match &att.kind {
        AttainmentKind::FinitePoints(points) => {
            scan_points(points.clone(), true, points.len())
        }
        AttainmentKind::Approximate { points, .. } => {
            scan_points(points.clone(), false, points.len())
        }
        AttainmentKind::Subsphere(basis) => {
            let d = basis.len();
            if d == 1 {
                let plus = basis[0].clone();
                let minus = basis[0].scaled(-1.0);
                return scan_points(vec![plus, minus], true, 2);
            }
            let coeff_space = NormSpec::euclidean(d);
            let mut mesh_coeffs =
                crate::norms::sample_sphere(&coeff_space, SUBSPHERE_MESH, MESH_SEED);
            for k in 0..d {
                for sgn in [1.0, -1.0] {
                    let mut c = vec![0.0; d];
                    c[k] = sgn;
                    mesh_coeffs.push(Vector {
                        coords: c,
                        space: coeff_space.clone(),
                    });
                }
            }
            let mut best_c = mesh_coeffs[0].coords.clone();
            let mut best_v = f(&combine(basis, &best_c, domain))?;
            for c in &mesh_coeffs[1..] {
                let v = f(&combine(basis, &c.coords, domain))?;
                if v > best_v {
                    best_v = v;
                    best_c = c.coords.clone();
                }
            }
            // pattern search on the coefficient sphere
            let mut step = 0.25;
            while step > 1e-7 {
                let mut moved = false;
                for k in 0..d {
                    for sgn in [1.0, -1.0] {
                        let mut cand = best_c.clone();
                        cand[k] += sgn * step;
                        let n: f64 = cand.iter().map(|c| c * c).sum::<f64>().sqrt();
                        if n < 1e-12 {
                            continue;
                        }
                        for c in cand.iter_mut() {
                            *c /= n;
                        }
                        let v = f(&combine(basis, &cand, domain))?;
                        if v > best_v {
                            best_v = v;
                            best_c = cand;
                            moved = true;
                        }
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            Ok(ProbeResult {
                best: combine(basis, &best_c, domain),
                value: best_v,
                exhaustive: false,
                mesh: SUBSPHERE_MESH,
            })
        }
    }
}

/// True when every member of `sub` lies in `sup` (within 1e-9): finite
/// points by distance, subspheres by span containment.
fn attainment_subset(sub: &AttainmentSet, sup: &AttainmentSet, domain: &NormSpec) -> bool {
    let in_sup = |v: &Vector| -> bool {
        match &sup.kind {
            AttainmentKind::FinitePoints(points) => points.iter().any(|p| {
                norm(
                    domain,
                    &v.coords
                        .iter()
                        .zip(&p.coords)
                        .map(|(a, b)| a - b)
                        .collect::<Vec<_>>(),
                ) < 1e-9
            }),
            AttainmentKind::Subsphere(basis) => {
                // residual of the projection onto the span, in the domain
                // inner product (basis is orthonormal there)
                let mut resid = v.coords.clone();
                for b in basis {
                    let w = |i: usize| domain.weights.as_ref().map_or(1.0, |w| w[i]);
                    let coef: f64 = v
                        .coords
                        .iter()
                        .zip(&b.coords)
                        .enumerate()
                        .map(|(i, (a, c))| w(i) * a * c)
                        .sum();
                    for (r, c) in resid.iter_mut().zip(&b.coords) {
                        *r -= coef * c;
                    }
                }
                norm(domain, &resid) < 1e-9
            }
            AttainmentKind::Approximate { .. } => false,
        }
    };
    match &sub.kind {
        AttainmentKind::FinitePoints(points) => points.iter().all(in_sup),
        AttainmentKind::Subsphere(basis) => {
            if basis.len() >= 2 && matches!(sup.kind, AttainmentKind::FinitePoints(_)) {
                return false; // a continuum never fits in a finite set
            }
            match basis.len() {
                1 => in_sup(&basis[0]) && in_sup(&basis[0].scaled(-1.0)),
                _ => basis.iter().all(in_sup),
            }
        }
        AttainmentKind::Approximate { .. } => false,
    }
}

fn checked_attainment(t: &Op, lhs: &Verdict) -> Result<std::result::Result<AttainmentSet, TheoremVerdict>> {
    let att = attainment_set(t)?;
    if !att.is_exact() || lhs.approximate {
        return Ok(Err(TheoremVerdict::skipped_early(
            lhs.clone(),
            SkipReason::ApproximateNorm,
        )));
    }
    if att.tie_gap < TIE_GAP_SKIP {
        return Ok(Err(TheoremVerdict::skipped_early(
            lhs.clone(),
            SkipReason::AttainmentTie { gap: att.tie_gap },
        )));
    }
    Ok(Ok(att))
}

fn require_same_shape(t: &Op, a: &Op) -> Result<()> {
    if t.domain != a.domain || t.codomain != a.codomain {
        return Err(BjError::SpaceMismatch);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verifiers
// ---------------------------------------------------------------------------

/// T ⊥_B A ⟺ some x ∈ M_T puts Ax in the plus cone of Tx and some y ∈ M_T
/// puts Ay in the minus cone of Ty.
pub fn verify_bj_char(t: &Op, a: &Op) -> Result<TheoremVerdict> {
    require_same_shape(t, a)?;
    if t.is_zero() || a.is_zero() {
        return Ok(TheoremVerdict::trivial());
    }
    let lhs = op_is_bj_orthogonal(t, a)?;
    let att = match checked_attainment(t, &lhs)? {
        Ok(att) => att,
        Err(skip) => return Ok(skip),
    };
    let plus = probe_max(&att, &t.domain, &|x| {
        Ok(in_plus_cone(&t.apply(x)?, &a.apply(x)?)?.margin)
    })?;
    let minus = probe_max(&att, &t.domain, &|x| {
        Ok(in_minus_cone(&t.apply(x)?, &a.apply(x)?)?.margin)
    })?;
    let rhs = Verdict::from_margin(plus.value.min(minus.value));
    let mesh_limited = !plus.exhaustive || !minus.exhaustive;
    let witnesses = WitnessRecord {
        x: Some(plus.best),
        y: Some(minus.best),
        mesh: (!plus.exhaustive || !minus.exhaustive).then_some(plus.mesh.max(minus.mesh)),
        ..Default::default()
    };
    Ok(TheoremVerdict::assemble(
        lhs,
        rhs,
        None,
        witnesses,
        mesh_limited,
    ))
}

/// T ⊥_D^eps A ⟺ (a) some x ∈ M_T has Ax in the plus cone of Tx and the
/// norm of T+λA stays above sqrt(1-eps²)‖T‖ on the left interval, or (b) the
/// mirrored condition with the minus cone and the right interval.
pub fn verify_dragomir_char(t: &Op, a: &Op, eps: Epsilon) -> Result<TheoremVerdict> {
    require_same_shape(t, a)?;
    if t.is_zero() || a.is_zero() {
        return Ok(TheoremVerdict::trivial());
    }
    let lhs = op_is_dragomir_orthogonal(t, a, eps)?;
    let att = match checked_attainment(t, &lhs)? {
        Ok(att) => att,
        Err(skip) => return Ok(skip),
    };
    let tn = att.attained_norm;
    let an = op_norm(a)?.value;
    let s = eps.shrink();
    let r = tn / an;
    let threshold = s * tn;

    let interval_margin = |lo: f64, hi: f64| -> Result<(f64, f64)> {
        let f = |l: f64| op_norm(&t.axpy(l, a)).map_or(f64::NAN, |n| n.value);
        let res = minimize_convex(f, Bracket::new(lo, hi)?, 1e-10 * (hi - lo).max(1.0))?;
        Ok(((res.minval - threshold) / norm_scale(tn), res.argmin))
    };

    let plus = probe_max(&att, &t.domain, &|x| {
        Ok(in_plus_cone(&t.apply(x)?, &a.apply(x)?)?.margin)
    })?;
    let (int_a, arg_a) = interval_margin((-1.0 - s) * r, (-1.0 + s) * r)?;
    let margin_a = plus.value.min(int_a);

    let minus = probe_max(&att, &t.domain, &|x| {
        Ok(in_minus_cone(&t.apply(x)?, &a.apply(x)?)?.margin)
    })?;
    let (int_b, arg_b) = interval_margin((1.0 - s) * r, (1.0 + s) * r)?;
    let margin_b = minus.value.min(int_b);

    let rhs = Verdict::from_margin(margin_a.max(margin_b));
    // a missed mesh witness can only rescue a branch whose interval part is
    // already satisfied
    let mesh_limited = (!plus.exhaustive && int_a >= -MARGINAL_BAND && plus.value < -MARGINAL_BAND)
        || (!minus.exhaustive && int_b >= -MARGINAL_BAND && minus.value < -MARGINAL_BAND);
    let witnesses = WitnessRecord {
        x: Some(plus.best),
        y: Some(minus.best),
        lambda: Some(if margin_a >= margin_b { arg_a } else { arg_b }),
        mesh: (!plus.exhaustive).then_some(plus.mesh),
        ..Default::default()
    };
    Ok(TheoremVerdict::assemble(
        lhs,
        rhs,
        None,
        witnesses,
        mesh_limited,
    ))
}

fn is_l2(space: &NormSpec) -> bool {
    space.p == crate::norms::Exponent::Finite(2.0)
}

/// Smallest |c'Rc| over the unit sphere of coefficients, with a coefficient
/// vector attaining it. R must be symmetric.
fn min_abs_quadratic(r: &DMatrix<f64>) -> (f64, Vec<f64>) {
    let d = r.nrows();
    if d == 1 {
        return (r[(0, 0)].abs(), vec![1.0]);
    }
    let eig = nalgebra::linalg::SymmetricEigen::new(r.clone());
    let mut lo = 0usize;
    let mut hi = 0usize;
    for k in 0..d {
        if eig.eigenvalues[k] < eig.eigenvalues[lo] {
            lo = k;
        }
        if eig.eigenvalues[k] > eig.eigenvalues[hi] {
            hi = k;
        }
    }
    let (lmin, lmax) = (eig.eigenvalues[lo], eig.eigenvalues[hi]);
    let col = |k: usize| -> Vec<f64> { (0..d).map(|i| eig.eigenvectors[(i, k)]).collect() };
    if lmin >= 0.0 {
        (lmin, col(lo))
    } else if lmax <= 0.0 {
        (-lmax, col(hi))
    } else {
        // mix the extreme eigenvectors to a null direction of the form:
        // lmin cos² + lmax sin² = 0
        let tan2 = -lmin / lmax;
        let (c, s) = (1.0 / (1.0 + tan2).sqrt(), (tan2 / (1.0 + tan2)).sqrt());
        let vlo = col(lo);
        let vhi = col(hi);
        let mix: Vec<f64> = vlo.iter().zip(&vhi).map(|(a, b)| c * a + s * b).collect();
        (0.0, mix)
    }
}

/// Hilbert-space form: T ⊥_B^eps A ⟺ |⟨Tx, Ax⟩| <= eps‖T‖‖A‖ for some
/// x ∈ M_T. The minimum of |⟨Tx, Ax⟩| over the attainment subsphere is exact
/// via the eigenvalues of the restricted symmetrized form.
pub fn verify_hilbert_char(t: &Op, a: &Op, eps: Epsilon) -> Result<TheoremVerdict> {
    require_same_shape(t, a)?;
    if !is_l2(&t.domain) || !is_l2(&t.codomain) {
        return Err(BjError::NonHilbert);
    }
    if t.is_zero() || a.is_zero() {
        return Ok(TheoremVerdict::trivial());
    }
    let lhs = op_is_chmielinski_orthogonal(t, a, eps)?;
    let att = match checked_attainment(t, &lhs)? {
        Ok(att) => att,
        Err(skip) => return Ok(skip),
    };
    let AttainmentKind::Subsphere(basis) = &att.kind else {
        unreachable!("l2 attainment is always a subsphere");
    };
    let tn = att.attained_norm;
    let an = op_norm(a)?.value;

    // structural side: off the attaining subspace the operator stays
    // strictly below its norm (the tie-gap gate above guarantees this);
    // with full-sphere attainment the complement is empty and the bound
    // is vacuous
    let complement = crate::op_space::restricted_norm_complement(t, basis)?;
    debug_assert!(complement <= tn * (1.0 + 1e-6) + MARGINAL_BAND);

    // R = B' (T' C A + A' C T)/2 B restricted to the attainment subspace
    let n = t.domain.dim;
    let d = basis.len();
    let mut ca = a.matrix.clone();
    if let Some(w) = &t.codomain.weights {
        for (i, wi) in w.iter().enumerate() {
            for j in 0..n {
                ca[(i, j)] *= wi;
            }
        }
    }
    let m1 = t.matrix.transpose() * ca;
    let sym = (&m1 + m1.transpose()) * 0.5;
    let mut b = DMatrix::zeros(n, d);
    for (k, bv) in basis.iter().enumerate() {
        for i in 0..n {
            b[(i, k)] = bv.coords[i];
        }
    }
    let restricted = b.transpose() * sym * &b;
    let (min_abs, coeffs) = min_abs_quadratic(&restricted);
    let scale = (tn * an).max(1.0);
    let rhs = Verdict::from_margin((eps.value() * tn * an - min_abs) / scale);

    let witness_x = combine(basis, &coeffs, &t.domain);
    // sharper form when the attainment sets nest: the inner-product check at
    // the minimizer, against eps‖Tx‖‖Ax‖
    let moreover = match attainment_set(a) {
        Ok(att_a) if attainment_subset(&att, &att_a, &t.domain) => Some(
            is_ip_approx_orthogonal(&t.apply(&witness_x)?, &a.apply(&witness_x)?, eps)?,
        ),
        _ => None,
    };
    let witnesses = WitnessRecord {
        x: Some(witness_x),
        ..Default::default()
    };
    Ok(TheoremVerdict::assemble(lhs, rhs, moreover, witnesses, false))
}

/// Shared rhs kernel for the quadratic-variant theorems: per-side slacks of
/// ‖Tx + λAx‖² >= ‖T‖² - 2eps‖T‖‖A‖|λ| at a given attaining x.
fn image_slacks(t: &Op, a: &Op, x: &Vector, eps: Epsilon, tn: f64, an: f64) -> Result<(f64, f64)> {
    chmielinski_slacks_scaled(&t.apply(x)?, &a.apply(x)?, eps, tn, an)
}

/// Compact-operator form: T ⊥_B^eps A ⟺ some x ∈ M_T satisfies the
/// quadratic inequality in both λ directions at once. Requires M_T to be an
/// antipodal pair or a subsphere.
pub fn verify_compact_char(t: &Op, a: &Op, eps: Epsilon) -> Result<TheoremVerdict> {
    require_same_shape(t, a)?;
    if t.is_zero() || a.is_zero() {
        return Ok(TheoremVerdict::trivial());
    }
    let lhs = op_is_chmielinski_orthogonal(t, a, eps)?;
    let att = match checked_attainment(t, &lhs)? {
        Ok(att) => att,
        Err(skip) => return Ok(skip),
    };
    let pair_like = match &att.kind {
        AttainmentKind::Subsphere(_) => true,
        AttainmentKind::FinitePoints(points) => points.len() == 2,
        AttainmentKind::Approximate { .. } => false,
    };
    if !pair_like {
        return Ok(TheoremVerdict::skipped_early(
            lhs,
            SkipReason::HypothesisShape,
        ));
    }
    let tn = att.attained_norm;
    let an = op_norm(a)?.value;
    let probe = probe_max(&att, &t.domain, &|x| {
        let (cp, cm) = image_slacks(t, a, x, eps, tn, an)?;
        Ok(cp.min(cm))
    })?;
    let rhs = Verdict::from_margin(probe.value);
    let moreover = match attainment_set(a) {
        Ok(att_a) if attainment_subset(&att, &att_a, &t.domain) => Some(
            is_chmielinski_orthogonal(&t.apply(&probe.best)?, &a.apply(&probe.best)?, eps)?,
        ),
        _ => None,
    };
    let mesh_limited = !probe.exhaustive;
    let witnesses = WitnessRecord {
        x: Some(probe.best),
        mesh: (!probe.exhaustive).then_some(probe.mesh),
        ..Default::default()
    };
    Ok(TheoremVerdict::assemble(
        lhs,
        rhs,
        moreover,
        witnesses,
        mesh_limited,
    ))
}

/// Complete compact form: independent witnesses per λ-sign — some x ∈ M_T
/// handles λ >= 0 and some y ∈ M_T handles λ <= 0.
pub fn verify_compact_complete_char(t: &Op, a: &Op, eps: Epsilon) -> Result<TheoremVerdict> {
    require_same_shape(t, a)?;
    if t.is_zero() || a.is_zero() {
        return Ok(TheoremVerdict::trivial());
    }
    let lhs = op_is_chmielinski_orthogonal(t, a, eps)?;
    let att = match checked_attainment(t, &lhs)? {
        Ok(att) => att,
        Err(skip) => return Ok(skip),
    };
    let tn = att.attained_norm;
    let an = op_norm(a)?.value;
    let plus = probe_max(&att, &t.domain, &|x| {
        Ok(image_slacks(t, a, x, eps, tn, an)?.0)
    })?;
    let minus = probe_max(&att, &t.domain, &|x| {
        Ok(image_slacks(t, a, x, eps, tn, an)?.1)
    })?;
    let rhs = Verdict::from_margin(plus.value.min(minus.value));
    let mesh_limited = (!plus.exhaustive && plus.value < -MARGINAL_BAND)
        || (!minus.exhaustive && minus.value < -MARGINAL_BAND);
    let witnesses = WitnessRecord {
        x: Some(plus.best),
        y: Some(minus.best),
        mesh: (!plus.exhaustive).then_some(plus.mesh),
        ..Default::default()
    };
    Ok(TheoremVerdict::assemble(
        lhs,
        rhs,
        None,
        witnesses,
        mesh_limited,
    ))
}

/// Finite-dimensional degeneration of the bounded-operator form: either some
/// x ∈ M_T has ‖Ax‖ <= eps‖A‖, or the per-sign witnesses of the complete
/// compact form exist. In finite dimensions norming sequences cluster inside
/// M_T and the vanishing-parameter cones collapse, so this reformulation is
/// equivalent — that equivalence is itself under test here.
pub fn verify_bounded_char_findim(t: &Op, a: &Op, eps: Epsilon) -> Result<TheoremVerdict> {
    require_same_shape(t, a)?;
    if t.is_zero() || a.is_zero() {
        return Ok(TheoremVerdict::trivial());
    }
    let lhs = op_is_chmielinski_orthogonal(t, a, eps)?;
    let att = match checked_attainment(t, &lhs)? {
        Ok(att) => att,
        Err(skip) => return Ok(skip),
    };
    let tn = att.attained_norm;
    let an = op_norm(a)?.value;
    let small_image = probe_max(&att, &t.domain, &|x| {
        Ok((eps.value() * an - a.apply(x)?.norm()) / norm_scale(an))
    })?;
    let plus = probe_max(&att, &t.domain, &|x| {
        Ok(image_slacks(t, a, x, eps, tn, an)?.0)
    })?;
    let minus = probe_max(&att, &t.domain, &|x| {
        Ok(image_slacks(t, a, x, eps, tn, an)?.1)
    })?;
    let margin_b = plus.value.min(minus.value);
    let rhs = Verdict::from_margin(small_image.value.max(margin_b));
    let mesh_limited = !small_image.exhaustive && rhs.outcome == Outcome::Fails;
    let witnesses = WitnessRecord {
        x: Some(if small_image.value >= margin_b {
            small_image.best
        } else {
            plus.best
        }),
        y: Some(minus.best),
        mesh: (!small_image.exhaustive).then_some(small_image.mesh),
        ..Default::default()
    };
    Ok(TheoremVerdict::assemble(
        lhs,
        rhs,
        None,
        witnesses,
        mesh_limited,
    ))
}
