//! Weighted lp norms on R^n, the p = 2 inner product, norming functionals
//! at smooth points, and seeded sampling of unit spheres.
//!
//! Every predicate in this crate reduces to evaluations of `‖x + λy‖`, so the
//! hot path [`norm_axpy`] avoids allocation.

use crate::error::{BjError, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Norm exponent: a finite p >= 1 or the sup norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 1.0 {
            return Err(BjError::InvalidExponent(p));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// Parses "inf" or a decimal literal >= 1.
    pub fn parse(token: &str) -> Result<Self> {
        let t = token.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::Infinity);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| BjError::InvalidExponent(f64::NAN))?;
        Exponent::finite(p)
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// A finite-dimensional weighted lp space. Unit weights unless given.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    pub dim: usize,
    pub p: Exponent,
    pub weights: Option<Vec<f64>>,
}

impl NormSpec {
    pub fn lp(dim: usize, p: Exponent) -> Result<Self> {
        if dim == 0 {
            return Err(BjError::InvalidSpace("dim must be >= 1".into()));
        }
        Ok(NormSpec {
            dim,
            p,
            weights: None,
        })
    }

    pub fn weighted(dim: usize, p: Exponent, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(BjError::InvalidSpace("dim must be >= 1".into()));
        }
        if weights.len() != dim {
            return Err(BjError::DimensionMismatch {
                expected: dim,
                got: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(BjError::InvalidSpace(
                "weights must be finite and strictly positive".into(),
            ));
        }
        Ok(NormSpec {
            dim,
            p,
            weights: Some(weights),
        })
    }

    pub fn euclidean(dim: usize) -> Self {
        NormSpec::lp(dim, Exponent::Finite(2.0)).expect("dim >= 1")
    }

    pub fn is_euclidean(&self) -> bool {
        self.p == Exponent::Finite(2.0) && self.weights.is_none()
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    /// Dual space of a smooth lp space (1 < p < inf): exponent q = p/(p-1),
    /// weights w^(1-q), paired through the plain dot product.
    pub(crate) fn dual(&self) -> Result<NormSpec> {
        match self.p {
            Exponent::Finite(p) if p > 1.0 => {
                let q = p / (p - 1.0);
                let weights = self
                    .weights
                    .as_ref()
                    .map(|w| w.iter().map(|wi| wi.powf(1.0 - q)).collect());
                Ok(NormSpec {
                    dim: self.dim,
                    p: Exponent::Finite(q),
                    weights,
                })
            }
            _ => Err(BjError::NonSmoothNorm(self.p.to_string())),
        }
    }
}

/// A coordinate vector tagged with the space it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    pub coords: Vec<f64>,
    pub space: NormSpec,
}

impl Vector {
    pub fn new(coords: Vec<f64>, space: NormSpec) -> Result<Self> {
        if coords.len() != space.dim {
            return Err(BjError::DimensionMismatch {
                expected: space.dim,
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(BjError::InvalidSpace("non-finite coordinate".into()));
        }
        Ok(Vector { coords, space })
    }

    pub fn norm(&self) -> f64 {
        norm(&self.space, &self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0.0)
    }

    /// x + lambda * y, in the space of x.
    pub fn axpy(&self, lambda: f64, y: &Vector) -> Vector {
        debug_assert_eq!(self.coords.len(), y.coords.len());
        let coords = self
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| a + lambda * b)
            .collect();
        Vector {
            coords,
            space: self.space.clone(),
        }
    }

    pub fn scaled(&self, alpha: f64) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| alpha * c).collect(),
            space: self.space.clone(),
        }
    }
}

/// ‖x‖ in the given space.
pub fn norm(space: &NormSpec, coords: &[f64]) -> f64 {
    debug_assert_eq!(coords.len(), space.dim);
    match (space.p, &space.weights) {
        (Exponent::Infinity, None) => coords.iter().fold(0.0, |m, c| m.max(c.abs())),
        (Exponent::Infinity, Some(w)) => coords
            .iter()
            .zip(w)
            .fold(0.0, |m, (c, wi)| m.max(wi * c.abs())),
        (Exponent::Finite(p), weights) if p == 1.0 => match weights {
            None => coords.iter().map(|c| c.abs()).sum(),
            Some(w) => coords.iter().zip(w).map(|(c, wi)| wi * c.abs()).sum(),
        },
        (Exponent::Finite(p), weights) if p == 2.0 => {
            let s: f64 = match weights {
                None => coords.iter().map(|c| c * c).sum(),
                Some(w) => coords.iter().zip(w).map(|(c, wi)| wi * c * c).sum(),
            };
            s.sqrt()
        }
        (Exponent::Finite(p), weights) => {
            let s: f64 = match weights {
                None => coords.iter().map(|c| c.abs().powf(p)).sum(),
                Some(w) => coords
                    .iter()
                    .zip(w)
                    .map(|(c, wi)| wi * c.abs().powf(p))
                    .sum(),
            };
            s.powf(1.0 / p)
        }
    }
}

/// ‖x + λy‖ without building the intermediate vector.
pub fn norm_axpy(space: &NormSpec, x: &[f64], lambda: f64, y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    match (space.p, &space.weights) {
        (Exponent::Infinity, None) => x
            .iter()
            .zip(y)
            .fold(0.0, |m, (a, b)| m.max((a + lambda * b).abs())),
        (Exponent::Infinity, Some(w)) => x
            .iter()
            .zip(y)
            .zip(w)
            .fold(0.0, |m, ((a, b), wi)| m.max(wi * (a + lambda * b).abs())),
        (Exponent::Finite(p), weights) if p == 1.0 => match weights {
            None => x.iter().zip(y).map(|(a, b)| (a + lambda * b).abs()).sum(),
            Some(w) => x
                .iter()
                .zip(y)
                .zip(w)
                .map(|((a, b), wi)| wi * (a + lambda * b).abs())
                .sum(),
        },
        (Exponent::Finite(p), weights) if p == 2.0 => {
            let s: f64 = match weights {
                None => x
                    .iter()
                    .zip(y)
                    .map(|(a, b)| {
                        let t = a + lambda * b;
                        t * t
                    })
                    .sum(),
                Some(w) => x
                    .iter()
                    .zip(y)
                    .zip(w)
                    .map(|((a, b), wi)| {
                        let t = a + lambda * b;
                        wi * t * t
                    })
                    .sum(),
            };
            s.sqrt()
        }
        (Exponent::Finite(p), weights) => {
            let s: f64 = match weights {
                None => x
                    .iter()
                    .zip(y)
                    .map(|(a, b)| (a + lambda * b).abs().powf(p))
                    .sum(),
                Some(w) => x
                    .iter()
                    .zip(y)
                    .zip(w)
                    .map(|((a, b), wi)| wi * (a + lambda * b).abs().powf(p))
                    .sum(),
            };
            s.powf(1.0 / p)
        }
    }
}

/// Weighted dot product. Defined only when p = 2, where it induces the norm.
pub fn inner(x: &Vector, y: &Vector) -> Result<f64> {
    if x.space != y.space {
        return Err(BjError::SpaceMismatch);
    }
    if x.space.p != Exponent::Finite(2.0) {
        return Err(BjError::InnerProductUndefined(x.space.p.to_string()));
    }
    Ok(x.coords
        .iter()
        .zip(&y.coords)
        .enumerate()
        .map(|(i, (a, b))| x.space.weight(i) * a * b)
        .sum())
}

/// The unique norm-one functional attaining ‖x‖, for 1 < p < inf and x != 0.
///
/// Returned as a dual-space vector f with f(v) = Σ f_i v_i; coordinates are
/// proportional to sign(x_i) |x_i|^(p-1).
pub fn norming_functional(x: &Vector) -> Result<Vector> {
    let dual = x.space.dual()?;
    if x.is_zero() {
        return Err(BjError::ZeroVector("norming functional".into()));
    }
    let p = match x.space.p {
        Exponent::Finite(p) => p,
        Exponent::Infinity => unreachable!("dual() rejected p = inf"),
    };
    let n = x.norm();
    let coords = x
        .coords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if *c == 0.0 {
                return 0.0;
            }
            x.space.weight(i) * c.signum() * (c.abs() / n).powf(p - 1.0)
        })
        .collect();
    Vector::new(coords, dual)
}

/// Applies a dual vector to a primal one (plain dot product pairing).
pub fn pair(f: &Vector, v: &Vector) -> f64 {
    f.coords.iter().zip(&v.coords).map(|(a, b)| a * b).sum()
}

/// Reproducible generator used everywhere randomness is needed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` unit vectors drawn rotation-invariantly and renormalized.
///
/// Every returned vector has norm 1 within 1e-12 relative; sign orthants are
/// covered because the generator is a standard normal per coordinate.
pub fn sample_sphere(space: &NormSpec, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut coords: Vec<f64> = (0..space.dim)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let n = norm(space, &coords);
        if n < 1e-300 || !n.is_finite() {
            continue; // resample the (measure-zero) degenerate draw
        }
        for c in coords.iter_mut() {
            *c /= n;
        }
        // one corrective pass tightens the renormalization to ~1 ulp
        let n2 = norm(space, &coords);
        if (n2 - 1.0).abs() > 1e-15 {
            for c in coords.iter_mut() {
                *c /= n2;
            }
        }
        out.push(Vector {
            coords,
            space: space.clone(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(dim: usize, p: f64) -> NormSpec {
        NormSpec::lp(dim, Exponent::finite(p).unwrap()).unwrap()
    }

    fn linf(dim: usize) -> NormSpec {
        NormSpec::lp(dim, Exponent::Infinity).unwrap()
    }

    #[test]
    fn frozen_norm_values() {
        assert_eq!(norm(&lp(2, 2.0), &[3.0, 4.0]), 5.0);
        assert_eq!(norm(&lp(2, 1.0), &[1.0, -2.0]), 3.0);
        assert_eq!(norm(&linf(2), &[1.0, -2.0]), 2.0);
    }

    #[test]
    fn weighted_norm() {
        let s = NormSpec::weighted(2, Exponent::finite(1.0).unwrap(), vec![2.0, 3.0]).unwrap();
        assert_eq!(norm(&s, &[1.0, -1.0]), 5.0);
        let si = NormSpec::weighted(2, Exponent::Infinity, vec![2.0, 3.0]).unwrap();
        assert_eq!(norm(&si, &[1.0, -1.0]), 3.0);
    }

    #[test]
    fn inner_product_values() {
        let s = NormSpec::euclidean(2);
        let v = |c: [f64; 2]| Vector::new(c.to_vec(), s.clone()).unwrap();
        assert_eq!(inner(&v([1.0, 0.0]), &v([0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(inner(&v([1.0, 2.0]), &v([3.0, 4.0])).unwrap(), 11.0);
        assert_eq!(
            inner(&v([1.0, 0.0]), &v([0.5, 0.8660254])).unwrap(),
            0.5
        );
    }

    #[test]
    fn inner_rejects_non_euclidean() {
        let s = lp(2, 3.0);
        let x = Vector::new(vec![1.0, 0.0], s.clone()).unwrap();
        let y = Vector::new(vec![0.0, 1.0], s).unwrap();
        assert!(inner(&x, &y).is_err());
    }

    #[test]
    fn norming_functional_euclidean() {
        let s = NormSpec::euclidean(2);
        let x = Vector::new(vec![3.0, 4.0], s.clone()).unwrap();
        let f = norming_functional(&x).unwrap();
        assert!((f.coords[0] - 0.6).abs() < 1e-15);
        assert!((f.coords[1] - 0.8).abs() < 1e-15);
        let e1 = Vector::new(vec![1.0, 0.0], s).unwrap();
        let fe = norming_functional(&e1).unwrap();
        assert_eq!(fe.coords, vec![1.0, 0.0]);
    }

    #[test]
    fn norming_functional_p4_attains_and_has_dual_norm_one() {
        let s = lp(2, 4.0);
        let x = Vector::new(vec![1.0, 1.0], s.clone()).unwrap();
        let f = norming_functional(&x).unwrap();
        assert!((pair(&f, &x) - x.norm()).abs() < 1e-12, "f(x) = ‖x‖ fails");
        // dual norm checked numerically: sup of f over a sampled unit sphere
        let mut best: f64 = 0.0;
        for v in sample_sphere(&s, 20_000, 7) {
            best = best.max(pair(&f, &v).abs());
        }
        assert!(best <= 1.0 + 1e-9, "dual norm exceeds one: {best}");
        assert!(best > 1.0 - 1e-3, "dual norm sup not approached: {best}");
        // and exactly: dual-space norm of the coordinates is one
        assert!((f.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norming_functional_rejects_p1_and_inf() {
        let x1 = Vector::new(vec![1.0, 0.0], lp(2, 1.0)).unwrap();
        assert!(norming_functional(&x1).is_err());
        let xi = Vector::new(vec![1.0, 0.0], linf(2)).unwrap();
        assert!(norming_functional(&xi).is_err());
    }

    #[test]
    fn sphere_samples_have_unit_norm() {
        for p in [1.0, 1.5, 2.0, 3.0] {
            for v in sample_sphere(&lp(4, p), 200, 11) {
                assert!((v.norm() - 1.0).abs() <= 1e-12, "p={p}");
            }
        }
        for v in sample_sphere(&linf(4), 200, 11) {
            assert!((v.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn sphere_dim1_is_plus_minus_one() {
        let vs = sample_sphere(&lp(1, 1.0), 2, 0);
        for v in &vs {
            assert!((v.coords[0].abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sphere_covers_sign_orthants() {
        let vs = sample_sphere(&lp(2, 2.0), 400, 3);
        let mut seen = [false; 4];
        for v in &vs {
            let q = (v.coords[0] > 0.0) as usize * 2 + (v.coords[1] > 0.0) as usize;
            seen[q] = true;
        }
        assert!(seen.iter().all(|s| *s), "orthant coverage {seen:?}");
    }

    #[test]
    fn sphere_is_deterministic_per_seed() {
        let a = sample_sphere(&lp(3, 2.0), 50, 42);
        let b = sample_sphere(&lp(3, 2.0), 50, 42);
        assert_eq!(a, b);
        let c = sample_sphere(&lp(3, 2.0), 50, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn norm_axpy_matches_allocating_path() {
        for p in [1.0, 1.5, 2.0, 3.0] {
            let s = lp(3, p);
            let x = [0.3, -1.2, 0.7];
            let y = [1.1, 0.4, -0.9];
            for lambda in [-2.0, -0.5, 0.0, 0.25, 3.0] {
                let direct = norm_axpy(&s, &x, lambda, &y);
                let via_vec: Vec<f64> =
                    x.iter().zip(y).map(|(a, b)| a + lambda * b).collect();
                assert!((direct - norm(&s, &via_vec)).abs() < 1e-14);
            }
        }
    }
}
