//! Finite-difference oracles. They only ever read positions (or scalar
//! values) at displaced parameters, never the jet partials under test.
#![allow(dead_code)]

use nalgebra::{Matrix2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tubular::frenet::CurveSpec;
use tubular::geom::{Surface, SurfaceSpec};

pub type V3 = Vector3<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn torus_spec() -> SurfaceSpec {
    SurfaceSpec::Tube { curve: CurveSpec::Circle { kappa: 1.0 }, radius: 0.5 }
}

pub fn helix_tube_spec() -> SurfaceSpec {
    SurfaceSpec::Tube { curve: CurveSpec::Helix { a: 1.0, c: 1.0 }, radius: 0.5 }
}

/// A tube over a curve with varying curvature and torsion (β ≠ 0 through κ' too).
pub fn fourier_tube_spec() -> SurfaceSpec {
    let curve: CurveSpec = serde_json::from_str(
        r#"{"family":"fourier","params":{"kappa":{"c0":0.8,"cos":[0.2],"sin":[0.0,0.1]},"tau":{"c0":0.3,"sin":[0.25]},"domain":[0.0,6.283185307179586]}}"#,
    )
    .unwrap();
    SurfaceSpec::Tube { curve, radius: 0.4 }
}

pub fn ellipsoid_spec() -> SurfaceSpec {
    SurfaceSpec::Ellipsoid { a: 1.0, b: 1.3, c: 0.7 }
}

pub fn surface(spec: SurfaceSpec) -> Surface {
    Surface::new(spec).unwrap()
}

/// Uniform random parameters inside the surface's sampling rectangle,
/// rejecting `|cos v2| <= band` when `band` is given.
pub fn random_points(s: &Surface, n: usize, seed: u64, band: Option<f64>) -> Vec<(f64, f64)> {
    let d = s.sampling_domain();
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v1 = r.gen_range(d.v1[0]..d.v1[1]);
        let v2 = r.gen_range(d.v2[0]..d.v2[1]);
        if band.map_or(true, |b| v2.cos().abs() > b) {
            out.push((v1, v2));
        }
    }
    out
}

/// Central difference with one Richardson step; `f` scalar in one variable.
pub fn richardson(f: impl Fn(f64) -> f64, h: f64, order: usize) -> f64 {
    let d = |h: f64| match order {
        1 => (f(h) - f(-h)) / (2.0 * h),
        2 => (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h),
        3 => (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h * h * h),
        _ => unreachable!(),
    };
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

pub fn fd_vec(f: impl Fn(f64) -> V3, h: f64, order: usize) -> V3 {
    V3::from_fn(|i, _| richardson(|s| f(s)[i], h, order))
}

/// Position-only surface evaluation.
pub fn pos(s: &Surface, v1: f64, v2: f64) -> V3 {
    s.jet(v1, v2).unwrap().partial(0, 0)
}

/// `∂^(i+j) r` by finite differences of positions.
pub fn fd_partial(s: &Surface, v1: f64, v2: f64, i: usize, j: usize, h: f64) -> V3 {
    match (i, j) {
        (0, 0) => pos(s, v1, v2),
        (1, 0) | (2, 0) | (3, 0) => fd_vec(|e| pos(s, v1 + e, v2), h, i),
        (0, 1) | (0, 2) | (0, 3) => fd_vec(|e| pos(s, v1, v2 + e), h, j),
        (1, 1) => fd_vec(|e| fd_vec(|w| pos(s, v1 + e, v2 + w), h, 1), h, 1),
        _ => unimplemented!(),
    }
}

/// Forms `(g, b)` and unit normal from finite differences of positions.
pub fn fd_forms(s: &Surface, v1: f64, v2: f64, h: f64) -> (Matrix2<f64>, Matrix2<f64>, V3) {
    let r1 = fd_partial(s, v1, v2, 1, 0, h);
    let r2 = fd_partial(s, v1, v2, 0, 1, h);
    let r11 = fd_partial(s, v1, v2, 2, 0, h);
    let r12 = fd_partial(s, v1, v2, 1, 1, h);
    let r22 = fd_partial(s, v1, v2, 0, 2, h);
    let n = r1.cross(&r2).normalize();
    let g = Matrix2::new(r1.dot(&r1), r1.dot(&r2), r1.dot(&r2), r2.dot(&r2));
    let b = Matrix2::new(r11.dot(&n), r12.dot(&n), r12.dot(&n), r22.dot(&n));
    (g, b, n)
}

/// `(K, H)` from finite-difference forms.
pub fn fd_curvatures(s: &Surface, v1: f64, v2: f64) -> (f64, f64) {
    let (g, b, _) = fd_forms(s, v1, v2, 1e-3);
    let k = b.determinant() / g.determinant();
    let h = (g[(0, 0)] * b[(1, 1)] - 2.0 * g[(0, 1)] * b[(0, 1)] + g[(1, 1)] * b[(0, 0)])
        / (2.0 * g.determinant());
    (k, h)
}

/// `-(1/√|det a|) ∂_s (√|det a| a^st ∂_t p)` with the form `a` and the scalar
/// `p` both differentiated numerically.
pub fn fd_laplacian(
    form: impl Fn(f64, f64) -> Matrix2<f64>,
    p: impl Fn(f64, f64) -> f64,
    v1: f64,
    v2: f64,
    h: f64,
) -> f64 {
    let flux = |x: f64, y: f64, s: usize| -> f64 {
        let a = form(x, y);
        let inv = a.try_inverse().unwrap();
        let w = a.determinant().abs().sqrt();
        let dp = [
            richardson(|e| p(x + e, y), h, 1),
            richardson(|e| p(x, y + e), h, 1),
        ];
        w * (inv[(s, 0)] * dp[0] + inv[(s, 1)] * dp[1])
    };
    let div = richardson(|e| flux(v1 + e, v2, 0), h, 1) + richardson(|e| flux(v1, v2 + e, 1), h, 1);
    -div / form(v1, v2).determinant().abs().sqrt()
}
