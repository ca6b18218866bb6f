//! Coordinate finite-type test for the Gauss map: fit the constant matrix
//! `A` in `Δᴶ N = A N` over a sample grid and judge the residual.
//!
//! Row `i` of `A` solves the scalar least-squares problem
//! `(Δᴶ N)_i ≈ Σ_j a_ij N_j` over all samples; the three rows share one
//! orthogonal factorization of the stacked normals but are otherwise
//! independent.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::beltrami::{laplacian_vector, Form, VectorField};
use crate::error::{Error, Result};
use crate::geom::{Domain, Surface};
use crate::tolerance::{BETA_ZERO, EPS_BAND, RANK_TOL, TAU_FINITE, TAU_REJECT};
use crate::tubes::{tube_surface, TubeSpec};

type V3 = Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    /// `min + i (max - min) / count` for `i < count`.
    pub fn nodes(&self) -> Vec<f64> {
        let step = (self.max - self.min) / self.count as f64;
        (0..self.count).map(|i| self.min + i as f64 * step).collect()
    }
}

/// A rectangular sampling lattice in `(v1, v2)`.
///
/// `v1` nodes are `min + i (max - min) / count`, i.e. the upper end is
/// excluded. For surfaces with a singular band in `v2` and `eps_band > 0`,
/// the `v2` nodes are instead spread as cell centres over the admissible
/// part `{|cos v2| > eps_band}` of `[min, max)`; with `eps_band = 0` the
/// plain node lattice is used, which may land on `cos v2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub u: Axis,
    pub v: Axis,
    pub eps_band: f64,
}

impl Grid {
    pub fn over(domain: Domain, nu: usize, nv: usize, eps_band: f64) -> Self {
        Self {
            u: Axis { min: domain.v1[0], max: domain.v1[1], count: nu },
            v: Axis { min: domain.v2[0], max: domain.v2[1], count: nv },
            eps_band,
        }
    }

    /// Same ranges and band, each count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        let mut g = *self;
        g.u.count *= factor;
        g.v.count *= factor;
        g
    }

    fn validate(&self) -> Result<()> {
        for (name, a) in [("u", self.u), ("v", self.v)] {
            if a.count < 2 || !(a.min.is_finite() && a.max.is_finite() && a.max > a.min) {
                return Err(Error::InvalidSpec(format!("grid axis {name} = {a:?}")));
            }
        }
        if !(self.eps_band >= 0.0 && self.eps_band < FRAC_PI_2) {
            return Err(Error::InvalidSpec(format!("eps_band {} outside [0, pi/2)", self.eps_band)));
        }
        Ok(())
    }

    /// Admissible sub-intervals of the `v` range away from `cos v = 0`.
    fn admissible(&self) -> Result<Vec<(f64, f64)>> {
        if self.eps_band >= 1.0 {
            return Err(self.whole_band());
        }
        let w = self.eps_band.asin();
        let (lo, hi) = (self.v.min, self.v.max);
        let mut out = Vec::new();
        let mut start = lo;
        let mut k = ((lo - FRAC_PI_2 - w) / PI).floor() as i64;
        loop {
            let c = FRAC_PI_2 + k as f64 * PI;
            if c - w >= hi {
                break;
            }
            if c + w > start {
                if c - w > start {
                    out.push((start, c - w));
                }
                start = c + w;
            }
            k += 1;
        }
        if start < hi {
            out.push((start, hi));
        }
        Ok(out)
    }

    /// Every `v` in range is excluded; reported at the lower corner.
    fn whole_band(&self) -> Error {
        Error::SingularBand {
            u: self.u.min,
            phi: self.v.min,
            cos_phi: self.v.min.cos().abs(),
            eps_band: self.eps_band,
        }
    }

    fn banded_nodes(&self) -> Result<Vec<f64>> {
        let intervals = self.admissible()?;
        let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
        if total <= 0.0 {
            return Err(self.whole_band());
        }
        let n = self.v.count;
        Ok((0..n)
            .map(|j| {
                let mut s = (j as f64 + 0.5) * total / n as f64;
                for (a, b) in &intervals {
                    if s < b - a {
                        return a + s;
                    }
                    s -= b - a;
                }
                // only reachable through rounding in the last cell
                intervals[intervals.len() - 1].1
            })
            .collect())
    }

    /// All lattice points, `v2` varying fastest.
    pub fn points(&self, banded: bool) -> Result<Vec<(f64, f64)>> {
        self.validate()?;
        let us = self.u.nodes();
        let vs = if banded && self.eps_band > 0.0 {
            self.banded_nodes()?
        } else {
            self.v.nodes()
        };
        Ok(us
            .iter()
            .flat_map(|&u| vs.iter().map(move |&v| (u, v)))
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub id: usize,
    pub v1: f64,
    pub v2: f64,
    pub normal: V3,
    /// `Δᴶ N` at the sample.
    pub image: V3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSet {
    pub surface: String,
    pub form: Form,
    pub grid: Option<Grid>,
    pub samples: Vec<Sample>,
}

impl SampleSet {
    /// Samples from raw `(N, Δᴶ N)` pairs.
    pub fn from_pairs(form: Form, pairs: impl IntoIterator<Item = (V3, V3)>) -> Self {
        Self {
            surface: "synthetic".into(),
            form,
            grid: None,
            samples: pairs
                .into_iter()
                .enumerate()
                .map(|(id, (normal, image))| Sample { id, v1: id as f64, v2: 0.0, normal, image })
                .collect(),
        }
    }

    pub fn normals(&self) -> Vec<V3> {
        self.samples.iter().map(|s| s.normal).collect()
    }

    pub fn images(&self) -> Vec<V3> {
        self.samples.iter().map(|s| s.image).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Evaluates `Δᴶ N` at every grid point; the first singular sample aborts.
pub fn collect_samples(surface: &Surface, form: Form, grid: &Grid) -> Result<SampleSet> {
    let field = VectorField::gauss_map();
    let points = grid.points(surface.has_singular_band(form))?;
    let mut samples = Vec::with_capacity(points.len());
    for (id, (v1, v2)) in points.into_iter().enumerate() {
        surface.check_band(v1, v2, form, grid.eps_band)?;
        let geo = surface.local(v1, v2)?;
        let image = laplacian_vector(&geo, &field, form)?;
        let normal = geo.normal.value();
        if !((normal.norm() - 1.0).abs() < 1e-10) {
            return Err(Error::NonFinite(format!("non-unit normal at ({v1}, {v2})")));
        }
        samples.push(Sample { id, v1, v2, normal, image });
    }
    Ok(SampleSet {
        surface: surface.name().into(),
        form,
        grid: Some(*grid),
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    FiniteType,
    InfiniteType,
    Inconclusive,
    /// The sampled normals do not span 3-space; `A` is not unique.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    #[serde(rename = "A")]
    pub a: [[f64; 3]; 3],
    #[serde(skip)]
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub normalized_residual: f64,
    pub verdict: Verdict,
    pub singular_values: [f64; 3],
    pub min_singular_value: f64,
    pub rank_deficient: bool,
    /// `max |Σ (ΔN - A N) Nᵀ|` relative to `Σ |ΔN| |N|`.
    pub optimality: f64,
    pub samples: usize,
}

impl FitReport {
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.a[i][j])
    }
}

fn stacked(normals: &[V3]) -> DMatrix<f64> {
    DMatrix::from_fn(normals.len(), 3, |k, j| normals[k][j])
}

fn rank_threshold(sv: &[f64]) -> f64 {
    RANK_TOL * sv.iter().fold(0.0f64, |m, x| m.max(*x))
}

/// Minimum-norm solution of `stacked(normals) · x = rhs` (one column per
/// right-hand side) and the singular values, largest first. The tall system
/// is reduced by QR before the SVD: a direct SVD of the n×3 matrix can lose
/// several digits when two singular values nearly coincide.
fn min_norm_solve(normals: &[V3], rhs: DMatrix<f64>) -> Result<([f64; 3], DMatrix<f64>)> {
    let qr = stacked(normals).qr();
    let (q, r) = qr.unpack();
    let svd = r.svd(true, true);
    let mut sv = [0.0; 3];
    for (o, s) in sv.iter_mut().zip(svd.singular_values.iter()) {
        *o = *s;
    }
    sv.sort_by(|a, b| b.total_cmp(a));
    let x = svd.solve(&(q.transpose() * rhs), rank_threshold(&sv)).map_err(|e| Error::InvalidSpec(e.into()))?;
    Ok((sv, x))
}

/// Minimum-norm least-squares `x` with `Σ_k (N_k · x - rhs_k)²` minimal.
pub fn solve_least_squares(normals: &[V3], rhs: &[f64]) -> Result<V3> {
    if normals.is_empty() || normals.len() != rhs.len() {
        return Err(Error::InvalidSpec("least squares needs matching non-empty inputs".into()));
    }
    let (_, x) = min_norm_solve(normals, DMatrix::from_column_slice(rhs.len(), 1, rhs))?;
    Ok(V3::new(x[0], x[1], x[2]))
}

/// Best constant `A` with `images ≈ A · normals`.
pub fn fit_matrix(normals: &[V3], images: &[V3]) -> Result<FitReport> {
    let n = normals.len();
    if n == 0 || images.len() != n {
        return Err(Error::InvalidSpec("fit needs matching non-empty sample lists".into()));
    }
    if normals.iter().chain(images).any(|v| !v.iter().all(|x| x.is_finite())) {
        return Err(Error::NonFinite("fit samples".into()));
    }
    let (sv, x) = min_norm_solve(normals, DMatrix::from_fn(n, 3, |k, i| images[k][i]))?;
    let eps = rank_threshold(&sv);
    // column i of x is row i of A
    let a = Matrix3::from_fn(|i, j| x[(j, i)]);

    let residual_vecs: Vec<V3> = normals.iter().zip(images).map(|(nv, lv)| lv - a * nv).collect();
    let residuals: Vec<f64> = residual_vecs.iter().map(|r| r.norm()).collect();
    let rms = |xs: &mut dyn Iterator<Item = f64>| (xs.map(|x| x * x).sum::<f64>() / n as f64).sqrt();
    let rms_res = rms(&mut residuals.iter().copied());
    let rms_img = rms(&mut images.iter().map(|v| v.norm()));
    let normalized_residual = if rms_img > 0.0 { rms_res / rms_img } else { rms_res };

    let mut grad = Matrix3::zeros();
    let mut scale = 0.0;
    for ((r, nv), lv) in residual_vecs.iter().zip(normals).zip(images) {
        grad += r * nv.transpose();
        scale += lv.norm() * nv.norm();
    }
    let optimality = if scale > 0.0 { grad.amax() / scale } else { grad.amax() };

    let rank_deficient = n < 3 || sv[2] <= eps;
    let verdict = if rank_deficient {
        Verdict::Degenerate
    } else if normalized_residual < TAU_FINITE {
        Verdict::FiniteType
    } else if normalized_residual >= TAU_REJECT {
        Verdict::InfiniteType
    } else {
        Verdict::Inconclusive
    };
    Ok(FitReport {
        a: [0, 1, 2].map(|i| [0, 1, 2].map(|j| a[(i, j)])),
        max_residual: residuals.iter().fold(0.0, |m, x| m.max(*x)),
        residuals,
        normalized_residual,
        verdict,
        singular_values: sv,
        min_singular_value: sv[2],
        rank_deficient,
        optimality,
        samples: n,
    })
}

pub fn fit_coordinate_matrix(samples: &SampleSet) -> Result<FitReport> {
    fit_matrix(&samples.normals(), &samples.images())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TubeCase {
    /// `β ≡ 0`: the tube is an anchor ring.
    #[serde(rename = "I")]
    AnchorRing,
    /// `β ≠ 0` somewhere on the grid.
    #[serde(rename = "II")]
    General,
}

/// The pointwise `a₃₃` an anchor ring would need, over `φ ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct A33Evidence {
    pub at_zero: f64,
    pub at_half_pi: f64,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub case: TubeCase,
    pub max_abs_beta: f64,
    /// Grid point where `|β|` is largest.
    pub beta_witness: (f64, f64),
    pub a33: Option<A33Evidence>,
    pub fit: FitReport,
    pub verdict: Verdict,
}

const A33_SAMPLES: usize = 257;

/// Classifies the tube, gathers the case evidence and fits `Δᴵᴵ N = A N`.
pub fn theorem_check_tube(spec: &TubeSpec, grid: &Grid) -> Result<TheoremReport> {
    let surface = tube_surface(spec)?;
    let tube = surface.as_tube().expect("tube surface");
    let mut max_abs_beta = 0.0;
    let mut beta_witness = (f64::NAN, f64::NAN);
    for (u, phi) in grid.points(true)? {
        let b = tube.point(u, phi)?.beta.abs();
        if b > max_abs_beta || beta_witness.0.is_nan() {
            max_abs_beta = b;
            beta_witness = (u, phi);
        }
    }
    let case = if max_abs_beta < BETA_ZERO { TubeCase::AnchorRing } else { TubeCase::General };
    let a33 = match case {
        TubeCase::AnchorRing => {
            let vals: Vec<f64> = (0..A33_SAMPLES)
                .map(|i| tube.anchor_a33_profile(FRAC_PI_2 * i as f64 / (A33_SAMPLES - 1) as f64))
                .collect::<Result<_>>()?;
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Some(A33Evidence {
                at_zero: vals[0],
                at_half_pi: vals[A33_SAMPLES - 1],
                min,
                max,
                spread: max - min,
            })
        }
        TubeCase::General => None,
    };
    let samples = collect_samples(&surface, Form::Second, grid)?;
    let fit = fit_coordinate_matrix(&samples)?;
    Ok(TheoremReport {
        case,
        max_abs_beta,
        beta_witness,
        a33,
        verdict: fit.verdict,
        fit,
    })
}

/// Default lattice for a surface: its sampling rectangle at `n x m`.
pub fn default_grid(surface: &Surface, n: usize, m: usize) -> Grid {
    Grid::over(surface.sampling_domain(), n, m, EPS_BAND)
}
