//! Parametric surfaces: jets, fundamental forms, Gauss map and curvatures.
//!
//! Every surface is evaluated through its defining formula in jet arithmetic,
//! so a [`SurfaceJet`] holds all partials of the position to total order 3.
//! [`LocalGeometry`] then derives the forms, the unit normal and the
//! curvatures as jets, keeping enough derivatives for Christoffel symbols of
//! the second and third forms.
//!
//! Orientation: `N = (r1 x r2) / |r1 x r2|` with parameters ordered `(v1, v2)`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Vector3};
use serde::{Deserialize, Serialize};

use crate::beltrami::Form;
use crate::error::{Error, Result};
use crate::frenet::CurveSpec;
use crate::jet::{Jet, VecJet};
use crate::tolerance::{COS_ZERO, REGULARITY};
use crate::tubes::Tube;

type V3 = Vector3<f64>;

/// Serialized as `{"kind": "tube", "curve": {...}, "radius": 0.5}` and so on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SurfaceSpec {
    /// `(v1, v2, 0)`.
    Plane,
    /// Colatitude/longitude chart `R (sinθ cosϕ, sinθ sinϕ, cosθ)`.
    Sphere {
        #[serde(default = "one")]
        radius: f64,
    },
    /// `(a sinθ cosϕ, b sinθ sinϕ, c cosθ)`.
    Ellipsoid { a: f64, b: f64, c: f64 },
    /// `(ρ cos u, ρ sin u, v)`, axis along z.
    Cylinder { radius: f64 },
    /// `a(u) + r cosφ h(u) + r sinφ b(u)`.
    Tube { curve: CurveSpec, radius: f64 },
}

fn one() -> f64 {
    1.0
}

/// Closed rectangle of admissible parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub v1: [f64; 2],
    pub v2: [f64; 2],
}

impl Domain {
    pub fn contains(&self, v1: f64, v2: f64) -> bool {
        v1 >= self.v1[0] && v1 <= self.v1[1] && v2 >= self.v2[0] && v2 <= self.v2[1]
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Plane,
    Sphere(f64),
    Ellipsoid(f64, f64, f64),
    Cylinder(f64),
    Tube(Box<Tube>),
}

/// A surface ready for evaluation.
#[derive(Debug, Clone)]
pub struct Surface {
    spec: SurfaceSpec,
    kind: Kind,
    domain: Domain,
    sampling: Domain,
}

impl Surface {
    pub fn new(spec: SurfaceSpec) -> Result<Self> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(x)
            } else {
                Err(Error::InvalidSpec(format!("{name} must be positive, got {x}")))
            }
        };
        let angle = [-TAU, TAU];
        let colat = [1e-4, PI - 1e-4];
        let (kind, domain, sampling) = match &spec {
            SurfaceSpec::Plane => (
                Kind::Plane,
                Domain { v1: [-1e3, 1e3], v2: [-1e3, 1e3] },
                Domain { v1: [-1.0, 1.0], v2: [-1.0, 1.0] },
            ),
            SurfaceSpec::Sphere { radius } => (
                Kind::Sphere(positive("sphere radius", *radius)?),
                Domain { v1: colat, v2: angle },
                Domain { v1: [0.2, PI - 0.2], v2: [0.0, TAU] },
            ),
            SurfaceSpec::Ellipsoid { a, b, c } => (
                Kind::Ellipsoid(positive("a", *a)?, positive("b", *b)?, positive("c", *c)?),
                Domain { v1: colat, v2: angle },
                Domain { v1: [0.2, PI - 0.2], v2: [0.0, TAU] },
            ),
            SurfaceSpec::Cylinder { radius } => (
                Kind::Cylinder(positive("cylinder radius", *radius)?),
                Domain { v1: angle, v2: [-1e3, 1e3] },
                Domain { v1: [0.0, TAU], v2: [-1.0, 1.0] },
            ),
            SurfaceSpec::Tube { curve, radius } => {
                let tube = Tube::new(curve.clone(), *radius)?;
                let [lo, hi] = tube.curve().domain();
                let range = tube.curve().default_range();
                (
                    Kind::Tube(Box::new(tube)),
                    Domain { v1: [lo, hi], v2: angle },
                    Domain { v1: range, v2: [0.0, TAU] },
                )
            }
        };
        Ok(Self { spec, kind, domain, sampling })
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            Kind::Plane => "plane",
            Kind::Sphere(_) => "sphere",
            Kind::Ellipsoid(..) => "ellipsoid",
            Kind::Cylinder(_) => "cylinder",
            Kind::Tube(_) => "tube",
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Default sampling rectangle (one period in periodic parameters).
    pub fn sampling_domain(&self) -> Domain {
        self.sampling
    }

    pub fn as_tube(&self) -> Option<&Tube> {
        match &self.kind {
            Kind::Tube(t) => Some(t),
            _ => None,
        }
    }

    /// Whether evaluations with `form` are excluded near `cos v2 = 0`.
    pub fn has_singular_band(&self, form: Form) -> bool {
        self.as_tube().is_some() && form != Form::First
    }

    /// Refuses tube samples with `|cos φ| <= eps_band` for the second and third forms.
    pub fn check_band(&self, v1: f64, v2: f64, form: Form, eps_band: f64) -> Result<()> {
        if !self.has_singular_band(form) {
            return Ok(());
        }
        let c = v2.cos().abs();
        if c <= eps_band || c < COS_ZERO {
            return Err(Error::SingularBand { u: v1, phi: v2, cos_phi: c, eps_band });
        }
        Ok(())
    }

    pub fn jet(&self, v1: f64, v2: f64) -> Result<SurfaceJet> {
        surface_jet(self, v1, v2)
    }

    pub fn local(&self, v1: f64, v2: f64) -> Result<LocalGeometry> {
        LocalGeometry::new(&self.jet(v1, v2)?)
    }

    pub fn point(&self, v1: f64, v2: f64) -> Result<SurfacePoint> {
        Ok(self.local(v1, v2)?.point())
    }
}

/// Position and all partials to total order 3 at `(v1, v2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    pub v1: f64,
    pub v2: f64,
    position: VecJet,
}

impl SurfaceJet {
    pub fn from_position(v1: f64, v2: f64, position: VecJet) -> Self {
        Self { v1, v2, position }
    }

    /// `∂^(i+j) r / ∂v1^i ∂v2^j`.
    pub fn partial(&self, i: usize, j: usize) -> V3 {
        self.position.partial(i, j)
    }

    pub fn position(&self) -> &VecJet {
        &self.position
    }
}

pub fn surface_jet(surface: &Surface, v1: f64, v2: f64) -> Result<SurfaceJet> {
    if !(v1.is_finite() && v2.is_finite() && surface.domain.contains(v1, v2)) {
        return Err(Error::OutOfDomain { v1, v2 });
    }
    let x = Jet::variable(0, v1);
    let y = Jet::variable(1, v2);
    let zero = Jet::constant(0.0);
    let position = match &surface.kind {
        Kind::Plane => VecJet([x, y, zero]),
        Kind::Sphere(r) => ellipsoid(x, y, *r, *r, *r),
        Kind::Ellipsoid(a, b, c) => ellipsoid(x, y, *a, *b, *c),
        Kind::Cylinder(r) => VecJet([x.cos() * *r, x.sin() * *r, y]),
        Kind::Tube(t) => t.position_jet(v1, v2)?,
    };
    if !position.is_finite() {
        return Err(Error::NonFinite(format!("surface jet at ({v1}, {v2})")));
    }
    Ok(SurfaceJet { v1, v2, position })
}

fn ellipsoid(theta: Jet, phi: Jet, a: f64, b: f64, c: f64) -> VecJet {
    let st = theta.sin();
    VecJet([st * phi.cos() * a, st * phi.sin() * b, theta.cos() * c])
}

/// Symmetric 2x2 form with determinant and inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormMatrix {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
    pub det: f64,
    /// Inverse components `(a^11, a^12, a^22)`; non-finite when `det = 0`.
    pub inv: [f64; 3],
}

impl FormMatrix {
    pub fn new(a11: f64, a12: f64, a22: f64) -> Self {
        let det = a11 * a22 - a12 * a12;
        Self {
            a11,
            a12,
            a22,
            det,
            inv: [a22 / det, -a12 / det, a11 / det],
        }
    }

    pub fn get(&self, s: usize, t: usize) -> f64 {
        match (s, t) {
            (0, 0) => self.a11,
            (1, 1) => self.a22,
            _ => self.a12,
        }
    }

    pub fn inv_get(&self, s: usize, t: usize) -> f64 {
        match (s, t) {
            (0, 0) => self.inv[0],
            (1, 1) => self.inv[2],
            _ => self.inv[1],
        }
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.a11, self.a12, self.a12, self.a22)
    }
}

/// A form whose components are jets in the surface parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormField {
    pub a11: Jet,
    pub a12: Jet,
    pub a22: Jet,
}

impl FormField {
    pub fn value(&self) -> FormMatrix {
        FormMatrix::new(self.a11.value(), self.a12.value(), self.a22.value())
    }

    pub fn component(&self, s: usize, t: usize) -> &Jet {
        match (s, t) {
            (0, 0) => &self.a11,
            (1, 1) => &self.a22,
            _ => &self.a12,
        }
    }

    pub fn order(&self) -> usize {
        self.a11.order().min(self.a12.order()).min(self.a22.order())
    }

    pub fn det(&self) -> Jet {
        self.a11 * self.a22 - self.a12 * self.a12
    }
}

/// The unit normal with its first and second partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussMap {
    pub n: V3,
    /// `N_/s`.
    pub dn: [V3; 2],
    /// `N_/st`.
    pub ddn: [[V3; 2]; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub v1: f64,
    pub v2: f64,
    pub position: V3,
    pub normal: V3,
    pub gauss_curvature: f64,
    pub mean_curvature: f64,
    pub first: FormMatrix,
    pub second: FormMatrix,
    pub third: FormMatrix,
}

/// Jet-valued differential invariants at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct LocalGeometry {
    pub v1: f64,
    pub v2: f64,
    /// Position, order 3.
    pub position: VecJet,
    /// `r_/1`, `r_/2`, order 2.
    pub tangents: [VecJet; 2],
    /// Unit normal, order 2.
    pub normal: VecJet,
    /// First form, order 2.
    pub first: FormField,
    /// Second form, order 1.
    pub second: FormField,
    /// Third form, order 1.
    pub third: FormField,
    /// Gauss curvature, order 1.
    pub gauss_curvature: Jet,
    /// Mean curvature, order 1.
    pub mean_curvature: Jet,
}

impl LocalGeometry {
    pub fn new(jet: &SurfaceJet) -> Result<Self> {
        let (v1, v2) = (jet.v1, jet.v2);
        let r = jet.position;
        let r1 = r.derivative(0);
        let r2 = r.derivative(1);
        let cross = r1.cross(&r2);
        let norm = cross.dot(&cross).sqrt();
        if !(norm.value() > REGULARITY) {
            return Err(Error::DegenerateParametrization { v1, v2, norm: norm.value() });
        }
        let normal = cross.scale(norm.recip());
        let first = FormField {
            a11: r1.dot(&r1),
            a12: r1.dot(&r2),
            a22: r2.dot(&r2),
        };
        let r11 = r1.derivative(0);
        let r12 = r1.derivative(1);
        let r22 = r2.derivative(1);
        let second = FormField {
            a11: r11.dot(&normal),
            a12: r12.dot(&normal),
            a22: r22.dot(&normal),
        };
        let n1 = normal.derivative(0);
        let n2 = normal.derivative(1);
        let third = FormField {
            a11: n1.dot(&n1),
            a12: n1.dot(&n2),
            a22: n2.dot(&n2),
        };
        let det_g = first.det();
        let gauss_curvature = second.det() / det_g;
        let mean_curvature = (first.a11 * second.a22 - 2.0 * first.a12 * second.a12
            + first.a22 * second.a11)
            / (2.0 * det_g);
        let geo = Self {
            v1,
            v2,
            position: r,
            tangents: [r1, r2],
            normal,
            first,
            second,
            third,
            gauss_curvature,
            mean_curvature,
        };
        if !(normal.is_finite() && gauss_curvature.is_finite() && mean_curvature.is_finite()) {
            return Err(Error::NonFinite(format!("local geometry at ({v1}, {v2})")));
        }
        Ok(geo)
    }

    pub fn form(&self, form: Form) -> &FormField {
        match form {
            Form::First => &self.first,
            Form::Second => &self.second,
            Form::Third => &self.third,
        }
    }

    pub fn gauss_map(&self) -> GaussMap {
        let n = &self.normal;
        GaussMap {
            n: n.value(),
            dn: [n.partial(1, 0), n.partial(0, 1)],
            ddn: [
                [n.partial(2, 0), n.partial(1, 1)],
                [n.partial(1, 1), n.partial(0, 2)],
            ],
        }
    }

    pub fn point(&self) -> SurfacePoint {
        SurfacePoint {
            v1: self.v1,
            v2: self.v2,
            position: self.position.value(),
            normal: self.normal.value(),
            gauss_curvature: self.gauss_curvature.value(),
            mean_curvature: self.mean_curvature.value(),
            first: self.first.value(),
            second: self.second.value(),
            third: self.third.value(),
        }
    }
}

/// `(I, II, III)` at the jet's base point.
pub fn fundamental_forms(jet: &SurfaceJet) -> Result<(FormMatrix, FormMatrix, FormMatrix)> {
    let g = LocalGeometry::new(jet)?;
    Ok((g.first.value(), g.second.value(), g.third.value()))
}

/// `(K, H)` with the sign of `H` tied to the `(v1, v2)` cross-product normal.
pub fn curvatures(jet: &SurfaceJet) -> Result<(f64, f64)> {
    let g = LocalGeometry::new(jet)?;
    Ok((g.gauss_curvature.value(), g.mean_curvature.value()))
}

pub fn gauss_map(jet: &SurfaceJet) -> Result<GaussMap> {
    Ok(LocalGeometry::new(jet)?.gauss_map())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_has_vanishing_higher_partials() {
        let s = Surface::new(SurfaceSpec::Plane).unwrap();
        let j = s.jet(0.3, -0.2).unwrap();
        for (i, k) in [(2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)] {
            assert_eq!(j.partial(i, k), V3::zeros());
        }
        let gm = gauss_map(&j).unwrap();
        assert_eq!(gm.n, V3::z());
        assert_eq!(gm.dn, [V3::zeros(); 2]);
    }

    #[test]
    fn sphere_constraint_and_curvature() {
        let s = Surface::new(SurfaceSpec::Sphere { radius: 1.0 }).unwrap();
        let j = s.jet(1.1, 0.4).unwrap();
        let r = j.partial(0, 0);
        assert!((r.norm() - 1.0).abs() < 1e-15);
        assert!(r.dot(&j.partial(1, 0)).abs() < 1e-15);
        assert!(r.dot(&j.partial(0, 1)).abs() < 1e-15);
        let (k, h) = curvatures(&j).unwrap();
        assert!((k - 1.0).abs() < 1e-13);
        // outward normal: b = -g, H = -1
        assert!((h + 1.0).abs() < 1e-13);
    }

    #[test]
    fn form_matrix_inverse() {
        let f = FormMatrix::new(2.0, 0.5, 1.0);
        for s in 0..2 {
            for t in 0..2 {
                let d: f64 = (0..2).map(|u| f.inv_get(s, u) * f.get(u, t)).sum();
                assert!((d - if s == t { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn domain_and_regularity_errors() {
        let s = Surface::new(SurfaceSpec::Sphere { radius: 1.0 }).unwrap();
        assert!(matches!(s.jet(-1.0, 0.0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(s.jet(f64::NAN, 0.0), Err(Error::OutOfDomain { .. })));
        assert!(Surface::new(SurfaceSpec::Cylinder { radius: -1.0 }).is_err());
    }

    #[test]
    fn band_check_only_for_tubes_and_non_metric_forms() {
        let t = Surface::new(SurfaceSpec::Tube {
            curve: CurveSpec::Circle { kappa: 1.0 },
            radius: 0.5,
        })
        .unwrap();
        assert!(t.check_band(0.0, PI / 2.0, Form::First, 0.15).is_ok());
        assert!(matches!(
            t.check_band(0.0, PI / 2.0 - 0.1, Form::Second, 0.15),
            Err(Error::SingularBand { .. })
        ));
        assert!(t.check_band(0.0, PI / 2.0, Form::Second, 0.0).is_err());
        assert!(t.check_band(0.0, 0.3, Form::Second, 0.15).is_ok());
        let s = Surface::new(SurfaceSpec::Sphere { radius: 1.0 }).unwrap();
        assert!(s.check_band(1.0, PI / 2.0, Form::Second, 0.15).is_ok());
    }

    #[test]
    fn spec_json_shape() {
        let s: SurfaceSpec = serde_json::from_str(
            r#"{"kind":"tube","curve":{"family":"circle","params":{"kappa":1.0}},"radius":0.5}"#,
        )
        .unwrap();
        assert_eq!(
            s,
            SurfaceSpec::Tube { curve: CurveSpec::Circle { kappa: 1.0 }, radius: 0.5 }
        );
        let sphere: SurfaceSpec = serde_json::from_str(r#"{"kind":"sphere"}"#).unwrap();
        assert_eq!(sphere, SurfaceSpec::Sphere { radius: 1.0 });
    }
}
