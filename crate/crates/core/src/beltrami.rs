//! Beltrami differential parameters with respect to the first, second or
//! third fundamental form.
//!
//! The second parameter is evaluated as minus the form-trace of the
//! covariant Hessian, `Δp = -a^st (p_/st - Γ^u_st p_/u)`. This route never
//! takes square roots of the form determinant, which is negative for the
//! second form wherever `K < 0`.

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{FormField, LocalGeometry};
use crate::jet::Jet;
use crate::tolerance::{SINGULAR_CURVATURE, SINGULAR_DET};

type V3 = Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Form {
    #[serde(rename = "I")]
    First,
    #[serde(rename = "II")]
    Second,
    #[serde(rename = "III")]
    Third,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::First => "I",
            Form::Second => "II",
            Form::Third => "III",
        })
    }
}

impl std::str::FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(Form::First),
            "II" | "2" => Ok(Form::Second),
            "III" | "3" => Ok(Form::Third),
            other => Err(Error::InvalidSpec(format!("unknown form {other:?}"))),
        }
    }
}

/// `Γ^k_st` of one fundamental form, indexed `[k][s][t]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChristoffelSymbols(pub [[[f64; 2]; 2]; 2]);

impl ChristoffelSymbols {
    /// `None` when `|det| < SINGULAR_DET`.
    pub fn try_from_field(field: &FormField) -> Option<Self> {
        let m = field.value();
        if !(m.det.abs() >= SINGULAR_DET) {
            return None;
        }
        // ∂_w a_st
        let d = |s: usize, t: usize, w: usize| field.component(s, t).gradient()[w];
        let mut gamma = [[[0.0; 2]; 2]; 2];
        for (k, gk) in gamma.iter_mut().enumerate() {
            for s in 0..2 {
                for t in 0..2 {
                    gk[s][t] = 0.5
                        * (0..2)
                            .map(|u| m.inv_get(k, u) * (d(u, t, s) + d(u, s, t) - d(s, t, u)))
                            .sum::<f64>();
                }
            }
        }
        Some(Self(gamma))
    }

    pub fn get(&self, k: usize, s: usize, t: usize) -> f64 {
        self.0[k][s][t]
    }
}

/// Guarded access to a form used as an operator metric.
fn metric(geo: &LocalGeometry, form: Form) -> Result<&FormField> {
    if form != Form::First {
        let k = geo.gauss_curvature.value();
        if !(k.abs() >= SINGULAR_CURVATURE) {
            return Err(Error::SingularForm { form, v1: geo.v1, v2: geo.v2, value: k });
        }
    }
    Ok(geo.form(form))
}

pub fn christoffel(geo: &LocalGeometry, form: Form) -> Result<ChristoffelSymbols> {
    let field = metric(geo, form)?;
    ChristoffelSymbols::try_from_field(field).ok_or(Error::SingularForm {
        form,
        v1: geo.v1,
        v2: geo.v2,
        value: field.value().det,
    })
}

/// A scalar function on the surface, evaluated as a jet in the parameters.
#[derive(Clone)]
pub struct ScalarField(Arc<dyn Fn(&LocalGeometry) -> Jet + Send + Sync>);

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField")
    }
}

impl ScalarField {
    pub fn from_fn(f: impl Fn(&LocalGeometry) -> Jet + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(move |_| Jet::constant(c))
    }

    /// The parameter `v1` (axis 0) or `v2` (axis 1).
    pub fn parameter(axis: usize) -> Self {
        Self::from_fn(move |g| Jet::variable(axis, if axis == 0 { g.v1 } else { g.v2 }))
    }

    /// An ambient coordinate of the position.
    pub fn coordinate(i: usize) -> Self {
        Self::from_fn(move |g| g.position.0[i])
    }

    /// A component of the Gauss map.
    pub fn normal_component(i: usize) -> Self {
        Self::from_fn(move |g| g.normal.0[i])
    }

    /// Gauss curvature; carries first partials only.
    pub fn gauss_curvature() -> Self {
        Self::from_fn(|g| g.gauss_curvature)
    }

    /// `alpha·p + beta·q`.
    pub fn combine(alpha: f64, p: &ScalarField, beta: f64, q: &ScalarField) -> Self {
        let (p, q) = (p.clone(), q.clone());
        Self::from_fn(move |g| p.eval(g) * alpha + q.eval(g) * beta)
    }

    pub fn eval(&self, geo: &LocalGeometry) -> Jet {
        (self.0)(geo)
    }
}

/// Three scalar fields read as ambient components.
#[derive(Clone, Debug)]
pub struct VectorField(pub [ScalarField; 3]);

impl VectorField {
    pub fn gauss_map() -> Self {
        Self([0, 1, 2].map(ScalarField::normal_component))
    }

    pub fn position() -> Self {
        Self([0, 1, 2].map(ScalarField::coordinate))
    }

    pub fn constant(v: V3) -> Self {
        Self([v.x, v.y, v.z].map(ScalarField::constant))
    }
}

fn require_order(p: &Jet, needed: usize) -> Result<()> {
    if p.order() < needed {
        return Err(Error::JetOrder { needed, have: p.order() });
    }
    Ok(())
}

fn finite(x: f64, what: &str, geo: &LocalGeometry) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(format!("{what} at ({}, {})", geo.v1, geo.v2)))
    }
}

/// `∇ᴶ(p, q) = a^st p_/s q_/t`.
pub fn beltrami_first(geo: &LocalGeometry, p: &ScalarField, q: &ScalarField, form: Form) -> Result<f64> {
    let m = metric(geo, form)?.value();
    if !(m.det.abs() >= SINGULAR_DET) {
        return Err(Error::SingularForm { form, v1: geo.v1, v2: geo.v2, value: m.det });
    }
    let (p, q) = (p.eval(geo), q.eval(geo));
    require_order(&p, 1)?;
    require_order(&q, 1)?;
    let (dp, dq) = (p.gradient(), q.gradient());
    let mut acc = 0.0;
    for s in 0..2 {
        for t in 0..2 {
            acc += m.inv_get(s, t) * dp[s] * dq[t];
        }
    }
    finite(acc, "first Beltrami parameter", geo)
}

/// Second Beltrami parameter of a jet with respect to precomputed symbols.
pub fn laplacian_jet(p: &Jet, field: &FormField, gamma: &ChristoffelSymbols) -> Result<f64> {
    require_order(p, 2)?;
    let m = field.value();
    let dp = p.gradient();
    let hp = p.hessian();
    let mut acc = 0.0;
    for s in 0..2 {
        for t in 0..2 {
            let cov = hp[s][t] - (0..2).map(|u| gamma.get(u, s, t) * dp[u]).sum::<f64>();
            acc += m.inv_get(s, t) * cov;
        }
    }
    Ok(-acc)
}

/// `Δᴶp = -a^st ∇ᴶ_s p_/t`.
pub fn laplacian_scalar(geo: &LocalGeometry, p: &ScalarField, form: Form) -> Result<f64> {
    let gamma = christoffel(geo, form)?;
    let v = laplacian_jet(&p.eval(geo), geo.form(form), &gamma)?;
    finite(v, "second Beltrami parameter", geo)
}

/// Componentwise `Δᴶ` of an ambient vector field.
pub fn laplacian_vector(geo: &LocalGeometry, f: &VectorField, form: Form) -> Result<V3> {
    let gamma = christoffel(geo, form)?;
    let field = geo.form(form);
    let mut out = V3::zeros();
    for (o, c) in out.iter_mut().zip(f.0.iter()) {
        *o = finite(laplacian_jet(&c.eval(geo), field, &gamma)?, "vector Laplacian", geo)?;
    }
    Ok(out)
}

/// `gradᴵ p = g^st p_/s r_/t`.
pub fn grad_i(geo: &LocalGeometry, p: &ScalarField) -> Result<V3> {
    let p = p.eval(geo);
    require_order(&p, 1)?;
    let g = geo.first.value();
    let dp = p.gradient();
    let r = [geo.tangents[0].value(), geo.tangents[1].value()];
    let mut out = V3::zeros();
    for s in 0..2 {
        for t in 0..2 {
            out += r[t] * (g.inv_get(s, t) * dp[s]);
        }
    }
    Ok(out)
}

/// `Δᴵᴵ N - (1/2K) gradᴵ K - 2H N`.
pub fn verify_gauss_identity(geo: &LocalGeometry) -> Result<V3> {
    let lhs = laplacian_vector(geo, &VectorField::gauss_map(), Form::Second)?;
    let k = geo.gauss_curvature.value();
    let grad_k = grad_i(geo, &ScalarField::gauss_curvature())?;
    let n = geo.normal.value();
    let res = lhs - grad_k / (2.0 * k) - n * (2.0 * geo.mean_curvature.value());
    if res.iter().all(|x| x.is_finite()) {
        Ok(res)
    } else {
        Err(Error::NonFinite(format!("Gauss map identity at ({}, {})", geo.v1, geo.v2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Surface, SurfaceSpec};

    fn plane_geo() -> LocalGeometry {
        Surface::new(SurfaceSpec::Plane).unwrap().local(0.4, -0.7).unwrap()
    }

    #[test]
    fn plane_symbols_vanish() {
        let g = christoffel(&plane_geo(), Form::First).unwrap();
        assert_eq!(g, ChristoffelSymbols([[[0.0; 2]; 2]; 2]));
        // K = 0 on the plane: the second form is refused
        assert!(matches!(christoffel(&plane_geo(), Form::Second), Err(Error::SingularForm { .. })));
    }

    #[test]
    fn first_parameter_on_plane() {
        let geo = plane_geo();
        let c = ScalarField::constant(3.0);
        let x = ScalarField::parameter(0);
        let y = ScalarField::parameter(1);
        assert_eq!(beltrami_first(&geo, &c, &c, Form::First).unwrap(), 0.0);
        assert_eq!(beltrami_first(&geo, &x, &y, Form::First).unwrap(), 0.0);
        assert_eq!(beltrami_first(&geo, &x, &x, Form::First).unwrap(), 1.0);
    }

    #[test]
    fn second_parameter_on_plane() {
        let geo = plane_geo();
        assert_eq!(laplacian_scalar(&geo, &ScalarField::constant(2.0), Form::First).unwrap(), 0.0);
        let sq = ScalarField::from_fn(|g| {
            let x = Jet::variable(0, g.v1);
            x * x
        });
        assert!((laplacian_scalar(&geo, &sq, Form::First).unwrap() + 2.0).abs() < 1e-14);
        let v = laplacian_vector(&geo, &VectorField::constant(V3::new(1.0, 2.0, 3.0)), Form::First).unwrap();
        assert_eq!(v, V3::zeros());
        let grad = grad_i(&geo, &ScalarField::parameter(0)).unwrap();
        assert!((grad - V3::x()).norm() < 1e-15);
    }

    #[test]
    fn curvature_has_no_second_partials() {
        let geo = Surface::new(SurfaceSpec::Sphere { radius: 1.0 }).unwrap().local(1.0, 1.0).unwrap();
        assert_eq!(
            laplacian_scalar(&geo, &ScalarField::gauss_curvature(), Form::First),
            Err(Error::JetOrder { needed: 2, have: 1 })
        );
    }

    #[test]
    fn form_parsing() {
        assert_eq!("II".parse::<Form>().unwrap(), Form::Second);
        assert!("IV".parse::<Form>().is_err());
        assert_eq!(serde_json::to_string(&Form::Third).unwrap(), "\"III\"");
    }
}
