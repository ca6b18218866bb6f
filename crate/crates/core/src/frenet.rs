//! Unit-speed space curves, their derivatives and Frenet frames.
//!
//! Circles and helices are closed form. A [`FourierSeries`] curve is given
//! intrinsically by truncated Fourier series for curvature and torsion and is
//! reconstructed by integrating the Frenet system with a fixed-step RK4
//! scheme; derivatives beyond the frame itself follow from the Frenet
//! equations with the analytic series for κ and τ.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::tolerance::KAPPA_MIN;

type V3 = Vector3<f64>;

/// Maximum RK4 step used to reconstruct Fourier curves.
const MAX_STEP: f64 = 2e-3;

/// `c0 + Σ cos[n-1]·cos(n u) + sin[n-1]·sin(n u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSeries {
    pub c0: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl FourierSeries {
    pub fn constant(c0: f64) -> Self {
        Self {
            c0,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    /// The value and first three derivatives at `u`.
    pub fn derivatives(&self, u: f64) -> [f64; 4] {
        let mut d = [self.c0, 0.0, 0.0, 0.0];
        let terms = self.cos.len().max(self.sin.len());
        for n in 1..=terms {
            let a = self.cos.get(n - 1).copied().unwrap_or(0.0);
            let b = self.sin.get(n - 1).copied().unwrap_or(0.0);
            let nf = n as f64;
            let (s, c) = (nf * u).sin_cos();
            // d^k/du^k of a cos + b sin cycles through (c, -s, -c, s) and (s, c, -s, -c)
            let cyc = [(c, s), (-s, c), (-c, -s), (s, -c)];
            let mut scale = 1.0;
            for (k, (cc, ss)) in cyc.iter().enumerate() {
                d[k] += scale * (a * cc + b * ss);
                scale *= nf;
            }
        }
        d
    }

    pub fn value(&self, u: f64) -> f64 {
        self.derivatives(u)[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCurve {
    pub kappa: FourierSeries,
    pub tau: FourierSeries,
    #[serde(default = "default_fourier_domain")]
    pub domain: [f64; 2],
}

fn default_fourier_domain() -> [f64; 2] {
    [0.0, TAU]
}

/// Serialized as `{"family": "...", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
pub enum CurveSpec {
    /// Planar circle of curvature `kappa` centred at the origin.
    Circle { kappa: f64 },
    /// `(a cos(s/w), a sin(s/w), c s/w)` with `w = sqrt(a² + c²)`.
    Helix { a: f64, c: f64 },
    Fourier(FourierCurve),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetData {
    pub t: V3,
    pub h: V3,
    pub b: V3,
    pub kappa: f64,
    pub tau: f64,
}

/// Position and derivatives of the moving frame at one parameter value.
///
/// `t[k]` is the k-th derivative of the tangent, likewise for `h` and `b`;
/// `kappa[k]`, `tau[k]` are the derivatives of the curvature and torsion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameDerivatives {
    pub position: V3,
    pub t: [V3; 4],
    pub h: [V3; 4],
    pub b: [V3; 4],
    pub kappa: [f64; 4],
    pub tau: [f64; 4],
}

#[derive(Debug, Clone, Copy)]
struct State {
    a: V3,
    t: V3,
    h: V3,
    b: V3,
}

impl State {
    fn axpy(&self, s: f64, d: &State) -> State {
        State {
            a: self.a + d.a * s,
            t: self.t + d.t * s,
            h: self.h + d.h * s,
            b: self.b + d.b * s,
        }
    }
}

#[derive(Debug, Clone)]
struct FourierTable {
    spec: FourierCurve,
    step: f64,
    nodes: Vec<State>,
    kappa_min: f64,
    kappa_max: f64,
}

impl FourierTable {
    fn build(spec: &FourierCurve) -> Result<Self> {
        let [u0, u1] = spec.domain;
        if !(u0.is_finite() && u1.is_finite() && u1 > u0) {
            return Err(Error::InvalidSpec(format!("bad Fourier domain {:?}", spec.domain)));
        }
        let n = ((u1 - u0) / MAX_STEP).ceil().max(1.0) as usize;
        let step = (u1 - u0) / n as f64;
        let mut table = Self {
            spec: spec.clone(),
            step,
            nodes: Vec::with_capacity(n + 1),
            kappa_min: f64::INFINITY,
            kappa_max: 0.0,
        };
        let mut s = State {
            a: V3::zeros(),
            t: V3::x(),
            h: V3::y(),
            b: V3::z(),
        };
        table.nodes.push(s);
        for i in 0..n {
            s = table.rk4(u0 + i as f64 * step, &s, step);
            table.nodes.push(s);
        }
        for i in 0..=n {
            let u = u0 + i as f64 * step;
            let k = spec.kappa.value(u);
            if k < KAPPA_MIN {
                return Err(Error::VanishingCurvature { u, kappa: k });
            }
            table.kappa_min = table.kappa_min.min(k);
            table.kappa_max = table.kappa_max.max(k);
        }
        Ok(table)
    }

    fn rhs(&self, u: f64, s: &State) -> State {
        let k = self.spec.kappa.value(u);
        let tau = self.spec.tau.value(u);
        State {
            a: s.t,
            t: s.h * k,
            h: s.b * tau - s.t * k,
            b: -s.h * tau,
        }
    }

    fn rk4(&self, u: f64, s: &State, dt: f64) -> State {
        let k1 = self.rhs(u, s);
        let k2 = self.rhs(u + 0.5 * dt, &s.axpy(0.5 * dt, &k1));
        let k3 = self.rhs(u + 0.5 * dt, &s.axpy(0.5 * dt, &k2));
        let k4 = self.rhs(u + dt, &s.axpy(dt, &k3));
        State {
            a: s.a + (k1.a + (k2.a + k3.a) * 2.0 + k4.a) * (dt / 6.0),
            t: s.t + (k1.t + (k2.t + k3.t) * 2.0 + k4.t) * (dt / 6.0),
            h: s.h + (k1.h + (k2.h + k3.h) * 2.0 + k4.h) * (dt / 6.0),
            b: s.b + (k1.b + (k2.b + k3.b) * 2.0 + k4.b) * (dt / 6.0),
        }
    }

    fn state(&self, u: f64) -> State {
        let u0 = self.spec.domain[0];
        let i = (((u - u0) / self.step).floor().max(0.0) as usize).min(self.nodes.len() - 1);
        let base = u0 + i as f64 * self.step;
        let dt = u - base;
        if dt == 0.0 {
            self.nodes[i]
        } else {
            self.rk4(base, &self.nodes[i], dt)
        }
    }
}

/// A curve ready for evaluation.
#[derive(Debug, Clone)]
pub struct Curve {
    spec: CurveSpec,
    fourier: Option<FourierTable>,
}

impl Curve {
    pub fn new(spec: CurveSpec) -> Result<Self> {
        let fourier = match &spec {
            CurveSpec::Circle { kappa } => {
                if *kappa == 0.0 {
                    return Err(Error::VanishingCurvature { u: 0.0, kappa: 0.0 });
                }
                if !(kappa.is_finite() && *kappa > 0.0) {
                    return Err(Error::InvalidSpec(format!("circle curvature {kappa} must be positive")));
                }
                None
            }
            CurveSpec::Helix { a, c } => {
                if !(a.is_finite() && c.is_finite() && *a >= 0.0 && a.hypot(*c) > 0.0) {
                    return Err(Error::InvalidSpec(format!("helix needs a >= 0 and (a, c) != 0, got ({a}, {c})")));
                }
                None
            }
            CurveSpec::Fourier(f) => Some(FourierTable::build(f)?),
        };
        Ok(Self { spec, fourier })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn is_circle(&self) -> bool {
        matches!(self.spec, CurveSpec::Circle { .. })
    }

    /// Parameter interval on which the curve is defined.
    pub fn domain(&self) -> [f64; 2] {
        match &self.spec {
            CurveSpec::Fourier(f) => f.domain,
            _ => [f64::NEG_INFINITY, f64::INFINITY],
        }
    }

    /// One period for closed-form curves, the whole domain otherwise.
    pub fn default_range(&self) -> [f64; 2] {
        match &self.spec {
            CurveSpec::Circle { kappa } => [0.0, TAU / kappa],
            CurveSpec::Helix { a, c } => [0.0, TAU * a.hypot(*c)],
            CurveSpec::Fourier(f) => f.domain,
        }
    }

    fn check_domain(&self, u: f64) -> Result<()> {
        let [lo, hi] = self.domain();
        if u.is_finite() && u >= lo && u <= hi {
            Ok(())
        } else {
            Err(Error::OutOfDomain { v1: u, v2: f64::NAN })
        }
    }

    /// Curvature and its first three derivatives.
    pub fn kappa_derivatives(&self, u: f64) -> [f64; 4] {
        match &self.spec {
            CurveSpec::Circle { kappa } => [*kappa, 0.0, 0.0, 0.0],
            CurveSpec::Helix { a, c } => [a / (a * a + c * c), 0.0, 0.0, 0.0],
            CurveSpec::Fourier(f) => f.kappa.derivatives(u),
        }
    }

    /// Torsion and its first three derivatives.
    pub fn tau_derivatives(&self, u: f64) -> [f64; 4] {
        match &self.spec {
            CurveSpec::Circle { .. } => [0.0; 4],
            CurveSpec::Helix { a, c } => [c / (a * a + c * c), 0.0, 0.0, 0.0],
            CurveSpec::Fourier(f) => f.tau.derivatives(u),
        }
    }

    /// Bounds of κ over the domain (sampled at the integration nodes for Fourier curves).
    pub fn kappa_bounds(&self) -> [f64; 2] {
        match (&self.spec, &self.fourier) {
            (_, Some(t)) => [t.kappa_min, t.kappa_max],
            _ => {
                let k = self.kappa_derivatives(0.0)[0];
                [k, k]
            }
        }
    }

    /// Frame at `u` as produced by the curve's defining construction.
    fn base_frame(&self, u: f64) -> Result<(V3, V3, V3, V3)> {
        match &self.fourier {
            Some(table) => {
                let s = table.state(u);
                Ok((s.a, s.t, s.h, s.b))
            }
            None => {
                let d = curve_jet(self, u, 2)?;
                let kappa = d[2].norm();
                if kappa < KAPPA_MIN {
                    return Err(Error::VanishingCurvature { u, kappa });
                }
                let h = d[2] / kappa;
                Ok((d[0], d[1], h, d[1].cross(&h)))
            }
        }
    }

    /// Position plus frame derivatives to third order, transported with the
    /// Frenet equations and the analytic derivatives of κ and τ.
    pub fn frame_derivatives(&self, u: f64) -> Result<FrameDerivatives> {
        self.check_domain(u)?;
        let kappa = self.kappa_derivatives(u);
        if kappa[0] < KAPPA_MIN {
            return Err(Error::VanishingCurvature { u, kappa: kappa[0] });
        }
        let tau = self.tau_derivatives(u);
        let (position, t0, h0, b0) = self.base_frame(u)?;

        // Frenet coefficients (α, β, γ) of each frame vector as univariate jets in u.
        let k = Jet::from_derivatives(0, &kappa);
        let w = Jet::from_derivatives(0, &tau);
        let step = |[a, b, c]: [Jet; 3]| -> [Jet; 3] {
            [
                a.derivative(0) - k * b,
                b.derivative(0) + k * a - w * c,
                c.derivative(0) + w * b,
            ]
        };
        let to_vec = |[a, b, c]: &[Jet; 3]| t0 * a.value() + h0 * b.value() + b0 * c.value();
        let mut out = [[V3::zeros(); 4]; 3];
        for (slot, start) in out.iter_mut().zip(0..3) {
            let mut coeffs = [Jet::constant(0.0); 3];
            coeffs[start] = Jet::constant(1.0);
            for d in slot.iter_mut() {
                *d = to_vec(&coeffs);
                if coeffs[0].order() > 0 {
                    coeffs = step(coeffs);
                }
            }
        }
        Ok(FrameDerivatives {
            position,
            t: out[0],
            h: out[1],
            b: out[2],
            kappa,
            tau,
        })
    }
}

/// `a(u), a'(u), ..., a^(order)(u)`.
pub fn curve_jet(curve: &Curve, u: f64, order: usize) -> Result<Vec<V3>> {
    if order > 4 {
        return Err(Error::UnsupportedOrder(order));
    }
    curve.check_domain(u)?;
    let rotating = |radius: f64, rate: f64, k: usize| {
        // d^k/du^k of radius·(cos(rate u), sin(rate u))
        let scale = radius * rate.powi(k as i32);
        let phase = rate * u + k as f64 * FRAC_PI_2;
        V3::new(scale * phase.cos(), scale * phase.sin(), 0.0)
    };
    match &curve.spec {
        CurveSpec::Circle { kappa } => Ok((0..=order).map(|k| rotating(1.0 / kappa, *kappa, k)).collect()),
        CurveSpec::Helix { a, c } => {
            let w = a.hypot(*c);
            Ok((0..=order)
                .map(|k| {
                    let mut v = rotating(*a, 1.0 / w, k);
                    v.z = match k {
                        0 => c * u / w,
                        1 => c / w,
                        _ => 0.0,
                    };
                    v
                })
                .collect())
        }
        CurveSpec::Fourier(_) => {
            let table = curve.fourier.as_ref().expect("Fourier curves carry a table");
            let mut out = vec![table.state(u).a];
            if order >= 1 {
                let fd = curve.frame_derivatives(u)?;
                out.extend(fd.t.iter().take(order).copied());
            }
            Ok(out)
        }
    }
}

/// Frenet frame from the curve's first three derivatives.
pub fn frenet_frame(curve: &Curve, u: f64) -> Result<FrenetData> {
    let d = curve_jet(curve, u, 3)?;
    let kappa = d[2].norm();
    if kappa < KAPPA_MIN {
        return Err(Error::VanishingCurvature { u, kappa });
    }
    let t = d[1];
    let h = d[2] / kappa;
    let b = t.cross(&h);
    let tau = d[1].cross(&d[2]).dot(&d[3]) / (kappa * kappa);
    Ok(FrenetData { t, h, b, kappa, tau })
}
