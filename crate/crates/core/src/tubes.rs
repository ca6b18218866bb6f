//! Tube surfaces `x(u, φ) = a(u) + r cosφ h(u) + r sinφ b(u)` and their
//! closed-form invariants.
//!
//! Everything here is written directly in terms of the curve's Frenet data
//! (`κ`, `τ`, `κ'`, `τ'`) and the shorthands `δ = 1 - rκ cosφ`,
//! `β = κ' cosφ + κτ sinφ`. None of it goes through the generic engine in
//! [`crate::geom`] / [`crate::beltrami`], so the two can be compared.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frenet::{Curve, CurveSpec, FrameDerivatives};
use crate::geom::{FormMatrix, Surface, SurfaceSpec};
use crate::jet::{Jet, VecJet};
use crate::tolerance::{COS_ZERO, KAPPA_MIN};

type V3 = Vector3<f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeSpec {
    pub curve: CurveSpec,
    pub radius: f64,
}

impl From<TubeSpec> for SurfaceSpec {
    fn from(t: TubeSpec) -> Self {
        SurfaceSpec::Tube { curve: t.curve, radius: t.radius }
    }
}

pub fn tube_surface(spec: &TubeSpec) -> Result<Surface> {
    Surface::new(spec.clone().into())
}

/// `(u, φ)` with the tube shorthands evaluated there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubePoint {
    pub u: f64,
    pub phi: f64,
    pub delta: f64,
    pub beta: f64,
}

/// `Δᴵᴵ = c_uu ∂uu + c_uφ ∂uφ + c_φφ ∂φφ + c_u ∂u + c_φ ∂φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorCoefficients {
    pub c_uu: f64,
    pub c_uphi: f64,
    pub c_phiphi: f64,
    pub c_u: f64,
    pub c_phi: f64,
}

impl OperatorCoefficients {
    /// Applies the operator to a jet in `(u, φ)` of order at least 2.
    pub fn apply(&self, p: &Jet) -> f64 {
        self.c_uu * p.partial(2, 0)
            + self.c_uphi * p.partial(1, 1)
            + self.c_phiphi * p.partial(0, 2)
            + self.c_u * p.partial(1, 0)
            + self.c_phi * p.partial(0, 1)
    }

    pub fn apply_vec(&self, v: &VecJet) -> V3 {
        V3::new(self.apply(&v.0[0]), self.apply(&v.0[1]), self.apply(&v.0[2]))
    }

    pub fn max_abs_diff(&self, o: &OperatorCoefficients) -> f64 {
        [
            self.c_uu - o.c_uu,
            self.c_uphi - o.c_uphi,
            self.c_phiphi - o.c_phiphi,
            self.c_u - o.c_u,
            self.c_phi - o.c_phi,
        ]
        .iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Components along `(t, h, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetComponents {
    pub t: f64,
    pub h: f64,
    pub b: f64,
}

impl FrenetComponents {
    pub fn ambient(&self, t: &V3, h: &V3, b: &V3) -> V3 {
        t * self.t + h * self.h + b * self.b
    }
}

/// The printed anchor-ring components against the frame-based expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnchorRingComparison {
    pub printed: V3,
    pub canonical: V3,
    /// `|printed - canonical|`.
    pub residual_printed_sign: f64,
    /// Same with the first two printed components negated.
    pub residual_flipped_sign: f64,
}

#[derive(Debug, Clone)]
pub struct Tube {
    curve: Curve,
    radius: f64,
}

impl Tube {
    pub fn new(curve: CurveSpec, radius: f64) -> Result<Self> {
        let curve = Curve::new(curve)?;
        let [kmin, kmax] = curve.kappa_bounds();
        if kmin < KAPPA_MIN {
            let u = curve.default_range()[0];
            return Err(Error::VanishingCurvature { u, kappa: kmin });
        }
        let bound = 1.0 / kmax;
        if !(radius > 0.0 && radius < bound) {
            return Err(Error::InvalidRadius { radius, bound });
        }
        Ok(Self { curve, radius })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn frame(&self, u: f64) -> Result<FrameDerivatives> {
        self.curve.frame_derivatives(u)
    }

    fn band(&self, u: f64, phi: f64, eps_band: f64) -> Result<()> {
        let c = phi.cos().abs();
        if c <= eps_band || c < COS_ZERO {
            return Err(Error::SingularBand { u, phi, cos_phi: c, eps_band });
        }
        Ok(())
    }

    /// Position as a jet in `(u, φ)`, with the frame transported by the
    /// Frenet equations.
    pub fn position_jet(&self, u: f64, phi: f64) -> Result<VecJet> {
        let f = self.frame(u)?;
        let along = |d: [f64; 4]| Jet::from_derivatives(0, &d);
        let (cp, sp) = {
            let p = Jet::variable(1, phi);
            (p.cos() * self.radius, p.sin() * self.radius)
        };
        let mut out = [Jet::constant(0.0); 3];
        for (c, o) in out.iter_mut().enumerate() {
            let a = along([f.position[c], f.t[0][c], f.t[1][c], f.t[2][c]]);
            let h = along([f.h[0][c], f.h[1][c], f.h[2][c], f.h[3][c]]);
            let b = along([f.b[0][c], f.b[1][c], f.b[2][c], f.b[3][c]]);
            *o = a + cp * h + sp * b;
        }
        Ok(VecJet(out))
    }

    /// `N = -cosφ h - sinφ b` as a jet in `(u, φ)`.
    pub fn gauss_map_jet(&self, u: f64, phi: f64) -> Result<VecJet> {
        let f = self.frame(u)?;
        let p = Jet::variable(1, phi);
        let (c, s) = (p.cos(), p.sin());
        let mut out = [Jet::constant(0.0); 3];
        for (i, o) in out.iter_mut().enumerate() {
            let h = Jet::from_derivatives(0, &[f.h[0][i], f.h[1][i], f.h[2][i], f.h[3][i]]);
            let b = Jet::from_derivatives(0, &[f.b[0][i], f.b[1][i], f.b[2][i], f.b[3][i]]);
            *o = -(c * h) - s * b;
        }
        Ok(VecJet(out))
    }

    pub fn point(&self, u: f64, phi: f64) -> Result<TubePoint> {
        let k = self.curve.kappa_derivatives(u);
        let tau = self.curve.tau_derivatives(u)[0];
        let (s, c) = phi.sin_cos();
        Ok(TubePoint {
            u,
            phi,
            delta: 1.0 - self.radius * k[0] * c,
            beta: k[1] * c + k[0] * tau * s,
        })
    }

    /// `(I, II)` from the printed closed forms.
    pub fn forms_closed(&self, u: f64, phi: f64) -> Result<(FormMatrix, FormMatrix)> {
        let p = self.point(u, phi)?;
        let k = self.curve.kappa_derivatives(u)[0];
        let tau = self.curve.tau_derivatives(u)[0];
        let r = self.radius;
        let first = FormMatrix::new(p.delta * p.delta + r * r * tau * tau, r * r * tau, r * r);
        let second = FormMatrix::new(-k * p.delta * phi.cos() + r * tau * tau, r * tau, r);
        Ok((first, second))
    }

    /// `K = -κ cosφ / (r δ)`.
    pub fn gauss_curvature(&self, u: f64, phi: f64) -> Result<f64> {
        let p = self.point(u, phi)?;
        let k = self.curve.kappa_derivatives(u)[0];
        Ok(-k * phi.cos() / (self.radius * p.delta))
    }

    pub fn gauss_map(&self, u: f64, phi: f64) -> Result<V3> {
        let f = self.frame(u)?;
        let (s, c) = phi.sin_cos();
        Ok(-f.h[0] * c - f.b[0] * s)
    }

    /// Coefficients of `Δᴵᴵ` in `(u, φ)`; refused inside the singular band.
    pub fn laplacian_coeffs(&self, u: f64, phi: f64, eps_band: f64) -> Result<OperatorCoefficients> {
        self.band(u, phi, eps_band)?;
        let p = self.point(u, phi)?;
        let k = self.curve.kappa_derivatives(u)[0];
        let tau = self.curve.tau_derivatives(u);
        let r = self.radius;
        let (s, c) = phi.sin_cos();
        let (d, beta) = (p.delta, p.beta);
        let kdc = k * d * c;
        let pre = 1.0 / kdc;
        Ok(OperatorCoefficients {
            c_uu: pre,
            c_uphi: -2.0 * tau[0] * pre,
            c_phiphi: pre * (tau[0] * tau[0] - kdc / r),
            c_u: pre * (1.0 - 2.0 * d) * beta / (2.0 * kdc),
            c_phi: pre
                * (-tau[1] + tau[0] * beta * (2.0 * d - 1.0) / (2.0 * kdc)
                    + k * (2.0 * d - 1.0) * s / (2.0 * r)),
        })
    }

    /// The anchor-ring operator as printed for `β ≡ 0`; circle tubes only.
    pub fn anchor_ring_operator(&self, u: f64, phi: f64, eps_band: f64) -> Result<OperatorCoefficients> {
        let k = self.circle_curvature()?;
        self.band(u, phi, eps_band)?;
        let r = self.radius;
        let (s, c) = phi.sin_cos();
        let d = 1.0 - r * k * c;
        Ok(OperatorCoefficients {
            c_uu: 1.0 / (k * d * c),
            c_uphi: 0.0,
            c_phiphi: -1.0 / r,
            c_u: 0.0,
            c_phi: (2.0 * d - 1.0) * s / (2.0 * r * d * c),
        })
    }

    /// Frenet components of `Δᴵᴵ N`.
    pub fn laplacian_gauss_closed(&self, u: f64, phi: f64, eps_band: f64) -> Result<FrenetComponents> {
        self.band(u, phi, eps_band)?;
        let p = self.point(u, phi)?;
        let k = self.curve.kappa_derivatives(u)[0];
        let r = self.radius;
        let (s, c) = phi.sin_cos();
        let d = p.delta;
        Ok(FrenetComponents {
            t: p.beta / (2.0 * k * d * d * c),
            h: s * s / (2.0 * r * d * c) + c / (r * d) - 2.0 * c / r,
            b: (1.0 - 4.0 * d) * s / (2.0 * r * d),
        })
    }

    /// `Δᴵᴵ N` in ambient coordinates from the Frenet components.
    pub fn laplacian_gauss_ambient(&self, u: f64, phi: f64, eps_band: f64) -> Result<V3> {
        let comps = self.laplacian_gauss_closed(u, phi, eps_band)?;
        let f = self.frame(u)?;
        Ok(comps.ambient(&f.t[0], &f.h[0], &f.b[0]))
    }

    /// The Frenet components multiplied through by `2rκδ² cosφ`:
    /// `(rβ, κδ(1 + (1-4δ)cos²φ), κδ(1-4δ) cosφ sinφ)`.
    pub fn rewritten_coefficients(&self, u: f64, phi: f64) -> Result<FrenetComponents> {
        let p = self.point(u, phi)?;
        let k = self.curve.kappa_derivatives(u)[0];
        let (s, c) = phi.sin_cos();
        let d = p.delta;
        Ok(FrenetComponents {
            t: self.radius * p.beta,
            h: k * d * (1.0 + (1.0 - 4.0 * d) * c * c),
            b: k * d * (1.0 - 4.0 * d) * c * s,
        })
    }

    /// `2rκδ² cosφ (Δᴵᴵ N - A N)` written with the rewritten coefficients;
    /// vanishes identically in `(u, φ)` iff `A` satisfies the finite-type condition.
    pub fn rewritten_condition_residual(&self, u: f64, phi: f64, a: &Matrix3<f64>) -> Result<V3> {
        let w = self.rewritten_coefficients(u, phi)?;
        let f = self.frame(u)?;
        let p = self.point(u, phi)?;
        let k = self.curve.kappa_derivatives(u)[0];
        let (s, c) = phi.sin_cos();
        let scale = 2.0 * self.radius * k * p.delta * p.delta * c;
        let an = a * (f.h[0] * c + f.b[0] * s);
        Ok(w.ambient(&f.t[0], &f.h[0], &f.b[0]) + an * scale)
    }

    fn circle_curvature(&self) -> Result<f64> {
        match self.curve.spec() {
            CurveSpec::Circle { kappa } => Ok(*kappa),
            other => Err(Error::WrongCase(format!(
                "anchor-ring formulas need a circle, got {other:?}"
            ))),
        }
    }

    /// Printed anchor-ring components `(ΔN₁, ΔN₂, ΔN₃)`, with the circle's
    /// polar angle `κu` in place of `u`.
    pub fn anchor_ring_laplacian_components(&self, u: f64, phi: f64, eps_band: f64) -> Result<V3> {
        let k = self.circle_curvature()?;
        self.band(u, phi, eps_band)?;
        let bracket = self.anchor_ring_bracket(phi)?;
        let r = self.radius;
        let (s, c) = phi.sin_cos();
        let d = 1.0 - r * k * c;
        let theta = k * u;
        Ok(V3::new(
            bracket * theta.cos(),
            bracket * theta.sin(),
            -s * (4.0 * d - 1.0) / (2.0 * r * d),
        ))
    }

    /// `1/(κδ) - cosφ/r + (2δ-1) sin²φ / (2rδ cosφ)`.
    pub fn anchor_ring_bracket(&self, phi: f64) -> Result<f64> {
        let k = self.circle_curvature()?;
        let r = self.radius;
        let (s, c) = phi.sin_cos();
        let d = 1.0 - r * k * c;
        Ok(1.0 / (k * d) - c / r + (2.0 * d - 1.0) * s * s / (2.0 * r * d * c))
    }

    pub fn anchor_ring_comparison(&self, u: f64, phi: f64, eps_band: f64) -> Result<AnchorRingComparison> {
        let printed = self.anchor_ring_laplacian_components(u, phi, eps_band)?;
        let canonical = self.laplacian_gauss_ambient(u, phi, eps_band)?;
        let flipped = V3::new(-printed.x, -printed.y, printed.z);
        Ok(AnchorRingComparison {
            printed,
            canonical,
            residual_printed_sign: (printed - canonical).norm(),
            residual_flipped_sign: (flipped - canonical).norm(),
        })
    }

    /// `(4δ - 1) / (2rδ)`: the value `a₃₃` would need at `φ` on an anchor ring.
    pub fn anchor_a33_profile(&self, phi: f64) -> Result<f64> {
        let k = self.circle_curvature()?;
        let r = self.radius;
        let d = 1.0 - r * k * phi.cos();
        Ok((4.0 * d - 1.0) / (2.0 * r * d))
    }
}
