//! Truncated bivariate Taylor polynomials.
//!
//! A [`Jet`] carries the Taylor coefficients of a scalar function of two
//! parameters `(v1, v2)` about a base point, up to total order 3. Arithmetic
//! on jets propagates every partial derivative exactly (up to rounding), so
//! composing the defining formulas of a surface yields its derivatives to
//! machine precision without any finite differencing.
//!
//! Each jet records the highest total order it is valid to. Constants are
//! exact at every order; differentiating lowers the order by one; binary
//! operations keep the smaller order of their operands.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use nalgebra::Vector3;

/// Highest total derivative order tracked.
pub const MAX_ORDER: usize = 3;
const LEN: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

#[inline]
const fn idx(i: usize, j: usize) -> usize {
    let n = i + j;
    n * (n + 1) / 2 + j
}

const FACT: [f64; MAX_ORDER + 1] = [1.0, 1.0, 2.0, 6.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; LEN],
    order: u8,
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = value;
        Self {
            c,
            order: MAX_ORDER as u8,
        }
    }

    /// The coordinate function `v_axis` (axis 0 or 1) about the base value `at`.
    pub fn variable(axis: usize, at: f64) -> Self {
        assert!(axis < 2, "jets have two parameters");
        let mut j = Self::constant(at);
        j.c[if axis == 0 { idx(1, 0) } else { idx(0, 1) }] = 1.0;
        j
    }

    /// Builds a jet of the given order from Taylor coefficients indexed by `(i, j)`.
    pub fn from_taylor(order: usize, coeff: impl Fn(usize, usize) -> f64) -> Self {
        assert!(order <= MAX_ORDER);
        let mut c = [0.0; LEN];
        for n in 0..=order {
            for j in 0..=n {
                c[idx(n - j, j)] = coeff(n - j, j);
            }
        }
        Self {
            c,
            order: order as u8,
        }
    }

    /// A univariate jet along `axis` from the derivatives `f(at), f'(at), ...`.
    pub fn from_derivatives(axis: usize, derivs: &[f64]) -> Self {
        let order = (derivs.len() - 1).min(MAX_ORDER);
        Self::from_taylor(order, |i, j| {
            let k = if axis == 0 { i } else { j };
            let other = if axis == 0 { j } else { i };
            if other == 0 {
                derivs[k] / FACT[k]
            } else {
                0.0
            }
        })
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn taylor(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i + j <= self.order());
        self.c[idx(i, j)]
    }

    /// The partial derivative `∂^(i+j) / ∂v1^i ∂v2^j` at the base point.
    pub fn partial(&self, i: usize, j: usize) -> f64 {
        assert!(
            i + j <= self.order(),
            "partial of order {} requested from a jet of order {}",
            i + j,
            self.order()
        );
        self.c[idx(i, j)] * FACT[i] * FACT[j]
    }

    /// First partials `(∂1, ∂2)`.
    pub fn gradient(&self) -> [f64; 2] {
        [self.partial(1, 0), self.partial(0, 1)]
    }

    /// Second partials as a symmetric 2x2 array.
    pub fn hessian(&self) -> [[f64; 2]; 2] {
        let m = self.partial(1, 1);
        [[self.partial(2, 0), m], [m, self.partial(0, 2)]]
    }

    /// Partial derivative along `axis`, as a jet one order lower.
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let order = self.order() - 1;
        Self::from_taylor(order, |i, j| {
            if axis == 0 {
                (i + 1) as f64 * self.c[idx(i + 1, j)]
            } else {
                (j + 1) as f64 * self.c[idx(i, j + 1)]
            }
        })
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self::from_taylor(order, |i, j| self.c[idx(i, j)])
    }

    pub fn is_finite(&self) -> bool {
        let n = idx(0, self.order()) + 1;
        self.c[..n].iter().all(|x| x.is_finite())
    }

    /// `f(self)` given `f` and its first three derivatives at `self.value()`.
    fn compose(&self, d: [f64; MAX_ORDER + 1]) -> Self {
        let mut h = *self;
        h.c[0] = 0.0;
        let mut out = Self::constant(d[0]).truncate(self.order());
        let mut pow = Self::constant(1.0);
        for (k, dk) in d.iter().enumerate().skip(1).take(self.order()) {
            pow = pow * h;
            out = out + pow * (dk / FACT[k]);
        }
        out
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn sqrt(&self) -> Self {
        let x = self.value();
        let s = x.sqrt();
        self.compose([s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)])
    }

    pub fn recip(&self) -> Self {
        let x = self.value();
        let r = 1.0 / x;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn powi(&self, n: i32) -> Self {
        let x = self.value();
        let nf = n as f64;
        self.compose([
            x.powi(n),
            nf * x.powi(n - 1),
            nf * (nf - 1.0) * x.powi(n - 2),
            nf * (nf - 1.0) * (nf - 2.0) * x.powi(n - 3),
        ])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order) as usize;
        Jet::from_taylor(order, |i, j| self.c[idx(i, j)] + rhs.c[idx(i, j)])
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order) as usize;
        Jet::from_taylor(order, |i, j| self.c[idx(i, j)] - rhs.c[idx(i, j)])
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        self.c.iter_mut().for_each(|x| *x = -*x);
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order) as usize;
        Jet::from_taylor(order, |i, j| {
            let mut acc = 0.0;
            for i1 in 0..=i {
                for j1 in 0..=j {
                    acc += self.c[idx(i1, j1)] * rhs.c[idx(i - i1, j - j1)];
                }
            }
            acc
        })
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        self.c.iter_mut().for_each(|x| *x *= rhs);
        self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

/// A vector in 3-space whose components are jets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VecJet(pub [Jet; 3]);

impl VecJet {
    pub fn constant(v: Vector3<f64>) -> Self {
        Self([Jet::constant(v.x), Jet::constant(v.y), Jet::constant(v.z)])
    }

    pub fn value(&self) -> Vector3<f64> {
        Vector3::new(self.0[0].value(), self.0[1].value(), self.0[2].value())
    }

    pub fn partial(&self, i: usize, j: usize) -> Vector3<f64> {
        Vector3::new(
            self.0[0].partial(i, j),
            self.0[1].partial(i, j),
            self.0[2].partial(i, j),
        )
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn derivative(&self, axis: usize) -> Self {
        Self(self.0.map(|c| c.derivative(axis)))
    }

    pub fn dot(&self, rhs: &VecJet) -> Jet {
        self.0[0] * rhs.0[0] + self.0[1] * rhs.0[1] + self.0[2] * rhs.0[2]
    }

    pub fn cross(&self, rhs: &VecJet) -> VecJet {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = rhs.0;
        VecJet([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn scale(&self, s: Jet) -> VecJet {
        VecJet(self.0.map(|c| c * s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(Jet::is_finite)
    }
}

impl Add for VecJet {
    type Output = VecJet;
    fn add(self, rhs: VecJet) -> VecJet {
        VecJet([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for VecJet {
    type Output = VecJet;
    fn sub(self, rhs: VecJet) -> VecJet {
        VecJet([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for VecJet {
    type Output = VecJet;
    fn neg(self) -> VecJet {
        VecJet(self.0.map(|c| -c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn product_rule_matches_hand_derivatives() {
        // f = x^2 y at (2, 3)
        let x = Jet::variable(0, 2.0);
        let y = Jet::variable(1, 3.0);
        let f = x * x * y;
        assert!(close(f.value(), 12.0));
        assert!(close(f.partial(1, 0), 12.0));
        assert!(close(f.partial(0, 1), 4.0));
        assert!(close(f.partial(2, 0), 6.0));
        assert!(close(f.partial(1, 1), 4.0));
        assert!(close(f.partial(0, 2), 0.0));
        assert!(close(f.partial(2, 1), 2.0));
        assert!(close(f.partial(3, 0), 0.0));
    }

    #[test]
    fn elementary_functions() {
        let x = Jet::variable(0, 0.7);
        let s = x.sin();
        assert!(close(s.partial(3, 0), -(0.7f64).cos()));
        let c = x.cos();
        assert!(close(c.partial(2, 0), -(0.7f64).cos()));
        let q = x.sqrt();
        assert!(close(q.partial(3, 0), 0.375 * 0.7f64.powf(-2.5)));
        let r = x.recip();
        assert!(close(r.partial(3, 0), -6.0 / 0.7f64.powi(4)));
        let p = x.powi(3);
        assert!(close(p.partial(3, 0), 6.0));
        let one = s * s + c * c;
        assert!(close(one.value(), 1.0));
        assert!(one.partial(2, 1).abs() < 1e-12 || one.order() < 3);
        assert!(one.partial(3, 0).abs() < 1e-12);
    }

    #[test]
    fn mixed_composition() {
        // f = sin(x y) at (0.3, 1.1); ∂²f/∂x∂y = cos(xy) - xy sin(xy)
        let x = Jet::variable(0, 0.3);
        let y = Jet::variable(1, 1.1);
        let f = (x * y).sin();
        let p = 0.33f64;
        assert!(close(f.partial(1, 1), p.cos() - p * p.sin()));
        // ∂³f/∂x²∂y = -2y sin(xy) - x y² cos(xy)
        assert!(close(
            f.partial(2, 1),
            -2.0 * 1.1 * p.sin() - 0.3 * 1.21 * p.cos()
        ));
    }

    #[test]
    fn differentiation_lowers_order() {
        let x = Jet::variable(0, 1.0);
        let f = x.powi(4);
        let d = f.derivative(0);
        assert_eq!(d.order(), 2);
        assert!(close(d.value(), 4.0));
        assert!(close(d.partial(2, 0), 24.0));
        assert_eq!((d * f).order(), 2);
    }

    #[test]
    #[should_panic]
    fn partial_beyond_order_panics() {
        Jet::variable(0, 1.0).derivative(0).derivative(1).partial(2, 0);
    }

    #[test]
    fn division_and_nonfinite_detection() {
        let x = Jet::variable(0, 2.0);
        let q = Jet::constant(1.0) / x;
        assert!(close(q.partial(1, 0), -0.25));
        let bad = Jet::constant(1.0) / Jet::variable(0, 0.0);
        assert!(!bad.is_finite());
    }
}
