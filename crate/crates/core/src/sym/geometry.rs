//! Vector fields, the metric tensor and Lie derivatives on the (r, φ) chart.

use super::ring::{RingElement, Var};

/// `f ∂/∂r + h ∂/∂φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField2 {
    pub f: RingElement,
    pub h: RingElement,
}

impl VectorField2 {
    pub fn new(f: RingElement, h: RingElement) -> Self {
        VectorField2 { f, h }
    }

    pub fn zero() -> Self {
        VectorField2::new(RingElement::zero(), RingElement::zero())
    }

    /// √(1−κr²) (cos φ ∂_r − (1/r) sin φ ∂_φ)
    pub fn x1() -> Self {
        let s = RingElement::s();
        VectorField2::new(
            &s * &RingElement::cos(),
            -(&s * &RingElement::sin()).div_r(),
        )
    }

    /// √(1−κr²) (sin φ ∂_r + (1/r) cos φ ∂_φ)
    pub fn x2() -> Self {
        let s = RingElement::s();
        VectorField2::new(&s * &RingElement::sin(), (&s * &RingElement::cos()).div_r())
    }

    /// ∂_φ
    pub fn xj() -> Self {
        VectorField2::new(RingElement::zero(), RingElement::one())
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.h.is_zero()
    }

    pub fn component(&self, i: usize) -> &RingElement {
        match i {
            0 => &self.f,
            _ => &self.h,
        }
    }

    /// Directional derivative X(u) = f ∂_r u + h ∂_φ u.
    pub fn apply(&self, u: &RingElement) -> RingElement {
        &self.f * &u.differentiate(Var::R) + &self.h * &u.differentiate(Var::Phi)
    }

    pub fn scale(&self, c: &RingElement) -> Self {
        VectorField2::new(c * &self.f, c * &self.h)
    }

    pub fn add(&self, other: &VectorField2) -> Self {
        VectorField2::new(&self.f + &other.f, &self.h + &other.h)
    }

    pub fn sub(&self, other: &VectorField2) -> Self {
        VectorField2::new(&self.f - &other.f, &self.h - &other.h)
    }
}

/// Symmetric 2×2 tensor on the (r, φ) chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMetric {
    pub g_rr: RingElement,
    pub g_rphi: RingElement,
    pub g_phiphi: RingElement,
}

impl SymMetric {
    /// g = dr²/(1−κr²) + r² dφ², normalized so that T = ½ g_ij v^i v^j
    /// reproduces the cylindrical kinetic Lagrangian.
    pub fn constant_curvature() -> Self {
        let r = RingElement::r();
        SymMetric {
            g_rr: RingElement::one().div_w(),
            g_rphi: RingElement::zero(),
            g_phiphi: &r * &r,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        match (i, j) {
            (0, 0) => &self.g_rr,
            (1, 1) => &self.g_phiphi,
            _ => &self.g_rphi,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.g_rr.is_zero() && self.g_rphi.is_zero() && self.g_phiphi.is_zero()
    }
}

fn coord(i: usize) -> Var {
    if i == 0 {
        Var::R
    } else {
        Var::Phi
    }
}

/// (ℒ_X g)_ij = X^k ∂_k g_ij + g_kj ∂_i X^k + g_ik ∂_j X^k
pub fn lie_derivative_metric(x: &VectorField2, g: &SymMetric) -> SymMetric {
    let entry = |i: usize, j: usize| {
        let mut acc = x.apply(g.get(i, j));
        for k in 0..2 {
            acc = acc + g.get(k, j) * &x.component(k).differentiate(coord(i));
            acc = acc + g.get(i, k) * &x.component(k).differentiate(coord(j));
        }
        acc
    };
    SymMetric {
        g_rr: entry(0, 0),
        g_rphi: entry(0, 1),
        g_phiphi: entry(1, 1),
    }
}

/// The three scalar conditions for X to be Killing for the constant-curvature
/// metric:
///
/// ```text
/// f_r + κ r f/(1−κr²),   r² h_r + f_φ/(1−κr²),   r h_φ + f
/// ```
pub fn killing_residuals(x: &VectorField2) -> [RingElement; 3] {
    let r = RingElement::r();
    let k = RingElement::kappa();
    let f_r = x.f.differentiate(Var::R);
    let f_phi = x.f.differentiate(Var::Phi);
    let h_r = x.h.differentiate(Var::R);
    let h_phi = x.h.differentiate(Var::Phi);
    [
        f_r + (&k * &r * &x.f).div_w(),
        &r * &r * &h_r + f_phi.div_w(),
        &r * &h_phi + &x.f,
    ]
}

/// [X, Y]^i = X^k ∂_k Y^i − Y^k ∂_k X^i
pub fn vf_commutator(x: &VectorField2, y: &VectorField2) -> VectorField2 {
    VectorField2::new(x.apply(&y.f) - y.apply(&x.f), x.apply(&y.h) - y.apply(&x.h))
}

/// Coefficient of ℒ_X (ρ dr∧dφ) for the density ρ = r/√(1−κr²):
/// ∂_r(ρ f) + ∂_φ(ρ h).
pub fn measure_lie_derivative(x: &VectorField2) -> RingElement {
    let rho = RingElement::r().div_s();
    (&rho * &x.f).differentiate(Var::R) + (&rho * &x.h).differentiate(Var::Phi)
}
