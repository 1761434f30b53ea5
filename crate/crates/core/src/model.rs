//! Floating-point charts, Lagrangian and Hamiltonian mechanics, Noether momenta,
//! the invariant measure and the unit scaling used by the quantum problem.
//!
//! Sign convention: the Lagrangian is `L = T + V` with
//! `V(r) = −(α²/2) r²/(1−κr²)` and the Hamiltonian is `H = p·v − L = T − V`.
//! Euler–Lagrange equations of this `L` are the equations of motion integrated in
//! [`crate::classical`]. The mass enters as `T = (m/2) g_ij v^i v^j`; `m = 1`
//! recovers the unit-mass formulas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Curvature κ of the surface: sphere for κ > 0, plane for κ = 0, hyperbolic
/// plane for κ < 0.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Curvature(f64);

impl Curvature {
    pub fn new(kappa: f64) -> Result<Self> {
        if kappa.is_finite() {
            Ok(Curvature(kappa))
        } else {
            Err(Error::InvalidParameter(format!("curvature {kappa}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// 1 − κr², required positive everywhere in the chart.
    pub fn margin(self, r: f64) -> f64 {
        1.0 - self.0 * r * r
    }

    pub fn check(self, r: f64) -> Result<f64> {
        let m = self.margin(r);
        if m > 0.0 && m.is_finite() {
            Ok(m)
        } else {
            Err(Error::Domain { margin: m })
        }
    }

    /// Chart boundary 1/√κ for κ > 0.
    pub fn boundary_radius(self) -> Option<f64> {
        (self.0 > 0.0).then(|| 1.0 / self.0.sqrt())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysConstants {
    pub m: f64,
    pub alpha: f64,
    pub hbar: f64,
}

impl PhysConstants {
    pub fn new(m: f64, alpha: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("alpha", alpha), ("hbar", hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be > 0")));
            }
        }
        Ok(PhysConstants { m, alpha, hbar })
    }

    pub fn unit() -> Self {
        PhysConstants {
            m: 1.0,
            alpha: 1.0,
            hbar: 1.0,
        }
    }

    /// β with α = √m β.
    pub fn beta(&self) -> f64 {
        self.alpha / self.m.sqrt()
    }
}

/// Position and velocity in the polar chart. φ is never wrapped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylState {
    pub r: f64,
    pub phi: f64,
    pub vr: f64,
    pub vphi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylMomenta {
    pub r: f64,
    pub phi: f64,
    pub pr: f64,
    pub pphi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartState {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartMomenta {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Cylindrical,
    Cartesian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fiber {
    Velocity,
    Momentum,
}

/// Chart-tagged state used for serialization: `{chart, fiber, kappa, coords}`.
///
/// `coords` are `(r, φ, ·, ·)` or `(x, y, ·, ·)` followed by velocity or
/// momentum components according to `fiber`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub chart: Chart,
    pub fiber: Fiber,
    pub kappa: f64,
    pub coords: [f64; 4],
}

impl PhaseState {
    pub fn cyl(kappa: f64, s: CylState) -> Self {
        PhaseState {
            chart: Chart::Cylindrical,
            fiber: Fiber::Velocity,
            kappa,
            coords: [s.r, s.phi, s.vr, s.vphi],
        }
    }

    pub fn cart(kappa: f64, s: CartState) -> Self {
        PhaseState {
            chart: Chart::Cartesian,
            fiber: Fiber::Velocity,
            kappa,
            coords: [s.x, s.y, s.vx, s.vy],
        }
    }

    pub fn cyl_momenta(kappa: f64, s: CylMomenta) -> Self {
        PhaseState {
            chart: Chart::Cylindrical,
            fiber: Fiber::Momentum,
            kappa,
            coords: [s.r, s.phi, s.pr, s.pphi],
        }
    }

    pub fn cart_momenta(kappa: f64, s: CartMomenta) -> Self {
        PhaseState {
            chart: Chart::Cartesian,
            fiber: Fiber::Momentum,
            kappa,
            coords: [s.x, s.y, s.px, s.py],
        }
    }

    fn radius(&self) -> f64 {
        match self.chart {
            Chart::Cylindrical => self.coords[0],
            Chart::Cartesian => self.coords[0].hypot(self.coords[1]),
        }
    }

    /// Re-expresses the state in `target`, keeping the fiber type. Momenta
    /// transform as covectors: p_r = p·∂x/∂r, p_φ = x p_y − y p_x.
    pub fn transform(&self, target: Chart) -> Result<PhaseState> {
        if !self.coords.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinates".into()));
        }
        let kappa = Curvature::new(self.kappa)?;
        kappa.check(self.radius())?;
        if self.chart == target {
            return Ok(*self);
        }
        let [a, b, c, d] = self.coords;
        let coords = match (self.chart, self.fiber) {
            (Chart::Cylindrical, Fiber::Velocity) => {
                let s = cyl_to_cart(&CylState {
                    r: a,
                    phi: b,
                    vr: c,
                    vphi: d,
                })?;
                [s.x, s.y, s.vx, s.vy]
            }
            (Chart::Cartesian, Fiber::Velocity) => {
                let s = cart_to_cyl(&CartState {
                    x: a,
                    y: b,
                    vx: c,
                    vy: d,
                })?;
                [s.r, s.phi, s.vr, s.vphi]
            }
            (Chart::Cylindrical, Fiber::Momentum) => {
                if a <= 0.0 {
                    return Err(Error::DegenerateOrigin);
                }
                let (sn, cs) = b.sin_cos();
                // p_x = cos φ p_r − sin φ p_φ / r, p_y = sin φ p_r + cos φ p_φ / r
                [a * cs, a * sn, cs * c - sn * d / a, sn * c + cs * d / a]
            }
            (Chart::Cartesian, Fiber::Momentum) => {
                let r = a.hypot(b);
                if r == 0.0 {
                    return Err(Error::DegenerateOrigin);
                }
                let phi = b.atan2(a);
                [r, phi, (a * c + b * d) / r, a * d - b * c]
            }
        };
        Ok(PhaseState {
            chart: target,
            coords,
            ..*self
        })
    }
}

pub fn cyl_to_cart(s: &CylState) -> Result<CartState> {
    if s.r <= 0.0 {
        return Err(Error::DegenerateOrigin);
    }
    let (sn, cs) = s.phi.sin_cos();
    Ok(CartState {
        x: s.r * cs,
        y: s.r * sn,
        vx: s.vr * cs - s.r * sn * s.vphi,
        vy: s.vr * sn + s.r * cs * s.vphi,
    })
}

pub fn cart_to_cyl(s: &CartState) -> Result<CylState> {
    let r = s.x.hypot(s.y);
    if r == 0.0 {
        return Err(Error::DegenerateOrigin);
    }
    Ok(CylState {
        r,
        phi: s.y.atan2(s.x),
        vr: (s.x * s.vx + s.y * s.vy) / r,
        vphi: (s.x * s.vy - s.y * s.vx) / (r * r),
    })
}

/// V(r) = −(α²/2) r²/(1−κr²).
pub fn potential(r: f64, kappa: Curvature, c: &PhysConstants) -> Result<f64> {
    let w = kappa.check(r)?;
    Ok(-0.5 * c.alpha * c.alpha * r * r / w)
}

pub fn lagrangian_cyl(s: &CylState, kappa: Curvature, c: &PhysConstants) -> Result<f64> {
    let w = kappa.check(s.r)?;
    let t = 0.5 * c.m * (s.vr * s.vr / w + s.r * s.r * s.vphi * s.vphi);
    Ok(t + potential(s.r, kappa, c)?)
}

pub fn lagrangian_cart(s: &CartState, kappa: Curvature, c: &PhysConstants) -> Result<f64> {
    let r = s.x.hypot(s.y);
    let w = kappa.check(r)?;
    let l = s.x * s.vy - s.y * s.vx;
    let k = kappa.value();
    let t = 0.5 * c.m * (s.vx * s.vx + s.vy * s.vy - k * l * l) / w;
    Ok(t + potential(r, kappa, c)?)
}

/// p = ∂L/∂v in the Cartesian chart.
pub fn cart_momenta(s: &CartState, kappa: Curvature, m: f64) -> Result<CartMomenta> {
    let w = kappa.check(s.x.hypot(s.y))?;
    let k = kappa.value();
    let l = s.x * s.vy - s.y * s.vx;
    Ok(CartMomenta {
        x: s.x,
        y: s.y,
        px: m * (s.vx + k * l * s.y) / w,
        py: m * (s.vy - k * l * s.x) / w,
    })
}

/// Inverse Legendre map in the Cartesian chart.
pub fn cart_velocities(p: &CartMomenta, kappa: Curvature, m: f64) -> Result<CartState> {
    kappa.check(p.x.hypot(p.y))?;
    let k = kappa.value();
    let (x, y) = (p.x, p.y);
    Ok(CartState {
        x,
        y,
        vx: ((1.0 - k * x * x) * p.px - k * x * y * p.py) / m,
        vy: ((1.0 - k * y * y) * p.py - k * x * y * p.px) / m,
    })
}

pub fn cyl_momenta(s: &CylState, kappa: Curvature, m: f64) -> Result<CylMomenta> {
    let w = kappa.check(s.r)?;
    Ok(CylMomenta {
        r: s.r,
        phi: s.phi,
        pr: m * s.vr / w,
        pphi: m * s.r * s.r * s.vphi,
    })
}

pub fn cyl_velocities(p: &CylMomenta, kappa: Curvature, m: f64) -> Result<CylState> {
    let w = kappa.check(p.r)?;
    if p.r <= 0.0 {
        return Err(Error::DegenerateOrigin);
    }
    Ok(CylState {
        r: p.r,
        phi: p.phi,
        vr: w * p.pr / m,
        vphi: p.pphi / (m * p.r * p.r),
    })
}

/// H = (1/2m)(p_x² + p_y² − κ(x p_x + y p_y)²) − V.
pub fn hamiltonian_cart(p: &CartMomenta, kappa: Curvature, c: &PhysConstants) -> Result<f64> {
    let r = p.x.hypot(p.y);
    let v = potential(r, kappa, c)?;
    let d = p.x * p.px + p.y * p.py;
    let t = (p.px * p.px + p.py * p.py - kappa.value() * d * d) / (2.0 * c.m);
    Ok(t - v)
}

/// H = (1/2m)[(1−κr²)p_r² + p_φ²/r²] − V(r).
pub fn hamiltonian_cyl(p: &CylMomenta, kappa: Curvature, c: &PhysConstants) -> Result<f64> {
    let w = kappa.check(p.r)?;
    if p.r <= 0.0 {
        return Err(Error::DegenerateOrigin);
    }
    let t = (w * p.pr * p.pr + p.pphi * p.pphi / (p.r * p.r)) / (2.0 * c.m);
    Ok(t - potential(p.r, kappa, c)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoetherMomenta {
    pub p1: f64,
    pub p2: f64,
    pub j: f64,
}

/// Momenta conjugate to the Killing fields X₁, X₂, X_J.
pub fn noether_momenta(p: &CylMomenta, kappa: Curvature) -> Result<NoetherMomenta> {
    let w = kappa.check(p.r)?;
    if p.r <= 0.0 {
        return Err(Error::DegenerateOrigin);
    }
    let s = w.sqrt();
    let (sn, cs) = p.phi.sin_cos();
    Ok(NoetherMomenta {
        p1: s * (cs * p.pr - sn * p.pphi / p.r),
        p2: s * (sn * p.pr + cs * p.pphi / p.r),
        j: p.pphi,
    })
}

/// Noether momenta from Cartesian canonical momenta: P₁ = √(1−κr²) p_x,
/// P₂ = √(1−κr²) p_y, J = x p_y − y p_x. Regular at the origin.
pub fn noether_momenta_cart(p: &CartMomenta, kappa: Curvature) -> Result<NoetherMomenta> {
    let s = kappa.check(p.x.hypot(p.y))?.sqrt();
    Ok(NoetherMomenta {
        p1: s * p.px,
        p2: s * p.py,
        j: p.x * p.py - p.y * p.px,
    })
}

/// Density of dμ_κ = r/√(1−κr²) dr∧dφ.
pub fn measure_density(r: f64, kappa: Curvature) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("radius {r} < 0")));
    }
    let w = kappa.check(r)?;
    Ok(r / w.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleDirection {
    ToScaled,
    ToPhysical,
}

/// r = √(ħ/mβ) r̄, κ = (mβ/ħ) κ̄, E = ħβ 𝓔.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitScaling {
    pub length: f64,
    pub curvature: f64,
    pub energy: f64,
}

impl UnitScaling {
    pub fn new(c: &PhysConstants) -> Self {
        let beta = c.beta();
        UnitScaling {
            length: (c.hbar / (c.m * beta)).sqrt(),
            curvature: c.m * beta / c.hbar,
            energy: c.hbar * beta,
        }
    }

    pub fn length(&self, v: f64, d: ScaleDirection) -> f64 {
        match d {
            ScaleDirection::ToScaled => v / self.length,
            ScaleDirection::ToPhysical => v * self.length,
        }
    }

    pub fn curvature(&self, v: f64, d: ScaleDirection) -> f64 {
        match d {
            ScaleDirection::ToScaled => v / self.curvature,
            ScaleDirection::ToPhysical => v * self.curvature,
        }
    }

    pub fn energy(&self, v: f64, d: ScaleDirection) -> f64 {
        match d {
            ScaleDirection::ToScaled => v / self.energy,
            ScaleDirection::ToPhysical => v * self.energy,
        }
    }
}

/// Coefficient of r̄²/(1−κ̄r̄²) in the scaled Schrödinger operator after the
/// shift β² → β² − κħβ/m, computed by carrying the physical potential through
/// the scaling: ½ m β'² r² / (½ ħβ) with r² = (ħ/mβ) r̄². Equals 1 − κ̄.
pub fn scaled_potential_coefficient(kappa_physical: f64, c: &PhysConstants) -> f64 {
    let beta = c.beta();
    let shifted = beta * beta - kappa_physical * c.hbar * beta / c.m;
    let sc = UnitScaling::new(c);
    let physical_coeff = 0.5 * c.m * shifted * sc.length * sc.length;
    physical_coeff / (0.5 * sc.energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    #[test]
    fn polar_to_cartesian_at_zero_angle() {
        let c = cyl_to_cart(&CylState {
            r: 1.0,
            phi: 0.0,
            vr: 0.0,
            vphi: 1.0,
        })
        .unwrap();
        assert_eq!((c.x, c.y, c.vx, c.vy), (1.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn quarter_turn_velocities() {
        let s = CylState {
            r: 0.7,
            phi: std::f64::consts::FRAC_PI_2,
            vr: 0.3,
            vphi: -1.2,
        };
        let c = cyl_to_cart(&s).unwrap();
        assert_relative_eq!(c.vx, -s.r * s.vphi, epsilon = 1e-15);
        assert_relative_eq!(c.vy, s.vr, epsilon = 1e-15);
    }

    #[test]
    fn origin_is_degenerate() {
        let e = cart_to_cyl(&CartState {
            x: 0.0,
            y: 0.0,
            vx: 1.0,
            vy: 0.0,
        });
        assert_eq!(e, Err(Error::DegenerateOrigin));
    }

    #[test]
    fn lagrangian_special_cases() {
        let c = PhysConstants::new(1.0, 1.3, 1.0).unwrap();
        let s = CylState {
            r: 0.8,
            phi: 0.2,
            vr: 0.4,
            vphi: 0.9,
        };
        let flat = lagrangian_cyl(&s, k(0.0), &c).unwrap();
        let v = -0.5 * 1.69 * 0.64;
        assert_relative_eq!(flat, 0.5 * (0.16 + 0.64 * 0.81) + v, epsilon = 1e-15);
        let rest = CylState {
            vr: 0.0,
            vphi: 0.0,
            ..s
        };
        let l = lagrangian_cyl(&rest, k(0.5), &c).unwrap();
        assert_relative_eq!(l, -0.5 * 1.69 * 0.64 / (1.0 - 0.5 * 0.64), epsilon = 1e-15);
    }

    #[test]
    fn flat_momenta_are_velocities() {
        let s = CartState {
            x: 0.3,
            y: -0.4,
            vx: 1.5,
            vy: 0.2,
        };
        let p = cart_momenta(&s, k(0.0), 1.0).unwrap();
        assert_eq!((p.px, p.py), (s.vx, s.vy));
    }

    #[test]
    fn domain_guard() {
        let s = CylState {
            r: 1.0,
            phi: 0.0,
            vr: 0.0,
            vphi: 0.0,
        };
        assert!(matches!(
            lagrangian_cyl(&s, k(1.0), &PhysConstants::unit()),
            Err(Error::Domain { .. })
        ));
        assert!(measure_density(2.0, k(0.25)).is_err());
    }

    #[test]
    fn measure_values() {
        assert_eq!(measure_density(0.6, k(0.0)).unwrap(), 0.6);
        assert_relative_eq!(
            measure_density(1.0, k(0.25)).unwrap(),
            1.0 / 0.75f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn noether_flat_axis() {
        let p = CylMomenta {
            r: 2.0,
            phi: 0.0,
            pr: 0.7,
            pphi: -0.4,
        };
        let n = noether_momenta(&p, k(0.0)).unwrap();
        assert_relative_eq!(n.p1, 0.7, epsilon = 1e-15);
        assert_relative_eq!(n.p2, -0.2, epsilon = 1e-15);
        assert_eq!(n.j, -0.4);
    }

    #[test]
    fn unit_scaling_is_identity_for_unit_constants() {
        let sc = UnitScaling::new(&PhysConstants::unit());
        for d in [ScaleDirection::ToScaled, ScaleDirection::ToPhysical] {
            assert_eq!(sc.length(1.7, d), 1.7);
            assert_eq!(sc.curvature(-0.3, d), -0.3);
            assert_eq!(sc.energy(2.5, d), 2.5);
        }
    }

    #[test]
    fn scaling_round_trip_and_energy() {
        let c = PhysConstants::new(2.0, 3.0, 0.5).unwrap();
        let sc = UnitScaling::new(&c);
        let beta = 3.0 / 2f64.sqrt();
        assert_relative_eq!(sc.energy(1.0, ScaleDirection::ToPhysical), 0.5 * beta);
        for v in [0.3, -1.1, 12.0] {
            let back = sc.length(
                sc.length(v, ScaleDirection::ToScaled),
                ScaleDirection::ToPhysical,
            );
            assert_relative_eq!(back, v, max_relative = 1e-14);
            let back = sc.curvature(
                sc.curvature(v, ScaleDirection::ToPhysical),
                ScaleDirection::ToScaled,
            );
            assert_relative_eq!(back, v, max_relative = 1e-14);
        }
    }

    #[test]
    fn scaled_potential_is_one_minus_kappa() {
        let c = PhysConstants::new(1.7, 0.9, 0.3).unwrap();
        let sc = UnitScaling::new(&c);
        for kbar in [-0.4, 0.0, 0.1, 0.8] {
            let kphys = sc.curvature(kbar, ScaleDirection::ToPhysical);
            assert_relative_eq!(
                scaled_potential_coefficient(kphys, &c),
                1.0 - kbar,
                max_relative = 1e-13
            );
        }
    }
}
