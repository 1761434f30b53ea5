//! Closed-form spectrum and wavefunctions of the scaled Schrödinger operator
//!
//! ```text
//! Ĥ = −½[(1−κr²)∂²_r + (1−2κr²)/r ∂_r + r⁻² ∂²_φ] + ½(1−κ) r²/(1−κr²)
//! ```
//!
//! and an independent finite-volume eigensolver used to decide which
//! closed-form energy family is the physical one.
//!
//! Three candidate families are carried side by side:
//!
//! * [`EnergyBranch::Printed`]: 𝓔 = (n+1)(½(n+2)κ − 1), from the exponent
//!   s = ½ − 1/(2κ). Formal solutions, never normalizable.
//! * [`EnergyBranch::SignMirror`]: −(printed). Agrees with the Euclidean
//!   oscillator only at κ = 0.
//! * [`EnergyBranch::ExponentConjugate`]: 𝓔 = (n+1)(1 + ½nκ), from the other
//!   exponent s = 1/(2κ).
//!
//! [`adjudicate`] compares all three with [`sl_eigensolve`];
//! [`RESOLVED_BRANCH`] records the outcome and is re-checked by the tests.

pub mod oracle;
pub mod quadrature;
pub mod series;
pub mod wavefunction;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::PhysConstants;
pub use oracle::{
    adjudicate, sl_eigensolve, Adjudication, OracleOptions, OracleResult, RadialGrid,
};
pub use quadrature::{gauss_legendre, gram_matrix, quadrature_norm};
pub use series::{frobenius_series, hyp2f1, kummer_m, Exponent};
pub use wavefunction::{
    default_sample_radii, eval_wavefunction, schrodinger_residual, RadialForm, Wavefunction,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AngularSign {
    Plus,
    Minus,
}

impl AngularSign {
    pub fn factor(self) -> f64 {
        match self {
            AngularSign::Plus => 1.0,
            AngularSign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuantumNumbers {
    pub n_r: u32,
    pub mu: u32,
    pub sign: AngularSign,
}

impl QuantumNumbers {
    pub fn new(n_r: u32, mu: u32) -> Self {
        QuantumNumbers {
            n_r,
            mu,
            sign: AngularSign::Plus,
        }
    }

    pub fn with_sign(self, sign: AngularSign) -> Self {
        QuantumNumbers { sign, ..self }
    }

    /// n = 2N_r + μ.
    pub fn n(&self) -> u32 {
        2 * self.n_r + self.mu
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyBranch {
    Printed,
    SignMirror,
    ExponentConjugate,
}

pub const ALL_BRANCHES: [EnergyBranch; 3] = [
    EnergyBranch::Printed,
    EnergyBranch::SignMirror,
    EnergyBranch::ExponentConjugate,
];

/// Branch selected by the numerical eigensolver for every tested (μ, κ).
pub const RESOLVED_BRANCH: EnergyBranch = EnergyBranch::ExponentConjugate;

impl EnergyBranch {
    pub fn name(self) -> &'static str {
        match self {
            EnergyBranch::Printed => "printed",
            EnergyBranch::SignMirror => "sign-mirror",
            EnergyBranch::ExponentConjugate => "exponent-conjugate",
        }
    }

    /// Exponent root whose wavefunctions realize this family, if any.
    pub fn exponent(self) -> Option<Exponent> {
        match self {
            EnergyBranch::Printed => Some(Exponent::Printed),
            EnergyBranch::SignMirror => None,
            EnergyBranch::ExponentConjugate => Some(Exponent::Conjugate),
        }
    }

    /// Scaled energy as a function of n = 2N_r + μ.
    pub fn energy(self, n: u32, kappa: f64) -> f64 {
        let n = n as f64;
        let printed = (n + 1.0) * (0.5 * (n + 2.0) * kappa - 1.0);
        match self {
            EnergyBranch::Printed => printed,
            EnergyBranch::SignMirror => -printed,
            EnergyBranch::ExponentConjugate => (n + 1.0) * (1.0 + 0.5 * n * kappa),
        }
    }
}

impl std::str::FromStr for EnergyBranch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(EnergyBranch::Printed),
            "sign-mirror" => Ok(EnergyBranch::SignMirror),
            "exponent-conjugate" | "resolved" => Ok(EnergyBranch::ExponentConjugate),
            other => Err(Error::InvalidParameter(format!("unknown branch '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    ClosedForm,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralLine {
    pub qn: QuantumNumbers,
    pub n: u32,
    pub e_scaled: f64,
    /// E = (ħα/√m) 𝓔.
    pub e_physical: f64,
    pub source: Source,
    pub branch: EnergyBranch,
}

/// E = ħβ𝓔 with α = √m β.
pub fn physical_energy(e_scaled: f64, c: &PhysConstants) -> f64 {
    c.hbar * c.beta() * e_scaled
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedFormEnergy {
    pub printed: SpectralLine,
    pub resolved: SpectralLine,
}

/// Energy at which the hypergeometric series of the given exponent branch
/// terminates after N_r terms, derived from (N_r, μ) through the root
/// condition rather than through n. κ = 0 uses the Kummer condition.
pub fn termination_energy(n_r: u32, mu: u32, kappa: f64, e: Exponent) -> f64 {
    let (nr, m) = (n_r as f64, mu as f64);
    if kappa == 0.0 {
        // a = ½(μ+1−𝓔) = −N_r for the conjugate path, ½(𝓔+μ+1) = −N_r otherwise
        return match e {
            Exponent::Conjugate => 2.0 * nr + m + 1.0,
            Exponent::Printed => -(2.0 * nr + m + 1.0),
        };
    }
    // Δ from the terminating root, then 𝓔 = (Δ² − (κ−2)²)/(8κ)
    let delta = match e {
        Exponent::Printed => -(3.0 * kappa + 2.0 * m * kappa - 2.0 + 4.0 * kappa * nr),
        Exponent::Conjugate => (2.0 * m + 1.0) * kappa + 2.0 + 4.0 * kappa * nr,
    };
    (delta * delta - (kappa - 2.0) * (kappa - 2.0)) / (8.0 * kappa)
}

pub fn closed_form_energy(qn: QuantumNumbers, kappa: f64, c: &PhysConstants) -> ClosedFormEnergy {
    let line = |branch: EnergyBranch, e: f64| SpectralLine {
        qn,
        n: qn.n(),
        e_scaled: e,
        e_physical: physical_energy(e, c),
        source: Source::ClosedForm,
        branch,
    };
    let resolved_e = match RESOLVED_BRANCH.exponent() {
        Some(x) => termination_energy(qn.n_r, qn.mu, kappa, x),
        None => RESOLVED_BRANCH.energy(qn.n(), kappa),
    };
    ClosedFormEnergy {
        printed: line(
            EnergyBranch::Printed,
            termination_energy(qn.n_r, qn.mu, kappa, Exponent::Printed),
        ),
        resolved: line(RESOLVED_BRANCH, resolved_e),
    }
}

/// Largest n with a normalizable conjugate-branch state: (2n+1)|κ| < 2 for
/// κ < 0; unbounded otherwise.
pub fn max_bound_n(kappa: f64) -> Option<u32> {
    if kappa >= 0.0 {
        return None;
    }
    let limit = 1.0 / kappa.abs() - 0.5;
    let n = limit.ceil() - 1.0;
    Some(n.max(0.0) as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Root {
    A,
    B,
}

/// Parameters of ₂F₁(a, b; c; κr²).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HypParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub delta: f64,
    pub exponent: Exponent,
}

impl HypParams {
    /// Which root, if any, is a non-positive integer −N_r (to `tol`).
    pub fn terminating(&self, tol: f64) -> Option<(Root, u32)> {
        for (root, v) in [(Root::A, self.a), (Root::B, self.b)] {
            if v <= tol && (v - v.round()).abs() <= tol {
                return Some((root, (-v.round()) as u32));
            }
        }
        None
    }

    /// The root other than the terminating one (b_κ of the wavefunction).
    pub fn free_parameter(&self, tol: f64) -> f64 {
        match self.terminating(tol) {
            Some((Root::B, _)) => self.a,
            _ => self.b,
        }
    }
}

/// a + b and a·b as given by the reduced equation in s = κr².
pub fn hyp_sum_product(e_scaled: f64, mu: u32, kappa: f64, x: Exponent) -> (f64, f64) {
    let m = mu as f64;
    match x {
        Exponent::Printed => (
            ((2.0 * m + 3.0) * kappa - 2.0) / (2.0 * kappa),
            -(e_scaled + m + 1.0) / (2.0 * kappa) + 0.25 * (m + 1.0) * (m + 2.0),
        ),
        Exponent::Conjugate => (
            ((2.0 * m + 1.0) * kappa + 2.0) / (2.0 * kappa),
            -(e_scaled - m - 1.0) / (2.0 * kappa) + 0.25 * m * (m + 1.0),
        ),
    }
}

/// Printed-exponent parameters a, b = (3κ + 2μκ − 2 ∓ Δ)/(4κ),
/// Δ = √((κ−2)² + 8𝓔κ), c = μ + 1.
pub fn hyp_params(e_scaled: f64, mu: u32, kappa: f64) -> Result<HypParams> {
    hyp_params_branch(e_scaled, mu, kappa, Exponent::Printed)
}

/// As [`hyp_params`] for either exponent root; the conjugate root has
/// a, b = ((2μ+1)κ + 2 ∓ Δ)/(4κ) with the same Δ.
pub fn hyp_params_branch(e_scaled: f64, mu: u32, kappa: f64, x: Exponent) -> Result<HypParams> {
    if kappa == 0.0 {
        return Err(Error::ZeroCurvature);
    }
    let disc = (kappa - 2.0) * (kappa - 2.0) + 8.0 * e_scaled * kappa;
    if disc < 0.0 {
        return Err(Error::ComplexParameters(disc));
    }
    let delta = disc.sqrt();
    let m = mu as f64;
    let base = match x {
        Exponent::Printed => 3.0 * kappa + 2.0 * m * kappa - 2.0,
        Exponent::Conjugate => (2.0 * m + 1.0) * kappa + 2.0,
    };
    Ok(HypParams {
        a: (base - delta) / (4.0 * kappa),
        b: (base + delta) / (4.0 * kappa),
        c: m + 1.0,
        delta,
        exponent: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_ground_state_branches() {
        let c = PhysConstants::unit();
        let cf = closed_form_energy(QuantumNumbers::new(0, 0), 0.0, &c);
        assert_eq!(cf.printed.e_scaled, -1.0);
        assert_eq!(cf.resolved.e_scaled, 1.0);
        // Kummer parameter a = ½(1 + μ − 𝓔) vanishes at the resolved value
        assert_eq!(0.5 * (1.0 - cf.resolved.e_scaled), 0.0);
    }

    #[test]
    fn termination_route_matches_n_formula() {
        for kappa in [-0.3, -0.1, 0.0, 0.1, 0.7] {
            for mu in 0..4 {
                for nr in 0..4 {
                    let n = 2 * nr + mu;
                    for (b, x) in [
                        (EnergyBranch::Printed, Exponent::Printed),
                        (EnergyBranch::ExponentConjugate, Exponent::Conjugate),
                    ] {
                        let t = termination_energy(nr, mu, kappa, x);
                        assert!((t - b.energy(n, kappa)).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn hyp_params_sum_and_product() {
        let (e, mu, k) = (2.0, 1, 0.3);
        let p = hyp_params(e, mu, k).unwrap();
        let (s, pr) = hyp_sum_product(e, mu, k, Exponent::Printed);
        assert!((p.a + p.b - s).abs() < 1e-12);
        assert!((p.a * p.b - pr).abs() < 1e-12);
        assert_eq!(p.c, 2.0);
    }

    #[test]
    fn delta_tends_to_two() {
        let p = hyp_params(1.5, 0, 1e-9).unwrap();
        assert!((p.delta - 2.0).abs() < 1e-8);
    }

    #[test]
    fn zero_curvature_and_complex_parameters_are_errors() {
        assert_eq!(hyp_params(1.0, 0, 0.0), Err(Error::ZeroCurvature));
        // (κ−2)² + 8𝓔κ < 0
        assert!(matches!(
            hyp_params(-10.0, 0, 0.5),
            Err(Error::ComplexParameters(_))
        ));
    }

    #[test]
    fn printed_energies_terminate_through_b() {
        let p = hyp_params(EnergyBranch::Printed.energy(0, 0.1), 0, 0.1).unwrap();
        assert_eq!(p.terminating(1e-9), Some((Root::B, 0)));
        assert!((p.a + 8.5).abs() < 1e-12);
        let p = hyp_params(EnergyBranch::Printed.energy(4, 0.1), 2, 0.1).unwrap();
        assert_eq!(p.terminating(1e-9), Some((Root::B, 1)));
    }

    #[test]
    fn conjugate_energies_terminate_through_a() {
        for k in [-0.1, 0.1, 0.5] {
            for mu in 0..3 {
                for nr in 0..4 {
                    let e = EnergyBranch::ExponentConjugate.energy(2 * nr + mu, k);
                    let p = hyp_params_branch(e, mu, k, Exponent::Conjugate).unwrap();
                    assert_eq!(p.terminating(1e-9), Some((Root::A, nr)), "k {k}");
                }
            }
        }
    }

    #[test]
    fn bound_state_limit() {
        assert_eq!(max_bound_n(-0.1), Some(9));
        assert_eq!(max_bound_n(-0.5), Some(1));
        assert_eq!(max_bound_n(0.2), None);
    }
}
