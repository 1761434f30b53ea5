//! Closed-form wavefunctions Ψ = C r^μ E(r) P(z) e^{±iμφ}.
//!
//! For κ ≠ 0, E = (1−κr²)^s and P is the terminating ₂F₁ in z = κr². At κ = 0
//! the prefactor is e^{∓r²/2} and P a terminating Kummer M in z = ±r².
//! Values are carried as (log-magnitude, sign) so that far tails on the
//! hyperbolic plane neither overflow nor underflow.

use num_complex::Complex64;
use serde::Serialize;

use super::quadrature::normalization_integral;
use super::series::{hyp2f1_coefficients, kummer_coefficients, Exponent};
use super::{hyp_sum_product, termination_energy, EnergyBranch, QuantumNumbers};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Prefactor {
    /// (1 − κr²)^s
    Power { s: f64 },
    /// e^{σ r²/2}
    Gauss { sigma: f64 },
}

/// R(r) = r^μ E(r) P(ζ r²).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialForm {
    pub mu: u32,
    pub kappa: f64,
    pub prefactor: Prefactor,
    pub zeta: f64,
    /// Coefficients of P in z, lowest first.
    pub poly: Vec<f64>,
}

/// P, dP/dz, d²P/dz² at z.
fn poly_eval(c: &[f64], z: f64) -> (f64, f64, f64) {
    let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
    for &ck in c.iter().rev() {
        ddp = ddp * z + 2.0 * dp;
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp, ddp)
}

/// (ln|P(z)|, sign), reversing the polynomial for |z| > 1.
fn poly_log(c: &[f64], z: f64) -> (f64, f64) {
    if z.abs() <= 1.0 {
        let p = poly_eval(c, z).0;
        return (p.abs().ln(), p.signum());
    }
    let deg = c.len() - 1;
    let u = 1.0 / z;
    let q = c.iter().fold(0.0, |acc, &ck| acc * u + ck);
    let sign = q.signum() * if deg % 2 == 1 { z.signum() } else { 1.0 };
    (q.abs().ln() + deg as f64 * z.abs().ln(), sign)
}

impl RadialForm {
    pub fn new(qn: QuantumNumbers, kappa: f64, x: Exponent) -> Self {
        let (nr, mu) = (qn.n_r, qn.mu);
        let c = mu as f64 + 1.0;
        if kappa == 0.0 {
            // conjugate: e^{−r²/2} M(−N_r, μ+1; r²)
            // printed:   e^{+r²/2} e^{−r²} M(N_r+μ+1, μ+1; r²) = e^{+r²/2} M(−N_r, μ+1; −r²)
            let (sigma, zeta) = match x {
                Exponent::Conjugate => (-1.0, 1.0),
                Exponent::Printed => (1.0, -1.0),
            };
            return RadialForm {
                mu,
                kappa,
                prefactor: Prefactor::Gauss { sigma },
                zeta,
                poly: kummer_coefficients(&-(nr as f64), &c, nr as usize),
            };
        }
        let e = termination_energy(nr, mu, kappa, x);
        let (sum, _) = hyp_sum_product(e, mu, kappa, x);
        let free = sum + nr as f64;
        RadialForm {
            mu,
            kappa,
            prefactor: Prefactor::Power { s: x.s(kappa) },
            zeta: kappa,
            poly: hyp2f1_coefficients(&-(nr as f64), &free, &c, nr as usize),
        }
    }

    pub fn check_domain(&self, r: f64) -> Result<()> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("radius {r}")));
        }
        let w = 1.0 - self.kappa * r * r;
        if w <= 0.0 {
            return Err(Error::Domain { margin: w });
        }
        Ok(())
    }

    /// ln|r^μ E(r)|.
    fn log_envelope(&self, r: f64) -> f64 {
        let lr = if self.mu == 0 {
            0.0
        } else {
            self.mu as f64 * r.ln()
        };
        lr + match self.prefactor {
            Prefactor::Power { s } => s * (-self.kappa * r * r).ln_1p(),
            Prefactor::Gauss { sigma } => 0.5 * sigma * r * r,
        }
    }

    /// (ln|R(r)|, sign R(r)); ln|R| = −∞ at nodes and at r = 0 for μ > 0.
    pub fn log_value(&self, r: f64) -> (f64, f64) {
        let (lp, sp) = poly_log(&self.poly, self.zeta * r * r);
        (self.log_envelope(r) + lp, sp)
    }

    pub fn value(&self, r: f64) -> f64 {
        let (l, s) = self.log_value(r);
        s * l.exp()
    }

    /// (ĤR − 𝓔R)/F and 𝓔R/F with F = r^μ E(r), plus ln F.
    fn reduced_residual(&self, r: f64, energy: f64) -> (f64, f64, f64) {
        let k = self.kappa;
        let w = 1.0 - k * r * r;
        let m = self.mu as f64;
        let (dl, ddl) = match self.prefactor {
            Prefactor::Power { s } => (
                -2.0 * k * s * r / w,
                -2.0 * k * s * (1.0 + k * r * r) / (w * w),
            ),
            Prefactor::Gauss { sigma } => (sigma * r, sigma),
        };
        let g1 = m / r + dl;
        let g2 = -m / (r * r) + ddl;
        let z = self.zeta * r * r;
        let (p, pz, pzz) = poly_eval(&self.poly, z);
        let pr = pz * 2.0 * self.zeta * r;
        let prr = pzz * 4.0 * self.zeta * self.zeta * r * r + pz * 2.0 * self.zeta;
        let r0 = p;
        let r1 = g1 * p + pr;
        let r2 = (g2 + g1 * g1) * p + 2.0 * g1 * pr + prr;
        let h = -0.5 * (w * r2 + (1.0 - 2.0 * k * r * r) / r * r1 - m * m / (r * r) * r0)
            + 0.5 * (1.0 - k) * r * r / w * r0;
        (h - energy * r0, energy * r0, self.log_envelope(r))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Wavefunction {
    pub qn: QuantumNumbers,
    pub kappa: f64,
    pub branch: EnergyBranch,
    pub energy: f64,
    pub radial: RadialForm,
    /// C_κ; 1 until [`Wavefunction::normalized`] is applied.
    pub norm: f64,
}

impl Wavefunction {
    /// Unnormalized closed form. The sign-mirror family has no wavefunction.
    pub fn new(qn: QuantumNumbers, kappa: f64, branch: EnergyBranch) -> Result<Self> {
        let x = branch.exponent().ok_or_else(|| {
            Error::InvalidParameter("the sign-mirror family has no closed-form wavefunction".into())
        })?;
        Ok(Wavefunction {
            qn,
            kappa,
            branch,
            energy: termination_energy(qn.n_r, qn.mu, kappa, x),
            radial: RadialForm::new(qn, kappa, x),
            norm: 1.0,
        })
    }

    /// Fixes C_κ so that ⟨Ψ,Ψ⟩ = 1 under dμ_κ.
    pub fn normalized(mut self) -> Result<Self> {
        let i = normalization_integral(&self.radial)?;
        self.norm = 1.0 / (2.0 * std::f64::consts::PI * i).sqrt();
        Ok(self)
    }

    pub fn radial_value(&self, r: f64) -> Result<f64> {
        self.radial.check_domain(r)?;
        Ok(self.norm * self.radial.value(r))
    }

    pub fn eval(&self, r: f64, phi: f64) -> Result<Complex64> {
        let rad = self.radial_value(r)?;
        let arg = self.qn.sign.factor() * self.qn.mu as f64 * phi;
        Ok(Complex64::from_polar(1.0, arg) * rad)
    }
}

/// Normalized Ψ_{N_r,μ}(r, φ). Fails for families without normalizable
/// closed forms.
pub fn eval_wavefunction(
    qn: QuantumNumbers,
    kappa: f64,
    r: f64,
    phi: f64,
    branch: EnergyBranch,
) -> Result<Complex64> {
    Wavefunction::new(qn, kappa, branch)?
        .normalized()?
        .eval(r, phi)
}

/// `count` radii evenly spaced in (0, 0.95/√κ] for κ > 0 and (0, 6] otherwise.
pub fn default_sample_radii(kappa: f64, count: usize) -> Vec<f64> {
    let top = if kappa > 0.0 {
        0.95 / kappa.sqrt()
    } else {
        6.0
    };
    (1..=count).map(|i| top * i as f64 / count as f64).collect()
}

/// max |ĤΨ − 𝓔Ψ| / max |𝓔Ψ| over the sample radii (φ-dependence is exact:
/// ∂²_φ e^{±iμφ} = −μ² e^{±iμφ}). Derivatives of the closed form are exact.
pub fn schrodinger_residual(
    qn: QuantumNumbers,
    kappa: f64,
    energy: f64,
    radii: &[f64],
    branch: EnergyBranch,
) -> Result<f64> {
    let wf = Wavefunction::new(qn, kappa, branch)?;
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        wf.radial.check_domain(r)?;
        if r <= 0.0 {
            return Err(Error::InvalidParameter("sample radius must be > 0".into()));
        }
        rows.push(wf.radial.reduced_residual(r, energy));
    }
    let lmax = rows
        .iter()
        .map(|row| row.2)
        .fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0f64, 0.0f64);
    let mut psi = 0.0f64;
    for (res, er, lf) in rows {
        let scale = (lf - lmax).exp();
        num = num.max((res * scale).abs());
        den = den.max((er * scale).abs());
        psi = psi.max((er / energy.abs().max(f64::MIN_POSITIVE) * scale).abs());
    }
    if energy == 0.0 {
        den = psi;
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::AngularSign;

    #[test]
    fn euclidean_ground_state_is_gaussian() {
        let f = RadialForm::new(QuantumNumbers::new(0, 0), 0.0, Exponent::Conjugate);
        for r in [0.0, 0.5, 2.0, 7.0] {
            assert!((f.value(r) - (-0.5 * r * r as f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn first_excited_polynomial() {
        // ₂F₁(−1, b; c; z) = 1 − (b/c) z
        let k = 0.1;
        let f = RadialForm::new(QuantumNumbers::new(1, 0), k, Exponent::Conjugate);
        let b = f.poly[1] * -1.0;
        assert_eq!(f.poly.len(), 2);
        let r: f64 = 1.3;
        let z = k * r * r;
        let expect = (1.0 - k * r * r).powf(0.5 / k) * (1.0 - b * z);
        assert!((f.value(r) - expect).abs() < 1e-14);
    }

    #[test]
    fn log_form_survives_far_tails() {
        let f = RadialForm::new(QuantumNumbers::new(3, 2), -0.1, Exponent::Conjugate);
        let (l, _) = f.log_value(1e40);
        assert!(l.is_finite() && l < 0.0);
    }

    #[test]
    fn single_valued_in_phi() {
        let wf = Wavefunction::new(
            QuantumNumbers::new(1, 2).with_sign(AngularSign::Minus),
            0.1,
            EnergyBranch::ExponentConjugate,
        )
        .unwrap();
        let a = wf.eval(1.1, 0.4).unwrap();
        let b = wf.eval(1.1, 0.4 + 2.0 * std::f64::consts::PI).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn outside_sphere_chart_is_rejected() {
        let wf = Wavefunction::new(
            QuantumNumbers::new(0, 0),
            0.25,
            EnergyBranch::ExponentConjugate,
        )
        .unwrap();
        assert!(matches!(wf.eval(2.0, 0.0), Err(Error::Domain { .. })));
        assert!(wf.eval(1.99, 0.0).is_ok());
    }

    #[test]
    fn euclidean_ground_state_residual() {
        let r = default_sample_radii(0.0, 100);
        let res = schrodinger_residual(
            QuantumNumbers::new(0, 0),
            0.0,
            1.0,
            &r,
            EnergyBranch::ExponentConjugate,
        )
        .unwrap();
        assert!(res < 1e-10, "{res:e}");
    }

    #[test]
    fn printed_family_is_a_formal_solution() {
        // the printed exponent solves the ODE at its own energies
        let r = default_sample_radii(0.2, 50);
        for (nr, mu) in [(0, 0), (1, 1), (2, 0)] {
            let qn = QuantumNumbers::new(nr, mu);
            let e = EnergyBranch::Printed.energy(qn.n(), 0.2);
            let res = schrodinger_residual(qn, 0.2, e, &r, EnergyBranch::Printed).unwrap();
            assert!(res < 1e-10, "{res:e}");
        }
    }

    #[test]
    fn sign_mirror_has_no_wavefunction() {
        assert!(
            Wavefunction::new(QuantumNumbers::new(0, 0), 0.1, EnergyBranch::SignMirror).is_err()
        );
    }
}
