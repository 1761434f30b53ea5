//! Inner products under dμ_κ = r/√(1−κr²) dr dφ.
//!
//! Radial integrals are taken in the geodesic distance θ (dr/√(1−κr²) = dθ),
//! where dμ_κ = r dθ dφ and the sphere's chart boundary sits at θ = π/(2√κ).

use super::wavefunction::{RadialForm, Wavefunction};
use super::{EnergyBranch, QuantumNumbers, RESOLVED_BRANCH};
use crate::error::{Error, Result};

const NODES: usize = 20;
/// Panel width in θ for the plane and the hyperbolic plane.
const PANEL: f64 = 0.25;

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n and P_n' by the three-term recurrence
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// r(θ) and ln r(θ) for the three geometries.
fn radius(kappa: f64, theta: f64) -> (f64, f64) {
    if kappa > 0.0 {
        let a = kappa.sqrt();
        let r = (a * theta).sin() / a;
        (r, r.ln())
    } else if kappa < 0.0 {
        let a = (-kappa).sqrt();
        let r = (a * theta).sinh() / a;
        // ln sinh(x) = x + ln(1 − e^{−2x}) − ln 2, stable for large x
        let x = a * theta;
        (
            r,
            x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2 - a.ln(),
        )
    } else {
        (theta, theta.ln())
    }
}

struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    fn new() -> Self {
        let (x, w) = gauss_legendre(NODES);
        Rule { x, w }
    }

    /// ∫_lo^hi of exp(log f) · sign over `panels` equal panels.
    fn integrate<F: Fn(f64) -> (f64, f64)>(&self, f: &F, lo: f64, hi: f64, panels: usize) -> f64 {
        let h = (hi - lo) / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let (a, b) = (lo + p as f64 * h, lo + (p + 1) as f64 * h);
            let (c, d) = (0.5 * (a + b), 0.5 * (b - a));
            for (xi, wi) in self.x.iter().zip(&self.w) {
                let (l, s) = f(c + d * xi);
                if l > f64::NEG_INFINITY {
                    sum += wi * d * s * l.exp();
                }
            }
        }
        sum
    }
}

/// ∫ f r dθ over the whole chart, f given as θ ↦ (ln|f|, sign) in terms of
/// (r, ln r). Fails with `NonNormalizable` when the integral does not settle.
fn chart_integral<F: Fn(f64, f64) -> (f64, f64)>(kappa: f64, f: F) -> Result<f64> {
    let rule = Rule::new();
    let g = |theta: f64| {
        let (r, lr) = radius(kappa, theta);
        let (l, s) = f(r, lr);
        (l + lr, s)
    };
    let bad = |v: f64| !v.is_finite();

    if kappa > 0.0 {
        let tb = std::f64::consts::FRAC_PI_2 / kappa.sqrt();
        let mut total = rule.integrate(&g, 0.0, tb * (1.0 - 1e-3), 64);
        let mut last = 0.0;
        // geometric grading toward the chart boundary
        for j in 3..14 {
            let lo = tb * (1.0 - 10f64.powi(-j));
            let hi = tb * (1.0 - 10f64.powi(-j - 1));
            last = rule.integrate(&g, lo, hi, 4);
            total += last;
        }
        if bad(total) || last.abs() > 1e-8 * total.abs() {
            return Err(Error::NonNormalizable(format!(
                "integral does not settle at the chart boundary (kappa = {kappa})"
            )));
        }
        return Ok(total);
    }

    let cap = if kappa < 0.0 {
        200.0 / (-kappa).sqrt()
    } else {
        64.0
    };
    let mut hi = 8.0;
    let mut total = rule.integrate(&g, 0.0, hi, (hi / PANEL) as usize);
    while hi < cap {
        let piece = rule.integrate(&g, hi, 2.0 * hi, (hi / PANEL) as usize);
        total += piece;
        hi *= 2.0;
        if bad(total) {
            break;
        }
        if piece.abs() <= 1e-15 * total.abs() {
            return Ok(total);
        }
    }
    Err(Error::NonNormalizable(format!(
        "radial integral still growing at theta = {hi} (kappa = {kappa})"
    )))
}

/// ∫ R² r/√(1−κr²) dr.
pub fn normalization_integral(f: &RadialForm) -> Result<f64> {
    chart_integral(f.kappa, |r, _| {
        let (l, _) = f.log_value(r);
        (2.0 * l, 1.0)
    })
}

/// ⟨Ψ_a, Ψ_b⟩ = ∫ Ψ̄_a Ψ_b dμ_κ. The φ integral is done exactly.
pub fn inner_product(a: &Wavefunction, b: &Wavefunction) -> Result<f64> {
    if a.kappa != b.kappa {
        return Err(Error::InvalidParameter("curvatures differ".into()));
    }
    let ma = a.qn.sign.factor() * a.qn.mu as f64;
    let mb = b.qn.sign.factor() * b.qn.mu as f64;
    if ma != mb {
        return Ok(0.0);
    }
    let radial = chart_integral(a.kappa, |r, _| {
        let (la, sa) = a.radial.log_value(r);
        let (lb, sb) = b.radial.log_value(r);
        (la + lb, sa * sb)
    })?;
    Ok(2.0 * std::f64::consts::PI * a.norm * b.norm * radial)
}

/// Inner product of two normalized wavefunctions of the resolved family.
pub fn quadrature_norm(a: QuantumNumbers, b: QuantumNumbers, kappa: f64) -> Result<f64> {
    let wa = Wavefunction::new(a, kappa, RESOLVED_BRANCH)?.normalized()?;
    let wb = Wavefunction::new(b, kappa, RESOLVED_BRANCH)?.normalized()?;
    inner_product(&wa, &wb)
}

/// Gram matrix of the first `count` normalized radial states at fixed μ.
pub fn gram_matrix(mu: u32, kappa: f64, count: u32, branch: EnergyBranch) -> Result<Vec<Vec<f64>>> {
    let wfs = (0..count)
        .map(|nr| Wavefunction::new(QuantumNumbers::new(nr, mu), kappa, branch)?.normalized())
        .collect::<Result<Vec<_>>>()?;
    let mut g = vec![vec![0.0; wfs.len()]; wfs.len()];
    for i in 0..wfs.len() {
        for j in i..wfs.len() {
            let v = inner_product(&wfs[i], &wfs[j])?;
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    Ok(g)
}

/// Largest n = 2N_r + μ (scanning n ≤ n_max) whose resolved-family state
/// normalizes, found by quadrature alone.
pub fn empirical_bound_n(kappa: f64, n_max: u32) -> Option<u32> {
    let mut best = None;
    for n in 0..=n_max {
        let qn = QuantumNumbers::new(n / 2, n % 2);
        match Wavefunction::new(qn, kappa, RESOLVED_BRANCH).and_then(Wavefunction::normalized) {
            Ok(_) => best = Some(n),
            Err(_) => break,
        }
    }
    best
}
