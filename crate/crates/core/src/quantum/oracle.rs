//! Independent numerical spectrum of the radial problem.
//!
//! The unknown is g with R = r^μ g, posed in the geodesic distance θ
//! (r = sin(aθ)/a, θ, sinh(aθ)/a for κ > 0, = 0, < 0; a = √|κ|):
//!
//! ```text
//! −½ (ρ g')'/ρ + U g = 𝓔 g,   ρ = r^{2μ+1},
//! U = ½κμ(μ+1) + ½(1−κ) r²/(1−κr²).
//! ```
//!
//! The weight ρ dθ is the measure dμ_κ times r^{2μ}, so regularity R ~ r^μ at
//! the origin is built in (ρ vanishes at θ = 0). Cell-centred finite volumes
//! give a symmetric tridiagonal pencil; a Dirichlet node closes the far end.
//! Eigenvalues come from Sturm-sequence bisection, then Richardson over
//! M and 2M cells.

use serde::Serialize;

use super::{EnergyBranch, ALL_BRANCHES};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleOptions {
    /// Cells of the coarse grid at the initial truncation.
    pub cells: usize,
    /// Sphere truncation r_max = (1−δ)/√κ.
    pub delta: f64,
    /// Initial truncation in θ for κ ≤ 0.
    pub theta0: f64,
    /// Truncation is doubled until the levels move by less than this.
    pub truncation_tol: f64,
    /// A Richardson correction or truncation shift above this flags the result.
    pub convergence_tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            cells: 4000,
            delta: 1e-6,
            theta0: 8.0,
            truncation_tol: 1e-9,
            convergence_tol: 1e-4,
        }
    }
}

/// Cell-centred grid θ_i = (i−½)h, i = 1..M, with the Dirichlet node at
/// (M+½)h = θ_max.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialGrid {
    pub kappa: f64,
    pub theta_max: f64,
    pub h: f64,
    pub theta: Vec<f64>,
    pub r: Vec<f64>,
    /// dμ_κ radial weights r_i h (the φ factor 2π excluded).
    pub weights: Vec<f64>,
}

fn radius(kappa: f64, theta: f64) -> f64 {
    if kappa > 0.0 {
        let a = kappa.sqrt();
        (a * theta).sin() / a
    } else if kappa < 0.0 {
        let a = (-kappa).sqrt();
        (a * theta).sinh() / a
    } else {
        theta
    }
}

impl RadialGrid {
    pub fn new(kappa: f64, theta_max: f64, cells: usize) -> Result<Self> {
        if cells < 2 || !(theta_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid needs cells >= 2 and theta_max > 0 (got {cells}, {theta_max})"
            )));
        }
        let h = theta_max / (cells as f64 + 0.5);
        let theta: Vec<f64> = (1..=cells).map(|i| (i as f64 - 0.5) * h).collect();
        let r: Vec<f64> = theta.iter().map(|&t| radius(kappa, t)).collect();
        let weights = r.iter().map(|ri| ri * h).collect();
        Ok(RadialGrid {
            kappa,
            theta_max,
            h,
            theta,
            r,
            weights,
        })
    }

    /// θ_max for r_max = (1−δ)/√κ.
    pub fn sphere_theta_max(kappa: f64, delta: f64) -> f64 {
        (1.0 - delta).asin() / kappa.sqrt()
    }

    pub fn r_max(&self) -> f64 {
        radius(self.kappa, self.theta_max)
    }
}

/// Symmetrized tridiagonal (diagonal, off-diagonal) plus the raw pencil
/// (A, B) for the symmetry diagnostic.
struct Pencil {
    d: Vec<f64>,
    e: Vec<f64>,
    a_diag: Vec<f64>,
    a_off: Vec<f64>,
    b: Vec<f64>,
}

fn assemble(grid: &RadialGrid, mu: u32) -> Pencil {
    let (k, h, m) = (grid.kappa, grid.h, grid.theta.len());
    let p = 2 * mu as i32 + 1;
    // faces 0..=M; P(0) = 0
    let face: Vec<f64> = (0..=m).map(|i| radius(k, i as f64 * h).powi(p)).collect();
    let mut a_diag = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for i in 0..m {
        let r = grid.r[i];
        let w = 1.0 - k * r * r;
        let u = 0.5 * k * (mu * (mu + 1)) as f64 + 0.5 * (1.0 - k) * r * r / w;
        let bi = r.powi(p) * h;
        a_diag.push(0.5 * (face[i] + face[i + 1]) / h + u * bi);
        b.push(bi);
    }
    let a_off: Vec<f64> = (1..m).map(|i| -0.5 * face[i] / h).collect();
    let s: Vec<f64> = b.iter().map(|x| 1.0 / x.sqrt()).collect();
    let d = (0..m).map(|i| a_diag[i] * s[i] * s[i]).collect();
    let e = (0..m - 1).map(|i| a_off[i] * s[i] * s[i + 1]).collect();
    Pencil {
        d,
        e,
        a_diag,
        a_off,
        b,
    }
}

/// Number of eigenvalues below x (Sturm sequence via LDLᵀ pivots).
fn count_below(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let prev = if q == 0.0 {
            f64::EPSILON * (e[i - 1].abs() + 1.0)
        } else {
            q
        };
        q = d[i] - x - e[i - 1] * e[i - 1] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues of a symmetric tridiagonal matrix, ascending.
pub fn tridiagonal_lowest(d: &[f64], e: &[f64], k: usize) -> Vec<f64> {
    let mut lo0 = f64::INFINITY;
    for i in 0..d.len() {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < d.len() { e[i].abs() } else { 0.0 };
        lo0 = lo0.min(d[i] - left - right);
    }
    (0..k.min(d.len()))
        .map(|j| {
            let mut lo = lo0;
            let mut step = 1.0f64;
            let mut hi = lo + step;
            while count_below(d, e, hi) <= j {
                lo = hi;
                step *= 2.0;
                hi = lo + step;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
                    break;
                }
                if count_below(d, e, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// max |(B·B⁻¹A)_{i,i+1} − (B·B⁻¹A)_{i+1,i}| / max |A|: symmetry of the
/// discrete operator B⁻¹A in the weighted inner product.
fn symmetry_defect(p: &Pencil) -> f64 {
    let scale = p
        .a_diag
        .iter()
        .chain(&p.a_off)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for i in 0..p.a_off.len() {
        let upper = p.b[i] * (p.a_off[i] / p.b[i]);
        let lower = p.b[i + 1] * (p.a_off[i] / p.b[i + 1]);
        worst = worst.max((upper - lower).abs());
    }
    worst / scale
}

fn solve_on(grid: &RadialGrid, mu: u32, k: usize) -> (Vec<f64>, f64) {
    let p = assemble(grid, mu);
    (tridiagonal_lowest(&p.d, &p.e, k), symmetry_defect(&p))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub mu: u32,
    pub kappa: f64,
    /// Richardson-extrapolated eigenvalues, ascending.
    pub levels: Vec<f64>,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub cells: usize,
    pub theta_max: f64,
    pub r_max: f64,
    /// max |Richardson − fine|.
    pub richardson_correction: f64,
    /// Level shift under δ → δ/10 (κ > 0) or the last truncation doubling.
    pub truncation_shift: f64,
    pub symmetry_defect: f64,
    pub converged: bool,
}

fn richardson(
    mu: u32,
    kappa: f64,
    theta_max: f64,
    cells: usize,
    k: usize,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>, f64)> {
    let g1 = RadialGrid::new(kappa, theta_max, cells)?;
    let g2 = RadialGrid::new(kappa, theta_max, 2 * cells)?;
    let (c, s1) = solve_on(&g1, mu, k);
    let (f, s2) = solve_on(&g2, mu, k);
    let r = c
        .iter()
        .zip(&f)
        .map(|(ec, ef)| (4.0 * ef - ec) / 3.0)
        .collect();
    Ok((r, c, f, s1.max(s2)))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Lowest `k_levels` scaled eigenvalues for angular number μ.
pub fn sl_eigensolve(
    mu: u32,
    kappa: f64,
    k_levels: usize,
    opts: &OracleOptions,
) -> Result<OracleResult> {
    if k_levels == 0 {
        return Err(Error::InvalidParameter("k_levels must be > 0".into()));
    }
    if opts.cells < 50 * k_levels {
        return Err(Error::InvalidParameter(format!(
            "{} cells cannot resolve {k_levels} levels (need >= {})",
            opts.cells,
            50 * k_levels
        )));
    }
    if !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!("kappa = {kappa}")));
    }

    let (theta_max, cells, levels, coarse, fine, sym, shift) = if kappa > 0.0 {
        let tm = RadialGrid::sphere_theta_max(kappa, opts.delta);
        let (r, c, f, s) = richardson(mu, kappa, tm, opts.cells, k_levels)?;
        let tm2 = RadialGrid::sphere_theta_max(kappa, opts.delta / 10.0);
        let (r2, ..) = richardson(mu, kappa, tm2, opts.cells, k_levels)?;
        (tm, opts.cells, r.clone(), c, f, s, max_diff(&r, &r2))
    } else {
        let cap = if kappa < 0.0 {
            100.0 / (-kappa).sqrt()
        } else {
            64.0
        };
        let mut tm = opts.theta0;
        let mut cells = opts.cells;
        let mut cur = richardson(mu, kappa, tm, cells, k_levels)?;
        loop {
            let next = richardson(mu, kappa, 2.0 * tm, 2 * cells, k_levels)?;
            let shift = max_diff(&cur.0, &next.0);
            tm *= 2.0;
            cells *= 2;
            cur = next;
            if shift < opts.truncation_tol || tm >= cap {
                break (tm, cells, cur.0.clone(), cur.1, cur.2, cur.3, shift);
            }
        }
    };

    let richardson_correction = max_diff(&levels, &fine);
    let increasing = levels.windows(2).all(|w| w[0] < w[1]);
    Ok(OracleResult {
        mu,
        kappa,
        coarse,
        fine,
        cells,
        theta_max,
        r_max: radius(kappa, theta_max),
        richardson_correction,
        truncation_shift: shift,
        symmetry_defect: sym,
        converged: increasing
            && richardson_correction <= opts.convergence_tol
            && shift <= opts.convergence_tol,
        levels,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchDeviation {
    pub branch: EnergyBranch,
    /// max over levels of |oracle − closed form|.
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdjudicationCase {
    pub kappa: f64,
    pub mu: u32,
    pub oracle: OracleResult,
    pub deviations: Vec<BranchDeviation>,
    /// Branches within tolerance (two coincide at κ = 0).
    pub matched: Vec<EnergyBranch>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Adjudication {
    pub tolerance: f64,
    pub cases: Vec<AdjudicationCase>,
    /// The single branch matched in every case, if there is one.
    pub resolved: Option<EnergyBranch>,
}

/// Compares the oracle levels N_r = 0..k with every closed-form family.
pub fn adjudicate(
    kappas: &[f64],
    mus: &[u32],
    k_levels: usize,
    tolerance: f64,
    opts: &OracleOptions,
) -> Result<Adjudication> {
    let mut cases = Vec::new();
    for &kappa in kappas {
        for &mu in mus {
            let oracle = sl_eigensolve(mu, kappa, k_levels, opts)?;
            let deviations: Vec<BranchDeviation> = ALL_BRANCHES
                .iter()
                .map(|&branch| {
                    let max_deviation = oracle
                        .levels
                        .iter()
                        .enumerate()
                        .map(|(nr, ev)| (ev - branch.energy(2 * nr as u32 + mu, kappa)).abs())
                        .fold(0.0f64, f64::max);
                    BranchDeviation {
                        branch,
                        max_deviation,
                    }
                })
                .collect();
            let matched = deviations
                .iter()
                .filter(|d| d.max_deviation <= tolerance)
                .map(|d| d.branch)
                .collect();
            cases.push(AdjudicationCase {
                kappa,
                mu,
                oracle,
                deviations,
                matched,
            });
        }
    }
    let common: Vec<EnergyBranch> = ALL_BRANCHES
        .iter()
        .copied()
        .filter(|b| !cases.is_empty() && cases.iter().all(|c| c.matched.contains(b)))
        .collect();
    let resolved = (common.len() == 1).then(|| common[0]);
    Ok(Adjudication {
        tolerance,
        cases,
        resolved,
    })
}
