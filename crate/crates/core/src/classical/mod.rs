//! Classical motion in the Cartesian chart, unit mass.
//!
//! Euler–Lagrange equations of `L = T + V`:
//!
//! ```text
//! ẍ = −(κK + α²) x / (1−κr²),   ÿ = −(κK + α²) y / (1−κr²),
//! K = |v|² − κ (x v_y − y v_x)²
//! ```

pub mod fit;
pub mod rk;

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    cart_momenta, hamiltonian_cart, noether_momenta_cart, CartState, Curvature, NoetherMomenta,
    PhysConstants,
};
use crate::report::fmt17;
pub use fit::{fit_log_growth, fit_sinusoid, GrowthFit, SinFit};
use rk::{dopri_step, rk4_step, PiController, State};

/// Smallest admissible 1 − κr² during integration.
pub const DOMAIN_MARGIN: f64 = 1e-10;
/// Step collapse below this floor with 1 − κr² < [`BOUNDARY_MARGIN`] is
/// reported as leaving the chart.
pub const BOUNDARY_STEP_FLOOR: f64 = 1e-9;
pub const BOUNDARY_MARGIN: f64 = 1e-3;
pub const TOL_MIN: f64 = 1e-13;
pub const TOL_MAX: f64 = 1e-6;

fn to_state(s: &CartState) -> State {
    [s.x, s.y, s.vx, s.vy]
}

fn from_state(y: &State) -> CartState {
    CartState {
        x: y[0],
        y: y[1],
        vx: y[2],
        vy: y[3],
    }
}

/// Accelerations (ẍ, ÿ). Fails once 1 − κr² drops below [`DOMAIN_MARGIN`].
pub fn eom_rhs(s: &CartState, kappa: f64, alpha: f64) -> Result<(f64, f64)> {
    let w = 1.0 - kappa * (s.x * s.x + s.y * s.y);
    if !(w > DOMAIN_MARGIN) || !w.is_finite() {
        return Err(Error::Domain { margin: w });
    }
    let l = s.x * s.vy - s.y * s.vx;
    let k = s.vx * s.vx + s.vy * s.vy - kappa * l * l;
    let f = -(kappa * k + alpha * alpha) / w;
    Ok((f * s.x, f * s.y))
}

fn field(kappa: f64, alpha: f64) -> impl Fn(f64, &State) -> Result<State> {
    move |_t, y| {
        let (ax, ay) = eom_rhs(&from_state(y), kappa, alpha)?;
        Ok([y[2], y[3], ax, ay])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegrateOptions {
    pub sample_dt: f64,
    pub max_steps: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            sample_dt: 0.05,
            max_steps: 20_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegratorMeta {
    pub method: String,
    pub tol: f64,
    pub sample_dt: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub kappa: f64,
    pub alpha: f64,
    pub times: Vec<f64>,
    pub states: Vec<CartState>,
    pub meta: IntegratorMeta,
}

fn validate(kappa: f64, alpha: f64, t_end: f64, s: &CartState) -> Result<()> {
    if !kappa.is_finite() || !alpha.is_finite() {
        return Err(Error::InvalidParameter(
            "kappa and alpha must be finite".into(),
        ));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!("t_end = {t_end}")));
    }
    if ![s.x, s.y, s.vx, s.vy].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite initial state".into()));
    }
    let w = 1.0 - kappa * (s.x * s.x + s.y * s.y);
    if !(w > DOMAIN_MARGIN) {
        return Err(Error::Domain { margin: w });
    }
    Ok(())
}

/// Adaptive Dormand–Prince 5(4) with the default options.
pub fn integrate(
    initial: &CartState,
    kappa: f64,
    alpha: f64,
    t_end: f64,
    tol: f64,
) -> Result<Trajectory> {
    integrate_with(
        initial,
        kappa,
        alpha,
        t_end,
        tol,
        &IntegrateOptions::default(),
    )
}

/// Samples are taken every `sample_dt` by landing steps exactly on the sample
/// times, so no interpolation error enters the output.
pub fn integrate_with(
    initial: &CartState,
    kappa: f64,
    alpha: f64,
    t_end: f64,
    tol: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    if !(TOL_MIN..=TOL_MAX).contains(&tol) {
        return Err(Error::InvalidParameter(format!(
            "tol = {tol:e} outside [{TOL_MIN:e}, {TOL_MAX:e}]"
        )));
    }
    if !(opts.sample_dt > 0.0) || !opts.sample_dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sample_dt = {}",
            opts.sample_dt
        )));
    }
    validate(kappa, alpha, t_end, initial)?;

    let f = field(kappa, alpha);
    let mut y = to_state(initial);
    let mut t = 0.0;
    let mut times = vec![0.0];
    let mut states = vec![*initial];
    let mut ctrl = PiController::default();
    let mut h = (opts.sample_dt * 0.1).min(tol.powf(0.2));
    let (mut accepted, mut rejected) = (0usize, 0usize);
    let mut k = 1usize;

    while t < t_end {
        let target = (k as f64 * opts.sample_dt).min(t_end);
        let h_try = h.min(target - t);
        let lands = h_try >= target - t;
        match dopri_step(&f, t, &y, h_try, tol) {
            Ok((y_new, err)) if err <= 1.0 => {
                accepted += 1;
                let fac = ctrl.accept(err);
                // a step shortened to land on a sample must not shrink h
                if !lands || h_try * fac > h {
                    h = h_try * fac;
                }
                y = y_new;
                t = if lands { target } else { t + h_try };
                if lands {
                    times.push(t);
                    states.push(from_state(&y));
                    k += 1;
                }
            }
            Ok((_, err)) => {
                rejected += 1;
                h = h_try * ctrl.reject(err);
            }
            Err(Error::Domain { .. }) => {
                rejected += 1;
                h = h_try * 0.25;
            }
            Err(e) => return Err(e),
        }
        let scale = t.abs().max(1.0);
        let margin = 1.0 - kappa * (y[0] * y[0] + y[1] * y[1]);
        // the field is 0/0 on the boundary: steps collapse before the margin hits zero
        if h < BOUNDARY_STEP_FLOOR * scale && margin < BOUNDARY_MARGIN {
            return Err(Error::DomainExit {
                last_time: t,
                margin,
            });
        }
        if h < 1e-14 * scale {
            return Err(Error::StepUnderflow(t));
        }
        if accepted + rejected > opts.max_steps {
            return Err(Error::NonConvergence(format!(
                "step budget {} exhausted at t = {t}",
                opts.max_steps
            )));
        }
    }

    Ok(Trajectory {
        kappa,
        alpha,
        times,
        states,
        meta: IntegratorMeta {
            method: "dormand-prince-5(4)".into(),
            tol,
            sample_dt: opts.sample_dt,
            accepted_steps: accepted,
            rejected_steps: rejected,
        },
    })
}

/// Fixed-step classic RK4; returns the final state. Cross-check only.
pub fn integrate_rk4(
    initial: &CartState,
    kappa: f64,
    alpha: f64,
    t_end: f64,
    steps: usize,
) -> Result<CartState> {
    validate(kappa, alpha, t_end, initial)?;
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be > 0".into()));
    }
    let f = field(kappa, alpha);
    let h = t_end / steps as f64;
    let mut y = to_state(initial);
    for i in 0..steps {
        let t = i as f64 * h;
        y = rk4_step(&f, t, &y, h).map_err(|e| match e {
            Error::Domain { margin } => Error::DomainExit {
                last_time: t,
                margin,
            },
            other => other,
        })?;
    }
    Ok(from_state(&y))
}

/// H and the Noether momenta (P₁, P₂, J) of a unit-mass state.
pub fn invariants(s: &CartState, kappa: f64, alpha: f64) -> Result<(f64, NoetherMomenta)> {
    let k = Curvature::new(kappa)?;
    let c = PhysConstants {
        m: 1.0,
        alpha,
        hbar: 1.0,
    };
    let p = cart_momenta(s, k, 1.0)?;
    Ok((hamiltonian_cart(&p, k, &c)?, noether_momenta_cart(&p, k)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Drift {
    pub initial: f64,
    pub max_abs_drift: f64,
    /// Absolute drift over |initial|; equals the absolute drift when the
    /// initial value is zero.
    pub max_rel_drift: f64,
}

impl Drift {
    fn from_series(v: &[f64]) -> Self {
        let initial = v[0];
        let max_abs_drift = v.iter().map(|x| (x - initial).abs()).fold(0.0, f64::max);
        let max_rel_drift = if initial != 0.0 {
            max_abs_drift / initial.abs()
        } else {
            max_abs_drift
        };
        Drift {
            initial,
            max_abs_drift,
            max_rel_drift,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConservationReport {
    pub h: Drift,
    pub p1: Drift,
    pub p2: Drift,
    pub j: Drift,
}

impl Trajectory {
    /// Rows of (t, x, y, vx, vy, H, P1, P2, J).
    pub fn rows(&self) -> Result<Vec<[f64; 9]>> {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, s)| {
                let (h, n) = invariants(s, self.kappa, self.alpha)?;
                Ok([t, s.x, s.y, s.vx, s.vy, h, n.p1, n.p2, n.j])
            })
            .collect()
    }

    pub fn conservation_report(&self) -> Result<ConservationReport> {
        let rows = self.rows()?;
        let col = |i: usize| rows.iter().map(|r| r[i]).collect::<Vec<_>>();
        Ok(ConservationReport {
            h: Drift::from_series(&col(5)),
            p1: Drift::from_series(&col(6)),
            p2: Drift::from_series(&col(7)),
            j: Drift::from_series(&col(8)),
        })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,x,y,vx,vy,H,P1,P2,J")?;
        for row in self.rows()? {
            let line: Vec<String> = row.iter().map(|v| fmt17(*v)).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.x).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.y).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.x.hypot(s.y)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MotionKind {
    Oscillatory,
    Unbounded,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MotionReport {
    pub kind: MotionKind,
    pub energy: f64,
    /// α²/(2|κ|) for κ < 0: energies above it escape to infinity.
    pub escape_energy: Option<f64>,
    pub sin_fit_x: Option<SinFit>,
    pub sin_fit_y: Option<SinFit>,
    /// √|α² + 2κH|: the angular frequency of the sinusoid when α² + 2κH > 0,
    /// otherwise the sinh growth rate.
    pub predicted_rate: f64,
    /// log r(t) regression over the second half of the run.
    pub growth: Option<GrowthFit>,
}

/// Each Cartesian coordinate obeys q̈ = −(α² + 2κH) q along a trajectory of
/// energy H, since κK + α² = (α² + 2κH)(1 − κr²).
pub fn predicted_rate(kappa: f64, alpha: f64, energy: f64) -> f64 {
    (alpha * alpha + 2.0 * kappa * energy).abs().sqrt()
}

pub const SIN_RMS_THRESHOLD: f64 = 1e-6;
pub const GROWTH_R2_THRESHOLD: f64 = 0.999;

/// Checks the trajectory against the two closed-form shapes: a pure sinusoid
/// per coordinate, or sinh-type growth of the radius.
pub fn classify_motion(traj: &Trajectory) -> Result<MotionReport> {
    let (energy, _) = invariants(&traj.states[0], traj.kappa, traj.alpha)?;
    let escape_energy = (traj.kappa < 0.0).then(|| traj.alpha * traj.alpha / (2.0 * -traj.kappa));
    let sin_fit_x = fit_sinusoid(&traj.times, &traj.xs());
    let sin_fit_y = fit_sinusoid(&traj.times, &traj.ys());
    let t_half = traj.times.last().copied().unwrap_or(0.0) * 0.5;
    let growth = fit_log_growth(&traj.times, &traj.radii(), t_half);

    let good_sin = |f: &Option<SinFit>, v: &[f64]| {
        let flat = v.iter().all(|x| x.abs() < 1e-12);
        flat || f.is_some_and(|f| f.rms < SIN_RMS_THRESHOLD)
    };
    let kind = if good_sin(&sin_fit_x, &traj.xs()) && good_sin(&sin_fit_y, &traj.ys()) {
        MotionKind::Oscillatory
    } else if growth.is_some_and(|g| g.rate > 0.0 && g.r_squared > GROWTH_R2_THRESHOLD) {
        MotionKind::Unbounded
    } else {
        MotionKind::Undetermined
    };
    Ok(MotionReport {
        kind,
        energy,
        escape_energy,
        sin_fit_x,
        sin_fit_y,
        predicted_rate: predicted_rate(traj.kappa, traj.alpha, energy),
        growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probe() -> CartState {
        CartState {
            x: 0.5,
            y: 0.1,
            vx: 0.2,
            vy: 0.7,
        }
    }

    #[test]
    fn flat_case_is_the_isotropic_oscillator() {
        let tr = integrate(&probe(), 0.0, 1.3, 10.0, 1e-12).unwrap();
        let (t, s) = (tr.times.last().unwrap(), tr.states.last().unwrap());
        let w = 1.3;
        let x = 0.5 * (w * t).cos() + 0.2 / w * (w * t).sin();
        assert!((s.x - x).abs() < 1e-9, "{} vs {x}", s.x);
    }

    #[test]
    fn samples_land_on_grid() {
        let tr = integrate(&probe(), 0.3, 1.0, 1.0, 1e-10).unwrap();
        assert_eq!(tr.times.len(), 21);
        for (i, t) in tr.times.iter().enumerate() {
            assert!((t - i as f64 * 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn tolerance_outside_range_is_rejected() {
        assert!(matches!(
            integrate(&probe(), 0.1, 1.0, 1.0, 1e-5),
            Err(Error::InvalidParameter(_))
        ));
        assert!(integrate(&probe(), 0.1, 1.0, 1.0, 1e-14).is_err());
    }

    #[test]
    fn geodesic_on_sphere_exits_chart() {
        // without the potential a geodesic reaches the equator r = 1/√κ
        let s = CartState {
            x: 0.0,
            y: 0.0,
            vx: 1.0,
            vy: 0.0,
        };
        match integrate(&s, 1.0, 0.0, 5.0, 1e-10) {
            Err(Error::DomainExit { last_time, margin }) => {
                assert!(
                    (last_time - std::f64::consts::FRAC_PI_2).abs() < 1e-3,
                    "{last_time}"
                );
                assert!(margin < 1e-3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rk4_agrees_with_dopri() {
        let a = integrate(&probe(), -0.2, 1.0, 3.0, 1e-12).unwrap();
        let b = integrate_rk4(&probe(), -0.2, 1.0, 3.0, 4000).unwrap();
        let e = a.states.last().unwrap();
        assert!((e.x - b.x).abs() < 1e-10 && (e.vy - b.vy).abs() < 1e-10);
    }

    #[test]
    fn csv_header_and_width() {
        let tr = integrate(&probe(), 0.2, 1.0, 0.1, 1e-10).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,x,y,vx,vy,H,P1,P2,J");
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 9);
        assert!(first.starts_with("0.0000000000000000e0,"));
    }
}
