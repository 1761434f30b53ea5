//! Shape diagnostics for sampled coordinates: a pure sinusoid A sin(ωt+φ) and
//! exponential (sinh-like) growth.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SinFit {
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
    pub rms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    /// Slope of log|x| against t.
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares sin/cos amplitudes for fixed ω; returns (a, b, rms) for
/// x ≈ a sin ωt + b cos ωt.
fn project(t: &[f64], x: &[f64], omega: f64) -> (f64, f64, f64) {
    let (mut ss, mut sc, mut cc, mut xs, mut xc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&ti, &xi) in t.iter().zip(x) {
        let (s, c) = (omega * ti).sin_cos();
        ss += s * s;
        sc += s * c;
        cc += c * c;
        xs += xi * s;
        xc += xi * c;
    }
    let det = ss * cc - sc * sc;
    if det.abs() < f64::MIN_POSITIVE {
        return (0.0, 0.0, f64::INFINITY);
    }
    let a = (xs * cc - xc * sc) / det;
    let b = (xc * ss - xs * sc) / det;
    let mut r2 = 0.0;
    for (&ti, &xi) in t.iter().zip(x) {
        let (s, c) = (omega * ti).sin_cos();
        let d = xi - a * s - b * c;
        r2 += d * d;
    }
    (a, b, (r2 / t.len() as f64).sqrt())
}

/// Frequency from interpolated zero crossings.
fn crossing_frequency(t: &[f64], x: &[f64]) -> Option<f64> {
    let mut crossings = Vec::new();
    for i in 1..x.len() {
        if x[i - 1] == 0.0 {
            crossings.push(t[i - 1]);
        } else if x[i - 1] * x[i] < 0.0 {
            let f = x[i - 1] / (x[i - 1] - x[i]);
            crossings.push(t[i - 1] + f * (t[i] - t[i - 1]));
        }
    }
    if crossings.len() < 3 {
        return None;
    }
    let n = crossings.len();
    Some(std::f64::consts::PI * (n - 1) as f64 / (crossings[n - 1] - crossings[0]))
}

/// Best A sin(ωt + φ) fit. `None` when the signal does not oscillate.
pub fn fit_sinusoid(t: &[f64], x: &[f64]) -> Option<SinFit> {
    let omega0 = crossing_frequency(t, x)?;
    let cost = |w: f64| project(t, x, w).2;
    // golden-section inside the main lobe, then refine to the float limit
    let (mut lo, mut hi) = (omega0 * 0.99, omega0 * 1.01);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (cost(c), cost(d));
    for _ in 0..200 {
        if (hi - lo) <= 1e-15 * omega0 {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = cost(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = cost(d);
        }
    }
    let omega = 0.5 * (lo + hi);
    let (a, b, rms) = project(t, x, omega);
    // a sin + b cos = A sin(ωt + φ)
    Some(SinFit {
        amplitude: a.hypot(b),
        omega,
        phase: b.atan2(a),
        rms,
    })
}

/// Linear regression of log|x| on t over samples with t ≥ `t_from`.
pub fn fit_log_growth(t: &[f64], x: &[f64], t_from: f64) -> Option<GrowthFit> {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(x)
        .filter(|(ti, xi)| **ti >= t_from && xi.abs() > 0.0)
        .map(|(ti, xi)| (*ti, xi.abs().ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for (ti, yi) in &pts {
        stt += (ti - mt) * (ti - mt);
        sty += (ti - mt) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let rate = sty / stt;
    let r_squared = if syy > 0.0 {
        sty * sty / (stt * syy)
    } else {
        0.0
    };
    Some(GrowthFit {
        rate,
        intercept: my - rate * mt,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_sinusoid() {
        let t: Vec<f64> = (0..4000).map(|i| i as f64 * 0.025).collect();
        let x: Vec<f64> = t.iter().map(|&ti| 0.8 * (1.3 * ti + 0.4).sin()).collect();
        let f = fit_sinusoid(&t, &x).unwrap();
        assert!((f.omega - 1.3).abs() < 1e-10, "{f:?}");
        assert!((f.amplitude - 0.8).abs() < 1e-10);
        assert!((f.phase - 0.4).abs() < 1e-9);
        assert!(f.rms < 1e-10);
    }

    #[test]
    fn rejects_monotone_signal() {
        let t: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let x: Vec<f64> = t.iter().map(|&ti| ti.exp()).collect();
        assert!(fit_sinusoid(&t, &x).is_none());
    }

    #[test]
    fn sinh_growth_is_log_linear() {
        let t: Vec<f64> = (0..400).map(|i| i as f64 * 0.05).collect();
        let x: Vec<f64> = t.iter().map(|&ti| 0.3 * (1.1 * ti + 0.2).sinh()).collect();
        let g = fit_log_growth(&t, &x, 5.0).unwrap();
        assert!((g.rate - 1.1).abs() < 1e-6);
        assert!(g.r_squared > 0.999999);
    }
}
