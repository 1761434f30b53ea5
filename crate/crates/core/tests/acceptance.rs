//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p kappa-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kappa_core::classical::{classify_motion, integrate, MotionKind};
use kappa_core::model::CartState;
use kappa_core::quantum::series::{degree, domb_sykes_limit, hyp2f1_coefficients};
use kappa_core::quantum::*;
use kappa_core::sym::run_identity_suite;
use num_rational::BigRational;
use num_traits::One;

struct Outcome {
    pass: bool,
    detail: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            detail: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: String) {
        self.pass &= ok;
        self.detail
            .push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn symbolic_zero_suite() -> Outcome {
    let mut o = Outcome::new();
    let t0 = Instant::now();
    let rep = run_identity_suite();
    let dt = t0.elapsed();
    for c in &rep.checks {
        o.check(c.zero, format!("{}: {}", c.name, c.status()));
    }
    o.check(
        rep.checks.len() == 12,
        format!("{} identities", rep.checks.len()),
    );
    o.check(
        dt < Duration::from_secs(5),
        format!("runtime {:.3} s < 5 s", secs(dt)),
    );
    o
}

fn classical_conservation() -> Outcome {
    let mut o = Outcome::new();
    let probe = CartState {
        x: 0.6,
        y: 0.1,
        vx: 0.3,
        vy: 0.5,
    };
    for k in [-0.5, -0.1, 0.0, 0.1, 0.5] {
        match integrate(&probe, k, 1.0, 100.0, 1e-10).and_then(|t| t.conservation_report()) {
            Ok(c) => {
                for (name, d) in [("H", c.h), ("P1", c.p1), ("P2", c.p2), ("J", c.j)] {
                    o.check(
                        d.max_rel_drift <= 1e-8,
                        format!("kappa {k:+}: {name} relative drift {:.2e}", d.max_rel_drift),
                    );
                }
            }
            Err(e) => o.check(false, format!("kappa {k:+}: {e}")),
        }
    }
    let bounded = integrate(&probe, 0.5, 1.0, 100.0, 1e-10).and_then(|t| classify_motion(&t));
    match bounded {
        Ok(m) => {
            let rms = [m.sin_fit_x, m.sin_fit_y]
                .iter()
                .map(|f| f.map_or(f64::INFINITY, |f| f.rms))
                .fold(0.0f64, f64::max);
            o.check(rms < 1e-6, format!("kappa +0.5 sinusoid fit RMS {rms:.2e}"));
        }
        Err(e) => o.check(false, format!("kappa +0.5 fit: {e}")),
    }
    let fast = CartState {
        x: 1.0,
        y: 0.0,
        vx: 1.0,
        vy: 1.5,
    };
    match integrate(&fast, -0.5, 1.0, 20.0, 1e-10).and_then(|t| classify_motion(&t)) {
        Ok(m) => {
            let r2 = m.growth.map_or(0.0, |g| g.r_squared);
            o.check(
                m.kind == MotionKind::Unbounded && r2 > 0.999,
                format!(
                    "kappa -0.5 H = {:.3} > {:.3}: log-linear growth R^2 = {r2:.6}",
                    m.energy,
                    m.escape_energy.unwrap_or(f64::NAN)
                ),
            );
        }
        Err(e) => o.check(false, format!("kappa -0.5 escape: {e}")),
    }
    o
}

fn euclidean_anchor() -> Outcome {
    let mut o = Outcome::new();
    let t0 = Instant::now();
    for mu in 0..3u32 {
        match sl_eigensolve(mu, 0.0, 4, &OracleOptions::default()) {
            Ok(res) => {
                let dev = res
                    .levels
                    .iter()
                    .enumerate()
                    .map(|(nr, e)| (e - (2 * nr as u32 + mu + 1) as f64).abs())
                    .fold(0.0f64, f64::max);
                o.check(
                    dev < 1e-4 && res.converged,
                    format!(
                        "mu {mu}: max |E - (2N_r + mu + 1)| = {dev:.2e}, converged {}",
                        res.converged
                    ),
                );
            }
            Err(e) => o.check(false, format!("mu {mu}: {e}")),
        }
    }
    let dt = t0.elapsed();
    o.check(
        dt < Duration::from_secs(30),
        format!("runtime {:.3} s < 30 s", secs(dt)),
    );
    o
}

fn curved_oracle_agreement() -> Outcome {
    let mut o = Outcome::new();
    let adj = match adjudicate(&[-0.1, 0.1], &[0, 1, 2], 4, 1e-4, &OracleOptions::default()) {
        Ok(a) => a,
        Err(e) => {
            o.check(false, format!("oracle: {e}"));
            return o;
        }
    };
    for case in &adj.cases {
        let dev = |b: EnergyBranch| {
            case.deviations
                .iter()
                .find(|d| d.branch == b)
                .map_or(f64::NAN, |d| d.max_deviation)
        };
        o.check(
            case.oracle.converged && dev(RESOLVED_BRANCH) < 1e-4,
            format!(
                "kappa {:+} mu {}: resolved dev {:.2e}, sign-mirror dev {:.2e}, printed dev {:.2e}",
                case.kappa,
                case.mu,
                dev(RESOLVED_BRANCH),
                dev(EnergyBranch::SignMirror),
                dev(EnergyBranch::Printed)
            ),
        );
    }
    o.check(
        adj.resolved == Some(RESOLVED_BRANCH),
        format!(
            "resolved branch: {}",
            adj.resolved
                .map_or("none (no single branch matches every case)", |b| b.name())
        ),
    );
    o
}

fn eigenpair_residuals() -> Outcome {
    let mut o = Outcome::new();
    for k in [-0.1, 0.1] {
        let radii = default_sample_radii(k, 100);
        let (mut worst, mut least_bad) = (0.0f64, f64::INFINITY);
        for nr in 0..=3 {
            for mu in 0..=2 {
                let qn = QuantumNumbers::new(nr, mu);
                let e = RESOLVED_BRANCH.energy(2 * nr + mu, k);
                let good = schrodinger_residual(qn, k, e, &radii, RESOLVED_BRANCH);
                let bad = schrodinger_residual(qn, k, e + 0.1, &radii, RESOLVED_BRANCH);
                match (good, bad) {
                    (Ok(g), Ok(b)) => {
                        worst = worst.max(g);
                        least_bad = least_bad.min(b);
                    }
                    (Err(e), _) | (_, Err(e)) => o.check(false, format!("kappa {k}: {e}")),
                }
            }
        }
        o.check(
            worst < 1e-8,
            format!("kappa {k:+}: max residual {worst:.2e} < 1e-8"),
        );
        o.check(
            least_bad > 1e-3,
            format!("kappa {k:+}: min perturbed residual {least_bad:.2e} > 1e-3"),
        );
    }
    o
}

fn spectrum_structure() -> Outcome {
    let mut o = Outcome::new();
    let c = kappa_core::model::PhysConstants::unit();
    let mut spread = 0.0f64;
    for k in [-0.1, 0.0, 0.1] {
        for n in 0..=8u32 {
            let es: Vec<f64> = (0..=n / 2)
                .map(|nr| {
                    closed_form_energy(QuantumNumbers::new(nr, n - 2 * nr), k, &c)
                        .resolved
                        .e_scaled
                })
                .collect();
            for e in &es {
                spread = spread.max((e - es[0]).abs());
            }
        }
    }
    o.check(
        spread <= 1e-12,
        format!("degeneracy in n: max spread {spread:.1e}"),
    );
    let e = |n: u32, k: f64| RESOLVED_BRANCH.energy(n, k);
    let gaps = |k: f64| (0..8u32).map(|n| e(n + 1, k) - e(n, k)).collect::<Vec<_>>();
    let (gp, gn) = (gaps(0.1), gaps(-0.1));
    o.check(
        gp.windows(2).all(|w| w[1] > w[0]),
        format!("kappa +0.1 gaps increase: {gp:.2?}"),
    );
    o.check(
        gn.windows(2).all(|w| w[1] < w[0]),
        format!("kappa -0.1 gaps decrease: {gn:.2?}"),
    );
    for n in 0..=8u32 {
        let (a, b) = (e(n, -0.1), e(n, 0.0));
        o.check(
            a < b,
            format!("n {n}: E(kappa -0.1) = {a:.4} below E(kappa 0) = {b:.4}"),
        );
    }
    o
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn series_machinery() -> Outcome {
    let mut o = Outcome::new();
    let mut exact = true;
    for k in [q(1, 10), q(-1, 10), q(3, 7)] {
        for mu in 0..3u32 {
            for nr in 0..4u32 {
                let n = (2 * nr + mu) as i64;
                let m = q(mu as i64, 1);
                let cases = [
                    (
                        Exponent::Conjugate,
                        q(n + 1, 1) * (q(1, 1) + q(n, 2) * k.clone()),
                        ((q(2, 1) * m.clone() + q(1, 1)) * k.clone() + q(2, 1))
                            / (q(2, 1) * k.clone()),
                    ),
                    (
                        Exponent::Printed,
                        q(n + 1, 1) * (q(n + 2, 2) * k.clone() - q(1, 1)),
                        ((q(2, 1) * m.clone() + q(3, 1)) * k.clone() - q(2, 1))
                            / (q(2, 1) * k.clone()),
                    ),
                ];
                for (x, e, sum) in cases {
                    let a = frobenius_series(&e, mu, &k, 24, x);
                    let (ha, hb) = (-q(nr as i64, 1), sum + q(nr as i64, 1));
                    let h = hyp2f1_coefficients(&ha, &hb, &q(mu as i64 + 1, 1), 11);
                    let mut kp = BigRational::one();
                    let mut same = degree(&a) == Some(2 * nr as usize);
                    for j in 0..=11 {
                        same &= a[2 * j] == h[j].clone() * kp.clone();
                        kp *= k.clone();
                    }
                    exact &= same;
                }
            }
        }
    }
    o.check(
        exact,
        "Frobenius terminates at 2N_r and equals kappa^j (a)_j (b)_j / ((c)_j j!) in Q".into(),
    );

    let e = 1.2345f64;
    for (k, x) in [
        (-1.0f64, Exponent::Printed),
        (0.5, Exponent::Conjugate),
        (1.0, Exponent::Conjugate),
    ] {
        let worst = (0..3u32)
            .map(|mu| {
                let a = frobenius_series(&e, mu, &k, 202, x);
                ((a[200] / a[198]).abs() / k.abs() - 1.0).abs()
            })
            .fold(0.0f64, f64::max);
        o.check(
            worst < 0.01,
            format!(
                "kappa {k:+} {x:?}: |a_200/a_198| / |kappa| - 1 = {:.3}%",
                100.0 * worst
            ),
        );
    }
    for k in [-0.1f64, 0.1] {
        for x in [Exponent::Printed, Exponent::Conjugate] {
            let a = frobenius_series(&e, 0, &k, 202, x);
            let raw = (a[200] / a[198]).abs() / k.abs() - 1.0;
            let ds = domb_sykes_limit(&a, 200).map_or(f64::NAN, |l| l / k.abs() - 1.0);
            o.check(
                ds.abs() < 0.01,
                format!(
                    "kappa {k:+} {x:?}: raw ratio off {:.1}%, 1/n-extrapolated off {:.3}%",
                    100.0 * raw,
                    100.0 * ds
                ),
            );
        }
    }
    o
}

fn orthonormality() -> Outcome {
    let mut o = Outcome::new();
    match gram_matrix(0, 0.1, 6, RESOLVED_BRANCH) {
        Ok(g) => {
            let dev = g
                .iter()
                .enumerate()
                .flat_map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(move |(j, v)| (v - if i == j { 1.0 } else { 0.0 }).abs())
                })
                .fold(0.0f64, f64::max);
            o.check(
                dev < 1e-8,
                format!("mu 0, kappa 0.1, 6 states: max |G - I| = {dev:.2e}"),
            );
        }
        Err(e) => o.check(false, format!("gram matrix: {e}")),
    }
    o
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("symbolic zero suite", symbolic_zero_suite),
        ("classical conservation", classical_conservation),
        ("euclidean quantum anchor", euclidean_anchor),
        ("curved-space oracle agreement", curved_oracle_agreement),
        ("eigenpair residuals", eigenpair_residuals),
        ("structure of the spectrum", spectrum_structure),
        ("series machinery", series_machinery),
        ("orthonormality", orthonormality),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = f();
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {}: {name} ({:.2} s)",
            i + 1,
            secs(t0.elapsed())
        );
        for d in &out.detail {
            println!("       {d}");
        }
        failed += usize::from(!out.pass);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
