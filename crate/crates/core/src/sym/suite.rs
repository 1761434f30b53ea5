//! The identity suite run by `kappa verify`: every residual must normalize to zero
//! with κ kept symbolic.

use num_rational::BigRational;
use serde::Serialize;

use super::geometry::{
    killing_residuals, lie_derivative_metric, measure_lie_derivative, vf_commutator, SymMetric,
    VectorField2,
};
use super::mechanics::{
    geodesic_hamiltonian, hamiltonian, noether_j, noether_kinetic, noether_p1, noether_p2,
    poisson_bracket,
};
use super::ring::RingElement;

/// Outcome of one identity. `residuals` holds every component that must vanish.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub description: String,
    pub residuals: Vec<String>,
    pub zero: bool,
}

impl IdentityCheck {
    fn new(name: &str, description: &str, residuals: Vec<RingElement>) -> Self {
        let zero = residuals.iter().all(RingElement::is_zero);
        IdentityCheck {
            name: name.to_string(),
            description: description.to_string(),
            residuals: residuals.iter().map(|r| r.to_string()).collect(),
            zero,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.zero {
            "ZERO"
        } else {
            "NONZERO"
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<IdentityCheck>,
    /// Brackets with the full (potential-carrying) Hamiltonian. Reported, not
    /// required: the translation momenta do not commute with a central
    /// potential.
    pub informational: Vec<IdentityCheck>,
}

impl SuiteReport {
    pub fn all_zero(&self) -> bool {
        self.checks.iter().all(|c| c.zero)
    }
}

fn killing_check(name: &str, label: &str, x: &VectorField2) -> IdentityCheck {
    let g = SymMetric::constant_curvature();
    let lg = lie_derivative_metric(x, &g);
    let mut res: Vec<RingElement> = killing_residuals(x).into_iter().collect();
    res.extend([lg.g_rr, lg.g_rphi, lg.g_phiphi]);
    IdentityCheck::new(
        name,
        &format!("{label}: Killing system residuals and L_X g"),
        res,
    )
}

fn velocity_identity() -> RingElement {
    // v_r, v_φ ride on the p_r, p_φ generators
    let (r, c, sn) = (RingElement::r(), RingElement::cos(), RingElement::sin());
    let (vr, vf) = (RingElement::pr(), RingElement::pphi());
    let k = RingElement::kappa();
    let x = &r * &c;
    let y = &r * &sn;
    let vx = &vr * &c - &r * &sn * &vf;
    let vy = &vr * &sn + &r * &c * &vf;
    let l = &x * &vy - &y * &vx;
    let lhs = &vx * &vx + &vy * &vy - &k * &l * &l;
    let rhs = &vr * &vr + &r * &r * RingElement::w() * &vf * &vf;
    lhs - rhs
}

pub fn run_identity_suite() -> SuiteReport {
    let (x1, x2, xj) = (VectorField2::x1(), VectorField2::x2(), VectorField2::xj());
    let (p1, p2, j) = (noether_p1(), noether_p2(), noether_j());
    let k = RingElement::kappa();
    let h0 = geodesic_hamiltonian();

    let mut checks = vec![
        killing_check("killing_x1", "X1", &x1),
        killing_check("killing_x2", "X2", &x2),
        killing_check("killing_xj", "XJ", &xj),
    ];

    checks.push(IdentityCheck::new(
        "noether_bracket_table",
        "{P1,P2} = kJ, {P1,J} = -P2, {P2,J} = P1",
        vec![
            poisson_bracket(&p1, &p2) - &k * &j,
            poisson_bracket(&p1, &j) + &p2,
            poisson_bracket(&p2, &j) - &p1,
        ],
    ));
    checks.push(IdentityCheck::new(
        "hamiltonian_brackets",
        "{P1,H0} = {P2,H0} = {J,H0} = 0 for the geodesic Hamiltonian H0",
        vec![
            poisson_bracket(&p1, &h0),
            poisson_bracket(&p2, &h0),
            poisson_bracket(&j, &h0),
        ],
    ));

    let c12 = vf_commutator(&x1, &x2);
    let c1j = vf_commutator(&x1, &xj);
    let c2j = vf_commutator(&x2, &xj);
    let d12 = c12.add(&xj.scale(&k));
    let d1j = c1j.sub(&x2);
    let d2j = c2j.add(&x1);
    checks.push(IdentityCheck::new(
        "killing_commutator_table",
        "[X1,X2] = -k XJ, [X1,XJ] = X2, [X2,XJ] = -X1",
        vec![d12.f, d12.h, d1j.f, d1j.h, d2j.f, d2j.h],
    ));
    checks.push(IdentityCheck::new(
        "euclidean_translations_commute",
        "[X1,X2] = 0 at k = 0",
        vec![c12.f.at_kappa_zero(), c12.h.at_kappa_zero()],
    ));
    checks.push(IdentityCheck::new(
        "velocity_identity",
        "vx^2 + vy^2 - k (x vy - y vx)^2 = vr^2 + r^2 (1 - k r^2) vphi^2",
        vec![velocity_identity()],
    ));
    checks.push(IdentityCheck::new(
        "noether_hamiltonian_identity",
        "P1^2 + P2^2 + k J^2 = (1 - k r^2) pr^2 + pphi^2/r^2",
        vec![RingElement::int(2) * (noether_kinetic() - &h0)],
    ));
    for (name, x) in [
        ("measure_invariance_x1", &x1),
        ("measure_invariance_x2", &x2),
        ("measure_invariance_xj", &xj),
    ] {
        checks.push(IdentityCheck::new(
            name,
            "d_r(rho f) + d_phi(rho h) = 0 for rho = r/sqrt(1 - k r^2)",
            vec![measure_lie_derivative(x)],
        ));
    }

    // The potential enters linearly in α², so α² = 1 decides every α ≠ 0.
    let h = hamiltonian(&BigRational::from_integer(1.into()));
    let informational = vec![
        IdentityCheck::new(
            "j_full_hamiltonian",
            "{J,H} = 0 with the potential included",
            vec![poisson_bracket(&j, &h)],
        ),
        IdentityCheck::new(
            "p1_full_hamiltonian",
            "{P1,H} with the potential included (alpha = 1)",
            vec![poisson_bracket(&p1, &h)],
        ),
        IdentityCheck::new(
            "p2_full_hamiltonian",
            "{P2,H} with the potential included (alpha = 1)",
            vec![poisson_bracket(&p2, &h)],
        ),
    ];

    SuiteReport {
        checks,
        informational,
    }
}
