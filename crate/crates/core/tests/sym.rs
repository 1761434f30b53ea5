use kappa_core::model::{noether_momenta, Curvature, CylMomenta};
use kappa_core::sym::*;
use num_rational::BigRational;
use proptest::prelude::*;

fn monomial() -> impl Strategy<Value = RawMonomial> {
    (
        (-9i64..10, 1i64..5),
        0u32..3,
        -2i32..4,
        0u32..4,
        0u32..3,
        0u32..4,
        0u32..3,
        0u32..3,
    )
        .prop_map(|((n, d), kappa, r, s, cos, sin, pr, pf)| RawMonomial {
            coeff: BigRational::new(n.into(), d.into()),
            kappa,
            r,
            s,
            cos,
            sin,
            pr,
            pf,
        })
}

fn raw_sum() -> impl Strategy<Value = RawSum> {
    (prop::collection::vec(monomial(), 0..5), 0u32..3, 0u32..3).prop_map(|(terms, den_r, den_w)| {
        RawSum {
            terms,
            den_r,
            den_w,
        }
    })
}

fn element() -> impl Strategy<Value = RingElement> {
    raw_sum().prop_map(|r| RingElement::canonicalize(&r))
}

fn point() -> impl Strategy<Value = EvalPoint> {
    (
        -1.0f64..1.0,
        0.1f64..0.9,
        -3.0f64..3.0,
        -2.0f64..2.0,
        -2.0f64..2.0,
    )
        .prop_map(|(kappa, r, phi, pr, pphi)| EvalPoint {
            kappa,
            r,
            phi,
            pr,
            pphi,
        })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonicalize_is_idempotent(raw in raw_sum()) {
        let once = RingElement::canonicalize(&raw);
        let twice = RingElement::canonicalize(&once.to_raw());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn canonical_form_keeps_its_value(raw in raw_sum(), p in point()) {
        // the raw sum evaluated directly, with s = √(1−κr²)
        let w = 1.0 - p.kappa * p.r * p.r;
        let direct: f64 = raw.terms.iter().map(|m| {
            let c: f64 = m.coeff.numer().to_string().parse::<f64>().unwrap()
                / m.coeff.denom().to_string().parse::<f64>().unwrap();
            c * p.kappa.powi(m.kappa as i32) * p.r.powi(m.r) * w.sqrt().powi(m.s as i32)
                * p.phi.cos().powi(m.cos as i32) * p.phi.sin().powi(m.sin as i32)
                * p.pr.powi(m.pr as i32) * p.pphi.powi(m.pf as i32)
        }).sum::<f64>() / (p.r.powi(raw.den_r as i32) * w.powi(raw.den_w as i32));
        prop_assert!(close(RingElement::canonicalize(&raw).eval(&p), direct));
    }

    #[test]
    fn multiplication_is_compatible(a in raw_sum(), b in raw_sum()) {
        let (ca, cb) = (RingElement::canonicalize(&a), RingElement::canonicalize(&b));
        let prod = &ca * &cb;
        let again = RingElement::canonicalize(&prod.to_raw());
        prop_assert_eq!(&prod, &again);
        prop_assert_eq!(&prod, &(&cb * &ca));
    }

    #[test]
    fn leibniz_rule(a in element(), b in element()) {
        for v in [Var::R, Var::Phi, Var::Pr, Var::Pphi] {
            let lhs = (&a * &b).differentiate(v);
            let rhs = &a.differentiate(v) * &b + &a * &b.differentiate(v);
            prop_assert!((lhs - rhs).is_zero());
        }
    }

    #[test]
    fn poisson_bracket_is_antisymmetric(a in element(), b in element()) {
        prop_assert!((poisson_bracket(&a, &b) + poisson_bracket(&b, &a)).is_zero());
        prop_assert!(poisson_bracket(&a, &a).is_zero());
    }

    #[test]
    fn symbolic_momenta_match_numeric(k in -1.0f64..1.0, f in 0.05f64..0.9, phi in -3.0f64..3.0, pr in -2.0f64..2.0, pphi in -2.0f64..2.0) {
        let r = if k > 0.0 { f / k.sqrt() } else { 2.0 * f };
        let p = EvalPoint { kappa: k, r, phi, pr, pphi };
        let nm = noether_momenta(&CylMomenta { r, phi, pr, pphi }, Curvature::new(k).unwrap()).unwrap();
        prop_assert!(close(noether_p1().eval(&p), nm.p1));
        prop_assert!(close(noether_p2().eval(&p), nm.p2));
        prop_assert!(close(noether_j().eval(&p), nm.j));
    }
}

#[test]
fn commutators_satisfy_jacobi() {
    let (x, y, z) = (VectorField2::x1(), VectorField2::x2(), VectorField2::xj());
    let j = vf_commutator(&x, &vf_commutator(&y, &z))
        .add(&vf_commutator(&y, &vf_commutator(&z, &x)))
        .add(&vf_commutator(&z, &vf_commutator(&x, &y)));
    assert!(j.is_zero());
    assert!(vf_commutator(&x, &x).is_zero());
}

#[test]
fn translations_commute_only_when_flat() {
    let c = vf_commutator(&VectorField2::x1(), &VectorField2::x2());
    assert!(!c.is_zero());
    assert!(c.component(0).at_kappa_zero().is_zero() && c.component(1).at_kappa_zero().is_zero());
}

#[test]
fn radial_field_is_not_killing() {
    let x = VectorField2::new(RingElement::r(), RingElement::zero());
    let [first, _, _] = killing_residuals(&x);
    assert!((first - RingElement::one().div_w()).is_zero());
    assert!(!lie_derivative_metric(&x, &SymMetric::constant_curvature()).is_zero());
}

#[test]
fn identity_suite_is_all_zero() {
    let rep = run_identity_suite();
    assert_eq!(rep.checks.len(), 12);
    assert!(rep.all_zero());
}
