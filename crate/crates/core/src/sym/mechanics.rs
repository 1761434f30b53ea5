//! Phase-space functions and the canonical Poisson bracket in (r, φ, p_r, p_φ).

use num_rational::BigRational;

use super::ring::{RingElement, Var};

/// {F,G} = F_r G_pr + F_φ G_pφ − F_pr G_r − F_pφ G_φ
pub fn poisson_bracket(f: &RingElement, g: &RingElement) -> RingElement {
    let a = f.differentiate(Var::R) * g.differentiate(Var::Pr);
    let b = f.differentiate(Var::Phi) * g.differentiate(Var::Pphi);
    let c = f.differentiate(Var::Pr) * g.differentiate(Var::R);
    let d = f.differentiate(Var::Pphi) * g.differentiate(Var::Phi);
    a + b - c - d
}

/// Noether momentum of X₁: √(1−κr²)(cos φ p_r − sin φ p_φ / r).
pub fn noether_p1() -> RingElement {
    let s = RingElement::s();
    let inner =
        RingElement::cos() * RingElement::pr() - (RingElement::sin() * RingElement::pphi()).div_r();
    &s * &inner
}

/// Noether momentum of X₂: √(1−κr²)(sin φ p_r + cos φ p_φ / r).
pub fn noether_p2() -> RingElement {
    let s = RingElement::s();
    let inner =
        RingElement::sin() * RingElement::pr() + (RingElement::cos() * RingElement::pphi()).div_r();
    &s * &inner
}

pub fn noether_j() -> RingElement {
    RingElement::pphi()
}

/// Kinetic (geodesic) part ½[(1−κr²)p_r² + p_φ²/r²].
pub fn geodesic_hamiltonian() -> RingElement {
    let pr = RingElement::pr();
    let pf = RingElement::pphi();
    let t = RingElement::w() * &pr * &pr + (&pf * &pf).div_r().div_r();
    RingElement::ratio(1, 2) * t
}

/// V(r) = −(α²/2) r²/(1−κr²) with α² given exactly.
pub fn potential(alpha_sq: &BigRational) -> RingElement {
    let r = RingElement::r();
    (&r * &r)
        .div_w()
        .scale(&(-alpha_sq / BigRational::from_integer(2.into())))
}

/// H = ½[(1−κr²)p_r² + p_φ²/r²] − V(r).
pub fn hamiltonian(alpha_sq: &BigRational) -> RingElement {
    geodesic_hamiltonian() - potential(alpha_sq)
}

/// ½(P₁² + P₂² + κJ²) at unit mass.
pub fn noether_kinetic() -> RingElement {
    let p1 = noether_p1();
    let p2 = noether_p2();
    let j = noether_j();
    RingElement::ratio(1, 2) * (&p1 * &p1 + &p2 * &p2 + RingElement::kappa() * &j * &j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_is_antisymmetric_on_momenta() {
        let (p1, p2) = (noether_p1(), noether_p2());
        let sum = poisson_bracket(&p1, &p2) + poisson_bracket(&p2, &p1);
        assert!(sum.is_zero());
        assert!(poisson_bracket(&p1, &p1).is_zero());
    }

    #[test]
    fn canonical_pair() {
        let b = poisson_bracket(&RingElement::r(), &RingElement::pr());
        assert_eq!(b, RingElement::one());
    }

    #[test]
    fn potential_breaks_translation_invariance() {
        // {P₁, −V} = √(1−κr²) cos φ · V'(r) ≠ 0 for α ≠ 0
        let a2 = BigRational::from_integer(1.into());
        let v = potential(&a2);
        let b = poisson_bracket(&noether_p1(), &hamiltonian(&a2));
        let expect = RingElement::s() * RingElement::cos() * v.differentiate(Var::R);
        assert_eq!(b, expect);
        assert!(!b.is_zero());
    }
}
