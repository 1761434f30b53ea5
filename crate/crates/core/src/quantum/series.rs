//! Power-series machinery: the Frobenius recursion for the reduced radial
//! equation, and the Gauss ₂F₁ and Kummer M series it is compared against.
//!
//! With `R = r^μ w^s f(r)`, `w = 1 − κr²`, the radial equation leaves
//!
//! ```text
//! r(1 − κr²) f'' + (C₂ r² + 2μ + 1) f' + D r f = 0
//! ```
//!
//! for either root of the exponent equation. Writing `f = Σ a_n r^n` gives the
//! two-step recursion
//!
//! ```text
//! a_{n+2} = [κ n(n−1) − C₂ n − D] a_n / ((n+2)(n+2+2μ)),   a₁ = 0.
//! ```

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};
use serde::Serialize;

use crate::error::{Error, Result};

/// Root of the exponent equation for `s` in `R = r^μ w^s f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exponent {
    /// s = ½ − 1/(2κ); at κ = 0 the prefactor limit is e^{+r²/2}.
    Printed,
    /// s = 1/(2κ); at κ = 0 the prefactor limit is e^{−r²/2}.
    Conjugate,
}

impl Exponent {
    /// s as a float (κ ≠ 0).
    pub fn s(self, kappa: f64) -> f64 {
        match self {
            Exponent::Printed => 0.5 - 0.5 / kappa,
            Exponent::Conjugate => 0.5 / kappa,
        }
    }
}

pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> + FromPrimitive {}
impl<T: Clone + Debug + Num + Neg<Output = T> + FromPrimitive> Scalar for T {}

fn int<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("small integer")
}

/// (C₂, D) of the reduced equation.
pub fn reduced_coefficients<T: Scalar>(energy: &T, mu: u32, kappa: &T, e: Exponent) -> (T, T) {
    let m: T = int(mu as i64);
    let two: T = int(2);
    match e {
        Exponent::Printed => {
            let c2 =
                two.clone() - two.clone() * kappa.clone() * m.clone() - int::<T>(4) * kappa.clone();
            let d = two.clone() * energy.clone() + two.clone() * m.clone() + two
                - kappa.clone() * (m.clone() + T::one()) * (m + int(2));
            (c2, d)
        }
        Exponent::Conjugate => {
            let c2 = -(two.clone() * (T::one() + kappa.clone() * m.clone() + kappa.clone()));
            let d = two.clone() * energy.clone()
                - two.clone() * m.clone()
                - two
                - kappa.clone() * m.clone() * (m + T::one());
            (c2, d)
        }
    }
}

/// Coefficients a_0..=a_{n_max} with a_0 = 1.
pub fn frobenius_series<T: Scalar>(
    energy: &T,
    mu: u32,
    kappa: &T,
    n_max: usize,
    e: Exponent,
) -> Vec<T> {
    let (c2, d) = reduced_coefficients(energy, mu, kappa, e);
    let mut a = vec![T::zero(); n_max + 1];
    a[0] = T::one();
    for n in 0..n_max.saturating_sub(1) {
        if a[n].is_zero() {
            continue;
        }
        let ni: T = int(n as i64);
        let num =
            kappa.clone() * ni.clone() * (ni.clone() - T::one()) - c2.clone() * ni - d.clone();
        let den: T = int(((n + 2) * (n + 2 + 2 * mu as usize)) as i64);
        a[n + 2] = num * a[n].clone() / den;
    }
    a
}

/// Coefficients (a)_k (b)_k / ((c)_k k!) of ₂F₁(a, b; c; z) for k = 0..=k_max.
pub fn hyp2f1_coefficients<T: Scalar>(a: &T, b: &T, c: &T, k_max: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(k_max + 1);
    let mut term = T::one();
    out.push(term.clone());
    for k in 0..k_max {
        let kk: T = int(k as i64);
        term = term * (a.clone() + kk.clone()) * (b.clone() + kk.clone())
            / ((c.clone() + kk) * int::<T>(k as i64 + 1));
        out.push(term.clone());
    }
    out
}

/// Coefficients (a)_k / ((c)_k k!) of M(a, c; z).
pub fn kummer_coefficients<T: Scalar>(a: &T, c: &T, k_max: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(k_max + 1);
    let mut term = T::one();
    out.push(term.clone());
    for k in 0..k_max {
        let kk: T = int(k as i64);
        term = term * (a.clone() + kk.clone()) / ((c.clone() + kk) * int::<T>(k as i64 + 1));
        out.push(term.clone());
    }
    out
}

/// Taylor coefficients of e^{σz} for k = 0..=k_max.
pub fn exp_coefficients<T: Scalar>(sigma: &T, k_max: usize) -> Vec<T> {
    let mut out = vec![T::one()];
    for k in 0..k_max {
        let next = out[k].clone() * sigma.clone() / int::<T>(k as i64 + 1);
        out.push(next);
    }
    out
}

/// Cauchy product truncated to the shorter length.
pub fn series_product<T: Scalar>(p: &[T], q: &[T]) -> Vec<T> {
    let n = p.len().min(q.len());
    (0..n)
        .map(|k| (0..=k).fold(T::zero(), |acc, j| acc + p[j].clone() * q[k - j].clone()))
        .collect()
}

/// ₂F₁(a, b; c; z) by direct summation. Terminating series are summed exactly;
/// otherwise |z| < 1 is required.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let terminating = [a, b]
        .iter()
        .any(|p| *p <= 0.0 && (p - p.round()).abs() < 1e-12);
    if !terminating && z.abs() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "2F1 series diverges at z = {z}"
        )));
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..100_000 {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term == 0.0 || (!terminating && term.abs() < 1e-17 * sum.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence("2F1 series".into()))
}

/// Kummer M(a, c; z) by direct summation (entire in z).
pub fn kummer_m(a: f64, c: f64, z: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..100_000 {
        let kf = k as f64;
        term *= (a + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term == 0.0 || (kf > z.abs() && term.abs() < 1e-17 * sum.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence("Kummer M series".into()))
}

/// Index of the last nonzero coefficient.
pub fn degree<T: Scalar>(coeffs: &[T]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

/// Domb–Sykes estimate of lim |a_{n+2}/a_n| from the two-point 1/n
/// extrapolation of the ratio sequence at even indices n−2 and n.
pub fn domb_sykes_limit(coeffs: &[f64], n: usize) -> Option<f64> {
    if n < 4 || n >= coeffs.len() || n % 2 == 1 {
        return None;
    }
    let ratio = |k: usize| coeffs[k] / coeffs[k - 2];
    let (r1, r2) = (ratio(n - 2), ratio(n));
    let (x1, x2) = (1.0 / (n - 2) as f64, 1.0 / n as f64);
    // linear in 1/n, evaluated at 1/n = 0
    Some((r2 - (r1 - r2) / (x1 - x2) * x2).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn odd_coefficients_vanish() {
        let a = frobenius_series(&1.7, 2, &0.3, 21, Exponent::Printed);
        assert!(a.iter().skip(1).step_by(2).all(|c| *c == 0.0));
        assert_eq!(a[0], 1.0);
    }

    #[test]
    fn conjugate_terminates_at_its_energies() {
        // 𝓔 = (n+1)(1 + nκ/2), n = 2N + μ
        let kappa = q(1, 10);
        for mu in 0..3u32 {
            for nr in 0..4u32 {
                let n = (2 * nr + mu) as i64;
                let e = q(n + 1, 1) * (q(1, 1) + q(n, 2) * kappa.clone());
                let a = frobenius_series(&e, mu, &kappa, 40, Exponent::Conjugate);
                assert_eq!(degree(&a), Some(2 * nr as usize), "mu {mu} N {nr}");
            }
        }
    }

    #[test]
    fn printed_terminates_at_printed_energies() {
        let kappa = q(-3, 7);
        for mu in 0..3u32 {
            for nr in 0..4u32 {
                let n = (2 * nr + mu) as i64;
                let e = q(n + 1, 1) * (q(n + 2, 2) * kappa.clone() - q(1, 1));
                let a = frobenius_series(&e, mu, &kappa, 40, Exponent::Printed);
                assert_eq!(degree(&a), Some(2 * nr as usize));
            }
        }
    }

    #[test]
    fn terminating_hyp2f1_is_polynomial() {
        // ₂F₁(−1, b; c; z) = 1 − (b/c) z
        let (b, c, z) = (2.5, 3.0, 0.4);
        assert!((hyp2f1(-1.0, b, c, z).unwrap() - (1.0 - b / c * z)).abs() < 1e-15);
        assert!(hyp2f1(0.5, 0.5, 1.0, 1.5).is_err());
    }

    #[test]
    fn hyp2f1_matches_closed_forms() {
        // ₂F₁(1,1;2;z) = −ln(1−z)/z
        let z: f64 = 0.3;
        let v = hyp2f1(1.0, 1.0, 2.0, z).unwrap();
        assert!((v + (1.0 - z).ln() / z).abs() < 1e-14);
    }

    #[test]
    fn kummer_matches_exponential() {
        // M(a, a; z) = e^z
        assert!((kummer_m(1.3, 1.3, 2.0).unwrap() - 2f64.exp()).abs() < 1e-13);
        assert!((kummer_m(-2.0, 1.0, 3.0).unwrap() - (1.0 - 6.0 + 4.5)).abs() < 1e-14);
    }

    #[test]
    fn domb_sykes_recovers_limit() {
        // a_n ratio = 0.5 (1 + 3/n) exactly linear in 1/n
        let mut c = vec![1.0; 41];
        for n in (2..41).step_by(2) {
            c[n] = c[n - 2] * 0.5 * (1.0 + 3.0 / n as f64);
        }
        assert!((domb_sykes_limit(&c, 40).unwrap() - 0.5).abs() < 1e-12);
    }
}
