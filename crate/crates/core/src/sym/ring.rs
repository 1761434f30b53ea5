//! Exact normal forms for expressions in κ, r, s = √(1−κr²), cos φ, sin φ, p_r, p_φ.
//!
//! An element is stored as `N / (1−κr²)^b` where `N` is a Laurent polynomial in
//! `r` (polynomial in every other generator) reduced modulo the two relations
//!
//! ```text
//! s²     = 1 − κr²
//! sin²φ  = 1 − cos²φ
//! ```
//!
//! so every monomial has s-degree and sin-degree at most one. The denominator
//! exponent is kept minimal: whenever `N` is divisible by `1−κr²` the factor is
//! cancelled. With those two rules the representation is unique, which makes
//! zero-testing a structural check.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exponent vector of a single monomial. Field order is the sort order used by
/// the textual dump.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponents {
    pub kappa: u32,
    pub r: i32,
    pub s: u8,
    pub cos: u32,
    pub sin: u8,
    pub pr: u32,
    pub pf: u32,
}

/// Differentiation variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    R,
    Phi,
    Pr,
    Pphi,
}

/// A monomial before reduction: any s- and sin-degree is allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct RawMonomial {
    pub coeff: BigRational,
    pub kappa: u32,
    pub r: i32,
    pub s: u32,
    pub cos: u32,
    pub sin: u32,
    pub pr: u32,
    pub pf: u32,
}

impl RawMonomial {
    pub fn new(coeff: BigRational) -> Self {
        RawMonomial {
            coeff,
            kappa: 0,
            r: 0,
            s: 0,
            cos: 0,
            sin: 0,
            pr: 0,
            pf: 0,
        }
    }
}

/// An unreduced sum of monomials over `r^den_r (1−κr²)^den_w`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawSum {
    pub terms: Vec<RawMonomial>,
    pub den_r: u32,
    pub den_w: u32,
}

type Poly = BTreeMap<Exponents, BigRational>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn add_term(p: &mut Poly, e: Exponents, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&e) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                p.remove(&e);
            }
        }
        None => {
            p.insert(e, c);
        }
    }
}

/// Expands `raw` into reduced monomials and accumulates them into `out`.
fn push_reduced(out: &mut Poly, raw: &RawMonomial) {
    // s^(2q+e) = s^e (1 − κr²)^q ; sin^(2t+d) = sin^d (1 − cos²)^t
    let (sq, se) = (raw.s / 2, (raw.s % 2) as u8);
    let (tq, td) = (raw.sin / 2, (raw.sin % 2) as u8);
    let base = Exponents {
        kappa: raw.kappa,
        r: raw.r,
        s: se,
        cos: raw.cos,
        sin: td,
        pr: raw.pr,
        pf: raw.pf,
    };
    // binomial expansion of (1 − κr²)^sq (1 − cos²)^tq
    let w_terms = binomial_row(sq);
    let c_terms = binomial_row(tq);
    for (i, bi) in w_terms.iter().enumerate() {
        for (j, bj) in c_terms.iter().enumerate() {
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let mut e = base;
            e.kappa += i as u32;
            e.r += 2 * i as i32;
            e.cos += 2 * j as u32;
            let c = &raw.coeff * BigRational::from_integer(bi * bj * BigInt::from(sign));
            add_term(out, e, c);
        }
    }
}

fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = row[k as usize].clone() * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

fn mul_poly(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let raw = RawMonomial {
                coeff: ca * cb,
                kappa: ea.kappa + eb.kappa,
                r: ea.r + eb.r,
                s: (ea.s + eb.s) as u32,
                cos: ea.cos + eb.cos,
                sin: (ea.sin + eb.sin) as u32,
                pr: ea.pr + eb.pr,
                pf: ea.pf + eb.pf,
            };
            push_reduced(&mut out, &raw);
        }
    }
    out
}

fn add_poly(a: &Poly, b: &Poly, sign: i64) -> Poly {
    let mut out = a.clone();
    let s = rat(sign);
    for (e, c) in b {
        add_term(&mut out, *e, c * &s);
    }
    out
}

/// Multiplies by (1 − κr²).
fn mul_w(p: &Poly) -> Poly {
    let mut out = p.clone();
    for (e, c) in p {
        let mut e2 = *e;
        e2.kappa += 1;
        e2.r += 2;
        add_term(&mut out, e2, -c.clone());
    }
    out
}

/// Exact division by (1 − κr²), or `None` when it does not divide.
///
/// Multiplying by w preserves `r − 2κ` exponent differences, so each class
/// is a univariate polynomial in u = κr² and divisibility by (1 − u) is the
/// vanishing of its coefficient sum.
fn div_w(p: &Poly) -> Option<Poly> {
    type Class = (i32, u8, u32, u8, u32, u32);
    let mut classes: BTreeMap<Class, BTreeMap<u32, BigRational>> = BTreeMap::new();
    for (e, c) in p {
        let key = (e.r - 2 * e.kappa as i32, e.s, e.cos, e.sin, e.pr, e.pf);
        classes.entry(key).or_default().insert(e.kappa, c.clone());
    }
    let mut out = Poly::new();
    for (key, coeffs) in classes {
        let total: BigRational = coeffs.values().cloned().sum();
        if !total.is_zero() {
            return None;
        }
        let top = *coeffs.keys().next_back().unwrap_or(&0);
        let mut acc = BigRational::zero();
        for i in 0..top {
            if let Some(c) = coeffs.get(&i) {
                acc += c;
            }
            let e = Exponents {
                kappa: i,
                r: key.0 + 2 * i as i32,
                s: key.1,
                cos: key.2,
                sin: key.3,
                pr: key.4,
                pf: key.5,
            };
            add_term(&mut out, e, acc.clone());
        }
    }
    Some(out)
}

/// Canonical element of the localized quotient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    num: Poly,
    w_pow: u32,
}

impl Default for RingElement {
    fn default() -> Self {
        RingElement::zero()
    }
}

impl RingElement {
    fn from_parts(num: Poly, w_pow: u32) -> Self {
        let mut num = num;
        let mut w_pow = w_pow;
        if num.is_empty() {
            return RingElement { num, w_pow: 0 };
        }
        while w_pow > 0 {
            match div_w(&num) {
                Some(q) => {
                    num = q;
                    w_pow -= 1;
                }
                None => break,
            }
        }
        RingElement { num, w_pow }
    }

    fn monomial(e: Exponents) -> Self {
        let mut num = Poly::new();
        num.insert(e, BigRational::one());
        RingElement { num, w_pow: 0 }
    }

    pub fn zero() -> Self {
        RingElement {
            num: Poly::new(),
            w_pow: 0,
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut num = Poly::new();
        add_term(&mut num, Exponents::default(), c);
        RingElement { num, w_pow: 0 }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn kappa() -> Self {
        Self::monomial(Exponents {
            kappa: 1,
            ..Default::default()
        })
    }

    pub fn r() -> Self {
        Self::monomial(Exponents {
            r: 1,
            ..Default::default()
        })
    }

    /// √(1−κr²)
    pub fn s() -> Self {
        Self::monomial(Exponents {
            s: 1,
            ..Default::default()
        })
    }

    /// 1 − κr², as a polynomial.
    pub fn w() -> Self {
        Self::one() - Self::kappa() * Self::r().powi(2)
    }

    pub fn cos() -> Self {
        Self::monomial(Exponents {
            cos: 1,
            ..Default::default()
        })
    }

    pub fn sin() -> Self {
        Self::monomial(Exponents {
            sin: 1,
            ..Default::default()
        })
    }

    pub fn pr() -> Self {
        Self::monomial(Exponents {
            pr: 1,
            ..Default::default()
        })
    }

    pub fn pphi() -> Self {
        Self::monomial(Exponents {
            pf: 1,
            ..Default::default()
        })
    }

    /// Reduces an arbitrary monomial sum to normal form.
    pub fn canonicalize(raw: &RawSum) -> Self {
        let mut num = Poly::new();
        for m in &raw.terms {
            let mut m = m.clone();
            m.r -= raw.den_r as i32;
            push_reduced(&mut num, &m);
        }
        Self::from_parts(num, raw.den_w)
    }

    /// The stored form as a raw sum over `r^a (1−κr²)^b`; feeding it back to
    /// [`RingElement::canonicalize`] returns `self`.
    pub fn to_raw(&self) -> RawSum {
        let (a, b) = self.denominator();
        let terms = self
            .num
            .iter()
            .map(|(e, c)| RawMonomial {
                coeff: c.clone(),
                kappa: e.kappa,
                r: e.r + a as i32,
                s: e.s as u32,
                cos: e.cos,
                sin: e.sin as u32,
                pr: e.pr,
                pf: e.pf,
            })
            .collect();
        RawSum {
            terms,
            den_r: a,
            den_w: b,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Denominator exponents `(a, b)` of `r^a (1−κr²)^b`.
    pub fn denominator(&self) -> (u32, u32) {
        let min_r = self.num.keys().map(|e| e.r).min().unwrap_or(0);
        ((-min_r).max(0) as u32, self.w_pow)
    }

    /// Number of monomials in the numerator.
    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    /// Monomials of the numerator (Laurent in r) in sorted order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.num.iter()
    }

    /// Equality by cross-multiplication: `a·w^{b'} − b·w^{b}` must reduce to the
    /// empty numerator. Agrees with `==` on canonical elements.
    pub fn cross_equal(&self, other: &RingElement) -> bool {
        let mut lhs = self.num.clone();
        for _ in 0..other.w_pow {
            lhs = mul_w(&lhs);
        }
        let mut rhs = other.num.clone();
        for _ in 0..self.w_pow {
            rhs = mul_w(&rhs);
        }
        add_poly(&lhs, &rhs, -1).is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let num = self.num.iter().map(|(e, v)| (*e, v * c)).collect();
        RingElement {
            num,
            w_pow: self.w_pow,
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Division by r.
    pub fn div_r(&self) -> Self {
        let num = self
            .num
            .iter()
            .map(|(e, c)| {
                let mut e = *e;
                e.r -= 1;
                (e, c.clone())
            })
            .collect();
        RingElement {
            num,
            w_pow: self.w_pow,
        }
    }

    /// Division by (1 − κr²).
    pub fn div_w(&self) -> Self {
        Self::from_parts(self.num.clone(), self.w_pow + 1)
    }

    /// Division by s = √(1−κr²), written as s/(1−κr²).
    pub fn div_s(&self) -> Self {
        (self * &Self::s()).div_w()
    }

    /// Exact partial derivative.
    pub fn differentiate(&self, var: Var) -> Self {
        match var {
            Var::R => self.d_dr(),
            Var::Phi => self.map_monomials(|e, c, out| {
                // d/dφ cos^k = −k cos^(k−1) sin ; d/dφ sin = cos
                if e.cos > 0 {
                    let raw = RawMonomial {
                        coeff: -(c * rat(e.cos as i64)),
                        kappa: e.kappa,
                        r: e.r,
                        s: e.s as u32,
                        cos: e.cos - 1,
                        sin: e.sin as u32 + 1,
                        pr: e.pr,
                        pf: e.pf,
                    };
                    push_reduced(out, &raw);
                }
                if e.sin == 1 {
                    let mut e2 = *e;
                    e2.sin = 0;
                    e2.cos += 1;
                    add_term(out, e2, c.clone());
                }
            }),
            Var::Pr => self.map_monomials(|e, c, out| {
                if e.pr > 0 {
                    let mut e2 = *e;
                    e2.pr -= 1;
                    add_term(out, e2, c * rat(e.pr as i64));
                }
            }),
            Var::Pphi => self.map_monomials(|e, c, out| {
                if e.pf > 0 {
                    let mut e2 = *e;
                    e2.pf -= 1;
                    add_term(out, e2, c * rat(e.pf as i64));
                }
            }),
        }
    }

    fn map_monomials<F>(&self, f: F) -> Self
    where
        F: Fn(&Exponents, &BigRational, &mut Poly),
    {
        let mut out = Poly::new();
        for (e, c) in &self.num {
            f(e, c, &mut out);
        }
        Self::from_parts(out, self.w_pow)
    }

    fn d_dr(&self) -> Self {
        // d/dr [N / w^b] = [w ∂N + 2bκr N] / w^(b+1), where the s-dependence of
        // N contributes ∂s/∂r = −κ r s / w, i.e. −κ r s inside the bracket.
        let mut explicit = Poly::new();
        let mut through_s = Poly::new();
        for (e, c) in &self.num {
            if e.r != 0 {
                let mut e2 = *e;
                e2.r -= 1;
                add_term(&mut explicit, e2, c * rat(e.r as i64));
            }
            if e.s == 1 {
                let mut e2 = *e;
                e2.kappa += 1;
                e2.r += 1;
                add_term(&mut through_s, e2, -c.clone());
            }
        }
        let mut top = add_poly(&mul_w(&explicit), &through_s, 1);
        if self.w_pow > 0 {
            let b = rat(2 * self.w_pow as i64);
            for (e, c) in &self.num {
                let mut e2 = *e;
                e2.kappa += 1;
                e2.r += 1;
                add_term(&mut top, e2, c * &b);
            }
        }
        Self::from_parts(top, self.w_pow + 1)
    }

    /// Substitutes κ = 0 (so s = 1 and 1−κr² = 1).
    pub fn at_kappa_zero(&self) -> Self {
        let mut out = Poly::new();
        for (e, c) in &self.num {
            if e.kappa == 0 {
                let mut e2 = *e;
                e2.s = 0;
                add_term(&mut out, e2, c.clone());
            }
        }
        RingElement { num: out, w_pow: 0 }
    }

    /// Floating-point evaluation at a phase-space point.
    pub fn eval(&self, p: &EvalPoint) -> f64 {
        let w = 1.0 - p.kappa * p.r * p.r;
        let s = w.sqrt();
        let (sn, cs) = p.phi.sin_cos();
        let mut acc = 0.0;
        for (e, c) in &self.num {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            t *= p.kappa.powi(e.kappa as i32);
            t *= p.r.powi(e.r);
            if e.s == 1 {
                t *= s;
            }
            t *= cs.powi(e.cos as i32);
            if e.sin == 1 {
                t *= sn;
            }
            t *= p.pr.powi(e.pr as i32) * p.pphi.powi(e.pf as i32);
            acc += t;
        }
        acc / w.powi(self.w_pow as i32)
    }
}

/// Numeric values for the generators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPoint {
    pub kappa: f64,
    pub r: f64,
    pub phi: f64,
    pub pr: f64,
    pub pphi: f64,
}

impl fmt::Display for RingElement {
    /// `(c*k^i*r^j*s^e*cos^k*sin^d*pr^l*pf^m + ...) / r^a*(1-k*r^2)^b`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.denominator();
        if self.num.is_empty() {
            return write!(f, "0");
        }
        write!(f, "(")?;
        for (idx, (e, c)) in self.num.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let coeff = if c.is_integer() {
                c.numer().to_string()
            } else if c.is_negative() {
                format!("-{}/{}", c.numer().abs(), c.denom())
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            write!(
                f,
                "{}*k^{}*r^{}*s^{}*cos^{}*sin^{}*pr^{}*pf^{}",
                coeff,
                e.kappa,
                e.r + a as i32,
                e.s,
                e.cos,
                e.sin,
                e.pr,
                e.pf
            )?;
        }
        write!(f, ") / r^{}*(1-k*r^2)^{}", a, b)
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let b = self.w_pow.max(rhs.w_pow);
        let mut l = self.num.clone();
        for _ in self.w_pow..b {
            l = mul_w(&l);
        }
        let mut r = rhs.num.clone();
        for _ in rhs.w_pow..b {
            r = mul_w(&r);
        }
        RingElement::from_parts(add_poly(&l, &r, 1), b)
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        RingElement::from_parts(mul_poly(&self.num, &rhs.num), self.w_pow + rhs.w_pow)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.scale(&rat(-1))
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: &RingElement) -> RingElement {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<RingElement> for &'a RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
