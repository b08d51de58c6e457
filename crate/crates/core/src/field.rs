//! The coefficient field `K = Q(v)`: reduced fractions of Laurent polynomials.
//!
//! Canonical form: the denominator is a monic ordinary polynomial in `v` with
//! nonzero constant term, coprime to the polynomial part of the numerator, so
//! derived equality is semantic equality.

use crate::coeff::LaurentV;
use num::{BigRational, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Dense polynomial in `v` over `Q`, used only for gcd reduction.
type Poly = Vec<BigRational>;

fn poly_trim(p: &mut Poly) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_is_zero(p: &Poly) -> bool {
    p.is_empty()
}

/// Remainder of `a` by `b` (`b` nonzero).
fn poly_rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while !poly_is_zero(&r) && r.len() - 1 >= db {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            let t = &f * c;
            r[i + shift] -= t;
        }
        poly_trim(&mut r);
        if r.len() <= shift {
            break;
        }
    }
    r
}

/// Exact quotient `a / b`; panics if the division is not exact.
fn poly_div_exact(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    if poly_is_zero(&r) {
        return vec![];
    }
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while !poly_is_zero(&r) && r.len() - 1 >= db {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &lb;
        q[shift] = f.clone();
        for (i, c) in b.iter().enumerate() {
            let t = &f * c;
            r[i + shift] -= t;
        }
        poly_trim(&mut r);
    }
    assert!(poly_is_zero(&r), "non-exact polynomial division");
    q
}

/// Monic gcd by the Euclidean algorithm.
fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !poly_is_zero(&y) {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in &mut x {
            *c /= &l;
        }
    }
    x
}

/// Split a nonzero Laurent polynomial as `v^s * N` with `N(0) != 0`.
fn laurent_split(p: &LaurentV) -> (i64, Poly) {
    let s = p.min_exp().expect("nonzero");
    let deg = p.max_exp().unwrap() - s;
    let mut out = vec![BigRational::zero(); deg as usize + 1];
    for (k, c) in p.iter() {
        out[(k - s) as usize] = c.clone();
    }
    (s, out)
}

fn poly_to_laurent(p: &Poly, shift: i64) -> LaurentV {
    let mut out = LaurentV::zero();
    for (i, c) in p.iter().enumerate() {
        out += &LaurentV::monomial(i as i64 + shift, c.clone());
    }
    out
}

/// Element of `Q(v)` in reduced form.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RatFunc {
    num: LaurentV,
    den: LaurentV, // monic polynomial, nonzero constant term
}

impl RatFunc {
    pub fn zero() -> Self {
        Self { num: LaurentV::zero(), den: LaurentV::one() }
    }

    pub fn one() -> Self {
        Self { num: LaurentV::one(), den: LaurentV::one() }
    }

    pub fn from_laurent(p: LaurentV) -> Self {
        Self { num: p, den: LaurentV::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_laurent(LaurentV::from_int(n))
    }

    pub fn v_pow(k: i64) -> Self {
        Self::from_laurent(LaurentV::v_pow(k))
    }

    pub fn new(num: LaurentV, den: LaurentV) -> Self {
        assert!(!den.is_zero(), "zero denominator in Q(v)");
        Self::reduced(num, den)
    }

    fn reduced(num: LaurentV, den: LaurentV) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (sn, np) = laurent_split(&num);
        let (sd, dp) = laurent_split(&den);
        let g = poly_gcd(&np, &dp);
        let mut np = poly_div_exact(&np, &g);
        let mut dp = poly_div_exact(&dp, &g);
        // make the denominator monic
        let l = dp.last().unwrap().clone();
        for c in &mut np {
            *c /= &l;
        }
        for c in &mut dp {
            *c /= &l;
        }
        Self {
            num: poly_to_laurent(&np, sn - sd),
            den: poly_to_laurent(&dp, 0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn numer(&self) -> &LaurentV {
        &self.num
    }

    pub fn denom(&self) -> &LaurentV {
        &self.den
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn powi(&self, k: i64) -> Self {
        if k < 0 {
            return self.inv().expect("inverse of zero").powi(-k);
        }
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at a rational point where the denominator does not vanish.
    pub fn eval_at(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_at(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_at(x) / d)
    }
}

impl From<LaurentV> for RatFunc {
    fn from(p: LaurentV) -> Self {
        Self::from_laurent(p)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.inv().expect("division by zero in Q(v)")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                (&self).$method(rhs)
            }
        }
        impl $assign_trait<&RatFunc> for RatFunc {
            fn $assign_method(&mut self, rhs: &RatFunc) {
                *self = (&*self).$method(rhs);
            }
        }
    };
}

forward_owned_binop!(Add, add, AddAssign, add_assign);
forward_owned_binop!(Sub, sub, SubAssign, sub_assign);
forward_owned_binop!(Mul, mul, MulAssign, mul_assign);

/// `num` when the denominator is 1, else `(num)/(den)`.
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid field element `{0}`")]
pub struct ParseRatFuncError(pub String);

impl FromStr for RatFunc {
    type Err = ParseRatFuncError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(pos) = t.find(")/(") {
            let num = t[..pos]
                .strip_prefix('(')
                .ok_or_else(|| ParseRatFuncError(s.to_string()))?;
            let den = t[pos + 3..]
                .strip_suffix(')')
                .ok_or_else(|| ParseRatFuncError(s.to_string()))?;
            let num: LaurentV = num.parse().map_err(|_| ParseRatFuncError(s.to_string()))?;
            let den: LaurentV = den.parse().map_err(|_| ParseRatFuncError(s.to_string()))?;
            if den.is_zero() {
                return Err(ParseRatFuncError(s.to_string()));
            }
            Ok(RatFunc::new(num, den))
        } else {
            let num: LaurentV = t.parse().map_err(|_| ParseRatFuncError(s.to_string()))?;
            Ok(RatFunc::from_laurent(num))
        }
    }
}
