//! Exact Laurent-polynomial coefficients in the formal variable `v` (with `q = v^2`).
//!
//! All arithmetic is over exact rationals; zero terms are never stored, so
//! structural equality is semantic equality.

use num::{BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Sparse Laurent polynomial in `v` over `Q`, keyed by exponent.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentV {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentV {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    /// `c * v^k`; normalizes away `c = 0`.
    pub fn monomial(k: i64, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(0, BigRational::from_integer(n.into()))
    }

    /// The formal variable `v`.
    pub fn v() -> Self {
        Self::monomial(1, BigRational::one())
    }

    /// `v^k` for any integer `k`.
    pub fn v_pow(k: i64) -> Self {
        Self::monomial(k, BigRational::one())
    }

    /// `q = v^2`.
    pub fn q() -> Self {
        Self::v_pow(2)
    }

    /// `q - 1`, the recurring coefficient of the quadratic relation.
    pub fn q_minus_one() -> Self {
        Self::q() - Self::one()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&0)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, k: i64) -> BigRational {
        self.terms.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Units of `Q[v, v^-1]` are the nonzero monomials.
    pub fn as_unit(&self) -> Option<(i64, BigRational)> {
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            Some((*k, c.clone()))
        } else {
            None
        }
    }

    /// Inverse, defined only for units.
    pub fn unit_inv(&self) -> Option<Self> {
        self.as_unit().map(|(k, c)| Self::monomial(-k, c.recip()))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Specialization `v -> 1` (sum of the coefficients).
    pub fn eval_one(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }

    /// Specialization at an arbitrary nonzero rational point.
    pub fn eval_at(&self, x: &BigRational) -> BigRational {
        assert!(!x.is_zero(), "Laurent polynomials cannot be evaluated at 0");
        let mut acc = BigRational::zero();
        for (k, c) in &self.terms {
            let mut p = BigRational::one();
            let e = k.unsigned_abs();
            for _ in 0..e {
                p *= x;
            }
            if *k < 0 {
                p = p.recip();
            }
            acc += c * p;
        }
        acc
    }

    /// `(exponent, rational-string)` pairs in descending exponent order, for
    /// the wire format.
    pub fn coeff_pairs(&self) -> Vec<(i64, String)> {
        self.terms
            .iter()
            .rev()
            .map(|(k, c)| (*k, fmt_rational(c)))
            .collect()
    }

    /// Rebuild from wire pairs; input is normalized (merged, zeros dropped).
    pub fn from_coeff_pairs(pairs: &[(i64, String)]) -> Result<Self, ParseLaurentError> {
        let mut out = Self::zero();
        for (k, s) in pairs {
            let c = BigRational::from_str(s).map_err(|_| ParseLaurentError {
                input: s.clone(),
                reason: "bad rational".into(),
            })?;
            out.add_term(*k, &c);
        }
        Ok(out)
    }

    fn add_term(&mut self, k: i64, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (*k, a * c))
                .collect(),
        }
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }
}

impl Add for &LaurentV {
    type Output = LaurentV;
    fn add(self, rhs: &LaurentV) -> LaurentV {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c);
        }
        out
    }
}

impl Sub for &LaurentV {
    type Output = LaurentV;
    fn sub(self, rhs: &LaurentV) -> LaurentV {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, &(-c.clone()));
        }
        out
    }
}

impl Mul for &LaurentV {
    type Output = LaurentV;
    fn mul(self, rhs: &LaurentV) -> LaurentV {
        let mut out = LaurentV::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.add_term(k1 + k2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &LaurentV {
    type Output = LaurentV;
    fn neg(self) -> LaurentV {
        LaurentV {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait for LaurentV {
            type Output = LaurentV;
            fn $method(self, rhs: LaurentV) -> LaurentV {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentV> for LaurentV {
            type Output = LaurentV;
            fn $method(self, rhs: &LaurentV) -> LaurentV {
                (&self).$method(rhs)
            }
        }
        impl $assign_trait<&LaurentV> for LaurentV {
            fn $assign_method(&mut self, rhs: &LaurentV) {
                *self = (&*self).$method(rhs);
            }
        }
    };
}

forward_owned_binop!(Add, add, AddAssign, add_assign);
forward_owned_binop!(Sub, sub, SubAssign, sub_assign);
forward_owned_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for LaurentV {
    type Output = LaurentV;
    fn neg(self) -> LaurentV {
        -&self
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text form: terms in descending exponent, coefficients always
/// written with an explicit `*`, e.g. `v^2 - 2 + 3*v^-1`.
impl fmt::Display for LaurentV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vpart = match *k {
                0 => String::new(),
                1 => "v".to_string(),
                e => format!("v^{}", e),
            };
            if vpart.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vpart)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), vpart)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid Laurent polynomial `{input}`: {reason}")]
pub struct ParseLaurentError {
    pub input: String,
    pub reason: String,
}

impl FromStr for LaurentV {
    type Err = ParseLaurentError;

    /// Accepts the `Display` form plus minor variations (`3v^2`, `q` is not
    /// accepted: the only variable is `v`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParseLaurentError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty string"));
        }
        // Split into signed terms at top level.
        let mut out = LaurentV::zero();
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = BigRational::one();
            while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            // A '-' directly after '^' belongs to the exponent.
            while i < bytes.len() && i > 0 && bytes[i - 1] == b'^' {
                i += 1;
                while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                    i += 1;
                }
            }
            let term = &compact[start..i];
            if term.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coeff_str, vexp) = match term.find('v') {
                None => (term, 0i64),
                Some(p) => {
                    let rest = &term[p + 1..];
                    let exp = if rest.is_empty() {
                        1
                    } else {
                        let rest = rest
                            .strip_prefix('^')
                            .ok_or_else(|| err("expected `^` after v"))?;
                        rest.parse::<i64>().map_err(|_| err("bad exponent"))?
                    };
                    let cs = term[..p].strip_suffix('*').unwrap_or(&term[..p]);
                    (cs, exp)
                }
            };
            let coeff = if coeff_str.is_empty() {
                BigRational::one()
            } else {
                BigRational::from_str(coeff_str).map_err(|_| err("bad coefficient"))?
            };
            out.add_term(vexp, &(sign * coeff));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn quadratic_coefficient_identities() {
        let q = LaurentV::q();
        let qm1 = LaurentV::q_minus_one();
        assert_eq!(&q - &LaurentV::one(), qm1);
        assert_eq!(q.as_unit(), Some((2, rat(1, 1))));
        assert_eq!(q.unit_inv().unwrap(), LaurentV::v_pow(-2));
        assert!(qm1.unit_inv().is_none());
    }

    #[test]
    fn eval_one_sums_coefficients() {
        let p = LaurentV::q_minus_one();
        assert!(p.eval_one().is_zero());
        let p = &LaurentV::v_pow(-3).scale(&rat(1, 2)) + &LaurentV::from_int(2);
        assert_eq!(p.eval_one(), rat(5, 2));
        assert_eq!(p.eval_at(&rat(2, 1)), rat(1, 16) + rat(2, 1));
    }

    #[test]
    fn display_and_parse_examples() {
        let p = &(&LaurentV::q() - &LaurentV::from_int(2)) + &LaurentV::monomial(-1, rat(3, 2));
        assert_eq!(p.to_string(), "v^2 - 2 + 3/2*v^-1");
        assert_eq!("v^2 - 2 + 3/2*v^-1".parse::<LaurentV>().unwrap(), p);
        assert_eq!("0".parse::<LaurentV>().unwrap(), LaurentV::zero());
        assert_eq!("-v".parse::<LaurentV>().unwrap(), -LaurentV::v());
        assert_eq!("3v^2".parse::<LaurentV>().unwrap(), LaurentV::monomial(2, rat(3, 1)));
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentV> {
        proptest::collection::vec(((-4i64..=4), (-5i64..=5), (1i64..=4)), 0..5).prop_map(|ts| {
            let mut p = LaurentV::zero();
            for (k, n, d) in ts {
                p += &LaurentV::monomial(k, rat(n, d));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_laws(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, LaurentV::zero());
            prop_assert_eq!(&a * &LaurentV::one(), a.clone());
        }

        #[test]
        fn parse_roundtrip(a in arb_laurent()) {
            prop_assert_eq!(a.to_string().parse::<LaurentV>().unwrap(), a);
        }
    }
}
