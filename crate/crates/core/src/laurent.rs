//! Laurent polynomials in `v` with arbitrary-precision integer coefficients.
//!
//! Every coefficient ring in this crate is `Z[v, v^-1]`. Values are kept in
//! canonical form: the coefficient map never stores a zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Z[v, v^-1]`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `v`
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    /// `v^-1`
    pub fn v_inv() -> Self {
        Self::monomial(1, -1)
    }

    /// `c * v^exp`
    pub fn monomial(c: impl Into<BigInt>, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c.into());
        p
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// `v + v^-1`, the quantum two.
    pub fn quantum_two() -> Self {
        Self::from_terms([(-1, 1), (1, 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Coefficient of `v^exp` (zero if absent).
    pub fn coeff(&self, exp: i32) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// True iff this lies in `v Z[v]` (every exponent is at least one).
    pub fn in_v_z_v(&self) -> bool {
        self.min_degree().is_none_or(|d| d >= 1)
    }

    fn add_term(&mut self, exp: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(exp) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    /// The involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(e, c)| self.coeffs.get(&-e) == Some(c))
    }

    /// Exact division in `Z[v, v^-1]` by leading-term elimination from the
    /// top exponent.
    pub fn divide_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        let (Some(b_top), Some(b_bot)) = (divisor.max_degree(), divisor.min_degree()) else {
            return Err(Error::DivisionByZero);
        };
        let Some(a_bot) = self.min_degree() else {
            return Ok(Self::zero());
        };
        let lead = &divisor.coeffs[&b_top];
        let floor = a_bot - b_bot;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r_top) = rem.max_degree() {
            let shift = r_top - b_top;
            if shift < floor {
                return Err(Error::NotDivisible);
            }
            let (q, r) = rem.coeffs[&r_top].div_rem(lead);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            for (e, c) in &divisor.coeffs {
                rem.add_term(e + shift, -(c * &q));
            }
            quot.add_term(shift, q);
        }
        Ok(quot)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Ascending exponents, e.g. `v^-2 + 2 + v^2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match *e {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "v")?,
                1 => write!(f, "{mag}v")?,
                _ if unit => write!(f, "v^{e}")?,
                _ => write!(f, "{mag}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        let mut acc = LaurentPoly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

// JSON: a list of [exponent, coefficient] pairs sorted by exponent.
// Coefficients outside the i64 range are written as decimal strings.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            match c.to_i64() {
                Some(small) => seq.serialize_element(&(e, small))?,
                None => seq.serialize_element(&(e, c.to_string()))?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonCoeff {
    Int(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PairsVisitor;
        impl<'de> Visitor<'de> for PairsVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a list of [exponent, coefficient] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<LaurentPoly, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((e, c)) = seq.next_element::<(i32, JsonCoeff)>()? {
                    let c = match c {
                        JsonCoeff::Int(i) => BigInt::from(i),
                        JsonCoeff::Text(s) => s.parse::<BigInt>().map_err(de::Error::custom)?,
                    };
                    p.add_term(e, c);
                }
                Ok(p)
            }
        }
        deserializer.deserialize_seq(PairsVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn ring_examples() {
        let q2 = LaurentPoly::quantum_two();
        assert_eq!(&q2 * &LaurentPoly::v(), lp(&[(2, 1), (0, 1)]));
        assert_eq!(&lp(&[(0, 1), (2, 1)]) + &lp(&[(0, -1)]), lp(&[(2, 1)]));
        assert_eq!(q2.pow(2), lp(&[(2, 1), (0, 2), (-2, 1)]));
        assert_eq!(q2.shift(1), &q2 * &LaurentPoly::v());
        assert!((&q2 - &q2).is_zero());
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let p = lp(&[(3, 2), (3, -2), (1, 0)]);
        assert!(p.is_zero());
        assert_eq!(p, LaurentPoly::zero());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(LaurentPoly::v().bar(), LaurentPoly::v_inv());
        assert_eq!(lp(&[(0, 1), (2, 1)]).bar(), lp(&[(0, 1), (-2, 1)]));
        assert_eq!(LaurentPoly::quantum_two().bar(), LaurentPoly::quantum_two());
        assert!(LaurentPoly::quantum_two().is_bar_invariant());
    }

    #[test]
    fn divide_examples() {
        let q2 = LaurentPoly::quantum_two();
        assert_eq!(
            lp(&[(0, 1), (2, 1)]).divide_exact(&q2).unwrap(),
            LaurentPoly::v()
        );
        assert_eq!(
            LaurentPoly::zero().divide_exact(&q2).unwrap(),
            LaurentPoly::zero()
        );
        assert_eq!(
            lp(&[(0, 1), (1, 1)]).divide_exact(&q2),
            Err(Error::NotDivisible)
        );
        assert_eq!(
            q2.divide_exact(&LaurentPoly::zero()),
            Err(Error::DivisionByZero)
        );
        // integer content must divide too
        assert_eq!(
            lp(&[(0, 3)]).divide_exact(&lp(&[(0, 2)])),
            Err(Error::NotDivisible)
        );
    }

    #[test]
    fn not_divisible_by_exhaustive_candidates() {
        // Any quotient of (1 + v) by (v + v^-1) would have support in [1, 0]
        // (empty range), so no candidate with small coefficients works.
        let a = lp(&[(0, 1), (1, 1)]);
        let b = LaurentPoly::quantum_two();
        for lo in -3..=3 {
            for hi in lo..=3 {
                for c0 in -2..=2i64 {
                    for c1 in -2..=2i64 {
                        let q = lp(&[(lo, c0), (hi, c1)]);
                        assert_ne!(&q * &b, a);
                    }
                }
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(lp(&[(2, 1), (0, 2), (-2, 1)]).to_string(), "v^-2 + 2 + v^2");
        assert_eq!(lp(&[(0, 1), (2, 1)]).to_string(), "1 + v^2");
        assert_eq!(lp(&[(-1, 1), (1, -3)]).to_string(), "v^-1 - 3v");
        assert_eq!(lp(&[(1, -1)]).to_string(), "-v");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_pairs() {
        let p = lp(&[(2, 1), (-1, -4)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[-1,-4],[2,1]]");
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let big = LaurentPoly::monomial(BigInt::from(i64::MAX) * 4, 0);
        let back: LaurentPoly =
            serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(back, big);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-4i32..5, -5i64..6), 0..5).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn bar_is_involutive(a in arb_poly()) {
            prop_assert_eq!(a.bar().bar(), a);
        }

        #[test]
        fn bar_is_multiplicative(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        }

        #[test]
        fn divide_inverts_multiply(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).divide_exact(&b).unwrap(), a);
        }

        #[test]
        fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }
}
