//! Arithmetic in the prime field `F_p`.
//!
//! Matrices store bare residues and go through [`FieldSpec`] for arithmetic;
//! [`PrimeFieldElement`] carries its modulus and is the checked, public-facing
//! value type.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A prime modulus `2 <= p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec { p: 2 }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1u64 << 31)).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { p: p as u32 })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Canonical residue of an arbitrary integer.
    pub fn reduce(&self, value: i64) -> u32 {
        value.rem_euclid(self.p as i64) as u32
    }

    pub fn element(&self, value: i64) -> PrimeFieldElement {
        PrimeFieldElement {
            value: self.reduce(value),
            p: self.p,
        }
    }

    pub fn zero(&self) -> PrimeFieldElement {
        self.element(0)
    }

    pub fn one(&self) -> PrimeFieldElement {
        self.element(1)
    }

    /// Iterates over every element of the field in residue order.
    pub fn elements(&self) -> impl Iterator<Item = PrimeFieldElement> + '_ {
        (0..self.p).map(move |value| PrimeFieldElement { value, p: self.p })
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Inverse by the extended Euclidean algorithm.
    pub(crate) fn inv_raw(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero(self.p));
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce(t0))
    }
}

/// A residue in `[0, p)` tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeFieldElement {
    value: u32,
    p: u32,
}

impl PrimeFieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<FieldSpec> {
        if self.p != other.p {
            return Err(Error::MixedField(self.p, other.p));
        }
        Ok(self.field())
    }

    pub fn try_add(self, other: Self) -> Result<Self> {
        let f = self.same_field(&other)?;
        Ok(Self {
            value: f.add_raw(self.value, other.value),
            p: self.p,
        })
    }

    pub fn try_sub(self, other: Self) -> Result<Self> {
        self.try_add(-other)
    }

    pub fn try_mul(self, other: Self) -> Result<Self> {
        let f = self.same_field(&other)?;
        Ok(Self {
            value: f.mul_raw(self.value, other.value),
            p: self.p,
        })
    }

    pub fn inv(self) -> Result<Self> {
        Ok(Self {
            value: self.field().inv_raw(self.value)?,
            p: self.p,
        })
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Neg for PrimeFieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: self.field().neg_raw(self.value),
            p: self.p,
        }
    }
}

// Operator forms panic on mixed fields; the `try_*` methods report it instead.
impl Add for PrimeFieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(rhs).expect("mixed-field addition")
    }
}

impl Sub for PrimeFieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(rhs).expect("mixed-field subtraction")
    }
}

impl Mul for PrimeFieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(rhs).expect("mixed-field multiplication")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn small_examples() {
        let f2 = f(2);
        assert_eq!(f2.element(1) + f2.element(1), f2.zero());
        assert_eq!(-f2.element(1), f2.element(1));
        assert_eq!(f2.element(1).inv().unwrap(), f2.one());

        let f5 = f(5);
        assert_eq!((f5.element(3) + f5.element(4)).value(), 2);
        assert_eq!((f5.element(2) * f5.element(3)).value(), 1);
        assert_eq!(f5.element(2).inv().unwrap().value(), 3);

        let f7 = f(7);
        assert_eq!(f7.element(3).inv().unwrap().value(), 5);
    }

    #[test]
    fn inverse_matches_brute_force() {
        for p in [2u64, 3, 5, 7, 11, 13, 101] {
            let field = f(p);
            for a in field.elements().skip(1) {
                let brute = field.elements().find(|b| (a * *b).value() == 1).unwrap();
                assert_eq!(a.inv().unwrap(), brute);
            }
        }
    }

    #[test]
    fn identities() {
        let field = f(13);
        for a in field.elements() {
            assert_eq!(a + field.zero(), a);
            assert_eq!(a * field.one(), a);
            assert_eq!(-(-a), a);
            assert!((a + (-a)).is_zero());
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(FieldSpec::new(4), Err(Error::NotPrime(4)));
        assert_eq!(FieldSpec::new(1), Err(Error::ModulusOutOfRange(1)));
        assert_eq!(FieldSpec::new(0), Err(Error::ModulusOutOfRange(0)));
        assert_eq!(
            FieldSpec::new(1 << 31),
            Err(Error::ModulusOutOfRange(1 << 31))
        );
        assert!(FieldSpec::new(2_147_483_647).is_ok());
        assert_eq!(
            FieldSpec::new(2_147_483_645),
            Err(Error::NotPrime(2_147_483_645))
        );
    }

    #[test]
    fn mixed_fields_and_zero_division() {
        let a = f(3).element(1);
        let b = f(5).element(1);
        assert_eq!(a.try_add(b), Err(Error::MixedField(3, 5)));
        assert_eq!(a.try_mul(b), Err(Error::MixedField(3, 5)));
        assert_eq!(f(7).zero().inv(), Err(Error::DivisionByZero(7)));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [2u64, 3, 5, 7, 11] {
            let field = f(p);
            let all: Vec<_> = field.elements().collect();
            for &a in &all {
                for &b in &all {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for &c in &all {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn field_axioms_random(
            p in prop::sample::select(vec![65_537u64, 1_000_003, 2_147_483_647]),
            a in any::<i64>(), b in any::<i64>(), c in any::<i64>(),
        ) {
            let field = f(p);
            let (a, b, c) = (field.element(a), field.element(b), field.element(c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a - a, field.zero());
            if !a.is_zero() {
                prop_assert_eq!(a * a.inv().unwrap(), field.one());
            }
        }
    }
}
