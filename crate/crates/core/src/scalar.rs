//! Exact scalar types: half-integers, signs, signatures and unitary
//! characters of `C^×`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Rational64;

use crate::error::ThetaError;

/// An element of `(1/2)·Z`, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub const fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub const fn from_int(value: i64) -> Self {
        Self { twice: 2 * value }
    }

    /// `numerator / 2`.
    pub const fn half(numerator: i64) -> Self {
        Self { twice: numerator }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// The integer value, if there is one.
    pub const fn to_int(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub const fn abs(self) -> Self {
        Self {
            twice: self.twice.abs(),
        }
    }

    /// Whether `self ∈ Z + offset_twice/4`, i.e. `self - offset_twice/2` is an integer.
    ///
    /// Used with `offset_twice = n - 1` to test `self ∈ Z + (n-1)/2`.
    pub const fn in_coset(self, offset_twice: i64) -> bool {
        (self.twice - offset_twice).rem_euclid(2) == 0
    }

    pub fn signum(self) -> i64 {
        self.twice.signum()
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = ThetaError;

    /// Accepts `"3"`, `"-2"`, `"7/2"`, `"-1/2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ThetaError::invalid(format!("not a half-integer: {s:?}"));
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad()),
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| bad())?;
                match den.trim() {
                    "1" => Ok(HalfInt::from_int(num)),
                    "2" => Ok(HalfInt::from_twice(num)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl From<i64> for HalfInt {
    fn from(value: i64) -> Self {
        HalfInt::from_int(value)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.twice += rhs.twice;
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl SubAssign for HalfInt {
    fn sub_assign(&mut self, rhs: HalfInt) {
        self.twice -= rhs.twice;
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

/// `±1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^exponent`.
    pub const fn pow_neg_one(exponent: i64) -> Self {
        if exponent.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub const fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(value: i64) -> Result<Self, ThetaError> {
        match value {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(ThetaError::invalid(format!(
                "sign must be +1 or -1, got {value}"
            ))),
        }
    }

    pub const fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Signature `(p, q)` of a Hermitian form; names the group `U(p, q)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub const fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub const fn dim(self) -> usize {
        self.p + self.q
    }

    pub const fn swapped(self) -> Self {
        Self {
            p: self.q,
            q: self.p,
        }
    }

    /// All signatures of total dimension `dim`, in order of decreasing `p`.
    pub fn all_of_dim(dim: usize) -> impl Iterator<Item = Signature> {
        (0..=dim).rev().map(move |p| Signature::new(p, dim - p))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U({},{})", self.p, self.q)
    }
}

impl FromStr for Signature {
    type Err = ThetaError;

    /// Parses `"R,S"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ThetaError::invalid(format!("signature must look like P,Q: {s:?}"));
        let (p, q) = s.split_once(',').ok_or_else(bad)?;
        Ok(Signature::new(
            p.trim().parse().map_err(|_| bad())?,
            q.trim().parse().map_err(|_| bad())?,
        ))
    }
}

/// The sign `ε(V_{p,q}) = (-1)^{(p-q)(p-q-1)/2}` of the Hermitian space of
/// signature `(p, q)`.
pub fn epsilon_of_space(p: usize, q: usize) -> Sign {
    Sign::pow_neg_one(space_sign_exponent(p as i64 - q as i64))
}

/// `d(d-1)/2` for `d = p - q`.
pub(crate) fn space_sign_exponent(diff: i64) -> i64 {
    diff * (diff - 1) / 2
}

/// The unitary character `z ↦ (z/|z|)^weight · |z|^{2i·continuous}` of `C^×`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct UnitaryCharacter {
    pub weight: i64,
    pub continuous: Rational64,
}

/// Outcome of [`character_csd_sign`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Selfduality {
    NotConjugateSelfdual,
    ConjugateSelfdual(Sign),
}

impl UnitaryCharacter {
    pub fn new(weight: i64, continuous: Rational64) -> Self {
        Self { weight, continuous }
    }

    /// A character trivial on `|z|`.
    pub fn of_weight(weight: i64) -> Self {
        Self::new(weight, Rational64::from_integer(0))
    }

    /// `χ_κ(z) = (z/|z|)^{2κ}`.
    pub fn kappa(kappa: HalfInt) -> Self {
        Self::of_weight(kappa.twice())
    }

    pub fn is_conjugate_selfdual(&self) -> bool {
        *self.continuous.numer() == 0
    }

    /// `ξ̌(z) = ξ(z̄)^{-1}`: same weight, continuous part negated.
    pub fn conjugate_dual(&self) -> Self {
        Self::new(self.weight, -self.continuous)
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.weight, -self.continuous)
    }

    /// Twist by the weight-`shift` character.
    pub fn twisted(&self, shift: i64) -> Self {
        Self::new(self.weight + shift, self.continuous)
    }

    /// Whether this character may appear as an inducing `ξ` for a group of
    /// total dimension `n`: it must not be conjugate-selfdual of sign `(-1)^{n-1}`.
    pub fn admissible_for_dim(&self, n: usize) -> bool {
        character_csd_sign(self) != Selfduality::ConjugateSelfdual(Sign::pow_neg_one(n as i64 - 1))
    }
}

impl Mul for UnitaryCharacter {
    type Output = UnitaryCharacter;
    fn mul(self, rhs: UnitaryCharacter) -> UnitaryCharacter {
        UnitaryCharacter::new(self.weight + rhs.weight, self.continuous + rhs.continuous)
    }
}

impl PartialOrd for UnitaryCharacter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UnitaryCharacter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then_with(|| self.continuous.cmp(&other.continuous))
    }
}

impl fmt::Display for UnitaryCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ξ[{}; {}]", self.weight, self.continuous)
    }
}

/// Conjugate-selfduality of `ch` and, if selfdual, the sign of its
/// restriction to `R^×`.
pub fn character_csd_sign(ch: &UnitaryCharacter) -> Selfduality {
    if ch.is_conjugate_selfdual() {
        Selfduality::ConjugateSelfdual(Sign::pow_neg_one(ch.weight))
    } else {
        Selfduality::NotConjugateSelfdual
    }
}

/// The fixed characters `χ_V` (weight `m0`) and `χ_W` (weight `n0`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Convention {
    pub m0: i64,
    pub n0: i64,
}

impl Convention {
    pub const fn new(m0: i64, n0: i64) -> Self {
        Self { m0, n0 }
    }

    /// The convention for lifting in the opposite direction.
    pub const fn reversed(self) -> Self {
        Self {
            m0: self.n0,
            n0: self.m0,
        }
    }

    /// `m0/2`, the shift removed from source parameters.
    pub const fn source_shift(self) -> HalfInt {
        HalfInt::from_twice(self.m0)
    }

    /// `n0/2`, the shift added to lifted parameters.
    pub const fn target_shift(self) -> HalfInt {
        HalfInt::from_twice(self.n0)
    }

    pub fn check_target(self, m: usize) -> Result<(), ThetaError> {
        if (self.m0 - m as i64).rem_euclid(2) != 0 {
            return Err(ThetaError::invalid(format!(
                "m0 = {} must have the parity of the target dimension {m}",
                self.m0
            )));
        }
        Ok(())
    }

    pub fn check_source(self, n: usize) -> Result<(), ThetaError> {
        if (self.n0 - n as i64).rem_euclid(2) != 0 {
            return Err(ThetaError::invalid(format!(
                "n0 = {} must have the parity of the source dimension {n}",
                self.n0
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_sign_examples() {
        assert_eq!(epsilon_of_space(1, 0), Sign::Plus);
        assert_eq!(epsilon_of_space(2, 0), Sign::Minus);
        assert_eq!(epsilon_of_space(1, 1), Sign::Plus);
    }

    #[test]
    fn space_sign_swap_identity() {
        for p in 0..=8 {
            for q in 0..=8 {
                let lhs = epsilon_of_space(p, q) * epsilon_of_space(q, p);
                assert_eq!(lhs, Sign::pow_neg_one(p as i64 - q as i64), "({p},{q})");
            }
        }
    }

    #[test]
    fn csd_examples() {
        let zero = Rational64::from_integer(0);
        assert_eq!(
            character_csd_sign(&UnitaryCharacter::new(4, zero)),
            Selfduality::ConjugateSelfdual(Sign::Plus)
        );
        assert_eq!(
            character_csd_sign(&UnitaryCharacter::new(3, zero)),
            Selfduality::ConjugateSelfdual(Sign::Minus)
        );
        assert_eq!(
            character_csd_sign(&UnitaryCharacter::new(0, Rational64::from_integer(1))),
            Selfduality::NotConjugateSelfdual
        );
    }

    #[test]
    fn half_int_parsing_and_display() {
        assert_eq!("7/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(7));
        assert_eq!("-3".parse::<HalfInt>().unwrap(), HalfInt::from_int(-3));
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt::from_twice(-5).to_string(), "-5/2");
        assert_eq!(HalfInt::from_twice(6).to_string(), "3");
    }

    #[test]
    fn coset_membership() {
        // Z + (n-1)/2 with n = 2 is Z + 1/2.
        assert!(HalfInt::half(1).in_coset(1));
        assert!(HalfInt::half(-3).in_coset(1));
        assert!(!HalfInt::from_int(0).in_coset(1));
        assert!(HalfInt::from_int(0).in_coset(0));
    }

    #[test]
    fn signature_parse() {
        assert_eq!("3,1".parse::<Signature>().unwrap(), Signature::new(3, 1));
        assert!("3;1".parse::<Signature>().is_err());
    }
}
