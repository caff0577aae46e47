//! Exact arithmetic in the field of rationals equipped with a p-adic valuation.
//!
//! Every [`ValuedRational`] carries the [`PrimeContext`] it lives in. Mixing
//! values from different contexts in arithmetic is a programming error and
//! panics; the public entry points that accept user data check contexts and
//! return [`Error::ContextMismatch`] instead.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The prime p defining the valuation. The uniformizer is p itself and the
/// residue field is F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeContext {
    p: u64,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(Self { p })
        } else {
            Err(Error::PrimeNotPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// p^k as an exact rational; k may be negative.
    pub fn power(&self, k: i64) -> BigRational {
        let base = BigInt::from(self.p).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            BigRational::from_integer(base)
        } else {
            BigRational::new(BigInt::one(), base)
        }
    }
}

impl fmt::Display for PrimeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// Deterministic Miller-Rabin; the base set is exact for every 64-bit input.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Value of the valuation: an integer, or +infinity for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        self >= Valuation::Finite(0)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// Exponent of p in a nonzero integer.
pub(crate) fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

/// Valuation of a bare rational; shared by the hot loops that avoid wrapping.
pub(crate) fn rational_valuation(x: &BigRational, p: &BigInt) -> Valuation {
    if x.is_zero() {
        Valuation::Infinity
    } else {
        Valuation::Finite(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
    }
}

/// An exact rational number together with the prime that values it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuedRational {
    value: BigRational,
    ctx: PrimeContext,
}

impl ValuedRational {
    pub fn new(value: BigRational, ctx: PrimeContext) -> Self {
        Self { value, ctx }
    }

    pub fn from_integer(n: impl Into<BigInt>, ctx: PrimeContext) -> Self {
        Self::new(BigRational::from_integer(n.into()), ctx)
    }

    /// `num/den` in lowest terms. Panics when `den` is zero.
    pub fn from_fraction(
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
        ctx: PrimeContext,
    ) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), ctx)
    }

    pub fn zero(ctx: PrimeContext) -> Self {
        Self::new(BigRational::zero(), ctx)
    }

    pub fn one(ctx: PrimeContext) -> Self {
        Self::new(BigRational::one(), ctx)
    }

    /// p^k.
    pub fn prime_power(k: i64, ctx: PrimeContext) -> Self {
        Self::new(ctx.power(k), ctx)
    }

    /// Parses `"a/b"` or `"a"` with an optional leading minus.
    pub fn parse(text: &str, ctx: PrimeContext) -> Result<Self> {
        parse_rational(text).map(|v| Self::new(v, ctx))
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn into_value(self) -> BigRational {
        self.value
    }

    pub fn context(&self) -> PrimeContext {
        self.ctx
    }

    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn valuation(&self) -> Valuation {
        rational_valuation(&self.value, &self.ctx.p_big())
    }

    /// True when the value lies in the valuation ring Z_(p).
    pub fn is_integral(&self) -> bool {
        !self.value.denom().is_multiple_of(&self.ctx.p_big())
    }

    /// Image in the residue field F_p.
    pub fn residue(&self) -> Result<u64> {
        if let Valuation::Finite(v) = self.valuation() {
            if v < 0 {
                return Err(Error::NegativeValuation(v));
            }
        }
        let p = self.ctx.p_big();
        let den_inv = self
            .value
            .denom()
            .modinv(&p)
            .expect("denominator is a unit when the valuation is nonnegative");
        let r = (self.value.numer() * den_inv).mod_floor(&p);
        Ok(r.to_u64().expect("residue is below p"))
    }

    /// `min(0, v(x))`, with `min(0, inf) = 0`.
    pub fn loc_min(&self) -> i64 {
        match self.valuation() {
            Valuation::Finite(v) => v.min(0),
            Valuation::Infinity => 0,
        }
    }

    /// Whether the value is a square in the completion Q_p.
    pub fn is_padic_square(&self) -> Result<bool> {
        let v = self.valuation().finite().ok_or(Error::ZeroInput)?;
        if v.rem_euclid(2) != 0 {
            return Ok(false);
        }
        let unit = &self.value / self.ctx.power(v);
        let (num, den) = (unit.numer(), unit.denom());
        if self.ctx.p == 2 {
            // An odd 2-adic unit is a square iff it is 1 mod 8; den^2 = 1 mod 8.
            let r = (num * den).mod_floor(&BigInt::from(8));
            return Ok(r == BigInt::one());
        }
        let p = self.ctx.p_big();
        let u = (num * den).mod_floor(&p);
        let euler = u.modpow(&((&p - 1u32) / 2u32), &p);
        Ok(euler.is_one())
    }

    /// Reciprocal; panics on zero.
    pub fn recip(&self) -> Self {
        Self::new(self.value.recip(), self.ctx)
    }

    pub fn abs(&self) -> Self {
        Self::new(self.value.abs(), self.ctx)
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    /// Whether the value is the square of a rational number.
    pub fn is_rational_square(&self) -> bool {
        rational_sqrt(&self.value).is_some()
    }

    pub fn sqrt_rational(&self) -> Option<Self> {
        rational_sqrt(&self.value).map(|r| Self::new(r, self.ctx))
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.ctx, other.ctx,
            "arithmetic between different prime contexts"
        );
    }
}

pub(crate) fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidRational(text.to_string());
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a, b),
        None => (body, "1"),
    };
    if !digits(num) || !digits(den) {
        return Err(bad());
    }
    let mut n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    if neg {
        n = -n;
    }
    Ok(BigRational::new(n, d))
}

/// Canonical literal: `"a"` for integers, `"a/b"` otherwise.
pub(crate) fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for ValuedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.value))
    }
}

impl FromStr for PrimeContext {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let p: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRational(s.to_string()))?;
        PrimeContext::new(p)
    }
}

impl PartialOrd for ValuedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.ctx == other.ctx).then(|| self.value.cmp(&other.value))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a ValuedRational> for &'a ValuedRational {
            type Output = ValuedRational;
            fn $method(self, rhs: &'a ValuedRational) -> ValuedRational {
                self.check(rhs);
                ValuedRational::new((&self.value).$method(&rhs.value), self.ctx)
            }
        }
        impl $trait<ValuedRational> for ValuedRational {
            type Output = ValuedRational;
            fn $method(self, rhs: ValuedRational) -> ValuedRational {
                self.check(&rhs);
                ValuedRational::new(self.value.$method(rhs.value), self.ctx)
            }
        }
        impl<'a> $trait<&'a ValuedRational> for ValuedRational {
            type Output = ValuedRational;
            fn $method(self, rhs: &'a ValuedRational) -> ValuedRational {
                self.check(rhs);
                ValuedRational::new(self.value.$method(&rhs.value), self.ctx)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ValuedRational {
    type Output = ValuedRational;
    fn neg(self) -> ValuedRational {
        ValuedRational::new(-self.value, self.ctx)
    }
}

impl Neg for &ValuedRational {
    type Output = ValuedRational;
    fn neg(self) -> ValuedRational {
        ValuedRational::new(-&self.value, self.ctx)
    }
}
