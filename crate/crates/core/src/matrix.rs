//! 2×2 matrices over (Q, v_p).

use std::fmt;
use std::ops::Mul;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{
    format_rational, parse_rational, rational_valuation, PrimeContext, Valuation, ValuedRational,
};

/// A general 2×2 matrix, row-major `[a, b, c, d]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    entries: [BigRational; 4],
    ctx: PrimeContext,
}

impl Matrix2 {
    pub fn new(entries: [BigRational; 4], ctx: PrimeContext) -> Self {
        Self { entries, ctx }
    }

    pub fn from_valued(entries: [ValuedRational; 4]) -> Result<Self> {
        let ctx = entries[0].context();
        for e in &entries[1..] {
            if e.context() != ctx {
                return Err(Error::ContextMismatch(ctx.p(), e.context().p()));
            }
        }
        let [a, b, c, d] = entries.map(ValuedRational::into_value);
        Ok(Self::new([a, b, c, d], ctx))
    }

    /// Convenience for literals: entries given as `(numerator, denominator)`.
    pub fn from_fractions(entries: [(i64, i64); 4], ctx: PrimeContext) -> Self {
        Self::new(
            entries.map(|(n, d)| BigRational::new(n.into(), d.into())),
            ctx,
        )
    }

    pub fn parse(rows: [[&str; 2]; 2], ctx: PrimeContext) -> Result<Self> {
        Ok(Self::new(
            [
                parse_rational(rows[0][0])?,
                parse_rational(rows[0][1])?,
                parse_rational(rows[1][0])?,
                parse_rational(rows[1][1])?,
            ],
            ctx,
        ))
    }

    pub fn identity(ctx: PrimeContext) -> Self {
        Self::new(
            [
                BigRational::one(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::one(),
            ],
            ctx,
        )
    }

    pub fn context(&self) -> PrimeContext {
        self.ctx
    }

    pub fn raw(&self) -> &[BigRational; 4] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> ValuedRational {
        ValuedRational::new(self.entries[2 * row + col].clone(), self.ctx)
    }

    pub fn det(&self) -> BigRational {
        let [a, b, c, d] = &self.entries;
        a * d - b * c
    }

    pub fn trace(&self) -> BigRational {
        &self.entries[0] + &self.entries[3]
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let [a, b, c, d] = &self.entries;
        Ok(Self::new(
            [d / &det, -b / &det, -c / &det, a / &det],
            self.ctx,
        ))
    }

    /// Smallest entry valuation (Infinity for the zero matrix).
    pub fn min_valuation(&self) -> Valuation {
        let p = self.ctx.p_big();
        self.entries
            .iter()
            .map(|e| rational_valuation(e, &p))
            .min()
            .expect("four entries")
    }

    /// All entries in the valuation ring Z_(p).
    pub fn is_integral(&self) -> bool {
        self.min_valuation().is_nonnegative()
    }

    pub fn is_scalar(&self) -> bool {
        let [a, b, c, d] = &self.entries;
        b.is_zero() && c.is_zero() && a == d
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.entries.clone().map(|e| e * s), self.ctx)
    }

    pub fn add(&self, other: &Self) -> Self {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        Self::new([a + e, b + f, c + g, d + h], self.ctx)
    }

    pub fn rows_text(&self) -> [[String; 2]; 2] {
        let e = &self.entries;
        [
            [format_rational(&e[0]), format_rational(&e[1])],
            [format_rational(&e[2]), format_rational(&e[3])],
        ]
    }
}

impl<'a> Mul<&'a Matrix2> for &'a Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: &'a Matrix2) -> Matrix2 {
        assert_eq!(self.ctx, rhs.ctx, "matrices over different primes");
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &rhs.entries;
        Matrix2::new(
            [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            self.ctx,
        )
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.rows_text();
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// An element of SL2(Q): a 2×2 matrix with determinant exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sl2Matrix(Matrix2);

impl Sl2Matrix {
    pub fn new(m: Matrix2) -> Result<Self> {
        let det = m.det();
        if det.is_one() {
            Ok(Self(m))
        } else {
            Err(Error::DeterminantNotOne(format_rational(&det)))
        }
    }

    pub fn from_fractions(entries: [(i64, i64); 4], ctx: PrimeContext) -> Result<Self> {
        Self::new(Matrix2::from_fractions(entries, ctx))
    }

    pub fn identity(ctx: PrimeContext) -> Self {
        Self(Matrix2::identity(ctx))
    }

    /// `diag(x, 1/x)`.
    pub fn diagonal(x: &BigRational, ctx: PrimeContext) -> Self {
        assert!(!x.is_zero());
        Self(Matrix2::new(
            [
                x.clone(),
                BigRational::zero(),
                BigRational::zero(),
                x.recip(),
            ],
            ctx,
        ))
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn context(&self) -> PrimeContext {
        self.0.ctx
    }

    pub fn entry(&self, row: usize, col: usize) -> ValuedRational {
        self.0.entry(row, col)
    }

    pub fn trace(&self) -> ValuedRational {
        ValuedRational::new(self.0.trace(), self.0.ctx)
    }

    /// Exact inverse `[[d, -b], [-c, a]]`.
    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = &self.0.entries;
        Self(Matrix2::new([d.clone(), -b, -c, a.clone()], self.0.ctx))
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_scalar() && self.0.entries[0].is_one()
    }

    /// ±identity.
    pub fn is_central(&self) -> bool {
        self.0.is_scalar()
    }

    /// `h g h^-1`.
    pub fn conjugate_by(&self, h: &Sl2Matrix) -> Self {
        Self(&(&h.0 * &self.0) * &h.inverse().0)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.context());
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }
}

impl<'a> Mul<&'a Sl2Matrix> for &'a Sl2Matrix {
    type Output = Sl2Matrix;
    fn mul(self, rhs: &'a Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix(&self.0 * &rhs.0)
    }
}

impl fmt::Display for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
