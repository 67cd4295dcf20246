//! Exact scalars: rational numbers, or rational functions in the parameter κ.
//!
//! All arithmetic is exact; there is no floating point anywhere in the
//! crate. Rational functions are kept reduced with a monic denominator.
//! Mixing the two kinds promotes to rational functions.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Dense univariate polynomial over ℚ in the parameter κ.
/// Invariant: no trailing zero coefficients (zero = empty vec).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    pub coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial κ.
    pub fn kappa() -> Self {
        QPoly {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            coeffs.push(a + b);
        }
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, rhs: &QPoly) -> QPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; panics only if `rhs` is zero.
    pub fn div_rem(&self, rhs: &QPoly) -> (QPoly, QPoly) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        let dlead = rhs.leading();
        while !rem.is_zero() && rem.degree() >= rhs.degree() {
            let shift = rem.degree() - rhs.degree();
            let c = rem.leading() / dlead.clone();
            let mut term = vec![BigRational::zero(); shift + 1];
            term[shift] = c;
            let term = QPoly { coeffs: term };
            quot = quot.add(&term);
            rem = rem.sub(&term.mul(rhs));
        }
        (quot, rem)
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, rhs: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let inv = BigRational::one() / self.leading();
        self.scale(&inv)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Formal derivative with respect to κ.
    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => {
                    if a.is_one() {
                        write!(f, "k")?;
                    } else {
                        write!(f, "{a}*k")?;
                    }
                }
                _ => {
                    if a.is_one() {
                        write!(f, "k^{i}")?;
                    } else {
                        write!(f, "{a}*k^{i}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Reduced rational function in κ with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    pub num: QPoly,
    pub den: QPoly,
}

impl RatFun {
    fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun {
                num: QPoly::zero(),
                den: QPoly::constant(BigRational::one()),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading();
        let inv = BigRational::one() / lead;
        Ok(RatFun {
            num: num.scale(&inv),
            den: den.monic(),
        })
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

/// An element of the exact base field: a rational number or a rational
/// function in κ. All operations are exact; division by zero is an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Fun(RatFun),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// The generic parameter κ.
    pub fn kappa() -> Self {
        Scalar::Fun(RatFun {
            num: QPoly::kappa(),
            den: QPoly::constant(BigRational::one()),
        })
    }

    /// Parses "p" or "p/q".
    pub fn parse_rational(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p = BigInt::from_str(p).map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
        let q = BigInt::from_str(q).map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Rat(BigRational::new(p, q)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fun(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fun(f) => f.num == f.den,
        }
    }

    fn to_fun(&self) -> RatFun {
        match self {
            Scalar::Rat(r) => RatFun {
                num: QPoly::constant(r.clone()),
                den: QPoly::constant(BigRational::one()),
            },
            Scalar::Fun(f) => f.clone(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rat(r) => Ok(Scalar::Rat(BigRational::one() / r.clone())),
            Scalar::Fun(f) => Ok(Scalar::Fun(RatFun::new(f.den.clone(), f.num.clone())?)),
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self.clone() * rhs.inv()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        Ok(acc)
    }

    /// True when the scalar is a nonnegative rational number (the excluded
    /// range for κ).
    pub fn is_nonneg_rational(&self) -> bool {
        match self {
            Scalar::Rat(r) => !r.is_negative(),
            Scalar::Fun(_) => false,
        }
    }

    /// Exact rational value, if this scalar is numeric.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Fun(_) => None,
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Fun(rf) => {
                if rf.den.degree() == 0 && rf.den.leading().is_one() {
                    write!(f, "{}", rf.num)
                } else {
                    write!(f, "({})/({})", rf.num, rf.den)
                }
            }
        }
    }
}

/// Deterministic ordering used only for canonical data layouts (BTreeMap
/// keys, stable sorting); not a numeric order on ℚ(κ).
impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.to_string().cmp(&other.to_string()))
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        match (&self, &rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => {
                let a = self.to_fun();
                let b = rhs.to_fun();
                let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
                let den = a.den.mul(&b.den);
                Scalar::Fun(RatFun::new(num, den).expect("nonzero denominator"))
            }
        }
    }
}

impl<'a> Add<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self + rhs.clone()
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = self.clone() + rhs;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self + (-rhs)
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = self.clone() - rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Fun(f) => Scalar::Fun(RatFun {
                num: f.num.neg(),
                den: f.den,
            }),
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        match (&self, &rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => {
                let a = self.to_fun();
                let b = rhs.to_fun();
                Scalar::Fun(
                    RatFun::new(a.num.mul(&b.num), a.den.mul(&b.den)).expect("nonzero denominator"),
                )
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self * rhs.clone()
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = self.clone() * rhs;
    }
}

/// Generalized binomial coefficient C(n, i) for integer n (possibly
/// negative) and i ≥ 0, as an exact scalar.
pub fn binomial(n: i64, i: u64) -> Scalar {
    let mut num = BigRational::one();
    for j in 0..i {
        num *= BigRational::from_integer(BigInt::from(n - j as i64));
        num /= BigRational::from_integer(BigInt::from(j as i64 + 1));
    }
    Scalar::Rat(num)
}
