//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Polynomial with ascending coefficients; the zero polynomial has no
/// coefficients and the last stored coefficient is never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    /// The monomial `x`.
    pub fn x(field: Field) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    pub fn constant(c: Scalar) -> Poly {
        let field = c.field();
        Poly::from_vec(field, vec![c])
    }

    pub fn monomial(c: Scalar, k: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Poly::from_vec(field, coeffs)
    }

    /// `x - c`.
    pub fn linear_root(c: &Scalar) -> Poly {
        let f = c.field();
        Poly::from_vec(f, vec![-c, f.one()])
    }

    /// Builds a polynomial from ascending coefficients, checking that every
    /// coefficient lives in `field`.
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Result<Poly> {
        if let Some(c) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
        }
        Ok(Poly::from_vec(field, coeffs))
    }

    pub(crate) fn from_vec(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Poly {
        Poly::from_vec(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0, the bookkeeping
    /// convention used for grades.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    fn check(&self, other: &Poly) {
        if self.field != other.field {
            panic!("field mismatch: {} vs {}", self.field, other.field);
        }
    }

    fn check_result(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_result(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_result(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_result(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field);
        }
        Poly::from_vec(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { field: self.field, coeffs }
    }

    /// Monic normalization together with the removed unit, so that
    /// `unit * monic == self`. The zero polynomial yields `(0, 0)`.
    pub fn monic_parts(&self) -> (Scalar, Poly) {
        match self.leading() {
            None => (self.field.zero(), self.clone()),
            Some(lc) => {
                let inv = lc.inv().expect("leading coefficient is nonzero");
                (lc.clone(), self.scale(&inv))
            }
        }
    }

    pub fn monic(&self) -> Poly {
        self.monic_parts().1
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_i64(i as i64))
            .collect();
        Poly::from_vec(self.field, coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: `self = q * b + r` with `deg r < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.check_result(b)?;
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let inv = b.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + db] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * bc);
            }
            quot[k] = c;
        }
        rem.truncate(db);
        Ok((Poly::from_vec(self.field, quot), Poly::from_vec(self.field, rem)))
    }

    pub fn rem(&self, b: &Poly) -> Poly {
        self.divmod(b).expect("nonzero divisor").1
    }

    /// Quotient when `b` divides `self` exactly.
    pub fn exact_div(&self, b: &Poly) -> Option<Poly> {
        let (q, r) = self.divmod(b).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Monic GCD; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check(other);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic GCD with Bezout cofactors: `u*self + v*other = g`.
    pub fn gcd_extended(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check_result(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.leading().unwrap().inv()?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// Coefficient reversal with respect to grade `g`: `x^g * z(1/x)`.
    pub fn reversal(&self, g: usize) -> Result<Poly> {
        if self.deg0() > g {
            return Err(Error::GradeTooSmall { grade: g, degree: self.deg0() });
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let coeffs = (0..=g).map(|i| self.coeff(g - i)).collect();
        Ok(Poly::from_vec(self.field, coeffs))
    }

    /// Horner evaluation.
    pub fn evaluate(&self, c: &Scalar) -> Result<Scalar> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), c.field().to_string()));
        }
        Ok(self.eval(c))
    }

    pub(crate) fn eval(&self, c: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, a| &(&acc * c) + a)
    }

    /// Number of times `base` divides `self` and the remaining cofactor.
    /// For the zero polynomial returns `u32::MAX` and zero.
    pub fn valuation(&self, base: &Poly) -> (u32, Poly) {
        assert!(!base.is_constant(), "valuation base must be nonconstant");
        if self.is_zero() {
            return (u32::MAX, self.clone());
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.exact_div(base) {
            cur = q;
            k += 1;
        }
        (k, cur)
    }

    /// Order of vanishing at the field element `c`.
    pub fn order_at(&self, c: &Scalar) -> u32 {
        self.valuation(&Poly::linear_root(c)).0
    }

    /// Coefficients of `self` expanded in powers of `(x - c)`.
    pub fn taylor_coeffs(&self, c: &Scalar) -> Vec<Scalar> {
        let lin = Poly::linear_root(c);
        let mut out = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.divmod(&lin).expect("nonzero divisor");
            out.push(r.coeff(0));
            cur = q;
        }
        out
    }

    /// Over the rationals: the rational content and the primitive integer
    /// polynomial with positive leading coefficient, `self = content * prim`.
    pub fn primitive_integer(&self) -> Option<(BigRational, Vec<BigInt>)> {
        if self.is_zero() {
            return None;
        }
        let rats: Vec<&BigRational> = self.coeffs.iter().map(|c| c.as_rational()).collect::<Option<_>>()?;
        let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = rats.iter().map(|r| (*r * &lcm).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = ints.iter().map(|v| v / &g).collect();
        Some((BigRational::new(g, lcm), prim))
    }

    pub fn from_integers(field: Field, ints: &[BigInt]) -> Poly {
        Poly::from_vec(field, ints.iter().map(|v| field.from_bigint(v)).collect())
    }

    /// Canonical order: by degree, then lexicographically on ascending
    /// coefficients.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.canonical_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    /// Displays the polynomial in `var` with descending powers, e.g.
    /// `x^2 - 20*x`.
    pub fn display<'a>(&'a self, var: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, var }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.poly;
        if p.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in p.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, i),
            };
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display("x").fmt(f)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::from_vec(self.field, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::from_vec(self.field, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
