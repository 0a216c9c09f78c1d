//! Dense univariate polynomials over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Degree of a polynomial; the zero polynomial has degree `MinusInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial with coefficients in ascending degree, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        Polynomial { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: FieldElement) -> Self {
        Self::new(field, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(field: &Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `c x^k`.
    pub fn monomial(field: &Field, c: FieldElement, k: usize) -> Self {
        let mut v = vec![field.zero(); k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    /// `x - a`.
    pub fn linear(field: &Field, a: FieldElement) -> Self {
        Self::new(field, vec![field.neg(a), field.one()])
    }

    /// `prod (x - a_i)`.
    pub fn from_roots(field: &Field, roots: &[FieldElement]) -> Self {
        roots.iter().fold(Self::one(field), |acc, &a| acc.mul(&Self::linear(field, a)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.field.one()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree as an integer, `-1` for zero. Convenient for order arithmetic.
    pub fn degree_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading_coefficient(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient() == self.field.one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Self::new(f, v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Self::new(f, v)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let f = &self.field;
        if c.is_zero() {
            return Self::zero(f);
        }
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut v = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Self::new(f, v)
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![FieldElement::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        Self::new(&self.field, v)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let f = &self.field;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = divisor.coeffs.len() - 1;
        let lc_inv = f.inv(divisor.leading_coefficient())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lc_inv);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Malformed("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading_coefficient()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Inverse modulo `m`, if `self` and `m` are coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let f = &self.field;
        let (mut r0, mut r1) = (m.clone(), self.rem(m).ok()?);
        let (mut s0, mut s1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).ok()?;
            let s = s0.sub(&q.mul(&s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
        }
        if r0.degree_i64() != 0 {
            return None;
        }
        let inv = f.inv(r0.coeff(0)).ok()?;
        s0.scale(inv).rem(m).ok()
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let v = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c)).collect();
        Self::new(f, v)
    }

    /// Coefficients of `self(a + t)` as a polynomial in `t`.
    pub fn taylor_shift(&self, a: FieldElement) -> Self {
        let f = &self.field;
        let mut v = self.coeffs.clone();
        let n = v.len();
        // repeated synthetic division by (x - a)
        for i in 0..n {
            for j in (i..n - 1).rev() {
                v[j] = f.add(v[j], f.mul(a, v[j + 1]));
            }
        }
        Self::new(f, v)
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: FieldElement) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let shifted = self.taylor_shift(a);
        shifted.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn is_square_free(&self) -> bool {
        if self.is_constant() {
            return true;
        }
        self.gcd(&self.derivative()).is_constant()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Result<Self> {
        let mut result = Self::one(&self.field).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus)?;
            }
        }
        Ok(result)
    }

    /// Smallest degree of an irreducible factor, found by distinct-degree
    /// factorisation. `None` for constants.
    pub fn smallest_factor_degree(&self) -> Option<usize> {
        let deg = self.degree().finite()?;
        if deg == 0 {
            return None;
        }
        let q = self.field.size() as u64;
        let g = self.make_monic();
        let x = Self::x(&self.field);
        let mut xq = x.clone();
        for k in 1..=deg {
            xq = xq.pow_mod(q, &g).expect("nonzero modulus");
            if !g.gcd(&xq.sub(&x)).is_constant() {
                return Some(k);
            }
        }
        Some(deg)
    }

    /// Distinct roots in canonical order.
    pub fn roots(&self) -> Vec<FieldElement> {
        if self.is_zero() {
            return Vec::new();
        }
        self.field.elements().filter(|&a| self.eval(a).is_zero()).collect()
    }

    /// Renders with variable name `var`, highest degree first.
    pub fn render(&self, var: &str) -> String {
        let f = &self.field;
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coeff = f.render(c);
            parts.push(if i == 0 {
                coeff
            } else if c == f.one() {
                mono
            } else {
                format!("{coeff}*{mono}")
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.render("x"))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                Polynomial::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(f: &Field, n: i64) -> FieldElement {
        f.from_int(n)
    }

    #[test]
    fn zero_has_minus_infinity_degree() {
        let f = Field::prime(5).unwrap();
        assert_eq!(Polynomial::zero(&f).degree(), Degree::MinusInfinity);
        assert_eq!(Polynomial::new(&f, vec![fe(&f, 0), fe(&f, 0)]).degree(), Degree::MinusInfinity);
        assert!(Degree::MinusInfinity < Degree::Finite(0));
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = Field::prime(7).unwrap();
        let a = Polynomial::new(&f, [3, 0, 5, 1, 6].map(|n| fe(&f, n)).to_vec());
        let b = Polynomial::new(&f, [2, 4, 3].map(|n| fe(&f, n)).to_vec());
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn inverse_modulo() {
        let f = Field::prime(5).unwrap();
        let m = Polynomial::monomial(&f, f.one(), 4);
        let a = Polynomial::new(&f, [2, 1, 0, 3, 4].map(|n| fe(&f, n)).to_vec());
        let inv = a.inv_mod(&m).unwrap();
        assert!(inv.degree_i64() < 4);
        assert!(a.mul(&inv).rem(&m).unwrap().is_one());
        assert_eq!(Polynomial::x(&f).inv_mod(&m), None);
    }

    #[test]
    fn taylor_shift_matches_composition() {
        let f = Field::prime(5).unwrap();
        let a = Polynomial::new(&f, [1, 2, 3, 4].map(|n| fe(&f, n)).to_vec());
        let s = a.taylor_shift(fe(&f, 2));
        for t in f.elements() {
            assert_eq!(s.eval(t), a.eval(f.add(t, fe(&f, 2))));
        }
    }

    #[test]
    fn smallest_factor_degree_detects_irreducible_quadratic() {
        let f = Field::prime(3).unwrap();
        // x^2 + 1 is irreducible over F_3
        let g = Polynomial::new(&f, vec![fe(&f, 1), fe(&f, 0), fe(&f, 1)]);
        assert_eq!(g.smallest_factor_degree(), Some(2));
        let h = g.mul(&Polynomial::linear(&f, fe(&f, 2)));
        assert_eq!(h.smallest_factor_degree(), Some(1));
    }

    #[test]
    fn root_multiplicity_counts() {
        let f = Field::prime(2).unwrap();
        let x = Polynomial::x(&f);
        let xp1 = Polynomial::linear(&f, f.one());
        let g = x.pow(2).mul(&xp1.pow(3));
        assert_eq!(g.root_multiplicity(f.zero()), 2);
        assert_eq!(g.root_multiplicity(f.one()), 3);
        assert!(!g.is_square_free());
    }
}
