//! Rational functions over a finite field in canonical form, with orders and
//! partial fractions.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Polynomial;

/// A point of the projective line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(FieldElement),
    Infinity,
}

/// Vanishing order; the zero function has order `PlusInfinity` everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(i64),
    PlusInfinity,
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::PlusInfinity => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::PlusInfinity => write!(f, "+inf"),
        }
    }
}

/// `numerator / denominator` with coprime parts and a monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = den.field().clone();
        if num.is_zero() {
            return Ok(Self::zero(&field));
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g)?;
        let mut den = den.div_exact(&g)?;
        let lc = field.inv(den.leading_coefficient())?;
        num = num.scale(lc);
        den = den.scale(lc);
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.field());
        RationalFunction { num: p, den }
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_poly(Polynomial::zero(field))
    }

    pub fn one(field: &Field) -> Self {
        Self::from_poly(Polynomial::one(field))
    }

    pub fn constant(field: &Field, c: FieldElement) -> Self {
        Self::from_poly(Polynomial::constant(field, c))
    }

    pub fn x(field: &Field) -> Self {
        Self::from_poly(Polynomial::x(field))
    }

    /// `c / (x - a)^k`.
    pub fn pole_term(field: &Field, c: FieldElement, a: FieldElement, k: u64) -> Self {
        Self::new(Polynomial::constant(field, c), Polynomial::linear(field, a).pow(k)).expect("nonzero denominator")
    }

    /// `c / prod (x - a_i)^{m_i}`.
    pub fn from_pole_orders(field: &Field, c: FieldElement, poles: &[(FieldElement, u64)]) -> Self {
        let den = poles.iter().fold(Polynomial::one(field), |acc, &(a, m)| acc.mul(&Polynomial::linear(field, a).pow(m)));
        Self::new(Polynomial::constant(field, c), den).expect("nonzero denominator")
    }

    pub fn field(&self) -> &Field {
        self.den.field()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone()).expect("nonzero");
        }
        Self::new(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den)).expect("nonzero")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero")
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::new(n, self.den.mul(&self.den)).expect("nonzero")
    }

    /// Value at a finite point; `None` at a pole.
    pub fn eval(&self, a: FieldElement) -> Option<FieldElement> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return None;
        }
        Some(self.field().div(self.num.eval(a), d).expect("nonzero"))
    }

    /// Vanishing order at a point (negative for poles).
    pub fn ord_at(&self, point: Point) -> Order {
        if self.is_zero() {
            return Order::PlusInfinity;
        }
        match point {
            Point::Infinity => Order::Finite(self.den.degree_i64() - self.num.degree_i64()),
            Point::Finite(a) => Order::Finite(self.num.root_multiplicity(a) as i64 - self.den.root_multiplicity(a) as i64),
        }
    }

    /// Distinct finite poles in canonical order, with their orders. Only poles
    /// rational over the field are listed.
    pub fn finite_poles(&self) -> Vec<(FieldElement, u64)> {
        self.den.roots().into_iter().map(|a| (a, self.den.root_multiplicity(a) as u64)).collect()
    }

    /// Decomposition into a polynomial part and terms `c / (x - a)^j`.
    pub fn partial_fractions(&self) -> Result<PartialFractions> {
        let field = self.field().clone();
        let (poly_part, rem) = self.num.div_rem(&self.den)?;
        let mut terms = Vec::new();
        let mut leftover = self.den.clone();
        for (a, m) in self.finite_poles() {
            let lin_m = Polynomial::linear(&field, a).pow(m);
            leftover = leftover.div_exact(&lin_m)?;
            let cofactor = self.den.div_exact(&lin_m)?;
            // rem/den = (rem/cofactor)/(x-a)^m; expand rem/cofactor at a to order m
            let num_t = rem.taylor_shift(a);
            let den_t = cofactor.taylor_shift(a);
            let series = series_div(&field, &num_t, &den_t, m as usize)?;
            for (k, &b) in series.iter().enumerate() {
                if !b.is_zero() {
                    terms.push(PfTerm { pole: a, order: m - k as u64, coefficient: b });
                }
            }
        }
        if !leftover.is_constant() {
            let degree = leftover.smallest_factor_degree().unwrap_or(0);
            return Err(Error::IrreducibleFactor { degree });
        }
        terms.sort_by_key(|t| (t.pole, t.order));
        Ok(PartialFractions { field, polynomial_part: poly_part, terms })
    }

    pub fn render(&self) -> String {
        let num = self.num.render("x");
        if self.den.is_one() {
            return num;
        }
        let num = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 { format!("({num})") } else { num };
        let den = self.den.render("x");
        if self.den.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("{num}/({den})")
        } else {
            format!("{num}/{den}")
        }
    }
}

/// First `n` coefficients of `a/b` as a power series; `b(0)` must be nonzero.
fn series_div(field: &Field, a: &Polynomial, b: &Polynomial, n: usize) -> Result<Vec<FieldElement>> {
    let b0_inv = field.inv(b.coeff(0))?;
    let mut out: Vec<FieldElement> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = a.coeff(k);
        for (j, &c) in out.iter().enumerate() {
            acc = field.sub(acc, field.mul(c, b.coeff(k - j)));
        }
        out.push(field.mul(acc, b0_inv));
    }
    Ok(out)
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self.render())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PfTerm {
    pub pole: FieldElement,
    pub order: u64,
    pub coefficient: FieldElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFractions {
    field: Field,
    pub polynomial_part: Polynomial,
    /// Sorted by pole, then order; coefficients are nonzero.
    pub terms: Vec<PfTerm>,
}

impl PartialFractions {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coefficient of `1/(x - a)^j`, zero when absent.
    pub fn coefficient(&self, a: FieldElement, j: u64) -> FieldElement {
        self.terms.iter().find(|t| t.pole == a && t.order == j).map_or(FieldElement::ZERO, |t| t.coefficient)
    }

    pub fn recombine(&self) -> RationalFunction {
        self.terms.iter().fold(RationalFunction::from_poly(self.polynomial_part.clone()), |acc, t| {
            acc.add(&RationalFunction::pole_term(&self.field, t.coefficient, t.pole, t.order))
        })
    }
}
