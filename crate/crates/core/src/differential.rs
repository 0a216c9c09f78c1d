//! Differential forms `f dx` and the Cartier operator.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Polynomial;
use crate::ratfunc::{Point, RationalFunction};

/// The form `f dx`.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    f: RationalFunction,
}

/// `c dx / prod (x - a_i)^{m_i}` with distinct `a_i` in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleShape {
    pub constant: FieldElement,
    pub poles: Vec<(FieldElement, u64)>,
}

impl DifferentialForm {
    pub fn new(f: RationalFunction) -> Self {
        DifferentialForm { f }
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(RationalFunction::zero(field))
    }

    /// `dx`.
    pub fn dx(field: &Field) -> Self {
        Self::new(RationalFunction::one(field))
    }

    /// `c dx / prod (x - a_i)^{m_i}`.
    pub fn from_poles(field: &Field, c: FieldElement, poles: &[(FieldElement, u64)]) -> Self {
        Self::new(RationalFunction::from_pole_orders(field, c, poles))
    }

    pub fn coefficient(&self) -> &RationalFunction {
        &self.f
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.f.add(&other.f))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.f.sub(&other.f))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.f.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        Self::new(self.f.scale(c))
    }

    /// Multiplies the coefficient by a rational function.
    pub fn mul_function(&self, h: &RationalFunction) -> Self {
        Self::new(self.f.mul(h))
    }

    /// Order at a point; at infinity `dx` contributes `-2`.
    pub fn ord(&self, point: Point) -> Result<i64> {
        let o = self.f.ord_at(point).finite().ok_or(Error::ZeroForm)?;
        Ok(match point {
            Point::Infinity => o - 2,
            Point::Finite(_) => o,
        })
    }

    /// Cartier operator via partial fractions.
    pub fn cartier(&self) -> Result<Self> {
        let field = self.field().clone();
        let p = field.characteristic() as u64;
        let pf = self.f.partial_fractions()?;
        let mut poly = vec![FieldElement::ZERO; pf.polynomial_part.coeffs().len() / p as usize + 1];
        for (m, &c) in pf.polynomial_part.coeffs().iter().enumerate() {
            if !c.is_zero() && (m as u64 + 1).is_multiple_of(p) {
                poly[(m + 1) / p as usize - 1] = field.pth_root(c);
            }
        }
        let mut out = RationalFunction::from_poly(Polynomial::new(&field, poly));
        for t in &pf.terms {
            if (t.order - 1) % p == 0 {
                let k = (t.order - 1) / p;
                out = out.add(&RationalFunction::pole_term(&field, field.pth_root(t.coefficient), t.pole, k + 1));
            }
        }
        Ok(Self::new(out))
    }

    /// Cartier operator by expanding `f = A B^{p-1} / B^p`. Needs no factoring.
    pub fn cartier_by_expansion(&self) -> Self {
        let field = self.field().clone();
        let p = field.characteristic() as u64;
        let a = self.f.numerator();
        let b = self.f.denominator();
        let big = a.mul(&b.pow(p - 1));
        let mut coeffs = vec![FieldElement::ZERO; big.coeffs().len() / p as usize + 1];
        for (m, &c) in big.coeffs().iter().enumerate() {
            if !c.is_zero() && (m as u64 + 1).is_multiple_of(p) {
                coeffs[(m + 1) / p as usize - 1] = field.pth_root(c);
            }
        }
        let num = Polynomial::new(&field, coeffs);
        Self::new(RationalFunction::new(num, b.clone()).expect("nonzero denominator"))
    }

    /// Whether the form is fixed by the Cartier operator.
    pub fn is_logarithmic(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        Ok(self.cartier_by_expansion() == *self)
    }

    /// `g'/g dx`.
    pub fn dlog(g: &RationalFunction) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(Self::new(g.derivative().div(g)?))
    }

    /// `df`.
    pub fn exact(f: &RationalFunction) -> Self {
        Self::new(f.derivative())
    }

    /// Shape `c dx / prod (x - a_i)^{m_i}` if the numerator is constant and the
    /// denominator splits.
    pub fn pole_shape(&self) -> Option<PoleShape> {
        let num = self.f.numerator();
        if self.is_zero() || !num.is_constant() {
            return None;
        }
        let poles = self.f.finite_poles();
        let total: u64 = poles.iter().map(|&(_, m)| m).sum();
        if total as i64 != self.f.denominator().degree_i64() {
            return None;
        }
        Some(PoleShape { constant: num.coeff(0), poles })
    }

    pub fn render(&self) -> String {
        let field = self.field();
        if self.is_zero() {
            return "0".into();
        }
        if let Some(shape) = self.pole_shape() {
            let c = if shape.constant == field.one() { String::new() } else { format!("{} ", field.render(shape.constant)) };
            if shape.poles.is_empty() {
                return format!("{c}dx");
            }
            let factors: Vec<String> = shape
                .poles
                .iter()
                .map(|&(a, m)| {
                    let lin = if a.is_zero() { "x".to_string() } else { format!("(x - {})", field.render(a)) };
                    if m == 1 {
                        lin
                    } else {
                        format!("{lin}^{m}")
                    }
                })
                .collect();
            return format!("{c}dx/({})", factors.join("*"));
        }
        format!("({}) dx", self.f.render())
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DifferentialForm({})", self.render())
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
