//! Reduced Witt-vector reduction types with entries in `k[1/x]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::{Degree, Polynomial};
use crate::ratfunc::RationalFunction;

/// `(g^1, ..., g^n)`, each entry a polynomial in `u = 1/x`.
#[derive(Clone, PartialEq, Eq)]
pub struct ReductionType {
    field: Field,
    entries: Vec<Polynomial>,
}

/// Conductor of one level together with its distance from minimality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelConductor {
    pub conductor: u64,
    /// `conductor - (p * previous - p + 1)`, taking the previous conductor to be 1 at level 1.
    pub excess: u64,
}

impl LevelConductor {
    pub fn is_minimal(&self) -> bool {
        self.excess == 0
    }
}

/// Checks a break sequence against `c_i >= p c_{i-1} - p + 1`, with equality
/// forced when `c_i = 1 mod p`.
pub fn level_conductors(p: u64, breaks: &[u64]) -> Result<Vec<LevelConductor>> {
    let mut out: Vec<LevelConductor> = Vec::new();
    let mut prev = 1u64;
    for (i, &m) in breaks.iter().enumerate() {
        let c = m + 1;
        let floor = p * prev - p + 1;
        if c < floor || (i > 0 && c % p == 1 % p && c != floor) {
            return Err(Error::ConductorInequalityViolated { level: i + 1 });
        }
        out.push(LevelConductor { conductor: c, excess: c - floor });
        prev = c;
    }
    Ok(out)
}

impl ReductionType {
    pub fn new(field: &Field, entries: Vec<Polynomial>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Malformed("reduction type needs at least one entry".into()));
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(ReductionType { field: field.clone(), entries })
    }

    /// Builds from coefficient arrays; index `j` holds the coefficient of `x^-j`.
    pub fn from_coefficients(field: &Field, entries: &[Vec<FieldElement>]) -> Result<Self> {
        Self::new(field, entries.iter().map(|c| Polynomial::new(field, c.clone())).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &Polynomial {
        &self.entries[i]
    }

    /// The first `k` entries.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        Self::new(&self.field, self.entries[..k].to_vec())
    }

    /// Appends an entry.
    pub fn push(&self, g: Polynomial) -> Result<Self> {
        let mut e = self.entries.clone();
        e.push(g);
        Self::new(&self.field, e)
    }

    /// Entry `i` as a rational function of `x`.
    pub fn entry_function(&self, i: usize) -> RationalFunction {
        let g = &self.entries[i];
        let d = g.degree().finite().unwrap_or(0);
        let rev: Vec<FieldElement> = (0..=d).map(|j| g.coeff(d - j)).collect();
        RationalFunction::new(Polynomial::new(&self.field, rev), Polynomial::monomial(&self.field, self.field.one(), d))
            .expect("nonzero denominator")
    }

    fn p(&self) -> usize {
        self.field.characteristic() as usize
    }

    /// First offending `(entry, exponent)` with a nonzero `x^-j` term, `p | j`.
    fn reducedness_violation(&self) -> Option<(usize, usize)> {
        let p = self.p();
        self.entries
            .iter()
            .enumerate()
            .find_map(|(i, g)| g.coeffs().iter().enumerate().skip(1).find(|(j, c)| j % p == 0 && !c.is_zero()).map(|(j, _)| (i + 1, j)))
    }

    pub fn is_reduced(&self) -> bool {
        self.reducedness_violation().is_none()
    }

    /// Lower ramification breaks `m_1, ..., m_n`.
    pub fn breaks(&self) -> Result<Vec<u64>> {
        if let Some((entry, exponent)) = self.reducedness_violation() {
            return Err(Error::NotReduced { entry, exponent });
        }
        let p = self.p() as u64;
        let mut out: Vec<u64> = Vec::with_capacity(self.entries.len());
        for (i, g) in self.entries.iter().enumerate() {
            // m_i = max(p * m_{i-1}, deg g^i); m_{i-1} already folds in all lower entries
            let own = match g.degree() {
                Degree::Finite(d) if d > 0 => Some(d as u64),
                _ => None,
            };
            let inherited = out.last().map(|&m| m * p);
            let m = match (own, inherited) {
                (Some(a), Some(b)) => a.max(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => 0,
            };
            if m == 0 {
                return Err(Error::NotTotallyRamified { level: i + 1 });
            }
            out.push(m);
        }
        Ok(out)
    }

    /// Conductors `m_i + 1`, checked against the good-reduction inequalities.
    pub fn conductors(&self) -> Result<Vec<LevelConductor>> {
        level_conductors(self.field.characteristic() as u64, &self.breaks()?)
    }

    /// `-l d_l` for the leading term `d_l x^-l` of the top entry.
    pub fn root_constant_coefficient(&self) -> Result<FieldElement> {
        let top = self.entries.last().expect("nonempty");
        let l = top.degree().finite().filter(|&l| l > 0).ok_or_else(|| Error::PreconditionViolated("top entry has no pole".into()))?;
        if l % self.p() == 0 {
            return Err(Error::LeadingExponentDivisibleByP { exponent: l });
        }
        let f = &self.field;
        Ok(f.neg(f.mul(f.from_int(l as i64), top.leading_coefficient())))
    }

    /// Whether `hi` extends `self` by exactly one entry.
    pub fn is_prefix_of(&self, hi: &ReductionType) -> bool {
        hi.entries.len() == self.entries.len() + 1 && hi.entries[..self.entries.len()] == self.entries[..]
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = (0..self.entries.len()).map(|i| self.entry_function(i).render()).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Debug for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReductionType{}", self.render())
    }
}
