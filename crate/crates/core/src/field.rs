//! Finite fields `F_{p^d}` given by an explicit monic irreducible modulus.
//!
//! Elements are small integer codes. The code of `c_0 + c_1 t + ... + c_{d-1} t^{d-1}`
//! is `c_0 p^{d-1} + c_1 p^{d-2} + ... + c_{d-1}`, so comparing codes is the
//! lexicographic order on coefficient sequences. Every "pick one" step in the
//! crate takes the minimum under this order.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const ADD_TABLE_LIMIT: u32 = 256;

/// `(p, d, modulus)` with `modulus` given in ascending degree, monic of degree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub d: usize,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// The prime field `F_p`, written with modulus `t`.
    pub fn prime(p: u32) -> Self {
        FieldSpec { p, d: 1, modulus: vec![0, 1] }
    }

    pub fn new(p: u32, modulus: Vec<u32>) -> Self {
        let d = modulus.len().saturating_sub(1);
        FieldSpec { p, d, modulus }
    }
}

/// An element of some [`Field`]. Only meaningful together with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    /// The canonical code of the element.
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    spec: FieldSpec,
    q: u32,
    one: FieldElement,
    generator: FieldElement,
    // exp[i] = g^i for i in 0..q-1, log[code] = i (log[0] unused).
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    pow_p: Vec<u32>,
}

/// A finite field. Cheap to clone; clones share their tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.0.spec;
        write!(f, "F_{}^{} mod {:?}", s.p, s.d, s.modulus)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= n as u64 {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomial arithmetic modulo the defining polynomial, used only while
/// building the tables.
struct RawArith<'a> {
    p: u32,
    d: usize,
    modulus: &'a [u32],
}

impl RawArith<'_> {
    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (self.d..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..self.d {
                let m = self.modulus[j] as u64;
                let idx = k - self.d + j;
                prod[idx] = (prod[idx] + (p - c) * m) % p;
            }
        }
        prod.truncate(self.d);
        prod.into_iter().map(|c| c as u32).collect()
    }

    fn pow(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut result = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.d];
        v[0] = 1;
        v
    }
}

impl Field {
    /// Builds the field, checking that `p` is prime and the modulus is monic
    /// irreducible of degree `d`.
    pub fn new(spec: FieldSpec) -> Result<Field> {
        let FieldSpec { p, d, ref modulus } = spec;
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if d == 0 || modulus.len() != d + 1 {
            return Err(Error::InvalidField(format!("modulus must have exactly d+1 = {} coefficients", d + 1)));
        }
        if modulus[d] != 1 {
            return Err(Error::InvalidField("modulus is not monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must lie in 0..p".into()));
        }
        let q64 = (p as u64).checked_pow(d as u32).unwrap_or(u64::MAX);
        if q64 > MAX_FIELD_SIZE {
            return Err(Error::InvalidField(format!("field size {q64} exceeds {MAX_FIELD_SIZE}")));
        }
        let q = q64 as u32;
        let raw = RawArith { p, d, modulus };
        let decode = |code: u32| -> Vec<u32> {
            let mut c = vec![0u32; d];
            let mut x = code;
            for i in (0..d).rev() {
                c[i] = x % p;
                x /= p;
            }
            c
        };
        let encode = |c: &[u32]| -> u32 { c.iter().fold(0u32, |acc, &x| acc * p + x) };

        // A unit of order q-1 exists iff the quotient ring is a field.
        let order = q64 - 1;
        let factors = prime_factors(order);
        let one = raw.one();
        let mut generator = None;
        for code in 1..q {
            let g = decode(code);
            if raw.pow(&g, order) != one {
                continue;
            }
            if factors.iter().all(|&r| raw.pow(&g, order / r) != one) {
                generator = Some(code);
                break;
            }
        }
        let generator = generator.ok_or_else(|| Error::InvalidField("modulus is not irreducible".into()))?;

        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let g = decode(generator);
        let mut cur = one.clone();
        for i in 0..order as u32 {
            let c = encode(&cur);
            exp.push(c);
            log[c as usize] = i;
            cur = raw.mul(&cur, &g);
        }

        let neg: Vec<u32> = (0..q)
            .map(|code| {
                let c: Vec<u32> = decode(code).iter().map(|&x| (p - x) % p).collect();
                encode(&c)
            })
            .collect();

        let add = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let ca = decode(a);
                for b in 0..q {
                    let cb = decode(b);
                    let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = encode(&s);
                }
            }
            t
        });

        let inner = Inner {
            spec: spec.clone(),
            q,
            one: FieldElement(encode(&one)),
            generator: FieldElement(generator),
            exp,
            log,
            neg,
            add,
            pow_p: Vec::new(),
        };
        let mut field = Field(Arc::new(inner));
        let pow_p: Vec<u32> = (0..q).map(|c| field.pow(FieldElement(c), p as u64).0).collect();
        Arc::get_mut(&mut field.0).expect("unique during construction").pow_p = pow_p;
        Ok(field)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(FieldSpec::prime(p))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.0.spec.p
    }

    pub fn degree(&self) -> usize {
        self.0.spec.d
    }

    pub fn size(&self) -> u32 {
        self.0.q
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        self.0.one
    }

    /// The primitive element found while building the field (the smallest one).
    pub fn primitive_element(&self) -> FieldElement {
        self.0.generator
    }

    /// The class of the variable `t` of the modulus.
    pub fn t(&self) -> FieldElement {
        if self.degree() == 1 {
            // t = -m_0 in F_p[t]/(t + m_0)
            return self.from_int(-(self.0.spec.modulus[0] as i64));
        }
        let mut c = vec![0u32; self.degree()];
        c[1] = 1;
        self.from_coeffs(&c).expect("valid coefficients")
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.0.q).map(FieldElement)
    }

    pub fn from_code(&self, code: u32) -> Result<FieldElement> {
        if code < self.0.q {
            Ok(FieldElement(code))
        } else {
            Err(Error::Parse(format!("element code {code} out of range")))
        }
    }

    /// Element from coefficients `c_0, c_1, ...` (shorter inputs are zero padded).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        let p = self.characteristic();
        let d = self.degree();
        if coeffs.len() > d {
            return Err(Error::Parse(format!("field element has {} coefficients, field degree is {d}", coeffs.len())));
        }
        let mut code = 0u32;
        for i in 0..d {
            let c = coeffs.get(i).copied().unwrap_or(0);
            if c >= p {
                return Err(Error::Parse(format!("coefficient {c} not reduced mod {p}")));
            }
            code = code * p + c;
        }
        Ok(FieldElement(code))
    }

    /// Coefficients `c_0, ..., c_{d-1}` of an element.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let p = self.characteristic();
        let d = self.degree();
        let mut c = vec![0u32; d];
        let mut x = a.0;
        for i in (0..d).rev() {
            c[i] = x % p;
            x /= p;
        }
        c
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.characteristic() as i64;
        let r = n.rem_euclid(p) as u32;
        let mut c = vec![0u32; self.degree()];
        c[0] = r;
        self.from_coeffs(&c).expect("reduced")
    }

    /// Returns the integer `k in 0..p` with `a = k`, if `a` lies in the prime field.
    pub fn to_prime_subfield(&self, a: FieldElement) -> Option<u32> {
        let c = self.coeffs(a);
        c[1..].iter().all(|&x| x == 0).then_some(c[0])
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(t) = &self.0.add {
            return FieldElement(t[(a.0 * self.0.q + b.0) as usize]);
        }
        let p = self.characteristic();
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree() {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.0 as usize])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.0.exp.len() as u64;
        let e = (self.0.log[a.0 as usize] as u64 + self.0.log[b.0 as usize] as u64) % n;
        FieldElement(self.0.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.0.exp.len() as u32;
        let l = self.0.log[a.0 as usize];
        Ok(FieldElement(self.0.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.0.exp.len() as u64;
        let l = self.0.log[a.0 as usize] as u64;
        let idx = ((l as u128 * e as u128) % n as u128) as usize;
        FieldElement(self.0.exp[idx])
    }

    /// Integer power allowing negative exponents for units.
    pub fn powi(&self, a: FieldElement, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        if self.0.pow_p.is_empty() {
            return self.pow(a, self.characteristic() as u64);
        }
        FieldElement(self.0.pow_p[a.0 as usize])
    }

    /// Inverse Frobenius, computed as `a^(p^(d-1))`.
    pub fn pth_root(&self, a: FieldElement) -> FieldElement {
        let mut x = a;
        for _ in 1..self.degree() {
            x = self.frobenius(x);
        }
        x
    }

    /// All `x` in the field with `x^l = a`, in canonical order.
    pub fn lth_roots(&self, a: FieldElement, l: u64) -> Vec<FieldElement> {
        if a.is_zero() {
            return vec![FieldElement::ZERO];
        }
        self.nonzero_elements().filter(|&x| self.pow(x, l) == a).collect()
    }

    /// Human-readable rendering: an integer for prime-field elements,
    /// otherwise a polynomial in `t`.
    pub fn render(&self, a: FieldElement) -> String {
        if let Some(k) = self.to_prime_subfield(a) {
            return k.to_string();
        }
        let c = self.coeffs(a);
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            parts.push(match (ci, i) {
                (_, 0) => ci.to_string(),
                (1, _) => mono,
                _ => format!("{ci}*{mono}"),
            });
        }
        format!("({})", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::new(FieldSpec::new(2, vec![1, 1, 1])).unwrap()
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Field::new(FieldSpec::new(4, vec![0, 1])).is_err());
        // t^2 + 1 = (t + 1)^2 over F_2
        assert!(Field::new(FieldSpec::new(2, vec![1, 0, 1])).is_err());
        assert!(Field::new(FieldSpec::new(3, vec![1, 0, 2])).is_err());
        // t^2 + 1 is irreducible over F_3
        assert!(Field::new(FieldSpec::new(3, vec![1, 0, 1])).is_ok());
    }

    #[test]
    fn pth_root_prime_field() {
        let f = Field::prime(3).unwrap();
        let two = f.from_int(2);
        assert_eq!(f.pth_root(two), two);
        assert_eq!(f.pth_root(f.zero()), f.zero());
        assert_eq!(f.pth_root(f.one()), f.one());
    }

    #[test]
    fn pth_root_f4_generator() {
        let f = f4();
        let g = f.t();
        let g2 = f.mul(g, g);
        assert_eq!(f.pth_root(g), g2);
        assert_eq!(f.mul(g2, g2), g);
    }

    #[test]
    fn pth_root_exhaustive_small_fields() {
        let specs = [
            FieldSpec::prime(2),
            FieldSpec::prime(3),
            FieldSpec::prime(5),
            FieldSpec::new(2, vec![1, 1, 1]),
            FieldSpec::new(2, vec![1, 1, 0, 1]),
            FieldSpec::new(3, vec![1, 0, 1]),
            FieldSpec::new(5, vec![2, 0, 1]),
        ];
        for spec in specs {
            let f = Field::new(spec).unwrap();
            let p = f.characteristic() as u64;
            for a in f.elements() {
                let r = f.pth_root(a);
                assert_eq!(f.pow(r, p), a);
                assert_eq!(f.pth_root(f.pow(a, p)), a);
            }
        }
    }

    #[test]
    fn lth_roots_examples() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.lth_roots(f.one(), 2), vec![f.one(), f.from_int(2)]);
        assert!(f.lth_roots(f.from_int(2), 2).is_empty());
        assert_eq!(f.lth_roots(f.zero(), 5), vec![f.zero()]);
    }

    #[test]
    fn order_is_lexicographic_on_coefficients() {
        let f = Field::new(FieldSpec::new(3, vec![1, 0, 1])).unwrap();
        let mut prev: Option<Vec<u32>> = None;
        for a in f.elements() {
            let c = f.coeffs(a);
            if let Some(pc) = prev {
                assert!(pc < c);
            }
            prev = Some(c);
        }
    }

    #[test]
    fn field_axioms_f9() {
        let f = Field::new(FieldSpec::new(3, vec![1, 0, 1])).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}
