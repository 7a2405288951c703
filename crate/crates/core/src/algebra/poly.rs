use super::field::{Elem, FieldDescriptor};
use std::cmp::Ordering;
use std::fmt;

/// Dense univariate polynomial over a finite field, coefficients low to high.
///
/// Trailing zeros are never stored, so the zero polynomial has no coefficients.
#[derive(Clone)]
pub struct Poly {
    field: FieldDescriptor,
    coeffs: Vec<Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("t"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("t"))
    }
}

impl Poly {
    pub fn from_coeffs(field: &FieldDescriptor, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FieldDescriptor) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldDescriptor) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn constant(field: &FieldDescriptor, c: Elem) -> Poly {
        Poly::from_coeffs(field, vec![c])
    }

    /// c·x^d
    pub fn monomial(field: &FieldDescriptor, c: Elem, d: usize) -> Poly {
        let mut v = vec![0; d + 1];
        v[d] = c;
        Poly::from_coeffs(field, v)
    }

    /// The variable x (or t).
    pub fn x(field: &FieldDescriptor) -> Poly {
        Poly::monomial(field, 1, 1)
    }

    /// x − c
    pub fn linear(field: &FieldDescriptor, c: Elem) -> Poly {
        Poly::from_coeffs(field, vec![field.neg(c), 1])
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    /// Degree with deg 0 := 0, for callers that have excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }
    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }
    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }
    pub fn as_constant(&self) -> Option<Elem> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect();
        Poly::from_coeffs(f, v)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut v = vec![0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                if b != 0 {
                    v[i + j] = f.add(v[i + j], f.mul(a, b));
                }
            }
        }
        Poly::from_coeffs(f, v)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let dd = d.deg();
        let inv = f.inv(d.lead()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let mut quo = vec![0; r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = f.mul(r[k + dd], inv);
            if c == 0 {
                continue;
            }
            quo[k] = c;
            for (i, &b) in d.coeffs.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, b));
            }
        }
        (Poly::from_coeffs(f, quo), Poly::from_coeffs(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lead()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        Poly::from_coeffs(f, v)
    }

    /// f(x) ↦ f(x^k).
    pub fn substitute_pow(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; self.deg() * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * k] = c;
        }
        Poly::from_coeffs(&self.field, v)
    }

    /// Applies c ↦ c^{p^k} to every coefficient.
    pub fn frobenius_coeffs(&self, k: u32) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&c| f.frobenius(c, k)).collect())
    }

    /// Shift x ↦ x + c.
    pub fn shift(&self, c: Elem) -> Poly {
        let lin = Poly::from_coeffs(&self.field, vec![c, 1]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(&self.field), |acc, &a| acc.mul(&lin).add(&Poly::constant(&self.field, a)))
    }

    /// Reversed coefficient list: x^deg·f(1/x).
    pub fn reversed(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.reverse();
        Poly::from_coeffs(&self.field, v)
    }

    /// Transports the coefficients along a field embedding table.
    pub fn map_coeffs(&self, target: &FieldDescriptor, table: &[Elem]) -> Poly {
        Poly::from_coeffs(target, self.coeffs.iter().map(|&c| table[c as usize]).collect())
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let x = Poly::x(&self.field);
        let q = self.field.q() as u64;
        let mut h = x.clone();
        for _ in 1..=d / 2 {
            h = h.powmod(q, self);
            if !self.gcd(&h.sub(&x)).is_one() {
                return false;
            }
        }
        true
    }

    /// Ordering used for deterministic output: by degree, then coefficients
    /// from the top down (compared as element indices).
    pub fn cmp_lex(&self, o: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&o.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(o.coeffs.iter().rev()))
    }

    /// Renders with a chosen variable name, highest degree first.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let cs = f.format_elem(c);
            let compound = cs.contains('+');
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let term = if i == 0 {
                if compound && !out.is_empty() {
                    format!("({cs})")
                } else {
                    cs
                }
            } else if c == 1 {
                mono
            } else if compound {
                format!("({cs}){mono}")
            } else {
                format!("{cs}{mono}")
            };
            if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&term);
        }
        out
    }
}
