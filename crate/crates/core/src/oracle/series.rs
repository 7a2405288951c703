//! Truncated Puiseux series Σ a_e u^e over a finite field.
//!
//! Exponents are stored as integers over a common denominator `den`, so
//! u^{k/den}. A compatible system of roots of u is implicit: (u^{1/N})^N = u.

use crate::algebra::{ExactRational, FieldDescriptor, Elem, Val};
use crate::drinfeld::TwistCoeff;
use num_bigint::BigInt;
use num_integer::Integer;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesValuation {
    Exact(ExactRational),
    /// The series is exactly zero.
    Infinite,
    /// Every known term vanished; the valuation is at least this.
    AtLeast(ExactRational),
}

#[derive(Clone, Debug)]
pub struct PuiseuxSeries {
    field: FieldDescriptor,
    den: i64,
    /// Sorted by exponent, nonzero coefficients, all exponents < prec.
    terms: Vec<(i64, Elem)>,
    /// Absolute precision in units of 1/den; `None` means exact.
    prec: Option<i64>,
}

fn rat(n: i64, d: i64) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(d))
}

/// Splits an exact rational into (numerator, denominator) as i64.
fn parts(x: &ExactRational) -> (i64, i64) {
    let n: i64 = x.numer().try_into().expect("exponent fits in i64");
    let d: i64 = x.denom().try_into().expect("denominator fits in i64");
    (n, d)
}

impl PuiseuxSeries {
    fn build(field: &FieldDescriptor, den: i64, mut terms: Vec<(i64, Elem)>, prec: Option<i64>) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(i64, Elem)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if prec.is_some_and(|p| e >= p) {
                break;
            }
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 = field.add(last.1, c),
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| t.1 != 0);
        let mut s = Self { field: field.clone(), den, terms: merged, prec };
        s.reduce_den();
        s
    }

    fn reduce_den(&mut self) {
        let mut g = self.den;
        for (e, _) in &self.terms {
            g = g.gcd(e);
        }
        if let Some(p) = self.prec {
            g = g.gcd(&p);
        }
        if g > 1 {
            self.den /= g;
            for t in &mut self.terms {
                t.0 /= g;
            }
            if let Some(p) = &mut self.prec {
                *p /= g;
            }
        }
    }

    fn rescaled(&self, den: i64) -> (Vec<(i64, Elem)>, Option<i64>) {
        let k = den / self.den;
        (self.terms.iter().map(|&(e, c)| (e * k, c)).collect(), self.prec.map(|p| p * k))
    }

    pub fn zero(field: &FieldDescriptor) -> Self {
        Self { field: field.clone(), den: 1, terms: Vec::new(), prec: None }
    }

    /// O(u^prec).
    pub fn zero_to(field: &FieldDescriptor, prec: &ExactRational) -> Self {
        let (n, d) = parts(prec);
        Self::build(field, d, Vec::new(), Some(n))
    }

    pub fn monomial(field: &FieldDescriptor, c: Elem, e: &ExactRational) -> Self {
        let (n, d) = parts(e);
        Self::build(field, d, vec![(n, c)], None)
    }

    /// Terms given with rational exponents; `prec = None` for an exact series.
    pub fn from_terms(field: &FieldDescriptor, terms: &[(ExactRational, Elem)], prec: Option<&ExactRational>) -> Self {
        let mut den = 1i64;
        for (e, _) in terms {
            den = den.lcm(&parts(e).1);
        }
        if let Some(p) = prec {
            den = den.lcm(&parts(p).1);
        }
        let conv = |x: &ExactRational| {
            let (n, d) = parts(x);
            n * (den / d)
        };
        let t = terms.iter().map(|(e, c)| (conv(e), *c)).collect();
        Self::build(field, den, t, prec.map(conv))
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }
    /// Ramification denominator N: exponents lie in (1/N)Z.
    pub fn ramification_denominator(&self) -> u64 {
        self.den as u64
    }
    pub fn terms(&self) -> Vec<(ExactRational, Elem)> {
        self.terms.iter().map(|&(e, c)| (rat(e, self.den), c)).collect()
    }
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
    pub fn prec(&self) -> Val<ExactRational> {
        match self.prec {
            Some(p) => Val::Finite(rat(p, self.den)),
            None => Val::PlusInfinity,
        }
    }
    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    pub fn valuation(&self) -> SeriesValuation {
        match (self.terms.first(), self.prec) {
            (Some(&(e, _)), _) => SeriesValuation::Exact(rat(e, self.den)),
            (None, None) => SeriesValuation::Infinite,
            (None, Some(p)) => SeriesValuation::AtLeast(rat(p, self.den)),
        }
    }

    /// Leading (exponent, coefficient) when resolved.
    pub fn leading(&self) -> Option<(ExactRational, Elem)> {
        self.terms.first().map(|&(e, c)| (rat(e, self.den), c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let den = self.den.lcm(&o.den);
        let (mut a, pa) = self.rescaled(den);
        let (b, pb) = o.rescaled(den);
        a.extend(b);
        let prec = match (pa, pb) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        Self::build(&self.field, den, a, prec)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(1))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Elem) -> Self {
        if c == 0 {
            return Self::zero(&self.field);
        }
        let t = self.terms.iter().map(|&(e, a)| (e, self.field.mul(a, c))).collect();
        Self { field: self.field.clone(), den: self.den, terms: t, prec: self.prec }
    }

    /// c·u^e times self.
    pub fn mul_monomial(&self, c: Elem, e: &ExactRational) -> Self {
        self.mul(&Self::monomial(&self.field, c, e))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let den = self.den.lcm(&o.den);
        let (a, pa) = self.rescaled(den);
        let (b, pb) = o.rescaled(den);
        let la = a.first().map(|t| t.0).or(pa);
        let lb = b.first().map(|t| t.0).or(pb);
        let bound = |l: Option<i64>, p: Option<i64>| match (l, p) {
            (Some(l), Some(p)) => Some(l + p),
            _ => None,
        };
        let prec = match (bound(lb, pa), bound(la, pb)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let f = &self.field;
        let mut acc: HashMap<i64, Elem> = HashMap::with_capacity(a.len() * b.len().min(64));
        for &(ea, ca) in &a {
            for &(eb, cb) in &b {
                let e = ea + eb;
                if prec.is_some_and(|p| e >= p) {
                    break;
                }
                let slot = acc.entry(e).or_insert(0);
                *slot = f.add(*slot, f.mul(ca, cb));
            }
        }
        Self::build(f, den, acc.into_iter().collect(), prec)
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::monomial(&self.field, 1, &rat(0, 1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// x ↦ x^{p^k}: coefficients to the p^k-th power, exponents times p^k.
    pub fn frob_p(&self, k: u32) -> Self {
        let pk = (self.field.p() as i64).pow(k);
        let t = self.terms.iter().map(|&(e, c)| (e * pk, self.field.frobenius(c, k))).collect();
        Self::build(&self.field, self.den, t, self.prec.map(|p| p * pk))
    }

    /// Moves the series into a larger field along an embedding table.
    pub fn embed(&self, target: &FieldDescriptor, table: &[Elem]) -> Self {
        let t = self.terms.iter().map(|&(e, c)| (e, table[c as usize])).collect();
        Self::build(target, self.den, t, self.prec)
    }

    /// Drops terms at or beyond `p` and lowers the precision to it.
    pub fn truncate(&self, p: &ExactRational) -> Self {
        let (n, d) = parts(p);
        let den = self.den.lcm(&d);
        let (t, pr) = self.rescaled(den);
        let cut = n * (den / d);
        Self::build(&self.field, den, t, Some(pr.map_or(cut, |x| x.min(cut))))
    }

    /// Lowest-exponent coefficient of u^e (0 when absent).
    pub fn coeff_at(&self, e: &ExactRational) -> Elem {
        self.terms().into_iter().find(|(x, _)| x == e).map_or(0, |t| t.1)
    }
}

/// Equality of the known parts: same terms below the smaller precision.
impl PartialEq for PuiseuxSeries {
    fn eq(&self, o: &Self) -> bool {
        matches!(self.sub(o).valuation(), SeriesValuation::Infinite | SeriesValuation::AtLeast(_))
    }
}

impl TwistCoeff for PuiseuxSeries {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn add(&self, o: &Self) -> Self {
        PuiseuxSeries::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        PuiseuxSeries::mul(self, o)
    }
    fn frob(&self, q: u32, k: u32) -> Self {
        let p = self.field.p();
        let mut s = 0;
        let mut x = q;
        while x > 1 {
            x /= p;
            s += 1;
        }
        self.frob_p(s * k)
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(e, c)| format!("({})u^{}", self.field.format_elem(c), rat(e, self.den)))
            .collect();
        match self.prec {
            Some(p) => parts.push(format!("O(u^{})", rat(p, self.den))),
            None if parts.is_empty() => parts.push("0".into()),
            None => {}
        }
        write!(f, "{}", parts.join(" + "))
    }
}
