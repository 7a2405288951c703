use super::error::AlgebraError;
use super::field::{Elem, FieldDescriptor};
use super::poly::Poly;
use std::fmt;

/// Reduced fraction num/den over F_q with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.to_string();
        if self.den.is_one() {
            return write!(f, "{n}");
        }
        let wrap = |s: String, p: &Poly| if p.coeffs().iter().filter(|&&c| c != 0).count() > 1 { format!("({s})") } else { s };
        write!(f, "{}/{}", wrap(n, &self.num), wrap(self.den.to_string(), &self.den))
    }
}

impl RationalFunction {
    /// Builds num/den in lowest terms. Errors on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let f = num.field().clone();
        if num.is_zero() {
            return Ok(Self::zero(&f));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let lc = f.inv(d.lead()).unwrap();
        n = n.scale(lc);
        d = d.scale(lc);
        Ok(Self { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        let f = p.field().clone();
        Self { num: p, den: Poly::one(&f) }
    }

    pub fn zero(f: &FieldDescriptor) -> Self {
        Self::from_poly(Poly::zero(f))
    }
    pub fn one(f: &FieldDescriptor) -> Self {
        Self::from_poly(Poly::one(f))
    }
    pub fn constant(f: &FieldDescriptor, c: Elem) -> Self {
        Self::from_poly(Poly::constant(f, c))
    }
    /// The transcendental t.
    pub fn t(f: &FieldDescriptor) -> Self {
        Self::from_poly(Poly::x(f))
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.num.field()
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    pub fn as_constant(&self) -> Option<Elem> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(n, self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        // cross-cancel first to keep degrees down
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n = self.num.div_exact(&g1).unwrap().mul(&o.num.div_exact(&g2).unwrap());
        let d = self.den.div_exact(&g2).unwrap().mul(&o.den.div_exact(&g1).unwrap());
        Self::new(n, d).unwrap()
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale(&self, c: Elem) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("denominator is nonzero")
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        // powers of a reduced fraction stay reduced
        Ok(Self { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// x ↦ x^{q^k} for the base field F_q of this function.
    ///
    /// Coefficients in F_q are fixed by x ↦ x^q, so this is t ↦ t^{q^k}.
    pub fn frobenius(&self, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let e = (self.field().q() as usize).pow(k);
        Self { num: self.num.substitute_pow(e), den: self.den.substitute_pow(e) }
    }

    pub fn eval(&self, x: Elem) -> Option<Elem> {
        let d = self.den.eval(x);
        self.field().div(self.num.eval(x), d)
    }
}
