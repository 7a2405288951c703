//! Twisted polynomials (τc = c^q τ) and the structure map a ↦ φ_a.

use crate::algebra::{FieldDescriptor, Poly, RationalFunction};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrinfeldError {
    #[error("φ_a is only defined for a ≠ 0 here")]
    ZeroElement,
    #[error("a₂ must be nonzero for a rank-2 module")]
    ZeroA2,
}

/// Coefficient ring for twisted polynomials: needs + · and the q-Frobenius.
pub trait TwistCoeff: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// x ↦ x^{q^k}.
    fn frob(&self, q: u32, k: u32) -> Self;
}

impl TwistCoeff for RationalFunction {
    fn zero_like(&self) -> Self {
        RationalFunction::zero(self.field())
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RationalFunction::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFunction::mul(self, o)
    }
    fn frob(&self, q: u32, k: u32) -> Self {
        debug_assert_eq!(q, self.field().q());
        self.frobenius(k)
    }
}

/// Σ c_i τ^i, i.e. the additive polynomial Σ c_i X^{q^i}.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedPolynomial<C> {
    q: u32,
    coeffs: Vec<C>,
}

impl<C: TwistCoeff> TwistedPolynomial<C> {
    /// Drops trailing zero coefficients.
    pub fn new(q: u32, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { q, coeffs }
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> Option<&C> {
        self.coeffs.get(i)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// τ-degree; `None` for the zero polynomial.
    pub fn tau_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(self.q, v)
    }
}

/// Composition f∘g of additive polynomials: (Σ a_i τ^i)(Σ b_j τ^j) = Σ a_i b_j^{q^i} τ^{i+j}.
pub fn twisted_mul<C: TwistCoeff>(f: &TwistedPolynomial<C>, g: &TwistedPolynomial<C>) -> TwistedPolynomial<C> {
    if f.is_zero() || g.is_zero() {
        return TwistedPolynomial::new(f.q, Vec::new());
    }
    let zero = f.coeffs[0].zero_like();
    let mut out = vec![zero; f.coeffs.len() + g.coeffs.len() - 1];
    for (i, a) in f.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.coeffs.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] = out[i + j].add(&a.mul(&b.frob(f.q, i as u32)));
            }
        }
    }
    TwistedPolynomial::new(f.q, out)
}

/// Rank-2 Drinfeld module φ_t = t + a₁τ + a₂τ² over F_q(t).
#[derive(Clone, Debug, PartialEq)]
pub struct DrinfeldModule {
    field: FieldDescriptor,
    a1: RationalFunction,
    a2: RationalFunction,
}

impl DrinfeldModule {
    pub fn new(a1: RationalFunction, a2: RationalFunction) -> Result<Self, DrinfeldError> {
        if a2.is_zero() {
            return Err(DrinfeldError::ZeroA2);
        }
        Ok(Self { field: a1.field().clone(), a1, a2 })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }
    pub fn a1(&self) -> &RationalFunction {
        &self.a1
    }
    pub fn a2(&self) -> &RationalFunction {
        &self.a2
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// φ_t = (t, a₁, a₂).
    pub fn phi_t(&self) -> TwistedPolynomial<RationalFunction> {
        TwistedPolynomial::new(self.q(), vec![RationalFunction::t(&self.field), self.a1.clone(), self.a2.clone()])
    }

    /// Twist by b ∈ F_q(t)^×: (b^{q−1}a₁, b^{q²−1}a₂). Same j-invariant.
    pub fn twist(&self, b: &RationalFunction) -> Self {
        let q = self.q() as i64;
        Self {
            field: self.field.clone(),
            a1: self.a1.mul(&b.pow(q - 1).expect("nonzero twist")),
            a2: self.a2.mul(&b.pow(q * q - 1).expect("nonzero twist")),
        }
    }
}

fn constant_twisted(m: &DrinfeldModule, c: u32) -> TwistedPolynomial<RationalFunction> {
    TwistedPolynomial::new(m.q(), vec![RationalFunction::constant(&m.field, c)])
}

/// φ_a for a ∈ F_q[t], by Horner's rule in φ_t.
pub fn phi_of(m: &DrinfeldModule, a: &Poly) -> Result<TwistedPolynomial<RationalFunction>, DrinfeldError> {
    if a.is_zero() {
        return Err(DrinfeldError::ZeroElement);
    }
    let phi_t = m.phi_t();
    let mut acc = constant_twisted(m, a.lead());
    for i in (0..a.deg()).rev() {
        acc = twisted_mul(&acc, &phi_t);
        let c = a.coeff(i);
        if c != 0 {
            acc = acc.add(&constant_twisted(m, c));
        }
    }
    Ok(acc)
}

/// j = a₁^{q+1}/a₂.
pub fn j_invariant(m: &DrinfeldModule) -> RationalFunction {
    let q = m.q() as i64;
    m.a1.pow(q + 1).expect("nonnegative power").div(&m.a2).expect("a₂ ≠ 0")
}
