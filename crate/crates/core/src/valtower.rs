//! Closed-form valuations of the t^n-division points ξ_{±i}, their ordering,
//! and the Newton polygon shapes of the steps φ_π(X) − ξ_i.
//!
//! Index convention: i < 0 names ξ_{−|i|} (the high-valuation branch), i > 0
//! names ξ_i.

use crate::algebra::rational::lcm_u64;
use crate::algebra::{ExactRational, Val, Valuation};
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("case {case} does not match the profile (classified as {actual})")]
    InconsistentCase { case: TowerCase, actual: TowerCase },
    #[error("invalid valuation profile: {0}")]
    InvalidProfile(String),
    #[error("index 0 does not name a division point")]
    ZeroIndex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    /// v0 < 0
    InfinitePlace,
    /// v0 = 0
    FiniteCoprimePlace,
    /// v0 > 0
    AboveUniformizerPlace,
}

impl PlaceKind {
    fn of_v0(v0: i64) -> PlaceKind {
        match v0.signum() {
            -1 => PlaceKind::InfinitePlace,
            0 => PlaceKind::FiniteCoprimePlace,
            _ => PlaceKind::AboveUniformizerPlace,
        }
    }
}

/// Valuations (v0, v1, v2) of (π, a₁, a₂) at one place, with vj = v(j).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValuationProfile {
    pub p: u64,
    pub s: u32,
    pub q: u64,
    pub v0: i64,
    pub v1: Valuation,
    pub v2: i64,
    pub vj: Valuation,
    pub kind: PlaceKind,
}

impl ValuationProfile {
    /// The place kind follows from the sign of v0.
    pub fn new(p: u64, s: u32, v0: i64, v1: Valuation, v2: i64) -> Self {
        let q = p.pow(s);
        let vj = match v1 {
            Val::Finite(a) => Val::Finite(a * (q as i64 + 1) - v2),
            Val::PlusInfinity => Val::PlusInfinity,
        };
        Self { p, s, q, v0, v1, v2, vj, kind: PlaceKind::of_v0(v0) }
    }

    /// Checks the stored invariants (used on hand-built profiles).
    pub fn validate(&self) -> Result<(), TowerError> {
        if self.q != self.p.pow(self.s) {
            return Err(TowerError::InvalidProfile("q ≠ p^s".into()));
        }
        if self.kind != PlaceKind::of_v0(self.v0) {
            return Err(TowerError::InvalidProfile(format!("v0 = {} does not fit {:?}", self.v0, self.kind)));
        }
        if *self != Self::new(self.p, self.s, self.v0, self.v1.clone(), self.v2) {
            return Err(TowerError::InvalidProfile("vj ≠ v1(q+1) − v2".into()));
        }
        Ok(())
    }
}

impl fmt::Display for ValuationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} v0={} v1={} v2={} vj={}", self.q, self.v0, self.v1, self.v2, self.vj)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TowerCase {
    InfWild { m: u32 },
    InfTame,
    FinWild,
    FinTame,
    AboveTPos { m: u32 },
    AboveTNonpos,
    AboveTTame,
}

impl TowerCase {
    pub fn m(&self) -> Option<u32> {
        match *self {
            TowerCase::InfWild { m } | TowerCase::AboveTPos { m } => Some(m),
            _ => None,
        }
    }

    pub fn is_wild(&self) -> bool {
        matches!(self, TowerCase::InfWild { .. } | TowerCase::FinWild)
    }

    pub fn name(&self) -> &'static str {
        match self {
            TowerCase::InfWild { .. } => "InfWild",
            TowerCase::InfTame => "InfTame",
            TowerCase::FinWild => "FinWild",
            TowerCase::FinTame => "FinTame",
            TowerCase::AboveTPos { .. } => "AboveTPos",
            TowerCase::AboveTNonpos => "AboveTNonpos",
            TowerCase::AboveTTame => "AboveTTame",
        }
    }
}

impl fmt::Display for TowerCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m() {
            Some(m) => write!(f, "{}(m={m})", self.name()),
            None => write!(f, "{}", self.name()),
        }
    }
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn qpow(q: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(q), k as usize)
}

fn rat(n: BigInt, d: BigInt) -> ExactRational {
    ExactRational::new(n, d)
}

/// Total classification into the case split.
pub fn classify(pr: &ValuationProfile) -> TowerCase {
    let q = pr.q as i128;
    let v0 = pr.v0 as i128;
    let vj = match pr.vj {
        Val::Finite(x) => x as i128,
        Val::PlusInfinity => {
            return match pr.kind {
                PlaceKind::InfinitePlace => TowerCase::InfTame,
                PlaceKind::FiniteCoprimePlace => TowerCase::FinTame,
                PlaceKind::AboveUniformizerPlace => TowerCase::AboveTTame,
            }
        }
    };
    match pr.kind {
        PlaceKind::InfinitePlace => {
            if vj >= v0 * q {
                return TowerCase::InfTame;
            }
            // vj ∈ (v0 q^{m+1}, v0 q^m]
            let mut m = 1u32;
            let mut lo = v0 * q * q;
            while vj <= lo {
                m += 1;
                lo *= q;
            }
            TowerCase::InfWild { m }
        }
        PlaceKind::FiniteCoprimePlace => {
            if vj < 0 {
                TowerCase::FinWild
            } else {
                TowerCase::FinTame
            }
        }
        PlaceKind::AboveUniformizerPlace => {
            if vj >= v0 * q {
                TowerCase::AboveTTame
            } else if vj <= 0 {
                TowerCase::AboveTNonpos
            } else {
                // smallest m ≥ 1 with vj·q^{m−1} ≥ v0
                let mut m = 1u32;
                let mut scaled = vj;
                while scaled < v0 {
                    m += 1;
                    scaled *= q;
                }
                TowerCase::AboveTPos { m }
            }
        }
    }
}

fn check_case(c: TowerCase, pr: &ValuationProfile) -> Result<(), TowerError> {
    let actual = classify(pr);
    if actual != c {
        return Err(TowerError::InconsistentCase { case: c, actual });
    }
    Ok(())
}

fn finite_v1(pr: &ValuationProfile) -> BigInt {
    match pr.v1 {
        Val::Finite(a) => big(a),
        Val::PlusInfinity => unreachable!("wild and mixed cases have a₁ ≠ 0"),
    }
}

/// v(ξ_i) from the closed forms, exact.
pub fn xi_val(c: TowerCase, pr: &ValuationProfile, i: i64) -> Result<ExactRational, TowerError> {
    check_case(c, pr)?;
    if i == 0 {
        return Err(TowerError::ZeroIndex);
    }
    let n = i.unsigned_abs() as u32;
    let q = pr.q;
    let qb = big(q as i64);
    let (v0, v2) = (big(pr.v0), big(pr.v2));
    let nb = big(n as i64);
    let one = BigInt::one();
    let val = match c {
        TowerCase::InfWild { m } => {
            let v1 = finite_v1(pr);
            if i < 0 {
                -(ExactRational::from_integer(&v0 * (&nb - 1)) + rat(&v1 - &v0, &qb - 1))
            } else {
                let k = n.min(m);
                let head = rat(&v2 + &v1 * (qpow(q, k) - &qb - 1), (&qb - 1) * qpow(q, k));
                if n <= m {
                    -head
                } else {
                    -(ExactRational::from_integer(&v0 * big((n - m) as i64)) + head)
                }
            }
        }
        TowerCase::InfTame => {
            -(ExactRational::from_integer(&v0 * (&nb - 1)) + rat(&v2 - &v0, &qb * &qb - 1))
        }
        TowerCase::FinWild => {
            let v1 = finite_v1(pr);
            if i < 0 {
                -rat(v1, &qb - 1)
            } else {
                -rat(&v2 + &v1 * (qpow(q, n) - &qb - 1), (&qb - 1) * qpow(q, n))
            }
        }
        TowerCase::FinTame => -rat(v2, &qb * &qb - 1),
        TowerCase::AboveTPos { m } => {
            let v1 = finite_v1(pr);
            if i < 0 {
                if n <= m {
                    -rat(-&v0 + &v1 * qpow(q, n - 1), (&qb - 1) * qpow(q, n - 1))
                } else {
                    let tail = rat(&v2 * qpow(q, m - 1) * (qpow(q, 2 * n - 2 * m) - &one), &qb + 1);
                    let numer = ExactRational::from_integer(-&v0 + &v1 * qpow(q, m - 1)) + tail;
                    -(numer / ExactRational::from_integer((&qb - 1) * qpow(q, 2 * n - m - 1)))
                }
            } else {
                let numer = ExactRational::from_integer(-v1) + rat(&v2 * (qpow(q, 2 * n - 1) + &one), &qb + 1);
                -(numer / ExactRational::from_integer((&qb - 1) * qpow(q, 2 * n - 1)))
            }
        }
        TowerCase::AboveTNonpos => {
            let v1 = finite_v1(pr);
            if i < 0 {
                -rat(-&v0 + &v1 * qpow(q, n - 1), (&qb - 1) * qpow(q, n - 1))
            } else {
                -rat(&v2 + &v1 * (qpow(q, n) - &qb - 1), (&qb - 1) * qpow(q, n))
            }
        }
        TowerCase::AboveTTame => {
            -rat(-&v0 + &v2 * qpow(q, 2 * n - 2), (&qb * &qb - 1) * qpow(q, 2 * n - 2))
        }
    };
    Ok(val)
}

/// One entry of the ordering chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderEntry {
    pub index: i64,
    pub value: ExactRational,
    /// Value equals the next entry's value.
    pub tie_with_next: bool,
}

/// Sort key: descending value, then negative indices first, then |i| ascending.
pub fn chain_order(a: &(i64, ExactRational), b: &(i64, ExactRational)) -> std::cmp::Ordering {
    b.1.cmp(&a.1)
        .then_with(|| (a.0 > 0).cmp(&(b.0 > 0)))
        .then_with(|| a.0.unsigned_abs().cmp(&b.0.unsigned_abs()))
}

/// The 2n indices ±1..±n by descending v(ξ_i), with tie flags.
pub fn ordering(c: TowerCase, pr: &ValuationProfile, n: u32) -> Result<Vec<OrderEntry>, TowerError> {
    let mut vals = Vec::with_capacity(2 * n as usize);
    for k in 1..=n as i64 {
        vals.push((-k, xi_val(c, pr, -k)?));
        vals.push((k, xi_val(c, pr, k)?));
    }
    Ok(chain_from_values(vals))
}

/// Sorts (index, value) pairs into a chain and sets tie flags.
pub fn chain_from_values(mut vals: Vec<(i64, ExactRational)>) -> Vec<OrderEntry> {
    vals.sort_by(chain_order);
    let ties: Vec<bool> = (0..vals.len()).map(|k| k + 1 < vals.len() && vals[k].1 == vals[k + 1].1).collect();
    vals.into_iter()
        .zip(ties)
        .map(|((index, value), tie_with_next)| OrderEntry { index, value, tie_with_next })
        .collect()
}

/// Vertex x-coordinates of a Newton polygon shape, among {0, 1, q, q²}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolygonShape {
    pub vertices: Vec<u64>,
}

impl PolygonShape {
    pub fn segment_count(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

impl fmt::Display for PolygonShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vertices.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

/// Predicted shape of the Newton polygon of φ_π(X) − ξ_i.
pub fn step_polygon(c: TowerCase, pr: &ValuationProfile, i: i64) -> Result<PolygonShape, TowerError> {
    check_case(c, pr)?;
    if i == 0 {
        return Err(TowerError::ZeroIndex);
    }
    let q = pr.q;
    let n = i.unsigned_abs() as u32;
    let full = vec![0, 1, q, q * q];
    let mid = vec![0, q, q * q];
    let tame = vec![0, 1, q * q];
    let single = vec![0, q * q];
    let vertices = match c {
        TowerCase::InfWild { m } => {
            if i > 0 && n < m {
                mid
            } else {
                full
            }
        }
        // with a₁ = 0 the point (q, v1) is absent; P1 is never a vertex here
        TowerCase::InfTame => tame,
        TowerCase::FinWild => mid,
        TowerCase::FinTame => single,
        TowerCase::AboveTPos { m } => {
            if i < 0 && n < m {
                mid
            } else {
                single
            }
        }
        TowerCase::AboveTNonpos => {
            if i < 0 || pr.vj < Val::Finite(0) {
                mid
            } else {
                single
            }
        }
        TowerCase::AboveTTame => single,
    };
    Ok(PolygonShape { vertices })
}

/// lcm of the denominators of v(ξ_{±1..±n}).
pub fn denominator_lcm(c: TowerCase, pr: &ValuationProfile, n: u32) -> Result<u64, TowerError> {
    let mut acc = 1u64;
    for k in 1..=n as i64 {
        for i in [-k, k] {
            let v = xi_val(c, pr, i)?;
            acc = lcm_u64(acc, crate::algebra::rational::denom_u64(&v));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q as r;

    fn prof(p: u64, v0: i64, v1: i64, v2: i64) -> ValuationProfile {
        ValuationProfile::new(p, 1, v0, Val::Finite(v1), v2)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&prof(3, -1, -2, 0)), TowerCase::InfWild { m: 1 });
        assert_eq!(prof(3, -1, -1, -1).vj, Val::Finite(-3));
        assert_eq!(classify(&prof(3, -1, -1, -1)), TowerCase::InfTame);
        assert_eq!(classify(&prof(3, 1, 1, 2)), TowerCase::AboveTPos { m: 1 });
        // vj = -8 = v0·q^3 sits on the closed end of (-16, -8]
        assert_eq!(classify(&prof(2, -1, -2, 2)), TowerCase::InfWild { m: 3 });
        assert_eq!(classify(&prof(2, 2, 1, 2)), TowerCase::AboveTPos { m: 2 });
        assert_eq!(classify(&ValuationProfile::new(3, 1, 1, Val::PlusInfinity, 0)), TowerCase::AboveTTame);
    }

    #[test]
    fn xi_examples() {
        let pr = prof(3, -1, -2, 0);
        let c = classify(&pr);
        assert_eq!(xi_val(c, &pr, -1).unwrap(), r(1, 2));
        assert_eq!(xi_val(c, &pr, 1).unwrap(), r(-1, 3));
        assert_eq!(xi_val(c, &pr, -2).unwrap(), r(3, 2));
        assert_eq!(xi_val(c, &pr, 2).unwrap(), r(2, 3));

        let fw = prof(3, 0, -1, 0);
        for n in 1..5 {
            assert_eq!(xi_val(TowerCase::FinWild, &fw, -n).unwrap(), r(1, 2));
        }
        assert_eq!(xi_val(TowerCase::FinWild, &fw, 1).unwrap(), r(-1, 6));
        assert_eq!(xi_val(TowerCase::FinWild, &fw, 2).unwrap(), r(5, 18));

        let an = prof(3, 1, -1, 0);
        let c = TowerCase::AboveTNonpos;
        assert_eq!(xi_val(c, &an, -1).unwrap(), r(1, 1));
        assert_eq!(xi_val(c, &an, -2).unwrap(), r(2, 3));
        assert_eq!(xi_val(c, &an, 1).unwrap(), r(-1, 6));
        assert_eq!(xi_val(c, &an, 2).unwrap(), r(5, 18));

        assert!(matches!(xi_val(TowerCase::FinTame, &an, 1), Err(TowerError::InconsistentCase { .. })));
        assert_eq!(xi_val(c, &an, 0), Err(TowerError::ZeroIndex));
    }
}
