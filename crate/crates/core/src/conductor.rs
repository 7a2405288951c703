//! Local and global 1-conductors, the J-height, and the Szpiro check over F_q(t).

use crate::algebra::{place_valuation, bad_places, qi, ExactRational, Place, Poly, Val};
use crate::drinfeld::{j_invariant, DrinfeldModule};
use crate::herbrand::heuristic_e;
use crate::valtower::{classify, PlaceKind, TowerCase, ValuationProfile};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalConductorResult {
    Value(ExactRational),
    Unsupported(String),
}

impl LocalConductorResult {
    pub fn value(&self) -> Option<&ExactRational> {
        match self {
            LocalConductorResult::Value(v) => Some(v),
            LocalConductorResult::Unsupported(_) => None,
        }
    }
}

impl fmt::Display for LocalConductorResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalConductorResult::Value(v) => write!(f, "{v}"),
            LocalConductorResult::Unsupported(r) => write!(f, "unsupported ({r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unsupported at place {place}: {reason}")]
pub struct Unsupported {
    pub place: String,
    pub reason: String,
}

fn frac(n: i64, d: i64) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(d))
}

/// Closed-form local conductor; depends on v0 and v(j) only.
pub fn local_conductor(pr: &ValuationProfile) -> LocalConductorResult {
    let q = pr.q as i64;
    let p = pr.p as i64;
    let vj = match pr.vj {
        Val::PlusInfinity => return LocalConductorResult::Value(qi(0)),
        Val::Finite(v) => v,
    };
    match pr.kind {
        PlaceKind::InfinitePlace => {
            let v0q = pr.v0 * q;
            if vj >= v0q {
                LocalConductorResult::Value(qi(0))
            } else if vj >= v0q - q + 1 {
                LocalConductorResult::Unsupported(format!("v(j) = {vj} in [v0 q − q + 1, v0 q) = [{}, {v0q})", v0q - q + 1))
            } else if vj.rem_euclid(p) == 0 {
                LocalConductorResult::Unsupported(format!("p = {p} divides v(j) = {vj}"))
            } else {
                LocalConductorResult::Value(frac(-vj + v0q, q - 1))
            }
        }
        PlaceKind::FiniteCoprimePlace => {
            if vj >= 0 {
                LocalConductorResult::Value(qi(0))
            } else if vj.rem_euclid(p) == 0 {
                LocalConductorResult::Unsupported(format!("p = {p} divides v(j) = {vj}"))
            } else {
                LocalConductorResult::Value(frac(-vj, q - 1))
            }
        }
        PlaceKind::AboveUniformizerPlace => {
            LocalConductorResult::Unsupported("place divides π; re-profile with a coprime π".into())
        }
    }
}

/// ∫₀^∞ (2 − rank) dy for a step function given as (right end, rank) pieces
/// starting at 0; rank is 2 after the last piece.
pub fn integrate_rank_drop(pieces: &[(ExactRational, u32)]) -> ExactRational {
    let mut acc = qi(0);
    let mut left = qi(0);
    for (right, rank) in pieces {
        acc += (right - &left) * qi(2 - *rank as i64);
        left = right.clone();
    }
    acc
}

/// The invariants drop to rank 1 (the ξ_{−•} line) on (0, b] and are
/// everything above b, so the integral is b.
pub fn conductor_from_filtration(upper_break: &ExactRational) -> ExactRational {
    assert!(!upper_break.is_negative(), "upper break must be ≥ 0");
    integrate_rank_drop(&[(upper_break.clone(), 1)])
}

/// π = t unless the place is (t), where π = t − 1.
pub fn uniformizer_for(m: &DrinfeldModule, place: &Place) -> Poly {
    let f = m.field();
    if place.divides_t() {
        Poly::linear(f, f.one())
    } else {
        Poly::x(f)
    }
}

/// Valuation profile of (π, a₁, a₂) at `place`.
pub fn profile_with(m: &DrinfeldModule, place: &Place, pi: &Poly) -> ValuationProfile {
    let f = m.field();
    let v = |x| place_valuation(x, place);
    let pi = crate::algebra::RationalFunction::from_poly(pi.clone());
    let v0 = *v(&pi).finite().expect("π ≠ 0");
    let v2 = v(m.a2()).finite().copied().expect("a₂ ≠ 0");
    ValuationProfile::new(f.p() as u64, f.s(), v0, v(m.a1()), v2)
}

pub fn profile_at(m: &DrinfeldModule, place: &Place) -> ValuationProfile {
    profile_with(m, place, &uniformizer_for(m, place))
}

/// j-height: Σ deg(v)·max(−v(j), 0).
pub fn j_height(m: &DrinfeldModule) -> ExactRational {
    let j = j_invariant(m);
    let mut h = 0i64;
    for place in bad_places(&j) {
        if let Val::Finite(v) = place_valuation(&j, &place) {
            h += place.degree() as i64 * (-v).max(0);
        }
    }
    qi(h)
}

/// One row of the per-place table.
#[derive(Clone, Debug)]
pub struct PlaceRow {
    pub place: Place,
    pub degree: u32,
    pub profile: ValuationProfile,
    pub case: TowerCase,
    /// Tame index guess for wild cases (value, exact flag).
    pub e: Option<(u64, bool)>,
    pub local: LocalConductorResult,
}

pub fn place_table(m: &DrinfeldModule) -> Vec<PlaceRow> {
    bad_places(&j_invariant(m))
        .into_iter()
        .map(|place| {
            let profile = profile_at(m, &place);
            let case = classify(&profile);
            let e = heuristic_e(&profile, case).ok();
            let local = local_conductor(&profile);
            PlaceRow { degree: place.degree(), place, profile, case, e, local }
        })
        .collect()
}

fn sum_rows(rows: &[PlaceRow]) -> Result<ExactRational, Unsupported> {
    let mut f = qi(0);
    for r in rows {
        match &r.local {
            LocalConductorResult::Value(v) => f += v * qi(r.degree as i64),
            LocalConductorResult::Unsupported(reason) => {
                return Err(Unsupported { place: r.place.to_string(), reason: reason.clone() })
            }
        }
    }
    Ok(f)
}

/// f(φ) = Σ deg(v)·f_v(φ).
pub fn global_conductor(m: &DrinfeldModule) -> Result<ExactRational, Unsupported> {
    sum_rows(&place_table(m))
}

#[derive(Clone, Debug)]
pub struct SzpiroReport {
    pub lhs: ExactRational,
    pub rhs: ExactRational,
    pub conductor: ExactRational,
    pub holds: bool,
    pub equality: bool,
    /// Some infinite place has v(j) > v0 q.
    pub strict_predicate: bool,
    /// Some infinite place has v(j) = v0 q exactly.
    pub boundary: bool,
    pub rows: Vec<PlaceRow>,
}

/// h_J ≤ f·(q − 1) + q.
pub fn szpiro_check(m: &DrinfeldModule) -> Result<SzpiroReport, Unsupported> {
    let rows = place_table(m);
    let conductor = sum_rows(&rows)?;
    let q = qi(m.q() as i64);
    let lhs = j_height(m);
    let rhs = &conductor * (&q - qi(1)) + &q;
    let mut strict_predicate = false;
    let mut boundary = false;
    for r in rows.iter().filter(|r| r.place.is_infinite()) {
        let v0q = Val::Finite(r.profile.v0 * r.profile.q as i64);
        strict_predicate |= r.profile.vj > v0q;
        boundary |= r.profile.vj == v0q;
    }
    Ok(SzpiroReport {
        holds: lhs <= rhs,
        equality: lhs == rhs,
        lhs,
        rhs,
        conductor,
        strict_predicate,
        boundary,
        rows,
    })
}

impl SzpiroReport {
    /// The predicate agrees with the outcome: strict iff some infinite place
    /// has v(j) > v0 q, boundary cases counted as equality.
    pub fn predicate_consistent(&self) -> bool {
        self.strict_predicate == !self.equality
    }
}

pub fn is_zero_conductor(x: &LocalConductorResult) -> bool {
    matches!(x, LocalConductorResult::Value(v) if v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_field, parse_expr, q as r};

    fn module(p: u32, a1: &str, a2: &str) -> DrinfeldModule {
        let f = make_field(p, 1).unwrap();
        DrinfeldModule::new(parse_expr(&f, a1).unwrap(), parse_expr(&f, a2).unwrap()).unwrap()
    }

    fn prof(v0: i64, v1: i64, v2: i64) -> ValuationProfile {
        ValuationProfile::new(3, 1, v0, Val::Finite(v1), v2)
    }

    #[test]
    fn local_examples() {
        // vj = −8 at infinity
        assert_eq!(local_conductor(&prof(-1, -2, 0)), LocalConductorResult::Value(r(5, 2)));
        // vj = −4 at a finite place
        assert_eq!(local_conductor(&prof(0, -1, 0)), LocalConductorResult::Value(qi(2)));
        // vj = −4 at infinity: gap
        assert!(matches!(local_conductor(&prof(-1, -1, 0)), LocalConductorResult::Unsupported(_)));
        assert!(matches!(local_conductor(&prof(0, -1, -1)), LocalConductorResult::Unsupported(_)));
        assert!(is_zero_conductor(&local_conductor(&prof(-1, 0, 0))));
    }

    #[test]
    fn filtration_integral() {
        assert_eq!(conductor_from_filtration(&r(5, 2)), r(5, 2));
        assert_eq!(conductor_from_filtration(&qi(0)), qi(0));
        assert_eq!(integrate_rank_drop(&[(qi(1), 0), (qi(3), 1)]), qi(4));
    }

    #[test]
    fn heights() {
        assert_eq!(j_height(&module(3, "t^2", "1")), qi(8));
        // j = (t−1)^{−4}: a₁ = 1/(t−1), a₂ = 1
        assert_eq!(j_height(&module(3, "1/(t-1)", "1")), qi(4));
        assert_eq!(j_height(&module(3, "1", "2")), qi(0));
        assert_eq!(j_height(&module(3, "0", "t")), qi(0));
        // a place of degree 2 counts twice
        assert_eq!(j_height(&module(3, "1/(t^2+1)", "1")), qi(8));
    }

    #[test]
    fn global_examples() {
        assert_eq!(global_conductor(&module(3, "t^2", "1")).unwrap(), r(5, 2));
        assert_eq!(global_conductor(&module(3, "1/(t-1)", "1")).unwrap(), qi(2));
        assert_eq!(global_conductor(&module(3, "t", "t")).unwrap(), qi(0));
        let bad = global_conductor(&module(3, "t", "1")).unwrap_err();
        assert_eq!(bad.place, "inf");
    }

    #[test]
    fn szpiro_examples() {
        let a = szpiro_check(&module(3, "t^2", "1")).unwrap();
        assert_eq!((a.lhs.clone(), a.rhs.clone()), (qi(8), qi(8)));
        assert!(a.holds && a.equality && !a.strict_predicate && !a.boundary);
        let b = szpiro_check(&module(3, "1/(t-1)", "1")).unwrap();
        assert_eq!((b.lhs.clone(), b.rhs.clone()), (qi(4), qi(7)));
        assert!(b.holds && !b.equality && b.strict_predicate);
        let c = szpiro_check(&module(3, "t", "t")).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (qi(3), qi(3)));
        assert!(c.equality && c.boundary && c.predicate_consistent());
    }

    #[test]
    fn profiles_use_coprime_uniformizer() {
        let m = module(3, "t", "t");
        let pt = Place::parse(m.field(), "t").unwrap();
        let pr = profile_at(&m, &pt);
        assert_eq!((pr.v0, pr.vj.clone()), (0, Val::Finite(3)));
        assert_eq!(profile_at(&m, &Place::Infinite).v0, -1);
    }
}
