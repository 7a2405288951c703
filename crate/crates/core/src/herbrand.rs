//! Piecewise-linear ψ-functions: Artin–Schreier and tame building blocks,
//! composition, inversion, and the closed-form ψ of the division tower.

use crate::algebra::rational::{denom_u64, lcm_u64};
use crate::algebra::{qi, ExactRational, Val};
use crate::valtower::{classify, xi_val, TowerCase, TowerError, ValuationProfile};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HerbrandError {
    #[error("Artin–Schreier break must be positive, got {0}")]
    NonpositiveBreak(ExactRational),
    #[error("tame index {e} is divisible by p = {p}")]
    WildIndex { e: u64, p: u64 },
    #[error("{0} is not a wild case")]
    NotWildCase(TowerCase),
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Continuous increasing piecewise-linear map on [−1, ∞) with ψ(−1) = −1.
///
/// `points[k]` starts piece k, which has slope `slopes[k]`; the last piece is
/// unbounded. Kept canonical: no equal neighbouring slopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinear {
    points: Vec<(ExactRational, ExactRational)>,
    slopes: Vec<ExactRational>,
}

impl PiecewiseLinear {
    pub fn identity() -> Self {
        Self { points: vec![(qi(-1), qi(-1))], slopes: vec![qi(1)] }
    }

    /// Builds from break x-values (after −1) and one slope per piece,
    /// fixing values by continuity from (−1, −1).
    pub fn from_breaks(breaks: &[ExactRational], slopes: &[ExactRational]) -> Self {
        assert_eq!(breaks.len() + 1, slopes.len(), "one slope per piece");
        let mut points = vec![(qi(-1), qi(-1))];
        for (k, x) in breaks.iter().enumerate() {
            let (x0, y0) = points.last().unwrap().clone();
            assert!(*x > x0, "breaks must increase");
            points.push((x.clone(), &y0 + &slopes[k] * (x - &x0)));
        }
        Self::canonical(points, slopes.to_vec())
    }

    /// Builds from affine pieces (start x, slope, intercept); `None` if the
    /// pieces do not join continuously or the first does not start at −1.
    pub fn from_affine(pieces: &[(ExactRational, ExactRational, ExactRational)]) -> Option<Self> {
        let first = pieces.first()?;
        if first.0 != qi(-1) {
            return None;
        }
        let mut points = Vec::new();
        let mut slopes = Vec::new();
        for (k, (x, a, b)) in pieces.iter().enumerate() {
            let y = a * x + b;
            if k > 0 {
                let (pa, pb) = (&pieces[k - 1].1, &pieces[k - 1].2);
                if pa * x + pb != y || *x <= pieces[k - 1].0 {
                    return None;
                }
            }
            points.push((x.clone(), y));
            slopes.push(a.clone());
        }
        Some(Self::canonical(points, slopes))
    }

    fn canonical(points: Vec<(ExactRational, ExactRational)>, slopes: Vec<ExactRational>) -> Self {
        let mut p2: Vec<(ExactRational, ExactRational)> = Vec::with_capacity(points.len());
        let mut s2: Vec<ExactRational> = Vec::with_capacity(slopes.len());
        for (pt, s) in points.into_iter().zip(slopes) {
            if s2.last() == Some(&s) {
                continue;
            }
            if let Some(last) = p2.last() {
                if last.0 == pt.0 {
                    p2.pop();
                    s2.pop();
                }
            }
            p2.push(pt);
            s2.push(s);
        }
        Self { points: p2, slopes: s2 }
    }

    /// Break x-values after the starting point −1.
    pub fn breaks(&self) -> Vec<ExactRational> {
        self.points.iter().skip(1).map(|p| p.0.clone()).collect()
    }
    pub fn points(&self) -> &[(ExactRational, ExactRational)] {
        &self.points
    }
    pub fn slopes(&self) -> &[ExactRational] {
        &self.slopes
    }
    pub fn last_slope(&self) -> &ExactRational {
        self.slopes.last().unwrap()
    }

    fn piece_at(&self, x: &ExactRational) -> usize {
        // last piece whose start is ≤ x; points before −1 use the first piece
        self.points.iter().rposition(|p| p.0 <= *x).unwrap_or(0)
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        let k = self.piece_at(x);
        let (x0, y0) = &self.points[k];
        y0 + &self.slopes[k] * (x - x0)
    }

    /// Slope of the piece containing [x, x + ε).
    pub fn slope_right_of(&self, x: &ExactRational) -> &ExactRational {
        &self.slopes[self.piece_at(x)]
    }

    /// Functional inverse (slopes are positive).
    pub fn invert(&self) -> Self {
        let points = self.points.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        let slopes = self.slopes.iter().map(|s| s.recip()).collect();
        Self::canonical(points, slopes)
    }

    /// ψ(y) = y on [−1, 0], convex, ψ(0) = 0.
    pub fn is_valid_psi(&self) -> bool {
        let identity_start = self.slopes[0] == qi(1) && self.points.get(1).map_or(true, |p| p.0 >= qi(0));
        let convex = self.slopes.windows(2).all(|w| w[0] <= w[1]);
        let positive = self.slopes.iter().all(|s| s.is_positive());
        identity_start && convex && positive && self.eval(&qi(0)).is_zero()
    }

    pub fn has_integer_slopes(&self) -> bool {
        self.slopes.iter().all(|s| s.is_integer())
    }
}

fn fmt_affine(a: &ExactRational, b: &ExactRational) -> String {
    let lin = if a.is_one() { "y".to_string() } else { format!("{a}y") };
    if b.is_zero() {
        lin
    } else if b.is_negative() {
        format!("{lin}-{}", -b)
    } else {
        format!("{lin}+{b}")
    }
}

impl fmt::Display for PiecewiseLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, (x, y)) in self.points.iter().enumerate() {
            let a = &self.slopes[k];
            let b = y - a * x;
            let end = self.points.get(k + 1).map_or("inf".to_string(), |p| p.0.to_string());
            parts.push(format!("{} on [{x},{end}]", fmt_affine(a, &b)));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// outer ∘ inner.
pub fn compose(outer: &PiecewiseLinear, inner: &PiecewiseLinear) -> PiecewiseLinear {
    let inv = inner.invert();
    let mut xs: Vec<ExactRational> = inner.points.iter().map(|p| p.0.clone()).collect();
    for (xo, _) in &outer.points {
        if *xo > qi(-1) {
            xs.push(inv.eval(xo));
        }
    }
    xs.sort();
    xs.dedup();
    let mut points = Vec::with_capacity(xs.len());
    let mut slopes = Vec::with_capacity(xs.len());
    for x in xs {
        let y = inner.eval(&x);
        let s = inner.slope_right_of(&x) * outer.slope_right_of(&y);
        points.push((x, outer.eval(&y)));
        slopes.push(s);
    }
    PiecewiseLinear::canonical(points, slopes)
}

/// ψ of an Artin–Schreier extension with break r: y on [−1, r], qy − (q−1)r after.
pub fn psi_artin_schreier(q: u64, r: &ExactRational) -> Result<PiecewiseLinear, HerbrandError> {
    if !r.is_positive() {
        return Err(HerbrandError::NonpositiveBreak(r.clone()));
    }
    Ok(PiecewiseLinear::from_breaks(std::slice::from_ref(r), &[qi(1), qi(q as i64)]))
}

/// Whether p divides the numerator of a break (the break is then not of the
/// standard Artin–Schreier form; reported, not rejected).
pub fn break_numerator_divisible(p: u64, r: &ExactRational) -> bool {
    (r.numer() % BigInt::from(p)).is_zero()
}

/// ψ of a tame extension of index e: y on [−1, 0], ey after.
pub fn psi_tame(e: u64, p: u64) -> Result<PiecewiseLinear, HerbrandError> {
    if e % p == 0 {
        return Err(HerbrandError::WildIndex { e, p });
    }
    Ok(PiecewiseLinear::from_breaks(&[qi(0)], &[qi(1), qi(e as i64)]))
}

/// E = lcm(den v(ξ₋₁), den v(ξ₁)) / q: a lower bound for the tame index.
/// The second component (exactness) is always false.
pub fn heuristic_e(pr: &ValuationProfile, c: TowerCase) -> Result<(u64, bool), HerbrandError> {
    if !c.is_wild() {
        return Err(HerbrandError::NotWildCase(c));
    }
    let a = xi_val(c, pr, -1)?;
    let b = xi_val(c, pr, 1)?;
    let l = lcm_u64(denom_u64(&a), denom_u64(&b));
    if l % pr.q != 0 {
        return Err(HerbrandError::UnsupportedRange(format!(
            "q = {} does not divide the denominator lcm {l} (p | v(j)?)",
            pr.q
        )));
    }
    Ok((l / pr.q, false))
}

/// Breaks r_1..r_n of the wild tower, with the tame index used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerBreaks {
    pub e: u64,
    pub r: Vec<ExactRational>,
    /// Always false: no exact source for E is implemented.
    pub exact_e: bool,
}

fn wild_range_check(c: TowerCase, pr: &ValuationProfile) -> Result<i64, HerbrandError> {
    let actual = classify(pr);
    if actual != c {
        return Err(TowerError::InconsistentCase { case: c, actual }.into());
    }
    let vj = match pr.vj {
        Val::Finite(v) => v,
        Val::PlusInfinity => return Err(HerbrandError::NotWildCase(c)),
    };
    match c {
        TowerCase::InfWild { .. } => {
            let bound = pr.v0 * pr.q as i64 - pr.q as i64 + 1;
            if vj >= bound {
                return Err(HerbrandError::UnsupportedRange(format!(
                    "v(j) = {vj} lies in [v0 q − q + 1, v0 q) = [{bound}, {})",
                    pr.v0 * pr.q as i64
                )));
            }
        }
        TowerCase::FinWild => {}
        other => return Err(HerbrandError::NotWildCase(other)),
    }
    if vj.rem_euclid(pr.p as i64) == 0 {
        return Err(HerbrandError::UnsupportedRange(format!("p = {} divides v(j) = {vj}", pr.p)));
    }
    Ok(vj)
}

/// r_n = E(−vj + v0 q^n)/(q−1) at infinity, r = E(−vj)/(q−1) at a finite place.
pub fn tower_breaks(c: TowerCase, pr: &ValuationProfile, n: u32, e: u64) -> Result<TowerBreaks, HerbrandError> {
    let vj = wild_range_check(c, pr)?;
    let q = pr.q as i64;
    let eq = ExactRational::from_integer(BigInt::from(e));
    let levels = match c {
        TowerCase::InfWild { m } => n.min(m),
        _ => n,
    };
    let mut r = Vec::with_capacity(levels as usize);
    for k in 1..=levels {
        let v0_term = match c {
            TowerCase::InfWild { .. } => BigInt::from(pr.v0) * num_traits::pow(BigInt::from(q), k as usize),
            _ => BigInt::zero(),
        };
        let num = BigInt::from(-vj) + v0_term;
        r.push(&eq * ExactRational::new(num, BigInt::from(q - 1)));
    }
    Ok(TowerBreaks { e, r, exact_e: false })
}

/// Closed-form ψ_{K_n/K}. For InfWild and n > m this is ψ_{K_m/K}; tame
/// cases give psi_tame of the tame index read off the valuation denominator.
pub fn psi_tower(c: TowerCase, pr: &ValuationProfile, n: u32, e: u64) -> Result<PiecewiseLinear, HerbrandError> {
    match c {
        TowerCase::InfTame | TowerCase::FinTame => {
            let actual = classify(pr);
            if actual != c {
                return Err(TowerError::InconsistentCase { case: c, actual }.into());
            }
            let et = denom_u64(&xi_val(c, pr, 1)?);
            return psi_tame(et, pr.p);
        }
        TowerCase::AboveTPos { .. } | TowerCase::AboveTNonpos | TowerCase::AboveTTame => {
            return Err(HerbrandError::UnsupportedRange("no tower ψ at places dividing π".into()));
        }
        _ => {}
    }
    let br = tower_breaks(c, pr, n, e)?;
    let q = qi(pr.q as i64);
    let eq = qi(e as i64);
    let mut pieces = vec![(qi(-1), qi(1), qi(0)), (qi(0), eq.clone(), qi(0))];
    match c {
        TowerCase::InfWild { .. } => {
            let k = br.r.len();
            let r = |i: usize| &br.r[i - 1]; // r_i, 1-based
            let mut qj = qi(1);
            let mut intercept = qi(0);
            for j in 1..=k {
                // piece j starts at r_{k−j+1}/E with slope q^j E
                intercept -= &qj * (&q - qi(1)) * r(k - j + 1);
                qj *= &q;
                pieces.push((r(k - j + 1) / &eq, &qj * &eq, intercept.clone()));
            }
        }
        TowerCase::FinWild => {
            let r = &br.r[0];
            let qn = num_traits::pow(q.clone(), n as usize);
            pieces.push((r / &eq, &qn * &eq, -(&qn - qi(1)) * r));
        }
        _ => unreachable!(),
    }
    Ok(PiecewiseLinear::from_affine(&pieces).expect("closed-form tower pieces join continuously"))
}

/// Upper break of the wild group at level l: ψ_{K_n/K}(r_l / E).
pub fn filtration_break(
    c: TowerCase,
    pr: &ValuationProfile,
    n: u32,
    l: u32,
    e: u64,
) -> Result<ExactRational, HerbrandError> {
    let br = tower_breaks(c, pr, n, e)?;
    if l == 0 || l as usize > br.r.len() {
        return Err(HerbrandError::UnsupportedRange(format!("level {l} outside 1..={}", br.r.len())));
    }
    let psi = psi_tower(c, pr, n, e)?;
    Ok(psi.eval(&(&br.r[l as usize - 1] / qi(e as i64))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q as r;

    fn inf_set() -> ValuationProfile {
        ValuationProfile::new(3, 1, -1, Val::Finite(-2), 0)
    }
    fn fin_set() -> ValuationProfile {
        ValuationProfile::new(3, 1, 0, Val::Finite(-1), 0)
    }

    #[test]
    fn compose_examples() {
        let as1 = psi_artin_schreier(3, &qi(1)).unwrap();
        let as3 = psi_artin_schreier(3, &qi(3)).unwrap();
        let c = compose(&as3, &as1);
        assert_eq!(c.slopes(), &[qi(1), qi(3), qi(9)]);
        assert_eq!(c.breaks(), vec![qi(1), r(5, 3)]);
        assert_eq!(compose(&PiecewiseLinear::identity(), &as1), as1);
        let t = compose(&psi_tame(2, 3).unwrap(), &psi_tame(4, 3).unwrap());
        assert_eq!(t, psi_tame(8, 3).unwrap());
    }

    #[test]
    fn building_blocks() {
        let a = psi_artin_schreier(3, &qi(4)).unwrap();
        assert_eq!(a.eval(&qi(5)), qi(7));
        assert_eq!(a.eval(&qi(4)), qi(4));
        let b = psi_artin_schreier(2, &qi(1)).unwrap();
        assert_eq!(b.slopes(), &[qi(1), qi(2)]);
        assert_eq!(b.breaks(), vec![qi(1)]);
        assert!(matches!(psi_artin_schreier(2, &qi(0)), Err(HerbrandError::NonpositiveBreak(_))));
        assert_eq!(psi_tame(1, 3).unwrap(), PiecewiseLinear::identity());
        assert_eq!(psi_tame(2, 3).unwrap().slopes(), &[qi(1), qi(2)]);
        assert_eq!(psi_tame(6, 3), Err(HerbrandError::WildIndex { e: 6, p: 3 }));
    }

    #[test]
    fn heuristic_examples() {
        let c = TowerCase::InfWild { m: 1 };
        assert_eq!(heuristic_e(&inf_set(), c).unwrap(), (2, false));
        assert_eq!(heuristic_e(&fin_set(), TowerCase::FinWild).unwrap(), (2, false));
        let tame = ValuationProfile::new(3, 1, 0, Val::Finite(1), 0);
        assert!(matches!(heuristic_e(&tame, TowerCase::FinTame), Err(HerbrandError::NotWildCase(_))));
        // v(ξ₋₁) = 1 integral, v(ξ₁) = −1/3
        let pr = ValuationProfile::new(3, 1, 0, Val::Finite(-2), 0);
        assert_eq!(xi_val(TowerCase::FinWild, &pr, -1).unwrap(), qi(1));
        assert_eq!(heuristic_e(&pr, TowerCase::FinWild).unwrap(), (1, false));
        // p | vj leaves the denominator prime to q
        let pdiv = ValuationProfile::new(3, 1, 0, Val::Finite(-2), 1);
        assert!(matches!(heuristic_e(&pdiv, TowerCase::FinWild), Err(HerbrandError::UnsupportedRange(_))));
    }

    #[test]
    fn tower_examples() {
        let c = TowerCase::InfWild { m: 1 };
        let psi = psi_tower(c, &inf_set(), 1, 2).unwrap();
        assert_eq!(psi.breaks(), vec![qi(0), r(5, 2)]);
        assert_eq!(psi.slopes(), &[qi(1), qi(2), qi(6)]);
        assert_eq!(psi.eval(&qi(3)), qi(8)); // 6·3 − 10
        assert_eq!(psi.invert().eval(&qi(5)), r(5, 2));
        assert_eq!(tower_breaks(c, &inf_set(), 1, 2).unwrap().r, vec![qi(5)]);

        let f = psi_tower(TowerCase::FinWild, &fin_set(), 2, 2).unwrap();
        assert_eq!(f.breaks(), vec![qi(0), qi(2)]);
        assert_eq!(f.slopes(), &[qi(1), qi(2), qi(18)]);
        assert_eq!(f.eval(&qi(3)), qi(54 - 32));
        assert_eq!(tower_breaks(TowerCase::FinWild, &fin_set(), 3, 2).unwrap().r, vec![qi(4); 3]);

        let tame = ValuationProfile::new(3, 1, -1, Val::PlusInfinity, 0);
        assert_eq!(psi_tower(TowerCase::InfTame, &tame, 2, 1).unwrap(), psi_tame(8, 3).unwrap());
    }

    #[test]
    fn unsupported_ranges() {
        // vj = −4 at infinity, q = 3: inside [−5, −3)
        let gap = ValuationProfile::new(3, 1, -1, Val::Finite(-1), 0);
        assert!(matches!(
            psi_tower(classify(&gap), &gap, 1, 1),
            Err(HerbrandError::UnsupportedRange(_))
        ));
        // p | vj at a finite place: v1 = −1, v2 = −1 gives vj = −3
        let pdiv = ValuationProfile::new(3, 1, 0, Val::Finite(-1), -1);
        assert!(matches!(
            tower_breaks(TowerCase::FinWild, &pdiv, 1, 1),
            Err(HerbrandError::UnsupportedRange(_))
        ));
    }

    #[test]
    fn filtration_examples() {
        assert_eq!(filtration_break(TowerCase::InfWild { m: 1 }, &inf_set(), 1, 1, 2).unwrap(), qi(5));
        assert_eq!(filtration_break(TowerCase::FinWild, &fin_set(), 1, 1, 2).unwrap(), qi(4));
    }
}
