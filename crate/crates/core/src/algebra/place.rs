use super::error::AlgebraError;
use super::field::FieldDescriptor;
use super::poly::Poly;
use super::rational::{Val, Valuation};
use super::ratfunc::RationalFunction;
use std::fmt;

/// A place of F_q(t): the degree valuation at infinity or a monic irreducible.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Infinite,
    Finite(Poly),
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl Place {
    /// Checks that `p` is monic irreducible.
    pub fn finite(p: Poly) -> Result<Place, AlgebraError> {
        if !p.is_monic() || !p.is_irreducible() {
            return Err(AlgebraError::NotAPlace(p.to_string()));
        }
        Ok(Place::Finite(p))
    }

    pub fn degree(&self) -> u32 {
        match self {
            Place::Infinite => 1,
            Place::Finite(p) => p.deg() as u32,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }

    /// Whether this is the finite place (t).
    pub fn divides_t(&self) -> bool {
        match self {
            Place::Infinite => false,
            Place::Finite(p) => p.deg() == 1 && p.coeff(0) == 0,
        }
    }

    /// Parses "inf" or a monic irreducible polynomial in t.
    pub fn parse(field: &FieldDescriptor, text: &str) -> Result<Place, AlgebraError> {
        let s = text.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Place::Infinite);
        }
        let r = super::parse::parse_expr(field, s)?;
        match r.as_poly() {
            Some(p) => Place::finite(p.clone()),
            None => Err(AlgebraError::NotAPlace(s.to_string())),
        }
    }

    /// Deterministic order: finite places by (degree, lexicographic), infinity last.
    pub fn cmp_order(&self, o: &Place) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, o) {
            (Place::Infinite, Place::Infinite) => Equal,
            (Place::Infinite, _) => Greater,
            (_, Place::Infinite) => Less,
            (Place::Finite(a), Place::Finite(b)) => a.cmp_lex(b),
        }
    }
}

/// Multiplicity of the irreducible `p` in the nonzero polynomial `f`.
pub fn poly_order(f: &Poly, p: &Poly) -> i64 {
    let mut k = 0;
    let mut g = f.clone();
    while let Some(q) = g.div_exact(p) {
        g = q;
        k += 1;
    }
    k
}

/// The v-adic valuation of x; v(0) = +∞ and v_∞ = −deg.
pub fn place_valuation(x: &RationalFunction, v: &Place) -> Valuation {
    if x.is_zero() {
        return Val::PlusInfinity;
    }
    match v {
        Place::Infinite => Val::Finite(x.den().deg() as i64 - x.num().deg() as i64),
        Place::Finite(p) => Val::Finite(poly_order(x.num(), p) - poly_order(x.den(), p)),
    }
}

/// Factors f into monic irreducibles by trial division in increasing degree.
///
/// Output is sorted by degree, then lexicographically.
pub fn factor_monic(f: &Poly) -> Result<Vec<(Poly, u32)>, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let field = f.field().clone();
    let q = field.q() as u64;
    let mut rem = f.monic();
    let mut out = Vec::new();
    let mut d = 1usize;
    while 2 * d <= rem.deg() {
        // monic candidates of degree d in lexicographic order
        let count = q.pow(d as u32);
        for k in 0..count {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut r = k;
            for _ in 0..d {
                coeffs.push((r % q) as u32);
                r /= q;
            }
            coeffs.push(1);
            let cand = Poly::from_coeffs(&field, coeffs);
            let mut mult = 0;
            while let Some(quo) = rem.div_exact(&cand) {
                rem = quo;
                mult += 1;
            }
            if mult > 0 {
                out.push((cand, mult));
            }
            if 2 * d > rem.deg() {
                break;
            }
        }
        d += 1;
    }
    if rem.deg() > 0 {
        // what is left has no factor of degree ≤ deg/2
        match out.iter_mut().find(|(p, _)| *p == rem) {
            Some(e) => e.1 += 1,
            None => out.push((rem, 1)),
        }
    }
    out.sort_by(|a, b| a.0.cmp_lex(&b.0));
    Ok(out)
}

/// Finite places where v(j) ≠ 0, then the infinite place (always present).
pub fn bad_places(j: &RationalFunction) -> Vec<Place> {
    let mut places: Vec<Place> = Vec::new();
    if !j.is_zero() {
        for part in [j.num(), j.den()] {
            if part.deg() == 0 {
                continue;
            }
            for (p, _) in factor_monic(part).expect("nonzero") {
                places.push(Place::Finite(p));
            }
        }
    }
    places.sort_by(|a, b| a.cmp_order(b));
    places.dedup();
    places.push(Place::Infinite);
    places
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::make_field;
    use crate::algebra::parse::parse_expr;

    #[test]
    fn factor_examples() {
        let f3 = make_field(3, 1).unwrap();
        let t2m1 = parse_expr(&f3, "t^2-1").unwrap();
        let fac = factor_monic(t2m1.num()).unwrap();
        let names: Vec<String> = fac.iter().map(|(p, _)| p.to_string()).collect();
        // t+1 sorts before t+2 = t-1 under the coefficient order
        assert_eq!(names, ["t+1", "t+2"]);
        assert!(fac.iter().all(|(_, m)| *m == 1));

        let f2 = make_field(2, 1).unwrap();
        let fac = factor_monic(parse_expr(&f2, "t").unwrap().num()).unwrap();
        assert_eq!(fac, vec![(Poly::x(&f2), 1)]);

        let irr = parse_expr(&f3, "t^2+1").unwrap();
        assert_eq!(factor_monic(irr.num()).unwrap(), vec![(irr.num().clone(), 1)]);
        assert!(matches!(factor_monic(&Poly::zero(&f3)), Err(AlgebraError::ZeroPolynomial)));
    }

    #[test]
    fn repeated_and_large_factors() {
        let f3 = make_field(3, 1).unwrap();
        let x = parse_expr(&f3, "2*(t-1)^4*(t^2+1)^2*t*(t^3+2t+1)").unwrap();
        let fac = factor_monic(x.num()).unwrap();
        let shown: Vec<(String, u32)> = fac.iter().map(|(p, m)| (p.to_string(), *m)).collect();
        assert_eq!(
            shown,
            [("t".into(), 1), ("t+2".into(), 4), ("t^2+1".into(), 2), ("t^3+2t+1".into(), 1)]
        );
        let mut prod = Poly::constant(&f3, x.num().lead());
        for (p, m) in &fac {
            prod = prod.mul(&p.pow(*m as u64));
        }
        assert_eq!(&prod, x.num());
    }

    #[test]
    fn valuation_examples() {
        let f3 = make_field(3, 1).unwrap();
        let x = parse_expr(&f3, "t^3/(t-1)").unwrap();
        assert_eq!(place_valuation(&x, &Place::Infinite), Val::Finite(-2));
        assert_eq!(place_valuation(&x, &Place::Finite(Poly::x(&f3))), Val::Finite(3));
        let zero = RationalFunction::zero(&f3);
        assert_eq!(place_valuation(&zero, &Place::Infinite), Val::PlusInfinity);
    }

    #[test]
    fn bad_place_examples() {
        let f3 = make_field(3, 1).unwrap();
        let t = Place::Finite(Poly::x(&f3));
        assert_eq!(bad_places(&parse_expr(&f3, "t^8").unwrap()), vec![t, Place::Infinite]);
        let tm1 = Place::Finite(Poly::linear(&f3, 1));
        assert_eq!(bad_places(&parse_expr(&f3, "(t-1)^-4").unwrap()), vec![tm1, Place::Infinite]);
        assert_eq!(bad_places(&RationalFunction::one(&f3)), vec![Place::Infinite]);
    }
}
