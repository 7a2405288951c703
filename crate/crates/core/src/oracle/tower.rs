//! Division towers ξ_{±1..±n} computed as series, and their comparison with
//! the closed-form predictions.

use super::puiseux::roots_in_field;
use super::roots::EXTENSION_FIELD_CAP;
use super::series::{PuiseuxSeries, SeriesValuation};
use super::OracleError;
use crate::algebra::rational::{denom_u64, lcm_u64};
use crate::algebra::{make_field, make_field_capped, Elem, ExactRational, FieldDescriptor, Place, Poly, RationalFunction, Val};
use crate::drinfeld::{twisted_mul, DrinfeldModule, TwistedPolynomial};
use crate::newton::lower_hull;
use crate::valtower::{
    chain_from_values, classify, denominator_lcm, ordering, step_polygon, xi_val, OrderEntry, PolygonShape,
    TowerCase, ValuationProfile,
};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Absolute working precision; default: largest predicted valuation + 10/N.
    pub precision: Option<ExactRational>,
    /// Coefficient extension cap (degree over F_q).
    pub ext_cap: u32,
    /// Precision retries after a stall.
    pub attempts: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { precision: None, ext_cap: 12, attempts: 3 }
    }
}

fn rat(n: i64, d: i64) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(d))
}

/// φ_π = πX + a₁X^q + a₂X^{q²} over the completion at one place, in a uniformizer u.
#[derive(Clone, Debug)]
pub struct LocalModel {
    base: FieldDescriptor,
    pi: PuiseuxSeries,
    a1: PuiseuxSeries,
    a2: PuiseuxSeries,
}

/// Laurent expansion of r in u = 1/t (infinite place) or u = t − c (place t − c).
pub fn expand_at(r: &RationalFunction, place: &Place, prec: &ExactRational) -> Result<PuiseuxSeries, OracleError> {
    let f = r.field().clone();
    if r.is_zero() {
        return Ok(PuiseuxSeries::zero(&f));
    }
    let (mut n, mut d, mut off) = match place {
        Place::Infinite => {
            let off = r.den().deg() as i64 - r.num().deg() as i64;
            (r.num().reversed(), r.den().reversed(), off)
        }
        Place::Finite(p) if p.deg() == 1 => {
            let c = f.neg(p.coeff(0));
            (r.num().shift(c), r.den().shift(c), 0)
        }
        Place::Finite(p) => {
            return Err(OracleError::UnsupportedPlace(format!("({p}) has degree {}; only degree 1 is expanded", p.deg())))
        }
    };
    let x = Poly::x(&f);
    while n.coeff(0) == 0 {
        n = n.div_exact(&x).expect("x divides");
        off += 1;
    }
    while d.coeff(0) == 0 {
        d = d.div_exact(&x).expect("x divides");
        off -= 1;
    }
    let d0inv = f.inv(d.coeff(0)).expect("unit");
    if d.deg() == 0 {
        let terms: Vec<(ExactRational, Elem)> =
            (0..=n.deg()).map(|k| (rat(off + k as i64, 1), f.mul(n.coeff(k), d0inv))).collect();
        return Ok(PuiseuxSeries::from_terms(&f, &terms, None));
    }
    let need = (prec - rat(off, 1)).ceil().to_integer().to_i64().unwrap_or(0).max(0) as usize;
    let mut c: Vec<Elem> = Vec::with_capacity(need);
    for k in 0..need {
        let mut acc = n.coeff(k);
        for i in 1..=k.min(d.deg()) {
            acc = f.sub(acc, f.mul(d.coeff(i), c[k - i]));
        }
        c.push(f.mul(acc, d0inv));
    }
    let terms: Vec<(ExactRational, Elem)> = c.into_iter().enumerate().map(|(k, a)| (rat(off + k as i64, 1), a)).collect();
    Ok(PuiseuxSeries::from_terms(&f, &terms, Some(&rat(off + need as i64, 1))))
}

fn int_valuation(s: &PuiseuxSeries, what: &str) -> Result<Val<i64>, OracleError> {
    match s.valuation() {
        SeriesValuation::Exact(v) if v.is_integer() => Ok(Val::Finite(v.to_integer().to_i64().expect("small"))),
        SeriesValuation::Exact(v) => Err(OracleError::PrecisionStall(format!("{what} has fractional valuation {v}"))),
        SeriesValuation::Infinite => Ok(Val::PlusInfinity),
        SeriesValuation::AtLeast(p) => Err(OracleError::PrecisionStall(format!("{what} unresolved below {p}"))),
    }
}

impl LocalModel {
    pub fn new(pi: PuiseuxSeries, a1: PuiseuxSeries, a2: PuiseuxSeries) -> Self {
        Self { base: pi.field().clone(), pi, a1, a2 }
    }

    /// Exact monomial model c₀u^{v0}, c₁u^{v1} (or 0), c₂u^{v2}.
    pub fn monomials(base: &FieldDescriptor, pi: (Elem, i64), a1: Option<(Elem, i64)>, a2: (Elem, i64)) -> Self {
        let m = |(c, e): (Elem, i64)| PuiseuxSeries::monomial(base, c, &rat(e, 1));
        Self::new(m(pi), a1.map_or(PuiseuxSeries::zero(base), m), m(a2))
    }

    /// Expansion of a global module at a place (infinite or degree 1), with π given.
    pub fn from_module(m: &DrinfeldModule, place: &Place, pi: &Poly, prec: &ExactRational) -> Result<Self, OracleError> {
        let pi = RationalFunction::from_poly(pi.clone());
        Ok(Self::new(expand_at(&pi, place, prec)?, expand_at(m.a1(), place, prec)?, expand_at(m.a2(), place, prec)?))
    }

    pub fn base(&self) -> &FieldDescriptor {
        &self.base
    }
    pub fn q(&self) -> u32 {
        self.base.q()
    }

    /// Valuations of (π, a₁, a₂) read off the series.
    pub fn profile(&self) -> Result<ValuationProfile, OracleError> {
        let v0 = int_valuation(&self.pi, "π")?.finite().copied().ok_or(OracleError::PrecisionStall("π = 0".into()))?;
        let v1 = int_valuation(&self.a1, "a₁")?;
        let v2 = int_valuation(&self.a2, "a₂")?.finite().copied().ok_or(OracleError::PrecisionStall("a₂ = 0".into()))?;
        Ok(ValuationProfile::new(self.base.p() as u64, self.base.s(), v0, v1, v2))
    }

    fn dense_phi(&self, field: &FieldDescriptor, table: &[Elem]) -> Vec<PuiseuxSeries> {
        let q = self.q() as usize;
        let mut f = vec![PuiseuxSeries::zero(field); q * q + 1];
        f[1] = self.pi.embed(field, table);
        f[q] = self.a1.embed(field, table);
        f[q * q] = self.a2.embed(field, table);
        f
    }

    pub fn phi_pi(&self) -> TwistedPolynomial<PuiseuxSeries> {
        TwistedPolynomial::new(self.q(), vec![self.pi.clone(), self.a1.clone(), self.a2.clone()])
    }
}

/// Nonzero root valuations of φ_{π^n}, sorted descending, from its Newton polygon.
pub fn division_polynomial_valuations(model: &LocalModel, n: u32) -> Result<Vec<ExactRational>, OracleError> {
    let phi = model.phi_pi();
    let mut acc = phi.clone();
    for _ in 1..n {
        acc = twisted_mul(&acc, &phi);
    }
    let q = model.q() as u64;
    let mut pts = Vec::new();
    for (k, c) in acc.coeffs().iter().enumerate() {
        match c.valuation() {
            SeriesValuation::Exact(v) => pts.push((q.pow(k as u32), Val::Finite(v))),
            SeriesValuation::Infinite => {}
            SeriesValuation::AtLeast(p) => {
                return Err(OracleError::PrecisionStall(format!("coefficient of τ^{k} in φ_(π^n) unresolved below {p}")))
            }
        }
    }
    let hull = lower_hull(&pts).map_err(|_| OracleError::PrecisionStall("degenerate division polynomial".into()))?;
    let mut out = Vec::new();
    for (v, len) in hull.root_valuations() {
        for _ in 0..len {
            out.push(v.clone());
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Measured data for one tower.
#[derive(Clone, Debug)]
pub struct TowerMeasurement {
    pub profile: ValuationProfile,
    pub n: u32,
    /// Degree of the coefficient field over F_q.
    pub field_degree: u32,
    pub precision: ExactRational,
    /// (index, ξ_index), ordered −1, 1, −2, 2, …
    pub basis: Vec<(i64, PuiseuxSeries)>,
    /// Valuations of all q^{2n} F_q-combinations, zero included.
    pub combinations: Vec<SeriesValuation>,
    /// Nonzero root valuations of φ_{π^n}, descending.
    pub division_valuations: Vec<ExactRational>,
}

impl TowerMeasurement {
    pub fn basis_valuation(&self, i: i64) -> Option<ExactRational> {
        self.basis.iter().find(|b| b.0 == i).and_then(|b| match b.1.valuation() {
            SeriesValuation::Exact(v) => Some(v),
            _ => None,
        })
    }

    /// lcm of the ramification denominators of the basis series.
    pub fn series_denominator(&self) -> u64 {
        self.basis.iter().fold(1, |a, b| lcm_u64(a, b.1.ramification_denominator()))
    }
}

fn sorted_by_valuation(roots: Vec<PuiseuxSeries>) -> Vec<PuiseuxSeries> {
    let key = |s: &PuiseuxSeries| match s.valuation() {
        SeriesValuation::Infinite => Val::PlusInfinity,
        SeriesValuation::Exact(v) | SeriesValuation::AtLeast(v) => Val::Finite(v),
    };
    let mut r = roots;
    r.sort_by_key(|s| std::cmp::Reverse(key(s)));
    r
}

fn build_tower(
    model: &LocalModel,
    field: &FieldDescriptor,
    n: u32,
    target: &ExactRational,
) -> Result<(Vec<(i64, PuiseuxSeries)>, Vec<SeriesValuation>), OracleError> {
    let table = model.base.embedding_into(field).expect("subfield");
    let scalars: Vec<Elem> = model.base.elements().map(|c| table[c as usize]).collect();
    let l = model.dense_phi(field, &table);
    let v0 = model.profile()?.v0;
    let level_target = |k: u32| target + rat((n - k) as i64 * v0.max(0), 1);

    let roots = roots_in_field(&l, &level_target(1), false)?;
    // φ_π is separable; a multiplicity above one is a fused cluster, and any
    // member serves as its representative
    let nonzero: Vec<PuiseuxSeries> =
        sorted_by_valuation(roots.into_iter().map(|r| r.series).filter(|s| !s.is_exact_zero()).collect());
    let xi_m1 = nonzero.first().ok_or(OracleError::PrecisionStall("no nonzero π-torsion".into()))?.clone();
    // r ∈ F_q·ξ₋₁ iff some difference r − cξ₋₁ vanishes to working precision
    let on_line =
        |r: &PuiseuxSeries| scalars.iter().any(|&c| !matches!(r.sub(&xi_m1.scale(c)).valuation(), SeriesValuation::Exact(_)));
    let xi_1 = nonzero
        .iter()
        .find(|r| !on_line(r))
        .ok_or(OracleError::PrecisionStall("π-torsion looks one-dimensional".into()))?
        .clone();

    let mut basis = vec![(-1i64, xi_m1), (1i64, xi_1)];
    for k in 1..n {
        for sign in [-1i64, 1] {
            let prev = &basis.iter().find(|b| b.0 == sign * k as i64).unwrap().1;
            let mut f = l.clone();
            f[0] = prev.neg();
            let r = roots_in_field(&f, &level_target(k + 1), true)?;
            let next = r.into_iter().next().ok_or(OracleError::PrecisionStall("no root".into()))?.series;
            basis.push((sign * (k as i64 + 1), next));
        }
    }

    let dim = basis.len();
    let q = scalars.len();
    let total = q.pow(dim as u32);
    let mut combos = Vec::with_capacity(total);
    for code in 0..total {
        let mut acc = PuiseuxSeries::zero(field);
        let mut c = code;
        for (_, b) in &basis {
            let s = scalars[c % q];
            c /= q;
            if s != 0 {
                acc = acc.add(&b.scale(s));
            }
        }
        let v = acc.valuation();
        if code != 0 && !matches!(v, SeriesValuation::Exact(_)) {
            return Err(OracleError::PrecisionStall(format!("combination {code} unresolved ({v:?})")));
        }
        combos.push(v);
    }
    Ok((basis, combos))
}

/// Builds ξ_{±1..±n} by maximal-valuation root choice and measures all combinations.
pub fn division_tower(model: &LocalModel, n: u32, cfg: &OracleConfig) -> Result<TowerMeasurement, OracleError> {
    let profile = model.profile()?;
    let division_valuations = division_polynomial_valuations(model, n)?;
    let precision = match &cfg.precision {
        Some(p) => p.clone(),
        None => {
            let top = division_valuations.first().cloned().unwrap_or_else(ExactRational::zero);
            let den = division_valuations.iter().fold(1u64, |a, v| lcm_u64(a, denom_u64(v)));
            top.max(ExactRational::zero()) + rat(10, den as i64)
        }
    };
    let base = model.base.clone();
    let mut k = 1u32;
    loop {
        let field = make_field_capped(base.p(), base.s() * k, EXTENSION_FIELD_CAP)
            .map_err(|_| OracleError::ExtensionCapExceeded { needed: k, cap: cfg.ext_cap })?;
        match build_tower(model, &field, n, &precision) {
            Ok((basis, combinations)) => {
                return Ok(TowerMeasurement {
                    profile,
                    n,
                    field_degree: k,
                    precision,
                    basis,
                    combinations,
                    division_valuations,
                })
            }
            Err(OracleError::NeedExtension { degree }) => {
                k *= degree;
                if k > cfg.ext_cap {
                    return Err(OracleError::ExtensionCapExceeded { needed: k, cap: cfg.ext_cap });
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// Closed-form predictions for one profile.
#[derive(Clone, Debug)]
pub struct Prediction {
    pub case: TowerCase,
    pub xi: Vec<(i64, ExactRational)>,
    pub chain: Vec<OrderEntry>,
    pub shapes: Vec<(i64, PolygonShape)>,
    pub denominator: u64,
}

impl Prediction {
    pub fn from_valtower(pr: &ValuationProfile, n: u32) -> Result<Self, OracleError> {
        let case = classify(pr);
        let mut xi = Vec::new();
        let mut shapes = Vec::new();
        for k in 1..=n as i64 {
            for i in [-k, k] {
                xi.push((i, xi_val(case, pr, i)?));
                shapes.push((i, step_polygon(case, pr, i)?));
            }
        }
        Ok(Self { case, xi, chain: ordering(case, pr, n)?, shapes, denominator: denominator_lcm(case, pr, n)? })
    }

    pub fn value(&self, i: i64) -> &ExactRational {
        &self.xi.iter().find(|x| x.0 == i).expect("index in range").1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisRow {
    pub index: i64,
    pub measured: Option<ExactRational>,
    pub predicted: ExactRational,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeRow {
    pub index: i64,
    pub measured: Option<PolygonShape>,
    pub predicted: PolygonShape,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub case: TowerCase,
    pub profile: ValuationProfile,
    pub n: u32,
    pub basis: Vec<BasisRow>,
    pub ordering_ok: bool,
    pub shapes: Vec<ShapeRow>,
    /// Combination valuations equal the minimum over the contributing basis values.
    pub min_rule_ok: bool,
    /// Combination valuations equal the root valuations of φ_{π^n}.
    pub polygon_ok: bool,
    /// Valuation denominators agree with the predicted lcm.
    pub denominators_ok: bool,
    pub field_degree: u32,
    pub series_denominator: u64,
    pub precision: ExactRational,
}

impl OracleReport {
    pub fn pass(&self) -> bool {
        self.first_failure().is_none()
    }

    /// Description of the first disagreement, naming the index where there is one.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(b) = self.basis.iter().find(|b| !b.ok) {
            let m = b.measured.as_ref().map_or("unresolved".to_string(), |v| v.to_string());
            return Some(format!("v(ξ_{}) measured {m}, predicted {}", b.index, b.predicted));
        }
        if !self.ordering_ok {
            return Some("ordering chain differs".into());
        }
        if let Some(s) = self.shapes.iter().find(|s| !s.ok) {
            let m = s.measured.as_ref().map_or("unresolved".to_string(), |v| v.to_string());
            return Some(format!("step polygon at ξ_{}: measured {m}, predicted {}", s.index, s.predicted));
        }
        if !self.min_rule_ok {
            return Some("combination valuations differ from the minimum rule".into());
        }
        if !self.polygon_ok {
            return Some("combination valuations differ from the division polynomial".into());
        }
        if !self.denominators_ok {
            return Some("valuation denominators differ".into());
        }
        None
    }
}

fn measured_shape(pr: &ValuationProfile, v: &ExactRational) -> PolygonShape {
    let q = pr.q;
    let mut pts = vec![(0u64, Val::Finite(v.clone())), (1, Val::Finite(rat(pr.v0, 1)))];
    if let Val::Finite(v1) = pr.v1 {
        pts.push((q, Val::Finite(rat(v1, 1))));
    }
    pts.push((q * q, Val::Finite(rat(pr.v2, 1))));
    PolygonShape { vertices: lower_hull(&pts).expect("four points").vertex_xs() }
}

/// Compares a measurement against predictions.
pub fn compare(meas: &TowerMeasurement, pred: &Prediction) -> OracleReport {
    let pr = &meas.profile;
    let basis: Vec<BasisRow> = pred
        .xi
        .iter()
        .map(|(i, p)| {
            let m = meas.basis_valuation(*i);
            BasisRow { index: *i, ok: m.as_ref() == Some(p), measured: m, predicted: p.clone() }
        })
        .collect();
    let measured_vals: Option<Vec<(i64, ExactRational)>> =
        pred.xi.iter().map(|(i, _)| meas.basis_valuation(*i).map(|v| (*i, v))).collect();
    let ordering_ok = measured_vals.as_ref().is_some_and(|vals| {
        let chain = chain_from_values(vals.clone());
        chain.len() == pred.chain.len()
            && chain.iter().zip(&pred.chain).all(|(a, b)| a.index == b.index && a.tie_with_next == b.tie_with_next)
    });
    let shapes = pred
        .shapes
        .iter()
        .map(|(i, s)| {
            let m = meas.basis_valuation(*i).map(|v| measured_shape(pr, &v));
            ShapeRow { index: *i, ok: m.as_ref() == Some(s), measured: m, predicted: s.clone() }
        })
        .collect();

    let mut measured: Vec<ExactRational> = meas
        .combinations
        .iter()
        .filter_map(|v| match v {
            SeriesValuation::Exact(x) => Some(x.clone()),
            _ => None,
        })
        .collect();
    measured.sort_by(|a, b| b.cmp(a));

    // minimum rule; combination codes are base-q digits in basis order
    let qf = pr.q as usize;
    let mut predicted_multiset = Vec::new();
    for code in 1..meas.combinations.len() {
        let mut c = code;
        let mut best: Option<&ExactRational> = None;
        for (i, _) in &meas.basis {
            if c % qf != 0 {
                let v = pred.value(*i);
                best = Some(best.map_or(v, |b| b.min(v)));
            }
            c /= qf;
        }
        predicted_multiset.push(best.expect("nonzero combination").clone());
    }
    predicted_multiset.sort_by(|a, b| b.cmp(a));
    let min_rule_ok = measured == predicted_multiset;
    let polygon_ok = measured == meas.division_valuations;
    let measured_den = measured_vals
        .as_ref()
        .map(|vals| vals.iter().fold(1u64, |a, (_, v)| lcm_u64(a, denom_u64(v))));
    OracleReport {
        case: pred.case,
        profile: pr.clone(),
        n: meas.n,
        basis,
        ordering_ok,
        shapes,
        min_rule_ok,
        polygon_ok,
        denominators_ok: measured_den == Some(pred.denominator),
        field_degree: meas.field_degree,
        series_denominator: meas.series_denominator(),
        precision: meas.precision.clone(),
    }
}

/// Measures a local model and compares with the closed forms, retrying
/// with more precision on a stall.
pub fn verify_model(model: &LocalModel, n: u32, cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
    let profile = model.profile()?;
    let pred = Prediction::from_valtower(&profile, n)?;
    let base = match &cfg.precision {
        Some(p) => p.clone(),
        None => {
            let top = pred.xi.iter().map(|x| x.1.clone()).max().expect("n ≥ 1");
            top.max(ExactRational::zero()) + rat(10, pred.denominator as i64)
        }
    };
    let mut last = None;
    for attempt in 0..cfg.attempts.max(1) {
        let c = OracleConfig { precision: Some(&base + rat(2 * attempt as i64, 1)), ..cfg.clone() };
        match division_tower(model, n, &c) {
            Ok(m) => return Ok(compare(&m, &pred)),
            Err(e @ OracleError::PrecisionStall(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Expands a global module at `place` with uniformizer `pi` and verifies it.
pub fn verify_module(
    m: &DrinfeldModule,
    place: &Place,
    pi: &Poly,
    n: u32,
    cfg: &OracleConfig,
) -> Result<OracleReport, OracleError> {
    let mut last = None;
    for attempt in 0..cfg.attempts.max(1) {
        let input_prec = rat(64 << (2 * attempt), 1);
        let model = LocalModel::from_module(m, place, pi, &input_prec)?;
        match verify_model(&model, n, cfg) {
            Err(e @ OracleError::PrecisionStall(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Verifies a bare profile through its unit-coefficient monomial model
/// π = u^{v0}, a₁ = u^{v1}, a₂ = u^{v2} over F_q.
pub fn verify_profile(pr: &ValuationProfile, n: u32, cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
    let base = make_field(pr.p as u32, pr.s).map_err(|e| OracleError::UnsupportedPlace(e.to_string()))?;
    let a1 = match pr.v1 {
        Val::Finite(v) => Some((1, v)),
        Val::PlusInfinity => None,
    };
    verify_model(&LocalModel::monomials(&base, (1, pr.v0), a1, (1, pr.v2)), n, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_field, parse_expr, q, qi};

    fn module(p: u32, a1: &str, a2: &str) -> DrinfeldModule {
        let f = make_field(p, 1).unwrap();
        DrinfeldModule::new(parse_expr(&f, a1).unwrap(), parse_expr(&f, a2).unwrap()).unwrap()
    }

    fn place(m: &DrinfeldModule, s: &str) -> Place {
        Place::parse(m.field(), s).unwrap()
    }

    fn poly(m: &DrinfeldModule, s: &str) -> Poly {
        parse_expr(m.field(), s).unwrap().as_poly().unwrap().clone()
    }

    #[test]
    fn expansions() {
        let f = make_field(3, 1).unwrap();
        let r = parse_expr(&f, "1/(t-1)").unwrap();
        // at infinity: u/(1 − u) = u + u² + …
        let s = expand_at(&r, &Place::Infinite, &qi(4)).unwrap();
        assert_eq!(s.terms(), vec![(qi(1), 1), (qi(2), 1), (qi(3), 1)]);
        assert_eq!(s.prec(), Val::Finite(qi(4)));
        // at t − 1 it is exactly u⁻¹
        let pl = Place::parse(&f, "t-1").unwrap();
        let s = expand_at(&r, &pl, &qi(4)).unwrap();
        assert!(s.is_exact());
        assert_eq!(s.terms(), vec![(qi(-1), 1)]);
        let t2 = parse_expr(&f, "t^2").unwrap();
        assert_eq!(expand_at(&t2, &Place::Infinite, &qi(0)).unwrap().terms(), vec![(qi(-2), 1)]);
        let deg2 = Place::parse(&f, "t^2+1").unwrap();
        assert!(matches!(expand_at(&r, &deg2, &qi(1)), Err(OracleError::UnsupportedPlace(_))));
    }

    #[test]
    fn inf_wild_level_one_counts() {
        let m = module(3, "t^2", "1");
        let model = LocalModel::from_module(&m, &Place::Infinite, &poly(&m, "t"), &qi(64)).unwrap();
        let meas = division_tower(&model, 1, &OracleConfig::default()).unwrap();
        assert_eq!(meas.combinations.len(), 9);
        let count = |v: SeriesValuation| meas.combinations.iter().filter(|x| **x == v).count();
        assert_eq!(count(SeriesValuation::Infinite), 1);
        assert_eq!(count(SeriesValuation::Exact(q(1, 2))), 2);
        assert_eq!(count(SeriesValuation::Exact(q(-1, 3))), 6);
        // closed under F_q scaling
        let xi = &meas.basis[0].1;
        assert_eq!(xi.scale(2).valuation(), xi.valuation());
    }

    #[test]
    fn verify_examples() {
        let cfg = OracleConfig::default();
        let m = module(3, "t^2", "1");
        let rep = verify_module(&m, &Place::Infinite, &poly(&m, "t"), 2, &cfg).unwrap();
        assert!(rep.pass(), "{:?}", rep.first_failure());
        assert_eq!(rep.case, TowerCase::InfWild { m: 1 });

        let m = module(3, "1/(t-1)", "1");
        let rep = verify_module(&m, &place(&m, "t-1"), &poly(&m, "t"), 2, &cfg).unwrap();
        assert_eq!(rep.case, TowerCase::FinWild);
        assert!(rep.pass(), "{:?}", rep.first_failure());

        let m = module(3, "1", "t");
        let rep = verify_module(&m, &place(&m, "t"), &poly(&m, "t"), 2, &cfg).unwrap();
        assert_eq!(rep.case, TowerCase::AboveTNonpos);
        assert!(rep.pass(), "{:?}", rep.first_failure());
    }

    #[test]
    fn perturbed_prediction_fails() {
        let m = module(3, "t^2", "1");
        let model = LocalModel::from_module(&m, &Place::Infinite, &poly(&m, "t"), &qi(64)).unwrap();
        let meas = division_tower(&model, 2, &OracleConfig::default()).unwrap();
        let mut pred = Prediction::from_valtower(&meas.profile, 2).unwrap();
        assert!(compare(&meas, &pred).pass());
        let slot = pred.xi.iter_mut().find(|x| x.0 == 2).unwrap();
        slot.1 += qi(1);
        let rep = compare(&meas, &pred);
        assert!(!rep.pass());
        assert!(rep.first_failure().unwrap().contains("ξ_2"));
    }
}
