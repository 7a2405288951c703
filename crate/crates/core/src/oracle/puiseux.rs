//! Newton–Puiseux root finding for polynomials with Puiseux-series
//! coefficients, branch by branch, with on-demand coefficient extension.

use super::roots::{nonzero_roots_or_degree, EXTENSION_FIELD_CAP};
use super::series::{PuiseuxSeries, SeriesValuation};
use super::OracleError;
use crate::algebra::{make_field_capped, ExactRational, Poly, Val};
use crate::newton::lower_hull;
use num_traits::Zero;

/// Exponent denominator beyond which a non-separating cluster is emitted
/// at its current precision.
pub const CLUSTER_DEN_LIMIT: i64 = 1 << 17;

/// A root truncated at its precision, with multiplicity.
#[derive(Clone, Debug)]
pub struct RootSeries {
    pub series: PuiseuxSeries,
    pub multiplicity: u32,
}

/// C(n, k) mod p by Lucas.
pub fn binom_mod(n: usize, k: usize, p: usize) -> usize {
    let (mut n, mut k) = (n, k);
    let mut acc = 1usize;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        // small binomial by the multiplicative formula mod p
        let mut c = 1usize;
        for i in 0..b {
            c = c * (a - i) % p;
            c = c * inv_mod(i + 1, p) % p;
        }
        acc = acc * c % p;
        n /= p;
        k /= p;
    }
    acc
}

fn inv_mod(a: usize, p: usize) -> usize {
    (1..p).find(|x| a * x % p == 1).expect("p prime")
}

/// f(a + Y) for a monomial a.
fn taylor_shift(f: &[PuiseuxSeries], a: &PuiseuxSeries) -> Vec<PuiseuxSeries> {
    let field = a.field();
    let p = field.p() as usize;
    let n = f.len() - 1;
    let mut pows = vec![PuiseuxSeries::monomial(field, 1, &ExactRational::zero())];
    for e in 1..=n {
        pows.push(pows[e - 1].mul(a));
    }
    (0..=n)
        .map(|k| {
            let mut acc = PuiseuxSeries::zero(field);
            for j in k..=n {
                if f[j].is_exact_zero() {
                    continue;
                }
                let b = binom_mod(j, k, p);
                if b == 0 {
                    continue;
                }
                acc = acc.add(&f[j].mul(&pows[j - k]).scale(field.from_int(b as i64)));
            }
            acc
        })
        .collect()
}

struct Branch {
    f: Vec<PuiseuxSeries>,
    acc: PuiseuxSeries,
    r: usize,
    min_val: Option<ExactRational>,
}

fn stall(msg: impl Into<String>) -> OracleError {
    OracleError::PrecisionStall(msg.into())
}

/// Roots in the coefficient field of `f`; `Err(NeedExtension)` if a residual
/// equation has roots outside it. With `first_only`, follows only the first
/// branch of the steepest segment: a root of maximal valuation.
pub(crate) fn roots_in_field(
    f: &[PuiseuxSeries],
    target: &ExactRational,
    first_only: bool,
) -> Result<Vec<RootSeries>, OracleError> {
    let field = f[0].field().clone();
    let deg = f.iter().rposition(|c| !c.is_exact_zero()).ok_or_else(|| stall("zero polynomial"))?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut stack = vec![Branch {
        f: f[..=deg].to_vec(),
        acc: PuiseuxSeries::zero(&field),
        r: deg,
        min_val: None,
    }];
    while let Some(Branch { f, acc, r, min_val }) = stack.pop() {
        let mut lo = 0usize;
        match f[0].valuation() {
            SeriesValuation::Infinite => {
                let j0 = (1..=r).find(|&j| !f[j].is_exact_zero()).unwrap_or(r);
                out.push(RootSeries { series: acc.clone(), multiplicity: j0 as u32 });
                if first_only || j0 == r {
                    if first_only {
                        // the exact root has infinite valuation, the maximum
                        return Ok(out);
                    }
                    continue;
                }
                lo = j0;
            }
            SeriesValuation::AtLeast(p0) => {
                // every root of the remaining cluster is known to
                // min_k (p0 − v(c_k))/k past acc
                let mut bound: Option<ExactRational> = None;
                for (k, c) in f.iter().enumerate().take(r + 1).skip(1) {
                    match c.valuation() {
                        SeriesValuation::Exact(v) => {
                            let b = (&p0 - v) / ExactRational::from_integer((k as i64).into());
                            bound = Some(bound.map_or(b.clone(), |x| x.min(b)));
                        }
                        SeriesValuation::Infinite => {}
                        SeriesValuation::AtLeast(_) => return Err(stall(format!("coefficient of Y^{k} unresolved"))),
                    }
                }
                let bound = bound.ok_or_else(|| stall("no resolved coefficient"))?;
                if min_val.as_ref().is_some_and(|m| bound <= *m) {
                    return Err(stall(format!("constant term unresolved (≥ {p0}) with {r} roots left")));
                }
                out.push(RootSeries { series: acc.truncate(&bound), multiplicity: r as u32 });
                if first_only {
                    return Ok(out);
                }
                continue;
            }
            SeriesValuation::Exact(_) => {}
        }
        let mut pts = Vec::new();
        let mut unresolved = Vec::new();
        for (j, c) in f.iter().enumerate().take(r + 1).skip(lo) {
            match c.valuation() {
                SeriesValuation::Exact(v) => pts.push((j as u64, Val::Finite(v))),
                SeriesValuation::AtLeast(p) => unresolved.push((j, p)),
                SeriesValuation::Infinite => {}
            }
        }
        if pts.last().map(|p| p.0) != Some(r as u64) {
            return Err(stall(format!("coefficient of Y^{r} unresolved")));
        }
        let hull = lower_hull(&pts).map_err(|_| stall("degenerate Newton polygon"))?;
        let verts = hull.vertices().to_vec();
        for (j, p) in &unresolved {
            // an unknown point on or below the hull could change it
            let k = verts.windows(2).position(|w| w[0].0 as usize <= *j && *j <= w[1].0 as usize);
            if let Some(k) = k {
                let (x0, y0) = &verts[k];
                let (x1, y1) = &verts[k + 1];
                let dx = ExactRational::from_integer(((*j as i64) - (*x0 as i64)).into());
                let line = y0 + (y1 - y0) * dx / ExactRational::from_integer(((*x1 - *x0) as i64).into());
                if *p <= line {
                    return Err(stall(format!("coefficient of Y^{j} unresolved near the polygon")));
                }
            }
        }
        let mut children = Vec::new();
        for w in verts.windows(2) {
            let (xa, ya) = (w[0].0 as usize, &w[0].1);
            let xb = w[1].0 as usize;
            let slope = (&w[1].1 - ya) / ExactRational::from_integer(((xb - xa) as i64).into());
            let mu = -slope.clone();
            if min_val.as_ref().is_some_and(|m| mu <= *m) {
                return Err(stall(format!("polygon fails to advance past {}", min_val.unwrap())));
            }
            if mu >= *target {
                out.push(RootSeries { series: acc.truncate(&mu), multiplicity: (xb - xa) as u32 });
                if first_only {
                    return Ok(out);
                }
                continue;
            }
            // residual polynomial from the points on this segment
            let mut coeffs = vec![0; xb - xa + 1];
            for (j, c) in f.iter().enumerate().take(xb + 1).skip(xa) {
                if let Some((e, lc)) = c.leading() {
                    let on_line = e == ya + &slope * ExactRational::from_integer(((j - xa) as i64).into());
                    if on_line {
                        coeffs[j - xa] = lc;
                    }
                }
            }
            let res = Poly::from_coeffs(&field, coeffs);
            let roots = nonzero_roots_or_degree(&res).map_err(|d| OracleError::NeedExtension { degree: d })?;
            // A fused cluster whose exponents only accumulate (Artin–Schreier
            // behaviour): no finite truncation passes the limit, so stop here.
            if r >= 2 && roots.len() == 1 && roots[0].1 as usize == r && *mu.denom() > CLUSTER_DEN_LIMIT.into() {
                out.push(RootSeries { series: acc.truncate(&mu), multiplicity: r as u32 });
                if first_only {
                    return Ok(out);
                }
                continue;
            }
            for (z, m) in roots {
                let a = PuiseuxSeries::monomial(&field, z, &mu);
                children.push(Branch { f: taylor_shift(&f, &a), acc: acc.add(&a), r: m as usize, min_val: Some(mu.clone()) });
                if first_only {
                    break;
                }
            }
            if first_only {
                break;
            }
        }
        // depth-first, earlier children first
        while let Some(c) = children.pop() {
            stack.push(c);
        }
    }
    Ok(out)
}

/// All deg(f) roots as Puiseux series, each accurate to at least
/// `precision` where the coefficients allow. Extends the coefficient field
/// on demand, up to degree `cap` over the input field.
pub fn newton_puiseux_roots(
    f: &[PuiseuxSeries],
    precision: &ExactRational,
    cap: u32,
) -> Result<Vec<RootSeries>, OracleError> {
    if *precision <= ExactRational::zero() {
        return Err(stall("precision must be positive"));
    }
    let base = f[0].field().clone();
    let mut k = 1u32;
    loop {
        let field = make_field_capped(base.p(), base.s() * k, EXTENSION_FIELD_CAP)
            .map_err(|_| OracleError::ExtensionCapExceeded { needed: k, cap })?;
        let table = base.embedding_into(&field).expect("subfield");
        let g: Vec<PuiseuxSeries> = f.iter().map(|c| c.embed(&field, &table)).collect();
        match roots_in_field(&g, precision, false) {
            Err(OracleError::NeedExtension { degree }) => {
                k *= degree;
                if k > cap {
                    return Err(OracleError::ExtensionCapExceeded { needed: k, cap });
                }
            }
            other => return other,
        }
    }
}

/// Evaluates f at a series (for substituting roots back).
pub fn evaluate(f: &[PuiseuxSeries], x: &PuiseuxSeries) -> PuiseuxSeries {
    f.iter().rev().fold(PuiseuxSeries::zero(x.field()), |acc, c| acc.mul(x).add(c))
}
