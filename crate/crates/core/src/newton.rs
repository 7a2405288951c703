//! Exact lower convex hulls of (exponent, valuation) point sets.

use crate::algebra::{ExactRational, Val};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("need at least two finite points with distinct x")]
    TooFewPoints,
}

/// Lower hull vertices with strictly increasing x; collinear points dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(u64, ExactRational)>,
}

fn cross_nonneg(a: &(u64, ExactRational), b: &(u64, ExactRational), c: &(u64, ExactRational)) -> bool {
    // b is on or above segment ac  <=>  (b.y - a.y)(c.x - a.x) >= (c.y - a.y)(b.x - a.x)
    let dx_ab = BigInt::from(b.0) - BigInt::from(a.0);
    let dx_ac = BigInt::from(c.0) - BigInt::from(a.0);
    (&b.1 - &a.1) * ExactRational::from_integer(dx_ac) >= (&c.1 - &a.1) * ExactRational::from_integer(dx_ab)
}

/// Lower convex hull; `PlusInfinity` points (zero coefficients) are ignored.
pub fn lower_hull(points: &[(u64, Val<ExactRational>)]) -> Result<NewtonPolygon, NewtonError> {
    let mut pts: Vec<(u64, ExactRational)> =
        points.iter().filter_map(|(x, y)| y.finite().map(|y| (*x, y.clone()))).collect();
    pts.sort();
    // for repeated x keep the lowest y (first after sorting)
    pts.dedup_by(|later, earlier| later.0 == earlier.0);
    if pts.len() < 2 {
        return Err(NewtonError::TooFewPoints);
    }
    let mut hull: Vec<(u64, ExactRational)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && cross_nonneg(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(NewtonPolygon { vertices: hull })
}

impl NewtonPolygon {
    pub fn vertices(&self) -> &[(u64, ExactRational)] {
        &self.vertices
    }

    pub fn vertex_xs(&self) -> Vec<u64> {
        self.vertices.iter().map(|v| v.0).collect()
    }

    /// (slope, horizontal length) per segment, slopes strictly increasing.
    pub fn segments(&self) -> Vec<(ExactRational, u64)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let len = w[1].0 - w[0].0;
                ((&w[1].1 - &w[0].1) / ExactRational::from_integer(BigInt::from(len)), len)
            })
            .collect()
    }

    /// Root valuations with multiplicities: a segment of slope μ and length ℓ
    /// accounts for ℓ roots of valuation −μ.
    pub fn root_valuations(&self) -> Vec<(ExactRational, u64)> {
        self.segments().into_iter().map(|(s, l)| (-s, l)).collect()
    }
}

/// Same as [`NewtonPolygon::segments`]: (slope, multiplicity).
pub fn slopes(np: &NewtonPolygon) -> Vec<(ExactRational, u64)> {
    np.segments()
}
