//! Newton polygons of polynomials over k[[u]]: lower convex hulls of
//! (exponent, valuation) points, reported as root u-valuations with
//! multiplicities, as exact rationals.

use crate::error::{Error, Result};
use crate::rat::{rat, Rat};
use num_traits::Zero;

/// One hull segment read as root data: `mult` roots of u-valuation `val`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeClass {
    pub val: Rat,
    pub mult: u64,
}

/// Lower-convex-hull slopes of the points (exponent, valuation), negated so
/// they are root valuations, with horizontal lengths as multiplicities.
/// Input pairs with no finite valuation (zero coefficients) are omitted by
/// the caller. Requires at least two points and a finite valuation on the
/// highest exponent present.
pub fn newton_slopes(points: &[(u64, Rat)]) -> Result<Vec<SlopeClass>> {
    if points.len() < 2 {
        return Err(Error::DegenerateInput(
            "need at least two exponents with finite valuation".into(),
        ));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    // keep the least valuation per exponent
    pts.dedup_by(|next, prev| next.0 == prev.0);
    if pts.len() < 2 {
        return Err(Error::DegenerateInput(
            "all points share one exponent".into(),
        ));
    }

    // Andrew-style lower hull on (exponent, valuation).
    let mut hull: Vec<(u64, Rat)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            // b above or on segment a->pt: drop b
            let lhs = (b.1.clone() - a.1.clone()) * rat(pt.0 as i64 - a.0 as i64, 1);
            let rhs = (pt.1.clone() - a.1.clone()) * rat(b.0 as i64 - a.0 as i64, 1);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }

    let mut out = Vec::new();
    for w in hull.windows(2) {
        let (x0, y0) = (&w[0].0, &w[0].1);
        let (x1, y1) = (&w[1].0, &w[1].1);
        let run = x1 - x0;
        let slope = (y1.clone() - y0.clone()) / rat(run as i64, 1);
        out.push(SlopeClass {
            val: -slope,
            mult: run,
        });
    }
    // largest root valuation first (hull is built left to right, where the
    // steepest downward segments sit at the low exponents)
    out.sort_by(|a, b| b.val.cmp(&a.val));
    // merge equal valuations
    let mut merged: Vec<SlopeClass> = Vec::new();
    for s in out {
        match merged.last_mut() {
            Some(last) if last.val == s.val => last.mult += s.mult,
            _ => merged.push(s),
        }
    }
    Ok(merged)
}

/// Total number of roots counted by a slope list.
pub fn total_multiplicity(slopes: &[SlopeClass]) -> u64 {
    slopes.iter().map(|s| s.mult).sum()
}

/// Sum of all root valuations (= val(constant term) - val(leading term) when
/// both hull endpoints are present).
pub fn valuation_mass(slopes: &[SlopeClass]) -> Rat {
    slopes.iter().fold(Rat::zero(), |acc, s| {
        acc + s.val.clone() * rat(s.mult as i64, 1)
    })
}
