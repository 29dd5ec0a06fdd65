//! Hull operator, convex sets and the nearest-point map.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finitespace::SetValuedMap;
use crate::setfam::{Subbase, SubsetMask, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexHullResult {
    pub input: SubsetMask,
    pub hull: SubsetMask,
    /// Members containing the input, ascending.
    pub supporting: Vec<SubsetMask>,
}

/// Intersection of all members containing `b`; the ground set when none does.
pub fn hull(sb: &Subbase, b: SubsetMask) -> ConvexHullResult {
    let supporting: Vec<SubsetMask> = sb.members().iter().copied().filter(|s| b.is_subset(*s)).collect();
    let hull = supporting.iter().fold(sb.ground().full(), |acc, &s| acc & s);
    ConvexHullResult {
        input: b,
        hull,
        supporting,
    }
}

pub fn hull_set(sb: &Subbase, b: SubsetMask) -> SubsetMask {
    sb.members()
        .iter()
        .filter(|s| b.is_subset(**s))
        .fold(sb.ground().full(), |acc, &s| acc & s)
}

/// `b` contains the hull of each of its pairs.
pub fn is_convex(sb: &Subbase, b: SubsetMask) -> Verdict {
    let points: Vec<usize> = b.to_vec();
    for (i, &x) in points.iter().enumerate() {
        for &y in &points[i + 1..] {
            let h = hull_set(sb, SubsetMask::from_points([x, y]));
            if !h.is_subset(b) {
                return Verdict::fails(Witness::NonConvex { x, y, hull: h });
            }
        }
    }
    Verdict::holds()
}

/// The set `⋂_{a ∈ F} I({x, a}) ∩ I(F)`, before the singleton check.
pub fn xi_set(sb: &Subbase, x: usize, f: SubsetMask) -> SubsetMask {
    let base = SubsetMask::singleton(x);
    f.points()
        .fold(hull_set(sb, f), |acc, a| acc & hull_set(sb, base.with(a)))
}

/// The nearest point of `F` to `x`.
///
/// The defining intersection is a single point whenever the subbase is
/// binary, normal and point-separating; otherwise this reports
/// [`Error::NotSingleton`] instead of validating the subbase up front.
pub fn xi(sb: &Subbase, x: usize, f: SubsetMask) -> Result<usize> {
    if f.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let g = sb.ground();
    g.check_point(x)?;
    if !g.contains(f) {
        return Err(Error::OutOfRangePoint {
            point: (f - g.full()).min_point().unwrap_or(0) as i64,
            n: g.len(),
        });
    }
    let set = xi_set(sb, x, f);
    set.single_point().ok_or(Error::NotSingleton(set))
}

/// `Ψ(z) = I(Φ(z))`.
pub fn convexify(sb: &Subbase, phi: &SetValuedMap) -> Result<SetValuedMap> {
    let values = phi.values().iter().map(|&v| hull_set(sb, v)).collect();
    SetValuedMap::new(phi.ground(), values)
}
