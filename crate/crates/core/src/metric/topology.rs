//! Finite-sample checks of the topological lemmas: totally non-orthogonal
//! neighbourhoods, uniform rank bounds, local constancy of cardinality,
//! closure of tests and continuity of sum maps.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::metric::hyperspace::{distance, dot, hausdorff_distance, matching_distance, separation};
use crate::metric::MetricSample;

/// Smallest orthogonality slack used by [`closure_check`], so that a
/// computed orthonormal frame passes with `tol = 0`.
pub const ORTHO_FLOOR: f64 = 1e-12;

/// Chord length of an angular radius on the unit sphere.
pub fn chord_for_angle(theta: f64) -> f64 {
    2.0 * (theta / 2.0).sin()
}

/// Largest `r` with no orthogonal pair inside `B(x, r)`, given the list of
/// orthogonal pairs. `f64::INFINITY` if there are none.
pub fn tno_radius_with_pairs(sample: &MetricSample, pairs: &[(usize, usize)], x: usize) -> f64 {
    let p = sample.point(x);
    pairs
        .iter()
        .map(|&(u, v)| distance(p, sample.point(u)).max(distance(p, sample.point(v))))
        .fold(f64::INFINITY, f64::min)
}

pub fn tno_radius(sample: &MetricSample, x: &str) -> Result<f64> {
    let x = sample.index_of(x)?;
    Ok(tno_radius_with_pairs(sample, &sample.orthogonal_pairs(), x))
}

/// A greedy cover by totally non-orthogonal caps.
#[derive(Debug, Clone, PartialEq)]
pub struct RankBound {
    pub bound: usize,
    /// Indices of the cap centres.
    pub centers: Vec<usize>,
}

/// Greedily covers the sample with open balls of `cap_radius` centred at
/// sample points, then checks that no ball contains an orthogonal pair.
/// The cap count bounds every pairwise-orthogonal subset.
pub fn rank_bound(sample: &MetricSample, cap_radius: f64) -> Result<RankBound> {
    rank_bound_with_pairs(sample, &sample.orthogonal_pairs(), cap_radius)
}

pub fn rank_bound_with_pairs(
    sample: &MetricSample,
    pairs: &[(usize, usize)],
    cap_radius: f64,
) -> Result<RankBound> {
    let mut centers: Vec<usize> = Vec::new();
    for (i, p) in sample.points().iter().enumerate() {
        if !centers
            .iter()
            .any(|&c| distance(sample.point(c), p) < cap_radius)
        {
            centers.push(i);
        }
    }
    for &(u, v) in pairs {
        for &c in &centers {
            let centre = sample.point(c);
            if distance(centre, sample.point(u)) < cap_radius
                && distance(centre, sample.point(v)) < cap_radius
            {
                return Err(Error::CapNotTotallyNonOrthogonal {
                    center: sample.ids()[c].clone(),
                    first: sample.ids()[u].clone(),
                    second: sample.ids()[v].clone(),
                });
            }
        }
    }
    Ok(RankBound {
        bound: centers.len(),
        centers,
    })
}

/// A largest pairwise-orthogonal subset of the sample, grown level by level
/// by merging cliques that differ in their last element.
pub fn max_orthogonal_subset(sample: &MetricSample) -> Vec<usize> {
    max_orthogonal_subset_with_pairs(sample.len(), &sample.orthogonal_pairs())
}

/// [`max_orthogonal_subset`] on `n` points with a precomputed pair list.
pub fn max_orthogonal_subset_with_pairs(n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut adjacent: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in pairs {
        adjacent[u].insert(v);
        adjacent[v].insert(u);
    }
    let mut level: Vec<Vec<usize>> = pairs.iter().map(|&(u, v)| vec![u, v]).collect();
    let mut best = match level.first() {
        Some(c) => c.clone(),
        None => return (0..n.min(1)).collect(),
    };
    while !level.is_empty() {
        best = level[0].clone();
        let mut next = Vec::new();
        for clique in &level {
            let last = clique[clique.len() - 1];
            for &y in adjacent[last].range(last + 1..) {
                if clique.iter().all(|&z| adjacent[z].contains(&y)) {
                    let mut grown = clique.clone();
                    grown.push(y);
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    best
}

/// Whether Hausdorff proximity forces equal cardinality: when
/// `d_H(A, B) < ½·min(sep A, sep B)` then `|A| = |B|` and the matching
/// distance equals the Hausdorff distance. Vacuously true otherwise.
pub fn event_cardinality_locally_constant<P: AsRef<[f64]>>(a: &[P], b: &[P]) -> bool {
    let Ok(dh) = hausdorff_distance(a, b) else {
        return true;
    };
    if dh >= 0.5 * separation(a).min(separation(b)) {
        return true;
    }
    a.len() == b.len() && matching_distance(a, b).is_ok_and(|dm| dm == dh)
}

/// Given a sequence `Fₖ` converging to `E`, checks that `E` is pairwise
/// orthogonal within `tol` and keeps the cardinality of the last term.
///
/// Fails with [`Error::NotConvergent`] if the last term is farther than
/// `tol` from `E`.
pub fn closure_check<P: AsRef<[f64]>>(sequence: &[Vec<P>], limit: &[P], tol: f64) -> Result<bool> {
    let last = sequence.last().ok_or(Error::EmptySet)?;
    let d = hausdorff_distance(last, limit)?;
    if d > tol {
        return Err(Error::NotConvergent { distance: d, tol });
    }
    let slack = tol.max(ORTHO_FLOOR);
    let orthogonal = limit.iter().enumerate().all(|(i, x)| {
        limit[i + 1..]
            .iter()
            .all(|y| dot(x.as_ref(), y.as_ref()).abs() <= slack)
    });
    Ok(orthogonal && limit.len() == last.len())
}

/// Outcome of [`sum_map_lipschitz`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzCheck {
    /// `|Σ_A f − Σ_B f|`.
    pub difference: f64,
    /// `n·Λ·d_match(A, B)`.
    pub bound: f64,
    pub holds: bool,
}

/// Checks `|Σ_{a∈A} f(a) − Σ_{b∈B} f(b)| ≤ n·Λ·d_match(A, B)`, allowing for
/// the rounding of the two sums.
pub fn sum_map_lipschitz<P, F>(f: F, lipschitz: f64, a: &[P], b: &[P]) -> Result<LipschitzCheck>
where
    P: AsRef<[f64]>,
    F: Fn(&[f64]) -> f64,
{
    let dm = matching_distance(a, b)?;
    let fa: Vec<f64> = a.iter().map(|p| f(p.as_ref())).collect();
    let fb: Vec<f64> = b.iter().map(|p| f(p.as_ref())).collect();
    let difference = (fa.iter().sum::<f64>() - fb.iter().sum::<f64>()).abs();
    let bound = a.len() as f64 * lipschitz * dm;
    let rounding = 4.0 * f64::EPSILON * fa.iter().chain(&fb).map(|v| v.abs()).sum::<f64>();
    Ok(LipschitzCheck {
        difference,
        bound,
        holds: difference <= bound + rounding,
    })
}
