//! Finite point sets as elements of the hyperspace: Vietoris basic opens,
//! Hausdorff distance and bottleneck matching distance.

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest cardinality for which matching distance tries every bijection.
pub const EXHAUSTIVE_MATCHING_MAX: usize = 8;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean distance. Bitwise symmetric in its arguments.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .map(|d| d * d)
        .sum::<f64>()
        .sqrt()
}

/// An open ball `B(center, radius)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &[f64]) -> bool {
        distance(&self.center, p) < self.radius
    }
}

/// The basic open `⟨U₁,…,Uₙ⟩` with each `Uᵢ` an open ball.
#[derive(Debug, Clone, PartialEq)]
pub struct VietorisBasicOpen {
    balls: Vec<Ball>,
}

impl VietorisBasicOpen {
    pub fn new(balls: Vec<Ball>) -> Result<Self> {
        if balls.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(b) = balls.iter().find(|b| b.radius.is_nan() || b.radius <= 0.0) {
            return Err(Error::InvalidSample(format!(
                "ball radius {} is not positive",
                b.radius
            )));
        }
        Ok(VietorisBasicOpen { balls })
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    /// `B ⊆ ⋃ Uᵢ` and `B ∩ Uᵢ ≠ ∅` for every `i`.
    pub fn contains<P: AsRef<[f64]>>(&self, set: &[P]) -> bool {
        set.iter()
            .all(|p| self.balls.iter().any(|b| b.contains(p.as_ref())))
            && self
                .balls
                .iter()
                .all(|b| set.iter().any(|p| b.contains(p.as_ref())))
    }
}

pub fn vietoris_member<P: AsRef<[f64]>>(set: &[P], open: &VietorisBasicOpen) -> bool {
    open.contains(set)
}

/// `max_{a∈A} min_{b∈B} d(a, b)`.
pub fn directed_hausdorff<P: AsRef<[f64]>, Q: AsRef<[f64]>>(a: &[P], b: &[Q]) -> f64 {
    a.iter()
        .map(|p| {
            b.iter()
                .map(|q| distance(p.as_ref(), q.as_ref()))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

pub fn hausdorff_distance<P: AsRef<[f64]>, Q: AsRef<[f64]>>(a: &[P], b: &[Q]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

fn check_sizes<P, Q>(a: &[P], b: &[Q]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::CardinalityMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(())
}

/// `min_σ max_i d(aᵢ, σ(aᵢ))` over bijections `σ: A → B`.
pub fn matching_distance<P: AsRef<[f64]>, Q: AsRef<[f64]>>(a: &[P], b: &[Q]) -> Result<f64> {
    if a.len() <= EXHAUSTIVE_MATCHING_MAX {
        matching_distance_exhaustive(a, b)
    } else {
        matching_distance_bottleneck(a, b)
    }
}

fn distance_table<P: AsRef<[f64]>, Q: AsRef<[f64]>>(a: &[P], b: &[Q]) -> Vec<Vec<f64>> {
    a.iter()
        .map(|p| b.iter().map(|q| distance(p.as_ref(), q.as_ref())).collect())
        .collect()
}

/// Tries every permutation.
pub fn matching_distance_exhaustive<P: AsRef<[f64]>, Q: AsRef<[f64]>>(
    a: &[P],
    b: &[Q],
) -> Result<f64> {
    check_sizes(a, b)?;
    let table = distance_table(a, b);
    let n = a.len();
    Ok((0..n)
        .permutations(n)
        .map(|sigma| {
            sigma
                .iter()
                .enumerate()
                .map(|(i, &j)| table[i][j])
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min))
}

/// Binary search over the distinct pair distances for the smallest
/// threshold admitting a perfect matching.
pub fn matching_distance_bottleneck<P: AsRef<[f64]>, Q: AsRef<[f64]>>(
    a: &[P],
    b: &[Q],
) -> Result<f64> {
    check_sizes(a, b)?;
    let table = distance_table(a, b);
    let mut candidates: Vec<f64> = table.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&table, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

/// Kuhn's augmenting paths on the graph `d(aᵢ, bⱼ) ≤ threshold`.
fn perfect_matching(table: &[Vec<f64>], threshold: f64) -> bool {
    let n = table.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(
        i: usize,
        table: &[Vec<f64>],
        t: f64,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..table.len() {
            if table[i][j] <= t && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, table, t, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    (0..n).all(|i| augment(i, table, threshold, &mut vec![false; n], &mut owner))
}

/// Minimum pairwise distance, `∞` for fewer than two points.
pub fn separation<P: AsRef<[f64]>>(set: &[P]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, p) in set.iter().enumerate() {
        for q in &set[i + 1..] {
            best = best.min(distance(p.as_ref(), q.as_ref()));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1: [f64; 3] = [1.0, 0.0, 0.0];
    const E2: [f64; 3] = [0.0, 1.0, 0.0];
    const E3: [f64; 3] = [0.0, 0.0, 1.0];

    fn balls(r: f64) -> VietorisBasicOpen {
        VietorisBasicOpen::new(
            [E1, E2, E3]
                .iter()
                .map(|c| Ball {
                    center: c.to_vec(),
                    radius: r,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn vietoris_membership() {
        let v = balls(0.5);
        assert!(vietoris_member(&[E1, E2, E3], &v));
        assert!(!vietoris_member(&[E1, E2], &v));
        let far = [-1.0, 0.0, 0.0];
        assert!(!vietoris_member(&[E1, E2, E3, far], &v));
    }

    #[test]
    fn vietoris_rejects_bad_balls() {
        assert!(VietorisBasicOpen::new(vec![]).is_err());
        assert!(VietorisBasicOpen::new(vec![Ball {
            center: E1.to_vec(),
            radius: 0.0
        }])
        .is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let s2 = 2f64.sqrt();
        assert_eq!(hausdorff_distance(&[E1, E2], &[E1, E2]).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&[E1, E2], &[E1, E3]).unwrap(), s2);
        assert_eq!(hausdorff_distance(&[E1], &[E1, E2]).unwrap(), s2);
        let empty: [[f64; 3]; 0] = [];
        assert_eq!(hausdorff_distance(&empty, &[E1]), Err(Error::EmptySet));
    }

    #[test]
    fn matching_examples() {
        let s2 = 2f64.sqrt();
        assert_eq!(matching_distance(&[E1, E2], &[E1, E2]).unwrap(), 0.0);
        assert_eq!(matching_distance(&[E1, E2], &[E2, E1]).unwrap(), 0.0);
        assert_eq!(matching_distance(&[E1, E2], &[E1, E3]).unwrap(), s2);
        assert_eq!(
            matching_distance(&[E1, E2], &[E1]),
            Err(Error::CardinalityMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn both_matching_routes_agree() {
        let pts: Vec<[f64; 2]> = (0..7)
            .map(|i| [(i as f64).cos(), (i as f64 * 1.3).sin()])
            .collect();
        let other: Vec<[f64; 2]> = (0..7)
            .map(|i| [(i as f64 * 0.7).sin(), (i as f64).cos()])
            .collect();
        assert_eq!(
            matching_distance_exhaustive(&pts, &other).unwrap(),
            matching_distance_bottleneck(&pts, &other).unwrap()
        );
    }

    #[test]
    fn distance_is_symmetric() {
        let a = [0.3, -0.1, 0.7];
        let b = [-0.2, 0.9, 0.1];
        assert_eq!(distance(&a, &b), distance(&b, &a));
    }
}
