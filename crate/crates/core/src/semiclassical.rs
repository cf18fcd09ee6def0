//! Semi-classical test spaces (pairwise disjoint tests) and greedy
//! extraction of dense disjoint test families from frame samples.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::{distance, Ball, MetricSample, VietorisBasicOpen};
use crate::space::TestSpace;
use crate::states::ExactState;

/// Default minimum point distance between selected tests.
pub const DEFAULT_MARGIN: f64 = 1e-6;

/// Default ball radius of auto-generated basic opens.
pub const DEFAULT_BASIS_RADIUS: f64 = 0.05;

/// Whether distinct tests never overlap; otherwise the first overlapping pair.
pub fn is_semiclassical(ts: &TestSpace) -> (bool, Option<(usize, usize)>) {
    for x in 0..ts.outcome_count() {
        if let [first, second, ..] = ts.tests_containing(x) {
            return (false, Some((*first, *second)));
        }
    }
    (true, None)
}

/// `Σ_E (2^|E| − 2) + 2`, the size of the horizontal sum of the Boolean
/// algebras `2^E`.
pub fn horizontal_sum_size(ts: &TestSpace) -> Result<u128> {
    if let (false, Some((first, second))) = is_semiclassical(ts) {
        return Err(Error::NotSemiclassical { first, second });
    }
    let mut total = 2u128;
    for (t, test) in ts.tests().iter().enumerate() {
        if test.len() < 2 {
            return Err(Error::DegenerateTest(t));
        }
        total += (1u128 << test.len()) - 2;
    }
    Ok(total)
}

/// Indices of the tests sharing no outcome with test `e`.
pub fn disjoint_tests(ts: &TestSpace, e: usize) -> Vec<usize> {
    let target = ts.test(e);
    (0..ts.tests().len())
        .filter(|&f| f != e && ts.test(f).is_disjoint(target))
        .collect()
}

/// Result of [`extract_semiclassical`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionResult {
    /// Selected test indices, in selection order.
    pub selected: Vec<usize>,
    /// Basic open index → selected test index.
    pub basis_hits: BTreeMap<usize, usize>,
    /// Basic opens for which no admissible test existed.
    pub failures: Vec<usize>,
    /// Largest distance from a sampled outcome to the selected points.
    pub coverage_radius: f64,
    /// `coverage_radius ≤ δ`.
    pub target_met: bool,
}

impl ExtractionResult {
    /// Fraction of basic opens that received a test.
    pub fn hit_rate(&self) -> f64 {
        let total = self.basis_hits.len() + self.failures.len();
        self.basis_hits.len() as f64 / total as f64
    }
}

fn separated(sample: &MetricSample, a: usize, b: usize, margin: f64) -> bool {
    sample.tests()[a].iter().all(|x| {
        sample.tests()[b]
            .iter()
            .all(|y| x != y && distance(sample.point(x), sample.point(y)) >= margin)
    })
}

/// Greedy pass over `basis`: for each basic open, selects the lowest-index
/// test lying in it and at distance `≥ margin` from every test already
/// selected, or records a failure.
pub fn extract_semiclassical(
    sample: &MetricSample,
    basis: &[VietorisBasicOpen],
    delta: f64,
    margin: f64,
) -> Result<ExtractionResult> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let mut selected: Vec<usize> = Vec::new();
    let mut basis_hits = BTreeMap::new();
    let mut failures = Vec::new();
    for (k, open) in basis.iter().enumerate() {
        let found = (0..sample.tests().len()).find(|&t| {
            open.contains(&sample.test_points(t))
                && selected.iter().all(|&s| separated(sample, s, t, margin))
        });
        match found {
            Some(t) => {
                selected.push(t);
                basis_hits.insert(k, t);
            }
            None => failures.push(k),
        }
    }
    let coverage_radius = coverage_radius(sample, &selected, sample.points());
    Ok(ExtractionResult {
        selected,
        basis_hits,
        failures,
        coverage_radius,
        target_met: coverage_radius <= delta,
    })
}

/// `max_{p ∈ probes} min_{x ∈ ⋃ selected} d(p, x)`; `∞` with no selection.
pub fn coverage_radius<P: AsRef<[f64]>>(
    sample: &MetricSample,
    selected: &[usize],
    probes: &[P],
) -> f64 {
    let chosen: Vec<&[f64]> = selected
        .iter()
        .flat_map(|&t| sample.tests()[t].iter().map(|x| sample.point(x)))
        .collect();
    probes
        .iter()
        .map(|p| {
            chosen
                .iter()
                .map(|c| distance(p.as_ref(), c))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// `count` basic opens `⟨B(c₁,r),…,B(c_k,r)⟩`, one per centre test. Centres
/// are chosen farthest-first: each new test maximizes the smallest distance
/// from its points to the points of the tests chosen so far, starting from
/// test 0. Prefixes are stable under increasing `count`.
pub fn auto_basis(
    sample: &MetricSample,
    count: usize,
    radius: f64,
) -> Result<Vec<VietorisBasicOpen>> {
    if count == 0 || sample.tests().is_empty() {
        return Err(Error::EmptyBasis);
    }
    let tests = sample.tests();
    // gap[t] = min distance from test t's points to the chosen points.
    let mut gap = vec![f64::INFINITY; tests.len()];
    let mut centres = Vec::with_capacity(count);
    let mut next = 0usize;
    for _ in 0..count.min(tests.len()) {
        centres.push(next);
        for (t, test) in tests.iter().enumerate() {
            for x in test.iter() {
                for y in tests[next].iter() {
                    gap[t] = gap[t].min(distance(sample.point(x), sample.point(y)));
                }
            }
        }
        next = (0..tests.len())
            .max_by(|&a, &b| gap[a].total_cmp(&gap[b]).then(b.cmp(&a)))
            .unwrap_or(0);
    }
    centres
        .into_iter()
        .map(|c| {
            VietorisBasicOpen::new(
                sample.tests()[c]
                    .iter()
                    .map(|x| Ball {
                        center: sample.point(x).to_vec(),
                        radius,
                    })
                    .collect(),
            )
        })
        .collect()
}

/// A dispersion-free state on the sub-test-space of `selected` tests: one
/// seeded outcome per test gets value 1. Requires the selection to be
/// pairwise disjoint.
pub fn hidden_variable_state(ts: &TestSpace, selected: &[usize], seed: u64) -> Result<ExactState> {
    if selected.is_empty() {
        return Err(Error::EmptySelection);
    }
    for (i, &a) in selected.iter().enumerate() {
        for &b in &selected[i + 1..] {
            if !ts.test(a).is_disjoint(ts.test(b)) {
                return Err(Error::NotSemiclassical {
                    first: a,
                    second: b,
                });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::new();
    for &t in selected {
        let test = ts.test(t).as_slice();
        let chosen = test[rng.random_range(0..test.len())];
        for &x in test {
            let v = if x == chosen {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            values.push((ts.outcome_id(x).to_string(), v));
        }
    }
    Ok(ExactState::new(values))
}
