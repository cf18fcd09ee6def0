//! Brute-force oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::Rng;
use testspace::TestSpace;

pub type Set = BTreeSet<usize>;

/// Every subset of every test, deduplicated.
pub fn oracle_events(ts: &TestSpace) -> Vec<Set> {
    let mut out = BTreeSet::new();
    for test in ts.tests() {
        let members: Vec<usize> = test.iter().collect();
        for mask in 0u32..1 << members.len() {
            out.insert(
                members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &x)| x)
                    .collect::<Set>(),
            );
        }
    }
    out.into_iter().collect()
}

fn oracle_complementary(ts: &TestSpace, a: &Set, c: &Set) -> bool {
    a.is_disjoint(c)
        && ts.tests().iter().any(|t| {
            let u: Set = a.union(c).copied().collect();
            u == t.iter().collect::<Set>()
        })
}

/// Number of classes of the equivalence generated by perspectivity, via
/// union-find over all event pairs.
pub fn oracle_class_count(ts: &TestSpace) -> usize {
    let events = oracle_events(ts);
    let n = events.len();
    let comp: Vec<Vec<bool>> = events
        .iter()
        .map(|a| {
            events
                .iter()
                .map(|c| oracle_complementary(ts, a, c))
                .collect()
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in 0..n {
        for b in a + 1..n {
            if (0..n).any(|c| comp[a][c] && comp[b][c]) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

/// A random test space on at most `max_outcomes` outcomes with at most
/// `max_tests` distinct tests.
pub fn random_space<R: Rng>(rng: &mut R, max_outcomes: usize, max_tests: usize) -> TestSpace {
    loop {
        let n = rng.random_range(2..=max_outcomes);
        let m = rng.random_range(1..=max_tests);
        let mut tests: Vec<Set> = Vec::new();
        for _ in 0..m {
            let size = rng.random_range(1..=n.min(4));
            let t: Set = sample(rng, n, size).into_iter().collect();
            if !tests.contains(&t) {
                tests.push(t);
            }
        }
        let used: Set = tests.iter().flatten().copied().collect();
        let ids: Vec<String> = used.iter().map(|x| format!("x{x}")).collect();
        let named: Vec<Vec<String>> = tests
            .iter()
            .map(|t| t.iter().map(|x| format!("x{x}")).collect())
            .collect();
        if let Ok(ts) = TestSpace::new(ids, named) {
            return ts;
        }
    }
}

/// A random space with pairwise disjoint tests of sizes in `2..=5`.
pub fn random_semiclassical<R: Rng>(rng: &mut R, max_tests: usize) -> TestSpace {
    let m = rng.random_range(1..=max_tests);
    let mut ids = Vec::new();
    let mut tests = Vec::new();
    for t in 0..m {
        let size = rng.random_range(2..=5);
        let test: Vec<String> = (0..size).map(|k| format!("t{t}o{k}")).collect();
        ids.extend(test.iter().cloned());
        tests.push(test);
    }
    TestSpace::new(ids, tests).expect("disjoint tests form a test space")
}

pub fn random_unit<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Rotates `p` about the unit `axis` by `angle` (Rodrigues).
pub fn rotate(p: &[f64], axis: &[f64], angle: f64) -> Vec<f64> {
    let (s, c) = angle.sin_cos();
    let k_dot_p: f64 = axis.iter().zip(p).map(|(a, b)| a * b).sum();
    let cross = [
        axis[1] * p[2] - axis[2] * p[1],
        axis[2] * p[0] - axis[0] * p[2],
        axis[0] * p[1] - axis[1] * p[0],
    ];
    (0..3)
        .map(|i| p[i] * c + cross[i] * s + axis[i] * k_dot_p * (1.0 - c))
        .collect()
}
