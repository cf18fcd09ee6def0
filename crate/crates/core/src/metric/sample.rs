//! Outcomes embedded as unit vectors, with tolerance-based orthogonality and
//! seeded frame sampling.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::hyperspace::dot;
use crate::space::{tokenize, OutcomeSet, TestSpace};

/// Default orthogonality tolerance `ε_⊥` in radians.
pub const DEFAULT_ORTHO_TOL: f64 = 1e-9;

/// Allowed deviation of a sampled point's norm from 1.
pub const NORM_TOL: f64 = 1e-12;

/// A finite metric sample of `(S, 𝔉)`: unit vectors of `ℝᵈ` with tests
/// given by pairwise-orthogonal subsets.
///
/// Points are stored in lexicographic id order, so indices agree with the
/// induced [`TestSpace`].
#[derive(Debug, Clone)]
pub struct MetricSample {
    dim: usize,
    ids: Vec<String>,
    points: Vec<Vec<f64>>,
    tests: Vec<OutcomeSet>,
    ortho_tol: f64,
    space: TestSpace,
}

impl MetricSample {
    /// Validates unit norms, per-test orthogonality within `ortho_tol` and
    /// test sizes `≤ d`.
    pub fn new(
        ids: Vec<String>,
        points: Vec<Vec<f64>>,
        tests: Vec<Vec<usize>>,
        ortho_tol: f64,
    ) -> Result<Self> {
        if ids.len() != points.len() {
            return Err(Error::InvalidSample(format!(
                "{} ids for {} points",
                ids.len(),
                points.len()
            )));
        }
        let dim = points.first().map_or(0, Vec::len);
        if dim < 2 {
            return Err(Error::InvalidSample("dimension must be at least 2".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        let mut rank = vec![0; ids.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let ids: Vec<String> = order.iter().map(|&i| ids[i].clone()).collect();
        let points: Vec<Vec<f64>> = order.iter().map(|&i| points[i].clone()).collect();
        let tests: Vec<OutcomeSet> = tests
            .into_iter()
            .map(|t| {
                t.into_iter()
                    .map(|i| {
                        rank.get(i)
                            .copied()
                            .ok_or_else(|| Error::InvalidSample(format!("point #{i} out of range")))
                    })
                    .collect::<Result<OutcomeSet>>()
            })
            .collect::<Result<_>>()?;
        let space = TestSpace::from_sets(ids.clone(), tests.clone())?;
        let sample = MetricSample {
            dim,
            ids,
            points,
            tests,
            ortho_tol,
            space,
        };
        sample.validate()?;
        Ok(sample)
    }

    fn validate(&self) -> Result<()> {
        for (id, p) in self.ids.iter().zip(&self.points) {
            let norm = dot(p, p).sqrt();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidSample(format!("`{id}` has norm {norm}")));
            }
        }
        for (t, test) in self.tests.iter().enumerate() {
            if test.len() > self.dim {
                return Err(Error::InvalidSample(format!(
                    "test #{t} has {} points in dimension {}",
                    test.len(),
                    self.dim
                )));
            }
            let members = test.as_slice();
            for (i, &x) in members.iter().enumerate() {
                for &y in &members[i + 1..] {
                    if !self.orthogonal(x, y) {
                        return Err(Error::InvalidSample(format!(
                            "`{}` and `{}` in test #{t} are not orthogonal",
                            self.ids[x], self.ids[y]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pairs a test space with coordinates keyed by outcome id.
    pub fn from_space(
        space: &TestSpace,
        coords: &HashMap<String, Vec<f64>>,
        ortho_tol: f64,
    ) -> Result<Self> {
        let points = space
            .outcomes()
            .iter()
            .map(|id| {
                coords
                    .get(id)
                    .cloned()
                    .ok_or_else(|| Error::MissingValue(id.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let tests = space.tests().iter().map(|t| t.iter().collect()).collect();
        Self::new(space.outcomes().to_vec(), points, tests, ortho_tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn tests(&self) -> &[OutcomeSet] {
        &self.tests
    }

    /// Points of test `t`.
    pub fn test_points(&self, t: usize) -> Vec<&[f64]> {
        self.tests[t]
            .iter()
            .map(|i| self.points[i].as_slice())
            .collect()
    }

    pub fn ortho_tol(&self) -> f64 {
        self.ortho_tol
    }

    pub fn test_space(&self) -> &TestSpace {
        &self.space
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.space.outcome_index(id)
    }

    /// `|⟨x, y⟩| ≤ sin ε_⊥` for distinct points.
    pub fn orthogonal(&self, x: usize, y: usize) -> bool {
        x != y && dot(&self.points[x], &self.points[y]).abs() <= self.ortho_tol.sin()
    }

    /// Every orthogonal pair `(i, j)`, `i < j`, in lexicographic order.
    pub fn orthogonal_pairs(&self) -> Vec<(usize, usize)> {
        let bound = self.ortho_tol.sin();
        let points = &self.points;
        (0..points.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                (i + 1..points.len())
                    .filter(move |&j| dot(&points[i], &points[j]).abs() <= bound)
                    .map(move |j| (i, j))
            })
            .collect()
    }

    /// Sidecar coordinate lines `outcome <id> <x> <y> ...`.
    pub fn to_coords(&self) -> String {
        let mut out = String::new();
        for (id, p) in self.ids.iter().zip(&self.points) {
            out.push_str("outcome ");
            out.push_str(id);
            for v in p {
                let _ = write!(out, " {v:?}");
            }
            out.push('\n');
        }
        out
    }

    /// Restriction to the given tests.
    pub fn restrict(&self, tests: &[usize]) -> Result<MetricSample> {
        let mut keep: Vec<usize> = tests.iter().flat_map(|&t| self.tests[t].iter()).collect();
        keep.sort_unstable();
        keep.dedup();
        let position: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        MetricSample::new(
            keep.iter().map(|&i| self.ids[i].clone()).collect(),
            keep.iter().map(|&i| self.points[i].clone()).collect(),
            tests
                .iter()
                .map(|&t| self.tests[t].iter().map(|i| position[&i]).collect())
                .collect(),
            self.ortho_tol,
        )
    }
}

/// Parses sidecar coordinate lines into an id → vector map.
pub fn parse_coords(text: &str) -> Result<HashMap<String, Vec<f64>>> {
    let mut out = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = tokenize(content);
        let Some((col, keyword)) = tokens.next() else {
            continue;
        };
        if keyword != "outcome" {
            return Err(Error::parse(
                line,
                col,
                format!("unknown keyword `{keyword}`"),
            ));
        }
        let (_, id) = tokens
            .next()
            .ok_or_else(|| Error::parse(line, col, "missing outcome id"))?;
        let coords = tokens
            .map(|(col, tok)| {
                tok.parse::<f64>()
                    .map_err(|_| Error::parse(line, col, format!("bad coordinate `{tok}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if out.insert(id.to_string(), coords).is_some() {
            return Err(Error::DuplicateOutcome(id.to_string()));
        }
    }
    Ok(out)
}

/// A uniformly random rotation of `ℝᵈ`: QR of a Gaussian matrix with the
/// signs of `R`'s diagonal folded into `Q`, then a column flip if needed to
/// make the determinant positive.
pub fn random_rotation<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// `count` frames obtained by rotating the standard basis of `ℝᵈ` with
/// independent random rotations drawn from a ChaCha stream seeded by `seed`.
///
/// Frame `k` is identical for every `count > k`, so samples with the same
/// seed are nested.
pub fn sample_frames(d: usize, count: usize, seed: u64) -> Result<MetricSample> {
    if d < 2 {
        return Err(Error::InvalidSample("dimension must be at least 2".into()));
    }
    if count == 0 {
        return Err(Error::InvalidSample(
            "frame count must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fw = (count - 1).to_string().len();
    let kw = d.to_string().len();
    let mut ids = Vec::with_capacity(count * d);
    let mut points = Vec::with_capacity(count * d);
    let mut tests = Vec::with_capacity(count);
    for f in 0..count {
        let q = random_rotation(d, &mut rng);
        let mut test = Vec::with_capacity(d);
        for k in 0..d {
            test.push(points.len());
            ids.push(format!("f{f:0fw$}e{:0kw$}", k + 1));
            points.push(normalized(q.column(k).iter().copied().collect()));
        }
        tests.push(test);
    }
    MetricSample::new(ids, points, tests, DEFAULT_ORTHO_TOL)
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let n = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
    v
}
