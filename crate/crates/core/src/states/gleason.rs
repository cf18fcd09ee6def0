//! States induced by density operators: `ω(x) = ⟨Wx, x⟩`.

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::metric::MetricSample;
use crate::states::FloatState;

/// Tolerance for hermiticity, unit trace and positivity.
pub const DENSITY_TOL: f64 = 1e-12;

/// A positive semidefinite Hermitian matrix of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex<f64>>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex<f64>>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidDensityMatrix(format!(
                "{}x{} is not a nonempty square matrix",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let skew = (&entries - entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if skew > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {skew:e})"
            )));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {trace} is not 1"
            )));
        }
        let lowest = entries.symmetric_eigenvalues().min();
        if lowest < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "eigenvalue {lowest:e} is negative"
            )));
        }
        Ok(DensityMatrix { entries })
    }

    pub fn from_real(entries: DMatrix<f64>) -> Result<Self> {
        Self::new(entries.map(|v| Complex::new(v, 0.0)))
    }

    /// `I/d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        Self::from_real(DMatrix::identity(d, d) / d as f64)
    }

    /// The projection onto the span of `v`.
    pub fn pure(v: &[f64]) -> Result<Self> {
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        let d = v.len();
        Self::from_real(DMatrix::from_fn(d, d, |i, j| v[i] * v[j] / norm2))
    }

    /// `GG†/tr(GG†)` for a complex Gaussian `G`.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        let g = DMatrix::<Complex<f64>>::from_fn(d, d, |_, _| {
            Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let mut w = &g * g.adjoint();
        let tr = w.trace().re;
        w /= Complex::new(tr, 0.0);
        // Exact symmetrisation removes rounding asymmetry.
        let w = (&w + w.adjoint()) * Complex::new(0.5, 0.0);
        Self::new(w)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<f64>> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `⟨Wx, x⟩` for a real vector `x`.
    pub fn expectation(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut total = 0.0;
        for (i, xi) in x.iter().enumerate() {
            for (j, xj) in x.iter().enumerate() {
                total += self.entries[(i, j)].re * xi * xj;
            }
        }
        Ok(total)
    }
}

/// The float state `x ↦ ⟨Wx, x⟩` on a sampled test space.
pub fn gleason_state(sample: &MetricSample, w: &DensityMatrix) -> Result<FloatState> {
    let values = sample
        .ids()
        .iter()
        .zip(sample.points())
        .map(|(id, p)| Ok((id.clone(), w.expectation(p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FloatState::new(values))
}
