//! Partial circulant measurement operators with fast and dense paths.
//!
//! The circulant generated by φ has entries Φ°(i,j) = φ_{(i−j) mod n}, so its
//! first column is φ in order. The partial operator keeps the rows indexed by
//! Ω and scales by 1/√m. Fast application goes through the FFT (forward
//! transform, pointwise multiply by the cached DFT of φ, inverse transform);
//! `materialize` provides the dense entrywise path used as an oracle.

use crate::error::{Error, Result};
use crate::fft::FftPair;
use crate::generator::GeneratorSequence;
use crate::sample::SampleSet;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Default ceiling on the ambient dimension for dense (O(n²)-memory) paths.
pub const DEFAULT_DENSE_LIMIT: usize = 4096;

/// Anything that can be applied and adjoint-applied to real vectors.
///
/// All recovery algorithms are written against this trait, so they run
/// unchanged on the fast FFT-backed operator and on a dense materialization.
pub trait LinearOperator: Sync {
    /// Output dimension m.
    fn rows(&self) -> usize;
    /// Input dimension n.
    fn cols(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>>;
    fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>>;
}

/// Shared circulant convolution engine: cached spectrum + FFT plans.
#[derive(Clone, Debug)]
pub(crate) struct CirculantEngine {
    n: usize,
    fhat: Vec<Complex64>,
    fft: FftPair,
}

impl CirculantEngine {
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        let fft = FftPair::new(n);
        let mut fhat: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft.forward(&mut fhat);
        CirculantEngine { n, fhat, fft }
    }

    pub fn fhat(&self) -> &[Complex64] {
        &self.fhat
    }

    fn convolve_complex(&self, x: &[f64], conjugate_spectrum: bool) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft.forward(&mut buf);
        if conjugate_spectrum {
            for (b, f) in buf.iter_mut().zip(&self.fhat) {
                *b *= f.conj();
            }
        } else {
            for (b, f) in buf.iter_mut().zip(&self.fhat) {
                *b *= f;
            }
        }
        self.fft.inverse(&mut buf);
        buf
    }

    /// Φ°x for real x; rejects the result if the imaginary residue exceeds
    /// 1e−10·‖x‖₂ (a residue that large means the transform path is broken,
    /// not that truncation is acceptable).
    pub fn convolve_real(&self, x: &[f64], conjugate_spectrum: bool) -> Result<Vec<f64>> {
        let buf = self.convolve_complex(x, conjugate_spectrum);
        let tolerance = 1e-10 * norm2(x);
        let residue = buf.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if residue > tolerance {
            return Err(Error::TransformResidue { residue, tolerance });
        }
        Ok(buf.into_iter().map(|c| c.re).collect())
    }
}

/// Φ = (1/√m)·R_Ω·Φ°: the partial circulant measurement operator.
///
/// Immutable after construction and safe to share across threads.
#[derive(Clone, Debug)]
pub struct PartialCirculantOperator {
    generator: GeneratorSequence,
    samples: SampleSet,
    engine: CirculantEngine,
    scale: f64,
}

impl PartialCirculantOperator {
    pub fn new(generator: GeneratorSequence, samples: SampleSet) -> Result<Self> {
        if samples.ambient() != generator.len() {
            return Err(Error::DimensionMismatch {
                context: "PartialCirculantOperator::new",
                expected: generator.len(),
                actual: samples.ambient(),
            });
        }
        let engine = CirculantEngine::new(generator.values());
        let scale = 1.0 / (samples.len() as f64).sqrt();
        Ok(PartialCirculantOperator {
            generator,
            samples,
            engine,
            scale,
        })
    }

    pub fn generator(&self) -> &GeneratorSequence {
        &self.generator
    }

    pub fn samples(&self) -> &SampleSet {
        &self.samples
    }

    /// The cached DFT of the generator.
    pub fn fhat(&self) -> &[Complex64] {
        self.engine.fhat()
    }

    /// 1/√m.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Full circulant action Φ°x (no restriction, no scaling).
    pub fn circulant_full(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                context: "circulant_full",
                expected: self.cols(),
                actual: x.len(),
            });
        }
        self.engine.convolve_real(x, false)
    }

    /// Column j of the scaled operator, entrywise: scale·φ_{(Ω[i]−j) mod n}.
    pub fn column(&self, j: usize) -> Vec<f64> {
        let n = self.cols();
        let phi = self.generator.values();
        self.samples
            .indices()
            .iter()
            .map(|&i| self.scale * phi[(i + n - j) % n])
            .collect()
    }

    /// Dense m×n materialization with entry (i,j) = scale·φ_{(Ω[i]−j) mod n}.
    pub fn materialize(&self) -> Result<DMatrix<f64>> {
        self.materialize_with_limit(DEFAULT_DENSE_LIMIT)
    }

    pub fn materialize_with_limit(&self, limit: usize) -> Result<DMatrix<f64>> {
        let n = self.cols();
        if n > limit {
            return Err(Error::DenseLimitExceeded { n, limit });
        }
        let phi = self.generator.values();
        let omega = self.samples.indices();
        Ok(DMatrix::from_fn(self.rows(), n, |i, j| {
            self.scale * phi[(omega[i] + n - j) % n]
        }))
    }
}

impl LinearOperator for PartialCirculantOperator {
    fn rows(&self) -> usize {
        self.samples.len()
    }

    fn cols(&self) -> usize {
        self.generator.len()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let full = self.circulant_full(x)?;
        Ok(self
            .samples
            .indices()
            .iter()
            .map(|&i| self.scale * full[i])
            .collect())
    }

    fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows() {
            return Err(Error::DimensionMismatch {
                context: "adjoint",
                expected: self.rows(),
                actual: y.len(),
            });
        }
        let mut embedded = vec![0.0; self.cols()];
        for (&i, &v) in self.samples.indices().iter().zip(y) {
            embedded[i] = v;
        }
        let full = self.engine.convolve_real(&embedded, true)?;
        Ok(full.into_iter().map(|v| self.scale * v).collect())
    }
}

/// Circular convolution Φ°x for a standalone generator.
pub fn circulant_apply(generator: &GeneratorSequence, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != generator.len() {
        return Err(Error::DimensionMismatch {
            context: "circulant_apply",
            expected: generator.len(),
            actual: x.len(),
        });
    }
    CirculantEngine::new(generator.values()).convolve_real(x, false)
}

/// Downward cyclic shift: (Sᵏx)_ℓ = x_{ℓ⊖k}.
pub fn cyclic_shift_down(x: &[f64], k: usize) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let k = k % n;
    (0..n).map(|l| x[(l + n - k) % n]).collect()
}

/// Selected rows of an n×n Toeplitz matrix, applied via a circulant of
/// dimension 2n.
///
/// The generator `g` has length ≥ 2n−1 with T(i,j) = g[(i−j) mod (2n−1)]:
/// g[0..n) is the first column top-down and g[n..2n−1) holds the
/// superdiagonals t_{−(n−1)}, …, t_{−1} in that order. The map is unscaled.
#[derive(Clone, Debug)]
pub struct ToeplitzOperator {
    engine: CirculantEngine,
    rows: SampleSet,
    n: usize,
}

/// Builds the Toeplitz row-selection map from the diagonal generator.
pub fn toeplitz_operator(
    generator: &[f64],
    row_indices: &[usize],
    n: usize,
) -> Result<ToeplitzOperator> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    if generator.len() < 2 * n - 1 {
        return Err(Error::DimensionMismatch {
            context: "toeplitz_operator generator",
            expected: 2 * n - 1,
            actual: generator.len(),
        });
    }
    let rows = SampleSet::new(row_indices.to_vec(), n)?;
    // Embed: c[k] = t_k for 0 <= k < n, c[n] = 0, c[n+j] = t_{j-n} for 1 <= j < n.
    let mut c = vec![0.0; 2 * n];
    c[..n].copy_from_slice(&generator[..n]);
    for j in 1..n {
        c[n + j] = generator[n - 1 + j];
    }
    Ok(ToeplitzOperator {
        engine: CirculantEngine::new(&c),
        rows,
        n,
    })
}

impl LinearOperator for ToeplitzOperator {
    fn rows(&self) -> usize {
        self.rows.len()
    }

    fn cols(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "ToeplitzOperator::apply",
                expected: self.n,
                actual: x.len(),
            });
        }
        let mut padded = vec![0.0; 2 * self.n];
        padded[..self.n].copy_from_slice(x);
        let full = self.engine.convolve_real(&padded, false)?;
        Ok(self.rows.indices().iter().map(|&i| full[i]).collect())
    }

    fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                context: "ToeplitzOperator::adjoint",
                expected: self.rows.len(),
                actual: y.len(),
            });
        }
        let mut embedded = vec![0.0; 2 * self.n];
        for (&i, &v) in self.rows.indices().iter().zip(y) {
            embedded[i] = v;
        }
        let full = self.engine.convolve_real(&embedded, true)?;
        Ok(full[..self.n].to_vec())
    }
}

/// Dense matrix wrapped as an operator; the reference path for
/// operator-agnostic checks.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    matrix: DMatrix<f64>,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<f64>) -> Self {
        DenseOperator { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

impl LinearOperator for DenseOperator {
    fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                context: "DenseOperator::apply",
                expected: self.cols(),
                actual: x.len(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(x);
        Ok((&self.matrix * v).iter().copied().collect())
    }

    fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows() {
            return Err(Error::DimensionMismatch {
                context: "DenseOperator::adjoint",
                expected: self.rows(),
                actual: y.len(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(y);
        Ok(self.matrix.tr_mul(&v).iter().copied().collect())
    }
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
