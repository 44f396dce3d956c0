//! Generator sequences: the length-n pulse that defines a circulant operator.

use crate::error::{Error, Result};
use crate::fft::FftPair;
use crate::rng::derive_rng;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt;
use std::str::FromStr;

/// Statistical model of the generating pulse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorModel {
    /// Independent ±1 signs with equal probability.
    Rademacher,
    /// Independent standard normal entries.
    Gaussian,
    /// Random signs in the Fourier domain: φ = √n·F⁻¹ε with ε drawn
    /// conjugate-symmetrically so the pulse is real; its DFT has constant
    /// modulus √n.
    FourierBernoulli,
    /// The scaled unit impulse √n·e₀ (flat spectrum); with Ω = {0..n−1} the
    /// partial operator is exactly the identity. Arbitrary fixed pulses go
    /// through [`GeneratorSequence::from_values`].
    Deterministic,
}

impl fmt::Display for GeneratorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeneratorModel::Rademacher => "rademacher",
            GeneratorModel::Gaussian => "gaussian",
            GeneratorModel::FourierBernoulli => "fourier-bernoulli",
            GeneratorModel::Deterministic => "deterministic",
        };
        f.write_str(s)
    }
}

impl FromStr for GeneratorModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rademacher" => Ok(GeneratorModel::Rademacher),
            "gaussian" => Ok(GeneratorModel::Gaussian),
            "fourier-bernoulli" => Ok(GeneratorModel::FourierBernoulli),
            "deterministic" => Ok(GeneratorModel::Deterministic),
            other => Err(Error::InvalidParameter(format!(
                "unknown generator model '{other}' (expected rademacher | gaussian | fourier-bernoulli | deterministic)"
            ))),
        }
    }
}

/// A length-n pulse together with its model tag and seed provenance.
///
/// The same `(model, n, seed)` triple always reproduces bitwise-identical
/// values.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSequence {
    values: Vec<f64>,
    model: GeneratorModel,
    seed: u64,
}

impl GeneratorSequence {
    /// Wraps an explicit pulse as a deterministic generator.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("generator values"));
        }
        Ok(GeneratorSequence {
            values,
            model: GeneratorModel::Deterministic,
            seed: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn model(&self) -> GeneratorModel {
        self.model
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draws a generator sequence for `model` of length `n`, deterministically in
/// `(model, n, seed)`.
pub fn make_generator(model: GeneratorModel, n: usize, seed: u64) -> Result<GeneratorSequence> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let values = match model {
        GeneratorModel::Rademacher => {
            let mut rng = derive_rng(seed, "generator/rademacher", 0);
            (0..n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect()
        }
        GeneratorModel::Gaussian => {
            let mut rng = derive_rng(seed, "generator/gaussian", 0);
            (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
        }
        GeneratorModel::FourierBernoulli => fourier_bernoulli(n, seed)?,
        GeneratorModel::Deterministic => {
            let mut v = vec![0.0; n];
            v[0] = (n as f64).sqrt();
            v
        }
    };
    Ok(GeneratorSequence { values, model, seed })
}

/// φ = √n·F⁻¹ε with the sign vector mirrored (ε_{n−ω} = ε_ω) so φ is real.
fn fourier_bernoulli(n: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = derive_rng(seed, "generator/fourier-bernoulli", 0);
    let mut signs = vec![0.0f64; n];
    for w in 0..=(n / 2) {
        let s = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        signs[w] = s;
        signs[(n - w) % n] = s;
    }
    let mut buf: Vec<Complex64> = signs.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    FftPair::new(n).inverse(&mut buf);
    let sqrt_n = (n as f64).sqrt();
    let residue = buf.iter().map(|c| c.im.abs()).fold(0.0, f64::max) * sqrt_n;
    let tolerance = 1e-10 * sqrt_n;
    if residue > tolerance {
        return Err(Error::TransformResidue { residue, tolerance });
    }
    Ok(buf.into_iter().map(|c| c.re * sqrt_n).collect())
}
