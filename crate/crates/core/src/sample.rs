//! Sample sets: the retained output coordinates Ω of a partial operator.

use crate::error::{Error, Result};
use rand::Rng;
use std::fmt;
use std::str::FromStr;

/// An ordered index set Ω ⊂ {0..n−1}; stored strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet {
    indices: Vec<usize>,
    n: usize,
}

impl SampleSet {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        if indices.is_empty() {
            return Err(Error::InvalidSampleSet("index set is empty".into()));
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSampleSet("duplicate indices".into()));
        }
        if *indices.last().unwrap() >= n {
            return Err(Error::InvalidSampleSet(format!(
                "index {} out of range for n = {}",
                indices.last().unwrap(),
                n
            )));
        }
        Ok(SampleSet { indices, n })
    }

    /// Ω = {0, …, n−1}.
    pub fn full(n: usize) -> Result<Self> {
        SampleSet::new((0..n).collect(), n)
    }

    /// Ω = {0, …, m−1}: the channel-estimation pattern of consecutive samples.
    pub fn consecutive(n: usize, m: usize) -> Result<Self> {
        check_m(n, m)?;
        SampleSet::new((0..m).collect(), n)
    }

    /// Ω = {⌊i·n/m⌋ : i = 0..m−1}.
    pub fn equispaced(n: usize, m: usize) -> Result<Self> {
        check_m(n, m)?;
        SampleSet::new((0..m).map(|i| i * n / m).collect(), n)
    }

    /// Uniform draw of m distinct indices.
    pub fn uniform<R: Rng>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        check_m(n, m)?;
        let indices = rand::seq::index::sample(rng, n, m).into_vec();
        SampleSet::new(indices, n)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

fn check_m(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    if m == 0 || m > n {
        return Err(Error::InvalidSampleSet(format!(
            "m = {m} must satisfy 1 <= m <= n = {n}"
        )));
    }
    Ok(())
}

/// How Ω is chosen in sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaMode {
    Uniform,
    Consecutive,
    Equispaced,
}

impl OmegaMode {
    pub fn sample<R: Rng>(self, n: usize, m: usize, rng: &mut R) -> Result<SampleSet> {
        match self {
            OmegaMode::Uniform => SampleSet::uniform(n, m, rng),
            OmegaMode::Consecutive => SampleSet::consecutive(n, m),
            OmegaMode::Equispaced => SampleSet::equispaced(n, m),
        }
    }
}

impl fmt::Display for OmegaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OmegaMode::Uniform => "uniform",
            OmegaMode::Consecutive => "consecutive",
            OmegaMode::Equispaced => "equispaced",
        };
        f.write_str(s)
    }
}

impl FromStr for OmegaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(OmegaMode::Uniform),
            "consecutive" => Ok(OmegaMode::Consecutive),
            "equispaced" => Ok(OmegaMode::Equispaced),
            other => Err(Error::InvalidParameter(format!(
                "unknown omega mode '{other}' (expected uniform | consecutive | equispaced)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_rng;

    #[test]
    fn rejects_out_of_range_and_duplicates() {
        assert!(SampleSet::new(vec![0, 4], 4).is_err());
        assert!(SampleSet::new(vec![1, 1], 4).is_err());
        assert!(SampleSet::new(vec![], 4).is_err());
    }

    #[test]
    fn sorts_input() {
        let s = SampleSet::new(vec![3, 0, 2], 4).unwrap();
        assert_eq!(s.indices(), &[0, 2, 3]);
    }

    #[test]
    fn equispaced_is_strictly_increasing() {
        for (n, m) in [(7, 3), (16, 5), (64, 64)] {
            let s = SampleSet::equispaced(n, m).unwrap();
            assert_eq!(s.len(), m);
            assert!(s.indices().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn uniform_draw_is_deterministic_in_seed() {
        let a = SampleSet::uniform(32, 8, &mut derive_rng(5, "t", 0)).unwrap();
        let b = SampleSet::uniform(32, 8, &mut derive_rng(5, "t", 0)).unwrap();
        assert_eq!(a, b);
    }
}
