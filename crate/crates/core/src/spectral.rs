//! Fourier-domain verification objects: the unnormalized DFT, the conjugated
//! projector P̂_Ω = n⁻¹·F·P_Ω·F⁻¹, and the chaos matrices Z_x.
//!
//! These are dense n×n objects gated by the dense limit; they exist for
//! verification and small-scale study. Production paths use the fast applies
//! in [`crate::operator`].

use crate::error::{Error, Result};
use crate::operator::{cyclic_shift_down, norm2, LinearOperator, PartialCirculantOperator, DEFAULT_DENSE_LIMIT};
use crate::sample::SampleSet;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// The unnormalized DFT matrix, F(ω,ℓ) = e^{−i2πωℓ/n}; satisfies F·F* = n·I.
pub fn dft_matrix(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |w, l| {
        let angle = -2.0 * PI * ((w * l) % n) as f64 / n as f64;
        Complex64::new(angle.cos(), angle.sin())
    })
}

/// Direct O(n²) summation transform; the oracle against the FFT path.
pub fn dft_direct(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|w| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, &v) in x.iter().enumerate() {
                let angle = -2.0 * PI * ((w * l) % n) as f64 / n as f64;
                acc += Complex64::new(angle.cos(), angle.sin()) * v;
            }
            acc
        })
        .collect()
}

/// P̂_Ω together with the sample set it came from.
#[derive(Clone, Debug)]
pub struct FourierProjector {
    pub matrix: DMatrix<Complex64>,
    pub samples: SampleSet,
}

/// Forms P̂_Ω = n⁻¹·F·P_Ω·F⁻¹ from its definition, evaluated as the sum of
/// rank-one terms n⁻²·Σ_{j∈Ω} F(:,j)·F(:,j)* (P_Ω is the 0–1 diagonal and
/// F⁻¹ = F*/n).
pub fn fourier_projector(samples: &SampleSet) -> Result<FourierProjector> {
    let n = samples.ambient();
    if n > DEFAULT_DENSE_LIMIT {
        return Err(Error::DenseLimitExceeded {
            n,
            limit: DEFAULT_DENSE_LIMIT,
        });
    }
    let f = dft_matrix(n);
    let mut matrix = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for &j in samples.indices() {
        let col = f.column(j);
        for w in 0..n {
            let fw = col[w];
            for xi in 0..n {
                matrix[(w, xi)] += fw * col[xi].conj();
            }
        }
    }
    let scale = 1.0 / (n as f64 * n as f64);
    matrix.iter_mut().for_each(|v| *v *= scale);
    Ok(FourierProjector {
        matrix,
        samples: samples.clone(),
    })
}

/// Eigenvalues of a Hermitian complex matrix via the real symmetric embedding
/// [[Re, −Im], [Im, Re]] (each eigenvalue appears twice), returned in
/// descending order.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let n = h.nrows();
    let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = h[(i, j)];
            big[(i, j)] = v.re;
            big[(i + n, j + n)] = v.re;
            big[(i, j + n)] = -v.im;
            big[(i + n, j)] = v.im;
        }
    }
    let mut eigs: Vec<f64> = big.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eigs.into_iter().step_by(2).collect()
}

/// Per-property deviations of a projector from the four stated identities.
#[derive(Clone, Debug)]
pub struct LemmaOneReport {
    /// Entry drift along cyclic diagonals.
    pub circulant: f64,
    /// |P(i,j) − conj(P(j,i))|.
    pub conjugate_symmetric: f64,
    /// |P(ω,ω) − m/n²|.
    pub diagonal: f64,
    /// Off-diagonal modulus in excess of m/n².
    pub off_diagonal_excess: f64,
    /// |Σ_ξ |P(ω,ξ)|² − m/n³| per row.
    pub row_energy: f64,
    /// Deviation of the sorted spectrum from m copies of 1/n plus zeros.
    pub eigenvalues: f64,
    /// |‖P‖_F² − m/n²|.
    pub frobenius: f64,
}

pub const LEMMA_PROPERTY_NAMES: [&str; 4] = [
    "circulant-conjugate-symmetric",
    "diagonal-offdiagonal-bound",
    "row-energy",
    "eigenvalues-norms",
];

impl LemmaOneReport {
    /// The four properties in statement order, each with its worst deviation.
    pub fn property_deviations(&self) -> [(&'static str, f64); 4] {
        [
            (
                LEMMA_PROPERTY_NAMES[0],
                self.circulant.max(self.conjugate_symmetric),
            ),
            (
                LEMMA_PROPERTY_NAMES[1],
                self.diagonal.max(self.off_diagonal_excess),
            ),
            (LEMMA_PROPERTY_NAMES[2], self.row_energy),
            (LEMMA_PROPERTY_NAMES[3], self.eigenvalues.max(self.frobenius)),
        ]
    }

    pub fn max_deviation(&self) -> f64 {
        self.property_deviations()
            .iter()
            .map(|(_, d)| *d)
            .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }

    /// First property exceeding `tol`, if any.
    pub fn first_failure(&self, tol: f64) -> Option<&'static str> {
        self.property_deviations()
            .iter()
            .find(|(_, d)| *d > tol)
            .map(|(name, _)| *name)
    }
}

/// Checks all four projector properties, returning the worst deviation each.
pub fn lemma_one_report(projector: &FourierProjector) -> LemmaOneReport {
    let p = &projector.matrix;
    let n = p.nrows();
    let m = projector.samples.len();
    let nf = n as f64;
    let diag_target = m as f64 / (nf * nf);
    let row_target = m as f64 / (nf * nf * nf);

    let mut circulant = 0.0f64;
    let mut conjugate_symmetric = 0.0f64;
    let mut diagonal = 0.0f64;
    let mut off_diagonal_excess = 0.0f64;
    let mut row_energy = 0.0f64;
    let mut frob_sq = 0.0f64;
    for i in 0..n {
        let mut row_sq = 0.0f64;
        for j in 0..n {
            let v = p[(i, j)];
            circulant = circulant.max((v - p[((i + 1) % n, (j + 1) % n)]).norm());
            conjugate_symmetric = conjugate_symmetric.max((v - p[(j, i)].conj()).norm());
            if i == j {
                diagonal = diagonal.max((v - diag_target).norm());
            } else {
                off_diagonal_excess = off_diagonal_excess.max(v.norm() - diag_target);
            }
            row_sq += v.norm_sqr();
        }
        row_energy = row_energy.max((row_sq - row_target).abs());
        frob_sq += row_sq;
    }
    off_diagonal_excess = off_diagonal_excess.max(0.0);

    let eigs = hermitian_eigenvalues(p);
    let inv_n = 1.0 / nf;
    let mut eig_dev = 0.0f64;
    for (rank, &lambda) in eigs.iter().enumerate() {
        let target = if rank < m { inv_n } else { 0.0 };
        eig_dev = eig_dev.max((lambda - target).abs());
    }
    let frobenius = (frob_sq - diag_target).abs();

    LemmaOneReport {
        circulant,
        conjugate_symmetric,
        diagonal,
        off_diagonal_excess,
        row_energy,
        eigenvalues: eig_dev,
        frobenius,
    }
}

/// Max entrywise deviation between F·Sᵏ and Mᵏ·F, where M(ω,ω) = e^{−i2πω/n}.
pub fn modulation_deviation(n: usize, k: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    if n > DEFAULT_DENSE_LIMIT {
        return Err(Error::DenseLimitExceeded {
            n,
            limit: DEFAULT_DENSE_LIMIT,
        });
    }
    if k >= n {
        return Err(Error::InvalidParameter(format!("k = {k} must be < n = {n}")));
    }
    let f = dft_matrix(n);
    let mut worst = 0.0f64;
    for w in 0..n {
        let angle = -2.0 * PI * ((w * k) % n) as f64 / n as f64;
        let mk = Complex64::new(angle.cos(), angle.sin());
        for l in 0..n {
            // Column l of S^k has its 1 in row l+k, so (F·S^k)(ω,l) = F(ω, l+k).
            let lhs = f[(w, (l + k) % n)];
            let rhs = mk * f[(w, l)];
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// True iff the shift/modulation identity holds to 1e−10.
pub fn modulation_identity_check(n: usize, k: usize) -> Result<bool> {
    Ok(modulation_deviation(n, k)? <= 1e-10)
}

/// Membership in T = {x : ‖x‖₀ ≤ s, ‖x‖₂ ≤ 1}.
pub fn check_sparse_ball(x: &[f64], s: usize) -> Result<()> {
    let nnz = x.iter().filter(|v| **v != 0.0).count();
    if nnz > s {
        return Err(Error::OutsideSparseBall(format!(
            "{nnz} nonzeros > s = {s}"
        )));
    }
    let norm = norm2(x);
    if norm > 1.0 + 1e-12 {
        return Err(Error::OutsideSparseBall(format!("||x||_2 = {norm} > 1")));
    }
    Ok(())
}

/// G_x = ‖Φx‖₂² − ‖x‖₂², evaluated through the fast operator path.
///
/// `x` must lie in the s-sparse unit ball; violations are reported, not
/// clipped.
pub fn chaos_value(op: &PartialCirculantOperator, x: &[f64], s: usize) -> Result<f64> {
    check_sparse_ball(x, s)?;
    let ax = op.apply(x)?;
    let energy_out: f64 = ax.iter().map(|v| v * v).sum();
    let energy_in: f64 = x.iter().map(|v| v * v).sum();
    Ok(energy_out - energy_in)
}

/// G_x evaluated from the time-domain shift double sum
/// (1/m)·Σ_{k≠ℓ} ε_k ε_ℓ ⟨P_Ω Sᵏx, Sℓx⟩; independent of the FFT path.
pub fn chaos_value_time_domain(
    generator: &crate::generator::GeneratorSequence,
    samples: &SampleSet,
    x: &[f64],
) -> Result<f64> {
    let n = generator.len();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            context: "chaos_value_time_domain",
            expected: n,
            actual: x.len(),
        });
    }
    if samples.ambient() != n {
        return Err(Error::DimensionMismatch {
            context: "chaos_value_time_domain samples",
            expected: n,
            actual: samples.ambient(),
        });
    }
    let eps = generator.values();
    let m = samples.len() as f64;
    // Restrict each shifted copy to Omega once.
    let restricted: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let shifted = cyclic_shift_down(x, k);
            samples.indices().iter().map(|&i| shifted[i]).collect()
        })
        .collect();
    let mut acc = 0.0f64;
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            let dot: f64 = restricted[k]
                .iter()
                .zip(&restricted[l])
                .map(|(a, b)| a * b)
                .sum();
            acc += eps[k] * eps[l] * dot;
        }
    }
    Ok(acc / m)
}

/// The hollow conjugate-symmetric chaos matrix Z_x with entries
/// m⁻¹·x̂*·M^{−k}·P̂_Ω·M^ℓ·x̂ off the diagonal.
#[derive(Clone, Debug)]
pub struct ChaosMatrix {
    pub matrix: DMatrix<Complex64>,
    pub x: Vec<f64>,
}

/// Builds Z_x = m⁻¹·(F*·X̂*·P̂_Ω·X̂·F − diag(·)) where X̂ = diag(Fx).
pub fn chaos_matrix(x: &[f64], samples: &SampleSet) -> Result<ChaosMatrix> {
    let n = samples.ambient();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            context: "chaos_matrix",
            expected: n,
            actual: x.len(),
        });
    }
    if n > DEFAULT_DENSE_LIMIT {
        return Err(Error::DenseLimitExceeded {
            n,
            limit: DEFAULT_DENSE_LIMIT,
        });
    }
    let f = dft_matrix(n);
    let xc = nalgebra::DVector::from_iterator(n, x.iter().map(|&v| Complex64::new(v, 0.0)));
    let xhat = &f * xc;
    let p = fourier_projector(samples)?.matrix;
    // X̂* P̂ X̂ via row/column scaling.
    let mut inner = p;
    for w in 0..n {
        for xi in 0..n {
            inner[(w, xi)] = xhat[w].conj() * inner[(w, xi)] * xhat[xi];
        }
    }
    let mut a = f.adjoint() * inner * &f;
    let scale = 1.0 / samples.len() as f64;
    a.iter_mut().for_each(|v| *v *= scale);
    for k in 0..n {
        a[(k, k)] = Complex64::new(0.0, 0.0);
    }
    Ok(ChaosMatrix {
        matrix: a,
        x: x.to_vec(),
    })
}

/// ⟨ε, Z_x ε⟩ for a real sign (or any real) vector ε; the Fourier-domain form
/// of the chaos process.
pub fn chaos_quadratic_form(z: &ChaosMatrix, eps: &[f64]) -> Result<f64> {
    let n = z.matrix.nrows();
    if eps.len() != n {
        return Err(Error::DimensionMismatch {
            context: "chaos_quadratic_form",
            expected: n,
            actual: eps.len(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        for l in 0..n {
            acc += z.matrix[(k, l)] * eps[k] * eps[l];
        }
    }
    if acc.im.abs() > 1e-9 * (1.0 + acc.re.abs()) {
        return Err(Error::NonFinite("chaos quadratic form imaginary residue"));
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{make_generator, GeneratorModel, GeneratorSequence};
    use crate::rng::derive_rng;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    #[test]
    fn dft_unnormalized_convention() {
        for n in [1usize, 4, 7] {
            let f = dft_matrix(n);
            let prod = &f * f.adjoint();
            for i in 0..n {
                for j in 0..n {
                    let expected = if i == j { n as f64 } else { 0.0 };
                    assert!((prod[(i, j)] - expected).norm() <= 1e-10 * n as f64);
                }
            }
        }
    }

    #[test]
    fn projector_full_omega_is_scaled_identity() {
        let n = 6;
        let p = fourier_projector(&SampleSet::full(n).unwrap()).unwrap();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { 1.0 / n as f64 } else { 0.0 };
                assert!((p.matrix[(i, j)] - expected).norm() <= 1e-12);
            }
        }
        let eigs = hermitian_eigenvalues(&p.matrix);
        for &l in &eigs {
            assert_abs_diff_eq!(l, 1.0 / n as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn projector_diagonal_and_frobenius_values() {
        // n = 8, |Omega| = 3: diagonal entries and squared Frobenius norm both 3/64.
        let samples = SampleSet::new(vec![1, 4, 6], 8).unwrap();
        let p = fourier_projector(&samples).unwrap();
        for w in 0..8 {
            assert!((p.matrix[(w, w)] - 3.0 / 64.0).norm() <= 1e-12);
        }
        let frob_sq: f64 = p.matrix.iter().map(|v| v.norm_sqr()).sum();
        assert_abs_diff_eq!(frob_sq, 3.0 / 64.0, epsilon = 1e-12);
    }

    #[test]
    fn lemma_report_passes_on_random_draws() {
        let mut rng = derive_rng(0, "lemma-unit", 0);
        for _ in 0..20 {
            let n = 2 + rng.gen::<usize>() % 31;
            let m = 1 + rng.gen::<usize>() % n;
            let samples = SampleSet::uniform(n, m, &mut rng).unwrap();
            let report = lemma_one_report(&fourier_projector(&samples).unwrap());
            assert!(report.passes(1e-9), "n={n} m={m}: {report:?}");
        }
    }

    #[test]
    fn lemma_report_catches_corruption() {
        let samples = SampleSet::new(vec![0, 3], 8).unwrap();
        let mut p = fourier_projector(&samples).unwrap();
        p.matrix[(0, 1)] += Complex64::new(0.5, 0.0);
        let report = lemma_one_report(&p);
        assert!(!report.passes(1e-9));
        assert_eq!(report.first_failure(1e-9), Some(LEMMA_PROPERTY_NAMES[0]));
    }

    #[test]
    fn modulation_identity_examples() {
        assert!(modulation_identity_check(5, 0).unwrap());
        assert!(modulation_identity_check(4, 1).unwrap());
        assert!(modulation_identity_check(7, 3).unwrap());
        assert!(modulation_deviation(7, 3).unwrap() <= 1e-12);
    }

    #[test]
    fn chaos_value_zero_vector() {
        let gen = make_generator(GeneratorModel::Rademacher, 8, 5).unwrap();
        let samples = SampleSet::new(vec![0, 2, 5], 8).unwrap();
        let op = PartialCirculantOperator::new(gen, samples).unwrap();
        assert_eq!(chaos_value(&op, &[0.0; 8], 2).unwrap(), 0.0);
    }

    #[test]
    fn chaos_value_one_sparse_rademacher() {
        let gen = make_generator(GeneratorModel::Rademacher, 16, 5).unwrap();
        let samples = SampleSet::uniform(16, 6, &mut derive_rng(5, "omega", 1)).unwrap();
        let op = PartialCirculantOperator::new(gen, samples).unwrap();
        for j in [0usize, 7, 15] {
            let mut x = vec![0.0; 16];
            x[j] = 1.0;
            assert!(chaos_value(&op, &x, 1).unwrap().abs() <= 1e-10);
        }
    }

    #[test]
    fn chaos_value_worked_instance() {
        // Support {0,2} block of G - I is [[0,-1],[-1,0]]; x = (e0+e2)/sqrt(2)
        // gives exactly -1.
        let gen = GeneratorSequence::from_values(vec![1.0, 1.0, -1.0, 1.0]).unwrap();
        let samples = SampleSet::new(vec![0, 2], 4).unwrap();
        let op = PartialCirculantOperator::new(gen, samples).unwrap();
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        let x = vec![inv_sqrt2, 0.0, inv_sqrt2, 0.0];
        assert_abs_diff_eq!(chaos_value(&op, &x, 2).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn chaos_value_rejects_outside_t() {
        let gen = make_generator(GeneratorModel::Rademacher, 8, 5).unwrap();
        let samples = SampleSet::new(vec![0, 2, 5], 8).unwrap();
        let op = PartialCirculantOperator::new(gen, samples).unwrap();
        let mut x = vec![0.0; 8];
        x[0] = 1.5;
        assert!(matches!(
            chaos_value(&op, &x, 1),
            Err(Error::OutsideSparseBall(_))
        ));
        let dense = vec![0.4; 8];
        assert!(matches!(
            chaos_value(&op, &dense, 2),
            Err(Error::OutsideSparseBall(_))
        ));
    }

    #[test]
    fn chaos_matrix_zero_vector() {
        let samples = SampleSet::new(vec![0, 2, 5], 8).unwrap();
        let z = chaos_matrix(&[0.0; 8], &samples).unwrap();
        assert!(z.matrix.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn chaos_matrix_is_hollow_and_hermitian() {
        let mut rng = derive_rng(9, "zx", 0);
        for _ in 0..5 {
            let n = 4 + rng.gen::<usize>() % 29;
            let m = 1 + rng.gen::<usize>() % n;
            let samples = SampleSet::uniform(n, m, &mut rng).unwrap();
            let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
            let z = chaos_matrix(&x, &samples).unwrap();
            for k in 0..n {
                assert_eq!(z.matrix[(k, k)], Complex64::new(0.0, 0.0));
                for l in 0..n {
                    assert!((z.matrix[(k, l)] - z.matrix[(l, k)].conj()).norm() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn quadratic_form_matches_fast_chaos_value() {
        let n = 8;
        let gen = make_generator(GeneratorModel::Rademacher, n, 13).unwrap();
        let samples = SampleSet::uniform(n, 3, &mut derive_rng(13, "omega", 2)).unwrap();
        let op = PartialCirculantOperator::new(gen.clone(), samples.clone()).unwrap();
        let mut x = vec![0.0; n];
        x[1] = 0.6;
        x[5] = -0.8;
        let z = chaos_matrix(&x, &samples).unwrap();
        let quad = chaos_quadratic_form(&z, gen.values()).unwrap();
        let fast = chaos_value(&op, &x, 2).unwrap();
        assert_abs_diff_eq!(quad, fast, epsilon = 1e-10);
    }
}
