//! Restricted isometry constant measurement and the theoretical bound shapes.
//!
//! δ_s is the worst spectral deviation of any s-column Gram submatrix from the
//! identity. Small instances are enumerated exactly; larger ones are lower-
//! bounded by Monte Carlo sampling with a per-support power-iteration ascent.
//!
//! The Gram matrix is assembled from the unscaled ±1 (or raw) generator
//! entries and divided by m once, so for the Rademacher model its diagonal is
//! exactly 1.0 and δ₁ is exactly zero.

use crate::error::{Error, Result};
use crate::generator::{make_generator, GeneratorModel};
use crate::operator::{LinearOperator, PartialCirculantOperator, DEFAULT_DENSE_LIMIT};
use crate::rng::{derive_rng, derive_seed};
use crate::sample::OmegaMode;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Default cap on the number of enumerated supports.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 2_000_000;

/// A measured δ_s value with its provenance.
#[derive(Clone, Debug)]
pub struct RipEstimate {
    pub delta: f64,
    pub s: usize,
    pub method: RipMethod,
}

#[derive(Clone, Debug)]
pub enum RipMethod {
    /// Exhaustive enumeration; `witness` attains the extremum.
    Exact { witness: Vec<usize> },
    /// Sampled lower bound.
    MonteCarlo { trials: usize },
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Advances `support` to the next size-s subset of {0..n−1} in lexicographic
/// order; returns false after the last one.
fn next_combination(support: &mut [usize], n: usize) -> bool {
    let s = support.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if support[i] < n - s + i {
            support[i] += 1;
            for j in i + 1..s {
                support[j] = support[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// G = (1/m)·Φ_Ω°ᵀ·Φ_Ω° from the raw generator entries.
fn unscaled_gram(op: &PartialCirculantOperator) -> Result<DMatrix<f64>> {
    let n = op.cols();
    if n > DEFAULT_DENSE_LIMIT {
        return Err(Error::DenseLimitExceeded {
            n,
            limit: DEFAULT_DENSE_LIMIT,
        });
    }
    let phi = op.generator().values();
    let omega = op.samples().indices();
    let b = DMatrix::from_fn(omega.len(), n, |i, j| phi[(omega[i] + n - j) % n]);
    Ok(b.tr_mul(&b).unscale(omega.len() as f64))
}

/// ‖G_S − I‖ for a prebuilt s×s Gram block.
fn block_deviation(gs: &DMatrix<f64>) -> f64 {
    match gs.nrows() {
        1 => (gs[(0, 0)] - 1.0).abs(),
        2 => {
            let a = gs[(0, 0)] - 1.0;
            let c = gs[(1, 1)] - 1.0;
            let b = gs[(0, 1)];
            let mid = 0.5 * (a + c);
            let disc = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            (mid + disc).abs().max((mid - disc).abs())
        }
        s => {
            let mut dev = gs.clone();
            for i in 0..s {
                dev[(i, i)] -= 1.0;
            }
            dev.symmetric_eigenvalues()
                .iter()
                .fold(0.0f64, |acc, &l| acc.max(l.abs()))
        }
    }
}

fn gram_block_from_full(g: &DMatrix<f64>, support: &[usize]) -> DMatrix<f64> {
    let s = support.len();
    DMatrix::from_fn(s, s, |p, q| g[(support[p], support[q])])
}

/// Builds the s×s Gram block directly from generator entries (unscaled sums
/// divided by m once), without materializing the full Gram.
fn gram_block_from_op(op: &PartialCirculantOperator, support: &[usize]) -> DMatrix<f64> {
    let n = op.cols();
    let phi = op.generator().values();
    let omega = op.samples().indices();
    let m = omega.len() as f64;
    let s = support.len();
    let mut g = DMatrix::zeros(s, s);
    for p in 0..s {
        for q in p..s {
            let dot: f64 = omega
                .iter()
                .map(|&r| phi[(r + n - support[p]) % n] * phi[(r + n - support[q]) % n])
                .sum();
            g[(p, q)] = dot / m;
            g[(q, p)] = g[(p, q)];
        }
    }
    g
}

fn check_sparsity(n: usize, s: usize) -> Result<()> {
    if s == 0 || s > n {
        return Err(Error::InvalidParameter(format!(
            "sparsity s = {s} must satisfy 1 <= s <= n = {n}"
        )));
    }
    Ok(())
}

/// Exhaustive δ_s: enumerates every size-s support and takes the worst
/// spectral deviation of its Gram block.
pub fn exact_rip(op: &PartialCirculantOperator, s: usize) -> Result<RipEstimate> {
    exact_rip_with_budget(op, s, DEFAULT_ENUMERATION_BUDGET)
}

pub fn exact_rip_with_budget(
    op: &PartialCirculantOperator,
    s: usize,
    budget: u128,
) -> Result<RipEstimate> {
    let n = op.cols();
    check_sparsity(n, s)?;
    let required = binomial(n, s);
    if required > budget {
        return Err(Error::EnumerationBudgetExceeded { required, budget });
    }
    let g = unscaled_gram(op)?;
    let mut support: Vec<usize> = (0..s).collect();
    let mut best = f64::NEG_INFINITY;
    let mut witness = support.clone();
    loop {
        let dev = block_deviation(&gram_block_from_full(&g, &support));
        if dev > best {
            best = dev;
            witness = support.clone();
        }
        if !next_combination(&mut support, n) {
            break;
        }
    }
    Ok(RipEstimate {
        delta: best,
        s,
        method: RipMethod::Exact { witness },
    })
}

/// Re-evaluates ‖A_S*A_S − I‖ for one support (used to confirm witnesses).
pub fn evaluate_support(op: &PartialCirculantOperator, support: &[usize]) -> Result<f64> {
    let n = op.cols();
    if support.is_empty() || support.iter().any(|&j| j >= n) {
        return Err(Error::InvalidParameter("invalid support".into()));
    }
    Ok(block_deviation(&gram_block_from_op(op, support)))
}

/// Norm-ratio power iteration on a symmetric block; always a lower bound on
/// the spectral norm.
fn power_iteration_norm(b: &DMatrix<f64>, init: Vec<f64>, max_iters: usize, tol: f64) -> f64 {
    let mut v = DVector::from_vec(init);
    let nv = v.norm();
    if nv == 0.0 {
        return 0.0;
    }
    v /= nv;
    let mut est = 0.0f64;
    for _ in 0..max_iters {
        let w = b * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let converged = (nw - est).abs() <= tol * nw;
        est = nw;
        v = w / nw;
        if converged {
            break;
        }
    }
    est
}

fn gaussian_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Sampled lower bound on δ_s: random supports with random unit vectors plus
/// a 50-step power-iteration ascent on each sampled support's deviation
/// matrix. Guaranteed ≤ the exact value; a running maximum over trials, so
/// estimates are monotone in the trial count for a fixed seed.
pub fn monte_carlo_rip(
    op: &PartialCirculantOperator,
    s: usize,
    trials: usize,
    seed: u64,
) -> Result<RipEstimate> {
    let n = op.cols();
    check_sparsity(n, s)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let mut best = 0.0f64;
    for t in 0..trials {
        let mut rng = derive_rng(seed, "monte-carlo-rip", t as u64);
        let mut support = rand::seq::index::sample(&mut rng, n, s).into_vec();
        support.sort_unstable();
        // Random point of T on this support.
        let coeffs = gaussian_vec(&mut rng, s);
        let norm: f64 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 0.0 {
            let mut x = vec![0.0; n];
            for (&j, &c) in support.iter().zip(&coeffs) {
                x[j] = c / norm;
            }
            let ax = op.apply(&x)?;
            let gx = ax.iter().map(|v| v * v).sum::<f64>()
                - x.iter().map(|v| v * v).sum::<f64>();
            best = best.max(gx.abs());
        }
        // Local ascent: power iteration on A_S*A_S - I.
        let mut block = gram_block_from_op(op, &support);
        for i in 0..s {
            block[(i, i)] -= 1.0;
        }
        let est = power_iteration_norm(&block, gaussian_vec(&mut rng, s), 50, 1e-12);
        best = best.max(est);
    }
    Ok(RipEstimate {
        delta: best,
        s,
        method: RipMethod::MonteCarlo { trials },
    })
}

/// Power iteration over ALL supports (convergence tolerance 1e−12, cap 10³
/// per support); agrees with [`exact_rip`] up to power-iteration error.
pub fn exhaustive_power_rip(op: &PartialCirculantOperator, s: usize, seed: u64) -> Result<f64> {
    let n = op.cols();
    check_sparsity(n, s)?;
    let required = binomial(n, s);
    if required > DEFAULT_ENUMERATION_BUDGET {
        return Err(Error::EnumerationBudgetExceeded {
            required,
            budget: DEFAULT_ENUMERATION_BUDGET,
        });
    }
    let g = unscaled_gram(op)?;
    let mut support: Vec<usize> = (0..s).collect();
    let mut best = 0.0f64;
    let mut index = 0u64;
    loop {
        let mut block = gram_block_from_full(&g, &support);
        for i in 0..s {
            block[(i, i)] -= 1.0;
        }
        let mut rng = derive_rng(seed, "exhaustive-power", index);
        let est = power_iteration_norm(&block, gaussian_vec(&mut rng, s), 1000, 1e-12);
        best = best.max(est);
        index += 1;
        if !next_combination(&mut support, n) {
            break;
        }
    }
    Ok(best)
}

/// How δ_s is measured in sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMethod {
    /// Exact when the enumeration fits the budget, Monte Carlo otherwise.
    Auto { mc_trials: usize },
    Exact,
    MonteCarlo { trials: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolvedDeltaMethod {
    Exact,
    MonteCarlo { trials: usize },
}

impl DeltaMethod {
    pub fn resolve(self, n: usize, s: usize, budget: u128) -> ResolvedDeltaMethod {
        match self {
            DeltaMethod::Exact => ResolvedDeltaMethod::Exact,
            DeltaMethod::MonteCarlo { trials } => ResolvedDeltaMethod::MonteCarlo { trials },
            DeltaMethod::Auto { mc_trials } => {
                if binomial(n, s) <= budget && n <= DEFAULT_DENSE_LIMIT {
                    ResolvedDeltaMethod::Exact
                } else {
                    ResolvedDeltaMethod::MonteCarlo { trials: mc_trials }
                }
            }
        }
    }
}

impl ResolvedDeltaMethod {
    pub fn label(&self) -> &'static str {
        match self {
            ResolvedDeltaMethod::Exact => "exact",
            ResolvedDeltaMethod::MonteCarlo { .. } => "monte-carlo",
        }
    }
}

/// Draws the d-th operator of a sweep, deterministically in
/// (seed, tag, draw) and independent of worker count.
pub fn sample_operator(
    model: GeneratorModel,
    n: usize,
    m: usize,
    omega: OmegaMode,
    seed: u64,
    tag: &str,
    draw: u64,
) -> Result<PartialCirculantOperator> {
    let mut rng = derive_rng(seed, tag, draw);
    let gen_seed: u64 = rng.gen();
    let generator = make_generator(model, n, gen_seed)?;
    let samples = omega.sample(n, m, &mut rng)?;
    PartialCirculantOperator::new(generator, samples)
}

/// δ_s of the d-th draw under the given (already resolved) method.
pub fn delta_for_draw(
    model: GeneratorModel,
    n: usize,
    m: usize,
    s: usize,
    omega: OmegaMode,
    method: ResolvedDeltaMethod,
    seed: u64,
    tag: &str,
    draw: u64,
) -> Result<f64> {
    let op = sample_operator(model, n, m, omega, seed, tag, draw)?;
    match method {
        ResolvedDeltaMethod::Exact => Ok(exact_rip(&op, s)?.delta),
        ResolvedDeltaMethod::MonteCarlo { trials } => {
            let mc_seed = derive_seed(seed, &format!("{tag}/mc"), draw);
            Ok(monte_carlo_rip(&op, s, trials, mc_seed)?.delta)
        }
    }
}

#[derive(Clone, Debug)]
pub struct MeanDeltaRow {
    pub m: usize,
    pub mean: f64,
    pub std_error: f64,
    pub method: ResolvedDeltaMethod,
}

/// Empirical E[δ_s] with standard error per m, over fresh (φ, Ω) draws.
pub fn mean_delta(
    model: GeneratorModel,
    n: usize,
    m_list: &[usize],
    s: usize,
    draws: usize,
    omega: OmegaMode,
    method: DeltaMethod,
    seed: u64,
) -> Result<Vec<MeanDeltaRow>> {
    if draws < 2 {
        return Err(Error::InvalidParameter(
            "draws must be >= 2 to report a standard error".into(),
        ));
    }
    if m_list.is_empty() {
        return Err(Error::InvalidParameter("empty m list".into()));
    }
    check_sparsity(n, s)?;
    let resolved = method.resolve(n, s, DEFAULT_ENUMERATION_BUDGET);
    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let tag = format!("mean-delta/m{m}/s{s}");
        let deltas: Result<Vec<f64>> = (0..draws as u64)
            .into_par_iter()
            .map(|d| delta_for_draw(model, n, m, s, omega, resolved, seed, &tag, d))
            .collect();
        let deltas = deltas?;
        let mean = deltas.iter().sum::<f64>() / draws as f64;
        let var = deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>()
            / (draws as f64 - 1.0);
        rows.push(MeanDeltaRow {
            m,
            mean,
            std_error: (var / draws as f64).sqrt(),
            method: resolved,
        });
    }
    Ok(rows)
}

/// Empirical exceedance curve of δ_s over its mean.
#[derive(Clone, Debug)]
pub struct TailProfile {
    pub lambdas: Vec<f64>,
    pub exceed_prob: Vec<f64>,
    pub exceed_counts: Vec<usize>,
    pub draws: usize,
    pub empirical_mean: f64,
    /// Least-squares slope of ln(exceed_prob) against λ², fitted over levels
    /// with at least 5 exceedances; None when fewer than two such levels.
    pub fitted_slope: Option<f64>,
}

/// Measures P(δ_s ≥ mean + λ) over the λ grid (clamped to [0,1]).
pub fn tail_profile(
    model: GeneratorModel,
    n: usize,
    m: usize,
    s: usize,
    draws: usize,
    lambda_grid: &[f64],
    omega: OmegaMode,
    method: DeltaMethod,
    seed: u64,
) -> Result<TailProfile> {
    if lambda_grid.is_empty() {
        return Err(Error::InvalidParameter("empty lambda grid".into()));
    }
    if draws == 0 {
        return Err(Error::InvalidParameter("draws must be >= 1".into()));
    }
    check_sparsity(n, s)?;
    let lambdas: Vec<f64> = lambda_grid.iter().map(|l| l.clamp(0.0, 1.0)).collect();
    let resolved = method.resolve(n, s, DEFAULT_ENUMERATION_BUDGET);
    let tag = format!("tail/m{m}/s{s}");
    let deltas: Result<Vec<f64>> = (0..draws as u64)
        .into_par_iter()
        .map(|d| delta_for_draw(model, n, m, s, omega, resolved, seed, &tag, d))
        .collect();
    let deltas = deltas?;
    let empirical_mean = deltas.iter().sum::<f64>() / draws as f64;
    let exceed_counts: Vec<usize> = lambdas
        .iter()
        .map(|&l| deltas.iter().filter(|&&d| d >= empirical_mean + l).count())
        .collect();
    let exceed_prob: Vec<f64> = exceed_counts
        .iter()
        .map(|&c| c as f64 / draws as f64)
        .collect();

    let points: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(&exceed_counts)
        .filter(|(_, &c)| c >= 5)
        .map(|(&l, &c)| (l * l, (c as f64 / draws as f64).ln()))
        .collect();
    let fitted_slope = fit_slope(&points);

    Ok(TailProfile {
        lambdas,
        exceed_prob,
        exceed_counts,
        draws,
        empirical_mean,
        fitted_slope,
    })
}

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_u = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_v = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut suu = 0.0;
    let mut suv = 0.0;
    for &(u, v) in points {
        suu += (u - mean_u) * (u - mean_u);
        suv += (u - mean_u) * (v - mean_v);
    }
    if suu <= 0.0 {
        return None;
    }
    Some(suv / suu)
}

/// The unspecified universal constants of the bound formulas. Defaults to 1;
/// outputs are shape comparisons only, never calibrated claims.
#[derive(Clone, Copy, Debug)]
pub struct BoundParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
        }
    }
}

impl BoundParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (name, v) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be a non-negative finite number"
                )));
            }
        }
        Ok(BoundParams { c1, c2, c3 })
    }
}

fn check_bound_args(n: usize, s: usize) -> Result<()> {
    if s < 2 || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "bound formulas need s >= 2 and n >= 2 (log terms degenerate); got s = {s}, n = {n}"
        )));
    }
    Ok(())
}

/// c1 · max{ s^{3/2}/m · (ln n)^{3/2}, √(s/m) · ln s · ln n }.
pub fn theoretical_mean_bound(params: &BoundParams, n: usize, m: usize, s: usize) -> Result<f64> {
    check_bound_args(n, s)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let (nf, mf, sf) = (n as f64, m as f64, s as f64);
    let ln_n = nf.ln();
    let term1 = sf.powf(1.5) * ln_n.powf(1.5) / mf;
    let term2 = (sf / mf).sqrt() * sf.ln() * ln_n;
    Ok(params.c1 * term1.max(term2))
}

/// c2 · max{ δ⁻¹ s^{3/2} (ln n)^{3/2}, δ⁻² s (ln n)² (ln s)² }.
pub fn theoretical_sample_bound(
    params: &BoundParams,
    delta: f64,
    n: usize,
    s: usize,
) -> Result<f64> {
    check_bound_args(n, s)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} must lie in (0, 1)"
        )));
    }
    let (nf, sf) = (n as f64, s as f64);
    let ln_n = nf.ln();
    let ln_s = sf.ln();
    let term1 = sf.powf(1.5) * ln_n.powf(1.5) / delta;
    let term2 = sf * ln_n * ln_n * ln_s * ln_s / (delta * delta);
    Ok(params.c2 * term1.max(term2))
}

/// σ² = c3 · (s/m) · (ln s)² · (ln n)².
pub fn theoretical_tail_variance(
    params: &BoundParams,
    n: usize,
    m: usize,
    s: usize,
) -> Result<f64> {
    check_bound_args(n, s)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let (nf, mf, sf) = (n as f64, m as f64, s as f64);
    let ln_n = nf.ln();
    let ln_s = sf.ln();
    Ok(params.c3 * (sf / mf) * ln_s * ln_s * ln_n * ln_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::GeneratorSequence;
    use crate::sample::SampleSet;

    fn worked_operator() -> PartialCirculantOperator {
        let gen = GeneratorSequence::from_values(vec![1.0, 1.0, -1.0, 1.0]).unwrap();
        let samples = SampleSet::new(vec![0, 2], 4).unwrap();
        PartialCirculantOperator::new(gen, samples).unwrap()
    }

    fn rademacher_op(n: usize, m: usize, seed: u64) -> PartialCirculantOperator {
        sample_operator(GeneratorModel::Rademacher, n, m, OmegaMode::Uniform, seed, "test", 0)
            .unwrap()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(64, 2), 2016);
        assert_eq!(binomial(64, 3), 41664);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut c = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut c, 4) {
            count += 1;
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn delta_one_is_exactly_zero_for_rademacher() {
        for seed in 0..8u64 {
            let op = rademacher_op(24, 7, seed);
            let est = exact_rip(&op, 1).unwrap();
            assert_eq!(est.delta, 0.0);
        }
    }

    #[test]
    fn worked_instance_delta_two() {
        let op = worked_operator();
        let est = exact_rip(&op, 2).unwrap();
        assert_eq!(est.delta, 1.0);
        let witness = match est.method {
            RipMethod::Exact { ref witness } => witness.clone(),
            _ => unreachable!(),
        };
        assert!(witness == vec![0, 2] || witness == vec![1, 3], "{witness:?}");
        // The witness reproduces the extremum when re-evaluated.
        assert_eq!(evaluate_support(&op, &witness).unwrap(), est.delta);
    }

    #[test]
    fn impulse_model_full_omega_has_zero_delta() {
        let gen = make_generator(GeneratorModel::Deterministic, 8, 0).unwrap();
        let op = PartialCirculantOperator::new(gen, SampleSet::full(8).unwrap()).unwrap();
        for s in [1usize, 2, 3] {
            assert_eq!(exact_rip(&op, s).unwrap().delta, 0.0);
        }
    }

    #[test]
    fn enumeration_budget_respected() {
        let op = rademacher_op(64, 16, 3);
        assert!(matches!(
            exact_rip_with_budget(&op, 4, 1000),
            Err(Error::EnumerationBudgetExceeded { .. })
        ));
    }

    #[test]
    fn monte_carlo_is_lower_bound_and_finds_worked_extremum() {
        let op = worked_operator();
        let exact = exact_rip(&op, 2).unwrap().delta;
        let mc = monte_carlo_rip(&op, 2, 100, 9).unwrap().delta;
        assert!(mc <= exact + 1e-12);
        assert!((mc - 1.0).abs() <= 1e-9, "mc = {mc}");
    }

    #[test]
    fn monte_carlo_one_sparse_rademacher_is_zero() {
        let op = rademacher_op(32, 8, 5);
        let mc = monte_carlo_rip(&op, 1, 50, 1).unwrap().delta;
        assert!(mc <= 1e-10, "{mc}");
    }

    #[test]
    fn monte_carlo_is_monotone_in_trials() {
        let op = rademacher_op(24, 8, 7);
        let few = monte_carlo_rip(&op, 2, 10, 42).unwrap().delta;
        let many = monte_carlo_rip(&op, 2, 1000, 42).unwrap().delta;
        assert!(many >= few);
    }

    #[test]
    fn delta_is_monotone_in_s() {
        for seed in 0..5u64 {
            let op = rademacher_op(16, 6, seed);
            let d1 = exact_rip(&op, 1).unwrap().delta;
            let d2 = exact_rip(&op, 2).unwrap().delta;
            let d3 = exact_rip(&op, 3).unwrap().delta;
            assert!(d1 <= d2 + 1e-15 && d2 <= d3 + 1e-15);
        }
    }

    #[test]
    fn mean_delta_impulse_full_omega_is_zero() {
        let rows = mean_delta(
            GeneratorModel::Deterministic,
            16,
            &[16],
            2,
            4,
            OmegaMode::Consecutive,
            DeltaMethod::Auto { mc_trials: 10 },
            0,
        )
        .unwrap();
        assert_eq!(rows[0].mean, 0.0);
        assert_eq!(rows[0].std_error, 0.0);
    }

    #[test]
    fn mean_delta_monotone_in_s() {
        let run = |s: usize| {
            mean_delta(
                GeneratorModel::Rademacher,
                32,
                &[16],
                s,
                20,
                OmegaMode::Uniform,
                DeltaMethod::Exact,
                11,
            )
            .unwrap()[0]
                .mean
        };
        assert!(run(1) <= run(2));
        assert!(run(2) <= run(3));
    }

    #[test]
    fn mean_delta_requires_two_draws() {
        assert!(mean_delta(
            GeneratorModel::Rademacher,
            8,
            &[4],
            1,
            1,
            OmegaMode::Uniform,
            DeltaMethod::Exact,
            0,
        )
        .is_err());
    }

    #[test]
    fn tail_profile_is_monotone_and_bounded() {
        let grid = [0.0, 0.05, 0.1, 0.2, 0.4];
        let profile = tail_profile(
            GeneratorModel::Rademacher,
            24,
            12,
            2,
            200,
            &grid,
            OmegaMode::Uniform,
            DeltaMethod::Exact,
            3,
        )
        .unwrap();
        assert!(profile.exceed_prob[0] > 0.0 && profile.exceed_prob[0] < 1.0);
        for w in profile.exceed_prob.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!(profile.exceed_prob.iter().all(|&p| (0.0..=1.0).contains(&p)));
    }

    #[test]
    fn tail_profile_rejects_empty_grid() {
        assert!(tail_profile(
            GeneratorModel::Rademacher,
            8,
            4,
            1,
            10,
            &[],
            OmegaMode::Uniform,
            DeltaMethod::Exact,
            0,
        )
        .is_err());
    }

    #[test]
    fn mean_bound_worked_value() {
        let p = BoundParams::default();
        let b = theoretical_mean_bound(&p, 256, 64, 4).unwrap();
        let ln_n = 256f64.ln();
        let term1 = 4f64.powf(1.5) * ln_n.powf(1.5) / 64.0;
        let term2 = (4f64 / 64.0).sqrt() * 4f64.ln() * ln_n;
        assert!(term2 > term1);
        assert_eq!(b, term1.max(term2));
        assert!((b - 1.9218120556728056).abs() <= 1e-12);
    }

    #[test]
    fn mean_bound_halves_when_first_term_dominant() {
        let p = BoundParams::default();
        // s = 25, n = 16 keeps the first term dominant at both m values.
        let b1 = theoretical_mean_bound(&p, 16, 50, 25).unwrap();
        let b2 = theoretical_mean_bound(&p, 16, 100, 25).unwrap();
        assert_eq!(b2, b1 / 2.0);
    }

    #[test]
    fn mean_bound_linear_in_c1() {
        let one = theoretical_mean_bound(&BoundParams::default(), 256, 64, 4).unwrap();
        let two =
            theoretical_mean_bound(&BoundParams::new(2.0, 1.0, 1.0).unwrap(), 256, 64, 4).unwrap();
        assert_eq!(two, 2.0 * one);
    }

    #[test]
    fn mean_bound_rejects_degenerate_logs() {
        let p = BoundParams::default();
        assert!(theoretical_mean_bound(&p, 256, 64, 1).is_err());
        assert!(theoretical_mean_bound(&p, 1, 64, 4).is_err());
        assert!(theoretical_mean_bound(&p, 256, 0, 4).is_err());
    }

    #[test]
    fn sample_bound_worked_value() {
        let p = BoundParams::default();
        let b = theoretical_sample_bound(&p, 0.5, 256, 4).unwrap();
        let ln_n = 256f64.ln();
        let ln_s = 4f64.ln();
        let term1 = 4f64.powf(1.5) * ln_n.powf(1.5) / 0.5;
        let term2 = 4.0 * ln_n * ln_n * ln_s * ln_s / 0.25;
        assert!(term2 > term1);
        assert_eq!(b, term2);
    }

    #[test]
    fn sample_bound_quadruples_when_delta_halves() {
        let p = BoundParams::default();
        let b1 = theoretical_sample_bound(&p, 0.5, 256, 4).unwrap();
        let b2 = theoretical_sample_bound(&p, 0.25, 256, 4).unwrap();
        assert_eq!(b2, 4.0 * b1);
    }

    #[test]
    fn sample_bound_first_term_scaling_in_n() {
        let p = BoundParams::default();
        // delta close to 1 makes the first term dominant.
        let delta = 0.9;
        let b_n = theoretical_sample_bound(&p, delta, 64, 3).unwrap();
        let b_4n = theoretical_sample_bound(&p, delta, 256, 3).unwrap();
        let expected_ratio = (256f64.ln() / 64f64.ln()).powf(1.5);
        assert!((b_4n / b_n - expected_ratio).abs() <= 1e-12);
    }

    #[test]
    fn sample_bound_rejects_bad_delta() {
        let p = BoundParams::default();
        assert!(theoretical_sample_bound(&p, 0.0, 256, 4).is_err());
        assert!(theoretical_sample_bound(&p, 1.0, 256, 4).is_err());
    }

    #[test]
    fn tail_variance_values() {
        let p = BoundParams::default();
        let v = theoretical_tail_variance(&p, 256, 64, 4).unwrap();
        let expected = (4.0 / 64.0) * 4f64.ln().powi(2) * 256f64.ln().powi(2);
        assert!((v - expected).abs() <= 1e-15 * expected);
        let halved = theoretical_tail_variance(&p, 256, 128, 4).unwrap();
        assert_eq!(halved, v / 2.0);
        let zero = theoretical_tail_variance(&BoundParams::new(1.0, 1.0, 0.0).unwrap(), 256, 64, 4)
            .unwrap();
        assert_eq!(zero, 0.0);
    }
}
