//! Finite-shot projective measurements of hermitian observables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron_power, ComplexMatrix};
use crate::multicopy::{antiherm_part, herm_part, power_dim, shift_operator_within, swap_operator, Budget, MulticopyObservable};
use crate::rng::Rng;
use crate::spectrum::MomentVector;
use crate::states::DensityMatrix;

/// Eigenvalues closer than this are treated as one outcome.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√shots`.
    pub std_error: f64,
    pub shots: u64,
    pub observable_id: String,
}

/// Outcome values of an observable and their Born probabilities on a fixed state.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    values: Vec<f64>,
    probabilities: Vec<f64>,
    cumulative: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(observable: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<Self> {
        if sigma.rows() != observable.rows() || !sigma.is_square() {
            return Err(Error::dims("sample_observable", observable.rows(), sigma.rows()));
        }
        let eig = hermitian_eig(observable)?;
        let mut values: Vec<f64> = Vec::new();
        let mut probabilities: Vec<f64> = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            let sv = sigma.matvec(&v)?;
            let p: f64 = v.iter().zip(&sv).map(|(a, b)| (a.conj() * b).re).sum();
            match values.last() {
                Some(&last) if (lambda - last).abs() <= DEGENERACY_TOL => *probabilities.last_mut().unwrap() += p,
                _ => {
                    values.push(lambda);
                    probabilities.push(p);
                }
            }
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-8 {
            return Err(Error::ProbabilitySum { sum });
        }
        for p in probabilities.iter_mut() {
            *p = p.max(0.0);
        }
        let cumulative = probabilities
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Ok(OutcomeDistribution { values, probabilities, cumulative })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `Σ_k λ_k p_k = Tr(Oσ)`.
    pub fn exact_mean(&self) -> f64 {
        self.values.iter().zip(&self.probabilities).map(|(v, p)| v * p).sum()
    }

    pub fn sample_outcome(&self, rng: &mut Rng) -> f64 {
        self.values[rng.categorical(&self.cumulative)]
    }

    pub fn sample(&self, shots: u64, rng: &mut Rng, observable_id: impl Into<String>) -> ShotEstimate {
        let mut counts = vec![0u64; self.values.len()];
        for _ in 0..shots {
            counts[rng.categorical(&self.cumulative)] += 1;
        }
        let n = shots as f64;
        let mean = counts.iter().zip(&self.values).map(|(&c, v)| c as f64 * v).sum::<f64>() / n;
        let ss: f64 = counts.iter().zip(&self.values).map(|(&c, v)| c as f64 * (v - mean).powi(2)).sum();
        let std_error = if shots > 1 { (ss / (n - 1.0)).sqrt() / n.sqrt() } else { 0.0 };
        ShotEstimate { mean, std_error, shots, observable_id: observable_id.into() }
    }
}

/// Measures `O` on `σ` `shots` times.
pub fn sample_observable(o: &ComplexMatrix, sigma: &DensityMatrix, shots: u64, seed: u64) -> Result<ShotEstimate> {
    sample_observable_with(o, sigma.matrix(), shots, &mut Rng::seed(seed), "observable")
}

pub fn sample_observable_with(
    o: &ComplexMatrix,
    sigma: &ComplexMatrix,
    shots: u64,
    rng: &mut Rng,
    observable_id: &str,
) -> Result<ShotEstimate> {
    if shots == 0 {
        return Err(Error::InvalidArgument("need at least one shot".into()));
    }
    Ok(OutcomeDistribution::new(o, sigma)?.sample(shots, rng, observable_id))
}

/// Estimate of a possibly non-hermitian multicopy mean `⟨X⟩ = ⟨X_h⟩ - i⟨X_a⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulticopyShotEstimate {
    pub mean_re: f64,
    pub mean_im: f64,
    pub std_error_re: f64,
    pub std_error_im: f64,
    /// Shots per observable.
    pub shots: u64,
    /// 1 for hermitian observables, 2 otherwise.
    pub observables_used: usize,
    pub batches: Vec<ShotEstimate>,
}

pub fn estimate_multicopy(a: &MulticopyObservable, rho: &DensityMatrix, shots: u64, seed: u64) -> Result<MulticopyShotEstimate> {
    estimate_multicopy_with(a, rho, shots, &mut Rng::seed(seed), Budget::default())
}

pub fn estimate_multicopy_with(
    a: &MulticopyObservable,
    rho: &DensityMatrix,
    shots: u64,
    rng: &mut Rng,
    budget: Budget,
) -> Result<MulticopyShotEstimate> {
    if a.d != rho.dim() {
        return Err(Error::dims("estimate_multicopy", a.d, rho.dim()));
    }
    power_dim(a.d, a.n, budget)?;
    let sigma = kron_power(rho.matrix(), a.n);
    if a.hermitian {
        let est = sample_observable_with(&a.op, &sigma, shots, &mut rng.split(), "X")?;
        return Ok(MulticopyShotEstimate {
            mean_re: est.mean,
            mean_im: 0.0,
            std_error_re: est.std_error,
            std_error_im: 0.0,
            shots,
            observables_used: 1,
            batches: vec![est],
        });
    }
    let h = sample_observable_with(&herm_part(a).op, &sigma, shots, &mut rng.split(), "X_h")?;
    let x_a = sample_observable_with(&antiherm_part(a).op, &sigma, shots, &mut rng.split(), "X_a")?;
    Ok(MulticopyShotEstimate {
        mean_re: h.mean,
        mean_im: -x_a.mean,
        std_error_re: h.std_error,
        std_error_im: x_a.std_error,
        shots,
        observables_used: 2,
        batches: vec![h, x_a],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentShots {
    pub moments: MomentVector,
    /// Standard error per moment (zero for `m_1`).
    pub std_errors: Vec<f64>,
    /// Estimated imaginary parts `-⟨V_a⁽ᵏ⁾⟩` (zero in expectation).
    pub imag: Vec<f64>,
    pub observables_used: usize,
    pub shots_per_observable: u64,
}

/// `m_2 … m_{k_max}` from `V⁽²⁾; V_h⁽³⁾, V_a⁽³⁾; …` measured on `ρ^⊗k`.
pub fn estimate_moments_shots(rho: &DensityMatrix, k_max: usize, shots: u64, seed: u64) -> Result<MomentShots> {
    estimate_moments_shots_within(rho, k_max, shots, seed, Budget::default())
}

pub fn estimate_moments_shots_within(
    rho: &DensityMatrix,
    k_max: usize,
    shots: u64,
    seed: u64,
    budget: Budget,
) -> Result<MomentShots> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let mut rng = Rng::seed(seed);
    let mut m = vec![1.0];
    let mut std_errors = vec![0.0];
    let mut imag = vec![0.0];
    let mut observables_used = 0;
    for k in 2..=k_max {
        let op = if k == 2 { swap_operator(rho.dim()) } else { shift_operator_within(rho.dim(), k, budget)? };
        let est = estimate_multicopy_with(&op, rho, shots, &mut rng.split(), budget)?;
        m.push(est.mean_re);
        std_errors.push(est.std_error_re);
        imag.push(est.mean_im);
        observables_used += est.observables_used;
    }
    Ok(MomentShots {
        moments: MomentVector { d: rho.dim(), m },
        std_errors,
        imag,
        observables_used,
        shots_per_observable: shots,
    })
}
