//! Density matrices and the entropy functionals evaluated on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_with, kron, ComplexMatrix, ZERO};
use crate::rng::Rng;
use crate::tolerance::Tolerances;

/// A hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityMatrix {
    dim: usize,
    mat: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    kind: String,
    #[serde(flatten)]
    matrix: ComplexMatrix,
}

impl TryFrom<DensityRepr> for DensityMatrix {
    type Error = Error;

    fn try_from(r: DensityRepr) -> Result<Self> {
        if r.kind != "density" {
            return Err(Error::InvalidArgument(format!("expected kind \"density\", got {:?}", r.kind)));
        }
        DensityMatrix::validate(r.matrix)
    }
}

impl From<DensityMatrix> for DensityRepr {
    fn from(d: DensityMatrix) -> Self {
        DensityRepr { kind: "density".into(), matrix: d.mat }
    }
}

impl DensityMatrix {
    pub fn validate(mat: ComplexMatrix) -> Result<Self> {
        Self::validate_with(mat, &Tolerances::DEFAULT)
    }

    /// Checks hermiticity, unit trace and positivity, in that order.
    pub fn validate_with(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::dims("DensityMatrix", "square matrix", format!("{}x{}", mat.rows(), mat.cols())));
        }
        let defect = mat.hermiticity_defect();
        if defect > tol.hermiticity {
            return Err(Error::NotHermitian { defect });
        }
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > tol.hermiticity {
            return Err(Error::TraceNotOne { trace });
        }
        let min = hermitian_eig_with(&mat, tol)?.min();
        if min < -tol.psd_clip {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        Ok(DensityMatrix { dim: mat.rows(), mat })
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::validate(ComplexMatrix::from_diag(probabilities))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        assert!(d >= 1);
        DensityMatrix { dim: d, mat: ComplexMatrix::identity(d).scale_real(1.0 / d as f64) }
    }

    /// `|ψ><ψ|` after normalizing `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("state vector must be nonzero and finite".into()));
        }
        let v: Vec<_> = psi.iter().map(|z| z / norm).collect();
        Ok(DensityMatrix { dim: v.len(), mat: ComplexMatrix::outer(&v) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Spectrum in ascending order, negative round-off clipped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig_with(&self.mat, &Tolerances::DEFAULT)
            .expect("validated state is hermitian")
            .eigenvalues
            .into_iter()
            .map(|x| x.max(0.0))
            .collect()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // ρ hermitian: Tr(ρ²) = Σ |ρ_ij|²
        self.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Tensor product with another state.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { dim: self.dim * other.dim, mat: crate::linalg::kron(&self.mat, &other.mat) }
    }

    /// Reduced state on the subsystems in `keep`.
    pub fn reduce(&self, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
        let mat = crate::linalg::partial_trace(&self.mat, dims, keep)?;
        Ok(DensityMatrix { dim: mat.rows(), mat })
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be nonnegative and sum to 1.
    pub fn mixture(weighted: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
        let (_, first) = weighted.first().ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut acc = ComplexMatrix::zeros(first.dim, first.dim);
        for (w, rho) in weighted {
            if *w < 0.0 {
                return Err(Error::InvalidArgument(format!("negative mixture weight {w}")));
            }
            acc = acc.try_add(&rho.mat.scale_real(*w))?;
        }
        Self::validate(acc)
    }

    /// Wraps a matrix already known to be a state up to round-off (trusted internal path).
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        DensityMatrix { dim: mat.rows(), mat }
    }
}

/// Haar-random pure state.
pub fn random_pure(d: usize, seed: u64) -> DensityMatrix {
    random_pure_from(d, &mut Rng::seed(seed))
}

pub fn random_pure_from(d: usize, rng: &mut Rng) -> DensityMatrix {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let psi: Vec<Complex64> = (0..d).map(|_| rng.complex_gaussian()).collect();
        if let Ok(rho) = DensityMatrix::pure(&psi) {
            return rho;
        }
    }
}

/// Ginibre-ensemble mixed state `G G† / Tr(G G†)`.
pub fn random_mixed(d: usize, seed: u64) -> DensityMatrix {
    random_mixed_from(d, &mut Rng::seed(seed))
}

pub fn random_mixed_from(d: usize, rng: &mut Rng) -> DensityMatrix {
    assert!(d >= 1, "dimension must be positive");
    let g = ComplexMatrix::from_fn(d, d, |_, _| rng.complex_gaussian());
    let w = &g * &g.adjoint();
    let t = w.trace().re;
    DensityMatrix::from_trusted(w.scale_real(1.0 / t))
}

/// Convex mixture of `terms` random product states `ρ_A ⊗ ρ_B` with uniform-simplex weights.
pub fn random_separable(d_a: usize, d_b: usize, terms: usize, seed: u64) -> DensityMatrix {
    random_separable_from(d_a, d_b, terms, &mut Rng::seed(seed))
}

pub fn random_separable_from(d_a: usize, d_b: usize, terms: usize, rng: &mut Rng) -> DensityMatrix {
    assert!(terms >= 1, "need at least one product term");
    let weights: Vec<f64> = (0..terms).map(|_| -(1.0 - rng.uniform()).ln()).collect();
    let total: f64 = weights.iter().sum();
    let mut acc = ComplexMatrix::zeros(d_a * d_b, d_a * d_b);
    for w in weights {
        let a = random_mixed_from(d_a, rng);
        let b = random_mixed_from(d_b, rng);
        acc = &acc + &kron(a.matrix(), b.matrix()).scale_real(w / total);
    }
    DensityMatrix::from_trusted(acc)
}

/// Maximally entangled pure state `|Ψ₊⟩ = d^{-1/2} Σ_i |i⟩|i⟩` on `C^d ⊗ C^d`.
pub fn max_entangled(d: usize) -> DensityMatrix {
    assert!(d >= 1, "dimension must be positive");
    let amp = 1.0 / (d as f64).sqrt();
    let mut psi = vec![ZERO; d * d];
    for i in 0..d {
        psi[i * d + i] = Complex64::new(amp, 0.0);
    }
    DensityMatrix::from_trusted(ComplexMatrix::outer(&psi))
}

/// Two-qubit singlet `(|01⟩ - |10⟩)/√2`.
pub fn singlet() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [ZERO, Complex64::new(s, 0.0), Complex64::new(-s, 0.0), ZERO];
    DensityMatrix::pure(&psi).expect("nonzero vector")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyKind {
    Tsallis,
    Renyi,
    VonNeumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    pub kind: EntropyKind,
    /// `q` (Tsallis) or `α` (Rényi); 1 for von Neumann.
    pub order: f64,
    pub value: f64,
}

fn check_order(order: f64, name: &str) -> Result<()> {
    if !(order > 0.0) || !order.is_finite() {
        return Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {order}")));
    }
    if order == 1.0 {
        return Err(Error::InvalidArgument(format!("{name} = 1 is the von Neumann limit; use von_neumann_entropy")));
    }
    Ok(())
}

/// `Σ p_i^q` over the spectrum.
pub fn power_sum(eigenvalues: &[f64], q: f64) -> f64 {
    eigenvalues.iter().filter(|&&p| p > 0.0).map(|&p| p.powf(q)).sum()
}

/// Tsallis entropy `(1 - Tr ρ^q) / (q - 1)`.
pub fn tsallis_entropy(rho: &DensityMatrix, q: f64) -> Result<EntropyValue> {
    check_order(q, "q")?;
    Ok(EntropyValue { kind: EntropyKind::Tsallis, order: q, value: tsallis_from_spectrum(&rho.eigenvalues(), q) })
}

pub(crate) fn tsallis_from_spectrum(p: &[f64], q: f64) -> f64 {
    (1.0 - power_sum(p, q)) / (q - 1.0)
}

/// Rényi entropy `ln(Tr ρ^α) / (1 - α)` in nats.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: f64) -> Result<EntropyValue> {
    check_order(alpha, "alpha")?;
    let p: Vec<f64> = rho.eigenvalues().into_iter().filter(|&x| x >= 1e-14).collect();
    let value = power_sum(&p, alpha).ln() / (1.0 - alpha);
    Ok(EntropyValue { kind: EntropyKind::Renyi, order: alpha, value })
}

/// `-Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> EntropyValue {
    let value = rho.eigenvalues().into_iter().filter(|&x| x >= 1e-14).map(|p| -p * p.ln()).sum();
    EntropyValue { kind: EntropyKind::VonNeumann, order: 1.0, value }
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}
