//! Numerical checks behind the impossibility of mapping `ρ^⊗n` to `ρⁿ`.
//!
//! Any operator `A` with `0 ≤ A ≤ I` that fixes every `|φ⟩^⊗n` dominates the
//! symmetric projector, so `Tr(Aρ^⊗n) ≥ Tr(P_sym ρ^⊗n)`. For mixed `ρ` that lower
//! bound already exceeds `Tr ρⁿ`, which rules out `Tr(Aρ^⊗n) = Tr ρⁿ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace, ComplexMatrix, ZERO};
use crate::multicopy::{moment_within, power_dim, swap_operator, Budget, FactorPermutation};
use crate::rng::Rng;
use crate::states::{random_mixed_from, random_pure_from, DensityMatrix};

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("pivot exists");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

/// Projector onto the symmetric subspace, `(1/n!) Σ_π V_π`.
pub fn sym_projector(d: usize, n: usize) -> Result<ComplexMatrix> {
    sym_projector_within(d, n, Budget::default())
}

pub fn sym_projector_within(d: usize, n: usize, budget: Budget) -> Result<ComplexMatrix> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidArgument("d and n must be positive".into()));
    }
    let dim = power_dim(d, n, budget)?;
    let perms = permutations(n);
    let weight = 1.0 / perms.len() as f64;
    let mut p = ComplexMatrix::zeros(dim, dim);
    for perm in perms {
        let fp = FactorPermutation::new(vec![d; n], perm).expect("permutation of equal factors");
        for (i, j) in fp.index_map().into_iter().enumerate() {
            p[(j, i)] += weight;
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NogoGapReport {
    pub d: usize,
    pub n: usize,
    pub state_purity: f64,
    /// `Tr(P_sym ρ^⊗n)`.
    pub sym_overlap: f64,
    /// `Tr ρⁿ`.
    pub target: f64,
    pub gap: f64,
}

pub fn nogo_gap(rho: &DensityMatrix, n: usize) -> Result<NogoGapReport> {
    nogo_gap_within(rho, n, Budget::default())
}

pub fn nogo_gap_within(rho: &DensityMatrix, n: usize, budget: Budget) -> Result<NogoGapReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2 copies, got {n}")));
    }
    let d = rho.dim();
    power_dim(d, n, budget)?;
    let perms = permutations(n);
    let count = perms.len() as f64;
    let mut overlap = ZERO;
    for perm in perms {
        overlap += FactorPermutation::new(vec![d; n], perm)?.mean_on_copies(rho.matrix(), n)?;
    }
    let sym_overlap = overlap.re / count;
    let target = moment_within(rho, n, budget)?;
    Ok(NogoGapReport { d, n, state_purity: rho.purity(), sym_overlap, target, gap: sym_overlap - target })
}

/// `(1 - Tr ρ²) I/d + ρ²`.
pub fn map2_target(rho: &DensityMatrix) -> DensityMatrix {
    let d = rho.dim();
    let sq = rho.matrix() * rho.matrix();
    let noise = (1.0 - rho.purity()) / d as f64;
    let mut out = sq;
    for i in 0..d {
        out[(i, i)] += noise;
    }
    DensityMatrix::from_trusted(out)
}

/// The symmetrize-then-trace channel `σ ↦ Tr₂[(σ + VσV)/2]` on `C^d ⊗ C^d`.
pub fn symmetrized_partial_trace(sigma: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    let v = swap_operator(d).op;
    let sym = (sigma + &(&(&v * sigma) * &v)).scale_real(0.5);
    partial_trace(&sym, &[d, d], &[0])
}

/// `||Λ(ρ⊗ρ) - map2_target(ρ)||_F` for the symmetrize-then-trace candidate `Λ`.
pub fn map2_deviation(rho: &DensityMatrix) -> Result<f64> {
    let out = symmetrized_partial_trace(&kron(rho.matrix(), rho.matrix()), rho.dim())?;
    Ok(out.distance(map2_target(rho).matrix()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Map2Report {
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_deviation: f64,
    pub mean_deviation: f64,
}

/// Deviations of the candidate channel from the target on random mixed states
/// (trials alternate with random pure states).
pub fn map2_linearization_check(d: usize, trials: usize, seed: u64) -> Result<Map2Report> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need d >= 2, got {d}")));
    }
    let mut rng = Rng::seed(seed);
    let mut max_deviation: f64 = 0.0;
    let mut total = 0.0;
    for t in 0..trials {
        let rho = if t % 4 == 3 { random_pure_from(d, &mut rng) } else { random_mixed_from(d, &mut rng) };
        let dev = map2_deviation(&rho)?;
        max_deviation = max_deviation.max(dev);
        total += dev;
    }
    let mean_deviation = if trials == 0 { 0.0 } else { total / trials as f64 };
    Ok(Map2Report { d, trials, seed, max_deviation, mean_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, kron_power};
    use crate::states::{random_mixed, random_pure};

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(1).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn sym_projector_properties() {
        let p = sym_projector(2, 2).unwrap();
        let expected = (&ComplexMatrix::identity(4) + &swap_operator(2).op).scale_real(0.5);
        assert!(p.distance(&expected) < 1e-15);
        let rank: f64 = hermitian_eig(&p).unwrap().eigenvalues.iter().sum();
        assert!((rank - 3.0).abs() < 1e-12);

        for (d, n) in [(2, 3), (3, 3), (2, 4)] {
            let p = sym_projector(d, n).unwrap();
            assert!(p.is_hermitian(1e-14));
            assert!((&p * &p).distance(&p) < 1e-10);
            let phi = random_pure(d, 5);
            let v: Vec<_> = {
                // |φ⟩ from the rank-one projector's top eigenvector
                let e = hermitian_eig(phi.matrix()).unwrap();
                e.eigenvectors.column(d - 1)
            };
            let mut vn = v.clone();
            for _ in 1..n {
                vn = vn.iter().flat_map(|&a| v.iter().map(move |&b| a * b)).collect();
            }
            let pv = p.matvec(&vn).unwrap();
            let err: f64 = pv.iter().zip(&vn).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            assert!(err < 1e-12);
        }
        // dimension of Sym^3(C^3) is 10
        let rank: f64 = sym_projector(3, 3).unwrap().trace().re;
        assert!((rank - 10.0).abs() < 1e-12);
    }

    #[test]
    fn gap_examples() {
        let r = nogo_gap(&DensityMatrix::maximally_mixed(2), 2).unwrap();
        assert!((r.sym_overlap - 0.75).abs() < 1e-15);
        assert!((r.target - 0.5).abs() < 1e-15);
        assert!((r.gap - 0.25).abs() < 1e-15);

        for n in 2..=4 {
            assert!(nogo_gap(&random_pure(3, 2), n).unwrap().gap.abs() < 1e-10);
        }

        let q = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let r = nogo_gap(&q, 3).unwrap();
        assert!((r.target - 0.4375).abs() < 1e-15);
        assert!(r.gap > 0.0);
        // dense contraction oracle
        let dense = sym_projector(2, 3).unwrap().trace_product(&kron_power(q.matrix(), 3)).unwrap();
        assert!((dense.re - r.sym_overlap).abs() < 1e-14);
    }

    #[test]
    fn gap_two_copy_closed_form() {
        for seed in 0..30 {
            let rho = random_mixed(3, seed);
            let r = nogo_gap(&rho, 2).unwrap();
            assert!((r.sym_overlap - (1.0 + rho.purity()) / 2.0).abs() < 1e-12);
            assert!(r.gap > 1e-6);
        }
    }

    #[test]
    fn map2_target_examples() {
        let pure = random_pure(3, 7);
        assert!(map2_target(&pure).matrix().distance(pure.matrix()) < 1e-12);
        let half = DensityMatrix::maximally_mixed(2);
        assert!(map2_target(&half).matrix().distance(half.matrix()) < 1e-15);
        let q = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        assert!(map2_target(&q).matrix().distance(q.matrix()) < 1e-15);
        for seed in 0..20 {
            let t = map2_target(&random_mixed(4, seed));
            assert!(DensityMatrix::validate(t.into_matrix()).is_ok());
        }
    }

    #[test]
    fn candidate_channel_reproduces_qubit_target() {
        let r = map2_linearization_check(2, 100, 1).unwrap();
        assert!(r.max_deviation < 1e-12, "{r:?}");
        for seed in 0..10 {
            assert!(map2_deviation(&random_pure(2, seed)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn candidate_channel_misses_qutrit_target() {
        let q = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let dev = map2_deviation(&q).unwrap();
        // Λ(ρ⊗ρ) = ρ, target = 0.62 I/3 + ρ²
        let expected = ((0.5f64 - 0.25 - 0.62 / 3.0).powi(2)
            + (0.3f64 - 0.09 - 0.62 / 3.0).powi(2)
            + (0.2f64 - 0.04 - 0.62 / 3.0).powi(2))
        .sqrt();
        assert!((dev - expected).abs() < 1e-14);
        assert!(dev > 0.01);
        assert!(map2_linearization_check(3, 20, 2).unwrap().max_deviation > 1e-3);
    }
}
