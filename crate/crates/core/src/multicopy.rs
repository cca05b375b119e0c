//! Observables on several copies of one state.
//!
//! A permutation `V_π` of tensor factors maps `|i_0 … i_{n-1}⟩` to
//! `|i_{π(0)} … i_{π(n-1)}⟩`. With this convention the cyclic shift `π(k) = k + 1`
//! satisfies `Tr(V A_0 ⊗ … ⊗ A_{n-1}) = Tr(A_0 ⋯ A_{n-1})`, so its mean on
//! `ρ^⊗n` is the moment `Tr ρⁿ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{digits, flat_index, ComplexMatrix, I, ONE, ZERO};
use crate::states::{tsallis_from_spectrum, DensityMatrix};

/// Largest `dⁿ` for which multicopy operators are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget(pub usize);

impl Default for Budget {
    fn default() -> Self {
        Budget(4096)
    }
}

impl Budget {
    pub fn check(self, dim: usize) -> Result<()> {
        if dim > self.0 {
            return Err(Error::BudgetExceeded { dim, budget: self.0 });
        }
        Ok(())
    }
}

/// `checked_pow` that reports overflow as a budget violation.
pub(crate) fn power_dim(d: usize, n: usize, budget: Budget) -> Result<usize> {
    let dim = u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .ok_or(Error::BudgetExceeded { dim: usize::MAX, budget: budget.0 })?;
    budget.check(dim)?;
    Ok(dim)
}

/// Operator on `(C^d)^⊗n`, read against `n` copies of a single state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulticopyObservable {
    pub n: usize,
    pub d: usize,
    pub op: ComplexMatrix,
    pub hermitian: bool,
}

impl MulticopyObservable {
    pub fn new(n: usize, d: usize, op: ComplexMatrix) -> Result<Self> {
        let dim = d.checked_pow(n as u32).unwrap_or(usize::MAX);
        if op.rows() != dim || op.cols() != dim {
            return Err(Error::dims("MulticopyObservable", format!("{dim}x{dim}"), format!("{}x{}", op.rows(), op.cols())));
        }
        let hermitian = op.is_hermitian(1e-10);
        Ok(MulticopyObservable { n, d, op, hermitian })
    }

    /// `⟨⟨A⟩⟩ = Tr(A ρ^⊗n)`.
    pub fn mean(&self, rho: &DensityMatrix) -> Result<Complex64> {
        multicopy_mean(self, rho)
    }
}

/// A permutation of tensor factors, kept as an index map rather than a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorPermutation {
    dims: Vec<usize>,
    perm: Vec<usize>,
}

impl FactorPermutation {
    /// Output factor `k` carries input factor `perm[k]`.
    pub fn new(dims: Vec<usize>, perm: Vec<usize>) -> Result<Self> {
        if dims.len() != perm.len() {
            return Err(Error::dims("FactorPermutation", dims.len(), perm.len()));
        }
        let mut seen = vec![false; perm.len()];
        for (k, &p) in perm.iter().enumerate() {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
            if dims[p] != dims[k] {
                return Err(Error::InvalidArgument(format!(
                    "factor {k} (dim {}) cannot receive factor {p} (dim {})",
                    dims[k], dims[p]
                )));
            }
        }
        Ok(FactorPermutation { dims, perm })
    }

    /// Cyclic shift `u₁⊗u₂⊗…⊗u_n ↦ u₂⊗…⊗u_n⊗u₁`.
    pub fn shift(d: usize, n: usize) -> Self {
        FactorPermutation { dims: vec![d; n], perm: (0..n).map(|k| (k + 1) % n).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (k, &p) in self.perm.iter().enumerate() {
            inv[p] = k;
        }
        FactorPermutation { dims: self.dims.clone(), perm: inv }
    }

    /// `σ` with `V|i⟩ = |σ(i)⟩`.
    pub fn index_map(&self) -> Vec<usize> {
        let n = self.dims.len();
        let mut src = vec![0; n];
        let mut dst = vec![0; n];
        (0..self.dim())
            .map(|i| {
                digits(i, &self.dims, &mut src);
                for k in 0..n {
                    dst[k] = src[self.perm[k]];
                }
                flat_index(&dst, &self.dims)
            })
            .collect()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let dim = self.dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (i, j) in self.index_map().into_iter().enumerate() {
            m[(j, i)] = ONE;
        }
        m
    }

    /// `Tr(V ρ^⊗copies)`, where `ρ` spans `dims.len() / copies` consecutive factors.
    pub fn mean_on_copies(&self, rho: &ComplexMatrix, copies: usize) -> Result<Complex64> {
        let dim = self.dim();
        if copies == 0 || rho.rows().checked_pow(copies as u32) != Some(dim) {
            return Err(Error::dims("FactorPermutation::mean_on_copies", dim, format!("{}^{copies}", rho.rows())));
        }
        let sigma = self.index_map();
        let block = rho.rows();
        let mut acc = ZERO;
        // Tr(V R) = Σ_i R[i, σ(i)], R = ρ^⊗copies evaluated entrywise
        for (i, &j) in sigma.iter().enumerate() {
            acc += tensor_power_entry(rho, block, copies, i, j);
        }
        Ok(acc)
    }
}

/// `(ρ^⊗copies)[i, j]` without forming the tensor power.
fn tensor_power_entry(rho: &ComplexMatrix, block: usize, copies: usize, mut i: usize, mut j: usize) -> Complex64 {
    let mut prod = ONE;
    for _ in 0..copies {
        prod *= rho[(i % block, j % block)];
        if prod == ZERO {
            return ZERO;
        }
        i /= block;
        j /= block;
    }
    prod
}

/// Swap `V` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> MulticopyObservable {
    assert!(d >= 1, "dimension must be positive");
    MulticopyObservable { n: 2, d, op: FactorPermutation::shift(d, 2).to_matrix(), hermitian: true }
}

/// Cyclic shift `V⁽ⁿ⁾` on `(C^d)^⊗n`.
pub fn shift_operator(d: usize, n: usize) -> Result<MulticopyObservable> {
    shift_operator_within(d, n, Budget::default())
}

pub fn shift_operator_within(d: usize, n: usize, budget: Budget) -> Result<MulticopyObservable> {
    if n < 2 || d < 1 {
        return Err(Error::InvalidArgument(format!("shift operator needs n >= 2 and d >= 1, got n = {n}, d = {d}")));
    }
    power_dim(d, n, budget)?;
    Ok(MulticopyObservable { n, d, op: FactorPermutation::shift(d, n).to_matrix(), hermitian: n <= 2 })
}

/// `X_h = (X + X†)/2`.
pub fn herm_part(x: &MulticopyObservable) -> MulticopyObservable {
    MulticopyObservable { n: x.n, d: x.d, op: hermitian_part(&x.op), hermitian: true }
}

/// `X_a = (i/2)(X - X†)`, so that `X = X_h - i X_a`.
pub fn antiherm_part(x: &MulticopyObservable) -> MulticopyObservable {
    MulticopyObservable { n: x.n, d: x.d, op: antihermitian_part(&x.op), hermitian: true }
}

pub fn hermitian_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x + &x.adjoint()).scale_real(0.5)
}

pub fn antihermitian_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x - &x.adjoint()).scale(I * 0.5)
}

/// `Tr(A ρ^⊗n)`, contracted entrywise over the nonzero entries of `A`.
pub fn multicopy_mean(a: &MulticopyObservable, rho: &DensityMatrix) -> Result<Complex64> {
    if a.d != rho.dim() {
        return Err(Error::dims("multicopy_mean", a.d, rho.dim()));
    }
    let dim = a.op.rows();
    let mut acc = ZERO;
    for r in 0..dim {
        for c in 0..dim {
            let x = a.op[(r, c)];
            if x != ZERO {
                acc += x * tensor_power_entry(rho.matrix(), a.d, a.n, c, r);
            }
        }
    }
    Ok(acc)
}

/// Means of the two hermitian observables `V_h`, `V_a` built from a factor permutation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitMean {
    pub herm: f64,
    pub antiherm: f64,
}

impl SplitMean {
    /// `⟨V⟩ = ⟨V_h⟩ - i⟨V_a⟩`.
    pub fn combined(&self) -> Complex64 {
        Complex64::new(self.herm, -self.antiherm)
    }
}

/// Evaluates `⟨V_h⟩` and `⟨V_a⟩` as two separate observables, using `V† = V⁻¹`.
pub fn permutation_split_mean(perm: &FactorPermutation, rho: &ComplexMatrix, copies: usize) -> Result<SplitMean> {
    let forward = perm.mean_on_copies(rho, copies)?;
    let backward = perm.inverse().mean_on_copies(rho, copies)?;
    let herm = (forward + backward) * 0.5;
    let antiherm = (forward - backward) * (I * 0.5);
    Ok(SplitMean { herm: herm.re, antiherm: antiherm.re })
}

/// `Tr ρᵏ` as `Re Tr(V⁽ᵏ⁾ ρ^⊗k)`.
pub fn moment(rho: &DensityMatrix, k: usize) -> Result<f64> {
    moment_within(rho, k, Budget::default())
}

pub fn moment_within(rho: &DensityMatrix, k: usize, budget: Budget) -> Result<f64> {
    match k {
        0 => Err(Error::InvalidArgument("moment order must be at least 1".into())),
        1 => Ok(1.0),
        _ => {
            power_dim(rho.dim(), k, budget)?;
            let shift = FactorPermutation::shift(rho.dim(), k);
            Ok(shift.mean_on_copies(rho.matrix(), k)?.re)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            other => Err(Error::InvalidArgument(format!("side must be A or B, got {other:?}"))),
        }
    }
}

fn check_bipartite(rho: &DensityMatrix, dims: (usize, usize)) -> Result<()> {
    if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != rho.dim() {
        return Err(Error::dims("bipartite state", rho.dim(), format!("{}*{}", dims.0, dims.1)));
    }
    Ok(())
}

/// Factor permutations on `n` copies of `AB` (factor order `A₁B₁A₂B₂…`):
/// the shift acting only on the `side` factors, and the shift of whole `AB` blocks.
fn bipartite_shifts(dims: (usize, usize), side: Side, n: usize) -> (FactorPermutation, FactorPermutation) {
    let factor_dims: Vec<usize> = (0..2 * n).map(|k| if k % 2 == 0 { dims.0 } else { dims.1 }).collect();
    let s = side.index();
    let local: Vec<usize> =
        (0..2 * n).map(|k| if k % 2 == s { 2 * ((k / 2 + 1) % n) + s } else { k }).collect();
    let full: Vec<usize> = (0..2 * n).map(|k| 2 * ((k / 2 + 1) % n) + k % 2).collect();
    (
        FactorPermutation::new(factor_dims.clone(), local).expect("valid local shift"),
        FactorPermutation::new(factor_dims, full).expect("valid block shift"),
    )
}

/// Two-copy witness operator `V_{XX'} ⊗ I - V_{AA'} ⊗ V_{BB'}` on `ρ_AB ⊗ ρ_AB`
/// (factor order `A B A' B'`). Its mean is `Tr ρ_X² - Tr ρ_AB²`.
pub fn witness_observable(dims: (usize, usize), side: Side) -> MulticopyObservable {
    let (local, full) = bipartite_shifts(dims, side, 2);
    let op = &local.to_matrix() - &full.to_matrix();
    MulticopyObservable { n: 2, d: dims.0 * dims.1, op, hermitian: true }
}

/// `Tr ρ_X² - Tr ρ_AB²`; nonnegative on separable states.
pub fn witness_q2(rho: &DensityMatrix, dims: (usize, usize), side: Side) -> Result<f64> {
    check_bipartite(rho, dims)?;
    Ok(multicopy_mean(&witness_observable(dims, side), rho)?.re)
}

/// Exact-arithmetic detection threshold for witness values.
pub const WITNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub value_a: f64,
    pub value_b: f64,
    pub entangled_detected: bool,
    pub q: u32,
    pub tol: f64,
}

pub fn witness_report(rho: &DensityMatrix, dims: (usize, usize)) -> Result<WitnessReport> {
    let value_a = witness_q2(rho, dims, Side::A)?;
    let value_b = witness_q2(rho, dims, Side::B)?;
    Ok(WitnessReport {
        value_a,
        value_b,
        entangled_detected: value_a < -WITNESS_TOL || value_b < -WITNESS_TOL,
        q: 2,
        tol: WITNESS_TOL,
    })
}

/// `Tr ρ_Xⁿ - Tr ρ_ABⁿ` from the hermitian and antihermitian parts of the two shifts.
pub fn quasi_witness_qn(rho: &DensityMatrix, dims: (usize, usize), side: Side, n: usize) -> Result<f64> {
    quasi_witness_qn_within(rho, dims, side, n, Budget::default())
}

pub fn quasi_witness_qn_within(
    rho: &DensityMatrix,
    dims: (usize, usize),
    side: Side,
    n: usize,
    budget: Budget,
) -> Result<f64> {
    check_bipartite(rho, dims)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("copy count must be at least 2, got {n}")));
    }
    power_dim(rho.dim(), n, budget)?;
    let (local, full) = bipartite_shifts(dims, side, n);
    let x = permutation_split_mean(&local, rho.matrix(), n)?.combined();
    let ab = permutation_split_mean(&full, rho.matrix(), n)?.combined();
    Ok((x - ab).re)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityEntry {
    pub q: f64,
    pub side: Side,
    /// `S_q(ρ_AB) - S_q(ρ_X)` (Tsallis).
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    pub entries: Vec<SeparabilityEntry>,
    pub entangled_detected: bool,
}

/// Tsallis entropic inequalities `S_q(ρ_AB) ≥ S_q(ρ_X)` for each requested `q` and both sides.
pub fn entropic_separability_check(rho: &DensityMatrix, dims: (usize, usize), qs: &[f64]) -> Result<SeparabilityReport> {
    check_bipartite(rho, dims)?;
    let joint = rho.eigenvalues();
    let marginals = [
        rho.reduce(&[dims.0, dims.1], &[0])?.eigenvalues(),
        rho.reduce(&[dims.0, dims.1], &[1])?.eigenvalues(),
    ];
    let mut entries = Vec::with_capacity(2 * qs.len());
    for &q in qs {
        if !(q > 0.0) || q == 1.0 || !q.is_finite() {
            return Err(Error::InvalidArgument(format!("Tsallis order must be positive and != 1, got {q}")));
        }
        for (side, marginal) in [Side::A, Side::B].into_iter().zip(&marginals) {
            let difference = tsallis_from_spectrum(&joint, q) - tsallis_from_spectrum(marginal, q);
            entries.push(SeparabilityEntry { q, side, difference });
        }
    }
    let entangled_detected = entries.iter().any(|e| e.difference < -WITNESS_TOL);
    Ok(SeparabilityReport { entries, entangled_detected })
}
