//! Spectrum of a state from its power moments `m_k = Tr ρᵏ`, `k = 1..d`.
//!
//! Newton's identities convert the moments into the elementary symmetric
//! polynomials of the eigenvalues, which are the coefficients of the
//! characteristic polynomial; its roots are found by Durand–Kerner iteration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multicopy::{permutation_split_mean, power_dim, Budget, FactorPermutation};
use crate::states::DensityMatrix;

/// Slack allowed on the moment-cone constraints for noisy input.
pub const MOMENT_SLACK: f64 = 0.05;
/// Roots with a larger imaginary part mark moments no spectrum can produce.
pub const IMAG_THRESHOLD: f64 = 0.05;

const DK_MAX_ITERATIONS: usize = 500;
const DK_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub d: usize,
    /// `m[k-1] = Tr ρᵏ`, with `m[0] = 1`.
    pub m: Vec<f64>,
}

impl MomentVector {
    /// Checks the cone constraints `1/d^{k-1} ≤ m_k ≤ 1`, `m_{k+1} ≤ m_k` up to `slack`.
    pub fn new(m: Vec<f64>, slack: f64) -> Result<Self> {
        let d = m.len();
        if d == 0 {
            return Err(Error::InconsistentMoments("empty moment vector".into()));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InconsistentMoments("non-finite moment".into()));
        }
        if (m[0] - 1.0).abs() > 1e-12 {
            return Err(Error::InconsistentMoments(format!("m_1 = {} but states have unit trace", m[0])));
        }
        for (idx, &mk) in m.iter().enumerate() {
            let k = idx as i32 + 1;
            let lower = (d as f64).powi(-(k - 1));
            if mk < lower - slack || mk > 1.0 + slack {
                return Err(Error::InconsistentMoments(format!("m_{k} = {mk} outside [{lower}, 1]")));
            }
            if idx > 0 && mk > m[idx - 1] + slack {
                return Err(Error::InconsistentMoments(format!("m_{k} = {mk} exceeds m_{} = {}", k - 1, m[idx - 1])));
            }
        }
        Ok(MomentVector { d, m })
    }

    /// Exact moments of a probability vector.
    pub fn from_spectrum(p: &[f64]) -> Self {
        let m = (1..=p.len()).map(|k| p.iter().map(|x| x.powi(k as i32)).sum()).collect();
        MomentVector { d: p.len(), m }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    /// Descending, nonnegative, summing to one.
    pub eigenvalues: Vec<f64>,
    /// `max_k |m_k(recovered) - m_k(input)|`.
    pub residual: f64,
    /// Whether clipping or renormalization changed the raw roots.
    pub projected: bool,
    /// Largest `|Im|` among the characteristic-polynomial roots.
    pub max_imag: f64,
}

/// Newton's identities: `e_k = (1/k) Σ_{i=1}^{k} (-1)^{i-1} e_{k-i} m_i`, with `e_0 = 1`.
pub fn newton_elementary(m: &[f64]) -> Vec<f64> {
    let mut e = vec![1.0];
    for k in 1..=m.len() {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - i] * m[i - 1];
        }
        e.push(acc / k as f64);
    }
    e.remove(0);
    e
}

/// Monic coefficients (highest degree first) of `x^d - e₁x^{d-1} + e₂x^{d-2} - …`.
fn characteristic_coefficients(e: &[f64]) -> Vec<f64> {
    let mut c = Vec::with_capacity(e.len() + 1);
    c.push(1.0);
    for (k, &ek) in e.iter().enumerate() {
        c.push(if k % 2 == 0 { -ek } else { ek });
    }
    c
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Roots of the polynomial with elementary symmetric coefficients `e`.
pub fn roots_from_elementary(e: &[f64]) -> Result<Vec<Complex64>> {
    let coeffs = characteristic_coefficients(e);
    let n = e.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![Complex64::new(e[0], 0.0)]);
    }
    // Perturbed unit circle around the root centroid e₁/n.
    let center = Complex64::new(e[0] / n as f64, 0.0);
    let radius = 1.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| center + Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();

    let mut residual = f64::INFINITY;
    let mut converged = false;
    for _ in 0..DK_MAX_ITERATIONS {
        // Simultaneous (Weierstrass) update keeps Σ z_i = e₁, so the mean of a
        // cluster of iterates around a repeated root stays accurate.
        let mut steps = vec![Complex64::new(0.0, 0.0); n];
        let mut coincident = false;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                coincident = true;
                steps[i] = Complex64::new(1e-8, 1e-8);
            } else {
                steps[i] = horner(&coeffs, z[i]) / denom;
            }
        }
        let mut max_step: f64 = 0.0;
        for (zi, s) in z.iter_mut().zip(&steps) {
            *zi -= s;
            max_step = max_step.max(s.norm() / zi.norm().max(1.0));
        }
        residual = backward_residual(&coeffs, &z);
        if !coincident && max_step <= DK_TOLERANCE {
            converged = true;
            break;
        }
    }
    // Around a repeated root the step size stalls at the rounding floor; accept
    // once every iterate is a root to working precision.
    if !converged && residual > 64.0 * f64::EPSILON {
        return Err(Error::NoConvergence { method: "durand-kerner", iterations: DK_MAX_ITERATIONS, residual });
    }
    merge_clusters(&mut z, &coeffs);
    Ok(z)
}

/// `max_i |p(z_i)| / Σ_k |c_k| max(1, |z_i|)^k`: zero up to rounding at a computed root.
fn backward_residual(coeffs: &[f64], z: &[Complex64]) -> f64 {
    z.iter()
        .map(|&zi| {
            let scale: f64 = coeffs.iter().fold(0.0, |acc, c| acc * zi.norm().max(1.0) + c.abs());
            horner(coeffs, zi).norm() / scale
        })
        .fold(0.0, f64::max)
}

/// Largest coefficient deviation between `Π (x - z_i)` and the monic `coeffs`.
fn coefficient_residual(z: &[Complex64], coeffs: &[f64]) -> f64 {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &zi in z {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c * zi;
        }
        poly = next;
    }
    poly.iter().zip(coeffs).map(|(a, &b)| (a - b).norm()).fold(0.0, f64::max)
}

/// A repeated root comes out of the iteration as a small cluster spread at the
/// `ε^{1/k}` level; collapse a cluster onto its mean when that reproduces the
/// polynomial to within `MERGE_SLACK` of the unmerged roots.
fn merge_clusters(z: &mut [Complex64], coeffs: &[f64]) {
    const RADIUS: f64 = 1e-2;
    // Both residuals sit at the rounding floor for a true repeated root; merging two
    // distinct roots a distance δ apart costs about δ²/4 in the coefficients.
    const MERGE_SLACK: f64 = 1e-12;
    let n = z.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[a].re.total_cmp(&z[b].re));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (z[order[end]] - z[order[end - 1]]).norm() < RADIUS {
            end += 1;
        }
        if end - start > 1 {
            let members = &order[start..end];
            let mean = members.iter().map(|&i| z[i]).sum::<Complex64>() / members.len() as f64;
            let mut merged = z.to_vec();
            for &i in members {
                merged[i] = mean;
            }
            if coefficient_residual(&merged, coeffs) <= coefficient_residual(z, coeffs) + MERGE_SLACK {
                z.copy_from_slice(&merged);
            }
        }
        start = end;
    }
}

fn moment_residual(p: &[f64], m: &[f64]) -> f64 {
    MomentVector::from_spectrum(p).m.iter().zip(m).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Spectrum from a moment vector; rejects moments that no state can have.
pub fn estimate_spectrum(moments: &MomentVector) -> Result<SpectrumEstimate> {
    let checked = MomentVector::new(moments.m.clone(), MOMENT_SLACK)?;
    let m = &checked.m;
    let e = newton_elementary(m);
    let roots = roots_from_elementary(&e)?;
    let max_imag = roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_imag > IMAG_THRESHOLD {
        return Err(Error::IllConditioned { imag: max_imag });
    }
    let raw: Vec<f64> = roots.iter().map(|z| z.re).collect();

    let clipped: Vec<f64> = raw.iter().map(|&x| x.clamp(0.0, 1.0)).collect();
    let mut projected = clipped.iter().zip(&raw).any(|(a, b)| a != b);
    let sum: f64 = clipped.iter().sum();
    if !(sum > 0.0) {
        return Err(Error::InconsistentMoments("all recovered eigenvalues vanish".into()));
    }
    if (sum - 1.0).abs() > 1e-12 {
        projected = true;
    }
    let mut eigenvalues: Vec<f64> = clipped.iter().map(|x| x / sum).collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let residual = moment_residual(&eigenvalues, m);
    Ok(SpectrumEstimate { eigenvalues, residual, projected, max_imag })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentPath {
    /// Multicopy shift observables.
    Shift,
    /// Eigendecomposition of the state.
    Eig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpectrum {
    pub estimate: SpectrumEstimate,
    pub moments: Vec<f64>,
    pub via: MomentPath,
    /// Multicopy observables evaluated: `V⁽²⁾` plus `V_h⁽ᵏ⁾, V_a⁽ᵏ⁾` for `k = 3..d`.
    pub observables_used: usize,
    /// Set when the shift path was requested but the operator budget forced the eigenvalue path.
    pub notice: Option<String>,
}

/// Number of hermitian observables the shift path needs for a `d`-level state: `2d - 3`.
pub fn observable_count(d: usize) -> usize {
    (2 * d).saturating_sub(3)
}

/// Moments `m_2..m_d` through shift observables, then inversion.
pub fn spectrum_from_state(rho: &DensityMatrix, via: MomentPath) -> Result<StateSpectrum> {
    spectrum_from_state_within(rho, via, Budget::default())
}

pub fn spectrum_from_state_within(rho: &DensityMatrix, via: MomentPath, budget: Budget) -> Result<StateSpectrum> {
    let d = rho.dim();
    let (via, notice) = match via {
        MomentPath::Shift if power_dim(d, d, budget).is_err() => (
            MomentPath::Eig,
            Some(format!("d^d = {d}^{d} exceeds operator budget {}; moments taken from eigenvalues", budget.0)),
        ),
        other => (other, None),
    };
    let (moments, observables_used) = match via {
        MomentPath::Eig => (MomentVector::from_spectrum(&rho.eigenvalues()).m, 0),
        MomentPath::Shift => {
            let mut m = vec![1.0];
            let mut count = 0;
            for k in 2..=d {
                let split = permutation_split_mean(&FactorPermutation::shift(d, k), rho.matrix(), k)?;
                // V⁽²⁾ is hermitian and needs no antihermitian partner.
                count += if k == 2 { 1 } else { 2 };
                m.push(split.combined().re);
            }
            (m, count)
        }
    };
    let estimate = estimate_spectrum(&MomentVector { d, m: moments.clone() })?;
    Ok(StateSpectrum { estimate, moments, via, observables_used, notice })
}
