//! Hermitian linear maps in Kraus and Choi form, their complete-positivity
//! diagnostics, and the structural physical approximation (SPA) that turns a
//! hermitian map into an implementable channel by mixing in white noise.
//!
//! Choi convention: `C = [𝕀 ⊗ Θ](P₊)` with the normalized maximally entangled
//! projector `P₊`, the input space `C^d` as the first tensor factor and the
//! output space `C^d'` as the second. The "noise map" `N(X) = Tr(X) I_d'` has
//! Choi matrix `I_{dd'}/d`, so `Choi(aN + Θ) = a I/d + C` and the SPA threshold
//! is `a ≥ d·max(0, -λ')` with `λ'` the minimal eigenvalue of `C`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_with, partial_trace, psd_sqrt_with, ComplexMatrix, ONE, ZERO};
use crate::rng::Rng;
use crate::states::DensityMatrix;
use crate::tolerance::Tolerances;

/// `Λ(ρ) = Σ V_i ρ V_i†` with `V_i` of shape `d_out × d_in`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KrausRepr")]
pub struct KrausMap {
    d_in: usize,
    d_out: usize,
    ops: Vec<ComplexMatrix>,
}

#[derive(Deserialize)]
struct KrausRepr {
    d_in: usize,
    d_out: usize,
    ops: Vec<ComplexMatrix>,
}

impl TryFrom<KrausRepr> for KrausMap {
    type Error = Error;

    fn try_from(r: KrausRepr) -> Result<Self> {
        KrausMap::new(r.d_in, r.d_out, r.ops)
    }
}

impl KrausMap {
    pub fn new(d_in: usize, d_out: usize, ops: Vec<ComplexMatrix>) -> Result<Self> {
        if d_in == 0 || d_out == 0 {
            return Err(Error::InvalidArgument("map dimensions must be positive".into()));
        }
        if ops.is_empty() {
            return Err(Error::InvalidArgument("a Kraus map needs at least one operator".into()));
        }
        for op in &ops {
            if op.rows() != d_out || op.cols() != d_in {
                return Err(Error::dims(
                    "KrausMap",
                    format!("{d_out}x{d_in}"),
                    format!("{}x{}", op.rows(), op.cols()),
                ));
            }
        }
        Ok(KrausMap { d_in, d_out, ops })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// `A₀ = Σ V_i† V_i`.
    pub fn effect(&self) -> ComplexMatrix {
        self.ops.iter().fold(ComplexMatrix::zeros(self.d_in, self.d_in), |acc, v| &acc + &(&v.adjoint() * v))
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.d_in || x.cols() != self.d_in {
            return Err(Error::dims("KrausMap::apply", format!("{0}x{0}", self.d_in), format!("{}x{}", x.rows(), x.cols())));
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for v in &self.ops {
            out = &out + &(&(v * x) * &v.adjoint());
        }
        Ok(out)
    }

    /// `s·Λ` for `s ≥ 0`, realized by scaling every Kraus operator with `√s`.
    pub fn scaled(&self, s: f64) -> Result<KrausMap> {
        if !(s >= 0.0) {
            return Err(Error::InvalidArgument(format!("Kraus maps can only be scaled by s >= 0, got {s}")));
        }
        let r = s.sqrt();
        Ok(KrausMap { d_in: self.d_in, d_out: self.d_out, ops: self.ops.iter().map(|v| v.scale_real(r)).collect() })
    }

    pub fn choi(&self) -> ChoiMatrix {
        let (d, dp) = (self.d_in, self.d_out);
        let n = d * dp;
        let mut mat = ComplexMatrix::zeros(n, n);
        for v in &self.ops {
            // vec(V)[(i, a)] = V[a, i]
            let vec: Vec<Complex64> = (0..n).map(|k| v[(k % dp, k / dp)]).collect();
            for r in 0..n {
                if vec[r] == ZERO {
                    continue;
                }
                for c in 0..n {
                    mat[(r, c)] += vec[r] * vec[c].conj();
                }
            }
        }
        ChoiMatrix { d_in: d, d_out: dp, mat: mat.scale_real(1.0 / d as f64) }
    }
}

/// `[𝕀 ⊗ Θ](P₊)`, a `(d·d') × (d·d')` hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChoiRepr")]
pub struct ChoiMatrix {
    d_in: usize,
    d_out: usize,
    #[serde(rename = "matrix")]
    mat: ComplexMatrix,
}

#[derive(Deserialize)]
struct ChoiRepr {
    d_in: usize,
    d_out: usize,
    matrix: ComplexMatrix,
}

impl TryFrom<ChoiRepr> for ChoiMatrix {
    type Error = Error;

    fn try_from(r: ChoiRepr) -> Result<Self> {
        ChoiMatrix::new(r.d_in, r.d_out, r.matrix)
    }
}

impl ChoiMatrix {
    pub fn new(d_in: usize, d_out: usize, mat: ComplexMatrix) -> Result<Self> {
        Self::new_with(d_in, d_out, mat, &Tolerances::DEFAULT)
    }

    pub fn new_with(d_in: usize, d_out: usize, mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if d_in == 0 || d_out == 0 {
            return Err(Error::InvalidArgument("map dimensions must be positive".into()));
        }
        let n = d_in * d_out;
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::dims("ChoiMatrix", format!("{n}x{n}"), format!("{}x{}", mat.rows(), mat.cols())));
        }
        let defect = mat.hermiticity_defect();
        if defect > tol.hermiticity {
            return Err(Error::NotHermitian { defect });
        }
        Ok(ChoiMatrix { d_in, d_out, mat })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// `Θ(X)_{ab} = d Σ_{ij} X_{ij} C_{(i,a),(j,b)}`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (d, dp) = (self.d_in, self.d_out);
        if x.rows() != d || x.cols() != d {
            return Err(Error::dims("ChoiMatrix::apply", format!("{d}x{d}"), format!("{}x{}", x.rows(), x.cols())));
        }
        let mut out = ComplexMatrix::zeros(dp, dp);
        for i in 0..d {
            for j in 0..d {
                let xij = x[(i, j)];
                if xij == ZERO {
                    continue;
                }
                for a in 0..dp {
                    for b in 0..dp {
                        out[(a, b)] += xij * self.mat[(i * dp + a, j * dp + b)];
                    }
                }
            }
        }
        Ok(out.scale_real(d as f64))
    }
}

/// A hermitian map in whichever representation it was supplied in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HermitianMap {
    Kraus(KrausMap),
    Choi(ChoiMatrix),
}

impl From<KrausMap> for HermitianMap {
    fn from(k: KrausMap) -> Self {
        HermitianMap::Kraus(k)
    }
}

impl From<ChoiMatrix> for HermitianMap {
    fn from(c: ChoiMatrix) -> Self {
        HermitianMap::Choi(c)
    }
}

impl HermitianMap {
    pub fn d_in(&self) -> usize {
        match self {
            HermitianMap::Kraus(k) => k.d_in,
            HermitianMap::Choi(c) => c.d_in,
        }
    }

    pub fn d_out(&self) -> usize {
        match self {
            HermitianMap::Kraus(k) => k.d_out,
            HermitianMap::Choi(c) => c.d_out,
        }
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            HermitianMap::Kraus(k) => k.apply(x),
            HermitianMap::Choi(c) => c.apply(x),
        }
    }

    pub fn choi(&self) -> ChoiMatrix {
        match self {
            HermitianMap::Kraus(k) => k.choi(),
            HermitianMap::Choi(c) => c.clone(),
        }
    }

    /// The adjoint map applied to the identity, `Θ*(I)`, so that `Tr Θ(ρ) = Tr(Θ*(I) ρ)`.
    pub fn adjoint_identity(&self) -> ComplexMatrix {
        match self {
            HermitianMap::Kraus(k) => k.effect(),
            HermitianMap::Choi(c) => {
                let reduced = partial_trace(&c.mat, &[c.d_in, c.d_out], &[0]).expect("Choi dimensions are consistent");
                reduced.transpose().scale_real(c.d_in as f64)
            }
        }
    }
}

/// Transposition `[T(A)]_{mn} = A_{nm}` on `C^d`; not completely positive.
pub fn transpose_map(d: usize) -> HermitianMap {
    let n = d * d;
    let swap = ComplexMatrix::from_fn(n, n, |r, c| if c == (r % d) * d + r / d { ONE } else { ZERO });
    HermitianMap::Choi(ChoiMatrix { d_in: d, d_out: d, mat: swap.scale_real(1.0 / d as f64) })
}

/// Completely depolarizing channel `ρ ↦ Tr(ρ) I/d_out`, with `d_in·d_out` Kraus operators.
pub fn depolarizing_map(d_in: usize, d_out: usize) -> HermitianMap {
    let amp = Complex64::new(1.0 / (d_out as f64).sqrt(), 0.0);
    let mut ops = Vec::with_capacity(d_in * d_out);
    for a in 0..d_out {
        for b in 0..d_in {
            let mut v = ComplexMatrix::zeros(d_out, d_in);
            v[(a, b)] = amp;
            ops.push(v);
        }
    }
    HermitianMap::Kraus(KrausMap { d_in, d_out, ops })
}

pub fn identity_map(d: usize) -> HermitianMap {
    HermitianMap::Kraus(KrausMap { d_in: d, d_out: d, ops: vec![ComplexMatrix::identity(d)] })
}

/// A map with a random hermitian Choi matrix, sign-fixed so that `α_Θ > 0`.
pub fn random_hermitian_map(d_in: usize, d_out: usize, seed: u64) -> HermitianMap {
    let mut rng = Rng::seed(seed);
    let n = d_in * d_out;
    let g = ComplexMatrix::from_fn(n, n, |_, _| rng.complex_gaussian());
    let h = (&g + &g.adjoint()).scale_real(0.5 / n as f64);
    let mut choi = ChoiMatrix { d_in, d_out, mat: h };
    let alpha = max_eigenvalue(&HermitianMap::Choi(choi.clone()).adjoint_identity());
    if alpha <= 0.0 {
        // then Θ*(I) ≤ 0, so the negated map has a positive maximal output trace
        choi.mat = -&choi.mat;
    }
    HermitianMap::Choi(choi)
}

/// A random completely positive map with `Σ V_i†V_i ≤ I` (strictly below the identity
/// by a random factor in `[0.5, 1)`).
pub fn random_trace_nonincreasing(d_in: usize, d_out: usize, n_ops: usize, seed: u64) -> KrausMap {
    let mut rng = Rng::seed(seed);
    let ops: Vec<ComplexMatrix> =
        (0..n_ops.max(1)).map(|_| ComplexMatrix::from_fn(d_out, d_in, |_, _| rng.complex_gaussian())).collect();
    let raw = KrausMap { d_in, d_out, ops };
    let top = max_eigenvalue(&raw.effect());
    let shrink = 0.5 + 0.5 * rng.uniform();
    raw.scaled(shrink / top).expect("positive scale")
}

fn max_eigenvalue(m: &ComplexMatrix) -> f64 {
    hermitian_eig_with(m, &Tolerances::DEFAULT).expect("hermitian by construction").max()
}

pub fn apply(map: &HermitianMap, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    map.apply(x)
}

pub fn choi_from_map(map: &HermitianMap) -> ChoiMatrix {
    map.choi()
}

pub fn kraus_from_choi(c: &ChoiMatrix) -> Result<KrausMap> {
    kraus_from_choi_with(c, &Tolerances::DEFAULT)
}

/// Spectral decomposition `C = Σ μ_k |v_k⟩⟨v_k|` turned into `V_k = √(d μ_k) unvec(v_k)`.
pub fn kraus_from_choi_with(c: &ChoiMatrix, tol: &Tolerances) -> Result<KrausMap> {
    let (d, dp) = (c.d_in, c.d_out);
    let eig = hermitian_eig_with(&c.mat, tol)?;
    if eig.min() < -tol.reconstruction {
        return Err(Error::NotCp { lambda_min: eig.min() });
    }
    let cutoff = 1e-14 * eig.max().abs().max(1.0);
    let mut ops = Vec::new();
    for (k, &mu) in eig.eigenvalues.iter().enumerate().rev() {
        if mu <= cutoff {
            continue;
        }
        let w = (d as f64 * mu).sqrt();
        ops.push(ComplexMatrix::from_fn(dp, d, |a, i| eig.eigenvectors[(i * dp + a, k)] * w));
    }
    if ops.is_empty() {
        ops.push(ComplexMatrix::zeros(dp, d));
    }
    Ok(KrausMap { d_in: d, d_out: dp, ops })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpCheck {
    pub is_cp: bool,
    pub lambda_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TpCheck {
    pub is_tp: bool,
    /// `||Θ*(I) - I||_F`; for Kraus maps this is `||Σ V_i†V_i - I||_F`.
    pub defect: f64,
}

pub fn is_cp(map: &HermitianMap) -> CpCheck {
    is_cp_with(map, &Tolerances::DEFAULT)
}

pub fn is_cp_with(map: &HermitianMap, tol: &Tolerances) -> CpCheck {
    let lambda_min = choi_min_eigenvalue(&map.choi(), tol);
    CpCheck { is_cp: lambda_min >= -tol.psd_clip, lambda_min }
}

pub fn is_tp(map: &HermitianMap) -> TpCheck {
    is_tp_with(map, &Tolerances::DEFAULT)
}

pub fn is_tp_with(map: &HermitianMap, tol: &Tolerances) -> TpCheck {
    let defect = map.adjoint_identity().distance(&ComplexMatrix::identity(map.d_in()));
    TpCheck { is_tp: defect <= tol.hermiticity, defect }
}

fn choi_min_eigenvalue(c: &ChoiMatrix, tol: &Tolerances) -> f64 {
    hermitian_eig_with(&c.mat, tol).expect("Choi matrices are hermitian").min()
}

/// `α_Θ = max_ρ Tr Θ(ρ)`, the top eigenvalue of `Θ*(I)`.
pub fn alpha_of(map: &HermitianMap) -> Result<f64> {
    let alpha = max_eigenvalue(&map.adjoint_identity());
    if alpha <= 0.0 {
        return Err(Error::NonPositiveAlpha { alpha });
    }
    Ok(alpha)
}

/// False when every output is proportional to the identity (checked on a hermitian basis).
pub fn is_nontrivial(map: &HermitianMap) -> bool {
    let d = map.d_in();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in i..d {
            if i == j {
                let mut e = ComplexMatrix::zeros(d, d);
                e[(i, i)] = ONE;
                basis.push(e);
            } else {
                let mut re = ComplexMatrix::zeros(d, d);
                re[(i, j)] = Complex64::new(s, 0.0);
                re[(j, i)] = Complex64::new(s, 0.0);
                basis.push(re);
                let mut im = ComplexMatrix::zeros(d, d);
                im[(i, j)] = Complex64::new(0.0, -s);
                im[(j, i)] = Complex64::new(0.0, s);
                basis.push(im);
            }
        }
    }
    basis.iter().any(|x| {
        let y = map.apply(x).expect("basis matches input dimension");
        traceless_part(&y).frobenius_norm() >= 1e-10
    })
}

/// `X - Tr(X) I/n`: the generalized Bloch-vector part of a square operator.
pub fn traceless_part(x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.rows();
    let shift = x.trace() / n as f64;
    let mut out = x.clone();
    for i in 0..n {
        out[(i, i)] -= shift;
    }
    out
}

/// The optimal structural physical approximation `Θ̄ = δ N + γ Θ` of a hermitian map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaResult {
    pub d_in: usize,
    pub d_out: usize,
    /// Minimal eigenvalue of the Choi matrix of `Θ`.
    pub lambda_prime: f64,
    /// `max(0, -λ')`.
    pub lambda: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    /// Weight of the depolarizing channel in `Θ̄ = p* I/d' + (1 - p*) Θ/α`.
    pub p_star: f64,
    /// Noise level `a = λd` in `Θ̄ = t⁻¹(aN + Θ)`.
    pub a: f64,
    /// Normalizer `t = a d' + α`.
    pub t: f64,
    /// Minimal eigenvalue of the Choi matrix of `Θ̄`.
    pub choi_min_eigenvalue: f64,
    pub theta_bar: KrausMap,
}

impl SpaResult {
    /// `Δ(ρ) = Θ̄(ρ) - γ Θ(ρ)`; equals `δ Tr(ρ) I`.
    pub fn noise_term(&self, map: &HermitianMap, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(&self.theta_bar.apply(rho)? - &map.apply(rho)?.scale_real(self.gamma))
    }
}

pub fn spa_optimal(map: &HermitianMap) -> Result<SpaResult> {
    spa_optimal_with(map, &Tolerances::DEFAULT)
}

pub fn spa_optimal_with(map: &HermitianMap, tol: &Tolerances) -> Result<SpaResult> {
    if !is_nontrivial(map) {
        return Err(Error::TrivialMap);
    }
    let (d, dp) = (map.d_in() as f64, map.d_out() as f64);
    let choi = map.choi();
    let lambda_prime = choi_min_eigenvalue(&choi, tol);
    let lambda = (-lambda_prime).max(0.0);
    let alpha = alpha_of(map)?;
    let t = lambda * d * dp + alpha;
    let gamma = 1.0 / t;
    let delta = lambda * d / t;
    let ratio = lambda * d * dp / alpha;
    let p_star = ratio / (ratio + 1.0);
    let (theta_bar, choi_min_eigenvalue) = noisy_kraus(&choi, lambda * d, t, tol)?;
    Ok(SpaResult {
        d_in: map.d_in(),
        d_out: map.d_out(),
        lambda_prime,
        lambda,
        alpha,
        gamma,
        delta,
        p_star,
        a: lambda * d,
        t,
        choi_min_eigenvalue,
        theta_bar,
    })
}

/// `Θ̄_a = t⁻¹(aN + Θ)` in Kraus form; fails if the result is not CP or can increase trace.
pub fn spa_at(map: &HermitianMap, a: f64, t: f64) -> Result<KrausMap> {
    let tol = Tolerances::DEFAULT;
    if !(t > 0.0) || !t.is_finite() || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite a and t > 0, got a = {a}, t = {t}")));
    }
    let alpha = max_eigenvalue(&map.adjoint_identity());
    let needed = a * map.d_out() as f64 + alpha;
    if t < needed - tol.reconstruction {
        return Err(Error::TraceIncreasing { excess: needed / t - 1.0 });
    }
    Ok(noisy_kraus(&map.choi(), a, t, &tol)?.0)
}

/// Minimal noise level `d·max(0, -λ')` making `aN + Θ` completely positive.
pub fn noise_threshold(map: &HermitianMap) -> f64 {
    let lambda_prime = choi_min_eigenvalue(&map.choi(), &Tolerances::DEFAULT);
    map.d_in() as f64 * (-lambda_prime).max(0.0)
}

fn noisy_kraus(choi: &ChoiMatrix, a: f64, t: f64, tol: &Tolerances) -> Result<(KrausMap, f64)> {
    let d = choi.d_in as f64;
    let mut mat = choi.mat.clone();
    for i in 0..mat.rows() {
        mat[(i, i)] += Complex64::new(a / d, 0.0);
    }
    let noisy = ChoiMatrix { d_in: choi.d_in, d_out: choi.d_out, mat: mat.scale_real(1.0 / t) };
    let lambda_min = choi_min_eigenvalue(&noisy, tol);
    if lambda_min < -tol.reconstruction {
        return Err(Error::NotCp { lambda_min });
    }
    Ok((kraus_from_choi_with(&noisy, tol)?, lambda_min))
}

/// Completes a trace-nonincreasing map with `V₀ = √(I - A₀)` (prepended at index 0).
pub fn dilate_trace_nonincreasing(map: &KrausMap) -> Result<KrausMap> {
    let tol = Tolerances::DEFAULT;
    let a0 = map.effect();
    let top = max_eigenvalue(&a0);
    if top > 1.0 + tol.psd_clip {
        return Err(Error::TraceIncreasing { excess: top - 1.0 });
    }
    let gap = &ComplexMatrix::identity(map.d_in) - &a0;
    let root = psd_sqrt_with(&gap, &tol)?;
    // V₀ lands in the output space; a single discard operator needs d_out >= d_in.
    let v0 = if map.d_out == map.d_in {
        root
    } else if map.d_out > map.d_in {
        ComplexMatrix::from_fn(map.d_out, map.d_in, |r, c| if r < map.d_in { root[(r, c)] } else { ZERO })
    } else {
        return Err(Error::InvalidArgument(format!(
            "dilation with one discard operator needs d_out >= d_in (got {} -> {})",
            map.d_in, map.d_out
        )));
    };
    let mut ops = Vec::with_capacity(map.ops.len() + 1);
    ops.push(v0);
    ops.extend(map.ops.iter().cloned());
    Ok(KrausMap { d_in: map.d_in, d_out: map.d_out, ops })
}

/// One run of the heralded implementation of a trace-nonincreasing map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilisticOutcome {
    /// Index into the dilated Kraus list; 0 is the discard branch.
    pub outcome: usize,
    pub probability: f64,
    pub post_state: ComplexMatrix,
    pub success: bool,
}

/// Branch probabilities and conditional states of the dilated map on a fixed input.
#[derive(Debug, Clone)]
pub struct ProbabilisticRealization {
    probabilities: Vec<f64>,
    cumulative: Vec<f64>,
    posts: Vec<Option<ComplexMatrix>>,
}

impl ProbabilisticRealization {
    pub fn new(map: &KrausMap, rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != map.d_in {
            return Err(Error::dims("realize_probabilistic", map.d_in, rho.dim()));
        }
        let dilated = dilate_trace_nonincreasing(map)?;
        let mut probabilities = Vec::with_capacity(dilated.ops.len());
        let mut posts = Vec::with_capacity(dilated.ops.len());
        for v in &dilated.ops {
            let branch = &(v * rho.matrix()) * &v.adjoint();
            let p = branch.trace().re.max(0.0);
            probabilities.push(p);
            posts.push((p > 1e-14).then(|| branch.scale_real(1.0 / p)));
        }
        let max_probability = probabilities.iter().cloned().fold(0.0, f64::max);
        if max_probability < 1e-14 {
            return Err(Error::DegenerateOutcomes { max_probability });
        }
        let cumulative = probabilities
            .iter()
            .zip(&posts)
            .scan(0.0, |acc, (p, post)| {
                if post.is_some() {
                    *acc += p;
                }
                Some(*acc)
            })
            .collect();
        Ok(ProbabilisticRealization { probabilities, cumulative, posts })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `Tr Λ(ρ)`: total weight of the non-discard branches.
    pub fn success_probability(&self) -> f64 {
        self.probabilities[1..].iter().sum()
    }

    pub fn post_state(&self, outcome: usize) -> Option<&ComplexMatrix> {
        self.posts.get(outcome).and_then(Option::as_ref)
    }

    pub fn sample(&self, rng: &mut Rng) -> ProbabilisticOutcome {
        let outcome = rng.categorical(&self.cumulative);
        ProbabilisticOutcome {
            outcome,
            probability: self.probabilities[outcome],
            post_state: self.posts[outcome].clone().expect("sampled branches have positive weight"),
            success: outcome != 0,
        }
    }
}

pub fn realize_probabilistic(map: &KrausMap, rho: &DensityMatrix, seed: u64) -> Result<ProbabilisticOutcome> {
    let realization = ProbabilisticRealization::new(map, rho)?;
    Ok(realization.sample(&mut Rng::seed(seed)))
}
