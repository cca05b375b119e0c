use qspa::channels::{
    is_cp_with, is_tp_with, spa_at, spa_optimal_with, CpCheck, ProbabilisticRealization, TpCheck,
};
use qspa::measure::{estimate_moments_shots_within, estimate_multicopy_with, MulticopyShotEstimate};
use qspa::multicopy::{
    moment_within, quasi_witness_qn_within, shift_operator_within, swap_operator, witness_observable, witness_report,
    Side, WITNESS_TOL,
};
use qspa::nogo::{map2_linearization_check, nogo_gap_within};
use qspa::spectrum::{estimate_spectrum, spectrum_from_state_within, MomentPath, MomentVector, SpectrumEstimate};
use qspa::states::{
    max_entangled, random_mixed, random_pure, random_separable, renyi_entropy, singlet, tsallis_entropy,
    von_neumann_entropy, EntropyValue,
};
use qspa::{Budget, ComplexMatrix, DensityMatrix, HermitianMap, KrausMap, MulticopyObservable, Rng, Tolerances};
use serde::Serialize;
use serde_json::Value;

use crate::args::*;
use crate::input::{load_map, load_matrix, load_state};
use crate::report::{usage, CliResult};

pub struct Outcome {
    pub seed: Option<u64>,
    pub result: Value,
}

fn outcome(seed: Option<u64>, result: impl Serialize) -> CliResult<Outcome> {
    Ok(Outcome { seed, result: serde_json::to_value(result).expect("results serialize") })
}

fn require_seed(seed: Option<u64>, what: &str) -> CliResult<u64> {
    seed.ok_or_else(|| usage(format!("{what} samples randomness and needs an explicit --seed")))
}

fn positive_shots(shots: u64) -> CliResult<u64> {
    if shots == 0 {
        return Err(usage("--shots must be positive"));
    }
    Ok(shots)
}

pub fn run(command: &Command, tol: &Tolerances, budget: Budget) -> CliResult<Outcome> {
    match command {
        Command::Spa(a) => spa(a, tol),
        Command::Apply(a) => apply(a, tol),
        Command::Witness(a) => witness(a, tol, budget),
        Command::Entropy(a) => entropy(a, tol, budget),
        Command::Moments(a) => moments(a, tol, budget),
        Command::Spectrum(a) => spectrum(a, tol, budget),
        Command::Measure(a) => measure(a, tol, budget),
        Command::Nogo { check: NogoCommand::Gap(a) } => nogo_gap(a, tol, budget),
        Command::Nogo { check: NogoCommand::Map2(a) } => nogo_map2(a),
        Command::GenState(a) => gen_state(a),
    }
}

#[derive(Serialize)]
struct SpaAtReport {
    a: f64,
    t: f64,
    theta_bar: KrausMap,
    cp: CpCheck,
    tp: TpCheck,
}

fn spa(args: &SpaArgs, tol: &Tolerances) -> CliResult<Outcome> {
    let map = load_map(&args.map, tol)?;
    match (args.a, args.t) {
        (Some(a), Some(t)) => {
            let theta_bar = spa_at(&map, a, t)?;
            let wrapped = HermitianMap::Kraus(theta_bar.clone());
            let report =
                SpaAtReport { a, t, cp: is_cp_with(&wrapped, tol), tp: is_tp_with(&wrapped, tol), theta_bar };
            outcome(None, report)
        }
        _ => outcome(None, spa_optimal_with(&map, tol)?),
    }
}

#[derive(Serialize)]
struct ApplyReport {
    output: ComplexMatrix,
    trace: f64,
    cp: CpCheck,
    tp: TpCheck,
}

#[derive(Serialize)]
struct RealizeReport {
    success_probability: f64,
    branch_probabilities: Vec<f64>,
    shots: u64,
    successes: u64,
    success_frequency: f64,
    std_error: f64,
    /// Heralded state of the first successful run, if any.
    first_success: Option<qspa::channels::ProbabilisticOutcome>,
}

fn apply(args: &ApplyArgs, tol: &Tolerances) -> CliResult<Outcome> {
    let map = load_map(&args.map, tol)?;
    let rho = load_state(&args.state, tol)?;
    if !args.realize {
        let output = map.apply(rho.matrix())?;
        let trace = output.trace().re;
        return outcome(None, ApplyReport { output, trace, cp: is_cp_with(&map, tol), tp: is_tp_with(&map, tol) });
    }
    let seed = require_seed(args.seed, "apply --realize")?;
    let shots = positive_shots(args.shots)?;
    let HermitianMap::Kraus(kraus) = &map else {
        return Err(usage("--realize needs a map given by Kraus operators"));
    };
    let realization = ProbabilisticRealization::new(kraus, &rho)?;
    let mut rng = Rng::seed(seed);
    let mut successes = 0u64;
    let mut first_success = None;
    for _ in 0..shots {
        let run = realization.sample(&mut rng);
        if run.success {
            successes += 1;
            if first_success.is_none() {
                first_success = Some(run);
            }
        }
    }
    let p = successes as f64 / shots as f64;
    let report = RealizeReport {
        success_probability: realization.success_probability(),
        branch_probabilities: realization.probabilities().to_vec(),
        shots,
        successes,
        success_frequency: p,
        std_error: (p * (1.0 - p) / shots as f64).sqrt(),
        first_success,
    };
    outcome(Some(seed), report)
}

fn bipartite_dims(dims: &[usize]) -> CliResult<(usize, usize)> {
    match dims {
        [a, b] if *a > 0 && *b > 0 => Ok((*a, *b)),
        _ => Err(usage("--dims takes two positive integers dA,dB")),
    }
}

#[derive(Serialize)]
struct WitnessShots {
    side_a: MulticopyShotEstimate,
    side_b: MulticopyShotEstimate,
}

#[derive(Serialize)]
struct WitnessOut {
    #[serde(flatten)]
    report: qspa::multicopy::WitnessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    shots: Option<WitnessShots>,
}

#[derive(Serialize)]
struct QuasiWitnessOut {
    q: usize,
    side: Side,
    value: f64,
    entangled_detected: bool,
    tol: f64,
}

fn witness(args: &WitnessArgs, tol: &Tolerances, budget: Budget) -> CliResult<Outcome> {
    let rho = load_state(&args.state, tol)?;
    let dims = bipartite_dims(&args.dims)?;
    if args.q < 2 {
        return Err(usage("--q must be at least 2"));
    }
    if args.q > 2 {
        if args.shots.is_some() {
            return Err(usage("shot estimates are available for q = 2 only"));
        }
        let side: Side = args.side.parse()?;
        let value = quasi_witness_qn_within(&rho, dims, side, args.q, budget)?;
        let report = QuasiWitnessOut { q: args.q, side, value, entangled_detected: value < -WITNESS_TOL, tol: WITNESS_TOL };
        return outcome(None, report);
    }
    budget.check((dims.0 * dims.1).pow(2))?;
    let report = witness_report(&rho, dims)?;
    let (seed, shots) = match args.shots {
        None => (None, None),
        Some(shots) => {
            let seed = require_seed(args.seed, "witness --shots")?;
            let shots = positive_shots(shots)?;
            let mut rng = Rng::seed(seed);
            let side_a = estimate_multicopy_with(&witness_observable(dims, Side::A), &rho, shots, &mut rng.split(), budget)?;
            let side_b = estimate_multicopy_with(&witness_observable(dims, Side::B), &rho, shots, &mut rng.split(), budget)?;
            (Some(seed), Some(WitnessShots { side_a, side_b }))
        }
    };
    outcome(seed, WitnessOut { report, shots })
}

/// `I - V` on two copies; its mean is the q = 2 Tsallis entropy.
fn tsallis2_observable(d: usize) -> MulticopyObservable {
    let v = swap_operator(d);
    let op = &ComplexMatrix::identity(d * d) - &v.op;
    MulticopyObservable { n: 2, d, op, hermitian: true }
}

#[derive(Serialize)]
struct EntropyOut {
    #[serde(flatten)]
    value: EntropyValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimate: Option<MulticopyShotEstimate>,
}

fn entropy(args: &EntropyArgs, tol: &Tolerances, budget: Budget) -> CliResult<Outcome> {
    let rho = load_state(&args.state, tol)?;
    let value = match args.kind {
        EntropyKindArg::Tsallis => tsallis_entropy(&rho, args.q)?,
        EntropyKindArg::Renyi => renyi_entropy(&rho, args.q)?,
        EntropyKindArg::VonNeumann => von_neumann_entropy(&rho),
    };
    let (seed, estimate) = match args.shots {
        None => (None, None),
        Some(shots) => {
            if !matches!(args.kind, EntropyKindArg::Tsallis) || args.q != 2.0 {
                return Err(usage("shot estimates are available for the q = 2 Tsallis entropy only"));
            }
            let seed = require_seed(args.seed, "entropy --shots")?;
            let shots = positive_shots(shots)?;
            let est =
                estimate_multicopy_with(&tsallis2_observable(rho.dim()), &rho, shots, &mut Rng::seed(seed), budget)?;
            (Some(seed), Some(est))
        }
    };
    outcome(seed, EntropyOut { value, estimate })
}

fn path(via: Via) -> MomentPath {
    match via {
        Via::Shift => MomentPath::Shift,
        Via::Eig => MomentPath::Eig,
    }
}

#[derive(Serialize)]
struct MomentsOut {
    via: MomentPath,
    moments: Vec<f64>,
}

fn moments(args: &MomentsArgs, tol: &Tolerances, budget: Budget) -> CliResult<Outcome> {
    let rho = load_state(&args.state, tol)?;
    let k_max = args.k.unwrap_or(rho.dim());
    if k_max == 0 {
        return Err(usage("--k must be positive"));
    }
    if let Some(shots) = args.shots {
        let seed = require_seed(args.seed, "moments --shots")?;
        let est = estimate_moments_shots_within(&rho, k_max, positive_shots(shots)?, seed, budget)?;
        return outcome(Some(seed), est);
    }
    let moments = match args.via {
        Via::Shift => (1..=k_max).map(|k| moment_within(&rho, k, budget)).collect::<Result<Vec<_>, _>>()?,
        Via::Eig => {
            let p = rho.eigenvalues();
            (1..=k_max).map(|k| p.iter().map(|x| x.powi(k as i32)).sum()).collect()
        }
    };
    outcome(None, MomentsOut { via: path(args.via), moments })
}

#[derive(Serialize)]
struct ShotSpectrumOut {
    estimate: SpectrumEstimate,
    moments: Vec<f64>,
    std_errors: Vec<f64>,
    imag: Vec<f64>,
    observables_used: usize,
    shots_per_observable: u64,
}

fn spectrum(args: &SpectrumArgs, tol: &Tolerances, budget: Budget) -> CliResult<Outcome> {
    if let Some(m) = &args.moments {
        if m.is_empty() {
            return Err(usage("--moments needs at least one value"));
        }
        return outcome(None, estimate_spectrum(&MomentVector { d: m.len(), m: m.clone() })?);
    }
    let state = args.state.as_ref().ok_or_else(|| usage("spectrum needs --moments or --state"))?;
    let rho = load_state(state, tol)?;
    match args.shots {
        None => outcome(None, spectrum_from_state_within(&rho, path(args.via), budget)?),
        Some(shots) => {
            let seed = require_seed(args.seed, "spectrum --shots")?;
            let est = estimate_moments_shots_within(&rho, rho.dim(), positive_shots(shots)?, seed, budget)?;
            let estimate = estimate_spectrum(&est.moments)?;
            let report = ShotSpectrumOut {
                estimate,
                moments: est.moments.m,
                std_errors: est.std_errors,
                imag: est.imag,
                observables_used: est.observables_used,
                shots_per_observable: est.shots_per_observable,
            };
            outcome(Some(seed), report)
        }
    }
}

#[derive(Serialize)]
struct MeasureOut {
    observable: String,
    copies: usize,
    exact_re: f64,
    exact_im: f64,
    #[serde(flatten)]
    estimate: MulticopyShotEstimate,
}

fn measure(args: &MeasureArgs, tol: &Tolerances, budget: Budget) -> CliResult<Outcome> {
    let rho = load_state(&args.state, tol)?;
    let seed = require_seed(args.seed, "measure")?;
    let shots = positive_shots(args.shots)?;
    let d = rho.dim();
    let n = args.copies;
    if n == 0 {
        return Err(usage("--copies must be positive"));
    }
    let observable = match args.observable.as_str() {
        "swap" | "tsallis2" if n != 2 => return Err(usage(format!("{} acts on exactly 2 copies", args.observable))),
        "swap" => swap_operator(d),
        "tsallis2" => tsallis2_observable(d),
        "shift" => shift_operator_within(d, n, budget)?,
        file => {
            let op = load_matrix(std::path::Path::new(file))?;
            budget.check(op.rows())?;
            MulticopyObservable::new(n, d, op)?
        }
    };
    let exact = observable.mean(&rho)?;
    let estimate = estimate_multicopy_with(&observable, &rho, shots, &mut Rng::seed(seed), budget)?;
    let report =
        MeasureOut { observable: args.observable.clone(), copies: n, exact_re: exact.re, exact_im: exact.im, estimate };
    outcome(Some(seed), report)
}

fn nogo_gap(args: &GapArgs, tol: &Tolerances, budget: Budget) -> CliResult<Outcome> {
    let rho = match (&args.state, args.d) {
        (Some(path), d) => {
            let rho = load_state(path, tol)?;
            if let Some(d) = d {
                if d != rho.dim() {
                    return Err(usage(format!("--d {d} does not match the state dimension {}", rho.dim())));
                }
            }
            rho
        }
        (None, Some(d)) if d > 0 => DensityMatrix::maximally_mixed(d),
        (None, _) => return Err(usage("nogo gap needs --state or a positive --d")),
    };
    outcome(None, nogo_gap_within(&rho, args.n, budget)?)
}

fn nogo_map2(args: &Map2Args) -> CliResult<Outcome> {
    let seed = require_seed(args.seed, "nogo map2")?;
    outcome(Some(seed), map2_linearization_check(args.d, args.trials, seed)?)
}

fn gen_state(args: &GenStateArgs) -> CliResult<Outcome> {
    let need_d = || match args.d {
        Some(d) if d > 0 => Ok(d),
        _ => Err(usage("this kind needs a positive --d")),
    };
    let (seed, rho) = match args.kind {
        StateKind::Mixed => {
            let seed = require_seed(args.seed, "gen-state --kind mixed")?;
            (Some(seed), random_mixed(need_d()?, seed))
        }
        StateKind::Pure => {
            let seed = require_seed(args.seed, "gen-state --kind pure")?;
            (Some(seed), random_pure(need_d()?, seed))
        }
        StateKind::Separable => {
            let seed = require_seed(args.seed, "gen-state --kind separable")?;
            let dims = bipartite_dims(args.dims.as_deref().unwrap_or(&[]))?;
            if args.terms == 0 {
                return Err(usage("--terms must be positive"));
            }
            (Some(seed), random_separable(dims.0, dims.1, args.terms, seed))
        }
        StateKind::MaximallyMixed => (None, DensityMatrix::maximally_mixed(need_d()?)),
        StateKind::MaxEntangled => (None, max_entangled(need_d()?)),
        StateKind::Singlet => (None, singlet()),
        StateKind::Diagonal => {
            let probs = args.probs.as_ref().ok_or_else(|| usage("--kind diagonal needs --probs"))?;
            (None, DensityMatrix::diagonal(probs)?)
        }
    };
    outcome(seed, rho)
}
