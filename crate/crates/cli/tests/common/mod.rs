#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, exit }
}

/// Fixed-seed invocations covering every subcommand, run from `tests/fixtures`.
pub const CORPUS: &[Case] = &[
    case("gen_state_mixed", &["gen-state", "--kind", "mixed", "--d", "2", "--seed", "1"], 0),
    case("gen_state_pure", &["gen-state", "--kind", "pure", "--d", "3", "--seed", "2"], 0),
    case("gen_state_separable", &["gen-state", "--kind", "separable", "--dims", "2,2", "--terms", "3", "--seed", "5"], 0),
    case("gen_state_diagonal", &["gen-state", "--kind", "diagonal", "--probs", "0.5,0.3,0.2"], 0),
    case("gen_state_missing_seed", &["gen-state", "--kind", "mixed", "--d", "2"], 2),
    case("spa_transpose_d2", &["spa", "--map", "builtin:transpose", "--d", "2"], 0),
    case("spa_transpose_d3", &["spa", "--map", "builtin:transpose", "--d", "3"], 0),
    case("spa_choi_file", &["spa", "--map", "transpose2_choi.json"], 0),
    case("spa_kraus_file", &["spa", "--map", "damping_kraus.json"], 0),
    case("spa_fixed_noise", &["spa", "--map", "builtin:transpose", "--d", "2", "--a", "1", "--t", "3"], 0),
    case("spa_insufficient_noise", &["spa", "--map", "builtin:transpose", "--d", "2", "--a", "0.5", "--t", "3"], 3),
    case("spa_depolarize_trivial", &["spa", "--map", "builtin:depolarize", "--d", "2"], 2),
    case("apply_transpose", &["apply", "--map", "builtin:transpose", "--d", "2", "--state", "qubit_mixed.json"], 0),
    case(
        "apply_realize",
        &["apply", "--map", "damping_kraus.json", "--state", "qubit_mixed.json", "--realize", "--shots", "1000", "--seed", "3"],
        0,
    ),
    case("apply_invalid_state", &["apply", "--map", "builtin:transpose", "--d", "2", "--state", "not_a_state.json"], 2),
    case("witness_singlet", &["witness", "--state", "singlet.json", "--dims", "2,2", "--q", "2"], 0),
    case(
        "witness_singlet_shots",
        &["witness", "--state", "singlet.json", "--dims", "2,2", "--shots", "10000", "--seed", "11"],
        0,
    ),
    case("witness_q3", &["witness", "--state", "singlet.json", "--dims", "2,2", "--q", "3", "--side", "B"], 0),
    case("witness_budget", &["witness", "--state", "singlet.json", "--dims", "2,2", "--max-operator-dim", "8"], 2),
    case("entropy_tsallis", &["entropy", "--state", "qutrit_diag.json", "--kind", "tsallis", "--q", "2"], 0),
    case("entropy_renyi", &["entropy", "--state", "qutrit_diag.json", "--kind", "renyi", "--q", "3"], 0),
    case("entropy_von_neumann", &["entropy", "--state", "qubit_diag.json", "--kind", "von-neumann"], 0),
    case("entropy_shots", &["entropy", "--state", "qubit_mixed.json", "--shots", "10000", "--seed", "4"], 0),
    case("moments_shift", &["moments", "--state", "qutrit_diag.json", "--k", "4"], 0),
    case("moments_eig", &["moments", "--state", "qutrit_diag.json", "--via", "eig"], 0),
    case("moments_shots", &["moments", "--state", "qubit_diag.json", "--k", "3", "--shots", "20000", "--seed", "9"], 0),
    case("spectrum_moments", &["spectrum", "--moments", "1,0.625,0.4375"], 0),
    case("spectrum_inconsistent", &["spectrum", "--moments", "1,1.3"], 2),
    case("spectrum_singlet_reduced", &["spectrum", "--state", "maximally_mixed_qubit.json", "--via", "shift"], 0),
    case("spectrum_qutrit", &["spectrum", "--state", "qutrit_diag.json"], 0),
    case("spectrum_shots", &["spectrum", "--state", "qubit_diag.json", "--shots", "100000", "--seed", "7"], 0),
    case(
        "measure_swap",
        &["measure", "--observable", "swap", "--state", "qubit_diag.json", "--copies", "2", "--shots", "100000", "--seed", "7"],
        0,
    ),
    case(
        "measure_shift3",
        &["measure", "--observable", "shift", "--state", "qubit_diag.json", "--copies", "3", "--shots", "10000", "--seed", "2"],
        0,
    ),
    case("measure_missing_seed", &["measure", "--observable", "swap", "--state", "qubit_diag.json", "--shots", "10"], 2),
    case("nogo_gap", &["nogo", "gap", "--d", "2", "--n", "2", "--state", "maximally_mixed_qubit.json"], 0),
    case("nogo_gap_n3", &["nogo", "gap", "--n", "3", "--state", "qutrit_diag.json"], 0),
    case("nogo_map2_d2", &["nogo", "map2", "--d", "2", "--trials", "100", "--seed", "1"], 0),
    case("nogo_map2_d3", &["nogo", "map2", "--d", "3", "--trials", "100", "--seed", "1"], 0),
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests").join("golden").join(format!("{name}.json"))
}

/// Runs the binary on one case; returns (exit code, stdout bytes).
pub fn run_case(case: &Case) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_qspa"))
        .args(case.args)
        .current_dir(manifest_dir().join("tests").join("fixtures"))
        .env_remove("QSPA_TOL_HERMITICITY")
        .env_remove("QSPA_TOL_PSD_CLIP")
        .env_remove("QSPA_TOL_RECONSTRUCTION")
        .env_remove("QSPA_TOL_JACOBI")
        .env_remove("QSPA_TOL_JACOBI_MAX_SWEEPS")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}
