use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qspa", version, about = "Structural physical approximations, multicopy observables and spectrum estimation")]
pub struct Cli {
    /// Largest d^n for which multicopy operators are built.
    #[arg(long, global = true, default_value_t = 4096)]
    pub max_operator_dim: usize,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal structural physical approximation of a hermitian map.
    Spa(SpaArgs),
    /// Apply a map to a state, optionally through its heralded dilation.
    Apply(ApplyArgs),
    /// Two-copy entanglement witness (q = 2) or the q-copy quasi-witness.
    Witness(WitnessArgs),
    /// Tsallis, Renyi or von Neumann entropy.
    Entropy(EntropyArgs),
    /// Power moments Tr(rho^k).
    Moments(MomentsArgs),
    /// Spectrum from moments or from a state.
    Spectrum(SpectrumArgs),
    /// Shot-based estimate of a multicopy observable.
    Measure(MeasureArgs),
    /// Numerical checks for the copy-to-power no-go results.
    Nogo {
        #[command(subcommand)]
        check: NogoCommand,
    },
    /// Generate a density matrix.
    GenState(GenStateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spa(_) => "spa",
            Command::Apply(_) => "apply",
            Command::Witness(_) => "witness",
            Command::Entropy(_) => "entropy",
            Command::Moments(_) => "moments",
            Command::Spectrum(_) => "spectrum",
            Command::Measure(_) => "measure",
            Command::Nogo { check: NogoCommand::Gap(_) } => "nogo gap",
            Command::Nogo { check: NogoCommand::Map2(_) } => "nogo map2",
            Command::GenState(_) => "gen-state",
        }
    }
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// `builtin:transpose`, `builtin:depolarize`, or a JSON file holding a Kraus or Choi map.
    #[arg(long)]
    pub map: String,
    /// Input dimension for builtin maps.
    #[arg(long)]
    pub d: Option<usize>,
    /// Output dimension for builtin:depolarize (defaults to --d).
    #[arg(long)]
    pub d_out: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpaArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Noise level a for a non-optimal approximation t⁻¹(aN + Θ); requires --t.
    #[arg(long, requires = "t")]
    pub a: Option<f64>,
    #[arg(long, requires = "a")]
    pub t: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long)]
    pub state: PathBuf,
    /// Run the heralded implementation of a trace-nonincreasing Kraus map.
    #[arg(long)]
    pub realize: bool,
    /// Number of heralded runs (with --realize).
    #[arg(long, default_value_t = 1)]
    pub shots: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Subsystem dimensions `dA,dB`.
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Reduced side for q > 2.
    #[arg(long, default_value = "A")]
    pub side: String,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EntropyKindArg {
    Tsallis,
    Renyi,
    VonNeumann,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, value_enum, default_value = "tsallis")]
    pub kind: EntropyKindArg,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Estimate the q = 2 Tsallis entropy from measurements of I - V on two copies.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Via {
    Shift,
    Eig,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Highest moment (defaults to the state dimension).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "shift")]
    pub via: Via,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Comma-separated moments `m_1,...,m_d`.
    #[arg(long, value_delimiter = ',', conflicts_with = "state")]
    pub moments: Option<Vec<f64>>,
    #[arg(long, required_unless_present = "moments")]
    pub state: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "shift")]
    pub via: Via,
    #[arg(long, requires = "state")]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// `swap`, `shift`, `tsallis2` (I - V), or a JSON matrix file on (C^d)^⊗copies.
    #[arg(long)]
    pub observable: String,
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub copies: usize,
    #[arg(long)]
    pub shots: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum NogoCommand {
    /// Tr(P_sym ρ^⊗n) - Tr ρⁿ.
    Gap(GapArgs),
    /// Deviation of Tr₂∘Sym from (1 - Tr ρ²)I/d + ρ² on random states.
    Map2(Map2Args),
}

#[derive(Debug, Args)]
pub struct GapArgs {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Defaults to the maximally mixed state I/d.
    #[arg(long)]
    pub state: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Map2Args {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Mixed,
    Pure,
    MaximallyMixed,
    Diagonal,
    MaxEntangled,
    Singlet,
    Separable,
}

#[derive(Debug, Args)]
pub struct GenStateArgs {
    #[arg(long, value_enum)]
    pub kind: StateKind,
    #[arg(long)]
    pub d: Option<usize>,
    /// Probabilities for --kind diagonal.
    #[arg(long, value_delimiter = ',')]
    pub probs: Option<Vec<f64>>,
    /// Subsystem dimensions `dA,dB` for --kind separable.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Number of product terms for --kind separable.
    #[arg(long, default_value_t = 4)]
    pub terms: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}
