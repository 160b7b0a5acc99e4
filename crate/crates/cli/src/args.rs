//! Command-line definitions. Every subcommand's arguments serialize, so a
//! run manifest can echo them and `rerun` can replay them.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "ehrlab", version, about = "Ehrhart spectra, haystacks, random walks on SL_r(Z) and spectral measures")]
pub struct Cli {
    /// Directory for output files and the run manifest; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: TopCommand,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum TopCommand {
    #[command(flatten)]
    Run(Command),
    /// Replay the configuration recorded in a run manifest.
    Rerun(RerunArgs),
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize, PartialEq)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Lattice-point counts and the Ehrhart polynomial of a simplex.
    Ehrhart(EhrhartArgs),
    /// Volume or Ehrhart spectrum of a point set inside a box.
    Spectrum(SpectrumArgs),
    /// Search for v0, n and γ with v0 + n·γ(v_k) in E.
    Witness(WitnessArgs),
    /// Greedy haystack construction or certification.
    Haystack(HaystackArgs),
    /// Cesàro hit frequencies of γ_n(v) in a target set.
    RwDensity(ExperimentArgs),
    /// Cesàro averages of e(⟨ξ, γ_n v⟩).
    RwWeyl(ExperimentArgs),
    /// Proximality of an integer matrix.
    Proximal(ProximalArgs),
    /// Correlations μ(B ∩ w_1.B ∩ ⋯ ∩ w_k.B).
    DynCorr(DynCorrArgs),
    /// Atoms of the spectral measure of B.
    DynSpectral(DynSpectralArgs),
    /// Cesàro averages of μ(B ∩ γ_n(v).B) along random walks.
    DynCesaro(DynWalkArgs),
    /// The set of n where μ(B ∩ γ_n(v).B) > c with probability above δ.
    DynCset(DynCsetArgs),
    /// Search for γ with μ(B ∩ γ(v_1).B ∩ ⋯ ∩ γ(v_r).B) > 0.
    DynGamma(DynGammaArgs),
    /// Cosets of the subgroup generated by n!·e_i and the mass of B on each.
    Components(ComponentsArgs),
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct EhrhartArgs {
    /// Simplex JSON file.
    #[arg(long)]
    pub simplex: String,
    /// Report the count of t·Δ as well.
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long, default_value_t = 100_000_000)]
    pub max_points: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Volume,
    Ehrhart,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub pointset: String,
    /// Lower corner of the vertex box, e.g. `-5,-5`.
    #[arg(long, allow_hyphen_values = true)]
    pub lo: String,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: String,
    #[arg(long, value_enum, default_value = "volume")]
    pub kind: SpectrumKind,
    #[arg(long, default_value_t = 50_000_000)]
    pub max_subsets: u64,
    /// Report what was found when the subset budget runs out.
    #[arg(long)]
    pub allow_partial: bool,
    /// Box sizes for a density estimate, e.g. `10,20,40`.
    #[arg(long)]
    pub density: Option<String>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct WitnessArgs {
    #[arg(long)]
    pub pointset: String,
    /// Basis `v_1;…;v_r` inline or a matrix literal file (rows are vectors).
    #[arg(long, allow_hyphen_values = true)]
    pub basis: String,
    /// Maximum word length.
    #[arg(long = "L", default_value_t = 6)]
    pub max_word_len: usize,
    /// Largest n.
    #[arg(long = "N", default_value_t = 6)]
    pub max_n: u64,
    #[arg(long, default_value_t = 1)]
    pub min_n: u64,
    /// v0 ranges over E ∩ [-R, R]^r.
    #[arg(long, default_value_t = 9)]
    pub v0_radius: i64,
    /// Random walks tried after word enumeration fails.
    #[arg(long, default_value_t = 0)]
    pub walks: usize,
    #[arg(long, default_value_t = 20)]
    pub walk_steps: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also compare the Ehrhart polynomial of the images with that of n·Δ.
    #[arg(long)]
    pub check_inclusion: bool,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct HaystackArgs {
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Candidates have sup-norm at most this.
    #[arg(long, default_value_t = 10)]
    pub max_norm: i64,
    #[arg(long, default_value_t = 20)]
    pub target: usize,
    /// Draw candidates from this point set instead of Z^r.
    #[arg(long)]
    pub pointset: Option<String>,
    /// Skip candidates on a coordinate axis.
    #[arg(long)]
    pub exclude_axes: bool,
    /// Certify a haystack JSON file instead of building one.
    #[arg(long)]
    pub check: Option<String>,
    /// Also ask whether K hyperplanes cover the result (small sets only).
    #[arg(long)]
    pub cover: Option<usize>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct ExperimentArgs {
    /// Experiment config JSON.
    #[arg(long)]
    pub config: String,
    #[arg(long)]
    pub seed: u64,
    /// Override the horizon N of the config.
    #[arg(long = "N")]
    pub horizon: Option<usize>,
    /// Override the trial count M of the config.
    #[arg(long = "M")]
    pub trials: Option<usize>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct ProximalArgs {
    /// Matrix inline by rows (`2,1;1,1`) or a matrix literal file.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    /// Relative gap below which the verdict is borderline.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct SystemArgs {
    /// System JSON file.
    #[arg(long)]
    pub system: String,
    /// Set JSON file.
    #[arg(long = "B")]
    pub set: String,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct DynCorrArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sys: SystemArgs,
    /// Shift vectors w_1, …, w_k (repeat the flag).
    #[arg(long = "v", allow_hyphen_values = true, required = true)]
    pub vectors: Vec<String>,
    /// Also report μ(∪_m mλ.B).
    #[arg(long, allow_hyphen_values = true)]
    pub orbit: Option<String>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct DynSpectralArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sys: SystemArgs,
    /// Frequency cutoff for circle rotations.
    #[arg(long = "K", default_value_t = 100)]
    pub truncation: u64,
    /// Check the Fourier identity at this vector.
    #[arg(long, allow_hyphen_values = true)]
    pub bochner: Option<String>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct DynWalkArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sys: SystemArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
    #[arg(long = "N", default_value_t = 1000)]
    pub horizon: usize,
    #[arg(long = "M", default_value_t = 50)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    /// Generating measure JSON; the default measure when absent.
    #[arg(long)]
    pub measure: Option<String>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct DynCsetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub walk: DynWalkArgs,
    /// Threshold c as a rational, e.g. `1/20`.
    #[arg(long)]
    pub c: String,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct DynGammaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sys: SystemArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub basis: String,
    #[arg(long = "L", default_value_t = 4)]
    pub max_word_len: usize,
    /// Shear exponents range over [-M*, M*].
    #[arg(long = "M-star", default_value_t = 3)]
    pub shear_range: i64,
    #[arg(long)]
    pub seed: u64,
    /// Extra γ_0 candidates drawn from a random walk.
    #[arg(long, default_value_t = 0)]
    pub walk_candidates: usize,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize, PartialEq)]
pub struct ComponentsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sys: SystemArgs,
    #[arg(long = "n", default_value_t = 1)]
    pub n: u32,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ehrhart(_) => "ehrhart",
            Command::Spectrum(_) => "spectrum",
            Command::Witness(_) => "witness",
            Command::Haystack(_) => "haystack",
            Command::RwDensity(_) => "rw-density",
            Command::RwWeyl(_) => "rw-weyl",
            Command::Proximal(_) => "proximal",
            Command::DynCorr(_) => "dyn-corr",
            Command::DynSpectral(_) => "dyn-spectral",
            Command::DynCesaro(_) => "dyn-cesaro",
            Command::DynCset(_) => "dyn-cset",
            Command::DynGamma(_) => "dyn-gamma",
            Command::Components(_) => "components",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Witness(a) => a.seed,
            Command::RwDensity(a) | Command::RwWeyl(a) => Some(a.seed),
            Command::DynCesaro(a) => Some(a.seed),
            Command::DynCset(a) => Some(a.walk.seed),
            Command::DynGamma(a) => Some(a.seed),
            _ => None,
        }
    }

    /// Arguments naming files whose contents feed the run.
    pub fn input_files(&self) -> Vec<String> {
        let sys = |s: &SystemArgs| vec![s.system.clone(), s.set.clone()];
        let mut out = match self {
            Command::Ehrhart(a) => vec![a.simplex.clone()],
            Command::Spectrum(a) => vec![a.pointset.clone()],
            Command::Witness(a) => vec![a.pointset.clone(), a.basis.clone()],
            Command::Haystack(a) => a.pointset.iter().chain(&a.check).cloned().collect(),
            Command::RwDensity(a) | Command::RwWeyl(a) => vec![a.config.clone()],
            Command::Proximal(a) => vec![a.gamma.clone()],
            Command::DynCorr(a) => {
                let mut v = sys(&a.sys);
                v.extend(a.vectors.iter().cloned());
                v
            }
            Command::DynSpectral(a) => sys(&a.sys),
            Command::DynCesaro(a) => sys(&a.sys).into_iter().chain(a.measure.clone()).collect(),
            Command::DynCset(a) => sys(&a.walk.sys).into_iter().chain(a.walk.measure.clone()).collect(),
            Command::DynGamma(a) => {
                let mut v = sys(&a.sys);
                v.push(a.basis.clone());
                v
            }
            Command::Components(a) => sys(&a.sys),
        };
        out.retain(|p| Path::new(p).is_file());
        out
    }
}
