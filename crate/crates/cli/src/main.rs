//! `detcorr`: detector-error correction from the command line.
//!
//! Exit codes: 0 success, 2 input or format error, 3 singular model,
//! 4 resource limit.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use detcorr::formats::{parse_collective_counts, parse_counts, parse_model, DistributionFile, ModelFile, SCHEMA_VERSION};
use detcorr::observables::{correction_factor, squeezing_corrected, SpinCounts, SqueezingInput};
use detcorr::statesim::{
    default_grid, stabilizer_experiment, witness_experiment, write_stabilizer_csv, write_witness_csv, StabilizerConfig,
    WitnessConfig,
};
use detcorr::{
    calibrate, correct, expect_corrected, expect_raw, unfold_collective, CalibrationRun, CollectiveCounts, CountsRecord,
    DetectorModel, Error, OutcomeIndex, PauliString,
};

#[derive(Parser, Debug)]
#[command(name = "detcorr", version, about = "Correct detector errors in multi-qubit measurement data")]
struct Cli {
    /// Worker threads for sampling (default: all cores). Results do not depend on it.
    #[arg(long, global = true, env = "DETCORR_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate per-qubit flip rates from runs with known prepared states.
    Calibrate(CalibrateArgs),
    /// Reconstruct the true outcome distribution from counts.
    Invert(InvertArgs),
    /// Unfold excitation-number counts from a collective detector.
    CollectiveInvert(CollectiveArgs),
    /// Raw and corrected expectation of a Pauli-string observable.
    Expect(ExpectArgs),
    /// Raw and corrected spin-squeezing parameter.
    Squeeze(SqueezeArgs),
    /// Stabilizer expectations of GHZ and linear-cluster states.
    SimulateFig1(Fig1Args),
    /// Entanglement witness versus preparation noise.
    SimulateFig2(Fig2Args),
}

#[derive(Args, Debug)]
struct Output {
    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ModelSource {
    /// Detector model JSON file.
    #[arg(long, conflicts_with_all = ["p0", "p1", "rates"])]
    model: Option<PathBuf>,
    /// Uniform probability of reading 1 when the qubit is 0.
    #[arg(long, requires = "p1", conflicts_with = "rates")]
    p0: Option<f64>,
    /// Uniform probability of reading 0 when the qubit is 1.
    #[arg(long, requires = "p0", conflicts_with = "rates")]
    p1: Option<f64>,
    /// Per-qubit rates `p0:p1,p0:p1,…` starting with qubit 0.
    #[arg(long)]
    rates: Option<String>,
}

impl ModelSource {
    fn resolve(&self, n: usize) -> anyhow::Result<DetectorModel> {
        let model = if let Some(path) = &self.model {
            parse_model(&read(path)?)?
        } else if let (Some(p0), Some(p1)) = (self.p0, self.p1) {
            DetectorModel::uniform(n, p0, p1)?
        } else if let Some(rates) = &self.rates {
            DetectorModel::from_pairs(&parse_rates(rates)?)?
        } else {
            return Err(Error::Parse("a detector model is required: --model, --p0/--p1 or --rates".into()).into());
        };
        if model.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: model.n() }.into());
        }
        Ok(model)
    }
}

fn parse_rates(s: &str) -> Result<Vec<(f64, f64)>, Error> {
    s.split(',')
        .map(|pair| {
            let (a, b) = pair.split_once(':').ok_or_else(|| Error::Parse(format!("bad rate pair `{pair}`")))?;
            let p = |x: &str| x.trim().parse::<f64>().map_err(|e| Error::Parse(format!("`{x}`: {e}")));
            Ok((p(a)?, p(b)?))
        })
        .collect()
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    /// Counts from the all-zeros preparation.
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Counts from the all-ones preparation.
    #[arg(long)]
    ones: Option<PathBuf>,
    /// Counts for another known preparation, as `BITSTRING=PATH`.
    #[arg(long = "run", value_name = "BITSTRING=PATH")]
    runs: Vec<String>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct InvertArgs {
    /// Counts JSON file.
    #[arg(long)]
    counts: PathBuf,
    #[command(flatten)]
    model: ModelSource,
    /// Project the result onto the probability simplex.
    #[arg(long)]
    project: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct CollectiveArgs {
    /// Collective counts: JSON array indexed by the number of ones.
    #[arg(long)]
    counts: PathBuf,
    #[arg(long)]
    p0: f64,
    #[arg(long)]
    p1: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct ExpectArgs {
    #[arg(long)]
    counts: PathBuf,
    /// Pauli string, qubit 0 leftmost, optionally with a coefficient (`-1*ZZI`).
    #[arg(long)]
    observable: String,
    #[command(flatten)]
    model: ModelSource,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct SqueezeArgs {
    /// Counts measured along z (counts file or collective array).
    #[arg(long)]
    z: PathBuf,
    /// Counts measured along x (counts file or collective array).
    #[arg(long)]
    x: PathBuf,
    /// Symmetric flip rate.
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct SimArgs {
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Symmetric detector flip rate.
    #[arg(long, default_value_t = 0.03)]
    p: f64,
    /// Shots per measurement setting.
    #[arg(long, default_value_t = 5000)]
    shots: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Bootstrap resamples for the resampled error bars.
    #[arg(long, default_value_t = 200)]
    resamples: usize,
}

#[derive(Args, Debug)]
struct Fig1Args {
    #[command(flatten)]
    sim: SimArgs,
    /// Depolarizing strength of the preparation.
    #[arg(long, default_value_t = 0.0)]
    p_n: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct Fig2Args {
    #[command(flatten)]
    sim: SimArgs,
    /// Comma-separated preparation-noise grid (default 0 to 0.10 in steps of 0.005).
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[command(flatten)]
    out: Output,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &Output, bytes: &[u8]) -> anyhow::Result<()> {
    match &out.output {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(bytes).context("writing stdout"),
    }
}

fn emit_json(out: &Output, value: serde_json::Value) -> anyhow::Result<()> {
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    emit(out, s.as_bytes())
}

enum Known<'a> {
    Zeros,
    Ones,
    Bits(&'a str),
}

fn load_run(known: Known<'_>, path: &Path) -> anyhow::Result<CalibrationRun> {
    let counts = parse_counts(&read(path)?)?;
    let n = counts.n();
    let known = match known {
        Known::Zeros => OutcomeIndex(0),
        Known::Ones => OutcomeIndex((1usize << n) - 1),
        Known::Bits(bits) => {
            let (idx, len) = OutcomeIndex::parse(bits)?;
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len }.into());
            }
            idx
        }
    };
    Ok(CalibrationRun { known, counts })
}

fn cmd_calibrate(args: &CalibrateArgs) -> anyhow::Result<()> {
    let mut runs = Vec::new();
    if let Some(path) = &args.zeros {
        runs.push(load_run(Known::Zeros, path)?);
    }
    if let Some(path) = &args.ones {
        runs.push(load_run(Known::Ones, path)?);
    }
    for arg in &args.runs {
        let (bits, path) = arg
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("--run expects BITSTRING=PATH, got `{arg}`")))?;
        runs.push(load_run(Known::Bits(bits), Path::new(path))?);
    }
    if runs.is_empty() {
        return Err(Error::Parse("no calibration runs given".into()).into());
    }
    let cal = calibrate(&runs)?;
    emit_json(&args.out, serde_json::to_value(ModelFile::from_calibration(&cal))?)
}

fn cmd_invert(args: &InvertArgs) -> anyhow::Result<()> {
    let record = parse_counts(&read(&args.counts)?)?;
    let model = args.model.resolve(record.n())?;
    let mut dist = correct(&record, &model)?;
    if args.project {
        dist = dist.projected();
    }
    emit_json(&args.out, serde_json::to_value(DistributionFile::from(&dist))?)
}

fn cmd_collective(args: &CollectiveArgs) -> anyhow::Result<()> {
    let counts = parse_collective_counts(&read(&args.counts)?)?;
    let unfolded = unfold_collective(&counts, args.p0, args.p1)?;
    let mut file = DistributionFile::from(&unfolded.distribution);
    file.condition_number = Some(unfolded.condition_number);
    emit_json(&args.out, serde_json::to_value(file)?)
}

fn cmd_expect(args: &ExpectArgs) -> anyhow::Result<()> {
    let record = parse_counts(&read(&args.counts)?)?;
    let obs: PauliString = args.observable.parse()?;
    let model = args.model.resolve(record.n())?;
    let raw = expect_raw(&record, &obs)?;
    let corrected = expect_corrected(&record, &obs, &model)?;
    let factor = correction_factor(&obs.clone().with_coefficient(1.0), &model)?;
    emit_json(
        &args.out,
        json!({
            "schema_version": SCHEMA_VERSION,
            "observable": obs.to_string(),
            "support": obs.support(),
            "shots": record.total(),
            "raw": { "value": raw.value, "sigma": raw.sigma },
            "corrected": { "value": corrected.value, "sigma": corrected.sigma },
            "correction_factor": factor.uniform_scale(),
        }),
    )
}

enum SpinData {
    Individual(CountsRecord),
    Collective(CollectiveCounts),
}

impl SpinData {
    fn load(path: &Path) -> anyhow::Result<Self> {
        let text = read(path)?;
        if text.trim_start().starts_with('[') {
            Ok(SpinData::Collective(parse_collective_counts(&text)?))
        } else {
            Ok(SpinData::Individual(parse_counts(&text)?))
        }
    }

    fn counts(&self) -> SpinCounts<'_> {
        match self {
            SpinData::Individual(r) => SpinCounts::Individual(r),
            SpinData::Collective(c) => SpinCounts::Collective(c),
        }
    }
}

fn cmd_squeeze(args: &SqueezeArgs) -> anyhow::Result<()> {
    let z = SpinData::load(&args.z)?;
    let x = SpinData::load(&args.x)?;
    let r = squeezing_corrected(&SqueezingInput::new(z.counts(), x.counts(), args.p)?)?;
    emit_json(
        &args.out,
        json!({
            "schema_version": SCHEMA_VERSION,
            "n": z.counts().n(),
            "p": args.p,
            "xi_raw": r.xi_raw,
            "xi_raw_sigma": r.xi_raw_sigma,
            "xi_corrected": r.xi_corrected,
            "xi_corrected_sigma": r.xi_corrected_sigma,
            "xi_corrected_sigma_scaled": r.xi_corrected_sigma_scaled,
            "xi_d": r.xi_d,
            "negative_radicand": r.negative_radicand,
            "jz2_raw": r.jz.raw.second,
            "jz2_corrected": r.jz.corrected.second,
            "jx_raw": r.jx.raw.mean,
            "jx_corrected": r.jx.corrected.mean,
        }),
    )
}

fn cmd_fig1(args: &Fig1Args) -> anyhow::Result<()> {
    let cfg = StabilizerConfig {
        n: args.sim.n,
        p: args.sim.p,
        p_n: args.p_n,
        shots: args.sim.shots,
        seed: args.sim.seed,
        resamples: args.sim.resamples,
    };
    let rows = stabilizer_experiment(&cfg)?;
    let mut buf = Vec::new();
    write_stabilizer_csv(&rows, &mut buf)?;
    emit(&args.out, &buf)
}

fn cmd_fig2(args: &Fig2Args) -> anyhow::Result<()> {
    let cfg = WitnessConfig {
        n: args.sim.n,
        p: args.sim.p,
        grid: args.grid.clone().unwrap_or_else(default_grid),
        shots: args.sim.shots,
        seed: args.sim.seed,
        resamples: args.sim.resamples,
    };
    let rows = witness_experiment(&cfg)?;
    let mut buf = Vec::new();
    write_witness_csv(&rows, &mut buf)?;
    emit(&args.out, &buf)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::SingularModel { .. }) => 3,
        Some(Error::ResourceLimit { .. }) => 4,
        _ => 2,
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    match &cli.command {
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::Invert(a) => cmd_invert(a),
        Command::CollectiveInvert(a) => cmd_collective(a),
        Command::Expect(a) => cmd_expect(a),
        Command::Squeeze(a) => cmd_squeeze(a),
        Command::SimulateFig1(a) => cmd_fig1(a),
        Command::SimulateFig2(a) => cmd_fig2(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_pairs() {
        assert_eq!(parse_rates("0.1:0.2, 0:0.05").unwrap(), vec![(0.1, 0.2), (0.0, 0.05)]);
        assert!(parse_rates("0.1").is_err());
        assert!(parse_rates("a:0.1").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::SingularModel { qubit: 0, gap: 0.0 }.into()), 3);
        assert_eq!(exit_code(&Error::ResourceLimit { what: "x", n: 30, limit: 14 }.into()), 4);
        assert_eq!(exit_code(&Error::EmptyCounts.into()), 2);
        assert_eq!(exit_code(&anyhow!("io")), 2);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
