//! Command-line front end: coherence generating power of unitaries and
//! channels, the two-copy swap protocol, Monte Carlo estimates, random-matrix
//! statistics, mixture scans, and asymmetry generating power.
//!
//! Results go to stdout as JSON (tables optionally to files as CSV); errors
//! go to stderr. Exit codes: 0 success, 1 numerical failure, 2 invalid
//! input or usage.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use cgp::asymmetry::{self, HamiltonianSpectrum};
use cgp::io;
use cgp::power;
use cgp::protocol;
use cgp::statistics;
use cgp::{fixtures, CMat, Error, Result};

#[derive(Parser)]
#[command(
    name = "cgp",
    about = "Coherence generating power of unitaries and unital channels",
    version
)]
struct Cli {
    /// Size of the worker thread pool (default: one per CPU)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

/// Flags that pick one generated unitary. Exactly one must be set (enforced
/// per-subcommand through an `ArgGroup` that also admits `--in` where file
/// input is allowed).
#[derive(Args)]
struct GeneratorArgs {
    /// Dimension of the generated unitary
    #[arg(long)]
    dim: Option<usize>,

    /// Seed for random generators (and for Monte Carlo estimates)
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Discrete Fourier matrix
    #[arg(long)]
    fourier: bool,

    /// Identity matrix
    #[arg(long)]
    identity: bool,

    /// Real Hadamard matrix (dimension must be a power of two)
    #[arg(long)]
    hadamard: bool,

    /// Fourier matrix with rows I and J exchanged
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    rowswap: Option<Vec<usize>>,

    /// Haar-random unitary drawn from --seed
    #[arg(long)]
    random_haar: bool,

    /// Random permutation-phase (incoherent) unitary drawn from --seed
    #[arg(long)]
    random_incoherent: bool,
}

impl GeneratorArgs {
    fn generate(&self) -> Result<CMat> {
        let dim = self.dim.ok_or_else(|| {
            Error::InvalidArgument("--dim is required with a generator flag".into())
        })?;
        if dim < 2 {
            return Err(Error::InvalidArgument(format!(
                "--dim must be at least 2, got {dim}"
            )));
        }
        if self.fourier {
            Ok(fixtures::fourier(dim))
        } else if self.identity {
            Ok(fixtures::identity(dim))
        } else if self.hadamard {
            fixtures::hadamard(dim)
        } else if let Some(ij) = &self.rowswap {
            fixtures::fourier_rowswap(dim, ij[0], ij[1])
        } else if self.random_haar {
            Ok(fixtures::random_haar(dim, self.seed.into()))
        } else if self.random_incoherent {
            Ok(fixtures::random_incoherent(dim, self.seed.into()))
        } else {
            unreachable!("clap group guarantees one generator flag")
        }
    }
}

/// A unitary from either a JSON file or a generator flag.
#[derive(Args)]
struct UnitarySource {
    /// JSON file holding the matrix
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,

    #[command(flatten)]
    generator: GeneratorArgs,
}

impl UnitarySource {
    fn resolve(&self) -> Result<CMat> {
        match &self.input {
            Some(path) => io::load_matrix(path),
            None => self.generator.generate(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form CGP of a unitary
    #[command(group(
        ArgGroup::new("source")
            .required(true)
            .args(["input", "fourier", "identity", "hadamard", "rowswap", "random_haar", "random_incoherent"])
    ))]
    Unitary {
        #[command(flatten)]
        source: UnitarySource,
    },

    /// Closed-form CGP of a unital channel given by Kraus operators
    Channel {
        /// JSON file holding the Kraus operators
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },

    /// Two-copy swap protocol trace for a unitary, optionally with a Monte
    /// Carlo estimate alongside
    #[command(group(
        ArgGroup::new("source")
            .required(true)
            .args(["input", "fourier", "identity", "hadamard", "rowswap", "random_haar", "random_incoherent"])
    ))]
    Protocol {
        #[command(flatten)]
        source: UnitarySource,

        /// Also run the Monte Carlo estimator
        #[arg(long)]
        mc: bool,

        /// Monte Carlo sample count
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },

    /// Sample the normalized CGP distribution over Haar-random unitaries
    Sample {
        /// Dimension of the sampled unitaries
        #[arg(long)]
        dim: usize,

        /// Number of Haar samples
        #[arg(long, default_value_t = 100_000)]
        samples: usize,

        /// Master seed
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Histogram bin count over [0, 1]
        #[arg(long, default_value_t = 100)]
        bins: usize,

        /// Write the histogram as CSV to this file
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,

        /// Write the raw samples as CSV to this file
        #[arg(long, value_name = "FILE")]
        dump: Option<PathBuf>,
    },

    /// Fit the power law `variance ~ A / d^alpha` across dimensions
    Scaling {
        /// Comma-separated dimensions (at least three distinct)
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,

        /// Haar samples per dimension
        #[arg(long, default_value_t = 10_000)]
        samples: usize,

        /// Master seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Mean, variance, skewness, and excess kurtosis of normalized CGP
    Moments {
        /// Dimension of the sampled unitaries
        #[arg(long)]
        dim: usize,

        /// Number of Haar samples
        #[arg(long, default_value_t = 10_000)]
        samples: usize,

        /// Master seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Normalized CGP over the simplex of mixtures of three unitaries
    Scan {
        /// JSON file holding an array of exactly three matrices
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,

        /// Barycentric grid subdivisions per edge
        #[arg(long, default_value_t = 50)]
        steps: usize,

        /// Write results to this file instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,

        /// Output format
        #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
        format: String,
    },

    /// Asymmetry generating power of a channel for a given spectrum
    Agp {
        /// JSON file holding the Kraus operators
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,

        /// Comma-separated energy levels (nondegenerate)
        #[arg(long, value_delimiter = ',', required = true)]
        spectrum: Vec<f64>,

        /// Also run the Monte Carlo estimator
        #[arg(long)]
        mc: bool,

        /// Monte Carlo sample count
        #[arg(long, default_value_t = 100_000)]
        samples: usize,

        /// Monte Carlo seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Emit a generated unitary as JSON
    #[command(group(
        ArgGroup::new("source")
            .required(true)
            .args(["fourier", "identity", "hadamard", "rowswap", "random_haar", "random_incoherent"])
    ))]
    Fixtures {
        #[command(flatten)]
        generator: GeneratorArgs,

        /// Write to this file instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "--threads must be at least 1".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Unitary { source } => {
            let u = source.resolve()?;
            let result = power::cgp_unitary(&u)?;
            print_json(&result)
        }
        Command::Channel { input } => {
            let e = io::load_kraus(&input)?;
            print_json(&power::cgp_channel(&e))
        }
        Command::Protocol {
            source,
            mc,
            samples,
        } => {
            let u = source.resolve()?;
            let trace = protocol::simulate_protocol_unitary(&u)?;
            let (mc_mean, mc_se) = if mc {
                require_positive(samples, "--samples")?;
                let est =
                    protocol::monte_carlo_cgp_unitary(&u, samples, source.generator.seed.into())?;
                (Some(est.mean), Some(est.std_error))
            } else {
                (None, None)
            };
            print_json(&serde_json::json!({
                "s_omega": trace.s_expectation_omega,
                "s_omega_tilde": trace.s_expectation_omega_tilde,
                "cgp": trace.cgp_value,
                "mc_mean": mc_mean,
                "mc_se": mc_se,
            }))
        }
        Command::Sample {
            dim,
            samples,
            seed,
            bins,
            out,
            dump,
        } => {
            require_dim(dim)?;
            require_positive(samples, "--samples")?;
            require_positive(bins, "--bins")?;
            let summary = statistics::sample_cgp_distribution(dim, samples, seed.into(), bins);
            if let Some(path) = &out {
                io::write_histogram_csv(path, &summary.histogram)?;
            }
            if let Some(path) = &dump {
                let raw = statistics::sample_normalized_cgp(dim, samples, seed.into());
                io::write_samples_csv(path, &raw)?;
            }
            print_json(&summary)
        }
        Command::Scaling {
            dims,
            samples,
            seed,
        } => {
            let fit = statistics::variance_scaling_fit(&dims, samples, seed.into())?;
            print_json(&fit)
        }
        Command::Moments { dim, samples, seed } => {
            require_dim(dim)?;
            if samples < 2 {
                return Err(Error::InvalidArgument(
                    "--samples must be at least 2 for moments".into(),
                ));
            }
            let raw = statistics::sample_normalized_cgp(dim, samples, seed.into());
            let m = statistics::moments_summary(&raw)?;
            print_json(&serde_json::json!({
                "dim": dim,
                "n_samples": samples,
                "seed": seed,
                "mean": m.mean,
                "variance": m.variance,
                "skewness": m.skewness,
                "excess_kurtosis": m.excess_kurtosis,
            }))
        }
        Command::Scan {
            input,
            steps,
            out,
            format,
        } => {
            require_positive(steps, "--steps")?;
            let us = io::load_unitary_list(&input)?;
            let points = power::mixture_scan(&us, steps)?;
            match (out, format.as_str()) {
                (Some(path), "csv") => io::write_scan_csv(&path, &points),
                (Some(path), _) => {
                    let mut text = serde_json::to_string_pretty(&points)?;
                    text.push('\n');
                    std::fs::write(path, text).map_err(Error::from)
                }
                (None, "csv") => io::write_scan_rows(std::io::stdout().lock(), &points),
                (None, _) => print_json(&points),
            }
        }
        Command::Agp {
            input,
            spectrum,
            mc,
            samples,
            seed,
        } => {
            let e = io::load_kraus(&input)?;
            let h = HamiltonianSpectrum::new(spectrum)?;
            let result = asymmetry::agp(&e, &h)?;
            let (mc_mean, mc_se) = if mc {
                require_positive(samples, "--samples")?;
                let est = asymmetry::agp_monte_carlo(&e, &h, samples, seed.into())?;
                (Some(est.mean), Some(est.std_error))
            } else {
                (None, None)
            };
            print_json(&serde_json::json!({
                "value": result.value,
                "lower_bound": result.lower_bound,
                "upper_bound": result.upper_bound,
                "mc_mean": mc_mean,
                "mc_se": mc_se,
            }))
        }
        Command::Fixtures { generator, out } => {
            let u = generator.generate()?;
            match out {
                Some(path) => io::save_matrix(&path, &u),
                None => {
                    print!("{}", io::matrix_to_json_string(&u)?);
                    Ok(())
                }
            }
        }
    }
}

fn require_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "--dim must be at least 2, got {dim}"
        )));
    }
    Ok(())
}

fn require_positive(value: usize, flag: &str) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidArgument(format!(
            "{flag} must be at least 1"
        )));
    }
    Ok(())
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}
