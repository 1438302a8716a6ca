use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use super::{BenchConfig, Command, OutputFormat, RunConfig};
use crate::decompose::DEFAULT_SEED;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Human,
    Structured,
}

/// Waring decompositions that avoid a forbidden set of linear forms.
#[derive(Debug, Parser)]
#[command(name = "waring", version)]
pub struct Cli {
    /// Number of variables (default: one past the largest index used).
    #[arg(short = 'n', long, global = true)]
    num_vars: Option<usize>,
    /// Read the form from a file instead of the command line.
    #[arg(long, global = true)]
    form_file: Option<PathBuf>,
    /// Forbidden-set constraints, one polynomial in l0, l1, ... per line.
    #[arg(long = "avoid", global = true)]
    avoid_file: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Working precision in bits for approximate stages.
    #[arg(long = "precision", global = true, default_value_t = 256)]
    precision_bits: u32,
    /// Attempts per random choice.
    #[arg(long, global = true, default_value_t = 64)]
    max_retries: u32,
    /// Fold each coefficient into its linear form.
    #[arg(long, global = true)]
    absorb: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Decompose a form and verify the result.
    Decompose { form: Option<String> },
    /// Re-check a structured decomposition record ("-" for stdin).
    Verify { record: PathBuf },
    /// Print the term bounds for n variables and degree d.
    Bounds { n: u64, d: u64 },
    /// Print the degree-e catalecticant matrix and its rank.
    Catalecticant { e: u32, form: Option<String> },
    /// Print a basis of the degree-e apolar operators.
    Apolar { e: u32, form: Option<String> },
    /// Print the number of essential variables and the splitting change.
    Essential { form: Option<String> },
    /// Print the base points of the degree-e apolar system (n <= 3).
    BasePoints { e: u32, form: Option<String> },
    /// Sweep random forms over an (n, d) grid and print CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        d: Vec<u32>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        hyperplanes: usize,
        /// Coefficients are drawn from [-height, height].
        #[arg(long, default_value_t = 9)]
        height: i64,
    },
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let (command, form_text) = match self.command {
            Sub::Decompose { form } => (Command::Decompose, form),
            Sub::Verify { record } => (Command::Verify { record }, None),
            Sub::Bounds { n, d } => (Command::Bounds { n, d }, None),
            Sub::Catalecticant { e, form } => (Command::Catalecticant { e }, form),
            Sub::Apolar { e, form } => (Command::Apolar { e }, form),
            Sub::Essential { form } => (Command::Essential, form),
            Sub::BasePoints { e, form } => (Command::BasePoints { e }, form),
            Sub::Bench {
                n,
                d,
                trials,
                hyperplanes,
                height,
            } => (
                Command::Bench(BenchConfig {
                    n_values: n,
                    d_values: d,
                    trials,
                    hyperplanes,
                    height,
                }),
                None,
            ),
        };
        RunConfig {
            command,
            num_vars: self.num_vars,
            form_text,
            form_file: self.form_file,
            avoid_file: self.avoid_file,
            seed: self.seed,
            precision_bits: self.precision_bits,
            max_retries: self.max_retries,
            absorb: self.absorb,
            output_format: match self.format {
                Format::Human => OutputFormat::Human,
                Format::Structured => OutputFormat::Structured,
            },
        }
    }
}

pub fn parse_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args).map(Cli::into_config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_after_the_subcommand() {
        let c = parse_args(["waring", "decompose", "-n", "3", "x0*x1^2 + x1*x2^2", "--format", "structured"]).unwrap();
        assert_eq!(c.command, Command::Decompose);
        assert_eq!(c.num_vars, Some(3));
        assert_eq!(c.form_text.as_deref(), Some("x0*x1^2 + x1*x2^2"));
        assert_eq!(c.output_format, OutputFormat::Structured);
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.precision_bits, 256);
    }

    #[test]
    fn bench_lists() {
        let c = parse_args(["waring", "bench", "--n", "3,4,5", "--d", "3", "--trials", "2"]).unwrap();
        let Command::Bench(b) = c.command else { panic!("bench") };
        assert_eq!(b.n_values, vec![3, 4, 5]);
        assert_eq!(b.d_values, vec![3]);
        assert_eq!(b.trials, 2);
    }

    #[test]
    fn negative_bounds_are_rejected() {
        assert!(parse_args(["waring", "bounds", "-1", "3"]).is_err());
    }
}
