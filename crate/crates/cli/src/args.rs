use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "delta-chow",
    version,
    about = "Differential Chow forms and differential resultants"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    /// Wall-clock limit in seconds for elimination; exceeding it exits with code 1.
    #[arg(long, global = true, value_parser = positive_seconds)]
    pub deadline: Option<f64>,
    /// Seed for the numeric fiber sampler (symbolic commands ignore it).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Ceiling on the Gröbner basis size; exceeding it exits with code 1.
    #[arg(long, global = true)]
    pub max_basis: Option<usize>,
    /// Ceiling on the number of terms of an intermediate polynomial.
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    /// Print elimination progress to stderr.
    #[arg(long, global = true)]
    pub trace: bool,
}

impl GlobalOpts {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Field {
    /// The rationals with the zero derivation.
    #[value(name = "Q")]
    Q,
    /// Rational functions in `t` with `d/dt`.
    #[value(name = "Qt")]
    Qt,
}

/// Ring declaration and polynomial input shared by the polynomial commands.
#[derive(Args, Debug)]
pub struct RingArgs {
    /// Comma-separated differential indeterminates, e.g. `y1,y2`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ring: Vec<String>,
    /// Comma-separated parameters (generic constants of the coefficient field).
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<String>,
    /// Base field.
    #[arg(long, value_enum, default_value_t = Field::Q)]
    pub field: Field,
    /// Ranking: `orderly`, `elim:y1<y2` or `block:[y1|y2]`.
    #[arg(long, default_value = "orderly")]
    pub ranking: String,
}

/// Polynomials given inline or in a file, one per line.
#[derive(Args, Debug)]
pub struct PolyInput {
    /// Differential polynomials, e.g. `"y1'^2-4*y1"`.
    pub polys: Vec<String>,
    /// UTF-8 file with one polynomial per line; `#` starts a comment.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Characteristic set with the dimension and order it presents.
    Charset {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        input: PolyInput,
    },
    /// Ritt reduction of a polynomial by a chain.
    Reduce {
        #[command(flatten)]
        ring: RingArgs,
        /// Chain element; repeat for each element.
        #[arg(long = "by", required = true)]
        by: Vec<String>,
        /// Polynomial to reduce.
        poly: String,
        /// Only remove proper derivatives of leaders.
        #[arg(long)]
        partial: bool,
    },
    /// Differential Chow form of the prime ideal presented by a characteristic set.
    Chow {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        input: PolyInput,
    },
    /// Chow form of the hypersurface defined by one irreducible polynomial.
    ChowHyper {
        #[command(flatten)]
        ring: RingArgs,
        poly: String,
    },
    /// Generalized Chow form for generic polynomials of given orders and degrees;
    /// with no polynomials the ideal is zero and the result is a differential resultant.
    Gchow {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        input: PolyInput,
        /// Orders of the generic polynomials, one per block.
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u32>,
        /// Degrees of the generic polynomials, one per block.
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u32>,
    },
    /// Differential resultant of n+1 generic polynomials in n variables.
    Dres {
        /// Number of differential indeterminates.
        #[arg(long)]
        n: usize,
        /// Orders of the n+1 generic polynomials.
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u32>,
        /// Degrees of the n+1 generic polynomials.
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u32>,
        /// Also build the 14×14 matrix (n = 1, orders 0,1, degrees 2,2) and divide its determinant.
        #[arg(long)]
        matrix: bool,
    },
    /// Verify a Chow form against the chain it came from.
    Verify {
        /// Chow form JSON as written by `chow`, `chow-hyper` or `gchow`.
        #[arg(long)]
        chow: PathBuf,
        /// Chain JSON as written by `charset`.
        #[arg(long)]
        ideal: PathBuf,
        /// Add the numeric fiber check (zero-dimensional ideals only).
        #[arg(long)]
        fiber: bool,
        /// Samples for the fiber check.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Chow quasi-variety relations for a support of given index.
    Quasivariety {
        /// Index `n,d,h,g,m`.
        #[arg(long)]
        index: String,
        /// JSON array of support monomials in the u's, e.g. `["u00'*u01"]`.
        #[arg(long)]
        support: PathBuf,
    },
    /// Dimension and order of the ideal presented by a characteristic set.
    Dims {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        input: PolyInput,
    },
    /// Print the flag reference as Markdown.
    #[command(hide = true)]
    Docs,
}
