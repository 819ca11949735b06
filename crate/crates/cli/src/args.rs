use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use selfdual_core::Mode;

#[derive(Parser, Debug)]
#[command(name = "selfdual", version, about = "Connections, Hales-Jewett words and finite Ramsey witnesses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Worker threads for searches and axiom checks; 1 runs sequentially.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Maximum number of search nodes before giving up.
    #[arg(long = "node-budget", global = true)]
    pub node_budget: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Jsonl,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Conn,
    Surj,
    Inj,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Conn => Mode::Connections,
            ModeArg::Surj => Mode::SurjectionsOnly,
            ModeArg::Inj => Mode::InjectionsOnly,
        }
    }
}

#[derive(Args, Debug)]
pub struct SpaceArgs {
    #[arg(long = "L")]
    pub len: usize,
    #[arg(long = "K")]
    pub image: usize,
    /// Alphabet size.
    #[arg(long, default_value_t = 0)]
    pub alphabet: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Conn)]
    pub mode: ModeArg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List F_{L,K} in enumeration order.
    Enumerate(SpaceArgs),
    /// Size of F_{L,K}.
    Count(SpaceArgs),
    /// Check a connection and echo its canonical form.
    Validate {
        conn: String,
        /// Alphabet size; inferred from the letters used when omitted.
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// The composite `outer · inner`.
    Compose {
        outer: String,
        inner: String,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// The initial segment of a connection up to class `n`.
    Segment {
        conn: String,
        n: usize,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// The connection `w` with `w · base = candidate`, if there is one.
    Reduct {
        candidate: String,
        base: String,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// All `n`-segments of reducts of `base`.
    SegmentsAt {
        base: String,
        n: usize,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// Ramsey witness searches.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Finite checks of the approximation axioms.
    Axioms(AxiomsArgs),
    /// The maps between words, connections and cylinders.
    #[command(subcommand)]
    Maps(MapsCommand),
}

#[derive(Args, Debug)]
pub struct CopyArgs {
    #[arg(long = "K")]
    pub image: Option<usize>,
    #[arg(long = "M")]
    pub inner: Option<usize>,
    #[command(flatten)]
    pub common: SearchArgs,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 2)]
    pub colors: usize,
    /// Search only this size and print a bad coloring if one exists.
    #[arg(long = "N")]
    pub size: Option<usize>,
    /// Largest size tried when looking for the least witness.
    #[arg(long = "max-N", default_value_t = 8)]
    pub max_n: usize,
    /// Also print the bad coloring one below the witness.
    #[arg(long)]
    pub certificate: bool,
    /// Re-check a coloring file instead of searching.
    #[arg(long)]
    pub verify: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum SearchCommand {
    /// Copies of F_{M,K} in F_{N,K}; connection mode unless `--mode` says otherwise.
    Sd {
        #[command(flatten)]
        copy: CopyArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Conn)]
        mode: ModeArg,
    },
    /// Classical Ramsey: K-subsets of N monochromatic on some M-subset.
    Ramsey(CopyArgs),
    /// Dual Ramsey: partitions of N into K blocks.
    Dual(CopyArgs),
    /// Hales-Jewett: monochromatic combinatorial lines in A^N.
    Hj {
        /// Alphabet size.
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[command(flatten)]
        common: SearchArgs,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct AxiomsArgs {
    #[command(subcommand)]
    pub instance: Option<AxiomsCommand>,
    #[arg(long = "L", default_value_t = 4)]
    pub len: usize,
    /// Largest alphabet size in the universe.
    #[arg(long, default_value_t = 1)]
    pub alphabet: usize,
}

#[derive(Subcommand, Debug)]
pub enum AxiomsCommand {
    /// Find a reduct of `base` whose fan over `t` is decided by the open set.
    A4 {
        base: String,
        t: String,
        /// Members of the open set (connections with one class more than `t`).
        #[arg(long = "open")]
        open: Vec<String>,
        /// How many classes a reduct may lose relative to `base`.
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        alphabet: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum MapsCommand {
    /// Word to 0-segment of a reduct of `base`.
    Sigma {
        word: String,
        base: String,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// 0-segment of a reduct of `base` back to a word.
    SigmaInv {
        segment: String,
        base: String,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// Move a connection to the extended alphabet (or back with `--inverse`).
    Shift {
        conn: String,
        #[command(flatten)]
        shift: ShiftArgs,
    },
    /// Embed into the cylinder over `base` (or project back with `--inverse`).
    Theta {
        conn: String,
        #[arg(long)]
        base: String,
        #[command(flatten)]
        shift: ShiftArgs,
    },
    /// The rigid surjection read off `w0` followed by left-variable words.
    LeftWord { w0: String, xs: Vec<String> },
    /// Replace the first `n` positions of a witness by the identity.
    Freeze {
        witness: String,
        n: usize,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// Stable segments of a coherent chain.
    Fuse {
        chain: Vec<String>,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// `0, 1, …, K−1` followed by zeros.
    Projection {
        #[arg(long = "N")]
        len: usize,
        #[arg(long = "K")]
        image: usize,
    },
    /// Decompose `w` as `w0` followed by substituted `xs` in increasing order.
    Span { w: String, w0: String, xs: Vec<String> },
}

#[derive(Args, Debug)]
pub struct ShiftArgs {
    /// Absorb this many leading classes as new letters; without it, one new letter is added.
    #[arg(long)]
    pub absorb: Option<usize>,
    /// Alphabet size of the unshifted side; inferred when omitted.
    #[arg(long)]
    pub alphabet: Option<usize>,
    #[arg(long)]
    pub inverse: bool,
}
