use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::Format;

/// Shift specs: `full:N`, `sft:N:forbid=11,212`, `sgap:<gaps>`,
/// `fatsgap:N=3:<gaps>`, `kucherenko:<gaps>`, `coded:file=<path>`, with
/// gap sets `all`, `powers:K`, `list:0,2`, `arith:START:STEP`.
///
/// Map specs: `alphabeta:alpha=A:beta=B`, `negbeta:beta=B`,
/// `pwm:file=<path>` (lines `lo hi slope intercept`). Numbers may be
/// rationals (`9/5`, `0.3`), `golden` or `sqrt(x)`.
#[derive(Debug, Parser, Serialize)]
#[command(name = "symdyn", version, about = "Symbolic dynamics toolkit", long_about = None)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct ShiftArgs {
    /// Shift spec string.
    #[arg(long)]
    pub shift: String,
    /// Length up to which the language must be exact (family default if
    /// omitted).
    #[arg(long)]
    pub horizon: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub shift: ShiftArgs,
    /// Potential file with `word value` lines; zero if omitted.
    #[arg(long)]
    pub pot: Option<PathBuf>,
    /// Block length of the transfer graph. Defaults to what the potential
    /// and the memory of a finite-type shift need; other shifts are
    /// replaced by their block-length Markov approximation (default 4).
    #[arg(long)]
    pub block: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyMethod {
    Growth,
    Perron,
    Root,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionKind {
    /// Generator suffixes, concatenations, generator prefixes.
    Natural,
    /// Split at the first and last marker symbol 1.
    Filler,
    /// Paths through a closed component of a Markov diagram.
    Hofbauer,
}

#[derive(Debug, Args, Serialize)]
pub struct DecompositionArgs {
    #[arg(long, value_enum, default_value = "natural")]
    pub kind: DecompositionKind,
    /// Shift spec (natural and filler kinds).
    #[arg(long)]
    pub shift: Option<String>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Map spec (hofbauer kind).
    #[arg(long)]
    pub map: Option<String>,
    /// Diagram depth (hofbauer kind).
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
    /// Level of the cut set (hofbauer kind).
    #[arg(long, default_value_t = 1)]
    pub cut: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseChoice {
    Auto,
    One,
    Two,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Topological entropy by growth, Perron root or characteristic root.
    Entropy {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, value_enum, default_value = "growth")]
        method: EntropyMethod,
        /// Largest word length for the growth method.
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Bracket width for the root method.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// State limit for the Perron method.
        #[arg(long, default_value_t = 1_000_000)]
        max_states: usize,
    },
    /// Exact word counts for lengths 0..=n.
    Count {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Words of length n in lexicographic order.
    Words {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Print at most this many words.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Collection counts of a decomposition and the obstruction bound.
    Decompose {
        #[command(flatten)]
        source: DecompositionArgs,
        /// Largest length counted.
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
    /// Connector search for the fattened cores of a decomposition.
    SpecCheck {
        #[command(flatten)]
        source: DecompositionArgs,
        /// Fattening parameter.
        #[arg(long = "M", default_value_t = 1)]
        m: usize,
        /// Longest connector tried.
        #[arg(long, default_value_t = 6)]
        tmax: usize,
        /// Longest core word tested.
        #[arg(long, default_value_t = 8)]
        len: usize,
    },
    /// Left and right constraint words.
    Constraints {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Longest extension searched.
        #[arg(long, default_value_t = 4)]
        ext: usize,
        #[arg(long, value_enum, default_value = "both")]
        side: Side,
    },
    /// Markov diagram of a piecewise monotone map.
    Hofbauer {
        /// Map spec string.
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Use floating point even when the parameters are rational.
        #[arg(long)]
        float: bool,
        /// Directory for `edges.txt` and `vertices.txt`.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Pressure of beta times the potential.
    Pressure {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
    /// Equilibrium Markov measure with a weak Gibbs audit.
    Equilibrium {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Word length of the Gibbs audit.
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Equilibrium measures along an increasing beta schedule.
    Zerotemp {
        #[command(flatten)]
        pot: PotentialArgs,
        /// `start:ratio:end` (geometric) or a comma list.
        #[arg(long, default_value = "2:2:65536")]
        betas: String,
    },
    /// Maximal ergodic average and an optimal periodic orbit.
    Maximize {
        #[command(flatten)]
        pot: PotentialArgs,
        /// Use floating point even when every value is rational.
        #[arg(long)]
        float: bool,
    },
    /// Coded shift glued from a word list.
    Glue {
        #[command(flatten)]
        shift: ShiftArgs,
        /// File with one word per line.
        #[arg(long)]
        words: PathBuf,
        /// Longest connector.
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_states: usize,
    },
    /// Entropy of equilibrium measures against the maximizing measures.
    Profile {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, default_value = "1:2:4096")]
        betas: String,
    },
    /// Fiber sizes of the counting map on a fat S-gap shift.
    Theoremc {
        /// Alphabet size.
        #[arg(long = "N", default_value_t = 3)]
        n_symbols: usize,
        #[arg(long, default_value_t = 2)]
        ell: u32,
        #[arg(long, value_enum, default_value = "auto")]
        case: CaseChoice,
        #[arg(long, default_value = "powers:2")]
        gaps: String,
        /// Decomposition the map is applied to; `auto` takes filler for
        /// case one and natural otherwise.
        #[arg(long, value_enum)]
        kind: Option<DecompositionKind>,
    },
    /// Concatenation counts A(n, k) of a fat S-gap shift.
    Ank {
        #[arg(long = "N", default_value_t = 3)]
        n_symbols: usize,
        #[arg(long, default_value = "powers:2")]
        gaps: String,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Entropy { .. } => "entropy",
            Command::Count { .. } => "count",
            Command::Words { .. } => "words",
            Command::Decompose { .. } => "decompose",
            Command::SpecCheck { .. } => "spec-check",
            Command::Constraints { .. } => "constraints",
            Command::Hofbauer { .. } => "hofbauer",
            Command::Pressure { .. } => "pressure",
            Command::Equilibrium { .. } => "equilibrium",
            Command::Zerotemp { .. } => "zerotemp",
            Command::Maximize { .. } => "maximize",
            Command::Glue { .. } => "glue",
            Command::Profile { .. } => "profile",
            Command::Theoremc { .. } => "theoremc",
            Command::Ank { .. } => "ank",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn uppercase_flags_parse() {
        let cli = Cli::try_parse_from(["symdyn", "theoremc", "--N", "3", "--ell", "3"]).unwrap();
        assert!(matches!(cli.command, Command::Theoremc { n_symbols: 3, ell: 3, .. }));
        let cli = Cli::try_parse_from(["symdyn", "spec-check", "--shift", "full:2", "--M", "2"]).unwrap();
        assert!(matches!(cli.command, Command::SpecCheck { m: 2, .. }));
    }
}
