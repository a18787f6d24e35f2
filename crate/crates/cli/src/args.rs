use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use steiner_core::analysis::TableIndex;
use steiner_core::Normalization;

#[derive(Debug, Parser)]
#[command(name = "steiner", version, about = "Steiner distance hypermatrices of trees and their gradient resultants")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = NormArg::Unscaled)]
    pub normalization: NormArg,
    /// Resultant cache directory (overrides STEINER_CACHE).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// CSV rows instead of newline-delimited JSON.
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum NormArg {
    #[value(name = "paper-g")]
    #[serde(rename = "paper-g")]
    Unscaled,
    #[value(name = "full-Dp")]
    #[serde(rename = "full-Dp")]
    FullDp,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Unscaled => Normalization::Unscaled,
            NormArg::FullDp => Normalization::FullDp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Witness,
    Modular,
    ZeroCertify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexArg {
    Kn,
    Nk,
}

impl From<IndexArg> for TableIndex {
    fn from(i: IndexArg) -> Self {
        match i {
            IndexArg::Kn => TableIndex::Kn,
            IndexArg::Nk => TableIndex::Nk,
        }
    }
}

/// A single tree, or every unlabeled tree on `--n` vertices.
#[derive(Debug, Clone, Args, Serialize)]
pub struct TreeSelection {
    /// Tree file (edge list or graph6) or an inline graph6 string.
    #[arg(long)]
    pub tree: Option<String>,
    #[arg(long, conflicts_with = "tree")]
    pub n: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Enumerate trees on `--n` vertices.
    Trees {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        labeled: bool,
    },
    /// Hypermatrix, Steiner form and gradient system of one tree.
    Steiner {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        k: u32,
    },
    /// Gradient resultant of one tree or of every tree on `--n` vertices.
    Resultant {
        #[command(flatten)]
        select: TreeSelection,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Stop CRT once the reconstruction is stable (labeled heuristic).
        #[arg(long)]
        early_termination: bool,
    },
    Verify {
        #[command(subcommand)]
        subject: Subject,
    },
    /// Resultant equality across all trees on `--n` vertices.
    Conjecture {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Number of primes in modular mode.
        #[arg(long, default_value_t = 5)]
        primes: usize,
    },
    /// Newton search for a nonzero complex zero of the gradient.
    Nullvector {
        #[command(flatten)]
        select: TreeSelection,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
        #[arg(long, default_value_t = 0.5)]
        damping: f64,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Prime factorization of an integer.
    Factor {
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Computed resultants against the built-in table row.
    CompareTable {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = IndexArg::Kn)]
        table_index: IndexArg,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subject")]
pub enum Subject {
    /// Distance-matrix determinants of all trees up to `--max-n`.
    GrahamPollak {
        #[arg(long, default_value_t = 9)]
        max_n: usize,
    },
    /// Vanishing pattern of the resultant by parity of `k`.
    Parity {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Witness)]
        mode: Mode,
    },
    /// Row-difference closed form, forced candidate and distance oracle.
    Propositions {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 6])]
        k: Vec<u32>,
    },
    /// Leaf-deletion identity on random rational points.
    ProofIdentity {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 6])]
        k: Vec<u32>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}
